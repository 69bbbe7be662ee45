use std::collections::BTreeMap;

use proptest::prelude::*;
use rug::Rational;

use bautin_lab::bautin::{bautin_index, bautin_multiplicity_at, transcendence_index, MonomialFamily, MultiplicityOutcome};
use bautin_lab::bounds::{c_bound, small_disc_radius, z_bound_general, z_bound_unit, zero_bound_disc};
use bautin_lab::diophantine::{scan_graph_points, PointStatus};
use bautin_lab::generators::{gen_lacunary, sample_random, CoefficientRule, ExponentRule, LacunarySpec, RandomSpec};
use bautin_lab::series::PowerTable;
use bautin_lab::zeros::{candidate_polynomials, Certification, CountOptions, ZeroContext};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn rank_trace_grows_by_single_steps(seed in any::<u64>(), d in 1usize..3, square in any::<bool>()) {
        let fam = if square { MonomialFamily::square(d) } else { MonomialFamily::total(d) };
        let k = fam.default_k_max();
        let f = sample_random(&RandomSpec { seed, k, origin_zero: false });
        let rep = bautin_index(&f, &fam, k).unwrap();
        let mut prev = 0;
        for &(_, r) in &rep.rank_trace {
            prop_assert!(r >= prev && r <= prev + 1);
            prev = r;
        }
        if let Some(b) = rep.index() {
            let m = rep.m;
            prop_assert!(b + 1 >= m);
            prop_assert_eq!(rep.rank_trace[b].1, m);
            if b > 0 {
                prop_assert_eq!(rep.rank_trace[b - 1].1, m - 1);
            }
        }
    }

    #[test]
    fn bautin_index_sits_between_transcendence_indices(seed in any::<u64>(), d in 1usize..3) {
        let k = MonomialFamily::total(2 * d).default_k_max();
        let f = sample_random(&RandomSpec { seed, k, origin_zero: true });
        let sq = MonomialFamily::square(d);
        let b = bautin_index(&f, &sq, sq.default_k_max()).unwrap().index();
        let lo = transcendence_index(&f, d, k).unwrap().index();
        let hi = transcendence_index(&f, 2 * d, k).unwrap().index();
        prop_assert!(b.is_some());
        if let (Some(lo), Some(b), Some(hi)) = (lo, b, hi) {
            prop_assert!(lo <= b && b <= hi, "nu_d {} b {} nu_2d {}", lo, b, hi);
        }
    }

    #[test]
    fn multiplicity_is_stable_in_u_order(seed in any::<u64>(), k_u in 1usize..5) {
        let f = sample_random(&RandomSpec { seed, k: 12, origin_zero: true });
        let a = bautin_multiplicity_at(&f, 1, k_u).unwrap();
        let b = bautin_multiplicity_at(&f, 1, k_u + 5).unwrap();
        if let MultiplicityOutcome::Finite { .. } = a.outcome {
            prop_assert_eq!(a.outcome, b.outcome);
        }
    }
}

fn three_term_lacunary() -> impl Strategy<Value = (Vec<u64>, Vec<Rational>)> {
    (1u64..3)
        .prop_flat_map(|n1| (Just(n1), (n1 * n1 + 1)..(n1 * n1 + 3)))
        .prop_flat_map(|(n1, n2)| (Just(n1), Just(n2), (n2 * n2 + 1)..(n2 * n2 + 4)))
        .prop_flat_map(|(n1, n2, n3)| {
            let nonzero = (1i64..6, any::<bool>(), 1i64..6).prop_map(|(n, neg, d)| q(if neg { -n } else { n }, d));
            (Just(vec![n1, n2, n3]), proptest::collection::vec(nonzero, 3))
        })
}

proptest! {
    #![proptest_config(config(32))]

    /// `z^m f^j` carries `a_2^j z^(j n_2 + m)` and nothing above it below `n_3`.
    #[test]
    fn lacunary_powers_have_an_isolated_top_monomial((ns, coeffs) in three_term_lacunary()) {
        let spec = LacunarySpec::new(
            ExponentRule::Explicit { exponents: ns.clone() },
            CoefficientRule::Explicit { values: coeffs.clone() },
        );
        let k = ns[2] as usize;
        let f = gen_lacunary(&spec, k).unwrap();
        let n2 = ns[1] as usize;
        let table = PowerTable::new(&f, n2 - 1, k).unwrap();
        for j in 0..n2 {
            for m in 0..n2 {
                let top = j * n2 + m;
                let a = table.get(top - m, j);
                prop_assert_eq!(a, &bautin_lab::rational::pow_u(&coeffs[1], j as u32));
                for deg in top + 1..k {
                    prop_assert_eq!(table.get(deg - m, j), &Rational::new(), "j {} m {} deg {}", j, m, deg);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn unit_bound_is_monotone(b in 1u32..40, sigma in 1u32..12, num in 1i64..1000, den in 1i64..1000) {
        let delta = q(num, den);
        let base = z_bound_unit(b, sigma, &delta).value_f64();
        prop_assert!(z_bound_unit(b + 1, sigma, &delta).value_f64() >= base);
        prop_assert!(z_bound_unit(b, sigma + 1, &delta).value_f64() >= base);
        prop_assert!(z_bound_unit(b, sigma, &(delta.clone() * 2u32)).value_f64() <= base);
    }

    #[test]
    fn general_bound_is_monotone(d in 1u32..4, b in 1u32..40, num in 1i64..1000, den in 1i64..1000) {
        let delta = q(num, den);
        let base = z_bound_general(d, b, &delta).value_f64();
        prop_assert!(z_bound_general(d + 1, b, &delta).value_f64() >= base);
        prop_assert!(z_bound_general(d, b + 1, &delta).value_f64() >= base);
        prop_assert!(z_bound_general(d, b, &(delta.clone() * 2u32)).value_f64() <= base);
        // A lower bound for Delta never yields a smaller count bound.
        let lower = Rational::from(&delta / 3u32);
        prop_assert!(z_bound_general(d, b, &lower).value_f64() >= base);
    }

    #[test]
    fn disc_bounds_are_monotone(b in 1u32..20, cn in 1i64..100, bn in 1i64..10, rn in 1i64..8) {
        let c = q(cn, 1);
        let bound = q(bn, 1);
        let radius = q(rn, 4);
        let base = zero_bound_disc(b, &c, &bound, &radius).value_f64();
        prop_assert!(zero_bound_disc(b, &(c.clone() * 2u32), &bound, &radius).value_f64() >= base);
        prop_assert!(zero_bound_disc(b, &c, &(bound.clone() * 2u32), &radius).value_f64() >= base);
        let rho = small_disc_radius(b, &c, &bound, &radius).value_f64();
        prop_assert!(small_disc_radius(b, &(c.clone() * 2u32), &bound, &radius).value_f64() <= rho);
        let cb = c_bound(3, &bound, &radius, b, &q(1, cn)).value_f64();
        prop_assert!(c_bound(3, &bound, &radius, b, &q(2, cn)).value_f64() <= cb);
    }
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn certified_counts_survive_longer_truncations(seed in any::<u64>(), d in 1usize..3) {
        let f = sample_random(&RandomSpec { seed, k: 120, origin_zero: true });
        let ctx = ZeroContext::new(&f, d).unwrap();
        let r = q(1, 8);
        let mut checked = 0;
        for p in candidate_polynomials(&f, d, 4, seed) {
            let Ok(z) = ctx.count(&p, &r, CountOptions::default()) else { continue };
            if z.certified != Certification::RoucheCertified || z.n + 10 > f.order() {
                continue;
            }
            prop_assert!(z.margin > 0.0);
            prop_assert_eq!(z.companion_count, Some(z.count));
            let again = ctx.count(&p, &z.r, CountOptions { n0: Some(z.n + 10) }).unwrap();
            prop_assert_eq!(again.certified, Certification::RoucheCertified);
            prop_assert_eq!(again.count, z.count);
            checked += 1;
        }
        prop_assert!(checked > 0);
    }

    #[test]
    fn scan_certificates_are_sound(seed in any::<u64>(), t in 5u64..30) {
        let f = sample_random(&RandomSpec { seed, k: 80, origin_zero: true });
        let n = 40;
        let first = scan_graph_points(&f, t, n).unwrap();
        let second = scan_graph_points(&f, t, n + 20).unwrap();
        prop_assert!(first.certified.iter().any(|p| p.x == 0 && p.y == 0));
        let later: BTreeMap<String, PointStatus> = second.rows.iter().map(|r| (r.x.to_string(), r.status)).collect();
        for row in first.rows.iter().filter(|r| r.status == PointStatus::Excluded) {
            prop_assert_eq!(later.get(&row.x.to_string()), Some(&PointStatus::Excluded), "x = {}", row.x);
        }
        let bigger = scan_graph_points(&f, 2 * t, n).unwrap();
        let found = |s: &bautin_lab::diophantine::ScanReport| s.certified.len() + s.unresolved.len();
        prop_assert!(found(&bigger) >= found(&first));
    }
}
