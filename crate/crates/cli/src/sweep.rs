use std::path::PathBuf;

use anyhow::Result;
use rayon::prelude::*;
use rug::Rational;
use serde::{Deserialize, Serialize};

use bautin_lab::bautin::minor::DEFAULT_BUDGET;
use bautin_lab::bautin::{bautin_determinant, bautin_index, build_bautin_matrix, max_nonzero_minor, MinorMode, MonomialFamily};
use bautin_lab::bounds::{delta_arity_degree, random_epsilon_num, z_bound_from_minor};
use bautin_lab::generators::{sample_random, RandomSpec};
use bautin_lab::rational::parse_rational;
use bautin_lab::series::{ExactSeries, PowerTable};
use bautin_lab::zeros::empirical_z;
use bautin_lab::Error;

use crate::commands::load_series;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    List(Vec<u64>),
    Range { start: u64, count: u64 },
}

impl Default for Seeds {
    fn default() -> Self {
        Seeds::List(Vec::new())
    }
}

impl Seeds {
    pub fn expand(&self) -> Vec<u64> {
        match self {
            Seeds::List(v) => v.clone(),
            Seeds::Range { start, count } => (*start..start + count).collect(),
        }
    }
}

fn half() -> String {
    "1/2".into()
}

fn trials() -> usize {
    20
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case", deny_unknown_fields)]
pub enum SweepConfig {
    /// Fraction of random series with `|Delta_d| >= eps_d`.
    RandomDelta {
        #[serde(default)]
        degrees: Vec<u32>,
        #[serde(default)]
        seeds: Seeds,
        #[serde(default = "half")]
        p_hat: String,
        /// Series vanish at the origin unless set to false.
        #[serde(default = "yes")]
        origin_zero: bool,
        /// Arity and degree of `Delta_d` as a polynomial; defaults per `d`.
        #[serde(default)]
        m_d: Option<u32>,
        #[serde(default)]
        q_d: Option<u32>,
    },
    /// Closed-form zero bound against the empirical lower estimate.
    Domination {
        #[serde(default)]
        degrees: Vec<usize>,
        #[serde(default)]
        series: Vec<PathBuf>,
        /// Random series sampled at order `trunc`, added to `series`.
        #[serde(default)]
        random_seeds: Seeds,
        #[serde(default)]
        trunc: Option<usize>,
        #[serde(default = "trials")]
        trials: usize,
        #[serde(default)]
        seed: u64,
        /// Disc radius; `R/4` of each series by default.
        #[serde(default)]
        radius: Option<String>,
    },
}

fn yes() -> bool {
    true
}

pub struct SweepOutput {
    pub csv: String,
    pub summary: String,
}

pub fn run(cfg: &SweepConfig) -> Result<SweepOutput> {
    match cfg {
        SweepConfig::RandomDelta { degrees, seeds, p_hat, origin_zero, m_d, q_d } => {
            random_delta(degrees, &seeds.expand(), &parse_rational(p_hat)?, *origin_zero, *m_d, *q_d)
        }
        SweepConfig::Domination { degrees, series, random_seeds, trunc, trials, seed, radius } => {
            let mut inputs = Vec::new();
            for p in series {
                inputs.push((p.display().to_string(), load_series(p)?));
            }
            let seeds = random_seeds.expand();
            if !seeds.is_empty() {
                let k = trunc.ok_or_else(|| Error::Invalid("random_seeds needs trunc".into()))?;
                for s in seeds {
                    inputs.push((format!("random:{s}"), sample_random(&RandomSpec { seed: s, k, origin_zero: true })));
                }
            }
            let radius = radius.as_deref().map(parse_rational).transpose()?;
            domination(degrees, &inputs, *trials, *seed, radius.as_ref())
        }
    }
}

fn random_delta(
    degrees: &[u32],
    seeds: &[u64],
    p_hat: &Rational,
    origin_zero: bool,
    m_d: Option<u32>,
    q_d: Option<u32>,
) -> Result<SweepOutput> {
    if *p_hat <= 0 || *p_hat >= 1 {
        return Err(Error::Invalid("p_hat must lie in (0, 1)".into()).into());
    }
    let cells: Vec<(u32, u64)> = degrees.iter().flat_map(|&d| seeds.iter().map(move |&s| (d, s))).collect();
    let rows: Vec<(u32, String, bool)> = cells
        .par_iter()
        .map(|&(d, seed)| {
            let (m, q) = delta_arity_degree(d);
            let eps = random_epsilon_num(d, p_hat, m_d.unwrap_or(m), q_d.unwrap_or(q));
            let b = (d * d + 2 * d) as usize;
            let f = sample_random(&RandomSpec { seed, k: b, origin_zero });
            let delta = bautin_determinant(&f, d as usize).map(|x| x.abs());
            match delta {
                Ok(delta) => {
                    // Passing requires |Delta| above the whole enclosure of eps_d.
                    let passes = delta > eps.iv.hi.to_rational().expect("finite bound");
                    let row = format!(
                        "{d},{seed},{:.6e},{:.6e},{passes}\n",
                        delta.to_f64(),
                        eps.iv.mid_f64()
                    );
                    (d, row, passes)
                }
                Err(e) => (d, format!("{d},{seed},,{:.6e},error:{}\n", eps.iv.mid_f64(), e.to_string().replace(',', ";")), false),
            }
        })
        .collect();
    let mut csv = String::from("d,seed,Delta,eps_d,passes\n");
    let mut summary = String::new();
    for r in &rows {
        csv += &r.1;
    }
    for &d in degrees {
        let mine: Vec<_> = rows.iter().filter(|r| r.0 == d).collect();
        let pass = mine.iter().filter(|r| r.2).count();
        summary += &format!("d={d}: {pass}/{} passes (p_hat = {p_hat})\n", mine.len());
    }
    Ok(SweepOutput { csv, summary })
}

fn domination_cell(f: &ExactSeries, d: usize, trials: usize, seed: u64, radius: Option<&Rational>) -> Result<String> {
    let fam = MonomialFamily::square(d);
    let report = bautin_index(f, &fam, fam.default_k_max().min(f.order()))?;
    let Some(b) = report.index() else {
        return Ok(format!("{d},,,,,,,,stalled"));
    };
    let table = PowerTable::new(f, d, b)?;
    let m = build_bautin_matrix(&table, &fam, b)?.to_qmatrix();
    let minor = max_nonzero_minor(&m, report.sigma, MinorMode::ExhaustiveMax, DEFAULT_BUDGET)?;
    let bound = z_bound_from_minor(b as u32, report.sigma as u32, &minor.value, f.bound(), f.radius());
    let r = radius.cloned().unwrap_or_else(|| Rational::from(f.radius() / 4u32));
    let emp = empirical_z(f, d, trials, &r, seed)?;
    let dominated = bound.value_f64() >= emp.value as f64;
    let status = if emp.certified == 0 { "no_certified_count" } else { "ok" };
    Ok(format!(
        "{d},{b},{},{:.6e},{:.6e},{},{}/{},{dominated},{status}",
        report.sigma,
        minor.value.to_f64(),
        bound.value_f64(),
        emp.value,
        emp.certified,
        emp.attempted
    ))
}

fn domination(
    degrees: &[usize],
    inputs: &[(String, ExactSeries)],
    trials: usize,
    seed: u64,
    radius: Option<&Rational>,
) -> Result<SweepOutput> {
    let cells: Vec<(usize, usize)> = (0..inputs.len()).flat_map(|i| degrees.iter().map(move |&d| (i, d))).collect();
    let rows: Vec<(String, bool)> = cells
        .par_iter()
        .map(|&(i, d)| {
            let (name, f) = &inputs[i];
            match domination_cell(f, d, trials, seed, radius) {
                Ok(row) => {
                    let ok = row.contains(",true,");
                    (format!("{name},{row}\n"), ok)
                }
                Err(e) => (format!("{name},{d},,,,,,,,error:{}\n", e.to_string().replace(',', ";")), false),
            }
        })
        .collect();
    let mut csv = String::from("series,d,b,sigma,minor,z_bound,empirical_z,certified,dominated,status\n");
    for r in &rows {
        csv += &r.0;
    }
    let ok = rows.iter().filter(|r| r.1).count();
    Ok(SweepOutput { csv, summary: format!("{ok}/{} cells dominated\n", rows.len()) })
}
