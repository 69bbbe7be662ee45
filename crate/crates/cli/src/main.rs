mod args;
mod commands;
mod manifest;
mod sweep;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command};
use commands::Outcome;
use manifest::RunManifest;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 2;
const EXIT_RETRYABLE: u8 = 3;
const EXIT_STRUCTURED: u8 = 4;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { EXIT_OK });
        }
    };
    configure_threads();
    match run(&cli, &argv) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("BAUTIN_LAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn error_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<bautin_lab::Error>() {
        Some(err) if err.is_retryable() => EXIT_RETRYABLE,
        _ => EXIT_INVALID,
    }
}

fn subcommand_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Series(_) => "series",
        Command::Bautin(_) => "bautin",
        Command::Nu(_) => "nu",
        Command::Delta(_) => "delta",
        Command::Eta(_) => "eta",
        Command::Bounds(_) => "bounds",
        Command::Lacunary(_) => "lacunary",
        Command::Recur(_) => "recur",
        Command::Random(_) => "random",
        Command::Zeros(_) => "zeros",
        Command::Ratpoints(_) => "ratpoints",
        Command::Sweep(_) => "sweep",
        Command::Replay(_) => "replay",
    }
}

fn config_path(cmd: &Command) -> Option<&PathBuf> {
    match cmd {
        Command::Lacunary(c) => Some(&c.config),
        Command::Recur(c) => Some(&c.config),
        Command::Sweep(c) => Some(&c.config),
        _ => None,
    }
}

fn input_paths(cmd: &Command) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = match cmd {
        Command::Series(c) => vec![c.src.series.clone()],
        Command::Bautin(c) => vec![c.src.series.clone()],
        Command::Nu(c) => vec![c.src.series.clone()],
        Command::Delta(c) => c.series.iter().cloned().collect(),
        Command::Eta(c) => vec![c.src.series.clone()],
        Command::Zeros(c) => std::iter::once(c.src.series.clone()).chain(c.poly.iter().cloned()).collect(),
        Command::Ratpoints(c) => vec![c.src.series.clone()],
        _ => Vec::new(),
    };
    v.extend(config_path(cmd).cloned());
    v
}

fn load_config(cmd: &Command) -> Result<Option<Value>> {
    config_path(cmd)
        .map(|p| {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(serde_json::from_str(&text).map_err(bautin_lab::Error::Json)?)
        })
        .transpose()
}

/// Runs one non-replay command; returns its primary output and any stderr summary.
fn execute(cli: &Cli, config: Option<&Value>) -> Result<(Outcome, String)> {
    commands::check_precision(cli.precision)?;
    let cfg = || config.context("command needs a config");
    let out = match &cli.cmd {
        Command::Series(c) => commands::series(c)?,
        Command::Bautin(c) => commands::bautin(c)?,
        Command::Nu(c) => commands::nu(c)?,
        Command::Delta(c) => commands::delta(c)?,
        Command::Eta(c) => commands::eta(c)?,
        Command::Bounds(c) => commands::bounds_cmd(c)?,
        Command::Lacunary(c) => commands::lacunary(c, cfg()?)?,
        Command::Recur(c) => commands::recur(c, cfg()?)?,
        Command::Random(c) => commands::random(c)?,
        Command::Zeros(c) => commands::zeros(c)?,
        Command::Ratpoints(c) => commands::ratpoints(c)?,
        Command::Sweep(_) => return commands::sweep(cfg()?),
        Command::Replay(_) => anyhow::bail!(bautin_lab::Error::Invalid("a manifest cannot replay a replay".into())),
    };
    Ok((out, String::new()))
}

fn emit(cli: &Cli, body: &str) -> Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: &Cli, argv: &[String]) -> Result<u8> {
    if let Command::Replay(r) = &cli.cmd {
        return replay(cli, &r.manifest_path);
    }
    let started = manifest::now_unix();
    let config = load_config(&cli.cmd)?;
    let mut inputs = BTreeMap::new();
    if cli.manifest.is_some() {
        for p in input_paths(&cli.cmd) {
            inputs.insert(p.display().to_string(), manifest::file_digest(&p)?);
        }
    }
    let (out, summary) = execute(cli, config.as_ref())?;
    emit(cli, &out.body)?;
    if !summary.is_empty() {
        eprint!("{summary}");
    }
    let code = if out.structured { EXIT_STRUCTURED } else { EXIT_OK };
    if let Some(path) = &cli.manifest {
        let mut outputs: Vec<String> = cli.out.iter().map(|p| p.display().to_string()).collect();
        if let Command::Ratpoints(c) = &cli.cmd {
            outputs.extend(c.csv.iter().map(|p| p.display().to_string()));
        }
        let m = RunManifest {
            tool: manifest::TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: subcommand_name(&cli.cmd).into(),
            argv: argv.to_vec(),
            resolved: cli.clone(),
            config,
            inputs,
            seeds: commands::seeds_of(&cli.cmd),
            started_unix: started,
            finished_unix: manifest::now_unix(),
            outputs,
            output_sha256: manifest::sha256_hex(out.body.as_bytes()),
            exit_code: code as i32,
        };
        manifest::write(path, &m)?;
    }
    Ok(code)
}

/// Re-runs a manifest in memory; exit 4 when inputs or output differ.
fn replay(cli: &Cli, path: &PathBuf) -> Result<u8> {
    let m = manifest::read(path)?;
    let mut changed = Vec::new();
    for (p, digest) in &m.inputs {
        let now = manifest::file_digest(std::path::Path::new(p)).unwrap_or_default();
        if &now != digest {
            changed.push(p.clone());
        }
    }
    let mut resolved = m.resolved.clone();
    resolved.out = None;
    resolved.manifest = None;
    let (actual, exit_code) = match execute(&resolved, m.config.as_ref()) {
        Ok((out, _)) => (
            manifest::sha256_hex(out.body.as_bytes()),
            (if out.structured { EXIT_STRUCTURED } else { EXIT_OK }) as i32,
        ),
        Err(e) => (String::new(), error_code(&e) as i32),
    };
    let matches = changed.is_empty() && actual == m.output_sha256 && exit_code == m.exit_code;
    let report = json!({
        "manifest": path.display().to_string(),
        "subcommand": m.subcommand,
        "expected_sha256": m.output_sha256,
        "actual_sha256": actual,
        "expected_exit_code": m.exit_code,
        "actual_exit_code": exit_code,
        "changed_inputs": changed,
        "match": matches,
    });
    emit(cli, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(if matches { EXIT_OK } else { EXIT_STRUCTURED })
}
