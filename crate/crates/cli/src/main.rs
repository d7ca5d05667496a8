//! `starcorr`: command-line front end for star-network Bell inequalities.

mod error;
mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use starcorr::bell::{aligned_bell_value, bell_value, local_bound_with_tol};
use starcorr::nlocal::{behavior_from_strategy, classical_max, reduce, saturating_families};
use starcorr::qnet::{
    behavior_from_quantum, critical_visibility, s_net_at_visibility, tensorize, Preset, Visibility,
};
use starcorr::schema::{BellStrategyFile, MatrixFile, QuantumFile, ScenarioFile, StrategyFile};
use starcorr::star::{evaluate, star_bound, StarEvaluation};
use starcorr::tol::Tolerances;

use error::CliError;
use report::{render, Format, InputDigest, Report};

#[derive(Debug, Parser)]
#[command(name = "starcorr", version, about = "Star-network Bell inequalities: bounds, strategies, violations")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Seed echoed in the report; every command is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tie tolerance for maximizers and margin for the `violated` flag.
    #[arg(long, global = true, value_parser = parse_tol)]
    tol: Option<f64>,
    /// Record wall-clock time in `timing_ms` (otherwise 0, keeping reports
    /// byte-identical across runs).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classical bound of a Bell matrix and its maximizing assignments.
    Bound { matrix: PathBuf },
    /// N-local bound of a star scenario.
    StarBound { scenario: PathBuf },
    /// Evaluate a classical N-local strategy.
    EvalClassical { scenario: PathBuf, strategy: PathBuf },
    /// Best classical strategy for a scenario.
    MaxClassical { scenario: PathBuf },
    /// Evaluate a quantum network strategy.
    EvalQuantum { scenario: PathBuf, quantum: PathBuf },
    /// Critical white-noise visibility of a quantum network strategy.
    Visibility { scenario: PathBuf, quantum: PathBuf },
    /// Families of classical strategies that saturate the bound.
    Saturate {
        matrix: PathBuf,
        #[arg(long)]
        sources: usize,
    },
    /// Reduce a saturating classical strategy to a shared-edge form.
    Reduce { scenario: PathBuf, strategy: PathBuf },
    /// Lift a bipartite Bell strategy to a star network.
    Tensorize {
        matrix: PathBuf,
        bell_strategy: PathBuf,
        #[arg(long)]
        sources: usize,
        /// Directory receiving the scenario and quantum files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// File stem for the written files.
        #[arg(long, default_value = "tensorized")]
        name: String,
    },
    /// Write a named construction's scenario and quantum files.
    Preset {
        /// chsh_star[:N], elegant_swap_bsm, elegant_swap_3settings or
        /// elegant_swapped_roles.
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("{s:?} is not a positive finite number")),
    }
}

fn main() {
    std::process::exit(run(std::env::args_os()));
}

fn run(argv: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return 1;
    }
    let start = Instant::now();
    let result = execute(&cli).and_then(|mut report| {
        if cli.timing {
            report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
        }
        render(&report, cli.format)
    });
    match result {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Applies `STARCORR_THREADS` to the global worker pool.
fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("STARCORR_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("STARCORR_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Reads and parses a JSON input, folding its bytes into the digest.
fn load<T: DeserializeOwned>(path: &Path, digest: &mut InputDigest) -> Result<T, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    digest.add(&bytes);
    serde_json::from_slice(&bytes).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report payloads serialize")
}

fn evaluation(ev: &StarEvaluation, tol: f64) -> Value {
    json!({
        "I": ev.i_values,
        "s_net": ev.s_net,
        "bound": ev.bound,
        "violated": ev.s_net > ev.bound + tol,
    })
}

/// Writes all files after every one has been rendered, so errors leave
/// nothing behind.
fn write_files(files: &[(PathBuf, String)]) -> Result<Vec<String>, CliError> {
    for (path, text) in files {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|source| CliError::Write {
                path: dir.to_path_buf(),
                source,
            })?;
        }
        fs::write(path, text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
    }
    Ok(files.iter().map(|(p, _)| p.display().to_string()).collect())
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("files serialize");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    let mut tolerances = Tolerances::default();
    if let Some(t) = cli.tol {
        tolerances.tol = t;
    }
    let tol = tolerances.tol;
    let (name, mut digest) = {
        let name = command_name(&cli.command);
        (name, InputDigest::new(name))
    };

    let mut results = match &cli.command {
        Command::Bound { matrix } => {
            let m = load::<MatrixFile>(matrix, &mut digest)?.to_matrix()?;
            let lb = local_bound_with_tol(&m, tol)?;
            json!({
                "rows": m.n_b(),
                "cols": m.n_a(),
                "bound": lb.bound,
                "maximizer_count": lb.maximizers.len(),
                "maximizers": lb.maximizers,
            })
        }
        Command::StarBound { scenario } => {
            let sc = load::<ScenarioFile>(scenario, &mut digest)?.to_scenario()?;
            let per_edge = sc
                .edge_matrices()
                .iter()
                .map(|m| Ok(local_bound_with_tol(m, tol)?.bound))
                .collect::<Result<Vec<f64>, starcorr::Error>>()?;
            json!({
                "sources": sc.sources(),
                "rows": sc.n_b(),
                "edge_bounds": per_edge,
                "bound": star_bound(&sc)?,
            })
        }
        Command::EvalClassical { scenario, strategy } => {
            let sc = load::<ScenarioFile>(scenario, &mut digest)?.to_scenario()?;
            let st = load::<StrategyFile>(strategy, &mut digest)?.to_strategy()?;
            let beh = behavior_from_strategy(&st, &sc.shape())?;
            evaluation(&evaluate(&beh, &sc)?, tol)
        }
        Command::MaxClassical { scenario } => {
            let sc = load::<ScenarioFile>(scenario, &mut digest)?.to_scenario()?;
            let cm = classical_max(&sc)?;
            let beh = behavior_from_strategy(&cm.strategy, &sc.shape())?;
            let ev = evaluate(&beh, &sc)?;
            json!({
                "value": cm.value,
                "heuristic": cm.heuristic,
                "witness": cm.witness,
                "strategy": StrategyFile::from(&cm.strategy),
                "evaluation": evaluation(&ev, tol),
            })
        }
        Command::EvalQuantum { scenario, quantum } => {
            let sc = load::<ScenarioFile>(scenario, &mut digest)?.to_scenario()?;
            let qs = load::<QuantumFile>(quantum, &mut digest)?.build()?;
            let beh = behavior_from_quantum(&qs, &sc.shape())?;
            evaluation(&evaluate(&beh, &sc)?, tol)
        }
        Command::Visibility { scenario, quantum } => {
            let sc = load::<ScenarioFile>(scenario, &mut digest)?.to_scenario()?;
            let qs = load::<QuantumFile>(quantum, &mut digest)?.build()?;
            let vis = critical_visibility(&sc, &qs)?;
            let critical = match vis {
                Visibility::Critical(v) => Some(v),
                Visibility::NoViolation => None,
            };
            json!({
                "visibility": vis,
                "critical_visibility": critical,
                "s_net_at_full_visibility": s_net_at_visibility(&sc, &qs, 1.0)?,
                "bound": star_bound(&sc)?,
            })
        }
        Command::Saturate { matrix, sources } => {
            digest.add(sources.to_string().as_bytes());
            let m = load::<MatrixFile>(matrix, &mut digest)?.to_matrix()?;
            let classes = saturating_families(&m, *sources)?;
            json!({
                "bound": local_bound_with_tol(&m, tol)?.bound,
                "sources": sources,
                "class_count": classes.len(),
                "classes": classes,
            })
        }
        Command::Reduce { scenario, strategy } => {
            let sc = load::<ScenarioFile>(scenario, &mut digest)?.to_scenario()?;
            let st = load::<StrategyFile>(strategy, &mut digest)?.to_strategy()?;
            let original = evaluate(&behavior_from_strategy(&st, &sc.shape())?, &sc)?;
            let reduced = reduce(&st, &sc)?;
            let m = sc.homogeneous().expect("reduce checked homogeneity");
            json!({
                "reduced": reduced,
                "I_original": original.i_values,
                "I_reduced": reduced.i_values(m, sc.sources()),
            })
        }
        Command::Tensorize {
            matrix,
            bell_strategy,
            sources,
            out,
            name: stem,
        } => {
            digest.add(sources.to_string().as_bytes());
            let m = load::<MatrixFile>(matrix, &mut digest)?.to_matrix()?;
            let bell = load::<BellStrategyFile>(bell_strategy, &mut digest)?;
            let (state, alice, bob) = bell.build()?;
            let setup = tensorize(&m, &state, &alice, &bob, *sources)?;
            let ev = evaluate(
                &behavior_from_quantum(&setup.strategy, &setup.scenario.shape())?,
                &setup.scenario,
            )?;
            let quantum = QuantumFile::tensorized(&bell, *sources);
            let files = write_files(&[
                (out.join(format!("{stem}.scenario.json")), pretty(&ScenarioFile::from(&setup.scenario))),
                (out.join(format!("{stem}.quantum.json")), pretty(&quantum)),
            ])?;
            json!({
                "bell_value": bell_value(&m, &state, &alice, &bob)?,
                "aligned_bell_value": aligned_bell_value(&m, &state, &alice, &bob)?,
                "evaluation": evaluation(&ev, tol),
                "files": files,
            })
        }
        Command::Preset { name: preset, out } => {
            digest.add(preset.as_bytes());
            let p: Preset = preset.parse()?;
            let bundle = p.build()?;
            let ev = evaluate(
                &behavior_from_quantum(&bundle.strategy, &bundle.scenario.shape())?,
                &bundle.scenario,
            )?;
            let stem = p.to_string().replace(':', "_");
            let files = write_files(&[
                (out.join(format!("{stem}.scenario.json")), pretty(&ScenarioFile::from(&bundle.scenario))),
                (out.join(format!("{stem}.quantum.json")), pretty(&bundle.quantum)),
            ])?;
            json!({
                "preset": p.to_string(),
                "evaluation": evaluation(&ev, tol),
                "files": files,
            })
        }
    };

    let obj = results.as_object_mut().expect("results are objects");
    obj.insert("tolerances".into(), to_value(&tolerances));
    obj.insert("seed".into(), to_value(&cli.seed));
    Ok(Report {
        command: name.to_string(),
        inputs_digest: digest.finish(),
        results,
        timing_ms: 0.0,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Bound { .. } => "bound",
        Command::StarBound { .. } => "star-bound",
        Command::EvalClassical { .. } => "eval-classical",
        Command::MaxClassical { .. } => "max-classical",
        Command::EvalQuantum { .. } => "eval-quantum",
        Command::Visibility { .. } => "visibility",
        Command::Saturate { .. } => "saturate",
        Command::Reduce { .. } => "reduce",
        Command::Tensorize { .. } => "tensorize",
        Command::Preset { .. } => "preset",
    }
}
