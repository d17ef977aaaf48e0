//! Command-line entry point: construct the quivers and seeds, run the
//! verification suites, execute the long mutation sequences with step
//! traces, and round-trip the birational maps.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use gcn_cli::*;
use gcn_core::plans;
use gcn_core::rf::RationalFunctionPoint;
use gcn_core::structures;
use gcn_core::suites::SuiteConfig;

#[derive(Parser)]
#[command(
    name = "gcn",
    about = "Exact verification engine for the generalized cluster structure on GL(n)",
    version
)]
struct Cli {
    /// Matrix size (4..=6 supported).
    #[arg(long, global = true, default_value_t = 4)]
    n: usize,
    /// Master RNG seed; all job streams derive from it deterministically.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Evaluation points per identity.
    #[arg(long, global = true, default_value_t = 5)]
    trials: usize,
    /// Output directory for emitted files (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for build artifacts.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the six quivers with variable labels.
    Build,
    /// Run verification suites (exit code 0 exactly when all pass).
    Verify {
        /// Suite name, or "all".
        suite: String,
        /// Worker threads for independent suites.
        #[arg(long, default_value_t = 4)]
        workers: usize,
    },
    /// Execute a mutation plan with a validated step trace.
    Mutate {
        /// Plan name: W (long sequence) or mu (Hankel-side rungs).
        plan: String,
    },
    /// Round-trip the birational maps on random generic points.
    Roundtrip,
    /// Emit the log-canonical coefficient table of the initial cluster.
    Omega,
}

fn gate_n(n: usize) -> Result<()> {
    if n == 3 {
        bail!("n = 3 is a special case with a different quiver and is not built here");
    }
    if !(4..=6).contains(&n) {
        bail!("supported sizes are n = 4, 5, 6");
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, name: &str, contents: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(name);
            fs::write(&path, contents)
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => println!("{contents}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Build => {
            gate_n(cli.n)?;
            cmd_build(&cli)?;
            Ok(true)
        }
        Command::Verify { suite, workers } => {
            gate_n(cli.n)?;
            cmd_verify(&cli, suite, *workers)
        }
        Command::Mutate { plan } => cmd_mutate(&cli, plan),
        Command::Roundtrip => {
            gate_n(cli.n)?;
            cmd_roundtrip(&cli)
        }
        Command::Omega => {
            gate_n(cli.n)?;
            let csv = omega_csv(cli.n, cli.seed);
            emit(&cli.out, &format!("omega-n{}.csv", cli.n), &csv)?;
            Ok(true)
        }
    }
}

fn cmd_build(cli: &Cli) -> Result<()> {
    let n = cli.n;
    let m = n - 1;
    let x = sample_matrix(n, cli.seed);
    let glued = structures::glued_seed(n, &x);
    let extended = structures::extended_seed(n, &x);
    let w_quiver = structures::w_quiver(n);
    let boomerang = {
        let (seed, _) = plans::run_head(n, &structures::w_seed(n, &x))
            .map_err(|e| anyhow::anyhow!("head failed at step {}: {}", e.step, e.message))?;
        seed.quiver
    };
    let quivers: Vec<(String, gcn_core::quiver::Quiver, Option<&gcn_core::quiver::Seed>, usize)> = vec![
        (format!("dual-{m}"), structures::dual_quiver(m), None, n),
        (format!("hankel-{m}"), structures::toda_quiver(m), None, n),
        (format!("glued-{n}"), glued.quiver.clone(), Some(&glued), n),
        (format!("two-cycle-{n}"), extended.quiver.clone(), Some(&extended), n),
        (format!("subquiver-{n}"), w_quiver, None, n),
        (format!("boomerang-{n}"), boomerang, None, n),
    ];
    for (name, q, seed, nn) in &quivers {
        match cli.format {
            Format::Json => {
                let j = quiver_to_json(q, name, *nn, *seed);
                emit(&cli.out, &format!("{name}.json"), &serde_json::to_string_pretty(&j)?)?;
            }
            Format::Dot => {
                emit(&cli.out, &format!("{name}.dot"), &quiver_to_dot(q, name, *nn))?;
            }
            Format::Text => {
                emit(&cli.out, &format!("{name}.txt"), &format!("{q:?}"))?;
            }
        }
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, suite: &str, workers: usize) -> Result<bool> {
    let cfg = SuiteConfig::new(cli.n, cli.seed, cli.trials);
    let names: Vec<String> = if suite == "all" {
        ALL_SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        if suite_by_name(suite).is_none() {
            bail!(
                "unknown suite '{suite}'; available: {} or all",
                ALL_SUITES.join(", ")
            );
        }
        vec![suite.to_string()]
    };
    let results = run_suites_pooled(&names, cfg, workers);
    let mut all_ok = true;
    let mut json_reports = Vec::new();
    for (name, reports) in &results {
        let pass = reports.iter().filter(|r| r.passed()).count();
        println!("{name}: {pass}/{} pass", reports.len());
        for r in reports {
            if !r.passed() {
                all_ok = false;
                println!("  FAIL {} ({:?})", r.name, r.failing_point);
            }
            json_reports.push(report_json(r));
        }
    }
    if cli.out.is_some() {
        emit(
            &cli.out,
            &format!("verify-n{}-seed{}.json", cli.n, cli.seed),
            &serde_json::to_string_pretty(&json_reports)?,
        )?;
    }
    Ok(all_ok)
}

fn cmd_mutate(cli: &Cli, plan: &str) -> Result<bool> {
    match plan {
        "W" | "w" => {
            gate_n(cli.n)?;
            let x = sample_matrix(cli.n, cli.seed);
            let (seed, trace) = plans::run_w(cli.n, &x)
                .map_err(|e| anyhow::anyhow!("step {}: {}", e.step, e.message))?;
            let steps: Vec<StepJson> = trace.iter().map(step_json).collect();
            emit(
                &cli.out,
                &format!("trace-W-n{}-seed{}.json", cli.n, cli.seed),
                &serde_json::to_string_pretty(&steps)?,
            )?;
            let ok = trace.iter().all(|s| s.ok);
            eprintln!(
                "W: {} steps, {} final mutable variables, all validated: {ok}",
                trace.len(),
                seed.quiver.mutable_vertices().count()
            );
            Ok(ok)
        }
        "mu" => {
            if cli.n < 2 {
                bail!("the Hankel-side plan needs n >= 2");
            }
            let mut rng = gcn_core::pit::Rng::for_job(cli.seed, "mu-sample");
            let point = RationalFunctionPoint::random(&mut rng, cli.n);
            let (_, trace) = plans::run_mu(cli.n, &point)
                .map_err(|e| anyhow::anyhow!("step {}: {}", e.step, e.message))?;
            let steps: Vec<StepJson> = trace.iter().map(step_json).collect();
            emit(
                &cli.out,
                &format!("trace-mu-n{}-seed{}.json", cli.n, cli.seed),
                &serde_json::to_string_pretty(&steps)?,
            )?;
            Ok(trace.iter().all(|s| s.ok))
        }
        other => bail!("unknown plan '{other}'; use W or mu"),
    }
}

fn cmd_roundtrip(cli: &Cli) -> Result<bool> {
    let n = cli.n;
    let mut rng = gcn_core::pit::Rng::for_job(cli.seed, "roundtrip");
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < cli.trials {
        attempts += 1;
        if attempts > 50 * cli.trials {
            bail!("too many non-generic samples");
        }
        let x = gcn_core::suites::generic_for_maps(&mut rng, n);
        let Ok(u) = gcn_core::maps::psi_prime(&x) else { continue };
        let rows = gcn_core::maps::FiberRows::of(&x);
        match gcn_core::maps::reconstruct_x(&u, &rows.first, &rows.last) {
            Ok(back) if back == x => done += 1,
            Ok(_) => {
                println!("roundtrip mismatch");
                return Ok(false);
            }
            Err(gcn_core::maps::MapError::NonGeneric) => continue,
            Err(e) => bail!("{e}"),
        }
    }
    println!("roundtrip: {done}/{} exact reconstructions", cli.trials);
    Ok(true)
}
