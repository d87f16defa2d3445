use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use kftm::algorithms::{read_trace_csv, run_policy, write_trace_csv, PolicyKind};
use kftm::generators::{generate, BurstParams, Family, GenParams, Sidecar};
use kftm::harness::{check_invariants, compare_trace, run_ratio, sweep, CompareScope, OptMode, SweepConfig};
use kftm::model::{read_instance, validate_order_respecting, write_instance};
use kftm::opt::{feasibility, opt_branch_bound, opt_bruteforce_with_limit, ORACLE_LIMIT_ENV};
use kftm::Error;

/// Simulate, solve and stress-test online k-frame buffer policies.
#[derive(Debug, Parser)]
#[command(name = "kftm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    #[value(alias = "bb")]
    BranchBound,
    #[value(alias = "brute")]
    BruteForce,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one policy and check its trace.
    Simulate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long = "B")]
        b: usize,
        #[arg(long, default_value = "mf")]
        policy: PolicyKind,
        /// Write the decision trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Compare decisions against a golden CSV trace.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Exact offline optimum.
    Opt {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long = "B")]
        b: usize,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        /// Largest frame count for exhaustive search.
        #[arg(long, env = ORACLE_LIMIT_ENV, default_value_t = kftm::opt::DEFAULT_ORACLE_LIMIT)]
        limit: u32,
    },
    /// Build an instance from a family and write it with a claims sidecar.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long = "B", default_value_t = 4)]
        b: usize,
        #[arg(long, default_value_t = 6)]
        y: u32,
        #[arg(long)]
        z: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "mf")]
        alg: PolicyKind,
        /// Frame count for `random`.
        #[arg(long, default_value_t = 8)]
        frames: u32,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to the instance path with a `.claims.json` extension.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        /// Write the expected trace, for families that have one.
        #[arg(long)]
        golden_out: Option<PathBuf>,
    },
    /// Competitive ratios of several policies on one instance.
    Ratio {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long = "B")]
        b: usize,
        #[arg(long, value_delimiter = ',', default_value = "mf,sp,greedy")]
        policies: Vec<PolicyKind>,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        opt: Mode,
        /// Certify the witness in this sidecar instead of searching.
        #[arg(long, conflicts_with = "opt")]
        certificate: Option<PathBuf>,
    },
    /// Check that an instance is order-respecting, and a sidecar witness feasible.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Run a parameter grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        out_json: Option<PathBuf>,
    },
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn default_sidecar(out: &Path) -> PathBuf {
    out.with_extension("claims.json")
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Simulate {
            instance,
            b,
            policy,
            trace,
            golden,
        } => {
            let inst = read_instance(&instance)?;
            let sim = run_policy(&inst, b, policy)?;
            let violations = check_invariants(&sim, &inst, b);
            if let Some(path) = &trace {
                write_trace_csv(&sim.trace, path)?;
            }
            let diff = golden
                .map(|g| read_trace_csv(&g).map(|g| compare_trace(&sim.trace, &g, CompareScope::Decisions)))
                .transpose()?;
            if let Some(d) = diff.as_ref().filter(|d| !d.is_empty()) {
                eprint!("{d}");
            }
            print_json(&json!({
                "policy": policy,
                "k": inst.k(),
                "b": b,
                "gain": sim.gain,
                "completed": sim.completed,
                "violations": violations,
                "golden_diff": diff.as_ref().map(|d| d.entries.len()),
            }))?;
            Ok(status(violations.is_empty() && diff.is_none_or(|d| d.is_empty())))
        }
        Command::Opt {
            instance,
            b,
            mode,
            limit,
        } => {
            let inst = read_instance(&instance)?;
            let result = match mode {
                Mode::BruteForce => opt_bruteforce_with_limit(&inst, b, limit)?,
                Mode::BranchBound => opt_branch_bound(&inst, b)?,
                Mode::Auto if inst.n_frames() <= limit => opt_bruteforce_with_limit(&inst, b, limit)?,
                Mode::Auto => opt_branch_bound(&inst, b)?,
            };
            print_json(&result)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate {
            family,
            k,
            b,
            y,
            z,
            seed,
            alg,
            frames,
            out,
            sidecar,
            golden_out,
        } => {
            let params = GenParams {
                k,
                b,
                y,
                z,
                seed,
                frames,
                alg,
                burst: BurstParams::default(),
            };
            let case = generate(family, &params)?;
            write_instance(&case.instance, &out)?;
            let sidecar = sidecar.unwrap_or_else(|| default_sidecar(&out));
            case.sidecar().write(&sidecar)?;
            if let Some(path) = golden_out {
                let Some(golden) = &case.golden else {
                    bail!("family {family} has no golden trace");
                };
                write_trace_csv(golden, path)?;
            }
            eprintln!(
                "wrote {} ({} frames, {} phases) and {}",
                out.display(),
                case.instance.n_frames(),
                case.instance.horizon(),
                sidecar.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Ratio {
            instance,
            b,
            policies,
            opt,
            certificate,
        } => {
            let inst = read_instance(&instance)?;
            let mode = match (certificate, opt) {
                (Some(path), _) => OptMode::Certificate(Sidecar::read(path)?.opt_witness),
                (None, Mode::Auto) => OptMode::Auto,
                (None, Mode::BranchBound) => OptMode::BranchBound,
                (None, Mode::BruteForce) => OptMode::BruteForce,
            };
            let report = run_ratio(&inst, b, &policies, &mode)?;
            print_json(&report)?;
            Ok(status(report.passed()))
        }
        Command::Validate { instance, sidecar } => {
            let inst = read_instance(&instance)?;
            let violations = validate_order_respecting(&inst);
            for v in &violations {
                eprintln!("order violation: {v:?}");
            }
            let mut ok = violations.is_empty();
            if let Some(path) = sidecar {
                let sc = Sidecar::read(&path)?;
                let f = feasibility(&inst, &sc.opt_witness, sc.b);
                if !f.feasible {
                    eprintln!(
                        "witness of {} frames is infeasible for B={}",
                        sc.opt_witness.len(),
                        sc.b
                    );
                }
                ok &= f.feasible;
            }
            println!("{}: {}", instance.display(), if ok { "ok" } else { "invalid" });
            Ok(status(ok))
        }
        Command::Sweep {
            config,
            out_csv,
            out_json,
        } => {
            let cfg = SweepConfig::read(&config).with_context(|| format!("reading {}", config.display()))?;
            let report = sweep(&cfg)?;
            if let Some(path) = out_csv {
                report.write_csv(path)?;
            }
            if let Some(path) = out_json {
                report.write_json(path)?;
            }
            let failed: Vec<_> = report.failures().collect();
            for r in &failed {
                eprintln!(
                    "FAIL {} k={} B={} seed={} {}: ratio {} claims [{}] upper bound {:?} violations {}",
                    r.family, r.k, r.b, r.seed, r.policy, r.ratio, r.failed_claims, r.upper_bound_ok, r.violations
                );
            }
            println!("{} rows, {} failed", report.rows.len(), failed.len());
            Ok(status(failed.is_empty()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            // A witness that does not fit or an illegal policy move is a failed check, not bad input.
            match e.downcast_ref::<Error>() {
                Some(
                    Error::InfeasibleCertificate { .. } | Error::IllegalDecision { .. } | Error::Consistency { .. },
                ) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
