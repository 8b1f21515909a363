//! Thin experiment CLI; all logic lives in `ccfr::experiments`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ccfr::experiments::{
    cmd_bound_audit, cmd_lp_compare, cmd_opponent_model, cmd_solve, cmd_transit_sweep,
    ExperimentConfig, ExperimentKind, RunOptions,
};

#[derive(Parser)]
#[command(name = "ccfr", about = "Constrained regret-minimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment configuration file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `out_dir` from the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Run past the desk-scale guards.
    #[arg(long)]
    override_scale_guard: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Constrained (or plain, with no constraints) self-play solve.
    Solve(Common),
    /// Risk-bound sweep on the transit game.
    TransitSweep(Common),
    /// Cross-check a constrained solve against the LP oracle.
    LpCompare(Common),
    /// Opponent-modeling learning curve from partial observations.
    OpponentModel(Common),
    /// Convergence-bound audit; exits nonzero on any violated bound.
    BoundAudit(Common),
}

fn load(common: &Common, expected: ExperimentKind) -> Result<(ExperimentConfig, RunOptions), String> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| format!("cannot read {}: {e}", common.config.display()))?;
    let cfg = ExperimentConfig::from_toml(&text).map_err(|e| e.to_string())?;
    if cfg.kind != expected {
        return Err(format!(
            "config kind {:?} does not match the subcommand",
            cfg.kind
        ));
    }
    let out_dir = common
        .out
        .clone()
        .or_else(|| cfg.out_dir.as_ref().map(PathBuf::from))
        .ok_or("no output directory: pass --out or set out_dir")?;
    Ok((
        cfg,
        RunOptions {
            out_dir,
            seed: common.seed,
            override_scale_guard: common.override_scale_guard,
        },
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(c) => load(c, ExperimentKind::Solve).and_then(|(cfg, opts)| {
            cmd_solve(&cfg, &opts)
                .map(|r| {
                    println!(
                        "solve done: value {:.6}, exploit proxy {:.6}, max violation {:.6}",
                        r.value,
                        r.exploit_proxy,
                        r.final_violations.iter().fold(0.0f64, |a, &v| a.max(v))
                    );
                })
                .map_err(|e| e.to_string())
        }),
        Command::TransitSweep(c) => load(c, ExperimentKind::TransitSweep).and_then(|(cfg, opts)| {
            cmd_transit_sweep(&cfg, &opts)
                .map(|rows| {
                    for r in rows {
                        println!(
                            "b_r {:.3}: risk {:.4}, evader BR {:.4}",
                            r.b_r, r.risk, r.evader_br_value
                        );
                    }
                })
                .map_err(|e| e.to_string())
        }),
        Command::LpCompare(c) => load(c, ExperimentKind::LpCompare).and_then(|(cfg, opts)| {
            cmd_lp_compare(&cfg, &opts)
                .map(|r| {
                    println!(
                        "lp-compare: value gap {:.6}, ccfr violation {:.6}, beta > lambda*: {}",
                        r.value_gap, r.ccfr_max_violation, r.beta_exceeds_lambda_star
                    );
                })
                .map_err(|e| e.to_string())
        }),
        Command::OpponentModel(c) => {
            load(c, ExperimentKind::OpponentModel).and_then(|(cfg, opts)| {
                cmd_opponent_model(&cfg, &opts)
                    .map(|rows| println!("opponent-model: {} rows written", rows.len()))
                    .map_err(|e| e.to_string())
            })
        }
        Command::BoundAudit(c) => load(c, ExperimentKind::BoundAudit).and_then(|(cfg, opts)| {
            cmd_bound_audit(&cfg, &opts)
                .map(|rows| println!("bound-audit: {} checkpoints, all bounds hold", rows.len()))
                .map_err(|e| e.to_string())
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
