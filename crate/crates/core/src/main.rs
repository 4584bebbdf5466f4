use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cyclic_curves::genus::Method;
use cyclic_curves::workbench::{self, Command, CurveCheck, RunConfig, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "cyclic", version, about = "Cyclic arcs, Segre envelopes and the genus of cyclic curves")]
struct Cli {
    /// Seed for randomized oracles.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Progress on stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    /// Include wall-clock timings (makes the report nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

/// `--p P [--h H]` or `--field p^h/c0,...,1`.
#[derive(Args)]
struct FieldArgs {
    #[arg(long, conflicts_with = "field")]
    p: Option<u64>,
    #[arg(long, default_value_t = 1, conflicts_with = "field")]
    h: u32,
    #[arg(long)]
    field: Option<String>,
}

impl FieldArgs {
    fn spec(&self) -> Result<String, String> {
        match (&self.field, self.p) {
            (Some(s), _) => Ok(s.clone()),
            (None, Some(p)) if self.h == 1 => Ok(p.to_string()),
            (None, Some(p)) => Ok(format!("{p}^{}", self.h)),
            (None, None) => Err("one of --p or --field is required".into()),
        }
    }
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    t: u32,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    eps1: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    eps2: String,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field tower GF(p) < GF(q) < GF(q^3) and the Singer cycle.
    Fields(FieldArgs),
    /// Singer orbit of size k in PG(2,q).
    Arc {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        check_complete: bool,
    },
    /// Segre envelope of a Singer-orbit arc (q odd).
    Envelope {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u64,
        /// Also run the genus pipeline on the canonical form.
        #[arg(long)]
        genus: bool,
    },
    /// Canonical curve and its structural checks.
    Curve {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value = "all", value_parser = ["all", "lemmas", "eta"])]
        check: String,
    },
    /// Genus by Riemann-Hurwitz, by delta invariants and by formula.
    Genus {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value = "all", value_parser = ["all", "hurwitz", "delta", "formula"])]
        method: String,
    },
    /// Feasible (q, k) with hypothesis flags.
    Enumerate {
        #[arg(long, default_value_t = 2)]
        q_lo: u64,
        #[arg(long)]
        q_hi: u64,
    },
    /// Genus cross-check over a (t, p) grid, both curve types.
    Grid {
        #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
        t: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "5,7,11,13")]
        p: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value = "all", value_parser = ["all", "hurwitz", "delta", "formula"])]
        method: String,
    },
    /// Re-run a persisted config (or a report containing one).
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn build_config(cli: &Cli) -> Result<RunConfig, String> {
    let err = |e: cyclic_curves::Error| e.to_string();
    let command = match &cli.cmd {
        Cmd::Fields(f) => Command::Fields { field: f.spec()? },
        Cmd::Arc { q, k, check_complete } => Command::Arc {
            q: *q,
            k: *k,
            check_complete: *check_complete,
        },
        Cmd::Envelope { q, k, genus } => Command::Envelope { q: *q, k: *k, genus: *genus },
        Cmd::Curve { curve, check } => Command::Curve {
            field: curve.field.spec()?,
            t: curve.t,
            eps1: curve.eps1.clone(),
            eps2: curve.eps2.clone(),
            c: curve.c.clone(),
            check: CurveCheck::parse(check).map_err(err)?,
        },
        Cmd::Genus { curve, method } => Command::Genus {
            field: curve.field.spec()?,
            t: curve.t,
            eps1: curve.eps1.clone(),
            eps2: curve.eps2.clone(),
            c: curve.c.clone(),
            method: Method::parse(method).map_err(err)?,
        },
        Cmd::Enumerate { q_lo, q_hi } => Command::Enumerate { q_lo: *q_lo, q_hi: *q_hi },
        Cmd::Grid { t, p, workers, method } => Command::Grid {
            t: t.clone(),
            p: p.clone(),
            workers: *workers,
            method: Method::parse(method).map_err(err)?,
        },
        Cmd::Run { config } => {
            let text = std::fs::read_to_string(config).map_err(|e| format!("{}: {e}", config.display()))?;
            let mut cfg = RunConfig::from_json_str(&text).map_err(err)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            cfg.timings |= cli.timings;
            cfg.verbose = cli.verbose;
            cfg.out = cli.out.as_ref().map(|p| p.display().to_string());
            return Ok(cfg);
        }
    };
    let mut cfg = RunConfig::new(command);
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.timings = cli.timings;
    cfg.verbose = cli.verbose;
    cfg.out = cli.out.as_ref().map(|p| p.display().to_string());
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let report = workbench::run(&cfg);
    let text = report.to_json_string();
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
        None => print!("{text}"),
    }
    if let Some(e) = &report.error {
        eprintln!("{}: {e}", report.status);
    } else if cfg.verbose {
        eprintln!("{}", report.status);
    }
    ExitCode::from(report.exit_code as u8)
}
