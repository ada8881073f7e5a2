mod config;
mod source;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use recur_core::{
    cross_check, lr_constant_estimate, power_report_capped, rate_series, return_word_counts, rotation_source,
    CfExpansion, GeneratedWord, QuadraticReal, RotationSpec, WindowPolicy, POWER_WINDOW_CAP,
};

use crate::config::ConfigFile;
use crate::source::SourceArgs;
use crate::verify::Suite;

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] recur_core::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Degraded(String),
    #[error("{0}")]
    Verification(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Core(_) | Failure::Io(_) => 1,
            Failure::Degraded(_) => 2,
            Failure::Verification(_) => 3,
        }
    }
}

/// Recurrence of cylinders in Sturmian and substitution words.
#[derive(Parser, Debug)]
#[command(name = "recur", version)]
struct Cli {
    /// Flat key = value file; command line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for per-depth computations.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct PolicyArgs {
    /// Smallest search window.
    #[arg(long)]
    initial_window: Option<usize>,
    /// Minimum window per unit of depth.
    #[arg(long)]
    per_n: Option<usize>,
    /// Largest window ever searched.
    #[arg(long)]
    window_cap: Option<usize>,
}

impl PolicyArgs {
    fn resolve(&self, cfg: &ConfigFile) -> Result<WindowPolicy, Failure> {
        let d = WindowPolicy::default();
        let p = WindowPolicy {
            initial_min: cfg.or(self.initial_window, "initial_window")?.unwrap_or(d.initial_min),
            per_n: cfg.or(self.per_n, "per_n")?.unwrap_or(d.per_n),
            cap: cfg.or(self.window_cap, "window_cap")?.unwrap_or(d.cap),
        };
        p.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(p)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a prefix of a word as a single line of symbols.
    Generate {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Return times of the prefixes of length 1..=N, as CSV.
    Rates {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(short = 'N', long = "depth")]
        depth: Option<usize>,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Return-word tables of the prefixes of length 1..=N, as CSV.
    Returns {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(short = 'N', long = "depth")]
        depth: Option<usize>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Largest fractional power in a window, as JSON.
    Power {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        window: Option<usize>,
        /// Longest window actually scanned.
        #[arg(long)]
        power_cap: Option<usize>,
    },
    /// Linear recurrence constant estimate over factors up to length L, as JSON.
    Lr {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(short = 'L', long = "max-len")]
        max_len: Option<usize>,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Symbolic against geometric return times for the coding of 0, as CSV.
    Xcheck {
        #[arg(long)]
        cf: Option<String>,
        #[arg(short = 'N', long = "depth")]
        depth: Option<usize>,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run a named verification suite; JSON summary on stdout.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Angle for xcheck-rotation and bounded-cf.
        #[arg(long)]
        cf: Option<String>,
        /// Depth override for suites that sweep n.
        #[arg(short = 'N', long = "depth")]
        depth: Option<usize>,
        /// Random sequences drawn by kappa-ratio.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        rng_seed: Option<u64>,
        #[command(flatten)]
        policy: PolicyArgs,
    },
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn required<T>(v: Option<T>, what: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing {what}")))
}

fn parse_cf(text: &str) -> Result<CfExpansion, Failure> {
    text.parse().map_err(|e: recur_core::Error| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    if let Some(jobs) = cfg.or(cli.jobs, "jobs")? {
        if jobs == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let output = |flag: &Option<PathBuf>| cfg.or(flag.clone(), "output");

    match &cli.command {
        Command::Generate { source, length, output: out } => {
            let length = required(cfg.or(*length, "length")?, "--length")?;
            let src = source.resolve(&cfg)?;
            let x = GeneratedWord::from_source(src, length)?;
            let mut w = sink(output(out)?.as_deref())?;
            writeln!(w, "{}", x.prefix)?;
            w.flush()?;
            eprintln!("length={} source={}", x.len(), x.source);
        }
        Command::Rates {
            source,
            depth,
            policy,
            output: out,
        } => {
            let depth = required(cfg.or(*depth, "depth")?, "-N/--depth")?;
            let policy = policy.resolve(&cfg)?;
            let x = GeneratedWord::from_source(source.resolve(&cfg)?, 1)?;
            let series = rate_series(&x, depth, &policy)?;
            let mut w = sink(output(out)?.as_deref())?;
            series.write_csv(&mut w)?;
            w.flush()?;
            let tail = series.tail();
            let show = |r: Option<recur_core::LengthRatio>| r.map_or("-".to_string(), |r| r.to_string());
            eprintln!(
                "source={} tail n in ({}, {}]: min ratio {} max ratio {} (stabilized {}, unstabilized {})",
                series.source,
                tail.after,
                tail.through,
                show(tail.r_lower),
                show(tail.r_upper),
                tail.stabilized,
                tail.unstabilized
            );
            let bad = series.unstabilized();
            if bad > 0 {
                return Err(Failure::Degraded(format!("{bad} of {depth} entries did not stabilize")));
            }
        }
        Command::Returns {
            source,
            depth,
            window,
            output: out,
        } => {
            let depth = required(cfg.or(*depth, "depth")?, "-N/--depth")?;
            let window = cfg.or(*window, "window")?.unwrap_or(100_000);
            let x = GeneratedWord::from_source(source.resolve(&cfg)?, window)?;
            let mut w = sink(output(out)?.as_deref())?;
            writeln!(w, "n,return_word,length,count")?;
            for n in 1..=depth.min(x.len()) {
                for (word, count) in return_word_counts(&x.prefix[..n], &x.prefix)? {
                    writeln!(w, "{n},{word},{},{count}", word.len())?;
                }
            }
            w.flush()?;
        }
        Command::Power {
            source,
            window,
            power_cap,
        } => {
            let window = cfg.or(*window, "window")?.unwrap_or(POWER_WINDOW_CAP);
            let cap = cfg.or(*power_cap, "power_cap")?.unwrap_or(POWER_WINDOW_CAP);
            let x = GeneratedWord::from_source(source.resolve(&cfg)?, window.min(cap).max(16))?;
            let report = power_report_capped(&x, window, cap)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Command::Lr {
            source,
            max_len,
            window,
        } => {
            let max_len = required(cfg.or(*max_len, "max_len")?, "-L/--max-len")?;
            let window = cfg.or(*window, "window")?.unwrap_or(100_000);
            let x = GeneratedWord::from_source(source.resolve(&cfg)?, window)?;
            let report = lr_constant_estimate(&x, max_len, window)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        }
        Command::Xcheck {
            cf,
            depth,
            policy,
            output: out,
        } => {
            let cf = parse_cf(&required(cfg.or(cf.clone(), "cf")?, "--cf")?)?;
            let depth = required(cfg.or(*depth, "depth")?, "-N/--depth")?;
            let policy = policy.resolve(&cfg)?;
            let spec = RotationSpec::from_cf(&cf)?;
            let x = GeneratedWord::from_source(rotation_source(&cf, QuadraticReal::zero())?, 1)?;
            let report = cross_check(&spec, &x, depth, &policy)?;
            let mut w = sink(output(out)?.as_deref())?;
            report.write_csv(&mut w)?;
            w.flush()?;
            let bad: Vec<usize> = report.mismatches().map(|r| r.n).collect();
            eprintln!("cf={cf} depth={depth} mismatches={}", bad.len());
            if let Some(n) = bad.first() {
                return Err(Failure::Verification(format!("first mismatch at n={n}")));
            }
        }
        Command::Verify {
            suite,
            cf,
            depth,
            samples,
            rng_seed,
            policy,
        } => {
            let opts = verify::Options {
                cf: cfg.or(cf.clone(), "cf")?.map(|c| parse_cf(&c)).transpose()?,
                depth: cfg.or(*depth, "depth")?,
                samples: cfg.or(*samples, "samples")?.unwrap_or(1000),
                seed: cfg.or(*rng_seed, "rng_seed")?.unwrap_or(0x6b61707061),
                policy: policy.resolve(&cfg)?,
            };
            let report = verify::run(*suite, &opts)?;
            for c in &report.checks {
                eprintln!("[{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            if !report.pass {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
                return Err(Failure::Verification(format!("failed: {}", failed.join(", "))));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
