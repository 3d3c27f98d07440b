use std::io::{stdout, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use robustcolor::config::{Flags, Settings};
use robustcolor::error::CliError;
use robustcolor::experiments;
use robustcolor::format::write_coloring;
use robustcolor_core::avoid::{avoid_lower_bound, build_covering, message_bound, AvoidInstance, DEFAULT_ENUMERATION_CAP};

#[derive(Parser)]
#[command(name = "robustcolor", version, about = "Adversarially robust streaming graph coloring experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play adaptive adversaries against an algorithm.
    Attack(Flags),
    /// Peak space of insert-only runs across degree bounds.
    BenchSpace {
        #[command(flatten)]
        flags: Flags,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
        degrees: Vec<usize>,
    },
    /// Solve subset avoidance through a coloring algorithm.
    AvoidDemo {
        #[command(flatten)]
        flags: Flags,
        /// Color budget.
        #[arg(long = "K", default_value_t = 8)]
        colors: usize,
    },
    /// Communication lower bound for subset avoidance.
    AvoidBounds {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        /// Number of independent instances.
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Exact binomial form instead of the relaxation.
        #[arg(long)]
        exact: bool,
        /// Also build and verify a covering protocol.
        #[arg(long)]
        covering: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo tail of the max degree of a uniform random graph.
    RandomGraphCheck {
        #[command(flatten)]
        flags: Flags,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
    },
    /// Check a stream file against the input promises.
    Validate(Flags),
    /// Run one algorithm over a stream file.
    Replay {
        #[command(flatten)]
        flags: Flags,
        /// Write the final coloring here.
        #[arg(long)]
        colorings: Option<PathBuf>,
    },
}

fn stream_arg(flags: &Flags) -> Result<PathBuf, CliError> {
    flags.stream.clone().ok_or_else(|| CliError::invalid("--stream is required"))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut out = stdout().lock();
    match cli.command {
        Command::Attack(flags) => {
            experiments::attack(&Settings::resolve(&flags)?, &mut out)?;
        }
        Command::BenchSpace { flags, degrees } => {
            let max = degrees.iter().copied().max().unwrap_or(1);
            let l = flags.l.unwrap_or(max).max(max);
            let s = Settings::resolve(&Flags { l: Some(l), ..flags })?;
            experiments::bench_space(&s, &degrees, &mut out)?;
        }
        Command::AvoidDemo { flags, colors } => {
            let flags = Flags { l: flags.l.or(Some(4)), algorithm: flags.algorithm.or(Some("switching-2".into())), ..flags };
            experiments::avoid_demo(&Settings::resolve(&flags)?, colors, &mut out)?;
        }
        Command::AvoidBounds { t, a, b, k, delta, exact, covering, seed } => {
            let inst = AvoidInstance::new(t, a, b, k, delta).map_err(|e| CliError::invalid(e.to_string()))?;
            writeln!(out, "{:.4}", avoid_lower_bound(&inst, exact))?;
            if covering {
                if t > u32::MAX as u64 {
                    return Err(CliError::invalid("--t too large for a covering"));
                }
                let c = build_covering(t as u32, a as u32, b as u32, seed, 100, DEFAULT_ENUMERATION_CAP).map_err(|e| CliError::invalid(e.to_string()))?;
                writeln!(out, "covering z {} message_bits {} bound {:.4} verified {}", c.len(), c.message_bits(), message_bound(t, a, b), c.verify())?;
            }
        }
        Command::RandomGraphCheck { flags, eps } => {
            let s = Settings::resolve(&Flags { m: flags.m.or(Some(64)), ..flags })?;
            experiments::random_graph(&s, s.m, eps, &mut out)?;
        }
        Command::Validate(flags) => {
            let path = stream_arg(&flags)?;
            let tokens = experiments::load_stream(&path)?;
            let n = flags.n.unwrap_or_else(|| robustcolor::format::implied_n(&tokens));
            let st = robustcolor::format::validate_stream(&tokens, n, flags.l)?;
            writeln!(out, "ok: {} tokens, n {}, max degree {}, {} live edges", st.tokens, st.n, st.max_degree, st.final_edges)?;
        }
        Command::Replay { flags, colorings } => {
            let path = stream_arg(&flags)?;
            let tokens = experiments::load_stream(&path)?;
            let (n, l) = experiments::stream_shape(&tokens, flags.n, flags.l)?;
            let s = Settings::resolve(&Flags { n: Some(n), l: Some(l), adversary: Some("file".into()), ..flags })?;
            let tr = match &s.out {
                Some(p) => experiments::replay(&s, &tokens, std::fs::File::create(p)?)?,
                None => experiments::replay(&s, &tokens, &mut out)?,
            };
            if let Some(p) = colorings {
                let mut s2 = s.clone();
                s2.query_every_token = false;
                let mut alg = experiments::build_algorithm(&s2, experiments::trial_seed(s.seed, 0), tokens.iter().all(|t| t.token.is_insert()))?;
                for t in &tokens {
                    alg.process(t.token).map_err(|e| CliError::Failed(format!("line {}: {e}", t.line)))?;
                }
                let c = alg.query().map_err(|e| CliError::Failed(e.to_string()))?;
                write_coloring(std::io::BufWriter::new(std::fs::File::create(p)?), &c)?;
            }
            if let Some((step, e)) = &tr.failure {
                return Err(CliError::Failed(format!("algorithm failed at step {step}: {e}")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("ROBUSTCOLOR_THREADS") {
        match v.parse::<usize>() {
            Ok(t) if t > 0 => {
                rayon::ThreadPoolBuilder::new().num_threads(t).build_global().expect("thread pool is configured once");
            }
            _ => {
                eprintln!("error: ROBUSTCOLOR_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
