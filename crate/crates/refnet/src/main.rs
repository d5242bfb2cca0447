use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use refnet::experiments::{
    estimate_graph_laws, read_records_csv, run_sweep, stats_from_records, write_records_csv,
    write_stats_csv, SweepConfig,
};
use refnet::io::{
    format_digraph, format_network, format_state, parse_network, parse_state, read_file,
    summary_json, write_file,
};
use refnet::verify::{run_suite, Suite, VerifyOptions};
use refnet_core::analysis::{detect_brent, Restriction};
use refnet_core::constructions::WitnessSpec;
use refnet_core::{
    detect_decomposed, detect_hashing, gen_erdos_renyi, random_state, DecomposeOptions,
    DetectOptions, Network, State,
};

const EXIT_INPUT: u8 = 1;
const EXIT_CAPPED: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

/// Refractory threshold networks on random digraphs.
///
/// Exit status: 0 on success, 1 on invalid input, 2 when a run was capped,
/// 3 when a verification suite found violations.
#[derive(Debug, Parser)]
#[command(name = "refnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a random digraph with arc probability min(c / n, 1).
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Arc-list file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a constructed network with its initial state.
    Construct {
        #[arg(value_enum)]
        kind: Kind,
        /// Cycle length (nsc, nsc1, nscp).
        #[arg(long)]
        len: Option<usize>,
        /// Refractory period (nsc1, nscp, tree).
        #[arg(long)]
        p: Option<u16>,
        /// Comma-separated odd cycle lengths (landau).
        #[arg(long, value_delimiter = ',')]
        ks: Vec<usize>,
        /// Tree depth (tree).
        #[arg(long)]
        depth: Option<usize>,
        /// Branching factor and threshold (tree).
        #[arg(long)]
        th: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the trajectory, one state per line.
    Simulate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        steps: usize,
    },
    /// Measure transient and attractor length; prints a JSON summary.
    Detect {
        #[command(flatten)]
        input: Input,
        /// Largest tau + alpha to resolve (per component for `decomposed`).
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
        #[arg(long, value_enum, default_value_t = Method::Hashing)]
        method: Method,
        /// Also report when each node becomes minimally cycling.
        #[arg(long)]
        onsets: bool,
    },
    /// Run a parameter sweep from a TOML config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_records: PathBuf,
        #[arg(long)]
        out_stats: Option<PathBuf>,
        /// Worker threads; the output does not depend on it.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Per-cell statistics of a records CSV.
    Stats {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Giant-component sizes and short-cycle counts of random digraphs.
    Laws {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 50)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a named invariant suite.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        seed: Option<u64>,
        /// Fuzzed instances for the props suite.
        #[arg(long)]
        cases: Option<usize>,
    },
}

#[derive(Debug, clap::Args)]
struct Input {
    /// Network file, possibly carrying an `s:` line.
    #[arg(long)]
    net: PathBuf,
    /// State file; overrides the state in the network file.
    #[arg(long, conflicts_with = "random_state")]
    state: Option<PathBuf>,
    /// Draw a uniform initial state from --seed.
    #[arg(long, requires = "seed")]
    random_state: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Nsc,
    Nsc1,
    Nscp,
    Landau,
    Tree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Hashing,
    Brent,
    Decomposed,
}

/// Input problems exit with 1; everything else is reported by the command.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_file(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_input(input: &Input) -> Result<(Network, State)> {
    let (net, embedded) = parse_network(&read_file(&input.net)?)
        .with_context(|| format!("reading {}", input.net.display()))?;
    let state = if let Some(path) = &input.state {
        let s = parse_state(&read_file(path)?)
            .with_context(|| format!("reading {}", path.display()))?;
        s.validate(&net)?;
        s
    } else if input.random_state {
        let seed = input.seed.expect("clap enforces --seed");
        random_state(&net, &mut ChaCha8Rng::seed_from_u64(seed))
    } else {
        embedded.ok_or_else(|| anyhow!("no initial state: pass --state or --random-state"))?
    };
    Ok((net, state))
}

fn witness_spec(
    kind: Kind,
    len: Option<usize>,
    p: Option<u16>,
    ks: Vec<usize>,
    depth: Option<usize>,
    th: Option<u32>,
) -> Result<WitnessSpec> {
    let need = |name: &str| anyhow!("--{name} is required for this construction");
    Ok(match kind {
        Kind::Nsc => WitnessSpec::Nsc {
            len: len.ok_or_else(|| need("len"))?,
        },
        Kind::Nsc1 => WitnessSpec::Nsc1 {
            len: len.ok_or_else(|| need("len"))?,
            p: p.ok_or_else(|| need("p"))?,
        },
        Kind::Nscp => WitnessSpec::NscP {
            len: len.ok_or_else(|| need("len"))?,
            p: p.ok_or_else(|| need("p"))?,
        },
        Kind::Landau => {
            if ks.is_empty() {
                return Err(need("ks"));
            }
            WitnessSpec::Landau { ks }
        }
        Kind::Tree => WitnessSpec::Tree {
            depth: depth.ok_or_else(|| need("depth"))?,
            branching: th.ok_or_else(|| need("th"))?,
            p: p.ok_or_else(|| need("p"))?,
        },
    })
}

fn run(command: Command) -> Result<ExitCode, InputError> {
    match command {
        Command::Gen { n, c, seed, out } => {
            if n == 0 || !c.is_finite() || c < 0.0 {
                Err(anyhow!("need n >= 1 and a finite c >= 0"))?;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = gen_erdos_renyi(n, (c / n as f64).min(1.0), &mut rng)?;
            emit(out.as_deref(), &format_digraph(&g))?;
            if out.is_some() {
                println!("{}", g.arc_count());
            } else {
                eprintln!("{} arcs", g.arc_count());
            }
        }
        Command::Construct {
            kind,
            len,
            p,
            ks,
            depth,
            th,
            out,
        } => {
            let (net, s0) = witness_spec(kind, len, p, ks, depth, th)?.build()?;
            emit(out.as_deref(), &format_network(&net, Some(&s0)))?;
        }
        Command::Simulate { input, steps } => {
            let (net, s0) = load_input(&input)?;
            let mut text = String::new();
            for s in net.simulate(&s0, steps)? {
                text.push_str(&format_state(&s));
            }
            emit(None, &text)?;
        }
        Command::Detect {
            input,
            cap,
            method,
            onsets,
        } => {
            let (net, s0) = load_input(&input)?;
            let opts = DetectOptions::with_step_cap(cap);
            let mut summary = match method {
                Method::Hashing => detect_hashing(&net, &s0, &opts)?,
                Method::Brent => detect_brent(&net, &s0, &opts)?,
                Method::Decomposed => detect_decomposed(
                    &net,
                    &s0,
                    &DecomposeOptions {
                        per_component: opts,
                        restriction: Restriction::Sinks,
                    },
                )?,
            };
            if onsets && !summary.capped && summary.alpha_u64().is_some() {
                summary = summary.with_min_cycling(&net, &s0)?;
            }
            println!("{}", summary_json(&summary));
            if summary.capped {
                return Ok(ExitCode::from(EXIT_CAPPED));
            }
        }
        Command::Sweep {
            config,
            out_records,
            out_stats,
            jobs,
        } => {
            let cfg = SweepConfig::load(&config)?;
            if jobs == 0 {
                Err(anyhow!("--jobs must be at least 1"))?;
            }
            let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
            let records = pool.install(|| run_sweep(&cfg));
            let mut buf = Vec::new();
            write_records_csv(&records, &mut buf)?;
            write_file(&out_records, std::str::from_utf8(&buf)?)?;
            if let Some(path) = out_stats {
                let mut buf = Vec::new();
                write_stats_csv(&stats_from_records(&records)?, &mut buf)?;
                write_file(&path, std::str::from_utf8(&buf)?)?;
            }
            let capped = records.iter().filter(|r| r.capped_alpha).count();
            eprintln!("{} runs, {capped} capped", records.len());
        }
        Command::Stats { records, out } => {
            let file = std::fs::File::open(&records)
                .with_context(|| format!("opening {}", records.display()))?;
            let parsed = read_records_csv(file)?;
            let mut buf = Vec::new();
            write_stats_csv(&stats_from_records(&parsed)?, &mut buf)?;
            emit(out.as_deref(), std::str::from_utf8(&buf)?)?;
        }
        Command::Laws { n, c, reps, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let report = estimate_graph_laws(n, c, reps, &mut rng)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Verify { suite, seed, cases } => {
            let defaults = VerifyOptions::default();
            let opts = VerifyOptions {
                seed: seed.unwrap_or(defaults.seed),
                fuzz_cases: cases.unwrap_or(defaults.fuzz_cases),
            };
            let report = run_suite(suite, &opts);
            print!("{report}");
            if !report.passed() {
                return Ok(ExitCode::from(EXIT_VIOLATION));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn unknown_suite_is_a_usage_error() {
        let err = Cli::try_parse_from(["refnet", "verify", "--suite", "bogus"]).unwrap_err();
        assert!(err.use_stderr());
    }

    #[test]
    fn construct_requires_parameters() {
        assert!(witness_spec(Kind::Nsc, None, None, vec![], None, None).is_err());
        assert_eq!(
            witness_spec(Kind::Landau, None, None, vec![3, 5], None, None).unwrap(),
            WitnessSpec::Landau { ks: vec![3, 5] }
        );
    }
}
