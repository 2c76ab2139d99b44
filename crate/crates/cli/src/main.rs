use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rcldpc::code::{build_standard_code, emit_alist, STANDARD_CODES};
use rcldpc::puncture::{parse_decimal, punctured_count, punctured_rate, required_overhead, Rational};
use rcldpc::sim::{write_csv, write_json, Mode, SimConfig, SnrAxis, Simulation};

#[derive(Parser)]
#[command(name = "rcldpc", version, about = "Punctured LDPC + CPM link simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a BER/FER sweep over SNR and puncturing overhead.
    Simulate(SimulateArgs),
    /// Punctured rate for an overhead, or the overhead needed for a target rate.
    Rate {
        /// Native code rate, e.g. `2/3` or `0.8`.
        #[arg(long)]
        native: String,
        /// Overhead in percent.
        #[arg(long, conflicts_with = "target")]
        delta: Option<String>,
        /// Target rate, e.g. `4/5`.
        #[arg(long)]
        target: Option<String>,
        /// Code length, to report the number of punctured bits.
        #[arg(long)]
        n: Option<usize>,
    },
    /// List the built-in codes.
    Codes,
    /// Write a built-in code's parity-check matrix in alist format.
    Alist {
        code: String,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// TOML config file; every key is optional.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    mode: Option<Mode>,
    /// Comma-separated overheads in percent, e.g. `0,1,5,10,16.7`.
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<f64>>,
    /// Eb/N0 sweep `start:stop:step` in dB.
    #[arg(long, conflicts_with = "esn0")]
    ebn0: Option<String>,
    /// Es/N0 sweep `start:stop:step` in dB.
    #[arg(long)]
    esn0: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// CSV output; a JSON sidecar is written next to it. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress per-point progress on stderr.
    #[arg(long, short)]
    quiet: bool,
}

fn parse_rate(s: &str) -> Result<Rational> {
    if let Some((a, b)) = s.split_once('/') {
        let a: i128 = a.trim().parse().with_context(|| format!("bad rate {s:?}"))?;
        let b: i128 = b.trim().parse().with_context(|| format!("bad rate {s:?}"))?;
        if b == 0 {
            bail!("bad rate {s:?}");
        }
        Ok(Rational::new(a, b))
    } else {
        Ok(parse_decimal(s)?)
    }
}

fn as_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => SimConfig::load(path).with_context(|| format!("loading {}", path.display()))?,
        None => SimConfig::default(),
    };
    if let Some(m) = args.mode {
        cfg.mode = m;
    }
    if let Some(d) = args.delta {
        cfg.deltas = d;
    }
    if let Some(s) = args.ebn0 {
        cfg.snr = s;
        cfg.snr_axis = SnrAxis::Ebn0;
    }
    if let Some(s) = args.esn0 {
        cfg.snr = s;
        cfg.snr_axis = SnrAxis::Esn0;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    let sim = Simulation::new(cfg.clone()).context("invalid configuration")?;
    if !args.quiet {
        eprintln!(
            "{} (n={}, k={}), mode {}, {} worker(s)",
            sim.code().name(),
            sim.code().n(),
            sim.code().k(),
            cfg.mode,
            sim.workers()
        );
    }
    let quiet = args.quiet;
    let records = sim.run_sweep_with(|r| {
        if !quiet {
            eprintln!(
                "delta {:>5}%  Eb/N0 {:>7.3} dB  frames {:>8}  ber {:.3e}  fer {:.3e}  ({:.1}s)",
                r.delta_pct, r.ebn0_db, r.frames, r.ber, r.fer, r.wall_clock_s
            );
        }
    })?;
    match &args.out {
        Some(path) => {
            let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(std::io::BufWriter::new(file), &records)?;
            write_json(&path.with_extension("json"), &cfg, sim.code(), &records)?;
        }
        None => write_csv(std::io::stdout().lock(), &records)?,
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => simulate(args)?,
        Command::Rate {
            native,
            delta,
            target,
            n,
        } => {
            let r = parse_rate(&native)?;
            match (delta, target) {
                (Some(d), _) => {
                    let d = parse_decimal(&d)?;
                    let rp = punctured_rate(r, d)?;
                    print!("R_p = {rp} = {:.6}", as_f64(rp));
                    if let Some(n) = n {
                        print!(" (N_phi = {})", punctured_count(d, n));
                    }
                    println!();
                }
                (None, Some(t)) => {
                    let d = required_overhead(r, parse_rate(&t)?)?;
                    println!("delta = {d}% = {:.4}%", as_f64(d));
                }
                (None, None) => bail!("give --delta or --target"),
            }
        }
        Command::Codes => {
            for (name, n, k) in STANDARD_CODES {
                println!("{name:<26} n={n:<5} k={k}");
            }
        }
        Command::Alist { code, out } => {
            let text = emit_alist(build_standard_code(&code)?.h());
            match out {
                Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => std::io::stdout().write_all(text.as_bytes())?,
            }
        }
    }
    Ok(())
}
