//! `coset`: command line front end for coset shaping experiments.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 numerical
//! failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coset_shaping::harness::{
    energy_report_for, run_prepared, write_csv, ConstructionSource, ExperimentConfig, HarnessError,
};
use coset_shaping::metrics::capacity_sweep;
use coset_shaping::shaping::{encode_shaped, presets};
use coset_shaping::{BinVec, GrayTable};

#[derive(Parser, Debug)]
#[command(name = "coset", version, about = "Coset shaping for Gray-mapped PAM/QAM", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shaped encoding of one message: codeword, signals and energy.
    Encode {
        #[command(flatten)]
        construction: ConstructionArgs,
        /// Message bits, e.g. `01`.
        #[arg(long)]
        message: String,
    },
    /// Shaped and unshaped per-signal energies, gain and rates.
    Energy {
        #[command(flatten)]
        construction: ConstructionArgs,
        /// Take the construction and seed from an experiment config instead.
        #[arg(long, conflicts_with_all = ["preset", "file"])]
        config: Option<PathBuf>,
        /// Seed for the sampled estimate used on large codes.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo BER/FER/energy sweep described by a TOML config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; overrides the config, `-` for stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Worker threads; overrides the config.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Shannon, square-QAM and Gray-BICM threshold SNRs at a target rate.
    Capacity {
        /// Bits per PAM dimension; the QAM has 2^(2m) points.
        #[arg(long)]
        m: usize,
        /// Target rate in bits per QAM symbol.
        #[arg(long)]
        rate: f64,
    },
    /// Gray labels and amplitudes of 2^m-PAM.
    Tables {
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
}

#[derive(Args, Debug)]
struct ConstructionArgs {
    /// Built-in construction (`pam8-ns2` or `pam4-ns3`).
    #[arg(long, conflicts_with = "file")]
    preset: Option<String>,
    /// Construction file in the text format.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl ConstructionArgs {
    fn source(&self) -> Result<ConstructionSource, HarnessError> {
        match (&self.preset, &self.file) {
            (Some(name), None) => Ok(ConstructionSource::Preset { name: name.clone() }),
            (None, Some(path)) => Ok(ConstructionSource::File { path: path.clone() }),
            _ => Err(HarnessError::Config(format!(
                "give --preset ({}) or --file",
                presets::NAMES.join(", ")
            ))),
        }
    }
}

fn parse_message(text: &str) -> Result<BinVec, HarnessError> {
    text.parse::<BinVec>()
        .map_err(|e| HarnessError::Config(format!("bad message {text:?}: {e}")))
}

fn write_err(e: io::Error) -> HarnessError {
    HarnessError::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Encode { construction, message } => {
            let c = construction.source()?.prepare()?.construction;
            let u = parse_message(&message)?;
            let w = encode_shaped(&u, &c)?;
            let signals: Vec<String> = w.s.amps().iter().map(|a| a.to_string()).collect();
            writeln!(out, "message      {}", w.u).map_err(write_err)?;
            writeln!(out, "shaping bits {}", w.u_sh).map_err(write_err)?;
            writeln!(out, "codeword     {}", w.v).map_err(write_err)?;
            writeln!(out, "signals      {}", signals.join(" ")).map_err(write_err)?;
            writeln!(out, "energy       {}", w.energy).map_err(write_err)?;
            writeln!(out, "unsearched   {}", w.baseline_energy).map_err(write_err)?;
        }
        Command::Energy {
            construction,
            config,
            seed,
        } => {
            let (source, seed) = match config {
                Some(path) => {
                    let cfg = ExperimentConfig::load(&path)?;
                    (cfg.construction, cfg.seed)
                }
                None => (construction.source()?, seed),
            };
            let prepared = source.prepare()?;
            let r = energy_report_for(&prepared.construction, seed)?;
            let how = if r.exact {
                "exact".to_string()
            } else {
                format!("estimated from {} messages per system", r.samples)
            };
            writeln!(out, "construction        {}", prepared.label).map_err(write_err)?;
            writeln!(out, "shaped energy       {}", r.shaped_energy).map_err(write_err)?;
            writeln!(out, "unshaped energy     {}", r.unshaped_energy).map_err(write_err)?;
            writeln!(out, "uniform PAM energy  {}", r.uniform_energy).map_err(write_err)?;
            writeln!(out, "gain (dB)           {:.4}", r.gain_db).map_err(write_err)?;
            writeln!(out, "rate (bits/signal)  {}", r.rate_per_signal).map_err(write_err)?;
            writeln!(out, "code rate           {}", r.code_rate_per_signal).map_err(write_err)?;
            writeln!(out, "energies            {how}").map_err(write_err)?;
        }
        Command::Simulate {
            config,
            output,
            workers,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(o) = output {
                cfg.output = Some(o);
            }
            if workers.is_some() {
                cfg.workers = workers;
            }
            cfg.validate()?;
            let prepared = cfg.construction.prepare()?;
            if prepared.parity_check.is_some() {
                eprintln!(
                    "note: {} stands in for the long nonbinary LDPC codes, which are not simulated",
                    prepared.label
                );
            }
            let results = run_prepared(&prepared, &cfg)?;
            for r in &results {
                eprintln!(
                    "snr {:>6} dB  frames {:>8}  ber {:.3e}  fer {:.3e}  codeword ber {:.3e}  energy {:.4}  saved {:.4}",
                    r.snr_db, r.frames, r.ber, r.fer, r.codeword_ber, r.avg_energy, r.avg_energy_reduction
                );
            }
            match cfg.output.as_deref() {
                Some(path) if path.as_os_str() != "-" => {
                    let file = File::create(path).map_err(|e| HarnessError::Io {
                        path: path.display().to_string(),
                        source: e,
                    })?;
                    write_csv(&results, BufWriter::new(file))?;
                }
                _ => write_csv(&results, &mut out)?,
            }
        }
        Command::Capacity { m, rate } => {
            for p in capacity_sweep(m, rate)? {
                writeln!(out, "{:<8} {:.4} dB", p.kind.name(), p.snr_db).map_err(write_err)?;
            }
        }
        Command::Tables { m } => {
            let t = GrayTable::new(m).map_err(|e| HarnessError::Config(e.to_string()))?;
            write!(out, "{t}").map_err(write_err)?;
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
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
