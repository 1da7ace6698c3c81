use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use chirpbeam::analysis::overhead_closed_form;
use chirpbeam::codebook::write_codebook;
use chirpbeam::experiment::{
    inspect_codebook, inspect_pattern, run_sweep, write_csv, CodebookSelector, DerivedConstants, ExperimentConfig,
};
use chirpbeam::training::Trainer;
use chirpbeam::{Error, Result};

#[derive(Parser)]
#[command(name = "chirpbeam", version, about = "Chirp-based near-field beam training experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo sweep and write per-trial CSV plus a run manifest.
    Sweep {
        config: PathBuf,
        /// Override `run.seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Override `run.output`; `-` writes the CSV to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Export the k-b coherence map of one chirp codeword.
    Pattern {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k0: f64,
        #[arg(long, allow_hyphen_values = true)]
        b0: f64,
        /// Samples per axis.
        #[arg(long, default_value_t = 64)]
        res: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a codebook: top, layer=<l>, elementary, dft or distance-ring.
    Codebook {
        config: PathBuf,
        #[arg(long)]
        which: String,
        /// Include the complex codeword entries.
        #[arg(long)]
        entries: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the derived constants of every array in the config.
    Constants { config: PathBuf },
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) if p != Path::new("-") => {
            let file = File::create(p).map_err(|e| Error::Io {
                path: p.to_path_buf(),
                source: e,
            })?;
            Ok(Box::new(BufWriter::new(file)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> Error + '_ {
    move |e| Error::Io {
        path: path.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("<stdout>")),
        source: e,
    }
}

fn derived(config: &ExperimentConfig) -> Result<Vec<DerivedConstants>> {
    let mut out: Vec<DerivedConstants> = Vec::new();
    for i in 0..config.sweep_values.len() {
        let sys = config.system_at(i)?;
        if out.iter().any(|d| d.n_bs == sys.n_bs()) {
            continue;
        }
        let trainer = Trainer::new(&sys, &config.trainer_options())?;
        out.push(DerivedConstants::of(&sys, &trainer));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { config, seed, output } => {
            let mut cfg = ExperimentConfig::from_path(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if output.is_some() {
                cfg.output = output;
            }
            let result = run_sweep(&cfg)?;
            let target = cfg.output.as_deref().filter(|p| *p != Path::new("-"));
            let mut out = open_output(target)?;
            write_csv(&mut out, &result.rows)
                .and_then(|_| out.flush())
                .map_err(io_err(target))?;
            if let Some(path) = target {
                let mut manifest = path.as_os_str().to_owned();
                manifest.push(".manifest.toml");
                let manifest = PathBuf::from(manifest);
                std::fs::write(&manifest, result.manifest.to_toml()).map_err(|e| Error::Io {
                    path: manifest.clone(),
                    source: e,
                })?;
                eprintln!(
                    "wrote {} rows to {} (manifest {})",
                    result.rows.len(),
                    path.display(),
                    manifest.display()
                );
            }
        }
        Command::Pattern {
            config,
            k0,
            b0,
            res,
            out,
        } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let sys = cfg.system_at(0)?;
            let map = inspect_pattern(&sys, k0, b0, res)?;
            let mut w = open_output(out.as_deref())?;
            map.write_matrix(&mut w, Some(&sys))
                .and_then(|_| w.flush())
                .map_err(io_err(out.as_deref()))?;
        }
        Command::Codebook {
            config,
            which,
            entries,
            out,
        } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let selector: CodebookSelector = which.parse()?;
            let sys = cfg.system_at(0)?;
            let codewords = inspect_codebook(&sys, selector, &cfg.trainer_options())?;
            let mut w = open_output(out.as_deref())?;
            write_codebook(&mut w, sys.n_bs(), &codewords, entries)
                .and_then(|_| w.flush())
                .map_err(io_err(out.as_deref()))?;
            eprintln!(
                "{} codewords (n_bs = {}, N1 = {}, L = {}, hierarchical overhead = {})",
                codewords.len(),
                sys.n_bs(),
                chirpbeam::codebook::top_layer_count(&sys),
                chirpbeam::codebook::hierarchy_depth(&sys),
                overhead_closed_form(&sys)
            );
        }
        Command::Constants { config } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            #[derive(serde::Serialize)]
            struct Report {
                system: Vec<DerivedConstants>,
            }
            let text = toml::to_string(&Report { system: derived(&cfg)? }).expect("constants serialize");
            print!("{text}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
