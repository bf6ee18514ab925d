use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use entropy_chain::catalg::{spectral_lower_bound_check, CatalgConfig};
use entropy_chain::dynamics::{counts_csv, CapacityEstimate, VolumeGrowth};
use entropy_chain::harness::{
    capacity_csv, compare_entropies, crofton_series, run_bar, run_capacity, run_volume,
    sup_inf_sweep, write_artifacts, CompareFailure, ExperimentConfig,
};
use entropy_chain::persistence::{barcode, count_b_epsilon, parse_fcx, BarLength};
use entropy_chain::rational::parse_rational;
use entropy_chain::{Error, Result};

#[derive(Parser)]
#[command(
    name = "entropy-chain",
    version,
    about = "Entropy estimators and their comparison"
)]
struct Cli {
    /// Overrides the config's RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the config's output directory.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Overrides the config's inequality tolerance (natural-log units).
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a filtered complex file and print its barcode.
    Persist {
        file: PathBuf,
        /// Also report b_ε at this bar length.
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Categorical entropy of a twist word on a plumbing tree.
    Catent { config: PathBuf },
    /// Topological entropy estimators of a map.
    Topent { config: PathBuf },
    /// Crofton check along iterates of a curve.
    Crofton { config: PathBuf },
    /// Barcode-entropy experiment for the first configured pair.
    Bar { config: PathBuf },
    /// Full comparison with inequality verdicts.
    Compare { config: PathBuf },
    /// h_bar over a family of pairs, juxtaposed with h_top and h_cat.
    Sweep { config: PathBuf },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

impl Cli {
    fn config(&self, path: &Path) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::parse(&read(path)?)?;
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(d) = &self.out_dir {
            cfg.out_dir = d.clone();
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn emit(dir: &Path, files: Vec<(String, String)>) -> Result<()> {
    write_artifacts(dir, &files)?;
    for (name, _) in &files {
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}

#[derive(Serialize)]
struct PersistSummary {
    generators: usize,
    bars: usize,
    infinite: usize,
    b_epsilon: Option<usize>,
}

#[derive(Serialize)]
struct TopentReport<'a> {
    system: Option<&'a str>,
    capacity: Option<&'a CapacityEstimate>,
    volume: Option<&'a VolumeGrowth>,
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Persist { file, epsilon } => {
            let complex = parse_fcx(&read(file)?)?;
            let bars = barcode(&complex)?;
            let b_epsilon = match epsilon {
                Some(e) => Some(count_b_epsilon(
                    &bars,
                    BarLength::Finite(parse_rational(e)?),
                )?),
                None => None,
            };
            let summary = PersistSummary {
                generators: complex.len(),
                bars: bars.len(),
                infinite: bars.infinite_count(),
                b_epsilon,
            };
            println!("{}", json(&summary));
            emit(&cli.out_dir(), vec![("barcode.csv".into(), bars.to_csv())])?;
        }
        Command::Catent { config } => {
            let cfg = CatalgConfig::parse(&read(config)?)?;
            let report = cfg.run()?;
            let bound = spectral_lower_bound_check(&cfg.tree, &cfg.word, cfg.parity, cfg.n_max)?;
            println!(
                "{} ln Rad = {} <= h_cat = {} (tol {})",
                if bound.holds { "PASS" } else { "FAIL" },
                bound.log_rad,
                bound.h_cat_model,
                bound.tolerance
            );
            emit(
                &cli.out_dir(),
                vec![
                    ("catent.json".into(), json(&report)),
                    ("spectral_bound.json".into(), json(&bound)),
                ],
            )?;
            if !bound.holds {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Topent { config } => {
            let cfg = cli.config(config)?;
            let capacity = run_capacity(&cfg)?;
            let volume = run_volume(&cfg)?;
            if capacity.is_none() && volume.is_none() {
                return Err(Error::Config(
                    "topent needs `capacity` or `volume_curve`".into(),
                ));
            }
            if let Some(c) = &capacity {
                println!("h_top (capacity) = {}", c.value());
            }
            if let Some(v) = &volume {
                println!("h_top (volume growth) = {}", v.estimate.value);
            }
            let report = TopentReport {
                system: cfg.system_spec.as_deref(),
                capacity: capacity.as_ref(),
                volume: volume.as_ref(),
            };
            let mut files = vec![("topent.json".to_string(), json(&report))];
            if let Some(c) = &capacity {
                files.push(("capacity.csv".into(), capacity_csv(c)));
            }
            if let Some(v) = &volume {
                files.push(("volume.csv".into(), counts_csv(&v.lengths)));
            }
            emit(&cfg.out_dir, files)?;
        }
        Command::Crofton { config } => {
            let cfg = cli.config(config)?;
            let series = crofton_series(&cfg)?;
            for r in &series.rows {
                println!(
                    "n = {:2}  ratio = {:.6}  stderr = {:.3e}  stderr(2N)/stderr = {:.3}",
                    r.n,
                    r.ratio,
                    r.stderr,
                    r.stderr_doubled / r.stderr
                );
            }
            println!("max ratio / ratio(1) = {}", series.max_ratio_over_first);
            emit(
                &cfg.out_dir,
                vec![
                    ("crofton.json".into(), series.to_json()),
                    ("crofton.csv".into(), series.to_csv()),
                ],
            )?;
        }
        Command::Bar { config } => {
            let cfg = cli.config(config)?;
            let pair = cfg
                .pairs
                .first()
                .ok_or_else(|| Error::Config("missing key `pair`".into()))?;
            let table = run_bar(&cfg, pair)?;
            println!("{}", pair.label());
            println!("h_bar = {}", table.h_bar.value);
            emit(
                &cfg.out_dir,
                vec![
                    ("bar.json".into(), json(&table)),
                    ("bar.csv".into(), table.to_csv()),
                ],
            )?;
        }
        Command::Compare { config } => {
            let cfg = cli.config(config)?;
            match compare_entropies(&cfg) {
                Ok(report) => {
                    for v in &report.verdicts {
                        println!("{}", v.summary());
                    }
                    emit(&cfg.out_dir, report.artifacts())?;
                    if !report.all_pass() {
                        return Ok(ExitCode::from(1));
                    }
                }
                Err(CompareFailure::Config(e)) => return Err(e),
                Err(CompareFailure::Estimator {
                    estimator,
                    error,
                    partial,
                }) => {
                    eprintln!("error: {estimator} estimator failed: {error}");
                    emit(&cfg.out_dir, partial.artifacts())?;
                    return Ok(ExitCode::from(2));
                }
            }
        }
        Command::Sweep { config } => {
            let cfg = cli.config(config)?;
            let table = sup_inf_sweep(&cfg)?;
            for r in &table.rows {
                println!("{:.6}  {}", r.h_bar, r.pair);
            }
            for o in &table.observations {
                println!("{o}");
            }
            emit(
                &cfg.out_dir,
                vec![
                    ("sweep.json".into(), table.to_json()),
                    ("sweep.csv".into(), table.to_csv()),
                ],
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
