use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use dkext::dkcore::ComparisonSpec;
use dkext::fracprog::{assemble_bound, AssembleOptions, OracleGrid};
use dkext::spectra::io::read_matrix;
use dkext::SymmetricMatrix;
use dkext_bench::bound_text::{report_json, report_text};
use dkext_bench::output::write_run;
use dkext_bench::plot::{parse_figure, plot_file};
use dkext_bench::runner::{run_rows, summarize};
use dkext_bench::scenario::{resolve, ConfigFile, ScenarioId};

#[derive(Parser)]
#[command(name = "dkext", version, about = "Affine Davis-Kahan bound experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write <out>/<scenario>.csv plus timing and summary files.
    Run {
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Use the full-scale grids (n up to 420, 25 replicates) instead of the desk presets.
        #[arg(long)]
        full: bool,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Render figure fig1..fig8 from a results CSV as SVG.
    Plot {
        figure: String,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bound for a single pair of matrices read from Matrix Market or CSV files.
    Bound {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        r: usize,
        /// Count the block of Phi from its largest eigenvalue.
        #[arg(long)]
        reverse_phi: bool,
        #[arg(long)]
        reverse_psi: bool,
        /// Re-solve every variant with Dinkelbach's iteration.
        #[arg(long)]
        check_dinkelbach: bool,
        /// Also run the grid oracle.
        #[arg(long)]
        check_oracle: bool,
        /// Write the report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn load_symmetric(path: &PathBuf) -> anyhow::Result<SymmetricMatrix> {
    let m = read_matrix(path).with_context(|| format!("reading {}", path.display()))?;
    SymmetricMatrix::new(m).with_context(|| format!("in {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run {
            scenario,
            seed,
            out,
            full,
            workers,
            config,
        } => {
            let id = ScenarioId::parse(&scenario).ok_or_else(|| {
                let names: Vec<_> = ScenarioId::ALL.iter().map(|s| s.name()).collect();
                anyhow!("unknown scenario {scenario:?}; expected one of {}", names.join(", "))
            })?;
            let file = config.as_deref().map(ConfigFile::load).transpose()?;
            let cfg = resolve(id, file.as_ref(), full, seed)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.unwrap_or(0))
                .build()
                .context("starting worker pool")?;
            let rows = pool.install(|| run_rows(&cfg));
            let summary = summarize(&cfg, &rows);
            let files = write_run(&out, &cfg, &rows, &summary)?;
            println!("# {}", cfg.header());
            println!(
                "{:>6} {:<16} {:>5} {:>6} {:>12} {:>12} {:>10} {:>10} {:>10}",
                id.axis(),
                "comparison",
                "rows",
                "failed",
                "extended",
                "standard",
                "rho1/c",
                "c1",
                "c0"
            );
            for s in &summary {
                println!(
                    "{:>6} {:<16} {:>5} {:>6} {:>12.6} {:>12.6} {:>10.6} {:>10.4} {:>10.4}",
                    s.param,
                    s.comparison,
                    s.count,
                    s.failed,
                    s.median_extended,
                    s.median_standard,
                    s.median_rho1_rescaled,
                    s.median_c1,
                    s.median_c0
                );
            }
            println!("wrote {}", files.rows.display());
            Ok(())
        }
        Command::Plot { figure, csv, out } => {
            let id = parse_figure(&figure).ok_or_else(|| anyhow!("unknown figure {figure:?}; expected fig1..fig8"))?;
            plot_file(id, &csv, &out)?;
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Bound {
            phi,
            psi,
            j,
            r,
            reverse_phi,
            reverse_psi,
            check_dinkelbach,
            check_oracle,
            json,
        } => {
            let phi = load_symmetric(&phi)?;
            let psi = load_symmetric(&psi)?;
            let spec = ComparisonSpec::new(&phi, &psi, j, r, reverse_phi, reverse_psi)?;
            let opts = AssembleOptions {
                dinkelbach: check_dinkelbach,
                oracle: check_oracle.then(OracleGrid::default),
                ..AssembleOptions::default()
            };
            let report = assemble_bound(&spec, &opts)?;
            print!("{}", report_text(&spec, &report));
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report_json(&spec, &report))?;
                std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
