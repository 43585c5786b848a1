use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use noisy_combopt::harness::{
    build_problem, calibrate_budget, emit_plot_data, generate_instance, prepare_instances,
    read_results, run_prepared, sigma_unit, significance_report, suite, write_results,
    ExperimentSpec, Metric, PreparedInstance, Problem, ProblemFamily, ResultRow, RowStatus,
    SigmaScale,
};
use noisy_combopt::problems::{read_instance, write_instance};
use noisy_combopt::{Error, Result};

#[derive(Parser)]
#[command(
    name = "noisy-combopt",
    version,
    about = "Noisy combinatorial optimisation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random problem instance.
    Generate {
        #[arg(long)]
        problem: ProblemFamily,
        #[arg(long)]
        n: usize,
        /// Set-cover elements or COCZ split.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.001)]
        delta: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the experiment described by a key-value spec file.
    Run {
        #[arg(long)]
        spec: PathBuf,
        /// Results file; defaults to `<name>.csv` next to the experiment file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named suite and write spec, instances, results and plot data.
    Suite {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
        /// Override the replication count.
        #[arg(long)]
        replications: Option<usize>,
        /// Worker threads (0 uses every core).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Calibrate a budget as twice PCEA's mean time to the optimum.
    Calibrate {
        #[arg(long)]
        problem: ProblemFamily,
        /// Noise level, in units of `--sigma-scale`.
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 30)]
        reps: usize,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value = "absolute")]
        sigma_scale: SigmaScale,
        /// Instance file; otherwise one is drawn from `--seed`.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Mann-Whitney U tests between two algorithms per stratum.
    Stats {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value = "best_true_fitness")]
        metric: Metric,
    },
    /// Aggregate results into a figure's series (CSV, or SVG by extension).
    Plot {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        figure: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Generate {
            problem,
            n,
            m,
            seed,
            delta,
            out,
        } => {
            let file = generate_instance(problem, n, m, delta, seed)?.ok_or_else(|| {
                Error::InvalidArgument(format!("{problem} has no random instance"))
            })?;
            write_instance(&file, &out)?;
            println!("wrote {}", out.display());
        }
        Command::Run { spec, out } => {
            let text = fs::read_to_string(&spec).map_err(|e| io_error(&spec, e))?;
            let parsed = ExperimentSpec::parse(&text)?;
            let out = out.unwrap_or_else(|| spec.with_file_name(format!("{}.csv", parsed.name)));
            let instances = prepare_instances(&parsed)?;
            let rows = run_prepared(&parsed, &instances)?;
            write_results(&rows, &out)?;
            report_timeouts(&rows);
            println!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::Suite {
            name,
            seed,
            out_dir,
            replications,
            workers,
        } => {
            let mut spec = suite(&name)?;
            spec.seed = seed;
            spec.workers = workers;
            if let Some(r) = replications {
                spec.replications = r;
            }
            spec.validate()?;
            run_suite(&spec, &out_dir)?;
        }
        Command::Calibrate {
            problem,
            sigma,
            reps,
            n,
            sigma_scale,
            instance,
            seed,
        } => {
            let file = match instance {
                Some(path) => Some(read_instance(&path)?),
                None => generate_instance(problem, n, None, 0.001, seed)?,
            };
            let inst = file.as_ref().map(|f| &f.instance);
            let size = inst.map_or(n, |i| i.n());
            let Problem::Single(p) = build_problem(problem, size, inst)? else {
                return Err(Error::InvalidArgument(
                    "calibration needs a single-objective problem".into(),
                ));
            };
            let unit = sigma_unit(sigma_scale, size, inst)?;
            let c = calibrate_budget(&p, sigma * unit, reps, seed)?;
            println!(
                "budget {} (mean PCEA time {:.1}, {} of {} runs missed)",
                c.budget, c.mean_evals, c.failures, c.reps
            );
        }
        Command::Stats {
            results,
            a,
            b,
            metric,
        } => {
            let rows = read_results(&results)?;
            let report = significance_report(&rows, &a, &b, metric)?;
            for s in &report.skipped {
                eprintln!("warning: skipped stratum {s}: one group is empty");
            }
            print!("{}", report.to_csv());
        }
        Command::Plot {
            results,
            figure,
            out,
        } => {
            let rows = read_results(&results)?;
            let points = emit_plot_data(&rows, &figure, &out)?;
            println!("wrote {} points to {}", points.len(), out.display());
        }
    }
    Ok(())
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source: e,
    }
}

fn report_timeouts(rows: &[ResultRow]) {
    let timeouts = rows
        .iter()
        .filter(|r| r.status == RowStatus::Timeout)
        .count();
    if timeouts > 0 {
        eprintln!("warning: {timeouts} runs hit the wall-clock guard");
    }
}

fn run_suite(spec: &ExperimentSpec, out_dir: &Path) -> Result<()> {
    let inst_dir = out_dir.join("instances");
    fs::create_dir_all(&inst_dir).map_err(|e| io_error(&inst_dir, e))?;
    let spec_path = out_dir.join("spec.txt");
    fs::write(&spec_path, spec.to_text()).map_err(|e| io_error(&spec_path, e))?;
    let instances: Vec<PreparedInstance> = prepare_instances(spec)?;
    for inst in &instances {
        if let Some(file) = &inst.file {
            write_instance(
                file,
                &inst_dir.join(format!("n{}-{}.txt", inst.n, inst.index)),
            )?;
        }
    }
    let rows = run_prepared(spec, &instances)?;
    let results = out_dir.join("results.csv");
    write_results(&rows, &results)?;
    report_timeouts(&rows);
    println!("wrote {} rows to {}", rows.len(), results.display());
    for fig in figures_of(&spec.name) {
        for ext in ["csv", "svg"] {
            let path = out_dir.join(format!("{fig}.{ext}"));
            emit_plot_data(&rows, fig, &path)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn figures_of(suite_name: &str) -> &'static [&'static str] {
    match suite_name {
        "fig1-onemax" => &["fig1", "fig2"],
        "fig3-linear" => &["fig3", "fig4"],
        "fig5-subsetsum" => &["fig5"],
        "fig6-knapsack-v1" => &["fig6", "fig7"],
        "fig8-knapsack-v2" => &["fig8", "fig9"],
        "fig10-setcover-constrained" => &["fig10"],
        "fig11-setcover-penalty" => &["fig11", "fig12"],
        "fig8mo-cocz" => &["fig8mo"],
        "fig9mo-mosetcover" => &["fig9mo", "fig10mo"],
        _ => &[],
    }
}
