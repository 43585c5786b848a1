//! Experiment orchestration: specs, named suites, budget calibration,
//! replicated runs, CSV persistence, plot data and significance tests.

mod plot;
mod results;
mod runner;
mod spec;
mod stats;
mod suites;

pub use plot::{
    aggregate, emit_plot_data, figure, points_to_csv, render_svg, FigureSpec, SeriesPoint,
};
pub use results::{
    read_results, read_results_from, write_results, write_results_to, ResultRow, RowStatus,
    RESULT_HEADER,
};
pub use runner::{
    build_problem, calibrate_budget, generate_instance, instance_seed, prepare_instances,
    run_experiment, run_prepared, sigma_unit, Calibration, PreparedInstance, Problem,
};
pub use spec::{AlgorithmSpec, BudgetRule, ExperimentSpec, ProblemFamily, SigmaScale};
pub use stats::{
    metric_values, significance_report, Metric, SignificanceReport, Stratum, StratumTest,
};
pub use suites::{canonical_suite_name, suite, SUITE_NAMES};
