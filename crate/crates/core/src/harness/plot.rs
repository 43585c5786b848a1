//! Per-figure aggregation and plot output.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use ordered_float::OrderedFloat;
use plotters::prelude::*;

use super::results::ResultRow;
use super::stats::{metric_values, Metric};
use crate::error::{Error, Result};
use crate::metrics::mean_stderr;

/// What a figure plots against the listed noise level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FigureSpec {
    pub id: &'static str,
    pub problem: &'static str,
    pub metric: Metric,
    /// One series per (algorithm, n) instead of per algorithm.
    pub split_by_n: bool,
    pub title: &'static str,
}

const FIGURES: [FigureSpec; 15] = [
    FigureSpec {
        id: "fig1",
        problem: "onemax",
        metric: Metric::BestTrueFitness,
        split_by_n: false,
        title: "Noisy OneMax: best fitness",
    },
    FigureSpec {
        id: "fig2",
        problem: "onemax",
        metric: Metric::EvalsToBest,
        split_by_n: false,
        title: "Noisy OneMax: runtime",
    },
    FigureSpec {
        id: "fig3",
        problem: "linear",
        metric: Metric::BestTrueFitness,
        split_by_n: false,
        title: "Noisy WeightedLinear: best fitness",
    },
    FigureSpec {
        id: "fig4",
        problem: "linear",
        metric: Metric::EvalsToBest,
        split_by_n: false,
        title: "Noisy WeightedLinear: runtime",
    },
    FigureSpec {
        id: "fig5",
        problem: "subsetsum",
        metric: Metric::EvalsToBest,
        split_by_n: true,
        title: "Noisy SubsetSum: runtime",
    },
    FigureSpec {
        id: "fig6",
        problem: "knapsack-v1",
        metric: Metric::ScaledFitness,
        split_by_n: true,
        title: "Noisy Knapsack V1: scaled best fitness",
    },
    FigureSpec {
        id: "fig7",
        problem: "knapsack-v1",
        metric: Metric::EvalsToBest,
        split_by_n: true,
        title: "Noisy Knapsack V1: runtime",
    },
    FigureSpec {
        id: "fig8",
        problem: "knapsack-v2",
        metric: Metric::ScaledFitness,
        split_by_n: true,
        title: "Noisy Knapsack V2: scaled best fitness",
    },
    FigureSpec {
        id: "fig9",
        problem: "knapsack-v2",
        metric: Metric::EvalsToBest,
        split_by_n: true,
        title: "Noisy Knapsack V2: runtime",
    },
    FigureSpec {
        id: "fig10",
        problem: "setcover-constrained",
        metric: Metric::BestFeasibleCost,
        split_by_n: true,
        title: "Constrained SetCover: best feasible cost",
    },
    FigureSpec {
        id: "fig11",
        problem: "setcover-penalty",
        metric: Metric::BestFeasibleCost,
        split_by_n: true,
        title: "Penalty SetCover: best feasible cost",
    },
    FigureSpec {
        id: "fig12",
        problem: "setcover-penalty",
        metric: Metric::EvalsToBest,
        split_by_n: true,
        title: "Penalty SetCover: runtime",
    },
    FigureSpec {
        id: "fig8mo",
        problem: "cocz",
        metric: Metric::Hypervolume,
        split_by_n: false,
        title: "Noisy COCZ: population hypervolume",
    },
    FigureSpec {
        id: "fig9mo",
        problem: "mo-setcover",
        metric: Metric::Hypervolume,
        split_by_n: true,
        title: "MO SetCover: population hypervolume",
    },
    FigureSpec {
        id: "fig10mo",
        problem: "mo-setcover",
        metric: Metric::BestFeasibleCost,
        split_by_n: true,
        title: "MO SetCover: best feasible cost",
    },
];

/// Looks up a figure by id (`fig6`) or suffixed id (`fig6-knapsack-v1`).
pub fn figure(id: &str) -> Result<FigureSpec> {
    let short = id.split('-').next().unwrap_or(id);
    FIGURES
        .iter()
        .find(|f| f.id == short)
        .copied()
        .ok_or_else(|| Error::Unknown {
            kind: "figure",
            name: id.to_string(),
        })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPoint {
    pub series: String,
    pub x: f64,
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

/// Mean and standard error of `metric` per series and noise level.
///
/// Values are sorted before summation, so the result does not depend on
/// row order.
pub fn aggregate(rows: &[ResultRow], metric: Metric, split_by_n: bool) -> Vec<SeriesPoint> {
    let mut groups: BTreeMap<(String, OrderedFloat<f64>), Vec<f64>> = BTreeMap::new();
    for (r, v) in metric_values(rows, metric) {
        let series = if split_by_n {
            format!("{} n={}", r.algorithm, r.n)
        } else {
            r.algorithm.clone()
        };
        groups
            .entry((series, OrderedFloat(r.sigma_level)))
            .or_default()
            .push(v);
    }
    groups
        .into_iter()
        .filter_map(|((series, x), mut values)| {
            values.sort_by(f64::total_cmp);
            let (mean, stderr) = mean_stderr(&values)?;
            Some(SeriesPoint {
                series,
                x: x.0,
                mean,
                stderr,
                count: values.len(),
            })
        })
        .collect()
}

pub fn points_to_csv(points: &[SeriesPoint]) -> String {
    let mut out = String::from("series,x,mean,stderr,count\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.series, p.x, p.mean, p.stderr, p.count
        ));
    }
    out
}

/// Line chart of the aggregated series with standard-error bars.
pub fn render_svg(points: &[SeriesPoint], fig: &FigureSpec) -> Result<String> {
    if points.is_empty() {
        return Err(Error::EmptyResults);
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.mean - p.stderr);
        y1 = y1.max(p.mean + p.stderr);
    }
    let pad = |lo: f64, hi: f64| {
        let d = if hi > lo {
            (hi - lo) * 0.05
        } else {
            lo.abs().max(1.0) * 0.05
        };
        (lo - d, hi + d)
    };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    let mut series: BTreeMap<&str, Vec<&SeriesPoint>> = BTreeMap::new();
    for p in points {
        series.entry(p.series.as_str()).or_default().push(p);
    }

    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (900, 600)).into_drawing_area();
        let draw = |e: &dyn std::fmt::Display| Error::invalid(format!("plot: {e}"));
        root.fill(&WHITE).map_err(|e| draw(&e))?;
        let mut chart = ChartBuilder::on(&root)
            .caption(fig.title, ("sans-serif", 22))
            .margin(15)
            .x_label_area_size(45)
            .y_label_area_size(70)
            .build_cartesian_2d(x0..x1, y0..y1)
            .map_err(|e| draw(&e))?;
        chart
            .configure_mesh()
            .x_desc("noise level")
            .y_desc(fig.metric.name())
            .draw()
            .map_err(|e| draw(&e))?;
        for (idx, (name, pts)) in series.iter().enumerate() {
            let color = Palette99::pick(idx).to_rgba();
            chart
                .draw_series(LineSeries::new(
                    pts.iter().map(|p| (p.x, p.mean)),
                    color.stroke_width(2),
                ))
                .map_err(|e| draw(&e))?
                .label(*name)
                .legend(move |(x, y)| {
                    PathElement::new(vec![(x, y), (x + 18, y)], color.stroke_width(2))
                });
            chart
                .draw_series(pts.iter().map(|p| {
                    PathElement::new(
                        vec![(p.x, p.mean - p.stderr), (p.x, p.mean + p.stderr)],
                        color,
                    )
                }))
                .map_err(|e| draw(&e))?;
        }
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.85))
            .border_style(BLACK)
            .draw()
            .map_err(|e| draw(&e))?;
        root.present().map_err(|e| draw(&e))?;
    }
    Ok(svg)
}

/// Writes the aggregated series of `figure` to `path`: an SVG chart when
/// the extension is `.svg`, CSV otherwise.
pub fn emit_plot_data(
    rows: &[ResultRow],
    figure_id: &str,
    path: &Path,
) -> Result<Vec<SeriesPoint>> {
    if rows.is_empty() {
        return Err(Error::EmptyResults);
    }
    let fig = figure(figure_id)?;
    let selected: Vec<ResultRow> = rows
        .iter()
        .filter(|r| r.problem == fig.problem)
        .cloned()
        .collect();
    let points = aggregate(&selected, fig.metric, fig.split_by_n);
    if points.is_empty() {
        return Err(Error::invalid(format!(
            "no {} values for problem {} in the results",
            fig.metric, fig.problem
        )));
    }
    let body = if path.extension().is_some_and(|e| e == "svg") {
        render_svg(&points, &fig)?
    } else {
        points_to_csv(&points)
    };
    fs::write(path, body).map_err(|e| Error::io(path, e))?;
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::results::RowStatus;

    fn row(alg: &str, sigma: f64, fitness: f64) -> ResultRow {
        ResultRow {
            run_id: 0,
            algorithm: alg.into(),
            problem: "onemax".into(),
            n: 100,
            m: None,
            sigma,
            seed: 0,
            evals_used: 1,
            evals_to_best: Some(1),
            best_true_fitness: Some(fitness),
            best_feasible_cost: None,
            hypervolume: None,
            wall_ms: None,
            instance: 0,
            sigma_level: sigma,
            budget: 1,
            status: RowStatus::Final,
        }
    }

    #[test]
    fn mean_and_stderr_of_one_two_three() {
        let rows: Vec<_> = [1.0, 2.0, 3.0]
            .iter()
            .map(|&v| row("umda", 1.0, v))
            .collect();
        let pts = aggregate(&rows, Metric::BestTrueFitness, false);
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].mean, 2.0);
        assert!((pts[0].stderr - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((pts[0].stderr - 0.577).abs() < 5e-4);
    }

    #[test]
    fn permutation_invariant() {
        let mut rows: Vec<_> = (0..50)
            .map(|i| {
                row(
                    if i % 2 == 0 { "a" } else { "b" },
                    (i % 3) as f64,
                    0.1 * i as f64 + 1e-7 * (i * i) as f64,
                )
            })
            .collect();
        let before = aggregate(&rows, Metric::BestTrueFitness, false);
        rows.reverse();
        rows.swap(3, 17);
        assert_eq!(aggregate(&rows, Metric::BestTrueFitness, false), before);
    }

    #[test]
    fn figure_lookup() {
        assert_eq!(
            figure("fig6-knapsack-v1").unwrap().metric,
            Metric::ScaledFitness
        );
        assert_eq!(figure("fig8mo").unwrap().problem, "cocz");
        assert!(figure("fig99").is_err());
    }

    #[test]
    fn writes_csv_and_svg() {
        let dir = tempfile::tempdir().unwrap();
        let rows: Vec<_> = (0..6)
            .map(|i| row(["umda", "pcea"][i % 2], (i / 2) as f64, i as f64))
            .collect();
        let csv_path = dir.path().join("fig1.csv");
        emit_plot_data(&rows, "fig1", &csv_path).unwrap();
        let text = fs::read_to_string(&csv_path).unwrap();
        assert!(text.starts_with("series,x,mean,stderr,count\n"));
        assert_eq!(text.lines().count(), 7);
        let svg_path = dir.path().join("fig1.svg");
        emit_plot_data(&rows, "fig1", &svg_path).unwrap();
        let svg = fs::read_to_string(&svg_path).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("umda"));
    }

    #[test]
    fn empty_rows_refused() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            emit_plot_data(&[], "fig1", &dir.path().join("x.csv")),
            Err(Error::EmptyResults)
        ));
    }
}
