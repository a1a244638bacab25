//! SVG line charts of a metrics table: one chart per metric, one series per
//! estimator, against `k`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use plotters::prelude::*;

use crate::error::{Error, Result};
use crate::harness::{Dash, EstimatorSpec, MetricsRow, MetricsTable, SeriesStyle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    SquaredBias,
    Variance,
    Mse,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::SquaredBias, Metric::Variance, Metric::Mse];

    pub fn name(self) -> &'static str {
        match self {
            Metric::SquaredBias => "squared_bias",
            Metric::Variance => "variance",
            Metric::Mse => "mse",
        }
    }

    fn title(self) -> &'static str {
        match self {
            Metric::SquaredBias => "Squared bias",
            Metric::Variance => "Variance",
            Metric::Mse => "MSE",
        }
    }

    pub fn of(self, row: &MetricsRow) -> f64 {
        match self {
            Metric::SquaredBias => row.squared_bias,
            Metric::Variance => row.variance,
            Metric::Mse => row.mse,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::param("metric", format!("unknown metric `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlotOptions {
    pub log_y: bool,
    pub width: u32,
    pub height: u32,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            log_y: false,
            width: 720,
            height: 480,
        }
    }
}

fn color(name: &str) -> RGBColor {
    match name {
        "black" => BLACK,
        "purple" => RGBColor(128, 0, 128),
        "red" => RGBColor(220, 20, 20),
        "orange" => RGBColor(255, 140, 0),
        "blue" => RGBColor(30, 60, 220),
        _ => RGBColor(128, 128, 128),
    }
}

fn style_of(id: &str) -> SeriesStyle {
    id.parse::<EstimatorSpec>().map(|e| e.style()).unwrap_or(SeriesStyle {
        color: "grey",
        dash: Dash::Solid,
    })
}

/// Points of one estimator's curve; aborted rows and, on a log axis,
/// nonpositive values are left out.
fn series(table: &MetricsTable, id: &str, metric: Metric, log_y: bool) -> Vec<(f64, f64)> {
    table
        .rows_for(id)
        .map(|r| (r.k as f64, metric.of(r)))
        .filter(|&(_, v)| v.is_finite() && (!log_y || v > 0.0))
        .collect()
}

/// Draws one metric of `table` into an SVG file.
pub fn plot_metric(table: &MetricsTable, metric: Metric, path: &Path, opts: PlotOptions) -> Result<()> {
    let plot_err = |e: &dyn fmt::Display| Error::Plot {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let ids = table.estimators();
    let curves: Vec<(String, Vec<(f64, f64)>)> = ids
        .iter()
        .map(|id| (id.clone(), series(table, id, metric, opts.log_y)))
        .collect();
    let (mut x_hi, mut y_lo, mut y_hi) = (1.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for (_, pts) in &curves {
        for &(x, y) in pts {
            x_hi = x_hi.max(x);
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
    }
    if !y_lo.is_finite() {
        (y_lo, y_hi) = if opts.log_y { (1e-6, 1.0) } else { (0.0, 1.0) };
    }
    if y_hi <= y_lo {
        y_hi = if y_lo > 0.0 { y_lo * 2.0 } else { y_lo + 1.0 };
    }
    let title = format!("{}: {}", table.dgp, metric.title());

    let root = SVGBackend::new(path, (opts.width, opts.height)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(&e))?;
    let mut builder = ChartBuilder::on(&root);
    builder
        .caption(title, ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(36)
        .y_label_area_size(72);

    macro_rules! draw {
        ($chart:expr) => {{
            let mut chart = $chart;
            chart
                .configure_mesh()
                .x_desc("k")
                .y_desc(metric.title())
                .draw()
                .map_err(|e| plot_err(&e))?;
            for (id, pts) in &curves {
                let style = style_of(id);
                let c = color(style.color);
                let stroke = c.stroke_width(2);
                let anno = match style.dash {
                    Dash::Solid => chart.draw_series(LineSeries::new(pts.iter().copied(), stroke)),
                    Dash::Dashed => chart.draw_series(DashedLineSeries::new(pts.iter().copied(), 8, 5, stroke)),
                    Dash::Dotted => chart.draw_series(DashedLineSeries::new(pts.iter().copied(), 2, 4, stroke)),
                }
                .map_err(|e| plot_err(&e))?;
                anno.label(id.as_str())
                    .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], c.stroke_width(2)));
            }
            chart
                .configure_series_labels()
                .background_style(WHITE.mix(0.85))
                .border_style(BLACK)
                .position(SeriesLabelPosition::UpperRight)
                .draw()
                .map_err(|e| plot_err(&e))?;
        }};
    }

    if opts.log_y {
        draw!(builder
            .build_cartesian_2d(0f64..x_hi, (y_lo * 0.8..y_hi * 1.25).log_scale())
            .map_err(|e| plot_err(&e))?);
    } else {
        let pad = 0.05 * (y_hi - y_lo);
        draw!(builder
            .build_cartesian_2d(0f64..x_hi, (y_lo - pad).min(0.0)..y_hi + pad)
            .map_err(|e| plot_err(&e))?);
    }
    root.present().map_err(|e| plot_err(&e))
}

/// Writes `{dgp}_{metric}.svg` for every metric into `dir`.
pub fn plot_table(table: &MetricsTable, dir: &Path, opts: PlotOptions) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    Metric::ALL
        .into_iter()
        .map(|metric| {
            let path = dir.join(format!("{}_{}.svg", table.dgp, metric.name()));
            plot_metric(table, metric, &path, opts)?;
            Ok(path)
        })
        .collect()
}
