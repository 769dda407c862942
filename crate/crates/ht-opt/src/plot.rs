//! Log-scale SVG line plots of trace quantities.

use std::path::Path;

use ht_core::{Trace, TraceRecord};
use plotters::prelude::*;

use crate::error::{OptError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    LossGap,
    Lyapunov,
    GradNorm,
}

impl Quantity {
    pub fn label(self) -> &'static str {
        match self {
            Quantity::LossGap => "loss gap",
            Quantity::Lyapunov => "V",
            Quantity::GradNorm => "gradient norm",
        }
    }

    fn read(self, r: &TraceRecord) -> Option<f64> {
        match self {
            Quantity::LossGap => r.loss_gap,
            Quantity::Lyapunov => r.lyapunov,
            Quantity::GradNorm => Some(r.grad_norm),
        }
    }
}

const PALETTE: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(148, 103, 189),
    RGBColor(255, 127, 14),
    RGBColor(23, 190, 207),
];

/// The log axis cannot extend into the subnormal range; smaller values are
/// drawn at this floor.
const AXIS_FLOOR: f64 = 1e-300;

/// Points of one series, stopping before the first diverged record.
/// Non-positive values are held for the floor applied later.
fn series(trace: &Trace, q: Quantity) -> Vec<(f64, f64)> {
    trace
        .records
        .iter()
        .take_while(|r| !r.diverged)
        .filter_map(|r| {
            let x = r.time.unwrap_or(r.k as f64);
            q.read(r).filter(|v| v.is_finite()).map(|v| (x, v))
        })
        .collect()
}

/// Writes one line per trace, legend from trace names, log-scale y axis.
/// Exact zeros are drawn at the bottom of the axis.
pub fn emit_plot(traces: &[Trace], quantity: Quantity, path: &Path) -> Result<()> {
    if traces.is_empty() {
        return Err(OptError::Core(ht_core::Error::Precondition(
            "no traces to plot".into(),
        )));
    }
    let all: Vec<Vec<(f64, f64)>> = traces.iter().map(|t| series(t, quantity)).collect();
    let positive = || all.iter().flatten().map(|p| p.1).filter(|&v| v > 0.0);
    let lo = positive().fold(f64::INFINITY, f64::min);
    let hi = positive().fold(0.0, f64::max);
    let (floor, top) = if lo.is_finite() {
        (
            (lo / 10.0).max(AXIS_FLOOR),
            (hi * 10.0).max(AXIS_FLOOR * 10.0),
        )
    } else {
        (1e-16, 1.0)
    };
    let x_max = all.iter().flatten().map(|p| p.0).fold(1.0, f64::max);

    let plot_err = |e: &dyn std::fmt::Display| OptError::Plot(e.to_string());
    let root = SVGBackend::new(path, (960, 600)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(&e))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(quantity.label(), ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(80)
        .build_cartesian_2d(0.0..x_max, (floor..top).log_scale())
        .map_err(|e| plot_err(&e))?;
    chart
        .configure_mesh()
        .x_desc("iteration")
        .y_desc(quantity.label())
        .y_label_formatter(&|v| format!("{v:.0e}"))
        .draw()
        .map_err(|e| plot_err(&e))?;
    for (i, (trace, points)) in traces.iter().zip(&all).enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        chart
            .draw_series(LineSeries::new(
                points.iter().map(|&(x, y)| (x, y.max(floor))),
                colour.stroke_width(2),
            ))
            .map_err(|e| plot_err(&e))?
            .label(trace.name.as_str())
            .legend(move |(x, y)| {
                PathElement::new(vec![(x, y), (x + 20, y)], colour.stroke_width(2))
            });
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.9))
        .border_style(BLACK)
        .draw()
        .map_err(|e| plot_err(&e))?;
    root.present().map_err(|e| plot_err(&e))?;
    Ok(())
}
