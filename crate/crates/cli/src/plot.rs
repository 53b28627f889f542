//! `influence plot`: a velocity chart from `trajectory.csv`, or a spacetime
//! diagram from a poset file with chains `P`, `Q` and `Pi`.

use std::fs;

use influence_core::simulation::path_from_poset;
use influence_core::{Poset, Step, ZitterPath};
use serde::Deserialize;

use crate::args::PlotArgs;
use crate::simulate::RESIDUAL_TOL;
use crate::svg::{Canvas, Range, Swatch, BOTTOM, LEFT, RIGHT, TOP};
use crate::{CmdResult, Failure, EXIT_OK};

/// Walks longer than this are drawn as a bare path, without per-event
/// influence segments.
pub const MAX_SEGMENT_STEPS: usize = 2000;
/// Cap on path vertices in one polyline.
const MAX_PATH_POINTS: usize = 5000;

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct TrajectoryRow {
    pub tau_mid: f64,
    pub beta_hat: f64,
    pub stderr: f64,
    pub beta_bookkeeping: f64,
    pub beta_model: f64,
    pub residual: f64,
}

pub fn run(args: PlotArgs) -> CmdResult {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.input.display())))?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    let svg = if first.starts_with("tau_mid") {
        let rows = read_trajectory(&text).map_err(|m| Failure::usage(format!("{}: {m}", args.input.display())))?;
        beta_chart(&rows)
    } else {
        let poset = Poset::from_text(&text)
            .map_err(|e| Failure::usage(format!("{}: not a trajectory CSV or poset: {e}", args.input.display())))?;
        spacetime_from_poset(&poset)?
    };
    fs::write(&args.out, svg).map_err(|e| Failure::io(&args.out, e))?;
    Ok(EXIT_OK)
}

pub fn read_trajectory(text: &str) -> Result<Vec<TrajectoryRow>, String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows = reader
        .deserialize()
        .collect::<Result<Vec<TrajectoryRow>, _>>()
        .map_err(|e| e.to_string())?;
    if rows.is_empty() {
        return Err("trajectory has no rows".to_string());
    }
    Ok(rows)
}

/// Windowed velocity against proper time, with the model curve, the
/// `±RESIDUAL_TOL` band around it and the measured mean.
pub fn beta_chart(rows: &[TrajectoryRow]) -> String {
    let x = Range::covering(rows.iter().map(|r| r.tau_mid), 0.03, 1.0);
    let y = Range::covering(
        rows.iter().flat_map(|r| {
            [
                r.beta_hat,
                r.beta_model - RESIDUAL_TOL,
                r.beta_model + RESIDUAL_TOL,
            ]
        }),
        0.08,
        0.1,
    );
    let mut c = Canvas::new("windowed velocity", x, y, "proper time", "beta");
    let upper: Vec<(f64, f64)> = rows.iter().map(|r| (r.tau_mid, r.beta_model + RESIDUAL_TOL)).collect();
    let mut band = upper;
    band.extend(rows.iter().rev().map(|r| (r.tau_mid, r.beta_model - RESIDUAL_TOL)));
    c.polygon("band", &band);
    let model: Vec<(f64, f64)> = rows.iter().map(|r| (r.tau_mid, r.beta_model)).collect();
    c.polyline("model", &model);
    let mean = rows.iter().map(|r| r.beta_hat).sum::<f64>() / rows.len() as f64;
    c.line("mean", (x.lo, mean), (x.hi, mean));
    for r in rows {
        c.circle("point", (r.tau_mid, r.beta_hat), 2.5);
    }
    c.legend(&[
        (Swatch::Dot, "point", "beta_hat"),
        (Swatch::Line, "model", "model"),
        (Swatch::Fill, "band", &format!("model ± {RESIDUAL_TOL}")),
        (Swatch::Line, "mean", &format!("mean {mean:.4}")),
    ]);
    c.finish()
}

fn spacetime_from_poset(poset: &Poset) -> Result<String, Failure> {
    let chain = |name: &str| {
        poset
            .chain_by_name(name)
            .ok_or_else(|| Failure::usage(format!("poset has no chain named `{name}`")))
    };
    let path = path_from_poset(poset, chain("P")?, chain("Q")?, chain("Pi")?).map_err(Failure::from_args)?;
    Ok(spacetime_chart(&path))
}

/// Position `(x, t)` of each step's event in the unit-step frame. An
/// emission sits where the particle is before its step; receipts do not
/// move the particle. The last entry is where the walk ends.
fn trace(path: &ZitterPath) -> Vec<(f64, f64)> {
    let (mut x, mut t) = (0.0, 0.0);
    let mut out = Vec::with_capacity(path.steps().len() + 1);
    for &s in path.steps() {
        out.push((x, t));
        match s {
            Step::P => {
                x += 0.5;
                t += 0.5;
            }
            Step::Q => {
                x -= 0.5;
                t += 0.5;
            }
            _ => {}
        }
    }
    out.push((x, t));
    out
}

/// CSS class and endpoints of one light-speed segment.
type Segment = (&'static str, (f64, f64), (f64, f64));

/// Zitter path between the observer worldlines, `Q` on the left and `P` on
/// the right. Each emission sends a light-speed segment to its observer;
/// each receipt arrives on one.
pub fn spacetime_chart(path: &ZitterPath) -> String {
    let pts = trace(path);
    let reach = pts.iter().fold(0.0f64, |m, p| m.max(p.0.abs()));
    let wall = reach + (0.15 * reach).max(1.0);
    let detailed = path.steps().len() <= MAX_SEGMENT_STEPS;
    let segments: Vec<Segment> = if detailed {
        path.steps()
            .iter()
            .zip(&pts)
            .map(|(&s, &(px, pt))| match s {
                Step::P => ("influence right", (px, pt), (wall, pt + wall - px)),
                Step::Q => ("influence left", (px, pt), (-wall, pt + wall + px)),
                Step::ReceiptRight => ("receipt right", (wall, pt - (wall - px)), (px, pt)),
                Step::ReceiptLeft => ("receipt left", (-wall, pt - (wall + px)), (px, pt)),
            })
            .collect()
    } else {
        Vec::new()
    };
    let times = pts
        .iter()
        .map(|p| p.1)
        .chain(segments.iter().flat_map(|s| [s.1 .1, s.2 .1]));
    let (x, y) = equal_aspect(
        Range::covering([-wall, wall], 0.08, 1.0),
        Range::covering(times, 0.04, 1.0),
    );
    let mut c = Canvas::new("spacetime", x, y, "x", "t");
    c.line("worldline", (-wall, y.lo), (-wall, y.hi));
    c.line("worldline", (wall, y.lo), (wall, y.hi));
    c.label((-wall, y.hi), "end", "Q ");
    c.label((wall, y.hi), "start", " P");

    for (class, a, b) in segments {
        c.line(class, a, b);
    }
    let stride = pts.len().div_ceil(MAX_PATH_POINTS).max(1);
    let mut line: Vec<(f64, f64)> = pts.iter().step_by(stride).copied().collect();
    if (pts.len() - 1) % stride != 0 {
        line.push(*pts.last().expect("trace is never empty"));
    }
    c.polyline("path", &line);
    if detailed {
        for (&s, &p) in path.steps().iter().zip(&pts) {
            if s.is_emission() {
                c.circle("event", p, 3.0);
            }
        }
    }
    c.finish()
}

/// Widens the narrower range so one data unit spans the same number of
/// pixels on both axes, keeping light rays at 45 degrees.
fn equal_aspect(x: Range, y: Range) -> (Range, Range) {
    let (w, h) = (RIGHT - LEFT, BOTTOM - TOP);
    let (sx, sy) = ((x.hi - x.lo) / w, (y.hi - y.lo) / h);
    let widen = |r: Range, span: f64| {
        let mid = (r.lo + r.hi) / 2.0;
        Range {
            lo: mid - span / 2.0,
            hi: mid + span / 2.0,
        }
    };
    if sx < sy {
        (widen(x, sy * w), y)
    } else {
        (x, widen(y, sx * h))
    }
}
