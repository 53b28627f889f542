//! Hand-written SVG charts on a fixed 800x600 canvas.
//!
//! Data coordinates map linearly onto the plot area
//! `[LEFT, RIGHT] x [TOP, BOTTOM]`:
//!
//! ```text
//! px = LEFT + (x - x0) / (x1 - x0) * (RIGHT - LEFT)
//! py = BOTTOM - (y - y0) / (y1 - y0) * (BOTTOM - TOP)
//! ```
//!
//! so data `y` grows upward. All coordinates are printed with two decimals,
//! which keeps output byte-stable across platforms.

use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
pub const LEFT: f64 = 80.0;
pub const RIGHT: f64 = 770.0;
pub const TOP: f64 = 70.0;
pub const BOTTOM: f64 = 540.0;

const STYLE: &str = "\
text{font-family:sans-serif;font-size:12px;fill:#222}\
.title{font-size:15px}\
.axis{stroke:#222;stroke-width:1}\
.grid{stroke:#ddd;stroke-width:1}\
.band{fill:#f4a261;fill-opacity:0.25;stroke:none}\
.model{fill:none;stroke:#e76f51;stroke-width:2}\
.mean{stroke:#264653;stroke-width:1.5;stroke-dasharray:6 4}\
.point{fill:#2a9d8f}\
.worldline{stroke:#222;stroke-width:2}\
.path{fill:none;stroke:#2a9d8f;stroke-width:1.5}\
.event{fill:#2a9d8f}\
.influence{stroke:#e76f51;stroke-width:1}\
.receipt{stroke:#457b9d;stroke-width:1;stroke-dasharray:3 3}";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    /// Smallest range holding `values`, widened by `pad` of its span on each
    /// side; a degenerate span is widened to `min_span`.
    pub fn covering<I: IntoIterator<Item = f64>>(values: I, pad: f64, min_span: f64) -> Range {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.into_iter().filter(|v| v.is_finite()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo > hi {
            return Range { lo: 0.0, hi: 1.0 };
        }
        let span = hi - lo;
        if span < min_span {
            let mid = (lo + hi) / 2.0;
            return Range {
                lo: mid - min_span / 2.0,
                hi: mid + min_span / 2.0,
            };
        }
        Range {
            lo: lo - pad * span,
            hi: hi + pad * span,
        }
    }

    fn span(&self) -> f64 {
        self.hi - self.lo
    }

    /// Round-number tick positions inside the range, about five of them.
    pub fn ticks(&self) -> Vec<f64> {
        let raw = self.span() / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last).map(|i| i as f64 * step).collect()
    }
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Swatch {
    Line,
    Fill,
    Dot,
}

pub struct Canvas {
    x: Range,
    y: Range,
    body: String,
}

impl Canvas {
    pub fn new(title: &str, x: Range, y: Range, x_label: &str, y_label: &str) -> Canvas {
        let mut c = Canvas {
            x,
            y,
            body: String::new(),
        };
        let _ = write!(
            c.body,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
             <style>{STYLE}</style>\n\
             <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
             <text class=\"title\" x=\"{:.2}\" y=\"28\" text-anchor=\"middle\">{}</text>\n",
            (LEFT + RIGHT) / 2.0,
            escape(title)
        );
        c.axes(x_label, y_label);
        c
    }

    fn axes(&mut self, x_label: &str, y_label: &str) {
        let xt = self.x.ticks();
        let yt = self.y.ticks();
        let xs = if xt.len() > 1 { xt[1] - xt[0] } else { self.x.span() };
        let ys = if yt.len() > 1 { yt[1] - yt[0] } else { self.y.span() };
        for &v in &xt {
            let px = self.px(v);
            let _ = writeln!(
                self.body,
                "<line class=\"grid\" x1=\"{px:.2}\" y1=\"{TOP:.2}\" x2=\"{px:.2}\" y2=\"{BOTTOM:.2}\"/>\
                 <text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
                BOTTOM + 18.0,
                tick_label(v, xs)
            );
        }
        for &v in &yt {
            let py = self.py(v);
            let _ = writeln!(
                self.body,
                "<line class=\"grid\" x1=\"{LEFT:.2}\" y1=\"{py:.2}\" x2=\"{RIGHT:.2}\" y2=\"{py:.2}\"/>\
                 <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
                LEFT - 8.0,
                py + 4.0,
                tick_label(v, ys)
            );
        }
        let _ = writeln!(
            self.body,
            "<rect class=\"axis\" fill=\"none\" x=\"{LEFT:.2}\" y=\"{TOP:.2}\" width=\"{:.2}\" height=\"{:.2}\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n\
             <text x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.2})\">{}</text>",
            RIGHT - LEFT,
            BOTTOM - TOP,
            (LEFT + RIGHT) / 2.0,
            HEIGHT - 20.0,
            escape(x_label),
            (TOP + BOTTOM) / 2.0,
            (TOP + BOTTOM) / 2.0,
            escape(y_label)
        );
    }

    pub fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.lo) / self.x.span() * (RIGHT - LEFT)
    }

    pub fn py(&self, y: f64) -> f64 {
        BOTTOM - (y - self.y.lo) / self.y.span() * (BOTTOM - TOP)
    }

    pub fn line(&mut self, class: &str, a: (f64, f64), b: (f64, f64)) {
        let _ = writeln!(
            self.body,
            "<line class=\"{class}\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>",
            self.px(a.0),
            self.py(a.1),
            self.px(b.0),
            self.py(b.1)
        );
    }

    fn points(&self, pts: &[(f64, f64)]) -> String {
        let mut s = String::with_capacity(pts.len() * 16);
        for (i, &(x, y)) in pts.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{:.2},{:.2}", self.px(x), self.py(y));
        }
        s
    }

    pub fn polyline(&mut self, class: &str, pts: &[(f64, f64)]) {
        let p = self.points(pts);
        let _ = writeln!(self.body, "<polyline class=\"{class}\" points=\"{p}\"/>");
    }

    pub fn polygon(&mut self, class: &str, pts: &[(f64, f64)]) {
        let p = self.points(pts);
        let _ = writeln!(self.body, "<polygon class=\"{class}\" points=\"{p}\"/>");
    }

    pub fn circle(&mut self, class: &str, at: (f64, f64), r: f64) {
        let _ = writeln!(
            self.body,
            "<circle class=\"{class}\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"{r:.2}\"/>",
            self.px(at.0),
            self.py(at.1)
        );
    }

    /// Text at data coordinates.
    pub fn label(&mut self, at: (f64, f64), anchor: &str, text: &str) {
        let _ = writeln!(
            self.body,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"{anchor}\">{}</text>",
            self.px(at.0),
            self.py(at.1),
            escape(text)
        );
    }

    /// One legend row above the plot area, entries left to right.
    pub fn legend(&mut self, entries: &[(Swatch, &str, &str)]) {
        let y = TOP - 12.0;
        let mut x = LEFT;
        for (swatch, class, text) in entries {
            let _ = match swatch {
                Swatch::Line => write!(
                    self.body,
                    "<line class=\"{class}\" x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>",
                    y - 4.0,
                    x + 22.0,
                    y - 4.0
                ),
                Swatch::Fill => write!(
                    self.body,
                    "<rect class=\"{class}\" x=\"{x:.2}\" y=\"{:.2}\" width=\"22\" height=\"10\"/>",
                    y - 9.0
                ),
                Swatch::Dot => write!(
                    self.body,
                    "<circle class=\"{class}\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\"/>",
                    x + 11.0,
                    y - 4.0
                ),
            };
            let _ = writeln!(
                self.body,
                "<text x=\"{:.2}\" y=\"{y:.2}\">{}</text>",
                x + 28.0,
                escape(text)
            );
            x += 28.0 + 7.5 * text.chars().count() as f64 + 24.0;
        }
    }

    pub fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
