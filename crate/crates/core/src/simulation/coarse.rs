//! Windowed velocity estimates of a walk.

use std::io::{self, Write};

use super::walk::{Step, ZitterPath};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSample {
    /// Proper time at the middle emission of the window.
    pub tau_mid: f64,
    /// `(n_p - n_q) / (n_p + n_q)` over the window's emissions.
    pub beta_hat: f64,
    /// Binomial standard error of `beta_hat`.
    pub stderr: f64,
    /// Velocity of the bookkeeping interval at the middle emission.
    pub beta_bookkeeping: f64,
    pub n_p: u64,
    pub n_q: u64,
}

/// Straight-line fit `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeasuredTrajectory {
    pub window: u64,
    pub samples: Vec<WindowSample>,
}

pub const TRAJECTORY_HEADER: &str = "tau_mid,beta_hat,stderr,beta_bookkeeping,beta_model,residual";

/// Splits the emissions of `path` into consecutive windows of `window`
/// emissions; a trailing partial window is dropped. Receipts are not counted.
pub fn coarse_grain(path: &ZitterPath, window: u64) -> Result<MeasuredTrajectory> {
    if window < 10 {
        return Err(Error::domain(format!("window must be at least 10, got {window}")));
    }
    let n = path.n_emissions();
    if n < window {
        return Err(Error::domain(format!(
            "path has {n} emissions, shorter than one window of {window}"
        )));
    }
    let mid = window / 2;
    let mut samples = Vec::with_capacity((n / window) as usize);
    let (mut n_p, mut n_q) = (0u64, 0u64);
    let mut at_mid = None;
    let book = path.bookkeeping();
    for (&step, &state) in path.steps().iter().zip(&book) {
        match step {
            Step::P => n_p += 1,
            Step::Q => n_q += 1,
            _ => continue,
        }
        if n_p + n_q == mid + 1 {
            at_mid = Some(state);
        }
        if n_p + n_q == window {
            let mid_state = at_mid.take().expect("middle precedes end");
            samples.push(window_sample(n_p, n_q, path.tau_of(&mid_state), mid_state.beta()));
            n_p = 0;
            n_q = 0;
        }
    }
    Ok(MeasuredTrajectory { window, samples })
}

fn window_sample(n_p: u64, n_q: u64, tau_mid: f64, beta_bookkeeping: f64) -> WindowSample {
    let w = (n_p + n_q) as f64;
    // shrink toward 1/2 so lightlike windows still carry a nonzero error
    let p = (n_p as f64 + 0.5) / (w + 1.0);
    WindowSample {
        tau_mid,
        beta_hat: (n_p as f64 - n_q as f64) / w,
        stderr: 2.0 * (p * (1.0 - p) / w).sqrt(),
        beta_bookkeeping,
        n_p,
        n_q,
    }
}

impl MeasuredTrajectory {
    pub fn residuals<F: Fn(f64) -> f64>(&self, model: F) -> Vec<f64> {
        self.samples.iter().map(|s| s.beta_hat - model(s.tau_mid)).collect()
    }

    pub fn max_abs_residual<F: Fn(f64) -> f64>(&self, model: F) -> f64 {
        self.residuals(model).into_iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    pub fn mean_beta(&self) -> f64 {
        let n: u64 = self.samples.iter().map(|s| s.n_p + s.n_q).sum();
        let p: u64 = self.samples.iter().map(|s| s.n_p).sum();
        let q: u64 = self.samples.iter().map(|s| s.n_q).sum();
        if n == 0 {
            return 0.0;
        }
        (p as f64 - q as f64) / n as f64
    }

    /// Least-squares fit of `artanh(beta_hat)` against `tau_mid`; lightlike
    /// windows are skipped. `None` with fewer than three usable windows.
    pub fn rapidity_fit(&self) -> Option<LinearFit> {
        let pts: Vec<(f64, f64)> = self
            .samples
            .iter()
            .filter(|s| s.beta_hat.abs() < 1.0)
            .map(|s| (s.tau_mid, s.beta_hat.atanh()))
            .collect();
        linear_fit(&pts)
    }

    /// Averages replicas window by window. All inputs must share the window
    /// width and count.
    pub fn average(replicas: &[MeasuredTrajectory]) -> Result<MeasuredTrajectory> {
        let first = replicas
            .first()
            .ok_or_else(|| Error::domain("no replicas to average"))?;
        if replicas
            .iter()
            .any(|m| m.window != first.window || m.samples.len() != first.samples.len())
        {
            return Err(Error::domain("replicas differ in window layout"));
        }
        let k = replicas.len() as f64;
        let samples = (0..first.samples.len())
            .map(|i| {
                let col = replicas.iter().map(|m| &m.samples[i]);
                let mut acc = WindowSample {
                    tau_mid: 0.0,
                    beta_hat: 0.0,
                    stderr: 0.0,
                    beta_bookkeeping: 0.0,
                    n_p: 0,
                    n_q: 0,
                };
                for s in col {
                    acc.tau_mid += s.tau_mid / k;
                    acc.beta_hat += s.beta_hat / k;
                    acc.stderr += s.stderr * s.stderr;
                    acc.beta_bookkeeping += s.beta_bookkeeping / k;
                    acc.n_p += s.n_p;
                    acc.n_q += s.n_q;
                }
                acc.stderr = acc.stderr.sqrt() / k;
                acc
            })
            .collect();
        Ok(MeasuredTrajectory {
            window: first.window,
            samples,
        })
    }

    /// One row per window; `model` supplies the reference velocity.
    pub fn write_csv<W: Write, F: Fn(f64) -> f64>(&self, mut out: W, model: F) -> io::Result<()> {
        writeln!(out, "{TRAJECTORY_HEADER}")?;
        for s in &self.samples {
            let m = model(s.tau_mid);
            writeln!(
                out,
                "{},{},{},{},{},{}",
                s.tau_mid,
                s.beta_hat,
                s.stderr,
                s.beta_bookkeeping,
                m,
                s.beta_hat - m
            )?;
        }
        Ok(())
    }
}

pub fn linear_fit(pts: &[(f64, f64)]) -> Option<LinearFit> {
    let n = pts.len();
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Some(LinearFit {
        slope,
        intercept,
        slope_stderr: (rss / (nf - 2.0) / sxx).sqrt(),
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_p_window_is_lightlike() {
        let path = ZitterPath::from_tags(&"P".repeat(20)).unwrap();
        let m = coarse_grain(&path, 10).unwrap();
        assert_eq!(m.samples.len(), 2);
        assert!(m.samples.iter().all(|s| s.beta_hat == 1.0 && s.stderr > 0.0));
        assert!(m.rapidity_fit().is_none());
    }

    #[test]
    fn balanced_window_is_at_rest() {
        let path = ZitterPath::from_tags(&"PQ".repeat(10)).unwrap();
        let m = coarse_grain(&path, 20).unwrap();
        assert_eq!(m.samples[0].beta_hat, 0.0);
        assert_eq!(m.mean_beta(), 0.0);
    }

    #[test]
    fn receipts_are_not_counted_and_partial_windows_dropped() {
        let path = ZitterPath::from_tags(&format!("{}{}", "PRQ".repeat(10), "PPP")).unwrap();
        let m = coarse_grain(&path, 10).unwrap();
        assert_eq!(m.samples.len(), 2);
        assert_eq!(m.samples[0].n_p + m.samples[0].n_q, 10);
    }

    #[test]
    fn short_paths_and_tiny_windows_are_domain_errors() {
        let path = ZitterPath::from_tags("PQPQ").unwrap();
        assert!(coarse_grain(&path, 10).is_err());
        assert!(coarse_grain(&path, 2).is_err());
    }

    #[test]
    fn tau_mid_increases() {
        let path = ZitterPath::from_tags(&"PQQ".repeat(40)).unwrap();
        let m = coarse_grain(&path, 12).unwrap();
        assert!(m.samples.windows(2).all(|w| w[1].tau_mid > w[0].tau_mid));
    }

    #[test]
    fn exact_line_is_recovered() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 0.5 + 0.25 * i as f64)).collect();
        let fit = linear_fit(&pts).unwrap();
        assert!((fit.slope - 0.25).abs() < 1e-14);
        assert!((fit.intercept - 0.5).abs() < 1e-14);
        assert!(fit.slope_stderr < 1e-12);
        assert!(linear_fit(&pts[..2]).is_none());
    }

    #[test]
    fn averaging_identical_replicas_shrinks_stderr() {
        let path = ZitterPath::from_tags(&"PQP".repeat(20)).unwrap();
        let m = coarse_grain(&path, 15).unwrap();
        let avg = MeasuredTrajectory::average(&[m.clone(), m.clone(), m.clone(), m.clone()]).unwrap();
        for (a, s) in avg.samples.iter().zip(&m.samples) {
            assert!((a.beta_hat - s.beta_hat).abs() < 1e-15);
            assert!((a.stderr - s.stderr / 2.0).abs() < 1e-15);
        }
        assert!(MeasuredTrajectory::average(&[]).is_err());
    }

    #[test]
    fn csv_rows_match_samples() {
        let path = ZitterPath::from_tags(&"PQ".repeat(20)).unwrap();
        let m = coarse_grain(&path, 10).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf, |_| 0.0).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some(TRAJECTORY_HEADER));
        assert_eq!(text.lines().count(), 5);
    }
}
