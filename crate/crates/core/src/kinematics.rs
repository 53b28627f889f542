//! Emergent mass, momentum and energy, step statistics and frame changes.
//!
//! Rates follow the per-observer convention `r_p = N / (2 dp)` and
//! `r_q = N / (2 dq)`: each observer receives half of the `N` influences a
//! particle sends. Rates defined over the total count differ by a factor of 2.

use crate::error::{Error, Result};

/// Emergent quantities of a particle-chain segment that sent `n_total`
/// influences and spans `(dp, dq)` on the observer pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmergentState {
    pub n_total: f64,
    pub dp: f64,
    pub dq: f64,
    pub r_p: f64,
    pub r_q: f64,
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    /// Proper time `sqrt(dp * dq)`.
    pub tau: f64,
}

impl EmergentState {
    /// `dt / tau`.
    pub fn gamma(&self) -> f64 {
        (self.dp + self.dq) / (2.0 * self.tau)
    }

    pub fn beta(&self) -> f64 {
        (self.dp - self.dq) / (self.dp + self.dq)
    }
}

/// `n_total` is a count, taken as a real so continuum trajectories can use it.
pub fn emergent_state(n_total: f64, dp: f64, dq: f64) -> Result<EmergentState> {
    if !(n_total > 0.0) {
        return Err(Error::domain(format!("influence count must be positive, got {n_total}")));
    }
    if !(dp > 0.0 && dq > 0.0) {
        return Err(Error::domain(format!(
            "interval lengths must be positive, got dp={dp}, dq={dq}"
        )));
    }
    let r_p = n_total / (2.0 * dp);
    let r_q = n_total / (2.0 * dq);
    let tau = (dp * dq).sqrt();
    Ok(EmergentState {
        n_total,
        dp,
        dq,
        r_p,
        r_q,
        mass: n_total / (2.0 * tau),
        momentum: (r_q - r_p) / 2.0,
        energy: (r_p + r_q) / 2.0,
        tau,
    })
}

/// Relation between the unit frame and a primed frame: an interval of length
/// `k_len` along `P` projects to lengths `m` (forward) and `n` (backward) on
/// `P'`, giving the step-length ratio `k = sqrt(m / n)`.
///
/// A rest interval of the unprimed pair appears to move at `v = (m - n) / (m + n)`
/// in the primed pair. In the usual boost convention this is a boost by `-v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameRelation {
    m: Option<u64>,
    n: Option<u64>,
    k: f64,
    v: f64,
}

impl FrameRelation {
    pub fn new(m: u64, n: u64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::domain("projected lengths m and n must be positive"));
        }
        let (mf, nf) = (m as f64, n as f64);
        Ok(Self {
            m: Some(m),
            n: Some(n),
            k: (mf / nf).sqrt(),
            v: (mf - nf) / (mf + nf),
        })
    }

    pub fn from_k(k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::domain(format!("k must be positive and finite, got {k}")));
        }
        let k2 = k * k;
        Ok(Self {
            m: None,
            n: None,
            k,
            v: (k2 - 1.0) / (k2 + 1.0),
        })
    }

    pub fn from_velocity(v: f64) -> Result<Self> {
        if !(v.abs() < 1.0) {
            return Err(Error::domain(format!("|v| must be below 1, got {v}")));
        }
        Ok(Self {
            m: None,
            n: None,
            k: ((1.0 + v) / (1.0 - v)).sqrt(),
            v,
        })
    }

    pub fn identity() -> Self {
        Self {
            m: Some(1),
            n: Some(1),
            k: 1.0,
            v: 0.0,
        }
    }

    pub fn m(&self) -> Option<u64> {
        self.m
    }

    pub fn n(&self) -> Option<u64> {
        self.n
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn rapidity(&self) -> f64 {
        self.k.ln()
    }

    /// Applying `self` then `next`: step ratios multiply.
    pub fn then(&self, next: &FrameRelation) -> FrameRelation {
        let k = self.k * next.k;
        let k2 = k * k;
        FrameRelation {
            m: None,
            n: None,
            k,
            v: (k2 - 1.0) / (k2 + 1.0),
        }
    }
}

/// `(dp, dq) -> (k dp, dq / k)`.
pub fn transform_interval(rel: &FrameRelation, dp: f64, dq: f64) -> (f64, f64) {
    (rel.k * dp, dq / rel.k)
}

/// Standard boost by velocity `v`.
pub fn lorentz(dt: f64, dx: f64, v: f64) -> Result<(f64, f64)> {
    if !(v.abs() < 1.0) {
        return Err(Error::domain(format!("|v| must be below 1, got {v}")));
    }
    let gamma = 1.0 / (1.0 - v * v).sqrt();
    Ok((gamma * (dt - v * dx), gamma * (dx - v * dt)))
}

/// Statistics of a walk with `n_p` steps toward `P` out of `n_total`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub n_p: u64,
    pub n_total: u64,
    pub pr_right: f64,
    pub pr_left: f64,
    /// `1 / (2 sqrt(Pr(R) (1 - Pr(R))))`.
    pub m_rel: f64,
    /// Velocity of the whole walk in the unit-step frame, `2 Pr(R) - 1`.
    pub beta: f64,
    /// `1 / sqrt(1 - beta^2)`.
    pub gamma: f64,
    /// `m_rel / gamma`; the mass of a balanced unit-step walk, i.e. 1.
    pub rest_mass: f64,
    /// `N Pr(R) k` in the given frame.
    pub dp: f64,
    /// `N (1 - Pr(R)) / k` in the given frame.
    pub dq: f64,
}

pub fn step_stats(n_p: u64, n_total: u64, frame: &FrameRelation) -> Result<StepStats> {
    if n_total == 0 || n_p > n_total {
        return Err(Error::domain(format!("invalid step counts {n_p} of {n_total}")));
    }
    if n_p == 0 || n_p == n_total {
        return Err(Error::DegenerateWalk(format!(
            "{n_p} of {n_total} steps toward P is lightlike"
        )));
    }
    let pr_right = n_p as f64 / n_total as f64;
    let pr_left = (n_total - n_p) as f64 / n_total as f64;
    let m_rel = 1.0 / (2.0 * (pr_right * pr_left).sqrt());
    let beta = pr_right - pr_left;
    let gamma = 1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt();
    let (dp, dq) = transform_interval(
        frame,
        n_total as f64 * pr_right,
        n_total as f64 * pr_left,
    );
    Ok(StepStats {
        n_p,
        n_total,
        pr_right,
        pr_left,
        m_rel,
        beta,
        gamma,
        rest_mass: m_rel / gamma,
        dp,
        dq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rest_state() {
        let s = emergent_state(2.0, 1.0, 1.0).unwrap();
        assert_eq!((s.r_p, s.r_q, s.mass, s.momentum, s.energy), (1.0, 1.0, 1.0, 0.0, 1.0));
    }

    #[test]
    fn moving_state_and_mass_shell() {
        let s = emergent_state(2.0, 4.0, 1.0).unwrap();
        assert_eq!((s.r_p, s.r_q), (0.25, 1.0));
        assert_eq!((s.mass, s.momentum, s.energy), (0.5, 0.375, 0.625));
        assert_eq!(s.energy * s.energy - s.momentum * s.momentum, 0.25);
        assert_eq!(s.mass * s.mass, 0.25);
    }

    #[test]
    fn nonpositive_inputs_are_domain_errors() {
        assert!(emergent_state(2.0, 0.0, 1.0).is_err());
        assert!(emergent_state(2.0, 1.0, -1.0).is_err());
        assert!(emergent_state(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn frame_four_one() {
        let rel = FrameRelation::new(4, 1).unwrap();
        assert_eq!(rel.k(), 2.0);
        assert_eq!(rel.v(), 0.6);
        let (dp, dq) = transform_interval(&rel, 1.0, 1.0);
        assert_eq!((dp, dq), (2.0, 0.5));
        assert_eq!((dp - dq) / (dp + dq), rel.v());
    }

    #[test]
    fn unit_k_is_identity() {
        let rel = FrameRelation::identity();
        assert_eq!(transform_interval(&rel, 3.5, 0.25), (3.5, 0.25));
        assert_eq!(lorentz(3.0, 1.0, 0.0).unwrap(), (3.0, 1.0));
    }

    #[test]
    fn velocity_and_k_agree() {
        for v in [-0.9, -0.3, 0.0, 0.2, 0.75] {
            let rel = FrameRelation::from_velocity(v).unwrap();
            let back = FrameRelation::from_k(rel.k()).unwrap();
            assert!((back.v() - v).abs() < 1e-15);
        }
    }

    #[test]
    fn superluminal_boost_is_rejected() {
        assert!(lorentz(1.0, 0.0, 1.0).is_err());
        assert!(FrameRelation::from_velocity(-1.0).is_err());
        assert!(FrameRelation::new(0, 3).is_err());
        assert!(FrameRelation::from_k(0.0).is_err());
    }

    #[test]
    fn balanced_walk_has_unit_relativistic_mass() {
        let s = step_stats(50, 100, &FrameRelation::identity()).unwrap();
        assert_eq!((s.pr_right, s.m_rel, s.gamma, s.beta), (0.5, 1.0, 1.0, 0.0));
    }

    #[test]
    fn three_of_five_walk() {
        let s = step_stats(3, 5, &FrameRelation::identity()).unwrap();
        assert!((s.pr_right - 0.6).abs() < 1e-15);
        assert!((s.pr_right + s.pr_left - 1.0).abs() < 1e-15);
        assert!((s.m_rel - 1.0 / (2.0 * 0.24f64.sqrt())).abs() < 1e-15);
        assert!((s.m_rel - 1.020_620_726_159_658).abs() < 1e-12);
        assert!((s.m_rel - s.gamma).abs() < 1e-12);
    }

    #[test]
    fn step_stats_in_a_moving_frame() {
        let rel = FrameRelation::new(4, 1).unwrap();
        let s = step_stats(3, 5, &rel).unwrap();
        assert!((s.dp - 5.0 * 0.6 * 2.0).abs() < 1e-12);
        assert!((s.dq - 5.0 * 0.4 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn lightlike_walks_are_degenerate() {
        let id = FrameRelation::identity();
        assert!(matches!(step_stats(0, 5, &id), Err(Error::DegenerateWalk(_))));
        assert!(matches!(step_stats(5, 5, &id), Err(Error::DegenerateWalk(_))));
    }
}
