//! Effect of received influence on a particle.
//!
//! A receipt from the right (from `Q`) lengthens `dp` by one step `k` and
//! shrinks `dq` so that the proper time `sqrt(dp * dq)` is unchanged. At a
//! constant receipt rate `r` the continuum limit is
//!
//! ```text
//! d(dp)/dtau = ( r + 1/tau) dp
//! d(dq)/dtau = (-r + 1/tau) dq
//! ```
//!
//! with solution `dp = A tau e^(r tau)`, `dq = B tau e^(-r tau)`, `A B = 1`,
//! so the velocity is `tanh(r tau + phi0)` with `A = e^phi0`.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::kinematics::emergent_state;

/// Running interval bookkeeping `(dp, dq)` of an influenced particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicState {
    pub dp: f64,
    pub dq: f64,
    /// Length of one received-influence increment.
    pub k_step: f64,
}

impl DynamicState {
    pub fn new(dp: f64, dq: f64, k_step: f64) -> Result<Self> {
        if !(dp > 0.0 && dq > 0.0) {
            return Err(Error::domain(format!(
                "dp and dq must be positive, got ({dp}, {dq})"
            )));
        }
        if !(k_step >= 0.0 && k_step.is_finite()) {
            return Err(Error::domain(format!("k_step must be non-negative, got {k_step}")));
        }
        Ok(Self { dp, dq, k_step })
    }

    /// State at proper time `tau` moving with rapidity `rapidity`.
    pub fn from_rapidity(tau: f64, rapidity: f64, k_step: f64) -> Result<Self> {
        Self::new(tau * rapidity.exp(), tau * (-rapidity).exp(), k_step)
    }

    pub fn tau(&self) -> f64 {
        (self.dp * self.dq).sqrt()
    }

    pub fn beta(&self) -> f64 {
        (self.dp - self.dq) / (self.dp + self.dq)
    }

    pub fn rapidity(&self) -> f64 {
        0.5 * (self.dp / self.dq).ln()
    }

    /// One influence received from the right.
    #[must_use]
    pub fn receive_right(&self) -> Self {
        let grown = self.dp + self.k_step;
        Self {
            dp: grown,
            dq: self.dq * (self.dp / grown),
            k_step: self.k_step,
        }
    }

    /// One influence received from the left; mirror image of
    /// [`Self::receive_right`].
    #[must_use]
    pub fn receive_left(&self) -> Self {
        let grown = self.dq + self.k_step;
        Self {
            dp: self.dp * (self.dq / grown),
            dq: grown,
            k_step: self.k_step,
        }
    }
}

/// Receipt rates per unit proper time from each side.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InfluenceRates {
    pub r_right: f64,
    pub r_left: f64,
}

impl InfluenceRates {
    pub fn new(r_right: f64, r_left: f64) -> Self {
        Self { r_right, r_left }
    }

    /// Rates with net value `r`, all of it from one side.
    pub fn net(r: f64) -> Self {
        Self {
            r_right: r.max(0.0),
            r_left: (-r).max(0.0),
        }
    }

    /// Right-side rate from receipt counts, see [`influence_rate`].
    pub fn from_counts(n_r: u64, n_p: u64, dtau: f64) -> Result<Self> {
        Ok(Self::new(influence_rate(n_r, n_p, dtau)?, 0.0))
    }

    pub fn r_net(&self) -> f64 {
        self.r_right - self.r_left
    }
}

/// `n_r` receipts while influencing `P` `n_p` times over proper time `dtau`.
pub fn influence_rate(n_r: u64, n_p: u64, dtau: f64) -> Result<f64> {
    if n_p == 0 || !(dtau > 0.0) {
        return Err(Error::domain(format!(
            "rate needs n_p > 0 and dtau > 0, got n_p={n_p}, dtau={dtau}"
        )));
    }
    Ok(n_r as f64 / (n_p as f64 * dtau))
}

/// Closed-form solution at constant net rate `r` with initial rapidity `phi0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticAccel {
    pub r: f64,
    pub phi0: f64,
}

impl AnalyticAccel {
    pub fn new(r: f64, phi0: f64) -> Self {
        Self { r, phi0 }
    }

    /// The solution passing through `state` at its proper time.
    pub fn through(r: f64, state: &DynamicState) -> Self {
        let tau = state.tau();
        Self {
            r,
            phi0: state.rapidity() - r * tau,
        }
    }

    pub fn a(&self) -> f64 {
        self.phi0.exp()
    }

    pub fn b(&self) -> f64 {
        (-self.phi0).exp()
    }

    pub fn rapidity(&self, tau: f64) -> f64 {
        self.r * tau + self.phi0
    }

    pub fn delta_p(&self, tau: f64) -> f64 {
        tau * self.rapidity(tau).exp()
    }

    pub fn delta_q(&self, tau: f64) -> f64 {
        tau * (-self.rapidity(tau)).exp()
    }
}

pub fn analytic_beta(tau: f64, sol: &AnalyticAccel) -> f64 {
    sol.rapidity(tau).tanh()
}

/// Relativistic force `dP/dtau = M gamma r`.
pub fn force(mass: f64, gamma: f64, r: f64) -> f64 {
    mass * gamma * r
}

/// Relativistic power `dE/dtau = F beta`.
pub fn power(force: f64, beta: f64) -> f64 {
    force * beta
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub tau: f64,
    pub dp: f64,
    pub dq: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    pub force: f64,
    pub power: f64,
}

pub const TRAJECTORY_CSV_HEADER: &str = "tau,dp,dq,beta,gamma,mass,momentum,energy,force,power";

/// Sampled solution of the continuum equations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{TRAJECTORY_CSV_HEADER}")?;
        for s in &self.samples {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                s.tau, s.dp, s.dq, s.beta, s.gamma, s.mass, s.momentum, s.energy, s.force, s.power
            )?;
        }
        Ok(())
    }

    pub fn last(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }
}

/// Integrates the continuum equations from `initial` (at its proper time
/// `tau0 = sqrt(dp * dq)`) over `tau_span` with fixed-step classical
/// Runge-Kutta. `rates` is evaluated at `(tau, x)` with `x = (dp - dq) / 2`.
///
/// The particle is taken to emit at the rest-frame rate of a unit-step walk,
/// `N = 2 tau`, so its rest mass is 1.
pub fn evolve_ode<F>(initial: DynamicState, rates: F, tau_span: f64, dtau: f64) -> Result<Trajectory>
where
    F: Fn(f64, f64) -> InfluenceRates,
{
    if !(dtau > 0.0 && dtau.is_finite()) {
        return Err(Error::domain(format!("dtau must be positive, got {dtau}")));
    }
    if !(initial.dp > 0.0 && initial.dq > 0.0) {
        return Err(Error::SingularTime(
            "integration must start at tau0 > 0".to_string(),
        ));
    }
    let tau0 = initial.tau();
    let tau_end = tau0 + tau_span;
    if !(tau_end > 0.0) {
        return Err(Error::SingularTime(format!(
            "span {tau_span} from tau0 = {tau0} crosses tau = 0"
        )));
    }
    let steps = ((tau_span.abs() / dtau) - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 { 0.0 } else { tau_span / steps as f64 };

    let rhs = |tau: f64, y: [f64; 2]| -> [f64; 2] {
        let r = rates(tau, (y[0] - y[1]) / 2.0).r_net();
        let emit = 1.0 / tau;
        [(r + emit) * y[0], (-r + emit) * y[1]]
    };

    let mut samples = Vec::with_capacity(steps + 1);
    let mut y = [initial.dp, initial.dq];
    let mut tau = tau0;
    samples.push(sample(tau, y, rates(tau, (y[0] - y[1]) / 2.0).r_net())?);
    for i in 0..steps {
        let k1 = rhs(tau, y);
        let k2 = rhs(tau + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = rhs(tau + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = rhs(tau + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        tau = tau0 + (i + 1) as f64 * h;
        samples.push(sample(tau, y, rates(tau, (y[0] - y[1]) / 2.0).r_net())?);
    }
    Ok(Trajectory { samples })
}

fn sample(tau: f64, y: [f64; 2], r: f64) -> Result<TrajectorySample> {
    let state = emergent_state(2.0 * tau, y[0], y[1])?;
    let gamma = state.gamma();
    let beta = state.beta();
    let f = force(state.mass, gamma, r);
    Ok(TrajectorySample {
        tau,
        dp: y[0],
        dq: y[1],
        beta,
        gamma,
        mass: state.mass,
        momentum: state.momentum,
        energy: state.energy,
        force: f,
        power: power(f, beta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(dp: f64, dq: f64, k: f64) -> DynamicState {
        DynamicState::new(dp, dq, k).unwrap()
    }

    #[test]
    fn receipt_from_the_right() {
        let s = state(1.0, 1.0, 1.0).receive_right();
        assert_eq!((s.dp, s.dq), (2.0, 0.5));
        assert_eq!(s.dp * s.dq, 1.0);
    }

    #[test]
    fn receipt_from_the_left() {
        let s = state(1.0, 1.0, 1.0).receive_left();
        assert_eq!((s.dp, s.dq), (0.5, 2.0));
    }

    #[test]
    fn zero_step_receipt_is_identity() {
        let s = state(3.0, 0.7, 0.0);
        assert_eq!(s.receive_right(), s);
        assert_eq!(s.receive_left(), s);
    }

    #[test]
    fn repeated_receipts_match_closed_form() {
        let (dp0, dq0, k) = (5.0, 3.0, 0.5);
        let mut s = state(dp0, dq0, k);
        for n in 1..=200 {
            s = s.receive_right();
            let dp = dp0 + n as f64 * k;
            assert_eq!(s.dp, dp);
            assert!((s.dq - dp0 * dq0 / dp).abs() <= 1e-14 * s.dq);
        }
    }

    #[test]
    fn left_then_right_is_identity_to_first_order_at_rest() {
        let k = 1e-3;
        let s = state(10.0, 10.0, k);
        let back = s.receive_right().receive_left();
        let bound = 2.0 * (k / 10.0) * k;
        assert!((back.dp - s.dp).abs() < bound);
        assert!((back.dq - s.dq).abs() < bound);
        assert!((back.dp - s.dp).abs() > 0.0);
    }

    #[test]
    fn rate_weighted_receipts_cancel_when_moving() {
        // dp / k receipts from the right balance dq / k from the left
        let k = 1e-4;
        let s = state(4.0, 1.0, k);
        let mut moved = s;
        for _ in 0..40 {
            moved = moved.receive_right();
        }
        for _ in 0..10 {
            moved = moved.receive_left();
        }
        assert!((moved.rapidity() - s.rapidity()).abs() < 1e-5);
    }

    #[test]
    fn taylor_regime_of_receive_right() {
        let (dp, dq) = (1.0e4, 3.0e3);
        let k = 1e-4 * dp;
        let s = state(dp, dq, k).receive_right();
        let exact = s.dq - dq;
        let linear = -(dq / dp) * k;
        assert!(((exact - linear) / linear).abs() <= 1e-3);
    }

    #[test]
    fn rate_from_counts() {
        assert_eq!(influence_rate(0, 10, 2.0).unwrap(), 0.0);
        assert!((influence_rate(1, 100, 0.1).unwrap() - 0.1).abs() < 1e-15);
        assert!(influence_rate(1, 0, 1.0).is_err());
        assert!(influence_rate(1, 1, 0.0).is_err());
        assert_eq!(InfluenceRates::from_counts(3, 1, 1.0).unwrap().r_net(), 3.0);
    }

    #[test]
    fn net_rate_is_right_minus_left() {
        let r = InfluenceRates::new(0.3, 0.1);
        assert_eq!(r.r_net(), 0.3 - 0.1);
        assert_eq!(InfluenceRates::net(-0.2), InfluenceRates::new(0.0, 0.2));
    }

    #[test]
    fn analytic_constants_are_reciprocal() {
        let sol = AnalyticAccel::new(0.3, -0.7);
        assert!((sol.a() * sol.b() - 1.0).abs() < 1e-15);
        let tau = 2.5;
        assert!((sol.delta_p(tau) * sol.delta_q(tau) - tau * tau).abs() < 1e-12);
    }

    #[test]
    fn free_particle_is_at_rest() {
        assert_eq!(analytic_beta(17.0, &AnalyticAccel::new(0.0, 0.0)), 0.0);
    }

    #[test]
    fn velocity_approaches_light_speed_monotonically() {
        let sol = AnalyticAccel::new(0.5, 0.0);
        let betas: Vec<f64> = (0..200).map(|i| analytic_beta(i as f64 * 0.1, &sol)).collect();
        assert!(betas.windows(2).all(|w| w[1] >= w[0]));
        assert!(betas.iter().all(|&b| b <= 1.0));
        assert!(analytic_beta(100.0, &sol) > 1.0 - 1e-15);
    }

    #[test]
    fn force_and_power_limits() {
        assert_eq!(force(2.0, 1.3, 0.0), 0.0);
        assert_eq!(force(2.0, 1.0, 0.25), 0.5);
        assert_eq!(power(3.0, 0.0), 0.0);
        assert!(power(-2.0, 0.5) < 0.0);
        assert!(power(-2.0, -0.5) > 0.0);
    }

    #[test]
    fn free_evolution_keeps_rest() {
        let traj = evolve_ode(state(1.0, 1.0, 1.0), |_, _| InfluenceRates::default(), 9.0, 1e-2).unwrap();
        for s in &traj.samples {
            assert!(s.beta.abs() < 1e-12);
            assert!((s.dp - s.tau).abs() < 1e-10 * s.tau);
            assert!((s.dq - s.tau).abs() < 1e-10 * s.tau);
        }
        assert!((traj.last().unwrap().tau - 10.0).abs() < 1e-12);
    }

    #[test]
    fn integration_rejects_singular_start_and_span() {
        let bad = DynamicState { dp: 0.0, dq: 1.0, k_step: 1.0 };
        assert!(matches!(
            evolve_ode(bad, |_, _| InfluenceRates::default(), 1.0, 1e-3),
            Err(Error::SingularTime(_))
        ));
        assert!(matches!(
            evolve_ode(state(1.0, 1.0, 1.0), |_, _| InfluenceRates::default(), -2.0, 1e-3),
            Err(Error::SingularTime(_))
        ));
        assert!(evolve_ode(state(1.0, 1.0, 1.0), |_, _| InfluenceRates::default(), 1.0, 0.0).is_err());
    }

    #[test]
    fn csv_has_header_and_one_row_per_sample() {
        let traj = evolve_ode(state(1.0, 1.0, 1.0), |_, _| InfluenceRates::net(0.1), 1.0, 0.25).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], TRAJECTORY_CSV_HEADER);
        assert_eq!(lines.len(), traj.samples.len() + 1);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 10));
    }
}
