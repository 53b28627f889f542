//! Monte Carlo zitter walks.
//!
//! A walk is a sequence of emissions (P-steps and Q-steps) interleaved with
//! receipts. Next to the realized steps the walk carries a real-valued
//! bookkeeping interval `(dp, dq)` in unit steps:
//!
//! - an emission adds its expected increments `(pi, 1 - pi)` with
//!   `pi = dp / (dp + dq)`, which advances proper time but keeps the ratio
//!   `dp / dq` (the velocity) fixed;
//! - a receipt applies [`DynamicState::receive_right`] or
//!   [`DynamicState::receive_left`], which keeps proper time fixed and
//!   changes the velocity.
//!
//! The emission probability for the next step is read off the bookkeeping,
//! so receipts steer the emission statistics while the emission noise itself
//! does not feed back into the velocity. The bookkeeping depends only on the
//! sequence of step kinds and is replayed by [`ZitterPath::bookkeeping`].

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{EmissionRule, ReceiptSchedule, Scenario, ScenarioConfig};
use super::rng::replica_rng;
use crate::dynamics::DynamicState;
use crate::error::{Error, Result};
use crate::kinematics::{step_stats, FrameRelation, StepStats};

/// Largest `|r| tau` an automatically scaled run is planned to reach.
pub const AUTO_REACH: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// Emission toward observer `P`.
    P,
    /// Emission toward observer `Q`.
    Q,
    /// Influence received from the right (from `Q`).
    ReceiptRight,
    /// Influence received from the left (from `P`).
    ReceiptLeft,
}

impl Step {
    pub fn is_emission(self) -> bool {
        matches!(self, Step::P | Step::Q)
    }

    pub fn tag(self) -> char {
        match self {
            Step::P => 'P',
            Step::Q => 'Q',
            Step::ReceiptRight => 'R',
            Step::ReceiptLeft => 'L',
        }
    }

    pub fn from_tag(c: char) -> Option<Step> {
        match c {
            'P' => Some(Step::P),
            'Q' => Some(Step::Q),
            'R' => Some(Step::ReceiptRight),
            'L' => Some(Step::ReceiptLeft),
            _ => None,
        }
    }
}

/// Bookkeeping effect of one emission of length `k_step`.
fn emit(state: DynamicState) -> DynamicState {
    let grow = 1.0 + state.k_step / (state.dp + state.dq);
    DynamicState {
        dp: state.dp * grow,
        dq: state.dq * grow,
        k_step: state.k_step,
    }
}

fn apply(state: DynamicState, step: Step) -> DynamicState {
    match step {
        Step::P | Step::Q => emit(state),
        Step::ReceiptRight => state.receive_right(),
        Step::ReceiptLeft => state.receive_left(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZitterPath {
    steps: Vec<Step>,
    origin: DynamicState,
    steps_per_tau: f64,
}

impl ZitterPath {
    /// `dp0, dq0` is the bookkeeping interval before the first step, in unit
    /// steps; `steps_per_tau` converts unit steps to proper time.
    pub fn new(steps: Vec<Step>, dp0: f64, dq0: f64, steps_per_tau: f64) -> Result<Self> {
        if !(steps_per_tau > 0.0 && steps_per_tau.is_finite()) {
            return Err(Error::domain(format!("steps_per_tau must be positive, got {steps_per_tau}")));
        }
        Ok(Self {
            steps,
            origin: DynamicState::new(dp0, dq0, 1.0)?,
            steps_per_tau,
        })
    }

    /// A hand-written sequence starting at rest with unit proper time.
    pub fn from_steps(steps: Vec<Step>) -> Self {
        Self::new(steps, 1.0, 1.0, 1.0).expect("unit origin is valid")
    }

    /// Parses tags such as `"PQPRQP"`.
    pub fn from_tags(tags: &str) -> Result<Self> {
        let steps = tags
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| Step::from_tag(c).ok_or_else(|| Error::domain(format!("unknown step tag `{c}`"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_steps(steps))
    }

    pub fn tags(&self) -> String {
        self.steps.iter().map(|s| s.tag()).collect()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn origin(&self) -> DynamicState {
        self.origin
    }

    pub fn steps_per_tau(&self) -> f64 {
        self.steps_per_tau
    }

    fn count(&self, kind: Step) -> u64 {
        self.steps.iter().filter(|&&s| s == kind).count() as u64
    }

    pub fn n_p(&self) -> u64 {
        self.count(Step::P)
    }

    pub fn n_q(&self) -> u64 {
        self.count(Step::Q)
    }

    pub fn n_emissions(&self) -> u64 {
        self.steps.iter().filter(|s| s.is_emission()).count() as u64
    }

    pub fn n_receipts_right(&self) -> u64 {
        self.count(Step::ReceiptRight)
    }

    pub fn n_receipts_left(&self) -> u64 {
        self.count(Step::ReceiptLeft)
    }

    /// Empirical `Pr(R)`, the fraction of emissions that are P-steps.
    pub fn pr_right(&self) -> Option<f64> {
        let n = self.n_emissions();
        (n > 0).then(|| self.n_p() as f64 / n as f64)
    }

    /// Velocity of the whole emission sequence.
    pub fn beta_hat(&self) -> Option<f64> {
        self.pr_right().map(|p| 2.0 * p - 1.0)
    }

    /// Step statistics of the emission sequence seen from `frame`. The counts
    /// and `Pr(R)` do not depend on the frame.
    pub fn step_stats(&self, frame: &FrameRelation) -> Result<StepStats> {
        step_stats(self.n_p(), self.n_emissions(), frame)
    }

    /// Integer advances of the particle along `P` and `Q`: one per emission
    /// toward that observer plus one per receipt that lengthens that side.
    pub fn raw_counts(&self) -> (u64, u64) {
        (
            self.n_p() + self.n_receipts_right(),
            self.n_q() + self.n_receipts_left(),
        )
    }

    /// Bookkeeping state after each step.
    pub fn bookkeeping(&self) -> Vec<DynamicState> {
        let mut state = self.origin;
        self.steps
            .iter()
            .map(|&s| {
                state = apply(state, s);
                state
            })
            .collect()
    }

    pub fn final_state(&self) -> DynamicState {
        self.steps.iter().fold(self.origin, |s, &step| apply(s, step))
    }

    /// Proper time of a bookkeeping state.
    pub fn tau_of(&self, state: &DynamicState) -> f64 {
        state.tau() / self.steps_per_tau
    }

    /// Count-based receipt rate: receipts per qualifying emission per unit
    /// of proper time elapsed, right-side receipts counted positive.
    pub fn realized_rate(&self) -> Option<f64> {
        let (mut tau_p, mut tau_q) = (0.0, 0.0);
        let mut state = self.origin;
        for &s in &self.steps {
            state = apply(state, s);
            match s {
                Step::P => tau_p += self.tau_of(&state),
                Step::Q => tau_q += self.tau_of(&state),
                _ => {}
            }
        }
        let (rr, rl) = (self.n_receipts_right(), self.n_receipts_left());
        if rr + rl == 0 {
            return Some(0.0);
        }
        let right = if rr > 0 { rr as f64 / tau_p } else { 0.0 };
        let left = if rl > 0 { rl as f64 / tau_q } else { 0.0 };
        (right.is_finite() && left.is_finite()).then_some(right - left)
    }

    /// `(t, x)` of the emission sequence in the unit-step frame, starting at
    /// the origin: a P-step moves by `(1/2, +1/2)`, a Q-step by `(1/2, -1/2)`.
    pub fn spacetime(&self) -> Vec<(f64, f64)> {
        let (mut p, mut q) = (0u64, 0u64);
        let mut out = Vec::with_capacity(self.n_emissions() as usize + 1);
        out.push((0.0, 0.0));
        for &s in &self.steps {
            match s {
                Step::P => p += 1,
                Step::Q => q += 1,
                _ => continue,
            }
            let (pf, qf) = (p as f64, q as f64);
            out.push(((pf + qf) / 2.0, (pf - qf) / 2.0));
        }
        out
    }
}

/// Free walk, replica 0.
pub fn simulate_free(config: &ScenarioConfig) -> Result<ZitterPath> {
    config.validate()?;
    if !matches!(config.scenario, Scenario::Free { .. }) {
        return Err(Error::config("kind", "expected a free scenario"));
    }
    simulate_replica(config, 0)
}

/// Accelerated walk, replica 0.
pub fn simulate_accelerated(config: &ScenarioConfig) -> Result<ZitterPath> {
    config.validate()?;
    if !matches!(config.scenario, Scenario::Accelerated { .. }) {
        return Err(Error::config("kind", "expected an accelerated scenario"));
    }
    simulate_replica(config, 0)
}

/// Replica 0 of either kind.
pub fn simulate(config: &ScenarioConfig) -> Result<ZitterPath> {
    config.validate()?;
    simulate_replica(config, 0)
}

/// All replicas, in replica order, run in parallel.
pub fn simulate_replicas(config: &ScenarioConfig) -> Result<Vec<ZitterPath>> {
    config.validate()?;
    (0..config.replicas)
        .into_par_iter()
        .map(|i| simulate_replica(config, u64::from(i)))
        .collect()
}

pub fn simulate_replica(config: &ScenarioConfig, replica: u64) -> Result<ZitterPath> {
    let mut rng = replica_rng(config.seed, replica);
    match config.scenario {
        Scenario::Free { pr_right } => Ok(free_walk(pr_right, config.n_events, config.emission, &mut rng)),
        Scenario::Accelerated {
            r,
            phi0,
            tau0,
            steps_per_tau,
        } => {
            let scale = match steps_per_tau {
                Some(s) => s,
                None => auto_steps_per_tau(r, phi0, tau0, config.n_events)?,
            };
            let walk = AccelWalk {
                r,
                phi0,
                tau0,
                steps_per_tau: scale,
                n_events: config.n_events,
                emission: config.emission,
                receipts: config.receipts,
            };
            walk.run(&mut rng)
        }
    }
}

struct Emitter {
    rule: EmissionRule,
    carry: f64,
}

impl Emitter {
    fn new(rule: EmissionRule) -> Self {
        Self { rule, carry: 0.0 }
    }

    fn next(&mut self, pi: f64, rng: &mut ChaCha8Rng) -> Step {
        let right = match self.rule {
            EmissionRule::Bernoulli => rng.random::<f64>() < pi,
            EmissionRule::Balanced => {
                self.carry += pi;
                if self.carry >= 0.5 {
                    self.carry -= 1.0;
                    true
                } else {
                    false
                }
            }
        };
        if right {
            Step::P
        } else {
            Step::Q
        }
    }
}

fn free_walk(pr_right: f64, n: u64, rule: EmissionRule, rng: &mut ChaCha8Rng) -> ZitterPath {
    let mut emitter = Emitter::new(rule);
    let steps = (0..n).map(|_| emitter.next(pr_right, rng)).collect();
    let phi = 0.5 * (pr_right / (1.0 - pr_right)).ln();
    ZitterPath::new(steps, phi.exp(), (-phi).exp(), 1.0).expect("origin from a valid probability")
}

/// Proper time at which `n` emissions starting at `tau0` end, for emission
/// density `2 S cosh(r tau + phi0)` per unit proper time.
pub fn predicted_tau_end(r: f64, phi0: f64, tau0: f64, steps_per_tau: f64, n: u64) -> f64 {
    let n = n as f64;
    if r == 0.0 {
        return tau0 + n / (2.0 * steps_per_tau * phi0.cosh());
    }
    ((r * n / (2.0 * steps_per_tau) + (r * tau0 + phi0).sinh()).asinh() - phi0) / r
}

/// Unit steps per unit of proper time such that `n` emissions end at
/// `|r| tau = AUTO_REACH`. A free run (`r = 0`) keeps one step per unit.
pub fn auto_steps_per_tau(r: f64, phi0: f64, tau0: f64, n: u64) -> Result<f64> {
    if r == 0.0 {
        return Ok(1.0);
    }
    let tau_end = AUTO_REACH / r.abs();
    if tau_end <= tau0 {
        return Err(Error::Resolution(format!(
            "|r| = {} is too large: already |r| tau0 = {} leaves no room below {AUTO_REACH}",
            r.abs(),
            r.abs() * tau0
        )));
    }
    let span = (r * tau_end + phi0).sinh() - (r * tau0 + phi0).sinh();
    Ok(r * n as f64 / (2.0 * span))
}

struct AccelWalk {
    r: f64,
    phi0: f64,
    tau0: f64,
    steps_per_tau: f64,
    n_events: u64,
    emission: EmissionRule,
    receipts: ReceiptSchedule,
}

impl AccelWalk {
    fn run(&self, rng: &mut ChaCha8Rng) -> Result<ZitterPath> {
        let s = self.steps_per_tau;
        let tau_end = predicted_tau_end(self.r, self.phi0, self.tau0, s, self.n_events);
        if self.r.abs() * tau_end > 1.0 {
            return Err(Error::Resolution(format!(
                "run would reach |r| tau = {:.3} > 1 (more than one receipt per emission); \
                 lower n_events or steps_per_tau",
                self.r.abs() * tau_end
            )));
        }
        let rapidity = self.r * self.tau0 + self.phi0;
        let origin = DynamicState::new(
            s * self.tau0 * rapidity.exp(),
            s * self.tau0 * (-rapidity).exp(),
            1.0,
        )?;
        let mut state = origin;
        let mut emitter = Emitter::new(self.emission);
        let mut receipt_carry = 0.0;
        let mut steps = Vec::with_capacity(self.n_events as usize + self.n_events as usize / 2);
        for _ in 0..self.n_events {
            let pi = state.dp / (state.dp + state.dq);
            let step = emitter.next(pi, rng);
            state = emit(state);
            steps.push(step);
            let receipt = match (step, self.r > 0.0, self.r < 0.0) {
                (Step::P, true, _) => Step::ReceiptRight,
                (Step::Q, _, true) => Step::ReceiptLeft,
                _ => continue,
            };
            let chance = self.r.abs() * state.tau() / s;
            if chance > 1.0 {
                return Err(Error::Resolution(format!(
                    "expected receipts per emission reached {chance:.4} at tau = {:.3}",
                    state.tau() / s
                )));
            }
            let received = match self.receipts {
                ReceiptSchedule::Bernoulli => rng.random::<f64>() < chance,
                ReceiptSchedule::Interval => {
                    receipt_carry += chance;
                    if receipt_carry >= 1.0 {
                        receipt_carry -= 1.0;
                        true
                    } else {
                        false
                    }
                }
            };
            if received {
                state = apply(state, receipt);
                steps.push(receipt);
            }
        }
        ZitterPath::new(steps, origin.dp, origin.dq, s)
    }
}
