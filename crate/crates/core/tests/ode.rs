//! RK4 evolution of the interval against the closed-form solution.

use influence_core::{evolve_ode, AnalyticAccel, DynamicState, Error, InfluenceRates, Trajectory};

fn run(r: f64, phi0: f64, dtau: f64) -> (Trajectory, AnalyticAccel) {
    let start = DynamicState::from_rapidity(1.0, phi0, 1.0).unwrap();
    let t = evolve_ode(start, |_, _| InfluenceRates::net(r), 9.0, dtau).unwrap();
    (t, AnalyticAccel::through(r, &start))
}

fn max_rel_error(t: &Trajectory, exact: &AnalyticAccel) -> f64 {
    t.samples
        .iter()
        .map(|s| {
            let ep = (s.dp / exact.delta_p(s.tau) - 1.0).abs();
            let eq = (s.dq / exact.delta_q(s.tau) - 1.0).abs();
            ep.max(eq)
        })
        .fold(0.0, f64::max)
}

#[test]
fn matches_the_closed_form() {
    for (r, phi0) in [(0.05, 0.0), (-0.1, 0.3)] {
        let (t, exact) = run(r, phi0, 1e-3);
        assert!(max_rel_error(&t, &exact) <= 1e-8);
        let last = t.last().unwrap();
        assert!((last.tau - 10.0).abs() <= 1e-12);
        assert!((last.beta - exact.rapidity(last.tau).tanh()).abs() <= 1e-8);
    }
}

#[test]
fn intervals_grow_at_their_rates() {
    let r = 0.05;
    let (t, _) = run(r, 0.0, 1e-3);
    let s = &t.samples;
    for i in (1..s.len() - 1).step_by(97) {
        let d = (s[i + 1].dp - s[i - 1].dp) / (s[i + 1].tau - s[i - 1].tau);
        let want = (r + 1.0 / s[i].tau) * s[i].dp;
        assert!((d / want - 1.0).abs() <= 1e-6);
    }
}

#[test]
fn product_is_proper_time_squared() {
    let (t, _) = run(0.05, 0.2, 1e-2);
    for s in &t.samples {
        assert!((s.dp * s.dq / (s.tau * s.tau) - 1.0).abs() <= 1e-9);
        assert!((s.mass - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn rapidity_is_linear_in_proper_time() {
    let (t, _) = run(-0.1, 0.3, 1e-2);
    for s in &t.samples {
        let want = -0.1 * (s.tau - 1.0) + 0.3;
        assert!((s.beta.atanh() - want).abs() <= 1e-9);
    }
}

#[test]
fn piecewise_rate_follows_each_piece() {
    let start = DynamicState::from_rapidity(1.0, 0.0, 1.0).unwrap();
    let rate = |tau: f64| if tau < 4.0 { 0.05 } else { -0.02 };
    let t = evolve_ode(start, |tau, _| InfluenceRates::net(rate(tau)), 9.0, 1e-3).unwrap();
    let last = t.last().unwrap();
    let want = 0.05 * 3.0 - 0.02 * 6.0;
    assert!((last.beta.atanh() - want).abs() <= 1e-4);
}

#[test]
fn error_shrinks_at_fourth_order() {
    let errs: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&h| {
            let (t, exact) = run(0.05, 0.0, h);
            max_rel_error(&t, &exact)
        })
        .collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio / 16.0 - 1.0).abs() <= 0.2, "ratio {ratio}");
    }
}

#[test]
fn rejects_bad_steps_and_spans() {
    let start = DynamicState::from_rapidity(1.0, 0.0, 1.0).unwrap();
    let rates = |_: f64, _: f64| InfluenceRates::net(0.1);
    assert!(matches!(evolve_ode(start, rates, -2.0, 1e-2), Err(Error::SingularTime(_))));
    assert!(matches!(evolve_ode(start, rates, 1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(evolve_ode(start, rates, 1.0, -1e-3), Err(Error::Domain(_))));
    assert!(matches!(evolve_ode(start, rates, 1.0, f64::NAN), Err(Error::Domain(_))));
}
