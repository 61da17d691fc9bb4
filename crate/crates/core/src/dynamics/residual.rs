//! Second-difference residuals of the equations of motion along sampled
//! trajectories.

use serde::Serialize;

use crate::dynamics::integrate::Trajectory;
use crate::dynamics::scenarios::ScenarioParams;
use crate::error::{invalid, Error, Result};
use crate::lie::Sign;
use crate::ncps::{PoissonStructure, ScalarField};

fn uniform_step(traj: &Trajectory) -> Result<f64> {
    if traj.len() < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: traj.len() });
    }
    let h = traj.times[1] - traj.times[0];
    let uniform = traj
        .times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h);
    if !(h > 0.0) || !uniform {
        return Err(invalid("times", "must be uniformly increasing"));
    }
    Ok(h)
}

fn second_difference(a: &[f64], b: &[f64], c: &[f64], h: f64) -> Vec<f64> {
    (0..b.len()).map(|k| (a[k] - 2.0 * b[k] + c[k]) / (h * h)).collect()
}

/// `max_k |m q̈^k + ∂_k V − F_ik p^i/m − m G^ik d/dt(∂_i V)|` over interior
/// samples, for `H = p²/2m + V(q)` with identity pairing.
///
/// The index order of the `G` term matches `{x^i, x^k} = G^ik`.
pub fn newton_residual(traj: &Trajectory, v: &ScalarField, ps: &PoissonStructure, m: f64) -> Result<f64> {
    let h = uniform_step(traj)?;
    let n = ps.n();
    let grad_v = traj
        .states
        .iter()
        .map(|z| v.gradient(z).map(|g| g[n..].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0_f64;
    for i in 1..traj.len() - 1 {
        let (prev, z, next) = (&traj.states[i - 1], &traj.states[i], &traj.states[i + 1]);
        let acc = second_difference(&prev.q, &z.q, &next.q, h);
        let f = ps.f().at(z);
        let g = ps.g().at(z);
        for k in 0..n {
            let lorentz: f64 = (0..n).map(|j| f[(j, k)] * z.p[j] / m).sum();
            let dual: f64 = (0..n)
                .map(|j| g[(j, k)] * (grad_v[i + 1][j] - grad_v[i - 1][j]) / (2.0 * h))
                .sum();
            let r = m * acc[k] + grad_v[i][k] - lorentz - m * dual;
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

/// Sign convention of the cross term in the spring's dual Newton law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualLaw {
    /// `(1/k) p̈ = e*E* − e*k q×B*`, what the bracket `{x^i, x^k} = G^ik` gives.
    BracketConsistent,
    /// `(1/k) p̈ = e*E* + e*k q×B*`.
    Printed,
}

/// `max |(1/k) p̈ − e*E* ± e*k q×B*|` over interior samples.
pub fn dual_newton_residual(traj: &Trajectory, params: &ScenarioParams, law: DualLaw) -> Result<f64> {
    let h = uniform_step(traj)?;
    let s = match law {
        DualLaw::BracketConsistent => 1.0,
        DualLaw::Printed => -1.0,
    };
    let (k, es, bs, ef) = (params.k, params.estar, params.bstar, params.estar_field);
    let mut worst = 0.0_f64;
    for i in 1..traj.len() - 1 {
        let (prev, z, next) = (&traj.states[i - 1], &traj.states[i], &traj.states[i + 1]);
        let yank = second_difference(&prev.p, &z.p, &next.p, h);
        let q_cross_b = [z.q[1] * bs, -z.q[0] * bs];
        for c in 0..2 {
            let r = yank[c] / k - es * ef[c] + s * es * k * q_cross_b[c];
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

/// `max |q̈ ∓ ω² q|` over interior samples of a 1D trajectory.
pub fn oscillator_residual(traj: &Trajectory, sign: Sign, omega: f64) -> Result<f64> {
    let h = uniform_step(traj)?;
    let mut worst = 0.0_f64;
    for i in 1..traj.len() - 1 {
        let (a, b, c) = (&traj.states[i - 1].q, &traj.states[i].q, &traj.states[i + 1].q);
        let acc = second_difference(a, b, c, h);
        worst = worst.max((acc[0] - sign.pm() * omega * omega * b[0]).abs());
    }
    Ok(worst)
}
