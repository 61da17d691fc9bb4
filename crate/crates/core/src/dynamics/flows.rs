//! Closed-form 1D flows, their group realization, and Lie–Poisson flows on
//! the dual of the extended algebras.

use crate::dynamics::integrate::{march, Method, Trajectory};
use crate::error::{invalid, Result};
use crate::lie::{anh_algebra, AlgebraParams, Basis, Sign, StructureConstants};
use crate::linalg::cross2;
use crate::ncps::PhasePoint;
use crate::orbit::{casimir_u_with, effective_mass, kirillov_from_coeffs, CasimirForm, DualPoint};

fn check_positive(m: f64, omega: f64) -> Result<()> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(invalid("m", "must be positive"));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(invalid("omega", "must be positive"));
    }
    Ok(())
}

/// Solution of `ṗ = ±mω²q`, `q̇ = p/m`.
pub fn closed_form_flow_1d(sign: Sign, m: f64, omega: f64, p0: f64, q0: f64, t: f64) -> Result<(f64, f64)> {
    check_positive(m, omega)?;
    let wt = omega * t;
    let mw = m * omega;
    Ok(match sign {
        Sign::Minus => (
            p0 * wt.cos() - mw * q0 * wt.sin(),
            p0 / mw * wt.sin() + q0 * wt.cos(),
        ),
        Sign::Plus => (
            p0 * wt.cosh() + mw * q0 * wt.sinh(),
            p0 / mw * wt.sinh() + q0 * wt.cosh(),
        ),
    })
}

/// `L_(v,x,t)(p, q)`: a boost by `v` and a translation by `x`, followed by
/// the time-`t` flow.
pub fn group_action_1d(
    sign: Sign,
    m: f64,
    omega: f64,
    v: f64,
    x: f64,
    t: f64,
    p0: f64,
    q0: f64,
) -> Result<(f64, f64)> {
    closed_form_flow_1d(sign, m, omega, p0 - m * v, q0 + x, t)
}

/// The literal closed-form realization for both branches.
/// For ANH₋ its momentum lacks the `−mωx sin(ωt)` term and it differs from
/// [`group_action_1d`] whenever `x sin(ωt) ≠ 0`.
pub fn printed_group_action_1d(
    sign: Sign,
    m: f64,
    omega: f64,
    v: f64,
    x: f64,
    t: f64,
    p0: f64,
    q0: f64,
) -> Result<(f64, f64)> {
    check_positive(m, omega)?;
    let wt = omega * t;
    let mw = m * omega;
    Ok(match sign {
        Sign::Minus => (
            p0 * wt.cos() - mw * q0 * wt.sin() - m * v * wt.cos(),
            p0 / mw * wt.sin() + (q0 + x) * wt.cos() - v / omega * wt.sin(),
        ),
        Sign::Plus => (
            p0 * wt.cosh() + mw * q0 * wt.sinh() - m * (v * wt.cosh() - omega * x * wt.sinh()),
            p0 / mw * wt.sinh() + (q0 + x) * wt.cosh() - v / omega * wt.sinh(),
        ),
    })
}

/// [`closed_form_flow_1d`] sampled on the uniform grid of `(t_end, dt)`.
pub fn closed_form_trajectory(
    sign: Sign,
    m: f64,
    omega: f64,
    p0: f64,
    q0: f64,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    let (steps, h) = crate::dynamics::integrate::time_grid(t_end, dt)?;
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * h).collect();
    let states = times
        .iter()
        .map(|&t| closed_form_flow_1d(sign, m, omega, p0, q0, t).map(|(p, q)| PhasePoint::darboux(vec![p], vec![q])))
        .collect::<Result<Vec<_>>>()?;
    let ham = crate::dynamics::scenarios::hamiltonian_anh1d(sign, m, omega)?;
    Ok(Trajectory::from_states(times, states, &ham))
}

/// `ξ̇ = B(ξ) ∇H(ξ)`.
pub fn lie_poisson_field(sc: &StructureConstants, xi: &[f64], grad_h: &[f64]) -> Result<Vec<f64>> {
    Ok(kirillov_from_coeffs(sc, xi)?.mul_vec(grad_h))
}

/// Orbit coordinates `(p, q)`: `q = k/μ_e` in 2D, `q = k/m` otherwise.
pub fn orbit_coordinates(params: &AlgebraParams, xi: &DualPoint) -> PhasePoint {
    let scale = if params.dim == 2 {
        let mu = effective_mass(params, xi.m, xi.h[0]);
        if mu != 0.0 {
            mu
        } else {
            xi.m
        }
    } else {
        xi.m
    };
    PhasePoint::darboux(xi.p.clone(), xi.k.iter().map(|k| k / scale).collect())
}

/// Lie–Poisson flow of `H = e` from `xi0`, with `U` evaluated by `form`.
pub fn orbit_trajectory(
    params: &AlgebraParams,
    xi0: &DualPoint,
    t_end: f64,
    dt: f64,
    method: Method,
    form: CasimirForm,
) -> Result<Trajectory> {
    params.validate()?;
    xi0.check(params.dim)?;
    let sc = anh_algebra(params)?;
    let basis = Basis::new(params.dim);
    let mut grad = vec![0.0; basis.len()];
    grad[basis.e()] = 1.0;
    let rhs = |v: &[f64]| lie_poisson_field(&sc, v, &grad);
    let (times, raw) = march(rhs, xi0.coeffs(), t_end, dt, method)?;
    let dual = raw
        .iter()
        .map(|c| DualPoint::from_coeffs(params.dim, c))
        .collect::<Result<Vec<_>>>()?;
    let states: Vec<PhasePoint> = dual.iter().map(|xi| orbit_coordinates(params, xi)).collect();
    let energy = dual.iter().map(|xi| xi.e).collect();
    let casimir = dual
        .iter()
        .map(|xi| casimir_u_with(params, xi, form))
        .collect::<Result<Vec<_>>>()
        .ok();
    let angular_momentum =
        (params.dim == 2).then(|| states.iter().map(|z| cross2(&z.q, &z.p)).collect());
    Ok(Trajectory {
        times,
        states,
        darboux: None,
        energy,
        casimir,
        angular_momentum,
        dual: Some(dual),
    })
}
