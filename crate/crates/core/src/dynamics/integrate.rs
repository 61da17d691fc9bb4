use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg::{cross2, Mat};
use crate::ncps::{couple, decouple, nc_bracket, Chart, PhasePoint, PoissonStructure, ScalarField};
use crate::orbit::DualPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Rk4,
    /// Two-stage Gauss–Legendre in Darboux coordinates.
    DarbouxExactified,
}

impl Method {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rk4" => Some(Self::Rk4),
            "darboux_exactified" | "darboux-exactified" | "gl2" => Some(Self::DarbouxExactified),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Rk4 => "rk4",
            Self::DarbouxExactified => "darboux_exactified",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
    /// Darboux-chart companions of coupled-chart `states`, when defined.
    pub darboux: Option<Vec<PhasePoint>>,
    pub energy: Vec<f64>,
    pub casimir: Option<Vec<f64>>,
    /// `L = q × p` of each state, planar runs only.
    pub angular_momentum: Option<Vec<f64>>,
    /// Dual-algebra states of orbit runs.
    pub dual: Option<Vec<DualPoint>>,
}

impl Trajectory {
    pub(crate) fn from_states(times: Vec<f64>, states: Vec<PhasePoint>, h: &ScalarField) -> Self {
        let energy = states.iter().map(|z| h.value(z)).collect();
        let angular_momentum = (states.first().map(|z| z.n()) == Some(2))
            .then(|| states.iter().map(|z| cross2(&z.q, &z.p)).collect());
        Self {
            times,
            states,
            darboux: None,
            energy,
            casimir: None,
            angular_momentum,
            dual: None,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &PhasePoint {
        self.states.last().expect("trajectories hold at least the initial state")
    }

    pub fn max_energy_drift(&self) -> f64 {
        max_drift(&self.energy)
    }

    pub fn max_casimir_drift(&self) -> Option<f64> {
        self.casimir.as_deref().map(max_drift)
    }

    /// Largest coordinate difference against another trajectory on the same grid.
    pub fn max_deviation(&self, other: &Trajectory) -> f64 {
        max_state_deviation(&self.states, &other.states)
    }
}

pub fn max_state_deviation(a: &[PhasePoint], b: &[PhasePoint]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| crate::linalg::max_abs_diff(&x.to_vec(), &y.to_vec()))
        .fold(0.0, f64::max)
}

fn max_drift(v: &[f64]) -> f64 {
    let v0 = v.first().copied().unwrap_or(0.0);
    v.iter().map(|x| (x - v0).abs()).fold(0.0, f64::max)
}

/// Uniform grid from 0 to `t_end` with step at most `dt`.
pub fn time_grid(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid("dt", "must be positive and finite"));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(invalid("t_end", "must be positive and finite"));
    }
    if dt > t_end {
        return Err(invalid("dt", "must not exceed t_end"));
    }
    let steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    Ok((steps, t_end / steps as f64))
}

/// `ż = −Π(z) ∇H(z)`, i.e. `ż^a = {H, z^a}`.
pub fn vector_field(ps: &PoissonStructure, h: &ScalarField, z: &PhasePoint) -> Result<Vec<f64>> {
    let grad = h.gradient(z)?;
    Ok(ps.poisson_matrix(z).mul_vec(&grad).into_iter().map(|v| -v).collect())
}

/// `df/dt = {H, f}` under `ps`.
pub fn evolve(ps: &PoissonStructure, h: &ScalarField, f: &ScalarField, z: &PhasePoint) -> Result<f64> {
    nc_bracket(ps, h, f, z)
}

pub(crate) fn rk4_step<F>(f: &F, z: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let shift = |k: &[f64], s: f64| -> Vec<f64> { z.iter().zip(k).map(|(a, b)| a + s * b).collect() };
    let k1 = f(z)?;
    let k2 = f(&shift(&k1, h / 2.0))?;
    let k3 = f(&shift(&k2, h / 2.0))?;
    let k4 = f(&shift(&k3, h))?;
    Ok((0..z.len())
        .map(|i| z[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Two-stage Gauss–Legendre step, stages solved by fixed-point iteration.
pub(crate) fn gl2_step<F>(f: &F, z: &[f64], h: f64, t: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let r = 3f64.sqrt() / 6.0;
    let a = [[0.25, 0.25 - r], [0.25 + r, 0.25]];
    let n = z.len();
    let mut k = [f(z)?, f(z)?];
    let mut prev = f64::INFINITY;
    for _ in 0..100 {
        let stage = |i: usize| -> Vec<f64> {
            (0..n)
                .map(|j| z[j] + h * (a[i][0] * k[0][j] + a[i][1] * k[1][j]))
                .collect()
        };
        let next = [f(&stage(0))?, f(&stage(1))?];
        let scale = next.iter().flatten().fold(1.0_f64, |m, v| m.max(v.abs()));
        let change = (0..2)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (next[i][j] - k[i][j]).abs())
            .fold(0.0, f64::max);
        k = next;
        // stop at round-off level, or once iterates stall just above it
        let stalled = change >= prev && change <= 1e-12 * scale;
        if change <= 1e-15 * scale || stalled {
            return Ok((0..n).map(|j| z[j] + 0.5 * h * (k[0][j] + k[1][j])).collect());
        }
        prev = change;
    }
    Err(Error::StepRejected { t })
}

/// Steps `rhs` over the grid, rejecting non-finite states.
pub(crate) fn march<F>(
    rhs: F,
    z0: Vec<f64>,
    t_end: f64,
    dt: f64,
    method: Method,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let (steps, h) = time_grid(t_end, dt)?;
    if z0.iter().any(|v| !v.is_finite()) {
        return Err(Error::StepRejected { t: 0.0 });
    }
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(z0);
    for i in 0..steps {
        let t = i as f64 * h;
        let z = states.last().expect("non-empty");
        let next = match method {
            Method::Rk4 => rk4_step(&rhs, z, h),
            Method::DarbouxExactified => gl2_step(&rhs, z, h, t),
        }
        .map_err(|e| match e {
            Error::InvalidParameter { .. } => Error::StepRejected { t },
            other => other,
        })?;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::StepRejected { t: t + h });
        }
        times.push((i + 1) as f64 * h);
        states.push(next);
    }
    Ok((times, states))
}

fn coupling_derived(ps: &PoissonStructure) -> bool {
    let (Some(f), Some(g)) = (ps.f().constant(), ps.g().constant()) else {
        return false;
    };
    let n = ps.n();
    let expected = &Mat::identity(n) - &(f * g).scale(0.25);
    expected.max_abs_diff(ps.pairing()) <= 1e-14 * expected.max_abs().max(1.0)
}

/// Integrates `H` under `ps` from `z0`.
///
/// `rk4` steps `ż = −Π∇H` in the chart of `z0`. `darboux_exactified` needs
/// constant fields: a coupled-chart state of a coupling-derived structure is
/// decoupled, advanced canonically with `H ∘ couple` by Gauss–Legendre and
/// re-coupled at each sample; any other constant structure is advanced in
/// place by the same scheme, which is equivalent under the linear change to
/// Darboux coordinates.
pub fn integrate(
    ps: &PoissonStructure,
    h: &ScalarField,
    z0: &PhasePoint,
    t_end: f64,
    dt: f64,
    method: Method,
) -> Result<Trajectory> {
    z0.check(ps.n())?;
    let chart = z0.chart;
    let in_chart = |v: &[f64]| vector_field(ps, h, &PhasePoint::from_vec(v, chart));

    if method == Method::DarbouxExactified && !ps.constant_fields() {
        return Err(Error::NonConstantFields);
    }
    let through_darboux = method == Method::DarbouxExactified
        && chart == Chart::Coupled
        && coupling_derived(ps)
        && ps.coupling_matrix()?.max_abs_diff(&Mat::identity(2 * ps.n())) > 0.0;

    if through_darboux {
        let zd0 = decouple(ps, z0)?;
        let t = ps.coupling_matrix()?;
        let tt = t.transpose();
        let canonical = PoissonStructure::canonical(ps.n());
        let rhs = |v: &[f64]| -> Result<Vec<f64>> {
            let zc = PhasePoint::from_vec(&t.mul_vec(v), Chart::Coupled);
            let grad = tt.mul_vec(&h.gradient(&zc)?);
            let pi = canonical.poisson_matrix(&zc);
            Ok(pi.mul_vec(&grad).into_iter().map(|x| -x).collect())
        };
        let (times, raw) = march(rhs, zd0.to_vec(), t_end, dt, method)?;
        let darboux: Vec<PhasePoint> = raw.iter().map(|v| PhasePoint::from_vec(v, Chart::Darboux)).collect();
        let states = darboux
            .iter()
            .map(|z| couple(ps, z))
            .collect::<Result<Vec<_>>>()?;
        let mut traj = Trajectory::from_states(times, states, h);
        traj.darboux = Some(darboux);
        return Ok(traj);
    }

    let (times, raw) = march(in_chart, z0.to_vec(), t_end, dt, method)?;
    let states: Vec<PhasePoint> = raw.iter().map(|v| PhasePoint::from_vec(v, chart)).collect();
    let mut traj = Trajectory::from_states(times, states, h);
    if chart == Chart::Coupled && ps.constant_fields() && coupling_derived(ps) {
        if let Ok(d) = traj.states.iter().map(|z| decouple(ps, z)).collect::<Result<Vec<_>>>() {
            traj.darboux = Some(d);
        }
    }
    Ok(traj)
}
