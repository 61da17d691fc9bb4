//! Planar scenarios: an electron in a magnetic field, a spring in a dual
//! magnetic field, and the pendulum coupled to both.
//!
//! The plane normal is `+ẑ`; `a × b` denotes `a_1 b_2 − a_2 b_1`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lie::Sign;
use crate::linalg::{cross2, dot, Mat};
use crate::ncps::{PhasePoint, PoissonStructure, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Electron,
    Spring,
    Pendulum,
}

impl ScenarioKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "electron" => Some(Self::Electron),
            "spring" => Some(Self::Spring),
            "pendulum" => Some(Self::Pendulum),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioParams {
    pub m: f64,
    pub e: f64,
    pub b: f64,
    pub e_field: [f64; 2],
    pub estar: f64,
    pub bstar: f64,
    pub estar_field: [f64; 2],
    pub k: f64,
    /// Common frequency of the synchronized pendulum.
    pub omega: Option<f64>,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            m: 1.0,
            e: 0.0,
            b: 0.0,
            e_field: [0.0; 2],
            estar: 0.0,
            bstar: 0.0,
            estar_field: [0.0; 2],
            k: 1.0,
            omega: None,
        }
    }
}

impl ScenarioParams {
    pub fn electron(m: f64, e: f64, b: f64, e_field: [f64; 2]) -> Self {
        Self { m, e, b, e_field, ..Self::default() }
    }

    pub fn spring(k: f64, estar: f64, bstar: f64, estar_field: [f64; 2]) -> Self {
        Self { k, estar, bstar, estar_field, ..Self::default() }
    }

    /// Pendulum fields chosen to satisfy the synchronization condition for
    /// the given `m`, `k`, `ω`: `eB = 2mω`, `e*B* = 2ω/k` (so `m_s = k/ω²`).
    pub fn synchronized_pendulum(m: f64, k: f64, omega: f64) -> Self {
        Self {
            m,
            k,
            e: 1.0,
            b: 2.0 * m * omega,
            estar: 1.0,
            bstar: 2.0 * omega / k,
            omega: Some(omega),
            ..Self::default()
        }
    }

    pub fn eb(&self) -> f64 {
        self.e * self.b
    }

    pub fn esbs(&self) -> f64 {
        self.estar * self.bstar
    }

    fn check_finite(&self) -> Result<()> {
        let all = [self.m, self.e, self.b, self.estar, self.bstar, self.k]
            .into_iter()
            .chain(self.e_field)
            .chain(self.estar_field)
            .chain(self.omega);
        if all.into_iter().any(|v| !v.is_finite()) {
            return Err(invalid("scenario", "all parameters must be finite"));
        }
        Ok(())
    }

    fn require_mass(&self) -> Result<()> {
        if self.m > 0.0 {
            Ok(())
        } else {
            Err(invalid("m", "must be positive"))
        }
    }

    fn require_hooke(&self) -> Result<()> {
        if self.k > 0.0 {
            Ok(())
        } else {
            Err(invalid("k", "must be positive"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedParams {
    /// `eB / 2m`, the cyclotron frequency in the convention used here.
    pub omega_c: Option<f64>,
    /// `1/m_s = k e*² B*² / 4`.
    pub m_s: Option<f64>,
    /// `k e* B* / 2`, the spring frequency.
    pub omega_s: Option<f64>,
    pub gamma: Option<f64>,
    pub mu: Option<f64>,
    pub m_tot: Option<f64>,
}

pub fn derived_params(kind: ScenarioKind, params: &ScenarioParams) -> Result<DerivedParams> {
    params.check_finite()?;
    let omega_c = (params.m > 0.0).then(|| params.eb() / (2.0 * params.m));
    let inv_ms = params.k * params.esbs() * params.esbs() / 4.0;
    let m_s = (inv_ms != 0.0).then(|| 1.0 / inv_ms);
    if m_s.is_none() && kind != ScenarioKind::Electron {
        return Err(invalid("m_s", "undefined: k e*² B*² = 0"));
    }
    let omega_s = Some(params.k * params.esbs() / 2.0);
    let (gamma, mu, m_tot) = match (params.m > 0.0, m_s) {
        (true, Some(ms)) => {
            let m = params.m;
            (Some(1.0 + m / ms), Some(m * ms / (m + ms)), Some(m + ms))
        }
        _ => (None, None, None),
    };
    Ok(DerivedParams { omega_c, m_s, omega_s, gamma, mu, m_tot })
}

/// Validates `eB/2 = mω` and `e*B*/2 = 1/(m_s ω)` to relative `1e-12`.
pub fn check_synchronization(params: &ScenarioParams) -> Result<f64> {
    let omega = params.omega.ok_or_else(|| invalid("omega", "required for the pendulum"))?;
    if omega <= 0.0 {
        return Err(invalid("omega", "must be positive"));
    }
    let d = derived_params(ScenarioKind::Pendulum, params)?;
    let ms = d.m_s.expect("pendulum requires m_s");
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
    let pairs = [
        ("eB/2", params.eb() / 2.0, "m ω", params.m * omega),
        ("e*B*/2", params.esbs() / 2.0, "1/(m_s ω)", 1.0 / (ms * omega)),
    ];
    for (lhs_name, lhs, rhs_name, rhs) in pairs {
        if !close(lhs, rhs) {
            return Err(Error::SynchronizationViolated { lhs_name, lhs, rhs_name, rhs });
        }
    }
    Ok(omega)
}

/// A scenario Hamiltonian in both charts.
#[derive(Debug, Clone)]
pub struct ChartHamiltonian {
    pub darboux: ScalarField,
    pub coupled: ScalarField,
}

fn check_plane(z: &PhasePoint) {
    debug_assert_eq!(z.n(), 2, "scenarios are planar");
}

/// Darboux: `p²/2m − e E·q`. Coupled: `π²/2m − e E·x + mω²x²/2 + ω x×π`.
pub fn hamiltonian_electron(params: &ScenarioParams) -> Result<ChartHamiltonian> {
    params.check_finite()?;
    params.require_mass()?;
    let (m, e, ef) = (params.m, params.e, params.e_field);
    let w = params.eb() / (2.0 * m);
    let darboux = ScalarField::with_gradient(
        move |z| {
            check_plane(z);
            dot(&z.p, &z.p) / (2.0 * m) - e * dot(&ef, &z.q)
        },
        move |z| vec![z.p[0] / m, z.p[1] / m, -e * ef[0], -e * ef[1]],
    );
    let coupled = ScalarField::with_gradient(
        move |z| {
            check_plane(z);
            let (pi, x) = (&z.p, &z.q);
            dot(pi, pi) / (2.0 * m) - e * dot(&ef, x) + m * w * w * dot(x, x) / 2.0 + w * cross2(x, pi)
        },
        move |z| {
            let (pi, x) = (&z.p, &z.q);
            vec![
                pi[0] / m - w * x[1],
                pi[1] / m + w * x[0],
                -e * ef[0] + m * w * w * x[0] + w * pi[1],
                -e * ef[1] + m * w * w * x[1] - w * pi[0],
            ]
        },
    );
    Ok(ChartHamiltonian { darboux, coupled })
}

/// Darboux: `k q²/2 − e* p·E*`. Coupled: `k x²/2 − e* π·E* + π²/2m_s + ω x×π`
/// with `ω = k e*B*/2`.
pub fn hamiltonian_spring(params: &ScenarioParams) -> Result<ChartHamiltonian> {
    params.check_finite()?;
    params.require_hooke()?;
    let (k, es, ef) = (params.k, params.estar, params.estar_field);
    let w = k * params.esbs() / 2.0;
    let inv_ms = k * params.esbs() * params.esbs() / 4.0;
    let darboux = ScalarField::with_gradient(
        move |z| {
            check_plane(z);
            k * dot(&z.q, &z.q) / 2.0 - es * dot(&z.p, &ef)
        },
        move |z| vec![-es * ef[0], -es * ef[1], k * z.q[0], k * z.q[1]],
    );
    let coupled = ScalarField::with_gradient(
        move |z| {
            check_plane(z);
            let (pi, x) = (&z.p, &z.q);
            k * dot(x, x) / 2.0 - es * dot(pi, &ef) + inv_ms * dot(pi, pi) / 2.0 + w * cross2(x, pi)
        },
        move |z| {
            let (pi, x) = (&z.p, &z.q);
            vec![
                -es * ef[0] + inv_ms * pi[0] - w * x[1],
                -es * ef[1] + inv_ms * pi[1] + w * x[0],
                k * x[0] + w * pi[1],
                k * x[1] - w * pi[0],
            ]
        },
    );
    Ok(ChartHamiltonian { darboux, coupled })
}

/// Darboux: `p²/2m + kq²/2 − e E·q − e* p·E*`.
/// Coupled: `π²/2μ + Mω²x²/2 − eφ − e*φ*` with
/// `φ = E·x + E×π/(m_s ω)` and `φ* = π·E* + mω x×E*`.
pub fn hamiltonian_pendulum(params: &ScenarioParams) -> Result<ChartHamiltonian> {
    params.check_finite()?;
    params.require_mass()?;
    params.require_hooke()?;
    let w = check_synchronization(params)?;
    let d = derived_params(ScenarioKind::Pendulum, params)?;
    let (m, k, e, es) = (params.m, params.k, params.e, params.estar);
    let (ef, sf) = (params.e_field, params.estar_field);
    let ms = d.m_s.expect("checked");
    let mu = d.mu.expect("checked");
    let mt = d.m_tot.expect("checked");
    let darboux = ScalarField::with_gradient(
        move |z| {
            check_plane(z);
            dot(&z.p, &z.p) / (2.0 * m) + k * dot(&z.q, &z.q) / 2.0
                - e * dot(&ef, &z.q)
                - es * dot(&z.p, &sf)
        },
        move |z| {
            vec![
                z.p[0] / m - es * sf[0],
                z.p[1] / m - es * sf[1],
                k * z.q[0] - e * ef[0],
                k * z.q[1] - e * ef[1],
            ]
        },
    );
    let coupled = ScalarField::with_gradient(
        move |z| {
            check_plane(z);
            let (pi, x) = (&z.p, &z.q);
            let phi = dot(&ef, x) + cross2(&ef, pi) / (ms * w);
            let phis = dot(pi, &sf) + m * w * cross2(x, &sf);
            dot(pi, pi) / (2.0 * mu) + mt * w * w * dot(x, x) / 2.0 - e * phi - es * phis
        },
        move |z| {
            let (pi, x) = (&z.p, &z.q);
            vec![
                pi[0] / mu + e * ef[1] / (ms * w) - es * sf[0],
                pi[1] / mu - e * ef[0] / (ms * w) - es * sf[1],
                mt * w * w * x[0] - e * ef[0] - es * m * w * sf[1],
                mt * w * w * x[1] - e * ef[1] + es * m * w * sf[0],
            ]
        },
    );
    Ok(ChartHamiltonian { darboux, coupled })
}

pub fn hamiltonian(kind: ScenarioKind, params: &ScenarioParams) -> Result<ChartHamiltonian> {
    match kind {
        ScenarioKind::Electron => hamiltonian_electron(params),
        ScenarioKind::Spring => hamiltonian_spring(params),
        ScenarioKind::Pendulum => hamiltonian_pendulum(params),
    }
}

/// The coupled-chart structure: `F = −eBε` and/or `G = −e*B*ε`.
pub fn coupling_structure(kind: ScenarioKind, params: &ScenarioParams) -> Result<PoissonStructure> {
    let eps = Mat::epsilon2();
    let zero = Mat::zeros(2, 2);
    match kind {
        ScenarioKind::Electron => PoissonStructure::from_coupling(eps.scale(-params.eb()), zero),
        ScenarioKind::Spring => PoissonStructure::from_coupling(zero, eps.scale(-params.esbs())),
        ScenarioKind::Pendulum => PoissonStructure::mixed_2d(params.eb(), params.esbs()),
    }
}

/// `H = p²/2m ∓ mω²q²/2`, whose canonical flow is `ṗ = ±mω²q`, `q̇ = p/m`.
pub fn hamiltonian_anh1d(sign: Sign, m: f64, omega: f64) -> Result<ScalarField> {
    if !(m > 0.0 && omega > 0.0) {
        return Err(invalid("m, omega", "must be positive"));
    }
    let s = sign.pm();
    Ok(ScalarField::with_gradient(
        move |z| z.p[0] * z.p[0] / (2.0 * m) - s * m * omega * omega * z.q[0] * z.q[0] / 2.0,
        move |z| vec![z.p[0] / m, -s * m * omega * omega * z.q[0]],
    ))
}
