//! Kirillov matrices on the dual of the extended ANH± algebras, Casimir
//! invariants, and the symplectic structure of the maximal coadjoint orbits.
//!
//! The Poisson matrix of an orbit is always obtained by numeric inversion of
//! its restricted Kirillov form Ω. Closed forms are only ever cross-checks,
//! recorded in [`OrbitStructure::cross_checks`].
//!
//! Orbit coordinates are read off the `(K_1..K_n, P_1..P_n)` slots: the
//! K-slots are the momentum-like directions and the P-slots the
//! position-like ones, so that for `Ω⁻¹ = [[F, pairing], [-pairingᵀ, G]]`
//!
//! * `F` (K-K block) is the magnetic block,
//! * `pairing` (K-P block) is `{p_i, q^j}`,
//! * `G` (P-P block) is the dual magnetic block.
//!
//! The 2D Casimir uses `q = k / μ_e`, the 3D one `q = k / m`.

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lie::{AlgebraParams, Basis, PpConvention, Sign, StructureConstants};
use crate::linalg::{dot, fd_gradient, Mat};

/// A point `m M* + h J* + k_i K*^i + p_i P*^i + e E*` of the dual algebra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualPoint {
    pub m: f64,
    /// Empty in 1D, one entry (`h` on `J3*`) in 2D, three in 3D.
    pub h: Vec<f64>,
    pub k: Vec<f64>,
    pub p: Vec<f64>,
    pub e: f64,
}

impl DualPoint {
    pub fn new(m: f64, h: Vec<f64>, k: Vec<f64>, p: Vec<f64>, e: f64) -> Self {
        Self { m, h, k, p, e }
    }

    pub fn zero(dim: usize) -> Self {
        let b = Basis::new(dim);
        Self::new(0.0, vec![0.0; b.n_rot()], vec![0.0; dim], vec![0.0; dim], 0.0)
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        let b = Basis::new(dim);
        for (got, expected) in [
            (self.k.len(), dim),
            (self.p.len(), dim),
            (self.h.len(), b.n_rot()),
        ] {
            if got != expected {
                return Err(Error::DimensionMismatch { expected, got });
            }
        }
        if !self.m.is_finite() {
            return Err(invalid("m", "must be finite"));
        }
        Ok(())
    }

    /// Coefficients in the fixed basis order of [`Basis`].
    pub fn coeffs(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 + self.h.len() + 2 * self.k.len());
        v.push(self.m);
        v.extend_from_slice(&self.h);
        v.extend_from_slice(&self.k);
        v.extend_from_slice(&self.p);
        v.push(self.e);
        v
    }

    pub fn from_coeffs(dim: usize, c: &[f64]) -> Result<Self> {
        let b = Basis::new(dim);
        if c.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: b.len(),
                got: c.len(),
            });
        }
        let nr = b.n_rot();
        Ok(Self {
            m: c[0],
            h: c[1..1 + nr].to_vec(),
            k: c[b.k(0)..b.k(0) + dim].to_vec(),
            p: c[b.p(0)..b.p(0) + dim].to_vec(),
            e: c[b.e()],
        })
    }

    /// Uniform draw with `m ∈ [0.5, 2]` and every other coefficient in `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let b = Basis::new(dim);
        let mut u = || rng.gen_range(-1.0..1.0);
        let h = (0..b.n_rot()).map(|_| u()).collect();
        let k = (0..dim).map(|_| u()).collect();
        let p = (0..dim).map(|_| u()).collect();
        let e = u();
        let m = rng.gen_range(0.5..2.0);
        Self { m, h, k, p, e }
    }
}

/// `B_{αβ}(ξ) = ⟨ξ, [e_α, e_β]⟩` over the full basis.
pub fn kirillov_matrix(sc: &StructureConstants, xi: &DualPoint) -> Result<Mat> {
    kirillov_from_coeffs(sc, &xi.coeffs())
}

pub fn kirillov_from_coeffs(sc: &StructureConstants, xi: &[f64]) -> Result<Mat> {
    let n = sc.dim();
    if xi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: xi.len(),
        });
    }
    Ok(Mat::from_fn(n, n, |a, b| {
        (0..n).map(|g| sc.get(a, b, g) * xi[g]).sum()
    }))
}

/// Effective mass `μ_e = m ± h / (ω r²)` of the 2D orbits.
pub fn effective_mass(params: &AlgebraParams, m: f64, h: f64) -> f64 {
    m + params.sign.pm() * h / (params.omega * params.r * params.r)
}

/// `A_ij = h_k ε^k_ij / (m c²)`; the 2D case is `h ε / (m c²)`, 1D is `0`.
pub fn a_matrix(params: &AlgebraParams, m: f64, h: &[f64]) -> Mat {
    let s = 1.0 / (m * params.c * params.c);
    match params.dim {
        1 => Mat::zeros(1, 1),
        2 => Mat::epsilon2().scale(h[0] * s),
        _ => Mat::cross_matrix(h).scale(s),
    }
}

/// Candidate metrics for the Casimir of the 2D/3D orbits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// `I ± ω² A`.
    PhiLinear,
    /// `I ± ω² A²`, the metric of the block inverse of Ω.
    PsiQuadratic,
    /// `I ∓ ω² A²`.
    PsiConjugate,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::PhiLinear, Metric::PsiQuadratic, Metric::PsiConjugate];

    pub fn label(self) -> &'static str {
        match self {
            Metric::PhiLinear => "I ± ω²A",
            Metric::PsiQuadratic => "I ± ω²A²",
            Metric::PsiConjugate => "I ∓ ω²A²",
        }
    }

    pub fn matrix(self, params: &AlgebraParams, a: &Mat) -> Mat {
        let n = a.rows();
        let s = params.sign.pm() * params.omega * params.omega;
        let id = Mat::identity(n);
        match self {
            Metric::PhiLinear => &id + &a.scale(s),
            Metric::PsiQuadratic => &id + &(a * a).scale(s),
            Metric::PsiConjugate => &id - &(a * a).scale(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "form", content = "metric")]
pub enum CasimirForm {
    /// The published closed form for the dimension at hand.
    Printed,
    /// `e − pᵀM⁻¹p/2m ± mω² qᵀM⁻¹q/2 ∓ ω² pᵀM⁻¹A q`, `q = k/m`.
    Metric(Metric),
}

impl CasimirForm {
    pub fn label(&self) -> String {
        match self {
            CasimirForm::Printed => "printed".into(),
            CasimirForm::Metric(m) => format!("metric {}", m.label()),
        }
    }
}

/// The energy-like invariant `U`, evaluated with the printed formula.
pub fn casimir_u(params: &AlgebraParams, xi: &DualPoint) -> Result<f64> {
    casimir_u_with(params, xi, CasimirForm::Printed)
}

pub fn casimir_u_with(params: &AlgebraParams, xi: &DualPoint, form: CasimirForm) -> Result<f64> {
    params.validate()?;
    xi.check(params.dim)?;
    if xi.m == 0.0 {
        return Err(Error::CasimirUndefined("m = 0".into()));
    }
    let s = params.sign.pm();
    let w2 = params.omega * params.omega;
    let m = xi.m;
    match (params.dim, form) {
        (1, _) => {
            let q = xi.k[0] / m;
            Ok(xi.e - xi.p[0] * xi.p[0] / (2.0 * m) + s * m * w2 * q * q / 2.0)
        }
        (2, CasimirForm::Printed) => {
            let mu = effective_mass(params, m, xi.h[0]);
            if mu == 0.0 || !mu.is_finite() {
                return Err(Error::CasimirUndefined(format!("μ_e = {mu}")));
            }
            let q: Vec<f64> = xi.k.iter().map(|k| k / mu).collect();
            Ok(xi.e - dot(&xi.p, &xi.p) / (2.0 * mu) + s * mu * w2 * dot(&q, &q) / 2.0)
        }
        (_, CasimirForm::Printed) => {
            let a = a_matrix(params, m, &xi.h);
            let phi_inv = invert_metric(&Metric::PhiLinear.matrix(params, &a))?;
            let q: Vec<f64> = xi.k.iter().map(|k| k / m).collect();
            let pp = dot(&xi.p, &phi_inv.mul_vec(&xi.p));
            let qq = dot(&q, &phi_inv.mul_vec(&q));
            let pq = dot(&xi.p, &(&phi_inv * &a).mul_vec(&q));
            Ok(xi.e - pp / (2.0 * m) - m * w2 * qq / 2.0 + w2 * pq)
        }
        (_, CasimirForm::Metric(metric)) => {
            let a = a_matrix(params, m, &xi.h);
            let inv = invert_metric(&metric.matrix(params, &a))?;
            let q: Vec<f64> = xi.k.iter().map(|k| k / m).collect();
            let pp = dot(&xi.p, &inv.mul_vec(&xi.p));
            let qq = dot(&q, &inv.mul_vec(&q));
            let pq = dot(&xi.p, &(&inv * &a).mul_vec(&q));
            Ok(xi.e - pp / (2.0 * m) + s * m * w2 * qq / 2.0 - s * w2 * pq)
        }
    }
}

fn invert_metric(g: &Mat) -> Result<Mat> {
    g.inverse()
        .map_err(|_| Error::CasimirUndefined("singular metric".into()))
}

/// `‖B(ξ) ∇U(ξ)‖∞` with a finite-difference gradient of the supplied `U`.
pub fn casimir_kernel_residual(
    sc: &StructureConstants,
    xi: &DualPoint,
    u: impl Fn(&DualPoint) -> Result<f64>,
) -> Result<f64> {
    let dim = xi.dim();
    let b = kirillov_matrix(sc, xi)?;
    let grad = fd_gradient(&xi.coeffs(), |c| u(&DualPoint::from_coeffs(dim, c)?))?;
    Ok(b.mul_vec(&grad).iter().fold(0.0_f64, |m, x| m.max(x.abs())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateOutcome {
    pub form: CasimirForm,
    pub label: String,
    pub max_residual: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CasimirResolution {
    pub dim: usize,
    pub sign: Sign,
    pub convention: PpConvention,
    pub samples: usize,
    pub tolerance: f64,
    pub candidates: Vec<CandidateOutcome>,
    pub selected: Option<CasimirForm>,
}

pub const CASIMIR_TOLERANCE: f64 = 1e-6;

/// Evaluates every Casimir candidate on the sample points and adopts the
/// first one whose kernel residual stays below [`CASIMIR_TOLERANCE`]
/// everywhere. Points where a candidate is undefined count as failures.
pub fn resolve_casimir(params: &AlgebraParams, samples: &[DualPoint]) -> Result<CasimirResolution> {
    let sc = crate::lie::anh_algebra(params)?;
    let mut forms = vec![CasimirForm::Printed];
    if params.dim >= 2 {
        forms.extend(Metric::ALL.map(CasimirForm::Metric));
    }
    let candidates: Vec<CandidateOutcome> = forms
        .into_iter()
        .map(|form| {
            let worst = samples
                .iter()
                .map(|xi| {
                    casimir_kernel_residual(&sc, xi, |x| casimir_u_with(params, x, form))
                        .unwrap_or(f64::INFINITY)
                })
                .fold(0.0_f64, f64::max);
            CandidateOutcome {
                form,
                label: form.label(),
                max_residual: worst,
                passes: worst < CASIMIR_TOLERANCE,
            }
        })
        .collect();
    let selected = candidates.iter().find(|c| c.passes).map(|c| c.form);
    Ok(CasimirResolution {
        dim: params.dim,
        sign: params.sign,
        convention: params.convention,
        samples: samples.len(),
        tolerance: CASIMIR_TOLERANCE,
        candidates,
        selected,
    })
}

/// Random dual points at which the printed Casimir is defined with some margin
/// (`|μ_e| ≥ 0.1` in 2D).
pub fn sample_dual_points<R: Rng + ?Sized>(
    params: &AlgebraParams,
    count: usize,
    rng: &mut R,
) -> Vec<DualPoint> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let xi = DualPoint::random(params.dim, rng);
        if params.dim == 2 && effective_mass(params, xi.m, xi.h[0]).abs() < 0.1 {
            continue;
        }
        out.push(xi);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossCheckStatus {
    Match,
    Mismatch,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormCheck {
    pub name: String,
    pub status: CrossCheckStatus,
    pub max_abs_diff: Option<f64>,
    pub note: String,
}

impl ClosedFormCheck {
    fn compare(name: &str, expected: &Mat, numeric: &Mat, note: impl Into<String>) -> Self {
        let diff = expected.max_abs_diff(numeric);
        let scale = numeric.max_abs().max(1.0);
        Self {
            name: name.into(),
            status: if diff <= 1e-12 * scale {
                CrossCheckStatus::Match
            } else {
                CrossCheckStatus::Mismatch
            },
            max_abs_diff: Some(diff),
            note: note.into(),
        }
    }

    fn scalar(name: &str, expected: f64, got: f64, note: impl Into<String>) -> Self {
        let diff = (expected - got).abs();
        Self {
            name: name.into(),
            status: if diff <= 1e-12 * expected.abs().max(1.0) {
                CrossCheckStatus::Match
            } else {
                CrossCheckStatus::Mismatch
            },
            max_abs_diff: Some(diff),
            note: note.into(),
        }
    }

    fn skipped(name: &str, note: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: CrossCheckStatus::Skipped,
            max_abs_diff: None,
            note: note.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitParams {
    pub algebra: AlgebraParams,
    pub xi: DualPoint,
}

impl OrbitParams {
    pub fn new(algebra: AlgebraParams, xi: DualPoint) -> Self {
        Self { algebra, xi }
    }

    /// `ω₀ = m c² / h` in 2D; `None` when `h = 0` or in other dimensions.
    pub fn omega0(&self) -> Option<f64> {
        (self.algebra.dim == 2 && self.xi.h[0] != 0.0)
            .then(|| self.xi.m * self.algebra.c * self.algebra.c / self.xi.h[0])
    }

    fn validate(&self, dim: usize) -> Result<()> {
        self.algebra.validate()?;
        if self.algebra.dim != dim {
            return Err(invalid("dim", format!("expected {dim}, got {}", self.algebra.dim)));
        }
        self.xi.check(dim)?;
        if self.xi.m == 0.0 {
            return Err(invalid("m", "must be nonzero"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitStructure {
    pub dim: usize,
    pub sign: Sign,
    pub omega_matrix: Mat,
    pub det: f64,
    pub degenerate: bool,
    pub poisson_matrix: Option<Mat>,
    /// K-K block of Ω⁻¹.
    pub f: Option<Mat>,
    /// K-P block of Ω⁻¹.
    pub pairing: Option<Mat>,
    /// P-P block of Ω⁻¹.
    pub g: Option<Mat>,
    pub mu_e: Option<f64>,
    pub omega0: Option<f64>,
    pub a_matrix: Option<Mat>,
    pub cross_checks: Vec<ClosedFormCheck>,
}

impl OrbitStructure {
    fn from_omega(dim: usize, sign: Sign, omega: Mat) -> Self {
        let det = omega.det();
        let scale = omega.max_abs().powi(2 * dim as i32);
        let degenerate = !(det.abs() >= 1e-12 * scale && scale > 0.0);
        let poisson = if degenerate { None } else { omega.inverse().ok() };
        let degenerate = degenerate || poisson.is_none();
        let blk = |r0, c0| poisson.as_ref().map(|p| p.block(r0, c0, dim, dim));
        Self {
            dim,
            sign,
            f: blk(0, 0),
            pairing: blk(0, dim),
            g: blk(dim, dim),
            poisson_matrix: poisson,
            omega_matrix: omega,
            det,
            degenerate,
            mu_e: None,
            omega0: None,
            a_matrix: None,
            cross_checks: Vec::new(),
        }
    }

    pub fn check(&self, name: &str) -> Option<&ClosedFormCheck> {
        self.cross_checks.iter().find(|c| c.name == name)
    }
}

/// Dispatches on `params.algebra.dim`.
pub fn orbit_structure(params: &OrbitParams) -> Result<OrbitStructure> {
    match params.algebra.dim {
        1 => orbit_structure_1d(params),
        2 => orbit_structure_2d(params),
        _ => orbit_structure_3d(params),
    }
}

/// The 2D orbit `O_(m, U)` of the 1D algebras: `Ω = [[0, m], [-m, 0]]`.
pub fn orbit_structure_1d(params: &OrbitParams) -> Result<OrbitStructure> {
    params.validate(1)?;
    let m = params.xi.m;
    let omega = Mat::from_rows(&[vec![0.0, m], vec![-m, 0.0]]);
    Ok(OrbitStructure::from_omega(1, params.algebra.sign, omega))
}

/// Restricted Kirillov form Ω = [[(h/c²)ε, mI], [−mI, λ h ε]] in the basis
/// `(K1, K2, P1, P2)`, with λ the `[P_i, P_j]` coefficient of the algebra.
pub fn orbit_structure_2d(params: &OrbitParams) -> Result<OrbitStructure> {
    params.validate(2)?;
    let alg = &params.algebra;
    let (m, h) = (params.xi.m, params.xi.h[0]);
    let eps = Mat::epsilon2();
    let id = Mat::identity(2);
    let omega = Mat::from_blocks(
        &eps.scale(h / (alg.c * alg.c)),
        &id.scale(m),
        &id.scale(-m),
        &eps.scale(h * alg.pp_coefficient()),
    );
    let mut orbit = OrbitStructure::from_omega(2, alg.sign, omega);
    let mu_e = effective_mass(alg, m, h);
    orbit.mu_e = Some(mu_e);
    orbit.omega0 = params.omega0();
    orbit.cross_checks = closed_form_checks_2d(params, &orbit);
    Ok(orbit)
}

fn closed_form_checks_2d(params: &OrbitParams, orbit: &OrbitStructure) -> Vec<ClosedFormCheck> {
    let alg = &params.algebra;
    let (m, h) = (params.xi.m, params.xi.h[0]);
    let w = alg.omega;
    let s = alg.sign.pm();
    let coh = (alg.c - w * alg.r).abs() <= 1e-12 * alg.c;
    let names = [
        "inverse_closed_form_mu_plus",
        "inverse_closed_form_mu_minus",
        "g_closed_form",
        "f_closed_form",
        "field_identities",
    ];
    if !coh || h == 0.0 || alg.convention != PpConvention::Printed {
        let why = if alg.convention != PpConvention::Printed {
            "closed forms refer to the printed bracket table"
        } else if h == 0.0 {
            "h = 0: ω₀ undefined"
        } else {
            "closed forms assume c = ω r"
        };
        return names.iter().map(|n| ClosedFormCheck::skipped(n, why)).collect();
    }
    let Some(inv) = orbit.poisson_matrix.as_ref() else {
        return names
            .iter()
            .map(|n| ClosedFormCheck::skipped(n, format!("degenerate orbit, det Ω = {:e}", orbit.det)))
            .collect();
    };
    let w0 = m * alg.c * alg.c / h;
    let eps = Mat::epsilon2();
    let id = Mat::identity(2);
    let printed_inverse = |mu: f64| {
        Mat::from_blocks(
            &eps.scale(s * w / mu),
            &id.scale(-1.0 / mu),
            &id.scale(1.0 / mu),
            &eps.scale(1.0 / (mu * w0)),
        )
    };
    let mut out = Vec::new();
    for (name, mu) in [
        (names[0], m + h / (w * alg.r * alg.r)),
        (names[1], m - h / (w * alg.r * alg.r)),
    ] {
        if mu == 0.0 {
            out.push(ClosedFormCheck::skipped(name, "μ_e = 0"));
        } else {
            out.push(ClosedFormCheck::compare(
                name,
                &printed_inverse(mu),
                inv,
                format!("printed Ω⁻¹ with μ_e = {mu}"),
            ));
        }
    }
    let mu_e = orbit.mu_e.expect("2D orbit records μ_e");
    let g_num = orbit.g.as_ref().expect("non-degenerate");
    let f_num = orbit.f.as_ref().expect("non-degenerate");
    out.push(ClosedFormCheck::compare(
        names[2],
        &eps.scale(-1.0 / (m * w0)),
        g_num,
        "G = −ε/(m ω₀) against the numeric P-P block",
    ));
    out.push(ClosedFormCheck::compare(
        names[3],
        &eps.scale(-(m - mu_e) * w),
        f_num,
        "F = −(m − μ_e) ω ε against the numeric K-K block",
    ));
    let e_b = (m - mu_e) * w;
    out.push(ClosedFormCheck::scalar(
        names[4],
        mu_e,
        m - e_b / w,
        "eB = (m − μ_e) ω and μ_e = m − eB/ω",
    ));
    out
}

/// Restricted Kirillov form Ω = m [[A, I], [−I, β A]] in the basis
/// `(K_i, P_i)`, β = ±c²/r² for the printed table and ∓ω² for the closed
/// one.
pub fn orbit_structure_3d(params: &OrbitParams) -> Result<OrbitStructure> {
    params.validate(3)?;
    let alg = &params.algebra;
    let m = params.xi.m;
    let a = a_matrix(alg, m, &params.xi.h);
    let beta = pp_ratio(alg);
    let id = Mat::identity(3);
    let omega = Mat::from_blocks(&a, &id, &id.scale(-1.0), &a.scale(beta)).scale(m);
    let mut orbit = OrbitStructure::from_omega(3, alg.sign, omega);

    let mut checks = Vec::new();
    if let Some(inv) = orbit.poisson_matrix.as_ref() {
        let psi = &id + &(&a * &a).scale(beta);
        match psi.inverse() {
            Ok(psi_inv) => {
                let a_psi = &a * &psi_inv;
                let block = Mat::from_blocks(
                    &a_psi.scale(beta),
                    &psi_inv.scale(-1.0),
                    &psi_inv,
                    &a_psi,
                )
                .scale(1.0 / m);
                checks.push(ClosedFormCheck::compare(
                    "block_inverse_psi",
                    &block,
                    inv,
                    "(1/m)[[βAΨ⁻¹, −Ψ⁻¹], [Ψ⁻¹, AΨ⁻¹]], Ψ = I + βA²",
                ));
            }
            Err(_) => checks.push(ClosedFormCheck::skipped("block_inverse_psi", "Ψ singular")),
        }
        let s = alg.sign.pm() * alg.omega * alg.omega;
        let phi = &id + &a.scale(s);
        match phi.inverse() {
            Ok(phi_inv) => {
                let a_phi = &a * &phi_inv;
                let printed =
                    Mat::from_blocks(&a_phi.scale(s), &phi_inv, &phi_inv.scale(-1.0), &a_phi)
                        .scale(1.0 / m);
                checks.push(ClosedFormCheck::compare(
                    "printed_inverse_phi",
                    &printed,
                    inv,
                    "(1/m)[[±ω²AΦ⁻¹, Φ⁻¹], [−Φ⁻¹, AΦ⁻¹]], Φ = I ± ω²A",
                ));
            }
            Err(_) => checks.push(ClosedFormCheck::skipped("printed_inverse_phi", "Φ singular")),
        }
    } else {
        checks.push(ClosedFormCheck::skipped(
            "block_inverse_psi",
            format!("degenerate orbit, det Ω = {:e}", orbit.det),
        ));
    }
    orbit.a_matrix = Some(a);
    orbit.cross_checks = checks;
    Ok(orbit)
}

/// β in Ω's P-P block `β m A`: the `[P,P]` coefficient times `c²`, so Ω is
/// the restricted Kirillov form for any `(ω, c, r)`. With `c = ω r` this is
/// ±ω² for the printed table and ∓ω² for the closed one.
fn pp_ratio(alg: &AlgebraParams) -> f64 {
    alg.pp_coefficient() * alg.c * alg.c
}

/// The orbit's symplectic form `σ = ½ Ω_ab dz^a ∧ dz^b`, with `z = (p, q)`
/// the K- and P-slot coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymplecticForm {
    pub matrix: Mat,
    /// Coefficients of `dp_i ∧ dq^j`.
    pub dp_dq: Mat,
    /// Coefficients of `dp_i ∧ dp_j` (counted once per ordered pair, halved).
    pub dp_dp: Mat,
    /// Coefficients of `dq^i ∧ dq^j` (counted once per ordered pair, halved).
    pub dq_dq: Mat,
}

pub fn symplectic_form(orbit: &OrbitStructure) -> Result<SymplecticForm> {
    if orbit.degenerate {
        return Err(Error::DegenerateOrbit { det: orbit.det });
    }
    let n = orbit.dim;
    let om = &orbit.omega_matrix;
    Ok(SymplecticForm {
        matrix: om.clone(),
        dp_dq: om.block(0, n, n, n),
        dp_dp: om.block(0, 0, n, n).scale(0.5),
        dq_dq: om.block(n, n, n, n).scale(0.5),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{anh_algebra, Basis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p2(sign: Sign, omega: f64, c: f64, r: f64) -> AlgebraParams {
        AlgebraParams::new(2, sign, omega, c, r)
    }

    #[test]
    fn kirillov_zero_point() {
        let sc = anh_algebra(&p2(Sign::Plus, 1.0, 1.0, 1.0)).unwrap();
        let b = kirillov_matrix(&sc, &DualPoint::zero(2)).unwrap();
        assert_eq!(b.max_abs(), 0.0);
    }

    #[test]
    fn kirillov_one_dim_example() {
        let sc = anh_algebra(&AlgebraParams::one_dim(Sign::Minus, 1.0)).unwrap();
        let xi = DualPoint::new(1.0, vec![], vec![2.0], vec![3.0], 0.25);
        let b = kirillov_matrix(&sc, &xi).unwrap();
        let basis = Basis::new(1);
        let sub = b.select(&[basis.k(0), basis.p(0), basis.e()]);
        let expected = Mat::from_rows(&[
            vec![0.0, 1.0, 3.0],
            vec![-1.0, 0.0, -2.0],
            vec![-3.0, 2.0, 0.0],
        ]);
        assert_eq!(sub, expected);
    }

    #[test]
    fn kirillov_three_dim_blocks() {
        let sc = anh_algebra(&AlgebraParams::new(3, Sign::Plus, 1.0, 1.0, 1.0)).unwrap();
        let xi = DualPoint::new(1.0, vec![0.0, 0.0, 2.0], vec![0.0; 3], vec![0.0; 3], 0.0);
        let b = kirillov_matrix(&sc, &xi).unwrap();
        let basis = Basis::new(3);
        let slots = basis.orbit_slots();
        let om = b.select(&slots);
        assert_eq!(
            om.block(0, 0, 3, 3),
            Mat::from_rows(&[vec![0.0, 2.0, 0.0], vec![-2.0, 0.0, 0.0], vec![0.0; 3]])
        );
        assert_eq!(om.block(0, 3, 3, 3), Mat::identity(3));
    }

    #[test]
    fn kirillov_dimension_mismatch() {
        let sc = anh_algebra(&AlgebraParams::one_dim(Sign::Minus, 1.0)).unwrap();
        assert!(matches!(
            kirillov_matrix(&sc, &DualPoint::zero(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn casimir_examples() {
        let p1 = AlgebraParams::one_dim(Sign::Minus, 1.0);
        let xi = DualPoint::new(1.0, vec![], vec![0.0], vec![1.0], 0.5);
        assert_eq!(casimir_u(&p1, &xi).unwrap(), 0.0);
        let xi = DualPoint::new(1.3, vec![], vec![0.0], vec![0.0], 4.25);
        assert_eq!(casimir_u(&p1, &xi).unwrap(), 4.25);

        let p = p2(Sign::Plus, 1.0, 1.0, 1.0);
        let xi = DualPoint::new(2.0, vec![1.0], vec![0.0; 2], vec![0.0; 2], 7.0);
        assert_eq!(effective_mass(&p, 2.0, 1.0), 3.0);
        assert_eq!(casimir_u(&p, &xi).unwrap(), 7.0);
    }

    #[test]
    fn casimir_undefined_when_effective_mass_vanishes() {
        let p = p2(Sign::Minus, 1.0, 1.0, 1.0);
        let xi = DualPoint::new(1.0, vec![1.0], vec![0.1, 0.2], vec![0.3, 0.4], 0.0);
        assert!(matches!(casimir_u(&p, &xi), Err(Error::CasimirUndefined(_))));
    }

    #[test]
    fn one_dim_casimir_lies_in_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for sign in Sign::BOTH {
            let p = AlgebraParams::one_dim(sign, 1.0);
            let sc = anh_algebra(&p).unwrap();
            for _ in 0..100 {
                let mut xi = DualPoint::random(1, &mut rng);
                xi.m = 1.0;
                let r = casimir_kernel_residual(&sc, &xi, |x| casimir_u(&p, x)).unwrap();
                assert!(r < 1e-6, "{r}");
            }
        }
    }

    #[test]
    fn casimir_residual_at_origin_of_k_p() {
        let p = p2(Sign::Plus, 1.2, 0.8, 1.5);
        let sc = anh_algebra(&p).unwrap();
        let xi = DualPoint::new(1.5, vec![0.4], vec![0.0; 2], vec![0.0; 2], 3.0);
        let r = casimir_kernel_residual(&sc, &xi, |x| casimir_u(&p, x)).unwrap();
        assert!(r < 1e-9, "{r}");
    }

    #[test]
    fn corrupted_casimir_is_rejected() {
        let p = AlgebraParams::one_dim(Sign::Minus, 1.0);
        let sc = anh_algebra(&p).unwrap();
        let wrong = |x: &DualPoint| {
            let q = x.k[0] / x.m;
            Ok(x.e - x.p[0] * x.p[0] / (2.0 * x.m) + x.m * q * q / 2.0)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mut xi = DualPoint::random(1, &mut rng);
            xi.m = 1.0;
            xi.k[0] = 0.5 + xi.k[0].abs();
            xi.p[0] = 0.5 + xi.p[0].abs();
            assert!(casimir_kernel_residual(&sc, &xi, wrong).unwrap() > 1e-3);
        }
    }

    #[test]
    fn closed_convention_selects_conjugate_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [2, 3] {
            for sign in Sign::BOTH {
                let p = AlgebraParams::new(dim, sign, 0.9, 1.1, 1.4)
                    .with_convention(PpConvention::JacobiClosed);
                let pts = sample_dual_points(&p, 30, &mut rng);
                let res = resolve_casimir(&p, &pts).unwrap();
                assert_eq!(
                    res.selected,
                    Some(CasimirForm::Metric(Metric::PsiConjugate)),
                    "{res:?}"
                );
            }
        }
    }

    #[test]
    fn orbit_2d_example() {
        let op = OrbitParams::new(
            p2(Sign::Plus, 1.0, 1.0, 1.0),
            DualPoint::new(2.0, vec![1.0], vec![0.0; 2], vec![0.0; 2], 0.0),
        );
        let o = orbit_structure_2d(&op).unwrap();
        let expected = Mat::from_rows(&[
            vec![0.0, 1.0, 2.0, 0.0],
            vec![-1.0, 0.0, 0.0, 2.0],
            vec![-2.0, 0.0, 0.0, 1.0],
            vec![0.0, -2.0, -1.0, 0.0],
        ]);
        assert_eq!(o.omega_matrix, expected);
        assert!(!o.degenerate);
        let third = 1.0 / 3.0;
        let eps = Mat::epsilon2();
        let id = Mat::identity(2);
        let inv = Mat::from_blocks(
            &eps.scale(third),
            &id.scale(-2.0 * third),
            &id.scale(2.0 * third),
            &eps.scale(third),
        );
        assert!(o.poisson_matrix.as_ref().unwrap().max_abs_diff(&inv) < 1e-15);
        assert_eq!(o.mu_e, Some(3.0));
    }

    #[test]
    fn orbit_2d_degenerate_on_plus_branch() {
        // h = m ω r² with c = ω r
        let (m, w, r) = (1.5, 2.0, 0.5);
        let op = OrbitParams::new(
            p2(Sign::Plus, w, w * r, r),
            DualPoint::new(m, vec![m * w * r * r], vec![0.0; 2], vec![0.0; 2], 0.0),
        );
        let o = orbit_structure_2d(&op).unwrap();
        assert!(o.degenerate);
        assert!(o.poisson_matrix.is_none());
        assert!(symplectic_form(&o).is_err());
    }

    #[test]
    fn orbit_2d_minus_branch_matches_doubled_effective_mass() {
        let op = OrbitParams::new(
            p2(Sign::Minus, 1.0, 1.0, 1.0),
            DualPoint::new(1.0, vec![1.0], vec![0.0; 2], vec![0.0; 2], 0.0),
        );
        let o = orbit_structure_2d(&op).unwrap();
        assert_eq!(o.omega0, Some(1.0));
        assert!(o.pairing.as_ref().unwrap().max_abs_diff(&Mat::diag_const(2, -0.5)) < 1e-15);
        assert_eq!(
            o.check("inverse_closed_form_mu_plus").unwrap().status,
            CrossCheckStatus::Match
        );
        assert_eq!(
            o.check("inverse_closed_form_mu_minus").unwrap().status,
            CrossCheckStatus::Skipped
        );
        assert_eq!(o.check("g_closed_form").unwrap().status, CrossCheckStatus::Mismatch);
        assert_eq!(o.check("field_identities").unwrap().status, CrossCheckStatus::Match);
    }

    #[test]
    fn orbit_2d_closed_forms_skipped_off_regime() {
        let op = OrbitParams::new(
            p2(Sign::Minus, 1.0, 2.0, 1.0),
            DualPoint::new(1.0, vec![0.3], vec![0.0; 2], vec![0.0; 2], 0.0),
        );
        let o = orbit_structure_2d(&op).unwrap();
        assert!(o.cross_checks.iter().all(|c| c.status == CrossCheckStatus::Skipped));
    }

    #[test]
    fn orbit_3d_canonical_when_h_vanishes() {
        let m = 2.0;
        let op = OrbitParams::new(
            AlgebraParams::new(3, Sign::Plus, 1.0, 1.0, 1.0),
            DualPoint::new(m, vec![0.0; 3], vec![0.0; 3], vec![0.0; 3], 0.0),
        );
        let o = orbit_structure_3d(&op).unwrap();
        let id = Mat::identity(3);
        let expected =
            Mat::from_blocks(&Mat::zeros(3, 3), &id.scale(-1.0), &id, &Mat::zeros(3, 3)).scale(1.0 / m);
        assert_eq!(o.poisson_matrix.as_ref().unwrap(), &expected);
        assert_eq!(o.f.as_ref().unwrap().max_abs(), 0.0);
        assert_eq!(o.g.as_ref().unwrap().max_abs(), 0.0);
        let sigma = symplectic_form(&o).unwrap();
        assert_eq!(sigma.dp_dp.max_abs(), 0.0);
        assert_eq!(sigma.dq_dq.max_abs(), 0.0);
        assert_eq!(sigma.dp_dq, id.scale(m));
    }

    #[test]
    fn orbit_3d_plane_example() {
        let op = OrbitParams::new(
            AlgebraParams::new(3, Sign::Plus, 1.0, 1.0, 1.0),
            DualPoint::new(1.0, vec![0.0, 0.0, 2.0], vec![0.0; 3], vec![0.0; 3], 0.0),
        );
        let o = orbit_structure_3d(&op).unwrap();
        let g = o.g.as_ref().unwrap();
        let plane = g.block(0, 0, 2, 2);
        assert!(plane.max_abs_diff(&Mat::epsilon2().scale(-2.0 / 3.0)) < 1e-15);
        assert_eq!(g[(2, 2)], 0.0);
        let pairing = o.pairing.as_ref().unwrap();
        assert!((pairing[(2, 2)] + 1.0).abs() < 1e-15);
        assert_eq!(o.check("block_inverse_psi").unwrap().status, CrossCheckStatus::Match);
        assert_eq!(o.check("printed_inverse_phi").unwrap().status, CrossCheckStatus::Mismatch);
    }

    #[test]
    fn orbit_3d_equals_restricted_kirillov_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for convention in [PpConvention::Printed, PpConvention::JacobiClosed] {
            for sign in Sign::BOTH {
                let alg = AlgebraParams::new(3, sign, 0.7, 1.9, 0.6).with_convention(convention);
                let xi = DualPoint::random(3, &mut rng);
                let o = orbit_structure(&OrbitParams::new(alg, xi.clone())).unwrap();
                let basis = Basis::new(3);
                let slots: Vec<usize> = (0..3).map(|i| basis.k(i)).chain((0..3).map(|i| basis.p(i))).collect();
                let b = kirillov_matrix(&anh_algebra(&alg).unwrap(), &xi).unwrap().select(&slots);
                assert!(o.omega_matrix.max_abs_diff(&b) < 1e-15);
            }
        }
    }

    #[test]
    fn symplectic_form_inverts_poisson_matrix() {
        let op = OrbitParams::new(
            p2(Sign::Plus, 1.0, 1.0, 1.0),
            DualPoint::new(2.0, vec![1.0], vec![0.0; 2], vec![0.0; 2], 0.0),
        );
        let o = orbit_structure_2d(&op).unwrap();
        let sigma = symplectic_form(&o).unwrap();
        let prod = &sigma.matrix * o.poisson_matrix.as_ref().unwrap();
        assert!(prod.max_abs_diff(&Mat::identity(4)) < 1e-12);
        // + branch: dq∧dq block is +(h/r²/2) ε
        assert_eq!(sigma.dq_dq, Mat::epsilon2().scale(0.5));
    }
}
