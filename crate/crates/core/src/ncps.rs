//! Noncommutative phase space: Poisson structures with magnetic (`F`) and
//! dual magnetic (`G`) fields, the minimal-coupling change of coordinates,
//! and Jacobi diagnostics for field-dependent structures.
//!
//! Phase-space vectors are ordered `z = (π_1..π_n, x^1..x^n)` (or `(p, q)` in
//! the Darboux chart) and brackets are `{f, g} = ∇fᵀ Π ∇g` with
//! `Π = [[F, P], [−Pᵀ, G]]`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg::{fd_gradient, Mat};
use crate::orbit::OrbitStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Darboux,
    Coupled,
}

/// `p`/`q` hold `π`/`x` when `chart` is [`Chart::Coupled`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePoint {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub chart: Chart,
}

impl PhasePoint {
    pub fn darboux(p: Vec<f64>, q: Vec<f64>) -> Self {
        Self { p, q, chart: Chart::Darboux }
    }

    pub fn coupled(pi: Vec<f64>, x: Vec<f64>) -> Self {
        Self { p: pi, q: x, chart: Chart::Coupled }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.p.clone();
        v.extend_from_slice(&self.q);
        v
    }

    pub fn from_vec(z: &[f64], chart: Chart) -> Self {
        let n = z.len() / 2;
        Self {
            p: z[..n].to_vec(),
            q: z[n..].to_vec(),
            chart,
        }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        for got in [self.p.len(), self.q.len()] {
            if got != n {
                return Err(Error::DimensionMismatch { expected: n, got });
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.p.iter().chain(&self.q).all(|v| v.is_finite())
    }
}

type ValueFn = dyn Fn(&PhasePoint) -> f64 + Send + Sync;
type GradFn = dyn Fn(&PhasePoint) -> Vec<f64> + Send + Sync;

/// A phase-space function with an optional analytic gradient `(∂_p, ∂_q)`.
#[derive(Clone)]
pub struct ScalarField {
    value: Arc<ValueFn>,
    gradient: Option<Arc<GradFn>>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("analytic_gradient", &self.gradient.is_some())
            .finish()
    }
}

impl ScalarField {
    pub fn new(value: impl Fn(&PhasePoint) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            value: Arc::new(value),
            gradient: None,
        }
    }

    pub fn with_gradient(
        value: impl Fn(&PhasePoint) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&PhasePoint) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            gradient: Some(Arc::new(gradient)),
        }
    }

    /// The coordinate function `p_i` (or `π_i`).
    pub fn momentum(i: usize) -> Self {
        Self::with_gradient(
            move |z| z.p[i],
            move |z| {
                let mut g = vec![0.0; 2 * z.n()];
                g[i] = 1.0;
                g
            },
        )
    }

    /// The coordinate function `q^i` (or `x^i`).
    pub fn position(i: usize) -> Self {
        Self::with_gradient(
            move |z| z.q[i],
            move |z| {
                let mut g = vec![0.0; 2 * z.n()];
                g[z.n() + i] = 1.0;
                g
            },
        )
    }

    /// Coordinate `z^a` with `a < n` a momentum and `a ≥ n` a position.
    pub fn coordinate(a: usize, n: usize) -> Self {
        if a < n {
            Self::momentum(a)
        } else {
            Self::position(a - n)
        }
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn value(&self, z: &PhasePoint) -> f64 {
        (self.value)(z)
    }

    pub fn gradient(&self, z: &PhasePoint) -> Result<Vec<f64>> {
        let g = match &self.gradient {
            Some(g) => g(z),
            None => self.fd_gradient(z),
        };
        if g.len() != 2 * z.n() {
            return Err(Error::DimensionMismatch {
                expected: 2 * z.n(),
                got: g.len(),
            });
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(invalid("gradient", "non-finite component"));
        }
        Ok(g)
    }

    fn fd_gradient(&self, z: &PhasePoint) -> Vec<f64> {
        let chart = z.chart;
        fd_gradient::<()>(&z.to_vec(), |v| Ok(self.value(&PhasePoint::from_vec(v, chart))))
            .expect("infallible")
    }

    /// `‖analytic − finite-difference‖∞`; `0` when no analytic gradient is set.
    pub fn gradient_consistency(&self, z: &PhasePoint) -> f64 {
        match &self.gradient {
            Some(g) => crate::linalg::max_abs_diff(&g(z), &self.fd_gradient(z)),
            None => 0.0,
        }
    }

    pub fn product(&self, other: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), other.clone());
        ScalarField::new(move |z| a.value(z) * b.value(z))
    }

    /// `f ∘ map`, with a finite-difference gradient.
    pub fn compose(
        &self,
        map: impl Fn(&PhasePoint) -> PhasePoint + Send + Sync + 'static,
    ) -> ScalarField {
        let f = self.clone();
        ScalarField::new(move |z| f.value(&map(z)))
    }
}

type MatFn = dyn Fn(&PhasePoint) -> Mat + Send + Sync;

/// An antisymmetric `n × n` field, constant or evaluated on phase space.
#[derive(Clone)]
pub enum Field {
    Constant(Mat),
    Variable(Arc<MatFn>),
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Constant(m) => f.debug_tuple("Constant").field(m).finish(),
            Field::Variable(_) => f.write_str("Variable(..)"),
        }
    }
}

impl Field {
    pub fn variable(f: impl Fn(&PhasePoint) -> Mat + Send + Sync + 'static) -> Self {
        Field::Variable(Arc::new(f))
    }

    pub fn at(&self, z: &PhasePoint) -> Mat {
        match self {
            Field::Constant(m) => m.clone(),
            Field::Variable(f) => f(z),
        }
    }

    pub fn constant(&self) -> Option<&Mat> {
        match self {
            Field::Constant(m) => Some(m),
            Field::Variable(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PoissonStructure {
    n: usize,
    pairing: Mat,
    f: Field,
    g: Field,
}

impl PoissonStructure {
    pub fn new(n: usize, pairing: Mat, f: Field, g: Field) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "must be positive"));
        }
        if pairing.rows() != n || pairing.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: pairing.rows(),
            });
        }
        if !pairing.is_finite() {
            return Err(invalid("pairing", "non-finite entry"));
        }
        let lu = pairing.lu()?;
        if lu.det() == 0.0 {
            return Err(Error::SingularMatrix { column: 0, pivot: 0.0 });
        }
        for (name, field) in [("F", &f), ("G", &g)] {
            if let Some(m) = field.constant() {
                if m.rows() != n || m.cols() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: m.rows(),
                    });
                }
                if !m.is_finite() {
                    return Err(invalid(name_static(name), "non-finite entry"));
                }
                if m.antisymmetry_defect() > 1e-12 * m.max_abs().max(1.0) {
                    return Err(invalid(name_static(name), "must be antisymmetric"));
                }
            }
        }
        Ok(Self { n, pairing, f, g })
    }

    pub fn canonical(n: usize) -> Self {
        Self::constant(n, Mat::identity(n), Mat::zeros(n, n), Mat::zeros(n, n))
            .expect("canonical structure is valid")
    }

    pub fn constant(n: usize, pairing: Mat, f: Mat, g: Mat) -> Result<Self> {
        Self::new(n, pairing, Field::Constant(f), Field::Constant(g))
    }

    /// The structure induced on `(π, x)` by [`couple`] with constant `F`, `G`:
    /// pairing `I − ¼FG`.
    pub fn from_coupling(f: Mat, g: Mat) -> Result<Self> {
        let n = f.rows();
        let pairing = &Mat::identity(n) - &(&f * &g).scale(0.25);
        Self::constant(n, pairing, f, g)
    }

    /// `F = −eB ε` in 2D; `F = −e [B]×` in 3D (`B` given as a 3-vector).
    pub fn magnetic_field(n: usize, e_b: &[f64]) -> Result<Mat> {
        match (n, e_b.len()) {
            (2, 1) => Ok(Mat::epsilon2().scale(-e_b[0])),
            (3, 3) => Ok(Mat::cross_matrix(e_b).scale(-1.0)),
            (1, 0) => Ok(Mat::zeros(1, 1)),
            (_, got) => Err(Error::DimensionMismatch {
                expected: if n == 2 { 1 } else { 3 },
                got,
            }),
        }
    }

    /// Mixed coupling with `F = −eB ε`, `G = −e*B* ε` in 2D.
    pub fn mixed_2d(e_b: f64, es_bs: f64) -> Result<Self> {
        let eps = Mat::epsilon2();
        Self::from_coupling(eps.scale(-e_b), eps.scale(-es_bs))
    }

    /// Constant structure built from the blocks of an orbit's `Ω⁻¹`.
    pub fn from_orbit(orbit: &OrbitStructure) -> Result<Self> {
        match (&orbit.pairing, &orbit.f, &orbit.g) {
            (Some(p), Some(f), Some(g)) => Self::constant(orbit.dim, p.clone(), f.clone(), g.clone()),
            _ => Err(Error::DegenerateOrbit { det: orbit.det }),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairing(&self) -> &Mat {
        &self.pairing
    }

    pub fn f(&self) -> &Field {
        &self.f
    }

    pub fn g(&self) -> &Field {
        &self.g
    }

    pub fn constant_fields(&self) -> bool {
        self.f.constant().is_some() && self.g.constant().is_some()
    }

    fn constant_fg(&self) -> Result<(&Mat, &Mat)> {
        match (self.f.constant(), self.g.constant()) {
            (Some(f), Some(g)) => Ok((f, g)),
            _ => Err(Error::NonConstantFields),
        }
    }

    /// `Π(z) = [[F(z), P], [−Pᵀ, G(z)]]`.
    pub fn poisson_matrix(&self, z: &PhasePoint) -> Mat {
        Mat::from_blocks(
            &self.f.at(z),
            &self.pairing,
            &self.pairing.transpose().scale(-1.0),
            &self.g.at(z),
        )
    }

    /// Linear map `(p, q) ↦ (π, x)` of [`couple`] as a `2n × 2n` matrix.
    pub fn coupling_matrix(&self) -> Result<Mat> {
        let (f, g) = self.constant_fg()?;
        let id = Mat::identity(self.n);
        Ok(Mat::from_blocks(
            &id,
            &f.scale(-0.5),
            &g.transpose().scale(-0.5),
            &id,
        ))
    }

    /// `det(I − ¼ Gᵀ F)`, the determinant of the coupling map itself.
    pub fn coupling_jacobian(&self) -> Result<f64> {
        let (f, g) = self.constant_fg()?;
        let id = Mat::identity(self.n);
        Ok((&id - &(&g.transpose() * f).scale(0.25)).det())
    }
}

fn name_static(name: &str) -> &'static str {
    if name == "F" {
        "F"
    } else {
        "G"
    }
}

/// `π_i = p_i − ½ F_ik q^k`, `x^i = q^i − ½ p_k G^ki`.
pub fn couple(ps: &PoissonStructure, z: &PhasePoint) -> Result<PhasePoint> {
    z.check(ps.n)?;
    let t = ps.coupling_matrix()?;
    Ok(PhasePoint::from_vec(&t.mul_vec(&z.to_vec()), Chart::Coupled))
}

/// `det(δ^s_j − ¼ F_jm G^ms)`.
pub fn invertibility_margin(ps: &PoissonStructure) -> Result<f64> {
    let (f, g) = ps.constant_fg()?;
    let id = Mat::identity(ps.n);
    Ok((&id - &(f * g).scale(0.25)).det())
}

/// Inverts [`couple`] by solving the `2n × 2n` linear system. Fails when the
/// invertibility margin vanishes or the coupling map itself is singular.
pub fn decouple(ps: &PoissonStructure, z: &PhasePoint) -> Result<PhasePoint> {
    z.check(ps.n)?;
    let margin = invertibility_margin(ps)?;
    let t = ps.coupling_matrix()?;
    let jacobian = ps.coupling_jacobian()?;
    let (f, g) = ps.constant_fg()?;
    let scale = (1.0 + 0.25 * f.max_abs() * g.max_abs()).powi(ps.n as i32);
    let tol = 1e-12 * scale;
    if margin.abs() <= tol || jacobian.abs() <= tol {
        return Err(Error::NonInvertibleCoupling { margin, jacobian });
    }
    let v = t
        .solve(&z.to_vec())
        .map_err(|_| Error::NonInvertibleCoupling { margin, jacobian })?;
    Ok(PhasePoint::from_vec(&v, Chart::Darboux))
}

/// `{f, g}` at `z` in the coupled chart.
pub fn nc_bracket(ps: &PoissonStructure, f: &ScalarField, g: &ScalarField, z: &PhasePoint) -> Result<f64> {
    z.check(ps.n)?;
    let df = f.gradient(z)?;
    let dg = g.gradient(z)?;
    Ok(crate::linalg::dot(&df, &ps.poisson_matrix(z).mul_vec(&dg)))
}

/// Canonical bracket `∂_p f ∂_q g − ∂_q f ∂_p g`.
pub fn canonical_bracket(f: &ScalarField, g: &ScalarField, z: &PhasePoint) -> Result<f64> {
    nc_bracket(&PoissonStructure::canonical(z.n()), f, g, z)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketTable {
    pub pi_pi: Mat,
    pub pi_x: Mat,
    pub x_x: Mat,
}

pub fn coordinate_bracket_table(ps: &PoissonStructure, z: &PhasePoint) -> Result<BracketTable> {
    let n = ps.n;
    let mut table = [Mat::zeros(n, n), Mat::zeros(n, n), Mat::zeros(n, n)];
    for i in 0..n {
        for j in 0..n {
            let (pi, pj) = (ScalarField::momentum(i), ScalarField::momentum(j));
            let (xi, xj) = (ScalarField::position(i), ScalarField::position(j));
            table[0][(i, j)] = nc_bracket(ps, &pi, &pj, z)?;
            table[1][(i, j)] = nc_bracket(ps, &pi, &xj, z)?;
            table[2][(i, j)] = nc_bracket(ps, &xi, &xj, z)?;
        }
    }
    let [pi_pi, pi_x, x_x] = table;
    Ok(BracketTable { pi_pi, pi_x, x_x })
}

pub const JACOBI_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiReport {
    pub points: usize,
    /// Largest `|∂F/∂π|` and `|∂G/∂x|` (check a).
    pub f_momentum_dependence: f64,
    pub g_position_dependence: f64,
    /// Largest cyclic sum `∂_[k F_ij]` and `∂^[k G^ij]` (check b).
    pub f_closedness: f64,
    pub g_closedness: f64,
    /// Largest Jacobi residual of the bracket on coordinate triples (check c).
    pub jacobi_residual: f64,
    pub tolerance: f64,
    pub violations: Vec<String>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Finite-difference derivatives `∂Π/∂z^d` at `z`, for every `d`.
fn poisson_derivatives(ps: &PoissonStructure, z: &PhasePoint) -> Vec<Mat> {
    let v = z.to_vec();
    (0..v.len())
        .map(|d| {
            let h = 1e-6 * v[d].abs().max(1.0);
            let mut up = v.clone();
            let mut dn = v.clone();
            up[d] += h;
            dn[d] -= h;
            let a = ps.poisson_matrix(&PhasePoint::from_vec(&up, z.chart));
            let b = ps.poisson_matrix(&PhasePoint::from_vec(&dn, z.chart));
            (&a - &b).scale(0.5 / h)
        })
        .collect()
}

/// Checks (a) `F = F(x)`, `G = G(π)`, (b) closedness of `F_ij dx^i∧dx^j` and
/// `G^ij dπ_i∧dπ_j`, and (c) the Jacobi identity on coordinate triples, all by
/// finite differences on `grid`.
pub fn jacobi_conditions(ps: &PoissonStructure, grid: &[PhasePoint]) -> Result<JacobiReport> {
    let n = ps.n;
    let mut r = JacobiReport {
        points: grid.len(),
        f_momentum_dependence: 0.0,
        g_position_dependence: 0.0,
        f_closedness: 0.0,
        g_closedness: 0.0,
        jacobi_residual: 0.0,
        tolerance: JACOBI_TOLERANCE,
        violations: Vec::new(),
    };
    for z in grid {
        z.check(n)?;
        let pi = ps.poisson_matrix(z);
        let d = poisson_derivatives(ps, z);
        for a in 0..n {
            // F block rows/cols 0..n, G block n..2n.
            for i in 0..n {
                for j in 0..n {
                    r.f_momentum_dependence = r.f_momentum_dependence.max(d[a][(i, j)].abs());
                    r.g_position_dependence =
                        r.g_position_dependence.max(d[n + a][(n + i, n + j)].abs());
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let f_cyc = d[n + k][(i, j)] + d[n + i][(j, k)] + d[n + j][(k, i)];
                    let g_cyc = d[k][(n + i, n + j)] + d[i][(n + j, n + k)] + d[j][(n + k, n + i)];
                    r.f_closedness = r.f_closedness.max(f_cyc.abs());
                    r.g_closedness = r.g_closedness.max(g_cyc.abs());
                }
            }
        }
        let m = 2 * n;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let s: f64 = (0..m)
                        .map(|e| {
                            pi[(a, e)] * d[e][(b, c)]
                                + pi[(b, e)] * d[e][(c, a)]
                                + pi[(c, e)] * d[e][(a, b)]
                        })
                        .sum();
                    r.jacobi_residual = r.jacobi_residual.max(s.abs());
                }
            }
        }
    }
    let tol = r.tolerance;
    for (name, value) in [
        ("F depends on momentum", r.f_momentum_dependence),
        ("G depends on position", r.g_position_dependence),
        ("F_ij dx^i∧dx^j not closed", r.f_closedness),
        ("G^ij dπ_i∧dπ_j not closed", r.g_closedness),
        ("Jacobi identity violated on coordinate triples", r.jacobi_residual),
    ] {
        if value >= tol {
            r.violations.push(format!("{name}: {value:e}"));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{AlgebraParams, Sign};
    use crate::orbit::{orbit_structure_2d, DualPoint, OrbitParams};

    fn eps() -> Mat {
        Mat::epsilon2()
    }

    #[test]
    fn couple_identity_when_fields_vanish() {
        let ps = PoissonStructure::canonical(2);
        let z = PhasePoint::darboux(vec![0.3, -1.0], vec![2.0, 0.5]);
        let c = couple(&ps, &z).unwrap();
        assert_eq!((c.p.clone(), c.q.clone()), (z.p.clone(), z.q.clone()));
        assert_eq!(c.chart, Chart::Coupled);
    }

    #[test]
    fn couple_magnetic_and_dual_examples() {
        let ps = PoissonStructure::from_coupling(eps().scale(-2.0), Mat::zeros(2, 2)).unwrap();
        let c = couple(&ps, &PhasePoint::darboux(vec![0.0, 0.0], vec![1.0, 0.0])).unwrap();
        assert_eq!(c.p, vec![0.0, -1.0]);
        assert_eq!(c.q, vec![1.0, 0.0]);

        let ps = PoissonStructure::from_coupling(Mat::zeros(2, 2), eps().scale(-2.0)).unwrap();
        let c = couple(&ps, &PhasePoint::darboux(vec![1.0, 0.0], vec![0.0, 0.0])).unwrap();
        assert_eq!(c.p, vec![1.0, 0.0]);
        assert_eq!(c.q, vec![0.0, 1.0]);
        let back = decouple(&ps, &c).unwrap();
        assert!(crate::linalg::max_abs_diff(&back.to_vec(), &[1.0, 0.0, 0.0, 0.0]) < 1e-12);
    }

    #[test]
    fn couple_rejects_variable_fields() {
        let ps = PoissonStructure::new(
            2,
            Mat::identity(2),
            Field::variable(|z| Mat::epsilon2().scale(z.q[0])),
            Field::Constant(Mat::zeros(2, 2)),
        )
        .unwrap();
        let z = PhasePoint::darboux(vec![0.0; 2], vec![0.0; 2]);
        assert_eq!(couple(&ps, &z), Err(Error::NonConstantFields));
    }

    #[test]
    fn margin_examples() {
        let ps = PoissonStructure::from_coupling(eps().scale(-2.0), Mat::zeros(2, 2)).unwrap();
        assert_eq!(invertibility_margin(&ps).unwrap(), 1.0);
        assert_eq!(invertibility_margin(&PoissonStructure::mixed_2d(2.0, 2.0).unwrap()).unwrap(), 4.0);
        // the induced pairing vanishes here, so the transform data is carried
        // on an identity-paired structure
        let ps = PoissonStructure::constant(2, Mat::identity(2), eps().scale(-2.0), eps().scale(2.0))
            .unwrap();
        assert_eq!(invertibility_margin(&ps), Ok(0.0));
    }

    #[test]
    fn decouple_fails_at_zero_margin() {
        let ps = PoissonStructure::mixed_2d(2.0, -2.0);
        // pairing γ = 0 makes the induced structure itself degenerate
        assert!(ps.is_err());
        let ps = PoissonStructure::constant(
            2,
            Mat::identity(2),
            eps().scale(-2.0),
            eps().scale(2.0),
        )
        .unwrap();
        let err = decouple(&ps, &PhasePoint::coupled(vec![0.0, -1.0], vec![1.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::NonInvertibleCoupling { margin, .. } if margin == 0.0));
    }

    #[test]
    fn decouple_detects_singular_coupling_map() {
        let ps = PoissonStructure::constant(2, Mat::identity(2), eps().scale(-2.0), eps().scale(-2.0))
            .unwrap();
        assert_eq!(invertibility_margin(&ps).unwrap(), 4.0);
        assert_eq!(ps.coupling_jacobian().unwrap(), 0.0);
        let err = decouple(&ps, &PhasePoint::coupled(vec![0.0, -1.0], vec![1.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::NonInvertibleCoupling { jacobian, .. } if jacobian == 0.0));
    }

    #[test]
    fn decouple_round_trip() {
        let ps = PoissonStructure::mixed_2d(2.0, 1.0).unwrap();
        let z = PhasePoint::darboux(vec![0.4, -0.7], vec![1.1, 0.2]);
        let back = decouple(&ps, &couple(&ps, &z).unwrap()).unwrap();
        assert!(crate::linalg::max_abs_diff(&back.to_vec(), &z.to_vec()) < 1e-12);
    }

    #[test]
    fn bracket_examples() {
        let z = PhasePoint::coupled(vec![0.1, 0.2], vec![0.3, 0.4]);
        let ps = PoissonStructure::canonical(2);
        let v = nc_bracket(&ps, &ScalarField::momentum(0), &ScalarField::position(0), &z).unwrap();
        assert_eq!(v, 1.0);

        let ps = PoissonStructure::from_coupling(Mat::zeros(2, 2), eps().scale(-2.0)).unwrap();
        let v = nc_bracket(&ps, &ScalarField::position(0), &ScalarField::position(1), &z).unwrap();
        assert_eq!(v, -2.0);

        let ps = PoissonStructure::mixed_2d(1.0, 2.0).unwrap();
        assert_eq!(ps.pairing(), &Mat::diag_const(2, 1.5));
        let v = nc_bracket(&ps, &ScalarField::momentum(0), &ScalarField::position(0), &z).unwrap();
        assert_eq!(v, 1.5);
    }

    #[test]
    fn bracket_table_matches_fields() {
        let z = PhasePoint::coupled(vec![0.0; 2], vec![0.0; 2]);
        let t = coordinate_bracket_table(&PoissonStructure::canonical(2), &z).unwrap();
        assert_eq!(t.pi_x, Mat::identity(2));
        assert_eq!(t.pi_pi.max_abs() + t.x_x.max_abs(), 0.0);

        let (eb, esbs) = (0.8, 1.5);
        let t = coordinate_bracket_table(&PoissonStructure::mixed_2d(eb, esbs).unwrap(), &z).unwrap();
        assert!(t.pi_pi.max_abs_diff(&eps().scale(-eb)) < 1e-15);
        assert!(t.x_x.max_abs_diff(&eps().scale(-esbs)) < 1e-15);
        assert!(t.pi_x.max_abs_diff(&Mat::diag_const(2, 1.0 + 0.25 * eb * esbs)) < 1e-15);
    }

    #[test]
    fn bracket_table_matches_orbit_blocks() {
        let op = OrbitParams::new(
            AlgebraParams::new(2, Sign::Plus, 1.0, 1.0, 1.0),
            DualPoint::new(2.0, vec![1.0], vec![0.0; 2], vec![0.0; 2], 0.0),
        );
        let orbit = orbit_structure_2d(&op).unwrap();
        let ps = PoissonStructure::from_orbit(&orbit).unwrap();
        let t = coordinate_bracket_table(&ps, &PhasePoint::coupled(vec![0.0; 2], vec![0.0; 2])).unwrap();
        assert!(t.pi_pi.max_abs_diff(orbit.f.as_ref().unwrap()) < 1e-12);
        assert!(t.pi_x.max_abs_diff(orbit.pairing.as_ref().unwrap()) < 1e-12);
        assert!(t.x_x.max_abs_diff(orbit.g.as_ref().unwrap()) < 1e-12);
    }

    fn grid(n: usize) -> Vec<PhasePoint> {
        (0..5)
            .map(|i| {
                let t = i as f64 * 0.37 - 0.8;
                PhasePoint::coupled(
                    (0..n).map(|k| t + 0.1 * k as f64).collect(),
                    (0..n).map(|k| 0.5 * t - 0.2 * k as f64).collect(),
                )
            })
            .collect()
    }

    #[test]
    fn jacobi_constant_fields_pass_exactly() {
        let r = jacobi_conditions(&PoissonStructure::mixed_2d(1.0, 0.7).unwrap(), &grid(2)).unwrap();
        assert!(r.passed());
        assert_eq!(r.jacobi_residual, 0.0);
        assert_eq!(r.f_momentum_dependence, 0.0);
    }

    #[test]
    fn jacobi_position_dependent_magnetic_field_passes() {
        let ps = PoissonStructure::new(
            2,
            Mat::identity(2),
            Field::variable(|z| Mat::epsilon2().scale(-(1.0 + z.q[0] * z.q[0]).sin())),
            Field::Constant(Mat::zeros(2, 2)),
        )
        .unwrap();
        let r = jacobi_conditions(&ps, &grid(2)).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn jacobi_detects_position_dependent_dual_field() {
        let ps = PoissonStructure::new(
            2,
            Mat::identity(2),
            Field::Constant(Mat::zeros(2, 2)),
            Field::variable(|z| Mat::epsilon2().scale(0.3 + z.q[0])),
        )
        .unwrap();
        let r = jacobi_conditions(&ps, &grid(2)).unwrap();
        assert!(r.g_position_dependence > 0.5);
        assert!(!r.passed());
    }

    #[test]
    fn jacobi_closedness_fails_for_non_closed_3d_field() {
        // F_12 = x^3 only: d(F) has a non-vanishing dx^1∧dx^2∧dx^3 component.
        let ps = PoissonStructure::new(
            3,
            Mat::identity(3),
            Field::variable(|z| Mat::cross_matrix(&[0.0, 0.0, z.q[2]])),
            Field::Constant(Mat::zeros(3, 3)),
        )
        .unwrap();
        let r = jacobi_conditions(&ps, &grid(3)).unwrap();
        assert!(r.f_closedness > 0.5);
        assert!(r.jacobi_residual > 0.5);
    }

    #[test]
    fn gradient_consistency_of_coordinates() {
        let z = PhasePoint::coupled(vec![0.3, 2.0], vec![-1.0, 0.0]);
        for a in 0..4 {
            assert!(ScalarField::coordinate(a, 2).gradient_consistency(&z) < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_structures() {
        assert!(PoissonStructure::constant(2, Mat::zeros(2, 2), Mat::zeros(2, 2), Mat::zeros(2, 2)).is_err());
        assert!(PoissonStructure::constant(2, Mat::identity(2), Mat::identity(2), Mat::zeros(2, 2)).is_err());
        assert!(PoissonStructure::constant(2, Mat::identity(3), Mat::zeros(2, 2), Mat::zeros(2, 2)).is_err());
    }
}
