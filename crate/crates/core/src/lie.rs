//! Finite-dimensional Lie algebras given by structure constants, and the
//! centrally extended anisotropic Newton–Hooke algebras ANH±.
//!
//! Basis orderings are fixed so that matrix representations built on top of
//! them are reproducible:
//!
//! | dim | basis |
//! |-----|-------|
//! | 1 | `M, K, P, E` |
//! | 2 | `M, J3, K1, K2, P1, P2, E` |
//! | 3 | `M, J1, J2, J3, K1, K2, K3, P1, P2, P3, E` |
//!
//! Orientation: `eps_12 = +1` in the plane and `eps_123 = +1` in space.
//!
//! `M` here is always the central generator. The total mass of the pendulum
//! scenario lives in [`crate::dynamics::DerivedParams::total_mass`].

use serde::Serialize;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `+1.0` for ANH₊, `-1.0` for ANH₋.
    pub fn pm(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "plus" | "+" => Some(Sign::Plus),
            "minus" | "-" => Some(Sign::Minus),
            _ => None,
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

/// Which coefficient `[P_i, P_j]` carries in the 2D and 3D tables.
///
/// `Printed` is the published table, `±(1/r²) J ε`. With `[P_i, E] = ±ω² K_i`
/// that table does not satisfy the Jacobi identity: the `(K_i, P_j, E)`
/// cyclic sum is `∓(ω²/c² + 1/r²) J ε_ij`. `JacobiClosed` uses
/// `∓(ω²/c²) J ε`, the unique coefficient that closes the algebra; it agrees
/// with the printed magnitude when `c = ω r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PpConvention {
    #[default]
    Printed,
    JacobiClosed,
}

impl PpConvention {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "printed" => Some(Self::Printed),
            "jacobi-closed" | "closed" => Some(Self::JacobiClosed),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgebraParams {
    pub dim: usize,
    pub sign: Sign,
    pub omega: f64,
    pub c: f64,
    pub r: f64,
    pub convention: PpConvention,
}

impl AlgebraParams {
    pub fn new(dim: usize, sign: Sign, omega: f64, c: f64, r: f64) -> Self {
        Self {
            dim,
            sign,
            omega,
            c,
            r,
            convention: PpConvention::Printed,
        }
    }

    pub fn one_dim(sign: Sign, omega: f64) -> Self {
        Self::new(1, sign, omega, 1.0, 1.0)
    }

    pub fn with_convention(mut self, convention: PpConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(invalid("dim", format!("{} not in {{1, 2, 3}}", self.dim)));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(invalid("omega", format!("must be > 0, got {}", self.omega)));
        }
        if self.dim >= 2 {
            if !(self.c.is_finite() && self.c > 0.0) {
                return Err(invalid("c", format!("must be > 0, got {}", self.c)));
            }
            if !(self.r.is_finite() && self.r > 0.0) {
                return Err(invalid("r", format!("must be > 0, got {}", self.r)));
            }
        }
        Ok(())
    }

    /// Coefficient `λ` in `[P_i, P_j] = λ J_k ε^k_ij`.
    pub fn pp_coefficient(&self) -> f64 {
        let s = self.sign.pm();
        match self.convention {
            PpConvention::Printed => s / (self.r * self.r),
            // same floating-point product as the [P,E]·[K,K] path, so the cyclic sum cancels exactly
            PpConvention::JacobiClosed => -(s * (self.omega * self.omega)) * (1.0 / (self.c * self.c)),
        }
    }
}

/// Index layout of the fixed basis for a given spatial dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Basis {
    pub dim: usize,
}

impl Basis {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    /// Number of `J` generators: 0, 1 or 3.
    pub fn n_rot(&self) -> usize {
        match self.dim {
            1 => 0,
            2 => 1,
            _ => 3,
        }
    }

    pub fn len(&self) -> usize {
        2 + self.n_rot() + 2 * self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn m(&self) -> usize {
        0
    }

    /// `J_k` slot; in 2D the only rotation generator is `J3` (pass `k = 0`).
    pub fn j(&self, k: usize) -> usize {
        1 + k
    }

    pub fn k(&self, i: usize) -> usize {
        1 + self.n_rot() + i
    }

    pub fn p(&self, i: usize) -> usize {
        1 + self.n_rot() + self.dim + i
    }

    pub fn e(&self) -> usize {
        self.len() - 1
    }

    /// Slots of the central generators `M` and `J`.
    pub fn central(&self) -> Vec<usize> {
        (0..=self.n_rot()).collect()
    }

    /// Slots `K_1..K_n, P_1..P_n`: the tangent directions of a maximal orbit.
    pub fn orbit_slots(&self) -> Vec<usize> {
        (0..self.dim)
            .map(|i| self.k(i))
            .chain((0..self.dim).map(|i| self.p(i)))
            .collect()
    }

    pub fn labels(&self) -> Vec<String> {
        let mut out = vec!["M".to_string()];
        match self.dim {
            1 => {}
            2 => out.push("J3".into()),
            _ => out.extend((1..=3).map(|k| format!("J{k}"))),
        }
        if self.dim == 1 {
            out.push("K".into());
            out.push("P".into());
        } else {
            out.extend((1..=self.dim).map(|i| format!("K{i}")));
            out.extend((1..=self.dim).map(|i| format!("P{i}")));
        }
        out.push("E".into());
        out
    }
}

/// Structure constants `c^γ_{αβ}`, stored densely as `tensor[(α n + β) n + γ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    labels: Vec<String>,
    tensor: Vec<f64>,
}

impl StructureConstants {
    pub fn abelian(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            labels,
            tensor: vec![0.0; n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    fn at(&self, a: usize, b: usize, g: usize) -> usize {
        let n = self.dim();
        (a * n + b) * n + g
    }

    pub fn get(&self, a: usize, b: usize, g: usize) -> f64 {
        self.tensor[self.at(a, b, g)]
    }

    /// Sets `[e_a, e_b]` to have coefficient `value` on `e_g`, and the
    /// antisymmetric partner.
    pub fn set_bracket(&mut self, a: usize, b: usize, g: usize, value: f64) {
        let i = self.at(a, b, g);
        let j = self.at(b, a, g);
        self.tensor[i] = value;
        self.tensor[j] = -value;
    }

    /// Overwrites a single slot with no antisymmetric partner. Only useful for
    /// building corrupted tables in tests.
    pub fn set_raw(&mut self, a: usize, b: usize, g: usize, value: f64) {
        let i = self.at(a, b, g);
        self.tensor[i] = value;
    }

    pub fn basis_element(&self, a: usize) -> AlgebraElement {
        let mut coeffs = vec![0.0; self.dim()];
        coeffs[a] = 1.0;
        AlgebraElement { coeffs }
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                for g in 0..n {
                    worst = worst.max((self.get(a, b, g) + self.get(b, a, g)).abs());
                }
            }
        }
        worst
    }

    /// Nonzero brackets `(a, b, g, coefficient)` with `a < b`.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, usize, f64)> {
        let n = self.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for g in 0..n {
                    let v = self.get(a, b, g);
                    if v != 0.0 {
                        out.push((a, b, g, v));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub coeffs: Vec<f64>,
}

impl AlgebraElement {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(invalid("coeffs", "non-finite entry"));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            coeffs: vec![0.0; n],
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

/// The central extension of ANH± for `params.dim` spatial dimensions.
pub fn anh_algebra(params: &AlgebraParams) -> Result<StructureConstants> {
    params.validate()?;
    let b = Basis::new(params.dim);
    let mut sc = StructureConstants::abelian(b.labels());
    let s = params.sign.pm();
    let w2 = params.omega * params.omega;
    let n = params.dim;

    for i in 0..n {
        sc.set_bracket(b.k(i), b.e(), b.p(i), 1.0);
        sc.set_bracket(b.p(i), b.e(), b.k(i), s * w2);
        sc.set_bracket(b.k(i), b.p(i), b.m(), 1.0);
    }

    if n >= 2 {
        let kk = 1.0 / (params.c * params.c);
        let pp = params.pp_coefficient();
        // pairs (i, j, rotation slot) with eps^k_ij = +1
        let pairs: Vec<(usize, usize, usize)> = if n == 2 {
            vec![(0, 1, 0)]
        } else {
            vec![(0, 1, 2), (1, 2, 0), (2, 0, 1)]
        };
        for (i, j, k) in pairs {
            sc.set_bracket(b.k(i), b.k(j), b.j(k), kk);
            sc.set_bracket(b.p(i), b.p(j), b.j(k), pp);
        }
    }
    Ok(sc)
}

/// `z^γ = c^γ_{αβ} x^α y^β`.
pub fn bracket(
    sc: &StructureConstants,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<AlgebraElement> {
    let n = sc.dim();
    for v in [x, y] {
        if v.coeffs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.coeffs.len(),
            });
        }
    }
    let mut z = vec![0.0; n];
    for a in 0..n {
        let xa = x.coeffs[a];
        if xa == 0.0 {
            continue;
        }
        for b in 0..n {
            let w = xa * y.coeffs[b];
            if w == 0.0 {
                continue;
            }
            for (g, zg) in z.iter_mut().enumerate() {
                *zg += sc.get(a, b, g) * w;
            }
        }
    }
    Ok(AlgebraElement { coeffs: z })
}

/// Max over basis triples of the coefficients of
/// `[[e_a, e_b], e_c] + [[e_b, e_c], e_a] + [[e_c, e_a], e_b]`.
pub fn jacobi_residual(sc: &StructureConstants) -> f64 {
    jacobi_worst_triple(sc).map_or(0.0, |t| t.residual)
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiViolation {
    pub triple: [usize; 3],
    pub residual: f64,
}

/// Same scan as [`jacobi_residual`], also naming the worst triple.
pub fn jacobi_worst_triple(sc: &StructureConstants) -> Option<JacobiViolation> {
    let n = sc.dim();
    // double[a][b][d] = sum_s c^s_ab c^d_sc for fixed c; computed per triple
    let nested = |a: usize, b: usize, c: usize, d: usize| -> f64 {
        (0..n).map(|s| sc.get(a, b, s) * sc.get(s, c, d)).sum()
    };
    let mut worst: Option<JacobiViolation> = None;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let v = nested(a, b, c, d) + nested(b, c, a, d) + nested(c, a, b, d);
                    if worst.as_ref().map_or(true, |w| v.abs() > w.residual) {
                        worst = Some(JacobiViolation {
                            triple: [a, b, c],
                            residual: v.abs(),
                        });
                    }
                }
            }
        }
    }
    worst
}

/// Largest coefficient of `[z, e_a]` over all basis elements `e_a`, for each
/// central slot `z`.
pub fn central_defect(sc: &StructureConstants, slots: &[usize]) -> f64 {
    let n = sc.dim();
    let mut worst = 0.0_f64;
    for &z in slots {
        for a in 0..n {
            for g in 0..n {
                worst = worst.max(sc.get(z, a, g).abs());
            }
        }
    }
    worst
}
