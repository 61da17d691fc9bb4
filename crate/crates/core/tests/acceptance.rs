//! Acceptance gate: one PASS/FAIL line per criterion at its pinned
//! tolerance. Oracles are rebuilt here from closed forms and a local
//! Gauss–Jordan inversion rather than taken from the library.

use ncphase::dynamics::{
    coupling_structure, group_action_1d, hamiltonian, hamiltonian_anh1d, integrate, orbit_trajectory, Method,
    ScenarioKind, ScenarioParams,
};
use ncphase::lie::{anh_algebra, AlgebraParams, Basis, PpConvention, Sign};
use ncphase::linalg::Mat;
use ncphase::ncps::{
    coordinate_bracket_table, couple, decouple, invertibility_margin, Chart, PhasePoint, PoissonStructure,
};
use ncphase::orbit::{
    a_matrix, casimir_u_with, kirillov_matrix, orbit_structure, resolve_casimir, sample_dual_points, CasimirForm,
    DualPoint, OrbitParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Rows = Vec<Vec<f64>>;

fn rows(m: &Mat) -> Rows {
    m.to_rows()
}

fn gauss_jordan(a: &Rows) -> Option<Rows> {
    let n = a.len();
    let mut w: Rows = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| w[x][col].abs().total_cmp(&w[y][col].abs()))?;
        if w[piv][col] == 0.0 {
            return None;
        }
        w.swap(col, piv);
        let d = w[col][col];
        w[col].iter_mut().for_each(|v| *v /= d);
        for r in 0..n {
            if r != col {
                let f = w[r][col];
                let pivot_row = w[col].clone();
                w[r].iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
            }
        }
    }
    Some(w.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn matmul(a: &Rows, b: &Rows) -> Rows {
    (0..a.len())
        .map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn diff(a: &Rows, b: &Rows) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn max_abs(a: &Rows) -> f64 {
    a.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max)
}

fn antisym(a: &Rows) -> f64 {
    let n = a.len();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (a[i][j] + a[j][i]).abs()).fold(0.0, f64::max)
}

fn identity(n: usize) -> Rows {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn eps2(s: f64) -> Rows {
    vec![vec![0.0, s], vec![-s, 0.0]]
}

fn block(a: &Rows, r0: usize, c0: usize, n: usize) -> Rows {
    (r0..r0 + n).map(|i| a[i][c0..c0 + n].to_vec()).collect()
}

fn sign_name(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "ANH+",
        Sign::Minus => "ANH-",
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Cyclic Jacobi sum over all basis triples, read off the structure
/// constants directly.
fn jacobi_max(p: &AlgebraParams) -> f64 {
    let sc = anh_algebra(p).unwrap();
    let n = sc.dim();
    let c = |a: usize, b: usize, g: usize| sc.get(a, b, g);
    let mut worst = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                for out in 0..n {
                    let mut s = 0.0;
                    for d in 0..n {
                        s += c(a, b, d) * c(d, g, out) + c(b, g, d) * c(d, a, out) + c(g, a, d) * c(d, b, out);
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = [0.0_f64; 2];
    let mut failing = Vec::new();
    for dim in 1..=3 {
        for sign in Sign::BOTH {
            let mut local = 0.0_f64;
            for _ in 0..20 {
                let (w, c, r) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
                let p = AlgebraParams::new(dim, sign, w, c, r);
                local = local.max(jacobi_max(&p));
                worst[1] = worst[1].max(jacobi_max(&p.with_convention(PpConvention::JacobiClosed)));
            }
            if local > 1e-12 {
                failing.push(format!("{dim}D {}", sign_name(sign)));
            }
            worst[0] = worst[0].max(local);
        }
    }
    outcome(
        worst[0] <= 1e-12,
        format!(
            "max residual {:.3e} (fails: {}); jacobi-closed [P,P] gives {:.3e}",
            worst[0],
            if failing.is_empty() { "none".into() } else { failing.join(", ") },
            worst[1]
        ),
    )
}

/// Central-difference gradient of U and |B(ξ)∇U|.
fn kernel_residual(params: &AlgebraParams, xi: &DualPoint, form: CasimirForm) -> f64 {
    let sc = anh_algebra(params).unwrap();
    let b = rows(&kirillov_matrix(&sc, xi).unwrap());
    let x0 = xi.coeffs();
    let grad: Vec<f64> = (0..x0.len())
        .map(|i| {
            let h = 1e-6 * x0[i].abs().max(1.0);
            let mut up = x0.clone();
            let mut dn = x0.clone();
            up[i] += h;
            dn[i] -= h;
            let f = |c: &[f64]| casimir_u_with(params, &DualPoint::from_coeffs(params.dim, c).unwrap(), form).unwrap();
            (f(&up) - f(&dn)) / (2.0 * h)
        })
        .collect();
    b.iter().map(|row| row.iter().zip(&grad).map(|(a, g)| a * g).sum::<f64>().abs()).fold(0.0, f64::max)
}

fn casimir_pass(convention: PpConvention, rng: &mut ChaCha8Rng) -> (bool, Vec<String>) {
    let mut ok = true;
    let mut notes = Vec::new();
    for dim in 1..=3 {
        for sign in Sign::BOTH {
            let params = if dim == 1 {
                AlgebraParams::one_dim(sign, rng.gen_range(0.5..2.0))
            } else {
                AlgebraParams::new(dim, sign, rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0))
            }
            .with_convention(convention);
            let pts = sample_dual_points(&params, 100, rng);
            let form = if dim == 3 || (dim == 2 && convention == PpConvention::JacobiClosed) {
                match resolve_casimir(&params, &pts).unwrap().selected {
                    Some(f) => f,
                    None => {
                        ok = false;
                        notes.push(format!("3D {}: no metric selected", sign_name(sign)));
                        continue;
                    }
                }
            } else {
                CasimirForm::Printed
            };
            let worst = pts.iter().map(|xi| kernel_residual(&params, xi, form)).fold(0.0, f64::max);
            if !(worst < 1e-6) {
                ok = false;
            }
            notes.push(format!("{dim}D {} {} {worst:.1e}", sign_name(sign), form.label()));
        }
    }
    (ok, notes)
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (ok, notes) = casimir_pass(PpConvention::Printed, &mut rng);
    let (closed_ok, closed_notes) = casimir_pass(PpConvention::JacobiClosed, &mut rng);
    outcome(
        ok,
        format!(
            "{}; jacobi-closed: {} [{}]",
            notes.join(", "),
            if closed_ok { "pass" } else { "fail" },
            closed_notes.iter().filter(|n| !n.starts_with("1D")).cloned().collect::<Vec<_>>().join(", ")
        ),
    )
}

/// Random non-degenerate orbit with its restricted Kirillov matrix;
/// `coherent` ties `c = ω r`.
fn random_orbit(rng: &mut ChaCha8Rng, dim: usize, coherent: bool) -> (OrbitParams, Rows) {
    loop {
        let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let (w, r) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
        let c = if coherent { w * r } else { rng.gen_range(0.5..2.0) };
        let alg = AlgebraParams::new(dim, sign, w, c, r);
        let xi = DualPoint::random(dim, rng);
        let sc = anh_algebra(&alg).unwrap();
        let basis = Basis::new(dim);
        let slots: Vec<usize> = (0..dim).map(|i| basis.k(i)).chain((0..dim).map(|i| basis.p(i))).collect();
        let b = rows(&kirillov_matrix(&sc, &xi).unwrap());
        let omega: Rows = slots.iter().map(|&i| slots.iter().map(|&j| b[i][j]).collect()).collect();
        if let Some(inv) = gauss_jordan(&omega) {
            if max_abs(&inv) < 1e6 {
                return (OrbitParams::new(alg, xi), omega);
            }
        }
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut inv_err, mut anti, mut block_err, mut kirillov_err) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for dim in [2, 3] {
        for _ in 0..50 {
            let (params, omega_ref) = random_orbit(&mut rng, dim, dim == 3);
            let o = orbit_structure(&params).unwrap();
            let omega = rows(&o.omega_matrix);
            kirillov_err = kirillov_err.max(diff(&omega, &omega_ref));
            let Some(inv) = o.poisson_matrix.as_ref().map(rows) else {
                inv_err = f64::INFINITY;
                continue;
            };
            inv_err = inv_err.max(diff(&matmul(&omega, &inv), &identity(2 * dim)));
            anti = anti.max(antisym(&inv));
            anti = anti.max(antisym(&rows(o.f.as_ref().unwrap()))).max(antisym(&rows(o.g.as_ref().unwrap())));
            if dim == 3 {
                let alg = &params.algebra;
                let m = params.xi.m;
                let a = rows(&a_matrix(alg, m, &params.xi.h));
                let beta = alg.sign.pm() * alg.omega * alg.omega;
                let a2 = matmul(&a, &a);
                let psi: Rows = (0..3).map(|i| (0..3).map(|j| identity(3)[i][j] + beta * a2[i][j]).collect()).collect();
                let psi_inv = gauss_jordan(&psi).unwrap();
                let a_psi = matmul(&a, &psi_inv);
                let mut expected = vec![vec![0.0; 6]; 6];
                for i in 0..3 {
                    for j in 0..3 {
                        expected[i][j] = beta * a_psi[i][j] / m;
                        expected[i][j + 3] = -psi_inv[i][j] / m;
                        expected[i + 3][j] = psi_inv[i][j] / m;
                        expected[i + 3][j + 3] = a_psi[i][j] / m;
                    }
                }
                let numeric = gauss_jordan(&omega_ref).unwrap();
                block_err = block_err.max(diff(&expected, &numeric) / max_abs(&numeric).max(1.0));
            }
        }
    }
    let pass = inv_err <= 1e-12 && anti <= 1e-12 && block_err <= 1e-12 && kirillov_err <= 1e-12;
    outcome(
        pass,
        format!(
            "|ΩΩ⁻¹ − I| {inv_err:.1e}, antisymmetry {anti:.1e}, Ψ block form (relative) {block_err:.1e}, Ω vs restricted B(ξ) {kirillov_err:.1e}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let (m, w, r) = (1.3, 0.7, 1.6);
    let c = w * r;
    let h = m * w * r * r;
    let omega0 = m * c * c / h;
    let mut notes = Vec::new();
    let xi = DualPoint::new(m, vec![h], vec![0.0; 2], vec![0.0; 2], 0.0);

    // closed-form Ω for the minus branch
    let minus = vec![
        vec![0.0, h / (c * c), m, 0.0],
        vec![-h / (c * c), 0.0, 0.0, m],
        vec![-m, 0.0, 0.0, -h / (r * r)],
        vec![0.0, -m, h / (r * r), 0.0],
    ];
    let mu = 2.0 * m;
    let pattern = vec![
        vec![0.0, -w / mu, -1.0 / mu, 0.0],
        vec![w / mu, 0.0, 0.0, -1.0 / mu],
        vec![1.0 / mu, 0.0, 0.0, 1.0 / (mu * omega0)],
        vec![0.0, 1.0 / mu, -1.0 / (mu * omega0), 0.0],
    ];
    let lib = orbit_structure(&OrbitParams::new(AlgebraParams::new(2, Sign::Minus, w, c, r), xi.clone())).unwrap();
    let inv = lib.poisson_matrix.as_ref().map(rows);
    let local = gauss_jordan(&minus).unwrap();
    let d_lib = inv.as_ref().map_or(f64::INFINITY, |i| diff(i, &pattern));
    let d_local = diff(&local, &pattern);
    let minus_ok = d_lib <= 1e-12 && d_local <= 1e-12 && diff(&rows(&lib.omega_matrix), &minus) <= 1e-15;
    notes.push(format!("ANH- vs 1/μ_e pattern, μ_e = 2m: {d_lib:.1e} (local inverse {d_local:.1e})"));

    let plus_params = OrbitParams::new(AlgebraParams::new(2, Sign::Plus, w, c, r), xi);
    let plus = orbit_structure(&plus_params).unwrap();
    let closed_plus = vec![
        vec![0.0, h / (c * c), m, 0.0],
        vec![-h / (c * c), 0.0, 0.0, m],
        vec![-m, 0.0, 0.0, h / (r * r)],
        vec![0.0, -m, -h / (r * r), 0.0],
    ];
    // det = (m² − h²/c²r²)² vanishes at h = m ω r²
    let det = (m * m - h * h / (c * c * r * r)).powi(2);
    let plus_ok = plus.degenerate && plus.poisson_matrix.is_none() && det.abs() < 1e-12
        && diff(&rows(&plus.omega_matrix), &closed_plus) <= 1e-15;
    notes.push(format!("ANH+ degenerate = {}, det Ω = {:.1e}", plus.degenerate, plus.det));
    outcome(minus_ok && plus_ok, notes.join("; "))
}

fn random_structure(rng: &mut ChaCha8Rng, n: usize) -> PoissonStructure {
    loop {
        let f = if n == 2 { Mat::epsilon2().scale(rng.gen_range(-2.0..2.0)) } else {
            Mat::cross_matrix(&[rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)])
        };
        let g = if n == 2 { Mat::epsilon2().scale(rng.gen_range(-2.0..2.0)) } else {
            Mat::cross_matrix(&[rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)])
        };
        if let Ok(ps) = PoissonStructure::from_coupling(f, g) {
            if invertibility_margin(&ps).unwrap().abs() > 0.1 && ps.coupling_jacobian().unwrap().abs() > 0.1 {
                return ps;
            }
        }
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0_f64;
    for i in 0..100 {
        let n = 2 + i % 2;
        let ps = random_structure(&mut rng, n);
        let v: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let w = PhasePoint::from_vec(&v, Chart::Coupled);
        let back = couple(&ps, &decouple(&ps, &w).unwrap()).unwrap();
        worst = back.to_vec().iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    let mut detected = true;
    for (eb, esbs) in [(2.0, -2.0), (4.0, -1.0), (-0.5, 8.0)] {
        let ps = PoissonStructure::constant(2, Mat::identity(2), Mat::epsilon2().scale(-eb), Mat::epsilon2().scale(-esbs))
            .unwrap();
        let margin = invertibility_margin(&ps).unwrap();
        let z = PhasePoint::coupled(vec![0.1, 0.2], vec![0.3, 0.4]);
        detected &= margin == 0.0 && decouple(&ps, &z).is_err();
    }
    outcome(
        worst <= 1e-12 && detected,
        format!("round trip {worst:.1e} over 100 structures; eB·e*B* = −4 detected: {detected}"),
    )
}

fn criterion_6() -> Outcome {
    let z = PhasePoint::coupled(vec![0.3, -0.7], vec![1.1, 0.4]);
    let zero = vec![vec![0.0; 2]; 2];
    let (eb, esbs) = (1.7, 0.6);
    let pend = ScenarioParams::synchronized_pendulum(0.4, 1.3, 0.9);
    let m_s = pend.k / (0.9_f64 * 0.9);
    let gamma = 1.0 + pend.m / m_s;
    let mut cases: Vec<(&str, PoissonStructure, [Rows; 3])> = vec![
        (
            "magnetic",
            PoissonStructure::from_coupling(Mat::epsilon2().scale(-eb), Mat::zeros(2, 2)).unwrap(),
            [eps2(-eb), identity(2), zero.clone()],
        ),
        (
            "dual",
            PoissonStructure::from_coupling(Mat::zeros(2, 2), Mat::epsilon2().scale(-esbs)).unwrap(),
            [zero.clone(), identity(2), eps2(-esbs)],
        ),
        (
            "mixed",
            coupling_structure(ScenarioKind::Pendulum, &pend).unwrap(),
            [eps2(-pend.eb()), vec![vec![gamma, 0.0], vec![0.0, gamma]], eps2(-pend.esbs())],
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (name, dim) in [("2D orbit", 2), ("3D orbit", 3)] {
        let (params, omega) = random_orbit(&mut rng, dim, false);
        let inv = gauss_jordan(&omega).unwrap();
        let o = orbit_structure(&params).unwrap();
        cases.push((
            name,
            PoissonStructure::from_orbit(&o).unwrap(),
            [block(&inv, 0, 0, dim), block(&inv, 0, dim, dim), block(&inv, dim, dim, dim)],
        ));
    }
    let mut worst = 0.0_f64;
    let mut notes = Vec::new();
    for (name, ps, [f, pairing, g]) in &cases {
        let zz = if ps.n() == 2 { z.clone() } else { PhasePoint::coupled(vec![0.1, 0.2, 0.3], vec![-0.4, 0.5, 0.6]) };
        let t = coordinate_bracket_table(ps, &zz).unwrap();
        let d = diff(&rows(&t.pi_pi), f).max(diff(&rows(&t.pi_x), pairing)).max(diff(&rows(&t.x_x), g));
        notes.push(format!("{name} {d:.1e}"));
        worst = worst.max(d);
    }
    outcome(worst <= 1e-12, notes.join(", "))
}

fn closed_flow(sign: Sign, m: f64, w: f64, p0: f64, q0: f64, t: f64) -> (f64, f64) {
    match sign {
        Sign::Minus => (p0 * (w * t).cos() - m * w * q0 * (w * t).sin(), p0 / (m * w) * (w * t).sin() + q0 * (w * t).cos()),
        Sign::Plus => (p0 * (w * t).cosh() + m * w * q0 * (w * t).sinh(), p0 / (m * w) * (w * t).sinh() + q0 * (w * t).cosh()),
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut rk, mut comp) = (0.0_f64, 0.0_f64);
    for sign in Sign::BOTH {
        let (m, w, p0, q0) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let h = hamiltonian_anh1d(sign, m, w).unwrap();
        let tr = integrate(&PoissonStructure::canonical(1), &h, &PhasePoint::darboux(vec![p0], vec![q0]), 1.0, 1e-3, Method::Rk4)
            .unwrap();
        let (p, q) = closed_flow(sign, m, w, p0, q0, 1.0);
        rk = rk.max((tr.last().p[0] - p).abs()).max((tr.last().q[0] - q).abs());
        for _ in 0..100 {
            let (t1, t2) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let (p, q) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let a = group_action_1d(sign, m, w, 0.0, 0.0, t2, p, q).unwrap();
            let lhs = group_action_1d(sign, m, w, 0.0, 0.0, t1, a.0, a.1).unwrap();
            let rhs = group_action_1d(sign, m, w, 0.0, 0.0, t1 + t2, p, q).unwrap();
            comp = comp.max((lhs.0 - rhs.0).abs()).max((lhs.1 - rhs.1).abs());
        }
    }
    outcome(rk < 1e-6 && comp <= 1e-10, format!("rk4 vs closed form {rk:.1e}, composition {comp:.1e}"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut notes = Vec::new();
    let mut pass = true;
    for (kind, params) in [
        (ScenarioKind::Electron, ScenarioParams::electron(1.0, 1.0, 2.0, [0.0; 2])),
        (ScenarioKind::Spring, ScenarioParams::spring(1.0, 1.0, 2.0, [0.0; 2])),
    ] {
        let h = hamiltonian(kind, &params).unwrap();
        let ps = coupling_structure(kind, &params).unwrap();
        let z0 = PhasePoint::coupled(vec![0.4, -0.2], vec![0.7, 0.1]);
        let tr = integrate(&ps, &h.coupled, &z0, 10.0, 1e-3, Method::DarbouxExactified).unwrap();
        let h0 = h.coupled.value(&z0);
        let drift = tr.states.iter().map(|z| (h.coupled.value(z) - h0).abs()).fold(0.0, f64::max);
        pass &= drift < 1e-6;
        notes.push(format!("{kind:?} H {drift:.1e}"));
    }
    for dim in 1..=3 {
        for sign in Sign::BOTH {
            let params = if dim == 1 {
                AlgebraParams::one_dim(sign, 1.1)
            } else {
                AlgebraParams::new(dim, sign, 1.1, 0.9, 1.2)
            };
            let pts = sample_dual_points(&params, 50, &mut rng);
            let form = if dim == 1 {
                CasimirForm::Printed
            } else {
                resolve_casimir(&params, &pts).unwrap().selected.unwrap_or(CasimirForm::Printed)
            };
            let tr = orbit_trajectory(&params, &pts[0], 10.0, 1e-3, Method::DarbouxExactified, form).unwrap();
            let dual = tr.dual.as_ref().unwrap();
            let u0 = casimir_u_with(&params, &dual[0], form).unwrap();
            let du = dual.iter().map(|x| (casimir_u_with(&params, x, form).unwrap() - u0).abs()).fold(0.0, f64::max);
            let dh = dual.iter().map(|x| (x.e - dual[0].e).abs()).fold(0.0, f64::max);
            pass &= du < 1e-6 && dh < 1e-6;
            notes.push(format!("{dim}D {} U ({}) {du:.1e}", sign_name(sign), form.label()));
        }
    }
    outcome(pass, notes.join(", "))
}

fn criterion_9() -> Outcome {
    let params = ScenarioParams::electron(1.2, 1.0, 1.5, [0.3, -0.2]);
    let h = hamiltonian(ScenarioKind::Electron, &params).unwrap();
    let ps = coupling_structure(ScenarioKind::Electron, &params).unwrap();
    let z0 = PhasePoint::darboux(vec![0.5, 0.1], vec![-0.2, 0.3]);
    let dar = integrate(&PoissonStructure::canonical(2), &h.darboux, &z0, 1.0, 1e-3, Method::Rk4).unwrap();
    let cpl = integrate(&ps, &h.coupled, &couple(&ps, &z0).unwrap(), 1.0, 1e-3, Method::Rk4).unwrap();
    let mut dev = 0.0_f64;
    for (a, b) in dar.states.iter().zip(&cpl.states) {
        let mapped = couple(&ps, a).unwrap().to_vec();
        dev = mapped.iter().zip(b.to_vec()).map(|(u, v)| (u - v).abs()).fold(dev, f64::max);
    }
    // m q̈ = eE on positions of either chart
    let newton = |states: &[PhasePoint], times: &[f64]| {
        let dt = times[1] - times[0];
        let mut worst = 0.0_f64;
        for i in 1..states.len() - 1 {
            for k in 0..2 {
                let acc = (states[i + 1].q[k] - 2.0 * states[i].q[k] + states[i - 1].q[k]) / (dt * dt);
                worst = worst.max((params.m * acc - params.e * params.e_field[k]).abs());
            }
        }
        worst
    };
    let (rd, rc) = (newton(&dar.states, &dar.times), newton(&cpl.states, &cpl.times));
    outcome(
        dev < 1e-6 && rd < 1e-4 && rc < 1e-4 && dar.len() == cpl.len(),
        format!("chart deviation {dev:.1e}, Newton residual Darboux {rd:.1e}, coupled {rc:.1e}"),
    )
}

fn criterion_10() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for ratio in [1e-2, 1e-4, 1e-6] {
        // m_s = k/ω² with k = ω = 1
        let p = ScenarioParams::synchronized_pendulum(ratio, 1.0, 1.0);
        let ps = coupling_structure(ScenarioKind::Pendulum, &p).unwrap();
        let t = coordinate_bracket_table(&ps, &PhasePoint::coupled(vec![0.2, 0.1], vec![-0.3, 0.5])).unwrap();
        let dev = diff(&rows(&t.pi_x), &identity(2));
        let exact = (dev - ratio).abs() <= 1e-12 * ratio.max(1e-12) + 4.0 * f64::EPSILON;
        pass &= dev <= ratio * (1.0 + 1e-9);
        notes.push(format!("{ratio:e}: {dev:.6e}{}", if exact { " = m/m_s" } else { "" }));
    }
    outcome(pass, notes.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("algebra validity", criterion_1),
        ("Casimir certification", criterion_2),
        ("orbit inversion", criterion_3),
        ("2D closed-form reconciliation", criterion_4),
        ("coupling round trip", criterion_5),
        ("bracket tables", criterion_6),
        ("flow correctness", criterion_7),
        ("conservation", criterion_8),
        ("covariance of Newton's equations", criterion_9),
        ("pendulum limit", criterion_10),
    ];
    let start = std::time::Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {:<34} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria pass ({:.1?})", criteria.len() - failed, criteria.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
