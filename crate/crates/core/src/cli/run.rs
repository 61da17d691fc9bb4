//! Execution of a validated [`RunConfig`] and rendering of its artifacts.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cli::config::{Command, Format, RunConfig, Scenario};
use crate::dynamics::{coupling_structure, hamiltonian, integrate, orbit_trajectory, Trajectory};
use crate::error::{Error, Result};
use crate::lie::AlgebraParams;
use crate::ncps::{couple, decouple, invertibility_margin, PhasePoint, PoissonStructure};
use crate::orbit::{
    casimir_u_with, effective_mass, orbit_structure, resolve_casimir, sample_dual_points, CasimirForm,
    CasimirResolution, DualPoint, Metric, OrbitParams, OrbitStructure,
};
use crate::verify::{run_verification, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ChecksFailed(usize),
}

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Config { field: field.into(), reason: reason.into() }
}

/// Runs the command and writes its artifact to `--output` or stdout.
pub fn execute(config: &RunConfig) -> Result<Outcome> {
    let (text, outcome) = render(config)?;
    match &config.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| config_err("output", format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(outcome)
}

/// The artifact of a run as text, without writing it anywhere.
pub fn render(config: &RunConfig) -> Result<(String, Outcome)> {
    match config.command {
        Command::Simulate => Ok((simulate(config)?, Outcome::Success)),
        Command::Orbit => Ok((orbit_dump(config)?, Outcome::Success)),
        Command::Couple => Ok((couple_echo(config)?, Outcome::Success)),
        Command::Verify => {
            let report = run_verification(&VerifyOptions { seed: config.seed, convention: config.convention });
            let text = match config.format {
                Format::Json => json(&report)?,
                Format::Csv => {
                    let mut s = String::from("name,status,residual,tolerance,convention_notes\n");
                    for c in &report.checks {
                        let status = serde_json::to_value(c.status).map_err(json_err)?;
                        let _ = writeln!(
                            s,
                            "{},{},{},{},\"{}\"",
                            c.name,
                            status.as_str().unwrap_or(""),
                            num(c.residual),
                            num(c.tolerance),
                            c.convention_notes.replace('"', "\"\"")
                        );
                    }
                    s
                }
            };
            let failed = report.summary.failed;
            Ok((text, if failed == 0 { Outcome::Success } else { Outcome::ChecksFailed(failed) }))
        }
    }
}

fn json_err(e: serde_json::Error) -> Error {
    config_err("output", format!("serialization failed: {e}"))
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(json_err)?;
    s.push('\n');
    Ok(s)
}

fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

fn algebra(config: &RunConfig, dim: usize) -> AlgebraParams {
    let o = &config.orbit;
    AlgebraParams::new(dim, o.sign, o.omega, o.c, o.r).with_convention(config.convention)
}

/// `z0 = (p, q[, e])` with `k = m q` (`μ_e q` in 2D).
fn dual_point(config: &RunConfig, params: &AlgebraParams) -> Result<DualPoint> {
    let n = params.dim;
    let z0 = config.z0.clone().unwrap_or_else(|| vec![0.0; 2 * n]);
    if z0.len() != 2 * n && z0.len() != 2 * n + 1 {
        return Err(config_err("z0", format!("expected {} or {} values, got {}", 2 * n, 2 * n + 1, z0.len())));
    }
    let m = config.orbit.m;
    let scale = if n == 2 {
        let mu = effective_mass(params, m, config.orbit.h[0]);
        if mu != 0.0 {
            mu
        } else {
            m
        }
    } else {
        m
    };
    let p = z0[..n].to_vec();
    let k = z0[n..2 * n].iter().map(|q| scale * q).collect();
    let e = z0.get(2 * n).copied().unwrap_or(0.0);
    Ok(DualPoint::new(m, config.orbit.h.clone(), k, p, e))
}

fn casimir_form(config: &RunConfig, params: &AlgebraParams) -> Result<(CasimirForm, Option<CasimirResolution>)> {
    if params.dim == 1 {
        return Ok((CasimirForm::Printed, None));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let pts = sample_dual_points(params, 100, &mut rng);
    let res = resolve_casimir(params, &pts)?;
    Ok((res.selected.unwrap_or(CasimirForm::Printed), Some(res)))
}

fn coupling_z0(config: &RunConfig) -> Result<PhasePoint> {
    let z0 = config.z0.clone().unwrap_or_else(|| vec![1.0, 0.0, 0.0, 0.0]);
    if z0.len() != 4 {
        return Err(config_err("z0", format!("expected 4 values, got {}", z0.len())));
    }
    Ok(PhasePoint::from_vec(&z0, crate::ncps::Chart::Darboux))
}

struct Rows {
    n: usize,
    rows: Vec<Vec<Option<f64>>>,
}

impl Rows {
    fn header(&self) -> Vec<String> {
        let mut h = vec!["t".to_string()];
        for prefix in ["p", "q", "pi", "x"] {
            h.extend((1..=self.n).map(|i| format!("{prefix}{i}")));
        }
        h.extend(["H", "U", "L"].map(String::from));
        h
    }

    fn from_trajectory(tr: &Trajectory, darboux: Option<&[PhasePoint]>, coupled: bool) -> Self {
        let n = tr.states.first().map_or(0, PhasePoint::n);
        let none = || vec![None; n];
        let some = |v: &[f64]| v.iter().map(|x| Some(*x)).collect::<Vec<_>>();
        let rows = (0..tr.len())
            .map(|i| {
                let z = &tr.states[i];
                let (pq, pix) = if coupled {
                    let d = darboux.map(|d| &d[i]);
                    let pq = d.map_or_else(|| [none(), none()].concat(), |d| [some(&d.p), some(&d.q)].concat());
                    (pq, [some(&z.p), some(&z.q)].concat())
                } else {
                    ([some(&z.p), some(&z.q)].concat(), [none(), none()].concat())
                };
                let mut row = vec![Some(tr.times[i])];
                row.extend(pq);
                row.extend(pix);
                row.push(Some(tr.energy[i]));
                row.push(tr.casimir.as_ref().map(|c| c[i]));
                row.push(tr.angular_momentum.as_ref().map(|l| l[i]));
                row
            })
            .collect();
        Self { n, rows }
    }

    fn csv(&self) -> String {
        let mut s = self.header().join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| num(*v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

#[derive(Serialize)]
struct TrajectoryDoc<'a> {
    scenario: Scenario,
    method: &'a str,
    t_end: f64,
    dt: f64,
    columns: Vec<String>,
    rows: &'a [Vec<Option<f64>>],
}

fn simulate(config: &RunConfig) -> Result<String> {
    let rows = if let Some(kind) = config.scenario.kind() {
        let h = hamiltonian(kind, &config.params)?;
        let ps = coupling_structure(kind, &config.params)?;
        let zc = couple(&ps, &coupling_z0(config)?)?;
        let tr = integrate(&ps, &h.coupled, &zc, config.t_end, config.dt, config.method)?;
        let darboux = match &tr.darboux {
            Some(d) => Some(d.clone()),
            None => tr.states.iter().map(|z| decouple(&ps, z)).collect::<Result<Vec<_>>>().ok(),
        };
        Rows::from_trajectory(&tr, darboux.as_deref(), true)
    } else {
        let dim = config.scenario.orbit_dim().expect("orbit scenario");
        let params = algebra(config, dim);
        let xi0 = dual_point(config, &params)?;
        let (form, _) = casimir_form(config, &params)?;
        let tr = orbit_trajectory(&params, &xi0, config.t_end, config.dt, config.method, form)?;
        Rows::from_trajectory(&tr, None, false)
    };
    match config.format {
        Format::Csv => Ok(rows.csv()),
        Format::Json => json(&TrajectoryDoc {
            scenario: config.scenario,
            method: config.method.name(),
            t_end: config.t_end,
            dt: config.dt,
            columns: rows.header(),
            rows: &rows.rows,
        }),
    }
}

#[derive(Serialize)]
struct CasimirValue {
    form: String,
    value: Option<f64>,
    note: Option<String>,
}

#[derive(Serialize)]
struct OrbitDump {
    scenario: Scenario,
    algebra: AlgebraParams,
    xi: DualPoint,
    structure: OrbitStructure,
    casimir: Vec<CasimirValue>,
    casimir_resolution: Option<CasimirResolution>,
}

fn orbit_dump(config: &RunConfig) -> Result<String> {
    let dim = config
        .scenario
        .orbit_dim()
        .ok_or_else(|| config_err("scenario", "orbit takes anh1d, anh2d or anh3d"))?;
    let params = algebra(config, dim);
    params.validate()?;
    let xi = dual_point(config, &params)?;
    let structure = orbit_structure(&OrbitParams::new(params, xi.clone()))?;
    let mut forms = vec![CasimirForm::Printed];
    if dim > 1 {
        forms.extend(Metric::ALL.map(CasimirForm::Metric));
    }
    let casimir = forms
        .into_iter()
        .map(|form| match casimir_u_with(&params, &xi, form) {
            Ok(v) => CasimirValue { form: form.label(), value: Some(v), note: None },
            Err(e) => CasimirValue { form: form.label(), value: None, note: Some(e.to_string()) },
        })
        .collect();
    let (_, casimir_resolution) = casimir_form(config, &params)?;
    json(&OrbitDump { scenario: config.scenario, algebra: params, xi, structure, casimir, casimir_resolution })
}

#[derive(Serialize)]
struct CoupleEcho {
    scenario: Scenario,
    direction: &'static str,
    margin: f64,
    jacobian: f64,
    input: PhasePoint,
    output: PhasePoint,
}

fn couple_echo(config: &RunConfig) -> Result<String> {
    let kind = config
        .scenario
        .kind()
        .ok_or_else(|| config_err("scenario", "couple takes electron, spring or pendulum"))?;
    let ps: PoissonStructure = coupling_structure(kind, &config.params)?;
    let mut input = coupling_z0(config)?;
    if config.z0.is_none() {
        input = PhasePoint::darboux(vec![0.0; 2], vec![0.0; 2]);
    }
    let (direction, input, output) = if config.inverse {
        let w = PhasePoint::coupled(input.p, input.q);
        let z = decouple(&ps, &w)?;
        ("decouple", w, z)
    } else {
        let w = couple(&ps, &input)?;
        ("couple", input, w)
    };
    let echo = CoupleEcho {
        scenario: config.scenario,
        direction,
        margin: invertibility_margin(&ps)?,
        jacobian: ps.coupling_jacobian()?,
        input,
        output,
    };
    match config.format {
        Format::Json => json(&echo),
        Format::Csv => {
            let (a, b) = if config.inverse { (["pi", "x"], ["p", "q"]) } else { (["p", "q"], ["pi", "x"]) };
            let header: Vec<String> = a
                .iter()
                .chain(&b)
                .flat_map(|pre| (1..=2).map(move |i| format!("{pre}{i}")))
                .collect();
            let cells: Vec<String> = echo
                .input
                .to_vec()
                .into_iter()
                .chain(echo.output.to_vec())
                .map(|v| num(Some(v)))
                .collect();
            Ok(format!("{}\n{}\n", header.join(","), cells.join(",")))
        }
    }
}
