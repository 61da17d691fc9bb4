//! Flat `key = value` configuration, flag overrides and validation into a
//! typed [`RunConfig`].

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use crate::dynamics::{Method, ScenarioKind, ScenarioParams};
use crate::error::{Error, Result};
use crate::lie::{PpConvention, Sign};

/// Keys accepted in config files, in flag spelling without the dashes.
pub const KEYS: &[&str] = &[
    "scenario", "sign", "m", "h", "omega", "c", "r", "e", "B", "estar", "Bstar", "k", "E", "Estar",
    "z0", "t-end", "dt", "method", "seed", "output", "format", "convention",
];

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Config { field: field.into(), reason: reason.into() }
}

/// Parses `key = value` lines. `#` starts a comment; `t_end` is accepted
/// for `t-end`.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(config_err(&format!("line {}", i + 1), "expected `key = value`"));
        };
        let key = match key.trim() {
            "t_end" => "t-end",
            k => k,
        };
        if !KEYS.contains(&key) {
            return Err(config_err(key, "unknown key"));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Simulate,
    Orbit,
    Verify,
    Couple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Electron,
    Spring,
    Pendulum,
    Anh1d,
    Anh2d,
    Anh3d,
}

impl Scenario {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "electron" => Self::Electron,
            "spring" => Self::Spring,
            "pendulum" => Self::Pendulum,
            "anh1d" => Self::Anh1d,
            "anh2d" => Self::Anh2d,
            "anh3d" => Self::Anh3d,
            _ => return None,
        })
    }

    pub fn kind(self) -> Option<ScenarioKind> {
        match self {
            Self::Electron => Some(ScenarioKind::Electron),
            Self::Spring => Some(ScenarioKind::Spring),
            Self::Pendulum => Some(ScenarioKind::Pendulum),
            _ => None,
        }
    }

    /// Spatial dimension of the orbit scenarios.
    pub fn orbit_dim(self) -> Option<usize> {
        match self {
            Self::Anh1d => Some(1),
            Self::Anh2d => Some(2),
            Self::Anh3d => Some(3),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitInputs {
    pub sign: Sign,
    pub m: f64,
    pub h: Vec<f64>,
    pub omega: f64,
    pub c: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub scenario: Scenario,
    pub params: ScenarioParams,
    pub orbit: OrbitInputs,
    pub convention: PpConvention,
    /// Darboux `(p, q)` for the coupling scenarios, `(p, q[, e])` for orbits,
    /// `(π, x)` for an inverse `couple`.
    pub z0: Option<Vec<f64>>,
    pub t_end: f64,
    pub dt: f64,
    pub method: Method,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub inverse: bool,
}

struct Values<'a>(&'a BTreeMap<String, String>);

impl Values<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => parse_finite(key, s),
        }
    }

    fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key).map(|s| parse_finite(key, s)).transpose()
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.raw(key)
            .map(|s| s.split(',').map(|v| parse_finite(key, v.trim())).collect())
            .transpose()
    }

    fn pair_or_zero(&self, key: &str) -> Result<[f64; 2]> {
        match self.list(key)? {
            None => Ok([0.0; 2]),
            Some(v) if v.len() == 2 => Ok([v[0], v[1]]),
            Some(v) => Err(config_err(key, format!("expected 2 components, got {}", v.len()))),
        }
    }

    fn choice<T>(&self, key: &str, default: T, parse: impl Fn(&str) -> Option<T>, expected: &str) -> Result<T> {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => parse(s).ok_or_else(|| config_err(key, format!("`{s}` is not one of {expected}"))),
        }
    }
}

fn parse_finite(key: &str, s: &str) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(config_err(key, "must be finite")),
        Err(_) => Err(config_err(key, format!("`{s}` is not a number"))),
    }
}

/// Builds a [`RunConfig`] from merged key-value pairs (flags already applied).
pub fn build_config(command: Command, values: &BTreeMap<String, String>, inverse: bool) -> Result<RunConfig> {
    let v = Values(values);
    let default_scenario = match command {
        Command::Orbit => None,
        _ => Some(Scenario::Electron),
    };
    let scenario = match v.raw("scenario") {
        Some(s) => Scenario::parse(s).ok_or_else(|| {
            config_err("scenario", format!("`{s}` is not one of electron, spring, pendulum, anh1d, anh2d, anh3d"))
        })?,
        None => default_scenario.ok_or_else(|| config_err("scenario", "required for orbit"))?,
    };
    if command == Command::Simulate && v.raw("scenario").is_none() {
        return Err(config_err("scenario", "required for simulate"));
    }

    let m = v.f64_or("m", 1.0)?;
    let omega_in = v.opt_f64("omega")?;
    let k = v.f64_or("k", 1.0)?;
    let mut params = match scenario {
        Scenario::Pendulum => ScenarioParams::synchronized_pendulum(m, k, omega_in.unwrap_or(1.0)),
        _ => ScenarioParams { m, k, e: 1.0, estar: 1.0, ..ScenarioParams::default() },
    };
    params.e = v.f64_or("e", params.e)?;
    params.b = v.f64_or("B", params.b)?;
    params.estar = v.f64_or("estar", params.estar)?;
    params.bstar = v.f64_or("Bstar", params.bstar)?;
    params.e_field = v.pair_or_zero("E")?;
    params.estar_field = v.pair_or_zero("Estar")?;

    // central charges: none in 1D, a scalar in 2D, a vector in 3D
    let h_len = match scenario.orbit_dim() {
        Some(2) => 1,
        Some(3) => 3,
        _ => 0,
    };
    let h = match v.list("h")? {
        None => vec![0.0; h_len],
        Some(h) if h_len == 0 && h.iter().all(|x| *x == 0.0) => Vec::new(),
        Some(h) if h.len() == h_len => h,
        Some(h) => {
            return Err(config_err(
                "h",
                format!("{} takes {h_len} component(s), got {}", v.raw("scenario").unwrap_or("this scenario"), h.len()),
            ))
        }
    };
    let orbit = OrbitInputs {
        sign: v.choice("sign", Sign::Minus, Sign::parse, "plus, minus")?,
        m,
        h,
        omega: omega_in.unwrap_or(1.0),
        c: v.f64_or("c", 1.0)?,
        r: v.f64_or("r", 1.0)?,
    };

    let t_end = v.f64_or("t-end", 10.0)?;
    let dt = v.f64_or("dt", 1e-3)?;
    if !(dt > 0.0) {
        return Err(config_err("dt", "must be positive"));
    }
    if !(t_end > 0.0) {
        return Err(config_err("t-end", "must be positive"));
    }
    if dt >= t_end && command == Command::Simulate {
        return Err(config_err("dt", format!("must be smaller than t-end = {t_end}")));
    }
    let seed = match v.raw("seed") {
        None => 42,
        Some(s) => s.parse::<u64>().map_err(|_| config_err("seed", format!("`{s}` is not a non-negative integer")))?,
    };
    let default_format = match command {
        Command::Simulate => Format::Csv,
        _ => Format::Json,
    };
    let format = v.choice(
        "format",
        default_format,
        |s| match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        },
        "csv, json",
    )?;
    if command == Command::Orbit && format == Format::Csv {
        return Err(config_err("format", "orbit emits json only"));
    }
    Ok(RunConfig {
        command,
        scenario,
        params,
        orbit,
        convention: v.choice("convention", PpConvention::Printed, PpConvention::parse, "printed, jacobi-closed")?,
        z0: v.list("z0")?,
        t_end,
        dt,
        method: v.choice("method", Method::DarbouxExactified, Method::parse, "rk4, darboux_exactified")?,
        seed,
        output: v.raw("output").map(PathBuf::from),
        format,
        inverse,
    })
}
