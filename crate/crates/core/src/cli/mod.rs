//! Command-line front end: `simulate`, `orbit`, `verify` and `couple`.

pub mod config;
pub mod run;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{build_config, parse_config_text, Command, Format, RunConfig, Scenario};
pub use run::{execute, Outcome};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "ncphase", version, about = "Noncommutative phase spaces: couplings, coadjoint orbits, dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Integrate a scenario and write its trajectory.
    Simulate(Flags),
    /// Dump the orbit structure of an extended Newton–Hooke algebra.
    Orbit(Flags),
    /// Run the property suite and write the verification report.
    Verify(Flags),
    /// Map a state through the coupling transform.
    Couple(Flags),
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// electron, spring, pendulum, anh1d, anh2d or anh3d.
    #[arg(long)]
    pub scenario: Option<String>,
    /// plus or minus.
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    /// Central charge; comma-separated in 3D.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub e: Option<String>,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub estar: Option<String>,
    #[arg(long = "Bstar", allow_hyphen_values = true)]
    pub bstar: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Electric field `Ex,Ey`.
    #[arg(long = "E", allow_hyphen_values = true)]
    pub e_field: Option<String>,
    /// Dual electric field `Ex*,Ey*`.
    #[arg(long = "Estar", allow_hyphen_values = true)]
    pub estar_field: Option<String>,
    /// Initial state `p1..pn,q1..qn`; orbits accept a trailing `e`.
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<String>,
    #[arg(long = "t-end", allow_hyphen_values = true)]
    pub t_end: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<String>,
    /// rk4 or darboux_exactified.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub output: Option<String>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// [P, P] table: printed or jacobi-closed.
    #[arg(long)]
    pub convention: Option<String>,
    /// couple: treat `--z0` as `(π, x)` and map back to `(p, q)`.
    #[arg(long)]
    pub inverse: bool,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("scenario", &self.scenario),
            ("sign", &self.sign),
            ("m", &self.m),
            ("h", &self.h),
            ("omega", &self.omega),
            ("c", &self.c),
            ("r", &self.r),
            ("e", &self.e),
            ("B", &self.b),
            ("estar", &self.estar),
            ("Bstar", &self.bstar),
            ("k", &self.k),
            ("E", &self.e_field),
            ("Estar", &self.estar_field),
            ("z0", &self.z0),
            ("t-end", &self.t_end),
            ("dt", &self.dt),
            ("method", &self.method),
            ("seed", &self.seed),
            ("output", &self.output),
            ("format", &self.format),
            ("convention", &self.convention),
        ]
    }

    /// Config-file entries overlaid with the flags that were given.
    pub fn merged(&self) -> Result<BTreeMap<String, String>> {
        let mut values = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config { field: "config".into(), reason: format!("{}: {e}", path.display()) })?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        for (key, value) in self.pairs() {
            if let Some(v) = value {
                values.insert(key.to_string(), v.clone());
            }
        }
        Ok(values)
    }
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let (command, flags) = match self.command {
            Sub::Simulate(f) => (Command::Simulate, f),
            Sub::Orbit(f) => (Command::Orbit, f),
            Sub::Verify(f) => (Command::Verify, f),
            Sub::Couple(f) => (Command::Couple, f),
        };
        build_config(command, &flags.merged()?, flags.inverse)
    }
}

/// Parses, runs and reports; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = cli.into_config().and_then(|config| execute(&config));
    match result {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::ChecksFailed(n)) => {
            eprintln!("{n} verification check(s) failed");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
