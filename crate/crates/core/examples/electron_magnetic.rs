//! An electron with magnetic coupling {π₁, π₂} = −eB. The coupled-chart
//! Hamiltonian is the image of the Darboux one, so both charts describe the
//! same motion; evolving p²/2m with the magnetic bracket instead gives the
//! Lorentz circle.
//!
//! ```bash
//! cargo run --example electron_magnetic
//! ```

use ncphase::dynamics::{
    coupling_structure, derived_params, hamiltonian, integrate, Method, ScenarioKind, ScenarioParams,
};
use ncphase::ncps::{couple, PhasePoint, PoissonStructure};

fn main() -> ncphase::error::Result<()> {
    let params = ScenarioParams::electron(1.0, 1.0, 2.0, [0.0, 0.0]);
    let d = derived_params(ScenarioKind::Electron, &params)?;
    println!("omega = eB/2m = {:?}", d.omega_c);

    let h = hamiltonian(ScenarioKind::Electron, &params)?;
    let ps = coupling_structure(ScenarioKind::Electron, &params)?;
    let z0 = PhasePoint::darboux(vec![1.0, 0.0], vec![0.0, 0.0]);
    let w0 = couple(&ps, &z0)?;

    for method in [Method::Rk4, Method::DarbouxExactified] {
        let tr = integrate(&ps, &h.coupled, &w0, 10.0, 1e-3, method)?;
        println!(
            "{:<18} max |H(t) - H(0)| = {:.3e}, final (pi, x) = {:?} {:?}",
            method.name(),
            tr.max_energy_drift(),
            tr.last().p,
            tr.last().q
        );
    }

    let dar = integrate(&PoissonStructure::canonical(2), &h.darboux, &z0, 1.0, 1e-3, Method::Rk4)?;
    let cpl = integrate(&ps, &h.coupled, &w0, 1.0, 1e-3, Method::Rk4)?;
    let mut worst = 0.0_f64;
    for (a, b) in dar.states.iter().zip(&cpl.states) {
        let mapped = couple(&ps, a)?;
        for (u, v) in mapped.to_vec().iter().zip(b.to_vec()) {
            worst = worst.max((u - v).abs());
        }
    }
    println!("Darboux trajectory mapped to the coupled chart deviates by {worst:.3e} over t = 1");

    // one Lorentz period is 2π m / eB
    let period = std::f64::consts::TAU * params.m / params.eb();
    let start = PhasePoint::coupled(vec![1.0, 0.0], vec![0.0, 0.0]);
    let lorentz = integrate(&ps, &h.darboux, &start, period, 1e-3, Method::Rk4)?;
    let radius = lorentz.states.iter().map(|z| z.q[0].hypot(z.q[1])).fold(0.0, f64::max);
    println!(
        "Lorentz motion: diameter {radius:.6} (expected 2p/eB = {}), back at start after one period: {:?} {:?}",
        2.0 / params.eb(),
        lorentz.last().p,
        lorentz.last().q
    );
    Ok(())
}
