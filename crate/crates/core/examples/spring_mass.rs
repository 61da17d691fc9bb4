//! A spring in a dual magnetic field {x¹, x²} = −e*B*, and the dual Newton
//! law (1/k) p̈ = e*E* − e*k q×B* it obeys.
//!
//! ```bash
//! cargo run --example spring_mass
//! ```

use ncphase::dynamics::{
    coupling_structure, derived_params, dual_newton_residual, hamiltonian, integrate, DualLaw, Method, ScenarioKind,
    ScenarioParams,
};
use ncphase::ncps::PhasePoint;

fn main() -> ncphase::error::Result<()> {
    let params = ScenarioParams::spring(1.5, 1.0, 0.8, [0.2, 0.1]);
    let d = derived_params(ScenarioKind::Spring, &params)?;
    println!("omega = k e*B*/2 = {:?}, m_s = {:?}", d.omega_s, d.m_s);

    let h = hamiltonian(ScenarioKind::Spring, &params)?;
    let ps = coupling_structure(ScenarioKind::Spring, &params)?;
    let w0 = PhasePoint::coupled(vec![0.1, 0.3], vec![1.0, 0.0]);
    let tr = integrate(&ps, &h.darboux, &w0, 2.0, 1e-3, Method::Rk4)?;
    println!("energy drift {:.3e}", tr.max_energy_drift());
    println!(
        "dual law residual: bracket-consistent {:.3e}, literal sign {:.3e}",
        dual_newton_residual(&tr, &params, DualLaw::BracketConsistent)?,
        dual_newton_residual(&tr, &params, DualLaw::Printed)?
    );

    let zero_field = ScenarioParams::spring(1.5, 1.0, 0.8, [0.0, 0.0]);
    let h = hamiltonian(ScenarioKind::Spring, &zero_field)?;
    let ps = coupling_structure(ScenarioKind::Spring, &zero_field)?;
    let tr = integrate(&ps, &h.coupled, &w0, 10.0, 1e-3, Method::DarbouxExactified)?;
    println!("E* = 0, coupled chart, darboux_exactified: energy drift {:.3e}", tr.max_energy_drift());
    Ok(())
}
