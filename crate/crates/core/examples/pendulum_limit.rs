//! The synchronized pendulum: both couplings at once, the induced pairing
//! {π_i, x^j} and its approach to δ as m/m_s → 0.
//!
//! ```bash
//! cargo run --example pendulum_limit
//! ```

use ncphase::dynamics::{
    check_synchronization, coupling_structure, derived_params, hamiltonian, integrate, Method, ScenarioKind,
    ScenarioParams,
};
use ncphase::linalg::Mat;
use ncphase::ncps::{coordinate_bracket_table, PhasePoint};

fn main() -> ncphase::error::Result<()> {
    for ratio in [1e-2, 1e-4, 1e-6] {
        let p = ScenarioParams::synchronized_pendulum(ratio, 1.0, 1.0);
        check_synchronization(&p)?;
        let d = derived_params(ScenarioKind::Pendulum, &p)?;
        let ps = coupling_structure(ScenarioKind::Pendulum, &p)?;
        let t = coordinate_bracket_table(&ps, &PhasePoint::coupled(vec![0.0; 2], vec![0.0; 2]))?;
        println!(
            "m/m_s = {ratio:e}: m_s = {:?}, pairing deviation from identity {:.6e}",
            d.m_s,
            t.pi_x.max_abs_diff(&Mat::identity(2))
        );
    }

    let p = ScenarioParams::synchronized_pendulum(0.5, 1.0, 1.0);
    let h = hamiltonian(ScenarioKind::Pendulum, &p)?;
    let ps = coupling_structure(ScenarioKind::Pendulum, &p)?;
    let tr = integrate(&ps, &h.coupled, &PhasePoint::coupled(vec![0.2, 0.0], vec![0.0, 1.0]), 10.0, 1e-3, Method::DarbouxExactified)?;
    println!("m = 0.5, k = 1, omega = 1: energy drift {:.3e}", tr.max_energy_drift());

    let broken = ScenarioParams { b: 3.0, ..p };
    match check_synchronization(&broken) {
        Ok(_) => println!("unexpectedly synchronized"),
        Err(e) => println!("B = 3: {e}"),
    }
    Ok(())
}
