//! One-dimensional Newton–Hooke flows: the closed-form solution, its group
//! realization with boosts and translations, and the Lie–Poisson flow on
//! the dual algebra that reproduces it.
//!
//! ```bash
//! cargo run --example anh_flows
//! ```

use ncphase::dynamics::{
    closed_form_flow_1d, group_action_1d, hamiltonian_anh1d, integrate, orbit_trajectory, printed_group_action_1d,
    Method,
};
use ncphase::lie::{AlgebraParams, Sign};
use ncphase::ncps::{PhasePoint, PoissonStructure};
use ncphase::orbit::{CasimirForm, DualPoint};

fn main() -> ncphase::error::Result<()> {
    let (m, w, p0, q0) = (1.0, 1.0, 0.5, -0.3);
    for sign in Sign::BOTH {
        let exact = closed_form_flow_1d(sign, m, w, p0, q0, 1.0)?;
        let h = hamiltonian_anh1d(sign, m, w)?;
        let tr = integrate(
            &PoissonStructure::canonical(1),
            &h,
            &PhasePoint::darboux(vec![p0], vec![q0]),
            1.0,
            1e-3,
            Method::Rk4,
        )?;
        println!(
            "{sign:?}: closed form {exact:?}, rk4 ({}, {}), energy drift {:.2e}",
            tr.last().p[0],
            tr.last().q[0],
            tr.max_energy_drift()
        );

        let a = group_action_1d(sign, m, w, 0.0, 0.0, 0.4, p0, q0)?;
        let b = group_action_1d(sign, m, w, 0.0, 0.0, 0.6, a.0, a.1)?;
        let c = group_action_1d(sign, m, w, 0.0, 0.0, 1.0, p0, q0)?;
        println!("  composition defect {:.2e}", (b.0 - c.0).abs().max((b.1 - c.1).abs()));
        let g = group_action_1d(sign, m, w, 0.3, 0.2, 1.0, p0, q0)?;
        let d = printed_group_action_1d(sign, m, w, 0.3, 0.2, 1.0, p0, q0)?;
        println!("  boosted and translated {g:?}, literal realization {d:?}");

        let xi0 = DualPoint::new(m, vec![], vec![m * q0], vec![p0], 0.25);
        let orbit = orbit_trajectory(&AlgebraParams::one_dim(sign, w), &xi0, 1.0, 1e-3, Method::DarbouxExactified, CasimirForm::Printed)?;
        println!(
            "  Lie–Poisson flow of H = e: ({}, {}), Casimir drift {:.2e}",
            orbit.last().p[0],
            orbit.last().q[0],
            orbit.max_casimir_drift().unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
