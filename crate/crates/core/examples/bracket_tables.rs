//! Coordinate bracket tables {π,π}, {π,x}, {x,x} of the magnetic, dual,
//! mixed and orbit-derived structures.
//!
//! ```bash
//! cargo run --example bracket_tables
//! ```

use ncphase::lie::{AlgebraParams, Sign};
use ncphase::linalg::Mat;
use ncphase::ncps::{coordinate_bracket_table, PhasePoint, PoissonStructure};
use ncphase::orbit::{orbit_structure, DualPoint, OrbitParams};

fn main() -> ncphase::error::Result<()> {
    let eps = Mat::epsilon2();
    let orbit = orbit_structure(&OrbitParams::new(
        AlgebraParams::new(2, Sign::Minus, 1.0, 1.0, 1.0),
        DualPoint::new(1.0, vec![0.5], vec![0.0; 2], vec![0.0; 2], 0.0),
    ))?;
    let cases = [
        ("magnetic eB = 2", PoissonStructure::from_coupling(eps.scale(-2.0), Mat::zeros(2, 2))?),
        ("dual e*B* = 1", PoissonStructure::from_coupling(Mat::zeros(2, 2), eps.scale(-1.0))?),
        ("mixed (2, 0.5)", PoissonStructure::mixed_2d(2.0, 0.5)?),
        ("2D ANH- orbit", PoissonStructure::from_orbit(&orbit)?),
    ];
    let z = PhasePoint::coupled(vec![0.0; 2], vec![0.0; 2]);
    for (name, ps) in &cases {
        let t = coordinate_bracket_table(ps, &z)?;
        println!("{name}\n  {{pi,pi}} = {:?}\n  {{pi,x}}  = {:?}\n  {{x,x}}   = {:?}", t.pi_pi.to_rows(), t.pi_x.to_rows(), t.x_x.to_rows());
    }
    Ok(())
}
