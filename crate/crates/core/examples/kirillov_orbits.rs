//! Coadjoint orbit structures: the restricted Kirillov form Ω, its inverse
//! and the induced noncommutative blocks in 2D and 3D.
//!
//! ```bash
//! cargo run --example kirillov_orbits
//! ```

use ncphase::lie::{AlgebraParams, Sign};
use ncphase::orbit::{orbit_structure, symplectic_form, DualPoint, OrbitParams};

fn main() -> ncphase::error::Result<()> {
    let plane = OrbitParams::new(
        AlgebraParams::new(2, Sign::Plus, 1.0, 1.0, 1.0),
        DualPoint::new(2.0, vec![1.0], vec![0.0; 2], vec![0.0; 2], 0.0),
    );
    let o = orbit_structure(&plane)?;
    println!("2D ANH+, m = 2, h = 1: mu_e = {:?}, det = {}", o.mu_e, o.det);
    println!("Omega = {:?}", o.omega_matrix);
    println!("Omega^-1 = {:?}", o.poisson_matrix.as_ref().expect("non-degenerate"));
    println!("F = {:?}\npairing = {:?}\nG = {:?}", o.f, o.pairing, o.g);
    for c in &o.cross_checks {
        println!("  {:<32} {:?} {:?} {}", c.name, c.status, c.max_abs_diff, c.note);
    }

    // h = m ω r²: the plus branch collapses
    let collapse = OrbitParams::new(
        AlgebraParams::new(2, Sign::Plus, 1.0, 1.0, 1.0),
        DualPoint::new(1.0, vec![1.0], vec![0.0; 2], vec![0.0; 2], 0.0),
    );
    let o = orbit_structure(&collapse)?;
    println!("\n2D ANH+, h = m omega r^2: degenerate = {}, det = {}", o.degenerate, o.det);

    let space = OrbitParams::new(
        AlgebraParams::new(3, Sign::Minus, 0.8, 1.1, 1.4),
        DualPoint::new(1.5, vec![0.2, -0.4, 0.9], vec![0.0; 3], vec![0.0; 3], 0.0),
    );
    let o = orbit_structure(&space)?;
    println!("\n3D ANH-: A = {:?}", o.a_matrix.as_ref().expect("3D"));
    for c in &o.cross_checks {
        println!("  {:<32} {:?} {:?}", c.name, c.status, c.max_abs_diff);
    }
    let w = symplectic_form(&o)?;
    println!("dp^dq coefficients = {:?}", w.dp_dq);
    Ok(())
}
