//! The minimal-coupling transform π = p − F q/2, x = q − Gᵀ p/2, its
//! invertibility margin and the singular mixed case.
//!
//! ```bash
//! cargo run --example coupling
//! ```

use ncphase::linalg::Mat;
use ncphase::ncps::{couple, decouple, invertibility_margin, PhasePoint, PoissonStructure};

fn main() -> ncphase::error::Result<()> {
    let eps = Mat::epsilon2();
    let ps = PoissonStructure::from_coupling(eps.scale(-1.5), eps.scale(0.4))?;
    let z = PhasePoint::darboux(vec![0.3, -0.1], vec![1.0, 2.0]);
    let w = couple(&ps, &z)?;
    let back = decouple(&ps, &w)?;
    println!("margin det(I - FG/4) = {}", invertibility_margin(&ps)?);
    println!("jacobian of the map  = {}", ps.coupling_jacobian()?);
    println!("(p, q)  = {:?} {:?}", z.p, z.q);
    println!("(pi, x) = {:?} {:?}", w.p, w.q);
    println!("back    = {:?} {:?}", back.p, back.q);

    // eB e*B* = -4 kills the induced pairing
    let singular = PoissonStructure::constant(2, Mat::identity(2), eps.scale(-2.0), eps.scale(2.0))?;
    println!("\nsingular margin = {}", invertibility_margin(&singular)?);
    match decouple(&singular, &w) {
        Ok(_) => println!("unexpectedly invertible"),
        Err(e) => println!("decouple: {e}"),
    }
    Ok(())
}
