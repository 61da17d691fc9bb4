//! Certifies the energy-like Casimir U against the kernel of the Kirillov
//! matrix and resolves which metric makes it exact.
//!
//! ```bash
//! cargo run --example casimir_certification
//! ```

use ncphase::lie::{AlgebraParams, PpConvention, Sign};
use ncphase::orbit::{resolve_casimir, sample_dual_points};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> ncphase::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for convention in [PpConvention::Printed, PpConvention::JacobiClosed] {
        println!("convention {convention:?}");
        for dim in 1..=3 {
            for sign in Sign::BOTH {
                let params = AlgebraParams::new(dim, sign, 1.2, 0.9, 1.1).with_convention(convention);
                let pts = sample_dual_points(&params, 100, &mut rng);
                let res = resolve_casimir(&params, &pts)?;
                let selected = res.selected.map_or_else(|| "none".to_string(), |f| f.label());
                println!("  {dim}D {sign:?}: selected {selected}");
                for c in &res.candidates {
                    println!("      {:<22} max residual {:.3e}", c.label, c.max_residual);
                }
            }
        }
    }
    Ok(())
}
