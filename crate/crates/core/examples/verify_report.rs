//! The full property suite behind `ncphase verify`, under the printed
//! bracket tables and under the Jacobi-closed `[P, P]` coefficient.
//!
//! ```bash
//! cargo run --release --example verify_report
//! ```

use ncphase::lie::PpConvention;
use ncphase::verify::{run_verification, VerifyOptions};

fn main() {
    for convention in [PpConvention::Printed, PpConvention::JacobiClosed] {
        let report = run_verification(&VerifyOptions { seed: 42, convention });
        println!("convention {convention:?}: {:?}", report.summary);
        for c in &report.checks {
            let residual = c.residual.map_or_else(|| "-".to_string(), |r| format!("{r:.3e}"));
            println!("  {:<40} {:<5} {:>10}  {}", c.name, format!("{:?}", c.status), residual, c.convention_notes);
        }
    }
}
