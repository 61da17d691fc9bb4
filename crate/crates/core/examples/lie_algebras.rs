//! Structure constants of the six extended Newton–Hooke algebras and their
//! Jacobi residuals under both `[P, P]` conventions.
//!
//! ```bash
//! cargo run --example lie_algebras
//! ```

use ncphase::lie::{anh_algebra, jacobi_residual, jacobi_worst_triple, AlgebraParams, PpConvention, Sign};

fn main() -> ncphase::error::Result<()> {
    let sc = anh_algebra(&AlgebraParams::one_dim(Sign::Minus, 2.0))?;
    println!("1D ANH- brackets, omega = 2:");
    for (a, b, g, v) in sc.nonzero_brackets() {
        let l = sc.labels();
        println!("  [{}, {}] = {v} {}", l[a], l[b], l[g]);
    }

    println!("\n{:<5} {:<6} {:>14} {:>14}  worst triple (printed)", "dim", "sign", "printed", "jacobi-closed");
    for dim in 1..=3 {
        for sign in Sign::BOTH {
            let base = AlgebraParams::new(dim, sign, 1.3, 0.7, 2.1);
            let printed = anh_algebra(&base)?;
            let closed = anh_algebra(&base.with_convention(PpConvention::JacobiClosed))?;
            let worst = jacobi_worst_triple(&printed)
                .filter(|v| v.residual > 0.0)
                .map(|v| {
                    let l = printed.labels();
                    format!("({}, {}, {})", l[v.triple[0]], l[v.triple[1]], l[v.triple[2]])
                })
                .unwrap_or_else(|| "-".into());
            println!(
                "{dim:<5} {:<6} {:>14.3e} {:>14.3e}  {worst}",
                format!("{sign:?}"),
                jacobi_residual(&printed),
                jacobi_residual(&closed)
            );
        }
    }
    Ok(())
}
