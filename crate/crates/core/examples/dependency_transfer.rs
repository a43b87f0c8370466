//! Transcendence by transfer: `g(x, y) = x''x - x'^2 - y x^2` vanishes at
//! `x = Gamma`, `y = H1`, so `H1` cannot be differentially algebraic.
//!
//! ```bash
//! cargo run --example dependency_transfer
//! ```

use difftrans::diffpoly::DiffPoly;
use difftrans::engine::{check_certificate, dependency_transfer, Classification, FunctionSymbol, KnowledgeBase};
use difftrans::numeric::{ade_residual, SamplePlan};
use difftrans::syntax::parse_expr;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut kb = KnowledgeBase::standard();
    kb.register(FunctionSymbol::new("H1", Classification::Unknown).meromorphic())?;

    let g = DiffPoly::from_expr_in(&parse_expr("D2[x](z)*x(z) - D1[x](z)^2 - H1(z)*x(z)^2")?, "x")?;
    println!("witness: {g}");

    let plan = SamplePlan::real(&[1.5, 2.5, 3.7], 1e-8);
    let r = ade_residual("g-witness", &g, "Gamma", &plan)?;
    println!("g(Gamma, H1) max residual {:.2e}", r.max);

    let cert = dependency_transfer(&g, "Gamma", "H1", &kb)?;
    print!("{cert}");
    println!("accepted: {}", check_certificate(&cert, &kb).accepted);
    Ok(())
}
