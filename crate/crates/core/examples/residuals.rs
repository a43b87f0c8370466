//! Numerical cross-checks: functional-equation residuals and the residual
//! of an algebraic differential equation at a special function.
//!
//! ```bash
//! cargo run --example residuals
//! ```

use difftrans::expr::C64;
use difftrans::numeric::{ade_residual, fe_residual, SamplePlan};
use difftrans::syntax::{parse_expr, parse_poly};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let plan = SamplePlan::new(vec![C64::new(0.5, 3.0), C64::new(2.5, 0.0), C64::new(-1.5, 0.0)], 1e-9);
    let zeta = fe_residual(
        "zeta reflection",
        &parse_expr("zeta(z)")?,
        &parse_expr("exp(z*log(2*pi))*zeta(1-z)/(2*Gamma(z)*cos(pi*z/2))")?,
        &plan,
    )?;
    println!("{}: max {:.2e}, passed {}", zeta.name, zeta.max, zeta.passed);

    let kurepa = fe_residual(
        "K1 recurrence",
        &parse_expr("K1(z) - K1(z-1)")?,
        &parse_expr("Gamma(z)")?,
        &SamplePlan::new(vec![C64::new(2.5, 0.0), C64::new(3.5, 0.0), C64::new(1.3, 0.7)], 1e-9),
    )?;
    println!("{}: max {:.2e}", kurepa.name, kurepa.max);

    // Points at a declared pole are skipped, with a reason.
    let skipped = fe_residual("poles", &parse_expr("Gamma(z+1)")?, &parse_expr("z*Gamma(z)")?, &SamplePlan::real(&[-2.0, 2.5], 1e-9))?;
    for s in &skipped.skipped {
        println!("skipped {}{:+}i: {}", s.z.re, s.z.im, s.reason);
    }

    let negative = ade_residual("exp equation at Gamma", &parse_poly("u1 - u0")?, "Gamma", &SamplePlan::real(&[2.5], 1e-8))?;
    println!("{}: {:.3} (a large residual is expected)", negative.name, negative.max);
    Ok(())
}
