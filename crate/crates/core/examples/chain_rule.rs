//! Chain-rule coefficients for a composition with an inner function and the
//! transform of an equation for `g` into one for `g o e`.
//!
//! ```bash
//! cargo run --example chain_rule
//! ```

use difftrans::chain::{compose_transform, lambda_table, verify_chain_identity};
use difftrans::expr::C64;
use difftrans::numeric::standard_env;
use difftrans::syntax::{parse_expr, parse_poly};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e = parse_expr("z^2")?;
    let table = lambda_table(&e, 3)?;
    for k in 1..=3 {
        for (j, l) in table.row(k) {
            println!("lambda[{k},{j}] = {l}");
        }
    }

    // An arbitrary inner function keeps the entries symbolic.
    let generic = lambda_table(&parse_expr("e(z)")?, 3)?;
    println!("generic lambda[3,1] = {}", generic.get(3, 1));

    // exp solves u1 - u0; the transform is solved by exp(z^2).
    let f = parse_poly("u1 - u0")?;
    let t = compose_transform(&f, &e)?;
    println!("f1 = {}  ({})", t.poly, t.note);
    println!("f1(exp(z^2)) = {}", t.poly.apply(&parse_expr("exp(z^2)")?));

    let sin_f = compose_transform(&parse_poly("u2 + u0")?, &parse_expr("z + 1")?)?;
    println!("sin(z+1) solves {}", sin_f.poly);

    let samples: Vec<C64> = (1..=5).map(|i| C64::new(0.3 * i as f64, 0.1)).collect();
    let env = standard_env(C64::new(0.0, 0.0));
    let check = verify_chain_identity(&e, &parse_expr("Gamma(z)")?, 3, &samples, &env, 1e-8)?;
    println!("chain identity for Gamma o z^2: max residual {:.2e}", check.report.max);
    Ok(())
}
