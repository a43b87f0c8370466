//! Exact expressions: parse, simplify to canonical form, differentiate and
//! evaluate numerically.
//!
//! ```bash
//! cargo run --example expressions
//! ```

use difftrans::expr::C64;
use difftrans::numeric::standard_env;
use difftrans::syntax::parse_expr;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Rational simplification over the atoms; no trigonometric identities.
    let e = parse_expr("(z^2 + 3*z + 2)/(z^2 - 1) + sin(z)/z")?;
    println!("canonical:   {e}");
    println!("derivative:  {}", e.differentiate());
    println!("d/dz (sin^2 + cos^2) = {}", parse_expr("sin(z)^2 + cos(z)^2")?.differentiate());
    println!("second:      {}", parse_expr("Gamma(z^2)")?.nth_derivative(2));

    let (num, den) = e.numer_denom();
    println!("numerator:   {num}");
    println!("denominator: {den}");

    // Atoms are the maximal applications that depend on z.
    let atoms = parse_expr("Gamma(z)*cos(pi*z/2) + exp(z*log(2))")?.function_atoms();
    let names: Vec<String> = atoms.iter().map(ToString::to_string).collect();
    println!("atoms:       {}", names.join(", "));

    let z = C64::new(1.5, 0.25);
    let v = parse_expr("Gamma(z)*zeta(z + 2)")?.eval_complex(&standard_env(z))?;
    println!("Gamma(z)*zeta(z+2) at {z} = {v}");

    // Printing and parsing back gives the same canonical form.
    assert_eq!(parse_expr(&e.to_string())?, e);
    Ok(())
}
