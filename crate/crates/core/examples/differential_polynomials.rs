//! Differential polynomials: ring operations, the formal derivation and
//! application to a concrete function.
//!
//! ```bash
//! cargo run --example differential_polynomials
//! ```

use difftrans::syntax::{parse_expr, parse_poly};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = parse_poly("u2 + u0")?;
    let q = parse_poly("z*u1^2 - u0")?;
    println!("p = {p}   (ord {}, degree {:?})", p.ord(), p.degree());
    println!("q = {q}");
    println!("p + q = {}", p.add(&q));
    println!("p * q = {}", p.mul(&q));
    println!("D q   = {}", q.derive());

    // sin satisfies p, so p and all of its derivatives vanish on sin.
    let sin = parse_expr("sin(z)")?;
    for (k, r) in [p.clone(), p.derive(), p.derive().derive()].iter().enumerate() {
        println!("D^{k} p (sin) = {}", r.apply(&sin));
    }

    // The derivation commutes with application.
    let a = parse_expr("exp(z^2)")?;
    let lhs = q.derive().apply(&a);
    let rhs = q.apply(&a).differentiate();
    println!("D(q(a)) == (Dq)(a): {}", lhs.equivalent(&rhs));

    // The g witness of Gamma and the trigamma-type function H1.
    let g = parse_poly("u2*u0 - u1^2 - H1(z)*u0^2")?;
    println!("g = {g}, order {}", g.ord());
    Ok(())
}
