//! The `.dfa` source format: declarations, equations, chains, transfers and
//! identities, with precise error locations.
//!
//! ```bash
//! cargo run --example dfa_source
//! ```

use difftrans::engine::FunctionalEquation;
use difftrans::syntax::{parse_source, Statement};

const SOURCE: &str = "\
# Alternating Kurepa function
symbol A : unknown meromorphic
equation alternating : A(z) + A(z-1) = Gamma(z+1)
    ; unknown A
    ; note entire inner shifts only
identity gamma-step : Gamma(z+1) = z*Gamma(z)
    ; samples 1.5, 2.5, 0.3+0.4i
    ; tolerance 1e-12
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let src = parse_source(SOURCE)?;
    for stmt in &src.statements {
        let kind = match stmt {
            Statement::Symbol(_) => "symbol",
            Statement::Parameter(_) => "parameter",
            Statement::Equation(_) => "equation",
            Statement::Chain(_) => "chain",
            Statement::Transfer(_) => "transfer",
            Statement::Identity(_) => "identity",
        };
        println!("{} {kind} {}", stmt.location(), stmt.name());
    }
    // Affine arguments of the unknown become inner functions automatically.
    for d in src.equations() {
        let eq = FunctionalEquation::new(&d.name, d.lhs.clone(), d.rhs.clone(), &d.unknown).with_inners(d.inners.iter().cloned());
        let inners: Vec<String> = eq.inners.iter().map(ToString::to_string).collect();
        println!("{}: {} = {}  [unknown {}, inners {}]", eq.name, eq.lhs, eq.rhs, eq.unknown, inners.join(", "));
    }

    let broken = "symbol A : unknown meromorphic\nequation bad : A(z) = Gamma(z +\n    ; unknown A\n";
    match parse_source(broken) {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("error: {e}"),
    }
    Ok(())
}
