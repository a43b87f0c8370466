//! Certify one functional equation and check the certificate independently.
//!
//! `K(z) - K(z-1) = Gamma(z)`: if `K` were differentially algebraic, so
//! would be `Gamma`, which it is not.
//!
//! ```bash
//! cargo run --example certify_equation
//! ```

use difftrans::engine::{
    certify_transcendence, check_certificate, Classification, FunctionSymbol, FunctionalEquation, KnowledgeBase,
};
use difftrans::syntax::parse_expr;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut kb = KnowledgeBase::standard();
    kb.register(FunctionSymbol::new("K", Classification::Unknown).meromorphic())?;

    let eq = FunctionalEquation::new("kurepa", parse_expr("K(z) - K(z-1)")?, parse_expr("Gamma(z)")?, "K");
    let cert = certify_transcendence(&eq, &kb)?;
    print!("{cert}");

    let report = check_certificate(&cert, &kb);
    println!("checked {} nodes: accepted = {}", report.nodes, report.accepted);
    println!("{}", serde_json::to_string_pretty(&report)?);

    // Without the anchor there is nothing to reduce to.
    let plain = FunctionalEquation::new("plain", parse_expr("K(z+1)")?, parse_expr("z*K(z)")?, "K");
    println!("K(z+1) = z K(z): {}", certify_transcendence(&plain, &kb).unwrap_err());
    Ok(())
}
