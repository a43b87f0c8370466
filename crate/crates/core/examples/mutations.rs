//! Soundness check of the certificate checker: every single-node mutation
//! of a valid certificate must be rejected.
//!
//! ```bash
//! cargo run --example mutations
//! ```

use difftrans::engine::{
    apply_mutation, certify_transcendence, check_certificate, mutations, Classification, FunctionSymbol,
    FunctionalEquation, KnowledgeBase,
};
use difftrans::syntax::parse_expr;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut kb = KnowledgeBase::standard();
    kb.register(FunctionSymbol::new("H", Classification::Unknown).meromorphic())?;
    let eq = FunctionalEquation::new("hadamard", parse_expr("H(z+1)")?, parse_expr("z*H(z) + 1/Gamma(1-z)")?, "H");
    let cert = certify_transcendence(&eq, &kb)?;

    let all = mutations(&cert);
    let mut accepted = 0;
    for m in &all {
        let report = check_certificate(&apply_mutation(&cert, m), &kb);
        if report.accepted {
            accepted += 1;
        }
        if let Some(r) = report.rejections.first() {
            println!("{m:<28} rejected at {} ({}): {}", r.path, r.rule, r.reason);
        }
    }
    println!("{} mutations, {accepted} accepted", all.len());
    Ok(())
}
