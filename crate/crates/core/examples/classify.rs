//! Differential-algebraicity by closure rules: every DA verdict comes with a
//! proof tree; anything the rules cannot reach is reported as unknown.
//!
//! ```bash
//! cargo run --example classify
//! ```

use difftrans::engine::{classify_expr, Classified, KnowledgeBase};
use difftrans::syntax::parse_expr;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kb = KnowledgeBase::standard();
    for text in ["exp(z*log(2*pi))*cos(pi*z/2)", "sin(exp(z)) + tan(z)^2", "D1[Gamma](z)", "exp(tan(z))"] {
        match classify_expr(&parse_expr(text)?, &kb)? {
            Classified::Algebraic(proof) => print!("{text}: DA\n{proof}"),
            Classified::Unknown(reason) => println!("{text}: unknown ({reason})"),
        }
    }
    Ok(())
}
