//! Rank falsifier: sample a function and its derivatives, build the matrix of
//! candidate monomials and look for a null vector.
//!
//! ```bash
//! cargo run --release --example falsifier
//! ```

use difftrans::cli::render_falsifier;
use difftrans::numeric::{ade_falsify, FalsifySpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let stdout = &mut std::io::stdout();
    for spec in [
        FalsifySpec::new("exp", 1, 1, 0, 400, 7),
        FalsifySpec::new("sin", 2, 2, 0, 400, 7),
        FalsifySpec::new("Gamma", 2, 2, 0, 400, 7),
        FalsifySpec::new("Gamma", 2, 3, 2, 400, 7),
    ] {
        render_falsifier(&ade_falsify(&spec)?, stdout)?;
        println!();
    }
    Ok(())
}
