//! Run every statement of a `.dfa` corpus file through the engine.
//!
//! ```bash
//! cargo run --example certify_corpus
//! cargo run --example certify_corpus -- path/to/file.dfa
//! ```

use std::collections::BTreeSet;

use difftrans::engine::{build_corpus, check_certificate, KnowledgeBase, RESERVED_CONSTANTS};
use difftrans::syntax::parse_source;

const DEFAULT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/corpus.dfa");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| DEFAULT.to_string());
    let src = parse_source(&std::fs::read_to_string(&path)?)?;

    let kb = KnowledgeBase::standard();
    let functions: BTreeSet<String> = kb.symbols().map(|s| s.name.clone()).collect();
    let constants: BTreeSet<String> = RESERVED_CONSTANTS.iter().map(|s| s.to_string()).collect();
    src.link(&functions, &constants)?;

    let corpus = build_corpus(&src, kb);
    for cert in corpus.certificates() {
        let r = check_certificate(cert, &corpus.kb);
        println!("{:<24} {} is {}  ({} nodes, accepted {})", cert.name, cert.symbol, cert.conclusion, r.nodes, r.accepted);
    }
    for (name, err) in corpus.failures() {
        println!("{name:<24} FAILED: {err}");
    }
    Ok(())
}
