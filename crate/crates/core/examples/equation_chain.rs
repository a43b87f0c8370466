//! A chain of equations, each member anchored on the previous one:
//! `K_m(z) - K_m(z-1) = K_{m-1}(z)` with `K_{-1} = Gamma`.
//!
//! ```bash
//! cargo run --example equation_chain
//! ```

use difftrans::engine::{certify_chain, Chain, Classification, FunctionSymbol, KnowledgeBase};
use difftrans::syntax::{parse_expr, CHAIN_MEMBER, CHAIN_PREVIOUS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut kb = KnowledgeBase::standard();
    let members = ["K0", "K1", "K2", "K3"];
    for m in members {
        kb.register(FunctionSymbol::new(m, Classification::Unknown).meromorphic())?;
    }
    let chain = Chain {
        name: "kurepa".into(),
        lhs: parse_expr(&format!("{CHAIN_MEMBER}(z) - {CHAIN_MEMBER}(z-1)"))?,
        rhs: parse_expr(&format!("{CHAIN_PREVIOUS}(z)"))?,
        base: parse_expr("Gamma(z)")?,
        members: members.iter().map(|s| s.to_string()).collect(),
    };
    for cert in certify_chain(&chain, &mut kb)? {
        println!("{}: depth {}, {} nodes", cert.name, cert.root.depth(), cert.root.node_count());
    }
    for m in members {
        println!("{m} is now {}", kb.classification(m).unwrap());
    }
    Ok(())
}
