use std::collections::BTreeSet;

use difftrans::engine::{
    apply_mutation, build_corpus, check_certificate, select_mutations, Classification, KnowledgeBase, Rule,
    RESERVED_CONSTANTS,
};
use difftrans::syntax::parse_source;

const CORPUS: &str = include_str!("../../../corpus/corpus.dfa");

fn corpus() -> difftrans::engine::Corpus {
    let src = parse_source(CORPUS).unwrap();
    let kb = KnowledgeBase::standard();
    let functions: BTreeSet<String> = kb.symbols().map(|s| s.name.clone()).collect();
    let constants: BTreeSet<String> = RESERVED_CONSTANTS.iter().map(|s| s.to_string()).collect();
    src.link(&functions, &constants).unwrap();
    build_corpus(&src, kb)
}

#[test]
fn every_entry_is_certified_and_checked() {
    let c = corpus();
    let failures: Vec<_> = c.failures().collect();
    assert!(failures.is_empty(), "{failures:?}");
    let expected = [
        "zeta", "eta", "beta", "Lplus", "Lminus", "Lminus4", "K", "KM1", "KM2", "KM3", "K1", "A", "AM1", "AM2",
        "AM3", "A1", "H1", "Iofx0", "G", "H", "Rf", "GammaZeta", "GammaBeta",
    ];
    let certified: BTreeSet<&str> = c.certificates().map(|x| x.symbol.as_str()).collect();
    for name in expected {
        assert!(certified.contains(name), "{name} not certified");
        assert_eq!(c.kb.classification(name), Some(Classification::Transcendental));
    }
    for cert in c.certificates() {
        let r = check_certificate(cert, &c.kb);
        assert!(r.accepted, "{}: {:?}", cert.name, r.rejections);
        assert!(cert.root.leaves_are_grounded(), "{}", cert.name);
    }
}

#[test]
fn zeta_reduces_to_the_axiom() {
    let c = corpus();
    let zeta = c.certificates().find(|x| x.symbol == "zeta").unwrap();
    assert_eq!(zeta.root.rule, Rule::MainReduction);
    assert_eq!(zeta.root.premises[0].rule, Rule::AxiomGamma);
    let eta = c.certificates().find(|x| x.symbol == "eta").unwrap();
    assert_eq!(eta.root.premises[0], zeta.root);
}

#[test]
fn forty_mutations_are_rejected() {
    let c = corpus();
    let certs: Vec<_> = c.certificates().cloned().collect();
    let picked = select_mutations(&certs, 40, 7);
    assert_eq!(picked.len(), 40);
    for (i, m) in &picked {
        let r = check_certificate(&apply_mutation(&certs[*i], m), &c.kb);
        assert!(!r.accepted, "{}: {m} accepted", certs[*i].name);
    }
}
