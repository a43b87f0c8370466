//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use difftrans::chain::{compose_transform, lambda_table, verify_chain_identity};
use difftrans::cli::{load_source, residual_reports, run};
use difftrans::engine::{
    apply_mutation, build_corpus, check_certificate, select_mutations, Classification, KnowledgeBase,
    RESERVED_CONSTANTS,
};
use difftrans::expr::{Expr, C64};
use difftrans::numeric::{ade_falsify, standard_env, FalsifySpec, Verdict};
use difftrans::syntax::{parse_expr, parse_poly};

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/corpus.dfa");
const RESIDUALS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/residuals.dfa");

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn x(s: &str) -> Expr {
    parse_expr(s).unwrap()
}

fn samples() -> Vec<C64> {
    (0..10).map(|i| C64::new(0.6 + 0.35 * i as f64, 0.45 - 0.1 * i as f64)).collect()
}

fn lambda_exactness() -> Outcome {
    let t = lambda_table(&x("e(z)"), 6).unwrap();
    let de = Expr::deriv("e", 1, Expr::var());
    let mut bad = Vec::new();
    for k in 1..=6 {
        if !(t.get(k, k) * Expr::pow(de.clone(), k as i64)).simplify().is_one() {
            bad.push(format!("lambda[{k},{k}]"));
        }
        if !t.get(k, 0).is_zero() {
            bad.push(format!("lambda[{k},0]"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "all diagonal and zero-column entries exact".into() } else { bad.join(", ") })
}

fn chain_identity() -> Outcome {
    let env = standard_env(C64::new(0.0, 0.0));
    let mut worst: f64 = 0.0;
    for (e, u) in [("z^2", "sin(z)"), ("2*z + 1", "exp(z)"), ("z + 1", "sin(z)")] {
        match verify_chain_identity(&x(e), &x(u), 4, &samples(), &env, 1e-8) {
            Ok(c) => worst = worst.max(c.report.max),
            Err(err) => return outcome(false, format!("{u} o {e}: {err}")),
        }
    }
    outcome(worst < 1e-8, format!("max residual {worst:.2e}"))
}

fn transport() -> Outcome {
    let mut worst: f64 = 0.0;
    for (f, a, e) in [("u1 - u0", "exp(z)", "2*z"), ("u2 + u0", "sin(z)", "z + 1")] {
        let t = compose_transform(&parse_poly(f).unwrap(), &x(e)).unwrap();
        let value = t.poly.apply(&x(a).substitute(&Expr::var(), &x(e)));
        for z in samples() {
            worst = worst.max(value.eval_complex(&standard_env(z)).unwrap().norm());
        }
    }
    outcome(worst < 1e-8, format!("max |f1(a o e)| {worst:.2e}"))
}

const CORPUS_SYMBOLS: &[&str] = &[
    "zeta", "eta", "beta", "Lplus", "Lminus", "K", "KM1", "KM2", "KM3", "K1", "A", "AM1", "AM2", "AM3", "A1", "H1",
    "Iofx0", "G", "H", "Rf", "GammaZeta", "GammaBeta",
];

fn corpus_certification() -> Outcome {
    let src = load_source(Path::new(CORPUS)).unwrap();
    let kb = KnowledgeBase::standard();
    let functions: BTreeSet<String> = kb.symbols().map(|s| s.name.clone()).collect();
    let constants: BTreeSet<String> = RESERVED_CONSTANTS.iter().map(|s| s.to_string()).collect();
    if let Err(e) = src.link(&functions, &constants) {
        return outcome(false, e.to_string());
    }
    let corpus = build_corpus(&src, kb);
    let failures: Vec<String> = corpus.failures().map(|(n, e)| format!("{n}: {e}")).collect();
    if !failures.is_empty() {
        return outcome(false, failures.join("; "));
    }
    let missing: Vec<&str> = CORPUS_SYMBOLS
        .iter()
        .copied()
        .filter(|s| corpus.kb.classification(s) != Some(Classification::Transcendental))
        .collect();
    let certs: Vec<_> = corpus.certificates().cloned().collect();
    let rejected_originals = certs.iter().filter(|c| !check_certificate(c, &corpus.kb).accepted).count();
    let picks = select_mutations(&certs, 40, 7);
    let survivors = picks.iter().filter(|(i, m)| check_certificate(&apply_mutation(&certs[*i], m), &corpus.kb).accepted).count();
    let passed = missing.is_empty() && rejected_originals == 0 && picks.len() == 40 && survivors == 0;
    outcome(
        passed,
        format!(
            "{} certificates, {} rejected, missing DT: [{}], {} of {} mutations accepted",
            certs.len(),
            rejected_originals,
            missing.join(", "),
            survivors,
            picks.len()
        ),
    )
}

const REQUIRED_IDENTITIES: &[&str] =
    &["zeta-reflection", "eta-bridge", "K1-recurrence", "A1-recurrence", "Gamma-recurrence", "g-witness"];

fn numeric_equations() -> Outcome {
    let src = load_source(Path::new(RESIDUALS)).unwrap();
    let reports = match residual_reports(&src, "all") {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let names: BTreeSet<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    let missing: Vec<&&str> = REQUIRED_IDENTITIES.iter().filter(|n| !names.contains(**n)).collect();
    let worst = reports.iter().map(|r| r.max).fold(0.0, f64::max);
    let empty = reports.iter().filter(|r| r.entries.is_empty()).count();
    let passed = missing.is_empty() && worst < 1e-8 && empty == 0 && reports.iter().all(|r| r.passed);
    outcome(passed, format!("{} identities, max residual {worst:.2e}, missing {missing:?}", reports.len()))
}

fn falsifier() -> Outcome {
    let mut notes = Vec::new();
    let mut passed = true;
    for (symbol, order, degree, want) in [("exp", 1, 1, "u1"), ("sin", 2, 2, "u2")] {
        let r = ade_falsify(&FalsifySpec::new(symbol, order, degree, 0, 400, 7)).unwrap();
        passed &= r.oracles_agree;
        match &r.verdict {
            Verdict::DependencyCandidate { coefficients, holdout_residual } => {
                let found = coefficients.iter().any(|c| c.column == want) && coefficients.iter().any(|c| c.column == "u0");
                passed &= found && *holdout_residual < 1e-8;
                notes.push(format!("{symbol}: hold-out {holdout_residual:.1e}"));
            }
            Verdict::NoDependencyFound => {
                passed = false;
                notes.push(format!("{symbol}: no dependency found"));
            }
        }
    }
    let r = ade_falsify(&FalsifySpec::new("Gamma", 2, 3, 2, 400, 7)).unwrap();
    let gamma_ok = r.sigma_min > 1e-6 && r.verdict == Verdict::NoDependencyFound;
    passed &= gamma_ok && r.oracles_agree;
    notes.push(format!(
        "Gamma: sigma_min {:.1e}, qr rank {} of {}, oracles agree {}",
        r.sigma_min, r.qr_rank, r.columns, r.oracles_agree
    ));
    outcome(passed, notes.join("; "))
}

fn cli_bytes(args: &[&str], out: &Path) -> Vec<u8> {
    let mut all = vec!["difftrans"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let (mut o, mut e) = (Vec::new(), Vec::new());
    run(all, &mut o, &mut e);
    std::fs::read(out).unwrap_or_default()
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("difftrans-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let runs: [&[&str]; 4] = [
        &["falsify", "--symbol", "Gamma", "--order", "2", "--degree", "3", "--coeff-degree", "2", "--samples", "400", "--seed", "7"],
        &["certify", CORPUS],
        &["residual", RESIDUALS],
        &["lambda", "--inner", "z^2", "--kmax", "4"],
    ];
    let mut differing = Vec::new();
    for (i, args) in runs.iter().enumerate() {
        let a = cli_bytes(args, &dir.join(format!("{i}-a.json")));
        let b = cli_bytes(args, &dir.join(format!("{i}-b.json")));
        if a.is_empty() || a != b {
            differing.push(args[0]);
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(differing.is_empty(), format!("{} commands compared, differing: {differing:?}", runs.len()))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 7] = [
        ("lambda table exactness", Duration::from_secs(5), lambda_exactness),
        ("chain identity", Duration::from_secs(10), chain_identity),
        ("solution transport", Duration::from_secs(60), transport),
        ("corpus certification", Duration::from_secs(30), corpus_certification),
        ("numeric functional equations", Duration::from_secs(60), numeric_equations),
        ("falsifier controls", Duration::from_secs(120), falsifier),
        ("determinism", Duration::from_secs(120), determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let took = start.elapsed();
        let ok = o.passed && took <= *budget;
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {} ({name}): {} [{:.2}s of {}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
