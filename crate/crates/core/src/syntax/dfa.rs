//! `.dfa` source files.
//!
//! One statement per line; a line that starts with whitespace continues the
//! previous statement. `#` starts a comment. A statement is a header
//! `keyword name : body` followed by `;`-separated clauses:
//!
//! ```text
//! parameter k
//! symbol   zeta : unknown meromorphic
//! symbol   w    : da entire nonzero-derivative ; witness u1 - u0
//! equation K    : K(z) - K(z-1) = Gamma(z) ; unknown K ; inner z - 1
//! chain    kur  : X(z) - X(z-1) = Y(z) ; base Gamma(z) ; members K, Km1
//! transfer H1   : D2[x](z)*x(z) - D1[x](z)^2 - y(z)*x(z)^2 ; known x = Gamma ; candidate y = H1
//! identity rec  : Gamma(z+1) = z*Gamma(z) ; samples 1.5, 2.5+0.5i ; tolerance 1e-10
//! ```
//!
//! Affine compositions of an equation's unknown (`K(z-1)`, `L(1-z)`) are
//! admissible without an `inner` clause.

use std::collections::BTreeSet;

use crate::diffpoly::DiffPoly;
use crate::engine::Classification;
use crate::expr::{Expr, C64};

use super::{parse_equation_at, parse_expr_at, Location, SyntaxError};

/// Placeholders bound by `chain` templates.
pub const CHAIN_MEMBER: &str = "X";
pub const CHAIN_PREVIOUS: &str = "Y";

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolDecl {
    pub at: Location,
    pub name: String,
    pub classification: Classification,
    pub entire: bool,
    pub meromorphic: bool,
    pub derivative_nonzero: bool,
    pub witness: Option<DiffPoly>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterDecl {
    pub at: Location,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquationDecl {
    pub at: Location,
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub unknown: String,
    /// Explicitly declared inner functions.
    pub inners: Vec<Expr>,
    pub note: String,
}

/// Equations `X_m` for each member, with `Y` the previous member (or `base`
/// for the first).
#[derive(Clone, Debug, PartialEq)]
pub struct ChainDecl {
    pub at: Location,
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub base: Expr,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransferDecl {
    pub at: Location,
    pub name: String,
    pub witness: Expr,
    pub known_placeholder: String,
    pub known: String,
    pub candidate_placeholder: String,
    pub candidate: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityDecl {
    pub at: Location,
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub samples: Vec<C64>,
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    Symbol(SymbolDecl),
    Parameter(ParameterDecl),
    Equation(EquationDecl),
    Chain(ChainDecl),
    Transfer(TransferDecl),
    Identity(IdentityDecl),
}

impl Statement {
    pub fn name(&self) -> &str {
        match self {
            Statement::Symbol(d) => &d.name,
            Statement::Parameter(d) => &d.name,
            Statement::Equation(d) => &d.name,
            Statement::Chain(d) => &d.name,
            Statement::Transfer(d) => &d.name,
            Statement::Identity(d) => &d.name,
        }
    }

    pub fn location(&self) -> Location {
        match self {
            Statement::Symbol(d) => d.at,
            Statement::Parameter(d) => d.at,
            Statement::Equation(d) => d.at,
            Statement::Chain(d) => d.at,
            Statement::Transfer(d) => d.at,
            Statement::Identity(d) => d.at,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SourceFile {
    pub statements: Vec<Statement>,
    /// Raw text of each statement, for locating names at link time.
    raw: Vec<Vec<(char, Location)>>,
}

impl SourceFile {
    pub fn equations(&self) -> impl Iterator<Item = &EquationDecl> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Equation(e) => Some(e),
            _ => None,
        })
    }

    pub fn identities(&self) -> impl Iterator<Item = &IdentityDecl> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Identity(e) => Some(e),
            _ => None,
        })
    }

    /// Check declaration before use. `functions` and `constants` are the
    /// names known before the file starts.
    pub fn link(&self, functions: &BTreeSet<String>, constants: &BTreeSet<String>) -> Result<(), SyntaxError> {
        let mut functions = functions.clone();
        let mut constants = constants.clone();
        for (stmt, raw) in self.statements.iter().zip(&self.raw) {
            let undeclared = |name: &str| SyntaxError::UndeclaredSymbol {
                at: locate(raw, name).unwrap_or(stmt.location()),
                name: name.to_string(),
            };
            let check = |exprs: &[&Expr], bound: &[&str], functions: &BTreeSet<String>, constants: &BTreeSet<String>| {
                for e in exprs {
                    if let Some(f) = e.function_symbols().into_iter().find(|f| !functions.contains(f) && !bound.contains(&f.as_str())) {
                        return Err(undeclared(&f));
                    }
                    if let Some(c) = e.constants().into_iter().find(|c| !constants.contains(c)) {
                        return Err(undeclared(&c));
                    }
                }
                Ok(())
            };
            let require = |name: &str, functions: &BTreeSet<String>| {
                if functions.contains(name) {
                    Ok(())
                } else {
                    Err(undeclared(name))
                }
            };
            match stmt {
                Statement::Symbol(d) => {
                    if let Some(w) = &d.witness {
                        check(&[&w.to_expr()], &[], &functions, &constants)?;
                    }
                    functions.insert(d.name.clone());
                }
                Statement::Parameter(d) => {
                    constants.insert(d.name.clone());
                }
                Statement::Equation(d) => {
                    require(&d.unknown, &functions)?;
                    let mut all = vec![&d.lhs, &d.rhs];
                    all.extend(d.inners.iter());
                    check(&all, &[], &functions, &constants)?;
                }
                Statement::Chain(d) => {
                    for m in &d.members {
                        require(m, &functions)?;
                    }
                    check(&[&d.lhs, &d.rhs, &d.base], &[CHAIN_MEMBER, CHAIN_PREVIOUS], &functions, &constants)?;
                }
                Statement::Transfer(d) => {
                    require(&d.known, &functions)?;
                    require(&d.candidate, &functions)?;
                    let bound = [d.known_placeholder.as_str(), d.candidate_placeholder.as_str()];
                    check(&[&d.witness], &bound, &functions, &constants)?;
                }
                Statement::Identity(d) => check(&[&d.lhs, &d.rhs], &[], &functions, &constants)?,
            }
        }
        Ok(())
    }
}

/// First whole-word occurrence of `name`.
fn locate(raw: &[(char, Location)], name: &str) -> Option<Location> {
    let word: Vec<char> = name.chars().collect();
    let is_ident = |c: char| c.is_alphanumeric() || c == '_';
    (0..raw.len()).find_map(|i| {
        let end = i + word.len();
        let fits = end <= raw.len() && raw[i..end].iter().map(|(c, _)| *c).eq(word.iter().copied());
        let left = i == 0 || !is_ident(raw[i - 1].0);
        let right = end == raw.len() || !is_ident(raw[end].0);
        (fits && left && right).then(|| raw[i].1)
    })
}

struct Clause {
    text: String,
    at: Location,
}

fn clause(chars: &[(char, Location)]) -> Option<Clause> {
    let start = chars.iter().position(|(c, _)| !c.is_whitespace())?;
    let end = chars.iter().rposition(|(c, _)| !c.is_whitespace())? + 1;
    Some(Clause { text: chars[start..end].iter().map(|(c, _)| c).collect(), at: chars[start].1 })
}

impl Clause {
    /// Split off a leading identifier; the rest keeps its location.
    fn word(&self) -> (String, Clause) {
        let chars: Vec<char> = self.text.chars().collect();
        let n = chars.iter().take_while(|c| c.is_alphanumeric() || **c == '_' || **c == '-').count();
        let head: String = chars[..n].iter().collect();
        let ws = chars[n..].iter().take_while(|c| c.is_whitespace()).count();
        let mut at = self.at;
        for c in &chars[..n + ws] {
            if *c == '\n' {
                at.line += 1;
                at.column = 1;
            } else {
                at.column += 1;
            }
        }
        (head, Clause { text: chars[n + ws..].iter().collect(), at })
    }

    fn error(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.at, msg.into())
    }

    fn expr(&self) -> Result<Expr, SyntaxError> {
        Ok(parse_expr_at(&self.text, self.at)?.simplify())
    }

    fn equation(&self) -> Result<(Expr, Expr), SyntaxError> {
        let (l, r) = parse_equation_at(&self.text, self.at)?;
        Ok((l.simplify(), r.simplify()))
    }

    fn identifier(&self) -> Result<String, SyntaxError> {
        let (w, rest) = self.word();
        if w.is_empty() || w.contains('-') || !rest.text.is_empty() || w.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(self.error(format!("expected a name, found `{}`", self.text)));
        }
        Ok(w)
    }

    /// Comma-separated pieces with their own locations.
    fn list(&self) -> Vec<Clause> {
        let mut out = Vec::new();
        let mut cur: Vec<(char, Location)> = Vec::new();
        let mut at = self.at;
        for c in self.text.chars() {
            if c == ',' {
                out.extend(clause(&cur));
                cur.clear();
            } else {
                cur.push((c, at));
            }
            if c == '\n' {
                at.line += 1;
                at.column = 1;
            } else {
                at.column += 1;
            }
        }
        out.extend(clause(&cur));
        out
    }

    /// `p = NAME`.
    fn binding(&self) -> Result<(String, String), SyntaxError> {
        let (p, rest) = self.word();
        let Some(value) = rest.text.strip_prefix('=') else {
            return Err(rest.error("expected `=`"));
        };
        let value = Clause { text: value.trim().to_string(), at: Location { column: rest.at.column + 1, ..rest.at } };
        Ok((p, value.identifier()?))
    }
}

/// Parse a complex literal: `2.5`, `-1.5`, `3i`, `0.5+3i`, `1.3-0.7i`.
pub fn parse_complex(s: &str) -> Option<C64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().ok().map(|re| C64::new(re, 0.0));
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t.parse().ok()?,
    };
    Some(C64::new(re.parse().ok()?, im))
}

/// Statement texts, with continuation lines joined and comments removed.
fn split_statements(text: &str) -> Result<Vec<Vec<(char, Location)>>, SyntaxError> {
    let mut out: Vec<Vec<(char, Location)>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let chars: Vec<(char, Location)> =
            line.chars().enumerate().map(|(j, c)| (c, Location { line: i + 1, column: j + 1 })).collect();
        if line.starts_with(char::is_whitespace) {
            let Some(cur) = out.last_mut() else {
                let col = line.chars().take_while(|c| c.is_whitespace()).count() + 1;
                return Err(SyntaxError::new(
                    Location { line: i + 1, column: col },
                    "continuation line without a statement".into(),
                ));
            };
            let last = cur.last().map(|(_, l)| *l).unwrap();
            cur.push(('\n', Location { column: last.column + 1, ..last }));
            cur.extend(chars);
        } else {
            out.push(chars);
        }
    }
    Ok(out)
}

fn split_clauses(raw: &[(char, Location)]) -> Vec<Clause> {
    raw.split(|(c, _)| *c == ';').filter_map(clause).collect()
}

pub fn parse_source(text: &str) -> Result<SourceFile, SyntaxError> {
    let mut statements = Vec::new();
    let mut raws = Vec::new();
    for raw in split_statements(text)? {
        let mut clauses = split_clauses(&raw).into_iter();
        let head = clauses.next().expect("statement is not blank");
        let at = head.at;
        let (keyword, rest) = head.word();
        let extra: Vec<Clause> = clauses.collect();
        let stmt = if keyword == "parameter" {
            reject_clauses(&extra)?;
            Statement::Parameter(ParameterDecl { at, name: rest.identifier()? })
        } else {
            let (name, rest) = rest.word();
            if name.is_empty() {
                return Err(rest.error("expected a statement name"));
            }
            let Some(body) = rest.text.strip_prefix(':') else {
                return Err(rest.error("expected `:` after the statement name"));
            };
            let lead = body.chars().take_while(|c| c.is_whitespace() && *c != '\n').count();
            let body = Clause {
                text: body[lead..].to_string(),
                at: Location { column: rest.at.column + 1 + lead, ..rest.at },
            };
            match keyword.as_str() {
                "symbol" => Statement::Symbol(symbol(at, name, &body, &extra)?),
                "equation" => Statement::Equation(equation(at, name, &body, &extra)?),
                "chain" => Statement::Chain(chain(at, name, &body, &extra)?),
                "transfer" => Statement::Transfer(transfer(at, name, &body, &extra)?),
                "identity" => Statement::Identity(identity(at, name, &body, &extra)?),
                other => return Err(SyntaxError::new(at, format!("unknown statement `{other}`"))),
            }
        };
        statements.push(stmt);
        raws.push(raw);
    }
    Ok(SourceFile { statements, raw: raws })
}

fn reject_clauses(extra: &[Clause]) -> Result<(), SyntaxError> {
    match extra.first() {
        Some(c) => Err(c.error("unexpected clause")),
        None => Ok(()),
    }
}

fn unknown_clause(c: &Clause, key: &str) -> SyntaxError {
    c.error(format!("unknown clause `{key}`"))
}

fn symbol(at: Location, name: String, body: &Clause, extra: &[Clause]) -> Result<SymbolDecl, SyntaxError> {
    let mut words = body.text.split_whitespace();
    let classification = match words.next() {
        Some("da") => Classification::Algebraic,
        Some("dt") => Classification::Transcendental,
        Some("unknown") => Classification::Unknown,
        _ => return Err(body.error("expected a classification: `da`, `dt` or `unknown`")),
    };
    let mut d = SymbolDecl {
        at,
        name,
        classification,
        entire: false,
        meromorphic: false,
        derivative_nonzero: false,
        witness: None,
        note: String::new(),
    };
    for w in words {
        match w {
            "entire" => {
                d.entire = true;
                d.meromorphic = true;
            }
            "meromorphic" => d.meromorphic = true,
            "nonzero-derivative" => d.derivative_nonzero = true,
            other => return Err(body.error(format!("unknown flag `{other}`"))),
        }
    }
    for c in extra {
        let (key, rest) = c.word();
        match key.as_str() {
            "witness" => {
                let e = parse_expr_at(&rest.text, rest.at)?;
                d.witness = Some(DiffPoly::from_expr(&e).map_err(|m| rest.error(m))?);
            }
            "note" => d.note = rest.text,
            _ => return Err(unknown_clause(c, &key)),
        }
    }
    Ok(d)
}

fn equation(at: Location, name: String, body: &Clause, extra: &[Clause]) -> Result<EquationDecl, SyntaxError> {
    let (lhs, rhs) = body.equation()?;
    let mut unknown = None;
    let mut inners = Vec::new();
    let mut note = String::new();
    for c in extra {
        let (key, rest) = c.word();
        match key.as_str() {
            "unknown" => unknown = Some(rest.identifier()?),
            "inner" => {
                for item in rest.list() {
                    inners.push(item.expr()?);
                }
            }
            "note" => note = rest.text,
            _ => return Err(unknown_clause(c, &key)),
        }
    }
    let unknown = unknown.ok_or_else(|| SyntaxError::new(at, format!("equation `{name}` needs an `unknown` clause")))?;
    Ok(EquationDecl { at, name, lhs, rhs, unknown, inners, note })
}

fn chain(at: Location, name: String, body: &Clause, extra: &[Clause]) -> Result<ChainDecl, SyntaxError> {
    let (lhs, rhs) = body.equation()?;
    let mut base = None;
    let mut members = Vec::new();
    for c in extra {
        let (key, rest) = c.word();
        match key.as_str() {
            "base" => base = Some(rest.expr()?),
            "members" => {
                for item in rest.list() {
                    members.push(item.identifier()?);
                }
            }
            _ => return Err(unknown_clause(c, &key)),
        }
    }
    let base = base.ok_or_else(|| SyntaxError::new(at, format!("chain `{name}` needs a `base` clause")))?;
    if members.is_empty() {
        return Err(SyntaxError::new(at, format!("chain `{name}` needs a `members` clause")));
    }
    Ok(ChainDecl { at, name, lhs, rhs, base, members })
}

fn transfer(at: Location, name: String, body: &Clause, extra: &[Clause]) -> Result<TransferDecl, SyntaxError> {
    let witness = parse_expr_at(&body.text, body.at)?.simplify();
    let mut known = None;
    let mut candidate = None;
    for c in extra {
        let (key, rest) = c.word();
        match key.as_str() {
            "known" => known = Some(rest.binding()?),
            "candidate" => candidate = Some(rest.binding()?),
            _ => return Err(unknown_clause(c, &key)),
        }
    }
    let need = |what: &str| SyntaxError::new(at, format!("transfer `{name}` needs a `{what}` clause"));
    let (known_placeholder, known) = known.ok_or_else(|| need("known"))?;
    let (candidate_placeholder, candidate) = candidate.ok_or_else(|| need("candidate"))?;
    Ok(TransferDecl { at, name, witness, known_placeholder, known, candidate_placeholder, candidate })
}

fn identity(at: Location, name: String, body: &Clause, extra: &[Clause]) -> Result<IdentityDecl, SyntaxError> {
    let (lhs, rhs) = body.equation()?;
    let mut samples = Vec::new();
    let mut tolerance = None;
    for c in extra {
        let (key, rest) = c.word();
        match key.as_str() {
            "samples" => {
                for item in rest.list() {
                    let z = parse_complex(&item.text)
                        .ok_or_else(|| item.error(format!("bad complex number `{}`", item.text)))?;
                    samples.push(z);
                }
            }
            "tolerance" => {
                let t: f64 = rest.text.trim().parse().map_err(|_| rest.error("bad tolerance"))?;
                tolerance = Some(t);
            }
            _ => return Err(unknown_clause(c, &key)),
        }
    }
    if samples.is_empty() {
        return Err(SyntaxError::new(at, format!("identity `{name}` needs a `samples` clause")));
    }
    Ok(IdentityDecl { at, name, lhs, rhs, samples, tolerance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn names(v: &[&str]) -> BTreeSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn kurepa_equation() {
        let src = parse_source("symbol K : unknown meromorphic\nequation K : K(z) - K(z-1) = Gamma(z) ; unknown K\n").unwrap();
        let eq = src.equations().next().unwrap();
        assert_eq!(eq.unknown, "K");
        assert_eq!(eq.lhs, parse_expr("K(z) - K(z-1)").unwrap());
        assert_eq!(eq.rhs, parse_expr("Gamma(z)").unwrap());
        src.link(&names(&["Gamma"]), &names(&["pi"])).unwrap();
    }

    #[test]
    fn continuation_lines_and_comments() {
        let text = "# corpus\nsymbol f : unknown meromorphic  # the unknown\nequation e : f(z+1) =\n    z*f(z)\n    ; unknown f\n";
        let src = parse_source(text).unwrap();
        assert_eq!(src.statements.len(), 2);
        let eq = src.equations().next().unwrap();
        assert_eq!(eq.rhs, parse_expr("z*f(z)").unwrap());
    }

    #[test]
    fn error_locations() {
        let err = parse_source("symbol K : unknown\nequation K : K(z) - = Gamma(z) ; unknown K\n").unwrap_err();
        assert_eq!(err.location(), Location { line: 2, column: 21 });
        let err = parse_source("symbol K : unknown\nequation K : K(z)\n  - K(z-1) = Gamma(z) +\n ; unknown K\n").unwrap_err();
        assert_eq!(err.location().line, 3);
        let err = parse_source("frobnicate x : 1").unwrap_err();
        assert_eq!(err.location(), Location { line: 1, column: 1 });
    }

    #[test]
    fn undeclared_symbols_are_located() {
        let src = parse_source("symbol K : unknown\nequation K : K(z) - K(z-1) = Gamma(z) ; unknown K\n").unwrap();
        let err = src.link(&BTreeSet::new(), &BTreeSet::new()).unwrap_err();
        assert_eq!(err, SyntaxError::UndeclaredSymbol { at: Location { line: 2, column: 30 }, name: "Gamma".into() });
        let src = parse_source("equation K : k*K(z) = Gamma(z) ; unknown K\n").unwrap();
        let err = src.link(&names(&["Gamma", "K"]), &BTreeSet::new()).unwrap_err();
        assert!(matches!(err, SyntaxError::UndeclaredSymbol { ref name, .. } if name == "k"));
    }

    #[test]
    fn declaration_must_precede_use() {
        let src = parse_source("equation K : K(z) - K(z-1) = Gamma(z) ; unknown K\nsymbol K : unknown\n").unwrap();
        assert!(src.link(&names(&["Gamma"]), &BTreeSet::new()).is_err());
    }

    #[test]
    fn other_statements() {
        let text = "parameter k\n\
                    symbol w : da entire nonzero-derivative ; witness u1 - u0 ; note exp in disguise\n\
                    chain c : X(z) - X(z-1) = Y(z) ; base Gamma(z) ; members K, Km1\n\
                    transfer t : D2[x](z)*x(z) - D1[x](z)^2 - y(z)*x(z)^2 ; known x = Gamma ; candidate y = H1\n\
                    identity r : Gamma(z+1) = z*Gamma(z) ; samples 1.5, 2.5+0.5i, -0.5-2i ; tolerance 1e-10\n";
        let src = parse_source(text).unwrap();
        let [Statement::Parameter(p), Statement::Symbol(s), Statement::Chain(c), Statement::Transfer(t), Statement::Identity(i)] =
            src.statements.as_slice()
        else {
            panic!("unexpected statements {:?}", src.statements)
        };
        assert_eq!(p.name, "k");
        assert!(s.entire && s.meromorphic && s.derivative_nonzero);
        assert_eq!(s.witness.as_ref().unwrap().ord(), 1);
        assert_eq!(s.note, "exp in disguise");
        assert_eq!(c.members, ["K", "Km1"]);
        assert_eq!((t.known.as_str(), t.candidate_placeholder.as_str()), ("Gamma", "y"));
        assert_eq!(i.samples, [C64::new(1.5, 0.0), C64::new(2.5, 0.5), C64::new(-0.5, -2.0)]);
        assert_eq!(i.tolerance, Some(1e-10));
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.5+3i"), Some(C64::new(0.5, 3.0)));
        assert_eq!(parse_complex("-i"), Some(C64::new(0.0, -1.0)));
        assert_eq!(parse_complex("1e-3-2e+1i"), Some(C64::new(1e-3, -20.0)));
        assert_eq!(parse_complex("x"), None);
    }
}
