//! Text syntax: expressions, differential polynomials and `.dfa` corpus files.

mod dfa;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::diffpoly::DiffPoly;
use crate::expr::Expr;

pub use dfa::{
    parse_complex, parse_source, ChainDecl, EquationDecl, IdentityDecl, ParameterDecl, SourceFile, Statement, SymbolDecl,
    TransferDecl, CHAIN_MEMBER, CHAIN_PREVIOUS,
};
pub use parser::{parse_equation_at, parse_expr_at, parse_expr_raw};

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl Location {
    pub fn start() -> Self {
        Location { line: 1, column: 1 }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{at}: {message}")]
    Syntax { at: Location, message: String },
    #[error("{at}: undeclared symbol `{name}`")]
    UndeclaredSymbol { at: Location, name: String },
}

impl SyntaxError {
    pub fn new(at: Location, message: String) -> Self {
        SyntaxError::Syntax { at, message }
    }

    pub fn location(&self) -> Location {
        match self {
            SyntaxError::Syntax { at, .. } | SyntaxError::UndeclaredSymbol { at, .. } => *at,
        }
    }
}

/// Parse and simplify an expression.
pub fn parse_expr(text: &str) -> Result<Expr, SyntaxError> {
    Ok(parse_expr_raw(text)?.simplify())
}

/// Parse a differential polynomial written with indeterminates `u0, u1, ...`.
pub fn parse_poly(text: &str) -> Result<DiffPoly, SyntaxError> {
    let e = parse_expr_raw(text)?;
    DiffPoly::from_expr(&e).map_err(|m| SyntaxError::new(Location::start(), m))
}
