//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' '-'? int)?
//! atom   := int | 'z' | name | name '(' expr ')'
//!         | 'D' int? '[' name ']' '(' expr ')' | 'u' int | '(' expr ')'
//! ```

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::lexer::{tokenize, Tok, Token};
use super::{Location, SyntaxError};
use crate::expr::{Expr, VAR_NAME};

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(text: &str, origin: Location) -> Result<Self, SyntaxError> {
        Ok(Parser { tokens: tokenize(text, origin)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn at(&self) -> Location {
        self.tokens[self.pos].at
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SyntaxError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn error(&self, msg: String) -> SyntaxError {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            t => format!("{t:?}"),
        };
        SyntaxError::new(self.at(), format!("{msg}, found {found}"))
    }

    pub fn at_end(&self) -> bool {
        matches!(self.peek(), Tok::End)
    }

    pub fn finish(&self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input".into()))
        }
    }

    pub fn eat(&mut self, t: Tok) -> bool {
        if *self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(Tok::Plus) {
                terms.push(self.term()?);
            } else if self.eat(Tok::Minus) {
                terms.push(-self.term()?);
            } else {
                break;
            }
        }
        Ok(Expr::add(terms))
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(Tok::Star) {
                acc = acc * self.unary()?;
            } else if self.eat(Tok::Slash) {
                acc = acc / self.unary()?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat(Tok::Minus) {
            return Ok(-self.unary()?);
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if self.eat(Tok::Caret) {
            let negative = self.eat(Tok::Minus);
            let at = self.at();
            let Tok::Int(n) = self.bump() else {
                return Err(SyntaxError::new(at, "expected an integer exponent".into()));
            };
            let n = n
                .to_i64()
                .filter(|n| *n <= 4096)
                .ok_or_else(|| SyntaxError::new(at, "exponent out of range".into()))?;
            return Ok(Expr::pow(base, if negative { -n } else { n }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let at = self.at();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::rational(BigRational::from_integer(n))),
            Tok::Indet(k) => Ok(Expr::indet(k)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Marker(k) => {
                self.expect(Tok::LBracket, "`[`")?;
                let name_at = self.at();
                let Tok::Ident(name) = self.bump() else {
                    return Err(SyntaxError::new(name_at, "expected a function name".into()));
                };
                self.expect(Tok::RBracket, "`]`")?;
                self.expect(Tok::LParen, "`(` after derivative marker")?;
                let arg = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::deriv(name, k, arg))
            }
            Tok::Ident(name) => {
                if name == VAR_NAME {
                    if *self.peek() == Tok::LParen {
                        return Err(SyntaxError::new(at, "`z` is the variable, not a function".into()));
                    }
                    return Ok(Expr::var());
                }
                if self.eat(Tok::LParen) {
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::apply(name, arg))
                } else {
                    Ok(Expr::constant(name))
                }
            }
            other => {
                self.pos -= usize::from(self.pos > 0 && other != Tok::End);
                Err(self.error("expected an expression".into()))
            }
        }
    }
}

/// Parse a complete expression. The result is not simplified.
pub fn parse_expr_raw(text: &str) -> Result<Expr, SyntaxError> {
    parse_expr_at(text, Location::start())
}

pub fn parse_expr_at(text: &str, origin: Location) -> Result<Expr, SyntaxError> {
    let mut p = Parser::new(text, origin)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parse `lhs = rhs`.
pub fn parse_equation_at(text: &str, origin: Location) -> Result<(Expr, Expr), SyntaxError> {
    let mut p = Parser::new(text, origin)?;
    let lhs = p.expr()?;
    p.expect(Tok::Equals, "`=`")?;
    let rhs = p.expr()?;
    p.finish()?;
    Ok((lhs, rhs))
}
