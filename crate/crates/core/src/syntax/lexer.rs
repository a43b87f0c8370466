use num_bigint::BigInt;

use super::{Location, SyntaxError};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    /// `u<k>`
    Indet(u32),
    /// `D` or `D<k>` immediately followed by `[`.
    Marker(u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Equals,
    Comma,
    End,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub at: Location,
}

pub fn tokenize(text: &str, origin: Location) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let (mut line, mut col) = (origin.line, origin.column);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let at = Location { line, column: col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = chars[start..j].iter().collect();
            advance(&mut i, &mut line, &mut col, j - start);
            out.push(Token { tok: Tok::Int(digits.parse().unwrap()), at });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[start..j].iter().collect();
            advance(&mut i, &mut line, &mut col, j - start);
            let tok = classify_word(&word, chars.get(i).copied());
            out.push(Token { tok, at });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '=' => Tok::Equals,
            ',' => Tok::Comma,
            other => {
                return Err(SyntaxError::new(at, format!("unexpected character `{other}`")));
            }
        };
        advance(&mut i, &mut line, &mut col, 1);
        out.push(Token { tok, at });
    }
    out.push(Token { tok: Tok::End, at: Location { line, column: col } });
    Ok(out)
}

fn classify_word(word: &str, next: Option<char>) -> Tok {
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if let Some(rest) = word.strip_prefix('u') {
        if digits(rest) {
            if let Ok(k) = rest.parse() {
                return Tok::Indet(k);
            }
        }
    }
    if next == Some('[') {
        if word == "D" {
            return Tok::Marker(1);
        }
        if let Some(rest) = word.strip_prefix('D') {
            if digits(rest) {
                if let Ok(k) = rest.parse() {
                    return Tok::Marker(k);
                }
            }
        }
    }
    Tok::Ident(word.to_string())
}
