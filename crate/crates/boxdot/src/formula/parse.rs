//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Atoms are `/[a-z][a-zA-Z0-9_]*/`, `true`, `false`. Unary operators
//! (`~`, `[]`, `<>`, `[.]`) bind tightest, then `&`, then `|`, then the
//! right-associative `->`, then `<->`. `[.]f` expands to `f & []f` at
//! parse time.

use super::Formula;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset}: expected {expected}, found {found}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

fn err(offset: usize, expected: &str, found: impl Into<String>) -> ParseError {
    ParseError {
        offset,
        expected: expected.to_owned(),
        found: found.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    BoxOp,
    DiaOp,
    BoxDot,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier {name:?}"),
            Tok::True => "'true'".to_owned(),
            Tok::False => "'false'".to_owned(),
            Tok::Not => "'~'".to_owned(),
            Tok::BoxOp => "'[]'".to_owned(),
            Tok::DiaOp => "'<>'".to_owned(),
            Tok::BoxDot => "'[.]'".to_owned(),
            Tok::And => "'&'".to_owned(),
            Tok::Or => "'|'".to_owned(),
            Tok::Imp => "'->'".to_owned(),
            Tok::Iff => "'<->'".to_owned(),
            Tok::LParen => "'('".to_owned(),
            Tok::RParen => "')'".to_owned(),
            Tok::Eof => "end of input".to_owned(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        match bytes[i] {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'a'..=b'z' => {
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                let word = &src[i..j];
                let tok = match word {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word.to_owned()),
                };
                toks.push((start, tok));
                i = j;
            }
            b'~' => {
                toks.push((start, Tok::Not));
                i += 1;
            }
            b'&' => {
                toks.push((start, Tok::And));
                i += 1;
            }
            b'|' => {
                toks.push((start, Tok::Or));
                i += 1;
            }
            b'(' => {
                toks.push((start, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((start, Tok::RParen));
                i += 1;
            }
            b'[' => match bytes.get(i + 1) {
                Some(b']') => {
                    toks.push((start, Tok::BoxOp));
                    i += 2;
                }
                Some(b'.') if bytes.get(i + 2) == Some(&b']') => {
                    toks.push((start, Tok::BoxDot));
                    i += 3;
                }
                _ => return Err(err(start, "'[]' or '[.]'", fragment(src, start))),
            },
            b'<' => match bytes.get(i + 1) {
                Some(b'>') => {
                    toks.push((start, Tok::DiaOp));
                    i += 2;
                }
                Some(b'-') if bytes.get(i + 2) == Some(&b'>') => {
                    toks.push((start, Tok::Iff));
                    i += 3;
                }
                _ => return Err(err(start, "'<>' or '<->'", fragment(src, start))),
            },
            b'-' => match bytes.get(i + 1) {
                Some(b'>') => {
                    toks.push((start, Tok::Imp));
                    i += 2;
                }
                _ => return Err(err(start, "'->'", fragment(src, start))),
            },
            _ => return Err(err(start, "a formula token", fragment(src, start))),
        }
    }
    toks.push((src.len(), Tok::Eof));
    Ok(toks)
}

/// The offending character (respecting UTF-8 boundaries) for error text.
fn fragment(src: &str, at: usize) -> String {
    match src[at..].chars().next() {
        Some(c) => format!("{:?}", c),
        None => "end of input".to_owned(),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.iff()?;
            Ok(Formula::iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::BoxOp => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::DiaOp => {
                self.bump();
                Ok(Formula::dia(self.unary()?))
            }
            Tok::BoxDot => {
                self.bump();
                let body = self.unary()?;
                Ok(Formula::and(body.clone(), Formula::boxed(body)))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Tok::Ident(name) => Ok(Formula::Var(name)),
            Tok::True => Ok(Formula::Verum),
            Tok::False => Ok(Formula::Falsum),
            Tok::LParen => {
                let inner = self.iff()?;
                let offset = self.offset();
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    other => Err(err(offset, "')'", other.describe())),
                }
            }
            other => Err(err(offset, "a formula", other.describe())),
        }
    }
}

/// Parse `text` into its unique AST per the grammar.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = parser.iff()?;
    let offset = parser.offset();
    match parser.bump() {
        Tok::Eof => Ok(f),
        other => Err(err(offset, "end of input", other.describe())),
    }
}
