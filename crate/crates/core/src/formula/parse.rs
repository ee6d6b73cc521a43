use std::fmt;

use thiserror::Error;

use super::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    LParen,
    RParen,
    Obl,
    PermS,
    PermW,
    Top,
    Bottom,
    Atom(String),
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Tilde => f.write_str("`~`"),
            Token::Amp => f.write_str("`&`"),
            Token::Bar => f.write_str("`|`"),
            Token::Arrow => f.write_str("`->`"),
            Token::DoubleArrow => f.write_str("`<->`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::Obl => f.write_str("`O`"),
            Token::PermS => f.write_str("`Ps`"),
            Token::PermW => f.write_str("`Pw`"),
            Token::Top => f.write_str("`T`"),
            Token::Bottom => f.write_str("`F`"),
            Token::Atom(a) => write!(f, "atom `{a}`"),
            Token::End => f.write_str("end of input"),
        }
    }
}

/// A syntax error: byte offset into the input, what was found there and the
/// set of tokens that would have been accepted.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {}: found {found}, expected {}", position_label(.position, .at_end), .expected.join(" or "))]
pub struct ParseError {
    pub position: usize,
    pub at_end: bool,
    pub found: String,
    pub expected: Vec<String>,
}

fn position_label(position: &usize, at_end: &bool) -> String {
    if *at_end {
        "end of input".to_string()
    } else {
        format!("offset {position}")
    }
}

const UNARY_START: &[&str] = &["`~`", "`O`", "`Ps`", "`Pw`", "atom", "`T`", "`F`", "`(`"];

fn lex(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, found: String, expected: &[&str]| ParseError {
        position: pos,
        at_end: false,
        found,
        expected: expected.iter().map(|s| s.to_string()).collect(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => {
                out.push((Token::Tilde, start));
                i += 1;
            }
            b'&' => {
                out.push((Token::Amp, start));
                i += 1;
            }
            b'|' => {
                out.push((Token::Bar, start));
                i += 1;
            }
            b'(' => {
                out.push((Token::LParen, start));
                i += 1;
            }
            b')' => {
                out.push((Token::RParen, start));
                i += 1;
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((Token::Arrow, start));
                    i += 2;
                } else {
                    return Err(err(start, "`-`".into(), &["`->`"]));
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    out.push((Token::DoubleArrow, start));
                    i += 3;
                } else {
                    return Err(err(start, "`<`".into(), &["`<->`"]));
                }
            }
            b'a'..=b'z' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase()
                        || bytes[i].is_ascii_digit()
                        || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Token::Atom(text[start..i].to_string()), start));
            }
            b'A'..=b'Z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let tok = match &text[start..i] {
                    "O" => Token::Obl,
                    "Ps" => Token::PermS,
                    "Pw" => Token::PermW,
                    "T" => Token::Top,
                    "F" => Token::Bottom,
                    word => {
                        return Err(err(
                            start,
                            format!("`{word}`"),
                            &["`O`", "`Ps`", "`Pw`", "`T`", "`F`"],
                        ))
                    }
                };
                out.push((tok, start));
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(err(start, format!("`{ch}`"), UNARY_START));
            }
        }
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].0.clone();
        if tok != Token::End {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (tok, offset) = &self.tokens[self.pos];
        ParseError {
            position: *offset,
            at_end: *tok == Token::End,
            found: tok.to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Token::DoubleArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Token::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Token::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Token::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Token::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Token::Obl => {
                self.bump();
                Ok(Formula::obl(self.unary()?))
            }
            Token::PermS => {
                self.bump();
                Ok(Formula::perm_s(self.unary()?))
            }
            Token::PermW => {
                self.bump();
                Ok(Formula::perm_w(self.unary()?))
            }
            Token::Atom(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Token::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Token::Bottom => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Token::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error(&["`)`", "`&`", "`|`", "`->`", "`<->`"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(UNARY_START)),
        }
    }
}

/// Parses a formula in the ASCII concrete syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let f = parser.iff()?;
    if *parser.peek() != Token::End {
        return Err(parser.error(&["`&`", "`|`", "`->`", "`<->`", "end of input"]));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;

    fn a(n: &str) -> F {
        F::atom(n)
    }

    #[test]
    fn strong_permission_and_prohibition() {
        let f = parse("Ps(p | q) & O ~p").unwrap();
        assert_eq!(
            f,
            F::and(F::perm_s(F::or(a("p"), a("q"))), F::obl(F::not(a("p"))))
        );
    }

    #[test]
    fn distribution_schema_shape() {
        let f = parse("O(a & b) -> O a & O b").unwrap();
        assert_eq!(
            f,
            F::implies(
                F::obl(F::and(a("a"), a("b"))),
                F::and(F::obl(a("a")), F::obl(a("b")))
            )
        );
    }

    #[test]
    fn incomplete_implication() {
        let err = parse("p ->").unwrap_err();
        assert!(err.at_end);
        assert_eq!(err.position, 4);
        assert!(err.expected.iter().any(|e| e == "atom"));
    }

    #[test]
    fn unclosed_paren() {
        let err = parse("Ps(p|q").unwrap_err();
        assert!(err.at_end);
        assert!(err.expected.contains(&"`)`".to_string()));
    }

    #[test]
    fn associativity() {
        assert_eq!(
            parse("a -> b -> c").unwrap(),
            F::implies(a("a"), F::implies(a("b"), a("c")))
        );
        assert_eq!(
            parse("a | b | c").unwrap(),
            F::or(F::or(a("a"), a("b")), a("c"))
        );
        assert_eq!(
            parse("a <-> b <-> c").unwrap(),
            F::iff(F::iff(a("a"), a("b")), a("c"))
        );
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse("~a & b | c -> d <-> e").unwrap(),
            F::iff(
                F::implies(F::or(F::and(F::not(a("a")), a("b")), a("c")), a("d")),
                a("e")
            )
        );
        assert_eq!(parse("O ~p").unwrap(), F::obl(F::not(a("p"))));
        assert_eq!(parse("~O~p").unwrap(), F::not(F::obl(F::not(a("p")))));
    }

    #[test]
    fn reserved_words_are_not_atoms() {
        assert!(parse("Op").is_err());
        assert!(parse("P p").is_err());
        assert!(parse("O T & F").is_ok());
    }

    #[test]
    fn stray_characters() {
        let err = parse("p $ q").unwrap_err();
        assert_eq!(err.position, 2);
        let err = parse("p q").unwrap_err();
        assert_eq!(err.position, 2);
        assert_eq!(err.found, "atom `q`");
    }
}
