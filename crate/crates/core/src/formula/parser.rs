//! Recursive-descent parser.
//!
//! ```text
//! imp   := or ( "->" imp )?
//! or    := and ( "|" and )*
//! and   := unary ( "&" unary )*
//! unary := ( "~" | "[i]" | "<i>" ) unary | atom
//! atom  := IDENT | "false" | "true" | "(" imp ")"
//! ```
//!
//! `[]` and `<>` abbreviate `[1]` and `<1>`.

use super::{Formula, Modality};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    False,
    True,
    Not,
    And,
    Or,
    Arrow,
    Box(Modality),
    Diamond(Modality),
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => out.push((start, Token::Not)),
            b'&' => out.push((start, Token::And)),
            b'|' => out.push((start, Token::Or)),
            b'(' => out.push((start, Token::LParen)),
            b')' => out.push((start, Token::RParen)),
            b'-' => {
                if bytes.get(i + 1) != Some(&b'>') {
                    return Err(syntax(start, "expected '->'"));
                }
                i += 1;
                out.push((start, Token::Arrow));
            }
            b'[' | b'<' => {
                let close = if c == b'[' { b']' } else { b'>' };
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if bytes.get(j) != Some(&close) {
                    return Err(syntax(j, format!("expected '{}'", close as char)));
                }
                let digits = &text[i + 1..j];
                let modality = if digits.is_empty() {
                    Modality::One
                } else {
                    let index = digits.parse::<u32>().map_err(|_| Error::ModalityOutOfRange(u32::MAX))?;
                    Modality::new(index)?
                };
                i = j;
                out.push((
                    start,
                    if c == b'[' {
                        Token::Box(modality)
                    } else {
                        Token::Diamond(modality)
                    },
                ));
            }
            b'a'..=b'z' => {
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_ascii_lowercase() || bytes[j].is_ascii_digit() || bytes[j] == b'_')
                {
                    j += 1;
                }
                let word = &text[i..j];
                out.push((
                    start,
                    match word {
                        "false" => Token::False,
                        "true" => Token::True,
                        _ => Token::Ident(word.to_string()),
                    },
                ));
                i = j - 1;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character {ch:?}")));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == Some(token) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let left = self.disjunction()?;
        if self.eat(&Token::Arrow) {
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while self.eat(&Token::Or) {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while self.eat(&Token::And) {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(&Token::Box(i)) => {
                self.pos += 1;
                Ok(Formula::boxed(i, self.unary()?))
            }
            Some(&Token::Diamond(i)) => {
                self.pos += 1;
                Ok(Formula::diamond(i, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let at = self.offset();
        let token = self.peek().cloned();
        self.pos += 1;
        match token {
            Some(Token::Ident(name)) => Ok(Formula::Atom(name)),
            Some(Token::False) => Ok(Formula::Bottom),
            Some(Token::True) => Ok(Formula::top()),
            Some(Token::LParen) => {
                let inner = self.implication()?;
                if !self.eat(&Token::RParen) {
                    return Err(syntax(self.offset(), "expected ')'"));
                }
                Ok(inner)
            }
            Some(other) => Err(syntax(at, format!("unexpected token {other:?}"))),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let formula = parser.implication()?;
    if parser.pos != parser.tokens.len() {
        return Err(syntax(parser.offset(), "trailing input"));
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse("[1] p -> <2> p").unwrap(),
            Formula::implies(Formula::boxed(Modality::One, p()), Formula::diamond(Modality::Two, p()))
        );
        assert_eq!(parse("false").unwrap(), Formula::Bottom);
        assert_eq!(
            parse("[1][2] p").unwrap(),
            Formula::boxed(Modality::One, Formula::boxed(Modality::Two, p()))
        );
        assert!(matches!(parse("[3] p"), Err(Error::ModalityOutOfRange(3))));
    }

    #[test]
    fn precedence_and_associativity() {
        let q = Formula::atom("q");
        let r = Formula::atom("r");
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            Formula::implies(p(), Formula::implies(q.clone(), r.clone()))
        );
        assert_eq!(
            parse("p | q & r").unwrap(),
            Formula::or(p(), Formula::and(q.clone(), r.clone()))
        );
        assert_eq!(parse("~p & q").unwrap(), Formula::and(Formula::not(p()), q.clone()));
        assert_eq!(
            parse("[2] p & q").unwrap(),
            Formula::and(Formula::boxed(Modality::Two, p()), q)
        );
        assert_eq!(parse("true").unwrap(), Formula::top());
    }

    #[test]
    fn unimodal_sugar_is_modality_one() {
        assert_eq!(parse("[] p -> <> p").unwrap(), parse("[1] p -> <1> p").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        match parse("p -> (q") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        match parse("p $ q") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("p q"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse("P"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse("[1 p"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn conjunction_round_trips() {
        let f = Formula::and(p(), Formula::atom("q"));
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}
