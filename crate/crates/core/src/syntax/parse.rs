//! Recursive-descent parser for the linear expression syntax.
//!
//! ```text
//! expr := sum
//! sum  := prod { "+" prod }
//! prod := star { ("." | "@") star }
//! star := atom { "*" }
//! atom := "0" | "1" | IDENT | "(" expr ")"
//! ```
//!
//! `@` (the stacked product) is only accepted by [`parse_stacked_expr`].

use super::{Action, StackedExpr, StarExpr};
use crate::error::{ParseError, Result};

/// Parses a star expression.
pub fn parse_star_expr(text: &str) -> Result<StarExpr> {
    let mut p = Parser::new(text, false);
    let e = p.sum()?;
    p.finish()?;
    match e {
        StackedExpr::Plain(e) => Ok(e),
        // unreachable: `@` is rejected when stacking is off
        other => Ok(other.project()),
    }
}

/// Parses a stacked star expression, with `@` for the stacked product.
pub fn parse_stacked_expr(text: &str) -> Result<StackedExpr> {
    let mut p = Parser::new(text, true);
    let e = p.sum()?;
    p.finish()?;
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Zero,
    One,
    Ident(String),
    Plus,
    Dot,
    At,
    Star,
    LParen,
    RParen,
    End,
    Bad(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Dot => "`.`".into(),
            Tok::At => "`@`".into(),
            Tok::Star => "`*`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
            Tok::Bad(c) => format!("`{c}`"),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    stacked: bool,
}

const ATOM_START: [&str; 4] = ["`0`", "`1`", "identifier", "`(`"];

impl<'a> Parser<'a> {
    fn new(text: &'a str, stacked: bool) -> Self {
        Parser { text, pos: 0, stacked }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the next token and its byte length without consuming it.
    fn peek(&mut self) -> (usize, Tok, usize) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let Some(c) = rest.chars().next() else {
            return (start, Tok::End, 0);
        };
        let single = |t| (start, t, 1);
        match c {
            '0' => single(Tok::Zero),
            '1' => single(Tok::One),
            '+' => single(Tok::Plus),
            '.' => single(Tok::Dot),
            '@' => single(Tok::At),
            '*' => single(Tok::Star),
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            c if c.is_ascii_alphabetic() => {
                let letters = rest.bytes().take_while(u8::is_ascii_alphabetic).count();
                let digits = rest[letters..].bytes().take_while(u8::is_ascii_digit).count();
                let len = letters + digits;
                (start, Tok::Ident(rest[..len].to_string()), len)
            }
            c => (start, Tok::Bad(c), c.len_utf8()),
        }
    }

    fn error(&mut self, expected: &[&str]) -> crate::error::Error {
        let (offset, tok, _) = self.peek();
        ParseError { offset, expected: expected.iter().map(|s| s.to_string()).collect(), found: tok.describe() }.into()
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek().1 {
            Tok::End => Ok(()),
            Tok::RParen => Err(self.error(&["operator", "end of input"])),
            _ => Err(self.error(&["`+`", "`.`", "`*`", "end of input"])),
        }
    }

    fn sum(&mut self) -> Result<StackedExpr> {
        let mut left = self.prod()?;
        loop {
            let (offset, tok, len) = self.peek();
            if tok != Tok::Plus {
                return Ok(left);
            }
            self.pos += len;
            let right_offset = self.peek().0;
            let right = self.prod()?;
            let l = self.plain(left, offset)?;
            let r = self.plain(right, right_offset)?;
            left = StackedExpr::Plain(StarExpr::sum(l, r));
        }
    }

    fn prod(&mut self) -> Result<StackedExpr> {
        let mut left = self.star()?;
        loop {
            let (offset, tok, len) = self.peek();
            match tok {
                Tok::Dot => {
                    self.pos += len;
                    let right_offset = self.peek().0;
                    let right = self.star()?;
                    let r = self.plain(right, right_offset)?;
                    left = StackedExpr::prod(left, r);
                }
                Tok::At if self.stacked => {
                    self.pos += len;
                    let right_offset = self.peek().0;
                    let right = self.star()?;
                    let r = self.plain(right, right_offset)?;
                    if !r.is_star() {
                        return Err(ParseError {
                            offset: right_offset,
                            expected: vec!["starred expression".into()],
                            found: format!("`{r}`"),
                        }
                        .into());
                    }
                    left = StackedExpr::stack_unchecked(left, r);
                }
                _ => {
                    let _ = offset;
                    return Ok(left);
                }
            }
        }
    }

    fn star(&mut self) -> Result<StackedExpr> {
        let start = self.peek().0;
        let mut e = self.atom()?;
        loop {
            let (_, tok, len) = self.peek();
            if tok != Tok::Star {
                return Ok(e);
            }
            self.pos += len;
            let body = self.plain(e, start)?;
            e = StackedExpr::Plain(StarExpr::star(body));
        }
    }

    fn atom(&mut self) -> Result<StackedExpr> {
        let (_, tok, len) = self.peek();
        let e = match tok {
            Tok::Zero => StarExpr::Zero,
            Tok::One => StarExpr::One,
            Tok::Ident(name) => StarExpr::Act(Action::new(&name)?),
            Tok::LParen => {
                self.pos += len;
                let inner = self.sum()?;
                if self.peek().1 != Tok::RParen {
                    return Err(self.error(&["`)`"]));
                }
                self.pos += 1;
                return Ok(inner);
            }
            _ => return Err(self.error(&ATOM_START)),
        };
        self.pos += len;
        Ok(StackedExpr::Plain(e))
    }

    // Stacked subterms may only occur as heads of `.` and `@`.
    fn plain(&self, e: StackedExpr, offset: usize) -> Result<StarExpr> {
        match e {
            StackedExpr::Plain(e) => Ok(e),
            other => Err(ParseError {
                offset,
                expected: vec!["star expression".into()],
                found: format!("stacked expression `{other}`"),
            }
            .into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn a(n: &str) -> StarExpr {
        StarExpr::act(n).unwrap()
    }

    #[test]
    fn atoms() {
        assert_eq!(parse_star_expr("a").unwrap(), a("a"));
        assert_eq!(parse_star_expr("b2").unwrap(), a("b2"));
        assert_eq!(parse_star_expr(" 0 ").unwrap(), StarExpr::Zero);
        assert_eq!(parse_star_expr("1").unwrap(), StarExpr::One);
    }

    #[test]
    fn nested_star() {
        let e = parse_star_expr("(a*.b*)*").unwrap();
        let expected = StarExpr::star(StarExpr::prod(StarExpr::star(a("a")), StarExpr::star(a("b"))));
        assert_eq!(e, expected);
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_star_expr("a + b.c*").unwrap();
        assert_eq!(e, StarExpr::sum(a("a"), StarExpr::prod(a("b"), StarExpr::star(a("c")))));
        let e = parse_star_expr("a.b.c").unwrap();
        assert_eq!(e, StarExpr::prod(StarExpr::prod(a("a"), a("b")), a("c")));
        let e = parse_star_expr("a+b+c").unwrap();
        assert_eq!(e, StarExpr::sum(StarExpr::sum(a("a"), a("b")), a("c")));
        let e = parse_star_expr("a**").unwrap();
        assert_eq!(e, StarExpr::star(StarExpr::star(a("a"))));
    }

    #[test]
    fn loop_example() {
        let g = parse_star_expr("(c.a + a.(b + b.a))*").unwrap();
        let g0 = parse_star_expr("((1.a).(c.a + a.(b + b.a))*).0").unwrap();
        assert_eq!(g0, StarExpr::prod(StarExpr::prod(StarExpr::prod(StarExpr::One, a("a")), g), StarExpr::Zero));
    }

    #[test]
    fn truncated_input() {
        match parse_star_expr("a + ") {
            Err(Error::Parse(err)) => {
                assert_eq!(err.offset, 4);
                assert!(err.expected.contains(&"identifier".to_string()));
                assert_eq!(err.found, "end of input");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        for (text, offset) in
            [("", 0), ("(a", 2), ("a)", 1), ("a b", 2), ("a1b", 2), ("+a", 0), ("a.#", 2), ("a @ b*", 2)]
        {
            match parse_star_expr(text) {
                Err(Error::Parse(err)) => assert_eq!(err.offset, offset, "{text:?}"),
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn stacked() {
        let e = parse_stacked_expr("1 @ a*").unwrap();
        assert_eq!(e, StackedExpr::stack(StackedExpr::Plain(StarExpr::One), StarExpr::star(a("a"))).unwrap());
        let e = parse_stacked_expr("(1 @ a*).b* @ (a*.b*)*").unwrap();
        assert_eq!(e.to_string(), "1 @ a*.b* @ (a*.b*)*");
        assert!(parse_stacked_expr("a @ b").is_err());
        assert!(parse_stacked_expr("(1 @ a*) + b").is_err());
        assert!(parse_stacked_expr("a.(1 @ a*)").is_err());
    }
}
