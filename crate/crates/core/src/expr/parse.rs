use super::{Atom, FtfExpr, Term};
use crate::error::{Error, Result};

/// Parses `x*z + psi1^2*y`. `0` alone is the empty expression and `1` the
/// empty term, so every rendered canonical expression parses back.
pub fn parse_expr(text: &str) -> Result<FtfExpr> {
    let mut p = Parser::new(text);
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty expression"));
    }
    if p.peek() == Some('0') {
        let save = p.clone();
        p.bump();
        p.skip_ws();
        if p.peek().is_none() {
            return Ok(FtfExpr::zero());
        }
        p = save;
    }
    let mut terms = vec![p.term()?];
    loop {
        p.skip_ws();
        match p.peek() {
            None => break,
            Some('+') => {
                p.bump();
                terms.push(p.term()?);
            }
            Some(c) => return Err(p.error(&format!("expected `+` or `*`, found `{c}`"))),
        }
    }
    Ok(FtfExpr::new(terms))
}

#[derive(Clone)]
struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.column,
            message: message.to_string(),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut atoms = Vec::new();
        self.factor(&mut atoms)?;
        loop {
            self.skip_ws();
            if self.peek() != Some('*') {
                return Ok(Term::new(atoms));
            }
            self.bump();
            self.factor(&mut atoms)?;
        }
    }

    fn factor(&mut self, atoms: &mut Vec<Atom>) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some('1') => {
                self.bump();
                if matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    return Err(self.error("identifiers must not start with a digit"));
                }
                Ok(())
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.identifier();
                self.skip_ws();
                if self.peek() == Some('^') {
                    self.bump();
                    self.skip_ws();
                    let count = self.count()?;
                    atoms.push(Atom::call(name, count));
                } else {
                    atoms.push(Atom::Var(name));
                }
                Ok(())
            }
            Some(c) => Err(self.error(&format!("expected an atom, found `{c}`"))),
            None => Err(self.error("expected an atom, found end of input")),
        }
    }

    fn identifier(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn count(&mut self) -> Result<u32> {
        let (line, column) = (self.line, self.column);
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                digits.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
            if let Ok(n) = digits.parse() {
                return Ok(n);
            }
        }
        Err(Error::Syntax {
            line,
            column,
            message: format!("call count must be a non-negative integer, found `{digits}`"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Notation;

    #[test]
    fn parses_terms_and_calls() {
        let e = parse_expr("x*z + y*w").unwrap();
        assert_eq!(e.terms().len(), 2);
        assert_eq!(e.terms()[0].atoms(), &[Atom::var("x"), Atom::var("z")]);
        assert_eq!(e.terms()[1].atoms(), &[Atom::var("y"), Atom::var("w")]);

        let e = parse_expr("psi1^2 * y").unwrap();
        assert_eq!(
            e.terms()[0].atoms(),
            &[Atom::call("psi1", 2), Atom::var("y")]
        );

        let e = parse_expr("  a\n *\tb^0 ").unwrap();
        assert_eq!(e.terms()[0].atoms(), &[Atom::var("a"), Atom::call("b", 0)]);
    }

    #[test]
    fn constants() {
        assert_eq!(parse_expr("0").unwrap(), FtfExpr::zero());
        assert_eq!(parse_expr("1").unwrap(), FtfExpr::one());
        assert_eq!(parse_expr("x + 1").unwrap().len(), 2);
    }

    #[test]
    fn errors_carry_position() {
        match parse_expr("x*z +\n  y*") {
            Err(Error::Syntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_expr("x^-1"),
            Err(Error::Syntax { column: 3, .. })
        ));
        assert!(matches!(parse_expr("x^1.5"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("x^"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("x y"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("2x"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn canonical_round_trip() {
        for text in [
            "x*z + x*xbar*w + y*w + y*xbar*z",
            "psi2^3*psi4^1 + a",
            "0",
            "1",
            "b*a*a + 1",
        ] {
            let c = parse_expr(text).unwrap().canonical();
            let back = parse_expr(&c.render(Notation::Canonical)).unwrap();
            assert_eq!(back, c, "{text}");
        }
    }
}
