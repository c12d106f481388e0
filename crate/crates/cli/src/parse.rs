//! Recursive-descent parsers for ring specs, endomorphism specs and element
//! literals.

use std::collections::BTreeSet;
use std::fmt;

use skewring::endo::NAMED_ENDOMORPHISMS;
use skewring::literal::{ElemLit, Term};
use skewring::zoo::{EndoSpec, RingSpec, REGISTRY_NAMES};

/// A syntax error: the byte offset where parsing stopped and what would
/// have been accepted there.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub offset: usize,
    pub expected: BTreeSet<String>,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}", self.offset)?;
        if let Some(m) = &self.message {
            write!(f, ": {m}")?;
        }
        if !self.expected.is_empty() {
            let items: Vec<&str> = self.expected.iter().map(String::as_str).collect();
            write!(f, ": expected {}", items.join(" or "))?;
        }
        Ok(())
    }
}

type PResult<T> = Result<T, ParseError>;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn fail<T>(&mut self, expected: &[&str]) -> PResult<T> {
        self.skip_ws();
        Err(ParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: None,
        })
    }

    fn fail_at<T>(&self, offset: usize, message: String) -> PResult<T> {
        Err(ParseError {
            offset,
            expected: BTreeSet::new(),
            message: Some(message),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&[&format!("'{c}'")])
        }
    }

    fn int(&mut self) -> PResult<u64> {
        self.skip_ws();
        let digits: &str = {
            let r = self.rest();
            let n = r.bytes().take_while(u8::is_ascii_digit).count();
            &r[..n]
        };
        if digits.is_empty() {
            return self.fail(&["INT"]);
        }
        let start = self.pos;
        self.pos += digits.len();
        digits
            .parse()
            .or_else(|_| self.fail_at(start, format!("integer {digits} is too large")))
    }

    fn ident(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let r = self.rest();
        let first = r.chars().next()?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return None;
        }
        let n = r
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
            .count();
        let start = self.pos;
        self.pos += n;
        Some((start, &r[..n]))
    }

    fn end(&mut self) -> PResult<()> {
        if self.peek().is_some() {
            self.fail(&["end of input"])
        } else {
            Ok(())
        }
    }

    // ---------------------------------------------------------------- rings

    fn ring(&mut self) -> PResult<RingSpec> {
        const STARTS: [&str; 8] = ["'Z('", "'prod('", "'mat('", "'truncpoly('", "'sub('", "'ut2('", "'ut2c('", "NAME"];
        let Some((start, word)) = self.ident() else {
            return self.fail(&STARTS);
        };
        let call = self.peek() == Some('(');
        if !call {
            if REGISTRY_NAMES.contains(&word) {
                return Ok(RingSpec::Named(word.to_string()));
            }
            return self.fail_at(start, format!("unknown registry ring `{word}`"));
        }
        self.expect('(')?;
        let spec = match word {
            "Z" => RingSpec::Integers(self.int()?),
            "prod" => {
                let a = self.ring()?;
                self.expect(',')?;
                let b = self.ring()?;
                RingSpec::Product(Box::new(a), Box::new(b))
            }
            "mat" => {
                let n = self.int()?;
                self.expect(',')?;
                RingSpec::Matrix(n, Box::new(self.ring()?))
            }
            "truncpoly" => {
                let r = self.ring()?;
                self.expect(',')?;
                RingSpec::TruncPoly(Box::new(r), self.int()?)
            }
            "sub" => {
                let r = self.ring()?;
                self.expect(';')?;
                let mut gens = vec![self.elem()?];
                while self.eat(',') {
                    gens.push(self.elem()?);
                }
                RingSpec::Sub(Box::new(r), gens)
            }
            "ut2" => RingSpec::UpperTriangular(Box::new(self.ring()?)),
            "ut2c" => RingSpec::UpperToeplitz(Box::new(self.ring()?)),
            other => return self.fail_at(start, format!("unknown ring constructor `{other}`")),
        };
        self.expect(')')?;
        Ok(spec)
    }

    fn endo(&mut self) -> PResult<EndoSpec> {
        let Some((start, word)) = self.ident() else {
            return self.fail(&["'id'", "'table('", "NAME"]);
        };
        match word {
            "id" => Ok(EndoSpec::Identity),
            "table" => {
                self.expect('(')?;
                let mut pairs = Vec::new();
                loop {
                    let a = self.int()?;
                    self.expect(':')?;
                    let b = self.int()?;
                    pairs.push((a, b));
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect(')')?;
                Ok(EndoSpec::Table(pairs))
            }
            name if NAMED_ENDOMORPHISMS.contains(&name) => Ok(EndoSpec::Named(name.to_string())),
            other => self.fail_at(start, format!("unknown endomorphism `{other}`")),
        }
    }

    // ------------------------------------------------------------- elements

    /// `['-'] term (('+' | '-') term)*`
    fn elem(&mut self) -> PResult<ElemLit> {
        let mut terms = Vec::new();
        let mut negated = self.eat('-');
        loop {
            let mut t = self.term()?;
            t.negated = negated;
            terms.push(t);
            if self.eat('+') {
                negated = false;
            } else if self.eat('-') {
                negated = true;
            } else {
                break;
            }
        }
        Ok(normalize(terms))
    }

    /// `atom ['*' VAR ['^' INT]] | VAR ['^' INT]`
    fn term(&mut self) -> PResult<Term> {
        if let Some(c) = self.peek() {
            if c.is_ascii_alphabetic() {
                let (_, v) = self.ident().expect("alphabetic start");
                let power = self.power()?;
                return Ok(Term::monomial(None, v, power));
            }
        }
        let coeff = self.atom()?;
        if self.eat('*') {
            let Some((_, v)) = self.ident() else {
                return self.fail(&["VAR"]);
            };
            let power = self.power()?;
            return Ok(Term::monomial(Some(coeff), v, power));
        }
        Ok(Term::constant(coeff))
    }

    fn power(&mut self) -> PResult<u32> {
        if !self.eat('^') {
            return Ok(1);
        }
        let start = self.pos;
        let k = self.int()?;
        u32::try_from(k).or_else(|_| self.fail_at(start, format!("exponent {k} is too large")))
    }

    /// `INT | '(' elem (',' elem)* ')' | '[' elem (',' elem)* ']'`
    fn atom(&mut self) -> PResult<ElemLit> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let items = self.elem_list(')')?;
                Ok(if items.len() == 1 {
                    items.into_iter().next().expect("one item")
                } else {
                    ElemLit::Tuple(items)
                })
            }
            Some('[') => {
                self.pos += 1;
                Ok(ElemLit::List(self.elem_list(']')?))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let k = self.int()?;
                let k = i64::try_from(k).or_else(|_| self.fail_at(start, format!("integer {k} is too large")))?;
                Ok(ElemLit::Int(k))
            }
            _ => self.fail(&["INT", "'('", "'['", "VAR"]),
        }
    }

    fn elem_list(&mut self, close: char) -> PResult<Vec<ElemLit>> {
        let mut items = vec![self.elem()?];
        while self.eat(',') {
            items.push(self.elem()?);
        }
        self.expect(close)?;
        Ok(items)
    }
}

/// A lone non-negated constant is its coefficient; `-k` is `Int(-k)`.
fn normalize(mut terms: Vec<Term>) -> ElemLit {
    if terms.len() == 1 && terms[0].var.is_none() {
        let t = &terms[0];
        match (&t.coeff, t.negated) {
            (Some(c), false) => return c.clone(),
            (Some(ElemLit::Int(k)), true) if *k != i64::MIN => return ElemLit::Int(-k),
            _ => {}
        }
    }
    ElemLit::Poly(std::mem::take(&mut terms))
}

pub fn parse_ring_spec(text: &str) -> Result<RingSpec, ParseError> {
    let mut p = Parser::new(text);
    let spec = p.ring()?;
    p.end()?;
    Ok(spec)
}

pub fn parse_endo_spec(text: &str) -> Result<EndoSpec, ParseError> {
    let mut p = Parser::new(text);
    let spec = p.endo()?;
    p.end()?;
    Ok(spec)
}

pub fn parse_element(text: &str) -> Result<ElemLit, ParseError> {
    let mut p = Parser::new(text);
    let lit = p.elem()?;
    p.end()?;
    Ok(lit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rings() {
        let p = parse_ring_spec("prod(Z(2),Z(2))").unwrap();
        assert_eq!(
            p,
            RingSpec::Product(Box::new(RingSpec::Integers(2)), Box::new(RingSpec::Integers(2)))
        );
        assert_eq!(parse_ring_spec(" ex4 ").unwrap(), RingSpec::Named("ex4".into()));
        let s = parse_ring_spec("sub(mat(2,Z(4)); [[1,0],[0,1]], [[0,1],[0,0]])").unwrap();
        assert_eq!(s.to_string(), "sub(mat(2,Z(4));[[1,0],[0,1]],[[0,1],[0,0]])");
    }

    #[test]
    fn truncated_input_reports_offset() {
        let err = parse_ring_spec("mat(2, Z(").unwrap_err();
        assert_eq!(err.offset, 9);
        assert!(err.expected.contains("INT"));
        assert_eq!(err.to_string(), "at offset 9: expected INT");
    }

    #[test]
    fn unknown_names() {
        let err = parse_ring_spec("ex9").unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(parse_ring_spec("prod(Z(2))").is_err());
        assert!(parse_endo_spec("frobenius").is_err());
        assert!(parse_ring_spec("Z(2) Z(3)").is_err());
    }

    #[test]
    fn endos() {
        assert_eq!(parse_endo_spec("id").unwrap(), EndoSpec::Identity);
        assert_eq!(parse_endo_spec("table(0:0, 1:1)").unwrap(), EndoSpec::Table(vec![(0, 0), (1, 1)]));
        assert_eq!(parse_endo_spec("swap").unwrap(), EndoSpec::Named("swap".into()));
    }

    #[test]
    fn elements() {
        assert_eq!(parse_element("-3").unwrap(), ElemLit::Int(-3));
        assert_eq!(parse_element("(1,0)").unwrap().to_string(), "(1,0)");
        assert_eq!(parse_element("(7)").unwrap(), ElemLit::Int(7));
        assert_eq!(parse_element("1 + t^2").unwrap().to_string(), "1 + t^2");
        assert_eq!(parse_element("(1,0) + (0,1)*x").unwrap().to_string(), "(1,0) + (0,1)*x");
        assert_eq!(parse_element("- t").unwrap().to_string(), "-t");
    }
}
