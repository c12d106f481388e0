//! Element literals: the surface syntax for ring elements.
//!
//! * `Z(n)` elements are decimal residues, e.g. `3` (negatives are reduced).
//! * product elements are parenthesized pairs, e.g. `(1,0)`.
//! * matrix elements are row-major nested lists, e.g. `[[1,0],[0,1]]`.
//! * truncated polynomial elements are sums of terms in `t`, e.g. `1 + t^2`;
//!   truncated skew ring elements use `x`, e.g. `(1,0) + (0,1)*x`.
//! * subring elements are written in the syntax of the ambient ring.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElemLit {
    Int(i64),
    Tuple(Vec<ElemLit>),
    List(Vec<ElemLit>),
    Poly(Vec<Term>),
}

/// One summand of a polynomial literal: `[-] [coeff *] var [^ power]` or a
/// bare (possibly negated) constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub negated: bool,
    pub coeff: Option<ElemLit>,
    pub var: Option<String>,
    pub power: u32,
}

impl Term {
    pub fn constant(coeff: ElemLit) -> Self {
        Term {
            negated: false,
            coeff: Some(coeff),
            var: None,
            power: 0,
        }
    }

    pub fn monomial(coeff: Option<ElemLit>, var: &str, power: u32) -> Self {
        Term {
            negated: false,
            coeff,
            var: Some(var.to_string()),
            power,
        }
    }
}

fn needs_parens(lit: &ElemLit) -> bool {
    matches!(lit, ElemLit::Poly(_)) || matches!(lit, ElemLit::Int(k) if *k < 0)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.coeff, &self.var) {
            (Some(c), None) => {
                if needs_parens(c) {
                    write!(f, "({c})")
                } else {
                    write!(f, "{c}")
                }
            }
            (coeff, Some(v)) => {
                if let Some(c) = coeff {
                    if needs_parens(c) {
                        write!(f, "({c})*")?;
                    } else {
                        write!(f, "{c}*")?;
                    }
                }
                write!(f, "{v}")?;
                if self.power != 1 {
                    write!(f, "^{}", self.power)?;
                }
                Ok(())
            }
            (None, None) => write!(f, "1"),
        }
    }
}

impl fmt::Display for ElemLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemLit::Int(k) => write!(f, "{k}"),
            ElemLit::Tuple(items) => write_seq(f, "(", items, ")"),
            ElemLit::List(items) => write_seq(f, "[", items, "]"),
            ElemLit::Poly(terms) => {
                for (i, term) in terms.iter().enumerate() {
                    match (i, term.negated) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    write!(f, "{term}")?;
                }
                if terms.is_empty() {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

fn write_seq(f: &mut fmt::Formatter<'_>, open: &str, items: &[ElemLit], close: &str) -> fmt::Result {
    write!(f, "{open}")?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{item}")?;
    }
    write!(f, "{close}")
}
