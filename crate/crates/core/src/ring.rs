//! Finite unital rings with elements encoded as dense indices.
//!
//! Every ring knows how to add, multiply and negate indices. Rings of order
//! at most [`TABLE_THRESHOLD`] are backed by Cayley tables; larger ones
//! compute structurally (digits of the index in the base ring). The two
//! paths agree by construction since the tables are filled from the
//! structural operations.
//!
//! Index encodings:
//! * `prod(A,B)`: `(a,b) -> a + |A|*b`;
//! * `mat(n,S)`: row-major entries, entry `(0,0)` least significant;
//! * truncated (skew) polynomials: coefficient `c_0` most significant;
//! * `sub(P; ...)`: position among the members sorted by ambient index.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::endo::Endomorphism;
use crate::error::{Error, Result};
use crate::literal::{ElemLit, Term};
use crate::verdict::{
    index_tuples, Scan, Verdict, PAIR_SCAN_CAP, TRIPLE_SCAN_CAP,
};

/// Largest ring a constructor will produce.
pub const MAX_ORDER: usize = 65_536;
/// Rings up to this order get Cayley tables.
pub const TABLE_THRESHOLD: usize = 256;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub usize);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Raw ring data as supplied by a caller: row-major Cayley tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingTables {
    pub order: usize,
    pub add: Vec<usize>,
    pub mul: Vec<usize>,
    pub neg: Vec<usize>,
    pub zero: usize,
    pub one: usize,
}

impl RingTables {
    fn check_total(&self) -> Result<()> {
        let n = self.order;
        if n == 0 {
            return Err(Error::ZeroOrder);
        }
        let sq = n.checked_mul(n).ok_or_else(|| Error::cap("table", n as u128, MAX_ORDER as u128))?;
        for (name, table, len) in [("add", &self.add, sq), ("mul", &self.mul, sq), ("neg", &self.neg, n)] {
            if table.len() != len {
                return Err(Error::NotTotal {
                    what: "ring table",
                    detail: format!("{name} has {} entries, expected {len}", table.len()),
                });
            }
            if let Some(pos) = table.iter().position(|&v| v >= n) {
                return Err(Error::NotTotal {
                    what: "ring table",
                    detail: format!("{name}[{pos}] = {} is out of range", table[pos]),
                });
            }
        }
        if self.zero >= n || self.one >= n {
            return Err(Error::NotTotal {
                what: "ring table",
                detail: "zero or one is out of range".into(),
            });
        }
        Ok(())
    }
}

/// Minimal arithmetic interface shared by validated rings and raw tables.
pub trait RingOps: Sync {
    fn order(&self) -> usize;
    fn zero(&self) -> ElementId;
    fn one(&self) -> ElementId;
    fn add(&self, a: ElementId, b: ElementId) -> ElementId;
    fn mul(&self, a: ElementId, b: ElementId) -> ElementId;
    fn neg(&self, a: ElementId) -> ElementId;
}

impl RingOps for RingTables {
    fn order(&self) -> usize {
        self.order
    }
    fn zero(&self) -> ElementId {
        ElementId(self.zero)
    }
    fn one(&self) -> ElementId {
        ElementId(self.one)
    }
    fn add(&self, a: ElementId, b: ElementId) -> ElementId {
        ElementId(self.add[a.0 * self.order + b.0])
    }
    fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        ElementId(self.mul[a.0 * self.order + b.0])
    }
    fn neg(&self, a: ElementId) -> ElementId {
        ElementId(self.neg[a.0])
    }
}

#[derive(Debug)]
struct Tables {
    add: Vec<ElementId>,
    mul: Vec<ElementId>,
    neg: Vec<ElementId>,
}

#[derive(Debug)]
pub(crate) enum Repr {
    Tabulated,
    Integers {
        modulus: usize,
    },
    Product {
        left: Arc<FiniteRing>,
        right: Arc<FiniteRing>,
    },
    Matrix {
        dim: usize,
        base: Arc<FiniteRing>,
    },
    /// `base[var]/(var^len)`, twisted by `twist` when present.
    Series {
        base: Arc<FiniteRing>,
        twist: Option<Arc<Endomorphism>>,
        len: usize,
        var: &'static str,
    },
    Sub {
        parent: Arc<FiniteRing>,
        members: Vec<ElementId>,
        local: HashMap<ElementId, ElementId>,
    },
}

/// A finite associative ring with unity.
pub struct FiniteRing {
    label: String,
    order: usize,
    zero: ElementId,
    one: ElementId,
    repr: Repr,
    tables: Option<Tables>,
    additive_gens: OnceLock<Vec<ElementId>>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn digits(mut idx: usize, radix: usize, len: usize) -> Vec<ElementId> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(ElementId(idx % radix));
        idx /= radix;
    }
    out
}

fn undigits(ds: &[ElementId], radix: usize) -> usize {
    ds.iter().rev().fold(0, |acc, d| acc * radix + d.0)
}

fn checked_order(what: &str, radix: usize, len: usize, cap: usize) -> Result<usize> {
    let mut order: u128 = 1;
    for _ in 0..len {
        order = order.saturating_mul(radix as u128);
    }
    if order > cap as u128 {
        return Err(Error::cap(what, order, cap as u128));
    }
    Ok(order as usize)
}

impl FiniteRing {
    // ---------------------------------------------------------------- build

    fn assemble(label: String, order: usize, zero: ElementId, one: ElementId, repr: Repr, checked: bool) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        let mut ring = FiniteRing {
            label,
            order,
            zero,
            one,
            repr,
            tables: None,
            additive_gens: OnceLock::new(),
        };
        if !checked {
            return Ok(ring);
        }
        if order > MAX_ORDER {
            return Err(Error::cap(format!("ring {}", ring.label), order as u128, MAX_ORDER as u128));
        }
        if order <= TABLE_THRESHOLD {
            ring.tables = Some(ring.tabulate());
        }
        let verdict = ring.validate();
        if !verdict.holds {
            return Err(Error::InvalidRing(verdict));
        }
        Ok(ring)
    }

    fn tabulate(&self) -> Tables {
        let n = self.order;
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                add.push(self.add_structural(ElementId(a), ElementId(b)));
                mul.push(self.mul_structural(ElementId(a), ElementId(b)));
            }
        }
        let neg = (0..n).map(|a| self.neg_structural(ElementId(a))).collect();
        Tables { add, mul, neg }
    }

    /// Builds a ring from caller-supplied tables after checking totality and
    /// every ring axiom.
    pub fn from_tables(label: impl Into<String>, tables: &RingTables) -> Result<Self> {
        tables.check_total()?;
        if tables.order > MAX_ORDER {
            return Err(Error::cap("ring", tables.order as u128, MAX_ORDER as u128));
        }
        let verdict = validate_ring(tables)?;
        if !verdict.holds {
            return Err(Error::InvalidRing(verdict));
        }
        let wrap = |v: &[usize]| v.iter().map(|&x| ElementId(x)).collect::<Vec<_>>();
        Ok(FiniteRing {
            label: label.into(),
            order: tables.order,
            zero: ElementId(tables.zero),
            one: ElementId(tables.one),
            repr: Repr::Tabulated,
            tables: Some(Tables {
                add: wrap(&tables.add),
                mul: wrap(&tables.mul),
                neg: wrap(&tables.neg),
            }),
            additive_gens: OnceLock::new(),
        })
    }

    /// `Z/nZ`.
    pub fn integers(modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroOrder);
        }
        Self::assemble(
            format!("Z({modulus})"),
            modulus,
            ElementId(0),
            ElementId(1 % modulus),
            Repr::Integers { modulus },
            true,
        )
    }

    pub fn product(left: Arc<FiniteRing>, right: Arc<FiniteRing>) -> Result<Self> {
        let order = left.order.checked_mul(right.order).unwrap_or(usize::MAX);
        let zero = ElementId(left.zero.0 + left.order * right.zero.0);
        let one = ElementId(left.one.0 + left.order * right.one.0);
        Self::assemble(
            format!("prod({},{})", left.label, right.label),
            order,
            zero,
            one,
            Repr::Product { left, right },
            true,
        )
    }

    pub fn matrix(dim: usize, base: Arc<FiniteRing>) -> Result<Self> {
        Self::matrix_inner(dim, base, true)
    }

    /// A matrix ring used only as the ambient ring of a subring: neither
    /// capped at [`MAX_ORDER`] nor tabulated nor validated.
    pub(crate) fn matrix_ambient(dim: usize, base: Arc<FiniteRing>) -> Result<Self> {
        Self::matrix_inner(dim, base, false)
    }

    fn matrix_inner(dim: usize, base: Arc<FiniteRing>, checked: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("matrix dimension must be positive".into()));
        }
        let cap = if checked { MAX_ORDER } else { usize::MAX >> 1 };
        let order = checked_order(&format!("mat({dim},{})", base.label), base.order, dim * dim, cap)?;
        let mut zero = vec![base.zero; dim * dim];
        let zero_id = ElementId(undigits(&zero, base.order));
        for i in 0..dim {
            zero[i * dim + i] = base.one;
        }
        let one_id = ElementId(undigits(&zero, base.order));
        Self::assemble(
            format!("mat({dim},{})", base.label),
            order,
            zero_id,
            one_id,
            Repr::Matrix { dim, base },
            checked,
        )
    }

    /// `base[t]/(t^len)`.
    pub fn truncated_poly(base: Arc<FiniteRing>, len: usize) -> Result<Self> {
        let label = format!("truncpoly({},{len})", base.label);
        Self::series(label, base, None, len, "t")
    }

    pub(crate) fn series(
        label: String,
        base: Arc<FiniteRing>,
        twist: Option<Arc<Endomorphism>>,
        len: usize,
        var: &'static str,
    ) -> Result<Self> {
        if len == 0 {
            return Err(Error::Shape("truncation order must be at least 1".into()));
        }
        if let Some(s) = &twist {
            if !Arc::ptr_eq(s.ring(), &base) {
                return Err(Error::Mismatch);
            }
        }
        let order = checked_order(&label, base.order, len, MAX_ORDER)?;
        let mut coeffs = vec![base.zero; len];
        let zero = ElementId(series_encode(&coeffs, base.order));
        coeffs[0] = base.one;
        let one = ElementId(series_encode(&coeffs, base.order));
        Self::assemble(label, order, zero, one, Repr::Series { base, twist, len, var }, true)
    }

    /// The subring of `parent` generated by `gens` (together with 0 and 1).
    pub fn subring(parent: Arc<FiniteRing>, gens: &[ElementId]) -> Result<Self> {
        Self::subring_capped(parent, gens, MAX_ORDER)
    }

    /// [`subring`](Self::subring), failing with [`Error::Cap`] as soon as the
    /// subring exceeds `cap` elements.
    pub fn subring_capped(parent: Arc<FiniteRing>, gens: &[ElementId], cap: usize) -> Result<Self> {
        for g in gens {
            if g.0 >= parent.order {
                return Err(Error::Literal(format!("{g} is not an element of {}", parent.label)));
            }
        }
        let mut members = subring_closure(&parent, gens, cap.min(MAX_ORDER))?;
        members.sort_unstable();
        let local: HashMap<ElementId, ElementId> = members
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, ElementId(i)))
            .collect();
        let gen_text: Vec<String> = gens.iter().map(|&g| parent.format(g)).collect();
        let label = format!("sub({};{})", parent.label, gen_text.join(","));
        let zero = local[&parent.zero];
        let one = local[&parent.one];
        let order = members.len();
        Self::assemble(label, order, zero, one, Repr::Sub { parent, members, local }, true)
    }

    /// Same ring, different display label.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    // ------------------------------------------------------------ accessors

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> ElementId {
        self.zero
    }

    pub fn one(&self) -> ElementId {
        self.one
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.order).map(ElementId)
    }

    pub fn contains(&self, e: ElementId) -> bool {
        e.0 < self.order
    }

    // ----------------------------------------------------------- arithmetic

    #[inline]
    pub fn add(&self, a: ElementId, b: ElementId) -> ElementId {
        match &self.tables {
            Some(t) => t.add[a.0 * self.order + b.0],
            None => self.add_structural(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        match &self.tables {
            Some(t) => t.mul[a.0 * self.order + b.0],
            None => self.mul_structural(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: ElementId) -> ElementId {
        match &self.tables {
            Some(t) => t.neg[a.0],
            None => self.neg_structural(a),
        }
    }

    pub fn sub(&self, a: ElementId, b: ElementId) -> ElementId {
        self.add(a, self.neg(b))
    }

    pub fn is_zero(&self, a: ElementId) -> bool {
        a == self.zero
    }

    pub fn is_idempotent(&self, e: ElementId) -> bool {
        self.mul(e, e) == e
    }

    /// `a * b * c`.
    pub fn mul3(&self, a: ElementId, b: ElementId, c: ElementId) -> ElementId {
        self.mul(self.mul(a, b), c)
    }

    fn add_structural(&self, a: ElementId, b: ElementId) -> ElementId {
        match &self.repr {
            Repr::Tabulated => unreachable!("tabulated rings always carry tables"),
            Repr::Integers { modulus } => ElementId((a.0 + b.0) % modulus),
            Repr::Product { left, right } => {
                let (a1, a2) = split(a, left.order);
                let (b1, b2) = split(b, left.order);
                join(left.add(a1, b1), right.add(a2, b2), left.order)
            }
            Repr::Matrix { dim, base } => {
                let n = dim * dim;
                let x = digits(a.0, base.order, n);
                let y = digits(b.0, base.order, n);
                let z: Vec<ElementId> = x.iter().zip(&y).map(|(&p, &q)| base.add(p, q)).collect();
                ElementId(undigits(&z, base.order))
            }
            Repr::Series { base, len, .. } => {
                let x = series_decode(a.0, base.order, *len);
                let y = series_decode(b.0, base.order, *len);
                let z: Vec<ElementId> = x.iter().zip(&y).map(|(&p, &q)| base.add(p, q)).collect();
                ElementId(series_encode(&z, base.order))
            }
            Repr::Sub { parent, members, local } => local[&parent.add(members[a.0], members[b.0])],
        }
    }

    fn mul_structural(&self, a: ElementId, b: ElementId) -> ElementId {
        match &self.repr {
            Repr::Tabulated => unreachable!("tabulated rings always carry tables"),
            Repr::Integers { modulus } => ElementId((a.0 * b.0) % modulus),
            Repr::Product { left, right } => {
                let (a1, a2) = split(a, left.order);
                let (b1, b2) = split(b, left.order);
                join(left.mul(a1, b1), right.mul(a2, b2), left.order)
            }
            Repr::Matrix { dim, base } => {
                let d = *dim;
                let x = digits(a.0, base.order, d * d);
                let y = digits(b.0, base.order, d * d);
                let mut z = vec![base.zero; d * d];
                for i in 0..d {
                    for j in 0..d {
                        let mut acc = base.zero;
                        for k in 0..d {
                            acc = base.add(acc, base.mul(x[i * d + k], y[k * d + j]));
                        }
                        z[i * d + j] = acc;
                    }
                }
                ElementId(undigits(&z, base.order))
            }
            Repr::Series { base, twist, len, .. } => {
                let f = series_decode(a.0, base.order, *len);
                let g = series_decode(b.0, base.order, *len);
                let h = truncated_product(base, twist.as_deref(), &f, &g, *len);
                ElementId(series_encode(&h, base.order))
            }
            Repr::Sub { parent, members, local } => local[&parent.mul(members[a.0], members[b.0])],
        }
    }

    fn neg_structural(&self, a: ElementId) -> ElementId {
        match &self.repr {
            Repr::Tabulated => unreachable!("tabulated rings always carry tables"),
            Repr::Integers { modulus } => ElementId((modulus - a.0) % modulus),
            Repr::Product { left, right } => {
                let (a1, a2) = split(a, left.order);
                join(left.neg(a1), right.neg(a2), left.order)
            }
            Repr::Matrix { dim, base } => {
                let x = digits(a.0, base.order, dim * dim);
                let z: Vec<ElementId> = x.iter().map(|&p| base.neg(p)).collect();
                ElementId(undigits(&z, base.order))
            }
            Repr::Series { base, len, .. } => {
                let x = series_decode(a.0, base.order, *len);
                let z: Vec<ElementId> = x.iter().map(|&p| base.neg(p)).collect();
                ElementId(series_encode(&z, base.order))
            }
            Repr::Sub { parent, members, local } => local[&parent.neg(members[a.0])],
        }
    }

    // ---------------------------------------------------------------- views

    /// Entries of `e` when the ring is a matrix ring or a subring of one.
    pub fn matrix_entries(&self, e: ElementId) -> Option<(usize, &Arc<FiniteRing>, Vec<ElementId>)> {
        match &self.repr {
            Repr::Matrix { dim, base } => Some((*dim, base, digits(e.0, base.order, dim * dim))),
            Repr::Sub { parent, members, .. } => parent.matrix_entries(members[e.0]),
            _ => None,
        }
    }

    /// Inverse of [`matrix_entries`](Self::matrix_entries); `None` when the
    /// matrix is not a member of this ring.
    pub fn from_matrix_entries(&self, entries: &[ElementId]) -> Option<ElementId> {
        match &self.repr {
            Repr::Matrix { dim, base } if entries.len() == dim * dim => Some(ElementId(undigits(entries, base.order))),
            Repr::Sub { parent, local, .. } => {
                let p = parent.from_matrix_entries(entries)?;
                local.get(&p).copied()
            }
            _ => None,
        }
    }

    pub fn product_parts(&self, e: ElementId) -> Option<(ElementId, ElementId)> {
        match &self.repr {
            Repr::Product { left, .. } => Some(split(e, left.order)),
            _ => None,
        }
    }

    pub fn product_factors(&self) -> Option<(&Arc<FiniteRing>, &Arc<FiniteRing>)> {
        match &self.repr {
            Repr::Product { left, right } => Some((left, right)),
            _ => None,
        }
    }

    pub fn from_product_parts(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        match &self.repr {
            Repr::Product { left, .. } => Some(join(a, b, left.order)),
            _ => None,
        }
    }

    /// Coefficients `c_0..c_{m-1}` when the ring is a truncated (skew)
    /// polynomial ring.
    pub fn series_coefficients(&self, e: ElementId) -> Option<Vec<ElementId>> {
        match &self.repr {
            Repr::Series { base, len, .. } => Some(series_decode(e.0, base.order, *len)),
            _ => None,
        }
    }

    pub fn from_series_coefficients(&self, coeffs: &[ElementId]) -> Option<ElementId> {
        match &self.repr {
            Repr::Series { base, len, .. } if coeffs.len() == *len => Some(ElementId(series_encode(coeffs, base.order))),
            _ => None,
        }
    }

    pub fn series_base(&self) -> Option<&Arc<FiniteRing>> {
        match &self.repr {
            Repr::Series { base, .. } => Some(base),
            _ => None,
        }
    }

    // ------------------------------------------------------------- literals

    /// Renders `e` in element-literal syntax.
    pub fn format(&self, e: ElementId) -> String {
        match &self.repr {
            Repr::Tabulated | Repr::Integers { .. } => e.0.to_string(),
            Repr::Product { left, right } => {
                let (a, b) = split(e, left.order);
                format!("({},{})", left.format(a), right.format(b))
            }
            Repr::Matrix { dim, base } => {
                let x = digits(e.0, base.order, dim * dim);
                let rows: Vec<String> = x
                    .chunks(*dim)
                    .map(|row| {
                        let cells: Vec<String> = row.iter().map(|&c| base.format(c)).collect();
                        format!("[{}]", cells.join(","))
                    })
                    .collect();
                format!("[{}]", rows.join(","))
            }
            Repr::Series { base, len, var, .. } => {
                let x = series_decode(e.0, base.order, *len);
                let mut terms = Vec::new();
                for (i, &c) in x.iter().enumerate() {
                    if c == base.zero {
                        continue;
                    }
                    let mut cs = base.format(c);
                    if cs.contains('+') || cs.starts_with('-') {
                        cs = format!("({cs})");
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => var.to_string(),
                        _ => format!("{var}^{i}"),
                    };
                    terms.push(match (i, c == base.one) {
                        (0, _) => cs,
                        (_, true) => mono,
                        (_, false) => format!("{cs}*{mono}"),
                    });
                }
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join(" + ")
                }
            }
            Repr::Sub { parent, members, .. } => parent.format(members[e.0]),
        }
    }

    /// Resolves an element literal against this ring.
    pub fn resolve(&self, lit: &ElemLit) -> Result<ElementId> {
        match &self.repr {
            Repr::Tabulated => match lit {
                ElemLit::Int(k) if *k >= 0 && (*k as usize) < self.order => Ok(ElementId(*k as usize)),
                _ => Err(Error::Literal(format!("`{lit}` is not an element index of {}", self.label))),
            },
            Repr::Integers { modulus } => match lit {
                ElemLit::Int(k) => Ok(ElementId(k.rem_euclid(*modulus as i64) as usize)),
                ElemLit::Poly(_) => self.resolve_sum(lit),
                _ => Err(Error::Literal(format!("`{lit}` is not a residue of {}", self.label))),
            },
            Repr::Product { left, right } => match lit {
                ElemLit::Tuple(items) if items.len() == 2 => {
                    Ok(join(left.resolve(&items[0])?, right.resolve(&items[1])?, left.order))
                }
                ElemLit::Poly(_) => self.resolve_sum(lit),
                _ => Err(Error::Literal(format!("`{lit}` is not a pair in {}", self.label))),
            },
            Repr::Matrix { dim, base } => match lit {
                ElemLit::List(rows) if rows.len() == *dim => {
                    let mut entries = Vec::with_capacity(dim * dim);
                    for row in rows {
                        match row {
                            ElemLit::List(cells) if cells.len() == *dim => {
                                for c in cells {
                                    entries.push(base.resolve(c)?);
                                }
                            }
                            _ => return Err(Error::Literal(format!("`{row}` is not a row of length {dim}"))),
                        }
                    }
                    Ok(ElementId(undigits(&entries, base.order)))
                }
                ElemLit::Poly(_) => self.resolve_sum(lit),
                _ => Err(Error::Literal(format!("`{lit}` is not a {dim}x{dim} matrix"))),
            },
            Repr::Series { base, len, var, .. } => match lit {
                ElemLit::Poly(terms) => {
                    let mut coeffs = vec![base.zero; *len];
                    for term in terms {
                        let c = match &term.coeff {
                            Some(c) => base.resolve(c)?,
                            None => base.one,
                        };
                        let c = if term.negated { base.neg(c) } else { c };
                        let power = match &term.var {
                            None => 0,
                            Some(v) if v == var => term.power as usize,
                            Some(v) => {
                                return Err(Error::Literal(format!("unexpected variable `{v}`, expected `{var}`")))
                            }
                        };
                        if power >= *len {
                            return Err(Error::Literal(format!("{var}^{power} vanishes in {}", self.label)));
                        }
                        coeffs[power] = base.add(coeffs[power], c);
                    }
                    Ok(ElementId(series_encode(&coeffs, base.order)))
                }
                constant => {
                    let mut coeffs = vec![base.zero; *len];
                    coeffs[0] = base.resolve(constant)?;
                    Ok(ElementId(series_encode(&coeffs, base.order)))
                }
            },
            Repr::Sub { parent, local, .. } => {
                let p = parent.resolve(lit)?;
                local
                    .get(&p)
                    .copied()
                    .ok_or_else(|| Error::Literal(format!("`{lit}` is not in {}", self.label)))
            }
        }
    }

    /// Sums of constants without a variable, e.g. `1 + 2` or `-3`.
    fn resolve_sum(&self, lit: &ElemLit) -> Result<ElementId> {
        let ElemLit::Poly(terms) = lit else {
            return self.resolve(lit);
        };
        let mut acc = self.zero;
        for term in terms {
            if term.var.is_some() {
                return Err(Error::Literal(format!("`{lit}` has a variable but {} is not a polynomial ring", self.label)));
            }
            let c = match &term.coeff {
                Some(c) => self.resolve(c)?,
                None => self.one,
            };
            acc = self.add(acc, if term.negated { self.neg(c) } else { c });
        }
        Ok(acc)
    }

    /// Literal syntax tree of `e`; `resolve(&literal(e)) == e`.
    pub fn literal(&self, e: ElementId) -> ElemLit {
        match &self.repr {
            Repr::Tabulated | Repr::Integers { .. } => ElemLit::Int(e.0 as i64),
            Repr::Product { left, right } => {
                let (a, b) = split(e, left.order);
                ElemLit::Tuple(vec![left.literal(a), right.literal(b)])
            }
            Repr::Matrix { dim, base } => {
                let x = digits(e.0, base.order, dim * dim);
                ElemLit::List(
                    x.chunks(*dim)
                        .map(|row| ElemLit::List(row.iter().map(|&c| base.literal(c)).collect()))
                        .collect(),
                )
            }
            Repr::Series { base, len, var, .. } => {
                let x = series_decode(e.0, base.order, *len);
                let terms: Vec<Term> = x
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != base.zero)
                    .map(|(i, &c)| {
                        let coeff = (i == 0 || c != base.one).then(|| base.literal(c));
                        if i == 0 {
                            Term::constant(coeff.expect("constant term has a coefficient"))
                        } else {
                            Term::monomial(coeff, var, i as u32)
                        }
                    })
                    .collect();
                match terms.len() {
                    0 => ElemLit::Int(0),
                    1 if terms[0].var.is_none() => terms[0].coeff.clone().expect("constant"),
                    _ => ElemLit::Poly(terms),
                }
            }
            Repr::Sub { parent, members, .. } => parent.literal(members[e.0]),
        }
    }

    // ------------------------------------------------------------- queries

    /// Validates the ring axioms with the default scan policy.
    pub fn validate(&self) -> Verdict {
        check_axioms(
            self,
            Scan::auto(self.order, PAIR_SCAN_CAP),
            Scan::auto(self.order, TRIPLE_SCAN_CAP),
        )
    }

    /// A small set of elements whose additive span is the whole ring.
    pub fn additive_generators(&self) -> &[ElementId] {
        self.additive_gens.get_or_init(|| {
            let all: Vec<ElementId> = self.elements().collect();
            additive_basis(self, &all)
        })
    }

    pub fn is_commutative(&self) -> bool {
        let gens = self.additive_generators();
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }
}

impl RingOps for FiniteRing {
    fn order(&self) -> usize {
        self.order
    }
    fn zero(&self) -> ElementId {
        self.zero
    }
    fn one(&self) -> ElementId {
        self.one
    }
    fn add(&self, a: ElementId, b: ElementId) -> ElementId {
        FiniteRing::add(self, a, b)
    }
    fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        FiniteRing::mul(self, a, b)
    }
    fn neg(&self, a: ElementId) -> ElementId {
        FiniteRing::neg(self, a)
    }
}

#[inline]
fn split(e: ElementId, left_order: usize) -> (ElementId, ElementId) {
    (ElementId(e.0 % left_order), ElementId(e.0 / left_order))
}

#[inline]
fn join(a: ElementId, b: ElementId, left_order: usize) -> ElementId {
    ElementId(a.0 + left_order * b.0)
}

pub(crate) fn series_decode(mut idx: usize, radix: usize, len: usize) -> Vec<ElementId> {
    let mut out = vec![ElementId(0); len];
    for slot in out.iter_mut().rev() {
        *slot = ElementId(idx % radix);
        idx /= radix;
    }
    out
}

pub(crate) fn series_encode(coeffs: &[ElementId], radix: usize) -> usize {
    coeffs.iter().fold(0, |acc, c| acc * radix + c.0)
}

/// `sum_{i+j=n} f_i * twist^i(g_j)` for `n < len`.
pub(crate) fn truncated_product(
    base: &FiniteRing,
    twist: Option<&Endomorphism>,
    f: &[ElementId],
    g: &[ElementId],
    len: usize,
) -> Vec<ElementId> {
    let mut out = vec![base.zero; len];
    for (i, &fi) in f.iter().enumerate().take(len) {
        if fi == base.zero {
            continue;
        }
        for (j, &gj) in g.iter().enumerate().take(len - i) {
            if gj == base.zero {
                continue;
            }
            let twisted = match twist {
                Some(s) => s.apply_pow(i, gj),
                None => gj,
            };
            out[i + j] = base.add(out[i + j], base.mul(fi, twisted));
        }
    }
    out
}

// ------------------------------------------------------------------ spans

/// Dense membership set over a ring's indices, or a hash set for ambient
/// rings too large to index densely.
enum Membership {
    Dense(Vec<bool>),
    Sparse(HashSet<ElementId>),
}

impl Membership {
    fn new(order: usize) -> Self {
        if order <= MAX_ORDER {
            Membership::Dense(vec![false; order])
        } else {
            Membership::Sparse(HashSet::new())
        }
    }

    fn contains(&self, e: ElementId) -> bool {
        match self {
            Membership::Dense(v) => v[e.0],
            Membership::Sparse(s) => s.contains(&e),
        }
    }

    fn insert(&mut self, e: ElementId) -> bool {
        match self {
            Membership::Dense(v) => !std::mem::replace(&mut v[e.0], true),
            Membership::Sparse(s) => s.insert(e),
        }
    }
}

/// Incrementally maintained additive subgroup.
struct Span {
    members: Vec<ElementId>,
    seen: Membership,
}

impl Span {
    fn new<R: RingOps + ?Sized>(ring: &R) -> Self {
        let mut seen = Membership::new(ring.order());
        seen.insert(ring.zero());
        Span {
            members: vec![ring.zero()],
            seen,
        }
    }

    /// Adjoins `s`; returns false when `s` was already in the span.
    fn adjoin<R: RingOps + ?Sized>(&mut self, ring: &R, s: ElementId, cap: usize) -> Result<bool> {
        if self.seen.contains(s) {
            return Ok(false);
        }
        let old = self.members.clone();
        let mut multiple = s;
        while !self.seen.contains(multiple) {
            for &x in &old {
                let y = ring.add(x, multiple);
                if self.seen.insert(y) {
                    self.members.push(y);
                }
            }
            if self.members.len() > cap {
                return Err(Error::cap("additive span", self.members.len() as u128, cap as u128));
            }
            multiple = ring.add(multiple, s);
        }
        Ok(true)
    }
}

/// Greedy additive generating set for the subgroup spanned by `elements`.
pub fn additive_basis<R: RingOps + ?Sized>(ring: &R, elements: &[ElementId]) -> Vec<ElementId> {
    let mut span = Span::new(ring);
    let mut basis = Vec::new();
    for &e in elements {
        if span.adjoin(ring, e, usize::MAX).expect("uncapped span") {
            basis.push(e);
        }
    }
    basis
}

/// Every element of the additive subgroup spanned by `elements`, sorted.
pub fn additive_span<R: RingOps + ?Sized>(ring: &R, elements: &[ElementId]) -> Vec<ElementId> {
    let mut span = Span::new(ring);
    for &e in elements {
        span.adjoin(ring, e, usize::MAX).expect("uncapped span");
    }
    let mut out = span.members;
    out.sort_unstable();
    out
}

/// Elements of the subring generated by `gens`: the additive span of all
/// finite products of generators (including the empty product 1).
pub(crate) fn subring_closure(ring: &FiniteRing, gens: &[ElementId], cap: usize) -> Result<Vec<ElementId>> {
    let mut words = Membership::new(ring.order);
    let mut queue = vec![ring.one];
    words.insert(ring.one);
    let mut monoid = Vec::new();
    while let Some(w) = queue.pop() {
        monoid.push(w);
        if monoid.len() > cap {
            return Err(Error::cap("subring closure", monoid.len() as u128, cap as u128));
        }
        for &g in gens {
            let next = ring.mul(w, g);
            if words.insert(next) {
                queue.push(next);
            }
        }
    }
    monoid.sort_unstable();
    let mut span = Span::new(ring);
    for &w in &monoid {
        span.adjoin(ring, w, cap)?;
    }
    Ok(span.members)
}

// ------------------------------------------------------------ validation

/// Checks every ring axiom on caller-supplied tables. Pair axioms are
/// exhaustive up to order 4096 and triple axioms up to 256; beyond that they
/// are sampled and the verdict is marked as such.
pub fn validate_ring(candidate: &RingTables) -> Result<Verdict> {
    candidate.check_total()?;
    Ok(check_axioms(
        candidate,
        Scan::auto(candidate.order, PAIR_SCAN_CAP),
        Scan::auto(candidate.order, TRIPLE_SCAN_CAP),
    ))
}

pub const RING_AXIOMS: [&str; 8] = [
    "additive identity",
    "additive inverse",
    "multiplicative identity",
    "additive commutativity",
    "additive associativity",
    "multiplicative associativity",
    "left distributivity",
    "right distributivity",
];

/// Does `witness` violate `axiom`?
pub fn axiom_fails<R: RingOps + ?Sized>(r: &R, axiom: &str, witness: &[ElementId]) -> bool {
    let (z, o) = (r.zero(), r.one());
    match (axiom, witness) {
        ("additive identity", &[a]) => r.add(a, z) != a || r.add(z, a) != a,
        ("additive inverse", &[a]) => r.add(a, r.neg(a)) != z || r.add(r.neg(a), a) != z,
        ("multiplicative identity", &[a]) => r.mul(a, o) != a || r.mul(o, a) != a,
        ("additive commutativity", &[a, b]) => r.add(a, b) != r.add(b, a),
        ("additive associativity", &[a, b, c]) => r.add(r.add(a, b), c) != r.add(a, r.add(b, c)),
        ("multiplicative associativity", &[a, b, c]) => r.mul(r.mul(a, b), c) != r.mul(a, r.mul(b, c)),
        ("left distributivity", &[a, b, c]) => r.mul(a, r.add(b, c)) != r.add(r.mul(a, b), r.mul(a, c)),
        ("right distributivity", &[a, b, c]) => r.mul(r.add(a, b), c) != r.add(r.mul(a, c), r.mul(b, c)),
        _ => false,
    }
}

pub fn check_axioms<R: RingOps + ?Sized>(r: &R, pairs: Scan, triples: Scan) -> Verdict {
    const NAME: &str = "ring-axioms";
    let n = r.order();
    let ids = |t: &[usize]| t.iter().map(|&i| ElementId(i)).collect::<Vec<_>>();
    for (axiom, arity) in RING_AXIOMS.iter().zip([1u32, 1, 1, 2, 3, 3, 3, 3]) {
        let scan = match arity {
            1 => Scan::Exhaustive,
            2 => pairs,
            _ => triples,
        };
        let found = index_tuples(n, arity, scan).first(|t| {
            let w = ids(t);
            axiom_fails(r, axiom, &w).then_some(w)
        });
        if let Some(w) = found {
            return Verdict::fails(NAME, w).with_detail(*axiom).scanned(scan);
        }
    }
    let sampled = triples.is_sampled() || pairs.is_sampled();
    let mut v = Verdict::holds(NAME);
    v.sampled = sampled;
    v
}

// ------------------------------------------------------- basic queries

/// `Id(R)`, ascending.
pub fn idempotents(ring: &FiniteRing) -> Vec<ElementId> {
    ring.elements().filter(|&e| ring.is_idempotent(e)).collect()
}

/// Right annihilator `{a | xa = 0 for all x in X}` or left annihilator
/// `{a | ax = 0 for all x in X}`, ascending.
pub fn annihilator(ring: &FiniteRing, set: &[ElementId], side: Side) -> Vec<ElementId> {
    let gens = additive_basis(ring, set);
    ring.elements()
        .filter(|&a| {
            gens.iter().all(|&x| {
                let p = match side {
                    Side::Right => ring.mul(x, a),
                    Side::Left => ring.mul(a, x),
                };
                ring.is_zero(p)
            })
        })
        .collect()
}

/// Holds iff `re = er` for every `r`; the witness is the first `r` that
/// does not commute with `e`.
pub fn is_central(ring: &FiniteRing, e: ElementId) -> Verdict {
    const NAME: &str = "central";
    let commutes = |r: ElementId| ring.mul(r, e) == ring.mul(e, r);
    if ring.additive_generators().iter().all(|&g| commutes(g)) {
        return Verdict::holds(NAME);
    }
    let r = ring.elements().find(|&r| !commutes(r)).expect("a generator fails to commute");
    Verdict::fails(NAME, vec![r])
}

/// The two-sided ideal `R a R` (additive span of all `r a s`).
pub fn two_sided_ideal(ring: &FiniteRing, a: ElementId) -> Vec<ElementId> {
    let gens = ring.additive_generators();
    let mut products = Vec::with_capacity(gens.len() * gens.len());
    for &r in gens {
        let ra = ring.mul(r, a);
        for &s in gens {
            products.push(ring.mul(ra, s));
        }
    }
    additive_span(ring, &products)
}

/// `R a` as a set (already closed under addition).
pub fn left_multiples(ring: &FiniteRing, a: ElementId) -> Vec<ElementId> {
    let mut out: Vec<ElementId> = ring.elements().map(|r| ring.mul(r, a)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `a R` as a set.
pub fn right_multiples(ring: &FiniteRing, a: ElementId) -> Vec<ElementId> {
    let mut out: Vec<ElementId> = ring.elements().map(|r| ring.mul(a, r)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::integers(n).unwrap())
    }

    fn tables_of(r: &FiniteRing) -> RingTables {
        let n = r.order();
        let mut t = RingTables {
            order: n,
            add: Vec::new(),
            mul: Vec::new(),
            neg: Vec::new(),
            zero: r.zero().0,
            one: r.one().0,
        };
        for a in r.elements() {
            for b in r.elements() {
                t.add.push(r.add(a, b).0);
                t.mul.push(r.mul(a, b).0);
            }
            t.neg.push(r.neg(a).0);
        }
        t
    }

    #[test]
    fn z4_is_a_ring() {
        let r = z(4);
        assert!(r.validate().holds);
        assert!(validate_ring(&tables_of(&r)).unwrap().holds);
    }

    #[test]
    fn patched_z4_fails_with_replayable_witness() {
        let mut t = tables_of(&z(4));
        t.mul[2 * 4 + 2] = 1;
        let v = validate_ring(&t).unwrap();
        assert!(!v.holds);
        let axiom = v.detail.clone().unwrap();
        assert!(axiom.contains("associativity") || axiom.contains("distributivity"), "{axiom}");
        assert_eq!(v.witness.len(), 3);
        assert!(axiom_fails(&t, &axiom, &v.witness));

        // independent scan: first triple breaking the reported axiom
        let first = (0..4)
            .flat_map(|a| (0..4).flat_map(move |b| (0..4).map(move |c| [a, b, c])))
            .map(|t| t.map(ElementId))
            .find(|w| axiom_fails(&t, &axiom, w))
            .unwrap();
        assert_eq!(v.witness, first.to_vec());
        assert!(FiniteRing::from_tables("bad", &t).is_err());
    }

    #[test]
    fn rejects_empty_and_non_total_tables() {
        let empty = RingTables {
            order: 0,
            add: vec![],
            mul: vec![],
            neg: vec![],
            zero: 0,
            one: 0,
        };
        assert!(matches!(validate_ring(&empty), Err(Error::ZeroOrder)));
        let mut t = tables_of(&z(3));
        t.add[4] = 3;
        assert!(matches!(validate_ring(&t), Err(Error::NotTotal { .. })));
    }

    #[test]
    fn trivial_ring_is_accepted() {
        let r = z(1);
        assert_eq!(r.zero(), r.one());
        assert!(r.validate().holds);
        assert_eq!(idempotents(&r), vec![ElementId(0)]);
    }

    #[test]
    fn idempotents_of_small_rings() {
        let ids = |n| idempotents(&z(n)).iter().map(|e| e.0).collect::<Vec<_>>();
        assert_eq!(ids(4), vec![0, 1]);
        assert_eq!(ids(6), vec![0, 1, 3, 4]);
        let m = FiniteRing::matrix(2, z(2)).unwrap();
        let brute = m.elements().filter(|&e| m.mul(e, e) == e).count();
        assert_eq!(brute, 8);
        assert_eq!(idempotents(&m).len(), 8);
    }

    #[test]
    fn annihilators_in_z4() {
        let r = z(4);
        let e = |i| ElementId(i);
        assert_eq!(annihilator(&r, &[e(2)], Side::Right), vec![e(0), e(2)]);
        assert_eq!(annihilator(&r, &[e(0)], Side::Right).len(), 4);
        assert_eq!(annihilator(&r, &[e(1)], Side::Right), vec![e(0)]);
    }

    #[test]
    fn matrix_unit_is_not_central() {
        let m = FiniteRing::matrix(2, z(2)).unwrap();
        let lit = |rows: [[usize; 2]; 2]| {
            m.from_matrix_entries(&rows.concat().into_iter().map(ElementId).collect::<Vec<_>>())
                .unwrap()
        };
        let e11 = lit([[1, 0], [0, 0]]);
        let e12 = lit([[0, 1], [0, 0]]);
        let v = is_central(&m, e11);
        assert!(!v.holds);
        assert_eq!(v.witness, vec![e12]);
        assert!(is_central(&m, m.zero()).holds);
        assert!(is_central(&z(6), ElementId(3)).holds);
    }

    #[test]
    fn mat2_z2_axioms_hold_exhaustively() {
        let m = FiniteRing::matrix(2, z(2)).unwrap();
        let v = check_axioms(&m, Scan::Exhaustive, Scan::Exhaustive);
        assert!(v.holds && !v.sampled);
    }

    #[test]
    fn product_and_series_literals() {
        let p = FiniteRing::product(z(2), z(3)).unwrap();
        for e in p.elements() {
            assert_eq!(p.resolve(&p.literal(e)).unwrap(), e);
        }
        assert_eq!(p.format(ElementId(1)), "(1,0)");
        let t = FiniteRing::truncated_poly(z(2), 3).unwrap();
        for e in t.elements() {
            assert_eq!(t.resolve(&t.literal(e)).unwrap(), e);
        }
        let tt = t.resolve(&ElemLit::Poly(vec![Term::monomial(None, "t", 1)])).unwrap();
        assert_eq!(t.format(tt), "t");
        assert_eq!(t.format(t.mul(tt, tt)), "t^2");
        assert!(t.is_zero(t.mul(t.mul(tt, tt), tt)));
    }

    #[test]
    fn subring_closure_of_dual_numbers() {
        let m = Arc::new(FiniteRing::matrix(2, z(4)).unwrap());
        let e12 = m.from_matrix_entries(&[0, 1, 0, 0].map(ElementId)).unwrap();
        let s = FiniteRing::subring(m, &[e12]).unwrap();
        assert_eq!(s.order(), 16);
        assert!(s.is_commutative());
    }

    #[test]
    fn additive_span_covers_group() {
        let r = FiniteRing::product(z(4), z(6)).unwrap();
        let gens = r.additive_generators().to_vec();
        assert!(gens.len() <= 4);
        assert_eq!(additive_span(&r, &gens).len(), 24);
    }
}
