//! Skew polynomials over a finite ring, their idempotents, and the
//! finite-quotient `R[x;σ]/(x^m)`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::endo::Endomorphism;
use crate::error::{Error, Result};
use crate::ring::{idempotents, two_sided_ideal, ElementId, FiniteRing, MAX_ORDER};
use crate::verdict::{first_index, Verdict};

/// Default limit on `|R|^(d+1)` for the bounded idempotent search.
pub const IDEMPOTENT_SEARCH_CAP: u128 = 1 << 24;

/// An element of `R[x;σ]`, with coefficients `c_0, c_1, ...` and no trailing
/// zeros. The zero polynomial has no coefficients.
#[derive(Clone)]
pub struct SkewPolynomial {
    sigma: Arc<Endomorphism>,
    coeffs: Vec<ElementId>,
}

fn trim(ring: &FiniteRing, mut coeffs: Vec<ElementId>) -> Vec<ElementId> {
    while coeffs.last() == Some(&ring.zero()) {
        coeffs.pop();
    }
    coeffs
}

/// Coefficients of `f + g`.
pub fn skew_add(ring: &FiniteRing, f: &[ElementId], g: &[ElementId]) -> Vec<ElementId> {
    let n = f.len().max(g.len());
    let at = |v: &[ElementId], i: usize| v.get(i).copied().unwrap_or(ring.zero());
    trim(ring, (0..n).map(|i| ring.add(at(f, i), at(g, i))).collect())
}

/// Coefficients of `fg` in `R[x;σ]`: `(fg)_n = sum_{i+j=n} f_i σ^i(g_j)`.
pub fn skew_mul(sigma: &Endomorphism, f: &[ElementId], g: &[ElementId]) -> Vec<ElementId> {
    let ring = sigma.ring();
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); f.len() + g.len() - 1];
    for (i, &fi) in f.iter().enumerate() {
        if fi == ring.zero() {
            continue;
        }
        for (j, &gj) in g.iter().enumerate() {
            if gj == ring.zero() {
                continue;
            }
            out[i + j] = ring.add(out[i + j], ring.mul(fi, sigma.apply_pow(i, gj)));
        }
    }
    trim(ring, out)
}

impl SkewPolynomial {
    pub fn new(sigma: &Arc<Endomorphism>, coeffs: Vec<ElementId>) -> Result<Self> {
        let ring = sigma.ring();
        if let Some(bad) = coeffs.iter().find(|c| !ring.contains(**c)) {
            return Err(Error::Literal(format!("{bad} is not an element of {}", ring.label())));
        }
        Ok(SkewPolynomial {
            sigma: sigma.clone(),
            coeffs: trim(ring, coeffs),
        })
    }

    pub fn zero(sigma: &Arc<Endomorphism>) -> Self {
        SkewPolynomial {
            sigma: sigma.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(sigma: &Arc<Endomorphism>, c: ElementId) -> Self {
        Self::monomial(sigma, c, 0)
    }

    pub fn one(sigma: &Arc<Endomorphism>) -> Self {
        Self::constant(sigma, sigma.ring().one())
    }

    /// `c x^k`.
    pub fn monomial(sigma: &Arc<Endomorphism>, c: ElementId, k: usize) -> Self {
        let ring = sigma.ring();
        let mut coeffs = vec![ring.zero(); k + 1];
        coeffs[k] = c;
        SkewPolynomial {
            sigma: sigma.clone(),
            coeffs: trim(ring, coeffs),
        }
    }

    pub fn x(sigma: &Arc<Endomorphism>) -> Self {
        Self::monomial(sigma, sigma.ring().one(), 1)
    }

    pub fn sigma(&self) -> &Arc<Endomorphism> {
        &self.sigma
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        self.sigma.ring()
    }

    pub fn coeffs(&self) -> &[ElementId] {
        &self.coeffs
    }

    /// `c_i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> ElementId {
        self.coeffs.get(i).copied().unwrap_or(self.ring().zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients padded with zeros to length `len`.
    pub fn padded(&self, len: usize) -> Vec<ElementId> {
        (0..len.max(self.coeffs.len())).map(|i| self.coeff(i)).collect()
    }

    fn same_extension(&self, other: &Self) -> Result<()> {
        let same = Arc::ptr_eq(&self.sigma, &other.sigma)
            || (Arc::ptr_eq(self.sigma.ring(), other.sigma.ring()) && self.sigma.map() == other.sigma.map());
        if same {
            Ok(())
        } else {
            Err(Error::Mismatch)
        }
    }

    fn with(&self, coeffs: Vec<ElementId>) -> Self {
        SkewPolynomial {
            sigma: self.sigma.clone(),
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_extension(other)?;
        Ok(self.with(skew_add(self.ring(), &self.coeffs, &other.coeffs)))
    }

    pub fn neg(&self) -> Self {
        let ring = self.ring();
        self.with(self.coeffs.iter().map(|&c| ring.neg(c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_extension(other)?;
        Ok(self.with(skew_mul(&self.sigma, &self.coeffs, &other.coeffs)))
    }

    pub fn is_idempotent(&self) -> bool {
        skew_mul(&self.sigma, &self.coeffs, &self.coeffs) == self.coeffs
    }
}

impl PartialEq for SkewPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.same_extension(other).is_ok() && self.coeffs == other.coeffs
    }
}

impl Eq for SkewPolynomial {}

impl fmt::Debug for SkewPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewPolynomial({self})")
    }
}

impl fmt::Display for SkewPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = self.ring();
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == ring.zero() {
                continue;
            }
            let mut cs = ring.format(c);
            if i > 0 && (cs.contains('+') || cs.starts_with('-')) {
                cs = format!("({cs})");
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            terms.push(match (i, c == ring.one()) {
                (0, _) => cs,
                (_, true) => mono,
                (_, false) => format!("{cs}*{mono}"),
            });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl Serialize for SkewPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Orders polynomials by their coefficient tuples padded to `len`.
pub fn cmp_padded(a: &[ElementId], b: &[ElementId], len: usize) -> Ordering {
    let at = |v: &[ElementId], i: usize| v.get(i).map_or(0, |c| c.0);
    (0..len.max(a.len()).max(b.len()))
        .map(|i| at(a, i).cmp(&at(b, i)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn search_space(ring: &FiniteRing, d: usize) -> u128 {
    (ring.order() as u128).saturating_pow(d as u32 + 1)
}

/// Every idempotent of `R[x;σ]` of degree at most `d`, sorted by padded
/// coefficient tuple. Refuses when `|R|^(d+1)` exceeds
/// [`IDEMPOTENT_SEARCH_CAP`].
pub fn find_idempotents_bounded(sigma: &Arc<Endomorphism>, d: usize) -> Result<Vec<SkewPolynomial>> {
    let space = search_space(sigma.ring(), d);
    if space > IDEMPOTENT_SEARCH_CAP {
        return Err(Error::cap(format!("idempotent search of degree {d}"), space, IDEMPOTENT_SEARCH_CAP));
    }
    Ok(find_idempotents_uncapped(sigma, d))
}

/// [`find_idempotents_bounded`] without the search-space limit.
///
/// Coefficients are fixed one degree at a time: `e_0` must be idempotent in
/// `R`, and once `e_0..e_{k-1}` are known the degree-`k` coefficient of `e^2`
/// is a function of `e_k`, so each level only keeps the `e_k` that satisfy
/// it. Degrees above `d` are checked on complete candidates.
pub fn find_idempotents_uncapped(sigma: &Arc<Endomorphism>, d: usize) -> Vec<SkewPolynomial> {
    let ring = sigma.ring();
    let roots = idempotents(ring);
    let mut found: Vec<Vec<ElementId>> = roots
        .par_iter()
        .flat_map_iter(|&e0| {
            let mut out = Vec::new();
            let mut prefix = vec![e0];
            extend_idempotent(sigma, d, &mut prefix, &mut out);
            out
        })
        .collect();
    found.sort_by(|a, b| cmp_padded(a, b, d + 1));
    found
        .into_iter()
        .map(|c| SkewPolynomial {
            sigma: sigma.clone(),
            coeffs: trim(ring, c),
        })
        .collect()
}

/// Degree-`n` coefficient of `e^2` where `e = prefix` (entries past the end
/// are zero).
fn square_coeff(sigma: &Endomorphism, e: &[ElementId], n: usize) -> ElementId {
    let ring = sigma.ring();
    let mut acc = ring.zero();
    for i in 0..=n.min(e.len().saturating_sub(1)) {
        let j = n - i;
        if j >= e.len() {
            continue;
        }
        acc = ring.add(acc, ring.mul(e[i], sigma.apply_pow(i, e[j])));
    }
    acc
}

fn extend_idempotent(sigma: &Endomorphism, d: usize, prefix: &mut Vec<ElementId>, out: &mut Vec<Vec<ElementId>>) {
    let ring = sigma.ring();
    let k = prefix.len();
    if k == d + 1 {
        if (d + 1..=2 * d).all(|n| square_coeff(sigma, prefix, n) == ring.zero()) {
            out.push(prefix.clone());
        }
        return;
    }
    for c in ring.elements() {
        prefix.push(c);
        if square_coeff(sigma, prefix, k) == c {
            extend_idempotent(sigma, d, prefix, out);
        }
        prefix.pop();
    }
}

/// `R[x;σ]/(x^m)` as a finite ring, with elements written in `x`.
pub fn truncated_skew_ring(sigma: &Arc<Endomorphism>, m: usize) -> Result<FiniteRing> {
    let ring = sigma.ring();
    let label = format!("{}[x;{}]/(x^{m})", ring.label(), sigma.label());
    FiniteRing::series(label, ring.clone(), Some(sigma.clone()), m, "x")
}

/// Image of a polynomial in the truncated ring `t` (built over the same
/// coefficient ring); higher terms are dropped.
pub fn truncate_into(t: &FiniteRing, f: &[ElementId]) -> Result<ElementId> {
    let len = t
        .series_coefficients(t.zero())
        .ok_or_else(|| Error::Shape(format!("{} is not a truncated polynomial ring", t.label())))?
        .len();
    let base = t.series_base().expect("series ring");
    let coeffs: Vec<ElementId> = (0..len).map(|i| f.get(i).copied().unwrap_or(base.zero())).collect();
    t.from_series_coefficients(&coeffs).ok_or(Error::Mismatch)
}

/// Largest exponent that needs testing in sandwich conditions: `σ^k` for
/// `k >= p + c` repeats an earlier power.
pub fn sandwich_powers(sigma: &Endomorphism) -> usize {
    let (p, c) = sigma.power_cycle();
    p + c
}

/// Products `e · (b x^k)` for all `b ∈ R`, `k < p + c`, in scan order.
pub(crate) fn left_factors(sigma: &Endomorphism, e: &[ElementId]) -> Vec<(ElementId, usize, Vec<ElementId>)> {
    let ring = sigma.ring();
    let mut out = Vec::new();
    for b in ring.elements() {
        for k in 0..sandwich_powers(sigma) {
            let mut mono = vec![ring.zero(); k + 1];
            mono[k] = b;
            out.push((b, k, skew_mul(sigma, e, &mono)));
        }
    }
    out
}

/// Products `(b x^k) · e`, in the same order as [`left_factors`].
pub(crate) fn right_factors(sigma: &Endomorphism, e: &[ElementId]) -> Vec<(ElementId, usize, Vec<ElementId>)> {
    let ring = sigma.ring();
    let mut out = Vec::new();
    for b in ring.elements() {
        for k in 0..sandwich_powers(sigma) {
            let mut mono = vec![ring.zero(); k + 1];
            mono[k] = b;
            out.push((b, k, skew_mul(sigma, &mono, e)));
        }
    }
    out
}

/// First `(b, k)` with `e (b x^k) f != 0`, using precomputed `e (b x^k)`.
pub(crate) fn sandwich_left_witness(
    sigma: &Endomorphism,
    factors: &[(ElementId, usize, Vec<ElementId>)],
    f: &[ElementId],
) -> Option<(ElementId, usize)> {
    factors
        .iter()
        .find(|(_, _, ebx)| !skew_mul(sigma, ebx, f).is_empty())
        .map(|(b, k, _)| (*b, *k))
}

/// First `(b, k)` with `f (b x^k) e != 0`, using precomputed `(b x^k) e`.
pub(crate) fn sandwich_right_witness(
    sigma: &Endomorphism,
    factors: &[(ElementId, usize, Vec<ElementId>)],
    f: &[ElementId],
) -> Option<(ElementId, usize)> {
    factors
        .iter()
        .find(|(_, _, bxe)| !skew_mul(sigma, f, bxe).is_empty())
        .map(|(b, k, _)| (*b, *k))
}

/// Whether `e R[x;σ] f = 0`. Since `R[x;σ]` is spanned by monomials and
/// `σ^k` cycles after `p + c` steps, it suffices to test `e (b x^k) f` for
/// `b ∈ R` and `k < p + c`. A failing verdict has witness `[b]` and power
/// `k`, the first pair in `(b, k)` order.
pub fn sandwich_zero(e: &SkewPolynomial, f: &SkewPolynomial) -> Result<Verdict> {
    e.same_extension(f)?;
    let sigma = e.sigma();
    let ring = sigma.ring();
    let powers = sandwich_powers(sigma);
    let hit = first_index(ring.order() * powers, |idx| {
        let (b, k) = (ElementId(idx / powers), idx % powers);
        let mut mono = vec![ring.zero(); k + 1];
        mono[k] = b;
        let prod = skew_mul(sigma, &skew_mul(sigma, &e.coeffs, &mono), &f.coeffs);
        (!prod.is_empty()).then_some((b, k))
    });
    Ok(match hit {
        None => Verdict::holds("sandwich-zero"),
        Some((b, k)) => Verdict::fails("sandwich-zero", vec![b]).with_power(k),
    })
}

/// Which sandwich hypothesis a cascade starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CascadeSide {
    /// From `e R[x;σ] f = 0` towards `f R[x;σ] e = 0`.
    Left,
    /// From `f R[x;σ] e = 0` towards `e R[x;σ] f = 0`.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CascadeStep {
    pub name: String,
    /// Coefficient index the step is about, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub holds: bool,
    /// Elements of `R` exhibiting a failure.
    pub witness: Vec<ElementId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CascadeReport {
    pub side: CascadeSide,
    pub steps: Vec<CascadeStep>,
}

impl CascadeReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    pub fn first_failure(&self) -> Option<&CascadeStep> {
        self.steps.iter().find(|s| !s.holds)
    }
}

/// Replays, coefficient by coefficient, the chain of conditions by which a
/// one-sided sandwich `e R[x;σ] f = 0` (or `f R[x;σ] e = 0`) with an
/// idempotent `e` propagates to the other side.
///
/// Left side:
/// 1. every `f_i` lies in the right annihilator of `e_0 R`;
/// 2. `f_i R e_0 = 0` for every `i`;
/// 3. every higher coefficient `e_j` lies in `R e_0 R`;
/// 4. `f R[x;σ] e = 0`.
///
/// The right side is the mirror image with left annihilators.
pub fn replay_cascade(e: &SkewPolynomial, f: &SkewPolynomial, side: CascadeSide) -> Result<CascadeReport> {
    e.same_extension(f)?;
    if !e.is_idempotent() {
        return Err(Error::Precondition(format!("{e} is not idempotent")));
    }
    let (hyp_l, hyp_r) = match side {
        CascadeSide::Left => (e, f),
        CascadeSide::Right => (f, e),
    };
    if !sandwich_zero(hyp_l, hyp_r)?.holds {
        return Err(Error::Precondition(format!("{hyp_l} R[x] {hyp_r} is not zero")));
    }
    let ring = e.ring();
    let e0 = e.coeff(0);
    let first_r = |probe: &dyn Fn(ElementId) -> bool| ring.elements().find(|&s| !probe(s));
    let mut steps = Vec::new();
    let mut push = |name: &str, index: Option<usize>, witness: Option<ElementId>| {
        steps.push(CascadeStep {
            name: name.to_string(),
            index,
            holds: witness.is_none(),
            witness: witness.into_iter().collect(),
        })
    };
    for (i, &fi) in f.coeffs().iter().enumerate() {
        let w = match side {
            CascadeSide::Left => first_r(&|s| ring.is_zero(ring.mul3(e0, s, fi))),
            CascadeSide::Right => first_r(&|s| ring.is_zero(ring.mul3(fi, s, e0))),
        };
        let name = match side {
            CascadeSide::Left => "coefficient in r(e0 R)",
            CascadeSide::Right => "coefficient in l(R e0)",
        };
        push(name, Some(i), w);
    }
    for (i, &fi) in f.coeffs().iter().enumerate() {
        let (name, w) = match side {
            CascadeSide::Left => ("coefficient R e0 = 0", first_r(&|s| ring.is_zero(ring.mul3(fi, s, e0)))),
            CascadeSide::Right => ("e0 R coefficient = 0", first_r(&|s| ring.is_zero(ring.mul3(e0, s, fi)))),
        };
        push(name, Some(i), w);
    }
    if e.coeffs().len() > 1 {
        let ideal = two_sided_ideal(ring, e0);
        for (j, &ej) in e.coeffs().iter().enumerate().skip(1) {
            let w = ideal.binary_search(&ej).is_err().then_some(ej);
            push("idempotent coefficient in R e0 R", Some(j), w);
        }
    }
    let conclusion = match side {
        CascadeSide::Left => sandwich_zero(f, e)?,
        CascadeSide::Right => sandwich_zero(e, f)?,
    };
    push("conclusion", None, conclusion.witness.first().copied());
    Ok(CascadeReport { side, steps })
}

/// Checks that `|R|^m` fits the ring cap before building a truncation.
pub fn truncation_fits(ring: &FiniteRing, m: usize) -> bool {
    (ring.order() as u128).saturating_pow(m as u32) <= MAX_ORDER as u128
}
