//! Decision procedures for idempotent-related ring properties.
//!
//! Quantifiers over `R` in conditions like `aRb = 0` only need the additive
//! generators of `R`, since `a(r + s)b = arb + asb`. Witnesses still report
//! the first element of `R` (in index order) that breaks the condition.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::endo::Endomorphism;
use crate::error::{Error, Result};
use crate::ring::{idempotents, is_central, ElementId, FiniteRing};
use crate::verdict::{first_index, index_tuples, outer_indices, Scan, Verdict, DEFAULT_SEED, PAIR_SCAN_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Property {
    Abelian,
    Reflexive,
    IdemReflexiveLeft,
    IdemReflexiveRight,
    IdemReflexive,
    SigmaCompatible,
    CSigma,
    Semicommutative,
    SigmaPreservesRe,
    SigmaAbelian,
    SigmaIdemReflexiveLeft,
    SigmaIdemReflexiveRight,
    SigmaIdemReflexive,
}

impl Property {
    pub const ALL: [Property; 13] = [
        Property::Abelian,
        Property::Reflexive,
        Property::IdemReflexiveLeft,
        Property::IdemReflexiveRight,
        Property::IdemReflexive,
        Property::SigmaCompatible,
        Property::CSigma,
        Property::Semicommutative,
        Property::SigmaPreservesRe,
        Property::SigmaAbelian,
        Property::SigmaIdemReflexiveLeft,
        Property::SigmaIdemReflexiveRight,
        Property::SigmaIdemReflexive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Abelian => "abelian",
            Property::Reflexive => "reflexive",
            Property::IdemReflexiveLeft => "idem-reflexive-left",
            Property::IdemReflexiveRight => "idem-reflexive-right",
            Property::IdemReflexive => "idem-reflexive",
            Property::SigmaCompatible => "sigma-compatible",
            Property::CSigma => "c-sigma",
            Property::Semicommutative => "semicommutative",
            Property::SigmaPreservesRe => "sigma-preserves-re",
            Property::SigmaAbelian => "sigma-abelian",
            Property::SigmaIdemReflexiveLeft => "sigma-idem-reflexive-left",
            Property::SigmaIdemReflexiveRight => "sigma-idem-reflexive-right",
            Property::SigmaIdemReflexive => "sigma-idem-reflexive",
        }
    }

    /// Whether the property depends on `σ` at all.
    pub fn uses_sigma(self) -> bool {
        !matches!(
            self,
            Property::Abelian
                | Property::Reflexive
                | Property::IdemReflexiveLeft
                | Property::IdemReflexiveRight
                | Property::IdemReflexive
                | Property::Semicommutative
        )
    }

    /// Conjuncts of a composite property, in evaluation order.
    pub fn conjuncts(self) -> Option<[Property; 2]> {
        let base = match self {
            Property::SigmaAbelian => Property::Abelian,
            Property::SigmaIdemReflexiveLeft => Property::IdemReflexiveLeft,
            Property::SigmaIdemReflexiveRight => Property::IdemReflexiveRight,
            Property::SigmaIdemReflexive => Property::IdemReflexive,
            _ => return None,
        };
        Some([base, Property::SigmaCompatible])
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::unknown("property", s))
    }
}

/// Which implication an idempotent reflexivity check tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IrSide {
    /// `eRa = 0 ⟹ aRe = 0`.
    Left,
    /// `aRe = 0 ⟹ eRa = 0`.
    Right,
    Both,
}

impl IrSide {
    pub fn property(self) -> Property {
        match self {
            IrSide::Left => Property::IdemReflexiveLeft,
            IrSide::Right => Property::IdemReflexiveRight,
            IrSide::Both => Property::IdemReflexive,
        }
    }
}

fn guard(ring: &FiniteRing, scan: Scan) -> Result<()> {
    if !scan.is_sampled() && ring.order() > PAIR_SCAN_CAP {
        return Err(Error::cap(
            format!("exhaustive property scan of {}", ring.label()),
            ring.order() as u128,
            PAIR_SCAN_CAP as u128,
        ));
    }
    Ok(())
}

fn auto(ring: &FiniteRing) -> Scan {
    if ring.order() <= PAIR_SCAN_CAP {
        Scan::Exhaustive
    } else {
        Scan::sampled(DEFAULT_SEED)
    }
}

/// `a r b = 0` for every `r ∈ R`.
fn sandwich_zero_in(ring: &FiniteRing, a: ElementId, b: ElementId) -> bool {
    ring.additive_generators()
        .iter()
        .all(|&g| ring.is_zero(ring.mul3(a, g, b)))
}

/// First `r` with `a r b != 0`.
fn first_nonzero_middle(ring: &FiniteRing, a: ElementId, b: ElementId) -> ElementId {
    ring.elements()
        .find(|&r| !ring.is_zero(ring.mul3(a, r, b)))
        .expect("a nonzero sandwich has a nonzero term")
}

fn ids(v: &[usize]) -> (ElementId, ElementId) {
    (ElementId(v[0]), ElementId(v[1]))
}

/// Every idempotent is central. Witness `(e, r)` with `re != er`.
pub fn is_abelian(ring: &FiniteRing) -> Verdict {
    const NAME: &str = "abelian";
    let idems = idempotents(ring);
    let hit = crate::verdict::first_of(&idems, |&e| {
        let v = is_central(ring, e);
        (!v.holds).then(|| vec![e, v.witness[0]])
    });
    match hit {
        None => Verdict::holds(NAME),
        Some(w) => Verdict::fails(NAME, w),
    }
}

fn reflexive_scan(ring: &FiniteRing, scan: Scan) -> Result<Verdict> {
    const NAME: &str = "reflexive";
    guard(ring, scan)?;
    let hit = index_tuples(ring.order(), 2, scan).first(|t| {
        let (a, b) = ids(t);
        (sandwich_zero_in(ring, a, b) && !sandwich_zero_in(ring, b, a)).then(|| vec![a, b, first_nonzero_middle(ring, b, a)])
    });
    Ok(match hit {
        None => Verdict::holds(NAME),
        Some(w) => Verdict::fails(NAME, w),
    }
    .scanned(scan))
}

/// `aRb = 0 ⟹ bRa = 0`. Witness `(a, b, r)` with `aRb = 0`, `bra != 0`.
pub fn is_reflexive(ring: &FiniteRing) -> Verdict {
    reflexive_scan(ring, auto(ring)).expect("automatic scan policy")
}

fn one_sided_ir(ring: &FiniteRing, left: bool, scan: Scan) -> Result<Verdict> {
    let name = if left { "idem-reflexive-left" } else { "idem-reflexive-right" };
    guard(ring, scan)?;
    let idems = idempotents(ring);
    let others = outer_indices(ring.order(), scan);
    let hit = first_index(idems.len() * others.len(), |i| {
        let e = idems[i / others.len()];
        let a = ElementId(others[i % others.len()]);
        // left: eRa = 0 ⟹ aRe = 0; right: aRe = 0 ⟹ eRa = 0
        let (x, y) = if left { (e, a) } else { (a, e) };
        (sandwich_zero_in(ring, x, y) && !sandwich_zero_in(ring, y, x)).then(|| vec![e, a, first_nonzero_middle(ring, y, x)])
    });
    Ok(match hit {
        None => Verdict::holds(name),
        Some(w) => Verdict::fails(name, w),
    }
    .scanned(scan))
}

fn ir_scan(ring: &FiniteRing, side: IrSide, scan: Scan) -> Result<Verdict> {
    match side {
        IrSide::Left => one_sided_ir(ring, true, scan),
        IrSide::Right => one_sided_ir(ring, false, scan),
        IrSide::Both => {
            for (left, detail) in [(true, "left"), (false, "right")] {
                let v = one_sided_ir(ring, left, scan)?;
                if !v.holds {
                    let mut v = v.with_detail(detail);
                    v.property = "idem-reflexive".into();
                    return Ok(v);
                }
            }
            Ok(Verdict::holds("idem-reflexive").scanned(scan))
        }
    }
}

/// Left: `eRa = 0 ⟹ aRe = 0` for idempotent `e`; right: `aRe = 0 ⟹ eRa = 0`;
/// both: left, then right. Witness `(e, a, r)` where `r` breaks the
/// conclusion; for `Both` the detail names the failing side.
pub fn is_idempotent_reflexive(ring: &FiniteRing, side: IrSide) -> Verdict {
    ir_scan(ring, side, auto(ring)).expect("automatic scan policy")
}

fn compatible_scan(sigma: &Endomorphism, scan: Scan) -> Result<Verdict> {
    const NAME: &str = "sigma-compatible";
    let ring = sigma.ring();
    guard(ring, scan)?;
    let hit = index_tuples(ring.order(), 2, scan).first(|t| {
        let (a, b) = ids(t);
        let plain = ring.is_zero(ring.mul(a, b));
        let twisted = ring.is_zero(ring.mul(a, sigma.apply(b)));
        match (plain, twisted) {
            (true, false) => Some((a, b, "ab=0 but a*sigma(b)!=0")),
            (false, true) => Some((a, b, "a*sigma(b)=0 but ab!=0")),
            _ => None,
        }
    });
    Ok(match hit {
        None => Verdict::holds(NAME),
        Some((a, b, d)) => Verdict::fails(NAME, vec![a, b]).with_detail(d),
    }
    .scanned(scan))
}

/// `ab = 0 ⟺ aσ(b) = 0`. Witness `(a, b)`; the detail names the direction.
pub fn is_sigma_compatible(sigma: &Endomorphism) -> Verdict {
    compatible_scan(sigma, auto(sigma.ring())).expect("automatic scan policy")
}

fn c_sigma_scan(sigma: &Endomorphism, scan: Scan) -> Result<Verdict> {
    const NAME: &str = "c-sigma";
    let ring = sigma.ring();
    guard(ring, scan)?;
    let hit = index_tuples(ring.order(), 2, scan).first(|t| {
        let (a, b) = ids(t);
        (ring.is_zero(ring.mul(a, sigma.apply(b))) && !ring.is_zero(ring.mul(a, b))).then(|| vec![a, b])
    });
    Ok(match hit {
        None => Verdict::holds(NAME),
        Some(w) => Verdict::fails(NAME, w),
    }
    .scanned(scan))
}

/// `aσ(b) = 0 ⟹ ab = 0`. Witness `(a, b)`.
pub fn satisfies_c_sigma(sigma: &Endomorphism) -> Verdict {
    c_sigma_scan(sigma, auto(sigma.ring())).expect("automatic scan policy")
}

fn preserves_scan(sigma: &Endomorphism, scan: Scan) -> Result<Verdict> {
    const NAME: &str = "sigma-preserves-re";
    let ring = sigma.ring();
    guard(ring, scan)?;
    let rs = outer_indices(ring.order(), scan);
    for e in idempotents(ring) {
        let mut re = vec![false; ring.order()];
        for r in ring.elements() {
            re[ring.mul(r, e).0] = true;
        }
        let hit = crate::verdict::first_of(&rs, |&r| {
            let r = ElementId(r);
            (!re[sigma.apply(ring.mul(r, e)).0]).then_some(r)
        });
        if let Some(r) = hit {
            return Ok(Verdict::fails(NAME, vec![e, r]).scanned(scan));
        }
    }
    Ok(Verdict::holds(NAME).scanned(scan))
}

/// `σ(Re) ⊆ Re` for every idempotent `e`. Witness `(e, r)` with
/// `σ(re) ∉ Re`.
pub fn sigma_preserves_re(sigma: &Endomorphism) -> Verdict {
    preserves_scan(sigma, auto(sigma.ring())).expect("automatic scan policy")
}

fn semicommutative_scan(ring: &FiniteRing, scan: Scan) -> Result<Verdict> {
    const NAME: &str = "semicommutative";
    guard(ring, scan)?;
    let hit = index_tuples(ring.order(), 2, scan).first(|t| {
        let (a, b) = ids(t);
        (ring.is_zero(ring.mul(a, b)) && !sandwich_zero_in(ring, a, b)).then(|| vec![a, b, first_nonzero_middle(ring, a, b)])
    });
    Ok(match hit {
        None => Verdict::holds(NAME),
        Some(w) => Verdict::fails(NAME, w),
    }
    .scanned(scan))
}

/// `ab = 0 ⟹ aRb = 0`. Witness `(a, b, r)` with `ab = 0`, `arb != 0`.
pub fn is_semicommutative(ring: &FiniteRing) -> Verdict {
    semicommutative_scan(ring, auto(ring)).expect("automatic scan policy")
}

/// Evaluates a property of `(σ.ring(), σ)` with an explicit scan policy.
/// Exhaustive scans above order 4096 are refused.
pub fn evaluate(property: Property, sigma: &Endomorphism, scan: Scan) -> Result<Verdict> {
    let ring = sigma.ring();
    if let Some(parts) = property.conjuncts() {
        for part in parts {
            let v = evaluate(part, sigma, scan)?;
            if !v.holds {
                return Ok(v.renamed(property.name()));
            }
        }
        return Ok(Verdict::holds(property.name()).scanned(scan));
    }
    match property {
        Property::Abelian => {
            guard(ring, scan)?;
            Ok(is_abelian(ring))
        }
        Property::Reflexive => reflexive_scan(ring, scan),
        Property::IdemReflexiveLeft => ir_scan(ring, IrSide::Left, scan),
        Property::IdemReflexiveRight => ir_scan(ring, IrSide::Right, scan),
        Property::IdemReflexive => ir_scan(ring, IrSide::Both, scan),
        Property::SigmaCompatible => compatible_scan(sigma, scan),
        Property::CSigma => c_sigma_scan(sigma, scan),
        Property::Semicommutative => semicommutative_scan(ring, scan),
        Property::SigmaPreservesRe => preserves_scan(sigma, scan),
        _ => unreachable!("composites handled above"),
    }
}

/// [`evaluate`] with the default policy: exhaustive up to order 4096,
/// sampled with the default seed beyond.
pub fn evaluate_auto(property: Property, sigma: &Endomorphism) -> Verdict {
    evaluate(property, sigma, auto(sigma.ring())).expect("automatic scan policy")
}

/// Composite property by name (`sigma-abelian`, `sigma-idem-reflexive`,
/// ...): the conjunction of its base property and `sigma-compatible`.
pub fn composite_property(sigma: &Endomorphism, name: &str) -> Result<Verdict> {
    let property: Property = name.parse()?;
    if property.conjuncts().is_none() {
        return Err(Error::unknown("composite property", name));
    }
    Ok(evaluate_auto(property, sigma))
}

/// Every property, in [`Property::ALL`] order.
pub fn all_properties(sigma: &Endomorphism, scan: Scan) -> Result<Vec<Verdict>> {
    Property::ALL.iter().map(|&p| evaluate(p, sigma, scan)).collect()
}

// ------------------------------------------------------------------ replay

fn all_zero(ring: &FiniteRing, a: ElementId, b: ElementId) -> bool {
    ring.elements().all(|r| ring.is_zero(ring.mul3(a, r, b)))
}

/// Re-checks a failing verdict's witness from first principles (full scans
/// over `R`, no generator shortcuts). True when the witness genuinely
/// violates the property.
pub fn replay(sigma: &Endomorphism, verdict: &Verdict) -> bool {
    if verdict.holds {
        return false;
    }
    let Ok(property) = verdict.property.parse::<Property>() else {
        return false;
    };
    replay_as(sigma, property, verdict.detail.as_deref(), &verdict.witness)
}

fn replay_as(sigma: &Endomorphism, property: Property, detail: Option<&str>, w: &[ElementId]) -> bool {
    let ring = sigma.ring();
    if w.iter().any(|e| !ring.contains(*e)) {
        return false;
    }
    if property.conjuncts().is_some() {
        let Some(detail) = detail else { return false };
        let (inner, rest) = match detail.split_once(": ") {
            Some((a, b)) => (a, Some(b)),
            None => (detail, None),
        };
        let Ok(inner) = inner.parse::<Property>() else { return false };
        return property.conjuncts().is_some_and(|c| c.contains(&inner)) && replay_as(sigma, inner, rest, w);
    }
    let idem = |e: ElementId| ring.is_idempotent(e);
    match (property, w) {
        (Property::Abelian, &[e, r]) => idem(e) && ring.mul(r, e) != ring.mul(e, r),
        (Property::Reflexive, &[a, b, r]) => all_zero(ring, a, b) && !ring.is_zero(ring.mul3(b, r, a)),
        (Property::IdemReflexiveLeft, &[e, a, r]) => idem(e) && all_zero(ring, e, a) && !ring.is_zero(ring.mul3(a, r, e)),
        (Property::IdemReflexiveRight, &[e, a, r]) => {
            idem(e) && all_zero(ring, a, e) && !ring.is_zero(ring.mul3(e, r, a))
        }
        (Property::IdemReflexive, _) => match detail {
            Some("left") => replay_as(sigma, Property::IdemReflexiveLeft, None, w),
            Some("right") => replay_as(sigma, Property::IdemReflexiveRight, None, w),
            _ => false,
        },
        (Property::SigmaCompatible, &[a, b]) => {
            ring.is_zero(ring.mul(a, b)) != ring.is_zero(ring.mul(a, sigma.apply(b)))
        }
        (Property::CSigma, &[a, b]) => ring.is_zero(ring.mul(a, sigma.apply(b))) && !ring.is_zero(ring.mul(a, b)),
        (Property::Semicommutative, &[a, b, r]) => ring.is_zero(ring.mul(a, b)) && !ring.is_zero(ring.mul3(a, r, b)),
        (Property::SigmaPreservesRe, &[e, r]) => {
            let image = sigma.apply(ring.mul(r, e));
            idem(e) && ring.elements().all(|s| ring.mul(s, e) != image)
        }
        _ => false,
    }
}
