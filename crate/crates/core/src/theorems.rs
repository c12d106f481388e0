//! The claim catalog: each structural result about `R[x;σ]` and its
//! power-series ring becomes a bounded, executable check over a registry
//! entry.
//!
//! Bounds: `d` is the maximal degree of the polynomials enumerated in
//! `R[x;σ]` (exact idempotents and the second argument of sandwich
//! conditions); `m` is the truncation order of `R[x;σ]/(x^m)`, which stands
//! in for the power-series ring.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::endo::Endomorphism;
use crate::error::{Error, Result};
use crate::literal::ElemLit;
use crate::properties::{evaluate_auto, is_abelian, is_idempotent_reflexive, IrSide, Property};
use crate::ring::{idempotents, is_central, ElementId, FiniteRing};
use crate::skew::{
    find_idempotents_bounded, left_factors, right_factors, sandwich_left_witness, sandwich_right_witness,
    truncate_into, truncated_skew_ring, SkewPolynomial,
};
use crate::verdict::{first_index, Verdict, PAIR_SCAN_CAP};
use crate::zoo::{registry, RegistryEntry};

/// Limit on `|R|^(d+1)`, the number of polynomials enumerated per idempotent.
pub const POLY_ENUM_CAP: u128 = 1 << 16;
/// Limit on `|R|^m`, the order of the truncated ring.
pub const TRUNC_ORDER_CAP: usize = PAIR_SCAN_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Bounds {
    pub d: usize,
    pub m: usize,
}

impl Bounds {
    pub const DEFAULT: Bounds = Bounds { d: 1, m: 2 };
    pub const ESCALATED: Bounds = Bounds { d: 2, m: 3 };

    /// Refuses bounds whose search spaces exceed the module caps for `ring`.
    pub fn check(self, ring: &FiniteRing) -> Result<()> {
        let q = ring.order() as u128;
        let polys = q.saturating_pow(self.d as u32 + 1);
        if polys > POLY_ENUM_CAP {
            return Err(Error::cap(format!("polynomials of degree {} over {}", self.d, ring.label()), polys, POLY_ENUM_CAP));
        }
        if self.m == 0 {
            return Err(Error::Shape("truncation order must be at least 1".into()));
        }
        let t = q.saturating_pow(self.m as u32);
        if t > TRUNC_ORDER_CAP as u128 {
            return Err(Error::cap(format!("truncation of {} at x^{}", ring.label(), self.m), t, TRUNC_ORDER_CAP as u128));
        }
        Ok(())
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::DEFAULT
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    SurrogatePass,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
            Status::SurrogatePass => "surrogate-pass",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimReport {
    pub claim: String,
    pub entry: String,
    pub bounds: Bounds,
    pub status: Status,
    pub witness: Option<Value>,
    pub elapsed_ms: Option<u64>,
}

impl fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} d={} m={}: {}",
            self.claim, self.entry, self.bounds.d, self.bounds.m, self.status
        )?;
        if let Some(w) = &self.witness {
            write!(f, " {w}")?;
        }
        if let Some(ms) = self.elapsed_ms {
            write!(f, " ({ms} ms)")?;
        }
        Ok(())
    }
}

/// A catalogued result. Hypotheses are property names evaluated on the
/// entry's `(R, σ)`, plus `trivial-idempotents` for `Id(R) = {0, 1}`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    pub hypotheses: &'static [&'static str],
    /// What the bounded check actually verifies.
    pub check: &'static str,
}

const TRIVIAL_IDEMPOTENTS: &str = "trivial-idempotents";

static CLAIMS: [Claim; 12] = [
    Claim {
        id: "C1",
        statement: "If R is left idempotent reflexive and sigma maps each Re (e idempotent) into itself, the skew polynomial and skew power series rings are left idempotent reflexive.",
        hypotheses: &["idem-reflexive-left", "sigma-preserves-re"],
        check: "for exact idempotents e and all f of degree <= d: eR[x]f = 0 implies fR[x]e = 0; the truncated ring is left idempotent reflexive",
    },
    Claim {
        id: "C2",
        statement: "When sigma maps each Re into itself, right idempotent reflexivity of the skew polynomial or power series ring forces it on R.",
        hypotheses: &["sigma-preserves-re"],
        check: "a failure (e, a) of right idempotent reflexivity in R lifts, as constants, to failures of the sandwich conditions and in the truncated ring",
    },
    Claim {
        id: "C3",
        statement: "If R is sigma-compatible and right idempotent reflexive, the skew polynomial and skew power series rings are right idempotent reflexive.",
        hypotheses: &["idem-reflexive-right", "sigma-compatible"],
        check: "for exact idempotents e and all f of degree <= d: fR[x]e = 0 implies eR[x]f = 0; the truncated ring is right idempotent reflexive",
    },
    Claim {
        id: "C4",
        statement: "For sigma-compatible R, left idempotent reflexivity of the skew polynomial or power series ring forces it on R.",
        hypotheses: &["sigma-compatible"],
        check: "a failure (e, a) of left idempotent reflexivity in R lifts, as constants, to failures of the sandwich conditions and in the truncated ring",
    },
    Claim {
        id: "C5",
        statement: "For sigma-compatible R, each one-sided idempotent reflexivity holds in R exactly when it holds in the skew polynomial ring and in the skew power series ring.",
        hypotheses: &["sigma-compatible"],
        check: "for each side, the verdicts on R, on the bounded skew polynomial ring and on the truncated ring agree",
    },
    Claim {
        id: "C6",
        statement: "Sigma-idempotent reflexivity (per side) is idempotent reflexivity together with sigma-compatibility, and it passes to the skew polynomial and power series rings.",
        hypotheses: &["sigma-compatible"],
        check: "composite verdicts equal the conjunction of their parts, and reduce to plain idempotent reflexivity for the identity; each side that holds passes the C1/C3 checks",
    },
    Claim {
        id: "C7",
        statement: "For abelian R with sigma mapping each Re into itself, every idempotent e of the skew polynomial (or power series) ring satisfies e e0 = e0 and e0 e = e.",
        hypotheses: &["abelian", "sigma-preserves-re"],
        check: "every exact idempotent of degree <= d satisfies the two identities and e_i sigma^i(e_0) = 0, e_i = e_0 e_i = e_i e_0; every idempotent of the truncated ring satisfies the two identities",
    },
    Claim {
        id: "C8",
        statement: "Under condition C_sigma, sigma fixes every idempotent of R.",
        hypotheses: &["c-sigma"],
        check: "sigma(e) = e for every idempotent e of R",
    },
    Claim {
        id: "C9",
        statement: "Under condition C_sigma, R is abelian exactly when the skew polynomial ring is, exactly when the skew power series ring is.",
        hypotheses: &["c-sigma"],
        check: "R abelian iff every exact idempotent of degree <= d is a constant commuting with R and with x, iff the truncated ring is abelian",
    },
    Claim {
        id: "C10",
        statement: "If 0 and 1 are the only idempotents of R, they are the only idempotents of the skew polynomial ring.",
        hypotheses: &[TRIVIAL_IDEMPOTENTS],
        check: "the exact idempotents of degree <= d are exactly 0 and 1",
    },
    Claim {
        id: "C11",
        statement: "For Z2 x Z2 with the swap, the skew polynomial ring is not abelian although R is: e = (1,0) + (0,1)x is idempotent and (0,1)e = (0,1)x differs from e(0,1) = 0.",
        hypotheses: &["abelian"],
        check: "on ex3: e and f = (0,1) + (0,1)x are exact idempotents and (0,1)e != e(0,1)",
    },
    Claim {
        id: "C12",
        statement: "For the block ring with the block swap, R is abelian but the skew polynomial ring is not, so C_sigma cannot be dropped.",
        hypotheses: &["abelian"],
        check: "on ex4: C_sigma fails and a non-central idempotent is found (constant idempotents against x in the truncated ring, then exact idempotents)",
    },
];

pub fn list_claims() -> &'static [Claim] {
    &CLAIMS
}

pub fn claim(id: &str) -> Result<&'static Claim> {
    CLAIMS
        .iter()
        .find(|c| c.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::unknown("claim", id))
}

fn claim_number(id: &str) -> usize {
    id.trim_start_matches('C').parse().unwrap_or(usize::MAX)
}

// ------------------------------------------------------------------ context

/// `(e, f, b, k)`: the premise sandwich holds, but the conclusion sandwich
/// is nonzero at `b x^k`.
#[derive(Clone, Debug)]
struct PolyIrFailure {
    e: Vec<ElementId>,
    f: Vec<ElementId>,
    b: ElementId,
    k: usize,
}

/// Per-entry caches shared by all claims.
struct Context<'a> {
    entry: &'a RegistryEntry,
    bounds: Bounds,
    idems: OnceLock<Vec<SkewPolynomial>>,
    trunc: OnceLock<Arc<FiniteRing>>,
    poly_ir: [OnceLock<Option<PolyIrFailure>>; 2],
    verdicts: Mutex<HashMap<Property, Verdict>>,
    trunc_ir: [OnceLock<Verdict>; 2],
}

impl<'a> Context<'a> {
    fn new(entry: &'a RegistryEntry, bounds: Bounds) -> Result<Self> {
        bounds.check(&entry.ring)?;
        Ok(Context {
            entry,
            bounds,
            idems: OnceLock::new(),
            trunc: OnceLock::new(),
            poly_ir: [OnceLock::new(), OnceLock::new()],
            verdicts: Mutex::new(HashMap::new()),
            trunc_ir: [OnceLock::new(), OnceLock::new()],
        })
    }

    fn ring(&self) -> &Arc<FiniteRing> {
        &self.entry.ring
    }

    fn sigma(&self) -> &Arc<Endomorphism> {
        &self.entry.sigma
    }

    fn verdict(&self, p: Property) -> Verdict {
        if let Some(v) = self.verdicts.lock().expect("cache lock").get(&p) {
            return v.clone();
        }
        let v = evaluate_auto(p, self.sigma());
        self.verdicts.lock().expect("cache lock").insert(p, v.clone());
        v
    }

    fn idempotents(&self) -> &[SkewPolynomial] {
        self.idems.get_or_init(|| {
            find_idempotents_bounded(self.sigma(), self.bounds.d).expect("bounds checked against the search cap")
        })
    }

    fn trunc(&self) -> &Arc<FiniteRing> {
        self.trunc.get_or_init(|| {
            Arc::new(truncated_skew_ring(self.sigma(), self.bounds.m).expect("bounds checked against the order cap"))
        })
    }

    /// Idempotent reflexivity of the truncated ring, left or right.
    fn trunc_ir(&self, left: bool) -> &Verdict {
        let side = if left { IrSide::Left } else { IrSide::Right };
        self.trunc_ir[usize::from(!left)].get_or_init(|| is_idempotent_reflexive(self.trunc(), side))
    }

    /// Bounded idempotent reflexivity of `R[x;σ]`. Left: `eR[x]f = 0`
    /// implies `fR[x]e = 0`; right: `fR[x]e = 0` implies `eR[x]f = 0`.
    fn poly_ir(&self, left: bool) -> Option<&PolyIrFailure> {
        self.poly_ir[usize::from(!left)]
            .get_or_init(|| {
                let sigma = self.sigma();
                let ring = self.ring();
                let q = ring.order();
                let len = self.bounds.d + 1;
                let total = q.pow(len as u32);
                for e in self.idempotents() {
                    let lf = left_factors(sigma, e.coeffs());
                    let rf = right_factors(sigma, e.coeffs());
                    let hit = first_index(total, |code| {
                        let f = decode_poly(ring, code, len);
                        let (premise, conclusion) = if left {
                            (sandwich_left_witness(sigma, &lf, &f), sandwich_right_witness(sigma, &rf, &f))
                        } else {
                            (sandwich_right_witness(sigma, &rf, &f), sandwich_left_witness(sigma, &lf, &f))
                        };
                        match (premise, conclusion) {
                            (None, Some((b, k))) => Some((f, b, k)),
                            _ => None,
                        }
                    });
                    if let Some((f, b, k)) = hit {
                        return Some(PolyIrFailure {
                            e: e.coeffs().to_vec(),
                            f,
                            b,
                            k,
                        });
                    }
                }
                None
            })
            .as_ref()
    }

    fn poly(&self, coeffs: &[ElementId]) -> String {
        SkewPolynomial::new(self.sigma(), coeffs.to_vec())
            .expect("coefficients of R")
            .to_string()
    }

    fn elem(&self, e: ElementId) -> String {
        self.ring().format(e)
    }

    fn poly_ir_json(&self, w: &PolyIrFailure, left: bool) -> Value {
        json!({
            "ring": "skew-polynomial",
            "side": if left { "left" } else { "right" },
            "e": self.poly(&w.e),
            "f": self.poly(&w.f),
            "b": self.elem(w.b),
            "k": w.k,
        })
    }
}

/// Polynomial with padded coefficient tuple number `code` in lexicographic
/// order (`c_0` most significant), trimmed.
fn decode_poly(ring: &FiniteRing, mut code: usize, len: usize) -> Vec<ElementId> {
    let q = ring.order();
    let mut out = vec![ring.zero(); len];
    for slot in out.iter_mut().rev() {
        *slot = ElementId(code % q);
        code /= q;
    }
    while out.last() == Some(&ring.zero()) {
        out.pop();
    }
    out
}

/// JSON form of a verdict with witness elements written as literals.
pub fn verdict_json(ring: &FiniteRing, v: &Verdict) -> Value {
    let mut obj = json!({
        "property": v.property,
        "holds": v.holds,
        "witness": v.witness.iter().map(|&e| ring.format(e)).collect::<Vec<_>>(),
    });
    if let Some(k) = v.power {
        obj["power"] = json!(k);
    }
    if let Some(d) = &v.detail {
        obj["detail"] = json!(d);
    }
    if v.sampled {
        obj["sampled"] = json!(true);
    }
    obj
}

fn ir_side(left: bool) -> IrSide {
    if left {
        IrSide::Left
    } else {
        IrSide::Right
    }
}

fn ir_property(left: bool) -> Property {
    ir_side(left).property()
}

// ------------------------------------------------------------------ checks

enum Outcome {
    Holds { surrogate: bool, witness: Option<Value> },
    Violated(Value),
    NotApplicable(Value),
}

fn holds(surrogate: bool) -> Outcome {
    Outcome::Holds {
        surrogate,
        witness: None,
    }
}

/// C1/C3 conclusion for one side.
fn ir_transfers(cx: &Context, left: bool) -> Outcome {
    if let Some(w) = cx.poly_ir(left) {
        return Outcome::Violated(cx.poly_ir_json(w, left));
    }
    let t = cx.trunc_ir(left);
    if !t.holds {
        return Outcome::Violated(json!({ "ring": "truncated", "verdict": verdict_json(cx.trunc(), t) }));
    }
    holds(true)
}

/// C2/C4: a failure `(e, a)` of one-sided idempotent reflexivity in `R`
/// must stay a failure for the constants `e`, `a` of `R[x;σ]` and of the
/// truncated ring.
fn lift_failure(cx: &Context, left: bool) -> Outcome {
    let v = cx.verdict(ir_property(left));
    if v.holds {
        return holds(true);
    }
    let (e, a) = (v.witness[0], v.witness[1]);
    let sigma = cx.sigma();
    let ce = SkewPolynomial::constant(sigma, e);
    let ca = SkewPolynomial::constant(sigma, a);
    // left: eRa = 0 but aRe != 0; right: aRe = 0 but eRa != 0
    let (x, y) = if left { (&ce, &ca) } else { (&ca, &ce) };
    let premise = crate::skew::sandwich_zero(x, y).expect("same extension");
    let conclusion = crate::skew::sandwich_zero(y, x).expect("same extension");
    let t = cx.trunc();
    let te = truncate_into(t, ce.coeffs()).expect("truncated ring over R");
    let ta = truncate_into(t, ca.coeffs()).expect("truncated ring over R");
    let (tx, ty) = if left { (te, ta) } else { (ta, te) };
    let t_zero = |p: ElementId, q: ElementId| t.elements().all(|s| t.is_zero(t.mul3(p, s, q)));
    let t_premise = t_zero(tx, ty);
    let t_conclusion = t_zero(ty, tx);
    let lifted = premise.holds && !conclusion.holds && t_premise && !t_conclusion;
    let witness = json!({
        "side": if left { "left" } else { "right" },
        "e": cx.elem(e),
        "a": cx.elem(a),
        "premise_sandwich_zero": premise.holds,
        "conclusion_sandwich_zero": conclusion.holds,
        "truncated_premise_zero": t_premise,
        "truncated_conclusion_zero": t_conclusion,
    });
    if lifted {
        Outcome::Holds {
            surrogate: true,
            witness: Some(witness),
        }
    } else {
        Outcome::Violated(witness)
    }
}

fn c5(cx: &Context) -> Outcome {
    for left in [false, true] {
        let base = cx.verdict(ir_property(left)).holds;
        let poly = cx.poly_ir(left).is_none();
        let trunc = cx.trunc_ir(left).holds;
        if base != poly || base != trunc {
            let mut w = json!({
                "side": if left { "left" } else { "right" },
                "ring": base,
                "skew_polynomial": poly,
                "truncated": trunc,
            });
            if let Some(f) = cx.poly_ir(left) {
                w["skew_polynomial_witness"] = cx.poly_ir_json(f, left);
            }
            return Outcome::Violated(w);
        }
    }
    holds(true)
}

fn c6(cx: &Context) -> Outcome {
    let sigma = cx.sigma();
    let identity = Endomorphism::identity(cx.ring().clone());
    let compatible = cx.verdict(Property::SigmaCompatible).holds;
    let cases = [
        (Property::SigmaIdemReflexiveLeft, Property::IdemReflexiveLeft),
        (Property::SigmaIdemReflexiveRight, Property::IdemReflexiveRight),
        (Property::SigmaIdemReflexive, Property::IdemReflexive),
    ];
    for (composite, base) in cases {
        let c = evaluate_auto(composite, sigma).holds;
        let b = cx.verdict(base).holds;
        let with_id = evaluate_auto(composite, &identity).holds;
        if c != (b && compatible) || with_id != b {
            return Outcome::Violated(json!({
                "composite": composite.name(),
                "composite_holds": c,
                "base_holds": b,
                "sigma_compatible": compatible,
                "composite_with_identity": with_id,
            }));
        }
    }
    for left in [true, false] {
        let composite = if left {
            Property::SigmaIdemReflexiveLeft
        } else {
            Property::SigmaIdemReflexiveRight
        };
        if evaluate_auto(composite, sigma).holds {
            if let v @ Outcome::Violated(_) = ir_transfers(cx, left) {
                return v;
            }
        }
    }
    holds(true)
}

fn c7(cx: &Context) -> Outcome {
    let sigma = cx.sigma();
    let ring = cx.ring();
    for e in cx.idempotents() {
        let e0 = SkewPolynomial::constant(sigma, e.coeff(0));
        let e_e0 = e.mul(&e0).expect("same extension");
        let e0_e = e0.mul(e).expect("same extension");
        let aux = e.coeffs().iter().enumerate().find(|&(i, &ei)| {
            let twisted = i >= 1 && !ring.is_zero(ring.mul(ei, sigma.apply_pow(i, e.coeff(0))));
            twisted || ring.mul(e.coeff(0), ei) != ei || ring.mul(ei, e.coeff(0)) != ei
        });
        if e_e0 != e0 || e0_e != *e || aux.is_some() {
            return Outcome::Violated(json!({
                "ring": "skew-polynomial",
                "e": e.to_string(),
                "e*e0": e_e0.to_string(),
                "e0*e": e0_e.to_string(),
                "auxiliary_failure_index": aux.map(|(i, _)| i),
            }));
        }
    }
    let t = cx.trunc();
    for big in idempotents(t) {
        let mut c = t.series_coefficients(big).expect("series ring");
        for slot in c.iter_mut().skip(1) {
            *slot = ring.zero();
        }
        let e0 = t.from_series_coefficients(&c).expect("series ring");
        if t.mul(big, e0) != e0 || t.mul(e0, big) != big {
            return Outcome::Violated(json!({
                "ring": "truncated",
                "e": t.format(big),
                "e*e0": t.format(t.mul(big, e0)),
                "e0*e": t.format(t.mul(e0, big)),
            }));
        }
    }
    holds(true)
}

fn c8(cx: &Context) -> Outcome {
    let sigma = cx.sigma();
    match idempotents(cx.ring()).into_iter().find(|&e| sigma.apply(e) != e) {
        Some(e) => Outcome::Violated(json!({ "e": cx.elem(e), "sigma(e)": cx.elem(sigma.apply(e)) })),
        None => holds(false),
    }
}

fn c9(cx: &Context) -> Outcome {
    let sigma = cx.sigma();
    let ring = cx.ring();
    let base = cx.verdict(Property::Abelian).holds;
    let offender = cx.idempotents().iter().find(|e| {
        e.degree().unwrap_or(0) > 0 || !is_central(ring, e.coeff(0)).holds || sigma.apply(e.coeff(0)) != e.coeff(0)
    });
    let poly = offender.is_none();
    let trunc = is_abelian(cx.trunc()).holds;
    if base == poly && base == trunc {
        return holds(true);
    }
    Outcome::Violated(json!({
        "ring_abelian": base,
        "skew_polynomial_abelian": poly,
        "truncated_abelian": trunc,
        "offending_idempotent": offender.map(|e| e.to_string()),
    }))
}

fn c10(cx: &Context) -> Outcome {
    let ids = cx.idempotents();
    let expected = [SkewPolynomial::zero(cx.sigma()), SkewPolynomial::one(cx.sigma())];
    if ids.len() == 2 && ids.iter().all(|e| expected.contains(e)) {
        holds(false)
    } else {
        Outcome::Violated(json!({
            "idempotents": ids.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        }))
    }
}

fn pair(ring: &FiniteRing, a: i64, b: i64) -> Result<ElementId> {
    ring.resolve(&ElemLit::Tuple(vec![ElemLit::Int(a), ElemLit::Int(b)]))
}

fn c11(cx: &Context) -> Result<Outcome> {
    if cx.entry.name != "ex3" {
        return Ok(Outcome::NotApplicable(json!({ "reason": "claim concerns entry ex3 only" })));
    }
    if cx.bounds.d < 1 {
        return Ok(Outcome::NotApplicable(json!({ "reason": "degree bound below 1" })));
    }
    let sigma = cx.sigma();
    let ring = cx.ring();
    let (p10, p01) = (pair(ring, 1, 0)?, pair(ring, 0, 1)?);
    let e = SkewPolynomial::new(sigma, vec![p10, p01])?;
    let f = SkewPolynomial::new(sigma, vec![p01, p01])?;
    let c = SkewPolynomial::constant(sigma, p01);
    let ce = c.mul(&e)?;
    let ec = e.mul(&c)?;
    let ids = cx.idempotents();
    let witness = json!({
        "e": e.to_string(),
        "f": f.to_string(),
        "c": c.to_string(),
        "c*e": ce.to_string(),
        "e*c": ec.to_string(),
    });
    Ok(if ids.contains(&e) && ids.contains(&f) && ce != ec {
        Outcome::Holds {
            surrogate: false,
            witness: Some(witness),
        }
    } else {
        Outcome::Violated(witness)
    })
}

fn c12(cx: &Context) -> Result<Outcome> {
    if !(cx.entry.name == "ex4" || cx.entry.name.starts_with("ex4_")) {
        return Ok(Outcome::NotApplicable(json!({ "reason": "claim concerns entry ex4 only" })));
    }
    let sigma = cx.sigma();
    let ring = cx.ring();
    let cs = cx.verdict(Property::CSigma);
    let mut witness = json!({ "c_sigma": verdict_json(ring, &cs) });
    // constant idempotents against x, in the truncated ring when x survives
    let x = SkewPolynomial::x(sigma);
    for e in idempotents(ring) {
        let ce = SkewPolynomial::constant(sigma, e);
        let xe = x.mul(&ce)?;
        let ex = ce.mul(&x)?;
        let (xe_s, ex_s, differ, where_) = if cx.bounds.m >= 2 {
            let t = cx.trunc();
            let tx = truncate_into(t, x.coeffs())?;
            let te = truncate_into(t, &[e])?;
            let (a, b) = (t.mul(tx, te), t.mul(te, tx));
            (t.format(a), t.format(b), a != b, "truncated")
        } else {
            (xe.to_string(), ex.to_string(), xe != ex, "skew-polynomial")
        };
        if differ {
            witness["non_central"] = json!({
                "ring": where_,
                "e": cx.elem(e),
                "x*e": xe_s,
                "e*x": ex_s,
            });
            return Ok(if cs.holds {
                Outcome::Violated(witness)
            } else {
                Outcome::Holds {
                    surrogate: false,
                    witness: Some(witness),
                }
            });
        }
    }
    // exact idempotents that are not constant or not central
    let found = cx.idempotents().iter().find(|e| {
        e.degree().unwrap_or(0) > 0 || {
            let c = e.coeff(0);
            !is_central(ring, c).holds || sigma.apply(c) != c
        }
    });
    match found {
        Some(e) if !cs.holds => {
            witness["non_central"] = json!({ "ring": "skew-polynomial", "e": e.to_string() });
            Ok(Outcome::Holds {
                surrogate: false,
                witness: Some(witness),
            })
        }
        _ => Ok(Outcome::Violated(witness)),
    }
}

fn hypothesis_holds(cx: &Context, name: &str) -> Result<Option<Value>> {
    if name == TRIVIAL_IDEMPOTENTS {
        let ids = idempotents(cx.ring());
        return Ok((ids.len() != 2).then(|| {
            json!({
                "unmet": name,
                "idempotents": ids.iter().map(|&e| cx.elem(e)).collect::<Vec<_>>(),
            })
        }));
    }
    let p: Property = name.parse()?;
    let v = cx.verdict(p);
    Ok((!v.holds).then(|| json!({ "unmet": name, "verdict": verdict_json(cx.ring(), &v) })))
}

fn run_in(cx: &Context, claim: &Claim) -> Result<ClaimReport> {
    let start = Instant::now();
    let mut gate = None;
    for h in claim.hypotheses {
        if let Some(w) = hypothesis_holds(cx, h)? {
            gate = Some(w);
            break;
        }
    }
    let outcome = match gate {
        Some(w) => Outcome::NotApplicable(w),
        None => match claim.id {
            "C1" => ir_transfers(cx, true),
            "C2" => lift_failure(cx, false),
            "C3" => ir_transfers(cx, false),
            "C4" => lift_failure(cx, true),
            "C5" => c5(cx),
            "C6" => c6(cx),
            "C7" => c7(cx),
            "C8" => c8(cx),
            "C9" => c9(cx),
            "C10" => c10(cx),
            "C11" => c11(cx)?,
            "C12" => c12(cx)?,
            other => return Err(Error::unknown("claim", other)),
        },
    };
    let (status, witness) = match outcome {
        Outcome::Holds { surrogate, witness } => (if surrogate { Status::SurrogatePass } else { Status::Pass }, witness),
        Outcome::Violated(w) => (Status::Fail, Some(w)),
        Outcome::NotApplicable(w) => (Status::NotApplicable, Some(w)),
    };
    Ok(ClaimReport {
        claim: claim.id.to_string(),
        entry: cx.entry.name.clone(),
        bounds: cx.bounds,
        status,
        witness,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

/// Runs one claim against one entry. The report's `elapsed_ms` is filled in.
pub fn run_claim(claim_id: &str, entry: &RegistryEntry, bounds: Bounds) -> Result<ClaimReport> {
    let claim = claim(claim_id)?;
    let cx = Context::new(entry, bounds)?;
    run_in(&cx, claim)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub bounds: Bounds,
    /// Keep `elapsed_ms` in the reports (otherwise it is `None`, which keeps
    /// output reproducible).
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            bounds: Bounds::DEFAULT,
            timings: false,
        }
    }
}

/// Runs every claim against every given entry, ordered by claim number and
/// then entry name.
pub fn verify_entries(entries: &[RegistryEntry], options: VerifyOptions) -> Result<Vec<ClaimReport>> {
    let mut sorted: Vec<&RegistryEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    let contexts = sorted
        .iter()
        .map(|e| Context::new(e, options.bounds))
        .collect::<Result<Vec<_>>>()?;
    let mut claims: Vec<&Claim> = CLAIMS.iter().collect();
    claims.sort_by_key(|c| claim_number(c.id));
    let grid: Vec<(&Claim, &Context)> = claims
        .iter()
        .flat_map(|c| contexts.iter().map(move |cx| (*c, cx)))
        .collect();
    grid.par_iter()
        .map(|(claim, cx)| {
            let mut r = run_in(cx, claim)?;
            if !options.timings {
                r.elapsed_ms = None;
            }
            Ok(r)
        })
        .collect()
}

/// [`verify_entries`] over the whole registry.
pub fn verify_paper(options: VerifyOptions) -> Result<Vec<ClaimReport>> {
    verify_entries(registry(), options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::registry_entry;

    #[test]
    fn catalog_shape() {
        assert_eq!(list_claims().len(), 12);
        assert_eq!(claim("C9").unwrap().hypotheses, &["c-sigma"]);
        assert_eq!(claim("C1").unwrap().hypotheses, &["idem-reflexive-left", "sigma-preserves-re"]);
        assert!(claim("C13").is_err());
    }

    #[test]
    fn selected_claims() {
        let b = Bounds::DEFAULT;
        let r = run_claim("C8", registry_entry("ex1").unwrap(), b).unwrap();
        assert_eq!(r.status, Status::Pass);
        let r = run_claim("C11", registry_entry("ex3").unwrap(), b).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.witness.as_ref().unwrap()["c*e"], "(0,1)*x");
        assert_eq!(r.witness.as_ref().unwrap()["e*c"], "0");
        let r = run_claim("C9", registry_entry("ex3").unwrap(), b).unwrap();
        assert_eq!(r.status, Status::NotApplicable);
        let r = run_claim("C10", registry_entry("z4").unwrap(), b).unwrap();
        assert_eq!(r.status, Status::Pass);
        let r = run_claim("C12", registry_entry("ex4").unwrap(), b).unwrap();
        assert_eq!(r.status, Status::Pass, "{r}");
    }

    #[test]
    fn bounds_are_capped() {
        let e = registry_entry("ex1").unwrap();
        assert!(matches!(run_claim("C1", e, Bounds { d: 4, m: 2 }), Err(Error::Cap { .. })));
        assert!(matches!(run_claim("C1", e, Bounds { d: 1, m: 4 }), Err(Error::Cap { .. })));
    }

    #[test]
    fn default_suite_has_no_failures() {
        let reports = verify_paper(VerifyOptions::default()).unwrap();
        assert_eq!(reports.len(), 84);
        let fails: Vec<String> = reports.iter().filter(|r| r.status == Status::Fail).map(|r| r.to_string()).collect();
        assert!(fails.is_empty(), "{fails:#?}");
    }
}
