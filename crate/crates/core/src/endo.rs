//! Unital ring endomorphisms and their power cycles.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{subring_closure, ElementId, FiniteRing, MAX_ORDER};
use crate::verdict::{index_tuples, Scan, Verdict, PAIR_SCAN_CAP};

/// A validated endomorphism `σ` with `σ(1) = 1`, together with the tables of
/// `σ^0 .. σ^(p+c-1)` where `(p, c)` is its power cycle.
pub struct Endomorphism {
    ring: Arc<FiniteRing>,
    label: String,
    powers: Vec<Vec<ElementId>>,
    preperiod: usize,
    period: usize,
    sampled: bool,
}

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Endomorphism")
            .field("ring", &self.ring.label())
            .field("label", &self.label)
            .field("preperiod", &self.preperiod)
            .field("period", &self.period)
            .finish()
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl Endomorphism {
    /// Validates `map` against the endomorphism laws.
    pub fn new(ring: Arc<FiniteRing>, map: Vec<ElementId>, label: impl Into<String>) -> Result<Self> {
        let scan = Scan::auto(ring.order(), PAIR_SCAN_CAP);
        let verdict = endomorphism_verdict(&ring, &map, scan)?;
        if !verdict.holds {
            return Err(Error::InvalidEndomorphism(verdict));
        }
        let (preperiod, period, powers) = power_cycle(&map);
        Ok(Endomorphism {
            ring,
            label: label.into(),
            powers,
            preperiod,
            period,
            sampled: verdict.sampled,
        })
    }

    pub fn identity(ring: Arc<FiniteRing>) -> Self {
        let map: Vec<ElementId> = ring.elements().collect();
        Endomorphism {
            ring,
            label: "id".into(),
            powers: vec![map],
            preperiod: 0,
            period: 1,
            sampled: false,
        }
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Whether the homomorphism laws were only sampled (very large rings).
    pub fn sampled(&self) -> bool {
        self.sampled
    }

    pub fn map(&self) -> &[ElementId] {
        self.powers.get(1).unwrap_or(&self.powers[0])
    }

    #[inline]
    pub fn apply(&self, a: ElementId) -> ElementId {
        self.apply_pow(1, a)
    }

    /// `σ^k(a)`.
    #[inline]
    pub fn apply_pow(&self, k: usize, a: ElementId) -> ElementId {
        self.powers[self.reduce_exponent(k)][a.0]
    }

    /// The exponent in `[0, p + c)` that acts like `σ^k`.
    pub fn reduce_exponent(&self, k: usize) -> usize {
        if k < self.powers.len() {
            k
        } else {
            self.preperiod + (k - self.preperiod) % self.period
        }
    }

    pub fn preperiod(&self) -> usize {
        self.preperiod
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// `(p, c)`: minimal with `σ^(p+c) = σ^p`.
    pub fn power_cycle(&self) -> (usize, usize) {
        (self.preperiod, self.period)
    }

    pub fn is_identity(&self) -> bool {
        self.preperiod == 0 && self.period == 1
    }

    /// `table(i:j,...)` form accepted by the endomorphism grammar.
    pub fn table_spec(&self) -> String {
        let pairs: Vec<String> = self
            .map()
            .iter()
            .enumerate()
            .map(|(i, j)| format!("{i}:{}", j.0))
            .collect();
        format!("table({})", pairs.join(","))
    }
}

/// Minimal `(p, c)` with `σ^(p+c) = σ^p`, plus the tables of `σ^0..σ^(p+c-1)`.
pub fn power_cycle(map: &[ElementId]) -> (usize, usize, Vec<Vec<ElementId>>) {
    let mut seen: HashMap<Vec<ElementId>, usize> = HashMap::new();
    let mut powers = Vec::new();
    let mut current: Vec<ElementId> = (0..map.len()).map(ElementId).collect();
    loop {
        if let Some(&first) = seen.get(&current) {
            return (first, powers.len() - first, powers);
        }
        seen.insert(current.clone(), powers.len());
        let next = current.iter().map(|&a| map[a.0]).collect();
        powers.push(std::mem::replace(&mut current, next));
    }
}

/// Checks additivity, then multiplicativity, then `σ(1) = 1`.
pub fn endomorphism_verdict(ring: &FiniteRing, map: &[ElementId], scan: Scan) -> Result<Verdict> {
    const NAME: &str = "endomorphism";
    if map.len() != ring.order() || map.iter().any(|&a| !ring.contains(a)) {
        return Err(Error::NotTotal {
            what: "endomorphism map",
            detail: format!("expected {} images inside {}", ring.order(), ring.label()),
        });
    }
    if scan == Scan::Exhaustive && ring.order() > PAIR_SCAN_CAP {
        return Err(Error::cap("exhaustive pair scan", ring.order() as u128, PAIR_SCAN_CAP as u128));
    }
    let s = |a: ElementId| map[a.0];
    let pairs = index_tuples(ring.order(), 2, scan);
    let additive = pairs.first(|t| {
        let (a, b) = (ElementId(t[0]), ElementId(t[1]));
        (s(ring.add(a, b)) != ring.add(s(a), s(b))).then(|| vec![a, b])
    });
    if let Some(w) = additive {
        return Ok(Verdict::fails(NAME, w).with_detail("additivity").scanned(scan));
    }
    let multiplicative = pairs.first(|t| {
        let (a, b) = (ElementId(t[0]), ElementId(t[1]));
        (s(ring.mul(a, b)) != ring.mul(s(a), s(b))).then(|| vec![a, b])
    });
    if let Some(w) = multiplicative {
        return Ok(Verdict::fails(NAME, w).with_detail("multiplicativity").scanned(scan));
    }
    if s(ring.one()) != ring.one() {
        return Ok(Verdict::fails(NAME, vec![ring.one()]).with_detail("unit").scanned(scan));
    }
    Ok(Verdict::holds(NAME).scanned(scan))
}

/// Validates `map` and returns the endomorphism with its power cycle.
pub fn validate_endomorphism(ring: &Arc<FiniteRing>, map: Vec<ElementId>) -> Result<Endomorphism> {
    Endomorphism::new(ring.clone(), map, "table")
}

/// Does the witness of a failing endomorphism verdict genuinely break the
/// named law?
pub fn endomorphism_law_fails(ring: &FiniteRing, map: &[ElementId], law: &str, witness: &[ElementId]) -> bool {
    let s = |a: ElementId| map[a.0];
    match (law, witness) {
        ("additivity", &[a, b]) => s(ring.add(a, b)) != ring.add(s(a), s(b)),
        ("multiplicativity", &[a, b]) => s(ring.mul(a, b)) != ring.mul(s(a), s(b)),
        ("unit", &[one]) => one == ring.one() && s(one) != one,
        _ => false,
    }
}

pub const NAMED_ENDOMORPHISMS: [&str; 5] = ["id", "negb", "swap", "eval0", "blockswap"];

/// Built-in endomorphisms:
/// * `id`;
/// * `negb`: conjugation by `diag(1,-1)` on 2x2 matrix rings, so
///   `[[a,b],[0,a]] -> [[a,-b],[0,a]]`;
/// * `swap`: `(a,b) -> (b,a)` on `prod(S,S)`;
/// * `eval0`: `f -> f(0)` on truncated (skew) polynomial rings;
/// * `blockswap`: exchanges the two 2x2 diagonal blocks (and the two
///   off-diagonal blocks) of a 4x4 matrix ring.
pub fn named_endomorphism(ring: &Arc<FiniteRing>, name: &str) -> Result<Endomorphism> {
    let shape_err = |what: &str| Error::Shape(format!("`{name}` needs {what}, but {} is not one", ring.label()));
    let map: Vec<ElementId> = match name {
        "id" => return Ok(Endomorphism::identity(ring.clone())),
        "negb" | "blockswap" => {
            let want = if name == "negb" { 2 } else { 4 };
            let mut map = Vec::with_capacity(ring.order());
            for e in ring.elements() {
                let (dim, base, x) = ring
                    .matrix_entries(e)
                    .filter(|(d, _, _)| *d == want)
                    .ok_or_else(|| shape_err(&format!("a ring of {want}x{want} matrices")))?;
                let y: Vec<ElementId> = if name == "negb" {
                    vec![x[0], base.neg(x[1]), base.neg(x[2]), x[3]]
                } else {
                    let p = |i: usize| (i + 2) % 4;
                    (0..16).map(|k| x[p(k / dim) * dim + p(k % dim)]).collect()
                };
                let image = ring.from_matrix_entries(&y).ok_or_else(|| {
                    Error::Shape(format!("`{name}` maps {} outside {}", ring.format(e), ring.label()))
                })?;
                map.push(image);
            }
            map
        }
        "swap" => {
            let (left, right) = ring.product_factors().ok_or_else(|| shape_err("a product ring"))?;
            if left.label() != right.label() || left.order() != right.order() {
                return Err(shape_err("a product of two equal factors"));
            }
            ring.elements()
                .map(|e| {
                    let (a, b) = ring.product_parts(e).expect("product ring");
                    ring.from_product_parts(b, a).expect("product ring")
                })
                .collect()
        }
        "eval0" => {
            let base = ring.series_base().ok_or_else(|| shape_err("a truncated polynomial ring"))?;
            ring.elements()
                .map(|e| {
                    let mut c = ring.series_coefficients(e).expect("series ring");
                    for slot in c.iter_mut().skip(1) {
                        *slot = base.zero();
                    }
                    ring.from_series_coefficients(&c).expect("series ring")
                })
                .collect()
        }
        other => return Err(Error::unknown("endomorphism", other)),
    };
    Ok(Endomorphism::new(ring.clone(), map, name)?)
}

/// A small set of elements that generates `ring` as a unital ring.
pub fn ring_generators(ring: &FiniteRing) -> Vec<ElementId> {
    let mut gens = Vec::new();
    let mut covered = vec![false; ring.order()];
    for m in subring_closure(ring, &gens, MAX_ORDER).expect("ring within cap") {
        covered[m.0] = true;
    }
    for e in ring.elements() {
        if covered[e.0] {
            continue;
        }
        gens.push(e);
        for m in subring_closure(ring, &gens, MAX_ORDER).expect("ring within cap") {
            covered[m.0] = true;
        }
    }
    gens
}

/// Extends `gens[i] -> images[i]` (with `0 -> 0`, `1 -> 1`) to a map on the
/// whole ring, or `None` if the assignment is not a homomorphism.
fn extend_to_homomorphism(ring: &FiniteRing, gens: &[ElementId], images: &[ElementId]) -> Option<Vec<ElementId>> {
    let mut phi: Vec<Option<ElementId>> = vec![None; ring.order()];
    let mut queue = VecDeque::new();
    let assign = |phi: &mut Vec<Option<ElementId>>, queue: &mut VecDeque<ElementId>, x: ElementId, y: ElementId| {
        match phi[x.0] {
            Some(z) => z == y,
            None => {
                phi[x.0] = Some(y);
                queue.push_back(x);
                true
            }
        }
    };
    let seeds = [(ring.zero(), ring.zero()), (ring.one(), ring.one())];
    for (x, y) in seeds.into_iter().chain(gens.iter().copied().zip(images.iter().copied())) {
        if !assign(&mut phi, &mut queue, x, y) {
            return None;
        }
    }
    let mut done: Vec<ElementId> = Vec::new();
    while let Some(u) = queue.pop_front() {
        done.push(u);
        let pu = phi[u.0].expect("queued elements are assigned");
        for i in 0..done.len() {
            let v = done[i];
            let pv = phi[v.0].expect("processed elements are assigned");
            let rules = [
                (ring.add(u, v), ring.add(pu, pv)),
                (ring.add(v, u), ring.add(pv, pu)),
                (ring.mul(u, v), ring.mul(pu, pv)),
                (ring.mul(v, u), ring.mul(pv, pu)),
            ];
            for (x, y) in rules {
                if !assign(&mut phi, &mut queue, x, y) {
                    return None;
                }
            }
        }
    }
    phi.into_iter().collect()
}

/// Every unital endomorphism of `ring`, sorted by their maps. Refuses when
/// the number of generator assignments exceeds `cap`.
pub fn all_endomorphisms(ring: &Arc<FiniteRing>, cap: usize) -> Result<Vec<Endomorphism>> {
    let gens = ring_generators(ring);
    let n = ring.order();
    let candidates = (n as u128).saturating_pow(gens.len() as u32);
    if candidates > cap as u128 {
        return Err(Error::cap("endomorphism candidates", candidates, cap as u128));
    }
    let mut maps = Vec::new();
    let mut images = vec![ElementId(0); gens.len()];
    for mut code in 0..candidates as usize {
        for slot in images.iter_mut() {
            *slot = ElementId(code % n);
            code /= n;
        }
        if let Some(map) = extend_to_homomorphism(ring, &gens, &images) {
            maps.push(map);
        }
    }
    maps.sort();
    maps.dedup();
    maps.into_iter()
        .map(|map| {
            let e = Endomorphism::new(ring.clone(), map, "")?;
            let spec = e.table_spec();
            Ok(if e.is_identity() { e.with_label("id") } else { e.with_label(spec) })
        })
        .collect()
}
