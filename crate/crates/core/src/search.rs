//! Generated families of small rings, paired with all their endomorphisms,
//! and a property-combination search over them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::endo::{all_endomorphisms, Endomorphism};
use crate::error::{Error, Result};
use crate::properties::{evaluate_auto, Property};
use crate::ring::{ElementId, FiniteRing};
use crate::theorems::verdict_json;
use crate::zoo::RegistryEntry;

/// Limit on generator assignments tried when enumerating endomorphisms.
pub const ENDO_CANDIDATE_CAP: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `Z(n)`.
    Zn,
    /// `prod(Z(a), Z(b))`, `a <= b`.
    Prod,
    /// `truncpoly(Z(n), m)`, `m >= 2`.
    Truncpoly,
    /// `mat(k, Z(n))`, `k >= 2`.
    Matrix,
    /// Subrings of 2x2 and 3x3 matrix rings over `Z(n)` generated by one or
    /// two matrix units.
    Subring,
    All,
}

impl Family {
    pub const NAMES: [&'static str; 6] = ["zn", "prod", "truncpoly", "matrix", "subring", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Family::Zn => "zn",
            Family::Prod => "prod",
            Family::Truncpoly => "truncpoly",
            Family::Matrix => "matrix",
            Family::Subring => "subring",
            Family::All => "all",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Family::Zn, Family::Prod, Family::Truncpoly, Family::Matrix, Family::Subring, Family::All]
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::unknown("family", s))
    }
}

fn z(n: usize) -> Result<Arc<FiniteRing>> {
    Ok(Arc::new(FiniteRing::integers(n)?))
}

fn matrix_unit_subrings(dim: usize, n: usize, max_order: usize, out: &mut Vec<Arc<FiniteRing>>) -> Result<()> {
    let base = z(n)?;
    let ambient = Arc::new(FiniteRing::matrix_ambient(dim, base.clone())?);
    let unit = |i: usize, j: usize| {
        let mut entries = vec![base.zero(); dim * dim];
        entries[i * dim + j] = base.one();
        ambient.from_matrix_entries(&entries).expect("matrix entries")
    };
    let units: Vec<ElementId> = (0..dim * dim).map(|k| unit(k / dim, k % dim)).collect();
    let mut gen_sets: Vec<Vec<ElementId>> = units.iter().map(|&u| vec![u]).collect();
    for a in 0..units.len() {
        for b in a + 1..units.len() {
            gen_sets.push(vec![units[a], units[b]]);
        }
    }
    let mut seen = BTreeSet::new();
    for gens in gen_sets {
        match FiniteRing::subring_capped(ambient.clone(), &gens, max_order) {
            Ok(ring) => {
                let members: Vec<ElementId> = ring
                    .elements()
                    .map(|e| {
                        let (_, _, entries) = ring.matrix_entries(e).expect("matrix subring");
                        ambient.from_matrix_entries(&entries).expect("ambient member")
                    })
                    .collect();
                if seen.insert(members) {
                    out.push(Arc::new(ring));
                }
            }
            Err(Error::Cap { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// Rings of the family with order in `2..=max_order`, in a fixed order.
pub fn family_rings(family: Family, max_order: usize) -> Result<Vec<Arc<FiniteRing>>> {
    let mut out = Vec::new();
    let pow_le = |n: usize, k: u32| (n as u128).saturating_pow(k) <= max_order as u128;
    let want = |f: Family| family == f || family == Family::All;
    if want(Family::Zn) {
        for n in 2..=max_order {
            out.push(z(n)?);
        }
    }
    if want(Family::Prod) {
        for a in 2..=max_order {
            for b in a..=max_order / a {
                out.push(Arc::new(FiniteRing::product(z(a)?, z(b)?)?));
            }
        }
    }
    if want(Family::Truncpoly) {
        for n in 2..=max_order {
            for m in 2.. {
                if !pow_le(n, m) {
                    break;
                }
                out.push(Arc::new(FiniteRing::truncated_poly(z(n)?, m as usize)?));
            }
        }
    }
    if want(Family::Matrix) {
        for k in 2..=4usize {
            for n in 2..=max_order {
                if !pow_le(n, (k * k) as u32) {
                    break;
                }
                out.push(Arc::new(FiniteRing::matrix(k, z(n)?)?));
            }
        }
    }
    if want(Family::Subring) {
        for dim in [2usize, 3] {
            for n in 2..=max_order {
                // every subring here contains a copy of Z(n) and one unit
                if !pow_le(n, 2) {
                    break;
                }
                matrix_unit_subrings(dim, n, max_order, &mut out)?;
            }
        }
    }
    Ok(out)
}

/// Every `(ring, σ)` with the ring from the family and `σ` one of its
/// endomorphisms (only the identity when `with_endomorphisms` is false).
pub fn family_pairs(family: Family, max_order: usize, with_endomorphisms: bool) -> Result<Vec<RegistryEntry>> {
    let rings = family_rings(family, max_order)?;
    let per_ring: Vec<Vec<RegistryEntry>> = rings
        .par_iter()
        .map(|ring| {
            let endos = if with_endomorphisms {
                all_endomorphisms(ring, ENDO_CANDIDATE_CAP)?
            } else {
                vec![Endomorphism::identity(ring.clone())]
            };
            Ok(endos
                .into_iter()
                .map(|s| {
                    let name = format!("{} / {}", ring.label(), s.label());
                    RegistryEntry::new(name, ring.clone(), Arc::new(s))
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_ring.into_iter().flatten().collect())
}

/// One conjunct of a search query: `name` or `!name`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Literal {
    pub property: Property,
    pub negated: bool,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!")?;
        }
        f.write_str(self.property.name())
    }
}

/// Parses `idem-reflexive,!reflexive`.
pub fn parse_query(text: &str) -> Result<Vec<Literal>> {
    let literals = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let (negated, name) = match s.strip_prefix('!') {
                Some(rest) => (true, rest.trim()),
                None => (false, s),
            };
            Ok(Literal {
                property: name.parse()?,
                negated,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if literals.is_empty() {
        return Err(Error::Shape("empty property query".into()));
    }
    Ok(literals)
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchHit {
    pub ring: String,
    pub sigma: String,
    pub order: usize,
    pub verdicts: Vec<serde_json::Value>,
}

/// Every generated pair satisfying all literals, in generation order.
pub fn search(query: &[Literal], family: Family, max_order: usize) -> Result<Vec<SearchHit>> {
    let uses_sigma = query.iter().any(|l| l.property.uses_sigma());
    let pairs = family_pairs(family, max_order, uses_sigma)?;
    let hits: Vec<Option<SearchHit>> = pairs
        .par_iter()
        .map(|p| {
            let mut verdicts = Vec::with_capacity(query.len());
            for lit in query {
                let v = evaluate_auto(lit.property, &p.sigma);
                if v.holds == lit.negated {
                    return None;
                }
                verdicts.push(verdict_json(&p.ring, &v));
            }
            Some(SearchHit {
                ring: p.ring.label().to_string(),
                sigma: p.sigma.label().to_string(),
                order: p.ring.order(),
                verdicts,
            })
        })
        .collect();
    Ok(hits.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_respect_the_order_bound() {
        for f in [Family::Zn, Family::Prod, Family::Truncpoly, Family::Matrix, Family::Subring] {
            let rings = family_rings(f, 16).unwrap();
            assert!(!rings.is_empty(), "{f}");
            assert!(rings.iter().all(|r| r.order() <= 16 && r.order() >= 2), "{f}");
        }
    }

    #[test]
    fn enough_small_pairs() {
        let pairs = family_pairs(Family::All, 16, true).unwrap();
        assert!(pairs.len() >= 50, "{}", pairs.len());
    }

    #[test]
    fn query_syntax() {
        let q = parse_query("idem-reflexive, !reflexive").unwrap();
        assert_eq!(q.len(), 2);
        assert!(q[1].negated);
        assert_eq!(q[1].to_string(), "!reflexive");
        assert!(parse_query("").is_err());
        assert!(parse_query("nonsense").is_err());
    }

    #[test]
    fn finds_idempotent_reflexive_but_not_reflexive() {
        let q = parse_query("idem-reflexive,!reflexive").unwrap();
        let hits = search(&q, Family::Subring, 16).unwrap();
        assert!(!hits.is_empty());
        assert!(hits.iter().all(|h| h.order <= 16));
    }
}
