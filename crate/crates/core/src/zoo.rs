//! Ring and endomorphism specifications, and the registry of worked examples.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! ring := "Z(" INT ")" | "prod(" ring "," ring ")" | "mat(" INT "," ring ")"
//!       | "truncpoly(" ring "," INT ")" | "sub(" ring ";" elem ("," elem)* ")"
//!       | "ut2(" ring ")" | "ut2c(" ring ")" | NAME
//! endo := "id" | "table(" INT ":" INT ("," INT ":" INT)* ")" | NAME
//! ```

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::endo::{named_endomorphism, Endomorphism};
use crate::error::{Error, Result};
use crate::literal::ElemLit;
use crate::ring::{ElementId, FiniteRing};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers(u64),
    Product(Box<RingSpec>, Box<RingSpec>),
    Matrix(u64, Box<RingSpec>),
    TruncPoly(Box<RingSpec>, u64),
    Sub(Box<RingSpec>, Vec<ElemLit>),
    /// Full upper triangular 2x2 matrices.
    UpperTriangular(Box<RingSpec>),
    /// `[[a,b],[0,a]]`.
    UpperToeplitz(Box<RingSpec>),
    Named(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EndoSpec {
    Identity,
    Table(Vec<(u64, u64)>),
    Named(String),
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers(n) => write!(f, "Z({n})"),
            RingSpec::Product(a, b) => write!(f, "prod({a},{b})"),
            RingSpec::Matrix(n, r) => write!(f, "mat({n},{r})"),
            RingSpec::TruncPoly(r, m) => write!(f, "truncpoly({r},{m})"),
            RingSpec::Sub(r, gens) => {
                write!(f, "sub({r};")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
            RingSpec::UpperTriangular(r) => write!(f, "ut2({r})"),
            RingSpec::UpperToeplitz(r) => write!(f, "ut2c({r})"),
            RingSpec::Named(name) => f.write_str(name),
        }
    }
}

impl fmt::Display for EndoSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndoSpec::Identity => f.write_str("id"),
            EndoSpec::Table(pairs) => {
                let items: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}:{b}")).collect();
                write!(f, "table({})", items.join(","))
            }
            EndoSpec::Named(name) => f.write_str(name),
        }
    }
}

fn size(n: u64) -> Result<usize> {
    usize::try_from(n).map_err(|_| Error::cap("size", n as u128, usize::MAX as u128))
}

/// Evaluates a ring specification.
pub fn build_ring(spec: &RingSpec) -> Result<Arc<FiniteRing>> {
    Ok(match spec {
        RingSpec::Integers(n) => Arc::new(FiniteRing::integers(size(*n)?)?),
        RingSpec::Product(a, b) => Arc::new(FiniteRing::product(build_ring(a)?, build_ring(b)?)?),
        RingSpec::Matrix(n, r) => Arc::new(FiniteRing::matrix(size(*n)?, build_ring(r)?)?),
        RingSpec::TruncPoly(r, m) => Arc::new(FiniteRing::truncated_poly(build_ring(r)?, size(*m)?)?),
        RingSpec::Sub(parent, gens) => {
            let parent = build_ambient(parent)?;
            let ids = gens.iter().map(|g| parent.resolve(g)).collect::<Result<Vec<_>>>()?;
            Arc::new(FiniteRing::subring(parent, &ids)?)
        }
        RingSpec::UpperTriangular(r) => Arc::new(upper_triangular(build_ring(r)?)?),
        RingSpec::UpperToeplitz(r) => Arc::new(upper_toeplitz(build_ring(r)?)?),
        RingSpec::Named(name) => registry_entry(name)?.ring.clone(),
    })
}

/// Ambient rings of `sub(...)` may be matrix rings beyond the order cap.
fn build_ambient(spec: &RingSpec) -> Result<Arc<FiniteRing>> {
    match spec {
        RingSpec::Matrix(n, r) => Ok(Arc::new(FiniteRing::matrix_ambient(size(*n)?, build_ring(r)?)?)),
        other => build_ring(other),
    }
}

/// Evaluates an endomorphism specification against `ring`.
pub fn build_endo(ring: &Arc<FiniteRing>, spec: &EndoSpec) -> Result<Arc<Endomorphism>> {
    match spec {
        EndoSpec::Identity => Ok(Arc::new(Endomorphism::identity(ring.clone()))),
        EndoSpec::Named(name) => {
            // a registry entry's own endomorphism is reused so that identical
            // names give the same Arc
            if let Some(entry) = registry().iter().find(|e| Arc::ptr_eq(&e.ring, ring)) {
                if entry.sigma.label() == name {
                    return Ok(entry.sigma.clone());
                }
            }
            Ok(Arc::new(named_endomorphism(ring, name)?))
        }
        EndoSpec::Table(pairs) => {
            let n = ring.order();
            let mut map: Vec<Option<ElementId>> = vec![None; n];
            for &(a, b) in pairs {
                let (a, b) = (size(a)?, size(b)?);
                if a >= n || b >= n {
                    return Err(Error::NotTotal {
                        what: "endomorphism table",
                        detail: format!("{a}:{b} is outside {}", ring.label()),
                    });
                }
                if map[a].replace(ElementId(b)).is_some() {
                    return Err(Error::NotTotal {
                        what: "endomorphism table",
                        detail: format!("{a} is mapped twice"),
                    });
                }
            }
            let map = map
                .into_iter()
                .enumerate()
                .map(|(i, m)| {
                    m.ok_or_else(|| Error::NotTotal {
                        what: "endomorphism table",
                        detail: format!("no image for {i}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Arc::new(Endomorphism::new(ring.clone(), map, spec.to_string())?))
        }
    }
}

fn matrix_from(ambient: &FiniteRing, entries: [ElementId; 4]) -> ElementId {
    ambient.from_matrix_entries(&entries).expect("2x2 entries")
}

/// Upper triangular 2x2 matrices over `base`.
pub fn upper_triangular(base: Arc<FiniteRing>) -> Result<FiniteRing> {
    let label = format!("ut2({})", base.label());
    let ambient = Arc::new(FiniteRing::matrix_ambient(2, base.clone())?);
    let z = base.zero();
    let mut gens = Vec::new();
    for s in base.elements() {
        gens.push(matrix_from(&ambient, [s, z, z, z]));
        gens.push(matrix_from(&ambient, [z, s, z, z]));
        gens.push(matrix_from(&ambient, [z, z, z, s]));
    }
    Ok(FiniteRing::subring(ambient, &gens)?.with_label(label))
}

/// Matrices `[[a,b],[0,a]]` over `base`.
pub fn upper_toeplitz(base: Arc<FiniteRing>) -> Result<FiniteRing> {
    let label = format!("ut2c({})", base.label());
    let ambient = Arc::new(FiniteRing::matrix_ambient(2, base.clone())?);
    let z = base.zero();
    let mut gens = Vec::new();
    for s in base.elements() {
        gens.push(matrix_from(&ambient, [s, z, z, s]));
        gens.push(matrix_from(&ambient, [z, s, z, z]));
    }
    Ok(FiniteRing::subring(ambient, &gens)?.with_label(label))
}

/// Block-diagonal 4x4 matrices `diag([[a,b],[0,a]], [[u,v],[0,u]])` over
/// `Z(p)`, generated by `E11+E22`, `E12`, `E33+E44`, `E34`.
pub fn block_ring(p: usize) -> Result<FiniteRing> {
    let base = Arc::new(FiniteRing::integers(p)?);
    let ambient = Arc::new(FiniteRing::matrix_ambient(4, base.clone())?);
    let unit = |cells: &[(usize, usize)]| {
        let mut entries = vec![base.zero(); 16];
        for &(i, j) in cells {
            entries[i * 4 + j] = base.one();
        }
        ambient.from_matrix_entries(&entries).expect("4x4 entries")
    };
    let gens = [
        unit(&[(0, 0), (1, 1)]),
        unit(&[(0, 1)]),
        unit(&[(2, 2), (3, 3)]),
        unit(&[(2, 3)]),
    ];
    let ring = FiniteRing::subring(ambient, &gens)?;
    let expected = p.pow(4);
    if ring.order() != expected {
        return Err(Error::Shape(format!(
            "block ring over Z({p}) has order {}, expected {expected}",
            ring.order()
        )));
    }
    Ok(ring)
}

/// A named `(ring, σ)` pair.
#[derive(Clone, Debug)]
pub struct RegistryEntry {
    pub name: String,
    pub ring: Arc<FiniteRing>,
    pub sigma: Arc<Endomorphism>,
    pub provenance: String,
    /// Finite stand-in for an infinite ring.
    pub surrogate: bool,
}

impl RegistryEntry {
    pub fn new(name: impl Into<String>, ring: Arc<FiniteRing>, sigma: Arc<Endomorphism>) -> Self {
        RegistryEntry {
            name: name.into(),
            ring,
            sigma,
            provenance: String::new(),
            surrogate: false,
        }
    }
}

pub const REGISTRY_NAMES: [&str; 7] = ["ex1", "ex2t", "ex3", "ex4", "ex_ut2", "mat2_z2", "z4"];

fn entry(name: &str, ring: FiniteRing, endo: &str, provenance: &str) -> Result<RegistryEntry> {
    let ring = Arc::new(ring.with_label(name));
    let sigma = Arc::new(named_endomorphism(&ring, endo)?);
    Ok(RegistryEntry {
        name: name.to_string(),
        ring,
        sigma,
        provenance: provenance.to_string(),
        surrogate: false,
    })
}

/// The block ring over `Z(p)` with the block swap, for `p` prime and at
/// most 7.
pub fn block_entry(p: usize) -> Result<RegistryEntry> {
    if ![2, 3, 5, 7].contains(&p) {
        return Err(Error::Shape(format!("block ring needs a prime at most 7, got {p}")));
    }
    let name = if p == 2 { "ex4".to_string() } else { format!("ex4_p{p}") };
    entry(
        &name,
        block_ring(p)?,
        "blockswap",
        "block-diagonal pairs of dual-number matrices; sigma exchanges the blocks",
    )
}

/// The evaluation map on the finite quotient `Z(p)[t]/(t^m)` of a
/// polynomial ring.
pub fn evaluation_entry(p: usize, m: usize) -> Result<RegistryEntry> {
    let name = if (p, m) == (2, 3) { "ex2t".to_string() } else { format!("ex2t_p{p}_m{m}") };
    let base = Arc::new(FiniteRing::integers(p)?);
    let mut e = entry(
        &name,
        FiniteRing::truncated_poly(base, m)?,
        "eval0",
        "surrogate: truncation of a polynomial ring over a field, sigma(f) = f(0)",
    )?;
    e.surrogate = true;
    Ok(e)
}

/// Builds every registry entry, sorted by name.
pub fn build_registry() -> Result<Vec<RegistryEntry>> {
    let z = |n| FiniteRing::integers(n).map(Arc::new);
    let mut out = vec![
        entry(
            "ex1",
            upper_toeplitz(z(4)?)?,
            "negb",
            "[[a,b],[0,a]] over Z(4); sigma negates b",
        )?,
        evaluation_entry(2, 3)?,
        entry(
            "ex3",
            FiniteRing::product(z(2)?, z(2)?)?,
            "swap",
            "Z(2) x Z(2); sigma swaps the components",
        )?,
        block_entry(2)?,
        entry(
            "ex_ut2",
            upper_triangular(z(2)?)?,
            "id",
            "upper triangular 2x2 matrices over Z(2)",
        )?,
        entry("mat2_z2", FiniteRing::matrix(2, z(2)?)?, "id", "control: full 2x2 matrices over Z(2)")?,
        entry("z4", FiniteRing::integers(4)?, "id", "control: Z(4)")?,
    ];
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// Shared, lazily built registry.
pub fn registry() -> &'static [RegistryEntry] {
    static REGISTRY: OnceLock<Vec<RegistryEntry>> = OnceLock::new();
    REGISTRY.get_or_init(|| build_registry().expect("registry entries are valid"))
}

pub fn registry_entry(name: &str) -> Result<&'static RegistryEntry> {
    registry()
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::unknown("registry ring", name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::endomorphism_verdict;
    use crate::verdict::Scan;

    #[test]
    fn registry_has_expected_shapes() {
        let reg = registry();
        assert_eq!(reg.len(), 7);
        let names: Vec<&str> = reg.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, REGISTRY_NAMES);
        let order = |n| registry_entry(n).unwrap().ring.order();
        assert_eq!(order("ex1"), 16);
        assert_eq!(order("ex4"), 16);
        assert_eq!(order("ex3"), 4);
        assert_eq!(order("ex2t"), 8);
        assert_eq!(order("ex_ut2"), 8);
        assert_eq!(registry_entry("ex3").unwrap().sigma.power_cycle(), (0, 2));
        assert!(registry_entry("ex2t").unwrap().surrogate);
    }

    #[test]
    fn every_entry_is_valid() {
        for e in registry() {
            let v = e.ring.validate();
            assert!(v.holds && !v.sampled, "{}: {v}", e.name);
            let s = endomorphism_verdict(&e.ring, e.sigma.map(), Scan::Exhaustive).unwrap();
            assert!(s.holds, "{}: {s}", e.name);
        }
    }

    #[test]
    fn toeplitz_ring_is_commutative() {
        assert!(registry_entry("ex1").unwrap().ring.is_commutative());
    }

    #[test]
    fn block_ring_over_larger_primes() {
        let e = block_entry(3).unwrap();
        assert_eq!(e.ring.order(), 81);
        assert_eq!(e.sigma.power_cycle(), (0, 2));
        assert!(block_entry(4).is_err());
    }

    #[test]
    fn specs_build() {
        let spec = RingSpec::Product(Box::new(RingSpec::Integers(2)), Box::new(RingSpec::Integers(2)));
        assert_eq!(spec.to_string(), "prod(Z(2),Z(2))");
        assert_eq!(build_ring(&spec).unwrap().order(), 4);
        let ut = RingSpec::UpperToeplitz(Box::new(RingSpec::Integers(4)));
        let ring = build_ring(&ut).unwrap();
        assert_eq!(ring.order(), 16);
        assert!(build_endo(&ring, &EndoSpec::Named("negb".into())).is_ok());
        assert!(build_endo(&ring, &EndoSpec::Named("swap".into())).is_err());
        let t = build_ring(&RingSpec::TruncPoly(Box::new(RingSpec::Integers(2)), 3)).unwrap();
        assert!(build_endo(&t, &EndoSpec::Named("eval0".into())).is_ok());
        let big = RingSpec::Matrix(3, Box::new(RingSpec::Integers(4)));
        assert!(matches!(build_ring(&big), Err(Error::Cap { .. })));
    }

    #[test]
    fn table_endomorphisms() {
        let r = build_ring(&RingSpec::Integers(3)).unwrap();
        let ok = EndoSpec::Table(vec![(0, 0), (1, 1), (2, 2)]);
        assert!(build_endo(&r, &ok).unwrap().is_identity());
        let partial = EndoSpec::Table(vec![(0, 0), (1, 1)]);
        assert!(matches!(build_endo(&r, &partial), Err(Error::NotTotal { .. })));
        let bad = EndoSpec::Table(vec![(0, 0), (1, 2), (2, 1)]);
        assert!(matches!(build_endo(&r, &bad), Err(Error::InvalidEndomorphism(_))));
    }
}
