//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use skewring::endo::Endomorphism;
use skewring::ring::{ElementId, FiniteRing};
use skewring::zoo::{registry, RegistryEntry};

/// The element printed as `text`.
pub fn elem(ring: &FiniteRing, text: &str) -> ElementId {
    ring.elements()
        .find(|&e| ring.format(e) == text)
        .unwrap_or_else(|| panic!("{text} is not an element of {}", ring.label()))
}

/// `σ^k(a)` by repeated application.
pub fn sigma_pow(sigma: &Endomorphism, k: usize, mut a: ElementId) -> ElementId {
    for _ in 0..k {
        a = sigma.apply(a);
    }
    a
}

pub fn trim(ring: &FiniteRing, mut f: Vec<ElementId>) -> Vec<ElementId> {
    while f.last() == Some(&ring.zero()) {
        f.pop();
    }
    f
}

/// Schoolbook product in `R[x;σ]`: `(a x^i)(b x^j) = a σ^i(b) x^(i+j)`.
pub fn naive_mul(sigma: &Endomorphism, f: &[ElementId], g: &[ElementId]) -> Vec<ElementId> {
    let ring = sigma.ring();
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = ring.add(out[i + j], ring.mul(a, sigma_pow(sigma, i, b)));
        }
    }
    trim(ring, out)
}

pub fn naive_add(ring: &FiniteRing, f: &[ElementId], g: &[ElementId]) -> Vec<ElementId> {
    let n = f.len().max(g.len());
    let at = |p: &[ElementId], i: usize| p.get(i).copied().unwrap_or(ring.zero());
    trim(ring, (0..n).map(|i| ring.add(at(f, i), at(g, i))).collect())
}

/// Every coefficient vector of length `len` over `R`, first coefficient
/// varying fastest.
pub fn all_tuples(ring: &FiniteRing, len: usize) -> Vec<Vec<ElementId>> {
    let q = ring.order();
    let total = q.pow(len as u32);
    (0..total)
        .map(|mut code| {
            (0..len)
                .map(|_| {
                    let c = ElementId(code % q);
                    code /= q;
                    c
                })
                .collect()
        })
        .collect()
}

/// Whether `e g f = 0` for every `g` in a family that certainly spans all
/// of `R[x;σ]` modulo the periodicity of `σ`: every polynomial of degree at
/// most `p + c` when `R` is tiny, every monomial of degree at most
/// `p + c + 2` otherwise.
pub fn brute_sandwich_zero(sigma: &Endomorphism, e: &[ElementId], f: &[ElementId]) -> bool {
    let ring = sigma.ring();
    let (p, c) = sigma.power_cycle();
    let probes: Vec<Vec<ElementId>> = if ring.order() <= 8 {
        all_tuples(ring, p + c + 1)
    } else {
        (0..=p + c + 2)
            .flat_map(|k| {
                ring.elements().map(move |b| {
                    let mut g = vec![ring.zero(); k + 1];
                    g[k] = b;
                    g
                })
            })
            .collect()
    };
    let ef: Vec<_> = e.to_vec();
    probes.iter().all(|g| naive_mul(sigma, &naive_mul(sigma, &ef, g), f).is_empty())
}

/// Idempotents of degree at most `d`, by testing every coefficient vector.
pub fn brute_idempotents(sigma: &Endomorphism, d: usize) -> Vec<Vec<ElementId>> {
    let ring = sigma.ring();
    let mut out: Vec<Vec<ElementId>> = all_tuples(ring, d + 1)
        .into_iter()
        .map(|t| trim(ring, t))
        .filter(|t| naive_mul(sigma, t, t) == *t)
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn registry_entries() -> &'static [RegistryEntry] {
    registry()
}

pub fn entry(name: &str) -> &'static RegistryEntry {
    registry().iter().find(|e| e.name == name).expect("registry entry")
}

pub fn sigma_of(name: &str) -> Arc<Endomorphism> {
    entry(name).sigma.clone()
}
