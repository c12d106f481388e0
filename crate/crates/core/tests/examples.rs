mod common;

use std::sync::Arc;

use skewring::endo::Endomorphism;
use skewring::properties::{evaluate_auto, Property};
use skewring::skew::SkewPolynomial;
use skewring::zoo::{build_ring, RingSpec};

use common::*;

#[test]
fn negation_example_is_compatible_abelian_and_idempotent_reflexive() {
    let sigma = sigma_of("ex1");
    for p in [Property::Abelian, Property::SigmaCompatible, Property::SigmaIdemReflexive] {
        assert!(evaluate_auto(p, &sigma).holds, "{p}");
    }
}

#[test]
fn upper_triangular_linear_idempotent() {
    let ring = build_ring(&RingSpec::UpperTriangular(Box::new(RingSpec::Integers(2)))).unwrap();
    let id = Arc::new(Endomorphism::identity(ring.clone()));
    let e11 = elem(&ring, "[[1,0],[0,0]]");
    let e12 = elem(&ring, "[[0,1],[0,0]]");
    let e = SkewPolynomial::new(&id, vec![e11, e12]).unwrap();
    assert!(e.is_idempotent());
    assert_eq!(e.mul(&e).unwrap(), e);
}

#[test]
fn swap_example_idempotents_are_not_central() {
    let sigma = sigma_of("ex3");
    let ring = sigma.ring();
    let (a, b) = (elem(ring, "(1,0)"), elem(ring, "(0,1)"));
    let e = SkewPolynomial::new(&sigma, vec![a, b]).unwrap();
    let f = SkewPolynomial::new(&sigma, vec![b, b]).unwrap();
    assert!(e.is_idempotent() && f.is_idempotent());
    let c = SkewPolynomial::constant(&sigma, b);
    assert_eq!(c.mul(&e).unwrap(), SkewPolynomial::monomial(&sigma, b, 1));
    assert_eq!(c.mul(&e).unwrap().to_string(), "(0,1)*x");
    assert!(e.mul(&c).unwrap().is_zero());
}

#[test]
fn block_swap_moves_a_diagonal_idempotent() {
    let sigma = sigma_of("ex4");
    let ring = sigma.ring();
    assert!(!evaluate_auto(Property::CSigma, &sigma).holds);
    let d = elem(ring, "[[1,0,0,0],[0,1,0,0],[0,0,0,0],[0,0,0,0]]");
    assert!(ring.is_idempotent(d));
    assert_ne!(sigma.apply(d), d);
}

#[test]
fn evaluation_surrogate_breaks_compatibility_at_t() {
    let sigma = sigma_of("ex2t");
    let ring = sigma.ring();
    let v = evaluate_auto(Property::SigmaCompatible, &sigma);
    let t = elem(ring, "t");
    assert!(!v.holds);
    assert_eq!(v.witness, vec![t, t]);
}
