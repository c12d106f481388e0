mod common;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skewring::endo::Endomorphism;
use skewring::ring::{ElementId, FiniteRing};
use skewring::search::{family_pairs, Family};
use skewring::skew::{find_idempotents_bounded, sandwich_zero, skew_mul, SkewPolynomial};

use common::*;

/// Integer convolution mod n, entirely outside the library.
fn convolve_mod(n: usize, f: &[usize], g: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; (f.len() + g.len()).saturating_sub(1)];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a * b) % n;
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

#[test]
fn identity_twist_matches_convolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for n in [2usize, 3, 4, 6, 9, 12] {
        let ring = Arc::new(FiniteRing::integers(n).unwrap());
        let id = Endomorphism::identity(ring.clone());
        for _ in 0..2000 {
            let f: Vec<usize> = (0..rng.gen_range(0..7)).map(|_| rng.gen_range(0..n)).collect();
            let g: Vec<usize> = (0..rng.gen_range(0..7)).map(|_| rng.gen_range(0..n)).collect();
            let ids = |p: &[usize]| p.iter().map(|&c| ElementId(c)).collect::<Vec<_>>();
            let got: Vec<usize> = skew_mul(&id, &ids(&f), &ids(&g)).iter().map(|e| e.index()).collect();
            assert_eq!(got, convolve_mod(n, &f, &g), "Z({n}): {f:?} * {g:?}");
            checked += 1;
        }
    }
    assert!(checked >= 10_000);
}

#[test]
fn twisted_product_matches_schoolbook() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for entry in registry_entries() {
        let ring = entry.ring.clone();
        for _ in 0..500 {
            let poly = |rng: &mut ChaCha8Rng| -> Vec<ElementId> {
                (0..rng.gen_range(0..5)).map(|_| ElementId(rng.gen_range(0..ring.order()))).collect()
            };
            let (f, g) = (poly(&mut rng), poly(&mut rng));
            assert_eq!(skew_mul(&entry.sigma, &f, &g), naive_mul(&entry.sigma, &f, &g), "{}", entry.name);
        }
    }
}

#[test]
fn sandwich_agrees_with_brute_force() {
    for entry in registry_entries() {
        let sigma = &entry.sigma;
        let ring = sigma.ring();
        let polys: Vec<Vec<ElementId>> = all_tuples(ring, 2).into_iter().map(|t| trim(ring, t)).collect();
        let mut disagreements = Vec::new();
        for e in &polys {
            for f in &polys {
                let pe = SkewPolynomial::new(sigma, e.clone()).unwrap();
                let pf = SkewPolynomial::new(sigma, f.clone()).unwrap();
                let fast = sandwich_zero(&pe, &pf).unwrap();
                if fast.holds != brute_sandwich_zero(sigma, e, f) {
                    disagreements.push((pe.to_string(), pf.to_string()));
                }
                if !fast.holds {
                    let b = fast.witness[0];
                    let mut g = vec![ring.zero(); fast.power.unwrap() + 1];
                    g[fast.power.unwrap()] = b;
                    assert!(!naive_mul(sigma, &naive_mul(sigma, e, &g), f).is_empty());
                }
            }
        }
        assert!(disagreements.is_empty(), "{}: {disagreements:?}", entry.name);
    }
}

fn assert_idempotent_scan(sigma: &Arc<Endomorphism>, d: usize, label: &str) {
    let fast: Vec<Vec<ElementId>> = find_idempotents_bounded(sigma, d)
        .unwrap()
        .iter()
        .map(|p| p.coeffs().to_vec())
        .collect();
    let mut sorted = fast.clone();
    sorted.sort();
    assert_eq!(sorted, brute_idempotents(sigma, d), "{label} d={d}");
}

#[test]
fn idempotent_search_matches_full_scan() {
    let mut count = 0;
    for entry in registry_entries().iter().filter(|e| e.ring.order() <= 4) {
        for d in 0..=2 {
            assert_idempotent_scan(&entry.sigma, d, &entry.name);
        }
        count += 1;
    }
    for pair in family_pairs(Family::All, 4, true).unwrap() {
        for d in 0..=2 {
            assert_idempotent_scan(&pair.sigma, d, &pair.name);
        }
        count += 1;
    }
    assert!(count > 10, "{count}");
}

#[test]
fn printed_idempotents_of_the_swap_example() {
    let sigma = sigma_of("ex3");
    let listed: Vec<String> = find_idempotents_bounded(&sigma, 1).unwrap().iter().map(|p| p.to_string()).collect();
    let non_constant: Vec<&String> = listed.iter().filter(|s| s.contains('x')).collect();
    assert_eq!(non_constant.len(), 4, "{listed:?}");
    for want in ["(1,0) + (0,1)*x", "(0,1) + (0,1)*x"] {
        assert!(listed.iter().any(|s| s == want), "{want} missing from {listed:?}");
    }
}
