//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use skewring::endo::Endomorphism;
use skewring::properties::{evaluate, evaluate_auto, Property};
use skewring::ring::{check_axioms, idempotents, ElementId, FiniteRing};
use skewring::search::{family_pairs, Family};
use skewring::skew::{find_idempotents_bounded, sandwich_zero, skew_add, skew_mul, SkewPolynomial};
use skewring::theorems::{verify_entries, verify_paper, Bounds, Status, VerifyOptions};
use skewring::verdict::Scan;
use skewring::zoo::{build_ring, RegistryEntry, RingSpec};
use skewring_cli::run_args;

use common::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.1?}, limit {limit:?}"))?;
    Ok(format!("{took:.1?}"))
}

fn examples() -> Outcome {
    let start = Instant::now();

    let ex1 = sigma_of("ex1");
    for p in [Property::Abelian, Property::SigmaCompatible, Property::SigmaIdemReflexive] {
        ensure(evaluate_auto(p, &ex1).holds, || format!("ex1 is not {p}"))?;
    }

    let ut2 = build_ring(&RingSpec::UpperTriangular(Box::new(RingSpec::Integers(2)))).map_err(|e| e.to_string())?;
    let id = Arc::new(Endomorphism::identity(ut2.clone()));
    let e = SkewPolynomial::new(&id, vec![elem(&ut2, "[[1,0],[0,0]]"), elem(&ut2, "[[0,1],[0,0]]")]).unwrap();
    ensure(e.is_idempotent(), || "E11 + E12*x is not idempotent".into())?;

    let swap = sigma_of("ex3");
    let r = swap.ring();
    let (a, b) = (elem(r, "(1,0)"), elem(r, "(0,1)"));
    let e = SkewPolynomial::new(&swap, vec![a, b]).unwrap();
    let f = SkewPolynomial::new(&swap, vec![b, b]).unwrap();
    ensure(e.is_idempotent() && f.is_idempotent(), || "swap idempotents".into())?;
    let c = SkewPolynomial::constant(&swap, b);
    let (ce, ec) = (c.mul(&e).unwrap(), e.mul(&c).unwrap());
    ensure(ce.to_string() == "(0,1)*x" && ec.is_zero(), || format!("c*e = {ce}, e*c = {ec}"))?;

    let block = sigma_of("ex4");
    ensure(!evaluate_auto(Property::CSigma, &block).holds, || "ex4 satisfies c-sigma".into())?;
    let d = elem(block.ring(), "[[1,0,0,0],[0,1,0,0],[0,0,0,0],[0,0,0,0]]");
    ensure(block.apply(d) != d, || "blockswap fixes diag(1,1,0,0)".into())?;

    let eval = sigma_of("ex2t");
    let v = evaluate_auto(Property::SigmaCompatible, &eval);
    let t = elem(eval.ring(), "t");
    ensure(!v.holds && v.witness == vec![t, t], || format!("ex2t: {v}"))?;

    within(start, Duration::from_secs(10))
}

fn claim_suite() -> Outcome {
    let start = Instant::now();
    let reports = verify_paper(VerifyOptions::default()).map_err(|e| e.to_string())?;
    let fails: Vec<String> = reports.iter().filter(|r| r.status == Status::Fail).map(ToString::to_string).collect();
    ensure(fails.is_empty(), || format!("failing claims: {fails:?}"))?;
    for (claim, entry) in [("C11", "ex3"), ("C12", "ex4")] {
        let r = reports.iter().find(|r| r.claim == claim && r.entry == entry).unwrap();
        ensure(r.status == Status::Pass && r.witness.is_some(), || format!("{r}"))?;
    }
    let default_time = within(start, Duration::from_secs(60))?;

    let start = Instant::now();
    let small: Vec<RegistryEntry> = registry_entries().iter().filter(|e| e.ring.order() <= 16).cloned().collect();
    let escalated = verify_entries(
        &small,
        VerifyOptions {
            bounds: Bounds::ESCALATED,
            ..VerifyOptions::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let fails: Vec<String> = escalated.iter().filter(|r| r.status == Status::Fail).map(ToString::to_string).collect();
    ensure(fails.is_empty(), || format!("failing escalated claims: {fails:?}"))?;
    let escalated_time = within(start, Duration::from_secs(600))?;
    Ok(format!(
        "{} reports in {default_time}, {} escalated reports on {} entries in {escalated_time}",
        reports.len(),
        escalated.len(),
        small.len()
    ))
}

fn oracles() -> Outcome {
    let mut sandwiches = 0;
    for entry in registry_entries() {
        let sigma = &entry.sigma;
        let ring = sigma.ring();
        let polys: Vec<Vec<ElementId>> = all_tuples(ring, 2).into_iter().map(|t| trim(ring, t)).collect();
        for e in &polys {
            for f in &polys {
                let pe = SkewPolynomial::new(sigma, e.clone()).unwrap();
                let pf = SkewPolynomial::new(sigma, f.clone()).unwrap();
                let fast = sandwich_zero(&pe, &pf).map_err(|x| x.to_string())?.holds;
                ensure(fast == brute_sandwich_zero(sigma, e, f), || format!("{}: sandwich of {pe} and {pf}", entry.name))?;
                sandwiches += 1;
            }
        }
    }

    let mut scans = 0;
    let pairs = family_pairs(Family::All, 4, true).map_err(|e| e.to_string())?;
    for entry in registry_entries().iter().filter(|e| e.ring.order() <= 4).chain(&pairs) {
        for d in 0..=2 {
            let mut fast: Vec<Vec<ElementId>> = find_idempotents_bounded(&entry.sigma, d)
                .map_err(|e| e.to_string())?
                .iter()
                .map(|p| p.coeffs().to_vec())
                .collect();
            fast.sort();
            ensure(fast == brute_idempotents(&entry.sigma, d), || format!("{} d={d}", entry.name))?;
            scans += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut products = 0;
    for n in [2usize, 3, 4, 5, 6, 8, 9, 12] {
        let ring = Arc::new(FiniteRing::integers(n).unwrap());
        let id = Endomorphism::identity(ring);
        for _ in 0..1250 {
            let f: Vec<usize> = (0..rng.gen_range(0..7)).map(|_| rng.gen_range(0..n)).collect();
            let g: Vec<usize> = (0..rng.gen_range(0..7)).map(|_| rng.gen_range(0..n)).collect();
            let mut want = vec![0usize; (f.len() + g.len()).saturating_sub(1)];
            for (i, a) in f.iter().enumerate() {
                for (j, b) in g.iter().enumerate() {
                    want[i + j] = (want[i + j] + a * b) % n;
                }
            }
            while want.last() == Some(&0) {
                want.pop();
            }
            let ids = |p: &[usize]| p.iter().map(|&c| ElementId(c)).collect::<Vec<_>>();
            let got: Vec<usize> = skew_mul(&id, &ids(&f), &ids(&g)).iter().map(|e| e.index()).collect();
            ensure(got == want, || format!("Z({n}): {f:?} * {g:?}"))?;
            products += 1;
        }
    }
    Ok(format!("{sandwiches} sandwiches, {scans} idempotent scans, {products} products, 0 disagreements"))
}

fn invariants() -> Outcome {
    for entry in registry_entries() {
        let v = check_axioms(entry.ring.as_ref(), Scan::Exhaustive, Scan::Exhaustive);
        ensure(v.holds, || format!("{}: {v}", entry.name))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for entry in registry_entries() {
        let (s, r) = (&entry.sigma, &entry.ring);
        for _ in 0..1000 {
            let mut poly = || -> Vec<ElementId> {
                trim(r, (0..rng.gen_range(0..5)).map(|_| ElementId(rng.gen_range(0..r.order()))).collect())
            };
            let (f, g, h) = (poly(), poly(), poly());
            let assoc = skew_mul(s, &skew_mul(s, &f, &g), &h) == skew_mul(s, &f, &skew_mul(s, &g, &h));
            let left = skew_mul(s, &f, &skew_add(r, &g, &h)) == skew_add(r, &skew_mul(s, &f, &g), &skew_mul(s, &f, &h));
            let right = skew_mul(s, &skew_add(r, &f, &g), &h) == skew_add(r, &skew_mul(s, &f, &h), &skew_mul(s, &g, &h));
            ensure(assoc && left && right, || format!("{}: {f:?} {g:?} {h:?}", entry.name))?;
        }
    }

    let pairs = family_pairs(Family::All, 16, true).map_err(|e| e.to_string())?;
    ensure(pairs.len() >= 50, || format!("only {} generated pairs", pairs.len()))?;
    let mut violations = Vec::new();
    for entry in registry_entries().iter().chain(&pairs) {
        let holds = |p: Property| evaluate(p, &entry.sigma, Scan::Exhaustive).map(|v| v.holds);
        let h = |p| holds(p).map_err(|e| e.to_string());
        let abelian = h(Property::Abelian)?;
        let ir = h(Property::IdemReflexive)?;
        let c_sigma = h(Property::CSigma)?;
        let fixes = idempotents(&entry.ring).into_iter().all(|e| entry.sigma.apply(e) == e);
        let chain = [
            ("semicommutative => abelian", h(Property::Semicommutative)?, abelian),
            ("abelian => idem-reflexive", abelian, ir),
            ("reflexive => idem-reflexive", h(Property::Reflexive)?, ir),
            ("sigma-compatible => c-sigma", h(Property::SigmaCompatible)?, c_sigma),
            ("c-sigma => sigma fixes idempotents", c_sigma, fixes),
            ("sigma fixes idempotents => sigma-preserves-re", fixes, h(Property::SigmaPreservesRe)?),
        ];
        for (name, a, b) in chain {
            if a && !b {
                violations.push(format!("{}: {name}", entry.name));
            }
        }
    }
    ensure(violations.is_empty(), || format!("{violations:?}"))?;
    Ok(format!("{} registry entries, {} generated pairs, 0 violations", registry_entries().len(), pairs.len()))
}

fn determinism() -> Outcome {
    let run = |args: &[&str]| -> Result<String, String> {
        let (code, out, err) = run_args(args.iter().copied());
        ensure(code == 0, || format!("{args:?} exited {code}: {err}"))?;
        Ok(out)
    };
    let first = run(&["verify-paper", "--json"])?;
    let second = run(&["verify-paper", "--json"])?;
    let single = run(&["verify-paper", "--json", "--threads", "1"])?;
    let many = run(&["verify-paper", "--json", "--threads", "4"])?;
    ensure(first == second, || "two runs differ".into())?;
    ensure(single == many && single == first, || "1 and 4 workers differ".into())?;
    let parsed: Value = serde_json::from_str(&first).map_err(|e| e.to_string())?;
    let n = parsed.as_array().map_or(0, Vec::len);
    Ok(format!("4 runs of {} bytes ({n} reports) identical", first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 5] = [
        ("example reproduction", examples),
        ("claim suite", claim_suite),
        ("oracle equivalences", oracles),
        ("invariant suites", invariants),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(note) => println!("criterion {} ({name}): PASS [{note}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{why}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
