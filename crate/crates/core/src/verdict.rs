//! Verdicts returned by every decision procedure, and the scan policy that
//! produced them.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ring::ElementId;

/// Largest order for which pair scans run exhaustively.
pub const PAIR_SCAN_CAP: usize = 4096;
/// Largest order for which triple scans run exhaustively.
pub const TRIPLE_SCAN_CAP: usize = 256;
pub const DEFAULT_SEED: u64 = 0x5eed_0f_5ca1;
pub const DEFAULT_SAMPLES: usize = 100_000;

/// How a property is quantified over ring elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scan {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

impl Scan {
    pub fn sampled(seed: u64) -> Self {
        Scan::Sampled {
            seed,
            samples: DEFAULT_SAMPLES,
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self, Scan::Sampled { .. })
    }

    /// Exhaustive when `order` is within `cap`, otherwise sampled with the
    /// default seed.
    pub fn auto(order: usize, cap: usize) -> Self {
        if order <= cap {
            Scan::Exhaustive
        } else {
            Scan::sampled(DEFAULT_SEED)
        }
    }
}

impl Default for Scan {
    fn default() -> Self {
        Scan::Exhaustive
    }
}

/// Outcome of a property check. A failing verdict always carries the
/// lexicographically first witness tuple found by the scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: String,
    pub holds: bool,
    pub witness: Vec<ElementId>,
    /// Exponent part of the witness, for checks quantified over powers of x.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub power: Option<usize>,
    /// Which clause failed (axiom name, implication direction, ...).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    #[serde(default)]
    pub sampled: bool,
}

impl Verdict {
    pub fn holds(property: impl Into<String>) -> Self {
        Verdict {
            property: property.into(),
            holds: true,
            witness: Vec::new(),
            power: None,
            detail: None,
            sampled: false,
        }
    }

    pub fn fails(property: impl Into<String>, witness: Vec<ElementId>) -> Self {
        Verdict {
            property: property.into(),
            holds: false,
            witness,
            power: None,
            detail: None,
            sampled: false,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_power(mut self, power: usize) -> Self {
        self.power = Some(power);
        self
    }

    pub(crate) fn scanned(mut self, scan: Scan) -> Self {
        self.sampled = scan.is_sampled();
        self
    }

    /// Renames the verdict, keeping witness and detail. Used when a composite
    /// property delegates to one of its conjuncts.
    pub fn renamed(mut self, property: impl Into<String>) -> Self {
        let inner = std::mem::replace(&mut self.property, property.into());
        if !self.holds {
            self.detail = Some(match self.detail.take() {
                Some(d) => format!("{inner}: {d}"),
                None => inner,
            });
        }
        self
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds {
            write!(f, "{}: holds", self.property)?;
        } else {
            write!(f, "{}: fails", self.property)?;
            if let Some(d) = &self.detail {
                write!(f, " ({d})")?;
            }
            let ids: Vec<String> = self.witness.iter().map(|e| e.0.to_string()).collect();
            write!(f, " witness [{}]", ids.join(", "))?;
            if let Some(k) = self.power {
                write!(f, " power {k}")?;
            }
        }
        if self.sampled {
            write!(f, " [sampled]")?;
        }
        Ok(())
    }
}

/// First `Some` produced by `probe` over `0..n`, in ascending order. Runs in
/// parallel but always returns the same value as the serial loop.
pub(crate) fn first_index<T, F>(n: usize, probe: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    (0..n).into_par_iter().find_map_first(probe)
}

/// Like [`first_index`] over an explicit list of candidates.
pub(crate) fn first_of<T, I, F>(items: &[I], probe: F) -> Option<T>
where
    T: Send,
    I: Sync,
    F: Fn(&I) -> Option<T> + Sync + Send,
{
    items.par_iter().find_map_first(probe)
}

/// Outer indices for a scan: `0..n`, or a seeded sample of it.
pub(crate) fn outer_indices(n: usize, scan: Scan) -> Vec<usize> {
    match scan {
        Scan::Exhaustive => (0..n).collect(),
        Scan::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).map(|_| rng.gen_range(0..n)).collect()
        }
    }
}

/// Index tuples for a scan of arity `k`: all of `[0,n)^k` in lexicographic
/// order, or a seeded sample.
pub(crate) fn index_tuples(n: usize, k: u32, scan: Scan) -> TupleSource {
    match scan {
        Scan::Exhaustive => TupleSource::All { n, k },
        Scan::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tuples = (0..samples)
                .map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect())
                .collect();
            TupleSource::Listed(tuples)
        }
    }
}

pub(crate) enum TupleSource {
    All { n: usize, k: u32 },
    Listed(Vec<Vec<usize>>),
}

impl TupleSource {
    /// First tuple (in source order) on which `probe` returns `Some`.
    pub(crate) fn first<T, F>(&self, probe: F) -> Option<T>
    where
        T: Send,
        F: Fn(&[usize]) -> Option<T> + Sync + Send,
    {
        match self {
            TupleSource::All { n, k } => {
                let n = *n;
                let k = *k as usize;
                if k == 0 || n == 0 {
                    return None;
                }
                // the leading coordinate is split across workers
                first_index(n, |a| {
                    let mut t = vec![0usize; k];
                    t[0] = a;
                    loop {
                        if let Some(found) = probe(&t) {
                            return Some(found);
                        }
                        let mut pos = k - 1;
                        loop {
                            if pos == 0 {
                                return None;
                            }
                            t[pos] += 1;
                            if t[pos] < n {
                                break;
                            }
                            t[pos] = 0;
                            pos -= 1;
                        }
                    }
                })
            }
            TupleSource::Listed(list) => first_of(list, |t| probe(t)),
        }
    }
}
