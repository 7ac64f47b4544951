//! Enumeration and seeded sampling of star expressions, and bulk
//! verification over the resulting corpus.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::syntax::{Action, StarExpr};
use crate::verify::{verify, Property, VerifyReport};

pub const DEFAULT_MAX_SIZE: usize = 6;
pub const DEFAULT_RANDOM: usize = 500;
pub const DEFAULT_RANDOM_MAX_SIZE: usize = 12;
pub const DEFAULT_SEED: u64 = 20_240_601;

/// All expressions over `alphabet` with at most `max_size` nodes, by size and
/// then by the derived order on expressions.
pub fn enumerate_exprs(alphabet: &BTreeSet<Action>, max_size: usize) -> impl Iterator<Item = StarExpr> {
    let mut buckets: Vec<Vec<StarExpr>> = vec![Vec::new()];
    for n in 1..=max_size {
        let mut bucket = Vec::new();
        if n == 1 {
            bucket.push(StarExpr::Zero);
            bucket.push(StarExpr::One);
            bucket.extend(alphabet.iter().cloned().map(StarExpr::Act));
        } else {
            bucket.extend(buckets[n - 1].iter().cloned().map(StarExpr::star));
            for i in 1..n - 1 {
                for l in &buckets[i] {
                    for r in &buckets[n - 1 - i] {
                        bucket.push(StarExpr::sum(l.clone(), r.clone()));
                        bucket.push(StarExpr::prod(l.clone(), r.clone()));
                    }
                }
            }
        }
        bucket.sort();
        buckets.push(bucket);
    }
    buckets.into_iter().flatten()
}

/// Number of expressions with exactly `n` nodes over `k` actions, by the
/// recurrence on the top-level constructor.
pub fn count_exprs(k: usize, n: usize) -> u128 {
    counts(k, n)[n]
}

fn counts(k: usize, max: usize) -> Vec<u128> {
    let mut c = vec![0u128; max + 1];
    for n in 1..=max {
        c[n] =
            if n == 1 { k as u128 + 2 } else { c[n - 1] + 2 * (1..n - 1).map(|i| c[i] * c[n - 1 - i]).sum::<u128>() };
    }
    c
}

// The term of size `n` with index `rank` in the constructor-major order used
// by `counts`: leaves, then stars, then sums and products per split.
fn unrank(actions: &[Action], c: &[u128], n: usize, mut rank: u128) -> StarExpr {
    if n == 1 {
        return match rank {
            0 => StarExpr::Zero,
            1 => StarExpr::One,
            r => StarExpr::Act(actions[(r - 2) as usize].clone()),
        };
    }
    if rank < c[n - 1] {
        return StarExpr::star(unrank(actions, c, n - 1, rank));
    }
    rank -= c[n - 1];
    for i in 1..n - 1 {
        let block = c[i] * c[n - 1 - i];
        if rank < 2 * block {
            let (is_prod, r) = (rank >= block, rank % block);
            let l = unrank(actions, c, i, r / c[n - 1 - i]);
            let rt = unrank(actions, c, n - 1 - i, r % c[n - 1 - i]);
            return if is_prod { StarExpr::prod(l, rt) } else { StarExpr::sum(l, rt) };
        }
        rank -= 2 * block;
    }
    unreachable!("rank below the total count")
}

/// `count` expressions drawn by picking a size uniformly in `1..=max_size`
/// and then a term of that size uniformly.
pub fn random_exprs(alphabet: &BTreeSet<Action>, max_size: usize, count: usize, seed: u64) -> Vec<StarExpr> {
    let actions: Vec<Action> = alphabet.iter().cloned().collect();
    let c = counts(actions.len(), max_size);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_size);
            let rank = rng.gen_range(0..c[n]);
            unrank(&actions, &c, n, rank)
        })
        .collect()
}

/// Which expressions make up a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub alphabet: BTreeSet<Action>,
    pub max_size: usize,
    pub random: usize,
    pub random_max_size: usize,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            alphabet: ["a", "b"].into_iter().map(|a| Action::new(a).expect("valid action")).collect(),
            max_size: DEFAULT_MAX_SIZE,
            random: DEFAULT_RANDOM,
            random_max_size: DEFAULT_RANDOM_MAX_SIZE,
            seed: DEFAULT_SEED,
        }
    }
}

impl CorpusSpec {
    /// The exhaustive part followed by the random part.
    pub fn exprs(&self) -> Vec<StarExpr> {
        let mut out: Vec<_> = enumerate_exprs(&self.alphabet, self.max_size).collect();
        if self.random > 0 {
            out.extend(random_exprs(&self.alphabet, self.random_max_size, self.random, self.seed));
        }
        out
    }
}

/// The default corpus: exhaustive to size 6 over `{a, b}` plus 500 seeded
/// random terms to size 12.
pub fn default_corpus() -> Vec<StarExpr> {
    CorpusSpec::default().exprs()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Failing reports, in corpus order.
    pub failures: Vec<VerifyReport>,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Verifies every expression for every property in parallel; reports keep
/// corpus order, properties inner.
pub fn verify_all(exprs: &[StarExpr], properties: &[Property]) -> Result<Vec<VerifyReport>> {
    let nested: Vec<Vec<VerifyReport>> = exprs
        .par_iter()
        .map(|e| properties.iter().map(|&p| verify(e, p)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

pub fn summarize(reports: Vec<VerifyReport>) -> CorpusReport {
    let total = reports.len();
    let failures: Vec<_> = reports.into_iter().filter(|r| !r.passed).collect();
    CorpusReport { total, passed: total - failures.len(), failed: failures.len(), failures }
}
