//! k-modes clustering of rules by their hit vectors (Hamming distance),
//! run separately per direction. Each centroid is represented by its
//! nearest rule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rules::{CorrectionRule, Direction};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterConfig {
    /// Clusters per direction.
    pub k: usize,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            k: 50,
            max_iter: 100,
            seed: 0,
        }
    }
}

/// Which reference instances a rule's itemset hits, as a bitset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitVector {
    pub rule: usize,
    words: Vec<u64>,
    len: usize,
}

impl HitVector {
    fn zeros(rule: usize, len: usize) -> Self {
        HitVector {
            rule,
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn hamming(&self, other: &HitVector) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }
}

pub fn hit_vectors<T: Scalar>(rules: &[CorrectionRule<T>], reference: &Dataset<T>) -> Vec<HitVector> {
    rules
        .par_iter()
        .enumerate()
        .map(|(id, r)| {
            let mut v = HitVector::zeros(id, reference.len());
            for i in reference.hits(&r.itemset) {
                v.set(i);
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSummary {
    pub direction: Direction,
    /// Input rule ids of this direction.
    pub rules: Vec<usize>,
    /// Cluster of each rule in `rules`.
    pub assignment: Vec<usize>,
    /// Representative rule id per centroid (may repeat).
    pub nearest: Vec<usize>,
    /// Sum of distances to assigned centroids after each assignment step.
    pub objective: Vec<usize>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    /// Distinct representative rule ids, ascending.
    pub representatives: Vec<usize>,
    pub directions: Vec<DirectionSummary>,
}

impl Summary {
    pub fn select<T: Clone>(&self, rules: &[CorrectionRule<T>]) -> Vec<CorrectionRule<T>> {
        self.representatives.iter().map(|&i| rules[i].clone()).collect()
    }
}

/// Summarizes `rules` by up to `k` representatives per direction.
pub fn kmodes_summarize<T: Scalar>(
    rules: &[CorrectionRule<T>],
    reference: &Dataset<T>,
    config: &ClusterConfig,
) -> Result<Summary> {
    if config.k == 0 {
        return Err(Error::InvalidArgument("cluster count must be >= 1".into()));
    }
    if rules.is_empty() {
        return Err(Error::InvalidArgument("no rules to summarize".into()));
    }
    let vectors = hit_vectors(rules, reference);
    let directions: Vec<DirectionSummary> = Direction::BOTH
        .par_iter()
        .enumerate()
        .filter_map(|(d_index, &direction)| {
            let members: Vec<usize> = (0..rules.len()).filter(|&i| rules[i].direction == direction).collect();
            if members.is_empty() {
                return None;
            }
            let seed = config.seed.wrapping_add(d_index as u64);
            Some(cluster(direction, members, &vectors, config.k, config.max_iter, seed))
        })
        .collect();
    let mut representatives: Vec<usize> = directions.iter().flat_map(|d| d.nearest.iter().copied()).collect();
    representatives.sort_unstable();
    representatives.dedup();
    Ok(Summary {
        representatives,
        directions,
    })
}

fn argmin_by_key(n: usize, key: impl Fn(usize) -> usize) -> usize {
    // first minimum: ties resolve to the lowest index
    (0..n).min_by_key(|&i| (key(i), i)).expect("non-empty")
}

fn cluster(
    direction: Direction,
    members: Vec<usize>,
    vectors: &[HitVector],
    k: usize,
    max_iter: usize,
    seed: u64,
) -> DirectionSummary {
    let m = members.len();
    if m <= k {
        return DirectionSummary {
            direction,
            assignment: (0..m).collect(),
            nearest: members.clone(),
            rules: members,
            objective: vec![0],
            converged: true,
        };
    }
    let vec_of = |j: usize| &vectors[members[j]];

    // Farthest-point initialization from a seeded random start.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = vec![rng.gen_range(0..m)];
    let mut min_dist: Vec<usize> = (0..m).map(|j| vec_of(j).hamming(vec_of(chosen[0]))).collect();
    let mut is_chosen = vec![false; m];
    is_chosen[chosen[0]] = true;
    while chosen.len() < k {
        let next = (0..m)
            .filter(|&j| !is_chosen[j])
            .max_by_key(|&j| (min_dist[j], std::cmp::Reverse(j)))
            .expect("more members than clusters");
        is_chosen[next] = true;
        chosen.push(next);
        for j in 0..m {
            min_dist[j] = min_dist[j].min(vec_of(j).hamming(vec_of(next)));
        }
    }
    let mut centroids: Vec<HitVector> = chosen.iter().map(|&j| vec_of(j).clone()).collect();

    let mut assignment = vec![usize::MAX; m];
    let mut objective = Vec::new();
    let mut converged = false;
    for _ in 0..max_iter.max(1) {
        let next: Vec<(usize, usize)> = (0..m)
            .map(|j| {
                let c = argmin_by_key(k, |c| vec_of(j).hamming(&centroids[c]));
                (c, vec_of(j).hamming(&centroids[c]))
            })
            .collect();
        objective.push(next.iter().map(|&(_, d)| d).sum());
        let changed = next.iter().zip(&assignment).any(|(&(c, _), &old)| c != old);
        assignment = next.into_iter().map(|(c, _)| c).collect();
        if !changed {
            converged = true;
            break;
        }
        update_modes(&mut centroids, &assignment, |j| vec_of(j));
    }

    let nearest = centroids
        .iter()
        .map(|c| members[argmin_by_key(m, |j| vec_of(j).hamming(c))])
        .collect();
    DirectionSummary {
        direction,
        rules: members,
        assignment,
        nearest,
        objective,
        converged,
    }
}

/// Coordinate-wise majority (ties to 1). Empty clusters keep their centroid.
fn update_modes<'v>(centroids: &mut [HitVector], assignment: &[usize], vec_of: impl Fn(usize) -> &'v HitVector) {
    let len = centroids.first().map_or(0, |c| c.len);
    let mut ones = vec![vec![0u32; len]; centroids.len()];
    let mut sizes = vec![0u32; centroids.len()];
    for (j, &c) in assignment.iter().enumerate() {
        sizes[c] += 1;
        let v = vec_of(j);
        for (w, &word) in v.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                ones[c][w * 64 + b] += 1;
                bits &= bits - 1;
            }
        }
    }
    for (c, centroid) in centroids.iter_mut().enumerate() {
        if sizes[c] == 0 {
            continue;
        }
        let mut mode = HitVector::zeros(centroid.rule, len);
        for (i, &n) in ones[c].iter().enumerate() {
            if 2 * n >= sizes[c] {
                mode.set(i);
            }
        }
        *centroid = mode;
    }
}
