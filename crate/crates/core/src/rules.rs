//! Correction rules and their statistics: hit sets, truly/falsely changed
//! sets, support, confidence and the optimized correction amount.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::data::{predicted_label, Dataset, Outcome};
use crate::error::{Error, Result};
use crate::itemset::Itemset;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    /// `δ > 0`: fixes false negatives, may break true negatives.
    #[serde(rename = "+")]
    Positive,
    /// `δ < 0`: fixes false positives, may break true positives.
    #[serde(rename = "-")]
    Negative,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Positive, Direction::Negative];

    pub fn of<T: Scalar>(delta: T) -> Option<Direction> {
        if delta > T::zero() {
            Some(Direction::Positive)
        } else if delta < T::zero() {
            Some(Direction::Negative)
        } else {
            None
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Direction::Positive => "+",
            Direction::Negative => "-",
        }
    }

    /// Outcome whose instances a rule of this direction can fix.
    pub fn false_outcome(self) -> Outcome {
        match self {
            Direction::Positive => Outcome::FalseNegative,
            Direction::Negative => Outcome::FalsePositive,
        }
    }

    /// Outcome whose instances a rule of this direction can break.
    pub fn true_outcome(self) -> Outcome {
        match self {
            Direction::Positive => Outcome::TrueNegative,
            Direction::Negative => Outcome::TruePositive,
        }
    }

    /// Whether `s + δ` lands on the other side of the decision boundary.
    #[inline]
    pub fn flips<T: Scalar>(self, score: T, delta: T) -> bool {
        match self {
            Direction::Positive => score + delta > T::zero(),
            Direction::Negative => score + delta <= T::zero(),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Positive => "positive",
            Direction::Negative => "negative",
        })
    }
}

/// Support/confidence of a rule plus the raw changed-set sizes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RuleStats<T> {
    pub support: T,
    pub confidence: T,
    pub n_true_changed: usize,
    pub n_false_changed: usize,
}

impl<T: Scalar> RuleStats<T> {
    pub fn zero() -> Self {
        RuleStats {
            support: T::zero(),
            confidence: T::zero(),
            n_true_changed: 0,
            n_false_changed: 0,
        }
    }

    /// `supp = |Cᵀ| / nᶠ`, `conf = |Cᵀ| / (|Cᵀ| + |Cᶠ|)` (0 when undefined).
    pub fn from_counts(n_true_changed: usize, n_false_changed: usize, n_false: usize) -> Self {
        RuleStats {
            support: T::ratio(n_true_changed, n_false),
            confidence: T::ratio(n_true_changed, n_true_changed + n_false_changed),
            n_true_changed,
            n_false_changed,
        }
    }
}

/// `X → δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionRule<T> {
    pub itemset: Itemset,
    pub delta: T,
    pub direction: Direction,
    /// Statistics on the dataset the rule was mined or last evaluated on.
    pub stats: RuleStats<T>,
}

impl<T: Scalar> CorrectionRule<T> {
    /// Builds a rule and computes its statistics on `dataset`.
    pub fn evaluate(itemset: Itemset, delta: T, dataset: &Dataset<T>) -> Result<Self> {
        let direction = Direction::of(delta)
            .ok_or_else(|| Error::InvalidArgument("correction amount must be non-zero".into()))?;
        let stats = support_confidence(&itemset, delta, dataset).unwrap_or_else(|_| RuleStats::zero());
        Ok(CorrectionRule {
            itemset,
            delta,
            direction,
            stats,
        })
    }

    /// Applies to an instance iff `X ⊆ t`.
    pub fn matches(&self, items: &crate::itemset::ItemBits) -> bool {
        items.contains_all(&self.itemset)
    }
}

/// `D(X)`.
pub fn hits<T: Scalar>(itemset: &Itemset, dataset: &Dataset<T>) -> Vec<usize> {
    dataset.hits(itemset)
}

/// Truly changed (`Cᵀ`) and falsely changed (`Cᶠ`) instance indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChangedSets {
    pub truly: Vec<usize>,
    pub falsely: Vec<usize>,
}

pub fn changed_sets<T: Scalar>(itemset: &Itemset, delta: T, dataset: &Dataset<T>) -> Result<ChangedSets> {
    if delta == T::zero() {
        return Err(Error::InvalidArgument(
            "changed sets are undefined for a zero correction amount".into(),
        ));
    }
    let mut out = ChangedSets::default();
    for (i, inst) in dataset.instances().iter().enumerate() {
        if !inst.items.contains_all(itemset) {
            continue;
        }
        let correct_before = inst.outcome().is_correct();
        let correct_after = predicted_label(inst.score + delta) == inst.label;
        match (correct_before, correct_after) {
            (false, true) => out.truly.push(i),
            (true, false) => out.falsely.push(i),
            _ => {}
        }
    }
    Ok(out)
}

/// Support and confidence of `X → δ` on `dataset`. A zero `δ` yields zero
/// statistics; a direction with no misclassified instances is reported as
/// [`Error::DirectionUnavailable`].
pub fn support_confidence<T: Scalar>(
    itemset: &Itemset,
    delta: T,
    dataset: &Dataset<T>,
) -> Result<RuleStats<T>> {
    let Some(direction) = Direction::of(delta) else {
        return Ok(RuleStats::zero());
    };
    let n_false = dataset.partitions().get(direction.false_outcome()).len();
    if n_false == 0 {
        return Err(Error::DirectionUnavailable(direction));
    }
    let c = changed_sets(itemset, delta, dataset)?;
    Ok(RuleStats::from_counts(c.truly.len(), c.falsely.len(), n_false))
}

/// Candidate correction amounts `-(pᵢ + pᵢ₊₁) / 2` for the distinct
/// scores `p₁ < … < p_k` padded with `p₀ = -1`, `p_{k+1} = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaCandidates<T> {
    points: Vec<T>,
    deltas: Vec<T>,
}

impl<T: Scalar> DeltaCandidates<T> {
    pub fn from_scores(scores: impl IntoIterator<Item = T>) -> Self {
        let mut points: Vec<T> = scores.into_iter().collect();
        points.sort_by(|a, b| a.partial_cmp(b).expect("scores are not NaN"));
        points.dedup();
        points.insert(0, -T::one());
        points.push(T::one());
        let two = T::lit(2.0);
        let deltas = points.windows(2).map(|w| -(w[0] + w[1]) / two).collect();
        DeltaCandidates { points, deltas }
    }

    pub fn for_dataset(dataset: &Dataset<T>) -> Self {
        Self::from_scores(dataset.instances().iter().map(|i| i.score))
    }

    /// `p₀ … p_{k+1}`.
    pub fn points(&self) -> &[T] {
        &self.points
    }

    /// Candidates, strictly decreasing.
    pub fn deltas(&self) -> &[T] {
        &self.deltas
    }

    /// Index of `score` in [`points`](Self::points); `None` for scores not
    /// seen at construction.
    pub fn rank_of(&self, score: T) -> Option<u32> {
        self.points
            .binary_search_by(|p| p.partial_cmp(&score).expect("scores are not NaN"))
            .ok()
            .map(|r| r as u32)
    }

    /// Candidates of one sign, smallest magnitude first.
    pub fn of_direction(&self, direction: Direction) -> Vec<T> {
        let mut out: Vec<T> = self
            .deltas
            .iter()
            .copied()
            .filter(|&d| Direction::of(d) == Some(direction))
            .collect();
        if direction == Direction::Positive {
            out.reverse();
        }
        out
    }

    fn smallest_magnitude(&self, direction: Direction) -> Option<T> {
        let d = &self.deltas;
        match direction {
            Direction::Positive => {
                let n_pos = d.partition_point(|&x| x > T::zero());
                (n_pos > 0).then(|| d[n_pos - 1])
            }
            Direction::Negative => {
                let n_nonneg = d.partition_point(|&x| x >= T::zero());
                (n_nonneg < d.len()).then(|| d[n_nonneg])
            }
        }
    }
}

/// Result of optimizing `δ` for one itemset and direction. `delta == 0` is
/// the "no feasible amount" sentinel, with zero statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaChoice<T> {
    pub delta: T,
    pub stats: RuleStats<T>,
}

impl<T: Scalar> DeltaChoice<T> {
    pub fn none() -> Self {
        DeltaChoice {
            delta: T::zero(),
            stats: RuleStats::zero(),
        }
    }

    pub fn is_none(&self) -> bool {
        self.delta == T::zero()
    }
}

/// Score and its rank among [`DeltaCandidates::points`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreKey<T> {
    pub score: T,
    pub rank: u32,
}

/// Hit instances of one side (false or true), as ids into `keys`, ordered
/// by ascending score.
#[derive(Debug, Clone, Copy)]
pub struct SortedHits<'a, T> {
    pub ids: &'a [u32],
    pub keys: &'a [ScoreKey<T>],
}

impl<T: Scalar> SortedHits<'_, T> {
    #[inline]
    fn key(&self, i: usize) -> ScoreKey<T> {
        self.keys[self.ids[i] as usize]
    }
}

/// Linear sweep over the hit instances of one itemset.
///
/// Only candidates that are the smallest-magnitude amount flipping a given
/// prefix of hits (ordered by closeness to the boundary) can win under the
/// tie-breaking rule, so one candidate per distinct hit score is evaluated,
/// plus the smallest-magnitude candidate of the direction. Counters advance
/// monotonically, so the cost is linear in the number of hits.
///
/// Winner: maximum confidence among candidates with `support >= theta`;
/// ties by larger support, then smaller `|δ|`.
pub fn optimize_sorted<T: Scalar>(
    direction: Direction,
    candidates: &DeltaCandidates<T>,
    n_false: usize,
    theta: T,
    false_hits: SortedHits<'_, T>,
    true_hits: SortedHits<'_, T>,
) -> DeltaChoice<T> {
    let mut best: Option<DeltaChoice<T>> = None;
    let mut consider = |delta: T, ct: usize, cf: usize| {
        let stats = RuleStats::<T>::from_counts(ct, cf, n_false);
        if stats.support < theta {
            return;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                stats.confidence > b.stats.confidence
                    || (stats.confidence == b.stats.confidence && stats.support > b.stats.support)
            }
        };
        if better {
            best = Some(DeltaChoice { delta, stats });
        }
    };

    let nf = false_hits.ids.len();
    let nt = true_hits.ids.len();
    match direction {
        Direction::Positive => {
            // flips happen from the highest score down
            let (mut fi, mut ti) = (nf, nt);
            let (mut ct, mut cf) = (0usize, 0usize);
            let mut eval = |delta: T, consider: &mut dyn FnMut(T, usize, usize)| {
                while fi > 0 && direction.flips(false_hits.key(fi - 1).score, delta) {
                    fi -= 1;
                    ct += 1;
                }
                while ti > 0 && direction.flips(true_hits.key(ti - 1).score, delta) {
                    ti -= 1;
                    cf += 1;
                }
                consider(delta, ct, cf);
            };
            if let Some(d) = candidates.smallest_magnitude(direction) {
                eval(d, &mut consider);
            }
            let (mut a, mut b) = (nf, nt);
            loop {
                let ra = (a > 0).then(|| false_hits.key(a - 1).rank);
                let rb = (b > 0).then(|| true_hits.key(b - 1).rank);
                let r = match (ra, rb) {
                    (None, None) => break,
                    (Some(x), None) | (None, Some(x)) => x,
                    (Some(x), Some(y)) => x.max(y),
                };
                while a > 0 && false_hits.key(a - 1).rank == r {
                    a -= 1;
                }
                while b > 0 && true_hits.key(b - 1).rank == r {
                    b -= 1;
                }
                if r == 0 {
                    continue;
                }
                let delta = candidates.deltas[r as usize - 1];
                if delta > T::zero() {
                    eval(delta, &mut consider);
                }
            }
        }
        Direction::Negative => {
            // flips happen from the lowest score up
            let (mut fi, mut ti) = (0usize, 0usize);
            let (mut ct, mut cf) = (0usize, 0usize);
            let mut eval = |delta: T, consider: &mut dyn FnMut(T, usize, usize)| {
                while fi < nf && direction.flips(false_hits.key(fi).score, delta) {
                    fi += 1;
                    ct += 1;
                }
                while ti < nt && direction.flips(true_hits.key(ti).score, delta) {
                    ti += 1;
                    cf += 1;
                }
                consider(delta, ct, cf);
            };
            if let Some(d) = candidates.smallest_magnitude(direction) {
                eval(d, &mut consider);
            }
            let (mut a, mut b) = (0usize, 0usize);
            loop {
                let ra = (a < nf).then(|| false_hits.key(a).rank);
                let rb = (b < nt).then(|| true_hits.key(b).rank);
                let r = match (ra, rb) {
                    (None, None) => break,
                    (Some(x), None) | (None, Some(x)) => x,
                    (Some(x), Some(y)) => x.min(y),
                };
                while a < nf && false_hits.key(a).rank == r {
                    a += 1;
                }
                while b < nt && true_hits.key(b).rank == r {
                    b += 1;
                }
                let Some(&delta) = candidates.deltas.get(r as usize) else {
                    continue;
                };
                if delta < T::zero() {
                    eval(delta, &mut consider);
                }
            }
        }
    }
    best.unwrap_or_else(DeltaChoice::none)
}

/// `δ*(X)` for one direction on `dataset`, using precomputed candidates.
pub fn optimize_delta<T: Scalar>(
    itemset: &Itemset,
    direction: Direction,
    dataset: &Dataset<T>,
    candidates: &DeltaCandidates<T>,
    theta: T,
) -> DeltaChoice<T> {
    let parts = dataset.partitions();
    let n_false = parts.get(direction.false_outcome()).len();
    if n_false == 0 {
        return DeltaChoice::none();
    }
    let keys: Vec<ScoreKey<T>> = dataset
        .instances()
        .iter()
        .map(|inst| ScoreKey {
            score: inst.score,
            rank: candidates.rank_of(inst.score).expect("candidates built from this dataset"),
        })
        .collect();
    let side = |outcome: Outcome| -> Vec<u32> {
        let mut ids: Vec<u32> = parts
            .get(outcome)
            .iter()
            .copied()
            .filter(|&i| dataset.instances()[i].items.contains_all(itemset))
            .map(|i| i as u32)
            .collect();
        ids.sort_by_key(|&i| keys[i as usize].rank);
        ids
    };
    let false_ids = side(direction.false_outcome());
    let true_ids = side(direction.true_outcome());
    optimize_sorted(
        direction,
        candidates,
        n_false,
        theta,
        SortedHits {
            ids: &false_ids,
            keys: &keys,
        },
        SortedHits {
            ids: &true_ids,
            keys: &keys,
        },
    )
}
