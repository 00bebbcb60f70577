use rand::seq::{IteratorRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::rules::CorrectionRule;
use crate::scalar::Scalar;

/// Draws `n` indices from `pool`, stratified by class: each class gets its
/// proportional share, with leftover slots going to the largest fractional
/// remainders. Returns `(taken, rest)`, both ascending.
pub fn stratified_take(pool: &[usize], labels: &[Label], n: usize, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
    let n = n.min(pool.len());
    let mut groups: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for &i in pool {
        groups[usize::from(labels[i] == Label::Positive)].push(i);
    }
    let total = pool.len().max(1);
    let mut quota = [0usize; 2];
    let mut frac = [(0usize, 0usize); 2];
    for c in 0..2 {
        let exact = n * groups[c].len();
        quota[c] = exact / total;
        frac[c] = (exact % total, c);
    }
    let mut left = n - quota[0] - quota[1];
    frac.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, c) in &frac {
        if left > 0 && quota[c] < groups[c].len() {
            quota[c] += 1;
            left -= 1;
        }
    }
    let mut taken = Vec::with_capacity(n);
    let mut rest = Vec::with_capacity(pool.len() - n);
    for c in 0..2 {
        let g = &mut groups[c];
        g.shuffle(rng);
        taken.extend_from_slice(&g[..quota[c]]);
        rest.extend_from_slice(&g[quota[c]..]);
    }
    taken.sort_unstable();
    rest.sort_unstable();
    (taken, rest)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LackSplitSpec {
    pub trn: usize,
    pub mng: usize,
    /// Share of the instances left after TRN and MNG that go to AUG.
    pub aug_frac: f64,
}

impl Default for LackSplitSpec {
    fn default() -> Self {
        LackSplitSpec {
            trn: 100,
            mng: 500,
            aug_frac: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LackSplits {
    pub trn: Vec<usize>,
    pub mng: Vec<usize>,
    pub aug: Vec<usize>,
    pub tst: Vec<usize>,
}

/// Stratified TRN/MNG/AUG/TST split for the data-lacking setting.
pub fn gen_lack_splits(labels: &[Label], spec: &LackSplitSpec, seed: u64) -> Result<LackSplits> {
    if !(0.0..=1.0).contains(&spec.aug_frac) {
        return Err(Error::InvalidArgument("aug_frac must lie in [0, 1]".into()));
    }
    if labels.len() <= spec.trn + spec.mng {
        return Err(Error::InvalidArgument(format!(
            "{} instances cannot hold TRN ({}) + MNG ({}) plus a remainder",
            labels.len(),
            spec.trn,
            spec.mng
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<usize> = (0..labels.len()).collect();
    let (trn, rest) = stratified_take(&all, labels, spec.trn, &mut rng);
    let (mng, rest) = stratified_take(&rest, labels, spec.mng, &mut rng);
    let n_aug = (rest.len() as f64 * spec.aug_frac).round() as usize;
    let (aug, tst) = stratified_take(&rest, labels, n_aug, &mut rng);
    Ok(LackSplits { trn, mng, aug, tst })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuidedSampleConfig {
    pub n_rules: usize,
    pub per_rule: usize,
    pub total: usize,
}

impl Default for GuidedSampleConfig {
    fn default() -> Self {
        GuidedSampleConfig {
            n_rules: 10,
            per_rule: 50,
            total: 500,
        }
    }
}

/// Samples instances hit by randomly chosen rules, then tops up uniformly.
/// `rule_hits` are ascending index lists into a population of `n` instances.
pub fn rule_guided_sample_sets(rule_hits: &[Vec<usize>], n: usize, config: &GuidedSampleConfig, seed: u64) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot sample from an empty dataset".into()));
    }
    let total = config.total.min(n);
    if config.total > n {
        log::warn!("requested {} samples from {n} instances; taking all", config.total);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut taken = vec![false; n];
    let mut out = Vec::with_capacity(total);
    let picked = (0..rule_hits.len()).choose_multiple(&mut rng, config.n_rules.min(rule_hits.len()));
    for r in picked {
        if out.len() >= total {
            break;
        }
        let avail: Vec<usize> = rule_hits[r].iter().copied().filter(|&i| !taken[i]).collect();
        let k = config.per_rule.min(avail.len()).min(total - out.len());
        for &i in avail.choose_multiple(&mut rng, k) {
            taken[i] = true;
            out.push(i);
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
    out.extend(free.choose_multiple(&mut rng, total - out.len()).copied());
    out.sort_unstable();
    Ok(out)
}

/// [`rule_guided_sample_sets`] with hit sets computed on `aug`.
pub fn rule_guided_sample<T: Scalar>(
    rules: &[CorrectionRule<T>],
    aug: &Dataset<T>,
    config: &GuidedSampleConfig,
    seed: u64,
) -> Result<Vec<usize>> {
    let hits: Vec<Vec<usize>> = rules.iter().map(|r| aug.hits(&r.itemset)).collect();
    rule_guided_sample_sets(&hits, aug.len(), config, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize, n_pos: usize) -> Vec<Label> {
        (0..n)
            .map(|i| if i < n_pos { Label::Positive } else { Label::Negative })
            .collect()
    }

    #[test]
    fn lack_split_sizes_and_strata() {
        let y = labels(10_000, 2_400);
        let s = gen_lack_splits(&y, &LackSplitSpec::default(), 5).unwrap();
        assert_eq!((s.trn.len(), s.mng.len(), s.aug.len(), s.tst.len()), (100, 500, 4_700, 4_700));
        for part in [&s.trn, &s.mng, &s.aug, &s.tst] {
            let pos = part.iter().filter(|&&i| y[i] == Label::Positive).count() as f64;
            assert!((pos - 0.24 * part.len() as f64).abs() <= 1.0);
        }
        let mut all: Vec<usize> = [s.trn.clone(), s.mng.clone(), s.aug.clone(), s.tst.clone()].concat();
        all.sort_unstable();
        assert_eq!(all, (0..10_000).collect::<Vec<_>>());
        assert_eq!(s, gen_lack_splits(&y, &LackSplitSpec::default(), 5).unwrap());
        assert!(gen_lack_splits(&labels(600, 300), &LackSplitSpec::default(), 5).is_err());
    }

    #[test]
    fn guided_sampling() {
        let hits: Vec<Vec<usize>> = (0..10).map(|r| (r * 100..r * 100 + 60).collect()).collect();
        let s = rule_guided_sample_sets(&hits, 2_000, &GuidedSampleConfig::default(), 1).unwrap();
        assert_eq!(s.len(), 500);
        assert!(s.iter().all(|&i| i % 100 < 60 && i < 1_000));

        let s = rule_guided_sample_sets(&[], 2_000, &GuidedSampleConfig::default(), 1).unwrap();
        assert_eq!(s.len(), 500);

        let s = rule_guided_sample_sets(&[(0..10).collect()], 2_000, &GuidedSampleConfig::default(), 1).unwrap();
        assert_eq!(s.len(), 500);
        assert!((0..10).all(|i| s.contains(&i)));

        assert!(rule_guided_sample_sets(&[], 0, &GuidedSampleConfig::default(), 1).is_err());
    }
}
