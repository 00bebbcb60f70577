use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::itemset::Itemset;
use crate::scalar::Scalar;

/// A synthetic dataset whose only systematic error sits on the instances
/// hit by a known itemset.
#[derive(Debug, Clone)]
pub struct PlantedDataset<T> {
    pub dataset: Dataset<T>,
    pub planted: Itemset,
    /// Instances hit by the planted itemset.
    pub hits: Vec<usize>,
}

/// Items are independent fair coins and labels uniform. Instances hit by
/// `planted` get a score of the wrong sign with probability `flip_rate`;
/// all others with probability `noise`. Magnitudes are uniform on
/// `[0.01, 0.99]`.
pub fn plant_rule_dataset<T: Scalar>(
    n_items: usize,
    n_instances: usize,
    planted: &Itemset,
    flip_rate: f64,
    noise: f64,
    seed: u64,
) -> Result<PlantedDataset<T>> {
    if !(flip_rate > 0.0 && flip_rate <= 1.0) || !(0.0..=1.0).contains(&noise) {
        return Err(Error::InvalidArgument("flip_rate must lie in (0, 1] and noise in [0, 1]".into()));
    }
    if planted.is_empty() || planted.items().iter().any(|&x| x as usize >= n_items) {
        return Err(Error::InvalidArgument("planted itemset must be non-empty and within the item range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n_instances);
    let mut hits = Vec::new();
    for i in 0..n_instances {
        let items: Vec<u32> = (0..n_items as u32).filter(|_| rng.gen_bool(0.5)).collect();
        let label = if rng.gen_bool(0.5) { Label::Positive } else { Label::Negative };
        let hit = planted.items().iter().all(|x| items.binary_search(x).is_ok());
        let wrong = rng.gen_bool(if hit { flip_rate } else { noise });
        let magnitude = rng.gen_range(0.01..=0.99);
        let sign = if (label == Label::Positive) != wrong { 1.0 } else { -1.0 };
        if hit {
            hits.push(i);
        }
        rows.push((items, T::lit(sign * magnitude), label));
    }
    if hits.is_empty() {
        return Err(Error::InvalidArgument("planted itemset hits no instance".into()));
    }
    Ok(PlantedDataset {
        dataset: Dataset::from_triples(n_items, rows),
        planted: planted.clone(),
        hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_flip_no_noise() {
        let p = plant_rule_dataset::<f64>(6, 400, &Itemset::new(vec![1, 3]), 1.0, 0.0, 7).unwrap();
        for (i, inst) in p.dataset.instances().iter().enumerate() {
            assert_eq!(inst.outcome().is_correct(), p.hits.binary_search(&i).is_err());
        }
        let again = plant_rule_dataset::<f64>(6, 400, &Itemset::new(vec![1, 3]), 1.0, 0.0, 7).unwrap();
        assert_eq!(p.dataset, again.dataset);
    }

    #[test]
    fn bad_arguments() {
        let x = Itemset::new(vec![0]);
        assert!(plant_rule_dataset::<f64>(3, 10, &x, 0.0, 0.0, 1).is_err());
        assert!(plant_rule_dataset::<f64>(3, 0, &x, 1.0, 0.0, 1).is_err());
        assert!(plant_rule_dataset::<f64>(3, 10, &Itemset::new(vec![5]), 1.0, 0.0, 1).is_err());
    }
}
