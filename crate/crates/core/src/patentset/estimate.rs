use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::PatentSet;
use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionEstimate {
    pub sample_size: usize,
    pub relevant_count: usize,
    pub point: f64,
    pub ci95: (f64, f64),
    pub sampled_ids: Vec<String>,
    pub rng_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecallEstimate {
    pub seed_list_size: usize,
    pub seeds_retrieved: usize,
    pub point: f64,
}

/// Wilson score interval for `successes` out of `n` trials.
pub fn wilson_interval(successes: usize, n: usize, z: f64) -> (f64, f64) {
    assert!(n > 0 && successes <= n);
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Samples `k` documents uniformly without replacement and reports the share
/// judged relevant, with a Wilson 95% interval.
pub fn estimate_precision(
    set: &PatentSet,
    k: usize,
    labels: &BTreeMap<String, bool>,
    rng_seed: u64,
) -> Result<PrecisionEstimate> {
    if k == 0 {
        return Err(Error::EmptySample);
    }
    if k > set.len() {
        return Err(Error::SampleTooLarge { k, size: set.len() });
    }
    let ids: Vec<&String> = set.doc_ids.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut picked: Vec<usize> = sample(&mut rng, ids.len(), k).into_vec();
    picked.sort_unstable();
    let sampled_ids: Vec<String> = picked.into_iter().map(|i| ids[i].clone()).collect();

    let mut relevant = 0;
    for id in &sampled_ids {
        match labels.get(id) {
            Some(true) => relevant += 1,
            Some(false) => {}
            None => return Err(Error::MissingLabel(id.clone())),
        }
    }
    Ok(PrecisionEstimate {
        sample_size: k,
        relevant_count: relevant,
        point: relevant as f64 / k as f64,
        ci95: wilson_interval(relevant, k, Z_95),
        sampled_ids,
        rng_seed,
    })
}

/// Share of known-relevant seed documents that the set retrieved.
pub fn estimate_recall(set: &PatentSet, seed_ids: &[String], corpus: &Corpus) -> Result<RecallEstimate> {
    if seed_ids.is_empty() {
        return Err(Error::EmptySeeds);
    }
    if let Some(unknown) = seed_ids.iter().find(|id| !corpus.contains(id)) {
        return Err(Error::UnknownSeed(unknown.clone()));
    }
    let retrieved = seed_ids.iter().filter(|id| set.contains(id)).count();
    Ok(RecallEstimate {
        seed_list_size: seed_ids.len(),
        seeds_retrieved: retrieved,
        point: retrieved as f64 / seed_ids.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    fn set_of(ids: &[&str]) -> PatentSet {
        PatentSet {
            query_name: "q".into(),
            doc_ids: ids.iter().map(|s| s.to_string()).collect(),
            family_ids: BTreeSet::new(),
            created_at: None,
            precision: None,
            recall: None,
        }
    }

    #[test]
    fn wilson_18_of_20() {
        // independent high-precision evaluation (mpmath, 40 digits)
        let (lo, hi) = wilson_interval(18, 20, Z_95);
        assert!((lo - 0.698_966_354_771_512_7).abs() < 1e-12);
        assert!((hi - 0.972_133_518_786_231_8).abs() < 1e-12);
    }

    #[test]
    fn wilson_edges_stay_in_unit_interval() {
        let (lo, hi) = wilson_interval(20, 20, Z_95);
        assert!((lo - 0.838_874_841_947_180_6).abs() < 1e-12);
        assert_eq!(hi, 1.0);
        let (lo, hi) = wilson_interval(0, 5, Z_95);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.434_482_464_783_174_8).abs() < 1e-12);
    }

    #[test]
    fn full_sample_all_relevant() {
        let set = set_of(&["a", "b", "c"]);
        let labels = ["a", "b", "c"].iter().map(|s| (s.to_string(), true)).collect();
        let est = estimate_precision(&set, 3, &labels, 7).unwrap();
        assert_eq!(est.point, 1.0);
        assert!(est.ci95.0 <= est.point && est.point <= est.ci95.1);
    }

    #[test]
    fn same_seed_same_sample() {
        let ids: Vec<String> = (0..30).map(|i| format!("D{i:02}")).collect();
        let set = set_of(&ids.iter().map(String::as_str).collect::<Vec<_>>());
        let labels = ids.iter().enumerate().map(|(i, s)| (s.clone(), i % 3 != 0)).collect();
        let a = estimate_precision(&set, 10, &labels, 42).unwrap();
        let b = estimate_precision(&set, 10, &labels, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sampled_ids.len(), 10);
    }

    #[test]
    fn missing_label_and_bad_k() {
        let set = set_of(&["a", "b"]);
        let labels = BTreeMap::from([("a".to_string(), true)]);
        assert!(matches!(
            estimate_precision(&set, 2, &labels, 1),
            Err(Error::MissingLabel(id)) if id == "b"
        ));
        assert!(matches!(
            estimate_precision(&set, 3, &labels, 1),
            Err(Error::SampleTooLarge { .. })
        ));
    }
}
