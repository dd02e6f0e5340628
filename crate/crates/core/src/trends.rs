//! Per-technology filing trends, maturity classes and share tables.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{contains_sequence, SegmentedCorpus};
use crate::error::{Error, Result};
use crate::patentset::PatentSet;
use crate::techner::TechnologyCluster;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Maturity {
    Emerging,
    Growing,
    Mature,
    Obsolete,
    LowSupport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Each family counts once, at its earliest filing year.
    #[default]
    Families,
    /// Each matching document counts at its own filing year.
    Applications,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaturityParams {
    pub window: u32,
    pub min_support: u64,
    pub decline_ratio: f64,
}

impl Default for MaturityParams {
    fn default() -> Self {
        Self {
            window: 5,
            min_support: 20,
            decline_ratio: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendSeries {
    pub cluster_id: String,
    pub label: String,
    pub counts: BTreeMap<i32, u64>,
    pub total: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Maturity>,
    pub share: f64,
}

impl TrendSeries {
    pub fn from_counts(cluster_id: &str, counts: BTreeMap<i32, u64>) -> Self {
        Self {
            cluster_id: cluster_id.to_string(),
            label: cluster_id.replace('_', " "),
            total: counts.values().sum(),
            counts,
            classification: None,
            share: 0.0,
        }
    }
}

/// Documents of the set whose sentences contain a member lemma of the
/// cluster, in set order.
pub fn documents_mentioning<'s>(
    cluster: &TechnologyCluster,
    set: &'s PatentSet,
    segmented: &SegmentedCorpus<'_>,
) -> Vec<&'s str> {
    let members: Vec<Vec<&str>> = cluster
        .member_lemmas
        .iter()
        .map(|m| m.split(' ').collect())
        .collect();
    set.doc_ids
        .iter()
        .filter(|id| {
            segmented.sentences_of(id).iter().any(|s| {
                let seq = s.lemma_sequence();
                members.iter().any(|m| contains_sequence(&seq, m))
            })
        })
        .map(String::as_str)
        .collect()
}

pub fn compute_trend(
    cluster: &TechnologyCluster,
    set: &PatentSet,
    segmented: &SegmentedCorpus<'_>,
    mode: CountMode,
) -> TrendSeries {
    let corpus = segmented.corpus();
    let docs = documents_mentioning(cluster, set, segmented);
    let families: BTreeSet<&str> = docs.iter().filter_map(|d| corpus.family_of(d)).collect();
    let mut counts: BTreeMap<i32, u64> = BTreeMap::new();
    match mode {
        CountMode::Families => {
            let years = corpus.family_years();
            for f in &families {
                *counts.entry(years[f]).or_default() += 1;
            }
        }
        CountMode::Applications => {
            for d in &docs {
                if let Some(doc) = corpus.get(d) {
                    *counts.entry(doc.filing_year).or_default() += 1;
                }
            }
        }
    }
    let mut series = TrendSeries::from_counts(&cluster.cluster_id, counts);
    series.label = cluster.label.clone();
    series.share = if set.family_ids.is_empty() {
        0.0
    } else {
        families.len() as f64 / set.family_ids.len() as f64
    };
    series
}

/// Least-squares slope of the counts over the `window` years ending at
/// `reference_year`, missing years counted as zero.
pub fn window_slope(counts: &BTreeMap<i32, u64>, reference_year: i32, window: u32) -> f64 {
    let w = window as i32;
    if w < 2 {
        return 0.0;
    }
    let mean_x = (w - 1) as f64 / 2.0;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..w {
        let y = counts.get(&(reference_year - w + 1 + i)).copied().unwrap_or(0) as f64;
        let dx = i as f64 - mean_x;
        num += dx * y;
        den += dx * dx;
    }
    num / den
}

/// Rules, first match wins:
/// 1. total below `min_support` → low support;
/// 2. first filing inside the window and positive window slope → emerging;
/// 3. positive window slope → growing;
/// 4. peak before the window and window mean below `decline_ratio` × peak →
///    obsolete;
/// 5. otherwise mature.
pub fn classify_maturity(series: &TrendSeries, params: &MaturityParams, reference_year: i32) -> Maturity {
    let total: u64 = series.counts.values().sum();
    if series.counts.is_empty() || total < params.min_support {
        return Maturity::LowSupport;
    }
    let w = params.window.max(1) as i32;
    let window_start = reference_year - w + 1;
    let slope = window_slope(&series.counts, reference_year, params.window);
    let first_year = series
        .counts
        .iter()
        .find(|(_, &c)| c > 0)
        .map(|(&y, _)| y)
        .unwrap_or(reference_year);
    if slope > 0.0 {
        return if first_year >= window_start {
            Maturity::Emerging
        } else {
            Maturity::Growing
        };
    }
    let peak = series.counts.values().copied().max().unwrap_or(0);
    let peak_year = series
        .counts
        .iter()
        .filter(|(_, &c)| c == peak)
        .map(|(&y, _)| y)
        .max()
        .unwrap_or(reference_year);
    let window_mean = (window_start..=reference_year)
        .map(|y| series.counts.get(&y).copied().unwrap_or(0) as f64)
        .sum::<f64>()
        / w as f64;
    if peak_year < window_start && window_mean < params.decline_ratio * peak as f64 {
        return Maturity::Obsolete;
    }
    Maturity::Mature
}

/// Latest filing year among the set's documents.
pub fn reference_year(set: &PatentSet, segmented: &SegmentedCorpus<'_>) -> Option<i32> {
    let corpus = segmented.corpus();
    set.doc_ids
        .iter()
        .filter_map(|d| corpus.get(d))
        .map(|d| d.filing_year)
        .max()
}

/// Trends for every active cluster, classified against the set's latest
/// filing year.
pub fn compute_trends(
    clusters: &[TechnologyCluster],
    set: &PatentSet,
    segmented: &SegmentedCorpus<'_>,
    mode: CountMode,
    params: &MaturityParams,
) -> Vec<TrendSeries> {
    let reference = reference_year(set, segmented).unwrap_or(0);
    let active: Vec<&TechnologyCluster> = clusters.iter().filter(|c| c.is_active()).collect();
    active
        .par_iter()
        .map(|c| {
            let mut s = compute_trend(c, set, segmented, mode);
            s.classification = Some(classify_maturity(&s, params, reference));
            s
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShareRow {
    pub rank: usize,
    pub cluster_id: String,
    pub label: String,
    pub families: usize,
    pub share: f64,
}

/// Share of the set's families mentioning each active cluster, largest
/// first. Shares need not sum to one.
pub fn technology_shares(
    clusters: &[TechnologyCluster],
    set: &PatentSet,
    segmented: &SegmentedCorpus<'_>,
) -> Result<Vec<ShareRow>> {
    if set.family_ids.is_empty() {
        return Err(Error::EmptyPatentSet);
    }
    let corpus = segmented.corpus();
    let total = set.family_ids.len() as f64;
    let mut rows: Vec<ShareRow> = clusters
        .iter()
        .filter(|c| c.is_active())
        .map(|c| {
            let families: BTreeSet<&str> = documents_mentioning(c, set, segmented)
                .into_iter()
                .filter_map(|d| corpus.family_of(d))
                .collect();
            ShareRow {
                rank: 0,
                cluster_id: c.cluster_id.clone(),
                label: c.label.clone(),
                families: families.len(),
                share: families.len() as f64 / total,
            }
        })
        .collect();
    rows.sort_by(|a, b| b.share.total_cmp(&a.share).then_with(|| a.label.cmp(&b.label)));
    for (i, r) in rows.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    Ok(rows)
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("flushing to memory cannot fail");
    String::from_utf8(bytes).expect("csv is utf-8")
}

/// `cluster,year,count` rows.
pub fn trends_csv(series: &[TrendSeries]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["cluster", "year", "count"])?;
    for s in series {
        for (year, count) in &s.counts {
            w.write_record([s.cluster_id.as_str(), &year.to_string(), &count.to_string()])?;
        }
    }
    Ok(finish(w))
}

/// `rank,label,share` rows.
pub fn shares_csv(rows: &[ShareRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rank", "label", "share"])?;
    for r in rows {
        w.write_record([r.rank.to_string(), r.label.clone(), format!("{:.4}", r.share)])?;
    }
    Ok(finish(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(pairs: &[(i32, u64)]) -> TrendSeries {
        TrendSeries::from_counts("x", pairs.iter().copied().collect())
    }

    #[test]
    fn strictly_increasing_is_growing() {
        // 2015..=2022, total 40
        let s = series(&[(2015, 1), (2016, 2), (2017, 3), (2018, 4), (2019, 5), (2020, 6), (2021, 7), (2022, 12)]);
        assert_eq!(s.total, 40);
        assert_eq!(classify_maturity(&s, &MaturityParams::default(), 2022), Maturity::Growing);
    }

    #[test]
    fn recent_start_is_emerging() {
        let s = series(&[(2019, 2), (2020, 5), (2021, 7), (2022, 9)]);
        assert_eq!(classify_maturity(&s, &MaturityParams::default(), 2022), Maturity::Emerging);
    }

    #[test]
    fn sparse_is_low_support() {
        let s = series(&[(2018, 2), (2020, 3)]);
        assert_eq!(classify_maturity(&s, &MaturityParams::default(), 2022), Maturity::LowSupport);
        assert_eq!(
            classify_maturity(&series(&[]), &MaturityParams::default(), 2022),
            Maturity::LowSupport
        );
    }

    #[test]
    fn old_peak_and_collapse_is_obsolete() {
        let s = series(&[(2008, 10), (2009, 14), (2010, 9), (2011, 4), (2018, 1), (2019, 1), (2020, 0), (2021, 0), (2022, 0)]);
        assert_eq!(classify_maturity(&s, &MaturityParams::default(), 2022), Maturity::Obsolete);
    }

    #[test]
    fn peak_then_plateau_is_mature() {
        let s = series(&[
            (2008, 2), (2009, 4), (2010, 7), (2011, 9), (2012, 12), (2013, 10), (2014, 9),
            (2015, 8), (2016, 7), (2017, 7), (2018, 7), (2019, 6), (2020, 6), (2021, 6), (2022, 6),
        ]);
        assert_eq!(classify_maturity(&s, &MaturityParams::default(), 2022), Maturity::Mature);
    }

    #[test]
    fn leading_empty_years_do_not_matter() {
        let s = series(&[(2019, 2), (2020, 5), (2021, 7), (2022, 9)]);
        let mut padded = s.clone();
        padded.counts.extend([(2010, 0), (2011, 0)]);
        let p = MaturityParams { min_support: 1, ..Default::default() };
        assert_eq!(classify_maturity(&s, &p, 2022), classify_maturity(&padded, &p, 2022));
    }

    #[test]
    fn slope_is_exact_for_flat_windows() {
        let counts: BTreeMap<i32, u64> = [(2018, 7), (2019, 6), (2020, 6), (2021, 6), (2022, 7)].into();
        assert_eq!(window_slope(&counts, 2022, 5), 0.0);
        let counts: BTreeMap<i32, u64> = [(2021, 1), (2022, 2)].into();
        assert_eq!(window_slope(&counts, 2022, 2), 1.0);
    }

    #[test]
    fn shares_csv_format() {
        let rows = vec![ShareRow { rank: 1, cluster_id: "a".into(), label: "a".into(), families: 4, share: 0.4 }];
        assert_eq!(shares_csv(&rows).unwrap(), "rank,label,share\n1,a,0.4000\n");
    }
}
