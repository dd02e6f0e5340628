use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{JobArchetype, MacroClass};
use crate::error::{Error, Result};
use crate::skillmap::{cosine, EmbeddingProvider};

/// Jaccard similarity; two empty sets are identical.
pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    inter as f64 / union as f64
}

pub enum Similarity<'p> {
    /// Jaccard over binary skill sets.
    SkillJaccard,
    /// Cosine between description embeddings; non-embeddable descriptions
    /// score 0 against everything else.
    Description(&'p dyn EmbeddingProvider),
}

/// Pairwise similarity of archetypes taken in the given order.
pub fn similarity_matrix(archetypes: &[&JobArchetype], metric: &Similarity<'_>) -> Result<Vec<Vec<f64>>> {
    let n = archetypes.len();
    let mut m = vec![vec![0.0; n]; n];
    match metric {
        Similarity::SkillJaccard => {
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = jaccard(&archetypes[i].binary_skills, &archetypes[j].binary_skills);
                }
            }
        }
        Similarity::Description(p) => {
            let vecs = archetypes
                .iter()
                .map(|a| p.embed(&a.description))
                .collect::<Result<Vec<_>>>()?;
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = if i == j {
                        1.0
                    } else if vecs[i].is_zero() || vecs[j].is_zero() {
                        0.0
                    } else {
                        cosine(&vecs[i], &vecs[j])?
                    };
                }
            }
        }
    }
    Ok(m)
}

/// Average-linkage agglomeration of `ids` (which must be sorted) down to
/// `k` clusters. Ties between candidate merges go to the lexicographically
/// smallest pair of member-id minima.
pub fn agglomerate(ids: &[String], sim: &[Vec<f64>], k: usize) -> Result<Vec<Vec<usize>>> {
    if k == 0 || ids.len() < k {
        return Err(Error::TooFewArchetypes { needed: k.max(1), found: ids.len() });
    }
    let mut clusters: Vec<Vec<usize>> = (0..ids.len()).map(|i| vec![i]).collect();
    while clusters.len() > k {
        let mut best: Option<(f64, (&str, &str), usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut total = 0.0;
                for &i in &clusters[a] {
                    for &j in &clusters[b] {
                        total += sim[i][j];
                    }
                }
                let avg = total / (clusters[a].len() * clusters[b].len()) as f64;
                let (ma, mb) = (ids[clusters[a][0]].as_str(), ids[clusters[b][0]].as_str());
                let key = if ma <= mb { (ma, mb) } else { (mb, ma) };
                let better = match &best {
                    None => true,
                    Some((s, k0, _, _)) => avg > *s || (avg == *s && key < *k0),
                };
                if better {
                    best = Some((avg, key, a, b));
                }
            }
        }
        let (_, _, a, b) = best.expect("at least two clusters");
        let merged = clusters.remove(b);
        clusters[a].extend(merged);
        clusters[a].sort_unstable();
    }
    clusters.sort_by_key(|c| c[0]);
    Ok(clusters)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BottomUpAssignment {
    pub k: usize,
    /// Member ids per cluster; members sorted, clusters ordered by first id.
    pub clusters: Vec<Vec<String>>,
    /// Majority top-down class of each cluster.
    pub labels: Vec<MacroClass>,
}

impl BottomUpAssignment {
    pub fn class_of(&self, archetype_id: &str) -> Option<MacroClass> {
        self.clusters
            .iter()
            .position(|c| c.iter().any(|m| m == archetype_id))
            .map(|i| self.labels[i])
    }

    pub fn cluster_of(&self, archetype_id: &str) -> Option<usize> {
        self.clusters.iter().position(|c| c.iter().any(|m| m == archetype_id))
    }
}

/// Bottom-up grouping of archetypes into `k` clusters. The result does not
/// depend on input order.
pub fn cluster_archetypes(archetypes: &[JobArchetype], k: usize, metric: &Similarity<'_>) -> Result<BottomUpAssignment> {
    let mut sorted: Vec<&JobArchetype> = archetypes.iter().collect();
    sorted.sort_by(|a, b| a.archetype_id.cmp(&b.archetype_id));
    let ids: Vec<String> = sorted.iter().map(|a| a.archetype_id.clone()).collect();
    let sim = similarity_matrix(&sorted, metric)?;
    let groups = agglomerate(&ids, &sim, k)?;
    let labels = groups
        .iter()
        .map(|g| {
            let mut votes: BTreeMap<MacroClass, usize> = BTreeMap::new();
            for &i in g {
                *votes.entry(sorted[i].macro_class_topdown).or_default() += 1;
            }
            votes
                .into_iter()
                .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
                .map(|(c, _)| c)
                .expect("non-empty cluster")
        })
        .collect();
    Ok(BottomUpAssignment {
        k,
        clusters: groups.into_iter().map(|g| g.into_iter().map(|i| ids[i].clone()).collect()).collect(),
        labels,
    })
}

/// `(1/n) Σ_clusters max_class |cluster ∩ class|` over `(cluster, class)`
/// pairs. Empty input has purity 1.
pub fn purity<C: Ord, T: Ord>(pairs: &[(C, T)]) -> f64 {
    if pairs.is_empty() {
        return 1.0;
    }
    let mut table: BTreeMap<&C, BTreeMap<&T, usize>> = BTreeMap::new();
    for (c, t) in pairs {
        *table.entry(c).or_default().entry(t).or_default() += 1;
    }
    let dominant: usize = table.values().map(|row| row.values().copied().max().unwrap_or(0)).sum();
    dominant as f64 / pairs.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub n: usize,
    pub purity: f64,
    /// bottom-up label → top-down class → count
    pub confusion: BTreeMap<String, BTreeMap<MacroClass, usize>>,
}

/// Compares bottom-up labels with top-down classes. Archetypes without a
/// bottom-up label are left out.
pub fn validate_macroclasses(archetypes: &[JobArchetype]) -> AgreementReport {
    let pairs: Vec<(MacroClass, MacroClass)> = archetypes
        .iter()
        .filter_map(|a| a.macro_class_bottomup.map(|b| (b, a.macro_class_topdown)))
        .collect();
    let mut confusion: BTreeMap<String, BTreeMap<MacroClass, usize>> = BTreeMap::new();
    for (b, t) in &pairs {
        *confusion.entry(b.as_str().to_string()).or_default().entry(*t).or_default() += 1;
    }
    AgreementReport { n: pairs.len(), purity: purity(&pairs), confusion }
}

/// The same comparison keyed by raw cluster index, for assignments whose
/// clusters may share a majority label.
pub fn validate_assignment(archetypes: &[JobArchetype], assignment: &BottomUpAssignment) -> AgreementReport {
    let pairs: Vec<(usize, MacroClass)> = archetypes
        .iter()
        .filter_map(|a| assignment.cluster_of(&a.archetype_id).map(|c| (c, a.macro_class_topdown)))
        .collect();
    let mut confusion: BTreeMap<String, BTreeMap<MacroClass, usize>> = BTreeMap::new();
    for (c, t) in &pairs {
        *confusion.entry(format!("cluster_{c}")).or_default().entry(*t).or_default() += 1;
    }
    AgreementReport { n: pairs.len(), purity: purity(&pairs), confusion }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arch(id: &str, class: MacroClass, skills: &[&str]) -> JobArchetype {
        JobArchetype {
            archetype_id: id.into(),
            title: id.into(),
            description: String::new(),
            macro_class_topdown: class,
            macro_class_bottomup: None,
            binary_skills: skills.iter().map(|s| s.to_string()).collect(),
            soft_targets: BTreeMap::new(),
            evidence_count: 0,
        }
    }

    #[test]
    fn jaccard_edges() {
        let e: BTreeSet<&str> = BTreeSet::new();
        let ab: BTreeSet<&str> = ["a", "b"].into();
        let bc: BTreeSet<&str> = ["b", "c"].into();
        assert_eq!(jaccard(&e, &e), 1.0);
        assert_eq!(jaccard(&ab, &e), 0.0);
        assert!((jaccard(&ab, &bc) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn disjoint_sets_stay_singletons() {
        let a = vec![
            arch("a", MacroClass::TechniciansOperators, &["x"]),
            arch("b", MacroClass::EngineeringProfessionals, &["y"]),
            arch("c", MacroClass::ManagersConsultants, &["z"]),
        ];
        let r = cluster_archetypes(&a, 3, &Similarity::SkillJaccard).unwrap();
        assert_eq!(r.clusters, vec![vec!["a"], vec!["b"], vec!["c"]]);
    }

    #[test]
    fn identical_sets_merge_first() {
        let a = vec![
            arch("a", MacroClass::TechniciansOperators, &["x", "y"]),
            arch("b", MacroClass::TechniciansOperators, &["p", "q"]),
            arch("c", MacroClass::TechniciansOperators, &["x", "y"]),
            arch("d", MacroClass::TechniciansOperators, &["x", "q"]),
        ];
        let r = cluster_archetypes(&a, 3, &Similarity::SkillJaccard).unwrap();
        assert_eq!(r.clusters, vec![vec!["a", "c"], vec!["b"], vec!["d"]]);
    }

    #[test]
    fn too_few() {
        let a = vec![arch("a", MacroClass::TechniciansOperators, &["x"])];
        assert!(matches!(
            cluster_archetypes(&a, 3, &Similarity::SkillJaccard),
            Err(Error::TooFewArchetypes { needed: 3, found: 1 })
        ));
    }

    #[test]
    fn purity_examples() {
        let mut pairs: Vec<(u8, u8)> = (0..12).map(|i| (i / 4, i / 4)).collect();
        assert_eq!(purity(&pairs), 1.0);
        pairs[0].0 = 1;
        assert!((purity(&pairs) - 11.0 / 12.0).abs() < 1e-15);
    }
}
