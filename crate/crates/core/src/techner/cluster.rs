use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::TechnologyMention;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curation {
    Auto,
    Approved,
    Rejected,
    MergedInto(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TechnologyCluster {
    pub cluster_id: String,
    pub label: String,
    pub member_lemmas: BTreeSet<String>,
    pub hypernym_lemma: String,
    pub mention_count: usize,
    pub family_count: usize,
    pub family_ids: BTreeSet<String>,
    pub curation: Curation,
}

impl TechnologyCluster {
    /// Clusters that feed trends and shares.
    pub fn is_active(&self) -> bool {
        matches!(self.curation, Curation::Auto | Curation::Approved)
    }
}

pub fn cluster_id_for(label: &str) -> String {
    label.replace(' ', "_")
}

#[derive(Default)]
struct LemmaGroup {
    count: usize,
    hypernyms: BTreeMap<String, usize>,
    families: BTreeSet<String>,
}

impl LemmaGroup {
    fn hypernym(&self) -> &str {
        self.hypernyms
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(h, _)| h.as_str())
            .unwrap_or_default()
    }
}

fn parent_group<'m>(groups: &BTreeMap<&'m str, LemmaGroup>, lemma: &str) -> Option<&'m str> {
    let hypernym = groups[lemma].hypernym();
    let tokens: Vec<&str> = lemma.split(' ').collect();
    (1..tokens.len()).find_map(|i| {
        let suffix = tokens[i..].join(" ");
        groups
            .get_key_value(suffix.as_str())
            .filter(|(_, g)| g.hypernym() == hypernym)
            .map(|(k, _)| *k)
    })
}

fn root_group(groups: &BTreeMap<&str, LemmaGroup>, lemma: &str) -> String {
    let mut at = lemma.to_string();
    while let Some(p) = parent_group(groups, &at) {
        at = p.to_string();
    }
    at
}

/// Groups mentions by lemma, then attaches every lemma group to its longest
/// proper token-suffix group with the same hypernym (`plate heat exchanger`
/// → `heat exchanger`). Each resulting tree is one cluster, so lemmas with
/// different modifiers on the same head stay apart unless the bare head
/// phrase was itself mentioned.
///
/// `family_of` maps a document id to its family id.
pub fn cluster_technologies<'a, F>(mentions: &[TechnologyMention], family_of: F) -> Vec<TechnologyCluster>
where
    F: Fn(&str) -> Option<&'a str>,
{
    let mut groups: BTreeMap<&str, LemmaGroup> = BTreeMap::new();
    for m in mentions {
        let g = groups.entry(m.lemma.as_str()).or_default();
        g.count += 1;
        *g.hypernyms.entry(m.hypernym_lemma.clone()).or_default() += 1;
        let family = family_of(&m.location.doc_id).unwrap_or(&m.location.doc_id);
        g.families.insert(family.to_string());
    }

    let mut trees: BTreeMap<String, Vec<&str>> = BTreeMap::new();
    for lemma in groups.keys() {
        trees.entry(root_group(&groups, lemma)).or_default().push(lemma);
    }

    let mut clusters: Vec<TechnologyCluster> = trees
        .into_iter()
        .map(|(root, members)| {
            let label = members
                .iter()
                .copied()
                .max_by(|a, b| {
                    groups[a]
                        .count
                        .cmp(&groups[b].count)
                        .then_with(|| b.len().cmp(&a.len()))
                        .then_with(|| b.cmp(a))
                })
                .expect("non-empty tree")
                .to_string();
            let family_ids: BTreeSet<String> = members
                .iter()
                .flat_map(|m| groups[m].families.iter().cloned())
                .collect();
            TechnologyCluster {
                cluster_id: cluster_id_for(&label),
                hypernym_lemma: groups[root.as_str()].hypernym().to_string(),
                mention_count: members.iter().map(|m| groups[m].count).sum(),
                family_count: family_ids.len(),
                family_ids,
                member_lemmas: members.iter().map(|s| s.to_string()).collect(),
                label,
                curation: Curation::Auto,
            }
        })
        .collect();
    clusters.sort_by(|a, b| a.cluster_id.cmp(&b.cluster_id));
    clusters
}
