use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Curation, TechnologyCluster};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurationAction {
    Approve,
    Reject,
    Merge,
}

/// One reviewer decision. `target` and `into` accept a cluster id or label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurationDirective {
    pub action: CurationAction,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub into: Option<String>,
}

pub fn parse_curation(text: &str) -> Result<Vec<CurationDirective>> {
    Ok(serde_json::from_str(text)?)
}

/// Applies reviewer directives. Merges move members, families and mention
/// counts to the final merge target; the source keeps only its
/// `merged_into` marker.
pub fn apply_curation(
    mut clusters: Vec<TechnologyCluster>,
    directives: &[CurationDirective],
) -> Result<Vec<TechnologyCluster>> {
    let index: BTreeMap<String, usize> = clusters
        .iter()
        .enumerate()
        .map(|(i, c)| (c.cluster_id.clone(), i))
        .collect();
    let labels: BTreeMap<String, usize> = clusters
        .iter()
        .enumerate()
        .map(|(i, c)| (c.label.clone(), i))
        .collect();
    let resolve = |name: &str| -> Result<usize> {
        index
            .get(name)
            .or_else(|| labels.get(name))
            .copied()
            .ok_or_else(|| Error::UnknownCluster(name.to_string()))
    };

    let mut merge_into: BTreeMap<usize, usize> = BTreeMap::new();
    for d in directives {
        let target = resolve(&d.target)?;
        match d.action {
            CurationAction::Approve => clusters[target].curation = Curation::Approved,
            CurationAction::Reject => clusters[target].curation = Curation::Rejected,
            CurationAction::Merge => {
                let into = d
                    .into
                    .as_deref()
                    .ok_or_else(|| Error::UnknownCluster(format!("{} (merge without into)", d.target)))?;
                let into = resolve(into)?;
                if into == target {
                    return Err(Error::MergeCycle(clusters[target].cluster_id.clone()));
                }
                merge_into.insert(target, into);
            }
        }
    }

    let final_target = |start: usize| -> Result<usize> {
        let mut seen = BTreeSet::from([start]);
        let mut at = start;
        while let Some(&next) = merge_into.get(&at) {
            if !seen.insert(next) {
                return Err(Error::MergeCycle(clusters[start].cluster_id.clone()));
            }
            at = next;
        }
        Ok(at)
    };
    let mut moves = Vec::new();
    for (&source, &direct) in &merge_into {
        moves.push((source, direct, final_target(source)?));
    }
    for (source, direct, root) in moves {
        let members = std::mem::take(&mut clusters[source].member_lemmas);
        let families = std::mem::take(&mut clusters[source].family_ids);
        let mentions = std::mem::take(&mut clusters[source].mention_count);
        clusters[source].family_count = 0;
        clusters[source].curation = Curation::MergedInto(clusters[direct].cluster_id.clone());
        let dest = &mut clusters[root];
        dest.member_lemmas.extend(members);
        dest.family_ids.extend(families);
        dest.mention_count += mentions;
        dest.family_count = dest.family_ids.len();
    }
    Ok(clusters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::techner::cluster_technologies;
    use crate::techner::cluster::tests::mention;

    fn clusters() -> Vec<TechnologyCluster> {
        cluster_technologies(
            &[
                mention("air conditioning", "system", "D1"),
                mention("heat pump", "system", "D2"),
                mention("chiller", "system", "D3"),
                mention("chiller", "system", "D4"),
            ],
            |_| None,
        )
    }

    fn directive(action: CurationAction, target: &str, into: Option<&str>) -> CurationDirective {
        CurationDirective {
            action,
            target: target.into(),
            into: into.map(str::to_string),
        }
    }

    #[test]
    fn reject_by_label() {
        let out = apply_curation(clusters(), &[directive(CurationAction::Reject, "air conditioning", None)]).unwrap();
        let ac = out.iter().find(|c| c.label == "air conditioning").unwrap();
        assert_eq!(ac.curation, Curation::Rejected);
        assert!(!ac.is_active());
    }

    #[test]
    fn merge_moves_members_and_counts() {
        let out = apply_curation(clusters(), &[directive(CurationAction::Merge, "chiller", Some("heat_pump"))]).unwrap();
        let hp = out.iter().find(|c| c.cluster_id == "heat_pump").unwrap();
        assert!(hp.member_lemmas.contains("chiller"));
        assert_eq!(hp.mention_count, 3);
        assert_eq!(hp.family_count, 3);
        let ch = out.iter().find(|c| c.cluster_id == "chiller").unwrap();
        assert_eq!(ch.curation, Curation::MergedInto("heat_pump".into()));
        assert_eq!(ch.mention_count, 0);
        let active: usize = out.iter().filter(|c| c.is_active()).map(|c| c.mention_count).sum();
        assert_eq!(active, 4);
    }

    #[test]
    fn chained_merges_land_on_final_target() {
        let out = apply_curation(
            clusters(),
            &[
                directive(CurationAction::Merge, "chiller", Some("heat_pump")),
                directive(CurationAction::Merge, "heat_pump", Some("air_conditioning")),
            ],
        )
        .unwrap();
        let ac = out.iter().find(|c| c.cluster_id == "air_conditioning").unwrap();
        assert_eq!(ac.mention_count, 4);
        assert_eq!(ac.member_lemmas.len(), 3);
    }

    #[test]
    fn merge_cycle() {
        let err = apply_curation(
            clusters(),
            &[
                directive(CurationAction::Merge, "chiller", Some("heat_pump")),
                directive(CurationAction::Merge, "heat_pump", Some("chiller")),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::MergeCycle(_)));
        assert_eq!(err.to_string().split(' ').take(2).collect::<Vec<_>>(), ["merge", "cycle"]);
    }

    #[test]
    fn unknown_target() {
        assert!(matches!(
            apply_curation(clusters(), &[directive(CurationAction::Approve, "flux capacitor", None)]),
            Err(Error::UnknownCluster(_))
        ));
    }

    #[test]
    fn parses_directive_file() {
        let d = parse_curation(r#"[{"action":"merge","target":"a","into":"b"},{"action":"reject","target":"c"}]"#).unwrap();
        assert_eq!(d[0].action, CurationAction::Merge);
        assert_eq!(d[1].into, None);
    }
}
