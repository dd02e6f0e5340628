use std::path::Path;

use serde::Deserialize;
use wprof_core::corpus::{tokenize_and_tag, Section, Sentence};
use wprof_core::techner::{extract_mentions, KeyTermSet};

#[derive(Deserialize)]
struct Case {
    id: String,
    pattern: String,
    polarity: String,
    text: String,
    expected: Vec<Expected>,
}

#[derive(Debug, PartialEq, Deserialize)]
struct Expected {
    pattern_id: String,
    hypernym: String,
    hyponym: String,
}

fn cases() -> Vec<Case> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/golden/hearst.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn extract(text: &str) -> Vec<Expected> {
    let sentence = Sentence {
        doc_id: "golden".into(),
        section: Section::Abstract,
        index: 0,
        text: text.into(),
        tokens: tokenize_and_tag(text),
    };
    extract_mentions(&sentence, &KeyTermSet::default())
        .into_iter()
        .map(|m| Expected {
            pattern_id: serde_json::to_value(m.pattern_id).unwrap().as_str().unwrap().to_string(),
            hypernym: m.hypernym_lemma,
            hyponym: m.lemma,
        })
        .collect()
}

#[test]
fn golden_suite_covers_every_pattern_both_ways() {
    let cases = cases();
    assert!(cases.len() >= 25);
    for pattern in ["such_as", "such_np_as", "and_other", "including", "especially"] {
        for polarity in ["positive", "negative"] {
            assert!(
                cases.iter().any(|c| c.pattern == pattern && c.polarity == polarity),
                "no {polarity} case for {pattern}"
            );
        }
    }
    for c in cases.iter().filter(|c| c.polarity == "negative") {
        assert!(c.expected.is_empty(), "{}", c.id);
    }
}

#[test]
fn golden_mentions_match() {
    let mut failures = Vec::new();
    for c in cases() {
        let got = extract(&c.text);
        if got != c.expected {
            failures.push(format!("{} {:?}\n  expected {:?}\n  got      {:?}", c.id, c.text, c.expected, got));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
