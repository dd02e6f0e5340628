//! Boolean keyword/regex query ontologies.
//!
//! Ontology files are JSON:
//!
//! ```json
//! {
//!   "name": "energy_mgmt",
//!   "scope": ["title", "abstract", "claims"],
//!   "expression": {"AND": [{"lit": "energy management"}, {"NOT": {"lit": "vehicle"}}]}
//! }
//! ```
//!
//! A bare expression object is also accepted; it searches every section.
//! Literal leaves (`lit`) match contiguous lemma sequences; regex leaves
//! (`re`) match raw sentence text.

use std::collections::BTreeSet;
use std::fmt;

use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::corpus::{contains_sequence, phrase_lemmas, Section, Sentence};
use crate::error::{Error, Result};

#[derive(Clone)]
pub enum Expr {
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Not(Box<Expr>),
    Literal { phrase: String, lemmas: Vec<String> },
    Regex(Regex),
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.to_json() == other.to_json()
    }
}

impl Expr {
    pub fn literal(phrase: &str) -> Self {
        Expr::Literal {
            phrase: phrase.to_string(),
            lemmas: phrase_lemmas(phrase),
        }
    }

    pub fn regex(pattern: &str) -> Result<Self> {
        Regex::new(pattern)
            .map(Expr::Regex)
            .map_err(|e| Error::InvalidRegex {
                pattern: pattern.to_string(),
                reason: e.to_string(),
            })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Expr::And(c) => json!({ "AND": c.iter().map(Expr::to_json).collect::<Vec<_>>() }),
            Expr::Or(c) => json!({ "OR": c.iter().map(Expr::to_json).collect::<Vec<_>>() }),
            Expr::Not(c) => json!({ "NOT": c.to_json() }),
            Expr::Literal { phrase, .. } => json!({ "lit": phrase }),
            Expr::Regex(r) => json!({ "re": r.as_str() }),
        }
    }

    /// Removes double negation and flattens nested AND/OR; single-child
    /// groups collapse to the child.
    pub fn normalize(self) -> Expr {
        match self {
            Expr::Not(inner) => match inner.normalize() {
                Expr::Not(x) => *x,
                other => Expr::Not(Box::new(other)),
            },
            Expr::And(children) => flatten(children, true),
            Expr::Or(children) => flatten(children, false),
            leaf => leaf,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Expr::And(c) | Expr::Or(c) => c.iter().map(Expr::leaf_count).sum(),
            Expr::Not(c) => c.leaf_count(),
            _ => 1,
        }
    }

    /// Whether some leaf sits under an even number of negations.
    pub fn has_positive_leaf(&self) -> bool {
        fn walk(e: &Expr, negated: bool) -> bool {
            match e {
                Expr::And(c) | Expr::Or(c) => c.iter().any(|x| walk(x, negated)),
                Expr::Not(c) => walk(c, !negated),
                _ => !negated,
            }
        }
        walk(self, false)
    }

    /// Evaluates the tree over the in-scope sentences of one document.
    pub fn matches(&self, sentences: &[&Sentence]) -> bool {
        match self {
            Expr::And(c) => c.iter().all(|x| x.matches(sentences)),
            Expr::Or(c) => c.iter().any(|x| x.matches(sentences)),
            Expr::Not(c) => !c.matches(sentences),
            Expr::Literal { lemmas, .. } => sentences
                .iter()
                .any(|s| contains_sequence(&s.lemma_sequence(), lemmas)),
            Expr::Regex(r) => sentences.iter().any(|s| r.is_match(&s.text)),
        }
    }
}

fn flatten(children: Vec<Expr>, is_and: bool) -> Expr {
    let mut out = Vec::with_capacity(children.len());
    for child in children.into_iter().map(Expr::normalize) {
        match child {
            Expr::And(grand) if is_and => out.extend(grand),
            Expr::Or(grand) if !is_and => out.extend(grand),
            other => out.push(other),
        }
    }
    if out.len() == 1 {
        return out.pop().expect("one child");
    }
    if is_and {
        Expr::And(out)
    } else {
        Expr::Or(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryOntology {
    pub name: String,
    pub expression: Expr,
    pub scope: BTreeSet<Section>,
}

#[derive(Serialize, Deserialize)]
struct OntologyJson {
    name: String,
    scope: BTreeSet<Section>,
    expression: Value,
}

impl Serialize for QueryOntology {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OntologyJson {
            name: self.name.clone(),
            scope: self.scope.clone(),
            expression: self.expression.to_json(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QueryOntology {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = OntologyJson::deserialize(d)?;
        let expression = parse_expr(&raw.expression, "expression")
            .map_err(serde::de::Error::custom)?
            .normalize();
        Ok(QueryOntology {
            name: raw.name,
            expression,
            scope: raw.scope,
        })
    }
}

impl QueryOntology {
    pub fn in_scope(&self, section: Section) -> bool {
        self.scope.contains(&section)
    }
}

/// Parses and validates an ontology document.
pub fn compile_query(spec: &str) -> Result<QueryOntology> {
    let value: Value = serde_json::from_str(spec).map_err(|e| Error::Query {
        location: format!("line {} column {}", e.line(), e.column()),
        reason: e.to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| Error::Query {
        location: "$".into(),
        reason: "expected a JSON object".into(),
    })?;
    let (name, scope, expression) = if obj.contains_key("expression") {
        let name = match obj.get("name") {
            Some(Value::String(s)) if !s.trim().is_empty() => s.clone(),
            None => "query".to_string(),
            _ => {
                return Err(Error::Query {
                    location: "name".into(),
                    reason: "expected a non-empty string".into(),
                })
            }
        };
        let scope = match obj.get("scope") {
            None => Section::ALL.into_iter().collect(),
            Some(v) => parse_scope(v)?,
        };
        (name, scope, parse_expr(&obj["expression"], "expression")?)
    } else {
        (
            "query".to_string(),
            Section::ALL.into_iter().collect(),
            parse_expr(&value, "$")?,
        )
    };
    let expression = expression.normalize();
    if !expression.has_positive_leaf() {
        return Err(Error::NoPositiveLeaf);
    }
    Ok(QueryOntology {
        name,
        expression,
        scope,
    })
}

fn parse_scope(v: &Value) -> Result<BTreeSet<Section>> {
    let err = |reason: &str| Error::Query {
        location: "scope".into(),
        reason: reason.into(),
    };
    let items = v.as_array().ok_or_else(|| err("expected an array of sections"))?;
    let scope: BTreeSet<Section> = items
        .iter()
        .map(|x| serde_json::from_value(x.clone()).map_err(|e| err(&e.to_string())))
        .collect::<Result<_>>()?;
    if scope.is_empty() {
        return Err(err("scope is empty"));
    }
    Ok(scope)
}

fn parse_expr(v: &Value, path: &str) -> Result<Expr> {
    let err = |reason: String| Error::Query {
        location: path.to_string(),
        reason,
    };
    let obj: &Map<String, Value> = v
        .as_object()
        .ok_or_else(|| err("expected an object node".into()))?;
    if obj.len() != 1 {
        return Err(err(format!(
            "node must have exactly one key, found {}",
            obj.len()
        )));
    }
    let (key, inner) = obj.iter().next().expect("one key");
    let child_path = |suffix: &str| format!("{path}.{key}{suffix}");
    match key.as_str() {
        "AND" | "OR" => {
            let items = inner
                .as_array()
                .ok_or_else(|| err(format!("{key} expects an array")))?;
            if items.is_empty() {
                return Err(err(format!("{key} has no children")));
            }
            let children = items
                .iter()
                .enumerate()
                .map(|(i, c)| parse_expr(c, &child_path(&format!("[{i}]"))))
                .collect::<Result<Vec<_>>>()?;
            Ok(if key == "AND" {
                Expr::And(children)
            } else {
                Expr::Or(children)
            })
        }
        "NOT" => Ok(Expr::Not(Box::new(parse_expr(inner, &child_path(""))?))),
        "lit" => {
            let phrase = inner
                .as_str()
                .ok_or_else(|| err("lit expects a string".into()))?;
            let e = Expr::literal(phrase);
            match &e {
                Expr::Literal { lemmas, .. } if lemmas.is_empty() => {
                    Err(err("literal has no tokens".into()))
                }
                _ => Ok(e),
            }
        }
        "re" => {
            let pattern = inner
                .as_str()
                .ok_or_else(|| err("re expects a string".into()))?;
            Expr::regex(pattern)
        }
        other => Err(err(format!("unknown node type {other:?}"))),
    }
}
