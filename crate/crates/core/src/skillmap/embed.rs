use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{tokenize_and_tag, Role};
use crate::error::{Error, Result};

/// A dense text vector. Providers return unit vectors, or the zero vector
/// for text with no content words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub values: Vec<f64>,
}

impl Embedding {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { values: vec![0.0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            for v in &mut self.values {
                *v /= n;
            }
        }
        self
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.values.iter().map(|v| v * factor).collect())
    }
}

pub fn cosine(u: &Embedding, v: &Embedding) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { left: u.dim(), right: v.dim() });
    }
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    let dot: f64 = u.values.iter().zip(&v.values).map(|(a, b)| a * b).sum();
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

pub trait EmbeddingProvider: Send + Sync {
    fn dim(&self) -> usize;
    fn embed(&self, text: &str) -> Result<Embedding>;
    /// Short identifier recorded in artifacts.
    fn name(&self) -> String;
}

pub fn text_digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub const HASHED_BAG_DIM: usize = 256;
pub const HASHED_BAG_SEED: &str = "wprof-hashed-bag-v1";

/// Reference provider: hashed bag of content lemmas with term-frequency
/// weights.
#[derive(Debug, Clone)]
pub struct HashedBag {
    dim: usize,
    seed: String,
}

impl Default for HashedBag {
    fn default() -> Self {
        Self::new(HASHED_BAG_DIM, HASHED_BAG_SEED)
    }
}

impl HashedBag {
    pub fn new(dim: usize, seed: &str) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self { dim, seed: seed.to_string() }
    }

    pub fn bucket(&self, lemma: &str) -> usize {
        let mut h = Sha256::new();
        h.update(self.seed.as_bytes());
        h.update([0u8]);
        h.update(lemma.as_bytes());
        let d = h.finalize();
        let word = u64::from_be_bytes(d[..8].try_into().expect("8 bytes"));
        (word % self.dim as u64) as usize
    }

    /// Content lemmas of `text`: word tokens minus function words.
    pub fn lemmas(text: &str) -> Vec<String> {
        tokenize_and_tag(text)
            .into_iter()
            .filter(|t| t.is_word() && !t.role.is_function_word() && t.role != Role::Other)
            .map(|t| t.lemma)
            .collect()
    }
}

impl EmbeddingProvider for HashedBag {
    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, text: &str) -> Result<Embedding> {
        let mut values = vec![0.0; self.dim];
        for lemma in Self::lemmas(text) {
            values[self.bucket(&lemma)] += 1.0;
        }
        Ok(Embedding::new(values).normalized())
    }

    fn name(&self) -> String {
        format!("hashed-bag/{}/{}", self.dim, self.seed)
    }
}

/// Precomputed vectors keyed by the sha256 of the exact text.
#[derive(Debug, Clone)]
pub struct FileProvider {
    dim: usize,
    table: HashMap<String, Embedding>,
    digest: String,
}

impl FileProvider {
    /// Parses `sha256(text)<TAB>v1<TAB>v2...` lines. Blank lines and `#`
    /// comments are skipped. Vectors are normalized on load.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut table = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let key = cols.next().unwrap_or_default().to_ascii_lowercase();
            if key.len() != 64 || !key.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(Error::Parse { line: i + 1, reason: "expected a sha256 hex digest".into() });
            }
            let values = cols
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: i + 1, reason: e.to_string() })?;
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse { line: i + 1, reason: "non-finite value".into() });
            }
            match dim {
                None => dim = Some(values.len()),
                Some(d) if d != values.len() => {
                    return Err(Error::DimensionMismatch { left: d, right: values.len() })
                }
                _ => {}
            }
            table.insert(key, Embedding::new(values).normalized());
        }
        let dim = dim.ok_or_else(|| Error::Parse { line: 0, reason: "embedding file is empty".into() })?;
        if dim == 0 {
            return Err(Error::Parse { line: 1, reason: "vectors have no components".into() });
        }
        Ok(Self { dim, table, digest: text_digest(text) })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&crate::error::read_file(path)?)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl EmbeddingProvider for FileProvider {
    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, text: &str) -> Result<Embedding> {
        if text.trim().is_empty() {
            return Ok(Embedding::zeros(self.dim));
        }
        let key = text_digest(text);
        self.table.get(&key).cloned().ok_or(Error::EmbeddingMissing(key))
    }

    fn name(&self) -> String {
        format!("file/{}", &self.digest[..16])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_basics() {
        let u = Embedding::new(vec![1.0, 2.0, 0.0]);
        assert!((cosine(&u, &u).unwrap() - 1.0).abs() < 1e-12);
        assert!((cosine(&u, &u.scaled(-1.0)).unwrap() + 1.0).abs() < 1e-12);
        let w = Embedding::new(vec![-2.0, 1.0, 0.0]);
        assert_eq!(cosine(&u, &w).unwrap(), 0.0);
        assert!(matches!(cosine(&u, &Embedding::zeros(3)), Err(Error::ZeroVector)));
        assert!(matches!(cosine(&u, &Embedding::zeros(2)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hashed_bag_is_deterministic_and_unit() {
        let p = HashedBag::default();
        let a = p.embed("analyze energy consumption").unwrap();
        let b = p.embed("analyze energy consumption").unwrap();
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-12);
        assert!((cosine(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        assert!(p.embed("the and of").unwrap().is_zero());
    }

    #[test]
    fn disjoint_texts_are_orthogonal() {
        let p = HashedBag::default();
        let a = p.embed("analyze energy consumption").unwrap();
        let b = p.embed("design wind turbines").unwrap();
        assert_eq!(cosine(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn file_provider_lookup() {
        let key = text_digest("hello");
        let p = FileProvider::parse(&format!("{key}\t3\t4\n")).unwrap();
        assert_eq!(p.embed("hello").unwrap().values, vec![0.6, 0.8]);
        assert!(matches!(p.embed("other"), Err(Error::EmbeddingMissing(_))));
        assert!(p.embed("").unwrap().is_zero());
        let bad = format!("{key}\t1\t2\n{}\t1\n", text_digest("x"));
        assert!(matches!(FileProvider::parse(&bad), Err(Error::DimensionMismatch { .. })));
    }
}
