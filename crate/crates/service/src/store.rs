//! Assessment persistence.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use wprof_core::gapengine::{Assessment, AssessmentResponse};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredAssessment {
    pub assessment: Assessment,
    /// sha256 of the owner token; the token itself is never stored.
    pub owner_token_sha256: String,
    /// Database version the cached response was computed against.
    pub db_version: String,
    pub response: AssessmentResponse,
}

impl StoredAssessment {
    pub fn id(&self) -> &str {
        &self.response.assessment_id
    }
}

pub trait AssessmentStore: Send + Sync {
    fn get(&self, id: &str) -> Option<StoredAssessment>;
    fn put(&self, record: StoredAssessment) -> io::Result<()>;
    /// Returns whether a record was removed.
    fn delete(&self, id: &str) -> io::Result<bool>;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

type Snapshot = Arc<BTreeMap<String, StoredAssessment>>;

#[derive(Default)]
pub struct MemoryStore {
    records: RwLock<BTreeMap<String, StoredAssessment>>,
}

impl MemoryStore {
    pub fn new() -> Self {
        Self::default()
    }
}

impl AssessmentStore for MemoryStore {
    fn get(&self, id: &str) -> Option<StoredAssessment> {
        self.records.read().get(id).cloned()
    }

    fn put(&self, record: StoredAssessment) -> io::Result<()> {
        self.records.write().insert(record.id().to_string(), record);
        Ok(())
    }

    fn delete(&self, id: &str) -> io::Result<bool> {
        Ok(self.records.write().remove(id).is_some())
    }

    fn len(&self) -> usize {
        self.records.read().len()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum LogEntry {
    Put { record: Box<StoredAssessment> },
    Delete { id: String },
}

/// JSON-lines append log. Writes go through one writer; readers see the
/// last committed snapshot. Deletes rewrite the file so removed records do
/// not survive on disk.
pub struct AppendLogStore {
    path: PathBuf,
    writer: Mutex<File>,
    snapshot: RwLock<Snapshot>,
}

impl AppendLogStore {
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut records = BTreeMap::new();
        if path.exists() {
            for (i, line) in BufReader::new(File::open(&path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<LogEntry>(&line) {
                    Ok(LogEntry::Put { record }) => {
                        records.insert(record.id().to_string(), *record);
                    }
                    Ok(LogEntry::Delete { id }) => {
                        records.remove(&id);
                    }
                    // A torn final write is dropped; anything else is corruption.
                    Err(e) if e.is_eof() => log::warn!("{}: dropping truncated entry at line {}", path.display(), i + 1),
                    Err(e) => {
                        return Err(io::Error::new(
                            io::ErrorKind::InvalidData,
                            format!("{}: line {}: {e}", path.display(), i + 1),
                        ))
                    }
                }
            }
        }
        // Start from a compacted file so replays stay short.
        let writer = rewrite(&path, &records)?;
        Ok(Self {
            path,
            writer: Mutex::new(writer),
            snapshot: RwLock::new(Arc::new(records)),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

fn rewrite(path: &Path, records: &BTreeMap<String, StoredAssessment>) -> io::Result<File> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = File::create(&tmp)?;
        for record in records.values() {
            let entry = LogEntry::Put { record: Box::new(record.clone()) };
            writeln!(f, "{}", serde_json::to_string(&entry)?)?;
        }
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    OpenOptions::new().append(true).open(path)
}

impl AssessmentStore for AppendLogStore {
    fn get(&self, id: &str) -> Option<StoredAssessment> {
        let snapshot = self.snapshot.read().clone();
        snapshot.get(id).cloned()
    }

    fn put(&self, record: StoredAssessment) -> io::Result<()> {
        let mut writer = self.writer.lock();
        let line = serde_json::to_string(&LogEntry::Put { record: Box::new(record.clone()) })?;
        writeln!(writer, "{line}")?;
        writer.sync_data()?;
        let mut next = (**self.snapshot.read()).clone();
        next.insert(record.id().to_string(), record);
        *self.snapshot.write() = Arc::new(next);
        Ok(())
    }

    fn delete(&self, id: &str) -> io::Result<bool> {
        let mut writer = self.writer.lock();
        let mut next = (**self.snapshot.read()).clone();
        if next.remove(id).is_none() {
            return Ok(false);
        }
        *writer = rewrite(&self.path, &next)?;
        *self.snapshot.write() = Arc::new(next);
        Ok(true)
    }

    fn len(&self) -> usize {
        self.snapshot.read().len()
    }
}
