//! Persistent tag store.
//!
//! One redb table maps `repo\0revision\0path` to a JSON [`TagStoreRecord`].
//! A second table marks which revisions have been indexed. Every index
//! request is a single write transaction, so a revision's files become
//! visible together or not at all.

use std::path::Path;
use std::sync::Arc;

use redb::{Database, ReadableDatabase, ReadableTable, TableDefinition};
use semascope_core::{Tag, TagRole};
use serde::{Deserialize, Serialize};

const TAGS: TableDefinition<&[u8], &[u8]> = TableDefinition::new("tags");
const REVISIONS: TableDefinition<&[u8], &[u8]> = TableDefinition::new("revisions");

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("tag store: {0}")]
    Db(#[from] redb::Error),
    #[error("corrupt record under {key:?}: {source}")]
    Corrupt { key: String, source: serde_json::Error },
}

macro_rules! from_redb {
    ($($t:ty),*) => {$(
        impl From<$t> for StoreError {
            fn from(e: $t) -> Self {
                StoreError::Db(e.into())
            }
        }
    )*};
}

from_redb!(redb::DatabaseError, redb::TransactionError, redb::TableError, redb::StorageError, redb::CommitError);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagStoreRecord {
    pub repo: String,
    pub revision: String,
    pub path: String,
    pub tags: Vec<Tag>,
    /// Seconds since the Unix epoch of the first write of this record.
    pub indexed_at: u64,
}

/// Metadata written alongside a revision's records in the same batch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevisionMarker {
    pub files: usize,
    pub indexed_at: u64,
}

/// A stored tag with the file it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocatedTag {
    pub path: String,
    #[serde(flatten)]
    pub tag: Tag,
}

#[derive(Clone)]
pub struct TagStore {
    db: Arc<Database>,
}

fn revision_prefix(repo: &str, revision: &str) -> Vec<u8> {
    let mut k = Vec::with_capacity(repo.len() + revision.len() + 2);
    k.extend_from_slice(repo.as_bytes());
    k.push(0);
    k.extend_from_slice(revision.as_bytes());
    k.push(0);
    k
}

fn record_key(repo: &str, revision: &str, path: &str) -> Vec<u8> {
    let mut k = revision_prefix(repo, revision);
    k.extend_from_slice(path.as_bytes());
    k
}

/// Exclusive upper bound of all keys starting with `prefix`, which ends in
/// a NUL byte.
fn prefix_end(prefix: &[u8]) -> Vec<u8> {
    let mut end = prefix.to_vec();
    *end.last_mut().expect("prefix is not empty") = 1;
    end
}

fn decode<T: for<'de> Deserialize<'de>>(key: &[u8], value: &[u8]) -> Result<T, StoreError> {
    serde_json::from_slice(value).map_err(|source| StoreError::Corrupt { key: String::from_utf8_lossy(key).into_owned(), source })
}

impl TagStore {
    /// Opens or creates the store at `path`. A store left behind by a crash
    /// is repaired on open.
    pub fn open(path: &Path) -> Result<Self, StoreError> {
        let db = Database::create(path)?;
        let txn = db.begin_write()?;
        {
            txn.open_table(TAGS)?;
            txn.open_table(REVISIONS)?;
        }
        txn.commit()?;
        Ok(Self { db: Arc::new(db) })
    }

    /// Replaces the contents of one revision with `records` in one atomic
    /// batch. A record whose tags are unchanged keeps its original
    /// timestamp, so repeating a request leaves the store as it was.
    pub fn put_revision(&self, repo: &str, revision: &str, records: Vec<(String, Vec<Tag>)>, now: u64) -> Result<(), StoreError> {
        let prefix = revision_prefix(repo, revision);
        let end = prefix_end(&prefix);
        let txn = self.db.begin_write()?;
        {
            let mut tags = txn.open_table(TAGS)?;
            let mut existing = std::collections::BTreeMap::new();
            for entry in tags.range::<&[u8]>(prefix.as_slice()..end.as_slice())? {
                let (k, v) = entry?;
                let record: TagStoreRecord = decode(k.value(), v.value())?;
                existing.insert(k.value().to_vec(), record);
            }
            let mut keep = std::collections::BTreeSet::new();
            for (path, file_tags) in records {
                let key = record_key(repo, revision, &path);
                let indexed_at = match existing.get(&key) {
                    Some(old) if old.tags == file_tags => {
                        keep.insert(key);
                        continue;
                    }
                    _ => now,
                };
                let record = TagStoreRecord { repo: repo.into(), revision: revision.into(), path, tags: file_tags, indexed_at };
                let value = serde_json::to_vec(&record).expect("records always serialize");
                tags.insert(key.as_slice(), value.as_slice())?;
                keep.insert(key);
            }
            for key in existing.keys().filter(|k| !keep.contains(*k)) {
                tags.remove(key.as_slice())?;
            }
            let mut revisions = txn.open_table(REVISIONS)?;
            let marker_key = &prefix[..prefix.len() - 1];
            let unchanged = revisions
                .get(marker_key)?
                .map(|v| decode::<RevisionMarker>(marker_key, v.value()))
                .transpose()?
                .filter(|m| m.files == keep.len());
            if unchanged.is_none() {
                let marker = RevisionMarker { files: keep.len(), indexed_at: now };
                revisions.insert(marker_key, serde_json::to_vec(&marker).expect("markers always serialize").as_slice())?;
            }
        }
        txn.commit()?;
        Ok(())
    }

    pub fn revision(&self, repo: &str, revision: &str) -> Result<Option<RevisionMarker>, StoreError> {
        let txn = self.db.begin_read()?;
        let table = txn.open_table(REVISIONS)?;
        let prefix = revision_prefix(repo, revision);
        let key = &prefix[..prefix.len() - 1];
        table.get(key)?.map(|v| decode(key, v.value())).transpose()
    }

    /// Every record of a revision, in path order.
    pub fn records(&self, repo: &str, revision: &str) -> Result<Vec<TagStoreRecord>, StoreError> {
        let txn = self.db.begin_read()?;
        let table = txn.open_table(TAGS)?;
        let prefix = revision_prefix(repo, revision);
        let end = prefix_end(&prefix);
        let mut out = Vec::new();
        for entry in table.range::<&[u8]>(prefix.as_slice()..end.as_slice())? {
            let (k, v) = entry?;
            out.push(decode(k.value(), v.value())?);
        }
        Ok(out)
    }

    /// Tags of `role` named exactly `name`, ordered by path and then span.
    pub fn lookup(&self, repo: &str, revision: &str, name: &str, role: TagRole) -> Result<Vec<LocatedTag>, StoreError> {
        let mut out = Vec::new();
        for record in self.records(repo, revision)? {
            let mut hits: Vec<&Tag> = record.tags.iter().filter(|t| t.role == role && t.name == name).collect();
            hits.sort_by_key(|t| (t.span.start_byte, t.span.end_byte));
            out.extend(hits.into_iter().map(|t| LocatedTag { path: record.path.clone(), tag: t.clone() }));
        }
        Ok(out)
    }
}
