use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use tokio::sync::{Mutex, OwnedMutexGuard, RwLock};
use trajkit::ingest::{is_valid_session_id, write_atomic};
use trajkit::{Error, Session, Split};

use crate::error::ApiError;

const MANIFEST_FILE: &str = "manifest.json";

/// Committed session state plus its canonical on-disk bytes.
#[derive(Debug, Clone)]
pub(crate) struct Snapshot {
    pub session: Session,
    pub document: String,
}

pub(crate) struct SessionSlot {
    pub state: RwLock<Snapshot>,
    edit: Arc<Mutex<()>>,
}

impl SessionSlot {
    /// Claim the session's edit token without waiting.
    pub fn begin_edit(&self) -> Result<OwnedMutexGuard<()>, ApiError> {
        self.edit
            .clone()
            .try_lock_owned()
            .map_err(|_| ApiError::Conflict("another edit is in flight for this session".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub session_id: String,
    pub split: Split,
    pub raw_points: usize,
    pub markers: usize,
    pub committed: bool,
}

impl SessionSummary {
    fn of(s: &Session) -> Self {
        Self {
            session_id: s.session_id.clone(),
            split: s.split,
            raw_points: s.raw_track.len(),
            markers: s.markers.len(),
            committed: s.corrected_track.is_some(),
        }
    }
}

/// Sessions found in one directory, keyed by id. The set of ids is fixed at
/// open time; contents change through [`SessionStore::persist`].
pub struct SessionStore {
    dir: PathBuf,
    slots: BTreeMap<String, Arc<SessionSlot>>,
}

impl SessionStore {
    pub fn open(dir: impl AsRef<Path>) -> trajkit::Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        let mut slots = BTreeMap::new();
        for entry in std::fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_none_or(|e| e != "json")
                || path.file_name().is_some_and(|n| n == MANIFEST_FILE)
            {
                continue;
            }
            let document = std::fs::read_to_string(&path)?;
            let session = Session::from_json(&document).map_err(|e| Error::Format {
                path: path.clone(),
                line: 0,
                message: e.to_string(),
            })?;
            if path.file_stem().and_then(|s| s.to_str()) != Some(session.session_id.as_str()) {
                return Err(Error::Config(format!(
                    "{} holds session `{}`; file stem must match the id",
                    path.display(),
                    session.session_id
                )));
            }
            slots.insert(
                session.session_id.clone(),
                Arc::new(SessionSlot {
                    state: RwLock::new(Snapshot { session, document }),
                    edit: Arc::new(Mutex::new(())),
                }),
            );
        }
        Ok(Self { dir, slots })
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.slots.keys().map(String::as_str)
    }

    pub fn session_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.json"))
    }

    pub(crate) fn slot(&self, id: &str) -> Result<&Arc<SessionSlot>, ApiError> {
        if !is_valid_session_id(id) {
            return Err(ApiError::NotFound(id.to_string()));
        }
        self.slots
            .get(id)
            .ok_or_else(|| ApiError::NotFound(id.to_string()))
    }

    pub async fn summaries(&self) -> Vec<SessionSummary> {
        let mut out = Vec::with_capacity(self.slots.len());
        for slot in self.slots.values() {
            out.push(SessionSummary::of(&slot.state.read().await.session));
        }
        out
    }

    /// Write `session` to disk, then publish it. Callers hold the edit token.
    pub(crate) async fn persist(
        &self,
        slot: &SessionSlot,
        session: Session,
    ) -> Result<(), ApiError> {
        let document = session.to_json().map_err(ApiError::internal)?;
        write_atomic(&self.session_path(&session.session_id), document.as_bytes())
            .map_err(ApiError::internal)?;
        *slot.state.write().await = Snapshot { session, document };
        Ok(())
    }
}
