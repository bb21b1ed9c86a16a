use crate::ApiError;
use rand::RngExt;
use ramsey_core::clique::{enumerate_violations, VerificationReport};
use ramsey_core::graph::format::{emit_coloring, parse_coloring};
use ramsey_core::graph::EdgeColoring;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

pub use ramsey_core::graph::format::TextFormat as Format;

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

#[derive(Debug)]
pub struct Session {
    source_text: String,
    source_format: Format,
    loaded: EdgeColoring,
    coloring: EdgeColoring,
    s: usize,
    t: usize,
    flips: Vec<(usize, usize)>,
    created: u64,
    modified: u64,
    touched: Instant,
}

impl Session {
    /// Parses `text` into a total coloring checked against `K_s` / `K_t`.
    pub fn load(text: String, format: Option<Format>, s: usize, t: usize) -> Result<Session, ApiError> {
        if s == 0 || t == 0 {
            return Err(ApiError::BadRequest("clique sizes must be at least 1".into()));
        }
        let format = format.unwrap_or_else(|| Format::detect(&text));
        let coloring = parse_coloring(&text, Some(format)).map_err(ApiError::Parse)?;
        coloring.require_total()?;
        let now = unix_now();
        Ok(Session {
            source_text: text,
            source_format: format,
            loaded: coloring.clone(),
            coloring,
            s,
            t,
            flips: Vec::new(),
            created: now,
            modified: now,
            touched: Instant::now(),
        })
    }

    pub fn coloring(&self) -> &EdgeColoring {
        &self.coloring
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn undo_depth(&self) -> usize {
        self.flips.len()
    }

    pub fn created(&self) -> u64 {
        self.created
    }

    pub fn modified(&self) -> u64 {
        self.modified
    }

    pub fn report(&self, limit: usize) -> Result<VerificationReport, ApiError> {
        Ok(enumerate_violations(&self.coloring, self.s, self.t, limit)?)
    }

    pub fn flip(&mut self, i: usize, j: usize) -> Result<(), ApiError> {
        self.coloring = self.coloring.flip_edge(i, j)?;
        self.flips.push((i, j));
        self.modified = unix_now();
        Ok(())
    }

    pub fn undo(&mut self) -> Result<(), ApiError> {
        let (i, j) = self.flips.pop().ok_or(ApiError::NothingToUndo)?;
        self.coloring = self.coloring.flip_edge(i, j)?;
        self.modified = unix_now();
        Ok(())
    }

    /// Replays the flip stack on the loaded coloring.
    pub fn replay(&self) -> EdgeColoring {
        self.flips
            .iter()
            .fold(self.loaded.clone(), |c, &(i, j)| c.flip_edge(i, j).expect("recorded flips are valid edges"))
    }

    /// The coloring as text. While the coloring equals the loaded one, the
    /// loaded text comes back unchanged in its own format.
    pub fn export(&self, format: Format) -> Result<String, ApiError> {
        if format == self.source_format && self.coloring == self.loaded {
            return Ok(self.source_text.clone());
        }
        Ok(emit_coloring(&self.coloring, format)?)
    }
}

/// Sessions by id. Requests on one session are serialized by its mutex;
/// distinct sessions proceed independently.
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    ttl: Duration,
}

impl SessionStore {
    pub fn new(ttl: Duration) -> Self {
        SessionStore { sessions: RwLock::new(HashMap::new()), ttl }
    }

    pub fn insert(&self, session: Session) -> String {
        self.sweep();
        let mut rng = rand::rng();
        let mut map = self.sessions.write().expect("store lock");
        loop {
            let id = format!("{:032x}", rng.random::<u128>());
            if !map.contains_key(&id) {
                map.insert(id.clone(), Arc::new(Mutex::new(session)));
                return id;
            }
        }
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sweep();
        let session = self
            .sessions
            .read()
            .expect("store lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::NotFound(id.to_string()))?;
        session.lock().expect("session lock").touched = Instant::now();
        Ok(session)
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops sessions idle for longer than the TTL.
    pub fn sweep(&self) {
        let ttl = self.ttl;
        self.sessions.write().expect("store lock").retain(|_, s| {
            // A session busy with a request is in use, not idle.
            s.try_lock().map_or(true, |s| s.touched.elapsed() <= ttl)
        });
    }
}
