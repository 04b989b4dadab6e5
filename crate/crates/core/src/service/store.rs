use super::jobs::{PlanJob, PlanResult};
use sha2::{Digest, Sha256};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Flat file store. Instances live under their content hash and are never
/// rewritten; jobs and results are JSON files keyed by job id. Every write
/// goes to a temporary file first and is renamed into place.
#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
}

pub fn content_id(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn is_instance_id(id: &str) -> bool {
    id.len() == 64 && id.bytes().all(|b| b.is_ascii_hexdigit() && !b.is_ascii_uppercase())
}

fn is_job_id(id: &str) -> bool {
    uuid::Uuid::parse_str(id).is_ok()
}

impl Store {
    pub fn open(root: impl Into<PathBuf>) -> io::Result<Self> {
        let root = root.into();
        for sub in ["instances", "plans", "results"] {
            fs::create_dir_all(root.join(sub))?;
        }
        Ok(Self { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn write_atomic(&self, path: &Path, bytes: &[u8]) -> io::Result<()> {
        let tmp = path.with_extension(format!("tmp-{}", uuid::Uuid::new_v4()));
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, path).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }

    fn instance_path(&self, id: &str) -> PathBuf {
        self.root.join("instances").join(format!("{id}.json"))
    }

    /// Stores `raw` under the hash of `canonical` unless that id already
    /// exists, and returns the id.
    pub fn put_instance(&self, raw: &[u8], canonical: &str) -> io::Result<String> {
        let id = content_id(canonical);
        let path = self.instance_path(&id);
        if !path.exists() {
            self.write_atomic(&path, raw)?;
        }
        Ok(id)
    }

    pub fn instance_bytes(&self, id: &str) -> io::Result<Option<Vec<u8>>> {
        if !is_instance_id(id) {
            return Ok(None);
        }
        read_opt(&self.instance_path(id))
    }

    pub fn put_job(&self, job: &PlanJob) -> io::Result<()> {
        let text = serde_json::to_vec_pretty(job).map_err(io::Error::other)?;
        self.write_atomic(&self.root.join("plans").join(format!("{}.json", job.id)), &text)
    }

    /// All stored jobs, oldest first.
    pub fn jobs(&self) -> io::Result<Vec<PlanJob>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(self.root.join("plans"))? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                let text = fs::read(&path)?;
                match serde_json::from_slice::<PlanJob>(&text) {
                    Ok(job) => out.push(job),
                    Err(e) => tracing::warn!(path = %path.display(), error = %e, "skipping unreadable job file"),
                }
            }
        }
        out.sort_by(|a, b| (a.submitted_at, &a.id).cmp(&(b.submitted_at, &b.id)));
        Ok(out)
    }

    pub fn put_result(&self, id: &str, result: &PlanResult) -> io::Result<()> {
        let text = serde_json::to_vec(result).map_err(io::Error::other)?;
        self.write_atomic(&self.root.join("results").join(format!("{id}.json")), &text)
    }

    pub fn result(&self, id: &str) -> io::Result<Option<PlanResult>> {
        if !is_job_id(id) {
            return Ok(None);
        }
        match read_opt(&self.root.join("results").join(format!("{id}.json")))? {
            Some(bytes) => serde_json::from_slice(&bytes).map(Some).map_err(io::Error::other),
            None => Ok(None),
        }
    }
}

fn read_opt(path: &Path) -> io::Result<Option<Vec<u8>>> {
    match fs::read(path) {
        Ok(b) => Ok(Some(b)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e),
    }
}
