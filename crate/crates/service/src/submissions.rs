//! Append-only JSONL log of user submissions. Each record is written and
//! fsynced before the caller gets its id.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use rhetor_core::RatioVector;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubmissionRecord {
    pub submission_id: u64,
    pub session_id: String,
    pub topic: String,
    pub body: String,
    pub ratios: RatioVector,
    /// Milliseconds since the Unix epoch, UTC.
    pub timestamp_ms: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum LogError {
    #[error("submission log {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("submission log {path}, line {line}: {message}")]
    Corrupt { path: PathBuf, line: usize, message: String },
}

pub type Clock = Box<dyn Fn() -> u64 + Send + Sync>;

fn system_clock() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

struct Inner {
    file: File,
    len: u64,
    records: Vec<SubmissionRecord>,
    last_ts: HashMap<String, u64>,
}

pub struct SubmissionLog {
    path: PathBuf,
    clock: Clock,
    inner: Mutex<Inner>,
}

impl SubmissionLog {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, LogError> {
        Self::open_with_clock(path, Box::new(system_clock))
    }

    /// Loads existing records. A final line without its newline is the
    /// remains of an interrupted write and is cut off; any other bad line
    /// is an error.
    pub fn open_with_clock(path: impl AsRef<Path>, clock: Clock) -> Result<Self, LogError> {
        let path = path.as_ref().to_path_buf();
        let io = |source| LogError::Io {
            path: path.clone(),
            source,
        };
        let mut file = OpenOptions::new()
            .create(true)
            .read(true)
            .append(true)
            .open(&path)
            .map_err(io)?;

        let mut records = Vec::new();
        let mut good_len = 0u64;
        let mut reader = BufReader::new(&file);
        let mut line = String::new();
        let mut line_no = 0;
        loop {
            line.clear();
            let n = reader.read_line(&mut line).map_err(io)?;
            if n == 0 {
                break;
            }
            line_no += 1;
            if !line.ends_with('\n') {
                tracing::warn!(path = %path.display(), line = line_no, "dropping torn trailing record");
                break;
            }
            let record: SubmissionRecord = serde_json::from_str(line.trim_end()).map_err(|e| LogError::Corrupt {
                path: path.clone(),
                line: line_no,
                message: e.to_string(),
            })?;
            records.push(record);
            good_len += n as u64;
        }
        drop(reader);
        if file.metadata().map_err(io)?.len() != good_len {
            file.set_len(good_len).map_err(io)?;
            file.sync_data().map_err(io)?;
        }
        file.seek(SeekFrom::End(0)).map_err(io)?;

        let mut last_ts = HashMap::new();
        for r in &records {
            let t = last_ts.entry(r.session_id.clone()).or_insert(0);
            *t = (*t).max(r.timestamp_ms);
        }
        Ok(Self {
            path,
            clock,
            inner: Mutex::new(Inner {
                file,
                len: good_len,
                records,
                last_ts,
            }),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(
        &self,
        session_id: &str,
        topic: &str,
        body: &str,
        ratios: RatioVector,
    ) -> Result<SubmissionRecord, LogError> {
        let mut inner = self.inner.lock().unwrap_or_else(|e| e.into_inner());
        let now = (self.clock)();
        let timestamp_ms = match inner.last_ts.get(session_id) {
            Some(&prev) if now <= prev => prev + 1,
            _ => now,
        };
        let record = SubmissionRecord {
            submission_id: inner.records.last().map_or(1, |r| r.submission_id + 1),
            session_id: session_id.to_string(),
            topic: topic.to_string(),
            body: body.to_string(),
            ratios,
            timestamp_ms,
        };
        let mut line = serde_json::to_string(&record).expect("record serializes");
        line.push('\n');

        let written = inner
            .file
            .write_all(line.as_bytes())
            .and_then(|_| inner.file.sync_data());
        if let Err(source) = written {
            // Put the file back to the last complete record.
            let len = inner.len;
            let _ = inner.file.set_len(len);
            return Err(LogError::Io {
                path: self.path.clone(),
                source,
            });
        }
        inner.len += line.len() as u64;
        inner.last_ts.insert(session_id.to_string(), timestamp_ms);
        inner.records.push(record.clone());
        Ok(record)
    }

    /// Records of one session in write order.
    pub fn session(&self, session_id: &str) -> Vec<SubmissionRecord> {
        let inner = self.inner.lock().unwrap_or_else(|e| e.into_inner());
        inner
            .records
            .iter()
            .filter(|r| r.session_id == session_id)
            .cloned()
            .collect()
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap_or_else(|e| e.into_inner()).records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
