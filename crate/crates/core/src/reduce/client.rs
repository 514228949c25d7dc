//! Out-of-process text rewriting: translation, paraphrasing and mask
//! filling through a line-oriented JSON protocol, or through a recorded
//! fixture file.
//!
//! Request (one line on the child's stdin):
//! `{"id": 7, "task": "translate", "src": "bn", "tgt": "en", "text": "..."}`
//!
//! Response (one line on the child's stdout, in request order):
//! `{"id": 7, "text": "..."}`

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reduce::mask::{MaskFillProvider, MaskQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Translate,
    Paraphrase,
    FillMask,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Translate => "translate",
            Task::Paraphrase => "paraphrase",
            Task::FillMask => "fill-mask",
        })
    }
}

pub trait TextClient {
    fn request(&mut self, task: Task, src: &str, tgt: &str, text: &str) -> Result<String>;
}

#[derive(Serialize)]
struct Request<'a> {
    id: u64,
    task: Task,
    src: &'a str,
    tgt: &'a str,
    text: &'a str,
}

#[derive(Deserialize)]
struct Response {
    id: u64,
    text: String,
}

/// A child process speaking the JSON-lines protocol. One request is in
/// flight at a time.
pub struct SubprocessClient {
    command: String,
    child: Child,
    stdin: Option<ChildStdin>,
    stdout: BufReader<ChildStdout>,
    next_id: u64,
}

impl SubprocessClient {
    /// Runs `command` through `sh -c`.
    pub fn spawn(command: &str) -> Result<Self> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::ClientUnavailable(format!("{command}: {e}")))?;
        let stdin = child.stdin.take();
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        Ok(SubprocessClient {
            command: command.to_string(),
            child,
            stdin,
            stdout,
            next_id: 0,
        })
    }

    fn unavailable(&mut self, what: &str) -> Error {
        let status = match self.child.try_wait() {
            Ok(Some(s)) => format!(" ({s})"),
            _ => String::new(),
        };
        Error::ClientUnavailable(format!("{}: {what}{status}", self.command))
    }
}

impl TextClient for SubprocessClient {
    fn request(&mut self, task: Task, src: &str, tgt: &str, text: &str) -> Result<String> {
        let id = self.next_id;
        self.next_id += 1;
        let mut line = serde_json::to_string(&Request { id, task, src, tgt, text })?;
        line.push('\n');
        let sent = match self.stdin.as_mut() {
            Some(stdin) => stdin.write_all(line.as_bytes()).and_then(|_| stdin.flush()),
            None => return Err(self.unavailable("input closed")),
        };
        if sent.is_err() {
            return Err(self.unavailable("write failed"));
        }
        let mut reply = String::new();
        match self.stdout.read_line(&mut reply) {
            Ok(0) | Err(_) => return Err(self.unavailable("no response")),
            Ok(_) => {}
        }
        let resp: Response = serde_json::from_str(reply.trim_end())
            .map_err(|e| Error::ClientUnavailable(format!("{}: bad response: {e}", self.command)))?;
        if resp.id != id {
            return Err(Error::ClientUnavailable(format!(
                "{}: response id {} does not match request id {id}",
                self.command, resp.id
            )));
        }
        Ok(resp.text)
    }
}

impl Drop for SubprocessClient {
    fn drop(&mut self) {
        drop(self.stdin.take());
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct FixtureKey {
    task: Task,
    src: String,
    tgt: String,
    text: String,
}

/// One line of a fixture file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub task: Task,
    pub src: String,
    pub tgt: String,
    pub text_in: String,
    pub text_out: String,
}

/// Exact-match lookup table standing in for a live model.
#[derive(Debug, Clone, Default)]
pub struct FixtureClient {
    entries: HashMap<FixtureKey, String>,
    duplicates: usize,
}

impl FixtureClient {
    /// Later entries replace earlier ones with the same key.
    pub fn from_entries(entries: impl IntoIterator<Item = FixtureEntry>) -> Self {
        let mut client = FixtureClient::default();
        for e in entries {
            client.insert(e);
        }
        client
    }

    /// Returns true when the key was already present.
    pub fn insert(&mut self, e: FixtureEntry) -> bool {
        let key = FixtureKey {
            task: e.task,
            src: e.src,
            tgt: e.tgt,
            text: e.text_in,
        };
        let replaced = self.entries.insert(key, e.text_out).is_some();
        if replaced {
            self.duplicates += 1;
        }
        replaced
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of entries that overrode an earlier one.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }
}

impl TextClient for FixtureClient {
    fn request(&mut self, task: Task, src: &str, tgt: &str, text: &str) -> Result<String> {
        let key = FixtureKey {
            task,
            src: src.to_string(),
            tgt: tgt.to_string(),
            text: text.to_string(),
        };
        self.entries.get(&key).cloned().ok_or_else(|| Error::FixtureMiss {
            task: task.to_string(),
            src: src.to_string(),
            tgt: tgt.to_string(),
            text: text.to_string(),
        })
    }
}

/// Either kind of client behind one type.
pub enum TranslatorClient {
    Subprocess(SubprocessClient),
    Fixture(FixtureClient),
}

impl TextClient for TranslatorClient {
    fn request(&mut self, task: Task, src: &str, tgt: &str, text: &str) -> Result<String> {
        match self {
            TranslatorClient::Subprocess(c) => c.request(task, src, tgt, text),
            TranslatorClient::Fixture(c) => c.request(task, src, tgt, text),
        }
    }
}

/// Mask filling through a client: the request text is the current masked
/// sentence and the response is the word for its first mask.
pub struct ClientMaskPredictor<'a> {
    pub client: &'a mut dyn TextClient,
    pub lang: String,
}

impl MaskFillProvider for ClientMaskPredictor<'_> {
    fn predict(&mut self, query: MaskQuery<'_>) -> Result<String> {
        self.client
            .request(Task::FillMask, &self.lang, &self.lang, query.text)
            .map_err(|e| Error::PredictorFailure(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(task: Task, src: &str, tgt: &str, i: &str, o: &str) -> FixtureEntry {
        FixtureEntry {
            task,
            src: src.into(),
            tgt: tgt.into(),
            text_in: i.into(),
            text_out: o.into(),
        }
    }

    #[test]
    fn fixture_lookup_and_miss() {
        let mut c = FixtureClient::from_entries([entry(Task::Translate, "bn", "en", "a", "EN1")]);
        assert_eq!(c.request(Task::Translate, "bn", "en", "a").unwrap(), "EN1");
        assert!(matches!(
            c.request(Task::Translate, "en", "bn", "a"),
            Err(Error::FixtureMiss { .. })
        ));
        assert!(matches!(
            c.request(Task::Paraphrase, "bn", "en", "a"),
            Err(Error::FixtureMiss { .. })
        ));
    }

    #[test]
    fn fixture_last_entry_wins() {
        let c = FixtureClient::from_entries([
            entry(Task::Translate, "bn", "en", "a", "first"),
            entry(Task::Translate, "bn", "en", "a", "second"),
        ]);
        assert_eq!(c.duplicates(), 1);
        let mut c = c;
        assert_eq!(c.request(Task::Translate, "bn", "en", "a").unwrap(), "second");
    }

    #[test]
    fn task_wire_names() {
        assert_eq!(serde_json::to_string(&Task::FillMask).unwrap(), "\"fill-mask\"");
        assert_eq!(serde_json::to_string(&Task::Translate).unwrap(), "\"translate\"");
    }

    #[test]
    fn missing_command_is_unavailable() {
        let mut c = SubprocessClient::spawn("exit 3").unwrap();
        assert!(matches!(
            c.request(Task::Translate, "bn", "en", "x"),
            Err(Error::ClientUnavailable(_))
        ));
    }
}
