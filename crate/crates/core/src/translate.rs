//! Pluggable line translation.
//!
//! The filter needs an intermediate translation of every source line. Any
//! engine that maps lines positionally will do; built in are a
//! translation-memory engine (exact match, optional gloss fallback), a
//! deterministic word-by-word gloss engine driven by a [`Lexicon`], and an
//! adapter that pipes lines through an external command. Translations are
//! cached per engine and language pair so reruns stay offline.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use sha2::{Digest, Sha256};

use crate::align::Lexicon;
use crate::error::{Error, Result};
use crate::lang::LangCode;

/// A batch of lines to translate.
#[derive(Debug, Clone)]
pub struct TranslationRequest {
    pub lines: Vec<String>,
    pub source_lang: LangCode,
    pub target_lang: LangCode,
}

impl TranslationRequest {
    pub fn new(lines: Vec<String>, source_lang: LangCode, target_lang: LangCode) -> Result<Self> {
        if source_lang == target_lang {
            return Err(Error::config(
                "translation request needs two distinct languages",
            ));
        }
        Ok(TranslationRequest {
            lines,
            source_lang,
            target_lang,
        })
    }
}

/// Line-for-line translation output; always the same length as the request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationResult {
    pub lines: Vec<String>,
}

/// A translation backend operating on batches of lines.
///
/// `identity()` must change whenever the engine would translate any line
/// differently (it keys the cache), and `translate_batch` must return
/// exactly one output line per input line.
pub trait LineTranslator {
    fn identity(&self) -> String;
    fn translate_batch(&self, lines: &[String]) -> Result<Vec<String>>;
}

fn short_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    format!("{digest:x}")[..12].to_string()
}

/// Word-by-word gloss over a bilingual lexicon.
#[derive(Debug, Clone, Default)]
pub struct GlossEngine {
    lexicon: Lexicon,
}

impl GlossEngine {
    pub fn new(lexicon: Lexicon) -> Self {
        GlossEngine { lexicon }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Ok(GlossEngine::new(Lexicon::from_file(path)?))
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }
}

/// Replaces each whitespace token with its highest-scoring lexicon target
/// (score ties go to the lexicographically first target). Lookup is on the
/// lowercased token with edge punctuation stripped; the stripped punctuation
/// is re-attached around the translation. Unknown tokens pass through.
pub fn gloss_translate(line: &str, lexicon: &Lexicon) -> String {
    let mut out: Vec<String> = Vec::new();
    for raw in line.split_whitespace() {
        let core = raw.trim_matches(|c: char| !c.is_alphanumeric());
        if core.is_empty() {
            out.push(raw.to_string());
            continue;
        }
        let key = core.to_lowercase();
        match lexicon.best_target(&key) {
            Some((tgt, _)) => {
                let start = raw.find(core).expect("core is a substring of raw");
                let (prefix, rest) = raw.split_at(start);
                let suffix = &rest[core.len()..];
                out.push(format!("{prefix}{tgt}{suffix}"));
            }
            None => out.push(raw.to_string()),
        }
    }
    out.join(" ")
}

impl LineTranslator for GlossEngine {
    fn identity(&self) -> String {
        format!("gloss-{}", short_hash(self.lexicon.to_tsv().as_bytes()))
    }

    fn translate_batch(&self, lines: &[String]) -> Result<Vec<String>> {
        Ok(lines
            .iter()
            .map(|l| gloss_translate(l, &self.lexicon))
            .collect())
    }
}

/// Exact-match translation memory with optional gloss fallback for misses.
/// Lookup normalizes whitespace runs on the source side; without a fallback,
/// misses pass through unchanged for the filter to reject.
#[derive(Debug, Clone, Default)]
pub struct MemoryEngine {
    table: BTreeMap<String, String>,
    fallback: Option<GlossEngine>,
}

fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl MemoryEngine {
    pub fn new(entries: impl IntoIterator<Item = (String, String)>) -> Self {
        let table = entries
            .into_iter()
            .map(|(s, t)| (normalize_ws(&s), t))
            .collect();
        MemoryEngine {
            table,
            fallback: None,
        }
    }

    /// TSV: `source<TAB>target` per line.
    pub fn from_file(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut entries = Vec::new();
        for (idx, line) in body.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (src, tgt) = line.split_once('\t').ok_or_else(|| Error::ParseFile {
                path: path.to_path_buf(),
                line: idx + 1,
                msg: "expected `source<TAB>target`".to_string(),
            })?;
            entries.push((src.to_string(), tgt.to_string()));
        }
        Ok(MemoryEngine::new(entries))
    }

    pub fn with_fallback(mut self, gloss: GlossEngine) -> Self {
        self.fallback = Some(gloss);
        self
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl LineTranslator for MemoryEngine {
    fn identity(&self) -> String {
        let mut body = String::new();
        for (s, t) in &self.table {
            body.push_str(s);
            body.push('\t');
            body.push_str(t);
            body.push('\n');
        }
        let fallback = self
            .fallback
            .as_ref()
            .map(|g| g.identity())
            .unwrap_or_else(|| "none".to_string());
        format!("memory-{}+{}", short_hash(body.as_bytes()), fallback)
    }

    fn translate_batch(&self, lines: &[String]) -> Result<Vec<String>> {
        lines
            .iter()
            .map(|line| match self.table.get(&normalize_ws(line)) {
                Some(t) => Ok(t.clone()),
                None => match &self.fallback {
                    Some(gloss) => Ok(gloss_translate(line, gloss.lexicon())),
                    None => Ok(line.clone()),
                },
            })
            .collect()
    }
}

/// Pipes the batch through an external program: one source line per stdin
/// line, one translation per stdout line, same order. The command string is
/// run through `sh -c`, so pipelines and arguments work.
#[derive(Debug, Clone)]
pub struct ExternalEngine {
    command: String,
}

impl ExternalEngine {
    pub fn new(command: impl Into<String>) -> Self {
        ExternalEngine {
            command: command.into(),
        }
    }
}

impl LineTranslator for ExternalEngine {
    fn identity(&self) -> String {
        format!("external-{}", short_hash(self.command.as_bytes()))
    }

    fn translate_batch(&self, lines: &[String]) -> Result<Vec<String>> {
        let engine = "external-command".to_string();
        let fail = |line: usize, msg: String| Error::Engine {
            engine: engine.clone(),
            line,
            msg,
        };

        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| fail(0, format!("failed to spawn {:?}: {e}", self.command)))?;

        let mut stdin = child.stdin.take().expect("stdin was piped");
        let payload: String = lines.iter().map(|l| format!("{l}\n")).collect();
        let writer = std::thread::spawn(move || stdin.write_all(payload.as_bytes()));

        let output = child
            .wait_with_output()
            .map_err(|e| fail(0, format!("failed to read output: {e}")))?;
        let _ = writer.join();

        let mut translated: Vec<String> =
            String::from_utf8_lossy(&output.stdout).lines().map(String::from).collect();
        if translated.len() < lines.len() {
            // The first line that got no translation.
            let line = translated.len();
            let status = if output.status.success() {
                "process ended early".to_string()
            } else {
                format!("process exited with {}", output.status)
            };
            return Err(fail(line, status));
        }
        if !output.status.success() {
            return Err(fail(
                lines.len().saturating_sub(1),
                format!("process exited with {}", output.status),
            ));
        }
        translated.truncate(lines.len());
        Ok(translated)
    }
}

/// The built-in engines behind one face.
pub enum Engine {
    Memory(MemoryEngine),
    Gloss(GlossEngine),
    External(ExternalEngine),
}

impl LineTranslator for Engine {
    fn identity(&self) -> String {
        match self {
            Engine::Memory(e) => e.identity(),
            Engine::Gloss(e) => e.identity(),
            Engine::External(e) => e.identity(),
        }
    }

    fn translate_batch(&self, lines: &[String]) -> Result<Vec<String>> {
        match self {
            Engine::Memory(e) => e.translate_batch(lines),
            Engine::Gloss(e) => e.translate_batch(lines),
            Engine::External(e) => e.translate_batch(lines),
        }
    }
}

/// On-disk translation cache: one TSV file per (engine identity, language
/// pair), `sha256(source)<TAB>translation` per line, append-only.
pub struct TranslationCache {
    path: PathBuf,
    map: BTreeMap<String, String>,
}

impl TranslationCache {
    pub fn open(
        dir: &Path,
        engine_identity: &str,
        source_lang: &LangCode,
        target_lang: &LangCode,
    ) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(format!("{source_lang}-{target_lang}.{engine_identity}.tsv"));
        let mut map = BTreeMap::new();
        if path.exists() {
            let body = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            for line in body.lines() {
                if let Some((k, v)) = line.split_once('\t') {
                    map.insert(k.to_string(), v.to_string());
                }
            }
        }
        Ok(TranslationCache { path, map })
    }

    fn key(line: &str) -> String {
        format!("{:x}", Sha256::digest(line.as_bytes()))
    }

    pub fn get(&self, line: &str) -> Option<&str> {
        self.map.get(&Self::key(line)).map(|s| s.as_str())
    }

    pub fn append(&mut self, entries: &[(String, String)]) -> Result<()> {
        if entries.is_empty() {
            return Ok(());
        }
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::io(&self.path, e))?;
        for (line, translation) in entries {
            let key = Self::key(line);
            writeln!(file, "{key}\t{translation}").map_err(|e| Error::io(&self.path, e))?;
            self.map.insert(key, translation.clone());
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Translates a request, serving lines from the cache where possible and
/// invoking the engine only for the misses. Empty lines translate to empty
/// lines without touching the engine.
pub fn translate_lines<T: LineTranslator>(
    req: &TranslationRequest,
    engine: &T,
    cache: Option<&mut TranslationCache>,
) -> Result<TranslationResult> {
    let mut lines: Vec<Option<String>> = vec![None; req.lines.len()];
    let mut missing: Vec<usize> = Vec::new();

    for (i, line) in req.lines.iter().enumerate() {
        if line.trim().is_empty() {
            lines[i] = Some(String::new());
        } else if let Some(cached) = cache.as_ref().and_then(|c| c.get(line)) {
            lines[i] = Some(cached.to_string());
        } else {
            missing.push(i);
        }
    }

    if !missing.is_empty() {
        let batch: Vec<String> = missing.iter().map(|&i| req.lines[i].clone()).collect();
        let translated = engine.translate_batch(&batch).map_err(|e| match e {
            // Engine errors index into the batch; report the request line.
            Error::Engine { engine, line, msg } => Error::Engine {
                engine,
                line: missing.get(line).copied().unwrap_or(line),
                msg,
            },
            other => other,
        })?;
        if translated.len() != batch.len() {
            return Err(Error::Engine {
                engine: engine.identity(),
                line: missing[translated.len().min(missing.len() - 1)],
                msg: format!("{} lines in, {} out", batch.len(), translated.len()),
            });
        }
        let new_entries: Vec<(String, String)> = batch
            .iter()
            .cloned()
            .zip(translated.iter().cloned())
            .collect();
        if let Some(cache) = cache {
            cache.append(&new_entries)?;
        }
        for (&i, t) in missing.iter().zip(translated) {
            lines[i] = Some(t);
        }
    }

    Ok(TranslationResult {
        lines: lines.into_iter().map(|l| l.expect("all lines filled")).collect(),
    })
}
