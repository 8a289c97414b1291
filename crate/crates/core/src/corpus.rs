//! Episode records, lexicon-driven preprocessing and bag-of-words vectors.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One podcast episode: the ASR transcript plus the author-provided metadata.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Episode {
    pub id: String,
    pub transcript: String,
    pub description: String,
    pub episode_title: String,
    pub show_title: String,
    pub show_description: String,
    pub category: String,
    pub show_id: String,
}

impl Episode {
    /// Description, episode title, show title, show description and category,
    /// space separated. Empty fields contribute nothing.
    pub fn extended_description(&self) -> String {
        [
            &self.description,
            &self.episode_title,
            &self.show_title,
            &self.show_description,
            &self.category,
        ]
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.as_str())
        .collect::<Vec<_>>()
        .join(" ")
    }
}

/// Parses line-delimited JSON episode records. Blank lines are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<Episode>> {
    let mut seen = HashSet::new();
    let mut episodes = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let episode: Episode = serde_json::from_str(line).map_err(|e| Error::MalformedLine {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if episode.id.is_empty() {
            return Err(Error::MalformedLine {
                line: idx + 1,
                message: "episode id is empty".into(),
            });
        }
        if !seen.insert(episode.id.clone()) {
            return Err(Error::DuplicateId(episode.id));
        }
        episodes.push(episode);
    }
    Ok(episodes)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<Episode>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text)
}

pub fn write_corpus<W: Write>(episodes: &[Episode], mut out: W) -> Result<()> {
    for e in episodes {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n").map_err(|e| Error::io("<corpus>", e))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pos {
    #[serde(rename = "ADJ")]
    Adj,
    #[serde(rename = "NOUN")]
    Noun,
    #[serde(rename = "VERB")]
    Verb,
    #[serde(rename = "OTHER")]
    Other,
}

impl Pos {
    pub fn is_content(self) -> bool {
        matches!(self, Pos::Adj | Pos::Noun | Pos::Verb)
    }
}

impl std::str::FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ADJ" => Ok(Pos::Adj),
            "NOUN" => Ok(Pos::Noun),
            "VERB" => Ok(Pos::Verb),
            "OTHER" => Ok(Pos::Other),
            other => Err(format!("unknown part of speech {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub lemma: String,
    pub pos: Pos,
}

/// Surface form to (lemma, part of speech) lookup table.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, LexEntry>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an entry, lowercasing both forms. Later inserts override.
    pub fn insert(&mut self, surface: &str, lemma: &str, pos: Pos) {
        self.entries.insert(
            surface.to_lowercase(),
            LexEntry {
                lemma: lemma.to_lowercase(),
                pos,
            },
        );
    }

    pub fn get(&self, surface: &str) -> Option<&LexEntry> {
        self.entries.get(surface)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(String, String, Pos)> for Lexicon {
    fn from_iter<I: IntoIterator<Item = (String, String, Pos)>>(iter: I) -> Self {
        let mut lex = Lexicon::new();
        for (s, l, p) in iter {
            lex.insert(&s, &l, p);
        }
        lex
    }
}

/// Parses a `surface_form<TAB>lemma<TAB>pos` file. An optional header row and
/// blank lines are skipped.
pub fn parse_lexicon(text: &str) -> Result<Lexicon> {
    let mut lex = Lexicon::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if idx == 0 && cols.first() == Some(&"surface_form") {
            continue;
        }
        let bad = |message: String| Error::MalformedLine {
            line: idx + 1,
            message,
        };
        if cols.len() != 3 {
            return Err(bad(format!("expected 3 columns, found {}", cols.len())));
        }
        let (surface, lemma) = (cols[0].trim(), cols[1].trim());
        if surface.is_empty() || lemma.is_empty() {
            return Err(bad("empty surface form or lemma".into()));
        }
        let pos: Pos = cols[2].trim().parse().map_err(bad)?;
        lex.insert(surface, lemma, pos);
    }
    Ok(lex)
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_lexicon(&text)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LexiconMode {
    /// Tokens absent from the lexicon are dropped.
    #[default]
    Strict,
    /// Tokens absent from the lexicon pass through unchanged.
    Permissive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub use_bigrams: bool,
    pub min_doc_freq: usize,
    pub max_doc_fraction: f64,
    pub lexicon_mode: LexiconMode,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            use_bigrams: false,
            min_doc_freq: 10,
            max_doc_fraction: 0.9,
            lexicon_mode: LexiconMode::Strict,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_doc_fraction > 0.0 && self.max_doc_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "max_doc_fraction must lie in (0, 1], got {}",
                self.max_doc_fraction
            )));
        }
        if self.min_doc_freq < 1 {
            return Err(Error::InvalidConfig("min_doc_freq must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessedDoc {
    pub id: String,
    pub tokens: Vec<String>,
}

/// Deletes everything that is not a letter or whitespace, splits on
/// whitespace, lowercases, keeps adjectives/nouns/verbs as lemmas and
/// optionally appends adjacent-lemma bigrams.
pub fn preprocess(text: &str, lexicon: &Lexicon, cfg: &PipelineConfig) -> Vec<String> {
    let cleaned: String = text
        .chars()
        .filter(|c| c.is_alphabetic() || c.is_whitespace())
        .collect();
    let mut tokens: Vec<String> = Vec::new();
    for raw in cleaned.split_whitespace() {
        let token = raw.to_lowercase();
        match lexicon.get(&token) {
            Some(entry) if entry.pos.is_content() => tokens.push(entry.lemma.clone()),
            Some(_) => {}
            None if cfg.lexicon_mode == LexiconMode::Permissive => tokens.push(token),
            None => {}
        }
    }
    if cfg.use_bigrams && tokens.len() > 1 {
        let bigrams: Vec<String> = tokens
            .windows(2)
            .map(|w| format!("{}_{}", w[0], w[1]))
            .collect();
        tokens.extend(bigrams);
    }
    tokens
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
struct TermRecord {
    term: String,
    doc_freq: usize,
}

#[derive(Serialize, Deserialize)]
struct DictionaryFile {
    num_docs: usize,
    terms: Vec<TermRecord>,
}

/// Pruned term vocabulary with dense ids in lexicographic term order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    term_to_id: HashMap<String, usize>,
    id_to_term: Vec<String>,
    doc_freq: Vec<usize>,
    num_docs: usize,
}

impl Dictionary {
    /// Counts document frequencies and drops terms occurring in fewer than
    /// `min_doc_freq` documents or in more than `max_doc_fraction` of them.
    pub fn build<T: AsRef<[String]> + Sync>(docs: &[T], cfg: &PipelineConfig) -> Result<Self> {
        cfg.validate()?;
        if docs.is_empty() {
            return Err(Error::NoDocuments);
        }
        let counts = docs
            .par_iter()
            .fold(BTreeMap::<String, usize>::new, |mut acc, doc| {
                let unique: BTreeSet<&String> = doc.as_ref().iter().collect();
                for term in unique {
                    *acc.entry(term.clone()).or_default() += 1;
                }
                acc
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (term, n) in b {
                    *a.entry(term).or_default() += n;
                }
                a
            });
        let num_docs = docs.len();
        let upper = cfg.max_doc_fraction * num_docs as f64;
        let retained: Vec<(String, usize)> = counts
            .into_iter()
            .filter(|(_, df)| *df >= cfg.min_doc_freq && (*df as f64) <= upper)
            .collect();
        if retained.is_empty() {
            return Err(Error::EmptyDictionary);
        }
        Ok(Self::from_sorted(retained, num_docs))
    }

    fn from_sorted(terms: Vec<(String, usize)>, num_docs: usize) -> Self {
        let mut term_to_id = HashMap::with_capacity(terms.len());
        let mut id_to_term = Vec::with_capacity(terms.len());
        let mut doc_freq = Vec::with_capacity(terms.len());
        for (id, (term, df)) in terms.into_iter().enumerate() {
            term_to_id.insert(term.clone(), id);
            id_to_term.push(term);
            doc_freq.push(df);
        }
        Self {
            term_to_id,
            id_to_term,
            doc_freq,
            num_docs,
        }
    }

    pub fn len(&self) -> usize {
        self.id_to_term.len()
    }

    pub fn is_empty(&self) -> bool {
        self.id_to_term.is_empty()
    }

    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.term_to_id.get(term).copied()
    }

    pub fn term(&self, id: usize) -> Option<&str> {
        self.id_to_term.get(id).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.id_to_term
    }

    pub fn doc_freq(&self, id: usize) -> usize {
        self.doc_freq[id]
    }

    /// Terms that are single words (bigram terms excluded).
    pub fn unigram_terms(&self) -> Vec<String> {
        self.id_to_term
            .iter()
            .filter(|t| !t.contains('_'))
            .cloned()
            .collect()
    }

    /// Counts in-dictionary terms; unknown terms are dropped.
    pub fn vectorize(&self, tokens: &[String]) -> BowVector {
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        for t in tokens {
            if let Some(id) = self.id(t) {
                *counts.entry(id).or_default() += 1;
            }
        }
        BowVector {
            entries: counts.into_iter().collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let file = DictionaryFile {
            num_docs: self.num_docs,
            terms: self
                .id_to_term
                .iter()
                .zip(&self.doc_freq)
                .map(|(t, &df)| TermRecord {
                    term: t.clone(),
                    doc_freq: df,
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DictionaryFile =
            serde_json::from_str(text).map_err(|e| Error::CorruptDictionary(e.to_string()))?;
        let mut seen = HashSet::new();
        for rec in &file.terms {
            if rec.term.is_empty() {
                return Err(Error::CorruptDictionary("empty term".into()));
            }
            if !seen.insert(rec.term.as_str()) {
                return Err(Error::CorruptDictionary(format!(
                    "duplicate term {:?}",
                    rec.term
                )));
            }
            if rec.doc_freq > file.num_docs {
                return Err(Error::CorruptDictionary(format!(
                    "doc_freq of {:?} exceeds num_docs",
                    rec.term
                )));
            }
        }
        let terms = file.terms.into_iter().map(|r| (r.term, r.doc_freq)).collect();
        Ok(Self::from_sorted(terms, file.num_docs))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// Sparse term counts, ids strictly increasing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BowVector {
    pub entries: Vec<(usize, u32)>,
}

impl BowVector {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(_, c)| c as u64).sum()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.entries.binary_search_by_key(&id, |&(i, _)| i).is_ok()
    }
}
