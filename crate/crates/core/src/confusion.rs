//! Word alignment and the word-level ASR confusion model.
//!
//! Reference/hypothesis pairs are aligned by minimum word edit distance.
//! Every substitution increments `count(ref_word -> candidate)`, where the
//! candidate absorbs any run of insertions that directly follows it (so
//! `nogensinde -> nogen sinde` becomes one two-word candidate). The
//! conditional distribution over candidates of a word is its counts
//! normalised by their sum.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlignmentOp {
    Match(String),
    Substitute { reference: String, hypothesis: String },
    Insert(String),
    Delete(String),
}

impl AlignmentOp {
    pub fn cost(&self) -> usize {
        match self {
            AlignmentOp::Match(_) => 0,
            _ => 1,
        }
    }
}

/// `table[i][j]` is the edit distance between `reference[i..]` and
/// `hypothesis[j..]`.
fn suffix_distances<S: AsRef<str>>(reference: &[S], hypothesis: &[S]) -> Vec<Vec<usize>> {
    let (n, m) = (reference.len(), hypothesis.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            d[i][j] = if i == n {
                m - j
            } else if j == m {
                n - i
            } else {
                let diag = d[i + 1][j + 1]
                    + usize::from(reference[i].as_ref() != hypothesis[j].as_ref());
                diag.min(d[i + 1][j] + 1).min(d[i][j + 1] + 1)
            };
        }
    }
    d
}

pub fn edit_distance<S: AsRef<str>>(reference: &[S], hypothesis: &[S]) -> usize {
    suffix_distances(reference, hypothesis)[0][0]
}

/// Minimum-cost word alignment with unit costs. Among optimal alignments the
/// one chosen prefers, from left to right, match, then substitute, then
/// delete, then insert.
pub fn align<S: AsRef<str>>(reference: &[S], hypothesis: &[S]) -> Vec<AlignmentOp> {
    let d = suffix_distances(reference, hypothesis);
    let (n, m) = (reference.len(), hypothesis.len());
    let (mut i, mut j) = (0, 0);
    let mut ops = Vec::with_capacity(n.max(m));
    while i < n || j < m {
        let here = d[i][j];
        if i < n && j < m {
            let (r, h) = (reference[i].as_ref(), hypothesis[j].as_ref());
            if r == h && d[i + 1][j + 1] == here {
                ops.push(AlignmentOp::Match(r.to_string()));
                i += 1;
                j += 1;
                continue;
            }
            if r != h && d[i + 1][j + 1] + 1 == here {
                ops.push(AlignmentOp::Substitute {
                    reference: r.to_string(),
                    hypothesis: h.to_string(),
                });
                i += 1;
                j += 1;
                continue;
            }
        }
        if i < n && d[i + 1][j] + 1 == here {
            ops.push(AlignmentOp::Delete(reference[i].as_ref().to_string()));
            i += 1;
        } else {
            ops.push(AlignmentOp::Insert(hypothesis[j].as_ref().to_string()));
            j += 1;
        }
    }
    ops
}

/// `(reference word, candidate)` events of one alignment, insert runs merged
/// into the preceding substitution.
pub fn substitution_events(ops: &[AlignmentOp]) -> Vec<(String, String)> {
    let mut events = Vec::new();
    let mut idx = 0;
    while idx < ops.len() {
        if let AlignmentOp::Substitute {
            reference,
            hypothesis,
        } = &ops[idx]
        {
            let mut candidate = hypothesis.clone();
            idx += 1;
            while let Some(AlignmentOp::Insert(word)) = ops.get(idx) {
                candidate.push(' ');
                candidate.push_str(word);
                idx += 1;
            }
            events.push((reference.clone(), candidate));
        } else {
            idx += 1;
        }
    }
    events
}

pub type TokenPair = (Vec<String>, Vec<String>);

#[derive(Debug, Clone, PartialEq, Eq)]
struct CandidateList {
    /// Descending count, then ascending candidate.
    entries: Vec<(String, u64)>,
    total: u64,
}

impl CandidateList {
    fn from_counts(counts: BTreeMap<String, u64>) -> Self {
        let mut entries: Vec<(String, u64)> = counts.into_iter().collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let total = entries.iter().map(|e| e.1).sum();
        Self { entries, total }
    }
}

/// Word-level substitution counts learned from aligned transcript pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfusionModel {
    table: BTreeMap<String, CandidateList>,
    total_pairs: u64,
}

/// Result of drawing a replacement for one word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Draw<'a> {
    /// Space-joined candidate word sequence.
    Replace(&'a str),
    /// The word is unknown to the model and is removed.
    Delete,
}

impl ConfusionModel {
    pub fn from_counts(counts: BTreeMap<String, BTreeMap<String, u64>>, total_pairs: u64) -> Self {
        let table = counts
            .into_iter()
            .filter(|(_, c)| !c.is_empty())
            .map(|(w, c)| (w, CandidateList::from_counts(c)))
            .collect();
        Self { table, total_pairs }
    }

    pub fn counts(&self) -> BTreeMap<String, BTreeMap<String, u64>> {
        self.table
            .iter()
            .map(|(w, list)| (w.clone(), list.entries.iter().cloned().collect()))
            .collect()
    }

    /// Aligns every pair and counts substitution events. Counting is a sum,
    /// so the result does not depend on pair order.
    pub fn accumulate(pairs: &[TokenPair]) -> Self {
        let counts = pairs
            .par_iter()
            .fold(BTreeMap::new, |mut acc: BTreeMap<String, BTreeMap<String, u64>>, (r, h)| {
                for (word, cand) in substitution_events(&align(r, h)) {
                    *acc.entry(word).or_default().entry(cand).or_default() += 1;
                }
                acc
            })
            .reduce(BTreeMap::new, merge_counts);
        Self::from_counts(counts, pairs.len() as u64)
    }

    pub fn merge(&self, other: &ConfusionModel) -> Self {
        Self::from_counts(
            merge_counts(self.counts(), other.counts()),
            self.total_pairs + other.total_pairs,
        )
    }

    pub fn total_pairs(&self) -> u64 {
        self.total_pairs
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.table.contains_key(word)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.table.keys().map(String::as_str)
    }

    /// Candidates with counts in sampling order.
    pub fn candidates(&self, word: &str) -> Option<&[(String, u64)]> {
        self.table.get(word).map(|l| l.entries.as_slice())
    }

    /// `P(candidate | word) = count / sum of counts over the word's candidates`.
    pub fn candidate_distribution(&self, word: &str) -> Result<Vec<(String, f64)>> {
        let list = self
            .table
            .get(word)
            .ok_or_else(|| Error::UnknownWord(word.to_string()))?;
        let total = list.total as f64;
        Ok(list
            .entries
            .iter()
            .map(|(c, n)| (c.clone(), *n as f64 / total))
            .collect())
    }

    /// Inverse-CDF draw over the candidates of `word`; unknown words yield
    /// [`Draw::Delete`].
    pub fn sample_candidate<R: Rng + ?Sized>(&self, word: &str, rng: &mut R) -> Draw<'_> {
        let Some(list) = self.table.get(word) else {
            return Draw::Delete;
        };
        let mut r = rng.random_range(0..list.total);
        for (cand, n) in &list.entries {
            if r < *n {
                return Draw::Replace(cand);
            }
            r -= n;
        }
        unreachable!("draw below total always lands on a candidate")
    }

    /// Fraction of `tokens` that have no entry in the model.
    pub fn unknown_fraction<S: AsRef<str>>(&self, tokens: &[S]) -> f64 {
        if tokens.is_empty() {
            return 0.0;
        }
        let unknown = tokens.iter().filter(|t| !self.contains(t.as_ref())).count();
        unknown as f64 / tokens.len() as f64
    }
}

fn merge_counts(
    mut a: BTreeMap<String, BTreeMap<String, u64>>,
    b: BTreeMap<String, BTreeMap<String, u64>>,
) -> BTreeMap<String, BTreeMap<String, u64>> {
    for (word, cands) in b {
        let slot = a.entry(word).or_default();
        for (c, n) in cands {
            *slot.entry(c).or_default() += n;
        }
    }
    a
}

#[derive(Serialize, Deserialize)]
struct CandidateRecord {
    candidate: String,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct ConfusionFile {
    total_pairs: u64,
    table: BTreeMap<String, Vec<CandidateRecord>>,
}

impl ConfusionModel {
    pub fn to_json(&self) -> Result<String> {
        let file = ConfusionFile {
            total_pairs: self.total_pairs,
            table: self
                .table
                .iter()
                .map(|(w, list)| {
                    let recs = list
                        .entries
                        .iter()
                        .map(|(c, n)| CandidateRecord {
                            candidate: c.clone(),
                            count: *n,
                        })
                        .collect();
                    (w.clone(), recs)
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConfusionFile =
            serde_json::from_str(text).map_err(|e| Error::CorruptConfusion(e.to_string()))?;
        let mut counts = BTreeMap::new();
        for (word, recs) in file.table {
            if word.is_empty() || word.split_whitespace().count() != 1 || word.trim() != word {
                return Err(Error::CorruptConfusion(format!("invalid word {word:?}")));
            }
            if recs.is_empty() {
                return Err(Error::CorruptConfusion(format!("{word:?} has no candidates")));
            }
            let mut cands = BTreeMap::new();
            for rec in recs {
                let canonical = rec.candidate.split_whitespace().collect::<Vec<_>>().join(" ");
                if canonical.is_empty() || canonical != rec.candidate {
                    return Err(Error::CorruptConfusion(format!(
                        "invalid candidate {:?} for {word:?}",
                        rec.candidate
                    )));
                }
                if rec.candidate == word {
                    return Err(Error::CorruptConfusion(format!("{word:?} lists itself")));
                }
                if rec.count == 0 {
                    return Err(Error::CorruptConfusion(format!("zero count under {word:?}")));
                }
                if cands.insert(rec.candidate, rec.count).is_some() {
                    return Err(Error::CorruptConfusion(format!(
                        "duplicate candidate under {word:?}"
                    )));
                }
            }
            if cands.values().try_fold(0u64, |acc, &n| acc.checked_add(n)).is_none() {
                return Err(Error::CorruptConfusion(format!("count overflow under {word:?}")));
            }
            counts.insert(word, cands);
        }
        Ok(Self::from_counts(counts, file.total_pairs))
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

#[derive(Deserialize)]
struct PairRecord {
    #[serde(rename = "ref")]
    reference: String,
    hyp: String,
}

pub fn tokenize_lower(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_lowercase).collect()
}

/// Parses `{"ref": ..., "hyp": ...}` lines into lowercase token pairs.
pub fn parse_pairs(text: &str) -> Result<Vec<TokenPair>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: PairRecord = serde_json::from_str(line).map_err(|e| Error::MalformedLine {
            line: idx + 1,
            message: e.to_string(),
        })?;
        out.push((tokenize_lower(&rec.reference), tokenize_lower(&rec.hyp)));
    }
    Ok(out)
}

pub fn load_pairs(path: impl AsRef<Path>) -> Result<Vec<TokenPair>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_pairs(&text)
}
