//! Finite words over a byte alphabet, occurrence scanning and return words.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symbols are single bytes; the presets use `b'0'` and `b'1'`.
pub type Symbol = u8;

/// An ordered set of at least two distinct symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Result<Self> {
        let symbols: Vec<Symbol> = symbols.into_iter().collect();
        let distinct: BTreeSet<Symbol> = symbols.iter().copied().collect();
        if distinct.len() != symbols.len() {
            return Err(Error::InvalidAlphabet("repeated symbol".into()));
        }
        if symbols.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 symbols, got {}",
                symbols.len()
            )));
        }
        Ok(Alphabet { symbols })
    }

    pub fn binary() -> Self {
        Alphabet {
            symbols: vec![b'0', b'1'],
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.symbols.contains(&s)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// A finite word. Dereferences to its symbol slice.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn extend_from_slice(&mut self, s: &[Symbol]) {
        self.0.extend_from_slice(s);
    }

    pub fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    /// The factor `self[start..start + len]`.
    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.0.len())].to_vec())
    }

    pub fn concat(&self, other: &[Symbol]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.0.iter().filter(|&&c| c == s).count()
    }
}

impl Deref for Word {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.as_bytes().to_vec())
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if !s.is_ascii() {
            return Err(Error::Parse(format!("word {s:?} contains non-ASCII symbols")));
        }
        Ok(Word(s.as_bytes().to_vec()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // symbols are ASCII by construction from text; other bytes print as escapes
        for &b in &self.0 {
            if b.is_ascii_graphic() {
                write!(f, "{}", b as char)?;
            } else {
                write!(f, "\\x{b:02x}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// All start positions of `pattern` in `text`, overlaps included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccurrenceList {
    pub pattern: Word,
    pub text_len: usize,
    pub positions: Vec<usize>,
}

impl OccurrenceList {
    /// Differences between consecutive positions.
    pub fn gaps(&self) -> impl Iterator<Item = usize> + '_ {
        self.positions.windows(2).map(|w| w[1] - w[0])
    }

    pub fn min_gap(&self) -> Option<usize> {
        self.gaps().min()
    }
}

fn failure_function(pattern: &[Symbol]) -> Vec<usize> {
    let mut fail = vec![0usize; pattern.len()];
    let mut k = 0;
    for i in 1..pattern.len() {
        while k > 0 && pattern[i] != pattern[k] {
            k = fail[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// Knuth–Morris–Pratt scan, calling `hit` with each start position in order.
pub(crate) fn scan(pattern: &[Symbol], text: &[Symbol], mut hit: impl FnMut(usize)) {
    let m = pattern.len();
    if m == 0 || m > text.len() {
        return;
    }
    let fail = failure_function(pattern);
    let mut k = 0;
    for (i, &c) in text.iter().enumerate() {
        while k > 0 && c != pattern[k] {
            k = fail[k - 1];
        }
        if c == pattern[k] {
            k += 1;
        }
        if k == m {
            hit(i + 1 - m);
            k = fail[k - 1];
        }
    }
}

pub fn occurrences(pattern: &[Symbol], text: &[Symbol]) -> Result<OccurrenceList> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let mut positions = Vec::new();
    scan(pattern, text, |p| positions.push(p));
    Ok(OccurrenceList {
        pattern: Word::from(pattern),
        text_len: text.len(),
        positions,
    })
}

/// Smallest distance between two consecutive occurrences, or `None` when the
/// pattern occurs fewer than twice. Does not allocate the position list.
pub(crate) fn min_gap(pattern: &[Symbol], text: &[Symbol]) -> (Option<usize>, usize) {
    let mut last: Option<usize> = None;
    let mut best: Option<usize> = None;
    let mut count = 0;
    scan(pattern, text, |p| {
        count += 1;
        if let Some(q) = last {
            let g = p - q;
            best = Some(best.map_or(g, |b: usize| b.min(g)));
        }
        last = Some(p);
    });
    (best, count)
}

fn two_occurrences(pattern: &[Symbol], text: &[Symbol]) -> Result<OccurrenceList> {
    let occ = occurrences(pattern, text)?;
    if occ.positions.len() < 2 {
        return Err(Error::InsufficientWindow {
            factor: Word::from(pattern).to_string(),
            found: occ.positions.len(),
            window: text.len(),
        });
    }
    Ok(occ)
}

/// Return words to `u` read off consecutive occurrences in `text`, with how
/// often each one was seen.
pub fn return_word_counts(u: &[Symbol], text: &[Symbol]) -> Result<BTreeMap<Word, usize>> {
    let occ = two_occurrences(u, text)?;
    let mut table = BTreeMap::new();
    for w in occ.positions.windows(2) {
        *table.entry(Word::from(&text[w[0]..w[1]])).or_insert(0) += 1;
    }
    Ok(table)
}

pub fn return_words(u: &[Symbol], text: &[Symbol]) -> Result<BTreeSet<Word>> {
    Ok(return_word_counts(u, text)?.into_keys().collect())
}

/// Length of the shortest return word to `u` visible in `text`.
pub fn min_return_length(u: &[Symbol], text: &[Symbol]) -> Result<usize> {
    if u.is_empty() {
        return Err(Error::EmptyPattern);
    }
    match min_gap(u, text) {
        (Some(g), _) => Ok(g),
        (None, found) => Err(Error::InsufficientWindow {
            factor: Word::from(u).to_string(),
            found,
            window: text.len(),
        }),
    }
}
