//! Compositions of the morphisms ρ_n and γ_n.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::generators::morphism::Morphism;
use crate::generators::CancelToken;
use crate::word::{Symbol, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kappa {
    /// 0 ↦ 0·1^{n+1}, 1 ↦ 0·1^n
    Rho(u32),
    /// 0 ↦ 1·0^{n+1}, 1 ↦ 1·0^n
    Gamma(u32),
}

impl Kappa {
    pub fn index(self) -> u32 {
        match self {
            Kappa::Rho(n) | Kappa::Gamma(n) => n,
        }
    }

    pub fn morphism(self) -> Morphism {
        match self {
            Kappa::Rho(n) => Morphism::rho(n),
            Kappa::Gamma(n) => Morphism::gamma(n),
        }
        .expect("index validated on construction")
    }

    /// The symbol that starts every block of this morphism's images.
    fn marker(self) -> Symbol {
        match self {
            Kappa::Rho(_) => b'0',
            Kappa::Gamma(_) => b'1',
        }
    }

    /// `(|φ∘κ(0)|, |φ∘κ(1)|)` from `(|φ(0)|, |φ(1)|)`.
    fn lengths(self, l0: &BigUint, l1: &BigUint) -> (BigUint, BigUint) {
        let n = BigUint::from(self.index());
        match self {
            Kappa::Rho(_) => (l0 + (&n + 1u32) * l1, l0 + &n * l1),
            Kappa::Gamma(_) => (l1 + (&n + 1u32) * l0, l1 + &n * l0),
        }
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Rho(n) => write!(f, "r{n}"),
            Kappa::Gamma(n) => write!(f, "g{n}"),
        }
    }
}

impl FromStr for Kappa {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, idx) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let n: u32 = idx
            .parse()
            .map_err(|_| Error::Parse(format!("kappa entry {s:?}: expected r<n> or g<n>")))?;
        if n < 1 {
            return Err(Error::InvalidIndex(n));
        }
        match kind {
            "r" | "ρ" => Ok(Kappa::Rho(n)),
            "g" | "γ" => Ok(Kappa::Gamma(n)),
            _ => Err(Error::Parse(format!("kappa entry {s:?}: expected r<n> or g<n>"))),
        }
    }
}

/// κ_1, κ_2, ..., κ_K; words are images under the composition κ_1∘⋯∘κ_K.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KappaSequence {
    entries: Vec<Kappa>,
}

impl KappaSequence {
    pub fn new(entries: Vec<Kappa>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Parse("kappa sequence must be nonempty".into()));
        }
        if let Some(k) = entries.iter().find(|k| k.index() < 1) {
            return Err(Error::InvalidIndex(k.index()));
        }
        Ok(KappaSequence { entries })
    }

    /// ρ_1 followed by `levels - 1` copies of γ_1. Its limit word generates the
    /// Sturmian subshift of angle [0; (1)]; the agreement is checked against
    /// the rotation coding in the test suite.
    pub fn golden(levels: usize) -> Self {
        let mut entries = vec![Kappa::Rho(1)];
        entries.extend(std::iter::repeat_n(Kappa::Gamma(1), levels.saturating_sub(1)));
        KappaSequence { entries }
    }

    pub fn entries(&self) -> &[Kappa] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(|κ_1⋯κ_k(0)|, |κ_1⋯κ_k(1)|)` for `k = 1..=K`.
    pub fn image_lengths(&self) -> Vec<(BigUint, BigUint)> {
        let mut l = (BigUint::one(), BigUint::one());
        self.entries
            .iter()
            .map(|k| {
                l = k.lengths(&l.0, &l.1);
                l.clone()
            })
            .collect()
    }

    /// `κ_1⋯κ_k(a)` in full. Lengths grow geometrically; keep `k` small.
    pub fn image(&self, k: usize, a: Symbol) -> Result<Word> {
        self.image_truncated(k, a, usize::MAX, &CancelToken::new())
    }

    /// Prefix of length at most `limit` of `κ_1⋯κ_k(a)`, built from the
    /// innermost morphism outwards and truncating at every level.
    pub(crate) fn image_truncated(&self, k: usize, a: Symbol, limit: usize, cancel: &CancelToken) -> Result<Word> {
        if k == 0 || k > self.len() {
            return Err(Error::OutOfRange { index: k, len: self.len() });
        }
        let mut w = Word::from_symbols(vec![a]);
        for kappa in self.entries[..k].iter().rev() {
            cancel.check()?;
            w = kappa.morphism().apply_truncated(&w, limit)?;
        }
        Ok(w)
    }

    /// `|κ_1⋯κ_k(0)| / |κ_1⋯κ_k(1)|`.
    pub fn length_ratio(&self, k: usize) -> Result<BigRational> {
        if k == 0 || k > self.len() {
            return Err(Error::OutOfRange { index: k, len: self.len() });
        }
        let (l0, l1) = self.image_lengths().swap_remove(k - 1);
        Ok(BigRational::new(l0.into(), l1.into()))
    }

    pub(crate) fn prefix(&self, length: usize, cancel: &CancelToken) -> Result<Word> {
        let (l0, _) = self.image_lengths().pop().expect("nonempty");
        if l0 < BigUint::from(length) {
            return Err(Error::SequenceTooShort {
                requested: length,
                reachable: l0.to_string(),
            });
        }
        self.image_truncated(self.len(), b'0', length, cancel)
    }

    /// Reachable prefix length, saturating at `usize::MAX`.
    pub fn reach(&self) -> usize {
        let (l0, _) = self.image_lengths().pop().expect("nonempty");
        l0.to_usize().unwrap_or(usize::MAX)
    }
}

impl fmt::Display for KappaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(Kappa::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for KappaSequence {
    type Err = Error;

    /// `r1,r1,g2`.
    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Kappa>>>()?;
        KappaSequence::new(entries)
    }
}

/// One block of a decomposition `text = ... κ(z_i) κ(z_{i+1}) ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub start: usize,
    pub symbol: Symbol,
}

/// Parses `text` into images of `kappa`: every block starts at a marker
/// symbol and its length identifies the preimage symbol. The partial block
/// before the first marker and the one after the last marker are dropped.
pub fn desubstitute(text: &[Symbol], kappa: Kappa) -> Result<Vec<Block>> {
    let marker = kappa.marker();
    let n = kappa.index() as usize;
    let starts: Vec<usize> = text
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == marker)
        .map(|(i, _)| i)
        .collect();
    starts
        .windows(2)
        .map(|w| {
            let symbol = match w[1] - w[0] {
                len if len == n + 2 => b'0',
                len if len == n + 1 => b'1',
                len => {
                    return Err(Error::Domain(format!(
                        "block of length {len} at {} is not an image of {kappa}",
                        w[0]
                    )))
                }
            };
            Ok(Block { start: w[0], symbol })
        })
        .collect()
}
