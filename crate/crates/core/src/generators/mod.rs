//! Infinite words under study, materialised as finite prefixes that can be
//! regenerated at any length.

mod kappa;
mod morphism;
mod sturmian;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_rational::BigRational;

pub use kappa::{desubstitute, Block, Kappa, KappaSequence};
pub use morphism::Morphism;
pub use sturmian::RotationCoder;

use crate::cont_frac::{quadratic_of_cf, CfExpansion};
use crate::error::{Error, Result};
use crate::quadratic::QuadraticReal;
use crate::word::{Symbol, Word};

/// Shared flag a caller can set to stop a long generation.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.is_cancelled() {
            Err(Error::Cancelled)
        } else {
            Ok(())
        }
    }
}

/// How to (re)build a word of any requested length.
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum WordSource {
    FixedPoint { morphism: Morphism, seed: Symbol },
    Kappa(KappaSequence),
    /// `0·c_α` from the standard-word recurrence.
    Standard(CfExpansion),
    /// Coding of the orbit of `t0`; `cf` is kept for reporting when known.
    Rotation {
        alpha: QuadraticReal,
        t0: QuadraticReal,
        cf: Option<CfExpansion>,
    },
    /// `uuu...`
    Periodic(Word),
    /// A fixed text; cannot grow.
    Text(Word),
    /// The source shifted left by `by` symbols.
    Shifted { inner: Box<WordSource>, by: usize },
}

impl WordSource {
    pub fn generate(&self, length: usize) -> Result<Word> {
        self.generate_cancellable(length, &CancelToken::new())
    }

    pub fn generate_cancellable(&self, length: usize, cancel: &CancelToken) -> Result<Word> {
        match self {
            WordSource::FixedPoint { morphism, seed } => morphism.fixed_point(*seed, length, cancel),
            WordSource::Kappa(ks) => ks.prefix(length, cancel),
            WordSource::Standard(cf) => sturmian::standard_word(cf, length, cancel),
            WordSource::Rotation { alpha, t0, .. } => RotationCoder::new(alpha, t0)?.prefix(length, cancel),
            WordSource::Periodic(u) => {
                if u.is_empty() {
                    return Err(Error::EmptyPattern);
                }
                Ok(Word::from_symbols(u.iter().copied().cycle().take(length).collect()))
            }
            WordSource::Text(t) => {
                if length > t.len() {
                    return Err(Error::NotExtendable {
                        requested: length,
                        available: t.len(),
                    });
                }
                Ok(t.prefix(length))
            }
            WordSource::Shifted { inner, by } => {
                let w = inner.generate_cancellable(length + by, cancel)?;
                Ok(Word::from(&w[*by..]))
            }
        }
    }

    /// Largest length this source can produce, `None` when unbounded.
    pub fn max_len(&self) -> Option<usize> {
        match self {
            WordSource::Text(t) => Some(t.len()),
            WordSource::Kappa(ks) => Some(ks.reach()),
            WordSource::Standard(cf) if !cf.is_periodic() => Some(standard_reach(cf)),
            WordSource::Shifted { inner, by } => inner.max_len().map(|m| m.saturating_sub(*by)),
            _ => None,
        }
    }
}

impl fmt::Display for WordSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordSource::FixedPoint { morphism, seed } => {
                write!(f, "fixed-point morphism={morphism} seed={}", *seed as char)
            }
            WordSource::Kappa(ks) => write!(f, "kappa sequence={ks}"),
            WordSource::Standard(cf) => write!(f, "standard cf={cf}"),
            WordSource::Rotation { alpha, t0, cf } => match cf {
                Some(cf) => write!(f, "rotation cf={cf} t0={t0}"),
                None => write!(f, "rotation alpha={alpha} t0={t0}"),
            },
            WordSource::Periodic(u) => write!(f, "periodic period={u}"),
            WordSource::Text(t) => write!(f, "text length={}", t.len()),
            WordSource::Shifted { inner, by } => write!(f, "shift by={by} of {inner}"),
        }
    }
}

/// `1 + |s_k|` for the last level `k` a finite expansion reaches.
fn standard_reach(cf: &CfExpansion) -> usize {
    let Some(a1) = cf.coefficient(1) else {
        return 1;
    };
    let (mut prev, mut cur) = (1usize, a1 as usize);
    let mut k = 2;
    while let Some(a) = cf.coefficient(k) {
        let next = cur.saturating_mul(a as usize).saturating_add(prev);
        prev = cur;
        cur = next;
        k += 1;
    }
    cur.saturating_add(1)
}

/// A prefix of an infinite word together with the recipe that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedWord {
    pub prefix: Word,
    pub source: WordSource,
}

impl GeneratedWord {
    pub fn from_source(source: WordSource, length: usize) -> Result<Self> {
        let prefix = source.generate(length)?;
        Ok(GeneratedWord { prefix, source })
    }

    /// A fixed text that cannot be extended.
    pub fn from_text(text: Word) -> Self {
        GeneratedWord {
            prefix: text.clone(),
            source: WordSource::Text(text),
        }
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    /// The same word regenerated to `length` symbols.
    pub fn extended(&self, length: usize) -> Result<GeneratedWord> {
        if length <= self.prefix.len() {
            return Ok(self.clone());
        }
        GeneratedWord::from_source(self.source.clone(), length)
    }

    /// At least `length` symbols of this word, borrowing when the stored
    /// prefix already suffices.
    pub fn symbols_upto(&self, length: usize) -> Result<std::borrow::Cow<'_, [Symbol]>> {
        if length <= self.prefix.len() {
            Ok(std::borrow::Cow::Borrowed(&self.prefix[..]))
        } else {
            Ok(std::borrow::Cow::Owned(self.source.generate(length)?.into_inner()))
        }
    }

    /// `S x`: drop the first symbol.
    pub fn shift(&self) -> GeneratedWord {
        let source = match &self.source {
            WordSource::Shifted { inner, by } => WordSource::Shifted {
                inner: inner.clone(),
                by: by + 1,
            },
            other => WordSource::Shifted {
                inner: Box::new(other.clone()),
                by: 1,
            },
        };
        GeneratedWord {
            prefix: Word::from(self.prefix.get(1..).unwrap_or(&[])),
            source,
        }
    }
}

pub fn rho(n: u32) -> Result<Morphism> {
    Morphism::rho(n)
}

pub fn gamma(n: u32) -> Result<Morphism> {
    Morphism::gamma(n)
}

pub fn apply(m: &Morphism, w: &[Symbol]) -> Result<Word> {
    m.apply(w)
}

/// Prefix of the fixed point of `m` starting with `seed`.
pub fn fixed_point_prefix(m: &Morphism, seed: Symbol, length: usize) -> Result<GeneratedWord> {
    GeneratedWord::from_source(
        WordSource::FixedPoint {
            morphism: m.clone(),
            seed,
        },
        length,
    )
}

/// Prefix of `κ_1⋯κ_K(000...)` where `K = |ks|`; requires `|κ_1⋯κ_K(0)| ≥ length`.
pub fn kappa_prefix(ks: &KappaSequence, length: usize) -> Result<GeneratedWord> {
    GeneratedWord::from_source(WordSource::Kappa(ks.clone()), length)
}

pub fn length_ratio(ks: &KappaSequence, k: usize) -> Result<BigRational> {
    ks.length_ratio(k)
}

pub fn standard_word_prefix(cf: &CfExpansion, length: usize) -> Result<GeneratedWord> {
    GeneratedWord::from_source(WordSource::Standard(cf.clone()), length)
}

pub fn rotation_coding_prefix(alpha: &QuadraticReal, t0: &QuadraticReal, length: usize) -> Result<GeneratedWord> {
    GeneratedWord::from_source(
        WordSource::Rotation {
            alpha: alpha.clone(),
            t0: t0.clone(),
            cf: None,
        },
        length,
    )
}

/// Named words used by the command line and the test suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Fixed point of 0 ↦ 01, 1 ↦ 10.
    ThueMorse,
    /// Standard word of `[0; (1)]`, equal to the golden rotation coding at 0.
    Fibonacci,
    /// Standard word of `[0; (2)]`.
    Silver,
    /// `(01)^∞`.
    Periodic01,
    /// Standard word of `[0; 1, 2, ..., 30]`.
    UnboundedCf,
    /// ρ_1 γ_1 γ_1 ⋯ (40 levels).
    KappaGolden,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::ThueMorse,
        Preset::Fibonacci,
        Preset::Silver,
        Preset::Periodic01,
        Preset::UnboundedCf,
        Preset::KappaGolden,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::ThueMorse => "thue-morse",
            Preset::Fibonacci => "fibonacci",
            Preset::Silver => "silver",
            Preset::Periodic01 => "periodic01",
            Preset::UnboundedCf => "unbounded-cf",
            Preset::KappaGolden => "kappa-golden",
        }
    }

    /// `[0; 1, 2, ..., terms]`.
    pub fn unbounded_cf(terms: u64) -> CfExpansion {
        CfExpansion::finite((1..=terms).collect()).expect("coefficients are positive")
    }

    pub fn source(self) -> WordSource {
        match self {
            Preset::ThueMorse => WordSource::FixedPoint {
                morphism: Morphism::thue_morse(),
                seed: b'0',
            },
            Preset::Fibonacci => WordSource::Standard(CfExpansion::golden()),
            Preset::Silver => WordSource::Standard(CfExpansion::silver()),
            Preset::Periodic01 => WordSource::Periodic(Word::from("01")),
            Preset::UnboundedCf => WordSource::Standard(Self::unbounded_cf(30)),
            Preset::KappaGolden => WordSource::Kappa(KappaSequence::golden(40)),
        }
    }

    pub fn generate(self, length: usize) -> Result<GeneratedWord> {
        GeneratedWord::from_source(self.source(), length)
    }

    /// Exact angle for the presets that are codings of a quadratic rotation.
    pub fn angle(self) -> Option<CfExpansion> {
        match self {
            Preset::Fibonacci | Preset::KappaGolden => Some(CfExpansion::golden()),
            Preset::Silver => Some(CfExpansion::silver()),
            _ => None,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
                Error::Parse(format!("unknown preset {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rotation source for a periodic expansion, starting at `t0`.
pub fn rotation_source(cf: &CfExpansion, t0: QuadraticReal) -> Result<WordSource> {
    Ok(WordSource::Rotation {
        alpha: quadratic_of_cf(cf)?,
        t0,
        cf: Some(cf.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn factors(w: &[u8], len: usize) -> BTreeSet<&[u8]> {
        w.windows(len).collect()
    }

    #[test]
    fn prefix_extension_consistency() {
        let sources = Preset::ALL
            .iter()
            .map(|p| p.source())
            .chain([
                rotation_source(&CfExpansion::silver(), QuadraticReal::from_ratio(1, 3)).unwrap(),
                WordSource::Kappa("r1,g2,r3,g1,r2,r1,g1,g1,r1,r2,g3".parse().unwrap()),
            ]);
        for src in sources {
            let reach = src.max_len().unwrap_or(usize::MAX);
            let mut l = 1;
            while 2 * l <= 100_000.min(reach) {
                let short = src.generate(l).unwrap();
                let long = src.generate(2 * l).unwrap();
                assert!(long.starts_with(&short), "{src} at {l}");
                l = l * 3 + 1;
            }
        }
    }

    #[test]
    fn thue_morse_sigma_consistency() {
        let sigma = Morphism::thue_morse();
        let long = fixed_point_prefix(&sigma, b'0', 4096).unwrap().prefix;
        for l in [1, 7, 100, 2048] {
            assert_eq!(sigma.apply(&long[..l]).unwrap()[..], long[..2 * l]);
        }
    }

    #[test]
    fn kappa_golden_generates_golden_subshift() {
        let kappa = Preset::KappaGolden.generate(10_000).unwrap().prefix;
        let alpha = quadratic_of_cf(&CfExpansion::golden()).unwrap();
        let coding = rotation_coding_prefix(&alpha, &QuadraticReal::zero(), 10_000).unwrap().prefix;
        for len in 1..=20 {
            assert_eq!(factors(&kappa, len), factors(&coding, len), "length {len}");
        }
    }

    #[test]
    fn generator_agreement_on_factors() {
        for cf in [CfExpansion::golden(), CfExpansion::silver()] {
            let alpha = quadratic_of_cf(&cf).unwrap();
            let rot = rotation_coding_prefix(&alpha, &QuadraticReal::zero(), 10_000).unwrap().prefix;
            let std = standard_word_prefix(&cf, 10_000).unwrap().prefix;
            for len in 1..=20 {
                assert_eq!(factors(&rot, len), factors(&std, len));
            }
            // Sturmian complexity
            assert_eq!(factors(&rot, 20).len(), 21);
        }
    }

    #[test]
    fn shifting_and_text_sources() {
        let tm = Preset::ThueMorse.generate(16).unwrap();
        let s = tm.shift().shift();
        assert_eq!(s.prefix, Word::from(&tm.prefix[2..]));
        assert_eq!(s.extended(20).unwrap().prefix[..], Preset::ThueMorse.generate(22).unwrap().prefix[2..]);

        let t = GeneratedWord::from_text(Word::from("0101"));
        assert!(matches!(t.extended(5), Err(Error::NotExtendable { requested: 5, available: 4 })));
        assert_eq!(WordSource::Standard(Preset::unbounded_cf(3)).max_len(), Some(11));
        assert_eq!(Preset::UnboundedCf.source().max_len().map(|m| m > 1_000_000), Some(true));
    }

    #[test]
    fn cancellation_stops_generation() {
        let token = CancelToken::new();
        token.cancel();
        for p in Preset::ALL {
            let r = p.source().generate_cancellable(1 << 20, &token);
            if !matches!(p, Preset::Periodic01) {
                assert_eq!(r, Err(Error::Cancelled), "{p}");
            }
        }
    }

    #[test]
    fn preset_names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("golden".parse::<Preset>().is_err());
    }
}
