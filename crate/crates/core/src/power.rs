//! Fractional powers `u^e` and the largest exponent visible in a window.

use num_rational::Ratio;
use serde::Serialize;

use crate::word::{Symbol, Word};

/// Exact nonnegative exponent.
pub type Exponent = Ratio<usize>;

/// The prefix of length `floor(|u| * a)` of `uuu...`.
///
/// # Panics
/// If `u` is empty and `a` is nonzero.
pub fn fractional_power(u: &[Symbol], a: Exponent) -> Word {
    if *a.numer() == 0 {
        return Word::new();
    }
    assert!(!u.is_empty(), "fractional power of the empty word");
    let len = (u.len() * a.numer()) / a.denom();
    Word::from_symbols(u.iter().copied().cycle().take(len).collect())
}

/// A repetition `v^e` found at `position`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Repetition {
    pub factor: Word,
    #[serde(serialize_with = "crate::serde_ratio")]
    pub exponent: Exponent,
    pub position: usize,
}

impl Repetition {
    /// Re-reads `text` at `position` and checks it spells `factor^exponent`.
    pub fn verify(&self, text: &[Symbol]) -> bool {
        let spelled = fractional_power(&self.factor, self.exponent);
        let end = self.position + spelled.len();
        end <= text.len() && text[self.position..end] == spelled[..]
    }
}

/// Largest exponent `L/p` over all factors of `text` with period `p` and
/// length `L`, with a witness. Runs in `O(|text|^2)`.
///
/// # Panics
/// If `text` is empty.
pub fn max_fractional_power(text: &[Symbol]) -> Repetition {
    assert!(!text.is_empty(), "max_fractional_power of the empty word");
    let n = text.len();
    let mut best = Repetition {
        factor: Word::from(text),
        exponent: Exponent::from_integer(1),
        position: 0,
    };
    for p in 1..n {
        // a maximal run of c positions with text[i] == text[i + p] is a factor
        // of length p + c with period p
        let mut run = 0usize;
        for i in 0..n - p {
            if text[i] == text[i + p] {
                run += 1;
            } else {
                run = 0;
            }
            let at_end = i + 1 == n - p || text[i + 1] != text[i + 1 + p];
            if run > 0 && at_end {
                let e = Exponent::new(p + run, p);
                if e > best.exponent {
                    let start = i + 1 - run;
                    best = Repetition {
                        factor: Word::from(&text[start..start + p]),
                        exponent: e,
                        position: start,
                    };
                }
            }
        }
    }
    best
}
