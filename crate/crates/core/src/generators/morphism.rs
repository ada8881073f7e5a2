use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::generators::CancelToken;
use crate::word::{Alphabet, Symbol, Word};

/// A map from symbols to nonempty words, extended to words by concatenation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    images: BTreeMap<Symbol, Word>,
}

impl Morphism {
    pub fn new(images: impl IntoIterator<Item = (Symbol, Word)>) -> Result<Self> {
        let images: BTreeMap<Symbol, Word> = images.into_iter().collect();
        if images.is_empty() {
            return Err(Error::InvalidAlphabet("morphism with empty domain".into()));
        }
        if let Some((&s, _)) = images.iter().find(|(_, w)| w.is_empty()) {
            return Err(Error::Domain(format!("image of {:?} is empty", s as char)));
        }
        Ok(Morphism { images })
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        Morphism {
            images: alphabet
                .symbols()
                .iter()
                .map(|&s| (s, Word::from_symbols(vec![s])))
                .collect(),
        }
    }

    /// 0 ↦ 01, 1 ↦ 10.
    pub fn thue_morse() -> Self {
        Self::binary("01", "10")
    }

    /// 0 ↦ 01, 1 ↦ 0.
    pub fn fibonacci() -> Self {
        Self::binary("01", "0")
    }

    pub(crate) fn binary(zero: &str, one: &str) -> Self {
        Morphism {
            images: [(b'0', Word::from(zero)), (b'1', Word::from(one))].into(),
        }
    }

    /// ρ_n: 0 ↦ 0·1^{n+1}, 1 ↦ 0·1^n.
    pub fn rho(n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidIndex(n));
        }
        let ones = "1".repeat(n as usize);
        Ok(Self::binary(&format!("0{ones}1"), &format!("0{ones}")))
    }

    /// γ_n: 0 ↦ 1·0^{n+1}, 1 ↦ 1·0^n.
    pub fn gamma(n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidIndex(n));
        }
        let zeros = "0".repeat(n as usize);
        Ok(Self::binary(&format!("1{zeros}0"), &format!("1{zeros}")))
    }

    pub fn image(&self, s: Symbol) -> Result<&Word> {
        self.images.get(&s).ok_or(Error::UnknownSymbol(s as char))
    }

    pub fn domain(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.images.keys().copied()
    }

    pub fn apply(&self, w: &[Symbol]) -> Result<Word> {
        self.apply_truncated(w, usize::MAX)
    }

    /// Applies to symbols of `w` until the output reaches `limit`, then
    /// truncates to `limit`.
    pub fn apply_truncated(&self, w: &[Symbol], limit: usize) -> Result<Word> {
        let mut out = Word::new();
        for &s in w {
            if out.len() >= limit {
                break;
            }
            out.extend_from_slice(self.image(s)?);
        }
        out.truncate(limit);
        Ok(out)
    }

    /// True when `m(seed)` starts with `seed` and has length at least 2.
    pub fn is_prolongable(&self, seed: Symbol) -> bool {
        self.images
            .get(&seed)
            .is_some_and(|w| w.len() >= 2 && w[0] == seed)
    }

    pub(crate) fn fixed_point(&self, seed: Symbol, length: usize, cancel: &CancelToken) -> Result<Word> {
        if !self.is_prolongable(seed) {
            self.image(seed)?;
            return Err(Error::NotProlongable(seed as char));
        }
        let mut w = Word::from_symbols(vec![seed]);
        while w.len() < length {
            cancel.check()?;
            w = self.apply_truncated(&w, length)?;
        }
        w.truncate(length);
        Ok(w)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .map(|(&s, w)| format!("{}->{w}", s as char))
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Morphism {
    type Err = Error;

    /// `0->01,1->10`.
    fn from_str(s: &str) -> Result<Self> {
        let mut images = Vec::new();
        for rule in s.split(',').map(str::trim).filter(|r| !r.is_empty()) {
            let (lhs, rhs) = rule
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("rule {rule:?} lacks '->'")))?;
            let lhs = lhs.trim().as_bytes();
            if lhs.len() != 1 {
                return Err(Error::Parse(format!("rule {rule:?} must map a single symbol")));
            }
            images.push((lhs[0], rhs.trim().parse::<Word>()?));
        }
        let m = Morphism::new(images.iter().cloned())?;
        if m.images.len() != images.len() {
            return Err(Error::Parse(format!("morphism {s:?} maps a symbol twice")));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_gamma_images() {
        let r1 = Morphism::rho(1).unwrap();
        assert_eq!(r1.image(b'0').unwrap(), &Word::from("011"));
        assert_eq!(r1.image(b'1').unwrap(), &Word::from("01"));
        let g2 = Morphism::gamma(2).unwrap();
        assert_eq!(g2.image(b'0').unwrap(), &Word::from("1000"));
        assert_eq!(g2.image(b'1').unwrap(), &Word::from("100"));
        assert_eq!(Morphism::rho(0), Err(Error::InvalidIndex(0)));
        assert_eq!(Morphism::gamma(0), Err(Error::InvalidIndex(0)));
        let twice = r1.apply(&r1.apply(b"0").unwrap()).unwrap();
        assert_eq!(twice, Word::from("0110101"));
    }

    #[test]
    fn apply_examples() {
        let id = Morphism::identity(&Alphabet::binary());
        assert_eq!(id.apply(b"0110").unwrap(), Word::from("0110"));
        let tm = Morphism::thue_morse();
        let mut w = Word::from("0");
        for _ in 0..3 {
            w = tm.apply(&w).unwrap();
        }
        assert_eq!(w, Word::from("01101001"));
        assert_eq!(Morphism::rho(1).unwrap().apply(b"").unwrap(), Word::new());
        assert_eq!(tm.apply(b"02"), Err(Error::UnknownSymbol('2')));
    }

    #[test]
    fn fixed_points() {
        let tm = Morphism::thue_morse();
        let never = CancelToken::new();
        assert_eq!(tm.fixed_point(b'0', 8, &never).unwrap(), Word::from("01101001"));
        assert_eq!(tm.fixed_point(b'1', 4, &never).unwrap(), Word::from("1001"));
        let flat: Morphism = "0->0,1->10".parse().unwrap();
        assert_eq!(flat.fixed_point(b'0', 4, &never), Err(Error::NotProlongable('0')));
        let cancelled = CancelToken::new();
        cancelled.cancel();
        assert_eq!(tm.fixed_point(b'0', 1 << 20, &cancelled), Err(Error::Cancelled));
    }

    #[test]
    fn parse_display() {
        let m: Morphism = "0->01, 1->10".parse().unwrap();
        assert_eq!(m, Morphism::thue_morse());
        assert_eq!(m.to_string(), "0->01,1->10");
        assert!("0->".parse::<Morphism>().is_err());
        assert!("01->1".parse::<Morphism>().is_err());
        assert!("0->1,0->0".parse::<Morphism>().is_err());
    }
}
