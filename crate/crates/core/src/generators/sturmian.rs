//! Sturmian words from a continued fraction (standard words) and from the
//! rotation `t ↦ t + α mod 1` coded by `[0, 1−α) ↦ 0`, `[1−α, 1) ↦ 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::cont_frac::CfExpansion;
use crate::error::{Error, Result};
use crate::generators::CancelToken;
use crate::quadratic::QuadraticReal;
use crate::word::Word;

/// Prefix of `0·c_α`, the coding of the orbit of 0, where the characteristic
/// word `c_α` is the limit of `s_{-1} = 1`, `s_0 = 0`,
/// `s_1 = s_0^{a_1 - 1} s_{-1}`, `s_k = s_{k-1}^{a_k} s_{k-2}`.
pub(crate) fn standard_word(cf: &CfExpansion, length: usize, cancel: &CancelToken) -> Result<Word> {
    let mut out = Word::from("0");
    if length <= 1 {
        out.truncate(length);
        return Ok(out);
    }
    let need = length - 1;
    let mut prev = Word::from("0");
    let a1 = cf.coefficient(1).ok_or(Error::InsufficientCoefficients {
        needed: 1,
        available: 0,
    })?;
    let mut cur = Word::from_symbols([&b"0".repeat(a1 as usize - 1)[..], b"1"].concat());
    let mut k = 1;
    while cur.len() < need {
        cancel.check()?;
        k += 1;
        let a = cf.coefficient(k).ok_or(Error::InsufficientCoefficients {
            needed: k,
            available: k - 1,
        })?;
        let mut next = Word::new();
        for _ in 0..a {
            next.extend_from_slice(&cur);
            if next.len() >= need {
                break;
            }
        }
        if next.len() < need {
            next.extend_from_slice(&prev);
        }
        prev = std::mem::replace(&mut cur, next);
    }
    out.extend_from_slice(&cur[..need]);
    Ok(out)
}

/// Exact coder for `I_α(R_α^n t0)`: the symbol is
/// `⌊t0 + (n+1)α⌋ − ⌊t0 + nα⌋`. Floors are taken from `f64` when the value is
/// far from an integer and recomputed exactly otherwise.
pub struct RotationCoder {
    alpha: QuadraticReal,
    t0: QuadraticReal,
    alpha_f: f64,
    t0_f: f64,
}

impl RotationCoder {
    pub fn new(alpha: &QuadraticReal, t0: &QuadraticReal) -> Result<Self> {
        if alpha.is_rational() {
            return Err(Error::Domain(format!("angle {alpha} is rational")));
        }
        if alpha.signum().is_le() || alpha.cmp_integer(&BigInt::from(1)).is_ge() {
            return Err(Error::Domain(format!("angle {alpha:?} not in (0, 1)")));
        }
        if t0.signum().is_lt() || t0.cmp_integer(&BigInt::from(1)).is_ge() {
            return Err(Error::Domain(format!("start point {t0:?} not in [0, 1)")));
        }
        alpha.try_add(t0)?;
        Ok(RotationCoder {
            alpha: alpha.clone(),
            t0: t0.clone(),
            alpha_f: alpha.to_f64(),
            t0_f: t0.to_f64(),
        })
    }

    fn floor_at(&self, n: u64) -> i64 {
        let v = self.t0_f + n as f64 * self.alpha_f;
        // f64 error here is a few ulps times n; the margin is orders larger
        let margin = 1e-12 * (n as f64 + 1.0);
        if (v - v.round()).abs() > margin {
            return v.floor() as i64;
        }
        let exact = self
            .alpha
            .scale(&BigRational::from_integer(BigInt::from(n)))
            .try_add(&self.t0)
            .expect("radicands checked on construction");
        exact.floor().to_i64().expect("floor fits in i64")
    }

    pub fn prefix(&self, length: usize, cancel: &CancelToken) -> Result<Word> {
        let mut out = Vec::with_capacity(length);
        let mut prev = self.floor_at(0);
        for n in 0..length as u64 {
            if n % (1 << 16) == 0 {
                cancel.check()?;
            }
            let next = self.floor_at(n + 1);
            out.push(if next > prev { b'1' } else { b'0' });
            prev = next;
        }
        Ok(Word::from_symbols(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cont_frac::quadratic_of_cf;

    fn std_word(cf: &str, len: usize) -> Word {
        standard_word(&cf.parse().unwrap(), len, &CancelToken::new()).unwrap()
    }

    #[test]
    fn standard_examples() {
        // s_1 = 1, s_2 = 10, s_3 = 101, s_4 = 10110, s_5 = 10110101
        assert_eq!(std_word("[0; (1)]", 8), Word::from("01011010"));
        // s_1 = 01, s_2 = 01010
        assert_eq!(std_word("[0; (2)]", 5), Word::from("00101"));
        assert_eq!(std_word("[0; (1)]", 1), Word::from("0"));
        assert_eq!(std_word("[0; (3)]", 0), Word::new());
    }

    #[test]
    fn standard_finite_prefix_runs_out() {
        // [0; 2, 3]: s_1 = 01, s_2 = 0101010 -> 8 symbols reachable
        assert_eq!(std_word("[0; 2,3]", 8), Word::from("00101010"));
        let err = standard_word(&"[0; 2,3]".parse().unwrap(), 9, &CancelToken::new());
        assert!(matches!(err, Err(Error::InsufficientCoefficients { needed: 3, .. })));
    }

    #[test]
    fn rotation_examples() {
        let golden = quadratic_of_cf(&CfExpansion::golden()).unwrap();
        let never = CancelToken::new();
        let coder = RotationCoder::new(&golden, &QuadraticReal::zero()).unwrap();
        assert_eq!(coder.prefix(8, &never).unwrap(), std_word("[0; (1)]", 8));
        assert_eq!(coder.prefix(1, &never).unwrap(), Word::from("0"));

        let one_minus = (-&golden).add_rational(&BigRational::from_integer(1.into()));
        let at_cut = RotationCoder::new(&golden, &one_minus).unwrap();
        assert_eq!(at_cut.prefix(1, &never).unwrap(), Word::from("1"));
    }

    #[test]
    fn rotation_matches_standard_words() {
        for cf in ["[0; (1)]", "[0; (2)]", "[0; 3 (1,2)]", "[0; (1,4)]"] {
            let alpha = quadratic_of_cf(&cf.parse().unwrap()).unwrap();
            let coder = RotationCoder::new(&alpha, &QuadraticReal::zero()).unwrap();
            assert_eq!(coder.prefix(20_000, &CancelToken::new()).unwrap(), std_word(cf, 20_000), "{cf}");
        }
    }

    #[test]
    fn rotation_rejects_bad_inputs() {
        let s3 = QuadraticReal::sqrt(3).unwrap();
        let golden = quadratic_of_cf(&CfExpansion::golden()).unwrap();
        assert!(RotationCoder::new(&QuadraticReal::from_ratio(1, 3), &QuadraticReal::zero()).is_err());
        assert!(RotationCoder::new(&s3, &QuadraticReal::zero()).is_err());
        assert!(RotationCoder::new(&golden, &QuadraticReal::one()).is_err());
        let t0 = s3.add_rational(&BigRational::from_integer((-1).into()));
        assert_eq!(RotationCoder::new(&golden, &t0).err(), Some(Error::RadicandMismatch(5, 3)));
    }
}
