//! Continued fractions of angles in (0, 1): parsing, convergents and exact
//! closed forms for eventually periodic expansions.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadratic::QuadraticReal;

/// `[0; a_1, ..., a_k (b_1, ..., b_m)]`. The integer part is always 0.
///
/// With an empty period the expansion is a finite prefix of an unknown angle;
/// only the symbolic side can use it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CfExpansion {
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

impl CfExpansion {
    pub fn new(preperiod: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if preperiod.iter().chain(&period).any(|&a| a == 0) {
            return Err(Error::Parse("continued fraction coefficients must be >= 1".into()));
        }
        if preperiod.is_empty() && period.is_empty() {
            return Err(Error::Parse("continued fraction has no coefficients".into()));
        }
        Ok(CfExpansion { preperiod, period })
    }

    pub fn periodic(period: Vec<u64>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    pub fn finite(terms: Vec<u64>) -> Result<Self> {
        Self::new(terms, Vec::new())
    }

    /// `[0; (1)]`, the golden-ratio conjugate.
    pub fn golden() -> Self {
        CfExpansion {
            preperiod: vec![],
            period: vec![1],
        }
    }

    /// `[0; (2)]` = √2 − 1.
    pub fn silver() -> Self {
        CfExpansion {
            preperiod: vec![],
            period: vec![2],
        }
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Number of coefficients available, `None` when unbounded.
    pub fn available(&self) -> Option<usize> {
        if self.is_periodic() {
            None
        } else {
            Some(self.preperiod.len())
        }
    }

    /// The coefficient `a_i`, 1-based.
    pub fn coefficient(&self, i: usize) -> Option<u64> {
        assert!(i >= 1, "coefficients are 1-based");
        let k = i - 1;
        if k < self.preperiod.len() {
            Some(self.preperiod[k])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(k - self.preperiod.len()) % self.period.len()])
        }
    }

    /// Largest coefficient, when it is known to exist.
    pub fn bound(&self) -> u64 {
        self.preperiod.iter().chain(&self.period).copied().max().unwrap_or(0)
    }
}

impl fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "[0; {}", join(&self.preperiod))?;
        if !self.period.is_empty() {
            if !self.preperiod.is_empty() {
                f.write_str(" ")?;
            }
            write!(f, "({})", join(&self.period))?;
        }
        f.write_str("]")
    }
}

impl FromStr for CfExpansion {
    type Err = Error;

    /// Accepts `[0; a1,a2 (b1,b2)]`; whitespace is ignored and a comma before
    /// the opening parenthesis is allowed.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("continued fraction {s:?}: {why}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad("expected [0; ...]"))?;
        let (head, tail) = body.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        if head != "0" {
            return Err(bad("integer part must be 0 (angle in (0,1))"));
        }
        let (pre, per) = match tail.find('(') {
            Some(open) => {
                let close = tail.rfind(')').ok_or_else(|| bad("unclosed '('"))?;
                if close != tail.len() - 1 || close < open {
                    return Err(bad("period must close the expansion"));
                }
                (tail[..open].trim_end_matches(','), &tail[open + 1..close])
            }
            None => (tail, ""),
        };
        let parse_list = |part: &str| -> Result<Vec<u64>> {
            if part.is_empty() {
                return Ok(Vec::new());
            }
            part.split(',')
                .map(|t| t.parse::<u64>().map_err(|_| bad(&format!("bad coefficient {t:?}"))))
                .collect()
        };
        CfExpansion::new(parse_list(pre)?, parse_list(per)?)
    }
}

/// `p/q`, the `index`-th convergent `[0; a_1, ..., a_index]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convergent {
    #[serde(serialize_with = "crate::serde_display")]
    pub p: BigUint,
    #[serde(serialize_with = "crate::serde_display")]
    pub q: BigUint,
    pub index: usize,
}

impl Convergent {
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.p.clone()), BigInt::from(self.q.clone()))
    }
}

/// Lazily yields convergents 1, 2, 3, ... until the coefficients run out.
pub struct Convergents<'a> {
    cf: &'a CfExpansion,
    index: usize,
    prev: (BigUint, BigUint),
    cur: (BigUint, BigUint),
}

impl<'a> Convergents<'a> {
    pub fn new(cf: &'a CfExpansion) -> Self {
        // p_{-1}/q_{-1} = 1/0 and p_0/q_0 = 0/1
        Convergents {
            cf,
            index: 0,
            prev: (BigUint::one(), BigUint::zero()),
            cur: (BigUint::zero(), BigUint::one()),
        }
    }
}

impl Iterator for Convergents<'_> {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        let a = BigUint::from(self.cf.coefficient(self.index + 1)?);
        let p = &a * &self.cur.0 + &self.prev.0;
        let q = &a * &self.cur.1 + &self.prev.1;
        self.prev = std::mem::replace(&mut self.cur, (p.clone(), q.clone()));
        self.index += 1;
        Some(Convergent {
            p,
            q,
            index: self.index,
        })
    }
}

pub fn convergents(cf: &CfExpansion, n: usize) -> Result<Vec<Convergent>> {
    let out: Vec<Convergent> = Convergents::new(cf).take(n).collect();
    if out.len() < n {
        return Err(Error::InsufficientCoefficients {
            needed: n,
            available: out.len(),
        });
    }
    Ok(out)
}

fn bi(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Exact value of an eventually periodic expansion.
pub fn quadratic_of_cf(cf: &CfExpansion) -> Result<QuadraticReal> {
    if !cf.is_periodic() {
        return Err(Error::NonPeriodic);
    }
    // purely periodic tail y = [b_1; b_2, ..., b_m, y] = (P y + P')/(Q y + Q')
    let (mut p0, mut q0) = (BigUint::one(), BigUint::zero());
    let (mut p1, mut q1) = (BigUint::from(cf.period[0]), BigUint::one());
    for &b in &cf.period[1..] {
        let b = BigUint::from(b);
        let p2 = &b * &p1 + &p0;
        let q2 = &b * &q1 + &q0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    // Q y^2 + (Q' - P) y - P' = 0, positive root
    let (big_p, big_q) = (BigInt::from(p1), BigInt::from(q1));
    let (pp, qp) = (BigInt::from(p0), BigInt::from(q0));
    let lin = &big_p - &qp;
    let disc = &lin * &lin + BigInt::from(4) * &big_q * &pp;
    let two_q = BigInt::from(2) * &big_q;
    let y = QuadraticReal::new(
        BigRational::new(lin, two_q.clone()),
        BigRational::new(BigInt::one(), two_q),
        &disc,
    )?;

    // alpha = [0; a_1..a_k, y] = (p_k y + p_{k-1}) / (q_k y + q_{k-1})
    let (mut pm, mut qm) = (BigUint::one(), BigUint::zero());
    let (mut pk, mut qk) = (BigUint::zero(), BigUint::one());
    for &a in &cf.preperiod {
        let a = BigUint::from(a);
        let pn = &a * &pk + &pm;
        let qn = &a * &qk + &qm;
        (pm, qm, pk, qk) = (pk, qk, pn, qn);
    }
    let num = y.scale(&bi(&pk)).add_rational(&bi(&pm));
    let den = y.scale(&bi(&qk)).add_rational(&bi(&qm));
    num.try_div(&den)
}

/// `‖kα‖`, the distance from `kα` to the nearest integer.
pub fn nearest_int_distance(alpha: &QuadraticReal, k: u64) -> QuadraticReal {
    alpha
        .scale(&BigRational::from_integer(BigInt::from(k)))
        .nearest_int_distance()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn parse_and_display() {
        let g: CfExpansion = "[0; (1)]".parse().unwrap();
        assert_eq!(g, CfExpansion::golden());
        assert_eq!(g.to_string(), "[0; (1)]");
        let c: CfExpansion = "[0; 1,2 (3,4)]".parse().unwrap();
        assert_eq!(c.preperiod(), &[1, 2]);
        assert_eq!(c.period(), &[3, 4]);
        assert_eq!(c.to_string(), "[0; 1,2 (3,4)]");
        assert_eq!("[0;1,2,(3,4)]".parse::<CfExpansion>().unwrap(), c);
        assert_eq!("[0; 7]".parse::<CfExpansion>().unwrap().available(), Some(1));
        for bad in ["0.618", "[1; (1)]", "[0; 0,1]", "[0; (1]", "[0;]", "[0; (1) 2]"] {
            assert!(bad.parse::<CfExpansion>().is_err(), "{bad}");
        }
    }

    #[test]
    fn coefficient_unrolls_period() {
        let c: CfExpansion = "[0; 5 (1,2)]".parse().unwrap();
        let got: Vec<u64> = (1..=6).map(|i| c.coefficient(i).unwrap()).collect();
        assert_eq!(got, vec![5, 1, 2, 1, 2, 1]);
    }

    #[test]
    fn convergent_examples() {
        let qs: Vec<BigUint> = convergents(&CfExpansion::golden(), 5).unwrap().into_iter().map(|c| c.q).collect();
        assert_eq!(qs, [1u32, 2, 3, 5, 8].map(BigUint::from).to_vec());

        let cs = convergents(&CfExpansion::silver(), 3).unwrap();
        let pq: Vec<(u32, u32)> = cs
            .iter()
            .map(|c| (c.p.clone().try_into().unwrap(), c.q.clone().try_into().unwrap()))
            .collect();
        assert_eq!(pq, vec![(1, 2), (2, 5), (5, 12)]);

        let one = convergents(&"[0; 7]".parse().unwrap(), 1).unwrap();
        assert_eq!((one[0].p.clone(), one[0].q.clone()), (BigUint::from(1u32), BigUint::from(7u32)));
        assert_eq!(
            convergents(&"[0; 7]".parse().unwrap(), 2),
            Err(Error::InsufficientCoefficients { needed: 2, available: 1 })
        );
    }

    #[test]
    fn closed_forms() {
        let s5 = QuadraticReal::sqrt(5).unwrap();
        let golden = (&s5 - &QuadraticReal::one()).scale(&half());
        assert_eq!(quadratic_of_cf(&CfExpansion::golden()).unwrap(), golden);

        let silver = QuadraticReal::sqrt(2).unwrap() - QuadraticReal::one();
        assert_eq!(quadratic_of_cf(&CfExpansion::silver()).unwrap(), silver);

        // x = 1/(1 + (√2 − 1)) = 1/√2
        let x = quadratic_of_cf(&"[0; 1 (2)]".parse().unwrap()).unwrap();
        assert_eq!(x, silver.add_rational(&BigRational::one()).recip().unwrap());

        assert_eq!(quadratic_of_cf(&"[0; 1,2]".parse().unwrap()), Err(Error::NonPeriodic));
    }

    #[test]
    fn distance_examples() {
        let g = quadratic_of_cf(&CfExpansion::golden()).unwrap();
        let s5 = QuadraticReal::sqrt(5).unwrap();
        assert_eq!(nearest_int_distance(&g, 1), (QuadraticReal::from_integer(3) - s5.clone()).scale(&half()));
        assert_eq!(nearest_int_distance(&g, 2), s5 - QuadraticReal::from_integer(2));
        for k in 1..200 {
            assert!(!nearest_int_distance(&g, k).is_zero());
        }
    }

    #[test]
    fn re_expansion_round_trip() {
        for text in ["[0; (1)]", "[0; (2)]", "[0; 3,1 (1,4)]", "[0; 2 (1,1,5)]", "[0; (7,2,3)]"] {
            let cf: CfExpansion = text.parse().unwrap();
            let x = quadratic_of_cf(&cf).unwrap();
            let terms = x.cf_terms(31);
            assert_eq!(terms[0], BigInt::zero());
            for (i, t) in terms.iter().enumerate().skip(1) {
                assert_eq!(t, &BigInt::from(cf.coefficient(i).unwrap()), "{text} term {i}");
            }
        }
    }

    #[test]
    fn best_approximation_property() {
        for cf in [CfExpansion::golden(), CfExpansion::silver(), "[0; 3 (1,2)]".parse().unwrap()] {
            let alpha = quadratic_of_cf(&cf).unwrap();
            let dists: Vec<QuadraticReal> = (1..=10_000u64).map(|k| nearest_int_distance(&alpha, k)).collect();
            let cs: Vec<Convergent> = Convergents::new(&cf).take_while(|c| c.q <= BigUint::from(10_000u32)).collect();
            for c in &cs {
                let q: usize = c.q.clone().try_into().unwrap();
                let dq = &dists[q - 1];
                assert!(dists[..q - 1].iter().all(|d| dq < d), "{cf} q={q}");
            }
            // |alpha - p_n/q_n| < 1/(q_n q_{n+1})
            for w in cs.windows(2) {
                let diff = alpha.add_rational(&-w[0].to_rational());
                let bound = BigRational::new(BigInt::one(), BigInt::from(&w[0].q * &w[1].q));
                let abs = if diff.signum().is_lt() { -diff } else { diff };
                assert!(abs < QuadraticReal::from_rational(bound));
            }
        }
    }
}
