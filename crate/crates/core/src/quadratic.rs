//! Exact real numbers of the form `a + b·√d` with rational `a`, `b`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `a + b·√d`. When `b == 0` the value is rational and `d` is normalised to 1;
/// otherwise `d` is a square-free integer greater than 1.
///
/// Arithmetic between two irrational values requires equal radicands; the
/// operators panic on a mismatch, the `try_*` methods return an error.
#[derive(Clone)]
pub struct QuadraticReal {
    a: BigRational,
    b: BigRational,
    d: u64,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Splits `n = s^2 * r` with `r` square-free. Primes up to 10^6 are removed
/// by trial division; the remaining cofactor is only checked for being a
/// perfect square, so a square of a larger prime times another large prime
/// is left unsplit.
fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut free = BigInt::one();
    let mut p = 2u64;
    while p <= 1_000_000 && BigInt::from(p * p) <= rest {
        let bp = BigInt::from(p);
        let mut odd = false;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            if odd {
                s *= &bp;
            }
            odd = !odd;
        }
        if odd {
            free *= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        s *= root;
    } else {
        free *= rest;
    }
    (s, free)
}

impl QuadraticReal {
    pub fn from_rational(a: BigRational) -> Self {
        QuadraticReal {
            a,
            b: BigRational::zero(),
            d: 1,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// `a + b·√n` for any nonnegative integer `n`; square factors of `n` are
    /// pulled into `b`.
    pub fn new(a: BigRational, b: BigRational, n: &BigInt) -> Result<Self> {
        if n.is_negative() {
            return Err(Error::Domain(format!("negative radicand {n}")));
        }
        if n.is_zero() || b.is_zero() {
            return Ok(Self::from_rational(a));
        }
        let (s, r) = square_free_split(n);
        let b = b * BigRational::from_integer(s);
        if r.is_one() {
            return Ok(Self::from_rational(a + b));
        }
        let d = r
            .to_u64()
            .ok_or_else(|| Error::Domain(format!("radicand {r} exceeds 64 bits")))?;
        Ok(QuadraticReal { a, b, d })
    }

    /// `√n`.
    pub fn sqrt(n: u64) -> Result<Self> {
        Self::new(rat(0), rat(1), &BigInt::from(n))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_coefficient(&self) -> &BigRational {
        &self.b
    }

    /// The square-free radicand; 1 for rationals.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn normalized(mut self) -> Self {
        if self.b.is_zero() {
            self.d = 1;
        }
        self
    }

    fn common_radicand(&self, other: &Self) -> Result<u64> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => Ok(other.d),
            (_, true) => Ok(self.d),
            _ if self.d == other.d => Ok(self.d),
            _ => Err(Error::RadicandMismatch(self.d, other.d)),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        Ok(QuadraticReal {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d,
        }
        .normalized())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        let dr = BigRational::from_integer(BigInt::from(d));
        Ok(QuadraticReal {
            a: &self.a * &other.a + &self.b * &other.b * dr,
            b: &self.a * &other.b + &self.b * &other.a,
            d,
        }
        .normalized())
    }

    /// `1/x` via the conjugate.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        let dr = BigRational::from_integer(BigInt::from(self.d));
        let norm = &self.a * &self.a - &self.b * &self.b * dr;
        Ok(QuadraticReal {
            a: &self.a / &norm,
            b: -&self.b / &norm,
            d: self.d,
        }
        .normalized())
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.recip()?)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QuadraticReal {
            a: &self.a * k,
            b: &self.b * k,
            d: self.d,
        }
        .normalized()
    }

    pub fn add_rational(&self, k: &BigRational) -> Self {
        QuadraticReal {
            a: &self.a + k,
            b: self.b.clone(),
            d: self.d,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.sign_ord();
        let sb = self.b.sign_ord();
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d; equality is impossible for
        // square-free d > 1
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    pub fn cmp_integer(&self, m: &BigInt) -> Ordering {
        self.add_rational(&BigRational::from_integer(-m)).signum()
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        // b·√d = ±√(p²d)/q with b = p/q; the integer square root brackets it
        // within 1/q, so the estimate is off by at most one
        let p = self.b.numer();
        let q = self.b.denom();
        let s = (p * p * BigInt::from(self.d)).sqrt();
        let surd = BigRational::new(if p.is_negative() { -s } else { s }, q.clone());
        let mut g = (&self.a + surd).floor().to_integer();
        while self.cmp_integer(&g) == Ordering::Less {
            g -= 1;
        }
        loop {
            let next = &g + 1;
            if self.cmp_integer(&next) == Ordering::Less {
                break;
            }
            g = next;
        }
        g
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `x - floor(x)`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        self.add_rational(&BigRational::from_integer(-self.floor()))
    }

    /// Distance to the nearest integer, in `[0, 1/2]`.
    pub fn nearest_int_distance(&self) -> Self {
        let f = self.fract();
        let g = (-&f).add_rational(&rat(1));
        if f <= g {
            f
        } else {
            g
        }
    }

    /// First `count` partial quotients of the regular continued fraction.
    /// Stops early for rationals.
    pub fn cf_terms(&self, count: usize) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(count);
        let mut x = self.clone();
        for _ in 0..count {
            let a = x.floor();
            let rest = x.add_rational(&BigRational::from_integer(-a.clone()));
            out.push(a);
            if rest.is_zero() {
                break;
            }
            x = rest.recip().expect("nonzero remainder");
        }
        out
    }
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigRational {
    fn sign_ord(&self) -> Ordering {
        match (self.numer().sign(), self.denom().sign()) {
            (Sign::NoSign, _) => Ordering::Equal,
            (a, b) if a == b => Ordering::Greater,
            _ => Ordering::Less,
        }
    }
}

impl PartialEq for QuadraticReal {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadraticReal {}

impl PartialOrd for QuadraticReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticReal {
    /// # Panics
    /// On a radicand mismatch.
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_sub(other).expect("radicand mismatch").signum()
    }
}

impl Neg for &QuadraticReal {
    type Output = QuadraticReal;

    fn neg(self) -> QuadraticReal {
        QuadraticReal {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }
}

impl Neg for QuadraticReal {
    type Output = QuadraticReal;

    fn neg(self) -> QuadraticReal {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&QuadraticReal> for &QuadraticReal {
            type Output = QuadraticReal;

            fn $method(self, rhs: &QuadraticReal) -> QuadraticReal {
                self.$try(rhs).expect("radicand mismatch")
            }
        }

        impl $trait<QuadraticReal> for QuadraticReal {
            type Output = QuadraticReal;

            fn $method(self, rhs: QuadraticReal) -> QuadraticReal {
                (&self).$try(&rhs).expect("radicand mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl fmt::Display for QuadraticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{} ", self.a)?;
            f.write_str(if self.b.is_negative() { "- " } else { "+ " })?;
        } else if self.b.is_negative() {
            f.write_str("-")?;
        }
        let b = self.b.abs();
        if b.is_one() {
            write!(f, "√{}", self.d)
        } else {
            write!(f, "({b})·√{}", self.d)
        }
    }
}

impl fmt::Debug for QuadraticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (≈{})", self.to_f64())
    }
}
