//! The rotation `t ↦ t + α mod 1` with the two-cell partition
//! `{[0, 1−α), [1−α, 1)}`: exact atoms of its refinements, their return
//! times and lengths, and comparisons with the symbolic side.

use std::cmp::Ordering;
use std::io::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::cont_frac::{nearest_int_distance, quadratic_of_cf, CfExpansion, Convergents};
use crate::error::{Error, Result};
use crate::generators::{desubstitute, CancelToken, GeneratedWord, KappaSequence, RotationCoder};
use crate::quadratic::QuadraticReal;
use crate::recurrence::{rate_series, WindowPolicy};
use crate::word::{Symbol, Word};

/// An angle given by an eventually periodic expansion, with its exact value.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationSpec {
    cf: CfExpansion,
    alpha: QuadraticReal,
}

impl RotationSpec {
    pub fn from_cf(cf: &CfExpansion) -> Result<Self> {
        let alpha = quadratic_of_cf(cf)?;
        Ok(RotationSpec { cf: cf.clone(), alpha })
    }

    pub fn alpha(&self) -> &QuadraticReal {
        &self.alpha
    }

    pub fn cf(&self) -> &CfExpansion {
        &self.cf
    }

    /// `(−jα) mod 1`.
    fn backward_orbit(&self, j: usize) -> QuadraticReal {
        (-self.alpha.scale(&BigRational::from_integer(BigInt::from(j)))).fract()
    }

    /// The depth-`n` cut points `{(−jα) mod 1 : 0 ≤ j ≤ n}`, sorted.
    pub fn endpoints(&self, depth: usize) -> Vec<QuadraticReal> {
        let mut pts: Vec<QuadraticReal> = (0..=depth).into_par_iter().map(|j| self.backward_orbit(j)).collect();
        pts.par_sort();
        pts
    }
}

/// A half-open interval `[left, right)` that is one atom of the depth-`n`
/// refinement of the partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalAtom {
    pub left: QuadraticReal,
    pub right: QuadraticReal,
    pub depth: usize,
}

impl IntervalAtom {
    pub fn length(&self) -> QuadraticReal {
        &self.right - &self.left
    }

    pub fn contains(&self, t: &QuadraticReal) -> bool {
        &self.left <= t && t < &self.right
    }
}

fn check_unit(t: &QuadraticReal) -> Result<()> {
    if t.signum().is_lt() || t.cmp_integer(&BigInt::from(1)).is_ge() {
        return Err(Error::Domain(format!("point {t:?} not in [0, 1)")));
    }
    Ok(())
}

/// The atom of depth `n` containing `t`.
pub fn atom_of(spec: &RotationSpec, t: &QuadraticReal, depth: usize) -> Result<IntervalAtom> {
    if depth == 0 {
        return Err(Error::Domain("atom depth must be at least 1".into()));
    }
    check_unit(t)?;
    spec.alpha.try_add(t)?;
    let mut left = QuadraticReal::zero();
    let mut right = QuadraticReal::one();
    for j in 1..=depth {
        let p = spec.backward_orbit(j);
        if p <= *t {
            if p > left {
                left = p;
            }
        } else if p < right {
            right = p;
        }
    }
    Ok(IntervalAtom { left, right, depth })
}

/// All atoms of depth `n`, left to right.
pub fn atoms(spec: &RotationSpec, depth: usize) -> Vec<IntervalAtom> {
    let mut pts = spec.endpoints(depth);
    pts.push(QuadraticReal::one());
    pts.windows(2)
        .map(|w| IntervalAtom {
            left: w[0].clone(),
            right: w[1].clone(),
            depth,
        })
        .collect()
}

/// `min{k ≥ 1 : ‖kα‖ < |atom|}`. The first `k` to beat every smaller one is a
/// best approximation, so only 1 and the convergent denominators are tried.
pub fn tau_interval(spec: &RotationSpec, atom: &IntervalAtom) -> Result<u64> {
    tau_for_length(spec, &atom.length())
}

pub fn tau_for_length(spec: &RotationSpec, length: &QuadraticReal) -> Result<u64> {
    if length.signum() != Ordering::Greater {
        return Err(Error::Domain(format!("interval length {length:?} is not positive")));
    }
    let candidates = std::iter::once(1u64).chain(
        Convergents::new(&spec.cf).map(|c| c.q.to_u64().expect("denominator fits in u64 before the gap closes")),
    );
    for k in candidates {
        if nearest_int_distance(&spec.alpha, k) < *length {
            return Ok(k);
        }
    }
    unreachable!("periodic expansions have infinitely many convergents")
}

/// First `len` symbols of the coding of `t`.
fn coding_of(spec: &RotationSpec, t: &QuadraticReal, len: usize) -> Result<Word> {
    RotationCoder::new(&spec.alpha, t)?.prefix(len, &CancelToken::new())
}

/// Lebesgue measure of the set of points whose coding starts with `w`;
/// zero when `w` is not a factor.
pub fn cylinder_measure(spec: &RotationSpec, w: &[Symbol]) -> Result<QuadraticReal> {
    if w.is_empty() {
        return Ok(QuadraticReal::one());
    }
    // the cylinder is a single atom of depth |w|; its left end codes to w
    for atom in atoms(spec, w.len()) {
        if coding_of(spec, &atom.left, w.len())?[..] == *w {
            return Ok(atom.length());
        }
    }
    Ok(QuadraticReal::zero())
}

/// Every factor of length `len` with the measure of its cylinder.
pub fn cylinder_measures(spec: &RotationSpec, len: usize) -> Result<Vec<(Word, QuadraticReal)>> {
    if len == 0 {
        return Ok(vec![(Word::new(), QuadraticReal::one())]);
    }
    let mut out = atoms(spec, len)
        .into_par_iter()
        .map(|a| Ok((coding_of(spec, &a.left, len)?, a.length())))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// One depth of a symbolic/geometric comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossRow {
    pub n: usize,
    pub tau_symbolic: Option<usize>,
    pub stabilized: bool,
    pub tau_geometric: u64,
    pub atom_len_approx: f64,
}

impl CrossRow {
    pub fn matches(&self) -> bool {
        self.tau_symbolic == Some(self.tau_geometric as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub cf: String,
    pub rows: Vec<CrossRow>,
}

impl CrossCheck {
    pub fn mismatches(&self) -> impl Iterator<Item = &CrossRow> {
        self.rows.iter().filter(|r| !r.matches())
    }

    pub fn is_clean(&self) -> bool {
        self.mismatches().next().is_none()
    }

    pub const CSV_HEADER: &'static str = "n,tau_symbolic,tau_geometric,atom_len_num_approx,match";

    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in &self.rows {
            let sym = r.tau_symbolic.map(|t| t.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{:.12e},{}",
                r.n,
                sym,
                r.tau_geometric,
                r.atom_len_approx,
                r.matches()
            )?;
        }
        Ok(())
    }
}

/// Compares `τ(ζ_n(x))` on the coding `x` of 0 with the return time of the
/// depth-`n` atom of 0, for `n = 1..=depth`.
pub fn cross_check(spec: &RotationSpec, x: &GeneratedWord, depth: usize, policy: &WindowPolicy) -> Result<CrossCheck> {
    let expected = coding_of(spec, &QuadraticReal::zero(), depth.min(x.len()).max(1))?;
    if !x.prefix.starts_with(&expected) {
        return Err(Error::Domain("word is not the coding of 0 for this angle".into()));
    }
    let symbolic = rate_series(x, depth, policy)?;
    let geometric = (1..=depth)
        .into_par_iter()
        .map(|n| {
            let atom = atom_of(spec, &QuadraticReal::zero(), n)?;
            Ok((tau_interval(spec, &atom)?, atom.length().to_f64()))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = symbolic
        .entries
        .iter()
        .zip(geometric)
        .map(|(s, (tau, len))| CrossRow {
            n: s.n,
            tau_symbolic: s.tau,
            stabilized: s.stabilized,
            tau_geometric: tau,
            atom_len_approx: len,
        })
        .collect();
    Ok(CrossCheck {
        cf: spec.cf.to_string(),
        rows,
    })
}

/// Share of a text covered by the level-`n` towers over 0 and over 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TowerWeights {
    pub level: usize,
    /// `|κ_1⋯κ_n(0)|` and `|κ_1⋯κ_n(1)|`.
    pub heights: (usize, usize),
    /// Number of complete blocks spelling each image.
    pub blocks: (usize, usize),
    /// `height · blocks / |text|` for each symbol.
    pub weights: (f64, f64),
}

impl TowerWeights {
    pub fn total(&self) -> f64 {
        self.weights.0 + self.weights.1
    }
}

/// Recognises `text` as a concatenation of the words `κ_1⋯κ_n(0)` and
/// `κ_1⋯κ_n(1)` for `n = 1..=levels`, peeling one morphism per level, and
/// reports how much of the text each kind of block covers.
pub fn tower_weights(text: &[Symbol], ks: &KappaSequence, levels: usize) -> Result<Vec<TowerWeights>> {
    if levels > ks.len() {
        return Err(Error::OutOfRange {
            index: levels,
            len: ks.len(),
        });
    }
    // positions in `text` where each block of the current level starts
    let mut starts: Vec<usize> = (0..text.len()).collect();
    let mut symbols: Vec<Symbol> = text.to_vec();
    let mut out = Vec::with_capacity(levels);
    for level in 1..=levels {
        let kappa = ks.entries()[level - 1];
        let blocks = desubstitute(&symbols, kappa)?;
        starts = blocks.iter().map(|b| starts[b.start]).collect();
        symbols = blocks.iter().map(|b| b.symbol).collect();

        let images = [ks.image(level, b'0')?, ks.image(level, b'1')?];
        for (&s, &a) in starts.iter().zip(&symbols) {
            let img = &images[(a - b'0') as usize];
            if text.get(s..s + img.len()) != Some(&img[..]) {
                return Err(Error::Domain(format!("level {level} block at {s} does not spell its image")));
            }
        }
        let count = |a: u8| symbols.iter().filter(|&&s| s == a).count();
        let heights = (images[0].len(), images[1].len());
        let blocks = (count(b'0'), count(b'1'));
        let share = |h: usize, c: usize| (h * c) as f64 / text.len() as f64;
        out.push(TowerWeights {
            level,
            heights,
            blocks,
            weights: (share(heights.0, blocks.0), share(heights.1, blocks.1)),
        });
    }
    Ok(out)
}
