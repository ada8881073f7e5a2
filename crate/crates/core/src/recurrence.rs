//! Return times of cylinders `τ(ζ_n(x))`, the ratios `τ/n` and their tail
//! summaries, linear recurrence constants and repetition indices, all read
//! off finite windows of a generated word.

use std::collections::HashMap;
use std::io::{self, Write};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{CancelToken, GeneratedWord};
use crate::power::{max_fractional_power, Exponent, Repetition};
use crate::word::{min_gap, Word};

/// Exact `τ/n`, `K` and similar ratios of lengths.
pub type LengthRatio = Ratio<usize>;

/// How far into `x` to look for the next occurrence of a prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WindowPolicy {
    /// Smallest window ever used.
    pub initial_min: usize,
    /// The first window for depth `n` is at least `per_n * n`.
    pub per_n: usize,
    /// Windows never exceed this many symbols.
    pub cap: usize,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy {
            initial_min: 10_000,
            per_n: 50,
            cap: 10_000_000,
        }
    }
}

impl WindowPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.initial_min == 0 || self.per_n == 0 {
            return Err(Error::Domain("window policy sizes must be positive".into()));
        }
        if self.cap < self.initial_min {
            return Err(Error::Domain(format!(
                "window cap {} below initial window {}",
                self.cap, self.initial_min
            )));
        }
        Ok(())
    }

    /// First window for depth `n`.
    pub fn initial(&self, n: usize) -> usize {
        self.initial_min.max(self.per_n.saturating_mul(n)).min(self.cap)
    }
}

/// One measurement of `τ(ζ_n(x))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TauSample {
    pub n: usize,
    /// `None` when the prefix never recurred inside the largest window.
    pub tau: Option<usize>,
    /// Window length the value was read from.
    pub window: usize,
    /// The value survived one growth of the window unchanged.
    pub stabilized: bool,
}

impl TauSample {
    pub fn ratio(&self) -> Option<LengthRatio> {
        self.tau.map(|t| LengthRatio::new(t, self.n))
    }
}

/// Largest window the word can supply under `policy`.
fn window_limit(x: &GeneratedWord, policy: &WindowPolicy) -> usize {
    x.source.max_len().map_or(policy.cap, |m| m.min(policy.cap))
}

/// `τ(ζ_n(x))`: the shortest return word to the length-`n` prefix of `x`,
/// searched in windows `initial(n), 2·initial(n), ...` until two consecutive
/// windows agree or the cap is reached.
pub fn tau_cylinder(x: &GeneratedWord, n: usize, policy: &WindowPolicy) -> Result<TauSample> {
    tau_cylinder_cancellable(x, n, policy, &CancelToken::new())
}

pub fn tau_cylinder_cancellable(
    x: &GeneratedWord,
    n: usize,
    policy: &WindowPolicy,
    cancel: &CancelToken,
) -> Result<TauSample> {
    if n == 0 {
        return Err(Error::Domain("cylinder depth must be at least 1".into()));
    }
    policy.validate()?;
    let limit = window_limit(x, policy);
    if n > limit {
        // the prefix itself does not fit in the largest window
        return Ok(TauSample {
            n,
            tau: None,
            window: limit,
            stabilized: false,
        });
    }
    let mut window = policy.initial(n).max(n).min(limit);
    let mut text = x.symbols_upto(window)?;
    let prefix: Vec<u8> = text[..n].to_vec();
    let mut tau = min_gap(&prefix, &text[..window]).0;
    loop {
        cancel.check()?;
        if window >= limit {
            return Ok(TauSample {
                n,
                tau,
                window,
                stabilized: false,
            });
        }
        let grown = window.saturating_mul(2).min(limit);
        if grown > text.len() {
            text = x.symbols_upto(grown)?;
        }
        let next = min_gap(&prefix, &text[..grown]).0;
        let settled = tau.is_some() && next == tau;
        tau = next;
        window = grown;
        if settled {
            return Ok(TauSample {
                n,
                tau,
                window,
                stabilized: true,
            });
        }
    }
}

/// Extreme ratios over the tail `N/2 < n ≤ N`, taken over stabilized entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailSummary {
    /// Entries with `n > after` belong to the tail.
    pub after: usize,
    pub through: usize,
    #[serde(serialize_with = "crate::serde_opt_ratio")]
    pub r_lower: Option<LengthRatio>,
    #[serde(serialize_with = "crate::serde_opt_ratio")]
    pub r_upper: Option<LengthRatio>,
    pub stabilized: usize,
    pub unstabilized: usize,
}

/// `τ(ζ_n(x))` for `n = 1..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RateSeries {
    pub source: String,
    pub policy: WindowPolicy,
    pub entries: Vec<TauSample>,
}

impl RateSeries {
    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    pub fn unstabilized(&self) -> usize {
        self.entries.iter().filter(|e| !e.stabilized).count()
    }

    pub fn stabilized_fraction(&self) -> f64 {
        if self.entries.is_empty() {
            return 1.0;
        }
        1.0 - self.unstabilized() as f64 / self.entries.len() as f64
    }

    /// Stabilized entries with `n` in `(N/2, N]`.
    pub fn tail_entries(&self) -> impl Iterator<Item = &TauSample> {
        let after = self.depth() / 2;
        self.entries.iter().filter(move |e| e.n > after && e.stabilized)
    }

    /// Finite stand-ins for the lower and upper rates: min and max of `τ/n`
    /// over the stabilized tail.
    pub fn tail(&self) -> TailSummary {
        let after = self.depth() / 2;
        let ratios: Vec<LengthRatio> = self.tail_entries().filter_map(TauSample::ratio).collect();
        let in_tail = self.entries.iter().filter(|e| e.n > after).count();
        TailSummary {
            after,
            through: self.depth(),
            r_lower: ratios.iter().min().copied(),
            r_upper: ratios.iter().max().copied(),
            stabilized: ratios.len(),
            unstabilized: in_tail - ratios.len(),
        }
    }

    /// `min_{k ≤ m} τ(ζ_k)/k` for each `m`, over entries with a value.
    pub fn running_min(&self) -> Vec<(usize, LengthRatio)> {
        let mut best: Option<LengthRatio> = None;
        self.entries
            .iter()
            .filter_map(|e| {
                let r = e.ratio()?;
                let b = best.map_or(r, |b| b.min(r));
                best = Some(b);
                Some((e.n, b))
            })
            .collect()
    }

    pub const CSV_HEADER: &'static str = "n,tau,ratio_num,ratio_den,window,stabilized";

    /// One row per depth; missing values are left empty.
    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for e in &self.entries {
            match e.ratio() {
                Some(r) => writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    e.n,
                    e.tau.unwrap_or_default(),
                    r.numer(),
                    r.denom(),
                    e.window,
                    e.stabilized
                )?,
                None => writeln!(out, "{},,,,{},{}", e.n, e.window, e.stabilized)?,
            }
        }
        Ok(())
    }
}

/// `τ(ζ_n(x))` for every `n ≤ depth`, computed in parallel; the result does
/// not depend on scheduling.
pub fn rate_series(x: &GeneratedWord, depth: usize, policy: &WindowPolicy) -> Result<RateSeries> {
    rate_series_cancellable(x, depth, policy, &CancelToken::new())
}

pub fn rate_series_cancellable(
    x: &GeneratedWord,
    depth: usize,
    policy: &WindowPolicy,
    cancel: &CancelToken,
) -> Result<RateSeries> {
    if depth == 0 {
        return Err(Error::Domain("rate series needs depth at least 1".into()));
    }
    policy.validate()?;
    // one shared buffer covering the common case of a single doubling
    let x = x.extended(policy.initial(depth).saturating_mul(2).min(window_limit(x, policy)))?;
    let entries = (1..=depth)
        .into_par_iter()
        .map(|n| tau_cylinder_cancellable(&x, n, policy, cancel))
        .collect::<Result<Vec<_>>>()?;
    Ok(RateSeries {
        source: x.source.to_string(),
        policy: *policy,
        entries,
    })
}

/// Outcome of comparing `τ(ζ_{n-1}(Sx))` with `τ(ζ_n(x))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubInvariance {
    pub depth: usize,
    pub checked: usize,
    /// Depths where either side was not stabilized.
    pub skipped: usize,
    /// First `(n, τ(ζ_{n-1}(Sx)), τ(ζ_n(x)))` with the left side larger.
    pub violation: Option<(usize, usize, usize)>,
}

impl SubInvariance {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `τ(ζ_{n-1}(Sx)) ≤ τ(ζ_n(x))` for `n = 2..=depth` on stabilized values.
pub fn sub_invariance_check(x: &GeneratedWord, depth: usize, policy: &WindowPolicy) -> Result<SubInvariance> {
    if depth < 2 {
        return Err(Error::Domain("sub-invariance needs depth at least 2".into()));
    }
    let here = rate_series(x, depth, policy)?;
    let shifted = rate_series(&x.shift(), depth - 1, policy)?;
    let mut report = SubInvariance {
        depth,
        checked: 0,
        skipped: 0,
        violation: None,
    };
    for n in 2..=depth {
        let (s, t) = (&shifted.entries[n - 2], &here.entries[n - 1]);
        match (s.tau, t.tau) {
            (Some(a), Some(b)) if s.stabilized && t.stabilized => {
                report.checked += 1;
                if a > b && report.violation.is_none() {
                    report.violation = Some((n, a, b));
                }
            }
            _ => report.skipped += 1,
        }
    }
    Ok(report)
}

/// Return-word extremes over all factors of bounded length in a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LrReport {
    pub max_len: usize,
    pub window: usize,
    pub factors: usize,
    /// `max |w| / |u|` over factors `u` and return words `w` to `u`.
    #[serde(serialize_with = "crate::serde_ratio")]
    pub k_estimate: LengthRatio,
    pub k_witness: Word,
    /// `min |w| / |u|` over the same pairs.
    #[serde(serialize_with = "crate::serde_ratio")]
    pub k_lower_gap: LengthRatio,
    pub gap_witness: Word,
}

#[derive(Clone, Copy)]
struct GapStats {
    last: usize,
    count: usize,
    min: usize,
    max: usize,
}

/// Estimates the linear recurrence constant from every factor `u` with
/// `1 ≤ |u| ≤ max_len` in the first `window` symbols of `x`. Every such
/// factor must occur at least twice in the window.
pub fn lr_constant_estimate(x: &GeneratedWord, max_len: usize, window: usize) -> Result<LrReport> {
    if max_len == 0 {
        return Err(Error::Domain("factor length bound must be at least 1".into()));
    }
    let text = x.symbols_upto(window)?;
    if text.len() < window {
        return Err(Error::NotExtendable {
            requested: window,
            available: text.len(),
        });
    }
    let text = &text[..window];

    let per_length = (1..=max_len.min(window))
        .into_par_iter()
        .map(|len| {
            let mut table: HashMap<&[u8], GapStats> = HashMap::new();
            for (i, u) in text.windows(len).enumerate() {
                table
                    .entry(u)
                    .and_modify(|s| {
                        let g = i - s.last;
                        s.min = s.min.min(g);
                        s.max = s.max.max(g);
                        s.last = i;
                        s.count += 1;
                    })
                    .or_insert(GapStats {
                        last: i,
                        count: 1,
                        min: usize::MAX,
                        max: 0,
                    });
            }
            let mut stats: Vec<(&[u8], GapStats)> = table.into_iter().collect();
            stats.sort_unstable_by_key(|(u, _)| *u);
            if let Some((u, s)) = stats.iter().find(|(_, s)| s.count < 2) {
                return Err(Error::InsufficientWindow {
                    factor: Word::from(*u).to_string(),
                    found: s.count,
                    window,
                });
            }
            let hi = stats.iter().max_by_key(|(_, s)| s.max).expect("window holds a factor");
            let lo = stats.iter().min_by_key(|(_, s)| s.min).expect("window holds a factor");
            Ok((
                stats.len(),
                (LengthRatio::new(hi.1.max, len), Word::from(hi.0)),
                (LengthRatio::new(lo.1.min, len), Word::from(lo.0)),
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let factors = per_length.iter().map(|p| p.0).sum();
    // first witness in order of length wins ties
    let hi = per_length
        .iter()
        .map(|p| &p.1)
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one length");
    let lo = per_length
        .iter()
        .map(|p| &p.2)
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .expect("at least one length");
    Ok(LrReport {
        max_len,
        window,
        factors,
        k_estimate: hi.0,
        k_witness: hi.1.clone(),
        k_lower_gap: lo.0,
        gap_witness: lo.1.clone(),
    })
}

/// Default bound on the window scanned for repetitions.
pub const POWER_WINDOW_CAP: usize = 4096;

/// Largest repetition in a window, with the window actually scanned.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerReport {
    pub requested_window: usize,
    pub window: usize,
    pub witness: Repetition,
}

impl PowerReport {
    pub fn max_exponent(&self) -> Exponent {
        self.witness.exponent
    }

    /// `max_exponent − 1`, the finite-window estimate of the power-freeness index.
    pub fn index_estimate(&self) -> Exponent {
        self.witness.exponent - 1
    }
}

pub fn power_report(x: &GeneratedWord, window: usize) -> Result<PowerReport> {
    power_report_capped(x, window, POWER_WINDOW_CAP)
}

/// Scans `min(window, cap)` symbols; the cap is recorded in the report.
pub fn power_report_capped(x: &GeneratedWord, window: usize, cap: usize) -> Result<PowerReport> {
    if window < 16 {
        return Err(Error::Domain(format!("power window {window} below 16")));
    }
    let scanned = window.min(cap.max(16));
    let text = x.symbols_upto(scanned)?;
    if text.len() < scanned {
        return Err(Error::NotExtendable {
            requested: scanned,
            available: text.len(),
        });
    }
    let text = &text[..scanned];
    let witness = max_fractional_power(text);
    debug_assert!(witness.verify(text));
    Ok(PowerReport {
        requested_window: window,
        window: scanned,
        witness,
    })
}
