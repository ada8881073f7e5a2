//! Named verification suites. Each check states the inequality it tests
//! and the finite data it was tested on.

use std::collections::{BTreeSet, HashMap};

use clap::ValueEnum;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recur_core::{
    cross_check, cylinder_measures, lr_constant_estimate, power_report, rate_series, rotation_source,
    sub_invariance_check, tower_weights, CfExpansion, Error, Exponent, GeneratedWord, Kappa, KappaSequence,
    LengthRatio, LrReport, Preset, QuadraticReal, RotationSpec, WindowPolicy, WordSource,
};
use serde::Serialize;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    BoundedCf,
    UnboundedCf,
    MorseDelta,
    XcheckRotation,
    KappaRatio,
    SubInvariance,
    LrSandwich,
    Measures,
    Agreement,
    All,
}

impl Suite {
    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

pub struct Options {
    pub cf: Option<CfExpansion>,
    pub depth: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub policy: WindowPolicy,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        pass,
        detail,
    }
}

fn show(r: Option<LengthRatio>) -> String {
    r.map_or("-".into(), |r| format!("{r}"))
}

fn rates(source: WordSource, depth: usize, policy: &WindowPolicy) -> Result<recur_core::RateSeries, Failure> {
    let x = GeneratedWord::from_source(source, 1)?;
    Ok(rate_series(&x, depth, policy)?)
}

/// LR estimate in the smallest doubling of 20 000 symbols where every factor
/// up to `max_len` recurs.
fn lr(source: &WordSource, max_len: usize) -> Result<LrReport, Failure> {
    let mut window = 20_000;
    loop {
        let x = GeneratedWord::from_source(source.clone(), window)?;
        match lr_constant_estimate(&x, max_len, window) {
            Err(Error::InsufficientWindow { .. }) if window < 8_000_000 => window *= 2,
            other => return Ok(other?),
        }
    }
}

fn bounded_cf(o: &Options) -> Result<Vec<Check>, Failure> {
    let depth = o.depth.unwrap_or(500);
    let source = match &o.cf {
        Some(cf) => WordSource::Standard(cf.clone()),
        None => Preset::Fibonacci.source(),
    };
    let s = rates(source.clone(), depth, &o.policy)?;
    let tail = s.tail();
    let one = LengthRatio::from_integer(1);
    let stab = s.stabilized_fraction();
    let scope = format!("{source}, tail n in ({}, {}]", tail.after, tail.through);
    Ok(vec![
        check(
            "tail-min-below-one",
            tail.r_lower.is_some_and(|r| r < one),
            format!("{scope}: min tau/n = {}", show(tail.r_lower)),
        ),
        check(
            "tail-max-above-one",
            tail.r_upper.is_some_and(|r| r > one),
            format!("{scope}: max tau/n = {}", show(tail.r_upper)),
        ),
        check(
            "tail-max-above-7/5",
            tail.r_upper.is_some_and(|r| r > LengthRatio::new(7, 5)),
            format!("{scope}: max tau/n = {}", show(tail.r_upper)),
        ),
        check(
            "stabilized-99pct",
            stab >= 0.99,
            format!("{:.2}% of {depth} entries stabilized", 100.0 * stab),
        ),
    ])
}

fn unbounded_cf(o: &Options) -> Result<Vec<Check>, Failure> {
    let depth = o.depth.unwrap_or(300);
    let s = rates(Preset::UnboundedCf.source(), depth, &o.policy)?;
    let running = s.running_min();
    let last = running.last().map(|r| r.1);
    let ks = [10, 20, 30, 40, 50]
        .into_iter()
        .map(|l| Ok((l, lr(&Preset::UnboundedCf.source(), l)?.k_estimate)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let golden = lr(&Preset::Fibonacci.source(), 50)?.k_estimate;
    let listed: Vec<String> = ks.iter().map(|(l, k)| format!("L={l}: {k}")).collect();
    Ok(vec![
        check(
            "running-min-nonincreasing",
            running.windows(2).all(|w| w[1].1 <= w[0].1),
            format!("[0; 1,2,...,30], n <= {depth}"),
        ),
        check(
            "running-min-below-0.05",
            last.is_some_and(|r| r < LengthRatio::new(5, 100)),
            format!("min over n <= {depth} of tau/n = {}", show(last)),
        ),
        check(
            "lr-constant-grows",
            ks.windows(2).all(|w| w[1].1 >= w[0].1) && ks[ks.len() - 1].1 > ks[0].1,
            listed.join(", "),
        ),
        check(
            "lr-constant-exceeds-golden",
            ks[ks.len() - 1].1 > golden,
            format!("K(50) = {} against golden K(50) = {golden}", ks[ks.len() - 1].1),
        ),
    ])
}

fn morse_delta(o: &Options) -> Result<Vec<Check>, Failure> {
    let depth = o.depth.unwrap_or(500);
    let x = Preset::ThueMorse.generate(4096)?;
    let p = power_report(&x, 4096)?;
    let tail = rates(Preset::ThueMorse.source(), depth, &o.policy)?.tail();
    Ok(vec![
        check(
            "max-exponent-two",
            p.max_exponent() == Exponent::from_integer(2) && p.witness.verify(&x.prefix),
            format!(
                "window {}: max exponent {} witnessed by {} at {}",
                p.window,
                p.max_exponent(),
                p.witness.factor,
                p.witness.position
            ),
        ),
        check(
            "tail-min-at-least-one",
            tail.r_lower.is_some_and(|r| r >= LengthRatio::from_integer(1)),
            format!("tail n in ({}, {}]: min tau/n = {}", tail.after, tail.through, show(tail.r_lower)),
        ),
    ])
}

fn xcheck_rotation(o: &Options) -> Result<Vec<Check>, Failure> {
    let depth = o.depth.unwrap_or(200);
    let cfs = match &o.cf {
        Some(cf) => vec![cf.clone()],
        None => vec![CfExpansion::golden(), CfExpansion::silver()],
    };
    cfs.iter()
        .map(|cf| {
            let spec = RotationSpec::from_cf(cf)?;
            let x = GeneratedWord::from_source(rotation_source(cf, QuadraticReal::zero())?, 1)?;
            let report = cross_check(&spec, &x, depth, &o.policy)?;
            let bad: Vec<usize> = report.mismatches().map(|r| r.n).collect();
            Ok(check(
                &format!("tau-symbolic-equals-geometric {cf}"),
                bad.is_empty(),
                format!(
                    "n = 1..{depth}: {} mismatches{}",
                    bad.len(),
                    bad.first().map_or(String::new(), |n| format!(", first at n={n}"))
                ),
            ))
        })
        .collect()
}

fn kappa_ratio(o: &Options) -> Result<Vec<Check>, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let one = BigRational::from_integer(1.into());
    let bound = BigRational::new(3.into(), 2.into());
    let mut outside = 0;
    let mut largest = one.clone();
    let mut below_two = true;
    for _ in 0..o.samples {
        let len = rng.gen_range(1..=30);
        let entries = (0..len)
            .map(|_| {
                let n = rng.gen_range(1..=5);
                if rng.gen_bool(0.5) {
                    Kappa::Rho(n)
                } else {
                    Kappa::Gamma(n)
                }
            })
            .collect();
        let ks = KappaSequence::new(entries)?;
        let mut hit = false;
        for k in 1..=ks.len() {
            let r = ks.length_ratio(k)?;
            hit |= r < one || r > bound;
            below_two &= r >= one && r < BigRational::from_integer(2.into());
            if r > largest {
                largest = r;
            }
        }
        outside += hit as usize;
    }
    let largest_f = largest.to_f64().unwrap_or(f64::NAN);
    Ok(vec![
        check(
            "ratio-within-3/2",
            outside == 0,
            format!(
                "{} sequences (len <= 30, index <= 5, seed {}): {outside} leave [1, 3/2]; largest ratio {largest} ({largest_f:.4})",
                o.samples, o.seed
            ),
        ),
        check(
            "ratio-below-2",
            below_two,
            format!("same sample: every ratio in [1, 2); largest {largest_f:.4}"),
        ),
    ])
}

fn sub_invariance(o: &Options) -> Result<Vec<Check>, Failure> {
    let depth = o.depth.unwrap_or(200);
    Preset::ALL
        .iter()
        .map(|p| {
            let x = p.generate(1_000)?;
            let r = sub_invariance_check(&x, depth, &o.policy)?;
            Ok(check(
                &format!("sub-invariance {p}"),
                r.holds(),
                match r.violation {
                    None => format!("n = 2..{depth}: {} checked, {} skipped", r.checked, r.skipped),
                    Some((n, a, b)) => format!("at n={n}: shifted {a} > {b}"),
                },
            ))
        })
        .collect()
}

fn lr_sandwich(o: &Options) -> Result<Vec<Check>, Failure> {
    let depth = o.depth.unwrap_or(500);
    [Preset::Fibonacci, Preset::ThueMorse]
        .into_iter()
        .map(|p| {
            let k = lr(&p.source(), 50)?.k_estimate;
            let s = rates(p.source(), depth, &o.policy)?;
            let outside = s
                .tail_entries()
                .filter(|e| e.ratio().is_some_and(|r| r < k.recip() || r > k))
                .count();
            let tail = s.tail();
            Ok(check(
                &format!("lr-sandwich {p}"),
                outside == 0 && tail.stabilized > 0,
                format!(
                    "K(50) = {k}; tail tau/n in [{}, {}], {outside} outside [1/K, K]",
                    show(tail.r_lower),
                    show(tail.r_upper)
                ),
            ))
        })
        .collect()
}

fn measures(_: &Options) -> Result<Vec<Check>, Failure> {
    const LEN: usize = 1_000_000;
    const TOL: f64 = 1e-3;
    let cf = CfExpansion::golden();
    let spec = RotationSpec::from_cf(&cf)?;
    let x = rotation_source(&cf, QuadraticReal::zero())?.generate(LEN)?;
    let mut worst = 0.0f64;
    let mut strays = 0;
    for len in 1..=10 {
        let table = cylinder_measures(&spec, len)?;
        let mut counts: HashMap<&[u8], usize> = HashMap::new();
        for w in x.windows(len) {
            *counts.entry(w).or_default() += 1;
        }
        strays += counts.keys().filter(|w| !table.iter().any(|(t, _)| &t[..] == **w)).count();
        let slots = (LEN - len + 1) as f64;
        for (w, m) in &table {
            let f = counts.get(&w[..]).copied().unwrap_or(0) as f64 / slots;
            worst = worst.max((f - m.to_f64()).abs());
        }
    }
    let towers = tower_weights(&x, &KappaSequence::golden(40), 6)?;
    let sum_err = towers.iter().map(|t| (t.total() - 1.0).abs()).fold(0.0, f64::max);
    let least = towers.iter().map(|t| t.weights.0.min(t.weights.1)).fold(1.0, f64::min);
    Ok(vec![
        check(
            "frequencies-match-measures",
            worst <= TOL && strays == 0,
            format!("1e6 symbols, |w| <= 10: max deviation {worst:.2e}, unexpected factors {strays}"),
        ),
        check(
            "tower-weights-sum-to-one",
            sum_err <= TOL,
            format!("levels 1..6: max |mu(0) + mu(1) - 1| = {sum_err:.2e}"),
        ),
        check(
            "tower-weight-at-least-1/2",
            least >= 0.5 - TOL,
            format!("bound 2/(3K+1) with K = 1: smallest weight {least:.4}"),
        ),
        check(
            "tower-weight-at-least-1/5",
            least >= 0.2 - TOL,
            format!("bound 2/(3K+1) with K = 3, the longest single-step image: smallest weight {least:.4}"),
        ),
    ])
}

fn agreement(_: &Options) -> Result<Vec<Check>, Failure> {
    [CfExpansion::golden(), CfExpansion::silver()]
        .iter()
        .map(|cf| {
            let rot = rotation_source(cf, QuadraticReal::zero())?.generate(10_000)?;
            let std = WordSource::Standard(cf.clone()).generate(10_000)?;
            let differ = (1..=20)
                .filter(|&l| rot.windows(l).collect::<BTreeSet<_>>() != std.windows(l).collect::<BTreeSet<_>>())
                .count();
            Ok(check(
                &format!("factor-sets-agree {cf}"),
                differ == 0,
                format!("lengths 1..20 over 1e4 symbols: {differ} lengths differ"),
            ))
        })
        .collect()
}

pub fn run(suite: Suite, o: &Options) -> Result<Report, Failure> {
    let checks = match suite {
        Suite::BoundedCf => bounded_cf(o)?,
        Suite::UnboundedCf => unbounded_cf(o)?,
        Suite::MorseDelta => morse_delta(o)?,
        Suite::XcheckRotation => xcheck_rotation(o)?,
        Suite::KappaRatio => kappa_ratio(o)?,
        Suite::SubInvariance => sub_invariance(o)?,
        Suite::LrSandwich => lr_sandwich(o)?,
        Suite::Measures => measures(o)?,
        Suite::Agreement => agreement(o)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::value_variants().iter().filter(|s| **s != Suite::All) {
                for mut c in run(*s, o)?.checks {
                    c.name = format!("{}: {}", s.name(), c.name);
                    all.push(c);
                }
            }
            all
        }
    };
    Ok(Report {
        suite: suite.name(),
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}
