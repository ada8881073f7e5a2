//! Choosing the word to study from flags or the config file.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num_rational::BigRational;
use recur_core::{CfExpansion, KappaSequence, Morphism, Preset, QuadraticReal, Word, WordSource};

use crate::config::ConfigFile;
use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Standard-word recurrence.
    Standard,
    /// Exact coding of the rotation orbit of `--t0`.
    Rotation,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Method as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args, Debug, Default, Clone)]
pub struct SourceArgs {
    /// thue-morse, fibonacci, silver, periodic01, unbounded-cf or kappa-golden.
    #[arg(long)]
    pub preset: Option<String>,
    /// Continued fraction such as "[0; 2,1 (1,3)]".
    #[arg(long)]
    pub cf: Option<String>,
    /// How to turn `--cf` into a word.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Starting point for `--method rotation`, a rational in [0, 1).
    #[arg(long)]
    pub t0: Option<String>,
    /// Kappa sequence such as "r1,r1,g2".
    #[arg(long)]
    pub kappa: Option<String>,
    /// Morphism such as "0->01,1->10"; its fixed point starting at `--seed`.
    #[arg(long)]
    pub morphism: Option<String>,
    #[arg(long)]
    pub seed: Option<char>,
    /// File holding a single line of symbols.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

impl SourceArgs {
    fn any(&self) -> bool {
        self.preset.is_some()
            || self.cf.is_some()
            || self.kappa.is_some()
            || self.morphism.is_some()
            || self.input.is_some()
    }

    fn from_config(cfg: &ConfigFile) -> Result<Self, Failure> {
        Ok(SourceArgs {
            preset: cfg.get("preset")?,
            cf: cfg.get("cf")?,
            method: cfg.get("method")?,
            t0: cfg.get("t0")?,
            kappa: cfg.get("kappa")?,
            morphism: cfg.get("morphism")?,
            seed: cfg.get("seed")?,
            input: cfg.get("input")?,
        })
    }

    /// The generator named on the command line, or else in the config file.
    pub fn resolve(&self, cfg: &ConfigFile) -> Result<WordSource, Failure> {
        let args = if self.any() { self.clone() } else { Self::from_config(cfg)? };
        let chosen = [
            args.preset.is_some(),
            args.cf.is_some(),
            args.kappa.is_some(),
            args.morphism.is_some(),
            args.input.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if chosen != 1 {
            return Err(Failure::Usage(
                "choose exactly one of --preset, --cf, --kappa, --morphism, --input".into(),
            ));
        }

        let word = if let Some(p) = &args.preset {
            p.parse::<Preset>().map_err(usage)?.source()
        } else if let Some(cf) = &args.cf {
            let cf: CfExpansion = cf.parse().map_err(usage)?;
            match args.method.unwrap_or(Method::Standard) {
                Method::Standard => WordSource::Standard(cf),
                Method::Rotation => {
                    let t0 = match &args.t0 {
                        Some(t) => QuadraticReal::from_rational(
                            t.parse::<BigRational>()
                                .map_err(|e| Failure::Usage(format!("--t0 {t:?}: {e}")))?,
                        ),
                        None => QuadraticReal::zero(),
                    };
                    recur_core::rotation_source(&cf, t0).map_err(usage)?
                }
            }
        } else if let Some(k) = &args.kappa {
            WordSource::Kappa(k.parse::<KappaSequence>().map_err(usage)?)
        } else if let Some(m) = &args.morphism {
            let morphism: Morphism = m.parse().map_err(usage)?;
            let seed = args.seed.unwrap_or('0');
            if !seed.is_ascii() {
                return Err(Failure::Usage(format!("seed {seed:?} is not ASCII")));
            }
            WordSource::FixedPoint {
                morphism,
                seed: seed as u8,
            }
        } else {
            let path = args.input.as_ref().expect("one generator chosen");
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            WordSource::Text(text.trim_end().parse::<Word>().map_err(usage)?)
        };
        Ok(word)
    }
}
