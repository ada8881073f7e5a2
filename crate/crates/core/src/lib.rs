//! Recurrence of cylinders in Sturmian and substitution subshifts: return
//! times, rates `τ(ζ_n(x))/n`, linear recurrence, maximal powers and the
//! geometric picture for codings of rotations.

pub mod cont_frac;
pub mod error;
pub mod generators;
pub mod power;
pub mod quadratic;
pub mod recurrence;
pub mod rotation;
pub mod word;

pub use cont_frac::{convergents, nearest_int_distance, quadratic_of_cf, CfExpansion, Convergent, Convergents};
pub use error::{Error, Result};
pub use generators::{
    apply, desubstitute, fixed_point_prefix, gamma, kappa_prefix, length_ratio, rho, rotation_coding_prefix,
    rotation_source, standard_word_prefix, Block, CancelToken, GeneratedWord, Kappa, KappaSequence, Morphism, Preset, RotationCoder,
    WordSource,
};
pub use power::{fractional_power, max_fractional_power, Exponent, Repetition};
pub use quadratic::QuadraticReal;
pub use recurrence::{
    lr_constant_estimate, power_report, power_report_capped, rate_series, sub_invariance_check, tau_cylinder,
    LengthRatio, LrReport, PowerReport, RateSeries, SubInvariance, TailSummary, TauSample, WindowPolicy,
    POWER_WINDOW_CAP,
};
pub use rotation::{
    atom_of, atoms, cross_check, cylinder_measure, cylinder_measures, tau_for_length, tau_interval, tower_weights,
    CrossCheck, CrossRow, IntervalAtom, RotationSpec, TowerWeights,
};
pub use word::{min_return_length, occurrences, return_word_counts, return_words, Alphabet, OccurrenceList, Symbol, Word};

/// Writes a ratio as `"num/den"`.
pub(crate) fn serde_ratio<T, S>(r: &num_rational::Ratio<T>, s: S) -> std::result::Result<S::Ok, S::Error>
where
    T: std::fmt::Display + Clone + num_integer::Integer,
    S: serde::Serializer,
{
    s.collect_str(&format_args!("{}/{}", r.numer(), r.denom()))
}

/// Writes any displayable value as a string.
pub(crate) fn serde_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn serde_opt_ratio<T, S>(r: &Option<num_rational::Ratio<T>>, s: S) -> std::result::Result<S::Ok, S::Error>
where
    T: std::fmt::Display + Clone + num_integer::Integer,
    S: serde::Serializer,
{
    match r {
        Some(r) => serde_ratio(r, s),
        None => s.serialize_none(),
    }
}
