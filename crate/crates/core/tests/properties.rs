use proptest::prelude::*;
use recur_core::{
    atom_of, cross_check, cylinder_measures, fractional_power, max_fractional_power, min_return_length, occurrences,
    rotation_source, tau_cylinder, tau_interval, CfExpansion, Exponent, GeneratedWord, Kappa, KappaSequence,
    QuadraticReal, RotationSpec, WindowPolicy, Word, WordSource,
};

fn small_policy() -> WindowPolicy {
    WindowPolicy {
        initial_min: 1_000,
        per_n: 50,
        cap: 2_000_000,
    }
}

fn periodic_cf() -> impl Strategy<Value = CfExpansion> {
    (
        prop::collection::vec(1u64..=4, 0..3),
        prop::collection::vec(1u64..=4, 1..4),
    )
        .prop_map(|(pre, per)| CfExpansion::new(pre, per).unwrap())
}

fn kappa_seq() -> impl Strategy<Value = KappaSequence> {
    prop::collection::vec((any::<bool>(), 1u32..=3), 1..8).prop_map(|v| {
        KappaSequence::new(
            v.into_iter()
                .map(|(r, n)| if r { Kappa::Rho(n) } else { Kappa::Gamma(n) })
                .collect(),
        )
        .unwrap()
    })
}

fn binary_word(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(prop::sample::select(vec![b'0', b'1']), 1..max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rotation_and_standard_words_agree(cf in periodic_cf()) {
        let rot = rotation_source(&cf, QuadraticReal::zero()).unwrap().generate(5_000).unwrap();
        let std = WordSource::Standard(cf.clone()).generate(5_000).unwrap();
        prop_assert_eq!(rot, std);
    }

    #[test]
    fn symbolic_and_geometric_tau_agree(cf in periodic_cf()) {
        let spec = RotationSpec::from_cf(&cf).unwrap();
        let x = GeneratedWord::from_source(rotation_source(&cf, QuadraticReal::zero()).unwrap(), 100).unwrap();
        let report = cross_check(&spec, &x, 40, &small_policy()).unwrap();
        prop_assert!(report.is_clean(), "{:?}", report.mismatches().next());
    }

    #[test]
    fn cylinder_measures_form_a_distribution(cf in periodic_cf(), len in 1usize..12) {
        let spec = RotationSpec::from_cf(&cf).unwrap();
        let table = cylinder_measures(&spec, len).unwrap();
        prop_assert_eq!(table.len(), len + 1);
        let total = table.iter().fold(QuadraticReal::zero(), |acc, (_, m)| &acc + m);
        prop_assert_eq!(total, QuadraticReal::one());
    }

    #[test]
    fn deeper_atoms_return_later(cf in periodic_cf(), n in 1usize..60) {
        let spec = RotationSpec::from_cf(&cf).unwrap();
        let a = tau_interval(&spec, &atom_of(&spec, &QuadraticReal::zero(), n).unwrap()).unwrap();
        let b = tau_interval(&spec, &atom_of(&spec, &QuadraticReal::zero(), n + 1).unwrap()).unwrap();
        prop_assert!(a <= b);
    }

    #[test]
    fn kappa_prefixes_extend(ks in kappa_seq(), len in 1usize..2_000) {
        let src = WordSource::Kappa(ks.clone());
        let reach = ks.reach();
        prop_assume!(2 * len <= reach);
        let a = src.generate(len).unwrap();
        let b = src.generate(2 * len).unwrap();
        prop_assert!(b.starts_with(&a));
    }

    #[test]
    fn kappa_ratios_stay_below_two(ks in kappa_seq()) {
        for k in 1..=ks.len() {
            let r = ks.length_ratio(k).unwrap();
            prop_assert!(r >= num_rational::BigRational::from_integer(1.into()));
            prop_assert!(r < num_rational::BigRational::from_integer(2.into()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn min_return_is_min_gap(text in binary_word(200), len in 1usize..5) {
        prop_assume!(len <= text.len());
        let u = &text[..len];
        let occ = occurrences(u, &text).unwrap();
        match min_return_length(u, &text) {
            Ok(m) => prop_assert_eq!(Some(m), occ.min_gap()),
            Err(_) => prop_assert!(occ.positions.len() < 2),
        }
    }

    #[test]
    fn return_words_have_two_occurrences(text in binary_word(200), len in 1usize..4) {
        prop_assume!(len <= text.len());
        let u = &text[..len];
        if let Ok(words) = recur_core::return_words(u, &text) {
            for w in words {
                let wu = w.concat(u);
                prop_assert!(wu.starts_with(u));
                prop_assert_eq!(occurrences(u, &wu).unwrap().positions.len(), 2);
            }
        }
    }

    #[test]
    fn power_witness_round_trips(text in binary_word(120)) {
        let r = max_fractional_power(&text);
        prop_assert!(r.verify(&text));
        let spelled = fractional_power(&r.factor, r.exponent);
        prop_assert_eq!(spelled.len(), r.factor.len() * r.exponent.numer() / r.exponent.denom());
        prop_assert!(r.exponent >= Exponent::from_integer(1));
    }

    #[test]
    fn tau_never_exceeds_a_visible_gap(text in binary_word(64), n in 1usize..6) {
        prop_assume!(n <= text.len());
        let x = GeneratedWord::from_text(Word::from(&text[..]));
        let s = tau_cylinder(&x, n, &small_policy()).unwrap();
        prop_assert!(!s.stabilized);
        prop_assert_eq!(s.tau, occurrences(&text[..n], &text).unwrap().min_gap());
    }
}
