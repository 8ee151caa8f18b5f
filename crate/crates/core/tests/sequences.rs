use evt_core::sequences::{growth_class, ratio_limit, seq_eval, GrowthClass, LogPolySeq};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

fn exponent() -> impl Strategy<Value = f64> {
    // quarter steps keep the decimal form exact
    (-8i32..=8).prop_map(|q| q as f64 / 4.0)
}

fn any_seq() -> impl Strategy<Value = LogPolySeq> {
    (0.1f64..10.0, exponent(), exponent(), prop_oneof![Just(0.0), Just(1.0), Just(2.0)])
        .prop_map(|(c, a, b, s)| LogPolySeq::new(c, a, b, s).unwrap())
}

/// Exponents large enough that the asymptotic direction already shows
/// between 10^6 and 10^8.
fn visible_seq() -> impl Strategy<Value = LogPolySeq> {
    let npow = prop_oneof![Just(0.0), (1i32..=8).prop_map(|q| q as f64 / 4.0), (1i32..=8).prop_map(|q| -q as f64 / 4.0)];
    (0.1f64..10.0, npow, -2.0f64..2.0, prop_oneof![Just(0.0), Just(1.0)])
        .prop_map(|(c, a, b, s)| LogPolySeq::new(c, a, b, s).unwrap())
}

proptest! {
    #[test]
    fn display_parse_round_trip(s in any_seq()) {
        let text = s.to_string();
        let back: LogPolySeq = text.parse().unwrap();
        prop_assert_eq!(back.exponents(), s.exponents());
        // the shift only matters when a logarithm is present
        if s.logpow != 0.0 || s.loglogpow != 0.0 {
            prop_assert_eq!(back.shift, s.shift);
        }
        prop_assert!((back.coeff / s.coeff - 1.0).abs() < 1e-12, "{} -> {}", text, back);
    }

    #[test]
    fn ratio_with_itself_is_one(s in any_seq()) {
        prop_assert_eq!(ratio_limit(&s, &s), GrowthClass::ToConst(1.0));
    }

    #[test]
    fn positive_on_domain(s in any_seq(), n in 2u64..1_000_000) {
        prop_assert!(seq_eval(&s, n).unwrap() > 0.0);
    }
}

#[test]
fn growth_class_matches_large_n_trend() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..100 {
        let s = visible_seq().new_tree(&mut runner).unwrap().current();
        let diff = seq_eval(&s, 100_000_000).unwrap() - seq_eval(&s, 1_000_000).unwrap();
        match growth_class(&s) {
            GrowthClass::ToInfinity => assert!(diff > 0.0, "{s}"),
            GrowthClass::ToZero => assert!(diff < 0.0, "{s}"),
            GrowthClass::ToConst(c) => {
                assert!(diff.abs() <= 1e-12 * c, "{s}");
                assert_eq!(c, s.coeff);
            }
        }
    }
}

#[test]
fn simulation_sequences_parse() {
    for (text, at_1000) in [
        ("n^-1 * log(n)", 1000f64.ln() / 1000.0),
        ("n^-1 * log(n)^2", 0.047_717_082_994_305_58),
        ("log(n+1)", 1001f64.ln()),
        ("log(n+1)^2", 1001f64.ln().powi(2)),
        ("sqrt(log(n+1))", 1001f64.ln().sqrt()),
    ] {
        let s: LogPolySeq = text.parse().unwrap();
        let v = seq_eval(&s, 1000).unwrap();
        assert!((v / at_1000 - 1.0).abs() < 1e-14, "{text}: {v}");
    }
}

#[test]
fn parse_error_positions() {
    for (text, pos) in [("n^", 2), ("2 * x", 4), ("log(n", 5), ("n * ", 4), ("", 0)] {
        match text.parse::<LogPolySeq>() {
            Err(evt_core::error::Error::Parse { position, .. }) => assert_eq!(position, pos, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}
