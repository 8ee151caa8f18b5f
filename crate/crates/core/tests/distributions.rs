use evt_core::distributions::{
    mixture_cdf, mixture_sample, rv_cdf, rv_quantile, trunc_rv_cdf, weibull_cdf, MixtureSpec,
    SlowVaryForm, TailParams, TruncationSpec, WeibullParams,
};
use evt_core::gof::ks_test;
use evt_core::mc::{dkw_bound, replicate_rng};
use proptest::prelude::*;

fn weibull() -> impl Strategy<Value = WeibullParams> {
    (0.01f64..5.0, 0.3f64..3.0).prop_map(|(l, t)| WeibullParams::new(l, t).unwrap())
}

fn tail() -> impl Strategy<Value = TailParams> {
    let form = prop_oneof![
        Just(SlowVaryForm::Const),
        (-2.0f64..-0.1).prop_map(|p| SlowVaryForm::LogPow { power: p }),
        (0.1f64..0.9).prop_map(|p| SlowVaryForm::LogPow { power: p }),
    ];
    (1.0f64..4.0, 0.01f64..2.0, form)
        .prop_map(|(a, m, f)| TailParams::with_left_endpoint(a, m, f).unwrap())
}

fn mixture() -> impl Strategy<Value = MixtureSpec> {
    (0.001f64..0.999, weibull(), tail(), prop::option::of(1.5f64..50.0)).prop_map(|(e, w, t, lvl)| {
        let trunc = match lvl {
            Some(f) => TruncationSpec::at(f * t.m()),
            None => TruncationSpec::disabled(),
        };
        MixtureSpec::new(e, w, t, trunc).unwrap()
    })
}

proptest! {
    #[test]
    fn cdfs_are_monotone(s in mixture(), a in 0.0f64..100.0, b in 0.0f64..100.0) {
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        let t = s.tail();
        let pairs = [
            (weibull_cdf(x, s.weibull()).unwrap(), weibull_cdf(y, s.weibull()).unwrap()),
            (rv_cdf(x, t), rv_cdf(y, t)),
            (mixture_cdf(x, &s), mixture_cdf(y, &s)),
            (1.0 - s.impurity_survival(x), 1.0 - s.impurity_survival(y)),
        ];
        for (fx, fy) in pairs {
            prop_assert!((0.0..=1.0).contains(&fx) && (0.0..=1.0).contains(&fy));
            prop_assert!(fx <= fy, "{} > {} at {} <= {}", fx, fy, x, y);
        }
    }

    /// Round trip through the CDF where its value still resolves `x` to 1e-9.
    #[test]
    fn pareto_quantile_inverts_cdf(alpha in 0.5f64..4.0, m in 0.01f64..10.0, e in 0.0f64..4.0) {
        let t = TailParams::with_left_endpoint(alpha, m, SlowVaryForm::Const).unwrap();
        let x = m * 10f64.powf(e);
        // relative resolution of x through the cdf is eps / (alpha * survival)
        prop_assume!(f64::EPSILON / (alpha * t.survival(x)) < 1e-10);
        let back = rv_quantile(rv_cdf(x, &t), &t).unwrap();
        prop_assert!((back / x - 1.0).abs() <= 1e-9, "{} -> {}", x, back);
    }

    /// Survival-space round trip over the whole range `[m, 10^6 m]`.
    #[test]
    fn survival_quantile_inverts_survival(t in tail(), e in 0.0f64..6.0) {
        let x = t.m() * 10f64.powf(e);
        let back = t.quantile_survival(t.survival(x));
        prop_assert!((back / x - 1.0).abs() <= 1e-9, "{} -> {}", x, back);
    }

    #[test]
    fn weibull_quantile_inverts_cdf(w in weibull(), p in 0.0f64..0.999_999) {
        let back = weibull_cdf(w.quantile(p), &w).unwrap();
        prop_assert!((back - p).abs() <= 1e-9);
    }

    #[test]
    fn truncation_only_moves_mass_between_m_and_level(s in mixture(), f in 0.0f64..1.0) {
        prop_assume!(s.truncation().enabled);
        let level = s.truncation().level;
        let plain = MixtureSpec::new(s.eps(), *s.weibull(), *s.tail(), TruncationSpec::disabled()).unwrap();
        let m = s.tail().m();
        let below = f * m;
        prop_assert!((mixture_cdf(below, &s) - mixture_cdf(below, &plain)).abs() < 1e-15);
        let above = level * (1.0 + f);
        let want = (1.0 - s.eps()) * weibull_cdf(above, s.weibull()).unwrap() + s.eps();
        prop_assert!((mixture_cdf(above, &s) - want).abs() < 1e-12);
        prop_assert_eq!(trunc_rv_cdf(above, s.tail(), level).unwrap(), 1.0);
    }
}

#[test]
fn sampler_agrees_with_cdf_within_dkw() {
    let specs = [
        MixtureSpec::new(
            0.05,
            WeibullParams::new(1.0, 1.0).unwrap(),
            TailParams::with_left_endpoint(1.5, 0.1, SlowVaryForm::Const).unwrap(),
            TruncationSpec::disabled(),
        )
        .unwrap(),
        MixtureSpec::new(
            0.3,
            WeibullParams::new(0.5, 2.0).unwrap(),
            TailParams::with_left_endpoint(2.0, 1.0, SlowVaryForm::LogPow { power: -1.0 }).unwrap(),
            TruncationSpec::at(5.0),
        )
        .unwrap(),
    ];
    let n = 20_000;
    for (i, s) in specs.iter().enumerate() {
        for seed in 0..10 {
            let xs = mixture_sample(s, &mut replicate_rng(seed, i as u64), n);
            let d = ks_test(&xs, &|x: f64| mixture_cdf(x, s)).unwrap().statistic;
            assert!(d <= dkw_bound(n, 1e-3), "spec {i} seed {seed}: {d}");
        }
    }
}

#[test]
fn pure_weibull_draws_pass_ks() {
    let w = WeibullParams::new(1.0, 1.0).unwrap();
    let mut rng = replicate_rng(42, 0);
    let xs: Vec<f64> = (0..100_000).map(|_| w.sample(&mut rng)).collect();
    let p = ks_test(&xs, &|x: f64| weibull_cdf(x.max(0.0), &w).unwrap()).unwrap().pvalue;
    assert!(p > 0.01, "{p}");
}
