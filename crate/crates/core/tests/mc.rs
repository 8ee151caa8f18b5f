use evt_core::config::ModelConfig;
use evt_core::distributions::{SlowVaryForm, TailParams, WeibullParams};
use evt_core::gof::Cdf;
use evt_core::mc::{
    dkw_bound, exact_max_cdf, sample_grid, simulate_maxima, sup_grid_distance, ExactMaxCdf,
    ExperimentConfig,
};
use evt_core::regimes::ArrayModel;

fn a1_m1() -> ArrayModel {
    ArrayModel {
        k: "n".parse().unwrap(),
        eps: "n^-1 * log(n)".parse().unwrap(),
        level: Some("log(n+1)".parse().unwrap()),
        weibull: WeibullParams::new(1.0, 1.0).unwrap(),
        tail: TailParams::with_left_endpoint(1.5, 0.1, SlowVaryForm::Const).unwrap(),
    }
}

fn config(model: ArrayModel, n: u64, replicates: usize, seed: u64) -> ExperimentConfig {
    let law = model.classify().unwrap().law;
    ExperimentConfig {
        normalization: model.normalization(&law).unwrap(),
        model,
        n,
        replicates,
        seed,
    }
}

#[test]
fn exact_law_matches_high_precision_value() {
    let m = a1_m1();
    let row = m.row(1000).unwrap();
    let norm = m.normalization(&m.classify().unwrap().law).unwrap();
    let v = exact_max_cdf(&row.spec, row.k_n, 0.0, &norm, 1000).unwrap();
    // 50-digit evaluation of F(log 1000)^1000
    assert!((v / 0.370_245_749_642_821_64 - 1.0).abs() < 1e-12, "{v}");
}

#[test]
fn fixed_normalization_identity() {
    let m = a1_m1();
    let row = m.row(1000).unwrap();
    let id = evt_core::regimes::Normalization::fixed(1.0, 0.0);
    for &x in &[5.0, 7.0, 12.0] {
        let want = row.spec.cdf(x).powi(1000);
        let got = exact_max_cdf(&row.spec, 1000, x, &id, 1000).unwrap();
        assert!((got / want - 1.0).abs() < 1e-12, "{x}: {got} {want}");
    }
}

#[test]
fn batches_reproduce_and_ignore_thread_count() {
    let cfg = config(a1_m1(), 1000, 300, 99);
    let a = simulate_maxima(&cfg).unwrap();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| simulate_maxima(&cfg).unwrap());
    let c = rayon::ThreadPoolBuilder::new()
        .num_threads(7)
        .build()
        .unwrap()
        .install(|| simulate_maxima(&cfg).unwrap());
    assert_eq!(a, b);
    assert_eq!(a, c);
    let other = simulate_maxima(&config(a1_m1(), 1000, 300, 100)).unwrap();
    assert_ne!(a.raw, other.raw);
    assert_eq!(a.raw.len(), 300);
    assert_eq!(a.normalized.len(), 300);
}

#[test]
fn single_replicate_single_draw() {
    let cfg = ModelConfig::from_json(
        r#"{"k": "1", "eps": "0.05", "lambda": 1, "tau": 1, "alpha": 1.5, "m": 0.1}"#,
    )
    .unwrap();
    let model = cfg.model().unwrap();
    let batch = simulate_maxima(&ExperimentConfig {
        model,
        n: 10,
        replicates: 1,
        seed: 5,
        normalization: evt_core::regimes::Normalization::fixed(1.0, 0.0),
    })
    .unwrap();
    assert_eq!(batch.k_n, 1);
    assert_eq!(batch.raw, batch.normalized);
}

#[test]
fn simulated_ecdf_within_dkw_of_exact_law() {
    let bound = dkw_bound(1000, 1e-3);
    for (eps, level) in [
        ("n^-1 * log(n)", "log(n+1)"),
        ("n^-1 * log(n)^2", "log(n+1)^2"),
        ("n^-1 * log(n)^2", "sqrt(log(n+1))"),
    ] {
        let mut m = a1_m1();
        m.eps = eps.parse().unwrap();
        m.level = Some(level.parse().unwrap());
        let cfg = config(m.clone(), 1000, 1000, 3);
        let batch = simulate_maxima(&cfg).unwrap();
        let row = m.row(1000).unwrap();
        let exact = ExactMaxCdf {
            spec: &row.spec,
            k_n: row.k_n,
            s: batch.s_n,
            c: batch.c_n,
        };
        let d = sup_grid_distance(&batch.normalized, &exact, &sample_grid(&batch.normalized, 201));
        assert!(d <= bound, "{eps} {level}: {d}");
        assert!(exact.cdf(f64::INFINITY) == 1.0);
    }
}

#[test]
fn csv_export_layout() {
    let batch = simulate_maxima(&config(a1_m1(), 100, 3, 1)).unwrap();
    let mut out = Vec::new();
    batch.write_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "replicate,raw_max,normalized_max");
    assert_eq!(lines.len(), 4);
    let fields: Vec<f64> = lines[1].split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields, vec![0.0, batch.raw[0], batch.normalized[0]]);
}
