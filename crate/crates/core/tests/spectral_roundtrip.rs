use pfg_core::seed::rng_from;
use pfg_core::{
    compute_delta_f, estimate_dominant_frequency, synthesize_trace, OscillationModel,
    SpectralConfig, Trace,
};

const DELTAS: [f64; 6] = [-10.0, 0.0, 2.1, 12.2, 19.8, 33.2];
const PERIODS: [f64; 3] = [60.0, 100.0, 200.0];

fn noiseless(period: f64) -> OscillationModel {
    OscillationModel {
        base_period_s: period,
        noise_std_mv: 0.0,
        ..Default::default()
    }
}

fn recover(trace: &Trace, cfg: &SpectralConfig) -> f64 {
    compute_delta_f(trace, cfg).unwrap().delta_f_pct
}

fn round_trip_errors(cfg: &SpectralConfig) -> Vec<f64> {
    let mut errs = Vec::new();
    for period in PERIODS {
        for df in DELTAS {
            let t = synthesize_trace(&noiseless(period), df, 600.0, 600.0, &mut rng_from(0)).unwrap();
            errs.push((recover(&t, cfg) - df).abs());
        }
    }
    errs
}

#[test]
fn noiseless_round_trip_within_half_point() {
    let cfg = SpectralConfig::default();
    for (i, e) in round_trip_errors(&cfg).iter().enumerate() {
        assert!(*e <= 0.5, "case {i}: error {e}");
    }
}

#[test]
fn construction_examples() {
    let cfg = SpectralConfig::default();
    let t = synthesize_trace(&noiseless(100.0), 20.0, 600.0, 600.0, &mut rng_from(0)).unwrap();
    let a = compute_delta_f(&t, &cfg).unwrap();
    assert!((a.delta_f_pct - 20.0).abs() <= 0.5);
    assert!((a.f_pre_hz - 0.010).abs() < 0.05e-3);
    assert!((a.f_post_hz - 0.012).abs() < 0.05e-3);
    assert_eq!(a.window_s, 600.0);
    assert_eq!(a.method, "dft-quadratic");

    let t = synthesize_trace(&noiseless(100.0), 0.0, 600.0, 600.0, &mut rng_from(0)).unwrap();
    let pre = estimate_dominant_frequency(t.pre_window(), 1.0, &cfg).unwrap();
    let post = estimate_dominant_frequency(t.post_window(), 1.0, &cfg).unwrap();
    assert!((pre.freq_hz - post.freq_hz).abs() < 1e-9);
    assert!(recover(&t, &cfg).abs() < 1e-6);
}

#[test]
fn noisy_round_trip_at_heat_and_oat_median() {
    let osc = OscillationModel {
        base_period_s: 100.0,
        amplitude_mv: 5.0,
        noise_std_mv: 0.5,
        ..Default::default()
    };
    let cfg = SpectralConfig::default();
    for seed in 0..20 {
        let t = synthesize_trace(&osc, 33.2, 600.0, 600.0, &mut rng_from(seed)).unwrap();
        let got = recover(&t, &cfg);
        assert!((got - 33.2).abs() <= 1.0, "seed {seed}: {got}");
    }
}

#[test]
fn amplitude_and_offset_invariance() {
    let cfg = SpectralConfig::default();
    let osc = OscillationModel {
        noise_std_mv: 0.3,
        ..Default::default()
    };
    let t = synthesize_trace(&osc, 12.2, 600.0, 600.0, &mut rng_from(11)).unwrap();
    let base = recover(&t, &cfg);
    for k in [0.25, 2.0, 3.7, 1e3] {
        let scaled = recover(&t.map_samples(|v| v * k), &cfg);
        assert!((scaled - base).abs() < 1e-9, "k={k}: {scaled} vs {base}");
    }
    for c in [-20.0, 0.5, 35.0] {
        let shifted = recover(&t.map_samples(|v| v + c), &cfg);
        assert!((shifted - base).abs() < 1e-9, "c={c}: {shifted} vs {base}");
    }
}

#[test]
fn zero_padding_does_not_hurt_resolution() {
    let err = |pad| {
        let cfg = SpectralConfig {
            zero_pad_factor: pad,
            ..Default::default()
        };
        round_trip_errors(&cfg)
    };
    let coarse = err(1);
    let fine = err(8);
    let total = |v: &[f64]| v.iter().sum::<f64>();
    let worst = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    assert!(total(&fine) <= total(&coarse), "{} > {}", total(&fine), total(&coarse));
    assert!(worst(&fine) <= worst(&coarse));
}

#[test]
fn short_traces_use_available_samples() {
    // 400 s windows: two periods at the slowest baseline.
    let t = synthesize_trace(&noiseless(200.0), 12.2, 400.0, 400.0, &mut rng_from(0)).unwrap();
    let a = compute_delta_f(&t, &SpectralConfig::default()).unwrap();
    assert_eq!(a.window_s, 400.0);
    assert!((a.delta_f_pct - 12.2).abs() < 1.0, "{}", a.delta_f_pct);
}
