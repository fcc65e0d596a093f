//! Dominant-frequency estimation and Δf recovery.
//!
//! Each window is mean-removed (optionally linearly detrended), tapered,
//! zero-padded and transformed. The largest in-band magnitude bin is refined
//! with a three-point parabola fitted to log-magnitude. A 600-sample window
//! at 1 Hz has a raw bin width of 1.67 mHz, far too coarse for percent-level
//! Δf on 5-17 mHz oscillations; padding and interpolation bring the bias well
//! below 0.5 percentage points.

use std::fmt;
use std::str::FromStr;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::signal::{Trace, DEFAULT_WINDOW_S};

pub const MIN_SAMPLES: usize = 64;

/// Analysis method tag written into JSON records.
pub const METHOD_TAG: &str = "dft-quadratic";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowSide {
    Pre,
    Post,
}

impl fmt::Display for WindowSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowSide::Pre => "pre-stimulus",
            WindowSide::Post => "post-stimulus",
        })
    }
}

fn side_prefix(side: &Option<WindowSide>) -> String {
    side.map(|s| format!("{s} window: ")).unwrap_or_default()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("{}window too short: {len} samples (need at least {min})", side_prefix(.window))]
    TooShort {
        window: Option<WindowSide>,
        len: usize,
        min: usize,
    },
    #[error("{}no oscillation detected (peak {peak:.3e}, in-band median {median:.3e})", side_prefix(.window))]
    NoOscillationDetected {
        window: Option<WindowSide>,
        peak: f64,
        median: f64,
    },
    #[error("invalid spectral configuration: {0}")]
    InvalidConfig(String),
}

impl SpectralError {
    fn in_window(self, side: WindowSide) -> Self {
        match self {
            SpectralError::TooShort { len, min, .. } => SpectralError::TooShort {
                window: Some(side),
                len,
                min,
            },
            SpectralError::NoOscillationDetected { peak, median, .. } => {
                SpectralError::NoOscillationDetected {
                    window: Some(side),
                    peak,
                    median,
                }
            }
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    Rectangular,
    #[default]
    Hann,
}

impl FromStr for Window {
    type Err = SpectralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hann" | "hanning" => Ok(Window::Hann),
            "rect" | "rectangular" | "none" => Ok(Window::Rectangular),
            other => Err(SpectralError::InvalidConfig(format!(
                "unknown window {other:?}"
            ))),
        }
    }
}

impl Window {
    fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; n],
            // Periodic Hann.
            Window::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * (std::f64::consts::TAU * i as f64 / n as f64).cos())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    pub window: Window,
    pub zero_pad_factor: usize,
    /// Inclusive peak-search band in hertz.
    pub search_band_hz: (f64, f64),
    /// Required ratio of the peak to the median in-band magnitude.
    pub min_peak_snr: f64,
    /// Remove a least-squares line instead of only the mean.
    pub detrend: bool,
    /// Length of the pre- and post-onset windows used for Δf.
    pub analysis_window_s: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            window: Window::Hann,
            zero_pad_factor: 8,
            // Periods of 30-400 s: the 60-200 s baseline band widened so that
            // stimulus-shifted post-onset frequencies (up to about +70 %, down
            // to about -50 %) still fall inside.
            search_band_hz: (1.0 / 400.0, 1.0 / 30.0),
            min_peak_snr: 3.0,
            detrend: false,
            analysis_window_s: DEFAULT_WINDOW_S,
        }
    }
}

impl SpectralConfig {
    pub fn validate(&self) -> Result<(), SpectralError> {
        let (lo, hi) = self.search_band_hz;
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi) {
            return Err(SpectralError::InvalidConfig(format!(
                "search band must satisfy 0 <= lo < hi, got [{lo}, {hi}]"
            )));
        }
        if self.zero_pad_factor < 1 {
            return Err(SpectralError::InvalidConfig(
                "zero_pad_factor must be >= 1".into(),
            ));
        }
        if self.min_peak_snr.is_nan() || self.min_peak_snr < 0.0 {
            return Err(SpectralError::InvalidConfig(
                "min_peak_snr must be >= 0".into(),
            ));
        }
        if self.analysis_window_s.is_nan() || self.analysis_window_s <= 0.0 {
            return Err(SpectralError::InvalidConfig(
                "analysis_window_s must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyEstimate {
    pub freq_hz: f64,
    pub peak_magnitude: f64,
    pub band_lo_hz: f64,
    pub band_hi_hz: f64,
}

/// Result of comparing the windows either side of stimulus onset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaFAnalysis {
    pub f_pre_hz: f64,
    pub f_post_hz: f64,
    pub delta_f_pct: f64,
    pub window_s: f64,
    pub method: String,
}

fn remove_trend(samples: &[f64], linear: bool) -> Vec<f64> {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if !linear {
        return samples.iter().map(|v| v - mean).collect();
    }
    let t_mean = (n - 1.0) / 2.0;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, v) in samples.iter().enumerate() {
        let dt = i as f64 - t_mean;
        sxy += dt * (v - mean);
        sxx += dt * dt;
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    samples
        .iter()
        .enumerate()
        .map(|(i, v)| v - mean - slope * (i as f64 - t_mean))
        .collect()
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}

/// Estimates the dominant oscillation frequency of `samples`.
pub fn estimate_dominant_frequency(
    samples: &[f64],
    sample_rate_hz: f64,
    cfg: &SpectralConfig,
) -> Result<FrequencyEstimate, SpectralError> {
    cfg.validate()?;
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(SpectralError::InvalidConfig(format!(
            "sample rate must be positive, got {sample_rate_hz}"
        )));
    }
    let n = samples.len();
    if n < MIN_SAMPLES {
        return Err(SpectralError::TooShort {
            window: None,
            len: n,
            min: MIN_SAMPLES,
        });
    }
    let (band_lo_hz, band_hi_hz) = cfg.search_band_hz;
    let no_osc = |peak, median| SpectralError::NoOscillationDetected {
        window: None,
        peak,
        median,
    };

    let centred = remove_trend(samples, cfg.detrend);
    let raw_scale = samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let residual = centred.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if residual <= 1e-10 * raw_scale || residual == 0.0 {
        return Err(no_osc(0.0, 0.0));
    }

    let fft_len = n * cfg.zero_pad_factor;
    let mut buf: Vec<Complex<f64>> = centred
        .iter()
        .zip(cfg.window.coefficients(n))
        .map(|(v, w)| Complex::new(v * w, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(fft_len)
        .collect();
    FftPlanner::new().plan_fft_forward(fft_len).process(&mut buf);
    let magnitude: Vec<f64> = buf[..=fft_len / 2].iter().map(|c| c.norm()).collect();

    let bin_hz = sample_rate_hz / fft_len as f64;
    let first = (band_lo_hz / bin_hz).ceil() as usize;
    let last = ((band_hi_hz / bin_hz).floor() as usize).min(magnitude.len() - 1);
    if first > last {
        return Err(SpectralError::InvalidConfig(format!(
            "search band [{band_lo_hz}, {band_hi_hz}] Hz holds no DFT bin at {bin_hz} Hz resolution"
        )));
    }
    let in_band = &magnitude[first..=last];
    let (offset, &peak) = in_band
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, &f64)>, (i, m)| match best {
            Some((_, b)) if *b >= *m => best,
            _ => Some((i, m)),
        })
        .expect("non-empty band");
    let med = median(&mut in_band.to_vec());
    if peak.is_nan() || peak <= 0.0 || peak < cfg.min_peak_snr * med {
        return Err(no_osc(peak, med));
    }

    let k = first + offset;
    let shift = if k >= 1 && k + 1 < magnitude.len() {
        let (a, c) = (magnitude[k - 1], magnitude[k + 1]);
        if a > 0.0 && c > 0.0 {
            // Parabola through ln(a/p), 0, ln(c/p).
            let la = (a / peak).ln();
            let lc = (c / peak).ln();
            let denom = la + lc;
            if denom < 0.0 {
                (0.5 * (la - lc) / denom).clamp(-0.5, 0.5)
            } else {
                0.0
            }
        } else {
            0.0
        }
    } else {
        0.0
    };
    let freq_hz = ((k as f64 + shift) * bin_hz).clamp(band_lo_hz, band_hi_hz);
    Ok(FrequencyEstimate {
        freq_hz,
        peak_magnitude: peak,
        band_lo_hz,
        band_hi_hz,
    })
}

/// Percent frequency change across the stimulus onset,
/// `(f_post / f_pre − 1) × 100`.
pub fn compute_delta_f(trace: &Trace, cfg: &SpectralConfig) -> Result<DeltaFAnalysis, SpectralError> {
    cfg.validate()?;
    let fs = trace.sample_rate_hz();
    let window_len = (cfg.analysis_window_s * fs).round() as usize;
    let onset = trace.stimulus_onset_index();
    let samples = trace.samples_mv();
    let pre = &samples[onset.saturating_sub(window_len)..onset];
    let post = &samples[onset..(onset + window_len).min(samples.len())];

    let f_pre = estimate_dominant_frequency(pre, fs, cfg)
        .map_err(|e| e.in_window(WindowSide::Pre))?
        .freq_hz;
    let f_post = estimate_dominant_frequency(post, fs, cfg)
        .map_err(|e| e.in_window(WindowSide::Post))?
        .freq_hz;
    Ok(DeltaFAnalysis {
        f_pre_hz: f_pre,
        f_post_hz: f_post,
        delta_f_pct: (f_post / f_pre - 1.0) * 100.0,
        window_s: pre.len().min(post.len()) as f64 / fs,
        method: METHOD_TAG.to_string(),
    })
}
