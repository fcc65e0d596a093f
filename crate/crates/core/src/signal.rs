//! Stimulus response model and synthetic electrode traces.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Lowest post-stimulus frequency a synthesized tube may oscillate at.
pub const MIN_POST_FREQ_HZ: f64 = 0.5e-3;

/// Default baseline and response window length at 1 Hz.
pub const DEFAULT_WINDOW_S: f64 = 600.0;

/// Oscillation periods reported for shuttle streaming.
pub const PERIOD_BAND_S: (f64, f64) = (60.0, 200.0);

/// Full-scale range of the data logger.
pub const LOGGER_RANGE_MV: f64 = 39.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignalError {
    #[error("invalid duration: {window} window of {duration_s} s holds {cycles:.2} cycles at the base period (need at least 2)")]
    InvalidDuration {
        window: &'static str,
        duration_s: f64,
        cycles: f64,
    },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("invalid response model: {0}")]
    InvalidModel(String),
    #[error("trace io: {0}")]
    Io(String),
}

/// Which stimuli are applied to the tube. Heat carries input A, the oat flake
/// carries input B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StimulusPattern {
    pub heat: bool,
    pub oat: bool,
}

impl StimulusPattern {
    pub const NONE: Self = Self::new(false, false);
    pub const OAT: Self = Self::new(false, true);
    pub const HEAT: Self = Self::new(true, false);
    pub const HEAT_AND_OAT: Self = Self::new(true, true);
    pub const ALL: [Self; 4] = [Self::NONE, Self::OAT, Self::HEAT, Self::HEAT_AND_OAT];

    pub const fn new(heat: bool, oat: bool) -> Self {
        Self { heat, oat }
    }

    /// Position in `ALL`: `2·heat + oat`.
    pub const fn index(self) -> usize {
        (self.heat as usize) << 1 | self.oat as usize
    }

    /// Two-character key `"<heat><oat>"`, e.g. `"10"` for heat only.
    pub fn key(self) -> &'static str {
        ["00", "01", "10", "11"][self.index()]
    }

    pub fn name(self) -> &'static str {
        ["none", "oat", "heat", "heat+oat"][self.index()]
    }
}

impl fmt::Display for StimulusPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StimulusPattern {
    type Err = SignalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let p = match s.trim().to_ascii_lowercase().as_str() {
            "00" | "none" => Self::NONE,
            "01" | "oat" => Self::OAT,
            "10" | "heat" => Self::HEAT,
            "11" | "heat+oat" | "oat+heat" | "both" => Self::HEAT_AND_OAT,
            other => {
                return Err(SignalError::InvalidParameter {
                    name: "pattern",
                    reason: format!("unknown stimulus pattern {other:?}"),
                })
            }
        };
        Ok(p)
    }
}

/// Gaussian Δf distribution for one stimulus pattern, in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternResponse {
    pub mean_pct: f64,
    pub std_pct: f64,
}

/// Δf distribution for each of the four stimulus patterns.
///
/// The default is the measured response table: no stimulus 2.1 ± 6.9 %,
/// oat flake 12.2 ± 12.6 %, heat 19.8 ± 8.8 %, heat and oat 33.2 ± 9.6 %.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseModel {
    patterns: [PatternResponse; 4],
}

impl Default for ResponseModel {
    fn default() -> Self {
        let r = |mean_pct, std_pct| PatternResponse { mean_pct, std_pct };
        Self {
            patterns: [r(2.1, 6.9), r(12.2, 12.6), r(19.8, 8.8), r(33.2, 9.6)],
        }
    }
}

impl ResponseModel {
    /// Builds a model from responses ordered as [`StimulusPattern::ALL`].
    pub fn new(patterns: [PatternResponse; 4]) -> Result<Self, SignalError> {
        for (p, r) in StimulusPattern::ALL.iter().zip(&patterns) {
            if !r.mean_pct.is_finite() || !r.std_pct.is_finite() || r.std_pct < 0.0 {
                return Err(SignalError::InvalidModel(format!(
                    "pattern {}: need finite mean and std >= 0, got mean {} std {}",
                    p.key(),
                    r.mean_pct,
                    r.std_pct
                )));
            }
        }
        Ok(Self { patterns })
    }

    pub fn response(&self, pattern: StimulusPattern) -> PatternResponse {
        self.patterns[pattern.index()]
    }

    pub fn responses(&self) -> &[PatternResponse; 4] {
        &self.patterns
    }

    /// Same means, every std multiplied by `factor` (clamped at 0).
    pub fn with_std_scale(&self, factor: f64) -> Self {
        let mut out = *self;
        for r in &mut out.patterns {
            r.std_pct = (r.std_pct * factor).max(0.0);
        }
        out
    }

    /// Deterministic model: every draw returns the pattern mean.
    pub fn noiseless(&self) -> Self {
        self.with_std_scale(0.0)
    }

    pub fn from_json(text: &str) -> Result<Self, SignalError> {
        let doc: ResponseModelDoc =
            serde_json::from_str(text).map_err(|e| SignalError::InvalidModel(e.to_string()))?;
        let mut patterns = [PatternResponse {
            mean_pct: 0.0,
            std_pct: 0.0,
        }; 4];
        for key in doc.patterns.keys() {
            if !StimulusPattern::ALL.iter().any(|p| p.key() == key) {
                return Err(SignalError::InvalidModel(format!(
                    "unknown pattern key {key:?} (expected 00, 01, 10, 11)"
                )));
            }
        }
        for p in StimulusPattern::ALL {
            patterns[p.index()] = *doc.patterns.get(p.key()).ok_or_else(|| {
                SignalError::InvalidModel(format!("missing pattern key {:?}", p.key()))
            })?;
        }
        Self::new(patterns)
    }

    pub fn to_json(&self) -> String {
        let doc = ResponseModelDoc {
            patterns: StimulusPattern::ALL
                .iter()
                .map(|p| (p.key().to_string(), self.response(*p)))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("response model serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResponseModelDoc {
    patterns: BTreeMap<String, PatternResponse>,
}

/// Draws Δf (percent) for `pattern` from its Gaussian response.
pub fn sample_delta_f<R: Rng + ?Sized>(
    pattern: StimulusPattern,
    model: &ResponseModel,
    rng: &mut R,
) -> f64 {
    let r = model.response(pattern);
    if r.std_pct == 0.0 {
        return r.mean_pct;
    }
    Normal::new(r.mean_pct, r.std_pct)
        .expect("std validated at model construction")
        .sample(rng)
}

/// Electrode waveform parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillationModel {
    pub base_period_s: f64,
    pub amplitude_mv: f64,
    pub noise_std_mv: f64,
    pub dc_offset_mv: f64,
    pub sample_rate_hz: f64,
}

impl Default for OscillationModel {
    fn default() -> Self {
        Self {
            base_period_s: 100.0,
            amplitude_mv: 5.0,
            noise_std_mv: 0.5,
            dc_offset_mv: 0.0,
            sample_rate_hz: 1.0,
        }
    }
}

impl OscillationModel {
    pub fn base_freq_hz(&self) -> f64 {
        1.0 / self.base_period_s
    }

    pub fn validate(&self) -> Result<(), SignalError> {
        let check = |name, ok: bool, reason: &str| {
            if ok {
                Ok(())
            } else {
                Err(SignalError::InvalidParameter {
                    name,
                    reason: reason.to_string(),
                })
            }
        };
        check(
            "base_period_s",
            self.base_period_s.is_finite() && self.base_period_s > 0.0,
            "must be a positive number of seconds",
        )?;
        check(
            "amplitude_mv",
            self.amplitude_mv.is_finite() && self.amplitude_mv > 0.0,
            "must be positive",
        )?;
        check(
            "noise_std_mv",
            self.noise_std_mv.is_finite() && self.noise_std_mv >= 0.0,
            "must be >= 0",
        )?;
        check(
            "dc_offset_mv",
            self.dc_offset_mv.is_finite(),
            "must be finite",
        )?;
        check(
            "sample_rate_hz",
            self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0,
            "must be positive",
        )
    }

    /// Physical-plausibility warnings; none of these reject the model.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (lo, hi) = PERIOD_BAND_S;
        if !(lo..=hi).contains(&self.base_period_s) {
            out.push(format!(
                "base period {} s is outside the shuttle-streaming band {lo}-{hi} s",
                self.base_period_s
            ));
        }
        if self.dc_offset_mv.abs() + self.amplitude_mv > LOGGER_RANGE_MV {
            out.push(format!(
                "|dc offset| + amplitude = {} mV exceeds the ±{LOGGER_RANGE_MV} mV logger range",
                self.dc_offset_mv.abs() + self.amplitude_mv
            ));
        }
        out
    }
}

/// A sampled electrode potential with a marked stimulus onset.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    samples_mv: Vec<f64>,
    sample_rate_hz: f64,
    stimulus_onset_index: usize,
}

/// Sidecar metadata written next to a trace CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceMetadata {
    pub sample_rate_hz: f64,
    pub stimulus_onset_index: usize,
}

impl Trace {
    pub fn new(
        samples_mv: Vec<f64>,
        sample_rate_hz: f64,
        stimulus_onset_index: usize,
    ) -> Result<Self, SignalError> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(SignalError::InvalidTrace(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if stimulus_onset_index == 0 || stimulus_onset_index >= samples_mv.len() {
            return Err(SignalError::InvalidTrace(format!(
                "onset index {stimulus_onset_index} must lie strictly inside 0..{}",
                samples_mv.len()
            )));
        }
        if let Some(i) = samples_mv.iter().position(|v| !v.is_finite()) {
            return Err(SignalError::InvalidTrace(format!(
                "sample {i} is not finite"
            )));
        }
        Ok(Self {
            samples_mv,
            sample_rate_hz,
            stimulus_onset_index,
        })
    }

    pub fn samples_mv(&self) -> &[f64] {
        &self.samples_mv
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn stimulus_onset_index(&self) -> usize {
        self.stimulus_onset_index
    }

    pub fn len(&self) -> usize {
        self.samples_mv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples_mv.is_empty()
    }

    pub fn pre_window(&self) -> &[f64] {
        &self.samples_mv[..self.stimulus_onset_index]
    }

    pub fn post_window(&self) -> &[f64] {
        &self.samples_mv[self.stimulus_onset_index..]
    }

    /// Applies `f` to every sample, keeping rate and onset.
    pub fn map_samples(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            samples_mv: self.samples_mv.iter().map(|&v| f(v)).collect(),
            ..*self
        }
    }

    pub fn metadata(&self) -> TraceMetadata {
        TraceMetadata {
            sample_rate_hz: self.sample_rate_hz,
            stimulus_onset_index: self.stimulus_onset_index,
        }
    }

    /// Writes `time_s,voltage_mv` rows. Values use the shortest
    /// round-trip decimal form, so re-reading is lossless.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SignalError> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| SignalError::Io(e.to_string());
        w.write_record(["time_s", "voltage_mv"]).map_err(io)?;
        for (i, v) in self.samples_mv.iter().enumerate() {
            let t = i as f64 / self.sample_rate_hz;
            w.write_record([t.to_string(), v.to_string()]).map_err(io)?;
        }
        w.flush().map_err(|e| SignalError::Io(e.to_string()))
    }

    /// Reads a two-column (time, voltage) or one-column (voltage) export.
    ///
    /// Comma and tab delimiters are both accepted, as is an optional header
    /// row. When `sample_rate_hz` is `None` it is inferred from the time
    /// column.
    pub fn read_csv<R: Read>(
        mut input: R,
        sample_rate_hz: Option<f64>,
        stimulus_onset_index: usize,
    ) -> Result<Self, SignalError> {
        let mut text = String::new();
        input
            .read_to_string(&mut text)
            .map_err(|e| SignalError::Io(e.to_string()))?;
        let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
        let delimiter = if first.contains('\t') { b'\t' } else { b',' };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .delimiter(delimiter)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());

        let mut times = Vec::new();
        let mut volts = Vec::new();
        for (row, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| SignalError::Io(e.to_string()))?;
            if rec.iter().all(|f| f.is_empty()) {
                continue;
            }
            let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(vals) if vals.len() >= 2 => {
                    times.push(vals[0]);
                    volts.push(vals[1]);
                }
                Ok(vals) if vals.len() == 1 => volts.push(vals[0]),
                Ok(_) => unreachable!("non-empty record"),
                Err(_) if row == 0 && volts.is_empty() => continue,
                Err(e) => {
                    return Err(SignalError::Io(format!(
                        "row {}: cannot parse number: {e}",
                        row + 1
                    )))
                }
            }
        }
        let rate = match sample_rate_hz {
            Some(r) => r,
            None if times.len() >= 2 && times.len() == volts.len() => {
                let span = times[times.len() - 1] - times[0];
                if span <= 0.0 {
                    return Err(SignalError::InvalidTrace(
                        "time column is not increasing".into(),
                    ));
                }
                (times.len() - 1) as f64 / span
            }
            None => {
                return Err(SignalError::InvalidTrace(
                    "no time column; sample rate must be given".into(),
                ))
            }
        };
        Self::new(volts, rate, stimulus_onset_index)
    }
}

/// Synthesizes a trace whose frequency steps from `1/base_period_s` to
/// `f_pre·(1 + Δf/100)` at onset, with continuous phase.
pub fn synthesize_trace<R: Rng + ?Sized>(
    osc: &OscillationModel,
    delta_f_pct: f64,
    pre_duration_s: f64,
    post_duration_s: f64,
    rng: &mut R,
) -> Result<Trace, SignalError> {
    osc.validate()?;
    if !delta_f_pct.is_finite() {
        return Err(SignalError::InvalidParameter {
            name: "delta_f_pct",
            reason: "must be finite".into(),
        });
    }
    let f_pre = osc.base_freq_hz();
    for (window, duration_s) in [("pre", pre_duration_s), ("post", post_duration_s)] {
        let cycles = duration_s * f_pre;
        if !(duration_s.is_finite() && cycles >= 2.0) {
            return Err(SignalError::InvalidDuration {
                window,
                duration_s,
                cycles,
            });
        }
    }
    let f_post = (f_pre * (1.0 + delta_f_pct / 100.0)).max(MIN_POST_FREQ_HZ);
    let fs = osc.sample_rate_hz;
    let onset = (pre_duration_s * fs).round() as usize;
    let total = onset + (post_duration_s * fs).round() as usize;
    let onset_t = onset as f64 / fs;
    let tau = std::f64::consts::TAU;

    let noise = (osc.noise_std_mv > 0.0)
        .then(|| Normal::new(0.0, osc.noise_std_mv).expect("validated noise std"));
    let samples = (0..total)
        .map(|i| {
            let t = i as f64 / fs;
            let phase = if i < onset {
                tau * f_pre * t
            } else {
                tau * f_pre * onset_t + tau * f_post * (t - onset_t)
            };
            let mut v = osc.dc_offset_mv + osc.amplitude_mv * phase.sin();
            if let Some(n) = &noise {
                v += n.sample(rng);
            }
            v
        })
        .collect();
    Trace::new(samples, fs, onset)
}
