use std::path::PathBuf;

use clap::{Args, ValueEnum};

use pfg_core::circuits::EvalMode;
use pfg_core::spectral::Window;
use pfg_core::{OscillationModel, ResponseModel, SpectralConfig};

use crate::exit::CliError;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct GlobalOpts {
    /// Master seed; every command is reproducible for a fixed seed.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Monte Carlo trials per input combination.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub trials: u64,
    /// JSON file overriding the default stimulus response table.
    #[arg(long, global = true, value_name = "PATH")]
    pub response_model: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for Monte Carlo (results do not depend on this).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

pub struct Context {
    pub seed: u64,
    pub trials: u64,
    pub model: ResponseModel,
    pub format: Format,
    pub workers: Option<usize>,
}

impl GlobalOpts {
    pub fn context(&self) -> Result<Context, CliError> {
        if self.trials == 0 {
            return Err(CliError::usage("--trials must be at least 1"));
        }
        let model = match &self.response_model {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
                ResponseModel::from_json(&text)
                    .map_err(|e| CliError::from(e).context(path.display()))?
            }
            None => ResponseModel::default(),
        };
        Ok(Context {
            seed: self.seed,
            trials: self.trials,
            model,
            format: self.format,
            workers: self.workers,
        })
    }
}

/// Waveform used when a gate is evaluated through a synthesized trace.
#[derive(Args, Debug, Clone)]
pub struct OscArgs {
    /// Baseline oscillation period in seconds.
    #[arg(long, default_value_t = 100.0)]
    pub period: f64,
    /// Oscillation amplitude in millivolts.
    #[arg(long, default_value_t = 5.0)]
    pub amplitude: f64,
    /// DC offset in millivolts.
    #[arg(long, default_value_t = 0.0)]
    pub dc: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sample_rate: f64,
}

impl OscArgs {
    pub fn model(&self, noise_std_mv: f64) -> OscillationModel {
        OscillationModel {
            base_period_s: self.period,
            amplitude_mv: self.amplitude,
            noise_std_mv,
            dc_offset_mv: self.dc,
            sample_rate_hz: self.sample_rate,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SpectralArgs {
    #[arg(long, value_parser = parse_window, default_value = "hann")]
    pub window: Window,
    #[arg(long, default_value_t = 8)]
    pub zero_pad: usize,
    /// Minimum peak to in-band median magnitude ratio.
    #[arg(long, default_value_t = 3.0)]
    pub min_snr: f64,
    /// Remove a linear trend before the transform.
    #[arg(long)]
    pub detrend: bool,
    /// Pre/post window length in seconds.
    #[arg(long, default_value_t = 600.0)]
    pub window_s: f64,
}

fn parse_window(s: &str) -> Result<Window, String> {
    s.parse().map_err(|e: pfg_core::SpectralError| e.to_string())
}

impl SpectralArgs {
    pub fn config(&self) -> SpectralConfig {
        SpectralConfig {
            window: self.window,
            zero_pad_factor: self.zero_pad,
            min_peak_snr: self.min_snr,
            detrend: self.detrend,
            analysis_window_s: self.window_s,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Draw Δf directly from the response model.
    Sampled,
    /// Synthesize each tube's trace and recover Δf spectrally.
    Measured,
}

/// Gate evaluation options shared by `gate run` and `circuit run`.
#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    #[arg(long, value_enum, default_value_t = Mode::Sampled)]
    pub mode: Mode,
    /// Scale on response spreads; 0 gives ideal gates (and noiseless traces
    /// in measured mode).
    #[arg(long, default_value_t = 1.0)]
    pub noise: f64,
    /// Electrode noise in millivolts for measured mode, before --noise scaling.
    #[arg(long, default_value_t = 0.5)]
    pub trace_noise: f64,
    #[command(flatten)]
    pub osc: OscArgs,
    #[command(flatten)]
    pub spectral: SpectralArgs,
}

impl EvalArgs {
    pub fn model(&self, base: &ResponseModel) -> Result<ResponseModel, CliError> {
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(CliError::usage("--noise must be a finite value >= 0"));
        }
        Ok(base.with_std_scale(self.noise))
    }

    pub fn eval_mode(&self) -> Result<EvalMode, CliError> {
        Ok(match self.mode {
            Mode::Sampled => EvalMode::Sampled,
            Mode::Measured => {
                let osc = self.osc.model(self.trace_noise * self.noise);
                osc.validate()?;
                let spectral = self.spectral.config();
                spectral.validate()?;
                EvalMode::Measured { osc, spectral }
            }
        })
    }
}

pub fn parse_bit(s: &str) -> Result<bool, String> {
    match s {
        "0" | "false" => Ok(false),
        "1" | "true" => Ok(true),
        other => Err(format!("expected 0 or 1, got {other:?}")),
    }
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>, CliError> {
    s.chars()
        .filter(|c| !matches!(c, ',' | ' ' | '_'))
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(CliError::usage(format!("input bits must be 0/1, got {other:?}"))),
        })
        .collect()
}

pub fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
