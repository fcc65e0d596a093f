use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use serde_json::json;

use pfg_core::gates::{classify, threshold_rule_for};
use pfg_core::seed::rng_from;
use pfg_core::signal::TraceMetadata;
use pfg_core::{compute_delta_f, sample_delta_f, synthesize_trace, GateKind, StimulusPattern, Trace};

use crate::exit::CliError;
use crate::opts::{Context, Format, OscArgs, SpectralArgs};

#[derive(Subcommand, Debug)]
pub enum TraceCommand {
    /// Synthesize an electrode trace with a frequency step at onset.
    Synth(SynthArgs),
    /// Estimate f_pre, f_post and Δf from a trace CSV.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[command(flatten)]
    osc: OscArgs,
    /// Electrode noise standard deviation in millivolts.
    #[arg(long, default_value_t = 0.5)]
    noise: f64,
    /// Seconds recorded before onset.
    #[arg(long, default_value_t = 600.0)]
    pre: f64,
    /// Seconds recorded after onset.
    #[arg(long, default_value_t = 600.0)]
    post: f64,
    /// Explicit frequency change in percent.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "pattern")]
    delta_f: Option<f64>,
    /// Draw Δf from the response model for this stimulus (none, oat, heat, heat+oat).
    #[arg(long)]
    pattern: Option<StimulusPattern>,
    /// Output CSV; metadata goes to the same path with a .json extension.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    input: PathBuf,
    /// Stimulus onset sample index; read from the .json sidecar if omitted.
    #[arg(long)]
    onset: Option<usize>,
    /// Sample rate in Hz; inferred from the time column if omitted.
    #[arg(long)]
    sample_rate: Option<f64>,
    /// Classify the measured Δf with this gate's threshold rule.
    #[arg(long)]
    gate: Option<GateKind>,
    #[command(flatten)]
    spectral: SpectralArgs,
}

pub fn run(cmd: TraceCommand, ctx: &Context) -> Result<String, CliError> {
    match cmd {
        TraceCommand::Synth(args) => synth(args, ctx),
        TraceCommand::Analyze(args) => analyze(args, ctx),
    }
}

fn synth(args: SynthArgs, ctx: &Context) -> Result<String, CliError> {
    let osc = args.osc.model(args.noise);
    osc.validate()?;
    for w in osc.warnings() {
        eprintln!("warning: {w}");
    }
    let mut rng = rng_from(ctx.seed);
    let delta_f = match (args.delta_f, args.pattern) {
        (Some(df), _) => df,
        (None, Some(p)) => sample_delta_f(p, &ctx.model, &mut rng),
        (None, None) => 0.0,
    };
    let trace = synthesize_trace(&osc, delta_f, args.pre, args.post, &mut rng)?;
    match args.out {
        Some(path) => {
            let file = File::create(&path).map_err(|e| CliError::from(e).context(path.display()))?;
            trace.write_csv(BufWriter::new(file))?;
            let meta = sidecar_path(&path);
            let body = serde_json::to_string_pretty(&trace.metadata()).expect("metadata serializes");
            std::fs::write(&meta, body + "\n").map_err(|e| CliError::from(e).context(meta.display()))?;
            Ok(match ctx.format {
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&json!({
                        "trace": path,
                        "metadata": meta,
                        "delta_f_pct": delta_f,
                        "samples": trace.len(),
                    }))
                    .expect("summary serializes")
                ),
                _ => format!(
                    "wrote {} ({} samples, Δf {delta_f}%) and {}\n",
                    path.display(),
                    trace.len(),
                    meta.display()
                ),
            })
        }
        None => {
            let mut buf = Vec::new();
            trace.write_csv(&mut buf)?;
            Ok(String::from_utf8(buf).expect("csv is utf-8"))
        }
    }
}

fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn analyze(args: AnalyzeArgs, ctx: &Context) -> Result<String, CliError> {
    let onset = match args.onset {
        Some(i) => i,
        None => {
            let meta_path = sidecar_path(&args.input);
            let text = std::fs::read_to_string(&meta_path).map_err(|e| {
                CliError::usage(format!(
                    "no --onset given and {} is unreadable: {e}",
                    meta_path.display()
                ))
            })?;
            let meta: TraceMetadata = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", meta_path.display())))?;
            meta.stimulus_onset_index
        }
    };
    let file = File::open(&args.input).map_err(|e| CliError::from(e).context(args.input.display()))?;
    let trace = Trace::read_csv(file, args.sample_rate, onset)
        .map_err(|e| CliError::from(e).context(args.input.display()))?;
    let cfg = args.spectral.config();
    cfg.validate()?;
    let analysis = compute_delta_f(&trace, &cfg)?;
    let bit = args
        .gate
        .map(|k| classify(analysis.delta_f_pct, &threshold_rule_for(k)));

    Ok(match ctx.format {
        Format::Json => {
            let mut v = serde_json::to_value(&analysis).expect("analysis serializes");
            if let (Some(k), Some(b)) = (args.gate, bit) {
                v["gate"] = json!(k.name());
                v["output"] = json!(u8::from(b));
            }
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Csv => {
            let mut header = "f_pre_hz,f_post_hz,delta_f_pct,window_s,method".to_string();
            let mut row = format!(
                "{},{},{},{},{}",
                analysis.f_pre_hz,
                analysis.f_post_hz,
                analysis.delta_f_pct,
                analysis.window_s,
                analysis.method
            );
            if let (Some(k), Some(b)) = (args.gate, bit) {
                header.push_str(",gate,output");
                row.push_str(&format!(",{},{}", k.name(), u8::from(b)));
            }
            format!("{header}\n{row}\n")
        }
        Format::Text => {
            let mut s = format!(
                "f_pre  {:.6} Hz\nf_post {:.6} Hz\nΔf     {:.3} %\nwindow {} s ({})\n",
                analysis.f_pre_hz,
                analysis.f_post_hz,
                analysis.delta_f_pct,
                analysis.window_s,
                analysis.method
            );
            if let (Some(k), Some(b)) = (args.gate, bit) {
                s.push_str(&format!("{} → {}\n", k.name(), u8::from(b)));
            }
            s
        }
    })
}
