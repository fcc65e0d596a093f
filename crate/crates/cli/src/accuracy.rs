use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};

use pfg_core::analysis::comparison_csv;
use pfg_core::{
    analytic_circuit_accuracy, analytic_gate_accuracy, builtin, monte_carlo_accuracy,
    parse_netlist, published_comparison, AccuracyReport, GateKind, GateSpec, MonteCarloConfig, Netlist,
    ComparisonRow,
};

use crate::exit::CliError;
use crate::opts::{Context, EvalArgs, Format};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Mc,
    Both,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct AccuracyArgs {
    #[command(subcommand)]
    table: Option<TableCommand>,
    #[arg(long, conflicts_with_all = ["builtin", "netlist"])]
    gate: Option<GateKind>,
    #[arg(long, requires = "gate")]
    invert_a: bool,
    #[arg(long, requires = "gate")]
    invert_b: bool,
    #[arg(long, conflicts_with = "netlist")]
    builtin: Option<String>,
    #[arg(long)]
    netlist: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MethodArg::Analytic)]
    method: MethodArg,
    #[command(flatten)]
    eval: EvalArgs,
}

#[derive(Subcommand, Debug)]
enum TableCommand {
    /// Published versus modelled accuracy for every gate and circuit.
    #[command(name = "table4")]
    Comparison {
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
}

pub fn run(args: AccuracyArgs, ctx: &Context) -> Result<String, CliError> {
    let model = args.eval.model(&ctx.model)?;
    let mc_cfg = MonteCarloConfig {
        trials: ctx.trials,
        seed: ctx.seed,
        workers: ctx.workers,
        mode: args.eval.eval_mode()?,
    };
    if let Some(TableCommand::Comparison { method }) = args.table {
        let mc = (method != MethodArg::Analytic).then_some(&mc_cfg);
        let rows = published_comparison(&model, mc)?;
        return Ok(render_table(&rows, ctx.format));
    }

    let (subject, netlist, gate) = match (&args.gate, &args.builtin, &args.netlist) {
        (&Some(kind), _, _) => {
            let spec = GateSpec::inverted(kind, args.invert_a, args.invert_b);
            (kind.name().to_string(), Netlist::single_gate(&spec), Some(spec))
        }
        (None, Some(name), _) => (name.clone(), builtin(name)?, None),
        (None, None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::from(e).context(path.display()))?;
            let n = parse_netlist(&text).map_err(|e| CliError::from(e).context(path.display()))?;
            (n.name().to_string(), n, None)
        }
        (None, None, None) => {
            return Err(CliError::usage(
                "give --gate, --builtin or --netlist (or use `accuracy table4`)",
            ))
        }
    };

    let mut reports = Vec::new();
    if args.method != MethodArg::Mc {
        let mut r = match &gate {
            Some(spec) => analytic_gate_accuracy(spec, &model),
            None => analytic_circuit_accuracy(&netlist, &model)?,
        };
        r.subject.clone_from(&subject);
        reports.push(r);
    }
    if args.method != MethodArg::Analytic {
        let mut r = monte_carlo_accuracy(&netlist, &model, &mc_cfg)?;
        r.subject = subject;
        reports.push(r);
    }
    Ok(render_reports(&reports, ctx.format))
}

fn render_reports(reports: &[AccuracyReport], format: Format) -> String {
    match format {
        Format::Json => {
            let body = if let [one] = reports {
                serde_json::to_string_pretty(one)
            } else {
                serde_json::to_string_pretty(reports)
            };
            format!("{}\n", body.expect("report serializes"))
        }
        Format::Csv => {
            let mut s = String::new();
            for (i, r) in reports.iter().enumerate() {
                let csv = r.to_csv();
                // One header for the whole file.
                let body = if i == 0 { &csv[..] } else { csv.split_once('\n').map_or("", |x| x.1) };
                s.push_str(body);
            }
            s
        }
        Format::Text => {
            let mut s: String = reports.iter().map(AccuracyReport::to_text).collect();
            if let [a, m] = reports {
                if let Some(se) = m.std_error.filter(|&se| se > 0.0) {
                    let _ = writeln!(
                        s,
                        "difference: {:+.4} ({:.2} stderr)",
                        m.overall - a.overall,
                        (m.overall - a.overall).abs() / se
                    );
                }
            }
            s
        }
    }
}

fn render_table(rows: &[ComparisonRow], format: Format) -> String {
    match format {
        Format::Csv => comparison_csv(rows),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(rows).expect("rows serialize")
        ),
        Format::Text => {
            let mut s = format!(
                "{:<14} {:>5} {:>9} {:>10} {:>17}\n",
                "subject", "pfgs", "published %", "analytic %", "monte carlo %"
            );
            for r in rows {
                let mc = r
                    .monte_carlo
                    .as_ref()
                    .map(|m| {
                        format!(
                            "{:.2} ± {:.2}",
                            100.0 * m.overall,
                            100.0 * m.std_error.unwrap_or(0.0)
                        )
                    })
                    .unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    s,
                    "{:<14} {:>5} {:>9.2} {:>10.2} {:>17}{}",
                    r.subject,
                    r.pfg_count,
                    r.published_pct,
                    r.analytic_pct(),
                    mc,
                    if r.reference_only { "  (reference only)" } else { "" }
                );
            }
            s
        }
    }
}

