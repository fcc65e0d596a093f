use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde_json::json;

use pfg_core::circuits::{evaluate_circuit_detailed, MAX_TRUTH_TABLE_INPUTS};
use pfg_core::{builtin, ideal_truth_table, parse_netlist, Netlist};

use crate::exit::CliError;
use crate::opts::{bit_string, parse_bits, Context, EvalArgs, Format};

#[derive(Subcommand, Debug)]
pub enum CircuitCommand {
    /// Evaluate a circuit once for the given inputs.
    Run(RunArgs),
    /// Validate a netlist and print its ideal truth table.
    Check(SourceArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Built-in circuit: half_adder, full_adder, decoder_2to4, xor_from_nand.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Netlist file in the circuit DSL.
    #[arg(long)]
    pub netlist: Option<PathBuf>,
}

impl SourceArgs {
    pub fn load(&self) -> Result<Netlist, CliError> {
        match (&self.builtin, &self.netlist) {
            (Some(name), _) => Ok(builtin(name)?),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::from(e).context(path.display()))?;
                parse_netlist(&text).map_err(|e| CliError::from(e).context(path.display()))
            }
            (None, None) => Err(CliError::usage("give --builtin or --netlist")),
        }
    }
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Input bits in declared input order, e.g. 110.
    #[arg(long)]
    inputs: String,
    #[command(flatten)]
    eval: EvalArgs,
}

pub fn run(cmd: CircuitCommand, ctx: &Context) -> Result<String, CliError> {
    match cmd {
        CircuitCommand::Run(args) => run_once(args, ctx),
        CircuitCommand::Check(source) => check(source, ctx),
    }
}

fn run_once(args: RunArgs, ctx: &Context) -> Result<String, CliError> {
    let n = args.source.load()?;
    let inputs = parse_bits(&args.inputs)?;
    if inputs.len() != n.inputs().len() {
        return Err(CliError::usage(format!(
            "circuit `{}` takes {} input bits ({}), got {}",
            n.name(),
            n.inputs().len(),
            n.inputs().join(" "),
            inputs.len()
        )));
    }
    let model = args.eval.model(&ctx.model)?;
    let mode = args.eval.eval_mode()?;
    let run = evaluate_circuit_detailed(&n, &inputs, &model, &mode, ctx.seed)?;
    let names: Vec<&str> = n.outputs().iter().map(|(o, _)| o.as_str()).collect();

    Ok(match ctx.format {
        Format::Json => {
            let outputs: serde_json::Map<_, _> = names
                .iter()
                .zip(&run.outputs)
                .map(|(name, &b)| (name.to_string(), json!(u8::from(b))))
                .collect();
            let gates: Vec<_> = n
                .gates()
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    json!({
                        "id": g.id,
                        "kind": g.kind.name(),
                        "delta_f_pct": run.delta_f_pct[i],
                        "output": u8::from(run.gate_outputs[i]),
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "circuit": n.name(),
                    "inputs": bit_string(&inputs),
                    "outputs": outputs,
                    "bits": bit_string(&run.outputs),
                    "ideal": bit_string(&n.ideal_outputs(&inputs)),
                    "gates": gates,
                }))
                .expect("json")
            )
        }
        Format::Csv => {
            let mut s = names.join(",");
            s.push('\n');
            let cells: Vec<&str> = run.outputs.iter().map(|&b| if b { "1" } else { "0" }).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
            s
        }
        Format::Text => {
            let pairs: Vec<String> = names
                .iter()
                .zip(&run.outputs)
                .map(|(name, &b)| format!("{name}={}", u8::from(b)))
                .collect();
            format!("{} ({})\n", pairs.join(" "), bit_string(&run.outputs))
        }
    })
}

fn check(source: SourceArgs, ctx: &Context) -> Result<String, CliError> {
    let n = source.load()?;
    if n.inputs().len() > MAX_TRUTH_TABLE_INPUTS {
        return Err(CliError::capability(format!(
            "truth tables are limited to {MAX_TRUTH_TABLE_INPUTS} inputs"
        )));
    }
    let table = ideal_truth_table(&n);
    Ok(match ctx.format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let k = n.inputs().len();
            let rows: Vec<_> = table
                .rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    json!({
                        "inputs": bit_string(&pfg_core::TruthTable::inputs_of(k, i)),
                        "outputs": bit_string(row),
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "circuit": n.name(),
                    "inputs": n.inputs(),
                    "outputs": table.output_names,
                    "gates": n.gate_count(),
                    "truth_table": rows,
                }))
                .expect("json")
            )
        }
        Format::Text => format!(
            "circuit {}: {} inputs, {} gates, {} outputs, ok\n{}",
            n.name(),
            n.inputs().len(),
            n.gate_count(),
            n.outputs().len(),
            table.to_csv()
        ),
    })
}
