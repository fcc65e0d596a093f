use clap::{ArgAction, Args, Subcommand};
use serde_json::json;

use pfg_core::circuits::evaluate_circuit_detailed;
use pfg_core::{GateKind, GateSpec, Netlist};

use crate::exit::CliError;
use crate::opts::{parse_bit, Context, EvalArgs, Format};

#[derive(Subcommand, Debug)]
pub enum GateCommand {
    /// Evaluate one gate once for the given inputs.
    Run(RunArgs),
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long)]
    gate: GateKind,
    #[arg(long, action = ArgAction::Set, value_parser = parse_bit)]
    in_a: bool,
    /// Second input; ignored by NOT.
    #[arg(long, action = ArgAction::Set, value_parser = parse_bit, default_value = "0")]
    in_b: bool,
    #[arg(long)]
    invert_a: bool,
    #[arg(long)]
    invert_b: bool,
    #[command(flatten)]
    eval: EvalArgs,
}

pub fn run(cmd: GateCommand, ctx: &Context) -> Result<String, CliError> {
    let GateCommand::Run(args) = cmd;
    let spec = GateSpec::inverted(args.gate, args.invert_a, args.invert_b);
    let netlist = Netlist::single_gate(&spec);
    let model = args.eval.model(&ctx.model)?;
    let mode = args.eval.eval_mode()?;
    let inputs: Vec<bool> = if spec.kind.arity() == 1 {
        vec![args.in_a]
    } else {
        vec![args.in_a, args.in_b]
    };
    let run = evaluate_circuit_detailed(&netlist, &inputs, &model, &mode, ctx.seed)?;
    let out = run.outputs[0];
    let delta_f = run.delta_f_pct[0];
    let stimulus = spec.stimulus(args.in_a, args.in_b);
    let ideal = spec.ideal(args.in_a, args.in_b);

    Ok(match ctx.format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "gate": spec.kind.name(),
                "invert_a": spec.invert_a,
                "invert_b": spec.invert_b,
                "inputs": inputs.iter().map(|&b| u8::from(b)).collect::<Vec<_>>(),
                "stimulus": stimulus.name(),
                "delta_f_pct": delta_f,
                "rule": spec.rule().to_string(),
                "output": u8::from(out),
                "ideal": u8::from(ideal),
            }))
            .expect("json")
        ),
        Format::Csv => format!(
            "gate,inputs,stimulus,delta_f_pct,output,ideal\n{},{},{},{},{},{}\n",
            spec.kind.name(),
            crate::opts::bit_string(&inputs),
            stimulus.name(),
            delta_f,
            u8::from(out),
            u8::from(ideal)
        ),
        Format::Text => format!(
            "{} inputs {} stimulus {} Δf {:.3}% → {}{}\n",
            spec.kind.name(),
            crate::opts::bit_string(&inputs),
            stimulus.name(),
            delta_f,
            u8::from(out),
            if out == ideal { "" } else { " (misclassified)" }
        ),
    })
}
