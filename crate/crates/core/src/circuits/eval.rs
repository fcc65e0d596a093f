use rand::Rng;
use thiserror::Error;

use super::Netlist;
use crate::gates::classify;
use crate::seed::gate_rng;
use crate::signal::{
    sample_delta_f, synthesize_trace, OscillationModel, ResponseModel, SignalError,
    StimulusPattern,
};
use crate::spectral::{compute_delta_f, SpectralConfig, SpectralError};

pub const MAX_TRUTH_TABLE_INPUTS: usize = 16;

/// How a tube's Δf is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum EvalMode {
    /// Draw Δf directly from the response model.
    #[default]
    Sampled,
    /// Draw Δf, synthesize the electrode trace and recover Δf spectrally.
    Measured {
        osc: OscillationModel,
        spectral: SpectralConfig,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("gate `{gate}`: {source}")]
    Gate {
        gate: String,
        #[source]
        source: Box<MeasureError>,
    },
}

impl EvalMode {
    /// Δf (percent) one tube reports for `pattern`.
    pub fn delta_f<R: Rng + ?Sized>(
        &self,
        pattern: StimulusPattern,
        model: &ResponseModel,
        rng: &mut R,
    ) -> Result<f64, MeasureError> {
        let injected = sample_delta_f(pattern, model, rng);
        match self {
            EvalMode::Sampled => Ok(injected),
            EvalMode::Measured { osc, spectral } => {
                let window = spectral.analysis_window_s;
                let trace = synthesize_trace(osc, injected, window, window, rng)?;
                Ok(compute_delta_f(&trace, spectral)?.delta_f_pct)
            }
        }
    }
}

/// Everything observable about one evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitRun {
    pub outputs: Vec<bool>,
    /// Output bit of each gate, in declaration order.
    pub gate_outputs: Vec<bool>,
    /// Δf each gate reported, in declaration order.
    pub delta_f_pct: Vec<f64>,
}

/// Cascaded evaluation with per-gate draws keyed by `(trial_seed, gate id)`.
pub fn evaluate_circuit_detailed(
    n: &Netlist,
    inputs: &[bool],
    model: &ResponseModel,
    mode: &EvalMode,
    trial_seed: u64,
) -> Result<CircuitRun, MeasureError> {
    assert_eq!(
        inputs.len(),
        n.inputs().len(),
        "circuit `{}` takes {} inputs",
        n.name(),
        n.inputs().len()
    );
    let ni = inputs.len();
    let mut wires = inputs.to_vec();
    wires.resize(ni + n.gate_count(), false);
    let mut delta_f_pct = vec![0.0; n.gate_count()];
    for &g in n.topological_order() {
        let gate = &n.gates()[g];
        let r = &n.resolved()[g];
        let a = wires[r.a.0] ^ r.a.1;
        let b = r.b.map(|(w, inv)| wires[w] ^ inv).unwrap_or(false);
        let pattern = StimulusPattern::new(a, b && gate.kind.arity() == 2);
        let mut rng = gate_rng(trial_seed, &gate.id);
        let df = mode
            .delta_f(pattern, model, &mut rng)
            .map_err(|e| MeasureError::Gate {
                gate: gate.id.clone(),
                source: Box::new(e),
            })?;
        delta_f_pct[g] = df;
        wires[ni + g] = classify(df, &gate.spec().rule());
    }
    Ok(CircuitRun {
        outputs: n.output_wires().iter().map(|&w| wires[w]).collect(),
        gate_outputs: wires[ni..].to_vec(),
        delta_f_pct,
    })
}

/// Sampled-mode evaluation of the declared outputs.
pub fn evaluate_circuit(
    n: &Netlist,
    inputs: &[bool],
    model: &ResponseModel,
    trial_seed: u64,
) -> Vec<bool> {
    evaluate_circuit_detailed(n, inputs, model, &EvalMode::Sampled, trial_seed)
        .expect("sampled evaluation cannot fail")
        .outputs
}

pub fn evaluate_circuit_with(
    n: &Netlist,
    inputs: &[bool],
    model: &ResponseModel,
    mode: &EvalMode,
    trial_seed: u64,
) -> Result<Vec<bool>, MeasureError> {
    evaluate_circuit_detailed(n, inputs, model, mode, trial_seed).map(|r| r.outputs)
}

/// Output bits for every input combination. Row `i` holds the combination
/// whose bits, most significant first, follow the declared input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    pub rows: Vec<Vec<bool>>,
}

impl TruthTable {
    pub fn num_inputs(&self) -> usize {
        self.input_names.len()
    }

    /// Input bits of row `index`.
    pub fn inputs_of(num_inputs: usize, index: usize) -> Vec<bool> {
        (0..num_inputs)
            .map(|i| index >> (num_inputs - 1 - i) & 1 == 1)
            .collect()
    }

    pub fn row(&self, inputs: &[bool]) -> &[bool] {
        let idx = inputs.iter().fold(0usize, |acc, &b| acc << 1 | usize::from(b));
        &self.rows[idx]
    }

    pub fn to_csv(&self) -> String {
        let bit = |b: bool| if b { "1" } else { "0" };
        let mut out = self
            .input_names
            .iter()
            .chain(&self.output_names)
            .cloned()
            .collect::<Vec<_>>()
            .join(",");
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let cells: Vec<&str> = Self::inputs_of(self.num_inputs(), i)
                .into_iter()
                .chain(row.iter().copied())
                .map(bit)
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Truth table of the circuit evaluated with every response std set to 0.
pub fn ideal_truth_table(n: &Netlist) -> TruthTable {
    let k = n.inputs().len();
    assert!(
        k <= MAX_TRUTH_TABLE_INPUTS,
        "truth tables are limited to {MAX_TRUTH_TABLE_INPUTS} inputs"
    );
    let model = ResponseModel::default().noiseless();
    TruthTable {
        input_names: n.inputs().to_vec(),
        output_names: n.outputs().iter().map(|(o, _)| o.clone()).collect(),
        rows: (0..1usize << k)
            .map(|i| evaluate_circuit(n, &TruthTable::inputs_of(k, i), &model, 0))
            .collect(),
    }
}
