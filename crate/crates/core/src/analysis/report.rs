use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{analytic_circuit_accuracy, analytic_gate_accuracy, monte_carlo_accuracy};
use super::{AnalysisError, MonteCarloConfig};
use crate::circuits::{builtin, Netlist};
use crate::gates::{GateKind, GateSpec};
use crate::signal::ResponseModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputAccuracy {
    /// Input bits, first declared input first.
    pub inputs: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub subject: String,
    pub method: Method,
    pub per_input: Vec<InputAccuracy>,
    /// Uniform mean of `per_input`.
    pub overall: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
}

impl AccuracyReport {
    /// Overall accuracy under a non-uniform input distribution. `weights`
    /// follows `per_input` order and is normalised here.
    pub fn weighted_overall(&self, weights: &[f64]) -> f64 {
        assert_eq!(weights.len(), self.per_input.len(), "one weight per input combination");
        let total: f64 = weights.iter().sum();
        self.per_input
            .iter()
            .zip(weights)
            .map(|(p, w)| p.probability * w)
            .sum::<f64>()
            / total
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `subject,method,inputs,probability,trials,std_error`; the last row
    /// carries `overall` in the inputs column.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("subject,method,inputs,probability,trials,std_error\n");
        for p in &self.per_input {
            let _ = writeln!(s, "{},{},{},{},,", self.subject, self.method.name(), p.inputs, p.probability);
        }
        let opt = |v: Option<String>| v.unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},overall,{},{},{}",
            self.subject,
            self.method.name(),
            self.overall,
            opt(self.trials.map(|t| t.to_string())),
            opt(self.std_error.map(|e| e.to_string()))
        );
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} ({})\n", self.subject, self.method.name());
        for p in &self.per_input {
            let _ = writeln!(s, "  inputs {:>4}: {:.4}", p.inputs, p.probability);
        }
        let _ = write!(s, "  overall    : {:.4}", self.overall);
        if let (Some(t), Some(e)) = (self.trials, self.std_error) {
            let _ = write!(s, " ± {e:.4} (stderr, {t} trials per input)");
        }
        s.push('\n');
        s
    }
}

/// One row of the published-versus-model accuracy comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub subject: String,
    pub pfg_count: usize,
    /// Published accuracy in percent.
    pub published_pct: f64,
    /// The published value rests on parameters this model does not have.
    pub reference_only: bool,
    pub analytic: AccuracyReport,
    pub monte_carlo: Option<AccuracyReport>,
}

pub const COMPARISON_CSV_HEADER: &str = "subject,pfg_count,published_pct,analytic_pct,mc_pct,mc_stderr";

impl ComparisonRow {
    pub fn analytic_pct(&self) -> f64 {
        100.0 * self.analytic.overall
    }

    pub fn csv_line(&self) -> String {
        let (mc, se) = match &self.monte_carlo {
            Some(r) => (
                format!("{:.4}", 100.0 * r.overall),
                format!("{:.4}", 100.0 * r.std_error.unwrap_or(0.0)),
            ),
            None => (String::new(), String::new()),
        };
        format!(
            "{},{},{:.2},{:.4},{},{}",
            self.subject,
            self.pfg_count,
            self.published_pct,
            self.analytic_pct(),
            mc,
            se
        )
    }
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut s = format!("{COMPARISON_CSV_HEADER}\n");
    for r in rows {
        s.push_str(&r.csv_line());
        s.push('\n');
    }
    s
}

/// Published accuracies (percent) and PFG counts.
const PUBLISHED: [(&str, f64, usize); 7] = [
    ("OR", 90.0, 1),
    ("AND", 77.8, 1),
    ("NOT", 91.7, 1),
    ("XOR", 70.8, 1),
    ("half_adder", 65.0, 2),
    ("full_adder", 58.8, 5),
    ("decoder_2to4", 57.5, 4),
];

/// Analytic and (when `mc` is given) Monte Carlo accuracy for every row of
/// the published comparison.
pub fn published_comparison(
    model: &ResponseModel,
    mc: Option<&MonteCarloConfig>,
) -> Result<Vec<ComparisonRow>, AnalysisError> {
    PUBLISHED
        .iter()
        .map(|&(subject, published_pct, pfg_count)| {
            let (netlist, analytic) = match subject.parse::<GateKind>() {
                Ok(kind) => {
                    let spec = GateSpec::new(kind);
                    (Netlist::single_gate(&spec), analytic_gate_accuracy(&spec, model))
                }
                Err(_) => {
                    let n = builtin(subject).expect("published subjects are builtins");
                    let a = analytic_circuit_accuracy(&n, model)?;
                    (n, a)
                }
            };
            debug_assert_eq!(netlist.gate_count(), pfg_count);
            let monte_carlo = mc
                .map(|cfg| monte_carlo_accuracy(&netlist, model, cfg))
                .transpose()?;
            Ok(ComparisonRow {
                subject: subject.to_string(),
                pfg_count,
                published_pct,
                reference_only: subject == "NOT",
                analytic,
                monte_carlo,
            })
        })
        .collect()
}
