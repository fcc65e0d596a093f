use std::collections::BTreeMap;

use super::normal::std_normal_cdf;
use super::report::{AccuracyReport, InputAccuracy, Method};
use super::AnalysisError;
use crate::circuits::{Netlist, TruthTable};
use crate::gates::{classify, GateSpec, ThresholdRule};
use crate::signal::ResponseModel;

/// Enumeration bound for [`analytic_circuit_accuracy`].
pub const MAX_ANALYTIC_GATES: usize = 24;

/// `[P(output 0), P(output 1)]` for Δf ~ Normal(mean, std).
///
/// Both entries are evaluated directly rather than as `1 − p`, so a rule and
/// its complement yield bit-identical swapped pairs. `std == 0` is a point
/// mass at `mean`.
pub fn output_distribution(rule: &ThresholdRule, mean_pct: f64, std_pct: f64) -> [f64; 2] {
    if std_pct == 0.0 {
        return if classify(mean_pct, rule) { [0.0, 1.0] } else { [1.0, 0.0] };
    }
    let z = |x: f64| (x - mean_pct) / std_pct;
    match *rule {
        ThresholdRule::Single {
            threshold_pct,
            high_when_above,
        } => {
            let below = std_normal_cdf(z(threshold_pct));
            let above = std_normal_cdf(-z(threshold_pct));
            if high_when_above {
                [below, above]
            } else {
                [above, below]
            }
        }
        ThresholdRule::Band {
            lo_pct,
            hi_pct,
            one_inside,
        } => {
            let (zl, zh) = (z(lo_pct), z(hi_pct));
            let inside = std_normal_cdf(zh) - std_normal_cdf(zl);
            let outside = std_normal_cdf(zl) + std_normal_cdf(-zh);
            if one_inside {
                [outside, inside]
            } else {
                [inside, outside]
            }
        }
    }
}

/// Probability that `rule` outputs 1 when Δf ~ Normal(mean, std).
pub fn classification_probability(rule: &ThresholdRule, pattern_mean: f64, pattern_std: f64) -> f64 {
    output_distribution(rule, pattern_mean, pattern_std)[1]
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub(crate) fn finish(subject: &str, per_input: Vec<InputAccuracy>) -> AccuracyReport {
    let overall = per_input.iter().map(|p| p.probability).sum::<f64>() / per_input.len() as f64;
    AccuracyReport {
        subject: subject.to_string(),
        method: Method::Analytic,
        per_input,
        overall,
        trials: None,
        std_error: None,
    }
}

/// Exact accuracy of one gate over its input combinations.
pub fn analytic_gate_accuracy(spec: &GateSpec, model: &ResponseModel) -> AccuracyReport {
    let arity = spec.kind.arity();
    let rule = spec.rule();
    let per_input = (0..1usize << arity)
        .map(|i| {
            let x = TruthTable::inputs_of(arity, i);
            let (a, b) = (x[0], x.get(1).copied().unwrap_or(false));
            let r = model.response(spec.stimulus(a, b));
            let dist = output_distribution(&rule, r.mean_pct, r.std_pct);
            InputAccuracy {
                inputs: bit_string(&x),
                probability: dist[usize::from(spec.ideal(a, b))],
            }
        })
        .collect();
    finish(spec.kind.name(), per_input)
}

/// Exact probability that all outputs are correct, per input combination.
///
/// Gates are visited in topological order while carrying the joint
/// distribution of the gate wires that are still read downstream. A wire is
/// dropped after its last reader; an output wire is conditioned on its ideal
/// value as soon as it is produced.
pub fn analytic_circuit_accuracy(
    n: &Netlist,
    model: &ResponseModel,
) -> Result<AccuracyReport, AnalysisError> {
    if n.gate_count() > MAX_ANALYTIC_GATES {
        return Err(AnalysisError::TooManyGates {
            gates: n.gate_count(),
            max: MAX_ANALYTIC_GATES,
        });
    }
    let ni = n.inputs().len();
    let order = n.topological_order();
    let resolved = n.resolved();

    // Position in `order` after which each gate wire is no longer read.
    let mut last_read = vec![0usize; n.gate_count()];
    for (p, &g) in order.iter().enumerate() {
        last_read[g] = p;
    }
    for (p, &g) in order.iter().enumerate() {
        let r = &resolved[g];
        for w in std::iter::once(r.a.0).chain(r.b.map(|b| b.0)) {
            if w >= ni {
                last_read[w - ni] = last_read[w - ni].max(p);
            }
        }
    }
    let mut retire_at: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for g in 0..n.gate_count() {
        retire_at[last_read[g]].push(g);
    }
    // Ideal value demanded of each gate wire that drives an output.
    let output_gates: Vec<Vec<usize>> = {
        let mut v = vec![Vec::new(); n.gate_count()];
        for (o, &w) in n.output_wires().iter().enumerate() {
            if w >= ni {
                v[w - ni].push(o);
            }
        }
        v
    };
    let dists: Vec<[[f64; 2]; 4]> = n
        .gates()
        .iter()
        .map(|gate| {
            let rule = gate.spec().rule();
            let mut d = [[0.0; 2]; 4];
            for (slot, r) in d.iter_mut().zip(model.responses()) {
                *slot = output_distribution(&rule, r.mean_pct, r.std_pct);
            }
            d
        })
        .collect();

    let k = ni;
    let per_input = (0..1usize << k)
        .map(|i| {
            let x = TruthTable::inputs_of(k, i);
            let ideal = n.ideal_outputs(&x);
            let mut states: BTreeMap<u32, f64> = BTreeMap::from([(0, 1.0)]);
            for (p, &g) in order.iter().enumerate() {
                let r = &resolved[g];
                let two_input = n.gates()[g].kind.arity() == 2;
                let mut next = BTreeMap::new();
                for (&mask, &prob) in &states {
                    let read = |(w, inv): (usize, bool)| {
                        (if w < ni { x[w] } else { mask >> (w - ni) & 1 == 1 }) ^ inv
                    };
                    let a = read(r.a);
                    let b = two_input && r.b.map(read).unwrap_or(false);
                    let dist = dists[g][usize::from(a) << 1 | usize::from(b)];
                    for v in [false, true] {
                        if output_gates[g].iter().any(|&o| ideal[o] != v) {
                            continue;
                        }
                        let q = prob * dist[usize::from(v)];
                        if q == 0.0 {
                            continue;
                        }
                        *next.entry(mask | u32::from(v) << g).or_insert(0.0) += q;
                    }
                }
                let drop_mask = retire_at[p].iter().fold(0u32, |m, &d| m | 1 << d);
                states = if drop_mask == 0 {
                    next
                } else {
                    let mut merged = BTreeMap::new();
                    for (mask, q) in next {
                        *merged.entry(mask & !drop_mask).or_insert(0.0) += q;
                    }
                    merged
                };
            }
            InputAccuracy {
                inputs: bit_string(&x),
                probability: states.values().sum(),
            }
        })
        .collect();
    Ok(finish(n.name(), per_input))
}
