//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the analytic engine; the oracles work from first
//! principles (series, quadrature, brute-force enumeration).

#![allow(dead_code)]

use pfg_core::{GateKind, Netlist, ResponseModel, StimulusPattern, ThresholdRule};

/// erf via the all-positive-term series
/// erf(x) = 2/√π · e^{−x²} · Σ 2ⁿ x^{2n+1} / (1·3·…·(2n+1)).
pub fn erf_series(x: f64) -> f64 {
    if x < 0.0 {
        return -erf_series(-x);
    }
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term > 1e-300 && term > sum * 1e-18 {
        n += 1.0;
        term *= 2.0 * x * x / (2.0 * n + 1.0);
        sum += term;
    }
    2.0 / std::f64::consts::PI.sqrt() * (-x * x).exp() * sum
}

pub fn phi_oracle(z: f64) -> f64 {
    0.5 * (1.0 + erf_series(z / std::f64::consts::SQRT_2))
}

fn gaussian_pdf(x: f64, mean: f64, std: f64) -> f64 {
    let u = (x - mean) / std;
    (-0.5 * u * u).exp() / (std * (2.0 * std::f64::consts::PI).sqrt())
}

/// P(lo ≤ X ≤ hi) for X ~ Normal(mean, std) by composite Simpson on the pdf.
pub fn gaussian_mass(lo: f64, hi: f64, mean: f64, std: f64) -> f64 {
    let lo = lo.max(mean - 14.0 * std);
    let hi = hi.min(mean + 14.0 * std);
    if hi <= lo {
        return 0.0;
    }
    let n = 40_000;
    let h = (hi - lo) / n as f64;
    let mut s = gaussian_pdf(lo, mean, std) + gaussian_pdf(hi, mean, std);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * gaussian_pdf(lo + i as f64 * h, mean, std);
    }
    s * h / 3.0
}

/// P(rule outputs 1) by quadrature; point mass when `std == 0`.
pub fn p_one_oracle(rule: &ThresholdRule, mean: f64, std: f64) -> f64 {
    let inf = f64::INFINITY;
    match *rule {
        ThresholdRule::Single { threshold_pct, high_when_above } => {
            if std == 0.0 {
                return f64::from(u8::from((mean >= threshold_pct) == high_when_above));
            }
            let above = gaussian_mass(threshold_pct, inf, mean, std);
            if high_when_above { above } else { gaussian_mass(-inf, threshold_pct, mean, std) }
        }
        ThresholdRule::Band { lo_pct, hi_pct, one_inside } => {
            if std == 0.0 {
                let inside = lo_pct <= mean && mean <= hi_pct;
                return f64::from(u8::from(inside == one_inside));
            }
            let inside = gaussian_mass(lo_pct, hi_pct, mean, std);
            if one_inside {
                inside
            } else {
                gaussian_mass(-inf, lo_pct, mean, std) + gaussian_mass(hi_pct, inf, mean, std)
            }
        }
    }
}

fn bool_fn(kind: GateKind, a: bool, b: bool) -> bool {
    match kind {
        GateKind::Or => a || b,
        GateKind::And => a && b,
        GateKind::Not => !a,
        GateKind::Nor => !(a || b),
        GateKind::Nand => !(a && b),
        GateKind::Xor => a != b,
        GateKind::Xnor => a == b,
    }
}

fn wire_value(n: &Netlist, name: &str, x: &[bool], gate_vals: &[Option<bool>]) -> Option<bool> {
    if let Some(i) = n.inputs().iter().position(|w| w == name) {
        return Some(x[i]);
    }
    let g = n.gates().iter().position(|g| g.id == name).expect("wire exists");
    gate_vals[g]
}

/// Ideal outputs by fixed-point iteration over the gate list.
pub fn ideal_oracle(n: &Netlist, x: &[bool]) -> Vec<bool> {
    let mut vals: Vec<Option<bool>> = vec![None; n.gate_count()];
    while vals.iter().any(Option::is_none) {
        for (g, gate) in n.gates().iter().enumerate() {
            if vals[g].is_some() {
                continue;
            }
            let a = wire_value(n, &gate.a.name, x, &vals).map(|v| v ^ gate.a.inverted);
            let b = match &gate.b {
                Some(w) => wire_value(n, &w.name, x, &vals).map(|v| v ^ w.inverted),
                None => Some(false),
            };
            if let (Some(a), Some(b)) = (a, b) {
                vals[g] = Some(bool_fn(gate.kind, a, b));
            }
        }
    }
    n.outputs()
        .iter()
        .map(|(_, w)| wire_value(n, w, x, &vals).unwrap())
        .collect()
}

/// Per-input P(all outputs correct) by summing over all 2^G gate-output
/// assignments.
pub fn brute_force_accuracy(n: &Netlist, model: &ResponseModel) -> Vec<f64> {
    let k = n.inputs().len();
    let g_count = n.gate_count();
    let p1_table: Vec<Vec<f64>> = n
        .gates()
        .iter()
        .map(|gate| {
            StimulusPattern::ALL
                .iter()
                .map(|&pat| {
                    let r = model.response(pat);
                    p_one_oracle(&gate.spec().rule(), r.mean_pct, r.std_pct)
                })
                .collect()
        })
        .collect();
    (0..1usize << k)
        .map(|c| {
            let x: Vec<bool> = (0..k).map(|i| c >> (k - 1 - i) & 1 == 1).collect();
            let ideal = ideal_oracle(n, &x);
            let mut total = 0.0;
            for assign in 0..1u64 << g_count {
                let vals: Vec<Option<bool>> =
                    (0..g_count).map(|g| Some(assign >> g & 1 == 1)).collect();
                let outs: Vec<bool> = n
                    .outputs()
                    .iter()
                    .map(|(_, w)| wire_value(n, w, &x, &vals).unwrap())
                    .collect();
                if outs != ideal {
                    continue;
                }
                let mut p = 1.0;
                for (g, gate) in n.gates().iter().enumerate() {
                    let a = wire_value(n, &gate.a.name, &x, &vals).unwrap() ^ gate.a.inverted;
                    let b = gate
                        .b
                        .as_ref()
                        .map(|w| wire_value(n, &w.name, &x, &vals).unwrap() ^ w.inverted)
                        .unwrap_or(false);
                    let p1 = p1_table[g][StimulusPattern::new(a, b).index()];
                    p *= if vals[g].unwrap() { p1 } else { 1.0 - p1 };
                }
                total += p;
            }
            total
        })
        .collect()
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
