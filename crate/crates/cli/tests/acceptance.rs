//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed on a normal
//! `cargo test` run. The process exits non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use pfg_core::analysis::std_normal_cdf;
use pfg_core::circuits::{Location, BUILTIN_NAMES};
use pfg_core::seed::{derive, rng_from};
use pfg_core::{
    analytic_circuit_accuracy, analytic_gate_accuracy, builtin, compute_delta_f, evaluate_circuit,
    monte_carlo_accuracy, parse_netlist, serialize_netlist, synthesize_trace, published_comparison,
    AccuracyReport, Gate, GateKind, GateSpec, MonteCarloConfig, Netlist, NetlistError,
    OscillationModel, ResponseModel, SpectralConfig, ComparisonRow, TruthTable, WireRef,
};

type Verdict = Result<String, String>;

struct Criterion {
    id: String,
    budget: Option<Duration>,
    check: Box<dyn FnOnce() -> Verdict>,
}

fn criterion(id: &str, budget_s: Option<f64>, check: impl FnOnce() -> Verdict + 'static) -> Criterion {
    Criterion {
        id: id.to_string(),
        budget: budget_s.map(Duration::from_secs_f64),
        check: Box::new(check),
    }
}

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    // Table 4 is computed once and shared by its per-row criteria.
    let model = ResponseModel::default();
    let table = published_comparison(&model, None).expect("analytic table");

    let mut criteria = vec![
        criterion("zero_noise_truth_tables", Some(1.0), zero_noise_truth_tables),
        criterion("delta_f_round_trip_noiseless", Some(10.0), delta_f_round_trip_noiseless),
        criterion("delta_f_round_trip_noisy", Some(10.0), delta_f_round_trip_noisy),
        criterion("mc_analytic_agreement", Some(60.0), mc_analytic_agreement),
        criterion("complement_duality", None, complement_duality),
        criterion("accuracy_trend", None, accuracy_trend),
    ];
    for subject in ["OR", "AND", "XOR", "half_adder", "full_adder", "decoder_2to4"] {
        let row = table.iter().find(|r| r.subject == subject).cloned().expect("row");
        criteria.push(criterion(&format!("published_within_12pp[{subject}]"), None, move || published_row(&row)));
    }
    let t = table.clone();
    criteria.push(criterion("published_ordering", None, move || published_ordering(&t)));
    let t = table;
    criteria.push(criterion("published_not_reference_only", None, move || published_not(&t)));
    criteria.extend([
        criterion("normal_cdf_accuracy", Some(1.0), normal_cdf_accuracy),
        criterion("parser_round_trip_generated", Some(10.0), parser_round_trip),
        criterion("parser_error_fixtures", Some(10.0), parser_error_fixtures),
        criterion("determinism_library", None, determinism_library),
        criterion("determinism_cli", None, determinism_cli),
    ]);

    let total = criteria.len();
    let mut failed = Vec::new();
    for c in criteria {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(c.check))
            .unwrap_or_else(|e| Err(format!("panicked: {}", panic_message(&e))));
        let elapsed = start.elapsed();
        let verdict = match (verdict, c.budget) {
            (Ok(d), Some(b)) if elapsed > b => Err(format!("{d}; exceeded {:.0?} budget", b)),
            (v, _) => v,
        };
        let (tag, detail) = match &verdict {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("{tag} {:<36} {detail} [{:.2}s]", c.id, elapsed.as_secs_f64());
        if verdict.is_err() {
            failed.push(c.id);
        }
    }
    println!("\n{}/{total} criteria passed", total - failed.len());
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn all_subjects() -> Vec<Netlist> {
    let mut out = Vec::new();
    for kind in GateKind::ALL {
        for (ia, ib) in [(false, false), (true, false), (false, true), (true, true)] {
            out.push(Netlist::single_gate(&GateSpec::inverted(kind, ia, ib)));
        }
    }
    out.extend(BUILTIN_NAMES.iter().map(|n| builtin(n).unwrap()));
    out
}

fn zero_noise_truth_tables() -> Verdict {
    let m = ResponseModel::default().noiseless();
    let subjects = all_subjects();
    let mut rows = 0;
    for n in &subjects {
        let k = n.inputs().len();
        for i in 0..1usize << k {
            let x = TruthTable::inputs_of(k, i);
            for seed in [0, 1, u64::MAX] {
                let got = evaluate_circuit(n, &x, &m, seed);
                let want = common::ideal_oracle(n, &x);
                if got != want {
                    return Err(format!("{} inputs {x:?}: {got:?} != {want:?}", n.name()));
                }
            }
            rows += 1;
        }
    }
    Ok(format!("{} subjects, {rows} rows exact", subjects.len()))
}

const PERIODS: [f64; 3] = [60.0, 100.0, 200.0];
const INJECTED: [f64; 5] = [0.0, 2.1, 12.2, 19.8, 33.2];

fn recovered(period: f64, noise: f64, df: f64, seed: u64) -> f64 {
    let osc = OscillationModel {
        base_period_s: period,
        noise_std_mv: noise,
        ..Default::default()
    };
    let cfg = SpectralConfig::default();
    let w = cfg.analysis_window_s;
    let trace = synthesize_trace(&osc, df, w, w, &mut rng_from(seed)).unwrap();
    compute_delta_f(&trace, &cfg).unwrap().delta_f_pct
}

fn delta_f_round_trip_noiseless() -> Verdict {
    let mut worst: (f64, f64, f64) = (0.0, 0.0, 0.0);
    for p in PERIODS {
        for df in INJECTED {
            let err = (recovered(p, 0.0, df, 0) - df).abs();
            if err > worst.0 {
                worst = (err, p, df);
            }
        }
    }
    ensure(
        worst.0 <= 0.5,
        format!("max |error| {:.3} pp (period {} s, Δf {}%), limit 0.5", worst.0, worst.1, worst.2),
    )
}

fn delta_f_round_trip_noisy() -> Verdict {
    let amplitude = OscillationModel::default().amplitude_mv;
    let mut worst: (usize, f64, f64) = (usize::MAX, 0.0, 0.0);
    for (pi, p) in PERIODS.into_iter().enumerate() {
        for (di, df) in INJECTED.into_iter().enumerate() {
            let within = (0..100u64)
                .filter(|&t| {
                    let seed = derive(0xacce, &[pi as u64, di as u64, t]);
                    (recovered(p, 0.1 * amplitude, df, seed) - df).abs() <= 1.0
                })
                .count();
            if within < worst.0 {
                worst = (within, p, df);
            }
        }
    }
    ensure(
        worst.0 >= 95,
        format!(
            "worst cell {}/100 within 1 pp (period {} s, Δf {}%), need 95",
            worst.0, worst.1, worst.2
        ),
    )
}

fn subject_netlist(name: &str) -> Netlist {
    match name.parse::<GateKind>() {
        Ok(kind) => Netlist::single_gate(&GateSpec::new(kind)),
        Err(_) => builtin(name).unwrap(),
    }
}

fn mc_analytic_agreement() -> Verdict {
    let model = ResponseModel::default();
    let cfg = MonteCarloConfig::default();
    let mut parts = Vec::new();
    let mut worst = 0.0f64;
    for subject in ["OR", "AND", "XOR", "half_adder", "full_adder", "decoder_2to4"] {
        let n = subject_netlist(subject);
        let a = analytic_circuit_accuracy(&n, &model).unwrap().overall;
        let mc = monte_carlo_accuracy(&n, &model, &cfg).unwrap();
        let z = (mc.overall - a).abs() / mc.std_error.unwrap();
        worst = worst.max(z);
        parts.push(format!("{subject} {z:.2}"));
    }
    ensure(
        worst <= 3.0,
        format!("|mc − analytic| in stderr units: {} (limit 3)", parts.join(", ")),
    )
}

fn complement_duality() -> Verdict {
    let model = ResponseModel::default();
    let mut parts = Vec::new();
    for (k, c) in [
        (GateKind::Or, GateKind::Nor),
        (GateKind::And, GateKind::Nand),
        (GateKind::Xor, GateKind::Xnor),
    ] {
        for inv in [(false, false), (true, false), (false, true), (true, true)] {
            let a = analytic_gate_accuracy(&GateSpec::inverted(k, inv.0, inv.1), &model);
            let b = analytic_gate_accuracy(&GateSpec::inverted(c, inv.0, inv.1), &model);
            let same = a.overall.to_bits() == b.overall.to_bits()
                && a.per_input
                    .iter()
                    .zip(&b.per_input)
                    .all(|(x, y)| x.probability.to_bits() == y.probability.to_bits());
            if !same {
                return Err(format!("{} vs {} differ at inversion {inv:?}", k.name(), c.name()));
            }
        }
        parts.push(format!("{}={}", k.name(), c.name()));
    }
    Ok(format!("{} bit-identical under all input inversions", parts.join(", ")))
}

fn analytic(subject: &str) -> f64 {
    analytic_circuit_accuracy(&subject_netlist(subject), &ResponseModel::default())
        .unwrap()
        .overall
}

fn accuracy_trend() -> Verdict {
    let singles: Vec<(GateKind, f64)> = GateKind::ALL
        .iter()
        .map(|&k| (k, analytic(k.name())))
        .collect();
    let (worst_kind, worst_single) = singles
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let half = analytic("half_adder");
    let full = analytic("full_adder");
    let dec = analytic("decoder_2to4");
    ensure(
        worst_single > half && half > full && dec < half,
        format!(
            "min single ({}) {worst_single:.4} > half_adder {half:.4} > full_adder {full:.4}; decoder_2to4 {dec:.4} < half_adder",
            worst_kind.name()
        ),
    )
}

fn published_row(row: &ComparisonRow) -> Verdict {
    let gap = row.analytic_pct() - row.published_pct;
    ensure(
        gap.abs() <= 12.0,
        format!(
            "model {:.2}% vs published {:.2}%, gap {gap:+.2} pp (limit ±12)",
            row.analytic_pct(),
            row.published_pct
        ),
    )
}

fn published_ordering(rows: &[ComparisonRow]) -> Verdict {
    let (single, multi): (Vec<&ComparisonRow>, Vec<&ComparisonRow>) =
        rows.iter().filter(|r| !r.reference_only).partition(|r| r.pfg_count == 1);
    let min = |v: &[&ComparisonRow], f: fn(&ComparisonRow) -> f64| v.iter().map(|r| f(r)).fold(f64::INFINITY, f64::min);
    let max = |v: &[&ComparisonRow], f: fn(&ComparisonRow) -> f64| v.iter().map(|r| f(r)).fold(f64::NEG_INFINITY, f64::max);
    let published = |r: &ComparisonRow| r.published_pct;
    let model = |r: &ComparisonRow| r.analytic_pct();
    let ok_published = min(&single, published) > max(&multi, published);
    let ok_model = min(&single, model) > max(&multi, model);
    ensure(
        ok_published && ok_model,
        format!(
            "single gates ≥ {:.2}% vs circuits ≤ {:.2}% (model); published {:.2}% vs {:.2}%",
            min(&single, model),
            max(&multi, model),
            min(&single, published),
            max(&multi, published)
        ),
    )
}

fn published_not(rows: &[ComparisonRow]) -> Verdict {
    let not = rows.iter().find(|r| r.subject == "NOT").ok_or("NOT row missing")?;
    ensure(
        not.reference_only && (not.published_pct - 91.7).abs() < 1e-12,
        format!(
            "published {:.2}% reported as reference only; model {:.2}%",
            not.published_pct,
            not.analytic_pct()
        ),
    )
}

fn normal_cdf_accuracy() -> Verdict {
    let mut worst = (0.0f64, 0.0f64);
    for i in -800..=800 {
        let z = f64::from(i) * 0.01;
        let err = (std_normal_cdf(z) - common::phi_oracle(z)).abs();
        if err > worst.0 {
            worst = (err, z);
        }
    }
    ensure(
        worst.0 < 1e-7,
        format!("max |error| {:.2e} at z = {:.2} over 1601 points, limit 1e-7", worst.0, worst.1),
    )
}

fn random_netlist<R: Rng>(rng: &mut R, index: usize) -> Netlist {
    let num_inputs = rng.random_range(1..5);
    let inputs: Vec<String> = (0..num_inputs).map(|i| format!("in{i}")).collect();
    let mut wires = inputs.clone();
    let mut gates = Vec::new();
    for g in 0..rng.random_range(1..16) {
        let kind = GateKind::ALL[rng.random_range(0..7)];
        let pick = |rng: &mut R| WireRef {
            name: wires[rng.random_range(0..wires.len())].clone(),
            inverted: rng.random_bool(0.3),
        };
        let a = pick(rng);
        let b = (kind.arity() == 2).then(|| pick(rng));
        let id = format!("n{g}_{}", rng.random_range(0..100));
        let id = if wires.contains(&id) { format!("{id}x{g}") } else { id };
        gates.push(Gate::new(id.clone(), kind, a, b));
        wires.push(id);
    }
    let outputs = (0..rng.random_range(1..4))
        .map(|i| (format!("OUT{i}"), wires[rng.random_range(0..wires.len())].clone()))
        .collect();
    // Declaration order is irrelevant; shuffle it.
    for i in (1..gates.len()).rev() {
        gates.swap(i, rng.random_range(0..=i));
    }
    Netlist::new(format!("gen{index}"), inputs, gates, outputs).expect("generated netlist is valid")
}

fn parser_round_trip() -> Verdict {
    let mut rng = rng_from(0x9a75e);
    let mut gates = 0;
    for i in 0..1000 {
        let n = random_netlist(&mut rng, i);
        gates += n.gate_count();
        let text = serialize_netlist(&n);
        let back = parse_netlist(&text).map_err(|e| format!("netlist {i}: {e}\n{text}"))?;
        if back != n || serialize_netlist(&back) != text {
            return Err(format!("netlist {i} did not round-trip:\n{text}"));
        }
    }
    Ok(format!("1000 generated netlists ({gates} gates) round-trip exactly"))
}

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/errors")
}

fn error_class(e: &NetlistError) -> &'static str {
    match e {
        NetlistError::Syntax { .. } => "syntax",
        NetlistError::UnknownGateKind { .. } => "unknown_gate_kind",
        NetlistError::UndefinedWire { .. } => "undefined_wire",
        NetlistError::DuplicateId { .. } => "duplicate_id",
        NetlistError::CycleDetected { .. } => "cycle",
        NetlistError::Invalid(_) => "invalid",
        NetlistError::UnknownBuiltin(_) => "unknown_builtin",
    }
}

/// Fixture files open with `# expect: <class> <line>:<column>`.
fn parser_error_fixtures() -> Verdict {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixture_dir())
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "pfg"))
        .collect();
    paths.sort();
    let mut classes = std::collections::BTreeSet::new();
    for p in &paths {
        let text = std::fs::read_to_string(p).unwrap();
        let name = p.file_name().unwrap().to_string_lossy();
        let header = text.lines().next().and_then(|l| l.strip_prefix("# expect: "));
        let (class, loc) = header
            .and_then(|h| h.split_once(' '))
            .ok_or(format!("{name}: missing expect header"))?;
        let (line, column) = loc.split_once(':').ok_or(format!("{name}: bad location"))?;
        let want = Location {
            line: line.parse().unwrap(),
            column: column.parse().unwrap(),
        };
        let err = match parse_netlist(&text) {
            Ok(_) => return Err(format!("{name}: parsed without error")),
            Err(e) => e,
        };
        if error_class(&err) != class || err.location() != Some(want) {
            return Err(format!("{name}: expected {class} at {want}, got {err}"));
        }
        classes.insert(class.to_string());
    }
    ensure(
        classes.len() == 5,
        format!("{} fixtures, classes {:?}, all locations exact", paths.len(), classes),
    )
}

fn report_bits(r: &AccuracyReport) -> Vec<u64> {
    r.per_input.iter().map(|p| p.probability.to_bits()).collect()
}

fn determinism_library() -> Verdict {
    let model = ResponseModel::default();
    let n = builtin("full_adder").unwrap();
    let mut reference = None;
    for workers in [None, Some(1), Some(3), Some(8), None] {
        let cfg = MonteCarloConfig {
            trials: 20_000,
            workers,
            ..Default::default()
        };
        let bits = report_bits(&monte_carlo_accuracy(&n, &model, &cfg).unwrap());
        match &reference {
            None => reference = Some(bits),
            Some(r) if *r != bits => return Err(format!("workers {workers:?} changed the report")),
            Some(_) => {}
        }
    }
    let osc = OscillationModel::default();
    let a = synthesize_trace(&osc, 12.2, 600.0, 600.0, &mut rng_from(5)).unwrap();
    let b = synthesize_trace(&osc, 12.2, 600.0, 600.0, &mut rng_from(5)).unwrap();
    ensure(a == b, "Monte Carlo identical for 1, 3, 8 and default workers; traces identical".into())
}

fn pfg_output(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pfg"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn determinism_cli() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let trace = dir.path().join("t.csv");
    let trace = trace.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["trace", "synth", "--pattern", "heat+oat", "--seed", "7"],
        vec!["gate", "run", "--gate", "XOR", "--in-a", "1", "--in-b", "0", "--format", "json"],
        vec!["circuit", "run", "--builtin", "full_adder", "--inputs", "111", "--seed", "9"],
        vec!["circuit", "run", "--builtin", "decoder_2to4", "--inputs", "01", "--mode", "measured"],
        vec!["accuracy", "--builtin", "half_adder", "--method", "both", "--trials", "20000", "--format", "csv"],
        vec!["accuracy", "--builtin", "half_adder", "--method", "both", "--trials", "20000", "--format", "csv", "--workers", "1"],
        vec!["accuracy", "--builtin", "half_adder", "--method", "both", "--trials", "20000", "--format", "csv", "--workers", "6"],
        vec!["accuracy", "table4", "--trials", "2000", "--format", "csv"],
    ];
    let mut first = Vec::new();
    for args in &runs {
        let a = pfg_output(args)?;
        let b = pfg_output(args)?;
        if a != b {
            return Err(format!("{args:?} differs between runs"));
        }
        first.push(a);
    }
    if first[4] != first[5] || first[4] != first[6] {
        return Err("Monte Carlo output depends on --workers".into());
    }
    pfg_output(&["trace", "synth", "--delta-f", "19.8", "--seed", "3", "--out", trace])?;
    let x = std::fs::read(trace).map_err(|e| e.to_string())?;
    pfg_output(&["trace", "synth", "--delta-f", "19.8", "--seed", "3", "--out", trace])?;
    let y = std::fs::read(trace).map_err(|e| e.to_string())?;
    ensure(
        x == y,
        format!("{} commands byte-identical on rerun, including across worker counts", runs.len() + 1),
    )
}
