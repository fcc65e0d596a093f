//! Combinational circuits of cascaded PFGs.
//!
//! A [`Netlist`] is a DAG of gate instances over named wires. Each gate is a
//! separate tube: it sees the (possibly wrong) logic values on its source
//! wires, applies the stimuli those values call for and draws its own Δf.
//! Errors travel downstream as logic values only.

mod builtin;
mod dsl;
mod eval;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gates::{GateKind, GateSpec};

pub use builtin::{builtin, BUILTIN_NAMES};
pub use dsl::{parse_netlist, serialize_netlist};
pub use eval::{
    evaluate_circuit, evaluate_circuit_detailed, evaluate_circuit_with, ideal_truth_table,
    CircuitRun, EvalMode, MeasureError, TruthTable, MAX_TRUTH_TABLE_INPUTS,
};

/// 1-based position in DSL source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

fn at(loc: &Option<Location>) -> String {
    loc.map(|l| format!("{l}: ")).unwrap_or_default()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetlistError {
    #[error("{loc}: syntax error: {message}")]
    Syntax { loc: Location, message: String },
    #[error("{}unknown gate kind `{kind}`", at(.loc))]
    UnknownGateKind { loc: Option<Location>, kind: String },
    #[error("{}undefined wire `{name}`", at(.loc))]
    UndefinedWire { loc: Option<Location>, name: String },
    #[error("{}duplicate identifier `{id}`", at(.loc))]
    DuplicateId { loc: Option<Location>, id: String },
    #[error("{}combinational cycle through gates {}", at(.loc), .gates.join(" -> "))]
    CycleDetected {
        loc: Option<Location>,
        gates: Vec<String>,
    },
    #[error("invalid netlist: {0}")]
    Invalid(String),
    #[error("unknown builtin `{0}` (expected one of half_adder, full_adder, decoder_2to4, xor_from_nand)")]
    UnknownBuiltin(String),
}

impl NetlistError {
    pub fn location(&self) -> Option<Location> {
        match self {
            NetlistError::Syntax { loc, .. } => Some(*loc),
            NetlistError::UnknownGateKind { loc, .. }
            | NetlistError::UndefinedWire { loc, .. }
            | NetlistError::DuplicateId { loc, .. }
            | NetlistError::CycleDetected { loc, .. } => *loc,
            NetlistError::Invalid(_) | NetlistError::UnknownBuiltin(_) => None,
        }
    }
}

/// Reference to a wire; `inverted` applies at the consuming gate's input.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WireRef {
    pub name: String,
    pub inverted: bool,
}

impl WireRef {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            inverted: false,
        }
    }

    pub fn inverted(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            inverted: true,
        }
    }
}

impl fmt::Display for WireRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if self.inverted {
            f.write_str("!")?;
        }
        Ok(())
    }
}

/// One gate instance; its output wire is named by `id`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    pub a: WireRef,
    /// Absent for NOT.
    pub b: Option<WireRef>,
}

impl Gate {
    pub fn new(id: impl Into<String>, kind: GateKind, a: WireRef, b: Option<WireRef>) -> Self {
        Self {
            id: id.into(),
            kind,
            a,
            b,
        }
    }

    pub fn spec(&self) -> GateSpec {
        GateSpec::inverted(
            self.kind,
            self.a.inverted,
            self.b.as_ref().is_some_and(|w| w.inverted),
        )
    }

    fn sources(&self) -> impl Iterator<Item = &WireRef> {
        std::iter::once(&self.a).chain(self.b.as_ref())
    }
}

/// Resolved wire index: inputs first, then gate outputs in declaration order.
pub(crate) type WireIndex = usize;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ResolvedGate {
    pub a: (WireIndex, bool),
    pub b: Option<(WireIndex, bool)>,
}

/// Validated, immutable circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct Netlist {
    name: String,
    inputs: Vec<String>,
    gates: Vec<Gate>,
    outputs: Vec<(String, String)>,
    resolved: Vec<ResolvedGate>,
    order: Vec<usize>,
    output_wires: Vec<WireIndex>,
}

/// Source positions of netlist items, recorded by the parser.
#[derive(Debug, Default, Clone)]
pub(crate) struct SourceMap {
    pub inputs: Vec<Location>,
    pub gate_ids: Vec<Location>,
    pub gate_sources: Vec<Vec<Location>>,
    pub output_names: Vec<Location>,
    pub output_wires: Vec<Location>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Netlist {
    /// Validates and builds a netlist. Gates may be listed in any order as
    /// long as the wiring is acyclic.
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<String>,
        gates: Vec<Gate>,
        outputs: Vec<(String, String)>,
    ) -> Result<Self, NetlistError> {
        Self::build(name.into(), inputs, gates, outputs, None)
    }

    pub(crate) fn build(
        name: String,
        inputs: Vec<String>,
        gates: Vec<Gate>,
        outputs: Vec<(String, String)>,
        spans: Option<&SourceMap>,
    ) -> Result<Self, NetlistError> {
        let span = |f: &dyn Fn(&SourceMap) -> Option<Location>| spans.and_then(f);

        let bad_ident = [&name]
            .into_iter()
            .chain(&inputs)
            .chain(gates.iter().map(|g| &g.id))
            .chain(gates.iter().flat_map(|g| g.sources().map(|w| &w.name)))
            .chain(outputs.iter().flat_map(|(n, w)| [n, w]))
            .find(|s| !is_identifier(s));
        if let Some(s) = bad_ident {
            return Err(NetlistError::Invalid(format!("`{s}` is not an identifier")));
        }
        if inputs.is_empty() {
            return Err(NetlistError::Invalid("circuit declares no inputs".into()));
        }
        if outputs.is_empty() {
            return Err(NetlistError::Invalid("circuit declares no outputs".into()));
        }
        for g in &gates {
            if g.b.is_some() != (g.kind.arity() == 2) {
                return Err(NetlistError::Invalid(format!(
                    "gate `{}`: {} takes {} source(s)",
                    g.id,
                    g.kind,
                    g.kind.arity()
                )));
            }
        }

        let mut wires: HashMap<&str, WireIndex> = HashMap::new();
        for (i, w) in inputs.iter().enumerate() {
            if wires.insert(w, i).is_some() {
                return Err(NetlistError::DuplicateId {
                    loc: span(&|m| m.inputs.get(i).copied()),
                    id: w.clone(),
                });
            }
        }
        for (g, gate) in gates.iter().enumerate() {
            if wires.insert(&gate.id, inputs.len() + g).is_some() {
                return Err(NetlistError::DuplicateId {
                    loc: span(&|m| m.gate_ids.get(g).copied()),
                    id: gate.id.clone(),
                });
            }
        }

        let mut resolved = Vec::with_capacity(gates.len());
        for (g, gate) in gates.iter().enumerate() {
            let mut ends = Vec::with_capacity(2);
            for (s, w) in gate.sources().enumerate() {
                let idx = *wires.get(w.name.as_str()).ok_or_else(|| {
                    NetlistError::UndefinedWire {
                        loc: span(&|m| m.gate_sources.get(g).and_then(|v| v.get(s)).copied()),
                        name: w.name.clone(),
                    }
                })?;
                ends.push((idx, w.inverted));
            }
            resolved.push(ResolvedGate {
                a: ends[0],
                b: ends.get(1).copied(),
            });
        }

        let mut seen_outputs: HashMap<&str, ()> = HashMap::new();
        let mut output_wires = Vec::with_capacity(outputs.len());
        for (o, (out_name, wire)) in outputs.iter().enumerate() {
            if seen_outputs.insert(out_name, ()).is_some() {
                return Err(NetlistError::DuplicateId {
                    loc: span(&|m| m.output_names.get(o).copied()),
                    id: out_name.clone(),
                });
            }
            output_wires.push(*wires.get(wire.as_str()).ok_or_else(|| {
                NetlistError::UndefinedWire {
                    loc: span(&|m| m.output_wires.get(o).copied()),
                    name: wire.clone(),
                }
            })?);
        }

        let order = topological_order(inputs.len(), &resolved).map_err(|cycle| {
            let first = *cycle.iter().min().expect("cycle is non-empty");
            NetlistError::CycleDetected {
                loc: span(&|m| m.gate_ids.get(first).copied()),
                gates: cycle.iter().map(|&g| gates[g].id.clone()).collect(),
            }
        })?;

        Ok(Self {
            name,
            inputs,
            gates,
            outputs,
            resolved,
            order,
            output_wires,
        })
    }

    /// Netlist holding one gate fed straight from its primary inputs.
    pub fn single_gate(spec: &GateSpec) -> Self {
        let wire = |name: &str, inv| WireRef {
            name: name.into(),
            inverted: inv,
        };
        let (inputs, b) = if spec.kind.arity() == 2 {
            (vec!["A".into(), "B".into()], Some(wire("B", spec.invert_b)))
        } else {
            (vec!["A".into()], None)
        };
        Self::new(
            spec.kind.name(),
            inputs,
            vec![Gate::new("g", spec.kind, wire("A", spec.invert_a), b)],
            vec![("Y".into(), "g".into())],
        )
        .expect("single-gate netlist is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[(String, String)] {
        &self.outputs
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Gate indices in a valid evaluation order.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    pub(crate) fn resolved(&self) -> &[ResolvedGate] {
        &self.resolved
    }

    pub(crate) fn output_wires(&self) -> &[WireIndex] {
        &self.output_wires
    }

    /// Error-free Boolean evaluation.
    pub fn ideal_outputs(&self, inputs: &[bool]) -> Vec<bool> {
        assert_eq!(inputs.len(), self.inputs.len(), "input width mismatch");
        let mut wires = inputs.to_vec();
        wires.resize(self.inputs.len() + self.gates.len(), false);
        for &g in &self.order {
            let r = &self.resolved[g];
            let a = wires[r.a.0] ^ r.a.1;
            let b = r.b.map(|(w, inv)| wires[w] ^ inv).unwrap_or(false);
            wires[self.inputs.len() + g] = self.gates[g].kind.apply(a, b);
        }
        self.output_wires.iter().map(|&w| wires[w]).collect()
    }
}

/// Kahn's algorithm, lowest declaration index first. On failure returns the
/// gates of one cycle.
fn topological_order(num_inputs: usize, gates: &[ResolvedGate]) -> Result<Vec<usize>, Vec<usize>> {
    let n = gates.len();
    let deps = |g: usize| {
        let r = &gates[g];
        std::iter::once(r.a.0)
            .chain(r.b.map(|b| b.0))
            .filter(|&w| w >= num_inputs)
            .map(|w| w - num_inputs)
    };
    let mut indegree = vec![0usize; n];
    let mut users = vec![Vec::new(); n];
    for (g, count) in indegree.iter_mut().enumerate() {
        for d in deps(g) {
            *count += 1;
            users[d].push(g);
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&g| indegree[g] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(g) = ready.pop_first() {
        order.push(g);
        for &u in &users[g] {
            indegree[u] -= 1;
            if indegree[u] == 0 {
                ready.insert(u);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }

    // Every remaining gate has an unresolved dependency; walk back along them
    // until a gate repeats.
    let start = (0..n).find(|&g| indegree[g] > 0).expect("stuck gate");
    let mut path = vec![start];
    let mut cur = start;
    loop {
        cur = deps(cur).find(|&d| indegree[d] > 0).expect("stuck gate has stuck dep");
        if let Some(pos) = path.iter().position(|&g| g == cur) {
            let mut cycle = path.split_off(pos);
            cycle.reverse();
            return Err(cycle);
        }
        path.push(cur);
    }
}
