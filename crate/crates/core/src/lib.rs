//! Simulation of Physarum frequency gates (PFGs).
//!
//! A PFG is a single protoplasmic tube whose shuttle-streaming oscillation
//! frequency shifts when heat (input A) and/or an oat flake (input B) are
//! applied. Thresholding the percent frequency change Δf yields a Boolean
//! output, and cascading independent tubes yields combinational circuits.
//!
//! The crate is organised bottom-up:
//!
//! * [`signal`] draws Δf from the stimulus-conditioned response model and
//!   synthesizes 1 Hz electrode traces.
//! * [`spectral`] recovers the dominant frequency before and after onset and
//!   computes Δf.
//! * [`gates`] maps logic inputs to stimuli and Δf to output bits.
//! * [`circuits`] holds the netlist DSL, builtin circuits and the cascading
//!   evaluator.
//! * [`analysis`] computes accuracy exactly (normal CDF propagated through
//!   the circuit DAG) and by seeded Monte Carlo.

pub mod analysis;
pub mod circuits;
pub mod gates;
pub mod seed;
pub mod signal;
pub mod spectral;

pub use analysis::{
    analytic_circuit_accuracy, analytic_gate_accuracy, classification_probability,
    monte_carlo_accuracy, normal_cdf, published_comparison, AccuracyReport, AnalysisError, Method,
    MonteCarloConfig, ComparisonRow,
};
pub use circuits::{
    builtin, evaluate_circuit, evaluate_circuit_with, ideal_truth_table, parse_netlist,
    serialize_netlist, EvalMode, Gate, Netlist, NetlistError, TruthTable, WireRef,
};
pub use gates::{
    classify, evaluate_gate, stimuli_for_inputs, threshold_rule_for, GateKind, GateSpec,
    ThresholdRule,
};
pub use signal::{
    sample_delta_f, synthesize_trace, OscillationModel, PatternResponse, ResponseModel,
    SignalError, StimulusPattern, Trace,
};
pub use spectral::{
    compute_delta_f, estimate_dominant_frequency, DeltaFAnalysis, FrequencyEstimate,
    SpectralConfig, SpectralError, Window, WindowSide,
};
