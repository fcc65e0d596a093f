//! Gate and circuit accuracy.
//!
//! Accuracy is the probability that every declared output matches the ideal
//! Boolean function, averaged uniformly over input combinations. It is
//! computed exactly from the Gaussian response model ([`analytic`]) and
//! estimated by seeded Monte Carlo ([`monte_carlo`]); the two must agree.

mod analytic;
mod monte_carlo;
mod normal;
mod report;

use thiserror::Error;

use crate::circuits::MeasureError;

pub use analytic::{
    analytic_circuit_accuracy, analytic_gate_accuracy, classification_probability,
    output_distribution, MAX_ANALYTIC_GATES,
};
pub use monte_carlo::{monte_carlo_accuracy, MonteCarloConfig};
pub use normal::{normal_cdf, std_normal_cdf};
pub use report::{
    comparison_csv, published_comparison, AccuracyReport, InputAccuracy, Method, ComparisonRow, COMPARISON_CSV_HEADER,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("standard deviation must be positive, got {0}")]
    NonPositiveStd(f64),
    #[error("circuit has {gates} gates; exact enumeration supports at most {max}")]
    TooManyGates { gates: usize, max: usize },
    #[error("monte carlo needs at least one trial")]
    ZeroTrials,
    #[error(transparent)]
    Measure(#[from] MeasureError),
}
