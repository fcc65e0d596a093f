use rayon::prelude::*;

use super::analytic::finish;
use super::report::{AccuracyReport, InputAccuracy, Method};
use super::AnalysisError;
use crate::circuits::{evaluate_circuit_with, EvalMode, Netlist, TruthTable};
use crate::seed::trial_seed;
use crate::signal::ResponseModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloConfig {
    /// Trials per input combination.
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub mode: EvalMode,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 42,
            workers: None,
            mode: EvalMode::Sampled,
        }
    }
}

/// Estimates circuit accuracy by simulation.
///
/// Trial `t` of input combination `c` evaluates the circuit under
/// `trial_seed(seed, c, t)`, and successes are summed as integers, so the
/// report is bit-identical for any worker count.
pub fn monte_carlo_accuracy(
    n: &Netlist,
    model: &ResponseModel,
    cfg: &MonteCarloConfig,
) -> Result<AccuracyReport, AnalysisError> {
    if cfg.trials == 0 {
        return Err(AnalysisError::ZeroTrials);
    }
    let run = || -> Result<Vec<InputAccuracy>, AnalysisError> {
        let k = n.inputs().len();
        (0..1usize << k)
            .map(|c| {
                let x = TruthTable::inputs_of(k, c);
                let ideal = n.ideal_outputs(&x);
                let correct = (0..cfg.trials)
                    .into_par_iter()
                    .map(|t| {
                        let seed = trial_seed(cfg.seed, c as u64, t);
                        evaluate_circuit_with(n, &x, model, &cfg.mode, seed)
                            .map(|out| u64::from(out == ideal))
                    })
                    .try_reduce(|| 0, |a, b| Ok(a + b))?;
                Ok(InputAccuracy {
                    inputs: x.iter().map(|&b| if b { '1' } else { '0' }).collect(),
                    probability: correct as f64 / cfg.trials as f64,
                })
            })
            .collect()
    };
    let per_input = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("thread pool")
            .install(run)?,
        None => run()?,
    };
    let mut report = finish(n.name(), per_input);
    report.method = Method::MonteCarlo;
    report.trials = Some(cfg.trials);
    report.std_error =
        Some((report.overall * (1.0 - report.overall) / cfg.trials as f64).sqrt());
    Ok(report)
}
