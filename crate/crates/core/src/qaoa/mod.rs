//! QAOA evaluation on whole graphs, parameter ascent, and tree parameters.

pub mod tree;

use std::f64::consts::PI;

use rayon::prelude::*;

pub use tree::{
    bundled_tree_table, evaluate_tree_edge, load_param_table, optimize_tree_params, parse_param_table,
    tree_params_d3, ParamSource, TreeParamResult,
};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lightcone::{graph_expectation, LightConeOptions};
use crate::optimize::{maximize, Bounds, NelderMeadOptions};
use crate::params::QaoaParams;
use crate::report::ExpectationReport;
use crate::simulator::{best_cut_probability, run_qaoa, zz_expectation, MixerSpec, MAX_QUBITS};

pub(crate) fn gamma_bound() -> f64 {
    PI
}

pub(crate) fn beta_bound() -> f64 {
    PI / 4.0
}

/// Search box for flat `[γ..., β...]`: γ ∈ [0, π], β ∈ [−π/4, π/4].
pub fn param_bounds(p: usize) -> Bounds {
    let mut lower = vec![0.0; p];
    let mut upper = vec![gamma_bound(); p];
    lower.extend(std::iter::repeat_n(-beta_bound(), p));
    upper.extend(std::iter::repeat_n(beta_bound(), p));
    Bounds::new(lower, upper)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Engine {
    /// Full statevector; `n ≤ 28`.
    Dense,
    LightCone(LightConeOptions),
}

/// Expected cut of the QAOA state. With `maxcut`, the approximation ratio is
/// filled in, and the dense engine also reports the best-cut probability.
pub fn evaluate_on_graph(
    g: &Graph,
    mixer: &MixerSpec,
    params: &QaoaParams,
    engine: &Engine,
    maxcut: Option<usize>,
) -> Result<ExpectationReport> {
    let mut report = match engine {
        Engine::Dense => {
            if g.vertex_count() > MAX_QUBITS {
                return Err(Error::TooLarge {
                    what: "dense engine qubit count",
                    size: g.vertex_count(),
                    limit: MAX_QUBITS,
                });
            }
            let state = run_qaoa(g, mixer, params)?;
            let per_edge = g
                .edges()
                .par_iter()
                .map(|&(a, b)| zz_expectation(&state, a, b).map(|zz| ((a, b), 0.5 * (1.0 - zz))))
                .collect::<Result<Vec<_>>>()?;
            let mut r = ExpectationReport::from_per_edge(per_edge);
            if let Some(best) = maxcut {
                r.best_cut_probability = Some(best_cut_probability(&state, best, g)?);
            }
            r
        }
        Engine::LightCone(opts) => graph_expectation(g, mixer, params, opts)?,
    };
    if let Some(best) = maxcut {
        report = report.with_maxcut(best);
    }
    Ok(report)
}

/// Nelder–Mead ascent from `start` with at most `budget` evaluations. The
/// result is never worse than `start`; `budget == 0` returns `start`.
pub fn ascend_from(
    g: &Graph,
    mixer: &MixerSpec,
    start: &QaoaParams,
    budget: usize,
    engine: &Engine,
    maxcut: Option<usize>,
) -> Result<(QaoaParams, ExpectationReport)> {
    let start_report = evaluate_on_graph(g, mixer, start, engine, maxcut)?;
    if budget == 0 || start.depth() == 0 {
        return Ok((start.clone(), start_report));
    }
    let objective = |x: &[f64]| {
        QaoaParams::from_flat(x)
            .and_then(|q| evaluate_on_graph(g, mixer, &q, engine, None))
            .map(|r| r.total_expectation)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let options = NelderMeadOptions {
        max_evals: budget,
        initial_step: 0.02,
        ..NelderMeadOptions::default()
    };
    let best = maximize(objective, &start.to_flat(), &param_bounds(start.depth()), &options);
    let params = QaoaParams::from_flat(&best.x)?;
    let report = evaluate_on_graph(g, mixer, &params, engine, maxcut)?;
    if report.total_expectation > start_report.total_expectation {
        Ok((params, report))
    } else {
        Ok((start.clone(), start_report))
    }
}
