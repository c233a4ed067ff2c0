//! Expectation of the cut operator as a sum of per-edge light-cone terms.
//!
//! At depth `p` the term `⟨Z_iZ_j⟩` only depends on the radius-`p` ball
//! around `⟨i, j⟩`, so each edge is evaluated on its own small subgraph,
//! either by dense simulation or by contracting a tensor network. Edges whose
//! neighborhoods are isomorphic (including the mixer angles) share one
//! evaluation when memoization is on.

pub mod canon;
pub mod network;
pub mod plan;

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

pub use network::{build_network, contract, Pruning, TensorNetwork};
pub use plan::{plan_contraction, ContractionPlan};

use crate::error::{Error, Result};
use crate::graph::{edge_neighborhood, EdgeNeighborhood, Graph};
use crate::params::QaoaParams;
use crate::report::ExpectationReport;
use crate::simulator::{run_qaoa, zz_expectation, MixerSpec, MAX_QUBITS};

/// Default contraction budget in scalar operations per edge.
pub const DEFAULT_BUDGET: f64 = (1u64 << 30) as f64;

/// Decimal digits kept from each angle when keying rotated neighborhoods.
pub const DEFAULT_ANGLE_PRECISION: u32 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Dense,
    TensorNetwork,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Self::Dense => "dense",
            Self::TensorNetwork => "tensor",
        }
    }
}

/// One edge's light-cone evaluation problem.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodTask {
    pub neighborhood: EdgeNeighborhood,
    /// Mixer angles of the neighborhood vertices, in local order.
    pub local_mixer: MixerSpec,
    pub params: QaoaParams,
}

impl NeighborhoodTask {
    /// The radius-`p` task for `edge` of `g`.
    pub fn new(g: &Graph, mixer: &MixerSpec, params: &QaoaParams, edge: (usize, usize)) -> Result<Self> {
        mixer.check_len(g.vertex_count())?;
        let neighborhood = edge_neighborhood(g, edge, params.depth())?;
        Ok(Self::from_neighborhood(neighborhood, mixer, params))
    }

    /// `mixer` is indexed by the neighborhood's original vertex ids.
    pub fn from_neighborhood(neighborhood: EdgeNeighborhood, mixer: &MixerSpec, params: &QaoaParams) -> Self {
        let local_mixer = mixer.restrict(&neighborhood.vertex_map);
        Self {
            neighborhood,
            local_mixer,
            params: params.clone(),
        }
    }

    /// Observable endpoints in local ids.
    pub fn observable(&self) -> (usize, usize) {
        self.neighborhood.local_center()
    }

    pub fn network(&self) -> TensorNetwork {
        build_network(
            &self.neighborhood.subgraph,
            &self.local_mixer,
            &self.params,
            self.observable(),
            Pruning::LightCone,
        )
    }
}

/// Value of one edge term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeValue {
    /// `⟨Z_iZ_j⟩`.
    pub zz: f64,
    /// Planner estimate, tensor backend only.
    pub plan_cost: Option<f64>,
}

/// `⟨Z_iZ_j⟩` in the locally evolved state of `task`.
pub fn edge_expectation(task: &NeighborhoodTask, backend: Backend, budget: f64) -> Result<EdgeValue> {
    match backend {
        Backend::Dense => {
            let n = task.neighborhood.vertex_count();
            if n > MAX_QUBITS {
                return Err(Error::TooLarge {
                    what: "dense neighborhood size",
                    size: n,
                    limit: MAX_QUBITS,
                });
            }
            let state = run_qaoa(&task.neighborhood.subgraph, &task.local_mixer, &task.params)?;
            let (a, b) = task.observable();
            Ok(EdgeValue {
                zz: zz_expectation(&state, a, b)?,
                plan_cost: None,
            })
        }
        Backend::TensorNetwork => {
            let net = task.network();
            let plan = plan_contraction(&net);
            if plan.cost > budget {
                return Err(Error::BudgetExceeded {
                    estimated: plan.cost,
                    budget,
                });
            }
            Ok(EdgeValue {
                zz: contract(&net, &plan.order).re,
                plan_cost: Some(plan.cost),
            })
        }
    }
}

/// Canonical byte encoding of a task up to relabeling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub certificate: Vec<u8>,
}

/// Key over (subgraph, marked center edge, angles rounded to
/// `angle_precision` decimals). Depth and radius are included as well.
pub fn canonical_key(task: &NeighborhoodTask, angle_precision: u32) -> CanonicalKey {
    let g = &task.neighborhood.subgraph;
    let n = g.vertex_count();
    let (a, b) = task.observable();
    let scale = 10f64.powi(angle_precision as i32);
    let invariants: Vec<i64> = (0..n)
        .map(|v| {
            let angle = match &task.local_mixer {
                MixerSpec::Standard => 0,
                MixerSpec::Rotated(t) => (t[v] * scale).round() as i64 + 1,
            };
            let center = i64::from(v == a || v == b);
            ((angle << 8) | g.degree(v).min(255) as i64) << 1 | center
        })
        .collect();
    let cert = canon::canonical_certificate(g, &invariants);
    let mut certificate = Vec::with_capacity(8 * (cert.len() + 2) + 1);
    certificate.push(matches!(task.local_mixer, MixerSpec::Rotated(_)) as u8);
    certificate.extend((task.params.depth() as u64).to_le_bytes());
    certificate.extend((task.neighborhood.radius as u64).to_le_bytes());
    for x in cert {
        certificate.extend(x.to_le_bytes());
    }
    CanonicalKey { certificate }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightConeOptions {
    pub backend: Backend,
    pub memoize: bool,
    /// Also memoize rotated-mixer neighborhoods.
    pub memoize_rotated: bool,
    pub angle_precision: u32,
    pub budget: f64,
}

impl Default for LightConeOptions {
    fn default() -> Self {
        Self {
            backend: Backend::TensorNetwork,
            memoize: true,
            memoize_rotated: false,
            angle_precision: DEFAULT_ANGLE_PRECISION,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl LightConeOptions {
    pub fn with_backend(backend: Backend) -> Self {
        Self {
            backend,
            ..Self::default()
        }
    }
}

/// Per-edge outcome of [`graph_expectation_detailed`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeOutcome {
    pub edge: (usize, usize),
    pub zz: f64,
    pub backend: Backend,
    pub cache_hit: bool,
    pub plan_cost: Option<f64>,
}

/// `½|E| − ½ Σ ⟨Z_iZ_j⟩` from per-edge light cones.
pub fn graph_expectation(
    g: &Graph,
    mixer: &MixerSpec,
    params: &QaoaParams,
    options: &LightConeOptions,
) -> Result<ExpectationReport> {
    graph_expectation_detailed(g, mixer, params, options).map(|(r, _)| r)
}

pub fn graph_expectation_detailed(
    g: &Graph,
    mixer: &MixerSpec,
    params: &QaoaParams,
    options: &LightConeOptions,
) -> Result<(ExpectationReport, Vec<EdgeOutcome>)> {
    mixer.check_len(g.vertex_count())?;
    let tasks: Vec<NeighborhoodTask> = g
        .edges()
        .par_iter()
        .map(|&e| NeighborhoodTask::new(g, mixer, params, e))
        .collect::<Result<_>>()?;

    let keyed = options.memoize
        && (matches!(mixer, MixerSpec::Standard) || options.memoize_rotated);
    // representative[k] = index of the first edge with the same key
    let representative: Vec<usize> = if keyed {
        let keys: Vec<CanonicalKey> = tasks
            .par_iter()
            .map(|t| canonical_key(t, options.angle_precision))
            .collect();
        let mut first: HashMap<&CanonicalKey, usize> = HashMap::new();
        keys.iter()
            .enumerate()
            .map(|(i, k)| *first.entry(k).or_insert(i))
            .collect()
    } else {
        (0..tasks.len()).collect()
    };

    let unique: Vec<usize> = (0..tasks.len()).filter(|&i| representative[i] == i).collect();
    let values: Vec<Result<EdgeValue>> = unique
        .par_iter()
        .map(|&i| edge_expectation(&tasks[i], options.backend, options.budget))
        .collect();
    let mut computed: HashMap<usize, EdgeValue> = HashMap::with_capacity(unique.len());
    for (&i, v) in unique.iter().zip(values) {
        computed.insert(i, v?);
    }

    let outcomes: Vec<EdgeOutcome> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &edge)| {
            let rep = representative[i];
            let v = computed[&rep];
            EdgeOutcome {
                edge,
                zz: v.zz,
                backend: options.backend,
                cache_hit: rep != i,
                plan_cost: v.plan_cost,
            }
        })
        .collect();
    let report = ExpectationReport::from_per_edge(
        outcomes.iter().map(|o| (o.edge, 0.5 * (1.0 - o.zz))).collect(),
    );
    Ok((report, outcomes))
}

/// Header of [`edge_dump_csv`].
pub const EDGE_DUMP_HEADER: &str = "i,j,zz_expectation,backend,cache_hit,plan_cost";

/// CSV dump of per-edge outcomes.
pub fn edge_dump_csv(outcomes: &[EdgeOutcome]) -> String {
    let mut out = String::from(EDGE_DUMP_HEADER);
    out.push('\n');
    for o in outcomes {
        let cost = o.plan_cost.map(|c| format!("{c}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{:.15e},{},{},{}",
            o.edge.0,
            o.edge.1,
            o.zz,
            o.backend.name(),
            o.cache_hit,
            cost
        )
        .unwrap();
    }
    out
}
