//! Central-edge objective on the D-regular tree and its optimal parameters.

use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{beta_bound, gamma_bound, param_bounds};
use crate::error::{Error, Result};
use crate::graph::{build_tree_neighborhood, tree_vertex_count};
use crate::lightcone::{edge_expectation, Backend, NeighborhoodTask, DEFAULT_BUDGET};
use crate::optimize::{multi_start, NelderMeadOptions};
use crate::params::QaoaParams;
use crate::simulator::MixerSpec;

/// Trees up to this many vertices are simulated densely.
pub const TREE_DENSE_MAX_VERTICES: usize = 20;

/// Trees above this many vertices are rejected before planning.
pub const TREE_NETWORK_MAX_VERTICES: usize = 1022;

static BUNDLED_D3: &str = include_str!("../../data/tree_params_d3.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamSource {
    Optimized,
    TableFile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeParamResult {
    pub degree: usize,
    pub depth: usize,
    pub params: QaoaParams,
    pub f_value: f64,
    pub source: ParamSource,
}

impl fmt::Display for TreeParamResult {
    /// One table record: `D p f gamma_1..gamma_p beta_1..beta_p`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.degree, self.depth, self.f_value)?;
        for x in self.params.gammas().iter().chain(self.params.betas()) {
            write!(f, " {x}")?;
        }
        Ok(())
    }
}

fn infeasible(degree: usize, depth: usize, vertices: usize, reason: impl Into<String>) -> Error {
    Error::TreeInfeasible {
        degree,
        depth,
        vertices,
        reason: reason.into(),
    }
}

/// Vertex count of the depth-`p` tree, or an error if it cannot be evaluated.
pub fn check_tree_feasible(degree: usize, p: usize) -> Result<usize> {
    if degree < 2 {
        return Err(Error::InvalidArgument(format!("tree degree must be at least 2, got {degree}")));
    }
    let vertices = tree_vertex_count(degree, p);
    if vertices > TREE_NETWORK_MAX_VERTICES {
        return Err(infeasible(
            degree,
            p,
            vertices,
            format!("more than {TREE_NETWORK_MAX_VERTICES} vertices"),
        ));
    }
    Ok(vertices)
}

/// `½⟨γ,β|(I − Z_uZ_v)|γ,β⟩` for the central edge `⟨u, v⟩` of the D-regular
/// tree of radius `p`, under the standard mixer.
pub fn evaluate_tree_edge(degree: usize, p: usize, params: &QaoaParams) -> Result<f64> {
    if params.depth() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: params.depth(),
        });
    }
    let vertices = check_tree_feasible(degree, p)?;
    let tree = build_tree_neighborhood(degree, p)?;
    let task = NeighborhoodTask::from_neighborhood(tree, &MixerSpec::Standard, params);
    let backend = if vertices <= TREE_DENSE_MAX_VERTICES {
        Backend::Dense
    } else {
        Backend::TensorNetwork
    };
    match edge_expectation(&task, backend, DEFAULT_BUDGET) {
        Ok(v) => Ok(0.5 * (1.0 - v.zz)),
        Err(Error::BudgetExceeded { estimated, budget }) => Err(infeasible(
            degree,
            p,
            vertices,
            format!("contraction cost {estimated:.3e} exceeds budget {budget:.3e}"),
        )),
        Err(e) => Err(e),
    }
}

/// Maximizes the tree objective by multi-start Nelder–Mead. Starts are a
/// coarse grid (p = 1), the previous depth's optimum padded with zeros, its
/// interpolation to depth `p`, and `restarts` seeded random points.
pub fn optimize_tree_params(degree: usize, p: usize, restarts: usize, seed: u64) -> Result<TreeParamResult> {
    check_tree_feasible(degree, p)?;
    if p == 0 {
        return Ok(TreeParamResult {
            degree,
            depth: 0,
            params: QaoaParams::empty(),
            f_value: evaluate_tree_edge(degree, 0, &QaoaParams::empty())?,
            source: ParamSource::Optimized,
        });
    }
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if p == 1 {
        for i in 0..6 {
            for j in 0..6 {
                let g = gamma_bound() * (i as f64 + 0.5) / 6.0;
                let b = -beta_bound() + 2.0 * beta_bound() * (j as f64 + 0.5) / 6.0;
                starts.push(vec![g, b]);
            }
        }
    } else {
        let prev = optimize_tree_params(degree, p - 1, restarts, seed)?;
        starts.push(prev.params.padded(p).to_flat());
        starts.push(prev.params.interpolated().to_flat());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    for _ in 0..restarts {
        let mut x: Vec<f64> = (0..p).map(|_| rng.random_range(0.0..gamma_bound())).collect();
        x.extend((0..p).map(|_| rng.random_range(-beta_bound()..beta_bound())));
        starts.push(x);
    }

    let objective = |x: &[f64]| {
        QaoaParams::from_flat(x)
            .and_then(|q| evaluate_tree_edge(degree, p, &q))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let options = NelderMeadOptions {
        max_evals: 600 * p * p + 400,
        initial_step: 0.05,
        ftol: 1e-14,
        xtol: 1e-10,
    };
    let (best, _) = multi_start(&objective, &starts, &param_bounds(p), &options)
        .expect("at least one start");
    let params = QaoaParams::from_flat(&best.x)?;
    Ok(TreeParamResult {
        degree,
        depth: p,
        f_value: evaluate_tree_edge(degree, p, &params)?,
        params,
        source: ParamSource::Optimized,
    })
}

/// Parses table records `D p f gamma_1..gamma_p beta_1..beta_p`. Blank lines
/// and `#` comments are skipped.
pub fn parse_param_table(text: &str) -> Result<Vec<TreeParamResult>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 3 {
            return Err(err(format!("expected `D p f angles...`, got {} fields", fields.len())));
        }
        let degree: usize = fields[0]
            .parse()
            .map_err(|_| err(format!("bad degree `{}`", fields[0])))?;
        let depth: usize = fields[1]
            .parse()
            .map_err(|_| err(format!("bad depth `{}`", fields[1])))?;
        let entry = format!("entry D={degree} p={depth}");
        let f_value: f64 = fields[2]
            .parse()
            .map_err(|_| err(format!("{entry}: bad f value `{}`", fields[2])))?;
        if fields.len() != 3 + 2 * depth {
            return Err(err(format!(
                "{entry}: expected {} angles, got {}",
                2 * depth,
                fields.len() - 3
            )));
        }
        let angles: Vec<f64> = fields[3..]
            .iter()
            .enumerate()
            .map(|(k, s)| {
                s.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| err(format!("{entry}: malformed angle {} `{s}`", k + 1)))
            })
            .collect::<Result<_>>()?;
        let params = QaoaParams::from_flat(&angles).map_err(|e| err(format!("{entry}: {e}")))?;
        out.push(TreeParamResult {
            degree,
            depth,
            params,
            f_value,
            source: ParamSource::TableFile,
        });
    }
    Ok(out)
}

/// Entry whose listed value disagrees with a direct evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct TableMismatch {
    pub degree: usize,
    pub depth: usize,
    pub listed: f64,
    pub computed: f64,
}

/// Re-evaluates entries with `p ≤ 2` and reports those off by more than 1e-3.
pub fn cross_validate(entries: &[TreeParamResult]) -> Vec<TableMismatch> {
    entries
        .iter()
        .filter(|e| e.depth <= 2)
        .filter_map(|e| {
            let computed = evaluate_tree_edge(e.degree, e.depth, &e.params).ok()?;
            ((computed - e.f_value).abs() > 1e-3).then_some(TableMismatch {
                degree: e.degree,
                depth: e.depth,
                listed: e.f_value,
                computed,
            })
        })
        .collect()
}

/// Reads a table file and warns about entries that fail [`cross_validate`].
pub fn load_param_table(path: impl AsRef<Path>) -> Result<Vec<TreeParamResult>> {
    let entries = parse_param_table(&std::fs::read_to_string(path)?)?;
    for m in cross_validate(&entries) {
        log::warn!(
            "table entry D={} p={} lists f={} but evaluates to {:.6}",
            m.degree,
            m.depth,
            m.listed,
            m.computed
        );
    }
    Ok(entries)
}

/// The bundled 3-regular table, p = 1..11.
pub fn bundled_tree_table() -> Vec<TreeParamResult> {
    parse_param_table(BUNDLED_D3).expect("bundled table parses")
}

pub fn lookup(table: &[TreeParamResult], degree: usize, depth: usize) -> Option<&TreeParamResult> {
    table.iter().find(|e| e.degree == degree && e.depth == depth)
}

/// Tree parameters for 3-regular graphs: the bundled table for `p ≥ 1`,
/// empty parameters at `p = 0`.
pub fn tree_params_d3(p: usize) -> Result<QaoaParams> {
    if p == 0 {
        return Ok(QaoaParams::empty());
    }
    lookup(&bundled_tree_table(), 3, p)
        .map(|e| e.params.clone())
        .ok_or_else(|| Error::InvalidArgument(format!("no bundled tree parameters for p={p}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{run_qaoa, zz_expectation};
    use std::f64::consts::PI;

    #[test]
    fn depth_zero_is_half() {
        for d in 2..6 {
            assert_eq!(evaluate_tree_edge(d, 0, &QaoaParams::empty()).unwrap(), 0.5);
        }
        let r = optimize_tree_params(3, 0, 2, 0).unwrap();
        assert_eq!(r.f_value, 0.5);
        assert_eq!(r.params.depth(), 0);
    }

    #[test]
    fn p1_matches_closed_form() {
        // triangle-free p = 1: ½ + ½ sin4β sinγ cos^(D−1)γ
        for d in [2, 3, 4] {
            for &(g, b) in &[(0.3, 0.2), (0.616, PI / 8.0), (1.2, -0.5)] {
                let q = QaoaParams::new(vec![g], vec![b]).unwrap();
                let want = 0.5 + 0.5 * (4.0 * b).sin() * g.sin() * g.cos().powi(d as i32 - 1);
                assert!((evaluate_tree_edge(d, 1, &q).unwrap() - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dense_and_network_agree_on_p2_tree() {
        let q = QaoaParams::new(vec![0.488, 0.898], vec![0.555, 0.293]).unwrap();
        let tree = build_tree_neighborhood(3, 2).unwrap();
        let state = run_qaoa(&tree.subgraph, &MixerSpec::Standard, &q).unwrap();
        let dense = 0.5 * (1.0 - zz_expectation(&state, 0, 1).unwrap());
        let task = NeighborhoodTask::from_neighborhood(tree, &MixerSpec::Standard, &q);
        let tn = edge_expectation(&task, Backend::TensorNetwork, DEFAULT_BUDGET).unwrap().zz;
        assert!((dense - 0.5 * (1.0 - tn)).abs() < 1e-12);
        assert!((evaluate_tree_edge(3, 2, &q).unwrap() - dense).abs() < 1e-15);
    }

    #[test]
    fn p3_runs_through_the_network() {
        let entry = lookup(&bundled_tree_table(), 3, 3).unwrap().clone();
        let f = evaluate_tree_edge(3, 3, &entry.params).unwrap();
        assert!((f - entry.f_value).abs() < 1e-4, "{f}");
    }

    #[test]
    fn rejects_infeasible() {
        let q = lookup(&bundled_tree_table(), 3, 11).unwrap().params.clone();
        match evaluate_tree_edge(3, 11, &q) {
            Err(Error::TreeInfeasible { vertices, .. }) => assert_eq!(vertices, 8190),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            evaluate_tree_edge(3, 2, &QaoaParams::empty()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn table_parsing() {
        assert!(parse_param_table("").unwrap().is_empty());
        assert!(parse_param_table("# nothing\n\n").unwrap().is_empty());
        let e = parse_param_table("3 1 0.69 0.6 0.4\n3 2 0.75 0.5 x 0.5 0.3\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("line 2") && msg.contains("D=3 p=2") && msg.contains("`x`"), "{msg}");
        assert!(parse_param_table("3 2 0.75 0.5 0.9 0.5\n").is_err());
        assert!(parse_param_table("3 1\n").is_err());
        let table = bundled_tree_table();
        assert_eq!(table.len(), 11);
        assert_eq!(lookup(&table, 3, 11).unwrap().f_value, 0.8828);
        assert!(cross_validate(&table).is_empty());
        let round = parse_param_table(&table.iter().map(|e| format!("{e}\n")).collect::<String>()).unwrap();
        assert_eq!(round, table);
    }

    #[test]
    fn p1_optimum() {
        let r = optimize_tree_params(3, 1, 4, 1).unwrap();
        let want = 0.5 + 1.0 / (3.0 * 3f64.sqrt());
        assert!((r.f_value - want).abs() < 1e-9, "{}", r.f_value);
        assert!((r.params.gammas()[0] - (1.0 / 2f64.sqrt()).atan()).abs() < 1e-4);
        assert!((r.params.betas()[0] - PI / 8.0).abs() < 1e-4);
    }
}
