//! Recipe execution: graph instances, a feasibility pass over every cell, a
//! parallel evaluation pass, and output files written in a fixed order.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;

use qaoa_maxcut::graph::{exact_maxcut, generate_unique_maxcut_regular, tree_vertex_count, MAX_EXACT_VERTICES};
use qaoa_maxcut::gw::{expected_gw_cut, p0_expectation, project_to_plane, solve_sdp, SdpSolution, WarmStart};
use qaoa_maxcut::lightcone::{plan_contraction, NeighborhoodTask, DEFAULT_BUDGET};
use qaoa_maxcut::qaoa::{ascend_from, evaluate_on_graph, tree_params_d3, Engine};
use qaoa_maxcut::simulator::MAX_QUBITS;
use qaoa_maxcut::{gw, graph, Graph, MixerSpec, QaoaParams};

use crate::config::{EngineKind, ExperimentConfig, Family, Recipe, Strategy};
use crate::record::{graph_hash, to_csv, to_gnuplot, ErrorRecord, ResultRecord, ERRORS_HEADER, RESULTS_HEADER};

/// Largest n run without `allow_large`.
pub const DESK_MAX_VERTICES: usize = 128;
/// Largest p run without `allow_large`.
pub const DESK_MAX_DEPTH: usize = 3;
/// Largest dense n run without `allow_large`.
pub const DESK_MAX_DENSE_VERTICES: usize = 24;

const UNIQUE_ATTEMPTS: usize = 2000;

/// SplitMix64 finalizer, used to derive independent seeds.
pub fn mix_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x243f_6a88_85a3_08d3u64, |acc, &x| {
        let mut z = acc ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    })
}

/// One graph of the experiment with everything its cells share.
#[derive(Debug, Clone)]
pub struct Instance {
    pub n: usize,
    pub family: Family,
    pub index: usize,
    pub seed: u64,
    pub graph: Graph,
    pub hash: String,
    pub maxcut: Option<usize>,
    pub gw: Option<GwData>,
}

#[derive(Debug, Clone)]
pub struct GwData {
    pub solution: SdpSolution,
    pub expected: f64,
    /// Projected warm start with the optimized α.
    pub warm: WarmStart,
}

/// `(instance, p, strategy)`; `p` is `None` for `gw-only`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub instance: usize,
    pub p: Option<usize>,
    pub strategy: Strategy,
}

/// One point of the axis-rotation sweep.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SweepPoint {
    pub graph_hash: String,
    pub n: usize,
    pub p: usize,
    /// Offset from the optimized α.
    pub rotation: f64,
    pub alpha: f64,
    pub expectation: f64,
}

pub const SWEEP_HEADER: &str = "graph_hash,n,p,rotation,alpha,expectation";
pub const TREE_REFERENCE_HEADER: &str = "p,f_tree";

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TreeReference {
    pub p: usize,
    pub f_tree: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Fig4Summary {
    pub n: usize,
    pub p: usize,
    pub mean_warmstart_tree: f64,
    pub mean_gw: f64,
    pub warmstart_exceeds_gw: bool,
}

pub const FIG4_SUMMARY_HEADER: &str = "n,p,mean_warmstart_tree,mean_gw,warmstart_exceeds_gw";

#[derive(Debug, Clone, Default)]
pub struct RecipeOutput {
    pub records: Vec<ResultRecord>,
    pub errors: Vec<ErrorRecord>,
    pub sweep: Vec<SweepPoint>,
    pub tree_reference: Vec<TreeReference>,
    pub fig4_summary: Vec<Fig4Summary>,
    /// Human-readable cost notes from the feasibility pass.
    pub estimates: Vec<String>,
}

fn needs_gw(cfg: &ExperimentConfig) -> bool {
    cfg.recipe == Recipe::Fig3P0Sweep || cfg.strategies.iter().any(|s| s.needs_gw())
}

fn build_instance(cfg: &ExperimentConfig, n: usize, family: Family, index: usize) -> Result<Instance> {
    let seed = mix_seed(&[cfg.seed, n as u64, family as u64, index as u64]);
    let graph = if cfg.unique_maxcut {
        generate_unique_maxcut_regular(n, 3, family.regular(), seed, UNIQUE_ATTEMPTS)?
    } else {
        family.regular().sample(n, 3, seed)?
    };
    let maxcut = if n <= MAX_EXACT_VERTICES {
        Some(exact_maxcut(&graph)?.best.value)
    } else if family == Family::Bipartite {
        Some(graph.edge_count())
    } else {
        None
    };
    let gw = if needs_gw(cfg) {
        let solution = solve_sdp(&graph, None, gw::DEFAULT_TOL, gw::DEFAULT_MAX_ITERS, mix_seed(&[cfg.sdp_seed, seed]))?;
        if !solution.converged {
            log::warn!(
                "relaxation for n={n} {} #{index} stopped at gradient norm {:.2e}",
                family.name(),
                solution.gradient_norm
            );
        }
        let expected = expected_gw_cut(&solution, &graph);
        let warm = project_to_plane(&solution, mix_seed(&[seed, 0x70_6c61_6e65]))?.with_optimized_alpha(&graph);
        Some(GwData {
            solution,
            expected,
            warm,
        })
    } else {
        None
    };
    Ok(Instance {
        n,
        family,
        index,
        seed,
        hash: graph_hash(&graph),
        graph,
        maxcut,
        gw,
    })
}

/// Reason a `(n, p)` cell cannot run, or `None` if it can.
pub fn infeasibility(cfg: &ExperimentConfig, n: usize, p: usize, notes: &mut Vec<String>) -> Option<String> {
    if p > 11 {
        return Some(format!("no tree parameters for p={p}"));
    }
    match cfg.engine {
        EngineKind::Dense => {
            if n > MAX_QUBITS {
                return Some(format!("dense engine limited to {MAX_QUBITS} qubits, n={n}"));
            }
            let bytes = 16f64 * 2f64.powi(n as i32);
            notes.push(format!("n={n} p={p} dense: statevector {:.1} MiB", bytes / (1 << 20) as f64));
            if n > DESK_MAX_DENSE_VERTICES && !cfg.allow_large {
                return Some(format!("dense n={n} above desk scale {DESK_MAX_DENSE_VERTICES}; pass --allow-large"));
            }
        }
        EngineKind::Lightcone => {
            let vertices = tree_vertex_count(3, p);
            if vertices > qaoa_maxcut::qaoa::tree::TREE_NETWORK_MAX_VERTICES {
                return Some(format!("radius-{p} neighborhoods reach {vertices} vertices"));
            }
            let tree = graph::build_tree_neighborhood(3, p).ok()?;
            let params = QaoaParams::new(vec![0.5; p], vec![0.3; p]).ok()?;
            let cost = plan_contraction(&NeighborhoodTask::from_neighborhood(tree, &MixerSpec::Standard, &params).network()).cost;
            notes.push(format!(
                "n={n} p={p} lightcone: tree-like neighborhood cost {cost:.3e} per edge, {} edges",
                3 * n / 2
            ));
            if cost > DEFAULT_BUDGET {
                return Some(format!("neighborhood contraction cost {cost:.3e} exceeds budget {DEFAULT_BUDGET:.3e}"));
            }
        }
    }
    if (n > DESK_MAX_VERTICES || p > DESK_MAX_DEPTH) && !cfg.allow_large {
        return Some(format!(
            "n={n} p={p} above desk scale (n<={DESK_MAX_VERTICES}, p<={DESK_MAX_DEPTH}); pass --allow-large"
        ));
    }
    None
}

fn evaluate_cell(cfg: &ExperimentConfig, inst: &Instance, cell: Cell) -> Result<ResultRecord> {
    let start = Instant::now();
    let engine = cfg.engine();
    let edges = inst.graph.edge_count() as f64;
    let gw_expected = inst.gw.as_ref().map(|g| g.expected);
    let mut record = ResultRecord {
        graph_hash: inst.hash.clone(),
        strategy: cell.strategy,
        n: inst.n,
        p: cell.p,
        expectation: 0.0,
        cut_fraction: 0.0,
        approx_ratio: None,
        gw_expected,
        best_cut_prob: None,
        seed: inst.seed,
        wall_ms: None,
    };
    let finish = |mut r: ResultRecord, expectation: f64, best: Option<f64>| {
        r.expectation = expectation;
        r.cut_fraction = expectation / edges;
        r.approx_ratio = inst.maxcut.filter(|&m| m > 0).map(|m| expectation / m as f64);
        r.best_cut_prob = best;
        if cfg.record_wall_time {
            r.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        r
    };
    if cell.strategy == Strategy::GwOnly {
        let e = gw_expected.ok_or_else(|| anyhow!("relaxation not computed"))?;
        return Ok(finish(record, e, None));
    }
    let p = cell.p.ok_or_else(|| anyhow!("missing depth"))?;
    let params = tree_params_d3(p)?;
    let mixer = if cell.strategy.is_warmstart() {
        let gwd = inst.gw.as_ref().ok_or_else(|| anyhow!("relaxation not computed"))?;
        gw::build_warmstart_qaoa_inputs(&gwd.warm)
    } else {
        MixerSpec::Standard
    };
    let dense_best = matches!(engine, Engine::Dense).then_some(inst.maxcut).flatten();
    let report = match cell.strategy {
        Strategy::StandardAscend | Strategy::WarmstartAscend => {
            ascend_from(&inst.graph, &mixer, &params, cfg.ascend_budget, &engine, dense_best)?.1
        }
        _ => evaluate_on_graph(&inst.graph, &mixer, &params, &engine, dense_best)?,
    };
    record = finish(record, report.total_expectation, report.best_cut_probability);
    Ok(record)
}

fn sweep(cfg: &ExperimentConfig, inst: &Instance) -> Result<Vec<SweepPoint>> {
    let gwd = inst.gw.as_ref().ok_or_else(|| anyhow!("relaxation not computed"))?;
    let engine = cfg.engine();
    let m = cfg.sweep_points;
    let jobs: Vec<(usize, usize)> = cfg.depths.iter().flat_map(|&p| (0..m).map(move |k| (p, k))).collect();
    jobs.par_iter()
        .map(|&(p, k)| {
            let rotation = -PI + 2.0 * PI * k as f64 / m as f64;
            let alpha = gwd.warm.alpha + rotation;
            let expectation = if p == 0 {
                p0_expectation(&gwd.warm.thetas, alpha, &inst.graph)
            } else {
                let ws = WarmStart::new(gwd.warm.thetas.clone(), alpha, gwd.warm.plane_seed);
                let mixer = gw::build_warmstart_qaoa_inputs(&ws);
                evaluate_on_graph(&inst.graph, &mixer, &tree_params_d3(p)?, &engine, None)?.total_expectation
            };
            Ok(SweepPoint {
                graph_hash: inst.hash.clone(),
                n: inst.n,
                p,
                rotation,
                alpha,
                expectation,
            })
        })
        .collect()
}

fn error_record(cfg_family: Family, n: usize, index: usize, cell: Option<Cell>, err: &str) -> ErrorRecord {
    ErrorRecord {
        n,
        family: cfg_family.name().to_string(),
        instance: index,
        p: cell.and_then(|c| c.p),
        strategy: cell.map_or("-".to_string(), |c| c.strategy.name().to_string()),
        error: err.replace(['\n', '\r'], " "),
    }
}

/// Runs every cell of the recipe. Failures are isolated per cell and reported
/// in `errors`; output order depends only on the config.
pub fn execute(cfg: &ExperimentConfig) -> Result<RecipeOutput> {
    cfg.validate()?;
    let mut out = RecipeOutput::default();

    // feasibility before anything runs
    let mut depth_ok: Vec<(usize, usize, Option<String>)> = Vec::new();
    for &n in &cfg.sizes {
        for &p in &cfg.depths {
            let reason = infeasibility(cfg, n, p, &mut out.estimates);
            depth_ok.push((n, p, reason));
        }
    }
    let blocked = |n: usize, p: usize| depth_ok.iter().find(|d| d.0 == n && d.1 == p).and_then(|d| d.2.clone());

    let slots: Vec<(usize, Family, usize)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| cfg.families.iter().flat_map(move |&f| (0..cfg.instances).map(move |i| (n, f, i))))
        .collect();
    let any_feasible = |n: usize| cfg.depths.iter().any(|&p| blocked(n, p).is_none());
    let built: Vec<Option<Result<Instance>>> = slots
        .par_iter()
        .map(|&(n, f, i)| any_feasible(n).then(|| build_instance(cfg, n, f, i)))
        .collect();

    let mut instances: Vec<Instance> = Vec::new();
    let mut cells: Vec<Cell> = Vec::new();
    for (&(n, f, i), b) in slots.iter().zip(built) {
        let inst = match b {
            None => {
                for &p in &cfg.depths {
                    for &s in cfg.strategies.iter().filter(|s| **s != Strategy::GwOnly) {
                        let cell = Cell { instance: 0, p: Some(p), strategy: s };
                        out.errors.push(error_record(f, n, i, Some(cell), &blocked(n, p).unwrap_or_default()));
                    }
                }
                continue;
            }
            Some(Err(e)) => {
                out.errors.push(error_record(f, n, i, None, &format!("{e:#}")));
                continue;
            }
            Some(Ok(inst)) => inst,
        };
        let idx = instances.len();
        for &s in &cfg.strategies {
            if s == Strategy::GwOnly {
                cells.push(Cell { instance: idx, p: None, strategy: s });
                continue;
            }
            for &p in &cfg.depths {
                let cell = Cell { instance: idx, p: Some(p), strategy: s };
                match blocked(n, p) {
                    Some(reason) => out.errors.push(error_record(f, n, i, Some(cell), &reason)),
                    None => cells.push(cell),
                }
            }
        }
        instances.push(inst);
    }

    let results: Vec<Result<ResultRecord>> = cells
        .par_iter()
        .map(|&c| evaluate_cell(cfg, &instances[c.instance], c))
        .collect();
    for (c, r) in cells.iter().zip(results) {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(e) => {
                let inst = &instances[c.instance];
                out.errors.push(error_record(inst.family, inst.n, inst.index, Some(*c), &format!("{e:#}")));
            }
        }
    }

    match cfg.recipe {
        Recipe::Fig1 => {
            out.tree_reference = cfg
                .depths
                .iter()
                .filter_map(|&p| {
                    // the table's f is rounded; the angles themselves are the reference
                    let f_tree = if p == 0 {
                        0.5
                    } else {
                        let params = tree_params_d3(p).ok()?;
                        qaoa_maxcut::qaoa::evaluate_tree_edge(3, p, &params).ok().or_else(|| {
                            qaoa_maxcut::qaoa::tree::lookup(&qaoa_maxcut::qaoa::bundled_tree_table(), 3, p).map(|e| e.f_value)
                        })?
                    };
                    Some(TreeReference { p, f_tree })
                })
                .collect();
        }
        Recipe::Fig3P0Sweep => {
            for inst in &instances {
                match sweep(cfg, inst) {
                    Ok(points) => out.sweep.extend(points),
                    Err(e) => out.errors.push(error_record(inst.family, inst.n, inst.index, None, &format!("sweep: {e:#}"))),
                }
            }
        }
        Recipe::Fig4 => out.fig4_summary = fig4_summary(&out.records),
        Recipe::Fig2 | Recipe::Custom => {}
    }
    Ok(out)
}

fn fig4_summary(records: &[ResultRecord]) -> Vec<Fig4Summary> {
    let mut keys: Vec<(usize, usize)> = records
        .iter()
        .filter(|r| r.strategy == Strategy::WarmstartTree)
        .filter_map(|r| r.p.map(|p| (r.n, p)))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|(n, p)| {
            let ws: Vec<&ResultRecord> = records
                .iter()
                .filter(|r| r.n == n && r.p == Some(p) && r.strategy == Strategy::WarmstartTree)
                .collect();
            let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
            let mean_warmstart_tree = mean(&ws.iter().map(|r| r.expectation).collect::<Vec<_>>());
            let mean_gw = mean(&ws.iter().filter_map(|r| r.gw_expected).collect::<Vec<_>>());
            Fig4Summary {
                n,
                p,
                mean_warmstart_tree,
                mean_gw,
                warmstart_exceeds_gw: mean_warmstart_tree > mean_gw,
            }
        })
        .collect()
}

/// Writes the output files of `out` into `cfg.output_dir` and returns their paths.
pub fn write_outputs(cfg: &ExperimentConfig, out: &RecipeOutput) -> Result<Vec<PathBuf>> {
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut files = vec![
        (dir.join("results.csv"), to_csv(RESULTS_HEADER, &out.records)?),
        (dir.join("errors.csv"), to_csv(ERRORS_HEADER, &out.errors)?),
        (dir.join("results.dat"), to_gnuplot(&out.records)),
        (dir.join("config.toml"), cfg.to_toml()),
    ];
    match cfg.recipe {
        Recipe::Fig1 => files.push((dir.join("tree_reference.csv"), to_csv(TREE_REFERENCE_HEADER, &out.tree_reference)?)),
        Recipe::Fig3P0Sweep => {
            files.push((dir.join("sweep.csv"), to_csv(SWEEP_HEADER, &out.sweep)?));
            files.push((dir.join("sweep.dat"), sweep_gnuplot(&out.sweep)));
        }
        Recipe::Fig4 => files.push((dir.join("fig4_summary.csv"), to_csv(FIG4_SUMMARY_HEADER, &out.fig4_summary)?)),
        Recipe::Fig2 | Recipe::Custom => {}
    }
    for (path, text) in &files {
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}

fn sweep_gnuplot(points: &[SweepPoint]) -> String {
    use std::fmt::Write as _;
    let mut depths: Vec<usize> = points.iter().map(|s| s.p).collect();
    depths.sort_unstable();
    depths.dedup();
    let mut out = String::new();
    for (k, p) in depths.iter().enumerate() {
        if k > 0 {
            out.push_str("\n\n");
        }
        writeln!(out, "# p={p}\n# rotation expectation").unwrap();
        for s in points.iter().filter(|s| s.p == *p) {
            writeln!(out, "{} {}", s.rotation, s.expectation).unwrap();
        }
    }
    out
}

/// [`execute`] followed by [`write_outputs`].
pub fn run_recipe(cfg: &ExperimentConfig) -> Result<(RecipeOutput, Vec<PathBuf>)> {
    let out = execute(cfg)?;
    let files = write_outputs(cfg, &out)?;
    Ok((out, files))
}
