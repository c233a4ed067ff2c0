//! The twelve acceptance criteria, each with its tolerance and time limit.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qaoa_maxcut::graph::{
    build_tree_neighborhood, exact_maxcut, generate_random_bipartite_regular, generate_random_regular,
    generate_unique_maxcut_regular, RegularFamily,
};
use qaoa_maxcut::gw::{
    build_warmstart_qaoa_inputs, expected_gw_cut, optimize_alpha, p0_expectation, project_to_plane,
    round_hyperplane, solve_sdp, WarmStart, DEFAULT_MAX_ITERS, DEFAULT_TOL,
};
use qaoa_maxcut::lightcone::{
    edge_expectation, graph_expectation, plan_contraction, Backend, LightConeOptions, NeighborhoodTask,
    DEFAULT_BUDGET,
};
use qaoa_maxcut::qaoa::tree::lookup;
use qaoa_maxcut::qaoa::{
    ascend_from, bundled_tree_table, evaluate_on_graph, evaluate_tree_edge, optimize_tree_params, tree_params_d3,
    Engine,
};
use qaoa_maxcut::simulator::{expected_cut, run_qaoa, zz_expectation};
use qaoa_maxcut::{Graph, MixerSpec, QaoaParams};

type Check = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sdp(g: &Graph, seed: u64) -> qaoa_maxcut::gw::SdpSolution {
    solve_sdp(g, None, DEFAULT_TOL, DEFAULT_MAX_ITERS, seed).expect("relaxation")
}

fn random_params(rng: &mut ChaCha8Rng, p: usize) -> QaoaParams {
    QaoaParams::new(
        (0..p).map(|_| rng.random_range(0.0..PI)).collect(),
        (0..p).map(|_| rng.random_range(-PI / 4.0..PI / 4.0)).collect(),
    )
    .unwrap()
}

fn random_thetas(rng: &mut ChaCha8Rng, n: usize) -> MixerSpec {
    MixerSpec::rotated((0..n).map(|_| rng.random_range(0.0..2.0 * PI)))
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn fixed_angle_conjecture() -> Check {
    let f_tree: Vec<f64> = (1..=2)
        .map(|p| evaluate_tree_edge(3, p, &tree_params_d3(p).unwrap()).unwrap())
        .collect();
    let mut worst = f64::INFINITY;
    for family in [RegularFamily::Random, RegularFamily::Bipartite] {
        for i in 0..10 {
            let g = generate_unique_maxcut_regular(16, 3, family, 1000 * i + 17, 2000).unwrap();
            let maxcut = exact_maxcut(&g).unwrap().best.value;
            for p in 1..=2 {
                let r = evaluate_on_graph(&g, &MixerSpec::Standard, &tree_params_d3(p).unwrap(), &Engine::Dense, Some(maxcut))
                    .unwrap();
                let ratio = r.approx_ratio.unwrap();
                worst = worst.min(ratio - f_tree[p - 1]);
                ensure(ratio >= f_tree[p - 1] - 1e-9, || {
                    format!("{family:?} #{i} p={p}: ratio {ratio} < f_tree {}", f_tree[p - 1])
                })?;
            }
        }
    }
    Ok(format!("20 graphs x p=1,2; smallest margin over f_tree {worst:.1e}"))
}

/// Central-edge value on the radius-1 tree by direct simulation.
fn dense_tree_p1(g: f64, b: f64) -> f64 {
    let tree = build_tree_neighborhood(3, 1).unwrap();
    let q = QaoaParams::new(vec![g], vec![b]).unwrap();
    let state = run_qaoa(&tree.subgraph, &MixerSpec::Standard, &q).unwrap();
    0.5 * (1.0 - zz_expectation(&state, 0, 1).unwrap())
}

fn tree_parameter_optimum() -> Check {
    // 200 x 200 grid on [0, π]², then three zoomed 21 x 21 grids
    let m = 200;
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..m {
        for j in 0..m {
            let (g, b) = (PI * i as f64 / (m - 1) as f64, PI * j as f64 / (m - 1) as f64);
            let v = dense_tree_p1(g, b);
            if v > best.2 {
                best = (g, b, v);
            }
        }
    }
    let mut h = PI / (m - 1) as f64;
    for _ in 0..6 {
        let (g0, b0) = (best.0, best.1);
        for i in -10..=10 {
            for j in -10..=10 {
                let (g, b) = (g0 + h * i as f64 / 10.0, b0 + h * j as f64 / 10.0);
                let v = dense_tree_p1(g, b);
                if v > best.2 {
                    best = (g, b, v);
                }
            }
        }
        h /= 5.0;
    }
    let oracle = best.2;
    let f1 = optimize_tree_params(3, 1, 4, 0).unwrap();
    ensure((f1.f_value - oracle).abs() < 1e-4, || format!("f1 {} vs oracle {oracle}", f1.f_value))?;
    let f2 = optimize_tree_params(3, 2, 4, 0).unwrap();
    ensure(f2.f_value >= f1.f_value, || format!("f2 {} < f1 {}", f2.f_value, f1.f_value))?;
    let p11 = lookup(&bundled_tree_table(), 3, 11).ok_or("no p=11 entry")?.f_value;
    ensure(p11 == 0.8828, || format!("table p=11 lists {p11}"))?;
    Ok(format!(
        "f1 {:.8} oracle {oracle:.8}; f2 {:.6}; table p=11 {p11}",
        f1.f_value, f2.f_value
    ))
}

fn single_edge_law() -> Check {
    let g = Graph::new(2, [(0, 1)]).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let (gamma, beta) = (PI * i as f64 / 4.0 + 0.1, PI / 4.0 * j as f64 / 4.0 - 0.05);
            let q = QaoaParams::new(vec![gamma], vec![beta]).unwrap();
            let got = evaluate_on_graph(&g, &MixerSpec::Standard, &q, &Engine::Dense, None).unwrap().total_expectation;
            let want = 0.5 * (1.0 + (4.0 * beta).sin() * gamma.sin());
            worst = worst.max((got - want).abs());
            ensure(got <= 1.0 + 1e-12, || format!("value {got} above 1"))?;
        }
    }
    ensure(worst < 1e-12, || format!("max deviation {worst:e}"))?;
    let q = QaoaParams::new(vec![PI / 2.0], vec![PI / 8.0]).unwrap();
    let top = evaluate_on_graph(&g, &MixerSpec::Standard, &q, &Engine::Dense, None).unwrap().total_expectation;
    ensure((top - 1.0).abs() < 1e-12, || format!("value at (π/2, π/8) is {top}"))?;
    Ok(format!("max deviation {worst:.1e}; peak {top}"))
}

fn light_cone_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let n = [8, 10, 12, 14, 16][k % 5];
        let degree = if k % 4 == 3 { 4 } else { 3 };
        let g = generate_random_regular(n, degree, 500 + k as u64).unwrap();
        let p = 1 + k % 2;
        let q = random_params(&mut rng, p);
        let mixer = if k % 2 == 0 { MixerSpec::Standard } else { random_thetas(&mut rng, n) };
        let dense = expected_cut(&run_qaoa(&g, &mixer, &q).unwrap(), &g).unwrap();
        let lc = graph_expectation(&g, &mixer, &q, &LightConeOptions::default()).unwrap().total_expectation;
        worst = worst.max((lc - dense).abs());
        ensure((lc - dense).abs() < 1e-9, || format!("graph {k} (n={n}, p={p}): {lc} vs {dense}"))?;
    }
    Ok(format!("20 graphs, max |difference| {worst:.1e}"))
}

fn tensor_backend_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut checked, mut worst) = (0, 0.0f64);
    for k in 0..10 {
        let n = 12 + 2 * (k % 3);
        let g = generate_random_regular(n, 3, 900 + k as u64).unwrap();
        let p = 1 + k % 2;
        let q = random_params(&mut rng, p);
        let mixer = if k % 2 == 0 { MixerSpec::Standard } else { random_thetas(&mut rng, n) };
        for &e in g.edges() {
            let task = NeighborhoodTask::new(&g, &mixer, &q, e).unwrap();
            if task.neighborhood.vertex_count() > 14 {
                continue;
            }
            let d = edge_expectation(&task, Backend::Dense, DEFAULT_BUDGET).unwrap().zz;
            let t = edge_expectation(&task, Backend::TensorNetwork, DEFAULT_BUDGET).unwrap().zz;
            worst = worst.max((d - t).abs());
            checked += 1;
            ensure((d - t).abs() < 1e-6, || format!("instance {k} edge {e:?}: {d} vs {t}"))?;
        }
    }
    ensure(checked > 0, || "no neighborhood of at most 14 qubits".into())?;
    let tree = build_tree_neighborhood(3, 3).unwrap();
    let vertices = tree.vertex_count();
    let q = tree_params_d3(3).unwrap();
    let task = NeighborhoodTask::from_neighborhood(tree, &MixerSpec::Standard, &q);
    let cost = plan_contraction(&task.network()).cost;
    ensure(cost <= DEFAULT_BUDGET, || format!("p=3 tree plan cost {cost:e}"))?;
    let zz = edge_expectation(&task, Backend::TensorNetwork, DEFAULT_BUDGET).map_err(|e| e.to_string())?.zz;
    Ok(format!(
        "{checked} neighborhoods, max |difference| {worst:.1e}; {vertices}-vertex p=3 tree cost {cost:.0} gives f {:.6}",
        0.5 * (1.0 - zz)
    ))
}

fn gw_guarantee() -> Check {
    let mut min_ratio = f64::INFINITY;
    for k in 0..20 {
        let g = generate_random_regular(16, 3, 1300 + k).unwrap();
        let sol = sdp(&g, k);
        let c_gw = expected_gw_cut(&sol, &g);
        let maxcut = exact_maxcut(&g).unwrap().best.value as f64;
        ensure(c_gw >= 0.878 * sol.relaxed_value - 1e-6, || format!("graph {k}: C_GW {c_gw} vs C_REL {}", sol.relaxed_value))?;
        ensure(sol.relaxed_value >= maxcut - 1e-6, || format!("graph {k}: C_REL {} < MaxCut {maxcut}", sol.relaxed_value))?;
        min_ratio = min_ratio.min(c_gw / sol.relaxed_value);
    }
    Ok(format!("20 graphs, smallest C_GW/C_REL {min_ratio:.4}"))
}

fn rounding_consistency() -> Check {
    let mut worst_z: f64 = 0.0;
    for k in 0..5 {
        let g = generate_random_regular(16, 3, 1700 + k).unwrap();
        let sol = sdp(&g, k);
        let c_gw = expected_gw_cut(&sol, &g);
        let samples: Vec<f64> = (0..10_000)
            .map(|s| round_hyperplane(&sol, &g, 1_000_000 * k + s).unwrap().value as f64)
            .collect();
        let (mean, se) = mean_and_se(&samples);
        let z = (mean - c_gw).abs() / se;
        worst_z = worst_z.max(z);
        ensure(z <= 3.0, || format!("instance {k}: mean {mean} vs C_GW {c_gw}, {z:.2} standard errors"))?;
    }
    Ok(format!("5 instances, largest deviation {worst_z:.2} standard errors"))
}

fn bipartite_perfection() -> Check {
    let graphs = [Graph::complete_bipartite(3, 3), generate_random_bipartite_regular(16, 3, 11).unwrap()];
    let mut notes = Vec::new();
    for (k, g) in graphs.iter().enumerate() {
        let m = g.edge_count() as f64;
        let sol = sdp(g, 3);
        ensure((sol.relaxed_value - m).abs() < 1e-5, || format!("graph {k}: C_REL {} vs |E| {m}", sol.relaxed_value))?;
        let ws = project_to_plane(&sol, 7).unwrap();
        let a = optimize_alpha(&ws.thetas, g);
        ensure(a.value >= m - 1e-3, || format!("graph {k}: p=0 warm start {} vs |E| {m}", a.value))?;
        notes.push(format!("|E|={m} C_REL={:.7} p0={:.7}", sol.relaxed_value, a.value));
    }
    Ok(notes.join("; "))
}

fn p0_warmstart_bound() -> Check {
    let mut notes = Vec::new();
    for k in 0..5 {
        let g = generate_random_regular(16, 3, 2100 + k).unwrap();
        let sol = sdp(&g, k);
        let c_gw = expected_gw_cut(&sol, &g);
        let mut rng = ChaCha8Rng::seed_from_u64(k);
        let (mut random, mut tuned) = (Vec::new(), Vec::new());
        for plane in 0..500 {
            let ws = project_to_plane(&sol, 10_000 * k + plane).unwrap();
            random.push(p0_expectation(&ws.thetas, rng.random_range(0.0..2.0 * PI), &g));
            tuned.push(optimize_alpha(&ws.thetas, &g).value);
        }
        let (mr, se) = mean_and_se(&random);
        let (mt, _) = mean_and_se(&tuned);
        ensure(mr >= 0.75 * c_gw - 3.0 * se, || format!("graph {k}: random-axis mean {mr} vs 0.75 C_GW {}", 0.75 * c_gw))?;
        ensure(mt >= mr, || format!("graph {k}: optimized mean {mt} < random mean {mr}"))?;
        notes.push(format!("{:.3}/{:.3}/{:.3}", mr / c_gw, mt / c_gw, 0.75));
    }
    Ok(format!("mean/C_GW random, optimized, bound: {}", notes.join(" ")))
}

fn alpha_closed_form() -> Check {
    let mut worst: f64 = 0.0;
    for k in 0..20u64 {
        let g = generate_random_regular(16, 3, 2500 + k / 4).unwrap();
        let sol = sdp(&g, k / 4);
        let ws = project_to_plane(&sol, k).unwrap();
        let a = optimize_alpha(&ws.thetas, &g);
        let f = |x: f64| p0_expectation(&ws.thetas, x, &g);
        let m = 10_000;
        let h = 2.0 * PI / m as f64;
        let (mut a0, mut grid) = (0.0, f64::NEG_INFINITY);
        for i in 0..m {
            let v = f(h * i as f64);
            if v > grid {
                (a0, grid) = (h * i as f64, v);
            }
        }
        // golden section inside the winning cell pair
        let (mut lo, mut hi) = (a0 - h, a0 + h);
        let r = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..80 {
            let (x1, x2) = (hi - r * (hi - lo), lo + r * (hi - lo));
            if f(x1) < f(x2) {
                lo = x1;
            } else {
                hi = x2;
            }
        }
        let refined = f(0.5 * (lo + hi)).max(grid);
        worst = worst.max((a.value - refined).abs());
        ensure((a.value - refined).abs() < 1e-8, || format!("warm start {k}: {} vs grid {refined}", a.value))?;
        ensure(a.value >= grid - 1e-12, || format!("warm start {k}: grid point {grid} beats {}", a.value))?;
        ensure((f(a.alpha) - a.value).abs() < 1e-10, || format!("warm start {k}: value at alpha disagrees"))?;
    }
    Ok(format!("20 warm starts, max |difference| {worst:.1e}"))
}

fn axis_sweep_shape() -> Check {
    let g = generate_random_regular(24, 3, 31).unwrap();
    let sol = sdp(&g, 0);
    let ws = project_to_plane(&sol, 5).unwrap().with_optimized_alpha(&g);
    let points = 32;
    let rotations: Vec<f64> = (0..points).map(|k| -PI + 2.0 * PI * k as f64 / points as f64).collect();
    let opts = Engine::LightCone(LightConeOptions::default());
    let mut variation = Vec::new();
    for p in 0..=2 {
        let q = tree_params_d3(p).unwrap();
        let curve: Vec<f64> = rotations
            .iter()
            .map(|&d| {
                let rotated = WarmStart::new(ws.thetas.clone(), ws.alpha + d, ws.plane_seed);
                evaluate_on_graph(&g, &build_warmstart_qaoa_inputs(&rotated), &q, &opts, None)
                    .unwrap()
                    .total_expectation
            })
            .collect();
        let max = curve.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = curve.iter().copied().fold(f64::INFINITY, f64::min);
        if p == 0 {
            let at_zero = curve[points / 2];
            ensure(at_zero >= max - 1e-9, || format!("p=0 curve peaks at {max}, closed-form α gives {at_zero}"))?;
        }
        variation.push(max - min);
    }
    ensure(variation[1] < variation[0] && variation[2] < variation[0], || {
        format!("variation p=0,1,2: {variation:?}")
    })?;
    Ok(format!(
        "n=24, variation p=0 {:.3}, p=1 {:.3}, p=2 {:.3}",
        variation[0], variation[1], variation[2]
    ))
}

fn ascent_retention() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut total_gain = 0.0;
    for trial in 0..50u64 {
        let n = [8, 10, 12][trial as usize % 3];
        let g = generate_random_regular(n, 3, 3000 + trial).unwrap();
        let p = 1 + trial as usize % 2;
        let start = random_params(&mut rng, p);
        let mixer = if trial % 2 == 0 { MixerSpec::Standard } else { random_thetas(&mut rng, n) };
        let budget = rng.random_range(0..40);
        let before = evaluate_on_graph(&g, &mixer, &start, &Engine::Dense, None).unwrap().total_expectation;
        let (_, after) = ascend_from(&g, &mixer, &start, budget, &Engine::Dense, None).unwrap();
        ensure(after.total_expectation >= before, || {
            format!("trial {trial}: {} < start {before}", after.total_expectation)
        })?;
        total_gain += after.total_expectation - before;
    }
    Ok(format!("50 trials, mean gain {:.4}", total_gain / 50.0))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("fixed-angle conjecture at n=16", 120, fixed_angle_conjecture),
        ("tree-parameter optimum", 60, tree_parameter_optimum),
        ("single-edge analytic law", 1, single_edge_law),
        ("light-cone equivalence", 120, light_cone_equivalence),
        ("tensor-network backend equivalence", 300, tensor_backend_equivalence),
        ("GW guarantee", 120, gw_guarantee),
        ("rounding consistency", 60, rounding_consistency),
        ("bipartite perfection", 60, bipartite_perfection),
        ("p=0 warm-start bound", 180, p0_warmstart_bound),
        ("alpha closed form", 10, alpha_closed_form),
        ("axis-sweep shape", 300, axis_sweep_shape),
        ("ascent retention", 120, ascent_retention),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => {
                Err(format!("{detail}; over the {limit}s limit"))
            }
            r => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(result.is_err());
        println!(
            "criterion {:2} {tag} {name}: {detail} [{:.2}s / {limit}s]",
            k + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
