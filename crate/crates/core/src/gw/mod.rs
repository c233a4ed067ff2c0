//! Goemans–Williamson relaxation, rounding, and the warm start built from it.
//!
//! The relaxation `max ½ Σ (1 − v_i·v_j)` over unit vectors is solved in
//! low-rank form: each vertex owns a unit vector in `ℝ^k`, and Riemannian
//! gradient descent on the product of spheres minimizes `Σ v_i·v_j`.

pub mod warmstart;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub use warmstart::{
    build_warmstart_qaoa_inputs, optimize_alpha, p0_expectation, project_to_plane, AlphaOptimum, WarmStart,
};

use crate::error::{Error, Result};
use crate::graph::{cut_value, Cut, Graph};

/// Default convergence threshold on the Riemannian gradient norm.
pub const DEFAULT_TOL: f64 = 1e-7;

pub const DEFAULT_MAX_ITERS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub rank: usize,
    /// One unit vector of length `rank` per vertex.
    pub vectors: Vec<Vec<f64>>,
    /// `½ Σ (1 − v_i·v_j)`.
    pub relaxed_value: f64,
    pub converged: bool,
    pub gradient_norm: f64,
    pub iterations: usize,
}

impl SdpSolution {
    pub fn dot(&self, i: usize, j: usize) -> f64 {
        dot(&self.vectors[i], &self.vectors[j])
    }
}

/// `⌈√(2n)⌉ + 1`.
pub fn default_rank(n: usize) -> usize {
    ((2.0 * n as f64).sqrt().ceil() as usize) + 1
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    for x in v {
        *x /= n;
    }
}

fn gaussian_unit(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..k).map(|_| StandardNormal.sample(rng)).collect();
        if dot(&v, &v) > 1e-24 {
            normalize(&mut v);
            return v;
        }
    }
}

struct Relaxation<'a> {
    g: &'a Graph,
    k: usize,
}

impl Relaxation<'_> {
    /// `Σ_{⟨i,j⟩} v_i·v_j` over flat row-major vectors.
    fn objective(&self, v: &[f64]) -> f64 {
        let k = self.k;
        self.g
            .edges()
            .iter()
            .map(|&(a, b)| dot(&v[a * k..(a + 1) * k], &v[b * k..(b + 1) * k]))
            .sum()
    }

    /// Riemannian gradient and its squared norm.
    fn gradient(&self, v: &[f64]) -> (Vec<f64>, f64) {
        let k = self.k;
        let mut grad = vec![0.0; v.len()];
        for i in 0..self.g.vertex_count() {
            let row = &mut grad[i * k..(i + 1) * k];
            for &j in self.g.neighbors(i) {
                for (r, x) in row.iter_mut().zip(&v[j * k..(j + 1) * k]) {
                    *r += x;
                }
            }
            let vi = &v[i * k..(i + 1) * k];
            let radial = dot(row, vi);
            for (r, x) in row.iter_mut().zip(vi) {
                *r -= radial * x;
            }
        }
        let norm2 = dot(&grad, &grad);
        (grad, norm2)
    }

    fn retract(&self, v: &[f64], grad: &[f64], t: f64) -> Vec<f64> {
        let mut out: Vec<f64> = v.iter().zip(grad).map(|(x, g)| x - t * g).collect();
        for row in out.chunks_mut(self.k) {
            normalize(row);
        }
        out
    }
}

/// Maximizes the relaxed cut by Riemannian gradient descent with
/// Barzilai–Borwein steps and Armijo backtracking. `rank_hint` defaults to
/// [`default_rank`]. Non-convergence is reported through `converged`.
pub fn solve_sdp(g: &Graph, rank_hint: Option<usize>, tol: f64, max_iters: usize, seed: u64) -> Result<SdpSolution> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("relaxation needs at least 2 vertices, got {n}")));
    }
    let k = rank_hint.unwrap_or_else(|| default_rank(n)).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).flat_map(|_| gaussian_unit(&mut rng, k)).collect();
    let problem = Relaxation { g, k };

    let mut f = problem.objective(&v);
    let (mut grad, mut norm2) = problem.gradient(&v);
    let max_degree = (0..n).map(|i| g.degree(i)).max().unwrap_or(1).max(1);
    let mut step = 1.0 / max_degree as f64;
    let mut iterations = 0;
    while norm2.sqrt() > tol && iterations < max_iters {
        iterations += 1;
        let mut t = step;
        let mut accepted = None;
        for _ in 0..60 {
            let cand = problem.retract(&v, &grad, t);
            let fc = problem.objective(&cand);
            // slack absorbs rounding in f once the decrease is below ulp(f)
            if fc <= f - 1e-4 * t * norm2 + 4.0 * f64::EPSILON * f.abs().max(1.0) {
                accepted = Some((cand, fc));
                break;
            }
            t *= 0.5;
        }
        let Some((next, fnext)) = accepted else {
            break;
        };
        let (gnext, n2next) = problem.gradient(&next);
        let s: Vec<f64> = next.iter().zip(&v).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gnext.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y).abs();
        step = if sy > 1e-300 { (dot(&s, &s) / sy).clamp(1e-6, 1e3) } else { t * 2.0 };
        v = next;
        f = fnext;
        grad = gnext;
        norm2 = n2next;
    }

    let vectors: Vec<Vec<f64>> = v.chunks(k).map(<[f64]>::to_vec).collect();
    let relaxed_value = g
        .edges()
        .iter()
        .map(|&(a, b)| 0.5 * (1.0 - dot(&vectors[a], &vectors[b])))
        .sum();
    let gradient_norm = norm2.sqrt();
    Ok(SdpSolution {
        rank: k,
        vectors,
        relaxed_value,
        converged: gradient_norm <= tol,
        gradient_norm,
        iterations,
    })
}

/// `Σ arccos(v_i·v_j)/π`, the expected hyperplane-rounding cut.
pub fn expected_gw_cut(sol: &SdpSolution, g: &Graph) -> f64 {
    g.edges()
        .iter()
        .map(|&(a, b)| sol.dot(a, b).clamp(-1.0, 1.0).acos() / std::f64::consts::PI)
        .sum()
}

/// Signs `v_i·r` for a standard-normal `r` drawn from `seed`; zero goes to +1.
pub fn round_hyperplane(sol: &SdpSolution, g: &Graph, seed: u64) -> Result<Cut> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r: Vec<f64> = (0..sol.rank).map(|_| StandardNormal.sample(&mut rng)).collect();
    let assignment = sol
        .vectors
        .iter()
        .map(|v| if dot(v, &r) >= 0.0 { 1 } else { -1 })
        .collect();
    Cut::from_assignment(g, assignment)
}

/// Best cut over `lines` rounding lines inside the projection plane drawn
/// from `plane_seed`. Ties go to the first line angle.
pub fn round_in_plane_best(sol: &SdpSolution, g: &Graph, plane_seed: u64, lines: usize) -> Result<Cut> {
    if lines == 0 {
        return Err(Error::InvalidArgument("need at least one rounding line".into()));
    }
    let ws = project_to_plane(sol, plane_seed)?;
    let mut best: Option<Cut> = None;
    for l in 0..lines {
        let phi = std::f64::consts::PI * l as f64 / lines as f64;
        let assignment: Vec<i8> = ws
            .thetas
            .iter()
            .map(|&t| if (t - phi).cos() >= 0.0 { 1 } else { -1 })
            .collect();
        let value = cut_value(g, &assignment)?;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(Cut { assignment, value });
        }
    }
    Ok(best.expect("lines > 0"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GwReport {
    pub expected_cut: f64,
    pub relaxed_value: f64,
    pub sampled_cut: Option<Cut>,
}

/// Summary of a solution, with one explicit rounding when `rounding_seed` is set.
pub fn gw_report(sol: &SdpSolution, g: &Graph, rounding_seed: Option<u64>) -> Result<GwReport> {
    Ok(GwReport {
        expected_cut: expected_gw_cut(sol, g),
        relaxed_value: sol.relaxed_value,
        sampled_cut: rounding_seed.map(|s| round_hyperplane(sol, g, s)).transpose()?,
    })
}
