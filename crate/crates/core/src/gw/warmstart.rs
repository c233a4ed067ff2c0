//! Bloch-circle warm start: project the relaxation to a random plane, read
//! off one angle per vertex, and rotate all angles by a common `α`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{dot, SdpSolution};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::simulator::{wrap_angle, MixerSpec};

/// Projections shorter than this get a seeded uniform angle.
pub const DEGENERATE_PROJECTION: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct WarmStart {
    /// Angles in `[0, 2π)` before rotation.
    pub thetas: Vec<f64>,
    pub alpha: f64,
    pub plane_seed: u64,
    /// Solution the angles were projected from; absent when read from a file.
    pub source: Option<Arc<SdpSolution>>,
}

impl WarmStart {
    pub fn new(thetas: Vec<f64>, alpha: f64, plane_seed: u64) -> Self {
        Self {
            thetas: thetas.into_iter().map(wrap_angle).collect(),
            alpha,
            plane_seed,
            source: None,
        }
    }

    /// `θ_i + α` wrapped to `[0, 2π)`.
    pub fn effective_thetas(&self) -> Vec<f64> {
        self.thetas.iter().map(|t| wrap_angle(t + self.alpha)).collect()
    }

    /// Sets `α` to the closed-form p = 0 optimum.
    pub fn with_optimized_alpha(mut self, g: &Graph) -> Self {
        self.alpha = optimize_alpha(&self.thetas, g).alpha;
        self
    }

    /// Text form: `n`, `plane_seed`, `alpha` lines, then one `θ_i` per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "n {}", self.thetas.len()).unwrap();
        writeln!(s, "plane_seed {}", self.plane_seed).unwrap();
        writeln!(s, "alpha {}", self.alpha).unwrap();
        for t in &self.thetas {
            writeln!(s, "{t}").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut header = |key: &str| -> Result<(usize, String)> {
            let (line, l) = lines.next().ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("missing `{key}` line"),
            })?;
            let value = l
                .strip_prefix(key)
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("expected `{key} <value>`, got `{l}`"),
                })?;
            Ok((line, value.to_string()))
        };
        let bad = |line: usize, what: &str, v: &str| Error::Parse {
            line,
            message: format!("bad {what} `{v}`"),
        };
        let (ln, v) = header("n")?;
        let n: usize = v.parse().map_err(|_| bad(ln, "vertex count", &v))?;
        let (ln, v) = header("plane_seed")?;
        let plane_seed: u64 = v.parse().map_err(|_| bad(ln, "plane seed", &v))?;
        let (ln, v) = header("alpha")?;
        let alpha: f64 = v
            .parse()
            .ok()
            .filter(|a: &f64| a.is_finite())
            .ok_or_else(|| bad(ln, "alpha", &v))?;
        let thetas: Vec<f64> = lines
            .map(|(ln, l)| {
                l.parse::<f64>()
                    .ok()
                    .filter(|t| t.is_finite())
                    .ok_or_else(|| bad(ln, "angle", l))
            })
            .collect::<Result<_>>()?;
        if thetas.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: thetas.len(),
            });
        }
        Ok(Self::new(thetas, alpha, plane_seed))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_text())?)
    }
}

/// Projects each vector onto a random plane and returns the angle of its
/// projection from the plane's first basis vector (the z axis) toward the
/// second (the x axis). `α` is 0.
pub fn project_to_plane(sol: &SdpSolution, seed: u64) -> Result<WarmStart> {
    let k = sol.rank;
    if k < 2 {
        return Err(Error::InvalidArgument(format!("projection needs rank at least 2, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (e1, e2) = loop {
        let a: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
        let b: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
        let na = dot(&a, &a).sqrt();
        if na < 1e-12 {
            continue;
        }
        let e1: Vec<f64> = a.iter().map(|x| x / na).collect();
        let proj = dot(&b, &e1);
        let mut e2: Vec<f64> = b.iter().zip(&e1).map(|(x, e)| x - proj * e).collect();
        let nb = dot(&e2, &e2).sqrt();
        if nb < 1e-12 {
            continue;
        }
        e2.iter_mut().for_each(|x| *x /= nb);
        break (e1, e2);
    };
    let thetas = sol
        .vectors
        .iter()
        .map(|v| {
            let (z, x) = (dot(v, &e1), dot(v, &e2));
            if z.hypot(x) < DEGENERATE_PROJECTION {
                rng.random_range(0.0..2.0 * PI)
            } else {
                wrap_angle(x.atan2(z))
            }
        })
        .collect();
    Ok(WarmStart {
        thetas,
        alpha: 0.0,
        plane_seed: seed,
        source: Some(Arc::new(sol.clone())),
    })
}

/// `Σ ½(1 − cos(θ_i + α) cos(θ_j + α))`, the expected cut of the product state.
pub fn p0_expectation(thetas: &[f64], alpha: f64, g: &Graph) -> f64 {
    g.edges()
        .iter()
        .map(|&(a, b)| 0.5 * (1.0 - (thetas[a] + alpha).cos() * (thetas[b] + alpha).cos()))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaOptimum {
    /// Maximizer in `[0, π)`; `α + π` is equally good.
    pub alpha: f64,
    pub value: f64,
    /// The landscape is flat in `α`; `alpha` is 0.
    pub degenerate: bool,
}

/// Closed-form maximizer of [`p0_expectation`] over `α`. Writing
/// `P = Σ cos(θ_i + θ_j)`, `Q = Σ sin(θ_i + θ_j)` and `S = Σ cos(θ_i − θ_j)`,
/// the expectation is `|E|/2 − S/4 − (P cos 2α − Q sin 2α)/4`, maximized
/// where `2α + atan2(Q, P) = π`.
pub fn optimize_alpha(thetas: &[f64], g: &Graph) -> AlphaOptimum {
    let (mut p, mut q, mut s) = (0.0, 0.0, 0.0);
    for &(a, b) in g.edges() {
        let (sum, diff) = (thetas[a] + thetas[b], thetas[a] - thetas[b]);
        p += sum.cos();
        q += sum.sin();
        s += diff.cos();
    }
    let r = p.hypot(q);
    let m = g.edge_count() as f64;
    if r <= 1e-12 * m.max(1.0) {
        return AlphaOptimum {
            alpha: 0.0,
            value: p0_expectation(thetas, 0.0, g),
            degenerate: true,
        };
    }
    let alpha = (0.5 * (PI - q.atan2(p))).rem_euclid(PI);
    AlphaOptimum {
        alpha,
        value: 0.5 * m - 0.25 * s + 0.25 * r,
        degenerate: false,
    }
}

/// Rotated mixer whose axis for qubit `i` is `θ_i + α`; the matching initial
/// state is its +1 eigenstate.
pub fn build_warmstart_qaoa_inputs(ws: &WarmStart) -> MixerSpec {
    MixerSpec::Rotated(ws.effective_thetas())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw::{solve_sdp, DEFAULT_MAX_ITERS, DEFAULT_TOL};
    use crate::params::QaoaParams;
    use crate::simulator::{expected_cut, initial_state, run_qaoa};
    use crate::graph::generate_random_regular;

    /// Best of `m` grid points on `[0, 2π)`, refined by golden section inside
    /// the neighboring cells (a bare grid is only accurate to `O(R·Δ²)`).
    fn grid_max(thetas: &[f64], g: &Graph, m: usize) -> (f64, f64) {
        let f = |a: f64| p0_expectation(thetas, a, g);
        let h = 2.0 * PI / m as f64;
        let a0 = (0..m)
            .map(|i| h * i as f64)
            .fold(0.0, |b, a| if f(a) > f(b) { a } else { b });
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
        let a = 0.5 * (lo + hi);
        (a, f(a).max(f(a0)))
    }

    #[test]
    fn p0_examples() {
        let e = Graph::new(2, [(0, 1)]).unwrap();
        assert!((p0_expectation(&[0.0, PI], 0.0, &e) - 1.0).abs() < 1e-15);
        let g = generate_random_regular(10, 3, 1).unwrap();
        let half = vec![PI / 2.0; 10];
        assert!((p0_expectation(&half, 0.0, &g) - 7.5).abs() < 1e-12);
        let th: Vec<f64> = (0..10).map(|i| 0.7 * i as f64).collect();
        let state = initial_state(&g, &MixerSpec::rotated(th.clone())).unwrap();
        assert!((expected_cut(&state, &g).unwrap() - p0_expectation(&th, 0.0, &g)).abs() < 1e-10);
    }

    #[test]
    fn alpha_examples() {
        let e = Graph::new(2, [(0, 1)]).unwrap();
        let a = optimize_alpha(&[0.0, PI], &e);
        assert!((a.value - 1.0).abs() < 1e-12 && a.alpha.abs() < 1e-12);
        let g = generate_random_regular(12, 3, 3).unwrap();
        let same = vec![0.4; 12];
        let a = optimize_alpha(&same, &g);
        assert!((wrap_angle(0.4 + a.alpha) - PI / 2.0).abs() < 1e-12);
        assert!((a.value - grid_max(&same, &g, 10_000).1).abs() < 1e-8);
        // a flat landscape: two edges whose sums cancel
        let two = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let a = optimize_alpha(&[0.0, 0.0, PI / 2.0, PI / 2.0], &two);
        assert!(a.degenerate && a.alpha == 0.0);
    }

    #[test]
    fn alpha_matches_grid() {
        let g = generate_random_regular(14, 3, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let th: Vec<f64> = (0..14).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
            let a = optimize_alpha(&th, &g);
            assert!((p0_expectation(&th, a.alpha, &g) - a.value).abs() < 1e-12);
            let (_, grid) = grid_max(&th, &g, 10_000);
            assert!(a.value >= grid - 1e-12 && a.value - grid < 1e-8);
        }
    }

    #[test]
    fn projection_examples() {
        let g = Graph::complete_bipartite(3, 3);
        let sol = solve_sdp(&g, None, DEFAULT_TOL, DEFAULT_MAX_ITERS, 0).unwrap();
        for seed in 0..5 {
            let ws = project_to_plane(&sol, seed).unwrap();
            assert_eq!(ws, project_to_plane(&sol, seed).unwrap());
            let d = (ws.thetas[0] - ws.thetas[3]).rem_euclid(2.0 * PI);
            assert!((d - PI).abs() < 1e-5, "{d}");
            for i in 1..3 {
                assert!(((ws.thetas[i] - ws.thetas[0] + PI).rem_euclid(2.0 * PI) - PI).abs() < 1e-5);
            }
            let a = optimize_alpha(&ws.thetas, &g);
            assert!(a.value >= 9.0 - 1e-6);
        }
    }

    #[test]
    fn planar_antipodal_pair() {
        let sol = SdpSolution {
            rank: 2,
            vectors: vec![vec![1.0, 0.0], vec![-1.0, 0.0]],
            relaxed_value: 1.0,
            converged: true,
            gradient_norm: 0.0,
            iterations: 0,
        };
        let ws = project_to_plane(&sol, 11).unwrap();
        let d = (ws.thetas[0] - ws.thetas[1]).rem_euclid(2.0 * PI);
        assert!((d - PI).abs() < 1e-12);
    }

    #[test]
    fn bipartite_separation_law() {
        // two clusters at θ and θ + π
        let g = Graph::complete_bipartite(3, 3);
        for &t in &[0.0, 0.3, 1.1, PI / 2.0] {
            let th: Vec<f64> = (0..6).map(|i| if i < 3 { t } else { t + PI }).collect();
            let want = 9.0 * (0.5 + 0.5 * t.cos().powi(2));
            assert!((p0_expectation(&th, 0.0, &g) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn mixer_inputs() {
        let ws = WarmStart::new(vec![0.1, 2.0, 5.0], 0.0, 0);
        assert_eq!(build_warmstart_qaoa_inputs(&ws), MixerSpec::Rotated(vec![0.1, 2.0, 5.0]));
        let x = WarmStart::new(vec![PI / 4.0; 4], PI / 4.0, 0);
        let g = Graph::cycle(4);
        let q = QaoaParams::new(vec![0.7], vec![0.3]).unwrap();
        let a = run_qaoa(&g, &build_warmstart_qaoa_inputs(&x), &q).unwrap();
        let b = run_qaoa(&g, &MixerSpec::Standard, &q).unwrap();
        assert!((a.inner(&b).norm() - 1.0).abs() < 1e-12);
        // each qubit is the +1 eigenstate of its mixer term
        for t in [0.0, 1.0, 2.5, 4.0] {
            let [c, s] = [(t / 2.0f64).cos(), (t / 2.0f64).sin()];
            let b_exp = t.sin() * 2.0 * c * s + t.cos() * (c * c - s * s);
            assert!((b_exp - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn file_round_trip() {
        let ws = WarmStart::new(vec![0.1, 6.0, 3.3], 0.25, 42);
        let back = WarmStart::from_text(&ws.to_text()).unwrap();
        assert_eq!(back, ws);
        assert!(WarmStart::from_text("n 2\nplane_seed 1\nalpha 0\n0.5\n").is_err());
        let e = WarmStart::from_text("n 1\nplane_seed 1\nalpha 0\nzz\n").unwrap_err();
        assert!(e.to_string().contains("line 4"));
    }

    #[test]
    fn three_quarters_is_the_scalar_minimum() {
        // ½(1 − ½cos t) / (t/π) on (0, π]
        let h = |t: f64| 0.5 * (1.0 - 0.5 * t.cos()) / (t / PI);
        let (tmin, vmin) = (1..=100_000)
            .map(|i| PI * i as f64 / 100_000.0)
            .map(|t| (t, h(t)))
            .fold((0.0, f64::INFINITY), |b, x| if x.1 < b.1 { x } else { b });
        assert_eq!(tmin, PI);
        assert!((vmin - 0.75).abs() < 1e-15);
    }

    #[test]
    fn rotation_never_hurts() {
        let g = generate_random_regular(16, 3, 12).unwrap();
        let sol = solve_sdp(&g, None, DEFAULT_TOL, DEFAULT_MAX_ITERS, 5).unwrap();
        let ws = project_to_plane(&sol, 8).unwrap();
        let rotated = ws.clone().with_optimized_alpha(&g);
        assert!(p0_expectation(&rotated.thetas, rotated.alpha, &g) >= p0_expectation(&ws.thetas, 0.0, &g) - 1e-12);
    }
}
