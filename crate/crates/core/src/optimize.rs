//! Box-constrained Nelder–Mead maximization with deterministic multi-start.

use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        assert!(lower.iter().zip(&upper).all(|(l, u)| l <= u));
        Self { lower, upper }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (k, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lower[k], self.upper[k]);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Maximum number of objective evaluations.
    pub max_evals: usize,
    /// Initial simplex edge as a fraction of each box side.
    pub initial_step: f64,
    /// Stop when the simplex values span less than this.
    pub ftol: f64,
    /// Stop when every vertex is within this of the best vertex.
    pub xtol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 2000,
            initial_step: 0.1,
            ftol: 1e-12,
            xtol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimumPoint {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Maximizes `f` from `start`. Points are clamped into `bounds`. The result
/// is the best point evaluated, so it is never worse than `start`. With
/// `max_evals == 0` nothing is evaluated and `value` is `-inf`.
pub fn maximize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    bounds: &Bounds,
    options: &NelderMeadOptions,
) -> OptimumPoint {
    let n = start.len();
    assert_eq!(n, bounds.dim());
    let mut x0 = start.to_vec();
    bounds.clamp(&mut x0);
    let mut best = OptimumPoint {
        x: x0.clone(),
        value: f64::NEG_INFINITY,
        evaluations: 0,
    };
    if options.max_evals == 0 {
        return best;
    }
    let mut eval = |x: &[f64], best: &mut OptimumPoint| -> Option<f64> {
        if best.evaluations >= options.max_evals {
            return None;
        }
        let v = f(x);
        best.evaluations += 1;
        // NaN never replaces a finite best
        if v > best.value || (best.value.is_nan() && !v.is_nan()) {
            best.value = v;
            best.x = x.to_vec();
        }
        Some(if v.is_nan() { f64::NEG_INFINITY } else { v })
    };

    let Some(v0) = eval(&x0, &mut best) else {
        return best;
    };
    if n == 0 {
        return best;
    }
    // simplex of (point, value), kept sorted best first
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.clone(), v0)];
    for k in 0..n {
        let mut x = x0.clone();
        let side = bounds.upper[k] - bounds.lower[k];
        let step = if side > 0.0 { options.initial_step * side } else { 0.0 };
        // step inward if the start sits on the upper face
        x[k] = if x[k] + step <= bounds.upper[k] { x[k] + step } else { x[k] - step };
        let Some(v) = eval(&x, &mut best) else {
            return best;
        };
        simplex.push((x, v));
    }

    let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        let mut x: Vec<f64> = a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect();
        bounds.clamp(&mut x);
        x
    };
    loop {
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let (hi, lo) = (simplex[0].1, simplex[n].1);
        let spread = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (hi - lo).abs() <= options.ftol || spread <= options.xtol {
            return best;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let worst = simplex[n].0.clone();
        let reflected = combine(&centroid, &worst, -1.0);
        let Some(fr) = eval(&reflected, &mut best) else {
            return best;
        };
        if fr > simplex[0].1 {
            let expanded = combine(&centroid, &worst, -2.0);
            let Some(fe) = eval(&expanded, &mut best) else {
                return best;
            };
            simplex[n] = if fe > fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr > simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, outside) = if fr > simplex[n].1 {
            (combine(&centroid, &reflected, 0.5), true)
        } else {
            (combine(&centroid, &worst, 0.5), false)
        };
        let Some(fc) = eval(&contracted, &mut best) else {
            return best;
        };
        let accept = if outside { fc >= fr } else { fc > simplex[n].1 };
        if accept {
            simplex[n] = (contracted, fc);
            continue;
        }
        let top = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = combine(&top, &vertex.0, 0.5);
            let Some(v) = eval(&x, &mut best) else {
                return best;
            };
            *vertex = (x, v);
        }
    }
}

/// Runs [`maximize`] from every start in parallel and keeps the highest
/// value, breaking exact ties toward the lowest start index. Returns the
/// winning point and its start index.
pub fn multi_start<F>(
    f: &F,
    starts: &[Vec<f64>],
    bounds: &Bounds,
    options: &NelderMeadOptions,
) -> Option<(OptimumPoint, usize)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let results: Vec<OptimumPoint> = starts
        .par_iter()
        .map(|s| maximize(f, s, bounds, options))
        .collect();
    let mut best: Option<(OptimumPoint, usize)> = None;
    for (i, r) in results.into_iter().enumerate() {
        if best.as_ref().is_none_or(|(b, _)| r.value > b.value) {
            best = Some((r, i));
        }
    }
    best
}
