use crate::error::{Error, Result};

/// Depth-`p` QAOA angles `γ_1..γ_p`, `β_1..β_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaParams {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.len() != betas.len() {
            return Err(Error::DimensionMismatch {
                expected: gammas.len(),
                got: betas.len(),
            });
        }
        if gammas.iter().chain(&betas).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("angles must be finite".into()));
        }
        Ok(Self { gammas, betas })
    }

    pub fn empty() -> Self {
        Self {
            gammas: Vec::new(),
            betas: Vec::new(),
        }
    }

    /// Splits `[γ_1..γ_p, β_1..β_p]`.
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if flat.len() % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "flat parameter vector has odd length {}",
                flat.len()
            )));
        }
        let (g, b) = flat.split_at(flat.len() / 2);
        Self::new(g.to_vec(), b.to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.gammas.iter().chain(&self.betas).copied().collect()
    }

    pub fn depth(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Extends to depth `p` with zero angles in the new layers.
    pub fn padded(&self, p: usize) -> Self {
        let mut out = self.clone();
        out.gammas.resize(p.max(self.depth()), 0.0);
        out.betas.resize(p.max(self.depth()), 0.0);
        out
    }

    /// Linear interpolation of a depth-`p` schedule onto depth `p + 1`.
    pub fn interpolated(&self) -> Self {
        fn interp(x: &[f64]) -> Vec<f64> {
            let p = x.len();
            (0..=p)
                .map(|i| {
                    let left = if i == 0 { 0.0 } else { x[i - 1] };
                    let right = if i == p { 0.0 } else { x[i] };
                    (i as f64 * left + (p - i) as f64 * right) / p.max(1) as f64
                })
                .collect()
        }
        Self {
            gammas: interp(&self.gammas),
            betas: interp(&self.betas),
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            gammas: self.gammas.iter().map(|x| -x).collect(),
            betas: self.betas.iter().map(|x| -x).collect(),
        }
    }
}
