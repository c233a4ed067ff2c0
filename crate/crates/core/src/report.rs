/// Expected cut of a QAOA state, edge by edge.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationReport {
    pub total_expectation: f64,
    /// `(edge, ½(1 − ⟨Z_iZ_j⟩))` in graph edge order.
    pub per_edge: Vec<((usize, usize), f64)>,
    pub cut_fraction: f64,
    pub approx_ratio: Option<f64>,
    pub best_cut_probability: Option<f64>,
}

impl ExpectationReport {
    /// Sums per-edge terms in edge order.
    pub fn from_per_edge(per_edge: Vec<((usize, usize), f64)>) -> Self {
        let total_expectation: f64 = per_edge.iter().map(|(_, x)| x).sum();
        let cut_fraction = if per_edge.is_empty() {
            0.0
        } else {
            total_expectation / per_edge.len() as f64
        };
        Self {
            total_expectation,
            per_edge,
            cut_fraction,
            approx_ratio: None,
            best_cut_probability: None,
        }
    }

    pub fn with_maxcut(mut self, maxcut: usize) -> Self {
        self.approx_ratio = (maxcut > 0).then(|| self.total_expectation / maxcut as f64);
        self
    }
}
