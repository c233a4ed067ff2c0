//! Tensor network for `⟨φ|U† Z_a Z_b U|φ⟩` and its contraction by variable
//! elimination.
//!
//! Every wire segment of the ket and of the bra is one binary variable. The
//! cost gates are diagonal, so they become factors on existing wire variables
//! instead of introducing new ones; only mixer rotations create fresh wire
//! segments. Gates outside the backward light cone of the observable cancel
//! against their adjoints and are dropped, in which case the ket and bra wires
//! of that qubit share one variable from the last kept gate onwards.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::graph::Graph;
use crate::params::QaoaParams;
use crate::simulator::MixerSpec;

/// A dense factor over binary variables. Bit `k` of an index into `data` is
/// the value of `vars[k]`; `vars` is strictly ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub vars: Vec<usize>,
    pub data: Vec<Complex64>,
}

impl Factor {
    fn new(vars: Vec<usize>, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), 1 << vars.len());
        if vars.windows(2).all(|w| w[0] < w[1]) {
            return Self { vars, data };
        }
        // reorder to ascending variable ids
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by_key(|&k| vars[k]);
        let sorted: Vec<usize> = order.iter().map(|&k| vars[k]).collect();
        assert!(sorted.windows(2).all(|w| w[0] < w[1]), "repeated variable");
        let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
        for (idx, &v) in data.iter().enumerate() {
            let mut j = 0;
            for (new_pos, &old_pos) in order.iter().enumerate() {
                j |= ((idx >> old_pos) & 1) << new_pos;
            }
            out[j] = v;
        }
        Self {
            vars: sorted,
            data: out,
        }
    }

    fn scalar(&self) -> Option<Complex64> {
        self.vars.is_empty().then(|| self.data[0])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorNetwork {
    pub var_count: usize,
    pub factors: Vec<Factor>,
}

/// How much of the circuit to include.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pruning {
    /// Only gates in the backward light cone of the observable.
    LightCone,
    /// Every gate of the circuit; relies on cancellation during contraction.
    None,
}

/// Builds the network for `⟨Z_a Z_b⟩` after the QAOA circuit on `g`.
pub fn build_network(
    g: &Graph,
    mixer: &MixerSpec,
    params: &QaoaParams,
    observable: (usize, usize),
    pruning: Pruning,
) -> TensorNetwork {
    let n = g.vertex_count();
    let p = params.depth();
    let (a, b) = observable;

    // mixer_layers[q] = number of mixer layers kept on qubit q (L_q);
    // None when the qubit is outside the light cone entirely
    let mut in_cone = vec![false; n];
    let mut mixer_layers: Vec<Option<usize>> = vec![None; n];
    let mut kept_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); p + 1];
    match pruning {
        Pruning::LightCone => {
            in_cone[a] = true;
            in_cone[b] = true;
            for k in (1..=p).rev() {
                for q in 0..n {
                    if in_cone[q] && mixer_layers[q].is_none() {
                        mixer_layers[q] = Some(k);
                    }
                }
                let layer: Vec<_> = g
                    .edges()
                    .iter()
                    .copied()
                    .filter(|&(u, v)| in_cone[u] || in_cone[v])
                    .collect();
                for &(u, v) in &layer {
                    in_cone[u] = true;
                    in_cone[v] = true;
                }
                kept_edges[k] = layer;
            }
            for q in 0..n {
                if in_cone[q] && mixer_layers[q].is_none() {
                    mixer_layers[q] = Some(0);
                }
            }
        }
        Pruning::None => {
            in_cone.fill(true);
            mixer_layers.fill(Some(p));
            for layer in kept_edges.iter_mut().skip(1) {
                *layer = g.edges().to_vec();
            }
        }
    }

    let mut var_count = 0;
    let mut fresh = || {
        var_count += 1;
        var_count - 1
    };
    // ket[q][t] and bra[q][t], t = 0..=L_q, bra[q][L_q] == ket[q][L_q]
    let mut ket: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut bra: Vec<Vec<usize>> = vec![Vec::new(); n];
    for q in 0..n {
        if let Some(l) = mixer_layers[q] {
            ket[q] = (0..=l).map(|_| fresh()).collect();
            bra[q] = (0..l).map(|_| fresh()).collect();
            bra[q].push(ket[q][l]);
        }
    }

    let c = |re: f64, im: f64| Complex64::new(re, im);
    let mut factors = Vec::new();
    for q in (0..n).filter(|&q| in_cone[q]) {
        let [s0, s1] = mixer.qubit_state(q);
        if ket[q][0] == bra[q][0] {
            factors.push(Factor::new(vec![ket[q][0]], vec![c(s0 * s0, 0.0), c(s1 * s1, 0.0)]));
        } else {
            factors.push(Factor::new(vec![ket[q][0]], vec![c(s0, 0.0), c(s1, 0.0)]));
            factors.push(Factor::new(vec![bra[q][0]], vec![c(s0, 0.0), c(s1, 0.0)]));
        }
    }
    for k in 1..=p {
        let gamma = params.gammas()[k - 1];
        let beta = params.betas()[k - 1];
        let phase = Complex64::from_polar(1.0, -gamma);
        for &(u, v) in &kept_edges[k] {
            let (ku, kv) = (ket[u][k - 1], ket[v][k - 1]);
            let (bu, bv) = (bra[u][k - 1], bra[v][k - 1]);
            let one = c(1.0, 0.0);
            if ku == bu && kv == bv {
                continue;
            }
            factors.push(Factor::new(vec![ku, kv], vec![one, phase, phase, one]));
            factors.push(Factor::new(
                vec![bu, bv],
                vec![one, phase.conj(), phase.conj(), one],
            ));
        }
        for q in 0..n {
            if mixer_layers[q].is_some_and(|l| l >= k) {
                let m = mixer.rotation(q, beta);
                // bit 0 = input wire, bit 1 = output wire
                let ket_data = vec![m[0][0], m[0][1], m[1][0], m[1][1]];
                let bra_data = ket_data.iter().map(|z| z.conj()).collect();
                factors.push(Factor::new(vec![ket[q][k - 1], ket[q][k]], ket_data));
                factors.push(Factor::new(vec![bra[q][k - 1], bra[q][k]], bra_data));
            }
        }
    }
    let z = vec![c(1.0, 0.0), c(-1.0, 0.0)];
    for q in [a, b] {
        let l = mixer_layers[q].expect("observable qubits are in the light cone");
        factors.push(Factor::new(vec![ket[q][l]], z.clone()));
    }
    TensorNetwork { var_count, factors }
}

/// Per-factor lookup tables mapping an assignment of the union scope to an
/// index into that factor, one table per byte of the assignment.
struct IndexMap {
    tables: Vec<[u32; 256]>,
}

impl IndexMap {
    fn new(factor_vars: &[usize], union: &[usize]) -> Self {
        let bytes = union.len().div_ceil(8).max(1);
        let mut tables = vec![[0u32; 256]; bytes];
        let positions: Vec<(usize, usize)> = factor_vars
            .iter()
            .enumerate()
            .map(|(k, v)| (k, union.binary_search(v).expect("factor var in union")))
            .collect();
        for (bi, table) in tables.iter_mut().enumerate() {
            for (byte, slot) in table.iter_mut().enumerate() {
                let mut idx = 0u32;
                for &(k, pos) in &positions {
                    if pos / 8 == bi && (byte >> (pos % 8)) & 1 == 1 {
                        idx |= 1 << k;
                    }
                }
                *slot = idx;
            }
        }
        Self { tables }
    }

    #[inline]
    fn index(&self, assignment: usize) -> usize {
        let mut idx = 0u32;
        for (bi, table) in self.tables.iter().enumerate() {
            idx |= table[(assignment >> (8 * bi)) & 0xff];
        }
        idx as usize
    }
}

/// Multiplies `factors` and sums out `var`.
fn eliminate(factors: &[&Factor], var: usize) -> Factor {
    let mut union: Vec<usize> = factors.iter().flat_map(|f| f.vars.iter().copied()).collect();
    union.sort_unstable();
    union.dedup();
    let pos = union.binary_search(&var).expect("eliminated var in union");
    let maps: Vec<IndexMap> = factors.iter().map(|f| IndexMap::new(&f.vars, &union)).collect();
    let low_mask = (1usize << pos) - 1;
    let entry = |j: usize| -> Complex64 {
        let base = ((j & !low_mask) << 1) | (j & low_mask);
        let mut total = Complex64::new(0.0, 0.0);
        for x in 0..2 {
            let idx = base | (x << pos);
            let mut prod = Complex64::new(1.0, 0.0);
            for (f, m) in factors.iter().zip(&maps) {
                prod *= f.data[m.index(idx)];
            }
            total += prod;
        }
        total
    };
    let out_len = 1usize << (union.len() - 1);
    let data: Vec<Complex64> = if out_len >= 1 << 12 {
        (0..out_len).into_par_iter().map(entry).collect()
    } else {
        (0..out_len).map(entry).collect()
    };
    union.remove(pos);
    Factor { vars: union, data }
}

/// Contracts the network to a scalar by eliminating variables in `order`.
/// Variables missing from `order` are eliminated afterwards in id order.
pub fn contract(network: &TensorNetwork, order: &[usize]) -> Complex64 {
    let mut factors: Vec<Option<Factor>> = network.factors.iter().cloned().map(Some).collect();
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); network.var_count];
    for (i, f) in network.factors.iter().enumerate() {
        for &v in &f.vars {
            touching[v].push(i);
        }
    }
    let mut done = vec![false; network.var_count];
    let rest: Vec<usize> = (0..network.var_count).collect();
    for &var in order.iter().chain(&rest) {
        if done[var] {
            continue;
        }
        done[var] = true;
        let ids: Vec<usize> = touching[var]
            .iter()
            .copied()
            .filter(|&i| factors[i].is_some())
            .collect();
        if ids.is_empty() {
            continue;
        }
        let refs: Vec<&Factor> = ids.iter().map(|&i| factors[i].as_ref().unwrap()).collect();
        let merged = eliminate(&refs, var);
        for &i in &ids {
            factors[i] = None;
        }
        let new_id = factors.len();
        for &v in &merged.vars {
            touching[v].push(new_id);
        }
        factors.push(Some(merged));
    }
    factors
        .into_iter()
        .flatten()
        .map(|f| f.scalar().expect("all variables eliminated"))
        .product()
}
