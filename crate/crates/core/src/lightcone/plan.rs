//! Greedy elimination-order planning.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::network::TensorNetwork;

/// Number of greedy passes; pass 0 is min-degree, pass 1 min-fill, the rest
/// break ties at random.
pub const DEFAULT_RESTARTS: usize = 8;

/// An elimination order with its estimated cost.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionPlan {
    pub order: Vec<usize>,
    /// `Σ 2^|scope|` over the products formed during elimination.
    pub cost: f64,
    /// Largest number of indices on any intermediate tensor.
    pub max_rank: usize,
}

/// Variable interaction graph: two variables are adjacent when some factor
/// contains both.
pub fn interaction_graph(network: &TensorNetwork) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); network.var_count];
    for f in &network.factors {
        for &u in &f.vars {
            for &v in &f.vars {
                if u != v {
                    adj[u].insert(v);
                }
            }
        }
    }
    adj
}

/// Cost of eliminating variables in `order`, as (Σ 2^(deg+1), max deg).
pub fn order_cost(adj: &[BTreeSet<usize>], order: &[usize]) -> (f64, usize) {
    let mut adj = adj.to_vec();
    let mut cost = 0.0;
    let mut max_rank = 0;
    for &v in order {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        cost += 2f64.powi(nb.len() as i32 + 1);
        max_rank = max_rank.max(nb.len());
        eliminate_vertex(&mut adj, v, &nb);
    }
    (cost, max_rank)
}

fn eliminate_vertex(adj: &mut [BTreeSet<usize>], v: usize, nb: &[usize]) {
    for &a in nb {
        adj[a].remove(&v);
        for &b in nb {
            if a != b {
                adj[a].insert(b);
            }
        }
    }
    adj[v].clear();
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

#[derive(Clone, Copy)]
enum Heuristic {
    MinDegree,
    MinFill,
}

fn greedy(
    adj0: &[BTreeSet<usize>],
    heuristic: Heuristic,
    rng: Option<&mut ChaCha8Rng>,
) -> ContractionPlan {
    let mut adj = adj0.to_vec();
    let n = adj.len();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    let mut cost = 0.0;
    let mut max_rank = 0;
    let mut rng = rng;
    while !alive.is_empty() {
        let score = |v: usize| -> (usize, usize) {
            let (d, f) = (adj[v].len(), fill_in(&adj, v));
            match heuristic {
                Heuristic::MinDegree => (d, f),
                Heuristic::MinFill => (f, d),
            }
        };
        let best = alive.iter().map(|&v| score(v)).min().unwrap();
        let candidates: Vec<usize> = alive.iter().copied().filter(|&v| score(v) == best).collect();
        let v = match rng.as_deref_mut() {
            Some(r) => *candidates.choose(r).unwrap(),
            None => candidates[0],
        };
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        cost += 2f64.powi(nb.len() as i32 + 1);
        max_rank = max_rank.max(nb.len());
        eliminate_vertex(&mut adj, v, &nb);
        alive.remove(&v);
        order.push(v);
    }
    ContractionPlan {
        order,
        cost,
        max_rank,
    }
}

/// Best of several greedy passes, by cost then pass index.
pub fn plan_contraction(network: &TensorNetwork) -> ContractionPlan {
    plan_with_restarts(network, DEFAULT_RESTARTS)
}

pub fn plan_with_restarts(network: &TensorNetwork, restarts: usize) -> ContractionPlan {
    let adj = interaction_graph(network);
    let mut best = greedy(&adj, Heuristic::MinDegree, None);
    for pass in 1..restarts.max(1) {
        let plan = if pass == 1 {
            greedy(&adj, Heuristic::MinFill, None)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(pass as u64);
            let h = if pass % 2 == 0 {
                Heuristic::MinDegree
            } else {
                Heuristic::MinFill
            };
            greedy(&adj, h, Some(&mut rng))
        };
        if plan.cost < best.cost {
            best = plan;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_tree_neighborhood, Graph};
    use crate::lightcone::network::{build_network, Pruning};
    use crate::params::QaoaParams;
    use crate::simulator::MixerSpec;

    /// Exact minimum over all elimination orders of the largest intermediate
    /// rank, by dynamic programming over eliminated subsets.
    fn exhaustive_min_rank(adj: &[BTreeSet<usize>]) -> usize {
        let n = adj.len();
        assert!(n <= 16);
        let masks: Vec<u32> = adj
            .iter()
            .map(|s| s.iter().fold(0u32, |m, &v| m | (1 << v)))
            .collect();
        // degree of v after eliminating set s: vertices outside s ∪ {v}
        // reachable from v through paths inside s
        let degree_after = |s: u32, v: usize| -> usize {
            let mut seen = 1u32 << v;
            let mut stack = vec![v];
            let mut reach = 0u32;
            while let Some(u) = stack.pop() {
                let mut nb = masks[u] & !seen;
                while nb != 0 {
                    let w = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    seen |= 1 << w;
                    if s & (1 << w) != 0 {
                        stack.push(w);
                    } else {
                        reach |= 1 << w;
                    }
                }
            }
            reach.count_ones() as usize
        };
        let full = (1u32 << n) - 1;
        let mut best = vec![usize::MAX; 1 << n];
        best[0] = 0;
        for s in 0..=full {
            if best[s as usize] == usize::MAX {
                continue;
            }
            for v in 0..n {
                if s & (1 << v) == 0 {
                    let t = s | (1 << v);
                    let w = best[s as usize].max(degree_after(s, v));
                    if w < best[t as usize] {
                        best[t as usize] = w;
                    }
                }
            }
        }
        best[full as usize]
    }

    #[test]
    fn tree_p1_plan_is_narrow() {
        let t = build_tree_neighborhood(3, 1).unwrap();
        let params = QaoaParams::new(vec![0.6], vec![0.4]).unwrap();
        let net = build_network(&t.subgraph, &MixerSpec::Standard, &params, (0, 1), Pruning::LightCone);
        let plan = plan_contraction(&net);
        let adj = interaction_graph(&net);
        let optimum = exhaustive_min_rank(&adj);
        assert!(plan.max_rank <= 8, "max rank {}", plan.max_rank);
        assert!(plan.max_rank >= optimum);
        assert_eq!(order_cost(&adj, &plan.order), (plan.cost, plan.max_rank));
    }

    #[test]
    fn chain_cost_grows_linearly() {
        let params = QaoaParams::new(vec![0.6, 0.3], vec![0.4, 0.2]).unwrap();
        let cost = |len: usize| {
            let g = Graph::path(len);
            let net = build_network(&g, &MixerSpec::Standard, &params, (len / 2 - 1, len / 2), Pruning::None);
            plan_contraction(&net).cost
        };
        let (c4, c8, c16) = (cost(4), cost(8), cost(16));
        let r1 = c8 / c4;
        let r2 = c16 / c8;
        assert!(r2 > 1.5 && r2 < 2.5, "c8 = {c8}, c16 = {c16}");
        assert!(r1 > 1.2 && r1 < 3.0, "c4 = {c4}, c8 = {c8}");
    }

    #[test]
    fn depth_zero_plan_is_trivial() {
        let g = Graph::cycle(6);
        let net = build_network(&g, &MixerSpec::Standard, &QaoaParams::empty(), (0, 1), Pruning::LightCone);
        assert_eq!(net.factors.len(), 4);
        let plan = plan_contraction(&net);
        assert_eq!(plan.order.len(), 2);
        assert_eq!(plan.max_rank, 0);
    }

    #[test]
    fn planning_is_deterministic() {
        let g = crate::graph::generate_random_regular(14, 3, 3).unwrap();
        let params = QaoaParams::new(vec![0.6, 0.3], vec![0.4, 0.2]).unwrap();
        let net = build_network(&g, &MixerSpec::Standard, &params, g.edges()[0], Pruning::LightCone);
        assert_eq!(plan_contraction(&net), plan_contraction(&net));
    }
}
