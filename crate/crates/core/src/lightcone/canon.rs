//! Exact canonical labeling of vertex-colored graphs by individualization and
//! refinement, with automorphism pruning.
//!
//! The graph is first colored by a caller-supplied invariant per vertex. Color
//! refinement splits classes by neighbor-color multisets until stable; a
//! non-discrete stable coloring is resolved by individualizing each vertex of
//! the first non-singleton class in turn. The canonical certificate is the
//! smallest leaf certificate. Two leaves with equal certificates give an
//! automorphism, which prunes sibling branches in the same orbit and lets the
//! search jump back to where the two leaf paths diverged.

use crate::graph::Graph;

type Certificate = Vec<i64>;

struct Search<'a> {
    g: &'a Graph,
    invariants: &'a [i64],
    first: Option<(Vec<usize>, Certificate, Vec<usize>)>,
    best: Option<(Vec<usize>, Certificate, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

/// Returns a certificate such that two graphs with per-vertex invariants get
/// equal certificates iff they are isomorphic by an invariant-preserving map.
pub fn canonical_certificate(g: &Graph, invariants: &[i64]) -> Vec<i64> {
    assert_eq!(invariants.len(), g.vertex_count());
    let mut sorted: Vec<i64> = invariants.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let colors: Vec<usize> = invariants
        .iter()
        .map(|x| sorted.binary_search(x).unwrap())
        .collect();
    let mut search = Search {
        g,
        invariants,
        first: None,
        best: None,
        generators: Vec::new(),
    };
    let mut path = Vec::new();
    search.visit(colors, &mut path);
    search.best.expect("search reaches at least one leaf").1
}

/// Stable refinement. Colors are dense ranks `0..k`, ordered consistently
/// with the input colors.
fn refine(g: &Graph, mut colors: Vec<usize>) -> Vec<usize> {
    let n = g.vertex_count();
    let mut count = distinct(&colors);
    loop {
        let mut sigs: Vec<(usize, Vec<usize>, usize)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&u| colors[u]).collect();
                nb.sort_unstable();
                (colors[v], nb, v)
            })
            .collect();
        sigs.sort_unstable();
        let mut next = vec![0; n];
        let mut rank = 0;
        for i in 0..n {
            if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                rank += 1;
            }
            next[sigs[i].2] = rank;
        }
        colors = next;
        let new_count = rank + 1;
        if new_count == count {
            return colors;
        }
        count = new_count;
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn individualize(colors: &[usize], v: usize) -> Vec<usize> {
    // v precedes the rest of its class
    let mut keyed: Vec<(usize, usize)> = colors
        .iter()
        .enumerate()
        .map(|(u, &c)| (2 * c + usize::from(u != v), u))
        .collect();
    keyed.sort_unstable();
    let mut out = vec![0; colors.len()];
    let mut rank = 0;
    for i in 0..keyed.len() {
        if i > 0 && keyed[i].0 != keyed[i - 1].0 {
            rank += 1;
        }
        out[keyed[i].1] = rank;
    }
    out
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Search<'_> {
    fn certificate(&self, labels: &[usize]) -> Certificate {
        let n = self.g.vertex_count();
        let mut inv = vec![0i64; n];
        for v in 0..n {
            inv[labels[v]] = self.invariants[v];
        }
        let mut edges: Vec<i64> = self
            .g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (labels[a].min(labels[b]), labels[a].max(labels[b]));
                (x * n + y) as i64
            })
            .collect();
        edges.sort_unstable();
        let mut cert = Vec::with_capacity(1 + n + edges.len());
        cert.push(n as i64);
        cert.extend(inv);
        cert.extend(edges);
        cert
    }

    /// Returns `Some(level)` to unwind the search to `level`.
    fn visit(&mut self, colors: Vec<usize>, path: &mut Vec<usize>) -> Option<usize> {
        let colors = refine(self.g, colors);
        let n = colors.len();
        if distinct(&colors) == n {
            return self.leaf(colors, path);
        }
        let target = {
            let mut size = vec![0usize; n];
            for &c in &colors {
                size[c] += 1;
            }
            (0..n).find(|&c| size[c] > 1).unwrap()
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let level = path.len();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() {
                let mut parent: Vec<usize> = (0..n).collect();
                for gen in &self.generators {
                    if path.iter().all(|&u| gen[u] == u) {
                        for (x, &gx) in gen.iter().enumerate() {
                            let (a, b) = (find(&mut parent, x), find(&mut parent, gx));
                            if a != b {
                                parent[a] = b;
                            }
                        }
                    }
                }
                let rv = find(&mut parent, v);
                if explored.iter().any(|&u| find(&mut parent, u) == rv) {
                    continue;
                }
            }
            explored.push(v);
            path.push(v);
            let jump = self.visit(individualize(&colors, v), path);
            path.pop();
            match jump {
                Some(l) if l < level => return Some(l),
                _ => {}
            }
        }
        None
    }

    fn leaf(&mut self, labels: Vec<usize>, path: &[usize]) -> Option<usize> {
        let cert = self.certificate(&labels);
        if self.first.is_none() {
            self.first = Some((path.to_vec(), cert.clone(), labels.clone()));
            self.best = Some((path.to_vec(), cert, labels));
            return None;
        }
        let divergence =
            |other: &[usize]| other.iter().zip(path).take_while(|(a, b)| a == b).count();
        let matched = [&self.first, &self.best]
            .into_iter()
            .flatten()
            .find(|(_, c, _)| *c == cert)
            .map(|(p, _, l)| (divergence(p), l.clone()));
        if let Some((jump, from)) = matched {
            self.record_automorphism(from, &labels);
            return Some(jump);
        }
        if self.best.as_ref().is_some_and(|(_, c, _)| cert < *c) {
            self.best = Some((path.to_vec(), cert, labels));
        }
        None
    }

    fn record_automorphism(&mut self, from: Vec<usize>, to: &[usize]) {
        // vertex with label l in `from` maps to the vertex with label l in `to`
        let n = from.len();
        let mut inv_to = vec![0; n];
        for v in 0..n {
            inv_to[to[v]] = v;
        }
        let gen: Vec<usize> = (0..n).map(|v| inv_to[from[v]]).collect();
        if gen.iter().enumerate().any(|(i, &x)| i != x) {
            self.generators.push(gen);
        }
    }
}
