//! Undirected simple graphs, random regular generators and the exhaustive
//! MaxCut oracle.
//!
//! Vertex ids are always `0..n`. Edges are stored as `(i, j)` with `i < j`,
//! sorted lexicographically, so two graphs with the same edge set compare
//! equal regardless of how they were built.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Rejection rounds the configuration-model samplers try before giving up.
pub const MAX_PAIRING_ROUNDS: usize = 100_000;

/// Largest graph accepted by [`exact_maxcut`].
pub const MAX_EXACT_VERTICES: usize = 32;

/// An undirected, unweighted simple graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range ids.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            edges,
            adjacency,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    /// `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)));
        Self::new(a + b, edges).expect("complete bipartite graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Returns `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adjacency.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Index of `(a, b)` in [`Graph::edges`].
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        Self::new(self.n, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))
    }

    /// Serializes to the text format: `n m` followed by one `i j` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (a, b) in &self.edges {
            writeln!(out, "{a} {b}").unwrap();
        }
        out
    }

    /// Parses the text format. Anything after a `#` on a line is ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_pair = |line: usize, l: &str| -> Result<(usize, usize)> {
            let mut it = l.split_whitespace().map(|t| {
                t.parse::<usize>().map_err(|e| Error::Parse {
                    line,
                    message: format!("{t:?}: {e}"),
                })
            });
            let a = it.next().ok_or_else(|| Error::Parse {
                line,
                message: "expected two integers".into(),
            })??;
            let b = it.next().ok_or_else(|| Error::Parse {
                line,
                message: "expected two integers".into(),
            })??;
            if it.next().is_some() {
                return Err(Error::Parse {
                    line,
                    message: "trailing tokens".into(),
                });
            }
            Ok((a, b))
        };
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `n m` header".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            edges.push(parse_pair(line, l)?);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                message: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Self::new(n, edges)
    }
}

/// A bipartition given as `±1` labels, together with its cut value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub assignment: Vec<i8>,
    pub value: usize,
}

impl Cut {
    pub fn from_assignment(g: &Graph, assignment: Vec<i8>) -> Result<Self> {
        let value = cut_value(g, &assignment)?;
        Ok(Self { assignment, value })
    }

    /// Basis-state index with bit `i` set when vertex `i` is labelled `-1`.
    pub fn to_bits(&self) -> u64 {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &z)| z < 0)
            .fold(0u64, |acc, (i, _)| acc | (1 << i))
    }
}

/// Number of edges whose endpoints carry different labels.
pub fn cut_value(g: &Graph, assignment: &[i8]) -> Result<usize> {
    if assignment.len() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            got: assignment.len(),
        });
    }
    if let Some(pos) = assignment.iter().position(|&z| z != 1 && z != -1) {
        return Err(Error::InvalidArgument(format!(
            "assignment entry {pos} is {}, expected ±1",
            assignment[pos]
        )));
    }
    Ok(g
        .edges()
        .iter()
        .filter(|&&(a, b)| assignment[a] != assignment[b])
        .count())
}

/// Cut value of a basis string where bit `i` is vertex `i`.
pub fn cut_value_bits(g: &Graph, bits: u64) -> usize {
    g.edges()
        .iter()
        .filter(|&&(a, b)| ((bits >> a) ^ (bits >> b)) & 1 == 1)
        .count()
}

fn check_regular_args(n: usize, degree: usize) -> Result<()> {
    if degree == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    if (n * degree) % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "n * degree = {} is odd",
            n * degree
        )));
    }
    if n <= degree {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must exceed degree = {degree}"
        )));
    }
    Ok(())
}

/// Samples a simple `degree`-regular graph with the configuration model,
/// restarting the whole pairing whenever it produces a loop or a multi-edge.
pub fn generate_random_regular(n: usize, degree: usize, seed: u64) -> Result<Graph> {
    check_regular_args(n, degree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
    'round: for _ in 0..MAX_PAIRING_ROUNDS {
        stubs.shuffle(&mut rng);
        let mut set = BTreeSet::new();
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !set.insert((a, b)) {
                continue 'round;
            }
        }
        return Graph::new(n, set);
    }
    Err(Error::GenerationFailed {
        attempts: MAX_PAIRING_ROUNDS,
        reason: format!("no simple pairing for n = {n}, degree = {degree}"),
    })
}

/// Samples a simple bipartite `degree`-regular graph with sides `0..n/2` and
/// `n/2..n`, by matching left stubs to a random permutation of right stubs.
pub fn generate_random_bipartite_regular(n: usize, degree: usize, seed: u64) -> Result<Graph> {
    if degree == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("n = {n} must be even")));
    }
    let half = n / 2;
    if half < degree {
        return Err(Error::InvalidArgument(format!(
            "side size {half} is smaller than degree {degree}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut right: Vec<usize> = (half..n)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    'round: for _ in 0..MAX_PAIRING_ROUNDS {
        right.shuffle(&mut rng);
        let mut set = BTreeSet::new();
        for (k, &b) in right.iter().enumerate() {
            if !set.insert((k / degree, b)) {
                continue 'round;
            }
        }
        return Graph::new(n, set);
    }
    Err(Error::GenerationFailed {
        attempts: MAX_PAIRING_ROUNDS,
        reason: format!("no simple bipartite pairing for n = {n}, degree = {degree}"),
    })
}

/// Which regular ensemble to sample from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularFamily {
    Random,
    Bipartite,
}

impl RegularFamily {
    pub fn sample(self, n: usize, degree: usize, seed: u64) -> Result<Graph> {
        match self {
            Self::Random => generate_random_regular(n, degree, seed),
            Self::Bipartite => generate_random_bipartite_regular(n, degree, seed),
        }
    }
}

/// Result of the exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCutSolution {
    /// A maximizing cut with vertex 0 labelled `+1` (smallest basis index among maxima).
    pub best: Cut,
    /// Number of maximizing cuts counted up to complementation.
    pub count_of_maxima: u64,
}

/// Exhaustive MaxCut over the `2^(n-1)` assignments with vertex 0 fixed.
///
/// Blocks of the assignment space are enumerated in parallel in Gray-code
/// order; the reduction is over blocks in index order, so the result does not
/// depend on the thread count.
pub fn exact_maxcut(g: &Graph) -> Result<MaxCutSolution> {
    let n = g.vertex_count();
    if n > MAX_EXACT_VERTICES {
        return Err(Error::TooLarge {
            what: "exact MaxCut vertex count",
            size: n,
            limit: MAX_EXACT_VERTICES,
        });
    }
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1 << u)))
        .collect();
    let free = n - 1;
    let top = free.saturating_sub(12).min(12);
    let low = free - top;

    #[derive(Clone, Copy)]
    struct Best {
        value: usize,
        count: u64,
        state: u64,
    }

    let block = |b: u64| -> Best {
        let mut state = b << (low + 1);
        let mut cut = cut_value_bits(g, state);
        let mut best = Best {
            value: cut,
            count: 1,
            state,
        };
        for i in 1u64..(1u64 << low) {
            let v = i.trailing_zeros() as usize + 1;
            let differing = if (state >> v) & 1 == 0 {
                adj[v] & state
            } else {
                adj[v] & !state
            }
            .count_ones() as usize;
            cut = cut + g.degree(v) - 2 * differing;
            state ^= 1 << v;
            if cut > best.value {
                best = Best {
                    value: cut,
                    count: 1,
                    state,
                };
            } else if cut == best.value {
                best.count += 1;
                best.state = best.state.min(state);
            }
        }
        best
    };

    let bests: Vec<Best> = (0..(1u64 << top)).into_par_iter().map(block).collect();
    let mut acc = bests[0];
    for b in &bests[1..] {
        if b.value > acc.value {
            acc = *b;
        } else if b.value == acc.value {
            acc.count += b.count;
            acc.state = acc.state.min(b.state);
        }
    }
    let assignment = (0..n)
        .map(|v| if (acc.state >> v) & 1 == 1 { -1 } else { 1 })
        .collect();
    Ok(MaxCutSolution {
        best: Cut {
            assignment,
            value: acc.value,
        },
        count_of_maxima: acc.count,
    })
}

/// Samples graphs from `family` until one has a single best cut (up to
/// complementation).
pub fn generate_unique_maxcut_regular(
    n: usize,
    degree: usize,
    family: RegularFamily,
    seed: u64,
    max_attempts: usize,
) -> Result<Graph> {
    if max_attempts == 0 {
        return Err(Error::GenerationFailed {
            attempts: 0,
            reason: "max_attempts is zero".into(),
        });
    }
    if n > MAX_EXACT_VERTICES {
        return Err(Error::TooLarge {
            what: "unique-MaxCut vertex count",
            size: n,
            limit: MAX_EXACT_VERTICES,
        });
    }
    let mut last_count = 0;
    for attempt in 0..max_attempts {
        let g = family.sample(n, degree, seed.wrapping_add(attempt as u64))?;
        let sol = exact_maxcut(&g)?;
        if sol.count_of_maxima == 1 {
            return Ok(g);
        }
        last_count = sol.count_of_maxima;
    }
    Err(Error::GenerationFailed {
        attempts: max_attempts,
        reason: format!("no graph with a unique best cut (last had {last_count} maxima)"),
    })
}

/// Length of the shortest cycle, or `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        dist.fill(usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[u] >= b) {
                break;
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// The radius-`p` ball around an edge, as an induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeNeighborhood {
    /// Center edge in original vertex ids.
    pub center_edge: (usize, usize),
    /// Induced subgraph; the center endpoints are local vertices 0 and 1.
    pub subgraph: Graph,
    /// `vertex_map[local] = original`.
    pub vertex_map: Vec<usize>,
    pub radius: usize,
}

impl EdgeNeighborhood {
    /// The center edge in local ids.
    pub fn local_center(&self) -> (usize, usize) {
        (0, 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_map.len()
    }
}

/// Collects every vertex within distance `p` of either endpoint of `edge`.
///
/// Local ids are assigned in BFS order: the two endpoints first, then each
/// distance shell in ascending original id.
pub fn edge_neighborhood(g: &Graph, edge: (usize, usize), p: usize) -> Result<EdgeNeighborhood> {
    let (a, b) = edge;
    if !g.has_edge(a, b) {
        return Err(Error::EdgeNotFound(a, b));
    }
    let n = g.vertex_count();
    let mut local = vec![usize::MAX; n];
    let mut vertex_map = vec![a, b];
    local[a] = 0;
    local[b] = 1;
    let mut shell = vec![a, b];
    for _ in 0..p {
        let mut next: Vec<usize> = shell
            .iter()
            .flat_map(|&u| g.neighbors(u).iter().copied())
            .filter(|&w| local[w] == usize::MAX)
            .collect();
        next.sort_unstable();
        next.dedup();
        if next.is_empty() {
            break;
        }
        for &w in &next {
            local[w] = vertex_map.len();
            vertex_map.push(w);
        }
        shell = next;
    }
    let edges = vertex_map.iter().flat_map(|&u| {
        let local = &local;
        g.neighbors(u)
            .iter()
            .filter(move |&&w| local[w] != usize::MAX && u < w)
            .map(move |&w| (local[u], local[w]))
    });
    let subgraph = Graph::new(vertex_map.len(), edges.collect::<Vec<_>>())?;
    Ok(EdgeNeighborhood {
        center_edge: (a.min(b), a.max(b)),
        subgraph,
        vertex_map,
        radius: p,
    })
}

/// Number of vertices in [`build_tree_neighborhood`]`(degree, radius)`.
pub fn tree_vertex_count(degree: usize, radius: usize) -> usize {
    let branch = degree - 1;
    2 * (0..=radius).map(|k| branch.pow(k as u32)).sum::<usize>()
}

/// The `degree`-regular tree of the given radius around a central edge
/// `(0, 1)`. Internal vertices have degree `degree`, leaves degree 1.
pub fn build_tree_neighborhood(degree: usize, radius: usize) -> Result<EdgeNeighborhood> {
    if degree < 2 {
        return Err(Error::InvalidArgument(format!(
            "tree degree must be at least 2, got {degree}"
        )));
    }
    let total = tree_vertex_count(degree, radius);
    let mut edges = vec![(0, 1)];
    let mut shell = vec![0usize, 1];
    let mut next_id = 2;
    for _ in 0..radius {
        let mut next = Vec::with_capacity(shell.len() * (degree - 1));
        for &u in &shell {
            for _ in 0..degree - 1 {
                edges.push((u, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        shell = next;
    }
    debug_assert_eq!(next_id, total);
    let subgraph = Graph::new(total, edges)?;
    Ok(EdgeNeighborhood {
        center_edge: (0, 1),
        subgraph,
        vertex_map: (0..total).collect(),
        radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_forest(g: &Graph) -> bool {
        girth(g).is_none()
    }

    #[test]
    fn four_vertex_cubic_is_k4() {
        for seed in 0..5 {
            let g = generate_random_regular(4, 3, seed).unwrap();
            assert_eq!(g, Graph::complete(4));
        }
    }

    #[test]
    fn regular_generation_is_deterministic() {
        let a = generate_random_regular(16, 3, 7).unwrap();
        let b = generate_random_regular(16, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.regular_degree(), Some(3));
        assert_ne!(a, generate_random_regular(16, 3, 8).unwrap());
    }

    #[test]
    fn regular_generation_rejects_bad_args() {
        assert!(generate_random_regular(5, 3, 0).is_err());
        assert!(generate_random_regular(3, 3, 0).is_err());
        assert!(generate_random_regular(4, 0, 0).is_err());
    }

    #[test]
    fn bipartite_generation() {
        assert_eq!(
            generate_random_bipartite_regular(6, 3, 1).unwrap(),
            Graph::complete_bipartite(3, 3)
        );
        let g = generate_random_bipartite_regular(16, 3, 11).unwrap();
        assert_eq!(g.regular_degree(), Some(3));
        assert!(g.edges().iter().all(|&(a, b)| a < 8 && b >= 8));
        assert_eq!(exact_maxcut(&g).unwrap().best.value, 24);
        assert!(generate_random_bipartite_regular(4, 3, 0).is_err());
        assert!(generate_random_bipartite_regular(7, 3, 0).is_err());
    }

    #[test]
    fn maxcut_small_graphs() {
        let tri = exact_maxcut(&Graph::cycle(3)).unwrap();
        assert_eq!((tri.best.value, tri.count_of_maxima), (2, 3));
        let k4 = exact_maxcut(&Graph::complete(4)).unwrap();
        assert_eq!((k4.best.value, k4.count_of_maxima), (4, 3));
        let k33 = exact_maxcut(&Graph::complete_bipartite(3, 3)).unwrap();
        assert_eq!((k33.best.value, k33.count_of_maxima), (9, 1));
        assert_eq!(k33.best.assignment, vec![1, 1, 1, -1, -1, -1]);
        let single = exact_maxcut(&Graph::new(1, []).unwrap()).unwrap();
        assert_eq!((single.best.value, single.count_of_maxima), (0, 1));
    }

    #[test]
    fn maxcut_matches_brute_force_k4() {
        // direct enumeration of all 16 assignments
        let g = Graph::complete(4);
        let mut best = 0;
        let mut count = 0;
        for s in 0u64..16 {
            let v = cut_value_bits(&g, s);
            if v > best {
                best = v;
                count = 1;
            } else if v == best {
                count += 1;
            }
        }
        assert_eq!(best, 4);
        assert_eq!(count / 2, exact_maxcut(&g).unwrap().count_of_maxima);
    }

    #[test]
    fn maxcut_rejects_large() {
        let g = Graph::path(33);
        assert!(matches!(exact_maxcut(&g), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn unique_maxcut_generation() {
        let g = generate_unique_maxcut_regular(16, 3, RegularFamily::Random, 3, 200).unwrap();
        assert_eq!(exact_maxcut(&g).unwrap().count_of_maxima, 1);
        let k33 = generate_unique_maxcut_regular(6, 3, RegularFamily::Bipartite, 0, 1).unwrap();
        assert_eq!(k33, Graph::complete_bipartite(3, 3));
        assert!(generate_unique_maxcut_regular(16, 3, RegularFamily::Random, 0, 0).is_err());
    }

    #[test]
    fn cut_value_cases() {
        let edge = Graph::new(2, [(0, 1)]).unwrap();
        assert_eq!(cut_value(&edge, &[1, -1]).unwrap(), 1);
        let k4 = Graph::complete(4);
        assert_eq!(cut_value(&k4, &[1; 4]).unwrap(), 0);
        assert_eq!(cut_value(&k4, &[1, 1, -1, -1]).unwrap(), 4);
        assert!(cut_value(&k4, &[1, 1, -1]).is_err());
        assert!(cut_value(&k4, &[1, 1, 0, -1]).is_err());
    }

    #[test]
    fn girth_cases() {
        assert_eq!(girth(&Graph::cycle(3)), Some(3));
        assert_eq!(girth(&Graph::complete_bipartite(3, 3)), Some(4));
        assert_eq!(girth(&Graph::cycle(7)), Some(7));
        assert_eq!(girth(&Graph::path(6)), None);
        assert_eq!(girth(&Graph::complete(4)), Some(3));
    }

    #[test]
    fn neighborhoods() {
        let g = generate_random_regular(16, 3, 2).unwrap();
        let nb = edge_neighborhood(&g, g.edges()[0], 0).unwrap();
        assert_eq!(nb.vertex_count(), 2);
        assert_eq!(nb.subgraph.edge_count(), 1);
        let whole = edge_neighborhood(&g, g.edges()[3], 16).unwrap();
        assert_eq!(whole.vertex_count(), 16);
        assert_eq!(whole.subgraph.edge_count(), 24);
        assert!(edge_neighborhood(&Graph::path(3), (0, 2), 1).is_err());

        // girth 4 < 2p+2 at p = 1, so the ball is not a tree
        let k33 = Graph::complete_bipartite(3, 3);
        let nb = edge_neighborhood(&k33, (0, 3), 1).unwrap();
        assert_eq!(nb.vertex_count(), 6);
        assert!(!is_forest(&nb.subgraph));
    }

    #[test]
    fn tree_neighborhoods() {
        let t1 = build_tree_neighborhood(3, 1).unwrap();
        assert_eq!(t1.vertex_count(), 6);
        assert_eq!(t1.subgraph.edge_count(), 5);
        let t0 = build_tree_neighborhood(3, 0).unwrap();
        assert_eq!((t0.vertex_count(), t0.subgraph.edge_count()), (2, 1));
        let t11 = build_tree_neighborhood(3, 11).unwrap();
        assert_eq!(t11.vertex_count(), 8190);
        for p in 0..6 {
            let t = build_tree_neighborhood(3, p).unwrap();
            assert_eq!(t.vertex_count(), 2 * ((1 << (p + 1)) - 1));
            assert!(is_forest(&t.subgraph));
            let degs: BTreeSet<_> = (0..t.vertex_count()).map(|v| t.subgraph.degree(v)).collect();
            if p > 0 {
                assert_eq!(degs, BTreeSet::from([1, 3]));
            }
        }
        assert!(build_tree_neighborhood(1, 2).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let g = generate_random_regular(10, 3, 4).unwrap();
        let text = g.to_text();
        assert!(text.starts_with("10 15\n"));
        assert_eq!(Graph::from_text(&text).unwrap(), g);
        let commented = "# a triangle\n3 3\n0 1 # first\n1 2\n\n0 2\n";
        assert_eq!(Graph::from_text(commented).unwrap(), Graph::cycle(3));
        let err = Graph::from_text("3 2\n0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(Graph::from_text("3 3\n0 1\n").is_err());
    }
}
