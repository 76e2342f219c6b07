//! Undirected simple graphs with 0/1 vertex weights, plus the distance
//! machinery the solvers are built on: balls, ball weights, per-component
//! diameter, heavy-vertex selection and scattered-set extraction.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    InvalidVertex { vertex: Vertex, n: usize },
    #[error("self loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("weight {weight} of vertex {vertex} is not 0 or 1")]
    InvalidWeight { vertex: Vertex, weight: u8 },
    #[error("weight vector has {got} entries, graph has {n} vertices")]
    WeightLength { got: usize, n: usize },
    #[error("graph is empty")]
    Empty,
    #[error("k must be at least 1")]
    ZeroK,
}

/// Undirected simple graph. Neighbor lists are sorted and duplicate free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    /// Graph on `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::InvalidVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
            m += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { adj, m })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adj.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex {
                vertex: v,
                n: self.vertex_count(),
            })
        }
    }

    /// Subgraph induced by `keep`. Returns the subgraph and the map from new
    /// ids back to original ids (which is `keep` in sorted order).
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<Vertex>) {
        let map: Vec<Vertex> = keep.iter().collect();
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let adj = map
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&u| (local[u] != usize::MAX).then_some(local[u]))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        (Graph { adj, m }, map)
    }

    /// BFS distances from `sources`, stopping after depth `limit` when given.
    /// Unreached vertices get `usize::MAX`.
    pub fn bfs_from<I>(&self, sources: I, limit: Option<usize>) -> Vec<usize>
    where
        I: IntoIterator<Item = Vertex>,
    {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u];
            if limit.is_some_and(|l| d >= l) {
                continue;
            }
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = d + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Connected component id of every vertex, numbered in order of the
    /// smallest vertex of each component.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.vertex_count()];
        let mut next = 0;
        for s in self.vertices() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Vertex weights, each 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weights(Vec<u8>);

impl Weights {
    pub fn uniform(n: usize) -> Self {
        Weights(vec![1; n])
    }

    pub fn new(values: Vec<u8>) -> Result<Self, GraphError> {
        if let Some((vertex, &weight)) = values.iter().enumerate().find(|(_, &w)| w > 1) {
            return Err(GraphError::InvalidWeight { vertex, weight });
        }
        Ok(Weights(values))
    }

    /// Checks that the weights are defined on exactly the vertices of `g`.
    pub fn check_for(&self, g: &Graph) -> Result<(), GraphError> {
        if self.0.len() == g.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::WeightLength {
                got: self.0.len(),
                n: g.vertex_count(),
            })
        }
    }

    pub fn get(&self, v: Vertex) -> u64 {
        u64::from(self.0[v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&w| u64::from(w)).sum()
    }

    /// Weights restricted to `map` (new id `i` takes the weight of `map[i]`).
    pub fn restrict(&self, map: &[Vertex]) -> Weights {
        Weights(map.iter().map(|&v| self.0[v]).collect())
    }
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        !self.iter().any(|v| other.contains(v))
    }

    /// Boolean membership vector of length `n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter() {
            mask[v] = true;
        }
        mask
    }

    pub fn check_in(&self, g: &Graph) -> Result<(), GraphError> {
        self.iter().try_for_each(|v| g.check_vertex(v))
    }

    pub fn map_through(&self, map: &[Vertex]) -> VertexSet {
        self.iter().map(|v| map[v]).collect()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut v: Vec<Vertex> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(v: Vec<Vertex>) -> Self {
        v.into_iter().collect()
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(v: [Vertex; N]) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Closed ball of radius `r` around `v`.
pub fn ball(g: &Graph, v: Vertex, r: usize) -> Result<VertexSet, GraphError> {
    g.check_vertex(v)?;
    let dist = g.bfs_from([v], Some(r));
    Ok(g.vertices().filter(|&u| dist[u] <= r).collect())
}

/// Total weight of the union of the radius-`r` balls around `a`. Each vertex
/// in the union counts once.
pub fn ball_weight(g: &Graph, w: &Weights, a: &VertexSet, r: usize) -> Result<u64, GraphError> {
    a.check_in(g)?;
    w.check_for(g)?;
    if a.is_empty() {
        return Ok(0);
    }
    let dist = g.bfs_from(a.iter(), Some(r));
    Ok(g.vertices()
        .filter(|&u| dist[u] <= r)
        .map(|u| w.get(u))
        .sum())
}

/// Maximum over connected components of the component's diameter.
pub fn component_diameter(g: &Graph) -> Result<usize, GraphError> {
    if g.vertex_count() == 0 {
        return Err(GraphError::Empty);
    }
    Ok(g.vertices()
        .map(|v| {
            g.bfs_from([v], None)
                .into_iter()
                .filter(|&d| d != usize::MAX)
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0))
}

/// Vertices outside `excluded` whose radius-`r` ball has weight at least
/// `t / k`. The test is `k * weight >= t` in integers.
pub fn heavy_vertices(
    g: &Graph,
    w: &Weights,
    r: usize,
    t: u64,
    k: u64,
    excluded: &VertexSet,
) -> Result<VertexSet, GraphError> {
    if k == 0 {
        return Err(GraphError::ZeroK);
    }
    w.check_for(g)?;
    excluded.check_in(g)?;
    let mut out = Vec::new();
    for v in g.vertices() {
        if excluded.contains(v) {
            continue;
        }
        let dist = g.bfs_from([v], Some(r));
        let weight: u64 = g
            .vertices()
            .filter(|&u| dist[u] <= r)
            .map(|u| w.get(u))
            .sum();
        if (k as u128) * (weight as u128) >= t as u128 {
            out.push(v);
        }
    }
    Ok(VertexSet(out))
}

/// Greedy scattered-set search: up to `target` candidates pairwise at
/// distance at least `2r + 1` and at distance at least `2r + 1` from every
/// forbidden vertex. Returns `None` when no tried order reaches `target`;
/// that does not prove that no such set exists.
pub fn scattered_set(
    g: &Graph,
    candidates: &VertexSet,
    forbidden: &VertexSet,
    r: usize,
    target: usize,
) -> Option<VertexSet> {
    scattered_with_orders(
        g,
        candidates,
        forbidden,
        r,
        target,
        &scatter_orders(g, candidates, None, r),
    )
}

/// As [`scattered_set`], additionally trying candidates in order of
/// decreasing ball weight first.
pub fn scattered_set_weighted(
    g: &Graph,
    w: &Weights,
    candidates: &VertexSet,
    forbidden: &VertexSet,
    r: usize,
    target: usize,
) -> Option<VertexSet> {
    let orders = scatter_orders(g, candidates, Some(w), r);
    scattered_with_orders(g, candidates, forbidden, r, target, &orders)
}

fn scatter_orders(
    g: &Graph,
    candidates: &VertexSet,
    w: Option<&Weights>,
    r: usize,
) -> Vec<Vec<Vertex>> {
    let mut orders = Vec::new();
    if let Some(w) = w {
        let mut by_weight: Vec<(u64, Vertex)> = candidates
            .iter()
            .map(|c| {
                let dist = g.bfs_from([c], Some(r));
                (
                    g.vertices()
                        .filter(|&u| dist[u] <= r)
                        .map(|u| w.get(u))
                        .sum(),
                    c,
                )
            })
            .collect();
        by_weight.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        orders.push(by_weight.into_iter().map(|(_, c)| c).collect());
    }
    orders.push(layer_order(g, candidates));
    orders.push(candidates.iter().collect());
    orders
}

/// Candidates sorted by component, then by BFS layer from an eccentric vertex
/// of that component (found by a double sweep).
fn layer_order(g: &Graph, candidates: &VertexSet) -> Vec<Vertex> {
    let comp = g.components();
    let mut layer = vec![usize::MAX; g.vertex_count()];
    let mut done = vec![false; g.vertex_count().max(1)];
    for c in candidates.iter() {
        if done[comp[c]] {
            continue;
        }
        done[comp[c]] = true;
        let first = g.bfs_from([c], None);
        let far = g
            .vertices()
            .filter(|&u| first[u] != usize::MAX)
            .max_by_key(|&u| (first[u], std::cmp::Reverse(u)))
            .unwrap_or(c);
        let from_far = g.bfs_from([far], None);
        for u in g.vertices().filter(|&u| from_far[u] != usize::MAX) {
            layer[u] = from_far[u];
        }
    }
    let mut order: Vec<Vertex> = candidates.iter().collect();
    order.sort_by_key(|&c| (comp[c], layer[c], c));
    order
}

fn scattered_with_orders(
    g: &Graph,
    candidates: &VertexSet,
    forbidden: &VertexSet,
    r: usize,
    target: usize,
    orders: &[Vec<Vertex>],
) -> Option<VertexSet> {
    if target == 0 {
        return Some(VertexSet::new());
    }
    if candidates.len() < target {
        return None;
    }
    let reach = 2 * r;
    let base = if forbidden.is_empty() {
        vec![usize::MAX; g.vertex_count()]
    } else {
        g.bfs_from(forbidden.iter(), Some(reach))
    };
    for order in orders {
        let mut blocked: Vec<bool> = base.iter().map(|&d| d <= reach).collect();
        let mut picked = Vec::with_capacity(target);
        for &c in order {
            if blocked[c] {
                continue;
            }
            picked.push(c);
            if picked.len() == target {
                return Some(picked.into_iter().collect());
            }
            let dist = g.bfs_from([c], Some(reach));
            for u in g.vertices() {
                if dist[u] <= reach {
                    blocked[u] = true;
                }
            }
        }
    }
    None
}
