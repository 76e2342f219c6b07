//! Tree decompositions: validation, a min-fill elimination heuristic (exact
//! elimination-order search on small graphs), and conversion to nice form.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

/// Graphs up to this many vertices additionally get an exact elimination
/// order search.
pub const EXACT_LIMIT: usize = 12;

/// First violated condition of a candidate tree decomposition.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("decomposition has no nodes")]
    NoNodes,
    #[error("node structure is not a tree")]
    NotATree,
    #[error("bag of node {node} holds vertex {vertex}, which is not in the graph")]
    UnknownVertex { node: usize, vertex: Vertex },
    #[error("vertex {0} is in no bag")]
    VertexMissing(Vertex),
    #[error("edge {{{0}, {1}}} is in no bag")]
    EdgeUncovered(Vertex, Vertex),
    #[error("nodes holding vertex {0} do not form a subtree")]
    NotConnected(Vertex),
    #[error("nice node {0} is malformed")]
    MalformedNiceNode(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    /// Tree edges between node indices.
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
}

impl TreeDecomposition {
    /// Single bag holding every vertex.
    pub fn trivial(g: &Graph) -> Self {
        TreeDecomposition {
            bags: vec![g.vertices().collect()],
            edges: Vec::new(),
            root: 0,
        }
    }

    pub fn width(&self) -> usize {
        width(self)
    }

    fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// Maximum bag size minus one (zero when every bag is empty).
pub fn width(td: &TreeDecomposition) -> usize {
    td.bags
        .iter()
        .map(VertexSet::len)
        .max()
        .unwrap_or(0)
        .saturating_sub(1)
}

/// Checks the three tree-decomposition conditions, reporting the first
/// violation found.
pub fn check(g: &Graph, td: &TreeDecomposition) -> Result<(), Violation> {
    let nodes = td.bags.len();
    if nodes == 0 {
        return Err(Violation::NoNodes);
    }
    if td.root >= nodes
        || td.edges.len() != nodes - 1
        || td
            .edges
            .iter()
            .any(|&(a, b)| a >= nodes || b >= nodes || a == b)
    {
        return Err(Violation::NotATree);
    }
    let adj = td.neighbors();
    let mut seen = vec![false; nodes];
    let mut stack = vec![td.root];
    seen[td.root] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Violation::NotATree);
    }

    let n = g.vertex_count();
    let mut holders = vec![0usize; n];
    for (node, bag) in td.bags.iter().enumerate() {
        for v in bag.iter() {
            if v >= n {
                return Err(Violation::UnknownVertex { node, vertex: v });
            }
            holders[v] += 1;
        }
    }
    if let Some(v) = (0..n).find(|&v| holders[v] == 0) {
        return Err(Violation::VertexMissing(v));
    }
    for (u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(u) && b.contains(v)) {
            return Err(Violation::EdgeUncovered(u, v));
        }
    }
    // Nodes holding v induce a forest; it is a subtree iff it has one edge
    // fewer than nodes.
    let mut inner_edges = vec![0usize; n];
    for &(a, b) in &td.edges {
        for v in td.bags[a].iter() {
            if td.bags[b].contains(v) {
                inner_edges[v] += 1;
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| inner_edges[v] + 1 != holders[v]) {
        return Err(Violation::NotConnected(v));
    }
    Ok(())
}

pub fn validate(g: &Graph, td: &TreeDecomposition) -> bool {
    check(g, td).is_ok()
}

/// Heuristic decomposition: min-fill elimination, replaced by an optimal
/// elimination order when the graph has at most [`EXACT_LIMIT`] vertices.
pub fn build_decomposition(g: &Graph) -> TreeDecomposition {
    let order = if g.vertex_count() <= EXACT_LIMIT {
        let exact = exact_elimination_order(g);
        let fill = min_fill_order(g);
        if elimination_width(g, &fill) <= elimination_width(g, &exact) {
            fill
        } else {
            exact
        }
    } else {
        min_fill_order(g)
    };
    from_elimination_order(g, &order)
}

/// Width of the decomposition induced by eliminating vertices in `order`.
pub fn elimination_width(g: &Graph, order: &[Vertex]) -> usize {
    let mut adj: Vec<BTreeSet<Vertex>> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut best = 0;
    for &v in order {
        let higher: Vec<Vertex> = adj[v].iter().copied().collect();
        best = best.max(higher.len());
        eliminate(&mut adj, v, &higher);
    }
    best
}

fn eliminate(adj: &mut [BTreeSet<Vertex>], v: Vertex, higher: &[Vertex]) {
    for (i, &a) in higher.iter().enumerate() {
        adj[a].remove(&v);
        for &b in &higher[i + 1..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    }
    adj[v].clear();
}

/// Decomposition with one bag per vertex: the vertex plus its neighbors in
/// the filled graph that are eliminated later.
pub fn from_elimination_order(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition {
            bags: vec![VertexSet::new()],
            edges: Vec::new(),
            root: 0,
        };
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<Vertex>> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n);
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let higher: Vec<Vertex> = adj[v].iter().copied().collect();
        match higher.iter().min_by_key(|&&u| pos[u]) {
            Some(&parent) => edges.push((i, pos[parent])),
            None => roots.push(i),
        }
        bags.push(higher.iter().copied().chain([v]).collect());
        eliminate(&mut adj, v, &higher);
    }
    // One tree per component; chain the component roots together.
    let root = *roots.last().expect("at least one root");
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition { bags, edges, root }
}

/// Min-fill elimination order. Ties go to lower degree, then lower id.
pub fn min_fill_order(g: &Graph) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<Vertex>> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let fill_of = |adj: &[BTreeSet<Vertex>], v: Vertex| -> usize {
        let nb: Vec<Vertex> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nb.iter().enumerate() {
            missing += nb[i + 1..]
                .iter()
                .filter(|&&b| !adj[a].contains(&b))
                .count();
        }
        missing
    };
    let mut fill: Vec<usize> = (0..n).map(|v| fill_of(&adj, v)).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill[v], adj[v].len(), v))
            .expect("alive vertex");
        let higher: Vec<Vertex> = adj[v].iter().copied().collect();
        eliminate(&mut adj, v, &higher);
        alive[v] = false;
        order.push(v);
        let mut touched = BTreeSet::new();
        for &a in &higher {
            touched.insert(a);
            touched.extend(adj[a].iter().copied());
        }
        for x in touched {
            fill[x] = fill_of(&adj, x);
        }
    }
    order
}

/// Optimal elimination order by dynamic programming over vertex subsets
/// (equivalent to trying every order). Exponential; meant for small graphs.
pub fn exact_elimination_order(g: &Graph) -> Vec<Vertex> {
    let n = g.vertex_count();
    assert!(n <= 20, "exact elimination search limited to 20 vertices");
    let full: usize = (1 << n) - 1;
    let mut best = vec![usize::MAX; 1 << n];
    let mut last = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for set in 1..=full {
        for v in 0..n {
            if set & (1 << v) == 0 {
                continue;
            }
            let rest = set & !(1 << v);
            let q = later_neighbors(g, rest, v);
            let cost = best[rest].max(q);
            if cost < best[set] {
                best[set] = cost;
                last[set] = v;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let v = last[set];
        order.push(v);
        set &= !(1 << v);
    }
    order.reverse();
    order
}

/// Number of vertices outside `eliminated ∪ {v}` reachable from `v` through
/// eliminated vertices: the size of `v`'s higher neighborhood once everything
/// in `eliminated` is gone.
fn later_neighbors(g: &Graph, eliminated: usize, v: Vertex) -> usize {
    let mut seen = 1usize << v;
    let mut queue = VecDeque::from([v]);
    let mut count = 0;
    while let Some(u) = queue.pop_front() {
        for &x in g.neighbors(u) {
            if seen & (1 << x) != 0 {
                continue;
            }
            seen |= 1 << x;
            if eliminated & (1 << x) != 0 {
                queue.push_back(x);
            } else {
                count += 1;
            }
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    /// Sorted bag contents.
    pub bag: Vec<Vertex>,
    pub children: Vec<usize>,
}

/// Nice tree decomposition. Children always precede their parent in `nodes`,
/// and the root (the last node) has an empty bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceDecomposition {
    nodes: Vec<NiceNode>,
}

impl NiceDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|x| x.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn max_bag(&self) -> usize {
        self.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(0)
    }

    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self
            .nodes
            .iter()
            .map(|x| x.bag.iter().copied().collect())
            .collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(p, x)| x.children.iter().map(move |&c| (c, p)))
            .collect();
        TreeDecomposition {
            bags,
            edges,
            root: self.root(),
        }
    }

    /// Node-kind consistency plus the three decomposition conditions.
    pub fn check(&self, g: &Graph) -> Result<(), Violation> {
        for (i, x) in self.nodes.iter().enumerate() {
            let ok = x.children.iter().all(|&c| c < i)
                && match x.kind {
                    NiceKind::Leaf => x.children.is_empty() && x.bag.is_empty(),
                    NiceKind::Introduce(v) => {
                        x.children.len() == 1 && {
                            let child = &self.nodes[x.children[0]].bag;
                            !child.contains(&v) && with(child, v) == x.bag
                        }
                    }
                    NiceKind::Forget(v) => {
                        x.children.len() == 1 && {
                            let child = &self.nodes[x.children[0]].bag;
                            child.contains(&v) && without(child, v) == x.bag
                        }
                    }
                    NiceKind::Join => {
                        x.children.len() == 2
                            && x.children.iter().all(|&c| self.nodes[c].bag == x.bag)
                    }
                };
            if !ok {
                return Err(Violation::MalformedNiceNode(i));
            }
        }
        if !self.nodes.last().is_some_and(|x| x.bag.is_empty()) {
            return Err(Violation::MalformedNiceNode(
                self.nodes.len().saturating_sub(1),
            ));
        }
        check(g, &self.as_tree_decomposition())
    }

    fn push(&mut self, kind: NiceKind, bag: Vec<Vertex>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }
}

fn with(bag: &[Vertex], v: Vertex) -> Vec<Vertex> {
    let mut out = bag.to_vec();
    let pos = out.binary_search(&v).unwrap_or_else(|p| p);
    out.insert(pos, v);
    out
}

fn without(bag: &[Vertex], v: Vertex) -> Vec<Vertex> {
    bag.iter().copied().filter(|&u| u != v).collect()
}

/// Converts a valid decomposition into nice form of the same width.
pub fn to_nice(td: &TreeDecomposition) -> NiceDecomposition {
    let count = td.bags.len();
    let adj = td.neighbors();
    let mut parent = vec![usize::MAX; count];
    let mut order = Vec::with_capacity(count);
    let mut stack = vec![td.root];
    parent[td.root] = td.root;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }

    let mut nice = NiceDecomposition { nodes: Vec::new() };
    let mut top = vec![usize::MAX; count];
    for &x in order.iter().rev() {
        let target = td.bags[x].as_slice();
        let mut heads = Vec::new();
        for &c in &adj[x] {
            if c == x || parent[c] != x {
                continue;
            }
            let mut cur = top[c];
            let mut bag = td.bags[c].as_slice().to_vec();
            for v in td.bags[c].iter().filter(|&v| !td.bags[x].contains(v)) {
                bag = without(&bag, v);
                cur = nice.push(NiceKind::Forget(v), bag.clone(), vec![cur]);
            }
            for &v in target.iter().filter(|&&v| !td.bags[c].contains(v)) {
                bag = with(&bag, v);
                cur = nice.push(NiceKind::Introduce(v), bag.clone(), vec![cur]);
            }
            heads.push(cur);
        }
        let head = if heads.is_empty() {
            let mut cur = nice.push(NiceKind::Leaf, Vec::new(), Vec::new());
            let mut bag = Vec::new();
            for &v in target {
                bag = with(&bag, v);
                cur = nice.push(NiceKind::Introduce(v), bag.clone(), vec![cur]);
            }
            cur
        } else {
            let mut cur = heads[0];
            for &h in &heads[1..] {
                cur = nice.push(NiceKind::Join, target.to_vec(), vec![cur, h]);
            }
            cur
        };
        top[x] = head;
    }

    let mut cur = top[td.root];
    let mut bag = td.bags[td.root].as_slice().to_vec();
    for v in td.bags[td.root].iter() {
        bag = without(&bag, v);
        cur = nice.push(NiceKind::Forget(v), bag.clone(), vec![cur]);
    }
    debug_assert_eq!(cur, nice.nodes.len() - 1);
    nice
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn grid(rows: usize, cols: usize) -> Graph {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Graph::from_edges(rows * cols, edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Graph::from_edges(n, edges).unwrap()
    }

    fn bags(list: &[&[Vertex]]) -> Vec<VertexSet> {
        list.iter().map(|b| b.iter().copied().collect()).collect()
    }

    #[test]
    fn validate_examples() {
        let g = path(3);
        assert!(validate(&g, &TreeDecomposition::trivial(&g)));
        let td = TreeDecomposition {
            bags: bags(&[&[0, 1], &[1, 2]]),
            edges: vec![(0, 1)],
            root: 0,
        };
        assert!(validate(&g, &td));
        // Vertex 1 sits in the two ends of a three-node path but not in the middle.
        let broken = TreeDecomposition {
            bags: bags(&[&[0, 1], &[0, 2], &[1, 2]]),
            edges: vec![(0, 1), (1, 2)],
            root: 0,
        };
        assert_eq!(check(&g, &broken), Err(Violation::NotConnected(1)));
    }

    #[test]
    fn reports_first_violation() {
        let g = path(3);
        let missing = TreeDecomposition {
            bags: bags(&[&[0, 1]]),
            edges: vec![],
            root: 0,
        };
        assert_eq!(check(&g, &missing), Err(Violation::VertexMissing(2)));
        let uncovered = TreeDecomposition {
            bags: bags(&[&[0, 1], &[2]]),
            edges: vec![(0, 1)],
            root: 0,
        };
        assert_eq!(check(&g, &uncovered), Err(Violation::EdgeUncovered(1, 2)));
        let forest = TreeDecomposition {
            bags: bags(&[&[0, 1], &[1, 2]]),
            edges: vec![],
            root: 0,
        };
        assert_eq!(check(&g, &forest), Err(Violation::NotATree));
    }

    #[test]
    fn widths() {
        let g = complete(5);
        assert_eq!(TreeDecomposition::trivial(&g).width(), 4);
        let td = TreeDecomposition {
            bags: bags(&[&[0, 1], &[1, 2]]),
            edges: vec![(0, 1)],
            root: 0,
        };
        assert_eq!(width(&td), 1);
    }

    #[test]
    fn heuristic_widths() {
        assert_eq!(build_decomposition(&complete(4)).width(), 3);
        assert_eq!(build_decomposition(&cycle(5)).width(), 2);
        assert_eq!(build_decomposition(&grid(3, 3)).width(), 3);
        assert_eq!(build_decomposition(&path(40)).width(), 1);
        for g in [
            complete(4),
            cycle(5),
            grid(3, 3),
            grid(5, 7),
            path(40),
            Graph::empty(3),
        ] {
            assert!(validate(&g, &build_decomposition(&g)));
        }
    }

    #[test]
    fn nice_single_bag() {
        let g = Graph::empty(1);
        let nice = to_nice(&TreeDecomposition::trivial(&g));
        let kinds: Vec<NiceKind> = nice.nodes().iter().map(|x| x.kind).collect();
        assert_eq!(
            kinds,
            vec![NiceKind::Leaf, NiceKind::Introduce(0), NiceKind::Forget(0)]
        );
        nice.check(&g).unwrap();
    }

    #[test]
    fn nice_two_bags() {
        let g = path(3);
        let td = TreeDecomposition {
            bags: bags(&[&[0, 1], &[1, 2]]),
            edges: vec![(0, 1)],
            root: 0,
        };
        let nice = to_nice(&td);
        nice.check(&g).unwrap();
        assert_eq!(nice.width(), 1);
        let kinds: Vec<NiceKind> = nice.nodes().iter().map(|x| x.kind).collect();
        assert!(kinds.contains(&NiceKind::Forget(2)) || kinds.contains(&NiceKind::Forget(0)));
        assert!(kinds.contains(&NiceKind::Introduce(0)) || kinds.contains(&NiceKind::Introduce(2)));
    }

    #[test]
    fn nice_preserves_width_on_branching_trees() {
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        let td = build_decomposition(&g);
        let nice = to_nice(&td);
        nice.check(&g).unwrap();
        assert_eq!(nice.width(), td.width());
        assert!(nice.nodes().iter().any(|x| x.kind == NiceKind::Join));
        let g = grid(4, 4);
        let td = build_decomposition(&g);
        let nice = to_nice(&td);
        nice.check(&g).unwrap();
        assert_eq!(nice.width(), td.width());
    }
}
