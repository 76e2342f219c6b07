//! Partial vertex cover by explicit branching on high-degree vertices.
//!
//! Any `k` vertices covering `t` edges include one of degree at least
//! `t / k`. Let `S` hold those vertices. If `G[S]` has an independent set of
//! size `k`, its members cover disjoint edge sets and together reach `t`.
//! Otherwise the class guarantee `|S| <= xi(|X|)` bounds the branching.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassHint {
    Bipartite,
    TriangleFree,
    /// Every subgraph has a vertex of degree at most `d`.
    Degenerate(usize),
    General,
}

impl ClassHint {
    /// Planar graphs are 5-degenerate.
    pub const PLANAR: ClassHint = ClassHint::Degenerate(5);

    /// Bound on `|V(H)|` for graphs `H` in the class whose independent set
    /// from [`independent_set`] has size `x`.
    pub fn xi(self, x: usize) -> Option<usize> {
        match self {
            ClassHint::Bipartite => Some(2 * x),
            ClassHint::TriangleFree => Some(4 * x * x),
            ClassHint::Degenerate(d) => Some((d + 1) * x),
            ClassHint::General => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PvcError {
    #[error("graph is not bipartite: odd cycle {0:?}")]
    OddCycle(Vec<Vertex>),
    #[error("graph has triangle {0:?}")]
    Triangle([Vertex; 3]),
    #[error("graph is not {d}-degenerate: vertices {core:?} induce minimum degree above {d}")]
    Core { d: usize, core: Vec<Vertex> },
}

/// Checks `g` against `hint`, returning a witness of the first violation.
pub fn verify_hint(g: &Graph, hint: ClassHint) -> Result<(), PvcError> {
    match hint {
        ClassHint::Bipartite => two_coloring(g).map(|_| ()),
        ClassHint::TriangleFree => match find_triangle(g) {
            Some(tri) => Err(PvcError::Triangle(tri)),
            None => Ok(()),
        },
        ClassHint::Degenerate(d) => {
            let (_, degeneracy, core) = degeneracy_order(g, d);
            if degeneracy > d {
                Err(PvcError::Core { d, core })
            } else {
                Ok(())
            }
        }
        ClassHint::General => Ok(()),
    }
}

/// Proper 2-coloring, or an odd cycle.
pub fn two_coloring(g: &Graph) -> Result<Vec<u8>, PvcError> {
    let n = g.vertex_count();
    let mut color = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for root in g.vertices() {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    return Err(PvcError::OddCycle(tree_cycle(&parent, &depth, u, v)));
                }
            }
        }
    }
    Ok(color)
}

/// The cycle formed by tree paths from `a` and `b` to their common ancestor
/// plus the edge `ab`.
fn tree_cycle(parent: &[usize], depth: &[usize], a: Vertex, b: Vertex) -> Vec<Vertex> {
    let (mut x, mut y) = (a, b);
    let mut left = vec![x];
    let mut right = vec![y];
    while depth[x] > depth[y] {
        x = parent[x];
        left.push(x);
    }
    while depth[y] > depth[x] {
        y = parent[y];
        right.push(y);
    }
    while x != y {
        x = parent[x];
        y = parent[y];
        left.push(x);
        right.push(y);
    }
    right.pop();
    left.extend(right.into_iter().rev());
    left
}

pub fn find_triangle(g: &Graph) -> Option<[Vertex; 3]> {
    for (u, v) in g.edges() {
        if let Some(&x) = g
            .neighbors(u)
            .iter()
            .filter(|&&x| x > v)
            .find(|&&x| g.has_edge(v, x))
        {
            return Some([u, v, x]);
        }
    }
    None
}

/// Smallest-last elimination order (ties to the lowest id) and the largest
/// degree seen at removal, which is the degeneracy. The third value is the
/// remaining vertex set at the first removal of degree above `d` (empty if
/// none): every vertex in it has degree above `d` inside it.
pub fn degeneracy_order(g: &Graph, d: usize) -> (Vec<Vertex>, usize, Vec<Vertex>) {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    let mut core = Vec::new();
    for _ in 0..n {
        let v = g
            .vertices()
            .filter(|&v| alive[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("a vertex remains");
        if deg[v] > d && core.is_empty() {
            core = g.vertices().filter(|&u| alive[u]).collect();
        }
        degeneracy = degeneracy.max(deg[v]);
        alive[v] = false;
        for &u in g.neighbors(v) {
            if alive[u] {
                deg[u] -= 1;
            }
        }
        order.push(v);
    }
    (order, degeneracy, core)
}

pub fn is_independent(g: &Graph, s: &VertexSet) -> bool {
    s.iter()
        .all(|u| g.neighbors(u).iter().all(|&v| !s.contains(v)))
}

/// Edges with at least one endpoint in `s`.
pub fn boundary_edges(g: &Graph, s: &VertexSet) -> usize {
    g.edges()
        .filter(|&(u, v)| s.contains(u) || s.contains(v))
        .count()
}

/// An independent set meeting the class guarantee of `hint`: at least `n/2`
/// for bipartite graphs, at least `max(Δ, n/(Δ+1))` for triangle-free ones,
/// at least `n/(d+1)` for `d`-degenerate ones. For `General` the greedy pass
/// of the degenerate case runs with the measured degeneracy.
pub fn independent_set(g: &Graph, hint: ClassHint) -> Result<VertexSet, PvcError> {
    verify_hint(g, hint)?;
    Ok(match hint {
        ClassHint::Bipartite => larger_color_classes(g, &two_coloring(g)?),
        ClassHint::TriangleFree => {
            let greedy = min_degree_greedy(g);
            match g
                .vertices()
                .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
            {
                Some(hub) if g.degree(hub) > greedy.len() => {
                    g.neighbors(hub).iter().copied().collect()
                }
                _ => greedy,
            }
        }
        ClassHint::Degenerate(_) | ClassHint::General => {
            let (order, _, _) = degeneracy_order(g, usize::MAX);
            forward_greedy(g, &order)
        }
    })
}

/// Per component, the color class with more vertices (ties to the class of
/// the component's lowest vertex).
fn larger_color_classes(g: &Graph, color: &[u8]) -> VertexSet {
    let comp = g.components();
    let count = comp.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut sizes = vec![[0usize; 2]; count];
    let mut first_color = vec![u8::MAX; count];
    for v in g.vertices() {
        sizes[comp[v]][color[v] as usize] += 1;
        if first_color[comp[v]] == u8::MAX {
            first_color[comp[v]] = color[v];
        }
    }
    let keep: Vec<u8> = (0..count)
        .map(|c| {
            let f = first_color[c];
            if sizes[c][1 - f as usize] > sizes[c][f as usize] {
                1 - f
            } else {
                f
            }
        })
        .collect();
    g.vertices()
        .filter(|&v| color[v] == keep[comp[v]])
        .collect()
}

/// Repeatedly take a minimum-degree vertex of what remains and delete its
/// closed neighborhood. Each step deletes at most `Δ + 1` vertices.
fn min_degree_greedy(g: &Graph) -> VertexSet {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut out = Vec::new();
    while let Some(v) = g
        .vertices()
        .filter(|&v| alive[v])
        .min_by_key(|&v| (deg[v], v))
    {
        out.push(v);
        let mut removed = vec![v];
        removed.extend(g.neighbors(v).iter().copied().filter(|&u| alive[u]));
        for &x in &removed {
            alive[x] = false;
        }
        for &x in &removed {
            for &u in g.neighbors(x) {
                if alive[u] {
                    deg[u] -= 1;
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Greedy in elimination order: a vertex is taken unless an earlier taken
/// vertex is adjacent. Each taken vertex blocks only its later neighbors, at
/// most `d` of them.
fn forward_greedy(g: &Graph, order: &[Vertex]) -> VertexSet {
    let mut blocked = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for &v in order {
        if blocked[v] {
            continue;
        }
        out.push(v);
        for &u in g.neighbors(v) {
            blocked[u] = true;
        }
    }
    out.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PvcAnswer {
    Yes { cover: VertexSet, covered: usize },
    No,
}

impl PvcAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, PvcAnswer::Yes { .. })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PvcStats {
    pub recursive_calls: u64,
    /// Largest candidate set branched on.
    pub max_branch_width: usize,
    /// Branching nodes whose candidate set exceeded `xi` of the budget.
    pub width_violations: usize,
    /// Independent-set outputs that had an internal edge.
    pub independence_violations: usize,
    /// Independent sets returned as the final `k` vertices, in original ids.
    pub independent_exits: Vec<VertexSet>,
}

/// Decides whether at most `k` vertices cover at least `t` edges. The graph
/// must satisfy `hint`.
pub fn solve_pvc(
    g: &Graph,
    k: usize,
    t: u64,
    hint: ClassHint,
) -> Result<(PvcAnswer, PvcStats), PvcError> {
    verify_hint(g, hint)?;
    let mut search = Search {
        g,
        hint,
        alive: vec![true; g.vertex_count()],
        stats: PvcStats::default(),
    };
    let found = search.call(k, t);
    let answer = match found {
        Some(cover) => {
            let covered = boundary_edges(g, &cover);
            PvcAnswer::Yes { cover, covered }
        }
        None => PvcAnswer::No,
    };
    Ok((answer, search.stats))
}

struct Search<'a> {
    g: &'a Graph,
    hint: ClassHint,
    alive: Vec<bool>,
    stats: PvcStats,
}

impl Search<'_> {
    fn degree(&self, v: Vertex) -> usize {
        self.g
            .neighbors(v)
            .iter()
            .filter(|&&u| self.alive[u])
            .count()
    }

    fn call(&mut self, k: usize, t: u64) -> Option<VertexSet> {
        self.stats.recursive_calls += 1;
        if t == 0 {
            return Some(VertexSet::new());
        }
        if k == 0 {
            return None;
        }
        let g = self.g;
        let heavy: VertexSet = g
            .vertices()
            .filter(|&v| self.alive[v] && (k as u128) * (self.degree(v) as u128) >= t as u128)
            .collect();
        if heavy.is_empty() {
            return None;
        }
        let (sub, map) = g.induced(&heavy);
        let x = independent_set(&sub, self.hint)
            .expect("hereditary class: induced subgraphs keep the hint")
            .map_through(&map);
        if !is_independent(g, &x) {
            self.stats.independence_violations += 1;
        } else if x.len() >= k {
            let chosen: VertexSet = x.iter().take(k).collect();
            self.stats.independent_exits.push(chosen.clone());
            return Some(chosen);
        }

        self.stats.max_branch_width = self.stats.max_branch_width.max(heavy.len());
        if self.hint.xi(k).is_some_and(|bound| heavy.len() > bound) {
            self.stats.width_violations += 1;
        }
        let mut branch: Vec<(usize, Vertex)> = heavy.iter().map(|v| (self.degree(v), v)).collect();
        branch.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (deg, v) in branch {
            self.alive[v] = false;
            let found = self.call(k - 1, t.saturating_sub(deg as u64));
            self.alive[v] = true;
            if let Some(mut cover) = found {
                cover.insert(v);
                return Some(cover);
            }
        }
        None
    }
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

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn boundary() {
        assert_eq!(boundary_edges(&star(4), &VertexSet::from([0])), 4);
        assert_eq!(boundary_edges(&cycle(5), &VertexSet::new()), 0);
        assert_eq!(boundary_edges(&cycle(3), &VertexSet::from([0, 1])), 3);
    }

    #[test]
    fn independent_sets() {
        let c4 = independent_set(&cycle(4), ClassHint::Bipartite).unwrap();
        assert_eq!(c4.len(), 2);
        assert!(is_independent(&cycle(4), &c4));
        assert_eq!(
            independent_set(&Graph::empty(1), ClassHint::Bipartite).unwrap(),
            VertexSet::from([0])
        );
        let c5 = independent_set(&cycle(5), ClassHint::TriangleFree).unwrap();
        assert!(c5.len() >= 2);
        assert!(is_independent(&cycle(5), &c5));
        let s = independent_set(&star(6), ClassHint::TriangleFree).unwrap();
        assert_eq!(s.len(), 6);
        let p = independent_set(&path(7), ClassHint::Degenerate(1)).unwrap();
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn hint_witnesses() {
        let Err(PvcError::OddCycle(cyc)) = verify_hint(&cycle(5), ClassHint::Bipartite) else {
            panic!("C5 is not bipartite")
        };
        assert_eq!(cyc.len() % 2, 1);
        let g = cycle(5);
        for i in 0..cyc.len() {
            assert!(g.has_edge(cyc[i], cyc[(i + 1) % cyc.len()]));
        }
        assert_eq!(
            verify_hint(&cycle(3), ClassHint::TriangleFree),
            Err(PvcError::Triangle([0, 1, 2]))
        );
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(
            verify_hint(&k4, ClassHint::Degenerate(2)),
            Err(PvcError::Core {
                d: 2,
                core: vec![0, 1, 2, 3]
            })
        );
        assert!(verify_hint(&k4, ClassHint::PLANAR).is_ok());
    }

    #[test]
    fn solve_examples() {
        let (answer, _) = solve_pvc(&star(4), 1, 4, ClassHint::Bipartite).unwrap();
        assert_eq!(
            answer,
            PvcAnswer::Yes {
                cover: VertexSet::from([0]),
                covered: 4
            }
        );
        let (answer, stats) = solve_pvc(&cycle(5), 2, 0, ClassHint::TriangleFree).unwrap();
        assert_eq!(
            answer,
            PvcAnswer::Yes {
                cover: VertexSet::new(),
                covered: 0
            }
        );
        assert_eq!(stats.recursive_calls, 1);
        assert_eq!(
            solve_pvc(&cycle(4), 1, 3, ClassHint::Bipartite).unwrap().0,
            PvcAnswer::No
        );
        let (answer, _) = solve_pvc(&path(4), 2, 3, ClassHint::Bipartite).unwrap();
        let PvcAnswer::Yes { cover, covered } = answer else {
            panic!("expected YES")
        };
        assert_eq!(covered, 3);
        assert_eq!(cover.len(), 2);
        assert!(solve_pvc(&cycle(3), 1, 1, ClassHint::Bipartite).is_err());
    }

    #[test]
    fn xi_values() {
        assert_eq!(ClassHint::Bipartite.xi(3), Some(6));
        assert_eq!(ClassHint::TriangleFree.xi(3), Some(36));
        assert_eq!(ClassHint::PLANAR.xi(3), Some(18));
        assert_eq!(ClassHint::General.xi(3), None);
    }
}
