//! Implicit branching for weighted partial `(k, r, t)`-center.
//!
//! A call carries a family of disjoint sets `X_i` with counts `a_i`, the best
//! center `D` meeting those counts exactly, and its covered weight `mu`. With
//! `k' = k - sum(a_i)` centers and `t' = t - mu` weight left, every solution
//! that agrees with the family picks at least one vertex outside `S` whose
//! ball weighs at least `t' / k'`. The call collects these heavy vertices into
//! `A`, computes `mu` for every count `p = |C ∩ A|` with one DP sweep, and
//! recurses on each `p`. Budgets shrink by at least one per level, so a run
//! makes at most `2^k` calls.
//!
//! When the union of the balls around `S ∪ A` is too wide (diameter in
//! general mode, decomposition width in planar mode), the call first tries to
//! finish with `k'` heavy vertices whose balls are pairwise disjoint and miss
//! the balls of `D`. A failed search falls through to the DP.

use std::collections::BTreeSet;

use log::debug;
use num_bigint::BigUint;
use thiserror::Error;

use crate::center_dp::{max_mu, Constraint, ConstraintList, DpError, DpStats};
use crate::graph::{
    ball_weight, component_diameter, heavy_vertices, scattered_set_weighted, Graph, GraphError,
    Vertex, VertexSet, Weights,
};
use crate::treewidth::{build_decomposition, to_nice, validate, TreeDecomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CenterError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Dp(#[from] DpError),
    #[error("set {set} of the set system names element {element}, universe has {universe}")]
    UnknownElement {
        set: usize,
        element: usize,
        universe: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Shortcut when the diameter of the ball union exceeds the threshold.
    General,
    /// Shortcut when the measured decomposition width exceeds the threshold.
    Planar,
}

#[derive(Debug, Clone)]
pub struct CenterInstance {
    pub graph: Graph,
    pub weights: Weights,
    pub k: usize,
    pub r: usize,
    pub t: u64,
    pub mode: Mode,
    /// Vertices allowed as centers; `None` allows all.
    pub allowed: Option<VertexSet>,
}

impl CenterInstance {
    pub fn new(graph: Graph, weights: Weights, k: usize, r: usize, t: u64, mode: Mode) -> Self {
        CenterInstance {
            graph,
            weights,
            k,
            r,
            t,
            mode,
            allowed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Yes { centers: VertexSet, covered: u64 },
    No,
}

impl Answer {
    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes { .. })
    }
}

/// One successful shortcut: the centers held when it fired and the scattered
/// heavy vertices added to them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EarlyExit {
    pub prior: VertexSet,
    pub added: VertexSet,
    /// The measured quantity (diameter or width) and the threshold it beat.
    pub measured: usize,
    pub threshold: BigUint,
    /// Whether the measured diameter also exceeds [`scatter_bound`], which
    /// guarantees that a scattered set of the requested size exists.
    pub guaranteed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub recursive_calls: u64,
    pub deepest_family: usize,
    /// Width of every decomposition handed to the DP, in call order.
    pub widths: Vec<usize>,
    pub early_exits: Vec<EarlyExit>,
    /// Shortcut triggers where the greedy search missed.
    pub shortcut_misses: usize,
    /// Heuristic decompositions that failed validation and were replaced by
    /// the single-bag decomposition.
    pub invalid_decompositions: usize,
    /// Calls whose family sets overlapped each other or the heavy set.
    pub family_violations: usize,
    pub dp: DpStats,
}

impl SolveStats {
    pub fn max_width(&self) -> Option<usize> {
        self.widths.iter().copied().max()
    }
}

/// `((12r + 4)(k + rho))^(family_len + 1)`.
pub fn diameter_threshold(r: u64, k: u64, family_len: u32, rho: u64) -> BigUint {
    let base = BigUint::from(12 * r + 4) * BigUint::from(k + rho);
    base.pow(family_len + 1)
}

/// `6 * ((8r + 2)(k + 1) + 4r + 4)`.
pub fn planar_h(r: u64, k: u64) -> u64 {
    6 * ((8 * r + 2) * (k + 1) + 4 * r + 4)
}

/// `6 * planar_h(r, k)`.
pub fn planar_width_threshold(r: u64, k: u64) -> u64 {
    6 * planar_h(r, k)
}

/// Diameter above which `k` heavy vertices with pairwise disjoint balls,
/// also disjoint from the balls of the current centers, must exist when the
/// previous level's components had diameter at most `l`:
/// `(6r + 2) * 2 * k * l`.
pub fn scatter_bound(k: u64, r: u64, l: &BigUint) -> BigUint {
    BigUint::from((6 * r + 2) * 2 * k) * l
}

pub fn solve(inst: &CenterInstance) -> Result<(Answer, SolveStats), CenterError> {
    inst.weights.check_for(&inst.graph)?;
    if let Some(a) = &inst.allowed {
        a.check_in(&inst.graph)?;
    }
    if inst.k > 255 {
        return Err(DpError::KTooLarge(inst.k).into());
    }
    if inst.r > 127 {
        return Err(DpError::RadiusTooLarge(inst.r).into());
    }
    let disallowed: VertexSet = match &inst.allowed {
        Some(a) => inst.graph.vertices().filter(|&v| !a.contains(v)).collect(),
        None => VertexSet::new(),
    };
    let mut solver = Solver {
        inst,
        disallowed,
        stats: SolveStats::default(),
    };
    let mut family = Vec::new();
    let found = solver.call(&mut family, VertexSet::new(), 0, BigUint::from(1u32))?;
    let answer = match found {
        Some(centers) => {
            let covered = ball_weight(&inst.graph, &inst.weights, &centers, inst.r)?;
            Answer::Yes { centers, covered }
        }
        None => Answer::No,
    };
    Ok((answer, solver.stats))
}

struct Solver<'a> {
    inst: &'a CenterInstance,
    disallowed: VertexSet,
    stats: SolveStats,
}

/// The union of the induced balls around `roots`, on local ids.
struct BallUnion {
    graph: Graph,
    /// Local id to original vertex.
    map: Vec<Vertex>,
    /// Original vertex to local id.
    local: Vec<Option<Vertex>>,
}

impl BallUnion {
    fn new(g: &Graph, roots: &VertexSet, r: usize) -> Self {
        let mut inside = vec![false; g.vertex_count()];
        let mut edges = BTreeSet::new();
        for v in roots.iter() {
            let dist = g.bfs_from([v], Some(r));
            let ball: Vec<Vertex> = g.vertices().filter(|&u| dist[u] <= r).collect();
            for &u in &ball {
                inside[u] = true;
                for &x in g.neighbors(u) {
                    if u < x && dist[x] <= r {
                        edges.insert((u, x));
                    }
                }
            }
        }
        let map: Vec<Vertex> = g.vertices().filter(|&v| inside[v]).collect();
        let mut local = vec![None; g.vertex_count()];
        for (i, &v) in map.iter().enumerate() {
            local[v] = Some(i);
        }
        let graph = Graph::from_edges(
            map.len(),
            edges
                .into_iter()
                .map(|(u, x)| (local[u].unwrap(), local[x].unwrap())),
        )
        .expect("edges of a simple graph stay simple");
        BallUnion { graph, map, local }
    }

    fn to_local(&self, s: &VertexSet) -> VertexSet {
        s.iter()
            .map(|v| self.local[v].expect("root lies in its own ball"))
            .collect()
    }
}

impl Solver<'_> {
    fn call(
        &mut self,
        family: &mut Vec<(VertexSet, usize)>,
        centers: VertexSet,
        mu: u64,
        ell: BigUint,
    ) -> Result<Option<VertexSet>, CenterError> {
        let inst = self.inst;
        let (g, w, r) = (&inst.graph, &inst.weights, inst.r);
        self.stats.recursive_calls += 1;
        self.stats.deepest_family = self.stats.deepest_family.max(family.len());

        // Enough weight already.
        if mu >= inst.t {
            return Ok(Some(centers));
        }
        // Budget spent.
        let rho: usize = family.iter().map(|f| f.1).sum();
        let left = inst.k - rho;
        if left == 0 {
            return Ok(None);
        }
        // Heavy vertices and the union of balls around them and S.
        let owed = inst.t - mu;
        let s: VertexSet = family.iter().flat_map(|f| f.0.iter()).collect();
        let heavy = heavy_vertices(g, w, r, owed, left as u64, &s.union(&self.disallowed))?;
        if heavy.is_empty() {
            return Ok(None);
        }
        if !family_is_disjoint(family, &heavy) {
            self.stats.family_violations += 1;
        }
        let union = BallUnion::new(g, &s.union(&heavy), r);

        // Shortcut.
        let threshold = match inst.mode {
            Mode::General => {
                diameter_threshold(r as u64, inst.k as u64, family.len() as u32, rho as u64)
            }
            Mode::Planar => BigUint::from(planar_width_threshold(r as u64, inst.k as u64)),
        };
        let mut td: Option<TreeDecomposition> = None;
        let measured = match inst.mode {
            Mode::General => component_diameter(&union.graph)?,
            Mode::Planar => {
                let built = build_decomposition(&union.graph);
                let width = built.width();
                td = Some(built);
                width
            }
        };
        if BigUint::from(measured) > threshold {
            let guaranteed = inst.mode == Mode::General
                && BigUint::from(measured) > scatter_bound(left as u64, r as u64, &ell);
            match scattered_set_weighted(g, w, &heavy, &centers, r, left) {
                Some(added) => {
                    debug!("shortcut: measured {measured} > {threshold}, added {added:?}");
                    self.stats.early_exits.push(EarlyExit {
                        prior: centers.clone(),
                        added: added.clone(),
                        measured,
                        threshold,
                        guaranteed,
                    });
                    return Ok(Some(centers.union(&added)));
                }
                None => {
                    debug!("shortcut search missed at measured {measured}");
                    self.stats.shortcut_misses += 1;
                }
            }
        }

        // Decomposition of the ball union.
        let mut td = td.unwrap_or_else(|| build_decomposition(&union.graph));
        if !validate(&union.graph, &td) {
            self.stats.invalid_decompositions += 1;
            td = TreeDecomposition::trivial(&union.graph);
        }
        let nd = to_nice(&td);
        self.stats.widths.push(nd.width());

        // One sweep gives mu for every p = |C ∩ A|; branch on each.
        let fixed = ConstraintList::new(
            family
                .iter()
                .map(|(x, a)| Constraint::new(union.to_local(x), *a))
                .collect(),
        )?;
        let local_w = w.restrict(&union.map);
        let sweep = max_mu(
            &union.graph,
            &nd,
            &local_w,
            inst.k,
            r,
            &fixed,
            &union.to_local(&heavy),
        )?;
        self.stats.dp.absorb(&sweep.stats);
        for (i, entry) in sweep.entries.into_iter().enumerate() {
            let Some(best) = entry else { continue };
            let p = i + 1;
            family.push((heavy.clone(), p));
            let found = self.call(
                family,
                best.centers.map_through(&union.map),
                best.covered,
                threshold.clone(),
            );
            family.pop();
            if let Some(c) = found? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }
}

fn family_is_disjoint(family: &[(VertexSet, usize)], heavy: &VertexSet) -> bool {
    family.iter().enumerate().all(|(i, (x, _))| {
        x.is_disjoint(heavy) && family[i + 1..].iter().all(|(y, _)| x.is_disjoint(y))
    })
}

/// Partial dominating set: `k` vertices whose closed neighborhoods cover at
/// least `t` vertices.
pub fn solve_pds(
    g: &Graph,
    k: usize,
    t: u64,
    mode: Mode,
) -> Result<(Answer, SolveStats), CenterError> {
    solve(&CenterInstance::new(
        g.clone(),
        Weights::uniform(g.vertex_count()),
        k,
        1,
        t,
        mode,
    ))
}

/// A family of subsets of `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    pub universe: usize,
    pub sets: Vec<Vec<usize>>,
}

impl SetSystem {
    /// Edges as elements, vertices as the sets of their incident edges.
    /// Picking `k` sets covering `t` elements is partial vertex cover.
    pub fn from_graph_edges(g: &Graph) -> Self {
        let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
        let mut sets = vec![Vec::new(); g.vertex_count()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            sets[u].push(i);
            sets[v].push(i);
        }
        SetSystem {
            universe: edges.len(),
            sets,
        }
    }

    /// Elements `0..universe` followed by one vertex per set, adjacent to its
    /// elements. Elements weigh 1 and sets 0; centers are the set vertices.
    pub fn incidence_instance(
        &self,
        k: usize,
        t: u64,
        mode: Mode,
    ) -> Result<CenterInstance, CenterError> {
        let u = self.universe;
        let mut edges = Vec::new();
        for (i, set) in self.sets.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &e in set {
                if e >= u {
                    return Err(CenterError::UnknownElement {
                        set: i,
                        element: e,
                        universe: u,
                    });
                }
                if seen.insert(e) {
                    edges.push((e, u + i));
                }
            }
        }
        let n = u + self.sets.len();
        let graph = Graph::from_edges(n, edges)?;
        let weights = Weights::new((0..n).map(|v| u8::from(v < u)).collect())?;
        let mut inst = CenterInstance::new(graph, weights, k, 1, t, mode);
        inst.allowed = Some((u..n).collect());
        Ok(inst)
    }
}

/// Partial set cover: at most `k` sets covering at least `t` elements. The
/// YES witness lists set indices.
pub fn solve_psc(
    system: &SetSystem,
    k: usize,
    t: u64,
    mode: Mode,
) -> Result<(Answer, SolveStats), CenterError> {
    let inst = system.incidence_instance(k, t, mode)?;
    let (answer, stats) = solve(&inst)?;
    let answer = match answer {
        Answer::Yes { centers, covered } => Answer::Yes {
            centers: centers.iter().map(|v| v - system.universe).collect(),
            covered,
        },
        Answer::No => Answer::No,
    };
    Ok((answer, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn run(g: Graph, k: usize, r: usize, t: u64) -> (Answer, SolveStats) {
        let n = g.vertex_count();
        solve(&CenterInstance::new(
            g,
            Weights::uniform(n),
            k,
            r,
            t,
            Mode::General,
        ))
        .unwrap()
    }

    #[test]
    fn path_one_center() {
        let (answer, stats) = run(path(5), 1, 1, 3);
        let Answer::Yes { centers, covered } = answer else {
            panic!("expected YES")
        };
        assert_eq!(covered, 3);
        assert!([1, 2, 3].contains(&centers.as_slice()[0]));
        assert_eq!(centers.len(), 1);
        assert!(stats.recursive_calls <= 2);
    }

    #[test]
    fn zero_target() {
        for k in 0..3 {
            let (answer, stats) = run(path(4), k, 1, 0);
            assert_eq!(
                answer,
                Answer::Yes {
                    centers: VertexSet::new(),
                    covered: 0
                }
            );
            assert_eq!(stats.recursive_calls, 1);
        }
    }

    #[test]
    fn triangle() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(run(g, 1, 1, 3).0.is_yes());
    }

    #[test]
    fn two_edges_no() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let (answer, stats) = run(g, 1, 1, 3);
        assert_eq!(answer, Answer::No);
        assert!(stats.recursive_calls <= 2);
    }

    #[test]
    fn zero_budget() {
        assert_eq!(run(path(3), 0, 1, 1).0, Answer::No);
    }

    #[test]
    fn thresholds() {
        assert_eq!(diameter_threshold(1, 2, 0, 0), BigUint::from(32u32));
        assert_eq!(diameter_threshold(0, 1, 0, 0), BigUint::from(4u32));
        assert_eq!(diameter_threshold(1, 2, 1, 1), BigUint::from(2304u32));
        assert_eq!(planar_h(1, 2), 228);
        assert_eq!(planar_width_threshold(1, 2), 1368);
        assert_eq!(planar_h(0, 1), 48);
        assert_eq!(planar_width_threshold(0, 1), 288);
        assert!(planar_width_threshold(1, 3) > planar_width_threshold(1, 2));
        assert_eq!(
            scatter_bound(2, 1, &BigUint::from(1u32)),
            BigUint::from(32u32)
        );
        assert_eq!(
            scatter_bound(1, 0, &BigUint::from(1u32)),
            BigUint::from(4u32)
        );
        assert_eq!(
            scatter_bound(3, 2, &BigUint::from(5u32)),
            BigUint::from(420u32)
        );
    }

    #[test]
    fn long_path_takes_shortcut() {
        // Diameter 39 beats the root threshold 16 for k = 1, r = 1.
        let (answer, stats) = run(path(40), 1, 1, 3);
        assert!(answer.is_yes());
        assert_eq!(stats.early_exits.len(), 1);
        assert!(stats.widths.is_empty());
    }

    #[test]
    fn long_path_two_centers() {
        let (answer, stats) = run(path(60), 2, 1, 6);
        let Answer::Yes { centers, covered } = answer else {
            panic!("expected YES")
        };
        assert_eq!(centers.len(), 2);
        assert_eq!(covered, 6);
        assert!(stats.recursive_calls <= 4);
    }

    #[test]
    fn pds_star() {
        let g = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        let (answer, _) = solve_pds(&g, 1, 5, Mode::Planar).unwrap();
        assert_eq!(
            answer,
            Answer::Yes {
                centers: VertexSet::from([0]),
                covered: 5
            }
        );
    }

    #[test]
    fn psc_small() {
        let system = SetSystem {
            universe: 5,
            sets: vec![vec![0, 1], vec![1, 2, 3], vec![3, 4]],
        };
        let (answer, _) = solve_psc(&system, 3, 5, Mode::General).unwrap();
        let Answer::Yes { covered, .. } = answer else {
            panic!("expected YES")
        };
        assert_eq!(covered, 5);
        assert_eq!(
            solve_psc(&system, 2, 5, Mode::General).unwrap().0,
            Answer::No
        );
        assert!(solve_psc(&system, 2, 4, Mode::General).unwrap().0.is_yes());
        assert_eq!(
            solve_psc(&system, 1, 4, Mode::General).unwrap().0,
            Answer::No
        );
        let bad = SetSystem {
            universe: 2,
            sets: vec![vec![5]],
        };
        assert!(solve_psc(&bad, 1, 1, Mode::General).is_err());
    }

    #[test]
    fn pvc_as_set_cover() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let system = SetSystem::from_graph_edges(&g);
        assert!(solve_psc(&system, 2, 3, Mode::General).unwrap().0.is_yes());
        assert_eq!(
            solve_psc(&system, 1, 3, Mode::General).unwrap().0,
            Answer::No
        );
    }
}
