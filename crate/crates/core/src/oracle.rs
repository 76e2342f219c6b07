//! Exhaustive reference solvers. They share nothing with the solvers beyond
//! the `Graph` type: distances come from Floyd–Warshall, and every candidate
//! set is enumerated.

use thiserror::Error;

use crate::center_dp::ConstraintList;
use crate::graph::{Graph, Vertex, VertexSet, Weights};

pub const PVC_CAP: usize = 20;
pub const CENTER_CAP: usize = 16;
pub const SCATTER_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {size} elements, oracle cap is {cap}")]
    TooLarge { size: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Some admissible set reaches the target.
    pub feasible: bool,
    /// Best objective over all admissible sets (0 if there are none).
    pub best_value: u64,
    /// All admissible sets attaining `best_value`, in lexicographic order;
    /// empty when infeasible.
    pub witnesses: Vec<VertexSet>,
}

/// All-pairs distances; `usize::MAX` between components.
pub fn distance_matrix(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut d = vec![vec![usize::MAX; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (u, v) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for m in 0..n {
        for a in 0..n {
            if d[a][m] == usize::MAX {
                continue;
            }
            for b in 0..n {
                if d[m][b] != usize::MAX && d[a][m] + d[m][b] < d[a][b] {
                    d[a][b] = d[a][m] + d[m][b];
                }
            }
        }
    }
    d
}

/// Subsets of `0..n` of size at most `k`, as bitmasks, in lexicographic order
/// of their sorted element lists.
fn subsets_up_to(n: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<u32>) {
        out.push(cur.iter().fold(0u32, |m, &v| m | 1 << v));
        if cur.len() == k {
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn mask_to_set(mask: u32) -> VertexSet {
    (0..32).filter(|&v| mask & (1 << v) != 0).collect()
}

fn collect(candidates: impl Iterator<Item = (u32, u64)>, t: u64) -> OracleResult {
    let mut best_value = 0;
    let mut witnesses: Vec<u32> = Vec::new();
    let mut any = false;
    for (mask, value) in candidates {
        if !any || value > best_value {
            any = true;
            best_value = value;
            witnesses.clear();
        }
        if value == best_value {
            witnesses.push(mask);
        }
    }
    let feasible = any && best_value >= t;
    let mut witnesses: Vec<VertexSet> = if feasible {
        witnesses.into_iter().map(mask_to_set).collect()
    } else {
        Vec::new()
    };
    witnesses.sort();
    OracleResult {
        feasible,
        best_value,
        witnesses,
    }
}

/// Partial vertex cover by enumeration: the most edges touched by at most
/// `k` vertices.
pub fn brute_pvc(g: &Graph, k: usize, t: u64) -> Result<OracleResult, OracleError> {
    let n = g.vertex_count();
    if n > PVC_CAP {
        return Err(OracleError::TooLarge {
            size: n,
            cap: PVC_CAP,
        });
    }
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let subsets = subsets_up_to(n, k.min(n));
    Ok(collect(
        subsets.into_iter().map(|mask| {
            let touched = edges
                .iter()
                .filter(|&&(u, v)| mask & (1 << u) != 0 || mask & (1 << v) != 0)
                .count();
            (mask, touched as u64)
        }),
        t,
    ))
}

/// Weighted partial center by enumeration over all sets of at most `k`
/// vertices meeting every constraint count exactly.
pub fn brute_center(
    g: &Graph,
    w: &Weights,
    k: usize,
    r: usize,
    t: u64,
    constraints: &ConstraintList,
) -> Result<OracleResult, OracleError> {
    let n = g.vertex_count();
    if n > CENTER_CAP {
        return Err(OracleError::TooLarge {
            size: n,
            cap: CENTER_CAP,
        });
    }
    let d = distance_matrix(g);
    let balls: Vec<u32> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| d[v][u] <= r)
                .fold(0u32, |m, u| m | 1 << u)
        })
        .collect();
    let masks: Vec<u32> = constraints
        .as_slice()
        .iter()
        .map(|c| c.set.iter().fold(0u32, |m, v| m | 1 << v))
        .collect();
    let subsets = subsets_up_to(n, k.min(n));
    Ok(collect(
        subsets
            .into_iter()
            .filter(|&mask| {
                masks
                    .iter()
                    .zip(constraints.as_slice())
                    .all(|(m, c)| (mask & m).count_ones() as usize == c.count)
            })
            .map(|mask| {
                let covered = (0..n)
                    .filter(|&v| mask & (1 << v) != 0)
                    .fold(0u32, |acc, v| acc | balls[v]);
                let value = (0..n)
                    .filter(|&u| covered & (1 << u) != 0)
                    .map(|u| w.get(u))
                    .sum();
                (mask, value)
            }),
        t,
    ))
}

/// Whether some `target`-subset of `candidates` is pairwise at distance at
/// least `2r + 1` and at distance at least `2r + 1` from every forbidden
/// vertex.
pub fn brute_scattered(
    g: &Graph,
    candidates: &VertexSet,
    forbidden: &VertexSet,
    r: usize,
    target: usize,
) -> Result<bool, OracleError> {
    if candidates.len() > SCATTER_CAP {
        return Err(OracleError::TooLarge {
            size: candidates.len(),
            cap: SCATTER_CAP,
        });
    }
    if target > candidates.len() {
        return Ok(false);
    }
    let d = distance_matrix(g);
    let far = |a: Vertex, b: Vertex| d[a][b] == usize::MAX || d[a][b] > 2 * r;
    let cand: Vec<Vertex> = candidates
        .iter()
        .filter(|&c| forbidden.iter().all(|f| far(c, f)))
        .collect();
    let m = cand.len();
    Ok((0u32..1 << m).any(|mask| {
        mask.count_ones() as usize == target
            && (0..m).all(|i| {
                mask & (1 << i) == 0
                    || (i + 1..m).all(|j| mask & (1 << j) == 0 || far(cand[i], cand[j]))
            })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::center_dp::Constraint;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn pvc_examples() {
        let star = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        let res = brute_pvc(&star, 1, 4).unwrap();
        assert_eq!(res.best_value, 4);
        assert_eq!(res.witnesses, vec![VertexSet::from([0])]);
        assert_eq!(brute_pvc(&Graph::empty(4), 3, 0).unwrap().best_value, 0);
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(brute_pvc(&tri, 2, 3).unwrap().best_value, 3);
        assert!(brute_pvc(&Graph::empty(21), 1, 0).is_err());
    }

    #[test]
    fn center_examples() {
        let p = path(5);
        let w = Weights::uniform(5);
        let none = ConstraintList::empty();
        assert_eq!(brute_center(&p, &w, 1, 1, 0, &none).unwrap().best_value, 3);
        let zero = brute_center(&p, &w, 0, 1, 0, &none).unwrap();
        assert_eq!(zero.best_value, 0);
        assert_eq!(zero.witnesses, vec![VertexSet::new()]);
        assert_eq!(brute_center(&p, &w, 2, 1, 0, &none).unwrap().best_value, 5);
        let forced = ConstraintList::new(vec![Constraint::new([0], 1)]).unwrap();
        assert_eq!(
            brute_center(&p, &w, 1, 1, 0, &forced).unwrap().best_value,
            2
        );
    }

    #[test]
    fn scattered_examples() {
        let p9 = path(9);
        assert!(
            brute_scattered(&p9, &VertexSet::from([0, 4, 8]), &VertexSet::new(), 1, 3).unwrap()
        );
        assert!(!brute_scattered(&p9, &VertexSet::from([0, 4]), &VertexSet::new(), 1, 3).unwrap());
        let p5 = path(5);
        assert!(!brute_scattered(
            &p5,
            &VertexSet::from([0, 1, 2]),
            &VertexSet::from([4]),
            1,
            2
        )
        .unwrap());
    }
}
