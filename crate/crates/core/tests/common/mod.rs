//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use pcover::graph::ball_weight;
use pcover::oracle::distance_matrix;
use pcover::{Graph, VertexSet, Weights};
use rand::Rng;

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut e = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                e.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                e.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, e).unwrap()
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

fn from_mask(n: usize, pairs: &[(usize, usize)], mask: u32) -> Graph {
    Graph::from_edges(
        n,
        pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e),
    )
    .unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn connected(g: &Graph) -> bool {
    g.vertex_count() == 0 || g.bfs_from([0], None).iter().all(|&d| d != usize::MAX)
}

/// One representative per isomorphism class of connected graphs on
/// `1..=max_n` vertices, found by minimizing the edge mask over all
/// relabelings.
pub fn connected_graphs_up_to_iso(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let ps = pairs(n);
        let index =
            |u: usize, v: usize| ps.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
        let perms = permutations(n);
        let images: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| ps.iter().map(|&(u, v)| index(p[u], p[v])).collect())
            .collect();
        let mut seen = BTreeSet::new();
        for mask in 0u32..1 << ps.len() {
            let g = from_mask(n, &ps, mask);
            if !connected(&g) {
                continue;
            }
            let canon = images
                .iter()
                .map(|img| {
                    img.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .fold(0u32, |m, (_, &j)| m | 1 << j)
                })
                .min()
                .unwrap();
            if seen.insert(canon) {
                out.push(from_mask(n, &ps, canon));
            }
        }
    }
    out
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    Graph::from_edges(n, pairs(n).into_iter().filter(|_| rng.gen_bool(p))).unwrap()
}

pub fn random_weights(rng: &mut impl Rng, n: usize) -> Weights {
    Weights::new((0..n).map(|_| u8::from(rng.gen_bool(0.7))).collect()).unwrap()
}

/// Pairwise distances of `set` are all at least `2r + 1`, as are distances
/// from `set` to `other`.
pub fn scattered(g: &Graph, set: &VertexSet, other: &VertexSet, r: usize) -> bool {
    let d = distance_matrix(g);
    let far = |a: usize, b: usize| d[a][b] > 2 * r;
    set.iter()
        .all(|a| set.iter().all(|b| a == b || far(a, b)) && other.iter().all(|b| far(a, b)))
}

pub fn covered(g: &Graph, w: &Weights, c: &VertexSet, r: usize) -> u64 {
    ball_weight(g, w, c, r).unwrap()
}
