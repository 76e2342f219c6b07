//! Seeded graph generators.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::pvc::{find_triangle, verify_hint, ClassHint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator spec `{0}`")]
    Spec(String),
    #[error("generated graph fails its family check: {0}")]
    Family(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenSpec {
    Grid {
        rows: usize,
        cols: usize,
    },
    Path(usize),
    /// `n` vertices: one center and `n - 1` leaves.
    Star(usize),
    Gnp {
        n: usize,
        p: f64,
    },
    Bipartite {
        a: usize,
        b: usize,
        p: f64,
    },
    TriangleFree {
        n: usize,
        p: f64,
    },
}

impl FromStr for GenSpec {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        let bad = || GenError::Spec(s.to_string());
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let int = |i: usize| {
            parts
                .get(i)
                .and_then(|x| x.parse::<usize>().ok())
                .ok_or_else(bad)
        };
        let prob = |i: usize| {
            parts
                .get(i)
                .and_then(|x| x.parse::<f64>().ok())
                .filter(|p| (0.0..=1.0).contains(p))
                .ok_or_else(bad)
        };
        let arity = |k: usize| if parts.len() == k { Ok(()) } else { Err(bad()) };
        let spec = match kind {
            "grid" => {
                arity(1)?;
                let (r, c) = args.split_once('x').ok_or_else(bad)?;
                GenSpec::Grid {
                    rows: r.parse().map_err(|_| bad())?,
                    cols: c.parse().map_err(|_| bad())?,
                }
            }
            "path" => {
                arity(1)?;
                GenSpec::Path(int(0)?)
            }
            "star" => {
                arity(1)?;
                GenSpec::Star(int(0)?)
            }
            "gnp" => {
                arity(2)?;
                GenSpec::Gnp {
                    n: int(0)?,
                    p: prob(1)?,
                }
            }
            "bipartite" => {
                arity(3)?;
                GenSpec::Bipartite {
                    a: int(0)?,
                    b: int(1)?,
                    p: prob(2)?,
                }
            }
            "trianglefree" => {
                arity(2)?;
                GenSpec::TriangleFree {
                    n: int(0)?,
                    p: prob(1)?,
                }
            }
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

/// Builds the graph for `spec`, deterministic in `seed`, and checks the
/// family's defining property.
pub fn generate(spec: GenSpec, seed: u64) -> Result<Graph, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, edges): (usize, Vec<(Vertex, Vertex)>) = match spec {
        GenSpec::Grid { rows, cols } => {
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
            (rows * cols, e)
        }
        GenSpec::Path(n) => (n, (1..n).map(|i| (i - 1, i)).collect()),
        GenSpec::Star(n) => (n, (1..n).map(|i| (0, i)).collect()),
        GenSpec::Gnp { n, p } => (
            n,
            (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(p))
                .collect(),
        ),
        GenSpec::Bipartite { a, b, p } => (
            a + b,
            (0..a)
                .flat_map(|u| (a..a + b).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(p))
                .collect(),
        ),
        GenSpec::TriangleFree { n, p } => {
            // Pairs in random order; a pair is kept when the coin says so and
            // it closes no triangle.
            let mut adj = vec![vec![false; n]; n];
            let mut pairs: Vec<(Vertex, Vertex)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            pairs.shuffle(&mut rng);
            let mut e = Vec::new();
            for (u, v) in pairs {
                if rng.gen_bool(p) && !(0..n).any(|x| adj[u][x] && adj[v][x]) {
                    adj[u][v] = true;
                    adj[v][u] = true;
                    e.push((u, v));
                }
            }
            e.sort_unstable();
            (n, e)
        }
    };
    let g = Graph::from_edges(n, edges).map_err(|e| GenError::Family(e.to_string()))?;
    let check = match spec {
        GenSpec::Grid { .. } | GenSpec::Path(_) | GenSpec::Star(_) | GenSpec::Bipartite { .. } => {
            verify_hint(&g, ClassHint::Bipartite)
        }
        GenSpec::TriangleFree { .. } => match find_triangle(&g) {
            Some(tri) => Err(crate::pvc::PvcError::Triangle(tri)),
            None => Ok(()),
        },
        GenSpec::Gnp { .. } => Ok(()),
    };
    check.map_err(|e| GenError::Family(e.to_string()))?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(s: &str, seed: u64) -> Graph {
        generate(s.parse().unwrap(), seed).unwrap()
    }

    #[test]
    fn fixed_families() {
        let grid = gen("grid:3x3", 0);
        assert_eq!((grid.vertex_count(), grid.edge_count()), (9, 12));
        let p = gen("path:5", 0);
        assert_eq!(
            p.edges().collect::<Vec<_>>(),
            vec![(0, 1), (1, 2), (2, 3), (3, 4)]
        );
        let s = gen("star:5", 0);
        assert_eq!((s.vertex_count(), s.edge_count(), s.degree(0)), (5, 4, 4));
        let k33 = gen("bipartite:3,3,1.0", 7);
        assert_eq!(k33.edge_count(), 9);
        assert!(verify_hint(&k33, ClassHint::Bipartite).is_ok());
    }

    #[test]
    fn random_families_are_seeded() {
        assert_eq!(gen("gnp:12,0.4", 3), gen("gnp:12,0.4", 3));
        assert_ne!(gen("gnp:12,0.4", 3), gen("gnp:12,0.4", 4));
        for seed in 0..20 {
            assert!(find_triangle(&gen("trianglefree:12,0.6", seed)).is_none());
        }
    }

    #[test]
    fn rejects_bad_specs() {
        for s in [
            "grid:3",
            "path:x",
            "gnp:5",
            "gnp:5,1.5",
            "cube:3",
            "bipartite:1,2",
            "path",
        ] {
            assert!(s.parse::<GenSpec>().is_err(), "{s}");
        }
    }
}
