//! Command-line driver: flag handling, solver dispatch and the result record.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use log::{info, warn};
use serde::Serialize;
use thiserror::Error;

use crate::center::{self, Answer, CenterInstance, Mode, SetSystem, SolveStats};
use crate::center_dp::ConstraintList;
use crate::generate::{generate, GenError, GenSpec};
use crate::graph::{Graph, Weights};
use crate::instance::{self, Instance, ParseError};
use crate::oracle::{self, OracleError};
use crate::pvc::{self, ClassHint, PvcAnswer, PvcError, PvcStats};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Pvc,
    Pds,
    Center,
    Psc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Bipartite,
    Trianglefree,
    Planar,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    General,
    Planar,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "pcover",
    version,
    about = "Partial vertex cover, partial dominating set and partial center solvers"
)]
pub struct Args {
    #[arg(long, value_enum)]
    pub problem: Problem,
    /// Maximum number of chosen vertices (or sets).
    #[arg(long)]
    pub k: usize,
    /// Target: edges for pvc and psc, covered weight for pds and center.
    #[arg(long)]
    pub t: u64,
    /// Radius; center only (pds fixes it to 1).
    #[arg(long)]
    pub r: Option<usize>,
    /// Graph class hint for pvc; verified before solving.
    #[arg(long, value_enum)]
    pub class: Option<Class>,
    /// Shortcut rule for pds, center and psc.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    pub input: Option<PathBuf>,
    /// Generator spec: grid:RxC, path:N, star:N, gnp:N,P, bipartite:A,B,P, trianglefree:N,P.
    #[arg(long)]
    pub gen: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cross-check the answer against exhaustive search when small enough.
    #[arg(long)]
    pub oracle: bool,
    /// Include wall time in the record (makes records run dependent).
    #[arg(long)]
    pub timing: bool,
    /// Write the instance in canonical text form to this file.
    #[arg(long)]
    pub emit_instance: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Class(#[from] PvcError),
    #[error(transparent)]
    Center(#[from] center::CenterError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Params {
    pub k: usize,
    pub t: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<Class>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeArg>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Source {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gen: Option<String>,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterStatsRecord {
    pub recursive_calls: u64,
    pub call_bound: u64,
    pub deepest_family: usize,
    pub widths: Vec<usize>,
    pub max_width: Option<usize>,
    pub early_exits: usize,
    pub shortcut_misses: usize,
    pub invalid_decompositions: usize,
    pub family_violations: usize,
    pub dp_max_states: usize,
    pub dp_bound_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PvcStatsRecord {
    pub recursive_calls: u64,
    pub max_branch_width: usize,
    pub xi_bound: Option<usize>,
    pub width_violations: usize,
    pub independence_violations: usize,
    pub independent_exits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum StatsRecord {
    Center(CenterStatsRecord),
    Pvc(PvcStatsRecord),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleRecord {
    pub checked: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_value: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub problem: Problem,
    pub params: Params,
    pub source: Source,
    /// `"YES"` or `"NO"`.
    pub answer: &'static str,
    /// Chosen vertices (or sets, for psc), 1-indexed.
    pub witness: Option<Vec<usize>>,
    pub covered: Option<u64>,
    pub stats: StatsRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl ResultRecord {
    pub fn exit_code(&self) -> i32 {
        match (&self.oracle, self.answer) {
            (
                Some(OracleRecord {
                    agrees: Some(false),
                    ..
                }),
                _,
            ) => EXIT_MISMATCH,
            (_, "YES") => EXIT_YES,
            _ => EXIT_NO,
        }
    }
}

fn check_flags(args: &Args) -> Result<(), CliError> {
    let usage = |m: &str| Err(CliError::Usage(m.to_string()));
    match args.problem {
        Problem::Pvc | Problem::Psc if args.r.is_some() => {
            usage("--r applies to center (and pds with r = 1) only")
        }
        Problem::Pds if args.r.is_some_and(|r| r != 1) => usage("pds fixes r = 1"),
        Problem::Center if args.r.is_none() => usage("center needs --r"),
        Problem::Pds | Problem::Center | Problem::Psc if args.class.is_some() => {
            usage("--class applies to pvc only")
        }
        Problem::Pvc if args.mode.is_some() => usage("--mode does not apply to pvc"),
        _ => Ok(()),
    }
}

fn load(args: &Args) -> Result<Instance, CliError> {
    if let Some(path) = &args.input {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        return Ok(instance::parse(&text)?);
    }
    let spec: GenSpec = args
        .gen
        .as_deref()
        .expect("clap requires --input or --gen")
        .parse()?;
    let graph = generate(spec, args.seed)?;
    let weights = Weights::uniform(graph.vertex_count());
    Ok(Instance { graph, weights })
}

fn hint(class: Option<Class>) -> ClassHint {
    match class {
        Some(Class::Bipartite) => ClassHint::Bipartite,
        Some(Class::Trianglefree) => ClassHint::TriangleFree,
        Some(Class::Planar) => ClassHint::PLANAR,
        Some(Class::General) | None => ClassHint::General,
    }
}

fn one_indexed(s: &crate::VertexSet) -> Vec<usize> {
    s.iter().map(|v| v + 1).collect()
}

fn center_stats(s: &SolveStats, k: usize) -> StatsRecord {
    StatsRecord::Center(CenterStatsRecord {
        recursive_calls: s.recursive_calls,
        call_bound: 1u64 << k.min(63),
        deepest_family: s.deepest_family,
        widths: s.widths.clone(),
        max_width: s.max_width(),
        early_exits: s.early_exits.len(),
        shortcut_misses: s.shortcut_misses,
        invalid_decompositions: s.invalid_decompositions,
        family_violations: s.family_violations,
        dp_max_states: s.dp.max_states,
        dp_bound_violations: s.dp.bound_violations,
    })
}

fn pvc_stats(s: &PvcStats, k: usize, hint: ClassHint) -> StatsRecord {
    StatsRecord::Pvc(PvcStatsRecord {
        recursive_calls: s.recursive_calls,
        max_branch_width: s.max_branch_width,
        xi_bound: hint.xi(k),
        width_violations: s.width_violations,
        independence_violations: s.independence_violations,
        independent_exits: s.independent_exits.len(),
    })
}

fn oracle_record(result: Result<oracle::OracleResult, OracleError>, yes: bool) -> OracleRecord {
    match result {
        Ok(res) => OracleRecord {
            checked: true,
            agrees: Some(res.feasible == yes),
            best_value: Some(res.best_value),
            reason: None,
        },
        Err(e) => OracleRecord {
            checked: false,
            agrees: None,
            best_value: None,
            reason: Some(e.to_string()),
        },
    }
}

/// Runs one solve as described by `args`.
pub fn run(args: &Args) -> Result<ResultRecord, CliError> {
    check_flags(args)?;
    let inst = load(args)?;
    if let Some(path) = &args.emit_instance {
        std::fs::write(path, instance::serialize(&inst)).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    let g: &Graph = &inst.graph;
    info!(
        "{:?}: n = {}, m = {}, k = {}, t = {}",
        args.problem,
        g.vertex_count(),
        g.edge_count(),
        args.k,
        args.t
    );
    let mode = match args.mode {
        Some(ModeArg::Planar) => Mode::Planar,
        _ => Mode::General,
    };
    let started = Instant::now();

    let (witness, covered, stats, oracle) = match args.problem {
        Problem::Pvc => {
            let hint = hint(args.class);
            let (answer, stats) = pvc::solve_pvc(g, args.k, args.t, hint)?;
            let (witness, covered) = match &answer {
                PvcAnswer::Yes { cover, covered } => {
                    (Some(one_indexed(cover)), Some(*covered as u64))
                }
                PvcAnswer::No => (None, None),
            };
            let oracle = args
                .oracle
                .then(|| oracle_record(oracle::brute_pvc(g, args.k, args.t), answer.is_yes()));
            (witness, covered, pvc_stats(&stats, args.k, hint), oracle)
        }
        Problem::Pds | Problem::Center => {
            let (weights, r) = if args.problem == Problem::Pds {
                if inst.weights.as_slice().contains(&0) {
                    warn!("pds counts every vertex; weight lines are ignored");
                }
                (Weights::uniform(g.vertex_count()), 1)
            } else {
                (inst.weights.clone(), args.r.expect("checked"))
            };
            let ci = CenterInstance::new(g.clone(), weights.clone(), args.k, r, args.t, mode);
            let (answer, stats) = center::solve(&ci)?;
            let (witness, covered) = match &answer {
                Answer::Yes { centers, covered } => (Some(one_indexed(centers)), Some(*covered)),
                Answer::No => (None, None),
            };
            let oracle = args.oracle.then(|| {
                oracle_record(
                    oracle::brute_center(g, &weights, args.k, r, args.t, &ConstraintList::empty()),
                    answer.is_yes(),
                )
            });
            (witness, covered, center_stats(&stats, args.k), oracle)
        }
        Problem::Psc => {
            // Sets are vertices, elements are the edges they touch.
            let system = SetSystem::from_graph_edges(g);
            let (answer, stats) = center::solve_psc(&system, args.k, args.t, mode)?;
            let (witness, covered) = match &answer {
                Answer::Yes { centers, covered } => (Some(one_indexed(centers)), Some(*covered)),
                Answer::No => (None, None),
            };
            let oracle = args
                .oracle
                .then(|| oracle_record(oracle::brute_pvc(g, args.k, args.t), answer.is_yes()));
            (witness, covered, center_stats(&stats, args.k), oracle)
        }
    };

    let elapsed = started.elapsed();
    let record = ResultRecord {
        problem: args.problem,
        params: Params {
            k: args.k,
            t: args.t,
            r: match args.problem {
                Problem::Pds => Some(1),
                Problem::Center => args.r,
                _ => None,
            },
            class: (args.problem == Problem::Pvc).then(|| args.class.unwrap_or(Class::General)),
            mode: (args.problem != Problem::Pvc).then(|| args.mode.unwrap_or(ModeArg::General)),
        },
        source: Source {
            input: args.input.as_ref().map(|p| p.display().to_string()),
            gen: args.gen.clone(),
            seed: args.seed,
            n: g.vertex_count(),
            m: g.edge_count(),
        },
        answer: if witness.is_some() { "YES" } else { "NO" },
        witness,
        covered,
        stats,
        oracle,
        wall_time_ms: args.timing.then_some(elapsed.as_secs_f64() * 1000.0),
    };
    if let Some(OracleRecord {
        agrees: Some(false),
        best_value,
        ..
    }) = &record.oracle
    {
        warn!(
            "solver answered {} but exhaustive search found best value {best_value:?}",
            record.answer
        );
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(line: &str) -> Args {
        Args::try_parse_from(std::iter::once("pcover").chain(line.split_whitespace())).unwrap()
    }

    #[test]
    fn pds_on_path() {
        let rec = run(&args("--problem pds --k 1 --t 3 --gen path:5 --oracle")).unwrap();
        assert_eq!(rec.answer, "YES");
        let w = rec.witness.clone().unwrap();
        assert_eq!(w.len(), 1);
        assert!((2..=4).contains(&w[0]));
        assert_eq!(rec.exit_code(), EXIT_YES);
        assert_eq!(rec.oracle.unwrap().agrees, Some(true));
    }

    #[test]
    fn center_no() {
        let rec = run(&args(
            "--problem center --k 1 --r 1 --t 4 --gen path:5 --oracle",
        ))
        .unwrap();
        assert_eq!(rec.answer, "NO");
        assert_eq!(rec.witness, None);
        assert_eq!(rec.exit_code(), EXIT_NO);
    }

    #[test]
    fn pvc_trivial() {
        let rec = run(&args(
            "--problem pvc --k 0 --t 0 --gen grid:2x3 --class bipartite",
        ))
        .unwrap();
        assert_eq!(rec.answer, "YES");
        assert_eq!(rec.witness, Some(vec![]));
    }

    #[test]
    fn psc_matches_pvc() {
        let a = run(&args("--problem psc --k 2 --t 5 --gen grid:2x3 --oracle")).unwrap();
        let b = run(&args("--problem pvc --k 2 --t 5 --gen grid:2x3 --oracle")).unwrap();
        assert_eq!(a.answer, b.answer);
        assert_eq!(a.oracle.unwrap().agrees, Some(true));
    }

    #[test]
    fn inconsistent_flags() {
        for line in [
            "--problem pvc --k 1 --t 1 --r 1 --gen path:3",
            "--problem pds --k 1 --t 1 --r 2 --gen path:3",
            "--problem center --k 1 --t 1 --gen path:3",
            "--problem center --k 1 --t 1 --r 1 --class bipartite --gen path:3",
            "--problem pvc --k 1 --t 1 --mode planar --gen path:3",
        ] {
            assert!(
                matches!(run(&args(line)), Err(CliError::Usage(_))),
                "{line}"
            );
        }
        assert!(matches!(
            run(&args(
                "--problem pvc --k 1 --t 1 --class bipartite --gen gnp:6,1.0"
            )),
            Err(CliError::Class(_))
        ));
        assert!(
            Args::try_parse_from(["pcover", "--problem", "pvc", "--k", "1", "--t", "1"]).is_err()
        );
    }
}
