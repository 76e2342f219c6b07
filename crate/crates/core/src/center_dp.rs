//! Dynamic programming over a nice tree decomposition for weighted partial
//! `(k, r, t)`-centers with exact per-set selection counts.
//!
//! Every bag vertex carries a claimed distance label: `0` for a center, or
//! `j` in `1..=r` meaning "within distance `j` of some center". A label `j`
//! is *supported* once a neighbor with label at most `j - 1` has been seen;
//! following supports strictly decreases labels, so a supported claim is a
//! real path to a center. The colors are
//!
//! * `CENTER` (label 0),
//! * `UP_j`: label `j`, support still owed by a vertex not yet introduced,
//! * `DOWN_j`: label `j`, already supported.
//!
//! A vertex is scored when it is forgotten: centers and `DOWN_j` vertices add
//! their weight, `UP_j` with `j < r` is an unpaid promise and the state dies.
//! `UP_r` supports nobody (no label exceeds `r`), so forgetting it unpaid is
//! harmless: it is the uncovered state, and the alphabet stays at `2r + 1`
//! colors. With `r = 0` there are no distance labels and the alphabet is
//! `{CENTER, NEUTRAL}`.
//!
//! Table keys are the bag coloring plus one selection counter per constraint
//! and one for free centers (those outside every constraint set). Values are
//! the weight of forgotten covered vertices together with the forgotten
//! centers, which makes witness reconstruction trivial and lets equal-weight
//! states be ordered deterministically.

use std::collections::hash_map::Entry as MapEntry;
use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, VertexSet, Weights};
use crate::treewidth::{NiceDecomposition, NiceKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DpError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("constraint sets {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("constraint set {0} is empty")]
    EmptySet(usize),
    #[error("constraints select {selected} vertices but k = {k}")]
    TooManySelections { selected: usize, k: usize },
    #[error("k = {0} exceeds the supported maximum of 255")]
    KTooLarge(usize),
    #[error("radius {0} exceeds the supported maximum of 127")]
    RadiusTooLarge(usize),
    #[error("decomposition does not cover vertex {0}")]
    Uncovered(Vertex),
}

/// Require exactly `count` centers inside `set`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub set: VertexSet,
    pub count: usize,
}

impl Constraint {
    pub fn new(set: impl Into<VertexSet>, count: usize) -> Self {
        Constraint {
            set: set.into(),
            count,
        }
    }
}

/// Constraints with pairwise disjoint, nonempty sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintList(Vec<Constraint>);

impl ConstraintList {
    pub fn new(list: Vec<Constraint>) -> Result<Self, DpError> {
        for (i, c) in list.iter().enumerate() {
            if c.set.is_empty() {
                return Err(DpError::EmptySet(i));
            }
            if let Some(j) = list[..i].iter().position(|d| !d.set.is_disjoint(&c.set)) {
                return Err(DpError::Overlap(j, i));
            }
        }
        Ok(ConstraintList(list))
    }

    pub fn empty() -> Self {
        ConstraintList(Vec::new())
    }

    pub fn as_slice(&self) -> &[Constraint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of required selections.
    pub fn total(&self) -> usize {
        self.0.iter().map(|c| c.count).sum()
    }

    /// Union of all constraint sets.
    pub fn union(&self) -> VertexSet {
        self.0.iter().flat_map(|c| c.set.iter()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterWitness {
    pub centers: VertexSet,
    pub covered: u64,
}

/// Table measurements of one DP run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DpStats {
    pub nodes: usize,
    pub max_states: usize,
    pub max_bag: usize,
    /// Nodes whose table exceeded `(2r+1)^bag * prod(a_i + 1) * (k + 1)`.
    pub bound_violations: usize,
}

impl DpStats {
    pub fn absorb(&mut self, other: &DpStats) {
        self.nodes += other.nodes;
        self.max_states = self.max_states.max(other.max_states);
        self.max_bag = self.max_bag.max(other.max_bag);
        self.bound_violations += other.bound_violations;
    }
}

/// Result of [`max_mu`]: entry `j - 1` is the best weight with exactly `j`
/// selections in the sweep set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuSweep {
    pub entries: Vec<Option<CenterWitness>>,
    pub stats: DpStats,
}

/// Decides whether some `C` with `|C| <= k`, `|C ∩ S_i| = a_i` for every
/// constraint and radius-`r` ball weight at least `t` exists. When it does,
/// the returned witness has the maximum covered weight under the constraints;
/// ties go to fewer centers, then to the lexicographically smallest set.
pub fn dp_partial_center(
    g: &Graph,
    nd: &NiceDecomposition,
    w: &Weights,
    k: usize,
    r: usize,
    t: u64,
    constraints: &ConstraintList,
) -> Result<Option<CenterWitness>, DpError> {
    dp_partial_center_with_stats(g, nd, w, k, r, t, constraints).map(|(c, _)| c)
}

pub fn dp_partial_center_with_stats(
    g: &Graph,
    nd: &NiceDecomposition,
    w: &Weights,
    k: usize,
    r: usize,
    t: u64,
    constraints: &ConstraintList,
) -> Result<(Option<CenterWitness>, DpStats), DpError> {
    let selected = constraints.total();
    if selected > k {
        return Err(DpError::TooManySelections { selected, k });
    }
    let slots: Vec<(VertexSet, usize)> = constraints
        .as_slice()
        .iter()
        .map(|c| (c.set.clone(), c.count))
        .collect();
    let free = k - selected;
    let p = slots.len();
    let run = Run::new(g, w, r, &slots, free, k)?;
    let (root, stats) = run.execute(nd)?;

    let mut best: Option<Entry> = None;
    for (key, entry) in root {
        let counts = &key[..];
        if (0..p).any(|i| counts[i] as usize != slots[i].1) {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                entry.value > b.value
                    || entry.value == b.value
                        && (entry.witness.len() < b.witness.len()
                            || entry.witness.len() == b.witness.len() && entry.precedes(b))
            }
        };
        if better {
            best = Some(entry);
        }
    }
    let answer = best.filter(|b| b.value >= t).map(|b| CenterWitness {
        centers: b.witness.into_iter().collect(),
        covered: b.value,
    });
    Ok((answer, stats))
}

/// Best covered weight for every number `j` of selections from `sweep`,
/// with the `fixed` constraints met exactly and no other centers. Entries run
/// over `j = 1..=min(k_total - fixed.total(), |sweep|)`; an entry is `None`
/// when no selection meets the constraints.
pub fn max_mu(
    g: &Graph,
    nd: &NiceDecomposition,
    w: &Weights,
    k_total: usize,
    r: usize,
    fixed: &ConstraintList,
    sweep: &VertexSet,
) -> Result<MuSweep, DpError> {
    let selected = fixed.total();
    if selected > k_total {
        return Err(DpError::TooManySelections {
            selected,
            k: k_total,
        });
    }
    if let Some(i) = fixed
        .as_slice()
        .iter()
        .position(|c| !c.set.is_disjoint(sweep))
    {
        return Err(DpError::Overlap(i, fixed.len()));
    }
    let budget = (k_total - selected).min(sweep.len());
    if budget == 0 {
        return Ok(MuSweep {
            entries: Vec::new(),
            stats: DpStats::default(),
        });
    }
    let mut slots: Vec<(VertexSet, usize)> = fixed
        .as_slice()
        .iter()
        .map(|c| (c.set.clone(), c.count))
        .collect();
    slots.push((sweep.clone(), budget));
    let p = fixed.len();
    let run = Run::new(g, w, r, &slots, 0, k_total)?;
    let (root, stats) = run.execute(nd)?;

    let mut entries: Vec<Option<Entry>> = vec![None; budget];
    for (key, entry) in root {
        if (0..p).any(|i| key[i] as usize != slots[i].1) {
            continue;
        }
        let j = key[p] as usize;
        if j == 0 {
            continue;
        }
        let slot = &mut entries[j - 1];
        if slot.as_ref().is_none_or(|b| entry.beats(b)) {
            *slot = Some(entry);
        }
    }
    let entries = entries
        .into_iter()
        .map(|e| {
            e.map(|e| CenterWitness {
                centers: e.witness.into_iter().collect(),
                covered: e.value,
            })
        })
        .collect();
    Ok(MuSweep { entries, stats })
}

const CENTER: u8 = 0;
const NO_SLOT: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Entry {
    value: u64,
    /// Forgotten centers, sorted.
    witness: Vec<Vertex>,
}

impl Entry {
    /// The smallest vertex in exactly one of the two witnesses belongs to
    /// `self`. For equal-size sets this is lexicographic order, and it is
    /// unaffected by adding the same disjoint vertices to both sides.
    fn precedes(&self, other: &Entry) -> bool {
        let (a, b) = (&self.witness, &other.witness);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => return true,
                std::cmp::Ordering::Greater => return false,
            }
        }
        i < a.len()
    }

    fn beats(&self, other: &Entry) -> bool {
        self.value > other.value || self.value == other.value && self.precedes(other)
    }
}

type Table = HashMap<Vec<u8>, Entry>;

fn offer(table: &mut Table, key: Vec<u8>, entry: Entry) {
    match table.entry(key) {
        MapEntry::Vacant(v) => {
            v.insert(entry);
        }
        MapEntry::Occupied(mut o) => {
            if entry.beats(o.get()) {
                o.insert(entry);
            }
        }
    }
}

struct Run<'a> {
    g: &'a Graph,
    w: &'a Weights,
    r: u8,
    /// Slot of each vertex: constraint index, the free slot, or `NO_SLOT`.
    owner: Vec<usize>,
    /// Upper bound on each slot's counter; the free slot is last.
    limits: Vec<u8>,
    /// Factors of the table-size bound other than the coloring part.
    count_bound: u128,
}

impl<'a> Run<'a> {
    fn new(
        g: &'a Graph,
        w: &'a Weights,
        r: usize,
        slots: &[(VertexSet, usize)],
        free: usize,
        k: usize,
    ) -> Result<Self, DpError> {
        if k > 255 {
            return Err(DpError::KTooLarge(k));
        }
        w.check_for(g)?;
        let r = u8::try_from(r)
            .ok()
            .filter(|&r| r <= 127)
            .ok_or(DpError::RadiusTooLarge(r))?;
        let free_slot = slots.len();
        let mut owner = vec![if free > 0 { free_slot } else { NO_SLOT }; g.vertex_count()];
        for (i, (set, _)) in slots.iter().enumerate() {
            set.check_in(g)?;
            for v in set.iter() {
                owner[v] = i;
            }
        }
        let mut limits: Vec<u8> = slots.iter().map(|s| s.1.min(255) as u8).collect();
        limits.push(free as u8);
        let count_bound = slots
            .iter()
            .fold(k as u128 + 1, |acc, s| acc.saturating_mul(s.1 as u128 + 1));
        Ok(Run {
            g,
            w,
            r,
            owner,
            limits,
            count_bound,
        })
    }

    fn alphabet(&self) -> u128 {
        if self.r == 0 {
            2
        } else {
            2 * self.r as u128 + 1
        }
    }

    fn neutral(&self) -> u8 {
        1
    }

    fn up(&self, j: u8) -> u8 {
        j
    }

    fn down(&self, j: u8) -> u8 {
        self.r + j
    }

    /// Claimed distance of a color; `None` for the `r = 0` neutral color.
    fn label(&self, c: u8) -> Option<u8> {
        if c == CENTER {
            Some(0)
        } else if self.r == 0 {
            None
        } else if c <= self.r {
            Some(c)
        } else {
            Some(c - self.r)
        }
    }

    fn is_up(&self, c: u8) -> bool {
        self.r > 0 && c != CENTER && c <= self.r
    }

    fn execute(&self, nd: &NiceDecomposition) -> Result<(Table, DpStats), DpError> {
        let nodes = nd.nodes();
        let slots = self.limits.len();
        let mut seen = vec![false; self.g.vertex_count()];
        for x in nodes {
            if let NiceKind::Forget(v) = x.kind {
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(DpError::Uncovered(v));
        }

        // Remaining parent references per node, so child tables can be freed.
        let mut tables: Vec<Option<Table>> = vec![None; nodes.len()];
        let mut stats = DpStats::default();
        for (i, x) in nodes.iter().enumerate() {
            let table = match x.kind {
                NiceKind::Leaf => {
                    let mut t = Table::new();
                    t.insert(
                        vec![0; slots],
                        Entry {
                            value: 0,
                            witness: Vec::new(),
                        },
                    );
                    t
                }
                NiceKind::Introduce(v) => {
                    let child = tables[x.children[0]].take().expect("child table");
                    self.introduce(&x.bag, v, child)
                }
                NiceKind::Forget(v) => {
                    let child = tables[x.children[0]].take().expect("child table");
                    let child_bag = &nodes[x.children[0]].bag;
                    self.forget(child_bag, v, child)
                }
                NiceKind::Join => {
                    let left = tables[x.children[0]].take().expect("left table");
                    let right = tables[x.children[1]].take().expect("right table");
                    self.join(&x.bag, left, right)
                }
            };
            stats.nodes += 1;
            stats.max_states = stats.max_states.max(table.len());
            stats.max_bag = stats.max_bag.max(x.bag.len());
            let bound = (0..x.bag.len()).fold(self.count_bound, |acc, _| {
                acc.saturating_mul(self.alphabet())
            });
            if table.len() as u128 > bound {
                stats.bound_violations += 1;
            }
            tables[i] = Some(table);
        }
        let root = tables.pop().flatten().unwrap_or_default();
        Ok((root, stats))
    }

    fn introduce(&self, bag: &[Vertex], v: Vertex, child: Table) -> Table {
        let pos = bag.binary_search(&v).expect("introduced vertex in bag");
        let size = bag.len();
        let adjacent: Vec<usize> = (0..size)
            .filter(|&i| i != pos && self.g.has_edge(v, bag[i]))
            .collect();
        let slot = self.owner[v];

        let mut choices: Vec<u8> = Vec::new();
        if slot != NO_SLOT {
            choices.push(CENTER);
        }
        if self.r == 0 {
            choices.push(self.neutral());
        } else {
            choices.extend(1..=self.r);
        }

        let mut out = Table::with_capacity(child.len() * choices.len());
        for (key, entry) in child {
            let (colors, counts) = key.split_at(size - 1);
            for &choice in &choices {
                let mut next_counts = counts.to_vec();
                if choice == CENTER {
                    if next_counts[slot] >= self.limits[slot] {
                        continue;
                    }
                    next_counts[slot] += 1;
                }
                let mut next = Vec::with_capacity(size + counts.len());
                next.extend_from_slice(&colors[..pos]);
                next.push(choice);
                next.extend_from_slice(&colors[pos..]);
                let own = self.label(choice);
                if let Some(j) = own.filter(|&j| j > 0) {
                    let supported = adjacent
                        .iter()
                        .any(|&i| self.label(next[i]).is_some_and(|l| l < j));
                    next[pos] = if supported { self.down(j) } else { self.up(j) };
                }
                if let Some(l) = own {
                    for &i in &adjacent {
                        if self.is_up(next[i]) && l < next[i] {
                            next[i] = self.down(next[i]);
                        }
                    }
                }
                next.extend_from_slice(&next_counts);
                offer(&mut out, next, entry.clone());
            }
        }
        out
    }

    fn forget(&self, child_bag: &[Vertex], v: Vertex, child: Table) -> Table {
        let pos = child_bag
            .binary_search(&v)
            .expect("forgotten vertex in child bag");
        let weight = self.w.get(v);
        let mut out = Table::with_capacity(child.len());
        for (key, mut entry) in child {
            let c = key[pos];
            if c == CENTER {
                entry.value += weight;
                let at = entry.witness.binary_search(&v).unwrap_or_else(|p| p);
                entry.witness.insert(at, v);
            } else if self.is_up(c) {
                if c < self.r {
                    continue;
                }
            } else if self.r > 0 {
                entry.value += weight;
            }
            let mut next = key;
            next.remove(pos);
            offer(&mut out, next, entry);
        }
        out
    }

    fn join(&self, bag: &[Vertex], left: Table, right: Table) -> Table {
        let size = bag.len();
        let signature = |colors: &[u8]| -> Vec<u8> {
            colors
                .iter()
                .map(|&c| self.label(c).unwrap_or(u8::MAX))
                .collect()
        };
        let mut groups: HashMap<Vec<u8>, Vec<(Vec<u8>, Entry)>> = HashMap::new();
        for (key, entry) in right {
            groups
                .entry(signature(&key[..size]))
                .or_default()
                .push((key, entry));
        }
        let mut bag_centers = vec![0u8; self.limits.len()];
        let mut out = Table::new();
        for (lkey, lentry) in left {
            let Some(partners) = groups.get(&signature(&lkey[..size])) else {
                continue;
            };
            bag_centers.iter_mut().for_each(|c| *c = 0);
            for (i, &c) in lkey[..size].iter().enumerate() {
                if c == CENTER {
                    bag_centers[self.owner[bag[i]]] += 1;
                }
            }
            'pair: for (rkey, rentry) in partners {
                let mut next = Vec::with_capacity(lkey.len());
                for i in 0..size {
                    let (a, b) = (lkey[i], rkey[i]);
                    next.push(if self.is_up(a) && self.is_up(b) {
                        a
                    } else {
                        a.max(b)
                    });
                }
                for s in 0..self.limits.len() {
                    let total = u16::from(lkey[size + s]) + u16::from(rkey[size + s])
                        - u16::from(bag_centers[s]);
                    if total > u16::from(self.limits[s]) {
                        continue 'pair;
                    }
                    next.push(total as u8);
                }
                let mut witness = Vec::with_capacity(lentry.witness.len() + rentry.witness.len());
                witness.extend_from_slice(&lentry.witness);
                witness.extend_from_slice(&rentry.witness);
                witness.sort_unstable();
                let entry = Entry {
                    value: lentry.value + rentry.value,
                    witness,
                };
                offer(&mut out, next, entry);
            }
        }
        out
    }
}
