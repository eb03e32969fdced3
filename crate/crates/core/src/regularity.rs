//! Strong regularity, regularity, and the entropy lower bounds they certify.
//!
//! A *strong* witness is a block Q'×Σ' (|Σ'| ≥ 2) on which every transition
//! shifts the same way and stays in Q'; it certifies h ≥ log|Σ'|. A
//! *regular* witness is a pair of closed walks from a common vertex of one
//! ε-graph whose first edges differ; with a = 1 + Σ τ along the costlier
//! walk it certifies h ≥ log 2 / a.
//!
//! The search functions and the `verify_*` functions are deliberately
//! separate code paths: verification re-derives every clause from δ and φ.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::machine::{Direction, State, Symbol, TuringMachine};
use crate::phi::{eps_graph_from_table, phi, phi_table, Edge, EpsGraph, PhiOutcome};
use crate::scalar::Estimate;

/// Exact bound `log(log_of) / over` (natural log).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EntropyBound {
    pub log_of: u64,
    pub over: u64,
}

impl EntropyBound {
    pub fn new(log_of: u64, over: u64) -> Self {
        assert!(log_of >= 1 && over >= 1, "bound must be log p / q with p, q ≥ 1");
        EntropyBound { log_of, over }
    }

    pub fn value<F: Estimate>(&self) -> F {
        let p = F::from_u64(self.log_of).expect("u64 fits a float");
        let q = F::from_u64(self.over).expect("u64 fits a float");
        p.ln() / q
    }

    /// Exact comparison of log p1 / q1 with log p2 / q2, i.e. of p1^q2 with
    /// p2^q1.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let lhs = BigUint::from(self.log_of).pow(other.over as u32);
        let rhs = BigUint::from(other.log_of).pow(self.over as u32);
        lhs.cmp(&rhs)
    }

    /// True when `(log_of)^floor(n / over) ≤ count`, the word-count bound
    /// this certificate implies at length n.
    pub fn admits_count(&self, n: u64, count: u64) -> bool {
        let r = (n / self.over) as u32;
        BigUint::from(self.log_of).pow(r) <= BigUint::from(count)
    }
}

impl fmt::Display for EntropyBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.over == 1 {
            write!(f, "log {}", self.log_of)
        } else {
            write!(f, "log {} / {}", self.log_of, self.over)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrongWitness {
    pub direction: Direction,
    /// Q', sorted.
    pub states: Vec<State>,
    /// Σ', sorted.
    pub symbols: Vec<Symbol>,
}

impl StrongWitness {
    pub fn bound(&self) -> EntropyBound {
        EntropyBound::new(self.symbols.len() as u64, 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegularWitness {
    pub direction: Direction,
    pub base: State,
    pub walk_a: Vec<(State, Symbol)>,
    pub walk_b: Vec<(State, Symbol)>,
    /// 1 + Σ τ over `walk_a`.
    pub cost_a: u64,
    pub cost_b: u64,
}

impl RegularWitness {
    pub fn cost(&self) -> u64 {
        self.cost_a.max(self.cost_b)
    }

    pub fn bound(&self) -> EntropyBound {
        EntropyBound::new(2, self.cost())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Witness {
    Strong(StrongWitness),
    Regular(RegularWitness),
}

impl Witness {
    pub fn bound(&self) -> EntropyBound {
        match self {
            Witness::Strong(w) => w.bound(),
            Witness::Regular(w) => w.bound(),
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            Witness::Strong(w) => w.direction,
            Witness::Regular(w) => w.direction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    StronglyRegular,
    Regular,
    /// No certificate was found. This is not a claim of zero entropy.
    NoWitnessFound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyCertificate {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl EntropyCertificate {
    pub fn bound(&self) -> Option<EntropyBound> {
        self.witness.as_ref().map(Witness::bound)
    }

    /// JSON-ready view with names resolved.
    pub fn document(&self, m: &TuringMachine) -> CertificateDocument {
        let pair = |&(q, s): &(State, Symbol)| [m.state_name(q).to_string(), m.symbol_name(s).to_string()];
        CertificateDocument {
            verdict: self.verdict,
            bound: self.bound().map(|b| BoundDocument { log_of: b.log_of, over: b.over, decimal: b.value() }),
            direction: self.witness.as_ref().map(Witness::direction),
            witness: self.witness.as_ref().map(|w| match w {
                Witness::Strong(w) => WitnessDocument::Strong {
                    states: w.states.iter().map(|&q| m.state_name(q).to_string()).collect(),
                    symbols: w.symbols.iter().map(|&s| m.symbol_name(s).to_string()).collect(),
                },
                Witness::Regular(w) => WitnessDocument::Regular {
                    base: m.state_name(w.base).to_string(),
                    walk_a: w.walk_a.iter().map(pair).collect(),
                    walk_b: w.walk_b.iter().map(pair).collect(),
                    cost_a: w.cost_a,
                    cost_b: w.cost_b,
                },
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateDocument {
    pub verdict: Verdict,
    pub bound: Option<BoundDocument>,
    pub direction: Option<Direction>,
    pub witness: Option<WitnessDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundDocument {
    pub log_of: u64,
    pub over: u64,
    pub decimal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WitnessDocument {
    Strong { states: Vec<String>, symbols: Vec<String> },
    Regular { base: String, walk_a: Vec<[String; 2]>, walk_b: Vec<[String; 2]>, cost_a: u64, cost_b: u64 },
}

/// Limits for the strong-regularity search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrongSearch {
    /// Σ' candidates larger than two are only enumerated when |Σ| is at
    /// most this. Two-element candidates are always tried.
    pub max_alphabet: usize,
}

impl Default for StrongSearch {
    fn default() -> Self {
        StrongSearch { max_alphabet: 16 }
    }
}

pub fn check_strong_regularity(m: &TuringMachine) -> Option<StrongWitness> {
    check_strong_regularity_with(m, StrongSearch::default())
}

/// Searches Σ' by decreasing size, then ε (-1 before +1), then
/// lexicographically, and returns the first block with a nonempty Q'. For
/// each candidate Σ' the returned Q' is the largest possible.
pub fn check_strong_regularity_with(m: &TuringMachine, search: StrongSearch) -> Option<StrongWitness> {
    let n = m.num_symbols();
    let largest = if n <= search.max_alphabet { n } else { 2 };
    for size in (2..=largest).rev() {
        for direction in Direction::BOTH {
            let mut found = None;
            for_each_subset(n, size, &mut |subset| {
                let symbols: Vec<Symbol> = subset.iter().map(|&i| Symbol(i as u16)).collect();
                let states = greatest_block(m, direction, &symbols);
                if states.is_empty() {
                    return false;
                }
                found = Some(StrongWitness { direction, states, symbols });
                true
            });
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

/// The largest Q' with δ_ε = ε and δ_Q ∈ Q' on Q'×Σ', by deleting
/// violators from Q \ {q_halt} until nothing changes.
pub fn greatest_block(m: &TuringMachine, direction: Direction, symbols: &[Symbol]) -> Vec<State> {
    let mv = direction.as_move();
    let mut alive: Vec<bool> = m.states().map(|q| !m.is_halting(q)).collect();
    loop {
        let mut changed = false;
        for q in m.working_states() {
            if !alive[q.index()] {
                continue;
            }
            let keeps = symbols.iter().all(|&s| {
                let t = m.transition(q, s).expect("working state");
                t.shift == mv && alive[t.next.index()]
            });
            if !keeps {
                alive[q.index()] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    m.states().filter(|q| alive[q.index()]).collect()
}

/// Calls `f` with each `k`-subset of `0..n` in lexicographic order until it
/// returns true.
fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if go(i + 1, n, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(0, n, k, &mut Vec::with_capacity(k), f);
}

/// True when some ε-graph has a strongly connected component with more
/// internal edges than vertices.
pub fn has_rich_component(graph: &EpsGraph) -> bool {
    graph.sccs().iter().any(|c| graph.internal_edges(c).count() > c.len())
}

/// Ordering key of extraction candidates: (max cost, ε, base, first labels).
type CandidateKey = (u64, Direction, State, Symbol, Symbol);

pub fn check_regularity(m: &TuringMachine) -> Option<RegularWitness> {
    let table = phi_table(m);
    let mut best: Option<(CandidateKey, RegularWitness)> = None;
    for direction in Direction::BOTH {
        let graph = eps_graph_from_table(m, &table, direction);
        for component in graph.sccs() {
            let internal: Vec<Edge> = graph.internal_edges(&component).copied().collect();
            if internal.len() <= component.len() {
                continue;
            }
            for &v in &component {
                let out: Vec<&Edge> = internal.iter().filter(|e| e.from == v).collect();
                for (i, e1) in out.iter().enumerate() {
                    for e2 in &out[i + 1..] {
                        let (Some(walk_a), Some(walk_b)) =
                            (closed_walk(&internal, e1, v), closed_walk(&internal, e2, v))
                        else {
                            continue;
                        };
                        let w = RegularWitness {
                            direction,
                            base: v,
                            cost_a: walk_cost(&walk_a),
                            cost_b: walk_cost(&walk_b),
                            walk_a: walk_a.iter().map(|e| (e.from, e.label)).collect(),
                            walk_b: walk_b.iter().map(|e| (e.from, e.label)).collect(),
                        };
                        let key = (w.cost(), direction, v, e1.label, e2.label);
                        if best.as_ref().is_none_or(|(k, _)| key < *k) {
                            best = Some((key, w));
                        }
                    }
                }
            }
        }
    }
    best.map(|(_, w)| w)
}

fn walk_cost(walk: &[Edge]) -> u64 {
    1 + walk.iter().map(|e| e.tau).sum::<u64>()
}

/// `first` followed by a τ-cheapest path back to `base`. A self-loop is
/// taken twice so the walk has at least two pairs.
fn closed_walk(edges: &[Edge], first: &Edge, base: State) -> Option<Vec<Edge>> {
    if first.to == base {
        return Some(vec![*first, *first]);
    }
    let mut walk = vec![*first];
    walk.extend(cheapest_path(edges, first.to, base)?);
    Some(walk)
}

/// Dijkstra over `edges` weighted by τ. Ties resolve by edge order, so the
/// result is deterministic.
fn cheapest_path(edges: &[Edge], from: State, to: State) -> Option<Vec<Edge>> {
    let n = edges.iter().map(|e| e.from.index().max(e.to.index()) + 1).max()?;
    let n = n.max(from.index() + 1).max(to.index() + 1);
    let mut dist = vec![u64::MAX; n];
    let mut pred: Vec<Option<Edge>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[from.index()] = 0;
    heap.push(Reverse((0u64, from)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u.index()] {
            continue;
        }
        if u == to {
            break;
        }
        for e in edges.iter().filter(|e| e.from == u) {
            let nd = d + e.tau;
            if nd < dist[e.to.index()] {
                dist[e.to.index()] = nd;
                pred[e.to.index()] = Some(*e);
                heap.push(Reverse((nd, e.to)));
            }
        }
    }
    if dist[to.index()] == u64::MAX {
        return None;
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let e = pred[cur.index()]?;
        path.push(e);
        cur = e.from;
    }
    path.reverse();
    Some(path)
}

pub fn verify_strong(m: &TuringMachine, w: &StrongWitness) -> bool {
    let states: BTreeSet<State> = w.states.iter().copied().collect();
    let symbols: BTreeSet<Symbol> = w.symbols.iter().copied().collect();
    if states.is_empty() || symbols.len() < 2 || symbols.len() != w.symbols.len() {
        return false;
    }
    if states.iter().any(|q| q.index() >= m.num_states() || m.is_halting(*q))
        || symbols.iter().any(|s| s.index() >= m.num_symbols())
    {
        return false;
    }
    states.iter().all(|&q| {
        symbols.iter().all(|&s| match m.transition(q, s) {
            Some(t) => t.shift.offset() == w.direction.sign() && states.contains(&t.next),
            None => false,
        })
    })
}

pub fn verify_regular(m: &TuringMachine, w: &RegularWitness) -> bool {
    let walk_ok = |walk: &[(State, Symbol)], cost: u64| -> bool {
        if walk.len() < 2 || walk[0].0 != w.base {
            return false;
        }
        let mut total = 1u64;
        for (i, &(q, s)) in walk.iter().enumerate() {
            if q.index() >= m.num_states() || s.index() >= m.num_symbols() || m.is_halting(q) {
                return false;
            }
            let target = walk.get(i + 1).map_or(w.base, |p| p.0);
            match phi(m, q, s) {
                Ok(PhiOutcome::Shift { direction, exit, tau }) if direction == w.direction && exit == target => {
                    total += tau;
                }
                _ => return false,
            }
        }
        total == cost
    };
    // Prefix-free walks decode uniquely when concatenated, which is what
    // the 2^r word bound needs; distinct but prefix-related walks do not.
    let prefix_related = w.walk_a.starts_with(&w.walk_b) || w.walk_b.starts_with(&w.walk_a);
    !prefix_related && walk_ok(&w.walk_a, w.cost_a) && walk_ok(&w.walk_b, w.cost_b)
}

pub fn verify_witness(m: &TuringMachine, w: &Witness) -> bool {
    match w {
        Witness::Strong(w) => verify_strong(m, w),
        Witness::Regular(w) => verify_regular(m, w),
    }
}

/// The best certificate available from either criterion.
pub fn entropy_lower_bound(m: &TuringMachine) -> EntropyCertificate {
    let strong = check_strong_regularity(m).map(Witness::Strong);
    let regular = check_regularity(m).map(Witness::Regular);
    let witness = match (strong, regular) {
        (Some(s), Some(r)) => {
            if s.bound().cmp_exact(&r.bound()) == Ordering::Less {
                Some(r)
            } else {
                Some(s)
            }
        }
        (s, r) => s.or(r),
    };
    let verdict = match &witness {
        Some(Witness::Strong(_)) => Verdict::StronglyRegular,
        Some(Witness::Regular(_)) => Verdict::Regular,
        None => Verdict::NoWitnessFound,
    };
    EntropyCertificate { verdict, witness }
}
