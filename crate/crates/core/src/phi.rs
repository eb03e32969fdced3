//! The φ-criterion: what the head cell does before the first tape shift.
//!
//! Starting from (q, s) on the head cell, transitions that do not move are
//! followed until one of three things happens: the halting state is about
//! to be entered (`Halt`), a transition shifts the tape (`Shift`), or a
//! (state, symbol) pair repeats without either (`Periodic`). Only cell 0
//! changes along the way, so the pair is the whole relevant state.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::{Direction, State, Symbol, TuringMachine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhiOutcome {
    /// The halting state is entered after `steps` transitions, none of
    /// which shifted before the last.
    Halt { steps: u64 },
    /// The no-shift evolution cycles forever.
    Periodic,
    /// After `tau - 1` non-moving transitions, transition number `tau`
    /// shifts the tape by `direction` and enters `exit`.
    Shift { direction: Direction, exit: State, tau: u64 },
}

impl PhiOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            PhiOutcome::Halt { .. } => "H",
            PhiOutcome::Periodic => "P",
            PhiOutcome::Shift { .. } => "S",
        }
    }

    pub fn shift(&self) -> Option<(Direction, State, u64)> {
        match *self {
            PhiOutcome::Shift { direction, exit, tau } => Some((direction, exit, tau)),
            _ => None,
        }
    }
}

/// φ(q, s) with its step count τ.
pub fn phi(m: &TuringMachine, q: State, s: Symbol) -> Result<PhiOutcome> {
    if m.is_halting(q) {
        return Err(Error::HaltingStateArgument);
    }
    let mut seen = HashSet::new();
    let (mut q_cur, mut s_cur) = (q, s);
    let mut stage = 0u64;
    loop {
        // q_cur is never the halting state here: that case returns first.
        let t = m.transition(q_cur, s_cur).expect("non-halting rows are total");
        stage += 1;
        if m.is_halting(t.next) {
            return Ok(PhiOutcome::Halt { steps: stage });
        }
        if let Some(direction) = t.shift.direction() {
            return Ok(PhiOutcome::Shift { direction, exit: t.next, tau: stage });
        }
        seen.insert((q_cur, s_cur));
        q_cur = t.next;
        s_cur = t.write;
        if seen.contains(&(q_cur, s_cur)) {
            return Ok(PhiOutcome::Periodic);
        }
    }
}

/// φ at every (non-halting state, symbol) pair, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiTable {
    entries: Vec<(State, Symbol, PhiOutcome)>,
}

impl PhiTable {
    pub fn entries(&self) -> &[(State, Symbol, PhiOutcome)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, q: State, s: Symbol) -> Option<PhiOutcome> {
        self.entries.iter().find(|(eq, es, _)| *eq == q && *es == s).map(|&(_, _, o)| o)
    }

    /// Serializable rows with names resolved.
    pub fn rows(&self, m: &TuringMachine) -> Vec<PhiRow> {
        self.entries
            .iter()
            .map(|&(q, s, o)| {
                let (direction, exit, tau) = match o {
                    PhiOutcome::Shift { direction, exit, tau } => {
                        (Some(direction), Some(m.state_name(exit).to_string()), Some(tau))
                    }
                    PhiOutcome::Halt { steps } => (None, None, Some(steps)),
                    PhiOutcome::Periodic => (None, None, None),
                };
                PhiRow {
                    state: m.state_name(q).to_string(),
                    symbol: m.symbol_name(s).to_string(),
                    kind: o.kind(),
                    direction,
                    exit,
                    tau,
                }
            })
            .collect()
    }

    /// Whitespace-aligned text table: state, symbol, kind, direction, exit, tau.
    pub fn to_text(&self, m: &TuringMachine) -> String {
        let mut out = String::from("state\tsymbol\tkind\tdirection\texit\ttau\n");
        for r in self.rows(m) {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.state,
                r.symbol,
                r.kind,
                r.direction.map(|d| d.to_string()).unwrap_or_else(|| "-".into()),
                r.exit.as_deref().unwrap_or("-"),
                r.tau.map(|t| t.to_string()).unwrap_or_else(|| "-".into()),
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiRow {
    pub state: String,
    pub symbol: String,
    pub kind: &'static str,
    pub direction: Option<Direction>,
    pub exit: Option<String>,
    /// Steps to the first shift (or into the halting state).
    pub tau: Option<u64>,
}

pub fn phi_table(m: &TuringMachine) -> PhiTable {
    let mut entries = Vec::with_capacity(m.num_states() * m.num_symbols());
    for q in m.working_states() {
        for s in m.symbols() {
            entries.push((q, s, phi(m, q, s).expect("working state")));
        }
    }
    PhiTable { entries }
}

/// One φ-edge q --s--> q' of an ε-graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: State,
    pub label: Symbol,
    pub to: State,
    pub tau: u64,
}

/// Directed multigraph on the non-halting states with an edge q → q'
/// labelled s for every φ(q, s) = (ε, q').
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsGraph {
    pub direction: Direction,
    pub vertices: Vec<State>,
    /// Sorted by source, then label.
    pub edges: Vec<Edge>,
}

pub fn eps_graph(m: &TuringMachine, direction: Direction) -> EpsGraph {
    eps_graph_from_table(m, &phi_table(m), direction)
}

pub fn eps_graph_from_table(m: &TuringMachine, table: &PhiTable, direction: Direction) -> EpsGraph {
    let mut edges: Vec<Edge> = table
        .entries()
        .iter()
        .filter_map(|&(from, label, o)| match o {
            PhiOutcome::Shift { direction: d, exit, tau } if d == direction => {
                Some(Edge { from, label, to: exit, tau })
            }
            _ => None,
        })
        .collect();
    edges.sort();
    EpsGraph { direction, vertices: m.working_states().collect(), edges }
}

impl EpsGraph {
    pub fn out_edges(&self, q: State) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.from == q)
    }

    /// Strongly connected components (Tarjan), each sorted, listed in order
    /// of their smallest vertex.
    pub fn sccs(&self) -> Vec<Vec<State>> {
        let n = self.vertices.iter().map(|q| q.index() + 1).max().unwrap_or(0);
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.from.index()].push(e.to.index());
        }
        let mut tarjan = Tarjan {
            adj: &adj,
            index: vec![usize::MAX; n],
            low: vec![0; n],
            on_stack: vec![false; n],
            stack: Vec::new(),
            counter: 0,
            out: Vec::new(),
        };
        for v in &self.vertices {
            if tarjan.index[v.index()] == usize::MAX {
                tarjan.visit(v.index());
            }
        }
        let mut comps: Vec<Vec<State>> = tarjan
            .out
            .into_iter()
            .map(|c| {
                let mut c: Vec<State> = c.into_iter().map(|i| State(i as u16)).collect();
                c.sort();
                c
            })
            .collect();
        comps.sort();
        comps
    }

    /// Edges with both endpoints in `component`.
    pub fn internal_edges<'a>(&'a self, component: &'a [State]) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| component.contains(&e.from) && component.contains(&e.to))
    }

    /// Graphviz dot text, deterministic: vertices by id, edges by source
    /// then label.
    pub fn to_dot(&self, m: &TuringMachine) -> String {
        let name = match self.direction {
            Direction::Plus => "eps_plus",
            Direction::Minus => "eps_minus",
        };
        let mut out = format!("digraph {name} {{\n");
        let _ = writeln!(out, "  label=\"epsilon = {}\";", self.direction);
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{}\";", escape(m.state_name(*v)));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                escape(m.state_name(e.from)),
                escape(m.state_name(e.to)),
                escape(m.symbol_name(e.label))
            );
        }
        out.push_str("}\n");
        out
    }
}

impl EpsGraph {
    /// JSON-ready view with names resolved.
    pub fn document(&self, m: &TuringMachine) -> GraphDocument {
        let names = |c: &[State]| c.iter().map(|&q| m.state_name(q).to_string()).collect();
        GraphDocument {
            direction: self.direction,
            vertices: names(&self.vertices),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    from: m.state_name(e.from).to_string(),
                    symbol: m.symbol_name(e.label).to_string(),
                    to: m.state_name(e.to).to_string(),
                    tau: e.tau,
                })
                .collect(),
            sccs: self.sccs().iter().map(|c| names(c)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphDocument {
    pub direction: Direction,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDocument>,
    pub sccs: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeDocument {
    pub from: String,
    pub symbol: String,
    pub to: String,
    pub tau: u64,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

struct Tarjan<'a> {
    adj: &'a [Vec<usize>],
    index: Vec<usize>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    counter: usize,
    out: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    // Recursion depth is bounded by the number of states.
    fn visit(&mut self, v: usize) {
        self.index[v] = self.counter;
        self.low[v] = self.counter;
        self.counter += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i];
            if self.index[w] == usize::MAX {
                self.visit(w);
                self.low[v] = self.low[v].min(self.low[w]);
            } else if self.on_stack[w] {
                self.low[v] = self.low[v].min(self.index[w]);
            }
        }
        if self.low[v] == self.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().unwrap();
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            self.out.push(comp);
        }
    }
}
