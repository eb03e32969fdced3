//! Allowed n-words and entropy estimates.
//!
//! An n-word is the sequence of (state, head symbol) pairs seen along n
//! consecutive configurations of some orbit. h(T) is the limit of
//! log|S(n)| / n, and by subadditivity each finite-n value bounds it from
//! above.
//!
//! Two independent counters are provided. [`count_words_oracle`] runs the
//! machine on every tape window that n - 1 steps can reach. [`count_words`]
//! explores executions lazily, leaving each cell unassigned until it is
//! first read and branching over the alphabet there. Every branch point is
//! a read whose symbol lands in the trace, so distinct leaves carry
//! distinct words and the lazy counter can count leaves.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::config::make_config;
use crate::error::{Error, Result};
use crate::machine::{State, Symbol, TuringMachine};
use crate::regularity::{entropy_lower_bound, CertificateDocument, EntropyCertificate};
use crate::scalar::Estimate;

/// A length-n sequence of (state, head symbol) pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraceWord(pub Vec<(State, Symbol)>);

impl TraceWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Which configurations count as orbit starting points.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum StartStates {
    /// Every state, halting state included.
    #[default]
    All,
    /// Only the initial state. Exploratory; the word sets of the entropy
    /// formula range over all configurations.
    Initial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordOptions {
    pub start: StartStates,
    /// Upper bound on search nodes for the lazy counter.
    pub node_budget: u64,
    /// Largest n accepted by the brute-force oracle.
    pub oracle_cap: usize,
    /// Largest n accepted by [`word_set`].
    pub set_cap: usize,
}

impl Default for WordOptions {
    fn default() -> Self {
        WordOptions { start: StartStates::All, node_budget: 100_000_000, oracle_cap: 5, set_cap: 4 }
    }
}

fn start_states(m: &TuringMachine, start: StartStates) -> Vec<State> {
    match start {
        StartStates::All => m.states().collect(),
        StartStates::Initial => vec![m.initial()],
    }
}

/// Brute force: every start state and every assignment of cells
/// [-(n-1), n-1], simulated with [`step`](crate::config::step).
pub fn count_words_oracle(m: &TuringMachine, n: usize) -> Result<u64> {
    count_words_oracle_with(m, n, &WordOptions::default())
}

pub fn count_words_oracle_with(m: &TuringMachine, n: usize, opts: &WordOptions) -> Result<u64> {
    if n == 0 || n > opts.oracle_cap {
        return Err(Error::WordLengthOutOfRange { n, cap: opts.oracle_cap });
    }
    let width = 2 * n - 1;
    let k = m.num_symbols();
    let mut words: HashSet<Vec<(State, Symbol)>> = HashSet::new();
    let mut digits = vec![0usize; width];
    for q in start_states(m, opts.start) {
        digits.iter_mut().for_each(|d| *d = 0);
        loop {
            let window: Vec<Symbol> = digits.iter().map(|&d| Symbol(d as u16)).collect();
            let mut x = make_config(m, q, &window, -(n as i64 - 1))?;
            let mut word = Vec::with_capacity(n);
            for i in 0..n {
                word.push((x.state(), x.head_symbol()));
                if i + 1 < n {
                    x = crate::config::step(m, &x);
                }
            }
            words.insert(word);
            // odometer increment
            let mut pos = 0;
            while pos < width {
                digits[pos] += 1;
                if digits[pos] < k {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == width {
                break;
            }
        }
    }
    Ok(words.len() as u64)
}

struct LazySearch<'a, F: FnMut(&[(State, Symbol)])> {
    m: &'a TuringMachine,
    n: usize,
    budget: u64,
    nodes: u64,
    tape: Vec<Option<Symbol>>,
    trace: Vec<(State, Symbol)>,
    sink: F,
}

impl<F: FnMut(&[(State, Symbol)])> LazySearch<'_, F> {
    fn explore(&mut self, q: State, head: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::NodeBudgetExceeded { n: self.n, budget: self.budget });
        }
        match self.tape[head] {
            Some(s) => self.read(q, head, s),
            None => {
                for s in self.m.symbols() {
                    self.tape[head] = Some(s);
                    self.read(q, head, s)?;
                }
                self.tape[head] = None;
                Ok(())
            }
        }
    }

    fn read(&mut self, q: State, head: usize, s: Symbol) -> Result<()> {
        self.trace.push((q, s));
        if self.trace.len() == self.n {
            (self.sink)(&self.trace);
        } else {
            let t = self.m.action(q, s);
            let saved = self.tape[head];
            self.tape[head] = Some(t.write);
            // The head stays within n - 1 cells of the start.
            let next = (head as i64 + t.shift.offset()) as usize;
            self.explore(t.next, next)?;
            self.tape[head] = saved;
        }
        self.trace.pop();
        Ok(())
    }
}

fn lazy_search(m: &TuringMachine, n: usize, opts: &WordOptions, sink: impl FnMut(&[(State, Symbol)])) -> Result<()> {
    let mut search = LazySearch {
        m,
        n,
        budget: opts.node_budget,
        nodes: 0,
        tape: vec![None; 2 * n - 1],
        trace: Vec::with_capacity(n),
        sink,
    };
    for q in start_states(m, opts.start) {
        search.explore(q, n - 1)?;
    }
    Ok(())
}

/// |S(n)| by lazy-tape search.
pub fn count_words(m: &TuringMachine, n: usize) -> Result<u64> {
    count_words_with(m, n, &WordOptions::default())
}

pub fn count_words_with(m: &TuringMachine, n: usize, opts: &WordOptions) -> Result<u64> {
    if n == 0 {
        return Err(Error::WordLengthOutOfRange { n, cap: usize::MAX });
    }
    let mut count = 0u64;
    lazy_search(m, n, opts, |_| count += 1)?;
    Ok(count)
}

/// The set S(n) itself, for small n.
pub fn word_set(m: &TuringMachine, n: usize) -> Result<BTreeSet<TraceWord>> {
    word_set_with(m, n, &WordOptions::default())
}

pub fn word_set_with(m: &TuringMachine, n: usize, opts: &WordOptions) -> Result<BTreeSet<TraceWord>> {
    if n == 0 || n > opts.set_cap {
        return Err(Error::WordLengthOutOfRange { n, cap: opts.set_cap });
    }
    let mut set = BTreeSet::new();
    lazy_search(m, n, opts, |w| {
        set.insert(TraceWord(w.to_vec()));
    })?;
    Ok(set)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordCountRow<F> {
    pub n: usize,
    pub count: u64,
    /// log(count) / n
    pub estimate: F,
}

/// Word counts for n = 1..=n_max next to the best certified lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct WordCountReport<F> {
    pub rows: Vec<WordCountRow<F>>,
    pub certificate: EntropyCertificate,
    /// Set when counting stopped early; the rows before it are complete.
    pub error: Option<Error>,
}

pub fn entropy_estimates<F: Estimate>(m: &TuringMachine, n_max: usize) -> Result<WordCountReport<F>> {
    entropy_estimates_with(m, n_max, &WordOptions::default())
}

pub fn entropy_estimates_with<F: Estimate>(
    m: &TuringMachine,
    n_max: usize,
    opts: &WordOptions,
) -> Result<WordCountReport<F>> {
    if n_max == 0 {
        return Err(Error::WordLengthOutOfRange { n: 0, cap: usize::MAX });
    }
    let mut rows = Vec::with_capacity(n_max);
    let mut error = None;
    for n in 1..=n_max {
        match count_words_with(m, n, opts) {
            Ok(count) => {
                let estimate = F::from_u64(count).expect("count fits").ln() / F::from_usize(n).expect("n fits");
                rows.push(WordCountRow { n, count, estimate });
            }
            Err(e) => {
                error = Some(e);
                break;
            }
        }
    }
    Ok(WordCountReport { rows, certificate: entropy_lower_bound(m), error })
}

impl<F: Estimate> WordCountReport<F> {
    /// Smallest estimate over the rows: the tightest upper bound on h(T)
    /// the report supports.
    pub fn min_estimate(&self) -> Option<F> {
        self.rows.iter().map(|r| r.estimate).reduce(F::min)
    }

    /// CSV with columns n, count, e_n, min_e_n (running minimum), estimates
    /// printed to 20 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,count,e_n,min_e_n\n");
        let mut running: Option<F> = None;
        for r in &self.rows {
            let cur = running.map_or(r.estimate, |x| x.min(r.estimate));
            running = Some(cur);
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.n,
                r.count,
                significant(r.estimate.to_f64().unwrap_or(f64::NAN), 20),
                significant(cur.to_f64().unwrap_or(f64::NAN), 20)
            );
        }
        out
    }

    pub fn document(&self, m: &TuringMachine) -> ReportDocument {
        let mut running: Option<f64> = None;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let e = r.estimate.to_f64().unwrap_or(f64::NAN);
                let cur = running.map_or(e, |x: f64| x.min(e));
                running = Some(cur);
                RowDocument { n: r.n, count: r.count, e_n: e, min_e_n: cur }
            })
            .collect();
        ReportDocument {
            rows,
            certificate: self.certificate.document(m),
            error: self.error.as_ref().map(|e| e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub rows: Vec<RowDocument>,
    pub certificate: CertificateDocument,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowDocument {
    pub n: usize,
    pub count: u64,
    pub e_n: f64,
    pub min_e_n: f64,
}

/// Plain decimal rendering of `x` with `digits` significant digits.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
