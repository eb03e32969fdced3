//! Configurations and the global transition map.
//!
//! The head never moves: it always reads cell 0, and a transition with move
//! ε re-indexes the tape so that old cell ε becomes the new cell 0. The
//! tape is stored sparsely in absolute coordinates together with the
//! absolute position of the head, so a step costs O(log support).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::{State, Symbol, Transition, TuringMachine};
use crate::scalar::{lift, pow, Scalar};

/// A state plus a finitely supported tape, head pinned at cell 0.
///
/// Blank cells are never stored, so two configurations are equal exactly
/// when they have the same state and agree on every cell.
#[derive(Debug, Clone)]
pub struct Configuration {
    state: State,
    blank: Symbol,
    head: i64,
    cells: BTreeMap<i64, Symbol>,
}

impl Configuration {
    /// An all-blank tape in state `q`.
    pub fn blank_tape(m: &TuringMachine, q: State) -> Self {
        Configuration { state: q, blank: m.blank(), head: 0, cells: BTreeMap::new() }
    }

    pub fn state(&self) -> State {
        self.state
    }

    pub fn blank(&self) -> Symbol {
        self.blank
    }

    /// The symbol under the head.
    pub fn head_symbol(&self) -> Symbol {
        self.get(0)
    }

    /// Symbol at tape cell `i` (relative to the head).
    pub fn get(&self, i: i64) -> Symbol {
        self.cells.get(&(self.head + i)).copied().unwrap_or(self.blank)
    }

    /// Writes `s` at cell `i`, keeping the canonical form.
    pub fn set(&mut self, i: i64, s: Symbol) {
        if s == self.blank {
            self.cells.remove(&(self.head + i));
        } else {
            self.cells.insert(self.head + i, s);
        }
    }

    pub fn with_state(mut self, q: State) -> Self {
        self.state = q;
        self
    }

    /// Non-blank cells in increasing order, in head-relative coordinates.
    pub fn tape(&self) -> impl Iterator<Item = (i64, Symbol)> + '_ {
        self.cells.iter().map(move |(&k, &s)| (k - self.head, s))
    }

    pub fn support_len(&self) -> usize {
        self.cells.len()
    }

    /// Smallest and largest non-blank cell, if any.
    pub fn support_bounds(&self) -> Option<(i64, i64)> {
        let lo = self.cells.keys().next()?;
        let hi = self.cells.keys().next_back()?;
        Some((lo - self.head, hi - self.head))
    }

    /// Applies one transition in place.
    pub fn apply(&mut self, t: Transition) {
        self.set(0, t.write);
        self.state = t.next;
        self.head += t.shift.offset();
    }

    /// Checks that this configuration uses only the given machine's states
    /// and symbols.
    pub fn check_against(&self, m: &TuringMachine) -> Result<()> {
        if self.state.index() >= m.num_states() {
            return Err(Error::ForeignConfiguration(format!("state index {} out of range", self.state.0)));
        }
        if self.blank != m.blank() {
            return Err(Error::ForeignConfiguration("blank symbol differs".into()));
        }
        if let Some((_, s)) = self.tape().find(|(_, s)| s.index() >= m.num_symbols()) {
            return Err(Error::ForeignConfiguration(format!("symbol index {} out of range", s.0)));
        }
        Ok(())
    }

    /// Text form `state: … a b . c d …` with cell 0 after the dot.
    pub fn render(&self, m: &TuringMachine) -> String {
        self.render_around(m, 0)
    }

    /// Like [`render`](Self::render), always showing cells -margin..=margin.
    pub fn render_around(&self, m: &TuringMachine, margin: i64) -> String {
        let (lo, hi) = match self.support_bounds() {
            Some((lo, hi)) => (lo.min(-margin), hi.max(margin)),
            None => (-margin, margin),
        };
        let mut out = format!("{}: …", m.state_name(self.state));
        for i in lo..=hi {
            if i == 0 {
                out.push_str(" .");
            }
            let _ = write!(out, " {}", m.symbol_name(self.get(i)));
        }
        out.push_str(" …");
        out
    }
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.state == other.state
            && self.blank == other.blank
            && self.cells.len() == other.cells.len()
            && self.tape().eq(other.tape())
    }
}

impl Eq for Configuration {}

impl Hash for Configuration {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.state.hash(h);
        self.blank.hash(h);
        for cell in self.tape() {
            cell.hash(h);
        }
    }
}

/// The configuration in state `q` whose tape holds `window` starting at
/// cell `offset`, blank elsewhere.
pub fn make_config(m: &TuringMachine, q: State, window: &[Symbol], offset: i64) -> Result<Configuration> {
    if q.index() >= m.num_states() {
        return Err(Error::UnknownState(format!("#{}", q.0)));
    }
    let mut x = Configuration::blank_tape(m, q);
    for (i, &s) in window.iter().enumerate() {
        if s.index() >= m.num_symbols() {
            return Err(Error::UnknownSymbol(format!("#{}", s.0)));
        }
        x.set(offset + i as i64, s);
    }
    Ok(x)
}

/// Like [`make_config`] but with symbols given by name.
pub fn make_config_named(m: &TuringMachine, q: &str, window: &[&str], offset: i64) -> Result<Configuration> {
    let q = m.state_by_name(q)?;
    let window = window.iter().map(|s| m.symbol_by_name(s)).collect::<Result<Vec<_>>>()?;
    make_config(m, q, &window, offset)
}

/// R_T(x): one application of the global transition map.
pub fn step(m: &TuringMachine, x: &Configuration) -> Configuration {
    let mut y = x.clone();
    y.apply(m.action(x.state, x.head_symbol()));
    y
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub halted: bool,
    pub steps: u64,
    pub final_config: Configuration,
    /// N(x), set exactly when the run halted.
    pub halting_time: Option<u64>,
}

/// Iterates [`step`] until the halting state is entered or `max_steps`
/// steps have been taken. A configuration already in the halting state
/// halts at time 0.
pub fn run(m: &TuringMachine, x: &Configuration, max_steps: u64) -> RunResult {
    let mut cur = x.clone();
    let mut steps = 0;
    while !m.is_halting(cur.state) && steps < max_steps {
        cur.apply(m.action(cur.state, cur.head_symbol()));
        steps += 1;
    }
    let halted = m.is_halting(cur.state);
    RunResult { halted, steps, final_config: cur, halting_time: halted.then_some(steps) }
}

/// Length of the agreement window: the largest n with x_i = y_i for all
/// |i| < n. `None` when the tapes are identical.
pub fn agreement_radius(x: &Configuration, y: &Configuration) -> Option<u64> {
    x.tape().chain(y.tape()).map(|(i, _)| i).filter(|&i| x.get(i) != y.get(i)).map(|i| i.unsigned_abs()).min()
}

/// The configuration metric: 0 if equal, 1 if the states differ, otherwise
/// 2^-n with n the agreement radius of the tapes.
pub fn distance<T: Scalar>(m: &TuringMachine, x: &Configuration, y: &Configuration) -> Result<T> {
    x.check_against(m)?;
    y.check_against(m)?;
    if x.state != y.state {
        return Ok(T::one());
    }
    match agreement_radius(x, y) {
        None => Ok(T::zero()),
        Some(n) => {
            let exp = u32::try_from(n).map_err(|_| Error::ForeignConfiguration("support too wide".into()))?;
            Ok(T::one() / pow(lift::<T>(2), exp))
        }
    }
}

/// Serializable snapshot of a configuration with names resolved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigurationView {
    pub state: String,
    pub tape: BTreeMap<i64, String>,
}

impl ConfigurationView {
    pub fn new(m: &TuringMachine, x: &Configuration) -> Self {
        ConfigurationView {
            state: m.state_name(x.state).to_string(),
            tape: x.tape().map(|(i, s)| (i, m.symbol_name(s).to_string())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::builtin_machine;
    use crate::machine::{HaltingMode, Move};
    use crate::parse::parse_machine;
    use crate::Rational;

    fn toy_halter() -> TuringMachine {
        parse_machine("states: q0 h\nalphabet: 0 1\nblank: 0\ninitial: q0\nhalting: h\nq0 0 -> HALT\nq0 1 -> HALT\n")
            .unwrap()
    }

    fn toy_runner() -> TuringMachine {
        parse_machine(
            "states: q0 h\nalphabet: 0 1\nblank: 0\ninitial: q0\nhalting: h\nq0 0 -> q0 0 R\nq0 1 -> q0 1 R\n",
        )
        .unwrap()
    }

    #[test]
    fn step_shifts_tape_left_on_right_move() {
        let m = builtin_machine("utm_6_4").unwrap();
        let x = make_config_named(&m, "u2", &["b", "g"], 0).unwrap();
        let y = step(&m, &x);
        // δ(u2, b) = (u2, g, R): g written at cell 0 then shifted to -1.
        let expected = make_config_named(&m, "u2", &["g", "g"], -1).unwrap();
        assert_eq!(y, expected);
        assert_eq!(m.state_name(y.state()), "u2");
        assert_eq!(y.get(-1), m.symbol_by_name("g").unwrap());
        assert_eq!(y.head_symbol(), m.symbol_by_name("g").unwrap());
    }

    #[test]
    fn left_move_reads_old_cell_minus_one() {
        let m = builtin_machine("utm_6_4").unwrap();
        // δ(u1, g) = (u1, b, L)
        let x = make_config_named(&m, "u1", &["c", "g"], -1).unwrap();
        let y = step(&m, &x);
        assert_eq!(y.head_symbol(), m.symbol_by_name("c").unwrap());
        assert_eq!(y.get(1), m.symbol_by_name("b").unwrap());
    }

    #[test]
    fn halting_modes() {
        let m = toy_runner();
        let x = make_config(&m, m.halting(), &[Symbol(1), Symbol(0), Symbol(1)], -1).unwrap();
        assert_eq!(step(&m, &x), x);
        let m = m.with_halting_mode(HaltingMode::Restart);
        assert_eq!(step(&m, &x), x.clone().with_state(m.initial()));
    }

    #[test]
    fn run_single_step_halt() {
        let m = toy_halter();
        let x = Configuration::blank_tape(&m, m.initial());
        let r = run(&m, &x, 10);
        assert!(r.halted);
        assert_eq!(r.halting_time, Some(1));
        assert_eq!(r.steps, 1);
        assert_eq!(r.final_config, x.with_state(m.halting()));
    }

    #[test]
    fn run_right_runner_exhausts_budget() {
        let m = toy_runner();
        let r = run(&m, &Configuration::blank_tape(&m, m.initial()), 100);
        assert!(!r.halted);
        assert_eq!(r.steps, 100);
        assert_eq!(r.halting_time, None);
    }

    #[test]
    fn run_utm_from_blank_tape() {
        // Regression value from direct simulation.
        let m = builtin_machine("utm_6_4").unwrap();
        let r = run(&m, &Configuration::blank_tape(&m, m.initial()), 10_000);
        assert_eq!((r.halted, r.steps), UTM_BLANK_RUN);
    }
    const UTM_BLANK_RUN: (bool, u64) = (false, 10_000);

    #[test]
    fn make_config_cases() {
        let m = builtin_machine("utm_6_4").unwrap();
        let q0 = m.initial();
        assert_eq!(make_config(&m, q0, &[], 0).unwrap().support_len(), 0);
        let x = make_config_named(&m, "u1", &["b"], 0).unwrap();
        assert_eq!(x.tape().collect::<Vec<_>>(), vec![(0, m.symbol_by_name("b").unwrap())]);
        assert_eq!(make_config_named(&m, "u1", &["g", "g"], -3).unwrap().support_len(), 0);
        assert!(matches!(make_config(&m, q0, &[Symbol(9)], 0), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn distance_cases() {
        let m = builtin_machine("utm_6_4").unwrap();
        let x = make_config_named(&m, "u1", &["b", "c", "g", "b"], -2).unwrap();
        assert_eq!(distance::<Rational>(&m, &x, &x).unwrap(), Rational::from_integer(0.into()));
        let y = x.clone().with_state(m.state_by_name("u2").unwrap());
        assert_eq!(distance::<Rational>(&m, &x, &y).unwrap(), Rational::from_integer(1.into()));
        // Differ at -2 only; agree on -1, 0, 1.
        let mut z = x.clone();
        z.set(-2, m.symbol_by_name("δ").unwrap());
        assert_eq!(distance::<Rational>(&m, &x, &z).unwrap(), Rational::new(1.into(), 4.into()));
        assert_eq!(distance::<f64>(&m, &x, &z).unwrap(), 0.25);
        // Differ at cell 0: radius 0.
        let mut w = x.clone();
        w.set(0, m.symbol_by_name("b").unwrap());
        assert_eq!(distance::<f64>(&m, &x, &w).unwrap(), 1.0);
    }

    #[test]
    fn distance_rejects_foreign_configuration() {
        let big = builtin_machine("utm_6_4").unwrap();
        let small = builtin_machine("wutm_6_2").unwrap();
        let x = make_config_named(&big, "u1", &["c"], 0).unwrap();
        let y = Configuration::blank_tape(&small, small.initial());
        assert!(distance::<f64>(&small, &x, &y).is_err());
    }

    #[test]
    fn apply_respects_move() {
        let m = toy_runner();
        let mut x = make_config(&m, m.initial(), &[Symbol(1)], 1).unwrap();
        x.apply(Transition::new(m.initial(), Symbol(1), Move::Right));
        assert_eq!(x.tape().collect::<Vec<_>>(), vec![(-1, Symbol(1)), (0, Symbol(1))]);
    }

    #[test]
    fn render_marks_cell_zero() {
        let m = builtin_machine("utm_6_4").unwrap();
        let x = make_config_named(&m, "u2", &["b", "c"], -1).unwrap();
        assert_eq!(x.render(&m), "u2: … b . c …");
    }
}
