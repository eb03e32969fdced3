//! Machine representation: states, symbols, the transition table and the
//! halting extension.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a state in its machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct State(pub u16);

/// Index of a tape symbol in its machine's alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(pub u16);

impl State {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Tape displacement of one transition.
///
/// `Right` (+1) shifts the tape one cell to the left under the fixed head,
/// so the head then reads what was cell 1. `Left` (-1) is the mirror image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn offset(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Stay => 0,
            Move::Right => 1,
        }
    }

    pub fn from_offset(offset: i64) -> Option<Self> {
        match offset {
            -1 => Some(Move::Left),
            0 => Some(Move::Stay),
            1 => Some(Move::Right),
            _ => None,
        }
    }

    /// The file-format letter: `L`, `N` or `R`.
    pub fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Stay => 'N',
            Move::Right => 'R',
        }
    }

    pub fn direction(self) -> Option<Direction> {
        match self {
            Move::Left => Some(Direction::Minus),
            Move::Stay => None,
            Move::Right => Some(Direction::Plus),
        }
    }
}

/// A nonzero shift direction, ε ∈ {-1, +1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Minus,
    Plus,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Minus, Direction::Plus];

    pub fn sign(self) -> i64 {
        match self {
            Direction::Minus => -1,
            Direction::Plus => 1,
        }
    }

    pub fn as_move(self) -> Move {
        match self {
            Direction::Minus => Move::Left,
            Direction::Plus => Move::Right,
        }
    }

    pub fn from_sign(sign: i64) -> Option<Self> {
        match sign {
            -1 => Some(Direction::Minus),
            1 => Some(Direction::Plus),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Minus => "-1",
            Direction::Plus => "+1",
        })
    }
}

impl Serialize for Direction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.sign())
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let sign = i64::deserialize(deserializer)?;
        Direction::from_sign(sign)
            .ok_or_else(|| serde::de::Error::custom(format!("direction must be -1 or +1, got {sign}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transition {
    pub next: State,
    pub write: Symbol,
    #[serde(rename = "move")]
    pub shift: Move,
}

impl Transition {
    pub fn new(next: State, write: Symbol, shift: Move) -> Self {
        Transition { next, write, shift }
    }
}

/// How the global map acts on configurations in the halting state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HaltingMode {
    /// δ(q_halt, t) = (q_halt, t, 0): halting configurations are fixed points.
    #[default]
    Fixpoint,
    /// δ(q_halt, t) = (q_0, t, 0): the machine restarts in place.
    Restart,
}

impl std::str::FromStr for HaltingMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fixpoint" => Ok(HaltingMode::Fixpoint),
            "restart" => Ok(HaltingMode::Restart),
            other => Err(format!("unknown halting mode `{other}` (expected fixpoint or restart)")),
        }
    }
}

/// A deterministic single-tape machine (Q, q_0, q_halt, Σ, δ).
///
/// Immutable once built; the table is total on the non-halting states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    state_names: Vec<String>,
    symbol_names: Vec<String>,
    blank: Symbol,
    initial: State,
    halting: State,
    // row-major by state, `None` exactly on the halting row
    table: Vec<Option<Transition>>,
    halting_mode: HaltingMode,
}

impl TuringMachine {
    /// Builds a machine from a dense table, `table[q][s]`. The halting row
    /// must be `None` and every other entry `Some`.
    pub fn new(
        state_names: Vec<String>,
        symbol_names: Vec<String>,
        blank: Symbol,
        initial: State,
        halting: State,
        table: Vec<Vec<Option<Transition>>>,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidMachine(msg));
        let n_states = state_names.len();
        let n_symbols = symbol_names.len();
        if n_symbols < 2 {
            return invalid("alphabet must have ≥ 2 symbols".into());
        }
        if n_states == 0 || n_states > u16::MAX as usize || n_symbols > u16::MAX as usize {
            return invalid(format!("unsupported size: {n_states} states, {n_symbols} symbols"));
        }
        if let Some(name) = first_duplicate(&state_names) {
            return invalid(format!("duplicate state name `{name}`"));
        }
        if let Some(name) = first_duplicate(&symbol_names) {
            return invalid(format!("duplicate symbol name `{name}`"));
        }
        if blank.index() >= n_symbols || initial.index() >= n_states || halting.index() >= n_states {
            return invalid("blank, initial or halting index out of range".into());
        }
        if table.len() != n_states {
            return invalid(format!("table has {} rows for {n_states} states", table.len()));
        }
        let mut flat = Vec::with_capacity(n_states * n_symbols);
        for (q, row) in table.into_iter().enumerate() {
            if row.len() != n_symbols {
                return invalid(format!("row {} has {} entries for {n_symbols} symbols", state_names[q], row.len()));
            }
            for (s, entry) in row.into_iter().enumerate() {
                match (q == halting.index(), entry) {
                    (true, Some(_)) => {
                        return invalid(format!("halting state `{}` has a rule", state_names[q]));
                    }
                    (false, None) => {
                        return invalid(format!("missing rule for ({}, {})", state_names[q], symbol_names[s]));
                    }
                    (false, Some(t)) if t.next.index() >= n_states || t.write.index() >= n_symbols => {
                        return invalid(format!("rule for ({}, {}) is out of range", state_names[q], symbol_names[s]));
                    }
                    (_, entry) => flat.push(entry),
                }
            }
        }
        Ok(TuringMachine {
            state_names,
            symbol_names,
            blank,
            initial,
            halting,
            table: flat,
            halting_mode: HaltingMode::Fixpoint,
        })
    }

    pub fn with_halting_mode(mut self, mode: HaltingMode) -> Self {
        self.halting_mode = mode;
        self
    }

    pub fn halting_mode(&self) -> HaltingMode {
        self.halting_mode
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.symbol_names.len()
    }

    pub fn blank(&self) -> Symbol {
        self.blank
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn halting(&self) -> State {
        self.halting
    }

    pub fn is_halting(&self, q: State) -> bool {
        q == self.halting
    }

    pub fn states(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.num_states()).map(|i| State(i as u16))
    }

    /// Q \ {q_halt}, in index order.
    pub fn working_states(&self) -> impl Iterator<Item = State> + '_ {
        self.states().filter(move |&q| q != self.halting)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.num_symbols()).map(|i| Symbol(i as u16))
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.state_names[q.index()]
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.symbol_names[s.index()]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn symbol_names(&self) -> &[String] {
        &self.symbol_names
    }

    pub fn state_by_name(&self, name: &str) -> Result<State> {
        self.state_names
            .iter()
            .position(|n| n == name)
            .map(|i| State(i as u16))
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn symbol_by_name(&self, name: &str) -> Result<Symbol> {
        self.symbol_names
            .iter()
            .position(|n| n == name)
            .map(|i| Symbol(i as u16))
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// The table entry δ(q, s); `None` on the halting state.
    pub fn transition(&self, q: State, s: Symbol) -> Option<Transition> {
        self.table[q.index() * self.num_symbols() + s.index()]
    }

    /// δ extended to the halting state by the configured halting mode.
    pub fn action(&self, q: State, s: Symbol) -> Transition {
        match self.transition(q, s) {
            Some(t) => t,
            None => match self.halting_mode {
                HaltingMode::Fixpoint => Transition::new(self.halting, s, Move::Stay),
                HaltingMode::Restart => Transition::new(self.initial, s, Move::Stay),
            },
        }
    }

    /// Renders the machine in the text format accepted by
    /// [`parse_machine`](crate::parse_machine).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("states: {}\n", self.state_names.join(" ")));
        out.push_str(&format!("alphabet: {}\n", self.symbol_names.join(" ")));
        out.push_str(&format!("blank: {}\n", self.symbol_name(self.blank)));
        out.push_str(&format!("initial: {}\n", self.state_name(self.initial)));
        out.push_str(&format!("halting: {}\n", self.state_name(self.halting)));
        for q in self.working_states() {
            for s in self.symbols() {
                let t = self.action(q, s);
                out.push_str(&format!(
                    "{} {} -> {} {} {}\n",
                    self.state_name(q),
                    self.symbol_name(s),
                    self.state_name(t.next),
                    self.symbol_name(t.write),
                    t.shift.letter()
                ));
            }
        }
        out
    }
}

fn first_duplicate(names: &[String]) -> Option<&str> {
    let mut seen = std::collections::HashSet::new();
    names.iter().find(|n| !seen.insert(n.as_str())).map(|n| n.as_str())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn toy(mode: HaltingMode) -> TuringMachine {
        let t = |q, s, m| Some(Transition::new(State(q), Symbol(s), m));
        TuringMachine::new(
            names(&["q0", "h"]),
            names(&["0", "1"]),
            Symbol(0),
            State(0),
            State(1),
            vec![vec![t(0, 1, Move::Right), t(1, 0, Move::Stay)], vec![None, None]],
        )
        .unwrap()
        .with_halting_mode(mode)
    }

    #[test]
    fn halting_extension_follows_mode() {
        let m = toy(HaltingMode::Fixpoint);
        assert_eq!(m.action(State(1), Symbol(1)), Transition::new(State(1), Symbol(1), Move::Stay));
        let m = toy(HaltingMode::Restart);
        assert_eq!(m.action(State(1), Symbol(1)), Transition::new(State(0), Symbol(1), Move::Stay));
    }

    #[test]
    fn rejects_partial_table() {
        let err = TuringMachine::new(
            names(&["q0", "h"]),
            names(&["0", "1"]),
            Symbol(0),
            State(0),
            State(1),
            vec![vec![Some(Transition::new(State(0), Symbol(0), Move::Stay)), None], vec![None, None]],
        )
        .unwrap_err();
        assert!(err.to_string().contains("missing rule for (q0, 1)"), "{err}");
    }

    #[test]
    fn rejects_single_symbol_alphabet() {
        let err = TuringMachine::new(
            names(&["q0", "h"]),
            names(&["0"]),
            Symbol(0),
            State(0),
            State(1),
            vec![vec![Some(Transition::new(State(0), Symbol(0), Move::Stay))], vec![None]],
        )
        .unwrap_err();
        assert!(err.to_string().contains("≥ 2 symbols"));
    }

    #[test]
    fn move_offsets_round_trip() {
        for m in [Move::Left, Move::Stay, Move::Right] {
            assert_eq!(Move::from_offset(m.offset()), Some(m));
        }
        assert_eq!(Direction::Plus.as_move(), Move::Right);
        assert_eq!(Move::Left.direction(), Some(Direction::Minus));
    }
}
