//! Random machines and configurations for property checks.

use rand::Rng;

use crate::config::Configuration;
use crate::machine::{Move, State, Symbol, Transition, TuringMachine};

/// A machine with `states` non-halting states `q0..`, a halting state `h`
/// and symbols `0..symbols`, with every table entry drawn uniformly
/// (the halting state included as a target).
pub fn random_machine<R: Rng + ?Sized>(rng: &mut R, states: usize, symbols: usize) -> TuringMachine {
    assert!(states >= 1 && symbols >= 2);
    let mut names: Vec<String> = (0..states).map(|i| format!("q{i}")).collect();
    names.push("h".into());
    let halting = State(states as u16);
    let moves = [Move::Left, Move::Stay, Move::Right];
    let mut table = Vec::with_capacity(states + 1);
    for _ in 0..states {
        let row = (0..symbols)
            .map(|_| {
                Some(Transition::new(
                    State(rng.gen_range(0..=states) as u16),
                    Symbol(rng.gen_range(0..symbols) as u16),
                    moves[rng.gen_range(0..3)],
                ))
            })
            .collect();
        table.push(row);
    }
    table.push(vec![None; symbols]);
    TuringMachine::new(names, (0..symbols).map(|i| i.to_string()).collect(), Symbol(0), State(0), halting, table)
        .expect("well-formed by construction")
}

/// Random state and a random window of up to `max_width` cells placed
/// somewhere around the head.
pub fn random_configuration<R: Rng + ?Sized>(rng: &mut R, m: &TuringMachine, max_width: usize) -> Configuration {
    let q = State(rng.gen_range(0..m.num_states()) as u16);
    let width = rng.gen_range(0..=max_width) as i64;
    let offset = rng.gen_range(-width - 1..=1);
    let mut x = Configuration::blank_tape(m, q);
    for i in 0..width {
        x.set(offset + i, Symbol(rng.gen_range(0..m.num_symbols()) as u16));
    }
    x
}
