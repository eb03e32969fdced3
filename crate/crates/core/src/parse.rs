//! Line-oriented machine description format.
//!
//! ```text
//! # comment
//! states: q0 q1 halt
//! alphabet: 0 1
//! blank: 0
//! initial: q0
//! halting: halt
//! q0 0 -> q1 1 R
//! q0 1 -> HALT          # same as `q0 1 -> halt 1 N`
//! ...
//! ```
//!
//! The five headers may come in any order but all precede the rules. Moves
//! are `L` (-1), `N` (0) and `R` (+1); a +1 move shifts the tape left under
//! the head, which is the same as the head stepping right.

use std::collections::HashMap;

use crate::error::{ParseError, ParseErrorKind};
use crate::machine::{Move, State, Symbol, Transition, TuringMachine};

const HEADERS: [&str; 5] = ["states", "alphabet", "blank", "initial", "halting"];

#[derive(Default)]
struct Headers {
    states: Option<(usize, Vec<String>)>,
    alphabet: Option<(usize, Vec<String>)>,
    blank: Option<(usize, String)>,
    initial: Option<(usize, String)>,
    halting: Option<(usize, String)>,
}

struct Resolved {
    state_index: HashMap<String, State>,
    symbol_index: HashMap<String, Symbol>,
    states: Vec<String>,
    symbols: Vec<String>,
    blank: Symbol,
    initial: State,
    halting: State,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Parses and validates a machine description. The halting mode of the
/// result is [`HaltingMode::Fixpoint`](crate::HaltingMode::Fixpoint).
pub fn parse_machine(text: &str) -> Result<TuringMachine, ParseError> {
    let mut headers = Headers::default();
    let mut resolved: Option<Resolved> = None;
    let mut table: Vec<Vec<Option<Transition>>> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();

        if let Some(name) = tokens[0].strip_suffix(':') {
            if resolved.is_some() {
                return Err(err(line_no, ParseErrorKind::HeaderAfterRules(name.to_string())));
            }
            read_header(&mut headers, name, &tokens[1..], line_no)?;
            continue;
        }

        if resolved.is_none() {
            let r = resolve_headers(&headers, line_no)?;
            table = (0..r.states.len()).map(|_| vec![None; r.symbols.len()]).collect();
            resolved = Some(r);
        }
        let r = resolved.as_ref().unwrap();
        let (q, s, t) = read_rule(r, &tokens, line_no)?;
        if q == r.halting {
            return Err(err(line_no, ParseErrorKind::RuleForHaltingState(tokens[0].to_string())));
        }
        let slot = &mut table[q.index()][s.index()];
        if slot.is_some() {
            return Err(err(
                line_no,
                ParseErrorKind::DuplicateRule { state: tokens[0].to_string(), symbol: tokens[1].to_string() },
            ));
        }
        *slot = Some(t);
    }

    let r = match resolved {
        Some(r) => r,
        None => resolve_headers(&headers, last_line.max(1))?,
    };
    if table.is_empty() {
        table = (0..r.states.len()).map(|_| vec![None; r.symbols.len()]).collect();
    }
    for (qi, row) in table.iter().enumerate() {
        if qi == r.halting.index() {
            continue;
        }
        if let Some(si) = row.iter().position(Option::is_none) {
            return Err(err(
                last_line.max(1),
                ParseErrorKind::MissingRule { state: r.states[qi].clone(), symbol: r.symbols[si].clone() },
            ));
        }
    }

    // Every check `TuringMachine::new` makes has been reported above with a
    // line number already.
    Ok(TuringMachine::new(r.states, r.symbols, r.blank, r.initial, r.halting, table).expect("validated while parsing"))
}

fn read_header(h: &mut Headers, name: &str, args: &[&str], line: usize) -> Result<(), ParseError> {
    let list = || -> Result<(usize, Vec<String>), ParseError> {
        if args.is_empty() {
            let header = HEADERS.iter().find(|&&x| x == name).copied().unwrap_or("?");
            return Err(err(line, ParseErrorKind::HeaderArity { header, expected: "at least one name" }));
        }
        Ok((line, args.iter().map(|s| s.to_string()).collect()))
    };
    let single = |header: &'static str| -> Result<(usize, String), ParseError> {
        match args {
            [one] => Ok((line, one.to_string())),
            _ => Err(err(line, ParseErrorKind::HeaderArity { header, expected: "exactly one name" })),
        }
    };
    let dup = || err(line, ParseErrorKind::DuplicateHeader(name.to_string()));
    match name {
        "states" if h.states.is_none() => h.states = Some(list()?),
        "alphabet" if h.alphabet.is_none() => h.alphabet = Some(list()?),
        "blank" if h.blank.is_none() => h.blank = Some(single("blank")?),
        "initial" if h.initial.is_none() => h.initial = Some(single("initial")?),
        "halting" if h.halting.is_none() => h.halting = Some(single("halting")?),
        n if HEADERS.contains(&n) => return Err(dup()),
        other => return Err(err(line, ParseErrorKind::UnknownHeader(other.to_string()))),
    }
    Ok(())
}

fn resolve_headers(h: &Headers, line: usize) -> Result<Resolved, ParseError> {
    let missing = |name| err(line, ParseErrorKind::MissingHeader(name));
    let (states_line, states) = h.states.clone().ok_or_else(|| missing("states"))?;
    let (alpha_line, symbols) = h.alphabet.clone().ok_or_else(|| missing("alphabet"))?;
    let (blank_line, blank) = h.blank.clone().ok_or_else(|| missing("blank"))?;
    let (initial_line, initial) = h.initial.clone().ok_or_else(|| missing("initial"))?;
    let (halting_line, halting) = h.halting.clone().ok_or_else(|| missing("halting"))?;

    let mut state_index = HashMap::new();
    for (i, name) in states.iter().enumerate() {
        if state_index.insert(name.clone(), State(i as u16)).is_some() {
            return Err(err(states_line, ParseErrorKind::DuplicateState(name.clone())));
        }
    }
    let mut symbol_index = HashMap::new();
    for (i, name) in symbols.iter().enumerate() {
        if symbol_index.insert(name.clone(), Symbol(i as u16)).is_some() {
            return Err(err(alpha_line, ParseErrorKind::DuplicateSymbol(name.clone())));
        }
    }
    if symbols.len() < 2 {
        return Err(err(alpha_line, ParseErrorKind::AlphabetTooSmall));
    }
    let state = |name: &str, at| {
        state_index.get(name).copied().ok_or_else(|| err(at, ParseErrorKind::UnknownState(name.to_string())))
    };
    let initial = state(&initial, initial_line)?;
    let halting = state(&halting, halting_line)?;
    let blank = symbol_index
        .get(&blank)
        .copied()
        .ok_or_else(|| err(blank_line, ParseErrorKind::UnknownSymbol(blank.clone())))?;
    Ok(Resolved { state_index, symbol_index, states, symbols, blank, initial, halting })
}

fn read_rule(r: &Resolved, tokens: &[&str], line: usize) -> Result<(State, Symbol, Transition), ParseError> {
    let state = |name: &str| {
        r.state_index.get(name).copied().ok_or_else(|| err(line, ParseErrorKind::UnknownState(name.to_string())))
    };
    let symbol = |name: &str| {
        r.symbol_index.get(name).copied().ok_or_else(|| err(line, ParseErrorKind::UnknownSymbol(name.to_string())))
    };
    match tokens {
        [q, s, "->", "HALT"] => {
            let (q, s) = (state(q)?, symbol(s)?);
            Ok((q, s, Transition::new(r.halting, s, Move::Stay)))
        }
        [q, s, "->", next, write, mv] => {
            let shift = match *mv {
                "L" => Move::Left,
                "R" => Move::Right,
                "N" => Move::Stay,
                other => return Err(err(line, ParseErrorKind::UnknownMove(other.to_string()))),
            };
            Ok((state(q)?, symbol(s)?, Transition::new(state(next)?, symbol(write)?, shift)))
        }
        _ => Err(err(line, ParseErrorKind::MalformedRule)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "\
# toy
states: q h
alphabet: 0 1
blank: 0
initial: q
halting: h
q 0 -> q 1 R
q 1 -> HALT
";

    #[test]
    fn parses_toy_machine() {
        let m = parse_machine(TOY).unwrap();
        assert_eq!(m.num_states(), 2);
        assert_eq!(m.num_symbols(), 2);
        assert_eq!(m.transition(State(0), Symbol(0)), Some(Transition::new(State(0), Symbol(1), Move::Right)));
        assert_eq!(m.transition(State(0), Symbol(1)), Some(Transition::new(State(1), Symbol(1), Move::Stay)));
    }

    #[test]
    fn headers_in_any_order() {
        let text = "halting: h\nblank: 0\ninitial: q\nalphabet: 0 1\nstates: q h\nq 0 -> q 0 N\nq 1 -> h 1 L\n";
        let m = parse_machine(text).unwrap();
        assert_eq!(m.state_name(m.halting()), "h");
    }

    #[test]
    fn text_round_trip() {
        let m = parse_machine(TOY).unwrap();
        assert_eq!(parse_machine(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn missing_rule_names_pair() {
        let text = TOY.replace("q 1 -> HALT\n", "");
        let e = parse_machine(&text).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingRule { state: "q".into(), symbol: "1".into() });
        assert_eq!(e.line, 7);
    }

    #[test]
    fn single_symbol_alphabet() {
        let e =
            parse_machine("states: q h\nalphabet: 0\nblank: 0\ninitial: q\nhalting: h\nq 0 -> q 0 R\n").unwrap_err();
        assert_eq!(e, ParseError { line: 2, kind: ParseErrorKind::AlphabetTooSmall });
        assert!(e.to_string().contains("alphabet must have ≥ 2 symbols"));
    }

    #[test]
    fn missing_header() {
        let text = TOY.replace("initial: q\n", "");
        let e = parse_machine(&text).unwrap_err();
        assert_eq!(e, ParseError { line: 6, kind: ParseErrorKind::MissingHeader("initial") });
    }

    #[test]
    fn duplicate_names() {
        let e = parse_machine(&TOY.replace("states: q h", "states: q h q")).unwrap_err();
        assert_eq!(e, ParseError { line: 2, kind: ParseErrorKind::DuplicateState("q".into()) });
        let e = parse_machine(&TOY.replace("alphabet: 0 1", "alphabet: 0 1 1")).unwrap_err();
        assert_eq!(e, ParseError { line: 3, kind: ParseErrorKind::DuplicateSymbol("1".into()) });
    }

    #[test]
    fn bad_rule_tokens() {
        let e = parse_machine(&TOY.replace("q 0 -> q 1 R", "q 0 -> q 2 R")).unwrap_err();
        assert_eq!(e, ParseError { line: 7, kind: ParseErrorKind::UnknownSymbol("2".into()) });
        let e = parse_machine(&TOY.replace("q 0 -> q 1 R", "q 0 -> p 1 R")).unwrap_err();
        assert_eq!(e, ParseError { line: 7, kind: ParseErrorKind::UnknownState("p".into()) });
        let e = parse_machine(&TOY.replace("q 0 -> q 1 R", "q 0 -> q 1 X")).unwrap_err();
        assert_eq!(e, ParseError { line: 7, kind: ParseErrorKind::UnknownMove("X".into()) });
        let e = parse_machine(&TOY.replace("q 0 -> q 1 R", "q 0 q 1 R")).unwrap_err();
        assert_eq!(e, ParseError { line: 7, kind: ParseErrorKind::MalformedRule });
    }

    #[test]
    fn duplicate_and_halting_rules() {
        let e = parse_machine(&format!("{TOY}q 0 -> q 0 L\n")).unwrap_err();
        assert_eq!(e.line, 9);
        assert!(matches!(e.kind, ParseErrorKind::DuplicateRule { .. }));
        let e = parse_machine(&format!("{TOY}h 0 -> q 0 L\n")).unwrap_err();
        assert_eq!(e, ParseError { line: 9, kind: ParseErrorKind::RuleForHaltingState("h".into()) });
    }

    #[test]
    fn header_after_rules() {
        let e = parse_machine(&format!("{TOY}blank: 1\n")).unwrap_err();
        assert_eq!(e, ParseError { line: 9, kind: ParseErrorKind::HeaderAfterRules("blank".into()) });
    }
}
