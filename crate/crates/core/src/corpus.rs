//! Built-in machines.

use crate::error::{Error, Result};
use crate::machine::TuringMachine;
use crate::parse::parse_machine;

pub const UTM_6_4: &str = include_str!("../machines/utm_6_4.tm");
pub const WUTM_6_2: &str = include_str!("../machines/wutm_6_2.tm");

/// Names accepted by [`builtin_machine`].
pub const CORPUS: [&str; 2] = ["utm_6_4", "wutm_6_2"];

/// Source text of a corpus machine.
pub fn builtin_source(name: &str) -> Result<&'static str> {
    match name {
        "utm_6_4" => Ok(UTM_6_4),
        "wutm_6_2" => Ok(WUTM_6_2),
        other => Err(Error::UnknownCorpusMachine(other.to_string())),
    }
}

pub fn builtin_machine(name: &str) -> Result<TuringMachine> {
    Ok(parse_machine(builtin_source(name)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Move, Transition};

    fn entry(m: &TuringMachine, q: &str, s: &str) -> Transition {
        m.transition(m.state_by_name(q).unwrap(), m.symbol_by_name(s).unwrap()).unwrap()
    }

    fn expect(m: &TuringMachine, q: &str, w: &str, mv: Move) -> Transition {
        Transition::new(m.state_by_name(q).unwrap(), m.symbol_by_name(w).unwrap(), mv)
    }

    #[test]
    fn utm_6_4_shape_and_entries() {
        let m = builtin_machine("utm_6_4").unwrap();
        assert_eq!(m.num_states(), 7);
        assert_eq!(m.num_symbols(), 4);
        assert_eq!(m.symbol_name(m.blank()), "g");
        assert_eq!(entry(&m, "u2", "b"), expect(&m, "u2", "g", Move::Right));
        assert_eq!(entry(&m, "u6", "c"), expect(&m, "halt", "c", Move::Stay));
        assert_eq!(entry(&m, "u3", "δ"), expect(&m, "u5", "δ", Move::Left));
    }

    #[test]
    fn wutm_6_2_symbol_convention() {
        let m = builtin_machine("wutm_6_2").unwrap();
        assert_eq!(m.num_states(), 7);
        assert_eq!(m.num_symbols(), 2);
        // "u_51R": 1 is b.
        assert_eq!(entry(&m, "u4", "g"), expect(&m, "u5", "b", Move::Right));
        assert_eq!(entry(&m, "u6", "b"), expect(&m, "u4", "g", Move::Right));
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(builtin_machine("utm_9_9"), Err(Error::UnknownCorpusMachine(_))));
    }
}
