//! Generalized shifts and the embedding of machines into them.
//!
//! A generalized shift of radius r reads the window s[-r..=r], replaces it
//! by G(window), and then shifts the whole sequence by F(window) (the
//! result's cell i is the substituted sequence's cell i + F).
//!
//! A configuration (q, t) embeds as `… t₋₁ . q t₀ t₁ …` over the letters
//! A = Σ ∪ Q: cell 0 holds the state, cell i ≥ 1 holds t_{i-1} and cell
//! i ≤ -1 holds t_i. The compiled radius-1 shift acts on windows
//! (t₋₁, q, t₀) and commutes with the embedding.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{step, Configuration};
use crate::error::{Error, Result};
use crate::machine::{Move, State, Symbol, TuringMachine};
use crate::sample::random_configuration;
use crate::scalar::{lift, pow, Scalar};

/// Index into a letter alphabet. Letter 0 is the default (unstored) letter.
pub type Letter = u32;

/// A finitely supported bi-infinite sequence of letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ASequence {
    cells: BTreeMap<i64, Letter>,
}

impl ASequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, i: i64) -> Letter {
        self.cells.get(&i).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: i64, letter: Letter) {
        if letter == 0 {
            self.cells.remove(&i);
        } else {
            self.cells.insert(i, letter);
        }
    }

    pub fn from_cells(cells: impl IntoIterator<Item = (i64, Letter)>) -> Self {
        let mut s = ASequence::new();
        for (i, l) in cells {
            s.set(i, l);
        }
        s
    }

    /// Non-default cells in increasing order.
    pub fn cells(&self) -> impl Iterator<Item = (i64, Letter)> + '_ {
        self.cells.iter().map(|(&i, &l)| (i, l))
    }

    /// Text form `… x y . z w …` with cell 0 right after the dot.
    pub fn render(&self, names: &[String]) -> String {
        let lo = self.cells.keys().next().copied().unwrap_or(0).min(0);
        let hi = self.cells.keys().next_back().copied().unwrap_or(0).max(0);
        let mut out = String::from("…");
        for i in lo..=hi {
            if i == 0 {
                out.push_str(" .");
            }
            let l = self.get(i) as usize;
            match names.get(l) {
                Some(name) => {
                    let _ = write!(out, " {name}");
                }
                None => {
                    let _ = write!(out, " #{l}");
                }
            }
        }
        out.push_str(" …");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub replacement: Vec<Letter>,
    pub shift: i64,
}

/// Moore's generalized shift (r, F, G), stored sparsely: windows without a
/// rule keep their letters and shift by `default_shift`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedShift {
    radius: usize,
    letters: Vec<String>,
    default_shift: i64,
    rules: BTreeMap<Vec<Letter>, Rule>,
}

impl GeneralizedShift {
    /// The identity map (F = 0, G = id) of the given radius.
    pub fn identity(radius: usize, letters: Vec<String>) -> Self {
        GeneralizedShift { radius, letters, default_shift: 0, rules: BTreeMap::new() }
    }

    /// σ^shift: G = id everywhere and F constant.
    pub fn bernoulli(letters: Vec<String>, shift: i64) -> Self {
        GeneralizedShift { radius: 0, letters, default_shift: shift, rules: BTreeMap::new() }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn rules(&self) -> impl Iterator<Item = (&[Letter], &Rule)> + '_ {
        self.rules.iter().map(|(w, r)| (w.as_slice(), r))
    }

    /// Sets G(window) and F(window). Both windows must have length 2r + 1.
    pub fn insert_rule(&mut self, window: Vec<Letter>, replacement: Vec<Letter>, shift: i64) {
        let width = 2 * self.radius + 1;
        assert_eq!(window.len(), width, "window length must be 2r + 1");
        assert_eq!(replacement.len(), width, "replacement length must be 2r + 1");
        if replacement == window && shift == self.default_shift {
            self.rules.remove(&window);
        } else {
            self.rules.insert(window, Rule { replacement, shift });
        }
    }

    /// (G(window), F(window)).
    pub fn rule(&self, window: &[Letter]) -> (Vec<Letter>, i64) {
        match self.rules.get(window) {
            Some(r) => (r.replacement.clone(), r.shift),
            None => (window.to_vec(), self.default_shift),
        }
    }

    pub fn document(&self) -> ShiftDocument {
        let name = |l: &Letter| self.letters.get(*l as usize).cloned().unwrap_or_else(|| format!("#{l}"));
        ShiftDocument {
            radius: self.radius,
            alphabet: self.letters.clone(),
            default_rule: DefaultRule { replacement: "identity", shift: self.default_shift },
            rules: self
                .rules
                .iter()
                .map(|(w, r)| RuleDocument {
                    window: w.iter().map(name).collect(),
                    replacement: r.replacement.iter().map(name).collect(),
                    shift: r.shift,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftDocument {
    pub radius: usize,
    pub alphabet: Vec<String>,
    pub default_rule: DefaultRule,
    pub rules: Vec<RuleDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefaultRule {
    pub replacement: &'static str,
    pub shift: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleDocument {
    pub window: Vec<String>,
    pub replacement: Vec<String>,
    pub shift: i64,
}

/// Δ(s).
pub fn gshift_step(d: &GeneralizedShift, s: &ASequence) -> ASequence {
    let r = d.radius as i64;
    let window: Vec<Letter> = (-r..=r).map(|i| s.get(i)).collect();
    let (replacement, shift) = d.rule(&window);
    let mut substituted = s.clone();
    for (i, l) in (-r..=r).zip(replacement) {
        substituted.set(i, l);
    }
    if shift == 0 {
        return substituted;
    }
    ASequence { cells: substituted.cells.into_iter().map(|(i, l)| (i - shift, l)).collect() }
}

/// Letter of a tape symbol: the blank is letter 0, the other symbols
/// follow in alphabet order.
pub fn symbol_letter(m: &TuringMachine, s: Symbol) -> Letter {
    let k = m.num_symbols() as u32;
    (s.0 as u32 + k - m.blank().0 as u32) % k
}

/// Letter of a state: after all tape symbols.
pub fn state_letter(m: &TuringMachine, q: State) -> Letter {
    m.num_symbols() as u32 + q.0 as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoded {
    Tape(Symbol),
    State(State),
}

pub fn decode_letter(m: &TuringMachine, l: Letter) -> Option<Decoded> {
    let k = m.num_symbols() as u32;
    if l < k {
        Some(Decoded::Tape(Symbol(((l + m.blank().0 as u32) % k) as u16)))
    } else if ((l - k) as usize) < m.num_states() {
        Some(Decoded::State(State((l - k) as u16)))
    } else {
        None
    }
}

/// Letter names of A = Σ ∪ Q in letter order.
pub fn machine_letters(m: &TuringMachine) -> Vec<String> {
    let k = m.num_symbols() as u32;
    (0..k)
        .map(|l| match decode_letter(m, l) {
            Some(Decoded::Tape(s)) => m.symbol_name(s).to_string(),
            _ => unreachable!(),
        })
        .chain(m.states().map(|q| m.state_name(q).to_string()))
        .collect()
}

pub fn embed(m: &TuringMachine, x: &Configuration) -> ASequence {
    let mut s = ASequence::new();
    s.set(0, state_letter(m, x.state()));
    for (i, sym) in x.tape() {
        let cell = if i >= 0 { i + 1 } else { i };
        s.set(cell, symbol_letter(m, sym));
    }
    s
}

/// Inverse of [`embed`] on its image.
pub fn unembed(m: &TuringMachine, s: &ASequence) -> Result<Configuration> {
    let q = match decode_letter(m, s.get(0)) {
        Some(Decoded::State(q)) => q,
        _ => return Err(Error::NotInImage("cell 0 does not hold a state".into())),
    };
    let mut x = Configuration::blank_tape(m, q);
    for (i, l) in s.cells() {
        if i == 0 {
            continue;
        }
        match decode_letter(m, l) {
            Some(Decoded::Tape(sym)) => x.set(if i > 0 { i - 1 } else { i }, sym),
            Some(Decoded::State(_)) => {
                return Err(Error::NotInImage(format!("state letter at cell {i}")));
            }
            None => return Err(Error::NotInImage(format!("letter {l} outside the alphabet"))),
        }
    }
    Ok(x)
}

/// The radius-1 shift Δ with Δ ∘ embed = embed ∘ step. Windows not of the
/// form (tape, state, tape) are left alone.
pub fn compile_gshift(m: &TuringMachine) -> GeneralizedShift {
    let mut d = GeneralizedShift::identity(1, machine_letters(m));
    for q in m.states() {
        let ql = state_letter(m, q);
        for left in m.symbols() {
            for head in m.symbols() {
                let t = m.action(q, head);
                let (a, b) = (symbol_letter(m, left), symbol_letter(m, head));
                let (next, written) = (state_letter(m, t.next), symbol_letter(m, t.write));
                let replacement = match t.shift {
                    Move::Right => vec![a, written, next],
                    Move::Left => vec![next, a, written],
                    Move::Stay => vec![a, next, written],
                };
                d.insert_rule(vec![a, ql, b], replacement, t.shift.offset());
            }
        }
    }
    d
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub configuration: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyReport {
    pub samples: u64,
    pub seed: u64,
    pub passed: u64,
    pub failed: u64,
    pub first_counterexample: Option<Counterexample>,
}

impl ConjugacyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Checks Δ(embed(x)) = embed(step(x)) on `samples` random configurations.
pub fn verify_conjugacy(m: &TuringMachine, samples: u64, seed: u64) -> ConjugacyReport {
    verify_conjugacy_with(m, &compile_gshift(m), samples, seed)
}

/// Same check against an arbitrary shift (for testing corrupted tables).
pub fn verify_conjugacy_with(m: &TuringMachine, d: &GeneralizedShift, samples: u64, seed: u64) -> ConjugacyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ConjugacyReport { samples, seed, passed: 0, failed: 0, first_counterexample: None };
    for _ in 0..samples {
        let x = random_configuration(&mut rng, m, 8);
        let expected = embed(m, &step(m, &x));
        let got = gshift_step(d, &embed(m, &x));
        if got == expected {
            report.passed += 1;
        } else {
            report.failed += 1;
            if report.first_counterexample.is_none() {
                report.first_counterexample = Some(Counterexample {
                    configuration: x.render(m),
                    expected: expected.render(d.letters()),
                    got: got.render(d.letters()),
                });
            }
        }
    }
    report
}

/// A finitely supported bi-infinite binary sequence, stored as the set of
/// cells holding 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinarySequence {
    pub ones: BTreeSet<i64>,
}

impl BinarySequence {
    pub fn from_ones(ones: impl IntoIterator<Item = i64>) -> Self {
        BinarySequence { ones: ones.into_iter().collect() }
    }

    pub fn get(&self, i: i64) -> bool {
        self.ones.contains(&i)
    }
}

/// Bits per letter for an alphabet of `size` letters: ceil(log2 size), at
/// least 1.
pub fn code_width(size: usize) -> u32 {
    let mut w = 1;
    while (1usize << w) < size {
        w += 1;
    }
    w
}

/// Fixed-width binary code: the letter at cell i occupies bits
/// [i·w, (i+1)·w), most significant bit first. Letter 0 codes as all
/// zeros, so finite support is preserved.
pub fn block_encode(s: &ASequence, alphabet_size: usize) -> BinarySequence {
    let w = code_width(alphabet_size) as i64;
    let mut ones = BTreeSet::new();
    for (i, l) in s.cells() {
        for bit in 0..w {
            if (l >> (w - 1 - bit)) & 1 == 1 {
                ones.insert(i * w + bit);
            }
        }
    }
    BinarySequence { ones }
}

/// A point of the square Cantor set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CantorPoint<T> {
    pub x: T,
    pub y: T,
}

/// e(s) = (Σ_k s_{-k}·2/3^k, Σ_k s_{k-1}·2/3^k), evaluated in `T`.
pub fn cantor_encode<T: Scalar>(s: &BinarySequence) -> CantorPoint<T> {
    let two = lift::<T>(2);
    let three = lift::<T>(3);
    let term = |k: i64| two.clone() / pow(three.clone(), k as u32);
    let mut x = T::zero();
    let mut y = T::zero();
    for &i in &s.ones {
        if i < 0 {
            x = x + term(-i);
        } else {
            y = y + term(i + 1);
        }
    }
    CantorPoint { x, y }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::make_config_named;
    use crate::corpus::builtin_machine;
    use crate::machine::HaltingMode;
    use crate::Rational;

    fn named(d: &GeneralizedShift, s: &ASequence) -> Vec<(i64, String)> {
        s.cells().map(|(i, l)| (i, d.letters()[l as usize].clone())).collect()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn embed_examples() {
        let m = builtin_machine("utm_6_4").unwrap();
        let names = machine_letters(&m);
        let q = m.state_by_name("u2").unwrap();
        let blank = Configuration::blank_tape(&m, q);
        assert_eq!(embed(&m, &blank), ASequence::from_cells([(0, state_letter(&m, q))]));

        let x = make_config_named(&m, "u2", &["b"], 0).unwrap();
        let s = embed(&m, &x);
        let as_names: Vec<(i64, &str)> = s.cells().map(|(i, l)| (i, names[l as usize].as_str())).collect();
        assert_eq!(as_names, vec![(0, "u2"), (1, "b")]);
        assert_eq!(unembed(&m, &s).unwrap(), x);

        let x = make_config_named(&m, "u2", &["c"], -1).unwrap();
        let as_names: Vec<(i64, String)> = embed(&m, &x).cells().map(|(i, l)| (i, names[l as usize].clone())).collect();
        assert_eq!(as_names, vec![(-1, "c".to_string()), (0, "u2".to_string())]);
    }

    #[test]
    fn unembed_rejects_off_image() {
        let m = builtin_machine("utm_6_4").unwrap();
        let q = state_letter(&m, m.initial());
        let blank_state = unembed(&m, &ASequence::from_cells([(0, q)])).unwrap();
        assert_eq!(blank_state, Configuration::blank_tape(&m, m.initial()));
        assert!(matches!(unembed(&m, &ASequence::from_cells([(1, q)])), Err(Error::NotInImage(_))));
        assert!(matches!(unembed(&m, &ASequence::from_cells([(0, q), (3, q)])), Err(Error::NotInImage(_))));
    }

    #[test]
    fn compiled_utm_window() {
        let m = builtin_machine("utm_6_4").unwrap();
        let d = compile_gshift(&m);
        let l = |n: &str| match m.state_by_name(n) {
            Ok(q) => state_letter(&m, q),
            Err(_) => symbol_letter(&m, m.symbol_by_name(n).unwrap()),
        };
        let (g, f) = d.rule(&[l("g"), l("u2"), l("b")]);
        assert_eq!(g, vec![l("g"), l("g"), l("u2")]);
        assert_eq!(f, 1);
        // two state letters: identity
        assert_eq!(d.rule(&[l("u1"), l("u2"), l("b")]), (vec![l("u1"), l("u2"), l("b")], 0));
        // fixpoint halting window: identity
        assert_eq!(d.rule(&[l("b"), l("halt"), l("c")]), (vec![l("b"), l("halt"), l("c")], 0));
    }

    #[test]
    fn restart_mode_halting_window() {
        let m = builtin_machine("utm_6_4").unwrap().with_halting_mode(HaltingMode::Restart);
        let d = compile_gshift(&m);
        let (h, u1) = (state_letter(&m, m.halting()), state_letter(&m, m.initial()));
        assert_eq!(d.rule(&[1, h, 2]), (vec![1, u1, 2], 0));
    }

    #[test]
    fn identity_and_bernoulli() {
        let letters: Vec<String> = ["_", "a"].iter().map(|s| s.to_string()).collect();
        let s = ASequence::from_cells([(0, 1), (3, 1)]);
        assert_eq!(gshift_step(&GeneralizedShift::identity(2, letters.clone()), &s), s);
        let sigma = GeneralizedShift::bernoulli(letters, 1);
        let out = gshift_step(&sigma, &ASequence::from_cells([(0, 1)]));
        assert_eq!(named(&sigma, &out), vec![(-1, "a".to_string())]);
    }

    #[test]
    fn compiled_step_commutes_on_example() {
        let m = builtin_machine("utm_6_4").unwrap();
        let d = compile_gshift(&m);
        let x = make_config_named(&m, "u2", &["b", "g"], 0).unwrap();
        assert_eq!(gshift_step(&d, &embed(&m, &x)), embed(&m, &step(&m, &x)));
    }

    #[test]
    fn corpus_conjugacy() {
        for name in ["utm_6_4", "wutm_6_2"] {
            let m = builtin_machine(name).unwrap();
            let r = verify_conjugacy(&m, 300, 1);
            assert_eq!((r.passed, r.failed), (300, 0), "{name}: {:?}", r.first_counterexample);
        }
    }

    #[test]
    fn corrupted_table_is_caught() {
        let m = builtin_machine("wutm_6_2").unwrap();
        let mut d = compile_gshift(&m);
        let u4 = state_letter(&m, m.state_by_name("u4").unwrap());
        // flip the written symbol of every u4 window
        for left in 0..2 {
            for head in 0..2 {
                let (mut g, f) = d.rule(&[left, u4, head]);
                g[1] ^= 1;
                d.insert_rule(vec![left, u4, head], g, f);
            }
        }
        let r = verify_conjugacy_with(&m, &d, 500, 2);
        assert!(r.failed > 0);
        let c = r.first_counterexample.unwrap();
        assert!(c.configuration.starts_with("u4"), "{}", c.configuration);
        assert_ne!(c.expected, c.got);
    }

    #[test]
    fn block_code_examples() {
        let s = ASequence::from_cells([(-1, 3)]);
        assert_eq!(block_encode(&s, 10), BinarySequence::from_ones([-2, -1]));
        assert_eq!(code_width(10), 4);
        assert_eq!(block_encode(&ASequence::new(), 10), BinarySequence::default());
        let s = ASequence::from_cells([(-2, 1), (0, 1), (5, 1)]);
        assert_eq!(block_encode(&s, 2), BinarySequence::from_ones([-2, 0, 5]));
        assert_eq!(code_width(2), 1);
        assert_eq!(code_width(11), 4);
        assert_eq!(code_width(17), 5);
    }

    #[test]
    fn cantor_examples() {
        let zero = cantor_encode::<Rational>(&BinarySequence::default());
        assert_eq!(zero, CantorPoint { x: rat(0, 1), y: rat(0, 1) });
        let p = cantor_encode::<Rational>(&BinarySequence::from_ones([-1]));
        assert_eq!(p, CantorPoint { x: rat(2, 3), y: rat(0, 1) });
        let p = cantor_encode::<Rational>(&BinarySequence::from_ones([0]));
        assert_eq!(p, CantorPoint { x: rat(0, 1), y: rat(2, 3) });
        let p = cantor_encode::<Rational>(&BinarySequence::from_ones([-2, 1]));
        assert_eq!(p, CantorPoint { x: rat(2, 9), y: rat(2, 9) });
        let f = cantor_encode::<f64>(&BinarySequence::from_ones([-1, 0]));
        assert!((f.x - 2.0 / 3.0).abs() < 1e-15 && (f.y - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn shift_document() {
        let m = builtin_machine("wutm_6_2").unwrap();
        let doc = compile_gshift(&m).document();
        assert_eq!(doc.radius, 1);
        assert_eq!(doc.alphabet.len(), 9);
        // 6 working states × 2 × 2 windows; halting windows are identity
        assert_eq!(doc.rules.len(), 24);
        assert!(doc.rules.iter().all(|r| r.window.len() == 3 && (-1..=1).contains(&r.shift)));
    }

    #[test]
    fn render_sequence() {
        let m = builtin_machine("utm_6_4").unwrap();
        let x = make_config_named(&m, "u2", &["b", "c"], -1).unwrap();
        assert_eq!(embed(&m, &x).render(&machine_letters(&m)), "… b . u2 c …");
    }
}
