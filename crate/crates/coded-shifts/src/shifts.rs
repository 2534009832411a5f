//! Sofic shifts: presentations, shifts of finite type, irreducibility,
//! block maps and sofic over-approximations of arbitrary languages.

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::{determinize, dfa_equivalent, minimize, scc, Automaton, Dfa, Edge};
use crate::error::Error;
use crate::Result;
use std::collections::{BTreeMap, BTreeSet};

/// A sofic shift, held as an essential presentation: every state lies on a
/// bi-infinite path and all states are initial and terminal, so the accepted
/// words are exactly the factors of the shift.
#[derive(Clone, Debug)]
pub struct SoficShift {
    presentation: Automaton,
}

impl SoficShift {
    pub fn from_presentation(a: &Automaton) -> Result<Self> {
        let essential = a.with_all_states_marked().trim_essential();
        if essential.num_states() == 0 {
            return Err(Error::EmptyShift);
        }
        Ok(SoficShift {
            presentation: essential,
        })
    }

    pub fn presentation(&self) -> &Automaton {
        &self.presentation
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.presentation.alphabet()
    }

    /// All factors of length at most `n`.
    pub fn language(&self, n: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::from([Word::empty()]);
        for l in 1..=n {
            out.extend(self.presentation.path_labels(l));
        }
        out
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.presentation.accepts(w)
    }

    /// Minimal deterministic automaton of the factor language.
    pub fn factor_dfa(&self) -> Dfa {
        minimize(&determinize(&self.presentation).expect("all states initial"))
    }

    /// Exact equality of the two shifts, via minimal factor automata.
    pub fn equals(&self, other: &SoficShift) -> bool {
        self.alphabet() == other.alphabet()
            && dfa_equivalent(&self.factor_dfa(), &other.factor_dfa())
    }

    /// Exact irreducibility: some strongly connected sub-presentation has
    /// the full factor language. An irreducible shift has a point whose
    /// forward tail lies in one component and realizes every factor, and a
    /// strongly connected presentation is irreducible outright.
    pub fn is_irreducible(&self) -> bool {
        let comps = scc(&self.presentation);
        for (c, states) in comps.components.iter().enumerate() {
            if comps.trivial[c] {
                continue;
            }
            let mut keep = vec![false; self.presentation.num_states()];
            for &q in states {
                keep[q] = true;
            }
            let (sub, _) = self.presentation.restrict(&keep);
            if let Ok(shift) = SoficShift::from_presentation(&sub) {
                if self.equals(&shift) {
                    return true;
                }
            }
        }
        false
    }
}

/// The shift of finite type over `alphabet` avoiding the given factors,
/// built as a de Bruijn automaton on windows of length `max|w| - 1`.
pub fn sft_from_forbidden(alphabet: &Alphabet, forbidden: &[Word]) -> Result<SoficShift> {
    let m = forbidden.iter().map(Word::len).max().unwrap_or(1).max(1);
    if forbidden.iter().any(|w| w.is_empty()) {
        return Err(Error::Invalid("forbidden word is empty".into()));
    }
    let clean = |w: &Word| forbidden.iter().all(|f| !f.is_factor_of(w));
    let windows: Vec<Word> = crate::alphabet::all_words(alphabet.len(), m - 1)
        .into_iter()
        .filter(|w| clean(w))
        .collect();
    let index: BTreeMap<&Word, usize> = windows.iter().zip(0..).collect();
    let mut edges = Vec::new();
    for (i, u) in windows.iter().enumerate() {
        for a in alphabet.symbols() {
            let mut ua = u.clone();
            ua.push(a);
            if !clean(&ua) {
                continue;
            }
            let v = ua.slice(1..ua.len());
            if let Some(&j) = index.get(&v) {
                edges.push(Edge {
                    src: i,
                    label: a,
                    dst: j,
                });
            }
        }
    }
    let all: BTreeSet<usize> = (0..windows.len()).collect();
    let names = windows.iter().map(|w| alphabet.format(w)).collect();
    let a = Automaton::new(
        alphabet.clone(),
        windows.len(),
        edges,
        all.clone(),
        all,
    )?
    .with_state_names(names);
    SoficShift::from_presentation(&a)
}

/// A sliding block map with `memory` letters of look-behind and
/// `anticipation` letters of look-ahead: the image letter at position `i`
/// is `table[x[i-memory ..= i+anticipation]]`.
#[derive(Clone, Debug)]
pub struct BlockMap {
    pub source: Alphabet,
    pub target: Alphabet,
    pub memory: usize,
    pub anticipation: usize,
    pub table: BTreeMap<Word, Symbol>,
}

impl BlockMap {
    pub fn new(
        source: Alphabet,
        target: Alphabet,
        memory: usize,
        anticipation: usize,
        table: BTreeMap<Word, Symbol>,
    ) -> Result<Self> {
        let w = memory + anticipation + 1;
        for k in table.keys() {
            if k.len() != w {
                return Err(Error::Invalid(format!(
                    "block of length {} in a table for windows of length {w}",
                    k.len()
                )));
            }
        }
        Ok(BlockMap {
            source,
            target,
            memory,
            anticipation,
            table,
        })
    }

    pub fn window(&self) -> usize {
        self.memory + self.anticipation + 1
    }
}

/// Image of a sofic shift under a block map: a transducer construction on
/// states `(p, u)` with `u` the last `window - 1` letters read.
///
/// Errors with [`Error::BlockMapIncomplete`] if some window occurring in the
/// shift is missing from the table.
pub fn apply_block_map(x: &SoficShift, f: &BlockMap) -> Result<SoficShift> {
    if x.alphabet() != &f.source {
        return Err(Error::AlphabetMismatch(
            "block map source alphabet differs from the shift's".into(),
        ));
    }
    let w = f.window();
    let a = x.presentation();
    let adj = a.out_edges();

    // states (p, u): u labels some path of length w - 1 ending at p
    let mut states: Vec<(usize, Word)> = Vec::new();
    let mut index: BTreeMap<(usize, Word), usize> = BTreeMap::new();
    let mut frontier: BTreeSet<(usize, Word)> =
        (0..a.num_states()).map(|q| (q, Word::empty())).collect();
    for _ in 0..w - 1 {
        let mut next = BTreeSet::new();
        for (q, u) in frontier {
            for e in &adj[q] {
                let mut v = u.clone();
                v.push(e.label);
                next.insert((e.dst, v));
            }
        }
        frontier = next;
    }
    for s in frontier {
        index.insert(s.clone(), states.len());
        states.push(s);
    }

    let mut edges = BTreeSet::new();
    for (i, (p, u)) in states.iter().enumerate() {
        for e in &adj[*p] {
            let mut window = u.clone();
            window.push(e.label);
            let out = *f
                .table
                .get(&window)
                .ok_or_else(|| Error::BlockMapIncomplete(f.source.format(&window)))?;
            let tail = window.slice(1..window.len());
            if let Some(&j) = index.get(&(e.dst, tail)) {
                edges.insert(Edge {
                    src: i,
                    label: out,
                    dst: j,
                });
            }
        }
    }
    let all: BTreeSet<usize> = (0..states.len()).collect();
    let names = states
        .iter()
        .map(|(p, u)| format!("({},{})", a.state_name(*p), f.source.format(u)))
        .collect();
    let image = Automaton::new(
        f.target.clone(),
        states.len(),
        edges.into_iter().collect(),
        all.clone(),
        all,
    )?
    .with_state_names(names);
    SoficShift::from_presentation(&image)
}

/// Sofic over-approximation of a factor-closed word set: the de Bruijn
/// presentation whose edges are the observed windows of length `k`. Every
/// sequence whose `k`-windows all occur in `words` belongs to the result.
///
/// Errors if `words` is not factor-closed up to length `k`.
pub fn sofic_overapprox(
    alphabet: &Alphabet,
    words: &BTreeSet<Word>,
    k: usize,
) -> Result<SoficShift> {
    if k == 0 {
        return Err(Error::Invalid("window length must be positive".into()));
    }
    for w in words {
        for f in w.factors(k) {
            if !words.contains(&f) {
                return Err(Error::HypothesisViolated(format!(
                    "word set is not factor-closed: {} misses {}",
                    alphabet.format(w),
                    alphabet.format(&f)
                )));
            }
        }
    }
    let windows: Vec<&Word> = words.iter().filter(|w| w.len() == k.saturating_sub(1)).collect();
    let index: BTreeMap<&Word, usize> = windows.iter().copied().zip(0..).collect();
    let mut edges = Vec::new();
    for w in words.iter().filter(|w| w.len() == k) {
        let u = w.slice(0..k - 1);
        let v = w.slice(1..k);
        if let (Some(&i), Some(&j)) = (index.get(&u), index.get(&v)) {
            edges.push(Edge {
                src: i,
                label: w.0[k - 1],
                dst: j,
            });
        }
    }
    let all: BTreeSet<usize> = (0..windows.len()).collect();
    let names = windows.iter().map(|w| alphabet.format(w)).collect();
    let a = Automaton::new(
        alphabet.clone(),
        windows.len(),
        edges,
        all.clone(),
        all,
    )?
    .with_state_names(names);
    SoficShift::from_presentation(&a)
}
