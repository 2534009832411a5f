//! Finite codes: decipherability, prefix codes, circularity and thinness.

use crate::alphabet::{Alphabet, Word};
use crate::automata::{determinize, minimize, Automaton, Dfa, Edge};
use crate::error::Error;
use crate::rational::RationalExpression;
use crate::unambiguity::{is_strongly_unambiguous, AmbiguityWitness};
use crate::Result;
use std::collections::{BTreeSet, HashMap, VecDeque};

/// A finite set of non-empty words, kept in length-lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteCode {
    alphabet: Alphabet,
    words: Vec<Word>,
}

impl FiniteCode {
    pub fn new(alphabet: Alphabet, mut words: Vec<Word>) -> Result<Self> {
        words.sort_by(|x, y| x.len_lex_cmp(y));
        for (i, w) in words.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::EmptyCodeWord);
            }
            if i > 0 && words[i - 1] == *w {
                return Err(Error::DuplicateCodeWord(alphabet.format(w)));
            }
        }
        Ok(FiniteCode { alphabet, words })
    }

    pub fn from_strs(alphabet: &Alphabet, words: &[&str]) -> Result<Self> {
        let ws = words
            .iter()
            .map(|s| alphabet.word(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet.clone(), ws)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn expression(&self) -> RationalExpression {
        RationalExpression::from_words(&self.alphabet, &self.words)
    }

    /// The flower automaton of `C*`: a central state 0 plus a simple path
    /// for the interior of each code word, initial and terminal at 0.
    pub fn flower(&self) -> Automaton {
        let mut edges = Vec::new();
        let mut names = vec!["0".to_string()];
        let mut n = 1;
        for w in &self.words {
            let mut prev = 0;
            for (i, &a) in w.0.iter().enumerate() {
                let next = if i + 1 == w.len() {
                    0
                } else {
                    names.push(format!("({},{})", self.alphabet.format(w), i + 1));
                    n += 1;
                    n - 1
                };
                edges.push(Edge {
                    src: prev,
                    label: a,
                    dst: next,
                });
                prev = next;
            }
        }
        Automaton::new(
            self.alphabet.clone(),
            n,
            edges,
            BTreeSet::from([0]),
            BTreeSet::from([0]),
        )
        .expect("flower automaton is valid")
        .with_state_names(names)
    }

    /// Minimal deterministic automaton of `C*`.
    pub fn star_dfa(&self) -> Dfa {
        minimize(&determinize(&self.flower()).expect("flower has an initial state"))
    }

    /// The pair `(u, w)` with `u` a proper prefix of `w`, if any: a witness
    /// that the code is not prefix.
    pub fn prefix_violation(&self) -> Option<(Word, Word)> {
        for (i, u) in self.words.iter().enumerate() {
            for w in &self.words[i + 1..] {
                if u.is_proper_prefix_of(w) {
                    return Some((u.clone(), w.clone()));
                }
            }
        }
        None
    }

    pub fn is_prefix(&self) -> bool {
        self.prefix_violation().is_none()
    }
}

/// A word with two distinct factorizations over the code.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CodeViolation {
    pub word: Word,
    pub first: Vec<Word>,
    pub second: Vec<Word>,
}

impl CodeViolation {
    /// Both factorizations use code words, concatenate to `word`, and differ.
    pub fn replays_over(&self, c: &FiniteCode) -> bool {
        let cat = |f: &[Word]| f.iter().fold(Word::empty(), |acc, w| acc.concat(w));
        self.first != self.second
            && cat(&self.first) == self.word
            && cat(&self.second) == self.word
            && self
                .first
                .iter()
                .chain(&self.second)
                .all(|w| c.words().contains(w))
    }
}

/// Sardinas-Patterson with witness reconstruction.
///
/// Search states are overhangs: the suffix by which the leading
/// factorization is ahead. Reaching the empty overhang closes a word with
/// two distinct factorizations.
pub fn is_code(c: &FiniteCode) -> (bool, Option<CodeViolation>) {
    // parent of an overhang: (previous overhang, code word appended, side
    // the word went to). Sides: 0 = first factorization, 1 = second.
    type State = (Word, usize); // (overhang, side that is ahead)
    let mut parent: HashMap<State, (State, Word, usize)> = HashMap::new();
    let mut queue: VecDeque<State> = VecDeque::new();
    let mut goal: Option<State> = None;

    // seed: two distinct code words, one a proper prefix of the other;
    // the longer goes to side 1, which is then ahead
    let mut seeds: Vec<(Word, Word)> = Vec::new();
    'seed: for x in c.words() {
        for y in c.words() {
            if x.is_proper_prefix_of(y) {
                let over = y.slice(x.len()..y.len());
                let s: State = (over.clone(), 1);
                if !parent.contains_key(&s) {
                    parent.insert(s.clone(), ((Word::empty(), 9), y.clone(), 1));
                    seeds.push((x.clone(), y.clone()));
                    queue.push_back(s);
                    if over.is_empty() {
                        break 'seed; // impossible for distinct words, kept for clarity
                    }
                }
            }
        }
    }
    // remember which seed produced each initial overhang
    let seed_of: HashMap<State, (Word, Word)> = queue
        .iter()
        .cloned()
        .zip(seeds.iter().cloned())
        .collect();

    'bfs: while let Some((over, ahead)) = queue.pop_front() {
        let behind = 1 - ahead;
        for w in c.words() {
            // the behind side appends w, which must align with the overhang
            let next: Option<State> = if over.is_prefix_of(w) {
                // w = over . v: the behind side overtakes by v
                Some((w.slice(over.len()..w.len()), behind))
            } else if w.is_proper_prefix_of(&over) {
                // w consumes part of the overhang
                Some((over.slice(w.len()..over.len()), ahead))
            } else {
                None
            };
            let Some(next) = next else { continue };
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), ((over.clone(), ahead), w.clone(), behind));
            if next.0.is_empty() {
                goal = Some(next);
                break 'bfs;
            }
            queue.push_back(next);
        }
    }

    let Some(goal) = goal else {
        return (true, None);
    };
    // walk back to the seed, collecting (word, side)
    let mut steps: Vec<(Word, usize)> = Vec::new();
    let mut cur = goal;
    loop {
        let (prev, w, side) = parent[&cur].clone();
        if prev.1 == 9 {
            // seed record: recover both initial words
            let (x, y) = seed_of[&cur].clone();
            steps.push((y, 1));
            steps.push((x, 0));
            break;
        }
        steps.push((w, side));
        cur = prev;
    }
    steps.reverse();
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (w, side) in steps {
        if side == 0 {
            first.push(w);
        } else {
            second.push(w);
        }
    }
    let word = first.iter().fold(Word::empty(), |acc, w| acc.concat(w));
    (
        false,
        Some(CodeViolation {
            word,
            first,
            second,
        }),
    )
}

/// Decide circularity of a code: `uv, vu` in `C*` forces `u, v` in `C*`.
///
/// For a code this is equivalent to strong unambiguity of the flower
/// automaton: two distinct bi-infinite factorizations of the same sequence
/// exist iff the square of the flower has an off-diagonal cycle, and for a
/// code any such ambiguity is periodic. Errors if the input is not a code.
pub fn is_circular(c: &FiniteCode) -> Result<(bool, Option<(Word, Word)>)> {
    let (ok, violation) = is_code(c);
    if !ok {
        let v = violation.unwrap();
        return Err(Error::NotACode(c.alphabet().format(&v.word)));
    }
    let flower = c.flower();
    let (strong, witness) = is_strongly_unambiguous(&flower);
    if strong {
        return Ok((true, None));
    }
    Ok((false, circularity_witness(c, witness.as_ref())))
}

/// Extract `(u, v)` with `uv, vu` in `C*` but `u` or `v` outside `C*`.
///
/// First tries splits of powers of the pair-cycle word at the cut points of
/// the two factorizations, then falls back to a bounded brute-force search.
fn circularity_witness(
    c: &FiniteCode,
    witness: Option<&AmbiguityWitness>,
) -> Option<(Word, Word)> {
    let dfa = c.star_dfa();
    let in_star = |w: &Word| dfa.accepts(w);
    let valid = |u: &Word, v: &Word| {
        !u.is_empty()
            && !v.is_empty()
            && in_star(&u.concat(v))
            && in_star(&v.concat(u))
            && (!in_star(u) || !in_star(v))
    };

    if let Some(w) = witness {
        let z = &w.word;
        if !z.is_empty() {
            for k in 1..=4usize {
                let zk = z.repeat(k);
                for i in 0..zk.len() {
                    let rot = zk.rotate(i);
                    for cut in 1..rot.len() {
                        let u = rot.slice(0..cut);
                        let v = rot.slice(cut..rot.len());
                        if valid(&u, &v) {
                            return Some((u, v));
                        }
                    }
                }
            }
        }
    }
    // bounded brute force
    let k = c.alphabet().len();
    for total in 2..=8usize {
        for ulen in 1..total {
            for u in crate::alphabet::all_words(k, ulen) {
                for v in crate::alphabet::all_words(k, total - ulen) {
                    if valid(&u, &v) {
                        return Some((u, v));
                    }
                }
            }
        }
    }
    None
}

/// Shortest word of `C*` that is not a factor of any word of `C`, up to
/// `max_len`. A code admitting such a word is very thin.
pub fn very_thin_witness(c: &RationalExpression, max_len: usize) -> Result<Option<Word>> {
    let star = determinize(&c.star_automaton()?)?;
    let code_automaton = c.to_automaton();
    let all: BTreeSet<usize> = (0..code_automaton.num_states()).collect();
    let factors = determinize(
        &code_automaton
            .with_initial(all.clone())
            .with_terminal(all),
    )?;

    // length-lex BFS over the product; accept in star, reject in factors
    let mut seen = BTreeSet::new();
    let start = (Some(star.initial()), Some(factors.initial()));
    seen.insert(start);
    let mut frontier = vec![(start, Word::empty())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for ((s, f), w) in frontier {
            for a in c.alphabet.symbols() {
                let s2 = s.and_then(|q| star.step(q, a));
                let f2 = f.and_then(|q| factors.step(q, a));
                if s2.is_none() {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(a);
                let in_star = s2.is_some_and(|q| star.terminal().contains(&q));
                let in_factors = f2.is_some_and(|q| factors.terminal().contains(&q));
                if in_star && !in_factors {
                    return Ok(Some(w2));
                }
                if seen.insert((s2, f2)) {
                    next.push(((s2, f2), w2));
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(None)
}

/// The Dyck code over `a, b` with closing letters written `A, B`, truncated
/// to nesting depth at most `depth`: the prime balanced words `a w A` and
/// `b w B` with `w` a product of primes of smaller depth, kept up to length
/// `2 * depth`.
pub fn dyck_code(depth: usize) -> FiniteCode {
    let alphabet = Alphabet::from_str("abAB").expect("fixed alphabet");
    let max_len = 2 * depth;
    let mut level: Vec<Word> = Vec::new();
    for _ in 0..depth {
        // products of the previous level's primes, short enough to be wrapped
        let mut inners: BTreeSet<Word> = BTreeSet::from([Word::empty()]);
        let mut frontier: Vec<Word> = vec![Word::empty()];
        while let Some(u) = frontier.pop() {
            for p in &level {
                if u.len() + p.len() + 2 > max_len {
                    continue;
                }
                let v = u.concat(p);
                if inners.insert(v.clone()) {
                    frontier.push(v);
                }
            }
        }
        let mut next: BTreeSet<Word> = BTreeSet::new();
        for (open, close) in [('a', 'A'), ('b', 'B')] {
            let open = alphabet.word(&open.to_string()).expect("fixed letter");
            let close = alphabet.word(&close.to_string()).expect("fixed letter");
            for w in &inners {
                next.insert(open.concat(w).concat(&close));
            }
        }
        level = next.into_iter().collect();
    }
    FiniteCode::new(alphabet, level).expect("distinct non-empty words")
}

/// The code `{ab} u {a b^n a b^(n+1) : 1 <= n <= n_max}`, circular but not
/// strong: `b^inf . a . b^inf` style sequences separate the two notions.
pub fn devolder_code(n_max: usize) -> FiniteCode {
    let alphabet = Alphabet::from_str("ab").expect("fixed alphabet");
    let a = alphabet.word("a").expect("fixed");
    let b = alphabet.word("b").expect("fixed");
    let mut words = vec![alphabet.word("ab").expect("fixed")];
    for n in 1..=n_max {
        let w = a
            .concat(&b.repeat(n))
            .concat(&a)
            .concat(&b.repeat(n + 1));
        words.push(w);
    }
    FiniteCode::new(alphabet, words).expect("distinct non-empty words")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::all_words_up_to;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn ab() -> Alphabet {
        Alphabet::from_str("ab").unwrap()
    }

    fn code(words: &[&str]) -> FiniteCode {
        FiniteCode::from_strs(&ab(), words).unwrap()
    }

    #[test]
    fn rejects_bad_codes() {
        assert!(FiniteCode::from_strs(&ab(), &["a", ""]).is_err());
        assert!(FiniteCode::from_strs(&ab(), &["a", "a"]).is_err());
    }

    #[test]
    fn classic_non_code_with_witness() {
        let c = code(&["a", "ab", "ba"]);
        let (ok, v) = is_code(&c);
        assert!(!ok);
        let v = v.unwrap();
        assert!(v.replays_over(&c));
        // shortest ambiguous word is aba = a.ba = ab.a
        assert_eq!(ab().format(&v.word), "aba");
    }

    #[test]
    fn prefix_codes_are_codes() {
        for words in [vec!["a", "bb"], vec!["ab", "ba"], vec!["a", "ba", "bb"]] {
            let c = code(&words);
            assert!(c.is_prefix());
            let (ok, _) = is_code(&c);
            assert!(ok, "{words:?}");
        }
        let c = code(&["a", "ab"]);
        assert!(!c.is_prefix());
        let (u, w) = c.prefix_violation().unwrap();
        assert_eq!(ab().format(&u), "a");
        assert_eq!(ab().format(&w), "ab");
    }

    /// Oracle: count factorizations of every short word by dynamic
    /// programming; a code has at most one everywhere.
    fn ambiguous_word_exists(c: &FiniteCode, max_len: usize) -> bool {
        for w in all_words_up_to(c.alphabet().len(), max_len) {
            let n = w.len();
            let mut count = vec![0u64; n + 1];
            count[0] = 1;
            for i in 1..=n {
                for cw in c.words() {
                    let l = cw.len();
                    if l <= i && w.slice(i - l..i) == *cw {
                        count[i] = (count[i] + count[i - l]).min(2);
                    }
                }
            }
            if count[n] >= 2 {
                return true;
            }
        }
        false
    }

    #[test]
    fn sardinas_patterson_agrees_with_counting_oracle() {
        let mut rng = StdRng::seed_from_u64(23);
        let pool: Vec<Word> = all_words_up_to(2, 3)
            .into_iter()
            .filter(|w| !w.is_empty())
            .collect();
        for _ in 0..200 {
            let mut words: Vec<Word> = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let w = pool[rng.gen_range(0..pool.len())].clone();
                if !words.contains(&w) {
                    words.push(w);
                }
            }
            let c = FiniteCode::new(ab(), words).unwrap();
            let (ok, v) = is_code(&c);
            let shown: Vec<String> = c.words().iter().map(|w| ab().format(w)).collect();
            if ok {
                assert!(!ambiguous_word_exists(&c, 10), "code {shown:?}");
                assert!(v.is_none());
            } else {
                let v = v.unwrap();
                assert!(v.replays_over(&c), "code {shown:?}");
                assert!(
                    ambiguous_word_exists(&c, v.word.len()),
                    "code {shown:?}"
                );
            }
        }
    }

    #[test]
    fn star_dfa_membership() {
        let c = code(&["a", "bb"]);
        let d = c.star_dfa();
        for w in all_words_up_to(2, 6) {
            // member iff b-runs all even
            let member = ab()
                .format(&w)
                .split('a')
                .all(|run| run.len() % 2 == 0);
            assert_eq!(d.accepts(&w), member, "{}", ab().format(&w));
        }
    }

    #[test]
    fn fibonacci_code_is_circular() {
        let (circ, w) = is_circular(&code(&["a", "ab"])).unwrap();
        assert!(circ);
        assert!(w.is_none());
    }

    #[test]
    fn abba_code_is_not_circular() {
        let c = code(&["ab", "ba"]);
        let (circ, w) = is_circular(&c).unwrap();
        assert!(!circ);
        let (u, v) = w.unwrap();
        let d = c.star_dfa();
        assert!(d.accepts(&u.concat(&v)));
        assert!(d.accepts(&v.concat(&u)));
        assert!(!d.accepts(&u) || !d.accepts(&v));
    }

    #[test]
    fn circularity_requires_a_code() {
        assert!(is_circular(&code(&["a", "ab", "ba"])).is_err());
    }

    /// Oracle: bounded search for a circularity violation.
    fn brute_violation(c: &FiniteCode, max_total: usize) -> Option<(Word, Word)> {
        let d = c.star_dfa();
        for total in 2..=max_total {
            for ulen in 1..total {
                for u in crate::alphabet::all_words(2, ulen) {
                    for v in crate::alphabet::all_words(2, total - ulen) {
                        if d.accepts(&u.concat(&v))
                            && d.accepts(&v.concat(&u))
                            && (!d.accepts(&u) || !d.accepts(&v))
                        {
                            return Some((u, v));
                        }
                    }
                }
            }
        }
        None
    }

    #[test]
    fn circularity_agrees_with_bounded_brute_force() {
        let mut rng = StdRng::seed_from_u64(29);
        let pool: Vec<Word> = all_words_up_to(2, 3)
            .into_iter()
            .filter(|w| !w.is_empty())
            .collect();
        let mut checked = 0;
        while checked < 100 {
            let mut words: Vec<Word> = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let w = pool[rng.gen_range(0..pool.len())].clone();
                if !words.contains(&w) {
                    words.push(w);
                }
            }
            let c = FiniteCode::new(ab(), words).unwrap();
            let Ok((circ, witness)) = is_circular(&c) else {
                continue; // not a code
            };
            checked += 1;
            if let Some((u, v)) = brute_violation(&c, 6) {
                assert!(!circ, "violation ({}, {})", ab().format(&u), ab().format(&v));
            }
            if let Some((u, v)) = witness {
                let d = c.star_dfa();
                assert!(d.accepts(&u.concat(&v)));
                assert!(d.accepts(&v.concat(&u)));
                assert!(!d.accepts(&u) || !d.accepts(&v));
            }
            if circ {
                assert!(brute_violation(&c, 6).is_none());
            }
        }
    }

    #[test]
    fn very_thin_finite_code() {
        let c = code(&["a", "bb"]);
        let w = very_thin_witness(&c.expression(), 8).unwrap().unwrap();
        // aa is in C*, is no factor of a or bb, and is shortest
        assert_eq!(ab().format(&w), "aa");
    }

    #[test]
    fn truncated_dyck_code_is_very_thin() {
        // aA.aA lies in C* but is a factor of no single code word (all code
        // words have length at most 4), and it is the length-lex first such
        // product
        let d = dyck_code(2);
        let w = very_thin_witness(&d.expression(), 8).unwrap().unwrap();
        assert_eq!(d.alphabet().format(&w), "aAaA");
    }

    #[test]
    fn dyck_code_words() {
        let d1 = dyck_code(1);
        let words: Vec<String> = d1
            .words()
            .iter()
            .map(|w| d1.alphabet().format(w))
            .collect();
        assert_eq!(words, vec!["aA", "bB"]);

        let d2 = dyck_code(2);
        let words2: BTreeSet<String> = d2
            .words()
            .iter()
            .map(|w| d2.alphabet().format(w))
            .collect();
        let expected: BTreeSet<String> = ["aA", "bB", "aaAA", "abBA", "baAB", "bbBB"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(words2, expected);
    }

    #[test]
    fn devolder_code_is_circular_and_prefix_free_failure() {
        let c = devolder_code(3);
        assert_eq!(
            c.words().iter().map(|w| ab().format(w)).collect::<Vec<_>>(),
            vec!["ab", "ababb", "abbabbb", "abbbabbbb"]
        );
        let (ok, _) = is_code(&c);
        assert!(ok);
        let (circ, _) = is_circular(&c).unwrap();
        assert!(circ);
        // ab is a proper prefix of the others: not a prefix code
        assert!(!c.is_prefix());
    }
}
