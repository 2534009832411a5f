//! Constants, the subset construction, synchronized shifts, and the
//! recoding of a synchronized prefix code into a strong one.

use crate::alphabet::Word;
use crate::automata::{scc, Automaton, Dfa, Edge};
use crate::error::Error;
use crate::rational::{state_elimination, RationalExpression};
use crate::shifts::SoficShift;
use crate::unambiguity::is_strongly_unambiguous_through;
use crate::Result;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// A constant: a word all of whose paths in the automaton end in `sink`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Constant {
    pub word: Word,
    pub sink: usize,
}

/// Search for a shortest constant by tracking the image of the full state
/// set under candidate words, breadth-first by length. Among equally short
/// constants the lexicographically greatest is returned: the worked examples
/// pin that choice where several coexist.
pub fn find_constant(cstar: &Dfa, max_len: usize) -> Option<Constant> {
    let all: BTreeSet<usize> = (0..cstar.num_states()).collect();
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::from([all.clone()]);
    let mut frontier: Vec<(Word, BTreeSet<usize>)> = vec![(Word::empty(), all)];
    for len in 0..=max_len {
        let mut hit: Option<Constant> = None;
        for (w, set) in &frontier {
            if set.len() == 1 {
                hit = Some(Constant {
                    word: w.clone(),
                    sink: *set.iter().next().unwrap(),
                });
            }
        }
        if hit.is_some() {
            return hit;
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for (w, set) in frontier {
            for a in cstar.alphabet().symbols() {
                let image: BTreeSet<usize> =
                    set.iter().filter_map(|&q| cstar.step(q, a)).collect();
                if image.is_empty() || !seen.insert(image.clone()) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(a);
                next.push((w2, image));
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    None
}

/// Check whether `w` labels at least one path of `cstar` and all such paths
/// end in the same state.
pub fn is_constant(cstar: &Dfa, w: &Word) -> bool {
    cstar.image_of_all(w).len() == 1
}

/// Default search bound for constants, quadratic in the automaton size as
/// for synchronizing words of deterministic automata.
pub fn default_constant_bound(cstar: &Dfa) -> usize {
    2 * cstar.num_states() * cstar.num_states()
}

/// Subset construction seeded with the image of a word: the reachable
/// subsets of globally minimal cardinality form a closed subautomaton,
/// returned with all states marked.
pub fn fischer_subset(d: &Dfa, w: &Word) -> Automaton {
    let seed = d.image_of_all(w);
    let mut order: Vec<BTreeSet<usize>> = vec![seed.clone()];
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::from([seed]);
    let mut i = 0;
    while i < order.len() {
        let cur = order[i].clone();
        for a in d.alphabet().symbols() {
            let image: BTreeSet<usize> = cur.iter().filter_map(|&q| d.step(q, a)).collect();
            if !image.is_empty() && seen.insert(image.clone()) {
                order.push(image);
            }
        }
        i += 1;
    }
    let mc = order.iter().map(BTreeSet::len).min().unwrap_or(0);
    let kept: Vec<&BTreeSet<usize>> = order.iter().filter(|s| s.len() == mc).collect();
    let index: BTreeMap<&BTreeSet<usize>, usize> = kept.iter().copied().zip(0..).collect();
    let mut edges = Vec::new();
    for (i, s) in kept.iter().enumerate() {
        for a in d.alphabet().symbols() {
            let image: BTreeSet<usize> = s.iter().filter_map(|&q| d.step(q, a)).collect();
            if let Some(&j) = index.get(&image) {
                edges.push(Edge {
                    src: i,
                    label: a,
                    dst: j,
                });
            }
        }
    }
    let names = kept
        .iter()
        .map(|s| {
            let inner: Vec<String> = s.iter().map(|q| q.to_string()).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect();
    let all: BTreeSet<usize> = (0..kept.len()).collect();
    Automaton::new(d.alphabet().clone(), kept.len(), edges, all.clone(), all)
        .expect("subset automaton is valid")
        .with_state_names(names)
}

/// Decide whether a sofic shift is synchronized: the minimal automaton of
/// its language must have a unique sink component, and that component must
/// admit a merging word. Returns such a word (a constant of the language).
pub fn synchronizing_constant(x: &SoficShift) -> Option<Word> {
    let d = x.factor_dfa();
    let a = d.to_automaton();
    let comps = scc(&a);
    let sinks: Vec<usize> = (0..comps.components.len())
        .filter(|c| {
            !comps.trivial[*c] && !comps.dag_edges.iter().any(|&(from, _)| from == *c)
        })
        .collect();
    let [sink] = sinks[..] else {
        return None;
    };
    // merge the sink component greedily: repeatedly find a word collapsing
    // the current image by at least one state
    let component: BTreeSet<usize> = comps.components[sink].iter().copied().collect();
    let mut image = component.clone();
    let mut constant = Word::empty();
    while image.len() > 1 {
        let mut found = None;
        // BFS over images reachable from the current one
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::from([image.clone()]);
        let mut queue: VecDeque<(Word, BTreeSet<usize>)> =
            VecDeque::from([(Word::empty(), image.clone())]);
        'bfs: while let Some((w, set)) = queue.pop_front() {
            for s in d.alphabet().symbols() {
                let next: BTreeSet<usize> = set.iter().filter_map(|&q| d.step(q, s)).collect();
                if next.is_empty() || !next.iter().all(|q| component.contains(q)) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(s);
                if next.len() < image.len() {
                    found = Some((w2, next));
                    break 'bfs;
                }
                if seen.insert(next.clone()) {
                    queue.push_back((w2, next));
                }
            }
        }
        let (w, next) = found?;
        constant = constant.concat(&w);
        image = next;
    }
    Some(constant)
}

/// The result of recoding a synchronized prefix code through a constant.
#[derive(Clone, Debug)]
pub struct RecodedPresentation {
    pub constant: Constant,
    /// Product automaton on states `(u, p)`: `u` the last `|w|` letters
    /// read, `p` the current state of the minimal automaton of `C*`.
    pub product_automaton: Automaton,
    /// Index of the anchor state `(w, q_w)` in the product automaton.
    pub anchor: usize,
    /// The anchor's strongly connected component, with the anchor as the
    /// sole initial and terminal state: the automaton of `C'*`.
    pub first_return_automaton: Automaton,
    /// Rational expression of the first returns to the anchor: the code `C'`.
    pub first_return_code: RationalExpression,
}

/// Recode a synchronized prefix code `C` into a code `C'` of the same shift
/// whose factorizations are unambiguous.
///
/// States of the product are pairs `(u, p)` with `u` a word of length
/// `|w|` that labels a path ending at `p`; the transition on `a` shifts the
/// window and advances `p`. Every path ends in the anchor `(w, q_w)` exactly
/// when its label ends with `w`, so the first returns to the anchor cut every
/// bi-infinite sequence of the shift at unambiguous positions.
pub fn recode_unambiguous(
    c: &crate::codes::FiniteCode,
    max_constant_len: usize,
) -> Result<RecodedPresentation> {
    if let Some((u, w)) = c.prefix_violation() {
        return Err(Error::NotAPrefixCode(
            c.alphabet().format(&u),
            c.alphabet().format(&w),
        ));
    }
    let dfa = c.star_dfa();
    let constant = find_constant(&dfa, max_constant_len)
        .ok_or(Error::NotSynchronizedWithinBound(max_constant_len))?;
    let n = constant.word.len();

    // seed states: labels of length-n paths with their endpoints
    type S = (Word, usize);
    let mut frontier: BTreeSet<S> = (0..dfa.num_states())
        .map(|q| (Word::empty(), q))
        .collect();
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for (u, p) in frontier {
            for a in dfa.alphabet().symbols() {
                if let Some(q) = dfa.step(p, a) {
                    let mut v = u.clone();
                    v.push(a);
                    next.insert((v, q));
                }
            }
        }
        frontier = next;
    }

    // close under the shift-and-advance transition
    let mut states: Vec<S> = Vec::new();
    let mut index: BTreeMap<S, usize> = BTreeMap::new();
    let mut queue: VecDeque<S> = VecDeque::new();
    for s in frontier {
        index.insert(s.clone(), states.len());
        states.push(s.clone());
        queue.push_back(s);
    }
    let mut edges = Vec::new();
    while let Some((u, p)) = queue.pop_front() {
        let i = index[&(u.clone(), p)];
        for a in dfa.alphabet().symbols() {
            let Some(q) = dfa.step(p, a) else { continue };
            let mut ua = u.clone();
            ua.push(a);
            let v = ua.slice(ua.len() - n..ua.len());
            let t: S = (v, q);
            let j = *index.entry(t.clone()).or_insert_with(|| {
                states.push(t.clone());
                queue.push_back(t);
                states.len() - 1
            });
            edges.push(Edge {
                src: i,
                label: a,
                dst: j,
            });
        }
    }
    let names = states
        .iter()
        .map(|(u, p)| {
            let shown = if u.is_empty() {
                "~".to_string()
            } else {
                c.alphabet().format(u)
            };
            format!("({shown},{p})")
        })
        .collect();
    let all: BTreeSet<usize> = (0..states.len()).collect();
    let product = Automaton::new(
        c.alphabet().clone(),
        states.len(),
        edges,
        all.clone(),
        all,
    )?
    .with_state_names(names);

    // anchor: the unique state whose window is the constant
    let anchored: Vec<usize> = (0..states.len())
        .filter(|&i| states[i].0 == constant.word)
        .collect();
    let [anchor] = anchored[..] else {
        return Err(Error::Internal(format!(
            "constant window maps to {} product states, expected exactly one",
            anchored.len()
        )));
    };
    if states[anchor].1 != constant.sink {
        return Err(Error::Internal(
            "anchor does not sit over the constant's sink state".into(),
        ));
    }

    let (expr, scc_automaton, anchor_in_scc) = first_returns(&product, anchor)?;
    let first_return_automaton = scc_automaton
        .with_initial(BTreeSet::from([anchor_in_scc]))
        .with_terminal(BTreeSet::from([anchor_in_scc]));
    let (strong, witness) = is_strongly_unambiguous_through(&first_return_automaton, anchor_in_scc);
    if !strong {
        return Err(Error::Internal(format!(
            "recoded presentation is ambiguous on {:?}",
            witness.map(|w| c.alphabet().format(&w.word))
        )));
    }
    Ok(RecodedPresentation {
        constant,
        product_automaton: product,
        anchor,
        first_return_automaton,
        first_return_code: expr,
    })
}

/// Expression of the labels of paths `anchor -> anchor` that avoid the
/// anchor in between. Errors if the anchor sits in a trivial component.
pub fn first_returns_expression(a: &Automaton, anchor: usize) -> Result<RationalExpression> {
    first_returns(a, anchor).map(|(e, _, _)| e)
}

fn first_returns(a: &Automaton, anchor: usize) -> Result<(RationalExpression, Automaton, usize)> {
    let comps = scc(a);
    let c = comps.component_of[anchor];
    if comps.trivial[c] {
        return Err(Error::TrivialAnchor);
    }
    let keep: Vec<bool> = (0..a.num_states())
        .map(|q| comps.component_of[q] == c)
        .collect();
    let (sub, map) = a.restrict(&keep);
    let anchor_sub = map[anchor].expect("anchor kept");

    // split the anchor: out-edges leave a fresh start, in-edges enter a
    // fresh end, so eliminated paths cannot pass through the anchor
    let m = sub.num_states();
    let (start, end) = (m, m + 1);
    let mut edges = Vec::new();
    for e in sub.edges() {
        let src = if e.src == anchor_sub { start } else { e.src };
        let dst = if e.dst == anchor_sub { end } else { e.dst };
        edges.push(Edge {
            src,
            label: e.label,
            dst,
        });
    }
    let split = Automaton::new(
        a.alphabet().clone(),
        m + 2,
        edges,
        BTreeSet::from([start]),
        BTreeSet::from([end]),
    )?;
    let expr = state_elimination(&split, split.initial(), split.terminal());
    Ok((expr, sub, anchor_sub))
}

/// A rational language is prefix-free iff no terminal state of its trimmed
/// minimal automaton has an outgoing edge.
pub fn expression_is_prefix_free(e: &RationalExpression) -> bool {
    use crate::automata::{determinize, minimize};
    let d = minimize(&determinize(&e.to_automaton()).expect("has initial state"));
    let a = d.to_automaton();
    let out = a.out_edges();
    a.terminal().iter().all(|&q| out[q].is_empty())
}
