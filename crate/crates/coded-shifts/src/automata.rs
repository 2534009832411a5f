//! Finite labeled automata and the graph algebra the other modules consume:
//! determinization, minimization, reversal, strongly connected components,
//! and the square automaton.

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::Error;
use crate::Result;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

/// A labeled edge between dense state indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    pub src: usize,
    pub label: Symbol,
    pub dst: usize,
}

/// A finite labeled multigraph with initial and terminal state sets.
///
/// States are dense integers; display names are metadata only. Duplicate
/// parallel edges with identical (src, label, dst) are rejected at
/// construction, so a path is determined by its state sequence and label.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Automaton {
    alphabet: Alphabet,
    num_states: usize,
    edges: Vec<Edge>,
    initial: BTreeSet<usize>,
    terminal: BTreeSet<usize>,
    state_names: Option<Vec<String>>,
}

impl Automaton {
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        edges: Vec<Edge>,
        initial: BTreeSet<usize>,
        terminal: BTreeSet<usize>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &edges {
            if e.src >= num_states {
                return Err(Error::BadState(e.src, num_states));
            }
            if e.dst >= num_states {
                return Err(Error::BadState(e.dst, num_states));
            }
            if e.label.index() >= alphabet.len() {
                return Err(Error::Internal(format!(
                    "label {} outside alphabet of size {}",
                    e.label.index(),
                    alphabet.len()
                )));
            }
            if !seen.insert(*e) {
                return Err(Error::DuplicateEdge(e.src, alphabet.char(e.label), e.dst));
            }
        }
        for &s in initial.iter().chain(terminal.iter()) {
            if s >= num_states {
                return Err(Error::BadState(s, num_states));
            }
        }
        let mut edges = edges;
        edges.sort();
        Ok(Automaton {
            alphabet,
            num_states,
            edges,
            initial,
            terminal,
            state_names: None,
        })
    }

    /// Attach display names (metadata only).
    pub fn with_state_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.num_states);
        self.state_names = Some(names);
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn terminal(&self) -> &BTreeSet<usize> {
        &self.terminal
    }

    pub fn state_name(&self, q: usize) -> String {
        match &self.state_names {
            Some(names) => names[q].clone(),
            None => q.to_string(),
        }
    }

    pub fn state_names(&self) -> Option<&[String]> {
        self.state_names.as_deref()
    }

    /// Outgoing adjacency, indexed by source state.
    pub fn out_edges(&self) -> Vec<Vec<Edge>> {
        let mut adj = vec![Vec::new(); self.num_states];
        for e in &self.edges {
            adj[e.src].push(*e);
        }
        adj
    }

    /// Incoming adjacency, indexed by destination state.
    pub fn in_edges(&self) -> Vec<Vec<Edge>> {
        let mut adj = vec![Vec::new(); self.num_states];
        for e in &self.edges {
            adj[e.dst].push(*e);
        }
        adj
    }

    pub fn successors(&self, q: usize, a: Symbol) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|e| e.src == q && e.label == a)
            .map(|e| e.dst)
            .collect()
    }

    /// The same graph with all states initial and terminal (the convention
    /// for automata presenting shift spaces).
    pub fn with_all_states_marked(&self) -> Automaton {
        let all: BTreeSet<usize> = (0..self.num_states).collect();
        let mut a = self.clone();
        a.initial = all.clone();
        a.terminal = all;
        a
    }

    pub fn with_initial(&self, initial: BTreeSet<usize>) -> Automaton {
        let mut a = self.clone();
        a.initial = initial;
        a
    }

    pub fn with_terminal(&self, terminal: BTreeSet<usize>) -> Automaton {
        let mut a = self.clone();
        a.terminal = terminal;
        a
    }

    /// Each edge (p, x, q) becomes (q, x, p); initial and terminal swap.
    pub fn reverse(&self) -> Automaton {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                src: e.dst,
                label: e.label,
                dst: e.src,
            })
            .collect();
        let mut a = Automaton::new(
            self.alphabet.clone(),
            self.num_states,
            edges,
            self.terminal.clone(),
            self.initial.clone(),
        )
        .expect("reversal preserves validity");
        a.state_names = self.state_names.clone();
        a
    }

    /// At most one successor per (state, symbol), and at most one initial
    /// state.
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() <= 1 && self.is_locally_deterministic()
    }

    /// At most one predecessor per (state, symbol), and at most one terminal
    /// state.
    pub fn is_codeterministic(&self) -> bool {
        self.terminal.len() <= 1 && self.is_locally_codeterministic()
    }

    /// Deterministic and co-deterministic.
    pub fn is_reversible(&self) -> bool {
        self.is_deterministic() && self.is_codeterministic()
    }

    /// The per-(state, symbol) edge-uniqueness half of determinism, ignoring
    /// the initial set. This is the notion used for coded-shift automata,
    /// where every state is initial and terminal.
    pub fn is_locally_deterministic(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|e| seen.insert((e.src, e.label)))
    }

    pub fn is_locally_codeterministic(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|e| seen.insert((e.dst, e.label)))
    }

    pub fn is_locally_reversible(&self) -> bool {
        self.is_locally_deterministic() && self.is_locally_codeterministic()
    }

    /// States reachable from `from` following edges forward.
    pub fn reachable_from(&self, from: &BTreeSet<usize>) -> Vec<bool> {
        let adj = self.out_edges();
        let mut seen = vec![false; self.num_states];
        let mut queue: VecDeque<usize> = from.iter().copied().collect();
        for &q in from {
            seen[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for e in &adj[q] {
                if !seen[e.dst] {
                    seen[e.dst] = true;
                    queue.push_back(e.dst);
                }
            }
        }
        seen
    }

    /// Restriction to a subset of states, renumbered densely. Returns the
    /// automaton and the map old index -> new index.
    pub fn restrict(&self, keep: &[bool]) -> (Automaton, Vec<Option<usize>>) {
        let mut map = vec![None; self.num_states];
        let mut names = Vec::new();
        let mut n = 0;
        for q in 0..self.num_states {
            if keep[q] {
                map[q] = Some(n);
                names.push(self.state_name(q));
                n += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.src] && keep[e.dst])
            .map(|e| Edge {
                src: map[e.src].unwrap(),
                label: e.label,
                dst: map[e.dst].unwrap(),
            })
            .collect();
        let initial = self
            .initial
            .iter()
            .filter_map(|&q| map[q])
            .collect::<BTreeSet<_>>();
        let terminal = self
            .terminal
            .iter()
            .filter_map(|&q| map[q])
            .collect::<BTreeSet<_>>();
        let a = Automaton::new(self.alphabet.clone(), n, edges, initial, terminal)
            .expect("restriction preserves validity")
            .with_state_names(names);
        (a, map)
    }

    /// Drop states that are not on a path from an initial to a terminal
    /// state.
    pub fn trim(&self) -> Automaton {
        let fwd = self.reachable_from(&self.initial);
        let bwd = self.reverse().reachable_from(&self.terminal);
        let keep: Vec<bool> = (0..self.num_states).map(|q| fwd[q] && bwd[q]).collect();
        self.restrict(&keep).0
    }

    /// Iteratively drop states without both an incoming and an outgoing
    /// edge, until every remaining state lies on a bi-infinite path.
    pub fn trim_essential(&self) -> Automaton {
        let mut keep = vec![true; self.num_states];
        loop {
            let mut has_out = vec![false; self.num_states];
            let mut has_in = vec![false; self.num_states];
            for e in &self.edges {
                if keep[e.src] && keep[e.dst] {
                    has_out[e.src] = true;
                    has_in[e.dst] = true;
                }
            }
            let mut changed = false;
            for q in 0..self.num_states {
                if keep[q] && (!has_out[q] || !has_in[q]) {
                    keep[q] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.restrict(&keep).0
    }

    /// Replace every label by its image under `relabel` (a map into a new
    /// alphabet). Fails on duplicate edges created by the merge.
    pub fn relabeled(&self, target: Alphabet, relabel: &BTreeMap<Symbol, Symbol>) -> Result<Automaton> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let label = *relabel
                .get(&e.label)
                .ok_or_else(|| Error::AlphabetMismatch(format!(
                    "no image for letter {:?}",
                    self.alphabet.char(e.label)
                )))?;
            edges.push(Edge {
                src: e.src,
                label,
                dst: e.dst,
            });
        }
        edges.sort();
        edges.dedup();
        let mut a = Automaton::new(
            target,
            self.num_states,
            edges,
            self.initial.clone(),
            self.terminal.clone(),
        )?;
        a.state_names = self.state_names.clone();
        Ok(a)
    }

    /// Labels of paths of length exactly `n` (any source, any target),
    /// i.e. the words of the shift presented by the graph when all states
    /// are marked.
    pub fn path_labels(&self, n: usize) -> BTreeSet<Word> {
        let adj = self.out_edges();
        let mut frontier: Vec<(usize, Word)> = (0..self.num_states).map(|q| (q, Word::empty())).collect();
        for _ in 0..n {
            let mut next = HashSet::new();
            for (q, w) in frontier {
                for e in &adj[q] {
                    let mut w2 = w.clone();
                    w2.push(e.label);
                    next.insert((e.dst, w2));
                }
            }
            frontier = next.into_iter().collect();
        }
        frontier.into_iter().map(|(_, w)| w).collect()
    }

    /// Labels of paths of length at most `n` from an initial to a terminal
    /// state (the recognized words, bounded).
    pub fn accepted_up_to(&self, n: usize) -> BTreeSet<Word> {
        let adj = self.out_edges();
        let mut out = BTreeSet::new();
        let mut frontier: HashSet<(usize, Word)> = self
            .initial
            .iter()
            .map(|&q| (q, Word::empty()))
            .collect();
        for _ in 0..=n {
            for (q, w) in &frontier {
                if self.terminal.contains(q) {
                    out.insert(w.clone());
                }
            }
            let mut next = HashSet::new();
            for (q, w) in frontier {
                if w.len() == n {
                    continue;
                }
                for e in &adj[q] {
                    let mut w2 = w.clone();
                    w2.push(e.label);
                    next.insert((e.dst, w2));
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        out
    }

    /// Does `word` label a path from an initial to a terminal state?
    pub fn accepts(&self, word: &Word) -> bool {
        let mut current: BTreeSet<usize> = self.initial.iter().copied().collect();
        for &a in &word.0 {
            let mut next = BTreeSet::new();
            for e in &self.edges {
                if current.contains(&e.src) && e.label == a {
                    next.insert(e.dst);
                }
            }
            current = next;
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|q| self.terminal.contains(q))
    }

    /// Checks that `states` is a path with label `word` in this automaton.
    pub fn replay(&self, states: &[usize], word: &Word) -> bool {
        if states.len() != word.len() + 1 {
            return false;
        }
        let edge_set: HashSet<Edge> = self.edges.iter().copied().collect();
        word.0.iter().enumerate().all(|(i, &a)| {
            edge_set.contains(&Edge {
                src: states[i],
                label: a,
                dst: states[i + 1],
            })
        })
    }
}

/// The square automaton on ordered pairs, together with the pair carried by
/// each state.
pub struct Square {
    pub automaton: Automaton,
    pub pairs: Vec<(usize, usize)>,
}

/// Full square A x A: states are ordered pairs, edges are pairs of
/// equally-labeled edges.
pub fn square(a: &Automaton) -> Square {
    square_filtered(a, |_, _| true)
}

/// Restriction of the square to pairs (p, q) with p != q.
pub fn square_nondiagonal(a: &Automaton) -> Square {
    square_filtered(a, |p, q| p != q)
}

fn square_filtered(a: &Automaton, keep: impl Fn(usize, usize) -> bool) -> Square {
    let n = a.num_states();
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for p in 0..n {
        for q in 0..n {
            if keep(p, q) {
                index.insert((p, q), pairs.len());
                pairs.push((p, q));
            }
        }
    }
    let mut edges = Vec::new();
    let by_label: HashMap<Symbol, Vec<&Edge>> = {
        let mut m: HashMap<Symbol, Vec<&Edge>> = HashMap::new();
        for e in a.edges() {
            m.entry(e.label).or_default().push(e);
        }
        m
    };
    for group in by_label.values() {
        for e1 in group {
            for e2 in group {
                if let (Some(&s), Some(&d)) = (
                    index.get(&(e1.src, e2.src)),
                    index.get(&(e1.dst, e2.dst)),
                ) {
                    edges.push(Edge {
                        src: s,
                        label: e1.label,
                        dst: d,
                    });
                }
            }
        }
    }
    let names = pairs
        .iter()
        .map(|&(p, q)| format!("({},{})", a.state_name(p), a.state_name(q)))
        .collect();
    let automaton = Automaton::new(
        a.alphabet().clone(),
        pairs.len(),
        edges,
        BTreeSet::new(),
        BTreeSet::new(),
    )
    .expect("square construction is valid")
    .with_state_names(names);
    Square { automaton, pairs }
}

/// Strongly connected components: partition, component DAG and triviality
/// flags. A component is trivial iff it contains no edge, so an isolated
/// self-loop state is non-trivial.
#[derive(Debug)]
pub struct Sccs {
    /// Component index of each state, in reverse topological order of
    /// discovery (Tarjan).
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub trivial: Vec<bool>,
    /// Edges of the condensation (no self-loops, deduplicated).
    pub dag_edges: BTreeSet<(usize, usize)>,
}

impl Sccs {
    pub fn has_nontrivial(&self) -> bool {
        self.trivial.iter().any(|t| !t)
    }
}

/// Tarjan's algorithm, iterative to keep large window automata off the call
/// stack.
pub fn scc(a: &Automaton) -> Sccs {
    let n = a.num_states();
    let adj = a.out_edges();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // call stack frames: (state, next edge position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos].dst;
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        component_of[w] = components.len();
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    components.push(comp);
                }
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
            }
        }
    }

    let mut trivial = vec![true; components.len()];
    let mut dag_edges = BTreeSet::new();
    for e in a.edges() {
        let (cs, cd) = (component_of[e.src], component_of[e.dst]);
        if cs == cd {
            trivial[cs] = false;
        } else {
            dag_edges.insert((cs, cd));
        }
    }
    Sccs {
        component_of,
        components,
        trivial,
        dag_edges,
    }
}

/// A deterministic automaton with a partial transition map and a single
/// initial state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dfa {
    alphabet: Alphabet,
    num_states: usize,
    /// transitions[state][symbol]
    transitions: Vec<Vec<Option<usize>>>,
    initial: usize,
    terminal: BTreeSet<usize>,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        transitions: Vec<Vec<Option<usize>>>,
        initial: usize,
        terminal: BTreeSet<usize>,
    ) -> Result<Self> {
        if initial >= num_states {
            return Err(Error::BadState(initial, num_states));
        }
        if transitions.len() != num_states {
            return Err(Error::Internal("transition table size mismatch".into()));
        }
        for row in &transitions {
            if row.len() != alphabet.len() {
                return Err(Error::Internal("transition row size mismatch".into()));
            }
            for t in row.iter().flatten() {
                if *t >= num_states {
                    return Err(Error::BadState(*t, num_states));
                }
            }
        }
        for &t in &terminal {
            if t >= num_states {
                return Err(Error::BadState(t, num_states));
            }
        }
        Ok(Dfa {
            alphabet,
            num_states,
            transitions,
            initial,
            terminal,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn terminal(&self) -> &BTreeSet<usize> {
        &self.terminal
    }

    pub fn step(&self, q: usize, a: Symbol) -> Option<usize> {
        self.transitions[q][a.index()]
    }

    pub fn run_from(&self, q: usize, w: &Word) -> Option<usize> {
        let mut cur = q;
        for &a in &w.0 {
            cur = self.step(cur, a)?;
        }
        Some(cur)
    }

    pub fn run(&self, w: &Word) -> Option<usize> {
        self.run_from(self.initial, w)
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.run(w).is_some_and(|q| self.terminal.contains(&q))
    }

    /// View as a general automaton.
    pub fn to_automaton(&self) -> Automaton {
        let mut edges = Vec::new();
        for q in 0..self.num_states {
            for a in self.alphabet.symbols() {
                if let Some(t) = self.transitions[q][a.index()] {
                    edges.push(Edge {
                        src: q,
                        label: a,
                        dst: t,
                    });
                }
            }
        }
        Automaton::new(
            self.alphabet.clone(),
            self.num_states,
            edges,
            BTreeSet::from([self.initial]),
            self.terminal.clone(),
        )
        .expect("DFA is a valid automaton")
    }

    /// The image of the full state set under `w`: `{ q . w : q, defined }`.
    pub fn image_of_all(&self, w: &Word) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = (0..self.num_states).collect();
        for &a in &w.0 {
            set = set
                .iter()
                .filter_map(|&q| self.step(q, a))
                .collect();
        }
        set
    }
}

/// Subset construction. States of the result are the reachable subsets only.
pub fn determinize(a: &Automaton) -> Result<Dfa> {
    if a.initial().is_empty() {
        return Err(Error::NoInitialState);
    }
    let k = a.alphabet().len();
    let adj = a.out_edges();
    let start: BTreeSet<usize> = a.initial().iter().copied().collect();
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut subsets = vec![start.clone()];
    index.insert(start, 0);
    let mut transitions: Vec<Vec<Option<usize>>> = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let current = subsets[i].clone();
        let mut row = vec![None; k];
        for s in 0..k {
            let sym = Symbol(s as u8);
            let mut next = BTreeSet::new();
            for &q in &current {
                for e in &adj[q] {
                    if e.label == sym {
                        next.insert(e.dst);
                    }
                }
            }
            if !next.is_empty() {
                let id = *index.entry(next.clone()).or_insert_with(|| {
                    subsets.push(next.clone());
                    subsets.len() - 1
                });
                row[s] = Some(id);
            }
        }
        transitions.push(row);
        i += 1;
    }
    let terminal = subsets
        .iter()
        .enumerate()
        .filter(|(_, set)| set.iter().any(|q| a.terminal().contains(q)))
        .map(|(i, _)| i)
        .collect();
    Dfa::new(a.alphabet().clone(), subsets.len(), transitions, 0, terminal)
}

/// Minimal automaton of the recognized language: states correspond to the
/// distinct nonempty residuals, missing transitions stay missing.
///
/// An empty language is represented by a single non-terminal dead state,
/// since a DFA needs an initial state to exist.
pub fn minimize(d: &Dfa) -> Dfa {
    let k = d.alphabet.len();
    // keep only states that are reachable and have a nonempty residual
    let mut reach = vec![false; d.num_states];
    let mut queue = VecDeque::from([d.initial]);
    reach[d.initial] = true;
    while let Some(q) = queue.pop_front() {
        for t in d.transitions[q].iter().flatten() {
            if !reach[*t] {
                reach[*t] = true;
                queue.push_back(*t);
            }
        }
    }
    let mut live = vec![false; d.num_states];
    for &t in &d.terminal {
        live[t] = true;
    }
    loop {
        let mut changed = false;
        for q in 0..d.num_states {
            if !live[q]
                && d.transitions[q]
                    .iter()
                    .flatten()
                    .any(|&t| live[t])
            {
                live[q] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let keep: Vec<bool> = (0..d.num_states).map(|q| reach[q] && live[q]).collect();
    if !keep[d.initial] {
        // empty language
        return Dfa::new(
            d.alphabet.clone(),
            1,
            vec![vec![None; k]],
            0,
            BTreeSet::new(),
        )
        .unwrap();
    }

    // Moore refinement over the kept states; None is its own class.
    let mut class = vec![usize::MAX; d.num_states];
    for q in 0..d.num_states {
        if keep[q] {
            class[q] = usize::from(d.terminal.contains(&q));
        }
    }
    loop {
        let mut sig_index: HashMap<Vec<Option<usize>>, usize> = HashMap::new();
        let mut next = vec![usize::MAX; d.num_states];
        for q in 0..d.num_states {
            if !keep[q] {
                continue;
            }
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(Some(class[q]));
            for a in 0..k {
                sig.push(match d.transitions[q][a] {
                    Some(t) if keep[t] => Some(class[t]),
                    _ => None,
                });
            }
            let len = sig_index.len();
            next[q] = *sig_index.entry(sig).or_insert(len);
        }
        if next == class {
            break;
        }
        class = next;
    }

    let num_classes = class
        .iter()
        .filter(|&&c| c != usize::MAX)
        .max()
        .map_or(0, |&m| m + 1);
    let mut transitions = vec![vec![None; k]; num_classes];
    let mut terminal = BTreeSet::new();
    for q in 0..d.num_states {
        if !keep[q] {
            continue;
        }
        let c = class[q];
        if d.terminal.contains(&q) {
            terminal.insert(c);
        }
        for a in 0..k {
            if let Some(t) = d.transitions[q][a] {
                if keep[t] {
                    transitions[c][a] = Some(class[t]);
                }
            }
        }
    }
    Dfa::new(
        d.alphabet.clone(),
        num_classes,
        transitions,
        class[d.initial],
        terminal,
    )
    .unwrap()
}

/// Exact language equality of two partial DFAs over the same alphabet,
/// by breadth-first search over the pair graph with an implicit sink.
pub fn dfa_equivalent(x: &Dfa, y: &Dfa) -> bool {
    assert_eq!(x.alphabet, y.alphabet);
    let k = x.alphabet.len();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(Some(x.initial), Some(y.initial))]);
    seen.insert((Some(x.initial), Some(y.initial)));
    while let Some((p, q)) = queue.pop_front() {
        let p_acc = p.is_some_and(|p| x.terminal.contains(&p));
        let q_acc = q.is_some_and(|q| y.terminal.contains(&q));
        if p_acc != q_acc {
            return false;
        }
        for a in 0..k {
            let sym = Symbol(a as u8);
            let np = p.and_then(|p| x.step(p, sym));
            let nq = q.and_then(|q| y.step(q, sym));
            if (np, nq) == (None, None) {
                continue;
            }
            if seen.insert((np, nq)) {
                queue.push_back((np, nq));
            }
        }
    }
    true
}

/// Are the two DFAs isomorphic (same shape, not merely same language)?
pub fn dfa_isomorphic(x: &Dfa, y: &Dfa) -> bool {
    if x.num_states != y.num_states || x.alphabet != y.alphabet {
        return false;
    }
    let k = x.alphabet.len();
    let mut map = vec![None; x.num_states];
    map[x.initial] = Some(y.initial);
    let mut queue = VecDeque::from([x.initial]);
    while let Some(p) = queue.pop_front() {
        let q = map[p].unwrap();
        if x.terminal.contains(&p) != y.terminal.contains(&q) {
            return false;
        }
        for a in 0..k {
            match (x.transitions[p][a], y.transitions[q][a]) {
                (None, None) => {}
                (Some(np), Some(nq)) => match map[np] {
                    None => {
                        map[np] = Some(nq);
                        queue.push_back(np);
                    }
                    Some(m) if m == nq => {}
                    Some(_) => return false,
                },
                _ => return false,
            }
        }
    }
    // every state of x must be reachable for the mapping to be total
    map.iter().all(|m| m.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::all_words_up_to;

    fn ab() -> Alphabet {
        Alphabet::from_str("ab").unwrap()
    }

    fn sym(c: char) -> Symbol {
        ab().symbol(c).unwrap()
    }

    /// The standard even-shift presentation: a-loop on 0,
    /// b-edges both ways between 0 and 1, all states initial and terminal.
    pub(crate) fn even_automaton() -> Automaton {
        Automaton::new(
            ab(),
            2,
            vec![
                Edge { src: 0, label: sym('a'), dst: 0 },
                Edge { src: 0, label: sym('b'), dst: 1 },
                Edge { src: 1, label: sym('b'), dst: 0 },
            ],
            BTreeSet::from([0, 1]),
            BTreeSet::from([0, 1]),
        )
        .unwrap()
    }

    /// Golden mean automaton: a-loop on 0, b: 0 -> 1, a: 1 -> 0.
    pub(crate) fn golden_mean_automaton() -> Automaton {
        Automaton::new(
            ab(),
            2,
            vec![
                Edge { src: 0, label: sym('a'), dst: 0 },
                Edge { src: 0, label: sym('b'), dst: 1 },
                Edge { src: 1, label: sym('a'), dst: 0 },
            ],
            BTreeSet::from([0, 1]),
            BTreeSet::from([0, 1]),
        )
        .unwrap()
    }

    #[test]
    fn duplicate_edges_rejected() {
        let e = Edge { src: 0, label: sym('a'), dst: 0 };
        let r = Automaton::new(ab(), 1, vec![e, e], BTreeSet::from([0]), BTreeSet::from([0]));
        assert!(matches!(r, Err(Error::DuplicateEdge(..))));
    }

    #[test]
    fn reverse_is_involution() {
        let a = even_automaton();
        assert_eq!(a.reverse().reverse(), a);
        let single = Automaton::new(
            ab(),
            1,
            vec![Edge { src: 0, label: sym('a'), dst: 0 }],
            BTreeSet::from([0]),
            BTreeSet::from([0]),
        )
        .unwrap();
        assert_eq!(single.reverse(), single);
    }

    #[test]
    fn reverse_swaps_edges() {
        let a = Automaton::new(
            ab(),
            2,
            vec![Edge { src: 0, label: sym('a'), dst: 1 }],
            BTreeSet::from([0]),
            BTreeSet::from([1]),
        )
        .unwrap();
        let r = a.reverse();
        assert_eq!(r.edges(), &[Edge { src: 1, label: sym('a'), dst: 0 }]);
        assert_eq!(r.initial(), &BTreeSet::from([1]));
        assert_eq!(r.terminal(), &BTreeSet::from([0]));
    }

    #[test]
    fn determinism_flags() {
        let a = even_automaton();
        // two initial states: not deterministic under the set convention
        assert!(!a.is_deterministic());
        assert!(a.is_locally_deterministic());
        let single_initial = a.with_initial(BTreeSet::from([0]));
        assert!(single_initial.is_deterministic());
        // two terminal states: not co-deterministic under the set convention
        assert!(!single_initial.is_codeterministic());
        assert!(single_initial.is_locally_codeterministic());
    }

    #[test]
    fn reversible_cycle() {
        let cycle = Automaton::new(
            ab(),
            2,
            vec![
                Edge { src: 0, label: sym('a'), dst: 1 },
                Edge { src: 1, label: sym('b'), dst: 0 },
            ],
            BTreeSet::from([0]),
            BTreeSet::from([0]),
        )
        .unwrap();
        assert!(cycle.is_reversible());
    }

    #[test]
    fn scc_single_state_no_edge_is_trivial() {
        let a = Automaton::new(ab(), 1, vec![], BTreeSet::new(), BTreeSet::new()).unwrap();
        let s = scc(&a);
        assert_eq!(s.components.len(), 1);
        assert!(s.trivial[0]);
    }

    #[test]
    fn scc_self_loop_is_nontrivial() {
        let a = Automaton::new(
            ab(),
            1,
            vec![Edge { src: 0, label: sym('a'), dst: 0 }],
            BTreeSet::new(),
            BTreeSet::new(),
        )
        .unwrap();
        let s = scc(&a);
        assert!(!s.trivial[0]);
    }

    #[test]
    fn scc_chain_is_three_trivial_components() {
        let a = Automaton::new(
            ab(),
            3,
            vec![
                Edge { src: 0, label: sym('a'), dst: 1 },
                Edge { src: 1, label: sym('a'), dst: 2 },
            ],
            BTreeSet::new(),
            BTreeSet::new(),
        )
        .unwrap();
        let s = scc(&a);
        assert_eq!(s.components.len(), 3);
        assert!(s.trivial.iter().all(|&t| t));
    }

    #[test]
    fn square_of_even_automaton_is_the_paper_figure() {
        // non-diagonal square has the two states (0,1), (1,0) with b-edges
        // both ways, forming one strongly connected component
        let sq = square_nondiagonal(&even_automaton());
        assert_eq!(sq.automaton.num_states(), 2);
        assert_eq!(sq.automaton.edges().len(), 2);
        assert!(sq.automaton.edges().iter().all(|e| e.label == sym('b')));
        let s = scc(&sq.automaton);
        assert_eq!(s.components.len(), 1);
        assert!(!s.trivial[0]);
    }

    #[test]
    fn square_nondiagonal_of_golden_mean_has_no_cycle() {
        // pair edges by hand: (0,1) and (1,0) have a-edges to (0,0) only,
        // which is diagonal, so the non-diagonal part has no cycle
        let sq = square_nondiagonal(&golden_mean_automaton());
        let s = scc(&sq.automaton);
        assert!(!s.has_nontrivial());
    }

    #[test]
    fn determinize_reachable_subsets() {
        // paper's unambiguous automaton with initial {0,1}: subsets
        // {0,1}, {0}, {1}
        let d = determinize(&even_automaton()).unwrap();
        assert_eq!(d.num_states(), 3);
        // language preserved for short words
        let a = even_automaton();
        for w in all_words_up_to(2, 8) {
            assert_eq!(a.accepts(&w), d.accepts(&w), "word {:?}", w);
        }
    }

    #[test]
    fn determinize_drops_unreachable() {
        let mut edges = even_automaton().edges().to_vec();
        edges.push(Edge { src: 2, label: sym('a'), dst: 2 });
        let a = Automaton::new(ab(), 3, edges, BTreeSet::from([0, 1]), BTreeSet::from([0, 1]))
            .unwrap();
        let d = determinize(&a).unwrap();
        assert_eq!(d.num_states(), 3); // {0,1}, {0}, {1} only
    }

    #[test]
    fn minimize_even_factor_language_is_three_states() {
        // minimal automaton of the even-shift factor language: b-loop on 0,
        // a: 0 -> 1, a-loop on 1, b: 1 <-> 2 (residuals: no 'a' yet / even
        // trailing b-run / odd trailing b-run)
        let a = even_automaton();
        let d = determinize(&a).unwrap();
        let m = minimize(&d);
        assert_eq!(m.num_states(), 3);
        let q0 = m.initial();
        assert_eq!(m.step(q0, sym('b')), Some(q0), "b-loop on the initial state");
        let q1 = m.step(q0, sym('a')).unwrap();
        assert_eq!(m.step(q1, sym('a')), Some(q1), "a-loop after the first a");
        let q2 = m.step(q1, sym('b')).unwrap();
        assert_eq!(m.step(q2, sym('b')), Some(q1));
        assert_eq!(m.step(q2, sym('a')), None, "odd interior b-block dies");
        // language check against the NFA
        for w in all_words_up_to(2, 8) {
            assert_eq!(a.accepts(&w), m.accepts(&w));
        }
    }

    #[test]
    fn minimize_is_idempotent() {
        let m = minimize(&determinize(&even_automaton()).unwrap());
        let mm = minimize(&m);
        assert!(dfa_isomorphic(&m, &mm));
    }

    #[test]
    fn dfa_equivalence_detects_difference() {
        let m1 = minimize(&determinize(&even_automaton()).unwrap());
        let m2 = minimize(&determinize(&golden_mean_automaton()).unwrap());
        assert!(dfa_equivalent(&m1, &m1));
        assert!(!dfa_equivalent(&m1, &m2));
    }

    #[test]
    fn trim_essential_removes_dangling() {
        let a = Automaton::new(
            ab(),
            3,
            vec![
                Edge { src: 0, label: sym('a'), dst: 0 },
                Edge { src: 0, label: sym('b'), dst: 1 },
                Edge { src: 1, label: sym('a'), dst: 2 },
            ],
            BTreeSet::from([0]),
            BTreeSet::from([0]),
        )
        .unwrap();
        let t = a.trim_essential();
        assert_eq!(t.num_states(), 1);
        assert_eq!(t.edges().len(), 1);
    }

    #[test]
    fn path_labels_of_even_automaton() {
        let a = even_automaton();
        let l2: Vec<String> = a
            .path_labels(2)
            .iter()
            .map(|w| ab().format(w))
            .collect();
        assert_eq!(l2, vec!["aa", "ab", "ba", "bb"]);
    }
}
