//! Countable-state automata explored lazily: the reversible line-and-branches
//! construction, its strongly unambiguous refinement with a length schedule,
//! finite window extraction, and the beta-shift automaton family.

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::{Automaton, Edge};
use crate::error::Error;
use crate::Result;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Mutex;

/// Seed data extracted from a strongly connected base automaton: a state `q`
/// with a forward branching (`ya`, `yb`), a backward branching (`ct`, `dt`),
/// and connectors closing the two cycles `y a u1 c t` and `y b u2 d t`.
#[derive(Clone, Debug)]
pub struct FiebigSeed {
    pub base: Automaton,
    pub q: usize,
    pub y: Word,
    pub a: Symbol,
    pub b: Symbol,
    pub t: Word,
    pub c: Symbol,
    pub d: Symbol,
    pub u1: Word,
    pub u2: Word,
}

impl FiebigSeed {
    /// The word `u = a u1 c`.
    pub fn u(&self) -> Word {
        let mut w = Word(vec![self.a]);
        w = w.concat(&self.u1);
        w.push(self.c);
        w
    }

    /// The word `v = b u2 d`.
    pub fn v(&self) -> Word {
        let mut w = Word(vec![self.b]);
        w = w.concat(&self.u2);
        w.push(self.d);
        w
    }

    /// The word `w = t y`.
    pub fn w(&self) -> Word {
        self.t.concat(&self.y)
    }
}

/// Outcome of seed extraction: either a proper seed, or the degenerate case
/// where all bi-infinite paths carry the same periodic label.
#[derive(Clone, Debug)]
pub enum SeedResult {
    Seed(FiebigSeed),
    /// The shift is coded by a single word.
    SingleWord(Word),
}

/// Extract a seed from a strongly connected automaton with every state
/// marked, recognizing the factor language of a coded shift.
pub fn fiebig_seed(base: &Automaton) -> Result<SeedResult> {
    if base.num_states() == 0 || base.edges().is_empty() {
        return Err(Error::EmptyShift);
    }
    let comps = crate::automata::scc(base);
    if comps.components.len() != 1 {
        return Err(Error::HypothesisViolated(
            "base automaton is not strongly connected".into(),
        ));
    }
    let q = 0usize;
    let Some((y, a, b, set_y)) = label_branching(base, q) else {
        // all paths from q share one label stream: single-word shift
        let w = shortest_cycle_label(base, q).ok_or(Error::EmptyShift)?;
        return Ok(SeedResult::SingleWord(w));
    };
    let rev = base.reverse();
    let Some((t_rev, c, d, set_t)) = label_branching(&rev, q) else {
        return Err(Error::Internal(
            "forward branching without backward branching".into(),
        ));
    };
    let t = reverse_word(&t_rev);

    // concrete endpoints: a state reached by y a, a state from which c t
    // reaches q, and likewise for b and d
    let s_a = *step_set(base, &set_y, a).iter().next().expect("branch label");
    let s_b = *step_set(base, &set_y, b).iter().next().expect("branch label");
    let e_c = *step_set(&rev, &set_t, c).iter().next().expect("branch label");
    let e_d = *step_set(&rev, &set_t, d).iter().next().expect("branch label");
    let u1 = shortest_path_label(base, s_a, e_c)
        .ok_or_else(|| Error::Internal("no connector path u1".into()))?;
    let u2 = shortest_path_label(base, s_b, e_d)
        .ok_or_else(|| Error::Internal("no connector path u2".into()))?;
    Ok(SeedResult::Seed(FiebigSeed {
        base: base.clone(),
        q,
        y,
        a,
        b,
        t,
        c,
        d,
        u1,
        u2,
    }))
}

/// Follow the subset walk from `{q}` until two distinct labels leave the
/// current subset; returns the access word and the two smallest labels.
fn label_branching(a: &Automaton, q: usize) -> Option<(Word, Symbol, Symbol, BTreeSet<usize>)> {
    let adj = a.out_edges();
    let mut set: BTreeSet<usize> = BTreeSet::from([q]);
    let mut word = Word::empty();
    let mut visited: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    loop {
        let labels: BTreeSet<Symbol> = set
            .iter()
            .flat_map(|&s| adj[s].iter().map(|e| e.label))
            .collect();
        let mut it = labels.iter();
        match (it.next(), it.next()) {
            (Some(&x), Some(&y)) => return Some((word, x, y, set)),
            (Some(&x), None) => {
                if !visited.insert(set.clone()) {
                    return None;
                }
                set = step_set(a, &set, x);
                word.push(x);
            }
            (None, _) => return None,
        }
    }
}

fn step_set(a: &Automaton, set: &BTreeSet<usize>, label: Symbol) -> BTreeSet<usize> {
    let adj = a.out_edges();
    set.iter()
        .flat_map(|&s| adj[s].iter().filter(|e| e.label == label).map(|e| e.dst))
        .collect()
}

fn reverse_word(w: &Word) -> Word {
    Word(w.0.iter().rev().copied().collect())
}

/// Label of a shortest non-empty path `q -> q`.
fn shortest_cycle_label(a: &Automaton, q: usize) -> Option<Word> {
    let adj = a.out_edges();
    let mut parent: BTreeMap<usize, (usize, Symbol)> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for e in &adj[q] {
        if e.dst == q {
            return Some(Word(vec![e.label]));
        }
        if !parent.contains_key(&e.dst) {
            parent.insert(e.dst, (q, e.label));
            queue.push_back(e.dst);
        }
    }
    while let Some(s) = queue.pop_front() {
        for e in &adj[s] {
            if e.dst == q {
                let mut rev = vec![e.label];
                let mut cur = s;
                while cur != q {
                    let (p, l) = parent[&cur];
                    rev.push(l);
                    cur = p;
                }
                rev.reverse();
                return Some(Word(rev));
            }
            if !parent.contains_key(&e.dst) {
                parent.insert(e.dst, (s, e.label));
                queue.push_back(e.dst);
            }
        }
    }
    None
}

/// Label of a shortest path `from -> to` (possibly empty).
fn shortest_path_label(a: &Automaton, from: usize, to: usize) -> Option<Word> {
    if from == to {
        return Some(Word::empty());
    }
    let adj = a.out_edges();
    let mut parent: BTreeMap<usize, (usize, Symbol)> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        for e in &adj[s] {
            if e.dst != from && !parent.contains_key(&e.dst) {
                parent.insert(e.dst, (s, e.label));
                if e.dst == to {
                    let mut rev = Vec::new();
                    let mut cur = to;
                    while cur != from {
                        let (p, l) = parent[&cur];
                        rev.push(l);
                        cur = p;
                    }
                    rev.reverse();
                    return Some(Word(rev));
                }
                queue.push_back(e.dst);
            }
        }
    }
    None
}

/// Length-lex enumeration of the labels of all finite non-empty paths
/// `q -> q` of the base automaton.
struct CycleEnum {
    base: Automaton,
    q: usize,
    found: Vec<Word>,
    next_len: usize,
}

impl CycleEnum {
    fn new(base: Automaton, q: usize) -> Self {
        CycleEnum {
            base,
            q,
            found: Vec::new(),
            next_len: 0,
        }
    }

    fn nth(&mut self, k: usize) -> Word {
        while self.found.len() <= k {
            self.next_len += 1;
            let mut labels: BTreeSet<Word> = BTreeSet::new();
            let adj = self.base.out_edges();
            // depth-first over all paths of the current exact length
            let mut stack: Vec<(usize, Word)> = vec![(self.q, Word::empty())];
            while let Some((s, w)) = stack.pop() {
                if w.len() == self.next_len {
                    if s == self.q {
                        labels.insert(w);
                    }
                    continue;
                }
                for e in &adj[s] {
                    let mut w2 = w.clone();
                    w2.push(e.label);
                    stack.push((e.dst, w2));
                }
            }
            self.found.extend(labels);
        }
        self.found[k].clone()
    }
}

/// A state of a lazy line-and-branches automaton: a line vertex (integer) or
/// an interior vertex of the `i`-th branch path.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum LState {
    Line(i64),
    Branch { index: usize, offset: usize },
}

enum Kind {
    /// Theorem-1.7 style: line carries `... u w'_{-1} u . w'_0 u w'_1 u ...`
    /// with a `v`-branch from the end of each `w'_n` (n >= 1) back to the
    /// start of `w'_{-n}`.
    Reversible {
        right_blocks: usize,
        left_blocks: usize,
    },
    /// Remark-1.8 style: right side `(wu)^inf`, left side
    /// `... (uw)^{m_2} v w_{-2} (uw)^{m_1} v w_{-1} u`, with `v`-branches
    /// from `M_i` (after `(wu)^{k_i} w`) to `N_i` (after the first `u` of
    /// the `(uw)^{m_i}` block).
    Strong {
        w: Word,
        /// `(m_i, |s_i|)` for i = 1, 2, ...
        schedule: Vec<(usize, usize)>,
        /// the increasing sequence `k_1 < k_2 < ...` with `k_1 = m_1`,
        /// chosen so that `M_i` keeps pace with `N_i`
        ks: Vec<i64>,
        anchors_placed: usize,
        targets_placed: usize,
        left_blocks: usize,
    },
}

struct Inner {
    u: Word,
    v: Word,
    t: Word,
    y: Word,
    kind: Kind,
    /// `x_0, x_1, ...`
    right: Vec<Symbol>,
    /// `x_{-1}, x_{-2}, ...`
    left: Vec<Symbol>,
    /// branch index -> line source of its `v`-path
    branch_src: BTreeMap<usize, i64>,
    /// branch index -> line target of its `v`-path
    branch_dst: BTreeMap<usize, i64>,
    /// line position -> branch leaving here
    src_at: BTreeMap<i64, usize>,
    /// line position -> branch arriving here
    dst_at: BTreeMap<i64, usize>,
    cycles: CycleEnum,
}

impl Inner {
    fn x(&mut self, i: i64) -> Symbol {
        if i >= 0 {
            self.ensure_right(i);
            self.right[i as usize]
        } else {
            self.ensure_left(i);
            self.left[(-i - 1) as usize]
        }
    }

    fn push_left_segment(&mut self, seg: &Word) {
        self.left.extend(seg.0.iter().rev());
    }

    fn ensure_right(&mut self, pos: i64) {
        while (self.right.len() as i64) <= pos {
            match &mut self.kind {
                Kind::Reversible { right_blocks, .. } => {
                    let n = *right_blocks;
                    *right_blocks += 1;
                    // w'_n = t w_n y with w_n the zig-zag enumeration entry
                    let idx = if n == 0 { 0 } else { 2 * n - 1 };
                    let wn = self.cycles.nth(idx);
                    let seg = self.seed_t().concat(&wn).concat(&self.seed_y());
                    self.right.extend(seg.0.iter());
                    if n >= 1 {
                        let p = self.right.len() as i64;
                        self.branch_src.insert(n, p);
                        self.src_at.insert(p, n);
                    }
                    let u = self.u.clone();
                    self.right.extend(u.0.iter());
                }
                Kind::Strong { w, .. } => {
                    let seg = w.concat(&self.u);
                    self.right.extend(seg.0.iter());
                }
            }
        }
    }

    fn ensure_left(&mut self, pos: i64) {
        while (self.left.len() as i64) < -pos {
            match &mut self.kind {
                Kind::Reversible { left_blocks, .. } => {
                    let n = *left_blocks;
                    *left_blocks += 1;
                    if n == 0 {
                        let u = self.u.clone();
                        self.push_left_segment(&u);
                    } else {
                        // w'_{-n} = t w_{-n} y, then the separating u
                        let wn = self.cycles.nth(2 * n);
                        let seg = self.seed_t().concat(&wn).concat(&self.seed_y());
                        self.push_left_segment(&seg);
                        let qn = -(self.left.len() as i64);
                        self.branch_dst.insert(n, qn);
                        self.dst_at.insert(qn, n);
                        let u = self.u.clone();
                        self.push_left_segment(&u);
                    }
                }
                Kind::Strong { .. } => {
                    let n = self.strong_left_blocks();
                    self.bump_strong_left_blocks();
                    if n == 0 {
                        let u = self.u.clone();
                        self.push_left_segment(&u);
                    } else {
                        let (m_n, _) = self.strong_schedule_entry(n);
                        let w_minus = self.strong_w_minus(n);
                        self.push_left_segment(&w_minus);
                        let v = self.v.clone();
                        self.push_left_segment(&v);
                        let uw = self.u.concat(&self.strong_w());
                        let seg = uw.repeat(m_n);
                        let nn = -((self.left.len() + seg.len()) as i64) + self.u.len() as i64;
                        debug_assert_eq!(nn, self.strong_target(n));
                        self.branch_dst.insert(n, nn);
                        self.dst_at.insert(nn, n);
                        self.push_left_segment(&seg);
                    }
                }
            }
        }
    }

    /// `w_{-i} = t w'_i y` for the strong construction (enumeration from 1).
    fn strong_w_minus(&mut self, i: usize) -> Word {
        let wi = self.cycles.nth(i - 1);
        self.seed_t().concat(&wi).concat(&self.seed_y())
    }

    fn strong_w(&self) -> Word {
        match &self.kind {
            Kind::Strong { w, .. } => w.clone(),
            Kind::Reversible { .. } => unreachable!("strong accessor"),
        }
    }

    fn strong_left_blocks(&self) -> usize {
        match &self.kind {
            Kind::Strong { left_blocks, .. } => *left_blocks,
            Kind::Reversible { .. } => unreachable!("strong accessor"),
        }
    }

    fn bump_strong_left_blocks(&mut self) {
        match &mut self.kind {
            Kind::Strong { left_blocks, .. } => *left_blocks += 1,
            Kind::Reversible { .. } => unreachable!("strong accessor"),
        }
    }

    /// `(m_i, |s_i|)` with `m_i` minimal such that
    /// `(m_i - 1) |uw| >= 2 |s_i|`, `s_1 = v w_{-1} v` and
    /// `s_{i+1} = v w_{-(i+1)} (uw)^{m_i} s_i`.
    fn strong_schedule_entry(&mut self, i: usize) -> (usize, usize) {
        let uw_len = self.u.len() + self.strong_w().len();
        loop {
            let have = match &self.kind {
                Kind::Strong { schedule, .. } => schedule.len(),
                Kind::Reversible { .. } => unreachable!("strong accessor"),
            };
            if have >= i {
                break;
            }
            let next_index = have + 1;
            let w_minus_len = self.strong_w_minus(next_index).len();
            let s_len = if next_index == 1 {
                2 * self.v.len() + w_minus_len
            } else {
                let (m_prev, s_prev) = match &self.kind {
                    Kind::Strong { schedule, .. } => schedule[have - 1],
                    Kind::Reversible { .. } => unreachable!("strong accessor"),
                };
                self.v.len() + w_minus_len + m_prev * uw_len + s_prev
            };
            let m = (2 * s_len).div_ceil(uw_len) + 1; // minimal with (m - 1) uw_len >= 2 s_len
            debug_assert!((m - 1) * uw_len >= 2 * s_len && (m - 2) * uw_len < 2 * s_len);
            match &mut self.kind {
                Kind::Strong { schedule, .. } => schedule.push((m, s_len)),
                Kind::Reversible { .. } => unreachable!("strong accessor"),
            }
        }
        match &self.kind {
            Kind::Strong { schedule, .. } => schedule[i - 1],
            Kind::Reversible { .. } => unreachable!("strong accessor"),
        }
    }

    /// `N_i` as a line position: the terminal vertex of the first `u` in
    /// the `(uw)^{m_i} v w_{-i}` factor, computed from lengths alone.
    fn strong_target(&mut self, i: usize) -> i64 {
        let uw_len = self.u.len() + self.strong_w().len();
        let (m_i, s_len) = self.strong_schedule_entry(i);
        -((s_len - self.v.len() + m_i * uw_len) as i64)
    }

    /// The increasing sequence `k_1 = m_1 < k_2 < ...`; beyond the first
    /// entry each `k_i` is chosen just large enough that `M_i` lands at or
    /// past `|N_i|`, so a window of radius `r` only ever touches branches
    /// whose far end is within `O(r)` of the basepoint.
    fn strong_k_entry(&mut self, i: usize) -> i64 {
        let uw_len = (self.u.len() + self.strong_w().len()) as i64;
        let w_len = self.strong_w().len() as i64;
        loop {
            let have = match &self.kind {
                Kind::Strong { ks, .. } => ks.len(),
                Kind::Reversible { .. } => unreachable!("strong accessor"),
            };
            if have >= i {
                break;
            }
            let next_index = have + 1;
            let k = if next_index == 1 {
                self.strong_schedule_entry(1).0 as i64
            } else {
                let prev = match &self.kind {
                    Kind::Strong { ks, .. } => ks[have - 1],
                    Kind::Reversible { .. } => unreachable!("strong accessor"),
                };
                let n_abs = -self.strong_target(next_index);
                ((n_abs - w_len).div_euclid(uw_len) + 1).max(prev + 1)
            };
            match &mut self.kind {
                Kind::Strong { ks, .. } => ks.push(k),
                Kind::Reversible { .. } => unreachable!("strong accessor"),
            }
        }
        match &self.kind {
            Kind::Strong { ks, .. } => ks[i - 1],
            Kind::Reversible { .. } => unreachable!("strong accessor"),
        }
    }

    /// Place strong-construction branch sources `M_j = k_j |wu| + |w|` for
    /// all `j` with `M_j <= pos`.
    fn ensure_strong_anchors(&mut self, pos: i64) {
        if !matches!(self.kind, Kind::Strong { .. }) {
            return;
        }
        let uw_len = (self.u.len() + self.strong_w().len()) as i64;
        let w_len = self.strong_w().len() as i64;
        loop {
            let placed = match &self.kind {
                Kind::Strong { anchors_placed, .. } => *anchors_placed,
                Kind::Reversible { .. } => unreachable!("strong accessor"),
            };
            let i = placed + 1;
            let m_i_pos = self.strong_k_entry(i) * uw_len + w_len;
            if m_i_pos > pos {
                break;
            }
            self.branch_src.insert(i, m_i_pos);
            self.src_at.insert(m_i_pos, i);
            match &mut self.kind {
                Kind::Strong { anchors_placed, .. } => *anchors_placed = i,
                Kind::Reversible { .. } => unreachable!("strong accessor"),
            }
        }
    }

    /// Register strong-construction branch targets `N_j` for all `j` with
    /// `N_j >= pos`; `N_j` decreases geometrically so this stays bounded.
    fn ensure_strong_targets(&mut self, pos: i64) {
        if !matches!(self.kind, Kind::Strong { .. }) || pos >= 0 {
            return;
        }
        loop {
            let placed = match &self.kind {
                Kind::Strong { targets_placed, .. } => *targets_placed,
                Kind::Reversible { .. } => unreachable!("strong accessor"),
            };
            let j = placed + 1;
            let n_j = self.strong_target(j);
            if n_j < pos {
                break;
            }
            self.branch_dst.insert(j, n_j);
            self.dst_at.insert(n_j, j);
            match &mut self.kind {
                Kind::Strong { targets_placed, .. } => *targets_placed = j,
                Kind::Reversible { .. } => unreachable!("strong accessor"),
            }
        }
    }

    fn seed_t(&self) -> Word {
        self.t.clone()
    }

    fn seed_y(&self) -> Word {
        self.y.clone()
    }
}

/// A lazily explored countable automaton over the seed's alphabet.
pub struct LazyAutomaton {
    alphabet: Alphabet,
    inner: Mutex<Inner>,
}

impl LazyAutomaton {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The state every exploration starts from.
    pub fn basepoint(&self) -> LState {
        LState::Line(0)
    }

    /// The seed-derived words `(u, v, w)`.
    pub fn words(&self) -> (Word, Word, Word) {
        let inner = self.inner.lock().unwrap();
        let w = match &inner.kind {
            Kind::Strong { w, .. } => w.clone(),
            Kind::Reversible { .. } => inner.t.concat(&inner.y),
        };
        (inner.u.clone(), inner.v.clone(), w)
    }

    /// The schedule entries `(m_i, |s_i|)` for `i = 1..=upto` of the strong
    /// construction.
    pub fn schedule(&self, upto: usize) -> Result<Vec<(usize, usize)>> {
        let mut inner = self.inner.lock().unwrap();
        if !matches!(inner.kind, Kind::Strong { .. }) {
            return Err(Error::Invalid(
                "schedule exists only for the strong construction".into(),
            ));
        }
        Ok((1..=upto)
            .map(|i| inner.strong_schedule_entry(i))
            .collect())
    }

    /// Outgoing edges of a state.
    pub fn successors(&self, s: &LState) -> Vec<(Symbol, LState)> {
        let mut inner = self.inner.lock().unwrap();
        let core = &mut *inner;
        match *s {
            LState::Line(i) => {
                let label = core.x(i);
                core.ensure_strong_anchors(i);
                let mut out = vec![(label, LState::Line(i + 1))];
                if let Some(&n) = core.src_at.get(&i) {
                    // force the branch target into existence
                    Self::force_branch(core, n);
                    out.push((core.v.0[0], LState::Branch { index: n, offset: 1 }));
                }
                debug_assert!(out.len() < 2 || out[0].0 != out[1].0);
                out
            }
            LState::Branch { index, offset } => {
                let label = core.v.0[offset];
                if offset + 1 < core.v.len() {
                    vec![(
                        label,
                        LState::Branch {
                            index,
                            offset: offset + 1,
                        },
                    )]
                } else {
                    let dst = core.branch_dst[&index];
                    vec![(label, LState::Line(dst))]
                }
            }
        }
    }

    /// Incoming edges of a state.
    pub fn predecessors(&self, s: &LState) -> Vec<(Symbol, LState)> {
        let mut inner = self.inner.lock().unwrap();
        let core = &mut *inner;
        match *s {
            LState::Line(i) => {
                let label = core.x(i - 1);
                // a branch may land here: make sure every target at or
                // right of this position is registered
                core.ensure_strong_targets(i);
                let mut out = vec![(label, LState::Line(i - 1))];
                if let Some(&n) = core.dst_at.get(&i) {
                    Self::force_branch(core, n);
                    let v_len = core.v.len();
                    let pred = if v_len == 1 {
                        LState::Line(core.branch_src[&n])
                    } else {
                        LState::Branch {
                            index: n,
                            offset: v_len - 1,
                        }
                    };
                    out.push((*core.v.0.last().unwrap(), pred));
                }
                debug_assert!(out.len() < 2 || out[0].0 != out[1].0);
                out
            }
            LState::Branch { index, offset } => {
                let label = core.v.0[offset - 1];
                if offset == 1 {
                    vec![(label, LState::Line(core.branch_src[&index]))]
                } else {
                    vec![(
                        label,
                        LState::Branch {
                            index,
                            offset: offset - 1,
                        },
                    )]
                }
            }
        }
    }

    /// Make sure both endpoints of branch `n` are materialized.
    fn force_branch(core: &mut Inner, n: usize) {
        match core.kind {
            Kind::Reversible { .. } => {
                while !core.branch_src.contains_key(&n) {
                    let next = core.right.len() as i64;
                    core.ensure_right(next);
                }
                while !core.branch_dst.contains_key(&n) {
                    let next = -(core.left.len() as i64) - 1;
                    core.ensure_left(next);
                }
            }
            Kind::Strong { .. } => {
                if !core.branch_src.contains_key(&n) {
                    let uw_len = (core.u.len() + core.strong_w().len()) as i64;
                    let w_len = core.strong_w().len() as i64;
                    let pos = core.strong_k_entry(n) * uw_len + w_len;
                    core.ensure_strong_anchors(pos);
                }
                if !core.branch_dst.contains_key(&n) {
                    let n_pos = core.strong_target(n);
                    core.ensure_strong_targets(n_pos);
                }
            }
        }
    }
}

/// The reversible line-and-branches construction: a countable deterministic
/// and codeterministic automaton recognizing the factor language of the
/// seed's shift.
pub fn fiebig_reversible(seed: &FiebigSeed) -> LazyAutomaton {
    LazyAutomaton {
        alphabet: seed.base.alphabet().clone(),
        inner: Mutex::new(Inner {
            u: seed.u(),
            v: seed.v(),
            t: seed.t.clone(),
            y: seed.y.clone(),
            kind: Kind::Reversible {
                right_blocks: 0,
                left_blocks: 0,
            },
            right: Vec::new(),
            left: Vec::new(),
            branch_src: BTreeMap::new(),
            branch_dst: BTreeMap::new(),
            src_at: BTreeMap::new(),
            dst_at: BTreeMap::new(),
            cycles: CycleEnum::new(seed.base.clone(), seed.q),
        }),
    }
}

/// The refined construction with a length schedule spacing the branches out:
/// reversible and, over the whole countable automaton, strongly unambiguous.
pub fn fiebig_strongly_unambiguous(seed: &FiebigSeed) -> LazyAutomaton {
    LazyAutomaton {
        alphabet: seed.base.alphabet().clone(),
        inner: Mutex::new(Inner {
            u: seed.u(),
            v: seed.v(),
            t: seed.t.clone(),
            y: seed.y.clone(),
            kind: Kind::Strong {
                w: seed.w(),
                schedule: Vec::new(),
                ks: Vec::new(),
                anchors_placed: 0,
                targets_placed: 0,
                left_blocks: 0,
            },
            right: Vec::new(),
            left: Vec::new(),
            branch_src: BTreeMap::new(),
            branch_dst: BTreeMap::new(),
            src_at: BTreeMap::new(),
            dst_at: BTreeMap::new(),
            cycles: CycleEnum::new(seed.base.clone(), seed.q),
        }),
    }
}

/// A finite window of a lazy automaton: every state within the requested
/// graph distance of the basepoint, with the induced edges. `boundary[i]`
/// marks states at exactly the limit distance, whose path language is
/// truncated.
pub struct WindowAutomaton {
    pub automaton: Automaton,
    pub states: Vec<LState>,
    pub boundary: Vec<bool>,
}

impl WindowAutomaton {
    /// The window with boundary states removed: all its paths extend to
    /// bi-infinite paths of the lazy automaton.
    pub fn interior(&self) -> Automaton {
        let keep: Vec<bool> = self.boundary.iter().map(|&b| !b).collect();
        self.automaton.restrict(&keep).0
    }
}

/// Extract the ball of the given radius around the basepoint.
pub fn window(la: &LazyAutomaton, radius: usize) -> Result<WindowAutomaton> {
    let mut dist: BTreeMap<LState, usize> = BTreeMap::from([(la.basepoint(), 0)]);
    let mut queue = VecDeque::from([la.basepoint()]);
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        if d == radius {
            continue;
        }
        let mut neighbors: Vec<LState> = Vec::new();
        neighbors.extend(la.successors(&s).into_iter().map(|(_, t)| t));
        neighbors.extend(la.predecessors(&s).into_iter().map(|(_, t)| t));
        for t in neighbors {
            if !dist.contains_key(&t) {
                dist.insert(t, d + 1);
                queue.push_back(t);
            }
        }
    }
    let states: Vec<LState> = dist.keys().copied().collect();
    let index: BTreeMap<LState, usize> = states
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();
    let mut edges = Vec::new();
    for (i, s) in states.iter().enumerate() {
        for (label, t) in la.successors(s) {
            if let Some(&j) = index.get(&t) {
                edges.push(Edge {
                    src: i,
                    label,
                    dst: j,
                });
            }
        }
    }
    let names = states
        .iter()
        .map(|s| match s {
            LState::Line(i) => i.to_string(),
            LState::Branch { index, offset } => format!("({index},{offset})"),
        })
        .collect();
    let all: BTreeSet<usize> = (0..states.len()).collect();
    let automaton = Automaton::new(
        la.alphabet().clone(),
        states.len(),
        edges,
        all.clone(),
        all,
    )?
    .with_state_names(names);
    if !automaton.is_locally_reversible() {
        return Err(Error::Internal(
            "window is not reversible: construction invariant broken".into(),
        ));
    }
    let boundary = states.iter().map(|s| dist[s] == radius).collect();
    Ok(WindowAutomaton {
        automaton,
        states,
        boundary,
    })
}

/// A beta-shift generating sequence: preperiod digits followed by a
/// repeating period.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BetaSpec {
    pub preperiod: Vec<u8>,
    pub period: Vec<u8>,
}

impl BetaSpec {
    /// The digit `g_{i+1}` (0-based index into the eventually periodic
    /// sequence).
    pub fn digit(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }
}

/// The finite automaton recognizing the factor language of the beta-shift
/// with the given generating sequence: a chain folded into its period, with
/// back edges to the start for every digit below the generating one.
pub fn beta_automaton(spec: &BetaSpec) -> Result<Automaton> {
    if spec.period.is_empty() {
        return Err(Error::BadGeneratingSequence("empty period".into()));
    }
    if spec.period.iter().all(|&d| d == 0) {
        return Err(Error::AllZeroPeriod);
    }
    let digits: Vec<u8> = spec
        .preperiod
        .iter()
        .chain(spec.period.iter())
        .copied()
        .collect();
    if digits.iter().any(|&d| d > 9) {
        return Err(Error::BadGeneratingSequence(
            "digits above 9 are not supported".into(),
        ));
    }
    if digits[0] == 0 {
        return Err(Error::BadGeneratingSequence(
            "leading digit must be positive".into(),
        ));
    }
    let max = *digits.iter().max().unwrap() as usize;
    let alphabet = Alphabet::digits(max + 1)?;
    let p = spec.preperiod.len();
    let n = digits.len();
    let mut edges = Vec::new();
    for (i, &g) in digits.iter().enumerate() {
        let forward_dst = if i + 1 < n { i + 1 } else { p };
        edges.push(Edge {
            src: i,
            label: Symbol(g),
            dst: forward_dst,
        });
        for low in 0..g {
            edges.push(Edge {
                src: i,
                label: Symbol(low),
                dst: 0,
            });
        }
    }
    let all: BTreeSet<usize> = (0..n).collect();
    let names = (0..n).map(|i| i.to_string()).collect();
    Ok(Automaton::new(alphabet, n, edges, all.clone(), all)?.with_state_names(names))
}
