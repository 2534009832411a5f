//! Rational expressions: parsing, printing, compilation to automata
//! (position construction) and extraction from automata (state elimination).
//!
//! The concrete syntax uses `|` for union, juxtaposition for product, `*`
//! for star, parentheses, and `~` for the empty word.

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::{Automaton, Edge};
use crate::error::Error;
use crate::Result;
use std::collections::BTreeSet;
use std::fmt;

/// Syntax tree of a rational expression over a fixed alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Node {
    /// The empty language. Never produced by the parser; appears as the
    /// identity element during state elimination.
    Empty,
    Epsilon,
    Letter(Symbol),
    Union(Vec<Node>),
    Concat(Vec<Node>),
    Star(Box<Node>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalExpression {
    pub alphabet: Alphabet,
    pub node: Node,
}

impl RationalExpression {
    pub fn parse(alphabet: &Alphabet, input: &str) -> Result<Self> {
        let mut p = Parser {
            alphabet,
            chars: input.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let node = p.union()?;
        if p.pos != p.chars.len() {
            return Err(Error::BadExpression(format!(
                "unexpected {:?} at position {}",
                p.chars[p.pos], p.pos
            )));
        }
        Ok(RationalExpression {
            alphabet: alphabet.clone(),
            node,
        })
    }

    /// Parse with the alphabet inferred from the letters that occur.
    pub fn parse_inferred(input: &str) -> Result<Self> {
        let mut letters: Vec<char> = input
            .chars()
            .filter(|c| !c.is_whitespace() && !"|*()~".contains(*c))
            .collect();
        letters.sort();
        letters.dedup();
        let alphabet = Alphabet::new(letters)?;
        Self::parse(&alphabet, input)
    }

    pub fn from_words(alphabet: &Alphabet, words: &[Word]) -> Self {
        let node = Node::Union(
            words
                .iter()
                .map(|w| {
                    if w.is_empty() {
                        Node::Epsilon
                    } else {
                        Node::Concat(w.0.iter().map(|&s| Node::Letter(s)).collect())
                    }
                })
                .collect(),
        );
        RationalExpression {
            alphabet: alphabet.clone(),
            node: normalize(node),
        }
    }

    /// Does the denoted language contain the empty word?
    pub fn nullable(&self) -> bool {
        nullable(&self.node)
    }

    pub fn normalized(&self) -> Self {
        RationalExpression {
            alphabet: self.alphabet.clone(),
            node: normalize(self.node.clone()),
        }
    }

    /// Glushkov position automaton: one state per letter occurrence plus an
    /// initial state without incoming edges.
    pub fn to_automaton(&self) -> Automaton {
        let mut positions = Vec::new();
        collect_letters(&self.node, &mut positions);
        let indexed = index_positions(&self.node, &mut 0);
        let first = first_set(&indexed);
        let last = last_set(&indexed);
        let mut follow: BTreeSet<(usize, usize)> = BTreeSet::new();
        follow_set(&indexed, &mut follow);

        let n = positions.len() + 1;
        let mut edges = BTreeSet::new();
        for &p in &first {
            edges.insert(Edge {
                src: 0,
                label: positions[p],
                dst: p + 1,
            });
        }
        for &(p, q) in &follow {
            edges.insert(Edge {
                src: p + 1,
                label: positions[q],
                dst: q + 1,
            });
        }
        let mut terminal: BTreeSet<usize> = last.iter().map(|&p| p + 1).collect();
        if nullable(&self.node) {
            terminal.insert(0);
        }
        Automaton::new(
            self.alphabet.clone(),
            n,
            edges.into_iter().collect(),
            BTreeSet::from([0]),
            terminal,
        )
        .expect("position automaton is valid")
    }

    /// Automaton of the star of the denoted language (used for C*).
    ///
    /// Errors if the language contains the empty word: a code never does.
    pub fn star_automaton(&self) -> Result<Automaton> {
        if self.nullable() {
            return Err(Error::EmptyCodeWord);
        }
        let base = self.to_automaton();
        let mut edges: BTreeSet<Edge> = base.edges().iter().copied().collect();
        let initial_edges: Vec<Edge> = base
            .edges()
            .iter()
            .filter(|e| e.src == 0)
            .copied()
            .collect();
        for &f in base.terminal() {
            for e in &initial_edges {
                edges.insert(Edge {
                    src: f,
                    label: e.label,
                    dst: e.dst,
                });
            }
        }
        let mut terminal = base.terminal().clone();
        terminal.insert(0);
        Automaton::new(
            self.alphabet.clone(),
            base.num_states(),
            edges.into_iter().collect(),
            BTreeSet::from([0]),
            terminal,
        )
    }
}

impl fmt::Display for RationalExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", show(&self.node, &self.alphabet, 0))
    }
}

// precedence: union 0, concat 1, star 2
fn show(node: &Node, alphabet: &Alphabet, prec: u8) -> String {
    let (s, p) = match node {
        Node::Empty => ("#".to_string(), 3),
        Node::Epsilon => ("~".to_string(), 3),
        Node::Letter(a) => (alphabet.char(*a).to_string(), 3),
        Node::Union(items) => (
            items
                .iter()
                .map(|n| show(n, alphabet, 0))
                .collect::<Vec<_>>()
                .join("|"),
            0,
        ),
        Node::Concat(items) => (
            items
                .iter()
                .map(|n| show(n, alphabet, 1))
                .collect::<Vec<_>>()
                .concat(),
            1,
        ),
        Node::Star(inner) => (format!("{}*", show(inner, alphabet, 2)), 2),
    };
    if p < prec {
        format!("({s})")
    } else {
        s
    }
}

struct Parser<'a> {
    alphabet: &'a Alphabet,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn union(&mut self) -> Result<Node> {
        let mut items = vec![self.concat()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            items.push(self.concat()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Node::Union(items)
        })
    }

    fn concat(&mut self) -> Result<Node> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            items.push(self.factor()?);
        }
        match items.len() {
            0 => Err(Error::BadExpression("empty expression".into())),
            1 => Ok(items.pop().unwrap()),
            _ => Ok(Node::Concat(items)),
        }
    }

    fn factor(&mut self) -> Result<Node> {
        let mut node = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            node = Node::Star(Box::new(node));
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.union()?;
                if self.peek() != Some(')') {
                    return Err(Error::BadExpression("missing ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('~') => {
                self.pos += 1;
                Ok(Node::Epsilon)
            }
            Some('*') => Err(Error::BadExpression("dangling '*'".into())),
            Some(c) => {
                self.pos += 1;
                Ok(Node::Letter(self.alphabet.symbol(c)?))
            }
            None => Err(Error::BadExpression("unexpected end of input".into())),
        }
    }
}

fn nullable(node: &Node) -> bool {
    match node {
        Node::Empty | Node::Letter(_) => false,
        Node::Epsilon | Node::Star(_) => true,
        Node::Union(items) => items.iter().any(nullable),
        Node::Concat(items) => items.iter().all(nullable),
    }
}

fn collect_letters(node: &Node, out: &mut Vec<Symbol>) {
    match node {
        Node::Empty | Node::Epsilon => {}
        Node::Letter(a) => out.push(*a),
        Node::Union(items) | Node::Concat(items) => {
            items.iter().for_each(|n| collect_letters(n, out))
        }
        Node::Star(inner) => collect_letters(inner, out),
    }
}

/// Mirror of `Node` with letters replaced by their position index.
enum Indexed {
    Empty,
    Epsilon,
    Pos(usize),
    Union(Vec<Indexed>),
    Concat(Vec<Indexed>),
    Star(Box<Indexed>),
}

fn index_positions(node: &Node, counter: &mut usize) -> Indexed {
    match node {
        Node::Empty => Indexed::Empty,
        Node::Epsilon => Indexed::Epsilon,
        Node::Letter(_) => {
            let i = *counter;
            *counter += 1;
            Indexed::Pos(i)
        }
        Node::Union(items) => {
            Indexed::Union(items.iter().map(|n| index_positions(n, counter)).collect())
        }
        Node::Concat(items) => {
            Indexed::Concat(items.iter().map(|n| index_positions(n, counter)).collect())
        }
        Node::Star(inner) => Indexed::Star(Box::new(index_positions(inner, counter))),
    }
}

fn indexed_nullable(node: &Indexed) -> bool {
    match node {
        Indexed::Empty | Indexed::Pos(_) => false,
        Indexed::Epsilon | Indexed::Star(_) => true,
        Indexed::Union(items) => items.iter().any(indexed_nullable),
        Indexed::Concat(items) => items.iter().all(indexed_nullable),
    }
}

fn first_set(node: &Indexed) -> BTreeSet<usize> {
    match node {
        Indexed::Empty | Indexed::Epsilon => BTreeSet::new(),
        Indexed::Pos(i) => BTreeSet::from([*i]),
        Indexed::Union(items) => items.iter().flat_map(first_set).collect(),
        Indexed::Concat(items) => {
            let mut out = BTreeSet::new();
            for item in items {
                out.extend(first_set(item));
                if !indexed_nullable(item) {
                    break;
                }
            }
            out
        }
        Indexed::Star(inner) => first_set(inner),
    }
}

fn last_set(node: &Indexed) -> BTreeSet<usize> {
    match node {
        Indexed::Empty | Indexed::Epsilon => BTreeSet::new(),
        Indexed::Pos(i) => BTreeSet::from([*i]),
        Indexed::Union(items) => items.iter().flat_map(last_set).collect(),
        Indexed::Concat(items) => {
            let mut out = BTreeSet::new();
            for item in items.iter().rev() {
                out.extend(last_set(item));
                if !indexed_nullable(item) {
                    break;
                }
            }
            out
        }
        Indexed::Star(inner) => last_set(inner),
    }
}

fn follow_set(node: &Indexed, out: &mut BTreeSet<(usize, usize)>) {
    match node {
        Indexed::Empty | Indexed::Epsilon | Indexed::Pos(_) => {}
        Indexed::Union(items) => items.iter().for_each(|n| follow_set(n, out)),
        Indexed::Concat(items) => {
            for item in items {
                follow_set(item, out);
            }
            for i in 0..items.len() {
                // last(items[i]) x first of what can follow items[i]
                let lasts = last_set(&items[i]);
                for item in &items[i + 1..] {
                    for &p in &lasts {
                        for &q in &first_set(item) {
                            out.insert((p, q));
                        }
                    }
                    if !indexed_nullable(item) {
                        break;
                    }
                }
            }
        }
        Indexed::Star(inner) => {
            follow_set(inner, out);
            for &p in &last_set(inner) {
                for &q in &first_set(inner) {
                    out.insert((p, q));
                }
            }
        }
    }
}

/// Flatten unions and concatenations, drop units, sort union branches.
pub fn normalize(node: Node) -> Node {
    match node {
        Node::Empty | Node::Epsilon | Node::Letter(_) => node,
        Node::Union(items) => {
            let mut flat = Vec::new();
            for item in items {
                match normalize(item) {
                    Node::Empty => {}
                    Node::Union(inner) => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            flat.sort();
            flat.dedup();
            match flat.len() {
                0 => Node::Empty,
                1 => flat.pop().unwrap(),
                _ => Node::Union(flat),
            }
        }
        Node::Concat(items) => {
            let mut flat = Vec::new();
            for item in items {
                match normalize(item) {
                    Node::Empty => return Node::Empty,
                    Node::Epsilon => {}
                    Node::Concat(inner) => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            match flat.len() {
                0 => Node::Epsilon,
                1 => flat.pop().unwrap(),
                _ => Node::Concat(flat),
            }
        }
        Node::Star(inner) => match normalize(*inner) {
            Node::Empty | Node::Epsilon => Node::Epsilon,
            Node::Star(inner) => Node::Star(inner),
            other => Node::Star(Box::new(other)),
        },
    }
}

fn union_opt(a: Option<Node>, b: Option<Node>) -> Option<Node> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(Node::Union(vec![a, b])),
    }
}

fn concat_nodes(items: Vec<Node>) -> Node {
    Node::Concat(items)
}

/// Kleene's construction by state elimination: the expression of the labels
/// of paths from `initial` to `terminal` states of `a`.
///
/// `initial` and `terminal` may intersect; states are eliminated in
/// increasing index order. The result is normalized.
pub fn state_elimination(
    a: &Automaton,
    initial: &BTreeSet<usize>,
    terminal: &BTreeSet<usize>,
) -> RationalExpression {
    let n = a.num_states();
    // virtual start = n, virtual end = n + 1
    let start = n;
    let end = n + 1;
    let mut matrix: Vec<Vec<Option<Node>>> = vec![vec![None; n + 2]; n + 2];
    for e in a.edges() {
        matrix[e.src][e.dst] = union_opt(matrix[e.src][e.dst].take(), Some(Node::Letter(e.label)));
    }
    for &i in initial {
        matrix[start][i] = Some(Node::Epsilon);
    }
    for &t in terminal {
        matrix[t][end] = Some(Node::Epsilon);
    }

    for s in 0..n {
        let self_loop = matrix[s][s].take();
        let star = self_loop.map(|l| Node::Star(Box::new(l)));
        let in_edges: Vec<(usize, Node)> = (0..n + 2)
            .filter(|&p| p != s)
            .filter_map(|p| matrix[p][s].take().map(|e| (p, e)))
            .collect();
        let out_edges: Vec<(usize, Node)> = (0..n + 2)
            .filter(|&q| q != s)
            .filter_map(|q| matrix[s][q].take().map(|e| (q, e)))
            .collect();
        for (p, e1) in &in_edges {
            for (q, e2) in &out_edges {
                let mut parts = vec![e1.clone()];
                if let Some(st) = &star {
                    parts.push(st.clone());
                }
                parts.push(e2.clone());
                let through = concat_nodes(parts);
                matrix[*p][*q] = union_opt(matrix[*p][*q].take(), Some(through));
            }
        }
    }

    let node = matrix[start][end].take().unwrap_or(Node::Empty);
    RationalExpression {
        alphabet: a.alphabet().clone(),
        node: normalize(node),
    }
}

/// Exact language equality of two expressions over the same alphabet.
pub fn expressions_equivalent(x: &RationalExpression, y: &RationalExpression) -> bool {
    use crate::automata::{determinize, dfa_equivalent, minimize};
    let dx = minimize(&determinize(&x.to_automaton()).expect("has initial state"));
    let dy = minimize(&determinize(&y.to_automaton()).expect("has initial state"));
    dfa_equivalent(&dx, &dy)
}
