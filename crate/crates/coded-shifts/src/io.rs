//! Text formats for automata, codes, morphisms and block maps, plus the
//! deterministic DOT export.
//!
//! Automaton files: header lines `@alphabet <chars>`, `@initial <ids>`,
//! `@terminal <ids>`, then one edge per line as `src label dst`. Code files:
//! one word per line, or a single rational expression. Morphism files:
//! `letter -> word` lines. Block map files: `word -> letter` lines. `#`
//! starts a comment everywhere and blank lines are ignored.

use crate::alphabet::{Alphabet, Word};
use crate::automata::{Automaton, Edge};
use crate::codes::FiniteCode;
use crate::error::Error;
use crate::morphisms::Morphism;
use crate::rational::RationalExpression;
use crate::shifts::BlockMap;
use crate::Result;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-comment content of each line, keeping 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                None
            } else {
                Some((i + 1, line))
            }
        })
        .collect()
}

/// Parse the automaton text format.
///
/// The alphabet is taken from the `@alphabet` header or inferred from the
/// edge labels in sorted order; states are the integers mentioned anywhere,
/// and `@initial` / `@terminal` default to every state when absent.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let lines = content_lines(text);
    let mut alphabet: Option<Alphabet> = None;
    let mut initial: Option<Vec<(usize, usize)>> = None;
    let mut terminal: Option<Vec<(usize, usize)>> = None;
    let mut raw_edges: Vec<(usize, usize, char, usize)> = Vec::new();

    let parse_id = |ln: usize, tok: &str| -> Result<usize> {
        tok.parse::<usize>()
            .map_err(|_| err(ln, format!("expected a state id, found {tok:?}")))
    };
    for &(ln, line) in &lines {
        if let Some(rest) = line.strip_prefix("@alphabet") {
            let chars = rest.trim();
            if chars.is_empty() {
                return Err(err(ln, "empty @alphabet header"));
            }
            alphabet = Some(Alphabet::from_str(chars)?);
        } else if let Some(rest) = line.strip_prefix("@initial") {
            let ids = rest
                .split_whitespace()
                .map(|t| parse_id(ln, t).map(|i| (ln, i)))
                .collect::<Result<Vec<_>>>()?;
            initial = Some(ids);
        } else if let Some(rest) = line.strip_prefix("@terminal") {
            let ids = rest
                .split_whitespace()
                .map(|t| parse_id(ln, t).map(|i| (ln, i)))
                .collect::<Result<Vec<_>>>()?;
            terminal = Some(ids);
        } else {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [src, label, dst] = toks[..] else {
                return Err(err(ln, format!("expected `src label dst`, found {line:?}")));
            };
            let mut chars = label.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(err(ln, format!("label must be a single character, found {label:?}")));
            };
            raw_edges.push((ln, parse_id(ln, src)?, c, parse_id(ln, dst)?));
        }
    }

    let alphabet = match alphabet {
        Some(a) => a,
        None => {
            let chars: BTreeSet<char> = raw_edges.iter().map(|&(_, _, c, _)| c).collect();
            if chars.is_empty() {
                return Err(err(0, "no @alphabet header and no edges to infer it from"));
            }
            Alphabet::new(chars)?
        }
    };

    let mut n = 0usize;
    for &(_, s, _, d) in &raw_edges {
        n = n.max(s + 1).max(d + 1);
    }
    for ids in [&initial, &terminal].into_iter().flatten() {
        for &(_, i) in ids {
            n = n.max(i + 1);
        }
    }

    let mut edges = Vec::new();
    for (ln, s, c, d) in raw_edges {
        let label = alphabet
            .symbol(c)
            .map_err(|_| err(ln, format!("label {c:?} is not in the alphabet")))?;
        edges.push(Edge {
            src: s,
            label,
            dst: d,
        });
    }
    let all: BTreeSet<usize> = (0..n).collect();
    let initial = initial.map_or_else(
        || all.clone(),
        |ids| ids.into_iter().map(|(_, i)| i).collect(),
    );
    let terminal = terminal.map_or_else(
        || all.clone(),
        |ids| ids.into_iter().map(|(_, i)| i).collect(),
    );
    Automaton::new(alphabet, n, edges, initial, terminal)
}

/// Serialize an automaton in the text format; `parse_automaton` of the
/// result reproduces the automaton.
pub fn format_automaton(a: &Automaton) -> String {
    let mut out = String::new();
    let chars: String = a.alphabet().symbols().map(|s| a.alphabet().char(s)).collect();
    writeln!(out, "@alphabet {chars}").unwrap();
    let ids = |set: &BTreeSet<usize>| {
        set.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    writeln!(out, "@initial {}", ids(a.initial())).unwrap();
    writeln!(out, "@terminal {}", ids(a.terminal())).unwrap();
    let mut edges: Vec<&Edge> = a.edges().iter().collect();
    edges.sort_by_key(|e| (e.src, e.label, e.dst));
    for e in edges {
        writeln!(out, "{} {} {}", e.src, a.alphabet().char(e.label), e.dst).unwrap();
    }
    out
}

/// Deterministic DOT export: states in index order as circles, terminal
/// states doubled, initial states marked by an arrow from a point node,
/// edges sorted by (source, label, target).
pub fn to_dot(a: &Automaton) -> String {
    let mut out = String::new();
    writeln!(out, "digraph automaton {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for q in 0..a.num_states() {
        let shape = if a.terminal().contains(&q) {
            " [shape=doublecircle]"
        } else {
            ""
        };
        writeln!(out, "  q{} [label=\"{}\"]{};", q, a.state_name(q), shape).unwrap();
    }
    for (k, q) in a.initial().iter().enumerate() {
        writeln!(out, "  init{k} [shape=point];").unwrap();
        writeln!(out, "  init{k} -> q{q};").unwrap();
    }
    let mut edges: Vec<&Edge> = a.edges().iter().collect();
    edges.sort_by_key(|e| (e.src, e.label, e.dst));
    for e in edges {
        writeln!(
            out,
            "  q{} -> q{} [label=\"{}\"];",
            e.src,
            e.dst,
            a.alphabet().char(e.label)
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

/// A code read from a file: either an explicit finite word list or a
/// rational expression.
#[derive(Debug)]
pub enum CodeInput {
    Finite(FiniteCode),
    Expression(RationalExpression),
}

/// Parse a code file: an optional `@alphabet` header and one word per line.
/// A single non-header line containing an expression metacharacter
/// (`| * ( ) ~`) is parsed as a rational expression instead.
pub fn parse_code(text: &str) -> Result<CodeInput> {
    let lines = content_lines(text);
    let mut alphabet: Option<Alphabet> = None;
    let mut body: Vec<(usize, &str)> = Vec::new();
    for &(ln, line) in &lines {
        if let Some(rest) = line.strip_prefix("@alphabet") {
            let chars = rest.trim();
            if chars.is_empty() {
                return Err(err(ln, "empty @alphabet header"));
            }
            alphabet = Some(Alphabet::from_str(chars)?);
        } else {
            body.push((ln, line));
        }
    }
    if body.is_empty() {
        return Err(err(0, "no words in code file"));
    }
    let is_expression =
        body.len() == 1 && body[0].1.chars().any(|c| "|*()~".contains(c));
    if is_expression {
        let (ln, src) = body[0];
        let e = match &alphabet {
            Some(a) => RationalExpression::parse(a, src),
            None => RationalExpression::parse_inferred(src),
        };
        return e.map(CodeInput::Expression).map_err(|e| match e {
            Error::Parse { msg, .. } => err(ln, msg),
            other => other,
        });
    }
    let alphabet = match alphabet {
        Some(a) => a,
        None => {
            let chars: BTreeSet<char> = body.iter().flat_map(|(_, w)| w.chars()).collect();
            Alphabet::new(chars)?
        }
    };
    let mut words = Vec::new();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for (ln, w) in body {
        if !seen.insert(w) {
            return Err(err(ln, format!("duplicate word {w:?}")));
        }
        let word = alphabet
            .word(w)
            .map_err(|_| err(ln, format!("word {w:?} uses letters outside the alphabet")))?;
        if word.is_empty() {
            return Err(err(ln, "empty word in code"));
        }
        words.push(word);
    }
    Ok(CodeInput::Finite(FiniteCode::new(alphabet, words)?))
}

/// Serialize a finite code; `parse_code` of the result reproduces it.
pub fn format_code(c: &FiniteCode) -> String {
    let mut out = String::new();
    let chars: String = c.alphabet().symbols().map(|s| c.alphabet().char(s)).collect();
    writeln!(out, "@alphabet {chars}").unwrap();
    for w in c.words() {
        writeln!(out, "{}", c.alphabet().format(w)).unwrap();
    }
    out
}

/// Split a `lhs -> rhs` line.
fn arrow(ln: usize, line: &str) -> Result<(String, String)> {
    let Some((lhs, rhs)) = line.split_once("->") else {
        return Err(err(ln, format!("expected `lhs -> rhs`, found {line:?}")));
    };
    Ok((lhs.trim().to_string(), rhs.trim().to_string()))
}

/// Parse a morphism file of `letter -> word` lines. The source alphabet is
/// the left-hand letters in sorted order; the target alphabet is inferred
/// from the images unless a `@target` header gives it explicitly.
pub fn parse_morphism(text: &str) -> Result<Morphism> {
    let lines = content_lines(text);
    let mut target: Option<Alphabet> = None;
    let mut rules: Vec<(usize, char, String)> = Vec::new();
    for &(ln, line) in &lines {
        if let Some(rest) = line.strip_prefix("@target") {
            target = Some(Alphabet::from_str(rest.trim())?);
            continue;
        }
        let (lhs, rhs) = arrow(ln, line)?;
        let mut chars = lhs.chars();
        let (Some(b), None) = (chars.next(), chars.next()) else {
            return Err(err(ln, format!("left-hand side must be one letter, found {lhs:?}")));
        };
        if rhs.is_empty() {
            return Err(err(ln, format!("empty image for {b:?}")));
        }
        if rules.iter().any(|&(_, c, _)| c == b) {
            return Err(err(ln, format!("duplicate rule for {b:?}")));
        }
        rules.push((ln, b, rhs));
    }
    if rules.is_empty() {
        return Err(err(0, "no rules in morphism file"));
    }
    let source = Alphabet::new(rules.iter().map(|&(_, b, _)| b).collect::<BTreeSet<_>>())?;
    let target = match target {
        Some(t) => t,
        None => Alphabet::new(
            rules
                .iter()
                .flat_map(|(_, _, w)| w.chars())
                .collect::<BTreeSet<_>>(),
        )?,
    };
    let mut images = vec![Word::empty(); source.len()];
    for (ln, b, w) in rules {
        let b = source.symbol(b).expect("letter came from the rules");
        images[b.index()] = target
            .word(&w)
            .map_err(|_| err(ln, format!("image {w:?} uses letters outside the target alphabet")))?;
    }
    Morphism::new(source, target, images)
}

/// Serialize a morphism; `parse_morphism` of the result reproduces it.
pub fn format_morphism(m: &Morphism) -> String {
    let mut out = String::new();
    let chars: String = m.target().symbols().map(|s| m.target().char(s)).collect();
    writeln!(out, "@target {chars}").unwrap();
    for b in m.source().symbols() {
        writeln!(
            out,
            "{} -> {}",
            m.source().char(b),
            m.target().format(m.image(b))
        )
        .unwrap();
    }
    out
}

/// Parse a block map file of `word -> letter` lines; all left-hand words
/// must share one length, the window size. Memory defaults to the window
/// size minus one (anticipation zero); `@anticipation N` overrides it.
pub fn parse_block_map(text: &str) -> Result<BlockMap> {
    let lines = content_lines(text);
    let mut anticipation: Option<usize> = None;
    let mut rules: Vec<(usize, String, char)> = Vec::new();
    for &(ln, line) in &lines {
        if let Some(rest) = line.strip_prefix("@anticipation") {
            anticipation = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| err(ln, "expected a number after @anticipation"))?,
            );
            continue;
        }
        let (lhs, rhs) = arrow(ln, line)?;
        let mut chars = rhs.chars();
        let (Some(c), None) = (chars.next(), chars.next()) else {
            return Err(err(ln, format!("right-hand side must be one letter, found {rhs:?}")));
        };
        if lhs.is_empty() {
            return Err(err(ln, "empty block on the left-hand side"));
        }
        if rules.iter().any(|(_, w, _)| *w == lhs) {
            return Err(err(ln, format!("duplicate block {lhs:?}")));
        }
        rules.push((ln, lhs, c));
    }
    if rules.is_empty() {
        return Err(err(0, "no rules in block map file"));
    }
    let window = rules[0].1.chars().count();
    if let Some(&(ln, ref w, _)) = rules.iter().find(|(_, w, _)| w.chars().count() != window) {
        return Err(err(ln, format!("block {w:?} does not have the common length {window}")));
    }
    let source = Alphabet::new(
        rules
            .iter()
            .flat_map(|(_, w, _)| w.chars())
            .collect::<BTreeSet<_>>(),
    )?;
    let target = Alphabet::new(rules.iter().map(|&(_, _, c)| c).collect::<BTreeSet<_>>())?;
    let mut table = BTreeMap::new();
    for (_, w, c) in rules {
        table.insert(
            source.word(&w).expect("letters came from the rules"),
            target.symbol(c).expect("letter came from the rules"),
        );
    }
    let anticipation = anticipation.unwrap_or(0);
    if anticipation >= window {
        return Err(err(0, format!("anticipation {anticipation} exceeds the window {window}")));
    }
    BlockMap::new(source, target, window - 1 - anticipation, anticipation, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automaton_round_trip() {
        let text = "@alphabet ab\n@initial 0\n@terminal 0 1\n0 a 0\n0 b 1\n1 b 0\n";
        let a = parse_automaton(text).unwrap();
        assert_eq!(a.num_states(), 2);
        assert_eq!(a.edges().len(), 3);
        assert_eq!(a.initial(), &BTreeSet::from([0]));
        assert_eq!(format_automaton(&a), text);

        // headers optional, comments and blank lines skipped
        let b = parse_automaton("# even shift\n\n0 a 0\n0 b 1\n1 b 0 # back\n").unwrap();
        assert_eq!(b.initial(), &BTreeSet::from([0, 1]));
        assert_eq!(b.alphabet().len(), 2);
        let again = parse_automaton(&format_automaton(&b)).unwrap();
        assert_eq!(format_automaton(&again), format_automaton(&b));
    }

    #[test]
    fn automaton_errors_carry_line_numbers() {
        match parse_automaton("0 a 0\n0 ab 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_automaton("@alphabet ab\n0 c 0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_automaton("0 a 0\n0 a 0\n"),
            Err(Error::DuplicateEdge(0, 'a', 0))
        ));
    }

    #[test]
    fn dot_output_is_deterministic_and_complete() {
        let a = parse_automaton("@alphabet ab\n@initial 0\n@terminal 1\n0 b 1\n0 a 0\n").unwrap();
        let dot = to_dot(&a);
        assert!(dot.starts_with("digraph automaton {"));
        assert!(dot.contains("q1 [label=\"1\"] [shape=doublecircle];"));
        assert!(dot.contains("init0 -> q0;"));
        let a_idx = dot.find("q0 -> q0 [label=\"a\"]").unwrap();
        let b_idx = dot.find("q0 -> q1 [label=\"b\"]").unwrap();
        assert!(a_idx < b_idx, "edges must be sorted");
        assert_eq!(dot, to_dot(&a));
    }

    #[test]
    fn code_parsing() {
        let CodeInput::Finite(c) = parse_code("a\nbb\n").unwrap() else {
            panic!("expected a finite code");
        };
        assert_eq!(c.words().len(), 2);
        assert_eq!(format_code(&c), "@alphabet ab\na\nbb\n");

        match parse_code("ab\nab\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected duplicate error, got {other:?}"),
        }

        let CodeInput::Expression(e) = parse_code("@alphabet ab\n(bb)*a\n").unwrap() else {
            panic!("expected an expression");
        };
        assert_eq!(e.to_string(), "(bb)*a");
    }

    #[test]
    fn morphism_parsing() {
        let m = parse_morphism("a -> ab\nb -> ba\n").unwrap();
        assert_eq!(m.source().len(), 2);
        assert_eq!(m.target().format(m.image(m.source().symbol('a').unwrap())), "ab");
        let again = parse_morphism(&format_morphism(&m)).unwrap();
        assert_eq!(format_morphism(&again), format_morphism(&m));

        match parse_morphism("a -> ab\na -> b\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn block_map_parsing() {
        let f = parse_block_map("ab -> a\nba -> a\nbb -> b\n").unwrap();
        assert_eq!(f.window(), 2);
        assert_eq!(f.memory, 1);
        assert_eq!(f.anticipation, 0);
        assert_eq!(f.table.len(), 3);

        let g = parse_block_map("@anticipation 1\nab -> a\nba -> a\nbb -> b\n").unwrap();
        assert_eq!(g.memory, 0);
        assert_eq!(g.anticipation, 1);

        match parse_block_map("ab -> a\nbab -> b\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected length error, got {other:?}"),
        }
    }
}
