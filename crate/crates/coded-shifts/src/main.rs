//! Command-line front end: parse codes, automata, morphisms and block maps,
//! dispatch the decision procedures and constructions, and print verdicts,
//! expressions and DOT.
//!
//! Exit codes: 0 when a verdict or construction was produced (whether the
//! verdict is true or false), 1 on input errors, 2 on internal invariant
//! violations.

use clap::{Parser, Subcommand, ValueEnum};
use coded_shifts::alphabet::Word;
use coded_shifts::automata::Automaton;
use coded_shifts::codes::{self, FiniteCode};
use coded_shifts::countable::{self, BetaSpec, SeedResult, WindowAutomaton};
use coded_shifts::error::Error;
use coded_shifts::io::{
    format_automaton, parse_automaton, parse_block_map, parse_code, parse_morphism, to_dot,
    CodeInput,
};
use coded_shifts::morphisms::{self, Recognizability};
use coded_shifts::rational::RationalExpression;
use coded_shifts::shifts::{apply_block_map, sft_from_forbidden, SoficShift};
use coded_shifts::sync;
use coded_shifts::unambiguity::{self, AmbiguityWitness};
use coded_shifts::Result;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "coded",
    about = "Decision procedures and constructions for coded shifts and codes"
)]
struct Cli {
    /// Machine-readable `key=value` output, one item per line
    #[arg(long, global = true)]
    porcelain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decision procedures on codes and automata
    #[command(subcommand)]
    Check(CheckCommand),
    /// Recode a synchronized prefix code C into an unambiguous code C'
    Recode {
        /// Code file
        file: PathBuf,
        /// Bound on the constant search
        #[arg(long)]
        max_len: Option<usize>,
        /// Also print DOT of the product automaton
        #[arg(long)]
        dot: bool,
    },
    /// Subset-construction automaton I(w) of a code's star language
    Fischer {
        /// Code file
        file: PathBuf,
        /// Seed word (defaults to a discovered constant)
        #[arg(long)]
        word: Option<String>,
        /// Bound on the constant search when no word is given
        #[arg(long)]
        max_len: Option<usize>,
        /// Print DOT instead of the text format
        #[arg(long)]
        dot: bool,
    },
    /// Operations on substitution morphisms
    #[command(subcommand)]
    Morphism(MorphismCommand),
    /// Finite window of a countable reversible presentation of a coded shift
    Fiebig {
        /// Automaton file: a strongly connected all-marked presentation
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: FiebigMode,
        /// Graph radius of the window around the basepoint
        #[arg(long)]
        radius: usize,
        /// Print DOT instead of the text format
        #[arg(long)]
        dot: bool,
    },
    /// Digit automaton of a beta-shift from its generating sequence
    Beta {
        /// Preperiodic digits
        #[arg(long, default_value = "")]
        preperiod: String,
        /// Periodic digits
        #[arg(long)]
        period: String,
        /// Print DOT instead of the text format
        #[arg(long)]
        dot: bool,
    },
    /// Presentation of the SFT avoiding the listed forbidden words
    Sft {
        /// Code-format file listing the forbidden words
        file: PathBuf,
        /// Print DOT instead of the text format
        #[arg(long)]
        dot: bool,
    },
    /// Image of a sofic shift under a block map
    Blockmap {
        /// Block map file (`word -> letter` lines)
        map: PathBuf,
        /// Automaton file presenting the source shift
        automaton: PathBuf,
        /// Print DOT instead of the text format
        #[arg(long)]
        dot: bool,
    },
    /// DOT export of an automaton file
    Dot {
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Combined report: prefix, code, circular, synchronized
    Code {
        file: PathBuf,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Is the code prefix-free?
    Prefix { file: PathBuf },
    /// Is the code circular?
    Circular { file: PathBuf },
    /// Is the code very thin (bounded search)?
    VeryThin {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Has the automaton at most one path per (word, source, target)?
    Unambiguous { file: PathBuf },
    /// Has the automaton at most one bi-infinite path per label sequence?
    StronglyUnambiguous { file: PathBuf },
    /// Is automaton A unambiguous relative to the subshift presented by B
    /// over A's edge alphabet?
    Relative { automaton: PathBuf, shift: PathBuf },
    /// Does the code have a constant (bounded search)?
    Synchronized {
        file: PathBuf,
        #[arg(long)]
        max_len: Option<usize>,
    },
}

#[derive(Subcommand)]
enum MorphismCommand {
    /// Bouquet automaton of the morphism
    Bouquet {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Is the morphism primitive?
    Primitive { file: PathBuf },
    /// Is the set of images a circular code?
    Circular { file: PathBuf },
    /// Bounded recognizability of the morphism on its shift
    Recognizable {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        window: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FiebigMode {
    Reversible,
    Strong,
}

/// Accumulates `(key, value)` report items and prints them either as
/// aligned human-readable text or as stable `key=value` porcelain lines.
struct Report {
    porcelain: bool,
    items: Vec<(String, String)>,
}

impl Report {
    fn new(porcelain: bool) -> Self {
        Report {
            porcelain,
            items: Vec::new(),
        }
    }

    fn item(&mut self, key: &str, value: impl ToString) {
        self.items.push((key.to_string(), value.to_string()));
    }

    fn witness(&mut self, a: &Automaton, w: &AmbiguityWitness) {
        let kind = match w.kind {
            unambiguity::WitnessKind::TwoFinitePaths => "two-finite-paths",
            unambiguity::WitnessKind::PairCycle => "pair-cycle",
            unambiguity::WitnessKind::PumpablePair => "pumpable-pair",
        };
        self.item("witness.kind", kind);
        self.item("witness.word", a.alphabet().format(&w.word));
        let row = |states: &[usize]| {
            states
                .iter()
                .map(|&q| a.state_name(q))
                .collect::<Vec<_>>()
                .join(" ")
        };
        self.item("witness.left", row(&w.left));
        self.item("witness.right", row(&w.right));
    }

    /// A multi-line artifact (automaton text or DOT); printed verbatim after
    /// the items in human mode, prefixed per line in porcelain mode.
    fn emit(self, artifact: Option<(&str, String)>) {
        if self.porcelain {
            for (k, v) in &self.items {
                println!("{k}={v}");
            }
            if let Some((tag, text)) = artifact {
                for line in text.lines() {
                    println!("{tag}:{line}");
                }
            }
        } else {
            for (k, v) in &self.items {
                println!("{k}: {v}");
            }
            if let Some((_, text)) = artifact {
                print!("{text}");
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Invalid(format!("cannot read {}: {e}", path.display()))
    })
}

fn finite_code(path: &Path) -> Result<FiniteCode> {
    match parse_code(&read(path)?)? {
        CodeInput::Finite(c) => Ok(c),
        CodeInput::Expression(_) => Err(Error::Invalid(
            "this command needs an explicit finite code, not an expression".into(),
        )),
    }
}

fn code_expression(path: &Path) -> Result<RationalExpression> {
    Ok(match parse_code(&read(path)?)? {
        CodeInput::Finite(c) => c.expression(),
        CodeInput::Expression(e) => e,
    })
}

fn automaton(path: &Path) -> Result<Automaton> {
    parse_automaton(&read(path)?)
}

fn constant_bound(c: &FiniteCode, max_len: Option<usize>) -> usize {
    max_len.unwrap_or_else(|| sync::default_constant_bound(&c.star_dfa()))
}

/// Window automaton as text or DOT, with the boundary states annotated.
fn window_output(w: &WindowAutomaton, dot: bool) -> String {
    let boundary: Vec<String> = w
        .boundary
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b)
        .map(|(i, _)| w.automaton.state_name(i))
        .collect();
    if dot {
        let mut out = to_dot(&w.automaton);
        out.push_str(&format!("// boundary: {}\n", boundary.join(" ")));
        out
    } else {
        let mut out = format_automaton(&w.automaton);
        for i in 0..w.automaton.num_states() {
            out.push_str(&format!("# state {i} = {}\n", w.automaton.state_name(i)));
        }
        out.push_str(&format!("# boundary: {}\n", boundary.join(" ")));
        out
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut r = Report::new(cli.porcelain);
    match cli.command {
        Command::Check(check) => match check {
            CheckCommand::Code { file, max_len } => {
                let c = finite_code(&file)?;
                r.item("prefix", c.is_prefix());
                let (is_code, violation) = codes::is_code(&c);
                r.item("code", is_code);
                if let Some(v) = violation {
                    r.item("code.witness", c.alphabet().format(&v.word));
                }
                let (circ, cw) = codes::is_circular(&c)?;
                r.item("circular", circ);
                if let Some((u, v)) = cw {
                    r.item("circular.witness.u", c.alphabet().format(&u));
                    r.item("circular.witness.v", c.alphabet().format(&v));
                }
                let bound = constant_bound(&c, max_len);
                match sync::find_constant(&c.star_dfa(), bound) {
                    Some(k) => {
                        r.item("synchronized", true);
                        r.item("constant", c.alphabet().format(&k.word));
                    }
                    None => {
                        r.item("synchronized", false);
                        r.item("constant.search_bound", bound);
                    }
                }
                r.emit(None);
            }
            CheckCommand::Prefix { file } => {
                let c = finite_code(&file)?;
                match c.prefix_violation() {
                    None => r.item("prefix", true),
                    Some((u, w)) => {
                        r.item("prefix", false);
                        r.item("witness.prefix", c.alphabet().format(&u));
                        r.item("witness.extension", c.alphabet().format(&w));
                    }
                }
                r.emit(None);
            }
            CheckCommand::Circular { file } => {
                let c = finite_code(&file)?;
                let (circ, w) = codes::is_circular(&c)?;
                r.item("circular", circ);
                if let Some((u, v)) = w {
                    r.item("witness.u", c.alphabet().format(&u));
                    r.item("witness.v", c.alphabet().format(&v));
                }
                r.emit(None);
            }
            CheckCommand::VeryThin { file, max_len } => {
                let e = code_expression(&file)?;
                match codes::very_thin_witness(&e, max_len)? {
                    Some(w) => {
                        r.item("very_thin", true);
                        r.item("witness", e.alphabet.format(&w));
                    }
                    None => {
                        r.item("very_thin", false);
                        r.item("search_bound", max_len);
                    }
                }
                r.emit(None);
            }
            CheckCommand::Unambiguous { file } => {
                let a = automaton(&file)?;
                let (ok, w) = unambiguity::is_unambiguous(&a);
                r.item("unambiguous", ok);
                if let Some(w) = w {
                    r.witness(&a, &w);
                }
                r.emit(None);
            }
            CheckCommand::StronglyUnambiguous { file } => {
                let a = automaton(&file)?;
                let (ok, w) = unambiguity::is_strongly_unambiguous(&a);
                r.item("strongly_unambiguous", ok);
                if let Some(w) = w {
                    r.witness(&a, &w);
                }
                r.emit(None);
            }
            CheckCommand::Relative { automaton: af, shift } => {
                let a = automaton(&af)?;
                let b = automaton(&shift)?;
                let edge_map: Vec<usize> = (0..b.alphabet().len()).collect();
                let (ok, w) = unambiguity::unambiguous_on_sofic(&a, &b, &edge_map)?;
                r.item("unambiguous_on_shift", ok);
                if let Some(w) = w {
                    r.witness(&a, &w);
                }
                r.emit(None);
            }
            CheckCommand::Synchronized { file, max_len } => {
                let c = finite_code(&file)?;
                let bound = constant_bound(&c, max_len);
                match sync::find_constant(&c.star_dfa(), bound) {
                    Some(k) => {
                        r.item("synchronized", true);
                        r.item("constant", c.alphabet().format(&k.word));
                    }
                    None => {
                        r.item("synchronized", false);
                        r.item("search_bound", bound);
                    }
                }
                r.emit(None);
            }
        },
        Command::Recode { file, max_len, dot } => {
            let c = finite_code(&file)?;
            let bound = constant_bound(&c, max_len);
            let rec = sync::recode_unambiguous(&c, bound)?;
            r.item(
                "constant",
                c.alphabet().format(&rec.constant.word),
            );
            r.item("anchor", rec.product_automaton.state_name(rec.anchor));
            r.item("code", rec.first_return_code.to_string());
            let artifact = dot.then(|| ("dot", to_dot(&rec.product_automaton)));
            r.emit(artifact.as_ref().map(|(t, s)| (*t, s.clone())));
        }
        Command::Fischer {
            file,
            word,
            max_len,
            dot,
        } => {
            let c = finite_code(&file)?;
            let dfa = c.star_dfa();
            let w: Word = match word {
                Some(s) => c.alphabet().word(&s)?,
                None => {
                    let bound = constant_bound(&c, max_len);
                    sync::find_constant(&dfa, bound)
                        .ok_or(Error::NotSynchronizedWithinBound(bound))?
                        .word
                }
            };
            r.item("word", c.alphabet().format(&w));
            let a = sync::fischer_subset(&dfa, &w);
            let text = if dot { to_dot(&a) } else { format_automaton(&a) };
            r.emit(Some(("automaton", text)));
        }
        Command::Morphism(m) => match m {
            MorphismCommand::Bouquet { file, dot } => {
                let m = parse_morphism(&read(&file)?)?;
                let b = morphisms::bouquet(&m)?;
                r.item("omega", b.automaton.state_name(b.omega));
                let text = if dot {
                    to_dot(&b.automaton)
                } else {
                    format_automaton(&b.automaton)
                };
                r.emit(Some(("automaton", text)));
            }
            MorphismCommand::Primitive { file } => {
                let m = parse_morphism(&read(&file)?)?;
                let bound = morphisms::default_primitivity_bound(&m);
                r.item("primitive", morphisms::is_primitive(&m, bound)?);
                r.emit(None);
            }
            MorphismCommand::Circular { file } => {
                let m = parse_morphism(&read(&file)?)?;
                let (ok, w) = morphisms::is_circular_morphism(&m)?;
                r.item("circular", ok);
                if let Some((u, v)) = w {
                    r.item("witness.u", m.target().format(&u));
                    r.item("witness.v", m.target().format(&v));
                }
                r.emit(None);
            }
            MorphismCommand::Recognizable { file, window } => {
                let m = parse_morphism(&read(&file)?)?;
                let b = morphisms::bouquet(&m)?;
                match morphisms::recognizability_bounded(&m, window)? {
                    Recognizability::SoundYes => {
                        r.item("recognizable", "sound-yes");
                        r.emit(None);
                    }
                    Recognizability::Inconclusive { witness } => {
                        r.item("recognizable", "inconclusive");
                        r.witness(&b.automaton, &witness);
                        r.emit(None);
                    }
                }
            }
        },
        Command::Fiebig {
            file,
            mode,
            radius,
            dot,
        } => {
            let base = automaton(&file)?;
            match countable::fiebig_seed(&base)? {
                SeedResult::SingleWord(w) => {
                    r.item("single_word", base.alphabet().format(&w));
                    r.emit(None);
                }
                SeedResult::Seed(seed) => {
                    let la = match mode {
                        FiebigMode::Reversible => countable::fiebig_reversible(&seed),
                        FiebigMode::Strong => countable::fiebig_strongly_unambiguous(&seed),
                    };
                    let (u, v, w) = la.words();
                    r.item("u", base.alphabet().format(&u));
                    r.item("v", base.alphabet().format(&v));
                    r.item("w", base.alphabet().format(&w));
                    let win = countable::window(&la, radius)?;
                    r.emit(Some(("automaton", window_output(&win, dot))));
                }
            }
        }
        Command::Beta {
            preperiod,
            period,
            dot,
        } => {
            let digits = |s: &str| -> Result<Vec<u8>> {
                s.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as u8)
                            .ok_or_else(|| Error::BadGeneratingSequence(format!("bad digit {c:?}")))
                    })
                    .collect()
            };
            let spec = BetaSpec {
                preperiod: digits(&preperiod)?,
                period: digits(&period)?,
            };
            let a = countable::beta_automaton(&spec)?;
            let text = if dot { to_dot(&a) } else { format_automaton(&a) };
            r.emit(Some(("automaton", text)));
        }
        Command::Sft { file, dot } => {
            let c = finite_code(&file)?;
            let x = sft_from_forbidden(c.alphabet(), c.words())?;
            let a = x.presentation();
            let text = if dot { to_dot(a) } else { format_automaton(a) };
            r.emit(Some(("automaton", text)));
        }
        Command::Blockmap {
            map,
            automaton: af,
            dot,
        } => {
            let f = parse_block_map(&read(&map)?)?;
            let a = automaton(&af)?;
            let x = SoficShift::from_presentation(&a)?;
            let y = apply_block_map(&x, &f)?;
            let text = if dot {
                to_dot(y.presentation())
            } else {
                format_automaton(y.presentation())
            };
            r.emit(Some(("automaton", text)));
        }
        Command::Dot { file } => {
            let a = automaton(&file)?;
            print!("{}", to_dot(&a));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Internal(_)) => {
            eprintln!("internal error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
