//! System files, reports and the `d0l` command line.
//!
//! A system file is line oriented. `#` starts a comment, tokens are separated
//! by ASCII whitespace and symbols may be several characters long:
//!
//! ```text
//! alphabet: 0 1 2
//! axiom: 0
//! 0 -> 0 1 2
//! 1 -> 2
//! 2 -> 1
//! ```
//!
//! Every letter needs exactly one rule; a rule with nothing after `->` maps
//! its letter to the empty word.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::alphabet::Alphabet;
use crate::engine::{analyze, AnalysisReport, Source};
use crate::error::{Error, Result};
use crate::morphism::{D0LSystem, Morphism};
use crate::oracle::{class_powers_up_to, observed_classes_exact, OracleParams};
use crate::words::Word;

fn parse_error<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

fn split_header<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(key)?;
    rest.strip_prefix(':')
}

fn word_of(alphabet: &Alphabet, tokens: &str, line: usize) -> Result<Word> {
    let mut w = Word::empty();
    for t in tokens.split_ascii_whitespace() {
        match alphabet.letter(t) {
            Ok(a) => w.push(a),
            Err(_) => return parse_error(line, format!("undeclared letter `{t}`")),
        }
    }
    Ok(w)
}

/// Read a system file.
pub fn parse_system(text: &str) -> Result<D0LSystem> {
    let mut alphabet_line: Option<(usize, &str)> = None;
    let mut axiom_line: Option<(usize, &str)> = None;
    let mut rule_lines: Vec<(usize, &str, &str)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = split_header(line, "alphabet") {
            if alphabet_line.replace((line_no, rest)).is_some() {
                return parse_error(line_no, "second `alphabet:` line");
            }
        } else if let Some(rest) = split_header(line, "axiom") {
            if axiom_line.replace((line_no, rest)).is_some() {
                return parse_error(line_no, "second `axiom:` line");
            }
        } else if let Some((lhs, rhs)) = line.split_once("->") {
            rule_lines.push((line_no, lhs.trim(), rhs));
        } else {
            return parse_error(
                line_no,
                format!("expected `alphabet:`, `axiom:` or a rule, found `{line}`"),
            );
        }
    }

    let last_line = text.lines().count().max(1);
    let Some((alpha_no, symbols)) = alphabet_line else {
        return parse_error(last_line, "missing `alphabet:` line");
    };
    let symbols: Vec<&str> = symbols.split_ascii_whitespace().collect();
    let alphabet =
        Alphabet::new(symbols.iter().copied()).or_else(|e| parse_error(alpha_no, e.to_string()))?;

    let mut images: Vec<Option<Word>> = vec![None; alphabet.len()];
    for (line_no, lhs, rhs) in rule_lines {
        let mut lhs_tokens = lhs.split_ascii_whitespace();
        let (Some(sym), None) = (lhs_tokens.next(), lhs_tokens.next()) else {
            return parse_error(line_no, "a rule needs exactly one letter before `->`");
        };
        let Ok(a) = alphabet.letter(sym) else {
            return parse_error(line_no, format!("undeclared letter `{sym}`"));
        };
        let image = word_of(&alphabet, rhs, line_no)?;
        if images[a.0].replace(image).is_some() {
            return parse_error(line_no, format!("duplicate rule for `{sym}`"));
        }
    }
    let images = images
        .into_iter()
        .zip(alphabet.symbols())
        .map(|(img, sym)| {
            img.map_or_else(
                || parse_error(alpha_no, format!("missing rule for `{sym}`")),
                Ok,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let Some((axiom_no, axiom)) = axiom_line else {
        return parse_error(last_line, "missing `axiom:` line");
    };
    let axiom = word_of(&alphabet, axiom, axiom_no)?;
    if axiom.is_empty() {
        return parse_error(axiom_no, "empty axiom");
    }
    let morphism = Morphism::new(alphabet.clone(), alphabet, images)?;
    D0LSystem::new(morphism, axiom)
}

fn spaced(alphabet: &Alphabet, w: &[crate::words::Letter]) -> String {
    alphabet.symbols_of(w).join(" ")
}

/// Write a system in the format read by [`parse_system`].
pub fn serialize_system(system: &D0LSystem) -> String {
    let a = system.alphabet();
    let mut out = String::new();
    writeln!(out, "alphabet: {}", a.symbols().join(" ")).unwrap();
    writeln!(out, "axiom: {}", spaced(a, system.axiom())).unwrap();
    for x in a.letters() {
        let image = system.morphism().image(x);
        if image.is_empty() {
            writeln!(out, "{} ->", a.symbol(x)).unwrap();
        } else {
            writeln!(out, "{} -> {}", a.symbol(x), spaced(a, image)).unwrap();
        }
    }
    out
}

#[derive(Debug, Serialize)]
struct JsonRule {
    letter: String,
    image: Vec<String>,
}

#[derive(Debug, Serialize)]
struct JsonSystem {
    alphabet: Vec<String>,
    axiom: Vec<String>,
    rules: Vec<JsonRule>,
}

#[derive(Debug, Serialize)]
struct JsonStep {
    kind: String,
    alphabet: Vec<String>,
    h: Vec<JsonRule>,
    k: Vec<JsonRule>,
    morphism: Vec<JsonRule>,
    axiom: Vec<String>,
}

#[derive(Debug, Serialize)]
struct JsonClass {
    representative: Vec<String>,
    conjugates: Vec<Vec<String>>,
    source: Source,
}

#[derive(Debug, Serialize)]
struct JsonReport {
    system: JsonSystem,
    pushy: bool,
    repetitive: bool,
    strongly_repetitive: bool,
    bounded_letters: Vec<String>,
    simplification_steps: Vec<JsonStep>,
    classes: Vec<JsonClass>,
}

fn json_rules(m: &Morphism) -> Vec<JsonRule> {
    m.source()
        .letters()
        .map(|x| JsonRule {
            letter: m.source().symbol(x).to_string(),
            image: m.target().symbols_of(m.image(x)),
        })
        .collect()
}

fn json_report(report: &AnalysisReport) -> JsonReport {
    let system = &report.original;
    let a = system.alphabet();
    let chain = &report.chain;
    let simplification_steps = chain
        .steps()
        .iter()
        .zip(&chain.systems()[1..])
        .map(|(step, next)| JsonStep {
            kind: step.kind().to_string(),
            alphabet: next.alphabet().symbols().to_vec(),
            h: json_rules(step.h()),
            k: json_rules(step.k()),
            morphism: json_rules(next.morphism()),
            axiom: next.alphabet().symbols_of(next.axiom()),
        })
        .collect();
    JsonReport {
        system: JsonSystem {
            alphabet: a.symbols().to_vec(),
            axiom: a.symbols_of(system.axiom()),
            rules: json_rules(system.morphism()),
        },
        pushy: report.pushy,
        repetitive: report.repetitive,
        strongly_repetitive: report.strongly_repetitive,
        bounded_letters: report
            .classification
            .bounded
            .iter()
            .map(|&x| a.symbol(x).to_string())
            .collect(),
        simplification_steps,
        classes: report
            .classes
            .iter()
            .map(|c| JsonClass {
                representative: a.symbols_of(c.representative()),
                conjugates: c.conjugates().iter().map(|w| a.symbols_of(w)).collect(),
                source: c.source(),
            })
            .collect(),
    }
}

/// The report as pretty-printed JSON. Field order and array order are fixed,
/// so equal reports give identical bytes.
pub fn report_json(report: &AnalysisReport) -> String {
    serde_json::to_string_pretty(&json_report(report)).expect("report serializes")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn letter_list(a: &Alphabet, set: &BTreeSet<crate::words::Letter>) -> String {
    if set.is_empty() {
        return "(none)".to_string();
    }
    set.iter()
        .map(|&x| a.symbol(x))
        .collect::<Vec<_>>()
        .join(" ")
}

fn rules_text(m: &Morphism, indent: &str, out: &mut String) {
    for x in m.source().letters() {
        writeln!(
            out,
            "{indent}{} -> {}",
            m.source().symbol(x),
            m.target().render(m.image(x))
        )
        .unwrap();
    }
}

/// Human-readable report.
pub fn report_text(report: &AnalysisReport) -> String {
    let system = &report.original;
    let a = system.alphabet();
    let mut out = String::new();
    writeln!(out, "system: axiom {}", a.render(system.axiom())).unwrap();
    rules_text(system.morphism(), "  ", &mut out);
    writeln!(out, "pushy: {}", yes_no(report.pushy)).unwrap();
    writeln!(out, "repetitive: {}", yes_no(report.repetitive)).unwrap();
    writeln!(
        out,
        "strongly repetitive: {}",
        yes_no(report.strongly_repetitive)
    )
    .unwrap();
    writeln!(
        out,
        "bounded letters (A0): {}",
        letter_list(a, &report.classification.bounded)
    )
    .unwrap();
    writeln!(
        out,
        "unbounded letters: {}",
        letter_list(a, &report.classification.unbounded)
    )
    .unwrap();

    let steps = report.chain.steps();
    let reduced = report.chain.original_system();
    writeln!(
        out,
        "simplification: {} step{} from {} to {} letters",
        steps.len(),
        if steps.len() == 1 { "" } else { "s" },
        reduced.alphabet().len(),
        report.final_system().alphabet().len()
    )
    .unwrap();
    for (i, (step, next)) in steps.iter().zip(&report.chain.systems()[1..]).enumerate() {
        writeln!(
            out,
            "  step {}: {}, axiom {}",
            i + 1,
            step.kind(),
            next.alphabet().render(next.axiom())
        )
        .unwrap();
        rules_text(next.morphism(), "    ", &mut out);
    }

    writeln!(out, "classes: {}", report.classes.len()).unwrap();
    for c in &report.classes {
        let source = match c.source() {
            Source::Bounded => "bounded",
            Source::Unbounded => "unbounded",
        };
        let conj: Vec<String> = c.conjugates().iter().map(|w| a.render(w)).collect();
        writeln!(
            out,
            "  ({})^ω  source {source}  conjugates {}",
            a.render(c.representative()),
            conj.join(" ")
        )
        .unwrap();
    }
    out
}

/// Outcome of checking a report against the brute-force oracles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    /// Reported classes of length `<= max_len` that the window oracle misses.
    pub unconfirmed: Vec<Word>,
    /// Classes the window oracle sees that the report lacks.
    pub missing: Vec<Word>,
    /// Reported classes of length `<= max_len` whose power does not grow
    /// between half depth and full depth.
    pub not_growing: Vec<Word>,
    pub depth: usize,
    pub window: usize,
}

impl Verification {
    pub fn agrees(&self) -> bool {
        self.unconfirmed.is_empty() && self.missing.is_empty() && self.not_growing.is_empty()
    }
}

/// Compare the report with the factor-window oracle (window `power·max_len`,
/// both directions) and with the growth of powers along the iterates up to
/// `depth`, lowered if needed to stay under the length cap.
pub fn verify(report: &AnalysisReport, params: &OracleParams) -> Result<Verification> {
    params.validate()?;
    let system = &report.original;
    let window = params.power * params.max_len;
    let reported: BTreeSet<Word> = report
        .classes
        .iter()
        .map(|c| c.representative().clone())
        .filter(|v| v.len() <= params.max_len)
        .collect();
    let observed = observed_classes_exact(system, params.max_len, window)?;

    let depth = params.fitted_depth(system).max(1);
    let scan = OracleParams { depth, ..*params };
    let by_depth = class_powers_up_to(system, &scan)?;
    let last = &by_depth[depth];
    let half = &by_depth[depth.div_ceil(2)];
    let not_growing = reported
        .iter()
        .filter(|v| last.get(*v).copied().unwrap_or(0) <= half.get(*v).copied().unwrap_or(0))
        .cloned()
        .collect();

    Ok(Verification {
        unconfirmed: reported.difference(&observed).cloned().collect(),
        missing: observed.difference(&reported).cloned().collect(),
        not_growing,
        depth,
        window,
    })
}

#[derive(Debug, Parser)]
#[command(
    name = "d0l",
    version,
    about = "Find the infinite periodic factors of a D0L-system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a system file (`-` reads standard input).
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    file: String,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Cross-check the classes against the brute-force oracles.
    #[arg(long)]
    verify: bool,
    /// Deepest iterate scanned by --verify.
    #[arg(long, default_value_t = 12)]
    depth: usize,
    /// Longest class period checked by --verify.
    #[arg(long = "max-len", default_value_t = 6)]
    max_len: usize,
    /// Power a period must reach inside the --verify factor window.
    #[arg(long, default_value_t = 16)]
    power: usize,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        _ => EXIT_INTERNAL,
    }
}

/// Run the command line on `args` (program name first). Returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                return EXIT_PARSE;
            }
            let _ = out.write_all(text.as_bytes());
            return EXIT_OK;
        }
    };
    let Command::Analyze(args) = cli.command;

    let text = if args.file == "-" {
        let mut s = String::new();
        if let Err(e) = stdin.read_to_string(&mut s) {
            let _ = writeln!(err, "error: cannot read standard input: {e}");
            return EXIT_PARSE;
        }
        s
    } else {
        match std::fs::read_to_string(&args.file) {
            Ok(s) => s,
            Err(e) => {
                let _ = writeln!(err, "error: cannot read {}: {e}", args.file);
                return EXIT_PARSE;
            }
        }
    };

    let system = match parse_system(&text) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_PARSE;
        }
    };
    let report = match analyze(&system) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let _ = if args.json {
        writeln!(out, "{}", report_json(&report))
    } else {
        write!(out, "{}", report_text(&report))
    };

    if !args.verify {
        return EXIT_OK;
    }
    let params = OracleParams {
        depth: args.depth,
        max_len: args.max_len,
        power: args.power,
        ..Default::default()
    };
    let v = match verify(&report, &params) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let mut msg = String::new();
    let code = if v.agrees() {
        writeln!(
            msg,
            "oracle: agreement (periods up to {}, window {}, depth {})",
            args.max_len, v.window, v.depth
        )
        .unwrap();
        EXIT_OK
    } else {
        let a = system.alphabet();
        let list = |ws: &[Word]| ws.iter().map(|w| a.render(w)).collect::<Vec<_>>().join(" ");
        writeln!(msg, "oracle: disagreement").unwrap();
        writeln!(msg, "  reported but not observed: {}", list(&v.unconfirmed)).unwrap();
        writeln!(msg, "  observed but not reported: {}", list(&v.missing)).unwrap();
        writeln!(
            msg,
            "  reported without growing powers: {}",
            list(&v.not_growing)
        )
        .unwrap();
        EXIT_DISAGREEMENT
    };
    // keep stdout valid JSON under --json
    let _ = if args.json {
        err.write_all(msg.as_bytes())
    } else {
        out.write_all(msg.as_bytes())
    };
    code
}
