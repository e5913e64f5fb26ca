//! Line-oriented machine files.
//!
//! ```text
//! machine quantum
//! input a b
//! states q1 q2
//! start q1
//! accept q2
//! pos x
//! register w1 w2
//! trans q1 CENT 1/sqrt(2) q1 EPS w1
//! ```
//!
//! Headers may come in any order but each appears once; `trans` lines refer
//! to declared names only. `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::amplitude::parse_amplitude;
use crate::error::ParseError;
use crate::model::{
    row_location, status_token, validate_structure, Action, Alphabet, Dir, Kind, MachineSpec, Memory, TapeSymbol,
    TapeWrite, Transition,
};

/// A whitespace-delimited token with its 1-based column.
#[derive(Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    toks: Vec<Tok<'a>>,
    /// Column just past the last token, for "expected more" errors.
    end: usize,
}

fn lex(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (j, c) in body.char_indices().chain([(body.len(), ' ')]) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    toks.push(Tok { text: &body[s..j], column: s + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if !toks.is_empty() {
            out.push(Line { number: i + 1, toks, end: body.trim_end().len() + 1 });
        }
    }
    out
}

fn syntax(line: usize, column: usize, expected: impl Into<String>, found: &str) -> ParseError {
    ParseError::Syntax { line, column, expected: expected.into(), found: found.into() }
}

fn semantic(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Semantic { line, message: message.into() }
}

/// Reads the tokens of one line left to right.
struct Cursor<'l, 'a> {
    line: &'l Line<'a>,
    pos: usize,
}

impl<'a> Cursor<'_, 'a> {
    fn next(&mut self, expected: &str) -> Result<Tok<'a>, ParseError> {
        let t = self.line.toks.get(self.pos).copied();
        self.pos += 1;
        t.ok_or_else(|| syntax(self.line.number, self.line.end, expected, ""))
    }

    fn peek(&self) -> Option<Tok<'a>> {
        self.line.toks.get(self.pos).copied()
    }

    fn rest(&mut self) -> Vec<Tok<'a>> {
        let r = self.line.toks[self.pos.min(self.line.toks.len())..].to_vec();
        self.pos = self.line.toks.len();
        r
    }

    fn done(&self) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) => Err(syntax(self.line.number, t.column, "end of line", t.text)),
            None => Ok(()),
        }
    }

    fn err(&self, t: Tok<'_>, expected: impl Into<String>) -> ParseError {
        syntax(self.line.number, t.column, expected, t.text)
    }

    fn number<T: std::str::FromStr>(&mut self, expected: &str) -> Result<T, ParseError> {
        let t = self.next(expected)?;
        t.text.parse().map_err(|_| self.err(t, expected))
    }
}

fn parse_kind(s: &str) -> Option<Kind> {
    [Kind::Deterministic, Kind::Probabilistic, Kind::Nondeterministic, Kind::Quantum]
        .into_iter()
        .find(|k| k.keyword() == s)
}

fn parse_memory(c: &mut Cursor<'_, '_>, keyword: &str, tape: &mut Vec<String>) -> Result<Memory, ParseError> {
    match keyword {
        "counters" => {
            let count = c.number("counter count")?;
            let mut blind = false;
            let mut inc = 1;
            let mut reversals = None;
            while let Some(t) = c.peek() {
                c.pos += 1;
                match t.text {
                    "blind" if !blind => blind = true,
                    "inc" => inc = c.number("increment bound")?,
                    "rev" => reversals = Some(c.number("reversal bound")?),
                    _ => return Err(c.err(t, "blind, inc or rev")),
                }
            }
            Ok(Memory::Counters { count, blind, inc, reversals })
        }
        "ioc" => {
            let mut inc = 1;
            if let Some(t) = c.peek() {
                c.pos += 1;
                if t.text != "inc" {
                    return Err(c.err(t, "inc"));
                }
                inc = c.number("increment bound")?;
            }
            c.done()?;
            Ok(Memory::Ioc { inc })
        }
        _ => {
            *tape = c.rest().iter().map(|t| t.text.to_string()).collect();
            Ok(if keyword == "pos" { Memory::Pos } else { Memory::Wom })
        }
    }
}

fn signed(text: &str) -> Option<i64> {
    text.strip_prefix('+').unwrap_or(text).parse().ok()
}

/// Parse a machine file. The result passes [`validate_structure`]; any
/// violation is reported against the line it stems from.
pub fn parse_machine(text: &str) -> Result<MachineSpec, ParseError> {
    let lines = lex(text);
    let Some(first) = lines.first() else {
        return Err(syntax(1, 1, "machine header", ""));
    };
    let head = first.toks[0];
    if head.text != "machine" {
        return Err(syntax(first.number, head.column, "machine header", head.text));
    }

    let mut header_line: HashMap<&str, usize> = HashMap::new();
    let mut kind = None;
    let mut alphabet = Alphabet::default();
    let mut states: Vec<String> = Vec::new();
    let mut start_name: Option<Tok<'_>> = None;
    let mut accept_names: Vec<Tok<'_>> = Vec::new();
    let mut memory = Memory::None;
    let mut register: Vec<String> = Vec::new();
    let mut trans_lines = Vec::new();

    for line in &lines {
        let mut c = Cursor { line, pos: 0 };
        let key = c.next("header")?;
        if key.text == "trans" {
            trans_lines.push(line);
            continue;
        }
        let slot = match key.text {
            "pos" | "wom" | "counters" | "ioc" => "memory",
            k => k,
        };
        if let Some(prev) = header_line.insert(slot, line.number) {
            return Err(semantic(line.number, format!("{} declared again (first on line {prev})", key.text)));
        }
        let names = |c: &mut Cursor<'_, '_>| c.rest().iter().map(|t| t.text.to_string()).collect::<Vec<_>>();
        match key.text {
            "machine" => {
                let t = c.next("machine kind")?;
                kind = Some(parse_kind(t.text).ok_or_else(|| c.err(t, "deterministic, probabilistic, nondeterministic or quantum"))?);
                c.done()?;
            }
            "input" => alphabet.input = names(&mut c),
            "states" => states = names(&mut c),
            "start" => {
                start_name = Some(c.next("start state")?);
                c.done()?;
            }
            "accept" => accept_names = c.rest(),
            "register" => register = names(&mut c),
            "pos" | "wom" | "counters" | "ioc" => memory = parse_memory(&mut c, key.text, &mut alphabet.tape)?,
            _ => return Err(c.err(key, "header or trans")),
        }
    }
    let kind = kind.expect("first line is the machine header");
    let machine_line = first.number;
    for required in ["input", "states", "start", "accept"] {
        if !header_line.contains_key(required) {
            return Err(semantic(machine_line, format!("missing {required} header")));
        }
    }
    if kind.is_quantum() && !header_line.contains_key("register") {
        return Err(semantic(machine_line, "missing register header"));
    }

    let state_of = |t: Tok<'_>, line: usize| {
        states.iter().position(|s| s == t.text).ok_or_else(|| semantic(line, format!("undeclared state {}", t.text)))
    };
    let start_tok = start_name.expect("start header checked above");
    let start = state_of(start_tok, header_line["start"])?;
    let mut accepting = Vec::new();
    for &t in &accept_names {
        accepting.push(state_of(t, header_line["accept"])?);
    }
    accepting.sort_unstable();
    accepting.dedup();

    let mut spec = MachineSpec { kind, alphabet, states: states.clone(), start, accepting, memory, register, transitions: Vec::new() };
    let mut source_line = HashMap::new();
    let mut lines_of: Vec<usize> = Vec::new();
    for line in trans_lines {
        let t = parse_transition(&spec, line)?;
        let key = (t.row_key(), t.target, t.action.clone(), t.register);
        if let Some(prev) = source_line.insert(key, line.number) {
            return Err(semantic(line.number, format!("duplicate transition (first on line {prev})")));
        }
        spec.transitions.push(t);
        lines_of.push(line.number);
    }

    if let Some(v) = validate_structure(&spec).into_iter().next() {
        let line = if v.location.starts_with("row (") {
            spec.transitions
                .iter()
                .position(|t| row_location(&spec, t) == v.location)
                .map(|i| lines_of[i])
                .unwrap_or(machine_line)
        } else {
            let slot = match v.location.as_str() {
                "counters" | "ioc" | "tape" => "memory",
                s => s,
            };
            header_line.get(slot).copied().unwrap_or(machine_line)
        };
        return Err(semantic(line, v.to_string()));
    }
    Ok(spec)
}

fn parse_transition(spec: &MachineSpec, line: &Line<'_>) -> Result<Transition, ParseError> {
    let n = line.number;
    let mut c = Cursor { line, pos: 1 };
    let state = |t: Tok<'_>| spec.state_index(t.text).ok_or_else(|| semantic(n, format!("undeclared state {}", t.text)));

    let t = c.next("source state")?;
    let source = state(t)?;
    let t = c.next("input symbol")?;
    let symbol = match t.text {
        "CENT" => TapeSymbol::Cent,
        "END" => TapeSymbol::End,
        s => spec.input_symbol(s).ok_or_else(|| semantic(n, format!("undeclared input symbol {s}")))?,
    };
    let status = if spec.memory.reads_status() {
        let t = c.next("counter status")?;
        let parts: Option<Vec<bool>> = t
            .text
            .split(',')
            .map(|p| match p {
                "Z" => Some(false),
                "NZ" => Some(true),
                _ => None,
            })
            .collect();
        Some(parts.ok_or_else(|| c.err(t, "counter status such as Z, NZ or Z,NZ"))?)
    } else {
        None
    };
    let t = c.next("amplitude")?;
    let amp = parse_amplitude(t.text).map_err(|e| match e {
        ParseError::Amplitude { column, expected, .. } => syntax(n, t.column + column.saturating_sub(1), expected, t.text),
        other => other,
    })?;
    let t = c.next("target state")?;
    let target = state(t)?;
    let action = parse_action(spec, &mut c)?;
    let register = if spec.is_quantum() {
        let t = c.next("register symbol")?;
        Some(
            spec.register
                .iter()
                .position(|r| r == t.text)
                .ok_or_else(|| semantic(n, format!("undeclared register symbol {}", t.text)))?,
        )
    } else {
        None
    };
    c.done()?;
    Ok(Transition { source, symbol, status, amp, target, action, register })
}

fn parse_action(spec: &MachineSpec, c: &mut Cursor<'_, '_>) -> Result<Action, ParseError> {
    let tape = |text: &str, blank: bool| match text {
        "EPS" => Some(TapeWrite::Eps),
        "BLANK" if blank => Some(TapeWrite::Blank),
        s => spec.alphabet.tape.iter().position(|x| x == s).map(TapeWrite::Sym),
    };
    match spec.memory {
        Memory::None => {
            let t = c.next("-")?;
            if t.text != "-" {
                return Err(c.err(t, "- (no memory action)"));
            }
            Ok(Action::None)
        }
        Memory::Counters { count, .. } => {
            let t = c.next("counter update")?;
            let v: Option<Vec<i64>> = t.text.split(',').map(signed).collect();
            match v {
                Some(v) if v.len() == count => Ok(Action::Counters(v)),
                _ => Err(c.err(t, format!("{count} comma-separated increments"))),
            }
        }
        Memory::Ioc { .. } => {
            let t = c.next("counter increment")?;
            match signed(t.text).and_then(|x| u32::try_from(x).ok()) {
                Some(x) => Ok(Action::Ioc(x)),
                None => Err(c.err(t, "nonnegative increment such as +1 or 0")),
            }
        }
        Memory::Pos => {
            let t = c.next("tape symbol")?;
            tape(t.text, false).map(Action::Pos).ok_or_else(|| c.err(t, "EPS or a declared tape symbol"))
        }
        Memory::Wom => {
            let t = c.next("tape symbol")?;
            let w = tape(t.text, true).ok_or_else(|| c.err(t, "EPS, BLANK or a declared tape symbol"))?;
            let d = c.next("direction")?;
            let dir = match d.text {
                "L" => Dir::Left,
                "S" => Dir::Stay,
                "R" => Dir::Right,
                _ => return Err(c.err(d, "L, S or R")),
            };
            Ok(Action::Wom(w, dir))
        }
    }
}

fn fmt_signed(x: i64) -> String {
    if x > 0 {
        format!("+{x}")
    } else {
        x.to_string()
    }
}

fn push_list(out: &mut String, key: &str, items: impl IntoIterator<Item = impl AsRef<str>>) {
    out.push_str(key);
    for s in items {
        out.push(' ');
        out.push_str(s.as_ref());
    }
    out.push('\n');
}

/// Canonical text of `spec`: headers in a fixed order, then one `trans`
/// line per transition in list order.
pub fn serialize_machine(spec: &MachineSpec) -> String {
    let mut out = String::new();
    writeln!(out, "machine {}", spec.kind.keyword()).unwrap();
    push_list(&mut out, "input", &spec.alphabet.input);
    push_list(&mut out, "states", &spec.states);
    writeln!(out, "start {}", spec.state_name(spec.start)).unwrap();
    push_list(&mut out, "accept", spec.accepting_names());
    match &spec.memory {
        Memory::None => {}
        Memory::Counters { count, blind, inc, reversals } => {
            write!(out, "counters {count}").unwrap();
            if *blind {
                out.push_str(" blind");
            }
            if *inc != 1 {
                write!(out, " inc {inc}").unwrap();
            }
            if let Some(r) = reversals {
                write!(out, " rev {r}").unwrap();
            }
            out.push('\n');
        }
        Memory::Ioc { inc } => {
            out.push_str("ioc");
            if *inc != 1 {
                write!(out, " inc {inc}").unwrap();
            }
            out.push('\n');
        }
        Memory::Pos => push_list(&mut out, "pos", &spec.alphabet.tape),
        Memory::Wom => push_list(&mut out, "wom", &spec.alphabet.tape),
    }
    if spec.is_quantum() {
        push_list(&mut out, "register", &spec.register);
    }
    for t in &spec.transitions {
        write!(out, "trans {} {}", spec.state_name(t.source), spec.symbol_name(t.symbol)).unwrap();
        if let Some(s) = &t.status {
            write!(out, " {}", status_token(s)).unwrap();
        }
        write!(out, " {} {} ", t.amp, spec.state_name(t.target)).unwrap();
        match &t.action {
            Action::None => out.push('-'),
            Action::Counters(c) => out.push_str(&c.iter().map(|&x| fmt_signed(x)).collect::<Vec<_>>().join(",")),
            Action::Ioc(x) => out.push_str(&fmt_signed(*x as i64)),
            Action::Pos(w) => out.push_str(spec.tape_symbol_name(*w)),
            Action::Wom(w, d) => write!(out, "{} {}", spec.tape_symbol_name(*w), d.token()).unwrap(),
        }
        if let Some(r) = t.register {
            write!(out, " {}", spec.register[r]).unwrap();
        }
        out.push('\n');
    }
    out
}
