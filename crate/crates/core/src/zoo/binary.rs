//! Machines over `{0, 1, a}` that compare a reversed binary block with the
//! reversed binary encoding of its successor: the push-only machine for
//! `{(i)rev a (i+1)rev}` and the looping two-way tape machine built on it.

use crate::amplitude::Amp;
use crate::model::{Action, Alphabet, Dir, Kind, MachineSpec, Memory, QftGadget, TapeSymbol, TapeWrite};

use super::explore::{explore, Emit};

const BIT0: TapeSymbol = TapeSymbol::Input(0);
const BIT1: TapeSymbol = TapeSymbol::Input(1);

fn bit(s: TapeSymbol) -> Option<u8> {
    match s {
        BIT0 => Some(0),
        BIT1 => Some(1),
        _ => None,
    }
}

fn alphabet() -> Alphabet {
    Alphabet {
        input: vec!["0".into(), "1".into(), "a".into()],
        tape: vec!["0".into(), "1".into()],
    }
}

/// Format of a reversed binary encoding read so far. A complete encoding is
/// `0` or ends in `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Fmt {
    Empty,
    /// Exactly `0`.
    Zero,
    EndsOne,
    /// Ends in `0` and is not exactly `0`.
    EndsZero,
}

impl Fmt {
    fn step(self, b: u8) -> Fmt {
        match (self, b) {
            (_, 1) => Fmt::EndsOne,
            (Fmt::Empty, _) => Fmt::Zero,
            _ => Fmt::EndsZero,
        }
    }

    /// A valid encoding of some `i >= 0`.
    fn valid(self) -> bool {
        matches!(self, Fmt::Zero | Fmt::EndsOne)
    }

    /// A valid encoding of some `i >= 1`.
    fn valid_positive(self) -> bool {
        self == Fmt::EndsOne
    }

    fn code(self) -> &'static str {
        match self {
            Fmt::Empty => "E",
            Fmt::Zero => "Z",
            Fmt::EndsOne => "O",
            Fmt::EndsZero => "B",
        }
    }
}

/// One comparison of `u a v`: path 1 writes `inc(u)` LSB first, path 2 writes
/// `v`. Only the head direction differs between the stack and tape versions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Pair {
    /// Reading `u`. `ones` says every bit so far was 1, so path 1 still
    /// carries the pending increment. Both paths track it because it goes
    /// into the register.
    U { path: u8, ones: bool, fmt: Fmt },
    /// Reading `v`.
    V { path: u8, fmt: Fmt },
}

impl Pair {
    fn start(path: u8) -> Pair {
        Pair::U { path, ones: true, fmt: Fmt::Empty }
    }

    /// The part of the state both paths share: it depends on the input only.
    fn shared(self) -> String {
        match self {
            Pair::U { ones, fmt, .. } => format!("u{}{}", if ones { "1" } else { "" }, fmt.code()),
            Pair::V { fmt, .. } => format!("v{}", fmt.code()),
        }
    }

    fn name(self) -> String {
        match self {
            Pair::U { path, ones, fmt } => format!("u{path}{}{}", if ones { "c" } else { "" }, fmt.code()),
            Pair::V { path, fmt } => format!("v{path}{}", fmt.code()),
        }
    }
}

/// What one path does on a bit or on the separator. `None` means the path
/// has seen a malformed block.
enum PairStep {
    Next(Pair, Option<u8>),
    Reject,
}

fn pair_step(p: Pair, sym: TapeSymbol) -> PairStep {
    match (p, bit(sym)) {
        (Pair::U { path, ones, fmt }, Some(b)) => {
            let next = Pair::U { path, ones: ones && b == 1, fmt: fmt.step(b) };
            let out = if ones { 1 - b } else { b };
            PairStep::Next(next, (path == 1).then_some(out))
        }
        (Pair::U { path, ones, fmt }, None) => {
            if !fmt.valid() {
                return PairStep::Reject;
            }
            let out = (path == 1 && ones).then_some(1);
            PairStep::Next(Pair::V { path, fmt: Fmt::Empty }, out)
        }
        (Pair::V { path, fmt }, Some(b)) => {
            let out = if path == 2 { Some(b) } else { None };
            PairStep::Next(Pair::V { path, fmt: fmt.step(b) }, out)
        }
        // a second separator inside one comparison
        (Pair::V { .. }, None) => PairStep::Reject,
    }
}

/// States of the push-only machine for `{(i)rev a (i+1)rev}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Tp {
    Start,
    Run(Pair),
    Accept,
    Reject,
    Sink,
}

impl Tp {
    fn name(&self) -> String {
        match self {
            Tp::Start => "start".into(),
            Tp::Run(p) => p.name(),
            Tp::Accept => "acc".into(),
            Tp::Reject => "rej".into(),
            Tp::Sink => "sink".into(),
        }
    }
}

fn pos_action(out: Option<u8>) -> Action {
    Action::Pos(out.map_or(TapeWrite::Eps, |b| TapeWrite::Sym(b as usize)))
}

/// Push-only machine for `{(i)rev a (i+1)rev | i >= 0}` over `{0, 1, a}`.
///
/// Two paths as in the `w c w` machine: path 1 pushes the increment of the
/// first block (flipping leading 1s, then the first 0, and pushing the
/// pending carry on `a`), path 2 pushes the second block verbatim. Both check
/// the block formats in finite control. Every transition into the sink
/// writes a register symbol naming its source.
pub fn twin_prime() -> MachineSpec {
    let accepting = |s: &Tp| *s == Tp::Accept;
    explore(Kind::Quantum, alphabet(), Memory::Pos, "w", Tp::Start, Tp::name, accepting, |s, sym| {
        let sink = |s: &Tp| vec![Emit::det(Tp::Sink, pos_action(None), format!("x.{}", s.name()))];
        match (*s, sym) {
            (Tp::Start, TapeSymbol::Cent) => {
                let h = Amp::inv_sqrt(2);
                vec![
                    Emit::new(h.clone(), Tp::Run(Pair::start(1)), pos_action(None), "w"),
                    Emit::new(h, Tp::Run(Pair::start(2)), pos_action(None), "w"),
                ]
            }
            (Tp::Run(p), TapeSymbol::End) => match p {
                Pair::V { path, fmt } if fmt.valid_positive() => {
                    let g = QftGadget::unitary(vec![1, 2], vec![0, 1]).expect("2-way gadget");
                    g.row(path as usize - 1)
                        .into_iter()
                        .map(|(amp, l)| {
                            let (target, reg) = if l == 1 { (Tp::Accept, "acc") } else { (Tp::Reject, "rej") };
                            Emit::new(amp, target, pos_action(None), reg)
                        })
                        .collect()
                }
                _ => sink(s),
            },
            (Tp::Run(p), _) => match pair_step(p, sym) {
                PairStep::Next(q, out) => vec![Emit::det(Tp::Run(q), pos_action(out), p.shared())],
                PairStep::Reject => sink(s),
            },
            (Tp::Sink, _) => sink(s),
            _ => Vec::new(),
        }
    })
}

/// Block-format check for `a 0 a {0,1}+ a ... {0,1}+ a` with at least two blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Shape {
    /// Before the first `a`.
    Begin,
    /// After the first `a`, expecting the block `0`.
    First,
    /// After `a0`.
    FirstDone,
    /// After the `a` that closes the first block.
    Open1,
    /// Inside a later block.
    Inside,
    /// After an `a` closing a later block.
    Open2,
}

impl Shape {
    fn step(self, sym: TapeSymbol) -> Option<Shape> {
        use Shape::*;
        match (self, bit(sym)) {
            (Begin, None) => Some(First),
            (First, Some(0)) => Some(FirstDone),
            (FirstDone, None) => Some(Open1),
            (Open1 | Inside | Open2, Some(_)) => Some(Inside),
            (Inside, None) => Some(Open2),
            _ => None,
        }
    }

    fn code(self) -> &'static str {
        match self {
            Shape::Begin => "b",
            Shape::First => "f",
            Shape::FirstDone => "g",
            Shape::Open1 => "o",
            Shape::Inside => "i",
            Shape::Open2 => "p",
        }
    }
}

/// Loop position of one branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Lap {
    /// Not yet in the loop.
    Wait,
    /// At the start of a comparison that writes in direction `dir`.
    Ready(Dir),
    In(Dir, Pair),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Rb {
    Start,
    Run { branch: u8, shape: Shape, lap: Lap },
    Accept,
    Sink,
}

fn dir_code(d: Dir) -> &'static str {
    d.token()
}

impl Rb {
    fn name(&self) -> String {
        match self {
            Rb::Start => "start".into(),
            Rb::Accept => "acc".into(),
            Rb::Sink => "sink".into(),
            Rb::Run { branch, shape, lap } => {
                let lap = match lap {
                    Lap::Wait => "w".to_string(),
                    Lap::Ready(d) => format!("r{}", dir_code(*d)),
                    Lap::In(d, p) => format!("{}{}", dir_code(*d), p.name()),
                };
                format!("b{branch}.{}.{lap}", shape.code())
            }
        }
    }

    /// Input-determined part of a running state, written to the register so
    /// the two paths of a comparison keep identical register histories.
    fn shared(&self) -> String {
        match self {
            Rb::Run { branch, shape, lap } => {
                let lap = match lap {
                    Lap::Wait => "w".to_string(),
                    Lap::Ready(d) => format!("r{}", dir_code(*d)),
                    Lap::In(d, p) => format!("{}{}", dir_code(*d), p.shared()),
                };
                format!("s{branch}.{}.{lap}", shape.code())
            }
            _ => "w".into(),
        }
    }
}

fn wom(out: Option<u8>, dir: Dir) -> Action {
    match out {
        Some(b) => Action::Wom(TapeWrite::Sym(b as usize), dir),
        None => Action::Wom(TapeWrite::Eps, Dir::Stay),
    }
}

/// Two-way tape machine for `{a (0)rev a (1)rev a ... a (k)rev a | k >= 1}`.
///
/// Two branches that never interfere check consecutive block pairs: branch 1
/// starts comparing after the first `a`, branch 2 after the second. Each
/// comparison is the two-path successor check, ending in a 2-way Fourier step
/// on the closing `a` that either continues with the next comparison or
/// rejects. The head steps back on that `a` and the next comparison writes in
/// the opposite direction over the same cells. At the end-marker a branch in
/// the middle of a comparison accepts, as does one that has just finished a
/// comparison.
pub fn rev_bins() -> MachineSpec {
    let accepting = |s: &Rb| *s == Rb::Accept;
    explore(Kind::Quantum, alphabet(), Memory::Wom, "w", Rb::Start, Rb::name, accepting, |s, sym| {
        let stay = Action::Wom(TapeWrite::Eps, Dir::Stay);
        let sink = |s: &Rb| vec![Emit::det(Rb::Sink, stay.clone(), format!("x.{}", s.name()))];
        let (branch, shape, lap) = match *s {
            Rb::Start if sym == TapeSymbol::Cent => {
                let h = Amp::inv_sqrt(2);
                return (1..=2)
                    .map(|branch| {
                        let run = Rb::Run { branch, shape: Shape::Begin, lap: Lap::Wait };
                        Emit::new(h.clone(), run, stay.clone(), format!("b{branch}"))
                    })
                    .collect();
            }
            Rb::Run { branch, shape, lap } => (branch, shape, lap),
            Rb::Sink => return sink(s),
            _ => return Vec::new(),
        };
        let shared = s.shared();

        if sym == TapeSymbol::End {
            // complete input with at least two blocks; then both loop positions accept
            return match (shape, lap) {
                (Shape::Open2, Lap::Ready(_) | Lap::In(..)) => {
                    vec![Emit::det(Rb::Accept, stay.clone(), format!("x.{}", s.name()))]
                }
                _ => sink(s),
            };
        }
        let Some(next_shape) = shape.step(sym) else {
            return sink(s);
        };
        let run = |lap| Rb::Run { branch, shape: next_shape, lap };

        match lap {
            Lap::Wait => {
                // branch b joins the loop on the b-th `a`
                let joins = matches!((branch, next_shape), (1, Shape::First) | (2, Shape::Open1));
                let lap = if joins { Lap::Ready(Dir::Right) } else { Lap::Wait };
                vec![Emit::det(run(lap), stay.clone(), shared)]
            }
            Lap::Ready(dir) => {
                if bit(sym).is_none() {
                    return sink(s);
                }
                let h = Amp::inv_sqrt(2);
                (1..=2u8)
                    .map(|path| match pair_step(Pair::start(path), sym) {
                        PairStep::Next(p, out) => Emit::new(h.clone(), run(Lap::In(dir, p)), wom(out, dir), shared.clone()),
                        PairStep::Reject => unreachable!("a bit never ends a comparison"),
                    })
                    .collect()
            }
            Lap::In(dir, p) => match (p, bit(sym)) {
                (Pair::V { path, fmt }, None) => {
                    if !fmt.valid_positive() {
                        return sink(s);
                    }
                    // closing `a`: Fourier step onto (reject, continue), stepping back
                    let back = Action::Wom(TapeWrite::Eps, dir.reversed());
                    let g = QftGadget::unitary(vec![1, 2], vec![0, 1]).expect("2-way gadget");
                    g.row(path as usize - 1)
                        .into_iter()
                        .map(|(amp, l)| {
                            let target = if l == 1 { run(Lap::Ready(dir.reversed())) } else { Rb::Sink };
                            let reg = if l == 1 { shared.clone() } else { format!("{shared}.rej") };
                            Emit::new(amp, target, back.clone(), reg)
                        })
                        .collect()
                }
                _ => match pair_step(p, sym) {
                    PairStep::Next(q, out) => vec![Emit::det(run(Lap::In(dir, q)), wom(out, dir), shared)],
                    PairStep::Reject => sink(s),
                },
            },
        }
    })
}
