//! The two-path machines for `{w c w}` (push-only stack) and `{w c w^rev}`
//! (two-way write-only tape).

use crate::amplitude::Amp;
use crate::model::{Action, Dir, Kind, MachineBuilder, MachineSpec, Memory, TapeSymbol, TapeWrite};

const SIGMA: [&str; 3] = ["a", "b", "c"];

fn declare(b: &mut MachineBuilder) {
    for q in ["q1", "q2", "q3", "p1", "p2", "p3"] {
        b.state(q);
    }
    b.register("w1");
    b.register("w2");
    b.start("q1").accept("q2");
}

/// Six states, accepting set `{q2}`, register alphabet `{w1, w2}`.
///
/// The printed table sends `p3` to `q3` on the end-marker, which gives the
/// `q3` and `p3` columns the same image; here `p3` stays in `p3` so the
/// end-marker block is an isometry. Neither state accepts, so acceptance
/// probabilities are unchanged.
pub fn twin() -> MachineSpec {
    let mut b = MachineBuilder::new(Kind::Quantum, &SIGMA, Memory::Pos);
    b.tape_alphabet(&["a", "b"]);
    declare(&mut b);
    let (a, bb, c) = (TapeSymbol::Input(0), TapeSymbol::Input(1), TapeSymbol::Input(2));
    let push = |i| Action::Pos(TapeWrite::Sym(i));
    let eps = Action::Pos(TapeWrite::Eps);
    let h = Amp::inv_sqrt(2);

    b.trans("q1", TapeSymbol::Cent, None, h.clone(), "q1", eps.clone(), Some("w1"));
    b.trans("q1", TapeSymbol::Cent, None, h.clone(), "p1", eps.clone(), Some("w1"));

    // path 1 copies w1, then skips w2
    b.trans("q1", a, None, Amp::one(), "q1", push(0), Some("w1"));
    b.trans("q2", a, None, Amp::one(), "q2", eps.clone(), Some("w1"));
    b.trans("q1", bb, None, Amp::one(), "q1", push(1), Some("w1"));
    b.trans("q2", bb, None, Amp::one(), "q2", eps.clone(), Some("w1"));
    b.trans("q1", c, None, Amp::one(), "q2", eps.clone(), Some("w1"));
    b.trans("q2", c, None, Amp::one(), "q3", eps.clone(), Some("w1"));
    for s in [a, bb, c] {
        b.trans("q3", s, None, Amp::one(), "q3", eps.clone(), Some("w2"));
    }

    // path 2 skips w1, then copies w2
    b.trans("p1", a, None, Amp::one(), "p1", eps.clone(), Some("w1"));
    b.trans("p2", a, None, Amp::one(), "p2", push(0), Some("w1"));
    b.trans("p1", bb, None, Amp::one(), "p1", eps.clone(), Some("w1"));
    b.trans("p2", bb, None, Amp::one(), "p2", push(1), Some("w1"));
    b.trans("p1", c, None, Amp::one(), "p2", eps.clone(), Some("w1"));
    b.trans("p2", c, None, Amp::one(), "p3", eps.clone(), Some("w1"));
    for s in [a, bb, c] {
        b.trans("p3", s, None, Amp::one(), "p3", eps.clone(), Some("w2"));
    }

    let end = TapeSymbol::End;
    b.trans("q1", end, None, Amp::one(), "q1", eps.clone(), Some("w1"));
    b.trans("q2", end, None, h.clone(), "q2", eps.clone(), Some("w1"));
    b.trans("q2", end, None, h.clone(), "q3", eps.clone(), Some("w2"));
    b.trans("q3", end, None, Amp::one(), "q3", eps.clone(), Some("w1"));
    b.trans("p1", end, None, Amp::one(), "p1", eps.clone(), Some("w1"));
    b.trans("p2", end, None, h.clone(), "q2", eps.clone(), Some("w1"));
    b.trans("p2", end, None, -h, "q3", eps.clone(), Some("w2"));
    b.trans("p3", end, None, Amp::one(), "p3", eps, Some("w1"));
    b.finish()
}

/// Same six-state layout on a two-way tape. Path 1 writes `w1` rightward;
/// on `c` both paths step left; then path 1 walks left without writing while
/// path 2 writes `w2` right to left. The final configurations coincide
/// exactly when `w2` is the reverse of `w1`.
pub fn rev() -> MachineSpec {
    let mut b = MachineBuilder::new(Kind::Quantum, &SIGMA, Memory::Wom);
    b.tape_alphabet(&["a", "b"]);
    declare(&mut b);
    let (a, bb, c) = (TapeSymbol::Input(0), TapeSymbol::Input(1), TapeSymbol::Input(2));
    let w = |i, d| Action::Wom(TapeWrite::Sym(i), d);
    let eps = |d| Action::Wom(TapeWrite::Eps, d);
    let h = Amp::inv_sqrt(2);

    b.trans("q1", TapeSymbol::Cent, None, h.clone(), "q1", eps(Dir::Stay), Some("w1"));
    b.trans("q1", TapeSymbol::Cent, None, h.clone(), "p1", eps(Dir::Stay), Some("w1"));

    b.trans("q1", a, None, Amp::one(), "q1", w(0, Dir::Right), Some("w1"));
    b.trans("q1", bb, None, Amp::one(), "q1", w(1, Dir::Right), Some("w1"));
    b.trans("q1", c, None, Amp::one(), "q2", eps(Dir::Left), Some("w1"));
    b.trans("q2", a, None, Amp::one(), "q2", eps(Dir::Left), Some("w1"));
    b.trans("q2", bb, None, Amp::one(), "q2", eps(Dir::Left), Some("w1"));
    b.trans("q2", c, None, Amp::one(), "q3", eps(Dir::Stay), Some("w1"));

    b.trans("p1", a, None, Amp::one(), "p1", eps(Dir::Right), Some("w1"));
    b.trans("p1", bb, None, Amp::one(), "p1", eps(Dir::Right), Some("w1"));
    b.trans("p1", c, None, Amp::one(), "p2", eps(Dir::Left), Some("w1"));
    b.trans("p2", a, None, Amp::one(), "p2", w(0, Dir::Left), Some("w1"));
    b.trans("p2", bb, None, Amp::one(), "p2", w(1, Dir::Left), Some("w1"));
    b.trans("p2", c, None, Amp::one(), "p3", eps(Dir::Stay), Some("w1"));

    for s in [a, bb, c] {
        b.trans("q3", s, None, Amp::one(), "q3", eps(Dir::Stay), Some("w2"));
        b.trans("p3", s, None, Amp::one(), "p3", eps(Dir::Stay), Some("w2"));
    }

    let end = TapeSymbol::End;
    let stay = eps(Dir::Stay);
    b.trans("q1", end, None, Amp::one(), "q1", stay.clone(), Some("w1"));
    b.trans("q2", end, None, h.clone(), "q2", stay.clone(), Some("w1"));
    b.trans("q2", end, None, h.clone(), "q3", stay.clone(), Some("w2"));
    b.trans("q3", end, None, Amp::one(), "q3", stay.clone(), Some("w1"));
    b.trans("p1", end, None, Amp::one(), "p1", stay.clone(), Some("w1"));
    b.trans("p2", end, None, h.clone(), "q2", stay.clone(), Some("w1"));
    b.trans("p2", end, None, -h, "q3", stay.clone(), Some("w2"));
    b.trans("p3", end, None, Amp::one(), "p3", stay, Some("w1"));
    b.finish()
}
