//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use qwom::construct::{
    d1bca_to_ioc, freivalds_modulus, freivalds_one_counter, nq1bca_to_ioc, onerev_to_ioc, q1bca_to_ioc, scale_counter,
};
use qwom::random::{decorate_wom, random_pfa, random_q1bca, random_q1ca, seeded};
use qwom::sim::{ClassicalSimulator, RunResult, Simulator};
use qwom::zoo::{self, rev_bins_member, LanguageId};
use qwom::{all_words, parse_machine, serialize_machine, MachineSpec, Rational};

/// Everything criteria 10 and 11 look back on.
#[derive(Default)]
struct Audit {
    runs: usize,
    max_isometry: f64,
    max_conservation: f64,
    worst_run: String,
    /// Worst of isometry deviation and leak, per machine family.
    families: BTreeMap<String, f64>,
    classical_runs: usize,
    classical_leaks: usize,
    machines: Vec<(String, MachineSpec)>,
}

impl Audit {
    fn quantum(&mut self, label: &str, r: &RunResult) {
        self.runs += 1;
        let worst = r.max_isometry_deviation.max(r.conservation_error());
        if worst > self.max_isometry.max(self.max_conservation) {
            self.worst_run = label.to_string();
        }
        let family = label.split([' ', '#']).next().unwrap_or(label).to_string();
        let slot = self.families.entry(family).or_insert(0.0);
        *slot = slot.max(worst);
        self.max_isometry = self.max_isometry.max(r.max_isometry_deviation);
        self.max_conservation = self.max_conservation.max(r.conservation_error());
    }

    fn classical(&mut self, accept: &BigRational, reject: &BigRational) {
        self.classical_runs += 1;
        if accept + reject != BigRational::one() {
            self.classical_leaks += 1;
        }
    }

    fn keep(&mut self, label: impl Into<String>, spec: &MachineSpec) {
        self.machines.push((label.into(), spec.clone()));
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn label(spec: &MachineSpec, w: &[usize]) -> String {
    format!("{:?}", spec.word_string(w))
}

/// Twin and reverse: members at 1, one-separator nonmembers at 1/2, the
/// rest at 0.
fn trichotomy(audit: &mut Audit, id: LanguageId) -> Outcome {
    let spec = zoo::build(&id).unwrap();
    audit.keep(id.to_string(), &spec);
    let sim = Simulator::new(&spec).unwrap();
    let mut bad = Vec::new();
    let mut counts = [0usize; 3];
    for w in all_words(3, 9) {
        let r = sim.run(&w).unwrap();
        audit.quantum(&format!("{id} {}", label(&spec, &w)), &r);
        let (class, want, tol) = if zoo::membership_word(&id, &w) {
            (0, 1.0, 1e-9)
        } else if w.iter().filter(|&&x| x == 2).count() == 1 {
            (1, 0.5, 1e-9)
        } else {
            (2, 0.0, 1e-12)
        };
        counts[class] += 1;
        if (r.accept_prob - want).abs() > tol {
            bad.push(format!("{} at {:.12}", label(&spec, &w), r.accept_prob));
        }
    }
    let detail = format!(
        "{} members, {} well-formed nonmembers, {} malformed; {} off",
        counts[0],
        counts[1],
        counts[2],
        bad.len()
    );
    outcome(bad.is_empty(), with_examples(detail, &bad))
}

fn with_examples(mut detail: String, bad: &[String]) -> String {
    if !bad.is_empty() {
        detail.push_str(&format!(" (e.g. {})", bad[..bad.len().min(3)].join(", ")));
    }
    detail
}

fn criterion3(audit: &mut Audit) -> Outcome {
    let eq1 = zoo::eq_k(1);
    let mut bad = Vec::new();
    for m in [2u32, 3, 8] {
        let c = d1bca_to_ioc(&eq1, m).unwrap();
        audit.keep(format!("d1bca-ioc:{m}"), &c.spec);
        let sim = Simulator::new(&c.spec).unwrap();
        for w in all_words(2, 10) {
            let r = sim.run(&w).unwrap();
            audit.quantum(&format!("d1bca-ioc:{m} {}", label(&eq1, &w)), &r);
            let want = if zoo::membership_word(&LanguageId::EqK(1), &w) { 1.0 } else { 1.0 / m as f64 };
            if (r.accept_prob - want).abs() > 1e-9 {
                bad.push(format!("m={m} {} at {:.12}", label(&eq1, &w), r.accept_prob));
            }
        }
    }
    outcome(bad.is_empty(), with_examples(format!("m in {{2,3,8}}, {{a,b}}^<=10; {} off", bad.len()), &bad))
}

fn criterion4(audit: &mut Audit) -> Outcome {
    let mut rng = seeded(4);
    let mut worst: f64 = 0.0;
    let mut worst_corrected: f64 = 0.0;
    let mut off = 0;
    let mut checked = 0;
    for i in 0..50 {
        let spec = random_q1bca(&mut rng, 5, &["a", "b"]);
        let sim = Simulator::new(&spec).unwrap();
        // f^a, f^r, and the weight of accepting states with a nonzero counter
        let mut base = Vec::new();
        for w in all_words(2, 6) {
            let mut stranded = 0.0;
            let r = sim
                .run_observed(&w, |d, e| {
                    if d.symbol == qwom::TapeSymbol::End {
                        stranded = e
                            .branches
                            .iter()
                            .flat_map(|b| b.iter())
                            .filter(|(c, _)| spec.is_accepting(c.state) && !c.memory.counters_zero())
                            .map(|(_, a)| a.norm_sqr())
                            .sum();
                    }
                })
                .unwrap();
            audit.quantum(&format!("q1bca#{i} {}", label(&spec, &w)), &r);
            base.push((w, r, stranded));
        }
        for m in [3u32, 5] {
            let c = q1bca_to_ioc(&spec, m).unwrap();
            audit.keep(format!("q1bca #{i} q1bca-ioc:{m}"), &c.spec);
            let out = Simulator::new(&c.spec).unwrap();
            for (w, r, stranded) in &base {
                let f = out.run(w).unwrap();
                audit.quantum(&format!("q1bca-ioc:{m}#{i} {}", label(&spec, w)), &f);
                let gap = (f.accept_prob - r.accept_prob - r.reject_prob / m as f64).abs();
                let corrected = (f.accept_prob - r.accept_prob - stranded / m as f64).abs();
                worst = worst.max(gap);
                worst_corrected = worst_corrected.max(corrected);
                checked += 1;
                if gap > 1e-8 {
                    off += 1;
                }
            }
        }
    }
    outcome(
        off == 0,
        format!(
            "|f' - f^a - f^r/m| max {worst:.3e}, {off}/{checked} strings over 1e-8; \
             f' - f^a - P[accepting state, counter != 0]/m max {worst_corrected:.3e}"
        ),
    )
}

fn criterion5(audit: &mut Audit) -> Outcome {
    let mut rng = seeded(5);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        for m in [2u32, 3] {
            let spec = random_q1ca(&mut rng, 4, m, &["a", "b"]);
            let c = scale_counter(&spec, m).unwrap();
            audit.keep(format!("q1ca #{i}"), &spec);
            audit.keep(format!("q1ca #{i} scale:{m}"), &c.spec);
            let (a, b) = (Simulator::new(&spec).unwrap(), Simulator::new(&c.spec).unwrap());
            for w in all_words(2, 6) {
                let (x, y) = (a.run(&w).unwrap(), b.run(&w).unwrap());
                audit.quantum(&format!("q1ca#{i} {}", label(&spec, &w)), &x);
                audit.quantum(&format!("scale:{m}#{i} {}", label(&spec, &w)), &y);
                worst = worst.max((x.accept_prob - y.accept_prob).abs());
            }
        }
    }
    outcome(worst <= 1e-9, format!("100 machine/m pairs, max |f_M - f_M'| {worst:.3e}"))
}

fn big(r: Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn criterion6(audit: &mut Audit) -> Outcome {
    let eq2 = zoo::eq_k(2);
    let eps = Rational::new(1, 2);
    let r = freivalds_modulus(2, eps).unwrap();
    let c = freivalds_one_counter(&eq2, eps).unwrap();
    audit.keep("freivalds:1/2", &c.spec);
    let (p, q) = (ClassicalSimulator::new(&eq2).unwrap(), ClassicalSimulator::new(&c.spec).unwrap());
    let eps = big(eps);
    let mut bad = Vec::new();
    let mut count = 0;
    for w in all_words(4, 8) {
        let (fp, fq) = (p.run(&w).unwrap(), q.run(&w).unwrap());
        audit.classical(&fp.accept, &fp.reject);
        audit.classical(&fq.accept, &fq.reject);
        let upper = &fp.accept + &eps * (BigRational::one() - &fp.accept);
        let member = zoo::membership_word(&LanguageId::EqK(2), &w);
        let ok = fp.accept <= fq.accept && fq.accept <= upper && (!member || fq.accept.is_one());
        if !ok {
            bad.push(format!("{} at {}", label(&eq2, &w), fq.accept));
        }
        count += 1;
    }
    outcome(
        r == 16 && bad.is_empty(),
        with_examples(format!("R = {r}, {count} strings checked exactly; {} off", bad.len()), &bad),
    )
}

fn criterion7(audit: &mut Audit) -> Outcome {
    let machines = [
        ("nq1bca-ioc", nq1bca_to_ioc(&zoo::nh_blind()).unwrap().spec, true),
        ("onerev-ioc", onerev_to_ioc(&zoo::nh_one_reversal()).unwrap().spec, false),
    ];
    let mut bad = Vec::new();
    let mut margin = f64::INFINITY;
    for (name, spec, exact_half) in &machines {
        audit.keep(*name, spec);
        let sim = Simulator::new(spec).unwrap();
        for w in all_words(2, 12) {
            let r = sim.run(&w).unwrap();
            audit.quantum(&format!("{name} {}", label(spec, &w)), &r);
            let member = zoo::membership_word(&LanguageId::Nh, &w);
            let ok = if member {
                margin = margin.min(r.accept_prob - 0.5);
                r.accept_prob > 0.5 + 1e-9
            } else if *exact_half {
                (r.accept_prob - 0.5).abs() <= 1e-9
            } else {
                r.accept_prob <= 0.5 + 1e-9
            };
            if !ok {
                bad.push(format!("{name} {} at {:.12}", label(spec, &w), r.accept_prob));
            }
        }
    }
    outcome(
        bad.is_empty(),
        with_examples(format!("{{a,b}}^<=12; smallest member margin {margin:.3e}; {} off", bad.len()), &bad),
    )
}

/// Nonmembers of length at most 40: half uniform, half one-symbol edits of
/// members, which share almost all of their structure.
fn rev_bins_nonmembers(rng: &mut impl Rng, members: &[Vec<usize>], count: usize) -> Vec<Vec<usize>> {
    let id = LanguageId::RevBins;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    while out.len() < count / 2 {
        let len = rng.gen_range(0..=40);
        let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..3)).collect();
        if !zoo::membership_word(&id, &w) && seen.insert(w.clone()) {
            out.push(w);
        }
    }
    while out.len() < count {
        let mut w = members.choose(rng).unwrap().clone();
        let i = rng.gen_range(0..w.len());
        match rng.gen_range(0..3) {
            0 => w[i] = (w[i] + rng.gen_range(1..3)) % 3,
            1 => {
                w.remove(i);
            }
            _ => w.insert(i, rng.gen_range(0..3)),
        }
        if w.len() <= 40 && !zoo::membership_word(&id, &w) && seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

fn criterion8(audit: &mut Audit) -> Outcome {
    let spec = zoo::rev_bins();
    audit.keep("rev-bins", &spec);
    let sim = Simulator::new(&spec).unwrap();
    let mut bad = Vec::new();
    let mut members = Vec::new();
    for k in 1.. {
        let text = rev_bins_member(k);
        if text.len() > 40 {
            break;
        }
        let w = spec.tokenize(&text).unwrap();
        let r = sim.run(&w).unwrap();
        audit.quantum(&format!("rev-bins {text:?}"), &r);
        let blocks = k + 1;
        let bound = (blocks as f64 + 2.0).log2().ceil() as usize + 2;
        if (r.accept_prob - 1.0).abs() > 1e-9 || r.max_wom_cells_used > bound {
            bad.push(format!("{text:?} at {:.12} with {} cells (bound {bound})", r.accept_prob, r.max_wom_cells_used));
        }
        members.push(w);
    }
    let n_members = members.len();
    let mut rng = seeded(8);
    let nonmembers = rev_bins_nonmembers(&mut rng, &members, 500);
    let mut worst: f64 = 0.0;
    let mut over = 0;
    for w in &nonmembers {
        let r = sim.run(w).unwrap();
        audit.quantum(&format!("rev-bins {}", label(&spec, w)), &r);
        worst = worst.max(r.accept_prob);
        if r.accept_prob > 0.75 + 1e-9 {
            over += 1;
            bad.push(format!("nonmember {} at {:.12}", label(&spec, w), r.accept_prob));
        }
    }
    outcome(
        bad.is_empty(),
        with_examples(
            format!("{n_members} members, 500 nonmembers (max accept {worst:.6}, {over} above 3/4)"),
            &bad,
        ),
    )
}

fn criterion9(audit: &mut Audit) -> Outcome {
    let mut rng = seeded(9);
    let mut bad = Vec::new();
    for i in 0..100 {
        let plain = random_pfa(&mut rng, 4, &["a", "b"]);
        let wom = decorate_wom(&plain, &mut rng);
        audit.keep(format!("pfa #{i}"), &plain);
        audit.keep(format!("pfa #{i} + wom"), &wom);
        let (a, b) = (ClassicalSimulator::new(&plain).unwrap(), ClassicalSimulator::new(&wom).unwrap());
        for w in all_words(2, 6) {
            let (x, y) = (a.run(&w).unwrap(), b.run(&w).unwrap());
            audit.classical(&x.accept, &x.reject);
            audit.classical(&y.accept, &y.reject);
            if x.accept != y.accept {
                bad.push(format!("pfa #{i} {}: {} vs {}", label(&plain, &w), x.accept, y.accept));
            }
        }
    }
    outcome(bad.is_empty(), with_examples(format!("100 machines x 127 strings; {} differ", bad.len()), &bad))
}

fn criterion10(audit: &Audit) -> Outcome {
    let pass = audit.max_isometry <= 1e-9 && audit.max_conservation <= 1e-9 && audit.classical_leaks == 0;
    let mut detail = format!(
        "{} quantum runs: max isometry deviation {:.3e}, max |accept + reject - 1| {:.3e}; {} exact runs, {} leak",
        audit.runs, audit.max_isometry, audit.max_conservation, audit.classical_runs, audit.classical_leaks
    );
    if !pass {
        let over: Vec<String> = audit
            .families
            .iter()
            .filter(|(_, &x)| x > 1e-9)
            .map(|(f, x)| format!("{f} {x:.3e}"))
            .collect();
        let rest = audit.families.iter().filter(|(_, &x)| x <= 1e-9).map(|(_, &x)| x).fold(0.0, f64::max);
        detail.push_str(&format!(
            " (worst run: {}; over tolerance: {}; every other family within {rest:.3e})",
            audit.worst_run,
            over.join(", ")
        ));
    }
    outcome(pass, detail)
}

fn criterion11(audit: &Audit) -> Outcome {
    let mut bad = Vec::new();
    let mut names: Vec<(String, MachineSpec)> =
        zoo::MACHINE_NAMES.iter().map(|n| (n.to_string(), zoo::build_machine(n).unwrap())).collect();
    names.extend(audit.machines.iter().cloned());
    for (name, spec) in &names {
        let text = serialize_machine(spec);
        match parse_machine(&text) {
            Ok(back) if back == *spec && serialize_machine(&back) == text => {}
            Ok(_) => bad.push(format!("{name}: differs after round trip")),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    outcome(bad.is_empty(), with_examples(format!("{} machines; {} failed", names.len(), bad.len()), &bad))
}

fn main() -> ExitCode {
    let mut audit = Audit::default();
    let mut all_pass = true;
    let mut report = |n: usize, name: &str, run: &mut dyn FnMut(&mut Audit) -> Outcome, audit: &mut Audit| {
        let t = Instant::now();
        let o = run(audit);
        all_pass &= o.pass;
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {verdict} {name}: {} [{:.1}s]", o.detail, t.elapsed().as_secs_f64());
    };
    report(1, "twin trichotomy", &mut |a| trichotomy(a, LanguageId::Twin), &mut audit);
    report(2, "rev trichotomy", &mut |a| trichotomy(a, LanguageId::Rev), &mut audit);
    report(3, "d1bca-ioc two-point spectrum", &mut criterion3, &mut audit);
    report(4, "q1bca-ioc affine identity", &mut criterion4, &mut audit);
    report(5, "scale_counter exactness", &mut criterion5, &mut audit);
    report(6, "freivalds sandwich", &mut criterion6, &mut audit);
    report(7, "cutpoint 1/2 for nh", &mut criterion7, &mut audit);
    report(8, "rev-bins", &mut criterion8, &mut audit);
    report(9, "classical wom irrelevance", &mut criterion9, &mut audit);
    report(10, "conservation audit", &mut |a| criterion10(a), &mut audit);
    report(11, "round trip", &mut |a| criterion11(a), &mut audit);
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
