use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;

use qwom::construct::d1bca_to_ioc;
use qwom::random::{decorate_wom, random_pfa, random_q1bca, random_q1ca, seeded};
use qwom::sim::{ClassicalSimulator, MemoryContent, Simulator};
use qwom::zoo::{self, MACHINE_NAMES};
use qwom::{parse_amplitude, parse_machine, serialize_machine, validate_structure, Action, MachineSpec};

fn quantum_machine(seed: u64) -> MachineSpec {
    let mut rng = seeded(seed);
    match seed % 3 {
        0 => random_q1ca(&mut rng, 4, 2, &["a", "b"]),
        1 => random_q1bca(&mut rng, 4, &["a", "b"]),
        _ => zoo::twin(),
    }
}

fn word_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..2, 0..6)
}

/// `exp(2 pi i k/n)`: split off the nearest eighth turn exactly, so libm
/// only ever sees an angle below pi/8.
fn root_of_unity(n: u64, k: u64) -> Complex64 {
    let (n, k) = (n as i64, k as i64);
    let j = (8 * k + n / 2).div_euclid(n);
    let rest = (8 * k - j * n) as f64 / (8 * n) as f64;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let octant = [(1.0, 0.0), (h, h), (0.0, 1.0), (-h, h), (-1.0, 0.0), (-h, -h), (0.0, -1.0), (h, -h)];
    let (c, s) = octant[j.rem_euclid(8) as usize];
    Complex64::new(c, s) * Complex64::from_polar(1.0, std::f64::consts::TAU * rest)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn validation_ignores_transition_order(seed in 0u64..1000, drop in any::<prop::sample::Index>()) {
        let mut spec = quantum_machine(seed);
        // a broken machine must be reported the same way too
        if seed % 2 == 0 {
            let i = drop.index(spec.transitions.len());
            spec.transitions.remove(i);
        }
        let mut shuffled = spec.clone();
        shuffled.transitions.shuffle(&mut seeded(seed ^ 0x5eed));
        prop_assert_eq!(validate_structure(&spec), validate_structure(&shuffled));
    }

    #[test]
    fn acceptance_ignores_transition_order(seed in 0u64..1000, w in word_strategy()) {
        let spec = quantum_machine(seed);
        let mut shuffled = spec.clone();
        shuffled.transitions.shuffle(&mut seeded(seed ^ 0x5eed));
        let a = Simulator::new(&spec).unwrap().run(&w).map(|r| r.accept_prob);
        let b = Simulator::new(&shuffled).unwrap().run(&w).map(|r| r.accept_prob);
        prop_assert!((a.unwrap() - b.unwrap()).abs() < 1e-12);
    }

    /// Only which branches stay separate matters, not the names of the
    /// register symbols that separate them.
    #[test]
    fn register_names_are_irrelevant(seed in 0u64..1000, w in word_strategy()) {
        let spec = quantum_machine(seed);
        let mut renamed = spec.clone();
        let r = renamed.register.len();
        renamed.register.reverse();
        for t in &mut renamed.transitions {
            t.register = t.register.map(|x| r - 1 - x);
        }
        let a = Simulator::new(&spec).unwrap().run(&w).unwrap();
        let b = Simulator::new(&renamed).unwrap().run(&w).unwrap();
        prop_assert!((a.accept_prob - b.accept_prob).abs() < 1e-12);
        prop_assert!(a.conservation_error() < 1e-9);
    }

    #[test]
    fn increment_only_counters_never_decrease(start in 0u64..1 << 40, inc in 0u32..100) {
        let c = MemoryContent::Ioc(start).apply(&Action::Ioc(inc)).unwrap();
        prop_assert_eq!(c, MemoryContent::Ioc(start + inc as u64));
    }

    #[test]
    fn ioc_runs_only_move_up(m in 2u32..6, w in prop::collection::vec(0usize..2, 0..8)) {
        let c = d1bca_to_ioc(&zoo::eq_k(1), m).unwrap();
        let sim = Simulator::new(&c.spec).unwrap();
        let mut lowest = 0u64;
        let mut monotone = true;
        sim.run_observed(&w, |_, e| {
            let low = e
                .branches
                .iter()
                .flat_map(|b| b.keys())
                .filter_map(|c| match c.memory {
                    MemoryContent::Ioc(x) => Some(x),
                    _ => None,
                })
                .min()
                .unwrap_or(0);
            monotone &= low >= lowest;
            lowest = low;
        })
        .unwrap();
        prop_assert!(monotone);
    }

    #[test]
    fn random_machines_round_trip(seed in 0u64..1000) {
        let mut rng = seeded(seed);
        let pfa = random_pfa(&mut rng, 4, &["a", "b"]);
        let specs = [
            quantum_machine(seed),
            decorate_wom(&pfa, &mut rng),
            pfa,
        ];
        for spec in specs {
            let text = serialize_machine(&spec);
            let back = parse_machine(&text).unwrap();
            prop_assert_eq!(&back, &spec);
            prop_assert_eq!(serialize_machine(&back), text);
        }
    }

    #[test]
    fn classical_write_only_tape_is_irrelevant(seed in 0u64..10_000, w in word_strategy()) {
        let mut rng = seeded(seed);
        let plain = random_pfa(&mut rng, 4, &["a", "b"]);
        let wom = decorate_wom(&plain, &mut rng);
        let a = ClassicalSimulator::new(&plain).unwrap().run(&w).unwrap();
        let b = ClassicalSimulator::new(&wom).unwrap().run(&w).unwrap();
        prop_assert_eq!(a.accept, b.accept);
    }

    /// `p/q/sqrt(n)*w(N,k)` against an independent evaluation, within four
    /// units in the last place of the modulus.
    #[test]
    fn amplitude_evaluation_error(p in -20i64..=20, q in 1i64..=20, n in 1u64..=64, big_n in 1u64..=64, k in 0u64..64) {
        let k = k % big_n;
        let amp = parse_amplitude(&format!("{p}/{q}/sqrt({n})*w({big_n},{k})")).unwrap();
        let exact = Complex64::from_polar(p as f64 / q as f64 / (n as f64).sqrt(), 0.0) * root_of_unity(big_n, k);
        let got = amp.value();
        prop_assert!((got - exact).norm() <= 4.0 * f64::EPSILON * exact.norm().max(f64::MIN_POSITIVE), "{} vs {}", got, exact);
    }
}

const REQUIRED: &[&str] = &["machine", "input", "states", "start", "accept", "register", "counters", "ioc", "pos", "wom"];

/// Deleting any required header line from a valid file makes it invalid.
#[test]
fn deleting_a_header_line_is_rejected() {
    for name in MACHINE_NAMES {
        let text = serialize_machine(&zoo::build_machine(name).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        for (i, line) in lines.iter().enumerate() {
            let key = line.split(' ').next().unwrap();
            if !REQUIRED.contains(&key) {
                continue;
            }
            let cut: String = lines.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, l)| format!("{l}\n")).collect();
            assert!(parse_machine(&cut).is_err(), "{name}: parsed without {key:?}");
        }
    }
}
