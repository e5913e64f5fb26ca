use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use num_complex::Complex64;

use crate::error::SimError;
use crate::model::{MachineSpec, TapeSymbol};

use super::config::{Configuration, Overflow};
use super::table::RowTable;

/// Branches lighter than this (squared norm) are dropped into `norm_drift`.
pub const PRUNE_THRESHOLD: f64 = 1e-12;
/// Single amplitudes with squared modulus below this are dropped.
pub const AMPLITUDE_FLOOR: f64 = 1e-24;
/// Normalized branches closer than this, up to global phase, are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// A pure superposition over configurations. Its squared norm is the
/// probability weight of the branch in the ensemble.
pub type Branch = BTreeMap<Configuration, Complex64>;

#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    pub branches: Vec<Branch>,
    /// Mass removed so far by pruning.
    pub norm_drift: f64,
}

fn mass(b: &Branch) -> f64 {
    b.values().map(|a| a.norm_sqr()).sum()
}

impl Ensemble {
    pub fn initial(spec: &MachineSpec) -> Ensemble {
        let mut b = Branch::new();
        b.insert(Configuration::initial(spec), Complex64::new(1.0, 0.0));
        Ensemble { branches: vec![b], norm_drift: 0.0 }
    }

    pub fn total_mass(&self) -> f64 {
        self.branches.iter().map(mass).sum()
    }

    pub fn config_count(&self) -> usize {
        self.branches.iter().map(BTreeMap::len).sum()
    }

    pub fn max_cells_used(&self) -> usize {
        self.branches
            .iter()
            .flat_map(|b| b.keys())
            .map(|c| c.memory.cells_used())
            .max()
            .unwrap_or(0)
    }

    /// `(accept, reject)` masses of the final measurement.
    pub fn measure(&self, spec: &MachineSpec) -> (f64, f64) {
        let mut acc = 0.0;
        let mut rej = 0.0;
        for b in &self.branches {
            for (c, a) in b {
                if c.accepts(spec) {
                    acc += a.norm_sqr();
                } else {
                    rej += a.norm_sqr();
                }
            }
        }
        (acc, rej)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepDiagnostics {
    pub symbol: TapeSymbol,
    /// `max |sum_w ||E_w psi||^2 - ||psi||^2|` over the incoming branches.
    pub isometry_deviation: f64,
    pub branches: usize,
    pub configs: usize,
    pub wom_cells: usize,
    /// Mass pruned during this step.
    pub pruned: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub accept_prob: f64,
    pub reject_prob: f64,
    pub max_isometry_deviation: f64,
    pub peak_branch_count: usize,
    pub peak_config_count: usize,
    pub max_wom_cells_used: usize,
    pub norm_drift: f64,
}

impl RunResult {
    /// `|accept + reject - 1|`.
    pub fn conservation_error(&self) -> f64 {
        (self.accept_prob + self.reject_prob - 1.0).abs()
    }
}

/// Quantum simulator with the transition table compiled once per machine.
#[derive(Clone, Debug)]
pub struct Simulator<'a> {
    spec: &'a MachineSpec,
    table: RowTable,
}

impl<'a> Simulator<'a> {
    pub fn new(spec: &'a MachineSpec) -> Result<Simulator<'a>, SimError> {
        if !spec.is_quantum() {
            return Err(SimError::WrongKind("the quantum simulator needs a quantum machine".into()));
        }
        Ok(Simulator { spec, table: RowTable::compile(spec)? })
    }

    pub fn spec(&self) -> &MachineSpec {
        self.spec
    }

    /// Apply the superoperator for `symbol` to every branch, splitting each
    /// branch by register symbol.
    pub fn step(&self, ens: &Ensemble, symbol: TapeSymbol) -> Result<(Ensemble, StepDiagnostics), SimError> {
        if let TapeSymbol::Input(i) = symbol {
            if i >= self.spec.alphabet.input.len() {
                return Err(SimError::UnknownSymbol(format!("#{i}")));
            }
        }
        let mut drift = ens.norm_drift;
        let mut pruned = 0.0;
        let mut deviation: f64 = 0.0;
        let mut fresh: Vec<Branch> = Vec::new();

        for branch in &ens.branches {
            let mut split: BTreeMap<usize, Branch> = BTreeMap::new();
            for (conf, &a) in branch {
                let mask = conf.memory.status_mask();
                let row = self
                    .table
                    .row(conf.state, symbol, mask)
                    .ok_or_else(|| self.table.missing(self.spec, conf.state, symbol, mask))?;
                for t in row {
                    let memory = conf
                        .memory
                        .apply(&t.action)
                        .map_err(|Overflow| SimError::CounterOverflow { prefix: String::new() })?;
                    let next = Configuration { state: t.target, memory };
                    *split.entry(t.register).or_default().entry(next).or_default() += a * t.amp;
                }
            }
            let before = mass(branch);
            let after: f64 = split.values().map(mass).sum();
            deviation = deviation.max((after - before).abs());

            for (_, mut b) in split {
                b.retain(|_, a| {
                    let m = a.norm_sqr();
                    if m < AMPLITUDE_FLOOR {
                        pruned += m;
                        false
                    } else {
                        true
                    }
                });
                let m = mass(&b);
                if m == 0.0 {
                    continue;
                }
                if m < PRUNE_THRESHOLD {
                    pruned += m;
                    continue;
                }
                fresh.push(b);
            }
        }
        drift += pruned;

        let branches = merge_branches(fresh);
        let next = Ensemble { branches, norm_drift: drift };
        let diag = StepDiagnostics {
            symbol,
            isometry_deviation: deviation,
            branches: next.branches.len(),
            configs: next.config_count(),
            wom_cells: next.max_cells_used(),
            pruned,
        };
        Ok((next, diag))
    }

    /// Run on an input string, tokenized over the machine's alphabet.
    pub fn run_str(&self, input: &str) -> Result<RunResult, SimError> {
        let word = self.spec.tokenize(input)?;
        self.run(&word)
    }

    pub fn run(&self, word: &[usize]) -> Result<RunResult, SimError> {
        self.run_observed(word, |_, _| {})
    }

    /// Run and collect per-step diagnostics.
    pub fn run_traced(&self, word: &[usize]) -> Result<(RunResult, Vec<StepDiagnostics>), SimError> {
        let mut trace = Vec::new();
        let r = self.run_observed(word, |d, _| trace.push(d.clone()))?;
        Ok((r, trace))
    }

    /// Run, calling `observe` after every step with the new ensemble.
    pub fn run_observed(
        &self,
        word: &[usize],
        mut observe: impl FnMut(&StepDiagnostics, &Ensemble),
    ) -> Result<RunResult, SimError> {
        let mut ens = Ensemble::initial(self.spec);
        let mut max_dev: f64 = 0.0;
        let mut peak_branches = 1;
        let mut peak_configs = 1;
        let mut cells = 0;
        for (t, &sym) in MachineSpec::tape(word).iter().enumerate() {
            let (next, diag) = self.step(&ens, sym).map_err(|e| match e {
                SimError::CounterOverflow { .. } => SimError::CounterOverflow {
                    prefix: self.spec.word_string(&word[..t.min(word.len())]),
                },
                e => e,
            })?;
            max_dev = max_dev.max(diag.isometry_deviation);
            peak_branches = peak_branches.max(diag.branches);
            peak_configs = peak_configs.max(diag.configs);
            cells = cells.max(diag.wom_cells);
            observe(&diag, &next);
            ens = next;
        }
        let (accept_prob, reject_prob) = ens.measure(self.spec);
        Ok(RunResult {
            accept_prob,
            reject_prob,
            max_isometry_deviation: max_dev,
            peak_branch_count: peak_branches,
            peak_config_count: peak_configs,
            max_wom_cells_used: cells,
            norm_drift: ens.norm_drift,
        })
    }
}

/// Run a quantum machine on one input string.
pub fn run(spec: &MachineSpec, input: &str) -> Result<RunResult, SimError> {
    Simulator::new(spec)?.run_str(input)
}

fn support_hash(b: &Branch) -> u64 {
    let mut h = DefaultHasher::new();
    for c in b.keys() {
        c.hash(&mut h);
    }
    h.finish()
}

/// True when `a / na` and `b / nb` agree up to a global phase.
fn same_ray(a: &Branch, na: f64, b: &Branch, nb: f64) -> bool {
    if a.len() != b.len() || !a.keys().eq(b.keys()) {
        return false;
    }
    let dot: Complex64 = a.values().zip(b.values()).map(|(x, y)| x.conj() * y).sum();
    if dot.norm() == 0.0 {
        return false;
    }
    let z = dot / dot.norm();
    a.values()
        .zip(b.values())
        .all(|(x, y)| (x / na * z - y / nb).norm() <= MERGE_TOLERANCE)
}

/// Merge branches that are the same pure state up to phase, adding weights.
/// First-occurrence order is kept so results are deterministic.
fn merge_branches(fresh: Vec<Branch>) -> Vec<Branch> {
    let mut out: Vec<(Branch, f64)> = Vec::with_capacity(fresh.len());
    let mut groups: HashMap<u64, Vec<usize>> = HashMap::new();
    for b in fresh {
        let m = mass(&b);
        let n = m.sqrt();
        let slot = groups.entry(support_hash(&b)).or_default();
        let hit = slot.iter().copied().find(|&i| {
            let (ref a, ma) = out[i];
            same_ray(a, ma.sqrt(), &b, n)
        });
        match hit {
            Some(i) => out[i].1 += m,
            None => {
                slot.push(out.len());
                out.push((b, m));
            }
        }
    }
    out.into_iter()
        .map(|(mut b, m)| {
            let current = mass(&b);
            if current != m {
                let scale = (m / current).sqrt();
                for a in b.values_mut() {
                    *a *= scale;
                }
            }
            b
        })
        .collect()
}
