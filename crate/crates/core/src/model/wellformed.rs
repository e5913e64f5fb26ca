use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::ModelError;

use super::{status_token, Action, MachineSpec, StateId, TapeSymbol};

/// Gram deviation of one `(symbol, status)` block.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDeviation {
    pub symbol: TapeSymbol,
    pub status: Option<Vec<bool>>,
    /// `max |G - I|` over the block's column Gram matrix.
    pub deviation: f64,
    /// Column pair attaining the maximum.
    pub worst: (StateId, StateId),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WellformednessReport {
    pub tolerance: f64,
    pub blocks: Vec<BlockDeviation>,
}

impl WellformednessReport {
    pub fn max_deviation(&self) -> f64 {
        self.blocks.iter().map(|b| b.deviation).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() <= self.tolerance
    }

    pub fn failures(&self) -> impl Iterator<Item = &BlockDeviation> {
        self.blocks.iter().filter(move |b| b.deviation > self.tolerance)
    }

    /// One line per failing block, naming the worst column pair.
    pub fn describe(&self, spec: &MachineSpec) -> Vec<String> {
        self.failures()
            .map(|b| {
                let status = b.status.as_deref().map(|s| format!(", {}", status_token(s))).unwrap_or_default();
                format!(
                    "block ({}{}): Gram deviation {:.3e} at columns ({}, {})",
                    spec.symbol_name(b.symbol),
                    status,
                    b.deviation,
                    spec.state_name(b.worst.0),
                    spec.state_name(b.worst.1)
                )
            })
            .collect()
    }
}

type RowIndex = (StateId, Action, Option<usize>);
type Block = BTreeMap<StateId, BTreeMap<RowIndex, Complex64>>;

/// For every tape symbol and counter status, check that the columns (source
/// states) of the block indexed by (target, action, register symbol) are
/// orthonormal.
pub fn check_local_wellformedness(spec: &MachineSpec, tol: f64) -> Result<WellformednessReport, ModelError> {
    if !spec.is_quantum() {
        return Err(ModelError::NotQuantum);
    }
    let mut blocks: BTreeMap<(TapeSymbol, Option<Vec<bool>>), Block> = BTreeMap::new();
    for t in &spec.transitions {
        let column = blocks.entry((t.symbol, t.status.clone())).or_default().entry(t.source).or_default();
        *column.entry((t.target, t.action.clone(), t.register)).or_default() += t.amp.value();
    }

    let mut report = WellformednessReport { tolerance: tol, blocks: Vec::new() };
    for ((symbol, status), block) in blocks {
        let cols: Vec<(&StateId, &BTreeMap<RowIndex, Complex64>)> = block.iter().collect();
        let mut deviation = 0.0;
        let mut worst = (*cols[0].0, *cols[0].0);
        for (i, (&p, a)) in cols.iter().enumerate() {
            for (&q, b) in cols.iter().skip(i) {
                let dot: Complex64 = a
                    .iter()
                    .filter_map(|(k, x)| b.get(k).map(|y| x.conj() * y))
                    .sum();
                let want = if p == q { 1.0 } else { 0.0 };
                let d = (dot - want).norm();
                if d > deviation {
                    deviation = d;
                    worst = (p, q);
                }
            }
        }
        report.blocks.push(BlockDeviation { symbol, status, deviation, worst });
    }
    Ok(report)
}
