//! Property suites shared by the acceptance tests and the CLI `verify`
//! subcommand. Each suite runs to completion, counts checks, and carries
//! up to a handful of rendered counterexamples.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::census::{compare_gamma_oracle, CensusError, CensusOptions, GammaComparison};
use crate::chains::{extract_chain, invert_shape, periodicity_check, ChainError};
use crate::counting::{gamma, ratio_check, CountingError};
use crate::exactmath::Count;

const MAX_STORED_FAILURES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub checked: u64,
    pub failures: u64,
    /// Rendered witnesses for the first few failures.
    pub witnesses: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, witness: String) {
        self.failures += 1;
        if self.witnesses.len() < MAX_STORED_FAILURES {
            self.witnesses.push(witness);
        }
    }
}

/// Randomized periodicity checks: seeds odd l < 2^z, verifies the chain
/// pair (l, 2^z + l) for shape equality, the 3^α final offset, and the
/// parity flip. Deterministic for a fixed seed.
pub fn periodicity_suite(trials: u64, max_z: u32, seed: u64) -> Result<SuiteOutcome, ChainError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut outcome = SuiteOutcome {
        checked: 0,
        failures: 0,
        witnesses: Vec::new(),
    };
    for _ in 0..trials {
        let z = rng.gen_range(1..=max_z);
        let l = 2 * rng.gen_range(0..1u128 << (z - 1)) + 1;
        let report = periodicity_check(l, z)?;
        outcome.checked += 1;
        if !report.holds() {
            outcome.record(format!(
                "l={l} z={z}: shapes_match={} offset_is_pow3={} parity_flips={} \
                 final_lower={} final_upper={}",
                report.shapes_match,
                report.offset_is_pow3,
                report.parity_flips,
                report.lower.final_value(),
                report.upper.final_value(),
            ));
        }
    }
    Ok(outcome)
}

/// Verifies that the shape map on odd seeds of `(2^n, 2^(n+1)]` hits all
/// `2^(n-1)` shapes injectively and that [`invert_shape`] inverts it.
pub fn uniqueness_suite(n: u32) -> Result<SuiteOutcome, ChainError> {
    assert!((1..=26).contains(&n), "suite is exhaustive; keep n desk-scale");
    let mut outcome = SuiteOutcome {
        checked: 0,
        failures: 0,
        witnesses: Vec::new(),
    };
    let mut seen = vec![false; 1usize << (n - 1)];
    let base = 1u128 << n;
    let mut l = base + 1;
    while l < 2 * base {
        let trace = extract_chain(l, n)?;
        let cells = trace.shape.cells();
        let mut mask = 0usize;
        for (i, cell) in cells[1..].iter().enumerate() {
            if *cell == crate::chains::Cell::Ba {
                mask |= 1 << i;
            }
        }
        outcome.checked += 1;
        if seen[mask] {
            outcome.record(format!("shape {} repeated at seed {l}", trace.shape));
        }
        seen[mask] = true;
        match invert_shape(&trace.shape) {
            Ok(back) if back == l => {}
            Ok(back) => outcome.record(format!("invert({}) = {back}, expected {l}", trace.shape)),
            Err(e) => outcome.record(format!("invert({}) failed: {e}", trace.shape)),
        }
        l += 2;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        outcome.record(format!("shape mask {missing:#b} never realized at n={n}"));
    }
    Ok(outcome)
}

/// Exact ratio-monotonicity over γ(n_lo..=n_hi).
pub fn ratio_lemma_suite(n_lo: u32, n_hi: u32) -> Result<SuiteOutcome, CountingError> {
    let mut gammas: Vec<(u32, Count)> = Vec::new();
    for n in n_lo..=n_hi {
        gammas.push((n, gamma(n)?.total));
    }
    let report = ratio_check(&gammas);
    let mut outcome = SuiteOutcome {
        checked: report.pairs.len() as u64,
        failures: 0,
        witnesses: Vec::new(),
    };
    for pair in &report.pairs {
        if !pair.holds {
            outcome.record(format!("ratio decreases from n={} to n={}", pair.n, pair.n + 1));
        }
    }
    Ok(outcome)
}

/// Shape-census versus γ(n) for 3 ≤ n ≤ max_n; mismatching rows become
/// witnesses and the full comparison is returned for reporting.
pub fn gamma_oracle_suite(
    max_n: u32,
    opts: &CensusOptions,
) -> Result<(SuiteOutcome, Vec<GammaComparison>), CensusError> {
    let rows = compare_gamma_oracle(max_n, opts)?;
    let mut outcome = SuiteOutcome {
        checked: rows.len() as u64,
        failures: 0,
        witnesses: Vec::new(),
    };
    for row in &rows {
        if !row.matches {
            outcome.record(format!(
                "n={}: census {}+{} != formula {}",
                row.n, row.census_official, row.census_non_official, row.formula_total
            ));
        }
    }
    Ok((outcome, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodicity_smoke() {
        let out = periodicity_suite(500, 20, 7).unwrap();
        assert_eq!(out.checked, 500);
        assert!(out.passed(), "{:?}", out.witnesses);
    }

    #[test]
    fn uniqueness_smoke() {
        for n in 1..=10 {
            let out = uniqueness_suite(n).unwrap();
            assert_eq!(out.checked, 1 << (n - 1));
            assert!(out.passed(), "n={n}: {:?}", out.witnesses);
        }
    }

    #[test]
    fn ratio_lemma_smoke() {
        let out = ratio_lemma_suite(3, 12).unwrap();
        assert!(out.passed());
        assert_eq!(out.checked, 9);
    }

    #[test]
    fn gamma_oracle_smoke() {
        let opts = CensusOptions {
            use_cache: false,
            ..CensusOptions::default()
        };
        let (out, rows) = gamma_oracle_suite(10, &opts).unwrap();
        assert!(out.passed());
        assert_eq!(rows.len(), 8);
    }
}
