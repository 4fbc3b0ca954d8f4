//! Brute-force oracles over dyadic intervals.
//!
//! Everything here is an exhaustive enumeration with deterministic
//! aggregation: per-partition accumulators are private and merged by
//! commutative addition, so results are identical for any partition
//! count. The integer census classifies every odd seed of
//! `(2^n, 2^(n+1)]`; alongside the per-class counts it reports the raw
//! number of seeds accepted by the incidence predicate (`descenders`) and
//! the derived incidental count `max(0, descenders − official −
//! non_official)`, which is how the published T column was produced.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::{cell_step, Cell, ChainError};
use crate::classify::{
    generative_floor, interval_index, satisfaction_threshold, IncidencePredicate, Strictness,
};
use crate::counting::{delta, gamma, CountingError};
use crate::dynamics::Value;
use crate::exactmath::Count;
use crate::tables;

pub mod cache;

use cache::CensusCache;

/// Default upper guard: keeps a full census sweep at desk scale.
pub const DEFAULT_MAX_N: u32 = 26;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("n = {n} exceeds the census guard {max} (override the guard to raise it)")]
    GuardExceeded { n: u32, max: u32 },
    #[error("census is defined for n ≥ {min}, got {n}")]
    TooSmall { n: u32, min: u32 },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Counting(#[from] CountingError),
    #[error("cache i/o failed: {0}")]
    Cache(#[from] std::io::Error),
}

/// Knobs shared by the census entry points.
#[derive(Debug, Clone)]
pub struct CensusOptions {
    /// Number of disjoint subranges the workload is split into.
    pub partitions: usize,
    /// Guard on n; raising it is a deliberate override.
    pub max_n: u32,
    /// Directory for census result caching, if any.
    pub cache_dir: Option<PathBuf>,
    /// Whether cache hits may skip recomputation.
    pub use_cache: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            partitions: 1,
            max_n: DEFAULT_MAX_N,
            cache_dir: None,
            use_cache: true,
        }
    }
}

impl CensusOptions {
    fn check_range(&self, n: u32, min: u32) -> Result<(), CensusError> {
        if n < min {
            return Err(CensusError::TooSmall { n, min });
        }
        if n > self.max_n {
            return Err(CensusError::GuardExceeded { n, max: self.max_n });
        }
        Ok(())
    }

    fn partitions(&self) -> usize {
        self.partitions.max(1)
    }

    fn cache(&self) -> Option<CensusCache> {
        if self.use_cache {
            self.cache_dir.clone().map(CensusCache::new)
        } else {
            None
        }
    }
}

/// Splits `[lo, hi]` into at most `parts` contiguous, disjoint, inclusive
/// subranges in increasing order whose union is the whole interval.
pub fn partition_range(lo: Value, hi: Value, parts: usize) -> Vec<(Value, Value)> {
    assert!(lo <= hi && parts >= 1);
    let size = hi - lo + 1;
    let parts = (parts as u128).min(size);
    let chunk = size / parts;
    let remainder = size % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = lo;
    for i in 0..parts {
        let len = chunk + if i < remainder { 1 } else { 0 };
        out.push((start, start + len - 1));
        start += len;
    }
    out
}

/// Per-class tallies of one integer census.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub official: u64,
    pub non_official: u64,
    pub incidental: u64,
    pub unresolved: u64,
}

impl ClassCounts {
    pub fn total(&self) -> u64 {
        self.official + self.non_official + self.incidental + self.unresolved
    }

    fn merge(mut self, other: ClassCounts) -> ClassCounts {
        self.official += other.official;
        self.non_official += other.non_official;
        self.incidental += other.incidental;
        self.unresolved += other.unresolved;
        self
    }
}

/// An exhaustive classification of the odd integers of `(2^n, 2^(n+1)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: u32,
    pub predicate: IncidencePredicate,
    pub counts: ClassCounts,
    /// Odd seeds accepted by the predicate, regardless of shape class.
    pub descenders: u64,
    /// `max(0, descenders − official − non_official)`: the incidental
    /// count as published, attributing the first `γ` descents to the
    /// satisfying shapes.
    pub derived_t: u64,
    /// `descenders − official − non_official` before clamping; a negative
    /// value means fewer seeds descended than there are satisfying
    /// shapes (observed once, at n = 6).
    pub residual: i64,
    /// Even integers of the interval (all trivially descend): `2^(n-1)`.
    pub evens: u64,
    pub elapsed_ms: u64,
    pub partition_count: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct PartialTally {
    counts: ClassCounts,
    descenders: u64,
}

/// Classifies every odd seed in the inclusive range, walking each chain
/// once. `thresholds[m]` is the satisfaction threshold at prefix length m.
fn tally_range(
    range: (Value, Value),
    n: u32,
    pred: IncidencePredicate,
    thresholds: &[i64],
) -> PartialTally {
    let base = 1u128 << n;
    let strict = pred.strictness == Strictness::Strict;
    let below = |v: Value| if strict { v < base } else { v <= base };
    let mut tally = PartialTally::default();
    let mut l = range.0;
    if l % 2 == 0 {
        l += 1;
    }
    while l <= range.1 {
        let mut v = l;
        let mut alpha: i64 = 0;
        let mut prefix_sat = false;
        let mut full_sat = false;
        let mut dip_pre_final = false;
        let mut dip_any = false;
        for m in 1..=n {
            let (next, cell) = cell_step(v).expect("census values stay within 128 bits");
            v = next;
            if cell == Cell::Ba {
                alpha += 1;
            }
            if alpha <= thresholds[m as usize] {
                if m == n {
                    full_sat = true;
                } else {
                    prefix_sat = true;
                }
            }
            if below(v) {
                dip_any = true;
                if m < n {
                    dip_pre_final = true;
                }
            }
        }
        let accepted = match pred.window {
            crate::classify::DipWindow::Final => below(v),
            crate::classify::DipWindow::AnyBoundary | crate::classify::DipWindow::PostHalving => {
                dip_any
            }
            crate::classify::DipWindow::PreFinal => dip_pre_final,
        };
        if accepted {
            tally.descenders += 1;
        }
        if full_sat {
            tally.counts.official += 1;
        } else if prefix_sat {
            tally.counts.non_official += 1;
        } else if accepted {
            tally.counts.incidental += 1;
        } else {
            tally.counts.unresolved += 1;
        }
        l += 2;
    }
    tally
}

/// Classifies every odd integer of `(2^n, 2^(n+1)]` under the predicate.
pub fn integer_census(
    n: u32,
    pred: IncidencePredicate,
    opts: &CensusOptions,
) -> Result<CensusReport, CensusError> {
    opts.check_range(n, 3)?;
    if let Some(cache) = opts.cache() {
        if let Some(hit) = cache.load(n, pred) {
            return Ok(hit);
        }
    }
    let started = Instant::now();
    let thresholds: Vec<i64> = (0..=n).map(satisfaction_threshold).collect();
    let lo = (1u128 << n) + 1;
    let hi = (1u128 << (n + 1)) - 1;
    let ranges = partition_range(lo, hi, opts.partitions());
    let merged = ranges
        .par_iter()
        .map(|r| tally_range(*r, n, pred, &thresholds))
        .reduce(PartialTally::default, |a, b| PartialTally {
            counts: a.counts.merge(b.counts),
            descenders: a.descenders + b.descenders,
        });
    let satisfying = merged.counts.official + merged.counts.non_official;
    let residual = merged.descenders as i64 - satisfying as i64;
    let report = CensusReport {
        n,
        predicate: pred,
        counts: merged.counts,
        descenders: merged.descenders,
        derived_t: residual.max(0) as u64,
        residual,
        evens: 1u64 << (n - 1),
        elapsed_ms: started.elapsed().as_millis() as u64,
        partition_count: opts.partitions(),
    };
    if let Some(cache) = opts.cache() {
        cache.store(&report)?;
    }
    Ok(report)
}

/// Classification tallies over all `2^(n-1)` shapes of length n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeCensusReport {
    pub n: u32,
    pub official: u64,
    pub non_official: u64,
    pub unsatisfying: u64,
}

impl ShapeCensusReport {
    pub fn total(&self) -> u64 {
        self.official + self.non_official + self.unsatisfying
    }

    pub fn satisfying(&self) -> u64 {
        self.official + self.non_official
    }
}

/// Classifies every shape of length n by direct enumeration.
pub fn shape_census(n: u32, opts: &CensusOptions) -> Result<ShapeCensusReport, CensusError> {
    opts.check_range(n, 3)?;
    let thresholds: Vec<i64> = (0..=n).map(satisfaction_threshold).collect();
    let masks = 1u64 << (n - 1);
    let ranges = partition_range(0, masks as u128 - 1, opts.partitions());
    let (official, non_official) = ranges
        .par_iter()
        .map(|&(lo, hi)| {
            let mut official = 0u64;
            let mut non_official = 0u64;
            for mask in lo as u64..=hi as u64 {
                // final alpha is 1 + popcount; prefixes need a scan
                let full_sat = (mask.count_ones() as i64) < thresholds[n as usize];
                let mut alpha: i64 = 1;
                let mut prefix_sat = alpha <= thresholds[1];
                if !prefix_sat {
                    for m in 2..n {
                        alpha += (mask >> (m - 2) & 1) as i64;
                        if alpha <= thresholds[m as usize] {
                            prefix_sat = true;
                            break;
                        }
                    }
                }
                if full_sat {
                    official += 1;
                } else if prefix_sat {
                    non_official += 1;
                }
            }
            (official, non_official)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(ShapeCensusReport {
        n,
        official,
        non_official,
        unsatisfying: masks - official - non_official,
    })
}

/// Census of generative seeds in `[⌈(2/3)·2^n⌉, 2^n]`, stratified by
/// concerned interval, with the closed-form δ(n) attached for comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerativeReport {
    pub n: u32,
    pub generative_count: u64,
    /// Seeds whose successor lands strictly inside `(2^n, 2^(n+1))` — the
    /// mapping forces this, so it always equals `generative_count`.
    pub proper_in_range: u64,
    /// Nonempty interval rungs: (k, seeds in rung k).
    pub per_interval: Vec<(u32, u64)>,
    /// δ(n) from the closed form; reported next to the census, never
    /// asserted against it.
    pub delta_formula: Count,
}

#[derive(Debug, Default)]
struct GenerativeTally {
    count: u64,
    proper_ok: u64,
    strata: Vec<(u32, u64)>,
}

impl GenerativeTally {
    fn bump_stratum(&mut self, k: u32, by: u64) {
        match self.strata.iter_mut().find(|(sk, _)| *sk == k) {
            Some((_, c)) => *c += by,
            None => self.strata.push((k, by)),
        }
    }
}

/// Counts generative seeds at length n (n ≥ 7) and stratifies them.
pub fn generative_census(n: u32, opts: &CensusOptions) -> Result<GenerativeReport, CensusError> {
    opts.check_range(n, 7)?;
    let thresholds: Vec<i64> = (0..=n).map(satisfaction_threshold).collect();
    let lo = generative_floor(n) | 1;
    let hi = 1u128 << n;
    let ranges = partition_range(lo, hi, opts.partitions());
    let per_range: Vec<GenerativeTally> = ranges
        .par_iter()
        .map(|&(a, b)| {
            let mut tally = GenerativeTally::default();
            let mut l = a;
            if l % 2 == 0 {
                l += 1;
            }
            while l <= b {
                let mut v = l;
                let mut alpha: i64 = 0;
                let mut sat = false;
                let mut second_cell = Cell::B;
                for m in 1..=n {
                    let (next, cell) = cell_step(v).expect("bounded seed");
                    v = next;
                    if cell == Cell::Ba {
                        alpha += 1;
                    }
                    if m == 2 {
                        second_cell = cell;
                    }
                    if alpha <= thresholds[m as usize] {
                        sat = true;
                    }
                }
                if !sat && second_cell == Cell::Ba {
                    tally.count += 1;
                    let proper = (3 * l + 1) / 2;
                    if proper % 2 == 1 && proper > hi && proper < 2 * hi {
                        tally.proper_ok += 1;
                    }
                    tally.bump_stratum(interval_index(l, n), 1);
                }
                l += 2;
            }
            tally
        })
        .collect();
    let mut generative_count = 0;
    let mut proper_in_range = 0;
    let mut per_interval: Vec<(u32, u64)> = Vec::new();
    for tally in per_range {
        generative_count += tally.count;
        proper_in_range += tally.proper_ok;
        for (k, cnt) in tally.strata {
            match per_interval.iter_mut().find(|(sk, _)| *sk == k) {
                Some((_, acc)) => *acc += cnt,
                None => per_interval.push((k, cnt)),
            }
        }
    }
    per_interval.sort_unstable();
    Ok(GenerativeReport {
        n,
        generative_count,
        proper_in_range,
        per_interval,
        delta_formula: delta(n)?.total,
    })
}

/// How a candidate census turns raw tallies into an incidental count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TSemantics {
    /// T = unsatisfying-shaped seeds accepted by the predicate.
    IncidentalCount,
    /// T = max(0, all accepted seeds − satisfying-shaped seeds).
    CensusMinusGamma,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub n: u32,
    pub expected: u64,
    pub computed: u64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantOutcome {
    pub predicate: IncidencePredicate,
    pub semantics: TSemantics,
    pub matched: usize,
    pub rows: Vec<CalibrationRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub n_lo: u32,
    pub n_hi: u32,
    pub variants: Vec<VariantOutcome>,
    /// Index into `variants` of the best-scoring candidate (first wins
    /// ties in the stable variant order).
    pub best: Option<usize>,
}

impl CalibrationReport {
    pub fn best_variant(&self) -> Option<&VariantOutcome> {
        self.best.map(|i| &self.variants[i])
    }
}

/// Scores every predicate variant and T-derivation against the published
/// incidental column over `n_lo..=n_hi` (rows outside the published range
/// are skipped).
pub fn calibrate_predicate(
    n_lo: u32,
    n_hi: u32,
    opts: &CensusOptions,
) -> Result<CalibrationReport, CensusError> {
    let mut variants = Vec::new();
    for pred in IncidencePredicate::all() {
        let mut reports = Vec::new();
        for n in n_lo..=n_hi.min(opts.max_n) {
            if tables::t_reference(n).is_none() {
                continue;
            }
            reports.push(integer_census(n, pred, opts)?);
        }
        for semantics in [TSemantics::CensusMinusGamma, TSemantics::IncidentalCount] {
            let rows: Vec<CalibrationRow> = reports
                .iter()
                .map(|r| {
                    let expected = tables::t_reference(r.n).expect("filtered to published rows");
                    let computed = match semantics {
                        TSemantics::IncidentalCount => r.counts.incidental,
                        TSemantics::CensusMinusGamma => r.derived_t,
                    };
                    CalibrationRow {
                        n: r.n,
                        expected,
                        computed,
                        matches: computed == expected,
                    }
                })
                .collect();
            let matched = rows.iter().filter(|r| r.matches).count();
            variants.push(VariantOutcome {
                predicate: pred,
                semantics,
                matched,
                rows,
            });
        }
    }
    let best = variants
        .iter()
        .enumerate()
        .max_by_key(|(i, v)| (v.matched, usize::MAX - i))
        .map(|(i, _)| i);
    Ok(CalibrationReport {
        n_lo,
        n_hi,
        variants,
        best,
    })
}

/// One row of the census-versus-formula cross-check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaComparison {
    pub n: u32,
    pub census_official: u64,
    pub census_non_official: u64,
    pub formula_total: Count,
    pub matches: bool,
}

/// Compares the shape census's satisfying count against γ(n) for every
/// 3 ≤ n ≤ max_n. Mismatches are carried in the rows, never dropped.
pub fn compare_gamma_oracle(
    max_n: u32,
    opts: &CensusOptions,
) -> Result<Vec<GammaComparison>, CensusError> {
    let mut rows = Vec::new();
    for n in 3..=max_n.min(opts.max_n) {
        let census = shape_census(n, opts)?;
        let formula = gamma(n)?.total;
        let matches = Count::from(census.satisfying()) == formula;
        rows.push(GammaComparison {
            n,
            census_official: census.official,
            census_non_official: census.non_official,
            formula_total: formula,
            matches,
        });
    }
    Ok(rows)
}
