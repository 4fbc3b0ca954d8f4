//! Exact evaluation of the closed-form counts.
//!
//! γ(n) counts the official and non-official shapes of length n in three
//! terms: the official binomial sum, the non-official shapes whose tail
//! beyond the comprehensive core has no free halvings, and the
//! free-halving shapes weighted by the number of admissible placements of
//! each free halving (a nondecreasing-tuple count over per-halving
//! movement bounds). δ(n) counts proper seeds generated from the
//! concerned intervals with the same tuple-counting trick. Every floor
//! and ceiling of an expression in λ = log2(3) is evaluated exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::comprehensive_params;
use crate::exactmath::{
    binomial, floor_linfrac, floor_mul_log32, isqrt, nested_nondecreasing_count, Count, LinForm,
    RoundMode,
};

use num_bigint::BigUint;
use num_traits::One;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountingError {
    #[error("count is defined for n ≥ {min}, got {n}")]
    DomainTooSmall { n: u32, min: u32 },
}

/// The official-shape count `Σ_{x=1..⌊(n-1)·log3(2)⌋} C(n-1, x-1)` for n ≥ 2.
pub fn official_count(n: u32) -> Count {
    assert!(n >= 2);
    let limit = floor_mul_log32(n as u64 - 1);
    (1..=limit).map(|x| binomial(n as u64 - 1, x as i64 - 1)).sum()
}

fn lam_minus_1() -> LinForm {
    LinForm::new(-1, 1)
}

/// Movement bound w(s) for the s-th free halving of a γ-term shape: the
/// tail slots left over once the separating wall of composite cells is
/// placed. May be nonpositive, which empties the placement sum.
///
/// Here y is the composite-cell count of the whole shape and the core is
/// the maximal satisfying shape with surplus `u = n - x`.
pub fn gamma_move_bound(n: u32, x: u32, y: u32, s: u32) -> i64 {
    let (beta_u, alpha_u) = comprehensive_params(n - x).expect("u = n - x ≥ 2");
    // wall length: ⌈(s + beta_u − 1 − alpha_u·λ)/(λ − 1)⌉
    let wall = floor_linfrac(
        LinForm::new(s as i64 + beta_u as i64 - 1, -(alpha_u as i64)),
        lam_minus_1(),
        RoundMode::Ceil,
    )
    .expect("bounded quotient");
    y as i64 + 1 - alpha_u as i64 - wall
}

/// γ(n) with its three-term breakdown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaBreakdown {
    pub n: u32,
    pub term_official: Count,
    pub term_nonofficial_nofree: Count,
    pub term_nonofficial_free: Count,
    pub total: Count,
}

/// Evaluates γ(n) exactly for n ≥ 3.
pub fn gamma(n: u32) -> Result<GammaBreakdown, CountingError> {
    if n < 3 {
        return Err(CountingError::DomainTooSmall { n, min: 3 });
    }
    let n_i = n as i64;
    let term_official = official_count(n);
    // ⌈(n-1)·log3(2)⌉ = floor + 1 (the multiple is irrational for n ≥ 2)
    let lo = floor_mul_log32(n as u64 - 1) as i64 + 1;

    let core_binomial = |surplus: u32| -> Count {
        let (beta_u, alpha_u) = comprehensive_params(surplus).expect("surplus ≥ 2");
        binomial(beta_u as u64 - 1, alpha_u as i64 - 1)
    };

    let mut term_nofree = Count::zero();
    for y in lo..=n_i - 2 {
        term_nofree += core_binomial((n_i - y) as u32);
    }

    let mut term_free = Count::zero();
    for y in lo..=n_i - 3 {
        for x in y + 1..=n_i - 2 {
            let weight = core_binomial((n_i - x) as u32);
            if weight.is_zero() {
                continue;
            }
            // bounds outermost-first: w(e), w(e-1), …, w(1) with depth e = x - y
            let depth = (x - y) as u32;
            let bounds: Vec<i64> = (1..=depth)
                .rev()
                .map(|s| gamma_move_bound(n, x as u32, y as u32, s))
                .collect();
            let placements = nested_nondecreasing_count(&bounds);
            term_free += &weight * &placements;
        }
    }

    let mut total = term_official.clone();
    total += &term_nofree;
    total += &term_free;
    Ok(GammaBreakdown {
        n,
        term_official,
        term_nonofficial_nofree: term_nofree,
        term_nonofficial_free: term_free,
        total,
    })
}

/// Largest concerned-interval index contributing at length n (n ≥ 7):
/// `⌊(p + √(p² − 8))/4⌋` with `p = n − ⌊(n-1)·log3(2)⌋`.
pub fn g_cap(n: u32) -> Result<u32, CountingError> {
    if n < 7 {
        return Err(CountingError::DomainTooSmall { n, min: 7 });
    }
    let p = n as u64 - floor_mul_log32(n as u64 - 1);
    // ⌊(p + √d)/4⌋ = ⌊(p + ⌊√d⌋)/4⌋: adding a fractional part < 1 to an
    // integer never crosses a multiple of 4 inside the floor
    let d = (p * p).checked_sub(8).expect("p ≥ 4 for n ≥ 7");
    Ok(((p as u128 + isqrt(d as u128)) / 4) as u32)
}

/// Free-halving cap h(K) for interval k at length n:
/// `⌊⌈(k-1)/k⌉ + n − (2k+1) − (n-1)·log3(2)⌋`. May be nonpositive.
pub fn h_cap(n: u32, k: u32) -> i64 {
    assert!(n >= 7 && k >= 1);
    let c = if k == 1 { 0 } else { 1 };
    // ⌊m − θ⌋ = m − ⌊θ⌋ − 1 for integer m and irrational θ > 0
    c + n as i64 - (2 * k as i64 + 1) - floor_mul_log32(n as u64 - 1) as i64 - 1
}

/// Movement bound z(s) for the s-th free halving of a δ-term shape with q
/// free halvings in interval k. The paper-form `(⌈x⌉ + √(⌈x⌉²))/2` is
/// `max(⌈x⌉, 0)` with `x = (s − λ)/(λ − 1)`; at s = 1 the fraction is
/// exactly −1.
pub fn delta_move_bound(n: u32, k: u32, q: u32, s: u32) -> i64 {
    let ceil = floor_linfrac(LinForm::new(s as i64, -1), lam_minus_1(), RoundMode::Ceil)
        .expect("bounded quotient");
    n as i64 - (2 * k as i64 + q as i64 + 1) - ceil.max(0)
}

/// One per-(k, q) contribution of δ(n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaTerm {
    pub k: u32,
    pub q: u32,
    pub count: Count,
}

/// δ(n) with its per-(k, q) breakdown. Zero below n = 7.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaBreakdown {
    pub n: u32,
    /// g(n), the number of contributing interval rungs (also the count of
    /// free-halving-free shapes, one per rung).
    pub interval_cap: u32,
    pub terms: Vec<DeltaTerm>,
    pub total: Count,
}

/// Evaluates δ(n) exactly for n ≥ 3 (zero for n < 7 by convention, where
/// the interval cap is undefined and the published table lists zeros).
pub fn delta(n: u32) -> Result<DeltaBreakdown, CountingError> {
    if n < 3 {
        return Err(CountingError::DomainTooSmall { n, min: 3 });
    }
    if n < 7 {
        return Ok(DeltaBreakdown {
            n,
            interval_cap: 0,
            terms: Vec::new(),
            total: Count::zero(),
        });
    }
    let cap = g_cap(n).expect("n ≥ 7");
    let mut total = Count::from(cap as u64);
    let mut terms = Vec::new();
    for k in 1..=cap {
        let h = h_cap(n, k);
        for q in 1..=h.max(0) as u32 {
            // bounds outermost-first: z(q), z(q-1), …, z(1)
            let bounds: Vec<i64> = (1..=q).rev().map(|s| delta_move_bound(n, k, q, s)).collect();
            let count = nested_nondecreasing_count(&bounds);
            total += &count;
            terms.push(DeltaTerm { k, q, count });
        }
    }
    Ok(DeltaBreakdown {
        n,
        interval_cap: cap,
        terms,
        total,
    })
}

/// One adjacent comparison of the density ratio `(γ(n) + 2^(n-1))/2^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioPair {
    pub n: u32,
    pub holds: bool,
    pub equality: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub pairs: Vec<RatioPair>,
    pub all_hold: bool,
}

/// Verifies, in exact rational arithmetic, that the density ratio never
/// decreases across consecutive n. Cross-multiplying reduces each
/// comparison to `γ(n+1) ≥ 2·γ(n)`.
pub fn ratio_check(gammas: &[(u32, Count)]) -> MonotonicityReport {
    let mut pairs = Vec::new();
    for w in gammas.windows(2) {
        let (n_lo, lo) = &w[0];
        let (n_hi, hi) = &w[1];
        assert_eq!(n_lo + 1, *n_hi, "ratio check needs consecutive n");
        let doubled = lo.as_biguint() * 2u32;
        pairs.push(RatioPair {
            n: *n_lo,
            holds: *hi.as_biguint() >= doubled,
            equality: *hi.as_biguint() == doubled,
        });
    }
    let all_hold = pairs.iter().all(|p| p.holds);
    MonotonicityReport { pairs, all_hold }
}

/// Renders `(count + 2^(n-1))/2^n` with 12 fractional digits, truncated
/// toward zero. The published tables truncate rather than round: their
/// denominators are powers of two, and rows whose 13th digit is 5 keep
/// the unrounded 12th digit.
pub fn ratio_string(count: &Count, n: u32) -> String {
    debug_assert!(n >= 1);
    let numerator = count.as_biguint() + (BigUint::one() << (n as usize - 1));
    let scaled = (numerator * BigUint::from(10u64).pow(12)) >> (n as usize);
    let int_part = &scaled / BigUint::from(10u64).pow(12);
    let frac_part = &scaled % BigUint::from(10u64).pow(12);
    format!("{}.{:012}", int_part, frac_part)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn official_count_examples() {
        // ⌊1·log3(2)⌋ = 0 so the n = 2 sum is empty, matching the census:
        // neither length-2 shape satisfies the descent inequality
        assert_eq!(official_count(2), Count::zero());
        assert_eq!(official_count(3), Count::from(1));
        assert_eq!(official_count(4), Count::from(1));
        assert_eq!(official_count(5), Count::from(5));
    }

    #[test]
    fn gamma_move_bound_worked_case() {
        // length-11 shape with 7 composite cells over the surplus-3 core:
        // wall of length 3, so the first free halving has 2 admissible moves
        assert_eq!(gamma_move_bound(11, 8, 7, 1), 2);
    }

    #[test]
    fn gamma_move_bound_nonincreasing_in_s() {
        for n in 3..=25u32 {
            let lo = floor_mul_log32(n as u64 - 1) as i64 + 1;
            for y in lo..=n as i64 - 3 {
                for x in y + 1..=n as i64 - 2 {
                    let mut prev = i64::MAX;
                    for s in 1..=(x - y) as u32 {
                        let w = gamma_move_bound(n, x as u32, y as u32, s);
                        assert!(w <= prev, "n={n} x={x} y={y} s={s}");
                        prev = w;
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_small_values() {
        assert_eq!(gamma(3).unwrap().total, Count::from(1));
        assert_eq!(gamma(4).unwrap().total, Count::from(2));
        assert_eq!(gamma(7).unwrap().total, Count::from(34));
        assert_eq!(gamma(10).unwrap().total, Count::from(354));
        assert_eq!(gamma(2), Err(CountingError::DomainTooSmall { n: 2, min: 3 }));
    }

    #[test]
    fn gamma_large_value() {
        assert_eq!(gamma(25).unwrap().total, Count::from(15415312));
    }

    #[test]
    fn gamma_breakdown_sums() {
        for n in 3..=25 {
            let b = gamma(n).unwrap();
            let mut sum = b.term_official.clone();
            sum += &b.term_nonofficial_nofree;
            sum += &b.term_nonofficial_free;
            assert_eq!(sum, b.total, "n={n}");
        }
    }

    #[test]
    fn g_cap_examples() {
        assert_eq!(g_cap(7), Ok(1));
        assert_eq!(g_cap(14), Ok(2));
        assert_eq!(g_cap(6), Err(CountingError::DomainTooSmall { n: 6, min: 7 }));
    }

    #[test]
    fn h_cap_examples() {
        assert_eq!(h_cap(14, 1), 2);
        assert_eq!(h_cap(14, 2), 1);
        assert_eq!(h_cap(7, 1), 0);
    }

    #[test]
    fn delta_move_bound_examples() {
        assert_eq!(delta_move_bound(14, 1, 1, 1), 10);
        assert_eq!(delta_move_bound(14, 1, 2, 1), 9);
        assert_eq!(delta_move_bound(14, 1, 2, 2), 8);
        assert_eq!(delta_move_bound(14, 2, 1, 1), 8);
    }

    #[test]
    fn delta_14_breakdown() {
        let b = delta(14).unwrap();
        assert_eq!(b.interval_cap, 2);
        assert_eq!(b.total, Count::from(64));
        let parts: Vec<(u32, u32, u64)> = b
            .terms
            .iter()
            .map(|t| (t.k, t.q, t.count.to_u64().unwrap()))
            .collect();
        assert_eq!(parts, vec![(1, 1, 10), (1, 2, 44), (2, 1, 8)]);
    }

    #[test]
    fn delta_edges() {
        assert_eq!(delta(6).unwrap().total, Count::zero());
        assert_eq!(delta(7).unwrap().total, Count::from(1));
        assert_eq!(delta(25).unwrap().total, Count::from(83390));
        assert_eq!(delta(2), Err(CountingError::DomainTooSmall { n: 2, min: 3 }));
    }

    #[test]
    fn ratio_check_examples() {
        let seq = vec![
            (3u32, Count::from(1)),
            (4, Count::from(2)),
            (5, Count::from(6)),
        ];
        let report = ratio_check(&seq);
        assert!(report.all_hold);
        assert!(report.pairs[0].equality); // 2 = 2·1
        assert!(!report.pairs[1].equality); // 6 > 4
        let seq = vec![(9u32, Count::from(177)), (10, Count::from(354))];
        assert!(ratio_check(&seq).pairs[0].equality);
    }

    #[test]
    fn ratio_strings_truncate() {
        assert_eq!(ratio_string(&Count::from(1), 3), "0.625000000000");
        // 7213/8192 ends …0625: truncation keeps 062
        assert_eq!(ratio_string(&Count::from(3117), 13), "0.880493164062");
        assert_eq!(ratio_string(&Count::from(15415312), 25), "0.959412097930");
    }

    #[test]
    fn breakdown_serialization_field_names() {
        let b = gamma(10).unwrap();
        let json = serde_json::to_value(&b).unwrap();
        assert_eq!(json["n"], 10);
        assert_eq!(json["total"], "354");
        assert!(json["term_official"].is_string());
        let d = delta(14).unwrap();
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["total"], "64");
        assert_eq!(json["terms"][0]["k"], 1);
    }
}
