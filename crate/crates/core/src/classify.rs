//! Shape and integer taxonomies.
//!
//! A shape of length β with α composite cells *satisfies the descent
//! inequality* when `2^(β-1) > 3^α`; such shapes shrink their seed under
//! the idealized (drop the +1) dynamics. Official shapes satisfy it
//! outright, non-official shapes fail it but start with a whole-cell
//! prefix that satisfies it, and everything else is unsatisfying. On top
//! of that sit the incidence predicates (does a concrete trajectory dip
//! below `2^n`?), the maximal comprehensive-chain parameters for a given
//! cell surplus, generative seeds, and the concerned-interval ladder.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::chains::{extract_chain, Cell, ChainShape, ChainTrace};
use crate::dynamics::Value;
use crate::exactmath::{cmp_pow23, floor_linfrac, floor_mul_log32, LinForm, RoundMode};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("integer {l} is not an odd member of (2^{n}, 2^{n}+1]")]
    RangeError { l: Value, n: u32 },
    #[error("comprehensive-chain parameter {0} must be at least 2")]
    InvalidU(u32),
    #[error("{l} is not a generative seed at length {n}")]
    NotGenerative { l: Value, n: u32 },
}

/// Whether `2^(beta-1) > 3^alpha`, decided exactly.
pub fn descent_holds(alpha: u32, beta: u32) -> bool {
    debug_assert!(beta >= 1);
    cmp_pow23(beta as i64 - 1, alpha as i64) == std::cmp::Ordering::Greater
}

/// Largest alpha for which a length-`beta` shape satisfies the descent
/// inequality, or -1 when none does (beta = 1).
pub fn satisfaction_threshold(beta: u32) -> i64 {
    if beta < 2 {
        return -1;
    }
    floor_mul_log32(beta as u64 - 1) as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShapeClass {
    Official,
    NonOfficial,
    Unsatisfying,
}

/// Classifies a shape: official when the full shape satisfies the descent
/// inequality, non-official when only some proper whole-cell prefix does.
pub fn classify_shape(shape: &ChainShape) -> ShapeClass {
    let beta = shape.beta();
    let mut alpha = 0i64;
    let mut prefix_satisfies = false;
    for (m, cell) in shape.cells().iter().enumerate() {
        let m = m as u32 + 1;
        if *cell == Cell::Ba {
            alpha += 1;
        }
        if alpha <= satisfaction_threshold(m) {
            if m == beta {
                return ShapeClass::Official;
            }
            prefix_satisfies = true;
        }
    }
    if prefix_satisfies {
        ShapeClass::NonOfficial
    } else {
        ShapeClass::Unsatisfying
    }
}

/// Which trajectory values an incidence predicate examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DipWindow {
    /// Only the value after the final cell.
    Final,
    /// Every cell-boundary value.
    AnyBoundary,
    /// Every post-halving value. Each cell ends in exactly one halving, so
    /// this coincides with [`DipWindow::AnyBoundary`]; it is kept as a
    /// distinct selectable token.
    PostHalving,
    /// Boundary values strictly before the final cell.
    PreFinal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strictness {
    Strict,
    NonStrict,
}

/// A selectable test for "the trajectory reaches below the interval base".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IncidencePredicate {
    pub window: DipWindow,
    pub strictness: Strictness,
}

impl IncidencePredicate {
    pub const fn new(window: DipWindow, strictness: Strictness) -> Self {
        IncidencePredicate { window, strictness }
    }

    /// The calibrated default: a dip below `2^n` strictly before the final
    /// cell, which reproduces the published incidental counts.
    pub const CALIBRATED: IncidencePredicate =
        IncidencePredicate::new(DipWindow::PreFinal, Strictness::Strict);

    /// All selectable variants, in stable order.
    pub fn all() -> Vec<IncidencePredicate> {
        let windows = [
            DipWindow::PreFinal,
            DipWindow::Final,
            DipWindow::AnyBoundary,
            DipWindow::PostHalving,
        ];
        let strictness = [Strictness::Strict, Strictness::NonStrict];
        windows
            .iter()
            .flat_map(|w| strictness.iter().map(|s| IncidencePredicate::new(*w, *s)))
            .collect()
    }

    #[inline]
    fn below(&self, v: Value, bound: Value) -> bool {
        match self.strictness {
            Strictness::Strict => v < bound,
            Strictness::NonStrict => v <= bound,
        }
    }

    /// Whether the trace's window dips below `bound`.
    pub fn accepts(&self, trace: &ChainTrace, bound: Value) -> bool {
        let values = &trace.boundary_values;
        match self.window {
            DipWindow::Final => self.below(trace.final_value(), bound),
            // every halving output lies on a cell boundary
            DipWindow::AnyBoundary | DipWindow::PostHalving => {
                values.iter().any(|&v| self.below(v, bound))
            }
            DipWindow::PreFinal => values[..values.len() - 1]
                .iter()
                .any(|&v| self.below(v, bound)),
        }
    }
}

impl fmt::Display for IncidencePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let window = match self.window {
            DipWindow::Final => "final-below",
            DipWindow::AnyBoundary => "boundary-below",
            DipWindow::PostHalving => "postb-below",
            DipWindow::PreFinal => "prefinal-below",
        };
        let strictness = match self.strictness {
            Strictness::Strict => "strict",
            Strictness::NonStrict => "nonstrict",
        };
        write!(f, "{window}/{strictness}")
    }
}

impl FromStr for IncidencePredicate {
    type Err = String;

    /// Parses tokens like `final-below/strict` (also accepted with `-` as
    /// the final separator: `final-below-strict`).
    fn from_str(s: &str) -> Result<Self, String> {
        let (window_str, strict_str) = s
            .split_once('/')
            .or_else(|| s.rsplit_once('-'))
            .ok_or_else(|| format!("malformed predicate token {s:?}"))?;
        let window = match window_str {
            "final-below" => DipWindow::Final,
            "boundary-below" => DipWindow::AnyBoundary,
            "postb-below" => DipWindow::PostHalving,
            "prefinal-below" => DipWindow::PreFinal,
            other => return Err(format!("unknown predicate window {other:?}")),
        };
        let strictness = match strict_str {
            "strict" => Strictness::Strict,
            "nonstrict" => Strictness::NonStrict,
            other => return Err(format!("unknown strictness {other:?}")),
        };
        Ok(IncidencePredicate::new(window, strictness))
    }
}

impl Serialize for IncidencePredicate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IncidencePredicate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegerOutcome {
    OfficialShape,
    NonOfficialShape,
    Incidental,
    Unresolved,
}

/// Classifies one odd integer of `(2^n, 2^(n+1)]`: shape class first, then
/// the incidence predicate for unsatisfying shapes.
pub fn classify_integer(
    l: Value,
    n: u32,
    pred: IncidencePredicate,
) -> Result<IntegerOutcome, ClassifyError> {
    let lo = 1u128 << n;
    let hi = 1u128 << (n + 1);
    if l % 2 == 0 || l <= lo || l > hi {
        return Err(ClassifyError::RangeError { l, n });
    }
    let trace = extract_chain(l, n).expect("odd in-range seed");
    Ok(match classify_shape(&trace.shape) {
        ShapeClass::Official => IntegerOutcome::OfficialShape,
        ShapeClass::NonOfficial => IntegerOutcome::NonOfficialShape,
        ShapeClass::Unsatisfying => {
            if pred.accepts(&trace, lo) {
                IntegerOutcome::Incidental
            } else {
                IntegerOutcome::Unresolved
            }
        }
    })
}

/// The (beta, alpha) of the maximal satisfying shape with `beta − alpha = u`:
/// `beta = ⌊(u·λ − 1)/(λ − 1)⌋`, `alpha = ⌊(u − 1)/(λ − 1)⌋`.
pub fn comprehensive_params(u: u32) -> Result<(u32, u32), ClassifyError> {
    if u < 2 {
        return Err(ClassifyError::InvalidU(u));
    }
    let lam_minus_1 = LinForm::new(-1, 1);
    let beta = floor_linfrac(LinForm::new(-1, u as i64), lam_minus_1, RoundMode::Floor)
        .expect("positive denominator, bounded quotient");
    let alpha = floor_linfrac(LinForm::new(u as i64 - 1, 0), lam_minus_1, RoundMode::Floor)
        .expect("positive denominator, bounded quotient");
    let (beta, alpha) = (beta as u32, alpha as u32);
    debug_assert_eq!(beta - alpha, u);
    // sandwich 1 < 2^(beta-1)/3^alpha < 3/2
    debug_assert!(descent_holds(alpha, beta));
    debug_assert_eq!(
        cmp_pow23(beta as i64, alpha as i64 + 1),
        std::cmp::Ordering::Less
    );
    Ok((beta, alpha))
}

/// Least integer in the generative window, `⌈(2/3)·2^n⌉`.
pub fn generative_floor(n: u32) -> Value {
    (1u128 << (n + 1)).div_ceil(3)
}

/// Whether odd `l` is a generative seed at length n: it lies in
/// `[⌈(2/3)·2^n⌉, 2^n]`, its shape is unsatisfying, and its second cell is
/// composite (so the successor seed is odd).
pub fn is_generative(l: Value, n: u32) -> bool {
    if l % 2 == 0 || n < 2 {
        return false;
    }
    if l < generative_floor(n) || l > 1u128 << n {
        return false;
    }
    let trace = extract_chain(l, n).expect("bounded seed");
    trace.shape.cells()[1] == Cell::Ba
        && classify_shape(&trace.shape) == ShapeClass::Unsatisfying
}

/// Maps a generative seed to its proper-chain seed `(3l + 1)/2`.
pub fn derive_proper(l: Value, n: u32) -> Result<Value, ClassifyError> {
    if !is_generative(l, n) {
        return Err(ClassifyError::NotGenerative { l, n });
    }
    Ok((3 * l + 1) / 2)
}

/// One rung of the concerned-interval ladder: the half-open interval
/// `(lo·2^n, hi·2^n]` with exact rational endpoints in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalK {
    pub k: u32,
    /// Lower endpoint (exclusive) as numerator/denominator.
    pub lo: (u128, u128),
    /// Upper endpoint (inclusive) as numerator/denominator.
    pub hi: (u128, u128),
}

fn reduced(num: u128, den: u128) -> (u128, u128) {
    let g = num_integer::gcd(num, den);
    (num / g, den / g)
}

/// The k-th concerned interval. `interval_k(1)` is `(3/4, 1]`, and the
/// lower endpoints decrease toward 2/3.
pub fn interval_k(k: u32) -> IntervalK {
    assert!(k >= 1, "concerned intervals are indexed from 1");
    let lo = reduced((1u128 << (2 * k + 1)) + 1, 3u128 << (2 * k));
    let hi = reduced((1u128 << (2 * k - 1)) + 1, 3u128 << (2 * k - 2));
    IntervalK { k, lo, hi }
}

impl IntervalK {
    /// Membership of `l` in `(lo·2^n, hi·2^n]`.
    pub fn contains(&self, l: Value, n: u32) -> bool {
        let scale = 1u128 << n;
        let above = self.lo.0.checked_mul(scale).expect("interval bound fits")
            < l.checked_mul(self.lo.1).expect("interval bound fits");
        let not_above = l.checked_mul(self.hi.1).expect("interval bound fits")
            <= self.hi.0.checked_mul(scale).expect("interval bound fits");
        above && not_above
    }
}

/// The unique concerned interval containing `l` (which must exceed
/// `(2/3)·2^n`): the rungs tile `((2/3)·2^n, 2^n]` with no gaps.
pub fn interval_index(l: Value, n: u32) -> u32 {
    debug_assert!(3 * l > (1u128 << (n + 1)) && l <= 1u128 << n);
    let mut k = 1;
    loop {
        if interval_k(k).contains(l, n) {
            return k;
        }
        k += 1;
        assert!(k <= 2 * n + 2, "interval search escaped the ladder");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape_of(s: &str) -> ChainShape {
        s.parse().unwrap()
    }

    #[test]
    fn descent_examples() {
        assert!(descent_holds(1, 3)); // 4 > 3
        assert!(!descent_holds(5, 5)); // 16 < 243
        assert!(!descent_holds(0, 1)); // 1 > 1 is false
    }

    #[test]
    fn satisfaction_threshold_matches_descent() {
        for beta in 1..=40u32 {
            let thr = satisfaction_threshold(beta);
            for alpha in 0..=beta as i64 {
                assert_eq!(descent_holds(alpha as u32, beta), alpha <= thr, "a={alpha} b={beta}");
            }
        }
    }

    #[test]
    fn classify_shape_examples() {
        assert_eq!(classify_shape(&shape_of("BBBA")), ShapeClass::Official);
        assert_eq!(classify_shape(&shape_of("BABABBBA")), ShapeClass::NonOfficial);
        assert_eq!(classify_shape(&shape_of("BABABA")), ShapeClass::Unsatisfying);
    }

    #[test]
    fn classify_integer_examples() {
        let final_strict = IncidencePredicate::new(DipWindow::Final, Strictness::Strict);
        let postb_strict = IncidencePredicate::new(DipWindow::PostHalving, Strictness::Strict);
        assert_eq!(
            classify_integer(13, 3, final_strict),
            Ok(IntegerOutcome::OfficialShape)
        );
        // 9 dips to 7 mid-chain but ends at 11
        assert_eq!(
            classify_integer(9, 3, final_strict),
            Ok(IntegerOutcome::Unresolved)
        );
        assert_eq!(
            classify_integer(9, 3, postb_strict),
            Ok(IntegerOutcome::Incidental)
        );
        // 11 never goes below 8: boundaries 17, 26, 13
        for pred in IncidencePredicate::all() {
            if pred.strictness == Strictness::Strict {
                assert_eq!(classify_integer(11, 3, pred), Ok(IntegerOutcome::Unresolved));
            }
        }
        assert_eq!(
            classify_integer(8, 3, final_strict),
            Err(ClassifyError::RangeError { l: 8, n: 3 })
        );
    }

    #[test]
    fn predicate_windows_nest() {
        // accepted(Final) ⊆ accepted(AnyBoundary) = accepted(PostHalving),
        // and accepted(PreFinal) ⊆ accepted(AnyBoundary), exhaustively to n=14
        for n in 2..=14u32 {
            let bound = 1u128 << n;
            for l in (bound + 1..2 * bound).step_by(2) {
                let trace = extract_chain(l, n).unwrap();
                for strictness in [Strictness::Strict, Strictness::NonStrict] {
                    let acc = |w: DipWindow| {
                        IncidencePredicate::new(w, strictness).accepts(&trace, bound)
                    };
                    if acc(DipWindow::Final) {
                        assert!(acc(DipWindow::AnyBoundary));
                    }
                    if acc(DipWindow::PreFinal) {
                        assert!(acc(DipWindow::AnyBoundary));
                    }
                    assert_eq!(acc(DipWindow::AnyBoundary), acc(DipWindow::PostHalving));
                }
            }
        }
    }

    #[test]
    fn predicate_tokens_round_trip() {
        for pred in IncidencePredicate::all() {
            let token = pred.to_string();
            assert_eq!(token.parse::<IncidencePredicate>(), Ok(pred));
            // dash-separated form also accepted
            let dashed = token.replace('/', "-");
            assert_eq!(dashed.parse::<IncidencePredicate>(), Ok(pred));
        }
        assert!("sideways/strict".parse::<IncidencePredicate>().is_err());
        assert!("final-below".parse::<IncidencePredicate>().is_err());
    }

    #[test]
    fn comprehensive_params_examples() {
        assert_eq!(comprehensive_params(3), Ok((6, 3)));
        assert_eq!(comprehensive_params(2), Ok((3, 1)));
        assert_eq!(comprehensive_params(1), Err(ClassifyError::InvalidU(1)));
        let (beta, alpha) = comprehensive_params(4).unwrap();
        assert_eq!(beta - alpha, 4);
    }

    #[test]
    fn comprehensive_params_sandwich_up_to_50() {
        for u in 2..=50u32 {
            let (beta, alpha) = comprehensive_params(u).unwrap();
            assert_eq!(beta - alpha, u);
            // 1 < 2^(beta-1)/3^alpha < 3/2
            assert!(descent_holds(alpha, beta), "u={u}");
            assert_eq!(
                cmp_pow23(beta as i64, alpha as i64 + 1),
                std::cmp::Ordering::Less,
                "u={u}"
            );
            // maximality: beta+1 with the same surplus fails the inequality
            assert!(!descent_holds(alpha + 1, beta + 1), "u={u}");
        }
    }

    #[test]
    fn generative_examples() {
        assert!(is_generative(31, 5));
        assert!(!is_generative(13, 5)); // below ⌈64/3⌉ = 22
        // 21 fails every condition: below the window, official shape, even successor
        assert!(!is_generative(21, 5));
        assert_eq!(classify_shape(&extract_chain(21, 5).unwrap().shape), ShapeClass::Official);
        assert_eq!(extract_chain(21, 5).unwrap().shape.cells()[1], Cell::B);
        assert_eq!(derive_proper(31, 5), Ok(47));
        assert_eq!(
            derive_proper(13, 5),
            Err(ClassifyError::NotGenerative { l: 13, n: 5 })
        );
    }

    #[test]
    fn generative_proper_lands_in_upper_interval() {
        for n in 7..=14u32 {
            let hi = 1u128 << n;
            for l in (generative_floor(n) | 1..=hi).step_by(2) {
                if !is_generative(l, n) {
                    continue;
                }
                let p = derive_proper(l, n).unwrap();
                assert_eq!(p % 2, 1);
                assert!(p > hi && p < 2 * hi, "l={l} n={n} p={p}");
            }
        }
    }

    #[test]
    fn interval_examples() {
        let i1 = interval_k(1);
        assert_eq!(i1.lo, (3, 4));
        assert_eq!(i1.hi, (1, 1));
        let i2 = interval_k(2);
        assert_eq!(i2.lo, (11, 16));
        assert_eq!(i2.hi, (3, 4));
    }

    #[test]
    fn interval_ladder_descends_to_two_thirds() {
        let mut prev = interval_k(1);
        for k in 2..=20 {
            let cur = interval_k(k);
            // adjacent rungs share an endpoint
            assert_eq!(cur.hi, prev.lo, "k={k}");
            // lower endpoints stay above 2/3 and decrease
            assert!(3 * cur.lo.0 > 2 * cur.lo.1, "k={k}");
            assert!(cur.lo.0 * prev.lo.1 < prev.lo.0 * cur.lo.1, "k={k}");
            prev = cur;
        }
    }

    #[test]
    fn interval_index_tiles_the_window() {
        for n in 7..=12u32 {
            for l in (generative_floor(n) | 1..=1u128 << n).step_by(2) {
                let k = interval_index(l, n);
                assert!(interval_k(k).contains(l, n));
                // no other rung contains it
                for other in 1..=k + 3 {
                    if other != k {
                        assert!(!interval_k(other).contains(l, n), "l={l} n={n} k={k} other={other}");
                    }
                }
            }
        }
    }

    #[test]
    fn generative_31_example_interval() {
        // 31 at n=5 sits in (3/4·32, 32]? 31 > 24 yes: rung 1
        assert_eq!(interval_index(31, 5), 1);
    }
}
