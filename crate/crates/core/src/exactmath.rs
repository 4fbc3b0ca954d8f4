//! Exact integer and log-linear-form arithmetic.
//!
//! Every floor/ceiling of an expression in λ = log2(3) reduces to the sign
//! of some `a + b·λ`, which is decidable exactly by comparing `2^a · 3^b`
//! against 1 in big-integer arithmetic. No floating point is used anywhere;
//! the counting formulas are discontinuous in these floors and a single ULP
//! flips table values.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exponent magnitude ceiling for materialized powers (~600k decimal digits).
const MAX_POW_EXPONENT: i128 = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactMathError {
    #[error("denominator is not strictly positive")]
    NonPositiveDenominator,
    #[error("quotient bracket search exceeded bound {0}")]
    BracketExceeded(i64),
}

/// Rounding direction for [`floor_linfrac`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundMode {
    Floor,
    Ceil,
}

/// The exact real number `a + b·λ` with λ = log2(3).
///
/// λ is irrational, so two forms are equal iff their coefficient pairs are,
/// and the sign of any nonzero form is decidable by a power comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinForm {
    pub a: i64,
    pub b: i64,
}

impl LinForm {
    pub const fn new(a: i64, b: i64) -> Self {
        LinForm { a, b }
    }

    /// λ itself.
    pub const LOG2_3: LinForm = LinForm::new(0, 1);

    /// Exact sign, via comparison of `2^a · 3^b` with 1.
    pub fn sign(&self) -> Ordering {
        sign_linform(self.a as i128, self.b as i128)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·log2(3)", self.a, self.b)
    }
}

fn pow2(e: i128) -> BigUint {
    BigUint::one() << usize::try_from(e).expect("exponent fits usize")
}

fn pow3(e: i128) -> BigUint {
    BigUint::from(3u32).pow(u32::try_from(e).expect("exponent fits u32"))
}

/// Sign of `p + q·λ`, i.e. the ordering of `2^p · 3^q` against 1.
fn sign_linform(p: i128, q: i128) -> Ordering {
    assert!(
        p.abs() <= MAX_POW_EXPONENT && q.abs() <= MAX_POW_EXPONENT,
        "power exponent out of supported range: p={p}, q={q}"
    );
    let lhs = pow2(p.max(0)) * pow3(q.max(0));
    let rhs = pow2((-p).max(0)) * pow3((-q).max(0));
    lhs.cmp(&rhs)
}

/// Compares `2^a` against `3^b` exactly. `Equal` only at `a = b = 0`.
pub fn cmp_pow23(a: i64, b: i64) -> Ordering {
    sign_linform(a as i128, -(b as i128))
}

/// Exact `⌊num/den⌋` or `⌈num/den⌉` for linear forms in λ, `den > 0`.
///
/// The quotient k is bracketed by exponential then binary search, testing
/// `sign(num − k·den)` each time. The search is capped at
/// `4·(|a|+|b|+|c|+|d|)+8`; every quotient arising from the counting
/// formulas is small, so hitting the cap indicates a bug upstream.
pub fn floor_linfrac(num: LinForm, den: LinForm, mode: RoundMode) -> Result<i64, ExactMathError> {
    if den.sign() != Ordering::Greater {
        return Err(ExactMathError::NonPositiveDenominator);
    }
    match mode {
        RoundMode::Floor => floor_of(num, den),
        // ⌈x⌉ = −⌊−x⌋
        RoundMode::Ceil => {
            let neg = LinForm::new(-num.a, -num.b);
            floor_of(neg, den).map(|k| -k)
        }
    }
}

fn floor_of(num: LinForm, den: LinForm) -> Result<i64, ExactMathError> {
    let bound: i64 = 4 * (num.a.abs() + num.b.abs() + den.a.abs() + den.b.abs()) + 8;
    // num − k·den >= 0, nonincreasing in k; the floor is the largest such k.
    let at_least = |k: i64| -> Ordering {
        let p = num.a as i128 - k as i128 * den.a as i128;
        let q = num.b as i128 - k as i128 * den.b as i128;
        sign_linform(p, q)
    };
    let (mut lo, mut hi);
    if at_least(0) != Ordering::Less {
        lo = 0;
        hi = 1;
        while at_least(hi) != Ordering::Less {
            lo = hi;
            if hi > bound {
                return Err(ExactMathError::BracketExceeded(bound));
            }
            hi = (2 * hi).min(bound + 1);
        }
    } else {
        hi = 0;
        lo = -1;
        while at_least(lo) == Ordering::Less {
            hi = lo;
            if lo < -bound {
                return Err(ExactMathError::BracketExceeded(bound));
            }
            lo = (2 * lo).max(-bound - 1);
        }
    }
    // invariant: at_least(lo) holds, at_least(hi) fails
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if at_least(mid) != Ordering::Less {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `⌊m·log3(2)⌋`, i.e. the k with `3^k ≤ 2^m < 3^(k+1)`.
pub fn floor_mul_log32(m: u64) -> u64 {
    let m = i64::try_from(m).expect("m fits i64");
    let k = floor_linfrac(LinForm::new(m, 0), LinForm::LOG2_3, RoundMode::Floor)
        .expect("λ > 0 and quotient below m");
    k as u64
}

/// Arbitrary-precision nonnegative count.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Count(BigUint);

impl Count {
    pub fn zero() -> Self {
        Count(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    /// `self − other`, clamped at zero.
    pub fn saturating_sub(&self, other: &Count) -> Count {
        if self.0 >= other.0 {
            Count(&self.0 - &other.0)
        } else {
            Count::zero()
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<BigUint> for Count {
    fn from(v: BigUint) -> Self {
        Count(v)
    }
}

impl Add for Count {
    type Output = Count;
    fn add(self, rhs: Count) -> Count {
        Count(self.0 + rhs.0)
    }
}

impl AddAssign<&Count> for Count {
    fn add_assign(&mut self, rhs: &Count) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Count> for Count {
    fn add_assign(&mut self, rhs: Count) {
        self.0 += rhs.0;
    }
}

impl Mul for &Count {
    type Output = Count;
    fn mul(self, rhs: &Count) -> Count {
        Count(&self.0 * &rhs.0)
    }
}

impl Sum for Count {
    fn sum<I: Iterator<Item = Count>>(iter: I) -> Count {
        let mut acc = Count::zero();
        for c in iter {
            acc += c;
        }
        acc
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Counts serialize as decimal strings so JSON stays exact at any magnitude.
impl Serialize for Count {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let v = s
            .parse::<BigUint>()
            .map_err(|e| D::Error::custom(format!("invalid count literal: {e}")))?;
        Ok(Count(v))
    }
}

/// Binomial coefficient C(n, k); zero outside `0 ≤ k ≤ n` so formula code
/// can mirror summation bounds literally.
pub fn binomial(n: u64, k: i64) -> Count {
    if k < 0 || k as u64 > n {
        return Count::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    Count(acc)
}

/// Exact integer square root `⌊√v⌋`.
pub fn isqrt(v: u128) -> u128 {
    v.sqrt()
}

/// Counts tuples `1 ≤ r_1 ≤ r_2 ≤ … ≤ r_e` with `r_i ≤ bounds[i]`.
///
/// `bounds` is given outermost-first (the bound on `r_1` first). An empty
/// sequence counts the empty tuple (1); any nonpositive bound empties the
/// whole sum. Dynamic programming over (position, last value) keeps the
/// cost at O(e · max bound) even though the depth is runtime data.
pub fn nested_nondecreasing_count(bounds: &[i64]) -> Count {
    if bounds.is_empty() {
        return Count(BigUint::one());
    }
    if bounds.iter().any(|&b| b <= 0) {
        return Count::zero();
    }
    let max_bound = *bounds.iter().max().expect("nonempty") as usize;
    // ways[v-1] = number of prefixes ending exactly at value v
    let mut ways: Vec<BigUint> = vec![BigUint::zero(); max_bound];
    let first = bounds[0] as usize;
    for slot in ways.iter_mut().take(first) {
        *slot = BigUint::one();
    }
    for &bound in &bounds[1..] {
        let bound = bound as usize;
        let mut next: Vec<BigUint> = vec![BigUint::zero(); max_bound];
        let mut run = BigUint::zero();
        for v in 0..max_bound {
            run += &ways[v];
            if v < bound {
                next[v] = run.clone();
            }
        }
        ways = next;
    }
    Count(ways.into_iter().sum())
}
