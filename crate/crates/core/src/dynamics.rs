//! Elementary Collatz maps and raw trajectory iteration.
//!
//! Values are fixed-width 128-bit with checked arithmetic: for every chain
//! length this library censuses, the worst-case value stays far below
//! 2^64, so 128 bits leaves a wide margin and overflow aborts loudly
//! instead of wrapping.

use thiserror::Error;

/// A trajectory value. Always ≥ 1 in valid positions.
pub type Value = u128;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("value {0} is not odd")]
    NotOdd(Value),
    #[error("value {0} is not even")]
    NotEven(Value),
    #[error("arithmetic overflow stepping from {0}")]
    Overflow(Value),
}

/// `3v + 1` for odd `v`. The result is always even.
pub fn a_step(v: Value) -> Result<Value, DynamicsError> {
    if v % 2 == 0 {
        return Err(DynamicsError::NotOdd(v));
    }
    v.checked_mul(3)
        .and_then(|w| w.checked_add(1))
        .ok_or(DynamicsError::Overflow(v))
}

/// `v / 2` for even `v`.
pub fn b_step(v: Value) -> Result<Value, DynamicsError> {
    if v % 2 == 1 {
        return Err(DynamicsError::NotEven(v));
    }
    Ok(v / 2)
}

/// Why [`run_until_below`] stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// First value below the threshold, with the number of halvings consumed.
    Descended { value: Value, b_steps: u64 },
    /// The halving budget ran out first.
    BudgetExhausted { last: Value },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOutcome {
    pub stop: StopReason,
    /// Minimum over every visited value, including the start.
    pub min_seen: Value,
}

/// Iterates the Collatz step from `v` until a value drops below `threshold`
/// or `max_b_steps` halvings have been consumed. The budget counts halvings
/// only, matching chain length.
pub fn run_until_below(
    v: Value,
    threshold: Value,
    max_b_steps: u64,
) -> Result<RunOutcome, DynamicsError> {
    let mut current = v;
    let mut min_seen = v;
    let mut b_steps = 0u64;
    loop {
        if current < threshold {
            return Ok(RunOutcome {
                stop: StopReason::Descended {
                    value: current,
                    b_steps,
                },
                min_seen,
            });
        }
        if b_steps == max_b_steps {
            return Ok(RunOutcome {
                stop: StopReason::BudgetExhausted { last: current },
                min_seen,
            });
        }
        if current % 2 == 1 {
            current = a_step(current)?;
            min_seen = min_seen.min(current);
        }
        current = b_step(current)?;
        min_seen = min_seen.min(current);
        b_steps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn a_step_examples() {
        assert_eq!(a_step(3), Ok(10));
        assert_eq!(a_step(1), Ok(4));
        assert_eq!(a_step(61), Ok(184));
        assert_eq!(a_step(4), Err(DynamicsError::NotOdd(4)));
        assert_eq!(a_step(u128::MAX), Err(DynamicsError::Overflow(u128::MAX)));
    }

    #[test]
    fn b_step_examples() {
        assert_eq!(b_step(10), Ok(5));
        assert_eq!(b_step(2), Ok(1));
        assert_eq!(b_step(184), Ok(92));
        assert_eq!(b_step(7), Err(DynamicsError::NotEven(7)));
    }

    #[test]
    fn run_reaches_one_from_three() {
        // orbit 3 → 10 → 5 → 16 → 8 → 4 → 2 → 1
        let out = run_until_below(3, 2, 100).unwrap();
        assert_eq!(
            out.stop,
            StopReason::Descended {
                value: 1,
                b_steps: 5
            }
        );
        assert_eq!(out.min_seen, 1);
    }

    #[test]
    fn run_already_below() {
        let out = run_until_below(1, 2, 0).unwrap();
        assert_eq!(
            out.stop,
            StopReason::Descended {
                value: 1,
                b_steps: 0
            }
        );
    }

    #[test]
    fn run_descends_within_budget() {
        // 13 → 40 → 20 → 10 → 5, three halvings to get below 8
        let out = run_until_below(13, 8, 3).unwrap();
        assert_eq!(
            out.stop,
            StopReason::Descended {
                value: 5,
                b_steps: 3
            }
        );
    }

    #[test]
    fn run_exhausts_budget() {
        let out = run_until_below(27, 2, 3).unwrap();
        // 27 → 82 → 41 → 124 → 62 → 31: three halvings used
        assert_eq!(out.stop, StopReason::BudgetExhausted { last: 31 });
        assert_eq!(out.min_seen, 27);
    }

    proptest! {
        #[test]
        fn composite_cell_map(v in (1u128..=(1 << 80)).prop_map(|v| 2 * v - 1)) {
            // B(A(v)) = (3v + 1)/2 for odd v, and A(v) is always even
            let after_a = a_step(v).unwrap();
            prop_assert_eq!(after_a % 2, 0);
            prop_assert_eq!(b_step(after_a).unwrap(), (3 * v + 1) / 2);
        }

        #[test]
        fn min_seen_bounds_everything(v in 1u128..=100_000, budget in 0u64..=64) {
            let out = run_until_below(v, 1, budget).unwrap();
            match out.stop {
                StopReason::Descended { value, .. } => prop_assert!(out.min_seen <= value),
                StopReason::BudgetExhausted { last } => prop_assert!(out.min_seen <= last),
            }
            prop_assert!(out.min_seen <= v);
        }
    }
}
