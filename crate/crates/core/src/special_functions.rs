//! Bessel functions of the first kind for integer order.
//!
//! Small arguments (where every term of the ascending series is smaller
//! than the previous one by at least a factor of two) use the power series
//! directly. Everything else goes through Miller's backward recurrence,
//! normalised with the Neumann sum `J_0 + 2 Σ J_2k = 1`. The backward
//! recurrence is stable for the minimal solution, so relative accuracy holds
//! for orders above the argument as well as below it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest `|order|` accepted by the public evaluators.
pub const ORDER_CAP: i32 = 64;

/// Largest argument accepted by the public evaluators.
pub const ARGUMENT_CAP: f64 = 200.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BesselError {
    #[error("Bessel order {order} exceeds the order cap {cap}")]
    OrderCap { order: i32, cap: i32 },
    #[error("non-finite Bessel argument {0}")]
    NonFinite(f64),
    #[error("negative Bessel argument {0}")]
    NegativeArgument(f64),
    #[error("Bessel argument {x} exceeds the argument cap {cap}")]
    ArgumentCap { x: f64, cap: f64 },
}

/// Value and derivative of `J_order` at one argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselEval {
    pub order: i32,
    pub argument: f64,
    pub value: f64,
    pub derivative: f64,
}

fn check(order: i32, x: f64) -> Result<(), BesselError> {
    if !x.is_finite() {
        return Err(BesselError::NonFinite(x));
    }
    if x < 0.0 {
        return Err(BesselError::NegativeArgument(x));
    }
    if order.abs() > ORDER_CAP {
        return Err(BesselError::OrderCap {
            order,
            cap: ORDER_CAP,
        });
    }
    if x > ARGUMENT_CAP {
        return Err(BesselError::ArgumentCap {
            x,
            cap: ARGUMENT_CAP,
        });
    }
    Ok(())
}

fn parity_sign(order: i32) -> f64 {
    if order.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `J_order(x)`.
pub fn bessel_j(order: i32, x: f64) -> Result<f64, BesselError> {
    check(order, x)?;
    let m = order.unsigned_abs() as usize;
    Ok(parity_sign(order.min(0)) * j_nonnegative(m, x))
}

/// `J'_order(x)`, from `J'_l = (J_{l-1} - J_{l+1}) / 2`.
pub fn bessel_j_prime(order: i32, x: f64) -> Result<f64, BesselError> {
    Ok(bessel_eval(order, x)?.derivative)
}

/// Value and derivative from a single recurrence pass.
pub fn bessel_eval(order: i32, x: f64) -> Result<BesselEval, BesselError> {
    check(order, x)?;
    let m = order.unsigned_abs() as usize;
    let (below, at, above) = j_triplet(m, x);
    let derivative = if m == 0 {
        -above
    } else {
        0.5 * (below - above)
    };
    let sign = parity_sign(order.min(0));
    Ok(BesselEval {
        order,
        argument: x,
        value: sign * at,
        derivative: sign * derivative,
    })
}

/// Whether the ascending series is used for order `m` at `x`.
fn series_region(m: usize, x: f64) -> bool {
    0.25 * x * x <= 0.5 * (m as f64 + 1.0)
}

/// Ascending power series for `J_m(x)`, `m >= 0`.
fn j_series(m: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for i in 1..=m {
        lead *= half / i as f64;
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        term *= q / (k as f64 * (m + k) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Miller backward recurrence returning `J_0..=J_top` at `x > 0`.
fn j_miller(top: usize, x: f64) -> Vec<f64> {
    let scale = (top as f64).max(x);
    let mut start = (scale + 30.0 + (60.0 * scale).sqrt()) as usize;
    start += start % 2;
    let mut out = vec![0.0; top + 1];
    let two_over_x = 2.0 / x;
    let mut next = 0.0;
    let mut cur = 1e-30;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        // cur = J_k, next = J_{k+1} (unnormalised)
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
        let order = k - 1;
        if order <= top {
            out[order] = cur;
        }
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * cur;
        }
    }
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

fn j_nonnegative(m: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    if series_region(m, x) {
        return j_series(m, x);
    }
    j_miller(m, x)[m]
}

/// `(J_{m-1}, J_m, J_{m+1})` for `m >= 0`, with `J_{-1} = -J_1`.
pub(crate) fn j_triplet(m: usize, x: f64) -> (f64, f64, f64) {
    if x == 0.0 {
        let v = |k: usize| if k == 0 { 1.0 } else { 0.0 };
        return (if m == 0 { 0.0 } else { v(m - 1) }, v(m), 0.0);
    }
    let low = m.saturating_sub(1);
    if series_region(low, x) {
        let at = j_series(m, x);
        let above = j_series(m + 1, x);
        let below = if m == 0 { -above } else { j_series(m - 1, x) };
        return (below, at, above);
    }
    let seq = j_miller(m + 1, x);
    let below = if m == 0 { -seq[1] } else { seq[m - 1] };
    (below, seq[m], seq[m + 1])
}
