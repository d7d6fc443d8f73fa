use thiserror::Error;

/// Iteration cap for [`refine_root`].
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("root refinement did not converge in {iterations} iterations (bracket [{lo}, {hi}])")]
    NotConverged { iterations: usize, lo: f64, hi: f64 },
    #[error("function returned a non-finite value at {0}")]
    NonFinite(f64),
}

/// Brent's method on a sign-changing bracket.
///
/// Terminates once the bracket half-width drops below
/// `2 ε |x| + tol / 2`, so `tol = 0` refines to a couple of ulps.
pub fn refine_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, RootError>
where
    F: FnMut(f64) -> f64,
{
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() {
        return Err(RootError::NonFinite(a));
    }
    if !fb.is_finite() {
        return Err(RootError::NonFinite(b));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITERATIONS {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when a == c
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
        if !fb.is_finite() {
            return Err(RootError::NonFinite(b));
        }
    }
    Err(RootError::NotConverged {
        iterations: MAX_ITERATIONS,
        lo: b.min(c),
        hi: b.max(c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_of_two() {
        let x = refine_root(|x| x * x - 2.0, 1.0, 2.0, 0.0).unwrap();
        assert!((x - std::f64::consts::SQRT_2).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn pi_from_sine() {
        let x = refine_root(f64::sin, 3.0, 4.0, 0.0).unwrap();
        assert!((x - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn rejects_bracket_without_sign_change() {
        let err = refine_root(|x| x * x + 1.0, -1.0, 1.0, 0.0).unwrap_err();
        assert!(matches!(err, RootError::NoSignChange { .. }));
    }

    #[test]
    fn endpoint_roots_are_returned() {
        assert_eq!(refine_root(|x| x - 1.0, 1.0, 2.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn reports_non_finite_values() {
        let err =
            refine_root(|x| if x > 0.5 { f64::NAN } else { x - 0.7 }, 0.0, 1.0, 0.0).unwrap_err();
        assert!(matches!(err, RootError::NonFinite(_)));
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| x.cos() - x;
        let a = refine_root(f, 0.0, 1.0, 0.0).unwrap();
        let b = refine_root(f, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
