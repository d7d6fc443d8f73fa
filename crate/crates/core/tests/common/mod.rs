//! Reference values computed without the crate's own Bessel code, plus
//! values frozen from an arbitrary-precision reference run.
#![allow(dead_code)]

use std::f64::consts::PI;

/// `J_l(x) = (1/π) ∫₀^π cos(lτ - x sin τ) dτ` by the trapezoid rule. The
/// integrand extends to an even periodic function, so the rule converges
/// geometrically once the node count passes `x + |l|`.
pub fn bessel_j(l: i32, x: f64) -> f64 {
    let m = 2 * (x.abs() as usize + l.unsigned_abs() as usize) + 80;
    let h = PI / m as f64;
    let f = |tau: f64| (l as f64 * tau - x * tau.sin()).cos();
    let mut s = 0.5 * (f(0.0) + f(PI));
    for i in 1..m {
        s += f(i as f64 * h);
    }
    s * h / PI
}

pub fn bessel_j_prime(l: i32, x: f64) -> f64 {
    0.5 * (bessel_j(l - 1, x) - bessel_j(l + 1, x))
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First `count` roots of `f` above 0.5, found by scanning with a fine step
/// and bisecting each sign change. Below 0.5 high orders drop under the
/// quadrature noise; no root of interest lives there.
fn scan_roots<F: Fn(f64) -> f64>(f: F, count: usize) -> Vec<f64> {
    let step = 0.02;
    let mut out = Vec::with_capacity(count);
    let mut a = 0.5;
    let mut fa = f(a);
    while out.len() < count {
        let b = a + step;
        let fb = f(b);
        if fa == 0.0 {
            out.push(a);
        } else if (fa < 0.0) != (fb < 0.0) {
            out.push(bisect(&f, a, b));
        }
        a = b;
        fa = fb;
    }
    out
}

pub fn dirichlet_zeros(l: i32, count: usize) -> Vec<f64> {
    scan_roots(|x| bessel_j(l, x), count)
}

pub fn robin_roots(l: i32, lambda: f64, count: usize) -> Vec<f64> {
    scan_roots(
        |x| x * bessel_j_prime(l, x) - lambda * bessel_j(l, x),
        count,
    )
}

/// Robin roots for `R = 1`, `λ = -1`, orders 0..=4, four per order.
pub const ROBIN_MINUS_ONE_ROOTS: [[f64; 4]; 5] = [
    [
        1.2557837117945936,
        4.079477710797353,
        7.155799174643979,
        10.270985361938866,
    ],
    [
        2.4048255576957724,
        5.520078110286311,
        8.653727912911013,
        11.791534439014281,
    ],
    [
        3.518324392875923,
        6.866263106438647,
        10.073040108397667,
        13.247702401360412,
    ],
    [
        4.612559973363119,
        8.157805707169137,
        11.439979548478536,
        14.657130900642299,
    ],
    [
        5.694314841515512,
        9.41275565929987,
        12.768909411146575,
        16.030693782587683,
    ],
];

/// Normalization constants matching [`ROBIN_MINUS_ONE_ROOTS`].
pub const ROBIN_MINUS_ONE_NORMS: [[f64; 4]; 5] = [
    [
        0.6864468289129233,
        1.402480914719564,
        1.880144728189577,
        2.259493118957672,
    ],
    [
        1.0867616361312724,
        1.6580897367973217,
        2.078411506171096,
        2.4270411805580046,
    ],
    [
        1.4205052555829303,
        1.8814062242587162,
        2.2598018481936415,
        2.5839079764190256,
    ],
    [
        1.7170921703135595,
        2.083979785749685,
        2.428632603449332,
        2.7321897681942717,
    ],
    [
        1.9888119382868357,
        2.2717062607083887,
        2.5876600969512884,
        2.873400585870329,
    ],
];

pub const FIRST_DIRICHLET_ZERO: f64 = 2.404825557695773;
pub const FIRST_NEUMANN_ROOT_L1: f64 = 1.841183781340659;

/// Projection residual of `(1 + c r²) + r (1 + d r²) cos θ` at `λ = -1`,
/// `R = 1`, for `n_max` = 4, 8, 12.
pub const COMPLETENESS_RESIDUALS: [(u32, f64); 3] = [
    (4, 4.902543924290284e-4),
    (8, 4.939054559870916e-5),
    (12, 1.2433981070018213e-5),
];

/// `φ(r)` at `t = 0` for the state `a(0,1) = 1` with `μ = 0`, `λ = -1`, `R = 1`.
pub const SINGLE_MODE_PROFILE: [(f64, f64); 10] = [
    (0.05, 0.8654387225276262),
    (0.15555555555555556, 0.8580477527599543),
    (0.2611111111111111, 0.8431628928675963),
    (0.36666666666666664, 0.8209798590424559),
    (0.4722222222222222, 0.7917899714447252),
    (0.5777777777777778, 0.7559758990902028),
    (0.6833333333333333, 0.7140060753559886),
    (0.788888888888889, 0.6664278697410951),
    (0.8944444444444445, 0.6138596205186797),
    (1.0, 0.5569816502664613),
];
