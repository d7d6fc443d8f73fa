use super::quadrature::QuadratureError;

/// Largest node count accepted by [`gauss_legendre`].
pub const MAX_GAUSS_NODES: usize = 4096;

/// Gauss-Legendre nodes and weights mapped onto `[a, b]`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect();
        super::pairwise_sum(&terms)
    }
}

/// Legendre `P_n(x)` and `P'_n(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `n`-point Gauss-Legendre rule on `[a, b]`, exact for degree `2n - 1`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<GaussLegendre, QuadratureError> {
    if n == 0 || n > MAX_GAUSS_NODES {
        return Err(QuadratureError::NodeCount {
            requested: n,
            max: MAX_GAUSS_NODES,
        });
    }
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(QuadratureError::Interval { a, b });
    }
    let mut x_ref = vec![0.0; n];
    let mut w_ref = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess for the (i+1)-th largest root
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5);
        let nf = n as f64;
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1e-3) {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        x_ref[n - 1 - i] = x;
        x_ref[i] = -x;
        w_ref[n - 1 - i] = w;
        w_ref[i] = w;
    }
    if n % 2 == 1 {
        x_ref[n / 2] = 0.0;
    }
    let mid = 0.5 * (a + b);
    let half_len = 0.5 * (b - a);
    Ok(GaussLegendre {
        nodes: x_ref.iter().map(|x| mid + half_len * x).collect(),
        weights: w_ref.iter().map(|w| half_len * w).collect(),
    })
}
