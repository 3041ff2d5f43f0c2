//! Small quadrature utilities: cached Gauss-Legendre rules and tensor
//! Chebyshev surrogate models for smooth functions on boxes.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n).or_insert_with(|| {
        let rule = compute_gauss_legendre(n);
        Box::leak(Box::new(rule))
    })
}

fn compute_gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrates `f` over the rectangle `[x0-rx, x0+rx] x [y0-ry, y0+ry]` with a
/// tensor Gauss-Legendre rule of the given order per axis.
pub fn integrate_box(
    order: usize,
    center: [f64; 2],
    half: [f64; 2],
    mut f: impl FnMut(f64, f64) -> f64,
) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let mut total = 0.0;
    for (xi, wx) in nodes.iter().zip(weights) {
        let x = center[0] + half[0] * xi;
        for (yi, wy) in nodes.iter().zip(weights) {
            let y = center[1] + half[1] * yi;
            total += wx * wy * f(x, y);
        }
    }
    total * half[0] * half[1]
}

/// Tensor Chebyshev interpolant of a smooth scalar function on a box,
/// evaluated barycentrically. Used as a cheap surrogate for expensive smooth
/// quantities (the partition normalizer) inside small boxes.
#[derive(Debug, Clone)]
pub struct ChebModel {
    center: [f64; 2],
    half: [f64; 2],
    n: usize,
    nodes: Vec<f64>,
    bary: Vec<f64>,
    values: Vec<f64>,
}

impl ChebModel {
    /// Fits an `n x n` Chebyshev-Gauss interpolant by sampling `f`.
    pub fn fit(
        n: usize,
        center: [f64; 2],
        half: [f64; 2],
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Self {
        assert!(n >= 2);
        let nodes: Vec<f64> = (0..n)
            .map(|k| (std::f64::consts::PI * (2.0 * k as f64 + 1.0) / (2.0 * n as f64)).cos())
            .collect();
        // Barycentric weights for Chebyshev points of the first kind.
        let bary: Vec<f64> = (0..n)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * (std::f64::consts::PI * (2.0 * k as f64 + 1.0) / (2.0 * n as f64)).sin()
            })
            .collect();
        let mut values = vec![0.0; n * n];
        for (i, &xi) in nodes.iter().enumerate() {
            for (k, &yk) in nodes.iter().enumerate() {
                values[i * n + k] = f(center[0] + half[0] * xi, center[1] + half[1] * yk);
            }
        }
        ChebModel {
            center,
            half,
            n,
            nodes,
            bary,
            values,
        }
    }

    fn weights_1d(&self, t: f64) -> (Option<usize>, Vec<f64>) {
        // Returns either an exact node hit or barycentric weights.
        let mut w = vec![0.0; self.n];
        for (k, &xk) in self.nodes.iter().enumerate() {
            let d = t - xk;
            if d == 0.0 {
                return (Some(k), w);
            }
            w[k] = self.bary[k] / d;
        }
        (None, w)
    }

    /// Evaluates the interpolant; arguments outside the box extrapolate.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let tx = (x - self.center[0]) / self.half[0];
        let ty = (y - self.center[1]) / self.half[1];
        let (hitx, wx) = self.weights_1d(tx);
        let (hity, wy) = self.weights_1d(ty);
        match (hitx, hity) {
            (Some(i), Some(k)) => self.values[i * self.n + k],
            (Some(i), None) => {
                let mut num = 0.0;
                let mut den = 0.0;
                for k in 0..self.n {
                    num += wy[k] * self.values[i * self.n + k];
                    den += wy[k];
                }
                num / den
            }
            (None, Some(k)) => {
                let mut num = 0.0;
                let mut den = 0.0;
                for i in 0..self.n {
                    num += wx[i] * self.values[i * self.n + k];
                    den += wx[i];
                }
                num / den
            }
            (None, None) => {
                let mut num = 0.0;
                let mut den = 0.0;
                for i in 0..self.n {
                    let mut row = 0.0;
                    for k in 0..self.n {
                        row += wy[k] * self.values[i * self.n + k];
                    }
                    num += wx[i] * row;
                    den += wx[i];
                }
                let deny: f64 = wy.iter().sum();
                num / (den * deny)
            }
        }
    }
}
