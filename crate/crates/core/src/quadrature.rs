//! One-dimensional rules and deterministic summation.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::Result;
use crate::quat::Quaternion;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
///
/// Newton iteration on `P_n` from the Tricomi initial guess; accurate to a few
/// ulps for the node counts used here (up to a few hundred).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|xi| mid + half * xi).collect(),
        w.iter().map(|wi| half * wi).collect(),
    )
}

/// Equal-weight rule for a periodic integrand over one period `[a, b)`.
pub fn periodic_trapezoid(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "trapezoid rule needs at least one node");
    let h = (b - a) / n as f64;
    ((0..n).map(|k| a + k as f64 * h).collect(), vec![h; n])
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct QuaternionSum([CompensatedSum; 4]);

impl QuaternionSum {
    pub fn add(&mut self, q: Quaternion) {
        for (acc, c) in self.0.iter_mut().zip(q.to_array()) {
            acc.add(c);
        }
    }

    pub fn value(&self) -> Quaternion {
        Quaternion::new(
            self.0[0].value(),
            self.0[1].value(),
            self.0[2].value(),
            self.0[3].value(),
        )
    }
}

/// Fixed chunk length for parallel reductions. Results do not depend on the
/// number of worker threads because chunk boundaries and the order in which
/// chunk sums are combined are both fixed.
pub const REDUCTION_CHUNK: usize = 2048;

/// Sum `term(item)` over `items` with a thread-count independent result.
pub fn ordered_sum<T, F>(items: &[T], term: F) -> Result<Quaternion>
where
    T: Sync,
    F: Fn(&T) -> Result<Quaternion> + Sync,
{
    let partials: Vec<Result<Quaternion>> = items
        .par_chunks(REDUCTION_CHUNK)
        .map(|chunk| {
            let mut acc = QuaternionSum::default();
            for item in chunk {
                acc.add(term(item)?);
            }
            Ok(acc.value())
        })
        .collect();
    let mut total = QuaternionSum::default();
    for p in partials {
        total.add(p?);
    }
    Ok(total.value())
}
