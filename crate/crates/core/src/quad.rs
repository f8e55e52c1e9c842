//! Quadrature rules shared by the kernel, contraction and spin modules.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Mul};

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            // Tricomi initial guess
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<T, F>(&self, a: f64, b: f64, mut f: F) -> T
    where
        T: Default + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        self.mapped(a, b)
            .fold(T::default(), |acc, (x, w)| acc + f(x) * w)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Outcome of an adaptive rule.
#[derive(Debug, Clone, Copy)]
pub struct QuadEstimate<T> {
    pub value: T,
    /// Difference between the last two refinement levels.
    pub error: f64,
    pub evaluations: usize,
}

/// Tanh–sinh (double exponential) rule on a finite interval.
///
/// The step is halved until two successive levels differ by at most
/// `abs_tol`, reusing every previously evaluated node.
#[derive(Debug, Clone, Copy)]
pub struct TanhSinh {
    pub abs_tol: f64,
    pub max_level: u32,
    /// Truncation of the transformed variable, |t| <= t_max.
    pub t_max: f64,
}

impl Default for TanhSinh {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            max_level: 10,
            t_max: 3.5,
        }
    }
}

impl TanhSinh {
    pub fn integrate<T, F, N>(&self, a: f64, b: f64, mut f: F, norm: N) -> QuadEstimate<T>
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T> + std::ops::Sub<Output = T>,
        F: FnMut(f64) -> T,
        N: Fn(T) -> f64,
    {
        let half = 0.5 * (b - a);
        let mut evaluations = 0usize;
        let mut node = |t: f64| -> T {
            let u = FRAC_PI_2 * t.sinh();
            let w = FRAC_PI_2 * t.cosh() / (u.cosh() * u.cosh());
            // distances to the endpoints, computed without cancellation
            let x = if t <= 0.0 {
                a + half * 2.0 / (1.0 + (-2.0 * u).exp())
            } else {
                b - half * 2.0 / (1.0 + (2.0 * u).exp())
            };
            if w < 1e-300 || x <= a || x >= b {
                return T::default();
            }
            evaluations += 1;
            f(x) * (half * w)
        };

        let mut step = 0.5;
        let kmax = (self.t_max / step).floor() as i64;
        let mut sum = node(0.0);
        for k in 1..=kmax {
            let t = k as f64 * step;
            sum = sum + node(t) + node(-t);
        }
        let mut estimate = sum * step;
        let mut error = f64::INFINITY;
        for _ in 0..self.max_level {
            step *= 0.5;
            let kmax = (self.t_max / step).floor() as i64;
            let mut k = 1;
            while k <= kmax {
                let t = k as f64 * step;
                sum = sum + node(t) + node(-t);
                k += 2;
            }
            let next = sum * step;
            error = norm(next - estimate);
            estimate = next;
            if error <= self.abs_tol {
                break;
            }
        }
        QuadEstimate {
            value: estimate,
            error,
            evaluations,
        }
    }
}

/// Polynomial extrapolation of `values[i] = F(steps[i])` to step zero
/// (Neville's scheme). Returns the diagonal of the tableau: entry `j` uses the
/// first `j + 1` samples.
pub fn extrapolate_to_zero(steps: &[f64], values: &[f64]) -> Vec<f64> {
    assert_eq!(steps.len(), values.len());
    let n = steps.len();
    let mut table = values.to_vec();
    let mut diagonal = Vec::with_capacity(n);
    // table[i] holds P_{i..=j}(0) after column j
    for j in 0..n {
        table[j] = values[j];
        for i in (0..j).rev() {
            let (hi, hj) = (steps[i], steps[j]);
            table[i] = (hj * table[i] - hi * table[i + 1]) / (hj - hi);
        }
        diagonal.push(table[0]);
    }
    diagonal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(5);
        // degree 9 is exact for 5 nodes
        let v: f64 = rule.integrate(-1.0, 2.0, |x| x.powi(9) - 3.0 * x.powi(4));
        let exact = (2f64.powi(10) - 1.0) / 10.0 - 3.0 * (32.0 + 1.0) / 5.0;
        assert!((v - exact).abs() < 1e-11, "{v} vs {exact}");
        let w: f64 = rule.mapped(-1.0, 1.0).map(|(_, w)| w).sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_large_rule_is_accurate() {
        let rule = GaussLegendre::new(120);
        let v: f64 = rule.integrate(0.0, PI, |x| (40.0 * x).cos().powi(2));
        assert!((v - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        let ts = TanhSinh::default();
        let r = ts.integrate(0.0, 1.0, |x: f64| 1.0 / x.sqrt(), |e| e.abs());
        assert!((r.value - 2.0).abs() < 1e-10, "{}", r.value);
        let r = ts.integrate(0.0, 3.0, |x: f64| (-x * x).exp(), |e| e.abs());
        let exact = 0.5 * PI.sqrt() * libm::erf(3.0);
        assert!((r.value - exact).abs() < 1e-14);
    }

    #[test]
    fn neville_recovers_polynomial_limit() {
        let steps = [0.4, 0.2, 0.1, 0.05];
        let values: Vec<f64> = steps.iter().map(|h| 1.5 + 2.0 * h - h * h * h).collect();
        let d = extrapolate_to_zero(&steps, &values);
        assert!((d[3] - 1.5).abs() < 1e-13);
    }
}
