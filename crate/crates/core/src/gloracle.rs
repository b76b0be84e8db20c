//! Independent numerical oracle for the modified left Riemann-Liouville
//! derivative on uniform 1-D grids, via the Grunwald-Letnikov scheme.
//!
//! The base-point modification is honored by subtracting the sample at the
//! grid origin before the binomial convolution, so constants map to zero
//! exactly and the operator is invariant under constant shifts. Every
//! symbolic rule in [`crate::fracfield`] is validated against this module.

use crate::fracfield::{FieldError, FractionalOrder};

/// Uniform grid starting at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    step: f64,
    count: usize,
}

impl Grid1D {
    pub fn new(step: f64, count: usize) -> Result<Self, FieldError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(FieldError::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        if count < 2 {
            return Err(FieldError::DimensionMismatch {
                expected: 2,
                got: count,
            });
        }
        Ok(Grid1D { step, count })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn horizon(&self) -> f64 {
        self.step * (self.count - 1) as f64
    }

    pub fn point(&self, index: usize) -> f64 {
        self.step * index as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }
}

/// Function samples over a [`Grid1D`].
#[derive(Debug, Clone)]
pub struct SampledFunction {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self, FieldError> {
        if values.len() != grid.count() {
            return Err(FieldError::DimensionMismatch {
                expected: grid.count(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(FieldError::DimensionMismatch {
                expected: grid.count(),
                got: 0,
            });
        }
        Ok(SampledFunction { grid, values })
    }

    pub fn sample(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self, FieldError> {
        let values = grid.points().map(&f).collect();
        SampledFunction::new(grid, values)
    }
}

/// Grunwald-Letnikov binomial weights: `w_0 = 1`,
/// `w_k = w_{k-1} (1 - (alpha+1)/k)`.
pub fn gl_weights(alpha: FractionalOrder, n: usize) -> Vec<f64> {
    let a = alpha.value();
    let mut w = Vec::with_capacity(n);
    if n == 0 {
        return w;
    }
    w.push(1.0);
    for k in 1..n {
        let prev = w[k - 1];
        w.push(prev * (1.0 - (a + 1.0) / k as f64));
    }
    w
}

/// Discrete fractional derivative:
/// `out[j] = step^{-alpha} * sum_{k=0..j} w_k (f[j-k] - f[0])`.
pub fn gl_frac_derivative(f: &SampledFunction, alpha: FractionalOrder) -> SampledFunction {
    let n = f.grid.count();
    let w = gl_weights(alpha, n);
    let scale = f.grid.step().powf(-alpha.value());
    let base = f.values[0];
    let mut out = vec![0.0; n];
    for (j, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (k, wk) in w.iter().take(j + 1).enumerate() {
            acc += wk * (f.values[j - k] - base);
        }
        *slot = scale * acc;
    }
    SampledFunction {
        grid: f.grid,
        values: out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracfield::{frac_partial, gamma, GenPolynomial};
    use std::collections::BTreeMap;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn weights_first_difference_at_order_one() {
        let w = gl_weights(FractionalOrder::ONE, 4);
        assert_eq!(w, vec![1.0, -1.0, 0.0, 0.0]);
    }

    #[test]
    fn weights_half_order() {
        let w = gl_weights(order(0.5), 3);
        assert!((w[1] + 0.5).abs() < 1e-15);
        // Frozen by unrolling the recurrence: w_2 = w_1 (1 - 1.5/2).
        assert!((w[2] + 0.125).abs() < 1e-15);
    }

    #[test]
    fn constant_maps_to_zero() {
        let grid = Grid1D::new(0.01, 101).unwrap();
        let f = SampledFunction::sample(grid, |_| 3.7).unwrap();
        let d = gl_frac_derivative(&f, order(0.5));
        assert!(d.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn output_starts_at_zero() {
        let grid = Grid1D::new(0.1, 8).unwrap();
        let f = SampledFunction::sample(grid, |t| t * t + 1.0).unwrap();
        let d = gl_frac_derivative(&f, order(0.7));
        assert_eq!(d.values[0], 0.0);
    }

    /// Max relative error against the symbolic power rule on the interior
    /// region `t >= lo`.
    fn power_rule_rel_error(gamma_exp: f64, a: f64, step: f64, lo: f64) -> f64 {
        let count = (1.0 / step).round() as usize + 1;
        let grid = Grid1D::new(step, count).unwrap();
        let f = SampledFunction::sample(grid, |t| t.powf(gamma_exp)).unwrap();
        let d = gl_frac_derivative(&f, order(a));
        let sym = frac_partial(
            &GenPolynomial::var_pow("t", gamma_exp).unwrap(),
            "t",
            order(a),
        )
        .unwrap();
        let mut worst = 0.0f64;
        for (j, t) in grid.points().enumerate() {
            if t < lo {
                continue;
            }
            let mut pt = BTreeMap::new();
            pt.insert("t".to_string(), t);
            let exact = sym.eval(&pt).unwrap();
            let rel = ((d.values[j] - exact) / exact).abs();
            worst = worst.max(rel);
        }
        worst
    }

    #[test]
    fn matches_power_rule_on_quadratic() {
        // D^{0.5} t^2 = Γ(3)/Γ(2.5) t^{1.5}; frozen ratio 1.5045055561273501.
        let ratio = gamma(3.0).unwrap() / gamma(2.5).unwrap();
        assert!((ratio - 1.504_505_556_127_350_1).abs() < 1e-14);
        assert!(power_rule_rel_error(2.0, 0.5, 1e-3, 0.5) <= 1e-2);
    }

    #[test]
    fn classical_limit_backward_difference() {
        let step = 1e-3;
        let grid = Grid1D::new(step, 1001).unwrap();
        let f = SampledFunction::sample(grid, |t| t * t).unwrap();
        let d = gl_frac_derivative(&f, FractionalOrder::ONE);
        for (j, t) in grid.points().enumerate().skip(1) {
            assert!((d.values[j] - 2.0 * t).abs() <= 2.0 * step);
        }
    }

    #[test]
    fn refinement_reduces_error() {
        for &(g, a) in &[(2.0, 0.5), (1.0, 0.3), (2.5, 0.8), (0.5, 0.5)] {
            let coarse = power_rule_rel_error(g, a, 2e-3, 0.5);
            let fine = power_rule_rel_error(g, a, 1e-3, 0.5);
            assert!(fine < coarse, "gamma={g} alpha={a}: {fine} !< {coarse}");
        }
    }

    #[test]
    fn linearity_and_shift_invariance() {
        let grid = Grid1D::new(0.01, 201).unwrap();
        let f = SampledFunction::sample(grid, |t| t.powf(1.5)).unwrap();
        let g = SampledFunction::sample(grid, |t| t * t).unwrap();
        let combo = SampledFunction::new(
            grid,
            f.values
                .iter()
                .zip(&g.values)
                .map(|(a, b)| 2.0 * a - 3.0 * b)
                .collect(),
        )
        .unwrap();
        let a = order(0.6);
        let d_combo = gl_frac_derivative(&combo, a);
        let d_f = gl_frac_derivative(&f, a);
        let d_g = gl_frac_derivative(&g, a);
        for j in 0..grid.count() {
            let lin = 2.0 * d_f.values[j] - 3.0 * d_g.values[j];
            assert!((d_combo.values[j] - lin).abs() < 1e-9);
        }

        let shifted = SampledFunction::new(grid, f.values.iter().map(|v| v + 11.25).collect())
            .unwrap();
        let d_shifted = gl_frac_derivative(&shifted, a);
        for j in 0..grid.count() {
            assert!((d_shifted.values[j] - d_f.values[j]).abs() < 1e-10);
        }
    }
}
