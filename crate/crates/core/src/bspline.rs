//! Uniform B-spline bases on an extended knot grid.
//!
//! A grid with `G` intervals on `[min, max]` and degree `K` has knots
//! `t_j = min + (j - K) * h` for `j = 0..=G + 2K`, `h = (max - min) / G`.
//! That yields exactly `G + K` basis functions, all of which are supported
//! somewhere inside `[min, max]`. Inputs outside the grid are not clamped:
//! the recursion is evaluated as-is and decays to zero past the outer knots.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct SplineGrid {
    grid_size: usize,
    degree: usize,
    domain_min: f64,
    domain_max: f64,
    knots: Vec<f64>,
}

impl Default for SplineGrid {
    /// `G = 5`, `K = 3` on `[-1, 1]`.
    fn default() -> Self {
        SplineGrid::new(5, 3, -1.0, 1.0).expect("default grid is valid")
    }
}

impl SplineGrid {
    pub fn new(grid_size: usize, degree: usize, domain_min: f64, domain_max: f64) -> Result<Self> {
        if grid_size == 0 {
            return Err(Error::InvalidArgument("grid_size must be at least 1".into()));
        }
        if !(domain_min.is_finite() && domain_max.is_finite()) || domain_min >= domain_max {
            return Err(Error::InvalidArgument(format!(
                "domain must satisfy min < max, got [{domain_min}, {domain_max}]"
            )));
        }
        let h = (domain_max - domain_min) / grid_size as f64;
        let n = grid_size + 2 * degree + 1;
        let mut knots: Vec<f64> = (0..n)
            .map(|j| domain_min + (j as f64 - degree as f64) * h)
            .collect();
        knots[degree] = domain_min;
        knots[grid_size + degree] = domain_max;
        Ok(SplineGrid {
            grid_size,
            degree,
            domain_min,
            domain_max,
            knots,
        })
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.domain_min, self.domain_max)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Knot spacing `h`.
    pub fn step(&self) -> f64 {
        (self.domain_max - self.domain_min) / self.grid_size as f64
    }

    /// Number of basis functions, `G + K`.
    pub fn basis_count(&self) -> usize {
        self.grid_size + self.degree
    }

    /// All basis values `B_{i,K}(x)` for `i in 0..G+K`.
    pub fn basis<T: Real>(&self, x: T) -> Result<Vec<T>> {
        check_finite(x)?;
        let mut ev = self.evaluator::<T>();
        let mut out = vec![T::zero(); self.basis_count()];
        ev.eval_into(x, &mut out);
        Ok(out)
    }

    /// Basis values for every entry of `xs`, one row per input.
    pub fn basis_batch<T: Real>(&self, xs: &[T]) -> Result<Array2<T>> {
        let nb = self.basis_count();
        let mut out = Array2::zeros((xs.len(), nb));
        let mut ev = self.evaluator::<T>();
        let flat = out.as_slice_mut().expect("fresh array is contiguous");
        for (x, row) in xs.iter().zip(flat.chunks_exact_mut(nb)) {
            check_finite(*x)?;
            ev.eval_into(*x, row);
        }
        Ok(out)
    }

    /// Derivatives `dB_{i,K}/dx`. Requires `K >= 1`.
    pub fn basis_derivative<T: Real>(&self, x: T) -> Result<Vec<T>> {
        if self.degree == 0 {
            return Err(Error::InvalidArgument(
                "basis derivative needs degree >= 1".into(),
            ));
        }
        check_finite(x)?;
        let mut ev = self.evaluator::<T>();
        let nb = self.basis_count();
        let mut val = vec![T::zero(); nb];
        let mut der = vec![T::zero(); nb];
        ev.eval_with_derivative_into(x, &mut val, &mut der);
        Ok(der)
    }

    /// Reusable evaluator holding knots converted to `T` plus scratch space.
    pub fn evaluator<T: Real>(&self) -> BasisEvaluator<T> {
        BasisEvaluator {
            knots: self.knots.iter().map(|&k| T::lit(k)).collect(),
            degree: self.degree,
            count: self.basis_count(),
            scratch: vec![T::zero(); self.grid_size + 2 * self.degree],
        }
    }
}

fn check_finite<T: Real>(x: T) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("spline input"))
    }
}

/// Allocation-free Cox-de Boor kernel. Callers are responsible for passing
/// finite inputs and output slices of length `G + K`.
#[derive(Debug, Clone)]
pub struct BasisEvaluator<T> {
    knots: Vec<T>,
    degree: usize,
    count: usize,
    scratch: Vec<T>,
}

impl<T: Real> BasisEvaluator<T> {
    pub fn basis_count(&self) -> usize {
        self.count
    }

    /// Degree-0 indicators over all knot intervals, then raises the degree
    /// in place up to `target`. Leaves `B_{i,target}` in `scratch[..n0 - target]`.
    #[inline]
    fn raise(&mut self, x: T, target: usize) {
        let t = &self.knots;
        let n0 = self.scratch.len();
        let s = &mut self.scratch;
        for i in 0..n0 {
            let inside = t[i] <= x && (x < t[i + 1] || (i + 1 == n0 && x == t[i + 1]));
            s[i] = if inside { T::one() } else { T::zero() };
        }
        for k in 1..=target {
            for i in 0..n0 - k {
                let left = (x - t[i]) / (t[i + k] - t[i]);
                let right = (t[i + k + 1] - x) / (t[i + k + 1] - t[i + 1]);
                s[i] = left * s[i] + right * s[i + 1];
            }
        }
    }

    #[inline]
    pub fn eval_into(&mut self, x: T, out: &mut [T]) {
        self.raise(x, self.degree);
        out.copy_from_slice(&self.scratch[..self.count]);
    }

    /// Basis values and their first derivatives in one pass.
    #[inline]
    pub fn eval_with_derivative_into(&mut self, x: T, val: &mut [T], der: &mut [T]) {
        let k = self.degree;
        if k == 0 {
            self.eval_into(x, val);
            der.fill(T::zero());
            return;
        }
        self.raise(x, k - 1);
        let t = &self.knots;
        let s = &self.scratch;
        let kf = T::lit(k as f64);
        for i in 0..self.count {
            let dl = t[i + k] - t[i];
            let dr = t[i + k + 1] - t[i + 1];
            der[i] = kf * (s[i] / dl - s[i + 1] / dr);
            val[i] = (x - t[i]) / dl * s[i] + (t[i + k + 1] - x) / dr * s[i + 1];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Textbook recursive Cox-de Boor definition, independent of the in-place kernel.
    fn oracle(knots: &[f64], i: usize, d: usize, x: f64) -> f64 {
        if d == 0 {
            let last = i + 2 == knots.len();
            return if knots[i] <= x && (x < knots[i + 1] || (last && x == knots[i + 1])) {
                1.0
            } else {
                0.0
            };
        }
        let a = (x - knots[i]) / (knots[i + d] - knots[i]) * oracle(knots, i, d - 1, x);
        let b = (knots[i + d + 1] - x) / (knots[i + d + 1] - knots[i + 1])
            * oracle(knots, i + 1, d - 1, x);
        a + b
    }

    #[test]
    fn grid_layout() {
        let g = SplineGrid::new(5, 3, -1.0, 1.0).unwrap();
        assert_eq!(g.knots().len(), 12);
        assert_eq!(g.basis_count(), 8);
        assert_eq!(g.knots()[3], -1.0);
        assert_eq!(g.knots()[8], 1.0);
        assert_abs_diff_eq!(g.knots()[0], -2.2, epsilon = 1e-12);
        assert_abs_diff_eq!(g.knots()[11], 2.2, epsilon = 1e-12);
        for w in g.knots().windows(2) {
            assert!(((w[1] - w[0]) - 0.4).abs() / 0.4 < 1e-12);
        }

        let g = SplineGrid::new(1, 0, 0.0, 1.0).unwrap();
        assert_eq!(g.knots(), &[0.0, 1.0]);
        assert_eq!(g.basis_count(), 1);
    }

    #[test]
    fn grid_rejects_bad_arguments() {
        assert!(matches!(
            SplineGrid::new(0, 3, -1.0, 1.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(SplineGrid::new(5, 3, 1.0, 1.0).is_err());
        assert!(SplineGrid::new(5, 3, 1.0, -1.0).is_err());
    }

    #[test]
    fn degree_zero_is_interval_indicator() {
        let g = SplineGrid::new(2, 0, 0.0, 1.0).unwrap();
        assert_eq!(g.basis(0.25f64).unwrap(), vec![1.0, 0.0]);
        assert_eq!(g.basis(1.0f64).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn matches_recursive_oracle_at_zero() {
        let g = SplineGrid::new(5, 3, -1.0, 1.0).unwrap();
        let b = g.basis(0.0f64).unwrap();
        for (i, v) in b.iter().enumerate() {
            assert_abs_diff_eq!(*v, oracle(g.knots(), i, 3, 0.0), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(b.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let g = SplineGrid::default();
        assert!(matches!(g.basis(f64::NAN), Err(Error::NonFinite(_))));
        assert!(g.basis_batch(&[0.0, f64::INFINITY]).is_err());
        assert!(g.basis_derivative(f64::NAN).is_err());
    }

    #[test]
    fn batch_edge_cases() {
        let g = SplineGrid::default();
        let empty = g.basis_batch::<f64>(&[]).unwrap();
        assert_eq!(empty.dim(), (0, 8));
        let twice = g.basis_batch(&[0.37f64, 0.37]).unwrap();
        assert_eq!(twice.row(0), twice.row(1));
    }

    #[test]
    fn derivative_edge_cases() {
        let g = SplineGrid::new(2, 0, 0.0, 1.0).unwrap();
        assert!(matches!(
            g.basis_derivative(0.3f64),
            Err(Error::InvalidArgument(_))
        ));

        // Hats of width 2h = 1: slopes -1/h and +1/h on the two active hats.
        let g = SplineGrid::new(2, 1, 0.0, 1.0).unwrap();
        let d = g.basis_derivative(0.25f64).unwrap();
        assert_abs_diff_eq!(d[0], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d[2], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let g = SplineGrid::new(5, 3, -1.0, 1.0).unwrap();
        let x = 0.3;
        let step = 1e-6;
        let d = g.basis_derivative(x).unwrap();
        let hi = g.basis(x + step).unwrap();
        let lo = g.basis(x - step).unwrap();
        for i in 0..d.len() {
            let fd = (hi[i] - lo[i]) / (2.0 * step);
            assert_abs_diff_eq!(d[i], fd, epsilon = 1e-6);
        }
        assert_abs_diff_eq!(d.iter().sum::<f64>(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn outside_outer_knots_is_zero() {
        let g = SplineGrid::default();
        assert!(g.basis(5.0f64).unwrap().iter().all(|&v| v == 0.0));
        assert!(g.basis(-2.5f64).unwrap().iter().all(|&v| v == 0.0));
        // Between the domain edge and the outer knot the tail is partial.
        let s: f64 = g.basis(1.5f64).unwrap().iter().sum();
        assert!(s > 0.0 && s < 1.0);
    }

    #[test]
    fn f32_evaluation_tracks_f64() {
        let g = SplineGrid::default();
        let a = g.basis(0.123f64).unwrap();
        let b = g.basis(0.123f32).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - *y as f64).abs() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn agrees_with_oracle(g in 1usize..8, k in 0usize..5, x in -3.0f64..3.0) {
            let grid = SplineGrid::new(g, k, -1.0, 1.0).unwrap();
            let b = grid.basis(x).unwrap();
            for (i, v) in b.iter().enumerate() {
                prop_assert!((v - oracle(grid.knots(), i, k, x)).abs() < 1e-12);
            }
        }

        #[test]
        fn partition_of_unity_inside_domain(g in 1usize..10, k in 0usize..5, u in 0.0f64..=1.0) {
            let grid = SplineGrid::new(g, k, -0.5, 2.0).unwrap();
            let x = -0.5 + 2.5 * u;
            let s: f64 = grid.basis(x).unwrap().iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-10);
        }
    }
}
