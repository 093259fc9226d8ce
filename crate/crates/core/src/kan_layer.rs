//! A single KAN layer.
//!
//! Each edge `i -> j` computes
//! `phi_ji(x) = use_base * w_ji * silu(x) + sum_m c_jim * B_m(x)`
//! and output `j` sums its incoming edges. Evaluation expands the input batch
//! into basis values (`batch x in*(G+K)`) and multiplies by the coefficient
//! tensor viewed as `out x in*(G+K)`; the `batch x out x in` intermediate is
//! never formed.

use ndarray::{Array2, Array3, ArrayView2, ArrayViewMut2, Zip};
use rand_distr::{Distribution, Normal, Uniform};

use crate::bspline::SplineGrid;
use crate::error::{Error, Result};
use crate::{seed, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct KanLayer<T: Real> {
    in_features: usize,
    out_features: usize,
    grid: SplineGrid,
    /// `out x in x (G+K)`
    spline_coeff: Array3<T>,
    /// `out x in`; all zero and not trained when `use_base` is off.
    base_weight: Array2<T>,
    use_base: bool,
}

/// What [`KanLayer::backward`] needs from the forward pass.
#[derive(Debug, Clone)]
pub struct KanCache<T> {
    input: Array2<T>,
    /// `batch x in*(G+K)`
    basis: Array2<T>,
    /// `silu(input)`, present when the base path is on.
    silu: Option<Array2<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KanLayerGrads<T: Real> {
    pub spline_coeff: Array3<T>,
    pub base_weight: Array2<T>,
    /// `batch x in`; only filled when requested.
    pub input_grad: Option<Array2<T>>,
}

#[inline]
fn sigmoid<T: Real>(t: T) -> T {
    T::one() / (T::one() + (-t).exp())
}

#[inline]
pub(crate) fn silu<T: Real>(t: T) -> T {
    t * sigmoid(t)
}

#[inline]
pub(crate) fn silu_grad<T: Real>(t: T) -> T {
    let s = sigmoid(t);
    s * (T::one() + t * (T::one() - s))
}

impl<T: Real> KanLayer<T> {
    /// Seeded initialization: base weights `U(-1/sqrt(in), 1/sqrt(in))`,
    /// spline coefficients `N(0, 0.1/sqrt(in))`.
    pub fn new(
        in_features: usize,
        out_features: usize,
        grid: SplineGrid,
        use_base: bool,
        seed: u64,
    ) -> Result<Self> {
        if in_features == 0 || out_features == 0 {
            return Err(Error::InvalidArgument(format!(
                "KAN layer dimensions must be >= 1, got {in_features}x{out_features}"
            )));
        }
        let mut rng = seed::rng(seed);
        let scale = 1.0 / (in_features as f64).sqrt();
        let uniform = Uniform::new_inclusive(-scale, scale).expect("valid bounds");
        let normal = Normal::new(0.0, 0.1 * scale).expect("valid std");
        let nb = grid.basis_count();
        let mut base_weight =
            Array2::from_shape_simple_fn((out_features, in_features), || {
                T::lit(uniform.sample(&mut rng))
            });
        if !use_base {
            base_weight.fill(T::zero());
        }
        let spline_coeff = Array3::from_shape_simple_fn((out_features, in_features, nb), || {
            T::lit(normal.sample(&mut rng))
        });
        Ok(KanLayer {
            in_features,
            out_features,
            grid,
            spline_coeff,
            base_weight,
            use_base,
        })
    }

    /// Builds a layer from explicit tensors.
    pub fn from_parts(
        grid: SplineGrid,
        spline_coeff: Array3<T>,
        base_weight: Array2<T>,
        use_base: bool,
    ) -> Result<Self> {
        let (out_f, in_f, nb) = spline_coeff.dim();
        if nb != grid.basis_count() {
            return Err(Error::shape("spline coefficients", grid.basis_count(), nb));
        }
        if base_weight.dim() != (out_f, in_f) {
            return Err(Error::shape("base weight", (out_f, in_f), base_weight.dim()));
        }
        if in_f == 0 || out_f == 0 {
            return Err(Error::InvalidArgument("empty KAN layer".into()));
        }
        Ok(KanLayer {
            in_features: in_f,
            out_features: out_f,
            grid,
            spline_coeff: spline_coeff.as_standard_layout().into_owned(),
            base_weight: base_weight.as_standard_layout().into_owned(),
            use_base,
        })
    }

    pub fn in_features(&self) -> usize {
        self.in_features
    }

    pub fn out_features(&self) -> usize {
        self.out_features
    }

    pub fn grid(&self) -> &SplineGrid {
        &self.grid
    }

    pub fn use_base(&self) -> bool {
        self.use_base
    }

    pub fn spline_coeff(&self) -> &Array3<T> {
        &self.spline_coeff
    }

    pub fn spline_coeff_mut(&mut self) -> &mut Array3<T> {
        &mut self.spline_coeff
    }

    pub fn base_weight(&self) -> &Array2<T> {
        &self.base_weight
    }

    pub fn base_weight_mut(&mut self) -> &mut Array2<T> {
        &mut self.base_weight
    }

    /// Trainable scalars: `in*out*(G+K)`, plus `in*out` with the base path.
    pub fn param_count(&self) -> usize {
        self.spline_coeff.len() + if self.use_base { self.base_weight.len() } else { 0 }
    }

    /// Trainable tensors in declaration order (coefficients, then base weights).
    pub fn params(&self) -> Vec<&[T]> {
        let mut v = vec![self.spline_coeff.as_slice().expect("standard layout")];
        if self.use_base {
            v.push(self.base_weight.as_slice().expect("standard layout"));
        }
        v
    }

    pub fn params_mut(&mut self) -> Vec<&mut [T]> {
        let mut v = vec![self.spline_coeff.as_slice_mut().expect("standard layout")];
        if self.use_base {
            v.push(self.base_weight.as_slice_mut().expect("standard layout"));
        }
        v
    }

    fn coeff_matrix(&self) -> ArrayView2<'_, T> {
        let nb = self.grid.basis_count();
        self.spline_coeff
            .view()
            .into_shape_with_order((self.out_features, self.in_features * nb))
            .expect("standard layout")
    }

    /// Basis-then-matmul evaluation. Returns `batch x out` and the cache for
    /// [`KanLayer::backward`].
    pub fn forward(&self, x: ArrayView2<'_, T>) -> Result<(Array2<T>, KanCache<T>)> {
        let (batch, cols) = x.dim();
        if cols != self.in_features {
            return Err(Error::shape("KAN input columns", self.in_features, cols));
        }
        let input = x.as_standard_layout().into_owned();
        let flat = input.as_slice().expect("standard layout");
        if !flat.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("KAN layer input"));
        }
        let nb = self.grid.basis_count();
        let basis = self
            .grid
            .basis_batch(flat)?
            .into_shape_with_order((batch, self.in_features * nb))
            .expect("contiguous basis matrix");
        let mut y = basis.dot(&self.coeff_matrix().t());
        let silu_x = if self.use_base {
            let s = input.mapv(silu);
            ndarray::linalg::general_mat_mul(T::one(), &s, &self.base_weight.t(), T::one(), &mut y);
            Some(s)
        } else {
            None
        };
        Ok((
            y,
            KanCache {
                input,
                basis,
                silu: silu_x,
            },
        ))
    }

    /// Forward pass without keeping a cache.
    pub fn apply(&self, x: ArrayView2<'_, T>) -> Result<Array2<T>> {
        self.forward(x).map(|(y, _)| y)
    }

    /// Analytic gradients of `sum(dy * forward(x))` with respect to the
    /// coefficients, the base weights and (if `want_input_grad`) the input.
    pub fn backward(
        &self,
        cache: &KanCache<T>,
        dy: ArrayView2<'_, T>,
        want_input_grad: bool,
    ) -> Result<KanLayerGrads<T>> {
        let batch = cache.input.nrows();
        if dy.dim() != (batch, self.out_features) {
            return Err(Error::shape("KAN output gradient", (batch, self.out_features), dy.dim()));
        }
        let nb = self.grid.basis_count();
        let spline_coeff = dy
            .t()
            .dot(&cache.basis)
            .into_shape_with_order((self.out_features, self.in_features, nb))
            .expect("contiguous gradient");
        let base_weight = match &cache.silu {
            Some(s) => dy.t().dot(s),
            None => Array2::zeros((self.out_features, self.in_features)),
        };

        let input_grad = if want_input_grad {
            Some(self.input_grad(cache, dy)?)
        } else {
            None
        };
        Ok(KanLayerGrads {
            spline_coeff,
            base_weight,
            input_grad,
        })
    }

    fn input_grad(&self, cache: &KanCache<T>, dy: ArrayView2<'_, T>) -> Result<Array2<T>> {
        let (batch, in_f) = cache.input.dim();
        let nb = self.grid.basis_count();
        let mut dx = Array2::<T>::zeros((batch, in_f));
        if self.grid.degree() > 0 {
            // g[b, i*nb + m] = sum_j dy[b, j] * c[j, i, m]
            let g = dy.dot(&self.coeff_matrix());
            let g = g.as_slice().expect("standard layout");
            let mut ev = self.grid.evaluator::<T>();
            let mut val = vec![T::zero(); nb];
            let mut der = vec![T::zero(); nb];
            let xs = cache.input.as_slice().expect("standard layout");
            let out = dx.as_slice_mut().expect("standard layout");
            for (idx, (&x, o)) in xs.iter().zip(out.iter_mut()).enumerate() {
                ev.eval_with_derivative_into(x, &mut val, &mut der);
                let gi = &g[idx * nb..(idx + 1) * nb];
                *o = gi.iter().zip(&der).map(|(&a, &b)| a * b).sum();
            }
        }
        if self.use_base {
            let gb = dy.dot(&self.base_weight);
            Zip::from(&mut dx)
                .and(&gb)
                .and(&cache.input)
                .for_each(|d, &g, &x| *d += g * silu_grad(x));
        }
        Ok(dx)
    }

    /// `sum |c| + use_base * sum |w|`.
    pub fn l1_penalty(&self) -> T {
        let c: T = self.spline_coeff.iter().map(|v| v.abs()).sum();
        if self.use_base {
            c + self.base_weight.iter().map(|v| v.abs()).sum()
        } else {
            c
        }
    }

    /// Adds `lambda * sign(param)` (with `sign(0) = 0`) to `grads`.
    pub fn add_l1_subgradient(&self, grads: &mut KanLayerGrads<T>, lambda: T) {
        let sign = |v: T| {
            if v > T::zero() {
                T::one()
            } else if v < T::zero() {
                -T::one()
            } else {
                T::zero()
            }
        };
        Zip::from(&mut grads.spline_coeff)
            .and(&self.spline_coeff)
            .for_each(|g, &p| *g += lambda * sign(p));
        if self.use_base {
            Zip::from(&mut grads.base_weight)
                .and(&self.base_weight)
                .for_each(|g, &p| *g += lambda * sign(p));
        }
    }

    pub fn is_finite(&self) -> bool {
        self.spline_coeff.iter().all(|v| v.is_finite())
            && self.base_weight.iter().all(|v| v.is_finite())
    }
}

impl<T: Real> KanLayerGrads<T> {
    /// Gradient tensors in the same order as [`KanLayer::params`].
    pub fn slices(&self, use_base: bool) -> Vec<&[T]> {
        let mut v = vec![self.spline_coeff.as_slice().expect("standard layout")];
        if use_base {
            v.push(self.base_weight.as_slice().expect("standard layout"));
        }
        v
    }

    pub fn take_input_grad(&mut self) -> Option<Array2<T>> {
        self.input_grad.take()
    }

    pub fn input_grad_mut(&mut self) -> Option<ArrayViewMut2<'_, T>> {
        self.input_grad.as_mut().map(|g| g.view_mut())
    }
}

/// Number of edge activations for a chain of layer widths:
/// `N_0*N_1 + N_1*N_2 + ... + N_{n-1}*N_n`.
pub fn count_activations(layer_widths: &[usize]) -> Result<usize> {
    if layer_widths.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two layer widths".into(),
        ));
    }
    if layer_widths.contains(&0) {
        return Err(Error::InvalidArgument("layer widths must be positive".into()));
    }
    Ok(layer_widths.windows(2).map(|w| w[0] * w[1]).sum())
}

/// Spline coefficients for `n_activations` edges: `(G + K) * N_a`.
pub fn count_spline_params(grid_size: usize, degree: usize, n_activations: usize) -> usize {
    (grid_size + degree) * n_activations
}
