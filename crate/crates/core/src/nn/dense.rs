use ndarray::{Array1, Array2, ArrayView2, Axis, Zip};
use rand_distr::{Distribution, Uniform};

use crate::error::{Error, Result};
use crate::{seed, Real};

/// Affine map `y = x W^T + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer<T: Real> {
    /// `out x in`
    weight: Array2<T>,
    bias: Array1<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseGrads<T: Real> {
    pub weight: Array2<T>,
    pub bias: Array1<T>,
    pub input: Array2<T>,
}

impl<T: Real> DenseLayer<T> {
    /// Weight and bias drawn from `U(-1/sqrt(in), 1/sqrt(in))`.
    pub fn new(in_features: usize, out_features: usize, seed: u64) -> Result<Self> {
        if in_features == 0 || out_features == 0 {
            return Err(Error::InvalidArgument(format!(
                "dense layer dimensions must be >= 1, got {in_features}x{out_features}"
            )));
        }
        let mut rng = seed::rng(seed);
        let bound = 1.0 / (in_features as f64).sqrt();
        let dist = Uniform::new_inclusive(-bound, bound).expect("valid bounds");
        let weight = Array2::from_shape_simple_fn((out_features, in_features), || {
            T::lit(dist.sample(&mut rng))
        });
        let bias = Array1::from_shape_simple_fn(out_features, || T::lit(dist.sample(&mut rng)));
        Ok(DenseLayer { weight, bias })
    }

    pub fn from_parts(weight: Array2<T>, bias: Array1<T>) -> Result<Self> {
        if weight.nrows() != bias.len() {
            return Err(Error::shape("dense bias", weight.nrows(), bias.len()));
        }
        if weight.is_empty() {
            return Err(Error::InvalidArgument("empty dense layer".into()));
        }
        Ok(DenseLayer {
            weight: weight.as_standard_layout().into_owned(),
            bias,
        })
    }

    pub fn in_features(&self) -> usize {
        self.weight.ncols()
    }

    pub fn out_features(&self) -> usize {
        self.weight.nrows()
    }

    pub fn weight(&self) -> &Array2<T> {
        &self.weight
    }

    pub fn weight_mut(&mut self) -> &mut Array2<T> {
        &mut self.weight
    }

    pub fn bias(&self) -> &Array1<T> {
        &self.bias
    }

    pub fn bias_mut(&mut self) -> &mut Array1<T> {
        &mut self.bias
    }

    pub fn param_count(&self) -> usize {
        self.weight.len() + self.bias.len()
    }

    pub fn params(&self) -> Vec<&[T]> {
        vec![
            self.weight.as_slice().expect("standard layout"),
            self.bias.as_slice().expect("standard layout"),
        ]
    }

    pub fn params_mut(&mut self) -> Vec<&mut [T]> {
        vec![
            self.weight.as_slice_mut().expect("standard layout"),
            self.bias.as_slice_mut().expect("standard layout"),
        ]
    }

    pub fn forward(&self, x: ArrayView2<'_, T>) -> Result<Array2<T>> {
        if x.ncols() != self.in_features() {
            return Err(Error::shape("dense input columns", self.in_features(), x.ncols()));
        }
        let mut y = x.dot(&self.weight.t());
        y += &self.bias;
        Ok(y)
    }

    /// `dW = dy^T x`, `db = colsum(dy)`, `dx = dy W`. `x` is the forward input.
    pub fn backward(&self, x: ArrayView2<'_, T>, dy: ArrayView2<'_, T>) -> Result<DenseGrads<T>> {
        if dy.dim() != (x.nrows(), self.out_features()) {
            return Err(Error::shape("dense output gradient", (x.nrows(), self.out_features()), dy.dim()));
        }
        if x.ncols() != self.in_features() {
            return Err(Error::shape("dense input columns", self.in_features(), x.ncols()));
        }
        Ok(DenseGrads {
            weight: dy.t().dot(&x),
            bias: dy.sum_axis(Axis(0)),
            input: dy.dot(&self.weight),
        })
    }

    pub fn is_finite(&self) -> bool {
        self.weight.iter().chain(self.bias.iter()).all(|v| v.is_finite())
    }
}

impl<T: Real> DenseGrads<T> {
    pub fn slices(&self) -> Vec<&[T]> {
        vec![
            self.weight.as_slice().expect("standard layout"),
            self.bias.as_slice().expect("standard layout"),
        ]
    }
}

pub fn relu<T: Real>(x: ArrayView2<'_, T>) -> Array2<T> {
    x.mapv(|v| if v > T::zero() { v } else { T::zero() })
}

/// Passes `dy` where the pre-activation `x > 0`; zero elsewhere, including at 0.
pub fn relu_backward<T: Real>(x: ArrayView2<'_, T>, dy: ArrayView2<'_, T>) -> Result<Array2<T>> {
    if x.dim() != dy.dim() {
        return Err(Error::shape("relu gradient", x.dim(), dy.dim()));
    }
    let mut dx = dy.to_owned();
    Zip::from(&mut dx).and(&x).for_each(|d, &v| {
        if v <= T::zero() {
            *d = T::zero();
        }
    });
    Ok(dx)
}
