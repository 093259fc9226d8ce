use ndarray::{Array2, ArrayView2, Zip};

use crate::error::{Error, Result};
use crate::Real;

/// Mean squared error over every entry (batch and features), with its
/// gradient `2 (x_hat - x) / (batch * d)` with respect to `x_hat`.
pub fn mse_loss<T: Real>(x_hat: ArrayView2<'_, T>, x: ArrayView2<'_, T>) -> Result<(T, Array2<T>)> {
    if x_hat.dim() != x.dim() {
        return Err(Error::shape("mse operands", x.dim(), x_hat.dim()));
    }
    let n = x.len();
    if n == 0 {
        return Ok((T::zero(), Array2::zeros(x.dim())));
    }
    let inv = T::one() / T::lit(n as f64);
    let mut grad = Array2::zeros(x.dim());
    let mut sum = T::zero();
    Zip::from(&mut grad).and(&x_hat).and(&x).for_each(|g, &a, &b| {
        let d = a - b;
        sum += d * d;
        *g = T::lit(2.0) * d * inv;
    });
    Ok((sum * inv, grad))
}
