use rand::seq::index;

use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheckReport {
    pub max_rel_error: f64,
    /// Parameter index with the largest error.
    pub worst_index: usize,
    pub checked: usize,
}

impl GradCheckReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_rel_error <= tol
    }
}

/// `|a - n| / max(1, |a| + |n|)`
pub fn rel_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / 1f64.max(analytic.abs() + numeric.abs())
}

/// Compares `analytic` against central differences of `f` around `params`.
///
/// With `subsample = Some((n, seed))` and more than `n` parameters, only `n`
/// distinct entries chosen by `seed` are probed.
pub fn grad_check(
    mut f: impl FnMut(&[f64]) -> f64,
    params: &[f64],
    analytic: &[f64],
    step: f64,
    subsample: Option<(usize, u64)>,
) -> GradCheckReport {
    assert_eq!(params.len(), analytic.len(), "gradient length must match parameters");
    assert!(step > 0.0, "step must be positive");
    let indices: Vec<usize> = match subsample {
        Some((n, s)) if params.len() > n => {
            let mut rng = seed::rng(s);
            let mut v = index::sample(&mut rng, params.len(), n).into_vec();
            v.sort_unstable();
            v
        }
        _ => (0..params.len()).collect(),
    };
    let mut probe = params.to_vec();
    let mut report = GradCheckReport {
        max_rel_error: 0.0,
        worst_index: 0,
        checked: indices.len(),
    };
    for &i in &indices {
        let orig = probe[i];
        probe[i] = orig + step;
        let up = f(&probe);
        probe[i] = orig - step;
        let dn = f(&probe);
        probe[i] = orig;
        let err = rel_error(analytic[i], (up - dn) / (2.0 * step));
        if err > report.max_rel_error || err.is_nan() {
            report.max_rel_error = if err.is_nan() { f64::INFINITY } else { err };
            report.worst_index = i;
        }
    }
    report
}
