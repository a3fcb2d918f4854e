use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PearsonResult<T> {
    pub r: T,
    /// Two-sided, from Student's t with `n - 2` degrees of freedom.
    pub p_value: T,
    pub n: usize,
}

pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<PearsonResult<T>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewObservations {
            needed: 3,
            found: n,
        });
    }
    let nt = T::of_usize(n);
    let mx = x.iter().copied().sum::<T>() / nt;
    let my = y.iter().copied().sum::<T>() / nt;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy = sxy + da * db;
        sxx = sxx + da * da;
        syy = syy + db * db;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Err(Error::DegenerateVariance);
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt()))
        .max(-T::one())
        .min(T::one());
    let df = (n - 2) as f64;
    let rf = r.to_f64().expect("finite");
    let p = if rf.abs() >= 1.0 {
        0.0
    } else {
        let t = rf * (df / (1.0 - rf * rf)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
        (2.0 * dist.sf(t.abs())).min(1.0)
    };
    Ok(PearsonResult {
        r,
        p_value: T::of(p),
        n,
    })
}
