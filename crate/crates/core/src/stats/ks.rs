use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const SERIES_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult<T> {
    pub d: T,
    /// Asymptotic p-value.
    pub p_value: T,
    pub n_x: usize,
    pub n_y: usize,
}

fn sorted<T: Scalar>(x: &[T]) -> Result<Vec<T>> {
    if x.is_empty() {
        return Err(Error::EmptySample);
    }
    if x.iter().any(|v| v.is_nan()) {
        return Err(Error::NanInSample);
    }
    let mut v = x.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    Ok(v)
}

/// Largest gap between the right-continuous empirical CDFs, evaluated at
/// every distinct pooled value.
pub fn ks_two_sample<T: Scalar>(x: &[T], y: &[T]) -> Result<KsResult<T>> {
    let xs = sorted(x)?;
    let ys = sorted(y)?;
    let (nx, ny) = (xs.len(), ys.len());
    let (mut i, mut j) = (0, 0);
    let mut d = T::zero();
    while i < nx && j < ny {
        let t = if xs[i] <= ys[j] { xs[i] } else { ys[j] };
        while i < nx && xs[i] <= t {
            i += 1;
        }
        while j < ny && ys[j] <= t {
            j += 1;
        }
        let gap = (T::of_usize(i) / T::of_usize(nx) - T::of_usize(j) / T::of_usize(ny)).abs();
        d = d.max(gap);
    }
    // Once one sample is exhausted its CDF is 1; the other's only grows,
    // so the gap right after the last shared step is already counted.
    Ok(KsResult {
        d,
        p_value: ks_p_value(d, nx, ny),
        n_x: nx,
        n_y: ny,
    })
}

/// Asymptotic p-value for statistic `d` with effective size `nx*ny/(nx+ny)`.
pub fn ks_p_value<T: Scalar>(d: T, nx: usize, ny: usize) -> T {
    let ne = T::of_usize(nx) * T::of_usize(ny) / T::of_usize(nx + ny);
    kolmogorov_sf(ne.sqrt() * d)
}

/// Survival function of the Kolmogorov distribution, `P(K > lambda)`.
pub fn kolmogorov_sf<T: Scalar>(lambda: T) -> T {
    if lambda <= T::zero() {
        return T::one();
    }
    let eps = T::of(SERIES_EPS);
    let p = if lambda < T::of(1.18) {
        // Jacobi-theta form of the CDF converges fast for small lambda.
        let pi = T::of(std::f64::consts::PI);
        let c = pi * pi / (T::of(8.0) * lambda * lambda);
        let mut sum = T::zero();
        let mut k = 1usize;
        loop {
            let odd = T::of_usize(2 * k - 1);
            let term = (-(odd * odd) * c).exp();
            sum = sum + term;
            if term < eps || k > 100 {
                break;
            }
            k += 1;
        }
        T::one() - (T::of(2.0) * pi).sqrt() / lambda * sum
    } else {
        let mut sum = T::zero();
        let mut k = 1usize;
        loop {
            let kt = T::of_usize(k);
            let term = (-T::of(2.0) * kt * kt * lambda * lambda).exp();
            sum = if k % 2 == 1 { sum + term } else { sum - term };
            if term < eps || k > 100 {
                break;
            }
            k += 1;
        }
        T::of(2.0) * sum
    };
    p.max(T::zero()).min(T::one())
}
