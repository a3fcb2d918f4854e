use serde::Serialize;

use super::ks::{ks_two_sample, KsResult};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Significance threshold reported in comparison summaries.
pub const P_THRESHOLD: f64 = 0.001;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleComparison<T> {
    pub results: Vec<KsResult<T>>,
    pub d_min: T,
    pub d_mean: T,
    pub d_max: T,
    pub p_min: T,
    pub p_max: T,
    pub threshold: T,
    pub p_below_count: usize,
}

/// The compact JSON shape written to `ks_summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonSummary {
    pub variant: String,
    #[serde(rename = "D_min")]
    pub d_min: f64,
    #[serde(rename = "D_mean")]
    pub d_mean: f64,
    #[serde(rename = "D_max")]
    pub d_max: f64,
    pub p_below_0_001_count: usize,
    pub replicates: usize,
}

impl<T: Scalar> EnsembleComparison<T> {
    pub fn summary(&self, variant: &str) -> ComparisonSummary {
        let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
        ComparisonSummary {
            variant: variant.to_string(),
            d_min: f(self.d_min),
            d_mean: f(self.d_mean),
            d_max: f(self.d_max),
            p_below_0_001_count: self.p_below_count,
            replicates: self.results.len(),
        }
    }
}

/// KS test of `observed` against every replicate sample.
pub fn compare_to_ensemble<T: Scalar>(
    observed: &[T],
    ensemble: &[Vec<T>],
) -> Result<EnsembleComparison<T>> {
    if ensemble.is_empty() {
        return Err(Error::InvalidArgument("empty ensemble".into()));
    }
    let results = ensemble
        .iter()
        .enumerate()
        .map(|(i, rep)| {
            ks_two_sample(observed, rep).map_err(|e| Error::Replicate {
                index: i,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let threshold = T::of(P_THRESHOLD);
    let ds = results.iter().map(|r| r.d);
    let ps = results.iter().map(|r| r.p_value);
    Ok(EnsembleComparison {
        d_min: ds.clone().fold(T::infinity(), T::min),
        d_mean: ds.clone().sum::<T>() / T::of_usize(results.len()),
        d_max: ds.fold(T::neg_infinity(), T::max),
        p_min: ps.clone().fold(T::infinity(), T::min),
        p_max: ps.fold(T::neg_infinity(), T::max),
        threshold,
        p_below_count: results.iter().filter(|r| r.p_value < threshold).count(),
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copies_of_observed() {
        let obs = vec![0.5, 1.0, 1.0, 2.0];
        let c = compare_to_ensemble(&obs, &[obs.clone(), obs.clone(), obs.clone()]).unwrap();
        assert_eq!((c.d_min, c.d_mean, c.d_max), (0.0, 0.0, 0.0));
        assert_eq!(c.p_below_count, 0);
    }

    #[test]
    fn constant_apart() {
        let c = compare_to_ensemble(&[0.0; 50], &[vec![1.0; 50], vec![1.0; 40]]).unwrap();
        assert!(c.results.iter().all(|r| r.d == 1.0));
        assert_eq!(c.p_below_count, 2);
        let s = c.summary("uniform");
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"variant":"uniform","D_min":1.0,"D_mean":1.0,"D_max":1.0,"p_below_0_001_count":2,"replicates":2}"#
        );
    }

    #[test]
    fn empty_inputs() {
        assert!(compare_to_ensemble::<f64>(&[1.0], &[]).is_err());
        assert!(matches!(
            compare_to_ensemble(&[1.0], &[vec![]]),
            Err(Error::Replicate { index: 0, .. })
        ));
    }
}
