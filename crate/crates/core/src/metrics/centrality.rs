use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::scalar::Scalar;

pub const EIGEN_TOLERANCE: f64 = 1e-10;
pub const EIGEN_MAX_ITERATIONS: usize = 10_000;

/// Sources per parallel work unit. Fixed so that floating-point
/// accumulation order does not depend on the thread count.
const SOURCE_CHUNK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CentralityKind {
    Closeness,
    Betweenness,
    Eigenvector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `(r/(n-1)) * (r/sum of distances)` over the `r` reachable peers.
    ComponentCorrected,
    /// Pair dependencies divided by `(n-1)(n-2)/2`.
    PairCount,
    /// Unit Euclidean norm.
    UnitNorm,
    Raw,
}

/// Values indexed like the nodes of the graph they were computed on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityVector<T> {
    pub kind: CentralityKind,
    pub normalization: Normalization,
    pub values: Vec<T>,
}

impl<T: Scalar> CentralityVector<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::zero(), T::max)
    }
}

/// `(reachable peers, sum of distances)` for every node.
pub(crate) fn distance_profile(g: &SimpleGraph) -> Vec<(usize, u64)> {
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], VecDeque::with_capacity(n)),
            |(dist, queue), s| {
                g.bfs_into(s, dist, queue);
                dist.iter()
                    .filter(|&&d| d != u32::MAX && d > 0)
                    .fold((0usize, 0u64), |(r, sum), &d| (r + 1, sum + d as u64))
            },
        )
        .collect()
}

pub(crate) fn closeness_from_profile<T: Scalar>(profile: &[(usize, u64)]) -> CentralityVector<T> {
    let n = profile.len();
    let values = profile
        .iter()
        .map(|&(r, sum)| {
            if r == 0 {
                T::zero()
            } else {
                let r_t = T::of_usize(r);
                (r_t / T::of_usize(n - 1)) * (r_t / T::from_u64(sum).expect("u64 fits"))
            }
        })
        .collect();
    CentralityVector {
        kind: CentralityKind::Closeness,
        normalization: Normalization::ComponentCorrected,
        values,
    }
}

/// Component-corrected closeness; isolated nodes score 0.
pub fn closeness_all<T: Scalar>(g: &SimpleGraph) -> Result<CentralityVector<T>> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(closeness_from_profile(&distance_profile(g)))
}

/// Brandes betweenness over unordered pairs, divided by `(n-1)(n-2)/2`.
pub fn betweenness_all<T: Scalar>(g: &SimpleGraph) -> Result<CentralityVector<T>> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<T>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![T::zero(); n];
            let mut st = BrandesState::new(n);
            for &s in chunk {
                st.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![T::zero(); n];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t = *t + v;
        }
    }
    let values = if n < 3 {
        vec![T::zero(); n]
    } else {
        // Each unordered pair was visited from both ends.
        let denom = T::of_usize((n - 1) * (n - 2));
        total.into_iter().map(|v| v / denom).collect()
    };
    Ok(CentralityVector {
        kind: CentralityKind::Betweenness,
        normalization: Normalization::PairCount,
        values,
    })
}

struct BrandesState<T> {
    stack: Vec<usize>,
    preds: Vec<Vec<usize>>,
    sigma: Vec<T>,
    dist: Vec<i64>,
    delta: Vec<T>,
    queue: VecDeque<usize>,
}

impl<T: Scalar> BrandesState<T> {
    fn new(n: usize) -> Self {
        Self {
            stack: Vec::with_capacity(n),
            preds: vec![Vec::new(); n],
            sigma: vec![T::zero(); n],
            dist: vec![-1; n],
            delta: vec![T::zero(); n],
            queue: VecDeque::with_capacity(n),
        }
    }

    fn accumulate(&mut self, g: &SimpleGraph, s: usize, acc: &mut [T]) {
        for &v in &self.stack {
            self.preds[v].clear();
            self.sigma[v] = T::zero();
            self.dist[v] = -1;
            self.delta[v] = T::zero();
        }
        self.stack.clear();
        self.sigma[s] = T::one();
        self.dist[s] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.stack.push(v);
            for &w in g.neighbors(v) {
                if self.dist[w] < 0 {
                    self.dist[w] = self.dist[v] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] = self.sigma[w] + self.sigma[v];
                    self.preds[w].push(v);
                }
            }
        }
        for &w in self.stack.iter().rev() {
            let coeff = (T::one() + self.delta[w]) / self.sigma[w];
            for &v in &self.preds[w] {
                self.delta[v] = self.delta[v] + self.sigma[v] * coeff;
            }
            if w != s {
                acc[w] = acc[w] + self.delta[w];
            }
        }
    }
}

/// Principal eigenvector of the adjacency matrix on the largest component
/// (zeros elsewhere), by power iteration on `A + I` from a uniform start.
/// The shift keeps bipartite components from oscillating.
pub fn eigenvector_all<T: Scalar>(g: &SimpleGraph) -> Result<CentralityVector<T>> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let comp = g.largest_component();
    let m = comp.len();
    let mut local = vec![usize::MAX; n];
    for (i, &v) in comp.iter().enumerate() {
        local[v] = i;
    }
    let tol = T::of(EIGEN_TOLERANCE).max(T::epsilon() * T::of(16.0));
    let mut x = vec![T::one() / T::of_usize(m).sqrt(); m];
    let mut y = vec![T::zero(); m];
    let mut residual = T::infinity();
    for _ in 0..EIGEN_MAX_ITERATIONS {
        for (i, &v) in comp.iter().enumerate() {
            y[i] = x[i] + g.neighbors(v).iter().map(|&w| x[local[w]]).sum::<T>();
        }
        let norm = y.iter().map(|&a| a * a).sum::<T>().sqrt();
        residual = T::zero();
        for i in 0..m {
            let next = y[i] / norm;
            residual = residual.max((next - x[i]).abs());
            x[i] = next;
        }
        if residual < tol {
            let mut values = vec![T::zero(); n];
            for (i, &v) in comp.iter().enumerate() {
                values[v] = x[i];
            }
            return Ok(CentralityVector {
                kind: CentralityKind::Eigenvector,
                normalization: Normalization::UnitNorm,
                values,
            });
        }
    }
    Err(Error::Convergence {
        iterations: EIGEN_MAX_ITERATIONS,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// Freeman centralization: `sum(max - v_i)` over its star-graph maximum
/// for the same node count.
pub fn centralization<T: Scalar>(v: &CentralityVector<T>) -> Result<T> {
    let n = v.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty centrality vector".into()));
    }
    let bound = match (v.kind, v.normalization) {
        (CentralityKind::Closeness, Normalization::ComponentCorrected) => {
            if n >= 3 {
                T::of_usize((n - 1) * (n - 2)) / T::of_usize(2 * n - 3)
            } else {
                // The star bound vanishes; fall back to the largest spread
                // values in [0, 1] allow.
                T::of_usize(n - 1)
            }
        }
        (CentralityKind::Betweenness, Normalization::PairCount) => T::of_usize(n - 1),
        (kind, norm) => {
            return Err(Error::UnknownNormalization(format!("{kind:?}/{norm:?}")));
        }
    };
    if bound == T::zero() {
        return Ok(T::zero());
    }
    let max = v.max();
    let spread: T = v.values.iter().map(|&x| max - x).sum();
    Ok((spread / bound).min(T::one()).max(T::zero()))
}
