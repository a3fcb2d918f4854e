use serde::Serialize;

use super::centrality::{
    betweenness_all, centralization, closeness_from_profile, distance_profile, CentralityVector,
};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructureReport<T> {
    pub clustering: T,
    pub closeness_centralization: T,
    pub betweenness_centralization: T,
    /// Percentage of nodes in the largest component.
    pub main_component_share: T,
    /// Mean geodesic distance over ordered pairs reachable from each
    /// other; 0 when no pair is connected.
    pub average_path_length: T,
}

/// Transitivity: three times the triangle count over connected triples.
pub fn global_clustering<T: Scalar>(g: &SimpleGraph) -> T {
    let mut triangles = 0u64;
    for u in 0..g.node_count() {
        let nu = g.neighbors(u);
        for &v in nu.iter().filter(|&&v| v > u) {
            let nv = g.neighbors(v);
            // Common neighbours w > v, by merging sorted lists.
            let (mut i, mut j) = (0, 0);
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        if nu[i] > v {
                            triangles += 1;
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    let triples: u64 = (0..g.node_count())
        .map(|v| {
            let d = g.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    if triples == 0 {
        return T::zero();
    }
    T::from_u64(3 * triangles).expect("u64 fits") / T::from_u64(triples).expect("u64 fits")
}

pub fn main_component_share<T: Scalar>(g: &SimpleGraph) -> Result<T> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(T::hundred() * T::of_usize(g.largest_component().len()) / T::of_usize(g.node_count()))
}

fn path_length_from_profile<T: Scalar>(profile: &[(usize, u64)]) -> T {
    let (pairs, total) = profile
        .iter()
        .fold((0u64, 0u64), |(p, t), &(r, s)| (p + r as u64, t + s));
    if pairs == 0 {
        T::zero()
    } else {
        T::from_u64(total).expect("u64 fits") / T::from_u64(pairs).expect("u64 fits")
    }
}

pub fn average_path_length<T: Scalar>(g: &SimpleGraph) -> Result<T> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(path_length_from_profile(&distance_profile(g)))
}

pub fn structure_report<T: Scalar>(g: &SimpleGraph) -> Result<StructureReport<T>> {
    Ok(structure_with_centralities(g)?.0)
}

/// The structure report together with the closeness and betweenness
/// vectors it was derived from, sharing one all-pairs BFS pass.
pub fn structure_with_centralities<T: Scalar>(
    g: &SimpleGraph,
) -> Result<(StructureReport<T>, CentralityVector<T>, CentralityVector<T>)> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let profile = distance_profile(g);
    let closeness = closeness_from_profile::<T>(&profile);
    let betweenness = betweenness_all::<T>(g)?;
    let report = StructureReport {
        clustering: global_clustering(g),
        closeness_centralization: centralization(&closeness)?,
        betweenness_centralization: centralization(&betweenness)?,
        main_component_share: main_component_share(g)?,
        average_path_length: path_length_from_profile(&profile),
    };
    Ok((report, closeness, betweenness))
}
