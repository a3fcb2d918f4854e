use serde::Serialize;

use crate::error::{Error, Result};
use crate::ledger::AgentId;
use crate::network::{Role, TriadNetwork};

/// Bucket labels: exact zero, then ten deciles closed on the right.
pub const PEER_BUCKETS: [&str; 11] = [
    "0", "0-10", "10-20", "20-30", "30-40", "40-50", "50-60", "60-70", "70-80", "80-90", "90-100",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharedPeerDistribution {
    pub role: Role,
    /// Per actor, percentage of fellow actors sharing at least one drawer.
    pub actors: Vec<(AgentId, f64)>,
    pub histogram: [usize; 11],
}

impl SharedPeerDistribution {
    pub fn values(&self) -> Vec<f64> {
        self.actors.iter().map(|a| a.1).collect()
    }

    pub fn zero_share_pct(&self) -> f64 {
        100.0 * self.histogram[0] as f64 / self.actors.len() as f64
    }
}

fn bucket(x: f64) -> usize {
    if x <= 0.0 {
        0
    } else {
        ((x / 10.0).ceil() as usize).clamp(1, 10)
    }
}

pub fn shared_peer_distribution(n: &TriadNetwork, role: Role) -> Result<SharedPeerDistribution> {
    if role == Role::Drawer {
        return Err(Error::InvalidArgument(
            "shared peers are defined for acceptors and discounters".into(),
        ));
    }
    let portfolios = n.drawer_portfolios(role);
    let m = portfolios.len();
    if m < 2 {
        return Err(Error::RoleTooSmall {
            role: role.name(),
            found: m,
            needed: 2,
        });
    }
    let mut by_drawer: Vec<Vec<usize>> = vec![Vec::new(); n.node_count()];
    for (&actor, drawers) in &portfolios {
        for &d in drawers {
            by_drawer[d].push(actor);
        }
    }
    let mut histogram = [0usize; 11];
    // seen[p] == actor marks p as already counted for this actor.
    let mut seen = vec![usize::MAX; n.node_count()];
    let actors = portfolios
        .iter()
        .map(|(&actor, drawers)| {
            seen[actor] = actor;
            let mut peers = 0usize;
            for &d in drawers {
                for &p in &by_drawer[d] {
                    if seen[p] != actor {
                        seen[p] = actor;
                        peers += 1;
                    }
                }
            }
            let x = 100.0 * peers as f64 / (m - 1) as f64;
            histogram[bucket(x)] += 1;
            (n.ids()[actor].clone(), x)
        })
        .collect();
    Ok(SharedPeerDistribution {
        role,
        actors,
        histogram,
    })
}
