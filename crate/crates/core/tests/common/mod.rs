//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use billnet::graph::SimpleGraph;
use billnet::ledger::{AgentRecord, BillId, BillRecord, Category, LedgerDataset, RegionCode, RegionTaxonomy};
use billnet::network::Transaction;
use billnet::nullmodels::TransactionTable;
use chrono::NaiveDate;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INF: usize = usize::MAX / 4;

pub fn adjacency(g: &SimpleGraph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

pub fn floyd_warshall(g: &SimpleGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let a = adjacency(g);
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if a[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

pub fn closeness(g: &SimpleGraph) -> Vec<f64> {
    let n = g.node_count();
    let d = floyd_warshall(g);
    (0..n)
        .map(|v| {
            let reach: Vec<usize> = (0..n).filter(|&u| u != v && d[v][u] < INF).map(|u| d[v][u]).collect();
            if reach.is_empty() {
                return 0.0;
            }
            let r = reach.len() as f64;
            (r / (n - 1) as f64) * (r / reach.iter().sum::<usize>() as f64)
        })
        .collect()
}

/// Every shortest path from `s` to `t`, as node sequences.
pub fn shortest_paths(g: &SimpleGraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    let d = floyd_warshall(g);
    let a = adjacency(g);
    let mut out = Vec::new();
    if d[s][t] >= INF {
        return out;
    }
    let mut path = vec![s];
    fn walk(a: &[Vec<bool>], d: &[Vec<usize>], t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        if u == t {
            out.push(path.clone());
            return;
        }
        for w in 0..a.len() {
            if a[u][w] && d[w][t] + 1 == d[u][t] {
                path.push(w);
                walk(a, d, t, path, out);
                path.pop();
            }
        }
    }
    walk(&a, &d, t, &mut path, &mut out);
    out
}

/// Pair dependencies over unordered pairs, by explicit path enumeration,
/// divided by `(n-1)(n-2)/2`.
pub fn betweenness(g: &SimpleGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let paths = shortest_paths(g, s, t);
            if paths.is_empty() {
                continue;
            }
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    b[v] += 1.0 / paths.len() as f64;
                }
            }
        }
    }
    if n > 2 {
        let norm = ((n - 1) * (n - 2)) as f64 / 2.0;
        b.iter_mut().for_each(|x| *x /= norm);
    }
    b
}

pub fn transitivity(g: &SimpleGraph) -> f64 {
    let n = g.node_count();
    let a = adjacency(g);
    let (mut closed, mut connected) = (0usize, 0usize);
    // Each connected triple is a centre with an unordered pair of neighbours.
    for c in 0..n {
        for i in 0..n {
            for j in i + 1..n {
                if i != c && j != c && a[c][i] && a[c][j] {
                    connected += 1;
                    if a[i][j] {
                        closed += 1;
                    }
                }
            }
        }
    }
    if connected == 0 {
        0.0
    } else {
        closed as f64 / connected as f64
    }
}

pub fn average_path_length(g: &SimpleGraph) -> f64 {
    let d = floyd_warshall(g);
    let n = g.node_count();
    let (mut sum, mut pairs) = (0usize, 0usize);
    for (i, row) in d.iter().enumerate().take(n) {
        for (j, &dist) in row.iter().enumerate().take(n) {
            if i != j && dist < INF {
                sum += dist;
                pairs += 1;
            }
        }
    }
    if pairs == 0 {
        0.0
    } else {
        sum as f64 / pairs as f64
    }
}

/// Leading eigenvector of the largest component's adjacency matrix, unit
/// norm and non-negative, zero elsewhere.
pub fn eigenvector(g: &SimpleGraph) -> Vec<f64> {
    let comp = g.largest_component();
    let k = comp.len();
    let a = adjacency(g);
    let m = DMatrix::<f64>::from_fn(k, k, |i, j| if a[comp[i]][comp[j]] { 1.0 } else { 0.0 });
    let eig = SymmetricEigen::new(m);
    let best = (0..k).max_by(|&i, &j| f64::total_cmp(&eig.eigenvalues[i], &eig.eigenvalues[j])).unwrap();
    let col = eig.eigenvectors.column(best);
    let total: f64 = col.iter().sum();
    let sign = if total < 0.0 { -1.0 } else { 1.0 };
    let mut out = vec![0.0; g.node_count()];
    for (i, &v) in comp.iter().enumerate() {
        out[v] = sign * col[i];
    }
    out
}

/// Random tree plus extra random edges: connected by construction.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> SimpleGraph {
    let n = rng.random_range(1..=max_nodes);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    let extra = rng.random_range(0..=n);
    for _ in 0..extra {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v {
            edges.push((u, v));
        }
    }
    SimpleGraph::unlabeled(n, edges)
}

pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, p: f64) -> SimpleGraph {
    let n = rng.random_range(1..=max_nodes);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::unlabeled(n, edges)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn agent(id: &str, category: Category, region: &str) -> AgentRecord {
    AgentRecord {
        agent_id: id.into(),
        name: format!("Agent {id}"),
        category,
        city: None,
        region: RegionCode::new(region),
    }
}

/// Dataset over the given `(drawer, acceptor, discounter)` triples; drawers
/// are placed in `region_of(drawer)`, everyone else in the UK.
pub fn dataset_with_regions(bills: &[(&str, &str, &str)], region_of: impl Fn(&str) -> String) -> LedgerDataset {
    let mut agents: std::collections::BTreeMap<String, AgentRecord> = Default::default();
    for &(d, a, k) in bills {
        agents.entry(d.into()).or_insert_with(|| agent(d, Category::NonFinancial, &region_of(d)));
        agents.entry(a.into()).or_insert_with(|| agent(a, Category::MerchantBank, "uk"));
        agents.entry(k.into()).or_insert_with(|| agent(k, Category::DiscountHouse, "uk"));
    }
    let bills = bills
        .iter()
        .enumerate()
        .map(|(i, &(d, a, k))| BillRecord {
            bill_id: BillId::new(format!("B{i:06}")),
            date: NaiveDate::from_ymd_opt(1906, 1, 2).unwrap(),
            amount_pence: 240 * 500,
            maturity_days: 60,
            discount_rate_bp: 400,
            drawer_id: d.into(),
            acceptor_id: a.into(),
            discounter_id: k.into(),
        })
        .collect();
    LedgerDataset::new(agents.into_values().collect(), bills, RegionTaxonomy::default(), "test").unwrap()
}

pub fn dataset(bills: &[(&str, &str, &str)]) -> LedgerDataset {
    dataset_with_regions(bills, |_| "uk".into())
}

/// Table with the given drawer row counts; acceptor and discounter columns
/// cycle through `n_a` and `n_d` ids, so every id appears when the table
/// is long enough.
pub fn cycling_table(drawer_rows: &[usize], n_a: usize, n_d: usize) -> TransactionTable {
    let mut rows = Vec::new();
    let mut i = 0usize;
    for (d, &k) in drawer_rows.iter().enumerate() {
        for _ in 0..k {
            rows.push(Transaction {
                bill_id: BillId::new(format!("B{i:06}")),
                drawer: format!("D{d:05}").as_str().into(),
                acceptor: format!("A{:05}", i % n_a).as_str().into(),
                discounter: format!("K{:05}", i % n_d).as_str().into(),
            });
            i += 1;
        }
    }
    let acc = (0..n_a).map(|j| format!("A{j:05}").as_str().into()).collect();
    let disc = (0..n_d).map(|j| format!("K{j:05}").as_str().into()).collect();
    TransactionTable::new(rows, acc, disc).unwrap()
}

/// Drawer row counts of the ratio fixture: 558 x 2, 239 x 3, 158 x 4,
/// 286 drawers cycling through 5..=9 and 140 drawers in the 10+ bin,
/// 6,715 rows in total.
pub fn ratio_fixture_rows() -> Vec<usize> {
    let mut v = vec![2; 558];
    v.extend(std::iter::repeat_n(3, 239));
    v.extend(std::iter::repeat_n(4, 158));
    v.extend((0..286).map(|i| 5 + i % 5));
    v.extend(std::iter::repeat_n(16, 130));
    v.extend(std::iter::repeat_n(17, 10));
    v
}
