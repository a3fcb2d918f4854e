mod common;

use std::collections::BTreeMap;

use billnet::concentration::{hhi, top_k_share, ShareVector};
use billnet::graph::SimpleGraph;
use billnet::ledger::{parse_ledger, write_agents_csv, write_bills_csv};
use billnet::metrics::{ad_ratio_repartition, betweenness_all, closeness_all, shared_peer_distribution, ALL_BIN_LABEL};
use billnet::network::{build_network, Direction, EdgeKind, Role, Weighting};
use billnet::nullmodels::{make_table, simulate_degree_preserving, simulate_uniform};
use billnet::stats::{ks_two_sample, pearson};
use proptest::prelude::*;

type Triple = (String, String, String);

/// Triples over small id pools so that actors recur. Drawers, acceptors
/// and discounters share the `X` pool so that some nodes hold two roles.
fn triples() -> impl Strategy<Value = Vec<Triple>> {
    let id = |p: &'static str, n: u8| (0..n).prop_map(move |i| format!("{p}{i}"));
    prop::collection::vec(
        (
            prop_oneof![id("D", 8), id("X", 2)],
            prop_oneof![id("A", 5), id("X", 2)],
            id("K", 4),
        ),
        1..40,
    )
}

fn refs(v: &[Triple]) -> Vec<(&str, &str, &str)> {
    v.iter().map(|(d, a, k)| (d.as_str(), a.as_str(), k.as_str())).collect()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn link_weights_conserve_bills(t in triples()) {
        let n = build_network(&common::dataset(&refs(&t))).unwrap();
        for kind in [EdgeKind::DrawerAcceptor, EdgeKind::AcceptorDiscounter] {
            let total: u64 = n.links().iter().filter(|l| l.kind == kind).map(|l| l.weight).sum();
            prop_assert_eq!(total as usize, t.len());
        }
    }

    #[test]
    fn binary_degree_bounded_by_transactions(t in triples()) {
        let n = build_network(&common::dataset(&refs(&t))).unwrap();
        for v in 0..n.node_count() {
            for dir in [Direction::In, Direction::Out, Direction::All] {
                let b = n.degree_at(v, dir, Weighting::Binary, None);
                let w = n.degree_at(v, dir, Weighting::Transaction, None);
                prop_assert!(b <= w);
            }
        }
    }

    #[test]
    fn projection_is_idempotent(t in triples()) {
        let n = build_network(&common::dataset(&refs(&t))).unwrap();
        let g = n.undirected_projection();
        let again = SimpleGraph::from_edges(g.labels().to_vec(), g.edges());
        prop_assert_eq!(&again, g);
    }

    #[test]
    fn duplicate_bill_leaves_projection(t in triples(), pick in any::<prop::sample::Index>()) {
        let mut dup = t.clone();
        dup.push(t[pick.index(t.len())].clone());
        let a = build_network(&common::dataset(&refs(&t))).unwrap();
        let b = build_network(&common::dataset(&refs(&dup))).unwrap();
        prop_assert_eq!(a.undirected_projection(), b.undirected_projection());
    }

    #[test]
    fn relabeling_keeps_metric_multisets(t in triples()) {
        // Reversing the id order is a bijection that reorders every node.
        let flip = |s: &str| format!("z{}", s.chars().map(|c| if c.is_ascii_digit() { (b'9' - c as u8 + b'0') as char } else { c }).collect::<String>());
        let relabeled: Vec<Triple> = t.iter().map(|(d, a, k)| (flip(d), flip(a), flip(k))).collect();
        let ga = build_network(&common::dataset(&refs(&t))).unwrap();
        let gb = build_network(&common::dataset(&refs(&relabeled))).unwrap();
        let (pa, pb) = (ga.undirected_projection(), gb.undirected_projection());
        let cl = |g| sorted(closeness_all::<f64>(g).unwrap().values);
        let bt = |g| sorted(betweenness_all::<f64>(g).unwrap().values);
        for (x, y) in cl(pa).iter().zip(cl(pb)) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in bt(pa).iter().zip(bt(pb)) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn repartition_rows_are_consistent(t in triples()) {
        let n = build_network(&common::dataset(&refs(&t))).unwrap();
        let Ok(r) = ad_ratio_repartition(&n) else { return Ok(()) };
        let mut binned = 0;
        for row in &r.rows {
            if row.drawers > 0 {
                let s = row.more_discounters_pct + row.equal_pct + row.fewer_discounters_pct;
                prop_assert!((s - 100.0).abs() < 1e-9);
            }
            if row.bin != ALL_BIN_LABEL {
                binned += row.drawers;
            }
        }
        prop_assert_eq!(binned, r.row(ALL_BIN_LABEL).unwrap().drawers);
        prop_assert_eq!(binned, n.multi_transaction_drawers().len());
    }

    #[test]
    fn shared_peer_share_in_range(t in triples()) {
        let n = build_network(&common::dataset(&refs(&t))).unwrap();
        for role in [Role::Acceptor, Role::Discounter] {
            if let Ok(s) = shared_peer_distribution(&n, role) {
                prop_assert!(s.values().iter().all(|x| (0.0..=100.0).contains(x)));
                prop_assert_eq!(s.histogram.iter().sum::<usize>(), s.actors.len());
            }
        }
    }

    #[test]
    fn simulators_keep_drawer_column(t in triples(), seed in any::<u64>()) {
        let n = build_network(&common::dataset(&refs(&t))).unwrap();
        let Ok(table) = make_table(&n) else { return Ok(()) };
        let u = simulate_uniform(&table, seed);
        let d = simulate_degree_preserving(&table, seed);
        prop_assert!(u.drawer_column().eq(table.drawer_column()));
        prop_assert!(d.drawer_column().eq(table.drawer_column()));
        prop_assert_eq!(d.acceptor_counts(), table.acceptor_counts());
        prop_assert_eq!(d.discounter_counts(), table.discounter_counts());
        let cap = table.len().div_ceil(table.acceptor_universe().len());
        prop_assert!(u.acceptor_counts().values().all(|&c| c <= cap));
        prop_assert_eq!(u.len(), table.len());
    }

    #[test]
    fn csv_round_trip(t in triples()) {
        let d = common::dataset(&refs(&t));
        let (mut a, mut b) = (Vec::new(), Vec::new());
        write_agents_csv(&mut a, &d).unwrap();
        write_bills_csv(&mut b, &d).unwrap();
        let back = parse_ledger(&a[..], &b[..], d.taxonomy().clone()).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn hhi_bounds_and_merge(counts in prop::collection::vec(1u64..500, 2..30)) {
        let m = counts.len() as f64;
        let s = ShareVector::<f64>::from_counts(counts.iter().enumerate().map(|(i, &c)| (format!("a{i}"), c))).unwrap();
        let h = hhi(&s);
        prop_assert!(h >= 10_000.0 / m - 1e-9 && h <= 10_000.0 + 1e-9);
        // Merging two actors never lowers concentration.
        let mut merged = counts.clone();
        let last = merged.pop().unwrap();
        merged[0] += last;
        let sm = ShareVector::<f64>::from_counts(merged.iter().enumerate().map(|(i, &c)| (format!("a{i}"), c))).unwrap();
        prop_assert!(hhi(&sm) >= h - 1e-9);
        let tops: Vec<f64> = [1, 3, 5, 10, 15].iter().map(|&k| top_k_share(&s, k).unwrap()).collect();
        prop_assert!(tops.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        prop_assert!(tops.iter().all(|&x| x <= 100.0 + 1e-9));
    }

    #[test]
    fn ks_symmetric_and_rank_based(
        x in prop::collection::vec(-50.0f64..50.0, 1..40),
        y in prop::collection::vec(-50.0f64..50.0, 1..40),
    ) {
        let a = ks_two_sample(&x, &y).unwrap();
        let b = ks_two_sample(&y, &x).unwrap();
        prop_assert_eq!(a.d, b.d);
        prop_assert_eq!(a.p_value, b.p_value);
        prop_assert!((0.0..=1.0).contains(&a.d) && (0.0..=1.0).contains(&a.p_value));
        let f = |v: &[f64]| v.iter().map(|t| t.exp() + 3.0 * t).collect::<Vec<_>>();
        let c = ks_two_sample(&f(&x), &f(&y)).unwrap();
        prop_assert_eq!(a.d, c.d);
    }

    #[test]
    fn pearson_affine_invariance(
        pts in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..30),
        scale in 0.1f64..10.0,
        shift in -50.0f64..50.0,
    ) {
        let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let Ok(r) = pearson(&x, &y) else { return Ok(()) };
        let xs: Vec<f64> = x.iter().map(|v| scale * v + shift).collect();
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        prop_assert!((pearson(&xs, &y).unwrap().r - r.r).abs() < 1e-9);
        prop_assert!((pearson(&x, &neg).unwrap().r + r.r).abs() < 1e-9);
        prop_assert!((-1.0..=1.0).contains(&r.r));
    }
}

#[test]
fn relabel_helper_is_bijective() {
    // Guards the relabeling property against a colliding map.
    let ids = ["D0", "D7", "A3", "X1", "K2"];
    let mut seen = BTreeMap::new();
    for id in ids {
        let f = format!("z{}", id.chars().map(|c| if c.is_ascii_digit() { (b'9' - c as u8 + b'0') as char } else { c }).collect::<String>());
        assert!(seen.insert(f, id).is_none());
    }
}
