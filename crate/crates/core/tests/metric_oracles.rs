mod common;

use billnet::graph::SimpleGraph;
use billnet::metrics::{
    average_path_length, betweenness_all, centralization, closeness_all, eigenvector_all, global_clustering,
    main_component_share, structure_report,
};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn check_graph(g: &SimpleGraph) {
    let c = closeness_all::<f64>(g).unwrap();
    for (x, y) in c.values.iter().zip(common::closeness(g)) {
        assert!(close(*x, y, 1e-9), "closeness {x} vs {y} on {:?}", g.edges().collect::<Vec<_>>());
    }
    let b = betweenness_all::<f64>(g).unwrap();
    for (x, y) in b.values.iter().zip(common::betweenness(g)) {
        assert!(close(*x, y, 1e-9), "betweenness {x} vs {y} on {:?}", g.edges().collect::<Vec<_>>());
    }
    assert!(close(global_clustering::<f64>(g), common::transitivity(g), 1e-9));
    assert!(close(average_path_length::<f64>(g).unwrap(), common::average_path_length(g), 1e-9));
    if g.edge_count() > 0 {
        let e = eigenvector_all::<f64>(g).unwrap();
        for (x, y) in e.values.iter().zip(common::eigenvector(g)) {
            assert!(close(*x, y, 1e-6), "eigenvector {x} vs {y} on {:?}", g.edges().collect::<Vec<_>>());
        }
    }
}

#[test]
fn random_connected_graphs_match_oracles() {
    let mut rng = common::rng(2024);
    for _ in 0..300 {
        check_graph(&common::random_connected_graph(&mut rng, 7));
    }
}

#[test]
fn random_sparse_graphs_match_oracles() {
    // Disconnected instances exercise the component conventions.
    let mut rng = common::rng(99);
    for _ in 0..300 {
        let g = common::random_graph(&mut rng, 8, 0.25);
        check_graph(&g);
        let comp = g.largest_component().len() as f64;
        let share = main_component_share::<f64>(&g).unwrap();
        assert!(close(share, 100.0 * comp / g.node_count() as f64, 1e-12));
    }
}

#[test]
fn star_eigenvector_ratio() {
    let g = SimpleGraph::unlabeled(4, [(0, 1), (0, 2), (0, 3)]);
    let e = eigenvector_all::<f64>(&g).unwrap();
    assert!(close(e.values[0] / e.values[1], 3f64.sqrt(), 1e-9));
}

#[test]
fn two_triangles_pick_smallest_label() {
    let g = SimpleGraph::unlabeled(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
    let e = eigenvector_all::<f64>(&g).unwrap();
    assert!(e.values[..3].iter().all(|&v| close(v, 1.0 / 3f64.sqrt(), 1e-9)));
    assert!(e.values[3..].iter().all(|&v| v == 0.0));
}

#[test]
fn star_centralizations() {
    for n in 3..10 {
        let g = SimpleGraph::unlabeled(n, (1..n).map(|v| (0, v)));
        let b = betweenness_all::<f64>(&g).unwrap();
        assert!(close(centralization(&b).unwrap(), 1.0, 1e-12));
        let c = closeness_all::<f64>(&g).unwrap();
        assert!(close(centralization(&c).unwrap(), 1.0, 1e-12));
    }
}

#[test]
fn structure_report_on_path_and_isolate() {
    let path = SimpleGraph::unlabeled(3, [(0, 1), (1, 2)]);
    let r = structure_report::<f64>(&path).unwrap();
    assert_eq!(r.main_component_share, 100.0);
    assert!(close(r.average_path_length, 4.0 / 3.0, 1e-12));
    let ten = SimpleGraph::unlabeled(10, (0..8).map(|i| (i, i + 1)));
    assert!(close(structure_report::<f64>(&ten).unwrap().main_component_share, 90.0, 1e-12));
}

#[test]
fn f32_matches_f64() {
    let mut rng = common::rng(5);
    for _ in 0..50 {
        let g = common::random_connected_graph(&mut rng, 7);
        let a = closeness_all::<f32>(&g).unwrap();
        let b = closeness_all::<f64>(&g).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((*x as f64 - y).abs() < 1e-5);
        }
    }
}
