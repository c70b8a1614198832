use netepi::graph::{
    density, fit_power_law_degrees, generate_ba, generate_er, generate_ws, load_edge_list, write_edge_list,
    EdgeListOptions, Graph,
};
use netepi::interventions::apply_degree_cap;
use netepi::rng::rng_from_seed;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn er_edge_count_matches_binomial_mean() {
    let (n, p) = (200, 0.05);
    let pairs = (n * (n - 1) / 2) as f64;
    let mean = (0..100)
        .map(|s| generate_er(n, p, s).unwrap().edge_count() as f64)
        .sum::<f64>()
        / 100.0;
    // standard error of the mean over 100 draws
    let se = (pairs * p * (1.0 - p) / 100.0).sqrt();
    assert!((mean - pairs * p).abs() < 4.0 * se, "mean {mean} vs {}", pairs * p);
}

#[test]
fn ws_without_rewiring_is_regular() {
    for seed in 0..10 {
        let g = generate_ws(50, 6, 0.0, seed).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 6));
        assert_eq!(g.edge_count(), 150);
    }
}

#[test]
fn ws_rewiring_keeps_edge_count() {
    for seed in 0..10 {
        let g = generate_ws(300, 8, 0.3, seed).unwrap();
        assert_eq!(g.edge_count(), 1200);
        g.check_invariants().unwrap();
    }
}

#[test]
fn ba_edge_count_is_deterministic_in_size() {
    for seed in 0..10 {
        let g = generate_ba(400, 3, seed).unwrap();
        assert_eq!(g.edge_count(), 3 * 397);
        // the m seed nodes only need one edge; every later node brings m
        assert!(g.degrees()[3..].iter().all(|&d| d >= 3));
        assert!(g.degrees().iter().all(|&d| d >= 1));
    }
}

/// Draws from the discrete power law approximated by rounding a continuous
/// Pareto variate on [k_min - 0.5, inf).
fn sample_power_law(n: usize, gamma: f64, k_min: usize, seed: u64) -> Vec<usize> {
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            let x = (k_min as f64 - 0.5) * (1.0 - u).powf(-1.0 / (gamma - 1.0));
            (x + 0.5).floor() as usize
        })
        .collect()
}

#[test]
fn power_law_exponent_recovered() {
    for (seed, gamma) in [(1, 2.5), (2, 2.2), (3, 3.0)] {
        let degrees = sample_power_law(100_000, gamma, 10, seed);
        let fit = fit_power_law_degrees(&degrees, Some(10)).unwrap();
        assert!(
            (fit.exponent - gamma).abs() < 0.1,
            "gamma {gamma}: fitted {}",
            fit.exponent
        );
    }
}

#[test]
fn power_law_with_automatic_kmin_ignores_low_degree_bulk() {
    let mut degrees = sample_power_law(50_000, 2.5, 10, 4);
    // a uniform body below the tail
    let mut rng = rng_from_seed(5);
    degrees.extend((0..20_000).map(|_| rng.gen_range(1..10)));
    let fit = fit_power_law_degrees(&degrees, None).unwrap();
    assert!(fit.k_min >= 8, "k_min {}", fit.k_min);
    assert!((fit.exponent - 2.5).abs() < 0.15, "fitted {}", fit.exponent);
}

#[test]
fn er_density_examples() {
    assert_eq!(density(&generate_er(100, 0.0, 1).unwrap()).unwrap(), 0.0);
    assert_eq!(density(&generate_er(100, 1.0, 1).unwrap()).unwrap(), 1.0);
}

fn edges_strategy() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..60).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..300)))
}

fn build(n: usize, pairs: &[(usize, usize)]) -> Graph {
    let mut g = Graph::new(n);
    for &(u, v) in pairs {
        if u != v {
            g.add_edge(u, v);
        }
    }
    g
}

proptest! {
    #[test]
    fn graph_invariants_hold_under_edits((n, pairs) in edges_strategy(), removals in prop::collection::vec(any::<prop::sample::Index>(), 0..50)) {
        let mut g = build(n, &pairs);
        g.check_invariants().unwrap();
        let edges = g.sorted_edges();
        for idx in removals {
            if edges.is_empty() { break; }
            let (u, v) = edges[idx.index(edges.len())];
            g.remove_edge(u, v);
        }
        g.check_invariants().unwrap();
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn degree_cap_properties((n, pairs) in edges_strategy(), cap in 0usize..8, seed in any::<u64>()) {
        let g = build(n, &pairs);
        let capped = apply_degree_cap(&g, cap, seed);
        capped.check_invariants().unwrap();
        prop_assert!(capped.max_degree() <= cap);
        prop_assert!(capped.edges().all(|(u, v)| g.has_edge(u, v)));
        prop_assert_eq!(apply_degree_cap(&capped, cap, seed.wrapping_add(1)).sorted_edges(), capped.sorted_edges());
        prop_assert_eq!(capped.sorted_edges(), apply_degree_cap(&g, cap, seed).sorted_edges());
    }

    #[test]
    fn edge_list_round_trip((n, pairs) in edges_strategy()) {
        let g = build(n, &pairs);
        let text = write_edge_list(&g);
        let loaded = load_edge_list(&text, EdgeListOptions::default()).unwrap();
        prop_assert_eq!(loaded.graph.sorted_edges(), g.sorted_edges());
    }
}
