mod common;

use common::{brute_counts, exact, from_edge_bits};
use ncb::baselines::{greedy_modularity, lpa, DEFAULT_LPA_ITERATIONS};
use ncb::conductance::{cut, volume};
use ncb::partition::{read_csv, write_csv};
use ncb::{conductance, detect, detect_traced, modularity, nmi, Graph, NodeId, Partition};
use num_rational::Ratio as Exact;
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(prop::bool::weighted(0.3), n * (n - 1) / 2),
            )
        })
        .prop_filter_map("graph needs an edge", |(n, bits)| {
            from_edge_bits(n, &bits).filter(|g| g.edge_count() > 0)
        })
}

fn graph_and_mask(max_n: usize) -> impl Strategy<Value = (Graph, Vec<bool>)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let n = g.node_count();
        (Just(g), prop::collection::vec(any::<bool>(), n))
    })
}

fn graph_and_labels(max_n: usize, k: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph_strategy(max_n).prop_flat_map(move |g| {
        let n = g.node_count();
        (Just(g), prop::collection::vec(0..k, n))
    })
}

fn members(mask: &[bool]) -> Vec<NodeId> {
    mask.iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(v, _)| v)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 128,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn conductance_is_complement_symmetric((g, mask) in graph_and_mask(16)) {
        let inside = members(&mask);
        let outside: Vec<NodeId> = g.nodes().filter(|&v| !mask[v]).collect();
        if let (Ok(a), Ok(b)) = (conductance(&g, &inside), conductance(&g, &outside)) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn volume_minus_cut_counts_internal_endpoints((g, mask) in graph_and_mask(16)) {
        let set = members(&mask);
        prop_assume!(!set.is_empty());
        let b = brute_counts(&g, &set);
        prop_assert_eq!(volume(&g, &set).unwrap() - cut(&g, &set).unwrap(), 2 * b.internal);
    }

    #[test]
    fn small_side_stability_is_one_minus_conductance((g, mask) in graph_and_mask(16)) {
        let set = members(&mask);
        prop_assume!(!set.is_empty() && set.len() < g.node_count());
        let b = brute_counts(&g, &set);
        prop_assume!(b.volume > 0 && 2 * b.volume <= b.total_volume);
        let stability = Exact::new(2 * b.internal as i64, b.volume as i64);
        prop_assert_eq!(stability, Exact::from_integer(1) - exact(conductance(&g, &set).unwrap()));
    }

    #[test]
    fn nmi_is_symmetric_and_bounded(
        (g, a) in graph_and_labels(20, 4),
        b_seed in prop::collection::vec(0usize..3, 20),
    ) {
        let b: Vec<usize> = (0..g.node_count()).map(|v| b_seed[v]).collect();
        let pa = Partition::from_labels(&g, &a).unwrap();
        let pb = Partition::from_labels(&g, &b).unwrap();
        let ab = nmi(&pa, &pb).unwrap();
        let ba = nmi(&pb, &pa).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((nmi(&pa, &pa).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn modularity_ignores_label_names((g, labels) in graph_and_labels(20, 5), shift in 1usize..100) {
        let renamed: Vec<usize> = labels.iter().map(|&l| (l + shift) * 7).collect();
        let a = modularity(&g, &Partition::from_labels(&g, &labels).unwrap()).unwrap();
        let b = modularity(&g, &Partition::from_labels(&g, &renamed).unwrap()).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((-0.5..=1.0).contains(&a));
    }

    #[test]
    fn partition_csv_round_trips((g, labels) in graph_and_labels(20, 6)) {
        let p = Partition::from_labels(&g, &labels).unwrap();
        let mut buf = Vec::new();
        write_csv(&g, &p, &mut buf).unwrap();
        prop_assert_eq!(read_csv(&g, buf.as_slice()).unwrap(), p);
    }

    #[test]
    fn detect_yields_valid_partition_with_positive_gains(g in graph_strategy(24)) {
        let (p, events) = detect_traced(&g).unwrap();
        prop_assert!(p.is_total());
        p.validate(&g).unwrap();
        for e in events.iter().filter(|e| e.accepted) {
            prop_assert!(e.capture_factor > 0.0, "{:?}", e);
        }
        prop_assert_eq!(detect(&g).unwrap(), p);
    }

    #[test]
    fn baselines_yield_valid_partitions(g in graph_strategy(24), seed in any::<u64>()) {
        let p = lpa(&g, seed, DEFAULT_LPA_ITERATIONS).unwrap();
        p.validate(&g).unwrap();
        prop_assert_eq!(lpa(&g, seed, DEFAULT_LPA_ITERATIONS).unwrap(), p);
        let q = greedy_modularity(&g).unwrap();
        q.validate(&g).unwrap();
        prop_assert!(modularity(&g, &q).unwrap() >= -1e-12);
    }
}
