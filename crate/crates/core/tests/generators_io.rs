use cdsma_core::generate::{
    cluster_size, gen_barabasi_albert, gen_zipf_demand, ClusterHead, DemandAssignment, GridLayout,
    ZipfDemandSpec,
};
use cdsma_core::io::{load_demand, load_edge_list, save_demand, save_edge_list, TopologySnapshot};
use cdsma_core::{DemandVector, NodeId};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn barabasi_albert_is_connected_and_heavy_tailed() {
    for seed in 0..20 {
        let g = gen_barabasi_albert(300, 2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        assert_eq!(g.node_count(), 300);
        assert_eq!(g.edge_count(), 3 + 2 * (300 - 3));
        let max = g.nodes().map(|u| g.degree(u)).max().unwrap();
        let mean = 2.0 * g.edge_count() as f64 / 300.0;
        assert!(max as f64 > 2.0 * mean, "seed {seed}: max degree {max}");
    }
}

#[test]
fn clustered_demand_packs_top_ranks_in_the_ball() {
    let layout = GridLayout::new(10, 10);
    let g = layout.graph();
    for (radius, s) in [(2u32, 1.0), (1, 2.0)] {
        let spec = ZipfDemandSpec {
            s,
            assignment: DemandAssignment::Clustered {
                grid: layout,
                head: ClusterHead::Random,
                radius,
            },
        };
        let w = gen_zipf_demand(&g, &spec, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let head = g
            .nodes()
            .max_by(|a, b| w.get(*a).partial_cmp(&w.get(*b)).unwrap())
            .unwrap();
        let ball = g.ball(head, radius);
        assert_eq!(ball.len(), cluster_size(radius));
        let k = ball.len();
        let mut sorted: Vec<f64> = w.as_slice().to_vec();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut in_ball: Vec<f64> = ball.iter().map(|&u| w.get(u)).collect();
        in_ball.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(in_ball, sorted[..k]);
        assert!((w.total() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn edge_list_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ba.txt");
    let g = gen_barabasi_albert(120, 2, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    save_edge_list(&path, &TopologySnapshot::from_graph("ba", g.clone())).unwrap();
    let back = load_edge_list(&path).unwrap();
    assert_eq!(back.name, "ba");
    assert_eq!(back.mcc_fraction, 1.0);
    assert_eq!(back.graph.node_count(), g.node_count());
    // labels are renumbered by first appearance; translate back through them
    for (u, v) in back.graph.edges() {
        let a: usize = back.label(u).parse().unwrap();
        let b: usize = back.label(v).parse().unwrap();
        assert!(g.has_edge(NodeId::new(a), NodeId::new(b)));
    }
    assert_eq!(back.graph.edge_count(), g.edge_count());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn demand_round_trip_is_bit_exact(values in prop::collection::vec(0.0f64..1e6, 1..40)) {
        let mut values = values;
        values[0] += 1.0;
        let w = DemandVector::new(values).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.txt");
        save_demand(&path, &w).unwrap();
        prop_assert_eq!(load_demand(&path, w.len()).unwrap(), w);
    }
}
