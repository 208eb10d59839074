use proptest::prelude::*;
use symbreak::construct::{theorem_edge_colouring, total_colouring};
use symbreak::format::{encode_graph6, parse_graph6};
use symbreak::index::random_list_assignment;
use symbreak::verify::{breaks_all_small, breaks_all_small_total};
use symbreak::{Colour, EdgeColouring, Graph, ListAssignment};

// Recorded from the first run; guards the seeded generator against drift.
#[test]
fn seeded_lists_are_frozen() {
    let l = random_list_assignment(&Graph::complete(3), 3, 9, 2024, true).unwrap();
    assert_eq!(
        serde_json::to_string(&l).unwrap(),
        r#"{"edges":[{"u":0,"v":1,"list":[2,6,7]},{"u":0,"v":2,"list":[4,5,9]},{"u":1,"v":2,"list":[1,3,7]}],"vertices":[{"v":0,"list":[3,4,9]},{"v":1,"list":[3,5,6]},{"v":2,"list":[4,6,7]}]}"#
    );
    let l = random_list_assignment(&Graph::path(3), 2, 5, 0, false).unwrap();
    assert_eq!(
        serde_json::to_string(&l).unwrap(),
        r#"{"edges":[{"u":0,"v":1,"list":[3,4]},{"u":1,"v":2,"list":[1,3]}]}"#
    );
}

#[test]
fn lists_json_round_trip() {
    let g = Graph::cycle(5);
    let l = random_list_assignment(&g, 4, 7, 3, true).unwrap();
    let back: ListAssignment = serde_json::from_str(&serde_json::to_string(&l).unwrap()).unwrap();
    assert_eq!(back, l);
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (Just(n), 0..(1u64 << pairs))
    })
    .prop_map(|(n, mask)| Graph::from_upper_triangle_mask(n, mask))
}

fn has_k2_component(g: &Graph) -> bool {
    g.connected_components().iter().any(|c| c.len() == 2)
}

proptest! {
    #[test]
    fn bfs_distances_differ_by_at_most_one_along_edges(g in graph_strategy(9), r in 0usize..9) {
        let r = r % g.order();
        let d = g.bfs_distances(r).unwrap();
        for e in g.edges() {
            match (d[e.u], d[e.v]) {
                (Some(a), Some(b)) => prop_assert!(a.abs_diff(b) <= 1),
                (a, b) => prop_assert_eq!(a.is_some(), b.is_some()),
            }
        }
    }

    #[test]
    fn refining_a_breaking_colouring_keeps_it_breaking(
        g in graph_strategy(7),
        colours in prop::collection::vec(0i64..3, 21),
        split in prop::collection::vec(any::<bool>(), 21),
    ) {
        let edges = g.edges();
        let c: EdgeColouring = edges.iter().zip(&colours).map(|(&e, &k)| (e, Colour::Int(k))).collect();
        let finer: EdgeColouring = edges
            .iter()
            .zip(colours.iter().zip(&split))
            .map(|(&e, (&k, &s))| (e, Colour::Int(2 * k + i64::from(s))))
            .collect();
        if breaks_all_small(&g, &c).unwrap().ok {
            prop_assert!(breaks_all_small(&g, &finer).unwrap().ok);
        }
    }

    #[test]
    fn constructions_are_certified(g in graph_strategy(8), seed in any::<u64>()) {
        prop_assume!(!has_k2_component(&g));
        let lists = random_list_assignment(&g, 3, 6, seed, false).unwrap();
        let (c, _) = theorem_edge_colouring(&g, &lists).unwrap();
        prop_assert!(c.check_lists(&lists).is_ok());
        prop_assert!(breaks_all_small(&g, &c).unwrap().ok);

        let lists = random_list_assignment(&g, 2, 4, seed, true).unwrap();
        let t = total_colouring(&g, &lists).unwrap();
        prop_assert!(t.check_lists(&lists).is_ok());
        prop_assert!(breaks_all_small_total(&g, &t).unwrap().ok);
    }

    #[test]
    fn graph6_round_trip_preserves_edges(g in graph_strategy(10)) {
        let back = parse_graph6(&encode_graph6(&g).unwrap()).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }
}
