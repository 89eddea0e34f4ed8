//! Data-model laws: relabeling, matrix round trips, degree sums.

use mixcage::io::{read_adjacency_matrix, read_adjacency_matrix_with_header, write_adjacency_matrix};
use mixcage::{MixedGraph, Permutation};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_mixed(n: usize, p_edge: f64, p_arc: f64, rng: &mut impl Rng) -> MixedGraph {
    let mut edges = Vec::new();
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u < v && rng.gen_bool(p_edge) {
                edges.push((u, v));
            }
            // the matrix format cannot express an arc beside an edge or antiparallel arcs
            if u != v && !edges.contains(&(u.min(v), u.max(v))) && !arcs.contains(&(v, u)) && rng.gen_bool(p_arc) {
                arcs.push((u, v));
            }
        }
    }
    MixedGraph::new(n, edges, arcs).unwrap()
}

fn arb_graph() -> impl Strategy<Value = MixedGraph> {
    (any::<u64>(), 1usize..20, 0.0..0.6f64, 0.0..0.4f64)
        .prop_map(|(seed, n, pe, pa)| random_mixed(n, pe, pa, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn perm(n: usize, seed: u64) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Permutation::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matrix_round_trip(g in arb_graph()) {
        let text = write_adjacency_matrix(&g);
        prop_assert_eq!(read_adjacency_matrix(&text).unwrap(), g.clone());
        let with_header = format!("order {}\n{text}\n", g.order());
        let parsed = read_adjacency_matrix_with_header(&with_header).unwrap();
        prop_assert_eq!(parsed.graph, g.clone());
        prop_assert_eq!(parsed.header, vec![format!("order {}", g.order())]);
        // one matrix entry per arc, two per edge
        let ones = text.split_whitespace().filter(|&t| t == "1").count();
        prop_assert_eq!(ones, 2 * g.edges().len() + g.arcs().len());
    }

    #[test]
    fn relabeling_composes(g in arb_graph(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let n = g.order();
        let (p, q) = (perm(n, s1), perm(n, s2));
        let twice = g.apply_permutation(&p).unwrap().apply_permutation(&q).unwrap();
        prop_assert_eq!(twice, g.apply_permutation(&p.then(&q)).unwrap());
        let back = g.apply_permutation(&p).unwrap().apply_permutation(&p.inverse()).unwrap();
        prop_assert_eq!(back, g.clone());
        prop_assert!(g.is_automorphism(&Permutation::identity(n)));
    }

    #[test]
    fn degree_sums(g in arb_graph()) {
        let d = g.degree_profile();
        prop_assert_eq!(d.deg.iter().sum::<usize>(), 2 * g.edges().len());
        prop_assert_eq!(d.outdeg.iter().sum::<usize>(), g.arcs().len());
        prop_assert_eq!(d.indeg.iter().sum::<usize>(), g.arcs().len());
        let c = g.converse();
        prop_assert_eq!(c.converse(), g.clone());
        let dc = c.degree_profile();
        prop_assert_eq!(dc.outdeg, d.indeg);
    }
}
