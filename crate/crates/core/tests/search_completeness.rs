//! The completion engine against a generate-everything-and-filter oracle.

use std::collections::BTreeSet;

use mixcage::girth::{girth, girth_bruteforce};
use mixcage::iso::{canonical_form, is_isomorphic};
use mixcage::search::{partitions_min_part, resume_search, search_order, SearchSpec, Status};
use mixcage::MixedGraph;

/// Every r-regular simple graph on `n` labeled vertices.
fn regular_edge_sets(n: usize, r: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut deg = vec![0; n];
    let mut cur = Vec::new();
    fn go(
        k: usize,
        pairs: &[(usize, usize)],
        r: usize,
        deg: &mut Vec<usize>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if k == pairs.len() {
            if deg.iter().all(|&d| d == r) {
                out.push(cur.clone());
            }
            return;
        }
        let (i, j) = pairs[k];
        go(k + 1, pairs, r, deg, cur, out);
        if deg[i] < r && deg[j] < r {
            deg[i] += 1;
            deg[j] += 1;
            cur.push((i, j));
            go(k + 1, pairs, r, deg, cur, out);
            cur.pop();
            deg[i] -= 1;
            deg[j] -= 1;
        }
    }
    go(0, &pairs, r, &mut deg, &mut cur, &mut out);
    out
}

/// Every fixed-point-free permutation of `0..n`.
fn derangements(n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if k == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if v != k && !used[v] {
                used[v] = true;
                cur.push(v);
                go(k + 1, used, cur, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

/// Canonical encodings of all (r,1,g)-graphs on n vertices, taking arc sets
/// from `arc_sets`.
fn oracle(n: usize, r: usize, g: usize, arc_sets: &[Vec<usize>]) -> BTreeSet<Vec<u8>> {
    let edge_sets = regular_edge_sets(n, r);
    let mut classes = BTreeSet::new();
    for sigma in arc_sets {
        let arcs: Vec<(usize, usize)> = sigma.iter().copied().enumerate().collect();
        for edges in &edge_sets {
            let gr = MixedGraph::new(n, edges.iter().copied(), arcs.iter().copied()).unwrap();
            if girth(&gr).value() == Some(g) {
                classes.insert(canonical_form(&gr).encoding);
            }
        }
    }
    classes
}

/// One arc permutation per cycle type: relabeling never changes the class.
fn cycle_type_reps(n: usize) -> Vec<Vec<usize>> {
    partitions_min_part(n, 2)
        .into_iter()
        .map(|parts| {
            let mut sigma = vec![0; n];
            let mut s = 0;
            for p in parts {
                for t in 0..p {
                    sigma[s + t] = s + (t + 1) % p;
                }
                s += p;
            }
            sigma
        })
        .collect()
}

fn engine_classes(n: usize, r: usize, g: usize) -> BTreeSet<Vec<u8>> {
    let out = search_order(&SearchSpec::enumerate(r, g, n)).unwrap();
    let ws = match out.status {
        Status::Found(ws) => ws,
        Status::ExhaustedNone => Vec::new(),
        Status::BudgetExceeded(_) => panic!("no budget was set"),
    };
    for w in &ws {
        assert!(w.degree_profile().is_regular_with(r, 1));
        assert_eq!(girth(w).value(), Some(g));
        assert_eq!(girth_bruteforce(w, n + 1).unwrap().value(), Some(g));
    }
    let classes: BTreeSet<Vec<u8>> = ws.iter().map(|w| canonical_form(w).encoding).collect();
    assert_eq!(classes.len(), ws.len(), "witnesses must be pairwise non-isomorphic");
    classes
}

#[test]
fn matches_fully_naive_oracle_up_to_six() {
    for n in 2..=6 {
        let all = derangements(n);
        for r in 1..=2 {
            for g in 2..=4 {
                if n < g {
                    continue;
                }
                assert_eq!(engine_classes(n, r, g), oracle(n, r, g, &all), "n={n} r={r} g={g}");
            }
        }
    }
}

#[test]
fn matches_cycle_type_oracle_up_to_eight() {
    for n in 2..=8 {
        let reps = cycle_type_reps(n);
        for r in 1..=3 {
            for g in 2..=4 {
                if n < g {
                    continue;
                }
                assert_eq!(engine_classes(n, r, g), oracle(n, r, g, &reps), "n={n} r={r} g={g}");
            }
        }
    }
}

#[test]
fn thread_count_does_not_change_outcome() {
    for (r, g, n) in [(3, 4, 12), (3, 6, 30), (2, 4, 12)] {
        let one = search_order(&SearchSpec::enumerate(r, g, n)).unwrap();
        let four = search_order(&SearchSpec::enumerate(r, g, n).with_threads(4)).unwrap();
        assert_eq!(one, four);
        let one = search_order(&SearchSpec::decide(r, g, n).with_max_nodes(500)).unwrap();
        let four = search_order(&SearchSpec::decide(r, g, n).with_max_nodes(500).with_threads(4)).unwrap();
        assert_eq!(one, four);
    }
}

#[test]
fn resume_reproduces_uninterrupted_run() {
    for (r, g, n, step) in [(3, 4, 12, 97u64), (3, 5, 20, 613), (2, 3, 9, 61)] {
        let full = search_order(&SearchSpec::enumerate(r, g, n)).unwrap();
        let mut budget = step;
        let mut out = search_order(&SearchSpec::enumerate(r, g, n).with_max_nodes(budget)).unwrap();
        let mut hops = 0;
        while let Status::BudgetExceeded(cp) = &out.status {
            assert_eq!(cp.stats.nodes, budget);
            // through the JSON form, as a restart would
            let cp = mixcage::search::Checkpoint::from_json(&cp.to_json()).unwrap();
            budget += step;
            out = resume_search(&SearchSpec::enumerate(r, g, n).with_max_nodes(budget), &cp).unwrap();
            hops += 1;
        }
        assert!(hops > 0);
        assert_eq!(out, full, "r={r} g={g} n={n}");
    }
}

#[test]
fn decide_at_thirty_matches_construction() {
    let out = search_order(&SearchSpec::decide(3, 6, 30)).unwrap();
    let Status::Found(ws) = out.status else {
        panic!("expected a witness")
    };
    let g30 = mixcage::constructions::build_g30().unwrap();
    let w = is_isomorphic(&ws[0], &g30).expect("witness is isomorphic to the construction");
    assert_eq!(ws[0].apply_permutation(&w).unwrap(), g30);
}
