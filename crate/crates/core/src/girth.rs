//! Girth of a mixed graph.
//!
//! A cycle is a closed vertex sequence `v_0, .., v_k = v_0` with no other
//! repeated vertex, where each consecutive pair is joined by an edge or by a
//! correctly oriented arc, and no edge or arc is used twice. Antiparallel arcs
//! and an edge lying alongside an arc both give 2-cycles; a lone edge does not
//! (walking back along it reuses the edge).

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::MixedGraph;

/// Which incidence a cycle step uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Edge,
    Arc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    /// `v_0, .., v_k` with `v_k == v_0`.
    pub vertices: Vec<usize>,
    /// `steps[i]` joins `vertices[i]` to `vertices[i + 1]`.
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("cycle has no steps")]
    Empty,
    #[error("step count does not match vertex count")]
    Shape,
    #[error("sequence is not closed")]
    NotClosed,
    #[error("vertex {0} repeated")]
    RepeatedVertex(usize),
    #[error("step {0} is not an incidence of the graph")]
    MissingIncidence(usize),
    #[error("step {0} reuses an edge or arc")]
    RepeatedIncidence(usize),
}

impl CycleWitness {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Checks the three clauses of the cycle definition against `g`.
    pub fn validate(&self, g: &MixedGraph) -> Result<(), WitnessError> {
        let k = self.steps.len();
        if k == 0 {
            return Err(WitnessError::Empty);
        }
        if self.vertices.len() != k + 1 {
            return Err(WitnessError::Shape);
        }
        if self.vertices[0] != self.vertices[k] {
            return Err(WitnessError::NotClosed);
        }
        let mut seen = HashSet::new();
        for &v in &self.vertices[..k] {
            if !seen.insert(v) {
                return Err(WitnessError::RepeatedVertex(v));
            }
        }
        let mut used = HashSet::new();
        for (i, step) in self.steps.iter().enumerate() {
            let (u, v) = (self.vertices[i], self.vertices[i + 1]);
            let key = match step {
                Step::Edge if g.has_edge(u, v) => (Step::Edge, u.min(v), u.max(v)),
                Step::Arc if g.has_arc(u, v) => (Step::Arc, u, v),
                _ => return Err(WitnessError::MissingIncidence(i)),
            };
            if !used.insert(key) {
                return Err(WitnessError::RepeatedIncidence(i));
            }
        }
        Ok(())
    }
}

/// Shortest cycle, or `Infinite` for an acyclic mixed graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Girth {
    Infinite,
    Cycle(CycleWitness),
}

impl Girth {
    pub fn value(&self) -> Option<usize> {
        match self {
            Girth::Infinite => None,
            Girth::Cycle(w) => Some(w.len()),
        }
    }

    pub fn witness(&self) -> Option<&CycleWitness> {
        match self {
            Girth::Infinite => None,
            Girth::Cycle(w) => Some(w),
        }
    }
}

/// Outgoing incidences of `x` in ascending neighbour order, edge before arc.
fn incidences(g: &MixedGraph, x: usize) -> impl Iterator<Item = (usize, Step)> + '_ {
    let mut e = g.neighbors(x).iter().peekable();
    let mut a = g.out_neighbors(x).iter().peekable();
    std::iter::from_fn(move || match (e.peek(), a.peek()) {
        (Some(&&y), Some(&&z)) if y <= z => {
            e.next();
            Some((y, Step::Edge))
        }
        (_, Some(&&z)) => {
            a.next();
            Some((z, Step::Arc))
        }
        (Some(&&y), None) => {
            e.next();
            Some((y, Step::Edge))
        }
        (None, None) => None,
    })
}

/// Breadth-first shortest path `from ~> to` of at most `max_len` steps that
/// only visits vertices `>= floor` and never uses the edge `forbidden`.
/// Returns the steps taken, each as (vertex reached, incidence used).
fn shortest_path(
    g: &MixedGraph,
    from: usize,
    to: usize,
    floor: usize,
    forbidden: Option<(usize, usize)>,
    max_len: usize,
) -> Option<Vec<(usize, Step)>> {
    if max_len == 0 {
        return None;
    }
    let n = g.order();
    let mut pred: Vec<Option<(usize, Step)>> = vec![None; n];
    let mut dist = vec![usize::MAX; n];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if dist[x] >= max_len {
            break;
        }
        for (y, step) in incidences(g, x) {
            if y < floor || (step == Step::Edge && forbidden == Some((x.min(y), x.max(y)))) {
                continue;
            }
            if y == to {
                let mut path = vec![(to, step)];
                let mut cur = x;
                while cur != from {
                    let (p, s) = pred[cur].expect("reached vertices have predecessors");
                    path.push((cur, s));
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                pred[y] = Some((x, step));
                queue.push_back(y);
            }
        }
    }
    None
}

/// Shortest cycle whose smallest vertex is `root`, of length at most `cap`.
fn shortest_cycle_at(g: &MixedGraph, root: usize, cap: usize) -> Option<CycleWitness> {
    let mut best: Option<CycleWitness> = None;
    for (x, first) in incidences(g, root) {
        if x < root {
            continue;
        }
        let limit = best.as_ref().map_or(cap, |w| w.len() - 1).min(cap);
        if limit == 0 {
            break;
        }
        let forbidden = (first == Step::Edge).then_some((root.min(x), root.max(x)));
        let path = if x == root {
            None
        } else {
            shortest_path(g, x, root, root, forbidden, limit - 1)
        };
        if let Some(path) = path {
            let mut vertices = vec![root, x];
            let mut steps = vec![first];
            for (v, s) in path {
                vertices.push(v);
                steps.push(s);
            }
            best = Some(CycleWitness { vertices, steps });
        }
    }
    best
}

/// Shortest cycle of length at most `cap`. Ties go to the smallest root
/// (the cycle's minimum vertex), then to the first neighbour tried.
fn shortest_cycle(g: &MixedGraph, cap: usize) -> Option<CycleWitness> {
    let mut best: Option<CycleWitness> = None;
    let mut cap = cap;
    for root in 0..g.order() {
        if cap < 2 {
            break;
        }
        if let Some(w) = shortest_cycle_at(g, root, cap) {
            cap = w.len() - 1;
            best = Some(w);
        }
    }
    best
}

/// Antiparallel arcs, or an edge alongside an arc.
fn has_two_cycle(g: &MixedGraph) -> bool {
    g.arcs()
        .iter()
        .any(|&(u, v)| g.has_edge(u, v) || g.has_arc(v, u))
}

pub fn girth(g: &MixedGraph) -> Girth {
    // the per-root search still picks which 2-cycle is reported
    let cap = if has_two_cycle(g) {
        2
    } else {
        g.order()
    };
    match shortest_cycle(g, cap) {
        Some(w) => Girth::Cycle(w),
        None => Girth::Infinite,
    }
}

/// Same result as [`girth`], with roots searched on the rayon pool.
pub fn girth_parallel(g: &MixedGraph) -> Girth {
    let n = g.order();
    (0..n)
        .into_par_iter()
        .filter_map(|root| shortest_cycle_at(g, root, n).map(|w| (w.len(), root, w)))
        .min_by_key(|(len, root, _)| (*len, *root))
        .map_or(Girth::Infinite, |(_, _, w)| Girth::Cycle(w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no cycle of length at most {cap}")]
pub struct CapExceeded {
    pub cap: usize,
}

/// Literal enumeration of vertex sequences up to `max_len` steps. Exponential;
/// meant as an oracle on small graphs.
pub fn girth_bruteforce(g: &MixedGraph, max_len: usize) -> Result<Girth, CapExceeded> {
    struct Walk<'a> {
        g: &'a MixedGraph,
        start: usize,
        vertices: Vec<usize>,
        steps: Vec<Step>,
        used: HashSet<(Step, usize, usize)>,
        best: Option<CycleWitness>,
        limit: usize,
    }

    impl Walk<'_> {
        fn extend(&mut self) {
            let depth = self.steps.len();
            if depth >= self.limit {
                return;
            }
            let x = *self.vertices.last().unwrap();
            for y in 0..self.g.order() {
                for step in [Step::Edge, Step::Arc] {
                    let present = match step {
                        Step::Edge => self.g.has_edge(x, y),
                        Step::Arc => self.g.has_arc(x, y),
                    };
                    if !present {
                        continue;
                    }
                    let key = match step {
                        Step::Edge => (step, x.min(y), x.max(y)),
                        Step::Arc => (step, x, y),
                    };
                    if self.used.contains(&key) {
                        continue;
                    }
                    if y == self.start {
                        let mut vertices = self.vertices.clone();
                        vertices.push(y);
                        let mut steps = self.steps.clone();
                        steps.push(step);
                        self.limit = depth;
                        self.best = Some(CycleWitness { vertices, steps });
                        return;
                    }
                    if self.vertices.contains(&y) {
                        continue;
                    }
                    self.used.insert(key);
                    self.vertices.push(y);
                    self.steps.push(step);
                    self.extend();
                    self.steps.pop();
                    self.vertices.pop();
                    self.used.remove(&key);
                    if self.steps.len() >= self.limit {
                        return;
                    }
                }
            }
        }
    }

    let mut best: Option<CycleWitness> = None;
    for start in 0..g.order() {
        let limit = best.as_ref().map_or(max_len, |w| w.len() - 1);
        let mut walk = Walk {
            g,
            start,
            vertices: vec![start],
            steps: Vec::new(),
            used: HashSet::new(),
            best: None,
            limit,
        };
        walk.extend();
        if let Some(w) = walk.best {
            best = Some(w);
        }
    }
    match best {
        Some(w) => Ok(Girth::Cycle(w)),
        None if max_len >= g.order() => Ok(Girth::Infinite),
        None => Err(CapExceeded { cap: max_len }),
    }
}

/// Outcome of a girth threshold test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GirthCheck {
    pub ok: bool,
    /// A cycle shorter than the target when `ok` is false.
    pub violation: Option<CycleWitness>,
}

/// True iff every cycle has length at least `target`.
pub fn has_girth_at_least(g: &MixedGraph, target: usize) -> GirthCheck {
    let violation = if target <= 1 {
        None
    } else {
        shortest_cycle(g, target - 1)
    };
    GirthCheck {
        ok: violation.is_none(),
        violation,
    }
}

/// A new incidence to be added to a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Incidence {
    Edge(usize, usize),
    Arc(usize, usize),
}

/// Incremental form of [`has_girth_at_least`]: given that `g` already has
/// girth at least `target`, decides whether `g` plus `added` still does by
/// examining only cycles through the new incidence. `g` must not already
/// contain `added`.
pub fn has_girth_at_least_with(g: &MixedGraph, added: Incidence, target: usize) -> GirthCheck {
    if target <= 1 {
        return GirthCheck {
            ok: true,
            violation: None,
        };
    }
    let cap = target - 1;
    let close = |from: usize, to: usize, step: Step| {
        shortest_path(g, to, from, 0, None, cap - 1).map(|path| {
            let mut vertices = vec![from, to];
            let mut steps = vec![step];
            for (v, s) in path {
                vertices.push(v);
                steps.push(s);
            }
            CycleWitness { vertices, steps }
        })
    };
    let violation = match added {
        Incidence::Arc(u, v) => close(u, v, Step::Arc),
        Incidence::Edge(u, v) => match (close(u, v, Step::Edge), close(v, u, Step::Edge)) {
            (Some(a), Some(b)) => Some(if b.len() < a.len() { b } else { a }),
            (a, b) => a.or(b),
        },
    };
    GirthCheck {
        ok: violation.is_none(),
        violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)], a: &[(usize, usize)]) -> MixedGraph {
        MixedGraph::new(n, e.iter().copied(), a.iter().copied()).unwrap()
    }

    fn check(graph: &MixedGraph, expected: Option<usize>) {
        let r = girth(graph);
        assert_eq!(r.value(), expected);
        if let Some(w) = r.witness() {
            w.validate(graph).unwrap();
        }
        assert_eq!(girth_bruteforce(graph, graph.order() + 1).unwrap().value(), expected);
        assert_eq!(girth_parallel(graph), r);
    }

    #[test]
    fn two_cycles() {
        check(&g(2, &[], &[(0, 1), (1, 0)]), Some(2));
        check(&g(2, &[(0, 1)], &[(0, 1)]), Some(2));
        check(&g(2, &[(0, 1)], &[(1, 0)]), Some(2));
    }

    #[test]
    fn lone_edge_is_acyclic() {
        check(&g(2, &[(0, 1)], &[]), None);
        check(&MixedGraph::empty(0), None);
        check(&g(4, &[(0, 1), (1, 2), (2, 3)], &[]), None);
    }

    #[test]
    fn short_cycles() {
        check(&g(3, &[(0, 1), (1, 2), (0, 2)], &[]), Some(3));
        check(&g(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], &[]), Some(4));
        let arcs: Vec<_> = (0..10).map(|j| (j, (j + 1) % 10)).collect();
        check(&g(10, &[], &arcs), Some(10));
        // arcs against each other do not close a cycle
        check(&g(3, &[], &[(0, 1), (0, 2), (1, 2)]), None);
        // mixed triangle
        check(&g(3, &[(0, 1), (1, 2)], &[(2, 0)]), Some(3));
    }

    #[test]
    fn cap_exceeded() {
        let arcs: Vec<_> = (0..6).map(|j| (j, (j + 1) % 6)).collect();
        let c6 = g(6, &[], &arcs);
        assert_eq!(girth_bruteforce(&c6, 5), Err(CapExceeded { cap: 5 }));
        assert_eq!(girth_bruteforce(&c6, 6).unwrap().value(), Some(6));
        assert_eq!(girth_bruteforce(&g(3, &[(0, 1)], &[]), 2), Err(CapExceeded { cap: 2 }));
    }

    #[test]
    fn threshold() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], &[]);
        assert!(has_girth_at_least(&c4, 4).ok);
        let c = has_girth_at_least(&c4, 5);
        assert!(!c.ok);
        assert_eq!(c.violation.unwrap().len(), 4);
        assert!(has_girth_at_least(&MixedGraph::empty(3), 100).ok);
    }

    #[test]
    fn incremental_matches_full() {
        let path = g(4, &[(0, 1), (1, 2), (2, 3)], &[]);
        let c = has_girth_at_least_with(&path, Incidence::Edge(0, 3), 5);
        assert!(!c.ok);
        assert_eq!(c.violation.as_ref().unwrap().len(), 4);
        c.violation.unwrap().validate(&path.with_edge(0, 3).unwrap()).unwrap();
        assert!(has_girth_at_least_with(&path, Incidence::Edge(0, 3), 4).ok);
        let c = has_girth_at_least_with(&path, Incidence::Arc(1, 0), 3);
        assert_eq!(c.violation.unwrap().len(), 2);
    }

    #[test]
    fn validate_rejects_bad_witnesses() {
        let tri = g(3, &[(0, 1), (1, 2), (0, 2)], &[]);
        let w = CycleWitness {
            vertices: vec![0, 1, 0],
            steps: vec![Step::Edge, Step::Edge],
        };
        assert_eq!(w.validate(&tri), Err(WitnessError::RepeatedIncidence(1)));
        let w = CycleWitness {
            vertices: vec![0, 1, 2, 0],
            steps: vec![Step::Edge, Step::Arc, Step::Edge],
        };
        assert_eq!(w.validate(&tri), Err(WitnessError::MissingIncidence(1)));
        let w = CycleWitness {
            vertices: vec![0, 1, 0, 1, 0],
            steps: vec![Step::Edge; 4],
        };
        assert_eq!(w.validate(&tri), Err(WitnessError::RepeatedVertex(0)));
    }
}
