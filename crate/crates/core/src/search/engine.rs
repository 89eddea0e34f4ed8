//! Depth-first edge completion of one arc skeleton.
//!
//! A node fixes some undirected edges and forbids some pairs. It picks the
//! vertex `u` with the least slack (admissible partners minus missing
//! degree) and branches on its next partner `w_i`, forbidding `w_0..w_{i-1}`
//! in child `i`, so every completion lies under exactly one child. A pair is
//! admissible when neither endpoint reaches the other within `g - 2` steps;
//! adding such an edge cannot close a cycle shorter than `g`.
//!
//! Children whose partner lies in the same orbit as an explored sibling's,
//! under the skeleton automorphisms that preserve the node's state and fix
//! `u`, are skipped: their subtrees are images of an explored one.

use std::collections::HashSet;
use std::time::Instant;

use crate::girth::girth;
use crate::graph::MixedGraph;
use crate::iso::canonical_form;

use super::skeleton::Skeleton;
use super::{Mode, SearchStats};

pub(crate) enum Flow {
    Continue,
    Stop,
    /// Budget ran out just before the node at this child-index path.
    Budget(Vec<usize>),
}

pub(crate) struct Budget {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    fn exhausted(&self, nodes: u64) -> bool {
        self.max_nodes.is_some_and(|m| nodes >= m) || self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[inline]
fn bit(v: usize) -> u128 {
    1u128 << v
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

pub(crate) struct Engine<'a> {
    n: usize,
    g: usize,
    arcs: Vec<(usize, usize)>,
    arc_out: Vec<u128>,
    arc_in: Vec<u128>,
    edge: Vec<u128>,
    forbid: Vec<u128>,
    deficit: Vec<usize>,
    group: Vec<Vec<u8>>,
    mode: Mode,
    budget: &'a Budget,
    pub stats: SearchStats,
    pub found: Vec<MixedGraph>,
    seen: HashSet<Vec<u8>>,
}

impl<'a> Engine<'a> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        skeleton: &Skeleton,
        r: usize,
        g: usize,
        group: Vec<Vec<u8>>,
        mode: Mode,
        budget: &'a Budget,
        stats: SearchStats,
        found: Vec<MixedGraph>,
    ) -> Self {
        let n = skeleton.order();
        assert!(n <= 128);
        let arcs = skeleton.arcs();
        let mut arc_out = vec![0u128; n];
        let mut arc_in = vec![0u128; n];
        for &(u, v) in &arcs {
            arc_out[u] |= bit(v);
            arc_in[v] |= bit(u);
        }
        let mut seen = HashSet::new();
        if mode == Mode::Enumerate {
            for w in &found {
                seen.insert(canonical_form(w).encoding);
            }
        }
        Engine {
            n,
            g,
            arcs,
            arc_out,
            arc_in,
            edge: vec![0; n],
            forbid: vec![0; n],
            deficit: vec![r; n],
            group,
            mode,
            budget,
            stats,
            found,
            seen,
        }
    }

    /// Vertices within `depth` steps of `u` along edges and forward arcs,
    /// and those from which `u` is reachable within `depth` steps.
    fn near(&self, u: usize, depth: usize) -> u128 {
        let mut fwd = bit(u);
        let mut bwd = bit(u);
        let mut ff = fwd;
        let mut bf = bwd;
        for _ in 0..depth {
            let mut nf = 0u128;
            for v in bits(ff) {
                nf |= self.edge[v] | self.arc_out[v];
            }
            let mut nb = 0u128;
            for v in bits(bf) {
                nb |= self.edge[v] | self.arc_in[v];
            }
            ff = nf & !fwd;
            bf = nb & !bwd;
            fwd |= nf;
            bwd |= nb;
            if ff == 0 && bf == 0 {
                break;
            }
        }
        fwd | bwd
    }

    fn open(&self) -> u128 {
        (0..self.n)
            .filter(|&v| self.deficit[v] > 0)
            .fold(0, |m, v| m | bit(v))
    }

    fn admissible(&self, u: usize, open: u128) -> u128 {
        let blocked = if self.g >= 2 {
            self.near(u, self.g - 2)
        } else {
            bit(u)
        };
        open & !blocked & !self.forbid[u] & !self.edge[u] & !bit(u)
    }

    fn add_edge(&mut self, u: usize, w: usize) {
        self.edge[u] |= bit(w);
        self.edge[w] |= bit(u);
        self.deficit[u] -= 1;
        self.deficit[w] -= 1;
    }

    fn remove_edge(&mut self, u: usize, w: usize) {
        self.edge[u] &= !bit(w);
        self.edge[w] &= !bit(u);
        self.deficit[u] += 1;
        self.deficit[w] += 1;
    }

    fn set_forbid(&mut self, u: usize, w: usize, on: bool) {
        if on {
            self.forbid[u] |= bit(w);
            self.forbid[w] |= bit(u);
        } else {
            self.forbid[u] &= !bit(w);
            self.forbid[w] &= !bit(u);
        }
    }

    fn graph(&self) -> MixedGraph {
        let edges = (0..self.n).flat_map(|u| bits(self.edge[u] & !((bit(u) << 1) - 1)).map(move |w| (u, w)));
        MixedGraph::new(self.n, edges, self.arcs.iter().copied()).expect("search state is a simple mixed graph")
    }

    /// Returns true when decide mode should stop.
    fn leaf(&mut self) -> bool {
        self.stats.leaves += 1;
        let g = self.graph();
        debug_assert!(g.degree_profile().regular.is_some());
        if girth(&g).value() != Some(self.g) {
            self.stats.girth_too_large += 1;
            return false;
        }
        match self.mode {
            Mode::Decide => {
                self.found.push(g);
                true
            }
            Mode::Enumerate => {
                if self.seen.insert(canonical_form(&g).encoding) {
                    self.found.push(g);
                } else {
                    self.stats.duplicates += 1;
                }
                false
            }
        }
    }

    /// Root of the skeleton's search tree. `resume` is the child-index path
    /// to the first node not yet visited.
    pub fn run(&mut self, resume: Option<&[usize]>) -> Flow {
        let all: Vec<u32> = (0..self.group.len() as u32).collect();
        self.node(&all, resume)
    }

    fn node(&mut self, stab: &[u32], resume: Option<&[usize]>) -> Flow {
        let replaying = matches!(resume, Some(p) if !p.is_empty());
        if !replaying {
            if self.budget.exhausted(self.stats.nodes) {
                return Flow::Budget(Vec::new());
            }
            self.stats.nodes += 1;
        }

        let open = self.open();
        if open == 0 {
            debug_assert!(!replaying);
            return if self.leaf() { Flow::Stop } else { Flow::Continue };
        }

        let mut pick: Option<(usize, usize, u128)> = None;
        for v in bits(open) {
            let adm = self.admissible(v, open);
            let count = adm.count_ones() as usize;
            if count < self.deficit[v] {
                debug_assert!(!replaying);
                self.stats.girth_prunes += 1;
                return Flow::Continue;
            }
            let slack = count - self.deficit[v];
            if pick.is_none_or(|(s, _, _)| slack < s) {
                pick = Some((slack, v, adm));
            }
        }
        let (_, u, adm) = pick.expect("open vertices exist");

        let stab_u: Vec<u32> = stab
            .iter()
            .copied()
            .filter(|&k| self.group[k as usize][u] as usize == u)
            .collect();
        let candidates: Vec<usize> = bits(adm).collect();
        let start = match resume {
            Some(p) if !p.is_empty() => p[0],
            _ => 0,
        };

        let mut explored: Vec<usize> = Vec::new();
        let mut earlier: u128 = 0;
        let mut flow = Flow::Continue;
        for (i, &w) in candidates.iter().enumerate() {
            let skip = explored.iter().any(|&y| {
                stab_u
                    .iter()
                    .any(|&k| self.group[k as usize][y] as usize == w)
            });
            if i < start || skip {
                if skip && i >= start {
                    self.stats.orbit_prunes += 1;
                }
                if !skip {
                    explored.push(w);
                }
                self.set_forbid(u, w, true);
                earlier |= bit(w);
                continue;
            }
            explored.push(w);

            let child_stab: Vec<u32> = stab_u
                .iter()
                .copied()
                .filter(|&k| {
                    let img = &self.group[k as usize];
                    img[w] as usize == w && bits(earlier).all(|x| earlier & bit(img[x] as usize) != 0)
                })
                .collect();
            let child_resume = match resume {
                Some(p) if !p.is_empty() && i == start => Some(&p[1..]),
                _ => None,
            };
            self.add_edge(u, w);
            let f = self.node(&child_stab, child_resume);
            self.remove_edge(u, w);
            self.set_forbid(u, w, true);
            earlier |= bit(w);
            match f {
                Flow::Continue => {}
                Flow::Stop => {
                    flow = Flow::Stop;
                    break;
                }
                Flow::Budget(mut p) => {
                    p.insert(0, i);
                    flow = Flow::Budget(p);
                    break;
                }
            }
        }
        for w in bits(earlier) {
            self.set_forbid(u, w, false);
        }
        flow
    }
}
