//! Canonical labeling, isomorphism and automorphism groups of mixed graphs.
//!
//! Individualization-refinement over three adjacency relations (edge,
//! arc-out, arc-in). Each node of the search tree carries an equitable
//! ordered partition; leaves are discrete partitions read as labelings. The
//! canonical leaf minimizes (refinement trace, encoding). Subtrees are pruned
//! by trace comparison and by orbits of automorphisms found along the way.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::graph::MixedGraph;
use crate::perm::{lcm, Permutation};

/// Ordered partition of `0..n` into contiguous cells of `order`.
#[derive(Clone, Debug)]
struct Partition {
    order: Vec<usize>,
    pos: Vec<usize>,
    /// `cell_start[p]` is the start of the cell holding position `p`.
    cell_start: Vec<usize>,
    /// `cell_end[s]` is the end (exclusive) of the cell starting at `s`.
    cell_end: Vec<usize>,
    cells: usize,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut cell_end = vec![0; n];
        if n > 0 {
            cell_end[0] = n;
        }
        Partition {
            order: (0..n).collect(),
            pos: (0..n).collect(),
            cell_start: vec![0; n],
            cell_end,
            cells: usize::from(n > 0),
        }
    }

    fn n(&self) -> usize {
        self.order.len()
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.n()
    }

    fn cell(&self, start: usize) -> &[usize] {
        &self.order[start..self.cell_end[start]]
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        let mut s = 0;
        while s < self.n() {
            let len = self.cell_end[s] - s;
            if len > 1 && best.is_none_or(|(_, l)| len < l) {
                best = Some((s, len));
            }
            s = self.cell_end[s];
        }
        best.map(|(s, _)| s)
    }

    /// Splits `{v}` off the front of its cell; returns the new singleton's start.
    fn individualize(&mut self, v: usize) -> usize {
        let p = self.pos[v];
        let s = self.cell_start[p];
        let end = self.cell_end[s];
        debug_assert!(end - s > 1);
        let other = self.order[s];
        self.order.swap(s, p);
        self.pos[other] = p;
        self.pos[v] = s;
        self.cell_end[s] = s + 1;
        self.cell_end[s + 1] = end;
        for q in s + 1..end {
            self.cell_start[q] = s + 1;
        }
        self.cells += 1;
        s
    }

    /// Labeling of a discrete partition: vertex -> position.
    fn labeling(&self) -> Permutation {
        Permutation::from_vec_unchecked(self.pos.clone())
    }
}

/// Neighbour lists for the three relations.
struct Relations {
    edge: Vec<Vec<usize>>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl Relations {
    fn new(g: &MixedGraph) -> Self {
        let n = g.order();
        Relations {
            edge: (0..n).map(|v| g.neighbors(v).to_vec()).collect(),
            out: (0..n).map(|v| g.out_neighbors(v).to_vec()).collect(),
            inn: (0..n).map(|v| g.in_neighbors(v).to_vec()).collect(),
        }
    }
}

/// Refines `p` to the coarsest equitable partition below it, starting from
/// the given splitter cells. Every split is appended to `trace`.
fn refine(rel: &Relations, p: &mut Partition, splitters: &[usize], trace: &mut Vec<u64>) {
    let n = p.n();
    let mut queued = vec![false; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in splitters {
        if !queued[s] {
            queued[s] = true;
            queue.push_back(s);
        }
    }
    let mut key = vec![0u64; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut hit_cells: Vec<usize> = Vec::new();
    while let Some(w) = queue.pop_front() {
        queued[w] = false;
        if p.is_discrete() {
            break;
        }
        // key packs (edges into W, arcs into W, arcs out of W)
        for &x in &p.order[w..p.cell_end[w]] {
            for &y in &rel.edge[x] {
                key[y] += 1 << 40;
                touched.push(y);
            }
            for &y in &rel.inn[x] {
                key[y] += 1 << 20;
                touched.push(y);
            }
            for &y in &rel.out[x] {
                key[y] += 1;
                touched.push(y);
            }
        }
        for &y in &touched {
            hit_cells.push(p.cell_start[p.pos[y]]);
        }
        hit_cells.sort_unstable();
        hit_cells.dedup();
        for &s in &hit_cells {
            let end = p.cell_end[s];
            if end - s == 1 {
                continue;
            }
            let seg = &mut p.order[s..end];
            if seg.iter().all(|&v| key[v] == key[seg[0]]) {
                continue;
            }
            seg.sort_by_key(|&v| key[v]);
            trace.extend([w as u64, s as u64]);
            let mut start = s;
            for q in s..=end {
                if q == end || (q > start && key[p.order[q]] != key[p.order[start]]) {
                    trace.extend([(q - start) as u64, key[p.order[start]]]);
                    p.cell_end[start] = q;
                    if start != s {
                        p.cells += 1;
                        if !queued[start] {
                            queued[start] = true;
                            queue.push_back(start);
                        }
                    }
                    start = q;
                }
                if q < end {
                    p.pos[p.order[q]] = q;
                    p.cell_start[q] = start;
                }
            }
            // the first part keeps its start and needs its own pass too
            if !queued[s] {
                queued[s] = true;
                queue.push_back(s);
            }
        }
        for &y in &touched {
            key[y] = 0;
        }
        touched.clear();
        hit_cells.clear();
        trace.push(u64::MAX);
    }
}

/// Row-major bit encoding of the edge matrix followed by the arc matrix of
/// `g` relabeled by `lab`.
fn encode(g: &MixedGraph, lab: &Permutation) -> Vec<u8> {
    let n = g.order();
    let mut bits = vec![0u8; (2 * n * n).div_ceil(8)];
    let mut set = |i: usize| bits[i / 8] |= 0x80 >> (i % 8);
    for &(u, v) in g.edges() {
        let (a, b) = (lab.apply(u), lab.apply(v));
        set(a * n + b);
        set(b * n + a);
    }
    for &(u, v) in g.arcs() {
        set(n * n + lab.apply(u) * n + lab.apply(v));
    }
    bits
}

/// Disjoint-set orbits of the group generated by `gens`.
fn orbits(n: usize, gens: &[&Permutation]) -> Vec<usize> {
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = x;
        while parent[x] != r {
            let next = parent[x];
            parent[x] = r;
            x = next;
        }
        r
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for g in gens {
        for x in 0..n {
            let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

fn fixes_all(g: &Permutation, points: &[usize]) -> bool {
    points.iter().all(|&x| g.apply(x) == x)
}

/// Relabeling-invariant encoding plus the labeling that produces it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub order: usize,
    pub encoding: Vec<u8>,
    /// Sends each vertex to its canonical position.
    pub labeling: Permutation,
}

impl CanonicalForm {
    /// Same encoding means isomorphic graphs.
    pub fn same_class(&self, other: &CanonicalForm) -> bool {
        self.order == other.order && self.encoding == other.encoding
    }

    pub fn hex(&self) -> String {
        self.encoding.iter().map(|b| format!("{b:02x}")).collect()
    }
}

struct Leaf {
    traces: Vec<Vec<u64>>,
    encoding: Vec<u8>,
    labeling: Permutation,
}

struct Canonizer<'a> {
    g: &'a MixedGraph,
    rel: Relations,
    first: Option<Leaf>,
    best: Option<Leaf>,
    automorphisms: Vec<Permutation>,
    leaves: u64,
}

impl Canonizer<'_> {
    fn record_automorphism(&mut self, from: &Permutation, to: &Permutation) {
        // from(v) == to(w) for the automorphism v -> w
        let gamma = from.then(&to.inverse());
        if !gamma.is_identity() && !self.automorphisms.contains(&gamma) {
            debug_assert!(self.g.is_automorphism(&gamma));
            self.automorphisms.push(gamma);
        }
    }

    fn leaf(&mut self, p: &Partition, traces: &[Vec<u64>]) {
        self.leaves += 1;
        let labeling = p.labeling();
        let encoding = encode(self.g, &labeling);
        if let Some(first) = &self.first {
            if first.traces == traces && first.encoding == encoding {
                let f = first.labeling.clone();
                self.record_automorphism(&labeling, &f);
                return;
            }
        }
        let leaf = Leaf {
            traces: traces.to_vec(),
            encoding,
            labeling,
        };
        let Some(best) = &self.best else {
            self.first = Some(Leaf {
                traces: leaf.traces.clone(),
                encoding: leaf.encoding.clone(),
                labeling: leaf.labeling.clone(),
            });
            self.best = Some(leaf);
            return;
        };
        match (&leaf.traces, &leaf.encoding).cmp(&(&best.traces, &best.encoding)) {
            Ordering::Less => self.best = Some(leaf),
            Ordering::Equal => {
                let b = best.labeling.clone();
                self.record_automorphism(&leaf.labeling, &b);
            }
            Ordering::Greater => {}
        }
    }

    /// Nothing below can beat the best leaf or match the first one.
    fn prunable(&self, traces: &[Vec<u64>]) -> bool {
        let Some(best) = &self.best else {
            return false;
        };
        let d = traces.len();
        let worse = traces.cmp(&best.traces[..d.min(best.traces.len())]) == Ordering::Greater;
        let matches_first = self
            .first
            .as_ref()
            .is_some_and(|f| f.traces.len() >= d && f.traces[..d] == *traces);
        worse && !matches_first
    }

    fn search(&mut self, p: Partition, prefix: &mut Vec<usize>, traces: &mut Vec<Vec<u64>>) {
        if self.prunable(traces) {
            return;
        }
        let Some(target) = p.target_cell() else {
            self.leaf(&p, traces);
            return;
        };
        let mut children: Vec<usize> = p.cell(target).to_vec();
        children.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        for x in children {
            if !explored.is_empty() {
                let gens: Vec<&Permutation> = self
                    .automorphisms
                    .iter()
                    .filter(|a| fixes_all(a, prefix))
                    .collect();
                if !gens.is_empty() {
                    let orb = orbits(p.n(), &gens);
                    if explored.iter().any(|&y| orb[y] == orb[x]) {
                        continue;
                    }
                }
            }
            explored.push(x);
            let mut child = p.clone();
            let s = child.individualize(x);
            let mut t = vec![s as u64];
            refine(&self.rel, &mut child, &[s], &mut t);
            traces.push(t);
            prefix.push(x);
            self.search(child, prefix, traces);
            prefix.pop();
            traces.pop();
        }
    }
}

fn root(g: &MixedGraph, rel: &Relations) -> (Partition, Vec<u64>) {
    let mut p = Partition::unit(g.order());
    let mut t = Vec::new();
    if g.order() > 0 {
        refine(rel, &mut p, &[0], &mut t);
    }
    (p, t)
}

pub fn canonical_form(g: &MixedGraph) -> CanonicalForm {
    canonical_form_with_stats(g).0
}

/// Also returns the automorphisms met during the search and the leaf count.
pub fn canonical_form_with_stats(g: &MixedGraph) -> (CanonicalForm, Vec<Permutation>, u64) {
    let rel = Relations::new(g);
    let (p, t) = root(g, &rel);
    let mut c = Canonizer {
        g,
        rel,
        first: None,
        best: None,
        automorphisms: Vec::new(),
        leaves: 0,
    };
    c.search(p, &mut Vec::new(), &mut vec![t]);
    let best = c.best.expect("search visits at least one leaf");
    (
        CanonicalForm {
            order: g.order(),
            encoding: best.encoding,
            labeling: best.labeling,
        },
        c.automorphisms,
        c.leaves,
    )
}

/// Isomorphism test; on success the witness maps `g` onto `h`.
pub fn is_isomorphic(g: &MixedGraph, h: &MixedGraph) -> Option<Permutation> {
    if g.order() != h.order() || g.edges().len() != h.edges().len() || g.arcs().len() != h.arcs().len() {
        return None;
    }
    let degs = |x: &MixedGraph| {
        let p = x.degree_profile();
        let mut t: Vec<_> = (0..x.order()).map(|v| (p.deg[v], p.outdeg[v], p.indeg[v])).collect();
        t.sort_unstable();
        t
    };
    if degs(g) != degs(h) {
        return None;
    }
    let cg = canonical_form(g);
    let ch = canonical_form(h);
    if !cg.same_class(&ch) {
        return None;
    }
    let witness = cg.labeling.then(&ch.labeling.inverse());
    debug_assert_eq!(g.apply_permutation(&witness).as_ref(), Ok(h));
    Some(witness)
}

/// Automorphism group given by a strong generating set along a base.
#[derive(Clone, Debug, Serialize)]
pub struct AutGroup {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    /// Product of the basic orbit lengths.
    pub order: u128,
    pub base: Vec<usize>,
    pub orbit_lengths: Vec<usize>,
}

/// Search below `p` for a leaf matching `target` (same traces and encoding).
struct Matcher<'a> {
    g: &'a MixedGraph,
    rel: &'a Relations,
    target: &'a Leaf,
    gens: &'a [Permutation],
    nodes: u64,
}

impl Matcher<'_> {
    fn find(&mut self, p: Partition, prefix: &mut Vec<usize>, traces: &mut Vec<Vec<u64>>) -> Option<Permutation> {
        self.nodes += 1;
        let d = traces.len();
        if traces[d - 1] != self.target.traces[d - 1] {
            return None;
        }
        let Some(target) = p.target_cell() else {
            let lab = p.labeling();
            if encode(self.g, &lab) == self.target.encoding {
                return Some(lab.then(&self.target.labeling.inverse()));
            }
            return None;
        };
        let mut children: Vec<usize> = p.cell(target).to_vec();
        children.sort_unstable();
        let gens: Vec<&Permutation> = self.gens.iter().filter(|a| fixes_all(a, prefix)).collect();
        let orb = orbits(p.n(), &gens);
        let mut tried: Vec<usize> = Vec::new();
        for x in children {
            if tried.iter().any(|&y| orb[y] == orb[x]) {
                continue;
            }
            tried.push(x);
            let mut child = p.clone();
            let s = child.individualize(x);
            let mut t = vec![s as u64];
            refine(self.rel, &mut child, &[s], &mut t);
            traces.push(t);
            prefix.push(x);
            let found = self.find(child, prefix, traces);
            prefix.pop();
            traces.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

pub fn automorphism_group(g: &MixedGraph) -> AutGroup {
    let n = g.order();
    let rel = Relations::new(g);
    let (p0, t0) = root(g, &rel);

    // first path down to a leaf, keeping every node
    let mut path: Vec<Partition> = vec![p0.clone()];
    let mut traces: Vec<Vec<u64>> = vec![t0];
    let mut base: Vec<usize> = Vec::new();
    let mut p = p0;
    while let Some(target) = p.target_cell() {
        let x = *p.cell(target).iter().min().unwrap();
        let mut child = p.clone();
        let s = child.individualize(x);
        let mut t = vec![s as u64];
        refine(&rel, &mut child, &[s], &mut t);
        base.push(x);
        traces.push(t);
        path.push(child.clone());
        p = child;
    }
    let lab = p.labeling();
    let first = Leaf {
        traces: traces.clone(),
        encoding: encode(g, &lab),
        labeling: lab,
    };

    let mut gens: Vec<Permutation> = Vec::new();
    let mut orbit_lengths = vec![0usize; base.len()];
    for k in (0..base.len()).rev() {
        let node = &path[k];
        let cell: Vec<usize> = node.cell(node.target_cell().unwrap()).to_vec();
        let prefix = &base[..k];
        let mut excluded: HashSet<usize> = HashSet::new();
        loop {
            let stab: Vec<&Permutation> = gens.iter().filter(|a| fixes_all(a, prefix)).collect();
            let orb = orbits(n, &stab);
            let rep = orb[base[k]];
            let candidate = cell
                .iter()
                .copied()
                .filter(|&x| orb[x] != rep && !excluded.iter().any(|&y| orb[y] == orb[x]))
                .min();
            let Some(x) = candidate else {
                orbit_lengths[k] = cell.iter().filter(|&&x| orb[x] == rep).count();
                break;
            };
            let mut child = node.clone();
            let s = child.individualize(x);
            let mut t = vec![s as u64];
            refine(&rel, &mut child, &[s], &mut t);
            let mut tr: Vec<Vec<u64>> = traces[..=k].to_vec();
            tr.push(t);
            let mut pre = prefix.to_vec();
            pre.push(x);
            let mut m = Matcher {
                g,
                rel: &rel,
                target: &first,
                gens: &gens,
                nodes: 0,
            };
            match m.find(child, &mut pre, &mut tr) {
                Some(gamma) => {
                    debug_assert!(g.is_automorphism(&gamma));
                    gens.push(gamma);
                }
                None => {
                    excluded.insert(x);
                }
            }
        }
    }
    let order = orbit_lengths.iter().map(|&l| l as u128).product();
    AutGroup {
        degree: n,
        generators: gens,
        order,
        base,
        orbit_lengths,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    TooLarge { order: u128, cap: u128 },
}

impl AutGroup {
    /// Every element, by closure under the generators. Identity first.
    pub fn elements(&self, cap: u128) -> Result<Vec<Permutation>, GroupError> {
        if self.order > cap {
            return Err(GroupError::TooLarge {
                order: self.order,
                cap,
            });
        }
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in &self.generators {
                let y = x.then(s);
                if seen.insert(y.clone()) {
                    if seen.len() as u128 > cap {
                        return Err(GroupError::TooLarge {
                            order: seen.len() as u128,
                            cap,
                        });
                    }
                    out.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }
}

/// Structure summary of a finite permutation group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupFingerprint {
    pub order: u128,
    /// Order as counted by enumerating every element.
    pub enumerated_order: u128,
    pub abelian: bool,
    pub generators_commute: bool,
    pub max_element_order: u64,
    /// `(element order, count)`, ascending.
    pub element_orders: Vec<(u64, u64)>,
    /// Invariant factors `d_1 | d_2 | ..` when abelian.
    pub invariant_factors: Option<Vec<u64>>,
    pub name: String,
}

pub const DEFAULT_ENUMERATION_CAP: u128 = 1000;

pub fn group_fingerprint(a: &AutGroup, cap: u128) -> Result<GroupFingerprint, GroupError> {
    let elems = a.elements(cap)?;
    let generators_commute = a
        .generators
        .iter()
        .enumerate()
        .all(|(i, x)| a.generators[i + 1..].iter().all(|y| x.then(y) == y.then(x)));
    let abelian = elems
        .iter()
        .enumerate()
        .all(|(i, x)| elems[i + 1..].iter().all(|y| x.then(y) == y.then(x)));
    let mut counts: std::collections::BTreeMap<u64, u64> = Default::default();
    for e in &elems {
        *counts.entry(e.order()).or_default() += 1;
    }
    let element_orders: Vec<(u64, u64)> = counts.into_iter().collect();
    let max_element_order = element_orders.last().map_or(1, |&(o, _)| o);
    let invariant_factors = abelian.then(|| invariant_factors(&element_orders));
    let name = match &invariant_factors {
        Some(f) if f.is_empty() => "1".to_string(),
        Some(f) => f.iter().map(|d| format!("Z{d}")).collect::<Vec<_>>().join(" x "),
        None if elems.len() == 6 => "S3".to_string(),
        None => format!("non-abelian of order {}", elems.len()),
    };
    Ok(GroupFingerprint {
        order: a.order,
        enumerated_order: elems.len() as u128,
        abelian,
        generators_commute,
        max_element_order,
        element_orders,
        invariant_factors,
        name,
    })
}

fn primes_of(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= x {
        if x.is_multiple_of(p) {
            out.push(p);
            while x.is_multiple_of(p) {
                x /= p;
            }
        }
        p += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

/// Invariant factors of a finite abelian group from its element-order counts.
///
/// For each prime `p`, `#{x : x^(p^k) = 1} = p^(a_k)` where `a_k` sums
/// `min(k, e_i)` over the exponents `e_i` of the `p`-primary cyclic factors.
fn invariant_factors(element_orders: &[(u64, u64)]) -> Vec<u64> {
    let order: u64 = element_orders.iter().map(|&(_, c)| c).sum();
    let mut primary: Vec<Vec<u64>> = Vec::new();
    for p in primes_of(order) {
        let mut a_prev = 0u32;
        let mut factors_at_least: Vec<u32> = Vec::new();
        let mut pk = 1u64;
        loop {
            pk *= p;
            let count: u64 = element_orders
                .iter()
                .filter(|&&(o, _)| pk.is_multiple_of(o))
                .map(|&(_, c)| c)
                .sum();
            let a_k = count.ilog(p);
            if a_k == a_prev {
                break;
            }
            factors_at_least.push(a_k - a_prev);
            a_prev = a_k;
        }
        // factors_at_least[k] = number of cyclic p-factors of order >= p^(k+1)
        let mut exps: Vec<u64> = Vec::new();
        for (k, &c) in factors_at_least.iter().enumerate() {
            let next = factors_at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..(c - next) {
                exps.push(p.pow(k as u32 + 1));
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        primary.push(exps);
    }
    let width = primary.iter().map(Vec::len).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..width)
        .map(|i| primary.iter().filter_map(|e| e.get(i)).fold(1, |acc, &q| lcm(acc, q)))
        .collect();
    out.reverse();
    out
}
