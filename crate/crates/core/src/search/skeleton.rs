//! Arc skeletons for out-degree 1.
//!
//! With in- and out-degree 1 the arcs form a permutation digraph: disjoint
//! directed cycles covering every vertex. Each such cycle is itself a mixed
//! cycle, so all of them must have length at least the target girth. Up to
//! isomorphism a skeleton is a partition of `n` into parts `>= g`.

use serde::{Deserialize, Serialize};

/// Partitions of `n` into parts `>= min_part`, each sorted descending, in
/// reverse lexicographic order (`[n]` first).
pub fn partitions_min_part(n: usize, min_part: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (min..=max.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    go(n, n, min_part.max(1), &mut Vec::new(), &mut out);
    out
}

/// Disjoint directed cycles on consecutive vertex blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skeleton {
    pub parts: Vec<usize>,
}

impl Skeleton {
    pub fn order(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Block starts, one per cycle.
    pub fn starts(&self) -> Vec<usize> {
        self.parts
            .iter()
            .scan(0, |acc, &p| {
                let s = *acc;
                *acc += p;
                Some(s)
            })
            .collect()
    }

    /// Arc `v -> successor(v)` within each block.
    pub fn successor(&self) -> Vec<usize> {
        let mut succ = vec![0; self.order()];
        for (&s, &len) in self.starts().iter().zip(&self.parts) {
            for t in 0..len {
                succ[s + t] = s + (t + 1) % len;
            }
        }
        succ
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.successor().into_iter().enumerate().collect()
    }

    /// Size of the skeleton's automorphism group: for `k` cycles of length
    /// `L`, a factor `L^k * k!`.
    pub fn group_order(&self) -> u128 {
        let mut order: u128 = 1;
        let mut i = 0;
        while i < self.parts.len() {
            let len = self.parts[i];
            let k = self.parts[i..].iter().take_while(|&&p| p == len).count();
            for j in 1..=k {
                order = order.saturating_mul(len as u128).saturating_mul(j as u128);
            }
            i += k;
        }
        order
    }

    /// Every automorphism of the skeleton as an image array, or `None` when
    /// there are more than `cap`. With `rotations_only` the cycles are not
    /// permuted among themselves.
    pub fn automorphisms(&self, cap: usize, rotations_only: bool) -> Option<Vec<Vec<u8>>> {
        let starts = self.starts();
        let n = self.order();
        // per block: list of (target block, rotation) options, expanded jointly
        let mut result: Vec<Vec<u8>> = vec![(0..n as u8).collect()];
        let mut i = 0;
        while i < self.parts.len() {
            let len = self.parts[i];
            let k = self.parts[i..].iter().take_while(|&&p| p == len).count();
            let blocks: Vec<usize> = (i..i + k).collect();
            let perms = if rotations_only {
                vec![blocks.clone()]
            } else {
                permutations(&blocks)
            };
            let mut next = Vec::new();
            for base in &result {
                for target in &perms {
                    let mut rot = vec![0usize; k];
                    loop {
                        let mut img = base.clone();
                        for (bi, &b) in blocks.iter().enumerate() {
                            let tb = target[bi];
                            for t in 0..len {
                                img[starts[b] + t] = (starts[tb] + (t + rot[bi]) % len) as u8;
                            }
                        }
                        next.push(img);
                        if next.len() > cap {
                            return None;
                        }
                        // odometer over rotations
                        let mut d = 0;
                        while d < k {
                            rot[d] += 1;
                            if rot[d] < len {
                                break;
                            }
                            rot[d] = 0;
                            d += 1;
                        }
                        if d == k {
                            break;
                        }
                    }
                }
            }
            result = next;
            i += k;
        }
        Some(result)
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Skeletons of order `n` whose cycles all have length `>= g`.
pub fn arc_skeletons(n: usize, g: usize) -> impl Iterator<Item = Skeleton> {
    partitions_min_part(n, g)
        .into_iter()
        .map(|parts| Skeleton { parts })
}
