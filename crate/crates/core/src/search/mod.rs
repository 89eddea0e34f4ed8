//! Exhaustive search for `(r, 1, g)`-graphs of a given order.
//!
//! Out-degree 1 makes the arcs a disjoint union of directed cycles, so the
//! search first fixes an arc skeleton (a partition of `n` into cycle lengths
//! `>= g`) and then completes it with undirected edges. Different skeletons
//! give non-isomorphic graphs; within a skeleton, isomorphic completions are
//! images of each other under the skeleton's automorphism group, which the
//! completion search uses to skip equivalent branches.

mod checkpoint;
mod engine;
pub mod skeleton;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::ahm_bound;
use crate::graph::{CageParams, MixedGraph};

pub use checkpoint::{Checkpoint, GraphRecord, FORMAT as CHECKPOINT_FORMAT, VERSION as CHECKPOINT_VERSION};
use engine::{Budget, Engine, Flow};
pub use skeleton::{arc_skeletons, partitions_min_part, Skeleton};

/// Largest order the bitset engine handles.
pub const MAX_ORDER: usize = 128;

/// Skeleton groups larger than this fall back to rotations, then to nothing.
pub const GROUP_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Stop at the first witness.
    Decide,
    /// Collect one witness per isomorphism class.
    Enumerate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub max_nodes: Option<u64>,
    pub max_secs: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub params: CageParams,
    pub n: usize,
    pub mode: Mode,
    pub limits: Limits,
    /// Worker threads; results do not depend on it.
    pub threads: usize,
}

impl SearchSpec {
    pub fn decide(r: usize, g: usize, n: usize) -> Self {
        SearchSpec {
            params: CageParams::new(r, 1, g),
            n,
            mode: Mode::Decide,
            limits: Limits::default(),
            threads: 1,
        }
    }

    pub fn enumerate(r: usize, g: usize, n: usize) -> Self {
        SearchSpec {
            mode: Mode::Enumerate,
            ..Self::decide(r, g, n)
        }
    }

    pub fn with_max_nodes(mut self, nodes: u64) -> Self {
        self.limits.max_nodes = Some(nodes);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    /// Nodes where some vertex had fewer girth-compatible partners than it
    /// still needed.
    pub girth_prunes: u64,
    /// Children skipped as images of an explored sibling.
    pub orbit_prunes: u64,
    /// Leaves isomorphic to an earlier witness (enumerate mode).
    pub duplicates: u64,
    /// Complete graphs whose girth exceeded the target.
    pub girth_too_large: u64,
    /// Skeletons whose search tree was fully explored.
    pub skeletons_done: u64,
}

impl std::ops::AddAssign for SearchStats {
    fn add_assign(&mut self, o: Self) {
        self.nodes += o.nodes;
        self.leaves += o.leaves;
        self.girth_prunes += o.girth_prunes;
        self.orbit_prunes += o.orbit_prunes;
        self.duplicates += o.duplicates;
        self.girth_too_large += o.girth_too_large;
        self.skeletons_done += o.skeletons_done;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Found(Vec<MixedGraph>),
    /// No `(r,1,g)`-graph of this order exists.
    ExhaustedNone,
    BudgetExceeded(Box<Checkpoint>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: Status,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search supports out-degree 1 only (got z = {0})")]
    UnsupportedOutDegree(usize),
    #[error("order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("order {n} is below the girth {g}")]
    OrderBelowGirth { n: usize, g: usize },
    #[error("girth must be at least 1")]
    ZeroGirth,
    #[error("checkpoint does not match the search: {0}")]
    CheckpointMismatch(String),
    #[error("bad checkpoint: {0}")]
    BadCheckpoint(String),
    #[error("i/o: {0}")]
    Io(String),
}

fn validate(spec: &SearchSpec) -> Result<(), SearchError> {
    let CageParams { z, g, .. } = spec.params;
    if z != 1 {
        return Err(SearchError::UnsupportedOutDegree(z));
    }
    if g == 0 {
        return Err(SearchError::ZeroGirth);
    }
    if spec.n > MAX_ORDER {
        return Err(SearchError::OrderTooLarge(spec.n));
    }
    if spec.n < g {
        return Err(SearchError::OrderBelowGirth { n: spec.n, g });
    }
    Ok(())
}

fn skeleton_group(s: &Skeleton) -> Vec<Vec<u8>> {
    s.automorphisms(GROUP_CAP, false)
        .or_else(|| s.automorphisms(GROUP_CAP, true))
        .unwrap_or_else(|| vec![(0..s.order() as u8).collect()])
}

struct SkeletonRun {
    stats: SearchStats,
    found: Vec<MixedGraph>,
    flow: Flow,
}

fn run_skeleton(
    spec: &SearchSpec,
    skeleton: &Skeleton,
    budget: &Budget,
    stats: SearchStats,
    found: Vec<MixedGraph>,
    resume: Option<&[usize]>,
) -> SkeletonRun {
    let mut e = Engine::new(
        skeleton,
        spec.params.r,
        spec.params.g,
        skeleton_group(skeleton),
        spec.mode,
        budget,
        stats,
        found,
    );
    let flow = e.run(resume);
    if matches!(flow, Flow::Continue) {
        e.stats.skeletons_done += 1;
    }
    SkeletonRun {
        stats: e.stats,
        found: e.found,
        flow,
    }
}

pub fn search_order(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    validate(spec)?;
    drive(spec, 0, Vec::new(), SearchStats::default(), Vec::new())
}

/// Continues a search from a checkpoint written by an earlier run of `spec`.
pub fn resume_search(spec: &SearchSpec, cp: &Checkpoint) -> Result<SearchOutcome, SearchError> {
    validate(spec)?;
    if cp.params != spec.params || cp.n != spec.n || cp.mode != spec.mode {
        return Err(SearchError::CheckpointMismatch(format!(
            "checkpoint is for {:?} n={} {:?}",
            cp.params, cp.n, cp.mode
        )));
    }
    let skeletons: Vec<Skeleton> = arc_skeletons(spec.n, spec.params.g).collect();
    if skeletons.get(cp.skeleton).map(|s| &s.parts) != Some(&cp.parts) {
        return Err(SearchError::CheckpointMismatch("skeleton index".into()));
    }
    let found = cp
        .witnesses
        .iter()
        .map(GraphRecord::to_graph)
        .collect::<Result<Vec<_>, _>>()?;
    drive(spec, cp.skeleton, cp.path.clone(), cp.stats, found)
}

fn drive(
    spec: &SearchSpec,
    first: usize,
    path: Vec<usize>,
    mut stats: SearchStats,
    mut found: Vec<MixedGraph>,
) -> Result<SearchOutcome, SearchError> {
    let CageParams { r, g, .. } = spec.params;
    let skeletons: Vec<Skeleton> = arc_skeletons(spec.n, g).collect();
    let finish = |stats: SearchStats, found: Vec<MixedGraph>| SearchOutcome {
        status: if found.is_empty() {
            Status::ExhaustedNone
        } else {
            Status::Found(found)
        },
        stats,
    };
    // handshake: r*n edge endpoints must pair up
    if (r * spec.n) % 2 == 1 || r >= spec.n {
        return Ok(finish(stats, found));
    }
    let deadline = spec.limits.max_secs.map(|s| Instant::now() + Duration::from_secs_f64(s));
    let budget = Budget {
        max_nodes: spec.limits.max_nodes,
        deadline,
    };
    let checkpoint = |k: usize, path: Vec<usize>, stats: SearchStats, found: &[MixedGraph]| Checkpoint {
        format: CHECKPOINT_FORMAT.to_string(),
        version: CHECKPOINT_VERSION,
        params: spec.params,
        n: spec.n,
        mode: spec.mode,
        skeleton: k,
        parts: skeletons[k].parts.clone(),
        path,
        stats,
        witnesses: found.iter().map(GraphRecord::from).collect(),
    };

    // Parallel runs explore each remaining skeleton on its own with the
    // whole remaining budget; the results are then merged in skeleton
    // order, re-running sequentially wherever the shared budget would have
    // cut in, so the outcome matches a single-threaded run.
    let mut pre: Vec<Option<SkeletonRun>> = (first..skeletons.len()).map(|_| None).collect();
    if spec.threads > 1 && skeletons.len() > first + 1 {
        let remaining = spec.limits.max_nodes.map(|m| m.saturating_sub(stats.nodes));
        let local = Budget {
            max_nodes: remaining,
            deadline,
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.threads)
            .build()
            .expect("thread pool");
        let runs: Vec<SkeletonRun> = pool.install(|| {
            (first..skeletons.len())
                .into_par_iter()
                .map(|k| {
                    let resume = (k == first).then_some(path.as_slice());
                    run_skeleton(spec, &skeletons[k], &local, SearchStats::default(), Vec::new(), resume)
                })
                .collect()
        });
        pre = runs.into_iter().map(Some).collect();
    }

    for k in first..skeletons.len() {
        let resume = (k == first).then_some(path.as_slice());
        let usable = pre[k - first].take().filter(|run| {
            !matches!(run.flow, Flow::Budget(_))
                && spec
                    .limits
                    .max_nodes
                    .is_none_or(|m| stats.nodes + run.stats.nodes <= m)
        });
        let run = match usable {
            Some(mut run) => {
                let mut s = stats;
                s += run.stats;
                found.append(&mut run.found);
                SkeletonRun {
                    stats: s,
                    found: std::mem::take(&mut found),
                    flow: run.flow,
                }
            }
            None => run_skeleton(spec, &skeletons[k], &budget, stats, std::mem::take(&mut found), resume),
        };
        stats = run.stats;
        found = run.found;
        match run.flow {
            Flow::Continue => {}
            Flow::Stop => return Ok(finish(stats, found)),
            Flow::Budget(p) => {
                let cp = checkpoint(k, p, stats, &found);
                return Ok(SearchOutcome {
                    status: Status::BudgetExceeded(Box::new(cp)),
                    stats,
                });
            }
        }
    }
    Ok(finish(stats, found))
}

/// How a cage number was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A witness exists at the AHM bound itself.
    BoundMatched,
    /// Orders from the bound up to `value - 1` were searched exhaustively.
    SearchDetermined { excluded: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CageNumber {
    pub params: CageParams,
    pub value: usize,
    pub lower_bound: usize,
    pub provenance: Provenance,
    pub witness: MixedGraph,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CageError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("inconclusive: {reason}")]
    Inconclusive { reason: String, stats: SearchStats },
}

/// Searches orders `ahm_bound(r, g), ahm_bound + 1, ..` up to `n_max`.
/// Orders below the bound are ruled out by the bound, not searched.
pub fn determine_cage_number(
    params: CageParams,
    n_max: usize,
    limits: Limits,
    threads: usize,
) -> Result<CageNumber, CageError> {
    if params.z != 1 {
        return Err(SearchError::UnsupportedOutDegree(params.z).into());
    }
    let lower = ahm_bound(params.r as u64, params.g as u32).map_err(|_| SearchError::ZeroGirth)? as usize;
    let mut total = SearchStats::default();
    let mut excluded = Vec::new();
    for n in lower..=n_max {
        let spec = SearchSpec {
            params,
            n,
            mode: Mode::Decide,
            limits,
            threads,
        };
        let out = search_order(&spec)?;
        total += out.stats;
        match out.status {
            Status::Found(mut w) => {
                let provenance = if n == lower {
                    Provenance::BoundMatched
                } else {
                    Provenance::SearchDetermined { excluded }
                };
                return Ok(CageNumber {
                    params,
                    value: n,
                    lower_bound: lower,
                    provenance,
                    witness: w.remove(0),
                    stats: total,
                });
            }
            Status::ExhaustedNone => excluded.push(n),
            Status::BudgetExceeded(_) => {
                return Err(CageError::Inconclusive {
                    reason: format!("budget exhausted at order {n}"),
                    stats: total,
                })
            }
        }
    }
    Err(CageError::Inconclusive {
        reason: format!("no witness up to order {n_max} (lower bound {lower})"),
        stats: total,
    })
}
