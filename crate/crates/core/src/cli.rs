//! Command-line front end.
//!
//! Every subcommand prints a human report on stdout, or with `--json` a
//! single JSON document instead. Diagnostics (ignored header lines, errors)
//! go to stderr. Exit codes are a stable contract, see [`exit`].

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{ahm_bound, moore_bound};
use crate::constructions::build_g30_with_report;
use crate::girth::{girth, CycleWitness, Girth, Step};
use crate::io::{export_dot, read_adjacency_matrix_with_header, write_adjacency_matrix};
use crate::iso::{automorphism_group, canonical_form, group_fingerprint, is_isomorphic, DEFAULT_ENUMERATION_CAP};
use crate::search::{
    determine_cage_number, resume_search, search_order, CageError, Checkpoint, Limits, Mode, Provenance,
    SearchOutcome, SearchSpec, SearchStats, Status, MAX_ORDER,
};
use crate::{CageParams, MixedGraph};

pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const BUDGET: i32 = 4;
}

#[derive(Parser, Debug)]
#[command(name = "mixcage", version, about = "Construct, verify and search for mixed cages")]
struct Cli {
    /// Emit one JSON document on stdout instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Matrix,
    Dot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Named {
    G30,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Moore bounds for depths 0..=g and the AHM bound.
    Bounds {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        g: u32,
    },
    /// Emit a known construction.
    Build {
        name: Named,
        #[arg(long, value_enum, default_value = "matrix")]
        format: Format,
    },
    /// Check that a graph is an (r,z,g)-graph.
    Verify {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        z: usize,
        #[arg(long)]
        g: usize,
        file: PathBuf,
    },
    /// Girth and a shortest cycle.
    Girth { file: PathBuf },
    /// Automorphism group generators, order and structure.
    Aut { file: PathBuf },
    /// Isomorphism test with a witness permutation.
    Iso { file1: PathBuf, file2: PathBuf },
    /// Exhaustive search for (r,1,g)-graphs.
    Search {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        z: usize,
        #[arg(long)]
        g: usize,
        /// Search this order only.
        #[arg(long, conflicts_with = "auto", required_unless_present = "auto")]
        n: Option<usize>,
        /// Search upward from the AHM bound until a witness appears.
        #[arg(long)]
        auto: bool,
        /// Highest order tried by --auto.
        #[arg(long, requires = "auto")]
        n_max: Option<usize>,
        /// Collect one witness per isomorphism class.
        #[arg(long, conflicts_with = "auto")]
        enumerate: bool,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_secs: Option<f64>,
        /// Resume from this file if it exists; write it when the budget runs out.
        #[arg(long, conflicts_with = "auto")]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Parse a matrix file and write it back in normalized form.
    Ingest { file: PathBuf },
    /// Convert a matrix file to another format.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
}

/// A failed command: exit code and message for stderr.
struct Failure(i32, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(exit::USAGE, msg.into())
}

fn io_err(msg: impl Into<String>) -> Failure {
    Failure(exit::IO, msg.into())
}

struct Ctx<'a> {
    json: bool,
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    stdin_used: bool,
}

impl Ctx<'_> {
    fn read_text(&mut self, path: &Path) -> Result<String, Failure> {
        if path == Path::new("-") {
            if self.stdin_used {
                return Err(usage("standard input can be read only once"));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| io_err(format!("stdin: {e}")))?;
            Ok(s)
        } else {
            fs::read_to_string(path).map_err(|e| io_err(format!("{}: {e}", path.display())))
        }
    }

    fn read_graph(&mut self, path: &Path) -> Result<(MixedGraph, Vec<String>), Failure> {
        let text = self.read_text(path)?;
        let parsed =
            read_adjacency_matrix_with_header(&text).map_err(|e| io_err(format!("{}: {e}", path.display())))?;
        for line in &parsed.header {
            let _ = writeln!(self.err, "note: {}: ignored header line {line:?}", path.display());
        }
        Ok((parsed.graph, parsed.header))
    }

    fn emit(&mut self, value: &Value, text: &str) -> Result<(), Failure> {
        let r = if self.json {
            writeln!(self.out, "{}", serde_json::to_string_pretty(value).expect("report serializes"))
        } else {
            write!(self.out, "{text}")
        };
        r.map_err(|e| io_err(format!("stdout: {e}")))
    }
}

/// Runs the command line `args` (program name first) against the process's
/// standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        stdin,
        out,
        err,
        stdin_used: false,
    };
    match dispatch(cli.cmd, &mut ctx) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Cmd, ctx: &mut Ctx) -> Result<i32, Failure> {
    match cmd {
        Cmd::Bounds { r, g } => bounds(ctx, r, g),
        Cmd::Build { name: Named::G30, format } => build_g30_cmd(ctx, format),
        Cmd::Verify { r, z, g, file } => verify(ctx, r, z, g, &file),
        Cmd::Girth { file } => girth_cmd(ctx, &file),
        Cmd::Aut { file } => aut(ctx, &file),
        Cmd::Iso { file1, file2 } => iso(ctx, &file1, &file2),
        Cmd::Search {
            r,
            z,
            g,
            n,
            auto: _,
            n_max,
            enumerate,
            budget_nodes,
            budget_secs,
            checkpoint,
            threads,
        } => {
            if z != 1 {
                return Err(usage(format!("search supports --z 1 only (got {z})")));
            }
            if threads == 0 {
                return Err(usage("--threads must be at least 1"));
            }
            if budget_secs.is_some_and(|s| !(s.is_finite() && s >= 0.0)) {
                return Err(usage("--budget-secs must be a non-negative number"));
            }
            let limits = Limits {
                max_nodes: budget_nodes,
                max_secs: budget_secs,
            };
            let params = CageParams::new(r, 1, g);
            match n {
                Some(n) => {
                    let mode = if enumerate { Mode::Enumerate } else { Mode::Decide };
                    let spec = SearchSpec {
                        params,
                        n,
                        mode,
                        limits,
                        threads,
                    };
                    search_one(ctx, &spec, checkpoint.as_deref())
                }
                None => search_auto(ctx, params, n_max.unwrap_or(MAX_ORDER), limits, threads),
            }
        }
        Cmd::Ingest { file } => convert(ctx, &file, Format::Matrix),
        Cmd::Export { file, format } => convert(ctx, &file, format),
    }
}

fn graph_json(g: &MixedGraph) -> Value {
    json!({ "n": g.order(), "edges": g.edges(), "arcs": g.arcs() })
}

fn cycle_text(w: &CycleWitness) -> String {
    let mut s = w.vertices[0].to_string();
    for (step, v) in w.steps.iter().zip(&w.vertices[1..]) {
        s.push_str(match step {
            Step::Edge => " -- ",
            Step::Arc => " -> ",
        });
        s.push_str(&v.to_string());
    }
    s
}

fn bounds(ctx: &mut Ctx, r: u64, g: u32) -> Result<i32, Failure> {
    let ahm = ahm_bound(r, g).map_err(|e| usage(e.to_string()))?;
    let moore = (0..=g)
        .map(|d| moore_bound(r, d).map_err(|e| usage(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut text = String::new();
    for (d, m) in moore.iter().enumerate() {
        text += &format!("moore({r}, {d}) = {m}\n");
    }
    text += &format!("ahm({r}, {g}) = {ahm}\n");
    let value = json!({ "r": r, "g": g, "moore": moore, "ahm": ahm });
    ctx.emit(&value, &text)?;
    Ok(exit::PASS)
}

fn build_g30_cmd(ctx: &mut Ctx, format: Format) -> Result<i32, Failure> {
    let report = build_g30_with_report().map_err(|e| Failure(exit::FAIL, format!("construction failed: {e}")))?;
    let g = &report.graph;
    let text = match format {
        Format::Matrix => write_adjacency_matrix(g) + "\n",
        Format::Dot => export_dot(g),
    };
    let value = json!({
        "name": "g30",
        "graph": graph_json(g),
        "literal_rules_failure": report.literal_failure.as_ref().map(|e| e.to_string()),
        "completion": report.completion,
        "matrix": write_adjacency_matrix(g),
    });
    ctx.emit(&value, &text)?;
    Ok(exit::PASS)
}

fn verify(ctx: &mut Ctx, r: usize, z: usize, g: usize, file: &Path) -> Result<i32, Failure> {
    if g == 0 {
        return Err(usage("--g must be at least 1"));
    }
    let (graph, header) = ctx.read_graph(file)?;
    let profile = graph.degree_profile();
    let regular_ok = profile.is_regular_with(r, z);
    // first vertex whose degrees differ from the target
    let bad_vertex = (0..graph.order())
        .find(|&v| profile.deg[v] != r || profile.outdeg[v] != z || profile.indeg[v] != z);
    let gi = girth(&graph);
    let girth_ok = gi.value() == Some(g);
    let pass = regular_ok && girth_ok;
    let verdict = if pass { "PASS" } else { "FAIL" };

    let mut text = format!("order {}\n", graph.order());
    text += &format!("edges {}, arcs {}\n", graph.edges().len(), graph.arcs().len());
    match profile.regular {
        Some(reg) => text += &format!("regular: degree {}, out-degree {}\n", reg.r, reg.z),
        None => text += "not regular\n",
    }
    if let Some(v) = bad_vertex {
        text += &format!(
            "vertex {v}: degree {}, out-degree {}, in-degree {} (want {r}, {z}, {z})\n",
            profile.deg[v], profile.outdeg[v], profile.indeg[v]
        );
    }
    match &gi {
        Girth::Infinite => text += "girth infinite\n",
        Girth::Cycle(w) => text += &format!("girth {}: {}\n", w.len(), cycle_text(w)),
    }
    text += &format!("{verdict}\n");

    let value = json!({
        "verdict": verdict,
        "target": { "r": r, "z": z, "g": g },
        "n": graph.order(),
        "edges": graph.edges().len(),
        "arcs": graph.arcs().len(),
        "regular": profile.regular,
        "regular_ok": regular_ok,
        "bad_vertex": bad_vertex.map(|v| json!({
            "vertex": v, "deg": profile.deg[v], "outdeg": profile.outdeg[v], "indeg": profile.indeg[v],
        })),
        "girth": gi.value(),
        "girth_ok": girth_ok,
        "cycle": gi.witness(),
        "header": header,
    });
    ctx.emit(&value, &text)?;
    Ok(if pass { exit::PASS } else { exit::FAIL })
}

fn girth_cmd(ctx: &mut Ctx, file: &Path) -> Result<i32, Failure> {
    let (graph, _) = ctx.read_graph(file)?;
    let gi = girth(&graph);
    let text = match &gi {
        Girth::Infinite => "girth infinite\n".to_string(),
        Girth::Cycle(w) => format!("girth {}\n{}\n", w.len(), cycle_text(w)),
    };
    let value = json!({ "n": graph.order(), "girth": gi.value(), "cycle": gi.witness() });
    ctx.emit(&value, &text)?;
    Ok(exit::PASS)
}

fn aut(ctx: &mut Ctx, file: &Path) -> Result<i32, Failure> {
    let (graph, _) = ctx.read_graph(file)?;
    let a = automorphism_group(&graph);
    let fp = group_fingerprint(&a, DEFAULT_ENUMERATION_CAP).ok();
    let mut text = format!("order {}\n", a.order);
    text += "generators:\n";
    for p in &a.generators {
        text += &format!("  {p}\n");
    }
    match &fp {
        Some(f) => {
            let orders: Vec<String> = f.element_orders.iter().map(|(o, c)| format!("{o}:{c}")).collect();
            text += &format!(
                "group {} ({}, max element order {})\n",
                f.name,
                if f.abelian { "abelian" } else { "non-abelian" },
                f.max_element_order
            );
            text += &format!("element orders {}\n", orders.join(" "));
        }
        None => text += &format!("structure not computed: order exceeds {DEFAULT_ENUMERATION_CAP}\n"),
    }
    let generators: Vec<String> = a.generators.iter().map(|p| p.to_string()).collect();
    let value = json!({
        "n": graph.order(),
        "order": a.order.to_string(),
        "generators": generators,
        "base": a.base,
        "orbit_lengths": a.orbit_lengths,
        "fingerprint": fp.map(|f| json!({
            "name": f.name,
            "abelian": f.abelian,
            "max_element_order": f.max_element_order,
            "element_orders": f.element_orders,
            "invariant_factors": f.invariant_factors,
        })),
    });
    ctx.emit(&value, &text)?;
    Ok(exit::PASS)
}

fn iso(ctx: &mut Ctx, f1: &Path, f2: &Path) -> Result<i32, Failure> {
    let (g, _) = ctx.read_graph(f1)?;
    let (h, _) = ctx.read_graph(f2)?;
    let witness = is_isomorphic(&g, &h);
    let text = match &witness {
        Some(p) => format!("isomorphic\nmap {p}\nimages {:?}\n", p.as_slice()),
        None => "not isomorphic\n".to_string(),
    };
    let value = json!({
        "isomorphic": witness.is_some(),
        "map": witness.as_ref().map(|p| p.as_slice()),
        "canonical": [canonical_form(&g).hex(), canonical_form(&h).hex()],
    });
    ctx.emit(&value, &text)?;
    Ok(if witness.is_some() { exit::PASS } else { exit::FAIL })
}

fn convert(ctx: &mut Ctx, file: &Path, format: Format) -> Result<i32, Failure> {
    let (graph, header) = ctx.read_graph(file)?;
    let text = match format {
        Format::Matrix => write_adjacency_matrix(&graph) + "\n",
        Format::Dot => export_dot(&graph),
    };
    let value = json!({
        "graph": graph_json(&graph),
        "header": header,
        "format": match format { Format::Matrix => "matrix", Format::Dot => "dot" },
        "output": text,
    });
    ctx.emit(&value, &text)?;
    Ok(exit::PASS)
}

fn stats_text(s: &SearchStats) -> String {
    format!(
        "nodes {}, leaves {}, girth prunes {}, orbit prunes {}, duplicates {}, girth too large {}, skeletons done {}\n",
        s.nodes, s.leaves, s.girth_prunes, s.orbit_prunes, s.duplicates, s.girth_too_large, s.skeletons_done
    )
}

fn search_one(ctx: &mut Ctx, spec: &SearchSpec, checkpoint: Option<&Path>) -> Result<i32, Failure> {
    let search_failure = |e: crate::search::SearchError| match e {
        crate::search::SearchError::Io(m) | crate::search::SearchError::BadCheckpoint(m) => io_err(m),
        other => usage(other.to_string()),
    };
    let resumed = match checkpoint {
        Some(p) if p.exists() => Some(Checkpoint::load(p).map_err(search_failure)?),
        _ => None,
    };
    let out: SearchOutcome = match &resumed {
        Some(cp) => resume_search(spec, cp).map_err(search_failure)?,
        None => search_order(spec).map_err(search_failure)?,
    };
    let mut text = String::new();
    if let Some(cp) = &resumed {
        text += &format!("resumed at skeleton {} after {} nodes\n", cp.skeleton, cp.stats.nodes);
    }
    let (status, witnesses, code) = match &out.status {
        Status::Found(ws) => ("found", ws.clone(), exit::PASS),
        Status::ExhaustedNone => ("exhausted_none", Vec::new(), exit::PASS),
        Status::BudgetExceeded(_) => ("budget_exceeded", Vec::new(), exit::BUDGET),
    };
    let p = spec.params;
    match &out.status {
        Status::Found(ws) if spec.mode == Mode::Enumerate => text += &format!(
            "({},{},{}) n={}: {} isomorphism class(es)\n",
            p.r,
            p.z,
            p.g,
            spec.n,
            ws.len()
        ),
        Status::Found(_) => text += &format!("({},{},{}) n={}: found\n", p.r, p.z, p.g, spec.n),
        Status::ExhaustedNone => text += &format!("({},{},{}) n={}: none exists\n", p.r, p.z, p.g, spec.n),
        Status::BudgetExceeded(cp) => {
            text += &format!("({},{},{}) n={}: budget exceeded at skeleton {}\n", p.r, p.z, p.g, spec.n, cp.skeleton);
            match checkpoint {
                Some(path) => {
                    cp.save(path).map_err(search_failure)?;
                    text += &format!("checkpoint written to {}\n", path.display());
                }
                None => text += "no --checkpoint given; progress discarded\n",
            }
        }
    }
    text += &stats_text(&out.stats);
    for w in &witnesses {
        text += &format!("\n{}\n", write_adjacency_matrix(w));
    }
    let value = json!({
        "params": p,
        "n": spec.n,
        "mode": spec.mode,
        "status": status,
        "stats": out.stats,
        "witnesses": witnesses.iter().map(graph_json).collect::<Vec<_>>(),
        "checkpoint": match &out.status {
            Status::BudgetExceeded(_) => checkpoint.map(|p| p.display().to_string()),
            _ => None,
        },
        "resumed": resumed.is_some(),
    });
    ctx.emit(&value, &text)?;
    Ok(code)
}

fn search_auto(
    ctx: &mut Ctx,
    params: CageParams,
    n_max: usize,
    limits: Limits,
    threads: usize,
) -> Result<i32, Failure> {
    match determine_cage_number(params, n_max, limits, threads) {
        Ok(c) => {
            let how = match &c.provenance {
                Provenance::BoundMatched => "matches the AHM bound".to_string(),
                Provenance::SearchDetermined { excluded } => format!("orders {excluded:?} excluded by search"),
            };
            let mut text = format!(
                "f({},{},{}) = {} (lower bound {}, {how})\n",
                params.r, params.z, params.g, c.value, c.lower_bound
            );
            text += &stats_text(&c.stats);
            text += &format!("\n{}\n", write_adjacency_matrix(&c.witness));
            let value = json!({
                "params": params,
                "status": "determined",
                "value": c.value,
                "lower_bound": c.lower_bound,
                "provenance": c.provenance,
                "witness": graph_json(&c.witness),
                "stats": c.stats,
            });
            ctx.emit(&value, &text)?;
            Ok(exit::PASS)
        }
        Err(CageError::Search(e)) => Err(usage(e.to_string())),
        Err(CageError::Inconclusive { reason, stats }) => {
            let budget = reason.starts_with("budget");
            let text = format!("inconclusive: {reason}\n{}", stats_text(&stats));
            let value = json!({
                "params": params,
                "status": if budget { "budget_exceeded" } else { "inconclusive" },
                "reason": reason,
                "stats": stats,
            });
            ctx.emit(&value, &text)?;
            Ok(if budget { exit::BUDGET } else { exit::FAIL })
        }
    }
}
