//! Command implementations behind the `sgewalk` binary.
//!
//! Each command returns a [`CommandResult`]; nothing here exits the process,
//! so tests drive the commands directly.
//!
//! Exit codes: 0 yes/valid, 1 no/invalid, 2 unknown (search budget exhausted
//! or a negative answer scoped to a finite grid), 3 input or I/O error.

pub mod render;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sgewalk::constraints::{self, canonicalize, embed_degenerate};
use sgewalk::geometry::parse_rational;
use sgewalk::io;
use sgewalk::search::{self, Certificate, SearchParams, Verdict};
use sgewalk::sge::{sharing_profile, verify_simultaneous};
use sgewalk::sge_reduction::{build_sge_instance, embed_sge_instance, extract_walk_realization, instance_size};
use sgewalk::walk::{failing_turns, verify_walk_realization, walk_stats};
use sgewalk::walk_reduction::{lift_realization, reduce_walk, restrict_realization};
use sgewalk::Error;

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub code: u8,
    pub summary: String,
    /// Machine-readable form of the summary, printed with `--format json`.
    pub details: Value,
    /// File content produced by the command, if any.
    pub artifact: Option<String>,
    /// Where the artifact was written.
    pub written: Vec<PathBuf>,
}

impl CommandResult {
    fn new(code: u8, summary: impl Into<String>, details: Value) -> Self {
        CommandResult { code, summary: summary.into(), details, artifact: None, written: Vec::new() }
    }

    fn with_artifact(mut self, text: String) -> Self {
        self.artifact = Some(text);
        self
    }

    fn error(code: u8, message: impl Into<String>) -> Self {
        let message = message.into();
        let details = json!({ "error": message });
        CommandResult::new(code, format!("error: {message}"), details)
    }
}

type Step<T> = std::result::Result<T, CommandResult>;

/// Exit code for a library error: failed preconditions are answers, the rest
/// are input problems.
pub fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::RealizationInvalid(_)
        | Error::SimultaneityViolation(_)
        | Error::Inconsistent(_)
        | Error::NotDegenerate(_) => EXIT_NO,
        Error::PerturbationFailed(_) | Error::PlacementFailure(_) | Error::SoundnessViolation(_) => EXIT_UNKNOWN,
        _ => EXIT_INPUT,
    }
}

fn check<T>(r: sgewalk::Result<T>) -> Step<T> {
    r.map_err(|e| CommandResult::error(exit_code_for(&e), e.to_string()))
}

/// Like [`check`] but every error counts as bad input.
fn input<T>(r: sgewalk::Result<T>) -> Step<T> {
    r.map_err(|e| CommandResult::error(EXIT_INPUT, e.to_string()))
}

fn read(path: &Path) -> Step<String> {
    fs::read_to_string(path).map_err(|e| CommandResult::error(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn finish(step: Step<CommandResult>) -> CommandResult {
    step.unwrap_or_else(|e| e)
}

// ---------------------------------------------------------------------------
// Walks

pub fn cmd_walk_check(walk: &Path, embedding: &Path) -> CommandResult {
    finish((|| {
        let w = input(io::parse_walk(&read(walk)?))?;
        let emb = input(io::parse_embedding(&read(embedding)?))?;
        let report = input(verify_walk_realization(&w, &emb))?;
        let failing = input(failing_turns(&w, &emb))?;
        let turns = w.turns().len();
        let violations: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        let details = json!({
            "valid": failing.is_empty(),
            "turns": turns,
            "failing_turns": failing,
            "violations": violations,
        });
        if failing.is_empty() {
            return Ok(CommandResult::new(EXIT_YES, format!("valid: all {turns} turns hold"), details));
        }
        let mut summary = format!("invalid: {} of {turns} turns fail at positions {failing:?}", failing.len());
        for v in &violations {
            summary.push_str("\n  ");
            summary.push_str(v);
        }
        Ok(CommandResult::new(EXIT_NO, summary, details))
    })())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReduceMode {
    /// arbitrary walk to a walk without repeated edges
    Walk,
    /// walk to an edge-disjoint simultaneous embedding instance
    Sge,
}

pub fn cmd_reduce(walk: &Path, mode: ReduceMode) -> CommandResult {
    finish((|| {
        let w = input(io::parse_walk(&read(walk)?))?;
        let t = w.len();
        match mode {
            ReduceMode::Walk => {
                let rec = input(reduce_walk(&w))?;
                let stats = walk_stats(&rec.output);
                let expected = 14 * (t - 2) + 1;
                let summary = format!(
                    "t = {t}, |W'| = {} (14(t-2)+1 = {expected}), {} vertices, {} repeated edges",
                    stats.length, stats.vertex_count, stats.repeated_edges
                );
                let details = json!({
                    "mode": "walk",
                    "t": t,
                    "length": stats.length,
                    "expected_length": expected,
                    "vertices": stats.vertex_count,
                    "repeated_edges": stats.repeated_edges,
                });
                Ok(CommandResult::new(EXIT_YES, summary, details).with_artifact(io::reduction_record_to_json(&rec)))
            }
            ReduceMode::Sge => {
                let rec = input(build_sge_instance(&w))?;
                let profile = sharing_profile(&rec.collection);
                let n = w.vertices().len();
                let size = rec.collection.vertices().len();
                let summary = format!(
                    "t = {t}, n = {n}, |V| = {size} (12(t-2)+5+2n = {}, 14t = {}), {} graphs, {} edges, edge_disjoint: {}",
                    instance_size(t, n),
                    14 * t,
                    rec.collection.graphs().len(),
                    rec.collection.edge_count(),
                    profile.edge_disjoint
                );
                let details = json!({
                    "mode": "sge",
                    "t": t,
                    "n": n,
                    "vertices": size,
                    "expected_vertices": instance_size(t, n),
                    "below_14t": size < 14 * t,
                    "graphs": rec.collection.graphs().len(),
                    "edges": rec.collection.edge_count(),
                    "edge_disjoint": profile.edge_disjoint,
                    "public_edges": profile.public.len(),
                });
                Ok(CommandResult::new(EXIT_YES, summary, details).with_artifact(io::sge_record_to_json(&rec)))
            }
        }
    })())
}

enum Record {
    Walk(sgewalk::walk_reduction::ReductionRecord),
    Sge(Box<sgewalk::sge_reduction::SgeInstanceRecord>),
}

fn read_record(path: &Path) -> Step<Record> {
    let text = read(path)?;
    let kind = serde_json::from_str::<Value>(&text)
        .map_err(|e| CommandResult::error(EXIT_INPUT, e.to_string()))?
        .get("kind")
        .and_then(Value::as_str)
        .map(str::to_string);
    match kind.as_deref() {
        Some(io::WALK_REDUCTION_KIND) => Ok(Record::Walk(input(io::parse_reduction_record(&text))?)),
        Some(io::SGE_INSTANCE_KIND) => Ok(Record::Sge(Box::new(input(io::parse_sge_record(&text))?))),
        _ => Err(CommandResult::error(
            EXIT_INPUT,
            format!("{}: not a reduction record (missing or unknown `kind`)", path.display()),
        )),
    }
}

/// Forward direction: a realization of the walk becomes a realization of W'
/// or a simultaneous embedding of the instance.
pub fn cmd_lift(record: &Path, embedding: &Path) -> CommandResult {
    finish((|| {
        let rec = read_record(record)?;
        let r = input(io::parse_embedding(&read(embedding)?))?;
        match rec {
            Record::Walk(rec) => {
                let lifted = check(lift_realization(&rec, &r))?;
                let report = check(verify_walk_realization(&rec.output, &lifted))?;
                if !report.is_empty() {
                    return Err(CommandResult::error(EXIT_UNKNOWN, "lifted embedding failed verification"));
                }
                let summary = format!("lifted: {} points realize W' ({} turns)", lifted.len(), rec.output.turns().len());
                let details = json!({ "kind": io::WALK_REDUCTION_KIND, "points": lifted.len(), "verified": true });
                Ok(CommandResult::new(EXIT_YES, summary, details).with_artifact(io::embedding_to_json(&lifted)))
            }
            Record::Sge(rec) => {
                let emb = check(embed_sge_instance(&rec, &r))?;
                let report = check(verify_simultaneous(&rec.collection, &emb))?;
                if !report.is_empty() {
                    return Err(CommandResult::error(EXIT_UNKNOWN, "constructed embedding failed verification"));
                }
                let summary = format!(
                    "embedded: {} points, all {} graphs crossing-free",
                    emb.len(),
                    rec.collection.graphs().len()
                );
                let details = json!({ "kind": io::SGE_INSTANCE_KIND, "points": emb.len(), "verified": true });
                Ok(CommandResult::new(EXIT_YES, summary, details).with_artifact(io::embedding_to_json(&emb)))
            }
        }
    })())
}

/// Backward direction: recovers a realization of the original walk.
pub fn cmd_extract(record: &Path, embedding: &Path) -> CommandResult {
    finish((|| {
        let rec = read_record(record)?;
        let emb = input(io::parse_embedding(&read(embedding)?))?;
        match rec {
            Record::Walk(rec) => {
                let out = check(restrict_realization(&rec, &emb))?;
                let summary = format!("extracted: {} points realize W", out.len());
                let details = json!({ "kind": io::WALK_REDUCTION_KIND, "points": out.len(), "verified": true });
                Ok(CommandResult::new(EXIT_YES, summary, details).with_artifact(io::embedding_to_json(&out)))
            }
            Record::Sge(rec) => {
                let (out, flags) = check(extract_walk_realization(&rec, &emb))?;
                let summary = format!(
                    "extracted: {} points realize W (primed_swapped: {}, reflected: {})",
                    out.len(),
                    flags.primed_swapped,
                    flags.reflected
                );
                let details = json!({
                    "kind": io::SGE_INSTANCE_KIND,
                    "points": out.len(),
                    "verified": true,
                    "primed_swapped": flags.primed_swapped,
                    "reflected": flags.reflected,
                });
                Ok(CommandResult::new(EXIT_YES, summary, details).with_artifact(io::embedding_to_json(&out)))
            }
        }
    })())
}

// ---------------------------------------------------------------------------
// Simultaneous embeddings

pub fn cmd_sge_verify(collection: &Path, embedding: &Path) -> CommandResult {
    finish((|| {
        let coll = input(io::parse_collection(&read(collection)?))?;
        let emb = input(io::parse_embedding(&read(embedding)?))?;
        let report = input(verify_simultaneous(&coll, &emb))?;
        let graphs: Vec<Value> = report
            .graphs
            .iter()
            .map(|g| {
                let v: Vec<String> = g.violations.iter().map(ToString::to_string).collect();
                json!({ "graph": g.graph, "violations": v })
            })
            .collect();
        let details = json!({ "valid": report.is_empty(), "violations": report.len(), "graphs": graphs });
        if report.is_empty() {
            let summary = format!("valid: all {} graphs are drawn without crossings", coll.graphs().len());
            return Ok(CommandResult::new(EXIT_YES, summary, details));
        }
        let mut summary = format!("invalid: {} violations in {} graphs", report.len(), report.graphs.len());
        for g in &report.graphs {
            for v in &g.violations {
                summary.push_str(&format!("\n  {}: {v}", g.graph));
            }
        }
        Ok(CommandResult::new(EXIT_NO, summary, details))
    })())
}

pub fn cmd_sge_profile(collection: &Path) -> CommandResult {
    finish((|| {
        let coll = input(io::parse_collection(&read(collection)?))?;
        let p = sharing_profile(&coll);
        let public: Vec<Value> = p.public.iter().map(|((a, b), k)| json!({ "edge": [a, b], "graphs": k })).collect();
        let summary = format!(
            "{} vertices, {} graphs, {} edges, {} public edges, edge_disjoint: {}, sunflower: {}",
            coll.vertices().len(),
            coll.graphs().len(),
            coll.edge_count(),
            p.public.len(),
            p.edge_disjoint,
            p.sunflower
        );
        let details = json!({
            "vertices": coll.vertices().len(),
            "graphs": coll.graphs().len(),
            "edges": coll.edge_count(),
            "public": public,
            "edge_disjoint": p.edge_disjoint,
            "sunflower": p.sunflower,
        });
        Ok(CommandResult::new(EXIT_YES, summary, details))
    })())
}

// ---------------------------------------------------------------------------
// Search

pub fn cmd_solve(problem: &Path, params: &SearchParams) -> CommandResult {
    finish((|| {
        let raw = input(io::parse_problem(&read(problem)?))?;
        let outcome = input(search::solve(&raw, params))?;
        let details = io::outcome_value(&outcome);
        let stats = &outcome.stats;
        match &outcome.verdict {
            Verdict::Realized(emb) => {
                // Re-check here as well; the exit code must never rest on an
                // unverified embedding.
                let cs = input(canonicalize(&raw))?;
                if !input(constraints::verify(&cs, emb))?.is_empty() {
                    return Err(CommandResult::error(EXIT_UNKNOWN, "search returned an embedding that fails verification"));
                }
                let how = match stats.grid {
                    Some(g) if stats.iterations == 0 => format!("grid oracle, g = {g}"),
                    _ => format!("annealing, {} iterations over {} restarts", stats.iterations, stats.restarts_used),
                };
                let summary = format!("realized: {} points, verified exactly ({how})", emb.len());
                Ok(CommandResult::new(EXIT_YES, summary, details).with_artifact(io::embedding_to_json(emb)))
            }
            Verdict::Unrealizable(Certificate::Inconsistent(w)) => {
                Ok(CommandResult::new(EXIT_NO, format!("unrealizable: {w}"), details))
            }
            Verdict::Unrealizable(Certificate::GridExhausted { grid }) => {
                let summary = format!(
                    "unknown: no placement on the {grid}x{grid} grid and annealing found none \
                     ({} iterations); this does not prove unrealizability",
                    stats.iterations
                );
                Ok(CommandResult::new(EXIT_UNKNOWN, summary, details))
            }
            Verdict::Unknown => {
                let summary = format!(
                    "unknown: budget exhausted after {} iterations over {} restarts",
                    stats.iterations, stats.restarts_used
                );
                Ok(CommandResult::new(EXIT_UNKNOWN, summary, details))
            }
        }
    })())
}

pub fn cmd_embed_degenerate(constraints_file: &Path) -> CommandResult {
    finish((|| {
        let raw = input(io::parse_problem(&read(constraints_file)?))?;
        let cs = check(canonicalize(&raw))?;
        let emb = check(embed_degenerate(&cs))?;
        if !input(constraints::verify(&cs, &emb))?.is_empty() {
            return Err(CommandResult::error(EXIT_UNKNOWN, "constructed embedding fails verification"));
        }
        let summary = format!("embedded: {} points satisfy all {} prescriptions", emb.len(), cs.len());
        let details = json!({ "points": emb.len(), "constraints": cs.len(), "verified": true });
        Ok(CommandResult::new(EXIT_YES, summary, details).with_artifact(io::embedding_to_json(&emb)))
    })())
}

/// The artifact is a single file that reads both as a walk and as an
/// embedding.
pub fn cmd_sample(vertices: usize, length: usize, seed: u64, forbid_repeated_edges: bool) -> CommandResult {
    finish((|| {
        let (w, emb) = input(search::sample_walk(vertices, length, seed, forbid_repeated_edges))?;
        let mut doc: Value = serde_json::from_str(&io::walk_to_json(&w)).expect("own output");
        let points: Value = serde_json::from_str(&io::embedding_to_json(&emb)).expect("own output");
        doc["points"] = points["points"].clone();
        let stats = walk_stats(&w);
        let summary = format!(
            "sampled walk of length {} over {} vertices ({} repeated edges): {w}",
            stats.length, stats.vertex_count, stats.repeated_edges
        );
        let details = json!({ "length": stats.length, "vertices": stats.vertex_count, "repeated_edges": stats.repeated_edges });
        let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
        Ok(CommandResult::new(EXIT_YES, summary, details).with_artifact(text))
    })())
}

pub fn cmd_render(embedding: &Path, overlay: Option<&Path>) -> CommandResult {
    finish((|| {
        let emb = input(io::parse_embedding(&read(embedding)?))?;
        let overlay = match overlay {
            None => render::Overlay::None,
            Some(path) => {
                let text = read(path)?;
                let v: Value = serde_json::from_str(&text).map_err(|e| CommandResult::error(EXIT_INPUT, e.to_string()))?;
                if v.get("graphs").is_some() {
                    render::Overlay::Collection(input(io::parse_collection(&text))?)
                } else {
                    render::Overlay::Walk(input(io::parse_walk(&text))?)
                }
            }
        };
        let drawing = input(render::render_svg(&emb, &overlay))?;
        let summary = format!(
            "rendered {} points; {} highlighted violations",
            emb.len(),
            drawing.highlighted
        );
        let details = json!({ "points": emb.len(), "highlighted": drawing.highlighted });
        Ok(CommandResult::new(EXIT_YES, summary, details).with_artifact(drawing.svg))
    })())
}

// ---------------------------------------------------------------------------
// Argument parsing

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    /// only meaningful for `render`; other commands fall back to text
    Svg,
}

#[derive(Debug, Parser)]
#[command(name = "sgewalk", version, about = "Directional walks and simultaneous geometric embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the command's artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    /// Annealing moves per restart.
    #[arg(long, default_value_t = 50_000)]
    pub iters: usize,
    /// Side length of the grid searched by the oracle.
    #[arg(long, default_value_t = 8)]
    pub grid: usize,
    /// Required doubled triangle area, as a rational such as `1` or `1/4`.
    #[arg(long, default_value = "1")]
    pub margin: String,
}

impl SearchArgs {
    pub fn params(&self) -> std::result::Result<SearchParams, String> {
        let margin = parse_rational(&self.margin).map_err(|e| e.to_string())?;
        let params = SearchParams {
            seed: self.seed,
            restarts: self.restarts,
            iterations: self.iters,
            grid: self.grid,
            margin,
            ..SearchParams::default()
        };
        params.validate().map_err(|e| e.to_string())?;
        Ok(params)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an embedding against a walk.
    WalkCheck { walk: PathBuf, embedding: PathBuf },
    /// Reduce a walk to a repeat-free walk or to an edge-disjoint SGE instance.
    Reduce {
        walk: PathBuf,
        #[arg(long, value_enum, default_value_t = ReduceMode::Walk)]
        mode: ReduceMode,
    },
    /// Turn a realization of the walk into one of the reduced instance.
    Lift { record: PathBuf, embedding: PathBuf },
    /// Recover a realization of the walk from one of the reduced instance.
    Extract { record: PathBuf, embedding: PathBuf },
    /// Check a simultaneous straight-line drawing.
    SgeVerify { collection: PathBuf, embedding: PathBuf },
    /// Report public edges of a graph collection.
    SgeProfile { collection: PathBuf },
    /// Search for a realization of a walk or constraint file.
    Solve {
        problem: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Embed a 2-degenerate constraint set constructively.
    EmbedDegenerate { constraints: PathBuf },
    /// Sample a walk together with a realization of it.
    Sample {
        #[arg(long, default_value_t = 5)]
        vertices: usize,
        #[arg(long, default_value_t = 9)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Reject walks that use an edge twice.
        #[arg(long)]
        no_repeated_edges: bool,
    },
    /// Draw an embedding as SVG, optionally with a walk or graph collection.
    Render { embedding: PathBuf, overlay: Option<PathBuf> },
}

/// Runs a parsed command line and writes the artifact to `--out` if given.
pub fn run(cli: &Cli) -> CommandResult {
    let mut result = match &cli.command {
        Command::WalkCheck { walk, embedding } => cmd_walk_check(walk, embedding),
        Command::Reduce { walk, mode } => cmd_reduce(walk, *mode),
        Command::Lift { record, embedding } => cmd_lift(record, embedding),
        Command::Extract { record, embedding } => cmd_extract(record, embedding),
        Command::SgeVerify { collection, embedding } => cmd_sge_verify(collection, embedding),
        Command::SgeProfile { collection } => cmd_sge_profile(collection),
        Command::Solve { problem, search } => match search.params() {
            Ok(params) => cmd_solve(problem, &params),
            Err(e) => CommandResult::error(EXIT_INPUT, e),
        },
        Command::EmbedDegenerate { constraints } => cmd_embed_degenerate(constraints),
        Command::Sample { vertices, length, seed, no_repeated_edges } => {
            cmd_sample(*vertices, *length, *seed, *no_repeated_edges)
        }
        Command::Render { embedding, overlay } => cmd_render(embedding, overlay.as_deref()),
    };
    if let (Some(path), Some(text)) = (&cli.out, &result.artifact) {
        match fs::write(path, text) {
            Ok(()) => result.written.push(path.clone()),
            Err(e) => return CommandResult::error(EXIT_INPUT, format!("{}: {e}", path.display())),
        }
    }
    result
}
