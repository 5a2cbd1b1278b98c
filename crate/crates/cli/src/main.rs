//! `piercebox` command-line tool.
//!
//! Exit codes: 0 success, 2 validation failure, 3 infeasible or timed out,
//! 4 bad input. Errors go to stderr as `error[<category>]: <message>`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use piercebox::bounds::{bounds_table_with, default_cap, table_to_csv};
use piercebox::construction::ConstructionParams;
use piercebox::graph::{corollary_check, parse_graph, to_dot, to_json, verify_clique_condition_with};
use piercebox::render::{LabelMode, RenderSpec, WrapStyle};
use piercebox::search::{verify_theorem, SearchStatus, StartBound, VerifyOptions};
use piercebox::*;

const EXIT_VALIDATION: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_BAD_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "piercebox", version, about = "Box partitions with the (k, l)-piercing property")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the thin-box construction for (k, l) and print it as JSON.
    Construct {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        l: usize,
        /// Write the partition here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report on stderr when the grid was built for (l, k) and transposed.
        #[arg(long)]
        transpose_note: bool,
    },
    /// Check that a partition file is an exact cover and report piercing counts.
    Validate {
        file: PathBuf,
        /// Also require every row to meet at least K boxes.
        #[arg(short)]
        k: Option<usize>,
        /// Also require every column to meet at least L boxes.
        #[arg(short)]
        l: Option<usize>,
    },
    /// Lower and upper bounds for (k, l).
    Bounds {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        l: usize,
        /// Include the refined lower bound.
        #[arg(long)]
        refined: bool,
        /// Scan limit for the refined bound (default 4(k + l)).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Bounds for every pair in a range.
    Table {
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        #[arg(long)]
        k_max: usize,
        #[arg(long, default_value_t = 2)]
        l_min: usize,
        #[arg(long)]
        l_max: usize,
        #[arg(long)]
        cap: Option<usize>,
        /// Print CSV instead of JSON lines.
        #[arg(long)]
        csv: bool,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Exhaustive search for the smallest (k, l)-piercing partition.
    Search {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        l: usize,
        /// Largest budget tried (default: the construction size).
        #[arg(long)]
        max_boxes: Option<usize>,
        /// Cap on both grid sides.
        #[arg(long)]
        max_dim: Option<usize>,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Seconds before giving up.
        #[arg(long, default_value_t = 600)]
        time_limit: u64,
        /// Write the witness partition here.
        #[arg(long)]
        emit_witness: Option<PathBuf>,
        /// First budget tried.
        #[arg(long, value_enum, default_value_t = Start::Trivial)]
        start: Start,
        #[arg(long)]
        no_symmetry: bool,
        /// Allow a single thin box per line only (heuristic; never proves optimality).
        #[arg(long)]
        single_thin: bool,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Convert a partition file to its red/blue box graph.
    ToGraph {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// Check that every vertex lies in a red k-clique and a blue l-clique.
    CheckCliques {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        l: usize,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Draw a partition file as text or SVG.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
        format: RenderFormat,
        #[arg(long, default_value_t = 24)]
        cell_size: u32,
        #[arg(long, default_value_t = 0)]
        palette_seed: u64,
        #[arg(long)]
        no_labels: bool,
        #[arg(long)]
        no_wrap_marks: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the construction against the bounds and, at small sizes, the search.
    VerifyTheorem {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        l: usize,
        /// Run the search only when the construction has at most this many boxes.
        #[arg(long, default_value_t = 8)]
        search_max_boxes: usize,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long, default_value_t = 600)]
        time_limit: u64,
    },
    /// Seeded random partition made by merging singleton cells.
    Random {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        merges: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    Trivial,
    Lower,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
}

/// A failed command: exit code, category tag and message.
struct Failure {
    code: u8,
    category: &'static str,
    message: String,
}

impl Failure {
    fn bad_input(message: impl ToString) -> Self {
        Failure {
            code: EXIT_BAD_INPUT,
            category: "bad-input",
            message: message.to_string(),
        }
    }

    fn validation(message: impl ToString) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            category: "validation",
            message: message.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::bad_input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::bad_input(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::bad_input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::bad_input(format!("stdout: {e}")))
        }
    }
}

fn load_partition(path: &Path) -> Result<Partition, Failure> {
    parse_partition(&read_input(path)?).map_err(|e| Failure::bad_input(format!("{}: {e}", path.display())))
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

fn check_params(k: usize, l: usize) -> CmdResult {
    if k < 2 || l < 2 {
        return Err(Failure::bad_input(format!("piercing targets must be at least 2, got k={k}, l={l}")));
    }
    Ok(())
}

fn cmd_construct(k: usize, l: usize, out: Option<PathBuf>, note: bool) -> CmdResult {
    let p = construct(k, l).map_err(Failure::bad_input)?;
    if note {
        let params = ConstructionParams::new(k, l).map_err(Failure::bad_input)?;
        if params.transposed {
            eprintln!("note: l > k, built for ({l}, {k}) and transposed");
        }
    }
    write_output(out.as_deref(), &serialize_partition(&p))
}

fn cmd_validate(file: PathBuf, k: Option<usize>, l: Option<usize>) -> CmdResult {
    let p = load_partition(&file)?;
    let profile = validate_partition(&p).map_err(Failure::validation)?;
    let shapes = classify_boxes(&p);
    let count = |s: BoxShape| shapes.iter().filter(|&&x| x == s).count();
    let (k_req, l_req) = (k.unwrap_or(0), l.unwrap_or(0));
    let pierces = profile.has_piercing(k_req, l_req);
    let report = json!({
        "valid": true,
        "m": p.dims().m,
        "n": p.dims().n,
        "boxes": p.len(),
        "row_counts": profile.row_counts,
        "col_counts": profile.col_counts,
        "k_min": profile.k_min(),
        "l_min": profile.l_min(),
        "shapes": {
            "singleton": count(BoxShape::Singleton),
            "horizontally_thin": count(BoxShape::HorizontallyThin),
            "vertically_thin": count(BoxShape::VerticallyThin),
            "fat": count(BoxShape::Fat),
        },
        "piercing": { "k": k, "l": l, "holds": pierces },
    });
    write_output(None, &pretty(&report))?;
    if !pierces {
        return Err(Failure::validation(format!(
            "piercing requirement not met: k_min={}, l_min={}",
            profile.k_min(),
            profile.l_min()
        )));
    }
    Ok(())
}

fn cmd_bounds(k: usize, l: usize, refined: bool, cap: Option<usize>) -> CmdResult {
    let cap = cap.unwrap_or_else(|| default_cap(k, l));
    let lower = lower_bound(k, l).map_err(Failure::bad_input)?;
    let upper = upper_bound(k, l).map_err(Failure::bad_input)?;
    let mut report = json!({
        "k": k,
        "l": l,
        "lower": lower,
        "upper": upper,
        "geometric": geometric_bound(k, l).map_err(Failure::bad_input)?,
    });
    if refined {
        let row = BoundsRow::compute(k, l, cap).map_err(Failure::bad_input)?;
        report["refined"] = json!(row.refined);
        report["cap"] = json!(cap);
        report["gap"] = json!(row.gap);
        report["coincide"] = json!(row.coincide());
    } else {
        report["gap"] = json!(upper - lower);
    }
    write_output(None, &pretty(&report))
}

#[allow(clippy::too_many_arguments)]
fn cmd_table(
    k_min: usize,
    k_max: usize,
    l_min: usize,
    l_max: usize,
    cap: Option<usize>,
    csv: bool,
    threads: usize,
) -> CmdResult {
    if k_min > k_max || l_min > l_max {
        return Err(Failure::bad_input("empty range"));
    }
    let rows = bounds_table_with(k_min..=k_max, l_min..=l_max, cap, Workers(threads))
        .map_err(Failure::bad_input)?;
    if csv {
        return write_output(None, &table_to_csv(&rows));
    }
    let mut out = String::new();
    for r in &rows {
        out.push_str(&serde_json::to_string(r).expect("row serializes"));
        out.push('\n');
    }
    write_output(None, &out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    k: usize,
    l: usize,
    max_boxes: Option<usize>,
    max_dim: Option<usize>,
    threads: usize,
    time_limit: u64,
    emit_witness: Option<PathBuf>,
    start: Start,
    no_symmetry: bool,
    single_thin: bool,
    as_json: bool,
) -> CmdResult {
    check_params(k, l)?;
    let mut cfg = SearchConfig::new(k, l);
    cfg.max_boxes = max_boxes;
    cfg.max_dim = max_dim;
    cfg.workers = Workers(threads);
    cfg.time_limit = Some(Duration::from_secs(time_limit));
    cfg.start = match start {
        Start::Trivial => StartBound::Trivial,
        Start::Lower => StartBound::LowerBound,
    };
    cfg.symmetry_breaking = !no_symmetry;
    cfg.single_thin_heuristic = single_thin;
    let r = search_min_partition(&cfg).map_err(Failure::bad_input)?;

    if let (Some(path), Some(w)) = (&emit_witness, &r.witness) {
        write_output(Some(path), &serialize_partition(w))?;
    }
    if as_json {
        write_output(None, &r.to_json())?;
    } else {
        let mut out = format!(
            "k={} l={} status={} best_count={} nodes={} start_budget={}\n",
            r.k,
            r.l,
            tag(&r.status),
            r.best_count.map_or("none".to_string(), |b| b.to_string()),
            r.nodes_explored,
            r.start_budget
        );
        for d in &r.dims_tried {
            out.push_str(&format!(
                "  budget={} grid={}x{} verdict={} nodes={}\n",
                d.budget,
                d.m,
                d.n,
                tag(&d.verdict),
                d.nodes
            ));
        }
        if let Some(w) = &r.witness {
            if let Ok(text) = render_ascii(w) {
                out.push_str(&text);
            }
        }
        write_output(None, &out)?;
    }
    match r.status {
        SearchStatus::OptimumProven | SearchStatus::FeasibleFound => Ok(()),
        SearchStatus::InfeasibleWithinCaps => Err(Failure {
            code: EXIT_INFEASIBLE,
            category: "infeasible",
            message: "no partition within the given caps".into(),
        }),
        SearchStatus::TimedOut => Err(Failure {
            code: EXIT_INFEASIBLE,
            category: "timeout",
            message: format!("time limit of {time_limit} s reached"),
        }),
    }
}

/// The serialized (snake_case) name of an enum value.
fn tag<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|x| x.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn cmd_to_graph(file: PathBuf, format: GraphFormat) -> CmdResult {
    let p = load_partition(&file)?;
    let g = box_to_graph(&p).map_err(Failure::validation)?;
    let text = match format {
        GraphFormat::Dot => to_dot(&g),
        GraphFormat::Json => to_json(&g),
    };
    write_output(None, &text)
}

fn cmd_check_cliques(graph: PathBuf, k: usize, l: usize, threads: usize) -> CmdResult {
    let g = parse_graph(&read_input(&graph)?)
        .map_err(|e| Failure::bad_input(format!("{}: {e}", graph.display())))?;
    let report = verify_clique_condition_with(&g, k, l, Workers(threads));
    let mut value = serde_json::to_value(&report).expect("report serializes");
    if report.pass && k >= 2 && l >= 2 {
        let c = corollary_check(&g, k, l).map_err(Failure::bad_input)?;
        value["corollary"] = serde_json::to_value(c).expect("report serializes");
    }
    write_output(None, &pretty(&value))?;
    if !report.pass {
        return Err(Failure::validation(format!(
            "{} vertices miss a red {k}-clique or a blue {l}-clique",
            report.failing.len()
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_render(
    file: PathBuf,
    format: RenderFormat,
    cell_size: u32,
    palette_seed: u64,
    no_labels: bool,
    no_wrap_marks: bool,
    out: Option<PathBuf>,
) -> CmdResult {
    let p = load_partition(&file)?;
    let text = match format {
        RenderFormat::Ascii => render_ascii(&p),
        RenderFormat::Svg => render_svg(
            &p,
            &RenderSpec {
                cell_size,
                palette_seed,
                labels: if no_labels { LabelMode::None } else { LabelMode::BoxIds },
                wrap: if no_wrap_marks { WrapStyle::None } else { WrapStyle::Marker },
            },
        ),
    };
    let text = text.map_err(|e| match e {
        piercebox::render::RenderError::Invalid(e) => Failure::validation(e),
        other => Failure::bad_input(other),
    })?;
    write_output(out.as_deref(), &text)
}

fn cmd_verify_theorem(k: usize, l: usize, search_max_boxes: usize, threads: usize, time_limit: u64) -> CmdResult {
    check_params(k, l)?;
    let opts = VerifyOptions {
        search_max_boxes,
        workers: Workers(threads),
        time_limit: Some(Duration::from_secs(time_limit)),
    };
    let report = match verify_theorem(k, l, &opts) {
        Ok(r) => r,
        Err(piercebox::search::VerifyError::Search(piercebox::search::SearchError::TimedOut)) => {
            return Err(Failure {
                code: EXIT_INFEASIBLE,
                category: "timeout",
                message: format!("time limit of {time_limit} s reached"),
            })
        }
        Err(e) => return Err(Failure::bad_input(e)),
    };
    write_output(None, &pretty(&serde_json::to_value(&report).expect("report serializes")))?;
    if !report.pass {
        return Err(Failure::validation(format!("theorem check failed for ({k}, {l})")));
    }
    Ok(())
}

fn cmd_random(m: usize, n: usize, seed: u64, merges: usize) -> CmdResult {
    let dims = GridDims::new(m, n).map_err(Failure::bad_input)?;
    write_output(None, &serialize_partition(&random_partition(dims, seed, merges)))
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Construct {
            k,
            l,
            out,
            transpose_note,
        } => cmd_construct(k, l, out, transpose_note),
        Command::Validate { file, k, l } => cmd_validate(file, k, l),
        Command::Bounds { k, l, refined, cap } => cmd_bounds(k, l, refined, cap),
        Command::Table {
            k_min,
            k_max,
            l_min,
            l_max,
            cap,
            csv,
            threads,
        } => cmd_table(k_min, k_max, l_min, l_max, cap, csv, threads),
        Command::Search {
            k,
            l,
            max_boxes,
            max_dim,
            threads,
            time_limit,
            emit_witness,
            start,
            no_symmetry,
            single_thin,
            json,
        } => cmd_search(
            k,
            l,
            max_boxes,
            max_dim,
            threads,
            time_limit,
            emit_witness,
            start,
            no_symmetry,
            single_thin,
            json,
        ),
        Command::ToGraph { file, format } => cmd_to_graph(file, format),
        Command::CheckCliques { graph, k, l, threads } => cmd_check_cliques(graph, k, l, threads),
        Command::Render {
            file,
            format,
            cell_size,
            palette_seed,
            no_labels,
            no_wrap_marks,
            out,
        } => cmd_render(file, format, cell_size, palette_seed, no_labels, no_wrap_marks, out),
        Command::VerifyTheorem {
            k,
            l,
            search_max_boxes,
            threads,
            time_limit,
        } => cmd_verify_theorem(k, l, search_max_boxes, threads, time_limit),
        Command::Random { m, n, seed, merges } => cmd_random(m, n, seed, merges),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error[{}]: {}", f.category, f.message);
            ExitCode::from(f.code)
        }
    }
}
