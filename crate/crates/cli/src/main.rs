use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rvclab::constructions::{
    color_complete_rvc, color_complete_rvcl, color_cycle_rvc, color_cycle_rvcl, color_path_rvcl, color_tree_rvc,
    color_upper_general, GeneratedColoring,
};
use rvclab::format;
use rvclab::graph::{build_complete, build_cycle, build_path, build_tree, edge_corona};
use rvclab::harness::{self, ReproduceOptions};
use rvclab::rainbow::Verifier;
use rvclab::solver::{default_size_cap, solve_exact, Budget, SolveOptions, SolveStatus};
use rvclab::{Error, Graph, Target};

/// Usage errors, id mismatches and out-of-domain specs.
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "rvclab", version, about = "Edge coronas and (locating) rainbow vertex colorings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph or edge corona and write it as JSON or DOT.
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Optional coloring JSON to attach as DOT colors.
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a coloring; exit 0 iff it is valid for the target.
    Verify {
        graph: PathBuf,
        coloring: PathBuf,
        #[arg(long, value_parser = parse_target, default_value = "rvcl")]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute rvc or rvcl exactly.
    Solve {
        graph: PathBuf,
        #[arg(long, value_parser = parse_target)]
        target: Target,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the explicit coloring of one construction rule.
    Color {
        #[arg(long, value_enum)]
        rule: Rule,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: usize,
        /// Core for upper-general, e.g. `cycle:5` or `tree`.
        #[arg(long)]
        core: Option<String>,
        /// Tree edges such as `1-2,1-3`.
        #[arg(long)]
        edges: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare theorem predictions, constructions and exact values on a grid.
    Reproduce {
        #[arg(long, default_value = "all")]
        theorem: String,
        /// Inclusive range such as `2..4`, or one value.
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Accept construction failures listed as known errata.
        #[arg(long)]
        allow_errata: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// `path:M`, `cycle:M`, `complete:M` or `tree` (with --edges).
    #[arg(long)]
    core: String,
    /// `complete:N`, `path:N` or `cycle:N`; omit for the bare core.
    #[arg(long)]
    flare: Option<String>,
    #[arg(long)]
    edges: Option<String>,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 100_000_000)]
    budget_nodes: u64,
    #[arg(long, default_value_t = 300)]
    budget_seconds: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Search graphs above the default size cap.
    #[arg(long)]
    force: bool,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget { max_nodes: self.budget_nodes, max_time: Duration::from_secs(self.budget_seconds) }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    UpperGeneral,
    TreeRvc,
    PathRvcl,
    CycleRvc,
    CycleRvcl,
    CompleteRvc,
    CompleteRvcl,
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure carrying its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(EXIT_USAGE, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_USAGE, msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Command) -> Result<u8, Fail> {
    match cmd {
        Command::Construct { family, format, coloring, out } => {
            let g = build_family(&family)?;
            let text = match format {
                Format::Json => format::graph_to_json(&g),
                Format::Dot => {
                    let c =
                        coloring.map(|p| read(&p).and_then(|t| Ok(format::coloring_from_json(&t, &g)?))).transpose()?;
                    format::graph_to_dot(&g, c.as_ref().map(|p| &p.coloring))
                }
                Format::Csv => return Err(usage("construct writes json or dot")),
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Verify { graph, coloring, target, out } => {
            let g = format::graph_from_json(&read(&graph)?)?;
            let parsed = format::coloring_from_json(&read(&coloring)?, &g)?;
            if parsed.canonicalized {
                eprintln!("note: unused palette colors dropped, k = {}", parsed.coloring.k());
            }
            let v = Verifier::new(&g);
            let report = match target {
                Target::Rvc => v.is_rainbow_vertex_coloring(&parsed.coloring)?,
                Target::Rvcl => v.is_locating_rainbow_coloring(&parsed.coloring)?,
            };
            emit(out.as_deref(), &serde_json::to_string_pretty(&report).expect("report serializes"))?;
            if let Some((a, b)) = report.failing_pair_rainbow {
                eprintln!("no rainbow vertex path between {} and {}", g.label(a), g.label(b));
            }
            if let Some(c) = &report.failing_pair_locating {
                eprintln!("{} and {} share rainbow code {:?}", g.label(c.pair.0), g.label(c.pair.1), c.code.0);
            }
            Ok(if report.is_locating_rainbow() { 0 } else { 1 })
        }
        Command::Solve { graph, target, budget, out } => {
            let g = format::graph_from_json(&read(&graph)?)?;
            let cap = default_size_cap(target);
            if g.order() > cap && !budget.force {
                return Err(usage(format!(
                    "graph has {} vertices, above the {target} cap of {cap}; pass --force",
                    g.order()
                )));
            }
            let opts = SolveOptions {
                budget: budget.budget(),
                workers: budget.workers.max(1),
                force: true,
                ..Default::default()
            };
            let res = solve_exact(&g, target, &opts)?;
            emit(out.as_deref(), &format::solve_result_to_json(&res))?;
            Ok(if res.status == SolveStatus::Proved { 0 } else { 3 })
        }
        Command::Color { rule, m, n, core, edges, out } => {
            let gc = color(rule, m, n, core.as_deref(), edges.as_deref())?;
            let c = gc
                .coloring()
                .map_err(|e| Fail(1, format!("construction is not a valid {}-coloring: {e}", gc.declared_k)))?;
            emit(out.as_deref(), &format::coloring_to_json(&c))?;
            Ok(0)
        }
        Command::Reproduce { theorem, m, n, format, budget, allow_errata, out } => {
            let theorems = harness::parse_selector(&theorem)?;
            let m = m.as_deref().map(harness::parse_range).transpose()?;
            let n = n.as_deref().map(harness::parse_range).transpose()?;
            let opts =
                ReproduceOptions { budget: budget.budget(), workers: budget.workers.max(1), force: budget.force };
            let rows = harness::reproduce(&theorems, m, n, &opts)?;
            let text = match format {
                Format::Csv => harness::rows_to_csv(&rows),
                Format::Json => harness::rows_to_json(&rows),
                Format::Dot => return Err(usage("reproduce writes csv or json")),
            };
            emit(out.as_deref(), &text)?;
            for r in rows.iter().filter(|r| r.construction_error.is_some() && r.predicted.is_some()) {
                let tag = if r.is_whitelisted() { " (known erratum)" } else { "" };
                eprintln!("{} m={} n={}: {}{tag}", r.theorem, r.m, r.n, r.construction_error.as_deref().unwrap_or(""));
            }
            Ok(if harness::table_passes(&rows, allow_errata) { 0 } else { 1 })
        }
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Fail> {
    let text = if text.ends_with('\n') { text.to_string() } else { format!("{text}\n") };
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail(1, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_edges(s: &str) -> Result<Vec<(usize, usize)>, Fail> {
    s.split(',')
        .map(|e| {
            let (a, b) = e.trim().split_once('-').ok_or_else(|| usage(format!("bad edge {e:?}, expected a-b")))?;
            let num = |t: &str| t.trim().parse::<usize>().map_err(|_| usage(format!("bad edge {e:?}")));
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

/// `kind:size`, or `tree` with `--edges`.
fn build_graph(spec: &str, edges: Option<&str>) -> Result<Graph, Fail> {
    if spec == "tree" {
        let edges = edges.ok_or_else(|| usage("--core tree needs --edges"))?;
        return Ok(build_tree(&parse_edges(edges)?)?);
    }
    let (kind, size) =
        spec.split_once(':').ok_or_else(|| usage(format!("bad graph spec {spec:?}, expected kind:size")))?;
    let size: usize = size.parse().map_err(|_| usage(format!("bad size in {spec:?}")))?;
    Ok(match kind {
        "path" => build_path(size)?,
        "cycle" => build_cycle(size)?,
        "complete" if size == 1 => Graph::from_edges(1, vec![])?,
        "complete" => build_complete(size)?,
        _ => return Err(usage(format!("unknown graph kind {kind:?}"))),
    })
}

fn build_family(f: &FamilyArgs) -> Result<Graph, Fail> {
    let core = build_graph(&f.core, f.edges.as_deref())?;
    match &f.flare {
        Some(flare) => Ok(edge_corona(&core, &build_graph(flare, None)?)?),
        None => Ok(core),
    }
}

fn color(
    rule: Rule,
    m: Option<usize>,
    n: usize,
    core: Option<&str>,
    edges: Option<&str>,
) -> Result<GeneratedColoring, Fail> {
    let need_m = || m.ok_or_else(|| usage("this rule needs --m"));
    let flare = || -> Result<Graph, Fail> { build_graph(&format!("complete:{n}"), None) };
    Ok(match rule {
        Rule::UpperGeneral => {
            let g = match (core, m) {
                (Some(spec), _) => build_graph(spec, edges)?,
                (None, Some(m)) => build_path(m)?,
                (None, None) => return Err(usage("upper-general needs --core or --m")),
            };
            if n < 2 {
                return Err(usage("upper-general needs n >= 2"));
            }
            color_upper_general(&g, n)?
        }
        Rule::TreeRvc => {
            let tree = match edges {
                Some(e) => build_tree(&parse_edges(e)?)?,
                None => build_path(need_m()?)?,
            };
            color_tree_rvc(&tree, &flare()?)?
        }
        Rule::PathRvcl => color_path_rvcl(need_m()?, n)?,
        Rule::CycleRvc => color_cycle_rvc(need_m()?, &flare()?)?,
        Rule::CycleRvcl => color_cycle_rvcl(need_m()?, n)?,
        Rule::CompleteRvc => color_complete_rvc(need_m()?, &flare()?)?,
        Rule::CompleteRvcl => color_complete_rvcl(need_m()?, n)?,
    })
}
