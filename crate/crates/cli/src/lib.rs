//! Command implementations for the `uniprior` binary.
//!
//! Each command returns the text to print (and to write with `--out`), so
//! the binary only handles argument parsing, output and exit codes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use uniprior::codes::{self, ReportOptions};
use uniprior::decompose;
use uniprior::generate::{self, GeneratorParams};
use uniprior::graphs::{self, DirectedMultigraph};
use uniprior::minors::{self, MinorLimits, UndirectedGraph};
use uniprior::model::{self, DemandSupergraph};
use uniprior::solvers::{self, PackingMode, SolverLimits};
use uniprior::transforms;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: uniprior::Error },
    #[error(transparent)]
    Core(#[from] uniprior::Error),
    /// The command ran but its check failed (e.g. a demand is not decodable).
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 2 when a configured limit was hit, 1 for every other failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) | CliError::Input { source: e, .. } if e.is_limit() => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "uniprior", version, about = "Bounds and cyclic codes for uniprior index coding problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// Side-information graph on messages.
    SideInfo,
    /// Eulerian multigraph on receivers.
    Eulerian,
    /// Generalized cycle built from an Eulerian multigraph file.
    Problem,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Field size q for codes.
    #[arg(long, global = true, default_value_t = 2)]
    pub field: u32,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Maximum number of simple cycles to enumerate.
    #[arg(long, global = true, default_value_t = graphs::DEFAULT_CYCLE_CAP, value_parser = positive_usize)]
    pub cycle_cap: usize,
    /// Search-node budget for the exact solvers and searches.
    #[arg(long, global = true, default_value_t = solvers::DEFAULT_NODE_BUDGET, value_parser = positive_u64)]
    pub budget: u64,
    #[arg(long, global = true, default_value_t = codes::DEFAULT_ORACLE_MAX_EDGES, value_parser = positive_usize)]
    pub oracle_max_edges: usize,
    #[arg(long, global = true, default_value_t = minors::DEFAULT_MINOR_VERTEX_LIMIT, value_parser = positive_usize)]
    pub minor_vertex_limit: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write the machine-readable result to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    positive_usize(s).map(|v| v as u64)
}

impl RunConfig {
    fn solver_limits(&self) -> SolverLimits {
        SolverLimits {
            cycle_cap: self.cycle_cap,
            node_budget: self.budget,
        }
    }

    fn minor_limits(&self) -> MinorLimits {
        MinorLimits {
            vertex_limit: self.minor_vertex_limit,
            node_budget: self.budget,
        }
    }

    fn report_options(&self) -> ReportOptions {
        ReportOptions {
            q: self.field,
            solver: self.solver_limits(),
            search_budget: self.budget,
            minors: Some(self.minor_limits()),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse an instance and check the uniprior conditions.
    Validate { instance: PathBuf },
    /// Report whether an instance is a generalized cycle or demand-decomposable.
    Classify { instance: PathBuf },
    /// Lower and upper bounds on the optimal broadcast length, with certificates.
    Bounds { instance: PathBuf },
    /// Maximum edge-disjoint cycle packing of an instance or multigraph file.
    Pack { input: PathBuf },
    /// Minimum feedback edge set of an instance or multigraph file.
    Fes { input: PathBuf },
    /// Emit the cyclic code of an instance as a code file.
    Code { instance: PathBuf },
    /// Check which demands a code satisfies.
    Verify { instance: PathBuf, code: PathBuf },
    /// Exhaustive GF(2) minrank of the side-information graph.
    Oracle { instance: PathBuf },
    /// List the Petersen family, or test a graph or instance for family minors.
    Petersen { input: Option<PathBuf> },
    /// Generate a random generalized cycle, optionally with intra-cycle extra demands.
    Gen {
        #[arg(long, short = 'm')]
        receivers: usize,
        #[arg(long, short = 'r')]
        cycles: usize,
        #[arg(long, short = 'k', default_value_t = 0)]
        extra: usize,
    },
    /// Convert between instances and their associated graphs.
    Transform {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
}

/// Result text for standard output, plus what `--out` should receive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub file: String,
}

impl Output {
    fn same(text: String) -> Self {
        Output {
            file: text.clone(),
            stdout: text,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_problem(path: &Path) -> Result<DemandSupergraph, CliError> {
    model::parse_problem(&read(path)?).map_err(|source| CliError::Input {
        path: path.to_owned(),
        source,
    })
}

/// Files starting with a `vertices` line are graphs; anything else is an instance.
fn is_graph_file(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("vertices"))
}

/// A directed multigraph from a graph file, or the Eulerian view of a
/// generalized-cycle instance together with its edge labels.
fn load_multigraph(path: &Path) -> Result<(DirectedMultigraph, Vec<String>), CliError> {
    let text = read(path)?;
    let input = |source| CliError::Input {
        path: path.to_owned(),
        source,
    };
    if is_graph_file(&text) {
        let g = graphs::parse_multigraph(&text).map_err(input)?;
        let labels = (0..g.edge_count()).map(|e| e.to_string()).collect();
        Ok((g, labels))
    } else {
        let p = model::parse_problem(&text).map_err(input)?;
        let view = transforms::to_eulerian(&p)?;
        let labels = view.provenance.iter().map(ToString::to_string).collect();
        Ok((view.graph, labels))
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Validate { instance } => {
            let p = load_problem(instance)?;
            Ok(Output::same(format!(
                "valid: m={} n={} demands={}\n",
                p.receiver_count(),
                p.message_count(),
                p.demands().len()
            )))
        }
        Command::Classify { instance } => classify(&load_problem(instance)?, cfg),
        Command::Bounds { instance } => {
            let report = codes::bounds_report(&load_problem(instance)?, cfg.report_options())?;
            let kv = report.to_key_value();
            Ok(Output {
                stdout: format!("{}\n{kv}", report.summary()),
                file: kv,
            })
        }
        Command::Pack { input } => {
            let (g, labels) = load_multigraph(input)?;
            let mode = match cfg.mode {
                Mode::Exact => PackingMode::Exact,
                Mode::Greedy => PackingMode::Greedy,
            };
            let packing = solvers::max_edge_disjoint_packing(&g, mode, cfg.solver_limits())?;
            let mut out = format!("nu_e={}\n", packing.len());
            for c in &packing.cycles {
                let names: Vec<&str> = c.edges().iter().map(|&e| labels[e].as_str()).collect();
                writeln!(out, "cycle={}", names.join(" ")).expect("writing to a string");
            }
            Ok(Output::same(out))
        }
        Command::Fes { input } => {
            let (g, labels) = load_multigraph(input)?;
            let fes = solvers::min_feedback_edge_set(&g, cfg.solver_limits())?;
            let mut out = format!("tau_e={}\n", fes.len());
            for &e in &fes.edges {
                writeln!(out, "edge={}", labels[e]).expect("writing to a string");
            }
            Ok(Output::same(out))
        }
        Command::Code { instance } => {
            let opts = ReportOptions {
                minors: None,
                ..cfg.report_options()
            };
            let report = codes::bounds_report(&load_problem(instance)?, opts)?;
            Ok(Output::same(report.code.to_text()))
        }
        Command::Verify { instance, code } => {
            let p = load_problem(instance)?;
            let c = codes::parse_code(&read(code)?).map_err(|source| CliError::Input {
                path: code.to_owned(),
                source,
            })?;
            let report = codes::verify_code(&p, &c)?;
            let mut out = format!("{}/{} demands decodable\n", report.decodable_count(), report.total());
            for (d, ok) in &report.verdicts {
                writeln!(out, "{d} {}", if *ok { "ok" } else { "not-decodable" }).expect("writing to a string");
            }
            if report.all_decodable() {
                Ok(Output::same(out))
            } else {
                Err(CliError::Failed(out.trim_end().to_owned()))
            }
        }
        Command::Oracle { instance } => {
            let p = load_problem(instance)?;
            let si = transforms::to_side_information_graph(&p)?;
            let m = codes::minrank_oracle(&si, cfg.field, cfg.oracle_max_edges)?;
            let nt = solvers::supergraph_nu_tau(&p, cfg.solver_limits())?;
            let n = p.message_count();
            let mut out = format!(
                "minrank={} free_entries={} lower={} upper={}\n",
                m.value,
                m.free_entries,
                n - nt.tau_e,
                n - nt.nu_e
            );
            for row in m.witness.row_iter() {
                let bits: Vec<String> = row.iter().map(u8::to_string).collect();
                writeln!(out, "row={}", bits.join(" ")).expect("writing to a string");
            }
            Ok(Output::same(out))
        }
        Command::Petersen { input } => petersen(input.as_deref(), cfg),
        Command::Gen {
            receivers,
            cycles,
            extra,
        } => {
            let out = generate::generate(&GeneratorParams {
                receivers: *receivers,
                cycles: *cycles,
                extra_demands: *extra,
                seed: cfg.seed,
            })?;
            Ok(Output::same(out.problem.to_instance_text()))
        }
        Command::Transform { input, to } => {
            let text = read(input)?;
            let wrap = |source| CliError::Input {
                path: input.clone(),
                source,
            };
            let out = match to {
                Target::SideInfo => {
                    let p = model::parse_problem(&text).map_err(wrap)?;
                    let si = transforms::to_side_information_graph(&p)?;
                    labelled(&si.graph, si.labels.iter().map(ToString::to_string))
                }
                Target::Eulerian => {
                    let p = model::parse_problem(&text).map_err(wrap)?;
                    let view = transforms::to_eulerian(&p)?;
                    labelled(&view.graph, view.labels.iter().map(ToString::to_string))
                }
                Target::Problem => {
                    let g = graphs::parse_multigraph(&text).map_err(wrap)?;
                    transforms::from_eulerian(&g)?.to_instance_text()
                }
            };
            Ok(Output::same(out))
        }
    }
}

/// Graph text preceded by a comment naming each vertex.
fn labelled(g: &DirectedMultigraph, labels: impl Iterator<Item = String>) -> String {
    let mut out = String::new();
    for (i, l) in labels.enumerate() {
        writeln!(out, "# {i} = {l}").expect("writing to a string");
    }
    out.push_str(&g.to_text());
    out
}

fn classify(p: &DemandSupergraph, cfg: &RunConfig) -> Result<Output, CliError> {
    let verdict = model::is_generalized_cycle(p);
    let mut out = String::new();
    match &verdict.violation {
        None => out.push_str("generalized-cycle: yes\n"),
        Some(v) => {
            writeln!(out, "generalized-cycle: no ({v})").expect("writing to a string");
            match decompose::find_spanning_generalized_cycle(p, cfg.budget, cfg.solver_limits())? {
                Some(d) => {
                    out.push_str("demand-decomposable: yes\n");
                    for c in &d.packing {
                        writeln!(out, "cycle={c}").expect("writing to a string");
                    }
                }
                None => out.push_str("demand-decomposable: no\n"),
            }
        }
    }
    Ok(Output::same(out))
}

fn petersen(input: Option<&Path>, cfg: &RunConfig) -> Result<Output, CliError> {
    let Some(path) = input else {
        let mut out = String::new();
        for (i, g) in minors::petersen_family().iter().enumerate() {
            writeln!(out, "# member {} ({} vertices, {} edges)", i + 1, g.vertex_count(), g.edge_count())
                .expect("writing to a string");
            out.push_str(&g.to_text());
        }
        return Ok(Output::same(out));
    };
    let text = read(path)?;
    let wrap = |source| CliError::Input {
        path: path.to_owned(),
        source,
    };
    let g: UndirectedGraph = if is_graph_file(&text) {
        minors::parse_undirected(&text).map_err(wrap)?
    } else {
        let p = model::parse_problem(&text).map_err(wrap)?;
        minors::underlying(&transforms::to_eulerian(&p)?.graph)?
    };
    let limits = cfg.minor_limits();
    let mut out = String::new();
    let mut free = true;
    for (i, member) in minors::petersen_family().iter().enumerate() {
        let found = minors::has_minor(&g, member, limits)?;
        free &= !found;
        writeln!(
            out,
            "member {} ({} vertices): {}",
            i + 1,
            member.vertex_count(),
            if found { "minor" } else { "absent" }
        )
        .expect("writing to a string");
    }
    out.insert_str(0, &format!("petersen-free: {}\n", if free { "yes" } else { "no" }));
    Ok(Output::same(out))
}
