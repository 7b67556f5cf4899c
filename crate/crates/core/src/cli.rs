//! Command-line front end. Exit status: 0 on success, 1 when the input is
//! well formed but fails (not weakly labeled, axioms violated, ...), 2 on
//! usage errors and malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::correspondence::{build_graph, build_multigraph, extract_graph, extract_multigraph, Mode};
use crate::dot::to_dot;
use crate::enumeration::{enumerate, EnumOptions};
use crate::families::{self, PbBase, WindowedFamily};
use crate::harmonic::{verify_weak, verify_weak_multi};
use crate::io::{self, GraphFile};
use crate::notation::parse_collection;
use crate::total::{check_admissible, minimize_weights, total_label};

#[derive(Parser, Debug)]
#[command(
    name = "weaklabel",
    version,
    about = "Weak harmonic labelings of graphs and multigraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the balance condition at every non-leaf of a graph file.
    Verify {
        graph: PathBuf,
        /// Read edge weights as multiplicities.
        #[arg(long, conflicts_with = "total")]
        multi: bool,
        /// Read edge weights as a total labeling.
        #[arg(long)]
        total: bool,
    },
    /// Print the collection of closed neighborhoods of a weakly labeled graph.
    Extract {
        graph: PathBuf,
        #[arg(long)]
        multi: bool,
    },
    /// Rebuild the graph encoded by a collection such as "123;02346;345".
    Build {
        collection: String,
        #[arg(long)]
        multi: bool,
        /// Accept collections of disconnected graphs.
        #[arg(long)]
        disconnected: bool,
    },
    /// List every weakly labeled graph on n vertices.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        disconnected: bool,
        #[arg(long, default_value_t = 1)]
        max_mult: u32,
        /// Keep one of each pair related by x -> n-1-x.
        #[arg(long)]
        dedup_inversion: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Generate a member of a constructive family.
    Family(FamilyArgs),
    /// Find positive edge weights balancing an admissible graph.
    Total {
        graph: PathBuf,
        /// Divide out common factors afterwards.
        #[arg(long)]
        minimize: bool,
    },
    /// Convert a graph file to Graphviz.
    Export {
        #[arg(long, required = true)]
        dot: bool,
        input: PathBuf,
        output: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyKind {
    Path,
    Star,
    StarPath,
    CGrid,
    PbWindow,
    CylinderWindow,
    Coalesce,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    kind: FamilyKind,
    #[arg(long)]
    m: Option<usize>,
    /// Vertex count (path, star-path) or leaf count (star).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    h: Option<usize>,
    /// Chord classes, e.g. "0:2,1:3,3:5".
    #[arg(long, default_value = "")]
    base: String,
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<i64>,
    /// Base graph of a cylinder window.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    left: Option<PathBuf>,
    #[arg(long)]
    right: Option<PathBuf>,
}

enum Failure {
    /// Exit 1.
    Domain(String),
    /// Exit 2.
    Usage(String),
}

type Outcome = Result<String, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn read_graph_file(path: &Path) -> Result<GraphFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    GraphFile::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for this family")))
}

fn pretty(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("plain values");
    s.push('\n');
    s
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(stderr, "{}", msg.trim_end());
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {}", msg.trim_end());
            2
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Verify { graph, multi, total } => verify(&graph, multi, total),
        Command::Extract { graph, multi } => extract(&graph, multi),
        Command::Build {
            collection,
            multi,
            disconnected,
        } => build(&collection, multi, !disconnected),
        Command::Enumerate {
            n,
            disconnected,
            max_mult,
            dedup_inversion,
            out,
            threads,
            limit,
        } => {
            let mut opts = EnumOptions::new(n)
                .max_multiplicity(max_mult)
                .dedup_inversion(dedup_inversion);
            if disconnected {
                opts = opts.disconnected();
            }
            if let Some(t) = threads {
                opts = opts.threads(t);
            }
            if let Some(l) = limit {
                opts = opts.limit(l);
            }
            let catalog = enumerate(&opts).map_err(usage)?;
            let json = catalog.to_json();
            match out {
                Some(path) => {
                    fs::write(&path, json).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    Ok(format!(
                        "{} collections written to {}\n",
                        catalog.count(),
                        path.display()
                    ))
                }
                None => Ok(json),
            }
        }
        Command::Family(args) => family(args),
        Command::Total { graph, minimize } => {
            let file = read_graph_file(&graph)?;
            let g = file.simple().map_err(usage)?;
            let admissible = check_admissible(&g);
            if !admissible.is_admissible() {
                return Err(Failure::Domain(format!(
                    "not admissible: vertices {:?} lack a smaller or a larger neighbor",
                    admissible.failing
                )));
            }
            let mut t = total_label(&g).map_err(domain)?;
            if minimize {
                t = minimize_weights(&t);
            }
            Ok(io::total_to_json(&t))
        }
        Command::Export { dot: _, input, output } => {
            let file = read_graph_file(&input)?;
            fs::write(&output, to_dot(&file)).map_err(|e| Failure::Usage(format!("{}: {e}", output.display())))?;
            Ok(String::new())
        }
    }
}

fn verify(path: &Path, multi: bool, total: bool) -> Outcome {
    let file = read_graph_file(path)?;
    let report = if total {
        file.total().map_err(usage)?.verify()
    } else if multi {
        verify_weak_multi(&file.multigraph().map_err(usage)?)
    } else {
        verify_weak(&file.simple().map_err(usage)?)
    };
    let text = pretty(report.to_json());
    if report.is_verified() {
        Ok(text)
    } else {
        Err(Failure::Domain(text))
    }
}

fn extract(path: &Path, multi: bool) -> Outcome {
    let file = read_graph_file(path)?;
    let collection = if multi || file.is_weighted() {
        extract_multigraph(&file.multigraph().map_err(usage)?)
    } else {
        extract_graph(&file.simple().map_err(usage)?)
    };
    Ok(format!("{}\n", collection.map_err(domain)?))
}

fn build(text: &str, multi: bool, connected: bool) -> Outcome {
    let forced = multi.then_some(Mode::Multi);
    let c = parse_collection(text, forced).map_err(usage)?;
    match c.mode() {
        Mode::Multi => Ok(io::multigraph_to_json(
            &build_multigraph(&c, connected).map_err(domain)?,
        )),
        Mode::Simple => Ok(io::graph_to_json(&build_graph(&c, connected).map_err(domain)?)),
    }
}

fn window_output(f: &WindowedFamily, lo: Option<i64>, hi: Option<i64>) -> Outcome {
    let lo = required(lo, "lo")?;
    let hi = required(hi, "hi")?;
    let window = f.window(lo, hi).map_err(usage)?;
    let report = f.verify_window(lo, hi).map_err(usage)?;
    if !report.passed() {
        return Err(Failure::Domain(pretty(serde_json::to_value(&report).expect("report"))));
    }
    Ok(io::window_to_json(&window))
}

fn family(a: FamilyArgs) -> Outcome {
    let graph = match a.kind {
        FamilyKind::Path => families::path(required(a.n, "n")?),
        FamilyKind::Star => families::star(required(a.n, "n")?),
        FamilyKind::StarPath => families::star_path(required(a.m, "m")?, required(a.n, "n")?, required(a.k, "k")?),
        FamilyKind::CGrid => families::c_grid(required(a.k, "k")?, required(a.h, "h")?),
        FamilyKind::Coalesce => {
            let left = read_graph_file(&required(a.left, "left")?)?.simple().map_err(usage)?;
            let right = read_graph_file(&required(a.right, "right")?)?.simple().map_err(usage)?;
            let glued = families::coalesce(&left, &right).map_err(domain)?;
            return Ok(io::graph_to_json(&glued));
        }
        FamilyKind::PbWindow => {
            let base: PbBase = a.base.parse().map_err(usage)?;
            return window_output(&WindowedFamily::Pb(base), a.lo, a.hi);
        }
        FamilyKind::CylinderWindow => {
            let base = read_graph_file(&required(a.graph, "graph")?)?.simple().map_err(usage)?;
            let lo = a.lo.unwrap_or(-5 * base.n() as i64);
            let hi = a.hi.unwrap_or(5 * base.n() as i64);
            return window_output(&WindowedFamily::InnerCylinder(base), Some(lo), Some(hi));
        }
    };
    Ok(io::graph_to_json(&graph.map_err(usage)?))
}
