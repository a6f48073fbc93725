use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{error::ErrorKind, Args, Parser, Subcommand};
use fo2color::dot::{to_dot, witness_ports, DotOptions};
use fo2color::exec::Exec;
use fo2color::format;
use fo2color::gadgets::{verify_template, GadgetKind, GadgetTemplate};
use fo2color::greedy::fo2color_delta5;
use fo2color::orientation::{build_full_orientation, check_orientation, verify_fo2coloring};
use fo2color::random::random_multigraph;
use fo2color::reduction::{
    assignment_to_coloring, audit_parts, coloring_to_assignment, compile, planarize,
    ReductionOutput,
};
use fo2color::solver::{self, CountOutcome, Outcome, SolveLimits};
use fo2color::Multigraph;

/// Functional-orientation 2-colorings of multigraphs.
///
/// Exit status: 0 yes/valid, 1 no/invalid, 2 budget exhausted, 3 usage or
/// input error.
#[derive(Parser)]
#[command(name = "fo2color", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full functional orientation of a graph, or the component blocking one.
    Orient { graph: PathBuf },
    /// Check a coloring, and optionally an orientation, against a graph.
    Verify {
        graph: PathBuf,
        coloring: PathBuf,
        #[arg(long)]
        orientation: Option<PathBuf>,
    },
    /// Linear-time coloring for graphs of maximum degree at most 5.
    Greedy {
        graph: PathBuf,
        /// Also write the matching orientation here.
        #[arg(long)]
        orientation: Option<PathBuf>,
    },
    /// Exact search for an FO 2-coloring.
    Solve {
        graph: PathBuf,
        /// Count all FO 2-colorings instead.
        #[arg(long)]
        count: bool,
        /// Search node budget (defaults to FO2_BUDGET_NODES, else unlimited).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Inspect a gadget template: not, eq, ne, or, xo, var.
    Gadget(GadgetArgs),
    /// Compile a DIMACS 3-CNF into a hardness instance.
    Reduce {
        cnf: PathBuf,
        /// Replace wire crossings with XO gadgets.
        #[arg(long)]
        planar: bool,
        /// Output prefix for `.graph` and `.witness` (defaults to the input stem).
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Audit `<prefix>.graph` against `<prefix>.witness`.
    Audit { prefix: PathBuf },
    /// Encode an assignment as a coloring and decode it back.
    Roundtrip {
        cnf: PathBuf,
        assignment: PathBuf,
        #[arg(long)]
        planar: bool,
    },
    /// Random loopless multigraph with bounded degree.
    Gen {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Graphviz rendering of a graph.
    Dot {
        graph: PathBuf,
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long)]
        orientation: Option<PathBuf>,
        /// Mark the ports of every gadget in this witness map.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GadgetArgs {
    kind: GadgetKind,
    /// Chain lengths for `var`.
    #[arg(long, requires = "m")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    m: Option<usize>,
    /// Check the realized port table against the declared one.
    #[arg(long, group = "action")]
    verify: bool,
    /// Print the template in graph format.
    #[arg(long, group = "action")]
    export: bool,
    #[arg(long, group = "action")]
    dot: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Yes = 0,
    No = 1,
    Indeterminate = 2,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Multigraph> {
    format::parse_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_cnf(path: &Path) -> Result<fo2color::CnfFormula> {
    format::parse_cnf(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn report_components(bad: &[fo2color::ComponentSummary]) {
    for c in bad {
        println!(
            "component at vertex {}: {} vertices, {} edges, cyclomatic {}",
            c.smallest_vertex(),
            c.vertices.len(),
            c.edge_count,
            c.cyclomatic()
        );
    }
}

fn run(cmd: Command) -> Result<Status> {
    match cmd {
        Command::Orient { graph } => {
            let g = load_graph(&graph)?;
            match build_full_orientation(&g) {
                Ok(o) => {
                    print!("{}", format::emit_orientation(&o));
                    Ok(Status::Yes)
                }
                Err(cert) => {
                    println!("no full functional orientation: {cert}");
                    Ok(Status::No)
                }
            }
        }
        Command::Verify {
            graph,
            coloring,
            orientation,
        } => {
            let g = load_graph(&graph)?;
            let c = format::parse_coloring(&read(&coloring)?, g.vertex_count())?;
            if let Err(bad) = verify_fo2coloring(&g, &c) {
                println!("invalid: {} offending component(s)", bad.len());
                report_components(&bad);
                return Ok(Status::No);
            }
            if let Some(path) = orientation {
                let o = format::parse_orientation(&read(&path)?, g.edge_count())?;
                if !check_orientation(&g, &o, false) {
                    println!("invalid: orientation is not functional");
                    return Ok(Status::No);
                }
            }
            println!("valid");
            Ok(Status::Yes)
        }
        Command::Greedy { graph, orientation } => {
            let g = load_graph(&graph)?;
            let (c, o) = fo2color_delta5(&g)?;
            print!("{}", format::emit_coloring(&c));
            if let Some(path) = orientation {
                write(&path, &format::emit_orientation(&o))?;
            }
            Ok(Status::Yes)
        }
        Command::Solve {
            graph,
            count,
            budget,
        } => {
            let g = load_graph(&graph)?;
            let limits = budget.map_or_else(SolveLimits::from_env, SolveLimits::nodes);
            if count {
                return Ok(match solver::count(&g, limits) {
                    CountOutcome::Exact(n) => {
                        println!("count {n}");
                        if n > 0 {
                            Status::Yes
                        } else {
                            Status::No
                        }
                    }
                    CountOutcome::Indeterminate => {
                        println!("indeterminate");
                        Status::Indeterminate
                    }
                });
            }
            Ok(match solver::decide(&g, limits) {
                Outcome::Yes(c) => {
                    println!("yes");
                    print!("{}", format::emit_coloring(&c));
                    Status::Yes
                }
                Outcome::No => {
                    println!("no");
                    Status::No
                }
                Outcome::Indeterminate => {
                    println!("indeterminate");
                    Status::Indeterminate
                }
            })
        }
        Command::Gadget(args) => gadget(args),
        Command::Reduce {
            cnf,
            planar,
            output,
        } => {
            let f = load_cnf(&cnf)?;
            let mut out = compile(&f);
            if planar {
                out = planarize(&out);
            }
            let prefix = output.unwrap_or_else(|| cnf.with_extension(""));
            write(&with_ext(&prefix, "graph"), &format::emit_graph(&out.graph))?;
            write(&with_ext(&prefix, "witness"), &format::emit_witness(&out.witness))?;
            println!("stage {}", out.stage().as_str());
            println!("vertices {}", out.graph.vertex_count());
            println!("edges {}", out.graph.edge_count());
            println!("max_degree {}", out.graph.max_degree());
            for (kind, n) in out.witness.gadget_counts() {
                println!("gadget {kind} {n}");
            }
            Ok(Status::Yes)
        }
        Command::Audit { prefix } => {
            let g = load_graph(&with_ext(&prefix, "graph"))?;
            let w = format::parse_witness(&read(&with_ext(&prefix, "witness"))?)?;
            let report = audit_parts(&g, &w);
            println!("{report}");
            Ok(if report.passed() { Status::Yes } else { Status::No })
        }
        Command::Roundtrip {
            cnf,
            assignment,
            planar,
        } => {
            let f = load_cnf(&cnf)?;
            let a = format::parse_assignment(&read(&assignment)?, f.num_vars())?;
            if let Some(c) = f.first_unsatisfied(&a) {
                println!("assignment falsifies clause {}", c + 1);
                return Ok(Status::No);
            }
            let mut out = compile(&f);
            if planar {
                out = planarize(&out);
            }
            roundtrip(&out, &a)
        }
        Command::Gen {
            vertices,
            max_degree,
            seed,
        } => {
            print!(
                "{}",
                format::emit_graph(&random_multigraph(vertices, max_degree, seed))
            );
            Ok(Status::Yes)
        }
        Command::Dot {
            graph,
            coloring,
            orientation,
            witness,
        } => {
            let g = load_graph(&graph)?;
            let c = coloring
                .map(|p| Ok::<_, anyhow::Error>(format::parse_coloring(&read(&p)?, g.vertex_count())?))
                .transpose()?;
            let o = orientation
                .map(|p| Ok::<_, anyhow::Error>(format::parse_orientation(&read(&p)?, g.edge_count())?))
                .transpose()?;
            let ports = match witness {
                Some(p) => witness_ports(&format::parse_witness(&read(&p)?)?),
                None => Vec::new(),
            };
            let opts = DotOptions {
                ports: &ports,
                coloring: c.as_ref(),
                orientation: o.as_ref(),
            };
            print!("{}", to_dot(&g, opts));
            Ok(Status::Yes)
        }
    }
}

fn roundtrip(out: &ReductionOutput, a: &[bool]) -> Result<Status> {
    let c = assignment_to_coloring(out, a)?;
    if verify_fo2coloring(&out.graph, &c).is_err() {
        println!("encoded coloring rejected");
        return Ok(Status::No);
    }
    let back = coloring_to_assignment(out, &c)?;
    if back != a {
        println!("decoded assignment differs");
        return Ok(Status::No);
    }
    print!("{}", format::emit_assignment(&back));
    println!("roundtrip ok ({} vertices)", out.graph.vertex_count());
    Ok(Status::Yes)
}

fn gadget(args: GadgetArgs) -> Result<Status> {
    let kind = match (args.kind, args.n, args.m) {
        (GadgetKind::Var { .. }, Some(n), Some(m)) => format!("var({n},{m})").parse()?,
        (_, Some(_), _) => bail!("--n and --m apply to var only"),
        (k, _, _) => k,
    };
    let t = GadgetTemplate::get(kind)?;
    if args.export {
        print!("{}", format::emit_graph(&t.graph));
        return Ok(Status::Yes);
    }
    if args.dot {
        let opts = DotOptions {
            ports: &t.ports,
            ..Default::default()
        };
        print!("{}", to_dot(&t.graph, opts));
        return Ok(Status::Yes);
    }
    println!("gadget {kind}");
    println!("vertices {}", t.graph.vertex_count());
    println!("edges {}", t.graph.edge_count());
    println!("max_degree {}", t.graph.max_degree());
    println!("ports {}", t.port_names.join(" "));
    if !args.verify {
        for p in &t.declared {
            println!("declared {}", solver::pattern_string(*p, t.ports.len()));
        }
        return Ok(Status::Yes);
    }
    let r = match verify_template(&t, SolveLimits::from_env(), Exec::default()) {
        Ok(r) => r,
        Err(solver::SolveError::Indeterminate(msg)) => {
            println!("indeterminate: {msg}");
            return Ok(Status::Indeterminate);
        }
        Err(e) => return Err(e.into()),
    };
    for p in r.table_strings() {
        println!("realized {p}");
    }
    if let Some(opposite) = r.center_opposite {
        println!("center_opposite {opposite}");
    }
    let ok = r.passed();
    println!("result {}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { Status::Yes } else { Status::No })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match run(cli.command) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
