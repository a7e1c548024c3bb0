use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use surface_cyclic::acceptance;
use surface_cyclic::compatibility::{run_script, Move};
use surface_cyclic::dataset::{validate, RawDataSet};
use surface_cyclic::fatgraph::{cyclic_generator, vertex_orbit_certificate, FatGraphSpec};
use surface_cyclic::hyperbolic::{pairing_word, polygon_spec, solve_metrics};
use surface_cyclic::svg::render_svg;
use surface_cyclic::{decompose, enumerate, DataSet, FatGraph, Necklace};

#[derive(Parser)]
#[command(
    name = "surface-cyclic",
    version,
    about = "Cyclic actions on closed orientable surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Compact single-line JSON.
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON (the default).
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check conditions (i)-(v) and genus integrality of a raw tuple.
    Validate(DatasetArg),
    /// List every data set of order n on the surface of genus g.
    Enumerate {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        g: i64,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Genus, action class, orbits and fixed locus dimension.
    Classify(DatasetArg),
    /// Run a JSON script of composition moves.
    Compose {
        #[arg(long)]
        script: PathBuf,
    },
    /// Write a data set as a necklace of spherical Type 1 beads.
    Decompose(DatasetArg),
    /// Factor counts of the fixed locus, from a necklace or a data set.
    Fix {
        #[arg(long, conflicts_with = "dataset", required_unless_present = "dataset")]
        necklace: Option<PathBuf>,
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Hyperbolic polygon of a spherical Type 1 action.
    Polygon {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        metrics: Option<PathBuf>,
    },
    /// Fat graph invariants, automorphisms and the filling theorem.
    Fatgraph(FatgraphArgs),
    /// Vertex orbit arithmetic for a hypothetical minimal filling action.
    Certificate {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 1)]
        b: i64,
        /// Cone orders, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        cones: Vec<i64>,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args)]
struct DatasetArg {
    #[arg(long)]
    dataset: PathBuf,
}

#[derive(Args)]
struct FatgraphArgs {
    /// Rotation system JSON: `{"vertices": [[...]], "edges": [[a, b]]}`.
    #[arg(long, conflicts_with = "word", required_unless_present = "word")]
    graph: Option<PathBuf>,
    /// Single boundary word such as "a b a^-1 b^-1".
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    auts: bool,
    #[arg(long)]
    signature: bool,
    #[arg(long)]
    check_theorem: bool,
    /// Index into the sorted automorphism list; defaults to a generator of
    /// the group when it is cyclic, else the element of largest order.
    #[arg(long)]
    automorphism: Option<usize>,
}

struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Failure {
            kind,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::new("parse", format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn set_jobs(jobs: Option<usize>) -> Result<(), Failure> {
    if let Some(j) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Failure::new("jobs", e))?;
    }
    Ok(())
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate(a) => {
            let raw: RawDataSet = read_json(&a.dataset)?;
            let report = validate(&raw);
            Ok((to_value(&report), report.valid))
        }
        Command::Enumerate { n, g, jobs } => {
            if n < 1 || g < 0 {
                return Err(Failure::new("domain", "enumerate needs n >= 1 and g >= 0"));
            }
            set_jobs(jobs)?;
            let sets = enumerate(n, g);
            Ok((json!({ "n": n, "g": g, "count": sets.len(), "datasets": sets }), true))
        }
        Command::Classify(a) => {
            let d: DataSet = read_json(&a.dataset)?;
            let canonical = d.canonicalize();
            Ok((
                json!({
                    "dataset": canonical,
                    "genus": d.genus(),
                    "class": d.classify(),
                    "irreducible": d.is_irreducible(),
                    "fix_dimension": d.fix_dimension_harvey().ok(),
                    "orbits": d.orbit_structure(),
                    "reduction_orbits": d.reduction_orbit_counts().ok(),
                }),
                true,
            ))
        }
        Command::Compose { script } => {
            let moves: Vec<Move> = read_json(&script)?;
            let out = run_script(&moves).map_err(|e| Failure::new("compose", e))?;
            let trace: Vec<i64> = out.trace.iter().map(|t| t.genus).collect();
            Ok((
                json!({ "genus_trace": trace, "result": out.result.canonicalize(), "steps": out.trace }),
                true,
            ))
        }
        Command::Decompose(a) => {
            let d: DataSet = read_json(&a.dataset)?;
            let necklace = decompose(&d).map_err(|e| Failure::new("decompose", e))?;
            let r = necklace.realize().map_err(|e| Failure::new("necklace", e))?;
            Ok((
                json!({ "necklace": necklace, "genus_trace": r.genus_trace(), "result": r.result }),
                true,
            ))
        }
        Command::Fix { necklace, dataset } => {
            let n: Necklace = match (necklace, dataset) {
                (Some(p), _) => read_json(&p)?,
                (None, Some(p)) => {
                    let d: DataSet = read_json(&p)?;
                    decompose(&d).map_err(|e| Failure::new("decompose", e))?
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            let desc = n.fix_descriptor().map_err(|e| Failure::new("necklace", e))?;
            Ok((to_value(&desc), true))
        }
        Command::Polygon { dataset, svg, metrics } => {
            let d: DataSet = read_json(&dataset)?;
            let fail = |e| Failure::new("hyperbolic", e);
            let spec = polygon_spec(&d).map_err(fail)?;
            let m = solve_metrics(&spec).map_err(fail)?;
            let word = pairing_word(&d).map_err(fail)?;
            if let Some(path) = svg {
                write_file(&path, &render_svg(&spec, &m, &word).map_err(fail)?)?;
            }
            if let Some(path) = metrics {
                write_file(&path, &(serde_json::to_string_pretty(&m).expect("serializable") + "\n"))?;
            }
            Ok((
                json!({
                    "dataset": d.canonicalize(),
                    "genus": d.genus(),
                    "sides": spec.sides,
                    "theta": spec.theta,
                    "corner_angles": spec.corner_angles,
                    "area": m.area,
                    "word": word.word(),
                    "interpretation": word.interpretation,
                }),
                true,
            ))
        }
        Command::Fatgraph(a) => fatgraph(a),
        Command::Certificate { g, n, b, cones } => Ok((to_value(&vertex_orbit_certificate(g, n, b, &cones)), true)),
        Command::Verify { jobs } => {
            set_jobs(jobs)?;
            let reports = acceptance::run_all();
            for r in &reports {
                eprintln!("{}", r.line());
            }
            let all = reports.iter().all(|r| r.passed);
            Ok((json!({ "passed": all, "criteria": reports }), all))
        }
    }
}

fn fatgraph(a: FatgraphArgs) -> Outcome {
    let fail = |e| Failure::new("fatgraph", e);
    let graph = match (&a.graph, &a.word) {
        (Some(p), _) => {
            let spec: FatGraphSpec = read_json(p)?;
            FatGraph::build(&spec.vertices, &spec.edges).map_err(fail)?
        }
        (None, Some(w)) => FatGraph::from_boundary_word(w).map_err(fail)?,
        (None, None) => unreachable!("clap requires one input"),
    };
    let mut out = json!({
        "genus": graph.genus(),
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "boundary_components": graph.boundary_count(),
        "degrees": graph.degrees(),
        "boundary_walks": graph.boundary_walks(),
    });
    if !(a.auts || a.signature || a.check_theorem) {
        return Ok((out, true));
    }
    let group = graph.automorphisms();
    if a.auts {
        out["automorphisms"] = to_value(&group);
        out["cyclic"] = json!(cyclic_generator(&group).is_some());
    }
    if a.signature || a.check_theorem {
        let chosen = match a.automorphism {
            Some(i) => group.get(i).ok_or_else(|| {
                Failure::new(
                    "fatgraph",
                    format!("automorphism {i} out of range ({} elements)", group.len()),
                )
            })?,
            None => cyclic_generator(&group)
                .or_else(|| group.iter().max_by_key(|h| h.order))
                .expect("identity is always present"),
        };
        out["automorphism"] = to_value(chosen);
        if a.signature {
            out["signature"] = to_value(&graph.induced_signature(chosen).map_err(fail)?);
        }
        if a.check_theorem {
            out["theorem"] = to_value(&graph.filling_irreducibility_check(chosen).map_err(fail)?);
        }
    }
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let compact = cli.json && !cli.pretty;
    let render = |v: &Value| {
        if compact {
            serde_json::to_string(v)
        } else {
            serde_json::to_string_pretty(v)
        }
        .expect("serializable")
    };
    match run(cli.command) {
        Ok((value, ok)) => {
            println!("{}", render(&value));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("{}", render(&json!({ "error": f.kind, "message": f.message })));
            ExitCode::from(1)
        }
    }
}
