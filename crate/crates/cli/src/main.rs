use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dbrg::bigraph::{dbrg_check, halved_graphs, srg_check, BipartiteGraph, IntersectionArray, NotDbrg};
use dbrg::constructions::{self, ConstructionError, ConstructionResult};
use dbrg::feasibility::{self, CandidateArray, Catalog, Status};
use dbrg::geometry;
use dbrg::gf::Field;
use dbrg::perpsys::{self, Budget, PerpFile, SearchConfig, SearchStop, Symmetry};

/// Exit statuses. Verdicts are kept apart from operational failures.
mod code {
    pub const USAGE: u8 = 2;
    pub const NOT_DBRG: u8 = 3;
    pub const INFEASIBLE: u8 = 4;
    pub const EXHAUSTED: u8 = 5;
    pub const IO: u8 = 6;
    pub const PARSE: u8 = 7;
}

#[derive(Parser)]
#[command(name = "dbrg", version, about = "Distance-biregular graphs: constructions, verification, perp systems, feasibility")]
struct Cli {
    /// Worker threads (output does not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a graph family, verify it, and write the graph plus a JSON sidecar.
    Construct(ConstructArgs),
    /// Check a graph file for distance-biregularity.
    Verify {
        graph: PathBuf,
        /// Also check the halved graphs for strong regularity.
        #[arg(long)]
        halves: bool,
    },
    /// Local graph on the vertices at distance 3 and 4 from a vertex.
    Derive {
        graph: PathBuf,
        /// Global vertex number (B first, then C).
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Perp(PerpCmd),
    #[command(subcommand)]
    Feas(FeasCmd),
    /// Join the enumerated table with a catalog of known results.
    Catalog {
        /// Catalog TOML file; the bundled one by default.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, default_value_t = 1300)]
        max_side: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    CompleteBipartite,
    BiJohnson,
    BiGrassmann,
    GenDelorme,
    Cone,
    HyperovalAffine,
}

#[derive(Args)]
struct ConstructArgs {
    family: Family,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    /// Perp file for gen-delorme.
    #[arg(long)]
    perp: Option<PathBuf>,
    /// For gen-delorme without a perp file: degree of a maximal arc in PG(2, q).
    #[arg(long, default_value_t = 2)]
    degree: u64,
    /// Graph output path; the sidecar goes to `<out>.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PerpCmd {
    /// Check the perp-system axioms for a perp file.
    Verify {
        file: PathBuf,
    },
    /// Backtracking search for a perp system.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_seconds: Option<f64>,
        #[arg(long, value_enum, default_value_t = SymArg::FirstPair)]
        symmetry: SymArg,
        /// Perp file for the solution.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Necessary conditions on (n, k, q, d).
    Params {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SymArg {
    None,
    FirstMember,
    FirstPair,
}

#[derive(Subcommand)]
enum FeasCmd {
    /// Enumerate diameter-four arrays with at most `max-side` vertices per class.
    Enumerate {
        #[arg(long, default_value_t = 1300)]
        max_side: u64,
        /// CSV output; the JSON mirror goes to the same path with `.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assess one array such as "{6;1,2,10,6 | 16;1,4,5,16}".
    Check { array: String },
}

struct Fail {
    code: u8,
    msg: String,
    payload: Option<Value>,
}

impl Fail {
    fn new(code: u8, msg: impl ToString) -> Fail {
        Fail {
            code,
            msg: msg.to_string(),
            payload: None,
        }
    }

    fn with(mut self, v: Value) -> Fail {
        self.payload = Some(v);
        self
    }
}

type Res = Result<Value, Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail::new(code::IO, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| Fail::new(code::IO, format!("{}: {e}", path.display())))
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn load_graph(path: &Path) -> Result<BipartiteGraph, Fail> {
    BipartiteGraph::parse(&read(path)?).map_err(|e| Fail::new(code::PARSE, format!("{}: {e}", path.display())))
}

fn need(x: Option<u64>, name: &str) -> Result<u64, Fail> {
    x.ok_or_else(|| Fail::new(code::USAGE, format!("--{name} is required for this family")))
}

fn construction_fail(e: ConstructionError) -> Fail {
    match e {
        ConstructionError::Hypothesis { .. } | ConstructionError::Perp(_) => Fail::new(code::INFEASIBLE, e),
        ConstructionError::NotDbrg(_) => Fail::new(code::NOT_DBRG, e),
        _ => Fail::new(code::USAGE, e),
    }
}

fn not_dbrg(e: NotDbrg) -> Fail {
    let msg = e.to_string();
    Fail::new(code::NOT_DBRG, &msg).with(json!({ "dbrg": false, "witness": msg }))
}

/// Verifies a construction against its prediction and writes artifacts.
fn emit(r: &ConstructionResult, out: Option<&Path>) -> Res {
    let report = dbrg_check(&r.graph);
    let measured = report.as_ref().ok().map(|x| x.array.to_string());
    let matches = report.as_ref().is_ok_and(|x| x.array == r.predicted);
    let summary = json!({
        "provenance": r.provenance,
        "nb": r.graph.nb(),
        "nc": r.graph.nc(),
        "predicted": r.predicted.to_string(),
        "measured": measured,
        "match": matches,
        "witness": report.as_ref().err().map(|e| e.to_string()),
    });
    if let Some(p) = out {
        write(p, &r.graph.to_text())?;
        write(&sidecar(p), &pretty(&summary))?;
    }
    if matches {
        Ok(summary)
    } else {
        Err(Fail::new(code::NOT_DBRG, "measured array differs from the prediction").with(summary))
    }
}

fn construct(a: ConstructArgs) -> Res {
    use constructions as c;
    let r = match a.family {
        Family::CompleteBipartite => c::complete_bipartite(need(a.k, "k")?, need(a.l, "l")?),
        Family::BiJohnson => c::bi_johnson(need(a.n, "n")?, need(a.k, "k")?),
        Family::BiGrassmann => c::bi_grassmann(need(a.n, "n")?, need(a.k, "k")?, need(a.q, "q")?),
        Family::Cone => c::cone_graph(need(a.q, "q")?),
        Family::HyperovalAffine => c::hyperoval_affine_graph(need(a.q, "q")?),
        Family::GenDelorme => {
            let sys = match &a.perp {
                Some(p) => PerpFile::parse(&read(p)?)
                    .map_err(|e| Fail::new(code::PARSE, format!("{}: {e}", p.display())))?
                    .verify()
                    .map_err(|e| Fail::new(code::INFEASIBLE, e))?,
                None => {
                    let q = need(a.q, "q")?;
                    let field = Field::of_order(q).map_err(|e| Fail::new(code::USAGE, e))?;
                    let arc = if a.degree == 2 {
                        geometry::hyperoval(&field)
                    } else {
                        geometry::denniston_arc(&field, a.degree)
                    }
                    .map_err(|e| Fail::new(code::USAGE, e))?;
                    c::maximal_arc_system(&arc).map_err(construction_fail)?
                }
            };
            c::gen_delorme_graph(&sys)
        }
    }
    .map_err(construction_fail)?;
    emit(&r, a.out.as_deref())
}

fn verify(path: &Path, halves: bool) -> Res {
    let g = load_graph(path)?;
    let rep = dbrg_check(&g).map_err(not_dbrg)?;
    let mut v = json!({
        "dbrg": true,
        "array": rep.array.to_string(),
        "regular": rep.regular,
        "nb": g.nb(),
        "nc": g.nc(),
        "girth": g.girth(),
    });
    if halves {
        let (hb, hc) = halved_graphs(&g);
        let s = |h| match srg_check(h) {
            Ok(t) => json!([t.0, t.1, t.2, t.3]),
            Err(e) => json!(e.to_string()),
        };
        v["halved_b"] = s(&hb);
        v["halved_c"] = s(&hc);
    }
    Ok(v)
}

fn derive(path: &Path, vertex: usize, out: Option<&Path>) -> Res {
    let g = load_graph(path)?;
    let (r, h) = constructions::derived_local_graph(&g, vertex).map_err(construction_fail)?;
    let mut v = emit(&r, out)?;
    v["delta3"] = json!(h.delta3.to_string());
    v["gamma3"] = json!(h.gamma3.to_string());
    Ok(v)
}

fn perp(cmd: PerpCmd) -> Res {
    match cmd {
        PerpCmd::Verify { file } => {
            let pf = PerpFile::parse(&read(&file)?).map_err(|e| Fail::new(code::PARSE, format!("{}: {e}", file.display())))?;
            let p = pf.verify().map_err(|e| Fail::new(code::INFEASIBLE, e))?;
            Ok(json!({
                "perp_system": true,
                "q": p.field().q(), "n": p.n(), "k": p.k(), "d": p.d(), "s": p.s(),
            }))
        }
        PerpCmd::Search {
            n,
            k,
            q,
            d,
            seed,
            budget_nodes,
            budget_seconds,
            symmetry,
            out,
        } => {
            let cfg = SearchConfig {
                budget: Budget {
                    max_nodes: budget_nodes,
                    max_seconds: budget_seconds,
                },
                seed,
                symmetry: match symmetry {
                    SymArg::None => Symmetry::None,
                    SymArg::FirstMember => Symmetry::FirstMember,
                    SymArg::FirstPair => Symmetry::FirstPair,
                },
                count_all: false,
            };
            let rep = perpsys::perp_search(n as usize, k as usize, q, d as usize, &cfg).map_err(|e| Fail::new(code::INFEASIBLE, e))?;
            let summary = json!({
                "stop": format!("{:?}", rep.stop),
                "nodes": rep.nodes,
                "target_s": rep.target_s,
                "found": rep.solution.is_some(),
                "seed": seed,
            });
            match (&rep.solution, rep.stop) {
                (Some(p), _) => {
                    if let Some(path) = &out {
                        write(path, &PerpFile::from_system(p).to_text())?;
                    }
                    Ok(summary)
                }
                (None, SearchStop::Complete) => Err(Fail::new(code::INFEASIBLE, "search space exhausted without a solution").with(summary)),
                (None, _) => Err(Fail::new(code::EXHAUSTED, "budget exhausted").with(summary)),
            }
        }
        PerpCmd::Params { n, k, q, d } => {
            let p = perpsys::perp_params(n, k, q, d).map_err(|e| Fail::new(code::USAGE, e))?;
            let v = serde_json::to_value(&p).expect("json");
            if p.admissible() {
                Ok(v)
            } else {
                Err(Fail::new(code::INFEASIBLE, p.failures().join("; ")).with(v))
            }
        }
    }
}

fn feas(cmd: FeasCmd) -> Res {
    match cmd {
        FeasCmd::Enumerate { max_side, out } => {
            let rows = feasibility::enumerate_feasible(max_side);
            if let Some(p) = &out {
                write(p, &feasibility::to_csv(&rows))?;
                write(&p.with_extension("json"), &pretty(&feasibility::to_json(&rows)))?;
            }
            let count = |s| rows.iter().filter(|r| r.status == s).count();
            Ok(json!({
                "max_side": max_side,
                "rows": rows.len(),
                "feasible": count(Status::Feasible),
                "flagged": count(Status::Flagged),
                "infeasible": count(Status::Infeasible),
            }))
        }
        FeasCmd::Check { array } => {
            let arr: IntersectionArray = array.parse().map_err(|e| Fail::new(code::PARSE, e))?;
            let a = CandidateArray::from_array(&arr).ok_or_else(|| Fail::new(code::USAGE, "not a diameter-four array"))?;
            let r = feasibility::assess(&a);
            let v = serde_json::to_value(&r).expect("json");
            if r.status == Status::Infeasible {
                Err(Fail::new(code::INFEASIBLE, r.reasons().join("; ")).with(v))
            } else {
                Ok(v)
            }
        }
    }
}

fn catalog(path: Option<PathBuf>, max_side: u64, out: Option<PathBuf>) -> Res {
    let cat = match &path {
        Some(p) => Catalog::parse(&read(p)?).map_err(|e| Fail::new(code::PARSE, e))?,
        None => feasibility::default_catalog(),
    };
    let rows = feasibility::enumerate_feasible(max_side);
    let a = feasibility::catalog_annotate(&rows, &cat).map_err(|e| Fail::new(code::INFEASIBLE, e))?;
    let v = serde_json::to_value(&a).expect("json");
    if let Some(p) = &out {
        write(p, &pretty(&v))?;
    }
    Ok(json!({
        "matched": a.matched.len(),
        "missing": a.missing.len(),
        "extras": a.extras.iter().map(|r| r.array.to_string()).collect::<Vec<_>>(),
    }))
}

fn run(cli: Cli) -> Res {
    match cli.cmd {
        Cmd::Construct(a) => construct(a),
        Cmd::Verify { graph, halves } => verify(&graph, halves),
        Cmd::Derive { graph, vertex, out } => derive(&graph, vertex, out.as_deref()),
        Cmd::Perp(c) => perp(c),
        Cmd::Feas(c) => feas(c),
        Cmd::Catalog { catalog: c, max_side, out } => catalog(c, max_side, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(code::USAGE);
        }
    }
    match run(cli) {
        Ok(v) => {
            print!("{}", pretty(&v));
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(v) = &f.payload {
                print!("{}", pretty(v));
            }
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
