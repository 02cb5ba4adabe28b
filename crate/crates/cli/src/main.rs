//! `dmajor`: exact d-majorization from the command line.
//!
//! Exit codes: 0 when the relation or every check holds, 1 when it does not
//! (including `--max-corner` on a generator with negative entries), 2 on
//! input errors.

mod problem;
mod report;
mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dmajor_core::arith::{fmt_pq, parse_rational};
use dmajor_core::curve::ThermoCurve;
use dmajor_core::dmaj::{dmajorizes, find_witness, traces_match, Criterion};
use dmajor_core::halfspace::DEFAULT_MAX_PERMUTATION_N;
use dmajor_core::polytope::{
    build_dmaj_hrep, classical_max_corner, dmaj_vertex_labels, dmaj_vertices_capped, hausdorff, lipschitz_constant,
    nonexpansive_check, Side, MAX_LIPSCHITZ_N,
};
use dmajor_core::sd3::{verify_extremality, Sd3Case};
use dmajor_core::{Error, HalfspaceSystem, Permutation, RVec, Rational, RowMask, VPolytope, WeightVec};
use num_traits::One;
use serde_json::{json, Value};

use crate::problem::{Problem, Sweep};

#[derive(Parser)]
#[command(name = "dmajor", version, about = "Exact majorization relative to a positive weight vector")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether y d-majorizes x.
    Check(CheckArgs),
    /// Describe the polytope of vectors d-majorized by y.
    Polytope(PolytopeArgs),
    /// 1-norm Hausdorff distance between the polytopes of two files.
    Hausdorff(HausdorffArgs),
    /// Extreme points of the 3×3 d-stochastic matrices.
    Sd3(Sd3Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionFlag {
    Iv,
    Vi,
    Vii,
    All,
}

impl CriterionFlag {
    fn selected(self) -> Vec<Criterion> {
        match self {
            CriterionFlag::Iv => vec![Criterion::PositiveParts],
            CriterionFlag::Vi => vec![Criterion::OneNorm],
            CriterionFlag::Vii => vec![Criterion::Curve],
            CriterionFlag::All => Criterion::ALL.to_vec(),
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    criterion: CriterionFlag,
    /// Also test the converse and report cycles of the preorder.
    #[arg(long)]
    both: bool,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct PolytopeArgs {
    file: PathBuf,
    /// Vertex list with a generating σ for each vertex.
    #[arg(long)]
    vertices: bool,
    /// Right-hand sides b indexed by row masks.
    #[arg(long)]
    hrep: bool,
    /// Write the thermo-majorization curve as CSV.
    #[arg(long, value_name = "OUT")]
    curve: Option<PathBuf>,
    /// Uniform samples added between adjacent curve elbows.
    #[arg(long, value_name = "K", default_value_t = 0)]
    refine: usize,
    /// Draw the polytope on the standard simplex (n = 3 only).
    #[arg(long, value_name = "OUT")]
    svg: Option<PathBuf>,
    /// The vertex that classically majorizes the whole polytope (y ≥ 0).
    #[arg(long)]
    max_corner: bool,
    /// Vertices along d(λ) = (1-λ)d + λ d_end for k+1 values of λ.
    #[arg(long, num_args = 3, value_names = ["L0", "L1", "K"], allow_hyphen_values = true)]
    sweep: Option<Vec<String>>,
    /// Write the sweep vertices as CSV.
    #[arg(long, value_name = "OUT")]
    sweep_csv: Option<PathBuf>,
    /// Cross-check the vertices against generic enumeration.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct HausdorffArgs {
    file_a: PathBuf,
    file_b: PathBuf,
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct Sd3Args {
    file: PathBuf,
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

/// Why a run stopped early, with its exit code.
#[derive(Debug)]
enum Failure {
    Input(String),
    NotHolds(String),
}

type Run<T> = std::result::Result<T, Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check(args) => check(args),
        Command::Polytope(args) => polytope(args),
        Command::Hausdorff(args) => hausdorff_cmd(args),
        Command::Sd3(args) => sd3(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::NotHolds(message)) => {
            eprintln!("dmajor: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Input(message)) => {
            eprintln!("dmajor: {message}");
            ExitCode::from(2)
        }
    }
}

/// Cap on `n` for sweeps over all permutations, raised by `DMAJOR_MAX_N`.
fn permutation_cap() -> Run<usize> {
    match std::env::var("DMAJOR_MAX_N") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("DMAJOR_MAX_N must be a positive integer, found `{v}`"))),
        Err(_) => Ok(DEFAULT_MAX_PERMUTATION_N),
    }
}

fn dimension_error(e: Error) -> Failure {
    match e {
        Error::DimensionTooLarge { n, max } => Failure::Input(format!(
            "dimension {n} exceeds the cap of {max} for permutation sweeps; set DMAJOR_MAX_N to raise it"
        )),
        other => input(other),
    }
}

/// Human output goes to stdout unless JSON does.
struct Out {
    quiet: bool,
}

impl Out {
    fn new(json: &Option<PathBuf>) -> Self {
        Out {
            quiet: json.as_deref() == Some(Path::new("-")),
        }
    }

    fn line(&self, text: impl AsRef<str>) {
        // a closed pipe (`dmajor ... | head`) is not an error
        if !self.quiet {
            let _ = writeln!(std::io::stdout().lock(), "{}", text.as_ref());
        }
    }
}

fn emit_json(path: &Option<PathBuf>, value: Value) -> Run<()> {
    match path {
        Some(p) => report::write(p, &value).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => Ok(()),
    }
}

fn write_file(path: &Path, text: &str) -> Run<()> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

struct Verdicts {
    holds: bool,
    criteria: Vec<(Criterion, bool)>,
}

fn decide(x: &RVec, y: &RVec, d: &WeightVec, selected: &[Criterion]) -> Run<Verdicts> {
    let criteria = selected
        .iter()
        .map(|&c| dmajorizes(x, y, d, c).map(|v| (c, v)).map_err(input))
        .collect::<Run<Vec<_>>>()?;
    let holds = criteria[0].1;
    if criteria.iter().any(|&(_, v)| v != holds) {
        let listing: Vec<String> = criteria.iter().map(|(c, v)| format!("({}) {v}", c.label())).collect();
        return Err(Failure::Input(format!("criteria disagree: {}", listing.join(", "))));
    }
    Ok(Verdicts { holds, criteria })
}

fn verdicts_json(v: &Verdicts) -> Value {
    let criteria: serde_json::Map<String, Value> =
        v.criteria.iter().map(|(c, b)| (c.label().to_string(), json!(b))).collect();
    json!({ "holds": v.holds, "criteria": criteria })
}

fn criterion_name(c: Criterion) -> &'static str {
    match c {
        Criterion::PositiveParts => "positive parts",
        Criterion::OneNorm => "one-norm",
        Criterion::Curve => "curve",
    }
}

fn check(args: CheckArgs) -> Run<bool> {
    let out = Out::new(&args.json);
    let p = Problem::read(&args.file).map_err(input)?;
    let (x, y, d) = (p.x().map_err(input)?, p.y().map_err(input)?, p.d().map_err(input)?);
    let selected = args.criterion.selected();
    let forward = decide(x, y, &d, &selected)?;
    out.line(format!("x = {x}\ny = {y}\nd = {}", d.as_vec()));
    for (c, v) in &forward.criteria {
        out.line(format!(
            "  {:<6}{:<15} {}",
            format!("({})", c.label()),
            criterion_name(*c),
            if *v { "holds" } else { "fails" }
        ));
    }
    let mut results = verdicts_json(&forward);
    if matches!(args.criterion, CriterionFlag::All) {
        let witness = find_witness(x, y, &d).map_err(input)?;
        if witness.is_some() != forward.holds {
            return Err(Failure::Input("witness program disagrees with the criteria".into()));
        }
        if let Some(a) = witness {
            if !a.is_witness(x, y, &d) {
                return Err(Failure::Input("witness failed exact verification".into()));
            }
            out.line("witness A with A y = x, A d = d:");
            for row in a.matrix().to_string().lines() {
                out.line(format!("  {row}"));
            }
            results["witness"] = report::matrix(a.matrix());
        }
    }
    if !forward.holds {
        let reason = if traces_match(x, y) { "inequality" } else { "trace" };
        results["reason"] = json!(reason);
        if reason == "trace" {
            out.line(format!("traces differ: {} vs {}", x.sum(), y.sum()));
        }
    }
    out.line(format!(
        "y {} x",
        if forward.holds { "d-majorizes" } else { "does not d-majorize" }
    ));
    if args.both {
        let converse = decide(y, x, &d, &selected)?;
        out.line(format!(
            "x {} y",
            if converse.holds { "d-majorizes" } else { "does not d-majorize" }
        ));
        let cycle = forward.holds && converse.holds && x != y;
        if cycle {
            out.line("preorder cycle detected: each d-majorizes the other but x != y");
        }
        results["converse"] = verdicts_json(&converse);
        results["cycle"] = json!(cycle);
    }
    let inputs = json!({ "x": report::vector(x), "y": report::vector(y), "d": report::vector(d.as_vec()) });
    emit_json(&args.json, report::envelope(p.n, inputs, results))?;
    Ok(forward.holds)
}

fn labelled(y: &RVec, d: &WeightVec, cap: usize) -> Run<Vec<(RVec, Permutation)>> {
    Ok(dmaj_vertex_labels(y, d, cap).map_err(dimension_error)?.into_iter().collect())
}

fn print_hrep(out: &Out, sys: &HalfspaceSystem) {
    out.line(format!("T = {}", sys.trace()));
    for m in RowMask::proper(sys.n()) {
        out.line(format!("  b{:<12} {}", m.to_string(), sys.value(m)));
    }
}

fn print_vertices(out: &Out, vertices: &[(RVec, Permutation)]) {
    out.line(format!("{} vertices", vertices.len()));
    for (v, sigma) in vertices {
        out.line(format!("  {v}  σ = {sigma}"));
    }
}

fn sweep_range(args: &PolytopeArgs, p: &Problem) -> Run<Option<Sweep>> {
    if let Some(parts) = &args.sweep {
        let parse = |s: &str| parse_rational(s).map_err(|e| Failure::Input(format!("--sweep: {e}")));
        let steps: usize = parts[2]
            .parse()
            .ok()
            .filter(|&k| k > 0)
            .ok_or_else(|| Failure::Input(format!("--sweep: steps must be a positive integer, found `{}`", parts[2])))?;
        return Ok(Some(Sweep {
            start: parse(&parts[0])?,
            end: parse(&parts[1])?,
            steps,
        }));
    }
    if args.sweep_csv.is_some() {
        return match &p.sweep {
            Some(s) => Ok(Some(s.clone())),
            None => Err(Failure::Input("--sweep-csv needs --sweep or a `sweep` key".into())),
        };
    }
    Ok(None)
}

/// `(1-λ)d + λ d_end`
fn interpolate(d: &WeightVec, d_end: &WeightVec, lambda: &Rational) -> Run<WeightVec> {
    let rest = Rational::one() - lambda;
    let point = &d.as_vec().scale(&rest) + &d_end.as_vec().scale(lambda);
    WeightVec::new(point).map_err(|e| Failure::Input(format!("d(λ) at λ = {lambda}: {e}")))
}

fn polytope(args: PolytopeArgs) -> Run<bool> {
    let out = Out::new(&args.json);
    let cap = permutation_cap()?;
    let p = Problem::read(&args.file).map_err(input)?;
    let (y, d) = (p.y().map_err(input)?, p.d().map_err(input)?);
    let sweep = sweep_range(&args, &p)?;
    if args.svg.is_some() && p.n != 3 {
        return Err(Failure::Input(format!(
            "--svg draws the trace plane of n = 3 only, got n = {}; use --vertices for a table",
            p.n
        )));
    }
    let sys = build_dmaj_hrep(y, &d).map_err(input)?;
    let nothing_chosen = !(args.vertices
        || args.hrep
        || args.curve.is_some()
        || args.svg.is_some()
        || args.max_corner
        || sweep.is_some()
        || args.verify);
    let mut results = report::hrep(&sys);
    if args.hrep || nothing_chosen {
        print_hrep(&out, &sys);
    }
    let want_vertices = args.vertices || args.svg.is_some() || args.verify || args.json.is_some() || nothing_chosen;
    if want_vertices {
        let vertices = labelled(y, &d, cap)?;
        if args.verify {
            let generic = sys.enumerate_vertices().map_err(dimension_error)?;
            let fast: Vec<RVec> = vertices.iter().map(|(v, _)| v.clone()).collect();
            let agree = generic.vertices() == fast.as_slice();
            results["verified"] = json!(agree);
            if !agree {
                return Err(Failure::NotHolds(format!(
                    "{} corners against {} enumerated vertices",
                    fast.len(),
                    generic.len()
                )));
            }
            out.line(format!("verified: generic enumeration finds the same {} vertices", fast.len()));
        }
        if args.vertices || nothing_chosen {
            print_vertices(&out, &vertices);
        }
        if let Some(path) = &args.svg {
            write_file(path, &svg::render(&vertices, y, sys.trace()))?;
        }
        results["vertices"] = report::labelled_vertices(&vertices);
    }
    if let Some(path) = &args.curve {
        let curve = ThermoCurve::build(y, &d).map_err(input)?;
        write_file(path, &curve.to_csv(args.refine))?;
    }
    if let Some(s) = &sweep {
        let d_end = p.d_end().map_err(input)?;
        let mut csv = String::from("lambda,sigma");
        for i in 1..=p.n {
            csv.push_str(&format!(",x{i}"));
        }
        csv.push('\n');
        let mut members = Vec::new();
        for lambda in s.values() {
            let dl = interpolate(&d, &d_end, &lambda)?;
            let vertices = labelled(y, &dl, cap)?;
            out.line(format!("λ = {lambda}: d = {}", dl.as_vec()));
            for (v, sigma) in &vertices {
                out.line(format!("  {v}  σ = {sigma}"));
                let images: Vec<String> = sigma.images().iter().map(|i| (i + 1).to_string()).collect();
                csv.push_str(&format!("{},{}", fmt_pq(&lambda), images.join(" ")));
                for value in v.iter() {
                    csv.push_str(&format!(",{}", fmt_pq(value)));
                }
                csv.push('\n');
            }
            let hrep = report::hrep(&build_dmaj_hrep(y, &dl).map_err(input)?);
            members.push(json!({
                "lambda": report::q(&lambda),
                "d": report::vector(dl.as_vec()),
                "b": hrep["b"],
                "vertices": report::labelled_vertices(&vertices),
            }));
        }
        if let Some(path) = &args.sweep_csv {
            write_file(path, &csv)?;
        }
        results["sweep"] = Value::Array(members);
    }
    let mut failure = None;
    if args.max_corner {
        match classical_max_corner(y, &d) {
            Ok(z) => {
                out.line(format!("classical maximum corner: {z}"));
                results["max_corner"] = report::vector(&z);
            }
            Err(e @ Error::NegativeEntries) => {
                results["max_corner"] = Value::Null;
                failure = Some(e.to_string());
            }
            Err(e) => return Err(input(e)),
        }
    }
    let mut inputs = json!({ "y": report::vector(y), "d": report::vector(d.as_vec()) });
    if let Ok(d_end) = p.d_end() {
        inputs["d_end"] = report::vector(d_end.as_vec());
    }
    emit_json(&args.json, report::envelope(p.n, inputs, results))?;
    match failure {
        Some(message) => Err(Failure::NotHolds(message)),
        None => Ok(true),
    }
}

fn hausdorff_cmd(args: HausdorffArgs) -> Run<bool> {
    let out = Out::new(&args.json);
    let cap = permutation_cap()?;
    let a = Problem::read(&args.file_a).map_err(input)?;
    let b = Problem::read(&args.file_b).map_err(input)?;
    if a.n != b.n {
        return Err(Failure::Input(format!("dimension mismatch: n = {} against n = {}", a.n, b.n)));
    }
    let (ya, da) = (a.y().map_err(input)?, a.d().map_err(input)?);
    let (yb, db) = (b.y().map_err(input)?, b.d().map_err(input)?);
    let pa = dmaj_vertices_capped(ya, &da, cap).map_err(dimension_error)?;
    let pb = dmaj_vertices_capped(yb, &db, cap).map_err(dimension_error)?;
    let h = hausdorff(&pa, &pb).map_err(input)?;
    out.line(format!("Hausdorff distance {}", h.distance));
    let side = match h.side {
        Side::First => "A",
        Side::Second => "B",
    };
    out.line(format!("  attained at {} vertex {}", side, h.attaining_vertex));
    let mut ok = true;
    let mut results = json!({
        "distance": report::q(&h.distance),
        "attaining_vertex": report::vector(&h.attaining_vertex),
        "side": side,
        "bound_check": Value::Null,
        "nonexpansive": Value::Null,
    });
    if a.n <= MAX_LIPSCHITZ_N {
        let c = lipschitz_constant(a.n).map_err(input)?;
        let sa = pa.origin().expect("built from a system");
        let sb = pb.origin().expect("built from a system");
        let gap = sa.b_distance(sb).map_err(input)?;
        let bound = &c * &gap;
        let holds = h.distance <= bound;
        ok &= holds;
        out.line(format!(
            "  bound: {} <= C·|b - b'|_1 = {c}·{gap} = {bound}: {}",
            h.distance,
            if holds { "holds" } else { "VIOLATED" }
        ));
        results["bound_check"] = json!({
            "C": report::q(&c),
            "b_distance": report::q(&gap),
            "bound": report::q(&bound),
            "holds": holds,
        });
    }
    if da == db {
        let single = |v: &RVec| VPolytope::from_vertices(v.len(), vec![v.clone()], None).map_err(input);
        let check = nonexpansive_check(&da, &single(ya)?, &single(yb)?).map_err(input)?;
        let holds = check.holds();
        ok &= holds;
        out.line(format!(
            "  nonexpansive: {} <= |y_A - y_B|_1 = {}: {}",
            check.image_bound,
            check.source_distance,
            if holds { "holds" } else { "VIOLATED" }
        ));
        results["nonexpansive"] = json!({
            "image_bound": report::q(&check.image_bound),
            "source_distance": report::q(&check.source_distance),
            "holds": holds,
        });
    }
    let side_inputs = |y: &RVec, d: &WeightVec| json!({ "y": report::vector(y), "d": report::vector(d.as_vec()) });
    let inputs = json!({ "A": side_inputs(ya, &da), "B": side_inputs(yb, &db) });
    emit_json(&args.json, report::envelope(a.n, inputs, results))?;
    Ok(ok)
}

fn sd3(args: Sd3Args) -> Run<bool> {
    let out = Out::new(&args.json);
    let p = Problem::read(&args.file).map_err(input)?;
    let d = p.d().map_err(input)?;
    let case = Sd3Case::new(&d).map_err(input)?;
    let extremes = case.extremes().map_err(input)?;
    out.line(format!(
        "d = {}: regime {}, {} extreme points",
        d.as_vec(),
        case.regime(),
        extremes.len()
    ));
    let mut all = true;
    let mut matrices = Vec::new();
    for (k, a) in extremes.iter().enumerate() {
        let extreme = verify_extremality(a, &d).map_err(input)?;
        all &= extreme;
        out.line(format!("E{} ({})", k + 1, if extreme { "extreme" } else { "NOT extreme" }));
        for row in a.matrix().to_string().lines() {
            out.line(format!("  {row}"));
        }
        matrices.push(json!({ "matrix": report::matrix(a.matrix()), "extreme": extreme }));
    }
    let results = json!({
        "regime": case.regime().as_str(),
        "count": extremes.len(),
        "matrices": matrices,
    });
    emit_json(&args.json, report::envelope(3, json!({ "d": report::vector(d.as_vec()) }), results))?;
    Ok(all)
}
