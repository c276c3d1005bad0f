//! `rpg`: censuses, theorem verification, witnesses and exports for reduced
//! power graphs of `PGL_3(F_q)`.
//!
//! Exit codes: 0 success or confirmed, 2 discrepancy, 1 error.

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rpg_core::audit::random_invertible;
use rpg_core::cache::{inspect, load_or_build, CacheStatus};
use rpg_core::gf::{factorize, Field, FieldElem};
use rpg_core::graph::{Analysis, Bfs, ComponentLabeling, DiameterMode, PowerGraph, DOT_EXPORT_CAP};
use rpg_core::mat::{JordanType, Mat3};
use rpg_core::pgl::{GraphKind, GroupSpec};
use rpg_core::theorem::{verify, VerificationReport};
use rpg_core::witness::{
    build_lower_witness, centralizer_factorization, p0th_root_pivotize, pivot_path, verify_certificate, CertificateCheck,
    FactorizationTriple, PathCertificate, WitnessPair,
};
use rpg_core::{Error, Result};

const CORE_TIER: [u32; 5] = [2, 3, 4, 5, 7];
const EXTENDED_ONLY: [u32; 2] = [8, 9];
/// Largest `q` whose graph is built to cross-check witness certificates.
const GRAPH_CHECK_MAX_Q: u32 = 5;

#[derive(Parser, Debug)]
#[command(name = "rpg", version, about = "Reduced power graphs of PGL(3, q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Field order.
    #[arg(long, global = true)]
    q: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = GraphArg::Pgl)]
    graph: GraphArg,

    #[arg(long, global = true, value_enum, default_value_t = Tier::Core)]
    tier: Tier,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Memory budget in bytes; accepts K, M and G suffixes.
    #[arg(long, global = true, value_parser = parse_bytes, default_value = "4G")]
    mem_budget: u64,

    /// Directory for vertex and graph caches.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// json or text; dot or csv for export.
    #[arg(long, global = true)]
    format: Option<String>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Run BFS from every vertex instead of one per conjugacy class.
    #[arg(long, global = true)]
    full_bfs: bool,

    /// Component to export: `pivot` or a component id.
    #[arg(long, global = true)]
    component: Option<String>,

    #[arg(long, global = true, default_value_t = 1000)]
    trials: usize,

    #[arg(long, global = true, value_enum)]
    case: Option<WitnessCase>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Components, sizes, diameters and Jordan-type profiles.
    Census,
    /// Compare the census with the predicted one.
    Verify,
    /// Build and check constructive certificates.
    Witness,
    /// Write the graph or one component as DOT or CSV.
    Export,
    /// Element table of F_q.
    FieldTable,
    /// Describe the cache files in --cache-dir.
    CacheInfo,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphArg {
    Pgl,
    Gl,
}

impl GraphArg {
    fn kind(self) -> GraphKind {
        match self {
            GraphArg::Pgl => GraphKind::Pgl,
            GraphArg::Gl => GraphKind::Gl,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Tier {
    Core,
    Extended,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WitnessCase {
    LowerBound,
    PivotPath,
    Factorize,
    Roots,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

fn parse_bytes(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    let (digits, mult) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 1u64 << 10),
        Some('M') => (&s[..s.len() - 1], 1 << 20),
        Some('G') => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    digits
        .parse::<u64>()
        .ok()
        .and_then(|n| n.checked_mul(mult))
        .ok_or_else(|| format!("invalid byte count {s:?}"))
}

/// Command output plus the exit code it implies.
struct Output {
    body: String,
    code: u8,
}

impl Output {
    fn ok(body: String) -> Output {
        Output { body, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out.body) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(cli: &Cli, body: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(Error::from),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::Internal(e.to_string()))?;
    }
    match cli.command {
        Command::Census => cmd_census(cli),
        Command::Verify => cmd_verify(cli),
        Command::Witness => cmd_witness(cli),
        Command::Export => cmd_export(cli),
        Command::FieldTable => cmd_field_table(cli),
        Command::CacheInfo => cmd_cache_info(cli),
    }
}

fn report_format(cli: &Cli, default: Format) -> Result<Format> {
    match cli.format.as_deref() {
        None => Ok(default),
        Some("json") => Ok(Format::Json),
        Some("text") => Ok(Format::Text),
        Some(other) => Err(Error::Precondition(format!("--format must be json or text, not {other:?}"))),
    }
}

fn require_q(cli: &Cli) -> Result<u32> {
    cli.q.ok_or_else(|| Error::Precondition("--q is required".into()))
}

/// Checks the tier and memory budget for `q` and returns the group spec.
fn admit(cli: &Cli, kind: GraphKind) -> Result<GroupSpec> {
    let q = require_q(cli)?;
    Field::with_order(q)?;
    let admitted = CORE_TIER.contains(&q) || (cli.tier == Tier::Extended && EXTENDED_ONLY.contains(&q));
    if !admitted {
        let tier = match cli.tier {
            Tier::Core => "core",
            Tier::Extended => "extended",
        };
        return Err(Error::UnsupportedTier { q, tier: tier.into() });
    }
    let spec = GroupSpec::new(q, kind)?;
    let estimate = spec.memory_estimate();
    if estimate > cli.mem_budget {
        return Err(Error::MemoryBudget {
            estimate,
            budget: cli.mem_budget,
        });
    }
    Ok(spec)
}

fn load_graph(cli: &Cli, kind: GraphKind) -> Result<(PowerGraph, CacheStatus)> {
    let spec = admit(cli, kind)?;
    load_or_build(&spec, cli.cache_dir.as_deref())
}

fn analyse(cli: &Cli, kind: GraphKind) -> Result<Analysis> {
    let (graph, _) = load_graph(cli, kind)?;
    let mode = if cli.full_bfs { DiameterMode::Full } else { DiameterMode::OrbitReduced };
    Ok(Analysis::run(graph, mode))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn type_list(types: &[JordanType]) -> String {
    types.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

fn cmd_census(cli: &Cli) -> Result<Output> {
    let an = analyse(cli, cli.graph.kind())?;
    let c = &an.census;
    if report_format(cli, Format::Text)? == Format::Json {
        return Ok(Output::ok(to_json(c)?));
    }
    let mut s = String::new();
    writeln!(
        s,
        "q = {}, {} graph: {} vertices, {} edges, {} components",
        c.q, c.graph, c.vertices, c.edges, c.components
    )
    .unwrap();
    writeln!(s, "{:>8} {:>9} {:>9}  types", "count", "size", "diameter").unwrap();
    for r in &c.records {
        writeln!(s, "{:>8} {:>9} {:>9}  {}", r.count, r.size, r.diameter, type_list(&r.types)).unwrap();
    }
    match &c.pivot_component {
        Some(p) => writeln!(s, "pivot component: id {}, {} vertices, diameter {}", p.id, p.size, p.diameter).unwrap(),
        None => writeln!(s, "pivot component: none").unwrap(),
    }
    let totals: Vec<String> = c.type_totals.iter().map(|(t, n)| format!("{t} {n}")).collect();
    writeln!(s, "vertices by type: {}", totals.join(", ")).unwrap();
    Ok(Output::ok(s))
}

fn verification_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    writeln!(s, "q = {}: {}", r.q, r.case).unwrap();
    writeln!(s, "verdict: {:?}", r.verdict).unwrap();
    writeln!(s, "components: predicted {}, observed {}", r.predicted_components, r.observed_components).unwrap();
    for e in &r.predicted {
        let size = e.record.size.map_or("-".to_string(), |n| n.to_string());
        let observed: Vec<String> = e.observed.iter().map(|(d, n)| format!("{n} of diameter {d}")).collect();
        writeln!(
            s,
            "  {:?}: predicted {} of diameter {} (size {size}); observed {}; {}",
            e.record.family,
            e.record.count,
            e.record.diameter,
            if observed.is_empty() { "none".to_string() } else { observed.join(", ") },
            if e.matches { "match" } else { "MISMATCH" }
        )
        .unwrap();
    }
    for n in &r.notes {
        writeln!(s, "  note: {n}").unwrap();
    }
    s
}

fn cmd_verify(cli: &Cli) -> Result<Output> {
    if cli.graph.kind() != GraphKind::Pgl {
        return Err(Error::Precondition("verify applies to the PGL graph".into()));
    }
    let q = require_q(cli)?;
    // Fail on q itself before building anything.
    rpg_core::theorem::classify_case(q as u64)?;
    let an = analyse(cli, GraphKind::Pgl)?;
    let report = verify(q as u64, &an.census)?;
    let body = match report_format(cli, Format::Json)? {
        Format::Json => to_json(&report)?,
        Format::Text => verification_text(&report),
    };
    Ok(Output {
        body,
        code: report.verdict.exit_code() as u8,
    })
}

#[derive(Serialize)]
struct LowerBoundReport {
    q: u32,
    witness: WitnessPair,
    distance: Option<u32>,
    main_diameter: Option<u32>,
    meets_lower_bound: bool,
    equals_main_diameter: bool,
}

#[derive(Serialize)]
struct PivotPathReport {
    q: u32,
    p0: u64,
    p1: u64,
    certificate: PathCertificate,
    algebra: CertificateCheck,
    graph: Option<CertificateCheck>,
}

#[derive(Serialize)]
struct FactorizationSample {
    #[serde(serialize_with = "hex")]
    x: Mat3,
    b: u8,
    triple: FactorizationTriple,
}

#[derive(Serialize)]
struct FactorizationReport {
    q: u32,
    seed: u64,
    trials: usize,
    passed: usize,
    cases: BTreeMap<String, u64>,
    samples: Vec<FactorizationSample>,
}

#[derive(Serialize)]
struct RootsReport {
    q: u32,
    p0: u64,
    seed: u64,
    trials: usize,
    passed: usize,
    graph_checked: bool,
    branches: BTreeMap<String, u64>,
    samples: Vec<PathCertificate>,
}

fn hex<S: serde::Serializer>(m: &Mat3, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{m}"))
}

const SAMPLES_SHOWN: usize = 3;

fn cmd_witness(cli: &Cli) -> Result<Output> {
    let case = cli
        .case
        .ok_or_else(|| Error::Precondition("--case is required (lower-bound, pivot-path, factorize, roots)".into()))?;
    let format = report_format(cli, Format::Json)?;
    let (json, text, ok) = match case {
        WitnessCase::LowerBound => witness_lower_bound(cli)?,
        WitnessCase::PivotPath => witness_pivot_path(cli)?,
        WitnessCase::Factorize => witness_factorize(cli)?,
        WitnessCase::Roots => witness_roots(cli)?,
    };
    Ok(Output {
        body: if format == Format::Json { json } else { text },
        code: if ok { 0 } else { 2 },
    })
}

type WitnessResult = Result<(String, String, bool)>;

fn witness_lower_bound(cli: &Cli) -> WitnessResult {
    let spec = admit(cli, GraphKind::Pgl)?;
    let w = build_lower_witness(spec.q())?;
    let an = analyse(cli, GraphKind::Pgl)?;
    let g = &an.graph;
    let id = |m: &Mat3| g.id_of(m).ok_or_else(|| Error::Internal(format!("{m} is not a vertex")));
    let distance = Bfs::new(g.vertex_count()).distance(g, id(&w.a)?, id(&w.b)?);
    let main_diameter = an.census.pivot_component.as_ref().map(|p| p.diameter);
    let r = LowerBoundReport {
        q: spec.q(),
        witness: w,
        distance,
        main_diameter,
        meets_lower_bound: distance.is_some_and(|d| d >= w.lower_bound),
        equals_main_diameter: distance.is_some() && distance == main_diameter,
    };
    let text = format!(
        "q = {}: A = {}, B = {} ({:?}, p0 = {})\ndistance {}, claimed lower bound {}, main diameter {}\n",
        r.q,
        w.a,
        w.b,
        w.construction,
        w.p0,
        r.distance.map_or("unreachable".into(), |d| d.to_string()),
        w.lower_bound,
        r.main_diameter.map_or("-".into(), |d| d.to_string()),
    );
    let ok = r.meets_lower_bound;
    Ok((to_json(&r)?, text, ok))
}

fn prime_factors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// `g diag(1, x, x) g^-1` for `x` of order `p0` and a random `g`.
fn random_pivot(p0: u64, f: &Field, rng: &mut ChaCha8Rng) -> Result<Mat3> {
    let x = f.element_of_order(p0)?;
    Mat3::diag(FieldElem::ONE, x, x).conjugate_by(&random_invertible(f, rng), f)
}

fn witness_pivot_path(cli: &Cli) -> WitnessResult {
    let spec = admit(cli, GraphKind::Pgl)?;
    let f = spec.field.clone();
    let primes = prime_factors(f.q() as u64 - 1);
    if primes.len() < 2 {
        return Err(Error::Precondition(format!("q - 1 = {} has fewer than two prime factors", f.q() - 1)));
    }
    let (p0, p1) = (primes[0], primes[1]);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let a = random_pivot(p0, &f, &mut rng)?;
    let b = random_pivot(p0, &f, &mut rng)?;
    let cert = pivot_path(&a, &b, p0, p1, &f)?;
    let algebra = cert.check_algebra(&f);
    let graph = if spec.q() <= GRAPH_CHECK_MAX_Q || cli.cache_dir.is_some() {
        let (g, _) = load_graph(cli, GraphKind::Pgl)?;
        Some(verify_certificate(&g, &cert))
    } else {
        None
    };
    let ok = algebra.valid && graph.as_ref().map_or(true, |c| c.valid);
    let text = format!(
        "q = {}: path of length {} from {a} to {b} via {}; algebra {}, graph {}\n",
        spec.q(),
        cert.len() - 1,
        cert.branch.as_deref().unwrap_or("-"),
        if algebra.valid { "ok" } else { "FAILED" },
        graph.as_ref().map_or("not checked", |c| if c.valid { "ok" } else { "FAILED" }),
    );
    let r = PivotPathReport {
        q: spec.q(),
        p0,
        p1,
        certificate: cert,
        algebra,
        graph,
    };
    Ok((to_json(&r)?, text, ok))
}

fn witness_factorize(cli: &Cli) -> WitnessResult {
    let q = require_q(cli)?;
    let f = Field::with_order(q)?;
    if q < 3 {
        return Err(Error::Precondition("factorization needs some b outside {0, 1}, so q >= 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut passed = 0;
    let mut cases = BTreeMap::new();
    let mut samples = Vec::new();
    for _ in 0..cli.trials {
        let x = random_invertible(&f, &mut rng);
        let b = FieldElem::from_code(rng.gen_range(2..q) as u8);
        let t = centralizer_factorization(&x, b, &f)?;
        if t.holds(&x, b, &f) {
            passed += 1;
        }
        *cases.entry(format!("{:?}", t.case)).or_insert(0u64) += 1;
        if samples.len() < SAMPLES_SHOWN {
            samples.push(FactorizationSample { x, b: b.code(), triple: t });
        }
    }
    let r = FactorizationReport {
        q,
        seed: cli.seed,
        trials: cli.trials,
        passed,
        cases,
        samples,
    };
    let text = format!("q = {q}: {passed} of {} factorizations hold; cases {:?}\n", r.trials, r.cases);
    Ok((to_json(&r)?, text, passed == cli.trials))
}

fn witness_roots(cli: &Cli) -> WitnessResult {
    let spec = admit(cli, GraphKind::Pgl)?;
    let f = spec.field.clone();
    let q = f.q();
    let p0 = *prime_factors(q as u64 - 1)
        .last()
        .ok_or_else(|| Error::Precondition("q - 1 has no prime factor".into()))?;
    let graph = if q <= GRAPH_CHECK_MAX_Q || cli.cache_dir.is_some() {
        Some(load_graph(cli, GraphKind::Pgl)?.0)
    } else {
        None
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut passed = 0;
    let mut branches = BTreeMap::new();
    let mut samples = Vec::new();
    let mut done = 0;
    while done < cli.trials {
        let a = random_invertible(&f, &mut rng);
        if a.is_scalar() || !a.jordan_type(&f)?.is_decomposable() || a.projective_order(&f) % p0 == 0 {
            continue;
        }
        done += 1;
        let cert = p0th_root_pivotize(&a, p0, &f)?;
        let valid = cert.check_algebra(&f).valid && graph.as_ref().map_or(true, |g| verify_certificate(g, &cert).valid);
        if valid {
            passed += 1;
        }
        *branches.entry(cert.branch.clone().unwrap_or_default()).or_insert(0u64) += 1;
        if samples.len() < SAMPLES_SHOWN {
            samples.push(cert);
        }
    }
    let r = RootsReport {
        q,
        p0,
        seed: cli.seed,
        trials: cli.trials,
        passed,
        graph_checked: graph.is_some(),
        branches,
        samples,
    };
    let text = format!("q = {q}, p0 = {p0}: {passed} of {} root certificates hold; branches {:?}\n", r.trials, r.branches);
    Ok((to_json(&r)?, text, passed == cli.trials))
}

fn cmd_export(cli: &Cli) -> Result<Output> {
    let format = cli.format.as_deref().unwrap_or("dot");
    if format != "dot" && format != "csv" {
        return Err(Error::Precondition(format!("export --format must be dot or csv, not {format:?}")));
    }
    let kind = cli.graph.kind();
    let spec = admit(cli, kind)?;
    if cli.component.is_none() && format == "dot" && spec.expected_vertices() > DOT_EXPORT_CAP as u64 {
        return Err(Error::ExportCap {
            vertices: spec.expected_vertices() as usize,
            cap: DOT_EXPORT_CAP,
        });
    }
    let (graph, _) = load_or_build(&spec, cli.cache_dir.as_deref())?;
    let subset: Vec<u32> = match cli.component.as_deref() {
        None => (0..graph.vertex_count() as u32).collect(),
        Some(c) => {
            let lab = ComponentLabeling::compute(&graph);
            let comp = if c == "pivot" {
                lab.pivot_component
                    .ok_or_else(|| Error::Precondition("graph has no pivot component".into()))?
            } else {
                let id: u32 = c
                    .parse()
                    .map_err(|_| Error::Precondition(format!("--component must be `pivot` or an id, not {c:?}")))?;
                if id as usize >= lab.count() {
                    return Err(Error::Precondition(format!("component {id} out of range (0..{})", lab.count())));
                }
                id
            };
            lab.members(comp).to_vec()
        }
    };
    let body = if format == "dot" { graph.to_dot(&subset)? } else { graph.to_csv(&subset) };
    Ok(Output::ok(body))
}

#[derive(Serialize)]
struct ElementRow {
    code: u8,
    polynomial: String,
    order: Option<u64>,
    log: Option<u64>,
    inverse: Option<u8>,
}

#[derive(Serialize)]
struct FieldTable {
    q: u32,
    p: u32,
    k: u32,
    modulus: String,
    generator: u8,
    elements: Vec<ElementRow>,
    addition: Vec<Vec<u8>>,
    multiplication: Vec<Vec<u8>>,
}

/// Base-`p` digits of `code` as a polynomial in `t`, highest degree first.
fn polynomial(digits: &[u8]) -> String {
    let terms: Vec<String> = digits
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &d)| d != 0)
        .map(|(i, &d)| match (i, d) {
            (0, d) => d.to_string(),
            (1, 1) => "t".to_string(),
            (1, d) => format!("{d}t"),
            (i, 1) => format!("t^{i}"),
            (i, d) => format!("{d}t^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn digits_of(code: u32, p: u32, k: u32) -> Vec<u8> {
    let mut c = code;
    (0..k)
        .map(|_| {
            let d = (c % p) as u8;
            c /= p;
            d
        })
        .collect()
}

fn cmd_field_table(cli: &Cli) -> Result<Output> {
    let q = require_q(cli)?;
    let f = Field::with_order(q)?;
    let g = f.generator();
    let elements: Vec<ElementRow> = f
        .elements()
        .map(|e| ElementRow {
            code: e.code(),
            polynomial: polynomial(&digits_of(e.code() as u32, f.p(), f.k())),
            order: f.mult_order(e).ok(),
            log: f.log(g, e),
            inverse: f.inv(e).ok().map(|i| i.code()),
        })
        .collect();
    let (addition, multiplication) = f.tables();
    let t = FieldTable {
        q,
        p: f.p(),
        k: f.k(),
        modulus: polynomial(&f.modulus()),
        generator: g.code(),
        elements,
        addition,
        multiplication,
    };
    if report_format(cli, Format::Text)? == Format::Json {
        return Ok(Output::ok(to_json(&t)?));
    }
    let mut s = String::new();
    writeln!(s, "F_{q}: p = {}, k = {}, modulus {}, generator {}", t.p, t.k, t.modulus, t.generator).unwrap();
    writeln!(s, "{:>4}  {:<14} {:>5} {:>4} {:>7}", "code", "element", "order", "log", "inverse").unwrap();
    let dash = |x: Option<String>| x.unwrap_or_else(|| "-".into());
    for e in &t.elements {
        writeln!(
            s,
            "{:>4}  {:<14} {:>5} {:>4} {:>7}",
            e.code,
            e.polynomial,
            dash(e.order.map(|o| o.to_string())),
            dash(e.log.map(|o| o.to_string())),
            dash(e.inverse.map(|o| o.to_string())),
        )
        .unwrap();
    }
    Ok(Output::ok(s))
}

fn cmd_cache_info(cli: &Cli) -> Result<Output> {
    let dir = cli
        .cache_dir
        .as_deref()
        .ok_or_else(|| Error::Precondition("--cache-dir is required".into()))?;
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "vertices" || x == "graph"))
        .collect();
    files.sort();
    let infos = files.iter().map(|p| inspect(p)).collect::<Result<Vec<_>>>()?;
    if report_format(cli, Format::Text)? == Format::Json {
        return Ok(Output::ok(to_json(&infos)?));
    }
    let mut s = String::new();
    writeln!(s, "{}", display_dir(dir)).unwrap();
    if infos.is_empty() {
        writeln!(s, "  no cache files").unwrap();
    }
    for i in &infos {
        writeln!(
            s,
            "  {}: {} for q = {} {}, {} vertices{}, {} bytes{}",
            i.file,
            i.content,
            i.q,
            i.kind,
            i.vertices,
            i.edges.map_or(String::new(), |e| format!(", {e} edges")),
            i.bytes,
            if i.length_ok { "" } else { " (length does not match header)" }
        )
        .unwrap();
    }
    Ok(Output::ok(s))
}

fn display_dir(dir: &Path) -> String {
    format!("cache directory {}", dir.display())
}
