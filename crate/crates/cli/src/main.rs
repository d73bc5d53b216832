//! Command-line surface for the solvers: `solve`, `validate`, `gen`, `bench`.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 verification failure.
//! Every command emits a [`RunReport`] on stdout whose serialized form is
//! byte-identical across replays with the same seed and inputs.

use clap::{Args, Parser, Subcommand};
use mwis_core::dispersers::{is_good, DisperserEntry, RatioPow};
use mwis_core::esd::{atoms, validate_esd, Esd};
use mwis_core::graph::{
    load_graph, GeneratorSpec, Graph, GraphClass, Ratio01, VertexSet, WeightFn,
};
use mwis_core::report::RunReport;
use mwis_core::solvers::{
    mwis_bruteforce, mwis_hfree_approx, mwis_hfree_exact, qptas, subexp_exact, SolveResult,
    BRUTE_CAP,
};
use mwis_core::Ratio;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mwis", about = "Maximum weight independent set toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance exactly or approximately.
    Solve(SolveArgs),
    /// Validate a decomposition against a graph.
    Validate(ValidateArgs),
    /// Generate a deterministic instance.
    Gen(GenArgs),
    /// Run a solver matrix over a directory of instances.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (`p n m`, `e u v`, optional `n v w`, `c` comments).
    #[arg(long)]
    graph: PathBuf,
    /// Graph class: pt:T | hole:T | claw:T | lobster:T | hfree:FILE.
    #[arg(long)]
    class: String,
    /// exact | approx.
    #[arg(long)]
    mode: String,
    /// Accuracy parameter for approx mode, e.g. 1/4.
    #[arg(long)]
    eps: Option<String>,
    /// Cross-check against brute force when the instance is small enough.
    #[arg(long)]
    oracle: bool,
    /// Validate an externally supplied decomposition (JSON) for the input.
    #[arg(long)]
    external_esd: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Decomposition file (JSON).
    #[arg(long)]
    esd: PathBuf,
    /// Comma-separated vertices; checks the shattering predicate for them.
    #[arg(long)]
    shatter: Option<String>,
    /// List the atoms in the report.
    #[arg(long)]
    atoms: bool,
    /// "GAMMA,DELTA": check entry goodness against --weights.
    #[arg(long)]
    goodness: Option<String>,
    /// Whitespace-separated weights, one per vertex (defaults to the
    /// weights in the graph file).
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    /// path:N | cycle:N | split:N | random:N:P | linegraph:N:P |
    /// filtered:CLASS:N:P, with P a rational like 1/3.
    spec: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; without it the instance text goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of instance files (*.gr), processed in name order.
    #[arg(long)]
    dir: PathBuf,
    #[arg(long)]
    class: String,
    /// Also run the approximation with this accuracy.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Usage/parse failures exit 1; verification failures exit 2 after the
/// report is printed.
enum AppError {
    Usage(String),
}

type AppResult<T> = Result<T, AppError>;

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Validate(a) => cmd_validate(&a),
        Command::Gen(a) => cmd_gen(&a),
        Command::Bench(a) => cmd_bench(&a),
    };
    match outcome {
        Ok(Some(report)) => {
            print!("{}", report.to_json());
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read_file(path: &Path) -> AppResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

/// An empty file denotes the empty instance.
fn load_instance(text: &str) -> AppResult<(Graph, WeightFn)> {
    if text.trim().is_empty() {
        return Ok((Graph::new(0), WeightFn::new(vec![])));
    }
    load_graph(text).map_err(|e| usage(format!("bad graph file: {e}")))
}

fn parse_ratio(s: &str, what: &str) -> AppResult<Ratio> {
    s.parse::<Ratio>()
        .map_err(|e| usage(format!("bad {what} '{s}': {e}")))
}

enum ClassSpec {
    Builtin(GraphClass),
    Pattern { file: PathBuf, text: String, h: Graph },
}

impl ClassSpec {
    fn describe(&self) -> String {
        match self {
            ClassSpec::Builtin(c) => format!("{c:?}"),
            ClassSpec::Pattern { file, .. } => format!("hfree:{}", file.display()),
        }
    }
}

fn parse_class(spec: &str) -> AppResult<ClassSpec> {
    let (tag, rest) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("bad class '{spec}', expected TAG:VALUE")))?;
    let number = || -> AppResult<usize> {
        rest.parse()
            .map_err(|e| usage(format!("bad class parameter '{rest}': {e}")))
    };
    Ok(match tag {
        "pt" => ClassSpec::Builtin(GraphClass::Pt(number()?)),
        "hole" => ClassSpec::Builtin(GraphClass::CgeT(number()?)),
        "claw" => ClassSpec::Builtin(GraphClass::YgeT(number()?)),
        "lobster" => ClassSpec::Builtin(GraphClass::LgeT(number()?)),
        "hfree" => {
            let file = PathBuf::from(rest);
            let text = read_file(&file)?;
            let (h, _) = load_instance(&text)?;
            ClassSpec::Pattern { file, text, h }
        }
        other => return Err(usage(format!("unknown class tag '{other}'"))),
    })
}

fn run_solver(
    g: &Graph,
    w: &WeightFn,
    class: &ClassSpec,
    mode: &str,
    eps: Option<Ratio>,
) -> AppResult<SolveResult> {
    let solved = match (mode, class) {
        ("exact", ClassSpec::Builtin(c)) => subexp_exact(g, w, c),
        ("exact", ClassSpec::Pattern { h, .. }) => mwis_hfree_exact(g, w, h),
        ("approx", _) => {
            let eps = eps.ok_or_else(|| usage("--mode approx requires --eps"))?;
            match class {
                ClassSpec::Builtin(c) => qptas(g, w, eps, c),
                ClassSpec::Pattern { h, .. } => mwis_hfree_approx(g, w, eps, h),
            }
        }
        (other, _) => return Err(usage(format!("unknown mode '{other}'"))),
    };
    solved.map_err(|e| usage(format!("solver failed: {e}")))
}

fn oracle_check(
    report: &mut RunReport,
    g: &Graph,
    w: &WeightFn,
    r: &SolveResult,
    mode: &str,
    eps: Option<Ratio>,
) {
    if g.n() > BRUTE_CAP {
        report.record(
            "oracle_match",
            true,
            format!("skipped: n = {} exceeds the brute-force cap", g.n()),
        );
        return;
    }
    let opt = mwis_bruteforce(g, w).expect("within cap").weight;
    let (ok, detail) = if mode == "exact" {
        (
            r.weight == opt,
            format!("solver {} vs optimum {opt}", r.weight),
        )
    } else {
        let eps = eps.expect("approx mode has eps");
        let lower_ok = r.weight * eps.den() as u64 >= opt * (eps.den() - eps.num()) as u64;
        (
            lower_ok && r.weight <= opt,
            format!("solver {} vs optimum {opt} at eps {eps}", r.weight),
        )
    };
    report.record("oracle_match", ok, detail);
}

fn cmd_solve(a: &SolveArgs) -> AppResult<Option<RunReport>> {
    let class = parse_class(&a.class)?;
    let eps = a.eps.as_deref().map(|s| parse_ratio(s, "eps")).transpose()?;
    let mut report = RunReport::new(
        format!(
            "solve --graph {} --class {} --mode {}{}{}",
            a.graph.display(),
            a.class,
            a.mode,
            a.eps
                .as_deref()
                .map(|e| format!(" --eps {e}"))
                .unwrap_or_default(),
            if a.oracle { " --oracle" } else { "" },
        ),
        a.seed,
    );
    report.set_config("class", class.describe());
    report.set_config("mode", &a.mode);
    if let Some(e) = eps {
        report.set_config("eps", e);
    }
    let text = read_file(&a.graph)?;
    report.absorb_input(text.as_bytes());
    if let ClassSpec::Pattern { text, .. } = &class {
        report.absorb_input(text.as_bytes());
    }
    let (g, w) = load_instance(&text)?;

    if let Some(esd_path) = &a.external_esd {
        let esd_text = read_file(esd_path)?;
        report.absorb_input(esd_text.as_bytes());
        let d = Esd::from_json(&esd_text)
            .map_err(|e| usage(format!("bad decomposition file: {e}")))?;
        let validation = validate_esd(&g, &d);
        report.record(
            "external_esd_valid",
            validation.ok(),
            validation
                .violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        );
    }

    let r = run_solver(&g, &w, &class, &a.mode, eps)?;
    report.set_result(&r);
    if a.oracle {
        oracle_check(&mut report, &g, &w, &r, &a.mode, eps);
    }
    if let Some(path) = &a.report {
        std::fs::write(path, report.to_json())
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Some(report))
}

fn parse_vertex_list(s: &str) -> AppResult<VertexSet> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|e| usage(format!("bad vertex '{p}': {e}")))
        })
        .collect()
}

fn cmd_validate(a: &ValidateArgs) -> AppResult<Option<RunReport>> {
    let mut report = RunReport::new(
        format!(
            "validate --graph {} --esd {}",
            a.graph.display(),
            a.esd.display()
        ),
        a.seed,
    );
    let gtext = read_file(&a.graph)?;
    report.absorb_input(gtext.as_bytes());
    let (g, wfile) = load_instance(&gtext)?;
    let dtext = read_file(&a.esd)?;
    report.absorb_input(dtext.as_bytes());
    let d = Esd::from_json(&dtext).map_err(|e| usage(format!("bad decomposition file: {e}")))?;

    let validation = validate_esd(&g, &d);
    report.record(
        "esd_valid",
        validation.ok(),
        validation
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; "),
    );

    if a.atoms {
        let rows: Vec<String> = atoms(&g, &d)
            .iter()
            .map(|at| {
                format!(
                    "{:?}: {:?}{}",
                    at.kind,
                    at.vertices,
                    if at.trivial { " (trivial)" } else { "" }
                )
            })
            .collect();
        report.tables.insert("atoms".into(), rows);
    }

    if let Some(spec) = &a.shatter {
        let z = parse_vertex_list(spec)?;
        match mwis_core::esd::shatters(&g, &d, &z) {
            Ok(holds) => report.record("shatters", holds, format!("set {z:?}")),
            Err(e) => report.record("shatters", false, format!("not checkable: {e}")),
        }
    }

    if let Some(spec) = &a.goodness {
        let (gs, ds) = spec
            .split_once(',')
            .ok_or_else(|| usage("--goodness expects GAMMA,DELTA"))?;
        let gamma = parse_ratio(gs, "gamma")?;
        let delta = parse_ratio(ds, "delta")?;
        let w = match &a.weights {
            Some(path) => {
                let wt = read_file(path)?;
                report.absorb_input(wt.as_bytes());
                let vals: Vec<u64> = wt
                    .split_whitespace()
                    .map(|t| {
                        t.parse()
                            .map_err(|e| usage(format!("bad weight '{t}': {e}")))
                    })
                    .collect::<AppResult<_>>()?;
                if vals.len() != g.n() {
                    return Err(usage(format!(
                        "weights file has {} entries for {} vertices",
                        vals.len(),
                        g.n()
                    )));
                }
                WeightFn::new(vals)
            }
            None => wfile,
        };
        // The entry whose removed part is everything outside the
        // decomposition's universe.
        let universe = d.universe();
        let x: VertexSet = g.vertices().filter(|v| !universe.contains(v)).collect();
        let entry = DisperserEntry { x, esd: d.clone() };
        let goodness = is_good(&g, &w, &entry, gamma, RatioPow::linear(delta));
        report.record(
            "entry_good",
            goodness.good(),
            format!(
                "shrinking={} safe={} (gamma {gamma}, delta {delta})",
                goodness.shrinking, goodness.safe
            ),
        );
    }

    Ok(Some(report))
}

fn parse_gen_spec(spec: &str) -> AppResult<GeneratorSpec> {
    let parts: Vec<&str> = spec.split(':').collect();
    let n_at = |i: usize| -> AppResult<usize> {
        parts
            .get(i)
            .ok_or_else(|| usage(format!("spec '{spec}' is missing a size")))?
            .parse()
            .map_err(|e| usage(format!("bad size in '{spec}': {e}")))
    };
    let p_at = |i: usize| -> AppResult<Ratio01> {
        let raw = parts
            .get(i)
            .ok_or_else(|| usage(format!("spec '{spec}' is missing a probability")))?;
        let (num, den) = raw
            .split_once('/')
            .ok_or_else(|| usage(format!("bad probability '{raw}', expected NUM/DEN")))?;
        let num: u32 = num
            .parse()
            .map_err(|e| usage(format!("bad probability '{raw}': {e}")))?;
        let den: u32 = den
            .parse()
            .map_err(|e| usage(format!("bad probability '{raw}': {e}")))?;
        if den == 0 || num > den {
            return Err(usage(format!("probability '{raw}' is not in [0,1]")));
        }
        Ok(Ratio01::new(num, den))
    };
    Ok(match parts[0] {
        "path" => GeneratorSpec::Path(n_at(1)?),
        "cycle" => GeneratorSpec::Cycle(n_at(1)?),
        "split" => GeneratorSpec::Split(n_at(1)?),
        "random" => GeneratorSpec::Random {
            n: n_at(1)?,
            p: p_at(2)?,
        },
        "linegraph" => GeneratorSpec::LineGraphOfRandom {
            n: n_at(1)?,
            p: p_at(2)?,
        },
        "filtered" => {
            let class = match parse_class(&format!(
                "{}:{}",
                parts.get(1).copied().unwrap_or_default(),
                parts.get(2).copied().unwrap_or_default()
            ))? {
                ClassSpec::Builtin(c) => c,
                ClassSpec::Pattern { h, .. } => GraphClass::ExplicitH(h),
            };
            GeneratorSpec::RandomFiltered {
                n: n_at(3)?,
                p: p_at(4)?,
                class,
            }
        }
        other => return Err(usage(format!("unknown generator '{other}'"))),
    })
}

fn cmd_gen(a: &GenArgs) -> AppResult<Option<RunReport>> {
    let spec = parse_gen_spec(&a.spec)?;
    let (g, w) =
        mwis_core::graph::generate(&spec, a.seed).map_err(|e| usage(format!("generation failed: {e}")))?;
    let text = g.to_text(Some(&w));
    match &a.out {
        None => {
            print!("{text}");
            Ok(None)
        }
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            let mut report =
                RunReport::new(format!("gen {} --seed {}", a.spec, a.seed), a.seed);
            report.set_config("out", path.display().to_string());
            report.set_config("n", g.n());
            report.set_config("m", g.m());
            report.absorb_input(text.as_bytes());
            report.record("written", true, path.display().to_string());
            Ok(Some(report))
        }
    }
}

fn cmd_bench(a: &BenchArgs) -> AppResult<Option<RunReport>> {
    let class = parse_class(&a.class)?;
    let eps = a.eps.as_deref().map(|s| parse_ratio(s, "eps")).transpose()?;
    let mut report = RunReport::new(
        format!("bench --dir {} --class {}", a.dir.display(), a.class),
        a.seed,
    );
    report.set_config("class", class.describe());
    if let Some(e) = eps {
        report.set_config("eps", e);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(&a.dir)
        .map_err(|e| usage(format!("cannot read {}: {e}", a.dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gr"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(usage(format!(
            "no .gr instances under {}",
            a.dir.display()
        )));
    }
    let mut rows = vec![];
    for path in &files {
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = read_file(path)?;
        report.absorb_input(text.as_bytes());
        let (g, w) = load_instance(&text)?;
        let t0 = std::time::Instant::now();
        let exact = run_solver(&g, &w, &class, "exact", None)?;
        let approx = match eps {
            Some(_) => Some(run_solver(&g, &w, &class, "approx", eps)?),
            None => None,
        };
        let elapsed = t0.elapsed().as_millis();
        if a.oracle {
            oracle_check(&mut report, &g, &w, &exact, "exact", None);
        }
        if let (Some(ap), Some(e)) = (&approx, eps) {
            let ok = ap.weight * e.den() as u64 >= exact.weight * (e.den() - e.num()) as u64
                && ap.weight <= exact.weight;
            report.record(
                format!("ratio_ok:{name}"),
                ok,
                format!("approx {} vs exact {}", ap.weight, exact.weight),
            );
        }
        let mut row = format!(
            "{name} n={} class={} exact={} nodes={}",
            g.n(),
            class.describe(),
            exact.weight,
            exact.stats.nodes
        );
        if let Some(ap) = &approx {
            let _ = write!(row, " approx={} ratio={:.4}", ap.weight, if exact.weight == 0 {
                1.0
            } else {
                ap.weight as f64 / exact.weight as f64
            });
        }
        // Timing goes to stderr only, so the report replays byte-identically.
        eprintln!("{row} time_ms={elapsed}");
        rows.push(row);
    }
    report.tables.insert("results".into(), rows);
    if let Some(path) = &a.report {
        std::fs::write(path, report.to_json())
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Some(report))
}
