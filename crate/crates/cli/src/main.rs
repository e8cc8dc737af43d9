use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use lmi_core::approx::ApproxParams;
use lmi_core::bench::{run_bench, to_csv, BenchConfig};
use lmi_core::exact::Instance;
use lmi_core::field::{choose_prime, FieldConfig};
use lmi_core::gen::{
    gen_bipartite, gen_graphic, gen_rainbow, random_bipartite, random_graph, random_instance, random_weights,
};
use lmi_core::io::{read_instance, write_instance};
use lmi_core::linalg::rank_of_set;
use lmi_core::report::{read_report, verify_report, SolveReport};
use lmi_core::solver::{RunContext, SolverRegistry, DEFAULT_EPS};
use lmi_core::span::{span_method, SpanMethod};
use lmi_core::Error;

#[derive(Parser)]
#[command(name = "lmi", version, about = "Linear matroid intersection over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ranks of both matrices.
    Rank {
        instance: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Closure of a set of columns in one matroid.
    Span(SpanArgs),
    /// Exact maximum common independent set with an (S, T) certificate.
    Exact(SolveArgs),
    /// Exact maximum-weight common independent set with a weight splitting.
    ExactWeighted(SolveArgs),
    /// Approximate maximum common independent set.
    Approx(SolveArgs),
    /// Approximate maximum-weight common independent set.
    ApproxWeighted(SolveArgs),
    /// Writes a generated instance.
    Gen(GenArgs),
    /// Re-checks a report against its instance.
    Verify {
        instance: PathBuf,
        report: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Span and solve timings on a doubling family, as CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SpanArgs {
    instance: PathBuf,
    /// 1-based column indices, comma separated.
    #[arg(long, default_value = "")]
    set: String,
    /// Which matroid (1 or 2).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    matrix: u8,
    /// Independent repetitions, intersected.
    #[arg(long, default_value_t = 1)]
    amplify: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use elimination instead of the randomized test.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    c_sample: Option<f64>,
    #[arg(long)]
    c_iters: Option<f64>,
    #[arg(long)]
    c_sketch: Option<f64>,
    /// Run seeds `seed, seed + 1, …, seed + repeat − 1`.
    #[arg(long, default_value_t = 1)]
    repeat: u64,
    /// Print the JSON report instead of a summary.
    #[arg(long)]
    json: bool,
    /// Replace randomized tests by elimination and record the exact optimum.
    #[arg(long)]
    oracle: bool,
    /// Audit every weighted subsolve's chain duals.
    #[arg(long)]
    audit: bool,
    /// Include wall-clock time in reports.
    #[arg(long)]
    timing: bool,
    /// Write the JSON report here.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Attach integer weights drawn from 1..=MAX.
    #[arg(long, value_name = "MAX", global = true)]
    weights: Option<u64>,
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Two independent random sparse matrices.
    Random {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        /// Rows of the second matrix (defaults to `--rows`).
        #[arg(long)]
        rows2: Option<usize>,
    },
    /// Graphic matroids of one random graph under two edge labellings.
    Graphic {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: usize,
    },
    /// Bipartite matching as two partition matroids.
    Bipartite {
        #[arg(long)]
        left: usize,
        #[arg(long)]
        right: usize,
        #[arg(long)]
        edges: usize,
    },
    /// Rainbow spanning tree: graphic matroid and a colour partition.
    Rainbow {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long)]
        colours: usize,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 32)]
    rows: usize,
    #[arg(long, default_value_t = 4)]
    nnz_per_col: usize,
    #[arg(long, default_value_t = 1024)]
    base_n: usize,
    #[arg(long, default_value_t = 3)]
    doublings: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Timing samples per measurement (minimum reported).
    #[arg(long, default_value_t = 7)]
    repeat: usize,
    #[arg(long)]
    skip_solve: bool,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidEpsilon { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

type CmdResult = Result<bool, Failure>;

fn parse_set(text: &str, n: usize) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(i) if i >= 1 && i <= n => Ok(i - 1),
            _ => Err(Failure::Usage(format!("`{t}` is not a column in 1..={n}"))),
        })
        .collect()
}

fn braces(set: &[usize]) -> String {
    let items: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Run(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    read_instance(path).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))
}

fn cmd_rank(instance: &Path, json: bool) -> CmdResult {
    let inst = load(instance)?;
    let all: Vec<usize> = (0..inst.n()).collect();
    let (r1, r2) = (rank_of_set(inst.m1(), &all), rank_of_set(inst.m2(), &all));
    if json {
        println!("{}", json!({ "rank1": r1, "rank2": r2 }));
    } else {
        println!("rank1 {r1}\nrank2 {r2}");
    }
    Ok(true)
}

fn cmd_span(a: &SpanArgs) -> CmdResult {
    let inst = load(&a.instance)?;
    let set = parse_set(&a.set, inst.n())?;
    let m = if a.matrix == 1 { inst.m1() } else { inst.m2() };
    let method: Box<dyn SpanMethod> = span_method(if a.oracle { "gaussian" } else { "randomized" }, a.amplify.max(1))
        .expect("both methods are registered");
    let cfg = FieldConfig::new(inst.field(), inst.n());
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let span = method.span(m, &set, &cfg, &mut rng);
    if a.json {
        let one: Vec<usize> = span.iter().map(|i| i + 1).collect();
        println!("{}", json!({ "matrix": a.matrix, "method": method.name(), "span": one }));
    } else {
        println!("{}", braces(&span));
    }
    Ok(true)
}

fn summary(r: &SolveReport) -> String {
    let zero: Vec<usize> = r.solution.iter().map(|i| i - 1).collect();
    let mut line = format!("{} seed={} size={} objective={}", r.command, r.seed, r.size, r.objective);
    if let Some(rs) = r.r_star {
        line += &format!(" r*={rs}");
    }
    line += &format!(" solution={}", braces(&zero));
    if let Some(ms) = r.wall_ms {
        line += &format!(" wall_ms={ms:.3}");
    }
    line
}

fn cmd_solve(name: &str, a: &SolveArgs) -> CmdResult {
    if !(a.eps > 0.0 && a.eps < 1.0) {
        return Err(Failure::Usage(format!("--eps must lie in (0, 1), got {}", a.eps)));
    }
    if a.repeat == 0 {
        return Err(Failure::Usage("--repeat must be at least 1".into()));
    }
    let inst = load(&a.instance)?;
    let defaults = ApproxParams::default();
    let params = ApproxParams {
        c_sample: a.c_sample.unwrap_or(defaults.c_sample),
        c_iters: a.c_iters.unwrap_or(defaults.c_iters),
        c_sketch: a.c_sketch.unwrap_or(defaults.c_sketch),
        oracle: a.oracle,
        audit: a.audit,
        ..defaults
    };
    params.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let registry = SolverRegistry::default();
    let seeds: Vec<u64> = (0..a.repeat).map(|i| a.seed.wrapping_add(i)).collect();
    let run = |seed: u64| -> Result<SolveReport, Error> {
        let ctx = RunContext {
            seed,
            eps: a.eps,
            params: params.clone(),
        };
        let start = Instant::now();
        let mut report = registry.run(name, &inst, &ctx)?;
        if a.timing {
            report.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        Ok(report)
    };
    let results: Vec<Result<SolveReport, Error>> = if seeds.len() == 1 {
        vec![run(seeds[0])]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = seeds.iter().map(|&seed| s.spawn(move || run(seed))).collect();
            handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
        })
    };
    let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let json = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n"
    };
    if let Some(p) = &a.output {
        emit(&json, Some(p))?;
    }
    if a.json {
        print!("{json}");
    } else {
        for r in &reports {
            println!("{}", summary(r));
        }
    }
    Ok(true)
}

fn cmd_gen(a: &GenArgs) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let inst = match a.kind {
        GenKind::Random {
            rows,
            n,
            density,
            rows2,
        } => {
            if !(0.0..=1.0).contains(&density) {
                return Err(Failure::Usage(format!("--density must lie in [0, 1], got {density}")));
            }
            random_instance(choose_prime(n).field, rows, rows2.unwrap_or(rows), n, density, &mut rng)
        }
        GenKind::Graphic { vertices, edges } => {
            let g = random_graph(vertices, edges, &mut rng);
            let mut perm = g.clone();
            perm.shuffle(&mut rng);
            let field = choose_prime(g.len()).field;
            Instance::new(gen_graphic(field, vertices, &g)?, gen_graphic(field, vertices, &perm)?)?
        }
        GenKind::Bipartite { left, right, edges } => {
            let g = random_bipartite(left, right, edges, &mut rng);
            gen_bipartite(choose_prime(g.len()).field, left, right, &g)?
        }
        GenKind::Rainbow {
            vertices,
            edges,
            colours,
        } => {
            if colours == 0 {
                return Err(Failure::Usage("--colours must be positive".into()));
            }
            let g = random_graph(vertices, edges, &mut rng);
            let coloured: Vec<(usize, usize, usize)> = g
                .iter()
                .map(|&(u, v)| (u, v, rand::Rng::gen_range(&mut rng, 0..colours)))
                .collect();
            gen_rainbow(choose_prime(g.len()).field, vertices, &coloured)?
        }
    };
    let inst = match a.weights {
        Some(max) => {
            let w = random_weights(inst.n(), max, &mut rng);
            inst.with_weights(w)?
        }
        None => inst,
    };
    emit(&write_instance(&inst), a.output.as_deref())?;
    Ok(true)
}

fn cmd_verify(instance: &Path, report: &Path, json: bool) -> CmdResult {
    let inst = load(instance)?;
    let rep = read_report(report).map_err(|e| Failure::Run(format!("{}: {e}", report.display())))?;
    let v = verify_report(&inst, &rep)?;
    let word = |b: bool| if b { "ok" } else { "FAIL" };
    if json {
        println!(
            "{}",
            json!({
                "independent": v.independent,
                "objective": v.objective_matches,
                "certificate": v.certificate,
                "passed": v.passed(),
            })
        );
    } else {
        println!("independent: {}", word(v.independent));
        println!("objective: {}", word(v.objective_matches));
        match v.certificate {
            Some(b) => println!("certificate: {}", word(b)),
            None => println!("certificate: absent"),
        }
    }
    Ok(v.passed())
}

fn cmd_bench(a: &BenchArgs) -> CmdResult {
    let cfg = BenchConfig {
        rows: a.rows,
        per_column: a.nnz_per_col,
        base_n: a.base_n,
        doublings: a.doublings,
        seed: a.seed,
        samples: a.repeat,
        solve: !a.skip_solve,
        eps: a.eps,
    };
    print!("{}", to_csv(&run_bench(&cfg)?));
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Rank { instance, json } => cmd_rank(instance, *json),
        Command::Span(a) => cmd_span(a),
        Command::Exact(a) => cmd_solve("exact", a),
        Command::ExactWeighted(a) => cmd_solve("exact-weighted", a),
        Command::Approx(a) => cmd_solve("approx", a),
        Command::ApproxWeighted(a) => cmd_solve("approx-weighted", a),
        Command::Gen(a) => cmd_gen(a),
        Command::Verify { instance, report, json } => cmd_verify(instance, report, *json),
        Command::Bench(a) => cmd_bench(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
