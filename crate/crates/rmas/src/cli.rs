//! Command-line front end: gen / solve / lp / eval / bench / verify.
//!
//! Exit codes: 0 success, 1 domain error (parse failure, infeasible
//! labeling, oracle cap), 2 usage error. Diagnostics go to stderr, data to
//! stdout or `--out`.

use crate::bench::{self, McArm};
use crate::combined::{guarantee_bound, solve_combined, SolveReport};
use crate::error::Error;
use crate::exact::{brute_force_opt, DEFAULT_ENUM_CAP};
use crate::generators::{self, GenSpec, SuiteSpec};
use crate::instance::{
    evaluate, filter_edges, parse_instance, serialize_instance, total_weight, Labeling,
    RmasInstance,
};
use crate::lp::{build_lp, solve_lp};
use crate::rounding::{derandomize_rounding, sample_from_marginals, MarginalState};
use crate::simple_approx::{derandomize_minmax, sample_minmax};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "rmas", about = "Restricted Maximum Acyclic Subgraph solver", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and write it in the .rmas text format
    Gen(GenArgs),
    /// Solve an instance with the chosen algorithm
    Solve(SolveArgs),
    /// Build and solve the LP relaxation
    Lp(LpArgs),
    /// Evaluate a labeling
    Eval(EvalArgs),
    /// Experiment harnesses producing CSV reports
    Bench(BenchArgs),
    /// Run the certificate checks on one instance
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    /// Random lists and edges
    Random,
    /// MAS embedding of a random digraph
    Mas,
    /// Lists sharing only the label 0
    Khandekar,
    /// MAS embedding of a random DAG
    Dag,
    /// One of the canonical named instances
    Fixture,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 5)]
    nodes: usize,
    #[arg(long, default_value_t = 8)]
    edges: usize,
    #[arg(long, default_value_t = 0)]
    label_min: i64,
    #[arg(long, default_value_t = 9)]
    label_max: i64,
    /// Maximum label-list length per node
    #[arg(long, default_value_t = 4)]
    list_max: usize,
    #[arg(long, default_value_t = 1.0)]
    weight_min: f64,
    #[arg(long, default_value_t = 10.0)]
    weight_max: f64,
    /// Draw real weights instead of integers
    #[arg(long)]
    float_weights: bool,
    /// Edge probability for --kind dag
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Fixture name for --kind fixture
    #[arg(long)]
    name: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Exact,
    Simple,
    SimpleRand,
    Round,
    RoundRand,
    Combined,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    alg: Algorithm,
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration cap for --alg exact
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: u128,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LpArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Also print the nonzero variables as JSON
    #[arg(long)]
    dump_solution: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Space-separated labels in node-index order
    #[arg(long)]
    labels: Option<String>,
    /// File holding one line of space-separated labels
    #[arg(long, conflicts_with = "labels")]
    labels_file: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Clone)]
enum BenchCommand {
    /// Approximation-ratio sweep against the brute-force oracle
    Ratio {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Max-dicut study on random DAGs
    Dicut {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo check of a randomized arm on one instance
    Mc {
        #[arg(long = "in", value_name = "PATH")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = McArmArg::Simple)]
        arm: McArmArg,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum McArmArg {
    Simple,
    Round,
}

#[derive(Args)]
struct BenchArgs {
    #[command(subcommand)]
    command: BenchCommand,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
    cap: u128,
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Error> {
    match path {
        Some(p) => Ok(std::fs::read_to_string(p)?),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn load_instance(path: &Option<PathBuf>) -> Result<RmasInstance, Error> {
    parse_instance(&read_input(path)?)
}

fn write_output(out: &Option<PathBuf>, data: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, data)?,
        None => print!("{data}"),
    }
    Ok(())
}

fn error_category(err: &Error) -> &'static str {
    match err {
        Error::Parse { .. } => "parse",
        Error::Io(_) => "io",
        Error::BadGenSpec(_) | Error::UnknownFixture(_) => "spec",
        _ => "domain",
    }
}

/// Runs one invocation. Returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // clap prints its own message; --help and --version are successes
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    let json = wants_json(&cli.command);
    match run_command(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            if json {
                eprintln!(
                    "{}",
                    serde_json::json!({
                        "error": error_category(&err),
                        "detail": err.to_string(),
                    })
                );
            } else {
                eprintln!("error: {err}");
            }
            1
        }
    }
}

fn wants_json(cmd: &Command) -> bool {
    match cmd {
        Command::Solve(a) => a.json,
        Command::Eval(a) => a.json,
        _ => false,
    }
}

fn run_command(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Gen(args) => run_gen(args),
        Command::Solve(args) => run_solve(args),
        Command::Lp(args) => run_lp(args),
        Command::Eval(args) => run_eval(args),
        Command::Bench(args) => run_bench(args.command),
        Command::Verify(args) => run_verify(args),
    }
}

fn run_gen(args: GenArgs) -> Result<(), Error> {
    let inst = match args.kind {
        GenKind::Random => generators::gen_random(&GenSpec {
            nodes: args.nodes,
            edges: args.edges,
            label_min: args.label_min,
            label_max: args.label_max,
            max_list_len: args.list_max,
            weight_min: args.weight_min,
            weight_max: args.weight_max,
            integer_weights: !args.float_weights,
            seed: args.seed,
        })?,
        GenKind::Mas => {
            // random digraph, then full {1..n} lists
            let spec = GenSpec {
                nodes: args.nodes,
                edges: args.edges,
                label_min: 0,
                label_max: 0,
                max_list_len: 1,
                weight_min: args.weight_min,
                weight_max: args.weight_max,
                integer_weights: !args.float_weights,
                seed: args.seed,
            };
            let base = generators::gen_random(&spec)?;
            let g = generators::Digraph {
                node_count: base.node_count(),
                edges: base.edges.iter().map(|e| (e.tail, e.head, e.weight)).collect(),
            };
            generators::gen_mas(&g)
        }
        GenKind::Khandekar => generators::gen_khandekar(args.nodes, args.list_max, args.seed)?,
        GenKind::Dag => {
            let g = generators::gen_random_dag(args.nodes, args.p, args.seed);
            generators::gen_mas(&g)
        }
        GenKind::Fixture => {
            let name = args.name.as_deref().unwrap_or("two-cycle");
            generators::fixture(name)?
        }
    };
    write_output(&args.out, &serialize_instance(&inst))
}

fn base_timings() -> BTreeMap<String, f64> {
    BTreeMap::new()
}

fn run_solve(args: SolveArgs) -> Result<(), Error> {
    let inst = load_instance(&args.input)?;
    let report = match args.alg {
        Algorithm::Combined => solve_combined(&inst)?,
        Algorithm::Exact => {
            let res = brute_force_opt(&inst, args.cap)?;
            let w = total_weight(&filter_edges(&inst).kept);
            SolveReport {
                algorithm: "exact".to_string(),
                value: res.value,
                labeling: res.labeling.0,
                total_weight: w,
                lp: None,
                guarantee: res.value,
                opt: Some(res.value),
                timings_ms: base_timings(),
                lp_error: None,
            }
        }
        Algorithm::Simple | Algorithm::SimpleRand => {
            let filtered = filter_edges(&inst).kept;
            let w = total_weight(&filtered);
            let labeling = if args.alg == Algorithm::Simple {
                derandomize_minmax(&filtered).0
            } else {
                sample_minmax(&filtered, args.seed)
            };
            let value = evaluate(&inst, &labeling)?;
            SolveReport {
                algorithm: if args.alg == Algorithm::Simple { "simple" } else { "simple-rand" }
                    .to_string(),
                value,
                labeling: labeling.0,
                total_weight: w,
                lp: None,
                guarantee: w / 4.0,
                opt: None,
                timings_ms: base_timings(),
                lp_error: None,
            }
        }
        Algorithm::Round | Algorithm::RoundRand => {
            let filtered = filter_edges(&inst).kept;
            let w = total_weight(&filtered);
            let prog = build_lp(&filtered);
            let sol = solve_lp(&prog)?;
            let labeling = if args.alg == Algorithm::Round {
                derandomize_rounding(&filtered, &prog, &sol)?.0
            } else {
                let m = MarginalState::from_lp(&prog, &sol, &filtered);
                sample_from_marginals(&filtered, &m, args.seed)
            };
            let value = evaluate(&inst, &labeling)?;
            let lp = sol.objective.min(w);
            SolveReport {
                algorithm: if args.alg == Algorithm::Round { "round" } else { "round-rand" }
                    .to_string(),
                value,
                labeling: labeling.0,
                total_weight: w,
                lp: Some(lp),
                guarantee: if w == 0.0 { 0.0 } else { lp * lp / (2.0 * w) },
                opt: None,
                timings_ms: base_timings(),
                lp_error: None,
            }
        }
    };
    let doc = if args.json {
        format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes"))
    } else {
        let labels: Vec<String> = report.labeling.iter().map(|l| l.to_string()).collect();
        format!(
            "algorithm {}\nvalue {}\nlabeling {}\nW {}\nlp {}\nguarantee {}\n",
            report.algorithm,
            bench::fmt_sig(report.value),
            labels.join(" "),
            bench::fmt_sig(report.total_weight),
            report.lp.map_or("-".to_string(), bench::fmt_sig),
            bench::fmt_sig(report.guarantee),
        )
    };
    write_output(&args.out, &doc)
}

fn run_lp(args: LpArgs) -> Result<(), Error> {
    let inst = load_instance(&args.input)?;
    let filtered = filter_edges(&inst).kept;
    let prog = build_lp(&filtered);
    let sol = solve_lp(&prog)?;
    let mut doc = format!("lp {}\n", bench::fmt_sig(sol.objective));
    if args.dump_solution {
        let mut nonzero = serde_json::Map::new();
        for v in 0..filtered.node_count() {
            for (i, &label) in filtered.label_lists[v].iter().enumerate() {
                let x = sol.values[prog.x_var(v, i)];
                if x.abs() > 1e-9 {
                    nonzero.insert(format!("x[{v}]({label})"), serde_json::json!(x));
                }
            }
        }
        for (p, block) in prog.pair_blocks().iter().enumerate() {
            for (i, &li) in filtered.label_lists[block.lo].iter().enumerate() {
                for (j, &lj) in filtered.label_lists[block.hi].iter().enumerate() {
                    let y = sol.values[prog.y_var(p, i, j)];
                    if y.abs() > 1e-9 {
                        nonzero.insert(
                            format!("y[{},{}]({li},{lj})", block.lo, block.hi),
                            serde_json::json!(y),
                        );
                    }
                }
            }
        }
        doc.push_str(&serde_json::to_string_pretty(&serde_json::Value::Object(nonzero)).unwrap());
        doc.push('\n');
    }
    write_output(&args.out, &doc)
}

fn run_eval(args: EvalArgs) -> Result<(), Error> {
    let inst = load_instance(&args.input)?;
    let text = match (&args.labels, &args.labels_file) {
        (Some(inline), _) => inline.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)?,
        (None, None) => {
            return Err(Error::Parse {
                line: 0,
                message: "eval needs --labels or --labels-file".into(),
            })
        }
    };
    let mut labels = Vec::new();
    for tok in text.split_whitespace() {
        labels.push(tok.parse::<i64>().map_err(|_| Error::Parse {
            line: 0,
            message: format!("bad label token {tok:?}"),
        })?);
    }
    let value = evaluate(&inst, &Labeling(labels))?;
    if args.json {
        println!("{}", serde_json::json!({ "value": value }));
    } else {
        println!("{}", bench::fmt_sig(value));
    }
    Ok(())
}

fn run_bench(cmd: BenchCommand) -> Result<(), Error> {
    match cmd {
        BenchCommand::Ratio { count, seed, cap, out } => {
            let exp = bench::ratio_experiment(count, &SuiteSpec::small_integer(), seed, cap)?;
            for (id, reason) in &exp.skipped {
                eprintln!("skipped {id}: {reason}");
            }
            eprintln!("{}", exp.summary());
            write_output(&out, &exp.csv())
        }
        BenchCommand::Dicut { count, n_min, n_max, p, seed, out } => {
            let exp = bench::dicut_experiment(n_min, n_max, count, p, seed)?;
            write_output(&out, &exp.csv())
        }
        BenchCommand::Mc { input, arm, count, seed, out } => {
            let inst = load_instance(&input)?;
            let arm = match arm {
                McArmArg::Simple => McArm::Simple,
                McArmArg::Round => McArm::Rounding,
            };
            let res = bench::monte_carlo_experiment(&inst, arm, count, seed)?;
            let doc = format!(
                "exact {}\nmean {}\nstderr {}\nflagged {}\n",
                bench::fmt_sig(res.exact),
                bench::fmt_sig(res.mean),
                bench::fmt_sig(res.stderr),
                res.flagged
            );
            write_output(&out, &doc)
        }
    }
}

fn run_verify(args: VerifyArgs) -> Result<(), Error> {
    let inst = load_instance(&args.input)?;
    let opt = brute_force_opt(&inst, args.cap)?.value;
    let filtered = filter_edges(&inst).kept;
    let opt_filtered = brute_force_opt(&filtered, args.cap)?.value;
    let w = total_weight(&filtered);
    let prog = build_lp(&filtered);
    let sol = solve_lp(&prog)?;
    let lp = sol.objective;
    let report = solve_combined(&inst)?;
    let guarantee = guarantee_bound(w, lp.min(w))?;

    let checks = [
        ("filtering-soundness", (opt - opt_filtered).abs() <= 1e-9),
        ("lp-sandwich", opt <= lp + 1e-6 && lp <= w + 1e-6),
        ("bound-chain", report.value >= guarantee - 1e-6
            && report.value >= opt / (2.0 * std::f64::consts::SQRT_2) - 1e-6),
    ];
    let mut all_ok = true;
    for (name, ok) in checks {
        println!("{} {}", if ok { "PASS" } else { "FAIL" }, name);
        all_ok &= ok;
    }
    if all_ok {
        Ok(())
    } else {
        Err(Error::LpNumerics("verification failed".into()))
    }
}
