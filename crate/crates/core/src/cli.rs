//! Command-line front end: `prox`, `synth`, `fit` and `describe`.
//!
//! Exit codes: 0 on success, 2 for bad arguments, 1 for runtime failures.
//! `--config FILE` reads `key = value` lines and applies them as flags
//! placed before the command-line ones, so explicit flags win.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use ndarray::Array1;
use serde_json::json;

use crate::data::{load_csv, ClassificationSpec, CsvOptions, LabelColumn, Normalization, SyntheticSpec, Task};
use crate::error::{Result, SparcError};
use crate::experiment::{
    default_lambdas, emit_table, run_repetitions, table_csv, BenchmarkReport, CsvSource, DataSource, GridSpec,
    RunOptions, DEFAULT_K_GRID,
};
use crate::metrics::{MetricOptions, DEFAULT_DOF_TOLERANCE, DEFAULT_NNZ_TOLERANCE};
use crate::prox::{Method, Regularizer};
use crate::solver::SolverConfig;

#[derive(Debug, Parser)]
#[command(name = "sparc", version, about = "Sparse regression with the SPARC regularizer", args_override_self = true)]
struct Cli {
    /// File of `key = value` lines used as default flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply a proximal operator to a vector.
    Prox(ProxArgs),
    /// Run the synthetic benchmark.
    Synth(SynthArgs),
    /// Fit a CSV dataset.
    Fit(FitArgs),
    /// Summarize a CSV dataset.
    Describe(DescribeArgs),
}

#[derive(Debug, Clone)]
struct FloatList(Vec<f64>);

#[derive(Debug, Clone)]
struct UsizeList(Vec<usize>);

#[derive(Debug, Clone)]
struct MethodList(Vec<Method>);

#[derive(Debug, Clone, Copy)]
struct Fractions((f64, f64, f64));

fn tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty())
}

fn parse_float_token(t: &str) -> std::result::Result<f64, String> {
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("'{t}' is not a finite number")),
    }
}

fn parse_float_list(s: &str) -> std::result::Result<FloatList, String> {
    let values = tokens(s).map(parse_float_token).collect::<std::result::Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("expected at least one number".into());
    }
    Ok(FloatList(values))
}

fn parse_usize_list(s: &str) -> std::result::Result<UsizeList, String> {
    let values = tokens(s)
        .map(|t| t.parse::<usize>().map_err(|_| format!("'{t}' is not a non-negative integer")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("expected at least one integer".into());
    }
    Ok(UsizeList(values))
}

fn parse_method_list(s: &str) -> std::result::Result<MethodList, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(MethodList(Method::ALL.to_vec()));
    }
    let mut methods = Vec::new();
    for t in tokens(s) {
        let m = Method::parse(t).ok_or_else(|| format!("unknown method '{t}' (expected lasso, en, oscar, sparc)"))?;
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    if methods.is_empty() {
        return Err("expected at least one method".into());
    }
    Ok(MethodList(methods))
}

fn parse_fractions(s: &str) -> std::result::Result<Fractions, String> {
    let FloatList(v) = parse_float_list(s)?;
    if v.len() != 3 {
        return Err(format!("expected three fractions, got {}", v.len()));
    }
    if v.iter().any(|f| *f <= 0.0) {
        return Err("every split fraction must be positive".into());
    }
    if (v.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err("split fractions must sum to 1".into());
    }
    Ok(Fractions((v[0], v[1], v[2])))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    L2,
    Zscore,
    None,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::L2 => Normalization::L2,
            NormArg::Zscore => Normalization::ZScore,
            NormArg::None => Normalization::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaskArg {
    Auto,
    Regression,
    Classification,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Step growth factor in the acceptance loop.
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    alpha_min: Option<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    #[arg(long = "max-iter")]
    max_iterations: Option<usize>,
    #[arg(long = "max-inner")]
    max_inner_iterations: Option<usize>,
    /// Relative objective change that stops the solver.
    #[arg(long = "tol")]
    tolerance: Option<f64>,
    /// Sufficient-decrease constant.
    #[arg(long)]
    sigma: Option<f64>,
}

impl SolverArgs {
    fn apply(&self, base: SolverConfig) -> Result<SolverConfig> {
        let cfg = SolverConfig {
            eta: self.eta.unwrap_or(base.eta),
            alpha_min: self.alpha_min.unwrap_or(base.alpha_min),
            alpha_max: self.alpha_max.unwrap_or(base.alpha_max),
            max_iterations: self.max_iterations.unwrap_or(base.max_iterations),
            max_inner_iterations: self.max_inner_iterations.unwrap_or(base.max_inner_iterations),
            tolerance: self.tolerance.unwrap_or(base.tolerance),
            sigma: self.sigma.unwrap_or(base.sigma),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct MetricArgs {
    /// Report MAE and MSE per test row instead of summed.
    #[arg(long)]
    per_sample_metrics: bool,
    #[arg(long, default_value_t = DEFAULT_DOF_TOLERANCE)]
    dof_tol: f64,
    #[arg(long, default_value_t = DEFAULT_NNZ_TOLERANCE)]
    nnz_tol: f64,
}

impl MetricArgs {
    fn options(&self) -> Result<MetricOptions> {
        for (name, v) in [("--dof-tol", self.dof_tol), ("--nnz-tol", self.nnz_tol)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(SparcError::invalid(format!("{name} must be finite and non-negative")));
            }
        }
        Ok(MetricOptions {
            dof_tolerance: self.dof_tol,
            nnz_tolerance: self.nnz_tol,
            per_sample: self.per_sample_metrics,
        })
    }
}

/// Penalty parameters shared by `prox` and fixed-parameter `fit`.
#[derive(Debug, Args)]
struct PenaltyArgs {
    /// SPARC penalty level.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    lambda1: Option<f64>,
    #[arg(long)]
    lambda2: Option<f64>,
    /// SPARC support size.
    #[arg(long)]
    k: Option<usize>,
}

impl PenaltyArgs {
    fn any(&self) -> bool {
        self.lambda.is_some() || self.lambda1.is_some() || self.lambda2.is_some() || self.k.is_some()
    }

    fn regularizer(&self, method: Method) -> Result<Regularizer> {
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| SparcError::invalid(format!("{} needs {flag}", method.label())))
        };
        let reg = match method {
            Method::Lasso => Regularizer::Lasso {
                lambda1: need(self.lambda1.or(self.lambda), "--lambda1")?,
            },
            Method::ElasticNet => Regularizer::ElasticNet {
                lambda1: need(self.lambda1, "--lambda1")?,
                lambda2: need(self.lambda2, "--lambda2")?,
            },
            Method::Oscar => Regularizer::Oscar {
                lambda1: need(self.lambda1, "--lambda1")?,
                lambda2: need(self.lambda2, "--lambda2")?,
            },
            Method::Sparc => Regularizer::Sparc {
                lambda: need(self.lambda, "--lambda")?,
                k: self.k.ok_or_else(|| SparcError::invalid("SPARC needs --k"))?,
            },
        };
        reg.validate()?;
        Ok(reg)
    }
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("method").required(true).args(["lasso", "en", "oscar", "sparc"])))]
#[command(group(ArgGroup::new("input").required(true).args(["vec", "vec_file"])))]
struct ProxArgs {
    #[arg(long)]
    lasso: bool,
    #[arg(long)]
    en: bool,
    #[arg(long)]
    oscar: bool,
    #[arg(long)]
    sparc: bool,
    #[command(flatten)]
    penalty: PenaltyArgs,
    /// Input vector, e.g. `5,1,-3`.
    #[arg(long, value_parser = parse_float_list, allow_hyphen_values = true)]
    vec: Option<FloatList>,
    /// File holding the input vector (comma or whitespace separated).
    #[arg(long)]
    vec_file: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Penalty levels, visited in the given order.
    #[arg(long, value_parser = parse_float_list)]
    lambdas: Option<FloatList>,
    /// SPARC support sizes.
    #[arg(long, value_parser = parse_usize_list)]
    ks: Option<UsizeList>,
}

impl GridArgs {
    fn grid(&self) -> GridSpec {
        let lambdas = self.lambdas.as_ref().map_or_else(default_lambdas, |l| l.0.clone());
        let ks = self.ks.as_ref().map_or_else(|| DEFAULT_K_GRID.to_vec(), |k| k.0.clone());
        GridSpec::from_axes(&lambdas, &ks)
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 1 runs serially.
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory for report files.
    #[arg(long, env = "SPARC_OUTPUT_DIR", default_value = "sparc-output")]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 50)]
    reps: usize,
    /// Comma-separated methods, or `all`.
    #[arg(long, value_parser = parse_method_list, default_value = "all")]
    methods: MethodList,
    /// Use the grouped classification data instead of regression.
    #[arg(long)]
    classification: bool,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    metrics: MetricArgs,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    csv: PathBuf,
    /// Label column name; defaults to the last column.
    #[arg(long)]
    label: Option<String>,
    #[arg(long, value_enum, default_value_t = TaskArg::Auto)]
    task: TaskArg,
    /// Comma-separated methods, or `all`.
    #[arg(long, alias = "methods", value_parser = parse_method_list, default_value = "all")]
    method: MethodList,
    /// Train/validation/test fractions.
    #[arg(long, value_parser = parse_fractions, default_value = "0.5,0.3,0.2")]
    split: Fractions,
    /// Keep the m features most correlated with the label on training rows.
    #[arg(long)]
    screen: Option<usize>,
    #[arg(long, value_enum, default_value_t = NormArg::L2)]
    normalize: NormArg,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[command(flatten)]
    penalty: PenaltyArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    metrics: MetricArgs,
}

#[derive(Debug, Args)]
struct DescribeArgs {
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    label: Option<String>,
    #[arg(long)]
    json: bool,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => return report_error(&e),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Prox(a) => cmd_prox(&a),
        Command::Synth(a) => cmd_synth(&a),
        Command::Fit(a) => cmd_fit(&a),
        Command::Describe(a) => cmd_describe(&a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &SparcError) -> i32 {
    eprintln!("error: {e}");
    match e {
        SparcError::InvalidArgument(_) => 2,
        _ => 1,
    }
}

/// Splices the lines of `--config FILE` in right after the subcommand.
fn expand_config(mut args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    let mut i = 1;
    while i < args.len() {
        let arg = args[i].to_string_lossy().into_owned();
        if arg == "--" {
            break;
        }
        if arg == "--config" {
            let Some(value) = args.get(i + 1).cloned() else {
                return Err(SparcError::invalid("--config needs a file"));
            };
            path = Some(PathBuf::from(value));
            args.drain(i..i + 2);
        } else if let Some(value) = arg.strip_prefix("--config=") {
            path = Some(PathBuf::from(value));
            args.remove(i);
        } else {
            i += 1;
        }
    }
    let Some(path) = path else { return Ok(args) };
    let flags = read_config(&path)?;
    let at = args
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map_or(args.len(), |p| p + 2);
    args.splice(at..at, flags);
    Ok(args)
}

fn read_config(path: &Path) -> Result<Vec<OsString>> {
    let body = fs::read_to_string(path).map_err(|e| SparcError::io(path, e))?;
    let mut flags = Vec::new();
    for (n, line) in body.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), Some(v.trim().trim_matches('"'))),
            None => (line, None),
        };
        let key = key.trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(SparcError::Parse {
                path: path.to_path_buf(),
                line: n as u64 + 1,
                message: "missing key".into(),
            });
        }
        match value {
            Some("false") => {}
            Some("true") | None => flags.push(OsString::from(format!("--{key}"))),
            Some(v) => {
                flags.push(OsString::from(format!("--{key}")));
                flags.push(OsString::from(v));
            }
        }
    }
    Ok(flags)
}

/// Prints `-0` as `0`.
fn fmt_num(v: f64) -> String {
    (v + 0.0).to_string()
}

fn cmd_prox(args: &ProxArgs) -> Result<()> {
    let method = if args.lasso {
        Method::Lasso
    } else if args.en {
        Method::ElasticNet
    } else if args.oscar {
        Method::Oscar
    } else {
        Method::Sparc
    };
    let reg = args.penalty.regularizer(method)?;
    let v = match (&args.vec, &args.vec_file) {
        (Some(FloatList(v)), _) => Array1::from(v.clone()),
        (None, Some(path)) => read_vector(path)?,
        (None, None) => return Err(SparcError::invalid("--vec or --vec-file is required")),
    };
    reg.validate_for_dim(v.len())?;
    let z = reg.prox(v.view())?;
    let gap = &z - &v;
    let value = reg.penalty(z.view())? + 0.5 * gap.dot(&gap);
    if args.json {
        let out = json!({
            "regularizer": reg,
            "input": v.to_vec(),
            "prox": z.iter().map(|x| x + 0.0).collect::<Vec<_>>(),
            "objective": value,
        });
        println!("{out}");
    } else {
        println!("{}", z.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(" "));
        println!("{}", fmt_num(value));
    }
    Ok(())
}

fn read_vector(path: &Path) -> Result<Array1<f64>> {
    let body = fs::read_to_string(path).map_err(|e| SparcError::io(path, e))?;
    let mut values = Vec::new();
    for (n, line) in body.lines().enumerate() {
        for t in tokens(line) {
            values.push(parse_float_token(t).map_err(|message| SparcError::Parse {
                path: path.to_path_buf(),
                line: n as u64 + 1,
                message,
            })?);
        }
    }
    if values.is_empty() {
        return Err(SparcError::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "no values".into(),
        });
    }
    Ok(Array1::from(values))
}

fn run_options(run: &RunArgs, reps: usize, metrics: &MetricArgs) -> Result<RunOptions> {
    if run.threads == Some(0) {
        return Err(SparcError::invalid("--threads must be at least 1"));
    }
    Ok(RunOptions {
        repetitions: reps,
        master_seed: run.seed,
        threads: run.threads,
        metric_options: metrics.options()?,
    })
}

fn method_labels(methods: &[Method]) -> String {
    methods.iter().map(|m| m.label()).collect::<Vec<_>>().join(",")
}

fn summary_json(report: &BenchmarkReport) -> serde_json::Value {
    let methods: Vec<_> = report
        .methods
        .iter()
        .map(|m| {
            let metrics: serde_json::Map<String, serde_json::Value> = report
                .table_metrics
                .iter()
                .filter_map(|&metric| {
                    m.metric(metric)
                        .map(|s| (metric.name().to_string(), json!({"mean": s.mean, "std": s.std})))
                })
                .collect();
            json!({
                "method": m.method.label(),
                "metrics": metrics,
                "failed_repetitions": m.failed_repetitions,
            })
        })
        .collect();
    json!({
        "task": report.task.to_string(),
        "master_seed": report.master_seed,
        "repetitions": report.repetitions,
        "methods": methods,
    })
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let cfg = args.solver.apply(SolverConfig::benchmark())?;
    let options = run_options(&args.run, args.reps, &args.metrics)?;
    let source = if args.classification {
        DataSource::Classification(ClassificationSpec::default())
    } else {
        DataSource::Synthetic(SyntheticSpec::default())
    };
    let methods = &args.methods.0;
    let report = run_repetitions(&source, methods, &args.grid.grid(), &cfg, &options)?;
    let files = emit_table(&report, &args.run.out)?;
    if args.run.json {
        let mut out = summary_json(&report);
        out["files"] = json!([files.table, files.json, files.profile]);
        println!("{out}");
    } else {
        println!(
            "# task={} reps={} seed={} methods={}",
            report.task,
            report.repetitions,
            report.master_seed,
            method_labels(methods)
        );
        println!("# solver tol={} max_iter={}", cfg.tolerance, cfg.max_iterations);
        print!("{}", table_csv(&report));
        eprintln!("wrote {}", args.run.out.display());
    }
    Ok(())
}

/// Two distinct labels mean classification; anything else is regression.
fn infer_task(path: &Path, label: &LabelColumn) -> Result<Task> {
    let options = CsvOptions {
        label: label.clone(),
        task: Task::Regression,
        ..CsvOptions::default()
    };
    match load_csv(path, &options) {
        Ok(ds) => {
            let mut distinct: Vec<f64> = ds.y.to_vec();
            distinct.sort_by(f64::total_cmp);
            distinct.dedup();
            Ok(if distinct.len() == 2 { Task::Classification } else { Task::Regression })
        }
        Err(SparcError::Parse { message, .. }) if message.starts_with("non-numeric label") => Ok(Task::Classification),
        Err(e) => Err(e),
    }
}

fn load_with_task(path: &Path, label: &Option<String>, task: TaskArg) -> Result<crate::data::Dataset> {
    let label = label.clone().map_or(LabelColumn::Last, LabelColumn::Name);
    let task = match task {
        TaskArg::Auto => infer_task(path, &label)?,
        TaskArg::Regression => Task::Regression,
        TaskArg::Classification => Task::Classification,
    };
    load_csv(
        path,
        &CsvOptions {
            label,
            task,
            ..CsvOptions::default()
        },
    )
}

fn cmd_fit(args: &FitArgs) -> Result<()> {
    let cfg = args.solver.apply(SolverConfig::benchmark())?;
    let options = run_options(&args.run, args.reps, &args.metrics)?;
    let methods = &args.method.0;
    let grids = if args.penalty.any() {
        let mut g = GridSpec {
            lasso: Vec::new(),
            elastic_net: Vec::new(),
            oscar: Vec::new(),
            sparc: Vec::new(),
        };
        for &m in methods {
            match args.penalty.regularizer(m)? {
                Regularizer::Lasso { lambda1 } => g.lasso.push(lambda1),
                Regularizer::ElasticNet { lambda1, lambda2 } => g.elastic_net.push((lambda1, lambda2)),
                Regularizer::Oscar { lambda1, lambda2 } => g.oscar.push((lambda1, lambda2)),
                Regularizer::Sparc { lambda, k } => g.sparc.push((lambda, k)),
            }
        }
        g
    } else {
        args.grid.grid()
    };

    let dataset = load_with_task(&args.csv, &args.label, args.task)?;
    if let Some(m) = args.screen {
        if m == 0 || m > dataset.n_features() {
            return Err(SparcError::invalid(format!(
                "--screen must be between 1 and {}",
                dataset.n_features()
            )));
        }
    }
    let source = DataSource::Csv(Box::new(CsvSource {
        dataset,
        fractions: args.split.0,
        normalization: args.normalize.into(),
        screen: args.screen,
    }));
    let report = run_repetitions(&source, methods, &grids, &cfg, &options)?;
    let files = emit_table(&report, &args.run.out)?;
    let coef_path = args.run.out.join("coefficients.csv");
    fs::write(&coef_path, coefficients_csv(&report)).map_err(|e| SparcError::io(&coef_path, e))?;

    let first = &report.details[0];
    if args.run.json {
        let mut out = summary_json(&report);
        out["fits"] = first
            .outcomes
            .iter()
            .map(|o| {
                json!({
                    "method": o.method.label(),
                    "selected": o.run.as_ref().map(|r| r.selected),
                    "metrics": o.run.as_ref().map(|r| r.metrics),
                    "error": o.error,
                })
            })
            .collect();
        out["files"] = json!([files.table, files.json, files.profile, coef_path]);
        println!("{out}");
    } else {
        for o in &first.outcomes {
            match (&o.run, &o.error) {
                (Some(r), _) => println!(
                    "# {} selected {} validation={} nnz={}",
                    o.method.label(),
                    r.selected,
                    r.validation_score,
                    r.metrics.nnz.unwrap_or(0.0)
                ),
                (None, err) => println!("# {} failed: {}", o.method.label(), err.as_deref().unwrap_or("unknown")),
            }
        }
        print!("{}", table_csv(&report));
        eprintln!("wrote {}", args.run.out.display());
    }
    if report.methods.iter().all(|m| m.failed_repetitions.len() == report.repetitions) {
        let reason = first.outcomes.iter().find_map(|o| o.error.clone()).unwrap_or_default();
        return Err(SparcError::invalid(format!("every fit failed: {reason}")));
    }
    Ok(())
}

/// First-repetition coefficients in original units: `feature,value` for a
/// single method, one column per method otherwise.
fn coefficients_csv(report: &BenchmarkReport) -> String {
    let outcomes = &report.details[0].outcomes;
    let mut out = String::from("feature");
    if outcomes.len() == 1 {
        out.push_str(",value");
    } else {
        for o in outcomes {
            out.push(',');
            out.push_str(o.method.label());
        }
    }
    out.push('\n');
    for (j, name) in report.feature_names.iter().enumerate() {
        out.push_str(name);
        for o in outcomes {
            out.push(',');
            if let Some(r) = &o.run {
                out.push_str(&fmt_num(r.coefficients[j]));
            }
        }
        out.push('\n');
    }
    out
}

fn cmd_describe(args: &DescribeArgs) -> Result<()> {
    let ds = load_with_task(&args.csv, &args.label, TaskArg::Auto)?;
    let norms = ds.a.map_axis(ndarray::Axis(0), |c| c.dot(&c).sqrt());
    let norm_min = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let norm_max = norms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let n = ds.n_samples();
    let label = match ds.task {
        Task::Classification => {
            let neg = ds.y.iter().filter(|v| **v < 0.0).count();
            json!({"negative": neg, "positive": n - neg})
        }
        Task::Regression => {
            let mean = ds.y.sum() / n as f64;
            let var = ds.y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
            json!({"mean": mean, "sd": var.sqrt()})
        }
    };
    if args.json {
        println!(
            "{}",
            json!({
                "n": n,
                "p": ds.n_features(),
                "task": ds.task.to_string(),
                "label": ds.label_name,
                "label_summary": label,
                "column_norm_min": norm_min,
                "column_norm_max": norm_max,
            })
        );
    } else {
        println!("n={} p={}", n, ds.n_features());
        println!("task={} label={}", ds.task, ds.label_name);
        match ds.task {
            Task::Classification => println!("classes -1={} +1={}", label["negative"], label["positive"]),
            Task::Regression => println!("label mean={} sd={}", label["mean"], label["sd"]),
        }
        println!("column norms min={norm_min} max={norm_max}");
    }
    Ok(())
}
