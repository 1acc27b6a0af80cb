//! Validation-set model selection, repeated benchmark runs, aggregation and
//! report files.

use std::fs;
use std::path::{Path, PathBuf};

use ndarray::{Array1, ArrayView1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{
    generate_classification, generate_synthetic, screen_by_correlation, split_dataset, ClassificationSpec,
    Dataset, Normalization, Split, SyntheticSpec, Task,
};
use crate::error::{Result, SparcError};
use crate::metrics::{cla, evaluate, nnz, Metric, MetricOptions, MetricsReport};
use crate::prox::{Method, Regularizer};
use crate::solver::{sparsa_solve, Objective, SolverConfig, SolverResult, Termination};

/// `n` points spaced evenly in log scale from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let ratio = (hi / lo).ln();
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        lo * (ratio * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

pub const DEFAULT_K_GRID: [usize; 5] = [5, 10, 15, 20, 25];

/// Per-method hyperparameter grids, each visited in the stored order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lasso: Vec<f64>,
    pub elastic_net: Vec<(f64, f64)>,
    pub oscar: Vec<(f64, f64)>,
    pub sparc: Vec<(f64, usize)>,
}

/// Default penalty levels: ten log-spaced points from 1e1 down to 1e-3.
/// Warm starts follow the path from strong to weak regularization.
pub fn default_lambdas() -> Vec<f64> {
    let mut lambdas = log_grid(1e-3, 1e1, 10);
    lambdas.reverse();
    lambdas
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::from_axes(&default_lambdas(), &DEFAULT_K_GRID)
    }
}

impl GridSpec {
    /// Full product grids from one list of penalty levels and one list of K.
    pub fn from_axes(lambdas: &[f64], ks: &[usize]) -> Self {
        let pairs: Vec<(f64, f64)> = lambdas
            .iter()
            .flat_map(|&l1| lambdas.iter().map(move |&l2| (l1, l2)))
            .collect();
        GridSpec {
            lasso: lambdas.to_vec(),
            elastic_net: pairs.clone(),
            oscar: pairs,
            sparc: ks
                .iter()
                .flat_map(|&k| lambdas.iter().map(move |&l| (l, k)))
                .collect(),
        }
    }

    pub fn regularizers(&self, method: Method) -> Vec<Regularizer> {
        match method {
            Method::Lasso => self.lasso.iter().map(|&lambda1| Regularizer::Lasso { lambda1 }).collect(),
            Method::ElasticNet => self
                .elastic_net
                .iter()
                .map(|&(lambda1, lambda2)| Regularizer::ElasticNet { lambda1, lambda2 })
                .collect(),
            Method::Oscar => self
                .oscar
                .iter()
                .map(|&(lambda1, lambda2)| Regularizer::Oscar { lambda1, lambda2 })
                .collect(),
            Method::Sparc => self
                .sparc
                .iter()
                .map(|&(lambda, k)| Regularizer::Sparc { lambda, k })
                .collect(),
        }
    }

    pub fn validate(&self, methods: &[Method], p: usize) -> Result<()> {
        for &m in methods {
            let regs = self.regularizers(m);
            if regs.is_empty() {
                return Err(SparcError::invalid(format!("empty grid for {m}")));
            }
            for reg in regs {
                reg.validate_for_dim(p)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchOutcome {
    pub selected: Regularizer,
    pub index: usize,
    pub coefficients: Array1<f64>,
    /// Validation score of every grid point (MSE, or CLA for classification).
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub termination: Termination,
}

fn validation_score(ds: &Dataset, a_val: &ndarray::Array2<f64>, y_val: &Array1<f64>, e: ArrayView1<'_, f64>) -> Result<f64> {
    match ds.task {
        Task::Regression => {
            let r = y_val - &a_val.dot(&e);
            Ok(r.dot(&r))
        }
        Task::Classification => cla(a_val.view(), y_val.view(), e),
    }
}

/// Fits every grid point on the training rows (warm-starting from the
/// previous point) and keeps the best validation score: lowest MSE for
/// regression, highest CLA for classification. Ties go to the smaller NNZ,
/// then to the earlier grid point; repeated points are not re-fitted.
pub fn grid_search(ds: &Dataset, grid: &[Regularizer], cfg: &SolverConfig) -> Result<GridSearchOutcome> {
    if grid.is_empty() {
        return Err(SparcError::invalid("grid must contain at least one point"));
    }
    let (a_train, y_train) = ds.subset(Split::Train);
    let (a_val, y_val) = ds.subset(Split::Validation);
    if y_train.is_empty() || y_val.is_empty() {
        return Err(SparcError::invalid("grid search needs non-empty train and validation splits"));
    }
    let higher_is_better = ds.task == Task::Classification;

    let mut warm = Array1::zeros(ds.n_features());
    let mut scores = Vec::with_capacity(grid.len());
    let mut best: Option<(usize, usize, SolverResult)> = None;
    for (index, reg) in grid.iter().enumerate() {
        // a repeated point scores like its first occurrence, which wins the tie
        if let Some(first) = grid[..index].iter().position(|g| g == reg) {
            scores.push(scores[first]);
            continue;
        }
        let obj = Objective::new(a_train.view(), y_train.view(), *reg)?;
        let result = sparsa_solve(&obj, cfg, warm.view())?;
        let score = validation_score(ds, &a_val, &y_val, result.x.view())?;
        let count = nnz(result.x.view(), 0.0);
        scores.push(score);

        let better = match &best {
            None => true,
            Some((incumbent, incumbent_nnz, _)) => {
                let current = scores[*incumbent];
                let strictly = if higher_is_better { score > current } else { score < current };
                strictly || (score == current && count < *incumbent_nnz)
            }
        };
        warm = result.x.clone();
        if better {
            best = Some((index, count, result));
        }
    }
    let (index, _, result) = best.expect("grid is non-empty");
    Ok(GridSearchOutcome {
        selected: grid[index],
        index,
        coefficients: result.x,
        scores,
        iterations: result.iterations,
        termination: result.termination,
    })
}

/// Loaded data plus the per-repetition preprocessing applied to it.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvSource {
    pub dataset: Dataset,
    pub fractions: (f64, f64, f64),
    pub normalization: Normalization,
    /// Keep only this many training-correlated features.
    pub screen: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Synthetic(SyntheticSpec),
    Classification(ClassificationSpec),
    Csv(Box<CsvSource>),
}

impl DataSource {
    pub fn task(&self) -> Task {
        match self {
            DataSource::Synthetic(_) => Task::Regression,
            DataSource::Classification(_) => Task::Classification,
            DataSource::Csv(src) => src.dataset.task,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            DataSource::Synthetic(spec) => spec.n_features(),
            DataSource::Classification(spec) => spec.n_features(),
            DataSource::Csv(src) => src.dataset.n_features(),
        }
    }

    /// Feature count seen by the solver after screening.
    pub fn working_features(&self) -> usize {
        match self {
            DataSource::Csv(src) => src.screen.unwrap_or(src.dataset.n_features()),
            _ => self.n_features(),
        }
    }

    fn describe(&self) -> String {
        match self {
            DataSource::Synthetic(spec) => format!("synthetic regression {spec:?}"),
            DataSource::Classification(spec) => format!("synthetic classification {spec:?}"),
            DataSource::Csv(src) => format!(
                "csv n={} p={} task={} fractions={:?} normalization={:?} screen={:?}",
                src.dataset.n_samples(),
                src.dataset.n_features(),
                src.dataset.task,
                src.fractions,
                src.normalization,
                src.screen
            ),
        }
    }
}

/// Data for one repetition, ready to fit.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedData {
    pub dataset: Dataset,
    /// Original column index of each working column.
    pub columns: Vec<usize>,
    /// Divisor mapping working coefficients back to original units.
    pub scale: Array1<f64>,
}

impl PreparedData {
    /// Coefficients in original feature order and units; screened-out
    /// features are zero.
    pub fn to_original(&self, e: ArrayView1<'_, f64>, p_original: usize) -> Vec<f64> {
        let mut out = vec![0.0; p_original];
        for (w, &j) in self.columns.iter().enumerate() {
            out[j] = e[w] / self.scale[w];
        }
        out
    }
}

pub fn prepare(source: &DataSource, seed: u64) -> Result<PreparedData> {
    match source {
        DataSource::Synthetic(spec) => {
            let dataset = generate_synthetic(&spec.with_seed(seed))?;
            let p = dataset.n_features();
            Ok(PreparedData {
                dataset,
                columns: (0..p).collect(),
                scale: Array1::ones(p),
            })
        }
        DataSource::Classification(spec) => {
            let dataset = generate_classification(&spec.with_seed(seed))?;
            let p = dataset.n_features();
            Ok(PreparedData {
                dataset,
                columns: (0..p).collect(),
                scale: Array1::ones(p),
            })
        }
        DataSource::Csv(src) => {
            let split = split_dataset(&src.dataset, src.fractions, seed)?;
            let train = split.rows(Split::Train);
            let (a, scale) = src.normalization.apply(split.a.view(), &train)?;
            let normalized = Dataset { a, ..split };
            let columns = match src.screen {
                Some(m) => screen_by_correlation(normalized.a.view(), normalized.y.view(), &train, m)?,
                None => (0..normalized.n_features()).collect(),
            };
            let scale = scale.select(ndarray::Axis(0), &columns);
            Ok(PreparedData {
                dataset: normalized.select_features(&columns),
                columns,
                scale,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodRun {
    pub selected: Regularizer,
    pub grid_index: usize,
    pub validation_score: f64,
    pub metrics: MetricsReport,
    /// Fitted coefficients in original feature order and units.
    pub coefficients: Vec<f64>,
    pub iterations: usize,
    pub termination: Termination,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodOutcome {
    pub method: Method,
    pub run: Option<MethodRun>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionRecord {
    pub repetition: usize,
    pub seed: u64,
    pub outcomes: Vec<MethodOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub metric: Metric,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single repetition.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub metrics: Vec<MetricSummary>,
    /// Selected hyperparameters per repetition (`None` for failed ones).
    pub selected: Vec<Option<Regularizer>>,
    pub failed_repetitions: Vec<usize>,
}

impl MethodSummary {
    pub fn metric(&self, metric: Metric) -> Option<&MetricSummary> {
        self.metrics.iter().find(|m| m.metric == metric)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSettings {
    pub source: String,
    pub solver: SolverConfig,
    pub grids: GridSpec,
    pub metric_options: MetricOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub task: Task,
    pub master_seed: u64,
    pub repetitions: usize,
    /// Rows of the summary table, in order.
    pub table_metrics: Vec<Metric>,
    pub methods: Vec<MethodSummary>,
    pub settings: ReportSettings,
    pub feature_names: Vec<String>,
    pub truth: Option<Vec<f64>>,
    pub details: Vec<RepetitionRecord>,
}

impl BenchmarkReport {
    pub fn summary(&self, method: Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| m.method == method)
    }

    /// Mean of a metric for a method, if it was computed.
    pub fn mean(&self, method: Method, metric: Metric) -> Option<f64> {
        self.summary(method)?.metric(metric).map(|s| s.mean)
    }
}

/// Metrics shown in the summary table for each task.
pub fn table_metrics(task: Task) -> Vec<Metric> {
    match task {
        Task::Regression => vec![Metric::Mae, Metric::Mse, Metric::Dof, Metric::Ser],
        Task::Classification => vec![Metric::Cla, Metric::Dof, Metric::Nnz],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub repetitions: usize,
    pub master_seed: u64,
    /// `Some(1)` runs repetitions serially; `None` uses the global pool.
    pub threads: Option<usize>,
    pub metric_options: MetricOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            repetitions: 50,
            master_seed: 0,
            threads: None,
            metric_options: MetricOptions::default(),
        }
    }
}

fn run_method(
    prepared: &PreparedData,
    method: Method,
    grids: &GridSpec,
    cfg: &SolverConfig,
    p_original: usize,
    metric_options: &MetricOptions,
) -> Result<MethodRun> {
    let ds = &prepared.dataset;
    let outcome = grid_search(ds, &grids.regularizers(method), cfg)?;
    let (a_test, y_test) = ds.subset(Split::Test);
    let metrics = evaluate(
        a_test.view(),
        y_test.view(),
        ds.truth.as_ref().map(|t| t.view()),
        outcome.coefficients.view(),
        ds.task == Task::Classification,
        metric_options,
    )?;
    Ok(MethodRun {
        selected: outcome.selected,
        grid_index: outcome.index,
        validation_score: outcome.scores[outcome.index],
        metrics,
        coefficients: prepared.to_original(outcome.coefficients.view(), p_original),
        iterations: outcome.iterations,
        termination: outcome.termination,
    })
}

fn run_one(
    source: &DataSource,
    methods: &[Method],
    grids: &GridSpec,
    cfg: &SolverConfig,
    repetition: usize,
    options: &RunOptions,
) -> RepetitionRecord {
    let seed = options.master_seed.wrapping_add(repetition as u64);
    let p_original = source.n_features();
    let prepared = prepare(source, seed);
    let outcomes = methods
        .iter()
        .map(|&method| {
            let result = prepared
                .as_ref()
                .map_err(|e| e.to_string())
                .and_then(|p| {
                    run_method(p, method, grids, cfg, p_original, &options.metric_options).map_err(|e| e.to_string())
                });
            match result {
                Ok(run) => MethodOutcome {
                    method,
                    run: Some(run),
                    error: None,
                },
                Err(error) => MethodOutcome {
                    method,
                    run: None,
                    error: Some(error),
                },
            }
        })
        .collect();
    RepetitionRecord {
        repetition,
        seed,
        outcomes,
    }
}

fn summarize(metric: Metric, values: &[f64]) -> Option<MetricSummary> {
    if values.is_empty() {
        return None;
    }
    let count = values.len();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // rounding can push the mean of identical values one ulp outside [min, max]
    let mean = (values.iter().sum::<f64>() / count as f64).clamp(min, max);
    let std = if count > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
    } else {
        0.0
    };
    Some(MetricSummary {
        metric,
        mean,
        std,
        min,
        max,
        count,
    })
}

fn aggregate(method: Method, details: &[RepetitionRecord]) -> MethodSummary {
    let runs: Vec<(usize, Option<&MethodRun>)> = details
        .iter()
        .map(|rec| {
            let run = rec
                .outcomes
                .iter()
                .find(|o| o.method == method)
                .and_then(|o| o.run.as_ref());
            (rec.repetition, run)
        })
        .collect();
    let metrics = Metric::ALL
        .iter()
        .filter_map(|&metric| {
            let values: Vec<f64> = runs
                .iter()
                .filter_map(|(_, run)| run.and_then(|r| r.metrics.get(metric)))
                .collect();
            summarize(metric, &values)
        })
        .collect();
    MethodSummary {
        method,
        metrics,
        selected: runs.iter().map(|(_, run)| run.map(|r| r.selected)).collect(),
        failed_repetitions: runs
            .iter()
            .filter(|(_, run)| run.is_none())
            .map(|(rep, _)| *rep)
            .collect(),
    }
}

/// Runs the benchmark `options.repetitions` times with seeds
/// `master_seed + r`, selecting hyperparameters on the validation rows and
/// scoring on the test rows. Failed fits are recorded, not dropped.
pub fn run_repetitions(
    source: &DataSource,
    methods: &[Method],
    grids: &GridSpec,
    cfg: &SolverConfig,
    options: &RunOptions,
) -> Result<BenchmarkReport> {
    if options.repetitions == 0 {
        return Err(SparcError::invalid("repetitions must be at least 1"));
    }
    if methods.is_empty() {
        return Err(SparcError::invalid("at least one method is required"));
    }
    cfg.validate()?;
    grids.validate(methods, source.working_features())?;

    let reps: Vec<usize> = (0..options.repetitions).collect();
    let mut details: Vec<RepetitionRecord> = match options.threads {
        Some(1) => reps
            .iter()
            .map(|&r| run_one(source, methods, grids, cfg, r, options))
            .collect(),
        threads => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .map_err(|e| SparcError::invalid(format!("thread pool: {e}")))?;
            pool.install(|| {
                reps.par_iter()
                    .map(|&r| run_one(source, methods, grids, cfg, r, options))
                    .collect()
            })
        }
    };
    details.sort_by_key(|d| d.repetition);

    let (feature_names, truth) = match source {
        DataSource::Csv(src) => (src.dataset.feature_names.clone(), None),
        _ => {
            let first = prepare(source, options.master_seed)?;
            (
                first.dataset.feature_names.clone(),
                first.dataset.truth.map(|t| t.to_vec()),
            )
        }
    };

    Ok(BenchmarkReport {
        task: source.task(),
        master_seed: options.master_seed,
        repetitions: options.repetitions,
        table_metrics: table_metrics(source.task()),
        methods: methods.iter().map(|&m| aggregate(m, &details)).collect(),
        settings: ReportSettings {
            source: source.describe(),
            solver: *cfg,
            grids: grids.clone(),
            metric_options: options.metric_options,
        },
        feature_names,
        truth,
        details,
    })
}

/// The summary table: one row per metric, one `mean±std` column per method.
pub fn table_csv(report: &BenchmarkReport) -> String {
    let mut out = String::from("metric");
    for m in &report.methods {
        out.push(',');
        out.push_str(m.method.label());
    }
    out.push('\n');
    for &metric in &report.table_metrics {
        out.push_str(metric.name());
        for m in &report.methods {
            out.push(',');
            if let Some(s) = m.metric(metric) {
                out.push_str(&format!("{:.4}±{:.4}", s.mean, s.std));
            }
        }
        out.push('\n');
    }
    out
}

/// Per-feature truth and first-repetition estimates, for stem plots.
pub fn profile_csv(report: &BenchmarkReport) -> String {
    let mut out = String::from("index,feature,truth");
    for m in &report.methods {
        out.push(',');
        out.push_str(m.method.label());
    }
    out.push('\n');
    let estimates: Vec<Option<&Vec<f64>>> = report
        .methods
        .iter()
        .map(|m| {
            report
                .details
                .iter()
                .flat_map(|d| d.outcomes.iter())
                .find(|o| o.method == m.method && o.run.is_some())
                .and_then(|o| o.run.as_ref())
                .map(|r| &r.coefficients)
        })
        .collect();
    for (j, name) in report.feature_names.iter().enumerate() {
        out.push_str(&format!("{},{}", j + 1, name));
        out.push(',');
        if let Some(t) = &report.truth {
            out.push_str(&t[j].to_string());
        }
        for e in &estimates {
            out.push(',');
            if let Some(e) = e {
                out.push_str(&e[j].to_string());
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedFiles {
    pub table: PathBuf,
    pub json: PathBuf,
    pub profile: PathBuf,
}

/// Writes `report.csv`, `report.json` and `profile.csv` into `dir`.
pub fn emit_table(report: &BenchmarkReport, dir: impl AsRef<Path>) -> Result<EmittedFiles> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| SparcError::io(dir, e))?;
    let files = EmittedFiles {
        table: dir.join("report.csv"),
        json: dir.join("report.json"),
        profile: dir.join("profile.csv"),
    };
    let write = |path: &Path, body: String| fs::write(path, body).map_err(|e| SparcError::io(path, e));
    write(&files.table, table_csv(report))?;
    write(&files.json, serde_json::to_string_pretty(report)? + "\n")?;
    write(&files.profile, profile_csv(report))?;
    Ok(files)
}

pub fn load_report(path: impl AsRef<Path>) -> Result<BenchmarkReport> {
    let path = path.as_ref();
    let body = fs::read_to_string(path).map_err(|e| SparcError::io(path, e))?;
    Ok(serde_json::from_str(&body)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-3, 1e1, 10);
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[9], 10.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!((g[3] - 1e-3 * 10f64.powf(4.0 / 3.0)).abs() < 1e-15);
        assert_eq!(log_grid(0.5, 2.0, 1), vec![0.5]);
    }

    #[test]
    fn default_grid_sizes() {
        let g = GridSpec::default();
        assert_eq!(g.lasso.len(), 10);
        assert_eq!(g.elastic_net.len(), 100);
        assert_eq!(g.oscar.len(), 100);
        assert_eq!(g.sparc.len(), 50);
        // strong to weak regularization
        assert_eq!(g.lasso[0], 10.0);
        assert!(g.lasso.windows(2).all(|w| w[1] < w[0]));
        assert!(g.validate(&Method::ALL, 40).is_ok());
        assert!(g.validate(&[Method::Sparc], 20).is_err());
    }

    #[test]
    fn summary_statistics() {
        let s = summarize(Metric::Mse, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.std, s.min, s.max, s.count), (2.0, 1.0, 1.0, 3.0, 3));
        let single = summarize(Metric::Mse, &[4.5]).unwrap();
        assert_eq!(single.std, 0.0);
        let same = summarize(Metric::Ser, &[0.1, 0.1, 0.1]).unwrap();
        assert!(same.mean <= same.max && same.mean >= same.min);
        assert!(summarize(Metric::Mse, &[]).is_none());
    }
}
