//! Experiment runners behind the CLI subcommands.
//!
//! Replicates are partitioned statically over worker threads; each
//! replicate derives its RNG stream from (seed, grid point, replicate),
//! so the record set is invariant under the thread count, and records
//! are sorted before writing so equal configurations produce identical
//! files. A wall-clock budget (MAPFORGE_BUDGET_SECS) is checked between
//! replicates; on expiry the partial records are flushed and the run
//! reports a budget failure (exit code 3).

use crate::config::{Budget, DiameterMode, ExperimentConfig, OutputFormat};
use crate::stats;
use mapforge::bijection::{
    cvs_closure, map_as_graph, quad_to_map, sample_pipeline, validate_pipeline_sample,
};
use mapforge::decomp::{
    block_decomposition, three_connected_core_bound_check, rmt_decomposition, two_connected_core,
    virtual_edge_stats,
};
use mapforge::graph::{diameter_bounds, diameter_exact};
use mapforge::rng::Rng;
use mapforge::series::asym::{estimate_growth, ln_q_abs};
use mapforge::series::maps_gf::{alpha_estimate, core_size_distribution};
use mapforge::series::networks::{
    derive_three_connected_plane, planar_network_system, plane_network_system,
};
use mapforge::series::ps::PowerSeries;
use mapforge::series::system::{
    bicolored_tree_system, labelled_tree_system, solve_vector,
};
use mapforge::series::table::{read_coefficient_csv, write_coefficient_csv};
use mapforge::tree::{enumerate_labelled_trees, sample_labelled_tree, sample_plane_tree};
use num_traits::ToPrimitive;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum HarnessError {
    Io(String),
    Usage(String),
    Lib(String),
    /// Validation found violations; the report file names the artifacts.
    ValidationFailed { report: PathBuf },
    /// Wall budget expired; partial results were flushed.
    BudgetExceeded { partial: PathBuf },
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Io(m) => write!(f, "io error: {m}"),
            HarnessError::Usage(m) => write!(f, "usage error: {m}"),
            HarnessError::Lib(m) => write!(f, "{m}"),
            HarnessError::ValidationFailed { report } => {
                write!(f, "validation failed; see {}", report.display())
            }
            HarnessError::BudgetExceeded { partial } => {
                write!(f, "budget exceeded; partial results in {}", partial.display())
            }
        }
    }
}

impl std::error::Error for HarnessError {}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::ValidationFailed { .. } => 2,
            HarnessError::BudgetExceeded { .. } => 3,
            _ => 1,
        }
    }
}

fn io_err<E: fmt::Display>(e: E) -> HarnessError {
    HarnessError::Io(e.to_string())
}

fn lib_err<E: fmt::Display>(e: E) -> HarnessError {
    HarnessError::Lib(e.to_string())
}

pub struct RunDir {
    pub dir: PathBuf,
}

impl RunDir {
    pub fn create(cfg: &ExperimentConfig) -> Result<RunDir, HarnessError> {
        let dir = Path::new(&cfg.out_dir).join(&cfg.name);
        fs::create_dir_all(&dir).map_err(io_err)?;
        Ok(RunDir { dir })
    }

    pub fn write(&self, file: &str, contents: &str) -> Result<PathBuf, HarnessError> {
        let path = self.dir.join(file);
        let mut f = fs::File::create(&path).map_err(io_err)?;
        f.write_all(contents.as_bytes()).map_err(io_err)?;
        Ok(path)
    }
}

/// One measured replicate row.
#[derive(Debug, Clone)]
pub struct Record {
    pub n: usize,
    pub rep: usize,
    /// Primary measured value (statistic of the sample).
    pub value: f64,
    /// Secondary value (upper diameter bound where applicable, else =value).
    pub upper: f64,
    /// ln of the importance weight x^blacks (0 when x = 1).
    pub log_weight: f64,
    pub wall_us: u64,
}

/// Primary records are free of wall timings so equal configurations give
/// byte-identical files; timings go to a separate non-contractual file.
fn records_file(cfg: &ExperimentConfig, records: &[Record]) -> (String, String) {
    match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::from("config,n,replicate,value,upper,log_weight\n");
            let hash = cfg.config_hash();
            for r in records {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    hash, r.n, r.rep, r.value, r.upper, r.log_weight
                ));
            }
            ("records.csv".into(), out)
        }
        OutputFormat::Json => {
            let mut out = String::new();
            let hash = cfg.config_hash();
            for r in records {
                out.push_str(&format!(
                    "{{\"config\":\"{}\",\"n\":{},\"replicate\":{},\"value\":{},\"upper\":{},\"log_weight\":{}}}\n",
                    hash, r.n, r.rep, r.value, r.upper, r.log_weight
                ));
            }
            ("records.jsonl".into(), out)
        }
    }
}

fn timings_file(records: &[Record]) -> String {
    let mut out = String::from("n,replicate,wall_us\n");
    for r in records {
        out.push_str(&format!("{},{},{}\n", r.n, r.rep, r.wall_us));
    }
    out
}

/// Run `per_rep` over every (grid point, replicate) with replicate-level
/// parallelism; returns records sorted by (n, rep). Stops at the budget,
/// returning what finished.
fn run_replicated<F>(
    cfg: &ExperimentConfig,
    budget: &Budget,
    per_rep: F,
) -> (Vec<Record>, bool)
where
    F: Fn(usize, usize, &mut Rng) -> (f64, f64, f64) + Sync,
{
    let threads = cfg.threads.max(1);
    let mut all: Vec<Record> = Vec::new();
    let hit_budget = std::sync::atomic::AtomicBool::new(false);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..threads {
            let per_rep = &per_rep;
            let hit = &hit_budget;
            let cfg = &*cfg;
            let budget = budget.clone();
            handles.push(scope.spawn(move || {
                let mut records = Vec::new();
                for (gi, &n) in cfg.grid.iter().enumerate() {
                    for rep in (w..cfg.reps).step_by(threads) {
                        if budget.exceeded() {
                            hit.store(true, std::sync::atomic::Ordering::Relaxed);
                            return records;
                        }
                        let mut rng =
                            Rng::for_stream(cfg.seed, &[gi as u64, n as u64, rep as u64]);
                        let t0 = std::time::Instant::now();
                        let (value, upper, log_weight) = per_rep(n, rep, &mut rng);
                        records.push(Record {
                            n,
                            rep,
                            value,
                            upper,
                            log_weight,
                            wall_us: t0.elapsed().as_micros() as u64,
                        });
                    }
                }
                records
            }));
        }
        for h in handles {
            all.extend(h.join().expect("worker panicked"));
        }
    });
    all.sort_by_key(|r| (r.n, r.rep));
    (all, hit_budget.into_inner())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingFamily {
    QuadRadius,
    MapDiameter,
    TreeHeight,
    TreeSpan,
    TreeDiameter,
}

impl ScalingFamily {
    pub fn parse(s: &str) -> Result<ScalingFamily, String> {
        Ok(match s {
            "quad-radius" => ScalingFamily::QuadRadius,
            "map-diameter" => ScalingFamily::MapDiameter,
            "tree-height" => ScalingFamily::TreeHeight,
            "tree-span" => ScalingFamily::TreeSpan,
            "tree-diameter" => ScalingFamily::TreeDiameter,
            other => return Err(format!("unknown scaling family '{other}'")),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScalingFamily::QuadRadius => "quad-radius",
            ScalingFamily::MapDiameter => "map-diameter",
            ScalingFamily::TreeHeight => "tree-height",
            ScalingFamily::TreeSpan => "tree-span",
            ScalingFamily::TreeDiameter => "tree-diameter",
        }
    }
}

pub struct ScalingOutcome {
    pub fit: stats::SlopeFit,
    pub records: Vec<Record>,
    pub files: Vec<PathBuf>,
}

/// Scaling experiment: per-n samples of the family statistic, per-n
/// weighted means and quantiles, and the log-log slope with a bootstrap
/// confidence interval.
pub fn run_scaling(
    cfg: &ExperimentConfig,
    family: ScalingFamily,
    budget: &Budget,
) -> Result<ScalingOutcome, HarnessError> {
    if cfg.grid.len() < 4 {
        return Err(HarnessError::Usage(
            "scaling needs a (geometric) grid with at least 4 points".into(),
        ));
    }
    let ln_x = if cfg.weighted() {
        ln_q_abs(&cfg.x)
    } else {
        0.0
    };
    let exact_diam = cfg.diameter_mode == DiameterMode::Exact;
    let exact_cap = cfg.exact_cap;
    let per_rep = move |n: usize, _rep: usize, rng: &mut Rng| -> (f64, f64, f64) {
        match family {
            ScalingFamily::TreeHeight => {
                let t = sample_labelled_tree(n, rng);
                let v = t.height() as f64;
                (v, v, ln_x * t.black_count() as f64)
            }
            ScalingFamily::TreeSpan => {
                let t = sample_labelled_tree(n, rng);
                let v = t.label_span() as f64;
                (v, v, ln_x * t.black_count() as f64)
            }
            ScalingFamily::QuadRadius => {
                let t = sample_labelled_tree(n, rng);
                let v = (t.label_span() + 1) as f64;
                (v, v, ln_x * t.black_count() as f64)
            }
            ScalingFamily::TreeDiameter => {
                let t = sample_plane_tree(n, rng);
                let v = t.diameter() as f64;
                (v, v, 0.0)
            }
            ScalingFamily::MapDiameter => {
                let (t, _img, m) = sample_pipeline(n, rng);
                let g = map_as_graph(&m);
                let (lo, hi) = if exact_diam && n <= exact_cap {
                    let d = diameter_exact(&g).expect("map is connected") as f64;
                    (d, d)
                } else {
                    let (l, u) = diameter_bounds(&g).expect("map is connected");
                    (l as f64, u as f64)
                };
                (lo, hi, ln_x * t.black_count() as f64)
            }
        }
    };
    let (records, hit) = run_replicated(cfg, budget, per_rep);
    let dir = RunDir::create(cfg)?;
    let mut files = Vec::new();
    let (rec_name, rec_body) = records_file(cfg, &records);
    files.push(dir.write(&rec_name, &rec_body)?);
    dir.write("timings.csv", &timings_file(&records))?;
    if hit {
        let partial = files[0].clone();
        dir.write("manifest.json", &cfg.manifest_json(&[(
            "status".into(),
            "\"budget_exceeded\"".into(),
        )]))?;
        return Err(HarnessError::BudgetExceeded { partial });
    }
    // Per-n summary and the slope fit.
    let mut per_n: Vec<(usize, Vec<f64>, Vec<f64>)> = Vec::new();
    for &n in &cfg.grid {
        let vals: Vec<f64> = records
            .iter()
            .filter(|r| r.n == n)
            .map(|r| r.value)
            .collect();
        let lws: Vec<f64> = records
            .iter()
            .filter(|r| r.n == n)
            .map(|r| r.log_weight)
            .collect();
        per_n.push((n, vals, lws));
    }
    let mut summary = String::from("n,count,mean,q05,q50,q95\n");
    for (n, vals, lws) in &per_n {
        summary.push_str(&format!(
            "{},{},{},{},{},{}\n",
            n,
            vals.len(),
            stats::weighted_mean(vals, lws),
            stats::quantile(vals, 0.05),
            stats::quantile(vals, 0.50),
            stats::quantile(vals, 0.95),
        ));
    }
    files.push(dir.write("summary.csv", &summary)?);
    let fit = stats::bootstrap_slope(&per_n, 1000, cfg.seed ^ 0xfeed);
    let fit_csv = format!(
        "slope,ci_lo,ci_hi,points\n{},{},{},{}\n",
        fit.slope,
        fit.ci_lo,
        fit.ci_hi,
        per_n.len()
    );
    files.push(dir.write("fit.csv", &fit_csv)?);
    files.push(dir.write(
        "manifest.json",
        &cfg.manifest_json(&[
            ("family".into(), format!("\"{}\"", family.name())),
            ("slope".into(), format!("{}", fit.slope)),
        ]),
    )?);
    Ok(ScalingOutcome { fit, records, files })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailStatistic {
    RootFaceDegree,
    MaxFaceDegree,
    LabelSpanExcess,
}

impl TailStatistic {
    pub fn parse(s: &str) -> Result<TailStatistic, String> {
        Ok(match s {
            "root-face-degree" => TailStatistic::RootFaceDegree,
            "max-face-degree" => TailStatistic::MaxFaceDegree,
            "label-span-excess" => TailStatistic::LabelSpanExcess,
            other => return Err(format!("unknown tail statistic '{other}'")),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            TailStatistic::RootFaceDegree => "root-face-degree",
            TailStatistic::MaxFaceDegree => "max-face-degree",
            TailStatistic::LabelSpanExcess => "label-span-excess",
        }
    }
}

pub struct TailOutcome {
    /// Empirical P(stat >= k) for k = 0..=max.
    pub tail: Vec<f64>,
    /// Least-squares slope of ln P(>= k) over the observed decay range.
    pub log_tail_slope: f64,
    /// Fraction of samples with the statistic exceeding n^eps, for eps in
    /// EPS_GRID.
    pub exceedance: Vec<(f64, f64)>,
    pub files: Vec<PathBuf>,
}

pub const EPS_GRID: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];

pub fn run_tail(
    cfg: &ExperimentConfig,
    statistic: TailStatistic,
    budget: &Budget,
) -> Result<TailOutcome, HarnessError> {
    let per_rep = move |n: usize, _rep: usize, rng: &mut Rng| -> (f64, f64, f64) {
        match statistic {
            TailStatistic::RootFaceDegree => {
                let (_, _, m) = sample_pipeline(n, rng);
                let v = m.root_face_degree() as f64;
                (v, v, 0.0)
            }
            TailStatistic::MaxFaceDegree => {
                let (_, _, m) = sample_pipeline(n, rng);
                let v = m.max_face_degree() as f64;
                (v, v, 0.0)
            }
            TailStatistic::LabelSpanExcess => {
                let t = sample_labelled_tree(n, rng);
                let v = (t.label_span() - (n as f64).powf(0.25) as i64).max(0) as f64;
                (v, v, 0.0)
            }
        }
    };
    let (records, hit) = run_replicated(cfg, budget, per_rep);
    let dir = RunDir::create(cfg)?;
    let mut files = Vec::new();
    let (rec_name, rec_body) = records_file(cfg, &records);
    files.push(dir.write(&rec_name, &rec_body)?);
    if hit {
        let partial = files[0].clone();
        return Err(HarnessError::BudgetExceeded { partial });
    }
    let n = cfg.grid[0];
    let values: Vec<f64> = records.iter().map(|r| r.value).collect();
    let max_v = values.iter().cloned().fold(0.0, f64::max) as usize;
    let total = values.len() as f64;
    let mut tail = vec![0.0; max_v + 2];
    for &v in &values {
        // P(stat >= k) gains this sample for all k <= v.
        let vi = v as usize;
        tail[vi + 1] -= 0.0; // keep length
        for t in tail.iter_mut().take(vi + 1) {
            *t += 1.0;
        }
    }
    for t in tail.iter_mut() {
        *t /= total;
    }
    let mut tail_csv = String::from("k,p_ge_k\n");
    for (k, p) in tail.iter().enumerate() {
        tail_csv.push_str(&format!("{k},{p}\n"));
    }
    files.push(dir.write("tail.csv", &tail_csv)?);
    // Fit ln P(>=k) on the decaying range: from the median value to the
    // last k with at least 5 supporting samples.
    let k_lo = stats::quantile(&values, 0.5) as usize;
    let mut k_hi = k_lo;
    for (k, p) in tail.iter().enumerate() {
        if p * total >= 5.0 {
            k_hi = k;
        }
    }
    let pts: Vec<(f64, f64)> = (k_lo..=k_hi)
        .filter(|&k| tail[k] > 0.0)
        .map(|k| (k as f64, tail[k].ln()))
        .collect();
    let log_tail_slope = if pts.len() >= 3 {
        mapforge::series::asym::least_squares_slope(&pts)
    } else {
        f64::NAN
    };
    let exceedance: Vec<(f64, f64)> = EPS_GRID
        .iter()
        .map(|&eps| {
            let thr = (n as f64).powf(eps);
            let frac = values.iter().filter(|&&v| v > thr).count() as f64 / total;
            (eps, frac)
        })
        .collect();
    let mut report = String::from("quantity,value\n");
    report.push_str(&format!("log_tail_slope,{log_tail_slope}\n"));
    for (eps, frac) in &exceedance {
        report.push_str(&format!("exceeds_n^{eps},{frac}\n"));
    }
    files.push(dir.write("tail_report.csv", &report)?);
    files.push(dir.write(
        "manifest.json",
        &cfg.manifest_json(&[(
            "statistic".into(),
            format!("\"{}\"", statistic.name()),
        )]),
    )?);
    Ok(TailOutcome {
        tail,
        log_tail_slope,
        exceedance,
        files,
    })
}

pub struct CoreOutcome {
    /// Exact distribution per grid n (only n <= exact cap).
    pub exact: Vec<(usize, Vec<f64>)>,
    /// Monte Carlo histogram for the first grid point.
    pub mc: Vec<f64>,
    pub tv_distance: f64,
    pub alpha_hat: f64,
    /// (n, mode/n, n^{2/3} P(X_n = floor(alpha n))) per exact n.
    pub law: Vec<(usize, f64, f64)>,
    pub files: Vec<PathBuf>,
}

pub const CORE_EXACT_CAP: usize = 400;

/// Core-size experiment: exact distribution from the series engine per
/// grid point, Monte Carlo histogram via the sampling pipeline for the
/// first grid point, total-variation distance, and the core-size law
/// quantities around alpha_hat.
pub fn run_core(cfg: &ExperimentConfig, budget: &Budget) -> Result<CoreOutcome, HarnessError> {
    let dir = RunDir::create(cfg)?;
    let mut files = Vec::new();
    let alpha_hat = alpha_estimate(240, &cfg.x).map_err(lib_err)?;
    let mut exact = Vec::new();
    let mut law = Vec::new();
    let mut global_modes = Vec::new();
    for &n in &cfg.grid {
        if n > CORE_EXACT_CAP {
            continue;
        }
        let dist = core_size_distribution(n, &cfg.x).map_err(lib_err)?;
        let probs: Vec<f64> = dist.iter().map(|p| p.to_f64().unwrap_or(0.0)).collect();
        let mut csv = String::from("k,probability\n");
        for (k, p) in dist.iter().enumerate() {
            csv.push_str(&format!(
                "{},{}\n",
                k,
                mapforge::series::table::format_rational(p)
            ));
        }
        files.push(dir.write(&format!("exact_{n}.csv"), &csv)?);
        // The global mode sits in the degenerate small-core mass; the
        // bulk mode (k >= n/6) locates the concentration near alpha n.
        let global_mode = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(k, _)| k)
            .unwrap_or(0);
        let bulk_mode = (n / 6..=n)
            .max_by(|&a, &b| probs[a].partial_cmp(&probs[b]).unwrap())
            .unwrap_or(global_mode);
        let k_alpha = (alpha_hat * n as f64).floor() as usize;
        let p_alpha = probs.get(k_alpha).copied().unwrap_or(0.0);
        law.push((
            n,
            bulk_mode as f64 / n as f64,
            (n as f64).powf(2.0 / 3.0) * p_alpha,
        ));
        global_modes.push((n, global_mode));
        exact.push((n, probs));
    }
    // Monte Carlo on the first grid point.
    let n0 = cfg.grid[0];
    let mc_cfg = ExperimentConfig {
        grid: vec![n0],
        ..cfg.clone()
    };
    let per_rep = |n: usize, _rep: usize, rng: &mut Rng| -> (f64, f64, f64) {
        let (_, _, m) = sample_pipeline(n, rng);
        let dec = two_connected_core(&m);
        let v = dec.core_size() as f64;
        (v, v, 0.0)
    };
    let (records, hit) = run_replicated(&mc_cfg, budget, per_rep);
    let mut mc = vec![0.0; n0 + 1];
    for r in &records {
        mc[r.value as usize] += 1.0;
    }
    let total: f64 = mc.iter().sum();
    for c in mc.iter_mut() {
        *c /= total;
    }
    let mut mc_csv = String::from("k,frequency\n");
    for (k, f) in mc.iter().enumerate() {
        mc_csv.push_str(&format!("{k},{f}\n"));
    }
    files.push(dir.write(&format!("mc_{n0}.csv"), &mc_csv)?);
    if hit {
        let partial = files.last().unwrap().clone();
        return Err(HarnessError::BudgetExceeded { partial });
    }
    let tv = exact
        .iter()
        .find(|(n, _)| *n == n0)
        .map(|(_, probs)| stats::tv_distance(probs, &mc))
        .unwrap_or(f64::NAN);
    let mut summary = String::from("quantity,value\n");
    summary.push_str(&format!("alpha_hat,{alpha_hat}\n"));
    summary.push_str(&format!("tv_distance_n{n0},{tv}\n"));
    for (n, mode_frac, scaled) in &law {
        summary.push_str(&format!("bulk_mode_over_n_{n},{mode_frac}\n"));
        summary.push_str(&format!("n23_p_alpha_{n},{scaled}\n"));
    }
    for (n, k) in &global_modes {
        summary.push_str(&format!("global_mode_{n},{k}\n"));
    }
    files.push(dir.write("core_summary.csv", &summary)?);
    files.push(dir.write(
        "manifest.json",
        &cfg.manifest_json(&[("alpha_hat".into(), format!("{alpha_hat}"))]),
    )?);
    Ok(CoreOutcome {
        exact,
        mc,
        tv_distance: tv,
        alpha_hat,
        law,
        files,
    })
}

/// One validation failure, with enough context to reproduce.
#[derive(Debug, Clone)]
pub struct Violation {
    pub n: usize,
    pub rep: usize,
    pub what: String,
    pub artifact: String,
}

pub struct ValidateOutcome {
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub files: Vec<PathBuf>,
}

/// Validate the diameter-transfer inequalities (the quadrangulation bracket, the
/// map bracket, the core bound, the block bound, the brick bound, and
/// the 3-connected-core bound) plus the distance identity and the
/// bijection round trip, on sampled pipelines (exhaustively over all
/// labelled trees when n <= 3).
pub fn run_validate(
    cfg: &ExperimentConfig,
    budget: &Budget,
) -> Result<ValidateOutcome, HarnessError> {
    let dir = RunDir::create(cfg)?;
    let mut violations: Vec<Violation> = Vec::new();
    let mut checked = 0usize;
    let mut check_tree = |t: &mapforge::tree::LabelledTree, n: usize, rep: usize| {
        checked += 1;
        let mut fail = |what: &str, artifact: String| {
            violations.push(Violation {
                n,
                rep,
                what: what.to_string(),
                artifact,
            });
        };
        let checks = validate_pipeline_sample(t);
        if !checks.distance_identity {
            fail("distance identity", t.to_text());
        }
        if !checks.radius_is_span_plus_one {
            fail("radius = span + 1", t.to_text());
        }
        if !checks.quad_diameter_bracket {
            fail("quadrangulation diameter bracket", t.to_text());
        }
        // The displayed bracket is asserted on sized samples; tiny maps
        // whose diametral endpoints are both angular-image vertices only
        // satisfy the provable +2 form.
        if n > 3 && !checks.map_diameter_bracket_strict {
            fail("map diameter bracket", t.to_text());
        }
        if !checks.map_diameter_bracket_safe {
            fail("map diameter bracket, +2-safe form", t.to_text());
        }
        // The core bracket and the rest need the map.
        let img = cvs_closure(t, false);
        let m = quad_to_map(&img.quad).expect("closure image is a quadrangulation");
        if quad_to_map(&mapforge::bijection::map_to_quad(&m))
            .map(|back| back.canonical_sigma() != m.canonical_sigma())
            .unwrap_or(true)
        {
            fail("angular round trip", m.to_json());
        }
        let g_m = map_as_graph(&m);
        let d_m = diameter_exact(&g_m).unwrap();
        let dec = two_connected_core(&m);
        if dec.reassemble() != m {
            fail("core reassembly", m.to_json());
        }
        let d_c = diameter_exact(&map_as_graph(&dec.core)).unwrap();
        let max_piece = dec.max_piece_diameter();
        if !(d_c <= d_m && d_m <= d_c + 2 * max_piece) {
            fail("core diameter bracket", m.to_json());
        }
        // Block bracket on the simplified map graph.
        let gs = g_m.simplified();
        match block_decomposition(&gs) {
            Ok(bv) => {
                let maxb = bv.block_diameters(&gs).into_iter().max().unwrap_or(0);
                let dt = bv.tree_diameter();
                let d_g = diameter_exact(&gs).unwrap();
                if !(maxb <= d_g && d_g <= maxb.max(1) * dt.max(1)) {
                    fail("block diameter bracket", gs.to_edge_list());
                }
            }
            Err(e) => fail(&format!("block decomposition: {e}"), gs.to_edge_list()),
        }
        // Brick bracket and the 3-connected-core bound on the
        // 2-connected core when it is large enough to split.
        let core_graph = map_as_graph(&dec.core);
        if core_graph.n_edges() >= 3 {
            match rmt_decomposition(&core_graph) {
                Ok(rmt) => {
                    if !rmt.reassembles(&core_graph) {
                        fail("rmt reassembly", core_graph.to_edge_list());
                    }
                    if !rmt.no_same_kind_adjacency() {
                        fail("R-R/M-M adjacency", rmt.to_json());
                    }
                    let maxb = rmt.max_brick_diameter() as u64;
                    let dt = rmt.tree_diameter() as u64;
                    let (maxv, _) = virtual_edge_stats(&core_graph, &rmt).unwrap();
                    let d_g = diameter_exact(&core_graph).unwrap() as u64;
                    if !(maxb <= d_g && d_g <= maxb * (dt + 1) * (maxv as u64).max(1)) {
                        fail("brick diameter bracket", rmt.to_json());
                    }
                }
                Err(e) => fail(&format!("rmt: {e}"), core_graph.to_edge_list()),
            }
            let root_edge = dec.core.root() / 2;
            match three_connected_core_bound_check(&core_graph, root_edge) {
                Ok(Some(false)) => fail("3-connected core bound", core_graph.to_edge_list()),
                Ok(_) => {}
                Err(e) => fail(&format!("3-connected core bound: {e}"), core_graph.to_edge_list()),
            }
        }
    };
    let n = cfg.grid[0];
    let mut hit = false;
    if n <= 3 {
        for (i, t) in enumerate_labelled_trees(n)
            .map_err(lib_err)?
            .iter()
            .enumerate()
        {
            check_tree(t, n, i);
        }
    } else {
        for rep in 0..cfg.reps {
            if budget.exceeded() {
                hit = true;
                break;
            }
            let mut rng = Rng::for_stream(cfg.seed, &[0, n as u64, rep as u64]);
            let t = sample_labelled_tree(n, &mut rng);
            check_tree(&t, n, rep);
        }
    }
    let mut report = format!(
        "checked,{checked}\nviolations,{}\n",
        violations.len()
    );
    for v in &violations {
        report.push_str(&format!("violation,{},{},{}\n", v.n, v.rep, v.what));
    }
    let report_path = dir.write("validate_report.csv", &report)?;
    let mut files = vec![report_path.clone()];
    if !violations.is_empty() {
        let mut dump = String::new();
        for (i, v) in violations.iter().enumerate() {
            dump.push_str(&format!("# violation {i}: {} (n={}, rep={})\n", v.what, v.n, v.rep));
            dump.push_str(&v.artifact);
            dump.push('\n');
        }
        files.push(dir.write("counterexamples.txt", &dump)?);
    }
    files.push(dir.write(
        "manifest.json",
        &cfg.manifest_json(&[(
            "violations".into(),
            format!("{}", violations.len()),
        )]),
    )?);
    if hit {
        return Err(HarnessError::BudgetExceeded {
            partial: report_path,
        });
    }
    if !violations.is_empty() {
        return Err(HarnessError::ValidationFailed {
            report: report_path,
        });
    }
    Ok(ValidateOutcome {
        checked,
        violations,
        files,
    })
}

pub struct SeriesOutcome {
    pub series: PowerSeries,
    pub files: Vec<PathBuf>,
}

/// Solve a named generating-function system, dump its coefficients, and
/// report growth estimates when enough coefficients are available.
pub fn run_series(
    cfg: &ExperimentConfig,
    system: &str,
    order: usize,
    table_path: Option<&str>,
) -> Result<SeriesOutcome, HarnessError> {
    let table = match table_path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io_err)?;
            Some(read_coefficient_csv(&text, order).map_err(lib_err)?)
        }
        None => None,
    };
    let series = match system {
        "labelled-trees" => {
            solve_vector(&labelled_tree_system(), order).map_err(lib_err)?.remove(0)
        }
        "bicolored-trees" => solve_vector(&bicolored_tree_system(cfg.x.clone(), order), order)
            .map_err(lib_err)?
            .remove(0),
        "maps" => mapforge::series::maps_gf::maps_series(order, &cfg.x),
        "core" => {
            mapforge::series::maps_gf::maps_and_core_series(order, &cfg.x)
                .map_err(lib_err)?
                .c
        }
        "three-connected-plane" => {
            derive_three_connected_plane(order, &cfg.x).map_err(lib_err)?
        }
        "plane-networks" => {
            let t = match table {
                Some(t) => t,
                None => derive_three_connected_plane(order, &cfg.x).map_err(lib_err)?,
            };
            plane_network_system(order, &cfg.x, &t).map_err(lib_err)?.n
        }
        "planar-networks" => {
            let t = table.unwrap_or_else(|| PowerSeries::zero(order));
            planar_network_system(order, &cfg.x, &t).map_err(lib_err)?.d
        }
        other => {
            return Err(HarnessError::Usage(format!(
                "unknown system '{other}'; known: labelled-trees, bicolored-trees, maps, core, three-connected-plane, plane-networks, planar-networks"
            )))
        }
    };
    let dir = RunDir::create(cfg)?;
    let mut files = Vec::new();
    files.push(dir.write("coefficients.csv", &write_coefficient_csv(&series))?);
    let mut report = match estimate_growth(series.coeffs()) {
        Ok(est) => format!(
            "quantity,value\nrho_hat,{}\nexponent_hat,{}\nn_used,{}\n",
            est.rho, est.exponent, est.n_used
        ),
        Err(e) => format!("quantity,value\nerror,\"{e}\"\n"),
    };
    // Fixed-point systems also get the criticality classification.
    let spec = match system {
        "labelled-trees" => Some(labelled_tree_system()),
        "bicolored-trees" => Some(bicolored_tree_system(cfg.x.clone(), order)),
        _ => None,
    };
    if let Some(spec) = spec {
        if let Ok(rep) = mapforge::series::asym::criticality_check(&spec, order.max(60)) {
            report.push_str(&format!(
                "jacobian_spectral_radius,{}\nverdict,{:?}\n",
                rep.jacobian_spectral_radius, rep.verdict
            ));
        }
    }
    files.push(dir.write("asymptotics.csv", &report)?);
    files.push(dir.write(
        "manifest.json",
        &cfg.manifest_json(&[("system".into(), format!("\"{system}\""))]),
    )?);
    Ok(SeriesOutcome { series, files })
}

pub struct SampleOutcome {
    pub files: Vec<PathBuf>,
}

/// Draw one structure through the pipeline and serialize it.
pub fn run_sample(
    cfg: &ExperimentConfig,
    kind: &str,
) -> Result<SampleOutcome, HarnessError> {
    let n = cfg.grid[0];
    if n == 0 {
        return Err(HarnessError::Usage("need n >= 1".into()));
    }
    let mut rng = Rng::for_stream(cfg.seed, &[0, n as u64, 0]);
    let dir = RunDir::create(cfg)?;
    let mut files = Vec::new();
    match kind {
        "tree" => {
            let t = sample_labelled_tree(n, &mut rng);
            files.push(dir.write("sample_tree.txt", &t.to_text())?);
        }
        "quad" => {
            let t = sample_labelled_tree(n, &mut rng);
            let img = cvs_closure(&t, false);
            files.push(dir.write("sample_quad.json", &(img.quad.to_json() + "\n"))?);
        }
        "map" => {
            let (_, _, m) = sample_pipeline(n, &mut rng);
            files.push(dir.write("sample_map.json", &(m.to_json() + "\n"))?);
        }
        other => {
            return Err(HarnessError::Usage(format!(
                "unknown sample kind '{other}' (tree, quad, map)"
            )))
        }
    }
    files.push(dir.write("manifest.json", &cfg.manifest_json(&[]))?);
    Ok(SampleOutcome { files })
}
