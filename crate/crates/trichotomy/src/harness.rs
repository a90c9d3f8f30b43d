//! Experiment orchestration: declarative experiment specs, Monte-Carlo
//! learning curves with exact per-seed error evaluation, least-squares rate
//! fitting, structural trichotomy verdicts, and CSV/JSON-friendly records.
//!
//! Reproducibility contract: an identical [`ExperimentSpec`] (including
//! `root_seed`) produces a bit-identical [`LearningCurve`] and hence
//! bit-identical output files.  Per-draw seeds come from a counter-based
//! derivation ([`derive_seed`]) keyed on `(root_seed, n, seed_index)` alone,
//! so enlarging the seed count or the grid extends earlier results without
//! reshuffling them.  Seeds are evaluated in parallel and reduced in index
//! order, so the thread count never changes a result.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::classes::{ClassSpec, ConceptClass, DimResult};
use crate::distributions::{
    build_slow_schedule, erm_failure_fixture, exact_error, exp_lower_bound_pair,
    littlestone_adversary_dist, sample, uniform_realizable, vcl_adversary_dist,
    weighted_realizable, RateFn, RealizableDistribution,
};
use crate::learners::{
    adversarial_erm, erm_learner, exp_learner, lin_learner, online_as_batch, Classifier, Sample,
};
use crate::trees::{
    find_littlestone_tree, find_vcl_tree, littlestone_dimension, vcl_dimension, SearchBudget,
};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Experiment specification
// ---------------------------------------------------------------------------

/// The trainable learners, by config-file name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerName {
    /// Batched online predictors with a validated batch size, majority vote.
    Exp,
    /// Pattern avoiders feeding one-inclusion predictors, majority vote.
    Lin,
    /// First consistent hypothesis in canonical order.
    Erm,
    /// The deliberately bad ERM of the majority-blocks family (needs the
    /// scheduled-blocks distribution for its block schedule).
    AdversarialErm,
    /// The online learner run over the sample as a stream, then tabulated.
    OnlineAsBatch,
}

impl LearnerName {
    /// The config-file spelling.
    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            LearnerName::Exp => "exp",
            LearnerName::Lin => "lin",
            LearnerName::Erm => "erm",
            LearnerName::AdversarialErm => "adversarial_erm",
            LearnerName::OnlineAsBatch => "online_as_batch",
        }
    }
}

/// How the target hypothesis of a uniform realizable distribution is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSpec {
    /// One fixed hypothesis index (canonical row order).
    Fixed(usize),
    /// Seed `s` targets hypothesis `s mod |class|`, so a multi-seed run
    /// averages over targets instead of privileging one.
    PerSeed,
}

/// Declarative data-distribution specification (config-file schema; `kind`
/// selects the variant).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistSpec {
    /// Uniform mass over the domain, labeled by a class hypothesis.
    UniformRealizable {
        /// Which hypothesis labels the data.
        target: TargetSpec,
    },
    /// Explicit per-point masses, labeled by a class hypothesis given as a
    /// bitstring; zero-weight points are dropped from the support.
    WeightedRealizable {
        /// Target hypothesis as a `0`/`1` string over the domain.
        target_bits: String,
        /// One weight per domain point, summing to 1.
        weights: Vec<f64>,
    },
    /// One of the two half-half lower-bound distributions built from the
    /// first agreeing-then-disagreeing hypothesis pair of the class.
    ExpPair {
        /// Which of the two distributions (0 or 1).
        which: u8,
    },
    /// Branch distribution on a deepest-found Littlestone tree of the
    /// class; the branch is given by its labels (length = tree depth).
    LittlestoneBranch {
        /// Branch labels, root first.
        labels: Vec<u8>,
    },
    /// Branch distribution on a searched VCL tree of the class, with masses
    /// from the slow-rate schedule for `rate` truncated at `i_max`.
    VclBranch {
        /// The rate whose schedule drives the masses.
        rate: RateFn,
        /// Schedule truncation.
        i_max: usize,
        /// Branch pattern words, one per tree level (word `j < 2^{j+1}`).
        patterns: Vec<u32>,
    },
    /// The scheduled-blocks distribution on which the adversarial ERM
    /// stalls; fixes the class to the fixture's majority-blocks class.
    ErmFailure {
        /// The rate being forced.
        rate: RateFn,
        /// Number of scheduled steps.
        t_max: usize,
    },
}

/// A complete, reproducible experiment description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Concept class to learn.
    pub class: ClassSpec,
    /// Data distribution.
    pub dist: DistSpec,
    /// Which learner to train.
    pub learner: LearnerName,
    /// Sample sizes, strictly increasing, all ≥ 1.
    pub n_grid: Vec<usize>,
    /// Monte-Carlo repetitions per grid point (≥ 1).
    pub seeds: usize,
    /// Root seed for the counter-based per-draw derivation.
    #[serde(default)]
    pub root_seed: u64,
    /// Optional output path hint for CLI consumers (the library never
    /// writes files itself).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl ExperimentSpec {
    /// Structural validation of grid and seed count.
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::Config("experiment needs a nonempty n grid".into()));
        }
        if self.n_grid[0] == 0 {
            return Err(Error::Config("sample sizes must be >= 1".into()));
        }
        for pair in self.n_grid.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::Config(format!(
                    "n grid must increase strictly: {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        if self.seeds == 0 {
            return Err(Error::Config("experiment needs at least one seed".into()));
        }
        Ok(())
    }

    /// Parse a TOML experiment description.
    pub fn from_toml(text: &str) -> Result<ExperimentSpec> {
        let spec: ExperimentSpec =
            toml::from_str(text).map_err(|e| Error::Config(format!("bad experiment spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Serialize back to TOML.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("unserializable experiment spec: {e}")))
    }
}

// ---------------------------------------------------------------------------
// Seed derivation
// ---------------------------------------------------------------------------

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based per-draw seed: three chained splitmix64 rounds over
/// `(root_seed, n, seed_index)`.  Depends on nothing else — in particular
/// not on the grid shape or the total seed count — so extending an
/// experiment reuses all previously drawn samples verbatim.
#[must_use]
pub fn derive_seed(root_seed: u64, n: u64, seed_index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(root_seed) ^ n) ^ seed_index)
}

// ---------------------------------------------------------------------------
// Learning curves
// ---------------------------------------------------------------------------

/// Aggregated Monte-Carlo results at one sample size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Sample size.
    pub n: usize,
    /// Mean exact error over the seeds.
    pub mean_err: f64,
    /// Fraction of seeds with strictly positive error.
    pub p_nonzero: f64,
    /// Standard error of the mean: sample standard deviation / √seeds
    /// (0 for a single seed).
    pub stderr: f64,
    /// Number of seeds aggregated.
    pub seeds: usize,
}

/// A learning curve: one [`CurvePoint`] per grid entry, in grid order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    /// Per-n aggregates.
    pub points: Vec<CurvePoint>,
}

impl LearningCurve {
    /// CSV rendering with the fixed header
    /// `n,mean_err,p_nonzero,stderr,seeds`.  `f64` values use Rust's
    /// shortest-roundtrip formatting, so equal curves render identically.
    #[must_use]
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,mean_err,p_nonzero,stderr,seeds\n");
        for p in &self.points {
            writeln!(out, "{},{},{},{},{}", p.n, p.mean_err, p.p_nonzero, p.stderr, p.seeds)
                .expect("string writes are infallible");
        }
        out
    }

    /// Parse the CSV format written by [`LearningCurve::to_csv`] (header
    /// required, shortest-roundtrip floats, so `to_csv` then `from_csv` is
    /// the identity).
    pub fn from_csv(text: &str) -> Result<LearningCurve> {
        let mut lines = text.lines();
        let header = lines.next().map(str::trim);
        if header != Some("n,mean_err,p_nonzero,stderr,seeds") {
            return Err(Error::Config(format!(
                "curve CSV must start with the header 'n,mean_err,p_nonzero,stderr,seeds', \
                 got {header:?}"
            )));
        }
        let mut points = Vec::new();
        for (number, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::Config(format!(
                    "curve CSV row {} has {} fields, expected 5",
                    number + 2,
                    fields.len()
                )));
            }
            let bad = |what: &str| {
                Error::Config(format!("curve CSV row {}: unparsable {what}", number + 2))
            };
            points.push(CurvePoint {
                n: fields[0].parse().map_err(|_| bad("n"))?,
                mean_err: fields[1].parse().map_err(|_| bad("mean_err"))?,
                p_nonzero: fields[2].parse().map_err(|_| bad("p_nonzero"))?,
                stderr: fields[3].parse().map_err(|_| bad("stderr"))?,
                seeds: fields[4].parse().map_err(|_| bad("seeds"))?,
            });
        }
        if points.is_empty() {
            return Err(Error::Config("curve CSV has no data rows".into()));
        }
        Ok(LearningCurve { points })
    }
}

/// The distribution plan a spec resolves to: either one fixed distribution
/// shared by every seed, or a per-seed rebuild.
enum DistPlan {
    Fixed(RealizableDistribution),
    PerSeedUniform { row_count: usize },
}

struct Prepared {
    class: ConceptClass,
    plan: DistPlan,
    /// Scheduled block levels, present exactly for the scheduled-blocks
    /// distribution (the adversarial ERM's schedule).
    schedule: Option<Vec<u32>>,
}

fn prepare(spec: &ExperimentSpec) -> Result<Prepared> {
    if spec.learner == LearnerName::AdversarialErm
        && !matches!(spec.dist, DistSpec::ErmFailure { .. })
    {
        return Err(Error::Construction(
            "the adversarial ERM needs the scheduled-blocks distribution for its block schedule"
                .into(),
        ));
    }
    let class = ConceptClass::generate(&spec.class)?;
    let mut schedule = None;
    let plan = match &spec.dist {
        DistSpec::UniformRealizable { target: TargetSpec::Fixed(index) } => {
            DistPlan::Fixed(uniform_realizable(&class, *index)?)
        }
        DistSpec::UniformRealizable { target: TargetSpec::PerSeed } => {
            DistPlan::PerSeedUniform { row_count: class.rows()?.len() }
        }
        DistSpec::WeightedRealizable { target_bits, weights } => {
            let target = BitRow::parse(target_bits)?;
            DistPlan::Fixed(weighted_realizable(&class, &target, weights)?)
        }
        DistSpec::ExpPair { which } => {
            let (p0, p1) = exp_lower_bound_pair(&class)?;
            DistPlan::Fixed(match which {
                0 => p0,
                1 => p1,
                other => {
                    return Err(Error::Config(format!(
                        "the lower-bound pair has members 0 and 1, not {other}"
                    )))
                }
            })
        }
        DistSpec::LittlestoneBranch { labels } => {
            let depth = u32::try_from(labels.len())
                .map_err(|_| Error::Config("branch implausibly long".into()))?;
            let tree = find_littlestone_tree(&class, depth)?.ok_or_else(|| {
                Error::Construction(format!("the class has no witness tree of depth {depth}"))
            })?;
            DistPlan::Fixed(littlestone_adversary_dist(&tree, labels)?)
        }
        DistSpec::VclBranch { rate, i_max, patterns } => {
            let sched = build_slow_schedule(rate, *i_max)?;
            let k_max = sched
                .k_seq()
                .last()
                .expect("schedules are nonempty")
                .to_u128()
                .and_then(|v| u32::try_from(v).ok())
                .ok_or_else(|| {
                    Error::Construction(
                        "the schedule's deepest arity exceeds any searchable tree depth".into(),
                    )
                })?;
            let tree = find_vcl_tree(&class, k_max, &SearchBudget::default())?.ok_or_else(
                || Error::Construction(format!("the class has no VCL tree of depth {k_max}")),
            )?;
            DistPlan::Fixed(vcl_adversary_dist(&tree, patterns, &sched)?)
        }
        DistSpec::ErmFailure { rate, t_max } => {
            let fixture = erm_failure_fixture(rate, *t_max)?;
            if fixture.class_spec() != &spec.class {
                return Err(Error::Construction(format!(
                    "the scheduled-blocks distribution is tied to {:?}; the spec names {:?}",
                    fixture.class_spec(),
                    spec.class
                )));
            }
            schedule = Some(fixture.scheduled_levels().to_vec());
            DistPlan::Fixed(fixture.distribution().clone())
        }
    };
    Ok(Prepared { class, plan, schedule })
}

fn train(
    learner: LearnerName,
    class: &ConceptClass,
    schedule: Option<&[u32]>,
    smp: &Sample,
) -> Result<Classifier> {
    match learner {
        LearnerName::Exp => exp_learner(class, smp),
        LearnerName::Lin => lin_learner(class, smp),
        LearnerName::Erm => erm_learner(class, smp),
        LearnerName::OnlineAsBatch => online_as_batch(class, smp),
        LearnerName::AdversarialErm => {
            let schedule = schedule.ok_or_else(|| {
                Error::Construction("adversarial ERM invoked without a block schedule".into())
            })?;
            adversarial_erm(class, schedule, smp)
        }
    }
}

/// Run the experiment: for every grid size and seed, draw a sample, train
/// the learner, and evaluate its exact error; aggregate per grid size.
///
/// Deterministic given the spec (see the module docs); seeds run in
/// parallel on the current rayon pool and are reduced in index order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<LearningCurve> {
    spec.validate()?;
    let prepared = prepare(spec)?;
    let mut points = Vec::with_capacity(spec.n_grid.len());
    for &n in &spec.n_grid {
        let errs: Vec<f64> = (0..spec.seeds)
            .into_par_iter()
            .map(|seed_index| -> Result<f64> {
                let rebuilt;
                let dist = match &prepared.plan {
                    DistPlan::Fixed(dist) => dist,
                    DistPlan::PerSeedUniform { row_count } => {
                        rebuilt = uniform_realizable(&prepared.class, seed_index % row_count)?;
                        &rebuilt
                    }
                };
                let seed = derive_seed(spec.root_seed, n as u64, seed_index as u64);
                let smp = sample(dist, n, seed)?;
                let classifier =
                    train(spec.learner, &prepared.class, prepared.schedule.as_deref(), &smp)?;
                exact_error(&classifier, dist)
            })
            .collect::<Result<Vec<_>>>()?;
        let seeds_f = spec.seeds as f64;
        let mean_err = errs.iter().sum::<f64>() / seeds_f;
        let p_nonzero = errs.iter().filter(|&&e| e > 0.0).count() as f64 / seeds_f;
        let stderr = if spec.seeds >= 2 {
            let var =
                errs.iter().map(|e| (e - mean_err) * (e - mean_err)).sum::<f64>() / (seeds_f - 1.0);
            var.sqrt() / seeds_f.sqrt()
        } else {
            0.0
        };
        points.push(CurvePoint { n, mean_err, p_nonzero, stderr, seeds: spec.seeds });
    }
    Ok(LearningCurve { points })
}

/// Materialize the distribution an experiment spec resolves to, for
/// inspection (`seed_index` matters only for per-seed targets).
pub fn materialize_distribution(
    spec: &ExperimentSpec,
    seed_index: usize,
) -> Result<RealizableDistribution> {
    let prepared = prepare(spec)?;
    Ok(match prepared.plan {
        DistPlan::Fixed(dist) => dist,
        DistPlan::PerSeedUniform { row_count } => {
            uniform_realizable(&prepared.class, seed_index % row_count)?
        }
    })
}

// ---------------------------------------------------------------------------
// Rate fitting
// ---------------------------------------------------------------------------

/// Which per-n value of the curve a fit explains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveMetric {
    /// Mean exact error.
    MeanError,
    /// Probability of nonzero error.
    PNonzero,
}

impl CurveMetric {
    fn value(self, point: &CurvePoint) -> f64 {
        match self {
            CurveMetric::MeanError => point.mean_err,
            CurveMetric::PNonzero => point.p_nonzero,
        }
    }
}

/// The fitted decay family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `log y` linear in `n` (exponential decay).
    Exponential,
    /// `log y` linear in `log n` (power-law decay; slope −1 is a linear
    /// rate).
    Linear,
    /// Neither family reaches R² ≥ 0.6.
    Neither,
}

/// Result of [`fit_rate`]: the winning family and both goodness values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// Which curve value was fitted.
    pub metric: CurveMetric,
    /// Winning family (higher R²; `Neither` when both R² < 0.6).
    pub model: FitModel,
    /// Slope of the winning family's regression (per-n log slope for
    /// exponential, log-log slope for linear); from the better fit even
    /// when the verdict is `Neither`.
    pub slope: f64,
    /// Intercept of the same regression.
    pub intercept: f64,
    /// R² of the `log y` vs `n` regression.
    pub r2_exponential: f64,
    /// R² of the `log y` vs `log n` regression.
    pub r2_linear: f64,
    /// Set when the curve was identically zero: the decay is below the
    /// Monte-Carlo resolution everywhere, reported as exponential by
    /// convention with both R² pinned to 1.
    pub degenerate: bool,
    /// Number of zero cells floored at `0.5/seeds` before taking logs.
    pub floored_points: usize,
}

/// Ordinary least squares of `ys` on `xs`: `(slope, intercept, r²)`.
/// Constant inputs get the conventions `slope = 0` (constant `xs`) and
/// `r² = 0` (constant `ys`), so flat curves match no decay family.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return (0.0, my, 0.0);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 0.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r2)
}

/// Fit the curve's decay: least squares of `log y` against `n`
/// (exponential family) and against `log n` (power family), picking the
/// higher R², with verdict `Neither` when both fall below 0.6.
///
/// Zero cells are floored at `0.5/seeds` — the sub-resolution estimate —
/// before taking logs, and counted in `floored_points`.  A curve that is
/// zero *everywhere* short-circuits to a degenerate exponential verdict.
/// Needs at least 4 grid points.
pub fn fit_rate(curve: &LearningCurve, metric: CurveMetric) -> Result<RateFit> {
    let pts = &curve.points;
    if pts.len() < 4 {
        return Err(Error::Config(format!(
            "rate fitting needs at least 4 grid points, got {}",
            pts.len()
        )));
    }
    let raw: Vec<f64> = pts.iter().map(|p| metric.value(p)).collect();
    for (&v, p) in raw.iter().zip(pts) {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Config(format!("curve value {v} at n = {} is not in [0, 1]", p.n)));
        }
        if p.seeds == 0 {
            return Err(Error::Config(format!("curve point at n = {} has no seeds", p.n)));
        }
    }
    if raw.iter().all(|&v| v == 0.0) {
        let floor = 0.5 / pts.iter().map(|p| p.seeds).max().expect("nonempty") as f64;
        return Ok(RateFit {
            metric,
            model: FitModel::Exponential,
            slope: 0.0,
            intercept: floor.ln(),
            r2_exponential: 1.0,
            r2_linear: 1.0,
            degenerate: true,
            floored_points: pts.len(),
        });
    }
    let mut floored_points = 0usize;
    let ln_y: Vec<f64> = pts
        .iter()
        .zip(&raw)
        .map(|(p, &v)| {
            if v == 0.0 {
                floored_points += 1;
                (0.5 / p.seeds as f64).ln()
            } else {
                v.ln()
            }
        })
        .collect();
    let xs_exp: Vec<f64> = pts.iter().map(|p| p.n as f64).collect();
    let xs_lin: Vec<f64> = pts.iter().map(|p| (p.n as f64).ln()).collect();
    let (slope_e, icept_e, r2_e) = least_squares(&xs_exp, &ln_y);
    let (slope_l, icept_l, r2_l) = least_squares(&xs_lin, &ln_y);
    let exp_wins = r2_e >= r2_l;
    let model = if r2_e < 0.6 && r2_l < 0.6 {
        FitModel::Neither
    } else if exp_wins {
        FitModel::Exponential
    } else {
        FitModel::Linear
    };
    let (slope, intercept) = if exp_wins { (slope_e, icept_e) } else { (slope_l, icept_l) };
    Ok(RateFit {
        metric,
        model,
        slope,
        intercept,
        r2_exponential: r2_e,
        r2_linear: r2_l,
        degenerate: false,
        floored_points,
    })
}

// ---------------------------------------------------------------------------
// Trichotomy verdicts
// ---------------------------------------------------------------------------

/// The three possible optimal-rate regimes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateVerdict {
    /// Optimal rates decay exponentially.
    Exponential,
    /// Optimal rates decay like `1/n`.
    Linear,
    /// No rate function bounds the optimal curve: learning can be forced
    /// arbitrarily slow.
    ArbitrarilySlow,
}

impl RateVerdict {
    /// Human-readable name.
    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            RateVerdict::Exponential => "exponential",
            RateVerdict::Linear => "linear",
            RateVerdict::ArbitrarilySlow => "arbitrarily slow",
        }
    }
}

/// Depth caps for the verdict-evidence searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCaps {
    /// Littlestone-tree search depth cap.
    pub littlestone_cap: u32,
    /// Shattered-subset search cap for the VC dimension.
    pub vc_cap: u32,
    /// VCL-tree search depth cap.
    pub vcl_cap: u32,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { littlestone_cap: 6, vc_cap: 6, vcl_cap: 3 }
    }
}

/// A trichotomy verdict with its structural basis and search evidence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictRecord {
    /// The class the verdict is about.
    pub class: ClassSpec,
    /// The rate regime.
    pub verdict: RateVerdict,
    /// Why: the structural fact behind the verdict.
    pub basis: String,
    /// Littlestone dimension of the (truncated) class when the capped
    /// search certified it.
    pub littlestone_dimension: Option<i64>,
    /// VC dimension of the (truncated) class when the capped search
    /// certified it.
    pub vc_dimension: Option<i64>,
    /// Capped-search evidence lines.
    pub evidence: Vec<String>,
}

fn dim_value(result: &DimResult) -> Option<i64> {
    match result {
        DimResult::Exact { value } => Some(*value),
        DimResult::AtLeastCap { .. } => None,
    }
}

fn dim_line(label: &str, result: &Result<DimResult>) -> String {
    match result {
        Ok(DimResult::Exact { value }) => format!("{label} = {value} (exact)"),
        Ok(DimResult::AtLeastCap { cap }) => format!("{label} >= {cap} (search capped)"),
        Err(e) => format!("{label}: not computed ({e})"),
    }
}

/// The structural trichotomy verdict for a class specification.
///
/// Finite explicit families are always exponential (a finite class has no
/// infinite tree of any kind); generator families that stand in for
/// infinite classes carry the stored structural verdict of the family they
/// truncate, plus depth-capped search evidence on the truncation actually
/// built.
pub fn trichotomy_report(spec: &ClassSpec, caps: &SearchCaps) -> Result<VerdictRecord> {
    let (verdict, basis): (RateVerdict, String) = match spec {
        ClassSpec::Explicit { .. }
        | ClassSpec::Thresholds { .. }
        | ClassSpec::FullClass { .. }
        | ClassSpec::Singletons { .. }
        | ClassSpec::HalfIntervals { .. } => (
            RateVerdict::Exponential,
            "finite explicit class: finite classes never have an infinite Littlestone tree, \
             so optimal rates are exponential"
                .into(),
        ),
        ClassSpec::RealThresholds { m } => (
            RateVerdict::Linear,
            format!(
                "grid truncation (m = {m}) of the continuum threshold family: the full family \
                 has an infinite Littlestone tree (binary subdivision of the interval) but no \
                 infinite VCL tree (no 2-point tuple is ever shattered), so optimal rates are \
                 linear"
            ),
        ),
        ClassSpec::PowersetBlocks { blocks } => (
            RateVerdict::Exponential,
            format!(
                "truncation ({blocks} blocks) of the disjoint-powerset union: every branch of \
                 a Littlestone tree is confined to a single finite block, so the full family \
                 has no infinite Littlestone tree and optimal rates are exponential \
                 (despite infinite VC dimension in the limit)"
            ),
        ),
        ClassSpec::MajorityBlocks { levels } => (
            RateVerdict::Exponential,
            format!(
                "truncation ({levels} levels) of the majority-blocks family: no infinite \
                 Littlestone tree (each hypothesis lives inside one finite block), so optimal \
                 rates are exponential — yet canonical first-consistent empirical risk \
                 minimization is forced to arbitrarily slow rates on scheduled distributions"
            ),
        ),
        ClassSpec::VclTreeClass { depth } => (
            RateVerdict::ArbitrarilySlow,
            format!(
                "truncation (depth {depth}) of the complete VCL-tree branch class: the full \
                 family shatters a (k+1)-point tuple at every level k along every branch, \
                 giving an infinite VCL tree, so learning can be forced arbitrarily slow"
            ),
        ),
    };
    let mut evidence = Vec::new();
    let mut ld_value = None;
    let mut vc_value = None;
    match ConceptClass::generate(spec) {
        Ok(class) => {
            let ld = littlestone_dimension(&class, caps.littlestone_cap);
            evidence.push(dim_line("littlestone dimension of the truncation", &ld));
            if let Ok(result) = &ld {
                ld_value = dim_value(result);
            }
            let vc = class.vc_dimension(caps.vc_cap);
            evidence.push(dim_line("vc dimension of the truncation", &vc));
            if let Ok(result) = &vc {
                vc_value = dim_value(result);
            }
            let vcl = vcl_dimension(&class, caps.vcl_cap, &SearchBudget::default());
            evidence.push(dim_line("vcl dimension of the truncation", &vcl));
        }
        Err(e) => evidence.push(format!("truncation not materialized ({e})")),
    }
    Ok(VerdictRecord {
        class: spec.clone(),
        verdict,
        basis,
        littlestone_dimension: ld_value,
        vc_dimension: vc_value,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_erm_spec(class: ClassSpec, n_grid: Vec<usize>, seeds: usize) -> ExperimentSpec {
        ExperimentSpec {
            class,
            dist: DistSpec::UniformRealizable { target: TargetSpec::Fixed(0) },
            learner: LearnerName::Erm,
            n_grid,
            seeds,
            root_seed: 0,
            out: None,
        }
    }

    #[test]
    fn spec_validation_catches_bad_grids_and_seeds() {
        let mut spec = uniform_erm_spec(ClassSpec::Thresholds { m: 4 }, vec![], 1);
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
        spec.n_grid = vec![4, 4];
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
        spec.n_grid = vec![0, 4];
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
        spec.n_grid = vec![4, 8];
        spec.seeds = 0;
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
        spec.seeds = 3;
        spec.validate().unwrap();
    }

    #[test]
    fn spec_toml_roundtrip() {
        let text = r#"
            learner = "erm"
            n_grid = [4, 8, 16]
            seeds = 12
            root_seed = 7

            [class]
            kind = "thresholds"
            m = 4

            [dist]
            kind = "uniform_realizable"
            target = "per_seed"
        "#;
        let spec = ExperimentSpec::from_toml(text).unwrap();
        assert_eq!(spec.learner, LearnerName::Erm);
        assert_eq!(spec.class, ClassSpec::Thresholds { m: 4 });
        assert_eq!(spec.dist, DistSpec::UniformRealizable { target: TargetSpec::PerSeed });
        assert_eq!(spec.n_grid, vec![4, 8, 16]);
        assert_eq!(spec.root_seed, 7);
        let reparsed = ExperimentSpec::from_toml(&spec.to_toml().unwrap()).unwrap();
        assert_eq!(reparsed, spec);
        // A fixed target spells as an inline table.
        let fixed = ExperimentSpec {
            dist: DistSpec::UniformRealizable { target: TargetSpec::Fixed(3) },
            ..spec
        };
        let reparsed = ExperimentSpec::from_toml(&fixed.to_toml().unwrap()).unwrap();
        assert_eq!(reparsed.dist, DistSpec::UniformRealizable { target: TargetSpec::Fixed(3) });
    }

    #[test]
    fn seed_derivation_is_stable_and_counter_based() {
        // Frozen values: these must never change, or stored experiment
        // outputs silently stop being reproducible.
        assert_eq!(derive_seed(0, 1, 0), 0x44e5_b981_00c6_7fb0);
        assert_eq!(derive_seed(7, 64, 3), 0x9478_aaa8_5bcb_e7a1);
        // Distinct coordinates, distinct seeds (no collisions in a small
        // block).
        let mut seen = std::collections::HashSet::new();
        for n in 1..=8u64 {
            for i in 0..=8u64 {
                assert!(seen.insert(derive_seed(42, n, i)));
            }
        }
    }

    #[test]
    fn singleton_class_curve_is_identically_zero() {
        let spec = uniform_erm_spec(
            ClassSpec::Explicit { rows: vec!["00".into()] },
            vec![1, 2, 3, 4],
            1,
        );
        let curve = run_experiment(&spec).unwrap();
        for p in &curve.points {
            assert_eq!(p.mean_err, 0.0);
            assert_eq!(p.p_nonzero, 0.0);
            assert_eq!(p.stderr, 0.0);
            assert_eq!(p.seeds, 1);
        }
    }

    #[test]
    fn run_experiment_is_deterministic_and_structured() {
        // Two-row class where the canonical ERM errs exactly when the
        // sample misses the disagreement point: the error is 0 or 1/2.
        let spec = ExperimentSpec {
            class: ClassSpec::Explicit { rows: vec!["00".into(), "01".into()] },
            dist: DistSpec::UniformRealizable { target: TargetSpec::Fixed(1) },
            learner: LearnerName::Erm,
            n_grid: vec![1, 2, 3, 12],
            seeds: 64,
            root_seed: 5,
            out: None,
        };
        let a = run_experiment(&spec).unwrap();
        let b = run_experiment(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
        for p in &a.points {
            // Error is 0 or 0.5, so the nonzero fraction is exactly twice
            // the mean.
            assert!((p.p_nonzero - 2.0 * p.mean_err).abs() < 1e-12);
            assert!(p.stderr >= 0.0 && p.stderr <= 0.5);
        }
        // Misses get rarer with n: the last grid point should be cleaner
        // than the first (2^{-12} vs 2^{-1} miss probability over 64
        // seeds).
        assert!(a.points[3].mean_err <= a.points[0].mean_err);
        let csv = a.to_csv();
        assert!(csv.starts_with("n,mean_err,p_nonzero,stderr,seeds\n"));
        assert_eq!(csv.lines().count(), 1 + 4);
        // Shortest-roundtrip floats make the CSV lossless.
        assert_eq!(LearningCurve::from_csv(&csv).unwrap(), a);
        assert!(matches!(LearningCurve::from_csv("x,y\n1,2"), Err(Error::Config(_))));
        assert!(matches!(
            LearningCurve::from_csv("n,mean_err,p_nonzero,stderr,seeds\n"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn per_seed_targets_cycle_hypotheses() {
        let spec = ExperimentSpec {
            class: ClassSpec::Thresholds { m: 4 },
            dist: DistSpec::UniformRealizable { target: TargetSpec::PerSeed },
            learner: LearnerName::Erm,
            n_grid: vec![8],
            seeds: 8,
            root_seed: 1,
            out: None,
        };
        let curve = run_experiment(&spec).unwrap();
        assert_eq!(curve.points.len(), 1);
        // The materialized per-seed distributions differ across targets.
        let d0 = materialize_distribution(&spec, 0).unwrap();
        let d1 = materialize_distribution(&spec, 1).unwrap();
        assert_ne!(d0.certificate(), d1.certificate());
        assert_eq!(d0.certificate(), materialize_distribution(&spec, 4).unwrap().certificate());
    }

    #[test]
    fn adversarial_erm_requires_the_scheduled_distribution() {
        let spec = ExperimentSpec {
            class: ClassSpec::MajorityBlocks { levels: 7 },
            dist: DistSpec::UniformRealizable { target: TargetSpec::Fixed(0) },
            learner: LearnerName::AdversarialErm,
            n_grid: vec![8],
            seeds: 1,
            root_seed: 0,
            out: None,
        };
        let err = run_experiment(&spec).unwrap_err();
        assert!(matches!(err, Error::Construction(_)), "unexpected: {err}");
        // And the scheduled distribution pins the class.
        let mismatched = ExperimentSpec {
            class: ClassSpec::MajorityBlocks { levels: 3 },
            dist: DistSpec::ErmFailure { rate: RateFn::InverseSqrt, t_max: 1 },
            ..spec
        };
        let err = run_experiment(&mismatched).unwrap_err();
        assert!(matches!(err, Error::Construction(_)), "unexpected: {err}");
    }

    #[test]
    fn adversarial_erm_stalls_at_exactly_a_quarter() {
        // One scheduled step: block 7 (128 points) at n = 64.  Whatever 64
        // points are drawn, at least 64 block-7 points stay unsampled, so
        // the schedule-led ERM commits to 64 unseen points of mass
        // 1/(4·64) each: the error is exactly 1/4 for every seed.
        let spec = ExperimentSpec {
            class: ClassSpec::MajorityBlocks { levels: 7 },
            dist: DistSpec::ErmFailure { rate: RateFn::InverseSqrt, t_max: 1 },
            learner: LearnerName::AdversarialErm,
            n_grid: vec![64],
            seeds: 16,
            root_seed: 11,
            out: None,
        };
        let curve = run_experiment(&spec).unwrap();
        assert_eq!(curve.points[0].mean_err, 0.25);
        assert_eq!(curve.points[0].p_nonzero, 1.0);
        assert_eq!(curve.points[0].stderr, 0.0);
    }

    #[test]
    fn fit_recovers_synthetic_exponential_decay() {
        let points: Vec<CurvePoint> = (1..=8)
            .map(|i| {
                let n = 10 * i;
                CurvePoint {
                    n,
                    mean_err: (-0.3 * n as f64).exp(),
                    p_nonzero: 0.0,
                    stderr: 0.0,
                    seeds: 100,
                }
            })
            .collect();
        let fit = fit_rate(&LearningCurve { points }, CurveMetric::MeanError).unwrap();
        assert_eq!(fit.model, FitModel::Exponential);
        assert!((fit.slope + 0.3).abs() < 0.05, "slope {}", fit.slope);
        assert!(fit.r2_exponential > 0.999);
        assert!(!fit.degenerate);
        assert_eq!(fit.floored_points, 0);
    }

    #[test]
    fn fit_recovers_synthetic_linear_decay() {
        let points: Vec<CurvePoint> = [8usize, 16, 32, 64, 128, 256]
            .iter()
            .map(|&n| CurvePoint {
                n,
                mean_err: 2.0 / n as f64,
                p_nonzero: 0.0,
                stderr: 0.0,
                seeds: 100,
            })
            .collect();
        let fit = fit_rate(&LearningCurve { points }, CurveMetric::MeanError).unwrap();
        assert_eq!(fit.model, FitModel::Linear);
        assert!((fit.slope + 1.0).abs() < 0.1, "slope {}", fit.slope);
        assert!(fit.r2_linear > 0.999);
    }

    #[test]
    fn fit_handles_flat_zero_and_short_curves() {
        let flat: Vec<CurvePoint> = [10usize, 20, 30, 40]
            .iter()
            .map(|&n| CurvePoint { n, mean_err: 0.25, p_nonzero: 1.0, stderr: 0.0, seeds: 50 })
            .collect();
        let fit = fit_rate(&LearningCurve { points: flat.clone() }, CurveMetric::MeanError).unwrap();
        assert_eq!(fit.model, FitModel::Neither);
        // All-zero curve: degenerate exponential by convention.
        let zero: Vec<CurvePoint> = flat
            .iter()
            .map(|p| CurvePoint { mean_err: 0.0, p_nonzero: 0.0, ..*p })
            .collect();
        let fit = fit_rate(&LearningCurve { points: zero }, CurveMetric::PNonzero).unwrap();
        assert_eq!(fit.model, FitModel::Exponential);
        assert!(fit.degenerate);
        assert_eq!(fit.r2_exponential, 1.0);
        assert_eq!(fit.floored_points, 4);
        // One zero cell among positives gets floored and flagged.
        let mut mixed = flat;
        mixed[3].mean_err = 0.0;
        mixed[0].mean_err = 0.9;
        mixed[1].mean_err = 0.5;
        mixed[2].mean_err = 0.1;
        let fit = fit_rate(&LearningCurve { points: mixed }, CurveMetric::MeanError).unwrap();
        assert_eq!(fit.floored_points, 1);
        assert!(fit.slope.is_finite());
        // Too few points is a configuration error.
        let short = LearningCurve {
            points: vec![CurvePoint { n: 1, mean_err: 0.5, p_nonzero: 1.0, stderr: 0.0, seeds: 1 }],
        };
        assert!(matches!(fit_rate(&short, CurveMetric::MeanError), Err(Error::Config(_))));
    }

    #[test]
    fn verdicts_match_the_stored_structural_facts() {
        let caps = SearchCaps::default();
        let powerset = trichotomy_report(&ClassSpec::PowersetBlocks { blocks: 3 }, &caps).unwrap();
        assert_eq!(powerset.verdict, RateVerdict::Exponential);
        assert_eq!(powerset.littlestone_dimension, Some(3)); // largest block
        let real = trichotomy_report(&ClassSpec::RealThresholds { m: 16 }, &caps).unwrap();
        assert_eq!(real.verdict, RateVerdict::Linear);
        assert_eq!(real.vc_dimension, Some(1));
        let tree = trichotomy_report(&ClassSpec::VclTreeClass { depth: 2 }, &caps).unwrap();
        assert_eq!(tree.verdict, RateVerdict::ArbitrarilySlow);
        let finite = trichotomy_report(&ClassSpec::Thresholds { m: 8 }, &caps).unwrap();
        assert_eq!(finite.verdict, RateVerdict::Exponential);
        assert_eq!(finite.littlestone_dimension, Some(3));
        assert_eq!(finite.vc_dimension, Some(1));
        let majority = trichotomy_report(&ClassSpec::MajorityBlocks { levels: 3 }, &caps).unwrap();
        assert_eq!(majority.verdict, RateVerdict::Exponential);
        for record in [&powerset, &real, &tree, &finite, &majority] {
            assert!(!record.basis.is_empty());
            assert!(!record.evidence.is_empty());
            // Records serialize for the JSON report path.
            serde_json::to_string(record).unwrap();
        }
    }

    #[test]
    fn branch_distribution_specs_materialize() {
        // Littlestone branch on the threshold class.
        let spec = ExperimentSpec {
            class: ClassSpec::Thresholds { m: 4 },
            dist: DistSpec::LittlestoneBranch { labels: vec![0, 1] },
            learner: LearnerName::OnlineAsBatch,
            n_grid: vec![4, 8],
            seeds: 4,
            root_seed: 3,
            out: None,
        };
        let dist = materialize_distribution(&spec, 0).unwrap();
        assert_eq!(dist.support().len(), 2);
        let curve = run_experiment(&spec).unwrap();
        assert_eq!(curve.points.len(), 2);
        // VCL branch over the full class on 6 points, schedule truncated
        // at two levels (arities 1 and 2).
        let vcl = ExperimentSpec {
            class: ClassSpec::FullClass { n: 6 },
            dist: DistSpec::VclBranch {
                rate: RateFn::Tabulated {
                    breakpoints: (0..=10).map(|t| (1u64 << t, (2f64).powi(-t))).collect(),
                },
                i_max: 2,
                patterns: vec![1, 2],
            },
            learner: LearnerName::Erm,
            n_grid: vec![4],
            seeds: 4,
            root_seed: 3,
            out: None,
        };
        let dist = materialize_distribution(&vcl, 0).unwrap();
        assert_eq!(dist.support().len(), 3); // 1 root point + 2 tuple points
        run_experiment(&vcl).unwrap();
        // Requesting a deeper tree than the class carries is a
        // construction error.
        let impossible = ExperimentSpec {
            class: ClassSpec::Thresholds { m: 8 },
            dist: DistSpec::LittlestoneBranch { labels: vec![0, 0, 0, 0, 0] },
            ..spec
        };
        assert!(matches!(run_experiment(&impossible), Err(Error::Construction(_))));
    }
}
