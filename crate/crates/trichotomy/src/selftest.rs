//! The acceptance suite: nine self-contained checks covering the crate's
//! exact guarantees (one-inclusion permutation bound, mistake bound,
//! lower-bound enumeration, schedule invariants, oracle equivalence) and its
//! statistical ones (rate-regime curves, ERM-failure demonstration, verdict
//! fixtures).  Each check returns a [`CriterionReport`] with a pass flag, a
//! human-readable detail line, and its runtime against a stated budget.
//!
//! The checks are deliberately independent of the machinery they audit:
//! dimension checks compare against the brute-force oracles
//! [`naive_littlestone_dimension`] and [`naive_vc_dimension`] implemented
//! here from the definitions, the mistake bound is attacked by an
//! exhaustive adversary that searches every mistake-forcing play, and the
//! lower-bound check enumerates every training realization in integer
//! arithmetic rather than sampling.

use std::collections::HashMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitRow;
use crate::classes::{ClassSpec, ConceptClass, DimResult, PointId};
use crate::distributions::{build_slow_schedule, exp_lower_bound_pair, RateFn};
use crate::harness::{
    fit_rate, run_experiment, trichotomy_report, CurveMetric, DistSpec, ExperimentSpec, FitModel,
    LearnerName, RateVerdict, SearchCaps, TargetSpec,
};
use crate::learners::{exp_learner, Sample};
use crate::online::{run_duel, OnlineRunner, TreeAdversary};
use crate::patterns::{
    build_pattern_class, leave_one_out_fraction, orient, EnumerationBudget, OneInclusionGraph,
};
use crate::trees::{littlestone_dimension, LdOracle};
use crate::{Error, Result};

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    /// 1-based criterion number.
    pub index: usize,
    /// Short name.
    pub name: &'static str,
    /// Whether the check passed.
    pub passed: bool,
    /// What was measured.
    pub detail: String,
    /// Wall-clock runtime of the check.
    pub seconds: f64,
    /// The stated runtime budget.
    pub budget_seconds: f64,
}

impl CriterionReport {
    /// The canonical one-line rendering: `PASS`/`FAIL`, number, name,
    /// detail, and timing.
    #[must_use]
    pub fn line(&self) -> String {
        format!(
            "{} criterion {} ({}): {} [{:.2}s / {:.0}s budget]",
            if self.passed { "PASS" } else { "FAIL" },
            self.index,
            self.name,
            self.detail,
            self.seconds,
            self.budget_seconds
        )
    }
}

const CRITERIA: [(&str, f64); 9] = [
    ("one-inclusion permutation bound", 60.0),
    ("online mistake bound vs exhaustive adversaries", 60.0),
    ("exponential lower bound by exact enumeration", 30.0),
    ("exponential regime learning curves", 300.0),
    ("linear regime learning curve", 600.0),
    ("slow-rate schedule invariants", 10.0),
    ("ERM failure on scheduled blocks", 120.0),
    ("trichotomy verdict fixtures", 5.0),
    ("dimension oracle equivalence", 120.0),
];

/// Number of acceptance criteria.
pub const CRITERION_COUNT: usize = CRITERIA.len();

/// Run one criterion by 1-based index.
pub fn run_criterion(index: usize) -> Result<CriterionReport> {
    if !(1..=CRITERION_COUNT).contains(&index) {
        return Err(Error::Config(format!(
            "criterion index must be 1..={CRITERION_COUNT}, got {index}"
        )));
    }
    let (name, budget_seconds) = CRITERIA[index - 1];
    let run: fn() -> Result<(bool, String)> = [
        c1_one_inclusion_bound,
        c2_mistake_bound,
        c3_exact_lower_bound,
        c4_exponential_curves,
        c5_linear_curve,
        c6_schedule_invariants,
        c7_erm_failure,
        c8_verdict_fixtures,
        c9_oracle_equivalence,
    ][index - 1];
    let start = Instant::now();
    let (passed, detail) = match run() {
        Ok(outcome) => outcome,
        Err(e) => (false, format!("errored: {e}")),
    };
    Ok(CriterionReport {
        index,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
        budget_seconds,
    })
}

/// Run the whole suite in order.
pub fn run_all() -> Result<Vec<CriterionReport>> {
    (1..=CRITERION_COUNT).map(run_criterion).collect()
}

// ---------------------------------------------------------------------------
// Naive reference oracles
// ---------------------------------------------------------------------------

/// Brute-force Littlestone dimension straight from the definition: the
/// deepest mistake tree, computed by the recursion `LD(H) = max` over
/// splitting points `x` of `1 + min(LD(H|x=0), LD(H|x=1))`, memoized on the
/// surviving-row bitmask.  Requires a materialized class with at most 64
/// rows.  The empty class has dimension −1.
pub fn naive_littlestone_dimension(class: &ConceptClass) -> Result<i64> {
    let rows = class.rows()?;
    if rows.len() > 64 {
        return Err(Error::Budget(format!(
            "naive Littlestone oracle handles at most 64 rows, got {}",
            rows.len()
        )));
    }
    let domain = class.domain().size();
    let full: u64 = if rows.is_empty() { 0 } else { (!0u64) >> (64 - rows.len()) };
    let mut memo: HashMap<u64, i64> = HashMap::new();
    fn rec(mask: u64, rows: &[BitRow], domain: usize, memo: &mut HashMap<u64, i64>) -> i64 {
        if mask == 0 {
            return -1;
        }
        if mask.count_ones() == 1 {
            return 0;
        }
        if let Some(&v) = memo.get(&mask) {
            return v;
        }
        let mut best = 0i64;
        for x in 0..domain {
            let mut m0 = 0u64;
            let mut m1 = 0u64;
            let mut live = mask;
            while live != 0 {
                let r = live.trailing_zeros() as usize;
                live &= live - 1;
                if rows[r].get(x) == 1 {
                    m1 |= 1 << r;
                } else {
                    m0 |= 1 << r;
                }
            }
            if m0 != 0 && m1 != 0 {
                let sub = rec(m0, rows, domain, memo).min(rec(m1, rows, domain, memo));
                best = best.max(1 + sub);
            }
        }
        memo.insert(mask, best);
        best
    }
    Ok(rec(full, rows, domain, &mut memo))
}

/// Brute-force VC dimension straight from the definition: the largest
/// domain subset whose `2^{|S|}` restrictions are all realized, checked by
/// enumerating every subset of the domain.  Requires a materialized class
/// over at most 20 domain points.  The empty class has dimension −1.
pub fn naive_vc_dimension(class: &ConceptClass) -> Result<i64> {
    let rows = class.rows()?;
    if rows.is_empty() {
        return Ok(-1);
    }
    let domain = class.domain().size();
    if domain > 20 {
        return Err(Error::Budget(format!(
            "naive VC oracle handles at most 20 domain points, got {domain}"
        )));
    }
    let mut best = 0i64;
    for subset in 1u32..(1 << domain) {
        let size = subset.count_ones() as i64;
        if size <= best || (1u64 << size) > rows.len() as u64 {
            continue;
        }
        let points: Vec<usize> = (0..domain).filter(|&x| subset >> x & 1 == 1).collect();
        let mut seen = std::collections::HashSet::new();
        for row in rows {
            let mut projection = 0u32;
            for (i, &x) in points.iter().enumerate() {
                projection |= u32::from(row.get(x)) << i;
            }
            seen.insert(projection);
        }
        if seen.len() == 1usize << size {
            best = size;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Criterion 1: one-inclusion permutation bound
// ---------------------------------------------------------------------------

fn c1_one_inclusion_bound() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let budget = EnumerationBudget::default();
    let mut evaluated = 0usize;
    let mut attempts = 0usize;
    let mut empty_skipped = 0usize;
    let mut patterns_checked = 0usize;
    let mut smallest_margin = f64::INFINITY;
    while evaluated < 200 {
        attempts += 1;
        if attempts > 4000 {
            return Ok((
                false,
                format!("only {evaluated} nonempty avoider fixtures in {attempts} attempts"),
            ));
        }
        let n = rng.gen_range(3..=8usize);
        let t = rng.gen_range(1..=3usize.min(n - 1));
        let points: Vec<PointId> = (0..n as PointId).collect();
        // A random forbidden-pattern function of arity t; the builder
        // consults it once per ordered tuple, so sampling inside the
        // closure is deterministic per fixture.
        let mut g_rng = ChaCha8Rng::seed_from_u64(rng.gen());
        let set = build_pattern_class(
            &points,
            t,
            |_tuple| Ok(BitRow::from_fn(t, |_| g_rng.gen::<bool>())),
            &budget,
        )?;
        if set.patterns.is_empty() {
            empty_skipped += 1;
            continue;
        }
        let graph = orient(&OneInclusionGraph::new(set)?);
        let bound = t as f64 / n as f64;
        for f in &graph.vertices().patterns {
            let fraction = leave_one_out_fraction(&graph, f)?;
            if fraction >= bound {
                return Ok((
                    false,
                    format!(
                        "leave-one-out fraction {fraction} reached the bound {t}/{n} \
                         on an arity-{t} avoider class over {n} coordinates"
                    ),
                ));
            }
            smallest_margin = smallest_margin.min(bound - fraction);
            patterns_checked += 1;
        }
        evaluated += 1;
    }
    Ok((
        true,
        format!(
            "{evaluated} randomized avoider fixtures ({empty_skipped} empty skipped), \
             {patterns_checked} true patterns, every leave-one-out fraction strictly \
             below t/n (smallest margin {smallest_margin:.4})"
        ),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 2: mistake bound vs exhaustive adversaries
// ---------------------------------------------------------------------------

/// Maximum mistakes any adversary can force from the crate's online
/// learner on `class`, found by exhaustively searching mistake-forcing
/// plays: at every node the adversary tries each domain point, answers the
/// opposite of the learner's actual prediction when some hypothesis is
/// still consistent, and recurses.  Rounds the learner predicts correctly
/// are not explored — the learner's state only changes on mistakes and a
/// correct answer only shrinks the adversary's consistent set, so they
/// never help the adversary.
fn forced_mistakes(class: &ConceptClass) -> Result<u64> {
    fn explore(
        class: &ConceptClass,
        oracle: &LdOracle<'_>,
        history: &mut Vec<(PointId, u8)>,
        rows: &[u32],
    ) -> Result<u64> {
        let domain = class.domain().size();
        let mut best = 0u64;
        for x in 0..domain as PointId {
            // Replay the real learner on the mistake history to get its
            // live prediction at this node.
            let mut runner = OnlineRunner::new(class)?;
            for &(hx, hy) in history.iter() {
                runner.observe(hx, hy)?;
            }
            let y = 1 - runner.predict(x)?;
            let parts = oracle.split(rows, x);
            let survivors = &parts[y as usize];
            if survivors.is_empty() {
                continue; // answering wrong would leave no consistent hypothesis
            }
            history.push((x, y));
            let deeper = 1 + explore(class, oracle, history, survivors)?;
            history.pop();
            best = best.max(deeper);
        }
        Ok(best)
    }
    let oracle = LdOracle::new(class)?;
    let rows = oracle.all_rows();
    explore(class, &oracle, &mut Vec::new(), &rows)
}

fn all_explicit_classes(domain: usize) -> Vec<ClassSpec> {
    let row_count = 1usize << domain;
    (1u64..(1 << row_count))
        .map(|mask| ClassSpec::Explicit {
            rows: (0..row_count)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (0..domain).map(|x| if i >> x & 1 == 1 { '1' } else { '0' }).collect())
                .collect(),
        })
        .collect()
}

fn random_explicit_class(rng: &mut ChaCha8Rng, domain: usize, max_rows: usize) -> ClassSpec {
    let available = 1u64 << domain;
    let count = rng.gen_range(1..=max_rows.min(available as usize));
    let mut masks = std::collections::BTreeSet::new();
    while masks.len() < count {
        masks.insert(rng.gen_range(0..available));
    }
    ClassSpec::Explicit {
        rows: masks
            .into_iter()
            .map(|m| (0..domain).map(|x| if m >> x & 1 == 1 { '1' } else { '0' }).collect())
            .collect(),
    }
}

fn check_mistake_bound(spec: &ClassSpec) -> Result<Option<String>> {
    let class = ConceptClass::generate(spec)?;
    let forced = forced_mistakes(&class)?;
    let oracle = naive_littlestone_dimension(&class)?;
    if forced as i64 > oracle {
        return Ok(Some(format!(
            "adversary forced {forced} mistakes but the Littlestone dimension is {oracle} \
             on {spec:?}"
        )));
    }
    Ok(None)
}

fn c2_mistake_bound() -> Result<(bool, String)> {
    let mut checked = 0usize;
    // Exhaustive: every nonempty class on domains of 1..3 points.
    for domain in 1..=3usize {
        for spec in all_explicit_classes(domain) {
            if let Some(fail) = check_mistake_bound(&spec)? {
                return Ok((false, fail));
            }
            checked += 1;
        }
    }
    // Randomized classes on domains of 4 and 5 points (the full sweep of
    // 2^16−1 / 2^32−1 classes is out of reach; the adversary stays
    // exhaustive on every sampled class).
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    for _ in 0..200 {
        let domain = rng.gen_range(4..=5usize);
        let spec = random_explicit_class(&mut rng, domain, 1 << domain);
        if let Some(fail) = check_mistake_bound(&spec)? {
            return Ok((false, fail));
        }
        checked += 1;
    }
    // Catalog generators whose domains fit in 5 points.
    for spec in [
        ClassSpec::Thresholds { m: 5 },
        ClassSpec::FullClass { n: 2 },
        ClassSpec::Singletons { n: 5 },
        ClassSpec::HalfIntervals { m: 5 },
        ClassSpec::VclTreeClass { depth: 1 },
    ] {
        if let Some(fail) = check_mistake_bound(&spec)? {
            return Ok((false, fail));
        }
        checked += 1;
    }
    // Tree adversaries on threshold classes {1..2^d}: a deepest witness
    // tree forces a mistake every round, and the mistake count must still
    // be within the dimension.  LD(thresholds over 2^d points) = d, since
    // the m+1 threshold hypotheses admit exactly ⌊log₂(m+1)⌋ halvings.
    let mut duels = Vec::new();
    for d in 1..=6u32 {
        let class = ConceptClass::generate(&ClassSpec::Thresholds { m: 1 << d })?;
        let mut adversary = TreeAdversary::deepest(&class, d)?;
        let transcript = run_duel(&class, &mut adversary)?;
        let mistakes = transcript.iter().filter(|r| r.mistake).count();
        if transcript.len() != d as usize || mistakes != d as usize {
            return Ok((
                false,
                format!(
                    "thresholds over 2^{d} points: expected a {d}-round all-mistake duel, \
                     got {} rounds with {mistakes} mistakes",
                    transcript.len()
                ),
            ));
        }
        duels.push(mistakes);
    }
    Ok((
        true,
        format!(
            "{checked} classes: exhaustively forced mistakes never exceed the naive \
             Littlestone dimension; tree duels on thresholds forced exactly {duels:?} \
             mistakes for depths 1..=6"
        ),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 3: exponential lower bound by exact enumeration
// ---------------------------------------------------------------------------

fn c3_exact_lower_bound() -> Result<(bool, String)> {
    let class = ConceptClass::generate(&ClassSpec::Thresholds { m: 4 })?;
    let (p0, p1) = exp_lower_bound_pair(&class)?;
    // Recover the agreement point, the disagreement point, and the labels
    // from the two supports.
    let mut agree: Option<(PointId, u8)> = None;
    let mut differ: Option<(PointId, [u8; 2])> = None;
    for &((x, y), _) in p0.support() {
        if p1.support().iter().any(|&((x1, y1), _)| x1 == x && y1 == y) {
            agree = Some((x, y));
        } else {
            differ = Some((x, [y, 1 - y]));
        }
    }
    let (x_agree, y_agree) = agree.ok_or_else(|| {
        Error::Construction("lower-bound pair has no shared agreement point".into())
    })?;
    let (x_differ, y_differ) = differ.ok_or_else(|| {
        Error::Construction("lower-bound pair has no disagreement point".into())
    })?;
    let mut details = Vec::new();
    for n in 1..=10usize {
        // Every training realization: each of the n draws is the agreement
        // point or the disagreement point, each with probability 1/2 under
        // both distributions, so all 2^n sequences are equiprobable.  S
        // counts wrong answers on the two support points over both targets
        // and all sequences; the average error is S / 2^{n+2}, so the bound
        // average ≥ 2^{−n−2} is exactly the integer inequality S ≥ 1.
        let mut s: u64 = 0;
        for target in 0..2usize {
            for mask in 0u64..(1 << n) {
                let pairs: Vec<(PointId, u8)> = (0..n)
                    .map(|j| {
                        if mask >> j & 1 == 1 {
                            (x_differ, y_differ[target])
                        } else {
                            (x_agree, y_agree)
                        }
                    })
                    .collect();
                let sample = Sample::new(pairs, class.domain())?;
                let h = exp_learner(&class, &sample)?;
                s += u64::from(h.classify(x_agree) != y_agree);
                s += u64::from(h.classify(x_differ) != y_differ[target]);
            }
        }
        if s < 1 {
            return Ok((
                false,
                format!("at n = {n} the exact average error is {s}/2^{} < 2^-{}", n + 2, n + 2),
            ));
        }
        details.push(format!("n={n}: {s}/2^{}", n + 2));
    }
    Ok((
        true,
        format!(
            "average error over both lower-bound distributions, enumerated exactly over \
             all training realizations, meets 2^-(n+2) for n = 1..=10 ({})",
            details.join(", ")
        ),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 4: exponential regime curves
// ---------------------------------------------------------------------------

fn exponential_grid() -> Vec<usize> {
    (1..=8).map(|i| 50 * i).collect()
}

fn check_exponential_curve(spec: &ExperimentSpec, label: &str) -> Result<(bool, String)> {
    let curve = run_experiment(spec)?;
    let fit = fit_rate(&curve, CurveMetric::PNonzero)?;
    let last = curve.points.last().expect("grid is nonempty");
    if fit.model != FitModel::Exponential {
        return Ok((
            false,
            format!(
                "{label}: fitted {:?} (R² exp {:.3}, linear {:.3}) instead of exponential",
                fit.model, fit.r2_exponential, fit.r2_linear
            ),
        ));
    }
    if fit.r2_exponential < 0.8 {
        return Ok((
            false,
            format!("{label}: exponential log-fit R² {:.3} < 0.8", fit.r2_exponential),
        ));
    }
    if last.p_nonzero > 0.02 {
        return Ok((
            false,
            format!("{label}: P(error > 0) at n = {} is {} > 0.02", last.n, last.p_nonzero),
        ));
    }
    Ok((
        true,
        format!(
            "{label}: R² {:.3}{}, final P(error>0) {} at n = {}",
            fit.r2_exponential,
            if fit.degenerate { " (all-zero curve, degenerate exponential)" } else { "" },
            last.p_nonzero,
            last.n
        ),
    ))
}

fn c4_exponential_curves() -> Result<(bool, String)> {
    // Fixture (a): the two-point lower-bound distribution itself — the
    // learner sees both support points almost surely at these sizes, so
    // the curve sits at (or within a hair of) zero.
    let pair_spec = ExperimentSpec {
        class: ClassSpec::Thresholds { m: 4 },
        dist: DistSpec::ExpPair { which: 0 },
        learner: LearnerName::Exp,
        n_grid: exponential_grid(),
        seeds: 500,
        root_seed: 0x41,
        out: None,
    };
    let (ok_a, detail_a) = check_exponential_curve(&pair_spec, "lower-bound pair fixture")?;
    // Fixture (b): disjoint powerset blocks (3 blocks, 6 points), with the
    // target the full middle block and its two points rare (mass 1/64
    // each): the curve decays like 2·(63/64)^n from ≈0.92 at n = 50 to
    // ≈0.004 at n = 400.
    let blocks_spec = ExperimentSpec {
        class: ClassSpec::PowersetBlocks { blocks: 3 },
        dist: DistSpec::WeightedRealizable {
            target_bits: "011000".into(),
            weights: vec![62.0 / 64.0, 1.0 / 64.0, 1.0 / 64.0, 0.0, 0.0, 0.0],
        },
        learner: LearnerName::Exp,
        n_grid: exponential_grid(),
        seeds: 500,
        root_seed: 0x42,
        out: None,
    };
    let (ok_b, detail_b) = check_exponential_curve(&blocks_spec, "powerset-blocks fixture")?;
    Ok((ok_a && ok_b, format!("{detail_a}; {detail_b}")))
}

// ---------------------------------------------------------------------------
// Criterion 5: linear regime curve
// ---------------------------------------------------------------------------

fn c5_linear_curve() -> Result<(bool, String)> {
    let spec = ExperimentSpec {
        class: ClassSpec::Thresholds { m: 64 },
        dist: DistSpec::UniformRealizable { target: TargetSpec::PerSeed },
        learner: LearnerName::Lin,
        n_grid: vec![32, 64, 128, 256],
        seeds: 500,
        root_seed: 0x50,
        out: None,
    };
    let curve = run_experiment(&spec)?;
    let fit = fit_rate(&curve, CurveMetric::MeanError)?;
    if fit.model != FitModel::Linear {
        return Ok((
            false,
            format!(
                "fitted {:?} (R² exp {:.3}, linear {:.3}) instead of a power law",
                fit.model, fit.r2_exponential, fit.r2_linear
            ),
        ));
    }
    if !(-1.4..=-0.6).contains(&fit.slope) {
        return Ok((
            false,
            format!("log-log slope {:.3} outside [-1.4, -0.6]", fit.slope),
        ));
    }
    let means: Vec<String> = curve.points.iter().map(|p| format!("{:.5}", p.mean_err)).collect();
    Ok((
        true,
        format!(
            "log-log slope {:.3} (R² {:.3}) within [-1.4, -0.6]; mean errors [{}] over \
             n = {:?}",
            fit.slope,
            fit.r2_linear,
            means.join(", "),
            spec.n_grid
        ),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 6: schedule invariants
// ---------------------------------------------------------------------------

fn c6_schedule_invariants() -> Result<(bool, String)> {
    let rates = [
        RateFn::InverseLog,
        RateFn::InverseSqrt,
        RateFn::Tabulated {
            breakpoints: (0..=40).map(|t| (1u64 << t, (2f64).powi(-t))).collect(),
        },
    ];
    let mut details = Vec::new();
    for rate in rates {
        // build_slow_schedule verifies on construction; verify once more on
        // the finished value so this check fails if either path regresses.
        let schedule = build_slow_schedule(&rate, 6)?;
        schedule.verify()?;
        if schedule.i_max() != 6 {
            return Ok((
                false,
                format!("{}: schedule stopped at i_max = {}", rate.name(), schedule.i_max()),
            ));
        }
        details.push(format!("{}: 6 steps, C = {}", rate.name(), schedule.c()));
    }
    Ok((
        true,
        format!(
            "tail-mass, block-quota, and normalizer clauses plus 1/2 <= C <= 1 verified \
             exactly for {}",
            details.join("; ")
        ),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 7: ERM failure on scheduled blocks
// ---------------------------------------------------------------------------

fn c7_erm_failure() -> Result<(bool, String)> {
    // Inverse-square-root fixture truncated at three steps: first scheduled
    // size n₁ = 64 on block 7.  The demonstration needs mean error at
    // least R(64) = 1/8 there (half the construction's 2R(n) bound, for
    // Monte-Carlo slack).
    let spec = ExperimentSpec {
        class: ClassSpec::MajorityBlocks { levels: 9 },
        dist: DistSpec::ErmFailure { rate: RateFn::InverseSqrt, t_max: 3 },
        learner: LearnerName::AdversarialErm,
        n_grid: vec![64],
        seeds: 500,
        root_seed: 0x70,
        out: None,
    };
    let curve = run_experiment(&spec)?;
    let point = &curve.points[0];
    let bound = 0.125;
    if point.mean_err < bound {
        return Ok((
            false,
            format!(
                "mean error {} at the first scheduled size n = 64 is below R(64) = {bound}",
                point.mean_err
            ),
        ));
    }
    Ok((
        true,
        format!(
            "adversarial ERM holds mean error {} >= R(64) = {bound} at the first scheduled \
             size (500 seeds, P(error>0) = {})",
            point.mean_err, point.p_nonzero
        ),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 8: verdict fixtures
// ---------------------------------------------------------------------------

fn c8_verdict_fixtures() -> Result<(bool, String)> {
    let caps = SearchCaps::default();
    let fixtures = [
        (ClassSpec::PowersetBlocks { blocks: 3 }, RateVerdict::Exponential),
        (ClassSpec::RealThresholds { m: 64 }, RateVerdict::Linear),
        (ClassSpec::VclTreeClass { depth: 2 }, RateVerdict::ArbitrarilySlow),
    ];
    let mut details = Vec::new();
    for (spec, expected) in fixtures {
        let record = trichotomy_report(&spec, &caps)?;
        if record.verdict != expected {
            return Ok((
                false,
                format!("{spec:?}: verdict {:?}, expected {expected:?}", record.verdict),
            ));
        }
        details.push(format!("{spec:?} -> {}", record.verdict.name()));
    }
    Ok((true, details.join("; ")))
}

// ---------------------------------------------------------------------------
// Criterion 9: oracle equivalence
// ---------------------------------------------------------------------------

fn check_dimensions(spec: &ClassSpec) -> Result<Option<String>> {
    let class = ConceptClass::generate(spec)?;
    let cap = 8u32;
    let ld = littlestone_dimension(&class, cap)?;
    let ld_naive = naive_littlestone_dimension(&class)?;
    match ld {
        DimResult::Exact { value } if value == ld_naive => {}
        other => {
            return Ok(Some(format!(
                "littlestone_dimension gave {other} but the naive oracle says {ld_naive} \
                 on {spec:?}"
            )))
        }
    }
    let vc = class.vc_dimension(cap)?;
    let vc_naive = naive_vc_dimension(&class)?;
    match vc {
        DimResult::Exact { value } if value == vc_naive => {}
        other => {
            return Ok(Some(format!(
                "vc_dimension gave {other} but the naive oracle says {vc_naive} on {spec:?}"
            )))
        }
    }
    Ok(None)
}

fn c9_oracle_equivalence() -> Result<(bool, String)> {
    let mut checked = 0usize;
    // Exhaustive sweep: every nonempty class on domains of 1..3 points.
    for domain in 1..=3usize {
        for spec in all_explicit_classes(domain) {
            if let Some(fail) = check_dimensions(&spec)? {
                return Ok((false, fail));
            }
            checked += 1;
        }
    }
    // Randomized classes up to the stated limits: |domain| <= 8,
    // |class| <= 64.
    let mut rng = ChaCha8Rng::seed_from_u64(0xC9);
    for _ in 0..300 {
        let domain = rng.gen_range(4..=8usize);
        let spec = random_explicit_class(&mut rng, domain, 64);
        if let Some(fail) = check_dimensions(&spec)? {
            return Ok((false, fail));
        }
        checked += 1;
    }
    // Catalog generators within the limits.
    for spec in [
        ClassSpec::Thresholds { m: 8 },
        ClassSpec::FullClass { n: 6 },
        ClassSpec::Singletons { n: 8 },
        ClassSpec::HalfIntervals { m: 8 },
        ClassSpec::PowersetBlocks { blocks: 3 },
        ClassSpec::VclTreeClass { depth: 2 },
        ClassSpec::RealThresholds { m: 7 },
    ] {
        if let Some(fail) = check_dimensions(&spec)? {
            return Ok((false, fail));
        }
        checked += 1;
    }
    Ok((
        true,
        format!(
            "littlestone_dimension and vc_dimension agree with the naive definitions on \
             {checked} classes (exhaustive on 1..=3 points, randomized up to 8 points / \
             64 hypotheses, plus the generator catalog)"
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(spec: ClassSpec) -> ConceptClass {
        ConceptClass::generate(&spec).unwrap()
    }

    #[test]
    fn naive_oracles_match_known_values() {
        let thresholds = class(ClassSpec::Thresholds { m: 8 });
        assert_eq!(naive_littlestone_dimension(&thresholds).unwrap(), 3);
        assert_eq!(naive_vc_dimension(&thresholds).unwrap(), 1);
        let full = class(ClassSpec::FullClass { n: 4 });
        assert_eq!(naive_littlestone_dimension(&full).unwrap(), 4);
        assert_eq!(naive_vc_dimension(&full).unwrap(), 4);
        let singletons = class(ClassSpec::Singletons { n: 6 });
        assert_eq!(naive_littlestone_dimension(&singletons).unwrap(), 1);
        assert_eq!(naive_vc_dimension(&singletons).unwrap(), 1);
        let lone = class(ClassSpec::Explicit { rows: vec!["0101".into()] });
        assert_eq!(naive_littlestone_dimension(&lone).unwrap(), 0);
        assert_eq!(naive_vc_dimension(&lone).unwrap(), 0);
    }

    #[test]
    fn exhaustive_adversary_forces_exactly_the_dimension() {
        // The learner caps mistakes at LD, and a deepest tree shows the
        // adversary can reach it, so the exhaustive search lands exactly
        // on the dimension.
        for spec in [
            ClassSpec::Thresholds { m: 4 },
            ClassSpec::FullClass { n: 3 },
            ClassSpec::Singletons { n: 4 },
            ClassSpec::Explicit { rows: vec!["001".into(), "010".into(), "100".into()] },
        ] {
            let class = ConceptClass::generate(&spec).unwrap();
            let forced = forced_mistakes(&class).unwrap() as i64;
            let dimension = naive_littlestone_dimension(&class).unwrap();
            assert_eq!(forced, dimension, "class {spec:?}");
        }
    }

    #[test]
    fn fast_criteria_pass() {
        // The sub-second criteria run as ordinary unit tests; the heavy
        // Monte-Carlo ones run in the acceptance suite.
        for index in [6, 8] {
            let report = run_criterion(index).unwrap();
            assert!(report.passed, "{}", report.line());
        }
    }

    #[test]
    fn report_lines_are_pass_fail_shaped() {
        let report = CriterionReport {
            index: 3,
            name: "demo",
            passed: false,
            detail: "broke".into(),
            seconds: 1.5,
            budget_seconds: 30.0,
        };
        assert_eq!(report.line(), "FAIL criterion 3 (demo): broke [1.50s / 30s budget]");
        assert!(matches!(run_criterion(0), Err(Error::Config(_))));
        assert!(matches!(run_criterion(10), Err(Error::Config(_))));
    }
}
