//! The statistical learners: the exponential-rate two-stage majority
//! learner, the linear-rate avoider/one-inclusion learner, and the ERM
//! baselines (plain first-consistent, and the deliberately bad schedule-led
//! variant that demonstrates how slow unrestricted ERM can be).
//!
//! **Exponential rate.**  [`exp_learner`] splits the sample in halves;
//! for each candidate batch size `t` it trains the online learner on the
//! `⌊n/2t⌋` consecutive length-`t` batches of the first half, scores the
//! fraction `ê_t` of batch predictors that err somewhere on the second
//! half, picks `t̂ = inf{t ≤ ⌊n/2⌋ : ê_t < 1/4}`, and outputs the
//! majority vote of the batch predictors at `t̂`.  Since the online
//! learner trained on `t*` i.i.d. pairs eventually has zero error with
//! probability ≥ 7/8, a Hoeffding argument makes the vote err only on an
//! exponentially small event.
//!
//! **Linear rate.**  [`lin_learner`] trains pattern avoiders on the
//! length-`t` batches of the first *quarter*, scores `ê_t` on the second
//! quarter by the sliding-window match test (an avoider fails if its
//! forbidden pattern is realized by some window `X_{s+1..s+τ}`,
//! `⌈n/4⌉ ≤ s ≤ ⌊n/2⌋ − τ`), picks `t̂ = inf{t ≤ ⌊n/4⌋ : ê_t < 1/4}`,
//! and feeds each avoider's pattern function to the one-inclusion
//! predictor over the labeled part `(X_{⌈n/2⌉}, …, X_n)` plus the query
//! point.  The output is the majority vote of these predictors.
//!
//! Both learners fall back to plain ERM when no candidate `t` qualifies
//! (`t̂ = ∞`), are deterministic functions of the sample, and use the
//! constants 1/4, `⌊n/2t⌋`, `⌊n/4t⌋` exactly as stated above.

use std::collections::HashMap;

use crate::bits::BitRow;
use crate::classes::{majority_block_range, ConceptClass, Domain, PointId};
use crate::online::OnlineRunner;
use crate::patterns::{
    avoider_step, build_pattern_class, forbidden, one_inclusion_predict, orient,
    EnumerationBudget, OneInclusionGraph, PatternAvoider,
};
use crate::{Error, Result};

/// Node budget for a single one-inclusion pattern-class build inside
/// [`lin_learner`]; exceeding it makes that query fall back to label 0.
const ONE_INCLUSION_BUILD_NODES: u64 = 2_000_000;

/// An ordered training sequence of `(point, label)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pairs: Vec<(PointId, u8)>,
}

impl Sample {
    /// Validate points against a domain and labels against {0,1}.
    pub fn new(pairs: Vec<(PointId, u8)>, domain: &Domain) -> Result<Self> {
        for &(x, y) in &pairs {
            domain.check(x)?;
            if y > 1 {
                return Err(Error::Config(format!("label must be 0 or 1, got {y}")));
            }
        }
        Ok(Sample { pairs })
    }

    /// The pairs in stream order.
    #[must_use]
    pub fn pairs(&self) -> &[(PointId, u8)] {
        &self.pairs
    }

    /// Number of pairs.
    #[must_use]
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// Whether the sample is empty.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// A deterministic total classifier over a finite domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classifier {
    /// An explicit label per domain point.
    Explicit {
        /// `labels.get(x)` is the prediction at point `x`.
        labels: BitRow,
    },
    /// Majority vote over component classifiers; ties predict 0.
    Majority {
        /// The voting components.
        components: Vec<Classifier>,
    },
    /// A one-inclusion predictor (pattern function applied to a labeled
    /// sample), tabulated over the domain at construction time.
    OneInclusion {
        /// Per-point predictions.
        labels: BitRow,
        /// Arity of the pattern function that produced them.
        arity: usize,
    },
}

impl Classifier {
    /// Number of points the classifier can be asked about: the tabulated
    /// length for leaf classifiers, the smallest component domain for votes
    /// (`usize::MAX` for an empty vote, which answers 0 everywhere).
    #[must_use]
    pub fn domain_size(&self) -> usize {
        match self {
            Classifier::Explicit { labels } | Classifier::OneInclusion { labels, .. } => {
                labels.len()
            }
            Classifier::Majority { components } => components
                .iter()
                .map(Classifier::domain_size)
                .min()
                .unwrap_or(usize::MAX),
        }
    }

    /// The prediction at `x`.  `x` must lie in the domain the classifier
    /// was built over.
    #[must_use]
    pub fn classify(&self, x: PointId) -> u8 {
        match self {
            Classifier::Explicit { labels } | Classifier::OneInclusion { labels, .. } => {
                labels.get(x as usize)
            }
            Classifier::Majority { components } => {
                let ones =
                    components.iter().filter(|c| c.classify(x) == 1).count();
                // Strict majority; ties (including zero components) are 0.
                u8::from(2 * ones > components.len())
            }
        }
    }
}

/// Train a fresh online learner on a stream prefix.  An observation that
/// would contradict the learner's committed constraints (impossible on
/// class-consistent data) freezes the state instead of erroring, keeping
/// the learners total.
fn online_trained<'a>(class: &'a ConceptClass, stream: &[(PointId, u8)]) -> Result<OnlineRunner<'a>> {
    let mut runner = OnlineRunner::new(class)?;
    for &(x, y) in stream {
        match runner.observe(x, y) {
            Ok(_) => {}
            Err(Error::Realizability(_)) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(runner)
}

/// Tabulate an online predictor over the whole domain.
fn materialize_runner(class: &ConceptClass, runner: &OnlineRunner<'_>) -> Result<Classifier> {
    let size = class.domain().size();
    let mut labels = BitRow::zeros(size);
    for x in 0..size {
        labels.set(x, runner.predict(x as PointId)? == 1);
    }
    Ok(Classifier::Explicit { labels })
}

/// The exponential-rate learner: batch online predictors on the first
/// half, `t̂` selected on the second half, majority vote at `t̂`; ERM when
/// no batch size qualifies.
pub fn exp_learner(class: &ConceptClass, sample: &Sample) -> Result<Classifier> {
    let n = sample.len();
    if n == 0 {
        return Err(Error::Config("exp_learner needs at least one example".into()));
    }
    let pairs = sample.pairs();
    let half = n / 2;
    // 1-indexed s > n/2 is 0-indexed s ≥ ⌊n/2⌋.
    let second_half = &pairs[half..];
    for t in 1..=half {
        let batches = n / (2 * t);
        let mut runners = Vec::with_capacity(batches);
        for i in 0..batches {
            runners.push(online_trained(class, &pairs[i * t..(i + 1) * t])?);
        }
        let mut failures = 0usize;
        for runner in &runners {
            let mut erred = false;
            for &(x, y) in second_half {
                if runner.predict(x)? != y {
                    erred = true;
                    break;
                }
            }
            if erred {
                failures += 1;
            }
        }
        // ê_t < 1/4, compared in integers.
        if 4 * failures < batches {
            let components = runners
                .iter()
                .map(|r| materialize_runner(class, r))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Classifier::Majority { components });
        }
    }
    erm_learner(class, sample)
}

/// The linear-rate learner: pattern avoiders on the first quarter, `t̂`
/// selected on the second quarter, one-inclusion predictors on the part
/// `X_{⌈n/2⌉}..X_n`, majority vote; ERM when no batch size qualifies.
/// Avoiders whose arity exceeds the labeled-part length are left out of
/// the vote.
pub fn lin_learner(class: &ConceptClass, sample: &Sample) -> Result<Classifier> {
    let n = sample.len();
    if n < 4 {
        return Err(Error::Config(format!("lin_learner needs at least 4 examples, got {n}")));
    }
    let pairs = sample.pairs();
    let quarter = n / 4;
    let q2_lo = n.div_ceil(4); // least integer s with s ≥ n/4
    let half_floor = n / 2;
    let mut chosen: Option<Vec<PatternAvoider<'_>>> = None;
    for t in 1..=quarter {
        let batches = n / (4 * t);
        let mut avoiders = Vec::with_capacity(batches);
        for i in 0..batches {
            let mut avoider = PatternAvoider::new(class);
            for &(x, y) in &pairs[i * t..(i + 1) * t] {
                avoider = avoider_step(&avoider, x, y)?;
            }
            avoiders.push(avoider);
        }
        let mut failures = 0usize;
        for avoider in &avoiders {
            if window_match_exists(avoider, pairs, q2_lo, half_floor)? {
                failures += 1;
            }
        }
        if 4 * failures < batches {
            chosen = Some(avoiders);
            break;
        }
    }
    let Some(avoiders) = chosen else {
        return erm_learner(class, sample);
    };
    // Labeled part: 1-indexed ⌈n/2⌉..n, of length ⌊n/2⌋ + 1.
    let labeled = &pairs[n.div_ceil(2) - 1..];
    let mut components = Vec::new();
    for avoider in &avoiders {
        if avoider.arity() > labeled.len() {
            continue;
        }
        components.push(one_inclusion_component(class, avoider, labeled)?);
    }
    if components.is_empty() {
        return erm_learner(class, sample);
    }
    Ok(Classifier::Majority { components })
}

/// The second-quarter failure test: does the avoider's forbidden pattern
/// match the realized labels of some window `X_{s+1..s+τ}` with
/// `⌈n/4⌉ ≤ s ≤ ⌊n/2⌋ − τ`?
fn window_match_exists(
    avoider: &PatternAvoider<'_>,
    pairs: &[(PointId, u8)],
    q2_lo: usize,
    half_floor: usize,
) -> Result<bool> {
    let tau = avoider.arity();
    let mv = MoveOracle::for_avoider(avoider)?;
    let mut s = q2_lo;
    while s + tau <= half_floor {
        let window = &pairs[s..s + tau];
        let tuple: Vec<PointId> = window.iter().map(|&(p, _)| p).collect();
        let labels = BitRow::from_fn(tau, |k| window[k].1 == 1);
        if mv.pattern(&tuple)? == labels {
            return Ok(true);
        }
        s += 1;
    }
    Ok(false)
}

/// Distinct labeled points and the multiset of `(point, label)` pairs, for
/// enumerating tuples by point values instead of raw coordinate tuples.
fn labeled_support(
    labeled: &[(PointId, u8)],
) -> (Vec<PointId>, HashMap<(PointId, u8), usize>) {
    let mut counts: HashMap<(PointId, u8), usize> = HashMap::new();
    for &pair in labeled {
        *counts.entry(pair).or_insert(0) += 1;
    }
    let mut support: Vec<PointId> = labeled.iter().map(|&(p, _)| p).collect();
    support.sort_unstable();
    support.dedup();
    (support, counts)
}

/// Memoized pattern-function evaluation keyed by the point tuple.
fn g_eval(
    mv: &MoveOracle<'_>,
    table: &mut HashMap<Vec<PointId>, BitRow>,
    tuple: &[PointId],
) -> Result<BitRow> {
    if let Some(hit) = table.get(tuple) {
        return Ok(hit.clone());
    }
    let value = mv.pattern(tuple)?;
    table.insert(tuple.to_vec(), value.clone());
    Ok(value)
}

/// Can the demanded `(point, label)` values be served by pairwise-distinct
/// labeled coordinates?  Slot `skip` (the query coordinate, when present)
/// is excluded.  Coordinates carrying equal values are interchangeable, so
/// an assignment is achievable exactly when no value is demanded beyond its
/// multiplicity.
fn demands_feasible(
    demands: &[(PointId, u8)],
    skip: usize,
    counts: &HashMap<(PointId, u8), usize>,
) -> bool {
    for (k, d) in demands.iter().enumerate() {
        if k == skip {
            continue;
        }
        let needed =
            demands[..=k].iter().enumerate().filter(|&(j, e)| j != skip && e == d).count();
        if counts.get(d).copied().unwrap_or(0) < needed {
            return false;
        }
    }
    true
}

/// Does some ordered `τ`-tuple of pairwise-distinct labeled coordinates
/// realize the forbidden pattern?  Point tuples are enumerated directly:
/// the pattern function fixes the demanded labels, which must then fit the
/// labeled multiset.
fn half_realizes(
    mv: &MoveOracle<'_>,
    table: &mut HashMap<Vec<PointId>, BitRow>,
    support: &[PointId],
    counts: &HashMap<(PointId, u8), usize>,
    tau: usize,
) -> Result<bool> {
    let mut points = vec![0 as PointId; tau];
    half_realizes_rec(mv, table, support, counts, &mut points, 0)
}

fn half_realizes_rec(
    mv: &MoveOracle<'_>,
    table: &mut HashMap<Vec<PointId>, BitRow>,
    support: &[PointId],
    counts: &HashMap<(PointId, u8), usize>,
    points: &mut [PointId],
    depth: usize,
) -> Result<bool> {
    let tau = points.len();
    if depth == tau {
        let pattern = g_eval(mv, table, points)?;
        let demands: Vec<(PointId, u8)> =
            points.iter().enumerate().map(|(k, &p)| (p, pattern.get(k))).collect();
        return Ok(demands_feasible(&demands, usize::MAX, counts));
    }
    for &p in support {
        points[depth] = p;
        if half_realizes_rec(mv, table, support, counts, points, depth + 1)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// For each label `b`, can some ordered `τ`-tuple holding the query
/// coordinate (labeled `b`) in exactly one slot, with the rest drawn from
/// the labeled coordinates, realize the forbidden pattern?  Both labels are
/// decided in one sweep: the pattern at the query slot is whatever the
/// pattern function demands there.
fn query_achievable(
    mv: &MoveOracle<'_>,
    table: &mut HashMap<Vec<PointId>, BitRow>,
    support: &[PointId],
    counts: &HashMap<(PointId, u8), usize>,
    tau: usize,
    x: PointId,
) -> Result<[bool; 2]> {
    let mut achieved = [false, false];
    let mut points = vec![0 as PointId; tau];
    for slot in 0..tau {
        points[slot] = x;
        query_achievable_rec(mv, table, support, counts, &mut points, slot, 0, &mut achieved)?;
        if achieved[0] && achieved[1] {
            break;
        }
    }
    Ok(achieved)
}

#[allow(clippy::too_many_arguments)]
fn query_achievable_rec(
    mv: &MoveOracle<'_>,
    table: &mut HashMap<Vec<PointId>, BitRow>,
    support: &[PointId],
    counts: &HashMap<(PointId, u8), usize>,
    points: &mut [PointId],
    query_slot: usize,
    depth: usize,
    achieved: &mut [bool; 2],
) -> Result<()> {
    let tau = points.len();
    if depth == tau {
        let pattern = g_eval(mv, table, points)?;
        let demands: Vec<(PointId, u8)> =
            points.iter().enumerate().map(|(k, &p)| (p, pattern.get(k))).collect();
        if demands_feasible(&demands, query_slot, counts) {
            achieved[pattern.get(query_slot) as usize] = true;
        }
        return Ok(());
    }
    if depth == query_slot {
        return query_achievable_rec(
            mv, table, support, counts, points, query_slot, depth + 1, achieved,
        );
    }
    for &p in support {
        points[depth] = p;
        query_achievable_rec(mv, table, support, counts, points, query_slot, depth + 1, achieved)?;
        if achieved[0] && achieved[1] {
            return Ok(());
        }
    }
    Ok(())
}

/// One voting component of [`lin_learner`]: the one-inclusion predictor of
/// the avoider's pattern function on the labeled part, tabulated over the
/// domain.
///
/// The per-query work short-circuits the full graph: the labeled bits are
/// fixed, so the pattern class restricted to them has at most two members
/// (the query bit free).  Membership of each candidate is decided by the
/// tuple tests directly — the half-internal tuples once per component, the
/// query-crossing tuples per candidate — which agrees with filtering the
/// materialized class.  A unique member answers its bit and no member
/// answers 0, exactly as the graph predictor would; only the genuine
/// two-completion case materializes the class and orients the graph (and
/// if that build exceeds its node budget, the query answers 0).
fn one_inclusion_component(
    class: &ConceptClass,
    avoider: &PatternAvoider<'_>,
    labeled: &[(PointId, u8)],
) -> Result<Classifier> {
    let tau = avoider.arity();
    let size = class.domain().size();
    let mut labels = BitRow::zeros(size);
    let mv = MoveOracle::for_avoider(avoider)?;
    let mut table: HashMap<Vec<PointId>, BitRow> = HashMap::new();
    let (support, counts) = labeled_support(labeled);
    if !half_realizes(&mv, &mut table, &support, &counts, tau)? {
        for x in 0..size {
            let x = x as PointId;
            let achieved = query_achievable(&mv, &mut table, &support, &counts, tau, x)?;
            let (zero_ok, one_ok) = (!achieved[0], !achieved[1]);
            let bit = match (zero_ok, one_ok) {
                (true, false) => 0,
                (false, true) => 1,
                (false, false) => 0,
                (true, true) => two_completion_predict(avoider, &mv, &mut table, labeled, x)?,
            };
            labels.set(x as usize, bit == 1);
        }
    }
    Ok(Classifier::OneInclusion { labels, arity: tau })
}

/// The two-completion case: build the full pattern class over the labeled
/// points plus the query, orient its one-inclusion graph, and answer with
/// the head of the edge between the two completions.
fn two_completion_predict(
    avoider: &PatternAvoider<'_>,
    mv: &MoveOracle<'_>,
    table: &mut HashMap<Vec<PointId>, BitRow>,
    labeled: &[(PointId, u8)],
    x: PointId,
) -> Result<u8> {
    let mut points: Vec<PointId> = labeled.iter().map(|&(p, _)| p).collect();
    points.push(x);
    let budget =
        EnumerationBudget { max_points: points.len(), max_nodes: ONE_INCLUSION_BUILD_NODES };
    let built = build_pattern_class(
        &points,
        avoider.arity(),
        |tuple| g_eval(mv, table, tuple),
        &budget,
    );
    let set = match built {
        Ok(set) => set,
        Err(Error::Budget(_)) => return Ok(0),
        Err(e) => return Err(e),
    };
    let graph = orient(&OneInclusionGraph::new(set)?);
    let loo: Vec<(usize, u8)> = labeled.iter().enumerate().map(|(j, &(_, y))| (j, y)).collect();
    one_inclusion_predict(&graph, &loo, labeled.len())
}

/// Plain ERM: the first hypothesis in canonical order consistent with the
/// sample.
pub fn erm_learner(class: &ConceptClass, sample: &Sample) -> Result<Classifier> {
    let rows = class.rows()?;
    for row in rows {
        if sample.pairs().iter().all(|&(x, y)| row.get(x as usize) == y) {
            return Ok(Classifier::Explicit { labels: row.clone() });
        }
    }
    Err(Error::Realizability("no hypothesis is consistent with the sample".into()))
}

/// The online learner run once over the whole sample as a stream, then
/// tabulated — the baseline the batch learners are built from.
pub fn online_as_batch(class: &ConceptClass, sample: &Sample) -> Result<Classifier> {
    let runner = online_trained(class, sample.pairs())?;
    materialize_runner(class, &runner)
}

/// The deliberately bad ERM of the majority-blocks family.  On all-zeros
/// data it outputs a consistent at-least-half indicator from the *first
/// scheduled block* that still has one — preferring the biggest available
/// sets exactly as the slow-ERM construction prescribes — and only falls
/// back to the canonical block scan when no scheduled block works or some
/// label is 1.  `schedule` lists the scheduled block levels in order.
pub fn adversarial_erm(
    class: &ConceptClass,
    schedule: &[u32],
    sample: &Sample,
) -> Result<Classifier> {
    let Some(levels) = class.majority_blocks_levels() else {
        return Err(Error::Config(
            "adversarial_erm needs an unrestricted majority-blocks class".into(),
        ));
    };
    for &level in schedule {
        if level == 0 || level > levels {
            return Err(Error::Config(format!(
                "scheduled level {level} outside the class's 1..={levels}"
            )));
        }
    }
    let size = class.domain().size();
    let mut ones: Vec<PointId> = Vec::new();
    let mut zeros: Vec<PointId> = Vec::new();
    for &(x, y) in sample.pairs() {
        if y == 1 {
            ones.push(x);
        } else {
            zeros.push(x);
        }
    }
    ones.sort_unstable();
    ones.dedup();
    zeros.sort_unstable();
    zeros.dedup();
    if ones.iter().any(|x| zeros.binary_search(x).is_ok()) {
        return Err(Error::Realizability(
            "a point carries both labels; no hypothesis is consistent".into(),
        ));
    }
    if ones.is_empty() {
        // The schedule-led branch: the first scheduled block that still
        // admits a consistent at-least-half indicator.
        for &level in schedule {
            if let Some(indicator) = consistent_block_indicator(level, &ones, &zeros, size) {
                return Ok(Classifier::Explicit { labels: indicator });
            }
        }
    }
    // Canonical ERM scan over all blocks in domain order.
    for level in 1..=levels {
        if let Some(indicator) = consistent_block_indicator(level, &ones, &zeros, size) {
            return Ok(Classifier::Explicit { labels: indicator });
        }
    }
    Err(Error::Realizability("no block admits a consistent hypothesis".into()))
}

/// A consistent at-least-half indicator inside one block, if any: it must
/// contain every 1-labeled point, avoid every 0-labeled point, and reach
/// the block's quota `2^{level−1}`, filling with the smallest unlabeled
/// ids.
fn consistent_block_indicator(
    level: u32,
    ones: &[PointId],
    zeros: &[PointId],
    domain_size: usize,
) -> Option<BitRow> {
    let range = majority_block_range(level);
    if ones.iter().any(|x| !range.contains(x)) {
        return None;
    }
    let quota = 1usize << (level - 1);
    let mut members: Vec<PointId> = ones.to_vec();
    let mut fill = range.clone().filter(|x| {
        zeros.binary_search(x).is_err() && ones.binary_search(x).is_err()
    });
    while members.len() < quota {
        members.push(fill.next()?);
    }
    let mut labels = BitRow::zeros(domain_size);
    for &x in &members {
        labels.set(x as usize, true);
    }
    Some(labels)
}
