//! Realizable distributions over labeled points and the adversarial
//! lower-bound constructions built from them.
//!
//! A [`RealizableDistribution`] is a finite support of `((point, label),
//! probability)` entries together with a certificate hypothesis that makes
//! zero errors on the support — so realizability is checked, never assumed.
//! On top of that sit:
//!
//! * [`exact_error`] — exact evaluation of a classifier's error mass, which
//!   replaces held-out test sets everywhere in the crate;
//! * [`sample`] — seeded, reproducible i.i.d. draws;
//! * [`littlestone_adversary_dist`] / [`vcl_adversary_dist`] — distributions
//!   concentrated on one branch of a witness tree, with geometric masses
//!   (truncated: the tail mass is folded into the deepest level) and
//!   schedule-driven masses respectively;
//! * [`build_slow_schedule`] — the slow-rate probability schedule
//!   `(n_i, k_i, p_{k_i}, C)`, built in exact power-of-two arithmetic
//!   ([`crate::mag`]) so its defining inequalities can be *re-verified*
//!   rather than trusted, even when the sequences grow to tower-of-exponent
//!   scale;
//! * [`exp_lower_bound_pair`] — the two half-half distributions that force a
//!   minimum average error on any learner;
//! * [`erm_failure_fixture`] — a scheduled-blocks distribution on which the
//!   canonical (first-consistent) empirical risk minimizer provably stalls
//!   at a target rate.
//!
//! Exactness policy: masses that are dyadic rationals are exact in `f64`,
//! and all schedule arithmetic is exact; wherever general reals are
//! unavoidable (tabulated rates, uniform masses over non-power-of-two
//! domains) comparisons use an absolute tolerance of `1e-12`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::classes::{majority_block_range, ClassSpec, ConceptClass, Domain, PointId};
use crate::learners::{Classifier, Sample};
use crate::mag::{Mag, MagRatio};
use crate::trees::{LittlestoneTree, VCLTree};
use crate::{Error, Result};

/// Absolute tolerance for floating-point probability bookkeeping (mass sums,
/// non-dyadic weights).  Dyadic masses are exact and need no slack.
pub const PROB_TOLERANCE: f64 = 1e-12;

/// Largest sample size scanned when searching for scheduled block sizes in
/// [`erm_failure_fixture`].
pub const ERM_SEARCH_CAP: u64 = 1 << 22;

/// Depth cap for [`synthetic_vcl_tree`]: level `k` holds `2^{k(k+1)/2}`
/// tuples, so depth 6 is already ~200k points.
pub const SYNTHETIC_VCL_DEPTH_CAP: usize = 6;

// ---------------------------------------------------------------------------
// RealizableDistribution
// ---------------------------------------------------------------------------

/// A finite distribution over `(point, label)` pairs together with a
/// certificate hypothesis (an explicit labeling of the ambient domain) that
/// has exact error 0 on the support.
///
/// Invariants, all enforced at construction: probabilities are positive and
/// finite and sum to 1 within [`PROB_TOLERANCE`]; support keys are distinct
/// and sorted; every support point lies inside the certificate's domain; and
/// the certificate agrees with every support label.
#[derive(Clone, Debug)]
pub struct RealizableDistribution {
    support: Vec<((PointId, u8), f64)>,
    certificate: BitRow,
}

impl RealizableDistribution {
    /// Validate and build.  `certificate` doubles as the domain bound: every
    /// support point must be `< certificate.len()`.
    pub fn new(
        mut support: Vec<((PointId, u8), f64)>,
        certificate: BitRow,
    ) -> Result<RealizableDistribution> {
        if support.is_empty() {
            return Err(Error::Config("distribution support must be nonempty".into()));
        }
        support.sort_unstable_by_key(|&(key, _)| key);
        let mut total = 0.0f64;
        let mut prev: Option<(PointId, u8)> = None;
        for &((x, y), p) in &support {
            if y > 1 {
                return Err(Error::Config(format!("support label {y} at point {x} is not binary")));
            }
            if (x as usize) >= certificate.len() {
                return Err(Error::Config(format!(
                    "support point {x} lies outside the certificate domain of size {}",
                    certificate.len()
                )));
            }
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::Config(format!("probability {p} at point {x} is not positive")));
            }
            if prev == Some((x, y)) {
                return Err(Error::Config(format!("duplicate support entry ({x}, {y})")));
            }
            prev = Some((x, y));
            total += p;
        }
        if (total - 1.0).abs() > PROB_TOLERANCE {
            return Err(Error::Config(format!("support mass sums to {total}, not 1")));
        }
        for &((x, y), _) in &support {
            if certificate.get(x as usize) != y {
                return Err(Error::Construction(format!(
                    "certificate labels point {x} as {}, but the support carries ({x}, {y}) \
                     with positive mass — the distribution is not certified realizable",
                    certificate.get(x as usize)
                )));
            }
        }
        Ok(RealizableDistribution { support, certificate })
    }

    /// Support entries, sorted by `(point, label)`.
    #[must_use]
    pub fn support(&self) -> &[((PointId, u8), f64)] {
        &self.support
    }

    /// The zero-error certificate labeling.
    #[must_use]
    pub fn certificate(&self) -> &BitRow {
        &self.certificate
    }

    /// Size of the ambient domain (the certificate's length).
    #[must_use]
    pub fn domain_size(&self) -> usize {
        self.certificate.len()
    }

    /// Total support mass (1 within [`PROB_TOLERANCE`], by construction).
    #[must_use]
    pub fn total_mass(&self) -> f64 {
        self.support.iter().map(|&(_, p)| p).sum()
    }

    /// Exact total-variation distance to `other`: `½ Σ |p − q|` over the
    /// union of the two supports.
    #[must_use]
    pub fn tv_distance(&self, other: &RealizableDistribution) -> f64 {
        let mut merged: BTreeMap<(PointId, u8), (f64, f64)> = BTreeMap::new();
        for &(key, p) in &self.support {
            merged.entry(key).or_insert((0.0, 0.0)).0 += p;
        }
        for &(key, q) in &other.support {
            merged.entry(key).or_insert((0.0, 0.0)).1 += q;
        }
        0.5 * merged.values().map(|&(p, q)| (p - q).abs()).sum::<f64>()
    }

    /// Human-readable support table for the CLI `describe` command.
    #[must_use]
    pub fn describe_lines(&self) -> Vec<String> {
        let mut lines = Vec::with_capacity(self.support.len() + 2);
        lines.push(format!(
            "support: {} entries over a domain of {} points",
            self.support.len(),
            self.domain_size()
        ));
        lines.push("point  label  prob".into());
        for &((x, y), p) in &self.support {
            lines.push(format!("{x:>5}  {y:>5}  {p:.10}"));
        }
        let cert = if self.certificate.len() <= 64 {
            self.certificate.iter_bits().map(|b| if b == 1 { '1' } else { '0' }).collect::<String>()
        } else {
            format!("({} ones over {} points)", self.certificate.count_ones(), self.certificate.len())
        };
        lines.push(format!("certificate: {cert}"));
        lines
    }
}

/// Exact error of `classifier` under `dist`: the total mass of support
/// entries `((x, y), p)` with `classifier(x) ≠ y`.
pub fn exact_error(classifier: &Classifier, dist: &RealizableDistribution) -> Result<f64> {
    let reach = classifier.domain_size();
    let mut err = 0.0f64;
    for &((x, y), p) in &dist.support {
        if (x as usize) >= reach {
            return Err(Error::Domain(format!(
                "support point {x} lies outside the classifier's domain of size {reach}"
            )));
        }
        if classifier.classify(x) != y {
            err += p;
        }
    }
    Ok(err)
}

/// Draw `n` i.i.d. pairs from `dist`, reproducibly for a given `seed`.
pub fn sample(dist: &RealizableDistribution, n: usize, seed: u64) -> Result<Sample> {
    let domain = Domain::indexed(dist.domain_size());
    if n == 0 {
        return Sample::new(Vec::new(), &domain);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let index = WeightedIndex::new(dist.support.iter().map(|&(_, p)| p))
        .map_err(|e| Error::Config(format!("unsampleable weights: {e}")))?;
    let pairs: Vec<(PointId, u8)> = (0..n).map(|_| dist.support[index.sample(&mut rng)].0).collect();
    Sample::new(pairs, &domain)
}

// ---------------------------------------------------------------------------
// Branch distribution on a Littlestone tree
// ---------------------------------------------------------------------------

/// The adversarial distribution concentrated on one branch of a Littlestone
/// tree: mass `2^{−k−1}` on the level-`k` branch point for `k < d−1`, with
/// the entire remaining tail mass `2^{−(d−1)}` folded onto the deepest
/// branch point.  The certificate labels each branch point by its branch
/// label (every root path of a witness tree is realizable, so some
/// hypothesis agrees with it; the explicit labeling stands in for one).
pub fn littlestone_adversary_dist(
    tree: &LittlestoneTree,
    y: &[u8],
) -> Result<RealizableDistribution> {
    let d = tree.depth();
    if d == 0 {
        return Err(Error::Config("branch distribution needs a tree of depth >= 1".into()));
    }
    if y.len() != d {
        return Err(Error::Config(format!(
            "branch has {} labels but the tree has depth {d}",
            y.len()
        )));
    }
    if y.iter().any(|&b| b > 1) {
        return Err(Error::Config("branch labels must be binary".into()));
    }
    let mut masses: BTreeMap<(PointId, u8), f64> = BTreeMap::new();
    let mut labels: BTreeMap<PointId, u8> = BTreeMap::new();
    let mut max_point = 0u32;
    for k in 0..d {
        let point = tree.point(y, k);
        let label = y[k];
        #[allow(clippy::cast_possible_wrap)]
        let mass = if k + 1 < d {
            (2f64).powi(-(k as i32) - 1)
        } else {
            (2f64).powi(-((d as i32) - 1))
        };
        if mass <= 0.0 {
            return Err(Error::Config(format!(
                "branch mass 2^-{k} underflows f64; the tree is too deep to materialize"
            )));
        }
        match labels.insert(point, label) {
            Some(old) if old != label => {
                return Err(Error::Construction(format!(
                    "branch revisits point {point} with conflicting labels"
                )));
            }
            _ => {}
        }
        *masses.entry((point, label)).or_insert(0.0) += mass;
        max_point = max_point.max(point);
    }
    let mut certificate = BitRow::zeros(max_point as usize + 1);
    for (&point, &label) in &labels {
        certificate.set(point as usize, label == 1);
    }
    RealizableDistribution::new(masses.into_iter().collect(), certificate)
}

// ---------------------------------------------------------------------------
// Simple realizable constructions over explicit classes
// ---------------------------------------------------------------------------

/// Uniform-mass realizable distribution: every domain point gets mass
/// `1/|domain|`, labeled by the class's `target`-th hypothesis (canonical
/// row order), which also serves as the certificate.
pub fn uniform_realizable(class: &ConceptClass, target: usize) -> Result<RealizableDistribution> {
    let rows = class.rows()?;
    let row = rows
        .get(target)
        .ok_or_else(|| {
            Error::Config(format!("target index {target} out of range for {} hypotheses", rows.len()))
        })?
        .clone();
    let m = class.domain().size();
    let mass = 1.0 / m as f64;
    let support = (0..m).map(|x| ((x as PointId, row.get(x)), mass)).collect();
    RealizableDistribution::new(support, row)
}

/// Weighted realizable distribution: point `x` gets mass `weights[x]`,
/// labeled by `target` (which must be a hypothesis of the class and becomes
/// the certificate).  Zero weights drop the point from the support; the
/// positive weights must sum to 1 within [`PROB_TOLERANCE`].
pub fn weighted_realizable(
    class: &ConceptClass,
    target: &BitRow,
    weights: &[f64],
) -> Result<RealizableDistribution> {
    let rows = class.rows()?;
    if !rows.contains(target) {
        return Err(Error::Config("target labeling is not a hypothesis of the class".into()));
    }
    let m = class.domain().size();
    if weights.len() != m {
        return Err(Error::Config(format!(
            "got {} weights for a domain of {m} points",
            weights.len()
        )));
    }
    let support = weights
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w != 0.0)
        .map(|(x, &w)| ((x as PointId, target.get(x)), w))
        .collect();
    RealizableDistribution::new(support, target.clone())
}

// ---------------------------------------------------------------------------
// Two-distribution exponential lower bound
// ---------------------------------------------------------------------------

/// The classic two-distribution lower-bound pair: find hypotheses `h_a, h_b`
/// in the class that agree at some point `x` and differ at some point `x'`,
/// and return the pair `P_i = ½·δ_{(x, h_a(x))} + ½·δ_{(x', i)}` for
/// `i ∈ {0, 1}`.  Both are certified realizable (by `h_a` or `h_b`,
/// whichever labels `x'` as `i`).  Any learner that sees only draws of
/// `(x, ·)` cannot tell the two apart, which forces a minimum average error.
pub fn exp_lower_bound_pair(
    class: &ConceptClass,
) -> Result<(RealizableDistribution, RealizableDistribution)> {
    let rows = class.rows()?;
    if rows.len() < 3 {
        return Err(Error::Construction(format!(
            "need at least 3 hypotheses to pick an agreeing-then-disagreeing pair, got {}",
            rows.len()
        )));
    }
    let m = class.domain().size();
    for a in 0..rows.len() {
        for b in (a + 1)..rows.len() {
            let agree = (0..m).find(|&x| rows[a].get(x) == rows[b].get(x));
            let differ = (0..m).find(|&x| rows[a].get(x) != rows[b].get(x));
            let (Some(x_eq), Some(x_df)) = (agree, differ) else { continue };
            let shared = ((x_eq as PointId, rows[a].get(x_eq)), 0.5);
            let build = |label: u8| -> Result<RealizableDistribution> {
                let cert =
                    if rows[a].get(x_df) == label { rows[a].clone() } else { rows[b].clone() };
                RealizableDistribution::new(
                    vec![shared, ((x_df as PointId, label), 0.5)],
                    cert,
                )
            };
            return Ok((build(0)?, build(1)?));
        }
    }
    Err(Error::Construction(
        "no two hypotheses agree anywhere on the domain; the half-half pair does not exist".into(),
    ))
}

// ---------------------------------------------------------------------------
// Rate functions
// ---------------------------------------------------------------------------

/// A nonincreasing target rate `R` with `R(1) = 1`, evaluable both
/// approximately (`f64`, for plots) and exactly (as a [`MagRatio`], for
/// schedule invariants).  Exact evaluation is partial: it succeeds precisely
/// where the value is a ratio of signed power-of-two sums and reports a
/// construction error elsewhere (e.g. `1/(1+log₂ n)` away from powers of
/// two) rather than rounding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateFn {
    /// `R(n) = 1/(1 + log₂ n)`: decays slower than any power law.
    InverseLog,
    /// `R(n) = n^{−1/2}`.
    InverseSqrt,
    /// `R(n) = 1/n`.
    InverseLinear,
    /// Right-continuous step function through `(n_j, v_j)` breakpoints,
    /// normalized by `v_0` so that `R(1) = 1`; constant at `v_j/v_0` on
    /// `[n_j, n_{j+1})` and at the last value beyond the table.
    Tabulated { breakpoints: Vec<(u64, f64)> },
}

impl RateFn {
    /// Short display name.
    #[must_use]
    pub fn name(&self) -> &'static str {
        match self {
            RateFn::InverseLog => "inverse-log",
            RateFn::InverseSqrt => "inverse-sqrt",
            RateFn::InverseLinear => "inverse-linear",
            RateFn::Tabulated { .. } => "tabulated",
        }
    }

    /// Structural validation (only the tabulated form can be malformed:
    /// breakpoints must start at `n = 1`, have strictly increasing `n` and
    /// positive nonincreasing values).
    pub fn validate(&self) -> Result<()> {
        let RateFn::Tabulated { breakpoints } = self else { return Ok(()) };
        let Some(&(first_n, _)) = breakpoints.first() else {
            return Err(Error::Config("rate table must be nonempty".into()));
        };
        if first_n != 1 {
            return Err(Error::Config(format!("rate table must start at n = 1, got n = {first_n}")));
        }
        for window in breakpoints.windows(2) {
            let ((n0, v0), (n1, v1)) = (window[0], window[1]);
            if n1 <= n0 {
                return Err(Error::Config(format!(
                    "rate table breakpoints must increase strictly: {n0} then {n1}"
                )));
            }
            if v1 > v0 {
                return Err(Error::Config(format!(
                    "rate table values must be nonincreasing: {v0} then {v1}"
                )));
            }
        }
        for &(n, v) in breakpoints {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("rate table value {v} at n = {n} is not positive")));
            }
        }
        Ok(())
    }

    /// Approximate evaluation for plotting and Monte-Carlo thresholds.
    #[must_use]
    pub fn eval_f64(&self, n: u64) -> f64 {
        let n = n.max(1);
        match self {
            RateFn::InverseLog => 1.0 / (1.0 + (n as f64).log2()),
            RateFn::InverseSqrt => 1.0 / (n as f64).sqrt(),
            RateFn::InverseLinear => 1.0 / n as f64,
            RateFn::Tabulated { breakpoints } => {
                table_value_at(breakpoints, n as u128) / breakpoints[0].1
            }
        }
    }

    /// Exact evaluation at an integer `n ≥ 1`, as an exact ratio.  Errors
    /// with [`Error::Construction`] where the value is irrational in this
    /// representation (never silently rounds).
    pub fn exact_at(&self, n: &Mag) -> Result<MagRatio> {
        if n.cmp_value(&Mag::one()) == Ordering::Less || !n.is_integer() {
            return Err(Error::Config("rates are evaluated at integers n >= 1".into()));
        }
        match self {
            RateFn::InverseLog => {
                if let Some(e) = n.single_pow2() {
                    // R(2^e) = 1/(1+e), exactly.
                    MagRatio::new(Mag::one(), e.add(&Mag::one()))
                } else {
                    Err(Error::Construction(
                        "inverse-log rate is exactly representable only at powers of two".into(),
                    ))
                }
            }
            RateFn::InverseSqrt => {
                if let Some(v) = n.to_u128() {
                    let s = v.isqrt();
                    if s * s == v {
                        return MagRatio::new(Mag::one(), Mag::from_u128(s));
                    }
                    return Err(Error::Construction(format!(
                        "inverse-sqrt rate at non-square n = {v} is irrational"
                    )));
                }
                if let Some(e) = n.single_pow2() {
                    let half = e.halve();
                    if half.is_integer() {
                        return MagRatio::new(Mag::one(), Mag::pow2(half));
                    }
                }
                Err(Error::Construction(
                    "inverse-sqrt rate is irrational at this n (not a perfect square)".into(),
                ))
            }
            RateFn::InverseLinear => MagRatio::new(Mag::one(), n.clone()),
            RateFn::Tabulated { breakpoints } => {
                let value = match n.to_u128() {
                    Some(v) => table_value_at(breakpoints, v),
                    // Beyond any u128 the step function sits at its last value.
                    None => breakpoints.last().expect("validated nonempty").1,
                };
                MagRatio::new(Mag::from_f64_exact(value)?, Mag::from_f64_exact(breakpoints[0].1)?)
            }
        }
    }

    /// Least integer `n > n_prev` with `R(n) ≤ eps`, exactly.  Errors where
    /// that boundary is not exactly computable (irrational thresholds,
    /// exhausted tables).
    pub fn least_n_at_most(&self, eps: &MagRatio, n_prev: &Mag) -> Result<Mag> {
        if eps.sign() <= 0 {
            return Err(Error::Config("rate threshold must be positive".into()));
        }
        let next = n_prev.add(&Mag::one());
        if eps.cmp_value(&MagRatio::one()) != Ordering::Less {
            return Ok(next); // R(n) ≤ R(1) = 1 ≤ eps everywhere
        }
        let candidate = match self {
            RateFn::InverseLog => {
                // R(n) ≤ eps  ⟺  log₂ n ≥ 1/eps − 1 =: q; least integer n is
                // 2^q when q is an integer and irrational otherwise.
                let q = eps.recip()?.sub(&MagRatio::one());
                if q.sign() <= 0 {
                    return Ok(next);
                }
                match q.as_integer()? {
                    Some(m) => Mag::pow2(m),
                    None => {
                        return Err(Error::Construction(
                            "inverse-log boundary 2^(1/eps - 1) is not an integer power of two"
                                .into(),
                        ))
                    }
                }
            }
            RateFn::InverseSqrt => {
                // R(n) ≤ eps ⟺ n ≥ (1/eps)².
                let q = eps.recip()?;
                q.mul(&q).ceil()?
            }
            RateFn::InverseLinear => eps.recip()?.ceil()?,
            RateFn::Tabulated { breakpoints } => {
                let Some(np) = n_prev.to_u128() else {
                    return Err(Error::Construction(
                        "rate table exhausted: previous n already exceeds the table".into(),
                    ));
                };
                let v0 = Mag::from_f64_exact(breakpoints[0].1)?;
                let ratio_at = |value: f64| -> Result<MagRatio> {
                    MagRatio::new(Mag::from_f64_exact(value)?, v0.clone())
                };
                let at_next = ratio_at(table_value_at(breakpoints, np + 1))?;
                if at_next.cmp_value(eps) != Ordering::Greater {
                    return Ok(Mag::from_u128(np + 1));
                }
                // The step function only decreases at breakpoints, so the
                // least qualifying n is the first qualifying breakpoint.
                for &(bn, bv) in breakpoints {
                    if (bn as u128) > np + 1
                        && ratio_at(bv)?.cmp_value(eps) != Ordering::Greater
                    {
                        return Ok(Mag::from_u128(bn as u128));
                    }
                }
                return Err(Error::Construction(
                    "rate table exhausted before reaching the target threshold".into(),
                ));
            }
        };
        Ok(if candidate.cmp_value(&next) == Ordering::Less { next } else { candidate })
    }
}

/// Step-function lookup: the value at the last breakpoint with `n_j ≤ n`.
fn table_value_at(breakpoints: &[(u64, f64)], n: u128) -> f64 {
    let mut value = breakpoints[0].1;
    for &(bn, bv) in breakpoints {
        if bn as u128 <= n {
            value = bv;
        } else {
            break;
        }
    }
    value
}

// ---------------------------------------------------------------------------
// Slow-rate schedule
// ---------------------------------------------------------------------------

/// The slow-rate probability schedule: sizes `n_i`, block arities `k_i`,
/// block masses `p_{k_i}` and the normalizer `C`, truncated at `i_max`
/// levels and renormalized so the masses sum to exactly 1.
///
/// Built by [`build_slow_schedule`]; [`SlowRateSchedule::verify`] recomputes
/// every defining inequality from scratch (pure checker, no reuse of build
/// intermediates), in exact arithmetic:
///
/// * (a) `Σ_{j>i} p_{k_j} ≤ 1/n_i` for every `i`,
/// * (b) `n_i · p_{k_i} ≤ k_i` for every `i`,
/// * (c) `p_{k_i} = C · R(n_i)` exactly, with `C = 1/Σ_{j≤i_max} R(n_j)`,
/// * `½ ≤ C ≤ 1`, `n_1 = k_1 = 1`, and both sequences strictly increasing.
#[derive(Clone, Debug)]
pub struct SlowRateSchedule {
    rate: RateFn,
    n: Vec<Mag>,
    k: Vec<Mag>,
    p: Vec<MagRatio>,
    c: MagRatio,
}

impl SlowRateSchedule {
    /// The rate the schedule was built for.
    #[must_use]
    pub fn rate(&self) -> &RateFn {
        &self.rate
    }

    /// Truncation level (number of schedule entries).
    #[must_use]
    pub fn i_max(&self) -> usize {
        self.n.len()
    }

    /// The sizes `n_1 < n_2 < …` (exact).
    #[must_use]
    pub fn n_seq(&self) -> &[Mag] {
        &self.n
    }

    /// The block arities `k_1 < k_2 < …` (exact).
    #[must_use]
    pub fn k_seq(&self) -> &[Mag] {
        &self.k
    }

    /// The block masses `p_{k_i}` (exact; they sum to exactly 1).
    #[must_use]
    pub fn p_seq(&self) -> &[MagRatio] {
        &self.p
    }

    /// The normalizer `C` (exact).
    #[must_use]
    pub fn c(&self) -> &MagRatio {
        &self.c
    }

    /// Recompute and check every schedule invariant from the stored
    /// sequences alone.  Errors name the violated clause.
    pub fn verify(&self) -> Result<()> {
        let i_max = self.n.len();
        if i_max == 0 || self.k.len() != i_max || self.p.len() != i_max {
            return Err(Error::Construction("schedule sequences are empty or ragged".into()));
        }
        let one = Mag::one();
        if self.n[0].cmp_value(&one) != Ordering::Equal
            || self.k[0].cmp_value(&one) != Ordering::Equal
        {
            return Err(Error::Construction("schedule must start at n_1 = k_1 = 1".into()));
        }
        for i in 1..i_max {
            if self.n[i].cmp_value(&self.n[i - 1]) != Ordering::Greater {
                return Err(Error::Construction(format!(
                    "sizes must increase strictly: n_{} !> n_{}",
                    i + 1,
                    i
                )));
            }
            if self.k[i].cmp_value(&self.k[i - 1]) != Ordering::Greater {
                return Err(Error::Construction(format!(
                    "arities must increase strictly: k_{} !> k_{}",
                    i + 1,
                    i
                )));
            }
        }
        // Recompute R(n_i) and C independently of the build.
        let rates: Vec<MagRatio> =
            self.n.iter().map(|n| self.rate.exact_at(n)).collect::<Result<_>>()?;
        let total = rates.iter().fold(MagRatio::zero(), |acc, r| acc.add(r));
        let c = total.recip()?;
        if self.c.cmp_value(&c) != Ordering::Equal {
            return Err(Error::Construction(
                "normalizer mismatch: C != 1 / sum of R(n_j)".into(),
            ));
        }
        let one_ratio = MagRatio::one();
        let half = MagRatio::new(Mag::one(), Mag::from_u128(2))?;
        if self.c.cmp_value(&half) == Ordering::Less
            || self.c.cmp_value(&one_ratio) == Ordering::Greater
        {
            return Err(Error::Construction("normalizer C falls outside [1/2, 1]".into()));
        }
        for i in 0..i_max {
            // (c) p_{k_i} = C·R(n_i) exactly.
            if self.p[i].cmp_value(&c.mul(&rates[i])) != Ordering::Equal {
                return Err(Error::Construction(format!(
                    "clause (c) fails at i = {}: p_k != C*R(n)",
                    i + 1
                )));
            }
            // (b) n_i p_{k_i} ≤ k_i.
            let lhs = self.p[i].mul_mag(&self.n[i]);
            if lhs.cmp_value(&MagRatio::from_mag(self.k[i].clone())) == Ordering::Greater {
                return Err(Error::Construction(format!(
                    "clause (b) fails at i = {}: n*p_k > k",
                    i + 1
                )));
            }
            if i + 1 < i_max && self.p[i].cmp_value(&self.p[i + 1]) != Ordering::Greater {
                return Err(Error::Construction(format!(
                    "block masses must decrease strictly: p_{} !> p_{}",
                    i + 1,
                    i + 2
                )));
            }
        }
        // (a) Σ_{j>i} p_{k_j} ≤ 1/n_i  ⟺  n_i · tail ≤ 1.  Clause (c) has
        // already pinned every p_{k_j} to C·R(n_j) exactly, so the tail can
        // be computed as C·Σ_{j>i} R(n_j): summing the unreduced p_j
        // directly would multiply their denominators together and square
        // the term count at every step, which is intractable once the
        // schedule reaches tower-of-exponents scale.
        let mut rate_tail = MagRatio::zero();
        for i in (0..i_max).rev() {
            let tail = c.mul(&rate_tail);
            if tail.mul_mag(&self.n[i]).cmp_value(&one_ratio) == Ordering::Greater {
                return Err(Error::Construction(format!(
                    "clause (a) fails at i = {}: tail mass exceeds 1/n",
                    i + 1
                )));
            }
            rate_tail = rate_tail.add(&rates[i]);
        }
        Ok(())
    }

    /// Human-readable rows for the CLI `describe` command.
    #[must_use]
    pub fn describe_lines(&self) -> Vec<String> {
        let mut lines = Vec::with_capacity(self.n.len() + 1);
        lines.push(format!(
            "rate {}  i_max {}  C = {} ~ {:.6}",
            self.rate.name(),
            self.i_max(),
            self.c,
            self.c.to_f64()
        ));
        for i in 0..self.n.len() {
            lines.push(format!(
                "i={} n_i={} k_i={} p_k={} ~ {:.4e}",
                i + 1,
                self.n[i],
                self.k[i],
                self.p[i],
                self.p[i].to_f64()
            ));
        }
        lines
    }
}

/// Build the slow-rate schedule for `rate`, truncated at `i_max` levels,
/// entirely in exact arithmetic:
///
/// * `n_1 = k_1 = 1`;
/// * `n_i` = least `n > n_{i−1}` with `R(n) ≤ min_{j<i} R(n_j)·2^{j−i}/k_j`;
/// * `k_i = max(⌈n_i·R(n_i)⌉, k_{i−1}+1)`;
/// * `C = 1/Σ_{j≤i_max} R(n_j)` (truncated renormalization), and
///   `p_{k_i} = C·R(n_i)`.
///
/// The result is re-verified with [`SlowRateSchedule::verify`] before being
/// returned.
pub fn build_slow_schedule(rate: &RateFn, i_max: usize) -> Result<SlowRateSchedule> {
    if i_max == 0 {
        return Err(Error::Config("schedule needs at least one level".into()));
    }
    if i_max > 32 {
        return Err(Error::Config("schedule truncation is capped at 32 levels".into()));
    }
    rate.validate()?;
    let one = Mag::one();
    let r1 = rate.exact_at(&one)?;
    if r1.cmp_value(&MagRatio::one()) != Ordering::Equal {
        return Err(Error::Config("rate must be normalized so that R(1) = 1".into()));
    }
    let mut n: Vec<Mag> = vec![one.clone()];
    let mut k: Vec<Mag> = vec![one.clone()];
    let mut rates: Vec<MagRatio> = vec![r1];
    for i in 2..=i_max {
        // eps_i = min_{j<i} R(n_j)·2^{j−i} / k_j, with the power of two
        // folded into the numerator so the ratio stays exact.
        let mut eps: Option<MagRatio> = None;
        for j in 1..i {
            let shift = Mag::pow2(Mag::from_i64(j as i64 - i as i64));
            let num = rates[j - 1].num().mul(&shift);
            let den = rates[j - 1].den().mul(&k[j - 1]);
            let candidate = MagRatio::new(num, den)?;
            eps = Some(match eps {
                None => candidate,
                Some(best) => {
                    if candidate.cmp_value(&best) == Ordering::Less {
                        candidate
                    } else {
                        best
                    }
                }
            });
        }
        let eps = eps.expect("i >= 2 has at least one earlier level");
        let n_i = rate.least_n_at_most(&eps, n.last().expect("nonempty"))?;
        let r_i = rate.exact_at(&n_i)?;
        let k_ceil = r_i.mul_mag(&n_i).ceil()?;
        let k_step = k.last().expect("nonempty").add(&Mag::one());
        let k_i = if k_ceil.cmp_value(&k_step) == Ordering::Less { k_step } else { k_ceil };
        n.push(n_i);
        k.push(k_i);
        rates.push(r_i);
    }
    let total = rates.iter().fold(MagRatio::zero(), |acc, r| acc.add(r));
    let c = total.recip()?;
    let p = rates.iter().map(|r| c.mul(r)).collect();
    let schedule = SlowRateSchedule { rate: rate.clone(), n, k, p, c };
    schedule.verify()?;
    Ok(schedule)
}

// ---------------------------------------------------------------------------
// VCL branch distribution
// ---------------------------------------------------------------------------

/// A synthetic VCL tree of the given depth over fresh, pairwise-distinct
/// points: level `k` holds `2^{k(k+1)/2}` tuples of `k+1` points each.
/// Every pattern continuation is realizable over the full class on its
/// points, so the shape serves as a universal branch-distribution carrier.
/// Capped at depth [`SYNTHETIC_VCL_DEPTH_CAP`].
pub fn synthetic_vcl_tree(depth: usize) -> Result<VCLTree> {
    if depth > SYNTHETIC_VCL_DEPTH_CAP {
        return Err(Error::Config(format!(
            "synthetic VCL tree capped at depth {SYNTHETIC_VCL_DEPTH_CAP}: level k holds 2^(k(k+1)/2) tuples"
        )));
    }
    let mut next_id: u32 = 0;
    let mut levels: Vec<Vec<Vec<PointId>>> = Vec::with_capacity(depth);
    for k in 0..depth {
        let nodes = 1usize << (k * (k + 1) / 2);
        let mut level = Vec::with_capacity(nodes);
        for _ in 0..nodes {
            let tuple: Vec<PointId> = (0..=k)
                .map(|_| {
                    let id = next_id;
                    next_id += 1;
                    id
                })
                .collect();
            level.push(tuple);
        }
        levels.push(level);
    }
    VCLTree::from_levels(levels)
}

/// The adversarial distribution concentrated on one branch of a VCL tree,
/// with masses driven by a slow-rate schedule: for each schedule level `i`,
/// the `k_i` points of the depth-`(k_i − 1)` node on branch `y` each carry
/// mass `p_{k_i}/k_i`, labeled by the branch's pattern word at that level
/// (bit `b` of `y[k_i − 1]` labels tuple point `b`).
///
/// Errors with a depth message when the tree is shallower than the largest
/// scheduled arity, and refuses (rather than rounds) schedules whose masses
/// underflow `f64`.
pub fn vcl_adversary_dist(
    tree: &VCLTree,
    y: &[u32],
    schedule: &SlowRateSchedule,
) -> Result<RealizableDistribution> {
    let depth = tree.depth();
    let mut arities = Vec::with_capacity(schedule.i_max());
    for k in schedule.k_seq() {
        let arity = k.to_u128().filter(|&v| v <= depth as u128).ok_or_else(|| {
            Error::Construction(format!(
                "schedule needs a VCL tree of depth >= {k}, but the tree has depth {depth}"
            ))
        })?;
        arities.push(arity as usize);
    }
    let k_max = *arities.last().expect("schedules are nonempty");
    if y.len() < k_max {
        return Err(Error::Config(format!(
            "branch specifies {} pattern words but the schedule reaches level {k_max}",
            y.len()
        )));
    }
    for (j, &pattern) in y.iter().take(k_max).enumerate() {
        if pattern >> (j + 1) != 0 {
            return Err(Error::Config(format!(
                "pattern word {pattern} at level {j} exceeds the {}-point tuple's range",
                j + 1
            )));
        }
    }
    let mut masses: BTreeMap<(PointId, u8), f64> = BTreeMap::new();
    let mut labels: BTreeMap<PointId, u8> = BTreeMap::new();
    let mut max_point = 0u32;
    for (i, &arity) in arities.iter().enumerate() {
        let level = arity - 1;
        let per_point = schedule.p_seq()[i]
            .mul(&MagRatio::new(Mag::one(), Mag::from_u128(arity as u128))?)
            .to_f64();
        if !(per_point.is_finite() && per_point > 0.0) {
            return Err(Error::Construction(format!(
                "schedule mass at level {} underflows f64; reduce the truncation",
                i + 1
            )));
        }
        let tuple = tree.tuple(y, level);
        let pattern = y[level];
        for (b, &point) in tuple.iter().enumerate() {
            let label = ((pattern >> b) & 1) as u8;
            match labels.insert(point, label) {
                Some(old) if old != label => {
                    return Err(Error::Construction(format!(
                        "branch assigns conflicting labels to shared tree point {point}"
                    )));
                }
                _ => {}
            }
            *masses.entry((point, label)).or_insert(0.0) += per_point;
            max_point = max_point.max(point);
        }
    }
    let mut certificate = BitRow::zeros(max_point as usize + 1);
    for (&point, &label) in &labels {
        certificate.set(point as usize, label == 1);
    }
    RealizableDistribution::new(masses.into_iter().collect(), certificate)
}

// ---------------------------------------------------------------------------
// Scheduled-blocks fixture where canonical ERM stalls
// ---------------------------------------------------------------------------

/// A distribution + class + sample-size schedule on which the canonical
/// (first-consistent-hypothesis) empirical risk minimizer is forced to a
/// slow rate: see [`erm_failure_fixture`].
#[derive(Clone, Debug)]
pub struct ErmFailureFixture {
    rate: RateFn,
    scheduled_levels: Vec<u32>,
    sample_sizes: Vec<u64>,
    block_masses: Vec<(u128, u128)>,
    class_spec: ClassSpec,
    dist: RealizableDistribution,
}

impl ErmFailureFixture {
    /// The rate being forced.
    #[must_use]
    pub fn rate(&self) -> &RateFn {
        &self.rate
    }

    /// The scheduled block levels `i_1 < i_2 < …` (block `i` holds `2^i`
    /// points of the majority-blocks domain).
    #[must_use]
    pub fn scheduled_levels(&self) -> &[u32] {
        &self.scheduled_levels
    }

    /// The scheduled sample sizes `n_1 < n_2 < …` at which the forced error
    /// is exhibited.
    #[must_use]
    pub fn sample_sizes(&self) -> &[u64] {
        &self.sample_sizes
    }

    /// Exact per-block masses `p_t = 2^{i_t − 2}/n_t` as `(num, den)` pairs.
    #[must_use]
    pub fn block_masses_exact(&self) -> &[(u128, u128)] {
        &self.block_masses
    }

    /// Per-block masses as `f64`.
    #[must_use]
    pub fn block_masses(&self) -> Vec<f64> {
        self.block_masses.iter().map(|&(num, den)| num as f64 / den as f64).collect()
    }

    /// The concept class the adversarial ERM runs over.
    #[must_use]
    pub fn class_spec(&self) -> &ClassSpec {
        &self.class_spec
    }

    /// The data distribution (all labels 0; block `i_t` carries mass `p_t`
    /// spread uniformly, the sentinel point absorbs the rest).
    #[must_use]
    pub fn distribution(&self) -> &RealizableDistribution {
        &self.dist
    }
}

/// Build the scheduled-blocks ERM-failure fixture for `rate`, with `t_max`
/// scheduled steps.
///
/// The construction searches, in exact integer arithmetic, for sizes
/// `n_1 < n_2 < …` and block levels `i_1 < i_2 < …` such that the block
/// masses `p_t = 2^{i_t−2}/n_t` satisfy `p_t ≥ 4·R(n_t)` (so missing the
/// block at size `n_t` costs at least the target rate) and `p_t ≤ q_t` with
/// `q_1 = ½`, `q_{t+1} = min(p_t/2, 2^{−(t+1)})` (so the masses decay and
/// total under 1).  Each candidate block level must clear
/// `⌈log₂(16·n·R(n))⌉ ≤ i ≤ ⌊log₂(4·q_t·n)⌋`, all evaluated exactly.
///
/// Every scheduled block is labeled all-zero; a first-consistent ERM over
/// the majority-blocks class that has seen no 1s commits to an indicator of
/// mostly-unseen points inside a scheduled block and pays its mass.  Block 1
/// is never scheduled (levels start at 2), so the single-point indicator
/// inside block 1 certifies realizability with exact error 0.
pub fn erm_failure_fixture(rate: &RateFn, t_max: usize) -> Result<ErmFailureFixture> {
    if t_max == 0 || t_max > 16 {
        return Err(Error::Config("fixture needs 1 <= t_max <= 16 scheduled steps".into()));
    }
    rate.validate()?;
    if matches!(rate, RateFn::InverseLog) {
        return Err(Error::Construction(
            "inverse-log block boundaries are irrational between powers of two; \
             use inverse-sqrt, inverse-linear, or a tabulated rate"
                .into(),
        ));
    }
    let mut q: (u128, u128) = (1, 2);
    let mut n_prev: u64 = 0;
    let mut i_prev: i64 = 1;
    let mut scheduled_levels = Vec::with_capacity(t_max);
    let mut sample_sizes = Vec::with_capacity(t_max);
    let mut block_masses = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        let mut found = None;
        for n in (n_prev + 1)..=ERM_SEARCH_CAP {
            let i_lo = ceil_log2_16nr(rate, n)?.max(i_prev + 1).max(2);
            let four_qn = q
                .0
                .checked_mul(4)
                .and_then(|v| v.checked_mul(n as u128))
                .ok_or_else(arith_overflow)?;
            let i_hi = floor_log2_ratio(four_qn, q.1);
            if i_lo <= i_hi {
                found = Some((n, i_lo));
                break;
            }
        }
        let (n_t, i_t) = found.ok_or_else(|| {
            Error::Budget(format!(
                "no admissible scheduled block for step {t} with n <= {ERM_SEARCH_CAP}"
            ))
        })?;
        if !(2..=61).contains(&i_t) {
            return Err(Error::Construction(format!(
                "scheduled block level {i_t} falls outside the exact-arithmetic range"
            )));
        }
        let p = (1u128 << (i_t - 2), n_t as u128);
        let half_p = (p.0, p.1.checked_mul(2).ok_or_else(arith_overflow)?);
        let dyadic = (1u128, 1u128 << (t + 1));
        q = if ratio_le(half_p, dyadic)? { half_p } else { dyadic };
        scheduled_levels.push(i_t as u32);
        sample_sizes.push(n_t);
        block_masses.push(p);
        n_prev = n_t;
        i_prev = i_t;
    }
    let top = *scheduled_levels.last().expect("t_max >= 1");
    if top > 20 {
        return Err(Error::Construction(format!(
            "scheduled blocks reach level {top}, beyond the closed-form majority-blocks cap of 20"
        )));
    }
    let domain = (1usize << (top + 1)) - 1;
    let mut support: Vec<((PointId, u8), f64)> = Vec::new();
    let mut block_total = 0.0f64;
    for (&level, &n_t) in scheduled_levels.iter().zip(&sample_sizes) {
        let per_point = 0.25 / n_t as f64;
        for id in majority_block_range(level) {
            support.push(((id, 0), per_point));
        }
        block_total += per_point * (1u64 << level) as f64;
    }
    support.push(((0, 0), 1.0 - block_total));
    let mut certificate = BitRow::zeros(domain);
    certificate.set(1, true); // single-point indicator inside never-scheduled block 1
    let dist = RealizableDistribution::new(support, certificate)?;
    Ok(ErmFailureFixture {
        rate: rate.clone(),
        scheduled_levels,
        sample_sizes,
        block_masses,
        class_spec: ClassSpec::MajorityBlocks { levels: top },
        dist,
    })
}

fn arith_overflow() -> Error {
    Error::Construction("fixture arithmetic overflowed 128 bits".into())
}

/// `a·b.1 ≤ b.0·a.1` for positive rationals `a = a.0/a.1`, `b = b.0/b.1`.
fn ratio_le(a: (u128, u128), b: (u128, u128)) -> Result<bool> {
    let lhs = a.0.checked_mul(b.1).ok_or_else(arith_overflow)?;
    let rhs = b.0.checked_mul(a.1).ok_or_else(arith_overflow)?;
    Ok(lhs <= rhs)
}

fn bitlen(v: u128) -> i64 {
    debug_assert!(v >= 1);
    (128 - v.leading_zeros()) as i64
}

/// Compare `a·2^ea` with `b·2^eb` exactly (`a, b ≥ 1`).
fn cmp_scaled(a: u128, ea: i64, b: u128, eb: i64) -> Ordering {
    let la = bitlen(a) + ea;
    let lb = bitlen(b) + eb;
    if la != lb {
        return la.cmp(&lb);
    }
    // Equal leading positions: the relative shift now fits in 128 bits.
    let shift = ea - eb;
    if shift >= 0 {
        (a << shift).cmp(&b)
    } else {
        a.cmp(&(b << -shift))
    }
}

/// Least `c ≥ 0` with `2^c ≥ v`.
fn ceil_log2_u128(v: u128) -> i64 {
    if v <= 1 {
        0
    } else {
        128 - (v - 1).leading_zeros() as i64
    }
}

/// Largest `c` (possibly negative) with `2^c·b ≤ a`, for `a, b ≥ 1`.
fn floor_log2_ratio(a: u128, b: u128) -> i64 {
    let est = bitlen(a) - bitlen(b); // a/b ∈ [2^{est−1}, 2^{est+1})
    if cmp_scaled(b, est, a, 0) != Ordering::Greater {
        est
    } else {
        est - 1
    }
}

/// Exact mantissa/exponent split of a positive finite `f64`:
/// `v = mantissa · 2^exp`.
fn f64_dyadic(v: f64) -> Result<(u128, i64)> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Config(format!("expected a positive finite value, got {v}")));
    }
    let bits = v.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    Ok(if raw_exp == 0 {
        (frac as u128, -1074)
    } else {
        ((frac | (1u64 << 52)) as u128, raw_exp - 1075)
    })
}

/// `⌈log₂(16·n·R(n))⌉`, exactly, for the rates whose boundary comparisons
/// reduce to integer arithmetic.
fn ceil_log2_16nr(rate: &RateFn, n: u64) -> Result<i64> {
    match rate {
        RateFn::InverseSqrt => {
            // 16·n·n^{−1/2} = 16√n: least c with 2^{2c} ≥ 256·n.
            let target = 256u128.checked_mul(n as u128).ok_or_else(arith_overflow)?;
            let cl = ceil_log2_u128(target);
            Ok((cl + 1) / 2)
        }
        RateFn::InverseLinear => Ok(4), // 16·n·(1/n) = 16
        RateFn::Tabulated { breakpoints } => {
            // Condition 16·n·v(n) ≤ 2^c·v(1) on exact dyadic mantissas.
            let (mv, ev) = f64_dyadic(table_value_at(breakpoints, n as u128))?;
            let (m0, e0) = f64_dyadic(breakpoints[0].1)?;
            let a = (n as u128)
                .checked_mul(mv)
                .and_then(|v| v.checked_mul(16))
                .ok_or_else(arith_overflow)?;
            let mut c = (bitlen(a) + ev) - (bitlen(m0) + e0) - 1;
            while cmp_scaled(a, ev, m0, e0 + c) == Ordering::Greater {
                c += 1;
            }
            Ok(c)
        }
        RateFn::InverseLog => Err(Error::Construction(
            "inverse-log boundaries are not exactly comparable at general n".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::ClassSpec;
    use crate::learners::Classifier;
    use crate::trees::{find_littlestone_tree, verify_littlestone_tree};

    fn full_class(n: usize) -> ConceptClass {
        let rows = (0..(1usize << n))
            .map(|v| BitRow::from_fn(n, |i| (v >> i) & 1 == 1))
            .collect();
        ConceptClass::from_rows(Domain::indexed(n), rows).unwrap()
    }

    fn thresholds(m: u32) -> ConceptClass {
        ConceptClass::generate(&ClassSpec::Thresholds { m }).unwrap()
    }

    fn power_table(max_t: u32) -> RateFn {
        RateFn::Tabulated {
            breakpoints: (0..=max_t).map(|t| (1u64 << t, (2f64).powi(-(t as i32)))).collect(),
        }
    }

    fn ratio(num: u128, den: u128) -> MagRatio {
        MagRatio::new(Mag::from_u128(num), Mag::from_u128(den)).unwrap()
    }

    #[test]
    fn distribution_validates_mass_labels_and_certificate() {
        let cert = BitRow::parse("01").unwrap();
        // Happy path.
        let ok = RealizableDistribution::new(
            vec![((0, 0), 0.5), ((1, 1), 0.5)],
            cert.clone(),
        )
        .unwrap();
        assert_eq!(ok.domain_size(), 2);
        assert!((ok.total_mass() - 1.0).abs() < PROB_TOLERANCE);
        // Mass must sum to 1.
        assert!(matches!(
            RealizableDistribution::new(vec![((0, 0), 0.5), ((1, 1), 0.4)], cert.clone()),
            Err(Error::Config(_))
        ));
        // Probabilities must be positive.
        assert!(matches!(
            RealizableDistribution::new(vec![((0, 0), 1.0), ((1, 1), 0.0)], cert.clone()),
            Err(Error::Config(_))
        ));
        // Labels are binary.
        assert!(matches!(
            RealizableDistribution::new(vec![((0, 2), 1.0)], cert.clone()),
            Err(Error::Config(_))
        ));
        // Points must fit the certificate's domain.
        assert!(matches!(
            RealizableDistribution::new(vec![((7, 0), 1.0)], cert.clone()),
            Err(Error::Config(_))
        ));
        // Duplicate support keys are rejected.
        assert!(matches!(
            RealizableDistribution::new(vec![((0, 0), 0.5), ((0, 0), 0.5)], cert.clone()),
            Err(Error::Config(_))
        ));
        // The certificate must actually achieve error 0 on the support:
        // mass on both labels of one point can never be certified.
        assert!(matches!(
            RealizableDistribution::new(vec![((0, 0), 0.5), ((0, 1), 0.5)], cert),
            Err(Error::Construction(_))
        ));
    }

    #[test]
    fn exact_error_matches_hand_values() {
        let class = full_class(2);
        let (p0, _p1) = exp_lower_bound_pair(&class).unwrap();
        // The pair agrees at point 0 (label 0) and differs at point 1; the
        // classifier that answers 1 at the disagreement point errs exactly
        // on that half of the mass.
        let h = Classifier::Explicit { labels: BitRow::parse("01").unwrap() };
        assert_eq!(exact_error(&h, &p0).unwrap(), 0.5);
        // A certified hypothesis has error exactly 0.
        let certified = Classifier::Explicit { labels: p0.certificate().clone() };
        assert_eq!(exact_error(&certified, &p0).unwrap(), 0.0);
        // Constant 0 against an all-ones distribution errs with mass 1.
        let ones = RealizableDistribution::new(
            vec![((0, 1), 0.5), ((1, 1), 0.5)],
            BitRow::parse("11").unwrap(),
        )
        .unwrap();
        let zero = Classifier::Explicit { labels: BitRow::parse("00").unwrap() };
        assert_eq!(exact_error(&zero, &ones).unwrap(), 1.0);
        // Domain mismatch is an error, not a guess.
        let narrow = Classifier::Explicit { labels: BitRow::parse("0").unwrap() };
        assert!(matches!(exact_error(&narrow, &ones), Err(Error::Domain(_))));
    }

    #[test]
    fn sampling_is_reproducible_and_sized() {
        let class = full_class(3);
        let target = BitRow::parse("010").unwrap();
        let dist = weighted_realizable(&class, &target, &[0.5, 0.25, 0.25]).unwrap();
        assert!(sample(&dist, 0, 9).unwrap().is_empty());
        let a = sample(&dist, 200, 42).unwrap();
        let b = sample(&dist, 200, 42).unwrap();
        assert_eq!(a.pairs(), b.pairs());
        assert_eq!(a.len(), 200);
        let c = sample(&dist, 200, 43).unwrap();
        assert_ne!(a.pairs(), c.pairs());
        // Every drawn pair is a support entry.
        for &(x, y) in a.pairs() {
            assert_eq!(y, target.get(x as usize));
        }
    }

    #[test]
    fn sampling_frequencies_pass_chi_square() {
        let class = full_class(3);
        let target = BitRow::parse("010").unwrap();
        let dist = weighted_realizable(&class, &target, &[0.5, 0.25, 0.25]).unwrap();
        let s = sample(&dist, 100_000, 11).unwrap();
        let mut counts = [0u64; 3];
        for &(x, _) in s.pairs() {
            counts[x as usize] += 1;
        }
        let expected = [50_000.0, 25_000.0, 25_000.0];
        let chi2: f64 = counts
            .iter()
            .zip(&expected)
            .map(|(&o, &e)| {
                let d = o as f64 - e;
                d * d / e
            })
            .sum();
        assert!(chi2 < 20.0, "chi-square statistic {chi2} too large for 2 degrees of freedom");
    }

    #[test]
    fn littlestone_branch_distribution_hand_masses() {
        // Depth 2, hand-built: root point 10, level-1 points 20/30.
        let tree =
            LittlestoneTree::from_levels(vec![vec![10], vec![20, 30]]).unwrap();
        let dist = littlestone_adversary_dist(&tree, &[0, 1]).unwrap();
        assert_eq!(dist.support(), &[((10, 0), 0.5), ((20, 1), 0.5)]);
        assert_eq!(dist.certificate().get(10), 0);
        assert_eq!(dist.certificate().get(20), 1);
        // Depth 1: all mass on the root.
        let root = LittlestoneTree::from_levels(vec![vec![5]]).unwrap();
        let d1 = littlestone_adversary_dist(&root, &[1]).unwrap();
        assert_eq!(d1.support(), &[((5, 1), 1.0)]);
        // Depth 0 and branch-length mismatches are configuration errors.
        assert!(matches!(
            littlestone_adversary_dist(&LittlestoneTree::empty(), &[]),
            Err(Error::Config(_))
        ));
        assert!(matches!(littlestone_adversary_dist(&tree, &[0]), Err(Error::Config(_))));
    }

    #[test]
    fn littlestone_branch_distribution_from_search_is_certified() {
        let class = thresholds(4);
        let tree = find_littlestone_tree(&class, 2).unwrap().expect("thresholds on 4 has LD 2");
        let dist = littlestone_adversary_dist(&tree, &[0, 0]).unwrap();
        assert!((dist.total_mass() - 1.0).abs() < PROB_TOLERANCE);
        for &(_, p) in dist.support() {
            assert_eq!(p, 0.5);
        }
        let certified = Classifier::Explicit { labels: dist.certificate().clone() };
        assert_eq!(exact_error(&certified, &dist).unwrap(), 0.0);
    }

    #[test]
    fn littlestone_truncation_tv_is_monotone() {
        // Nested hand trees over a 4-point domain: level k repeats point k,
        // so deeper trees extend shallower ones and every path sees
        // distinct points (realizable in the full class).
        let class = full_class(4);
        let levels = |d: usize| -> Vec<Vec<PointId>> {
            (0..d).map(|k| vec![k as PointId; 1 << k]).collect()
        };
        let dists: Vec<RealizableDistribution> = (2..=4)
            .map(|d| {
                let tree = LittlestoneTree::from_levels(levels(d)).unwrap();
                assert!(verify_littlestone_tree(&class, &tree).unwrap());
                littlestone_adversary_dist(&tree, &vec![0u8; d]).unwrap()
            })
            .collect();
        let tv23 = dists[0].tv_distance(&dists[1]);
        let tv34 = dists[1].tv_distance(&dists[2]);
        // Exact dyadic arithmetic: the tail that moves is 2^{−d}.
        assert_eq!(tv23, 0.25);
        assert_eq!(tv34, 0.125);
        assert!(tv23 > tv34);
    }

    #[test]
    fn uniform_realizable_spreads_mass_evenly() {
        let class = thresholds(4);
        let dist = uniform_realizable(&class, 0).unwrap();
        assert_eq!(dist.support().len(), 4);
        for &(_, p) in dist.support() {
            assert_eq!(p, 0.25);
        }
        let certified = Classifier::Explicit { labels: dist.certificate().clone() };
        assert_eq!(exact_error(&certified, &dist).unwrap(), 0.0);
        assert!(matches!(uniform_realizable(&class, 99), Err(Error::Config(_))));
    }

    #[test]
    fn weighted_realizable_validates_and_drops_zero_weights() {
        let class = full_class(2);
        let target = BitRow::parse("01").unwrap();
        let dist = weighted_realizable(&class, &target, &[0.0, 1.0]).unwrap();
        assert_eq!(dist.support(), &[((1, 1), 1.0)]);
        assert!(matches!(
            weighted_realizable(&class, &target, &[1.0]),
            Err(Error::Config(_))
        ));
        let alien = BitRow::parse("01").unwrap();
        let tiny = ConceptClass::from_rows(
            Domain::indexed(2),
            vec![BitRow::parse("00").unwrap()],
        )
        .unwrap();
        assert!(matches!(
            weighted_realizable(&tiny, &alien, &[0.5, 0.5]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn exponential_pair_agrees_then_differs() {
        let class = thresholds(4);
        let (p0, p1) = exp_lower_bound_pair(&class).unwrap();
        // Canonical row order starts 0001, 0011: they agree at point 0 and
        // first differ at point 2.
        assert_eq!(p0.support(), &[((0, 0), 0.5), ((2, 0), 0.5)]);
        assert_eq!(p1.support(), &[((0, 0), 0.5), ((2, 1), 0.5)]);
        assert_eq!(p0.certificate(), &BitRow::parse("0001").unwrap());
        assert_eq!(p1.certificate(), &BitRow::parse("0011").unwrap());
        for d in [&p0, &p1] {
            let certified = Classifier::Explicit { labels: d.certificate().clone() };
            assert_eq!(exact_error(&certified, d).unwrap(), 0.0);
        }
        // Fewer than 3 hypotheses cannot host the construction.
        let two = ConceptClass::from_rows(
            Domain::indexed(2),
            vec![BitRow::parse("01").unwrap(), BitRow::parse("10").unwrap()],
        )
        .unwrap();
        assert!(matches!(exp_lower_bound_pair(&two), Err(Error::Construction(_))));
    }

    #[test]
    fn rate_functions_evaluate_exactly_where_possible() {
        let one = Mag::one();
        // Inverse-log: exact at powers of two, refuses elsewhere.
        let r = RateFn::InverseLog.exact_at(&Mag::from_u128(8)).unwrap();
        assert_eq!(r.cmp_value(&ratio(1, 4)), Ordering::Equal);
        assert!(matches!(
            RateFn::InverseLog.exact_at(&Mag::from_u128(3)),
            Err(Error::Construction(_))
        ));
        // Inverse-sqrt: perfect squares, including astronomically large ones.
        let r = RateFn::InverseSqrt.exact_at(&Mag::from_u128(36)).unwrap();
        assert_eq!(r.cmp_value(&ratio(1, 6)), Ordering::Equal);
        assert!(matches!(
            RateFn::InverseSqrt.exact_at(&Mag::from_u128(8)),
            Err(Error::Construction(_))
        ));
        let giant = Mag::pow2(Mag::from_u128(200));
        let r = RateFn::InverseSqrt.exact_at(&giant).unwrap();
        let expected = MagRatio::new(one.clone(), Mag::pow2(Mag::from_u128(100))).unwrap();
        assert_eq!(r.cmp_value(&expected), Ordering::Equal);
        // Inverse-linear: always exact.
        let r = RateFn::InverseLinear.exact_at(&Mag::from_u128(7)).unwrap();
        assert_eq!(r.cmp_value(&ratio(1, 7)), Ordering::Equal);
        // Tabulated: normalized by the first value, steps held between
        // breakpoints and beyond the table.
        let tab = RateFn::Tabulated { breakpoints: vec![(1, 0.5), (4, 0.25)] };
        tab.validate().unwrap();
        assert_eq!(
            tab.exact_at(&one).unwrap().cmp_value(&MagRatio::one()),
            Ordering::Equal
        );
        assert_eq!(
            tab.exact_at(&Mag::from_u128(5)).unwrap().cmp_value(&ratio(1, 2)),
            Ordering::Equal
        );
        assert!((tab.eval_f64(3) - 1.0).abs() < 1e-15);
        // Tabulated validation failures.
        for bad in [
            vec![],
            vec![(2, 1.0)],
            vec![(1, 1.0), (1, 0.5)],
            vec![(1, 1.0), (2, 2.0)],
            vec![(1, 0.0)],
        ] {
            assert!(RateFn::Tabulated { breakpoints: bad }.validate().is_err());
        }
    }

    #[test]
    fn rate_functions_find_least_qualifying_n() {
        let one = Mag::one();
        let n64 = RateFn::InverseSqrt.least_n_at_most(&ratio(1, 8), &one).unwrap();
        assert_eq!(n64.to_u128(), Some(64));
        let n48 = RateFn::InverseLinear.least_n_at_most(&ratio(1, 48), &one).unwrap();
        assert_eq!(n48.to_u128(), Some(48));
        let n128 = RateFn::InverseLog.least_n_at_most(&ratio(1, 8), &one).unwrap();
        assert_eq!(n128.to_u128(), Some(128));
        // Non-integer inverse-log boundary: 1/eps − 1 = 3/2.
        assert!(matches!(
            RateFn::InverseLog.least_n_at_most(&ratio(2, 5), &one),
            Err(Error::Construction(_))
        ));
        // Thresholds ≥ 1 just step forward.
        let n6 = RateFn::InverseLinear.least_n_at_most(&MagRatio::one(), &Mag::from_u128(5)).unwrap();
        assert_eq!(n6.to_u128(), Some(6));
        // Tabulated: first qualifying breakpoint, exhaustion is an error.
        let tab = power_table(10);
        let n = tab.least_n_at_most(&ratio(1, 48), &one).unwrap();
        assert_eq!(n.to_u128(), Some(64));
        assert!(matches!(
            tab.least_n_at_most(&ratio(1, 4096), &one),
            Err(Error::Construction(_))
        ));
    }

    #[test]
    fn inverse_sqrt_schedule_matches_frozen_trace() {
        let schedule = build_slow_schedule(&RateFn::InverseSqrt, 6).unwrap();
        schedule.verify().unwrap();
        let n: Vec<u128> = schedule.n_seq().iter().map(|m| m.to_u128().unwrap()).collect();
        let k: Vec<u128> = schedule.k_seq().iter().map(|m| m.to_u128().unwrap()).collect();
        assert_eq!(n, vec![1, 4, 64, 1 << 14, 1 << 30, 1 << 62]);
        assert_eq!(k, vec![1, 2, 8, 128, 1 << 15, 1 << 31]);
        // C = 1/(1 + 1/2 + 1/8 + 2^{−7} + 2^{−15} + 2^{−31}), exactly.
        let mut total = MagRatio::one();
        for e in [1u128, 3, 7, 15, 31] {
            total = total.add(&MagRatio::new(Mag::one(), Mag::pow2(Mag::from_u128(e))).unwrap());
        }
        assert_eq!(schedule.c().cmp_value(&total.recip().unwrap()), Ordering::Equal);
        assert!((schedule.c().to_f64() - 0.612428).abs() < 1e-5);
        assert!(!schedule.describe_lines().is_empty());
    }

    #[test]
    fn inverse_log_schedule_reaches_tower_scale_exactly() {
        let schedule = build_slow_schedule(&RateFn::InverseLog, 6).unwrap();
        schedule.verify().unwrap();
        let n = schedule.n_seq();
        let k = schedule.k_seq();
        assert_eq!(n[1].to_u128(), Some(2));
        assert_eq!(n[2].to_u128(), Some(128));
        assert_eq!(k[2].to_u128(), Some(16));
        // n_4 = 2^255, k_4 = 2^247.
        assert_eq!(n[3].cmp_value(&Mag::pow2(Mag::from_u128(255))), Ordering::Equal);
        assert_eq!(k[3].cmp_value(&Mag::pow2(Mag::from_u128(247))), Ordering::Equal);
        // n_5 = 2^(2^256 − 1), k_5 = 2^(2^256 − 257): beyond u128, still exact.
        let big = Mag::pow2(Mag::from_u128(256)); // 2^256
        assert_eq!(
            n[4].cmp_value(&Mag::pow2(big.sub(&Mag::one()))),
            Ordering::Equal
        );
        assert_eq!(
            k[4].cmp_value(&Mag::pow2(big.sub(&Mag::from_u128(257)))),
            Ordering::Equal
        );
        assert_eq!(n[4].to_u128(), None);
        // n_6 = 2^(2^(2^256) − 1): a tower of height three.
        let tower = Mag::pow2(Mag::pow2(Mag::from_u128(256)));
        assert_eq!(n[5].cmp_value(&Mag::pow2(tower.sub(&Mag::one()))), Ordering::Equal);
        // C stays within its bracket even with the tower tail.
        let half = ratio(1, 2);
        assert_ne!(schedule.c().cmp_value(&half), Ordering::Less);
        assert_ne!(schedule.c().cmp_value(&MagRatio::one()), Ordering::Greater);
    }

    #[test]
    fn tabulated_schedule_exercises_the_step_branch() {
        let schedule = build_slow_schedule(&power_table(40), 6).unwrap();
        schedule.verify().unwrap();
        let n: Vec<u128> = schedule.n_seq().iter().map(|m| m.to_u128().unwrap()).collect();
        let k: Vec<u128> = schedule.k_seq().iter().map(|m| m.to_u128().unwrap()).collect();
        assert_eq!(n, vec![1, 2, 8, 64, 512, 8192]);
        // The ⌈n·R(n)⌉ term is always 1 here, so k grows by the +1 branch.
        assert_eq!(k, vec![1, 2, 3, 4, 5, 6]);
        assert!((schedule.c().to_f64() - 0.6087).abs() < 1e-4);
    }

    #[test]
    fn schedule_verification_rejects_corrupted_sequences() {
        let good = build_slow_schedule(&RateFn::InverseSqrt, 4).unwrap();
        // Shrinking an arity breaks clause (b): n·p exceeds k.
        let mut bad = good.clone();
        bad.k[2] = Mag::from_u128(4);
        let err = bad.verify().unwrap_err();
        assert!(err.to_string().contains("(b)"), "unexpected: {err}");
        // Tampering with a mass breaks clause (c).
        let mut bad = good.clone();
        bad.p[1] = bad.p[0].clone();
        let err = bad.verify().unwrap_err();
        assert!(
            err.to_string().contains("(c)") || err.to_string().contains("decrease"),
            "unexpected: {err}"
        );
        // Tampering with the normalizer is caught directly.
        let mut bad = good;
        bad.c = MagRatio::one();
        let err = bad.verify().unwrap_err();
        assert!(err.to_string().contains("normalizer"), "unexpected: {err}");
    }

    #[test]
    fn schedule_handles_trivial_truncations() {
        assert!(matches!(build_slow_schedule(&RateFn::InverseSqrt, 0), Err(Error::Config(_))));
        let s1 = build_slow_schedule(&RateFn::InverseSqrt, 1).unwrap();
        assert_eq!(s1.i_max(), 1);
        assert_eq!(s1.c().cmp_value(&MagRatio::one()), Ordering::Equal);
        assert_eq!(s1.p_seq()[0].cmp_value(&MagRatio::one()), Ordering::Equal);
    }

    #[test]
    fn synthetic_tree_has_the_required_shape() {
        let tree = synthetic_vcl_tree(3).unwrap();
        assert_eq!(tree.depth(), 3);
        let level_sizes: Vec<usize> = tree.levels().iter().map(Vec::len).collect();
        assert_eq!(level_sizes, vec![1, 2, 8]);
        for (kk, level) in tree.levels().iter().enumerate() {
            for tuple in level {
                assert_eq!(tuple.len(), kk + 1);
            }
        }
        assert!(matches!(synthetic_vcl_tree(7), Err(Error::Config(_))));
    }

    #[test]
    fn vcl_branch_distribution_spreads_scheduled_mass() {
        let schedule = build_slow_schedule(&power_table(40), 3).unwrap();
        let tree = synthetic_vcl_tree(3).unwrap();
        // Branch: pattern 1 at the root (labels its single point 1),
        // pattern 2 at level 1 (labels (0, 1)), pattern 5 at level 2
        // (labels (1, 0, 1)).
        let dist = vcl_adversary_dist(&tree, &[1, 2, 5], &schedule).unwrap();
        assert_eq!(dist.support().len(), 6);
        assert!((dist.total_mass() - 1.0).abs() < PROB_TOLERANCE);
        // C = 8/13; per-point masses are C·R/k = 8/13, 2/13, 2/13, 1/39 ×3.
        let c = schedule.c().to_f64();
        assert!((c - 8.0 / 13.0).abs() < 1e-12);
        let mass_of = |point: PointId| -> f64 {
            dist.support()
                .iter()
                .find(|&&((x, _), _)| x == point)
                .map(|&(_, p)| p)
                .expect("point in support")
        };
        assert!((mass_of(0) - 8.0 / 13.0).abs() < 1e-12);
        // Level-1 node on path [1] is the second tuple: points 3 and 4.
        assert!((mass_of(3) - 2.0 / 13.0).abs() < 1e-12);
        assert!((mass_of(4) - 2.0 / 13.0).abs() < 1e-12);
        // Labels follow the pattern bits.
        let labeled_one: Vec<PointId> = dist
            .support()
            .iter()
            .filter(|&&((_, y), _)| y == 1)
            .map(|&((x, _), _)| x)
            .collect();
        assert!(labeled_one.contains(&0)); // root point, pattern 1
        assert!(labeled_one.contains(&4)); // second point of level-1 node, pattern 2 = 0b10
        let certified = Classifier::Explicit { labels: dist.certificate().clone() };
        assert_eq!(exact_error(&certified, &dist).unwrap(), 0.0);
        // Depth and branch-shape errors.
        let deep = build_slow_schedule(&power_table(40), 4).unwrap();
        let err = vcl_adversary_dist(&tree, &[1, 2, 5, 9], &deep).unwrap_err();
        assert!(err.to_string().contains("depth"), "unexpected: {err}");
        assert!(matches!(vcl_adversary_dist(&tree, &[1], &schedule), Err(Error::Config(_))));
        assert!(matches!(
            vcl_adversary_dist(&tree, &[1, 4, 5], &schedule),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn vcl_truncation_tv_is_monotone() {
        let tree = synthetic_vcl_tree(6).unwrap();
        let y = [0u32; 6];
        let dists: Vec<RealizableDistribution> = (2..=6)
            .map(|i_max| {
                let schedule = build_slow_schedule(&power_table(40), i_max).unwrap();
                vcl_adversary_dist(&tree, &y, &schedule).unwrap()
            })
            .collect();
        let gaps: Vec<f64> =
            dists.windows(2).map(|w| w[0].tv_distance(&w[1])).collect();
        for pair in gaps.windows(2) {
            assert!(
                pair[0] > pair[1],
                "successive truncations must converge: gaps {gaps:?}"
            );
        }
        // A schedule whose arities outgrow the tree reports a depth error
        // (inverse-log arities leave u128 range almost immediately).
        let towering = build_slow_schedule(&RateFn::InverseLog, 5).unwrap();
        let err = vcl_adversary_dist(&tree, &y, &towering).unwrap_err();
        assert!(err.to_string().contains("depth"), "unexpected: {err}");
    }

    #[test]
    fn erm_failure_fixture_matches_frozen_inverse_sqrt_trace() {
        let fixture = erm_failure_fixture(&RateFn::InverseSqrt, 3).unwrap();
        assert_eq!(fixture.scheduled_levels(), &[7, 8, 9]);
        assert_eq!(fixture.sample_sizes(), &[64, 256, 1024]);
        assert_eq!(fixture.block_masses_exact(), &[(32, 64), (64, 256), (128, 1024)]);
        assert_eq!(fixture.block_masses(), vec![0.5, 0.25, 0.125]);
        assert_eq!(fixture.class_spec(), &ClassSpec::MajorityBlocks { levels: 9 });
        let dist = fixture.distribution();
        assert_eq!(dist.domain_size(), (1 << 10) - 1);
        assert_eq!(dist.support().len(), 1 + 128 + 256 + 512);
        assert!((dist.total_mass() - 1.0).abs() < PROB_TOLERANCE);
        // Sentinel absorbs the remaining 1/8.
        let sentinel = dist.support().iter().find(|&&((x, _), _)| x == 0).unwrap().1;
        assert_eq!(sentinel, 0.125);
        // The certificate is the single-point indicator in unscheduled
        // block 1, with exact error 0.
        assert_eq!(dist.certificate().count_ones(), 1);
        assert_eq!(dist.certificate().get(1), 1);
        let certified = Classifier::Explicit { labels: dist.certificate().clone() };
        assert_eq!(exact_error(&certified, dist).unwrap(), 0.0);
        // Defining inequalities, re-checked in exact integers:
        // p_t ≥ 4·R(n_t) ⟺ 2^{2i} ≥ 256·n, and the masses decay.
        for (&(num, den), (&i, &n)) in fixture
            .block_masses_exact()
            .iter()
            .zip(fixture.scheduled_levels().iter().zip(fixture.sample_sizes()))
        {
            assert_eq!(num, 1u128 << (i - 2));
            assert_eq!(den, n as u128);
            assert!(1u128 << (2 * i) >= 256 * n as u128);
        }
        let masses = fixture.block_masses();
        for w in masses.windows(2) {
            assert!(w[0] > w[1]);
        }
        assert!(masses.iter().sum::<f64>() < 1.0);
        // The fixture samples cleanly.
        assert_eq!(sample(dist, 64, 3).unwrap().len(), 64);
    }

    #[test]
    fn erm_failure_fixture_other_rates() {
        let lin = erm_failure_fixture(&RateFn::InverseLinear, 2).unwrap();
        assert_eq!(lin.scheduled_levels(), &[4, 5]);
        assert_eq!(lin.sample_sizes(), &[8, 32]);
        assert_eq!(lin.block_masses(), vec![0.5, 0.25]);
        // The dyadic power table tracks 1/n at powers of two, so the
        // comparator path lands on the same schedule.
        let tab = erm_failure_fixture(&power_table(40), 2).unwrap();
        assert_eq!(tab.sample_sizes(), &[8, 32]);
        assert_eq!(tab.scheduled_levels(), &[4, 5]);
        // Inverse-log boundaries are refused, not approximated.
        assert!(matches!(
            erm_failure_fixture(&RateFn::InverseLog, 2),
            Err(Error::Construction(_))
        ));
        assert!(matches!(erm_failure_fixture(&RateFn::InverseSqrt, 0), Err(Error::Config(_))));
    }
}
