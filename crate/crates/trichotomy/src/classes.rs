//! Finite concept classes over indexed domains.
//!
//! A [`ConceptClass`] is a set of binary hypotheses `h : X → {0,1}` over a
//! finite domain `X = {0, 1, …, m−1}`, stored as deduplicated, canonically
//! sorted bit rows.  Classes come from two sources: explicit matrices, and
//! named generators that build finite truncations of the classical infinite
//! families (threshold classes, disjoint unions of powersets, complete
//! VCL-tree classes, and so on).  Every generator except the majority-blocks
//! family expands to explicit rows at construction; the majority-blocks
//! family keeps a closed form because its blocks hold `C(2^i, ≥2^{i−1})`
//! hypotheses each, and answers membership, consistency, projection, and VC
//! queries directly from the combinatorics.
//!
//! Restrictions `H_{x₁,y₁,…,x_t,y_t}` — the subclass consistent with a list
//! of `(point, label)` constraints — are the basic object of the game
//! analyses in [`crate::trees`]; [`ConceptClass::restrict`] produces them
//! while sharing one memo table across all restrictions of a root class so
//! that repeated game-value queries stay cheap.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::{Error, Result};

/// Index of a domain point.
pub type PointId = u32;

/// A finite, integer-indexed domain with display labels.
#[derive(Clone, Debug)]
pub struct Domain {
    labels: Vec<String>,
}

impl Domain {
    /// Domain of `size` points labeled by their indices.
    #[must_use]
    pub fn indexed(size: usize) -> Self {
        Domain { labels: (0..size).map(|i| i.to_string()).collect() }
    }

    /// Domain with explicit display labels, one per point.
    #[must_use]
    pub fn labeled(labels: Vec<String>) -> Self {
        Domain { labels }
    }

    /// Number of points.
    #[must_use]
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Display label of a point.
    #[must_use]
    pub fn label(&self, point: PointId) -> &str {
        &self.labels[point as usize]
    }

    /// Error unless `point` is a valid id for this domain.
    pub fn check(&self, point: PointId) -> Result<()> {
        if (point as usize) < self.size() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "point id {point} out of range for domain of size {}",
                self.size()
            )))
        }
    }
}

/// One `(point, label)` constraint: the statement `h(point) = label`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    /// Domain point the constraint speaks about.
    pub point: PointId,
    /// Required label, 0 or 1.
    pub label: u8,
}

impl Constraint {
    /// Convenience constructor.
    #[must_use]
    pub fn new(point: PointId, label: u8) -> Self {
        Constraint { point, label }
    }
}

/// The set of label patterns a class realizes on an ordered point tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    /// Tuple length; every pattern has exactly this many bits.
    pub arity: usize,
    /// Sorted, deduplicated patterns, each realized by some hypothesis.
    pub patterns: Vec<BitRow>,
}

impl PatternSet {
    /// Whether `pattern` is realized.
    #[must_use]
    pub fn contains(&self, pattern: &BitRow) -> bool {
        self.patterns.binary_search(pattern).is_ok()
    }

    /// Whether the tuple is shattered (all `2^arity` patterns realized).
    #[must_use]
    pub fn is_shattered(&self) -> bool {
        self.arity < usize::BITS as usize && self.patterns.len() == 1usize << self.arity
    }

    /// VC dimension of the pattern set viewed as a class over its `arity`
    /// coordinates (largest `d ≤ cap` with a shattered coordinate subset).
    #[must_use]
    pub fn vc_dimension(&self, cap: u32) -> DimResult {
        vc_dimension_explicit(&self.patterns, cap)
    }
}

/// Declarative class specification: an inline matrix or a named generator.
///
/// This is the config-file schema (`kind` selects the variant) and the
/// parameter record attached to generated classes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassSpec {
    /// Inline hypothesis matrix: rows as bitstrings over an indexed domain.
    Explicit {
        /// Hypothesis rows as strings of `0`/`1`, all the same length.
        rows: Vec<String>,
    },
    /// Threshold indicators `h_t(x) = 1{x ≥ t}` for `t ∈ {1..m}` on the
    /// domain `{1..m}` (point id `i` is the value `i+1`).  The natural-number
    /// threshold family: no infinite Littlestone tree, exponential rates.
    Thresholds {
        /// Number of domain points and thresholds.
        m: u32,
    },
    /// Discretization of real thresholds onto `m` grid points: the same
    /// staircase rows plus the all-zero row that a real threshold beyond the
    /// grid produces (`m+1` hypotheses).  The continuum family has an
    /// infinite Littlestone tree but no infinite VCL tree, hence linear
    /// rates; the structural verdict is attached to this generator.
    RealThresholds {
        /// Number of grid points.
        m: u32,
    },
    /// Disjoint union of powersets: block `k` has `k` points and all `2^k`
    /// subset indicators, for `k ∈ {1..blocks}`; indicators of distinct
    /// blocks never overlap, and the all-zero function is shared.
    PowersetBlocks {
        /// Number of blocks.
        blocks: u32,
    },
    /// Majority subsets of exponentially sized blocks: block `i ∈ {1..levels}`
    /// has `2^i` points and hypotheses `1_I` for every `I` inside the block
    /// with `|I| ≥ 2^{i−1}`, plus one sentinel point (id 0) on which every
    /// hypothesis vanishes.  Closed-form only beyond small `levels`.
    MajorityBlocks {
        /// Number of blocks.
        levels: u32,
    },
    /// The branch-indicator class of a complete VCL tree of the given depth:
    /// one hypothesis per full label path, labeling its on-path tuple slots
    /// by the path and everything else 0.  Has a depth-`depth` VCL tree by
    /// construction; the infinite family is learnable only arbitrarily
    /// slowly.
    VclTreeClass {
        /// Tree depth (levels 0..depth−1).
        depth: u32,
    },
    /// All `2^n` functions on `n` points.
    FullClass {
        /// Domain size.
        n: u32,
    },
    /// Indicators of single points: `h_i = 1_{{x_i}}`.
    Singletons {
        /// Domain size.
        n: u32,
    },
    /// Half-interval chain `h_t(x) = 1{x ≤ t}` for `t ∈ {0..m}` on domain
    /// `{1..m}`; `t = 0` is the all-zero row, so the chain has `m+1` rows.
    HalfIntervals {
        /// Number of domain points.
        m: u32,
    },
}

/// Default cap on explicit expansion (rows × points bits).
pub const DEFAULT_MATERIALIZE_BUDGET: usize = 1 << 24;

/// Shared memo tables for the game-value searches in [`crate::trees`].
///
/// Keys are canonically sorted row-id lists relative to the *root* class a
/// restriction chain started from; every class produced by
/// [`ConceptClass::restrict`] shares its parent's table, so identical
/// restricted hypothesis sets reached along different play orders hit the
/// same entries.
#[derive(Default)]
pub struct AnalysisCache {
    pub(crate) littlestone: Mutex<HashMap<Vec<u32>, CacheEntry>>,
    pub(crate) vcl: Mutex<HashMap<(Vec<u32>, u32), CacheEntry>>,
    /// Interned surviving-row sets (root ids → dense id), key material for
    /// [`Self::pattern_moves`].
    pub(crate) pattern_sets: Mutex<HashMap<Vec<u32>, u32>>,
    /// Value-minimizing pattern per (surviving-row set, tuple): the
    /// pattern-avoidance strategy is a pure function of the restriction and
    /// the tuple, and sibling avoiders plus repeated experiment seeds
    /// revisit the same restrictions constantly.  Nested so probes hash a
    /// slice without building an owned key.
    pub(crate) pattern_moves: Mutex<HashMap<u32, HashMap<Vec<PointId>, BitRow>>>,
}

/// A cached dimension value: exact, or a lower-bound certificate from a
/// cap-limited search.
#[derive(Clone, Copy, Debug)]
pub(crate) enum CacheEntry {
    Exact(i32),
    AtLeast(i32),
}

/// Row storage: explicit matrix, or the majority-blocks closed form with
/// accumulated restriction constraints.
#[derive(Clone)]
enum RowStore {
    Explicit(Vec<BitRow>),
    MajorityBlocks { levels: u32, constraints: Vec<Constraint> },
}

/// A finite concept class: a set of binary hypothesis rows over a domain.
#[derive(Clone)]
pub struct ConceptClass {
    domain: Arc<Domain>,
    store: RowStore,
    /// Stable content id of each row in the root class of the restriction
    /// chain; memo keys are sorted subsets of these ids.
    root_ids: Vec<u32>,
    /// Generator parameters when the class came from a generator and has not
    /// been restricted since; drives structural rate verdicts.
    origin: Option<ClassSpec>,
    cache: Arc<AnalysisCache>,
}

impl std::fmt::Debug for ConceptClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.store {
            RowStore::Explicit(rows) => f
                .debug_struct("ConceptClass")
                .field("domain_size", &self.domain.size())
                .field("hypotheses", &rows.len())
                .finish(),
            RowStore::MajorityBlocks { levels, constraints } => f
                .debug_struct("ConceptClass")
                .field("domain_size", &self.domain.size())
                .field("majority_blocks_levels", levels)
                .field("constraints", &constraints.len())
                .finish(),
        }
    }
}

impl ConceptClass {
    /// Class from explicit rows.  Rows are deduplicated and canonically
    /// sorted; all must match the domain size.
    pub fn from_rows(domain: Domain, rows: Vec<BitRow>) -> Result<Self> {
        for row in &rows {
            if row.len() != domain.size() {
                return Err(Error::Config(format!(
                    "hypothesis row of length {} does not match domain size {}",
                    row.len(),
                    domain.size()
                )));
            }
        }
        let mut rows = rows;
        rows.sort();
        rows.dedup();
        let n = rows.len();
        Ok(ConceptClass {
            domain: Arc::new(domain),
            store: RowStore::Explicit(rows),
            root_ids: (0..n as u32).collect(),
            origin: None,
            cache: Arc::new(AnalysisCache::default()),
        })
    }

    /// Build a class from a declarative spec.
    pub fn generate(spec: &ClassSpec) -> Result<Self> {
        let mut class = match spec {
            ClassSpec::Explicit { rows } => {
                if rows.is_empty() {
                    return Err(Error::Config(
                        "explicit class needs at least one row to fix the domain size; \
                         use a generator for empty classes"
                            .into(),
                    ));
                }
                let parsed: Result<Vec<BitRow>> = rows.iter().map(|r| BitRow::parse(r)).collect();
                ConceptClass::from_rows(Domain::indexed(rows[0].len()), parsed?)?
            }
            ClassSpec::Thresholds { m } => generate_thresholds(*m)?,
            ClassSpec::RealThresholds { m } => generate_real_thresholds(*m)?,
            ClassSpec::PowersetBlocks { blocks } => generate_powerset_blocks(*blocks)?,
            ClassSpec::MajorityBlocks { levels } => generate_majority_blocks(*levels)?,
            ClassSpec::VclTreeClass { depth } => generate_vcl_tree_class(*depth)?,
            ClassSpec::FullClass { n } => generate_full_class(*n)?,
            ClassSpec::Singletons { n } => generate_singletons(*n)?,
            ClassSpec::HalfIntervals { m } => generate_half_intervals(*m)?,
        };
        class.origin = Some(spec.clone());
        Ok(class)
    }

    /// The domain.
    #[must_use]
    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Generator parameters, when the class is an unrestricted generator
    /// instance.
    #[must_use]
    pub fn origin(&self) -> Option<&ClassSpec> {
        self.origin.as_ref()
    }

    /// Whether rows are explicitly materialized.
    #[must_use]
    pub fn is_materialized(&self) -> bool {
        matches!(self.store, RowStore::Explicit(_))
    }

    /// Explicit rows; budget error for closed-form classes (call
    /// [`ConceptClass::materialize`] with a budget to expand small ones).
    pub fn rows(&self) -> Result<&[BitRow]> {
        match &self.store {
            RowStore::Explicit(rows) => Ok(rows),
            RowStore::MajorityBlocks { levels, .. } => Err(Error::Budget(format!(
                "majority-blocks class with {levels} levels is closed-form; \
                 materialize() it explicitly if it fits a budget"
            ))),
        }
    }

    /// Number of hypotheses.  Exact for materialized classes; for the
    /// closed form it is computed from the block combinatorics and saturates
    /// at `u128::MAX`.
    #[must_use]
    pub fn size(&self) -> u128 {
        match &self.store {
            RowStore::Explicit(rows) => rows.len() as u128,
            RowStore::MajorityBlocks { levels, constraints } => {
                majority_blocks_count(*levels, constraints)
            }
        }
    }

    /// Whether the class is empty.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// Expand a closed-form class to explicit rows, or return the class
    /// unchanged if already explicit.  `budget` caps rows × domain-size.
    pub fn materialize(&self, budget: usize) -> Result<ConceptClass> {
        match &self.store {
            RowStore::Explicit(_) => Ok(self.clone()),
            RowStore::MajorityBlocks { levels, constraints } => {
                let count = majority_blocks_count(*levels, constraints);
                let cells = count.saturating_mul(self.domain.size() as u128);
                if cells > budget as u128 {
                    return Err(Error::Budget(format!(
                        "materializing majority-blocks class needs {count} rows x {} points, \
                         over the budget of {budget} cells",
                        self.domain.size()
                    )));
                }
                let rows = majority_blocks_expand(*levels, constraints, self.domain.size());
                let mut class = ConceptClass::from_rows((*self.domain).clone(), rows)?;
                class.domain = self.domain.clone();
                Ok(class)
            }
        }
    }

    /// The subclass consistent with every constraint:
    /// `{h ∈ class : h(xᵢ) = yᵢ for all (xᵢ, yᵢ)}`.
    ///
    /// Restriction preserves the shared memo table of the root class and is
    /// idempotent under re-application of the same constraints.
    pub fn restrict(&self, constraints: &[Constraint]) -> Result<ConceptClass> {
        for c in constraints {
            self.domain.check(c.point)?;
        }
        match &self.store {
            RowStore::Explicit(rows) => {
                let mut kept_rows = Vec::new();
                let mut kept_ids = Vec::new();
                'rows: for (row, id) in rows.iter().zip(&self.root_ids) {
                    for c in constraints {
                        if row.get(c.point as usize) != (c.label & 1) {
                            continue 'rows;
                        }
                    }
                    kept_rows.push(row.clone());
                    kept_ids.push(*id);
                }
                Ok(ConceptClass {
                    domain: self.domain.clone(),
                    store: RowStore::Explicit(kept_rows),
                    root_ids: kept_ids,
                    origin: None,
                    cache: self.cache.clone(),
                })
            }
            RowStore::MajorityBlocks { levels, constraints: existing } => {
                let mut merged = existing.clone();
                for c in constraints {
                    if !merged.contains(c) {
                        merged.push(*c);
                    }
                }
                Ok(ConceptClass {
                    domain: self.domain.clone(),
                    store: RowStore::MajorityBlocks { levels: *levels, constraints: merged },
                    root_ids: Vec::new(),
                    origin: None,
                    cache: self.cache.clone(),
                })
            }
        }
    }

    /// The set of label patterns realized on an ordered tuple of points.
    /// Repeats are allowed and force equal bits.
    pub fn project(&self, points: &[PointId]) -> Result<PatternSet> {
        if points.is_empty() {
            return Err(Error::Domain("project needs a nonempty tuple".into()));
        }
        for &p in points {
            self.domain.check(p)?;
        }
        match &self.store {
            RowStore::Explicit(rows) => {
                let mut patterns: Vec<BitRow> = rows
                    .iter()
                    .map(|row| BitRow::from_fn(points.len(), |i| row.get(points[i] as usize) == 1))
                    .collect();
                patterns.sort();
                patterns.dedup();
                Ok(PatternSet { arity: points.len(), patterns })
            }
            RowStore::MajorityBlocks { levels, constraints } => {
                majority_blocks_project(*levels, constraints, points)
            }
        }
    }

    /// Largest `d ≤ cap` such that some `d`-point subset is shattered.
    ///
    /// Returns [`DimResult::AtLeastCap`] when a cap-sized shattered set
    /// exists but the cap-limited search cannot certify a maximum; the
    /// Sauer bound `vc ≤ log2 |class|` upgrades the answer to exact
    /// whenever it pins the value.
    pub fn vc_dimension(&self, cap: u32) -> Result<DimResult> {
        match &self.store {
            RowStore::Explicit(rows) => Ok(vc_dimension_explicit(rows, cap)),
            RowStore::MajorityBlocks { levels, constraints } => {
                majority_blocks_vc(*levels, constraints, cap)
            }
        }
    }

    /// Level count of an unrestricted majority-blocks class, `None` for
    /// every other store (explicit rows, or a restricted closed form).
    #[must_use]
    pub fn majority_blocks_levels(&self) -> Option<u32> {
        match &self.store {
            RowStore::MajorityBlocks { levels, constraints } if constraints.is_empty() => {
                Some(*levels)
            }
            _ => None,
        }
    }

    /// Root-relative content ids of the rows (memo-key material for the
    /// tree searches).  Empty for closed-form classes.
    pub(crate) fn root_ids(&self) -> &[u32] {
        &self.root_ids
    }

    pub(crate) fn cache(&self) -> &Arc<AnalysisCache> {
        &self.cache
    }

    /// Clone with a fresh, empty memo table.  Parallel experiment workers
    /// use this to trade cross-thread sharing for lock-free warm caches.
    #[must_use]
    pub fn with_fresh_cache(&self) -> ConceptClass {
        let mut class = self.clone();
        class.cache = Arc::new(AnalysisCache::default());
        class
    }
}

/// A dimension answer from a cap-limited search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DimResult {
    /// The exact dimension.
    Exact {
        /// Dimension value (−1 only for the Littlestone dimension of an
        /// empty class).
        value: i64,
    },
    /// The search proved the dimension is at least the cap but did not
    /// certify a maximum.
    AtLeastCap {
        /// The cap the search ran with.
        cap: u32,
    },
}

impl DimResult {
    /// The exact value, if certified.
    #[must_use]
    pub fn exact(&self) -> Option<i64> {
        match self {
            DimResult::Exact { value } => Some(*value),
            DimResult::AtLeastCap { .. } => None,
        }
    }

    /// A lower bound on the dimension regardless of certification.
    #[must_use]
    pub fn lower_bound(&self) -> i64 {
        match self {
            DimResult::Exact { value } => *value,
            DimResult::AtLeastCap { cap } => i64::from(*cap),
        }
    }
}

impl std::fmt::Display for DimResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DimResult::Exact { value } => write!(f, "{value}"),
            DimResult::AtLeastCap { cap } => write!(f, ">={cap}"),
        }
    }
}

fn vc_dimension_explicit(rows: &[BitRow], cap: u32) -> DimResult {
    if rows.is_empty() {
        // An empty class shatters nothing, not even the empty set; −1
        // mirrors the Littlestone convention and keeps vc ≤ LD universal.
        return DimResult::Exact { value: -1 };
    }
    let domain_size = rows[0].len();
    let log2_bound = (u128::BITS - 1 - (rows.len() as u128).leading_zeros()) as u32;
    let effective_cap = cap.min(log2_bound).min(domain_size as u32);
    let mut best = 0u32;
    for d in 1..=effective_cap {
        if !has_shattered_subset(rows, domain_size, d as usize) {
            return DimResult::Exact { value: i64::from(best) };
        }
        best = d;
    }
    // Search exhausted at the effective cap with a shattered set of that
    // size in hand.  If the Sauer bound or the domain size pins the value,
    // the answer is exact; otherwise only "at least cap" is certified.
    if best < cap || best == log2_bound || best as usize == domain_size {
        DimResult::Exact { value: i64::from(best) }
    } else {
        DimResult::AtLeastCap { cap }
    }
}

/// Depth-first search for a shattered subset of the given size, pruning on
/// the number of distinct patterns each partial subset realizes.
fn has_shattered_subset(rows: &[BitRow], domain_size: usize, size: usize) -> bool {
    fn recurse(rows: &[BitRow], domain_size: usize, chosen: &mut Vec<usize>, next: usize, size: usize) -> bool {
        if chosen.len() == size {
            return true;
        }
        for p in next..domain_size {
            chosen.push(p);
            if shatters(rows, chosen) && recurse(rows, domain_size, chosen, p + 1, size) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    fn shatters(rows: &[BitRow], points: &[usize]) -> bool {
        if points.len() >= usize::BITS as usize {
            return false;
        }
        let want = 1usize << points.len();
        let mut seen = vec![false; want];
        let mut count = 0;
        for row in rows {
            let mut pat = 0usize;
            for (i, &p) in points.iter().enumerate() {
                pat |= (row.get(p) as usize) << i;
            }
            if !seen[pat] {
                seen[pat] = true;
                count += 1;
                if count == want {
                    return true;
                }
            }
        }
        false
    }
    recurse(rows, domain_size, &mut Vec::new(), 0, size)
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

fn generate_thresholds(m: u32) -> Result<ConceptClass> {
    if m == 0 {
        return Err(Error::Config("thresholds generator needs m >= 1".into()));
    }
    let labels = (1..=m).map(|v| v.to_string()).collect();
    // Point id i carries the value i+1; h_t(x) = 1{x >= t} for t in 1..=m.
    let rows = (1..=m)
        .map(|t| BitRow::from_fn(m as usize, |i| (i as u32 + 1) >= t))
        .collect();
    ConceptClass::from_rows(Domain::labeled(labels), rows)
}

fn generate_real_thresholds(m: u32) -> Result<ConceptClass> {
    if m == 0 {
        return Err(Error::Config("real-thresholds generator needs m >= 1".into()));
    }
    let labels = (1..=m).map(|v| v.to_string()).collect();
    // Real thresholds t sweep m+1 distinct behaviors over an m-point grid:
    // the staircase rows of the integer family plus the all-zero row from
    // thresholds beyond the last grid point.
    let rows = (1..=m + 1)
        .map(|t| BitRow::from_fn(m as usize, |i| (i as u32 + 1) >= t))
        .collect();
    ConceptClass::from_rows(Domain::labeled(labels), rows)
}

fn generate_powerset_blocks(blocks: u32) -> Result<ConceptClass> {
    if blocks == 0 || blocks > 16 {
        return Err(Error::Config("powerset-blocks generator needs 1 <= blocks <= 16".into()));
    }
    let mut labels = Vec::new();
    let mut starts = Vec::new();
    for k in 1..=blocks {
        starts.push(labels.len());
        for j in 0..k {
            labels.push(format!("b{k}:{j}"));
        }
    }
    let total = labels.len();
    let mut rows = Vec::new();
    for (bi, k) in (1..=blocks).enumerate() {
        let start = starts[bi];
        for mask in 0u32..(1u32 << k) {
            rows.push(BitRow::from_fn(total, |i| {
                i >= start && i < start + k as usize && (mask >> (i - start)) & 1 == 1
            }));
        }
    }
    ConceptClass::from_rows(Domain::labeled(labels), rows)
}

/// Block `i` of the majority-blocks family occupies point ids
/// `[2^i − 1, 2^{i+1} − 2]`; id 0 is the sentinel point outside every block.
#[must_use]
pub fn majority_block_range(i: u32) -> std::ops::Range<u32> {
    (1u32 << i) - 1..(1u32 << (i + 1)) - 1
}

fn generate_majority_blocks(levels: u32) -> Result<ConceptClass> {
    if levels == 0 || levels > 20 {
        return Err(Error::Config("majority-blocks generator needs 1 <= levels <= 20".into()));
    }
    let mut labels = vec!["off".to_string()];
    for i in 1..=levels {
        for j in 0..(1u32 << i) {
            labels.push(format!("b{i}:{j}"));
        }
    }
    Ok(ConceptClass {
        domain: Arc::new(Domain::labeled(labels)),
        store: RowStore::MajorityBlocks { levels, constraints: Vec::new() },
        root_ids: Vec::new(),
        origin: None,
        cache: Arc::new(AnalysisCache::default()),
    })
}

fn generate_vcl_tree_class(depth: u32) -> Result<ConceptClass> {
    if depth == 0 || depth > 4 {
        return Err(Error::Config(
            "vcl-tree-class generator needs 1 <= depth <= 4 (depth 4 already has 2^10 branches)"
                .into(),
        ));
    }
    let d = depth as usize;
    // Tuple slots of the complete VCL tree: the node at level k (0-based)
    // reached by label path (η_1, …, η_k), η_j ∈ {0,1}^j, holds k+1 points.
    // Node index at level k mixes the path digits radix-wise.
    let mut level_node_counts = vec![1usize; d];
    for k in 1..d {
        level_node_counts[k] = level_node_counts[k - 1] << k;
    }
    let mut level_offsets = vec![0usize; d];
    let mut total = 0usize;
    for k in 0..d {
        level_offsets[k] = total;
        total += level_node_counts[k] * (k + 1);
    }
    let mut labels = vec![String::new(); total];
    for k in 0..d {
        for node in 0..level_node_counts[k] {
            for i in 0..=k {
                labels[level_offsets[k] + node * (k + 1) + i] = format!("L{k}N{node}P{i}");
            }
        }
    }
    // One hypothesis per full branch: label path (η_1, …, η_d).  On-path
    // node at level k is indexed by (η_1, …, η_k); the hypothesis labels its
    // i-th point with η_{k+1}^i and everything off-path 0.
    let mut rows = Vec::new();
    let branch_count: usize = (1..=d).map(|k| 1usize << k).product();
    for branch in 0..branch_count {
        // Decode the branch number into per-level label words η_{k+1} with
        // k+1 bits each, most significant level last.
        let mut digits = Vec::with_capacity(d);
        let mut rem = branch;
        for k in (1..=d).rev() {
            let base = 1usize << k;
            digits.push(rem % base);
            rem /= base;
        }
        digits.reverse(); // digits[k] = η_{k+1} as a (k+1)-bit word
        let mut row = BitRow::zeros(total);
        let mut node = 0usize;
        for k in 0..d {
            for i in 0..=k {
                if (digits[k] >> i) & 1 == 1 {
                    row.set(level_offsets[k] + node * (k + 1) + i, true);
                }
            }
            // Child node index at level k+1 appends η_{k+1} radix-wise.
            node = node * (1usize << (k + 1)) + digits[k];
        }
        rows.push(row);
    }
    ConceptClass::from_rows(Domain::labeled(labels), rows)
}

fn generate_full_class(n: u32) -> Result<ConceptClass> {
    if n == 0 || n > 20 {
        return Err(Error::Config("full-class generator needs 1 <= n <= 20".into()));
    }
    let rows = (0u32..(1u32 << n))
        .map(|mask| BitRow::from_fn(n as usize, |i| (mask >> i) & 1 == 1))
        .collect();
    ConceptClass::from_rows(Domain::indexed(n as usize), rows)
}

fn generate_singletons(n: u32) -> Result<ConceptClass> {
    if n == 0 {
        return Err(Error::Config("singletons generator needs n >= 1".into()));
    }
    let rows = (0..n).map(|j| BitRow::from_fn(n as usize, |i| i as u32 == j)).collect();
    ConceptClass::from_rows(Domain::indexed(n as usize), rows)
}

fn generate_half_intervals(m: u32) -> Result<ConceptClass> {
    if m == 0 {
        return Err(Error::Config("half-intervals generator needs m >= 1".into()));
    }
    let labels = (1..=m).map(|v| v.to_string()).collect();
    let rows = (0..=m)
        .map(|t| BitRow::from_fn(m as usize, |i| (i as u32 + 1) <= t))
        .collect();
    ConceptClass::from_rows(Domain::labeled(labels), rows)
}

// ---------------------------------------------------------------------------
// Majority-blocks closed form
// ---------------------------------------------------------------------------

/// Per-block consistency summary of a constraint list: which block the
/// 1-labels confine hypotheses to (if any), and how many points each block
/// has pinned to either label.
struct BlockConstraints {
    /// Block forced by 1-labeled constraints (`None` when no 1-labels).
    ones_block: Option<u32>,
    /// 1-labeled points, all in `ones_block`.
    ones: Vec<PointId>,
    /// 0-labeled points per block (block index → points).
    zeros: HashMap<u32, Vec<PointId>>,
    /// Contradiction or an impossible 1-label (sentinel or cross-block).
    infeasible: bool,
}

fn block_of(levels: u32, point: PointId) -> Option<u32> {
    if point == 0 {
        return None;
    }
    for i in 1..=levels {
        if majority_block_range(i).contains(&point) {
            return Some(i);
        }
    }
    None
}

fn summarize_constraints(levels: u32, constraints: &[Constraint]) -> BlockConstraints {
    let mut summary = BlockConstraints {
        ones_block: None,
        ones: Vec::new(),
        zeros: HashMap::new(),
        infeasible: false,
    };
    let mut seen: HashMap<PointId, u8> = HashMap::new();
    for c in constraints {
        if let Some(&prev) = seen.get(&c.point) {
            if prev != c.label & 1 {
                summary.infeasible = true;
                return summary;
            }
            continue;
        }
        seen.insert(c.point, c.label & 1);
        let block = block_of(levels, c.point);
        if c.label & 1 == 1 {
            match block {
                None => {
                    // Every hypothesis vanishes on the sentinel point.
                    summary.infeasible = true;
                    return summary;
                }
                Some(b) => match summary.ones_block {
                    None => {
                        summary.ones_block = Some(b);
                        summary.ones.push(c.point);
                    }
                    Some(existing) if existing == b => summary.ones.push(c.point),
                    Some(_) => {
                        // 1-labels in two different blocks: no single-block
                        // indicator satisfies both.
                        summary.infeasible = true;
                        return summary;
                    }
                },
            }
        } else if let Some(b) = block {
            summary.zeros.entry(b).or_default().push(c.point);
        }
    }
    summary
}

/// Number of hypotheses `1_I` with `I` in block `i`, `|I| ≥ 2^{i−1}`,
/// `I ⊇ ones`, `I` disjoint from `zeros`; saturating.
fn block_choices(i: u32, ones: usize, zeros: usize) -> u128 {
    let size = 1u128 << i;
    let need = 1u128 << (i - 1);
    let free = size - ones as u128 - zeros as u128;
    // Sum over extra points drawn from the free pool so that
    // |I| = ones + extra ≥ need.
    let min_extra = need.saturating_sub(ones as u128);
    let mut total: u128 = 0;
    for extra in min_extra..=free {
        total = total.saturating_add(binomial_saturating(free, extra));
        if total == u128::MAX {
            return u128::MAX;
        }
    }
    total
}

fn binomial_saturating(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for j in 0..k {
        let num = n - j;
        result = match result.checked_mul(num) {
            Some(v) => v / (j + 1),
            None => return u128::MAX,
        };
    }
    result
}

fn majority_blocks_count(levels: u32, constraints: &[Constraint]) -> u128 {
    let summary = summarize_constraints(levels, constraints);
    if summary.infeasible {
        return 0;
    }
    let empty = Vec::new();
    match summary.ones_block {
        Some(b) => {
            let zeros = summary.zeros.get(&b).unwrap_or(&empty).len();
            block_choices(b, summary.ones.len(), zeros)
        }
        None => {
            let mut total: u128 = 0;
            for i in 1..=levels {
                let zeros = summary.zeros.get(&i).unwrap_or(&empty).len();
                total = total.saturating_add(block_choices(i, 0, zeros));
            }
            total
        }
    }
}

fn majority_blocks_expand(levels: u32, constraints: &[Constraint], domain_size: usize) -> Vec<BitRow> {
    let summary = summarize_constraints(levels, constraints);
    let mut rows = Vec::new();
    if summary.infeasible {
        return rows;
    }
    let blocks: Vec<u32> = match summary.ones_block {
        Some(b) => vec![b],
        None => (1..=levels).collect(),
    };
    let empty = Vec::new();
    for i in blocks {
        let range = majority_block_range(i);
        let zeros = summary.zeros.get(&i).unwrap_or(&empty);
        let candidates: Vec<u32> = range
            .clone()
            .filter(|p| !zeros.contains(p) && !summary.ones.contains(p))
            .collect();
        let need = 1usize << (i - 1);
        let forced = if summary.ones_block == Some(i) { summary.ones.clone() } else { Vec::new() };
        // Enumerate subsets of the candidate pool meeting the size quota.
        let pool = candidates.len();
        for mask in 0u64..(1u64 << pool) {
            let extra = mask.count_ones() as usize;
            if forced.len() + extra < need {
                continue;
            }
            let mut row = BitRow::zeros(domain_size);
            for p in &forced {
                row.set(*p as usize, true);
            }
            for (j, p) in candidates.iter().enumerate() {
                if (mask >> j) & 1 == 1 {
                    row.set(*p as usize, true);
                }
            }
            rows.push(row);
        }
    }
    rows
}

fn majority_blocks_project(
    levels: u32,
    constraints: &[Constraint],
    points: &[PointId],
) -> Result<PatternSet> {
    if points.len() > 20 {
        return Err(Error::Budget(format!(
            "closed-form projection enumerates 2^{} patterns; tuple too long",
            points.len()
        )));
    }
    let mut patterns = Vec::new();
    for mask in 0u32..(1u32 << points.len()) {
        let mut merged = constraints.to_vec();
        let mut contradictory = false;
        for (j, &p) in points.iter().enumerate() {
            let label = ((mask >> j) & 1) as u8;
            // Repeated points force equal bits; a pattern assigning a point
            // two labels is unrealizable.
            if let Some(prev) = merged.iter().find(|c| c.point == p) {
                if prev.label != label {
                    contradictory = true;
                    break;
                }
            } else {
                merged.push(Constraint::new(p, label));
            }
        }
        if !contradictory && majority_blocks_count(levels, &merged) > 0 {
            patterns.push(BitRow::from_fn(points.len(), |j| (mask >> j) & 1 == 1));
        }
    }
    patterns.sort();
    patterns.dedup();
    Ok(PatternSet { arity: points.len(), patterns })
}

fn majority_blocks_vc(levels: u32, constraints: &[Constraint], cap: u32) -> Result<DimResult> {
    if !constraints.is_empty() {
        return Err(Error::Budget(
            "vc_dimension on a restricted closed-form class is not supported; \
             materialize() the restriction first"
                .into(),
        ));
    }
    // A shattered subset S lies inside one block i (a hypothesis puts its
    // ones in a single block, so cross-block one-patterns are unrealizable,
    // and the sentinel is constantly 0).  A nonempty trace T ⊆ S needs
    // |T| + (2^i − |S|) ≥ 2^{i−1}; the binding case |T| = 1 gives
    // |S| ≤ 2^{i−1} + 1.  The all-zeros trace is free via any *other*
    // block's hypothesis, so for levels ≥ 2 the largest block shatters
    // 2^{levels−1} + 1 points; with a single block the empty trace must
    // also fit inside it (2^i − |S| ≥ 2^{i−1}, so |S| ≤ 2^{i−1} = 1).
    let value = if levels >= 2 { (1u64 << (levels - 1)) + 1 } else { 1 };
    if u64::from(cap) < value {
        Ok(DimResult::AtLeastCap { cap })
    } else {
        Ok(DimResult::Exact { value: value as i64 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thresholds(m: u32) -> ConceptClass {
        ConceptClass::generate(&ClassSpec::Thresholds { m }).unwrap()
    }

    #[test]
    fn thresholds_restrict_keeps_consistent_hypotheses() {
        // h_t = 1{x >= t} on {1..4}: constraint h(2) = 1 keeps t in {1,2}.
        let class = thresholds(4);
        let restricted = class.restrict(&[Constraint::new(1, 1)]).unwrap();
        assert_eq!(restricted.size(), 2, "exactly thresholds t=1 and t=2 satisfy h(2)=1");
        // Both survivors indeed label point 2 (id 1) with 1.
        for row in restricted.rows().unwrap() {
            assert_eq!(row.get(1), 1);
        }
    }

    #[test]
    fn empty_constraint_list_is_identity() {
        let class = thresholds(5);
        let same = class.restrict(&[]).unwrap();
        assert_eq!(same.size(), class.size());
        assert_eq!(same.rows().unwrap(), class.rows().unwrap());
    }

    #[test]
    fn contradictory_constraints_empty_the_class() {
        let class = ConceptClass::generate(&ClassSpec::FullClass { n: 2 }).unwrap();
        let restricted =
            class.restrict(&[Constraint::new(0, 0), Constraint::new(0, 1)]).unwrap();
        assert!(restricted.is_empty(), "h(a)=0 and h(a)=1 cannot both hold");
    }

    #[test]
    fn restrict_is_idempotent_and_monotone() {
        let class = thresholds(6);
        let cs = [Constraint::new(2, 1), Constraint::new(4, 0)];
        let once = class.restrict(&cs).unwrap();
        let twice = once.restrict(&cs).unwrap();
        assert_eq!(once.rows().unwrap(), twice.rows().unwrap(), "idempotent");
        assert!(once.size() <= class.size(), "monotone");
    }

    #[test]
    fn thresholds_projection_matches_enumeration() {
        // thresholds on {1..3}, tuple (1,2,3): patterns 111, 011, 001.
        let class = thresholds(3);
        let proj = class.project(&[0, 1, 2]).unwrap();
        let expect: Vec<BitRow> =
            ["111", "011", "001"].iter().map(|s| BitRow::parse(s).unwrap()).collect();
        let mut expect = expect;
        expect.sort();
        assert_eq!(proj.patterns, expect);
    }

    #[test]
    fn projection_of_singleton_class_has_one_pattern() {
        let class = ConceptClass::generate(&ClassSpec::Explicit {
            rows: vec!["0110".into()],
        })
        .unwrap();
        let proj = class.project(&[3, 1, 1, 0]).unwrap();
        assert_eq!(proj.patterns.len(), 1);
        assert_eq!(proj.patterns[0].to_string(), "0110");
    }

    #[test]
    fn full_class_projection_shatters() {
        let class = ConceptClass::generate(&ClassSpec::FullClass { n: 2 }).unwrap();
        let proj = class.project(&[0, 1]).unwrap();
        assert_eq!(proj.patterns.len(), 4, "full class realizes all 4 patterns");
        assert!(proj.is_shattered());
    }

    #[test]
    fn repeated_points_force_equal_bits() {
        let class = ConceptClass::generate(&ClassSpec::FullClass { n: 2 }).unwrap();
        let proj = class.project(&[0, 0]).unwrap();
        // Only 00 and 11 are realizable on a repeated point.
        assert_eq!(proj.patterns.len(), 2);
        for p in &proj.patterns {
            assert_eq!(p.get(0), p.get(1), "repeated point must carry equal bits");
        }
    }

    #[test]
    fn vc_dimension_of_thresholds_is_one() {
        for m in [2u32, 5, 16] {
            let class = thresholds(m);
            assert_eq!(
                class.vc_dimension(8).unwrap(),
                DimResult::Exact { value: 1 },
                "thresholds on {{1..{m}}} have VC dimension 1"
            );
        }
    }

    #[test]
    fn vc_dimension_of_full_class_is_domain_size() {
        let class = ConceptClass::generate(&ClassSpec::FullClass { n: 3 }).unwrap();
        assert_eq!(class.vc_dimension(8).unwrap(), DimResult::Exact { value: 3 });
    }

    #[test]
    fn vc_dimension_of_singleton_class_is_zero() {
        let class =
            ConceptClass::generate(&ClassSpec::Explicit { rows: vec!["0101".into()] }).unwrap();
        assert_eq!(class.vc_dimension(4).unwrap(), DimResult::Exact { value: 0 });
    }

    #[test]
    fn vc_cap_reports_at_least_when_uncertified() {
        let class = ConceptClass::generate(&ClassSpec::FullClass { n: 4 }).unwrap();
        // Cap 2 on a class of VC 4: a 2-set is shattered, the Sauer bound
        // (log2 16 = 4) does not pin it, so the search reports >= 2.
        assert_eq!(class.vc_dimension(2).unwrap(), DimResult::AtLeastCap { cap: 2 });
    }

    #[test]
    fn duplicate_rows_are_deduplicated() {
        let class = ConceptClass::generate(&ClassSpec::Explicit {
            rows: vec!["01".into(), "01".into(), "10".into()],
        })
        .unwrap();
        assert_eq!(class.size(), 2, "classes are sets of functions");
    }

    #[test]
    fn powerset_blocks_dedups_shared_zero_function() {
        // Blocks of sizes 1,2,3: 2 + 4 + 8 = 14 raw indicators, but the
        // empty set of every block is the same all-zero function.
        let class = ConceptClass::generate(&ClassSpec::PowersetBlocks { blocks: 3 }).unwrap();
        assert_eq!(class.domain().size(), 6);
        assert_eq!(class.size(), 12);
    }

    #[test]
    fn vcl_tree_class_counts() {
        // Depth 3: one 1-point node, two 2-point nodes, eight 3-point nodes
        // (2^{1+2} paths), 1 + 4 + 24 = 29 points; 2·4·8 = 64 branches, all
        // distinct as functions.
        let class = ConceptClass::generate(&ClassSpec::VclTreeClass { depth: 3 }).unwrap();
        assert_eq!(class.domain().size(), 29);
        assert_eq!(class.size(), 64);
    }

    #[test]
    fn half_intervals_form_a_chain() {
        let class = ConceptClass::generate(&ClassSpec::HalfIntervals { m: 4 }).unwrap();
        assert_eq!(class.size(), 5, "t = 0..4 gives 5 distinct rows");
        assert_eq!(class.vc_dimension(4).unwrap(), DimResult::Exact { value: 1 });
    }

    #[test]
    fn majority_blocks_small_instance_counts() {
        // levels 2: block 1 has C(2,>=1) = 3 hypotheses, block 2 has
        // C(4,>=2) = 11; supports are disjoint and nonempty, so 14 total.
        let class = ConceptClass::generate(&ClassSpec::MajorityBlocks { levels: 2 }).unwrap();
        assert_eq!(class.domain().size(), 7, "sentinel + 2 + 4 points");
        assert_eq!(class.size(), 14);
        let explicit = class.materialize(1 << 20).unwrap();
        assert_eq!(explicit.size(), 14);
    }

    #[test]
    fn majority_blocks_closed_form_matches_expansion() {
        let class = ConceptClass::generate(&ClassSpec::MajorityBlocks { levels: 2 }).unwrap();
        let explicit = class.materialize(1 << 20).unwrap();
        // Projection equivalence on assorted tuples, including the sentinel
        // and repeated points.
        let tuples: Vec<Vec<PointId>> =
            vec![vec![0], vec![1], vec![1, 2], vec![3, 4, 5], vec![2, 2], vec![0, 1, 3], vec![1, 2, 3, 4]];
        for tuple in tuples {
            let a = class.project(&tuple).unwrap();
            let b = explicit.project(&tuple).unwrap();
            assert_eq!(a, b, "projection mismatch on {tuple:?}");
        }
        // Restriction-count equivalence on assorted constraint lists.
        let constraint_sets = vec![
            vec![Constraint::new(1, 1)],
            vec![Constraint::new(1, 0), Constraint::new(2, 0)],
            vec![Constraint::new(3, 1), Constraint::new(4, 1), Constraint::new(5, 0)],
            vec![Constraint::new(0, 1)],
            vec![Constraint::new(1, 1), Constraint::new(3, 1)],
        ];
        for cs in constraint_sets {
            let a = class.restrict(&cs).unwrap().size();
            let b = explicit.restrict(&cs).unwrap().size();
            assert_eq!(a, b, "restriction count mismatch on {cs:?}");
        }
    }

    #[test]
    fn majority_blocks_vc_matches_explicit_oracle() {
        // Largest block has 8 points and quota 4.  A 5-subset S is
        // shattered: a singleton trace extends to quota 4 using the 3
        // points outside S, and the all-zeros trace comes from a smaller
        // block's hypothesis.  A 6-subset fails on singleton traces.
        let class = ConceptClass::generate(&ClassSpec::MajorityBlocks { levels: 3 }).unwrap();
        assert_eq!(class.vc_dimension(16).unwrap(), DimResult::Exact { value: 5 });
        let explicit = class.materialize(1 << 24).unwrap();
        assert_eq!(explicit.vc_dimension(16).unwrap(), DimResult::Exact { value: 5 });
        // Two levels: block 2 has 4 points, quota 2; 2 + 1 = 3.
        let two = ConceptClass::generate(&ClassSpec::MajorityBlocks { levels: 2 }).unwrap();
        assert_eq!(two.vc_dimension(16).unwrap(), DimResult::Exact { value: 3 });
        assert_eq!(
            two.materialize(1 << 24).unwrap().vc_dimension(16).unwrap(),
            DimResult::Exact { value: 3 }
        );
        // Single level: {01, 10, 11} on the block never realizes all-zeros.
        let one = ConceptClass::generate(&ClassSpec::MajorityBlocks { levels: 1 }).unwrap();
        assert_eq!(one.vc_dimension(16).unwrap(), DimResult::Exact { value: 1 });
        assert_eq!(
            one.materialize(1 << 24).unwrap().vc_dimension(16).unwrap(),
            DimResult::Exact { value: 1 }
        );
    }

    #[test]
    fn generator_equivalence_on_small_instances() {
        // Every generator instance with |domain| <= 12 must answer project
        // and restrict exactly like its explicit expansion.
        let specs = vec![
            ClassSpec::Thresholds { m: 6 },
            ClassSpec::RealThresholds { m: 5 },
            ClassSpec::PowersetBlocks { blocks: 3 },
            ClassSpec::MajorityBlocks { levels: 2 },
            ClassSpec::FullClass { n: 3 },
            ClassSpec::Singletons { n: 7 },
            ClassSpec::HalfIntervals { m: 6 },
        ];
        for spec in specs {
            let class = ConceptClass::generate(&spec).unwrap();
            let explicit = class.materialize(1 << 22).unwrap();
            assert!(class.domain().size() <= 12, "{spec:?} should be small here");
            let m = class.domain().size() as u32;
            for p in 0..m {
                for q in 0..m {
                    let a = class.project(&[p, q]).unwrap();
                    let b = explicit.project(&[p, q]).unwrap();
                    assert_eq!(a, b, "{spec:?} projection mismatch on ({p},{q})");
                }
                for label in 0..2u8 {
                    let a = class.restrict(&[Constraint::new(p, label)]).unwrap().size();
                    let b = explicit.restrict(&[Constraint::new(p, label)]).unwrap().size();
                    assert_eq!(a, b, "{spec:?} restrict mismatch on ({p},{label})");
                }
            }
        }
    }

    #[test]
    fn unknown_point_is_a_domain_error() {
        let class = thresholds(3);
        let err = class.restrict(&[Constraint::new(9, 1)]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "got {err:?}");
        let err = class.project(&[0, 9]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "got {err:?}");
    }

    #[test]
    fn materialize_respects_budget() {
        let class = ConceptClass::generate(&ClassSpec::MajorityBlocks { levels: 8 }).unwrap();
        let err = class.materialize(1 << 20).unwrap_err();
        assert!(matches!(err, Error::Budget(_)), "got {err:?}");
        // rows() on the closed form is also a budget error.
        assert!(matches!(class.rows().unwrap_err(), Error::Budget(_)));
    }

    #[test]
    fn class_spec_roundtrips_through_toml() {
        let spec = ClassSpec::Thresholds { m: 64 };
        let text = toml::to_string(&spec).unwrap();
        let back: ClassSpec = toml::from_str(&text).unwrap();
        assert_eq!(spec, back);
    }
}
