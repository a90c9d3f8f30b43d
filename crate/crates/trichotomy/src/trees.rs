//! Littlestone and VCL tree search, game values, and the value-greedy move.
//!
//! **Littlestone trees.**  A Littlestone tree of depth `d` for a class `H`
//! is a complete binary tree of domain points `{x_u : u ∈ {0,1}^{<d}}` such
//! that every root-to-leaf label path is consistent: for each `y ∈ {0,1}^d`
//! and each `n < d` some hypothesis satisfies `h(x_{y≤k}) = y_{k+1}` for all
//! `k ≤ n`.  The Littlestone dimension `LD(H)` is the largest such depth
//! (`−1` for the empty class), and it obeys the exact recursion
//!
//! ```text
//! LD(H) = max over points x of  1 + min(LD(H_{x,0}), LD(H_{x,1}))
//! ```
//!
//! for nonempty `H`, with `LD(∅) = −1` — a one-sided restriction being empty
//! makes the inner min `−1` and the candidate `0`.  `LD` is also the value of
//! the online mistake game: for every point `x` some label `y` has
//! `LD(H_{x,y}) < LD(H)`, so the label-player can force the value down each
//! round, and [`gale_stewart_move`] plays exactly that value-minimizing
//! label.
//!
//! **VCL trees.**  A VCL tree of depth `d` labels its level-`k` nodes with
//! `(k+1)`-point tuples and branches over all `2^{k+1}` label patterns; every
//! partial label path must be realized by some hypothesis.  The analogous
//! game value from next-tuple-arity `a` satisfies
//!
//! ```text
//! V(H, a) = max over a-tuples x, shattered by H, of  1 + min over patterns η of V(H_{x,η}, a+1)
//! ```
//!
//! (and `0` when no tuple is shattered, `−1` for empty `H`), so
//! `vcl_dimension(H) = max(0, V(H, 1))`.
//!
//! Both searches memoize on the canonically sorted hypothesis row set of the
//! restricted class (as stable row ids relative to the restriction chain's
//! root), with an exactness-aware cap: values certified below the cap or
//! pinned by the Sauer-style bound `LD ≤ log2 |H|` are stored exact, and
//! cap-limited answers are stored as lower bounds that later, larger-cap
//! queries upgrade.

use crate::bits::BitRow;
use crate::classes::{CacheEntry, ConceptClass, Constraint, PointId};
use crate::{Error, Result};

pub use crate::classes::DimResult;

/// Node budget for VCL-style searches (each shattering test of a candidate
/// tuple costs one node).  Exceeding the budget is an explicit error, never
/// a wrong answer.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    /// Maximum number of candidate-tuple evaluations.
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 10_000_000 }
    }
}

/// A witness Littlestone tree: `levels[k]` holds the `2^k` node points of
/// level `k`, indexed by the label path `y_1…y_k` read as a binary number
/// with `y_1` most significant.
#[derive(Clone, Debug)]
pub struct LittlestoneTree {
    depth: usize,
    levels: Vec<Vec<PointId>>,
}

impl LittlestoneTree {
    /// The depth-0 tree (no nodes): what an adversary holds when the class
    /// has Littlestone dimension ≤ 0.
    #[must_use]
    pub fn empty() -> Self {
        LittlestoneTree { depth: 0, levels: Vec::new() }
    }

    /// Assemble a tree from explicit level data; validates only the shape
    /// (level `k` has `2^k` points), not class consistency — use
    /// [`verify_littlestone_tree`] for that.
    pub fn from_levels(levels: Vec<Vec<PointId>>) -> Result<Self> {
        for (k, level) in levels.iter().enumerate() {
            let expected = 1usize << k;
            if level.len() != expected {
                return Err(Error::Construction(format!(
                    "Littlestone level {k} has {} points, expected {expected}",
                    level.len()
                )));
            }
        }
        Ok(LittlestoneTree { depth: levels.len(), levels })
    }

    /// Tree depth.
    #[must_use]
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Point at level `k` on the label path `path` (only the first `k` bits
    /// are used; bit 0 of the slice is `y_1`).
    #[must_use]
    pub fn point(&self, path: &[u8], k: usize) -> PointId {
        self.levels[k][path_index(path, k)]
    }

    /// Raw level data.
    #[must_use]
    pub fn levels(&self) -> &[Vec<PointId>] {
        &self.levels
    }
}

fn path_index(path: &[u8], k: usize) -> usize {
    let mut idx = 0usize;
    for &b in &path[..k] {
        idx = (idx << 1) | (b as usize & 1);
    }
    idx
}

/// A witness VCL tree: `levels[k]` holds the `(k+1)`-point tuples of level
/// `k`, indexed mixed-radix by the pattern path `(η_1, …, η_k)` via
/// `idx_k = idx_{k−1}·2^k + η_k` (pattern bit `i` labels tuple point `i`).
#[derive(Clone, Debug)]
pub struct VCLTree {
    depth: usize,
    levels: Vec<Vec<Vec<PointId>>>,
}

impl VCLTree {
    /// Assemble a tree from explicit level data; validates only the shape
    /// (level `k` has `2^{k(k+1)/2}` nodes of `k+1` points each), not class
    /// consistency — use [`verify_vcl_tree`] for that.
    pub fn from_levels(levels: Vec<Vec<Vec<PointId>>>) -> Result<Self> {
        let depth = levels.len();
        let mut expected_nodes = 1usize;
        for (k, level) in levels.iter().enumerate() {
            if level.len() != expected_nodes {
                return Err(Error::Construction(format!(
                    "VCL level {k} has {} nodes, expected {expected_nodes}",
                    level.len()
                )));
            }
            for tuple in level {
                if tuple.len() != k + 1 {
                    return Err(Error::Construction(format!(
                        "VCL level {k} node has {} points, expected {}",
                        tuple.len(),
                        k + 1
                    )));
                }
            }
            expected_nodes <<= k + 1;
        }
        Ok(VCLTree { depth, levels })
    }

    /// Tree depth.
    #[must_use]
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Tuple at level `k` for the pattern path `patterns[..k]` (pattern `j`
    /// is the label word `η_{j+1}`, bit `i` labeling tuple point `i`).
    #[must_use]
    pub fn tuple(&self, patterns: &[u32], k: usize) -> &[PointId] {
        &self.levels[k][vcl_node_index(patterns, k)]
    }

    /// Raw level data.
    #[must_use]
    pub fn levels(&self) -> &[Vec<Vec<PointId>>] {
        &self.levels
    }
}

fn vcl_node_index(patterns: &[u32], k: usize) -> usize {
    let mut idx = 0usize;
    for (j, &p) in patterns[..k].iter().enumerate() {
        idx = (idx << (j + 1)) | (p as usize);
    }
    idx
}

/// A position of the online mistake game: the committed `(point, label)`
/// constraints and the cached Littlestone dimension of the restricted class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GamePosition {
    constraints: Vec<Constraint>,
    value: i64,
}

impl GamePosition {
    /// The opening position: no constraints, value `LD(class)`.
    pub fn root(class: &ConceptClass) -> Result<GamePosition> {
        let rows = Working::from_class(class)?;
        let (value, _) = rows.ld(&rows.all(), i32::MAX);
        Ok(GamePosition { constraints: Vec::new(), value: i64::from(value) })
    }

    /// The position after one more committed `(x, y)`; value recomputed
    /// exactly.
    pub fn extend(&self, class: &ConceptClass, x: PointId, y: u8) -> Result<GamePosition> {
        let mut constraints = self.constraints.clone();
        constraints.push(Constraint::new(x, y));
        let restricted = class.restrict(&constraints)?;
        let rows = Working::from_class(&restricted)?;
        let (value, _) = rows.ld(&rows.all(), i32::MAX);
        Ok(GamePosition { constraints, value: i64::from(value) })
    }

    /// Committed constraints, in play order.
    #[must_use]
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// `LD` of the restricted class; `−1` iff the restriction is empty.
    #[must_use]
    pub fn value(&self) -> i64 {
        self.value
    }
}

/// Largest `d ≤ cap` such that a Littlestone tree of depth `d` exists;
/// `Exact{−1}` for the empty class.  Returns [`DimResult::AtLeastCap`] when
/// the cap-limited search proves `LD ≥ cap` without certifying a maximum.
pub fn littlestone_dimension(class: &ConceptClass, cap: u32) -> Result<DimResult> {
    let rows = Working::from_class(class)?;
    let cap_i = i32::try_from(cap).unwrap_or(i32::MAX);
    let (value, exact) = rows.ld(&rows.all(), cap_i);
    if exact {
        Ok(DimResult::Exact { value: i64::from(value) })
    } else {
        Ok(DimResult::AtLeastCap { cap })
    }
}

/// A witness Littlestone tree of exactly the requested depth, or `None` iff
/// `littlestone_dimension(class) < depth`.
pub fn find_littlestone_tree(class: &ConceptClass, depth: u32) -> Result<Option<LittlestoneTree>> {
    if depth == 0 {
        return Err(Error::Config("find_littlestone_tree needs depth >= 1".into()));
    }
    let rows = Working::from_class(class)?;
    let d = depth as usize;
    let all = rows.all();
    let (value, _) = rows.ld(&all, depth as i32);
    if (value as i64) < i64::from(depth) {
        return Ok(None);
    }
    let mut levels: Vec<Vec<PointId>> = (0..d).map(|k| vec![0; 1usize << k]).collect();
    rows.build_littlestone(&all, d, 0, 0, &mut levels);
    Ok(Some(LittlestoneTree { depth: d, levels }))
}

/// Independent invariant check for a witness tree: for every leaf label path
/// the full constraint chain must keep the class nonempty (which subsumes
/// all shorter prefixes).  Uses only [`ConceptClass::restrict`], no search
/// code.
pub fn verify_littlestone_tree(class: &ConceptClass, tree: &LittlestoneTree) -> Result<bool> {
    let d = tree.depth();
    for leaf in 0..(1usize << d) {
        let path: Vec<u8> = (0..d).map(|k| ((leaf >> (d - 1 - k)) & 1) as u8).collect();
        let constraints: Vec<Constraint> =
            (0..d).map(|k| Constraint::new(tree.point(&path, k), path[k])).collect();
        if class.restrict(&constraints)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest `d ≤ cap` such that a VCL tree of depth `d` exists (0 for the
/// empty class — the empty tree always exists).  Budget overruns are
/// explicit errors.
pub fn vcl_dimension(class: &ConceptClass, cap: u32, budget: &SearchBudget) -> Result<DimResult> {
    if cap == 0 {
        return Err(Error::Config("vcl_dimension needs cap >= 1".into()));
    }
    let rows = Working::from_class(class)?;
    let mut nodes = 0u64;
    let (value, exact) = rows.vcl(&rows.all(), 1, cap as i32, budget, &mut nodes)?;
    let value = i64::from(value.max(0));
    if exact {
        Ok(DimResult::Exact { value })
    } else {
        Ok(DimResult::AtLeastCap { cap })
    }
}

/// A witness VCL tree of exactly the requested depth, or `None` iff
/// `vcl_dimension(class) < depth`.
pub fn find_vcl_tree(
    class: &ConceptClass,
    depth: u32,
    budget: &SearchBudget,
) -> Result<Option<VCLTree>> {
    if depth == 0 {
        return Err(Error::Config("find_vcl_tree needs depth >= 1".into()));
    }
    let rows = Working::from_class(class)?;
    let all = rows.all();
    let mut nodes = 0u64;
    let (value, _) = rows.vcl(&all, 1, depth as i32, budget, &mut nodes)?;
    if (value as i64) < i64::from(depth) {
        return Ok(None);
    }
    let d = depth as usize;
    let mut levels: Vec<Vec<Vec<PointId>>> = Vec::with_capacity(d);
    let mut nodes_at = 1usize;
    for k in 0..d {
        levels.push(vec![Vec::new(); nodes_at]);
        nodes_at <<= k + 1;
    }
    rows.build_vcl(&all, d, 0, 0, budget, &mut nodes, &mut levels)?;
    Ok(Some(VCLTree { depth: d, levels }))
}

/// Independent invariant check for a witness VCL tree, via restrict-nonempty
/// over every full pattern path.
pub fn verify_vcl_tree(class: &ConceptClass, tree: &VCLTree) -> Result<bool> {
    let d = tree.depth();
    let mut path = vec![0u32; d];
    verify_vcl_paths(class, tree, &mut path, 0)
}

fn verify_vcl_paths(
    class: &ConceptClass,
    tree: &VCLTree,
    path: &mut [u32],
    k: usize,
) -> Result<bool> {
    if k == tree.depth() {
        let mut constraints = Vec::new();
        for (level, &pattern) in path.iter().enumerate() {
            let tuple = tree.tuple(path, level).to_vec();
            for (i, &p) in tuple.iter().enumerate() {
                constraints.push(Constraint::new(p, ((pattern >> i) & 1) as u8));
            }
        }
        return Ok(!class.restrict(&constraints)?.is_empty());
    }
    for pattern in 0..(1u32 << (k + 1)) {
        path[k] = pattern;
        if !verify_vcl_paths(class, tree, path, k + 1)? {
            return Ok(false);
        }
    }
    path[k] = 0;
    Ok(true)
}

/// The label minimizing the Littlestone dimension of the extended
/// restriction (ties to 0).  Strictly decreases the game value whenever the
/// position value is finite and ≥ 0; a terminal position (value −1) is a
/// state error.
pub fn gale_stewart_move(class: &ConceptClass, position: &GamePosition, x: PointId) -> Result<u8> {
    if position.value() < 0 {
        return Err(Error::State(
            "gale_stewart_move on a terminal position (restricted class is empty)".into(),
        ));
    }
    class.domain().check(x)?;
    let restricted = class.restrict(position.constraints())?;
    let rows = Working::from_class(&restricted)?;
    let all = rows.all();
    let cap = i32::try_from(position.value()).unwrap_or(i32::MAX);
    let mut split = [Vec::new(), Vec::new()];
    for &r in &all {
        split[rows.label(r, x) as usize].push(r);
    }
    let (v0, _) = rows.ld(&split[0], cap);
    let (v1, _) = rows.ld(&split[1], cap);
    Ok(u8::from(v1 < v0))
}

/// Allocation-light handle over a materialized class for callers that track
/// row subsets themselves (the online runner, the exhaustive adversary):
/// exposes splitting by a point and the exact memoized Littlestone value
/// without cloning row tables.
pub(crate) struct LdOracle<'a>(Working<'a>);

impl<'a> LdOracle<'a> {
    pub(crate) fn new(class: &'a ConceptClass) -> Result<Self> {
        Ok(LdOracle(Working::from_class(class)?))
    }

    /// All row indices of the class.
    pub(crate) fn all_rows(&self) -> Vec<u32> {
        self.0.all()
    }

    /// Partition `rows` by their label at `x` (index = label).
    pub(crate) fn split(&self, rows: &[u32], x: PointId) -> [Vec<u32>; 2] {
        let mut parts = [Vec::new(), Vec::new()];
        for &r in rows {
            parts[self.0.label(r, x) as usize].push(r);
        }
        parts
    }

    /// Exact Littlestone dimension of the row subset (−1 if empty).
    pub(crate) fn value(&self, rows: &[u32]) -> i64 {
        i64::from(self.0.ld(rows, i32::MAX).0)
    }
}

/// Companion handle for the VCL game value on caller-tracked row subsets
/// (the pattern-avoidance strategy evaluates many sibling restrictions of
/// one class).
pub(crate) struct VclOracle<'a>(Working<'a>);

impl<'a> VclOracle<'a> {
    pub(crate) fn new(class: &'a ConceptClass) -> Result<Self> {
        Ok(VclOracle(Working::from_class(class)?))
    }

    /// All row indices of the class.
    pub(crate) fn all_rows(&self) -> Vec<u32> {
        self.0.all()
    }

    /// Label of `row` at `x`.
    pub(crate) fn label(&self, row: u32, x: PointId) -> u8 {
        self.0.label(row, x)
    }

    /// Stable memo key (root row ids) of a row subset.
    pub(crate) fn key(&self, rows: &[u32]) -> Vec<u32> {
        self.0.key(rows)
    }

    /// Exact VCL game value of the row subset with the next tuple arity
    /// (−1 if empty).  The budget counts candidate-tuple evaluations within
    /// this call.
    pub(crate) fn value(
        &self,
        rows: &[u32],
        next_arity: u32,
        budget: &SearchBudget,
    ) -> Result<i64> {
        let mut nodes = 0u64;
        let (v, _) = self.0.vcl(rows, next_arity, i32::MAX, budget, &mut nodes)?;
        Ok(i64::from(v))
    }
}

// ---------------------------------------------------------------------------
// Search engine
// ---------------------------------------------------------------------------

/// Materialized view of a class for the recursive searches: rows, their
/// stable root ids (memo-key material), and the shared cache.
struct Working<'a> {
    class: &'a ConceptClass,
    rows: &'a [BitRow],
    domain_size: usize,
}

impl<'a> Working<'a> {
    fn from_class(class: &'a ConceptClass) -> Result<Self> {
        let rows = class.rows()?;
        Ok(Working { class, rows, domain_size: class.domain().size() })
    }

    /// All local row indices.
    fn all(&self) -> Vec<u32> {
        (0..self.rows.len() as u32).collect()
    }

    fn label(&self, row: u32, point: PointId) -> u8 {
        self.rows[row as usize].get(point as usize)
    }

    /// Memo key: the root ids of the selected rows.  Local index order
    /// follows root-id order, so the key is already sorted.
    fn key(&self, rows: &[u32]) -> Vec<u32> {
        let ids = self.class.root_ids();
        rows.iter().map(|&r| ids[r as usize]).collect()
    }

    /// `floor(log2 n)` for `n ≥ 1`.
    fn floor_log2(n: usize) -> i32 {
        (usize::BITS - 1 - n.leading_zeros()) as i32
    }

    /// Bounded Littlestone dimension: returns `(min(LD, cap), exact)` where
    /// `exact` means the first component equals `LD` itself.  Any returned
    /// value strictly below `cap` is exact.
    fn ld(&self, rows: &[u32], cap: i32) -> (i32, bool) {
        if rows.is_empty() {
            return (-1, true);
        }
        let log2_bound = Self::floor_log2(rows.len());
        let effective = cap.min(log2_bound);
        if effective <= 0 {
            return (0, log2_bound == 0);
        }
        let key = self.key(rows);
        let cached = { self.class.cache().littlestone.lock().unwrap().get(&key).copied() };
        match cached {
            Some(CacheEntry::Exact(v)) => {
                return if v <= cap { (v, true) } else { (cap, false) };
            }
            Some(CacheEntry::AtLeast(b)) if b >= effective => {
                return if effective < log2_bound {
                    (effective, false)
                } else {
                    // The log2 bound pins LD = effective exactly; upgrade.
                    self.store_ld(key, CacheEntry::Exact(effective));
                    (effective, effective <= cap)
                };
            }
            _ => {}
        }
        let mut best = 0i32;
        let mut split = [Vec::new(), Vec::new()];
        for x in 0..self.domain_size as PointId {
            split[0].clear();
            split[1].clear();
            for &r in rows {
                split[self.label(r, x) as usize].push(r);
            }
            if split[0].is_empty() || split[1].is_empty() {
                continue;
            }
            let (v0, _) = self.ld(&split[0], effective - 1);
            let v_min_cap = effective - 1;
            // The second branch only needs to match the first up to the
            // remaining cap; min() below is unaffected.
            let (v1, _) = self.ld(&split[1], v_min_cap);
            let candidate = 1 + v0.min(v1);
            if candidate > best {
                best = candidate;
                if best == effective {
                    break;
                }
            }
        }
        let exact = best < effective || effective == log2_bound;
        self.store_ld(key, if exact { CacheEntry::Exact(best) } else { CacheEntry::AtLeast(best) });
        (best, exact || best < cap)
    }

    fn store_ld(&self, key: Vec<u32>, entry: CacheEntry) {
        let mut table = self.class.cache().littlestone.lock().unwrap();
        let slot = table.entry(key).or_insert(entry);
        // Keep the strongest knowledge: exact beats bounds, larger bounds
        // beat smaller ones.
        match (*slot, entry) {
            (CacheEntry::AtLeast(_), CacheEntry::Exact(_)) => *slot = entry,
            (CacheEntry::AtLeast(old), CacheEntry::AtLeast(new)) if new > old => *slot = entry,
            _ => {}
        }
    }

    /// Witness construction for a depth-`d` Littlestone tree; callable only
    /// when `ld(rows, d) = d`.
    fn build_littlestone(
        &self,
        rows: &[u32],
        remaining: usize,
        level: usize,
        node: usize,
        levels: &mut [Vec<PointId>],
    ) {
        if remaining == 0 {
            return;
        }
        let need = remaining as i32 - 1;
        let mut split = [Vec::new(), Vec::new()];
        for x in 0..self.domain_size as PointId {
            split[0].clear();
            split[1].clear();
            for &r in rows {
                split[self.label(r, x) as usize].push(r);
            }
            if split[0].is_empty() || split[1].is_empty() {
                continue;
            }
            let (v0, _) = self.ld(&split[0], need);
            if v0 < need {
                continue;
            }
            let (v1, _) = self.ld(&split[1], need);
            if v1 < need {
                continue;
            }
            levels[level][node] = x;
            self.build_littlestone(&split[0], remaining - 1, level + 1, node << 1, levels);
            self.build_littlestone(&split[1], remaining - 1, level + 1, (node << 1) | 1, levels);
            return;
        }
        unreachable!("caller certified a depth-{remaining} subtree exists");
    }

    /// Bounded VCL game value from next-tuple arity `arity`: returns
    /// `(min(V, cap), exact)` with `V = −1` for the empty set.  One budget
    /// node per candidate-tuple shattering test.
    fn vcl(
        &self,
        rows: &[u32],
        arity: u32,
        cap: i32,
        budget: &SearchBudget,
        nodes: &mut u64,
    ) -> Result<(i32, bool)> {
        if rows.is_empty() {
            return Ok((-1, true));
        }
        // A depth-v continuation from arity a has 2^(va + v(v−1)/2) full
        // pattern paths, each realized by a distinct hypothesis (two paths
        // first differ on a shared tuple), so v·a + v(v−1)/2 ≤ log2 |rows|.
        let log2 = Self::floor_log2(rows.len());
        let a = arity as i32;
        let mut log2_bound = 0i32;
        while (log2_bound + 1) * a + log2_bound * (log2_bound + 1) / 2 <= log2 {
            log2_bound += 1;
        }
        let effective = cap.min(log2_bound);
        if effective <= 0 {
            return Ok((0, log2_bound == 0));
        }
        let key = (self.key(rows), arity);
        let cached = { self.class.cache().vcl.lock().unwrap().get(&key).copied() };
        match cached {
            Some(CacheEntry::Exact(v)) => {
                return Ok(if v <= cap { (v, true) } else { (cap, false) });
            }
            Some(CacheEntry::AtLeast(b)) if b >= effective => {
                return Ok(if effective < log2_bound {
                    (effective, false)
                } else {
                    self.store_vcl(key, CacheEntry::Exact(effective));
                    (effective, effective <= cap)
                });
            }
            _ => {}
        }
        // Only points carrying both labels can sit in a shattered tuple.
        let candidates = self.bivalued_points(rows);
        let mut best = 0i32;
        if candidates.len() >= arity as usize {
            let mut tuple = Vec::with_capacity(arity as usize);
            best = self.vcl_tuples(
                rows,
                &candidates,
                0,
                &mut tuple,
                arity,
                effective,
                budget,
                nodes,
            )?;
        }
        let exact = best < effective || effective == log2_bound;
        self.store_vcl(key, if exact { CacheEntry::Exact(best) } else { CacheEntry::AtLeast(best) });
        Ok((best, exact || best < cap))
    }

    fn store_vcl(&self, key: (Vec<u32>, u32), entry: CacheEntry) {
        let mut table = self.class.cache().vcl.lock().unwrap();
        let slot = table.entry(key).or_insert(entry);
        match (*slot, entry) {
            (CacheEntry::AtLeast(_), CacheEntry::Exact(_)) => *slot = entry,
            (CacheEntry::AtLeast(old), CacheEntry::AtLeast(new)) if new > old => *slot = entry,
            _ => {}
        }
    }

    fn bivalued_points(&self, rows: &[u32]) -> Vec<PointId> {
        (0..self.domain_size as PointId)
            .filter(|&x| {
                let first = self.label(rows[0], x);
                rows.iter().any(|&r| self.label(r, x) != first)
            })
            .collect()
    }

    /// Enumerate sorted tuples over `candidates` (shattering and the game
    /// value are invariant under tuple reordering) and maximize the
    /// continuation value; early-outs at `effective`.
    #[allow(clippy::too_many_arguments)]
    fn vcl_tuples(
        &self,
        rows: &[u32],
        candidates: &[PointId],
        start: usize,
        tuple: &mut Vec<PointId>,
        arity: u32,
        effective: i32,
        budget: &SearchBudget,
        nodes: &mut u64,
    ) -> Result<i32> {
        if tuple.len() == arity as usize {
            *nodes += 1;
            if *nodes > budget.max_nodes {
                return Err(Error::Budget(format!(
                    "VCL search exceeded its budget of {} tuple evaluations",
                    budget.max_nodes
                )));
            }
            let Some(buckets) = self.shatter_buckets(rows, tuple) else {
                return Ok(0);
            };
            let mut value = i32::MAX;
            for bucket in &buckets {
                let (v, _) = self.vcl(bucket, arity + 1, effective - 1, budget, nodes)?;
                value = value.min(v);
                if 1 + value <= 0 {
                    break;
                }
            }
            return Ok(1 + value);
        }
        let mut best = 0i32;
        let remaining_slots = arity as usize - tuple.len();
        for i in start..=candidates.len().saturating_sub(remaining_slots) {
            tuple.push(candidates[i]);
            let v = self.vcl_tuples(rows, candidates, i + 1, tuple, arity, effective, budget, nodes)?;
            tuple.pop();
            if v > best {
                best = v;
                if best == effective {
                    break;
                }
            }
        }
        Ok(best)
    }

    /// Partition rows by their pattern on `tuple`; `None` unless all
    /// `2^|tuple|` patterns are realized.
    fn shatter_buckets(&self, rows: &[u32], tuple: &[PointId]) -> Option<Vec<Vec<u32>>> {
        let arity = tuple.len();
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); 1usize << arity];
        for &r in rows {
            let mut pattern = 0usize;
            for (i, &p) in tuple.iter().enumerate() {
                pattern |= (self.label(r, p) as usize) << i;
            }
            buckets[pattern].push(r);
        }
        if buckets.iter().all(|b| !b.is_empty()) {
            Some(buckets)
        } else {
            None
        }
    }

    /// Witness construction for a depth-`d` VCL tree; callable only when
    /// `vcl(rows, level+1 …) ≥ remaining`.
    #[allow(clippy::too_many_arguments)]
    fn build_vcl(
        &self,
        rows: &[u32],
        remaining: usize,
        level: usize,
        node: usize,
        budget: &SearchBudget,
        nodes: &mut u64,
        levels: &mut [Vec<Vec<PointId>>],
    ) -> Result<()> {
        if remaining == 0 {
            return Ok(());
        }
        let arity = level + 1;
        let need = remaining as i32 - 1;
        let candidates = self.bivalued_points(rows);
        let mut tuple = Vec::with_capacity(arity);
        if self.try_build_tuple(
            rows, &candidates, 0, &mut tuple, arity, remaining, level, node, budget, nodes, levels,
        )? {
            return Ok(());
        }
        unreachable!("caller certified a depth-{remaining} VCL subtree exists (need {need})");
    }

    #[allow(clippy::too_many_arguments)]
    fn try_build_tuple(
        &self,
        rows: &[u32],
        candidates: &[PointId],
        start: usize,
        tuple: &mut Vec<PointId>,
        arity: usize,
        remaining: usize,
        level: usize,
        node: usize,
        budget: &SearchBudget,
        nodes: &mut u64,
        levels: &mut [Vec<Vec<PointId>>],
    ) -> Result<bool> {
        if tuple.len() == arity {
            let Some(buckets) = self.shatter_buckets(rows, tuple) else {
                return Ok(false);
            };
            let need = remaining as i32 - 1;
            for bucket in &buckets {
                let (v, _) = self.vcl(bucket, arity as u32 + 1, need, budget, nodes)?;
                if v < need {
                    return Ok(false);
                }
            }
            levels[level][node] = tuple.clone();
            for (pattern, bucket) in buckets.iter().enumerate() {
                let child = (node << arity) | pattern;
                self.build_vcl(bucket, remaining - 1, level + 1, child, budget, nodes, levels)?;
            }
            return Ok(true);
        }
        let remaining_slots = arity - tuple.len();
        for i in start..=candidates.len().saturating_sub(remaining_slots) {
            tuple.push(candidates[i]);
            let ok = self.try_build_tuple(
                rows, candidates, i + 1, tuple, arity, remaining, level, node, budget, nodes,
                levels,
            )?;
            tuple.pop();
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
