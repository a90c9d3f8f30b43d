//! The VCL game strategy, the pattern-avoidance loop, and the
//! one-inclusion-graph predictor.
//!
//! **The VCL game.**  Rounds τ = 1, 2, …: the adversary plays a τ-point
//! tuple `ξ_τ`, the strategy answers a pattern `η_τ ∈ {0,1}^τ`, and the
//! strategy wins in round τ when the committed pairs make the restricted
//! class empty — the chosen pattern was not realizable given the history.
//! The game value from next-arity τ (the number of rounds an adversary can
//! still survive) obeys the same minimax recursion as the VCL tree search,
//! and [`vcl_move`] plays the value-minimizing pattern, lexicographically
//! smallest on ties.  Whenever the position is live, some answer strictly
//! decreases the value, so the strategy wins within (initial value) + 1
//! rounds against any adversary.
//!
//! **Pattern avoidance.**  [`PatternAvoider`] runs the game against the
//! data stream itself: at time `t ≥ τ` it asks the strategy for the
//! forbidden pattern of the window `(x_{t−τ+1}, …, x_t)`, and when the
//! realized labels *equal* that pattern it commits the window and moves to
//! arity τ+1.  Each commit strictly decreases the game value, so on any
//! stream the number of commits is at most the initial value; once the
//! value hits 0 every chosen pattern is unrealizable by the surviving
//! hypotheses and a class-consistent stream never triggers another commit.
//! The function [`forbidden`] — the avoider's exported pattern function —
//! is what the one-inclusion predictor consumes as its tuple oracle `g`.
//!
//! **One-inclusion prediction.**  [`build_pattern_class`] materializes
//! `F = {f ∈ {0,1}^n : g(x_{i₁},…,x_{i_t}) ≠ f|tuple for every
//! pairwise-distinct ordered index tuple}`; since `g` rules out one pattern
//! on every tuple, no `t` coordinates of `F` are shattered and
//! `vc(F) < t`.  [`OneInclusionGraph`] connects patterns at Hamming
//! distance 1 and [`orient`] minimizes the maximum out-degree by binary
//! search with a max-flow feasibility check, which lands ≤ vc(F) by
//! Haussler's density argument (verified at runtime, not assumed).
//! [`one_inclusion_predict`] answers a leave-one-out query with the edge
//! head's bit, so the mistakes of a true vertex are exactly its out-edges:
//! fewer than `t` of the `n` coordinates can be answered wrongly.

use std::collections::HashMap;

use crate::bits::BitRow;
use crate::classes::{ConceptClass, Constraint, PatternSet, PointId};
use crate::trees::{SearchBudget, VclOracle};
use crate::{Error, Result};

/// Enumeration limits for [`build_pattern_class`]: a hard cap on the number
/// of coordinates and a node budget for the pruned pattern search.
#[derive(Clone, Copy, Debug)]
pub struct EnumerationBudget {
    /// Maximum coordinate count (the pattern space is `2^n`).
    pub max_points: usize,
    /// Maximum search nodes (partial assignments visited).
    pub max_nodes: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_points: 20, max_nodes: 20_000_000 }
    }
}

/// A position of the VCL game: the committed `(tuple, pattern)` pairs, in
/// round order (round `s` commits an `s`-point tuple).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VclPosition {
    committed: Vec<(Vec<PointId>, BitRow)>,
}

impl VclPosition {
    /// The opening position (round 1, nothing committed).
    #[must_use]
    pub fn root() -> Self {
        VclPosition { committed: Vec::new() }
    }

    /// Arity of the next tuple to be played (= current round τ).
    #[must_use]
    pub fn next_arity(&self) -> usize {
        self.committed.len() + 1
    }

    /// Committed `(tuple, pattern)` pairs in round order.
    #[must_use]
    pub fn committed(&self) -> &[(Vec<PointId>, BitRow)] {
        &self.committed
    }

    /// The committed pairs flattened to point-level constraints (pattern
    /// bit `i` labels tuple point `i`).  A point recurring with conflicting
    /// labels simply makes every hypothesis inconsistent — the restriction
    /// is empty and the game is won.
    #[must_use]
    pub fn constraints(&self) -> Vec<Constraint> {
        let mut out = Vec::new();
        for (tuple, pattern) in &self.committed {
            for (i, &p) in tuple.iter().enumerate() {
                out.push(Constraint::new(p, pattern.get(i)));
            }
        }
        out
    }

    /// The position after committing one more round.
    pub fn extend(&self, tuple: Vec<PointId>, pattern: BitRow) -> Result<VclPosition> {
        if tuple.len() != self.next_arity() {
            return Err(Error::Config(format!(
                "round {} expects a {}-point tuple, got {}",
                self.next_arity(),
                self.next_arity(),
                tuple.len()
            )));
        }
        if pattern.len() != tuple.len() {
            return Err(Error::Config(format!(
                "pattern length {} does not match tuple length {}",
                pattern.len(),
                tuple.len()
            )));
        }
        let mut committed = self.committed.clone();
        committed.push((tuple, pattern));
        Ok(VclPosition { committed })
    }
}

/// Hypothesis rows surviving the position's constraints, as row indices.
fn surviving_rows(oracle: &VclOracle<'_>, position: &VclPosition) -> Vec<u32> {
    let mut rows = oracle.all_rows();
    for constraint in position.constraints() {
        rows.retain(|&r| oracle.label(r, constraint.point) == constraint.label);
    }
    rows
}

/// Core of the strategy: the value-minimizing pattern for `tuple` at
/// `position`, lexicographically smallest among minimizers.  An empty
/// restriction (game already won) canonically answers all-zeros, keeping
/// the pattern function total.
fn minimizing_pattern(
    class: &ConceptClass,
    position: &VclPosition,
    tuple: &[PointId],
    budget: &SearchBudget,
) -> Result<BitRow> {
    MoveOracle::new(class, position, *budget)?.pattern(tuple)
}

/// Reusable handle on the strategy's pattern function at a fixed position:
/// the surviving rows and their memo id are computed once, so repeated
/// tuple queries cost one small-key memo probe each.  The one-inclusion
/// predictor tabulates thousands of tuples per avoider, where the one-shot
/// [`forbidden`] entry point would redo that setup every call.
pub(crate) struct MoveOracle<'a> {
    class: &'a ConceptClass,
    oracle: VclOracle<'a>,
    rows: Vec<u32>,
    set_id: u32,
    budget: SearchBudget,
}

impl<'a> MoveOracle<'a> {
    /// Handle for the avoider's current position and budget.
    pub(crate) fn for_avoider(avoider: &PatternAvoider<'a>) -> Result<MoveOracle<'a>> {
        Self::new(avoider.class, &avoider.position, avoider.budget)
    }

    fn new(
        class: &'a ConceptClass,
        position: &VclPosition,
        budget: SearchBudget,
    ) -> Result<MoveOracle<'a>> {
        let oracle = VclOracle::new(class)?;
        let rows = surviving_rows(&oracle, position);
        let set_id =
            if rows.is_empty() { 0 } else { intern_survivors(class, oracle.key(&rows)) };
        Ok(MoveOracle { class, oracle, rows, set_id, budget })
    }

    /// The value-minimizing pattern for `tuple`, lexicographically smallest
    /// among minimizers; all-zeros when the restriction is already empty.
    pub(crate) fn pattern(&self, tuple: &[PointId]) -> Result<BitRow> {
        let arity = tuple.len();
        if arity == 0 || arity >= 64 {
            return Err(Error::Config(format!(
                "tuple arity {arity} out of supported range 1..64"
            )));
        }
        for &p in tuple {
            self.class.domain().check(p)?;
        }
        if self.rows.is_empty() {
            return Ok(BitRow::zeros(arity));
        }
        // The answer is a pure function of the surviving row set and the
        // tuple, so consult the class-wide memo: sibling avoiders and
        // repeated experiment seeds revisit the same restrictions
        // constantly.
        {
            let memo = self.class.cache().pattern_moves.lock().unwrap();
            if let Some(hit) = memo.get(&self.set_id).and_then(|m| m.get(tuple)) {
                return Ok(hit.clone());
            }
        }
        let next_arity = u32::try_from(arity).unwrap() + 1;
        let mut best: Option<(i64, BitRow)> = None;
        for bits in 0..(1u64 << arity) {
            let pattern = BitRow::from_fn(arity, |i| (bits >> i) & 1 == 1);
            let survivors: Vec<u32> = self
                .rows
                .iter()
                .copied()
                .filter(|&r| {
                    tuple
                        .iter()
                        .enumerate()
                        .all(|(i, &p)| self.oracle.label(r, p) == pattern.get(i))
                })
                .collect();
            let value = self.oracle.value(&survivors, next_arity, &self.budget)?;
            let candidate = (value, pattern);
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
        let pattern = best.expect("at least one pattern was evaluated").1;
        self.class
            .cache()
            .pattern_moves
            .lock()
            .unwrap()
            .entry(self.set_id)
            .or_default()
            .insert(tuple.to_vec(), pattern.clone());
        Ok(pattern)
    }
}

/// Dense id of a surviving-row set in the class-wide intern table.
fn intern_survivors(class: &ConceptClass, key: Vec<u32>) -> u32 {
    let mut table = class.cache().pattern_sets.lock().unwrap();
    let next = u32::try_from(table.len()).expect("intern table outgrew u32");
    *table.entry(key).or_insert(next)
}

/// The VCL game strategy's answer to the adversary tuple `x_tuple`: the
/// pattern minimizing the game value of the extended position (ties to the
/// lexicographically smallest pattern).  An unrealizable pattern — value
/// −1 — is the winning move and is preferred whenever one exists.  The
/// round is inferred from the tuple's own arity (continuations use arity
/// τ+1), so the position only contributes its constraints.  Calling on a
/// position whose restriction is already empty is a state error.
pub fn vcl_move(
    class: &ConceptClass,
    position: &VclPosition,
    x_tuple: &[PointId],
    budget: &SearchBudget,
) -> Result<BitRow> {
    let oracle = VclOracle::new(class)?;
    if surviving_rows(&oracle, position).is_empty() {
        return Err(Error::State(
            "vcl_move on a won position (restricted class is empty)".into(),
        ));
    }
    drop(oracle);
    minimizing_pattern(class, position, x_tuple, budget)
}

/// The pattern-avoidance learner: runs the VCL game against the data
/// stream, committing the current window exactly when the realized labels
/// match the strategy's forbidden pattern.
#[derive(Clone, Debug)]
pub struct PatternAvoider<'a> {
    class: &'a ConceptClass,
    position: VclPosition,
    history: Vec<(PointId, u8)>,
    budget: SearchBudget,
}

impl<'a> PatternAvoider<'a> {
    /// Fresh avoider at arity 1 with the default search budget.
    #[must_use]
    pub fn new(class: &'a ConceptClass) -> Self {
        Self::with_budget(class, SearchBudget::default())
    }

    /// Fresh avoider with an explicit game-value search budget.
    #[must_use]
    pub fn with_budget(class: &'a ConceptClass, budget: SearchBudget) -> Self {
        PatternAvoider { class, position: VclPosition::root(), history: Vec::new(), budget }
    }

    /// Current pattern arity τ.
    #[must_use]
    pub fn arity(&self) -> usize {
        self.position.next_arity()
    }

    /// Committed `(window, pattern)` pairs in commit order.
    #[must_use]
    pub fn committed(&self) -> &[(Vec<PointId>, BitRow)] {
        self.position.committed()
    }

    /// Number of stream pairs observed.
    #[must_use]
    pub fn observed(&self) -> usize {
        self.history.len()
    }

    /// The underlying game position.
    #[must_use]
    pub fn position(&self) -> &VclPosition {
        &self.position
    }

    /// The class the avoider plays against.
    #[must_use]
    pub fn class(&self) -> &'a ConceptClass {
        self.class
    }
}

/// Advance the avoider on one stream pair.  While fewer than τ points have
/// been seen nothing can match; otherwise the window of the last τ points
/// is tested against the forbidden pattern and committed on equality
/// (moving to arity τ+1).  Streams inconsistent with the class are
/// permitted — at worst they empty the restriction, after which the
/// pattern function stays total (all-zeros) and no error is raised.
pub fn avoider_step<'a>(
    avoider: &PatternAvoider<'a>,
    x: PointId,
    y: u8,
) -> Result<PatternAvoider<'a>> {
    avoider.class.domain().check(x)?;
    if y > 1 {
        return Err(Error::Config(format!("label must be 0 or 1, got {y}")));
    }
    let mut next = avoider.clone();
    next.history.push((x, y));
    let tau = next.position.next_arity();
    if next.history.len() < tau {
        return Ok(next);
    }
    let window: Vec<(PointId, u8)> = next.history[next.history.len() - tau..].to_vec();
    let tuple: Vec<PointId> = window.iter().map(|&(p, _)| p).collect();
    let labels = BitRow::from_fn(tau, |i| window[i].1 == 1);
    let pattern = minimizing_pattern(avoider.class, &next.position, &tuple, &next.budget)?;
    if pattern == labels {
        next.position = next.position.extend(tuple, pattern)?;
    }
    Ok(next)
}

/// The avoider's pattern function on a window `z` of the current arity: a
/// pure function of the committed prefix and `z`.  Length mismatches are
/// usage errors.
pub fn forbidden(avoider: &PatternAvoider<'_>, z: &[PointId]) -> Result<BitRow> {
    if z.len() != avoider.arity() {
        return Err(Error::Config(format!(
            "forbidden() expects a window of the current arity {}, got {}",
            avoider.arity(),
            z.len()
        )));
    }
    minimizing_pattern(avoider.class, &avoider.position, z, &avoider.budget)
}

/// Materialize the pattern class of an arity-`t` forbidden-pattern function
/// over `points`: all length-`n` patterns `f` such that for every ordered
/// tuple of pairwise-distinct indices `(i₁,…,i_t)`,
/// `g(points[i₁],…,points[i_t]) ≠ (f_{i₁},…,f_{i_t})`.
///
/// The search assigns coordinates left to right and checks each ordered
/// tuple as soon as its last coordinate is assigned, so subtrees violating
/// any constraint are pruned immediately; `g` is consulted once per ordered
/// index tuple and cached.  Budget overruns (too many coordinates, or node
/// budget exhausted) are explicit errors.
pub fn build_pattern_class<G>(
    points: &[PointId],
    arity: usize,
    mut g: G,
    budget: &EnumerationBudget,
) -> Result<PatternSet>
where
    G: FnMut(&[PointId]) -> Result<BitRow>,
{
    let n = points.len();
    if n > budget.max_points {
        return Err(Error::Budget(format!(
            "pattern class over {n} coordinates exceeds the limit of {}",
            budget.max_points
        )));
    }
    if arity == 0 {
        return Err(Error::Config("forbidden-pattern arity must be at least 1".into()));
    }
    if n < arity {
        // No tuple fits, so nothing is forbidden: every pattern survives.
        if n >= 24 {
            return Err(Error::Budget(format!(
                "unconstrained pattern space 2^{n} is too large to materialize"
            )));
        }
        let patterns = (0..(1u64 << n))
            .map(|bits| BitRow::from_fn(n, |i| (bits >> i) & 1 == 1))
            .collect();
        let mut set = PatternSet { arity: n, patterns };
        set.patterns.sort();
        return Ok(set);
    }
    let mut cache: HashMap<Vec<usize>, BitRow> = HashMap::new();
    let mut assignment = vec![0u8; n];
    let mut out = Vec::new();
    let mut nodes = 0u64;
    search_patterns(
        points,
        arity,
        &mut g,
        budget,
        &mut cache,
        &mut assignment,
        0,
        &mut nodes,
        &mut out,
    )?;
    // Lexicographic assignment order (0 before 1, leftmost coordinate most
    // significant) matches the BitRow ordering, so the output is sorted.
    Ok(PatternSet { arity: n, patterns: out })
}

#[allow(clippy::too_many_arguments)]
fn search_patterns<G>(
    points: &[PointId],
    arity: usize,
    g: &mut G,
    budget: &EnumerationBudget,
    cache: &mut HashMap<Vec<usize>, BitRow>,
    assignment: &mut [u8],
    depth: usize,
    nodes: &mut u64,
    out: &mut Vec<BitRow>,
) -> Result<()>
where
    G: FnMut(&[PointId]) -> Result<BitRow>,
{
    let n = points.len();
    if depth == n {
        out.push(BitRow::from_bits(assignment));
        return Ok(());
    }
    for bit in 0..2u8 {
        *nodes += 1;
        if *nodes > budget.max_nodes {
            return Err(Error::Budget(format!(
                "pattern-class search exceeded its budget of {} nodes",
                budget.max_nodes
            )));
        }
        assignment[depth] = bit;
        if tuples_clear(points, arity, g, cache, assignment, depth)? {
            search_patterns(points, arity, g, budget, cache, assignment, depth + 1, nodes, out)?;
        }
    }
    Ok(())
}

/// Check every ordered pairwise-distinct index tuple drawn from
/// `0..=last` that contains `last`: the partial assignment survives iff
/// none equals its forbidden pattern.  Tuples not containing `last` were
/// checked when their own last coordinate was assigned.
fn tuples_clear<G>(
    points: &[PointId],
    arity: usize,
    g: &mut G,
    cache: &mut HashMap<Vec<usize>, BitRow>,
    assignment: &[u8],
    last: usize,
) -> Result<bool>
where
    G: FnMut(&[PointId]) -> Result<BitRow>,
{
    if last + 1 < arity {
        return Ok(true);
    }
    let mut indices = vec![0usize; arity];
    tuples_clear_rec(points, g, cache, assignment, last, &mut indices, 0, false)
}

#[allow(clippy::too_many_arguments)]
fn tuples_clear_rec<G>(
    points: &[PointId],
    g: &mut G,
    cache: &mut HashMap<Vec<usize>, BitRow>,
    assignment: &[u8],
    last: usize,
    indices: &mut Vec<usize>,
    depth: usize,
    uses_last: bool,
) -> Result<bool>
where
    G: FnMut(&[PointId]) -> Result<BitRow>,
{
    let arity = indices.len();
    if depth == arity {
        if !uses_last {
            return Ok(true);
        }
        let key: Vec<usize> = indices.clone();
        let pattern = if let Some(p) = cache.get(&key) {
            p.clone()
        } else {
            let tuple: Vec<PointId> = indices.iter().map(|&i| points[i]).collect();
            let p = g(&tuple)?;
            if p.len() != arity {
                return Err(Error::Config(format!(
                    "forbidden-pattern function returned length {}, expected {arity}",
                    p.len()
                )));
            }
            cache.insert(key, p.clone());
            p
        };
        let realized = (0..arity).all(|slot| assignment[indices[slot]] == pattern.get(slot));
        return Ok(!realized);
    }
    let remaining = arity - depth - 1;
    for i in 0..=last {
        if indices[..depth].contains(&i) {
            continue;
        }
        // The tuple must contain `last`; prune branches that can no longer
        // include it.
        let will_use_last = uses_last || i == last;
        if !will_use_last && remaining == 0 {
            continue;
        }
        indices[depth] = i;
        if !tuples_clear_rec(points, g, cache, assignment, last, indices, depth + 1, will_use_last)?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An undirected edge of the one-inclusion graph: two vertex indices whose
/// patterns differ at exactly `coord`; `head` points at the vertex whose
/// bit the predictor answers.
#[derive(Clone, Copy, Debug)]
pub struct Edge {
    /// Lower vertex index.
    pub a: usize,
    /// Higher vertex index.
    pub b: usize,
    /// The single differing coordinate.
    pub coord: usize,
    /// Current head (equals `a` or `b`).
    pub head: usize,
}

/// The one-inclusion graph of a pattern set: vertices are the patterns,
/// edges join patterns at Hamming distance 1, and each edge carries an
/// orientation (its `head`).  Freshly built graphs orient every edge
/// toward the higher-indexed vertex; [`orient`] rebalances.
#[derive(Clone, Debug)]
pub struct OneInclusionGraph {
    vertices: PatternSet,
    edges: Vec<Edge>,
    edge_of: HashMap<(usize, usize), usize>,
}

impl OneInclusionGraph {
    /// Build the Hamming-1 graph of `vertices`.
    pub fn new(vertices: PatternSet) -> Result<Self> {
        if vertices.patterns.is_empty() {
            return Err(Error::Config("one-inclusion graph needs a nonempty vertex set".into()));
        }
        let n = vertices.arity;
        let index: HashMap<&BitRow, usize> =
            vertices.patterns.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut edges = Vec::new();
        let mut edge_of = HashMap::new();
        for (a, pattern) in vertices.patterns.iter().enumerate() {
            for coord in 0..n {
                let neighbor = pattern.with_flipped(coord);
                if let Some(&b) = index.get(&neighbor) {
                    if a < b {
                        edge_of.insert((a, b), edges.len());
                        edges.push(Edge { a, b, coord, head: b });
                    }
                }
            }
        }
        Ok(OneInclusionGraph { vertices, edges, edge_of })
    }

    /// The vertex patterns.
    #[must_use]
    pub fn vertices(&self) -> &PatternSet {
        &self.vertices
    }

    /// The edges with their current orientation.
    #[must_use]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Maximum out-degree under the current orientation (the tail of an
    /// edge is the endpoint that is not its head).
    #[must_use]
    pub fn max_out_degree(&self) -> usize {
        let mut out = vec![0usize; self.vertices.patterns.len()];
        for e in &self.edges {
            let tail = if e.head == e.a { e.b } else { e.a };
            out[tail] += 1;
        }
        out.into_iter().max().unwrap_or(0)
    }
}

/// Reorient the graph to minimize the maximum out-degree: binary search on
/// the bound `B`, with feasibility decided by max-flow (each edge must send
/// one unit to the endpoint chosen as its tail; vertices accept at most
/// `B`).  The optimum is at most the VC dimension of the vertex set — the
/// one-inclusion density bound — which is asserted.
#[must_use]
pub fn orient(graph: &OneInclusionGraph) -> OneInclusionGraph {
    let mut out = graph.clone();
    if out.edges.is_empty() {
        return out;
    }
    let mut degree = vec![0usize; out.vertices.patterns.len()];
    for e in &out.edges {
        degree[e.a] += 1;
        degree[e.b] += 1;
    }
    let mut lo = 1usize;
    let mut hi = *degree.iter().max().unwrap();
    let mut best: Option<Vec<usize>> = None;
    while lo <= hi {
        let mid = (lo + hi) / 2;
        match orientation_with_bound(&out, mid) {
            Some(tails) => {
                best = Some(tails);
                if mid == 1 {
                    break;
                }
                hi = mid - 1;
            }
            None => lo = mid + 1,
        }
    }
    let tails = best.expect("max degree bound is always feasible");
    for (e, tail) in out.edges.iter_mut().zip(tails) {
        e.head = if tail == e.a { e.b } else { e.a };
    }
    debug_assert!(
        {
            let vc = out.vertices.vc_dimension(32).lower_bound();
            (out.max_out_degree() as i64) <= vc.max(0)
        },
        "orientation exceeded the VC density bound"
    );
    out
}

/// Feasibility check: is there an orientation with max out-degree ≤ bound?
/// Returns the tail vertex per edge if so.  Network: source → edge nodes
/// (capacity 1) → their two endpoints (capacity 1) → sink (capacity
/// `bound`); feasible iff the max flow saturates all edges.
fn orientation_with_bound(graph: &OneInclusionGraph, bound: usize) -> Option<Vec<usize>> {
    let e = graph.edges.len();
    let v = graph.vertices.patterns.len();
    // Node layout: 0 = source, 1..=e edge nodes, e+1..=e+v vertex nodes,
    // e+v+1 = sink.
    let source = 0usize;
    let sink = e + v + 1;
    let mut net = FlowNetwork::new(e + v + 2);
    for (i, edge) in graph.edges.iter().enumerate() {
        net.add_edge(source, 1 + i, 1);
        net.add_edge(1 + i, 1 + e + edge.a, 1);
        net.add_edge(1 + i, 1 + e + edge.b, 1);
    }
    for vertex in 0..v {
        net.add_edge(1 + e + vertex, sink, bound as i64);
    }
    if net.max_flow(source, sink) != e as i64 {
        return None;
    }
    let tails = graph
        .edges
        .iter()
        .enumerate()
        .map(|(i, edge)| {
            if net.carries_flow(1 + i, 1 + e + edge.a) {
                edge.a
            } else {
                debug_assert!(net.carries_flow(1 + i, 1 + e + edge.b));
                edge.b
            }
        })
        .collect();
    Some(tails)
}

/// Dinic max-flow on a small integer network.
struct FlowNetwork {
    // Per node: list of arc indices into `arcs`.
    adjacency: Vec<Vec<usize>>,
    // Arcs stored with their reverse pair adjacent (i ^ 1).
    arcs: Vec<Arc>,
}

struct Arc {
    to: usize,
    capacity: i64,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork { adjacency: vec![Vec::new(); nodes], arcs: Vec::new() }
    }

    fn add_edge(&mut self, from: usize, to: usize, capacity: i64) {
        self.adjacency[from].push(self.arcs.len());
        self.arcs.push(Arc { to, capacity });
        self.adjacency[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, capacity: 0 });
    }

    /// Whether the forward arc `from → to` carries at least one unit (its
    /// reverse arc gained capacity).
    fn carries_flow(&self, from: usize, to: usize) -> bool {
        self.adjacency[from].iter().any(|&i| {
            i % 2 == 0 && self.arcs[i].to == to && self.arcs[i ^ 1].capacity > 0
        })
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> i64 {
        let mut total = 0i64;
        loop {
            let level = self.bfs_levels(source, sink);
            if level[sink].is_none() {
                return total;
            }
            let mut iter = vec![0usize; self.adjacency.len()];
            loop {
                let pushed = self.dfs_push(source, sink, i64::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn bfs_levels(&self, source: usize, sink: usize) -> Vec<Option<u32>> {
        let mut level = vec![None; self.adjacency.len()];
        level[source] = Some(0);
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            for &i in &self.adjacency[u] {
                let arc = &self.arcs[i];
                if arc.capacity > 0 && level[arc.to].is_none() {
                    level[arc.to] = Some(level[u].unwrap() + 1);
                    queue.push_back(arc.to);
                }
            }
        }
        level
    }

    fn dfs_push(
        &mut self,
        u: usize,
        sink: usize,
        limit: i64,
        level: &[Option<u32>],
        iter: &mut [usize],
    ) -> i64 {
        if u == sink {
            return limit;
        }
        while iter[u] < self.adjacency[u].len() {
            let i = self.adjacency[u][iter[u]];
            let (to, capacity) = (self.arcs[i].to, self.arcs[i].capacity);
            let admissible = capacity > 0
                && matches!((level[u], level[to]), (Some(lu), Some(lt)) if lt == lu + 1);
            if admissible {
                let pushed = self.dfs_push(to, sink, limit.min(capacity), level, iter);
                if pushed > 0 {
                    self.arcs[i].capacity -= pushed;
                    self.arcs[i ^ 1].capacity += pushed;
                    return pushed;
                }
            }
            iter[u] += 1;
        }
        0
    }
}

/// Leave-one-out prediction: restrict the vertex set to patterns matching
/// the `n−1` labels; a unique completion answers its query bit, two
/// completions form an edge and the head's bit is answered, zero
/// completions fall back to 0 (the input was not from the pattern class).
pub fn one_inclusion_predict(
    graph: &OneInclusionGraph,
    labeled: &[(usize, u8)],
    query: usize,
) -> Result<u8> {
    let n = graph.vertices.arity;
    let mut seen = vec![false; n];
    if query >= n {
        return Err(Error::Config(format!("query index {query} out of range 0..{n}")));
    }
    seen[query] = true;
    for &(i, label) in labeled {
        if i >= n {
            return Err(Error::Config(format!("labeled index {i} out of range 0..{n}")));
        }
        if label > 1 {
            return Err(Error::Config(format!("label must be 0 or 1, got {label}")));
        }
        if seen[i] {
            return Err(Error::Config(format!(
                "coordinate {i} appears twice in the leave-one-out input"
            )));
        }
        seen[i] = true;
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::Config(
            "labeled indices plus query must cover every coordinate".into(),
        ));
    }
    let matches: Vec<usize> = graph
        .vertices
        .patterns
        .iter()
        .enumerate()
        .filter(|(_, p)| labeled.iter().all(|&(i, label)| p.get(i) == label))
        .map(|(i, _)| i)
        .collect();
    match matches.as_slice() {
        [] => Ok(0),
        [unique] => Ok(graph.vertices.patterns[*unique].get(query)),
        [a, b] => {
            let key = (*a.min(b), *a.max(b));
            let edge = graph.edge_of.get(&key).map(|&i| &graph.edges[i]).unwrap_or_else(|| {
                unreachable!("two completions differ only at the query coordinate")
            });
            Ok(graph.vertices.patterns[edge.head].get(query))
        }
        _ => unreachable!("completions differ only at the query bit, so at most two exist"),
    }
}

/// Exact leave-one-out mistake fraction of the oriented graph on a true
/// pattern `f` (which must be a vertex): the fraction of coordinates `i`
/// where predicting from the other `n−1` bits of `f` misses `f_i`.  This
/// equals the symmetric-group average of the one-inclusion bound, and every
/// mistake is an out-edge of `f`, so the fraction is at most
/// `max_out_degree / n`.
pub fn leave_one_out_fraction(graph: &OneInclusionGraph, f: &BitRow) -> Result<f64> {
    let n = graph.vertices.arity;
    if f.len() != n {
        return Err(Error::Config(format!(
            "pattern length {} does not match coordinate count {n}",
            f.len()
        )));
    }
    if !graph.vertices.contains(f) {
        return Err(Error::Config("leave-one-out pattern must be a vertex".into()));
    }
    let mut mistakes = 0usize;
    for i in 0..n {
        let labeled: Vec<(usize, u8)> =
            (0..n).filter(|&j| j != i).map(|j| (j, f.get(j))).collect();
        if one_inclusion_predict(graph, &labeled, i)? != f.get(i) {
            mistakes += 1;
        }
    }
    Ok(mistakes as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::ClassSpec;

    fn class(spec: ClassSpec) -> ConceptClass {
        ConceptClass::generate(&spec).unwrap()
    }

    fn thresholds(m: u32) -> ConceptClass {
        class(ClassSpec::Thresholds { m })
    }

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    fn pattern(bits: &str) -> BitRow {
        BitRow::parse(bits).unwrap()
    }

    #[test]
    fn vcl_move_on_singleton_wins_immediately() {
        let single = class(ClassSpec::Explicit { rows: vec!["011".into()] });
        let root = VclPosition::root();
        // h(0) = 0: pattern 1 is unrealizable (value −1) and wins.
        assert_eq!(vcl_move(&single, &root, &[0], &budget()).unwrap(), pattern("1"));
        // h(1) = 1: pattern 0 wins.
        assert_eq!(vcl_move(&single, &root, &[1], &budget()).unwrap(), pattern("0"));
    }

    #[test]
    fn vcl_move_breaks_ties_to_lexicographic_smallest() {
        let full = class(ClassSpec::FullClass { n: 2 });
        let root = VclPosition::root();
        // Either label survives with equal value; 0 is returned.
        assert_eq!(vcl_move(&full, &root, &[0], &budget()).unwrap(), pattern("0"));
    }

    #[test]
    fn vcl_move_finds_the_unrealizable_threshold_pattern() {
        // Realizable patterns of thresholds {1..4} on points (2,3) — ids
        // (1,2) — are {11, 01, 00}: only "1 then 0" is never realized (a
        // threshold passing 2 also passes 3).  At the root it is the unique
        // winning pattern, so no tie-break is involved.
        let t = thresholds(4);
        let result = vcl_move(&t, &VclPosition::root(), &[1, 2], &budget());
        assert_eq!(result.unwrap(), pattern("10"));
    }

    #[test]
    fn vcl_move_rejects_won_positions_and_bad_tuples() {
        let single = class(ClassSpec::Explicit { rows: vec!["01".into()] });
        let won = VclPosition::root().extend(vec![0], pattern("1")).unwrap();
        assert!(matches!(
            vcl_move(&single, &won, &[0, 1], &budget()).unwrap_err(),
            Error::State(_)
        ));
        let root = VclPosition::root();
        assert!(matches!(
            vcl_move(&single, &root, &[], &budget()).unwrap_err(),
            Error::Config(_)
        ));
        assert!(vcl_move(&single, &root, &[9], &budget()).is_err());
    }

    #[test]
    fn avoider_on_singleton_class_never_commits() {
        // The arity-1 forbidden pattern is 1 − h(x) everywhere, which a
        // consistent stream never realizes.
        let single = class(ClassSpec::Explicit { rows: vec!["010".into()] });
        let mut avoider = PatternAvoider::new(&single);
        for &(x, y) in &[(0u32, 0u8), (1, 1), (2, 0), (1, 1), (0, 0)] {
            assert_eq!(forbidden(&avoider, &[x]).unwrap(), pattern(if y == 1 { "0" } else { "1" }));
            avoider = avoider_step(&avoider, x, y).unwrap();
        }
        assert_eq!(avoider.committed().len(), 0);
        assert_eq!(avoider.arity(), 1);
        assert_eq!(avoider.observed(), 5);
    }

    #[test]
    fn avoider_commits_are_bounded_by_the_initial_game_value() {
        // Exhaust every realizable label stream of length 5 over a fixed
        // point sequence on the full 2-point class: commits never exceed
        // the opening game value, and committed patterns always matched the
        // realized window.
        let full = class(ClassSpec::FullClass { n: 2 });
        let oracle_value = {
            let oracle = VclOracle::new(&full).unwrap();
            let rows = oracle.all_rows();
            oracle.value(&rows, 1, &budget()).unwrap()
        };
        let points = [0u32, 1, 0, 1, 0];
        for h in full.rows().unwrap() {
            let mut avoider = PatternAvoider::new(&full);
            for &x in &points {
                avoider = avoider_step(&avoider, x, h.get(x as usize)).unwrap();
            }
            assert!(
                (avoider.committed().len() as i64) <= oracle_value,
                "commits {} exceed opening value {oracle_value}",
                avoider.committed().len()
            );
        }
    }

    #[test]
    fn avoider_goes_silent_at_game_value_zero() {
        // thresholds have VCL game value 1: after one commit the chosen
        // patterns are unrealizable and a consistent stream never matches.
        let t = thresholds(4);
        let target = t.rows().unwrap()[2].clone(); // 1{x ≥ 3}
        let stream: Vec<(PointId, u8)> = (0..12).map(|i| {
            let x = (i * 3 + 1) % 4;
            (x as u32, target.get(x))
        }).collect();
        let mut avoider = PatternAvoider::new(&t);
        for &(x, y) in &stream {
            avoider = avoider_step(&avoider, x, y).unwrap();
        }
        assert!(avoider.committed().len() <= 1, "VCL value 1 allows at most one commit");
        if avoider.committed().len() == 1 {
            // Silence: the arity-2 forbidden pattern is unrealizable given
            // the commitment, so replaying more consistent data commits
            // nothing further.
            let more = avoider_step(&avoider, 3, target.get(3)).unwrap();
            assert_eq!(more.committed().len(), 1);
        }
    }

    #[test]
    fn forbidden_rejects_wrong_window_length() {
        let t = thresholds(4);
        let avoider = PatternAvoider::new(&t);
        assert!(matches!(forbidden(&avoider, &[0, 1]).unwrap_err(), Error::Config(_)));
    }

    #[test]
    fn strict_value_decrease_for_every_adversary_tuple() {
        // Mirror of the online-game observation: at every live position,
        // for every tuple, some pattern strictly decreases the game value.
        let full = class(ClassSpec::FullClass { n: 3 });
        let oracle = VclOracle::new(&full).unwrap();
        let rows = oracle.all_rows();
        let opening = oracle.value(&rows, 1, &budget()).unwrap();
        assert_eq!(opening, 2);
        for x in 0..3u32 {
            let best = vcl_move(&full, &VclPosition::root(), &[x], &budget()).unwrap();
            let next = VclPosition::root().extend(vec![x], best).unwrap();
            let survivors: Vec<u32> = {
                let mut r = rows.clone();
                for c in next.constraints() {
                    r.retain(|&row| oracle.label(row, c.point) == c.label);
                }
                r
            };
            let value = oracle.value(&survivors, 2, &budget()).unwrap();
            assert!(value < opening, "move at {x} failed to decrease the value");
        }
    }

    #[test]
    fn pattern_class_of_forbid_one_everywhere_is_all_zeros() {
        let g = |tuple: &[PointId]| {
            debug_assert_eq!(tuple.len(), 1);
            Ok(pattern("1"))
        };
        let set = build_pattern_class(&[0, 1, 2, 3], 1, g, &EnumerationBudget::default()).unwrap();
        assert_eq!(set.patterns, vec![pattern("0000")]);
    }

    #[test]
    fn pattern_class_of_forbid_zero_one_is_the_two_constants() {
        // Forbidding (0,1) on every ordered pair kills every pattern that
        // contains a 0 anywhere and a 1 anywhere.
        let g = |_: &[PointId]| Ok(pattern("01"));
        let set = build_pattern_class(&[0, 1], 2, g, &EnumerationBudget::default()).unwrap();
        assert_eq!(set.patterns, vec![pattern("00"), pattern("11")]);
        let set4 = build_pattern_class(&[0, 1, 2, 3], 2, g, &EnumerationBudget::default()).unwrap();
        assert_eq!(set4.patterns, vec![pattern("0000"), pattern("1111")]);
    }

    #[test]
    fn pattern_class_vc_is_below_the_arity() {
        // An arity-t forbidden function rules out one pattern on every
        // t-tuple, so no t coordinates are shattered.
        let t = thresholds(6);
        let avoider = PatternAvoider::new(&t);
        let points = [0u32, 2, 3, 5];
        let g = |tuple: &[PointId]| forbidden(&avoider, tuple);
        let set = build_pattern_class(&points, 1, g, &EnumerationBudget::default()).unwrap();
        assert!(set.vc_dimension(4).lower_bound() < 1, "arity-1 class must have VC 0");
        assert!(!set.patterns.is_empty());
    }

    #[test]
    fn pattern_class_budget_errors_are_explicit() {
        let g = |_: &[PointId]| Ok(pattern("1"));
        let tiny = EnumerationBudget { max_points: 2, max_nodes: 1000 };
        assert!(matches!(
            build_pattern_class(&[0, 1, 2], 1, g, &tiny).unwrap_err(),
            Error::Budget(_)
        ));
        let starved = EnumerationBudget { max_points: 20, max_nodes: 3 };
        let g2 = |_: &[PointId]| Ok(pattern("1"));
        assert!(matches!(
            build_pattern_class(&[0, 1, 2, 3], 1, g2, &starved).unwrap_err(),
            Error::Budget(_)
        ));
    }

    fn pattern_set(rows: &[&str]) -> PatternSet {
        let mut patterns: Vec<BitRow> = rows.iter().map(|r| pattern(r)).collect();
        patterns.sort();
        PatternSet { arity: rows[0].len(), patterns }
    }

    #[test]
    fn path_graph_orients_to_out_degree_one() {
        let graph = OneInclusionGraph::new(pattern_set(&["00", "01", "11"])).unwrap();
        assert_eq!(graph.edges().len(), 2);
        let oriented = orient(&graph);
        assert_eq!(oriented.max_out_degree(), 1);
    }

    #[test]
    fn four_cycle_orients_to_out_degree_one() {
        let graph = OneInclusionGraph::new(pattern_set(&["00", "01", "10", "11"])).unwrap();
        assert_eq!(graph.edges().len(), 4);
        assert_eq!(orient(&graph).max_out_degree(), 1);
    }

    #[test]
    fn single_vertex_graph_has_no_edges() {
        let graph = OneInclusionGraph::new(pattern_set(&["0110"])).unwrap();
        assert!(graph.edges().is_empty());
        assert_eq!(orient(&graph).max_out_degree(), 0);
    }

    #[test]
    fn hypercube_orients_within_its_vc_dimension() {
        // The full 3-cube has VC dimension 3 and admits max out-degree ≤ 3
        // trivially; the minimizer should reach ⌈12 edges / 8 vertices⌉ = 2.
        let rows: Vec<String> =
            (0..8u32).map(|b| format!("{:03b}", b)).collect();
        let refs: Vec<&str> = rows.iter().map(|s| s.as_str()).collect();
        let graph = OneInclusionGraph::new(pattern_set(&refs)).unwrap();
        assert_eq!(graph.edges().len(), 12);
        assert_eq!(orient(&graph).max_out_degree(), 2);
    }

    #[test]
    fn unique_completion_is_forced() {
        let graph = orient(&OneInclusionGraph::new(pattern_set(&["00", "11"])).unwrap());
        assert_eq!(one_inclusion_predict(&graph, &[(0, 1)], 1).unwrap(), 1);
        assert_eq!(one_inclusion_predict(&graph, &[(0, 0)], 1).unwrap(), 0);
    }

    #[test]
    fn zero_completions_fall_back_to_zero() {
        let graph = orient(&OneInclusionGraph::new(pattern_set(&["11"])).unwrap());
        assert_eq!(one_inclusion_predict(&graph, &[(0, 0)], 1).unwrap(), 0);
    }

    #[test]
    fn edge_completions_follow_the_orientation() {
        let graph = orient(&OneInclusionGraph::new(pattern_set(&["00", "01", "11"])).unwrap());
        let prediction = one_inclusion_predict(&graph, &[(0, 0)], 1).unwrap();
        // Completions 00 and 01 form the edge; the prediction is the head's
        // bit 1, whichever way the optimum oriented it.
        let edge = graph.edges().iter().find(|e| e.coord == 1).unwrap();
        assert_eq!(prediction, graph.vertices().patterns[edge.head].get(1));
    }

    #[test]
    fn malformed_leave_one_out_inputs_are_rejected() {
        let graph = orient(&OneInclusionGraph::new(pattern_set(&["00", "11"])).unwrap());
        assert!(one_inclusion_predict(&graph, &[(0, 1), (0, 1)], 1).is_err());
        assert!(one_inclusion_predict(&graph, &[(5, 1)], 1).is_err());
        assert!(one_inclusion_predict(&graph, &[], 1).is_err());
    }

    #[test]
    fn leave_one_out_mistakes_match_out_degrees() {
        let graph = orient(&OneInclusionGraph::new(pattern_set(&["00", "01", "11", "10"])).unwrap());
        let n = graph.vertices().arity as f64;
        for (v, f) in graph.vertices().patterns.clone().iter().enumerate() {
            let fraction = leave_one_out_fraction(&graph, f).unwrap();
            let out_degree = graph
                .edges()
                .iter()
                .filter(|e| (if e.head == e.a { e.b } else { e.a }) == v)
                .count();
            assert_eq!(
                fraction,
                out_degree as f64 / n,
                "mistakes must be exactly the out-edges of the true vertex"
            );
        }
    }

    #[test]
    fn leave_one_out_bound_on_an_avoider_built_class() {
        // End-to-end miniature of the main permutation-bound invariant:
        // arity-1 avoider on thresholds, 5 coordinates, every true pattern
        // errs on fewer than 1/5 of coordinates... i.e. on none.
        let t = thresholds(6);
        let avoider = PatternAvoider::new(&t);
        let points = [0u32, 1, 2, 4, 5];
        let g = |tuple: &[PointId]| forbidden(&avoider, tuple);
        let set = build_pattern_class(&points, 1, g, &EnumerationBudget::default()).unwrap();
        let graph = orient(&OneInclusionGraph::new(set).unwrap());
        for f in graph.vertices().patterns.clone() {
            let fraction = leave_one_out_fraction(&graph, &f).unwrap();
            assert!(fraction < 1.0 / 5.0, "fraction {fraction} not below t/n = 0.2");
        }
    }

    #[test]
    fn prediction_is_covariant_on_forced_cases() {
        // Swap the two coordinates of F = {00, 11}: unique-completion
        // predictions permute with the input.
        let graph = orient(&OneInclusionGraph::new(pattern_set(&["01", "10"])).unwrap());
        let swapped = orient(&OneInclusionGraph::new(pattern_set(&["10", "01"])).unwrap());
        assert_eq!(
            one_inclusion_predict(&graph, &[(0, 0)], 1).unwrap(),
            one_inclusion_predict(&swapped, &[(1, 0)], 0).unwrap(),
        );
    }
}
