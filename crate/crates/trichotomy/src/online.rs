//! The online mistake-bound learner and the tree-playing adversary.
//!
//! The learner realizes the optimal strategy of the online game: it tracks
//! the position of the Gale-Stewart game whose value is the Littlestone
//! dimension, asks [`gale_stewart_move`] for the label `η` the label-player
//! would play on the queried point, and predicts the opposite,
//! `ŷ = 1 − η`.  When the prediction is wrong the true label *is* `η`, so
//! the pair is committed to the game position and the position value
//! strictly decreases.  Starting from value `d = LD(class)`, at most `d`
//! mistakes are possible on any stream consistent with the committed
//! constraints — the mistake bound equals the Littlestone dimension.
//!
//! Only mistakes change the state: a correctly predicted pair is either
//! forced by the committed constraints or leaves the game value untouched,
//! and the published loop ignores it.  Consistency is therefore judged
//! against the committed constraints (the game's history): an update whose
//! true label empties the committed restriction is a realizability error
//! and leaves the caller's state usable.  Streams realizable by the class
//! never trigger it, because the committed labels are true labels, so the
//! target hypothesis always survives the restriction.
//!
//! The adversary side replays a stored Littlestone tree: at each round it
//! offers the current node's point and answers with the opposite of the
//! learner's prediction, descending the branch it answered.  Against a
//! depth-`d` tree for the class, *every* learner makes exactly `d`
//! mistakes — including this module's, which is why the bound is tight.
//!
//! [`OnlineLearnerState`] is a value: advancing it returns a new state, and
//! independent learners may share the immutable class (and its analysis
//! cache) across threads.  [`OnlineRunner`] is the allocation-light
//! equivalent for harness-scale simulation; it tracks the surviving row
//! subset in place instead of re-deriving restricted classes, and its
//! predictions are bit-identical to the functional interface (tested).

use crate::classes::{ConceptClass, Constraint, PointId};
use crate::trees::{gale_stewart_move, GamePosition, LdOracle, LittlestoneTree};
use crate::{Error, Result};

/// State of the online learner: the mistake-game position (committed
/// `(ξ, η)` pairs plus the cached Littlestone value of the restriction) and
/// the mistake count.  The game round `τ` is `committed + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnlineLearnerState {
    position: GamePosition,
    mistakes: u64,
}

impl OnlineLearnerState {
    /// Fresh state on `class`; the opening game value is `LD(class)`.
    ///
    /// The empty class admits no learner (every prediction would be against
    /// a vacuous game) and is rejected as a configuration error.
    pub fn fresh(class: &ConceptClass) -> Result<Self> {
        if class.is_empty() {
            return Err(Error::Config("cannot run the online learner on an empty class".into()));
        }
        Ok(OnlineLearnerState { position: GamePosition::root(class)?, mistakes: 0 })
    }

    /// Game round `τ` (1 before any mistake, incremented on each mistake).
    #[must_use]
    pub fn round(&self) -> usize {
        self.position.constraints().len() + 1
    }

    /// Mistakes made so far.
    #[must_use]
    pub fn mistake_count(&self) -> u64 {
        self.mistakes
    }

    /// Committed `(point, label)` pairs, in mistake order; the labels are
    /// the true labels observed on mistakes.
    #[must_use]
    pub fn committed(&self) -> &[Constraint] {
        self.position.constraints()
    }

    /// Littlestone dimension of the class restricted to the committed
    /// constraints — the number of mistakes the rest of the game can still
    /// force.
    #[must_use]
    pub fn game_value(&self) -> i64 {
        self.position.value()
    }

    /// The held game position.
    #[must_use]
    pub fn position(&self) -> &GamePosition {
        &self.position
    }
}

/// The learner's prediction on `x`: one minus the value-minimizing label of
/// the current game position.  Deterministic, never mutates state; on
/// positions where the committed constraints force `x`'s label, the forced
/// label is returned.
pub fn online_predict(
    class: &ConceptClass,
    state: &OnlineLearnerState,
    x: PointId,
) -> Result<u8> {
    Ok(1 - gale_stewart_move(class, &state.position, x)?)
}

/// Advance the learner on an observed pair.  A correct prediction returns
/// the state unchanged; a mistake commits `(x, y)`, strictly decreasing the
/// game value, and increments the mistake count.  A label inconsistent with
/// the committed constraints (the restriction would become empty) is a
/// realizability error — the input state remains valid.
pub fn online_update(
    class: &ConceptClass,
    state: &OnlineLearnerState,
    x: PointId,
    y: u8,
) -> Result<OnlineLearnerState> {
    if y > 1 {
        return Err(Error::Config(format!("label must be 0 or 1, got {y}")));
    }
    let prediction = online_predict(class, state, x)?;
    if prediction == y {
        return Ok(state.clone());
    }
    let next = state.position.extend(class, x, y)?;
    if next.value() < 0 {
        return Err(Error::Realizability(format!(
            "label {y} at point {x} contradicts the committed constraints"
        )));
    }
    debug_assert!(next.value() < state.position.value(), "mistakes must decrease the game value");
    Ok(OnlineLearnerState { position: next, mistakes: state.mistakes + 1 })
}

/// Adversary that replays a stored Littlestone tree: each round offers the
/// current node's point, answers the opposite of the learner's prediction,
/// and descends accordingly.  Valid trees for the class emit only
/// realizable streams, and a depth-`d` tree forces `d` mistakes from any
/// learner.
#[derive(Clone, Debug)]
pub struct TreeAdversary {
    tree: LittlestoneTree,
    path: Vec<u8>,
}

impl TreeAdversary {
    /// Adversary playing the given tree from the root.
    #[must_use]
    pub fn new(tree: LittlestoneTree) -> Self {
        TreeAdversary { tree, path: Vec::new() }
    }

    /// Adversary playing a deepest witness tree of the class (searched up
    /// to `cap`); a class of Littlestone dimension ≤ 0 yields an
    /// immediately exhausted adversary.
    pub fn deepest(class: &ConceptClass, cap: u32) -> Result<Self> {
        let dim = crate::trees::littlestone_dimension(class, cap)?.lower_bound();
        if dim <= 0 {
            return Ok(TreeAdversary::new(LittlestoneTree::empty()));
        }
        let tree = crate::trees::find_littlestone_tree(class, dim as u32)?
            .expect("dimension lower bound certifies a witness tree");
        Ok(TreeAdversary::new(tree))
    }

    /// The point the adversary is about to play, or `None` once the tree is
    /// exhausted.  The point never depends on the upcoming prediction, so
    /// callers show it to the learner first and then feed the prediction to
    /// [`TreeAdversary::adversary_next`].
    #[must_use]
    pub fn current_point(&self) -> Option<PointId> {
        if self.path.len() < self.tree.depth() {
            Some(self.tree.point(&self.path, self.path.len()))
        } else {
            None
        }
    }

    /// Emit the current node's point with the label opposite the learner's
    /// prediction and descend that branch; `None` once the tree is
    /// exhausted.
    pub fn adversary_next(&mut self, learner_prediction: u8) -> Option<(PointId, u8)> {
        let x = self.current_point()?;
        let y = 1 - (learner_prediction & 1);
        self.path.push(y);
        Some((x, y))
    }

    /// Rounds already played.
    #[must_use]
    pub fn rounds_played(&self) -> usize {
        self.path.len()
    }

    /// Depth of the stored tree.
    #[must_use]
    pub fn depth(&self) -> usize {
        self.tree.depth()
    }
}

/// One round of a learner-versus-adversary duel.
#[derive(Clone, Copy, Debug)]
pub struct DuelRound {
    /// 1-based round number.
    pub round: usize,
    /// Point offered by the adversary.
    pub x: PointId,
    /// The learner's prediction.
    pub prediction: u8,
    /// Label the adversary answered.
    pub label: u8,
    /// Whether the learner was wrong.
    pub mistake: bool,
}

/// Run the module's learner against a tree adversary until the tree is
/// exhausted, returning the full transcript.  Against a valid depth-`d`
/// tree this records exactly `d` rounds, all mistakes.
pub fn run_duel(class: &ConceptClass, adversary: &mut TreeAdversary) -> Result<Vec<DuelRound>> {
    let mut runner = OnlineRunner::new(class)?;
    let mut transcript = Vec::new();
    while let Some(x) = adversary.current_point() {
        let prediction = runner.predict(x)?;
        let (px, y) = adversary.adversary_next(prediction).expect("point was available");
        debug_assert_eq!(px, x);
        let mistake = runner.observe(x, y)?;
        transcript.push(DuelRound { round: transcript.len() + 1, x, prediction, label: y, mistake });
    }
    Ok(transcript)
}

/// Allocation-light online learner for harness-scale simulation: tracks the
/// surviving hypothesis rows of the committed restriction in place.
/// Behaviorally identical to [`online_predict`]/[`online_update`] on the
/// same stream.
pub struct OnlineRunner<'a> {
    oracle: LdOracle<'a>,
    rows: Vec<u32>,
    value: i64,
    committed: Vec<Constraint>,
    mistakes: u64,
}

impl<'a> OnlineRunner<'a> {
    /// Fresh runner on a nonempty class.
    pub fn new(class: &'a ConceptClass) -> Result<Self> {
        if class.is_empty() {
            return Err(Error::Config("cannot run the online learner on an empty class".into()));
        }
        let oracle = LdOracle::new(class)?;
        let rows = oracle.all_rows();
        let value = oracle.value(&rows);
        Ok(OnlineRunner { oracle, rows, value, committed: Vec::new(), mistakes: 0 })
    }

    /// The learner's prediction on `x` (same rule as [`online_predict`]).
    pub fn predict(&self, x: PointId) -> Result<u8> {
        let parts = self.oracle.split(&self.rows, x);
        let v0 = self.oracle.value(&parts[0]);
        let v1 = self.oracle.value(&parts[1]);
        Ok(1 - u8::from(v1 < v0))
    }

    /// Advance on an observed pair; returns whether a mistake occurred.
    pub fn observe(&mut self, x: PointId, y: u8) -> Result<bool> {
        if y > 1 {
            return Err(Error::Config(format!("label must be 0 or 1, got {y}")));
        }
        let prediction = self.predict(x)?;
        if prediction == y {
            return Ok(false);
        }
        let parts = self.oracle.split(&self.rows, x);
        let survivors = &parts[y as usize];
        if survivors.is_empty() {
            return Err(Error::Realizability(format!(
                "label {y} at point {x} contradicts the committed constraints"
            )));
        }
        self.rows = survivors.clone();
        self.value = self.oracle.value(&self.rows);
        self.committed.push(Constraint::new(x, y));
        self.mistakes += 1;
        Ok(true)
    }

    /// Mistakes made so far.
    #[must_use]
    pub fn mistakes(&self) -> u64 {
        self.mistakes
    }

    /// Littlestone dimension of the committed restriction.
    #[must_use]
    pub fn game_value(&self) -> i64 {
        self.value
    }

    /// Committed `(point, label)` pairs, in mistake order.
    #[must_use]
    pub fn committed(&self) -> &[Constraint] {
        &self.committed
    }
}
