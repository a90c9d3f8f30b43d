//! Exact learning-rate machinery for finite concept classes.
//!
//! A binary concept class `H ⊆ {0,1}^X` over a finite domain `X` admits a
//! sharp classification of its optimal universal learning curve, governed by
//! two combinatorial tree structures:
//!
//! * **Littlestone trees** — complete binary trees of domain points in which
//!   every root-to-node path is realized by some hypothesis.  The largest
//!   depth of such a tree is the Littlestone dimension `LD(H)`; it equals the
//!   value of the adversarial online mistake game, and a finite value yields
//!   learning curves that decay exponentially in the sample size.
//! * **VCL trees** — trees whose level-`k` nodes carry `(k+1)`-point tuples
//!   and branch over all `2^(k+1)` label patterns.  Their largest depth
//!   separates linear-rate classes from classes that are learnable only at
//!   arbitrarily slow rates.
//!
//! The crate implements, at desk scale and exactly where exactness is
//! promised:
//!
//! * [`classes`] — bit-matrix concept classes, structured generators,
//!   restriction, projection, and VC dimension;
//! * [`trees`] — memoized search for both tree families, game values, and
//!   the value-greedy Gale–Stewart labeling move;
//! * [`online`] — the mistake-bounded online learner driven by the
//!   Gale–Stewart strategy, plus a replayable tree adversary;
//! * [`patterns`] — the pattern-avoidance strategy for the VCL game, pattern
//!   classes of forbidden-tuple functions, and the one-inclusion-graph
//!   predictor with an exact minimax edge orientation;
//! * [`learners`] — batch learners assembled from the online pieces: the
//!   exponential-rate self-tuning learner, the linear-rate learner, empirical
//!   risk minimization, and an adversarial ERM;
//! * [`distributions`] — realizable distributions with exact error
//!   bookkeeping, adversarial constructions that certify rate lower bounds,
//!   and slow-rate probability schedules (with magnitude arithmetic for
//!   tower-scale sample sizes);
//! * [`harness`] — seeded, parallel learning-curve experiments, rate-model
//!   fitting, and structural rate verdicts;
//! * [`selftest`] — the acceptance checks wired into both `cargo test` and
//!   the CLI `selftest` subcommand.

pub mod bits;
pub mod classes;
pub mod distributions;
pub mod harness;
pub mod learners;
pub mod mag;
pub mod online;
pub mod patterns;
pub mod selftest;
pub mod trees;

/// Crate-wide error type.
///
/// Variants map onto the CLI exit codes: configuration and usage problems
/// exit 1, exceeded search budgets exit 2, and failed acceptance checks
/// exit 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed configuration: unknown names, out-of-range parameters,
    /// unparsable spec files.
    #[error("config error: {0}")]
    Config(String),
    /// A point id, tuple, or label fell outside the domain of the class.
    #[error("domain error: {0}")]
    Domain(String),
    /// An explicit search or expansion budget was exceeded before the
    /// computation could finish.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// An operation was applied to a handle in the wrong state
    /// (e.g. a terminal game position, an exhausted adversary).
    #[error("state error: {0}")]
    State(String),
    /// Observed data is inconsistent with every hypothesis in the class.
    #[error("realizability violation: {0}")]
    Realizability(String),
    /// A requested object cannot be constructed (e.g. no tree of the
    /// requested depth, no lower-bound pair in a degenerate class).
    #[error("construction error: {0}")]
    Construction(String),
    /// I/O failure while reading specs or writing outputs.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code for the CLI: 1 config/usage, 2 budget, 3 is reserved for
    /// failed acceptance checks (signaled by the CLI itself, not by errors).
    #[must_use]
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget(_) => 2,
            _ => 1,
        }
    }
}
