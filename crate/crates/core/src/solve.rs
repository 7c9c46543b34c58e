//! Types shared by the solvers: options, cancellation, results and errors.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::enumeration::EnumerationError;
use crate::problems::{ProblemError, ProblemInstance, ProblemKind, SolutionSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Backward,
    Forward,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Backward, Algorithm::Forward, Algorithm::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Backward => "backward",
            Algorithm::Forward => "forward",
            Algorithm::Oracle => "oracle",
        }
    }

    /// Whether this algorithm handles `inst` at all.
    pub fn supports(self, inst: &ProblemInstance) -> bool {
        match self {
            Algorithm::Oracle => true,
            Algorithm::Backward => inst.q.is_none() && crate::enumeration::supports(inst.kind),
            Algorithm::Forward => {
                inst.q.is_none()
                    && matches!(
                        inst.kind,
                        ProblemKind::VertexCover | ProblemKind::PathContraction
                    )
            }
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown algorithm `{0}`")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Algorithm, UnknownAlgorithm> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| UnknownAlgorithm(s.to_string()))
    }
}

/// Cooperative cancellation: an explicit flag plus an optional deadline.
#[derive(Debug, Clone, Default)]
pub struct CancelToken {
    flag: Arc<AtomicBool>,
    deadline: Option<Instant>,
}

impl CancelToken {
    pub fn new() -> CancelToken {
        CancelToken::default()
    }

    pub fn with_timeout(timeout: Duration) -> CancelToken {
        CancelToken {
            flag: Arc::default(),
            deadline: Some(Instant::now() + timeout),
        }
    }

    pub fn cancel(&self) {
        self.flag.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        if self.flag.load(Ordering::Relaxed) {
            return true;
        }
        match self.deadline {
            Some(d) if Instant::now() >= d => {
                self.flag.store(true, Ordering::Relaxed);
                true
            }
            _ => false,
        }
    }

    pub(crate) fn check(&self) -> Result<(), SolveError> {
        if self.is_cancelled() {
            Err(SolveError::Cancelled)
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub threads: usize,
    pub memo: bool,
    pub cancel: CancelToken,
    /// Candidate cap for the oracle; `None` reads `GMS_ORACLE_CAP` or uses the default.
    pub oracle_cap: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions {
            threads: 1,
            memo: true,
            cancel: CancelToken::new(),
            oracle_cap: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("{algorithm} does not handle {kind}")]
    Unsupported {
        algorithm: Algorithm,
        kind: ProblemKind,
    },
    #[error("{0} does not handle a local budget q")]
    LocalBudgetUnsupported(Algorithm),
    #[error("instance too large for oracle: {0}")]
    TooLarge(String),
    #[error("search cancelled")]
    Cancelled,
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("internal error: {0}")]
    Internal(String),
}

/// The guessed moves behind a backward-search answer. Each pair has
/// exactly one zero entry: `(x, 0)` drops the `x`-th element (1-based,
/// canonical order) of the running set, `(0, y)` replaces it with the
/// `y`-th enumerated superset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GuessSequence {
    pub pairs: Vec<(usize, usize)>,
    /// 1-based layer at which each move was made.
    pub layers: Vec<usize>,
}

impl GuessSequence {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_well_formed(&self) -> bool {
        self.pairs.len() == self.layers.len()
            && self.pairs.iter().all(|&(x, y)| (x == 0) != (y == 0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Yes {
        solution: SolutionSequence,
        guesses: Option<GuessSequence>,
        /// `|S_1|` plus insertions of the relaxed search, before repair.
        charge: Option<usize>,
    },
    No {
        reason: Option<String>,
    },
}

impl Answer {
    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes { .. })
    }

    pub fn solution(&self) -> Option<&SolutionSequence> {
        match self {
            Answer::Yes { solution, .. } => Some(solution),
            Answer::No { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub memo_hits: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub algorithm: Algorithm,
    pub answer: Answer,
    pub stats: SolveStats,
}

/// Counters shared between worker clones.
#[derive(Debug, Clone, Default)]
pub(crate) struct Counters {
    nodes: Arc<AtomicU64>,
    memo_hits: Arc<AtomicU64>,
}

impl Counters {
    pub(crate) fn node(&self) {
        self.nodes.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn memo_hit(&self) {
        self.memo_hits.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn snapshot(&self) -> SolveStats {
        SolveStats {
            nodes: self.nodes.load(Ordering::Relaxed),
            memo_hits: self.memo_hits.load(Ordering::Relaxed),
        }
    }
}

pub(crate) fn thread_pool(threads: usize) -> Result<rayon::ThreadPool, SolveError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| SolveError::Internal(e.to_string()))
}

/// Runs `algorithm` on `inst`.
pub fn solve(
    inst: &ProblemInstance,
    algorithm: Algorithm,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {
    match algorithm {
        Algorithm::Backward => crate::backward::solve_backward(inst, opts),
        Algorithm::Forward => crate::forward::solve_forward(inst, opts),
        Algorithm::Oracle => crate::oracle::oracle_solve(inst, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("dfs".parse::<Algorithm>().is_err());
    }

    #[test]
    fn cancel_token() {
        let t = CancelToken::new();
        assert!(!t.is_cancelled());
        let u = t.clone();
        u.cancel();
        assert!(t.is_cancelled());
        assert!(CancelToken::with_timeout(Duration::ZERO).is_cancelled());
    }

    #[test]
    fn guess_shape() {
        let g = GuessSequence {
            pairs: vec![(0, 2), (1, 0)],
            layers: vec![3, 2],
        };
        assert!(g.is_well_formed());
        let bad = GuessSequence {
            pairs: vec![(0, 0)],
            layers: vec![1],
        };
        assert!(!bad.is_well_formed());
    }
}
