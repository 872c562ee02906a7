//! Error and verdict types shared by every checker in the crate.

use serde::Serialize;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("map is not invertible (entry {witness} has no unique preimage)")]
    NotInvertible { witness: usize },

    #[error("table is not a p-shelf: {0}")]
    NotAShelf(Box<Counterexample>),

    #[error("table is not a p-rack: {0}")]
    NotARack(Box<Counterexample>),

    #[error("admissibility conditions fail: {0}")]
    NotAdmissible(Box<Counterexample>),

    #[error("sigma family is not bijective at (zi={zi}, zj={zj}, a={a})")]
    SigmaNotBijective { zi: usize, zj: usize, a: usize },

    #[error("sigma family violates the twist composition identity: {0}")]
    SigmaInvalid(Box<Counterexample>),

    #[error("map is not left non-degenerate at (zi={zi}, zj={zj}, x={x})")]
    NotLeftNonDegenerate { zi: usize, zj: usize, x: usize },

    #[error("map does not satisfy the Yang-Baxter equation: {0}")]
    NotASolution(Box<Counterexample>),

    #[error("search budget exceeded after {visited} nodes (limit {limit})")]
    BudgetExceeded { visited: u64, limit: u64 },

    #[error("size guard exceeded: n^2*m^2 = {size} > limit {limit}")]
    SizeGuard { size: u64, limit: u64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("symmetry precondition violated: {0}")]
    SymmetryViolation(Box<Counterexample>),

    #[error("missing constraint operation for h-coproduct")]
    MissingConstraintOp,

    #[error("product hypothesis fails: {0}")]
    HypothesisFailed(Box<Counterexample>),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A single failing instance of an identity, with enough context to
/// reproduce it by hand. `zs` holds parameter indices and `elems` carrier
/// indices, both in the documented loop order of the check that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Which identity failed, e.g. `"p-self-distributivity"`.
    pub site: String,
    /// Parameter indices involved, in loop order.
    pub zs: Vec<usize>,
    /// Carrier elements involved, in loop order.
    pub elems: Vec<usize>,
    /// Rendered left-hand side of the failing identity.
    pub lhs: String,
    /// Rendered right-hand side of the failing identity.
    pub rhs: String,
}

impl Counterexample {
    pub fn new(
        site: impl Into<String>,
        zs: Vec<usize>,
        elems: Vec<usize>,
        lhs: impl ToString,
        rhs: impl ToString,
    ) -> Self {
        Self {
            site: site.into(),
            zs,
            elems,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }
}

impl std::fmt::Display for Counterexample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} fails at z={:?}, elems={:?}: lhs={} rhs={}",
            self.site, self.zs, self.elems, self.lhs, self.rhs
        )
    }
}

/// Outcome of an exhaustive (or budget-truncated) check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    /// True iff no violation was found among the checked instances.
    pub holds: bool,
    /// First violation in the check's documented order, if any.
    pub counterexample: Option<Counterexample>,
    /// Number of instances actually evaluated.
    pub checked: u64,
    /// False when a budget cut the sweep short.
    pub complete: bool,
}

impl Verdict {
    pub fn pass(checked: u64) -> Self {
        Verdict {
            holds: true,
            counterexample: None,
            checked,
            complete: true,
        }
    }

    pub fn fail(cx: Counterexample, checked: u64) -> Self {
        Verdict {
            holds: false,
            counterexample: Some(cx),
            checked,
            complete: true,
        }
    }

    pub fn truncated(checked: u64) -> Self {
        Verdict {
            holds: true,
            counterexample: None,
            checked,
            complete: false,
        }
    }

    /// Combine with another verdict: holds iff both hold, first
    /// counterexample wins, instance counts add.
    pub fn and(self, other: Verdict) -> Verdict {
        Verdict {
            holds: self.holds && other.holds,
            counterexample: self.counterexample.or(other.counterexample),
            checked: self.checked + other.checked,
            complete: self.complete && other.complete,
        }
    }
}

/// Instance budget for the potentially explosive sweeps (enumeration and
/// full YBE verification on large carriers).
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Maximum number of instances/nodes to visit; `None` means unlimited.
    pub limit: Option<u64>,
    /// Static guard for enumeration: require `n^2 * m^2 <= size_limit`.
    pub size_limit: u64,
}

impl Budget {
    pub const DEFAULT_SIZE_LIMIT: u64 = 4096;

    pub fn unlimited() -> Self {
        Budget {
            limit: None,
            size_limit: Self::DEFAULT_SIZE_LIMIT,
        }
    }

    pub fn limited(limit: u64) -> Self {
        Budget {
            limit: Some(limit),
            size_limit: Self::DEFAULT_SIZE_LIMIT,
        }
    }

    /// Resolve from the `PARAYB_BUDGET` environment variable, else unlimited.
    pub fn from_env() -> Self {
        match std::env::var("PARAYB_BUDGET") {
            Ok(s) => match s.trim().parse::<u64>() {
                Ok(v) => Budget::limited(v),
                Err(_) => Budget::unlimited(),
            },
            Err(_) => Budget::unlimited(),
        }
    }

    pub fn exhausted(&self, used: u64) -> bool {
        matches!(self.limit, Some(l) if used >= l)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}
