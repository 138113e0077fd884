use thiserror::Error;

/// Errors raised by the order-theoretic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("empty label")]
    EmptyLabel,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("cycle in cover relation: {}", .0.join(" < "))]
    Cycle(Vec<String>),
    #[error("relation is not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("poset has {size} elements, above the cap of {cap}")]
    TooManyElements { size: usize, cap: usize },
    #[error("sets belong to different posets")]
    OwnerMismatch,
    #[error("set {0} has no join")]
    NoJoin(String),
    #[error("empty set requires a bottom element")]
    EmptyWithoutBottom,
    #[error("{what} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("lattice is not distributive")]
    NotDistributive,
    #[error("join-specification is not frame-generating")]
    NotFrameGenerating,
    #[error("join-specification is not maximal")]
    NotMaximal,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported export: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
