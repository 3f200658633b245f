use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("group order exceeds enumeration cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("Sylow subgroup of order {0} exceeds the subgroup-lattice cap of 64")]
    SylowTooLarge(usize),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("module mismatch: {0}")]
    Mismatch(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("group is not a p-group for p = {0}")]
    NotAPGroup(u64),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("indecomposability unresolved for a module of dimension {dim}")]
    IndecomposabilityUnresolved { dim: usize },
    #[error("dimension {dim} exceeds cap {cap}")]
    DimCapExceeded { dim: usize, cap: usize },
    #[error("isomorphism undecided: dimensions and Hom dimensions agree but no invertible morphism was found")]
    IsoUndecided,
    #[error("field extension would exceed total degree {cap}")]
    ExtensionCapExceeded { cap: u32 },
    #[error("decomposition needs a field extension to total degree {0}")]
    NeedsExtension(u32),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("Green correspondent not unique: {count} summands of nonzero dimension")]
    NotUnique { count: usize },
    #[error("input module has dimension divisible by the characteristic")]
    NegligibleInput,
    #[error("operation requires an untruncated ring")]
    Truncated,
    #[error("ring is not commutative")]
    NotCommutative,
    #[error("eigenvalue clustering is ambiguous")]
    ClusteringAmbiguous,
    #[error("search timed out")]
    Timeout,
    #[error("operation requires a finite order of q")]
    GenericOrder,
    #[error("only odd orders n >= 3 are supported, got {0}")]
    UnsupportedOrder(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
