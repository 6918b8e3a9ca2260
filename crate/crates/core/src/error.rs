use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    CharTwoRejected,
    #[error("modulus is not irreducible over Z_{0}")]
    ReduciblePolynomial(u32),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("frobenius involution needs an even extension degree, got {0}")]
    InvolutionUnavailable(u32),
    #[error("field order {0} exceeds the supported maximum")]
    FieldTooLarge(u64),
    #[error("denominator vanishes in characteristic {0}")]
    DenominatorVanishes(u32),
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("operands live in different fields")]
    FieldMismatch,

    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("no invertible principal block of the column-space rank")]
    NoInvertiblePrincipalBlock,

    #[error("matrix is not hermitian")]
    NotHermitian,
    #[error("form is degenerate")]
    Degenerate,

    #[error("system is not equiangular")]
    NotEquiangular,
    #[error("system is not tight")]
    NotTight,
    #[error("system is 0-tight; no complement is built")]
    ZeroTight,
    #[error("gram reconstruction failed: {0}")]
    InconsistentRank(String),
    #[error("complement verification failed: {0}")]
    ComplementVerificationFailed(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("case mismatch: {0}")]
    CaseMismatch(String),

    #[error("index {index} out of range for {n} vectors")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("strategy precondition failed: {0}")]
    StrategyPreconditionFailed(String),

    #[error("beta squared does not equal b")]
    BetaNotRoot,
    #[error("operation needs the identity involution")]
    CaseU,
    #[error("invalid two-graph: {0}")]
    InvalidTwoGraph(String),
    #[error("graph is complete or empty")]
    CompleteOrEmpty,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("blocks have unequal sizes")]
    UnequalBlockSizes,
    #[error("invalid block: {0}")]
    InvalidBlock(String),
    #[error("set is not incoherent: {0}")]
    NotIncoherent(String),
    #[error("incoherent set is not maximal: vector {0} extends it")]
    NotMaximal(usize),
    #[error("incoherent set is not linearly independent")]
    NotIndependent,
    #[error("hypothesis not met: {0}")]
    HypothesesNotMet(String),

    #[error("search budget exceeded: {needed} candidate vectors > {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
