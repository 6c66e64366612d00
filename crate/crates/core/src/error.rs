use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("label {value} is not a nonzero vector of (Z_2)^{n}")]
    LabelOutOfRange { value: u32, n: usize },
    #[error("dimension {0} is not supported")]
    UnsupportedDimension(usize),
    #[error("coordinate {0} is not a bit")]
    NotABit(u8),
    #[error("labels do not form a basis")]
    NotABasis,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("division by zero in Q(sqrt 5)")]
    DivisionByZero,
    #[error("unsupported Coxeter edge order {0}")]
    UnsupportedOrder(u32),
    #[error("Coxeter diagram is malformed: {0}")]
    MalformedDiagram(String),
    #[error("Gram matrix is singular; the diagram is not of finite type")]
    SingularGram,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("orbit grew beyond the safety bound of {0} points")]
    OrbitTooLarge(usize),
    #[error("group closure grew beyond the safety bound of {0} elements")]
    GroupTooLarge(usize),
    #[error("reflection image of orbit point {0} is not in the orbit")]
    NotClosed(usize),
    #[error("generator permutations act on different index sets")]
    DegreeMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("polytope validation failed: {}", .0.join("; "))]
    ValidationFailure(Vec<String>),
    #[error("malformed polytope file: {0}")]
    Malformed(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("expected {expected} labels, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("search space of {0} completions exceeds the brute-force bound")]
    InstanceTooLarge(u128),
    #[error("full-alphabet search on {0} facets refused without override")]
    Infeasible(usize),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("orbit is not closed: image {0} is missing from the labeling set")]
    ClosureViolation(String),
    #[error("facet {index} out of range (polytope has {count} facets)")]
    FacetOutOfRange { index: usize, count: usize },
    #[error("permutation degree {got} does not match facet count {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("labeling is not characteristic")]
    NotCharacteristic,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
}
