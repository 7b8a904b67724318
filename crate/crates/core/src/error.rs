use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type. Variants correspond to the named failure modes of
/// the public operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("variable index {0} out of range for {1} variables")]
    VarOutOfRange(usize, usize),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("expected degree {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("zero binary form not allowed here")]
    ZeroForm,
    #[error("binary form has odd degree {0}")]
    OddDegree(u32),
    #[error("singular linear change of coordinates")]
    SingularTransform,
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("hypersurface is singular")]
    SingularHypersurface,
    #[error("involution does not preserve the polynomial")]
    NotInvariant,
    #[error("involution matrix does not square to the identity")]
    NotInvolution,
    #[error("polynomial is not of Eckardt shape f + l*x4^2")]
    NotEckardtShape,
    #[error("point does not lie on the variety")]
    PointNotOnVariety,
    #[error("line does not lie on the variety")]
    LineNotOnVariety,
    #[error("line is not of the required type: {0}")]
    WrongLineType(&'static str),
    #[error("points do not span a line")]
    DegenerateSpan,
    #[error("intersection is not transverse: {0}")]
    NonTransverse(&'static str),
    #[error("discriminant quartic is singular (line through the marked point meets a line of the surface)")]
    SingularQuartic,
    #[error("plane cubic is singular")]
    SingularCubic,
    #[error("restriction to the line is not minus a perfect square: not a bitangent")]
    NotBitangent,
    #[error(
        "square root over Q requires the non-square scalar {0}; pass allow_rescale to absorb it"
    )]
    FieldObstruction(String),
    #[error("exact division failed")]
    InexactDivision,
    #[error("cover tower is inconsistent: {0}")]
    TowerInconsistent(String),
    #[error("Riemann-Hurwitz count is not a non-negative integer: deg={deg}, base genus={base}, ramification={ram}")]
    BadRamification { deg: u32, base: u32, ram: u32 },
    #[error("binary form is not squarefree")]
    NotSquarefree,
    #[error("repeated points in the quadruple")]
    RepeatedPoints,
    #[error("no split of the branch sextic matches the j-invariant of the elliptic curve")]
    NoMumfordMatch,
    #[error("line search found {found} lines instead of 27")]
    LineCount { found: usize },
    #[error("numeric root finding failed: {0}")]
    Numeric(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
