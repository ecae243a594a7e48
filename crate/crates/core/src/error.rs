use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CubeError {
    #[error("coordinate index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("bit mask has bits beyond dimension {n}")]
    MaskOutOfRange { n: usize },
    #[error("dimension {n} exceeds the supported maximum {max}")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("index sets do not partition {{1..{n}}}")]
    NotAPartition { n: usize },
    #[error("v is not below w: not an interval")]
    NotAnInterval,
    #[error("face dimension {d} out of range 0..={n}")]
    DimensionOutOfRange { d: usize, n: usize },
    #[error("not a face of the given cube")]
    NotAFace,
    #[error("dimension mismatch")]
    DimensionMismatch,
}

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("schema: {0}")]
    Schema(String),
    #[error("invalid cubical complex:\n{0}")]
    Invalid(String),
    #[error("torus grid needs every subdivision count >= 3 (got {0}); smaller counts give distinct cubes with the same vertex set")]
    GridTooCoarse(usize),
    #[error("cube {0} does not exist")]
    NoSuchCube(usize),
    #[error("requested face dimension {d} exceeds cube dimension {dim}")]
    FaceDimension { d: usize, dim: usize },
    #[error("point coordinate {value} outside [-tol, 1+tol]")]
    PointOutside { value: f64 },
    #[error("point has {got} coordinates, cube has dimension {dim}")]
    PointArity { got: usize, dim: usize },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Cube(#[from] CubeError),
}

#[derive(Debug, Error)]
pub enum CochainError {
    #[error("cube {cube} has dimension {dim}, expected {degree}")]
    WrongDegree { cube: usize, dim: usize, degree: usize },
    #[error("cube index {0} out of range")]
    NoSuchCube(usize),
    #[error("integer overflow in cochain arithmetic")]
    Overflow,
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
}

#[derive(Debug, Error)]
pub enum GeoError {
    #[error("schema: {0}")]
    Schema(String),
    #[error("geometric cochain is not transverse:\n{0}")]
    NotTransverse(String),
    #[error("non-transverse intersection with cube {cube} at {point:?}: {reason}")]
    Degenerate { cube: usize, point: Vec<f64>, reason: String },
    #[error("facet of piece {piece} is not expressible as a coordinate graph")]
    FacetNotGraph { piece: usize },
    #[error("conflicting signs for one point on cube {cube} at {point:?}")]
    InconsistentSigns { cube: usize, point: Vec<f64> },
    #[error("geometric layer supports top dimension <= 3 (got {0})")]
    UnsupportedDimension(usize),
    #[error("root finder: {0}")]
    RootFinder(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
