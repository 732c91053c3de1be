use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("window is empty along axis {axis}")]
    EmptyWindow { axis: usize },
    #[error("window has too many cells to address")]
    WindowTooLarge,
    #[error("point {0:?} lies outside the window")]
    PointOutsideWindow(alloc::vec::Vec<i64>),
    #[error("truncation must be at least 1, got {0}")]
    InvalidTruncation(i64),
    #[error("center grid denominator must be at least 1")]
    InvalidCenterGrid,
    #[error("enumeration needs {requested} items, cap is {cap}")]
    CapExceeded { requested: u128, cap: u128 },
    #[error("trace is empty")]
    EmptyTrace,
    #[error("trace does not contain the origin")]
    TraceMissingOrigin,
    #[error("trace does not fit inside (-{truncation}, {truncation})^n")]
    TraceOutsideTruncation { truncation: i64 },
    #[error("family contains the same trace twice (element {index})")]
    DuplicateTrace { index: usize },
    #[error("{0} family is only defined in dimension 1")]
    UnsupportedDimension(&'static str),
    #[error("basis element is not a box")]
    NotABox,
    #[error("threshold must be a rational in (0, 1), got {0}")]
    InvalidAlpha(String),
    #[error("alpha grid must be nonempty and strictly increasing")]
    InvalidAlphaGrid,
    #[error("the set must be nonempty")]
    EmptySet,
    #[error("search budget must be at least 1")]
    InvalidBudget,
    #[error("system needs at least one atom and one map")]
    EmptySystem,
    #[error("weight vector has {found} entries, map {map} has {expected}")]
    MapLengthMismatch { map: usize, expected: usize, found: usize },
    #[error("weight of atom {atom} is not positive")]
    NonPositiveWeight { atom: usize },
    #[error("weights sum to {0}, not 1")]
    WeightsDoNotSumToOne(String),
    #[error("map {map} is not a bijection (image {image} repeated or out of range)")]
    NotBijective { map: usize, image: usize },
    #[error("map {map} does not preserve the weight of atom {atom}")]
    WeightNotPreserved { map: usize, atom: usize },
    #[error("maps {first} and {second} do not commute at atom {atom}")]
    NonCommuting { first: usize, second: usize, atom: usize },
    #[error("atom {0} out of range")]
    AtomOutOfRange(usize),
    #[error("horizon must be at least 1")]
    InvalidHorizon,
    #[error("alpha {alpha} is below the domain threshold {threshold}")]
    AlphaBelowThreshold { alpha: f64, threshold: f64 },
    #[error("constant {0} is out of range")]
    InvalidConstant(&'static str),
    #[error("no reference exponent for the {0} family")]
    NoReferenceExponent(&'static str),
    #[error("radius must be positive")]
    InvalidRadius,
    #[error("need at least two usable points with distinct abscissae, got {usable} ({dropped} dropped)")]
    TooFewPoints { usable: usize, dropped: usize },
}

impl Error {
    /// True for errors that signal an infeasible enumeration rather than bad input.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::WindowTooLarge)
    }
}
