use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Schläfli symbol ({p},{q}): both entries must be at least 3")]
    InvalidSchlafli { p: u32, q: u32 },

    #[error("({p},{q}) is not hyperbolic; only hyperbolic tilings have geometry support")]
    UnsupportedGeometry { p: u32, q: u32 },

    #[error("stabilizer for {mode} mode requested from a {kind} presentation")]
    ModeMismatch { mode: &'static str, kind: &'static str },

    #[error("generator index {0} is out of range for this presentation")]
    UnknownGenerator(usize),

    #[error("cannot parse word {0:?}")]
    BadWord(String),

    #[error(
        "coset enumeration exceeded {limit} cosets; either the subgroup has infinite \
         index (e.g. the trivial subgroup of a hyperbolic group) or the limit is too small"
    )]
    CosetLimitExceeded { limit: usize },

    #[error("coset {0} is not a live coset of this table")]
    DeadCoset(usize),

    #[error("operation requires a complete coset table")]
    IncompleteTable,

    #[error("malformed coset table: {0}")]
    MalformedTable(String),

    #[error("index must be at least 1, got {0}")]
    InvalidIndex(usize),

    #[error("colour {colour} is outside 1..={k}")]
    ColourOutOfRange { colour: usize, k: usize },

    #[error("brute-force oracle is limited to index {max}, got {k}")]
    OracleTooLarge { k: usize, max: usize },

    #[error("records disagree on the tiling: ({0},{1}) vs ({2},{3})")]
    TilingMismatch(u32, u32, u32, u32),

    #[error("reflection conjugation is only defined for direct-mode records")]
    NotDirect,

    #[error("point ({0}, {1}) is not strictly inside the unit disc")]
    OutsideDisc(f64, f64),

    #[error("numeric overflow: point escaped the representable disc")]
    NumericOverflow,

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("patch has no interior tiles to verify")]
    PatchTooShallow,

    #[error("rotation centre lies outside the region covered by the patch")]
    CentreOutsidePatch,

    #[error("tolerance must be positive")]
    BadTolerance,

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
