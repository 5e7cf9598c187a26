use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("symbol {symbol} at position {position} is outside the alphabet 1..={alphabet}")]
    InvalidSymbol {
        symbol: usize,
        position: usize,
        alphabet: usize,
    },

    #[error("invalid distribution at position {position}: {reason}")]
    InvalidDistribution { position: usize, reason: String },

    #[error("duplicate string at indices {first} and {second}")]
    DuplicateString { first: usize, second: usize },

    #[error("string set is empty")]
    EmptySet,

    #[error("operation needs at least {needed} strings, got {got}")]
    TooFewStrings { needed: usize, got: usize },

    #[error("cardinality mismatch: {left} vs {right}")]
    CardinalityMismatch { left: usize, right: usize },

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("string {index} is not a point mass at every position; discrete mode needs ordinary strings")]
    NotDiscrete { index: usize },

    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),

    #[error("simplices have different radii {left} and {right}")]
    RadiiDiffer { left: String, right: String },

    #[error("simplices share the minimal generator set; no separating vertex exists")]
    EquivalentSimplices,

    #[error("{0} filtration is not Morse")]
    NotMorse(&'static str),

    #[error("bottleneck distance is infinite: {left} vs {right} essential bars")]
    UnpairedEssentialBars { left: usize, right: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
