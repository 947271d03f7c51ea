use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {field}: {reason}")]
    InvalidGeometry { field: &'static str, reason: String },

    #[error("invalid {what}: {reason}")]
    InvalidSpec { what: &'static str, reason: String },

    #[error("empty shell: no lattice frequency with {c_star} - {width} <= |v| <= {c_star} + {width} (lattice spacings {spacings:?})")]
    EmptyShell {
        c_star: f64,
        width: f64,
        spacings: Vec<f64>,
    },

    #[error("empty strip: no lattice frequency with |a.(v - offset)| <= {half_width} (lattice spacings {spacings:?})")]
    EmptyStrip { half_width: f64, spacings: Vec<f64> },

    #[error("resolution too coarse: {points} Euclidean lattice points in the width-1/50 window, need at least {required} (spacing {spacing})")]
    ResolutionTooCoarse {
        points: usize,
        required: usize,
        spacing: f64,
    },

    #[error("torus mode {mode} exceeds the lattice range (largest representable mode {max})")]
    RangeExceeded { mode: i64, max: i64 },

    #[error("initial data has zero L2 norm")]
    ZeroData,

    #[error("sample {index} is not positive ({value})")]
    NonpositiveSample { index: usize, value: f64 },

    #[error("packet excursion {excursion} exceeds half the period ({limit}); the periodised measurement would wrap around")]
    WrapAround { excursion: f64, limit: f64 },

    #[error("(q, r) = ({q}, {r}) is not sharp sigma-admissible for sigma = {sigma}")]
    Admissibility { q: f64, r: f64, sigma: f64 },

    #[error("quadrature under-resolved: {what} = {got}, need at least {required}")]
    QuadratureUnderResolved {
        what: &'static str,
        got: usize,
        required: usize,
    },

    #[error("too few samples: got {got}, need at least {required}")]
    TooFewSamples { got: usize, required: usize },

    #[error("field shape does not match its geometry: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("N = {n}: {source}")]
    AtFrequency {
        n: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_frequency(n: f64, source: Error) -> Self {
        Error::AtFrequency {
            n,
            source: Box::new(source),
        }
    }
}
