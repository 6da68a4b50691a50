use thiserror::Error;

/// Every failure the library can report. Each variant has a stable code
/// (see [`Error::code`]) used by the CLI and the C interface.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a bijection: {0}")]
    NotBijection(String),
    #[error("the gluing permutations do not act transitively ({components} components)")]
    NotTransitive { components: usize },
    #[error("orbit exceeds the cap of {cap} surfaces")]
    OrbitTooLarge { cap: usize },
    #[error("cylinder configuration is not cyclic with equal widths")]
    NotCyclicConfiguration,
    #[error("twist return time exceeds the cap of {cap}")]
    NonPeriodicTwist { cap: u64 },
    #[error("numerical underflow during renormalization: {0}")]
    NumericalUnderflow(String),
    #[error("constraint kernel has dimension {0}, expected 2")]
    KernelNotDim2(usize),
    #[error("sample period vector violates constraint row {0}")]
    SampleViolatesConstraints(usize),
    #[error("degree is not an integer: area {area} over covolume {covolume}")]
    NonIntegerDegree { area: u64, covolume: u64 },
    #[error("corrupt database record on line {line}: {reason}")]
    CorruptRecord { line: usize, reason: String },
    #[error("database lock held: {0}")]
    LockHeld(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::NotBijection(_) => "NotBijection",
            Error::NotTransitive { .. } => "NotTransitive",
            Error::OrbitTooLarge { .. } => "OrbitTooLarge",
            Error::NotCyclicConfiguration => "NotCyclicConfiguration",
            Error::NonPeriodicTwist { .. } => "NonPeriodicTwist",
            Error::NumericalUnderflow(_) => "NumericalUnderflow",
            Error::KernelNotDim2(_) => "KernelNotDim2",
            Error::SampleViolatesConstraints(_) => "SampleViolatesConstraints",
            Error::NonIntegerDegree { .. } => "NonIntegerDegree",
            Error::CorruptRecord { .. } => "CorruptRecord",
            Error::LockHeld(_) => "LockHeld",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Io(_) => "IoError",
        }
    }

    /// Stable numeric code, shared with the C interface.
    pub fn numeric_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 1,
            Error::NotBijection(_) => 2,
            Error::NotTransitive { .. } => 3,
            Error::OrbitTooLarge { .. } => 4,
            Error::NotCyclicConfiguration => 5,
            Error::NonPeriodicTwist { .. } => 6,
            Error::NumericalUnderflow(_) => 7,
            Error::KernelNotDim2(_) => 8,
            Error::SampleViolatesConstraints(_) => 9,
            Error::NonIntegerDegree { .. } => 10,
            Error::CorruptRecord { .. } => 11,
            Error::LockHeld(_) => 12,
            Error::InvalidArgument(_) => 13,
            Error::Io(_) => 14,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
