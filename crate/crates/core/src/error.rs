use thiserror::Error;

use crate::picard::AbelianGroup;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field descriptor: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("division by zero in {0}")]
    DivisionByZero(String),
    #[error("operation requires characteristic 2, got characteristic {0}")]
    RequiresCharacteristicTwo(u32),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid ring presentation: {0}")]
    InvalidPresentation(String),
    #[error("rewrite system is not confluent: {0}")]
    NotConfluent(String),
    #[error("cannot invert generator `{0}`: {1}")]
    NotInvertible(String, String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("bidegree ({0}, {1}) is not finite dimensional or lies outside the supported range")]
    WindowExceeded(i32, i32),

    #[error("invalid group `{0}`: {1}")]
    InvalidGroup(String, String),
    #[error("characteristic mismatch: group {group} needs p = {expected}, field has p = {actual}")]
    CharacteristicMismatch {
        group: String,
        expected: u32,
        actual: u32,
    },
    #[error("no extension datum for {0}")]
    NoExtensionDatum(String),
    #[error("{0} has no periodic Tate cohomology")]
    NotPeriodic(String),
    #[error("seed differential {0} has the wrong bidegree")]
    SeedBidegree(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("page mismatch: {0}")]
    PageMismatch(String),
    #[error("d∘d ≠ 0 at ({s}, {t}) on page {r}")]
    DSquaredNonZero { r: u32, s: i32, t: i32 },
    #[error("differential is not well defined at ({s}, {t}) on page {r}: {detail}")]
    IllDefinedDifferential {
        r: u32,
        s: i32,
        t: i32,
        detail: String,
    },
    #[error("page {0} is not collapsed")]
    NotCollapsed(u32),
    #[error("ambiguous killing pattern at ({s}, {t}): {detail}")]
    AmbiguousPairing { s: i32, t: i32, detail: String },

    #[error("unsupported for Picard computation: {0}")]
    Unsupported(String),
    #[error("ambiguous extension problem: candidates {0:?}")]
    AmbiguousExtension(Vec<AbelianGroup>),
    #[error("no abelian group fits the zero line: {0}")]
    NoExtension(String),
    #[error("required entry ({s}, {t}) on page {r} is outside the computed window")]
    OutsideWindow { r: u32, s: i32, t: i32 },

    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
