use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a single CSV line was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LineError {
    #[error("expected 4 fields (x,y,t,p), found {0}")]
    Arity(usize),
    #[error("field {field} is not an integer: {value:?}")]
    NotInteger { field: &'static str, value: String },
    #[error("polarity must be -1, 0 or 1, found {0}")]
    Polarity(i128),
    #[error("field {field} out of range: {value}")]
    FieldRange { field: &'static str, value: i128 },
    #[error("pixel ({x}, {y}) outside {width}x{height} sensor")]
    OutOfBounds {
        x: i128,
        y: i128,
        width: u16,
        height: u16,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed event file: {0}")]
    MalformedFile(String),
    #[error("event {index} at ({x}, {y}) is outside the {width}x{height} sensor")]
    OutOfBounds {
        index: usize,
        x: u32,
        y: u32,
        width: u16,
        height: u16,
    },
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: LineError,
    },
    #[error("event stream is empty")]
    EmptyStream,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("corruption kind mismatch: expected {expected}, got {found}")]
    WrongCorruptionKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("severity must be in 1..=5, got {0}")]
    SeverityOutOfRange(i64),
    #[error("clean accuracy must be in (0, 100], got {0}")]
    InvalidAccuracy(f64),
    #[error("value {value} at channel {channel}, pixel ({y}, {x}) does not fit dtype {dtype}")]
    DtypeRange {
        channel: usize,
        y: usize,
        x: usize,
        value: f32,
        dtype: &'static str,
    },
    #[error("bad magic bytes {0:02x?}, expected \"ERT1\"")]
    BadMagic([u8; 4]),
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown dtype code {0}")]
    UnknownDtype(u8),
    #[error("expected 3 dimensions, found {0}")]
    BadNdim(u8),
    #[error("tensor dimensions must be non-zero, got {0:?}")]
    EmptyDims(Vec<u32>),
    #[error("truncated tensor file: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("{0} trailing bytes after tensor payload")]
    TrailingBytes(usize),
    #[error("cannot render {0} channels without selecting a channel or frame")]
    TooManyChannels(usize),
    #[error("png encoding failed: {0}")]
    Png(String),
}
