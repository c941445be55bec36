use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("window {0} is outside the domain of the transition map")]
    UndefinedWindow(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("space is not of finite type")]
    NotFiniteType,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("point is not admissible: {0}")]
    NotAdmissible(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("orbit left the branch rectangles at step {0}")]
    EscapedSquare(i64),
    #[error("itinerary code is not realizable")]
    Unrealizable,
    #[error("bad letter `{0}`")]
    BadLetter(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("arithmetic overflow while counting")]
    Overflow,
}
