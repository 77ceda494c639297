use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: expected {}", expected.join(" | "))]
    Syntax { offset: usize, expected: Vec<String> },

    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("domain error at t={t}: {what}")]
    Domain { t: f64, what: String },

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("zero divisor {re} + {im}j has no inverse")]
    ZeroDivisor { re: f64, im: f64 },

    #[error("cannot recover Weierstrass data: |xi1 - xi2| = {gap} is below the chart guard")]
    Recovery { gap: f64 },

    #[error("degenerate null curve at t={t}: |alpha''^2| = {value}")]
    Degenerate { t: f64, value: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("matrix is not in SL(2,R): det = {det}")]
    NotSl2 { det: f64 },

    #[error("pole of a linear-fractional map at t={t}")]
    Pole { t: f64 },

    #[error("singular point: |<alpha1', alpha2'>| = {value} is below the guard")]
    Singular { value: f64 },

    #[error("surface is not of general type: {0}")]
    NotGeneralType(String),

    #[error("every grid point is singular or masked")]
    EmptyGrid,

    #[error("incomplete stencil at ({i}, {j})")]
    Stencil { i: usize, j: usize },

    #[error("verification requires canonical (natural-parameter) generators")]
    NotCanonical,

    #[error("linear-fractional map has zero determinant")]
    DegenerateDet,

    #[error("grids are not comparable: masks differ on {differing} of {total} points")]
    Incomparable { differing: usize, total: usize },

    #[error("admissibility audit failed: {0}")]
    Audit(String),

    #[error("operation cancelled")]
    Cancelled,

    #[error("quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownFunction { .. } => "UnknownFunction",
            Error::Domain { .. } => "DomainError",
            Error::InvalidTable(_) => "InvalidTable",
            Error::ZeroDivisor { .. } => "ZeroDivisor",
            Error::Recovery { .. } => "RecoveryError",
            Error::Degenerate { .. } => "DegenerateError",
            Error::Parameter(_) => "ParameterError",
            Error::NotSl2 { .. } => "NotSL2",
            Error::Pole { .. } => "PoleError",
            Error::Singular { .. } => "SingularError",
            Error::NotGeneralType(_) => "NotGeneralType",
            Error::EmptyGrid => "EmptyGrid",
            Error::Stencil { .. } => "StencilError",
            Error::NotCanonical => "NotCanonical",
            Error::DegenerateDet => "DegenerateDet",
            Error::Incomparable { .. } => "Incomparable",
            Error::Audit(_) => "AuditError",
            Error::Cancelled => "Cancelled",
            Error::Quadrature { .. } => "QuadratureError",
            Error::Input(_) => "InputError",
            Error::Io(_) => "IoError",
        }
    }

    pub(crate) fn domain(t: f64, what: impl Into<String>) -> Self {
        Error::Domain { t, what: what.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
