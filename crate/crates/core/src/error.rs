use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the function is defined.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// An iterative or adaptive procedure did not reach its tolerance.
    #[error("no convergence in {func}: {detail}")]
    NonConvergence { func: &'static str, detail: String },

    /// A truncated sum hit its hard index cap before reaching the target mass.
    #[error("cutoff exceeded: index {index} passed cap {cap} with captured mass {mass}")]
    CutoffExceeded { index: u64, cap: u64, mass: f64 },

    /// A hypergeometric series was requested that does not terminate.
    #[error("series F({a}, {b}; {c}; z) does not terminate within {bound} terms")]
    NonTerminating { a: f64, b: f64, c: f64, bound: usize },

    /// Input magnitude exceeds the range the algorithm supports.
    #[error("overflow in {func}: {detail}")]
    Overflow { func: &'static str, detail: String },
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }

    pub(crate) fn no_convergence(func: &'static str, detail: impl Into<String>) -> Self {
        Error::NonConvergence { func, detail: detail.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
