use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("argument {0} lies on (or within 1e-8 of) a Gamma pole")]
    PoleArgument(f64),

    #[error("C_alpha has a pole at alpha = 1")]
    PoleAtOne,

    #[error("degenerate parameters (alpha = {alpha}, beta = {beta}): {reason}")]
    DegenerateParams {
        alpha: f64,
        beta: f64,
        reason: &'static str,
    },

    #[error("declared singularity order {order} at {location} is not integrable")]
    NonIntegrable {
        location: &'static str,
        order: f64,
    },

    #[error("Green function diverges on the diagonal for alpha <= 1 (x = {x}, y = {y})")]
    DiagonalSingularity { x: f64, y: f64 },

    #[error("test function support [{lo}, {hi}] must stay inside (0, inf)")]
    SupportTouchesBoundary { lo: f64, hi: f64 },

    #[error("Monte Carlo budget exceeded: {0}")]
    McBudgetExceeded(String),

    #[error("invalid simulation configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }
}
