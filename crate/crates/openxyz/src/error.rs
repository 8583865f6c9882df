use crate::C64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("near pole in {what}: |sigma({arg})| = {modulus:.3e}")]
    NearPole {
        what: &'static str,
        arg: C64,
        modulus: f64,
    },
    #[error("theta series does not converge: Im(tau) = {0} below floor 0.2")]
    NonConvergent(f64),
    #[error("singular intertwiner matrix at weight ({m1}, {m2}), u = {u}")]
    SingularIntertwiner { m1: C64, m2: C64, u: C64 },
    #[error("singular inverse in {what}: condition number {cond:.3e}")]
    SingularInverse { what: &'static str, cond: f64 },
    #[error("F-matrix degenerate: min |diag| = {0:.3e}")]
    DegenerateF(f64),
    #[error("roots are off shell: max BAE residual {0:.3e}")]
    OffShellRoots(f64),
    #[error("colliding arguments: {0}")]
    CollidingArguments(String),
    #[error("colliding roots: {0}")]
    CollidingRoots(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Config and usage problems map to exit code 2, numerical aborts to 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParams(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
