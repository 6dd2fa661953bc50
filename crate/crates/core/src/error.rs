use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Requested photon number above the Fock cutoff.
    Truncation { photons: usize, n_max: usize },
    /// Vector or matrix dimensions inconsistent with the declared space.
    InvalidShape(String),
    /// Global phase requested against a reference with zero overlap.
    UndefinedPhase,
    InvalidAtom { index: usize, n_atoms: usize },
    InvalidPair { index: usize },
    InvalidRate { name: &'static str, value: f64 },
    InvalidParams(String),
    InvalidPulse(String),
    InvalidIntegrator(String),
    /// Population reached the top Fock level beyond the allowed tolerance.
    TruncationViolated { population: f64, tol: f64, t: f64 },
    NumericalInstability { t: f64 },
    /// Input state has support outside the allowed subspace.
    InvalidInput(String),
    Precondition(String),
    UnknownLabel(String),
    OperandMismatch { expected: usize, got: usize },
    EmptyGrid,
    InvalidCostModel(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Truncation { photons, n_max } => {
                write!(f, "photon number {photons} exceeds Fock cutoff {n_max}")
            }
            Error::InvalidShape(msg) => write!(f, "invalid shape: {msg}"),
            Error::UndefinedPhase => f.write_str("global phase undefined: zero overlap with reference"),
            Error::InvalidAtom { index, n_atoms } => {
                write!(f, "atom index {index} out of range for {n_atoms} atoms")
            }
            Error::InvalidPair { index } => {
                write!(f, "atom pair must be two distinct atoms, got ({index}, {index})")
            }
            Error::InvalidRate { name, value } => write!(f, "invalid rate {name} = {value}"),
            Error::InvalidParams(msg) => write!(f, "invalid physical parameters: {msg}"),
            Error::InvalidPulse(msg) => write!(f, "invalid pulse: {msg}"),
            Error::InvalidIntegrator(msg) => write!(f, "invalid integrator config: {msg}"),
            Error::TruncationViolated { population, tol, t } => write!(
                f,
                "Fock truncation violated at t = {t}: top-level population {population:e} > {tol:e}"
            ),
            Error::NumericalInstability { t } => {
                write!(f, "numerical instability (non-finite amplitude) at t = {t}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input state: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition failed: {msg}"),
            Error::UnknownLabel(label) => write!(f, "unknown initial-state label {label:?}"),
            Error::OperandMismatch { expected, got } => {
                write!(f, "gate expects {expected} operand(s), got {got}")
            }
            Error::EmptyGrid => f.write_str("parameter grid is empty"),
            Error::InvalidCostModel(msg) => write!(f, "invalid cost model: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
