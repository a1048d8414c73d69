use alloc::string::String;

/// Errors raised by the construction, bound and oracle routines.
///
/// Verification *failures* are not errors: they come back as reports with
/// `passed == false` and a witness. These variants cover bad input,
/// configured resource caps and broken internal invariants.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} cap exceeded: k={k} but the cap is {cap}")]
    CapExceeded {
        what: &'static str,
        k: u64,
        cap: u64,
    },

    #[error("bit-vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("ground set of {m} elements does not fit a 64-bit block")]
    GroundSetTooLarge { m: u64 },

    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),

    #[error("internal invariant violated for k={k}: {detail}")]
    Invariant { k: u64, detail: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
