use thiserror::Error;

/// Failures raised by the scattering, band and ensemble routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("energy {energy} lies outside the waveguide band [{lower}, {upper}]")]
    OutOfBand { energy: f64, lower: f64, upper: f64 },

    #[error("energy {energy} sits on a band edge; no propagating incident wave")]
    BandEdge { energy: f64 },

    #[error(
        "energy {energy} is resonant with the atomic transition; the effective potential diverges"
    )]
    Resonance { energy: f64 },

    #[error("linear system is singular (pivot {pivot:e} at column {column})")]
    SingularSystem { column: usize, pivot: f64 },

    #[error("wave packet has no support inside the propagating band")]
    DegeneratePacket,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
