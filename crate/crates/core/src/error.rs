use thiserror::Error;

/// Errors raised by validation and by the numerical pipelines.
#[derive(Debug, Error)]
pub enum QidError {
    #[error("invalid distribution spec: {0}")]
    Schema(String),

    #[error("masses sum to {sum}, expected 1")]
    MassSum { sum: f64 },

    #[error("density takes negative value {value} at x = {x}")]
    NegativeDensity { x: f64, value: f64 },

    #[error("atom at {x} is not on the lattice {r} + {h}Z")]
    NonLatticeAtom { x: f64, r: f64, h: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid [{lo}, {hi}] leaves tail mass {tail_mass:e} uncovered")]
    InsufficientCoverage { lo: f64, hi: f64, tail_mass: f64 },

    #[error("tabulated density grid too coarse: estimated error {estimate:e} at z = {z_max}")]
    CoarseGrid { z_max: f64, estimate: f64 },

    #[error("no atom mass available for tail control; supply an explicit scan bound")]
    NoTailControl,

    #[error("lattice characteristic function vanishes on the period near theta = {theta} (|value| = {modulus:e})")]
    LatticeVanishes { theta: f64, modulus: f64 },

    #[error("indeterminate dip: |charfn| = {modulus:e} at z = {z} is neither a zero nor clearly positive")]
    Indeterminate { z: f64, modulus: f64 },

    #[error("phase refinement exhausted its budget on [{z_lo}, {z_hi}]")]
    RefinementExhausted { z_lo: f64, z_hi: f64 },

    #[error("curve comes within {modulus:e} of zero at z = {z}")]
    NearZero { z: f64, modulus: f64 },

    #[error("winding estimate {value} is not within 0.05 of an integer; increase z_max")]
    NonIntegerWinding { value: f64 },

    #[error("grid half-width {z_max} does not reach the tail cutoff {cutoff}")]
    GridTooShort { z_max: f64, cutoff: f64 },

    #[error("tail constants at the two ends differ by {difference:e}")]
    UnsettledTail { difference: f64 },

    #[error("imaginary residual {value:e} exceeds {limit:e}")]
    ImaginaryResidual { value: f64, limit: f64 },

    #[error("inversion residual {residual:e} exceeds {limit:e}")]
    InversionResidual { residual: f64, limit: f64 },

    #[error("characteristic function vanishes near z = {z}")]
    HasZero { z: f64 },

    #[error("no zero detected on [0, {z_max}]")]
    NoZeroDetected { z_max: f64 },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QidError>;
