use thiserror::Error;

pub type Result<T> = std::result::Result<T, CasimirError>;

/// Errors surfaced by the pressure engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CasimirError {
    /// The gap is zero (or below the continuum floor). The mode-sum integral
    /// diverges logarithmically as the gap closes, so no value exists.
    #[error("gap is zero or below {min_nm} nm: the pressure integral diverges logarithmically as the gap closes")]
    GapZero { min_nm: f64 },

    /// A free-carrier term without a binding cutoff has a pole at zero
    /// wavenumber and cannot be evaluated there.
    #[error("free-carrier permittivity has a pole at k = 0; supply a binding cutoff k_s or evaluate at k > 0")]
    DrudeAtZero,

    /// The Clausius-Mossotti internal-field denominator 1 - S/3 is not
    /// positive; the model is outside its domain of validity.
    #[error("Clausius-Mossotti denominator 1 - S/3 = {denominator} is not positive (oscillator sum S = {sum})")]
    CMDenominatorNonpositive { sum: f64, denominator: f64 },

    /// The bound free-carrier denominator k_s^2 + k^2 - k_c*k is not positive.
    #[error("bound free-carrier denominator k_s^2 + k^2 - k_c*k = {denominator} is not positive")]
    BoundDenominatorNonpositive { denominator: f64 },

    /// K^2 = K0^2 with a non-unit permittivity: the characteristic bracket
    /// degenerates (only possible at k = 0 on the imaginary axis).
    #[error("degenerate characteristic bracket: K^2 = K0^2 with eps != 1 (k = 0 axis point)")]
    DegenerateBracket,

    /// The electric-mode small-angle bracket denominator 1 + eps - eps^2
    /// vanishes near eps(0) = 1.618.
    #[error("small-angle electric bracket is singular: 1 + eps(0) - eps(0)^2 = {denominator}")]
    SmallAngleSingular { denominator: f64 },

    /// Grid refinement changed the result by more than the allowed factor of
    /// the requested relative tolerance.
    #[error("quadrature did not converge: refinement changed the result by {relative_change:.3e} (limit {limit:.3e})")]
    NonConvergent { relative_change: f64, limit: f64 },

    /// The zero-frequency term needs a finite static permittivity, but the
    /// material has an unregularized free-carrier pole and no convention
    /// override was chosen.
    #[error("zero-frequency term undefined: free-carrier material without a binding cutoff; choose a zero-frequency convention")]
    ZeroFreqUndefined,

    /// A static permittivity at or below one where a value above one is
    /// required.
    #[error("static permittivity {eps0} must exceed 1")]
    EpsAtMostOne { eps0: f64 },

    /// A parameter failed a domain check (negative wavenumber, zero sheet
    /// conductivity where positive is required, and similar).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
