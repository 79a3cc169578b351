//! Characteristic (plasmon-polariton dispersion) functions for every
//! supported layer arrangement, evaluated on the imaginary axis.
//!
//! The mode-sum integrand only ever needs the inverses 1/f_e and 1/f_h, and
//! every characteristic function has the shape f = exp(u)/R - (something
//! bounded), so the inverses are exposed directly as
//!
//! ```text
//! g = R e^{-u} / (1 - R e^{-u}),   u = 2 K_gap d,
//! ```
//!
//! with a reflection factor R in [0, 1]. exp(+u) is never formed, so the
//! evaluation underflows gracefully to g = 0 at huge K0*d instead of
//! overflowing.

use crate::error::{CasimirError, Result};
use crate::permittivity::eps_imag_axis;
use crate::types::{Configuration, Geometry, Length, WaveNumber};

/// A point of the spectral plane: transverse wavenumber kappa and
/// imaginary-frequency wavenumber k, both in 1/nm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisPoint {
    pub kappa: WaveNumber,
    pub k: WaveNumber,
}

impl AxisPoint {
    pub fn new(kappa: WaveNumber, k: WaveNumber) -> Self {
        Self { kappa, k }
    }

    /// Vacuum normal wavenumber K0 = sqrt(kappa^2 + k^2).
    pub fn k0(&self) -> f64 {
        self.kappa.inv_nm().hypot(self.k.inv_nm())
    }

    /// Normal wavenumber inside a medium, K = sqrt(kappa^2 + k^2 eps). Real
    /// because eps >= 1 on the imaginary axis.
    pub fn k_medium(&self, eps: f64) -> f64 {
        debug_assert!(eps >= 0.0);
        let kappa = self.kappa.inv_nm();
        let k = self.k.inv_nm();
        (kappa * kappa + k * k * eps).sqrt()
    }
}

/// The pair (1/f_e, 1/f_h) at one axis point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseCharValue {
    pub g_e: f64,
    pub g_h: f64,
}

impl InverseCharValue {
    pub const ZERO: InverseCharValue = InverseCharValue { g_e: 0.0, g_h: 0.0 };

    pub fn sum(&self) -> f64 {
        self.g_e + self.g_h
    }
}

/// g = R e^{-u} / (1 - R e^{-u}) without ever forming e^{+u}.
fn g_from_reflection(r: f64, u: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&r), "reflection factor {r} outside [0,1]");
    debug_assert!(u > 0.0);
    let re = r * (-u).exp();
    re / (1.0 - re)
}

/// Perfectly reflecting plates: g = 1/(e^{2 K0 d} - 1) for both modes.
pub fn inv_f_ideal(point: AxisPoint, d: Length) -> Result<InverseCharValue> {
    d.require_positive_gap()?;
    let g = g_from_reflection(1.0, 2.0 * point.k0() * d.nm());
    Ok(InverseCharValue { g_e: g, g_h: g })
}

/// Two half-spaces of permittivity eps across a vacuum gap d.
pub fn inv_f_halfspace(point: AxisPoint, d: Length, eps: f64) -> Result<InverseCharValue> {
    d.require_positive_gap()?;
    if eps == 1.0 {
        return Ok(InverseCharValue::ZERO);
    }
    let k0 = point.k0();
    let (r_e, r_h) = fresnel_reflections(point, eps);
    let u = 2.0 * k0 * d.nm();
    Ok(InverseCharValue {
        g_e: g_from_reflection(r_e, u),
        g_h: g_from_reflection(r_h, u),
    })
}

/// Squared Fresnel factors ((K - K0)/(K + K0))^2 and the eps-weighted e-mode
/// analogue, with the numerator differences expanded through
/// K^2 - K0^2 = k^2 (eps - 1) to stay accurate when K - K0 underflows the
/// direct subtraction (small k at large kappa).
fn fresnel_reflections(point: AxisPoint, eps: f64) -> (f64, f64) {
    let k0 = point.k0();
    let k_m = point.k_medium(eps);
    let kappa2 = point.kappa.inv_nm().powi(2);
    let k2 = point.k.inv_nm().powi(2);
    let r_h = (k2 * (eps - 1.0) / (k_m + k0).powi(2)).powi(2);
    // K^2 - eps^2 K0^2 = -(eps - 1)(kappa^2 (1 + eps) + k^2 eps).
    let r_e = ((eps - 1.0) * (kappa2 * (1.0 + eps) + k2 * eps)
        / (k_m + eps * k0).powi(2))
    .powi(2);
    (r_e, r_h)
}

/// Two identical slabs of thickness t and permittivity eps across a vacuum
/// gap d, in the mode-matching bracket form
///
/// ```text
/// phi_h = [(2 K0 K coth(Kt) + K^2 + K0^2)/(K^2 - K0^2)]^2,
/// ```
///
/// (e-mode with eps factors), so R = 1/phi.
pub fn inv_f_slabs(point: AxisPoint, d: Length, t: Length, eps: f64) -> Result<InverseCharValue> {
    d.require_positive_gap()?;
    if eps == 1.0 {
        return Ok(InverseCharValue::ZERO);
    }
    if point.k.inv_nm() == 0.0 {
        // K = K0 exactly: the bracket denominators vanish.
        return Err(CasimirError::DegenerateBracket);
    }
    let k0 = point.k0();
    let k_m = point.k_medium(eps);
    let kappa2 = point.kappa.inv_nm().powi(2);
    let k2 = point.k.inv_nm().powi(2);
    // coth(Kt) = (1 + a)/(1 - a) with a = e^{-2Kt}, saturating to 1 for
    // thick slabs without overflow.
    let a = (-2.0 * k_m * t.nm()).exp();
    let coth = (1.0 + a) / (1.0 - a);
    let k02 = k0 * k0;
    let km2 = k_m * k_m;
    // Denominators in factored form: K^2 - K0^2 = k^2 (eps - 1) and
    // K^2 - eps^2 K0^2 = -(eps - 1)(kappa^2 (1 + eps) + k^2 eps).
    let bracket_h = (2.0 * k0 * k_m * coth + km2 + k02) / (k2 * (eps - 1.0));
    let bracket_e = (2.0 * eps * k0 * k_m * coth + km2 + eps * eps * k02)
        / (-(eps - 1.0) * (kappa2 * (1.0 + eps) + k2 * eps));
    let u = 2.0 * k0 * d.nm();
    Ok(InverseCharValue {
        g_e: g_from_reflection(bracket_e.powi(-2), u),
        g_h: g_from_reflection(bracket_h.powi(-2), u),
    })
}

/// Which small-thickness e-mode expression to use; the resonant-difference
/// term appears squared in the h-mode expression and the e-mode is taken the
/// same way by default, but the first-order (unsquared) variant is kept for
/// comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThinPlateForm {
    #[default]
    Squared,
    UnsquaredE,
}

/// Leading small-thickness expansion of the slab functions: the force scales
/// with t^2. Valid for K t << 1 (not enforced).
pub fn inv_f_thin_plate(
    point: AxisPoint,
    d: Length,
    t: Length,
    eps: f64,
) -> Result<InverseCharValue> {
    inv_f_thin_plate_form(point, d, t, eps, ThinPlateForm::Squared)
}

pub fn inv_f_thin_plate_form(
    point: AxisPoint,
    d: Length,
    t: Length,
    eps: f64,
    form: ThinPlateForm,
) -> Result<InverseCharValue> {
    d.require_positive_gap()?;
    let k0 = point.k0();
    let k_m = point.k_medium(eps);
    let k02 = k0 * k0;
    let km2 = k_m * k_m;
    let t2 = t.nm() * t.nm();
    let e = (-2.0 * k0 * d.nm()).exp();
    let g_h = t2 * (km2 - k02).powi(2) / (4.0 * k02) * e;
    let diff_e = km2 - eps * eps * k02;
    let g_e = match form {
        ThinPlateForm::Squared => t2 * diff_e * diff_e / (4.0 * eps * eps * k02) * e,
        ThinPlateForm::UnsquaredE => t2 * diff_e.abs() / (4.0 * eps * eps * k02) * e,
    };
    Ok(InverseCharValue { g_e, g_h })
}

/// Two slabs (thickness t, permittivity eps) with the gap filled by a medium
/// of permittivity eps_gap. Built from interface reflection coefficients with
/// the round-trip exponent 2 K_gap d taken in the gap medium; reduces exactly
/// to [`inv_f_slabs`] at eps_gap = 1 and, at t = 0, to a free-standing film
/// of the gap medium in vacuum.
pub fn inv_f_filled_gap(
    point: AxisPoint,
    d: Length,
    t: Length,
    eps: f64,
    eps_gap: f64,
) -> Result<InverseCharValue> {
    d.require_positive_gap()?;
    let k0 = point.k0();
    let k_m = point.k_medium(eps);
    let k_g = point.k_medium(eps_gap);
    let kappa2 = point.kappa.inv_nm().powi(2);
    let k2 = point.k.inv_nm().powi(2);
    let a = (-2.0 * k_m * t.nm()).exp();
    // gap->slab and slab->vacuum amplitude reflections, h (TE) then e (TM),
    // with the numerator differences expanded through the squared
    // wavenumbers so small k at large kappa stays accurate.
    let r1_h = k2 * (eps_gap - eps) / (k_g + k_m).powi(2);
    let r2_h = k2 * (eps - 1.0) / (k_m + k0).powi(2);
    let r1_e = (eps - eps_gap) * (kappa2 * (eps + eps_gap) + k2 * eps * eps_gap)
        / (eps * k_g + eps_gap * k_m).powi(2);
    let r2_e = -(eps - 1.0) * (kappa2 * (1.0 + eps) + k2 * eps) / (k_m + eps * k0).powi(2);
    let r_h = (r1_h + r2_h * a) / (1.0 + r1_h * r2_h * a);
    let r_e = (r1_e + r2_e * a) / (1.0 + r1_e * r2_e * a);
    let u = 2.0 * k_g * d.nm();
    Ok(InverseCharValue {
        g_e: g_from_reflection(r_e * r_e, u),
        g_h: g_from_reflection(r_h * r_h, u),
    })
}

/// Normalized wave impedances at an axis point: (rho_e, rho_h, rho0_e,
/// rho0_h), the medium and vacuum values for each mode. Requires k > 0.
pub fn impedance_rho(point: AxisPoint, eps: f64) -> (f64, f64, f64, f64) {
    let k = point.k.inv_nm();
    debug_assert!(k > 0.0, "impedances are defined for k > 0");
    let k0 = point.k0();
    let k_m = point.k_medium(eps);
    (k_m / (k * eps), k / k_m, k0 / k, k / k0)
}

/// Half-space functions rebuilt from the impedance mismatch: the reflection
/// factor is ((rho0 - rho)/(rho0 + rho))^2 per mode, which is identical to
/// the Fresnel form used in [`inv_f_halfspace`].
pub fn inv_f_impedance(point: AxisPoint, d: Length, eps: f64) -> Result<InverseCharValue> {
    d.require_positive_gap()?;
    if eps == 1.0 {
        return Ok(InverseCharValue::ZERO);
    }
    let (rho_e, rho_h, rho0_e, rho0_h) = impedance_rho(point, eps);
    let k = point.k.inv_nm();
    let k0 = point.k0();
    let k_m = point.k_medium(eps);
    let kappa2 = point.kappa.inv_nm().powi(2);
    // The impedance differences, with the wavenumber differences expanded
    // through the squares (same stabilization as the Fresnel form):
    // rho0_h - rho_h = k (K - K0)/(K0 K), rho0_e - rho_e = (eps K0 - K)/(k eps).
    let diff_h = k * (k * k * (eps - 1.0) / (k_m + k0)) / (k0 * k_m);
    let diff_e = (eps - 1.0) * (kappa2 * (1.0 + eps) + k * k * eps)
        / ((eps * k0 + k_m) * k * eps);
    let r_e = (diff_e / (rho0_e + rho_e)).powi(2);
    let r_h = (diff_h / (rho0_h + rho_h)).powi(2);
    let u = 2.0 * point.k0() * d.nm();
    Ok(InverseCharValue {
        g_e: g_from_reflection(r_e, u),
        g_h: g_from_reflection(r_h, u),
    })
}

/// Two thin conductive sheets with normalized conductivity zeta, a gap d
/// apart. Each mode sees the vacuum impedance of that mode:
/// R = (zeta rho / (2 + zeta rho))^2.
pub fn inv_f_sheet(point: AxisPoint, d: Length, zeta: f64) -> Result<InverseCharValue> {
    d.require_positive_gap()?;
    if zeta < 0.0 || !zeta.is_finite() {
        return Err(CasimirError::InvalidParameter(format!(
            "sheet conductivity zeta must be finite and non-negative, got {zeta}"
        )));
    }
    if zeta == 0.0 {
        return Ok(InverseCharValue::ZERO);
    }
    let k = point.k.inv_nm();
    let k0 = point.k0();
    let u = 2.0 * k0 * d.nm();
    // zeta*rho_e diverges at k = 0; the ratio tends to 1 cleanly.
    let r_e = if k == 0.0 {
        1.0
    } else {
        let zr = zeta * k0 / k;
        (zr / (2.0 + zr)).powi(2)
    };
    let r_h = {
        let zr = zeta * k / k0;
        (zr / (2.0 + zr)).powi(2)
    };
    Ok(InverseCharValue {
        g_e: g_from_reflection(r_e, u),
        g_h: g_from_reflection(r_h, u),
    })
}

/// Dispersion evaluation for a full configuration: dispatches on the
/// geometry and evaluates the permittivity model(s) at the point's k.
pub fn inverse_char_values(config: &Configuration, point: AxisPoint) -> Result<InverseCharValue> {
    let d = config.gap;
    match &config.geometry {
        Geometry::IdealCasimir => inv_f_ideal(point, d),
        Geometry::HalfSpaces => {
            let eps = eps_imag_axis(&config.plate_material, point.k)?;
            inv_f_halfspace(point, d, eps)
        }
        Geometry::SlabSlab { thickness } => {
            let eps = eps_imag_axis(&config.plate_material, point.k)?;
            inv_f_slabs(point, d, *thickness, eps)
        }
        Geometry::FilledGap {
            thickness,
            gap_material,
        } => {
            let eps = eps_imag_axis(&config.plate_material, point.k)?;
            let eps_gap = eps_imag_axis(gap_material, point.k)?;
            inv_f_filled_gap(point, d, *thickness, eps, eps_gap)
        }
        Geometry::FilmInVacuum => {
            // A film of the plate material in vacuum is a filled gap with
            // absent slabs: t = 0, slab permittivity 1, gap permittivity
            // that of the film.
            let eps_film = eps_imag_axis(&config.plate_material, point.k)?;
            inv_f_filled_gap(point, d, Length::ZERO, 1.0, eps_film)
        }
        Geometry::ConductiveSheets { zeta } => inv_f_sheet(point, d, *zeta),
    }
}

/// Zero-frequency (k -> 0+) limit of the reflection factors (R_e, R_h) for a
/// configuration, given the static permittivities. In this limit the h-mode
/// contrast vanishes for every dielectric arrangement while the e-mode keeps
/// a finite reflection. The returned pair combines with the gap exponent
/// u = 2 kappa d as g = R e^{-u}/(1 - R e^{-u}).
pub fn static_reflections(
    geometry: &Geometry,
    kappa: WaveNumber,
    eps0: f64,
    eps_gap0: f64,
) -> (f64, f64) {
    match geometry {
        Geometry::IdealCasimir => (1.0, 1.0),
        Geometry::HalfSpaces => {
            let r = ((eps0 - 1.0) / (eps0 + 1.0)).powi(2);
            (r, 0.0)
        }
        Geometry::SlabSlab { thickness } => {
            let r1 = (eps0 - 1.0) / (eps0 + 1.0);
            let a = (-2.0 * kappa.inv_nm() * thickness.nm()).exp();
            let r = r1 * (1.0 - a) / (1.0 - r1 * r1 * a);
            (r * r, 0.0)
        }
        Geometry::FilledGap { thickness, .. } => {
            let r1 = (eps0 - eps_gap0) / (eps0 + eps_gap0);
            let r2 = (1.0 - eps0) / (1.0 + eps0);
            let a = (-2.0 * kappa.inv_nm() * thickness.nm()).exp();
            let r = (r1 + r2 * a) / (1.0 + r1 * r2 * a);
            (r * r, 0.0)
        }
        Geometry::FilmInVacuum => {
            let r = ((eps_gap0 - 1.0) / (eps_gap0 + 1.0)).powi(2);
            (r, 0.0)
        }
        Geometry::ConductiveSheets { .. } => (1.0, 0.0),
    }
}
