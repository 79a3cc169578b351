//! Finite-temperature pressure via the Matsubara sum, plus the classical
//! high-temperature limit and the exponentially small low-temperature
//! correction.

use rayon::prelude::*;

use crate::constants::{unit_pressure_prefactor, PhysicalConstants};
use crate::dispersion::{inverse_char_values, static_reflections, AxisPoint};
use crate::error::{CasimirError, Result};
use crate::gauss::legendre_rule_on;
use crate::permittivity::eps_static;
use crate::quadrature::{radial_panels, PressureResult, QuadratureSettings};
use crate::types::{Configuration, Geometry, Pressure, WaveNumber};

/// Absolute temperature in kelvin.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Temperature(f64);

impl Temperature {
    pub fn new(kelvin: f64) -> Result<Self> {
        if !kelvin.is_finite() || kelvin < 0.0 {
            return Err(CasimirError::InvalidParameter(format!(
                "temperature must be finite and non-negative, got {kelvin}"
            )));
        }
        Ok(Self(kelvin))
    }

    pub const ZERO: Temperature = Temperature(0.0);

    pub fn kelvin(self) -> f64 {
        self.0
    }
}

/// How the n = 0 Matsubara term treats a free-carrier material whose
/// permittivity diverges at zero frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroFreqConvention {
    /// Use the static permittivity; a free-carrier term must carry a binding
    /// cutoff k_s, otherwise the term is undefined and an error is raised.
    #[default]
    Regularized,
    /// Treat the layers as perfect conductors at zero frequency
    /// (eps(0) -> infinity in the e-mode reflection).
    Conductor,
}

/// The discrete imaginary-frequency grid k_n = 2 pi n k_B T / (hbar c),
/// n = 0..n_max, in 1/nm.
#[derive(Debug, Clone, PartialEq)]
pub struct MatsubaraGrid {
    pub temperature: Temperature,
    pub k_n: Vec<WaveNumber>,
    pub n_max: usize,
}

impl MatsubaraGrid {
    /// Grid for a given gap: n_max is the smallest n whose round-trip
    /// exponent 2 k_n d exceeds 40, so the first omitted term is below
    /// e^{-40} of the leading scale.
    pub fn build(temperature: Temperature, gap_nm: f64) -> Result<Self> {
        Self::build_with(temperature, gap_nm, &PhysicalConstants::codata())
    }

    pub(crate) fn build_with(
        temperature: Temperature,
        gap_nm: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        if temperature.kelvin() <= 0.0 {
            return Err(CasimirError::InvalidParameter(
                "Matsubara grid needs T > 0".into(),
            ));
        }
        if gap_nm <= 0.0 {
            return Err(CasimirError::GapZero {
                min_nm: crate::types::MIN_GAP_NM,
            });
        }
        let k1 = Self::first_wavenumber_with(temperature, constants);
        let n_max = (20.0 / (k1 * gap_nm)).ceil() as usize;
        let k_n = (0..=n_max)
            .map(|n| WaveNumber::new(n as f64 * k1))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            temperature,
            k_n,
            n_max,
        })
    }

    /// k_1 = 2 pi k_B T / (hbar c) in 1/nm.
    pub fn first_wavenumber(temperature: Temperature) -> f64 {
        Self::first_wavenumber_with(temperature, &PhysicalConstants::codata())
    }

    fn first_wavenumber_with(temperature: Temperature, constants: &PhysicalConstants) -> f64 {
        2.0 * std::f64::consts::PI * constants.k_b * temperature.kelvin() / constants.hbar_c()
            * 1e-9
    }
}

/// Mean energy of a quantum oscillator at angular frequency omega (1/s):
/// (hbar omega / 2) coth(hbar omega / 2 k_B T). Even in omega; the T = 0
/// branch is the zero-point energy, the omega = 0 branch the classical k_B T.
pub fn mean_oscillator_energy(omega: f64, temperature: Temperature) -> f64 {
    let constants = PhysicalConstants::codata();
    let omega = omega.abs();
    let zero_point = 0.5 * constants.hbar * omega;
    if temperature.kelvin() == 0.0 {
        return zero_point;
    }
    let x = zero_point / (constants.k_b * temperature.kelvin());
    if x > 20.0 {
        zero_point
    } else if x < 1e-8 {
        constants.k_b * temperature.kelvin()
    } else {
        zero_point / x.tanh()
    }
}

/// Static permittivities (plate, gap medium) under a zero-frequency
/// convention. The conductor convention substitutes a huge but finite value
/// so the reflection formulas evaluate to their eps -> infinity limits.
fn static_eps(config: &Configuration, convention: ZeroFreqConvention) -> Result<(f64, f64)> {
    let eps_gap0 = match &config.geometry {
        Geometry::FilledGap { gap_material, .. } => {
            eps_static(gap_material).map_err(zero_freq_error)?
        }
        Geometry::FilmInVacuum => match convention {
            ZeroFreqConvention::Regularized => {
                eps_static(&config.plate_material).map_err(zero_freq_error)?
            }
            ZeroFreqConvention::Conductor => 1e30,
        },
        _ => 1.0,
    };
    let eps0 = match &config.geometry {
        Geometry::IdealCasimir | Geometry::ConductiveSheets { .. } | Geometry::FilmInVacuum => 1.0,
        _ => match convention {
            ZeroFreqConvention::Regularized => {
                eps_static(&config.plate_material).map_err(zero_freq_error)?
            }
            ZeroFreqConvention::Conductor => 1e30,
        },
    };
    Ok((eps0, eps_gap0))
}

fn zero_freq_error(err: CasimirError) -> CasimirError {
    match err {
        CasimirError::DrudeAtZero => CasimirError::ZeroFreqUndefined,
        other => other,
    }
}

/// Transverse panels for the term integrals: geometric spacing from well
/// below the decay scale 1/d out to where the exponent reaches 60.
fn transverse_panels(d: f64, n_panels: usize) -> Vec<crate::gauss::Rule> {
    let lo = 1e-4 / d;
    let hi = 30.0 / d;
    let mut rules = Vec::with_capacity(n_panels + 1);
    rules.push(legendre_rule_on(64, 0.0, lo));
    for j in 0..n_panels {
        let a = lo * (hi / lo).powf(j as f64 / n_panels as f64);
        let b = lo * (hi / lo).powf((j + 1) as f64 / n_panels as f64);
        rules.push(legendre_rule_on(64, a, b));
    }
    rules
}

/// The n = 0 term integral: int_0^inf kappa^2 (g_e + g_h) dkappa with the
/// zero-frequency reflection limits.
fn zero_term_integral(
    config: &Configuration,
    convention: ZeroFreqConvention,
    n_panels: usize,
) -> Result<(f64, u64)> {
    let (eps0, eps_gap0) = static_eps(config, convention)?;
    let d = config.gap.nm();
    let mut total = 0.0;
    let mut evaluations = 0u64;
    for rule in transverse_panels(d, n_panels) {
        for (&kappa, &w) in rule.nodes.iter().zip(&rule.weights) {
            let (r_e, r_h) = static_reflections(
                &config.geometry,
                WaveNumber::new(kappa)?,
                eps0,
                eps_gap0,
            );
            let e = (-2.0 * kappa * d).exp();
            let g = r_e * e / (1.0 - r_e * e) + r_h * e / (1.0 - r_h * e);
            total += w * kappa * kappa * g;
            evaluations += 1;
        }
    }
    Ok((total, evaluations))
}

/// One n >= 1 term: int_0^inf kappa K0 (g_e + g_h) dkappa at k = k_n.
fn term_integral(config: &Configuration, k_n: f64, n_panels: usize) -> Result<(f64, u64)> {
    let d = config.gap.nm();
    let mut total = 0.0;
    let mut evaluations = 0u64;
    for rule in transverse_panels(d, n_panels) {
        for (&kappa, &w) in rule.nodes.iter().zip(&rule.weights) {
            let point = AxisPoint::new(WaveNumber::new(kappa)?, WaveNumber::new(k_n)?);
            let g = inverse_char_values(config, point)?;
            total += w * kappa * point.k0() * g.sum();
            evaluations += 1;
        }
    }
    Ok((total, evaluations))
}

/// Finite-temperature pressure as the Matsubara sum
/// P = -(k_B T / pi) [ I_0/2 + sum_{n>=1} I_n ], I_n the term integrals.
/// Tends to the zero-temperature integral as T -> 0 and to the classical
/// n = 0 term at high T.
pub fn pressure_finite_t(
    config: &Configuration,
    temperature: Temperature,
    settings: &QuadratureSettings,
) -> Result<PressureResult> {
    pressure_finite_t_with(config, temperature, settings, ZeroFreqConvention::default())
}

pub fn pressure_finite_t_with(
    config: &Configuration,
    temperature: Temperature,
    settings: &QuadratureSettings,
    convention: ZeroFreqConvention,
) -> Result<PressureResult> {
    config.gap.require_positive_gap()?;
    settings.validate()?;
    if temperature.kelvin() <= 0.0 {
        return Err(CasimirError::InvalidParameter(
            "finite-temperature pressure needs T > 0; use the zero-temperature integral instead"
                .into(),
        ));
    }
    let constants = PhysicalConstants::codata();
    let grid = MatsubaraGrid::build(temperature, config.gap.nm())?;
    let n_panels = 40;

    let (i0, ev0) = zero_term_integral(config, convention, n_panels)?;
    let terms: Vec<(f64, u64)> = grid.k_n[1..]
        .par_iter()
        .map(|k_n| term_integral(config, k_n.inv_nm(), n_panels))
        .collect::<Result<_>>()?;

    let mut sum = 0.5 * i0;
    let mut evaluations = ev0;
    let mut last_term = 0.5 * i0;
    for (t, n) in terms {
        sum += t;
        last_term = t;
        evaluations += n;
    }
    // k_B T / pi, with the nm^-3 -> m^-3 conversion.
    let prefactor = constants.k_b * temperature.kelvin() / std::f64::consts::PI * 1e27;
    let pressure = -prefactor * sum;
    Ok(PressureResult {
        pressure: Pressure::new(pressure)?,
        tail_fraction: if sum != 0.0 { last_term / sum } else { 0.0 },
        evaluations,
        est_error: prefactor * last_term,
    })
}

/// Classical (high-temperature) limit: only the n = 0 Matsubara term
/// survives, P = -(k_B T / 2 pi) I_0. Linear in T.
pub fn pressure_high_t(
    config: &Configuration,
    temperature: Temperature,
    settings: &QuadratureSettings,
) -> Result<PressureResult> {
    pressure_high_t_with(config, temperature, settings, ZeroFreqConvention::default())
}

pub fn pressure_high_t_with(
    config: &Configuration,
    temperature: Temperature,
    settings: &QuadratureSettings,
    convention: ZeroFreqConvention,
) -> Result<PressureResult> {
    config.gap.require_positive_gap()?;
    settings.validate()?;
    if temperature.kelvin() <= 0.0 {
        return Err(CasimirError::InvalidParameter(
            "high-temperature limit needs T > 0".into(),
        ));
    }
    let constants = PhysicalConstants::codata();
    let (i0, ev) = zero_term_integral(config, convention, 40)?;
    let (i0_fine, ev_fine) = zero_term_integral(config, convention, 80)?;
    let prefactor =
        constants.k_b * temperature.kelvin() / (2.0 * std::f64::consts::PI) * 1e27;
    let pressure = -prefactor * i0_fine;
    Ok(PressureResult {
        pressure: Pressure::new(pressure)?,
        tail_fraction: 0.0,
        evaluations: ev + ev_fine,
        est_error: prefactor * (i0_fine - i0).abs(),
    })
}

/// Additive low-temperature correction from coth(x) ~ 1 + 2 e^{-2x}:
/// Delta P = -(hbar c / pi^2) int_1^inf p^2 dp int_0^inf k^3 e^{-beta k}
/// (g_e + g_h) dk with beta = hbar c / (k_B T) in nm. Valid while
/// k_B T << hbar c / d; P(d, T) ~ P(d, 0) + Delta P.
pub fn pressure_low_t_correction(
    config: &Configuration,
    temperature: Temperature,
    settings: &QuadratureSettings,
) -> Result<Pressure> {
    config.gap.require_positive_gap()?;
    settings.validate()?;
    if temperature.kelvin() == 0.0 {
        return Ok(Pressure::new(0.0)?);
    }
    let constants = PhysicalConstants::codata();
    // Thermal wavelength in nm; huge at low T, so the k integrand is cut by
    // e^{-beta k} long before the material structure matters.
    let beta = constants.hbar_c() / (constants.k_b * temperature.kelvin()) * 1e9;
    let d = config.gap.nm();
    let k_max = 80.0 / (beta + 2.0 * d);
    let edges = config.plate_material.subdomain_edges();
    let panels = radial_panels(&edges, k_max, settings.n_chi.min(2000));

    let outer = legendre_rule_on(settings.n_theta.min(200), 0.0, 1.0);
    let outer_nodes: Vec<(f64, f64)> = outer
        .nodes
        .iter()
        .zip(&outer.weights)
        .map(|(&s, &w)| (s, w))
        .collect();
    let per_p: Vec<f64> = outer_nodes
        .par_iter()
        .map(|&(s, w)| -> Result<f64> {
            let p = 1.0 / s;
            let transverse_ratio = (p * p - 1.0).sqrt();
            let mut inner = 0.0;
            for rule in &panels {
                for (&k, &wk) in rule.nodes.iter().zip(&rule.weights) {
                    let point = AxisPoint::new(
                        WaveNumber::new(k * transverse_ratio)?,
                        WaveNumber::new(k)?,
                    );
                    let g = inverse_char_values(config, point)?;
                    inner += wk * k.powi(3) * (-beta * k).exp() * g.sum();
                }
            }
            Ok(w / s.powi(4) * inner)
        })
        .collect::<Result<_>>()?;
    let integral: f64 = per_p.iter().sum();
    // 2x the zero-temperature prefactor: hbar c / pi^2 instead of /2 pi^2.
    let prefactor = 2.0 * unit_pressure_prefactor(config.gap)?;
    Pressure::new(-prefactor * integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permittivity::{Material, OscillatorTerm, PermittivityModel};
    use crate::quadrature::pressure_zero_t;
    use crate::types::Length;

    fn len(nm: f64) -> Length {
        Length::new(nm).unwrap()
    }

    fn fast_settings() -> QuadratureSettings {
        QuadratureSettings {
            n_theta: 200,
            n_chi: 2000,
            ..QuadratureSettings::default()
        }
    }

    #[test]
    fn oscillator_energy_branches() {
        let zero_point = mean_oscillator_energy(1e15, Temperature::ZERO);
        assert!((zero_point - 5.272859085e-20).abs() / zero_point < 1e-9);
        let classical = mean_oscillator_energy(1.0, Temperature::new(300.0).unwrap());
        assert!((classical - 4.141947e-21).abs() / classical < 1e-6);
        for &(omega, t) in &[(3.2e13, 77.0), (1e15, 300.0), (5e11, 4.2)] {
            let temp = Temperature::new(t).unwrap();
            assert_eq!(
                mean_oscillator_energy(omega, temp),
                mean_oscillator_energy(-omega, temp)
            );
            // Between the zero-point and zero-point + classical energies.
            let theta = mean_oscillator_energy(omega, temp);
            assert!(theta >= mean_oscillator_energy(omega, Temperature::ZERO));
        }
    }

    #[test]
    fn matsubara_grid_shape() {
        let grid = MatsubaraGrid::build(Temperature::new(300.0).unwrap(), 10.0).unwrap();
        let k1 = grid.k_n[1].inv_nm();
        assert!((k1 - 8.2318e-4).abs() / k1 < 1e-4, "k1 = {k1}");
        assert_eq!(grid.k_n[0].inv_nm(), 0.0);
        assert!(grid.k_n.windows(2).all(|w| w[0].inv_nm() < w[1].inv_nm()));
        // First omitted exponent exceeds 40.
        assert!(2.0 * grid.k_n[grid.n_max].inv_nm() * 10.0 > 40.0);
        assert!(2.0 * grid.k_n[grid.n_max - 1].inv_nm() * 10.0 <= 40.0 + 2.0 * k1 * 10.0);
    }

    #[test]
    fn matsubara_matches_reference_at_room_temperature() {
        let config = Configuration::half_spaces(Material::default_dielectric(), len(100.0));
        let result =
            pressure_finite_t(&config, Temperature::new(300.0).unwrap(), &fast_settings())
                .unwrap();
        let expected = -5.180404;
        assert!(
            (result.pressure.n_per_m2() - expected).abs() / expected.abs() < 1e-3,
            "got {}",
            result.pressure.n_per_m2()
        );
    }

    #[test]
    fn zero_term_is_finite_and_below_first_term() {
        let config = Configuration::half_spaces(Material::default_dielectric(), len(10.0));
        let (i0, _) = zero_term_integral(&config, ZeroFreqConvention::Regularized, 40).unwrap();
        let grid = MatsubaraGrid::build(Temperature::new(300.0).unwrap(), 10.0).unwrap();
        let (i1, _) = term_integral(&config, grid.k_n[1].inv_nm(), 40).unwrap();
        assert!(i0.is_finite() && i0 > 0.0);
        assert!(0.5 * i0 <= i1);
    }

    #[test]
    fn unbound_drude_zero_term_is_rejected_then_allowed_by_convention() {
        let material = Material::new(
            Material::default_dielectric().bound_terms().to_vec(),
            Some(OscillatorTerm::new(0.05, 0.0, 1e-6).unwrap()),
            None,
            PermittivityModel::SmallDensity,
        )
        .unwrap();
        let config = Configuration::half_spaces(material, len(10.0));
        let t = Temperature::new(300.0).unwrap();
        assert!(matches!(
            pressure_finite_t(&config, t, &fast_settings()),
            Err(CasimirError::ZeroFreqUndefined)
        ));
        let conductor =
            pressure_finite_t_with(&config, t, &fast_settings(), ZeroFreqConvention::Conductor)
                .unwrap();
        assert!(conductor.pressure.n_per_m2() < 0.0);
    }

    #[test]
    fn high_t_is_linear_in_temperature() {
        let config = Configuration::half_spaces(Material::default_dielectric(), len(10.0));
        let settings = fast_settings();
        let p1 = pressure_high_t(&config, Temperature::new(300.0).unwrap(), &settings).unwrap();
        let p2 = pressure_high_t(&config, Temperature::new(600.0).unwrap(), &settings).unwrap();
        assert!(
            (p2.pressure.n_per_m2() - 2.0 * p1.pressure.n_per_m2()).abs()
                < 1e-12 * p1.pressure.n_per_m2().abs()
        );
        let vacuum = Configuration::half_spaces(Material::vacuum(), len(10.0));
        let pv = pressure_high_t(&vacuum, Temperature::new(300.0).unwrap(), &settings).unwrap();
        assert_eq!(pv.pressure.n_per_m2(), 0.0);
    }

    #[test]
    fn matsubara_approaches_classical_limit_when_hot() {
        // k_B T d / (hbar c) >> 1: d = 10^5 nm at 600 K.
        let config = Configuration::half_spaces(Material::default_dielectric(), len(1e5));
        let t = Temperature::new(600.0).unwrap();
        let settings = fast_settings();
        let full = pressure_finite_t(&config, t, &settings).unwrap();
        let classical = pressure_high_t(&config, t, &settings).unwrap();
        let ratio = full.pressure.n_per_m2() / classical.pressure.n_per_m2();
        assert!((ratio - 1.0).abs() < 0.05, "ratio = {ratio}");
    }

    #[test]
    fn low_t_correction_sign_and_consistency() {
        let config = Configuration::half_spaces(Material::default_dielectric(), len(10.0));
        let t = Temperature::new(300.0).unwrap();
        let settings = fast_settings();
        let correction = pressure_low_t_correction(&config, t, &settings).unwrap();
        assert!(correction.n_per_m2() < 0.0);
        let zero_t = pressure_zero_t(&config, &settings).unwrap();
        let corrected = zero_t.pressure.n_per_m2() + correction.n_per_m2();
        let full = pressure_finite_t(&config, t, &settings).unwrap();
        let rel = (corrected - full.pressure.n_per_m2()).abs() / full.pressure.n_per_m2().abs();
        assert!(rel < 0.02, "corrected vs Matsubara differ by {rel:.3e}");
        let cold = pressure_low_t_correction(&config, Temperature::new(1.0).unwrap(), &settings)
            .unwrap();
        // The correction shrinks with T; at 1 K it is far below the 300 K one.
        assert!(cold.n_per_m2() < 0.0);
        assert!(cold.n_per_m2().abs() < 0.05 * correction.n_per_m2().abs());
    }
}
