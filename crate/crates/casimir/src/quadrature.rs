//! Zero-temperature pressure evaluation.
//!
//! The mode-sum pressure is a two-dimensional integral of the inverse
//! characteristic functions. Two independent parameterizations are provided:
//! the polar scheme (the production path) and a (p, k) scheme used as a
//! cross-check. Both share the composite Gauss panel machinery and the
//! closed-form exponential tail.

use rayon::prelude::*;

use crate::constants::unit_pressure_prefactor;
use crate::dispersion::{inverse_char_values, AxisPoint, InverseCharValue};
use crate::error::{CasimirError, Result};
use crate::gauss::{legendre_rule_on, Rule};
use crate::types::{Configuration, Geometry, Length, Pressure, WaveNumber};

/// Knobs of the deterministic quadrature. The defaults reproduce the
/// reference resolution: 600 angular nodes plus a 64-node strip below
/// theta0, and 5000 radial nodes split over the material's spectral
/// subdomains.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSettings {
    /// Angular nodes on (theta0, pi/2).
    pub n_theta: usize,
    /// Angular nodes on the small-angle strip (0, theta0).
    pub n_theta_strip: usize,
    /// Split angle between the strip and the main angular interval, rad.
    pub theta0: f64,
    /// Total radial nodes, distributed over the subdomain panels.
    pub n_chi: usize,
    /// Radial subdomain edges in 1/nm; defaults to the material's spectral
    /// edges (smallest collision wavenumber and every resonance).
    pub chi_subdomain_edges: Option<Vec<f64>>,
    /// Fixed radial cutoff; defaults to the rule 1 + 10 k_r,max + 1/d,
    /// raised automatically until the tail is below rel_tol.
    pub chi_max_override: Option<f64>,
    /// Target relative accuracy for tail truncation and the convergence
    /// check.
    pub rel_tol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            n_theta: 600,
            n_theta_strip: 64,
            theta0: 1e-2,
            n_chi: 5000,
            chi_subdomain_edges: None,
            chi_max_override: None,
            rel_tol: 1e-6,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if self.n_theta < 8 || self.n_chi < 64 {
            return Err(CasimirError::InvalidParameter(format!(
                "need n_theta >= 8 and n_chi >= 64, got {} and {}",
                self.n_theta, self.n_chi
            )));
        }
        if self.n_theta_strip < 1 {
            return Err(CasimirError::InvalidParameter(
                "need at least one strip node".into(),
            ));
        }
        if !(self.theta0 > 0.0 && self.theta0 < std::f64::consts::FRAC_PI_2) {
            return Err(CasimirError::InvalidParameter(format!(
                "theta0 must lie in (0, pi/2), got {}",
                self.theta0
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(CasimirError::InvalidParameter(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if let Some(chi_max) = self.chi_max_override {
            if !(chi_max > 0.0 && chi_max.is_finite()) {
                return Err(CasimirError::InvalidParameter(format!(
                    "chi_max must be positive, got {chi_max}"
                )));
            }
        }
        Ok(())
    }

    /// The default radial cutoff for a configuration.
    pub fn chi_max_rule(config: &Configuration) -> f64 {
        1.0 + 10.0 * config.plate_material.max_resonance() + 1.0 / config.gap.nm()
    }

    fn edges_for(&self, config: &Configuration) -> Vec<f64> {
        if let Some(edges) = &self.chi_subdomain_edges {
            return edges.clone();
        }
        let mut edges = config.plate_material.subdomain_edges();
        if let Geometry::FilledGap { gap_material, .. } = &config.geometry {
            edges.extend(gap_material.subdomain_edges());
            edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
            edges.dedup();
        }
        edges
    }
}

/// Outcome of a pressure evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureResult {
    pub pressure: Pressure,
    /// Closed-form tail contribution as a fraction of the total integral.
    pub tail_fraction: f64,
    /// Number of integrand evaluations spent.
    pub evaluations: u64,
    /// max(tail bound, change under radial-grid refinement), in N/m^2.
    pub est_error: f64,
}

/// Exact value of int_{chi0}^inf chi^2 e^{-2 chi d} (1/phi_e + 1/phi_h) dchi
/// for constant phi:
/// e^{-2 d chi0} (phi_e^-1 + phi_h^-1)(chi0^2/2d + chi0/2d^2 + 1/4d^3).
pub fn tail_closed_form(chi0: WaveNumber, d: Length, phi_e: f64, phi_h: f64) -> Result<f64> {
    d.require_positive_gap()?;
    debug_assert!(phi_e >= 1.0 && phi_h >= 1.0);
    let x = chi0.inv_nm();
    let dn = d.nm();
    let poly = x * x / (2.0 * dn) + x / (2.0 * dn * dn) + 1.0 / (4.0 * dn.powi(3));
    Ok((-2.0 * dn * x).exp() * (1.0 / phi_e + 1.0 / phi_h) * poly)
}

/// The small-angle limiting bracket values (phi_e, phi_h) as functions of
/// the static permittivity. The e-mode expression is singular where
/// 1 + eps0 - eps0^2 vanishes (eps0 at the golden ratio).
pub fn phi_limits_small_angle(eps0: f64) -> Result<(f64, f64)> {
    if !(eps0 >= 1.0 && eps0.is_finite()) {
        return Err(CasimirError::EpsAtMostOne { eps0 });
    }
    let s = (1.0 + eps0).sqrt();
    let phi_h = ((2.0 * s + 2.0 + eps0) / eps0).powi(2);
    let denominator = 1.0 + eps0 - eps0 * eps0;
    if denominator.abs() < 1e-6 {
        return Err(CasimirError::SmallAngleSingular { denominator });
    }
    let phi_e = ((1.0 + 2.0 * eps0 * s + eps0 + eps0 * eps0) / denominator).powi(2);
    Ok((phi_e, phi_h))
}

/// int_{chi0}^inf chi^3 e^{-2 d (chi - chi0)} dchi — the cubic-weight tail
/// factor multiplied by the (constant) reflection level at chi0.
fn cubic_tail_factor(chi0: f64, d: f64) -> f64 {
    chi0.powi(3) / (2.0 * d)
        + 3.0 * chi0 * chi0 / (4.0 * d * d)
        + 3.0 * chi0 / (4.0 * d.powi(3))
        + 3.0 / (8.0 * d.powi(4))
}

/// Reflection level per mode recovered from g: R e^{-u} = g/(1+g).
fn damped_reflection(g: InverseCharValue) -> (f64, f64) {
    (g.g_e / (1.0 + g.g_e), g.g_h / (1.0 + g.g_h))
}

/// Composite Gauss panels for the radial variable: subdomain edges from the
/// material, nodes per panel proportional to logarithmic width, geometric
/// sub-panels inside wide panels.
pub(crate) fn radial_panels(edges: &[f64], chi_max: f64, n_total: usize) -> Vec<Rule> {
    let mut bounds = vec![0.0];
    for &e in edges {
        if e > 0.0 && e < chi_max {
            bounds.push(e);
        }
    }
    bounds.push(chi_max);

    let log_width = |a: f64, b: f64| {
        let a_eff = if a > 0.0 { a } else { b / 100.0 };
        (b / a_eff).ln().max(0.1)
    };
    let total_weight: f64 = bounds.windows(2).map(|w| log_width(w[0], w[1])).sum();

    let mut rules = Vec::new();
    for w in bounds.windows(2) {
        let (a, b) = (w[0], w[1]);
        let share = (n_total as f64 * log_width(a, b) / total_weight).round() as usize;
        let sub_panels = (share.max(16) / 16).max(1);
        for j in 0..sub_panels {
            let (sa, sb) = if a > 0.0 && b / a > 10.0 {
                let ratio = b / a;
                (
                    a * ratio.powf(j as f64 / sub_panels as f64),
                    a * ratio.powf((j + 1) as f64 / sub_panels as f64),
                )
            } else {
                let h = (b - a) / sub_panels as f64;
                (a + j as f64 * h, a + (j + 1) as f64 * h)
            };
            rules.push(legendre_rule_on(16, sa, sb));
        }
    }
    rules
}

/// One angular node of the polar scheme: radial integral of
/// chi^3 (g_e + g_h) plus its closed-form tail beyond chi_max.
fn radial_integral_polar(
    config: &Configuration,
    theta: f64,
    panels: &[Rule],
    chi_max: f64,
) -> Result<(f64, f64, u64)> {
    let (cos_t, sin_t) = (theta.cos(), theta.sin());
    let d = config.gap.nm();
    let mut main = 0.0;
    let mut evaluations = 0u64;
    for rule in panels {
        for (&chi, &w) in rule.nodes.iter().zip(&rule.weights) {
            let point = AxisPoint::new(
                WaveNumber::new(chi * cos_t)?,
                WaveNumber::new(chi * sin_t)?,
            );
            let g = inverse_char_values(config, point)?;
            main += w * chi.powi(3) * g.sum();
            evaluations += 1;
        }
    }
    let edge_point = AxisPoint::new(
        WaveNumber::new(chi_max * cos_t)?,
        WaveNumber::new(chi_max * sin_t)?,
    );
    let g_edge = inverse_char_values(config, edge_point)?;
    let (re, rh) = damped_reflection(g_edge);
    let tail = (re + rh) * cubic_tail_factor(chi_max, d);
    evaluations += 1;
    Ok((main, tail, evaluations))
}

/// The polar double integral (main part, tail part, evaluation count), in
/// nm^-4, without the pressure prefactor.
fn polar_integral(
    config: &Configuration,
    settings: &QuadratureSettings,
    chi_max: f64,
    n_chi: usize,
) -> Result<(f64, f64, u64)> {
    let edges = settings.edges_for(config);
    let panels = radial_panels(&edges, chi_max, n_chi);

    let strip = legendre_rule_on(settings.n_theta_strip, 0.0, settings.theta0);
    let main_rule = legendre_rule_on(
        settings.n_theta,
        settings.theta0,
        std::f64::consts::FRAC_PI_2,
    );
    let theta_nodes: Vec<(f64, f64)> = strip
        .nodes
        .iter()
        .zip(&strip.weights)
        .chain(main_rule.nodes.iter().zip(&main_rule.weights))
        .map(|(&t, &w)| (t, w))
        .collect();

    let per_theta: Vec<(f64, f64, u64)> = theta_nodes
        .par_iter()
        .map(|&(theta, w)| {
            radial_integral_polar(config, theta, &panels, chi_max)
                .map(|(main, tail, n)| (w * theta.cos() * main, w * theta.cos() * tail, n))
        })
        .collect::<Result<_>>()?;

    // Sequential reduction in node order keeps the result bit-reproducible.
    let mut main = 0.0;
    let mut tail = 0.0;
    let mut evaluations = 0;
    for (m, t, n) in per_theta {
        main += m;
        tail += t;
        evaluations += n;
    }
    Ok((main, tail, evaluations))
}

/// The (p, k) double integral: outer over p in (1, inf) via s = 1/p, inner
/// over k with the same panel machinery (K0 = p k).
fn pk_integral(
    config: &Configuration,
    settings: &QuadratureSettings,
    chi_max: f64,
    n_chi: usize,
) -> Result<(f64, f64, u64)> {
    let edges = settings.edges_for(config);
    let panels = radial_panels(&edges, chi_max, n_chi);
    let d = config.gap.nm();
    let outer = legendre_rule_on(settings.n_theta, 0.0, 1.0);
    let outer_nodes: Vec<(f64, f64)> = outer
        .nodes
        .iter()
        .zip(&outer.weights)
        .map(|(&s, &w)| (s, w))
        .collect();

    let per_p: Vec<(f64, f64, u64)> = outer_nodes
        .par_iter()
        .map(|&(s, w)| -> Result<(f64, f64, u64)> {
            let p = 1.0 / s;
            let transverse_ratio = (p * p - 1.0).sqrt();
            let mut inner = 0.0;
            let mut evaluations = 0u64;
            for rule in &panels {
                for (&k, &wk) in rule.nodes.iter().zip(&rule.weights) {
                    let point = AxisPoint::new(
                        WaveNumber::new(k * transverse_ratio)?,
                        WaveNumber::new(k)?,
                    );
                    let g = inverse_char_values(config, point)?;
                    inner += wk * k.powi(3) * g.sum();
                    evaluations += 1;
                }
            }
            let edge_point = AxisPoint::new(
                WaveNumber::new(chi_max * transverse_ratio)?,
                WaveNumber::new(chi_max)?,
            );
            let g_edge = inverse_char_values(config, edge_point)?;
            let (re, rh) = damped_reflection(g_edge);
            let tail = (re + rh) * cubic_tail_factor(chi_max, p * d);
            evaluations += 1;
            // p^2 dp = s^-4 ds under s = 1/p.
            let weight = w / s.powi(4);
            Ok((weight * inner, weight * tail, evaluations))
        })
        .collect::<Result<_>>()?;

    let mut main = 0.0;
    let mut tail = 0.0;
    let mut evaluations = 0;
    for (m, t, n) in per_p {
        main += m;
        tail += t;
        evaluations += n;
    }
    Ok((main, tail, evaluations))
}

type SchemeFn = fn(&Configuration, &QuadratureSettings, f64, usize) -> Result<(f64, f64, u64)>;

fn pressure_with_scheme(
    config: &Configuration,
    settings: &QuadratureSettings,
    scheme: SchemeFn,
) -> Result<PressureResult> {
    config.gap.require_positive_gap()?;
    settings.validate()?;
    let prefactor = unit_pressure_prefactor(config.gap)?;

    let mut chi_max = settings
        .chi_max_override
        .unwrap_or_else(|| QuadratureSettings::chi_max_rule(config));
    let mut full = scheme(config, settings, chi_max, settings.n_chi)?;
    // Raise the cutoff until the tail bound drops below the tolerance.
    for _ in 0..8 {
        let total = full.0 + full.1;
        if total == 0.0 || full.1 <= settings.rel_tol * total {
            break;
        }
        chi_max *= 2.0;
        full = scheme(config, settings, chi_max, settings.n_chi)?;
    }
    let half = scheme(config, settings, chi_max, settings.n_chi / 2)?;

    let total = full.0 + full.1;
    let pressure = -prefactor * total;
    let pressure_half = -prefactor * (half.0 + half.1);
    let refinement_change = (pressure - pressure_half).abs();
    if pressure != 0.0 {
        let relative_change = refinement_change / pressure.abs();
        let limit = 100.0 * settings.rel_tol;
        if relative_change > limit {
            return Err(CasimirError::NonConvergent {
                relative_change,
                limit,
            });
        }
    }
    Ok(PressureResult {
        pressure: Pressure::new(pressure)?,
        tail_fraction: if total != 0.0 { full.1 / total } else { 0.0 },
        evaluations: full.2 + half.2,
        est_error: (prefactor * full.1).max(refinement_change),
    })
}

/// Zero-temperature pressure via the polar parameterization
/// (kappa, k) = chi (cos theta, sin theta). Negative means attraction.
pub fn pressure_zero_t(config: &Configuration, settings: &QuadratureSettings) -> Result<PressureResult> {
    pressure_with_scheme(config, settings, polar_integral)
}

/// Zero-temperature pressure via the (p, k) parameterization with K0 = p k.
/// Structurally independent cross-check of [`pressure_zero_t`].
pub fn pressure_p_k_form(
    config: &Configuration,
    settings: &QuadratureSettings,
) -> Result<PressureResult> {
    pressure_with_scheme(config, settings, pk_integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::permittivity::Material;

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

    fn casimir_magnitude(d_nm: f64) -> f64 {
        let c = PhysicalConstants::codata();
        std::f64::consts::PI.powi(2) * c.hbar_c() / (240.0 * (d_nm * 1e-9).powi(4))
    }

    #[test]
    fn ideal_plates_match_closed_form() {
        let config = Configuration::ideal(len(10.0));
        let result = pressure_zero_t(&config, &fast_settings()).unwrap();
        let expected = -casimir_magnitude(10.0);
        assert!(
            (result.pressure.n_per_m2() - expected).abs() / expected.abs() < 1e-4,
            "got {}, want {}",
            result.pressure.n_per_m2(),
            expected
        );
        assert!(result.tail_fraction < 1e-3);
        assert!(result.est_error < 1e-3 * expected.abs());
    }

    #[test]
    fn vacuum_plates_give_exact_zero() {
        let config = Configuration::half_spaces(Material::vacuum(), len(10.0));
        let result = pressure_zero_t(&config, &fast_settings()).unwrap();
        assert_eq!(result.pressure.n_per_m2(), 0.0);
        assert_eq!(result.tail_fraction, 0.0);
    }

    #[test]
    fn reference_halfspace_value_at_100nm() {
        let config = Configuration::half_spaces(Material::default_dielectric(), len(100.0));
        let result = pressure_zero_t(&config, &fast_settings()).unwrap();
        let expected = -5.1799174810;
        assert!(
            (result.pressure.n_per_m2() - expected).abs() / expected.abs() < 1e-5,
            "got {}",
            result.pressure.n_per_m2()
        );
        // Bounded by the perfect-conductor value.
        assert!(result.pressure.n_per_m2().abs() < casimir_magnitude(100.0));
    }

    #[test]
    fn dual_parameterizations_agree() {
        let config = Configuration::half_spaces(Material::default_dielectric(), len(10.0));
        let polar = pressure_zero_t(&config, &fast_settings()).unwrap();
        let pk = pressure_p_k_form(&config, &fast_settings()).unwrap();
        let rel = (polar.pressure.n_per_m2() - pk.pressure.n_per_m2()).abs()
            / polar.pressure.n_per_m2().abs();
        assert!(rel < 1e-4, "schemes differ by {rel:.3e}");
    }

    #[test]
    fn pk_form_on_ideal_plates() {
        let config = Configuration::ideal(len(10.0));
        let result = pressure_p_k_form(&config, &fast_settings()).unwrap();
        let expected = -casimir_magnitude(10.0);
        assert!((result.pressure.n_per_m2() - expected).abs() / expected.abs() < 1e-4);
    }

    #[test]
    fn gap_floor_is_an_error() {
        let config = Configuration::ideal(Length::ZERO);
        assert!(matches!(
            pressure_zero_t(&config, &QuadratureSettings::default()),
            Err(CasimirError::GapZero { .. })
        ));
    }

    #[test]
    fn settings_are_validated() {
        let mut settings = QuadratureSettings::default();
        settings.n_chi = 10;
        assert!(settings.validate().is_err());
        let mut settings = QuadratureSettings::default();
        settings.theta0 = 2.0;
        assert!(settings.validate().is_err());
        let mut settings = QuadratureSettings::default();
        settings.rel_tol = 0.0;
        assert!(settings.validate().is_err());
    }

    #[test]
    fn tail_closed_form_gamma_identity() {
        // phi = 1 both modes, chi0 = 0, d = 1: twice the integral
        // int_0^inf chi^2 e^{-2 chi} dchi = 1/4.
        let value = tail_closed_form(WaveNumber::ZERO, len(1.0), 1.0, 1.0).unwrap();
        assert_eq!(value, 0.5);
    }

    #[test]
    fn tail_closed_form_matches_numeric_quadrature() {
        for &(chi0, d, phi_e, phi_h) in
            &[(0.3, 2.0, 1.9, 1.94), (1.5, 10.0, 1.0, 33.97), (0.05, 40.0, 3.0, 2.0)]
        {
            let closed =
                tail_closed_form(WaveNumber::new(chi0).unwrap(), len(d), phi_e, phi_h).unwrap();
            let upper = chi0 + 30.0 / d;
            let numeric = crate::gauss::integrate(200, chi0, upper, |chi| {
                chi * chi * (-2.0 * chi * d).exp() * (1.0 / phi_e + 1.0 / phi_h)
            });
            assert!(
                (closed - numeric).abs() / closed < 1e-10,
                "chi0={chi0} d={d}: {closed} vs {numeric}"
            );
        }
    }

    #[test]
    fn tail_negligible_beyond_ten_over_d() {
        let d = len(5.0);
        let value = tail_closed_form(WaveNumber::new(2.0).unwrap(), d, 1.0, 1.0).unwrap();
        assert!(value < (-20.0f64).exp() * (2.0 * 4.0 / 10.0 + 2.0 / 50.0 + 1.0 / 500.0) * 2.1);
    }

    #[test]
    fn small_angle_limits() {
        let (phi_e, phi_h) = phi_limits_small_angle(37.9809027778).unwrap();
        assert!((phi_h - 1.90834025).abs() < 1e-6, "phi_h = {phi_h}");
        assert!((phi_e - 1.94168922).abs() < 1e-6, "phi_e = {phi_e}");
        // Perfect conductor: h-bracket tends to 1.
        let (_, phi_h_inf) = phi_limits_small_angle(1e12).unwrap();
        assert!((phi_h_inf - 1.0).abs() < 1e-5);
        // Dilute limit of the h-bracket.
        let (_, phi_h_one) = phi_limits_small_angle(1.0).unwrap();
        assert!((phi_h_one - 33.97).abs() < 0.01);
    }

    #[test]
    fn small_angle_singularity_is_reported() {
        let golden = 0.5 * (1.0 + 5f64.sqrt());
        assert!(matches!(
            phi_limits_small_angle(golden),
            Err(CasimirError::SmallAngleSingular { .. })
        ));
        assert!(phi_limits_small_angle(1.63).is_ok());
    }

    #[test]
    fn pressure_decreases_with_distance() {
        let settings = QuadratureSettings {
            n_theta: 100,
            n_chi: 1000,
            ..QuadratureSettings::default()
        };
        let material = Material::default_dielectric();
        let mut last = f64::INFINITY;
        for d in [2.0, 8.0, 32.0] {
            let config = Configuration::half_spaces(material.clone(), len(d));
            let p = pressure_zero_t(&config, &settings).unwrap().pressure.n_per_m2();
            assert!(p < 0.0);
            assert!(p.abs() < last, "|P| not decreasing at d = {d}");
            last = p.abs();
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let config = Configuration::half_spaces(Material::default_dielectric(), len(10.0));
        let settings = QuadratureSettings {
            n_theta: 64,
            n_chi: 512,
            ..QuadratureSettings::default()
        };
        let a = pressure_zero_t(&config, &settings).unwrap();
        let b = pressure_zero_t(&config, &settings).unwrap();
        assert_eq!(a.pressure.n_per_m2(), b.pressure.n_per_m2());
    }
}
