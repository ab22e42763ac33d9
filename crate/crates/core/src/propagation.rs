//! Underwater RF path loss.
//!
//! The total loss of a link is split into four dB terms: the free-space
//! spreading loss, the loss from entering a denser medium, the conductive
//! attenuation along the path and (optionally) the two-ray interference
//! loss caused by a reflecting boundary. All losses are positive dB and are
//! subtracted in [`received_power`].

use std::f64::consts::{LN_10, PI};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, invalid, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permeability, H/m.
pub const MU_0: f64 = 4.0e-7 * PI;
/// Vacuum permittivity, F/m. Derived from `MU_0` and `SPEED_OF_LIGHT` so that
/// a vacuum-like medium has exactly the free-space wavelength.
pub const EPSILON_0: f64 = 1.0 / (MU_0 * SPEED_OF_LIGHT * SPEED_OF_LIGHT);

/// dB per neper of field amplitude: 20·log10(e).
pub const DB_PER_NEPER: f64 = 20.0 / LN_10;

/// Electromagnetic description of a propagation medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumEM {
    /// Relative permittivity ε′/ε₀.
    pub eps_rel_real: f64,
    /// Relative loss term ε″/ε₀. When `None` it is taken as σ/(ωε₀).
    pub eps_rel_imag: Option<f64>,
    /// Conductivity σ in S/m.
    pub conductivity: f64,
    /// Relative permeability μ/μ₀.
    pub mu_rel: f64,
}

impl MediumEM {
    pub const fn vacuum() -> Self {
        Self {
            eps_rel_real: 1.0,
            eps_rel_imag: Some(0.0),
            conductivity: 0.0,
            mu_rel: 1.0,
        }
    }

    /// Non-conducting dielectric with relative permittivity `eps_rel`.
    pub const fn lossless(eps_rel: f64) -> Self {
        Self {
            eps_rel_real: eps_rel,
            eps_rel_imag: Some(0.0),
            conductivity: 0.0,
            mu_rel: 1.0,
        }
    }

    /// Conductive medium whose loss term follows from its conductivity.
    pub const fn conductive(eps_rel: f64, conductivity: f64) -> Self {
        Self {
            eps_rel_real: eps_rel,
            eps_rel_imag: None,
            conductivity,
            mu_rel: 1.0,
        }
    }

    /// Typical sea water: εr = 81, σ = 4 S/m.
    pub const fn sea_water() -> Self {
        Self::conductive(81.0, 4.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_rel_real.is_finite() && self.eps_rel_real > 0.0) {
            return Err(invalid(
                "eps_rel_real",
                format!("must be > 0, got {}", self.eps_rel_real),
            ));
        }
        if let Some(imag) = self.eps_rel_imag {
            ensure_non_negative("eps_rel_imag", imag)?;
        }
        ensure_non_negative("conductivity", self.conductivity)?;
        ensure_positive("mu_rel", self.mu_rel)
    }

    /// Absolute permittivity ε′ in F/m.
    pub fn permittivity(&self) -> f64 {
        self.eps_rel_real * EPSILON_0
    }

    /// Absolute permeability μ in H/m.
    pub fn permeability(&self) -> f64 {
        self.mu_rel * MU_0
    }

    /// Absolute loss term ε″ in F/m at angular frequency `omega`.
    pub fn loss_term(&self, omega: f64) -> f64 {
        match self.eps_rel_imag {
            Some(imag) => imag * EPSILON_0,
            None => self.conductivity / omega,
        }
    }
}

/// Acoustic impedance pair on either side of a reflecting boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcousticBoundary {
    /// Density of medium 1 in kg/m³.
    pub rho1: f64,
    /// Wave velocity in medium 1 in m/s.
    pub v1: f64,
    pub rho2: f64,
    pub v2: f64,
}

impl AcousticBoundary {
    /// Water (ρ = 1000, v = 1500) into air (ρ = 1.2, v = 343).
    pub const fn water_to_air() -> Self {
        Self {
            rho1: 1000.0,
            v1: 1500.0,
            rho2: 1.2,
            v2: 343.0,
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            rho1: self.rho2,
            v1: self.v2,
            rho2: self.rho1,
            v2: self.v1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("rho1", self.rho1)?;
        ensure_positive("v1", self.v1)?;
        ensure_positive("rho2", self.rho2)?;
        ensure_positive("v2", self.v2)
    }
}

/// Geometry of a single link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    /// Transmitter-receiver distance d in m.
    pub distance: f64,
    /// Vertical offset H to the reflecting surface in m.
    pub depth: f64,
    /// Carrier frequency f in Hz.
    pub frequency: f64,
}

impl LinkGeometry {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("distance", self.distance)?;
        ensure_non_negative("depth", self.depth)?;
        ensure_positive("frequency", self.frequency)
    }

    pub fn angular_frequency(&self) -> f64 {
        2.0 * PI * self.frequency
    }
}

/// Per-term path loss in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossBreakdown {
    pub l0_db: f64,
    pub lw_db: f64,
    pub latt_db: f64,
    pub lref_db: f64,
    pub total_db: f64,
}

impl PathLossBreakdown {
    fn from_parts(l0_db: f64, lw_db: f64, latt_db: f64, lref_db: f64) -> Self {
        Self {
            l0_db,
            lw_db,
            latt_db,
            lref_db,
            total_db: l0_db + lw_db + latt_db + lref_db,
        }
    }
}

/// Whether and how the surface reflection term enters the total.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum Reflection {
    #[default]
    Off,
    /// Include the term; the phase of Γ is 0 for Γ ≥ 0 and π for Γ < 0.
    On,
    /// Include the term with an explicit phase of Γ in radians.
    OnWithPhase(f64),
}

/// Phase constant β in rad/m.
pub fn phase_constant(medium: &MediumEM, angular_frequency: f64) -> Result<f64> {
    medium.validate()?;
    ensure_positive("angular_frequency", angular_frequency)?;
    let eps = medium.permittivity();
    let loss_tangent = medium.loss_term(angular_frequency) / eps;
    let mu_eps = medium.permeability() * eps;
    Ok(angular_frequency * (0.5 * mu_eps * ((1.0 + loss_tangent * loss_tangent).sqrt() + 1.0)).sqrt())
}

/// Attenuation constant α in Np/m.
pub fn attenuation_constant(medium: &MediumEM, angular_frequency: f64) -> Result<f64> {
    medium.validate()?;
    ensure_positive("angular_frequency", angular_frequency)?;
    let eps = medium.permittivity();
    let x = medium.conductivity / (angular_frequency * eps);
    // sqrt(1 + x²) - 1 rewritten to avoid cancellation for small x.
    let excess = x * x / ((1.0 + x * x).sqrt() + 1.0);
    let mu_eps = medium.permeability() * eps;
    Ok(angular_frequency * (0.5 * mu_eps * excess).sqrt())
}

/// Wavelength 2π/β inside the medium, in m.
pub fn medium_wavelength(medium: &MediumEM, frequency: f64) -> Result<f64> {
    ensure_positive("frequency", frequency)?;
    Ok(2.0 * PI / phase_constant(medium, 2.0 * PI * frequency)?)
}

/// Free-space spreading loss 20·log10(4πdf/c).
pub fn free_space_loss(distance: f64, frequency: f64) -> f64 {
    20.0 * (4.0 * PI * distance * frequency / SPEED_OF_LIGHT).log10()
}

/// Loss from the change of wavelength on entering the medium, 20·log10(λ₀/λ).
pub fn medium_transition_loss(medium: &MediumEM, frequency: f64) -> Result<f64> {
    let lambda_air = SPEED_OF_LIGHT / frequency;
    let lambda = medium_wavelength(medium, frequency)?;
    Ok(20.0 * (lambda_air / lambda).log10())
}

/// Conductive attenuation over `distance`, as a positive dB figure.
pub fn attenuation_loss(medium: &MediumEM, distance: f64, frequency: f64) -> Result<f64> {
    ensure_positive("distance", distance)?;
    ensure_positive("frequency", frequency)?;
    let alpha = attenuation_constant(medium, 2.0 * PI * frequency)?;
    Ok(DB_PER_NEPER * alpha * distance)
}

/// Reflection coefficient Γ = (ρ₂v₂ − ρ₁v₁)/(ρ₂v₂ + ρ₁v₁).
pub fn reflection_coefficient(boundary: &AcousticBoundary) -> f64 {
    let z1 = boundary.rho1 * boundary.v1;
    let z2 = boundary.rho2 * boundary.v2;
    (z2 - z1) / (z2 + z1)
}

/// Length of the surface-reflected path, 2·sqrt(H² + (d/2)²).
pub fn reflected_path_length(distance: f64, depth: f64) -> f64 {
    2.0 * depth.hypot(0.5 * distance)
}

/// Squared two-ray interference factor V².
pub fn reflection_v_squared(
    gamma_mag: f64,
    gamma_phase: f64,
    alpha: f64,
    wavelength: f64,
    distance: f64,
    depth: f64,
) -> f64 {
    let delta = reflected_path_length(distance, depth) - distance;
    let a = gamma_mag * (-alpha * delta).exp();
    1.0 + a * a - 2.0 * a * (PI - (gamma_phase - 2.0 * PI / wavelength * delta)).cos()
}

/// Reflection loss −10·log10(V) with V = sqrt(V²).
///
/// Negative values mean the reflected ray adds constructively.
pub fn reflection_loss(
    gamma_mag: f64,
    gamma_phase: f64,
    alpha: f64,
    wavelength: f64,
    distance: f64,
    depth: f64,
) -> Result<f64> {
    if !(0.0..1.0).contains(&gamma_mag) {
        return Err(invalid("gamma_mag", format!("must lie in [0, 1), got {gamma_mag}")));
    }
    ensure_positive("wavelength", wavelength)?;
    ensure_non_negative("alpha", alpha)?;
    ensure_positive("distance", distance)?;
    ensure_non_negative("depth", depth)?;
    let v_squared = reflection_v_squared(gamma_mag, gamma_phase, alpha, wavelength, distance, depth);
    assert!(v_squared > 0.0, "V² must stay positive for |Γ| < 1, got {v_squared}");
    Ok(-10.0 * v_squared.sqrt().log10())
}

/// Full path-loss decomposition of one link.
pub fn total_path_loss(
    geometry: &LinkGeometry,
    medium: &MediumEM,
    surface: &AcousticBoundary,
    reflection: Reflection,
) -> Result<PathLossBreakdown> {
    geometry.validate()?;
    medium.validate()?;
    let LinkGeometry {
        distance,
        depth,
        frequency,
    } = *geometry;

    let l0 = free_space_loss(distance, frequency);
    let lw = medium_transition_loss(medium, frequency)?;
    let latt = attenuation_loss(medium, distance, frequency)?;

    let lref = match reflection {
        Reflection::Off => 0.0,
        Reflection::On | Reflection::OnWithPhase(_) => {
            surface.validate()?;
            let gamma = reflection_coefficient(surface);
            let phase = match reflection {
                Reflection::OnWithPhase(phase) => phase,
                _ if gamma < 0.0 => PI,
                _ => 0.0,
            };
            let alpha = attenuation_constant(medium, geometry.angular_frequency())?;
            let wavelength = medium_wavelength(medium, frequency)?;
            reflection_loss(gamma.abs(), phase, alpha, wavelength, distance, depth)?
        }
    };

    Ok(PathLossBreakdown::from_parts(l0, lw, latt, lref))
}

/// Friis received power in dBm.
pub fn received_power(pt_dbm: f64, gt_db: f64, gr_db: f64, pathloss_db: f64) -> f64 {
    pt_dbm + gt_db + gr_db - pathloss_db
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts / 1e-3).log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEA_FREQ: f64 = 1.0e4;

    fn rel_err(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// Good-conductor closed form sqrt(π f μ σ).
    fn good_conductor(frequency: f64, mu: f64, sigma: f64) -> f64 {
        (PI * frequency * mu * sigma).sqrt()
    }

    #[test]
    fn lossless_phase_constant() {
        let omega = 2.0 * PI * SEA_FREQ;
        let beta = phase_constant(&MediumEM::lossless(81.0), omega).unwrap();
        assert!(rel_err(beta, 1.886_260_519_756_513_6e-3) < 1e-12);
        let doubled = phase_constant(&MediumEM::lossless(81.0), 2.0 * omega).unwrap();
        assert!(rel_err(doubled, 2.0 * beta) < 1e-14);
    }

    #[test]
    fn zero_permittivity_is_a_domain_error() {
        let medium = MediumEM {
            eps_rel_real: 0.0,
            ..MediumEM::vacuum()
        };
        assert!(phase_constant(&medium, 1.0).is_err());
    }

    #[test]
    fn sea_water_matches_good_conductor() {
        let omega = 2.0 * PI * SEA_FREQ;
        let oracle = good_conductor(SEA_FREQ, MU_0, 4.0);
        assert!((oracle - 0.397_383_530_631_844).abs() < 1e-12);
        let alpha = attenuation_constant(&MediumEM::sea_water(), omega).unwrap();
        let beta = phase_constant(&MediumEM::sea_water(), omega).unwrap();
        assert!(rel_err(alpha, oracle) < 0.01);
        assert!(rel_err(beta, oracle) < 0.01);
    }

    #[test]
    fn no_conductivity_means_no_attenuation() {
        let alpha = attenuation_constant(&MediumEM::lossless(81.0), 1e6).unwrap();
        assert_eq!(alpha, 0.0);
        assert_eq!(attenuation_loss(&MediumEM::lossless(81.0), 10.0, 1e6).unwrap(), 0.0);
    }

    #[test]
    fn free_space_reference_values() {
        assert!((free_space_loss(1.0, 2.4e9) - 40.052_008_056_115_49).abs() < 1e-9);
        assert!((free_space_loss(3.0, 2.4e9) - 49.594_433_150_508_74).abs() < 1e-9);
        let step = free_space_loss(2.0, 2.4e9) - free_space_loss(1.0, 2.4e9);
        assert!((step - 6.020_599_913_279_624).abs() < 1e-9);
    }

    #[test]
    fn transition_loss_reference_values() {
        let vac = medium_transition_loss(&MediumEM::vacuum(), 2.4e9).unwrap();
        assert!(vac.abs() < 1e-12, "{vac}");
        let water = medium_transition_loss(&MediumEM::lossless(81.0), 2.4e9).unwrap();
        assert!((water - 19.084_850_188_786_497).abs() < 1e-9);
        let denser = medium_transition_loss(&MediumEM::lossless(90.0), 2.4e9).unwrap();
        assert!(denser > water);
    }

    #[test]
    fn attenuation_loss_is_linear_in_distance() {
        // α = 0.397 Np/m over 3 m, evaluated as 20·α·d·log10(e).
        assert!((DB_PER_NEPER * 0.397 * 3.0 - 10.344_894_558_935_46).abs() < 1e-9);
        let one = attenuation_loss(&MediumEM::sea_water(), 1.0, SEA_FREQ).unwrap();
        let three = attenuation_loss(&MediumEM::sea_water(), 3.0, SEA_FREQ).unwrap();
        assert!(rel_err(three, 3.0 * one) < 1e-14);
    }

    #[test]
    fn reflection_coefficient_cases() {
        let gamma = reflection_coefficient(&AcousticBoundary::water_to_air());
        assert!((gamma + 0.999_451_350_549_409_2).abs() < 1e-12);
        let swapped = reflection_coefficient(&AcousticBoundary::water_to_air().swapped());
        assert_eq!(swapped, -gamma);
        let matched = AcousticBoundary {
            rho1: 2.0,
            v1: 3.0,
            rho2: 3.0,
            v2: 2.0,
        };
        assert_eq!(reflection_coefficient(&matched), 0.0);
    }

    #[test]
    fn reflected_path_cases() {
        assert_eq!(reflected_path_length(7.0, 0.0), 7.0);
        assert_eq!(reflected_path_length(6.0, 4.0), 10.0);
        assert!(reflected_path_length(6.0, 5.0) > 10.0);
    }

    #[test]
    fn reflection_loss_cases() {
        assert_eq!(reflection_loss(0.0, 0.3, 0.1, 1.0, 5.0, 2.0).unwrap(), 0.0);

        // H = 0, φ = 0, α = 0: V² = (1 + |Γ|)².
        let g = 0.6;
        let v2 = reflection_v_squared(g, 0.0, 0.0, 1.0, 5.0, 0.0);
        assert!((v2 - (1.0 + g) * (1.0 + g)).abs() < 1e-12);

        // d = 6, H = 4 → Δ = 4; λ = 8 gives Δ = λ/2 and V² = 0.25.
        let loss = reflection_loss(0.5, 0.0, 0.0, 8.0, 6.0, 4.0).unwrap();
        assert!((loss - 3.010_299_956_639_812).abs() < 1e-12);

        assert!(reflection_loss(1.0, 0.0, 0.0, 8.0, 6.0, 4.0).is_err());
        assert!(reflection_loss(0.5, 0.0, 0.0, 0.0, 6.0, 4.0).is_err());
    }

    #[test]
    fn vacuum_total_is_free_space_only() {
        let geom = LinkGeometry {
            distance: 3.0,
            depth: 1.0,
            frequency: 2.4e9,
        };
        let b = total_path_loss(&geom, &MediumEM::vacuum(), &AcousticBoundary::water_to_air(), Reflection::Off)
            .unwrap();
        assert_eq!(b.latt_db, 0.0);
        assert_eq!(b.lref_db, 0.0);
        assert!(b.lw_db.abs() < 1e-12);
        assert!((b.total_db - free_space_loss(3.0, 2.4e9)).abs() < 1e-12);
    }

    #[test]
    fn sea_water_total_matches_component_sum() {
        let geom = LinkGeometry {
            distance: 3.0,
            depth: 2.0,
            frequency: 2.4e9,
        };
        let medium = MediumEM::sea_water();
        let surface = AcousticBoundary::water_to_air();
        let b = total_path_loss(&geom, &medium, &surface, Reflection::On).unwrap();

        let omega = geom.angular_frequency();
        let l0 = free_space_loss(3.0, 2.4e9);
        let lw = medium_transition_loss(&medium, 2.4e9).unwrap();
        let latt = attenuation_loss(&medium, 3.0, 2.4e9).unwrap();
        let alpha = attenuation_constant(&medium, omega).unwrap();
        let lambda = 2.0 * PI / phase_constant(&medium, omega).unwrap();
        let lref = reflection_loss(reflection_coefficient(&surface).abs(), PI, alpha, lambda, 3.0, 2.0).unwrap();
        assert_eq!(b.l0_db, l0);
        assert_eq!(b.lw_db, lw);
        assert_eq!(b.latt_db, latt);
        assert_eq!(b.lref_db, lref);
        assert_eq!(b.total_db, l0 + lw + latt + lref);
    }

    #[test]
    fn invalid_geometry_is_rejected() {
        let geom = LinkGeometry {
            distance: 0.0,
            depth: 1.0,
            frequency: 1e4,
        };
        let err = total_path_loss(&geom, &MediumEM::sea_water(), &AcousticBoundary::water_to_air(), Reflection::Off);
        assert!(err.is_err());
    }

    #[test]
    fn friis_arithmetic() {
        assert!((received_power(30.0, 0.0, 0.0, 40.05) + 10.05).abs() < 1e-12);
        assert_eq!(received_power(12.5, 0.0, 0.0, 0.0), 12.5);
        let x = 7.25;
        assert!((received_power(20.0, 3.0 + x, 2.0, 50.0 + x) - received_power(20.0, 3.0, 2.0, 50.0)).abs() < 1e-12);
        assert!((watts_to_dbm(dbm_to_watts(17.0)) - 17.0).abs() < 1e-12);
    }
}
