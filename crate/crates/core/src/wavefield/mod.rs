//! Received fields for a two-dimensional cylindrical-wave link.
//!
//! All power gains are relative to the field at 1 m from the source, so a
//! transmitter-to-receiver gain of `1/d` means the plain cylindrical law. The
//! reflecting surface is a segment `[-L, L]` on the line `y = 0`, the
//! transmitter and receiver sit above it.
//!
//! The surface field is a Huygens line integral of secondary cylindrical
//! wavelets,
//!
//! ```text
//! E_ris = sqrt(k / 2π) ∫ E0 / sqrt(k r_s(x)) · o(x) · e^{iΦ(x)} · e^{ik(r_s(x) + r_d(x))} / sqrt(r_d(x)) dx
//! ```
//!
//! with `r_s`, `r_d` the distances from the surface point to the transmitter
//! and receiver, `Φ` the programmed reflection phase and `o` the obliquity
//! envelope. The mirror and diffuser formulas are its stationary-phase and
//! far-zone limits.

mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use quadrature::{ConvergenceCertificate, QuadratureSettings};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Distance at which the reference SNR is quoted, in meters.
pub const REFERENCE_DISTANCE: f64 = 1.0;

/// Carrier and calibration of a link.
///
/// The field normalization is fixed at `E0² = k · 1 m`, so `|E(1 m)|² = 1` and
/// the whole power budget lives in the reference SNR `P/N0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    carrier_frequency: f64,
    reference_snr_db: f64,
    wavelength: f64,
    wavenumber: f64,
}

impl LinkBudget {
    pub fn new(carrier_frequency: f64, reference_snr_db: f64) -> Result<Self> {
        if !(carrier_frequency.is_finite() && carrier_frequency > 0.0) {
            return Err(Error::domain(
                "carrier_frequency",
                format!("must be positive and finite, got {carrier_frequency}"),
            ));
        }
        if !reference_snr_db.is_finite() {
            return Err(Error::domain(
                "reference_snr_db",
                format!("must be finite, got {reference_snr_db}"),
            ));
        }
        let wavelength = SPEED_OF_LIGHT / carrier_frequency;
        Ok(Self {
            carrier_frequency,
            reference_snr_db,
            wavelength,
            wavenumber: 2.0 * PI / wavelength,
        })
    }

    pub fn carrier_frequency(&self) -> f64 {
        self.carrier_frequency
    }

    pub fn reference_snr_db(&self) -> f64 {
        self.reference_snr_db
    }

    /// `P/N0` as a linear ratio.
    pub fn reference_snr(&self) -> f64 {
        10f64.powf(self.reference_snr_db / 10.0)
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    /// `E0²`.
    pub fn field_norm_sq(&self) -> f64 {
        self.wavenumber * REFERENCE_DISTANCE
    }
}

/// Placement of transmitter and receiver around a surface (or relay) at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    d_sr: f64,
    d_rd: f64,
    theta_i: f64,
    theta_r: f64,
}

impl LinkGeometry {
    /// Distances in meters, angles in radians from the surface normal.
    pub fn new(d_sr: f64, d_rd: f64, theta_i: f64, theta_r: f64) -> Result<Self> {
        check_distance("d_sr", d_sr)?;
        check_distance("d_rd", d_rd)?;
        check_angle("theta_i", theta_i)?;
        check_angle("theta_r", theta_r)?;
        Ok(Self {
            d_sr,
            d_rd,
            theta_i,
            theta_r,
        })
    }

    /// Transmitter and receiver both at `d0` from the origin.
    pub fn equidistant(d0: f64, theta_i: f64, theta_r: f64) -> Result<Self> {
        Self::new(d0, d0, theta_i, theta_r)
    }

    pub fn from_degrees(d_sr: f64, d_rd: f64, theta_i_deg: f64, theta_r_deg: f64) -> Result<Self> {
        Self::new(
            d_sr,
            d_rd,
            theta_i_deg.to_radians(),
            theta_r_deg.to_radians(),
        )
    }

    pub fn d_sr(&self) -> f64 {
        self.d_sr
    }

    pub fn d_rd(&self) -> f64 {
        self.d_rd
    }

    pub fn theta_i(&self) -> f64 {
        self.theta_i
    }

    pub fn theta_r(&self) -> f64 {
        self.theta_r
    }

    pub fn tx_position(&self) -> [f64; 2] {
        [
            -self.d_sr * self.theta_i.sin(),
            self.d_sr * self.theta_i.cos(),
        ]
    }

    pub fn rx_position(&self) -> [f64; 2] {
        [
            self.d_rd * self.theta_r.sin(),
            self.d_rd * self.theta_r.cos(),
        ]
    }

    /// Distance from the transmitter to the surface point `(x, 0)`.
    pub fn source_range(&self, x: f64) -> f64 {
        let [px, py] = self.tx_position();
        (x - px).hypot(py)
    }

    /// Distance from the surface point `(x, 0)` to the receiver.
    pub fn destination_range(&self, x: f64) -> f64 {
        let [px, py] = self.rx_position();
        (x - px).hypot(py)
    }

    /// The link with transmitter and receiver exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            d_sr: self.d_rd,
            d_rd: self.d_sr,
            theta_i: self.theta_r,
            theta_r: self.theta_i,
        }
    }
}

fn check_distance(field: &'static str, d: f64) -> Result<()> {
    if d.is_finite() && d > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(
            field,
            format!("must be a positive distance, got {d}"),
        ))
    }
}

fn check_angle(field: &'static str, theta: f64) -> Result<()> {
    if theta.is_finite() && theta.abs() < PI / 2.0 {
        Ok(())
    } else {
        Err(Error::domain(
            field,
            format!(
                "must lie strictly between -90 and 90 degrees, got {:.6} deg",
                theta.to_degrees()
            ),
        ))
    }
}

/// How the surface programs its reflection phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseProfile {
    /// Linear gradient steering `theta_i` into `theta_r`; needs only the two directions.
    AnomalousGradient,
    /// Cancels the full propagation phase towards one receiver position.
    FocusingLens,
}

/// Amplitude weighting of each secondary wavelet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Obliquity {
    /// Bare wavelets, no directional weighting.
    None,
    /// `(cos θ_s(x) + cos θ_d(x)) / 2`, the physical-optics factor.
    #[default]
    PhysicalOptics,
}

impl Obliquity {
    fn factor(self, cos_source: f64, cos_destination: f64) -> f64 {
        match self {
            Obliquity::None => 1.0,
            Obliquity::PhysicalOptics => 0.5 * (cos_source + cos_destination),
        }
    }

    /// Power weighting of the wavelet leaving the surface centre.
    pub fn central_power_factor(self, geometry: &LinkGeometry) -> f64 {
        self.factor(geometry.theta_i.cos(), geometry.theta_r.cos())
            .powi(2)
    }
}

/// A lossless reflecting segment of length `2L` centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisProfile {
    half_length: f64,
    phase: PhaseProfile,
    element_spacing_divisor: f64,
    obliquity: Obliquity,
}

impl RisProfile {
    pub const DEFAULT_SPACING_DIVISOR: f64 = 5.0;

    pub fn new(
        half_length: f64,
        phase: PhaseProfile,
        element_spacing_divisor: f64,
    ) -> Result<Self> {
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::domain(
                "half_length",
                format!("must be positive, got {half_length}"),
            ));
        }
        if !(element_spacing_divisor.is_finite() && element_spacing_divisor >= 2.0) {
            return Err(Error::domain(
                "element_spacing_divisor",
                format!("must be at least 2, got {element_spacing_divisor}"),
            ));
        }
        Ok(Self {
            half_length,
            phase,
            element_spacing_divisor,
            obliquity: Obliquity::default(),
        })
    }

    pub fn anomalous(half_length: f64) -> Result<Self> {
        Self::new(
            half_length,
            PhaseProfile::AnomalousGradient,
            Self::DEFAULT_SPACING_DIVISOR,
        )
    }

    pub fn lens(half_length: f64) -> Result<Self> {
        Self::new(
            half_length,
            PhaseProfile::FocusingLens,
            Self::DEFAULT_SPACING_DIVISOR,
        )
    }

    pub fn with_obliquity(mut self, obliquity: Obliquity) -> Self {
        self.obliquity = obliquity;
        self
    }

    pub fn with_phase(mut self, phase: PhaseProfile) -> Self {
        self.phase = phase;
        self
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn length(&self) -> f64 {
        2.0 * self.half_length
    }

    pub fn phase(&self) -> PhaseProfile {
        self.phase
    }

    pub fn element_spacing_divisor(&self) -> f64 {
        self.element_spacing_divisor
    }

    pub fn obliquity(&self) -> Obliquity {
        self.obliquity
    }

    /// Number of meta-atoms at spacing `λ/D` along the surface, `round(2L·D/λ)`.
    pub fn meta_atom_count(&self, budget: &LinkBudget) -> u64 {
        let count = (self.length() * self.element_spacing_divisor / budget.wavelength()).round();
        count.max(1.0) as u64
    }
}

/// A received power gain, plus the field phase when the full integral was evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub amplitude_sq: f64,
    pub phase: Option<f64>,
}

impl FieldSample {
    fn power(amplitude_sq: f64) -> Self {
        Self {
            amplitude_sq,
            phase: None,
        }
    }

    pub fn db(&self) -> f64 {
        10.0 * self.amplitude_sq.log10()
    }
}

/// `|E(d)|² = E0² / (k d)` for a single cylindrical hop.
pub fn cylindrical_power_gain(budget: &LinkBudget, distance: f64) -> Result<FieldSample> {
    check_distance("distance", distance)?;
    Ok(FieldSample::power(
        budget.field_norm_sq() / (budget.wavenumber() * distance),
    ))
}

/// Linear phase gradient that retargets a wave arriving from `theta_i` towards `theta_r`.
///
/// `Φ(x) = k·x·(sin θ_r − sin θ_i)`. With the transmitter on the `x < 0` side
/// this makes the total phase stationary at the surface centre.
pub fn gradient_phase(budget: &LinkBudget, theta_i: f64, theta_r: f64, x: f64) -> Result<f64> {
    check_angle("theta_i", theta_i)?;
    check_angle("theta_r", theta_r)?;
    Ok(gradient_slope(budget, theta_i, theta_r) * x)
}

fn gradient_slope(budget: &LinkBudget, theta_i: f64, theta_r: f64) -> f64 {
    budget.wavenumber() * (theta_r.sin() - theta_i.sin())
}

/// Focusing profile `Φ(x) = −k (r_s(x) + r_d(x))`.
pub fn lens_phase(budget: &LinkBudget, geometry: &LinkGeometry, x: f64) -> f64 {
    -budget.wavenumber() * (geometry.source_range(x) + geometry.destination_range(x))
}

/// Field of the surface by direct quadrature of the line integral, default settings.
pub fn ris_field_exact(
    budget: &LinkBudget,
    geometry: &LinkGeometry,
    ris: &RisProfile,
) -> Result<FieldSample> {
    ris_field_exact_with(budget, geometry, ris, &QuadratureSettings::default()).map(|f| f.sample)
}

/// Exact field together with the evidence that the quadrature settled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactField {
    pub sample: FieldSample,
    pub certificate: ConvergenceCertificate,
}

pub fn ris_field_exact_with(
    budget: &LinkBudget,
    geometry: &LinkGeometry,
    ris: &RisProfile,
    settings: &QuadratureSettings,
) -> Result<ExactField> {
    let integrand = Integrand::new(budget, geometry, ris);
    let initial = settings.initial_intervals(
        ris.length(),
        budget.wavelength(),
        integrand.phase_excursion(),
    );
    let (integral, certificate) = quadrature::simpson_doubling(
        |x| integrand.eval(x),
        -ris.half_length(),
        ris.half_length(),
        initial,
        settings,
        |i| integrand.power(i),
    )?;

    // The integrand drops the constant phase k(d_sr + d_rd); restore it.
    let phase = match ris.phase() {
        PhaseProfile::AnomalousGradient => {
            integral.arg() + budget.wavenumber() * (geometry.d_sr() + geometry.d_rd())
        }
        PhaseProfile::FocusingLens => integral.arg(),
    };
    Ok(ExactField {
        sample: FieldSample {
            amplitude_sq: certificate.accepted,
            phase: Some(wrap_phase(phase)),
        },
        certificate,
    })
}

fn wrap_phase(phase: f64) -> f64 {
    let wrapped = phase.rem_euclid(2.0 * PI);
    if wrapped > PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    }
}

struct Integrand {
    k: f64,
    tx: [f64; 2],
    rx: [f64; 2],
    d_sr: f64,
    d_rd: f64,
    slope: f64,
    phase: PhaseProfile,
    obliquity: Obliquity,
    prefactor: f64,
    half_length: f64,
}

impl Integrand {
    fn new(budget: &LinkBudget, geometry: &LinkGeometry, ris: &RisProfile) -> Self {
        Self {
            k: budget.wavenumber(),
            tx: geometry.tx_position(),
            rx: geometry.rx_position(),
            d_sr: geometry.d_sr(),
            d_rd: geometry.d_rd(),
            slope: gradient_slope(budget, geometry.theta_i(), geometry.theta_r()),
            phase: ris.phase(),
            obliquity: ris.obliquity(),
            // (k / 2π) · E0² / k
            prefactor: budget.field_norm_sq() / (2.0 * PI),
            half_length: ris.half_length(),
        }
    }

    fn eval(&self, x: f64) -> Complex64 {
        let (sx, sy) = (x - self.tx[0], self.tx[1]);
        let (dx, dy) = (x - self.rx[0], self.rx[1]);
        let r_s = sx.hypot(sy);
        let r_d = dx.hypot(dy);
        let amplitude = self.obliquity.factor(sy / r_s, dy / r_d) / (r_s * r_d).sqrt();
        match self.phase {
            PhaseProfile::FocusingLens => Complex64::new(amplitude, 0.0),
            PhaseProfile::AnomalousGradient => {
                // r - d computed without cancellation: (r² - d²) / (r + d).
                let excess_s = (x * x - 2.0 * x * self.tx[0]) / (r_s + self.d_sr);
                let excess_d = (x * x - 2.0 * x * self.rx[0]) / (r_d + self.d_rd);
                let psi = self.k * (excess_s + excess_d) + self.slope * x;
                Complex64::from_polar(amplitude, psi)
            }
        }
    }

    fn power(&self, integral: Complex64) -> f64 {
        self.prefactor * integral.norm_sqr()
    }

    /// Upper bound on the total phase swept by the integrand over the aperture.
    fn phase_excursion(&self) -> f64 {
        match self.phase {
            PhaseProfile::FocusingLens => 0.0,
            PhaseProfile::AnomalousGradient => {
                // dψ/dx is increasing in x, so its extremes sit at the ends.
                let rate = |x: f64| {
                    let r_s = (x - self.tx[0]).hypot(self.tx[1]);
                    let r_d = (x - self.rx[0]).hypot(self.rx[1]);
                    self.k * ((x - self.tx[0]) / r_s + (x - self.rx[0]) / r_d) + self.slope
                };
                let l = self.half_length;
                2.0 * l * rate(-l).abs().max(rate(l).abs())
            }
        }
    }
}

/// Stationary-phase (electrically large) limit of the gradient surface.
///
/// `E0² · o² / (k (α d_sr + β d_rd))` with `α = cos² θ_r`, `β = cos² θ_i`; these
/// come from the curvature of the total phase at the centre,
/// `ψ'' = k (cos² θ_i / d_sr + cos² θ_r / d_rd)`.
pub fn ris_field_mirror(
    budget: &LinkBudget,
    geometry: &LinkGeometry,
    obliquity: Obliquity,
) -> FieldSample {
    let alpha = geometry.theta_r().cos().powi(2);
    let beta = geometry.theta_i().cos().powi(2);
    let denom = budget.wavenumber() * (alpha * geometry.d_sr() + beta * geometry.d_rd());
    FieldSample::power(budget.field_norm_sq() * obliquity.central_power_factor(geometry) / denom)
}

/// Far-zone (electrically small) limit: `E0² · o² · 4L² / (2π d_sr d_rd)`.
pub fn ris_field_diffuser(
    budget: &LinkBudget,
    geometry: &LinkGeometry,
    ris: &RisProfile,
) -> FieldSample {
    let size_sq = ris.length().powi(2);
    FieldSample::power(
        budget.field_norm_sq() * ris.obliquity().central_power_factor(geometry) * size_sq
            / (2.0 * PI * geometry.d_sr() * geometry.d_rd()),
    )
}

#[cfg(test)]
mod tests;
