use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Composite Simpson settings for the surface integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    /// Initial intervals per wavelength of aperture, and per cycle of integrand phase.
    pub samples_per_wavelength: usize,
    /// Accept once successive doublings change the power by less than this.
    pub relative_tolerance: f64,
    /// Hard cap on the number of integrand samples.
    pub max_samples: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            samples_per_wavelength: 16,
            relative_tolerance: 1e-6,
            max_samples: 1 << 24,
        }
    }
}

impl QuadratureSettings {
    pub(crate) fn initial_intervals(
        &self,
        aperture: f64,
        wavelength: f64,
        phase_excursion: f64,
    ) -> usize {
        let spw = self.samples_per_wavelength.max(2) as f64;
        let by_aperture = spw * aperture / wavelength;
        let by_phase = spw * phase_excursion / (2.0 * PI);
        let n = by_aperture.max(by_phase).max(16.0).ceil() as usize;
        n + n % 2
    }
}

/// Last two refinements of an accepted integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceCertificate {
    /// Samples used by the accepted estimate.
    pub samples: usize,
    /// Power at half the accepted resolution.
    pub previous: f64,
    pub accepted: f64,
    pub relative_delta: f64,
}

/// Simpson's rule on `[a, b]`, doubling the interval count until the power
/// (as mapped by `power`) and the complex value both settle.
pub(crate) fn simpson_doubling<F, P>(
    f: F,
    a: f64,
    b: f64,
    initial_intervals: usize,
    settings: &QuadratureSettings,
    power: P,
) -> Result<(Complex64, ConvergenceCertificate)>
where
    F: Fn(f64) -> Complex64,
    P: Fn(Complex64) -> f64,
{
    let mut n = initial_intervals.max(2);
    n += n % 2;
    let width = b - a;

    let ends = f(a) + f(b);
    let mut odd = Complex64::new(0.0, 0.0);
    let mut even = Complex64::new(0.0, 0.0);
    let h = width / n as f64;
    for j in 1..n {
        let v = f(a + j as f64 * h);
        if j % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    let mut estimate = (ends + 4.0 * odd + 2.0 * even) * (h / 3.0);
    let mut estimate_power = power(estimate);

    loop {
        let samples = 2 * n + 1;
        if samples > settings.max_samples {
            let latest = estimate_power;
            return Err(Error::Quadrature {
                samples: n + 1,
                previous: latest,
                latest,
                relative_delta: f64::NAN,
            });
        }
        n *= 2;
        let h = width / n as f64;
        even += odd;
        odd = Complex64::new(0.0, 0.0);
        for j in (1..n).step_by(2) {
            odd += f(a + j as f64 * h);
        }
        let refined = (ends + 4.0 * odd + 2.0 * even) * (h / 3.0);
        let refined_power = power(refined);

        let power_delta = (refined_power - estimate_power).abs() / refined_power.abs();
        let value_delta = (refined - estimate).norm() / refined.norm();
        if power_delta < settings.relative_tolerance && value_delta < settings.relative_tolerance {
            return Ok((
                refined,
                ConvergenceCertificate {
                    samples: n + 1,
                    previous: estimate_power,
                    accepted: refined_power,
                    relative_delta: power_delta,
                },
            ));
        }
        if 2 * n + 1 > settings.max_samples {
            return Err(Error::Quadrature {
                samples: n + 1,
                previous: estimate_power,
                latest: refined_power,
                relative_delta: power_delta,
            });
        }
        estimate = refined;
        estimate_power = refined_power;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    #[test]
    fn integrates_polynomial_exactly() {
        let (value, cert) = simpson_doubling(
            |x| Complex64::new(x * x * x + 2.0 * x, 0.0),
            0.0,
            2.0,
            4,
            &settings(),
            |c| c.re,
        )
        .unwrap();
        assert!((value.re - 8.0).abs() < 1e-12);
        assert_eq!(cert.samples, 9);
    }

    #[test]
    fn oscillatory_integral_matches_closed_form() {
        // ∫_0^1 e^{i 40 x} dx = (e^{40i} - 1) / (40 i)
        let exact = (Complex64::new(0.0, 40.0).exp() - 1.0) / Complex64::new(0.0, 40.0);
        let (value, cert) = simpson_doubling(
            |x| Complex64::new(0.0, 40.0 * x).exp(),
            0.0,
            1.0,
            16,
            &settings(),
            |c| c.norm_sqr(),
        )
        .unwrap();
        assert!((value - exact).norm() / exact.norm() < 1e-6);
        assert!(cert.relative_delta < 1e-6);
    }

    #[test]
    fn cap_reports_diagnostics() {
        let tight = QuadratureSettings {
            max_samples: 64,
            ..settings()
        };
        let err = simpson_doubling(
            |x| Complex64::new(0.0, 5000.0 * x * x).exp(),
            0.0,
            1.0,
            4,
            &tight,
            |c| c.norm_sqr(),
        )
        .unwrap_err();
        match err {
            Error::Quadrature {
                samples,
                previous,
                latest,
                ..
            } => {
                assert!(samples <= 64);
                assert!(previous.is_finite() && latest.is_finite());
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn initial_intervals_are_even_and_cover_phase() {
        let s = settings();
        let n = s.initial_intervals(1.5, 0.0107, 0.0);
        assert_eq!(n % 2, 0);
        assert!(n as f64 >= 16.0 * 1.5 / 0.0107);
        let m = s.initial_intervals(1.5, 0.0107, 4000.0 * PI);
        assert!(m >= 16 * 2000);
    }
}
