use super::*;

const F_28GHZ: f64 = 28e9;

fn budget() -> LinkBudget {
    LinkBudget::new(F_28GHZ, 114.0).unwrap()
}

fn fig3(d0: f64) -> LinkGeometry {
    LinkGeometry::from_degrees(d0, d0, 45.0, 60.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Brute-force midpoint sum of the integral, evaluating the full phase
/// `k(r_s + r_d) + Φ(x)` straight from positions.
fn brute_force(budget: &LinkBudget, g: &LinkGeometry, ris: &RisProfile, n: usize) -> f64 {
    let l = ris.half_length();
    let h = 2.0 * l / n as f64;
    let k = budget.wavenumber();
    let [tx, ty] = g.tx_position();
    let [rx, ry] = g.rx_position();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let x = -l + (j as f64 + 0.5) * h;
        let rs = ((x - tx).powi(2) + ty * ty).sqrt();
        let rd = ((x - rx).powi(2) + ry * ry).sqrt();
        let phi = match ris.phase() {
            PhaseProfile::AnomalousGradient => k * x * (g.theta_r().sin() - g.theta_i().sin()),
            PhaseProfile::FocusingLens => -k * (rs + rd),
        };
        let ob = match ris.obliquity() {
            Obliquity::None => 1.0,
            Obliquity::PhysicalOptics => 0.5 * (ty / rs + ry / rd),
        };
        let e0 = budget.field_norm_sq().sqrt();
        let term = e0 / (k * rs).sqrt() * ob / rd.sqrt();
        acc += Complex64::from_polar(term, phi + k * (rs + rd)) * h;
    }
    (k / (2.0 * PI)) * acc.norm_sqr()
}

#[test]
fn budget_derived_quantities() {
    let b = budget();
    assert!(rel(b.wavelength(), 0.010_706_873_5) < 1e-9);
    assert!(rel(b.wavenumber(), 2.0 * PI / b.wavelength()) < 1e-15);
    // 2L = 1.5 m is about 140 wavelengths at 28 GHz.
    assert!((140.0 * b.wavelength() - 1.499).abs() < 1e-3);
    assert!(rel(b.reference_snr(), 10f64.powf(11.4)) < 1e-12);
}

#[test]
fn budget_rejects_bad_inputs() {
    assert!(LinkBudget::new(0.0, 114.0).is_err());
    assert!(LinkBudget::new(-1.0, 114.0).is_err());
    assert!(LinkBudget::new(28e9, f64::NAN).is_err());
}

#[test]
fn cylindrical_gain_calibration() {
    let b = budget();
    assert!(rel(cylindrical_power_gain(&b, 1.0).unwrap().amplitude_sq, 1.0) < 1e-15);
    assert!(rel(cylindrical_power_gain(&b, 2.0).unwrap().amplitude_sq, 0.5) < 1e-15);
    assert!(matches!(
        cylindrical_power_gain(&b, 0.0),
        Err(Error::Domain {
            field: "distance",
            ..
        })
    ));
    assert!(cylindrical_power_gain(&b, -3.0).is_err());
}

#[test]
fn geometry_positions_and_validation() {
    let g = fig3(10.0);
    let [tx, ty] = g.tx_position();
    let [rx, ry] = g.rx_position();
    assert!((tx + 10.0 * 0.5f64.sqrt()).abs() < 1e-12);
    assert!((ty - 10.0 * 0.5f64.sqrt()).abs() < 1e-12);
    assert!((rx - 10.0 * 0.75f64.sqrt()).abs() < 1e-12);
    assert!((ry - 5.0).abs() < 1e-12);
    assert!(rel(g.source_range(0.0), 10.0) < 1e-15);
    assert!(LinkGeometry::from_degrees(10.0, 10.0, 90.0, 0.0).is_err());
    assert!(LinkGeometry::from_degrees(10.0, 10.0, 0.0, -90.0).is_err());
    assert!(LinkGeometry::from_degrees(0.0, 10.0, 0.0, 0.0).is_err());
    assert!(LinkGeometry::from_degrees(10.0, f64::INFINITY, 0.0, 0.0).is_err());
}

#[test]
fn gradient_phase_examples() {
    let b = budget();
    let (ti, tr) = (45f64.to_radians(), 60f64.to_radians());
    // Hand value: 586.8366 · 0.01 · (0.8660254 − 0.7071068)
    let phi = gradient_phase(&b, ti, tr, 0.01).unwrap();
    assert!((phi - 0.932_592_651_4).abs() < 1e-9, "{phi}");
    let back = gradient_phase(&b, ti, tr, -0.01).unwrap();
    assert_eq!(back, -phi);
    for x in [-0.7, 0.0, 0.3] {
        assert_eq!(gradient_phase(&b, ti, ti, x).unwrap(), 0.0);
    }
    assert!(gradient_phase(&b, PI, 0.0, 0.0).is_err());
}

#[test]
fn gradient_makes_centre_stationary() {
    let b = budget();
    let g = fig3(20.0);
    let slope = gradient_slope(&b, g.theta_i(), g.theta_r());
    let h = 1e-4;
    let psi = |x: f64| b.wavenumber() * (g.source_range(x) + g.destination_range(x)) + slope * x;
    let derivative = (psi(h) - psi(-h)) / (2.0 * h);
    assert!(derivative.abs() < 1e-3 * b.wavenumber(), "{derivative}");
}

#[test]
fn lens_total_phase_vanishes() {
    let b = budget();
    let g = fig3(35.0);
    for x in [-0.75, -0.2, 0.0, 0.41, 0.75] {
        let total =
            b.wavenumber() * (g.source_range(x) + g.destination_range(x)) + lens_phase(&b, &g, x);
        assert!(total.abs() < 1e-9, "{total}");
    }
}

#[test]
fn exact_matches_brute_force_oracle() {
    let b = budget();
    for (d0, obliquity) in [
        (3.0, Obliquity::PhysicalOptics),
        (40.0, Obliquity::None),
        (300.0, Obliquity::PhysicalOptics),
    ] {
        for ris in [
            RisProfile::anomalous(0.75).unwrap(),
            RisProfile::lens(0.75).unwrap(),
        ] {
            let ris = ris.with_obliquity(obliquity);
            let g = fig3(d0);
            let ours = ris_field_exact(&b, &g, &ris).unwrap().amplitude_sq;
            let oracle = brute_force(&b, &g, &ris, 400_000);
            assert!(
                rel(ours, oracle) < 1e-5,
                "d0={d0} {ris:?}: {ours} vs {oracle}"
            );
        }
    }
}

#[test]
fn lens_integrand_is_positive_envelope() {
    let b = budget();
    let g = fig3(50.0);
    let ris = RisProfile::lens(0.75).unwrap();
    let field = ris_field_exact(&b, &g, &ris).unwrap();
    assert!(field.phase.unwrap().abs() < 1e-12);
}

#[test]
fn tiny_surface_reaches_point_scatterer_limit() {
    let b = budget();
    let g = fig3(10.0);
    let ris = RisProfile::anomalous(b.wavelength() / 200.0).unwrap();
    let exact = ris_field_exact(&b, &g, &ris).unwrap().amplitude_sq;
    let k = b.wavenumber();
    let ob = ris.obliquity().central_power_factor(&g);
    let limit =
        (k / (2.0 * PI)) * ris.length().powi(2) * b.field_norm_sq() * ob / (k * 10.0 * 10.0);
    assert!(rel(exact, limit) < 1e-6, "{exact} vs {limit}");
    let diffuser = ris_field_diffuser(&b, &g, &ris).amplitude_sq;
    assert!(rel(diffuser, limit) < 1e-12);
}

#[test]
fn mirror_normal_incidence_is_half_one_hop() {
    let b = budget();
    let g = LinkGeometry::equidistant(7.0, 0.0, 0.0).unwrap();
    for ob in [Obliquity::None, Obliquity::PhysicalOptics] {
        let m = ris_field_mirror(&b, &g, ob).amplitude_sq;
        let hop = cylindrical_power_gain(&b, 7.0).unwrap().amplitude_sq;
        assert!(rel(m, hop / 2.0) < 1e-14);
    }
}

#[test]
fn mirror_is_exact_inverse_distance() {
    let b = budget();
    let m5 = ris_field_mirror(&b, &fig3(5.0), Obliquity::PhysicalOptics).amplitude_sq;
    let m25 = ris_field_mirror(&b, &fig3(25.0), Obliquity::PhysicalOptics).amplitude_sq;
    let slope = (m25 / m5).ln() / 5f64.ln();
    assert!((slope + 1.0).abs() < 1e-12);
}

#[test]
fn diffuser_size_and_symmetry() {
    let b = budget();
    let g = LinkGeometry::from_degrees(30.0, 80.0, 45.0, 60.0).unwrap();
    let small = RisProfile::anomalous(0.3).unwrap();
    let large = RisProfile::anomalous(0.6).unwrap();
    let a = ris_field_diffuser(&b, &g, &small).amplitude_sq;
    let c = ris_field_diffuser(&b, &g, &large).amplitude_sq;
    assert!(rel(c, 4.0 * a) < 1e-14);
    let swapped_d = LinkGeometry::from_degrees(80.0, 30.0, 45.0, 60.0).unwrap();
    assert!(rel(ris_field_diffuser(&b, &swapped_d, &small).amplitude_sq, a) < 1e-14);
}

#[test]
fn exact_tracks_mirror_near_and_diffuser_far() {
    let b = budget();
    let ris = RisProfile::anomalous(0.75).unwrap();
    let g = fig3(10.0);
    let exact = ris_field_exact(&b, &g, &ris).unwrap().db();
    let mirror = ris_field_mirror(&b, &g, ris.obliquity()).db();
    assert!((exact - mirror).abs() < 2.0, "{exact} vs {mirror}");
    let g = fig3(200.0);
    let exact = ris_field_exact(&b, &g, &ris).unwrap().db();
    let diffuser = ris_field_diffuser(&b, &g, &ris).db();
    assert!((exact - diffuser).abs() < 1.0, "{exact} vs {diffuser}");
}

#[test]
fn convergence_certificate_survives_refinement() {
    let b = budget();
    let ris = RisProfile::anomalous(0.75).unwrap();
    for d0 in [2.0, 17.0, 120.0] {
        let g = fig3(d0);
        let base = QuadratureSettings::default();
        let accepted = ris_field_exact_with(&b, &g, &ris, &base).unwrap();
        let c = accepted.certificate;
        assert!(c.relative_delta < 1e-6);
        assert_eq!(c.accepted, accepted.sample.amplitude_sq);
        let finer = QuadratureSettings {
            samples_per_wavelength: 2 * base.samples_per_wavelength,
            ..base
        };
        let refined = ris_field_exact_with(&b, &g, &ris, &finer).unwrap();
        assert!(rel(refined.sample.amplitude_sq, c.accepted) < 1e-6);
    }
}

#[test]
fn quadrature_cap_surfaces_as_numerical_error() {
    let b = budget();
    let ris = RisProfile::anomalous(0.75).unwrap();
    let settings = QuadratureSettings {
        max_samples: 1000,
        ..QuadratureSettings::default()
    };
    let err = ris_field_exact_with(&b, &fig3(5.0), &ris, &settings).unwrap_err();
    assert!(err.is_numerical());
}

#[test]
fn meta_atom_counts() {
    let b = budget();
    let five = RisProfile::new(0.75, PhaseProfile::AnomalousGradient, 5.0).unwrap();
    let two = RisProfile::new(0.75, PhaseProfile::AnomalousGradient, 2.0).unwrap();
    assert_eq!(five.meta_atom_count(&b), 700);
    assert_eq!(two.meta_atom_count(&b), 280);
    let one_wavelength =
        RisProfile::new(b.wavelength() / 2.0, PhaseProfile::FocusingLens, 2.0).unwrap();
    assert_eq!(one_wavelength.meta_atom_count(&b), 2);
    assert!(RisProfile::new(0.75, PhaseProfile::FocusingLens, 1.5).is_err());
    assert!(RisProfile::new(0.0, PhaseProfile::FocusingLens, 2.0).is_err());
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn lens_dominates_gradient(
            d_sr in 1.0f64..150.0,
            d_rd in 1.0f64..150.0,
            ti in -70.0f64..70.0,
            tr in -70.0f64..70.0,
            half in 0.05f64..1.0,
        ) {
            let b = LinkBudget::new(28e9, 114.0).unwrap();
            let g = LinkGeometry::from_degrees(d_sr, d_rd, ti, tr).unwrap();
            let grad = ris_field_exact(&b, &g, &RisProfile::anomalous(half).unwrap()).unwrap();
            let lens = ris_field_exact(&b, &g, &RisProfile::lens(half).unwrap()).unwrap();
            prop_assert!(lens.amplitude_sq >= grad.amplitude_sq * (1.0 - 1e-9));
        }

        #[test]
        fn reciprocity(
            d_sr in 1.0f64..150.0,
            d_rd in 1.0f64..150.0,
            ti in -70.0f64..70.0,
            tr in -70.0f64..70.0,
        ) {
            let b = LinkBudget::new(28e9, 114.0).unwrap();
            let g = LinkGeometry::from_degrees(d_sr, d_rd, ti, tr).unwrap();
            let ris = RisProfile::anomalous(0.4).unwrap();
            let forward = ris_field_exact(&b, &g, &ris).unwrap().amplitude_sq;
            let backward = ris_field_exact(&b, &g.swapped(), &ris).unwrap().amplitude_sq;
            prop_assert!(rel(backward, forward) < 1e-9, "{} vs {}", forward, backward);
        }
    }
}
