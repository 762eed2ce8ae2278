//! Scaling exponents, mirror/diffuser regime boundaries and scheme crossovers.
//!
//! Exact surface curves ripple in the near zone, so boundaries and crossovers
//! are read off smoothed curves. Smoothing windows are widths in decades of the
//! (log-uniform) abscissa, which keeps results stable under grid refinement.

use crate::error::{Error, Result};
use crate::wavefield::{
    ris_field_diffuser, ris_field_exact_with, ris_field_mirror, LinkBudget, LinkGeometry,
    QuadratureSettings, RisProfile,
};

/// Minimum number of samples accepted by [`fit_scaling_exponent`].
pub const MIN_FIT_SAMPLES: usize = 8;

/// Median window used for regime detection: five points of a 50-point grid over three decades.
pub const REGIME_MEDIAN_WINDOW_DECADES: f64 = 5.0 * 3.0 / 49.0;

/// Moving-average window applied before crossover search.
pub const CROSSOVER_WINDOW_DECADES: f64 = 0.1;

pub const DEFAULT_TOLERANCE_DB: f64 = 1.0;

/// Least-squares slope of `log(amplitude_sq)` against `log(d0)`.
pub fn fit_scaling_exponent(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::domain(
            "samples",
            format!(
                "need at least {MIN_FIT_SAMPLES} samples, got {}",
                samples.len()
            ),
        ));
    }
    for w in samples.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::domain(
                "samples",
                "abscissae must be strictly increasing",
            ));
        }
    }
    if let Some(&(x, y)) = samples.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::domain(
            "samples",
            format!("abscissae and values must be positive, got ({x}, {y})"),
        ));
    }
    let n = samples.len() as f64;
    let (sx, sy) = samples
        .iter()
        .fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x.ln(), sy + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = samples.iter().fold((0.0, 0.0), |(sxy, sxx), (x, y)| {
        let dx = x.ln() - mx;
        (sxy + dx * (y.ln() - my), sxx + dx * dx)
    });
    Ok(sxy / sxx)
}

fn window_indices(log_grid: &[f64], centre: usize, width_decades: f64) -> std::ops::Range<usize> {
    let half = 0.5 * width_decades + 1e-12;
    let c = log_grid[centre];
    let lo = log_grid.partition_point(|&l| l < c - half);
    let hi = log_grid.partition_point(|&l| l <= c + half);
    lo..hi
}

/// Running median over a window of `width_decades` on a log-spaced grid.
pub fn median_smooth(grid: &[f64], values: &[f64], width_decades: f64) -> Vec<f64> {
    let logs: Vec<f64> = grid.iter().map(|x| x.log10()).collect();
    (0..grid.len())
        .map(|i| {
            let mut w: Vec<f64> = values[window_indices(&logs, i, width_decades)].to_vec();
            w.sort_by(|a, b| a.total_cmp(b));
            let m = w.len();
            if m % 2 == 1 {
                w[m / 2]
            } else {
                0.5 * (w[m / 2 - 1] + w[m / 2])
            }
        })
        .collect()
}

/// Running mean over a window of `width_decades` on a log-spaced grid.
pub fn moving_average(grid: &[f64], values: &[f64], width_decades: f64) -> Vec<f64> {
    let logs: Vec<f64> = grid.iter().map(|x| x.log10()).collect();
    (0..grid.len())
        .map(|i| {
            let w = &values[window_indices(&logs, i, width_decades)];
            w.iter().sum::<f64>() / w.len() as f64
        })
        .collect()
}

/// Where the exact surface field follows each asymptote.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    /// End of the near-zone run where the exact field stays within tolerance of the mirror law.
    pub mirror_boundary: Option<f64>,
    /// Start of the far-zone run where it stays within tolerance of the diffuser law.
    pub diffuser_boundary: Option<f64>,
    pub tolerance_db: f64,
    /// Smoothed deviations (dB) from each asymptote, one per grid point.
    pub mirror_deviation_db: Vec<f64>,
    pub diffuser_deviation_db: Vec<f64>,
    /// Human-readable notes for missing boundaries.
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeOptions {
    pub tolerance_db: f64,
    pub median_window_decades: f64,
    pub quadrature: QuadratureSettings,
}

impl Default for RegimeOptions {
    fn default() -> Self {
        Self {
            tolerance_db: DEFAULT_TOLERANCE_DB,
            median_window_decades: REGIME_MEDIAN_WINDOW_DECADES,
            quadrature: QuadratureSettings::default(),
        }
    }
}

/// Equidistant-link angles the regime scan is run at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryTemplate {
    pub theta_i: f64,
    pub theta_r: f64,
}

impl GeometryTemplate {
    pub fn from_degrees(theta_i: f64, theta_r: f64) -> Self {
        Self {
            theta_i: theta_i.to_radians(),
            theta_r: theta_r.to_radians(),
        }
    }

    pub fn at(&self, d0: f64) -> Result<LinkGeometry> {
        LinkGeometry::equidistant(d0, self.theta_i, self.theta_r)
    }
}

/// Locates the mirror and diffuser regimes of `ris` over a log-uniform `d0_grid`.
pub fn classify_regimes(
    budget: &LinkBudget,
    template: &GeometryTemplate,
    ris: &RisProfile,
    d0_grid: &[f64],
    options: &RegimeOptions,
) -> Result<RegimeReport> {
    check_grid(d0_grid)?;
    let first = d0_grid[0];
    let last = d0_grid[d0_grid.len() - 1];
    if d0_grid.len() < 50 || first > 1.0 || last < 1000.0 {
        return Err(Error::domain(
            "d0_grid",
            format!(
                "must span at least [1, 1000] m with 50 or more points, got {} points over [{first}, {last}]",
                d0_grid.len()
            ),
        ));
    }

    use rayon::prelude::*;
    let deviations: Vec<(f64, f64)> = d0_grid
        .par_iter()
        .map(|&d0| -> Result<(f64, f64)> {
            let g = template.at(d0)?;
            let exact = ris_field_exact_with(budget, &g, ris, &options.quadrature)?
                .sample
                .db();
            let mirror = ris_field_mirror(budget, &g, ris.obliquity()).db();
            let diffuser = ris_field_diffuser(budget, &g, ris).db();
            Ok((exact - mirror, exact - diffuser))
        })
        .collect::<Result<_>>()?;
    let (mirror_raw, diffuser_raw): (Vec<f64>, Vec<f64>) = deviations.into_iter().unzip();

    let mirror_dev = median_smooth(d0_grid, &mirror_raw, options.median_window_decades);
    let diffuser_dev = median_smooth(d0_grid, &diffuser_raw, options.median_window_decades);
    let tol = options.tolerance_db;
    let within = |v: &f64| v.abs() <= tol;

    let mut diagnostics = Vec::new();
    let near_run = mirror_dev.iter().take_while(|v| within(v)).count();
    let mirror_boundary = if near_run == 0 {
        diagnostics.push(format!(
            "exact field is {:.2} dB from the mirror law at the first grid point",
            mirror_dev[0]
        ));
        None
    } else {
        Some(d0_grid[near_run - 1])
    };
    let far_run = diffuser_dev.iter().rev().take_while(|v| within(v)).count();
    let diffuser_boundary = if far_run == 0 {
        diagnostics.push(format!(
            "exact field is {:.2} dB from the diffuser law at the last grid point",
            diffuser_dev[diffuser_dev.len() - 1]
        ));
        None
    } else {
        Some(d0_grid[d0_grid.len() - far_run])
    };

    Ok(RegimeReport {
        mirror_boundary,
        diffuser_boundary,
        tolerance_db: tol,
        mirror_deviation_db: mirror_dev,
        diffuser_deviation_db: diffuser_dev,
        diagnostics,
    })
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::domain("grid", "need at least two points"));
    }
    if grid.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::domain("grid", "values must be positive and finite"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("grid", "values must be strictly increasing"));
    }
    Ok(())
}

/// A labelled rate curve sampled on a shared grid.
#[derive(Debug, Clone, Copy)]
pub struct Curve<'a> {
    pub label: &'a str,
    pub values: &'a [f64],
}

impl<'a> Curve<'a> {
    pub fn new(label: &'a str, values: &'a [f64]) -> Self {
        Self { label, values }
    }
}

/// Which sign change to report when the smoothed curves cross more than once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CrossoverPick {
    /// The crossing at the largest abscissa.
    #[default]
    Last,
    /// The crossing at the smallest abscissa.
    First,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverResult {
    pub crossover_value: f64,
    /// Scheme on top just below the crossing.
    pub scheme_a: String,
    /// Scheme on top just above it.
    pub scheme_b: String,
    pub smoothing_window: f64,
    /// Number of sign changes seen on the smoothed difference.
    pub sign_changes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Crossover {
    At(CrossoverResult),
    /// No sign change; `dominant` is the curve that stays on top, if any.
    None {
        dominant: Option<String>,
    },
}

impl Crossover {
    pub fn value(&self) -> Option<f64> {
        match self {
            Crossover::At(r) => Some(r.crossover_value),
            Crossover::None { .. } => None,
        }
    }
}

/// Smooths both curves and locates the selected sign change of `a − b`,
/// refined by bisection on the piecewise-linear (in log abscissa) difference.
pub fn find_crossover(
    grid: &[f64],
    a: Curve<'_>,
    b: Curve<'_>,
    pick: CrossoverPick,
) -> Result<Crossover> {
    check_grid(grid)?;
    if a.values.len() != grid.len() || b.values.len() != grid.len() {
        return Err(Error::domain("curve", "curves must be sampled on the grid"));
    }
    let sa = moving_average(grid, a.values, CROSSOVER_WINDOW_DECADES);
    let sb = moving_average(grid, b.values, CROSSOVER_WINDOW_DECADES);
    let diff: Vec<f64> = sa.iter().zip(&sb).map(|(x, y)| x - y).collect();

    // Brackets [i, i+1] where the sign flips, skipping exact ties inside runs.
    let mut brackets = Vec::new();
    let mut last_nonzero: Option<usize> = None;
    for (i, &d) in diff.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        if let Some(j) = last_nonzero {
            if (diff[j] > 0.0) != (d > 0.0) {
                brackets.push((j, i));
            }
        }
        last_nonzero = Some(i);
    }

    let Some(&(lo, hi)) = (match pick {
        CrossoverPick::Last => brackets.last(),
        CrossoverPick::First => brackets.first(),
    }) else {
        let dominant = match last_nonzero {
            None => None,
            Some(j) if diff[j] > 0.0 => Some(a.label.to_owned()),
            Some(_) => Some(b.label.to_owned()),
        };
        return Ok(Crossover::None { dominant });
    };

    let (x0, x1) = (grid[lo].log10(), grid[hi].log10());
    let (d0, d1) = (diff[lo], diff[hi]);
    let interp = |x: f64| d0 + (d1 - d0) * (x - x0) / (x1 - x0);
    let (mut left, mut right) = (x0, x1);
    for _ in 0..200 {
        let mid = 0.5 * (left + right);
        if mid <= left || mid >= right {
            break;
        }
        if interp(mid) * d0 > 0.0 {
            left = mid;
        } else {
            right = mid;
        }
    }
    let (scheme_a, scheme_b) = if d0 > 0.0 {
        (a.label.to_owned(), b.label.to_owned())
    } else {
        (b.label.to_owned(), a.label.to_owned())
    };
    Ok(Crossover::At(CrossoverResult {
        crossover_value: 10f64.powf(0.5 * (left + right)),
        scheme_a,
        scheme_b,
        smoothing_window: CROSSOVER_WINDOW_DECADES,
        sign_changes: brackets.len(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::log_grid;
    use crate::wavefield::{LinkBudget, Obliquity};

    #[test]
    fn slope_of_pure_power_laws() {
        let budget = LinkBudget::new(28e9, 114.0).unwrap();
        let t = GeometryTemplate::from_degrees(45.0, 60.0);
        let ris = RisProfile::anomalous(0.75).unwrap();
        let grid = log_grid(5.0, 25.0, 20);
        let mirror: Vec<_> = grid
            .iter()
            .map(|&d| {
                (
                    d,
                    ris_field_mirror(&budget, &t.at(d).unwrap(), Obliquity::PhysicalOptics)
                        .amplitude_sq,
                )
            })
            .collect();
        assert!((fit_scaling_exponent(&mirror).unwrap() + 1.0).abs() < 1e-9);
        let diffuser: Vec<_> = grid
            .iter()
            .map(|&d| {
                (
                    d,
                    ris_field_diffuser(&budget, &t.at(d).unwrap(), &ris).amplitude_sq,
                )
            })
            .collect();
        assert!((fit_scaling_exponent(&diffuser).unwrap() + 2.0).abs() < 1e-9);
    }

    #[test]
    fn slope_rejects_short_or_unsorted_input() {
        let few: Vec<_> = (1..8).map(|i| (i as f64, 1.0 / i as f64)).collect();
        assert!(fit_scaling_exponent(&few).is_err());
        let mut unsorted: Vec<_> = (1..10).map(|i| (i as f64, 1.0 / i as f64)).collect();
        unsorted.swap(2, 3);
        assert!(fit_scaling_exponent(&unsorted).is_err());
        let zero: Vec<_> = (0..10).map(|i| (i as f64, 1.0)).collect();
        assert!(fit_scaling_exponent(&zero).is_err());
    }

    #[test]
    fn median_ignores_isolated_spikes() {
        let grid = log_grid(1.0, 100.0, 41);
        let mut v = vec![1.0; 41];
        v[20] = 50.0;
        let s = median_smooth(&grid, &v, 0.25);
        assert!(s.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn moving_average_of_constant_is_constant() {
        let grid = log_grid(1.0, 1000.0, 31);
        let s = moving_average(&grid, &[3.5; 31], 0.1);
        assert!(s.iter().all(|&x| (x - 3.5).abs() < 1e-15));
    }

    #[test]
    fn identical_curves_do_not_cross() {
        let grid = log_grid(1.0, 1000.0, 50);
        let v: Vec<f64> = grid.iter().map(|d| 30.0 - d.log2()).collect();
        let c = find_crossover(
            &grid,
            Curve::new("a", &v),
            Curve::new("b", &v),
            CrossoverPick::Last,
        )
        .unwrap();
        assert_eq!(c, Crossover::None { dominant: None });
    }

    #[test]
    fn uniform_dominator_is_named() {
        let grid = log_grid(1.0, 1000.0, 50);
        let a: Vec<f64> = grid.iter().map(|d| 30.0 - d.log2()).collect();
        let b: Vec<f64> = a.iter().map(|x| x - 1.0).collect();
        let c = find_crossover(
            &grid,
            Curve::new("a", &a),
            Curve::new("b", &b),
            CrossoverPick::Last,
        )
        .unwrap();
        assert_eq!(
            c,
            Crossover::None {
                dominant: Some("a".into())
            }
        );
    }

    #[test]
    fn crossing_of_two_lines_in_log_abscissa() {
        let grid = log_grid(1.0, 1000.0, 200);
        // a − b = log10(x) − 2 vanishes at x = 100.
        let a: Vec<f64> = grid.iter().map(|x| 5.0 - x.log10()).collect();
        let b: Vec<f64> = grid.iter().map(|x| 7.0 - 2.0 * x.log10()).collect();
        let Crossover::At(r) = find_crossover(
            &grid,
            Curve::new("a", &a),
            Curve::new("b", &b),
            CrossoverPick::Last,
        )
        .unwrap() else {
            panic!("expected a crossing")
        };
        assert!(
            (r.crossover_value - 100.0).abs() < 1e-6 * 100.0,
            "{}",
            r.crossover_value
        );
        assert_eq!((r.scheme_a.as_str(), r.scheme_b.as_str()), ("b", "a"));
        assert_eq!(r.sign_changes, 1);
    }

    #[test]
    fn pick_selects_between_multiple_crossings() {
        let grid = log_grid(1.0, 1000.0, 300);
        let a: Vec<f64> = grid
            .iter()
            .map(|x| (x.log10() - 1.0) * (x.log10() - 2.0))
            .collect();
        let b = vec![0.0; grid.len()];
        let first = find_crossover(
            &grid,
            Curve::new("a", &a),
            Curve::new("b", &b),
            CrossoverPick::First,
        )
        .unwrap()
        .value()
        .unwrap();
        let last = find_crossover(
            &grid,
            Curve::new("a", &a),
            Curve::new("b", &b),
            CrossoverPick::Last,
        )
        .unwrap()
        .value()
        .unwrap();
        assert!((first / 10.0 - 1.0).abs() < 0.05, "{first}");
        assert!((last / 100.0 - 1.0).abs() < 0.05, "{last}");
    }

    #[test]
    fn grid_validation() {
        let v = [1.0, 2.0, 3.0];
        assert!(find_crossover(
            &[1.0, 1.0, 2.0],
            Curve::new("a", &v),
            Curve::new("b", &v),
            CrossoverPick::Last
        )
        .is_err());
        assert!(find_crossover(
            &[1.0, 2.0],
            Curve::new("a", &v),
            Curve::new("b", &v),
            CrossoverPick::Last
        )
        .is_err());
        let budget = LinkBudget::new(28e9, 114.0).unwrap();
        let ris = RisProfile::anomalous(0.75).unwrap();
        let short = log_grid(1.0, 100.0, 60);
        assert!(classify_regimes(
            &budget,
            &GeometryTemplate::from_degrees(45.0, 60.0),
            &ris,
            &short,
            &RegimeOptions::default()
        )
        .is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn fit_is_exact_and_scale_invariant(exponent in -3.0f64..1.0, scale in 1e-12f64..1e6, start in 0.1f64..100.0) {
                let samples: Vec<_> = (0..12).map(|i| {
                    let x = start * 1.3f64.powi(i);
                    (x, x.powf(exponent))
                }).collect();
                let scaled: Vec<_> = samples.iter().map(|&(x, y)| (x, scale * y)).collect();
                let s1 = fit_scaling_exponent(&samples).unwrap();
                let s2 = fit_scaling_exponent(&scaled).unwrap();
                prop_assert!((s1 - exponent).abs() < 1e-9);
                prop_assert!((s2 - exponent).abs() < 1e-9);
            }

            #[test]
            fn crossover_is_symmetric(p in -1.0f64..1.0, q in 0.2f64..2.0, ripple in 0.0f64..0.3) {
                let grid = log_grid(1.0, 1000.0, 120);
                let a: Vec<f64> = grid.iter().map(|x| p + q * (1.5 - x.log10()) + ripple * (20.0 * x.log10()).sin()).collect();
                let b = vec![0.0; grid.len()];
                let ab = find_crossover(&grid, Curve::new("a", &a), Curve::new("b", &b), CrossoverPick::Last).unwrap();
                let ba = find_crossover(&grid, Curve::new("b", &b), Curve::new("a", &a), CrossoverPick::Last).unwrap();
                match (ab, ba) {
                    (Crossover::At(x), Crossover::At(y)) => {
                        prop_assert_eq!(x.crossover_value, y.crossover_value);
                        prop_assert_eq!(x.scheme_a, y.scheme_a);
                        prop_assert_eq!(x.scheme_b, y.scheme_b);
                    }
                    (Crossover::None { dominant: x }, Crossover::None { dominant: y }) => prop_assert_eq!(x, y),
                    _ => prop_assert!(false, "asymmetric outcome"),
                }
            }
        }
    }
}
