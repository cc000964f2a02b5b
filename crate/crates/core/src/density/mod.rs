//! Numerical Laplace inversion of the area transform to a density grid,
//! plus tail and shape diagnostics.
//!
//! Two inversion routes are provided. The deformed-contour route (fixed
//! Talbot, the standard cosh-shaped node rule) is the default and is
//! excellent for transforms that decay in the left half plane — the
//! known-pair self test runs on it. The area transform itself is entire
//! with e^(Re z)²-type growth to the left, so any leftward contour
//! diverges; the node sums trip the instability guard and the
//! implementation falls back to the shifted-line route: a Bromwich
//! integral on Re z = c with the slowly decaying part of the transform
//! removed analytically. The removed part is the Mellin-derived
//! expansion Σ d·z^(-p), whose inverse is elementary, so the remaining
//! Fourier integral decays like |z|^(-4) and a plain trapezoid ladder
//! reaches ~1e-7 absolute accuracy with a thousand shared nodes.

pub mod probe;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::psi::{psi_asymptotic_terms, psi_auto};
use crate::analytic::tail::{conjectured_density, conjectured_prefactor};
use crate::error::{Error, Result};
use crate::numerics::gamma::log_gamma;
use crate::numerics::quadrature::{integrate_finite, QuadratureConfig};

pub use probe::{tail_probe, TailProbeRow};

/// How to invert the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InversionMethod {
    /// Fixed deformed (Talbot) contour; diverges on entire
    /// order-two transforms and then falls back automatically.
    FixedDeformedContour,
    /// Shifted Bromwich line with asymptotic-series acceleration.
    BromwichSeriesAcceleration,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourConfig {
    /// Trapezoid node count (Bromwich) or contour node count (Talbot).
    pub node_count: u32,
    /// Scale multiplier: shifts the Bromwich abscissa c = shape/2 and the
    /// Talbot radius.
    pub shape: f64,
    pub method: InversionMethod,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self {
            node_count: 1024,
            shape: 1.0,
            method: InversionMethod::FixedDeformedContour,
        }
    }
}

impl ContourConfig {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 8 {
            return Err(Error::Domain(format!(
                "node_count must be >= 8, got {}",
                self.node_count
            )));
        }
        if !(self.shape > 0.0) {
            return Err(Error::Domain(format!("shape must be > 0, got {}", self.shape)));
        }
        Ok(())
    }
}

/// Density values on a grid plus integral diagnostics. The tail columns
/// derived from the conjectured density shape are labeled conjectural
/// wherever they surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    pub xs: Vec<f64>,
    pub fs: Vec<f64>,
    /// ∫ f over the grid, closed on the right with the conjectured shape.
    pub normalization: f64,
    /// ∫ x f with the same closure.
    pub mean_check: f64,
    /// ln f(x) + 3x²/2 − (1/3) ln x per grid point (NaN where f ≤ 0).
    pub tail_diag: Vec<f64>,
    /// Which inversion route actually produced the values.
    pub method_used: String,
}

/// Largest abscissa the inversion supports; beyond it the density is
/// below 1e-10 and the grid carries no information.
pub const X_MAX_SUPPORTED: f64 = 4.0;

const RINGING_FLOOR: f64 = -1e-6;
const TALBOT_INDEX_LIMIT: f64 = 1e8;

/// Fixed-Talbot evaluation of one inverse value.
fn talbot_invert(
    eval: &dyn Fn(Complex64) -> Result<Complex64>,
    x: f64,
    m: u32,
    shape: f64,
) -> Result<f64> {
    let m = m.max(8);
    let r = shape * 2.0 * m as f64 / (5.0 * x);
    let mut sum = 0.5 * eval(Complex64::new(r, 0.0))?.re * (r * x).exp();
    let mut max_term = sum.abs();
    for k in 1..m {
        let theta = k as f64 * std::f64::consts::PI / m as f64;
        let cot = theta.cos() / theta.sin();
        let z = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let term = ((z * x).exp() * eval(z)? * Complex64::new(1.0, sigma)).re;
        if !term.is_finite() {
            return Err(Error::ContourInstability(format!(
                "non-finite node sum on the deformed contour at x={x}"
            )));
        }
        max_term = max_term.max(term.abs());
        sum += term;
    }
    let value = sum * r / m as f64;
    let index = max_term / value.abs().max(f64::MIN_POSITIVE);
    if index > TALBOT_INDEX_LIMIT {
        return Err(Error::ContourInstability(format!(
            "deformed-contour cancellation index {index:.3e} at x={x}"
        )));
    }
    Ok(value)
}

/// Re-express Σ d·z^(-q) as Σ c·(z+κ)^(-p) with p ≤ cutoff, using
/// z^(-q) = Σ_m (q)_m/m! · κ^m (z+κ)^(-q-m).
fn shift_asymptotics(terms: &[(f64, f64)], kappa: f64, cutoff: f64) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for &(d, q) in terms {
        let mut poch = 1.0; // (q)_m / m!
        let mut kap = 1.0;
        let mut m = 0.0;
        while q + m <= cutoff {
            let coeff = d * poch * kap;
            if let Some(slot) = out.iter_mut().find(|(_, p)| (*p - (q + m)).abs() < 1e-12) {
                slot.0 += coeff;
            } else {
                out.push((coeff, q + m));
            }
            poch *= (q + m) / (m + 1.0);
            kap *= kappa;
            m += 1.0;
        }
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out
}

struct BromwichPlan {
    kappa: f64,
    c: f64,
    h: f64,
    shifted: Vec<(f64, f64)>,
    /// R(c + ikh) for k = 0..=N
    residual_nodes: Vec<Complex64>,
}

impl BromwichPlan {
    fn build(
        eval: &dyn Fn(Complex64) -> Result<Complex64>,
        asymptotics: &[(f64, f64)],
        x_max: f64,
        node_count: u32,
        shape: f64,
    ) -> Result<Self> {
        let kappa = 1.0;
        let c = 0.5 * shape;
        let period = x_max + 8.0;
        let h = std::f64::consts::PI / period;
        let shifted = shift_asymptotics(asymptotics, kappa, 3.75);
        let mut residual_nodes = Vec::with_capacity(node_count as usize + 1);
        for k in 0..=node_count {
            let z = Complex64::new(c, k as f64 * h);
            let mut r = eval(z)?;
            for &(coeff, p) in &shifted {
                r -= coeff * (z + kappa).powf(-p);
            }
            residual_nodes.push(r);
        }
        Ok(Self { kappa, c, h, shifted, residual_nodes })
    }

    /// Elementary inverse of the subtracted part:
    /// Σ c·x^(p-1) e^(-κx) / Γ(p).
    fn subtracted_inverse(&self, x: f64) -> f64 {
        self.shifted
            .iter()
            .map(|&(coeff, p)| {
                coeff * x.powf(p - 1.0) * (-self.kappa * x).exp()
                    / log_gamma(p).unwrap().exp()
            })
            .sum()
    }

    fn invert_at(&self, x: f64) -> f64 {
        let mut acc = 0.5 * self.residual_nodes[0].re;
        for (k, r) in self.residual_nodes.iter().enumerate().skip(1) {
            let phase = Complex64::new(0.0, k as f64 * self.h * x).exp();
            acc += (r * phase).re;
        }
        self.subtracted_inverse(x)
            + (self.c * x).exp() / std::f64::consts::PI * self.h * acc
    }
}

/// Invert an arbitrary transform on a grid. `asymptotics` is the
/// large-|z| expansion Σ d·z^(-p) used by the Bromwich route.
fn invert_on_grid(
    eval: &dyn Fn(Complex64) -> Result<Complex64>,
    asymptotics: &[(f64, f64)],
    xs: &[f64],
    cfg: &ContourConfig,
) -> Result<(Vec<f64>, &'static str)> {
    cfg.validate()?;
    if cfg.method == InversionMethod::FixedDeformedContour {
        let attempt: Result<Vec<f64>> = xs
            .iter()
            .map(|&x| talbot_invert(eval, x, cfg.node_count.min(64), cfg.shape))
            .collect();
        match attempt {
            Ok(fs) => return Ok((fs, "fixed_deformed_contour")),
            // An entire transform of order two blows up along the
            // leftward contour; fall back to the shifted line.
            Err(Error::ContourInstability(_)) | Err(Error::Domain(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let x_max = xs.last().copied().unwrap_or(1.0);
    let plan = BromwichPlan::build(eval, asymptotics, x_max, cfg.node_count, cfg.shape)?;
    Ok((
        xs.iter().map(|&x| plan.invert_at(x)).collect(),
        "bromwich_series_acceleration",
    ))
}

/// Invert the area transform to a density estimate on `xs`.
pub fn invert_density(xs: &[f64], cfg: &ContourConfig) -> Result<DensityGrid> {
    cfg.validate()?;
    if xs.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    for w in xs.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Domain("grid must be strictly increasing".into()));
        }
    }
    if xs[0] <= 0.0 {
        return Err(Error::Domain("grid must be positive".into()));
    }
    let x_max = *xs.last().unwrap();
    if x_max > X_MAX_SUPPORTED {
        return Err(Error::Domain(format!(
            "x_max {x_max} beyond supported range {X_MAX_SUPPORTED}"
        )));
    }

    let eval = |z: Complex64| psi_auto(z).map(|(v, _)| v);
    // Anchor near zero closes the normalization integral on the left.
    let anchor = (0.5 * xs[0]).min(1e-3);
    let mut grid: Vec<f64> = Vec::with_capacity(xs.len() + 1);
    grid.push(anchor);
    grid.extend_from_slice(xs);
    let (all_fs, method_used) =
        invert_on_grid(&eval, &psi_asymptotic_terms(), &grid, cfg)?;

    for (x, f) in grid.iter().zip(&all_fs) {
        if *f < RINGING_FLOOR {
            return Err(Error::ContourInstability(format!(
                "negative ringing f({x}) = {f} below {RINGING_FLOOR}"
            )));
        }
    }

    let fs = all_fs[1..].to_vec();
    let f_anchor = all_fs[0];

    let mut normalization = f_anchor.max(0.0) * anchor;
    let mut mean_check = 0.5 * f_anchor.max(0.0) * anchor * anchor;
    for i in 0..grid.len() - 1 {
        let dx = grid[i + 1] - grid[i];
        normalization += 0.5 * dx * (all_fs[i] + all_fs[i + 1]);
        mean_check += 0.5 * dx * (grid[i] * all_fs[i] + grid[i + 1] * all_fs[i + 1]);
    }
    // Right closure beyond x_max uses the conjectured shape (labeled
    // conjectural; at the supported x_max the mass involved is < 1e-4).
    let quad = QuadratureConfig::default();
    let tail_mass = integrate_finite(
        |x| conjectured_density(x).unwrap_or(0.0),
        x_max,
        x_max + 6.0,
        &quad,
    )?
    .value;
    let tail_mean = integrate_finite(
        |x| x * conjectured_density(x).unwrap_or(0.0),
        x_max,
        x_max + 6.0,
        &quad,
    )?
    .value;
    normalization += tail_mass;
    mean_check += tail_mean;

    let tail_diag = xs
        .iter()
        .zip(&fs)
        .map(|(&x, &f)| {
            if f > 0.0 {
                f.ln() + 1.5 * x * x - x.ln() / 3.0
            } else {
                f64::NAN
            }
        })
        .collect();

    Ok(DensityGrid {
        xs: xs.to_vec(),
        fs,
        normalization,
        mean_check,
        tail_diag,
        method_used: method_used.to_string(),
    })
}

/// Invert the known pair F(z) = (1+z)^(-1) ↔ e^(-x) with the configured
/// method and report the largest absolute error on [0.1, 5].
pub fn known_pair_self_test(cfg: &ContourConfig) -> Result<f64> {
    let eval = |z: Complex64| Ok((z + 1.0).inv());
    // 1/(1+z) = z^{-1} - z^{-2} + z^{-3} - ...
    let asym = [(1.0, 1.0), (-1.0, 2.0), (1.0, 3.0)];
    let xs: Vec<f64> = (0..50).map(|i| 0.1 + i as f64 * 0.1).collect();
    let (fs, _) = invert_on_grid(&eval, &asym, &xs, cfg)?;
    Ok(xs
        .iter()
        .zip(&fs)
        .map(|(&x, &f)| (f - (-x).exp()).abs())
        .fold(0.0, f64::max))
}

/// Summary of the density-shape diagnostic against the conjectured form:
/// the local slope of ln f + 3x²/2 in ln x and the implied constant.
/// Reported, never passed/failed — the underlying form is a conjecture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureDiagnostic {
    pub slope: f64,
    pub constant: f64,
    pub reference_slope: f64,
    pub reference_constant: f64,
    pub points_used: usize,
    pub insufficient_range: bool,
    pub conjectural: bool,
}

/// Least-squares fit of ln f(x) + 3x²/2 = slope·ln x + ln(constant) over
/// grid points with x ≥ 0.8.
pub fn conjecture_diagnostic(grid: &DensityGrid) -> ConjectureDiagnostic {
    let pts: Vec<(f64, f64)> = grid
        .xs
        .iter()
        .zip(&grid.fs)
        .filter(|(&x, &f)| x >= 0.8 && f > 0.0)
        .map(|(&x, &f)| (x.ln(), f.ln() + 1.5 * x * x))
        .collect();
    if pts.len() < 3 {
        return ConjectureDiagnostic {
            slope: f64::NAN,
            constant: f64::NAN,
            reference_slope: 1.0 / 3.0,
            reference_constant: conjectured_prefactor(),
            points_used: pts.len(),
            insufficient_range: true,
            conjectural: true,
        };
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    ConjectureDiagnostic {
        slope,
        constant: intercept.exp(),
        reference_slope: 1.0 / 3.0,
        reference_constant: conjectured_prefactor(),
        points_used: pts.len(),
        insufficient_range: false,
        conjectural: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_machinery_is_exact_on_known_pair() {
        let eval_exact = |z: Complex64| Ok((z + 1.0).inv());
        let asym_exact = [(1.0, 1.0), (-1.0, 2.0), (1.0, 3.0)];
        let plan = BromwichPlan::build(&eval_exact, &asym_exact, 2.0, 2048, 1.0).unwrap();
        for x in [0.25f64, 1.0, 2.0] {
            assert!((plan.invert_at(x) - (-x).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn talbot_self_test_hits_known_pair() {
        let cfg = ContourConfig {
            node_count: 48,
            shape: 1.0,
            method: InversionMethod::FixedDeformedContour,
        };
        let err = known_pair_self_test(&cfg).unwrap();
        assert!(err < 1e-9, "max error {err}");
    }

    #[test]
    fn bromwich_self_test_hits_known_pair() {
        let cfg = ContourConfig {
            node_count: 1024,
            shape: 1.0,
            method: InversionMethod::BromwichSeriesAcceleration,
        };
        let err = known_pair_self_test(&cfg).unwrap();
        assert!(err < 1e-6, "max error {err}");
    }

    #[test]
    fn shift_expansion_reproduces_power() {
        // z^{-1} re-expanded around z+1 then re-summed at a test point
        let shifted = shift_asymptotics(&[(1.0, 1.0)], 1.0, 6.0);
        let z = 10.0f64;
        let direct = 1.0 / z;
        let summed: f64 = shifted.iter().map(|&(c, p)| c * (z + 1.0).powf(-p)).sum();
        assert!((direct - summed).abs() < (z + 1.0).powf(-7.0) * 2.0);
    }

    #[test]
    fn density_grid_matches_product_form_references() {
        // References from the exact Beta–Gamma mixture density evaluated
        // in 60-digit arithmetic, independently confirmed by a
        // high-precision Gaver–Stehfest inversion of the series
        // transform (agreement 1e-8 at x = 1).
        let refs = [
            (0.05, 0.94813721902163926),
            (0.1, 1.0250898434412370),
            (0.25, 1.1252918554647231),
            (0.5, 1.0100020971483771),
            (1.0, 0.40168977286750456),
            (1.5, 0.069987966361037655),
            (2.0, 0.0055634057136093792),
        ];
        let xs: Vec<f64> = refs.iter().map(|r| r.0).collect();
        let grid = invert_density(&xs, &ContourConfig::default()).unwrap();
        assert_eq!(grid.method_used, "bromwich_series_acceleration");
        for ((x, want), got) in refs.iter().zip(&grid.fs) {
            assert!(
                (got - want).abs() < 1e-7,
                "f({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn normalization_and_mean() {
        let xs: Vec<f64> = (1..=260).map(|i| i as f64 * 0.01).collect();
        let grid = invert_density(&xs, &ContourConfig::default()).unwrap();
        assert!((grid.normalization - 1.0).abs() < 1e-3, "norm {}", grid.normalization);
        assert!(
            (grid.mean_check - 0.53192304053524357).abs() < 1e-3,
            "mean {}",
            grid.mean_check
        );
    }

    #[test]
    fn node_doubling_is_stable() {
        let xs = [0.3, 0.8, 1.5, 2.2];
        let a = invert_density(
            &xs,
            &ContourConfig { node_count: 1024, ..Default::default() },
        )
        .unwrap();
        let b = invert_density(
            &xs,
            &ContourConfig { node_count: 2048, ..Default::default() },
        )
        .unwrap();
        for (fa, fb) in a.fs.iter().zip(&b.fs) {
            assert!((fa - fb).abs() < 1e-6, "{fa} vs {fb}");
        }
    }

    #[test]
    fn diagnostic_on_synthetic_conjectured_input() {
        let xs: Vec<f64> = (0..60).map(|i| 0.8 + i as f64 * 0.02).collect();
        let fs: Vec<f64> = xs.iter().map(|&x| conjectured_density(x).unwrap()).collect();
        let tail_diag = vec![0.0; xs.len()];
        let grid = DensityGrid {
            xs,
            fs,
            normalization: 1.0,
            mean_check: 0.5,
            tail_diag,
            method_used: "synthetic".into(),
        };
        let d = conjecture_diagnostic(&grid);
        assert!(!d.insufficient_range);
        assert!((d.slope - 1.0 / 3.0).abs() < 1e-9, "slope {}", d.slope);
        assert!((d.constant - conjectured_prefactor()).abs() < 1e-9);
        assert!(d.conjectural);
    }

    #[test]
    fn diagnostic_insufficient_range_marker() {
        let grid = DensityGrid {
            xs: vec![0.1, 0.2],
            fs: vec![0.3, 0.5],
            normalization: 1.0,
            mean_check: 0.5,
            tail_diag: vec![0.0, 0.0],
            method_used: "synthetic".into(),
        };
        let d = conjecture_diagnostic(&grid);
        assert!(d.insufficient_range);
    }

    #[test]
    fn rejects_bad_grids() {
        let cfg = ContourConfig::default();
        assert!(invert_density(&[], &cfg).is_err());
        assert!(invert_density(&[0.5, 0.4], &cfg).is_err());
        assert!(invert_density(&[-0.1, 0.4], &cfg).is_err());
        assert!(invert_density(&[1.0, 5.5], &cfg).is_err());
    }
}
