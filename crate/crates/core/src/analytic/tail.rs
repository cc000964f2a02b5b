//! Tail rate of ln P(A > x) and the conjectured density shape.
//!
//! The quadratic rate is a proved consequence of the moment growth; the
//! full density form is conjectural and every consumer labels it so.

use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::numerics::gamma::log_gamma;

/// Leading term of ln P(A > x): −3x²/2.
pub fn tail_log_asymptote(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x must be > 0, got {x}")));
    }
    Ok(-1.5 * x * x)
}

/// Prefactor 2·3^(1/6)/Γ(2/3) of the conjectured density.
pub fn conjectured_prefactor() -> f64 {
    static P: LazyLock<f64> = LazyLock::new(|| {
        2.0 * 3.0f64.powf(1.0 / 6.0) * (-log_gamma(2.0 / 3.0).unwrap()).exp()
    });
    *P
}

/// CONJECTURAL density shape (2·3^(1/6)/Γ(2/3)) · x^(1/3) · e^(-3x²/2).
/// This is an unproven asymptotic form; outputs built on it must carry a
/// conjectural label.
pub fn conjectured_density(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x must be > 0, got {x}")));
    }
    Ok(conjectured_prefactor() * x.powf(1.0 / 3.0) * (-1.5 * x * x).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptote_point_values() {
        assert_eq!(tail_log_asymptote(1.0).unwrap(), -1.5);
        assert_eq!(tail_log_asymptote(2.0).unwrap(), -6.0);
    }

    #[test]
    fn asymptote_quadratic_scaling() {
        for x in [0.3, 1.1, 2.7] {
            let v = tail_log_asymptote(x).unwrap();
            let v2 = tail_log_asymptote(2.0 * x).unwrap();
            assert!((v2 - 4.0 * v).abs() < 1e-12 * v.abs());
        }
    }

    #[test]
    fn prefactor_value() {
        assert!((conjectured_prefactor() - 1.7737553284091567).abs() < 1e-13);
    }

    #[test]
    fn density_at_one() {
        let want = conjectured_prefactor() * (-1.5f64).exp();
        assert!((conjectured_density(1.0).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn log_density_functional_form_is_flat() {
        // ln f(x) + 3x²/2 − (1/3) ln x should not depend on x.
        let probe = |x: f64| {
            conjectured_density(x).unwrap().ln() + 1.5 * x * x - x.ln() / 3.0
        };
        let base = probe(0.5);
        for x in [0.8, 1.0, 1.7, 2.5] {
            assert!((probe(x) - base).abs() < 1e-12);
        }
    }
}
