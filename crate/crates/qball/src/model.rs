//! Physical parameters and the piecewise parabolic potential
//! U(f) = ½[f² + ε(1−f) − ε|1−f|], quadratic on each side of the kink at
//! f = 1 with a local minimum at f = ε.

use crate::error::{QballError, Result};
use serde::{Deserialize, Serialize};

/// Which side of the kink a potential evaluation landed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialBranch {
    /// f < 1: U = f²/2.
    Inner,
    /// f = 1 exactly.
    Kink,
    /// f > 1: U = ½[(f−ε)² + ε(2−ε)].
    Outer,
}

/// U(f), its derivative, and the branch flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialValue {
    pub u: f64,
    pub du: f64,
    pub branch: PotentialBranch,
}

/// Physical inputs of a solve. Exactly one of `omega`, `q` drives a
/// self-consistent solution; the other is derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Gauge coupling e ≥ 0.
    pub e: f64,
    /// Potential parameter, 1 < ε ≤ 2. ε = 2 is the degenerate-minima case.
    pub epsilon: f64,
    /// Internal rotation frequency, 0 < ω < 1 when given.
    pub omega: Option<f64>,
    /// Total charge when the solve is charge-driven.
    pub q: Option<f64>,
}

impl ModelParams {
    /// Frequency-driven parameter set.
    pub fn with_omega(e: f64, epsilon: f64, omega: f64) -> Result<Self> {
        let p = Self { e, epsilon, omega: Some(omega), q: None };
        p.validate()?;
        Ok(p)
    }

    /// Charge-driven parameter set.
    pub fn with_charge(e: f64, epsilon: f64, q: f64) -> Result<Self> {
        let p = Self { e, epsilon, omega: None, q: Some(q) };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.e.is_finite() || self.e < 0.0 {
            return Err(QballError::Domain(format!(
                "gauge coupling must be finite and >= 0, got {}",
                self.e
            )));
        }
        if !(self.epsilon > 1.0 && self.epsilon <= 2.0) {
            return Err(QballError::Domain(format!(
                "epsilon must lie in (1, 2], got {}",
                self.epsilon
            )));
        }
        match (self.omega, self.q) {
            (Some(w), None) => {
                if w >= 1.0 {
                    return Err(QballError::NoBoundState(format!(
                        "omega = {w}: a localized solution requires omega < 1"
                    )));
                }
                if w <= 0.0 || !w.is_finite() {
                    return Err(QballError::Domain(format!("omega must lie in (0, 1), got {w}")));
                }
            }
            (None, Some(q)) => {
                if !(q > 0.0 && q.is_finite()) {
                    return Err(QballError::Domain(format!("charge must be finite and > 0, got {q}")));
                }
            }
            (Some(_), Some(_)) => {
                return Err(QballError::Config(
                    "exactly one of omega, q may be prescribed, got both".into(),
                ))
            }
            (None, None) => {
                return Err(QballError::Config(
                    "one of omega, q must be prescribed".into(),
                ))
            }
        }
        Ok(())
    }
}

/// Piecewise parabolic potential and derivative at field magnitude `f`.
///
/// At the kink f = 1 the derivative reports the inner-branch value by
/// convention; the field solvers match the two branches there explicitly
/// and never differentiate across it.
pub fn potential(f: f64, epsilon: f64) -> Result<PotentialValue> {
    if f < 0.0 || !f.is_finite() {
        return Err(QballError::Domain(format!(
            "field magnitude must be finite and >= 0, got {f}"
        )));
    }
    if !(epsilon > 1.0 && epsilon <= 2.0) {
        return Err(QballError::Domain(format!("epsilon must lie in (1, 2], got {epsilon}")));
    }
    Ok(if f < 1.0 {
        PotentialValue { u: 0.5 * f * f, du: f, branch: PotentialBranch::Inner }
    } else if f > 1.0 {
        let d = f - epsilon;
        PotentialValue {
            u: 0.5 * (d * d + epsilon * (2.0 - epsilon)),
            du: d,
            branch: PotentialBranch::Outer,
        }
    } else {
        PotentialValue { u: 0.5, du: 1.0, branch: PotentialBranch::Kink }
    })
}

/// Exterior decay rate ν = √(1 − ω²) of the scalar tail f ~ f₀ e^{−νr}/r.
pub fn nu(omega: f64) -> Result<f64> {
    if omega >= 1.0 {
        return Err(QballError::NoBoundState(format!(
            "omega = {omega}: the tail decay rate is real only for omega < 1"
        )));
    }
    if omega <= 0.0 || !omega.is_finite() {
        return Err(QballError::Domain(format!("omega must lie in (0, 1), got {omega}")));
    }
    Ok((1.0 - omega * omega).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn vacuum_and_kink() {
        let v = potential(0.0, 1.5).unwrap();
        assert_eq!((v.u, v.du), (0.0, 0.0));
        assert_eq!(v.branch, PotentialBranch::Inner);

        let k = potential(1.0, 1.5).unwrap();
        assert_eq!(k.u, 0.5);
        assert_eq!(k.branch, PotentialBranch::Kink);
        // both closed forms give 1/2 at the kink
        let eps = 1.5f64;
        let outer_at_1 = 0.5 * ((1.0 - eps).powi(2) + eps * (2.0 - eps));
        assert_eq!(outer_at_1, 0.5);
    }

    #[test]
    fn local_minimum_at_epsilon() {
        // direct evaluation of both closed forms at f = ε
        let eps = 1.5;
        let v = potential(eps, eps).unwrap();
        assert_relative_eq!(v.u, eps * (2.0 - eps) / 2.0, max_relative = 1e-15);
        assert_eq!(v.u, 0.375);
        assert_eq!(v.du, 0.0);
        let raw = 0.5 * (eps * eps + eps * (1.0 - eps) - eps * (1.0 - eps).abs());
        assert_relative_eq!(v.u, raw, max_relative = 1e-15);
    }

    #[test]
    fn volume_term_value() {
        // U(2) at ε = 1.5 feeds the thin-wall volume energy
        let v = potential(2.0, 1.5).unwrap();
        assert_eq!(v.u, 0.5);
        assert_eq!(v.u, 2.0 - 1.5);
    }

    #[test]
    fn rejects_negative_field_and_bad_epsilon() {
        assert!(potential(-0.1, 1.5).is_err());
        assert!(potential(1.0, 1.0).is_err());
        assert!(potential(1.0, 2.1).is_err());
        assert!(potential(1.0, 2.0).is_ok());
    }

    #[test]
    fn nu_reference_points() {
        assert!(nu(0.0).is_err());
        assert_relative_eq!(nu(0.6).unwrap(), 0.8, max_relative = 1e-15);
        assert!(nu(1.0 - 1e-12).unwrap() > 0.0);
        assert!(nu(1.0).is_err());
        assert!(nu(1.3).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::with_omega(0.1, 1.5, 0.8).is_ok());
        assert!(ModelParams::with_omega(0.1, 1.5, 1.0).is_err());
        assert!(ModelParams::with_omega(-0.1, 1.5, 0.8).is_err());
        assert!(ModelParams::with_charge(0.1, 2.0, 100.0).is_ok());
        assert!(ModelParams::with_charge(0.1, 1.0, 100.0).is_err());
        let both = ModelParams { e: 0.1, epsilon: 1.5, omega: Some(0.8), q: Some(1.0) };
        assert!(both.validate().is_err());
    }

    #[test]
    fn ratio_2u_over_f2_minimizes_at_two() {
        // dense scan: min of 2U/f² over f > 0 sits at f = 2 with value (2-ε)/2
        for &eps in &[1.2, 1.5, 1.9, 2.0] {
            let mut best = (0.0, f64::INFINITY);
            let mut f = 0.01;
            while f < 6.0 {
                let v = potential(f, eps).unwrap();
                let ratio = 2.0 * v.u / (f * f);
                if ratio < best.1 {
                    best = (f, ratio);
                }
                f += 1e-3;
            }
            assert!((best.0 - 2.0).abs() < 2e-3, "eps={eps}: argmin {}", best.0);
            assert_relative_eq!(best.1, (2.0 - eps) / 2.0, epsilon = 1e-5);
            // and U(f) <= f²/2 on [1, ε], equality only at f = 1
            let mut g = 1.0 + 1e-6;
            while g <= eps {
                assert!(potential(g, eps).unwrap().u < 0.5 * g * g);
                g += 1e-3;
            }
        }
    }

    proptest! {
        #[test]
        fn branches_agree_at_kink_and_u_nonnegative(f in 0.0f64..10.0, eps in 1.0001f64..2.0) {
            let v = potential(f, eps).unwrap();
            prop_assert!(v.u >= 0.0);
            // the two closed forms coincide with the |1-f| definition
            let raw = 0.5 * (f * f + eps * (1.0 - f) - eps * (1.0 - f).abs());
            prop_assert!((v.u - raw).abs() <= 1e-14 * (1.0 + raw.abs()));
        }

        #[test]
        fn du_is_derivative_away_from_kink(f in 0.0f64..5.0, eps in 1.0001f64..2.0) {
            let delta = 1e-6;
            prop_assume!((f - 1.0).abs() > delta);
            let h = 1e-7 * (1.0 + f);
            prop_assume!(f - h > 0.0 && (f - 1.0).abs() > h + delta);
            let up = potential(f + h, eps).unwrap().u;
            let dn = potential(f - h, eps).unwrap().u;
            let fd = (up - dn) / (2.0 * h);
            let v = potential(f, eps).unwrap();
            prop_assert!((fd - v.du).abs() <= 1e-8 * (1.0 + v.du.abs()),
                "f={f} fd={fd} du={}", v.du);
        }
    }
}
