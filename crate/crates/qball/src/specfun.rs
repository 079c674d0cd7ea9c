//! Self-contained special-function kernel: hyperbolic sine integral Shi,
//! exponential integral Ei (principal value), the hyperbolic cosine integral
//! Chi, and the exponential-integral tail ∫_r^∞ Ei(−2νt) dt.
//!
//! Evaluation strategy is the usual split: convergent power series for small
//! arguments, continued fraction / asymptotic series for large ones, with the
//! crossover chosen so both sides agree to better than 1e−11 (tested). Every
//! result carries an absolute error estimate so downstream comparisons can
//! set honest tolerances.

use crate::error::{QballError, Result};

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Overflow guard: sinh/exp of anything past this exceeds f64 range
/// once divided through by the argument.
const ARG_MAX: f64 = 700.0;

/// Crossover between the Shi Taylor series and the Ei/E1 identity.
const SHI_SERIES_MAX: f64 = 12.0;

/// Crossover between the Ei power series and its asymptotic expansion.
const EI_SERIES_MAX: f64 = 40.0;

/// Value plus an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    pub est_abs_error: f64,
}

impl SpecFunResult {
    fn new(value: f64, est_abs_error: f64) -> Self {
        Self { value, est_abs_error }
    }
}

/// E1(x) for x > 0 by series (x ≤ 1) or modified-Lentz continued fraction.
fn e1(x: f64) -> SpecFunResult {
    debug_assert!(x > 0.0);
    if x <= 1.0 {
        // E1(x) = -γ - ln x + Σ_{k≥1} (-1)^{k+1} x^k / (k·k!)
        let mut sum = 0.0;
        let mut term = 1.0;
        let mut roundoff = 0.0f64;
        for k in 1..=40 {
            term *= -x / k as f64;
            let contrib = -term / k as f64;
            sum += contrib;
            roundoff = roundoff.max(contrib.abs());
            if contrib.abs() < 1e-18 * sum.abs().max(1.0) {
                break;
            }
        }
        let value = -EULER_GAMMA - x.ln() + sum;
        SpecFunResult::new(value, 8.0 * f64::EPSILON * (value.abs() + roundoff + 1.0))
    } else {
        // continued fraction e^{-x}/(x+1-1/(x+3-4/(x+5-9/...))), Lentz form
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delta = 0.0;
        for i in 1..=200 {
            let a = -(i as f64) * (i as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            delta = c * d;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let value = h * (-x).exp();
        let est = value.abs() * ((delta - 1.0).abs() + 4.0 * f64::EPSILON);
        SpecFunResult::new(value, est)
    }
}

/// Ei(x) for x > 0 by power series (x ≤ 40) or asymptotic expansion.
fn ei_positive(x: f64) -> SpecFunResult {
    debug_assert!(x > 0.0);
    if x <= EI_SERIES_MAX {
        // Ei(x) = γ + ln x + Σ_{k≥1} x^k / (k·k!)  (all terms positive)
        let mut sum = 0.0;
        let mut term = 1.0;
        let mut n = 0usize;
        for k in 1..=400 {
            term *= x / k as f64;
            let contrib = term / k as f64;
            sum += contrib;
            n = k;
            if contrib < 1e-18 * sum {
                break;
            }
        }
        let value = EULER_GAMMA + x.ln() + sum;
        SpecFunResult::new(value, (n as f64) * f64::EPSILON * (sum + 1.0))
    } else {
        // Ei(x) ~ e^x/x Σ k!/x^k, truncated at the smallest term
        let mut sum = 1.0;
        let mut term = 1.0;
        let mut k = 1.0;
        let mut min_term = 1.0f64;
        while k < x {
            term *= k / x;
            if term >= min_term {
                break;
            }
            min_term = term;
            sum += term;
            k += 1.0;
        }
        let value = x.exp() / x * sum;
        SpecFunResult::new(value, x.exp() / x * min_term)
    }
}

/// Cauchy principal-value exponential integral Ei(x).
///
/// For x < 0 this equals −E1(−x); the positive side is provided for the
/// Shi/Chi decomposition. x = 0 is a logarithmic singularity.
pub fn ei(x: f64) -> Result<SpecFunResult> {
    if x == 0.0 {
        return Err(QballError::Domain("Ei(x) is singular at x = 0".into()));
    }
    if x > ARG_MAX {
        return Err(QballError::Range(format!("Ei({x}) overflows f64")));
    }
    if x < 0.0 {
        // Ei(x) = -E1(-x); underflows harmlessly to -0 for very negative x.
        let r = e1(-x);
        Ok(SpecFunResult::new(-r.value, r.est_abs_error))
    } else {
        Ok(ei_positive(x))
    }
}

/// Hyperbolic sine integral Shi(x) = ∫_0^x sinh(t)/t dt. Odd in x.
pub fn shi(x: f64) -> Result<SpecFunResult> {
    if x.abs() > ARG_MAX {
        return Err(QballError::Range(format!("Shi({x}) overflows f64")));
    }
    let ax = x.abs();
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    if ax <= SHI_SERIES_MAX {
        // Σ x^{2k+1} / ((2k+1)·(2k+1)!)  (all terms positive)
        let x2 = ax * ax;
        let mut term = ax; // x^{2k+1}/(2k+1)!
        let mut sum = ax;
        let mut n = 0usize;
        for k in 1..=60 {
            let m = 2.0 * k as f64;
            term *= x2 / (m * (m + 1.0));
            let contrib = term / (m + 1.0);
            sum += contrib;
            n = k;
            if contrib < 1e-18 * sum {
                break;
            }
        }
        Ok(SpecFunResult::new(
            sign * sum,
            (n as f64 + 4.0) * f64::EPSILON * sum,
        ))
    } else {
        // Shi(x) = [Ei(x) + E1(x)] / 2 for x > 0; both terms positive.
        let a = ei_positive(ax);
        let b = e1(ax);
        Ok(SpecFunResult::new(
            sign * 0.5 * (a.value + b.value),
            0.5 * (a.est_abs_error + b.est_abs_error),
        ))
    }
}

/// Hyperbolic cosine integral Chi(x) = γ + ln x + ∫_0^x (cosh t − 1)/t dt, x > 0.
///
/// Computed as Ei(x) − Shi(x); needed by the reconciled closed form of the
/// second-order gauge profile.
pub fn chi(x: f64) -> Result<SpecFunResult> {
    if x <= 0.0 {
        return Err(QballError::Domain(format!("Chi requires x > 0, got {x}")));
    }
    let a = ei(x)?;
    let b = shi(x)?;
    // Ei and Shi are comparable in size for large x (both ~ e^x/2x), so the
    // subtraction loses accuracy there; reflect that in the estimate.
    let cancel = f64::EPSILON * (a.value.abs() + b.value.abs());
    Ok(SpecFunResult::new(
        a.value - b.value,
        a.est_abs_error + b.est_abs_error + cancel,
    ))
}

/// Tail integral ∫_r^∞ Ei(−2νt) dt, r > 0, ν > 0.
///
/// Closed form −[r·Ei(−2νr) + e^{−2νr}/(2ν)], obtained by differentiating
/// r·Ei(−2νr): the e^{−2νr} it produces is cancelled by the second term.
/// Validated against adaptive quadrature in the test suite.
pub fn ei_tail(r: f64, nu: f64) -> Result<SpecFunResult> {
    if r <= 0.0 || nu <= 0.0 {
        return Err(QballError::Domain(format!(
            "ei_tail requires r > 0 and nu > 0, got r={r}, nu={nu}"
        )));
    }
    let x = 2.0 * nu * r;
    if x > ARG_MAX {
        // both terms underflow; the tail is zero to f64
        return Ok(SpecFunResult::new(0.0, 1e-300));
    }
    let e = ei(-x)?;
    let t1 = r * e.value;
    let t2 = (-x).exp() / (2.0 * nu);
    // t1 and t2 cancel to leading order for large x (value ~ e^{-x}/(4ν²r)),
    // so the estimate is built from the term magnitudes, not the result.
    let est = r * e.est_abs_error + 2.0 * f64::EPSILON * (t1.abs() + t2.abs());
    Ok(SpecFunResult::new(-(t1 + t2), est))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Frozen oracle values, mpmath 40-digit evaluation of the defining
    // integrals/series.
    const SHI_1: f64 = 1.057_250_875_375_728_5;
    const EI_M1: f64 = -0.219_383_934_395_520_27;
    const EI_M2: f64 = -0.048_900_510_708_061_12;

    #[test]
    fn shi_at_zero_and_odd() {
        assert_eq!(shi(0.0).unwrap().value, 0.0);
        let p = shi(1.0).unwrap().value;
        let m = shi(-1.0).unwrap().value;
        assert_eq!(p, -m);
    }

    #[test]
    fn shi_reference_value() {
        let r = shi(1.0).unwrap();
        assert_relative_eq!(r.value, SHI_1, max_relative = 1e-14);
        assert!(r.est_abs_error <= 1e-10 * SHI_1.max(1.0));
    }

    #[test]
    fn shi_matches_quadrature_of_definition() {
        for &x in &[0.3, 1.0, 2.7, 8.0, 15.0, 30.0] {
            let r = shi(x).unwrap();
            let (q, _) = quad::integrate(
                |t| if t == 0.0 { 1.0 } else { t.sinh() / t },
                0.0,
                x,
                1e-13,
                1e-13,
            )
            .unwrap();
            assert_relative_eq!(r.value, q, max_relative = 1e-11);
        }
    }

    #[test]
    fn shi_taylor_series_small_args() {
        // Σ x^{2k+1}/((2k+1)(2k+1)!) summed independently in the test
        for &x in &[0.1, 0.5, 1.0, 1.7, 2.0] {
            let mut sum = 0.0;
            let mut pow = x;
            let mut fact = 1.0;
            for k in 0..30 {
                let n = (2 * k + 1) as f64;
                if k > 0 {
                    pow *= x * x;
                    fact *= (n - 1.0) * n;
                }
                sum += pow / (n * fact);
            }
            assert_relative_eq!(shi(x).unwrap().value, sum, max_relative = 1e-12);
        }
    }

    #[test]
    fn shi_seam_agreement() {
        // series and identity evaluations agree at the crossover
        let x = SHI_SERIES_MAX;
        let series = shi(x - 1e-9).unwrap().value;
        let ident = shi(x + 1e-9).unwrap().value;
        // d(Shi)/dx = sinh(x)/x bridges the 2e-9 gap
        let bridge = 2e-9 * x.sinh() / x;
        assert_relative_eq!(series + bridge, ident, max_relative = 1e-11);
    }

    #[test]
    fn shi_overflow_guard() {
        assert!(shi(701.0).is_err());
        assert!(shi(-701.0).is_err());
        assert!(shi(699.0).is_ok());
    }

    #[test]
    fn ei_reference_values() {
        let r1 = ei(-1.0).unwrap();
        assert_relative_eq!(r1.value, EI_M1, max_relative = 1e-14);
        let r2 = ei(-2.0).unwrap();
        assert_relative_eq!(r2.value, EI_M2, max_relative = 1e-14);
        assert!(r1.est_abs_error <= 1e-10);
    }

    #[test]
    fn ei_singular_and_overflow() {
        assert!(ei(0.0).is_err());
        assert!(ei(701.0).is_err());
    }

    #[test]
    fn ei_far_negative_limit() {
        let v = ei(-500.0).unwrap().value;
        assert!(v < 0.0 && v > -1e-215);
    }

    #[test]
    fn ei_seam_agreement() {
        // series vs asymptotic at the positive crossover
        let lo = ei(EI_SERIES_MAX - 1e-9).unwrap().value;
        let hi = ei(EI_SERIES_MAX + 1e-9).unwrap().value;
        let bridge = 2e-9 * EI_SERIES_MAX.exp() / EI_SERIES_MAX;
        assert_relative_eq!(lo + bridge, hi, max_relative = 1e-11);
    }

    #[test]
    fn e1_series_cf_seam() {
        let lo = e1(1.0 - 1e-9).value;
        let hi = e1(1.0 + 1e-9).value;
        let bridge = 2e-9 * (-1.0f64).exp() / 1.0;
        assert_relative_eq!(lo - bridge, hi, max_relative = 1e-11);
    }

    #[test]
    fn ei_negative_representation_integral() {
        // Ei(-x) = -e^{-x} ∫_1^∞ dt / (t² (x + ln t)), checked through the
        // substitution s = ln t. (The printed relation carries e^{+x}; the
        // derivation and this check pin the sign of the exponent.)
        for i in 0..20 {
            let x = 10f64.powf(-1.0 + 2.0 * i as f64 / 19.0); // 0.1 .. 10
            let (int, _) =
                quad::integrate_to_inf(|s| (-s).exp() / (x + s), 0.0, 1e-13, 1e-13).unwrap();
            let lhs = ei(-x).unwrap().value;
            assert_relative_eq!(lhs, -(-x).exp() * int, max_relative = 1e-10);
        }
    }

    #[test]
    fn chi_consistency() {
        // Chi(x) = γ + ln x + ∫_0^x (cosh t - 1)/t dt
        for &x in &[0.5, 1.3, 3.0, 9.0] {
            let (int, _) = quad::integrate(
                |t| if t == 0.0 { 0.0 } else { (t.cosh() - 1.0) / t },
                0.0,
                x,
                1e-13,
                1e-13,
            )
            .unwrap();
            let expect = EULER_GAMMA + x.ln() + int;
            assert_relative_eq!(chi(x).unwrap().value, expect, max_relative = 1e-11);
        }
    }

    #[test]
    fn ei_tail_matches_quadrature() {
        let (q, _) = quad::integrate_to_inf(
            |t| ei(-2.0 * t).map(|r| r.value).unwrap_or(0.0),
            1.0,
            1e-13,
            1e-13,
        )
        .unwrap();
        let r = ei_tail(1.0, 1.0).unwrap();
        assert_relative_eq!(r.value, q, max_relative = 1e-10);
    }

    #[test]
    fn ei_tail_vanishes_at_infinity() {
        let far = ei_tail(300.0, 1.0).unwrap().value;
        assert!(far.abs() < 1e-250);
        assert_eq!(ei_tail(1e6, 1.0).unwrap().value, 0.0);
    }

    #[test]
    fn ei_tail_derivative_is_minus_ei() {
        // d/dr ∫_r^∞ Ei(-2νt) dt = -Ei(-2νr), central difference
        let nu = 0.8;
        for &r in &[0.5, 1.0, 2.0, 4.0] {
            let h = 1e-5;
            let fd = (ei_tail(r + h, nu).unwrap().value - ei_tail(r - h, nu).unwrap().value)
                / (2.0 * h);
            let expect = -ei(-2.0 * nu * r).unwrap().value;
            assert_relative_eq!(fd, expect, max_relative = 1e-6);
        }
    }

    #[test]
    fn ei_tail_rejects_bad_domain() {
        assert!(ei_tail(0.0, 1.0).is_err());
        assert!(ei_tail(1.0, 0.0).is_err());
        assert!(ei_tail(-1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn shi_is_odd(x in -600.0f64..600.0) {
            let p = shi(x).unwrap().value;
            let m = shi(-x).unwrap().value;
            prop_assert_eq!(p, -m);
        }

        #[test]
        fn ei_monotone_on_negative_axis(a in -200.0f64..-1e-3, d in 1e-3f64..10.0) {
            // dEi/dx = e^x/x < 0 for x < 0: decreasing toward -∞ at 0⁻
            let further = ei(a - d).unwrap().value;
            let closer = ei(a).unwrap().value;
            prop_assert!(further >= closer);
        }

        #[test]
        fn error_estimates_are_honest_for_moderate_args(x in 0.01f64..100.0) {
            let r = shi(x).unwrap();
            prop_assert!(r.est_abs_error <= 1e-10 * r.value.abs().max(1.0));
            let e = ei(-x).unwrap();
            prop_assert!(e.est_abs_error <= 1e-10 * e.value.abs().max(1.0));
        }
    }
}
