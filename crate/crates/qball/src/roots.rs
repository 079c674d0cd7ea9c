//! Bracketing root finders shared by the analytic and numeric branches.

use crate::error::{QballError, Result};

/// Brent's method on a bracket [a, b] with f(a)·f(b) ≤ 0.
///
/// Converges to |b - a| ≤ xtol + rtol·|root| or |f| below machine noise.
pub fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    xtol: f64,
    rtol: f64,
) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(QballError::NoSolution(format!(
            "no sign change on bracket [{a:.6e}, {b:.6e}]: f = [{fa:.6e}, {fb:.6e}]"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.abs() > fc.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * (xtol + rtol * b.abs());
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() < tol || fa.abs() <= fb.abs() {
            d = m;
            e = m;
        } else {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                // secant
                (2.0 * m * s, 1.0 - s)
            } else {
                // inverse quadratic
                let qq = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0)),
                    (qq - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min(e * q) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol * m.signum() };
        fb = f(b);
        if fb.signum() * fc.signum() > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(QballError::Numerical("brent: iteration limit".into()))
}

/// Geometric scan over [lo, hi] for a sign change of `f`, then Brent.
///
/// Returns the root, or reports the scanned bracket when no sign change
/// exists.
pub fn geometric_bracket_solve<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    points: usize,
    xtol: f64,
    rtol: f64,
) -> Result<f64> {
    assert!(lo > 0.0 && hi > lo && points >= 2);
    let ratio = (hi / lo).powf(1.0 / (points - 1) as f64);
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    if f_prev == 0.0 {
        return Ok(lo);
    }
    let mut x = lo;
    for _ in 1..points {
        x *= ratio;
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() != f_prev.signum() {
            return brent(f, x_prev, x, xtol, rtol);
        }
        x_prev = x;
        f_prev = fx;
    }
    Err(QballError::NoSolution(format!(
        "no sign change over geometric scan [{lo:.6e}, {hi:.6e}] ({points} points)"
    )))
}

/// Golden-section minimizer on [a, b] for a unimodal objective.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
