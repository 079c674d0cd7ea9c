//! Adaptive Gauss–Kronrod quadrature used by the Picard iterates and by the
//! self-check suite. 15-point Kronrod rule with 7-point Gauss embedding,
//! refined by interval bisection on a worst-first heap.

use crate::error::{QballError, Result};

// G7K15 nodes and weights on [-1, 1] (positive half; rule is symmetric).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Kronrod panel: returns (integral, error estimate).
fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = fc.abs() * WGK[7];

    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for (j, v) in fv.iter().enumerate().take(15) {
        if j != 7 {
            res_asc += WGK[if j < 7 { j } else { 14 - j }] * (v - mean).abs();
        }
    }

    let err_raw = ((res_k - res_g) * half).abs();
    let res_asc = res_asc * half.abs();
    // QUADPACK error rescaling: sharpen the raw estimate when it is tiny
    // compared to the variation of the integrand.
    let mut err = err_raw;
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let res_abs = res_abs * half.abs();
    let min_err = 50.0 * f64::EPSILON * res_abs;
    if min_err > err {
        err = min_err;
    }

    (res_k * half, err)
}

/// Integral of `f` over the finite interval [a, b] (a > b allowed, sign flips).
///
/// Bisects the worst panel until the summed error estimate is below
/// `abs_tol + rel_tol * |integral|`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    struct Panel {
        a: f64,
        b: f64,
        val: f64,
        err: f64,
    }

    let (val, err) = kronrod(&f, lo, hi);
    let mut panels = vec![Panel { a: lo, b: hi, val, err }];
    let max_panels = 2000;

    loop {
        let total: f64 = panels.iter().map(|p| p.val).sum();
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        let total_abs: f64 = panels.iter().map(|p| p.val.abs()).sum();
        // the per-panel estimates carry a 50·eps·|I| rounding floor, so the
        // sum cannot drop below that no matter how far we subdivide
        let floor = 60.0 * f64::EPSILON * total_abs * panels.len() as f64;
        if total_err <= (abs_tol + rel_tol * total.abs()).max(floor) {
            return Ok((sign * total, total_err));
        }
        if panels.len() >= max_panels {
            return Err(QballError::Numerical(format!(
                "quadrature did not converge: {} panels, error {:.3e} (target {:.3e}) on [{lo:.6e}, {hi:.6e}]",
                panels.len(),
                total_err,
                abs_tol + rel_tol * total.abs()
            )));
        }
        // split the worst panel
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap();
        let Panel { a: pa, b: pb, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            return Err(QballError::Numerical(format!(
                "quadrature panel collapsed at [{pa:.17e}, {pb:.17e}]"
            )));
        }
        let (v1, e1) = kronrod(&f, pa, mid);
        let (v2, e2) = kronrod(&f, mid, pb);
        panels.push(Panel { a: pa, b: mid, val: v1, err: e1 });
        panels.push(Panel { a: mid, b: pb, val: v2, err: e2 });
    }
}

/// Integral of `f` over [a, ∞), via the map t = a + u/(1-u) on u ∈ [0, 1).
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, abs_tol: f64, rel_tol: f64) -> Result<(f64, f64)> {
    let g = |u: f64| {
        let one_minus = 1.0 - u;
        if one_minus <= 0.0 {
            return 0.0;
        }
        let t = a + u / one_minus;
        let jac = 1.0 / (one_minus * one_minus);
        let v = f(t) * jac;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, abs_tol, rel_tol)
}
