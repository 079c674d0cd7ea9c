//! Linear two-point solve of the gauge equation g″ + (2/r)g′ = e²f²g.
//!
//! In the variable u = r·g the first-derivative term drops out, leaving
//! u″ = e²f²·u, which a Numerov tridiagonal solve handles at O(h⁴) on the
//! uniform grid. Boundary data: u(0) = 0 (regularity) and r·g′ + g = ω at
//! r_max, the Robin form of the Coulomb tail g = ω − e²Q/(4πr) that needs
//! no prior knowledge of Q.

use crate::error::{QballError, Result};

/// Solve for g on the uniform grid `r` (r[0] = 0) given scalar samples `f`.
pub fn solve_g_given_f(r: &[f64], f: &[f64], e: f64, omega: f64) -> Result<Vec<f64>> {
    let n = r.len();
    if n < 5 || f.len() != n {
        return Err(QballError::Domain(format!(
            "gauge solve needs >= 5 matched samples, got {} / {}",
            n,
            f.len()
        )));
    }
    if e == 0.0 {
        // equation degenerates: g ≡ ω exactly
        return Ok(vec![omega; n]);
    }
    let h = r[1] - r[0];

    // w_i = e² f_i², the Numerov coefficient
    let w: Vec<f64> = f.iter().map(|&fi| e * e * fi * fi).collect();

    // tridiagonal system over u_1..u_n (u_0 = 0 eliminated)
    let m = n - 1;
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    let h2 = h * h;
    // Numerov for u'' = w·u:
    // u_{i+1}(1 − h²w_{i+1}/12) − 2u_i(1 + 5h²w_i/12) + u_{i−1}(1 − h²w_{i−1}/12) = 0
    for j in 0..m - 1 {
        let i = j + 1; // global node
        sub[j] = 1.0 - h2 * w[i - 1] / 12.0;
        diag[j] = -2.0 * (1.0 + 5.0 * h2 * w[i] / 12.0);
        sup[j] = 1.0 - h2 * w[i + 1] / 12.0;
        rhs[j] = 0.0;
    }
    // u_0 = 0: the j = 0 row's sub-entry multiplies u_0 and vanishes.
    // right boundary: u' = ω with the curvature correction
    // (u_n − u_{n−1})/h = ω − (h/2)·w_n·u_n
    sub[m - 1] = -1.0;
    diag[m - 1] = 1.0 + 0.5 * h2 * w[n - 1];
    sup[m - 1] = 0.0;
    rhs[m - 1] = h * omega;

    // Thomas sweep
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    if diag[0] == 0.0 {
        return Err(QballError::Numerical("singular gauge discretization".into()));
    }
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for j in 1..m {
        let denom = diag[j] - sub[j] * c[j - 1];
        if denom == 0.0 {
            return Err(QballError::Numerical("singular gauge discretization".into()));
        }
        c[j] = if j < m - 1 { sup[j] / denom } else { 0.0 };
        d[j] = (rhs[j] - sub[j] * d[j - 1]) / denom;
    }
    let mut u = vec![0.0; n];
    u[n - 1] = d[m - 1];
    for j in (0..m - 1).rev() {
        u[j + 1] = d[j] - c[j] * u[j + 2];
    }

    let mut g = vec![0.0; n];
    for i in 1..n {
        g[i] = u[i] / r[i];
    }
    // even-function extrapolation to the origin: g0 = (4g1 − g2)/3 + O(h⁴)
    g[0] = (4.0 * g[1] - g[2]) / 3.0;
    if g.iter().any(|v| !v.is_finite()) {
        return Err(QballError::Numerical("gauge solve produced non-finite values".into()));
    }
    Ok(g)
}
