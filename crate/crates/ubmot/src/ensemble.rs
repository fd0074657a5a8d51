//! Determinantal structure of the identity-start ensemble: circle weight
//! and its Fourier coefficients, the biorthogonal polynomial / series
//! pair, the correlation kernel, the finite-`N` one-point density, and
//! the exact joint eigenvalue density for tiny `N` (the quadrature
//! oracle that adjudicates normalisation conventions).
//!
//! All bilateral sums decay like `q^((l - (N-1)/2)^2)` against at most
//! factorial growth, so truncation windows carry certified tail bounds.

use crate::quad;
use crate::specfun;
use crate::{EnsembleParams, Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Fourier coefficient of the circle weight at integer index `s`:
/// `q^((s - (N-1)/2)^2)`.
pub fn spherical_weight(params: EnsembleParams, s: i64) -> f64 {
    let d = s as f64 - params.centre();
    (params.q.ln() * d * d).exp()
}

/// Log-magnitude/sign table of the kernel coefficients
/// `a_j = (-1)^j q^(-(j-c)^2) / (G(N-j) G(j+1))` for `0 <= j < N` and
/// `b_l = (-l)_N q^((l-c)^2)` on a truncation window of `l` outside
/// `{0, .., N-1}`; `(-l)_N` is the rising factorial the differentiated
/// weight produces (it vanishes identically on `{0, .., N-1}`).
#[derive(Debug, Clone)]
pub struct KernelCoeffs {
    params: EnsembleParams,
    ln_a: Vec<f64>,
    /// `(l, ln|b_l|, sign)` for `l` on both window sides.
    b: Vec<(i64, f64, f64)>,
}

impl KernelCoeffs {
    pub fn new(params: EnsembleParams) -> Result<Self> {
        let n = params.n as i64;
        let c = params.centre();
        let lnq = params.q.ln();
        let ln_a = (0..n)
            .map(|j| {
                let d = j as f64 - c;
                -lnq * d * d
                    - specfun::ln_gamma((n - j) as f64)
                    - specfun::ln_gamma(j as f64 + 1.0)
            })
            .collect();

        let mut b = Vec::new();
        let mut push_side = |b: &mut Vec<(i64, f64, f64)>, start: i64, step: i64| -> Result<()> {
            let mut l = start;
            let mut max_ln = f64::NEG_INFINITY;
            loop {
                let (ln_b, sign) = b_coeff(n, c, lnq, l);
                b.push((l, ln_b, sign));
                max_ln = max_ln.max(ln_b);
                if ln_b < max_ln - 46.0 {
                    break; // tail below e^-46 of the largest retained term
                }
                l += step;
                if (l - start).abs() > 100_000 {
                    return Err(Error::stability(
                        "kernel coefficient window failed to close",
                    ));
                }
            }
            Ok(())
        };
        push_side(&mut b, -1, -1)?;
        push_side(&mut b, n, 1)?;
        Ok(Self { params, ln_a, b })
    }

    fn n(&self) -> i64 {
        self.params.n as i64
    }
}

fn b_coeff(n: i64, c: f64, lnq: f64, l: i64) -> (f64, f64) {
    // rising factorial (-l)_N with sign tracking
    let mut ln = 0.0;
    let mut sign = 1.0;
    for i in 0..n {
        let f = (i - l) as f64;
        ln += f.abs().ln();
        if f < 0.0 {
            sign = -sign;
        }
    }
    let d = l as f64 - c;
    (ln + lnq * d * d, sign)
}

/// Biorthogonal polynomial
/// `P_j(z) = sum_k (-z)^k / ((j-k)! k! Sw(k))`, degree `j <= N-1`.
pub fn biorth_p(params: EnsembleParams, j: u32, z: Complex64) -> Result<Complex64> {
    if j >= params.n {
        return Err(Error::domain("biorthogonal index must satisfy j < N"));
    }
    let lnq = params.q.ln();
    let c = params.centre();
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=j {
        let d = k as f64 - c;
        let ln_coeff = -specfun::ln_gamma((j - k) as f64 + 1.0)
            - specfun::ln_gamma(k as f64 + 1.0)
            - lnq * d * d;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * ln_coeff.exp() * z.powu(k);
    }
    Ok(sum)
}

/// Truncated bilateral partner series
/// `Q_j(z) = sum_l (-l)_j Sw(l) z^(-l)` over `l` in
/// `[-l_window, -1] union [j, j + l_window - 1]`.
///
/// The tail beyond the window is certified from the next term on each
/// side; if the bound exceeds `tol` relative to the largest retained term
/// the window is rejected.
pub fn biorth_q(
    params: EnsembleParams,
    j: u32,
    z: Complex64,
    l_window: usize,
    tol: f64,
) -> Result<Complex64> {
    if j >= params.n {
        return Err(Error::domain("biorthogonal index must satisfy j < N"));
    }
    if l_window < 2 {
        return Err(Error::WindowTooSmall { bound: f64::INFINITY, tol });
    }
    let lnq = params.q.ln();
    let c = params.centre();
    let jf = j as i64;

    let term_ln = |l: i64| -> (f64, f64) {
        let mut ln = 0.0;
        let mut sign = 1.0;
        for i in 0..jf {
            let f = (i - l) as f64;
            if f == 0.0 {
                return (f64::NEG_INFINITY, 0.0);
            }
            ln += f.abs().ln();
            if f < 0.0 {
                sign = -sign;
            }
        }
        let d = l as f64 - c;
        (ln + lnq * d * d, sign)
    };

    let mut sum = Complex64::new(0.0, 0.0);
    let mut max_ln = f64::NEG_INFINITY;
    for l in (-(l_window as i64)..0).chain(jf..jf + l_window as i64) {
        let (ln, sign) = term_ln(l);
        if sign == 0.0 {
            continue;
        }
        max_ln = max_ln.max(ln);
        sum += sign * ln.exp() * z.powf(-(l as f64));
    }

    // one extra shell on each side, inflated for the geometric remainder
    let (tail_lo, _) = term_ln(-(l_window as i64) - 1);
    let (tail_hi, _) = term_ln(jf + l_window as i64);
    let bound = 4.0 * (tail_lo.exp() + tail_hi.exp());
    if bound > tol * max_ln.exp() {
        return Err(Error::WindowTooSmall { bound, tol: tol * max_ln.exp() });
    }
    Ok(sum)
}

/// Window size that makes the `Q` tail certifiably negligible.
pub fn suggested_q_window(params: EnsembleParams) -> usize {
    let lnq = -params.q.ln();
    let n = params.n as f64;
    let mut w = ((46.0 / lnq).sqrt() + n).ceil() as usize + 4;
    loop {
        let wf = w as f64;
        if lnq * (wf - n / 2.0) * (wf - n / 2.0) > 46.0 + n * (wf + n).ln() {
            return w;
        }
        w += 8;
    }
}

/// Correlation kernel `K_N(x, y)` with respect to the angle measure `dx`:
/// geometric part plus the doubly-indexed correction sum, the diagonal of
/// the geometric factor taken by its explicit limit.
pub fn kernel(params: EnsembleParams, x: f64, y: f64) -> Result<Complex64> {
    let coeffs = KernelCoeffs::new(params)?;
    Ok(kernel_with(&coeffs, x, y))
}

/// Kernel evaluation reusing a prebuilt coefficient table.
pub fn kernel_with(coeffs: &KernelCoeffs, x: f64, y: f64) -> Complex64 {
    let n = coeffs.n();
    let d = x - y;
    let geo = if d.sin().abs() < 1e-9 && (d.cos() - 1.0).abs() < 1e-9 {
        Complex64::new(n as f64, 0.0)
    } else {
        let num = Complex64::from_polar(1.0, n as f64 * d) - 1.0;
        let den = Complex64::from_polar(1.0, d) - 1.0;
        num / den
    };
    let mut corr = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let sign_a = if k % 2 == 0 { 1.0 } else { -1.0 };
        for &(l, ln_b, sign_b) in &coeffs.b {
            let amp = (coeffs.ln_a[k as usize] + ln_b).exp();
            let phase = Complex64::from_polar(1.0, x * k as f64 - y * l as f64);
            corr += sign_a * sign_b * amp / (k - l) as f64 * phase;
        }
    }
    (geo + corr) / (2.0 * PI)
}

/// Finite-`N` one-point density `rho(x; t) = K_N(x, x)`, real and even.
pub fn density_finite_n(params: EnsembleParams, x: f64) -> Result<f64> {
    let coeffs = KernelCoeffs::new(params)?;
    Ok(density_finite_with(&coeffs, x))
}

pub fn density_finite_with(coeffs: &KernelCoeffs, x: f64) -> f64 {
    kernel_with(coeffs, x, x).re
}

/// Exact joint eigenvalue density at `t` for `N <= 3` (oracle use): a
/// sine Vandermonde times a Wronskian-style determinant of theta
/// derivatives, normalised over `[-pi, pi]^N`.
pub fn pdf_identity_start(params: EnsembleParams, angles: &[f64]) -> Result<f64> {
    let n = params.n as usize;
    if n > 3 {
        return Err(Error::domain("joint density oracle restricted to N <= 3"));
    }
    if angles.len() != n {
        return Err(Error::domain(format!("expected {n} angles, got {}", angles.len())));
    }
    if params.q >= 1.0 {
        return Err(Error::domain("joint density needs t > 0"));
    }
    let kappa = if n % 2 == 0 { 2 } else { 3 };
    let q = params.q;

    let mut sine = 1.0;
    for j in 0..n {
        for k in (j + 1)..n {
            sine *= ((angles[k] - angles[j]) / 2.0).sin();
        }
    }
    // M[j][k] = (-2 d/dx_j)^k theta_kappa(x_j / 2) = (-1)^k theta^(k)(x_j/2)
    let mut m = [[0.0f64; 3]; 3];
    for (j, &xj) in angles.iter().enumerate() {
        for k in 0..n {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            m[j][k] = sign * specfun::theta(kappa, xj / 2.0, q, k)?;
        }
    }
    let det = match n {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!(),
    };
    let nf = params.n as f64;
    // the q power cancels the q^(N(N^2-1)/12) scaling of the theta
    // Wronskian (adjudicated by the N = 2 normalisation quadrature)
    let mut ln_norm = -params.q.ln() * nf * (nf * nf - 1.0) / 12.0 - nf * (2.0 * PI).ln();
    for l in 1..=n {
        ln_norm -= specfun::ln_gamma(l as f64 + 1.0);
    }
    Ok(ln_norm.exp() * sine * det)
}
