//! Limiting spectral density and its support data.
//!
//! For `t < 4` the density is supported on `(-L0(t), L0(t))` with a
//! square-root edge of amplitude `A(t)`; for `t > 4` it is positive on the
//! whole circle.  Two independent evaluation routes are provided: the
//! functional equation for the Herglotz transform `H_t(w)` solved by
//! damped Newton iteration with continuation, and (for `t > 4`) the
//! Fourier series over the limiting moments, whose coefficients decay at
//! the explicit exponential rate `t * gamma(4/t)`.

use crate::moments;
use crate::quad;
use crate::specfun;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Support half-width `L0(t) = sqrt(t(4-t))/2 + arccos(1 - t/2)` for `0 < t < 4`.
pub fn support_edge(t: f64) -> Result<f64> {
    if !(0.0 < t && t < 4.0) {
        return Err(Error::domain(format!("support edge defined for 0 < t < 4, got {t}")));
    }
    Ok(0.5 * (t * (4.0 - t)).sqrt() + (1.0 - t / 2.0).acos())
}

/// Square-root edge amplitude `A(t) = sqrt(2 / (t^(3/2) sqrt(4-t))) / pi`.
pub fn edge_amplitude(t: f64) -> Result<f64> {
    if !(0.0 < t && t < 4.0) {
        return Err(Error::domain(format!("edge amplitude defined for 0 < t < 4, got {t}")));
    }
    Ok((2.0 / (t.powf(1.5) * (4.0 - t).sqrt())).sqrt() / PI)
}

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 200;

// The functional equation is solved in the deviation variable G = H - 1
// and rescaled to
//     G exp(t G / 2) - w (G + 2) exp(-t/2) = 0,
// which stays fully representable when H hugs 1 at large t (G ~ 2 w
// exp(-t/2)) and never overflows.  The residual of the original equation
// is the rescaled residual times exp(t/2)/(G+2), which keeps the absolute
// defect of the unscaled equation at the 1e-13 level for all t of
// interest.
fn herglotz_equation_g(t: f64, g: Complex64, w: Complex64) -> (Complex64, Complex64, f64) {
    let e = (t / 2.0 * g).exp();
    let emt = (-t / 2.0).exp();
    let lhs = g * e;
    let rhs = w * (g + 2.0) * emt;
    let f = lhs - rhs;
    let df = e * (1.0 + t / 2.0 * g) - w * emt;
    let scale = lhs.norm().max(rhs.norm()).max(1e-280);
    (f, df, scale)
}

fn newton_solve_g(t: f64, w: Complex64, seed: Complex64) -> Result<Complex64> {
    let mut g = seed;
    let (mut f, mut df, mut scale) = herglotz_equation_g(t, g, w);
    for _ in 0..NEWTON_MAX_ITER {
        if f.norm() < NEWTON_TOL * scale {
            return Ok(g);
        }
        let mut step = f / df;
        // keep steps sane near the square-root edge
        if step.norm() > 0.5 {
            step *= 0.5 / step.norm();
        }
        // backtracking line search
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let cand = g - lambda * step;
            let (fc, dfc, sc) = herglotz_equation_g(t, cand, w);
            if fc.norm() < f.norm() {
                g = cand;
                f = fc;
                df = dfc;
                scale = sc;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            // stuck; nudge off a possible saddle
            g += Complex64::new(1e-9, 1e-9);
            let (fc, dfc, sc) = herglotz_equation_g(t, g, w);
            f = fc;
            df = dfc;
            scale = sc;
        }
    }
    if f.norm() < 1e-9 * scale {
        return Ok(g);
    }
    Err(Error::NoConvergence(
        format!("Herglotz Newton iteration at t={t}, w={w}"),
        f.norm() / scale,
    ))
}

/// Solve `((H-1)/(H+1)) exp(t H / 2) = w` for the branch with `Re H >= 0`,
/// by Newton iteration continued down from large `t` (where `H` is close
/// to 1).
pub fn herglotz_solve(t: f64, w: Complex64) -> Result<Complex64> {
    Ok(Complex64::new(1.0, 0.0) + herglotz_solve_g(t, w)?)
}

fn herglotz_solve_g(t: f64, w: Complex64) -> Result<Complex64> {
    if t <= 0.0 {
        return Err(Error::domain("Herglotz solve needs t > 0"));
    }
    if w.norm() > 1.0 + 1e-12 {
        return Err(Error::domain("Herglotz transform evaluated inside the closed unit disk"));
    }
    if w.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let t_start = 48.0f64.max(t);
    let mut cur_t = t_start;
    let mut g = 2.0 * w * (-cur_t / 2.0).exp();
    loop {
        g = newton_solve_g(cur_t, w, g)?;
        g = physical_branch(w, g);
        if cur_t <= t {
            break;
        }
        cur_t = (cur_t * 0.82).max(t);
    }
    Ok(g)
}

/// On the unit circle `H -> -conj(H)` maps solutions to solutions; pick
/// the physical branch `Re H >= 0`.
fn physical_branch(w: Complex64, g: Complex64) -> Complex64 {
    if (w.norm() - 1.0).abs() < 1e-9 && 1.0 + g.re < -1e-12 {
        -g.conj() - 2.0
    } else {
        g
    }
}

/// Finite-difference residual of the inviscid Burgers flow
/// `(d/dt + w G d/dw) G = 0` with `G(t, w) = H(2t, w)`, for validation on
/// rings inside the unit disk where `H` is analytic.
pub fn burgers_residual(t: f64, w: Complex64, step: f64) -> Result<Complex64> {
    let g = |tt: f64, ww: Complex64| herglotz_solve(2.0 * tt, ww);
    let dt = (g(t + step, w)? - g(t - step, w)?) / (2.0 * step);
    let dw = (g(t, w + Complex64::new(step, 0.0))? - g(t, w - Complex64::new(step, 0.0))?)
        / (2.0 * step);
    let gval = g(t, w)?;
    Ok(dt + w * gval * dw)
}

/// Evaluation route for [`density_limit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMethod {
    Herglotz,
    Fourier,
}

impl std::str::FromStr for DensityMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "herglotz" => Ok(DensityMethod::Herglotz),
            "fourier" => Ok(DensityMethod::Fourier),
            other => Err(Error::domain(format!("unknown density method '{other}'"))),
        }
    }
}

/// Limiting density `rho(x; t) >= 0` at angle `x`.
pub fn density_limit(t: f64, x: f64, method: DensityMethod) -> Result<f64> {
    match method {
        DensityMethod::Herglotz => {
            let h = herglotz_solve(t, Complex64::from_polar(1.0, x))?;
            finish_density(t, h.re)
        }
        DensityMethod::Fourier => density_fourier(t, x, 1e-12),
    }
}

fn finish_density(t: f64, re: f64) -> Result<f64> {
    if re < 0.0 {
        // off-support values are analytically zero; anything clearly
        // negative means the solver left the physical branch
        if re > -1e-8 || t < 4.0 && re > -1e-6 {
            return Ok(0.0);
        }
        return Err(Error::stability(format!("negative density {re} at t={t}")));
    }
    if t < 4.0 && re < 1e-8 {
        return Ok(0.0);
    }
    Ok(re)
}

/// Fourier route, valid for `t > 4` where the coefficients decay like
/// `exp(-k t gamma(4/t) / 2)`.
pub fn density_fourier(t: f64, x: f64, tol: f64) -> Result<f64> {
    if t <= 4.0 {
        return Err(Error::domain(
            "Fourier density evaluation requires t > 4 (exponential coefficient decay)",
        ));
    }
    let rate = specfun::decay_rate_c(t)?;
    let k_max = (2.0 * (1.0 / tol).ln() / rate).ceil() as u32;
    let mut rho = 1.0;
    for k in 1..=k_max {
        rho += 2.0 * moments::moment_limit(k, t)? * (k as f64 * x).cos();
    }
    Ok(rho.max(0.0))
}

/// Sampled density profile over `[0, pi]` with support metadata.
#[derive(Debug, Clone)]
pub struct DensityProfile {
    pub t: f64,
    /// Ascending angles in `[0, pi]`.
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// `L0(t)` for `t < 4`, otherwise `pi`.
    pub support_edge: f64,
    /// Square-root edge amplitude, absent for `t >= 4`.
    pub edge_amplitude: Option<f64>,
}

/// Solve the density on a uniform grid by sweeping the angle from `pi`
/// toward `0`, reusing each solution as the next seed.
pub fn density_profile(t: f64, n_points: usize) -> Result<DensityProfile> {
    if n_points < 8 {
        return Err(Error::domain("profile needs at least 8 points"));
    }
    let grid: Vec<f64> = (0..n_points)
        .map(|i| PI * i as f64 / (n_points - 1) as f64)
        .collect();
    let mut values = vec![0.0; n_points];
    // continuation entry point at x = pi
    let mut g = herglotz_solve_g(t, Complex64::from_polar(1.0, PI))?;
    for i in (0..n_points).rev() {
        let w = Complex64::from_polar(1.0, grid[i]);
        if grid[i] != PI {
            g = physical_branch(w, newton_solve_g(t, w, g)?);
        }
        values[i] = finish_density(t, 1.0 + g.re)?;
    }
    let (edge, amp) = if t < 4.0 {
        (support_edge(t)?, Some(edge_amplitude(t)?))
    } else {
        (PI, None)
    };
    Ok(DensityProfile { t, grid, values, support_edge: edge, edge_amplitude: amp })
}

impl DensityProfile {
    /// `(1/2pi) * integral of the even extension` (should be 1).
    pub fn normalization(&self) -> f64 {
        // composite trapezoid on [0, pi], doubled for the even extension
        let mut sum = 0.0;
        for i in 1..self.grid.len() {
            sum += 0.5 * (self.values[i] + self.values[i - 1]) * (self.grid[i] - self.grid[i - 1]);
        }
        sum / PI
    }

    /// Linear interpolation on the stored grid.
    pub fn interp(&self, x: f64) -> f64 {
        let xa = x.abs().min(PI);
        let n = self.grid.len();
        let step = PI / (n - 1) as f64;
        let idx = ((xa / step) as usize).min(n - 2);
        let frac = (xa - self.grid[idx]) / step;
        self.values[idx] * (1.0 - frac) + self.values[idx + 1] * frac
    }
}

/// Critical scaled wavenumbers `(mu_r, mu_p)`:
/// `mu_r` solves `t = (2/mu) log((1+mu)/(1-mu))` on `(0,1)` (only for
/// `t > 4`), `mu_p` solves the same relation on `(1, infinity)`.  They
/// equal the limiting density at `x = pi` and `x = 0` respectively.
pub fn critical_mus(t: f64) -> Result<(Option<f64>, f64)> {
    if t <= 0.0 {
        return Err(Error::domain("critical wavenumbers need t > 0"));
    }
    let mu_r = if t > 4.0 {
        Some(bisect(
            |mu| moments::t_star(mu).unwrap() - t,
            1e-12,
            1.0 - 1e-12,
        )?)
    } else {
        None
    };
    // on (1, inf) the transition time decreases from infinity to zero
    let mut hi = 2.0;
    while moments::t_star(hi)? > t {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::NoConvergence("mu_p bracket expansion".into(), hi));
        }
    }
    let mu_p = bisect(|mu| t - moments::t_star(mu).unwrap(), 1.0 + 1e-12, hi)?;
    Ok((mu_r, mu_p))
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain(format!("bisection bracket does not straddle a root ({lo}, {hi})")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || (hi - lo) < 1e-15 * mid.abs().max(1.0) {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Predicted wavenumber of the dip of the `|sum exp(i k x)|^2` curve.
#[derive(Debug, Clone, Copy)]
pub struct DipWavenumber {
    pub value: f64,
    /// Human-readable scaling rule that produced the value.
    pub rule: &'static str,
}

pub fn dip_wavenumber(t: f64, n: u32) -> Result<DipWavenumber> {
    if t <= 0.0 {
        return Err(Error::domain("dip wavenumber needs t > 0"));
    }
    let nf = n as f64;
    if t == 4.0 {
        return Ok(DipWavenumber { value: nf.powf(6.0 / 11.0), rule: "N^(6/11)" });
    }
    if t < 4.0 {
        Ok(DipWavenumber {
            value: (edge_amplitude(t)? * nf).sqrt(),
            rule: "sqrt(A(t) N)",
        })
    } else {
        Ok(DipWavenumber {
            value: nf.ln() / specfun::decay_rate_c(t)?,
            rule: "log(N) / c(t)",
        })
    }
}

/// Moment round-trip helper: `(1/2pi) * integral rho(x) e^(-ikx) dx`
/// computed from a profile by the periodic trapezoid rule.
pub fn profile_moment(profile: &DensityProfile, k: u32) -> f64 {
    let f = |x: f64| profile.interp(x) * (k as f64 * x).cos();
    quad::trapezoid_periodic(&f, 4096) / (2.0 * PI)
}
