//! Quadrature building blocks: Gauss-Legendre rules (fixed and adaptive)
//! and the uniform trapezoidal rule for periodic integrands.

use std::cell::RefCell;
use std::collections::HashMap;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Computed once per order by Newton iteration on the Legendre recurrence
/// and cached thread-locally.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    thread_local! {
        static CACHE: RefCell<HashMap<usize, Vec<(f64, f64)>>> = RefCell::new(HashMap::new());
    }
    CACHE.with(|c| {
        c.borrow_mut()
            .entry(n)
            .or_insert_with(|| compute_gauss_legendre(n))
            .clone()
    })
}

fn compute_gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess for the i-th positive root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
        if !(n % 2 == 1 && i == m - 1) {
            out.push((-x, w));
        } else {
            // odd order: centre node, avoid duplicating x = 0
            out.pop();
            out.push((0.0, w));
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Fixed-order Gauss-Legendre integral of `f` over `[a, b]`.
pub fn gl_fixed(f: &dyn Fn(f64) -> f64, a: f64, b: f64, order: usize) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    gauss_legendre(order)
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Adaptive Gauss-Legendre integration by interval bisection.
///
/// The local error estimate compares a 15-point rule against a 31-point
/// rule; intervals are split until the estimate passes a tolerance
/// proportional to the accumulated scale of the integral.
pub fn gl_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> crate::Result<f64> {
    #[derive(Debug)]
    struct Seg {
        a: f64,
        b: f64,
        coarse: f64,
        fine: f64,
    }
    let eval = |a: f64, b: f64| Seg { a, b, coarse: gl_fixed(f, a, b, 15), fine: gl_fixed(f, a, b, 31) };

    let mut stack = vec![eval(a, b)];
    let mut total = 0.0;
    let mut abs_scale: f64 = stack[0].fine.abs().max(tol);
    let mut splits = 0usize;
    while let Some(seg) = stack.pop() {
        let err = (seg.fine - seg.coarse).abs();
        let width_ok = (seg.b - seg.a).abs() > 1e-14 * (b - a).abs();
        if err > tol * abs_scale.max(1e-300) && width_ok {
            splits += 1;
            if splits > 20_000 {
                return Err(crate::Error::NoConvergence(
                    "adaptive quadrature subdivision limit reached".into(),
                    err,
                ));
            }
            let m = 0.5 * (seg.a + seg.b);
            stack.push(eval(seg.a, m));
            stack.push(eval(m, seg.b));
        } else {
            total += seg.fine;
            abs_scale = abs_scale.max(total.abs());
        }
    }
    Ok(total)
}

/// Uniform trapezoidal rule for a `2*pi`-periodic integrand over
/// `(-pi, pi]`; spectrally accurate for smooth periodic functions.
pub fn trapezoid_periodic(f: &dyn Fn(f64) -> f64, points: usize) -> f64 {
    let h = 2.0 * std::f64::consts::PI / points as f64;
    (0..points)
        .map(|j| f(-std::f64::consts::PI + (j as f64 + 0.5) * h))
        .sum::<f64>()
        * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gl_nodes_integrate_polynomials_exactly() {
        // order n integrates degree 2n-1 exactly
        let int = gl_fixed(&|x| x.powi(9) + 3.0 * x * x, -1.0, 1.0, 5);
        assert_abs_diff_eq!(int, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn gl_adaptive_smooth() {
        let v = gl_adaptive(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-11);
    }

    #[test]
    fn gl_adaptive_peaked() {
        // narrow Gaussian needs subdivision
        let v = gl_adaptive(&|x: f64| (-(x * x) / 2e-6).exp(), -1.0, 1.0, 1e-11).unwrap();
        let exact = (2.0 * std::f64::consts::PI * 1e-6).sqrt();
        assert_abs_diff_eq!(v, exact, epsilon = 1e-13);
    }

    #[test]
    fn trapezoid_periodic_spectral() {
        let v = trapezoid_periodic(&|x| (x.sin()).exp(), 64);
        // 2*pi*I_0(1), modified Bessel
        assert_abs_diff_eq!(v, 2.0 * std::f64::consts::PI * 1.2660658777520084, epsilon = 1e-12);
    }
}
