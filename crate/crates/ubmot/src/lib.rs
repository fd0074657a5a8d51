//! Spectral statistics of Brownian motion on the unitary group started
//! from the identity.
//!
//! The library computes, for a matrix dimension `N` and a scaled time `t`
//! (with `q = exp(-t/2N)`):
//!
//! * exact finite-`N` density moments in several equivalent closed forms,
//!   together with their large-`N` limits and asymptotic envelopes
//!   ([`moments`]),
//! * the determinantal structure behind those formulas: circle weight,
//!   biorthogonal system, correlation kernel, finite-`N` density, and the
//!   exact joint eigenvalue density for tiny `N` ([`ensemble`]),
//! * the limiting spectral density via a functional equation for the
//!   Herglotz transform, plus support-edge data ([`density`]),
//! * the spectral form factor: exact, fixed-wavenumber limit, scaled
//!   (dip-ramp-plateau) limit, and a density-based heuristic ([`sff`]),
//! * direct matrix Monte Carlo of the unitary diffusion ([`simulate`]),
//! * Gaussian/Laguerre ensemble comparator curves ([`refmodels`]).
//!
//! Cross-validation suites that tie all of these together live in
//! [`checks`]; the `ubmot` binary exposes them as `ubmot validate`.

pub mod bigfix;
pub mod checks;
pub mod density;
pub mod ensemble;
pub mod moments;
pub mod quad;
pub mod refmodels;
pub mod sff;
pub mod simulate;
pub mod specfun;
pub mod table;

mod error;

pub use error::Error;
pub use table::SweepTable;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Parameters identifying one state of the Brownian motion on U(N).
///
/// The triple is redundant on purpose: `q` is derived from `(N, t)` once at
/// construction so that every downstream formula uses exactly the same value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleParams {
    /// Matrix dimension.
    pub n: u32,
    /// Scaled time, `t >= 0`.
    pub t: f64,
    /// `exp(-t / 2N)`, in `(0, 1]`.
    pub q: f64,
}

impl EnsembleParams {
    pub fn new(n: u32, t: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("N must be a positive integer"));
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::domain(format!("t must be finite and >= 0, got {t}")));
        }
        Ok(Self { n, t, q: (-t / (2.0 * n as f64)).exp() })
    }

    /// Centre of the weight exponent, `(N - 1) / 2`.
    pub(crate) fn centre(&self) -> f64 {
        (self.n as f64 - 1.0) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_derive_q() {
        let p = EnsembleParams::new(3, 3.6).unwrap();
        assert!((p.q - (-0.6f64).exp()).abs() < 1e-15);
        assert_eq!(EnsembleParams::new(1, 0.0).unwrap().q, 1.0);
    }

    #[test]
    fn params_reject_bad_input() {
        assert!(EnsembleParams::new(0, 1.0).is_err());
        assert!(EnsembleParams::new(2, -1.0).is_err());
        assert!(EnsembleParams::new(2, f64::NAN).is_err());
    }
}
