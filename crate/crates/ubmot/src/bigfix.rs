//! Fixed-point arithmetic on `num_bigint::BigInt` mantissas.
//!
//! Several of the exact finite-`N` formulas in this crate are alternating
//! sums whose terms overshoot the result by hundreds of decimal digits
//! (the overshoot grows roughly like `exp(c N)`).  No fixed hardware
//! precision survives that, so those sums run on `BigFix` numbers: a
//! `BigInt` mantissa interpreted as `v / 2^bits`, with `bits` chosen per
//! evaluation from a cheap `f64` log-magnitude scan of the terms.
//!
//! Only the handful of operations the sums need are implemented: ring
//! arithmetic, division, and `exp` via argument halving plus a Taylor
//! tail.  Everything is deterministic, so results are bit-reproducible
//! across runs and thread counts.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Fixed-point number `v / 2^bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFix {
    bits: u32,
    v: BigInt,
}

impl BigFix {
    pub fn zero(bits: u32) -> Self {
        Self { bits, v: BigInt::zero() }
    }

    pub fn one(bits: u32) -> Self {
        Self { bits, v: BigInt::from(1) << bits }
    }

    pub fn from_i64(x: i64, bits: u32) -> Self {
        Self { bits, v: BigInt::from(x) << bits }
    }

    /// Exact embedding of a finite `f64`.
    pub fn from_f64(x: f64, bits: u32) -> Self {
        assert!(x.is_finite(), "BigFix::from_f64 of non-finite value");
        if x == 0.0 {
            return Self::zero(bits);
        }
        let b = x.to_bits();
        let sign = if b >> 63 == 1 { -1 } else { 1 };
        let exp_raw = ((b >> 52) & 0x7ff) as i64;
        let frac = b & ((1u64 << 52) - 1);
        // normals only; subnormal inputs are treated as scaled fractions
        let (mant, e) = if exp_raw == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), exp_raw - 1075)
        };
        let shift = bits as i64 + e;
        let mut v = BigInt::from(mant);
        if shift >= 0 {
            v <<= shift as usize;
        } else {
            v >>= (-shift) as usize;
        }
        Self { bits, v: v * sign }
    }

    /// Nearest `f64`; saturates on exponent overflow (not expected in use).
    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        let nbits = self.v.bits();
        // bring the mantissa into comfortable f64 range, then rescale
        let drop = nbits.saturating_sub(64) as i64;
        let top = (&self.v >> (drop as usize)).to_f64().unwrap_or(0.0);
        let scale = drop - self.bits as i64;
        top * pow2(scale)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    pub fn neg(&self) -> Self {
        Self { bits: self.bits, v: -&self.v }
    }

    pub fn abs(&self) -> Self {
        Self { bits: self.bits, v: self.v.abs() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.bits, rhs.bits);
        Self { bits: self.bits, v: &self.v + &rhs.v }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.bits, rhs.bits);
        Self { bits: self.bits, v: &self.v - &rhs.v }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.bits, rhs.bits);
        let p = &self.v * &rhs.v;
        Self { bits: self.bits, v: shift_round(p, self.bits) }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Self { bits: self.bits, v: &self.v * k }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.bits, rhs.bits);
        assert!(!rhs.v.is_zero(), "BigFix division by zero");
        Self { bits: self.bits, v: (&self.v << self.bits) / &rhs.v }
    }

    pub fn div_i64(&self, k: i64) -> Self {
        assert!(k != 0, "BigFix division by zero");
        Self { bits: self.bits, v: &self.v / k }
    }

    /// `exp(x)` by repeated halving and a Horner-evaluated Taylor tail.
    pub fn exp(&self) -> Self {
        let bits = self.bits;
        if self.v.is_zero() {
            return Self::one(bits);
        }
        // halve until |y| <= 2^-5
        let mag = self.v.bits() as i64; // |v| < 2^mag
        let s = (mag - (bits as i64 - 5)).max(0) as u32;
        let y = Self { bits, v: &self.v >> (s as usize) };

        // number of Taylor terms so the tail is below 2^-(bits+8)
        let target = -((bits + 8) as f64) * std::f64::consts::LN_2;
        let ln32 = 32f64.ln();
        let mut n = 1usize;
        let mut lnterm = 0.0;
        while lnterm - (n as f64) * ln32 > target {
            n += 1;
            lnterm -= (n as f64).ln();
            if n > 10_000 {
                break;
            }
        }
        let mut acc = Self::one(bits);
        for i in (1..=n as i64).rev() {
            acc = Self::one(bits).add(&y.mul(&acc).div_i64(i));
        }
        for _ in 0..s {
            acc = acc.mul(&acc);
        }
        acc
    }
}

fn shift_round(p: BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return p;
    }
    let half = BigInt::from(1) << (bits - 1);
    if p.is_negative() {
        (p - half) >> bits
    } else {
        (p + half) >> bits
    }
}

fn pow2(e: i64) -> f64 {
    // exact powers of two without repeated multiplication drift
    if (-1022..=1023).contains(&e) {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e < -1022 {
        // may round subnormal; fine for error estimates
        f64::from_bits(((-1022i64 + 1023) as u64) << 52) * pow2(e + 1022)
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_roundtrip_exact() {
        // exact whenever the value is above the fixed-point resolution
        for &x in &[0.0, 1.0, -3.5, 0.1, 1e-40, 123456789.123] {
            let b = BigFix::from_f64(x, 192);
            assert_eq!(b.to_f64(), x, "roundtrip of {x}");
        }
        // below resolution: quantises to zero instead of panicking
        assert_eq!(BigFix::from_f64(1e-300, 192).to_f64(), 0.0);
    }

    #[test]
    fn ring_ops() {
        let bits = 160;
        let a = BigFix::from_f64(1.75, bits);
        let b = BigFix::from_f64(-0.5, bits);
        assert_eq!(a.add(&b).to_f64(), 1.25);
        assert_eq!(a.mul(&b).to_f64(), -0.875);
        assert_eq!(a.div(&b).to_f64(), -3.5);
        assert_eq!(a.mul_i64(8).to_f64(), 14.0);
        assert_eq!(a.div_i64(-7).to_f64(), -0.25);
    }

    #[test]
    fn exp_matches_f64() {
        let bits = 256;
        for &x in &[0.0, 1.0, -1.0, 0.03125, 12.7, -30.0, 700.0] {
            let e = BigFix::from_f64(x, bits).exp().to_f64();
            let rel = (e - x.exp()).abs() / x.exp();
            assert!(rel < 1e-14, "exp({x}): {e} vs {}", x.exp());
        }
    }

    #[test]
    fn exp_deep_range() {
        // exp(-500) is representable as f64 and must come back accurately
        let e = BigFix::from_f64(-500.0, 1024).exp().to_f64();
        let rel = (e.ln() + 500.0).abs();
        assert!(rel < 1e-12, "log err {rel}");
        // exp(-2000) underflows f64 but stays internally consistent:
        // exp(-2000) * exp(2000) == 1 in fixed point
        let bits = 4096;
        let a = BigFix::from_f64(-2000.0, bits).exp();
        let b = BigFix::from_f64(2000.0, bits).exp();
        let prod = a.mul(&b).to_f64();
        assert!((prod - 1.0).abs() < 1e-12, "product {prod}");
    }

    #[test]
    fn exp_identity_product() {
        // exp(a) * exp(b) == exp(a + b) well beyond f64 precision
        let bits = 320;
        let a = BigFix::from_f64(3.7, bits);
        let b = BigFix::from_f64(-1.9, bits);
        let lhs = a.exp().mul(&b.exp());
        let rhs = a.add(&b).exp();
        let diff = lhs.sub(&rhs).abs().to_f64();
        assert!(diff < 1e-80, "diff {diff}");
    }
}
