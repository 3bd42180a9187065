//! Exact dyadic phases `exp(iπ·a/2^k)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest supported denominator exponent.
pub const MAX_DENOM_LOG2: u32 = 60;

/// The phase `exp(iπ · numerator / 2^denom_log2)`.
///
/// Always normalized: the numerator lies in `[0, 2^(denom_log2+1))` and is odd
/// unless the phase is zero, in which case `denom_log2 == 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "RawPhase", into = "RawPhase")]
pub struct DyadicPhase {
    num: u64,
    denom_log2: u32,
}

#[derive(Serialize, Deserialize)]
struct RawPhase {
    num: i64,
    denom_log2: u32,
}

impl TryFrom<RawPhase> for DyadicPhase {
    type Error = String;
    fn try_from(r: RawPhase) -> Result<Self, String> {
        if r.denom_log2 > MAX_DENOM_LOG2 {
            return Err(format!("denominator 2^{} too large", r.denom_log2));
        }
        Ok(DyadicPhase::new(r.num, r.denom_log2))
    }
}

impl From<DyadicPhase> for RawPhase {
    fn from(p: DyadicPhase) -> Self {
        RawPhase {
            num: p.num as i64,
            denom_log2: p.denom_log2,
        }
    }
}

impl DyadicPhase {
    pub const ZERO: DyadicPhase = DyadicPhase { num: 0, denom_log2: 0 };
    /// `exp(iπ) = -1`
    pub const PI: DyadicPhase = DyadicPhase { num: 1, denom_log2: 0 };

    /// `exp(iπ·num/2^denom_log2)`, reduced.
    pub fn new(num: i64, denom_log2: u32) -> Self {
        assert!(denom_log2 <= MAX_DENOM_LOG2, "dyadic denominator too large");
        let modulus = 1i128 << (denom_log2 + 1);
        let n = (num as i128).rem_euclid(modulus) as u64;
        Self::normalize(n, denom_log2)
    }

    /// `exp(iπ·k/4)`.
    pub fn eighth(k: i64) -> Self {
        Self::new(k, 2)
    }

    /// `exp(iπ·k/2)`.
    pub fn quarter(k: i64) -> Self {
        Self::new(k, 1)
    }

    fn normalize(mut num: u64, mut k: u32) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        while k > 0 && num % 2 == 0 {
            num /= 2;
            k -= 1;
        }
        let modulus = 1u64 << (k + 1);
        DyadicPhase {
            num: num % modulus,
            denom_log2: k,
        }
    }

    #[inline]
    pub fn numerator(&self) -> u64 {
        self.num
    }

    #[inline]
    pub fn denom_log2(&self) -> u32 {
        self.denom_log2
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Numerator over a fixed denominator `2^k`; `None` if `k` is too coarse.
    pub fn numerator_at(&self, k: u32) -> Option<u64> {
        if k < self.denom_log2 {
            return None;
        }
        Some(self.num << (k - self.denom_log2))
    }

    /// The phase as a multiple of π/4 (mod 8), when it is one.
    pub fn as_eighths(&self) -> Option<u8> {
        self.numerator_at(2).map(|n| (n % 8) as u8)
    }

    /// Angle in radians, in `[0, 2π)`.
    pub fn radians(&self) -> f64 {
        std::f64::consts::PI * self.num as f64 / (1u64 << self.denom_log2) as f64
    }

    pub fn to_complex(&self) -> Complex64 {
        // exact values on the π/4 lattice avoid rounding in oracles
        if let Some(k) = self.as_eighths() {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            return match k {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(h, h),
                2 => Complex64::new(0.0, 1.0),
                3 => Complex64::new(-h, h),
                4 => Complex64::new(-1.0, 0.0),
                5 => Complex64::new(-h, -h),
                6 => Complex64::new(0.0, -1.0),
                _ => Complex64::new(h, -h),
            };
        }
        Complex64::from_polar(1.0, self.radians())
    }

    /// Integer multiple of this phase.
    pub fn times(&self, k: i64) -> Self {
        let modulus = 1i128 << (self.denom_log2 + 1);
        let n = ((self.num as i128) * (k as i128)).rem_euclid(modulus) as u64;
        Self::normalize(n, self.denom_log2)
    }

    /// Half of this phase, choosing the representative from `[0, 2π)`.
    pub fn half(&self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::normalize(self.num, self.denom_log2 + 1)
    }

    /// If `self == base * k` for some integer `k`, returns `k` reduced to
    /// `(-order/2, order/2]` where `order` is the order of `base`.
    pub fn multiple_of(&self, base: DyadicPhase) -> Option<i64> {
        if base.is_zero() {
            return if self.is_zero() { Some(0) } else { None };
        }
        let k = base.denom_log2.max(self.denom_log2);
        let b = base.numerator_at(k)?;
        let s = self.numerator_at(k)?;
        let modulus = 1u64 << (k + 1);
        // base numerator is odd at its own denominator; solve b·m ≡ s (mod 2^(k+1))
        let shift = k - base.denom_log2;
        if s % (1u64 << shift) != 0 {
            return None;
        }
        let b_odd = b >> shift;
        let s_red = s >> shift;
        let order = 1u64 << (base.denom_log2 + 1);
        let inv = mod_inverse_pow2(b_odd, base.denom_log2 + 1);
        let m = (s_red as u128 * inv as u128 % order as u128) as u64;
        debug_assert_eq!((b as u128 * m as u128 % modulus as u128) as u64, s);
        let m = m as i64;
        let order = order as i64;
        Some(if m > order / 2 { m - order } else { m })
    }
}

fn mod_inverse_pow2(a: u64, bits: u32) -> u64 {
    debug_assert!(a % 2 == 1);
    // Newton iteration for the inverse modulo 2^64, then truncate.
    let mut x: u64 = 1;
    for _ in 0..7 {
        x = x.wrapping_mul(2u64.wrapping_sub(a.wrapping_mul(x)));
    }
    if bits >= 64 {
        x
    } else {
        x & ((1u64 << bits) - 1)
    }
}

impl Add for DyadicPhase {
    type Output = DyadicPhase;
    fn add(self, rhs: DyadicPhase) -> DyadicPhase {
        let k = self.denom_log2.max(rhs.denom_log2);
        let modulus = 1u128 << (k + 1);
        let a = (self.num as u128) << (k - self.denom_log2);
        let b = (rhs.num as u128) << (k - rhs.denom_log2);
        Self::normalize(((a + b) % modulus) as u64, k)
    }
}

impl AddAssign for DyadicPhase {
    fn add_assign(&mut self, rhs: DyadicPhase) {
        *self = *self + rhs;
    }
}

impl Neg for DyadicPhase {
    type Output = DyadicPhase;
    fn neg(self) -> DyadicPhase {
        if self.num == 0 {
            return self;
        }
        let modulus = 1u64 << (self.denom_log2 + 1);
        DyadicPhase {
            num: modulus - self.num,
            denom_log2: self.denom_log2,
        }
    }
}

impl Sub for DyadicPhase {
    type Output = DyadicPhase;
    fn sub(self, rhs: DyadicPhase) -> DyadicPhase {
        self + (-rhs)
    }
}

impl Mul<i64> for DyadicPhase {
    type Output = DyadicPhase;
    fn mul(self, k: i64) -> DyadicPhase {
        self.times(k)
    }
}

impl std::iter::Sum for DyadicPhase {
    fn sum<I: Iterator<Item = DyadicPhase>>(iter: I) -> Self {
        iter.fold(DyadicPhase::ZERO, |a, b| a + b)
    }
}

impl fmt::Debug for DyadicPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DyadicPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            f.write_str("0")
        } else if self.denom_log2 == 0 {
            f.write_str("π")
        } else {
            write!(f, "{}π/{}", self.num, 1u64 << self.denom_log2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduction_is_canonical() {
        assert_eq!(DyadicPhase::new(2, 2), DyadicPhase::new(1, 1));
        assert_eq!(DyadicPhase::new(-1, 2), DyadicPhase::new(7, 2));
        assert_eq!(DyadicPhase::new(8, 2), DyadicPhase::ZERO);
        assert_eq!(DyadicPhase::new(4, 2), DyadicPhase::PI);
        assert_eq!(DyadicPhase::new(6, 3).denom_log2(), 2);
    }

    #[test]
    fn t_squared_is_s() {
        let t = DyadicPhase::eighth(1);
        assert_eq!(t + t, DyadicPhase::quarter(1));
        assert_eq!(t.times(8), DyadicPhase::ZERO);
        assert_eq!(-t, DyadicPhase::eighth(7));
    }

    #[test]
    fn multiple_of_base() {
        let t = DyadicPhase::eighth(1);
        assert_eq!(DyadicPhase::quarter(1).multiple_of(t), Some(2));
        assert_eq!(DyadicPhase::eighth(7).multiple_of(t), Some(-1));
        assert_eq!(DyadicPhase::new(1, 3).multiple_of(t), None);
        assert_eq!(DyadicPhase::eighth(3).multiple_of(DyadicPhase::eighth(3)), Some(1));
        assert_eq!(DyadicPhase::eighth(1).multiple_of(DyadicPhase::eighth(3)), Some(3));
    }

    #[test]
    fn complex_values() {
        let z = DyadicPhase::eighth(3).to_complex();
        let w = Complex64::from_polar(1.0, 3.0 * std::f64::consts::PI / 4.0);
        assert!((z - w).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn addition_matches_floats(a in -1000i64..1000, ka in 0u32..8, b in -1000i64..1000, kb in 0u32..8) {
            let p = DyadicPhase::new(a, ka);
            let q = DyadicPhase::new(b, kb);
            let lhs = (p + q).to_complex();
            let rhs = p.to_complex() * q.to_complex();
            prop_assert!((lhs - rhs).norm() < 1e-9);
            prop_assert_eq!(p - p, DyadicPhase::ZERO);
        }
    }
}
