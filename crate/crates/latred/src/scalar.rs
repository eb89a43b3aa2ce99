//! Floating scalars for the Gram-Schmidt engine.
//!
//! Squared norms of benchmark bases overflow the f64 exponent range (inputs
//! carry entries of a thousand bits and more), so both scalar types keep an
//! explicit power-of-two exponent next to a normalized mantissa:
//!
//! * [`Dd`] - double-double mantissa, ~106-bit significand. The default.
//! * [`Fe`] - single f64 mantissa, 53-bit significand. Fast fallback.
//!
//! All mantissa arithmetic uses the classic error-free transformations
//! (two_sum / two_prod with fused multiply-add), so results are accurate to
//! within a few ulps of the significand width.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

/// Scalar interface required by the floating GSO engine.
pub trait Scalar:
    Copy
    + Debug
    + PartialOrd
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_bigint(x: &BigInt) -> Self;
    fn from_ratio_i64(num: i64, den: i64) -> Self;
    fn is_zero(self) -> bool;
    fn abs(self) -> Self;
    /// Natural log; requires a positive value.
    fn ln(self) -> f64;
    /// Nearest integer with ties toward +infinity: floor(x + 1/2).
    fn round_to_bigint(self) -> BigInt;
    /// Conversion that may overflow to infinity for huge exponents.
    fn to_f64_lossy(self) -> f64;
}

#[inline]
fn exponent_of(x: f64) -> i64 {
    debug_assert!(x.is_finite() && x != 0.0 && x.is_normal());
    (((x.to_bits() >> 52) & 0x7ff) as i64) - 1023
}

/// Exact multiplication by 2^k (k kept within the normal range by callers).
#[inline]
fn ldexp(x: f64, k: i64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut v = x;
    let mut k = k;
    while k > 1000 {
        v *= f64::from_bits((1023u64 + 1000) << 52);
        k -= 1000;
    }
    while k < -1000 {
        v *= f64::from_bits((1023u64 - 1000) << 52);
        k += 1000;
    }
    v * f64::from_bits(((1023 + k) as u64) << 52)
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Requires |a| >= |b| (or a == 0).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

/// Double-double mantissa with explicit exponent: value = (hi + lo) * 2^exp,
/// 1 <= |hi| < 2 (or hi == 0 for zero), |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
pub struct Dd {
    hi: f64,
    lo: f64,
    exp: i64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0, exp: 0 };

    #[inline]
    fn norm(hi: f64, lo: f64, exp: i64) -> Dd {
        if hi == 0.0 {
            // Round-to-nearest addition only returns 0 on exact cancellation,
            // in which case the error term is 0 as well.
            return Dd::ZERO;
        }
        let (s, e) = quick_two_sum(hi, lo);
        let k = exponent_of(s);
        Dd { hi: ldexp(s, -k), lo: ldexp(e, -k), exp: exp + k }
    }

    fn add_impl(self, other: Dd) -> Dd {
        if self.hi == 0.0 {
            return other;
        }
        if other.hi == 0.0 {
            return self;
        }
        let (a, b) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let de = a.exp - b.exp;
        if de > 120 {
            return a;
        }
        let bh = ldexp(b.hi, -de);
        let bl = ldexp(b.lo, -de);
        let (s1, s2) = two_sum(a.hi, bh);
        let (t1, t2) = two_sum(a.lo, bl);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        Dd::norm(s1, s2, a.exp)
    }

    fn mul_impl(self, other: Dd) -> Dd {
        if self.hi == 0.0 || other.hi == 0.0 {
            return Dd::ZERO;
        }
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        Dd::norm(p, e, self.exp + other.exp)
    }

    fn div_impl(self, other: Dd) -> Dd {
        assert!(other.hi != 0.0, "division by zero scalar");
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        // Mantissa-level long division with two correction terms.
        let q1 = self.hi / other.hi;
        let r = mant_sub(self.hi, self.lo, mant_mul_f64(other, q1));
        let q2 = r.0 / other.hi;
        let r = mant_sub(r.0, r.1, mant_mul_f64(other, q2));
        let q3 = r.0 / other.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let e = e + q3;
        Dd::norm(s, e, self.exp - other.exp)
    }

    /// Signed mantissa value hi + lo as f64 (rounded).
    #[inline]
    fn mant_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// (hi, lo) - q, both at the same implicit exponent; returns unnormalized pair.
#[inline]
fn mant_sub(hi: f64, lo: f64, q: (f64, f64)) -> (f64, f64) {
    let (s1, s2) = two_sum(hi, -q.0);
    let s2 = s2 + lo - q.1;
    quick_two_sum(s1, s2)
}

#[inline]
fn mant_mul_f64(a: Dd, q: f64) -> (f64, f64) {
    let (p, e) = two_prod(a.hi, q);
    (p, e + a.lo * q)
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        self.add_impl(rhs)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        self.add_impl(-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        self.mul_impl(rhs)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        self.div_impl(rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo, exp: self.exp }
    }
}

impl PartialEq for Dd {
    fn eq(&self, other: &Dd) -> bool {
        (*self - *other).hi == 0.0
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<std::cmp::Ordering> {
        let d = *self - *other;
        d.hi.partial_cmp(&0.0)
    }
}

impl Scalar for Dd {
    const NAME: &'static str = "dd";

    fn zero() -> Self {
        Dd::ZERO
    }

    fn one() -> Self {
        Dd { hi: 1.0, lo: 0.0, exp: 0 }
    }

    fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            return Dd::ZERO;
        }
        assert!(x.is_finite());
        let k = exponent_of(x);
        Dd { hi: ldexp(x, -k), lo: 0.0, exp: k }
    }

    fn from_bigint(x: &BigInt) -> Self {
        let (sign, mag) = x.clone().into_parts();
        if sign == Sign::NoSign {
            return Dd::ZERO;
        }
        let bits = mag.bits();
        let shift = bits.saturating_sub(106);
        let top: u128 = (mag >> shift).to_u128().expect("<= 106 bits");
        let hi_part = ((top >> 53) as u64) as f64;
        let lo_part = ((top & ((1u128 << 53) - 1)) as u64) as f64;
        let hi = ldexp(hi_part, 53);
        let (s, e) = two_sum(hi, lo_part);
        let v = Dd::norm(s, e, shift as i64);
        if sign == Sign::Minus {
            -v
        } else {
            v
        }
    }

    fn from_ratio_i64(num: i64, den: i64) -> Self {
        Dd::from_bigint(&BigInt::from(num)) / Dd::from_bigint(&BigInt::from(den))
    }

    fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn ln(self) -> f64 {
        assert!(self.hi > 0.0, "ln of non-positive scalar");
        self.mant_f64().ln() + self.exp as f64 * std::f64::consts::LN_2
    }

    fn round_to_bigint(self) -> BigInt {
        if self.hi == 0.0 {
            return BigInt::ZERO;
        }
        // Fast path: value fits comfortably in i64.
        if self.exp < 50 {
            if self.exp < -2 {
                // |x| < 1/2 since |hi + lo| < 2, so x rounds to 0.
                return BigInt::ZERO;
            }
            let v = ldexp(self.hi, self.exp) + ldexp(self.lo, self.exp);
            return BigInt::from((v + 0.5).floor() as i64);
        }
        // Wide path: use the full 106-bit mantissa scaled to an integer.
        let a = ldexp(self.hi, 106) as i128; // exact: |hi|*2^106 < 2^107
        let b = (ldexp(self.lo, 106)).round() as i128;
        let total = BigInt::from(a + b);
        if self.exp >= 106 {
            total << (self.exp - 106)
        } else {
            let s = (106 - self.exp) as u32;
            (total + (BigInt::from(1) << (s - 1))) >> s
        }
    }

    fn to_f64_lossy(self) -> f64 {
        if self.hi == 0.0 {
            return 0.0;
        }
        if self.exp > 1023 {
            return if self.hi > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if self.exp < -1060 {
            return 0.0;
        }
        ldexp(self.mant_f64(), self.exp)
    }
}

/// Single f64 mantissa with explicit exponent: value = m * 2^exp,
/// 1 <= |m| < 2 or m == 0.
#[derive(Debug, Clone, Copy)]
pub struct Fe {
    m: f64,
    exp: i64,
}

impl Fe {
    const ZERO: Fe = Fe { m: 0.0, exp: 0 };

    #[inline]
    fn norm(m: f64, exp: i64) -> Fe {
        if m == 0.0 {
            return Fe::ZERO;
        }
        let k = exponent_of(m);
        Fe { m: ldexp(m, -k), exp: exp + k }
    }
}

impl Add for Fe {
    type Output = Fe;
    fn add(self, rhs: Fe) -> Fe {
        if self.m == 0.0 {
            return rhs;
        }
        if rhs.m == 0.0 {
            return self;
        }
        let (a, b) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let de = a.exp - b.exp;
        if de > 60 {
            return a;
        }
        Fe::norm(a.m + ldexp(b.m, -de), a.exp)
    }
}

impl Sub for Fe {
    type Output = Fe;
    fn sub(self, rhs: Fe) -> Fe {
        self + (-rhs)
    }
}

impl Mul for Fe {
    type Output = Fe;
    fn mul(self, rhs: Fe) -> Fe {
        if self.m == 0.0 || rhs.m == 0.0 {
            return Fe::ZERO;
        }
        Fe::norm(self.m * rhs.m, self.exp + rhs.exp)
    }
}

impl Div for Fe {
    type Output = Fe;
    fn div(self, rhs: Fe) -> Fe {
        assert!(rhs.m != 0.0, "division by zero scalar");
        if self.m == 0.0 {
            return Fe::ZERO;
        }
        Fe::norm(self.m / rhs.m, self.exp - rhs.exp)
    }
}

impl Neg for Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        Fe { m: -self.m, exp: self.exp }
    }
}

impl PartialEq for Fe {
    fn eq(&self, other: &Fe) -> bool {
        (*self - *other).m == 0.0
    }
}

impl PartialOrd for Fe {
    fn partial_cmp(&self, other: &Fe) -> Option<std::cmp::Ordering> {
        let d = *self - *other;
        d.m.partial_cmp(&0.0)
    }
}

impl Scalar for Fe {
    const NAME: &'static str = "f64";

    fn zero() -> Self {
        Fe::ZERO
    }

    fn one() -> Self {
        Fe { m: 1.0, exp: 0 }
    }

    fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            return Fe::ZERO;
        }
        assert!(x.is_finite());
        Fe::norm(ldexp(x, -exponent_of(x)), exponent_of(x))
    }

    fn from_bigint(x: &BigInt) -> Self {
        let (sign, mag) = x.clone().into_parts();
        if sign == Sign::NoSign {
            return Fe::ZERO;
        }
        let bits = mag.bits();
        let shift = bits.saturating_sub(53);
        let top = (mag >> shift).to_u64().expect("<= 53 bits") as f64;
        let v = Fe::norm(top, shift as i64);
        if sign == Sign::Minus {
            -v
        } else {
            v
        }
    }

    fn from_ratio_i64(num: i64, den: i64) -> Self {
        Fe::from_bigint(&BigInt::from(num)) / Fe::from_bigint(&BigInt::from(den))
    }

    fn is_zero(self) -> bool {
        self.m == 0.0
    }

    fn abs(self) -> Self {
        Fe { m: self.m.abs(), exp: self.exp }
    }

    fn ln(self) -> f64 {
        assert!(self.m > 0.0, "ln of non-positive scalar");
        self.m.ln() + self.exp as f64 * std::f64::consts::LN_2
    }

    fn round_to_bigint(self) -> BigInt {
        if self.m == 0.0 {
            return BigInt::ZERO;
        }
        if self.exp < 50 {
            if self.exp < -2 {
                return BigInt::ZERO;
            }
            let v = ldexp(self.m, self.exp);
            return BigInt::from((v + 0.5).floor() as i64);
        }
        let a = BigInt::from(ldexp(self.m, 53) as i128); // exact
        if self.exp >= 53 {
            a << (self.exp - 53)
        } else {
            let s = (53 - self.exp) as u32;
            (a + (BigInt::from(1) << (s - 1))) >> s
        }
    }

    fn to_f64_lossy(self) -> f64 {
        if self.m == 0.0 {
            return 0.0;
        }
        if self.exp > 1023 {
            return if self.m > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if self.exp < -1060 {
            return 0.0;
        }
        ldexp(self.m, self.exp)
    }
}
