//! Certified dyadic big-float arithmetic.
//!
//! [`BoundedFloat`] stores a dyadic value `mant * 2^exp` at a working
//! precision together with a rigorous absolute error bound. Every operation
//! rounds the value and folds the rounding into the bound, so the true
//! mathematical result always lies within `value ± abs_error`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Upper bound `m * 2^e` on a nonnegative quantity, `m < 2^32`.
///
/// All arithmetic rounds up, so a `Mag` stays a valid upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mag {
    m: u64,
    e: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { m: 0, e: 0 };

    pub fn is_zero(&self) -> bool {
        self.m == 0
    }

    fn normalize(mut self) -> Mag {
        while self.m >= 1 << 32 {
            self.m = (self.m >> 1) + 1;
            self.e += 1;
        }
        self
    }

    /// Upper bound for `2^e`.
    pub fn pow2(e: i64) -> Mag {
        Mag { m: 1, e }
    }

    /// Upper bound for `|x| * 2^e`, rounding up.
    pub fn from_bigint(x: &BigInt, e: i64) -> Mag {
        if x.is_zero() {
            return Mag::ZERO;
        }
        let bits = x.bits() as i64;
        if bits <= 32 {
            Mag {
                m: x.abs().to_u64().unwrap(),
                e,
            }
            .normalize()
        } else {
            let shift = bits - 32;
            let top = (x.abs() >> (shift as u64)).to_u64().unwrap() + 1;
            Mag {
                m: top,
                e: e + shift,
            }
            .normalize()
        }
    }

    pub fn add(self, other: Mag) -> Mag {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= other.e {
            (self, other)
        } else {
            (other, self)
        };
        let d = hi.e - lo.e;
        let lo_shifted = if d >= 64 { 1 } else { (lo.m >> d) + 1 };
        Mag {
            m: hi.m + lo_shifted,
            e: hi.e,
        }
        .normalize()
    }

    pub fn mul(self, other: Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        Mag {
            m: self.m * other.m + 1,
            e: self.e + other.e,
        }
        .normalize()
    }

    pub fn mul_pow2(self, e: i64) -> Mag {
        if self.is_zero() {
            return self;
        }
        Mag {
            m: self.m,
            e: self.e + e,
        }
    }

    pub fn max(self, other: Mag) -> Mag {
        if self.cmp_mag(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    fn cmp_mag(&self, other: &Mag) -> Ordering {
        if self.is_zero() {
            return if other.is_zero() {
                Ordering::Equal
            } else {
                Ordering::Less
            };
        }
        if other.is_zero() {
            return Ordering::Greater;
        }
        let la = 64 - self.m.leading_zeros() as i64 + self.e;
        let lb = 64 - other.m.leading_zeros() as i64 + other.e;
        if la != lb {
            return la.cmp(&lb);
        }
        // same bit length: compare mantissas aligned
        let d = self.e - other.e;
        if d >= 0 {
            (self.m << d.min(32)).cmp(&other.m)
        } else {
            self.m.cmp(&(other.m << (-d).min(32)))
        }
    }

    /// Divide by a positive lower bound `lo_m * 2^lo_e`, rounding up.
    pub fn div_lower(self, lo_m: u64, lo_e: i64) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        debug_assert!(lo_m > 0);
        Mag {
            m: (self.m << 32) / lo_m + 1,
            e: self.e - 32 - lo_e,
        }
        .normalize()
    }

    /// True if the bound is at most `2^k`.
    pub fn le_pow2(&self, k: i64) -> bool {
        if self.is_zero() {
            return true;
        }
        let bits = 64 - self.m.leading_zeros() as i64;
        self.e + bits <= k + 1 && {
            // exact check: m * 2^e <= 2^k  <=>  m <= 2^(k-e)
            let d = k - self.e;
            d >= 63 || (d >= 0 && self.m <= (1u64 << d))
        }
    }

    pub fn to_rational(&self) -> Rational {
        let m = BigInt::from(self.m);
        if self.e >= 0 {
            Rational::from(m << (self.e as u64))
        } else {
            Rational::new(m, BigInt::from(1) << ((-self.e) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let e = self.e.clamp(-1060, 1020) as i32;
        (self.m as f64) * 2f64.powi(e)
    }
}

/// Dyadic value with a rigorous absolute error bound.
#[derive(Clone, Debug)]
pub struct BoundedFloat {
    mant: BigInt,
    exp: i64,
    err: Mag,
    prec: u32,
}

impl BoundedFloat {
    pub fn zero(prec: u32) -> Self {
        BoundedFloat {
            mant: BigInt::zero(),
            exp: 0,
            err: Mag::ZERO,
            prec,
        }
    }

    pub fn from_bigint(x: BigInt, prec: u32) -> Self {
        let mut v = BoundedFloat {
            mant: x,
            exp: 0,
            err: Mag::ZERO,
            prec,
        };
        v.round();
        v
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Self::from_bigint(BigInt::from(x), prec)
    }

    /// Round a rational to `prec` bits; exact when the denominator is a
    /// power of two that fits.
    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero(prec);
        }
        let num = r.numer().clone();
        let den = r.denom().clone();
        let nb = num.bits() as i64;
        let db = den.bits() as i64;
        // scale so the quotient has ~prec+2 bits
        let shift = (prec as i64 + 2 - (nb - db)).max(0);
        let scaled = num << (shift as u64);
        let (q, rem) = num_integer::Integer::div_rem(&scaled, &den);
        let exact = rem.is_zero();
        let exp = -shift;
        let mut v = BoundedFloat {
            mant: q,
            exp,
            err: if exact { Mag::ZERO } else { Mag::pow2(exp) },
            prec,
        };
        v.round();
        v
    }

    /// Exact dyadic constructor (no rounding, no error).
    pub fn from_mant_exp(mant: BigInt, exp: i64, prec: u32) -> Self {
        let mut v = BoundedFloat {
            mant,
            exp,
            err: Mag::ZERO,
            prec,
        };
        v.round();
        v
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn abs_error(&self) -> Mag {
        self.err
    }

    pub fn abs_error_rational(&self) -> Rational {
        self.err.to_rational()
    }

    pub fn widen_error(&mut self, extra: Mag) {
        self.err = self.err.add(extra);
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }

    fn round(&mut self) {
        let bits = self.mant.bits() as i64;
        let excess = bits - self.prec as i64;
        if excess > 0 {
            let lost = {
                let mask = (BigInt::from(1) << (excess as u64)) - 1;
                !(&self.mant & &mask).is_zero()
            };
            self.mant = &self.mant >> (excess as u64);
            self.exp += excess;
            if lost {
                self.err = self.err.add(Mag::pow2(self.exp));
            }
        }
        if self.mant.is_zero() {
            self.exp = 0;
        }
    }

    /// Upper bound on |value| (not including the error interval).
    fn mag_value(&self) -> Mag {
        Mag::from_bigint(&self.mant, self.exp)
    }

    /// Upper bound on |true value| = |value| + err.
    pub fn mag_upper(&self) -> Mag {
        self.mag_value().add(self.err)
    }

    /// Lower bound on |true value| as (m, e) with m*2^e <= |x| guaranteed,
    /// or None if the interval contains 0.
    fn mag_lower(&self) -> Option<(u64, i64)> {
        if self.mant.is_zero() {
            return None;
        }
        let bits = self.mant.bits() as i64;
        let (m, e) = if bits <= 32 {
            (self.mant.abs().to_u64().unwrap(), self.exp)
        } else {
            let shift = bits - 32;
            (
                (self.mant.abs() >> (shift as u64)).to_u64().unwrap(),
                self.exp + shift,
            )
        };
        // subtract err, rounding down
        if self.err.is_zero() {
            return Some((m, e));
        }
        let d = e - self.err.e;
        let err_shifted = if d >= 0 {
            if d >= 64 {
                0
            } else {
                (self.err.m >> d) + 1
            }
        } else {
            let s = (-d) as u32;
            if s >= 32 {
                return None; // error dominates
            }
            (self.err.m << s) + 1
        };
        if err_shifted >= m {
            None
        } else {
            Some((m - err_shifted, e))
        }
    }

    pub fn neg(&self) -> Self {
        BoundedFloat {
            mant: -&self.mant,
            exp: self.exp,
            err: self.err,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        BoundedFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            err: self.err,
            prec: self.prec,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        let gap = prec as i64 + 8;
        // if exponent ranges are far apart, absorb the small one into error
        let la = self.mant.bits() as i64 + self.exp;
        let lb = rhs.mant.bits() as i64 + rhs.exp;
        if !rhs.mant.is_zero() && la - lb > gap + 32 && !self.mant.is_zero() {
            let mut out = self.clone();
            out.prec = prec;
            out.err = out.err.add(rhs.mag_upper());
            return out;
        }
        if !self.mant.is_zero() && lb - la > gap + 32 && !rhs.mant.is_zero() {
            let mut out = rhs.clone();
            out.prec = prec;
            out.err = out.err.add(self.mag_upper());
            return out;
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &rhs.mant << ((rhs.exp - e) as u64);
        let mut out = BoundedFloat {
            mant: a + b,
            exp: e,
            err: self.err.add(rhs.err),
            prec,
        };
        out.round();
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        let err = self
            .mag_value()
            .mul(rhs.err)
            .add(rhs.mag_value().mul(self.err))
            .add(self.err.mul(rhs.err));
        let mut out = BoundedFloat {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
            err,
            prec,
        };
        out.round();
        out
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        let mut out = BoundedFloat {
            mant: &self.mant * k,
            exp: self.exp,
            err: self.err.mul(Mag::from_bigint(&BigInt::from(k.abs()), 0)),
            prec: self.prec,
        };
        out.round();
        out
    }

    pub fn mul_pow2(&self, e: i64) -> Self {
        BoundedFloat {
            mant: self.mant.clone(),
            exp: self.exp + e,
            err: self.err.mul_pow2(e),
            prec: self.prec,
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        self.mul(&BoundedFloat::from_rational(r, self.prec))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let prec = self.prec.max(rhs.prec);
        let (lo_m, lo_e) = rhs
            .mag_lower()
            .ok_or_else(|| Error::Domain("division by interval containing zero".into()))?;
        if self.mant.is_zero() {
            let mut out = Self::zero(prec);
            out.err = self.err.div_lower(lo_m, lo_e);
            return Ok(out);
        }
        let nb = self.mant.bits() as i64;
        let db = rhs.mant.bits() as i64;
        let shift = (prec as i64 + 2 - (nb - db)).max(0);
        let q = (&self.mant << (shift as u64)) / &rhs.mant;
        let exp = self.exp - rhs.exp - shift;
        let q_mag = Mag::from_bigint(&q, exp);
        // |a/b - q| <= (err_a + |a/b| err_b) / |b|_lo + ulp
        let err = self
            .err
            .add(q_mag.mul(rhs.err))
            .div_lower(lo_m, lo_e)
            .add(Mag::pow2(exp + 1));
        let mut out = BoundedFloat {
            mant: q,
            exp,
            err,
            prec,
        };
        out.round();
        Ok(out)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.mant.sign() == Sign::Minus {
            return Err(Error::Domain("sqrt of negative value".into()));
        }
        let (lo_m, lo_e) = self
            .mag_lower()
            .ok_or_else(|| Error::Domain("sqrt of interval containing zero".into()))?;
        // scale to ~2*prec+4 bits, even shift
        let bits = self.mant.bits() as i64;
        let mut shift = (2 * self.prec as i64 + 4 - bits).max(0);
        if (shift + self.exp) % 2 != 0 {
            shift += 1;
        }
        let scaled = &self.mant << (shift as u64);
        let root = scaled.sqrt();
        let exp = (self.exp - shift) / 2;
        // error of isqrt <= 1 ulp; input error via derivative 1/(2 sqrt(x)_lo)
        // sqrt(x)_lo >= sqrt(lo_m * 2^lo_e) >= sqrt(lo_m) * 2^(lo_e/2 rounded down)
        let half = lo_e.div_euclid(2);
        let root_lo_m = ((lo_m as f64).sqrt().floor() as u64).max(1);
        let (rl_m, rl_e) = if lo_e % 2 == 0 {
            (root_lo_m, half)
        } else {
            (root_lo_m, half) // 2^(lo_e) = 2^(2*half+1); sqrt >= sqrt(lo_m)*2^half
        };
        let err = self
            .err
            .div_lower(rl_m * 2, rl_e)
            .add(Mag::pow2(exp + 1));
        let mut out = BoundedFloat {
            mant: root,
            exp,
            err,
            prec: self.prec,
        };
        out.round();
        Ok(out)
    }

    /// Exact dyadic value (center of the interval).
    pub fn value_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from(&self.mant << (self.exp as u64))
        } else {
            Rational::new(self.mant.clone(), BigInt::from(1) << ((-self.exp) as u64))
        }
    }

    pub fn lo_rational(&self) -> Rational {
        self.value_rational() - self.err.to_rational()
    }

    pub fn hi_rational(&self) -> Rational {
        self.value_rational() + self.err.to_rational()
    }

    /// True if `r` lies within `value ± abs_error`.
    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo_rational() <= r && r <= &self.hi_rational()
    }

    /// True iff the whole interval is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.lo_rational() > Rational::zero_ref()
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let take = bits.min(53);
        let top = (&self.mant >> ((bits - take) as u64)).to_i64().unwrap();
        let e = (self.exp + bits - take).clamp(-1070, 1020) as i32;
        top as f64 * 2f64.powi(e)
    }

    /// Decimal rendering `d.dddddd e±k` with `digits` significant digits.
    pub fn decimal_string(&self, digits: usize) -> String {
        let v = self.value_rational();
        decimal_of_rational(&v, digits)
    }
}

/// Render a rational in scientific notation with `digits` significant digits.
pub fn decimal_of_rational(v: &Rational, digits: usize) -> String {
    use num_integer::Integer;
    if v.is_zero() {
        return "0".to_string();
    }
    let neg = v < &Rational::zero_ref();
    let av = if neg { -v.clone() } else { v.clone() };
    // find decimal exponent d10 with 10^d10 <= av < 10^(d10+1)
    let n_bits = av.numer().bits() as i64 - av.denom().bits() as i64;
    let mut d10 = (n_bits as f64 * 0.30103) as i64 - 1;
    let ten = BigInt::from(10);
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from(ten.pow(k as u32))
        } else {
            Rational::new(BigInt::from(1), ten.pow((-k) as u32))
        }
    };
    while av >= pow10(d10 + 1) {
        d10 += 1;
    }
    while av < pow10(d10) {
        d10 -= 1;
    }
    // digits
    let scaled = &av / pow10(d10 - digits as i64 + 1);
    let (mut int_digits, rem) = scaled.numer().div_rem(scaled.denom());
    // round half up
    if &(rem * 2) >= scaled.denom() {
        int_digits += 1;
    }
    let mut s = int_digits.to_string();
    let mut d10 = d10;
    if s.len() > digits {
        // rounding produced extra digit
        s.truncate(digits);
        d10 += 1;
    }
    let mantissa = if digits > 1 {
        format!("{}.{}", &s[..1], &s[1..])
    } else {
        s.clone()
    };
    format!("{}{}e{}", if neg { "-" } else { "" }, mantissa, d10)
}

trait RationalZero {
    fn zero_ref() -> Rational;
}

impl RationalZero for Rational {
    fn zero_ref() -> Rational {
        Rational::from(BigInt::zero())
    }
}

// ---------------------------------------------------------------------------
// constants: pi and ln 2 via integer series
// ---------------------------------------------------------------------------

fn const_cache() -> &'static Mutex<HashMap<(u8, u32), (BigInt, i64, (u64, i64))>> {
    static CACHE: OnceLock<Mutex<HashMap<(u8, u32), (BigInt, i64, (u64, i64))>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Scaled arctan: floor-ish of `2^wp * atan(1/x)` with error <= nterms + 1.
fn atan_inv_scaled(x: i64, wp: u32) -> (BigInt, u64) {
    let mut total = BigInt::zero();
    let mut power = (BigInt::from(1) << (wp as u64)) / x; // 2^wp / x^(2k+1)
    let x2 = BigInt::from(x) * x;
    let mut k: u64 = 0;
    let mut terms: u64 = 0;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            total += &term;
        } else {
            total -= &term;
        }
        power = power / &x2;
        k += 1;
        terms += 1;
    }
    (total, terms + 1)
}

/// Scaled atanh: `2^wp * atanh(1/x)`, positive terms.
fn atanh_inv_scaled(x: i64, wp: u32) -> (BigInt, u64) {
    let mut total = BigInt::zero();
    let mut power = (BigInt::from(1) << (wp as u64)) / x;
    let x2 = BigInt::from(x) * x;
    let mut k: u64 = 0;
    let mut terms: u64 = 0;
    while !power.is_zero() {
        total += &power / (2 * k + 1);
        power = power / &x2;
        k += 1;
        terms += 1;
    }
    // tail bound: next power / (2k+1) <= 1 in scaled units
    (total, terms + 1)
}

/// π at `prec` bits (Machin's formula).
pub fn pi_bf(prec: u32) -> BoundedFloat {
    if let Some((m, e, (em, ee))) = const_cache().lock().unwrap().get(&(0, prec)) {
        return BoundedFloat {
            mant: m.clone(),
            exp: *e,
            err: Mag { m: *em, e: *ee },
            prec,
        };
    }
    let wp = prec + 32;
    let (a5, e5) = atan_inv_scaled(5, wp);
    let (a239, e239) = atan_inv_scaled(239, wp);
    let mant = a5 * 16 - a239 * 4;
    let err_units = 16 * e5 + 4 * e239 + 1;
    let mut v = BoundedFloat {
        mant,
        exp: -(wp as i64),
        err: Mag::from_bigint(&BigInt::from(err_units), -(wp as i64)),
        prec,
    };
    v.round();
    const_cache().lock().unwrap().insert(
        (0, prec),
        (v.mant.clone(), v.exp, (v.err.m, v.err.e)),
    );
    v
}

/// ln 2 at `prec` bits (`2 atanh(1/3)`).
pub fn ln2_bf(prec: u32) -> BoundedFloat {
    if let Some((m, e, (em, ee))) = const_cache().lock().unwrap().get(&(1, prec)) {
        return BoundedFloat {
            mant: m.clone(),
            exp: *e,
            err: Mag { m: *em, e: *ee },
            prec,
        };
    }
    let wp = prec + 32;
    let (a3, e3) = atanh_inv_scaled(3, wp);
    let mant = a3 * 2;
    let mut v = BoundedFloat {
        mant,
        exp: -(wp as i64),
        err: Mag::from_bigint(&BigInt::from(2 * e3 + 1), -(wp as i64)),
        prec,
    };
    v.round();
    const_cache().lock().unwrap().insert(
        (1, prec),
        (v.mant.clone(), v.exp, (v.err.m, v.err.e)),
    );
    v
}

/// √π at `prec` bits.
pub fn sqrt_pi_bf(prec: u32) -> BoundedFloat {
    pi_bf(prec + 8).sqrt().expect("pi > 0")
}

/// Natural log of a strictly positive value.
pub fn ln_bf(x: &BoundedFloat) -> Result<BoundedFloat> {
    let prec = x.prec;
    let wp = prec + 24;
    let (lo_m, lo_e) = x
        .mag_lower()
        .ok_or_else(|| Error::Domain("ln of interval containing zero".into()))?;
    if x.mant.sign() == Sign::Minus {
        return Err(Error::Domain("ln of negative value".into()));
    }
    // center value m * 2^k with m in [3/4, 3/2)
    let bits = x.mant.bits() as i64;
    let k = bits + x.exp; // x ~ 2^k * fraction in [1/2, 1)
    // write x = m * 2^(k-1), m = mant * 2^(exp-(k-1)) in [1, 2)
    let m = BoundedFloat {
        mant: x.mant.clone(),
        exp: x.exp - (k - 1),
        err: Mag::ZERO,
        prec: wp,
    };
    // choose between m in [1,2): if m >= 1.5 use m/2 and k instead
    let three_halves = BoundedFloat::from_rational(&Rational::new(3.into(), 2.into()), wp);
    let (m, k) = if m.value_rational() >= three_halves.value_rational() {
        (m.mul_pow2(-1), k)
    } else {
        (m, k - 1)
    };
    // t = (m-1)/(m+1), |t| <= 1/5
    let one = BoundedFloat::from_i64(1, wp);
    let t = m.sub(&one).div(&m.add(&one))?;
    let t2 = t.mul(&t);
    let mut term = t.clone();
    let mut sum = BoundedFloat::zero(wp);
    let mut n: i64 = 0;
    loop {
        sum = sum.add(&term.mul_rational(&Rational::new(1.into(), (2 * n + 1).into())));
        term = term.mul(&t2);
        n += 1;
        if term.mag_upper().le_pow2(-(wp as i64)) || n > 4 * wp as i64 {
            break;
        }
    }
    // tail: |t|^(2n+1)/(2n+1) * 1/(1-t^2) <= |term| * 2
    let tail = term.mag_upper().mul_pow2(1);
    let mut ln_m = sum.mul_pow2(1);
    ln_m.widen_error(tail);
    let mut out = ln_m.add(&ln2_bf(wp).mul_i64(k));
    // propagate input error: d ln/dx = 1/x
    if !x.err.is_zero() {
        out.widen_error(x.err.div_lower(lo_m, lo_e));
    }
    let mut out = BoundedFloat {
        prec,
        ..out
    };
    out.round();
    Ok(out)
}

/// exp(x) for |x| up to a few thousand.
pub fn exp_bf(x: &BoundedFloat) -> Result<BoundedFloat> {
    let prec = x.prec;
    let wp = prec + 24;
    let xf = x.to_f64();
    if !(-1.0e6..=1.0e6).contains(&xf) {
        return Err(Error::Domain(format!("exp argument out of range: {xf}")));
    }
    let n = (xf / std::f64::consts::LN_2).round() as i64;
    let ln2 = ln2_bf(wp);
    let mut r = BoundedFloat {
        prec: wp,
        ..x.clone()
    };
    r = r.sub(&ln2.mul_i64(n));
    // |r| should be <= ~0.36; allow up to 0.75
    let one = BoundedFloat::from_i64(1, wp);
    let mut term = one.clone();
    let mut sum = one;
    let mut k: i64 = 1;
    loop {
        term = term.mul(&r).mul_rational(&Rational::new(1.into(), k.into()));
        sum = sum.add(&term);
        k += 1;
        if term.mag_upper().le_pow2(-(wp as i64)) || k > 4 * wp as i64 {
            break;
        }
    }
    // tail <= |term| * 2 for |r| <= 3/4 and k >= 2
    sum.widen_error(term.mag_upper().mul_pow2(1));
    // input error: |exp(x±e) - exp(x)| <= exp_hi * (e^e - 1) <= exp_hi * 2 e for e <= 1/2
    let mut out = sum.mul_pow2(n);
    if !x.err.is_zero() {
        out.widen_error(out.mag_upper().mul(x.err).mul_pow2(1));
    }
    let mut out = BoundedFloat {
        prec,
        ..out
    };
    out.round();
    Ok(out)
}

/// `base^expo` for positive rational base via exp(expo * ln(base)).
pub fn pow_rational_bf(base: &Rational, expo: &Rational, prec: u32) -> Result<BoundedFloat> {
    let wp = prec + 16;
    if base <= &Rational::from(BigInt::zero()) {
        return Err(Error::Domain("pow of nonpositive base".into()));
    }
    let b = BoundedFloat::from_rational(base, wp);
    let l = ln_bf(&b)?;
    let e = l.mul_rational(expo);
    let mut out = exp_bf(&e)?;
    out.prec = prec;
    out.round();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn close_to(v: &BoundedFloat, s: &str) {
        crate::testutil::assert_close(v, s);
    }

    #[test]
    fn pi_and_ln2_match_reference() {
        let pi = pi_bf(192);
        close_to(&pi, "3.14159265358979323846264338327950288419716939937510582097494");
        assert!(pi.abs_error().le_pow2(-180));
        let l2 = ln2_bf(192);
        close_to(&l2, "0.69314718055994530941723212145817656807550013436025525412068");
        assert!(l2.abs_error().le_pow2(-180));
    }

    #[test]
    fn sqrt_pi() {
        let sp = sqrt_pi_bf(160);
        close_to(&sp, "1.77245385090551602729816748334114518279754945612238712821381");
        assert!(sp.abs_error().le_pow2(-150));
    }

    #[test]
    fn ln_and_exp_roundtrip() {
        let x = BoundedFloat::from_rational(&rat(355, 113), 160);
        let l = ln_bf(&x).unwrap();
        close_to(&l, "1.14472997076307522734808237212320006425584749227609003529373");
        let e = exp_bf(&l).unwrap();
        assert!(e.contains(&rat(355, 113)));
        let big = exp_bf(&BoundedFloat::from_i64(-120, 160)).unwrap();
        close_to(&big, "7.66764807372199963243e-53");
    }

    #[test]
    fn division_and_bounds() {
        let a = BoundedFloat::from_rational(&rat(1, 3), 128);
        let b = BoundedFloat::from_rational(&rat(7, 5), 128);
        let q = a.div(&b).unwrap();
        assert!(q.contains(&rat(5, 21)));
        assert!(q.abs_error().le_pow2(-120));
    }

    #[test]
    fn pow_rational() {
        // 2^(-3/4)
        let v = pow_rational_bf(&rat(2, 1), &rat(-3, 4), 160).unwrap();
        close_to(&v, "0.59460355750136053335874998528023795764648604623190870650950");
    }

    #[test]
    fn decimal_formatting() {
        let v = BoundedFloat::from_rational(&rat(4, 33), 96);
        let s = v.decimal_string(10);
        assert!(s.starts_with("1.212121212"), "{s}");
        assert!(s.ends_with("e-1"), "{s}");
    }
}
