//! Exact arithmetic substrate: arbitrary-precision rationals, Pochhammer
//! symbols, gamma functions at half-integers, and cancellation-aware
//! gamma-ratio evaluation returning `rational * sqrt(pi)^m` values.

pub mod bigfloat;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use bigfloat::{
    decimal_of_rational, exp_bf, ln2_bf, ln_bf, pi_bf, pow_rational_bf, sqrt_pi_bf, BoundedFloat,
    Mag,
};

/// Arbitrary-precision signed fraction, always in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as rational.
pub fn rat_i(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Parse "n/d", "n", or a decimal string like "-0.125" as an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad rational: {s}")))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad rational: {s}")))?;
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        return Ok(Rational::new(num, den));
    }
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return parse_decimal(s);
    }
    let num: BigInt = s
        .parse()
        .map_err(|_| Error::Domain(format!("bad rational: {s}")))?;
    Ok(Rational::from(num))
}

/// Parse a decimal literal (optionally with exponent) as an exact rational.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (mant_str, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (
            m,
            e.parse::<i64>()
                .map_err(|_| Error::Domain(format!("bad decimal: {s}")))?,
        ),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mant_str.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant_str, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits
        .parse()
        .map_err(|_| Error::Domain(format!("bad decimal: {s}")))?;
    let scale = frac_part.len() as i64 - exp10;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::new(num, ten.pow(scale as u32))
    } else {
        Rational::from(num * ten.pow((-scale) as u32))
    })
}

/// Serialize as "numerator/denominator".
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Rising factorial x(x+1)...(x+n-1); 1 for n = 0.
pub fn pochhammer(x: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut f = x.clone();
    for _ in 0..n {
        if f.is_zero() {
            return Rational::zero();
        }
        acc *= &f;
        f += Rational::one();
    }
    acc
}

/// An integer or half-integer, stored as twice its value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: BigInt,
}

impl HalfInteger {
    pub fn new(twice: impl Into<BigInt>) -> Self {
        HalfInteger {
            twice: twice.into(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        HalfInteger {
            twice: BigInt::from(2 * n),
        }
    }

    /// Exact conversion; errors unless the denominator divides 2.
    pub fn from_rational(r: &Rational) -> Result<Self> {
        let twice = r * Rational::from(BigInt::from(2));
        if !twice.denom().is_one() {
            return Err(Error::Domain(format!("{r} is not a half-integer")));
        }
        Ok(HalfInteger {
            twice: twice.numer().clone(),
        })
    }

    pub fn as_rational(&self) -> Rational {
        Rational::new(self.twice.clone(), BigInt::from(2))
    }

    pub fn is_integer(&self) -> bool {
        self.twice.is_even()
    }

    pub fn is_positive(&self) -> bool {
        self.twice.is_positive()
    }

    pub fn plus_int(&self, n: i64) -> Self {
        HalfInteger {
            twice: &self.twice + BigInt::from(2 * n),
        }
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_even() {
            write!(f, "{}", &self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// `coeff * sqrt(pi)^sqrtpi_pow` — the closure of exact gamma arithmetic at
/// integers and half-integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactReal {
    pub coeff: Rational,
    pub sqrtpi_pow: i64,
}

impl ExactReal {
    pub fn from_rational(coeff: Rational) -> Self {
        ExactReal {
            coeff,
            sqrtpi_pow: 0,
        }
    }

    pub fn new(coeff: Rational, sqrtpi_pow: i64) -> Self {
        if coeff.is_zero() {
            return ExactReal {
                coeff,
                sqrtpi_pow: 0,
            };
        }
        ExactReal { coeff, sqrtpi_pow }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn is_rational(&self) -> bool {
        self.sqrtpi_pow == 0 || self.coeff.is_zero()
    }

    /// The rational value; errors if a sqrt(pi) factor survives.
    pub fn as_rational(&self) -> Result<Rational> {
        if self.is_rational() {
            Ok(self.coeff.clone())
        } else {
            Err(Error::Domain(format!(
                "value {} sqrtpi^{} is not rational",
                self.coeff, self.sqrtpi_pow
            )))
        }
    }

    pub fn mul(&self, rhs: &ExactReal) -> ExactReal {
        ExactReal::new(&self.coeff * &rhs.coeff, self.sqrtpi_pow + rhs.sqrtpi_pow)
    }

    pub fn div(&self, rhs: &ExactReal) -> Result<ExactReal> {
        if rhs.coeff.is_zero() {
            return Err(Error::Domain("division by zero ExactReal".into()));
        }
        Ok(ExactReal::new(
            &self.coeff / &rhs.coeff,
            self.sqrtpi_pow - rhs.sqrtpi_pow,
        ))
    }

    pub fn mul_rational(&self, r: &Rational) -> ExactReal {
        ExactReal::new(&self.coeff * r, self.sqrtpi_pow)
    }

    /// Addition is defined only between values with the same sqrt(pi) power
    /// (all in-scope closed forms reduce to this case).
    pub fn add(&self, rhs: &ExactReal) -> Result<ExactReal> {
        if self.coeff.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.coeff.is_zero() {
            return Ok(self.clone());
        }
        if self.sqrtpi_pow != rhs.sqrtpi_pow {
            return Err(Error::Domain(
                "ExactReal addition with mismatched sqrt(pi) powers".into(),
            ));
        }
        Ok(ExactReal::new(&self.coeff + &rhs.coeff, self.sqrtpi_pow))
    }

    pub fn sub(&self, rhs: &ExactReal) -> Result<ExactReal> {
        self.add(&ExactReal::new(-rhs.coeff.clone(), rhs.sqrtpi_pow))
    }

    /// Round to a certified float at the requested precision.
    pub fn to_bounded_float(&self, precision_bits: u32) -> BoundedFloat {
        to_bounded_float(self, precision_bits)
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrtpi_pow == 0 {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}*sqrt(pi)^{}", self.coeff, self.sqrtpi_pow)
        }
    }
}

/// Exact gamma at a positive integer or half-integer.
///
/// Integer x gives (x-1)!; half-integer x gives `(1/2)_(x-1/2) * sqrt(pi)`.
pub fn gamma_half(x: &HalfInteger) -> Result<ExactReal> {
    if !x.is_positive() {
        return Err(Error::Pole(format!("gamma({x})")));
    }
    if x.is_integer() {
        let n = (&x.twice / BigInt::from(2))
            .to_u64()
            .ok_or_else(|| Error::Domain("gamma argument too large".into()))?;
        let mut acc = BigInt::one();
        for i in 2..n {
            acc *= i;
        }
        Ok(ExactReal::from_rational(Rational::from(acc)))
    } else {
        let n = ((&x.twice - BigInt::one()) / BigInt::from(2))
            .to_u64()
            .ok_or_else(|| Error::Domain("gamma argument too large".into()))?;
        Ok(ExactReal::new(pochhammer(&rat(1, 2), n as usize), 1))
    }
}

/// Exact ratio of gamma products at half-integers.
///
/// Arguments differing by integers are aligned into Pochhammer chains before
/// any expansion, so large factorials never materialize on their own.
pub fn gamma_ratio(numerators: &[HalfInteger], denominators: &[HalfInteger]) -> Result<ExactReal> {
    for x in numerators.iter().chain(denominators) {
        if !x.is_positive() {
            return Err(Error::Pole(format!("gamma({x})")));
        }
    }
    let mut acc = ExactReal::one();
    // split by parity of twice-value; within a class arguments differ by ints
    let mut nums: Vec<&HalfInteger> = numerators.iter().collect();
    let mut dens: Vec<&HalfInteger> = denominators.iter().collect();
    nums.sort();
    dens.sort();
    for parity in [0u8, 1u8] {
        let mut ns: Vec<&HalfInteger> = nums
            .iter()
            .copied()
            .filter(|x| (x.twice.is_even() as u8) == parity)
            .collect();
        let mut ds: Vec<&HalfInteger> = dens
            .iter()
            .copied()
            .filter(|x| (x.twice.is_even() as u8) == parity)
            .collect();
        // pair largest with largest: gamma(a)/gamma(b) telescopes
        while !ns.is_empty() && !ds.is_empty() {
            let (a, b) = (ns.pop().unwrap(), ds.pop().unwrap());
            let diff = ((&a.twice - &b.twice) / BigInt::from(2))
                .to_i64()
                .ok_or_else(|| Error::Domain("gamma arguments too far apart".into()))?;
            let chain = if diff >= 0 {
                // gamma(a)/gamma(b) = (b)_(a-b)
                pochhammer(&b.as_rational(), diff as usize)
            } else {
                Rational::one() / pochhammer(&a.as_rational(), (-diff) as usize)
            };
            acc = acc.mul_rational(&chain);
        }
        for a in ns {
            acc = acc.mul(&gamma_half(a)?);
        }
        for b in ds {
            acc = acc.div(&gamma_half(b)?)?;
        }
    }
    Ok(acc)
}

/// Round `coeff * sqrt(pi)^m` to a certified float.
pub fn to_bounded_float(x: &ExactReal, precision_bits: u32) -> BoundedFloat {
    let prec = precision_bits.max(16);
    if x.sqrtpi_pow == 0 || x.coeff.is_zero() {
        return BoundedFloat::from_rational(&x.coeff, prec);
    }
    let wp = prec + 16;
    let c = BoundedFloat::from_rational(&x.coeff, wp);
    let sp = sqrt_pi_bf(wp);
    let mut acc = c;
    let n = x.sqrtpi_pow.unsigned_abs();
    for _ in 0..n {
        acc = if x.sqrtpi_pow > 0 {
            acc.mul(&sp)
        } else {
            acc.div(&sp).expect("sqrt(pi) > 0")
        };
    }
    acc
}

// ---------------------------------------------------------------------------
// Radical: rational * sqrt(pi)^a * sqrt(2)^b * sqrt(3)^c * sqrt(5)^d
// ---------------------------------------------------------------------------

/// Internal accumulator for exact gamma-product evaluation via reflection.
///
/// Even radical powers are folded into the rational coefficient, so every
/// exponent stays in {0, 1} after normalization (negative exponents fold via
/// `1/sqrt(n) = sqrt(n)/n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radical {
    pub coeff: Rational,
    pub sqrtpi: i64,
    sqrt2: i64,
    sqrt3: i64,
    sqrt5: i64,
}

impl Radical {
    pub fn one() -> Self {
        Radical {
            coeff: Rational::one(),
            sqrtpi: 0,
            sqrt2: 0,
            sqrt3: 0,
            sqrt5: 0,
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        Radical {
            coeff: r,
            ..Radical::one()
        }
    }

    fn normalize(&mut self) {
        for (p, base) in [
            (&mut self.sqrt2, 2i64),
            (&mut self.sqrt3, 3i64),
            (&mut self.sqrt5, 5i64),
        ] {
            // fold even parts into coeff, keep exponent in {0,1}
            let q = p.div_euclid(2);
            let r = p.rem_euclid(2);
            if q != 0 {
                let f = Rational::from(BigInt::from(base)).pow(q as i32);
                self.coeff *= f;
            }
            *p = r;
        }
    }

    pub fn mul_rational(&mut self, r: &Rational) {
        self.coeff *= r;
    }

    pub fn mul_radical(&mut self, other: &Radical) {
        self.coeff *= &other.coeff;
        self.sqrtpi += other.sqrtpi;
        self.sqrt2 += other.sqrt2;
        self.sqrt3 += other.sqrt3;
        self.sqrt5 += other.sqrt5;
        self.normalize();
    }

    pub fn div_radical(&mut self, other: &Radical) {
        self.coeff /= &other.coeff;
        self.sqrtpi -= other.sqrtpi;
        // 1/sqrt(n) = sqrt(n)/n
        self.sqrt2 -= other.sqrt2;
        self.sqrt3 -= other.sqrt3;
        self.sqrt5 -= other.sqrt5;
        if self.sqrt2 < 0 {
            self.coeff /= Rational::from(BigInt::from(2)).pow((-self.sqrt2.div_euclid(2).min(0)) as i32);
        }
        self.normalize();
        // after normalize exponents are in {0,1}
    }

    /// sqrt(2)^b etc. with integer exponents (possibly negative).
    pub fn mul_sqrt(&mut self, base: u32, power: i64) {
        match base {
            2 => self.sqrt2 += power,
            3 => self.sqrt3 += power,
            5 => self.sqrt5 += power,
            _ => panic!("unsupported radical base {base}"),
        }
        // negative exponents fold: sqrt(n)^-1 = sqrt(n)/n
        for (p, b) in [
            (&mut self.sqrt2, 2i64),
            (&mut self.sqrt3, 3i64),
            (&mut self.sqrt5, 5i64),
        ] {
            while *p < 0 {
                *p += 2;
                self.coeff /= Rational::from(BigInt::from(b));
            }
        }
        self.normalize();
    }

    /// Into ExactReal when no sqrt(2)/sqrt(3)/sqrt(5) content remains.
    pub fn into_exact_real(mut self) -> Result<ExactReal> {
        self.normalize();
        if self.coeff.is_zero() {
            return Ok(ExactReal::from_rational(Rational::zero()));
        }
        if self.sqrt2 != 0 || self.sqrt3 != 0 || self.sqrt5 != 0 {
            return Err(Error::Domain(
                "radical content is not a pure sqrt(pi) power".into(),
            ));
        }
        Ok(ExactReal::new(self.coeff, self.sqrtpi))
    }

    pub fn to_bounded_float(&self, prec: u32) -> BoundedFloat {
        let wp = prec + 16;
        let mut acc = BoundedFloat::from_rational(&self.coeff, wp);
        let sp = sqrt_pi_bf(wp);
        for _ in 0..self.sqrtpi.unsigned_abs() {
            acc = if self.sqrtpi > 0 {
                acc.mul(&sp)
            } else {
                acc.div(&sp).unwrap()
            };
        }
        for (p, b) in [(self.sqrt2, 2i64), (self.sqrt3, 3i64), (self.sqrt5, 5i64)] {
            if p != 0 {
                debug_assert!(p == 1);
                let s = BoundedFloat::from_i64(b, wp).sqrt().unwrap();
                acc = acc.mul(&s);
            }
        }
        acc
    }
}

/// `base^expo` as a Radical, for rational base > 0 and expo with
/// denominator 1 or 2. Requires the non-{2,3,5} part of base to be a
/// perfect square when expo is a half-integer.
pub fn rational_pow_radical(base: &Rational, expo: &Rational) -> Result<Radical> {
    if base <= &Rational::zero() {
        return Err(Error::Domain("rational_pow_radical: base must be > 0".into()));
    }
    if expo.denom().is_one() {
        let e = expo
            .numer()
            .to_i32()
            .ok_or_else(|| Error::Domain("exponent too large".into()))?;
        return Ok(Radical::from_rational(base.pow(e)));
    }
    if *expo.denom() != BigInt::from(2) {
        return Err(Error::Domain(format!(
            "exponent {expo} is not a half-integer"
        )));
    }
    // base^(n/2) = base^q * sqrt(base)^r with n = 2q + r
    let n = expo
        .numer()
        .to_i64()
        .ok_or_else(|| Error::Domain("exponent too large".into()))?;
    let q = n.div_euclid(2);
    let r = n.rem_euclid(2);
    let mut out = Radical::from_rational(base.pow(q as i32));
    if r == 1 {
        // sqrt(base): factor numerator and denominator over {2,3,5,square}
        let mut factor_sqrt = |x: &BigInt, invert: bool| -> Result<()> {
            let mut rest = x.clone();
            for (b, idx) in [(2u32, 2u32), (3, 3), (5, 5)] {
                let bb = BigInt::from(b);
                let mut cnt = 0i64;
                while (&rest % &bb).is_zero() {
                    rest /= &bb;
                    cnt += 1;
                }
                let sign = if invert { -1 } else { 1 };
                out.mul_sqrt(idx, sign * cnt);
            }
            let root = rest.sqrt();
            if &root * &root != rest {
                return Err(Error::Domain(format!(
                    "sqrt of {x} is not in the 2/3/5 radical monoid"
                )));
            }
            let f = Rational::from(root);
            if invert {
                out.coeff /= f;
            } else {
                out.coeff *= f;
            }
            Ok(())
        };
        factor_sqrt(base.numer(), false)?;
        factor_sqrt(base.denom(), true)?;
    }
    Ok(out)
}

/// Exact product `prod gamma(nums) / prod gamma(dens)` for positive rational
/// arguments whose fractional parts pair under reflection into known sine
/// products. Returns None when the product does not reduce to the
/// `rational * sqrt(pi)^a sqrt(2)^b sqrt(3)^c sqrt(5)^d` monoid.
pub fn gamma_prod_exact(nums: &[Rational], dens: &[Rational]) -> Option<Radical> {
    use std::collections::BTreeMap;
    let mut out = Radical::one();
    // net exponent per fractional part f in (0,1]
    let mut frac: BTreeMap<Rational, i64> = BTreeMap::new();
    let mut push = |x: &Rational, sign: i64, out: &mut Radical| -> Option<()> {
        if x <= &Rational::zero() {
            return None;
        }
        // gamma(x) = (f)_(m) * gamma(f), x = f + m with f in (0,1]
        let m = (x - Rational::new(BigInt::one(), BigInt::from(1_000_000_000_000u64)))
            .floor()
            .numer()
            .to_i64()?;
        let m = m.max(0);
        let f = x - Rational::from(BigInt::from(m));
        let chain = pochhammer(&f, m as usize);
        if sign > 0 {
            out.mul_rational(&chain);
        } else {
            out.mul_rational(&(Rational::one() / chain));
        }
        if !f.is_one() {
            *frac.entry(f).or_insert(0) += sign;
        }
        Some(())
    };
    for x in nums {
        push(x, 1, &mut out)?;
    }
    for x in dens {
        push(x, -1, &mut out)?;
    }
    // now reduce gamma(f)^e products
    // half: gamma(1/2) = sqrt(pi)
    let take = |f: &Rational, frac: &mut BTreeMap<Rational, i64>| -> i64 {
        frac.remove(f).unwrap_or(0)
    };
    let half = rat(1, 2);
    let e_half = take(&half, &mut frac);
    out.sqrtpi += e_half;

    // reflection pairs (f, 1-f) must carry equal exponents
    // thirds: gamma(1/3)gamma(2/3) = 2 pi / sqrt(3)
    let reflect = |a: Rational,
                       b: Rational,
                       frac: &mut BTreeMap<Rational, i64>|
     -> Option<i64> {
        let ea = frac.remove(&a).unwrap_or(0);
        let eb = frac.remove(&b).unwrap_or(0);
        if ea != eb {
            return None;
        }
        Some(ea)
    };
    // (1/3, 2/3): pi / sin(pi/3) = 2 pi / sqrt(3)
    let e = reflect(rat(1, 3), rat(2, 3), &mut frac)?;
    if e != 0 {
        out.mul_rational(&rat(2, 1).pow(e as i32));
        out.sqrtpi += 2 * e;
        out.mul_sqrt(3, -e);
    }
    // (1/4, 3/4): pi / sin(pi/4) = pi sqrt(2)
    let e = reflect(rat(1, 4), rat(3, 4), &mut frac)?;
    if e != 0 {
        out.sqrtpi += 2 * e;
        out.mul_sqrt(2, e);
    }
    // (1/6, 5/6): pi / sin(pi/6) = 2 pi
    let e = reflect(rat(1, 6), rat(5, 6), &mut frac)?;
    if e != 0 {
        out.mul_rational(&rat(2, 1).pow(e as i32));
        out.sqrtpi += 2 * e;
    }
    // fifths appear only jointly: gamma(1/5)gamma(4/5)gamma(2/5)gamma(3/5)
    //   = pi^2 / (sin(pi/5) sin(2pi/5)) = 4 pi^2 / sqrt(5)
    let e15 = reflect(rat(1, 5), rat(4, 5), &mut frac)?;
    let e25 = reflect(rat(2, 5), rat(3, 5), &mut frac)?;
    if e15 != e25 {
        return None;
    }
    if e15 != 0 {
        out.mul_rational(&rat(4, 1).pow(e15 as i32));
        out.sqrtpi += 4 * e15;
        out.mul_sqrt(5, -e15);
    }
    // tenths jointly: gamma(1/10)gamma(9/10)gamma(3/10)gamma(7/10)
    //   = pi^2 / (sin(pi/10) sin(3pi/10)) = 4 pi^2
    let e110 = reflect(rat(1, 10), rat(9, 10), &mut frac)?;
    let e310 = reflect(rat(3, 10), rat(7, 10), &mut frac)?;
    if e110 != e310 {
        return None;
    }
    if e110 != 0 {
        out.mul_rational(&rat(4, 1).pow(e110 as i32));
        out.sqrtpi += 4 * e110;
    }
    if frac.values().any(|e| *e != 0) {
        return None;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&rat(3, 2), 2), rat(15, 4));
        assert_eq!(pochhammer(&rat(2, 1), 0), rat(1, 1));
        assert_eq!(pochhammer(&rat(-3, 1), 5), rat(0, 1));
    }

    #[test]
    fn gamma_half_examples() {
        let g = gamma_half(&HalfInteger::new(1)).unwrap(); // gamma(1/2)
        assert_eq!(g, ExactReal::new(rat(1, 1), 1));
        let g = gamma_half(&HalfInteger::new(7)).unwrap(); // gamma(7/2)
        assert_eq!(g, ExactReal::new(rat(15, 8), 1));
        let g = gamma_half(&HalfInteger::from_int(3)).unwrap();
        assert_eq!(g, ExactReal::from_rational(rat(2, 1)));
        assert!(gamma_half(&HalfInteger::from_int(0)).is_err());
    }

    #[test]
    fn gamma_ratio_examples() {
        // gamma(9/2) / (gamma(1/2) gamma(5)) = 35/128
        let r = gamma_ratio(
            &[HalfInteger::new(9)],
            &[HalfInteger::new(1), HalfInteger::from_int(5)],
        )
        .unwrap();
        assert_eq!(r, ExactReal::from_rational(rat(35, 128)));
        // gamma(3)/gamma(3) = 1
        let r = gamma_ratio(&[HalfInteger::from_int(3)], &[HalfInteger::from_int(3)]).unwrap();
        assert_eq!(r, ExactReal::one());
        // gamma(7/2) gamma(1/2) / gamma(4) = 5/16 * pi
        let r = gamma_ratio(
            &[HalfInteger::new(7), HalfInteger::new(1)],
            &[HalfInteger::from_int(4)],
        )
        .unwrap();
        assert_eq!(r, ExactReal::new(rat(5, 16), 2));
    }

    #[test]
    fn gamma_ratio_rejects_poles() {
        assert!(gamma_ratio(&[HalfInteger::from_int(-1)], &[]).is_err());
        assert!(gamma_ratio(&[], &[HalfInteger::new(-1)]).is_err());
    }

    #[test]
    fn to_bounded_float_examples() {
        let sp = ExactReal::new(rat(1, 1), 1).to_bounded_float(64);
        assert!(sp.contains(&parse_decimal("1.7724538509055160273").unwrap()));
        let dyadic = ExactReal::from_rational(rat(29, 128)).to_bounded_float(64);
        assert!(dyadic.is_exact());
        assert_eq!(dyadic.value_rational(), rat(29, 128));
        let third = ExactReal::from_rational(rat(4, 33)).to_bounded_float(64);
        assert!(third.contains(&rat(4, 33)));
    }

    #[test]
    fn radical_gamma_products() {
        // gamma(1/3) gamma(2/3) = 2 pi / sqrt(3): coeff 2/3 sqrt3 sqrtpi^2
        let r = gamma_prod_exact(&[rat(1, 3), rat(2, 3)], &[]).unwrap();
        let er = r.clone();
        assert_eq!(er.sqrtpi, 2);
        // numeric check vs pi
        let v = r.to_bounded_float(128);
        let pi = pi_bf(128);
        let target = pi
            .mul(&BoundedFloat::from_i64(2, 128))
            .div(&BoundedFloat::from_i64(3, 128).sqrt().unwrap())
            .unwrap();
        assert!(v.sub(&target).abs().mag_upper().le_pow2(-100));

        // gamma(5/6) gamma(7/6) = (1/6) gamma(5/6)gamma(1/6) = pi/3
        let r = gamma_prod_exact(&[rat(5, 6), rat(7, 6)], &[]).unwrap();
        let er = r.into_exact_real().unwrap();
        assert_eq!(er, ExactReal::new(rat(1, 3), 2));

        // tenths, jointly: gamma(17/10)gamma(19/10)gamma(21/10)gamma(23/10)
        let r = gamma_prod_exact(
            &[rat(17, 10), rat(19, 10), rat(21, 10), rat(23, 10)],
            &[],
        )
        .unwrap();
        let er = r.into_exact_real().unwrap();
        assert_eq!(er.sqrtpi_pow, 4);
        assert_eq!(er.coeff, rat(27027, 250000)); // (7*13*3*9*11*1/10^6)*4
    }

    #[test]
    fn radical_pow() {
        let r = rational_pow_radical(&rat(27, 1), &rat(1, 2)).unwrap();
        let er = r.to_bounded_float(96);
        let target = BoundedFloat::from_i64(27, 96).sqrt().unwrap();
        assert!(er.sub(&target).abs().mag_upper().le_pow2(-80));
        let r = rational_pow_radical(&rat(50000, 1), &rat(-1, 2)).unwrap();
        assert_eq!(r.coeff, rat(1, 500)); // 1/(100 sqrt5) = sqrt5/500
    }

    proptest! {
        #[test]
        fn pochhammer_composition(num in -20i64..20, den in 1i64..8, n in 0usize..20, m in 0usize..12) {
            let x = rat(num, den);
            let lhs = pochhammer(&x, n) * pochhammer(&(x.clone() + rat_i(n as i64)), m);
            let rhs = pochhammer(&x, n + m);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn gamma_recurrence(twice in 1i64..100) {
            // gamma(x+1) = x gamma(x) for positive half-integers
            let x = HalfInteger::new(twice);
            let gx = gamma_half(&x).unwrap();
            let gx1 = gamma_half(&x.plus_int(1)).unwrap();
            let expected = gx.mul_rational(&x.as_rational());
            prop_assert_eq!(gx1, expected);
        }

        #[test]
        fn gamma_ratio_matches_bruteforce(args in proptest::collection::vec((1i64..41, 0usize..2), 1..6)) {
            let mut nums = Vec::new();
            let mut dens = Vec::new();
            for (t, side) in args {
                if side == 0 { nums.push(HalfInteger::new(t)); } else { dens.push(HalfInteger::new(t)); }
            }
            let fast = gamma_ratio(&nums, &dens).unwrap();
            let mut brute = ExactReal::one();
            for x in &nums { brute = brute.mul(&gamma_half(x).unwrap()); }
            for x in &dens { brute = brute.div(&gamma_half(x).unwrap()).unwrap(); }
            prop_assert_eq!(fast, brute);
        }

        #[test]
        fn bounded_float_contains_higher_precision(num in -10000i64..10000, den in 1i64..10000, m in -3i64..4) {
            let x = ExactReal::new(rat(num, den), m);
            let lo = x.to_bounded_float(64);
            let hi = x.to_bounded_float(256);
            // the 64-bit interval must contain the much tighter 256-bit value
            prop_assert!(lo.contains(&hi.value_rational()) || lo.hi_rational() >= hi.lo_rational() && lo.lo_rational() <= hi.hi_rational());
        }
    }
}
