//! Certified gamma, log-gamma and digamma at positive rational arguments.
//!
//! Stirling's series with the classical Binet remainder bound: for x > 0,
//! ln gamma(x) = (x - 1/2) ln x - x + ln(2 pi)/2
//!               + sum_{r=1..m} B_{2r} / (2r(2r-1) x^{2r-1}) + R_m,
//! |R_m| <= |B_{2m+2}| / ((2m+1)(2m+2) x^{2m+1}).
//! Arguments are shifted upward by the recurrence until the series reaches
//! the target precision.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{exp_bf, ln_bf, pi_bf, rat, rat_i, BoundedFloat, Mag, Rational};

/// Exact Bernoulli numbers B_0..B_n (even indices; odd are zero except B_1).
fn bernoulli_numbers(n: usize) -> &'static Vec<Rational> {
    static CACHE: OnceLock<Vec<Rational>> = OnceLock::new();
    let v = CACHE.get_or_init(|| {
        let nmax = 130usize;
        let mut b: Vec<Rational> = Vec::with_capacity(nmax + 1);
        for m in 0..=nmax {
            // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
            let mut acc = Rational::zero();
            let mut binom = BigInt::one(); // C(m+1, 0)
            for (j, bj) in b.iter().enumerate().take(m) {
                acc += Rational::from(binom.clone()) * bj;
                // C(m+1, j+1) = C(m+1, j) * (m+1-j)/(j+1)
                binom = binom * BigInt::from((m + 1 - j) as u64) / BigInt::from((j + 1) as u64);
            }
            let bm = if m == 0 {
                Rational::one()
            } else {
                -acc / rat_i(m as i64 + 1)
            };
            b.push(bm);
        }
        b
    });
    assert!(n < v.len(), "Bernoulli table exhausted");
    v
}

/// ln gamma(x) for rational x > 0 with a certified bound.
pub fn ln_gamma_rational(x: &Rational, prec: u32) -> Result<BoundedFloat> {
    if x <= &Rational::zero() {
        return Err(Error::Pole(format!("ln_gamma({x})")));
    }
    let wp = prec + 32;
    // shift so the asymptotic series certifies 2^-(wp+8):
    // with X >= wp/3 and m ~ 1.1 X terms the remainder is far below target.
    let target_x = (wp as i64 / 3).max(24);
    let xf = x.to_f64().unwrap_or(f64::MAX);
    let shift = if xf < target_x as f64 {
        (target_x - xf.floor() as i64).max(0) as usize
    } else {
        0
    };
    let xs = x + rat_i(shift as i64);
    // chain = x (x+1) ... (x+shift-1); ln gamma(x) = ln gamma(xs) - ln(chain)
    let mut chain = Rational::one();
    let mut f = x.clone();
    for _ in 0..shift {
        chain *= &f;
        f += Rational::one();
    }

    let xb = BoundedFloat::from_rational(&xs, wp);
    let lnx = ln_bf(&xb)?;
    let half = rat(1, 2);
    let mut acc = lnx.mul_rational(&(&xs - &half));
    acc = acc.sub(&xb);
    // + ln(2 pi)/2
    let ln2pi = ln_bf(&pi_bf(wp).mul_pow2(1))?;
    acc = acc.add(&ln2pi.mul_pow2(-1));
    // Bernoulli series
    let bern = bernoulli_numbers(128);
    let inv_x2 = Rational::one() / (&xs * &xs);
    let mut xpow = Rational::one() / &xs; // x^{-(2r-1)}
    let mut r = 1usize;
    loop {
        let coeff = &bern[2 * r] / rat_i((2 * r * (2 * r - 1)) as i64);
        let term = coeff * &xpow;
        acc = acc.add(&BoundedFloat::from_rational(&term, wp));
        // remainder bound with m = r
        let rem = (&bern[2 * r + 2]).abs()
            / rat_i(((2 * r + 1) * (2 * r + 2)) as i64)
            * &xpow
            * &inv_x2;
        let rem_mag = Mag::from_bigint(
            &rem.numer().clone(),
            0,
        );
        // cheaper: bound via BoundedFloat
        let rem_bf = BoundedFloat::from_rational(&rem, 32);
        let _ = rem_mag;
        if rem_bf.mag_upper().le_pow2(-(wp as i64 + 4)) || r >= 62 {
            acc.widen_error(rem_bf.mag_upper());
            break;
        }
        xpow *= &inv_x2;
        r += 1;
    }
    if shift > 0 {
        let lc = ln_bf(&BoundedFloat::from_rational(&chain, wp))?;
        acc = acc.sub(&lc);
    }
    Ok(acc)
}

/// gamma(x) for rational x > 0 with a certified bound.
pub fn gamma_rational(x: &Rational, prec: u32) -> Result<BoundedFloat> {
    let wp = prec + 16;
    let lg = ln_gamma_rational(x, wp)?;
    exp_bf(&lg)
}

/// digamma psi(x) for rational x, not a nonpositive integer.
///
/// Upward recurrence past a threshold, then the asymptotic series
/// psi(X) = ln X - 1/(2X) - sum B_{2r} / (2r X^{2r}) with remainder bounded
/// by the magnitude of the first omitted term (enveloping series, X > 0).
pub fn digamma(x: &Rational, precision_bits: u32) -> Result<BoundedFloat> {
    if x.denom().is_one() && x <= &Rational::zero() {
        return Err(Error::Pole(format!("digamma({x})")));
    }
    let prec = precision_bits.max(16);
    let wp = prec + 32;
    let target_x = (wp as i64 / 3).max(24);
    // psi(x) = psi(x + n) - sum_{i=0..n-1} 1/(x+i)
    let xf = x.to_f64().unwrap_or(f64::MAX);
    let mut shift_sum = Rational::zero();
    let mut xs = x.clone();
    if xf < target_x as f64 {
        let n = (target_x as f64 - xf).ceil() as usize;
        for _ in 0..n {
            shift_sum += Rational::one() / &xs;
            xs += Rational::one();
        }
    }
    let xb = BoundedFloat::from_rational(&xs, wp);
    let mut acc = ln_bf(&xb)?;
    acc = acc.sub(&BoundedFloat::from_rational(&(rat(1, 2) / &xs), wp));
    let bern = bernoulli_numbers(128);
    let inv_x2 = Rational::one() / (&xs * &xs);
    let mut xpow = inv_x2.clone(); // x^{-2r}
    let mut r = 1usize;
    loop {
        let term = &bern[2 * r] / rat_i(2 * r as i64) * &xpow;
        acc = acc.sub(&BoundedFloat::from_rational(&term, wp));
        let next = (&bern[2 * r + 2]).abs() / rat_i(2 * (r + 1) as i64) * &xpow * &inv_x2;
        let next_bf = BoundedFloat::from_rational(&next, 32);
        if next_bf.mag_upper().le_pow2(-(wp as i64 + 4)) || r >= 62 {
            acc.widen_error(next_bf.mag_upper());
            break;
        }
        xpow *= &inv_x2;
        r += 1;
    }
    if !shift_sum.is_zero() {
        acc = acc.sub(&BoundedFloat::from_rational(&shift_sum, wp));
    }
    Ok(acc)
}

/// Euler–Mascheroni constant, gamma = -psi(1).
pub fn euler_gamma(prec: u32) -> BoundedFloat {
    digamma(&Rational::one(), prec).expect("psi(1) is finite").neg()
}

/// Beta function B(a, b) = gamma(a) gamma(b) / gamma(a+b), certified.
pub fn beta_rational(a: &Rational, b: &Rational, prec: u32) -> Result<BoundedFloat> {
    let wp = prec + 16;
    let la = ln_gamma_rational(a, wp)?;
    let lb = ln_gamma_rational(b, wp)?;
    let lab = ln_gamma_rational(&(a + b), wp)?;
    exp_bf(&la.add(&lb).sub(&lab))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(v: &BoundedFloat, s: &str, bits: i64) {
        crate::testutil::assert_close(v, s);
        assert!(v.abs_error().le_pow2(-bits), "bound too wide for {s}");
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
    }

    #[test]
    fn gamma_at_known_points() {
        close(&gamma_rational(&rat(1, 2), 160).unwrap(),
              "1.77245385090551602729816748334114518279754945612238712821381", 140);
        close(&gamma_rational(&rat(1, 3), 160).unwrap(),
              "2.67893853470774763365569294097467764412868937795730110095043", 140);
        close(&gamma_rational(&rat(1, 4), 160).unwrap(),
              "3.62560990822190831193068515586767200299516768288006546743338", 140);
        close(&gamma_rational(&rat_i(5), 160).unwrap(), "24", 140);
        // a large argument exercises the no-shift path
        close(&gamma_rational(&rat_i(151), 96).unwrap(),
              "5.713383956445854590478932865261054003189553578601126418e262", 60);
    }

    #[test]
    fn digamma_at_known_points() {
        // psi(1) = -gamma
        close(&digamma(&rat_i(1), 160).unwrap(),
              "-0.57721566490153286060651209008240243104215933593992359880577", 140);
        // psi(2) = 1 - gamma
        close(&digamma(&rat_i(2), 160).unwrap(),
              "0.42278433509846713939348790991759756895784066406007640119423", 140);
        // psi(1/2) = -gamma - 2 ln 2
        close(&digamma(&rat(1, 2), 160).unwrap(),
              "-1.96351002602142347944097633299875556719315960466043410704713", 140);
        assert!(digamma(&rat_i(0), 64).is_err());
        assert!(digamma(&rat_i(-3), 64).is_err());
    }

    #[test]
    fn beta_consistency() {
        // B(3, 4) = 2!3!/6! = 1/60
        let b = beta_rational(&rat_i(3), &rat_i(4), 128).unwrap();
        assert!(b.contains(&rat(1, 60)));
    }
}
