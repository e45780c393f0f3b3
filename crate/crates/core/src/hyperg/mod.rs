//! Generalized hypergeometric engine: exact terminating sums over the
//! rationals, certified convergent summation for |z| < 1 and z = 1,
//! regularized variants, digamma, and the Lerch value Φ(−1,1,b).

pub mod gammanum;
pub mod lerch;
pub mod unitsum;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rat_i, BoundedFloat, Mag, Rational};

pub use gammanum::{beta_rational, digamma, euler_gamma, gamma_rational, ln_gamma_rational};
pub use lerch::lerch_phi_neg1;
pub use unitsum::{sum_dup_pair, weighted_2f1_integral};

/// Parameter record for a generalized hypergeometric series
/// pFq(upper; lower; argument).
#[derive(Clone, Debug, PartialEq)]
pub struct HyperSeries {
    upper: Vec<Rational>,
    lower: Vec<Rational>,
    argument: Rational,
}

impl HyperSeries {
    /// Validates that no lower parameter is a nonpositive integer unless an
    /// upper nonpositive integer truncates the series first.
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>, argument: Rational) -> Result<Self> {
        let s = HyperSeries {
            upper,
            lower,
            argument,
        };
        let trunc = s.termination_order();
        for l in &s.lower {
            if l.denom().is_one() && l <= &Rational::zero() {
                // (l)_j vanishes first at j = -l + 1
                let pole_at = (-l.numer()).to_i64().unwrap_or(i64::MAX) + 1;
                match trunc {
                    Some(n) if (n as i64) < pole_at => {}
                    _ => {
                        return Err(Error::Pole(format!(
                            "lower parameter {l} is a nonpositive integer"
                        )))
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn upper(&self) -> &[Rational] {
        &self.upper
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    pub fn argument(&self) -> &Rational {
        &self.argument
    }

    /// Σ lower − Σ upper, exactly.
    pub fn parameter_excess(&self) -> Rational {
        let sl: Rational = self.lower.iter().sum();
        let su: Rational = self.upper.iter().sum();
        sl - su
    }

    /// Smallest n with −n among the upper parameters, if any.
    pub fn termination_order(&self) -> Option<usize> {
        self.upper
            .iter()
            .filter(|u| u.denom().is_one() && *u <= &Rational::zero())
            .map(|u| (-u.numer()).to_usize().unwrap_or(usize::MAX))
            .min()
    }

    /// Exact rational term ratio t_{j+1}/t_j.
    fn term_ratio(&self, j: usize) -> Rational {
        let jr = rat_i(j as i64);
        let mut num = self.argument.clone();
        for u in &self.upper {
            num *= u + &jr;
        }
        let mut den = &jr + Rational::one();
        for l in &self.lower {
            den *= l + &jr;
        }
        num / den
    }
}

/// Exact sum of a terminating series.
pub fn pfq_exact(s: &HyperSeries) -> Result<Rational> {
    let n = s.termination_order().ok_or_else(|| {
        Error::NonTerminating("pfq_exact requires a nonpositive-integer upper parameter".into())
    })?;
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    for j in 0..=n {
        sum += &term;
        if j < n {
            term *= s.term_ratio(j);
        }
    }
    Ok(sum)
}

/// Policy cap on the number of terms for the slowly convergent z = 1 case.
fn z1_term_cap(prec: u32) -> usize {
    // doubling precision at least quadruples the cap (so halves the bound)
    let steps = (prec / 64).min(8);
    (256usize << (2 * steps)).min(4_000_000)
}

/// Certified numeric sum for |z| < 1, or z = 1 with positive excess.
///
/// Terms are generated by the exact rational ratio recurrence and
/// accumulated in certified dyadic arithmetic; the returned `abs_error`
/// includes both the accumulated rounding and a rigorous tail bound
/// (geometric majorant for |z| < 1, integral-comparison majorant at z = 1).
pub fn pfq_numeric(s: &HyperSeries, precision_bits: u32) -> Result<BoundedFloat> {
    let prec = precision_bits.max(16);
    if let Some(n) = s.termination_order() {
        if n <= 4 * prec as usize + 4096 {
            let exact = pfq_exact(s)?;
            return Ok(BoundedFloat::from_rational(&exact, prec));
        }
    }
    let one = Rational::one();
    let abs_z = s.argument.abs();
    let at_unit = s.argument == one;
    if !at_unit && abs_z >= one {
        return Err(Error::Convergence(format!(
            "argument {} outside |z| < 1 and z != 1",
            s.argument
        )));
    }
    let excess = s.parameter_excess();
    if at_unit {
        if s.upper.len() != s.lower.len() + 1 {
            return Err(Error::Convergence(
                "z = 1 requires p = q + 1 for a nontrivial series".into(),
            ));
        }
        if excess <= Rational::zero() {
            return Err(Error::Convergence(format!(
                "divergent at z = 1: parameter excess {excess} <= 0"
            )));
        }
    }

    let wp = prec + 32;
    let mut sum = BoundedFloat::zero(wp);
    let mut term = BoundedFloat::from_i64(1, wp);
    let mut term_exact = Rational::one(); // tracked while cheap, for tail bounds
    let mut exact_ok = true;
    let target = -(prec as i64 + 2);
    let cap = if at_unit { z1_term_cap(prec) } else { 64 * prec as usize + 4096 };
    let mut j = 0usize;
    loop {
        sum = sum.add(&term);
        let ratio = s.term_ratio(j);
        term = term.mul_rational(&ratio);
        if exact_ok {
            term_exact *= &ratio;
            if term_exact.numer().bits() + term_exact.denom().bits() > 4096 {
                exact_ok = false;
            }
        }
        j += 1;
        if j >= 16 && j.is_power_of_two() || j >= cap {
            if let Some(tail) = tail_bound(s, j, &term) {
                if tail.le_pow2(target) || j >= cap {
                    let mut out = sum;
                    out.widen_error(tail);
                    return Ok(out);
                }
            } else if j >= cap {
                return Err(Error::Convergence(
                    "no tail certificate established within the term cap".into(),
                ));
            }
        }
    }
}

/// Rigorous bound on |Σ_{i>=0} t_{J+i}| given t_J.
fn tail_bound(s: &HyperSeries, j0: usize, term: &BoundedFloat) -> Option<Mag> {
    let t_mag = term.mag_upper();
    let one = Rational::one();
    // all parameter factors must be positive from here on
    let jr = rat_i(j0 as i64);
    for x in s.upper.iter().chain(s.lower.iter()) {
        if x + &jr <= Rational::zero() {
            return None;
        }
    }
    if s.argument == one {
        // majorant ratio (j)/(j + sigma) for sigma = 1 + excess/2 > 1:
        // certificate D(x) = (x) prod(l'+x) - (x + sigma) prod(u+x) >= 0
        // for x >= j0, checked by nonnegativity of shifted coefficients.
        let sigma = Rational::one() + s.parameter_excess() / rat_i(2);
        if sigma <= Rational::one() {
            return None;
        }
        let mut lhs = vec![Rational::zero(), Rational::one()]; // x
        for l in &s.lower {
            lhs = poly_mul(&lhs, &[l.clone(), Rational::one()]);
        }
        lhs = poly_mul(&lhs, &[Rational::one(), Rational::one()]); // the (1+x) from j!
        let mut rhs = vec![sigma.clone(), Rational::one()]; // x + sigma
        for u in &s.upper {
            rhs = poly_mul(&rhs, &[u.clone(), Rational::one()]);
        }
        let diff = poly_sub(&lhs, &rhs);
        let shifted = poly_shift(&diff, &jr);
        if shifted.iter().any(|c| c < &Rational::zero()) {
            return None;
        }
        // tail <= |t_J| * 2F1(J, 1; J+sigma; 1) = |t_J| (J + sigma - 1)/(sigma - 1)
        let factor = (&jr + &sigma - &one) / (&sigma - &one);
        let f = BoundedFloat::from_rational(&factor, 32);
        Some(t_mag.mul(f.mag_upper()))
    } else {
        // rho = sup_{j >= J} |ratio_j| via monotone factor bounds
        let mut rho = s.argument.abs();
        let mut lowers: Vec<Rational> = s.lower.clone();
        lowers.push(Rational::one()); // the j! factor enters as (1+j)
        lowers.sort();
        let mut uppers = s.upper.clone();
        uppers.sort();
        for (i, u) in uppers.iter().enumerate() {
            let f = if i < lowers.len() {
                // (u+j)/(l+j) is monotone in j with limit 1
                let val = (u + &jr) / (&lowers[i] + &jr);
                if val > one {
                    val
                } else {
                    one.clone()
                }
            } else {
                u + &jr
            };
            rho *= f;
        }
        for l in lowers.iter().skip(uppers.len()) {
            rho /= l + &jr;
        }
        if rho >= one {
            return None;
        }
        // tail = t_J (1 + rho + rho^2 + ...) since t_J is not yet accumulated
        let factor = &one / (&one - &rho);
        let f = BoundedFloat::from_rational(&factor, 32);
        Some(t_mag.mul(f.mag_upper()))
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

/// p(x + c) by Horner-style synthetic shifting.
fn poly_shift(p: &[Rational], c: &Rational) -> Vec<Rational> {
    let mut out = p.to_vec();
    let n = out.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let (hi, lo) = {
                let hi = out[j + 1].clone();
                (hi, out[j].clone())
            };
            out[j] = lo + hi * c;
        }
    }
    // standard synthetic division repeated
    out
}

/// Regularized sum: pFq divided by the product of Γ(lower parameters).
pub fn pfq_regularized(s: &HyperSeries, precision_bits: u32) -> Result<BoundedFloat> {
    for l in s.lower() {
        if l <= &Rational::zero() {
            return Err(Error::Pole(format!(
                "regularized series requires positive lower parameters, got {l}"
            )));
        }
    }
    let wp = precision_bits.max(16) + 16;
    let mut v = pfq_numeric(s, wp)?;
    for l in s.lower() {
        let g = gamma_rational(l, wp)?;
        v = v.div(&g)?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{parse_decimal, rat};

    fn series(u: &[Rational], l: &[Rational], z: Rational) -> HyperSeries {
        HyperSeries::new(u.to_vec(), l.to_vec(), z).unwrap()
    }

    #[test]
    fn exact_terminating() {
        // 2F1(-1, 3; 5; 1/2) = 1 - 3/10 = 7/10
        let s = series(&[rat_i(-1), rat_i(3)], &[rat_i(5)], rat(1, 2));
        assert_eq!(pfq_exact(&s).unwrap(), rat(7, 10));
        // an upper 0 gives 1
        let s = series(&[rat_i(0), rat(7, 3)], &[rat(1, 5)], rat(3, 4));
        assert_eq!(pfq_exact(&s).unwrap(), rat_i(1));
        // non-terminating is a mode error
        let s = series(&[rat(1, 2)], &[rat(3, 2)], rat(1, 4));
        assert!(matches!(pfq_exact(&s), Err(Error::NonTerminating(_))));
    }

    #[test]
    fn lower_pole_validation() {
        // bare nonpositive-integer lower parameter is rejected
        assert!(HyperSeries::new(vec![rat(1, 2)], vec![rat_i(-1)], rat(1, 2)).is_err());
        // but allowed when an upper nonpositive integer truncates first:
        // upper -1 truncates at j <= 1, (-1)_j in the denominator is fine at j <= 1
        assert!(HyperSeries::new(vec![rat_i(-1), rat(1, 2)], vec![rat_i(-1)], rat(1, 2)).is_ok());
    }

    #[test]
    fn gauss_value_at_27_32() {
        // 2F1(1/3, 2/3; 5/6; 27/32) = 8/5
        let s = series(&[rat(1, 3), rat(2, 3)], &[rat(5, 6)], rat(27, 32));
        let v = pfq_numeric(&s, 128).unwrap();
        assert!(v.contains(&rat(8, 5)));
        assert!(v.abs_error().le_pow2(-120));
    }

    #[test]
    fn one_f_zero_binomial() {
        // 1F0(a;;z) = (1-z)^(-a)
        for (a, z) in [(rat(1, 2), rat(1, 3)), (rat(-5, 3), rat(-3, 4)), (rat(2, 1), rat(5, 8))] {
            let s = series(&[a.clone()], &[], z.clone());
            let v = pfq_numeric(&s, 96).unwrap();
            let expect = crate::exactnum::pow_rational_bf(
                &(Rational::one() - &z),
                &(-a),
                96,
            )
            .unwrap();
            let d = v.sub(&expect);
            assert!(d.abs().lo_rational() <= Rational::zero(), "1F0 mismatch");
        }
    }

    #[test]
    fn unit_argument_certified() {
        // 3F2(1/2, 1/3, 1/4; 7/8, 9/8; 1): excess = 2 - 13/12 = 11/12 > 0
        let s = series(
            &[rat(1, 2), rat(1, 3), rat(1, 4)],
            &[rat(7, 8), rat(9, 8)],
            rat_i(1),
        );
        let v64 = pfq_numeric(&s, 64).unwrap();
        let v128 = pfq_numeric(&s, 128).unwrap();
        // certified intervals must overlap and the tighter one be contained
        assert!(v64.contains(&v128.value_rational()));
        // doubling precision at least halves the bound
        let e64 = v64.abs_error_rational();
        let e128 = v128.abs_error_rational();
        assert!(e128 * rat_i(2) <= e64);
        // divergent configuration rejected
        let s = series(&[rat(3, 2), rat(3, 2)], &[rat(1, 2)], rat_i(1));
        assert!(matches!(pfq_numeric(&s, 64), Err(Error::Convergence(_))));
    }

    #[test]
    fn terminating_matches_numeric() {
        let s = series(&[rat_i(-4), rat(5, 2), rat(1, 3)], &[rat(7, 2), rat(9, 4)], rat(2, 3));
        let exact = pfq_exact(&s).unwrap();
        let num = pfq_numeric(&s, 128).unwrap();
        assert!(num.contains(&exact));
    }

    #[test]
    fn regularized_empty_series() {
        // 2F~1(a, b; c; 0) = 1/gamma(c)
        let s = series(&[rat(1, 2), rat(5, 2)], &[rat(7, 2)], rat_i(0));
        let v = pfq_regularized(&s, 96).unwrap();
        let g = gamma_rational(&rat(7, 2), 96).unwrap();
        let prod = v.mul(&g);
        assert!(prod.contains(&Rational::one()));
    }

    #[test]
    fn tail_soundness_random_series() {
        // certified bound contains a partial sum extended 4x further
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = rat(rng.random_range(1..20), rng.random_range(1..8));
            let b = rat(rng.random_range(1..20), rng.random_range(1..8));
            let c = &a + &b + rat(rng.random_range(1..6), rng.random_range(1..4));
            let z = rat(rng.random_range(1..8), 9);
            let s = series(&[a, b], &[c], z);
            let v = pfq_numeric(&s, 48).unwrap();
            // brute partial sum, 4x more terms than the bound policy needs
            let mut sum = Rational::zero();
            let mut t = Rational::one();
            for j in 0..1024 {
                sum += &t;
                t *= s.term_ratio(j);
            }
            assert!(
                v.lo_rational() <= sum && sum <= v.hi_rational() + t.abs() * rat_i(16),
                "tail bound failed"
            );
        }
    }

    #[test]
    fn poly_shift_works() {
        // (x-2)^2 shifted by 2 -> x^2
        let p = vec![rat_i(4), rat_i(-4), rat_i(1)];
        let q = poly_shift(&p, &rat_i(2));
        assert_eq!(q, vec![rat_i(0), rat_i(0), rat_i(1)]);
    }

    #[test]
    fn parameter_excess_exact() {
        let s = series(&[rat(1, 3), rat(5, 4)], &[rat(7, 6), rat(3, 2)], rat(1, 2));
        assert_eq!(s.parameter_excess(), rat(13, 12));
    }

    #[test]
    fn lerch_reduction_validated() {
        // direct alternating series brackets vs the digamma reduction
        for b in [rat(1, 2), rat_i(1), rat_i(2), rat(7, 3)] {
            let v = lerch_phi_neg1(&b, 128).unwrap();
            let mut partial = Rational::zero();
            let mut sign = Rational::one();
            let mut hi = Rational::zero();
            let mut lo = Rational::zero();
            for i in 0..4000 {
                partial += &sign / (&b + rat_i(i));
                sign = -sign;
                if i % 2 == 0 {
                    hi = partial.clone();
                } else {
                    lo = partial.clone();
                }
            }
            assert!(v.hi_rational() >= lo && v.lo_rational() <= hi, "lerch bracket");
        }
        let v = lerch_phi_neg1(&rat_i(1), 128).unwrap();
        // ln 2
        assert!(v.contains(&parse_decimal("0.693147180559945309417232121458176568075500134360255254121").unwrap()));
        let v = lerch_phi_neg1(&rat(1, 2), 160).unwrap();
        let half_pi = crate::exactnum::pi_bf(170).mul_pow2(-1);
        assert!(v.sub(&half_pi).abs().mag_upper().le_pow2(-140));
        let v = lerch_phi_neg1(&rat_i(2), 128).unwrap();
        assert!(v.contains(&parse_decimal("0.306852819440054690582767878541823431924499865639744745879").unwrap()));
        assert!(lerch_phi_neg1(&rat_i(0), 64).is_err());
    }
}
