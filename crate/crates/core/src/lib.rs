//! High-precision computation of separability probabilities for generalized
//! two-qubit states under random induced measure.
//!
//! The crate provides:
//! - [`exactnum`]: arbitrary-precision rationals, Pochhammer symbols, exact
//!   gamma arithmetic at half-integers, and certified dyadic big-floats.
//! - [`hyperg`]: generalized hypergeometric evaluation (exact terminating
//!   sums, certified convergent summation at |z| < 1 and z = 1), digamma,
//!   and the Lerch value Φ(−1,1,b).
//! - [`sepformulas`]: the closed-form separability-probability catalog
//!   Q(k,α) / P(k,α), parameter rules, limits, identity checks and
//!   auxiliary constants.
//! - [`recurrences`]: exact first-order recurrence evaluation and
//!   bounded-degree recurrence fitting over the rationals.
//! - [`momentdensity`]: exact determinantal moments and Legendre-basis
//!   density reconstruction (Provost) with tail probabilities.
//! - [`randstates`]: reproducible Monte Carlo sampling of 4×4 density
//!   matrices over real, complex and quaternionic scalars.

pub mod error;
pub mod exactnum;
pub mod hyperg;
pub mod momentdensity;
pub mod randstates;
pub mod recurrences;
pub mod sepformulas;

pub use error::{Error, Result};
pub use exactnum::{BoundedFloat, ExactReal, HalfInteger, Rational};

#[cfg(test)]
pub(crate) mod testutil {
    use crate::exactnum::{parse_decimal, BoundedFloat, Rational};

    /// Unit in the last place of a decimal reference string.
    pub fn reference_ulp(s: &str) -> Rational {
        let (mant, exp10) = match s.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i64>().unwrap()),
            None => (s, 0),
        };
        let frac = mant.split_once('.').map(|(_, f)| f.len()).unwrap_or(0) as i64;
        let k = exp10 - frac;
        let ten = num_bigint::BigInt::from(10);
        if k >= 0 {
            Rational::from(ten.pow(k as u32))
        } else {
            Rational::new(1.into(), ten.pow((-k) as u32))
        }
    }

    /// Assert a certified interval matches a truncated decimal reference,
    /// allowing one unit in the reference's last digit.
    pub fn assert_close(v: &BoundedFloat, s: &str) {
        let r = parse_decimal(s).unwrap();
        let ulp = reference_ulp(s);
        assert!(
            v.lo_rational() <= &r + &ulp && &r - &ulp <= v.hi_rational(),
            "interval [{}, {}] does not match {} (ulp {})",
            v.lo_rational(),
            v.hi_rational(),
            s,
            ulp,
        );
    }
}
