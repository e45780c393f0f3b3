//! Lerch transcendent at z = −1, s = 1.

use crate::error::{Error, Result};
use num_traits::Zero;

use crate::exactnum::{rat_i, BoundedFloat, Rational};

use super::gammanum::digamma;

/// Φ(−1, 1, b) = Σ_{i≥0} (−1)^i / (i + b), for b > 0.
///
/// Computed through the digamma reduction
/// Φ(−1,1,b) = (ψ((b+1)/2) − ψ(b/2)) / 2,
/// which the unit tests validate against direct alternating-series brackets.
pub fn lerch_phi_neg1(b: &Rational, precision_bits: u32) -> Result<BoundedFloat> {
    if b <= &Rational::zero() {
        return Err(Error::Pole(format!("lerch_phi_neg1 requires b > 0, got {b}")));
    }
    let half = (b + rat_i(1)) / rat_i(2);
    let lo = b / rat_i(2);
    let a = digamma(&half, precision_bits + 8)?;
    let c = digamma(&lo, precision_bits + 8)?;
    Ok(a.sub(&c).mul_pow2(-1))
}
