//! Certified fast evaluation of the slowly convergent unit-argument shapes.
//!
//! Direct summation of these series gains only ~j^(-1/2) per term, so both
//! evaluators here exchange the sum for geometrically convergent pieces:
//!
//! - [`sum_dup_pair`]: S(c) = Σ_j (c)_{2j} / (c + 3/2)_{2j}. The Pochhammer
//!   pair is a Beta ratio, so S(c) = (1/B(c,3/2)) ∫₀¹ x^{c-1}(1-x)^{-1/2}
//!   (1+x)^{-1} dx = Σ_i 2^{-i-1} B(i+1/2, c) / B(c, 3/2).
//! - [`weighted_2f1_integral`]: J(μ,ν) = ∫₀¹ x^{μ-1}(1-x)^{ν-1}
//!   ₂F₁(a,b;a+b;x²) dx, via the Taylor series on [0,1/2] and the
//!   logarithmic connection formula (c = a+b case) on [1/2,1], where the
//!   elementary integrals ∫ v^{s-1} w^n (-ln v)^{0,1} dv, w = v(2-v),
//!   satisfy M_n(s) = 2 M_{n-1}(s+1) - M_{n-1}(s+2).

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{
    ln2_bf, pow_rational_bf, rat, rat_i, BoundedFloat, Mag, Rational,
};

use super::gammanum::{beta_rational, digamma, ln_gamma_rational};
use crate::exactnum::exp_bf;

/// Σ_j (c)_{2j} / (c + 3/2)_{2j} for c > 0, certified.
pub fn sum_dup_pair(c: &Rational, precision_bits: u32) -> Result<BoundedFloat> {
    if c <= &Rational::zero() {
        return Err(Error::Domain(format!("sum_dup_pair requires c > 0, got {c}")));
    }
    let wp = precision_bits.max(16) + 32;
    let mut b = beta_rational(&rat(1, 2), c, wp)?; // B(i+1/2, c) at i = 0
    let mut acc = BoundedFloat::zero(wp);
    let mut i: i64 = 0;
    loop {
        let term = b.mul_pow2(-(i + 1));
        acc = acc.add(&term);
        // tail <= term * sum_{m>=1} 2^-m * (ratio < 1) = term
        if term.mag_upper().le_pow2(-(wp as i64)) || i > 4 * wp as i64 {
            acc.widen_error(term.mag_upper());
            break;
        }
        // B(i+3/2, c)/B(i+1/2, c) = (i+1/2)/(i+1/2+c)
        let r = (rat(2 * i + 1, 2)) / (rat(2 * i + 1, 2) + c);
        b = b.mul_rational(&r);
        i += 1;
    }
    let denom = beta_rational(c, &rat(3, 2), wp)?;
    acc.div(&denom)
}

/// Parameters and working state for the weighted 2F1 integral.
struct LogCaseParams {
    a: Rational,
    b: Rational,
}

/// J(μ, ν) = ∫₀¹ x^{μ-1} (1-x)^{ν-1} ₂F₁(a, b; a+b; x²) dx
/// for μ > 0, 0 < ν ≤ 2, a, b > 0, with a certified bound.
pub fn weighted_2f1_integral(
    mu: &Rational,
    nu: &Rational,
    a: &Rational,
    b: &Rational,
    precision_bits: u32,
) -> Result<BoundedFloat> {
    if mu <= &Rational::zero() || nu <= &Rational::zero() || nu > &rat_i(2) {
        return Err(Error::Domain(format!(
            "weighted_2f1_integral requires mu > 0, 0 < nu <= 2 (mu={mu}, nu={nu})"
        )));
    }
    if a <= &Rational::zero() || b <= &Rational::zero() {
        return Err(Error::Domain("2F1 parameters must be positive".into()));
    }
    let prec = precision_bits.max(32);
    let wp = prec + 48;
    let p = LogCaseParams {
        a: a.clone(),
        b: b.clone(),
    };
    let reg_a = region_taylor(mu, nu, &p, wp)?;
    let reg_b = region_logcase(mu, nu, &p, wp)?;
    Ok(reg_a.add(&reg_b))
}

/// ∫₀^{1/2} x^{μ-1}(1-x)^{ν-1} Σ_j u_j x^{2j} dx with
/// u_j = (a)_j (b)_j / ((a+b)_j j!).
///
/// Each incomplete-Beta factor is evaluated by its own binomial series
/// (no long recurrence chains, so rounding does not accumulate).
fn region_taylor(
    mu: &Rational,
    nu: &Rational,
    p: &LogCaseParams,
    wp: u32,
) -> Result<BoundedFloat> {
    let c = &p.a + &p.b;
    let half_mu = pow_rational_bf(&rat(1, 2), mu, wp)?;
    // beta-coefficients of (1-x)^{ν-1}; |β_m| <= 1 for ν <= 2
    let m_max = wp as usize + 16;
    let mut betas: Vec<Rational> = Vec::with_capacity(m_max + 1);
    let mut co = Rational::one();
    for m in 0..=m_max {
        betas.push(co.clone());
        // binom(ν-1, m+1)(-1)^{m+1} = prev * (m+1-ν)/(m+1)
        co = co * ((rat_i(m as i64 + 1) - nu) / rat_i(m as i64 + 1));
    }
    let j_ab = (&p.a * &p.b - &c).ceil().numer().to_i64().unwrap_or(0).max(0) as usize;
    let j_max = (wp as usize / 2 + 8).max(j_ab + 1);

    let mut acc = BoundedFloat::zero(wp);
    let mut u = Rational::one();
    let mut u_max = Rational::one();
    for j in 0..=j_max {
        // Bh(μ+2j, ν) = (1/2)^{μ+2j} Σ_m β_m 2^{-m} / (μ+2j+m)
        let pj = mu + rat_i(2 * j as i64);
        let mut inner = BoundedFloat::zero(wp);
        for (m, beta) in betas.iter().enumerate() {
            let term = beta / (rat_i(m as i64) + &pj);
            inner = inner.add(&BoundedFloat::from_rational(&term, wp).mul_pow2(-(m as i64)));
            if m > 8 && term.abs().to_f64().unwrap_or(1.0) < 1e-3 {
                // terms decay at least like 2^-m; cut when far below target
                let bound = Mag::pow2(-(m as i64));
                if bound.le_pow2(-(wp as i64 + 2)) {
                    break;
                }
            }
        }
        // m-series tail: |Σ_{m>M} β_m 2^{-m}/(p+m)| <= 2^{-M}
        inner.widen_error(Mag::pow2(-(m_max as i64)));
        let bh = inner.mul(&half_mu).mul_pow2(-2 * j as i64);
        acc = acc.add(&bh.mul_rational(&u));
        if u > u_max {
            u_max = u.clone();
        }
        let jr = rat_i(j as i64);
        u = u * (&p.a + &jr) * (&p.b + &jr) / ((&c + &jr) * (&jr + Rational::one()));
    }
    // j-tail: u_j <= u_max for j > j_max >= j_ab; Bh <= 2 (1/2)^{μ+2j}/μ
    let tail = half_mu
        .mag_upper()
        .mul(Mag::pow2(-2 * (j_max as i64 + 1) + 3))
        .mul(BoundedFloat::from_rational(&(u_max / mu), 32).mag_upper());
    acc.widen_error(tail);
    Ok(acc)
}

/// ∫_{1/2}^1 x^{μ-1}(1-x)^{ν-1} F(x²) dx through DLMF 15.8.10:
/// F(y) = κ Σ_n e_n (d_n − ln w) w^n, w = 1 − y,
/// κ = Γ(a+b)/(Γ(a)Γ(b)), e_n = (a)_n(b)_n/(n!)²,
/// d_n = 2ψ(n+1) − ψ(a+n) − ψ(b+n).
fn region_logcase(
    mu: &Rational,
    nu: &Rational,
    p: &LogCaseParams,
    wp: u32,
) -> Result<BoundedFloat> {
    let a = &p.a;
    let b = &p.b;
    let c = a + b;

    // series lengths
    let ab_f = (a + b).to_f64().unwrap_or(8.0);
    let mut nb = (((wp as f64 + 16.0) * std::f64::consts::LN_2) / (4f64 / 3f64).ln()) as usize;
    // correct for polynomial growth e_n ~ n^{a+b-1}
    for _ in 0..4 {
        let corr = (ab_f + 2.0) * (nb.max(2) as f64).ln() / (4f64 / 3f64).ln();
        nb = ((wp as f64 + 16.0) * std::f64::consts::LN_2 / (4f64 / 3f64).ln() + corr) as usize;
    }
    let nb_max = nb + 32;
    let np = wp as usize + mu.to_f64().unwrap_or(8.0).ceil().max(1.0) as usize + 16;
    let nr = wp as usize / 2 + 16;
    // working precision inflated for the M/L recurrence (error growth <= 3 per step)
    let wpb = wp + (nb_max as f64 * 1.585) as u32 + 64;

    // constants
    let kappa = exp_bf(
        &ln_gamma_rational(&c, wpb)?
            .sub(&ln_gamma_rational(a, wpb)?)
            .sub(&ln_gamma_rational(b, wpb)?),
    )?;
    let psi1 = digamma(&Rational::one(), wpb)?;
    let d0 = psi1
        .mul_pow2(1)
        .sub(&digamma(a, wpb)?)
        .sub(&digamma(b, wpb)?);
    let ln2 = ln2_bf(wpb);

    // binomial weights of (1-v)^{μ-1}
    let mut wbin: Vec<Rational> = Vec::with_capacity(np + 1);
    let mut co = Rational::one();
    let mut wstar = Rational::one();
    for t in 0..=np {
        wbin.push(co.clone());
        if co.abs() > wstar {
            wstar = co.abs();
        }
        co = co * ((rat_i(t as i64 + 1) - mu) / rat_i(t as i64 + 1));
    }
    // W2(t) = Σ_{p'+r=t, r>=1} wbin_{p'} 2^{-r}/r, as dyadic
    let tw = np + nr;
    let mut w1: Vec<BoundedFloat> = Vec::with_capacity(tw + 1);
    let mut w2: Vec<BoundedFloat> = vec![BoundedFloat::zero(wpb); tw + 1];
    let mut w1_abs: Vec<BoundedFloat> = Vec::with_capacity(tw + 1);
    for t in 0..=tw {
        let v = if t <= np {
            BoundedFloat::from_rational(&wbin[t], wpb)
        } else {
            BoundedFloat::zero(wpb)
        };
        w1_abs.push(v.abs());
        w1.push(v);
    }
    for (pp, wb) in wbin.iter().enumerate() {
        for r in 1..=nr {
            let t = pp + r;
            if t > tw {
                break;
            }
            let coeff = wb / rat_i(r as i64);
            w2[t] = w2[t].add(&BoundedFloat::from_rational(&coeff, wpb).mul_pow2(-(r as i64)));
        }
    }
    let w2_abs: Vec<BoundedFloat> = w2.iter().map(|x| x.abs()).collect();

    // base M/L arrays over s = ν + t, t = 0..tmax
    let tmax = tw + 2 * nb_max + 2;
    let half_nu = pow_rational_bf(&rat(1, 2), nu, wpb)?;
    let mut marr: Vec<BoundedFloat> = Vec::with_capacity(tmax + 1);
    let mut larr: Vec<BoundedFloat> = Vec::with_capacity(tmax + 1);
    for t in 0..=tmax {
        let s = nu + rat_i(t as i64);
        let inv_s = Rational::one() / &s;
        let base = half_nu.mul_pow2(-(t as i64));
        marr.push(base.mul_rational(&inv_s));
        let lterm = ln2.mul_rational(&inv_s).add(&BoundedFloat::from_rational(
            &(&inv_s * &inv_s),
            wpb,
        ));
        larr.push(base.mul(&lterm));
    }

    let mut total = BoundedFloat::zero(wpb);
    let mut total_abs_bound = Mag::ZERO; // Σ_n |term_n|, for truncation tails
    let mut e_n = Rational::one();
    let mut r_n = Rational::zero();
    let target = -(wp as i64) - 10;
    let mut n = 0usize;
    let mut last_abs = Mag::ZERO;
    loop {
        let coeff_n = d0
            .add(&BoundedFloat::from_rational(&r_n, wpb))
            .sub(&ln2);
        // term_n = e_n [ Σ_t W1(t)(coeff_n M[t] + L[t]) + Σ_t W2(t) M[t] ]
        let mut s_m = BoundedFloat::zero(wpb);
        let mut s_l = BoundedFloat::zero(wpb);
        let mut s_w2 = BoundedFloat::zero(wpb);
        let mut s_abs = BoundedFloat::zero(wpb);
        for t in 0..=tw {
            s_m = s_m.add(&w1[t].mul(&marr[t]));
            s_l = s_l.add(&w1[t].mul(&larr[t]));
            s_w2 = s_w2.add(&w2[t].mul(&marr[t]));
            s_abs = s_abs.add(&w1_abs[t].mul(&marr[t].add(&larr[t])));
            s_abs = s_abs.add(&w2_abs[t].mul(&marr[t]));
        }
        let term = s_m.mul(&coeff_n).add(&s_l).add(&s_w2).mul_rational(&e_n);
        total = total.add(&term);
        let coeff_abs = coeff_n.abs().add(&BoundedFloat::from_i64(1, 32));
        let term_abs = s_abs
            .mul(&coeff_abs)
            .mul_rational(&e_n)
            .mag_upper();
        total_abs_bound = total_abs_bound.add(term_abs);
        last_abs = term_abs;

        // stopping: geometric certificate with ratio <= (3/4) f(n) (1 + 2/(n+1))
        let nr1 = rat_i(n as i64 + 1);
        let f_n = (a + rat_i(n as i64)) * (b + rat_i(n as i64)) / (&nr1 * &nr1);
        let growth = Rational::one() + rat_i(2) / &nr1;
        let rho = rat(3, 4) * f_n * growth;
        if rho < Rational::one() {
            let tail_factor = &rho / (Rational::one() - &rho);
            let tail = last_abs.mul(BoundedFloat::from_rational(&tail_factor, 32).mag_upper());
            if tail.le_pow2(target) || n + 1 >= nb_max {
                total.widen_error(tail);
                total_abs_bound = total_abs_bound.add(tail);
                break;
            }
        } else if n + 1 >= nb_max {
            return Err(Error::Convergence("log-case series did not certify".into()));
        }

        // advance arrays: M_{n+1}(s) = 2 M_n(s+1) - M_n(s+2)
        let len = marr.len() - 2;
        for t in 0..len {
            marr[t] = marr[t + 1].mul_pow2(1).sub(&marr[t + 2]);
            larr[t] = larr[t + 1].mul_pow2(1).sub(&larr[t + 2]);
        }
        marr.truncate(len);
        larr.truncate(len);
        let jr = rat_i(n as i64);
        e_n = e_n * (a + &jr) * (b + &jr) / (&nr1 * &nr1);
        r_n = r_n + rat_i(2) / &nr1 - Rational::one() / (a + &jr) - Rational::one() / (b + &jr);
        n += 1;
    }

    // truncation tails of the p- and r-expansions, bounded against the
    // accumulated absolute mass (generous constants; cost is a few bits)
    let wstar_mag = BoundedFloat::from_rational(&wstar, 32).mag_upper();
    let tail_p = total_abs_bound
        .mul(wstar_mag)
        .mul(Mag::pow2(-(np as i64) + 4));
    let tail_r = total_abs_bound.mul(Mag::pow2(-2 * (nr as i64) + 4));
    total.widen_error(tail_p.add(tail_r));

    let mut out = total.mul(&kappa);
    out.widen_error(Mag::ZERO);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dup_pair_small_cases() {
        // S(c) brackets its partial sums from above (positive terms)
        for c in [rat_i(2), rat(9, 2), rat(13, 4), rat(7, 1)] {
            let s = sum_dup_pair(&c, 128).unwrap();
            let mut partial = Rational::zero();
            let mut t = Rational::one();
            for j in 0..2000 {
                partial += &t;
                let jj = rat_i(2 * j);
                t = t * (&c + &jj) * (&c + &jj + Rational::one())
                    / ((&c + rat(3, 2) + &jj) * (&c + rat(5, 2) + &jj));
            }
            assert!(s.hi_rational() > partial, "S({c}) must exceed partial sums");
            // crude tail: t_j ~ big, allow generous slack
            assert!(s.lo_rational() < partial + t * rat_i(4000));
        }
    }

    #[test]
    fn dup_pair_rejects_nonpositive() {
        assert!(sum_dup_pair(&rat_i(0), 64).is_err());
    }

    #[test]
    fn weighted_integral_brackets_partial_sums() {
        // J = Σ_j u_j B(μ+2j, ν): positive terms, so J > any partial sum
        let mu = rat(3, 2);
        let nu = rat(3, 2);
        let a = rat(1, 1);
        let b = rat(3, 2);
        let j = weighted_2f1_integral(&mu, &nu, &a, &b, 96).unwrap();
        let c = &a + &b;
        let mut partial = BoundedFloat::zero(160);
        let mut u = Rational::one();
        for jj in 0..800 {
            let bj = beta_rational(&(&mu + rat_i(2 * jj)), &nu, 160).unwrap();
            partial = partial.add(&bj.mul_rational(&u));
            let jr = rat_i(jj);
            u = u * (&a + &jr) * (&b + &jr) / ((&c + &jr) * (&jr + Rational::one()));
        }
        assert!(j.hi_rational() > partial.lo_rational());
        // terms ~ j^{-5/2} here (excess 1 + nu): tail after 800 is small
        assert!(j.lo_rational() < partial.hi_rational() + rat(1, 1000));
        assert!(j.abs_error().le_pow2(-90));
    }
}
