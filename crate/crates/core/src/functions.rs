//! The p-adic exponential and logarithm, and membership in
//! `E_p = {x : |x - 1|_p < p^{-1/(p-1)}}`.

use crate::error::{Error, Result};
use crate::padic::{OrdBound, PadicNumber, DEFAULT_PRECISION};

/// Smallest valuation inside the disc `|x| < p^{-1/(p-1)}`.
pub fn exp_domain_min_ord(p: u32) -> i64 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// `v_p(k!)` by Legendre's formula.
pub fn factorial_ord(p: u32, k: u64) -> u64 {
    let mut total = 0;
    let mut pk = p as u64;
    while pk <= k {
        total += k / pk;
        pk = match pk.checked_mul(p as u64) {
            Some(v) => v,
            None => break,
        };
    }
    total
}

fn floor_log(p: u32, n: u64) -> i64 {
    let mut e = 0;
    let mut acc = p as u64;
    while acc <= n {
        e += 1;
        acc = acc.saturating_mul(p as u64);
    }
    e
}

pub fn exp_p(x: &PadicNumber) -> Result<PadicNumber> {
    let p = x.prime();
    let min_ord = exp_domain_min_ord(p);
    let (v, abs) = match x.ord_bound() {
        OrdBound::Infinite => return Ok(PadicNumber::one(p, DEFAULT_PRECISION)),
        OrdBound::AtLeast(k) if k >= min_ord => return Ok(PadicNumber::one(p, k)),
        OrdBound::AtLeast(k) => {
            return Err(Error::PrecisionExhausted(format!(
                "exp argument known only mod p^{k}"
            )))
        }
        OrdBound::Exact(v) => (v, x.abs_precision().unwrap()),
    };
    if v < min_ord {
        return Err(Error::OutOfDomain(format!(
            "exp_{p} needs valuation >= {min_ord}, got {v}"
        )));
    }
    // ord(x^k/k!) >= k v - (k-1)/(p-1), increasing in k; sum the terms below
    // the first k where this reaches the target absolute precision.
    let pm1 = (p - 1) as i64;
    let mut stop = 1i64;
    while stop * v * pm1 - (stop - 1) < abs * pm1 {
        stop += 1;
    }
    let mut sum = PadicNumber::one(p, abs);
    let mut term = PadicNumber::one(p, abs);
    for k in 1..stop {
        let kk = PadicNumber::from_i64(p, k, abs + 2);
        term = term.mul(x).try_div(&kk)?;
        sum = sum.add_approx(&term);
    }
    Ok(sum.truncate_abs(abs))
}

pub fn ln_p(x: &PadicNumber) -> Result<PadicNumber> {
    let p = x.prime();
    let one = PadicNumber::one(p, x.rel_precision().unwrap_or(DEFAULT_PRECISION).max(1));
    let y = x.sub_approx(&one);
    let (v, abs) = match y.ord_bound() {
        OrdBound::Infinite => return Ok(PadicNumber::zero(p)),
        OrdBound::AtLeast(k) if k >= 1 => return Ok(PadicNumber::vague(p, k)),
        OrdBound::AtLeast(k) => {
            return Err(Error::PrecisionExhausted(format!(
                "log argument known only mod p^{k}"
            )))
        }
        OrdBound::Exact(v) => (v, y.abs_precision().unwrap()),
    };
    if v < 1 {
        return Err(Error::OutOfDomain(format!(
            "ln_{p} needs |x - 1| < 1, got valuation {v}"
        )));
    }
    // ord(y^n/n) >= n v - floor(log_p n), nondecreasing in n.
    let mut stop = 1i64;
    while stop * v - floor_log(p, stop as u64) < abs {
        stop += 1;
    }
    let mut sum = PadicNumber::vague(p, abs);
    let mut power = PadicNumber::one(p, abs);
    for n in 1..stop {
        power = power.mul(&y);
        let nn = PadicNumber::from_i64(p, if n % 2 == 1 { n } else { -n }, abs + 2);
        sum = sum.add_approx(&power.try_div(&nn)?);
    }
    Ok(sum.truncate_abs(abs))
}

/// Whether `|x - 1|_p < p^{-1/(p-1)}`.
pub fn ep_membership(x: &PadicNumber) -> Result<bool> {
    let p = x.prime();
    let one = PadicNumber::one(p, x.rel_precision().unwrap_or(DEFAULT_PRECISION).max(1));
    x.diff_ord(&one).at_least(exp_domain_min_ord(p))
}
