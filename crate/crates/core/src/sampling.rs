//! Seeded sampling of p-adic numbers with a fixed number of known digits.

use num_bigint::{BigInt, BigUint, RandBigInt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::padic::{Ball, PadicNumber};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn p_pow(p: u32, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// Haar-random element of `Z_p`, known modulo `p^digits`.
pub fn random_integer<R: Rng>(rng: &mut R, p: u32, digits: u32) -> PadicNumber {
    let n = rng.gen_biguint_below(&p_pow(p, digits));
    PadicNumber::from_bigint(p, &BigInt::from(n), digits as i64).truncate_abs(digits as i64)
}

/// Random unit with `digits` known digits.
pub fn random_unit<R: Rng>(rng: &mut R, p: u32, digits: u32) -> PadicNumber {
    let lead = rng.gen_range(1..p);
    let rest = rng.gen_biguint_below(&p_pow(p, digits.saturating_sub(1)));
    let n = BigUint::from(lead) + rest * p;
    PadicNumber::from_bigint(p, &BigInt::from(n), digits as i64)
}

/// `p^ord` times a random unit.
pub fn random_with_ord<R: Rng>(rng: &mut R, p: u32, ord: i64, digits: u32) -> PadicNumber {
    random_unit(rng, p, digits).shift(ord)
}

/// Nonzero value whose valuation is uniform on `ords`.
pub fn random_padic<R: Rng>(
    rng: &mut R,
    p: u32,
    ords: std::ops::RangeInclusive<i64>,
    digits: u32,
) -> PadicNumber {
    let ord = rng.gen_range(ords);
    random_with_ord(rng, p, ord, digits)
}

/// Haar-random point of the ball; the offset from the center carries
/// `digits` digits past the ball's radius.
pub fn random_in_ball<R: Rng>(rng: &mut R, ball: &Ball, digits: u32) -> PadicNumber {
    let p = ball.center.prime();
    let offset = random_integer(rng, p, digits).shift(ball.min_ord());
    ball.center.add_approx(&offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Valuation;

    #[test]
    fn sampled_values_have_requested_shape() {
        let mut rng = seeded_rng(1);
        for _ in 0..50 {
            let u = random_with_ord(&mut rng, 7, -3, 20);
            assert_eq!(u.valuation().unwrap(), Valuation::Finite(-3));
            assert_eq!(u.rel_precision(), Some(20));
        }
        let ball = Ball::new(PadicNumber::from_i64(5, 3, 30), -4);
        for _ in 0..50 {
            let x = random_in_ball(&mut rng, &ball, 10);
            assert!(ball.contains(&x).unwrap());
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<_> = (0..5).map({
            let mut r = seeded_rng(9);
            move |_| random_unit(&mut r, 3, 12)
        }).collect();
        let b: Vec<_> = (0..5).map({
            let mut r = seeded_rng(9);
            move |_| random_unit(&mut r, 3, 12)
        }).collect();
        assert_eq!(a, b);
    }
}
