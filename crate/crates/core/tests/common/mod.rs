#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use padic_potts::potts::PottsBetheMap;
use padic_potts::sampling::{random_unit, seeded_rng};
use padic_potts::PadicNumber;
use proptest::prelude::*;

pub const N: i64 = 64;

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn map(p: u32, theta: i64, q: i64) -> PottsBetheMap {
    PottsBetheMap::from_rationals(p, &int(theta), &int(q), N).unwrap()
}

/// Nonzero value `p^v u` with `v` drawn from `ords` and `digits` unit digits.
pub fn padic(p: u32, ords: std::ops::Range<i64>, digits: u32) -> impl Strategy<Value = PadicNumber> {
    (ords, any::<u64>()).prop_map(move |(v, seed)| random_unit(&mut seeded_rng(seed), p, digits).shift(v))
}

pub fn small_prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7, 11, 13])
}
