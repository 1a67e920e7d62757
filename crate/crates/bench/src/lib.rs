//! Fixtures shared by the benchmarks.

use num_bigint::BigInt;
use num_rational::BigRational;
use padic_potts::potts::PottsBetheMap;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The map for `(p, θ, q)` with exact rational parameters.
pub fn map(p: u32, theta: i64, q: i64, precision: i64) -> PottsBetheMap {
    PottsBetheMap::from_rationals(p, &int(theta), &int(q), precision).expect("parameters in regime")
}

/// Full-shift map at `p = 7`.
pub fn full_shift(precision: i64) -> PottsBetheMap {
    map(7, 344, 7, precision)
}

/// Chain map with `m = 2` at `p = 7`.
pub fn chain(precision: i64) -> PottsBetheMap {
    map(7, 344, 49, precision)
}
