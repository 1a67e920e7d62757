mod common;

use common::small_prime;
use padic_potts::functions::{ep_membership, exp_domain_min_ord, exp_p, ln_p};
use padic_potts::sampling::{random_with_ord, seeded_rng};
use padic_potts::{OrdBound, PadicNumber};
use proptest::prelude::*;

const DIGITS: u32 = 30;

fn disc_point(p: u32, seed: u64, extra: i64) -> PadicNumber {
    random_with_ord(&mut seeded_rng(seed), p, exp_domain_min_ord(p) + extra, DIGITS)
}

fn ep_point(p: u32, seed: u64, extra: i64) -> PadicNumber {
    PadicNumber::one(p, DIGITS as i64 + 10).add_approx(&disc_point(p, seed, extra))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ep_is_a_group_with_small_differences(p in small_prime(), sa in any::<u64>(), sb in any::<u64>(), ea in 0i64..6, eb in 0i64..6) {
        let a = ep_point(p, sa, ea);
        let b = ep_point(p, sb, eb);
        prop_assert!(ep_membership(&a).unwrap() && ep_membership(&b).unwrap());
        prop_assert!(ep_membership(&a.mul(&b)).unwrap());
        prop_assert!(ep_membership(&a.inverse().unwrap()).unwrap());
        prop_assert!(a.diff_ord(&b).lower() >= 1);
        let s = a.add_approx(&b).ord_bound();
        prop_assert_eq!(s, OrdBound::Exact(if p == 2 { 1 } else { 0 }));
    }

    #[test]
    fn exp_is_a_homomorphism(p in small_prime(), sx in any::<u64>(), sy in any::<u64>(), ex in 0i64..6, ey in 0i64..6) {
        let x = disc_point(p, sx, ex);
        let y = disc_point(p, sy, ey);
        let lhs = exp_p(&x.add_approx(&y)).unwrap();
        let rhs = exp_p(&x).unwrap().mul(&exp_p(&y).unwrap());
        let abs = lhs.abs_precision().unwrap().min(rhs.abs_precision().unwrap());
        prop_assert!(abs >= DIGITS as i64);
        prop_assert!(lhs.agrees_to(&rhs, abs).unwrap());
    }

    #[test]
    fn ln_is_a_homomorphism(p in small_prime(), sa in any::<u64>(), sb in any::<u64>(), ea in 0i64..6, eb in 0i64..6) {
        let a = ep_point(p, sa, ea);
        let b = ep_point(p, sb, eb);
        let lhs = ln_p(&a.mul(&b)).unwrap();
        let rhs = ln_p(&a).unwrap().add_approx(&ln_p(&b).unwrap());
        let abs = lhs.abs_precision().unwrap_or(i64::MAX).min(rhs.abs_precision().unwrap_or(i64::MAX));
        prop_assert!(lhs.agrees_to(&rhs, abs).unwrap());
    }

    #[test]
    fn exp_and_ln_are_inverse_isometries(p in small_prime(), sx in any::<u64>(), ex in 0i64..8) {
        let x = disc_point(p, sx, ex);
        let v = exp_domain_min_ord(p) + ex;
        let one = PadicNumber::one(p, DIGITS as i64 + 10);
        let e = exp_p(&x).unwrap();
        prop_assert_eq!(e.ord_bound(), OrdBound::Exact(0));
        prop_assert_eq!(e.diff_ord(&one), OrdBound::Exact(v));
        let abs = x.abs_precision().unwrap();
        prop_assert!(ln_p(&e).unwrap().agrees_to(&x, abs).unwrap());
        let y = one.add_approx(&x);
        let l = ln_p(&y).unwrap();
        prop_assert_eq!(l.ord_bound(), OrdBound::Exact(v));
        prop_assert!(exp_p(&l).unwrap().agrees_to(&y, abs).unwrap());
    }

    #[test]
    fn every_ep_element_is_an_exponential(p in small_prime(), sa in any::<u64>(), ea in 0i64..6) {
        let a = ep_point(p, sa, ea);
        let h = ln_p(&a).unwrap();
        prop_assert!(h.ord_bound().lower() >= exp_domain_min_ord(p));
        prop_assert!(exp_p(&h).unwrap().agrees_to(&a, a.abs_precision().unwrap()).unwrap());
    }
}

#[test]
fn outside_the_disc_is_refused() {
    assert!(exp_p(&PadicNumber::from_i64(2, 2, 20)).is_err());
    assert!(ln_p(&PadicNumber::from_i64(7, 2, 20)).is_err());
    assert!(!ep_membership(&PadicNumber::from_i64(2, 3, 20)).unwrap());
}
