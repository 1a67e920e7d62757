mod common;

use std::collections::HashMap;

use common::{map, N};
use padic_potts::potts::{PottsBetheMap, Region};
use padic_potts::sampling::{random_in_ball, random_with_ord, seeded_rng};
use padic_potts::{Ball, OrdBound, PadicNumber};
use proptest::prelude::*;
use rand::Rng;

const PER_REGION: usize = 1000;

fn expected_image(r: Region) -> Option<&'static [Region]> {
    match r {
        Region::A0 | Region::A1 | Region::A2 | Region::A0Inf => Some(&[Region::A0]),
        Region::AInf | Region::A3 | Region::A23Inf => Some(&[Region::A1]),
        Region::A1Inf => Some(&[Region::A0Inf]),
        _ => None,
    }
}

/// Points `x_inf + p^d u` and `1 + p^d u` over a spread of d, which reach
/// every region of the one-mod-three picture.
fn sample_near_landmarks<R: Rng>(rng: &mut R, m: &PottsBetheMap) -> PadicNumber {
    let p = m.prime();
    let (a, b) = (m.ord_q(), m.ord_theta_minus_one());
    if rng.gen_bool(0.7) {
        let d = rng.gen_range(a..=a + b + 3);
        m.singular_point().add_approx(&random_with_ord(rng, p, d, N as u32))
    } else {
        let d = rng.gen_range(a - 3..=a + 4);
        PadicNumber::one(p, N).add_approx(&random_with_ord(rng, p, d, N as u32))
    }
}

fn check_region_flows(m: &PottsBetheMap, seed: u64) {
    let mut rng = seeded_rng(seed);
    let mut counts: HashMap<Region, usize> = HashMap::new();
    let (a, b) = (m.ord_q(), m.ord_theta_minus_one());
    let mut targets = vec![Region::A0, Region::A1, Region::A0Inf, Region::AInf, Region::A23Inf, Region::A1Inf];
    // A2 needs a < d < b and A3 needs b < d < a + b
    if b > a + 1 {
        targets.push(Region::A2);
    }
    if a >= 2 {
        targets.push(Region::A3);
    }
    let mut attempts = 0;
    while targets.iter().any(|r| counts.get(r).copied().unwrap_or(0) < PER_REGION) {
        attempts += 1;
        assert!(attempts < 200 * PER_REGION, "sampling stalled: {counts:?}");
        let x = sample_near_landmarks(&mut rng, m);
        let r = m.classify_region(&x).unwrap();
        let Some(allowed) = expected_image(r) else { continue };
        assert!(targets.contains(&r), "sampled {r}, which should be empty here");
        let c = counts.entry(r).or_insert(0);
        if *c >= PER_REGION {
            continue;
        }
        *c += 1;
        let img = m.classify_region(&m.eval(&x).unwrap()).unwrap();
        assert!(allowed.contains(&img), "{r} -> {img} at {}", x.render());
    }
}

#[test]
fn region_flows_full_shift() {
    check_region_flows(&map(7, 1 + 343, 7), 11);
}

#[test]
fn region_flows_chain() {
    check_region_flows(&map(7, 1 + 49, 7), 12);
    check_region_flows(&map(13, 1 + 13i64.pow(3), 169), 13);
}

/// Points of C1 away from the partition ball around x1 never land in C.
#[test]
fn c1_outside_partition_ball_leaves_c() {
    let m = map(7, 1 + 343, 7);
    let (a, b) = (m.ord_q(), m.ord_theta_minus_one());
    let c1 = Ball::new(m.fixed_point(1).unwrap().clone(), -(b + 1));
    let d1 = Ball::new(m.fixed_point(1).unwrap().clone(), -(a + b + 1));
    let mut rng = seeded_rng(14);
    let mut done = 0;
    while done < PER_REGION {
        let x = random_in_ball(&mut rng, &c1, 40);
        if d1.contains(&x).unwrap() {
            continue;
        }
        let img = m.classify_region(&m.eval(&x).unwrap()).unwrap();
        assert!(!matches!(img, Region::C1 | Region::C2 | Region::C3), "{} -> {img}", x.render());
        done += 1;
    }
}

/// Every sampled point near the repelling fixed point leaves its scaling
/// ball after an explicit number of steps and then converges to 1.
#[test]
fn small_prime_escape_witness() {
    for (p, theta, q) in [(3u32, 1 + 81, 9), (2, 5, 2)] {
        let m = map(p, theta, q);
        let (region, ball, _) = m.scaling_regions()[0].clone();
        assert_eq!(region, Region::A1Inf2);
        let x1 = m.fixed_point(1).unwrap().clone();
        let mut rng = seeded_rng(15 + p as u64);
        let mut done = 0;
        while done < PER_REGION {
            let depth = rng.gen_range(0..20);
            let x = x1.add_approx(&random_with_ord(&mut rng, p, ball.min_ord() + depth, N as u32));
            assert_eq!(m.classify_region(&x).unwrap(), Region::A1Inf2);
            let mut y = x.clone();
            let mut n0 = None;
            for n in 1..200 {
                y = m.eval(&y).unwrap();
                if m.classify_region(&y).unwrap() != Region::A1Inf2 {
                    n0 = Some(n);
                    break;
                }
            }
            let n0 = n0.unwrap_or_else(|| panic!("no escape from A1_INF_2 for {}", x.render()));
            assert!(n0 <= depth as usize + 2, "escape took {n0} steps at depth {depth}");
            let steps = m.steps_to_attractor(&x, 20, 400).unwrap();
            assert!(steps.is_some(), "{} does not converge", x.render());
            done += 1;
        }
    }
}

fn instances() -> Vec<PottsBetheMap> {
    vec![
        map(7, 1 + 343, 7),
        map(7, 1 + 49, 7),
        map(7, 1 + 7i64.pow(3), 49),
        map(13, 1 + 13i64.pow(3), 13),
        map(3, 1 + 81, 9),
        map(2, 5, 2),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scaling_is_exact_on_scaling_balls(idx in 0usize..6, which in 0usize..3, sx in any::<u64>(), sy in any::<u64>()) {
        let maps = instances();
        let m = &maps[idx];
        let regions = m.scaling_regions();
        let (_, ball, tau) = &regions[which % regions.len()];
        let x = random_in_ball(&mut seeded_rng(sx), ball, 40);
        let y = random_in_ball(&mut seeded_rng(sy), ball, 40);
        let OrdBound::Exact(d) = x.diff_ord(&y) else { return Ok(()) };
        let sub = Ball::new(x.clone(), -d);
        prop_assert_eq!(m.local_scaling_exponent(&sub).unwrap(), *tau);
        let fd = m.eval(&x).unwrap().diff_ord(&m.eval(&y).unwrap());
        prop_assert_eq!(fd, OrdBound::Exact(d - tau));
    }
}
