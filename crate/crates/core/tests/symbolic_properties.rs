mod common;

use std::sync::OnceLock;

use common::map;
use padic_potts::potts::PottsBetheMap;
use padic_potts::sampling::{random_in_ball, seeded_rng};
use padic_potts::symbolic::{
    a_m_template, build_markov_partition, check_pi_conjugacy, df_distance, encode_itinerary,
    incidence_from_dynamics, periodic_point_from_word, IncidenceMatrix, Itinerary, MarkovPartition,
};
use padic_potts::{Norm, OrdBound, PadicNumber};
use proptest::prelude::*;
use rand::Rng;

fn regimes() -> Vec<(PottsBetheMap, Option<usize>)> {
    vec![
        (map(7, 1 + 343, 7), None),
        (map(7, 1 + 49, 7), Some(1)),
        (map(7, 1 + 343, 49), Some(2)),
        (map(7, 1 + 7i64.pow(4), 343), Some(3)),
    ]
}

fn partitions() -> &'static [(PottsBetheMap, MarkovPartition)] {
    static CACHE: OnceLock<Vec<(PottsBetheMap, MarkovPartition)>> = OnceLock::new();
    CACHE.get_or_init(|| {
        regimes()
            .into_iter()
            .map(|(m, _)| {
                let part = build_markov_partition(&m).unwrap();
                (m, part)
            })
            .collect()
    })
}

fn setup(m: &PottsBetheMap) -> (MarkovPartition, IncidenceMatrix) {
    let part = build_markov_partition(m).unwrap();
    let a = incidence_from_dynamics(&part, m).unwrap();
    (part, a)
}

#[test]
fn partitions_are_repellers_with_template_incidence() {
    for (m, mm) in regimes() {
        let (part, a) = setup(&m);
        assert_eq!(part.m, mm);
        assert!(part.is_weak_repeller());
        assert!(part.tau.iter().all(|&t| t > 0));
        assert!(part.is_pairwise_disjoint().unwrap());
        let expected = match mm {
            None => IncidenceMatrix::full(3),
            Some(k) => a_m_template(k).unwrap(),
        };
        assert_eq!(a, expected);
        for n in 1..=8u32 {
            let tr = padic_potts::symbolic::count_periodic_points(&a, n);
            assert_eq!(tr, num_bigint::BigUint::from(3u32).pow(n));
        }
    }
}

#[test]
fn isometry_on_periodic_points() {
    for (idx, (m, _)) in regimes().into_iter().enumerate() {
        let (part, a) = setup(&m);
        let mut pts: Vec<(Vec<usize>, PadicNumber)> = Vec::new();
        for n in 1..=3 {
            for w in a.admissible_words(n) {
                let mut cyc = w.clone();
                cyc.push(w[0]);
                if !a.is_admissible(&cyc) {
                    continue;
                }
                let x = periodic_point_from_word(&m, &part, &a, &w).unwrap();
                pts.push((w, x));
            }
        }
        let mut rng = seeded_rng(40 + idx as u64);
        let mut checked = 0;
        while checked < 100 {
            let (wu, u) = &pts[rng.gen_range(0..pts.len())];
            let (wv, v) = &pts[rng.gen_range(0..pts.len())];
            let OrdBound::Exact(d) = u.diff_ord(v) else { continue };
            let df = df_distance(&part, &Itinerary::periodic(wu.clone()), &Itinerary::periodic(wv.clone())).unwrap();
            assert_eq!(df, Norm::PPower(-d), "{wu:?} vs {wv:?}");
            checked += 1;
        }
    }
}

#[test]
fn pi_block_code_is_a_conjugacy() {
    for m in 1..=3 {
        for len in m + 1..=8 {
            assert!(check_pi_conjugacy(m, len).unwrap().holds(), "m = {m}, L = {len}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn coding_commutes_with_shift(idx in 0usize..4, seed in any::<u64>(), ball in 0usize..5) {
        let (m, part) = &partitions()[idx];
        let b = &part.balls[ball % part.len()];
        let x = random_in_ball(&mut seeded_rng(seed), b, 40);
        let n = 5;
        let (Ok(cx), Ok(cfx)) = (
            encode_itinerary(m, part, &x, n),
            encode_itinerary(m, part, &m.eval(&x).unwrap(), n - 1),
        ) else { return Ok(()) };
        prop_assert_eq!(&cx.symbols[1..], &cfx.symbols[..]);
    }
}

#[test]
fn ball_gaps_do_not_depend_on_the_center() {
    let mut rng = seeded_rng(17);
    for (_, part) in partitions() {
        for i in 0..part.len() {
            for j in 0..part.len() {
                if i == j {
                    continue;
                }
                for _ in 0..20 {
                    let x = random_in_ball(&mut rng, &part.balls[i], 64);
                    let y = random_in_ball(&mut rng, &part.balls[j], 64);
                    assert_eq!(x.diff_ord(&y), OrdBound::Exact(part.kappa[i][j]), "{} {}", part.labels[i], part.labels[j]);
                }
            }
        }
    }
}
