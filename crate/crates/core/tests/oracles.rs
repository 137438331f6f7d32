mod common;

use common::{masks, random_table};
use pathlab_core::gallery::{make_mazur_system, make_phi_cover, make_sigma_measure, make_tau};
use pathlab_core::hull::{hull, hull_all};
use pathlab_core::json::{parse_submeasure, submeasure_json};
use pathlab_core::pathology::finite_report;
use pathlab_core::prefix::{exp_density_prefix, IntegerSet, Predicate};
use pathlab_core::rational::{ratio, ExtendedRational};
use pathlab_core::vdw::{longest_ap, w_check};
use pathlab_core::{FiniteSubmeasure, SubsetMask};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> ExtendedRational {
    ExtendedRational::from_int(n)
}

#[test]
fn two_point_hull_has_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let phi = random_table(&mut rng, 2);
        let t = phi.materialize().unwrap();
        let expected = (&t[1] + &t[2]).min(t[3].clone());
        assert_eq!(hull(&phi, &SubsetMask::full(2)).unwrap().value, expected);
    }
}

#[test]
fn measures_are_their_own_hull() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 1..=6 {
        let weights: Vec<ExtendedRational> = (0..n)
            .map(|_| ExtendedRational::Finite(ratio(rand::Rng::gen_range(&mut rng, 0..9), 4)))
            .collect();
        let mu = FiniteSubmeasure::weighted(weights).unwrap();
        assert_eq!(hull_all(&mu, false).unwrap(), mu.materialize().unwrap());
        let r = finite_report(&mu, false).unwrap();
        assert_eq!(r.degrees(), [&q(1), &q(1), &q(1)]);
    }
    let sigma = make_sigma_measure();
    assert_eq!(finite_report(&sigma, false).unwrap().p.value, q(1));
}

#[test]
fn tau_hull_values() {
    let tau = make_tau();
    let all = hull_all(&tau, false).unwrap();
    let expected: Vec<ExtendedRational> = masks(3)
        .map(|a| match a.len() {
            0 => q(0),
            1 => q(1),
            2 => q(1),
            _ => ExtendedRational::frac(3, 2),
        })
        .collect();
    assert_eq!(all, expected);
}

#[test]
fn mazur_cover_values() {
    for n in 1..=3 {
        let phi = make_phi_cover(&make_mazur_system(n).unwrap()).unwrap();
        let full = phi.full_set();
        assert_eq!(phi.eval(&full).unwrap(), q(n as i64 + 1), "n = {n}");
        assert_eq!(hull(&phi, &full).unwrap().value, q(2), "n = {n}");
    }
}

#[test]
fn small_van_der_waerden_numbers() {
    assert!(!w_check(3, 8).unwrap().holds);
    assert!(w_check(3, 9).unwrap().holds);
    assert!(!w_check(2, 2).unwrap().holds);
    assert!(w_check(2, 3).unwrap().holds);
    let cex = w_check(3, 8).unwrap().counterexample.unwrap();
    let ones: Vec<u64> = (0..8).filter(|&i| cex[i as usize] == 1).collect();
    let zeros: Vec<u64> = (0..8).filter(|&i| cex[i as usize] == 0).collect();
    for side in [ones, zeros] {
        let (len, _) = longest_ap(&IntegerSet::explicit(side).unwrap()).unwrap();
        assert!(len < 3);
    }
}

#[test]
fn longest_progressions() {
    let squares = IntegerSet::predicate(Predicate::Squares, 200).unwrap();
    assert_eq!(longest_ap(&squares).unwrap().0, 3);
    let evens = IntegerSet::predicate(Predicate::Evens, 20).unwrap();
    let (len, rec) = longest_ap(&evens).unwrap();
    assert_eq!(len, 10);
    assert_eq!(
        rec.unwrap().terms().collect::<Vec<_>>(),
        (0..20).step_by(2).collect::<Vec<u64>>()
    );
}

#[test]
fn exponential_density_brackets_the_log_ratio() {
    let squares = IntegerSet::predicate(Predicate::Squares, 10_000).unwrap();
    let d = exp_density_prefix(&squares, 10_000).unwrap();
    assert_eq!(d.count, 100);
    assert_eq!(d.lower, Some(ratio(1, 2)));
    assert_eq!(d.upper, Some(ratio(1, 2)));
    let d = exp_density_prefix(&squares, 1000).unwrap();
    let (lo, hi) = (d.lower.unwrap(), d.upper.unwrap());
    let truth = (d.count as f64).ln() / 1000f64.ln();
    assert!(lo < hi);
    assert!(num_traits::ToPrimitive::to_f64(&lo).unwrap() <= truth);
    assert!(truth <= num_traits::ToPrimitive::to_f64(&hi).unwrap());
}

#[test]
fn submeasure_json_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=6 {
        let phi = random_table(&mut rng, n);
        let text = submeasure_json(&phi).to_string();
        let back = parse_submeasure(&text).unwrap();
        assert_eq!(back.materialize().unwrap(), phi.materialize().unwrap());
    }
    let tau = make_tau();
    let back = parse_submeasure(&submeasure_json(&tau).to_string()).unwrap();
    assert_eq!(back.materialize().unwrap(), tau.materialize().unwrap());
}
