//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pathlab_core::gallery::{
    make_eta, make_interp, make_mazur_system, make_phi_cover, make_psi, make_table2_row, make_tau, make_tau3_inf,
    normalized_mazur_piece, table2_rows, PsiVariant,
};
use pathlab_core::hull::{covering_hull_fast, hull_all, hull_structured, pattern_hull};
use pathlab_core::pathology::{degree_p, degree_ratio, finite_report, pathology_report, pattern_degrees};
use pathlab_core::pattern::PatternPoint;
use pathlab_core::prefix::{matrix_from_witness, pushforward_weights, summable_from_measures};
use pathlab_core::rational::{int, ratio};
use pathlab_core::validate::validate_table;
use pathlab_core::vdw::{longest_ap, vdw_scaled_measure, w_check, VTable};
use pathlab_core::{hull, verify_witness, ExtendedRational, FiniteSubmeasure, Rational, SubsetMask};

use common::{masks, random_cover, random_table};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64) -> ExtendedRational {
    ExtendedRational::from_int(n)
}

fn within(limit: Duration, start: Instant) -> Check {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn c1_tau() -> Check {
    let start = Instant::now();
    let tau = make_tau();
    let h = hull(&tau, &tau.full_set()).map_err(|e| e.to_string())?;
    ensure(h.value == ExtendedRational::frac(3, 2), || {
        format!("hull = {}", h.value)
    })?;
    ensure(verify_witness(&tau, &h, &tau.full_set()), || "witness rejected".into())?;
    let p = degree_p(&tau).map_err(|e| e.to_string())?.value;
    ensure(p == ExtendedRational::frac(4, 3), || format!("P = {p}"))?;
    within(Duration::from_secs(1), start)
}

fn c2_patterns() -> Check {
    let start = Instant::now();
    let by_size = |p: &pathlab_core::PatternSubmeasure, size: usize| {
        let pattern = SubsetMask::from_indices(p.atoms(), 0..size).unwrap();
        let x = if size == 0 {
            PatternPoint::empty(p.atoms())
        } else {
            PatternPoint::infinite(pattern)
        };
        pattern_hull(p, &x).unwrap().value
    };
    let tau = make_tau3_inf();
    let got: Vec<_> = (0..=3).map(|s| by_size(&tau, s)).collect();
    let want = vec![q(0), q(1), q(1), ExtendedRational::frac(3, 2)];
    ensure(got == want, || format!("τ₃^∞ hulls {got:?}"))?;
    // every pattern of each size, not only the initial segments
    for pattern in masks(3) {
        let w = pattern_hull(&tau, &PatternPoint::new(pattern, !pattern.is_empty()).unwrap()).unwrap();
        ensure(w.value == want[pattern.len()], || format!("τ₃^∞ hull at {pattern:?}"))?;
    }
    let eta = make_eta();
    let got: Vec<_> = (0..=4).map(|s| by_size(&eta, s)).collect();
    let want = vec![q(0), q(3), q(3), q(3), q(4)];
    ensure(got == want, || format!("η hulls {got:?}"))?;
    let fin = pattern_hull(&eta, &PatternPoint::finite(4)).unwrap().value;
    ensure(fin == q(1), || format!("η hull at a finite set {fin}"))?;
    let t = pattern_degrees(&tau, false).unwrap();
    ensure(
        t.degrees() == [&q(1), &ExtendedRational::frac(4, 3), &ExtendedRational::Infinity],
        || format!("τ₃^∞ degrees {:?}", t.degrees()),
    )?;
    let e = pattern_degrees(&eta, false).unwrap();
    ensure(e.degrees() == [&q(1), &ExtendedRational::frac(3, 2), &q(6)], || {
        format!("η degrees {:?}", e.degrees())
    })?;
    within(Duration::from_secs(1), start)
}

fn c3_table2() -> Check {
    let start = Instant::now();
    for (id, expected) in table2_rows() {
        let row = make_table2_row(id).map_err(|e| e.to_string())?;
        let r = pathology_report(&row, false).map_err(|e| e.to_string())?;
        ensure(r.degrees() == [&expected[0], &expected[1], &expected[2]], || {
            format!("row {id}: {:?}", r.degrees())
        })?;
    }
    within(Duration::from_secs(5), start)
}

/// Smallest number of generators whose union contains everything, by
/// trying all subfamilies.
fn brute_cover(gens: &[SubsetMask]) -> usize {
    let full = SubsetMask::full(gens[0].ground_size());
    (0u64..1 << gens.len())
        .filter(|pick| {
            let u = (0..gens.len())
                .filter(|i| pick >> i & 1 == 1)
                .fold(SubsetMask::empty(full.ground_size()), |u, i| u.union(&gens[i]));
            u == full
        })
        .map(|pick| pick.count_ones() as usize)
        .min()
        .unwrap()
}

fn c4_mazur() -> Check {
    let start = Instant::now();
    for n in 2..=3usize {
        let sys = make_mazur_system(n).map_err(|e| e.to_string())?;
        let full = SubsetMask::full(sys.ground_size);
        let phi = make_phi_cover(&sys).unwrap();
        ensure(brute_cover(&sys.generators) == n + 1, || {
            format!("cover number of K_{n}")
        })?;
        ensure(phi.eval(&full).unwrap() == ExtendedRational::from(n + 1), || {
            format!("Φ(K_{n})")
        })?;
        let w = covering_hull_fast(&sys.generators, &full).unwrap();
        ensure(w.value == q(2), || format!("hull(K_{n}) = {}", w.value))?;
        // dual y_i = 1/n on each star: each point lies in n stars, so it is
        // covered with weight 1, and Σ y_i Φ(A_i) = 2n/n = 2
        let y = ratio(1, n as i64);
        for p in 0..sys.ground_size {
            let cover: Rational = sys.generators.iter().filter(|g| g.contains(p)).map(|_| y.clone()).sum();
            ensure(cover >= Rational::one(), || format!("point {p} not dually covered"))?;
        }
        let bound: Rational = sys.generators.iter().map(|_| y.clone()).sum();
        ensure(bound == int(2), || "dual objective".into())?;
        // primal: the uniform measure of total mass 2 sits below Φ
        let table = phi.materialize().unwrap();
        let per_point = ratio(2, sys.ground_size as i64);
        for a in masks(sys.ground_size) {
            let mass = ExtendedRational::Finite(&per_point * int(a.len() as i64));
            ensure(mass <= table[a.index() as usize], || {
                format!("uniform mass exceeds Φ at {a:?}")
            })?;
        }
        ensure(verify_witness(&phi, &w, &full), || "covering witness rejected".into())?;
        let r = degree_ratio(&phi.eval(&full).unwrap(), &w.value);
        ensure(r == ExtendedRational::frac(n as i64 + 1, 2), || {
            format!("ratio at K_{n} = {r}")
        })?;
        if n == 2 {
            let d = degree_p(&phi).unwrap();
            ensure(d.value == ExtendedRational::frac(3, 2), || {
                format!("P(Φ_2) = {}", d.value)
            })?;
            ensure(d.argmax == pathlab_core::pathology::Location::Set(full), || {
                "argmax is not K_2".into()
            })?;
        }
    }
    within(Duration::from_secs(30), start)
}

fn c5_interp() -> Check {
    for (a, b) in [(8, 5), (7, 4), (2, 1)] {
        let alpha = ratio(a, b);
        let p = degree_p(&make_interp(&alpha).unwrap()).unwrap().value;
        let want = ExtendedRational::Finite(ratio(2, 3) * &alpha);
        ensure(p == want, || format!("α = {alpha}: P = {p}, want {want}"))?;
    }
    Ok(())
}

fn c6_direct_sums() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..200 {
        let nl = rng.gen_range(1..=5);
        let nr = rng.gen_range(1..=10 - nl);
        let l = random_table(&mut rng, nl);
        let r = random_table(&mut rng, nr);
        let dl = degree_p(&l).unwrap().value;
        let dr = degree_p(&r).unwrap().value;
        let want = dl.clone().max(dr.clone());
        for (name, sum) in [
            ("⊕_m", FiniteSubmeasure::oplus_max(l.clone(), r.clone()).unwrap()),
            ("⊕_s", FiniteSubmeasure::oplus_sum(l.clone(), r.clone()).unwrap()),
        ] {
            let table = sum.to_table().unwrap();
            let got = degree_p(&table).unwrap().value;
            ensure(got == want, || {
                format!("trial {trial} {name}: {got} vs max({dl}, {dr})")
            })?;
        }
    }
    Ok(())
}

fn c7_hull_invariants() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..500 {
        let n = rng.gen_range(1..=8);
        let phi = random_table(&mut rng, n);
        let values = phi.materialize().unwrap();
        let hulls = hull_all(&phi, false).unwrap();
        for (ix, (v, h)) in values.iter().zip(&hulls).enumerate() {
            ensure(h <= v, || format!("trial {trial}: hull above φ at mask {ix}"))?;
        }
        ensure(validate_table(n, &hulls).is_valid(), || {
            format!("trial {trial}: hull table invalid")
        })?;
        let hull_phi = FiniteSubmeasure::table(n, hulls.clone()).unwrap();
        ensure(hull_all(&hull_phi, false).unwrap() == hulls, || {
            format!("trial {trial}: hull not idempotent")
        })?;
        for a in masks(n) {
            let w = hull(&phi, &a).unwrap();
            ensure(w.value == hulls[a.index() as usize], || {
                format!("trial {trial}: hull mismatch at {a:?}")
            })?;
            ensure(verify_witness(&phi, &w, &a), || {
                format!("trial {trial}: witness rejected at {a:?}")
            })?;
        }
        let r = finite_report(&phi, false).unwrap();
        let [f, p, s] = r.degrees();
        ensure(f == p && p == s, || format!("trial {trial}: degrees differ"))?;
        ensure(*f >= ExtendedRational::one(), || {
            format!("trial {trial}: degree below 1")
        })?;
    }
    Ok(())
}

fn c8_covering_fast() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..100 {
        let n = rng.gen_range(1..=10);
        let gens = random_cover(&mut rng, n);
        let phi = FiniteSubmeasure::covering(n, gens.clone()).unwrap();
        let exhaustive = hull_all(&phi, true).unwrap();
        for a in masks(n) {
            let fast = covering_hull_fast(&gens, &a).unwrap().value;
            ensure(fast == exhaustive[a.index() as usize], || {
                format!(
                    "trial {trial}: fast {fast} vs exhaustive {} at {a:?}",
                    exhaustive[a.index() as usize]
                )
            })?;
        }
    }
    Ok(())
}

fn c9_matrix() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let i_max = 50;
    for trial in 0..20 {
        let target: Vec<u64> = {
            let mut v: Vec<u64> = (0..rng.gen_range(1..=10)).map(|_| rng.gen_range(0..100)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let f: Vec<u64> = (0..i_max).map(|_| target[rng.gen_range(0..target.len())]).collect();
        let b = matrix_from_witness(&f, i_max).unwrap();
        for i in 1..=i_max {
            let row = b.row(i);
            let sum: Rational = row.iter().sum();
            ensure(sum == Rational::one(), || {
                format!("trial {trial}: row {i} sums to {sum}")
            })?;
            let on_a: Rational = target.iter().map(|&k| row[k as usize].clone()).sum();
            ensure(on_a == Rational::one(), || {
                format!("trial {trial}: row {i} has {on_a} on A")
            })?;
            ensure(
                row.iter().all(|x| *x >= Rational::zero() && *x <= Rational::one()),
                || "entry outside [0,1]".into(),
            )?;
        }
    }
    Ok(())
}

fn c10_summable() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for trial in 0..50 {
        let len = rng.gen_range(1..=20);
        let measures: Vec<Vec<Rational>> = (0..rng.gen_range(1..=5))
            .map(|_| {
                (0..rng.gen_range(0..=len))
                    .map(|_| ratio(rng.gen_range(0..5), rng.gen_range(1..5)))
                    .collect()
            })
            .collect();
        let g = summable_from_measures(&measures, len).unwrap();
        for _ in 0..10 {
            let a: Vec<usize> = (0..len).filter(|_| rng.gen_bool(0.5)).collect();
            let lhs: Rational = a.iter().map(|&i| g[i].clone()).sum();
            let mut rhs = Rational::zero();
            let mut scale = Rational::one();
            for mu in &measures {
                scale /= int(2);
                let mass: Rational = a.iter().filter_map(|&i| mu.get(i)).sum();
                rhs += mass * &scale;
            }
            ensure(lhs == rhs, || format!("trial {trial}: {lhs} vs {rhs}"))?;
        }
        let f: Vec<Rational> = (0..len)
            .map(|_| ratio(rng.gen_range(0..9), rng.gen_range(1..9)))
            .collect();
        let map: Vec<u64> = (0..len).map(|_| rng.gen_range(0..6)).collect();
        let h = pushforward_weights(&f, &map).unwrap();
        ensure(h.iter().sum::<Rational>() == f.iter().sum::<Rational>(), || {
            format!("trial {trial}: mass changed")
        })?;
    }
    Ok(())
}

/// Every 2-coloring of `[0, len)` has a monochromatic `n`-AP, by direct search.
fn brute_w(n: usize, len: usize) -> bool {
    (0u32..1 << len).all(|c| {
        (0..len).any(|start| {
            (1..len).any(|step| {
                start + (n - 1) * step < len && {
                    let color = c >> start & 1;
                    (0..n).all(|j| c >> (start + j * step) & 1 == color)
                }
            })
        })
    })
}

fn c11_vdw() -> Check {
    let start = Instant::now();
    let w9 = w_check(3, 9).map_err(|e| e.to_string())?;
    ensure(w9.holds && brute_w(3, 9), || "w(2,3) = 9 not confirmed".into())?;
    let w8 = w_check(3, 8).map_err(|e| e.to_string())?;
    ensure(!w8.holds && !brute_w(3, 8), || {
        "[0,8) should have a 3-AP-free coloring".into()
    })?;
    let coloring = w8.counterexample.ok_or("no counterexample")?;
    let c = coloring
        .iter()
        .enumerate()
        .fold(0u32, |acc, (i, &b)| acc | (b as u32) << i);
    ensure(
        !(0u32..1).any(|_| {
            (0..8).any(|s| (1..8).any(|d| s + 2 * d < 8 && (0..3).all(|j| c >> (s + j * d) & 1 == c >> s & 1)))
        }),
        || "counterexample has a monochromatic 3-AP".into(),
    )?;

    let v = VTable::demo();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 40 {
        let elems: Vec<u64> = (0..14u64).filter(|_| rng.gen_bool(0.6)).collect();
        if elems.is_empty() || elems.len() > 16 {
            continue;
        }
        let a = pathlab_core::prefix::IntegerSet::explicit(elems).unwrap();
        let (len, _) = longest_ap(&a).unwrap();
        let n = v.values().iter().take_while(|&&x| x as usize <= len).count();
        let m = vdw_scaled_measure(&a, n, &v).map_err(|e| e.to_string())?;
        ensure(m.feasibility.exhaustive && m.feasibility.feasible, || {
            format!("μ ≰ φ on {a:?}")
        })?;
        ensure(m.feasibility.max_nu_ratio <= int(2), || {
            format!("ν/φ ratio {} on {a:?}", m.feasibility.max_nu_ratio)
        })?;
        checked += 1;
    }
    within(Duration::from_secs(10), start)
}

fn c12_psi() -> Check {
    let psi = make_psi(PsiVariant::Sum, 2, Some(&[1, 2])).map_err(|e| e.to_string())?;
    let full = psi.full_set();
    let structured = hull_structured(&psi, &full).unwrap();
    let want = ExtendedRational::frac(5, 3);
    ensure(structured.value == want, || {
        format!("structured hull {}", structured.value)
    })?;
    ensure(verify_witness(&psi, &structured, &full), || "ψ witness rejected".into())?;
    let exhaustive = hull(&psi, &full).unwrap().value;
    ensure(exhaustive == want, || format!("exhaustive hull {exhaustive}"))?;
    let mut previous = ExtendedRational::zero();
    for n in 1..=3 {
        let piece = normalized_mazur_piece(n).unwrap();
        let k = piece.full_set();
        let r = degree_ratio(&piece.eval(&k).unwrap(), &hull_structured(&piece, &k).unwrap().value);
        ensure(r == ExtendedRational::frac(n as i64 + 1, 2), || {
            format!("block ratio {r} for n = {n}")
        })?;
        ensure(r > previous, || "block ratios not increasing".into())?;
        previous = r;
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 12] = [
        ("τ exactness: hull 3/2, P = 4/3", c1_tau),
        ("pattern exactness: τ₃^∞ and η hulls and degrees", c2_patterns),
        ("configuration table rows", c3_table2),
        ("Mazur pipeline n = 2, 3", c4_mazur),
        ("interpolation law P = (2/3)α", c5_interp),
        ("⊕ laws on 200 random pairs", c6_direct_sums),
        ("hull invariants on 500 random tables", c7_hull_invariants),
        ("covering fast path on 100 random systems", c8_covering_fast),
        ("matrix construction rows", c9_matrix),
        ("summable constructions", c10_summable),
        ("van der Waerden checks", c11_vdw),
        ("ψ truncation", c12_psi),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
