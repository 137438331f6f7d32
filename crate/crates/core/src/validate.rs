//! Axiom checks for submeasures and pattern submeasures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::mask::{SubsetMask, MAX_ENUMERABLE_GROUND};
use crate::pattern::PatternSubmeasure;
use crate::rational::ExtendedRational;
use crate::submeasure::FiniteSubmeasure;

/// Subadditivity is checked over all `3^n` disjoint pairs up to this ground size.
pub const EXHAUSTIVE_PAIR_GROUND: usize = 13;

/// Number of random pairs drawn in sampled mode.
pub const SAMPLED_PAIRS: usize = 200_000;

/// Violations recorded before the report is truncated.
pub const MAX_RECORDED: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exhaustive,
    Sampled { pairs: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum Violation {
    /// The value at `∅` is not zero.
    EmptySet { value: String },
    /// `A ⊆ B` but `φ(A) > φ(B)`.
    Monotonicity {
        subset: Vec<usize>,
        superset: Vec<usize>,
        subset_value: String,
        superset_value: String,
    },
    /// `φ(A ∪ B) > φ(A) + φ(B)`.
    Subadditivity {
        a: Vec<usize>,
        b: Vec<usize>,
        union_value: String,
        sum: String,
    },
    /// A nonempty pattern is valued below the floor.
    FloorDominance {
        pattern: Vec<usize>,
        value: String,
        floor: String,
    },
    /// The submeasure cannot be evaluated everywhere (e.g. uncovered points).
    Evaluation { message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub mode: Mode,
    pub violations: Vec<Violation>,
    /// More violations exist than were recorded.
    pub truncated: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: Violation) {
        if self.violations.len() < MAX_RECORDED {
            self.violations.push(v);
        } else {
            self.truncated = true;
        }
    }
}

/// Checks `φ(∅) = 0`, monotonicity and subadditivity of `φ`.
///
/// Monotonicity is always checked exhaustively on one-point extensions,
/// which suffices. Subadditivity is reduced to disjoint pairs (valid once
/// monotonicity holds) and is exhaustive up to [`EXHAUSTIVE_PAIR_GROUND`],
/// sampled above. Grounds above 20 cannot be tabulated and are sampled
/// through direct evaluation.
pub fn validate_submeasure(phi: &FiniteSubmeasure) -> ValidationReport {
    let n = phi.ground_size();
    if n > MAX_ENUMERABLE_GROUND {
        return validate_by_sampling(phi);
    }
    let table = match phi.materialize() {
        Ok(t) => t,
        Err(e) => {
            return ValidationReport {
                mode: Mode::Exhaustive,
                violations: vec![Violation::Evaluation { message: e.to_string() }],
                truncated: false,
            }
        }
    };
    validate_table(n, &table)
}

/// [`validate_submeasure`] on a raw table indexed by mask.
pub fn validate_table(n: usize, table: &[ExtendedRational]) -> ValidationReport {
    check_table(n, table, n <= EXHAUSTIVE_PAIR_GROUND)
}

fn check_table(n: usize, table: &[ExtendedRational], exhaustive: bool) -> ValidationReport {
    let mut report = ValidationReport {
        mode: if exhaustive {
            Mode::Exhaustive
        } else {
            Mode::Sampled { pairs: SAMPLED_PAIRS }
        },
        violations: Vec::new(),
        truncated: false,
    };
    let set = |ix: usize| SubsetMask::from_index(n, ix as u64).to_vec();
    if !table[0].is_zero() {
        report.push(Violation::EmptySet {
            value: table[0].to_string(),
        });
    }
    for ix in 0..table.len() {
        for i in 0..n {
            let sup = ix | 1 << i;
            if sup != ix && table[ix] > table[sup] {
                report.push(Violation::Monotonicity {
                    subset: set(ix),
                    superset: set(sup),
                    subset_value: table[ix].to_string(),
                    superset_value: table[sup].to_string(),
                });
            }
        }
    }
    let check = |a: usize, b: usize, report: &mut ValidationReport| {
        let sum = &table[a] + &table[b];
        if table[a | b] > sum {
            report.push(Violation::Subadditivity {
                a: set(a),
                b: set(b),
                union_value: table[a | b].to_string(),
                sum: sum.to_string(),
            });
        }
    };
    let full = table.len() - 1;
    if exhaustive {
        for a in 1..table.len() {
            // b ranges over nonempty subsets of the complement with b > a,
            // so each unordered disjoint pair is visited once.
            let rest = full & !a;
            let mut b = rest;
            while b > a {
                check(a, b, &mut report);
                b = (b - 1) & rest;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..SAMPLED_PAIRS {
            let a = rng.gen_range(1..=full);
            let b = rng.gen_range(1..=full) & !a;
            if b != 0 {
                check(a, b, &mut report);
            }
        }
    }
    report
}

fn validate_by_sampling(phi: &FiniteSubmeasure) -> ValidationReport {
    const PAIRS: usize = 2000;
    let n = phi.ground_size();
    let mut report = ValidationReport {
        mode: Mode::Sampled { pairs: PAIRS },
        violations: Vec::new(),
        truncated: false,
    };
    let eval = |m: &SubsetMask| phi.eval(m);
    match eval(&SubsetMask::empty(n)) {
        Ok(v) if !v.is_zero() => report.push(Violation::EmptySet { value: v.to_string() }),
        Err(e) => report.push(Violation::Evaluation { message: e.to_string() }),
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let random_set = |rng: &mut ChaCha8Rng| {
        let p = rng.gen_range(0.05..0.6);
        let mut m = SubsetMask::empty(n);
        for i in 0..n {
            if rng.gen_bool(p) {
                m.insert(i);
            }
        }
        m
    };
    for _ in 0..PAIRS {
        let a = random_set(&mut rng);
        let b = random_set(&mut rng).difference(&a);
        let u = a.union(&b);
        let (va, vb, vu) = match (eval(&a), eval(&b), eval(&u)) {
            (Ok(x), Ok(y), Ok(z)) => (x, y, z),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                report.push(Violation::Evaluation { message: e.to_string() });
                continue;
            }
        };
        if va > vu || vb > vu {
            let (s, sv) = if va > vu { (a, &va) } else { (b, &vb) };
            report.push(Violation::Monotonicity {
                subset: s.to_vec(),
                superset: u.to_vec(),
                subset_value: sv.to_string(),
                superset_value: vu.to_string(),
            });
        }
        let sum = &va + &vb;
        if vu > sum {
            report.push(Violation::Subadditivity {
                a: a.to_vec(),
                b: b.to_vec(),
                union_value: vu.to_string(),
                sum: sum.to_string(),
            });
        }
    }
    report
}

/// Checks `θ(∅) = 0`, monotonicity and subadditivity of `θ` over patterns,
/// and `θ(S) ≥ floor` for nonempty `S`. Always exhaustive (at most 16 atoms).
pub fn validate_pattern(p: &PatternSubmeasure) -> ValidationReport {
    let k = p.atoms();
    let theta = p.theta_table();
    let mut report = check_table(k, theta, true);
    for (s, v) in theta.iter().enumerate().skip(1) {
        if v < p.floor() {
            report.push(Violation::FloorDominance {
                pattern: SubsetMask::from_index(k, s as u64).to_vec(),
                value: v.to_string(),
                floor: p.floor().to_string(),
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::SubsetMask;
    use crate::submeasure::FiniteSubmeasure;

    fn q(n: i64) -> ExtendedRational {
        ExtendedRational::from_int(n)
    }

    #[test]
    fn tau_is_valid() {
        let tau = FiniteSubmeasure::by_cardinality(3, &[q(0), q(1), q(1), q(2)]).unwrap();
        let r = validate_submeasure(&tau);
        assert!(r.is_valid(), "{r:?}");
        assert_eq!(r.mode, Mode::Exhaustive);
    }

    #[test]
    fn nonzero_empty_set() {
        let t = FiniteSubmeasure::table(1, vec![q(1), q(1)]).unwrap();
        let r = validate_submeasure(&t);
        assert!(matches!(r.violations[0], Violation::EmptySet { .. }));
    }

    #[test]
    fn subadditivity_witness() {
        let t = FiniteSubmeasure::table(2, vec![q(0), q(1), q(1), q(3)]).unwrap();
        let r = validate_submeasure(&t);
        assert_eq!(
            r.violations,
            vec![Violation::Subadditivity {
                a: vec![0],
                b: vec![1],
                union_value: "3".into(),
                sum: "2".into(),
            }]
        );
    }

    #[test]
    fn monotonicity_witness() {
        let t = FiniteSubmeasure::table(2, vec![q(0), q(2), q(1), q(1)]).unwrap();
        let r = validate_submeasure(&t);
        assert!(r.violations.iter().any(|v| matches!(
            v,
            Violation::Monotonicity { subset, superset, .. } if subset == &vec![0] && superset == &vec![0, 1]
        )));
    }

    #[test]
    fn uncovered_covering_reports_evaluation_failure() {
        let c = FiniteSubmeasure::covering(2, vec![SubsetMask::from_indices(2, [0]).unwrap()]).unwrap();
        assert!(matches!(
            validate_submeasure(&c).violations[0],
            Violation::Evaluation { .. }
        ));
    }

    #[test]
    fn large_covering_is_sampled() {
        let gens = (0..30)
            .map(|i| SubsetMask::from_indices(30, [i, (i + 1) % 30]).unwrap())
            .collect();
        let c = FiniteSubmeasure::covering(30, gens).unwrap();
        let r = validate_submeasure(&c);
        assert!(matches!(r.mode, Mode::Sampled { .. }));
        assert!(r.is_valid());
    }

    #[test]
    fn pattern_checks() {
        let eta = PatternSubmeasure::by_pattern_size(4, &[q(0), q(3), q(3), q(3), q(6)], q(1)).unwrap();
        assert!(validate_pattern(&eta).is_valid());

        let bad_empty = PatternSubmeasure::new(1, vec![q(1), q(1)], q(0)).unwrap();
        assert!(matches!(
            validate_pattern(&bad_empty).violations[0],
            Violation::EmptySet { .. }
        ));

        let bad_sub = PatternSubmeasure::new(2, vec![q(0), q(1), q(1), q(3)], q(0)).unwrap();
        let r = validate_pattern(&bad_sub);
        assert_eq!(r.violations.len(), 1);
        assert!(matches!(r.violations[0], Violation::Subadditivity { .. }));

        let bad_floor = PatternSubmeasure::new(1, vec![q(0), q(1)], q(2)).unwrap();
        assert!(matches!(
            validate_pattern(&bad_floor).violations[0],
            Violation::FloorDominance { .. }
        ));
    }
}
