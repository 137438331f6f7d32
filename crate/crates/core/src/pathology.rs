//! Degrees of pathology `P_fin ≤ P ≤ P_σ`.
//!
//! Each degree is a supremum of ratios `φ(A) / ψ(A)` where `ψ` is the hull
//! or the σ-hull. All ratios go through [`degree_ratio`], which fixes the
//! conventions `∞/∞ = 0/0 = 1` and `a/0 = ∞/a = ∞` for positive `a`.

use crate::error::{size_limit, Result};
use crate::hull::{hull_all, pattern_hull, pattern_sigma_hull, HULL_ALL_LIMIT};
use crate::mask::SubsetMask;
use crate::pattern::{pattern_eval, PatternPoint, PatternSubmeasure};
use crate::rational::ExtendedRational;
use crate::submeasure::FiniteSubmeasure;

/// `value / hull` under the pathology conventions.
pub fn degree_ratio(value: &ExtendedRational, hull: &ExtendedRational) -> ExtendedRational {
    use ExtendedRational::{Finite, Infinity};
    match (value, hull) {
        (Infinity, Infinity) => ExtendedRational::one(),
        (Infinity, Finite(_)) => Infinity,
        (Finite(_), Infinity) => ExtendedRational::zero(),
        (Finite(a), Finite(b)) => {
            if b == &num_traits::Zero::zero() {
                if num_traits::Zero::is_zero(a) {
                    ExtendedRational::one()
                } else {
                    Infinity
                }
            } else {
                Finite(a / b)
            }
        }
    }
}

/// Where a supremum is attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Set(SubsetMask),
    Point(PatternPoint),
    /// Inside the `index`-th summand of a direct sum.
    Component(usize, Box<Location>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree {
    pub value: ExtendedRational,
    /// Lowest location attaining `value`.
    pub argmax: Location,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRow {
    pub location: Location,
    pub value: ExtendedRational,
    pub hull: ExtendedRational,
    pub sigma_hull: ExtendedRational,
    pub ratio: ExtendedRational,
    pub sigma_ratio: ExtendedRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathologyReport {
    pub p_fin: Degree,
    pub p: Degree,
    pub p_sigma: Degree,
    pub ratios: Option<Vec<RatioRow>>,
    /// For direct sums evaluated both literally and through
    /// [`combine_degrees`]: whether the two agree.
    pub consistent: Option<bool>,
}

impl PathologyReport {
    pub fn degrees(&self) -> [&ExtendedRational; 3] {
        [&self.p_fin.value, &self.p.value, &self.p_sigma.value]
    }
}

/// Running maximum that keeps the first location on ties.
struct Argmax(Option<Degree>);

impl Argmax {
    fn offer(&mut self, value: ExtendedRational, at: impl FnOnce() -> Location) {
        match &self.0 {
            Some(d) if d.value >= value => {}
            _ => self.0 = Some(Degree { value, argmax: at() }),
        }
    }

    fn finish(self) -> Degree {
        self.0.expect("at least the empty set is offered")
    }
}

fn finite_degree_with_table(phi: &FiniteSubmeasure, want_ratios: bool) -> Result<(Degree, Option<Vec<RatioRow>>)> {
    let n = phi.ground_size();
    size_limit("ground size for pathology", n, HULL_ALL_LIMIT)?;
    let values = phi.materialize()?;
    let hulls = hull_all(phi, false)?;
    let mut best = Argmax(None);
    let mut rows = want_ratios.then(Vec::new);
    for (ix, (v, h)) in values.iter().zip(&hulls).enumerate() {
        let set = SubsetMask::from_index(n, ix as u64);
        let r = degree_ratio(v, h);
        if let Some(rows) = rows.as_mut() {
            rows.push(RatioRow {
                location: Location::Set(set),
                value: v.clone(),
                hull: h.clone(),
                sigma_hull: h.clone(),
                ratio: r.clone(),
                sigma_ratio: r.clone(),
            });
        }
        best.offer(r, || Location::Set(set));
    }
    Ok((best.finish(), rows))
}

/// `P(φ) = max_A φ(A)/φ̂(A)` over all subsets, with the lowest attaining mask.
pub fn degree_p(phi: &FiniteSubmeasure) -> Result<Degree> {
    finite_degree_with_table(phi, false).map(|(d, _)| d)
}

/// `P_fin(φ)`. Every subset of a finite ground set is finite, so this is `P(φ)`.
pub fn degree_p_fin(phi: &FiniteSubmeasure) -> Result<Degree> {
    degree_p(phi)
}

/// `P_σ(φ)`. On a finite ground set `φ̂_σ = φ̂`, so this is `P(φ)`.
pub fn degree_p_sigma(phi: &FiniteSubmeasure) -> Result<Degree> {
    degree_p(phi)
}

/// All three degrees of a finite submeasure, optionally with the ratio table.
pub fn finite_report(phi: &FiniteSubmeasure, want_ratios: bool) -> Result<PathologyReport> {
    let (d, ratios) = finite_degree_with_table(phi, want_ratios)?;
    Ok(PathologyReport {
        p_fin: d.clone(),
        p: d.clone(),
        p_sigma: d,
        ratios,
        consistent: None,
    })
}

/// Degrees of a pattern submeasure.
///
/// The finite subsets of the represented space are `∅` and the points with
/// empty pattern, on which both the submeasure and its hull equal `floor`
/// (a point mass `floor` is feasible), so `P_fin` comes out as 1: either
/// `floor/floor` or `0/0`. `P` uses [`pattern_hull`] and `P_σ` uses
/// [`pattern_sigma_hull`] over every point.
pub fn pattern_degrees(p: &PatternSubmeasure, want_ratios: bool) -> Result<PathologyReport> {
    let mut fin = Argmax(None);
    let mut full = Argmax(None);
    let mut sigma = Argmax(None);
    let mut rows = want_ratios.then(Vec::new);
    for x in p.points() {
        let v = pattern_eval(p, &x)?;
        let h = pattern_hull(p, &x)?.value;
        let hs = pattern_sigma_hull(p, &x);
        let r = degree_ratio(&v, &h);
        let rs = degree_ratio(&v, &hs);
        if x.pattern().is_empty() {
            fin.offer(r.clone(), || Location::Point(x));
        }
        full.offer(r.clone(), || Location::Point(x));
        sigma.offer(rs.clone(), || Location::Point(x));
        if let Some(rows) = rows.as_mut() {
            rows.push(RatioRow {
                location: Location::Point(x),
                value: v,
                hull: h,
                sigma_hull: hs,
                ratio: r,
                sigma_ratio: rs,
            });
        }
    }
    Ok(PathologyReport {
        p_fin: fin.finish(),
        p: full.finish(),
        p_sigma: sigma.finish(),
        ratios: rows,
        consistent: None,
    })
}

/// Degrees of `φ ⊕_m ψ` (and `φ ⊕_s ψ`) from those of the summands: each
/// degree is the larger of the two. Argmax locations are tagged with the
/// summand they come from (left wins ties).
pub fn combine_degrees(left: &PathologyReport, right: &PathologyReport) -> PathologyReport {
    combine_many(&[left, right])
}

fn combine_many(parts: &[&PathologyReport]) -> PathologyReport {
    let pick = |get: fn(&PathologyReport) -> &Degree| {
        let mut best = Argmax(None);
        for (i, r) in parts.iter().enumerate() {
            let d = get(r);
            best.offer(d.value.clone(), || Location::Component(i, Box::new(d.argmax.clone())));
        }
        best.finish()
    };
    PathologyReport {
        p_fin: pick(|r| &r.p_fin),
        p: pick(|r| &r.p),
        p_sigma: pick(|r| &r.p_sigma),
        ratios: None,
        consistent: None,
    }
}

/// A ⊕_m-tree of finite and pattern submeasures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Composite {
    Finite(FiniteSubmeasure),
    Pattern(PatternSubmeasure),
    OplusMax(Vec<Composite>),
}

impl Composite {
    /// The literal finite direct sum, when every leaf is finite.
    pub fn as_finite(&self) -> Option<Result<FiniteSubmeasure>> {
        match self {
            Composite::Finite(f) => Some(Ok(f.clone())),
            Composite::Pattern(_) => None,
            Composite::OplusMax(children) => {
                let mut acc: Option<FiniteSubmeasure> = None;
                for c in children {
                    let f = match c.as_finite()? {
                        Ok(f) => f,
                        Err(e) => return Some(Err(e)),
                    };
                    acc = Some(match acc {
                        None => f,
                        Some(a) => match FiniteSubmeasure::oplus_max(a, f) {
                            Ok(s) => s,
                            Err(e) => return Some(Err(e)),
                        },
                    });
                }
                acc.map(Ok)
            }
        }
    }
}

/// Full report for a finite, pattern, or composite submeasure.
///
/// Composites are reported through [`combine_degrees`]. When all leaves are
/// finite and the literal direct sum fits the exhaustive limit, the degrees
/// are also computed directly and `consistent` records whether both agree.
pub fn pathology_report(c: &Composite, want_ratios: bool) -> Result<PathologyReport> {
    match c {
        Composite::Finite(f) => finite_report(f, want_ratios),
        Composite::Pattern(p) => pattern_degrees(p, want_ratios),
        Composite::OplusMax(children) => {
            let reports = children
                .iter()
                .map(|ch| pathology_report(ch, false))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&PathologyReport> = reports.iter().collect();
            let mut combined = combine_many(&refs);
            if let Some(direct) = c.as_finite() {
                let direct = direct?;
                if direct.ground_size() <= HULL_ALL_LIMIT {
                    let d = finite_report(&direct, want_ratios)?;
                    combined.consistent = Some(d.degrees() == combined.degrees());
                    combined.ratios = d.ratios;
                }
            }
            Ok(combined)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn q(n: i64) -> ExtendedRational {
        ExtendedRational::from_int(n)
    }

    fn tau() -> FiniteSubmeasure {
        FiniteSubmeasure::by_cardinality(3, &[q(0), q(1), q(1), q(2)]).unwrap()
    }

    #[test]
    fn ratio_conventions() {
        let inf = ExtendedRational::Infinity;
        assert_eq!(degree_ratio(&q(0), &q(0)), q(1));
        assert_eq!(degree_ratio(&inf, &inf), q(1));
        assert_eq!(degree_ratio(&q(2), &q(0)), inf);
        assert_eq!(degree_ratio(&inf, &q(3)), inf);
        assert_eq!(
            degree_ratio(&q(2), &ExtendedRational::frac(3, 2)),
            ExtendedRational::frac(4, 3)
        );
    }

    #[test]
    fn tau_degree() {
        let d = degree_p(&tau()).unwrap();
        assert_eq!(d.value, ExtendedRational::frac(4, 3));
        assert_eq!(d.argmax, Location::Set(SubsetMask::full(3)));
        assert_eq!(degree_p_fin(&tau()).unwrap(), d);
        assert_eq!(degree_p_sigma(&tau()).unwrap(), d);
    }

    #[test]
    fn measures_have_degree_one() {
        let m = FiniteSubmeasure::weighted(vec![q(1), ExtendedRational::frac(2, 3), q(0)]).unwrap();
        assert_eq!(degree_p(&m).unwrap().value, q(1));
    }

    #[test]
    fn degree_size_limit() {
        let m = FiniteSubmeasure::weighted(vec![q(1); 15]).unwrap();
        assert!(degree_p(&m).is_err());
    }

    #[test]
    fn scaled_degree_unchanged() {
        let s = FiniteSubmeasure::scale(ratio(5, 7), tau()).unwrap();
        assert_eq!(degree_p(&s).unwrap().value, ExtendedRational::frac(4, 3));
    }

    #[test]
    fn pattern_reports() {
        let tau3_inf = PatternSubmeasure::by_pattern_size(3, &[q(0), q(1), q(1), q(2)], q(0)).unwrap();
        let r = pattern_degrees(&tau3_inf, false).unwrap();
        assert_eq!(
            r.degrees(),
            [&q(1), &ExtendedRational::frac(4, 3), &ExtendedRational::Infinity]
        );

        let eta = PatternSubmeasure::by_pattern_size(4, &[q(0), q(3), q(3), q(3), q(6)], q(1)).unwrap();
        let r = pattern_degrees(&eta, true).unwrap();
        assert_eq!(r.degrees(), [&q(1), &ExtendedRational::frac(3, 2), &q(6)]);
        assert_eq!(r.ratios.unwrap().len(), 17);

        let dd = PatternSubmeasure::new(1, vec![q(0), q(2)], q(1)).unwrap();
        let r = pattern_degrees(&dd, false).unwrap();
        assert_eq!(r.degrees(), [&q(1), &q(1), &q(2)]);
    }

    #[test]
    fn combine_takes_maxima() {
        let t = finite_report(&tau(), false).unwrap();
        let eta = PatternSubmeasure::by_pattern_size(4, &[q(0), q(3), q(3), q(3), q(6)], q(1)).unwrap();
        let e = pattern_degrees(&eta, false).unwrap();
        let c = combine_degrees(&t, &e);
        assert_eq!(
            c.degrees(),
            [&ExtendedRational::frac(4, 3), &ExtendedRational::frac(3, 2), &q(6)]
        );
        assert!(matches!(c.p_fin.argmax, Location::Component(0, _)));
        assert!(matches!(c.p.argmax, Location::Component(1, _)));

        let m = finite_report(&FiniteSubmeasure::weighted(vec![q(1)]).unwrap(), false).unwrap();
        assert_eq!(combine_degrees(&t, &m).degrees(), t.degrees());
    }

    #[test]
    fn finite_composite_is_cross_checked() {
        let c = Composite::OplusMax(vec![
            Composite::Finite(tau()),
            Composite::Finite(FiniteSubmeasure::weighted(vec![q(1), q(1)]).unwrap()),
        ]);
        let r = pathology_report(&c, false).unwrap();
        assert_eq!(r.consistent, Some(true));
        assert_eq!(r.p.value, ExtendedRational::frac(4, 3));
    }
}
