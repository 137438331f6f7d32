//! Nonpathological hulls as linear programs.
//!
//! `φ̂(A)` is the largest `μ(A)` over measures `μ ≤ φ`. On a finite ground
//! set a measure is a vector of point masses, so `φ̂(A)` is the optimum of
//!
//! ```text
//! maximize Σ_{i∈A} m_i   subject to   Σ_{i∈B} m_i ≤ φ(B)  for nonempty B ⊆ A,  m ≥ 0.
//! ```
//!
//! Constraints for sets leaving `A` are implied by monotonicity
//! (`m(B) = m(B ∩ A) ≤ φ(B ∩ A) ≤ φ(B)`), and masses outside `A` are zero.
//! Each solve returns a [`HullWitness`]: the optimal measure plus dual
//! multipliers `y_B` with `Σ_{B∋i} y_B ≥ 1` on `A`, which bound every
//! feasible `μ(A)` by `Σ y_B φ(B)`.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{size_limit, Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpStatus};
use crate::mask::{SubsetMask, MAX_ENUMERABLE_GROUND};
use crate::pattern::{PatternPoint, PatternSubmeasure};
use crate::rational::{ExtendedRational, Rational};
use crate::submeasure::{measure_of, Aggregator, FiniteSubmeasure, Repr};

/// `|A|` up to which every subset constraint is put into one LP.
pub const FULL_LP_LIMIT: usize = 4;

/// Largest `|A|` accepted by [`hull`].
pub const MAX_HULL_SET: usize = MAX_ENUMERABLE_GROUND;

/// Default ground size limit of [`hull_all`].
pub const HULL_ALL_LIMIT: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullWitness {
    pub value: ExtendedRational,
    /// Point masses on the whole ground set.
    pub measure: Vec<ExtendedRational>,
    /// Dual multipliers keyed by the constraint's subset.
    pub dual: Vec<(SubsetMask, Rational)>,
    pub unbounded: bool,
}

impl HullWitness {
    fn zero(ground: usize) -> Self {
        Self {
            value: ExtendedRational::zero(),
            measure: vec![ExtendedRational::zero(); ground],
            dual: Vec::new(),
            unbounded: false,
        }
    }

    /// Witness for `φ({i}) = ∞`: an infinite mass at `i` is dominated by `φ`.
    fn unbounded_at(ground: usize, i: usize) -> Self {
        let mut measure = vec![ExtendedRational::zero(); ground];
        measure[i] = ExtendedRational::Infinity;
        Self {
            value: ExtendedRational::Infinity,
            measure,
            dual: Vec::new(),
            unbounded: true,
        }
    }
}

/// Solves the hull LP over the subsets of `set`, reading `φ` through `value_of`.
fn hull_lp<F>(ground: usize, set: &SubsetMask, value_of: F) -> Result<HullWitness>
where
    F: Fn(&SubsetMask) -> Result<ExtendedRational>,
{
    let elems = set.to_vec();
    let k = elems.len();
    if k == 0 {
        return Ok(HullWitness::zero(ground));
    }
    size_limit("hull set size", k, MAX_HULL_SET)?;
    for &i in &elems {
        if value_of(&SubsetMask::singleton(ground, i))?.is_infinite() {
            return Ok(HullWitness::unbounded_at(ground, i));
        }
    }
    let embed = |local: u64| {
        let mut m = SubsetMask::empty(ground);
        for (b, &i) in elems.iter().enumerate() {
            if local >> b & 1 == 1 {
                m.insert(i);
            }
        }
        m
    };
    // Infinite bounds (possible only for non-subadditive input) never bind.
    let bounds: Vec<ExtendedRational> = (0..1u64 << k).map(|s| value_of(&embed(s))).collect::<Result<_>>()?;
    let row = |s: u64| -> Vec<Rational> {
        (0..k)
            .map(|b| {
                if s >> b & 1 == 1 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect()
    };
    let objective = vec![Rational::one(); k];
    let (masses, value, dual_local) = if k <= FULL_LP_LIMIT {
        let mut lp = LinearProgram::new(objective);
        for s in 1..1u64 << k {
            lp.add_constraint(row(s), bounds[s as usize].clone(), s)?;
        }
        let sol = solve_lp(&lp);
        debug_assert_eq!(sol.status, LpStatus::Optimal);
        let dual = sol
            .dual
            .iter()
            .map(|(pos, y)| (lp.constraints()[*pos].tag, y.clone()))
            .collect::<Vec<_>>();
        (sol.primal, sol.value, dual)
    } else {
        row_generation(k, &bounds, &row)?
    };
    let mut measure = vec![ExtendedRational::zero(); ground];
    for (b, &i) in elems.iter().enumerate() {
        measure[i] = ExtendedRational::Finite(masses[b].clone());
    }
    Ok(HullWitness {
        value,
        measure,
        dual: dual_local.into_iter().map(|(s, y)| (embed(s), y)).collect(),
        unbounded: false,
    })
}

type LocalSolution = (Vec<Rational>, ExtendedRational, Vec<(u64, Rational)>);

/// Exact cutting-plane loop for large `A`: start from the singleton rows,
/// add the most violated subset rows until the LP optimum is feasible for
/// every subset. The final optimum is then optimal for the full LP and its
/// duals certify it.
fn row_generation(k: usize, bounds: &[ExtendedRational], row: &dyn Fn(u64) -> Vec<Rational>) -> Result<LocalSolution> {
    const BATCH: usize = 64;
    let mut active: Vec<u64> = (0..k).map(|b| 1u64 << b).collect();
    active.push((1u64 << k) - 1);
    active.extend((0..k).map(|b| ((1u64 << k) - 1) & !(1u64 << b)));
    loop {
        let mut lp = LinearProgram::new(vec![Rational::one(); k]);
        for &s in &active {
            lp.add_constraint(row(s), bounds[s as usize].clone(), s)?;
        }
        let sol = solve_lp(&lp);
        debug_assert_eq!(sol.status, LpStatus::Optimal);
        let mut sums = vec![Rational::zero(); 1 << k];
        let mut violated: Vec<(Rational, u64)> = Vec::new();
        for s in 1..1usize << k {
            let low = s.trailing_zeros() as usize;
            sums[s] = &sums[s & (s - 1)] + &sol.primal[low];
            if let ExtendedRational::Finite(b) = &bounds[s] {
                if sums[s] > *b {
                    violated.push((&sums[s] - b, s as u64));
                }
            }
        }
        if violated.is_empty() {
            let dual = sol
                .dual
                .iter()
                .map(|(pos, y)| (lp.constraints()[*pos].tag, y.clone()))
                .collect();
            return Ok((sol.primal, sol.value, dual));
        }
        violated.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        active.extend(violated.iter().take(BATCH).map(|(_, s)| *s));
    }
}

/// `φ̂(A)` with an optimal measure and a dual certificate.
pub fn hull(phi: &FiniteSubmeasure, set: &SubsetMask) -> Result<HullWitness> {
    check_ground(phi, set)?;
    hull_lp(phi.ground_size(), set, |b| phi.eval(b))
}

/// `φ̂_σ(A)`. Every measure on a finite set is countably additive, so this
/// coincides with [`hull`].
pub fn sigma_hull(phi: &FiniteSubmeasure, set: &SubsetMask) -> Result<HullWitness> {
    hull(phi, set)
}

/// `φ̂` on every subset, indexed by mask.
///
/// Limited to ground size [`HULL_ALL_LIMIT`] unless `override_limit` is set,
/// in which case the hard limit of 20 applies.
pub fn hull_all(phi: &FiniteSubmeasure, override_limit: bool) -> Result<Vec<ExtendedRational>> {
    let n = phi.ground_size();
    let limit = if override_limit {
        MAX_ENUMERABLE_GROUND
    } else {
        HULL_ALL_LIMIT
    };
    size_limit("ground size for hull_all", n, limit)?;
    let table = phi.materialize()?;
    hull_all_of_table(n, &table)
}

pub(crate) fn hull_all_of_table(n: usize, table: &[ExtendedRational]) -> Result<Vec<ExtendedRational>> {
    (0..1u64 << n)
        .into_par_iter()
        .map(|ix| {
            let set = SubsetMask::from_index(n, ix);
            hull_lp(n, &set, |b| Ok(table[b.index() as usize].clone())).map(|w| w.value)
        })
        .collect()
}

/// Hull of a covering submeasure using one constraint per generator
/// (`Σ_{i∈G∩A} m_i ≤ 1`). A measure meeting these satisfies
/// `m(B) ≤ Φ(B)` for every `B`, since `B` is covered by `Φ(B)` generators.
pub fn covering_hull_fast(generators: &[SubsetMask], set: &SubsetMask) -> Result<HullWitness> {
    let ground = set.ground_size();
    for g in generators {
        if g.ground_size() != ground {
            return Err(Error::GroundMismatch {
                expected: ground,
                actual: g.ground_size(),
            });
        }
    }
    let mut reach = SubsetMask::empty(ground);
    for g in generators {
        reach = reach.union(g);
    }
    if let Some(p) = set.difference(&reach).first() {
        return Err(Error::Uncoverable { point: p });
    }
    let elems = set.to_vec();
    if elems.is_empty() {
        return Ok(HullWitness::zero(ground));
    }
    let mut lp = LinearProgram::new(vec![Rational::one(); elems.len()]);
    for (gi, g) in generators.iter().enumerate() {
        if g.is_disjoint(set) {
            continue;
        }
        let coeffs = elems
            .iter()
            .map(|&i| {
                if g.contains(i) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        lp.add_constraint(coeffs, ExtendedRational::one(), gi as u64)?;
    }
    let sol = solve_lp(&lp);
    debug_assert_eq!(sol.status, LpStatus::Optimal);
    let mut measure = vec![ExtendedRational::zero(); ground];
    for (b, &i) in elems.iter().enumerate() {
        measure[i] = ExtendedRational::Finite(sol.primal[b].clone());
    }
    let dual = sol
        .dual
        .iter()
        .map(|(pos, y)| (generators[lp.constraints()[*pos].tag as usize], y.clone()))
        .collect();
    Ok(HullWitness {
        value: sol.value,
        measure,
        dual,
        unbounded: false,
    })
}

/// Hull that exploits representation structure where the hull is known to
/// decompose exactly, falling back to [`hull`] elsewhere:
///
/// * coverings use [`covering_hull_fast`];
/// * `Scale(c, φ)` has hull `c·φ̂`;
/// * `⊕_s` and SUM blocks have hull equal to the sum of component hulls;
/// * weighted measures are their own hull.
///
/// The returned witness is for the whole submeasure and passes
/// [`verify_witness`].
pub fn hull_structured(phi: &FiniteSubmeasure, set: &SubsetMask) -> Result<HullWitness> {
    check_ground(phi, set)?;
    let n = phi.ground_size();
    match phi.repr() {
        Repr::Covering(gens) => covering_hull_fast(gens, set),
        Repr::Scale(c, inner) => {
            let w = hull_structured(inner, set)?;
            Ok(HullWitness {
                value: w.value.mul_finite(c),
                measure: w.measure.iter().map(|m| m.mul_finite(c)).collect(),
                dual: w.dual,
                unbounded: w.unbounded,
            })
        }
        Repr::WeightedMeasure(weights) => {
            if let Some(i) = set.iter().find(|&i| weights[i].is_infinite()) {
                return Ok(HullWitness::unbounded_at(n, i));
            }
            let mut measure = vec![ExtendedRational::zero(); n];
            let mut dual = Vec::new();
            for i in set.iter() {
                measure[i] = weights[i].clone();
                dual.push((SubsetMask::singleton(n, i), Rational::one()));
            }
            Ok(HullWitness {
                value: measure_of(weights, set),
                measure,
                dual,
                unbounded: false,
            })
        }
        Repr::OplusSum(l, r) => {
            let parts = [(l.as_ref(), 0), (r.as_ref(), l.ground_size())];
            combine_parts(n, set, &parts)
        }
        Repr::Block {
            blocks,
            offsets,
            aggregator: Aggregator::Sum,
        } => {
            let parts: Vec<_> = blocks.iter().zip(offsets.iter().copied()).collect();
            combine_parts(n, set, &parts)
        }
        _ => hull(phi, set),
    }
}

fn combine_parts(n: usize, set: &SubsetMask, parts: &[(&FiniteSubmeasure, usize)]) -> Result<HullWitness> {
    let mut out = HullWitness::zero(n);
    for &(part, off) in parts {
        let local = set.restrict(off, part.ground_size());
        let w = hull_structured(part, &local)?;
        if w.unbounded {
            let i = w.measure.iter().position(|m| m.is_infinite()).unwrap_or(0);
            return Ok(HullWitness::unbounded_at(n, off + i));
        }
        out.value = &out.value + &w.value;
        for (i, m) in w.measure.into_iter().enumerate() {
            out.measure[off + i] = m;
        }
        out.dual.extend(w.dual.into_iter().map(|(b, y)| (b.embed(off, n), y)));
    }
    Ok(out)
}

fn check_ground(phi: &FiniteSubmeasure, set: &SubsetMask) -> Result<()> {
    if set.ground_size() != phi.ground_size() {
        return Err(Error::GroundMismatch {
            expected: phi.ground_size(),
            actual: set.ground_size(),
        });
    }
    Ok(())
}

/// Feasibility sampling budget when neither the ground set nor the
/// witness support is small enough to enumerate.
const SAMPLED_CHECKS: usize = 20_000;

/// Re-checks a witness against `φ` without trusting the solver.
///
/// * feasibility: `μ(B) ≤ φ(B)` for every `B` (all subsets when the ground
///   has at most 20 points; otherwise all subsets of the support of `μ`,
///   which suffices for monotone `φ`, or a deterministic sample when the
///   support is larger still);
/// * attainment: `μ(A) = value`;
/// * certificate: `y ≥ 0`, `Σ_{B∋i} y_B ≥ 1` for `i ∈ A`, and
///   `Σ y_B φ(B) ≤ value`, so no measure below `φ` does better.
pub fn verify_witness(phi: &FiniteSubmeasure, w: &HullWitness, set: &SubsetMask) -> bool {
    let n = phi.ground_size();
    if set.ground_size() != n || w.measure.len() != n || w.measure.iter().any(|m| m.is_negative()) {
        return false;
    }
    if measure_of(&w.measure, set) != w.value {
        return false;
    }
    if !measure_is_dominated(phi, &w.measure) {
        return false;
    }
    if w.unbounded {
        return w.value.is_infinite()
            && set.iter().any(|i| {
                phi.eval(&SubsetMask::singleton(n, i))
                    .map(|v| v.is_infinite())
                    .unwrap_or(false)
            });
    }
    let mut cover = vec![Rational::zero(); n];
    let mut bound = ExtendedRational::zero();
    for (b, y) in &w.dual {
        if b.ground_size() != n || y.is_negative() {
            return false;
        }
        if y.is_zero() {
            continue;
        }
        let Ok(v) = phi.eval(b) else {
            return false;
        };
        bound = &bound + &v.mul_finite(y);
        for i in b.iter() {
            cover[i] += y;
        }
    }
    set.iter().all(|i| cover[i] >= Rational::one()) && bound <= w.value
}

fn measure_is_dominated(phi: &FiniteSubmeasure, masses: &[ExtendedRational]) -> bool {
    let n = phi.ground_size();
    if n <= MAX_ENUMERABLE_GROUND {
        let Ok(table) = phi.materialize() else {
            return false;
        };
        let mut sums = vec![ExtendedRational::zero(); 1 << n];
        for s in 1..1usize << n {
            let low = s.trailing_zeros() as usize;
            sums[s] = &sums[s & (s - 1)] + &masses[low];
            if sums[s] > table[s] {
                return false;
            }
        }
        return true;
    }
    let support: Vec<usize> = (0..n).filter(|&i| !masses[i].is_zero()).collect();
    let check = |b: &SubsetMask| match phi.eval(b) {
        Ok(v) => measure_of(masses, b) <= v,
        Err(_) => false,
    };
    if support.len() <= MAX_ENUMERABLE_GROUND {
        (0..1u64 << support.len()).all(|s| {
            let mut b = SubsetMask::empty(n);
            for (k, &i) in support.iter().enumerate() {
                if s >> k & 1 == 1 {
                    b.insert(i);
                }
            }
            check(&b)
        })
    } else {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xfea5);
        (0..SAMPLED_CHECKS).all(|_| {
            let p = rng.gen_range(0.02..0.5);
            let mut b = SubsetMask::empty(n);
            for &i in &support {
                if rng.gen_bool(p) {
                    b.insert(i);
                }
            }
            check(&b)
        })
    }
}

/// A constraint of the pattern hull LP.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternConstraint {
    /// `y + Σ_{i∈T} x_i ≤ θ(T)`.
    Pattern(SubsetMask),
    /// `y ≤ floor`.
    Floor,
}

/// A finitely additive measure on a pattern quotient: mass `atom_masses[i]`
/// spread over atom `i` (charged to sets meeting it infinitely) plus a
/// `point_mass` on a single point of the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternWitness {
    pub value: ExtendedRational,
    pub atom_masses: Vec<ExtendedRational>,
    pub point_mass: ExtendedRational,
    pub dual: Vec<(PatternConstraint, Rational)>,
    pub unbounded: bool,
}

/// Lower bound on `φ̂` at a pattern point from an atoms-plus-point LP:
///
/// ```text
/// maximize y + Σ_{i∈S} x_i
/// subject to y + Σ_{i∈T} x_i ≤ θ(T) for nonempty T ⊆ S,  y ≤ floor,
/// ```
///
/// with `y` present only for nonempty points. Rows for `T ⊄ S` are implied
/// by monotonicity of `θ` and floor dominance, so the optimum describes a
/// measure below the submeasure on every set.
pub fn pattern_hull(p: &PatternSubmeasure, x: &PatternPoint) -> Result<PatternWitness> {
    let k = p.atoms();
    if x.pattern().ground_size() != k {
        return Err(Error::GroundMismatch {
            expected: k,
            actual: x.pattern().ground_size(),
        });
    }
    let mut witness = PatternWitness {
        value: ExtendedRational::zero(),
        atom_masses: vec![ExtendedRational::zero(); k],
        point_mass: ExtendedRational::zero(),
        dual: Vec::new(),
        unbounded: false,
    };
    if !x.is_nonempty() {
        return Ok(witness);
    }
    let atoms = x.pattern().to_vec();
    let s = atoms.len();
    // Variables: x_0..x_{s-1} for the atoms of the pattern, then y.
    let mut lp = LinearProgram::new(vec![Rational::one(); s + 1]);
    const FLOOR_TAG: u64 = u64::MAX;
    let mut y_only = vec![Rational::zero(); s];
    y_only.push(Rational::one());
    lp.add_constraint(y_only, p.floor().clone(), FLOOR_TAG)?;
    for local in 1..1u64 << s {
        let mut t = SubsetMask::empty(k);
        let mut coeffs = Vec::with_capacity(s + 1);
        for (b, &i) in atoms.iter().enumerate() {
            if local >> b & 1 == 1 {
                t.insert(i);
                coeffs.push(Rational::one());
            } else {
                coeffs.push(Rational::zero());
            }
        }
        coeffs.push(Rational::one());
        lp.add_constraint(coeffs, p.theta(&t).clone(), t.index())?;
    }
    let sol = solve_lp(&lp);
    for (b, &i) in atoms.iter().enumerate() {
        witness.atom_masses[i] = ExtendedRational::Finite(sol.primal[b].clone());
    }
    witness.point_mass = ExtendedRational::Finite(sol.primal[s].clone());
    witness.value = sol.value.clone();
    witness.unbounded = sol.status == LpStatus::Unbounded;
    witness.dual = sol
        .dual
        .iter()
        .map(|(pos, y)| {
            let tag = lp.constraints()[*pos].tag;
            let c = if tag == FLOOR_TAG {
                PatternConstraint::Floor
            } else {
                PatternConstraint::Pattern(SubsetMask::from_index(k, tag))
            };
            (c, y.clone())
        })
        .collect();
    Ok(witness)
}

/// `φ̂_σ` at a pattern point. A σ-additive measure below a pattern
/// submeasure is a sum of point masses, and every finite set has value at
/// most `floor`; so the σ-hull is `floor` on nonempty points.
pub fn pattern_sigma_hull(p: &PatternSubmeasure, x: &PatternPoint) -> ExtendedRational {
    debug_assert_eq!(x.pattern().ground_size(), p.atoms());
    if x.is_nonempty() {
        p.floor().clone()
    } else {
        ExtendedRational::zero()
    }
}

/// Independent check of a [`PatternWitness`]: the measure is below `θ`
/// on every pattern (point mass charged everywhere) and below the floor,
/// attains `value` on `x`, and the dual multipliers bound the objective.
pub fn verify_pattern_witness(p: &PatternSubmeasure, w: &PatternWitness, x: &PatternPoint) -> bool {
    let k = p.atoms();
    if w.atom_masses.len() != k || w.atom_masses.iter().any(|m| m.is_negative()) || w.point_mass.is_negative() {
        return false;
    }
    if w.unbounded {
        return w.value.is_infinite();
    }
    let pattern = x.pattern();
    if (0..k).any(|i| !pattern.contains(i) && !w.atom_masses[i].is_zero()) {
        return false;
    }
    if !x.is_nonempty() && !w.point_mass.is_zero() {
        return false;
    }
    if &w.point_mass + &measure_of(&w.atom_masses, &pattern) != w.value {
        return false;
    }
    if w.point_mass > *p.floor() {
        return false;
    }
    for t in 1..1u64 << k {
        let t = SubsetMask::from_index(k, t);
        if &w.point_mass + &measure_of(&w.atom_masses, &t) > *p.theta(&t) {
            return false;
        }
    }
    if !x.is_nonempty() {
        return w.value.is_zero();
    }
    let mut cover = vec![Rational::zero(); k];
    let mut point_cover = Rational::zero();
    let mut bound = ExtendedRational::zero();
    for (c, y) in &w.dual {
        if y.is_negative() {
            return false;
        }
        point_cover += y;
        match c {
            PatternConstraint::Floor => bound = &bound + &p.floor().mul_finite(y),
            PatternConstraint::Pattern(t) => {
                if t.ground_size() != k || t.is_empty() {
                    return false;
                }
                bound = &bound + &p.theta(t).mul_finite(y);
                for i in t.iter() {
                    cover[i] += y;
                }
            }
        }
    }
    pattern.iter().all(|i| cover[i] >= Rational::one()) && point_cover >= Rational::one() && bound <= w.value
}
