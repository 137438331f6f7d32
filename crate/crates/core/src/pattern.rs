//! Finite quotients of pattern-determined submeasures on ω.
//!
//! A set `A ⊆ ω` is summarized by the atoms `A_i` it meets in an infinite
//! set (its *pattern*) and by whether it is nonempty at all. The submeasure
//! takes `theta[pattern]` when the pattern is nonempty and `floor` on a
//! nonempty set with empty pattern (a set meeting every atom finitely).

use crate::error::{size_limit, Error, Result};
use crate::mask::SubsetMask;
use crate::rational::ExtendedRational;

pub const MAX_ATOMS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSubmeasure {
    atoms: usize,
    theta: Vec<ExtendedRational>,
    floor: ExtendedRational,
}

/// The argument of a [`PatternSubmeasure`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternPoint {
    pattern: SubsetMask,
    nonempty: bool,
}

impl PatternPoint {
    pub fn new(pattern: SubsetMask, nonempty: bool) -> Result<Self> {
        if !pattern.is_empty() && !nonempty {
            return Err(Error::Malformed(
                "a set meeting some atom infinitely is nonempty".into(),
            ));
        }
        Ok(Self { pattern, nonempty })
    }

    /// The empty set.
    pub fn empty(atoms: usize) -> Self {
        Self {
            pattern: SubsetMask::empty(atoms),
            nonempty: false,
        }
    }

    /// A nonempty set meeting every atom finitely, e.g. a finite set.
    pub fn finite(atoms: usize) -> Self {
        Self {
            pattern: SubsetMask::empty(atoms),
            nonempty: true,
        }
    }

    /// A set meeting exactly the atoms in `pattern` infinitely.
    pub fn infinite(pattern: SubsetMask) -> Self {
        Self {
            pattern,
            nonempty: true,
        }
    }

    pub fn pattern(&self) -> SubsetMask {
        self.pattern
    }

    pub fn is_nonempty(&self) -> bool {
        self.nonempty
    }

    /// `self ⊆ other` in the sense that any set of the first kind can be
    /// enlarged to one of the second.
    pub fn le(&self, other: &Self) -> bool {
        self.pattern.is_subset(&other.pattern) && (!self.nonempty || other.nonempty)
    }
}

/// Which ⊕ to lift to pattern quotients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectSum {
    Max,
    Sum,
}

impl PatternSubmeasure {
    pub fn new(atoms: usize, theta: Vec<ExtendedRational>, floor: ExtendedRational) -> Result<Self> {
        if atoms == 0 {
            return Err(Error::Malformed("a pattern submeasure needs at least one atom".into()));
        }
        size_limit("atom count", atoms, MAX_ATOMS)?;
        if theta.len() != 1 << atoms {
            return Err(Error::Malformed(format!(
                "theta on {atoms} atoms needs {} values, got {}",
                1usize << atoms,
                theta.len()
            )));
        }
        if let Some(i) = theta.iter().position(|v| v.is_negative()) {
            return Err(Error::Malformed(format!("theta[{i}] is negative")));
        }
        if floor.is_negative() {
            return Err(Error::Malformed("floor is negative".into()));
        }
        Ok(Self { atoms, theta, floor })
    }

    /// Pattern submeasure whose theta depends only on the pattern size.
    pub fn by_pattern_size(atoms: usize, levels: &[ExtendedRational], floor: ExtendedRational) -> Result<Self> {
        if levels.len() != atoms + 1 {
            return Err(Error::Malformed(format!(
                "need {} pattern-size levels, got {}",
                atoms + 1,
                levels.len()
            )));
        }
        size_limit("atom count", atoms, MAX_ATOMS)?;
        let theta = (0..1u32 << atoms)
            .map(|s| levels[s.count_ones() as usize].clone())
            .collect();
        Self::new(atoms, theta, floor)
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn theta(&self, pattern: &SubsetMask) -> &ExtendedRational {
        &self.theta[pattern.index() as usize]
    }

    pub fn theta_table(&self) -> &[ExtendedRational] {
        &self.theta
    }

    pub fn floor(&self) -> &ExtendedRational {
        &self.floor
    }

    /// Every point of the quotient: `∅`, the finite point, and each nonempty pattern.
    pub fn points(&self) -> impl Iterator<Item = PatternPoint> + '_ {
        let k = self.atoms;
        std::iter::once(PatternPoint::empty(k))
            .chain(std::iter::once(PatternPoint::finite(k)))
            .chain((1..1u64 << k).map(move |s| PatternPoint::infinite(SubsetMask::from_index(k, s))))
    }

    /// `θ(S)` on nonempty patterns, `floor` on the empty pattern. This is the
    /// value of a set with pattern `S` that is nonempty.
    fn value_nonempty(&self, pattern: &SubsetMask) -> &ExtendedRational {
        if pattern.is_empty() {
            &self.floor
        } else {
            self.theta(pattern)
        }
    }
}

/// Value of `P` at `x`.
pub fn pattern_eval(p: &PatternSubmeasure, x: &PatternPoint) -> Result<ExtendedRational> {
    if x.pattern.ground_size() != p.atoms {
        return Err(Error::GroundMismatch {
            expected: p.atoms,
            actual: x.pattern.ground_size(),
        });
    }
    Ok(if !x.pattern.is_empty() {
        p.theta(&x.pattern).clone()
    } else if x.nonempty {
        p.floor.clone()
    } else {
        ExtendedRational::zero()
    })
}

/// Lifts `⊕_m` / `⊕_s` to pattern quotients.
///
/// Atoms of `left` come first. A pattern `S` of the sum stands for sets that
/// are nonempty on both sides, so an empty side contributes its floor:
/// `θ(S) = op(θ'_L(S_L), θ'_R(S_R))` with `θ'(∅) = floor`, and the new floor
/// is `op(floor_L, floor_R)`.
pub fn direct_sum_pattern(
    left: &PatternSubmeasure,
    right: &PatternSubmeasure,
    kind: DirectSum,
) -> Result<PatternSubmeasure> {
    let atoms = left.atoms + right.atoms;
    size_limit("atom count", atoms, MAX_ATOMS)?;
    let op = |a: &ExtendedRational, b: &ExtendedRational| match kind {
        DirectSum::Max => a.clone().max(b.clone()),
        DirectSum::Sum => a + b,
    };
    let mut theta = Vec::with_capacity(1 << atoms);
    theta.push(ExtendedRational::zero());
    for s in 1..1u64 << atoms {
        let s = SubsetMask::from_index(atoms, s);
        let l = s.restrict(0, left.atoms);
        let r = s.restrict(left.atoms, right.atoms);
        theta.push(op(left.value_nonempty(&l), right.value_nonempty(&r)));
    }
    PatternSubmeasure::new(atoms, theta, op(&left.floor, &right.floor))
}
