//! Finite submeasures and their representations.

use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{size_limit, Error, Result};
use crate::mask::{enumerable, SubsetMask, MAX_GROUND};
use crate::rational::{ExtendedRational, Rational};

/// How a [`Repr::Block`] combines its per-block values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Aggregator {
    /// Sum of the block values.
    Sum,
    /// Largest block value.
    Sup,
    /// Largest `w_k · block_k` value.
    WeightedSup(Vec<Rational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Repr {
    /// One value per subset, indexed by mask.
    Table(Vec<ExtendedRational>),
    /// Minimum number of generators needed to cover the set.
    Covering(Vec<SubsetMask>),
    /// Additive measure with the given point masses.
    WeightedMeasure(Vec<ExtendedRational>),
    /// `max(left(A ∩ L), right(A ∩ R))` with `left` on the low coordinates.
    OplusMax(Box<FiniteSubmeasure>, Box<FiniteSubmeasure>),
    /// `left(A ∩ L) + right(A ∩ R)` with `left` on the low coordinates.
    OplusSum(Box<FiniteSubmeasure>, Box<FiniteSubmeasure>),
    Scale(Rational, Box<FiniteSubmeasure>),
    /// `min(cap, inner(A))` on nonempty sets.
    MinConst(ExtendedRational, Box<FiniteSubmeasure>),
    PointwiseMax(Box<FiniteSubmeasure>, Box<FiniteSubmeasure>),
    /// Blocks on consecutive coordinate ranges, `offsets[k]` being the first
    /// coordinate of block `k`.
    Block {
        blocks: Vec<FiniteSubmeasure>,
        offsets: Vec<usize>,
        aggregator: Aggregator,
    },
}

/// A set function on the subsets of `0..ground_size`.
///
/// Constructors check structure (sizes, signs, ground sets) only. Whether
/// the function really is monotone and subadditive is the business of
/// [`crate::validate::validate_submeasure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSubmeasure {
    ground: usize,
    repr: Repr,
}

fn check_nonnegative(values: &[ExtendedRational], what: &str) -> Result<()> {
    match values.iter().position(|v| v.is_negative()) {
        Some(i) => Err(Error::Malformed(format!("{what}[{i}] is negative"))),
        None => Ok(()),
    }
}

fn check_ground(ground: usize) -> Result<()> {
    size_limit("ground size", ground, MAX_GROUND)
}

impl FiniteSubmeasure {
    pub fn table(ground: usize, values: Vec<ExtendedRational>) -> Result<Self> {
        enumerable(ground)?;
        if values.len() != 1 << ground {
            return Err(Error::Malformed(format!(
                "table on {ground} points needs {} values, got {}",
                1u64 << ground,
                values.len()
            )));
        }
        check_nonnegative(&values, "table")?;
        Ok(Self {
            ground,
            repr: Repr::Table(values),
        })
    }

    /// Table whose value depends only on the cardinality of the set.
    pub fn by_cardinality(ground: usize, levels: &[ExtendedRational]) -> Result<Self> {
        if levels.len() != ground + 1 {
            return Err(Error::Malformed(format!(
                "need {} cardinality levels, got {}",
                ground + 1,
                levels.len()
            )));
        }
        enumerable(ground)?;
        let values = (0..1u64 << ground)
            .map(|ix| levels[ix.count_ones() as usize].clone())
            .collect();
        Self::table(ground, values)
    }

    pub fn covering(ground: usize, generators: Vec<SubsetMask>) -> Result<Self> {
        check_ground(ground)?;
        size_limit("generator count", generators.len(), 64)?;
        for g in &generators {
            if g.ground_size() != ground {
                return Err(Error::GroundMismatch {
                    expected: ground,
                    actual: g.ground_size(),
                });
            }
        }
        Ok(Self {
            ground,
            repr: Repr::Covering(generators),
        })
    }

    pub fn weighted(weights: Vec<ExtendedRational>) -> Result<Self> {
        check_ground(weights.len())?;
        check_nonnegative(&weights, "weights")?;
        Ok(Self {
            ground: weights.len(),
            repr: Repr::WeightedMeasure(weights),
        })
    }

    pub fn oplus_max(left: Self, right: Self) -> Result<Self> {
        let ground = left.ground + right.ground;
        check_ground(ground)?;
        Ok(Self {
            ground,
            repr: Repr::OplusMax(Box::new(left), Box::new(right)),
        })
    }

    pub fn oplus_sum(left: Self, right: Self) -> Result<Self> {
        let ground = left.ground + right.ground;
        check_ground(ground)?;
        Ok(Self {
            ground,
            repr: Repr::OplusSum(Box::new(left), Box::new(right)),
        })
    }

    pub fn scale(factor: Rational, inner: Self) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::Malformed(format!("scale factor {factor} is not positive")));
        }
        Ok(Self {
            ground: inner.ground,
            repr: Repr::Scale(factor, Box::new(inner)),
        })
    }

    pub fn min_const(cap: ExtendedRational, inner: Self) -> Result<Self> {
        if cap.is_negative() {
            return Err(Error::Malformed(format!("cap {cap} is negative")));
        }
        Ok(Self {
            ground: inner.ground,
            repr: Repr::MinConst(cap, Box::new(inner)),
        })
    }

    pub fn pointwise_max(left: Self, right: Self) -> Result<Self> {
        if left.ground != right.ground {
            return Err(Error::GroundMismatch {
                expected: left.ground,
                actual: right.ground,
            });
        }
        Ok(Self {
            ground: left.ground,
            repr: Repr::PointwiseMax(Box::new(left), Box::new(right)),
        })
    }

    pub fn block(blocks: Vec<Self>, aggregator: Aggregator) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Malformed("block submeasure needs at least one block".into()));
        }
        if let Aggregator::WeightedSup(w) = &aggregator {
            if w.len() != blocks.len() {
                return Err(Error::Malformed(format!(
                    "{} weights for {} blocks",
                    w.len(),
                    blocks.len()
                )));
            }
            if let Some(bad) = w.iter().find(|x| !x.is_positive()) {
                return Err(Error::Malformed(format!("block weight {bad} is not positive")));
            }
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut ground = 0;
        for b in &blocks {
            offsets.push(ground);
            ground += b.ground;
        }
        check_ground(ground)?;
        Ok(Self {
            ground,
            repr: Repr::Block {
                blocks,
                offsets,
                aggregator,
            },
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn full_set(&self) -> SubsetMask {
        SubsetMask::full(self.ground)
    }

    /// `φ(A)`.
    pub fn eval(&self, set: &SubsetMask) -> Result<ExtendedRational> {
        if set.ground_size() != self.ground {
            return Err(Error::GroundMismatch {
                expected: self.ground,
                actual: set.ground_size(),
            });
        }
        self.eval_unchecked(set)
    }

    fn eval_unchecked(&self, set: &SubsetMask) -> Result<ExtendedRational> {
        if set.is_empty() {
            return Ok(match &self.repr {
                Repr::Table(v) => v[0].clone(),
                _ => ExtendedRational::zero(),
            });
        }
        Ok(match &self.repr {
            Repr::Table(v) => v[set.index() as usize].clone(),
            Repr::Covering(gens) => ExtendedRational::from(min_cover(gens, set)?),
            Repr::WeightedMeasure(w) => set.iter().map(|i| &w[i]).sum(),
            Repr::OplusMax(l, r) => {
                let (a, b) = split(set, l.ground, r.ground);
                l.eval_unchecked(&a)?.max(r.eval_unchecked(&b)?)
            }
            Repr::OplusSum(l, r) => {
                let (a, b) = split(set, l.ground, r.ground);
                l.eval_unchecked(&a)? + r.eval_unchecked(&b)?
            }
            Repr::Scale(c, inner) => inner.eval_unchecked(set)?.mul_finite(c),
            Repr::MinConst(cap, inner) => inner.eval_unchecked(set)?.min(cap.clone()),
            Repr::PointwiseMax(l, r) => l.eval_unchecked(set)?.max(r.eval_unchecked(set)?),
            Repr::Block {
                blocks,
                offsets,
                aggregator,
            } => {
                let mut acc = ExtendedRational::zero();
                for (k, (b, &off)) in blocks.iter().zip(offsets).enumerate() {
                    let local = set.restrict(off, b.ground);
                    let v = b.eval_unchecked(&local)?;
                    acc = match aggregator {
                        Aggregator::Sum => acc + v,
                        Aggregator::Sup => acc.max(v),
                        Aggregator::WeightedSup(w) => acc.max(v.mul_finite(&w[k])),
                    };
                }
                acc
            }
        })
    }

    /// Values on every subset, indexed by mask. Requires `ground_size <= 20`.
    pub fn materialize(&self) -> Result<Vec<ExtendedRational>> {
        enumerable(self.ground)?;
        if let Repr::Table(v) = &self.repr {
            return Ok(v.clone());
        }
        if let Repr::Covering(gens) = &self.repr {
            return covering_table(self.ground, gens);
        }
        (0..1u64 << self.ground)
            .into_par_iter()
            .map(|ix| self.eval_unchecked(&SubsetMask::from_index(self.ground, ix)))
            .collect()
    }

    /// The same set function in [`Repr::Table`] form.
    pub fn to_table(&self) -> Result<Self> {
        Self::table(self.ground, self.materialize()?)
    }

    /// Point values `φ({i})`.
    pub fn singletons(&self) -> Result<Vec<ExtendedRational>> {
        (0..self.ground)
            .map(|i| self.eval_unchecked(&SubsetMask::singleton(self.ground, i)))
            .collect()
    }
}

fn split(set: &SubsetMask, left: usize, right: usize) -> (SubsetMask, SubsetMask) {
    (set.restrict(0, left), set.restrict(left, right))
}

/// Minimum number of generators whose union contains `target`.
///
/// Iterative deepening on the cover size, always branching on the lowest
/// uncovered point, so the first depth that succeeds is the optimum.
pub fn min_cover(generators: &[SubsetMask], target: &SubsetMask) -> Result<usize> {
    let mut reach = SubsetMask::empty(target.ground_size());
    for g in generators {
        reach = reach.union(g);
    }
    if let Some(p) = target.difference(&reach).first() {
        return Err(Error::Uncoverable { point: p });
    }
    fn covers(gens: &[SubsetMask], uncovered: SubsetMask, budget: usize) -> bool {
        let Some(p) = uncovered.first() else {
            return true;
        };
        if budget == 0 {
            return false;
        }
        gens.iter()
            .filter(|g| g.contains(p))
            .any(|g| covers(gens, uncovered.difference(g), budget - 1))
    }
    Ok((0..=generators.len())
        .find(|&k| covers(generators, *target, k))
        .expect("a reachable target is covered by all generators"))
}

/// Covering values on every subset via the recurrence
/// `f(A) = 1 + min { f(A \ G) : G ∋ min A }`.
fn covering_table(ground: usize, gens: &[SubsetMask]) -> Result<Vec<ExtendedRational>> {
    let gen_ix: Vec<u64> = gens.iter().map(|g| g.index()).collect();
    let size = 1usize << ground;
    let mut best = vec![u32::MAX; size];
    best[0] = 0;
    for ix in 1..size {
        let low = (ix as u64).trailing_zeros();
        let mut b = u32::MAX;
        for &g in &gen_ix {
            if g >> low & 1 == 1 {
                let rest = best[(ix as u64 & !g) as usize];
                if rest != u32::MAX {
                    b = b.min(rest + 1);
                }
            }
        }
        if b == u32::MAX {
            return Err(Error::Uncoverable { point: low as usize });
        }
        best[ix] = b;
    }
    Ok(best.into_iter().map(|b| ExtendedRational::from(b as usize)).collect())
}

/// `true` when every point lies in some generator.
pub fn generators_cover(ground: usize, generators: &[SubsetMask]) -> bool {
    let mut reach = SubsetMask::empty(ground);
    for g in generators {
        reach = reach.union(g);
    }
    reach.len() == ground
}

/// Sum of point masses over `set`; helper for measure feasibility checks.
pub fn measure_of(masses: &[ExtendedRational], set: &SubsetMask) -> ExtendedRational {
    set.iter().map(|i| &masses[i]).sum()
}
