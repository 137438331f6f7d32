//! Arithmetic progressions and the van der Waerden submeasure
//! `φ(A) = max{n : A contains an AP of length V_n}`.

use std::collections::HashSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{size_limit, Error, Result};
use crate::prefix::IntegerSet;
use crate::rational::{int, ratio, ExtendedRational, Rational};

/// Largest set handed to [`longest_ap`].
pub const MAX_AP_SET: usize = 10_000;
/// Largest interval for [`w_check`].
pub const MAX_W_LENGTH: usize = 25;
/// Sets up to this size get an exhaustive feasibility scan.
pub const EXHAUSTIVE_FEASIBILITY: usize = 16;
/// Random subsets checked for larger sets.
pub const SAMPLED_FEASIBILITY: usize = 4096;
/// Largest `V_n` whose density condition is checked by subset scan.
pub const MAX_DENSITY_SCAN: u64 = 20;

/// A table `V_1 < V_2 < ...` with `V_1 = 1`, `V_2 = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VTable(Vec<u64>);

impl VTable {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.len() < 2 || values[0] != 1 || values[1] != 2 {
            return Err(Error::Malformed("a V table starts 1, 2".into()));
        }
        if let Some(w) = values.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(format!(
                "V table not increasing at {} then {}",
                w[0], w[1]
            )));
        }
        Ok(Self(values))
    }

    /// The demo table `(1, 2, 4)`.
    pub fn demo() -> Self {
        Self(vec![1, 2, 4])
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    /// `V_n`, 1-indexed.
    pub fn get(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.0.get(i)).copied()
    }
}

/// `start, start + step, ..., start + (length-1)·step`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApRecord {
    pub start: u64,
    pub step: u64,
    pub length: usize,
}

impl ApRecord {
    pub fn terms(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.length as u64).map(move |j| self.start + j * self.step)
    }
}

fn explicit_elements(a: &IntegerSet) -> Result<Vec<u64>> {
    let v = a.elements()?;
    size_limit("set size for AP search", v.len(), MAX_AP_SET)?;
    Ok(v)
}

/// Longest arithmetic progression in `elements` (sorted, distinct). Ties go
/// to the lowest start, then the lowest step.
fn longest_in(elements: &[u64]) -> Option<ApRecord> {
    let first = *elements.first()?;
    let set: HashSet<u64> = elements.iter().copied().collect();
    let mut best = ApRecord {
        start: first,
        step: 1,
        length: 1,
    };
    for (i, &x) in elements.iter().enumerate() {
        for &y in &elements[i + 1..] {
            let d = y - x;
            // only start at the first term of a maximal progression
            if x >= d && set.contains(&(x - d)) {
                continue;
            }
            let mut len = 2;
            let mut next = y + d;
            while set.contains(&next) {
                len += 1;
                next += d;
            }
            if len > best.length {
                best = ApRecord {
                    start: x,
                    step: d,
                    length: len,
                };
            }
        }
    }
    Some(best)
}

/// Length of the longest arithmetic progression inside `A`, with a witness.
/// Predicate sets are read up to their bound.
pub fn longest_ap(a: &IntegerSet) -> Result<(usize, Option<ApRecord>)> {
    let elements = explicit_elements(a)?;
    Ok(match longest_in(&elements) {
        Some(r) => (r.length, Some(r)),
        None => (0, None),
    })
}

fn phi_of_length(v: &VTable, longest: usize) -> usize {
    v.0.iter().take_while(|&&vn| vn as usize <= longest).count()
}

/// `φ(A)`, with the supremum taken over the supplied table.
pub fn vdw_phi(v: &VTable, a: &IntegerSet) -> Result<ExtendedRational> {
    let (len, _) = longest_ap(a)?;
    Ok(ExtendedRational::from(phi_of_length(v, len)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WCheck {
    pub n: usize,
    pub length: usize,
    pub holds: bool,
    /// Lowest-index 2-coloring of `[0, L)` (bit `i` is the color of `i`)
    /// with no monochromatic `n`-term progression.
    pub counterexample: Option<Vec<u8>>,
}

/// Does every 2-coloring of `[0, L)` contain a monochromatic `n`-term AP?
pub fn w_check(n: usize, length: usize) -> Result<WCheck> {
    if n == 0 {
        return Err(Error::ParamRange("progression length must be at least 1".into()));
    }
    size_limit("w_check interval", length, MAX_W_LENGTH)?;
    let mut aps: Vec<u64> = Vec::new();
    if n == 1 {
        aps.extend((0..length).map(|i| 1u64 << i));
    } else {
        for step in 1..length {
            for start in 0..length {
                let last = start + (n - 1) * step;
                if last >= length {
                    break;
                }
                aps.push((0..n).fold(0, |m, j| m | 1 << (start + j * step)));
            }
        }
    }
    let full = (1u64 << length) - 1;
    let bad = (0..1u64 << length).into_par_iter().find_first(|&c| {
        let other = !c & full;
        aps.iter().all(|&m| c & m != m && other & m != m)
    });
    Ok(WCheck {
        n,
        length,
        holds: bad.is_none(),
        counterexample: bad.map(|c| (0..length).map(|i| (c >> i & 1) as u8).collect()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feasibility {
    pub exhaustive: bool,
    pub subsets_checked: usize,
    /// `μ(C) ≤ φ(C)` on every checked `C`.
    pub feasible: bool,
    /// Largest `ν(C)/φ(C)` over checked nonempty `C`.
    pub max_nu_ratio: Rational,
    /// First checked `C` with `μ(C) > φ(C)`.
    pub violation: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMeasure {
    pub n: usize,
    pub progression: ApRecord,
    pub nu: Vec<(u64, Rational)>,
    pub mu: Vec<(u64, Rational)>,
    pub feasibility: Feasibility,
}

/// The measures from the proof that `P_fin(φ) ≤ 2`.
///
/// `A` must have `φ(A) = n` finite. `B` is an AP of length `V_n` in `A`.
/// For `n ≤ 2` both `ν` and `μ` put unit mass on each point of `B`;
/// otherwise `ν` puts `n/V_n` there and `μ = ν/2`.
pub fn vdw_scaled_measure(a: &IntegerSet, n: usize, v: &VTable) -> Result<ScaledMeasure> {
    let elements = explicit_elements(a)?;
    let best = longest_in(&elements).ok_or_else(|| Error::ParamRange("the set is empty, so φ(A) = 0".into()))?;
    let phi_a = phi_of_length(v, best.length);
    if phi_a != n {
        return Err(Error::ParamRange(format!("φ(A) = {phi_a}, not {n}")));
    }
    let vn = v.get(n).expect("phi_of_length stays inside the table") as usize;
    let progression = ApRecord { length: vn, ..best };
    let (nu_mass, mu_mass) = if n <= 2 {
        (int(1), int(1))
    } else {
        let m = ratio(n as i64, vn as i64);
        (m.clone(), m / int(2))
    };
    let nu: Vec<(u64, Rational)> = progression.terms().map(|t| (t, nu_mass.clone())).collect();
    let mu: Vec<(u64, Rational)> = progression.terms().map(|t| (t, mu_mass.clone())).collect();

    let mut feas = Feasibility {
        exhaustive: elements.len() <= EXHAUSTIVE_FEASIBILITY,
        subsets_checked: 0,
        feasible: true,
        max_nu_ratio: Rational::zero(),
        violation: None,
    };
    let in_b: Vec<bool> = elements.iter().map(|x| progression.terms().any(|t| t == *x)).collect();
    let mut check = |bits: &dyn Fn(usize) -> bool| {
        let c: Vec<u64> = (0..elements.len()).filter(|&i| bits(i)).map(|i| elements[i]).collect();
        feas.subsets_checked += 1;
        if c.is_empty() {
            return;
        }
        let hits = (0..elements.len()).filter(|&i| bits(i) && in_b[i]).count() as i64;
        let phi_c = int(phi_of_length(v, longest_in(&c).map_or(0, |r| r.length)) as i64);
        let nu_c = &nu_mass * int(hits);
        let mu_c = &mu_mass * int(hits);
        let r = &nu_c / &phi_c;
        if r > feas.max_nu_ratio {
            feas.max_nu_ratio = r;
        }
        if mu_c > phi_c && feas.violation.is_none() {
            feas.feasible = false;
            feas.violation = Some(c);
        }
    };
    if feas.exhaustive {
        for mask in 0u64..1 << elements.len() {
            check(&|i| mask >> i & 1 == 1);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1ed);
        for _ in 0..SAMPLED_FEASIBILITY {
            let keep: Vec<bool> = (0..elements.len()).map(|_| rng.gen()).collect();
            check(&|i| keep[i]);
        }
    }
    Ok(ScaledMeasure {
        n,
        progression,
        nu,
        mu,
        feasibility: feas,
    })
}

/// Checks on one index `n ≥ 3` of a V table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexCheck {
    pub n: usize,
    pub value: u64,
    /// `V_n ≥ W_{V_{n-1}}`, or `None` when `V_n` is too large to decide.
    pub w_bound: Option<bool>,
    /// For each `i < n`, every `B ⊆ [0, V_n)` with `|B|/V_n ≥ i/n` contains
    /// an AP of length `V_i`; `None` when `V_n` is too large to scan.
    pub density: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VTableCheck {
    pub indices: Vec<IndexCheck>,
    /// No decided check failed.
    pub passes: bool,
}

/// Every `k`-subset of `[0, len)` contains an AP of length `target`.
fn dense_subsets_have_ap(len: u64, k: u32, target: usize) -> bool {
    (0u64..1 << len)
        .into_par_iter()
        .filter(|m| m.count_ones() == k)
        .all(|m| {
            let elems: Vec<u64> = (0..len).filter(|i| m >> i & 1 == 1).collect();
            longest_in(&elems).map_or(0, |r| r.length) >= target
        })
}

/// Decide the construction constraints where brute force allows.
pub fn check_vtable(v: &VTable) -> Result<VTableCheck> {
    let mut indices = Vec::new();
    for n in 3..=v.0.len() {
        let value = v.0[n - 1];
        let prev = v.0[n - 2] as usize;
        let w_bound = if value as usize <= MAX_W_LENGTH {
            Some(w_check(prev, value as usize)?.holds)
        } else {
            None
        };
        let density = (value <= MAX_DENSITY_SCAN).then(|| {
            (1..n).all(|i| {
                let k = (i as u64 * value).div_ceil(n as u64) as u32;
                dense_subsets_have_ap(value, k, v.0[i - 1] as usize)
            })
        });
        indices.push(IndexCheck {
            n,
            value,
            w_bound,
            density,
        });
    }
    let passes = indices
        .iter()
        .all(|c| c.w_bound != Some(false) && c.density != Some(false));
    Ok(VTableCheck { indices, passes })
}
