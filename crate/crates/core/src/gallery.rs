//! Named examples: τ, τ₃^∞, η, the δ quotients, Mazur covering systems,
//! block truncations ψ, the α-interpolation family and the computable rows
//! of the configuration table for `(P_fin, P, P_σ)`.

use std::collections::BTreeMap;

use crate::error::{size_limit, Error, Result};
use crate::mask::SubsetMask;
use crate::pathology::Composite;
use crate::pattern::PatternSubmeasure;
use crate::rational::{int, ratio, ExtendedRational, Rational};
use crate::submeasure::{generators_cover, Aggregator, FiniteSubmeasure};

/// Largest Mazur parameter; `|K_5| = 252`.
pub const MAX_MAZUR: usize = 5;
/// Mazur systems up to this parameter are brute-force checked on construction.
pub const CHECKED_MAZUR: usize = 3;
/// Largest block count for [`make_psi`].
pub const MAX_PSI_BLOCKS: usize = 3;

/// Attached to every ψ object.
pub const PSI_NOTE: &str = "blocks are normalized Mazur covering pieces Φ_n/(n+1) with \
    ε_k = 2/(n_k+1) in place of ε_k ≤ 2^-(k+1); only the structural bounds carry over";

fn q(n: i64) -> ExtendedRational {
    ExtendedRational::from_int(n)
}

/// `τ` on three points: 0, 1, 1, 2 by cardinality.
pub fn make_tau() -> FiniteSubmeasure {
    FiniteSubmeasure::by_cardinality(3, &[q(0), q(1), q(1), q(2)]).expect("static table")
}

/// `τ₃^∞`: τ applied to the set of blocks met infinitely, vanishing on finite sets.
pub fn make_tau3_inf() -> PatternSubmeasure {
    PatternSubmeasure::by_pattern_size(3, &[q(0), q(1), q(1), q(2)], q(0)).expect("static table")
}

/// `η` on four blocks: 3 when one to three blocks are met infinitely, 6 for
/// all four, 1 on nonempty finite sets.
pub fn make_eta() -> PatternSubmeasure {
    PatternSubmeasure::by_pattern_size(4, &[q(0), q(3), q(3), q(3), q(6)], q(1)).expect("static table")
}

/// `delta_fin` (1 on infinite sets) or `delta_plus_delta_fin` (adds 1 on
/// every nonempty set).
pub fn make_delta_pattern(kind: &str) -> Result<PatternSubmeasure> {
    match kind {
        "delta_fin" | "delta-fin" => PatternSubmeasure::new(1, vec![q(0), q(1)], q(0)),
        "delta_plus_delta_fin" | "delta-plus-delta-fin" => PatternSubmeasure::new(1, vec![q(0), q(2)], q(1)),
        other => Err(Error::UnknownKind(format!("delta pattern {other:?}"))),
    }
}

/// A finite set `K` with a family of generators covering it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringSystem {
    pub ground_size: usize,
    pub generators: Vec<SubsetMask>,
    pub labels: Option<Vec<String>>,
}

impl CoveringSystem {
    pub fn new(ground_size: usize, generators: Vec<SubsetMask>, labels: Option<Vec<String>>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::NotACover("no generators".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.ground_size() != ground_size) {
            return Err(Error::GroundMismatch {
                expected: ground_size,
                actual: g.ground_size(),
            });
        }
        if !generators_cover(ground_size, &generators) {
            return Err(Error::NotACover("generators do not cover the ground set".into()));
        }
        if let Some(l) = &labels {
            if l.len() != ground_size {
                return Err(Error::Malformed(format!("{} labels for {ground_size} points", l.len())));
            }
        }
        Ok(Self {
            ground_size,
            generators,
            labels,
        })
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The `n`-subsets of `0..2n` as bitmasks in colexicographic order.
fn colex_subsets(n: usize) -> Vec<u64> {
    (0u64..1 << (2 * n)).filter(|m| m.count_ones() as usize == n).collect()
}

/// `K_n` = n-subsets of `[2n]` (colex order), generators the stars
/// `A_i = {s : i ∈ s}`. No n stars cover `K_n`, and under the uniform
/// distribution every star has probability 1/2.
pub fn make_mazur_system(n: usize) -> Result<CoveringSystem> {
    if n == 0 {
        return Err(Error::ParamRange("Mazur parameter must be at least 1".into()));
    }
    size_limit("Mazur parameter", n, MAX_MAZUR)?;
    let points = colex_subsets(n);
    let size = points.len();
    debug_assert_eq!(size, binomial(2 * n, n));
    let generators: Vec<SubsetMask> = (0..2 * n)
        .map(|i| {
            let members = points
                .iter()
                .enumerate()
                .filter(|(_, s)| *s >> i & 1 == 1)
                .map(|(ix, _)| ix);
            SubsetMask::from_indices(size, members)
        })
        .collect::<Result<_>>()?;
    let labels = points
        .iter()
        .map(|s| {
            let elems: Vec<String> = (0..2 * n).filter(|i| s >> i & 1 == 1).map(|i| i.to_string()).collect();
            format!("{{{}}}", elems.join(","))
        })
        .collect();
    if n <= CHECKED_MAZUR {
        check_mazur(n, &generators)?;
    }
    CoveringSystem::new(size, generators, Some(labels))
}

fn check_mazur(n: usize, generators: &[SubsetMask]) -> Result<()> {
    let full = SubsetMask::full(generators[0].ground_size());
    // Property (1): every choice of n stars misses some point.
    let mut choice: u64 = (1 << n) - 1;
    let limit = 1u64 << (2 * n);
    while choice < limit {
        let union = (0..2 * n)
            .filter(|i| choice >> i & 1 == 1)
            .fold(SubsetMask::empty(full.ground_size()), |u, i| u.union(&generators[i]));
        if union == full {
            return Err(Error::Malformed(format!("{n} stars cover K_{n}")));
        }
        // next mask with the same popcount
        let c = choice & choice.wrapping_neg();
        let r = choice + c;
        choice = (((r ^ choice) >> 2) / c) | r;
    }
    // Property (2): uniform mass of each star is exactly 1/2.
    if generators.iter().any(|g| 2 * g.len() != full.len()) {
        return Err(Error::Malformed("a star does not carry half the points".into()));
    }
    Ok(())
}

/// Minimum number of generators needed to cover a set.
pub fn make_phi_cover(sys: &CoveringSystem) -> Result<FiniteSubmeasure> {
    FiniteSubmeasure::covering(sys.ground_size, sys.generators.clone())
}

/// `Φ_n / (n+1)`: value 1 on `K_n`, hull `2/(n+1)` there.
pub fn normalized_mazur_piece(n: usize) -> Result<FiniteSubmeasure> {
    let cover = make_phi_cover(&make_mazur_system(n)?)?;
    FiniteSubmeasure::scale(ratio(1, n as i64 + 1), cover)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiVariant {
    Sum,
    Sup,
    WeightedSup,
}

impl std::str::FromStr for PsiVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(Self::Sum),
            "sup" => Ok(Self::Sup),
            "weighted_sup" | "weighted-sup" => Ok(Self::WeightedSup),
            other => Err(Error::UnknownKind(format!("psi variant {other:?}"))),
        }
    }
}

/// Block truncation with normalized Mazur pieces.
///
/// `pieces` are the Mazur parameters `n_k` (default `1..=blocks`). For
/// `WeightedSup` the block weights are `k+1` for the `k`-th block,
/// counting from 1.
pub fn make_psi(variant: PsiVariant, blocks: usize, pieces: Option<&[usize]>) -> Result<FiniteSubmeasure> {
    if blocks == 0 {
        return Err(Error::ParamRange("psi needs at least one block".into()));
    }
    size_limit("psi blocks", blocks, MAX_PSI_BLOCKS)?;
    let params: Vec<usize> = match pieces {
        Some(p) if p.len() != blocks => {
            return Err(Error::ParamRange(format!(
                "{} piece parameters for {blocks} blocks",
                p.len()
            )))
        }
        Some(p) => p.to_vec(),
        None => (1..=blocks).collect(),
    };
    let parts = params
        .iter()
        .map(|&n| normalized_mazur_piece(n))
        .collect::<Result<Vec<_>>>()?;
    let aggregator = match variant {
        PsiVariant::Sum => Aggregator::Sum,
        PsiVariant::Sup => Aggregator::Sup,
        PsiVariant::WeightedSup => Aggregator::WeightedSup((1..=blocks).map(|k| int(k as i64 + 1)).collect()),
    };
    FiniteSubmeasure::block(parts, aggregator)
}

/// Three points, values 0, 1, 1, α by cardinality; `3/2 < α ≤ 2`.
pub fn make_interp(alpha: &Rational) -> Result<FiniteSubmeasure> {
    if *alpha <= ratio(3, 2) || *alpha > int(2) {
        return Err(Error::ParamRange(format!("alpha = {alpha} outside (3/2, 2]")));
    }
    FiniteSubmeasure::by_cardinality(3, &[q(0), q(1), q(1), ExtendedRational::Finite(alpha.clone())])
}

/// A σ-measure on three points.
pub fn make_sigma_measure() -> FiniteSubmeasure {
    FiniteSubmeasure::weighted(vec![q(1), ExtendedRational::frac(1, 2), ExtendedRational::frac(1, 4)])
        .expect("static weights")
}

/// Row ids of the configuration table that can be built from finite data,
/// with their degree triples `(P_fin, P, P_σ)`.
pub fn table2_rows() -> Vec<(&'static str, [ExtendedRational; 3])> {
    let inf = ExtendedRational::Infinity;
    let t = ExtendedRational::frac(4, 3);
    let h = ExtendedRational::frac(3, 2);
    vec![
        ("sigma-measure", [q(1), q(1), q(1)]),
        ("tau3", [t.clone(), t.clone(), t.clone()]),
        ("tau3-inf", [q(1), t.clone(), inf.clone()]),
        ("eta", [q(1), h.clone(), q(6)]),
        ("delta-plus-delta-fin", [q(1), q(1), q(2)]),
        ("tau3⊕tau3-inf", [t.clone(), t.clone(), inf.clone()]),
        ("eta⊕tau3", [t.clone(), h.clone(), q(6)]),
        ("(δ+δ_Fin)⊕τ₃", [t.clone(), t.clone(), q(2)]),
        ("tau3⊕tau3-inf⊕eta", [t, h, inf]),
    ]
}

fn row_leaf(name: &str) -> Option<Composite> {
    Some(match name {
        "sigma-measure" => Composite::Finite(make_sigma_measure()),
        "tau3" | "τ₃" => Composite::Finite(make_tau()),
        "tau3-inf" | "τ₃^∞" => Composite::Pattern(make_tau3_inf()),
        "eta" | "η" => Composite::Pattern(make_eta()),
        "delta-plus-delta-fin" | "(δ+δ_Fin)" | "δ+δ_Fin" => {
            Composite::Pattern(make_delta_pattern("delta_plus_delta_fin").ok()?)
        }
        _ => return None,
    })
}

fn non_constructive(id: &str) -> bool {
    ["χ", "chi", "δ_ℐ", "delta-ideal", "∞-ideal", "ψ", "psi"]
        .iter()
        .any(|m| id.contains(m))
}

/// The ⊕-tree for a row id. Summands are separated by `⊕` (or `+` between
/// ASCII names).
pub fn make_table2_row(id: &str) -> Result<Composite> {
    if non_constructive(id) {
        return Err(Error::Unsupported(format!(
            "row {id:?} needs a non-constructive ingredient"
        )));
    }
    let parts: Vec<&str> = if id.contains('⊕') {
        id.split('⊕').collect()
    } else if id.contains('+') && row_leaf(id).is_none() {
        id.split('+').collect()
    } else {
        vec![id]
    };
    let leaves = parts
        .iter()
        .map(|p| row_leaf(p.trim()).ok_or_else(|| Error::UnknownKind(format!("table row {id:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(if leaves.len() == 1 {
        leaves.into_iter().next().expect("one leaf")
    } else {
        Composite::OplusMax(leaves)
    })
}

/// Object produced by the registry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GalleryObject {
    Finite(FiniteSubmeasure),
    Pattern(PatternSubmeasure),
}

pub struct GalleryEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub description: &'static str,
}

pub const REGISTRY: &[GalleryEntry] = &[
    GalleryEntry {
        name: "tau",
        params: "",
        description: "τ on three points: 0/1/1/2 by cardinality",
    },
    GalleryEntry {
        name: "tau3-inf",
        params: "",
        description: "τ₃^∞ pattern: τ on the blocks met infinitely, floor 0",
    },
    GalleryEntry {
        name: "eta",
        params: "",
        description: "η pattern on four blocks: 0/3/3/3/6, floor 1",
    },
    GalleryEntry {
        name: "delta-fin",
        params: "",
        description: "δ_Fin pattern: 1 on infinite sets",
    },
    GalleryEntry {
        name: "delta-plus-delta-fin",
        params: "",
        description: "δ+δ_Fin pattern: θ({0}) = 2, floor 1",
    },
    GalleryEntry {
        name: "sigma-measure",
        params: "",
        description: "point masses 1, 1/2, 1/4",
    },
    GalleryEntry {
        name: "mazur",
        params: "n=1..5",
        description: "Mazur covering submeasure Φ_n on the n-subsets of [2n]",
    },
    GalleryEntry {
        name: "psi",
        params: "variant=sum|sup|weighted_sup blocks=1..3",
        description: "block truncation with normalized Mazur pieces",
    },
    GalleryEntry {
        name: "interp",
        params: "alpha in (3/2, 2]",
        description: "0/1/1/α by cardinality, all degrees (2/3)·α",
    },
];

fn param<'a>(params: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str> {
    params
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::ParamRange(format!("missing parameter {key}")))
}

fn param_usize(params: &BTreeMap<String, String>, key: &str) -> Result<usize> {
    let raw = param(params, key)?;
    raw.parse()
        .map_err(|_| Error::ParamRange(format!("{key} = {raw:?} is not a nonnegative integer")))
}

/// Build a registry entry by name.
pub fn build(name: &str, params: &BTreeMap<String, String>) -> Result<GalleryObject> {
    Ok(match name {
        "tau" | "tau3" => GalleryObject::Finite(make_tau()),
        "tau3-inf" => GalleryObject::Pattern(make_tau3_inf()),
        "eta" => GalleryObject::Pattern(make_eta()),
        "delta-fin" | "delta-plus-delta-fin" => GalleryObject::Pattern(make_delta_pattern(name)?),
        "sigma-measure" => GalleryObject::Finite(make_sigma_measure()),
        "mazur" => GalleryObject::Finite(make_phi_cover(&make_mazur_system(param_usize(params, "n")?)?)?),
        "psi" => {
            let variant = params.get("variant").map_or(Ok(PsiVariant::Sum), |v| v.parse())?;
            let blocks = params.get("blocks").map_or(Ok(2), |_| param_usize(params, "blocks"))?;
            GalleryObject::Finite(make_psi(variant, blocks, None)?)
        }
        "interp" => {
            let alpha = crate::rational::parse_rational(param(params, "alpha")?)?;
            GalleryObject::Finite(make_interp(&alpha)?)
        }
        other => return Err(Error::UnknownKind(format!("gallery entry {other:?}"))),
    })
}
