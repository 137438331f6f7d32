//! Prefix-scale evaluators for density, exponential density, summable and
//! matrix submeasures on ω, and the maps between them.
//!
//! Nothing here decides membership in an ideal. Limits are replaced by
//! maxima over explicit windows, and each report says so.
//!
//! Prefixes are `[0, n)` except in the matrix construction, whose rows are
//! numbered from 1 so that row `i` averages over `[1, i]`.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::error::{size_limit, Error, Result};
use crate::rational::{int, ratio, ExtendedRational, Rational};

/// Largest prefix length any operation will walk.
pub const MAX_PREFIX: u64 = 10_000_000;
/// Largest number of matrix entries.
pub const MAX_MATRIX_ENTRIES: usize = 4_000_000;
/// Denominator of the exponential-density bracket.
pub const LOG_RESOLUTION: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    All,
    Evens,
    Squares,
    Multiples(u64),
}

impl Predicate {
    fn holds(self, i: u64) -> bool {
        match self {
            Predicate::All => true,
            Predicate::Evens => i.is_multiple_of(2),
            Predicate::Squares => {
                let r = i.isqrt();
                r * r == i
            }
            Predicate::Multiples(k) => i.is_multiple_of(k),
        }
    }

    pub fn name(self) -> String {
        match self {
            Predicate::All => "all".into(),
            Predicate::Evens => "evens".into(),
            Predicate::Squares => "squares".into(),
            Predicate::Multiples(k) => format!("multiples:{k}"),
        }
    }
}

impl std::str::FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" | "omega" => Ok(Predicate::All),
            "evens" => Ok(Predicate::Evens),
            "squares" => Ok(Predicate::Squares),
            _ => match s.strip_prefix("multiples:").map(str::parse::<u64>) {
                Some(Ok(k)) if k > 0 => Ok(Predicate::Multiples(k)),
                _ => Err(Error::UnknownKind(format!("integer set predicate {s:?}"))),
            },
        }
    }
}

/// A subset of ω, either listed or given by a predicate that is only
/// consulted below `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerSet {
    Explicit(Vec<u64>),
    Predicate { predicate: Predicate, bound: u64 },
}

impl IntegerSet {
    /// Elements must be strictly increasing.
    pub fn explicit(elements: Vec<u64>) -> Result<Self> {
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Malformed(format!(
                "integer set not strictly increasing at {} then {}",
                w[0], w[1]
            )));
        }
        Ok(IntegerSet::Explicit(elements))
    }

    pub fn predicate(predicate: Predicate, bound: u64) -> Result<Self> {
        if bound > MAX_PREFIX {
            return Err(Error::SizeLimit {
                what: "predicate bound",
                actual: bound as usize,
                limit: MAX_PREFIX as usize,
            });
        }
        Ok(IntegerSet::Predicate { predicate, bound })
    }

    /// Membership for `i < n`, after checking that the set is known on `[0, n)`.
    fn indicator(&self, n: u64) -> Result<impl Fn(u64) -> bool + '_> {
        if n > MAX_PREFIX {
            return Err(Error::Range(format!("prefix {n} exceeds {MAX_PREFIX}")));
        }
        if let IntegerSet::Predicate { bound, .. } = self {
            if n > *bound {
                return Err(Error::Range(format!("prefix {n} beyond the declared bound {bound}")));
            }
        }
        Ok(move |i: u64| match self {
            IntegerSet::Explicit(v) => v.binary_search(&i).is_ok(),
            IntegerSet::Predicate { predicate, .. } => predicate.holds(i),
        })
    }

    /// Elements below `n`, in increasing order.
    pub fn members_below(&self, n: u64) -> Result<Vec<u64>> {
        match self {
            IntegerSet::Explicit(v) => Ok(v.iter().copied().take_while(|&x| x < n).collect()),
            IntegerSet::Predicate { .. } => {
                let f = self.indicator(n)?;
                Ok((0..n).filter(|&i| f(i)).collect())
            }
        }
    }

    /// Every element: the list itself, or the predicate up to its bound.
    pub fn elements(&self) -> Result<Vec<u64>> {
        match self {
            IntegerSet::Explicit(v) => Ok(v.clone()),
            IntegerSet::Predicate { bound, .. } => self.members_below(*bound),
        }
    }

    /// `|A ∩ [0, n)|`.
    pub fn count_below(&self, n: u64) -> Result<u64> {
        match self {
            IntegerSet::Explicit(v) => Ok(v.partition_point(|&x| x < n) as u64),
            IntegerSet::Predicate {
                predicate: Predicate::All,
                ..
            } => {
                let _ = self.indicator(n)?;
                Ok(n)
            }
            IntegerSet::Predicate { .. } => Ok(self.members_below(n)?.len() as u64),
        }
    }

    /// `[0, n) \ A` as an explicit set.
    pub fn complement_below(&self, n: u64) -> Result<IntegerSet> {
        let f = self.indicator(n)?;
        Ok(IntegerSet::Explicit((0..n).filter(|&i| !f(i)).collect()))
    }
}

fn check_weights(f: &[Rational], n: u64) -> Result<()> {
    if (f.len() as u64) < n {
        return Err(Error::Range(format!(
            "weights given for {} indices, prefix needs {n}",
            f.len()
        )));
    }
    if f.first().is_none_or(Zero::is_zero) {
        return Err(Error::BadWeights("f(0) must be nonzero".into()));
    }
    if let Some(i) = f.iter().position(Signed::is_negative) {
        return Err(Error::BadWeights(format!("f({i}) is negative")));
    }
    Ok(())
}

/// Running numerator and denominator of `φ_{f,n}(A)` for `n = 1, 2, ...`.
fn prefix_ratios<'a>(f: &'a [Rational], a: &'a IntegerSet, n_max: u64) -> Result<impl Iterator<Item = Rational> + 'a> {
    check_weights(f, n_max)?;
    let member = a.indicator(n_max)?;
    let mut num = Rational::zero();
    let mut den = Rational::zero();
    Ok((0..n_max).map(move |i| {
        den += &f[i as usize];
        if member(i) {
            num += &f[i as usize];
        }
        &num / &den
    }))
}

/// `φ_{f,n}(A) = Σ_{i ∈ A ∩ n} f(i) / Σ_{i < n} f(i)`.
pub fn density_prefix(f: &[Rational], a: &IntegerSet, n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Range("density prefix needs n >= 1".into()));
    }
    Ok(prefix_ratios(f, a, n)?.last().expect("n >= 1"))
}

/// `max_{1 ≤ n ≤ n_max} φ_{f,n}(A)`, the prefix approximation of `φ_f(A)`.
pub fn density_sup(f: &[Rational], a: &IntegerSet, n_max: u64) -> Result<Rational> {
    density_limsup_window(f, a, 1, n_max)
}

/// `max_{n_lo ≤ n ≤ n_hi} φ_{f,n}(A)`: a window statistic standing in for
/// the limsup, not the limsup itself.
pub fn density_limsup_window(f: &[Rational], a: &IntegerSet, n_lo: u64, n_hi: u64) -> Result<Rational> {
    if n_lo == 0 || n_lo > n_hi {
        return Err(Error::Range(format!("bad window [{n_lo}, {n_hi}]")));
    }
    Ok(prefix_ratios(f, a, n_hi)?
        .skip(n_lo as usize - 1)
        .max()
        .expect("nonempty window"))
}

/// `ln |A ∩ n| / ln n`, bracketed by rationals with denominator
/// [`LOG_RESOLUTION`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpDensity {
    pub count: u64,
    pub n: u64,
    /// `None` when the prefix is empty (`ln 0`).
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

/// The bracket uses `c^q ≥ n^p ⟺ ln c / ln n ≥ p/q` with integer powers,
/// so it is exact and contains the true ratio.
pub fn exp_density_prefix(a: &IntegerSet, n: u64) -> Result<ExpDensity> {
    if n < 2 {
        return Err(Error::Range("exponential density needs n >= 2".into()));
    }
    let count = a.count_below(n)?;
    if count == 0 {
        return Ok(ExpDensity {
            count,
            n,
            lower: None,
            upper: None,
        });
    }
    let q = LOG_RESOLUTION;
    let cq = BigUint::from(count).pow(q);
    let base = BigUint::from(n);
    // largest p with n^p ≤ c^q; p ≤ q because c ≤ n
    let (mut lo, mut hi) = (0u32, q);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if base.pow(mid) <= cq {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let exact = base.pow(lo) == cq;
    let lower = ratio(lo as i64, q as i64);
    let upper = if exact {
        lower.clone()
    } else {
        ratio(lo as i64 + 1, q as i64)
    };
    Ok(ExpDensity {
        count,
        n,
        lower: Some(lower),
        upper: Some(upper),
    })
}

/// `Σ_{i ∈ A, i < n} f(i)`.
pub fn summable_weight(f: &[ExtendedRational], a: &IntegerSet, n: u64) -> Result<ExtendedRational> {
    if (f.len() as u64) < n {
        return Err(Error::Range(format!(
            "weights given for {} indices, prefix needs {n}",
            f.len()
        )));
    }
    if let Some(i) = f.iter().position(ExtendedRational::is_negative) {
        return Err(Error::BadWeights(format!("f({i}) is negative")));
    }
    Ok(a.members_below(n)?.into_iter().map(|i| &f[i as usize]).sum())
}

/// Finite corner of a nonnegative matrix, rows labelled from `row_base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPrefix {
    rows: usize,
    cols: usize,
    row_base: usize,
    entries: Vec<Rational>,
}

impl MatrixPrefix {
    pub fn new(rows: usize, cols: usize, row_base: usize, entries: Vec<Rational>) -> Result<Self> {
        let size = rows.saturating_mul(cols);
        size_limit("matrix entries", size, MAX_MATRIX_ENTRIES)?;
        if entries.len() != size {
            return Err(Error::Malformed(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(ix) = entries.iter().position(Signed::is_negative) {
            return Err(Error::Malformed(format!(
                "negative entry in row {}, column {}",
                ix / cols + row_base,
                ix % cols
            )));
        }
        Ok(Self {
            rows,
            cols,
            row_base,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        row_base: usize,
        mut f: impl FnMut(usize, usize) -> Rational,
    ) -> Result<Self> {
        let size = rows.saturating_mul(cols);
        size_limit("matrix entries", size, MAX_MATRIX_ENTRIES)?;
        let mut entries = Vec::with_capacity(size);
        for i in 0..rows {
            for k in 0..cols {
                entries.push(f(i + row_base, k));
            }
        }
        Self::new(rows, cols, row_base, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_base(&self) -> usize {
        self.row_base
    }

    /// Row labels, `row_base .. row_base + rows`.
    pub fn row_labels(&self) -> std::ops::Range<usize> {
        self.row_base..self.row_base + self.rows
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Entries of the row with label `i`.
    pub fn row(&self, i: usize) -> &[Rational] {
        let r = i - self.row_base;
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, i: usize, k: usize) -> &Rational {
        &self.row(i)[k]
    }
}

/// `max_{i ∈ rows} Σ_{k ∈ B, k < cols} a_{i,k}`, rows given by label.
pub fn matrix_submeasure_prefix(
    m: &MatrixPrefix,
    b: &IntegerSet,
    rows: std::ops::RangeInclusive<usize>,
) -> Result<Rational> {
    let labels = m.row_labels();
    if rows.is_empty() || !labels.contains(rows.start()) || !labels.contains(rows.end()) {
        return Err(Error::Range(format!(
            "rows {}..={} outside {}..{}",
            rows.start(),
            rows.end(),
            labels.start,
            labels.end
        )));
    }
    let cols = b.members_below(m.cols as u64)?;
    Ok(rows
        .map(|i| {
            let row = m.row(i);
            cols.iter().map(|&k| &row[k as usize]).sum::<Rational>()
        })
        .max()
        .expect("nonempty row range"))
}

/// A condition about a limit, judged from the finite prefix only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trend {
    pub label: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub row_sums: Vec<Rational>,
    /// Largest entry of each column over the second half of the rows.
    pub column_tail_max: Vec<Rational>,
    pub sup_row_sum: Rational,
    /// Row sums move towards 1: the last row is closer than the first, or
    /// every row sums to exactly 1.
    pub row_sum_trend: Trend,
    /// No column stays at or above a positive value from the middle row to
    /// the last.
    pub column_decay_trend: Trend,
}

pub const TREND_ONLY: &str = "trend only (limit condition judged on a finite prefix)";

/// Row sums, column tails and the two regularity trends.
pub fn check_regular(m: &MatrixPrefix) -> RegularityReport {
    let row_sums: Vec<Rational> = m.row_labels().map(|i| m.row(i).iter().sum()).collect();
    let sup_row_sum = row_sums.iter().max().cloned().unwrap_or_else(Rational::zero);
    let one = Rational::one();
    let row_sum_holds = match (row_sums.first(), row_sums.last()) {
        (Some(first), Some(last)) => row_sums.iter().all(|s| *s == one) || (last - &one).abs() < (first - &one).abs(),
        _ => false,
    };
    let mid = m.row_base + m.rows / 2;
    let last = m.row_base + m.rows.saturating_sub(1);
    let tail_start = mid;
    let mut column_tail_max = Vec::with_capacity(m.cols);
    let mut decays = m.rows > 0;
    for k in 0..m.cols {
        let tail = (tail_start..=last).map(|i| m.get(i, k)).max().cloned();
        column_tail_max.push(tail.unwrap_or_else(Rational::zero));
        if m.rows > 0 {
            let a_mid = m.get(mid, k);
            if a_mid.is_positive() && m.get(last, k) >= a_mid {
                decays = false;
            }
        }
    }
    RegularityReport {
        row_sums,
        column_tail_max,
        sup_row_sum,
        row_sum_trend: Trend {
            label: TREND_ONLY,
            holds: row_sum_holds,
        },
        column_decay_trend: Trend {
            label: TREND_ONLY,
            holds: decays,
        },
    }
}

/// `b_{i,k} = |f^{-1}[{k}] ∩ [1, i]| / i` for rows `i = 1..=i_max`, where
/// `f[j-1]` is `f(j)`.
pub fn matrix_from_witness(f: &[u64], i_max: usize) -> Result<MatrixPrefix> {
    if i_max == 0 || f.len() < i_max {
        return Err(Error::Range(format!(
            "witness defined on {} points, {i_max} rows requested",
            f.len()
        )));
    }
    let cols = f[..i_max].iter().max().map_or(0, |&m| m as usize + 1);
    size_limit("matrix entries", i_max.saturating_mul(cols), MAX_MATRIX_ENTRIES)?;
    let mut counts = vec![0i64; cols];
    let mut entries = Vec::with_capacity(i_max * cols);
    for i in 1..=i_max {
        counts[f[i - 1] as usize] += 1;
        let den = i as i64;
        entries.extend(counts.iter().map(|&c| ratio(c, den)));
    }
    MatrixPrefix::new(i_max, cols, 1, entries)
}

/// `g(i) = Σ_n μ_n({i}) / 2^n` for `i < i_max`, with `measures[0]` as `μ_1`.
pub fn summable_from_measures(measures: &[Vec<Rational>], i_max: usize) -> Result<Vec<Rational>> {
    size_limit("summable table", i_max, MAX_PREFIX as usize)?;
    let mut g = vec![Rational::zero(); i_max];
    let mut scale = Rational::one();
    for (n, mu) in measures.iter().enumerate() {
        if let Some(i) = mu.iter().position(Signed::is_negative) {
            return Err(Error::BadWeights(format!("measure {} has negative mass at {i}", n + 1)));
        }
        scale /= int(2);
        for (gi, m) in g.iter_mut().zip(mu) {
            *gi += m * &scale;
        }
    }
    Ok(g)
}

/// `h(n) = Σ_{i ∈ g^{-1}({n})} f(i)`.
pub fn pushforward_weights(f: &[Rational], g: &[u64]) -> Result<Vec<Rational>> {
    if g.len() < f.len() {
        return Err(Error::Range(format!(
            "map defined on {} of {} points",
            g.len(),
            f.len()
        )));
    }
    let len = g[..f.len()].iter().max().map_or(0, |&m| m as usize + 1);
    size_limit("pushforward table", len, MAX_PREFIX as usize)?;
    let mut h = vec![Rational::zero(); len];
    for (w, &target) in f.iter().zip(g) {
        h[target as usize] += w;
    }
    Ok(h)
}

/// `δ(K, F) = min_{i ∈ K} |{F ∈ F : i ∈ F}| / |F|`; `F` must cover exactly `K`.
pub fn covering_delta(k: &IntegerSet, family: &[IntegerSet]) -> Result<Rational> {
    if family.is_empty() {
        return Err(Error::NotACover("empty family".into()));
    }
    let points = k.elements()?;
    if points.is_empty() {
        return Err(Error::NotACover("empty ground set".into()));
    }
    let mut coverage = vec![0i64; points.len()];
    for (j, set) in family.iter().enumerate() {
        for x in set.elements()? {
            match points.binary_search(&x) {
                Ok(ix) => coverage[ix] += 1,
                Err(_) => return Err(Error::NotACover(format!("member {j} contains {x}, outside K"))),
            }
        }
    }
    if let Some(ix) = coverage.iter().position(|&c| c == 0) {
        return Err(Error::NotACover(format!("{} is not covered", points[ix])));
    }
    let min = *coverage.iter().min().expect("nonempty");
    Ok(ratio(min, family.len() as i64))
}
