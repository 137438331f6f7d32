//! JSON documents for submeasures, pattern submeasures, composites, integer
//! sets, matrices and the reports computed from them.
//!
//! Rationals are strings in canonical form (`"3/2"`, `"-1/4"`, `"2"`,
//! `"inf"`); plain JSON integers are also accepted on input. Subsets are
//! sorted index arrays. Parsers return errors, never panic, on any input.

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::gallery::CoveringSystem;
use crate::hull::{HullWitness, PatternConstraint, PatternWitness};
use crate::mask::{SubsetMask, MAX_GROUND};
use crate::pathology::{Composite, Degree, Location, PathologyReport, RatioRow};
use crate::pattern::{PatternPoint, PatternSubmeasure, MAX_ATOMS};
use crate::prefix::{IntegerSet, MatrixPrefix, Predicate};
use crate::rational::{format_rational, ExtendedRational, Rational};
use crate::submeasure::{Aggregator, FiniteSubmeasure, Repr};
use crate::vdw::VTable;

/// Documents larger than this are rejected before parsing.
pub const MAX_DOCUMENT: usize = 64 << 20;

#[derive(Deserialize)]
#[serde(untagged)]
enum RatLit {
    Text(String),
    Int(i64),
}

impl RatLit {
    fn extended(&self) -> Result<ExtendedRational> {
        match self {
            RatLit::Text(s) => Ok(s.parse()?),
            RatLit::Int(n) => Ok(ExtendedRational::from_int(*n)),
        }
    }

    fn finite(&self, what: &str) -> Result<Rational> {
        self.extended()?
            .into_finite()
            .ok_or_else(|| Error::Schema(format!("{what} must be finite")))
    }
}

fn extended_all(v: &[RatLit]) -> Result<Vec<ExtendedRational>> {
    v.iter().map(RatLit::extended).collect()
}

fn finite_all(v: &[RatLit], what: &str) -> Result<Vec<Rational>> {
    v.iter().map(|r| r.finite(what)).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubmeasureDoc {
    ground: usize,
    repr: ReprDoc,
    #[serde(default)]
    #[allow(dead_code)]
    note: Option<String>,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum ReprDoc {
    Table {
        values: Vec<RatLit>,
    },
    Cover {
        generators: Vec<Vec<usize>>,
    },
    Weights {
        weights: Vec<RatLit>,
    },
    OplusMax {
        left: Box<SubmeasureDoc>,
        right: Box<SubmeasureDoc>,
    },
    OplusSum {
        left: Box<SubmeasureDoc>,
        right: Box<SubmeasureDoc>,
    },
    Scale {
        factor: RatLit,
        inner: Box<SubmeasureDoc>,
    },
    MinConst {
        cap: RatLit,
        inner: Box<SubmeasureDoc>,
    },
    PointwiseMax {
        left: Box<SubmeasureDoc>,
        right: Box<SubmeasureDoc>,
    },
    Block {
        aggregator: String,
        #[serde(default)]
        weights: Option<Vec<RatLit>>,
        blocks: Vec<SubmeasureDoc>,
    },
}

fn check_ground(n: usize) -> Result<()> {
    if n > MAX_GROUND {
        return Err(Error::SizeLimit {
            what: "ground size",
            actual: n,
            limit: MAX_GROUND,
        });
    }
    Ok(())
}

fn build_submeasure(doc: &SubmeasureDoc) -> Result<FiniteSubmeasure> {
    check_ground(doc.ground)?;
    let phi = match &doc.repr {
        ReprDoc::Table { values } => FiniteSubmeasure::table(doc.ground, extended_all(values)?)?,
        ReprDoc::Cover { generators } => {
            let gens = generators
                .iter()
                .map(|g| SubsetMask::from_indices(doc.ground, g.iter().copied()))
                .collect::<Result<Vec<_>>>()?;
            FiniteSubmeasure::covering(doc.ground, gens)?
        }
        ReprDoc::Weights { weights } => FiniteSubmeasure::weighted(extended_all(weights)?)?,
        ReprDoc::OplusMax { left, right } => {
            FiniteSubmeasure::oplus_max(build_submeasure(left)?, build_submeasure(right)?)?
        }
        ReprDoc::OplusSum { left, right } => {
            FiniteSubmeasure::oplus_sum(build_submeasure(left)?, build_submeasure(right)?)?
        }
        ReprDoc::Scale { factor, inner } => {
            FiniteSubmeasure::scale(factor.finite("scale factor")?, build_submeasure(inner)?)?
        }
        ReprDoc::MinConst { cap, inner } => FiniteSubmeasure::min_const(cap.extended()?, build_submeasure(inner)?)?,
        ReprDoc::PointwiseMax { left, right } => {
            FiniteSubmeasure::pointwise_max(build_submeasure(left)?, build_submeasure(right)?)?
        }
        ReprDoc::Block {
            aggregator,
            weights,
            blocks,
        } => {
            let agg = match (aggregator.as_str(), weights) {
                ("sum", None) => Aggregator::Sum,
                ("sup", None) => Aggregator::Sup,
                ("weighted-sup", Some(w)) => Aggregator::WeightedSup(finite_all(w, "block weight")?),
                ("weighted-sup", None) => return Err(Error::Schema("weighted-sup needs weights".into())),
                ("sum" | "sup", Some(_)) => {
                    return Err(Error::Schema(format!("aggregator {aggregator} takes no weights")))
                }
                (other, _) => return Err(Error::Schema(format!("unknown aggregator {other:?}"))),
            };
            let parts = blocks.iter().map(build_submeasure).collect::<Result<Vec<_>>>()?;
            FiniteSubmeasure::block(parts, agg)?
        }
    };
    if phi.ground_size() != doc.ground {
        return Err(Error::Schema(format!(
            "declared ground {} but the representation has {}",
            doc.ground,
            phi.ground_size()
        )));
    }
    Ok(phi)
}

fn from_str_checked<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    if s.len() > MAX_DOCUMENT {
        return Err(Error::SizeLimit {
            what: "document bytes",
            actual: s.len(),
            limit: MAX_DOCUMENT,
        });
    }
    serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))
}

pub fn parse_submeasure(s: &str) -> Result<FiniteSubmeasure> {
    build_submeasure(&from_str_checked(s)?)
}

fn rat(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn ext(r: &ExtendedRational) -> Value {
    Value::String(r.to_string())
}

fn ext_list(v: &[ExtendedRational]) -> Value {
    Value::Array(v.iter().map(ext).collect())
}

fn mask(m: &SubsetMask) -> Value {
    json!(m.to_vec())
}

fn repr_json(phi: &FiniteSubmeasure) -> Value {
    match phi.repr() {
        Repr::Table(v) => json!({"type": "table", "values": ext_list(v)}),
        Repr::Covering(g) => json!({"type": "cover", "generators": g.iter().map(mask).collect::<Vec<_>>()}),
        Repr::WeightedMeasure(w) => json!({"type": "weights", "weights": ext_list(w)}),
        Repr::OplusMax(l, r) => json!({"type": "oplus-max", "left": submeasure_json(l), "right": submeasure_json(r)}),
        Repr::OplusSum(l, r) => json!({"type": "oplus-sum", "left": submeasure_json(l), "right": submeasure_json(r)}),
        Repr::Scale(c, inner) => json!({"type": "scale", "factor": rat(c), "inner": submeasure_json(inner)}),
        Repr::MinConst(c, inner) => json!({"type": "min-const", "cap": ext(c), "inner": submeasure_json(inner)}),
        Repr::PointwiseMax(l, r) => {
            json!({"type": "pointwise-max", "left": submeasure_json(l), "right": submeasure_json(r)})
        }
        Repr::Block { blocks, aggregator, .. } => {
            let mut m = Map::new();
            m.insert("type".into(), json!("block"));
            let name = match aggregator {
                Aggregator::Sum => "sum",
                Aggregator::Sup => "sup",
                Aggregator::WeightedSup(w) => {
                    m.insert("weights".into(), Value::Array(w.iter().map(rat).collect()));
                    "weighted-sup"
                }
            };
            m.insert("aggregator".into(), json!(name));
            m.insert(
                "blocks".into(),
                Value::Array(blocks.iter().map(submeasure_json).collect()),
            );
            Value::Object(m)
        }
    }
}

pub fn submeasure_json(phi: &FiniteSubmeasure) -> Value {
    json!({"ground": phi.ground_size(), "repr": repr_json(phi)})
}

/// Submeasure document with a free-text `note`.
pub fn submeasure_json_with_note(phi: &FiniteSubmeasure, note: &str) -> Value {
    let mut v = submeasure_json(phi);
    v["note"] = json!(note);
    v
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternDoc {
    atoms: usize,
    theta: Vec<RatLit>,
    floor: RatLit,
}

fn build_pattern(doc: &PatternDoc) -> Result<PatternSubmeasure> {
    if doc.atoms > MAX_ATOMS {
        return Err(Error::SizeLimit {
            what: "pattern atoms",
            actual: doc.atoms,
            limit: MAX_ATOMS,
        });
    }
    PatternSubmeasure::new(doc.atoms, extended_all(&doc.theta)?, doc.floor.extended()?)
}

pub fn parse_pattern(s: &str) -> Result<PatternSubmeasure> {
    build_pattern(&from_str_checked(s)?)
}

pub fn pattern_json(p: &PatternSubmeasure) -> Value {
    json!({"atoms": p.atoms(), "theta": ext_list(p.theta_table()), "floor": ext(p.floor())})
}

/// Anything the `pathology` verb accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Finite(FiniteSubmeasure),
    Pattern(PatternSubmeasure),
    Composite(Composite),
}

impl Object {
    pub fn into_composite(self) -> Composite {
        match self {
            Object::Finite(f) => Composite::Finite(f),
            Object::Pattern(p) => Composite::Pattern(p),
            Object::Composite(c) => c,
        }
    }
}

fn build_object(v: Value) -> Result<Object> {
    let Value::Object(map) = &v else {
        return Err(Error::Schema("expected a JSON object".into()));
    };
    if map.contains_key("oplus-max") {
        if map.len() != 1 {
            return Err(Error::Schema("a composite has only the oplus-max key".into()));
        }
        let Some(Value::Array(items)) = map.get("oplus-max").cloned() else {
            return Err(Error::Schema("oplus-max must be an array".into()));
        };
        if items.len() < 2 {
            return Err(Error::Schema("oplus-max needs at least two summands".into()));
        }
        let children = items
            .into_iter()
            .map(|i| build_object(i).map(Object::into_composite))
            .collect::<Result<Vec<_>>>()?;
        Ok(Object::Composite(Composite::OplusMax(children)))
    } else if map.contains_key("atoms") {
        Ok(Object::Pattern(build_pattern(&from_value(v)?)?))
    } else if map.contains_key("ground") {
        Ok(Object::Finite(build_submeasure(&from_value(v)?)?))
    } else {
        Err(Error::Schema(
            "expected a submeasure, pattern or oplus-max document".into(),
        ))
    }
}

/// A finite submeasure, a pattern submeasure, or `{"oplus-max": [...]}`.
pub fn parse_object(s: &str) -> Result<Object> {
    build_object(from_str_checked(s)?)
}

pub fn composite_json(c: &Composite) -> Value {
    match c {
        Composite::Finite(f) => submeasure_json(f),
        Composite::Pattern(p) => pattern_json(p),
        Composite::OplusMax(children) => json!({"oplus-max": children.iter().map(composite_json).collect::<Vec<_>>()}),
    }
}

pub fn object_json(o: &Object) -> Value {
    match o {
        Object::Finite(f) => submeasure_json(f),
        Object::Pattern(p) => pattern_json(p),
        Object::Composite(c) => composite_json(c),
    }
}

pub fn witness_json(w: &HullWitness) -> Value {
    json!({
        "value": ext(&w.value),
        "measure": ext_list(&w.measure),
        "dual": w.dual.iter().map(|(m, y)| json!([mask(m), rat(y)])).collect::<Vec<_>>(),
        "unbounded": w.unbounded,
    })
}

pub fn pattern_witness_json(w: &PatternWitness) -> Value {
    let dual: Vec<Value> = w
        .dual
        .iter()
        .map(|(c, y)| match c {
            PatternConstraint::Pattern(m) => json!([mask(m), rat(y)]),
            PatternConstraint::Floor => json!(["floor", rat(y)]),
        })
        .collect();
    json!({
        "value": ext(&w.value),
        "atom_masses": ext_list(&w.atom_masses),
        "point_mass": ext(&w.point_mass),
        "dual": dual,
        "unbounded": w.unbounded,
    })
}

pub fn point_json(x: &PatternPoint) -> Value {
    json!({"pattern": mask(&x.pattern()), "nonempty": x.is_nonempty()})
}

pub fn location_json(l: &Location) -> Value {
    match l {
        Location::Set(m) => json!({"set": mask(m)}),
        Location::Point(x) => json!({"point": point_json(x)}),
        Location::Component(i, inner) => json!({"component": i, "location": location_json(inner)}),
    }
}

fn degree_json(name: &str, d: &Degree) -> Value {
    json!({"degree": name, "location": location_json(&d.argmax)})
}

fn ratio_row_json(r: &RatioRow) -> Value {
    json!({
        "location": location_json(&r.location),
        "value": ext(&r.value),
        "hull": ext(&r.hull),
        "sigma_hull": ext(&r.sigma_hull),
        "ratio": ext(&r.ratio),
        "sigma_ratio": ext(&r.sigma_ratio),
    })
}

pub fn report_json(r: &PathologyReport) -> Value {
    let mut v = json!({
        "p_fin": ext(&r.p_fin.value),
        "p": ext(&r.p.value),
        "p_sigma": ext(&r.p_sigma.value),
        "argmax": [degree_json("p_fin", &r.p_fin), degree_json("p", &r.p), degree_json("p_sigma", &r.p_sigma)],
    });
    if let Some(rows) = &r.ratios {
        v["ratios"] = Value::Array(rows.iter().map(ratio_row_json).collect());
    }
    if let Some(c) = r.consistent {
        v["consistent"] = json!(c);
    }
    v
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntegerSetDoc {
    List(Vec<u64>),
    Predicate { predicate: String, bound: u64 },
}

fn build_integer_set(doc: IntegerSetDoc) -> Result<IntegerSet> {
    match doc {
        IntegerSetDoc::List(v) => IntegerSet::explicit(v),
        IntegerSetDoc::Predicate { predicate, bound } => IntegerSet::predicate(predicate.parse::<Predicate>()?, bound),
    }
}

/// A sorted array, or `{"predicate": "evens"|"squares"|"multiples:k"|"all", "bound": n}`.
pub fn parse_integer_set(s: &str) -> Result<IntegerSet> {
    build_integer_set(from_str_checked(s)?)
}

/// A JSON array of integer sets.
pub fn parse_integer_sets(s: &str) -> Result<Vec<IntegerSet>> {
    let docs: Vec<IntegerSetDoc> = from_str_checked(s)?;
    docs.into_iter().map(build_integer_set).collect()
}

pub fn integer_set_json(a: &IntegerSet) -> Value {
    match a {
        IntegerSet::Explicit(v) => json!(v),
        IntegerSet::Predicate { predicate, bound } => json!({"predicate": predicate.name(), "bound": bound}),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixDoc {
    Rows(Vec<Vec<RatLit>>),
    Labelled { row_base: usize, rows: Vec<Vec<RatLit>> },
}

/// Row-major rows of rationals, optionally `{"row_base": b, "rows": [...]}`.
pub fn parse_matrix(s: &str) -> Result<MatrixPrefix> {
    let (row_base, rows) = match from_str_checked::<MatrixDoc>(s)? {
        MatrixDoc::Rows(r) => (0, r),
        MatrixDoc::Labelled { row_base, rows } => (row_base, rows),
    };
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(Error::Schema(format!(
            "row {i} has {} entries, expected {cols}",
            rows[i].len()
        )));
    }
    let mut entries = Vec::with_capacity(rows.len() * cols);
    for r in &rows {
        entries.extend(finite_all(r, "matrix entry")?);
    }
    MatrixPrefix::new(rows.len(), cols, row_base, entries)
}

pub fn matrix_json(m: &MatrixPrefix) -> Value {
    let rows: Vec<Value> = m
        .row_labels()
        .map(|i| Value::Array(m.row(i).iter().map(rat).collect()))
        .collect();
    json!({"row_base": m.row_base(), "rows": rows})
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDoc {
    ground: usize,
    generators: Vec<Vec<usize>>,
}

/// `{"ground": n, "generators": [[...], ...]}`.
pub fn parse_covering_system(s: &str) -> Result<CoveringSystem> {
    let doc: SystemDoc = from_str_checked(s)?;
    check_ground(doc.ground)?;
    let gens = doc
        .generators
        .iter()
        .map(|g| SubsetMask::from_indices(doc.ground, g.iter().copied()))
        .collect::<Result<Vec<_>>>()?;
    CoveringSystem::new(doc.ground, gens, None)
}

/// Array of rationals (finite).
pub fn parse_rationals(s: &str) -> Result<Vec<Rational>> {
    let v: Vec<RatLit> = from_str_checked(s)?;
    finite_all(&v, "weight")
}

/// Array of rationals, `"inf"` allowed.
pub fn parse_extended_rationals(s: &str) -> Result<Vec<ExtendedRational>> {
    let v: Vec<RatLit> = from_str_checked(s)?;
    extended_all(&v)
}

/// Array of arrays of rationals.
pub fn parse_measures(s: &str) -> Result<Vec<Vec<Rational>>> {
    let v: Vec<Vec<RatLit>> = from_str_checked(s)?;
    v.iter().map(|m| finite_all(m, "point mass")).collect()
}

/// Array of nonnegative integers.
pub fn parse_u64s(s: &str) -> Result<Vec<u64>> {
    from_str_checked(s)
}

pub fn parse_vtable(s: &str) -> Result<VTable> {
    VTable::new(from_str_checked(s)?)
}

pub fn rationals_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn extended_json(v: &ExtendedRational) -> Value {
    ext(v)
}

pub fn rational_json(v: &Rational) -> Value {
    rat(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn submeasure_round_trip() {
        let objects = [
            gallery::make_tau(),
            gallery::make_sigma_measure(),
            gallery::make_phi_cover(&gallery::make_mazur_system(2).unwrap()).unwrap(),
            gallery::make_psi(gallery::PsiVariant::WeightedSup, 2, None).unwrap(),
            FiniteSubmeasure::min_const(
                ExtendedRational::from_int(1),
                FiniteSubmeasure::oplus_sum(gallery::make_tau(), gallery::make_tau()).unwrap(),
            )
            .unwrap(),
            FiniteSubmeasure::pointwise_max(gallery::make_tau(), gallery::make_sigma_measure()).unwrap(),
        ];
        for phi in objects {
            let text = submeasure_json(&phi).to_string();
            assert_eq!(parse_submeasure(&text).unwrap(), phi, "{text}");
        }
    }

    #[test]
    fn pattern_round_trip() {
        for p in [gallery::make_eta(), gallery::make_tau3_inf()] {
            let text = pattern_json(&p).to_string();
            assert_eq!(parse_pattern(&text).unwrap(), p);
            assert_eq!(parse_object(&text).unwrap(), Object::Pattern(p));
        }
        let row = gallery::make_table2_row("eta⊕tau3").unwrap();
        let text = composite_json(&row).to_string();
        assert_eq!(parse_object(&text).unwrap(), Object::Composite(row));
    }

    #[test]
    fn schema_errors() {
        for bad in [
            "",
            "[]",
            "{\"ground\": 2}",
            "{\"ground\": 2, \"repr\": {\"type\": \"table\", \"values\": [\"0\"]}}",
            "{\"ground\": 1, \"repr\": {\"type\": \"table\", \"values\": [\"0\", \"1/0\"]}}",
            "{\"ground\": 3, \"repr\": {\"type\": \"weights\", \"weights\": [\"1\"]}}",
            "{\"ground\": 1000000, \"repr\": {\"type\": \"weights\", \"weights\": []}}",
            "{\"ground\": 2, \"repr\": {\"type\": \"cover\", \"generators\": [[0, 5]]}}",
            "{\"ground\": 1, \"repr\": {\"type\": \"block\", \"aggregator\": \"avg\", \"blocks\": []}}",
            "{\"ground\": 1, \"repr\": {\"type\": \"table\", \"values\": [\"0\", \"1\"]}, \"extra\": 1}",
            "{\"atoms\": 40, \"theta\": [], \"floor\": \"0\"}",
            "{\"oplus-max\": []}",
        ] {
            assert!(parse_object(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn integers_accepted() {
        let phi = parse_submeasure("{\"ground\": 1, \"repr\": {\"type\": \"table\", \"values\": [0, 1]}}").unwrap();
        assert_eq!(phi.eval(&SubsetMask::full(1)).unwrap(), ExtendedRational::one());
    }

    #[test]
    fn integer_sets_and_matrices() {
        assert_eq!(
            parse_integer_set("[1, 4, 9]").unwrap(),
            IntegerSet::Explicit(vec![1, 4, 9])
        );
        assert!(parse_integer_set("[4, 1]").is_err());
        let p = parse_integer_set("{\"predicate\": \"multiples:3\", \"bound\": 30}").unwrap();
        assert_eq!(integer_set_json(&p), json!({"predicate": "multiples:3", "bound": 30}));
        let m = parse_matrix("[[\"1/2\", \"1/2\"], [\"1\", \"0\"]]").unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(parse_matrix(&matrix_json(&m).to_string()).unwrap(), m);
        assert!(parse_matrix("[[\"1\"], [\"1\", \"2\"]]").is_err());
        assert!(parse_matrix("[[\"-1\"]]").is_err());
        assert!(parse_vtable("[1, 2, 4]").is_ok());
        assert!(parse_vtable("[2, 3]").is_err());
        assert_eq!(
            parse_covering_system("{\"ground\": 2, \"generators\": [[0], [1]]}")
                .unwrap()
                .generators
                .len(),
            2
        );
        assert!(parse_covering_system("{\"ground\": 3, \"generators\": [[0], [1]]}").is_err());
    }

    #[test]
    fn witness_shape() {
        let tau = gallery::make_tau();
        let w = crate::hull::hull(&tau, &tau.full_set()).unwrap();
        let v = witness_json(&w);
        assert_eq!(v["value"], "3/2");
        assert_eq!(v["measure"], json!(["1/2", "1/2", "1/2"]));
        assert_eq!(v["unbounded"], false);
    }
}
