//! The configuration table of `(P_fin, P, P_σ)`.

use serde_json::{json, Value};

use pathlab_core::gallery::{make_table2_row, table2_rows};
use pathlab_core::pathology::pathology_report;
use pathlab_core::ExtendedRational;

use crate::{finish_csv, Body, Failure, Format, Outcome, Report};

/// Rows that need a non-constructive ingredient.
const UNSUPPORTED: &[(&str, &str)] = &[
    ("δ+χ", "χ is a non-constructive submeasure; P(δ+χ) is an open question"),
    ("δ_ℐ^∞", "δ_ℐ^∞ for a general ideal ℐ has no finite description"),
];

struct Row {
    id: &'static str,
    computed: [ExtendedRational; 3],
    expected: [ExtendedRational; 3],
}

fn compute() -> Result<Vec<Row>, Failure> {
    table2_rows()
        .into_iter()
        .map(|(id, expected)| {
            let r = pathology_report(&make_table2_row(id)?, false)?;
            let computed = [r.p_fin.value, r.p.value, r.p_sigma.value];
            Ok(Row { id, computed, expected })
        })
        .collect()
}

pub(crate) fn run(format: Format) -> Outcome {
    let rows = compute()?;
    let failed = rows.iter().any(|r| r.computed != r.expected);
    let unsupported_reasons = UNSUPPORTED.iter().map(|(id, reason)| {
        debug_assert!(make_table2_row(id).is_err());
        (id, reason.to_string())
    });
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io_err = |e: csv::Error| Failure::Io(e.to_string());
        w.write_record(["id", "p_fin", "p", "p_sigma", "status"])
            .map_err(io_err)?;
        for r in &rows {
            let status = if r.computed == r.expected { "match" } else { "mismatch" };
            let [a, b, c] = r.computed.each_ref().map(ToString::to_string);
            w.write_record([r.id, &a, &b, &c, status]).map_err(io_err)?;
        }
        for (id, reason) in unsupported_reasons {
            w.write_record([*id, "", "", "", &format!("unsupported: {reason}")])
                .map_err(io_err)?;
        }
        return Ok(Report {
            body: Body::Csv(finish_csv(w)?),
            failed,
        });
    }
    let triple = |t: &[ExtendedRational; 3]| json!(t.each_ref().map(ToString::to_string));
    let supported: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "computed": triple(&r.computed),
                "expected": triple(&r.expected),
                "match": r.computed == r.expected,
            })
        })
        .collect();
    let unsupported: Vec<Value> = unsupported_reasons
        .map(|(id, reason)| json!({"id": id, "reason": reason}))
        .collect();
    Ok(Report {
        body: Body::Json(json!({"rows": supported, "unsupported": unsupported})),
        failed,
    })
}
