use std::collections::BTreeMap;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pathlab_core::gallery::{self, GalleryObject};
use pathlab_core::hull::{hull_structured, pattern_hull, pattern_sigma_hull, verify_pattern_witness};
use pathlab_core::json::{self as pj, Object};
use pathlab_core::pathology::{pathology_report, PathologyReport};
use pathlab_core::pattern::PatternPoint;
use pathlab_core::prefix::{self, IntegerSet};
use pathlab_core::rational::{format_rational, Rational};
use pathlab_core::submeasure::min_cover;
use pathlab_core::validate::{validate_pattern, validate_submeasure, ValidationReport};
use pathlab_core::vdw::{self, VTable};
use pathlab_core::{verify_witness, Error, SubsetMask};

mod table;

#[derive(Parser)]
#[command(
    name = "pathlab",
    version,
    about = "Exact hulls and degrees of pathology of submeasures"
)]
struct Cli {
    /// Worker threads for parallel computations (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Check the submeasure axioms
    Validate { input: String },
    /// Nonpathological hull at a set, with a certificate
    Hull(HullArgs),
    /// σ-hull at a set
    SigmaHull(HullArgs),
    /// Degrees of pathology P_fin, P, P_σ
    Pathology {
        input: String,
        /// Include the per-set ratio table
        #[arg(long)]
        ratios: bool,
    },
    /// Named examples
    #[command(subcommand)]
    Gallery(GalleryCommand),
    /// Covering number, hull and covering delta of a covering system
    Cover {
        /// Covering system JSON {"ground": n, "generators": [[...], ...]}
        input: Option<String>,
        /// Use the Mazur system K_n instead of a file
        #[arg(long, conflicts_with = "input")]
        mazur: Option<usize>,
    },
    /// Regular matrix prefixes
    #[command(subcommand)]
    Matrix(MatrixCommand),
    /// Density prefix statistics
    #[command(subcommand)]
    Density(DensityCommand),
    /// Summable weights
    #[command(subcommand)]
    Summable(SummableCommand),
    /// Arithmetic progressions and the van der Waerden submeasure
    #[command(subcommand)]
    Vdw(VdwCommand),
    /// Reproduce the computable rows of the configuration table
    Table2,
}

#[derive(Args)]
struct HullArgs {
    input: String,
    /// Comma-separated indices (default: the whole ground set, or all atoms)
    #[arg(long)]
    set: Option<String>,
    /// For pattern inputs: the point has empty pattern and is nonempty
    #[arg(long)]
    finite_point: bool,
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// List the registry
    List,
    /// Emit an entry as JSON
    Emit {
        name: String,
        /// Parameters as key=value
        #[arg(long = "param", short = 'p')]
        params: Vec<String>,
    },
}

#[derive(Subcommand)]
enum MatrixCommand {
    /// b_{i,k} = |f^{-1}[{k}] ∩ [1,i]| / i from a witness map f(1), f(2), ...
    Witness {
        input: String,
        #[arg(long)]
        rows: usize,
    },
    /// Row sums, column tails and regularity trends
    Check { input: String },
    /// max over rows of Σ_{k∈B} a_{i,k}
    Eval {
        input: String,
        #[arg(long)]
        set: String,
        /// First and last row label, e.g. 1..10
        #[arg(long)]
        rows: String,
    },
}

#[derive(Subcommand)]
enum DensityCommand {
    /// φ_{f,n}(A)
    Prefix(DensityArgs),
    /// max over 1 ≤ m ≤ n of φ_{f,m}(A)
    Sup(DensityArgs),
    /// max over lo ≤ m ≤ n of φ_{f,m}(A)
    Window {
        #[command(flatten)]
        args: DensityArgs,
        #[arg(long)]
        from: u64,
    },
    /// ln|A∩n| / ln n as a rational bracket
    Exp {
        set: String,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Args)]
struct DensityArgs {
    set: String,
    #[arg(long)]
    n: u64,
    /// Weight table f(0), f(1), ... (default f ≡ 1)
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Subcommand)]
enum SummableCommand {
    /// Σ_{i∈A, i<n} f(i)
    Weight {
        weights: String,
        set: String,
        #[arg(long)]
        n: u64,
    },
    /// g(i) = Σ_n μ_n({i}) / 2^n
    FromMeasures {
        measures: String,
        #[arg(long)]
        len: usize,
    },
    /// h(n) = Σ_{g(i)=n} f(i)
    Pushforward { weights: String, map: String },
}

#[derive(Subcommand)]
enum VdwCommand {
    /// Longest arithmetic progression in a set
    LongestAp { set: String },
    /// Does every 2-coloring of [0, L) have a monochromatic n-term AP?
    WCheck { n: usize, length: usize },
    /// φ(A) for a V table
    Phi {
        #[arg(long)]
        vtable: Option<String>,
        #[arg(long)]
        set: String,
    },
    /// The measures ν and μ = ν/2 with their feasibility check
    ScaledMeasure {
        #[arg(long)]
        vtable: Option<String>,
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: usize,
    },
    /// Brute-force checks of the construction constraints of a V table
    CheckVtable {
        #[arg(long)]
        vtable: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Io(m) => write!(f, "io error: {m}"),
            Failure::Core(e @ Error::Schema(_) | e @ Error::Rational(_)) => write!(f, "schema error: {e}"),
            Failure::Core(e @ Error::SizeLimit { .. }) => write!(f, "{e}"),
            Failure::Core(e) => write!(f, "error: {e}"),
        }
    }
}

type Outcome = Result<Report, Failure>;

/// What a verb produces: a JSON document or CSV text, and whether a
/// mathematical check failed.
struct Report {
    body: Body,
    failed: bool,
}

enum Body {
    Json(Value),
    Csv(String),
}

impl Report {
    fn ok(v: Value) -> Self {
        Report {
            body: Body::Json(v),
            failed: false,
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    if path == "-" {
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn parse_indices(s: &str, ground: usize) -> Result<SubsetMask, Failure> {
    let idx = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Failure::Usage(format!("bad index {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SubsetMask::from_indices(ground, idx)?)
}

fn validation_json(r: &ValidationReport) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    v["valid"] = json!(r.is_valid());
    v
}

fn cmd_validate(input: &str) -> Outcome {
    let report = match pj::parse_object(&read_input(input)?)? {
        Object::Finite(f) => validate_submeasure(&f),
        Object::Pattern(p) => validate_pattern(&p),
        Object::Composite(_) => return Err(Failure::Usage("validate takes a single submeasure or pattern".into())),
    };
    Ok(Report {
        failed: !report.is_valid(),
        body: Body::Json(validation_json(&report)),
    })
}

fn cmd_hull(args: &HullArgs, sigma: bool) -> Outcome {
    match pj::parse_object(&read_input(&args.input)?)? {
        Object::Finite(phi) => {
            let set = match &args.set {
                Some(s) => parse_indices(s, phi.ground_size())?,
                None => phi.full_set(),
            };
            let w = hull_structured(&phi, &set)?;
            let verified = verify_witness(&phi, &w, &set);
            let mut v = pj::witness_json(&w);
            v["verified"] = json!(verified);
            if sigma {
                v["note"] = json!("on a finite ground set the σ-hull equals the hull");
            }
            Ok(Report {
                body: Body::Json(v),
                failed: !verified,
            })
        }
        Object::Pattern(p) => {
            let pattern = match &args.set {
                Some(s) => parse_indices(s, p.atoms())?,
                None => SubsetMask::full(p.atoms()),
            };
            let x = if args.finite_point {
                if !pattern.is_empty() {
                    return Err(Failure::Usage("--finite-point needs an empty --set".into()));
                }
                PatternPoint::finite(p.atoms())
            } else if pattern.is_empty() {
                PatternPoint::empty(p.atoms())
            } else {
                PatternPoint::infinite(pattern)
            };
            if sigma {
                return Ok(Report::ok(json!({
                    "point": pj::point_json(&x),
                    "value": pj::extended_json(&pattern_sigma_hull(&p, &x)),
                })));
            }
            let w = pattern_hull(&p, &x)?;
            let verified = verify_pattern_witness(&p, &w, &x);
            let mut v = pj::pattern_witness_json(&w);
            v["point"] = pj::point_json(&x);
            v["verified"] = json!(verified);
            Ok(Report {
                body: Body::Json(v),
                failed: !verified,
            })
        }
        Object::Composite(_) => Err(Failure::Usage("hull takes a single submeasure or pattern".into())),
    }
}

fn ratios_csv(r: &PathologyReport) -> Result<String, Failure> {
    let rows = r
        .ratios
        .as_ref()
        .ok_or_else(|| Failure::Usage("csv output needs --ratios".into()))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(["location", "value", "hull", "sigma_hull", "ratio", "sigma_ratio"])
        .map_err(io_err)?;
    for row in rows {
        let loc = pj::location_json(&row.location).to_string();
        w.write_record([
            loc,
            row.value.to_string(),
            row.hull.to_string(),
            row.sigma_hull.to_string(),
            row.ratio.to_string(),
            row.sigma_ratio.to_string(),
        ])
        .map_err(io_err)?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, Failure> {
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
}

fn cmd_pathology(input: &str, ratios: bool, format: Format) -> Outcome {
    let obj = pj::parse_object(&read_input(input)?)?;
    let want_ratios = ratios || format == Format::Csv;
    let report = pathology_report(&obj.into_composite(), want_ratios)?;
    let failed = report.consistent == Some(false);
    let body = if format == Format::Csv {
        Body::Csv(ratios_csv(&report)?)
    } else {
        Body::Json(pj::report_json(&report))
    };
    Ok(Report { body, failed })
}

fn gallery_params(raw: &[String]) -> Result<BTreeMap<String, String>, Failure> {
    raw.iter()
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Failure::Usage(format!("parameter {p:?} is not key=value")))
        })
        .collect()
}

fn cmd_gallery(cmd: &GalleryCommand) -> Outcome {
    match cmd {
        GalleryCommand::List => {
            let entries: Vec<Value> = gallery::REGISTRY
                .iter()
                .map(|e| json!({"name": e.name, "params": e.params, "description": e.description}))
                .collect();
            Ok(Report::ok(json!({"entries": entries})))
        }
        GalleryCommand::Emit { name, params } => {
            let obj = gallery::build(name, &gallery_params(params)?)?;
            Ok(Report::ok(match obj {
                GalleryObject::Finite(f) if name == "psi" => pj::submeasure_json_with_note(&f, gallery::PSI_NOTE),
                GalleryObject::Finite(f) => pj::submeasure_json(&f),
                GalleryObject::Pattern(p) => pj::pattern_json(&p),
            }))
        }
    }
}

fn cmd_cover(input: Option<&str>, mazur: Option<usize>) -> Outcome {
    let sys = match (input, mazur) {
        (_, Some(n)) => gallery::make_mazur_system(n)?,
        (Some(path), None) => pj::parse_covering_system(&read_input(path)?)?,
        (None, None) => return Err(Failure::Usage("cover needs an input file or --mazur".into())),
    };
    let full = SubsetMask::full(sys.ground_size);
    let number = min_cover(&sys.generators, &full)?;
    let w = pathlab_core::hull::covering_hull_fast(&sys.generators, &full)?;
    let phi = gallery::make_phi_cover(&sys)?;
    let verified = sys.ground_size > 64 || verify_witness(&phi, &w, &full);
    let k = IntegerSet::Explicit((0..sys.ground_size as u64).collect());
    let family: Vec<IntegerSet> = sys
        .generators
        .iter()
        .map(|g| IntegerSet::Explicit(g.iter().map(|i| i as u64).collect()))
        .collect();
    let delta = prefix::covering_delta(&k, &family)?;
    let ratio = pathlab_core::pathology::degree_ratio(&number.into(), &w.value);
    let mut v = json!({
        "ground": sys.ground_size,
        "generators": sys.generators.len(),
        "cover_number": number,
        "hull": pj::witness_json(&w),
        "ratio": pj::extended_json(&ratio),
        "covering_delta": pj::rational_json(&delta),
        "verified": verified,
    });
    if let Some(labels) = &sys.labels {
        v["labels"] = json!(labels);
    }
    Ok(Report {
        body: Body::Json(v),
        failed: !verified,
    })
}

fn regularity_csv(r: &prefix::RegularityReport, row_base: usize) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(["kind", "index", "value"]).map_err(io_err)?;
    for (i, s) in r.row_sums.iter().enumerate() {
        w.write_record(["row_sum", &(i + row_base).to_string(), &format_rational(s)])
            .map_err(io_err)?;
    }
    for (k, s) in r.column_tail_max.iter().enumerate() {
        w.write_record(["column_tail_max", &k.to_string(), &format_rational(s)])
            .map_err(io_err)?;
    }
    finish_csv(w)
}

fn regularity_json(r: &prefix::RegularityReport) -> Value {
    json!({
        "row_sums": pj::rationals_json(&r.row_sums),
        "column_tail_max": pj::rationals_json(&r.column_tail_max),
        "sup_row_sum": pj::rational_json(&r.sup_row_sum),
        "row_sum_trend": {"holds": r.row_sum_trend.holds, "label": r.row_sum_trend.label},
        "column_decay_trend": {"holds": r.column_decay_trend.holds, "label": r.column_decay_trend.label},
    })
}

fn parse_row_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, Failure> {
    let bad = || Failure::Usage(format!("row range {s:?} is not FIRST..LAST"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    Ok(a..=b)
}

fn cmd_matrix(cmd: &MatrixCommand, format: Format) -> Outcome {
    let (m, include_matrix) = match cmd {
        MatrixCommand::Witness { input, rows } => (
            prefix::matrix_from_witness(&pj::parse_u64s(&read_input(input)?)?, *rows)?,
            true,
        ),
        MatrixCommand::Check { input } => (pj::parse_matrix(&read_input(input)?)?, false),
        MatrixCommand::Eval { input, set, rows } => {
            let m = pj::parse_matrix(&read_input(input)?)?;
            let b = pj::parse_integer_set(&read_input(set)?)?;
            let value = prefix::matrix_submeasure_prefix(&m, &b, parse_row_range(rows)?)?;
            return Ok(Report::ok(json!({"value": pj::rational_json(&value)})));
        }
    };
    let r = prefix::check_regular(&m);
    if format == Format::Csv {
        return Ok(Report {
            body: Body::Csv(regularity_csv(&r, m.row_base())?),
            failed: false,
        });
    }
    let mut v = regularity_json(&r);
    if include_matrix {
        v["matrix"] = pj::matrix_json(&m);
    }
    Ok(Report::ok(v))
}

fn weights_or_ones(path: Option<&str>, n: u64) -> Result<Vec<Rational>, Failure> {
    match path {
        Some(p) => Ok(pj::parse_rationals(&read_input(p)?)?),
        None => {
            if n > prefix::MAX_PREFIX {
                return Err(Error::Range(format!("prefix {n} exceeds {}", prefix::MAX_PREFIX)).into());
            }
            Ok(vec![Rational::from_integer(1.into()); n as usize])
        }
    }
}

fn cmd_density(cmd: &DensityCommand) -> Outcome {
    let (args, from) = match cmd {
        DensityCommand::Exp { set, n } => {
            let a = pj::parse_integer_set(&read_input(set)?)?;
            let e = prefix::exp_density_prefix(&a, *n)?;
            let opt = |r: &Option<Rational>| r.as_ref().map_or(Value::Null, pj::rational_json);
            return Ok(Report::ok(json!({
                "count": e.count,
                "n": e.n,
                "lower": opt(&e.lower),
                "upper": opt(&e.upper),
            })));
        }
        DensityCommand::Prefix(a) => (a, None),
        DensityCommand::Sup(a) => (a, Some(1)),
        DensityCommand::Window { args, from } => (args, Some(*from)),
    };
    let a = pj::parse_integer_set(&read_input(&args.set)?)?;
    let f = weights_or_ones(args.weights.as_deref(), args.n)?;
    let (value, label) = match from {
        None => (prefix::density_prefix(&f, &a, args.n)?, "prefix"),
        Some(lo) => (
            prefix::density_limsup_window(&f, &a, lo, args.n)?,
            "maximum over the window; a finite stand-in for sup/limsup",
        ),
    };
    Ok(Report::ok(
        json!({"value": pj::rational_json(&value), "n": args.n, "label": label}),
    ))
}

fn cmd_summable(cmd: &SummableCommand) -> Outcome {
    match cmd {
        SummableCommand::Weight { weights, set, n } => {
            let f = pj::parse_extended_rationals(&read_input(weights)?)?;
            let a = pj::parse_integer_set(&read_input(set)?)?;
            let s = prefix::summable_weight(&f, &a, *n)?;
            Ok(Report::ok(json!({"value": pj::extended_json(&s), "n": n})))
        }
        SummableCommand::FromMeasures { measures, len } => {
            let mus = pj::parse_measures(&read_input(measures)?)?;
            let g = prefix::summable_from_measures(&mus, *len)?;
            Ok(Report::ok(json!({"weights": pj::rationals_json(&g)})))
        }
        SummableCommand::Pushforward { weights, map } => {
            let f = pj::parse_rationals(&read_input(weights)?)?;
            let g = pj::parse_u64s(&read_input(map)?)?;
            let h = prefix::pushforward_weights(&f, &g)?;
            let total_in: Rational = f.iter().sum();
            let total_out: Rational = h.iter().sum();
            Ok(Report {
                failed: total_in != total_out,
                body: Body::Json(json!({
                    "weights": pj::rationals_json(&h),
                    "total": pj::rational_json(&total_out),
                })),
            })
        }
    }
}

fn vtable(path: Option<&str>) -> Result<VTable, Failure> {
    match path {
        Some(p) => Ok(pj::parse_vtable(&read_input(p)?)?),
        None => Ok(VTable::demo()),
    }
}

fn ap_json(r: &vdw::ApRecord) -> Value {
    json!({"start": r.start, "step": r.step, "length": r.length})
}

fn cmd_vdw(cmd: &VdwCommand) -> Outcome {
    match cmd {
        VdwCommand::LongestAp { set } => {
            let (len, w) = vdw::longest_ap(&pj::parse_integer_set(&read_input(set)?)?)?;
            Ok(Report::ok(json!({"length": len, "witness": w.as_ref().map(ap_json)})))
        }
        VdwCommand::WCheck { n, length } => {
            let r = vdw::w_check(*n, *length)?;
            Ok(Report::ok(json!({
                "n": r.n,
                "length": r.length,
                "holds": r.holds,
                "counterexample": r.counterexample,
            })))
        }
        VdwCommand::Phi { vtable: v, set } => {
            let table = vtable(v.as_deref())?;
            let a = pj::parse_integer_set(&read_input(set)?)?;
            let phi = vdw::vdw_phi(&table, &a)?;
            Ok(Report::ok(
                json!({"value": pj::extended_json(&phi), "vtable": table.values()}),
            ))
        }
        VdwCommand::ScaledMeasure { vtable: v, set, n } => {
            let table = vtable(v.as_deref())?;
            let a = pj::parse_integer_set(&read_input(set)?)?;
            let m = vdw::vdw_scaled_measure(&a, *n, &table)?;
            let masses =
                |v: &[(u64, Rational)]| -> Value { v.iter().map(|(i, x)| json!([i, pj::rational_json(x)])).collect() };
            let f = &m.feasibility;
            Ok(Report {
                failed: !f.feasible,
                body: Body::Json(json!({
                    "n": m.n,
                    "progression": ap_json(&m.progression),
                    "nu": masses(&m.nu),
                    "mu": masses(&m.mu),
                    "feasibility": {
                        "exhaustive": f.exhaustive,
                        "subsets_checked": f.subsets_checked,
                        "feasible": f.feasible,
                        "max_nu_ratio": pj::rational_json(&f.max_nu_ratio),
                        "violation": f.violation,
                    },
                })),
            })
        }
        VdwCommand::CheckVtable { vtable: v } => {
            let table = vtable(v.as_deref())?;
            let c = vdw::check_vtable(&table)?;
            let indices: Vec<Value> = c
                .indices
                .iter()
                .map(|i| json!({"n": i.n, "value": i.value, "w_bound": i.w_bound, "density": i.density}))
                .collect();
            Ok(Report {
                failed: !c.passes,
                body: Body::Json(json!({"vtable": table.values(), "indices": indices, "passes": c.passes})),
            })
        }
    }
}

fn emit(report: &Report, format: Format, output: Option<&PathBuf>) -> Result<(), Failure> {
    let text = match (&report.body, format) {
        (Body::Csv(s), _) => s.clone(),
        (Body::Json(v), Format::Pretty) => format!("{}\n", serde_json::to_string_pretty(v).expect("json")),
        (Body::Json(v), _) => format!("{v}\n"),
    };
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn run(cli: &Cli) -> Outcome {
    let csv_ok = matches!(
        cli.command,
        Command::Pathology { .. }
            | Command::Matrix(MatrixCommand::Witness { .. } | MatrixCommand::Check { .. })
            | Command::Table2
    );
    if cli.format == Format::Csv && !csv_ok {
        return Err(Failure::Usage(
            "csv output is only available for pathology, matrix witness/check and table2".into(),
        ));
    }
    match &cli.command {
        Command::Validate { input } => cmd_validate(input),
        Command::Hull(a) => cmd_hull(a, false),
        Command::SigmaHull(a) => cmd_hull(a, true),
        Command::Pathology { input, ratios } => cmd_pathology(input, *ratios, cli.format),
        Command::Gallery(g) => cmd_gallery(g),
        Command::Cover { input, mazur } => cmd_cover(input.as_deref(), *mazur),
        Command::Matrix(m) => cmd_matrix(m, cli.format),
        Command::Density(d) => cmd_density(d),
        Command::Summable(s) => cmd_summable(s),
        Command::Vdw(v) => cmd_vdw(v),
        Command::Table2 => table::run(cli.format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("usage error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = run(&cli).and_then(|r| emit(&r, cli.format, cli.output.as_ref()).map(|_| r.failed));
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(1)
        }
    }
}
