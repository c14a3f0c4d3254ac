use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::Serialize;
use serde_json::{json, Value};

use recform_core::algebra::{superscript, Rat};
use recform_core::factorization::{decompose_form, Decomposition, RootValue};
use recform_core::form_builder::{build_form, cassini_form, FormPackage, FormPackageRecord};
use recform_core::verify::{verify_identity, verify_identity_parallel, FormSide};

use crate::error::CliError;
use crate::problem::{Mode, Problem, EXAMPLES};

/// Output of one command: the text report, its structured mirror, and
/// whether the command certified what it checked.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub certified: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self {
            text,
            json,
            certified: true,
        }
    }
}

/// `A..B`, inclusive; accepts U+2212 as a minus sign.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, CliError> {
    let s = s.replace('\u{2212}', "-");
    let bad = || CliError::Input(format!("invalid range {s:?}, expected A..B"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(CliError::Input(format!("empty range {a}..{b}")));
    }
    Ok(a..=b)
}

fn package(problem: &Problem) -> Result<FormPackage, CliError> {
    Ok(match (&problem.mode, &problem.seed) {
        (Mode::Cassini, Some(seed)) => cassini_form(seed)?,
        _ => build_form(&problem.family)?,
    })
}

fn power_base(r: &Rat) -> String {
    if r.is_integer() && *r >= Rat::from_integer(0.into()) {
        r.to_string()
    } else {
        format!("({r})")
    }
}

/// `Δ^k·δ^n` written as `c·bⁿ`.
pub fn rhs_text(pkg: &FormPackage) -> String {
    format!("{}·{}ⁿ", pkg.tilde_scale(), power_base(&pkg.base))
}

#[derive(Serialize)]
struct FormJson {
    relation: String,
    #[serde(flatten)]
    package: FormPackageRecord,
    rhs: String,
    identity: String,
}

pub fn form(problem: &Problem, dense: bool) -> Result<Report, CliError> {
    let pkg = package(problem)?;
    let tilde = pkg.form_f_tilde.render(dense);
    let rhs = rhs_text(&pkg);
    let identity = format!("{tilde} = {rhs}");
    let mut text = String::new();
    writeln!(text, "relation: {}", problem.family.relation()).unwrap();
    writeln!(text, "F̃ = {tilde}").unwrap();
    writeln!(text, "F = {}", pkg.form_f.render(dense)).unwrap();
    writeln!(text, "Δ = {}", pkg.delta).unwrap();
    writeln!(text, "δ = {}", pkg.base).unwrap();
    writeln!(text, "rhs = {rhs}").unwrap();
    writeln!(text, "identity: F̃(x̄) = Δ{}·δⁿ", superscript_k(pkg.arity)).unwrap();
    writeln!(text, "{identity}").unwrap();
    let json = serde_json::to_value(FormJson {
        relation: problem.family.relation().to_string(),
        package: pkg.to_record(dense),
        rhs,
        identity,
    })
    .expect("serializable");
    Ok(Report::ok(text, json))
}

fn superscript_k(k: usize) -> String {
    match k {
        1 => "¹".to_string(),
        k => superscript(k as u32),
    }
}

fn root_text(value: &RootValue) -> String {
    match value {
        RootValue::Exact(r) => format!("{r} (exact)"),
        RootValue::Approx(c) => format!("{c} (±{:.1e})", c.error_bound),
    }
}

#[derive(Serialize)]
struct FactorJson<'a> {
    #[serde(flatten)]
    decomposition: &'a Decomposition,
    exact: bool,
    #[serde(with = "recform_core::algebra::rat_serde")]
    scale: Rat,
    product: String,
    summary: String,
}

pub fn factor(problem: &Problem, precision: f64) -> Result<Report, CliError> {
    let pkg = package(problem)?;
    let d = decompose_form(&problem.family, precision)?;
    let product = d.render();
    let exact = d.is_exact();
    let tag = if exact { "exact" } else { "approximate" };
    let summary = format!("{product}, {tag}, residual {}", residual_text(d.residual));
    let mut text = String::new();
    writeln!(text, "roots:").unwrap();
    for f in &d.factors {
        writeln!(
            text,
            "  {}, multiplicity {}",
            root_text(&f.source_root.value),
            f.multiplicity
        )
        .unwrap();
    }
    writeln!(text, "factors:").unwrap();
    for f in &d.factors {
        let tag = if f.coefficients.is_exact() {
            "exact"
        } else {
            "approximate"
        };
        writeln!(text, "  {}  [{tag}]", f.render()).unwrap();
    }
    writeln!(text, "F = {product}").unwrap();
    writeln!(text, "F̃ = {} · F", pkg.tilde_scale()).unwrap();
    writeln!(text, "{summary}").unwrap();
    let json = serde_json::to_value(FactorJson {
        decomposition: &d,
        exact,
        scale: pkg.tilde_scale(),
        product,
        summary,
    })
    .expect("serializable");
    Ok(Report::ok(text, json))
}

fn residual_text(r: f64) -> String {
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r:.1e}")
    }
}

pub fn verify(
    problem: &Problem,
    range: RangeInclusive<i64>,
    workers: Option<usize>,
) -> Result<Report, CliError> {
    let pkg = package(problem)?;
    let report = match workers {
        Some(w) if w > 1 => verify_identity_parallel(&problem.family, &pkg, range, w)?,
        _ => verify_identity(&problem.family, &pkg, range)?,
    };
    let failed: BTreeSet<i64> = report.failures.iter().map(|f| f.n).collect();
    let passed = report.checked - failed.len() as u64;
    let status = if report.passed() { "OK" } else { "FAILED" };
    let summary = format!("{passed}/{} {status}", report.checked);
    let mut text = String::new();
    writeln!(text, "identity: {} = {}", pkg.form_f_tilde, rhs_text(&pkg)).unwrap();
    for f in &report.failures {
        let side = match f.side {
            FormSide::Normalized => "F",
            FormSide::Scaled => "F̃",
        };
        writeln!(
            text,
            "  n = {}: {side} gives {}, expected {}",
            f.n, f.lhs, f.rhs
        )
        .unwrap();
    }
    writeln!(text, "n = {}..{}: {summary}", report.from, report.to).unwrap();
    let mut json = serde_json::to_value(&report).expect("serializable");
    json["summary"] = json!(summary);
    json["ok"] = json!(report.passed());
    Ok(Report {
        text,
        json,
        certified: report.passed(),
    })
}

pub fn eval(
    problem: &Problem,
    seq: Option<usize>,
    range: RangeInclusive<i64>,
) -> Result<Report, CliError> {
    let all = problem.listed_sequences();
    let chosen: Vec<(usize, _)> = match seq {
        Some(i) if i >= 1 && i <= all.len() => vec![(i, all[i - 1])],
        Some(i) => {
            return Err(CliError::Input(format!(
                "--seq {i} is out of range 1..{}",
                all.len()
            )))
        }
        None => all
            .into_iter()
            .enumerate()
            .map(|(i, s)| (i + 1, s))
            .collect(),
    };
    let rows: Vec<(i64, Vec<String>)> = range
        .map(|n| {
            (
                n,
                chosen.iter().map(|(_, s)| s.eval(n).to_string()).collect(),
            )
        })
        .collect();
    let mut header = vec!["n".to_string()];
    header.extend(chosen.iter().map(|(i, _)| format!("G{i}")));
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for (n, vals) in &rows {
        widths[0] = widths[0].max(n.to_string().len());
        for (w, v) in widths[1..].iter_mut().zip(vals) {
            *w = (*w).max(v.len());
        }
    }
    let line = |cells: Vec<String>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut text = line(header) + "\n";
    for (n, vals) in &rows {
        let mut cells = vec![n.to_string()];
        cells.extend(vals.iter().cloned());
        text.push_str(&line(cells));
        text.push('\n');
    }
    let json = json!({
        "sequences": chosen.iter().map(|(i, _)| i).collect::<Vec<_>>(),
        "rows": rows
            .iter()
            .map(|(n, vals)| json!({"n": n, "values": vals}))
            .collect::<Vec<_>>(),
    });
    Ok(Report::ok(text, json))
}

pub fn examples(name: Option<&str>, dense: bool) -> Result<Report, CliError> {
    let Some(name) = name else {
        let names: Vec<&str> = EXAMPLES.iter().map(|(n, _)| *n).collect();
        return Ok(Report::ok(names.join("\n") + "\n", json!(names)));
    };
    let src = crate::problem::example(name).ok_or_else(|| {
        CliError::Input(format!(
            "unknown example {name:?}; run `recform examples` for the list"
        ))
    })?;
    let problem = Problem::parse(src)?;
    let form = form(&problem, dense)?;
    let text = format!("example: {name}\n{}\n{}", src.trim_end(), form.text);
    let problem_json: Value = serde_json::from_str(src).expect("bundled JSON");
    Ok(Report::ok(
        text,
        json!({"name": name, "problem": problem_json, "form": form.json}),
    ))
}
