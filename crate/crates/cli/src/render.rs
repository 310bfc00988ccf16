//! Rendering of tables and reports in the three output formats.
//!
//! Table output is line-oriented with " | " separators and no padding, so
//! equal inputs always produce equal bytes. JSON output is the documented
//! per-module schema on a single line. CSV output flattens the JSON rows,
//! one line per row, with list-valued fields joined by semicolons.

use bp_homology::chain::HomologyTable;
use bp_homology::coeff::{CoefficientScheme, PSeriesTable, SeriesPropertyReport};
use bp_homology::report::VerificationReport;
use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Invariant factors as explicit orders, e.g. "3 9"; "0" for the trivial
/// group.
fn orders(p: u64, exponents: &[u32]) -> String {
    if exponents.is_empty() {
        return "0".to_string();
    }
    let parts: Vec<String> =
        exponents.iter().map(|&e| (p as u128).pow(e).to_string()).collect();
    parts.join(" ")
}

fn join_semicolon(values: &[u32]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    parts.join(";")
}

fn join_space(values: &[u32]) -> String {
    if values.is_empty() {
        return "-".to_string();
    }
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    parts.join(" ")
}

pub fn render_pseries(
    table: &PSeriesTable,
    payload: &str,
    props: &SeriesPropertyReport,
    format: Format,
) -> String {
    match format {
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!(
                "p-series table: p = {}, scheme = {}, coefficients a_i stored for 2i <= {}\n",
                table.prime().get(),
                table.scheme(),
                table.degree_bound()
            ));
            out.push_str("i | deg | a_i\n");
            for i in 0..table.count() {
                out.push_str(&format!("{i} | {} | {}\n", 2 * i, table.a(i)));
            }
            let flag = |ok: bool| if ok { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "leading coefficient is p: {}\n",
                flag(props.leading_coefficient_is_p)
            ));
            out.push_str(&format!("homogeneous of degree 2i: {}\n", flag(props.homogeneous)));
            out.push_str(&format!("p-integral: {}\n", flag(props.p_integral)));
            for (m, ok) in &props.congruences {
                out.push_str(&format!(
                    "a_(p^{m}-1) is v_{m} modulo p and lower generators: {}\n",
                    flag(*ok)
                ));
            }
            out.push_str(&format!("verdict: {}\n", flag(props.passed())));
            out
        }
        Format::Json => {
            let table_value: Value =
                serde_json::from_str(payload).expect("frozen payload parses");
            let props_value = serde_json::to_value(props).expect("property report serializes");
            let doc = serde_json::json!({ "table": table_value, "checks": props_value });
            format!("{doc}\n")
        }
        Format::Csv => {
            let doc: Value = serde_json::from_str(payload).expect("frozen payload parses");
            let mut out = String::from("p,degree_bound,scheme,i,exps,num,den\n");
            let prefix = format!(
                "{},{},{}",
                doc["p"], doc["degree_bound"],
                doc["scheme"].as_str().expect("scheme is a string")
            );
            for entry in doc["a"].as_array().expect("coefficient array") {
                let i = &entry["i"];
                let terms = entry["terms"].as_array().expect("term array");
                if terms.is_empty() {
                    out.push_str(&format!("{prefix},{i},,,\n"));
                    continue;
                }
                for term in terms {
                    let exps: Vec<String> = term["exps"]
                        .as_array()
                        .expect("exponent array")
                        .iter()
                        .map(|v| v.to_string())
                        .collect();
                    out.push_str(&format!(
                        "{prefix},{i},{},{},{}\n",
                        exps.join(";"),
                        term["num"].as_str().expect("numerator string"),
                        term["den"].as_str().expect("denominator string"),
                    ));
                }
            }
            out
        }
    }
}

pub fn render_homology(
    table: &HomologyTable,
    scheme: CoefficientScheme,
    bigraded: bool,
    format: Format,
) -> String {
    let p = table.prime_value();
    match format {
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!(
                "homology table: p = {}, n = {}, scheme = {}, valid degrees 1..={}\n",
                p,
                table.factors(),
                scheme,
                table.max_degree()
            ));
            out.push_str("degree | odd | invariants\n");
            for degree in 1..=table.max_degree() {
                let strata: Vec<&bp_homology::chain::HomologyRow> =
                    table.rows().iter().filter(|r| r.degree == degree).collect();
                if strata.is_empty() {
                    out.push_str(&format!("{degree} | - | 0\n"));
                } else if bigraded {
                    for row in strata {
                        out.push_str(&format!(
                            "{degree} | {} | {}\n",
                            row.odd_count,
                            orders(p, &row.exponents)
                        ));
                    }
                } else {
                    let counts: Vec<u32> = strata.iter().map(|r| r.odd_count).collect();
                    let group = table.group(degree).expect("degree within bound");
                    out.push_str(&format!(
                        "{degree} | {} | {}\n",
                        join_space(&counts),
                        orders(p, group.exponents())
                    ));
                }
            }
            out
        }
        Format::Json => format!("{}\n", table.to_json()),
        Format::Csv => {
            let mut out = String::from("p,n,degree_bound,degree,odd_count,exponents\n");
            for row in table.rows() {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    p,
                    table.factors(),
                    table.degree_bound(),
                    row.degree,
                    row.odd_count,
                    join_semicolon(&row.exponents)
                ));
            }
            out
        }
    }
}

pub fn render_report(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Table => {
            let mut out = String::new();
            out.push_str(&format!("report: {}\n", report.name));
            let params: Vec<String> =
                report.params.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            if !params.is_empty() {
                out.push_str(&format!("{}\n", params.join("; ")));
            }
            out.push_str(&format!(
                "degree window: {}..={}\n",
                report.window.0, report.window.1
            ));
            out.push_str("degree | bucket | lhs | rhs | verdict\n");
            for cell in &report.cells {
                let bucket = cell
                    .bucket
                    .map_or_else(|| "-".to_string(), |b| b.to_string());
                out.push_str(&format!(
                    "{} | {bucket} | {} | {} | {}\n",
                    cell.degree,
                    join_space(&cell.lhs),
                    join_space(&cell.rhs),
                    cell.verdict
                ));
            }
            for note in &report.notes {
                out.push_str(&format!("note: {note}\n"));
            }
            out.push_str(&format!("verdict: {}\n", report.verdict));
            out
        }
        Format::Json => {
            format!("{}\n", serde_json::to_string(report).expect("report serializes"))
        }
        Format::Csv => {
            let mut out =
                String::from("name,degree,bucket,lhs,rhs,verdict,window_lo,window_hi\n");
            for cell in &report.cells {
                let bucket = cell.bucket.map_or_else(String::new, |b| b.to_string());
                out.push_str(&format!(
                    "{},{},{bucket},{},{},{},{},{}\n",
                    report.name,
                    cell.degree,
                    join_semicolon(&cell.lhs),
                    join_semicolon(&cell.rhs),
                    cell.verdict,
                    report.window.0,
                    report.window.1
                ));
            }
            out
        }
    }
}
