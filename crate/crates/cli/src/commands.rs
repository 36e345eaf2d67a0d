//! The six subcommand implementations. Each returns the process exit
//! code: 0 success, 1 verification/convergence failure, 2 invalid input
//! (the caller maps returned errors to 1 or 2 as well).

use std::path::Path;

use selfsim_core::hypergeom::{build_pfq, reduce_params};
use selfsim_core::rational::parse_rational;
use selfsim_core::residual::{residual_numeric, residual_series};
use selfsim_core::series::{solution_family, SeriesSolution};
use selfsim_core::similarity::{derive_b, derive_params, independence_check};
use selfsim_core::{EquationSpec, Error, Rational, Result};
use serde_json::{json, Value};

use crate::output::{
    csv_cell, emit, monomial_json, pfq_json, rat_decimal, rat_list, rat_list_decimal, rat_str,
};
use crate::{EvalArgs, VerifyArgs};

/// Fixed probe points for the finite-difference spot check. At y = 1 the
/// similarity variable is t = x, so these keep t <= 1 for every kind and
/// the series truncation error stays far below the detection threshold.
const NUMERIC_PROBES: [(f64, f64); 3] = [(0.6, 1.0), (0.8, 1.0), (1.0, 1.0)];

fn spec_header(spec: &EquationSpec) -> Value {
    json!({
        "kind": spec.kind().index(),
        "p": spec.p(),
        "q": spec.q(),
        "alpha": rat_str(spec.alpha()),
        "beta": rat_str(spec.beta()),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Some(e)) = (base.as_object_mut(), extra.as_object()) {
        for (k, v) in e {
            b.insert(k.clone(), v.clone());
        }
    }
    base
}

/// Exact similarity parameters (a, b, c), the gamma ladder, and the
/// series scale factor K, as rational strings plus decimal duplicates.
pub fn cmd_params(spec: &EquationSpec) -> Result<i32> {
    let params = derive_params(spec)?;
    let doc = merge(
        spec_header(spec),
        json!({
            "a": rat_str(&params.a),
            "a_decimal": rat_decimal(&params.a),
            "b": rat_str(&params.b),
            "b_decimal": rat_decimal(&params.b),
            "c": rat_str(&params.c),
            "c_decimal": rat_decimal(&params.c),
            "gammas": rat_list(&params.gammas),
            "gammas_decimal": rat_list_decimal(&params.gammas),
            "K": rat_str(&params.scale_k),
            "K_decimal": rat_decimal(&params.scale_k),
            "b_printed_in_paper_differs": params.b_printed_in_paper_differs,
        }),
    );
    emit(&doc);
    Ok(0)
}

fn selected_members(
    members: &[SeriesSolution],
    i: Option<usize>,
    p: usize,
) -> Result<Vec<&SeriesSolution>> {
    match i {
        None => Ok(members.iter().collect()),
        Some(idx) => {
            let member = members.iter().find(|m| m.index == idx).ok_or_else(|| {
                Error::InvalidSpec(format!(
                    "member index {} out of range (family has members 0..{})",
                    idx, p
                ))
            })?;
            Ok(vec![member])
        }
    }
}

/// Exact coefficient ledger for the family (or one member), serialized
/// losslessly so it can be fed back to `verify`.
pub fn cmd_coeffs(spec: &EquationSpec, i: Option<usize>, terms: usize) -> Result<i32> {
    let family = solution_family(spec, terms)?;
    let members = selected_members(&family.members, i, spec.p())?;
    let member_docs: Vec<Value> = members
        .iter()
        .map(|m| {
            json!({
                "i": m.index,
                "coeffs": rat_list(&m.coeffs),
            })
        })
        .collect();
    let doc = merge(
        spec_header(spec),
        json!({
            "n_terms": terms,
            "a": rat_str(&family.params.a),
            "b": rat_str(&family.params.b),
            "c": rat_str(&family.params.c),
            "K": rat_str(&family.params.scale_k),
            "members": member_docs,
        }),
    );
    emit(&doc);
    Ok(0)
}

fn grid_axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * (k as f64) / ((n - 1) as f64))
        .collect()
}

/// CSV table of members evaluated over a rectangular grid, y-major row
/// order, '.' decimal separator, ',' delimiter, LF endings. Failed nodes
/// print "nan" and warn on stderr.
pub fn cmd_eval(spec: &EquationSpec, args: &EvalArgs) -> Result<i32> {
    for (name, lo, hi) in [("x", args.x0, args.x1), ("y", args.y0, args.y1)] {
        if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "grid bounds must be strictly positive: {}0 = {}, {}1 = {}",
                name, lo, name, hi
            )));
        }
        if hi < lo {
            return Err(Error::InvalidSpec(format!(
                "grid upper bound below lower bound: {}0 = {}, {}1 = {}",
                name, lo, name, hi
            )));
        }
    }
    if args.nx == 0 || args.ny == 0 {
        return Err(Error::InvalidSpec(format!(
            "grid needs at least one node per axis: nx = {}, ny = {}",
            args.nx, args.ny
        )));
    }

    let family = solution_family(spec, args.terms)?;
    let members = selected_members(&family.members, args.i, spec.p())?;

    let mut header = String::from("x,y");
    for m in &members {
        header.push_str(&format!(",u{}", m.index));
    }
    println!("{}", header);

    let xs = grid_axis(args.x0, args.x1, args.nx);
    let ys = grid_axis(args.y0, args.y1, args.ny);
    for &y in &ys {
        for &x in &xs {
            let mut row = format!("{},{}", csv_cell(x), csv_cell(y));
            for m in &members {
                let cell = match m.eval(x, y, args.tol, args.max_terms) {
                    Ok(v) => csv_cell(v),
                    Err(err) => {
                        eprintln!(
                            "warning: u{} at (x, y) = ({}, {}) failed: {}",
                            m.index, x, y, err
                        );
                        "nan".to_string()
                    }
                };
                row.push(',');
                row.push_str(&cell);
            }
            println!("{}", row);
        }
    }
    Ok(0)
}

fn json_field<'d>(doc: &'d Value, key: &str) -> Result<&'d Value> {
    doc.get(key)
        .ok_or_else(|| Error::Parse(format!("coefficient file is missing field \"{}\"", key)))
}

fn json_u64(doc: &Value, key: &str) -> Result<u64> {
    json_field(doc, key)?
        .as_u64()
        .ok_or_else(|| Error::Parse(format!("field \"{}\" must be a nonnegative integer", key)))
}

fn json_rat(doc: &Value, key: &str) -> Result<Rational> {
    let s = json_field(doc, key)?
        .as_str()
        .ok_or_else(|| Error::Parse(format!("field \"{}\" must be a rational string", key)))?;
    parse_rational(s)
}

/// Read a `coeffs` document back into family members, insisting the file
/// describes the same equation the command line asked about.
fn load_coeff_file(spec: &EquationSpec, path: &Path) -> Result<Vec<SeriesSolution>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{} is not valid JSON: {}", path.display(), e)))?;

    let same = json_u64(&doc, "kind")? == u64::from(spec.kind().index())
        && json_u64(&doc, "p")? == spec.p() as u64
        && json_u64(&doc, "q")? == spec.q() as u64
        && json_rat(&doc, "alpha")? == *spec.alpha()
        && json_rat(&doc, "beta")? == *spec.beta();
    if !same {
        return Err(Error::InvalidSpec(format!(
            "coefficient file {} was generated for a different equation",
            path.display()
        )));
    }

    let params = derive_params(spec)?;
    let members = json_field(&doc, "members")?
        .as_array()
        .ok_or_else(|| Error::Parse("field \"members\" must be an array".into()))?;
    let mut out = Vec::with_capacity(members.len());
    for member in members {
        let index = json_u64(member, "i")? as usize;
        let coeff_values = json_field(member, "coeffs")?
            .as_array()
            .ok_or_else(|| Error::Parse("member field \"coeffs\" must be an array".into()))?;
        let mut coeffs = Vec::with_capacity(coeff_values.len());
        for v in coeff_values {
            let s = v
                .as_str()
                .ok_or_else(|| Error::Parse("coefficients must be rational strings".into()))?;
            coeffs.push(parse_rational(s)?);
        }
        if coeffs.is_empty() {
            return Err(Error::Parse(format!(
                "member {} has an empty coefficient list",
                index
            )));
        }
        out.push(SeriesSolution {
            spec: spec.clone(),
            params: params.clone(),
            index,
            coeffs,
        });
    }
    if out.is_empty() {
        return Err(Error::Parse("coefficient file lists no members".into()));
    }
    Ok(out)
}

/// Exact telescoping verification of every requested member, optional
/// finite-difference spot check, optional deliberate corruption.
pub fn cmd_verify(spec: &EquationSpec, args: &VerifyArgs) -> Result<i32> {
    let mut members: Vec<SeriesSolution> = match &args.coeffs {
        Some(path) => load_coeff_file(spec, path)?,
        None => solution_family(spec, args.terms)?.members,
    };
    if let Some(idx) = args.i {
        members.retain(|m| m.index == idx);
        if members.is_empty() {
            return Err(Error::InvalidSpec(format!(
                "member index {} out of range (family has members 0..{})",
                idx,
                spec.p()
            )));
        }
    }
    if args.inject_fault {
        let member = &mut members[0];
        let slot = 1.min(member.coeffs.len() - 1);
        member.coeffs[slot] += selfsim_core::rat(1, 1000);
    }

    let mut member_docs = Vec::with_capacity(members.len());
    let mut all_ok = true;
    let mut first_failure: Option<String> = None;
    for member in &members {
        let report = residual_series(member)?;
        if !report.interior_ok {
            all_ok = false;
            if first_failure.is_none() {
                let slot = report
                    .first_mismatch
                    .as_ref()
                    .map(|t| format!("x^{} y^{} (coefficient {})", t.x_exp, t.y_exp, t.coefficient))
                    .unwrap_or_else(|| "empty residual where a trailing term was expected".into());
                first_failure = Some(format!("member {}: first failing slot {}", member.index, slot));
            }
        }
        let mut doc = json!({
            "i": member.index,
            "n_terms": member.order(),
            "interior_ok": report.interior_ok,
            "max_interior_coeff": rat_str(&report.max_interior_coeff),
            "trailing": report.trailing.as_ref().map(monomial_json),
            "first_mismatch": report.first_mismatch.as_ref().map(monomial_json),
            "residual_term_count": report.residual_terms.len(),
        });
        if args.numeric {
            let summary = residual_numeric(member, &NUMERIC_PROBES, args.h)?;
            let samples: Vec<Value> = summary
                .samples
                .iter()
                .map(|(x, y, rel)| json!([x, y, rel]))
                .collect();
            doc = merge(
                doc,
                json!({
                    "numeric": {
                        "h": summary.h,
                        "max_rel_residual": summary.max_rel_residual,
                        "samples": samples,
                    }
                }),
            );
        }
        member_docs.push(doc);
    }

    let doc = merge(
        spec_header(spec),
        json!({
            "fault_injected": args.inject_fault,
            "members": member_docs,
            "all_interior_ok": all_ok,
        }),
    );
    emit(&doc);
    if all_ok {
        Ok(0)
    } else {
        if let Some(msg) = first_failure {
            eprintln!("verification failed: {}", msg);
        }
        Ok(1)
    }
}

/// The published sufficient independence conditions for a given (or
/// derived) exponent b; exit 0 only when both hold.
pub fn cmd_independence(spec: &EquationSpec, b_override: Option<&str>) -> Result<i32> {
    let b = match b_override {
        Some(s) => parse_rational(s)?,
        None => derive_b(spec),
    };
    let report = independence_check(spec, &b);
    let pairs: Vec<Value> = report
        .violating_pairs
        .iter()
        .map(|(i, s)| json!([i, s]))
        .collect();
    let doc = merge(
        spec_header(spec),
        json!({
            "b": rat_str(&b),
            "b_decimal": rat_decimal(&b),
            "ok": report.ok,
            "alpha_integral_violation": report.alpha_integral_violation,
            "violating_pairs": pairs,
        }),
    );
    emit(&doc);
    Ok(if report.ok { 0 } else { 1 })
}

/// Full and reduced hypergeometric data for one member; optionally
/// evaluate at an argument z (the series runs in powers of K·z).
pub fn cmd_pfq(
    spec: &EquationSpec,
    i: usize,
    z: Option<f64>,
    tol: f64,
    max_terms: usize,
) -> Result<i32> {
    if i >= spec.p() {
        return Err(Error::InvalidSpec(format!(
            "member index {} out of range (family has members 0..{})",
            i,
            spec.p()
        )));
    }
    let params = derive_params(spec)?;
    let full = build_pfq(&params, spec.p(), spec.q(), i)?;
    let reduced = reduce_params(&full);
    let convergence = match reduced.convergence_class() {
        selfsim_core::ConvergenceClass::Entire => "entire",
        selfsim_core::ConvergenceClass::UnitDisk => "unit_disk",
        selfsim_core::ConvergenceClass::Divergent => "divergent",
    };
    let mut doc = merge(
        spec_header(spec),
        json!({
            "i": i,
            "full": pfq_json(&full),
            "reduced": pfq_json(&reduced),
            "convergence_class": convergence,
            "terminates": reduced.terminates(),
        }),
    );
    if let Some(z) = z {
        let eval = selfsim_core::eval_pfq(&reduced, z, tol, max_terms)?;
        doc = merge(
            doc,
            json!({
                "eval": {
                    "z": z,
                    "value": eval.value,
                    "terms_used": eval.terms_used,
                    "tail_bound": eval.tail_bound,
                }
            }),
        );
    }
    emit(&doc);
    Ok(0)
}
