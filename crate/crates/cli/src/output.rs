//! Serialization helpers: exact rationals as "p/q" strings with advisory
//! decimal duplicates, JSON assembly, and deterministic CSV cells.

use selfsim_core::rational::to_f64;
use selfsim_core::{HypergeomSpec, MonomialTerm, Rational};
use serde_json::{json, Value};

/// Exact rational rendering: "p/q", or plain "p" when the denominator is 1.
pub fn rat_str(r: &Rational) -> String {
    r.to_string()
}

/// Advisory decimal duplicate of an exact rational, as a JSON number
/// (null if the value does not fit a finite f64).
pub fn rat_decimal(r: &Rational) -> Value {
    json!(to_f64(r))
}

/// List of exact rationals as strings.
pub fn rat_list(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(|r| Value::String(rat_str(r))).collect())
}

/// List of advisory decimals.
pub fn rat_list_decimal(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(rat_decimal).collect())
}

/// One monomial coef * x^ex * y^ey as a JSON object.
pub fn monomial_json(term: &MonomialTerm) -> Value {
    json!({
        "coefficient": rat_str(&term.coefficient),
        "coefficient_decimal": rat_decimal(&term.coefficient),
        "x_exp": rat_str(&term.x_exp),
        "y_exp": rat_str(&term.y_exp),
    })
}

/// Parameter lists and scale of a pFq as a JSON object.
pub fn pfq_json(spec: &HypergeomSpec) -> Value {
    json!({
        "num_params": rat_list(&spec.num_params),
        "den_params": rat_list(&spec.den_params),
        "scale": rat_str(&spec.scale),
        "scale_decimal": rat_decimal(&spec.scale),
        "reduced": spec.reduced,
        "factorial_absorbed": spec.factorial_absorbed,
        "display": spec.to_string(),
    })
}

/// Deterministic CSV cell for a float; evaluation failures print "nan".
pub fn csv_cell(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{}", v)
    }
}

/// Pretty-print a JSON document to stdout with a trailing newline.
pub fn emit(doc: &Value) {
    println!("{}", serde_json::to_string_pretty(doc).expect("valid JSON"));
}
