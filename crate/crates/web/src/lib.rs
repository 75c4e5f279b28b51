//! Browser bindings: the (lambda, mu) scan explorer, prolongation and
//! floating-point sampling of planar fields for arrow plots.

use std::collections::BTreeMap;

use lievec_core::realize::{realize_sl, sl3_family, sl3_parameter_scan};
use lievec_core::{closure_generate, parse_expr, parse_fields, Bindings, Expr, FieldSet, JetChart, Rational};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const CLOSURE_BUDGET: usize = 12;

fn pair(a: &Rational, b: &Rational) -> Value {
    json!([a.to_string(), b.to_string()])
}

/// Constraints, candidates and solutions of the sl(3) scan as JSON.
pub fn scan_json() -> Result<String, String> {
    let s = sl3_parameter_scan().map_err(|e| e.to_string())?;
    let v = json!({
        "constraints": s.constraints.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "candidates": s.candidates.iter().map(|(a, b)| pair(a, b)).collect::<Vec<_>>(),
        "solutions": s.solutions.iter().map(|(a, b)| pair(a, b)).collect::<Vec<_>>(),
    });
    Ok(v.to_string())
}

fn rational(text: &str) -> Result<Rational, String> {
    parse_expr(text, Some(&[]))
        .map_err(|e| e.to_string())?
        .constant_value()
        .ok_or_else(|| format!("`{text}` is not a number"))
}

/// The pair `X_a, X_b` at fixed `(lambda, mu)` with `W = [X_a, X_b]`, the
/// brackets of `W` with both, and the dimension of the generated algebra.
pub fn scan_at_json(lambda: &str, mu: &str) -> Result<String, String> {
    let (l, m) = (rational(lambda)?, rational(mu)?);
    let (_, lv, mv, xa, xb) = sl3_family();
    let bind = Bindings::new().var(&lv, Expr::constant(l.clone())).var(&mv, Expr::constant(m.clone()));
    let err = |e: lievec_core::Error| e.to_string();
    let xa = xa.substitute(&bind).map_err(err)?;
    let xb = xb.substitute(&bind).map_err(err)?;
    let w = xa.bracket(&xb).map_err(err)?;
    let wa = w.bracket(&xa).map_err(err)?;
    let wb = w.bracket(&xb).map_err(err)?;
    let closure = closure_generate(&[("Xa".into(), xa.clone()), ("Xb".into(), xb.clone())], CLOSURE_BUDGET)
        .map(|b| json!(b.len()))
        .unwrap_or(Value::Null);
    let v = json!({
        "lambda": l.to_string(),
        "mu": m.to_string(),
        "Xa": xa.to_string(),
        "Xb": xb.to_string(),
        "W": w.to_string(),
        "WXa": wa.to_string(),
        "WXb": wb.to_string(),
        "solution": !w.is_zero() && wa.is_zero() && wb.is_zero(),
        "closure": closure,
    });
    Ok(v.to_string())
}

/// Prolongation of every field of a field file, as field-file text.
pub fn prolong_text(fields: &str, order: usize) -> Result<String, String> {
    let set = parse_fields(fields).map_err(|e| e.to_string())?;
    let jet = JetChart::over(&set.chart, order).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for (n, f) in &set.fields {
        out.push((n.clone(), jet.prolong(f).map_err(|e| e.to_string())?));
    }
    Ok(FieldSet { chart: jet.chart().clone(), params: set.params, fields: out }.to_dsl())
}

/// Field-file text of the sl(k) realization.
pub fn realization_text(k: usize, form: u8) -> Result<String, String> {
    let r = realize_sl(k, form).map_err(|e| e.to_string())?;
    Ok(FieldSet { chart: r.chart.clone(), params: Vec::new(), fields: r.generators() }.to_dsl())
}

/// Samples the named field (or the first one) of a planar field file on an
/// `n` by `n` grid. Returns `x, y, u, v` per point; `u, v` are NaN at poles.
pub fn sample(fields: &str, name: &str, x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Result<Vec<f64>, String> {
    let set = parse_fields(fields).map_err(|e| e.to_string())?;
    if set.chart.len() != 2 || !set.params.is_empty() {
        return Err(format!("need a planar chart without parameters, got ({})", set.chart));
    }
    let field = if name.is_empty() {
        &set.fields.first().ok_or("no fields")?.1
    } else {
        set.get(name).ok_or_else(|| format!("no field named `{name}`"))?
    };
    let (xv, yv) = (set.chart.vars()[0].clone(), set.chart.vars()[1].clone());
    let n = n.max(2);
    let mut out = Vec::with_capacity(4 * n * n);
    for i in 0..n {
        for j in 0..n {
            let x = x0 + (x1 - x0) * i as f64 / (n - 1) as f64;
            let y = y0 + (y1 - y0) * j as f64 / (n - 1) as f64;
            let pt: BTreeMap<_, _> = [(xv.clone(), x), (yv.clone(), y)].into_iter().collect();
            let u = field.component(0).eval_f64(&pt).unwrap_or(f64::NAN);
            let v = field.component(1).eval_f64(&pt).unwrap_or(f64::NAN);
            out.extend([x, y, u, v]);
        }
    }
    Ok(out)
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn scan() -> Result<String, JsError> {
    js(scan_json())
}

#[wasm_bindgen]
pub fn scan_at(lambda: &str, mu: &str) -> Result<String, JsError> {
    js(scan_at_json(lambda, mu))
}

#[wasm_bindgen]
pub fn prolong(fields: &str, order: usize) -> Result<String, JsError> {
    js(prolong_text(fields, order))
}

#[wasm_bindgen]
pub fn realization(k: usize, form: u8) -> Result<String, JsError> {
    js(realization_text(k, form))
}

#[wasm_bindgen]
pub fn sample_field(
    fields: &str,
    name: &str,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    sample(fields, name, x0, x1, y0, y1, n).map_err(|e| JsError::new(&e))
}
