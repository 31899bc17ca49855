//! WebAssembly bindings for the browser demo.
//!
//! Each exported function takes plain numbers or strings and returns a JSON
//! document. The `*_json` functions hold the logic and run natively too.

use nalgebra::DMatrix;
use polar_ed::catalog::{catalog_build, FamilyId, FamilySpec};
use polar_ed::polarity::{polarity_test, PolarityOptions};
use polar_ed::transfer::{
    critical_points_singular_values, critical_points_spectrum, ed_degree_spectrum, SingularValueProblem,
    SpectrumProblem,
};
use serde_json::json;
use wasm_bindgen::prelude::*;

const TOL: f64 = 1e-8;

/// Critical points of the distance from `[[a, b], [b, c]]` to the symmetric
/// matrices with eigenvalues `l1 ≤ l2`.
///
/// Those matrices form a circle in the traceless coordinates `(p, q)` of
/// `[[t + p, q], [q, t − p]]`, centered at the origin with radius `(l2 − l1)/2`
/// and `t = (l1 + l2)/2`. Points are reported in the same coordinates.
pub fn isospectral_circle_json(a: f64, b: f64, c: f64, l1: f64, l2: f64) -> Result<String, String> {
    let data = DMatrix::from_row_slice(2, 2, &[a, b, b, c]);
    let p = SpectrumProblem::new(data, vec![l1, l2]).map_err(|e| e.to_string())?;
    let set = critical_points_spectrum(&p, TOL).map_err(|e| e.to_string())?;
    let coords = |m: &DMatrix<f64>| [(m[(0, 0)] - m[(1, 1)]) / 2.0, m[(0, 1)]];
    let points: Vec<_> = set.points.iter().map(coords).collect();
    Ok(json!({
        "radius": (l2 - l1) / 2.0,
        "trace_shift": (l1 + l2) / 2.0 - (a + c) / 2.0,
        "data": [(a - c) / 2.0, b],
        "points": points,
        "squared_distances": set.distances,
        "nearest_index": set.nearest_index(),
    })
    .to_string())
}

/// Runs the polarity test on a catalog family with comma-separated parameters.
pub fn catalog_polarity_json(family: &str, params: &str, seed: u64) -> Result<String, String> {
    let family: FamilyId = family.parse().map_err(|e: polar_ed::catalog::CatalogError| e.to_string())?;
    let params = params
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| format!("parameter '{s}' is not a non-negative integer")))
        .collect::<Result<Vec<_>, _>>()?;
    let entry = catalog_build(&FamilySpec::new(family, &params)).map_err(|e| e.to_string())?;
    let report = polarity_test(&entry.rep, &PolarityOptions::with_seed(seed, 3)).map_err(|e| e.to_string())?;
    let mut out = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    out["name"] = json!(entry.rep.name);
    out["generators"] = json!(entry.rep.generators.len());
    Ok(out.to_string())
}

/// ED degree and critical-point count for eigenvalues, or for singular values of a
/// `rows×cols` matrix given row-major.
pub fn ed_degree_json(kind: &str, values: &str, data: &[f64], rows: usize, cols: usize) -> Result<String, String> {
    let values = values
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("'{s}' is not a number")))
        .collect::<Result<Vec<_>, _>>()?;
    if data.len() != rows * cols {
        return Err(format!("expected {} entries for a {rows}×{cols} matrix", rows * cols));
    }
    let m = DMatrix::from_row_slice(rows, cols, data);
    let set = match kind {
        "spectrum" => {
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            let degree = ed_degree_spectrum(&sorted).map_err(|e| e.to_string())?;
            let p = SpectrumProblem::new(m, sorted).map_err(|e| e.to_string())?;
            let set = critical_points_spectrum(&p, TOL).map_err(|e| e.to_string())?;
            debug_assert_eq!(degree, set.ed_degree_expected);
            set
        }
        "singular" => {
            let mut sorted = values.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            let p = SingularValueProblem::new(m, sorted).map_err(|e| e.to_string())?;
            critical_points_singular_values(&p, TOL).map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown kind '{other}', expected spectrum or singular")),
    };
    Ok(json!({
        "ed_degree": set.ed_degree_expected.to_string(),
        "count": set.len(),
        "nearest_index": set.nearest_index(),
        "assignments": set.slice_points,
        "squared_distances": set.distances,
        "max_residual": set.residuals.iter().copied().fold(0.0, f64::max),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn isospectral_circle(a: f64, b: f64, c: f64, l1: f64, l2: f64) -> Result<String, JsValue> {
    isospectral_circle_json(a, b, c, l1, l2).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn catalog_polarity(family: &str, params: &str, seed: u64) -> Result<String, JsValue> {
    catalog_polarity_json(family, params, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn ed_degree(kind: &str, values: &str, data: &[f64], rows: usize, cols: usize) -> Result<String, JsValue> {
    ed_degree_json(kind, values, data, rows, cols).map_err(|e| JsValue::from_str(&e))
}
