//! JSON wire formats: matrices, algebras, cones and linear maps, plus the
//! canonical report writer.
//!
//! Matrices are `{"dim": n, "entries": [[[re, im], ...], ...]}` in row-major
//! order. Rectangular matrices (only ever emitted inside witnesses) carry an
//! extra `"cols"` field. A plain number stands for a real entry. Parsing
//! reports failures with JSON-pointer paths.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serializer;
use serde_json::{json, Map, Value};

use crate::algebra::{OperatorAlgebra, STRUCTURE_TOL};
use crate::cone::ConeOracle;
use crate::linalg::{c, CMatrix};

/// Input that does not match the documented schema.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{pointer}: {message}")]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        let pointer = pointer.into();
        Self { pointer: if pointer.is_empty() { "/".into() } else { pointer }, message: message.into() }
    }
}

type SchemaResult<T> = std::result::Result<T, SchemaError>;

pub fn matrix_to_json(m: &CMatrix) -> Value {
    let entries: Vec<Value> = (0..m.nrows())
        .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
        .collect();
    let mut obj = Map::new();
    obj.insert("dim".into(), json!(m.nrows()));
    if m.nrows() != m.ncols() {
        obj.insert("cols".into(), json!(m.ncols()));
    }
    obj.insert("entries".into(), Value::Array(entries));
    Value::Object(obj)
}

/// `serialize_with` adapter for matrix fields.
pub fn ser_matrix<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&matrix_to_json(m), s)
}

pub fn ser_matrices<S: Serializer>(ms: &[CMatrix], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<Value> = ms.iter().map(matrix_to_json).collect();
    serde::Serialize::serialize(&v, s)
}

pub fn ser_opt_matrix<S: Serializer>(m: &Option<CMatrix>, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&m.as_ref().map(matrix_to_json), s)
}

fn child(pointer: &str, key: impl std::fmt::Display) -> String {
    format!("{pointer}/{key}")
}

fn get<'a>(v: &'a Value, pointer: &str, key: &str) -> SchemaResult<&'a Value> {
    v.as_object()
        .ok_or_else(|| SchemaError::new(pointer, "expected an object"))?
        .get(key)
        .ok_or_else(|| SchemaError::new(child(pointer, key), "missing field"))
}

fn get_opt<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.as_object().and_then(|o| o.get(key)).filter(|x| !x.is_null())
}

fn as_usize(v: &Value, pointer: &str) -> SchemaResult<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| SchemaError::new(pointer, "expected a nonnegative integer"))
}

fn as_f64(v: &Value, pointer: &str) -> SchemaResult<f64> {
    let x = v.as_f64().ok_or_else(|| SchemaError::new(pointer, "expected a number"))?;
    if !x.is_finite() {
        return Err(SchemaError::new(pointer, "expected a finite number"));
    }
    Ok(x)
}

fn as_bool(v: &Value, pointer: &str) -> SchemaResult<bool> {
    v.as_bool().ok_or_else(|| SchemaError::new(pointer, "expected a boolean"))
}

fn as_array<'a>(v: &'a Value, pointer: &str) -> SchemaResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| SchemaError::new(pointer, "expected an array"))
}

pub fn matrix_from_json(v: &Value, pointer: &str) -> SchemaResult<CMatrix> {
    let dim = as_usize(get(v, pointer, "dim")?, &child(pointer, "dim"))?;
    if dim == 0 {
        return Err(SchemaError::new(child(pointer, "dim"), "dimension must be positive"));
    }
    let cols = match get_opt(v, "cols") {
        Some(cv) => as_usize(cv, &child(pointer, "cols"))?,
        None => dim,
    };
    let ep = child(pointer, "entries");
    let rows = as_array(get(v, pointer, "entries")?, &ep)?;
    if rows.len() != dim {
        return Err(SchemaError::new(ep, format!("expected {dim} rows, found {}", rows.len())));
    }
    let mut m = CMatrix::zeros(dim, cols);
    for (i, row) in rows.iter().enumerate() {
        let rp = child(&ep, i);
        let row = as_array(row, &rp)?;
        if row.len() != cols {
            return Err(SchemaError::new(rp, format!("expected {cols} entries, found {}", row.len())));
        }
        for (j, z) in row.iter().enumerate() {
            let zp = child(&rp, j);
            if z.is_number() {
                m[(i, j)] = c(as_f64(z, &zp)?, 0.0);
                continue;
            }
            let pair = as_array(z, &zp)?;
            if pair.len() != 2 {
                return Err(SchemaError::new(zp, "expected a number or a [re, im] pair"));
            }
            m[(i, j)] = c(as_f64(&pair[0], &child(&zp, 0))?, as_f64(&pair[1], &child(&zp, 1))?);
        }
    }
    Ok(m)
}

fn matrices_from_json(v: &Value, pointer: &str) -> SchemaResult<Vec<CMatrix>> {
    as_array(v, pointer)?.iter().enumerate().map(|(k, m)| matrix_from_json(m, &child(pointer, k))).collect()
}

pub fn algebra_to_json(alg: &OperatorAlgebra) -> Value {
    json!({
        "ambient_dim": alg.ambient_dim(),
        "basis": alg.basis().iter().map(matrix_to_json).collect::<Vec<_>>(),
        "star_closed": alg.is_star_closed(),
    })
}

/// An algebra is either an orthonormal `"basis"` or, as a shorthand,
/// `"generators"` (plus optional `"include_adjoints"`) closed on load.
pub fn algebra_from_json(v: &Value, pointer: &str) -> SchemaResult<OperatorAlgebra> {
    if get_opt(v, "basis").is_none() && get_opt(v, "generators").is_some() {
        let gp = child(pointer, "generators");
        let gens = matrices_from_json(get(v, pointer, "generators")?, &gp)?;
        let adj = match get_opt(v, "include_adjoints") {
            Some(b) => as_bool(b, &child(pointer, "include_adjoints"))?,
            None => false,
        };
        return OperatorAlgebra::generate(&gens, adj, STRUCTURE_TOL, crate::algebra::MAX_DIM)
            .map_err(|e| SchemaError::new(gp, e.to_string()));
    }
    let n = as_usize(get(v, pointer, "ambient_dim")?, &child(pointer, "ambient_dim"))?;
    let bp = child(pointer, "basis");
    let basis = matrices_from_json(get(v, pointer, "basis")?, &bp)?;
    for (k, b) in basis.iter().enumerate() {
        if b.nrows() != n || b.ncols() != n {
            return Err(SchemaError::new(child(&bp, k), format!("expected a {n}x{n} matrix")));
        }
    }
    let claimed = match get_opt(v, "star_closed") {
        Some(s) => Some(as_bool(s, &child(pointer, "star_closed"))?),
        None => None,
    };
    let alg = OperatorAlgebra::from_orthonormal_basis(n, basis, STRUCTURE_TOL)
        .map_err(|e| SchemaError::new(bp, e.to_string()))?;
    if let Some(flag) = claimed {
        if flag != alg.is_star_closed() {
            return Err(SchemaError::new(
                child(pointer, "star_closed"),
                format!("flag says {flag} but the span is{} adjoint-closed", if alg.is_star_closed() { "" } else { " not" }),
            ));
        }
    }
    Ok(alg)
}

/// Read a JSON document from disk.
pub fn read_json(path: &Path) -> std::result::Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Either an inline object or a path (relative to `base`) to a JSON file.
fn resolve<'a>(v: &'a Value, base: &Path, pointer: &str, holder: &'a mut Option<Value>) -> SchemaResult<&'a Value> {
    if let Some(p) = v.as_str() {
        let path: PathBuf = base.join(p);
        let doc = read_json(&path).map_err(|e| SchemaError::new(pointer, e))?;
        *holder = Some(doc);
        Ok(holder.as_ref().expect("just stored"))
    } else {
        Ok(v)
    }
}

pub fn algebra_from_ref(v: &Value, base: &Path, pointer: &str) -> SchemaResult<OperatorAlgebra> {
    let external = v.is_string();
    let mut holder = None;
    let doc = resolve(v, base, pointer, &mut holder)?;
    let inner = if external { "" } else { pointer };
    algebra_from_json(doc, inner).map_err(|e| if external { SchemaError::new(pointer, e.to_string()) } else { e })
}

pub fn matrix_from_ref(v: &Value, base: &Path, pointer: &str) -> SchemaResult<CMatrix> {
    let external = v.is_string();
    let mut holder = None;
    let doc = resolve(v, base, pointer, &mut holder)?;
    let inner = if external { "" } else { pointer };
    matrix_from_json(doc, inner).map_err(|e| if external { SchemaError::new(pointer, e.to_string()) } else { e })
}

/// Parse a cone description:
/// `{"variant": "standard"|"similarity"|"pullback", "algebra": .., "S": .., "tol_psd": .., "grid": ..}`.
pub fn cone_from_json(v: &Value, base: &Path, tol_override: Option<f64>) -> SchemaResult<ConeOracle> {
    let variant = get(v, "", "variant")?
        .as_str()
        .ok_or_else(|| SchemaError::new("/variant", "expected a string"))?;
    let tol = match get_opt(v, "tol_psd") {
        Some(t) => as_f64(t, "/tol_psd")?,
        None => crate::cone::TOL_PSD,
    };
    let tol = tol_override.unwrap_or(tol);
    if tol <= 0.0 {
        return Err(SchemaError::new("/tol_psd", "tolerance must be positive"));
    }
    let cone = match variant {
        "standard" => ConeOracle::standard(algebra_from_ref(get(v, "", "algebra")?, base, "/algebra")?),
        "similarity" => {
            let alg = algebra_from_ref(get(v, "", "algebra")?, base, "/algebra")?;
            let s = matrix_from_ref(get(v, "", "S")?, base, "/S")?;
            ConeOracle::similarity(alg, s).map_err(|e| SchemaError::new("/S", e.to_string()))?
        }
        "pullback" => {
            let grid = match get_opt(v, "grid") {
                Some(g) => as_array(g, "/grid")?
                    .iter()
                    .enumerate()
                    .map(|(k, x)| as_f64(x, &child("/grid", k)))
                    .collect::<SchemaResult<Vec<f64>>>()?,
                None => crate::cases::default_grid(),
            };
            ConeOracle::function_pullback(grid).map_err(|e| SchemaError::new("/grid", e.to_string()))?
        }
        other => return Err(SchemaError::new("/variant", format!("unknown variant {other:?}"))),
    };
    Ok(cone.with_tol_psd(tol))
}

/// A linear map given by images of an algebra's basis,
/// `{"algebra": .., "images": [matrix, ...]}`, or as the conjugation
/// `b -> left b right` by `{"algebra": .., "left": matrix, "right": matrix}`.
pub fn map_from_json(v: &Value, base: &Path) -> SchemaResult<(OperatorAlgebra, Vec<CMatrix>)> {
    let alg = algebra_from_ref(get(v, "", "algebra")?, base, "/algebra")?;
    if get_opt(v, "images").is_none() && get_opt(v, "left").is_some() {
        let left = matrix_from_ref(get(v, "", "left")?, base, "/left")?;
        let right = matrix_from_ref(get(v, "", "right")?, base, "/right")?;
        let n = alg.ambient_dim();
        if left.ncols() != n || right.nrows() != n || left.nrows() != right.ncols() {
            return Err(SchemaError::new("/left", format!("left and right must compose with {n}x{n} matrices into a square")));
        }
        let images = alg.basis().iter().map(|b| &left * b * &right).collect();
        return Ok((alg, images));
    }
    let images = matrices_from_json(get(v, "", "images")?, "/images")?;
    if images.len() != alg.dim() {
        return Err(SchemaError::new("/images", format!("expected {} images, found {}", alg.dim(), images.len())));
    }
    let m = images[0].nrows();
    for (k, im) in images.iter().enumerate() {
        if im.nrows() != m || im.ncols() != m {
            return Err(SchemaError::new(child("/images", k), "images must share one square dimension"));
        }
    }
    Ok((alg, images))
}

/// `{"generators": [matrix, ...], "include_adjoints": bool, "max_dim": int}`.
pub fn generators_from_json(v: &Value) -> SchemaResult<(Vec<CMatrix>, bool, Option<usize>)> {
    let gens = matrices_from_json(get(v, "", "generators")?, "/generators")?;
    if gens.is_empty() {
        return Err(SchemaError::new("/generators", "at least one generator is required"));
    }
    let adj = match get_opt(v, "include_adjoints") {
        Some(b) => as_bool(b, "/include_adjoints")?,
        None => false,
    };
    let max_dim = match get_opt(v, "max_dim") {
        Some(m) => Some(as_usize(m, "/max_dim")?),
        None => None,
    };
    Ok((gens, adj, max_dim))
}

fn write_number(out: &mut String, n: &serde_json::Number) {
    if let Some(i) = n.as_i64() {
        let _ = write!(out, "{i}");
    } else if let Some(u) = n.as_u64() {
        let _ = write!(out, "{u}");
    } else {
        let x = n.as_f64().unwrap_or(f64::NAN);
        let _ = write!(out, "{x:.16e}");
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, k: usize| out.extend(std::iter::repeat(' ').take(k));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(out, n),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            // rows of scalars and [re, im] pairs stay on one line
            let flat = items.iter().all(|x| !x.is_object() && x.as_array().map_or(true, |a| a.iter().all(|y| !y.is_array() && !y.is_object())));
            if items.is_empty() {
                out.push_str("[]");
            } else if flat {
                out.push('[');
                for (k, x) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, indent);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (k, x) in items.iter().enumerate() {
                    pad(out, indent + 2);
                    write_value(out, x, indent + 2);
                    if k + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                pad(out, indent);
                out.push(']');
            }
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (k, (key, x)) in map.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, indent + 2);
                if k + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

/// Deterministic rendering: keys sorted, floats with 17
/// significant digits.
pub fn to_canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}
