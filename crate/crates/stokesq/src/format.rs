//! JSON interchange documents.
//!
//! Input formats: quiver-v1, localsys-v1, cover-v1. Output adds stokes-v1
//! plus the exponent and sector reports. Every scalar travels as an exact
//! lowest-terms rational string ("p" when integral, else "p/q") so nothing
//! passes through floating point; complex scalar slots are two-element
//! ["re","im"] arrays. Matrix entries are rational strings when real and
//! ["re","im"] arrays otherwise. Parsers additionally accept bare JSON
//! integers and bare scalar literals as real parts. Serialization is
//! canonical: parse -> serialize -> parse is the identity, byte for byte,
//! on any document this module emits.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::covers::{CoverKind, CoverSpec};
use crate::error::{Error, Result};
use crate::exact::{GaussRational, MatrixQi, Rational};
use crate::quiver::{Frame, LocalSystem, Quiver, QuiverNode};
use crate::stokes::{IdentityReport, StokesPair};

// ---------------------------------------------------------------------------
// Parsing. Errors carry a JSONPath-style location like $.nodes[0].u[1][2].
// ---------------------------------------------------------------------------

fn kind_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

/// Prefix a scalar-level parse error with the document path it occurred at.
fn at(path: &str, e: Error) -> Error {
    match e {
        Error::ParseError { message } => Error::parse(format!("{path}: {message}")),
        other => other,
    }
}

fn root_object(text: &str) -> Result<Map<String, Value>> {
    // serde_json's message already carries "at line L column C".
    let value: Value = serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))?;
    match value {
        Value::Object(map) => Ok(map),
        other => Err(Error::parse(format!(
            "expected a JSON object at the top level, found {}",
            kind_name(&other)
        ))),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::parse(format!("missing field {ctx}.{key}")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::parse(format!("{path}: expected an object, found {}", kind_name(v))))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a [Value]> {
    v.as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| Error::parse(format!("{path}: expected an array, found {}", kind_name(v))))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::parse(format!("{path}: expected a string, found {}", kind_name(v))))
}

fn as_count(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| {
            Error::parse(format!(
                "{path}: expected a non-negative integer, found {}",
                kind_name(v)
            ))
        })
}

fn as_power(v: &Value, path: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| Error::parse(format!("{path}: expected an integer power, found {}", kind_name(v))))
}

fn expect_format(obj: &Map<String, Value>, want: &str) -> Result<()> {
    let s = as_str(field(obj, "format", "$")?, "$.format")?;
    if s != want {
        return Err(Error::parse(format!("$.format is {s:?}, expected {want:?}")));
    }
    Ok(())
}

fn rational_value(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => s.parse().map_err(|e| at(path, e)),
        Value::Number(n) => n.as_i64().map(Rational::from_int).ok_or_else(|| {
            Error::parse(format!(
                "{path}: number {n} is not an exact integer; write it as a rational string"
            ))
        }),
        other => Err(Error::parse(format!(
            "{path}: expected a rational string or integer, found {}",
            kind_name(other)
        ))),
    }
}

/// A complex scalar slot: ["re","im"], or a bare string/integer read as a
/// real part (string literals may also spell a full complex value à la
/// "1/2-3/4i").
fn gauss_value(v: &Value, path: &str) -> Result<GaussRational> {
    match v {
        Value::Array(parts) => {
            if parts.len() != 2 {
                return Err(Error::parse(format!(
                    "{path}: a complex scalar is [re, im]; found {} entries",
                    parts.len()
                )));
            }
            let re = rational_value(&parts[0], &format!("{path}[0]"))?;
            let im = rational_value(&parts[1], &format!("{path}[1]"))?;
            Ok(GaussRational::new(re, im))
        }
        Value::String(s) => s.parse().map_err(|e| at(path, e)),
        Value::Number(_) => rational_value(v, path).map(GaussRational::from_rational),
        other => Err(Error::parse(format!(
            "{path}: expected a scalar or [re, im] pair, found {}",
            kind_name(other)
        ))),
    }
}

fn matrix_value(v: &Value, path: &str) -> Result<MatrixQi> {
    let rows_v = as_array(v, path)?;
    let mut rows = Vec::with_capacity(rows_v.len());
    for (i, row_v) in rows_v.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let entries_v = as_array(row_v, &row_path)?;
        let mut row = Vec::with_capacity(entries_v.len());
        for (j, e) in entries_v.iter().enumerate() {
            row.push(gauss_value(e, &format!("{row_path}[{j}]"))?);
        }
        rows.push(row);
    }
    MatrixQi::from_rows(rows).map_err(|e| match e {
        Error::DimensionMismatch { context } => Error::dims(format!("{path}: {context}")),
        other => other,
    })
}

fn frame_value(v: &Value) -> Result<Frame> {
    let obj = as_object(v, "$.frame")?;
    let alpha = gauss_value(field(obj, "alpha", "$.frame")?, "$.frame.alpha")?;
    let beta = gauss_value(field(obj, "beta", "$.frame")?, "$.frame.beta")?;
    Frame::new(alpha, beta)
}

/// Parse and validate a quiver-v1 document into an ordered quiver.
pub fn parse_quiver_document(text: &str) -> Result<Quiver> {
    let obj = root_object(text)?;
    expect_format(&obj, "quiver-v1")?;
    let frame = frame_value(field(&obj, "frame", "$")?)?;
    let psi_dim = as_count(field(&obj, "psi_dim", "$")?, "$.psi_dim")?;
    let nodes_v = as_array(field(&obj, "nodes", "$")?, "$.nodes")?;
    let mut nodes = Vec::with_capacity(nodes_v.len());
    for (i, node_v) in nodes_v.iter().enumerate() {
        let path = format!("$.nodes[{i}]");
        let node_obj = as_object(node_v, &path)?;
        let c = gauss_value(field(node_obj, "c", &path)?, &format!("{path}.c"))?;
        let mut u = matrix_value(field(node_obj, "u", &path)?, &format!("{path}.u"))?;
        let mut v = matrix_value(field(node_obj, "v", &path)?, &format!("{path}.v"))?;
        // An empty JSON array carries no column count, so restore the
        // shapes a zero-dimensional vanishing-cycle space implies.
        if u.rows() == 0 {
            u = MatrixQi::zero(0, psi_dim);
        }
        if v.rows() == 0 {
            v = MatrixQi::zero(0, u.rows());
        }
        nodes.push(QuiverNode::new(c, u, v));
    }
    Quiver::new(frame, psi_dim, nodes)
}

/// Parse and validate a localsys-v1 document. The rank is not a document
/// field; it is read off the monodromy matrices.
pub fn parse_local_system_document(text: &str) -> Result<LocalSystem> {
    let obj = root_object(text)?;
    expect_format(&obj, "localsys-v1")?;
    let frame = frame_value(field(&obj, "frame", "$")?)?;
    let points_v = as_array(field(&obj, "points", "$")?, "$.points")?;
    let mut points = Vec::with_capacity(points_v.len());
    for (i, p) in points_v.iter().enumerate() {
        points.push(gauss_value(p, &format!("$.points[{i}]"))?);
    }
    let monos_v = as_array(field(&obj, "monodromies", "$")?, "$.monodromies")?;
    let mut monodromies = Vec::with_capacity(monos_v.len());
    for (i, m) in monos_v.iter().enumerate() {
        monodromies.push(matrix_value(m, &format!("$.monodromies[{i}]"))?);
    }
    let rank = monodromies.first().map_or(0, MatrixQi::rows);
    LocalSystem::new(frame, rank, points, monodromies)
}

/// Parse a cover-v1 document. Polynomial coefficients are ascending from
/// the constant term; laurent coefficients are [power, coefficient] pairs.
pub fn parse_cover_document(text: &str) -> Result<CoverSpec> {
    let obj = root_object(text)?;
    expect_format(&obj, "cover-v1")?;
    let kind = as_str(field(&obj, "kind", "$")?, "$.kind")?;
    let coeffs_v = as_array(field(&obj, "coefficients", "$")?, "$.coefficients")?;
    match kind {
        "polynomial" => {
            let mut coeffs = Vec::with_capacity(coeffs_v.len());
            for (k, c) in coeffs_v.iter().enumerate() {
                coeffs.push(gauss_value(c, &format!("$.coefficients[{k}]"))?);
            }
            CoverSpec::polynomial(coeffs)
        }
        "laurent" => {
            let mut pairs = Vec::with_capacity(coeffs_v.len());
            for (i, pair_v) in coeffs_v.iter().enumerate() {
                let path = format!("$.coefficients[{i}]");
                let parts = as_array(pair_v, &path)?;
                if parts.len() != 2 {
                    return Err(Error::parse(format!(
                        "{path}: expected [power, coefficient], found {} entries",
                        parts.len()
                    )));
                }
                let power = as_power(&parts[0], &format!("{path}[0]"))?;
                let coeff = gauss_value(&parts[1], &format!("{path}[1]"))?;
                pairs.push((power, coeff));
            }
            CoverSpec::laurent(pairs)
        }
        other => Err(Error::parse(format!(
            "$.kind is {other:?}, expected \"polynomial\" or \"laurent\""
        ))),
    }
}

// ---------------------------------------------------------------------------
// Serialization. Field order is fixed by the struct declarations below and
// the writer is deterministic, which is what makes round-trips bit-exact.
// ---------------------------------------------------------------------------

fn pair(g: &GaussRational) -> [String; 2] {
    [g.re.to_string(), g.im.to_string()]
}

fn entry(g: &GaussRational) -> Value {
    if g.im.is_zero() {
        Value::String(g.re.to_string())
    } else {
        json!([g.re.to_string(), g.im.to_string()])
    }
}

fn matrix_rows(m: &MatrixQi) -> Vec<Vec<Value>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| entry(m.get(i, j))).collect())
        .collect()
}

#[derive(Serialize)]
struct FrameDoc {
    alpha: [String; 2],
    beta: [String; 2],
}

fn frame_doc(f: &Frame) -> FrameDoc {
    FrameDoc {
        alpha: pair(f.alpha()),
        beta: pair(f.beta()),
    }
}

#[derive(Serialize)]
struct NodeDoc {
    c: [String; 2],
    u: Vec<Vec<Value>>,
    v: Vec<Vec<Value>>,
}

#[derive(Serialize)]
struct QuiverDoc {
    format: &'static str,
    frame: FrameDoc,
    psi_dim: usize,
    nodes: Vec<NodeDoc>,
}

fn emit<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("document serialization cannot fail")
}

/// Canonical quiver-v1 text.
pub fn serialize_quiver(q: &Quiver) -> String {
    emit(&QuiverDoc {
        format: "quiver-v1",
        frame: frame_doc(q.frame()),
        psi_dim: q.psi_dim(),
        nodes: q
            .nodes()
            .iter()
            .map(|n| NodeDoc {
                c: pair(&n.point),
                u: matrix_rows(&n.u),
                v: matrix_rows(&n.v),
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct LocalSysDoc {
    format: &'static str,
    frame: FrameDoc,
    points: Vec<[String; 2]>,
    monodromies: Vec<Vec<Vec<Value>>>,
}

/// Canonical localsys-v1 text.
pub fn serialize_local_system(ls: &LocalSystem) -> String {
    emit(&LocalSysDoc {
        format: "localsys-v1",
        frame: frame_doc(ls.frame()),
        points: ls.points().iter().map(pair).collect(),
        monodromies: ls.monodromies().iter().map(matrix_rows).collect(),
    })
}

#[derive(Serialize)]
struct CoverDoc {
    format: &'static str,
    kind: &'static str,
    coefficients: Value,
}

/// Canonical cover-v1 text. Polynomial coefficients come out dense and
/// ascending (zeros included); laurent terms come out sparse, ascending
/// by power.
pub fn serialize_cover(f: &CoverSpec) -> String {
    let (kind, coefficients) = match f.kind() {
        CoverKind::Polynomial => {
            let top = f.terms().iter().map(|(k, _)| *k).max().unwrap_or(0);
            let mut dense = vec![GaussRational::zero(); (top + 1) as usize];
            for (k, a) in f.terms() {
                dense[*k as usize] = a.clone();
            }
            ("polynomial", Value::Array(dense.iter().map(entry).collect()))
        }
        CoverKind::Laurent => (
            "laurent",
            Value::Array(
                f.terms()
                    .iter()
                    .map(|(k, a)| json!([k, entry(a)]))
                    .collect(),
            ),
        ),
    };
    emit(&CoverDoc {
        format: "cover-v1",
        kind,
        coefficients,
    })
}

#[derive(Serialize)]
struct IdentityChecksDoc {
    phi: bool,
    psi: bool,
}

#[derive(Serialize)]
struct StokesDoc {
    format: &'static str,
    order: Vec<[String; 2]>,
    block_dims: Vec<usize>,
    #[serde(rename = "S_plus")]
    s_plus: Vec<Vec<Value>>,
    #[serde(rename = "S_minus")]
    s_minus: Vec<Vec<Value>>,
    #[serde(rename = "S_plus_inverse")]
    s_plus_inverse: Vec<Vec<Value>>,
    identity_checks: IdentityChecksDoc,
}

/// stokes-v1 text for a computed multiplier pair.
pub fn serialize_stokes(
    pair_data: &StokesPair,
    s_plus_inverse: &MatrixQi,
    checks: &IdentityReport,
) -> String {
    emit(&StokesDoc {
        format: "stokes-v1",
        order: pair_data.order.iter().map(pair).collect(),
        block_dims: pair_data.block_dims.clone(),
        s_plus: matrix_rows(&pair_data.s_plus),
        s_minus: matrix_rows(&pair_data.s_minus),
        s_plus_inverse: matrix_rows(s_plus_inverse),
        identity_checks: IdentityChecksDoc {
            phi: checks.phi_holds,
            psi: checks.psi_holds,
        },
    })
}

#[derive(Serialize)]
struct ExponentDoc {
    c: [String; 2],
    multiplicity: usize,
}

#[derive(Serialize)]
struct ExponentsDoc {
    format: &'static str,
    exponents: Vec<ExponentDoc>,
}

/// Exponent report: the linear exponents at infinity with multiplicities.
pub fn serialize_exponents(components: &[(GaussRational, usize)]) -> String {
    emit(&ExponentsDoc {
        format: "exponents-v1",
        exponents: components
            .iter()
            .map(|(c, d)| ExponentDoc {
                c: pair(c),
                multiplicity: *d,
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct SectorEntryDoc {
    name: String,
    matrix: Vec<Vec<Value>>,
}

#[derive(Serialize)]
struct SectorDoc {
    format: &'static str,
    example: &'static str,
    sectors: Vec<SectorEntryDoc>,
}

/// Sector report for a built-in example.
pub fn serialize_sectors(example: &'static str, sectors: &[(String, MatrixQi)]) -> String {
    emit(&SectorDoc {
        format: "sector-v1",
        example,
        sectors: sectors
            .iter()
            .map(|(name, m)| SectorEntryDoc {
                name: name.clone(),
                matrix: matrix_rows(m),
            })
            .collect(),
    })
}
