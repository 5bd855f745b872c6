// SPDX-License-Identifier: Apache-2.0

//! JSON documents for kernels, representations and cocycles.
//!
//! Complex numbers are `[re, im]`, matrices are lists of rows. Floats are
//! written in shortest round-trip form, so `to_doc ∘ from_doc` is the
//! identity on documents this module produced.

use crate::cocycles::{Cocycle, CocycleError, CocycleSource};
use crate::kernels::{normalize, DiscFactor, Family, KernelError, MatrixKernel};
use crate::representations::{LieRep, RepError};
use crate::{Mat, C64};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

fn invalid(msg: impl Into<String>) -> SpecError {
    SpecError::Invalid(msg.into())
}

// ---- serializers for complex data ------------------------------------------

struct Cx(C64);

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

struct Row<'a>(&'a [C64]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for &z in self.0 {
            seq.serialize_element(&Cx(z))?;
        }
        seq.end()
    }
}

struct MatJ<'a>(&'a Mat);

impl Serialize for MatJ<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m = self.0;
        let mut seq = s.serialize_seq(Some(m.nrows()))?;
        for i in 0..m.nrows() {
            let row: Vec<C64> = m.row(i).iter().copied().collect();
            seq.serialize_element(&Row(&row))?;
        }
        seq.end()
    }
}

pub fn ser_c64<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
    Cx(*z).serialize(s)
}

pub fn ser_point<S: Serializer>(p: &[C64], s: S) -> Result<S::Ok, S::Error> {
    Row(p).serialize(s)
}

pub fn ser_points<S: Serializer>(ps: &[Vec<C64>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(ps.len()))?;
    for p in ps {
        seq.serialize_element(&Row(p))?;
    }
    seq.end()
}

pub fn ser_matrix<S: Serializer>(m: &Mat, s: S) -> Result<S::Ok, S::Error> {
    MatJ(m).serialize(s)
}

pub fn ser_matrices<S: Serializer>(ms: &[Mat], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(ms.len()))?;
    for m in ms {
        seq.serialize_element(&MatJ(m))?;
    }
    seq.end()
}

pub fn ser_matrix_grid<S: Serializer>(grid: &[Vec<Mat>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(grid.len()))?;
    for row in grid {
        let ms: Vec<MatJ> = row.iter().map(MatJ).collect();
        seq.serialize_element(&ms)?;
    }
    seq.end()
}

/// `a+bi` with 12 significant digits.
pub fn format_c64(z: C64) -> String {
    let f = |x: f64| {
        let x = if x == 0.0 { 0.0 } else { x };
        let s = format!("{:.*e}", 11, x);
        // Back to plain notation when the exponent is modest.
        match s.split_once('e') {
            Some((_, e)) if (-5..12).contains(&e.parse::<i32>().unwrap_or(99)) => {
                let digits = (11 - e.parse::<i32>().unwrap()).max(0) as usize;
                let t = format!("{x:.digits$}");
                if t.contains('.') {
                    t.trim_end_matches('0').trim_end_matches('.').to_string()
                } else {
                    t
                }
            }
            _ => s,
        }
    };
    let im = f(z.im.abs());
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{im}i", f(z.re))
}

// ---- parsing helpers --------------------------------------------------------

pub fn value_to_c64(v: &Value) -> Result<C64, SpecError> {
    match v {
        Value::Number(n) => Ok(C64::new(n.as_f64().ok_or_else(|| invalid("bad number"))?, 0.0)),
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64().ok_or_else(|| invalid("complex entry needs numbers"))?;
            let im = a[1].as_f64().ok_or_else(|| invalid("complex entry needs numbers"))?;
            Ok(C64::new(re, im))
        }
        _ => Err(invalid(format!("expected a number or [re, im], got {v}"))),
    }
}

pub fn value_to_matrix(v: &Value) -> Result<Mat, SpecError> {
    let rows = v.as_array().ok_or_else(|| invalid("matrix must be a list of rows"))?;
    let r = rows.len();
    if r == 0 {
        return Err(invalid("empty matrix"));
    }
    let mut out = Vec::new();
    let mut cols = None;
    for row in rows {
        let row = row.as_array().ok_or_else(|| invalid("matrix row must be a list"))?;
        if *cols.get_or_insert(row.len()) != row.len() {
            return Err(invalid("ragged matrix"));
        }
        for e in row {
            out.push(value_to_c64(e)?);
        }
    }
    Ok(Mat::from_row_slice(r, cols.unwrap_or(0), &out))
}

fn matrix_value(m: &Mat) -> Value {
    serde_json::to_value(MatJ(m)).expect("matrices serialize")
}

fn field<'a>(params: &'a Value, name: &str) -> Result<&'a Value, SpecError> {
    params.get(name).ok_or_else(|| invalid(format!("missing parameter \"{name}\"")))
}

fn reals(params: &Value, name: &str) -> Result<Vec<f64>, SpecError> {
    Vec::<f64>::deserialize(field(params, name)?).map_err(|e| invalid(format!("\"{name}\": {e}")))
}

fn real(params: &Value, name: &str) -> Result<f64, SpecError> {
    field(params, name)?.as_f64().ok_or_else(|| invalid(format!("\"{name}\" must be a number")))
}

fn pair(params: &Value, name: &str) -> Result<(f64, f64), SpecError> {
    let v = reals(params, name)?;
    match v.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(invalid(format!("\"{name}\" must have two entries"))),
    }
}

pub fn read_json(path: &Path) -> Result<Value, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

// ---- kernels ----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelDoc {
    pub family: String,
    pub n: usize,
    pub rank: usize,
    pub params: Value,
}

pub fn kernel_to_doc(k: &MatrixKernel) -> Result<KernelDoc, SpecError> {
    let params = match k.family() {
        Family::Rank1Product { lambda } => json!({ "lambda": lambda }),
        Family::Rank2 { lambda, mu } => json!({ "lambda": lambda, "mu": mu }),
        Family::Rank3TypeI { lambda, mu1, mu2 } => json!({ "lambda": lambda, "mu": [mu1, mu2] }),
        Family::Rank3TypeII { alpha, beta1, beta2 } => json!({ "alpha": alpha, "beta": [beta1, beta2] }),
        Family::TensorProduct { factor, lambda } => {
            let f = match factor {
                None => Value::Null,
                Some(DiscFactor::Homogeneous3 { lambda, mu1, mu2 }) => {
                    json!({ "kind": "homogeneous3", "lambda": lambda, "mu": [mu1, mu2] })
                }
                Some(DiscFactor::Kernel(inner)) => json!({ "kind": "kernel", "kernel": kernel_to_doc(inner)? }),
            };
            json!({ "factor": f, "lambda": lambda })
        }
        Family::Twisted { base, a } => json!({ "base": kernel_to_doc(base)?, "a": matrix_value(a) }),
        Family::Permuted { base, sigma } => json!({ "base": kernel_to_doc(base)?, "sigma": sigma }),
        Family::DirectSum { parts } => {
            json!({ "parts": parts.iter().map(kernel_to_doc).collect::<Result<Vec<_>, _>>()? })
        }
        Family::Constant { matrix } => json!({ "matrix": matrix_value(matrix) }),
        Family::Normalized { base, .. } => json!({ "base": kernel_to_doc(base)? }),
        Family::Custom(_) => return Err(invalid("custom kernels have no JSON form")),
    };
    Ok(KernelDoc { family: k.family_name().to_string(), n: k.dim(), rank: k.rank(), params })
}

pub fn kernel_from_doc(doc: &KernelDoc) -> Result<MatrixKernel, SpecError> {
    let p = &doc.params;
    let sub = |name: &str| -> Result<MatrixKernel, SpecError> {
        kernel_from_doc(&KernelDoc::deserialize(field(p, name)?).map_err(|e| invalid(format!("\"{name}\": {e}")))?)
    };
    let k = match doc.family.as_str() {
        "rank1_product" => MatrixKernel::rank1(reals(p, "lambda")?)?,
        "rank2" => MatrixKernel::rank2(reals(p, "lambda")?, real(p, "mu")?)?,
        "rank3_type_i" => {
            let (m1, m2) = pair(p, "mu")?;
            MatrixKernel::type_i(reals(p, "lambda")?, m1, m2)?
        }
        "rank3_type_ii" => {
            let (b1, b2) = pair(p, "beta")?;
            MatrixKernel::type_ii(reals(p, "alpha")?, b1, b2)?
        }
        "tensor_product" => {
            let factor = match p.get("factor") {
                None | Some(Value::Null) => None,
                Some(f) => match f.get("kind").and_then(Value::as_str) {
                    Some("homogeneous3") => {
                        let (mu1, mu2) = pair(f, "mu")?;
                        Some(DiscFactor::Homogeneous3 { lambda: real(f, "lambda")?, mu1, mu2 })
                    }
                    Some("kernel") => {
                        let d = KernelDoc::deserialize(field(f, "kernel")?).map_err(|e| invalid(e.to_string()))?;
                        Some(DiscFactor::Kernel(Box::new(kernel_from_doc(&d)?)))
                    }
                    other => return Err(invalid(format!("unknown factor kind {other:?}"))),
                },
            };
            MatrixKernel::tensor_product(factor, reals(p, "lambda")?)?
        }
        "twisted" => MatrixKernel::twisted(sub("base")?, value_to_matrix(field(p, "a")?)?)?,
        "permuted" => {
            let sigma = Vec::<usize>::deserialize(field(p, "sigma")?).map_err(|e| invalid(format!("\"sigma\": {e}")))?;
            MatrixKernel::permuted(sub("base")?, sigma)?
        }
        "direct_sum" => {
            let docs = Vec::<KernelDoc>::deserialize(field(p, "parts")?).map_err(|e| invalid(format!("\"parts\": {e}")))?;
            MatrixKernel::direct_sum(docs.iter().map(kernel_from_doc).collect::<Result<_, _>>()?)?
        }
        "constant" => MatrixKernel::constant(doc.n, value_to_matrix(field(p, "matrix")?)?)?,
        "normalized" => normalize(&sub("base")?)?,
        other => return Err(invalid(format!("unknown kernel family \"{other}\""))),
    };
    if k.dim() != doc.n || k.rank() != doc.rank {
        return Err(invalid(format!("declared (n, rank) = ({}, {}) but the parameters give ({}, {})", doc.n, doc.rank, k.dim(), k.rank())));
    }
    Ok(k)
}

pub fn load_kernel(path: &Path) -> Result<MatrixKernel, SpecError> {
    let doc = KernelDoc::deserialize(read_json(path)?)?;
    kernel_from_doc(&doc)
}

// ---- representations ----------------------------------------------------------

pub fn rep_to_value(rho: &LieRep) -> Value {
    json!({
        "n": rho.n(),
        "r": rho.r(),
        "H": rho.h().iter().map(matrix_value).collect::<Vec<_>>(),
        "Y": rho.y().iter().map(matrix_value).collect::<Vec<_>>(),
    })
}

pub fn rep_from_value(v: &Value) -> Result<LieRep, SpecError> {
    let mats = |name: &str| -> Result<Vec<Mat>, SpecError> {
        field(v, name)?.as_array().ok_or_else(|| invalid(format!("\"{name}\" must be a list of matrices")))?.iter().map(value_to_matrix).collect()
    };
    let rho = LieRep::new(mats("H")?, mats("Y")?)?;
    let n = field(v, "n")?.as_u64().ok_or_else(|| invalid("\"n\" must be an integer"))? as usize;
    let r = field(v, "r")?.as_u64().ok_or_else(|| invalid("\"r\" must be an integer"))? as usize;
    if n != rho.n() || r != rho.r() {
        return Err(invalid(format!("declared (n, r) = ({n}, {r}) but matrices give ({}, {})", rho.n(), rho.r())));
    }
    Ok(rho)
}

pub fn load_rep(path: &Path) -> Result<LieRep, SpecError> {
    rep_from_value(&read_json(path)?)
}

// ---- cocycles -------------------------------------------------------------------

pub fn cocycle_to_value(j: &Cocycle) -> Value {
    let params = match j.source() {
        CocycleSource::ClosedRank1 { lambda }
        | CocycleSource::ClosedRank2 { lambda }
        | CocycleSource::ClosedRank3A { lambda }
        | CocycleSource::ClosedRank3B { lambda } => json!({ "lambda": lambda }),
        CocycleSource::ClosedRank3C { alpha } => json!({ "alpha": alpha }),
        CocycleSource::FromRep { rep, alpha } => json!({ "rep": rep_to_value(rep), "alpha": alpha }),
    };
    json!({ "source": j.source_name(), "params": params })
}

pub fn cocycle_from_value(v: &Value) -> Result<Cocycle, SpecError> {
    let p = field(v, "params")?;
    let src = field(v, "source")?.as_str().ok_or_else(|| invalid("\"source\" must be a string"))?;
    let j = match src {
        "closed_rank1" => Cocycle::closed_rank1(reals(p, "lambda")?)?,
        "closed_rank2" => Cocycle::closed_rank2(reals(p, "lambda")?)?,
        "closed_rank3a" => Cocycle::closed_rank3a(reals(p, "lambda")?)?,
        "closed_rank3b" => Cocycle::closed_rank3b(reals(p, "lambda")?)?,
        "closed_rank3c" => Cocycle::closed_rank3c(reals(p, "alpha")?)?,
        "from_rep" => Cocycle::from_rep(rep_from_value(field(p, "rep")?)?, reals(p, "alpha")?)?,
        other => return Err(invalid(format!("unknown cocycle source \"{other}\""))),
    };
    Ok(j)
}

pub fn load_cocycle(path: &Path) -> Result<Cocycle, SpecError> {
    cocycle_from_value(&read_json(path)?)
}

/// Parse `a`, `a+bi`, `a-bi`, `bi` or `[a,b]`.
pub fn parse_c64(s: &str) -> Result<C64, SpecError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.starts_with('[') {
        return value_to_c64(&serde_json::from_str(&t)?);
    }
    let bad = || invalid(format!("cannot parse complex number \"{s}\""));
    if let Some(body) = t.strip_suffix('i') {
        // Split at the last sign that is not an exponent sign or the leading one.
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => x.parse::<f64>().map_err(|_| bad())?,
        };
        return Ok(C64::new(re.parse::<f64>().map_err(|_| bad())?, im));
    }
    Ok(C64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0))
}

/// Comma-separated list of complex numbers.
pub fn parse_point(s: &str) -> Result<Vec<C64>, SpecError> {
    s.split(',').map(parse_c64).collect()
}
