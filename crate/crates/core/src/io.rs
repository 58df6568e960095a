//! JSON file formats.
//!
//! Numbers are JSON integers or strings `"p/q"`. Products are keyed by the
//! `U_2` shape string: `products[label][i][j]` is the coordinate vector of
//! `e_i ∘_label e_j`. Labels left out are zero; unknown keys are rejected.

use std::collections::BTreeSet;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::algebra::{AlgebraSpec, Bilinear, MorphismSpec, RepresentationSpec};
use crate::cochain::{Cochain, Element};
use crate::deformation::{FormalAutomorphism, TruncatedDeformation};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::morphism::MorphismDeformation;
use crate::rational::Rational;
use crate::shapes::{format_shape, shape_set, Family};
use crate::twisted::TwistPair;

fn fmt_err(path: &str, message: impl Into<String>) -> Error {
    Error::Format { path: if path.is_empty() { "$".into() } else { path.into() }, message: message.into() }
}

fn sub(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn at(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

/// Reads a file into a JSON value; syntax errors carry line and column.
pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fmt_err(&path.display().to_string(), e.to_string()))?;
    parse_json(&text).map_err(|e| match e {
        Error::Format { path: p, message } => Error::Format { path: format!("{}:{p}", path.display()), message },
        other => other,
    })
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| fmt_err(&format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, path: &str, allowed: &[&str]) -> Result<Self> {
        let map = v.as_object().ok_or_else(|| fmt_err(path, "expected an object"))?;
        for k in map.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(fmt_err(&sub(path, k), format!("unknown field; expected one of {allowed:?}")));
            }
        }
        Ok(Obj { map, path: path.to_string() })
    }

    fn req(&self, key: &str) -> Result<&'a Value> {
        self.map.get(key).ok_or_else(|| fmt_err(&self.path, format!("missing field {key:?}")))
    }

    fn opt(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key)
    }

    fn path(&self, key: &str) -> String {
        sub(&self.path, key)
    }

    fn usize(&self, key: &str) -> Result<usize> {
        let v = self.req(key)?;
        v.as_u64().map(|x| x as usize).ok_or_else(|| fmt_err(&self.path(key), "expected a non-negative integer"))
    }
}

fn parse_rational(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Rational::from_int)
            .ok_or_else(|| fmt_err(path, "numbers must be integers or \"p/q\" strings")),
        Value::String(s) => s.parse().map_err(|e: Error| fmt_err(path, e.to_string())),
        _ => Err(fmt_err(path, "expected a number")),
    }
}

fn rational_json(r: &Rational) -> Value {
    match r.to_string().parse::<i64>() {
        Ok(i) if r.is_integer() => json!(i),
        _ => json!(r.to_string()),
    }
}

fn array<'a>(v: &'a Value, path: &str, len: usize) -> Result<&'a Vec<Value>> {
    let a = v.as_array().ok_or_else(|| fmt_err(path, "expected an array"))?;
    if a.len() != len {
        return Err(fmt_err(path, format!("expected {len} entries, found {}", a.len())));
    }
    Ok(a)
}

fn parse_vector(v: &Value, path: &str, len: usize) -> Result<Vec<Rational>> {
    array(v, path, len)?.iter().enumerate().map(|(i, x)| parse_rational(x, &at(path, i))).collect()
}

pub fn parse_matrix(v: &Value, path: &str, rows: usize, cols: usize) -> Result<QMatrix> {
    let r = array(v, path, rows)?
        .iter()
        .enumerate()
        .map(|(i, row)| parse_vector(row, &at(path, i), cols))
        .collect::<Result<Vec<_>>>()?;
    if rows == 0 {
        return Ok(QMatrix::zeros(0, cols));
    }
    QMatrix::from_dense(&r)
}

pub fn matrix_json(m: &QMatrix) -> Value {
    Value::Array(
        m.to_dense().iter().map(|row| Value::Array(row.iter().map(rational_json).collect())).collect(),
    )
}

fn parse_bilinear(
    v: &Value,
    path: &str,
    family: Family,
    (left, right, out): (usize, usize, usize),
) -> Result<Bilinear> {
    let set = shape_set(family, 2);
    let map = v.as_object().ok_or_else(|| fmt_err(path, "expected an object keyed by shape"))?;
    let mut b = Bilinear::zero(family, left, right, out);
    for (label, table) in map {
        let p = sub(path, label);
        let s = set.index_of_label(label).map_err(|e| fmt_err(&p, e.to_string()))?;
        for (i, row) in array(table, &p, left)?.iter().enumerate() {
            let pi = at(&p, i);
            for (j, cell) in array(row, &pi, right)?.iter().enumerate() {
                let vals = parse_vector(cell, &at(&pi, j), out)?;
                for (o, x) in vals.into_iter().enumerate() {
                    b.set(s, i, j, o, x);
                }
            }
        }
    }
    Ok(b)
}

fn bilinear_json(b: &Bilinear) -> Value {
    let set = shape_set(b.family, 2);
    let mut map = Map::new();
    for (s, label) in set.labels.iter().enumerate() {
        let table: Vec<Value> = (0..b.left)
            .map(|i| {
                Value::Array(
                    (0..b.right)
                        .map(|j| Value::Array(b.basis(s, i, j).iter().map(rational_json).collect()))
                        .collect(),
                )
            })
            .collect();
        map.insert(label.clone(), Value::Array(table));
    }
    Value::Object(map)
}

fn parse_family(v: &Value, path: &str) -> Result<Family> {
    let s = v.as_str().ok_or_else(|| fmt_err(path, "expected a family name"))?;
    s.parse().map_err(|e: Error| fmt_err(path, e.to_string()))
}

fn element_from_products(v: &Value, path: &str, family: Family, dim: usize) -> Result<Element> {
    parse_bilinear(v, path, family, (dim, dim, dim))?.to_element()
}

fn element_products_json(e: &Element) -> Value {
    bilinear_json(&Bilinear::from_element(e).expect("arity 2"))
}

/// `{"family", "dim", "products", "alpha"?, "beta"?}`; a lone `alpha` or
/// `beta` pairs with the identity.
pub fn parse_algebra(v: &Value, path: &str) -> Result<AlgebraSpec> {
    let o = Obj::new(v, path, &["family", "dim", "products", "alpha", "beta"])?;
    let family = parse_family(o.req("family")?, &o.path("family"))?;
    let dim = o.usize("dim")?;
    if dim == 0 {
        return Err(fmt_err(&o.path("dim"), "dimension must be positive"));
    }
    let pi = element_from_products(o.req("products")?, &o.path("products"), family, dim)?;
    let mut spec = AlgebraSpec::new(pi)?;
    if o.opt("alpha").is_some() || o.opt("beta").is_some() {
        let get = |k: &str| match o.opt(k) {
            Some(m) => parse_matrix(m, &o.path(k), dim, dim),
            None => Ok(QMatrix::identity(dim)),
        };
        let tw = TwistPair::from_matrices(family, &get("alpha")?, &get("beta")?)
            .map_err(|e| fmt_err(&o.path("alpha"), e.to_string()))?;
        spec = spec.with_twist(tw)?;
    }
    Ok(spec)
}

pub fn algebra_json(a: &AlgebraSpec) -> Value {
    let mut m = Map::new();
    m.insert("family".into(), json!(a.family.name()));
    m.insert("dim".into(), json!(a.dim));
    m.insert("products".into(), element_products_json(a.pi()));
    if let Some(tw) = &a.twist {
        m.insert("alpha".into(), matrix_json(&tw.alpha().to_matrix().expect("arity 1")));
        m.insert("beta".into(), matrix_json(&tw.beta().to_matrix().expect("arity 1")));
    }
    Value::Object(m)
}

/// `{"algebra", "mdim", "theta1", "theta2"}` with `theta1[label][a][m]` and
/// `theta2[label][m][a]` vectors in `M`.
pub fn parse_representation(v: &Value, path: &str) -> Result<RepresentationSpec> {
    let o = Obj::new(v, path, &["algebra", "mdim", "theta1", "theta2"])?;
    let base = parse_algebra(o.req("algebra")?, &o.path("algebra"))?;
    let m = o.usize("mdim")?;
    let (f, d) = (base.family, base.dim);
    let t1 = parse_bilinear(o.req("theta1")?, &o.path("theta1"), f, (d, m, m))?;
    let t2 = parse_bilinear(o.req("theta2")?, &o.path("theta2"), f, (m, d, m))?;
    RepresentationSpec::new(base, m, t1, t2)
}

pub fn representation_json(r: &RepresentationSpec) -> Value {
    json!({
        "algebra": algebra_json(&r.base),
        "mdim": r.mdim,
        "theta1": bilinear_json(&r.theta1),
        "theta2": bilinear_json(&r.theta2),
    })
}

/// `{"source", "target"?, "matrix"}`; the matrix is `dim B × dim A`.
pub fn parse_morphism(v: &Value, path: &str) -> Result<MorphismSpec> {
    let o = Obj::new(v, path, &["source", "target", "matrix"])?;
    let source = parse_algebra(o.req("source")?, &o.path("source"))?;
    let target = match o.opt("target") {
        Some(t) => parse_algebra(t, &o.path("target"))?,
        None => source.clone(),
    };
    let m = parse_matrix(o.req("matrix")?, &o.path("matrix"), target.dim, source.dim)?;
    MorphismSpec::new(source, target, m)
}

pub fn morphism_json(f: &MorphismSpec) -> Value {
    json!({
        "source": algebra_json(&f.source),
        "target": algebra_json(&f.target),
        "matrix": matrix_json(&f.matrix),
    })
}

fn parse_terms(v: &Value, path: &str, order: usize, base: &AlgebraSpec) -> Result<Vec<Element>> {
    array(v, path, order)?
        .iter()
        .enumerate()
        .map(|(i, t)| element_from_products(t, &at(path, i), base.family, base.dim))
        .collect()
}

/// `{"base", "order", "terms": [π_1, …, π_N]}`, each term a products object.
pub fn parse_deformation(v: &Value, path: &str) -> Result<TruncatedDeformation> {
    let o = Obj::new(v, path, &["base", "order", "terms"])?;
    let base = parse_algebra(o.req("base")?, &o.path("base"))?;
    let order = o.usize("order")?;
    let terms = parse_terms(o.req("terms")?, &o.path("terms"), order, &base)?;
    TruncatedDeformation::new(base, terms)
}

pub fn deformation_json(d: &TruncatedDeformation) -> Value {
    json!({
        "base": algebra_json(&d.base),
        "order": d.order(),
        "terms": d.terms()[1..].iter().map(element_products_json).collect::<Vec<_>>(),
    })
}

/// `{"family", "dim", "terms": [φ_1, …, φ_N]}` as square matrices.
pub fn parse_automorphism(v: &Value, path: &str) -> Result<FormalAutomorphism> {
    let o = Obj::new(v, path, &["family", "dim", "terms"])?;
    let family = parse_family(o.req("family")?, &o.path("family"))?;
    let dim = o.usize("dim")?;
    let p = o.path("terms");
    let arr = o.req("terms")?.as_array().ok_or_else(|| fmt_err(&p, "expected an array"))?;
    let mut terms = vec![Element::identity(family, dim)];
    for (i, m) in arr.iter().enumerate() {
        terms.push(Element::from_matrix(family, &parse_matrix(m, &at(&p, i), dim, dim)?));
    }
    FormalAutomorphism::from_terms(terms)
}

pub fn automorphism_json(a: &FormalAutomorphism) -> Value {
    let first = &a.terms()[0];
    json!({
        "family": first.family().name(),
        "dim": first.in_dim(),
        "terms": a.terms()[1..].iter().map(|t| matrix_json(&t.to_matrix().expect("arity 1"))).collect::<Vec<_>>(),
    })
}

/// Morphism fields plus `order`, `source_terms`, `target_terms`, `fterms`.
pub fn parse_morphism_deformation(v: &Value, path: &str) -> Result<MorphismDeformation> {
    let o = Obj::new(
        v,
        path,
        &["source", "target", "matrix", "order", "source_terms", "target_terms", "fterms"],
    )?;
    let mut m = Map::new();
    for k in ["source", "target", "matrix"] {
        if let Some(x) = o.opt(k) {
            m.insert(k.into(), x.clone());
        }
    }
    let f = parse_morphism(&Value::Object(m), path)?;
    let order = o.usize("order")?;
    let sa = parse_terms(o.req("source_terms")?, &o.path("source_terms"), order, &f.source)?;
    let sb = parse_terms(o.req("target_terms")?, &o.path("target_terms"), order, &f.target)?;
    let p = o.path("fterms");
    let ft = array(o.req("fterms")?, &p, order)?
        .iter()
        .enumerate()
        .map(|(i, m)| parse_matrix(m, &at(&p, i), f.target.dim, f.source.dim))
        .collect::<Result<Vec<_>>>()?;
    MorphismDeformation::new(
        &f,
        TruncatedDeformation::new(f.source.clone(), sa)?,
        TruncatedDeformation::new(f.target.clone(), sb)?,
        ft,
    )
}

pub fn morphism_deformation_json(md: &MorphismDeformation) -> Value {
    let f = md.morphism();
    json!({
        "source": algebra_json(&f.source),
        "target": algebra_json(&f.target),
        "matrix": matrix_json(&f.matrix),
        "order": md.order(),
        "source_terms": md.source.terms()[1..].iter().map(element_products_json).collect::<Vec<_>>(),
        "target_terms": md.target.terms()[1..].iter().map(element_products_json).collect::<Vec<_>>(),
        "fterms": md.fterms()[1..].iter().map(matrix_json).collect::<Vec<_>>(),
    })
}

/// Sparse form `{"family", "arity", "in_dim", "out_dim", "entries": [{"shape", "inputs", "output", "value"}]}`.
pub fn parse_cochain(v: &Value, path: &str) -> Result<Cochain> {
    let o = Obj::new(v, path, &["family", "arity", "in_dim", "out_dim", "entries"])?;
    let family = parse_family(o.req("family")?, &o.path("family"))?;
    let arity = o.usize("arity")?;
    if arity == 0 {
        return Err(fmt_err(&o.path("arity"), "arity must be positive"));
    }
    let (ind, outd) = (o.usize("in_dim")?, o.usize("out_dim")?);
    let set = shape_set(family, arity);
    let mut c = Cochain::zero(family, arity, ind, outd);
    let p = o.path("entries");
    let arr = o.req("entries")?.as_array().ok_or_else(|| fmt_err(&p, "expected an array"))?;
    let mut seen = BTreeSet::new();
    for (k, e) in arr.iter().enumerate() {
        let pe = at(&p, k);
        let eo = Obj::new(e, &pe, &["shape", "inputs", "output", "value"])?;
        let label = eo.req("shape")?.as_str().ok_or_else(|| fmt_err(&eo.path("shape"), "expected a string"))?;
        let s = set.index_of_label(label).map_err(|e| fmt_err(&eo.path("shape"), e.to_string()))?;
        let ip = eo.path("inputs");
        let inputs = array(eo.req("inputs")?, &ip, arity)?
            .iter()
            .enumerate()
            .map(|(i, x)| match x.as_u64() {
                Some(t) if (t as usize) < ind => Ok(t as usize),
                _ => Err(fmt_err(&at(&ip, i), format!("expected an index below {ind}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let out = eo.usize("output")?;
        if out >= outd {
            return Err(fmt_err(&eo.path("output"), format!("expected an index below {outd}")));
        }
        let idx = c.index(s, &inputs, out);
        if !seen.insert(idx) {
            return Err(fmt_err(&pe, "duplicate entry"));
        }
        c.set(s, &inputs, out, parse_rational(eo.req("value")?, &eo.path("value"))?);
    }
    Ok(c)
}

pub fn cochain_json(c: &Cochain) -> Value {
    let set = shape_set(c.family(), c.arity());
    let entries: Vec<Value> = (0..c.len())
        .filter(|&k| !c.coeffs()[k].is_zero())
        .map(|k| {
            let (s, inputs, out) = c.locate(k);
            json!({
                "shape": format_shape(&set.shapes[s]),
                "inputs": inputs,
                "output": out,
                "value": rational_json(&c.coeffs()[k]),
            })
        })
        .collect();
    json!({
        "family": c.family().name(),
        "arity": c.arity(),
        "in_dim": c.in_dim(),
        "out_dim": c.out_dim(),
        "entries": entries,
    })
}
