use std::path::Path;

use serde_json::{json, Value};

use loday_core::cochain::Witness;
use loday_core::cohomology::{
    adjoint_cohomology_dims, coboundary, cohomology_dims, derivation_basis, differential_matrix,
    extension_equivalence, extension_from_cocycle,
};
use loday_core::deformation::{are_equivalent, universal_deformation};
use loday_core::io;
use loday_core::morphism::morphism_cohomology_dims;
use loday_core::shapes::{format_shape, shape_set};
use loday_core::{
    AlgebraSpec, CohomologyDims, Element, Error, Extension, QMatrix, Rational, RepresentationSpec,
    Result,
};

use crate::report::{sup, Report};
use crate::{RepArgs, Verb};

const MAX_DEGREE: usize = 5;
const MAX_ORDER: usize = 8;
/// Coordinates beyond which a size estimate is printed first.
const LARGE: usize = 20_000;

fn usage(msg: impl Into<String>) -> Error {
    Error::Format { path: "arguments".into(), message: msg.into() }
}

fn cap_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(usage(format!("degree must lie in 1..={MAX_DEGREE}, got {n}")));
    }
    Ok(())
}

fn cap_order(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        return Err(usage(format!("order must be at most {MAX_ORDER}, got {n}")));
    }
    Ok(())
}

fn estimate(what: &str, coords: usize) {
    if coords > LARGE {
        eprintln!("estimate: {what} has {coords} coordinates; this may take a while");
    }
}

fn name(p: &Path) -> String {
    p.display().to_string()
}

fn load_algebra(p: &Path) -> Result<AlgebraSpec> {
    load(p, io::parse_algebra)
}

fn relocate(p: &Path, e: Error) -> Error {
    match e {
        Error::Format { path, message } if !path.starts_with(&name(p)) => {
            Error::Format { path: format!("{}:{path}", name(p)), message }
        }
        other => other,
    }
}

fn load<T>(p: &Path, parse: fn(&Value, &str) -> Result<T>) -> Result<T> {
    parse(&io::read_json(p)?, "").map_err(|e| relocate(p, e))
}

fn write_json(p: &Path, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    std::fs::write(p, text + "\n").map_err(|e| Error::Format { path: name(p), message: e.to_string() })
}

fn witness_json(w: &Witness) -> Value {
    serde_json::to_value(w).expect("serializable")
}

fn nonzero_witnesses(e: &Element, limit: usize) -> Vec<Witness> {
    (0..e.len()).filter(|&k| !e.coeffs()[k].is_zero()).take(limit).map(|k| e.witness_at(k)).collect()
}

fn shapes_phrase(count: usize) -> String {
    if count == 1 {
        "1 shape".into()
    } else {
        format!("{count} shapes")
    }
}

fn dims_line(d: &CohomologyDims) -> String {
    let s = sup(d.degree);
    format!("Z{s}={} B{s}={} H{s}={}", d.cocycles, d.coboundaries, d.cohomology)
}

fn dims_json(d: &CohomologyDims) -> Value {
    serde_json::to_value(d).expect("serializable")
}

fn parse_inline_matrix(text: &str, dim: usize) -> Result<QMatrix> {
    let rows: Vec<Vec<Rational>> = text
        .split(';')
        .map(|r| r.split(',').map(|x| x.trim().parse()).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(usage(format!("expected a {dim}x{dim} matrix, got {text:?}")));
    }
    QMatrix::from_dense(&rows)
}

fn representation(a: &AlgebraSpec, r: &RepArgs) -> Result<RepresentationSpec> {
    match r.rep.as_str() {
        "adjoint" => Ok(a.adjoint()),
        "trivial" => Ok(a.trivial(r.mdim)),
        path => {
            let rep = load(Path::new(path), io::parse_representation)?;
            if &rep.base != a {
                return Err(Error::Context("representation is over a different algebra".into()));
            }
            Ok(rep)
        }
    }
}

pub fn run(verb: &Verb) -> Result<Report> {
    match verb {
        Verb::Shapes { family, n } => shapes(*family, *n),
        Verb::Validate { algebra } => validate(algebra),
        Verb::Cohomology { algebra, rep, n } => cohomology(algebra, rep, *n),
        Verb::Derivations { algebra } => derivations(algebra),
        Verb::DeformCheck { deformation, order } => deform_check(deformation, *order),
        Verb::DeformExtend { deformation, steps, out } => deform_extend(deformation, *steps, out.as_deref()),
        Verb::Obstruction { deformation } => obstruction(deformation),
        Verb::Equivalence { first, second, order } => equivalence(first, second, *order),
        Verb::Extension { algebra, cocycle, rep, compare } => {
            extension(algebra, cocycle, rep, compare.as_deref())
        }
        Verb::MorphismCohomology { morphism, n } => morphism_cohomology(morphism, *n),
        Verb::MorphismExtend { deformation, steps, out } => {
            morphism_extend(deformation, *steps, out.as_deref())
        }
        Verb::TwistValidate { algebra } => twist_validate(algebra),
        Verb::UniversalDeform { algebra, d, dbar, order, out } => {
            universal(algebra, d, dbar.as_deref(), *order, out.as_deref())
        }
    }
}

fn shapes(family: loday_core::Family, n: usize) -> Result<Report> {
    cap_degree(n)?;
    let set = shape_set(family, n);
    let mut r = Report::new("shapes", vec![]);
    for s in &set.shapes {
        r.line(format_shape(s));
    }
    r.result = json!({ "family": family.name(), "n": n, "count": set.len(), "shapes": set.labels });
    Ok(r)
}

fn validate(path: &Path) -> Result<Report> {
    let a = load_algebra(path)?;
    let mut r = Report::new("validate", vec![name(path)]);
    let sq = a.operad().square(a.pi())?;
    let count = shape_set(a.family, 3).len();
    let rule = if a.twist.is_some() { " under the twisted composition" } else { "" };
    let ws = nonzero_witnesses(&sq, 10);
    if ws.is_empty() {
        r.line(format!("multiplication verified on {} of U_3{rule}", shapes_phrase(count)));
    } else {
        r.ok = false;
        r.line(format!("not a multiplication{rule}: π∘π has nonzero coordinates"));
        for w in &ws {
            r.line(format!("  {w}"));
        }
    }
    r.witnesses = ws.iter().map(witness_json).collect();
    r.result = json!({ "multiplication": r.ok, "shapes": count, "twisted": a.twist.is_some() });
    Ok(r)
}

fn cohomology(path: &Path, rep: &RepArgs, n: usize) -> Result<Report> {
    cap_degree(n)?;
    let a = load_algebra(path)?;
    let mut r = Report::new("cohomology", vec![name(path)]);
    let adjoint = rep.rep == "adjoint";
    let dims = if adjoint {
        estimate("C^n(A, A)", shape_set(a.family, n + 1).len() * a.dim.pow(n as u32 + 2));
        adjoint_cohomology_dims(&a, n)?
    } else {
        if a.twist.is_some() {
            return Err(Error::Precondition("twisted algebras support adjoint coefficients only".into()));
        }
        let m = representation(&a, rep)?;
        estimate("C^n(A, M)", shape_set(a.family, n + 1).len() * a.dim.pow(n as u32 + 1) * m.mdim);
        cohomology_dims(&m, n)?
    };
    r.line(dims_line(&dims));
    if adjoint && n == 2 {
        r.line(if dims.cohomology == 0 {
            "H²=0 ⇒ π is rigid: every formal deformation is equivalent to the trivial one".to_string()
        } else {
            format!("H²={} ≠ 0: rigidity is not implied (H²=0 is a sufficient condition only)", dims.cohomology)
        });
    }
    if adjoint && n == 3 {
        r.line(if dims.cohomology == 0 {
            "H³=0 ⇒ every truncated deformation extends to the next order".to_string()
        } else {
            format!("H³={} ≠ 0: extensions may be obstructed", dims.cohomology)
        });
    }
    r.result = json!({ "rep": rep.rep, "dims": dims_json(&dims) });
    Ok(r)
}

fn derivations(path: &Path) -> Result<Report> {
    let a = load_algebra(path)?;
    if a.twist.is_some() {
        return Err(Error::Precondition("derivations are computed for untwisted algebras".into()));
    }
    let basis = derivation_basis(&a.adjoint())?;
    let mut r = Report::new("derivations", vec![name(path)]);
    r.line(format!("dim Z¹(A, A) = {}", basis.len()));
    let mut mats = Vec::new();
    for (k, d) in basis.iter().enumerate() {
        let m = d.to_matrix()?;
        let rows: Vec<String> = m
            .to_dense()
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        r.line(format!("D{} = {}", k + 1, rows.join(";")));
        mats.push(io::matrix_json(&m));
    }
    r.result = json!({ "dimension": basis.len(), "basis": mats });
    Ok(r)
}

fn deform_check(path: &Path, order: Option<usize>) -> Result<Report> {
    let d = load(path, io::parse_deformation)?;
    cap_order(d.order())?;
    let k = order.unwrap_or(d.order());
    let chk = d.is_deformation(k)?;
    let mut r = Report::new("deform-check", vec![name(path)]);
    if chk.holds {
        r.line(format!("deformation equations hold to order {k}"));
        if let Some((p, _, cocycle)) = d.infinitesimal()? {
            r.line(format!(
                "infinitesimal π_{p} is {}a 2-cocycle",
                if cocycle { "" } else { "not " }
            ));
        }
    } else {
        r.ok = false;
        let w = chk.witness.clone().expect("failing check");
        r.line(format!("equation fails at order {}: {w}", chk.order.unwrap_or_default()));
        r.witnesses.push(witness_json(&w));
    }
    r.result = json!({ "holds": chk.holds, "checked_order": k, "failing_order": chk.order });
    Ok(r)
}

fn report_obstruction(r: &mut Report, ob: &Element, order: usize) {
    r.ok = false;
    r.line(format!("obstructed: the order-{order} obstruction is not a coboundary"));
    r.line("obstruction cocycle coordinates:");
    for w in nonzero_witnesses(ob, usize::MAX) {
        r.line(format!("  {w}"));
        r.witnesses.push(witness_json(&w));
    }
}

fn deform_extend(path: &Path, steps: usize, out: Option<&Path>) -> Result<Report> {
    let mut d = load(path, io::parse_deformation)?;
    cap_order(d.order() + steps)?;
    estimate("C^3(A, A)", shape_set(d.base.family, 3).len() * d.base.dim.pow(4));
    let mut r = Report::new("deform-extend", vec![name(path)]);
    for _ in 0..steps {
        match d.extend()? {
            Extension::Extended(next) => {
                d = next;
                r.line(format!("extended to order {}", d.order()));
            }
            Extension::Obstructed(ob) => {
                report_obstruction(&mut r, &ob, d.order() + 1);
                break;
            }
        }
    }
    let v = io::deformation_json(&d);
    if r.ok {
        if let Some(p) = out {
            write_json(p, &v)?;
        }
    }
    r.result = json!({ "extended": r.ok, "order": d.order(), "deformation": v });
    Ok(r)
}

fn obstruction(path: &Path) -> Result<Report> {
    let d = load(path, io::parse_deformation)?;
    cap_order(d.order())?;
    let ob = d.obstruction()?;
    let op = d.operad();
    let cocycle = op.differential(d.base.pi(), &ob)?.is_zero();
    let exact = differential_matrix(&d.base, 2)?.solve(ob.coeffs())?.is_some();
    let mut r = Report::new("obstruction", vec![name(path)]);
    r.line(format!("order-{} obstruction: d_π(Ob) = 0 is {cocycle}", d.order() + 1));
    if exact {
        r.line("obstruction class vanishes: the deformation extends");
    } else {
        report_obstruction(&mut r, &ob, d.order() + 1);
    }
    r.result = json!({
        "order": d.order() + 1,
        "cocycle": cocycle,
        "class_zero": exact,
        "obstruction": io::cochain_json(&ob),
    });
    Ok(r)
}

fn equivalence(p1: &Path, p2: &Path, order: Option<usize>) -> Result<Report> {
    let d1 = load(p1, io::parse_deformation)?;
    let d2 = load(p2, io::parse_deformation)?;
    let k = order.unwrap_or(d1.order().min(d2.order()));
    cap_order(k)?;
    let mut r = Report::new("equivalence", vec![name(p1), name(p2)]);
    match are_equivalent(&d1, &d2, k)? {
        Some(phi) => {
            r.line(format!("equivalent to order {k}"));
            r.result = json!({ "equivalent": true, "order": k, "automorphism": io::automorphism_json(&phi) });
        }
        None => {
            r.ok = false;
            r.line(format!("not equivalent to order {k}"));
            r.result = json!({ "equivalent": false, "order": k });
        }
    }
    Ok(r)
}

fn extension(path: &Path, cocycle: &Path, rep: &RepArgs, compare: Option<&Path>) -> Result<Report> {
    let a = load_algebra(path)?;
    let m = representation(&a, rep)?;
    let f = load(cocycle, io::parse_cochain)?;
    let mut inputs = vec![name(path), name(cocycle)];
    if let Some(c) = compare {
        inputs.push(name(c));
    }
    let mut r = Report::new("extension", inputs);
    let df = coboundary(&m, &f)?;
    if let Some(w) = df.first_nonzero() {
        r.ok = false;
        r.line(format!("not a 2-cocycle: {w}"));
        r.witnesses.push(witness_json(&w));
        r.result = json!({ "cocycle": false });
        return Ok(r);
    }
    let ext = extension_from_cocycle(&m, &f)?;
    let valid = ext.total.validate()?.holds && ext.check(&a)?.holds;
    r.line(format!(
        "extension of dimension {} = {} + {} {}",
        ext.total.dim,
        a.dim,
        m.mdim,
        if valid { "verified" } else { "FAILED verification" }
    ));
    r.ok = valid;
    let mut result = json!({ "cocycle": true, "valid": valid, "total": io::algebra_json(&ext.total) });
    if let Some(c) = compare {
        let f2 = load(c, io::parse_cochain)?;
        match extension_equivalence(&m, &f, &f2)? {
            Some(g) => {
                r.line("extensions are equivalent via (a, m) ↦ (a, m + g(a))");
                result["equivalence"] = io::cochain_json(&g);
            }
            None => {
                r.ok = false;
                r.line("extensions are not equivalent: the cocycles differ by a non-coboundary");
                result["equivalence"] = Value::Null;
            }
        }
    }
    r.result = result;
    Ok(r)
}

fn morphism_cohomology(path: &Path, n: usize) -> Result<Report> {
    cap_degree(n)?;
    let f = load(path, io::parse_morphism)?;
    let mut r = Report::new("morphism-cohomology", vec![name(path)]);
    let v = f.check()?;
    if let Some(w) = v.witness {
        r.ok = false;
        r.line(format!("not an algebra morphism: {w}"));
        r.witnesses.push(witness_json(&w));
        r.result = json!({ "morphism": false });
        return Ok(r);
    }
    let dims = morphism_cohomology_dims(&f, n)?;
    r.line(dims_line(&dims));
    if n == 3 {
        r.line(if dims.cohomology == 0 {
            "H³=0 ⇒ every truncated morphism deformation extends".to_string()
        } else {
            format!("H³={} ≠ 0: extensions may be obstructed", dims.cohomology)
        });
    }
    r.result = json!({ "morphism": true, "dims": dims_json(&dims) });
    Ok(r)
}

fn morphism_extend(path: &Path, steps: usize, out: Option<&Path>) -> Result<Report> {
    let mut md = load(path, io::parse_morphism_deformation)?;
    cap_order(md.order() + steps)?;
    let mut r = Report::new("morphism-extend", vec![name(path)]);
    for _ in 0..steps {
        match md.extend()? {
            Extension::Extended(next) => {
                md = next;
                r.line(format!("extended to order {}", md.order()));
            }
            Extension::Obstructed(ob) => {
                r.ok = false;
                r.line(format!("obstructed at order {}", md.order() + 1));
                let parts = [("source", Some(&ob.phi)), ("target", Some(&ob.psi)), ("morphism", ob.zeta.as_ref())];
                for (label, part) in parts {
                    if let Some(e) = part {
                        for w in nonzero_witnesses(e, usize::MAX) {
                            r.line(format!("  {label}: {w}"));
                            r.witnesses.push(json!({ "component": label, "witness": witness_json(&w) }));
                        }
                    }
                }
                break;
            }
        }
    }
    let v = io::morphism_deformation_json(&md);
    if r.ok {
        if let Some(p) = out {
            write_json(p, &v)?;
        }
    }
    r.result = json!({ "extended": r.ok, "order": md.order(), "deformation": v });
    Ok(r)
}

fn twist_validate(path: &Path) -> Result<Report> {
    let a = load_algebra(path)?;
    let tw = a
        .twist
        .clone()
        .ok_or_else(|| Error::Precondition("the file carries no alpha/beta".into()))?;
    let plain = AlgebraSpec::new(a.pi().clone())?;
    let twisted_pi = tw.yau_twist(plain.pi())?;
    let twisted = AlgebraSpec::new(twisted_pi)?.with_twist(tw)?;
    let mut r = Report::new("twist-validate", vec![name(path)]);
    let count = shape_set(a.family, 3).len();
    r.line(format!("twisted multiplication verified under ∘′ on {} of U_3", shapes_phrase(count)));
    r.result = json!({ "valid": true, "twisted": io::algebra_json(&twisted) });
    Ok(r)
}

fn universal(path: &Path, d: &str, dbar: Option<&str>, order: usize, out: Option<&Path>) -> Result<Report> {
    cap_order(order)?;
    let a = load_algebra(path)?;
    let dm = Element::from_matrix(a.family, &parse_inline_matrix(d, a.dim)?);
    let bm = match dbar {
        Some(t) => Element::from_matrix(a.family, &parse_inline_matrix(t, a.dim)?),
        None => dm.clone(),
    };
    let def = universal_deformation(&a, &dm, &bm, order)?;
    let chk = def.is_deformation(order)?;
    let mut r = Report::new("universal-deform", vec![name(path)]);
    r.ok = chk.holds;
    if chk.holds {
        r.line(format!("universal deformation satisfies the deformation equations to order {order}"));
    } else {
        let w = chk.witness.clone().expect("failing check");
        r.line(format!("deformation equation fails at order {}: {w}", chk.order.unwrap_or_default()));
        r.witnesses.push(witness_json(&w));
    }
    let v = io::deformation_json(&def);
    if let Some(p) = out {
        write_json(p, &v)?;
    }
    r.result = json!({ "holds": chk.holds, "deformation": v });
    Ok(r)
}
