//! Deformations of a morphism `f : A → B` together with both algebras.
//!
//! The complex is `C^n_f = C^n(A, A) ⊕ C^n(B, B) ⊕ C^{n−1}(A, B)` where `B`
//! is an `A`-representation through `f`, with
//! `D_f(φ, ψ, ζ) = (Dφ, Dψ, f ∘ φ − ψ ∘ f^{⊗n} − Dζ)` and every `D` the
//! `d_π`-normalized coboundary `(−1)^{n−1} δ`.

use serde::Serialize;

use crate::algebra::{AlgebraSpec, Bilinear, MorphismSpec, RepresentationSpec};
use crate::cochain::{decode_tuple, ipow, Element, MCochain, Witness};
use crate::cohomology::{adjoint_sign, coboundary_matrix, CohomologyDims};
use crate::deformation::{Extension, FormalAutomorphism, TruncatedDeformation};
use crate::error::{dim_err, Error, Result};
use crate::linalg::QMatrix;
use crate::rational::Rational;
use crate::shapes::shape_set;

/// `B` as an `A`-representation: `θ1(a, b) = π_B(f a, b)`, `θ2(b, a) = π_B(b, f a)`.
pub fn pullback_representation(f: &MorphismSpec) -> Result<RepresentationSpec> {
    let (a, b) = (&f.source, &f.target);
    let fam = a.family;
    let pb = b.bilinear();
    let shapes = shape_set(fam, 2).len();
    let mut t1 = Bilinear::zero(fam, a.dim, b.dim, b.dim);
    let mut t2 = Bilinear::zero(fam, b.dim, a.dim, b.dim);
    for s in 0..shapes {
        for i in 0..a.dim {
            for k in 0..b.dim {
                let c = f.matrix.get(k, i);
                if c.is_zero() {
                    continue;
                }
                for j in 0..b.dim {
                    for o in 0..b.dim {
                        let v1 = pb.get(s, k, j, o);
                        if !v1.is_zero() {
                            let x = t1.get(s, i, j, o) + &(&c * v1);
                            t1.set(s, i, j, o, x);
                        }
                        let v2 = pb.get(s, j, k, o);
                        if !v2.is_zero() {
                            let x = t2.get(s, j, i, o) + &(&c * v2);
                            t2.set(s, j, i, o, x);
                        }
                    }
                }
            }
        }
    }
    RepresentationSpec::new(a.clone(), b.dim, t1, t2)
}

/// An element `(φ, ψ, ζ)` of `C^n_f`; `ζ` is absent in degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismCochain {
    pub phi: Element,
    pub psi: Element,
    pub zeta: Option<MCochain>,
}

impl MorphismCochain {
    pub fn degree(&self) -> usize {
        self.phi.arity()
    }

    pub fn is_zero(&self) -> bool {
        self.phi.is_zero() && self.psi.is_zero() && self.zeta.as_ref().is_none_or(|z| z.is_zero())
    }

    /// First nonzero coordinate, tagged with its component.
    pub fn first_nonzero(&self) -> Option<(&'static str, Witness)> {
        if let Some(w) = self.phi.first_nonzero() {
            return Some(("source", w));
        }
        if let Some(w) = self.psi.first_nonzero() {
            return Some(("target", w));
        }
        self.zeta.as_ref().and_then(|z| z.first_nonzero()).map(|w| ("morphism", w))
    }

    pub fn to_vec(&self) -> Vec<Rational> {
        let mut v = self.phi.coeffs().to_vec();
        v.extend_from_slice(self.psi.coeffs());
        if let Some(z) = &self.zeta {
            v.extend_from_slice(z.coeffs());
        }
        v
    }

    fn from_vec(f: &MorphismSpec, n: usize, v: Vec<Rational>) -> Result<Self> {
        let (a, b) = (&f.source, &f.target);
        let fam = a.family;
        let la = shape_set(fam, n).len() * ipow(a.dim, n) * a.dim;
        let lb = shape_set(fam, n).len() * ipow(b.dim, n) * b.dim;
        if v.len() != la + lb + zeta_dim(f, n) {
            return Err(dim_err("vector length does not match C^n_f"));
        }
        let phi = Element::from_coeffs(fam, n, a.dim, a.dim, v[..la].to_vec())?;
        let psi = Element::from_coeffs(fam, n, b.dim, b.dim, v[la..la + lb].to_vec())?;
        let zeta = if n >= 2 {
            Some(MCochain::from_coeffs(fam, n - 1, a.dim, b.dim, v[la + lb..].to_vec())?)
        } else {
            None
        };
        Ok(MorphismCochain { phi, psi, zeta })
    }
}

fn zeta_dim(f: &MorphismSpec, n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    shape_set(f.source.family, n - 1).len() * ipow(f.source.dim, n - 1) * f.target.dim
}

fn check_untwisted(f: &MorphismSpec) -> Result<()> {
    if f.source.twist.is_some() || f.target.twist.is_some() {
        return Err(Error::Precondition(
            "the morphism complex is built for untwisted algebras".into(),
        ));
    }
    Ok(())
}

/// `φ ↦ f ∘ φ` from `C^n(A, A)` to `C^n(A, B)`.
fn post_matrix(f: &MorphismSpec, n: usize) -> Result<QMatrix> {
    let (da, db) = (f.source.dim, f.target.dim);
    let blocks = shape_set(f.source.family, n).len() * ipow(da, n);
    let mut rows = vec![Vec::new(); blocks * db];
    for blk in 0..blocks {
        for o in 0..db {
            for (k, v) in f.matrix.row(o) {
                rows[blk * db + o].push((blk * da + k, v.clone()));
            }
        }
    }
    QMatrix::from_sparse_rows(blocks * da, rows)
}

/// `ψ ↦ ψ ∘ f^{⊗n}` from `C^n(B, B)` to `C^n(A, B)`.
fn pre_matrix(f: &MorphismSpec, n: usize) -> Result<QMatrix> {
    let (da, db) = (f.source.dim, f.target.dim);
    let shapes = shape_set(f.source.family, n).len();
    let (ta, tb) = (ipow(da, n), ipow(db, n));
    let mut rows = vec![Vec::new(); shapes * ta * db];
    for tup_a in 0..ta {
        let ia = decode_tuple(tup_a, da, n);
        for tup_b in 0..tb {
            let ib = decode_tuple(tup_b, db, n);
            let mut c = Rational::one();
            for (x, y) in ib.iter().zip(&ia) {
                c = &c * &f.matrix.get(*x, *y);
                if c.is_zero() {
                    break;
                }
            }
            if c.is_zero() {
                continue;
            }
            for s in 0..shapes {
                for o in 0..db {
                    rows[(s * ta + tup_a) * db + o].push(((s * tb + tup_b) * db + o, c.clone()));
                }
            }
        }
    }
    QMatrix::from_sparse_rows(shapes * tb * db, rows)
}

fn signed(m: &QMatrix, s: &Rational) -> Vec<Vec<(usize, Rational)>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|(c, v)| (*c, v * s)).collect()).collect()
}

/// Matrix of `D_f : C^n_f → C^{n+1}_f` for `n ≥ 1`.
pub fn morphism_differential_matrix(f: &MorphismSpec, n: usize) -> Result<QMatrix> {
    check_untwisted(f)?;
    if n == 0 {
        return Err(Error::Index("the complex starts in degree 1".into()));
    }
    let s = adjoint_sign(n);
    let da = coboundary_matrix(&f.source.adjoint(), n)?;
    let dbm = coboundary_matrix(&f.target.adjoint(), n)?;
    let post = post_matrix(f, n)?;
    let pre = pre_matrix(f, n)?;
    let (ca, cb, cz) = (da.cols(), dbm.cols(), zeta_dim(f, n));
    let mut rows: Vec<Vec<(usize, Rational)>> = signed(&da, &s);
    rows.extend(signed(&dbm, &s).into_iter().map(|r| {
        r.into_iter().map(|(c, v)| (c + ca, v)).collect::<Vec<_>>()
    }));
    let mut third: Vec<Vec<(usize, Rational)>> = post.rows_iter().collect();
    for (r, row) in pre.rows_iter().enumerate() {
        third[r].extend(row.into_iter().map(|(c, v)| (c + ca, -v)));
    }
    if n >= 2 {
        let dz = coboundary_matrix(&pullback_representation(f)?, n - 1)?;
        let sz = -adjoint_sign(n - 1);
        for (r, row) in signed(&dz, &sz).into_iter().enumerate() {
            third[r].extend(row.into_iter().map(|(c, v)| (c + ca + cb, v)));
        }
    }
    rows.extend(third);
    QMatrix::from_sparse_rows(ca + cb + cz, rows)
}

/// Applies `D_f`.
pub fn morphism_differential(f: &MorphismSpec, x: &MorphismCochain) -> Result<MorphismCochain> {
    let n = x.degree();
    let v = morphism_differential_matrix(f, n)?.mul_vec(&x.to_vec())?;
    MorphismCochain::from_vec(f, n + 1, v)
}

/// `H^n` of the morphism complex; `B^1 = 0`.
pub fn morphism_cohomology_dims(f: &MorphismSpec, n: usize) -> Result<CohomologyDims> {
    let dn = morphism_differential_matrix(f, n)?;
    let z = dn.cols() - dn.rank();
    let b = if n >= 2 { morphism_differential_matrix(f, n - 1)?.rank() } else { 0 };
    Ok(CohomologyDims { degree: n, cochains: dn.cols(), cocycles: z, coboundaries: b, cohomology: z - b })
}

/// `(π_{A,t}, π_{B,t}, f_t)` truncated at a common order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDeformation {
    pub source: TruncatedDeformation,
    pub target: TruncatedDeformation,
    fterms: Vec<QMatrix>,
}

/// First failing order, with the component that fails there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismDeformationCheck {
    pub holds: bool,
    pub order: Option<usize>,
    pub component: Option<&'static str>,
    pub witness: Option<Witness>,
}

impl MorphismDeformation {
    /// `fterms = [f_1, …, f_N]`; the morphism `f_0` is `f.matrix`.
    pub fn new(
        f: &MorphismSpec,
        source: TruncatedDeformation,
        target: TruncatedDeformation,
        fterms: Vec<QMatrix>,
    ) -> Result<Self> {
        check_untwisted(f)?;
        if source.base != f.source || target.base != f.target {
            return Err(Error::Context("deformations are not over the morphism's algebras".into()));
        }
        if source.order() != target.order() || fterms.len() != source.order() {
            return Err(dim_err(format!(
                "orders differ: source {}, target {}, morphism {}",
                source.order(),
                target.order(),
                fterms.len()
            )));
        }
        for m in &fterms {
            if m.rows() != f.matrix.rows() || m.cols() != f.matrix.cols() {
                return Err(dim_err("morphism terms must match the shape of f"));
            }
        }
        let mut all = vec![f.matrix.clone()];
        all.extend(fterms);
        Ok(MorphismDeformation { source, target, fterms: all })
    }

    /// The trivial deformation of order `N`.
    pub fn constant(f: &MorphismSpec, order: usize) -> Result<Self> {
        let z = QMatrix::zeros(f.matrix.rows(), f.matrix.cols());
        Self::new(
            f,
            TruncatedDeformation::constant(f.source.clone(), order),
            TruncatedDeformation::constant(f.target.clone(), order),
            vec![z; order],
        )
    }

    pub fn order(&self) -> usize {
        self.fterms.len() - 1
    }

    /// `[f_0, f_1, …, f_N]`.
    pub fn fterms(&self) -> &[QMatrix] {
        &self.fterms
    }

    pub fn morphism(&self) -> MorphismSpec {
        MorphismSpec {
            source: self.source.base.clone(),
            target: self.target.base.clone(),
            matrix: self.fterms[0].clone(),
        }
    }

    /// `Σ_{i+j=n} f_i ∘ π_{A,j} − Σ_{i+j+k=n} π_{B,i}(f_j, f_k)`.
    pub fn equation(&self, n: usize) -> Result<Element> {
        self.partial_equation(n, n)
    }

    /// The order-`n` equation restricted to indices `≤ cap`.
    fn partial_equation(&self, n: usize, cap: usize) -> Result<Element> {
        let fam = self.source.base.family;
        let mut acc = Element::zero(fam, 2, self.source.base.dim, self.target.base.dim);
        for i in 0..=n.min(cap) {
            let j = n - i;
            if j > cap {
                continue;
            }
            acc += &self.source.term(j).map_output(&self.fterms[i])?;
        }
        for i in 0..=n.min(cap) {
            for j in 0..=(n - i).min(cap) {
                let k = n - i - j;
                if k > cap {
                    continue;
                }
                let t = self.target.term(i).pullback_slots(&[&self.fterms[j], &self.fterms[k]])?;
                acc -= &t;
            }
        }
        Ok(acc)
    }

    /// All three families of equations for orders `≤ k`.
    pub fn check(&self, k: usize) -> Result<MorphismDeformationCheck> {
        if k > self.order() {
            return Err(Error::Index(format!("order {k} exceeds truncation {}", self.order())));
        }
        for n in 0..=k {
            for (name, def) in [("source", &self.source), ("target", &self.target)] {
                if let Some(w) = def.equation(n)?.first_nonzero() {
                    return Ok(MorphismDeformationCheck {
                        holds: false,
                        order: Some(n),
                        component: Some(name),
                        witness: Some(w),
                    });
                }
            }
            if let Some(w) = self.equation(n)?.first_nonzero() {
                return Ok(MorphismDeformationCheck {
                    holds: false,
                    order: Some(n),
                    component: Some("morphism"),
                    witness: Some(w),
                });
            }
        }
        Ok(MorphismDeformationCheck { holds: true, order: None, component: None, witness: None })
    }

    /// `(Ob_A, Ob_B, θ(f))` in `C^3_f` for a deformation valid to its order `N`.
    pub fn obstruction(&self) -> Result<MorphismCochain> {
        let chk = self.check(self.order())?;
        if !chk.holds {
            return Err(Error::Precondition(format!(
                "not a morphism deformation at order {} ({})",
                chk.order.unwrap_or_default(),
                chk.component.unwrap_or_default()
            )));
        }
        let n = self.order();
        Ok(MorphismCochain {
            phi: self.source.obstruction()?,
            psi: self.target.obstruction()?,
            zeta: Some(self.partial_equation(n + 1, n)?),
        })
    }

    /// Solves `D_f(π_{A,N+1}, π_{B,N+1}, f_{N+1}) = −Ob`.
    pub fn extend(&self) -> Result<Extension<MorphismDeformation, MorphismCochain>> {
        let ob = self.obstruction()?;
        let f = self.morphism();
        let dm = morphism_differential_matrix(&f, 2)?;
        let rhs: Vec<Rational> = ob.to_vec().iter().map(|x| -x).collect();
        match dm.solve(&rhs)? {
            None => Ok(Extension::Obstructed(ob)),
            Some(x) => {
                let step = MorphismCochain::from_vec(&f, 2, x)?;
                let mut out = self.clone();
                out.source.push(step.phi)?;
                out.target.push(step.psi)?;
                out.fterms.push(step.zeta.expect("degree 2").to_matrix()?);
                Ok(Extension::Extended(out))
            }
        }
    }

    /// Transport along `(φ_{A,t}, φ_{B,t})`: `f'_t = φ_{B,t}^{-1} ∘ f_t ∘ φ_{A,t}`.
    pub fn apply_equivalence(
        &self,
        phi_a: &FormalAutomorphism,
        phi_b: &FormalAutomorphism,
    ) -> Result<MorphismDeformation> {
        let n = self.order();
        if phi_a.order() != n || phi_b.order() != n {
            return Err(Error::Precondition("automorphism orders differ from the deformation".into()));
        }
        let source = phi_a.apply(&self.source)?;
        let target = phi_b.apply(&self.target)?;
        let a: Vec<QMatrix> = phi_a.terms().iter().map(|t| t.to_matrix()).collect::<Result<_>>()?;
        let inv = phi_b.invert(&self.target.operad())?;
        let b: Vec<QMatrix> = inv.terms().iter().map(|t| t.to_matrix()).collect::<Result<_>>()?;
        let fa = series_mul(&self.fterms, &a, n)?;
        let out = series_mul(&b, &fa, n)?;
        Ok(MorphismDeformation { source, target, fterms: out })
    }
}

/// `(x · y)_k = Σ_{i+j=k} x_i y_j` for `k ≤ n`.
fn series_mul(x: &[QMatrix], y: &[QMatrix], n: usize) -> Result<Vec<QMatrix>> {
    (0..=n)
        .map(|k| {
            let mut rows = vec![Vec::new(); x[0].rows()];
            for i in 0..=k {
                let p = x[i].mul(&y[k - i])?;
                for (r, row) in p.rows_iter().enumerate() {
                    rows[r].extend(row);
                }
            }
            QMatrix::from_sparse_rows(y[0].cols(), rows)
        })
        .collect()
}

/// `(source, target, f)` with both algebras checked and `f` a morphism.
pub fn morphism_between(source: AlgebraSpec, target: AlgebraSpec, matrix: QMatrix) -> Result<MorphismSpec> {
    let f = MorphismSpec::new(source, target, matrix)?;
    if let Some(w) = f.check()?.witness {
        return Err(Error::Precondition(format!("not an algebra morphism: {w}")));
    }
    Ok(f)
}
