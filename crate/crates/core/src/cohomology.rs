//! The cochain complex `C^n(A, M)`, its cohomology, and abelian extensions.

use serde::Serialize;

use crate::algebra::{AlgebraSpec, Bilinear, MorphismSpec, RepresentationSpec};
use crate::cochain::{ipow, MCochain};
use crate::error::{dim_err, Error, Result};
use crate::linalg::QMatrix;
use crate::operad::{sign, Operad, Verdict};
use crate::rational::Rational;
use crate::shapes::{composition_table, shape_set};
use crate::twisted::TwistPair;

/// `(dim Z^n, dim B^n, dim H^n)` plus the size of `C^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyDims {
    pub degree: usize,
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub cohomology: usize,
}

impl CohomologyDims {
    fn new(degree: usize, cochains: usize, cocycles: usize, coboundaries: usize) -> Self {
        CohomologyDims {
            degree,
            cochains,
            cocycles,
            coboundaries,
            cohomology: cocycles - coboundaries,
        }
    }
}

/// `dim C^n(A, M)`.
pub fn cochain_dim(rep: &RepresentationSpec, n: usize) -> usize {
    shape_set(rep.base.family, n).len() * ipow(rep.base.dim, n) * rep.mdim
}

/// Matrix of `δ : C^n(A, M) → C^{n+1}(A, M)` in the canonical bases
/// (shape order, then input tuple, then output coordinate).
pub fn coboundary_matrix(rep: &RepresentationSpec, n: usize) -> Result<QMatrix> {
    if n == 0 {
        return Err(Error::Index("the complex starts in degree 1".into()));
    }
    let fam = rep.base.family;
    let d = rep.base.dim;
    let m = rep.mdim;
    let pi = rep.base.bilinear();
    let big = shape_set(fam, n + 1);
    let dn = ipow(d, n);
    let col = |s: usize, t: usize, k: usize| (s * dn + t) * m + k;
    let left = composition_table(fam, 2, n, 2)?; // R(2; 1, n)
    let right = composition_table(fam, 2, n, 1)?; // R(2; n, 1)
    let inner: Vec<_> = (1..=n)
        .map(|i| composition_table(fam, n, 2, i))
        .collect::<Result<_>>()?;
    let outer_sign = sign(n + 1);

    let mut rows = Vec::with_capacity(big.len() * dn * d * m);
    for r in 0..big.len() {
        for a in 0..dn * d {
            let tuple = crate::cochain::decode_tuple(a, d, n + 1);
            for o in 0..m {
                let mut row: Vec<(usize, Rational)> = Vec::new();
                // θ_1(R_0 r; a_1, f(R_2 r; a_2, …, a_{n+1}))
                let (r0, sum) = (left.r0[r], &left.sums[left.ri[r]]);
                let tail = a % dn;
                for k in 0..m {
                    let t = rep.theta1.get(r0, tuple[0], k, o);
                    if t.is_zero() {
                        continue;
                    }
                    for &(s, c) in sum {
                        row.push((col(s, tail, k), t * &Rational::from_int(c as i64)));
                    }
                }
                // Σ_i (−1)^i f(R_0 r; …, π(R_i r; a_i, a_{i+1}), …)
                for (idx, tab) in inner.iter().enumerate() {
                    let i = idx + 1;
                    let r0 = tab.r0[r];
                    let mut x = vec![Rational::zero(); d];
                    x[tuple[i - 1]] = Rational::one();
                    let mut y = vec![Rational::zero(); d];
                    y[tuple[i]] = Rational::one();
                    let v = pi.apply_sum(&tab.sums[tab.ri[r]], &x, &y);
                    let sg = sign(i);
                    for (k, vk) in v.iter().enumerate() {
                        if vk.is_zero() {
                            continue;
                        }
                        let mut ft = tuple[..i - 1].to_vec();
                        ft.push(k);
                        ft.extend_from_slice(&tuple[i + 1..]);
                        let t = crate::cochain::encode_tuple(&ft, d);
                        row.push((col(r0, t, o), &sg * vk));
                    }
                }
                // (−1)^{n+1} θ_2(R_0 r; f(R_1 r; a_1, …, a_n), a_{n+1})
                let (r0, sum) = (right.r0[r], &right.sums[right.ri[r]]);
                let head = a / d;
                for k in 0..m {
                    let t = rep.theta2.get(r0, k, tuple[n], o);
                    if t.is_zero() {
                        continue;
                    }
                    let t = t * &outer_sign;
                    for &(s, c) in sum {
                        row.push((col(s, head, k), &t * &Rational::from_int(c as i64)));
                    }
                }
                rows.push(row);
            }
        }
    }
    QMatrix::from_sparse_rows(cochain_dim(rep, n), rows)
}

fn check_cochain(rep: &RepresentationSpec, f: &MCochain) -> Result<()> {
    if f.family() != rep.base.family || f.in_dim() != rep.base.dim || f.out_dim() != rep.mdim {
        return Err(dim_err(format!(
            "{} is not a cochain of {} with values in a {}-dimensional module",
            f.describe(),
            rep.base.family,
            rep.mdim
        )));
    }
    Ok(())
}

/// `δf`.
pub fn coboundary(rep: &RepresentationSpec, f: &MCochain) -> Result<MCochain> {
    check_cochain(rep, f)?;
    let n = f.arity();
    let v = coboundary_matrix(rep, n)?.mul_vec(f.coeffs())?;
    MCochain::from_coeffs(rep.base.family, n + 1, rep.base.dim, rep.mdim, v)
}

/// Cohomology dimensions in degree `n ≥ 1`; `B^1 = 0`.
pub fn cohomology_dims(rep: &RepresentationSpec, n: usize) -> Result<CohomologyDims> {
    let dn = coboundary_matrix(rep, n)?;
    let z = dn.cols() - dn.rank();
    let b = if n >= 2 { coboundary_matrix(rep, n - 1)?.rank() } else { 0 };
    Ok(CohomologyDims::new(n, dn.cols(), z, b))
}

/// Basis of `Z^1`, the derivations.
pub fn derivation_basis(rep: &RepresentationSpec) -> Result<Vec<MCochain>> {
    let m = coboundary_matrix(rep, 1)?;
    m.kernel_basis()
        .into_iter()
        .map(|v| MCochain::from_coeffs(rep.base.family, 1, rep.base.dim, rep.mdim, v))
        .collect()
}

/// Sign `s_n` with `δ = s_n · d_π` on `C^n(A, A)` for the adjoint representation.
pub fn adjoint_sign(n: usize) -> Rational {
    sign(n + 1)
}

/// Matrix of `d_π : O(n) → O(n+1)` for the algebra's own rule.
pub fn differential_matrix(spec: &AlgebraSpec, n: usize) -> Result<QMatrix> {
    match &spec.twist {
        None => {
            let m = coboundary_matrix(&spec.adjoint(), n)?;
            let s = adjoint_sign(n);
            let rows = (0..m.rows())
                .map(|r| m.row(r).iter().map(|(c, v)| (*c, v * &s)).collect())
                .collect();
            QMatrix::from_sparse_rows(m.cols(), rows)
        }
        Some(_) => spec.operad().differential_matrix(spec.pi(), n),
    }
}

/// Matrix of `f ↦ (γ(f; α, …) − α ∘ f, γ(f; β, …) − β ∘ f)` on `O(n)`.
pub fn membership_matrix(op: &Operad, tw: &TwistPair, n: usize) -> Result<QMatrix> {
    let plain = op.untwisted();
    let rows = 2 * plain.space_dim(n);
    let cols = plain.space_dim(n);
    let mut columns = Vec::with_capacity(cols);
    let mut e = plain.zero(n);
    for k in 0..cols {
        e.coeffs_mut()[k] = Rational::one();
        let mut col = Vec::with_capacity(rows);
        for t in [tw.alpha(), tw.beta()] {
            let args = vec![t; n];
            let lhs = plain.gamma(&e, &args)?;
            let rhs = crate::operad::partial_compose(t, &e, 1)?;
            col.extend((&lhs - &rhs).into_coeffs());
        }
        columns.push(col);
        e.coeffs_mut()[k] = Rational::zero();
    }
    QMatrix::from_columns(rows, &columns)
}

/// Cohomology of `(O_{α,β}(•), d_π)` for a twisted algebra (adjoint coefficients).
pub fn twisted_cohomology_dims(spec: &AlgebraSpec, n: usize) -> Result<CohomologyDims> {
    let tw = spec
        .twist
        .as_ref()
        .ok_or_else(|| Error::Precondition("algebra carries no twist".into()))?;
    let op = spec.operad();
    let image_rank = |k: usize| -> Result<(usize, usize)> {
        let basis = membership_matrix(&op, tw, k)?.kernel_basis();
        let mut images = Vec::with_capacity(basis.len());
        for b in &basis {
            let f = crate::cochain::Element::from_coeffs(spec.family, k, spec.dim, spec.dim, b.clone())?;
            images.push(op.differential(spec.pi(), &f)?.into_coeffs());
        }
        let rows = op.space_dim(k + 1);
        Ok((basis.len(), QMatrix::from_columns(rows, &images)?.rank()))
    };
    let (dim, rank) = image_rank(n)?;
    let b = if n >= 2 { image_rank(n - 1)?.1 } else { 0 };
    Ok(CohomologyDims::new(n, dim, dim - rank, b))
}

/// Adjoint cohomology under the algebra's own composition rule.
pub fn adjoint_cohomology_dims(spec: &AlgebraSpec, n: usize) -> Result<CohomologyDims> {
    match spec.twist {
        None => cohomology_dims(&spec.adjoint(), n),
        Some(_) => twisted_cohomology_dims(spec, n),
    }
}

/// A split abelian extension `0 → M → E → A → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSpec {
    pub total: AlgebraSpec,
    /// `i : M → E`, size `dim E × dim M`.
    pub inclusion: QMatrix,
    /// `j : E → A`, size `dim A × dim E`.
    pub projection: QMatrix,
    /// `s : A → E` with `j s = id`.
    pub section: QMatrix,
}

impl ExtensionSpec {
    pub fn base_dim(&self) -> usize {
        self.projection.rows()
    }

    pub fn module_dim(&self) -> usize {
        self.inclusion.cols()
    }

    /// Exactness data, morphism conditions and the splitting.
    pub fn check(&self, base: &AlgebraSpec) -> Result<Verdict> {
        let (d, m) = (self.base_dim(), self.module_dim());
        let e = self.total.dim;
        if d + m != e || self.section.rows() != e || self.section.cols() != d || self.projection.cols() != e {
            return Err(dim_err("extension maps have inconsistent sizes"));
        }
        if !self.projection.mul(&self.inclusion)?.is_zero() {
            return Err(Error::Precondition("j ∘ i is not zero".into()));
        }
        if self.projection.mul(&self.section)? != QMatrix::identity(d) {
            return Err(Error::Precondition("section does not split the projection".into()));
        }
        let j = MorphismSpec::new(self.total.clone(), base.clone(), self.projection.clone())?;
        let v = j.check()?;
        if !v.holds {
            return Ok(v);
        }
        let zero_m = AlgebraSpec::zero(base.family, m);
        let i = MorphismSpec::new(zero_m, self.total.clone(), self.inclusion.clone())?;
        i.check()
    }
}

/// `E = A ⊕ M` with product `(π(a,b), θ_1(a,n) + θ_2(m,b) + f(a,b))`.
pub fn extension_from_cocycle(rep: &RepresentationSpec, f: &MCochain) -> Result<ExtensionSpec> {
    check_cochain(rep, f)?;
    if f.arity() != 2 {
        return Err(dim_err("extensions come from 2-cochains"));
    }
    if let Some(w) = coboundary(rep, f)?.first_nonzero() {
        return Err(Error::Precondition(format!("not a 2-cocycle: {w}")));
    }
    let (d, m) = (rep.base.dim, rep.mdim);
    let total = rep.extension_algebra(Some(f))?;
    let mut inclusion = QMatrix::zeros(d + m, m);
    let mut projection = QMatrix::zeros(d, d + m);
    let mut section = QMatrix::zeros(d + m, d);
    for k in 0..m {
        inclusion.set(d + k, k, Rational::one())?;
    }
    for a in 0..d {
        projection.set(a, a, Rational::one())?;
        section.set(a, a, Rational::one())?;
    }
    Ok(ExtensionSpec { total, inclusion, projection, section })
}

fn invert(m: &QMatrix) -> Result<QMatrix> {
    let n = m.rows();
    if m.cols() != n || m.rank() != n {
        return Err(Error::Precondition("[s | i] is not invertible".into()));
    }
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[k] = Rational::one();
        cols.push(m.solve(&e)?.expect("invertible"));
    }
    QMatrix::from_columns(n, &cols)
}

/// Induced representation and 2-cocycle of a split extension:
/// `θ_1(a, m) = i^{-1} π_E(s a, i m)`, `f(a, b) = i^{-1}(π_E(s a, s b) − s π_A(a, b))`.
pub fn cocycle_from_extension(ext: &ExtensionSpec) -> Result<(RepresentationSpec, MCochain)> {
    let (d, m) = (ext.base_dim(), ext.module_dim());
    let e = ext.total.dim;
    if d + m != e {
        return Err(dim_err("dim E must equal dim A + dim M"));
    }
    if ext.projection.mul(&ext.section)? != QMatrix::identity(d) {
        return Err(Error::Precondition("section does not split the projection".into()));
    }
    // change of basis E ≅ A ⊕ M along a ↦ s a, m ↦ i m
    let mut basis = QMatrix::zeros(e, e);
    for r in 0..e {
        for c in 0..d {
            basis.set(r, c, ext.section.get(r, c))?;
        }
        for c in 0..m {
            basis.set(r, d + c, ext.inclusion.get(r, c))?;
        }
    }
    let inv = invert(&basis)?;
    let g = ext.total.pi().pullback_inputs(&basis)?.map_output(&inv)?;
    let fam = ext.total.family;
    let s2 = shape_set(fam, 2).len();
    let mut pi = MCochain::zero(fam, 2, d, d);
    let mut cocycle = MCochain::zero(fam, 2, d, m);
    let mut theta1 = Bilinear::zero(fam, d, m, m);
    let mut theta2 = Bilinear::zero(fam, m, d, m);
    for s in 0..s2 {
        for a in 0..d {
            for b in 0..d {
                for o in 0..d {
                    pi.set(s, &[a, b], o, g.get(s, &[a, b], o).clone());
                }
                for o in 0..m {
                    cocycle.set(s, &[a, b], o, g.get(s, &[a, b], d + o).clone());
                }
            }
            for k in 0..m {
                for o in 0..m {
                    theta1.set(s, a, k, o, g.get(s, &[a, d + k], d + o).clone());
                    theta2.set(s, k, a, o, g.get(s, &[d + k, a], d + o).clone());
                }
            }
        }
    }
    let base = AlgebraSpec::new(pi)?;
    let rep = RepresentationSpec::new(base, m, theta1, theta2)?;
    Ok((rep, cocycle))
}

/// Some `g ∈ C^1(A, M)` with `f1 − f2 = δg`, i.e. an equivalence
/// `(a, m) ↦ (a, m + g(a))` from the extension of `f1` to that of `f2`.
pub fn extension_equivalence(
    rep: &RepresentationSpec,
    f1: &MCochain,
    f2: &MCochain,
) -> Result<Option<MCochain>> {
    check_cochain(rep, f1)?;
    f1.check_same_space(f2)?;
    let diff = f1 - f2;
    let d1 = coboundary_matrix(rep, 1)?;
    Ok(match d1.solve(diff.coeffs())? {
        None => None,
        Some(x) => Some(MCochain::from_coeffs(rep.base.family, 1, rep.base.dim, rep.mdim, x)?),
    })
}

/// The map `(a, m) ↦ (a, m + g(a))` on `A ⊕ M`.
pub fn shear_matrix(d: usize, g: &MCochain) -> Result<QMatrix> {
    let m = g.out_dim();
    let mut out = QMatrix::identity(d + m);
    let gm = g.to_matrix()?;
    for r in 0..m {
        for (c, v) in gm.row(r) {
            out.set(d + r, *c, v.clone())?;
        }
    }
    Ok(out)
}
