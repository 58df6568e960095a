//! Finite-dimensional Loday-type algebras given by structure constants.

use std::fmt;

use serde::Serialize;

use crate::cochain::Element;
use crate::error::{dim_err, Error, Result};
use crate::linalg::QMatrix;
use crate::operad::{partial_compose, Operad, Verdict};
use crate::rational::Rational;
use crate::shapes::{composition_table, shape_set, Family};
use crate::twisted::TwistPair;

/// A bilinear map `K[U_2] ⊗ V ⊗ W → X`, laid out like an arity-2 cochain:
/// `((shape · left + i) · right + j) · out + o`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bilinear {
    pub family: Family,
    pub left: usize,
    pub right: usize,
    pub out: usize,
    data: Vec<Rational>,
}

impl Bilinear {
    pub fn zero(family: Family, left: usize, right: usize, out: usize) -> Self {
        let n = shape_set(family, 2).len() * left * right * out;
        Bilinear { family, left, right, out, data: vec![Rational::zero(); n] }
    }

    pub fn from_element(e: &Element) -> Result<Self> {
        if e.arity() != 2 {
            return Err(dim_err("bilinear maps come from arity-2 elements"));
        }
        Ok(Bilinear {
            family: e.family(),
            left: e.in_dim(),
            right: e.in_dim(),
            out: e.out_dim(),
            data: e.coeffs().to_vec(),
        })
    }

    pub fn to_element(&self) -> Result<Element> {
        if self.left != self.right {
            return Err(dim_err("mixed input dimensions"));
        }
        Element::from_coeffs(self.family, 2, self.left, self.out, self.data.clone())
    }

    fn idx(&self, s: usize, i: usize, j: usize, o: usize) -> usize {
        ((s * self.left + i) * self.right + j) * self.out + o
    }

    pub fn get(&self, s: usize, i: usize, j: usize, o: usize) -> &Rational {
        &self.data[self.idx(s, i, j, o)]
    }

    pub fn set(&mut self, s: usize, i: usize, j: usize, o: usize, v: Rational) {
        let k = self.idx(s, i, j, o);
        self.data[k] = v;
    }

    /// Output vector on basis inputs.
    pub fn basis(&self, s: usize, i: usize, j: usize) -> &[Rational] {
        let k = self.idx(s, i, j, 0);
        &self.data[k..k + self.out]
    }

    /// Bilinear evaluation on arbitrary vectors.
    pub fn apply(&self, s: usize, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.out];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (o, v) in self.basis(s, i, j).iter().enumerate() {
                    if !v.is_zero() {
                        out[o].add_mul(&c, v);
                    }
                }
            }
        }
        out
    }

    /// Linear extension over a formal shape sum `Σ c_s s`.
    pub fn apply_sum(&self, sum: &[(usize, u64)], x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.out];
        for &(s, c) in sum {
            let c = Rational::from_int(c as i64);
            for (o, v) in self.apply(s, x, y).into_iter().enumerate() {
                out[o].add_mul(&c, &v);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }
}

pub(crate) fn unit(dim: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[k] = Rational::one();
    v
}

/// An algebra of a given family: a candidate multiplication `π ∈ O(2)`,
/// optionally twisted by commuting endomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub family: Family,
    pub dim: usize,
    pi: Element,
    pub twist: Option<TwistPair>,
}

impl AlgebraSpec {
    pub fn new(pi: Element) -> Result<Self> {
        if pi.arity() != 2 || pi.in_dim() != pi.out_dim() || pi.in_dim() == 0 {
            return Err(dim_err(format!("{} is not a product on A", pi.describe())));
        }
        Ok(AlgebraSpec { family: pi.family(), dim: pi.in_dim(), pi, twist: None })
    }

    pub fn zero(family: Family, dim: usize) -> Self {
        Self::new(Element::zero(family, 2, dim, dim)).expect("well-formed")
    }

    /// One-dimensional algebra with `π(s; e, e) = c_s e`, scalars listed in `U_2` order.
    pub fn scalar(family: Family, values: &[i64]) -> Result<Self> {
        let set = shape_set(family, 2);
        if values.len() != set.len() {
            return Err(dim_err(format!(
                "{family} needs {} structure constants, got {}",
                set.len(),
                values.len()
            )));
        }
        let mut pi = Element::zero(family, 2, 1, 1);
        for (s, v) in values.iter().enumerate() {
            pi.set(s, &[0, 0], 0, Rational::from_int(*v));
        }
        Self::new(pi)
    }

    /// Builds `π` from per-shape products, each an associative arity-2 element.
    pub fn from_parts(family: Family, dim: usize, parts: &[(&str, &Element)]) -> Result<Self> {
        let set = shape_set(family, 2);
        let mut pi = Element::zero(family, 2, dim, dim);
        let block = dim * dim * dim;
        for (label, part) in parts {
            if part.arity() != 2 || part.in_dim() != dim || part.out_dim() != dim {
                return Err(dim_err(format!("product {label} has the wrong shape")));
            }
            let s = set.index_of_label(label)?;
            let src = &part.coeffs()[..block];
            pi.coeffs_mut()[s * block..(s + 1) * block].clone_from_slice(src);
        }
        Self::new(pi)
    }

    pub fn with_twist(mut self, twist: TwistPair) -> Result<Self> {
        twist.check_context(self.family, self.dim)?;
        self.twist = Some(twist);
        Ok(self)
    }

    pub fn pi(&self) -> &Element {
        &self.pi
    }

    pub fn operad(&self) -> Operad {
        Operad { family: self.family, dim: self.dim, twist: self.twist.clone() }
    }

    /// The product attached to one shape of `U_2`, as an associative-family element.
    pub fn product(&self, label: &str) -> Result<Element> {
        let s = shape_set(self.family, 2).index_of_label(label)?;
        let block = self.dim * self.dim * self.dim;
        Element::from_coeffs(
            Family::Associative,
            2,
            self.dim,
            self.dim,
            self.pi.coeffs()[s * block..(s + 1) * block].to_vec(),
        )
    }

    pub fn bilinear(&self) -> Bilinear {
        Bilinear::from_element(&self.pi).expect("arity 2")
    }

    /// `π ∘ π = 0` under this algebra's composition rule.
    pub fn validate(&self) -> Result<Verdict> {
        self.operad().is_multiplication(&self.pi)
    }

    /// Sum of all products, which is associative for (tri)dendriform algebras.
    pub fn to_associative(&self) -> Result<AlgebraSpec> {
        if !matches!(self.family, Family::Dendriform | Family::Tridendriform) {
            return Err(Error::Precondition(format!(
                "no sum-of-products associative algebra for {}",
                self.family
            )));
        }
        let mut sum = Element::zero(Family::Associative, 2, self.dim, self.dim);
        for label in &shape_set(self.family, 2).labels {
            sum += &self.product(label)?;
        }
        AlgebraSpec::new(sum)
    }

    /// `x ≺' y = x ≺ y + x · y`, `x ≻' y = x ≻ y`.
    pub fn tridendriform_to_dendriform(&self) -> Result<AlgebraSpec> {
        if self.family != Family::Tridendriform {
            return Err(Error::Precondition("input must be tridendriform".into()));
        }
        let left = &self.product("{1}")? + &self.product("{1,2}")?;
        let right = self.product("{2}")?;
        AlgebraSpec::from_parts(Family::Dendriform, self.dim, &[("1", &left), ("2", &right)])
    }

    pub fn adjoint(&self) -> RepresentationSpec {
        RepresentationSpec {
            base: self.clone(),
            mdim: self.dim,
            theta1: self.bilinear(),
            theta2: self.bilinear(),
        }
    }

    pub fn trivial(&self, mdim: usize) -> RepresentationSpec {
        RepresentationSpec {
            base: self.clone(),
            mdim,
            theta1: Bilinear::zero(self.family, self.dim, mdim, mdim),
            theta2: Bilinear::zero(self.family, mdim, self.dim, mdim),
        }
    }
}

/// A failed representation identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepWitness {
    /// Which of the three identities (1-based).
    pub identity: usize,
    pub shape: String,
    /// Basis indices `(a, b, m)`.
    pub inputs: [usize; 3],
    pub output: usize,
    pub difference: Rational,
}

impl fmt::Display for RepWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "identity {} at shape {} with a=e{}, b=e{}, m=m{}: coordinate {} off by {}",
            self.identity,
            self.shape,
            self.inputs[0] + 1,
            self.inputs[1] + 1,
            self.inputs[2] + 1,
            self.output + 1,
            self.difference
        )
    }
}

/// A representation `(M, θ_1, θ_2)` of an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationSpec {
    pub base: AlgebraSpec,
    pub mdim: usize,
    /// `K[U_2] ⊗ A ⊗ M → M`.
    pub theta1: Bilinear,
    /// `K[U_2] ⊗ M ⊗ A → M`.
    pub theta2: Bilinear,
}

impl RepresentationSpec {
    pub fn new(base: AlgebraSpec, mdim: usize, theta1: Bilinear, theta2: Bilinear) -> Result<Self> {
        let (d, f) = (base.dim, base.family);
        if theta1.family != f || theta2.family != f {
            return Err(Error::Context("representation family differs from the algebra".into()));
        }
        if (theta1.left, theta1.right, theta1.out) != (d, mdim, mdim)
            || (theta2.left, theta2.right, theta2.out) != (mdim, d, mdim)
        {
            return Err(dim_err("theta tables do not match dim A and dim M"));
        }
        Ok(RepresentationSpec { base, mdim, theta1, theta2 })
    }

    /// Checks the `3 · #U_3` identities on basis triples.
    pub fn check(&self) -> Result<Option<RepWitness>> {
        let f = self.base.family;
        let d = self.base.dim;
        let m = self.mdim;
        let pi = self.base.bilinear();
        let t12 = composition_table(f, 2, 2, 2)?; // R(2; 1, 2)
        let t21 = composition_table(f, 2, 2, 1)?; // R(2; 2, 1)
        let u3 = shape_set(f, 3);
        for y in 0..u3.len() {
            let (l0, lsum) = (t12.r0[y], &t12.sums[t12.ri[y]]);
            let (r0, rsum) = (t21.r0[y], &t21.sums[t21.ri[y]]);
            for a in 0..d {
                let ea = unit(d, a);
                for b in 0..d {
                    let eb = unit(d, b);
                    for k in 0..m {
                        let em = unit(m, k);
                        let pairs = [
                            (
                                self.theta1.apply(l0, &ea, &self.theta1.apply_sum(lsum, &eb, &em)),
                                self.theta1.apply(r0, &pi.apply_sum(rsum, &ea, &eb), &em),
                            ),
                            (
                                self.theta2.apply(l0, &em, &pi.apply_sum(lsum, &ea, &eb)),
                                self.theta2.apply(r0, &self.theta2.apply_sum(rsum, &em, &ea), &eb),
                            ),
                            (
                                self.theta1.apply(l0, &ea, &self.theta2.apply_sum(lsum, &em, &eb)),
                                self.theta2.apply(r0, &self.theta1.apply_sum(rsum, &ea, &em), &eb),
                            ),
                        ];
                        for (idx, (lhs, rhs)) in pairs.iter().enumerate() {
                            for o in 0..m {
                                if lhs[o] != rhs[o] {
                                    return Ok(Some(RepWitness {
                                        identity: idx + 1,
                                        shape: u3.labels[y].clone(),
                                        inputs: [a, b, k],
                                        output: o,
                                        difference: &lhs[o] - &rhs[o],
                                    }));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// The algebra `A ⊕ M` (coordinates of `A` first).
    pub fn semidirect_product(&self) -> Result<AlgebraSpec> {
        self.extension_algebra(None)
    }

    /// `A ⊕ M` with product `(π(a,b), θ_1(a,n) + θ_2(m,b) + f(a,b))`.
    pub(crate) fn extension_algebra(&self, cocycle: Option<&Element>) -> Result<AlgebraSpec> {
        let d = self.base.dim;
        let m = self.mdim;
        let e = d + m;
        let f = self.base.family;
        let pi = self.base.bilinear();
        let mut out = Element::zero(f, 2, e, e);
        for s in 0..shape_set(f, 2).len() {
            for a in 0..d {
                for b in 0..d {
                    for (o, v) in pi.basis(s, a, b).iter().enumerate() {
                        out.set(s, &[a, b], o, v.clone());
                    }
                    if let Some(c) = cocycle {
                        for o in 0..m {
                            out.set(s, &[a, b], d + o, c.get(s, &[a, b], o).clone());
                        }
                    }
                }
                for k in 0..m {
                    for (o, v) in self.theta1.basis(s, a, k).iter().enumerate() {
                        out.set(s, &[a, d + k], d + o, v.clone());
                    }
                    for (o, v) in self.theta2.basis(s, k, a).iter().enumerate() {
                        out.set(s, &[d + k, a], d + o, v.clone());
                    }
                }
            }
        }
        AlgebraSpec::new(out)
    }
}

/// A linear map `f : A → B`, stored as a `dim B × dim A` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismSpec {
    pub source: AlgebraSpec,
    pub target: AlgebraSpec,
    pub matrix: QMatrix,
}

impl MorphismSpec {
    pub fn new(source: AlgebraSpec, target: AlgebraSpec, matrix: QMatrix) -> Result<Self> {
        if source.family != target.family {
            return Err(Error::Context(format!(
                "morphism between {} and {}",
                source.family, target.family
            )));
        }
        if matrix.rows() != target.dim || matrix.cols() != source.dim {
            return Err(dim_err(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim,
                source.dim
            )));
        }
        Ok(MorphismSpec { source, target, matrix })
    }

    pub fn identity(spec: &AlgebraSpec) -> Self {
        MorphismSpec {
            source: spec.clone(),
            target: spec.clone(),
            matrix: QMatrix::identity(spec.dim),
        }
    }

    /// `f ∘ π_A − π_B ∘ (f ⊗ f)`, which vanishes iff `f` is a morphism.
    pub fn defect(&self) -> Result<Element> {
        let lhs = self.source.pi().map_output(&self.matrix)?;
        let rhs = self.target.pi().pullback_inputs(&self.matrix)?;
        Ok(&lhs - &rhs)
    }

    pub fn check(&self) -> Result<Verdict> {
        Ok(Verdict::vanishing(&self.defect()?))
    }
}

/// An associative algebra with a Rota-Baxter operator of some weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotaBaxterSpec {
    pub algebra: AlgebraSpec,
    pub operator: QMatrix,
    pub weight: Rational,
}

impl RotaBaxterSpec {
    pub fn new(algebra: AlgebraSpec, operator: QMatrix, weight: Rational) -> Result<Self> {
        if algebra.family != Family::Associative {
            return Err(Error::Precondition("Rota-Baxter operators act on associative algebras".into()));
        }
        if operator.rows() != algebra.dim || operator.cols() != algebra.dim {
            return Err(dim_err("operator must be a square matrix of size dim A"));
        }
        Ok(RotaBaxterSpec { algebra, operator, weight })
    }

    fn mu_right(&self) -> Result<Element> {
        self.algebra.pi().map_input_slot(1, &self.operator)
    }

    fn mu_left(&self) -> Result<Element> {
        self.algebra.pi().map_input_slot(0, &self.operator)
    }

    /// `μ(Rx, Ry) = R(μ(x, Ry) + μ(Rx, y) + λ μ(x, y))` on basis pairs.
    pub fn check(&self) -> Result<Verdict> {
        let mu = self.algebra.pi();
        let lhs = mu.pullback_inputs(&self.operator)?;
        let mut inner = &self.mu_right()? + &self.mu_left()?;
        inner.add_scaled(&self.weight, mu)?;
        let rhs = inner.map_output(&self.operator)?;
        Ok(Verdict::vanishing(&(&lhs - &rhs)))
    }

    /// `x ≺ y = μ(x, Ry)`, `x ≻ y = μ(Rx, y)`, `x · y = λ μ(x, y)`.
    pub fn to_tridendriform(&self) -> Result<AlgebraSpec> {
        if let Some(w) = self.check()?.witness {
            return Err(Error::Precondition(format!("not a Rota-Baxter operator: {w}")));
        }
        let dot = self.algebra.pi().scale(&self.weight);
        AlgebraSpec::from_parts(
            Family::Tridendriform,
            self.algebra.dim,
            &[("{1}", &self.mu_right()?), ("{2}", &self.mu_left()?), ("{1,2}", &dot)],
        )
    }
}

/// `α ∘ π = γ(π; α, α)` for an arity-1 `α`.
pub fn is_endomorphism(spec: &AlgebraSpec, alpha: &Element) -> Result<bool> {
    let op = Operad::new(spec.family, spec.dim);
    let lhs = partial_compose(alpha, spec.pi(), 1)?;
    let rhs = op.gamma(spec.pi(), &[alpha, alpha])?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn d1() -> AlgebraSpec {
        AlgebraSpec::scalar(Family::Dendriform, &[1, 0]).unwrap()
    }

    #[test]
    fn scalar_validation() {
        assert!(d1().validate().unwrap().holds);
        assert!(!AlgebraSpec::scalar(Family::Dendriform, &[1, 1]).unwrap().validate().unwrap().holds);
        let dia = AlgebraSpec::scalar(Family::Dialgebra, &[1, 2]).unwrap();
        assert!(!dia.validate().unwrap().holds);
        for f in Family::ALL {
            assert!(AlgebraSpec::zero(f, 2).validate().unwrap().holds);
        }
    }

    #[test]
    fn representations() {
        let a = d1();
        assert!(a.adjoint().check().unwrap().is_none());
        assert!(a.trivial(2).check().unwrap().is_none());
        let mut bad = a.adjoint();
        let v = bad.theta1.get(0, 0, 0, 0) + &q(1);
        bad.theta1.set(0, 0, 0, 0, v);
        let w = bad.check().unwrap().expect("perturbed theta fails");
        assert!(!w.difference.is_zero());
        for rep in [a.adjoint(), a.trivial(1)] {
            assert!(rep.semidirect_product().unwrap().validate().unwrap().holds);
        }
    }

    #[test]
    fn morphisms() {
        let a = d1();
        assert!(MorphismSpec::identity(&a).check().unwrap().holds);
        let zero = MorphismSpec::new(a.clone(), a.clone(), QMatrix::zeros(1, 1)).unwrap();
        assert!(zero.check().unwrap().holds);
        let two = MorphismSpec::new(a.clone(), a, QMatrix::from_i64(&[&[2]])).unwrap();
        assert!(!two.check().unwrap().holds);
    }

    #[test]
    fn rota_baxter_examples() {
        let e = AlgebraSpec::scalar(Family::Associative, &[1]).unwrap();
        let id = QMatrix::identity(1);
        let rb = RotaBaxterSpec::new(e.clone(), id.clone(), q(-1)).unwrap();
        assert!(rb.check().unwrap().holds);
        assert!(!RotaBaxterSpec::new(e.clone(), id, q(0)).unwrap().check().unwrap().holds);
        let zero = RotaBaxterSpec::new(e, QMatrix::zeros(1, 1), q(5)).unwrap();
        assert!(zero.check().unwrap().holds);

        let tri = rb.to_tridendriform().unwrap();
        assert_eq!(tri.product("{1}").unwrap().coeffs()[0], q(1));
        assert_eq!(tri.product("{2}").unwrap().coeffs()[0], q(1));
        assert_eq!(tri.product("{1,2}").unwrap().coeffs()[0], q(-1));
        assert!(tri.validate().unwrap().holds);
        let den = tri.tridendriform_to_dendriform().unwrap();
        assert_eq!(den, AlgebraSpec::scalar(Family::Dendriform, &[0, 1]).unwrap());
        assert!(den.validate().unwrap().holds);
        let star = tri.to_associative().unwrap();
        assert_eq!(star, AlgebraSpec::scalar(Family::Associative, &[1]).unwrap());
    }
}
