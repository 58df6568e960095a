//! Formal deformations of a multiplication, truncated mod `t^{N+1}`.

use serde::Serialize;

use crate::algebra::AlgebraSpec;
use crate::cochain::{Element, Witness};
use crate::cohomology::differential_matrix;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::operad::{Operad, Verdict};
use crate::rational::Rational;

/// `π_t = π_0 + π_1 t + ⋯ + π_N t^N` with `π_0` the base product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedDeformation {
    pub base: AlgebraSpec,
    terms: Vec<Element>,
}

/// `φ_t = id + φ_1 t + ⋯ + φ_N t^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalAutomorphism {
    terms: Vec<Element>,
}

/// `x = x_1 t + ⋯ + x_N t^N` in `O(1) ⊗ (t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree0Series {
    terms: Vec<Element>,
}

/// First order at which the deformation equation fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeformationCheck {
    pub holds: bool,
    pub order: Option<usize>,
    pub witness: Option<Witness>,
}

/// Outcome of an order-by-order extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension<T, O = Element> {
    Extended(T),
    /// The obstruction is not a coboundary; carries the obstruction cocycle.
    Obstructed(O),
}

impl TruncatedDeformation {
    /// `terms = [π_1, …, π_N]`.
    pub fn new(base: AlgebraSpec, higher: Vec<Element>) -> Result<Self> {
        for t in &higher {
            t.check_same_space(base.pi())?;
        }
        let mut terms = vec![base.pi().clone()];
        terms.extend(higher);
        Ok(TruncatedDeformation { base, terms })
    }

    pub fn constant(base: AlgebraSpec, order: usize) -> Self {
        let z = base.operad().zero(2);
        Self::new(base, vec![z; order]).expect("same space")
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    /// `[π_0, …, π_N]`.
    pub fn terms(&self) -> &[Element] {
        &self.terms
    }

    pub fn term(&self, i: usize) -> &Element {
        &self.terms[i]
    }

    pub fn operad(&self) -> Operad {
        self.base.operad()
    }

    /// Same deformation cut at order `k`.
    pub fn truncate(&self, k: usize) -> Self {
        TruncatedDeformation {
            base: self.base.clone(),
            terms: self.terms[..=k.min(self.order())].to_vec(),
        }
    }

    pub fn push(&mut self, term: Element) -> Result<()> {
        term.check_same_space(self.base.pi())?;
        self.terms.push(term);
        Ok(())
    }

    /// `Σ_{i+j=n} π_i ∘ π_j`.
    pub fn equation(&self, n: usize) -> Result<Element> {
        let op = self.operad();
        let mut acc = op.zero(3);
        for i in 0..=n {
            acc += &op.circle(&self.terms[i], &self.terms[n - i])?;
        }
        Ok(acc)
    }

    /// Deformation equations for every order `≤ k`.
    pub fn is_deformation(&self, k: usize) -> Result<DeformationCheck> {
        if k > self.order() {
            return Err(Error::Index(format!("order {k} exceeds truncation {}", self.order())));
        }
        for n in 0..=k {
            if let Some(w) = self.equation(n)?.first_nonzero() {
                return Ok(DeformationCheck { holds: false, order: Some(n), witness: Some(w) });
            }
        }
        Ok(DeformationCheck { holds: true, order: None, witness: None })
    }

    /// First nonzero `π_p` (`p ≥ 1`) and whether it is a 2-cocycle.
    pub fn infinitesimal(&self) -> Result<Option<(usize, Element, bool)>> {
        let op = self.operad();
        for (p, t) in self.terms.iter().enumerate().skip(1) {
            if !t.is_zero() {
                let cocycle = op.differential(self.base.pi(), t)?.is_zero();
                return Ok(Some((p, t.clone(), cocycle)));
            }
        }
        Ok(None)
    }

    /// `Σ_{i+j=n+1, i,j≥1} π_i ∘ π_j` for a deformation valid to its order `n`.
    pub fn obstruction(&self) -> Result<Element> {
        let chk = self.is_deformation(self.order())?;
        if !chk.holds {
            return Err(Error::Precondition(format!(
                "not a deformation at order {}",
                chk.order.unwrap_or_default()
            )));
        }
        self.obstruction_unchecked()
    }

    fn obstruction_unchecked(&self) -> Result<Element> {
        let op = self.operad();
        let n = self.order();
        let mut acc = op.zero(3);
        for i in 1..=n {
            acc += &op.circle(&self.terms[i], &self.terms[n + 1 - i])?;
        }
        Ok(acc)
    }

    /// Solves `−d_π(π_{n+1}) = obstruction`.
    pub fn extend(&self) -> Result<Extension<TruncatedDeformation>> {
        let ob = self.obstruction()?;
        let dm = differential_matrix(&self.base, 2)?;
        let rhs: Vec<Rational> = ob.coeffs().iter().map(|x| -x).collect();
        match dm.solve(&rhs)? {
            None => Ok(Extension::Obstructed(ob)),
            Some(x) => {
                let mut out = self.clone();
                let p = self.base.pi();
                out.push(Element::from_coeffs(p.family(), 2, p.in_dim(), p.out_dim(), x)?)?;
                Ok(Extension::Extended(out))
            }
        }
    }
}

/// `π + γ` is a deformation iff the Maurer-Cartan equations
/// `d_π(π_k) + ½ Σ_{i+j=k} [π_i, π_j] = 0` hold; both forms are evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McCheck {
    pub holds: bool,
    pub forms_agree: bool,
    pub order: Option<usize>,
}

pub fn mc_check(base: &AlgebraSpec, gamma: &[Element]) -> Result<McCheck> {
    let def = TruncatedDeformation::new(base.clone(), gamma.to_vec())?;
    let eq = def.is_deformation(def.order())?;
    let op = base.operad();
    let half = Rational::new(1, 2)?;
    let mut mc_fail = None;
    for k in 1..=gamma.len() {
        let mut acc = op.differential(base.pi(), &def.terms[k])?;
        for i in 1..k {
            let br = op.bracket(&def.terms[i], &def.terms[k - i])?;
            acc.add_scaled(&half, &br)?;
        }
        if !acc.is_zero() {
            mc_fail = Some(k);
            break;
        }
    }
    let eq_fail = eq.order.filter(|&n| n > 0);
    Ok(McCheck {
        holds: mc_fail.is_none(),
        forms_agree: mc_fail == eq_fail,
        order: mc_fail,
    })
}

fn series_compose(op: &Operad, a: &[Element], b: &[Element], n: usize) -> Result<Element> {
    let mut acc = op.zero(1);
    for i in 0..=n {
        acc += &op.compose(&a[i], &b[n - i], 1)?;
    }
    Ok(acc)
}

impl FormalAutomorphism {
    /// `terms = [φ_1, …, φ_N]`.
    pub fn new(op: &Operad, higher: Vec<Element>) -> Result<Self> {
        let id = op.identity();
        for t in &higher {
            t.check_same_space(&id)?;
        }
        let mut terms = vec![id];
        terms.extend(higher);
        Ok(FormalAutomorphism { terms })
    }

    /// Accepts a full list `[φ_0, …, φ_N]`, rejecting `φ_0 ≠ id`.
    pub fn from_terms(terms: Vec<Element>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::Precondition("empty automorphism".into()))?;
        if *first != Element::identity(first.family(), first.in_dim()) {
            return Err(Error::Precondition("φ_0 must be the identity".into()));
        }
        for t in &terms {
            t.check_same_space(first)?;
        }
        Ok(FormalAutomorphism { terms })
    }

    pub fn identity(op: &Operad, order: usize) -> Self {
        Self::new(op, vec![op.zero(1); order]).expect("same space")
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[Element] {
        &self.terms
    }

    /// `(φ ∘ χ)_n = Σ_{i+j=n} φ_i ∘ χ_j`.
    pub fn compose(&self, op: &Operad, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        let terms = (0..=n)
            .map(|k| series_compose(op, &self.terms, &other.terms, k))
            .collect::<Result<_>>()?;
        Ok(FormalAutomorphism { terms })
    }

    /// `ψ_n = −Σ_{i≥1} φ_i ∘ ψ_{n−i}`.
    pub fn invert(&self, op: &Operad) -> Result<Self> {
        let mut psi = vec![op.identity()];
        for n in 1..=self.order() {
            let mut acc = op.zero(1);
            for i in 1..=n {
                acc -= &op.compose(&self.terms[i], &psi[n - i], 1)?;
            }
            psi.push(acc);
        }
        Ok(FormalAutomorphism { terms: psi })
    }

    /// `π'_t = φ_t^{-1} ∘ {π_t}{φ_t, φ_t}`.
    pub fn apply(&self, def: &TruncatedDeformation) -> Result<TruncatedDeformation> {
        if self.order() != def.order() {
            return Err(Error::Precondition(format!(
                "automorphism of order {} against deformation of order {}",
                self.order(),
                def.order()
            )));
        }
        let op = def.operad();
        let n = def.order();
        let inv = self.invert(&op)?;
        let braces: Vec<Element> = (0..=n)
            .map(|k| brace_term(&op, def.terms(), &self.terms, k, false))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            let mut acc = op.zero(2);
            for a in 0..=k {
                acc += &op.compose(&inv.terms[a], &braces[k - a], 1)?;
            }
            out.push(acc);
        }
        TruncatedDeformation::new(def.base.clone(), out)
    }
}

/// `Σ_{i+j+k=n} γ(π_i; φ_j, φ_k)`, optionally skipping the two terms linear in `φ_n`.
fn brace_term(
    op: &Operad,
    pis: &[Element],
    phis: &[Element],
    n: usize,
    skip_linear: bool,
) -> Result<Element> {
    let mut acc = op.zero(2);
    for i in 0..=n {
        for j in 0..=n - i {
            let k = n - i - j;
            if skip_linear && i == 0 && (j == n || k == n) {
                continue;
            }
            acc += &op.gamma(&pis[i], &[&phis[j], &phis[k]])?;
        }
    }
    Ok(acc)
}

/// Order-`k` coefficient of the infinitesimal action of `ξ = Σ_{j≥1} ξ_j t^j`
/// on `π_t`: `Σ_j π_{k−j}{ξ_j, id} + π_{k−j}{id, ξ_j} − ξ_j ∘ π_{k−j}`.
fn infinitesimal_action(op: &Operad, pis: &[Element], xi: &[Element], k: usize) -> Result<Element> {
    let id = op.identity();
    let mut acc = op.zero(2);
    for j in 1..=k.min(xi.len()) {
        let (x, p) = (&xi[j - 1], &pis[k - j]);
        acc += &op.gamma(p, &[x, &id])?;
        acc += &op.gamma(p, &[&id, x])?;
        acc -= &op.compose(x, p, 1)?;
    }
    Ok(acc)
}

/// Basis of `{ξ_1, …, ξ_{n−1}}` whose action on `π_t` vanishes mod `t^n`: the
/// Lie algebra of the self-equivalences of `π_t` mod `t^n`.
fn stabilizer_algebra(op: &Operad, pis: &[Element], n: usize) -> Result<Vec<Vec<Element>>> {
    let c1 = op.space_dim(1);
    let unpack = |v: &[Rational]| -> Result<Vec<Element>> {
        v.chunks(c1)
            .map(|c| Element::from_coeffs(op.family, 1, op.dim, op.dim, c.to_vec()))
            .collect()
    };
    let mut columns = Vec::with_capacity((n - 1) * c1);
    for var in 0..(n - 1) * c1 {
        let mut v = vec![Rational::zero(); (n - 1) * c1];
        v[var] = Rational::one();
        let xi = unpack(&v)?;
        let mut col = Vec::new();
        for k in 1..n {
            col.extend(infinitesimal_action(op, pis, &xi, k)?.coeffs().iter().cloned());
        }
        columns.push(col);
    }
    let rows = (n - 1) * op.space_dim(2);
    QMatrix::from_columns(rows, &columns)?.kernel_basis().iter().map(|v| unpack(v)).collect()
}

/// Searches order by order for `φ` with `φ · def1 = def2`.
///
/// At each order the candidate is first precomposed with a self-equivalence
/// of `def1` chosen to make the order solvable. The achievable corrections
/// form a linear space (the image of the stabilizer's Lie algebra), so each
/// order is decided by one linear solve and `None` is conclusive.
pub fn are_equivalent(
    def1: &TruncatedDeformation,
    def2: &TruncatedDeformation,
    order: usize,
) -> Result<Option<FormalAutomorphism>> {
    if def1.base != def2.base {
        return Err(Error::Context("deformations of different algebras".into()));
    }
    if order > def1.order() || order > def2.order() {
        return Err(Error::Index(format!("order {order} exceeds truncation")));
    }
    let op = def1.operad();
    let dm = differential_matrix(&def1.base, 1)?;
    let rhs = |phis: &[Element], n: usize| -> Result<Element> {
        let mut acc = op.zero(2);
        for i in 0..n {
            acc += &op.compose(&phis[i], &def2.terms[n - i], 1)?;
        }
        acc -= &brace_term(&op, def1.terms(), phis, n, true)?;
        Ok(acc)
    };
    let precompose = |xi: &[Element], phis: &[Element], n: usize| -> Result<Vec<Element>> {
        let mut x = xi.to_vec();
        x.push(op.zero(1));
        let sigma = Degree0Series::new(&op, x)?.exp(&op)?;
        let phi = FormalAutomorphism { terms: phis[..=n].to_vec() };
        Ok(sigma.compose(&op, &phi)?.terms)
    };
    let mut phis = vec![op.identity()];
    for n in 1..=order {
        phis.push(op.zero(1));
        let b = rhs(&phis, n)?;
        if dm.solve(b.coeffs())?.is_none() {
            let stab = stabilizer_algebra(&op, def1.terms(), n)?;
            let mut columns: Vec<Vec<Rational>> = (0..dm.cols()).map(|c| dm.column(c)).collect();
            for xi in &stab {
                let moved = rhs(&precompose(xi, &phis, n)?, n)?;
                columns.push((&b - &moved).coeffs().to_vec());
            }
            let aug = QMatrix::from_columns(dm.rows(), &columns)?;
            let Some(x) = aug.solve(b.coeffs())? else { return Ok(None) };
            let mut xi: Vec<Element> = (1..n).map(|_| op.zero(1)).collect();
            for (c, basis) in x[dm.cols()..].iter().zip(&stab) {
                for (acc, e) in xi.iter_mut().zip(basis) {
                    acc.add_scaled(c, e)?;
                }
            }
            phis = precompose(&xi, &phis, n)?;
        }
        let b = rhs(&phis, n)?;
        let x = dm.solve(b.coeffs())?.ok_or_else(|| {
            Error::Context(format!("order {n} unsolvable after the stabilizer correction"))
        })?;
        phis[n] = Element::from_coeffs(op.family, 1, op.dim, op.dim, x)?;
    }
    Ok(Some(FormalAutomorphism { terms: phis }))
}

/// `D^k` under arity-1 composition.
pub fn power(op: &Operad, d: &Element, k: usize) -> Result<Element> {
    let mut out = op.identity();
    for _ in 0..k {
        out = op.compose(d, &out, 1)?;
    }
    Ok(out)
}

/// `π_n = −(1/n!) D^n · D̄^n` for commuting 1-cocycles `D`, `D̄`.
pub fn universal_deformation(
    base: &AlgebraSpec,
    d: &Element,
    dbar: &Element,
    order: usize,
) -> Result<TruncatedDeformation> {
    let op = base.operad();
    for (name, x) in [("D", d), ("D̄", dbar)] {
        if let Some(w) = op.differential(base.pi(), x)?.first_nonzero() {
            return Err(Error::Precondition(format!("{name} is not a 1-cocycle: {w}")));
        }
    }
    let comm = &op.compose(d, dbar, 1)? - &op.compose(dbar, d, 1)?;
    if let Some(w) = comm.first_nonzero() {
        return Err(Error::Precondition(format!("D and D̄ do not commute: {w}")));
    }
    let mut terms = Vec::with_capacity(order);
    for n in 1..=order {
        let cup = op.cup(base.pi(), &power(&op, d, n)?, &power(&op, dbar, n)?)?;
        terms.push(cup.scale(&-Rational::inv_factorial(n)));
    }
    TruncatedDeformation::new(base.clone(), terms)
}

/// Defects `(lhs − rhs)` of the two derivation rules
/// `D^p ∘ (D^q · D̄^q) = Σ_j C(p,j) D^{q+j} · (D^{p−j} ∘ D̄^q)` and
/// `D^p ∘ (D̄^q · D^q) = Σ_j C(p,j) (D^j ∘ D̄^q) · D^{q+p−j}`.
pub fn derivation_rule_defects(
    base: &AlgebraSpec,
    d: &Element,
    dbar: &Element,
    p: usize,
    q: usize,
) -> Result<(Element, Element)> {
    let op = base.operad();
    let pi = base.pi();
    let pw = |x: &Element, k| power(&op, x, k);
    let dp = pw(d, p)?;
    let dq = pw(d, q)?;
    let bq = pw(dbar, q)?;
    let mut first = op.compose(&dp, &op.cup(pi, &dq, &bq)?, 1)?;
    let mut second = op.compose(&dp, &op.cup(pi, &bq, &dq)?, 1)?;
    for j in 0..=p {
        let c = Rational::binomial(p, j);
        let t1 = op.cup(pi, &pw(d, q + j)?, &op.compose(&pw(d, p - j)?, &bq, 1)?)?;
        first.add_scaled(&-&c, &t1)?;
        let t2 = op.cup(pi, &op.compose(&pw(d, j)?, &bq, 1)?, &pw(d, q + p - j)?)?;
        second.add_scaled(&-&c, &t2)?;
    }
    Ok((first, second))
}

impl Degree0Series {
    pub fn new(op: &Operad, terms: Vec<Element>) -> Result<Self> {
        let z = op.zero(1);
        for t in &terms {
            t.check_same_space(&z)?;
        }
        Ok(Degree0Series { terms })
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    /// `[x_1, …, x_N]`.
    pub fn terms(&self) -> &[Element] {
        &self.terms
    }

    fn padded(&self, op: &Operad) -> Vec<Element> {
        let mut v = vec![op.zero(1)];
        v.extend(self.terms.iter().cloned());
        v
    }

    /// `exp(x) = Σ_k x^{∘k} / k!`.
    pub fn exp(&self, op: &Operad) -> Result<FormalAutomorphism> {
        let n = self.order();
        let x = self.padded(op);
        let mut power = FormalAutomorphism::identity(op, n).terms;
        let mut acc = power.clone();
        for k in 1..=n {
            power = (0..=n)
                .map(|m| series_compose(op, &x, &power, m))
                .collect::<Result<_>>()?;
            let c = Rational::inv_factorial(k);
            for (a, p) in acc.iter_mut().zip(&power) {
                a.add_scaled(&c, p)?;
            }
        }
        Ok(FormalAutomorphism { terms: acc })
    }
}

impl FormalAutomorphism {
    /// `log(h) = Σ_{k≥1} (−1)^{k+1} (h − id)^{∘k} / k`.
    pub fn log(&self, op: &Operad) -> Result<Degree0Series> {
        let n = self.order();
        let mut y = self.terms.clone();
        y[0] = op.zero(1);
        let mut power = y.clone();
        let mut acc: Vec<Element> = vec![op.zero(1); n + 1];
        for k in 1..=n {
            if k > 1 {
                power = (0..=n)
                    .map(|m| series_compose(op, &y, &power, m))
                    .collect::<Result<_>>()?;
            }
            let c = &Rational::sign(k + 1) * &Rational::new(1, k as i64)?;
            for (a, p) in acc.iter_mut().zip(&power) {
                a.add_scaled(&c, p)?;
            }
        }
        acc.remove(0);
        Degree0Series::new(op, acc)
    }
}

/// Verdict for `d_π(x) = 0`.
pub fn is_cocycle(base: &AlgebraSpec, x: &Element) -> Result<Verdict> {
    Ok(Verdict::vanishing(&base.operad().differential(base.pi(), x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::Family;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d1() -> AlgebraSpec {
        AlgebraSpec::scalar(Family::Dendriform, &[1, 0]).unwrap()
    }

    #[test]
    fn stabilizer_algebra_fixes_the_deformation() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let a = crate::fixtures::truncated_polynomial();
        let op = a.operad();
        let dm = differential_matrix(&a, 2).unwrap();
        let z = dm.kernel_basis();
        let p1 = Element::from_coeffs(a.family, 2, 3, 3, z[z.len() - 1].clone()).unwrap();
        let mut def = TruncatedDeformation::new(a, vec![p1]).unwrap();
        for _ in 0..2 {
            if let Extension::Extended(next) = def.extend().unwrap() {
                def = next;
            }
        }
        let n = def.order();
        let stab = stabilizer_algebra(&op, def.terms(), n).unwrap();
        assert!(!stab.is_empty());
        for xi in &stab {
            let mut x = xi.clone();
            x.push(op.random(&mut rng, 1));
            let sigma = Degree0Series::new(&op, x).unwrap().exp(&op).unwrap();
            let moved = sigma.apply(&def).unwrap();
            assert_eq!(moved.truncate(n - 1), def.truncate(n - 1));
        }
    }

    #[test]
    fn trivial_direction_deformation() {
        let a = d1();
        let def = TruncatedDeformation::new(a.clone(), vec![a.pi().clone()]).unwrap();
        assert!(def.is_deformation(1).unwrap().holds);
        let (p, x, cocycle) = def.infinitesimal().unwrap().unwrap();
        assert_eq!((p, &x, cocycle), (1, a.pi(), true));
        assert!(def.obstruction().unwrap().is_zero());
        assert!(TruncatedDeformation::constant(a, 3).infinitesimal().unwrap().is_none());
    }

    #[test]
    fn non_cocycle_fails_at_order_one() {
        let a = d1();
        let mut bad = a.operad().zero(2);
        bad.set(1, &[0, 0], 0, Rational::one());
        let def = TruncatedDeformation::new(a, vec![bad]).unwrap();
        let chk = def.is_deformation(1).unwrap();
        assert_eq!((chk.holds, chk.order), (false, Some(1)));
    }

    #[test]
    fn nilpotent_inverse_and_exp() {
        let op = Operad::new(Family::Associative, 2);
        let mut n = op.zero(1);
        n.set(0, &[0], 1, Rational::one());
        let phi = FormalAutomorphism::new(&op, vec![n.clone(), op.zero(1)]).unwrap();
        let inv = phi.invert(&op).unwrap();
        assert_eq!(inv.terms()[1], -&n);
        assert!(inv.terms()[2].is_zero());
        let x = Degree0Series::new(&op, vec![n.clone(), op.zero(1)]).unwrap();
        assert_eq!(x.exp(&op).unwrap(), phi);
        assert_eq!(phi.log(&op).unwrap(), x);
    }

    #[test]
    fn equivalence_shifts_infinitesimal() {
        let a = d1();
        let op = a.operad();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let phi1 = op.random(&mut rng, 1);
        let phi = FormalAutomorphism::new(&op, vec![phi1.clone(), op.random(&mut rng, 1)]).unwrap();
        let def = TruncatedDeformation::constant(a.clone(), 2);
        let moved = phi.apply(&def).unwrap();
        assert!(moved.is_deformation(2).unwrap().holds);
        assert_eq!(moved.term(1), &op.differential(a.pi(), &phi1).unwrap());
        let back = phi.invert(&op).unwrap().apply(&moved).unwrap();
        assert_eq!(back, def);
        let found = are_equivalent(&def, &moved, 2).unwrap().expect("equivalent");
        assert_eq!(found.apply(&def).unwrap(), moved);
    }
}
