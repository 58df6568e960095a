//! Twisted operads `O_{α,β}` and the Yau twist.

use crate::cochain::Element;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::operad::{partial_compose, Operad, Verdict};
use crate::shapes::Family;

/// Commuting arity-1 elements `α`, `β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistPair {
    alpha: Element,
    beta: Element,
}

impl TwistPair {
    pub fn new(alpha: Element, beta: Element) -> Result<Self> {
        if alpha.arity() != 1 || !alpha.same_space(&beta) || alpha.in_dim() != alpha.out_dim() {
            return Err(Error::Context("twist maps must be arity-1 endomorphisms of A".into()));
        }
        let ab = partial_compose(&alpha, &beta, 1)?;
        let ba = partial_compose(&beta, &alpha, 1)?;
        if ab != ba {
            return Err(Error::Precondition(format!(
                "alpha and beta do not commute: {}",
                (&ab - &ba).first_nonzero().expect("nonzero difference")
            )));
        }
        Ok(TwistPair { alpha, beta })
    }

    pub fn from_matrices(family: Family, alpha: &QMatrix, beta: &QMatrix) -> Result<Self> {
        Self::new(Element::from_matrix(family, alpha), Element::from_matrix(family, beta))
    }

    pub fn identity(family: Family, dim: usize) -> Self {
        let id = Element::identity(family, dim);
        TwistPair { alpha: id.clone(), beta: id }
    }

    pub fn alpha(&self) -> &Element {
        &self.alpha
    }

    pub fn beta(&self) -> &Element {
        &self.beta
    }

    pub(crate) fn check_context(&self, family: Family, dim: usize) -> Result<()> {
        if self.alpha.family() != family || self.alpha.in_dim() != dim {
            return Err(Error::Context(format!(
                "twist pair lives over {}, operad is {family} on dim {dim}",
                self.alpha.describe()
            )));
        }
        Ok(())
    }

    /// `α^k` under arity-1 composition; `α^0 = id`.
    pub fn alpha_power(&self, k: usize) -> Element {
        power(&self.alpha, k)
    }

    pub fn beta_power(&self, k: usize) -> Element {
        power(&self.beta, k)
    }

    /// `f ∘'_i g = γ(f; α^{n−1}, …, α^{n−1}, g, β^{n−1}, …, β^{n−1})`.
    pub fn compose(&self, f: &Element, g: &Element, i: usize) -> Result<Element> {
        let m = f.arity();
        if i == 0 || i > m {
            return Err(Error::Index(format!("slot {i} of an arity-{m} element")));
        }
        let k = g.arity() - 1;
        let a = self.alpha_power(k);
        let b = self.beta_power(k);
        let mut h = f.clone();
        for slot in (1..=m).rev() {
            let arg = match slot.cmp(&i) {
                std::cmp::Ordering::Less => &a,
                std::cmp::Ordering::Equal => g,
                std::cmp::Ordering::Greater => &b,
            };
            h = partial_compose(&h, arg, slot)?;
        }
        Ok(h)
    }

    /// Membership in `O_{α,β}(n)`: `γ(f; α, …, α) = α ∘ f` and likewise for `β`.
    pub fn contains(&self, f: &Element) -> Result<Verdict> {
        let op = Operad::new(f.family(), f.in_dim());
        for t in [&self.alpha, &self.beta] {
            let args = vec![t; f.arity()];
            let lhs = op.gamma(f, &args)?;
            let rhs = partial_compose(t, f, 1)?;
            let v = Verdict::vanishing(&(&lhs - &rhs));
            if !v.holds {
                return Ok(v);
            }
        }
        Ok(Verdict::pass())
    }

    /// `{π}{α, β}`: `(r; a, b) ↦ π(r; α a, β b)`.
    ///
    /// Requires `α`, `β` to be endomorphisms of `π`; the result is checked to be
    /// a multiplication for `∘'`.
    pub fn yau_twist(&self, pi: &Element) -> Result<Element> {
        if pi.arity() != 2 {
            return Err(Error::Precondition("the Yau twist acts on arity-2 elements".into()));
        }
        let op = Operad::new(pi.family(), pi.in_dim());
        if !op.is_multiplication(pi)?.holds {
            return Err(Error::Precondition("input is not a multiplication".into()));
        }
        for (name, t) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            let lhs = partial_compose(t, pi, 1)?;
            let rhs = op.gamma(pi, &[t, t])?;
            if let Some(w) = (&lhs - &rhs).first_nonzero() {
                return Err(Error::Precondition(format!(
                    "{name} is not an algebra endomorphism: {w}"
                )));
            }
        }
        let twisted = op.gamma(pi, &[&self.alpha, &self.beta])?;
        let top = Operad::twisted(pi.family(), pi.in_dim(), self.clone())?;
        if let Some(w) = top.is_multiplication(&twisted)?.witness {
            return Err(Error::Precondition(format!(
                "twisted product fails the multiplication test: {w}"
            )));
        }
        Ok(twisted)
    }
}

fn power(x: &Element, k: usize) -> Element {
    let mut out = Element::identity(x.family(), x.in_dim());
    for _ in 0..k {
        out = partial_compose(x, &out, 1).expect("arity-1 composition");
    }
    out
}
