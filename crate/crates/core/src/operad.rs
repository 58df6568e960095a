//! Partial compositions, braces and the pre-Lie calculus on `O(n)`.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use crate::cochain::{ipow, Element, Witness};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::Rational;
use crate::shapes::{composition_table, shape_set, Family};
use crate::twisted::TwistPair;

/// Outcome of an identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { holds: true, witness: None }
    }

    /// Passes iff `e` vanishes; otherwise reports its first nonzero entry.
    pub fn vanishing(e: &Element) -> Self {
        match e.first_nonzero() {
            None => Self::pass(),
            Some(w) => Verdict { holds: false, witness: Some(w) },
        }
    }
}

/// `(−1)^k`.
pub(crate) fn sign(k: usize) -> Rational {
    Rational::sign(k)
}

fn compatible(f: &Element, g: &Element) -> Result<()> {
    if f.family() != g.family()
        || f.in_dim() != g.in_dim()
        || f.out_dim() != g.out_dim()
        || f.in_dim() != f.out_dim()
    {
        return Err(Error::Context(format!(
            "cannot compose {} with {}",
            f.describe(),
            g.describe()
        )));
    }
    Ok(())
}

/// Untwisted `f ∘_i g` (slots 1-based), evaluated through the structure functions.
pub fn partial_compose(f: &Element, g: &Element, i: usize) -> Result<Element> {
    compatible(f, g)?;
    let (m, n) = (f.arity(), g.arity());
    if i == 0 || i > m {
        return Err(Error::Index(format!("slot {i} of an arity-{m} element")));
    }
    if n == 1 {
        return f.map_input_slot(i - 1, &g.to_matrix()?);
    }
    if m == 1 {
        return g.map_output(&f.to_matrix()?);
    }
    Ok(compose_generic(f, g, i))
}

fn compose_generic(f: &Element, g: &Element, i: usize) -> Element {
    let (m, n) = (f.arity(), g.arity());
    let d = f.in_dim();
    let big = m + n - 1;
    let table = composition_table(f.family(), m, n, i).expect("ranges checked");
    let mut h = Element::zero(f.family(), big, d, d);
    let g_tuples = ipow(d, n);
    let before = ipow(d, i - 1);
    let after = ipow(d, m - i);
    let f_tuples = f.tuples();
    let h_tuples = h.tuples();

    // Σ_s c_s g(s; ·) for each distinct value of R_i
    let mut blocks: HashMap<usize, Vec<Rational>> = HashMap::new();
    for (r, &sum_id) in table.ri.iter().enumerate() {
        let block = blocks.entry(sum_id).or_insert_with(|| {
            let mut acc = vec![Rational::zero(); g_tuples * d];
            for &(s, c) in &table.sums[sum_id] {
                let c = Rational::from_int(c as i64);
                let src = &g.coeffs()[s * g_tuples * d..(s + 1) * g_tuples * d];
                for (a, b) in acc.iter_mut().zip(src) {
                    if !b.is_zero() {
                        a.add_mul(&c, b);
                    }
                }
            }
            acc
        });
        let r0 = table.r0[r];
        let f_base = r0 * f_tuples * d;
        let h_base = r * h_tuples * d;
        let hc = h.coeffs_mut();
        for pre in 0..before {
            for mid in 0..g_tuples {
                let gv = &block[mid * d..(mid + 1) * d];
                if gv.iter().all(Rational::is_zero) {
                    continue;
                }
                for post in 0..after {
                    let ht = (pre * g_tuples + mid) * after + post;
                    let dst = h_base + ht * d;
                    for (k, c) in gv.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let ft = (pre * d + k) * after + post;
                        let src = f_base + ft * d;
                        for o in 0..d {
                            let x = &f.coeffs()[src + o];
                            if !x.is_zero() {
                                hc[dst + o].add_mul(c, x);
                            }
                        }
                    }
                }
            }
        }
    }
    h
}

/// Result of a brace: `empty` is set when there were more arguments than slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraceResult {
    pub value: Element,
    pub empty: bool,
}

/// Violations found by [`Operad::check_axioms`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: usize,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The operad `O(n) = Hom(K[U_n] ⊗ A^{⊗n}, A)` for one family and `dim A`,
/// optionally with the twisted composition rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operad {
    pub family: Family,
    pub dim: usize,
    pub twist: Option<TwistPair>,
}

impl Operad {
    pub fn new(family: Family, dim: usize) -> Self {
        Operad { family, dim, twist: None }
    }

    pub fn twisted(family: Family, dim: usize, twist: TwistPair) -> Result<Self> {
        twist.check_context(family, dim)?;
        Ok(Operad { family, dim, twist: Some(twist) })
    }

    /// The same operad with the twist dropped.
    pub fn untwisted(&self) -> Operad {
        Operad::new(self.family, self.dim)
    }

    pub fn identity(&self) -> Element {
        Element::identity(self.family, self.dim)
    }

    pub fn zero(&self, arity: usize) -> Element {
        Element::zero(self.family, arity, self.dim, self.dim)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, arity: usize) -> Element {
        Element::random(rng, self.family, arity, self.dim, self.dim)
    }

    /// Number of coordinates of `O(n)`.
    pub fn space_dim(&self, arity: usize) -> usize {
        shape_set(self.family, arity).len() * ipow(self.dim, arity) * self.dim
    }

    fn check(&self, f: &Element) -> Result<()> {
        if f.family() != self.family || f.in_dim() != self.dim || f.out_dim() != self.dim {
            return Err(Error::Context(format!(
                "{} is not an element of the {} operad on dim {}",
                f.describe(),
                self.family,
                self.dim
            )));
        }
        Ok(())
    }

    /// `f ∘_i g` under this operad's rule.
    pub fn compose(&self, f: &Element, g: &Element, i: usize) -> Result<Element> {
        self.check(f)?;
        self.check(g)?;
        match &self.twist {
            None => partial_compose(f, g, i),
            Some(tw) => tw.compose(f, g, i),
        }
    }

    /// `γ(f; g_1, …, g_k) = (⋯(f ∘_k g_k) ∘_{k−1} g_{k−1} ⋯) ∘_1 g_1`.
    pub fn gamma(&self, f: &Element, gs: &[&Element]) -> Result<Element> {
        if gs.len() != f.arity() {
            return Err(Error::Index(format!(
                "gamma of an arity-{} element needs {} arguments, got {}",
                f.arity(),
                f.arity(),
                gs.len()
            )));
        }
        let mut h = f.clone();
        for (k, g) in gs.iter().enumerate().rev() {
            h = self.compose(&h, g, k + 1)?;
        }
        Ok(h)
    }

    /// `{f}{g_1, …, g_k}`.
    pub fn brace(&self, f: &Element, gs: &[&Element]) -> Result<BraceResult> {
        self.check(f)?;
        for g in gs {
            self.check(g)?;
        }
        let m = f.arity();
        let k = gs.len();
        let arity = m + gs.iter().map(|g| g.degree()).sum::<usize>();
        let mut acc = self.zero(arity);
        if k > m {
            return Ok(BraceResult { value: acc, empty: true });
        }
        let mut positions: Vec<usize> = (1..=k).collect();
        loop {
            let mut eps = 0usize;
            let mut shift = 0usize;
            for (l, g) in gs.iter().enumerate() {
                eps += g.degree() * (positions[l] - 1 + shift);
                shift += g.degree();
            }
            let mut h = f.clone();
            for l in (0..k).rev() {
                h = self.compose(&h, gs[l], positions[l])?;
            }
            acc.add_scaled(&sign(eps), &h)?;
            if !next_increasing(&mut positions, m) {
                break;
            }
        }
        Ok(BraceResult { value: acc, empty: false })
    }

    /// `f ∘ g = Σ_i (−1)^{(i−1)|g|} f ∘_i g`.
    pub fn circle(&self, f: &Element, g: &Element) -> Result<Element> {
        let mut acc = self.zero(f.arity() + g.degree());
        for i in 1..=f.arity() {
            let t = self.compose(f, g, i)?;
            acc.add_scaled(&sign((i - 1) * g.degree()), &t)?;
        }
        Ok(acc)
    }

    /// `[f, g] = f ∘ g − (−1)^{|f||g|} g ∘ f`.
    pub fn bracket(&self, f: &Element, g: &Element) -> Result<Element> {
        let mut out = self.circle(f, g)?;
        let back = self.circle(g, f)?;
        out.add_scaled(&-sign(f.degree() * g.degree()), &back)?;
        Ok(out)
    }

    /// `f · g = (−1)^{|f|+1} {π}{f, g}`.
    pub fn cup(&self, pi: &Element, f: &Element, g: &Element) -> Result<Element> {
        if pi.arity() != 2 {
            return Err(Error::Precondition("cup product needs an arity-2 element".into()));
        }
        let b = self.brace(pi, &[f, g])?;
        Ok(b.value.scale(&sign(f.degree() + 1)))
    }

    /// `d_π f = π ∘ f − (−1)^{|f|} f ∘ π`.
    pub fn differential(&self, pi: &Element, f: &Element) -> Result<Element> {
        let mut out = self.circle(pi, f)?;
        let back = self.circle(f, pi)?;
        out.add_scaled(&-sign(f.degree()), &back)?;
        Ok(out)
    }

    /// `π ∘ π`, whose vanishing defines a multiplication.
    pub fn square(&self, pi: &Element) -> Result<Element> {
        if pi.arity() != 2 {
            return Err(Error::Precondition("a multiplication has arity 2".into()));
        }
        self.circle(pi, pi)
    }

    pub fn is_multiplication(&self, pi: &Element) -> Result<Verdict> {
        Ok(Verdict::vanishing(&self.square(pi)?))
    }

    /// Matrix of `d_π : O(n) → O(n+1)` assembled column by column.
    pub fn differential_matrix(&self, pi: &Element, arity: usize) -> Result<QMatrix> {
        self.linear_map_matrix(arity, arity + 1, |e| self.differential(pi, e))
    }

    /// Matrix of a linear map `O(n) → O(k)` given by its action on basis vectors.
    pub fn linear_map_matrix<F>(&self, arity: usize, out_arity: usize, map: F) -> Result<QMatrix>
    where
        F: Fn(&Element) -> Result<Element>,
    {
        let cols = self.space_dim(arity);
        let rows = self.space_dim(out_arity);
        let mut columns = Vec::with_capacity(cols);
        let mut e = self.zero(arity);
        for k in 0..cols {
            e.coeffs_mut()[k] = Rational::one();
            columns.push(map(&e)?.into_coeffs());
            e.coeffs_mut()[k] = Rational::zero();
        }
        QMatrix::from_columns(rows, &columns)
    }

    /// Sequential, parallel and unit axioms on each sample triple.
    pub fn check_axioms(&self, samples: &[(Element, Element, Element)]) -> Result<AxiomReport> {
        let mut report = AxiomReport::default();
        let id = self.identity();
        for (t, (f, g, h)) in samples.iter().enumerate() {
            let (m, n) = (f.arity(), g.arity());
            for i in 1..=m {
                let fg = self.compose(f, g, i)?;
                for j in 1..=n {
                    let lhs = self.compose(&fg, h, i + j - 1)?;
                    let rhs = self.compose(f, &self.compose(g, h, j)?, i)?;
                    report.checks += 1;
                    if lhs != rhs {
                        report
                            .violations
                            .push(format!("sample {t}: sequential axiom fails at i={i}, j={j}"));
                    }
                }
                for j in i + 1..=m {
                    let lhs = self.compose(&fg, h, j + n - 1)?;
                    let rhs = self.compose(&self.compose(f, h, j)?, g, i)?;
                    report.checks += 1;
                    if lhs != rhs {
                        report
                            .violations
                            .push(format!("sample {t}: parallel axiom fails at i={i}, j={j}"));
                    }
                }
            }
            for x in [f, g, h] {
                for i in 1..=x.arity() {
                    report.checks += 1;
                    if &self.compose(x, &id, i)? != x {
                        report.violations.push(format!("sample {t}: right unit fails at {i}"));
                    }
                }
                report.checks += 1;
                if &self.compose(&id, x, 1)? != x {
                    report.violations.push(format!("sample {t}: left unit fails"));
                }
            }
        }
        Ok(report)
    }
}

/// Advances a strictly increasing tuple in `1..=m`; false when exhausted.
fn next_increasing(p: &mut [usize], m: usize) -> bool {
    let k = p.len();
    for l in (0..k).rev() {
        if p[l] < m - (k - 1 - l) {
            p[l] += 1;
            for j in l + 1..k {
                p[j] = p[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
