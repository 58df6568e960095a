//! Dense cochain tensors `K[U_n] ⊗ V^{⊗n} → W`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rand::Rng;
use serde::Serialize;

use crate::error::{dim_err, Error, Result};
use crate::linalg::QMatrix;
use crate::rational::Rational;
use crate::shapes::{shape_set, Family};

/// A multilinear map indexed by shapes of `U_arity`.
///
/// Coefficient layout: `(shape · in_dim^arity + tuple) · out_dim + out`, where
/// `tuple` reads the input basis indices with the first slot most significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    family: Family,
    arity: usize,
    in_dim: usize,
    out_dim: usize,
    coeffs: Vec<Rational>,
}

/// An element of `O(n) = Hom(K[U_n] ⊗ A^{⊗n}, A)`.
pub type Element = Cochain;
/// A cochain with values in a representation.
pub type MCochain = Cochain;

/// A nonzero coordinate, reported by failed checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub shape: String,
    pub inputs: Vec<usize>,
    pub output: usize,
    pub value: Rational,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ins: Vec<String> = self.inputs.iter().map(|i| format!("e{}", i + 1)).collect();
        write!(
            f,
            "shape {} on ({}) has coordinate {} equal to {}",
            self.shape,
            ins.join(","),
            self.output + 1,
            self.value
        )
    }
}

pub(crate) fn ipow(d: usize, n: usize) -> usize {
    d.checked_pow(n as u32).expect("tensor size overflow")
}

/// Decodes a tuple index into basis indices.
pub fn decode_tuple(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in (0..n).rev() {
        out[slot] = idx % d;
        idx /= d;
    }
    out
}

pub fn encode_tuple(tuple: &[usize], d: usize) -> usize {
    tuple.iter().fold(0, |acc, &a| acc * d + a)
}

impl Cochain {
    pub fn zero(family: Family, arity: usize, in_dim: usize, out_dim: usize) -> Self {
        assert!(arity >= 1, "arity must be at least 1");
        let len = shape_set(family, arity).len() * ipow(in_dim, arity) * out_dim;
        Cochain {
            family,
            arity,
            in_dim,
            out_dim,
            coeffs: vec![Rational::zero(); len],
        }
    }

    /// The unit `id ∈ O(1)`.
    pub fn identity(family: Family, dim: usize) -> Self {
        let mut c = Self::zero(family, 1, dim, dim);
        for a in 0..dim {
            c.coeffs[a * dim + a] = Rational::one();
        }
        c
    }

    /// The arity-1 element acting as the matrix `m` (`m.rows()` outputs).
    pub fn from_matrix(family: Family, m: &QMatrix) -> Self {
        let mut c = Self::zero(family, 1, m.cols(), m.rows());
        for r in 0..m.rows() {
            for (col, v) in m.row(r) {
                c.coeffs[col * m.rows() + r] = v.clone();
            }
        }
        c
    }

    /// Matrix of an arity-1 cochain.
    pub fn to_matrix(&self) -> Result<QMatrix> {
        if self.arity != 1 {
            return Err(dim_err("only arity-1 cochains are matrices"));
        }
        let mut m = QMatrix::zeros(self.out_dim, self.in_dim);
        for a in 0..self.in_dim {
            for o in 0..self.out_dim {
                m.set(o, a, self.coeffs[a * self.out_dim + o].clone())?;
            }
        }
        Ok(m)
    }

    pub fn from_coeffs(
        family: Family,
        arity: usize,
        in_dim: usize,
        out_dim: usize,
        coeffs: Vec<Rational>,
    ) -> Result<Self> {
        let z = Self::zero(family, arity, in_dim, out_dim);
        if coeffs.len() != z.coeffs.len() {
            return Err(dim_err(format!(
                "expected {} coefficients, got {}",
                z.coeffs.len(),
                coeffs.len()
            )));
        }
        Ok(Cochain { coeffs, ..z })
    }

    /// Random cochain with integer entries in `-2..=2`, about half of them zero.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        family: Family,
        arity: usize,
        in_dim: usize,
        out_dim: usize,
    ) -> Self {
        let mut c = Self::zero(family, arity, in_dim, out_dim);
        for x in &mut c.coeffs {
            if rng.gen_bool(0.5) {
                *x = Rational::from_int(rng.gen_range(-2..=2));
            }
        }
        c
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `|f| = arity − 1`.
    pub fn degree(&self) -> usize {
        self.arity - 1
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn num_shapes(&self) -> usize {
        shape_set(self.family, self.arity).len()
    }

    pub fn tuples(&self) -> usize {
        ipow(self.in_dim, self.arity)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Rational] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn offset(&self, shape: usize, tuple: usize) -> usize {
        (shape * self.tuples() + tuple) * self.out_dim
    }

    pub fn index(&self, shape: usize, inputs: &[usize], out: usize) -> usize {
        self.offset(shape, encode_tuple(inputs, self.in_dim)) + out
    }

    pub fn get(&self, shape: usize, inputs: &[usize], out: usize) -> &Rational {
        &self.coeffs[self.index(shape, inputs, out)]
    }

    pub fn set(&mut self, shape: usize, inputs: &[usize], out: usize, v: Rational) {
        let k = self.index(shape, inputs, out);
        self.coeffs[k] = v;
    }

    /// Output vector for a basis tuple.
    pub fn value(&self, shape: usize, tuple: usize) -> &[Rational] {
        let o = self.offset(shape, tuple);
        &self.coeffs[o..o + self.out_dim]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Same family, arity and dimensions.
    pub fn same_space(&self, other: &Cochain) -> bool {
        self.family == other.family
            && self.arity == other.arity
            && self.in_dim == other.in_dim
            && self.out_dim == other.out_dim
    }

    pub(crate) fn check_same_space(&self, other: &Cochain) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::Context(format!(
                "{} vs {}",
                self.describe(),
                other.describe()
            )))
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "{} arity {} ({} -> {})",
            self.family, self.arity, self.in_dim, self.out_dim
        )
    }

    /// Decodes a flat coefficient position.
    pub fn locate(&self, k: usize) -> (usize, Vec<usize>, usize) {
        let out = k % self.out_dim;
        let rest = k / self.out_dim;
        let tuple = rest % self.tuples();
        let shape = rest / self.tuples();
        (shape, decode_tuple(tuple, self.in_dim, self.arity), out)
    }

    pub fn witness_at(&self, k: usize) -> Witness {
        let (shape, inputs, output) = self.locate(k);
        Witness {
            shape: shape_set(self.family, self.arity).labels[shape].clone(),
            inputs,
            output,
            value: self.coeffs[k].clone(),
        }
    }

    /// First nonzero coordinate, if any.
    pub fn first_nonzero(&self) -> Option<Witness> {
        self.coeffs
            .iter()
            .position(|x| !x.is_zero())
            .map(|k| self.witness_at(k))
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        let mut out = self.clone();
        for x in &mut out.coeffs {
            *x = &*x * c;
        }
        out
    }

    /// Adds `c · other` in place.
    pub fn add_scaled(&mut self, c: &Rational, other: &Cochain) -> Result<()> {
        self.check_same_space(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !y.is_zero() {
                x.add_mul(c, y);
            }
        }
        Ok(())
    }

    /// `(r; a) ↦ m · f(r; a)` for a matrix with `m.cols() == out_dim`.
    pub fn map_output(&self, m: &QMatrix) -> Result<Cochain> {
        if m.cols() != self.out_dim {
            return Err(dim_err(format!(
                "output map has {} columns, cochain has {} outputs",
                m.cols(),
                self.out_dim
            )));
        }
        let mut out = Cochain::zero(self.family, self.arity, self.in_dim, m.rows());
        let blocks = self.num_shapes() * self.tuples();
        for b in 0..blocks {
            let src = &self.coeffs[b * self.out_dim..(b + 1) * self.out_dim];
            if src.iter().all(Rational::is_zero) {
                continue;
            }
            let dst = &mut out.coeffs[b * m.rows()..(b + 1) * m.rows()];
            for (r, slot) in dst.iter_mut().enumerate() {
                for (c, v) in m.row(r) {
                    if !src[*c].is_zero() {
                        slot.add_mul(v, &src[*c]);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `(r; a_1, …, a_n) ↦ f(r; m a_1, …, m a_n)`; `m.rows() == in_dim`.
    pub fn map_inputs(&self, m: &QMatrix) -> Result<Cochain> {
        self.pullback_inputs(m)
    }

    /// Precomposes one input slot (0-based) with `m`.
    pub fn map_input_slot(&self, slot: usize, m: &QMatrix) -> Result<Cochain> {
        if m.rows() != self.in_dim || slot >= self.arity {
            return Err(dim_err(format!(
                "input map {}x{} on slot {} of {}",
                m.rows(),
                m.cols(),
                slot,
                self.describe()
            )));
        }
        let new_in = m.cols();
        if new_in != self.in_dim && self.arity > 1 {
            return Err(dim_err("a single slot cannot change the input dimension"));
        }
        let d = self.in_dim;
        let mt = m.transpose(); // row j = column j of m
        let mut out = Cochain::zero(self.family, self.arity, new_in, self.out_dim);
        let after = ipow(d, self.arity - 1 - slot);
        let before = ipow(d, slot);
        let od = self.out_dim;
        for s in 0..self.num_shapes() {
            for pre in 0..before {
                for post in 0..after {
                    for j in 0..new_in {
                        let t_new = (pre * new_in + j) * after + post;
                        let dst = out.offset(s, t_new);
                        for (i, v) in mt.row(j) {
                            let t_old = (pre * d + i) * after + post;
                            let src = self.offset(s, t_old);
                            for o in 0..od {
                                let x = &self.coeffs[src + o];
                                if !x.is_zero() {
                                    out.coeffs[dst + o].add_mul(v, x);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `(r; a) ↦ f(r; m a_1, …, m a_n)`, allowing a new input dimension.
    pub fn pullback_inputs(&self, m: &QMatrix) -> Result<Cochain> {
        self.pullback_slots(&vec![m; self.arity])
    }

    /// `(r; a) ↦ f(r; m_1 a_1, …, m_n a_n)`; all `m_k` share their column count.
    pub fn pullback_slots(&self, ms: &[&QMatrix]) -> Result<Cochain> {
        let n = self.arity;
        if ms.len() != n {
            return Err(dim_err(format!("{} slot maps for arity {n}", ms.len())));
        }
        let d_old = self.in_dim;
        let d_new = ms[0].cols();
        if ms.iter().any(|m| m.rows() != d_old || m.cols() != d_new) {
            return Err(dim_err("slot maps must all be in_dim × new_dim"));
        }
        let mut cur: Vec<Rational> = self.coeffs.clone();
        let shapes = self.num_shapes();
        let od = self.out_dim;
        for (slot, m) in ms.iter().enumerate() {
            // slots before `slot` already use d_new
            let mt = m.transpose();
            let before = ipow(d_new, slot);
            let after = ipow(d_old, n - 1 - slot);
            let old_t = before * d_old * after;
            let new_t = before * d_new * after;
            let mut next = vec![Rational::zero(); shapes * new_t * od];
            for s in 0..shapes {
                for pre in 0..before {
                    for post in 0..after {
                        for j in 0..d_new {
                            let dst = ((s * new_t) + (pre * d_new + j) * after + post) * od;
                            for (i, v) in mt.row(j) {
                                let src = ((s * old_t) + (pre * d_old + i) * after + post) * od;
                                for o in 0..od {
                                    if !cur[src + o].is_zero() {
                                        let x = cur[src + o].clone();
                                        next[dst + o].add_mul(v, &x);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            cur = next;
        }
        Cochain::from_coeffs(self.family, n, d_new, od, cur)
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Cochain[{}] {{", self.describe())?;
        for k in 0..self.coeffs.len() {
            if !self.coeffs[k].is_zero() {
                writeln!(f, "  {}", self.witness_at(k))?;
            }
        }
        write!(f, "}}")
    }
}

impl Add<&Cochain> for &Cochain {
    type Output = Cochain;
    fn add(self, rhs: &Cochain) -> Cochain {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Cochain> for &Cochain {
    type Output = Cochain;
    fn sub(self, rhs: &Cochain) -> Cochain {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Cochain> for Cochain {
    fn add_assign(&mut self, rhs: &Cochain) {
        assert!(self.same_space(rhs), "{} + {}", self.describe(), rhs.describe());
        for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !y.is_zero() {
                *x += y;
            }
        }
    }
}

impl SubAssign<&Cochain> for Cochain {
    fn sub_assign(&mut self, rhs: &Cochain) {
        assert!(self.same_space(rhs), "{} - {}", self.describe(), rhs.describe());
        for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !y.is_zero() {
                *x -= y;
            }
        }
    }
}

impl Neg for &Cochain {
    type Output = Cochain;
    fn neg(self) -> Cochain {
        self.scale(&Rational::from_int(-1))
    }
}

impl Mul<&Cochain> for &Rational {
    type Output = Cochain;
    fn mul(self, rhs: &Cochain) -> Cochain {
        rhs.scale(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tuple_codec() {
        for k in 0..27 {
            assert_eq!(encode_tuple(&decode_tuple(k, 3, 3), 3), k);
        }
        assert_eq!(decode_tuple(5, 2, 3), vec![1, 0, 1]);
    }

    #[test]
    fn matrix_roundtrip() {
        let m = QMatrix::from_i64(&[&[1, 2], &[0, -1], &[3, 0]]);
        let c = Cochain::from_matrix(Family::Dendriform, &m);
        assert_eq!(c.in_dim(), 2);
        assert_eq!(c.out_dim(), 3);
        assert_eq!(c.to_matrix().unwrap(), m);
    }

    #[test]
    fn pullback_matches_slotwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Cochain::random(&mut rng, Family::Quadri, 2, 2, 2);
        let m = QMatrix::from_i64(&[&[1, 2], &[-1, 0]]);
        let slotwise = f
            .map_input_slot(0, &m)
            .and_then(|g| g.map_input_slot(1, &m))
            .unwrap();
        assert_eq!(f.pullback_inputs(&m).unwrap(), slotwise);
        let id = QMatrix::identity(2);
        assert_eq!(f.map_output(&id).unwrap(), f);
    }

    #[test]
    fn pullback_changes_dimension() {
        // f(a, b) = a1 b1 on a 1-dim space, pulled back along e1 ↦ e1, e2 ↦ 2 e1
        let mut f = Cochain::zero(Family::Associative, 2, 1, 1);
        f.set(0, &[0, 0], 0, Rational::one());
        let m = QMatrix::from_i64(&[&[1, 2]]);
        let g = f.pullback_inputs(&m).unwrap();
        assert_eq!(g.in_dim(), 2);
        assert_eq!(g.get(0, &[1, 1], 0), &Rational::from_int(4));
        assert_eq!(g.get(0, &[0, 1], 0), &Rational::from_int(2));
    }

    #[test]
    fn witness_points_at_first_nonzero() {
        let mut f = Cochain::zero(Family::Dendriform, 2, 2, 1);
        assert!(f.first_nonzero().is_none());
        f.set(1, &[1, 0], 0, Rational::from_int(7));
        let w = f.first_nonzero().unwrap();
        assert_eq!(w.shape, "2");
        assert_eq!(w.inputs, vec![1, 0]);
        assert_eq!(w.value, Rational::from_int(7));
    }
}
