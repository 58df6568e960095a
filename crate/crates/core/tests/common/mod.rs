//! Oracles shared by the integration and acceptance tests. Nothing here calls
//! the operad composition code; values come from structure constants.
#![allow(dead_code)]

use loday_core::{AlgebraSpec, Element, Family, Rational};
use rand::Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Row-reduction rank on a dense matrix.
pub fn dense_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][c].recip().unwrap();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let factor = &m[r][c] * &inv;
                for k in c..cols {
                    let v = &m[rank][k] * &factor;
                    m[r][k] = &m[r][k] - &v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn tuples(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |i| {
                    let mut u = t.clone();
                    u.push(i);
                    u
                })
            })
            .collect();
    }
    out
}

fn mul_basis(c: &[Vec<Vec<Rational>>], i: usize, j: usize) -> &[Rational] {
    &c[i][j]
}

/// Textbook Hochschild coboundary `C^n(A, A) → C^{n+1}(A, A)` for an
/// associative algebra given by `c[i][j] = e_i e_j`; coordinates are
/// `(tuple, output)` in lexicographic order.
pub fn hochschild_matrix(c: &[Vec<Vec<Rational>>], n: usize) -> Vec<Vec<Rational>> {
    let d = c.len();
    let src = tuples(d, n);
    let dst = tuples(d, n + 1);
    let col = |t: &[usize], o: usize| -> usize { t.iter().fold(0, |acc, &x| acc * d + x) * d + o };
    let cols = src.len() * d;
    let mut m = vec![vec![Rational::zero(); cols]; dst.len() * d];
    for (ri, a) in dst.iter().enumerate() {
        // a_1 f(a_2..)
        for k in 0..d {
            let rest = &a[1..];
            for o in 0..d {
                let v = &mul_basis(c, a[0], k)[o];
                if !v.is_zero() {
                    let t = &mut m[ri * d + o][col(rest, k)];
                    *t = &*t + v;
                }
            }
        }
        // Σ (−1)^i f(.., a_i a_{i+1}, ..)
        for i in 0..n {
            let sgn = if i % 2 == 0 { q(-1) } else { q(1) };
            let prod = mul_basis(c, a[i], a[i + 1]);
            for (k, v) in prod.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let mut t: Vec<usize> = a[..i].to_vec();
                t.push(k);
                t.extend_from_slice(&a[i + 2..]);
                for o in 0..d {
                    let e = &mut m[ri * d + o][col(&t, o)];
                    *e = &*e + &(&sgn * v);
                }
            }
        }
        // (−1)^{n+1} f(..) a_{n+1}
        let sgn = if n % 2 == 0 { q(-1) } else { q(1) };
        let rest = &a[..n];
        for k in 0..d {
            for o in 0..d {
                let v = &mul_basis(c, k, a[n])[o];
                if !v.is_zero() {
                    let e = &mut m[ri * d + o][col(rest, k)];
                    *e = &*e + &(&sgn * v);
                }
            }
        }
    }
    m
}

/// Structure constants of an associative algebra.
pub fn constants(a: &AlgebraSpec) -> Vec<Vec<Vec<Rational>>> {
    let d = a.dim;
    (0..d)
        .map(|i| (0..d).map(|j| (0..d).map(|o| a.pi().get(0, &[i, j], o).clone()).collect()).collect())
        .collect()
}

/// `(dim Z^n, dim B^n, dim H^n)` of Hochschild cohomology by brute force.
pub fn hochschild_dims(a: &AlgebraSpec, n: usize) -> (usize, usize, usize) {
    let c = constants(a);
    let dn = hochschild_matrix(&c, n);
    let cols = dn[0].len();
    let z = cols - dense_rank(dn);
    let b = if n >= 2 { dense_rank(hochschild_matrix(&c, n - 1)) } else { 0 };
    (z, b, z - b)
}

/// `x ∘_label y` straight from the structure constants.
pub fn mul(a: &AlgebraSpec, label: &str, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let p = a.product(label).unwrap();
    let d = a.dim;
    let mut out = vec![Rational::zero(); d];
    for i in 0..d {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..d {
            if y[j].is_zero() {
                continue;
            }
            let xy = &x[i] * &y[j];
            for (o, slot) in out.iter_mut().enumerate() {
                let c = p.get(0, &[i, j], o);
                if !c.is_zero() {
                    *slot = &*slot + &(&xy * c);
                }
            }
        }
    }
    out
}

fn mul_sum(a: &AlgebraSpec, labels: &[&str], x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.dim];
    for l in labels {
        for (s, v) in out.iter_mut().zip(mul(a, l, x, y)) {
            *s = &*s + &v;
        }
    }
    out
}

/// One textual identity `(x ⋆ y) ⋄ z = x ⋄' (y ⋆' z)`, each operation a sum of
/// products, attached to the `U_3` shape it should correspond to.
pub struct Identity {
    pub shape: &'static str,
    pub text: &'static str,
    pub left_outer: Vec<&'static str>,
    pub left_inner: Vec<&'static str>,
    pub right_outer: Vec<&'static str>,
    pub right_inner: Vec<&'static str>,
}

impl Identity {
    /// `lhs − rhs` on a triple.
    pub fn defect(&self, a: &AlgebraSpec, x: &[Rational], y: &[Rational], z: &[Rational]) -> Vec<Rational> {
        let l = mul_sum(a, &self.left_outer, &mul_sum(a, &self.left_inner, x, y), z);
        let r = mul_sum(a, &self.right_outer, x, &mul_sum(a, &self.right_inner, y, z));
        l.iter().zip(&r).map(|(u, v)| u - v).collect()
    }
}

fn id(
    shape: &'static str,
    text: &'static str,
    lo: &[&'static str],
    li: &[&'static str],
    ro: &[&'static str],
    ri: &[&'static str],
) -> Identity {
    Identity {
        shape,
        text,
        left_outer: lo.to_vec(),
        left_inner: li.to_vec(),
        right_outer: ro.to_vec(),
        right_inner: ri.to_vec(),
    }
}

/// Defining identities per family; products are addressed by `U_2` label.
pub fn identities(family: Family) -> Vec<Identity> {
    match family {
        Family::Dendriform => {
            let (l, r) = ("1", "2");
            vec![
                id("1", "(a<b)<c = a<(b<c + b>c)", &[l], &[l], &[l], &[l, r]),
                id("2", "(a>b)<c = a>(b<c)", &[l], &[r], &[r], &[l]),
                id("3", "(a<b + a>b)>c = a>(b>c)", &[r], &[l, r], &[r], &[r]),
            ]
        }
        Family::Tridendriform => {
            let (l, r, m) = ("{1}", "{2}", "{1,2}");
            let all = [l, r, m];
            vec![
                id("{1}", "(a<b)<c = a<(b*c)", &[l], &[l], &[l], &all),
                id("{2}", "(a>b)<c = a>(b<c)", &[l], &[r], &[r], &[l]),
                id("{3}", "(a*b)>c = a>(b>c)", &[r], &all, &[r], &[r]),
                id("{2,3}", "(a>b).c = a>(b.c)", &[m], &[r], &[r], &[m]),
                id("{1,3}", "(a<b).c = a.(b>c)", &[m], &[l], &[m], &[r]),
                id("{1,2}", "(a.b)<c = a.(b<c)", &[l], &[m], &[m], &[l]),
                id("{1,2,3}", "(a.b).c = a.(b.c)", &[m], &[m], &[m], &[m]),
            ]
        }
        Family::Trialgebra => {
            let (dl, dr, p) = ("(L,(L,L))", "((L,L),L)", "(L,L,L)");
            vec![
                id("(((L,L),L),L)", "(a|-b)|-c = a|-(b|-c)", &[dr], &[dr], &[dr], &[dr]),
                id("((L,(L,L)),L)", "(a-|b)|-c = a|-(b|-c)", &[dr], &[dl], &[dr], &[dr]),
                id("((L,L),(L,L))", "(a|-b)-|c = a|-(b-|c)", &[dl], &[dr], &[dr], &[dl]),
                id("(L,((L,L),L))", "(a-|b)-|c = a-|(b|-c)", &[dl], &[dl], &[dl], &[dr]),
                id("(L,(L,(L,L)))", "(a-|b)-|c = a-|(b-|c)", &[dl], &[dl], &[dl], &[dl]),
                id("((L,L,L),L)", "(a^b)|-c = a|-(b|-c)", &[dr], &[p], &[dr], &[dr]),
                id("(L,(L,L,L))", "(a-|b)-|c = a-|(b^c)", &[dl], &[dl], &[dl], &[p]),
                id("((L,L),L,L)", "(a|-b)^c = a|-(b^c)", &[p], &[dr], &[dr], &[p]),
                id("(L,(L,L),L)", "(a-|b)^c = a^(b|-c)", &[p], &[dl], &[p], &[dr]),
                id("(L,L,(L,L))", "(a^b)-|c = a^(b-|c)", &[dl], &[p], &[p], &[dl]),
                id("(L,L,L,L)", "(a^b)^c = a^(b^c)", &[p], &[p], &[p], &[p]),
            ]
        }
        _ => Vec::new(),
    }
}

pub fn unit(d: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); d];
    v[k] = Rational::one();
    v
}

/// Random combination of kernel vectors with small integer weights.
pub fn random_combination<R: Rng>(rng: &mut R, basis: &[Vec<Rational>], len: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    for b in basis {
        let c = q(rng.gen_range(-2..=2));
        if c.is_zero() {
            continue;
        }
        for (x, y) in v.iter_mut().zip(b) {
            *x = &*x + &(&c * y);
        }
    }
    v
}

/// All line algebras with entries in `{−1, 0, 1}` that satisfy `π∘π = 0`,
/// checked with the textual identities where available, else the operad.
pub fn line_multiplications(family: Family) -> Vec<Vec<i64>> {
    let k = loday_core::shapes::shape_set(family, 2).len();
    let mut out = Vec::new();
    for code in 0..3usize.pow(k as u32) {
        let mut c = code;
        let vals: Vec<i64> = (0..k)
            .map(|_| {
                let v = (c % 3) as i64 - 1;
                c /= 3;
                v
            })
            .collect();
        let a = AlgebraSpec::scalar(family, &vals).unwrap();
        if a.operad().square(a.pi()).unwrap().is_zero() {
            out.push(vals);
        }
    }
    out
}

pub fn element_value(e: &Element, shape: usize, inputs: &[usize]) -> Vec<Rational> {
    (0..e.out_dim()).map(|o| e.get(shape, inputs, o).clone()).collect()
}
