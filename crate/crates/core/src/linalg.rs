//! Sparse exact linear algebra over ℚ.
//!
//! All three queries (rank, kernel, solve) run the same incremental
//! reduction: rows are folded one at a time into a reduced row echelon
//! basis, where every pivot column is zero in all other basis rows.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{dim_err, Error, Result};
use crate::rational::Rational;

/// Sparse vector: strictly increasing column indices, nonzero values.
pub type SparseRow = Vec<(usize, Rational)>;

/// A sparse `rows × cols` matrix over ℚ. Only nonzero entries are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, Rational::one()));
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(dim_err("ragged dense matrix"));
            }
            m.data[r] = row
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect();
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_int(v)).collect())
            .collect();
        Self::from_dense(&dense).expect("rectangular literal")
    }

    /// Builds a matrix from sparse rows; entries may be unsorted, repeated
    /// (they are summed) or zero.
    pub fn from_sparse_rows(cols: usize, rows: Vec<Vec<(usize, Rational)>>) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, mut row) in rows.into_iter().enumerate() {
            row.sort_by_key(|(c, _)| *c);
            let mut merged: SparseRow = Vec::with_capacity(row.len());
            for (c, v) in row {
                if c >= cols {
                    return Err(Error::Index(format!("column {c} outside {cols}")));
                }
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += &v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            m.data[r] = merged;
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given dense vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(dim_err(format!(
                    "column {c} has length {} but matrix has {rows} rows",
                    col.len()
                )));
            }
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.data[r].push((c, v.clone()));
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    /// Owned copies of the sparse rows, in order.
    pub fn rows_iter(&self) -> impl Iterator<Item = Vec<(usize, Rational)>> + '_ {
        self.data.iter().cloned()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.data[r].binary_search_by_key(&c, |(k, _)| *k) {
            Ok(p) => self.data[r][p].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) -> Result<()> {
        if r >= self.rows || c >= self.cols {
            return Err(Error::Index(format!(
                "({r}, {c}) outside {}×{}",
                self.rows, self.cols
            )));
        }
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |(k, _)| *k) {
            Ok(p) if v.is_zero() => {
                row.remove(p);
            }
            Ok(p) => row[p].1 = v,
            Err(_) if v.is_zero() => {}
            Err(p) => row.insert(p, (c, v)),
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                out[r][*c] = v.clone();
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                t.data[*c].push((r, v.clone()));
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(dim_err(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .map(|row| {
                let mut acc = Rational::zero();
                for (c, v) in row {
                    acc.add_mul(v, &x[*c]);
                }
                acc
            })
            .collect())
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(dim_err(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    acc.entry(*c).or_default().add_mul(a, b);
                }
            }
            out.data[r] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        Ok(out)
    }

    /// Row rank over ℚ.
    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for row in &self.data {
            ech.insert(row.clone());
        }
        ech.pivots.len()
    }

    /// Basis of `{x : Mx = 0}`; exactly `cols − rank` vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let mut ech = Echelon::new(self.cols);
        for row in &self.data {
            ech.insert(row.clone());
        }
        let pivot_rows: BTreeMap<usize, &SparseRow> =
            ech.pivots.iter().map(|(c, r)| (*c, r)).collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_rows.contains_key(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (p, row) in &pivot_rows {
                if let Ok(k) = row.binary_search_by_key(&free, |(c, _)| *c) {
                    v[*p] = -&row[k].1;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `Mx = b`, or `None` when `b` is outside the image.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(dim_err(format!(
                "right-hand side of length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        // Augmented column `cols` is never chosen as a pivot.
        let aug = self.cols;
        let mut ech = Echelon::new(aug);
        for (row, rhs) in self.data.iter().zip(b) {
            let mut r = row.clone();
            if !rhs.is_zero() {
                r.push((aug, rhs.clone()));
            }
            if !ech.insert(r) {
                return Ok(None);
            }
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (p, row) in &ech.pivots {
            if let Some((c, v)) = row.last() {
                if *c == aug {
                    x[*p] = v.clone();
                }
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}×{}", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced echelon basis built incrementally.
struct Echelon {
    /// Columns eligible as pivots are `0..pivot_limit`.
    pivot_limit: usize,
    /// pivot column → row normalized to 1 at the pivot, zero at other pivots.
    pivots: Vec<(usize, SparseRow)>,
    pivot_pos: BTreeMap<usize, usize>,
}

impl Echelon {
    fn new(pivot_limit: usize) -> Self {
        Echelon {
            pivot_limit,
            pivots: Vec::new(),
            pivot_pos: BTreeMap::new(),
        }
    }

    /// Folds a row in. Returns `false` iff the row reduced to a nonzero
    /// entry confined to non-pivotable columns (an inconsistent system).
    fn insert(&mut self, mut row: SparseRow) -> bool {
        let hits: Vec<(usize, Rational)> = row
            .iter()
            .filter(|(c, _)| self.pivot_pos.contains_key(c))
            .map(|(c, v)| (*c, v.clone()))
            .collect();
        for (c, coef) in hits {
            let p = &self.pivots[self.pivot_pos[&c]].1;
            row = axpy(&row, &-&coef, p);
        }
        let lead = row.iter().find(|(c, _)| *c < self.pivot_limit).cloned();
        let Some((lead_col, lead_val)) = lead else {
            return row.is_empty();
        };
        let inv = lead_val.recip().expect("stored entries are nonzero");
        for (_, v) in row.iter_mut() {
            *v = &*v * &inv;
        }
        for (_, other) in self.pivots.iter_mut() {
            if let Ok(k) = other.binary_search_by_key(&lead_col, |(c, _)| *c) {
                let coef = -&other[k].1;
                *other = axpy(other, &coef, &row);
            }
        }
        self.pivot_pos.insert(lead_col, self.pivots.len());
        self.pivots.push((lead_col, row));
        true
    }
}

/// `x + a·y` for sparse rows.
fn axpy(x: &[(usize, Rational)], a: &Rational, y: &[(usize, Rational)]) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, a * &y[j].1));
            j += 1;
        } else {
            let mut v = x[i].1.clone();
            v.add_mul(a, &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(QMatrix::identity(2).rank(), 2);
        assert_eq!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(QMatrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        assert!(QMatrix::identity(2).kernel_basis().is_empty());
        let k = QMatrix::from_i64(&[&[1, 2], &[2, 4]]).kernel_basis();
        assert_eq!(k.len(), 1);
        // proportional to (-2, 1)
        assert_eq!(&k[0][0] * &r(1), &k[0][1] * &r(-2));
        assert_eq!(QMatrix::zeros(2, 2).kernel_basis().len(), 2);
    }

    #[test]
    fn solve_examples() {
        let b = vec![r(3), r(-7)];
        assert_eq!(QMatrix::identity(2).solve(&b).unwrap(), Some(b.clone()));
        let m = QMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.solve(&[r(1), r(3)]).unwrap(), None);
        let x = m.solve(&[r(1), r(2)]).unwrap().unwrap();
        assert_eq!(&x[0] + &(&r(2) * &x[1]), r(1));
        assert!(m.solve(&[r(1)]).is_err());
    }

    #[test]
    fn set_and_get_keep_sparsity() {
        let mut m = QMatrix::zeros(2, 3);
        m.set(1, 2, r(5)).unwrap();
        m.set(1, 0, r(1)).unwrap();
        assert_eq!(m.nnz(), 2);
        m.set(1, 2, r(0)).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), r(1));
        assert!(m.set(2, 0, r(1)).is_err());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..7).prop_flat_map(|(rows, cols)| {
            prop::collection::vec(
                prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], cols),
                rows,
            )
        })
    }

    fn to_q(m: &[Vec<i64>]) -> QMatrix {
        let refs: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
        QMatrix::from_i64(&refs)
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let q = to_q(&m);
            let k = q.kernel_basis();
            prop_assert_eq!(q.rank() + k.len(), q.cols());
            for v in &k {
                prop_assert!(q.mul_vec(v).unwrap().iter().all(Rational::is_zero));
            }
            prop_assert_eq!(q.transpose().rank(), q.rank());
        }

        #[test]
        fn solve_is_sound(m in small_matrix(), seed in prop::collection::vec(-3i64..=3, 8)) {
            let q = to_q(&m);
            let b: Vec<Rational> = (0..q.rows()).map(|i| r(seed[i % seed.len()])).collect();
            match q.solve(&b).unwrap() {
                Some(x) => prop_assert_eq!(q.mul_vec(&x).unwrap(), b),
                None => {
                    let mut aug = q.to_dense();
                    for (row, v) in aug.iter_mut().zip(&b) {
                        row.push(v.clone());
                    }
                    prop_assert!(QMatrix::from_dense(&aug).unwrap().rank() > q.rank());
                }
            }
        }
    }
}
