//! Shape sets `U_n` for each algebra family and the structure functions
//! `R_0`, `R_i` that route shapes through partial compositions.

mod tree;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use tree::Tree;

/// The seven Loday-type families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Associative,
    Dialgebra,
    Trialgebra,
    Dendriform,
    Tridendriform,
    Quadri,
    Ennea,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Associative,
        Family::Dialgebra,
        Family::Trialgebra,
        Family::Dendriform,
        Family::Tridendriform,
        Family::Quadri,
        Family::Ennea,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Associative => "associative",
            Family::Dialgebra => "dialgebra",
            Family::Trialgebra => "trialgebra",
            Family::Dendriform => "dendriform",
            Family::Tridendriform => "tridendriform",
            Family::Quadri => "quadri",
            Family::Ennea => "ennea",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                position: 0,
                message: "unknown family".into(),
            })
    }
}

/// An element of some `U_n`. Labels and subset members are 1-based; a
/// subset is a bitmask with bit `k-1` standing for `k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Shape {
    Unit,
    Label(u32),
    Subset(u32),
    Pair(u32, u32),
    SubsetPair(u32, u32),
    Tree(Tree),
}

/// A formal sum of shapes with positive integer coefficients.
pub type FormalShapeSum = Vec<(Shape, u64)>;

fn shape_err(family: Family, shape: &Shape, reason: &str) -> Error {
    Error::Shape {
        family: family.name().into(),
        shape: format_shape(shape),
        reason: reason.into(),
    }
}

fn mask_of(k: usize) -> u32 {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

fn subset_string(mask: u32) -> String {
    let items: Vec<String> = (0..32)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| (b + 1).to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

pub fn format_shape(shape: &Shape) -> String {
    match shape {
        Shape::Unit => "*".into(),
        Shape::Label(k) => k.to_string(),
        Shape::Subset(m) => subset_string(*m),
        Shape::Pair(r, s) => format!("({r},{s})"),
        Shape::SubsetPair(x, y) => format!("({},{})", subset_string(*x), subset_string(*y)),
        Shape::Tree(t) => t.to_string(),
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_shape(self))
    }
}

struct Cursor<'a> {
    text: &'a str,
    b: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, b: text.as_bytes(), pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            input: self.text.into(),
            position: self.pos,
            message: msg.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.b.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.b.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a positive integer"));
        }
        let v: u32 = self.text[start..self.pos]
            .parse()
            .map_err(|_| self.err("integer too large"))?;
        if v == 0 || self.b[start] == b'0' {
            self.pos = start;
            return Err(self.err("expected a positive integer without leading zeros"));
        }
        Ok(v)
    }

    fn subset(&mut self) -> Result<u32> {
        self.expect(b'{')?;
        let mut mask = 0u32;
        let mut last = 0;
        loop {
            let at = self.pos;
            let v = self.number()?;
            if v > 32 {
                self.pos = at;
                return Err(self.err("subset element above 32"));
            }
            if v <= last {
                self.pos = at;
                return Err(self.err("subset elements must be strictly increasing"));
            }
            last = v;
            mask |= 1 << (v - 1);
            match self.b.get(self.pos) {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(mask);
                }
                _ => return Err(self.err("expected ',' or '}'")),
            }
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.b.len() {
            Err(self.err("trailing input"))
        } else {
            Ok(())
        }
    }
}

/// Parses a canonical shape string for `family`.
pub fn parse_shape(family: Family, text: &str) -> Result<Shape> {
    let mut c = Cursor::new(text);
    let shape = match family {
        Family::Associative => {
            c.expect(b'*')?;
            Shape::Unit
        }
        Family::Dendriform => Shape::Label(c.number()?),
        Family::Tridendriform => Shape::Subset(c.subset()?),
        Family::Quadri => {
            c.expect(b'(')?;
            let r = c.number()?;
            c.expect(b',')?;
            let s = c.number()?;
            c.expect(b')')?;
            Shape::Pair(r, s)
        }
        Family::Ennea => {
            c.expect(b'(')?;
            let x = c.subset()?;
            c.expect(b',')?;
            let y = c.subset()?;
            c.expect(b')')?;
            Shape::SubsetPair(x, y)
        }
        Family::Dialgebra | Family::Trialgebra => {
            let t = Tree::parse(text)?;
            if family == Family::Dialgebra && !t.is_binary() {
                return Err(Error::Parse {
                    input: text.into(),
                    position: 0,
                    message: "dialgebra shapes must be binary trees".into(),
                });
            }
            return Ok(Shape::Tree(t));
        }
    };
    c.finish()?;
    Ok(shape)
}

fn subsets(n: usize) -> impl Iterator<Item = u32> {
    1..=mask_of(n)
}

fn generate(family: Family, n: usize) -> Vec<Shape> {
    match family {
        Family::Associative => vec![Shape::Unit],
        Family::Dendriform => (1..=n as u32).map(Shape::Label).collect(),
        Family::Tridendriform => subsets(n).map(Shape::Subset).collect(),
        Family::Quadri => {
            let mut v = Vec::new();
            for r in 1..=n as u32 {
                for s in 1..=n as u32 {
                    v.push(Shape::Pair(r, s));
                }
            }
            v
        }
        Family::Ennea => {
            let mut v = Vec::new();
            for x in subsets(n) {
                for y in subsets(n) {
                    v.push(Shape::SubsetPair(x, y));
                }
            }
            v
        }
        Family::Dialgebra => Tree::binary(n + 1).into_iter().map(Shape::Tree).collect(),
        Family::Trialgebra => Tree::planar(n + 1).into_iter().map(Shape::Tree).collect(),
    }
}

/// All of `U_n` in canonical order (lexicographic on the shape strings).
pub fn enumerate(family: Family, n: usize) -> Vec<Shape> {
    shape_set(family, n).shapes.clone()
}

/// `U_n` with its canonical indexing.
#[derive(Debug)]
pub struct ShapeSet {
    pub family: Family,
    pub n: usize,
    pub shapes: Vec<Shape>,
    pub labels: Vec<String>,
    index: HashMap<Shape, usize>,
}

impl ShapeSet {
    fn build(family: Family, n: usize) -> Self {
        let mut pairs: Vec<(String, Shape)> = generate(family, n)
            .into_iter()
            .map(|s| (format_shape(&s), s))
            .collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (labels, shapes): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let index = shapes.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        ShapeSet { family, n, shapes, labels, index }
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn index_of(&self, shape: &Shape) -> Option<usize> {
        self.index.get(shape).copied()
    }

    pub fn index_of_label(&self, label: &str) -> Result<usize> {
        let shape = parse_shape(self.family, label)?;
        self.index_of(&shape).ok_or_else(|| Error::Shape {
            family: self.family.name().into(),
            shape: label.into(),
            reason: format!("not an element of U_{}", self.n),
        })
    }
}

type SetCache = Mutex<HashMap<(Family, usize), Arc<ShapeSet>>>;

/// Cached `U_n`.
pub fn shape_set(family: Family, n: usize) -> Arc<ShapeSet> {
    static CACHE: OnceLock<SetCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(&(family, n)) {
        return s.clone();
    }
    let built = Arc::new(ShapeSet::build(family, n.max(1)));
    cache
        .lock()
        .unwrap()
        .entry((family, n))
        .or_insert(built)
        .clone()
}

/// Size of `U_n` without enumerating it.
pub fn count(family: Family, n: usize) -> usize {
    match family {
        Family::Associative => 1,
        Family::Dendriform => n,
        Family::Tridendriform => (1usize << n) - 1,
        Family::Quadri => n * n,
        Family::Ennea => ((1usize << n) - 1).pow(2),
        Family::Dialgebra | Family::Trialgebra => shape_set(family, n).len(),
    }
}

/// Deletes leaf `i` of a tree shape.
pub fn face(shape: &Shape, i: usize) -> Result<Shape> {
    match shape {
        Shape::Tree(t) => Ok(Shape::Tree(t.delete_leaf(i)?)),
        other => Err(Error::Shape {
            family: "dialgebra|trialgebra".into(),
            shape: format_shape(other),
            reason: "face maps act on trees only".into(),
        }),
    }
}

/// Box index (1-based, in `1..=m`) of position `r` for a composition in slot `i`
/// with an arity-`n` insertion.
fn box_of(n: usize, i: usize, r: usize) -> usize {
    if r < i {
        r
    } else if r < i + n {
        i
    } else {
        r + 1 - n
    }
}

fn check_ranges(family: Family, m: usize, n: usize, i: usize) -> Result<()> {
    if m == 0 || n == 0 || i == 0 || i > m {
        return Err(Error::Index(format!(
            "{family} structure function with m={m}, n={n}, i={i}"
        )));
    }
    Ok(())
}

fn check_member(family: Family, k: usize, r: &Shape) -> Result<()> {
    let ok = match (family, r) {
        (Family::Associative, Shape::Unit) => true,
        (Family::Dendriform, Shape::Label(x)) => (1..=k as u32).contains(x),
        (Family::Tridendriform, Shape::Subset(x)) => *x != 0 && x & !mask_of(k) == 0,
        (Family::Quadri, Shape::Pair(a, b)) => {
            (1..=k as u32).contains(a) && (1..=k as u32).contains(b)
        }
        (Family::Ennea, Shape::SubsetPair(x, y)) => {
            *x != 0 && *y != 0 && x & !mask_of(k) == 0 && y & !mask_of(k) == 0
        }
        (Family::Dialgebra, Shape::Tree(t)) => t.leaves() == k + 1 && t.is_binary(),
        (Family::Trialgebra, Shape::Tree(t)) => t.leaves() == k + 1,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(shape_err(family, r, &format!("not an element of U_{k}")))
    }
}

fn dend_r0(n: usize, i: usize, r: u32) -> u32 {
    box_of(n, i, r as usize) as u32
}

fn dend_ri(n: usize, i: usize, r: u32) -> Vec<u32> {
    let r = r as usize;
    if r >= i && r < i + n {
        vec![(r + 1 - i) as u32]
    } else {
        (1..=n as u32).collect()
    }
}

fn tri_r0(n: usize, i: usize, x: u32) -> u32 {
    let mut out = 0u32;
    for b in 0..32 {
        if x & (1 << b) != 0 {
            out |= 1 << (box_of(n, i, b + 1) - 1);
        }
    }
    out
}

fn tri_ri(n: usize, i: usize, x: u32) -> Vec<u32> {
    let window = mask_of(n) << (i - 1);
    let hit = x & window;
    if hit == 0 {
        subsets(n).collect()
    } else {
        vec![hit >> (i - 1)]
    }
}

fn tree_of(shape: &Shape) -> &Tree {
    match shape {
        Shape::Tree(t) => t,
        _ => unreachable!("checked by check_member"),
    }
}

/// `R_0(m; 1, …, n, …, 1)` with `n` in slot `i`, applied to `r ∈ U_{m+n-1}`.
pub fn r0(family: Family, m: usize, n: usize, i: usize, r: &Shape) -> Result<Shape> {
    check_ranges(family, m, n, i)?;
    check_member(family, m + n - 1, r)?;
    Ok(match r {
        Shape::Unit => Shape::Unit,
        Shape::Label(x) => Shape::Label(dend_r0(n, i, *x)),
        Shape::Subset(x) => Shape::Subset(tri_r0(n, i, *x)),
        Shape::Pair(a, b) => Shape::Pair(dend_r0(n, i, *a), dend_r0(n, i, *b)),
        Shape::SubsetPair(x, y) => Shape::SubsetPair(tri_r0(n, i, *x), tri_r0(n, i, *y)),
        Shape::Tree(_) => {
            let mut t = tree_of(r).clone();
            // delete leaves i+n-2, …, i (highest first keeps labels stable)
            for leaf in (i..i + n - 1).rev() {
                t = t.delete_leaf(leaf)?;
            }
            Shape::Tree(t)
        }
    })
}

/// `R_i(m; 1, …, n, …, 1)` applied to `r ∈ U_{m+n-1}`.
pub fn ri(family: Family, m: usize, n: usize, i: usize, r: &Shape) -> Result<FormalShapeSum> {
    check_ranges(family, m, n, i)?;
    check_member(family, m + n - 1, r)?;
    Ok(match r {
        Shape::Unit => vec![(Shape::Unit, 1)],
        Shape::Label(x) => dend_ri(n, i, *x).into_iter().map(|k| (Shape::Label(k), 1)).collect(),
        Shape::Subset(x) => tri_ri(n, i, *x).into_iter().map(|k| (Shape::Subset(k), 1)).collect(),
        Shape::Pair(a, b) => {
            let (xs, ys) = (dend_ri(n, i, *a), dend_ri(n, i, *b));
            product(&xs, &ys, Shape::Pair)
        }
        Shape::SubsetPair(x, y) => {
            let (xs, ys) = (tri_ri(n, i, *x), tri_ri(n, i, *y));
            product(&xs, &ys, Shape::SubsetPair)
        }
        Shape::Tree(_) => {
            let mut t = tree_of(r).clone();
            let top = m + n - 1;
            for leaf in (i + n..=top).rev() {
                t = t.delete_leaf(leaf)?;
            }
            for leaf in (0..i.saturating_sub(1)).rev() {
                t = t.delete_leaf(leaf)?;
            }
            vec![(Shape::Tree(t), 1)]
        }
    })
}

fn product(xs: &[u32], ys: &[u32], make: fn(u32, u32) -> Shape) -> FormalShapeSum {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &x in xs {
        for &y in ys {
            out.push((make(x, y), 1));
        }
    }
    out
}

/// Precomputed structure functions for one `(m, n, i)`, on shape indices.
#[derive(Debug)]
pub struct CompositionTable {
    /// `r0[r]` is the index in `U_m` of `R_0 r`.
    pub r0: Vec<usize>,
    /// `ri[r]` indexes into `sums`.
    pub ri: Vec<usize>,
    /// Distinct values of `R_i`, as (index in `U_n`, coefficient).
    pub sums: Vec<Vec<(usize, u64)>>,
}

type TableCache = Mutex<HashMap<(Family, usize, usize, usize), Arc<CompositionTable>>>;

/// Cached structure-function table for `∘_i : O(m) × O(n) → O(m+n-1)`.
pub fn composition_table(family: Family, m: usize, n: usize, i: usize) -> Result<Arc<CompositionTable>> {
    check_ranges(family, m, n, i)?;
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (family, m, n, i);
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let big = shape_set(family, m + n - 1);
    let um = shape_set(family, m);
    let un = shape_set(family, n);
    let mut r0s = Vec::with_capacity(big.len());
    let mut ris = Vec::with_capacity(big.len());
    let mut sums: Vec<Vec<(usize, u64)>> = Vec::new();
    let mut seen: HashMap<Vec<(usize, u64)>, usize> = HashMap::new();
    for r in &big.shapes {
        let a = r0(family, m, n, i, r)?;
        r0s.push(um.index_of(&a).expect("R_0 lands in U_m"));
        let mut s: Vec<(usize, u64)> = ri(family, m, n, i, r)?
            .into_iter()
            .map(|(sh, c)| (un.index_of(&sh).expect("R_i lands in U_n"), c))
            .collect();
        s.sort_unstable();
        let id = *seen.entry(s.clone()).or_insert_with(|| {
            sums.push(s);
            sums.len() - 1
        });
        ris.push(id);
    }
    let table = Arc::new(CompositionTable { r0: r0s, ri: ris, sums });
    Ok(cache.lock().unwrap().entry(key).or_insert(table).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(f: Family, s: &str) -> Shape {
        parse_shape(f, s).unwrap()
    }

    #[test]
    fn counts_match_closed_forms() {
        for n in 1..=5 {
            assert_eq!(shape_set(Family::Dendriform, n).len(), n);
            assert_eq!(shape_set(Family::Tridendriform, n).len(), (1 << n) - 1);
            assert_eq!(shape_set(Family::Quadri, n).len(), n * n);
            assert_eq!(shape_set(Family::Associative, n).len(), 1);
            for f in Family::ALL {
                assert_eq!(count(f, n), shape_set(f, n).len());
            }
        }
        assert_eq!(shape_set(Family::Ennea, 3).len(), 49);
        let cat: Vec<usize> = (1..=6).map(|n| shape_set(Family::Dialgebra, n).len()).collect();
        assert_eq!(cat, vec![1, 2, 5, 14, 42, 132]);
        assert_eq!(shape_set(Family::Trialgebra, 2).len(), 3);
        assert_eq!(shape_set(Family::Trialgebra, 3).len(), 11);
    }

    #[test]
    fn enumeration_is_sorted_by_label() {
        for f in Family::ALL {
            let s = shape_set(f, 3);
            let mut sorted = s.labels.clone();
            sorted.sort();
            assert_eq!(s.labels, sorted);
        }
        let d = shape_set(Family::Dendriform, 3);
        assert_eq!(d.labels, vec!["1", "2", "3"]);
    }

    #[test]
    fn parse_format_roundtrip() {
        for f in Family::ALL {
            for n in 1..=3 {
                let s = shape_set(f, n);
                for (shape, label) in s.shapes.iter().zip(&s.labels) {
                    assert_eq!(&parse_shape(f, label).unwrap(), shape);
                }
            }
        }
        assert_eq!(p(Family::Tridendriform, "{1,3}"), Shape::Subset(0b101));
        assert_eq!(p(Family::Ennea, "({1},{1,2})"), Shape::SubsetPair(1, 3));
        assert!(parse_shape(Family::Tridendriform, "{3,1}").is_err());
        assert!(parse_shape(Family::Dendriform, "0").is_err());
        assert!(parse_shape(Family::Dialgebra, "(L,L,L)").is_err());
        assert!(parse_shape(Family::Quadri, "(1,2").is_err());
    }

    #[test]
    fn structure_function_examples() {
        let d = Family::Dendriform;
        assert_eq!(r0(d, 2, 2, 1, &Shape::Label(3)).unwrap(), Shape::Label(2));
        assert_eq!(
            ri(d, 2, 2, 1, &Shape::Label(3)).unwrap(),
            vec![(Shape::Label(1), 1), (Shape::Label(2), 1)]
        );
        assert_eq!(ri(d, 2, 2, 1, &Shape::Label(2)).unwrap(), vec![(Shape::Label(2), 1)]);
        assert_eq!(
            r0(Family::Quadri, 2, 2, 1, &Shape::Pair(3, 3)).unwrap(),
            Shape::Pair(2, 2)
        );
        let mut s: Vec<String> = ri(Family::Tridendriform, 2, 2, 1, &Shape::Subset(0b100))
            .unwrap()
            .into_iter()
            .map(|(x, _)| format_shape(&x))
            .collect();
        s.sort();
        assert_eq!(s, vec!["{1,2}", "{1}", "{2}"]);
        assert!(r0(d, 2, 2, 1, &Shape::Label(4)).is_err());
        assert!(r0(d, 2, 2, 3, &Shape::Label(1)).is_err());
    }

    #[test]
    fn tree_structure_functions_are_face_composites() {
        let f = Family::Trialgebra;
        let t = p(f, "((L,L),(L,L),L)");
        // m = 2, n = 3, i = 1: R_0 deletes leaves 1 and 2
        let expect = face(&face(&t, 2).unwrap(), 1).unwrap();
        assert_eq!(r0(f, 2, 3, 1, &t).unwrap(), expect);
        // R_1 deletes leaf 4
        assert_eq!(ri(f, 2, 3, 1, &t).unwrap(), vec![(face(&t, 4).unwrap(), 1)]);
        for r in enumerate(Family::Dialgebra, 4) {
            for (m, n, i) in [(2, 3, 1), (2, 3, 2), (3, 2, 2), (4, 1, 3)] {
                assert_eq!(ri(Family::Dialgebra, m, n, i, &r).unwrap().len(), 1);
            }
        }
    }

    #[test]
    fn products_are_componentwise() {
        for r in enumerate(Family::Ennea, 3) {
            let Shape::SubsetPair(x, y) = r.clone() else { unreachable!() };
            for (m, n, i) in [(2, 2, 1), (2, 2, 2), (3, 1, 2)] {
                let a = r0(Family::Tridendriform, m, n, i, &Shape::Subset(x)).unwrap();
                let b = r0(Family::Tridendriform, m, n, i, &Shape::Subset(y)).unwrap();
                let (Shape::Subset(a), Shape::Subset(b)) = (a, b) else { unreachable!() };
                assert_eq!(r0(Family::Ennea, m, n, i, &r).unwrap(), Shape::SubsetPair(a, b));
                let xs = ri(Family::Tridendriform, m, n, i, &Shape::Subset(x)).unwrap();
                let ys = ri(Family::Tridendriform, m, n, i, &Shape::Subset(y)).unwrap();
                assert_eq!(ri(Family::Ennea, m, n, i, &r).unwrap().len(), xs.len() * ys.len());
            }
        }
    }

    #[test]
    fn table_matches_direct_evaluation() {
        for f in Family::ALL {
            let t = composition_table(f, 2, 2, 2).unwrap();
            let big = shape_set(f, 3);
            let small = shape_set(f, 2);
            for (k, r) in big.shapes.iter().enumerate() {
                let a = r0(f, 2, 2, 2, r).unwrap();
                assert_eq!(small.shapes[t.r0[k]], a);
            }
        }
    }
}
