//! Planar rooted trees with labeled leaves.

use std::fmt;

use crate::error::{Error, Result};

/// A planar rooted tree. Internal vertices have at least two children;
/// binary trees have exactly two everywhere.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf,
    Node(Vec<Tree>),
}

impl Tree {
    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(ch) => ch.iter().map(Tree::leaves).sum(),
        }
    }

    pub fn is_binary(&self) -> bool {
        match self {
            Tree::Leaf => true,
            Tree::Node(ch) => ch.len() == 2 && ch.iter().all(Tree::is_binary),
        }
    }

    fn well_formed(&self) -> bool {
        match self {
            Tree::Leaf => true,
            Tree::Node(ch) => ch.len() >= 2 && ch.iter().all(Tree::well_formed),
        }
    }

    /// Deletes leaf `i` (leaves numbered from 0, left to right) and
    /// contracts any vertex left with a single child.
    pub fn delete_leaf(&self, i: usize) -> Result<Tree> {
        let n = self.leaves();
        if i >= n || n < 2 {
            return Err(Error::Index(format!(
                "leaf {i} of a tree with {n} leaves"
            )));
        }
        Ok(delete(self, i).expect("tree has another leaf"))
    }

    /// All planar binary trees with `leaves` leaves.
    pub fn binary(leaves: usize) -> Vec<Tree> {
        Self::gen(leaves, true)
    }

    /// All planar trees (vertex arity ≥ 2) with `leaves` leaves.
    pub fn planar(leaves: usize) -> Vec<Tree> {
        Self::gen(leaves, false)
    }

    fn gen(leaves: usize, binary: bool) -> Vec<Tree> {
        // memo[k] = trees with k leaves
        let mut memo: Vec<Vec<Tree>> = vec![Vec::new(), vec![Tree::Leaf]];
        for k in 2..=leaves {
            let mut out = Vec::new();
            for parts in compositions(k, binary) {
                let mut acc: Vec<Vec<Tree>> = vec![Vec::new()];
                for p in &parts {
                    let mut next = Vec::new();
                    for prefix in &acc {
                        for t in &memo[*p] {
                            let mut v = prefix.clone();
                            v.push(t.clone());
                            next.push(v);
                        }
                    }
                    acc = next;
                }
                out.extend(acc.into_iter().map(Tree::Node));
            }
            memo.push(out);
        }
        memo.swap_remove(leaves.max(1))
    }

    pub fn parse(text: &str) -> Result<Tree> {
        let bytes = text.as_bytes();
        let mut pos = 0;
        let t = parse_at(text, bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(parse_err(text, pos, "trailing input"));
        }
        if !t.well_formed() {
            return Err(parse_err(text, 0, "internal vertices need at least two children"));
        }
        Ok(t)
    }
}

/// Ordered splittings of `k` into ≥ 2 positive parts (exactly 2 if binary).
fn compositions(k: usize, binary: bool) -> Vec<Vec<usize>> {
    fn rec(rem: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, binary: bool) {
        if rem == 0 {
            if cur.len() >= 2 && (!binary || cur.len() == 2) {
                out.push(cur.clone());
            }
            return;
        }
        if binary && cur.len() == 2 {
            return;
        }
        for p in 1..=rem {
            if cur.is_empty() && p == rem {
                continue;
            }
            cur.push(p);
            rec(rem - p, cur, out, binary);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, &mut Vec::new(), &mut out, binary);
    out
}

fn delete(t: &Tree, i: usize) -> Option<Tree> {
    match t {
        Tree::Leaf => None,
        Tree::Node(children) => {
            let mut kept = Vec::with_capacity(children.len());
            let mut offset = 0;
            for c in children {
                let n = c.leaves();
                if i >= offset && i < offset + n {
                    if let Some(c2) = delete(c, i - offset) {
                        kept.push(c2);
                    }
                } else {
                    kept.push(c.clone());
                }
                offset += n;
            }
            if kept.len() == 1 {
                kept.pop()
            } else {
                Some(Tree::Node(kept))
            }
        }
    }
}

fn parse_err(text: &str, position: usize, message: &str) -> Error {
    Error::Parse {
        input: text.to_string(),
        position,
        message: message.to_string(),
    }
}

fn parse_at(text: &str, b: &[u8], pos: &mut usize) -> Result<Tree> {
    match b.get(*pos) {
        Some(b'L') => {
            *pos += 1;
            Ok(Tree::Leaf)
        }
        Some(b'(') => {
            *pos += 1;
            let mut ch = vec![parse_at(text, b, pos)?];
            loop {
                match b.get(*pos) {
                    Some(b',') => {
                        *pos += 1;
                        ch.push(parse_at(text, b, pos)?);
                    }
                    Some(b')') => {
                        *pos += 1;
                        return Ok(Tree::Node(ch));
                    }
                    _ => return Err(parse_err(text, *pos, "expected ',' or ')'")),
                }
            }
        }
        _ => Err(parse_err(text, *pos, "expected 'L' or '('")),
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => write!(f, "L"),
            Tree::Node(ch) => {
                write!(f, "(")?;
                for (k, c) in ch.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        Tree::parse(s).unwrap()
    }

    #[test]
    fn counts() {
        let catalan: Vec<usize> = (2..=7).map(|k| Tree::binary(k).len()).collect();
        assert_eq!(catalan, vec![1, 2, 5, 14, 42, 132]);
        let schroeder: Vec<usize> = (2..=6).map(|k| Tree::planar(k).len()).collect();
        assert_eq!(schroeder, vec![1, 3, 11, 45, 197]);
    }

    #[test]
    fn face_examples() {
        assert_eq!(t("((L,L),L)").delete_leaf(0).unwrap(), t("(L,L)"));
        assert_eq!(t("(L,L,L)").delete_leaf(1).unwrap(), t("(L,L)"));
        assert_eq!(t("(L,(L,L))").delete_leaf(2).unwrap(), t("(L,L)"));
        assert_eq!(t("(L,(L,L,L))").delete_leaf(0).unwrap(), t("(L,L,L)"));
        assert!(t("(L,L)").delete_leaf(2).is_err());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Tree::parse("(L)").is_err());
        assert!(Tree::parse("(L,L").is_err());
        assert!(Tree::parse("(L,L)x").is_err());
        match Tree::parse("(L;L)") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn simplicial_identity() {
        for tree in Tree::planar(5).iter().chain(Tree::binary(5).iter()) {
            let n = tree.leaves();
            for j in 0..n {
                for i in 0..j {
                    let lhs = tree.delete_leaf(j).unwrap().delete_leaf(i).unwrap();
                    let rhs = tree.delete_leaf(i).unwrap().delete_leaf(j - 1).unwrap();
                    assert_eq!(lhs, rhs, "{tree} i={i} j={j}");
                }
            }
        }
    }
}
