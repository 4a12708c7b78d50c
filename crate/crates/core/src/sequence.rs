//! Permutations of `[v]`, ordered sequences of distinct symbols, and sets of
//! permutations with a declared strength.

use std::fmt;

use crate::array::Symbol;
use crate::error::{Error, Result};

/// A permutation in one-line notation `π(0) π(1) … π(v−1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<Symbol>,
    position: Vec<u8>,
}

impl Permutation {
    pub fn new(image: Vec<Symbol>) -> Result<Self> {
        let v = image.len();
        if v == 0 || v > 255 {
            return Err(Error::InvalidPermutation(format!("length {v}")));
        }
        let mut position = vec![u8::MAX; v];
        for (i, &s) in image.iter().enumerate() {
            if s as usize >= v || position[s as usize] != u8::MAX {
                return Err(Error::InvalidPermutation(format!(
                    "{image:?} is not a bijection on [{v}]"
                )));
            }
            position[s as usize] = i as u8;
        }
        Ok(Permutation { image, position })
    }

    pub fn identity(v: usize) -> Self {
        Permutation::new((0..v as u8).collect()).expect("identity")
    }

    pub fn v(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[Symbol] {
        &self.image
    }

    /// Index at which `s` appears, i.e. `π⁻¹(s)`.
    #[inline]
    pub fn position(&self, s: Symbol) -> usize {
        self.position[s as usize] as usize
    }

    /// True if the symbols of `s` appear left to right in this permutation.
    pub fn covers(&self, s: &Sequence) -> bool {
        s.elements
            .windows(2)
            .all(|w| self.position(w[0]) < self.position(w[1]))
    }

    pub fn reversed(&self) -> Permutation {
        let mut image = self.image.clone();
        image.reverse();
        Permutation::new(image).expect("reverse of a permutation")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation(")?;
        for &s in &self.image {
            write!(f, "{s:x}")?;
        }
        write!(f, ")")
    }
}

/// An ordered sequence of distinct symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    elements: Vec<Symbol>,
}

impl Sequence {
    pub fn new(elements: Vec<Symbol>) -> Result<Self> {
        let mut seen = [false; 256];
        for &e in &elements {
            if seen[e as usize] {
                return Err(Error::InvalidSequence(format!(
                    "{elements:?} repeats symbol {e}"
                )));
            }
            seen[e as usize] = true;
        }
        Ok(Sequence { elements })
    }

    pub fn elements(&self) -> &[Symbol] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn reversed(&self) -> Sequence {
        let mut elements = self.elements.clone();
        elements.reverse();
        Sequence { elements }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// All of `S_{v,t}` in lexicographic order.
pub fn all_sequences(v: usize, t: usize) -> Vec<Sequence> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(t);
    let mut used = vec![false; v];
    fn rec(v: usize, t: usize, cur: &mut Vec<Symbol>, used: &mut [bool], out: &mut Vec<Sequence>) {
        if cur.len() == t {
            out.push(Sequence {
                elements: cur.clone(),
            });
            return;
        }
        for s in 0..v {
            if !used[s] {
                used[s] = true;
                cur.push(s as Symbol);
                rec(v, t, cur, used, out);
                cur.pop();
                used[s] = false;
            }
        }
    }
    if t <= v {
        rec(v, t, &mut cur, &mut used, &mut out);
    }
    out
}

/// All permutations of `[v]` in lexicographic order.
pub fn all_permutations(v: usize) -> Vec<Permutation> {
    all_sequences(v, v)
        .into_iter()
        .map(|s| Permutation::new(s.elements).expect("full-length sequence"))
        .collect()
}

/// A multiset of permutations of `[v]` with a declared strength.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaSet {
    v: usize,
    t: usize,
    perms: Vec<Permutation>,
}

impl ScaSet {
    pub fn new(v: usize, t: usize, perms: Vec<Permutation>) -> Result<Self> {
        if t == 0 || t > v {
            return Err(Error::Parameter(format!(
                "strength {t} must satisfy 1 <= t <= v = {v}"
            )));
        }
        if let Some(p) = perms.iter().find(|p| p.v() != v) {
            return Err(Error::InvalidPermutation(format!(
                "{p:?} is not a permutation of [{v}]"
            )));
        }
        Ok(ScaSet { v, t, perms })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }
}

/// Per-symbol occurrence counts `(m_0, …, m_a)` of a derived-array row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicityVector(Vec<u32>);

impl MultiplicityVector {
    /// Builds the vector and checks it sums to `total` (`v − a` for the
    /// derivation it came from).
    pub fn new(counts: Vec<u32>, total: u32) -> Result<Self> {
        let sum: u32 = counts.iter().sum();
        if sum != total {
            return Err(Error::Parameter(format!(
                "multiplicity vector {counts:?} sums to {sum}, expected {total}"
            )));
        }
        Ok(MultiplicityVector(counts))
    }

    pub fn of_row(row: &[Symbol], alphabet: usize) -> Self {
        let mut counts = vec![0u32; alphabet];
        for &s in row {
            counts[s as usize] += 1;
        }
        MultiplicityVector(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// Every non-negative vector of length `parts` summing to `total`, in
    /// lexicographic order.
    pub fn all(parts: usize, total: u32) -> Vec<MultiplicityVector> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; parts];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiplicityVector>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(MultiplicityVector(cur.clone()));
                return;
            }
            for c in 0..=left {
                cur[i] = c;
                rec(i + 1, left - c, cur, out);
            }
        }
        if parts > 0 {
            rec(0, total, &mut cur, &mut out);
        }
        out
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}
