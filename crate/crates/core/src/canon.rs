//! Isomorphism of excess coverage arrays.
//!
//! Two arrays are isomorphic when one is obtained from the other by a single
//! symbol permutation applied to every entry together with a column
//! permutation; rows form a multiset. The canonical form is the transformed
//! array whose sorted row list is lexicographically smallest.
//!
//! The search fixes a column order, then builds the symbol relabelling row by
//! row: the next row of the sorted image must be the smallest code any
//! remaining row can still reach, and reaching it forces the labels of the
//! row's new symbols (first appearance gets the next free label). Only rows
//! that tie on that minimum branch, and any prefix already worse than the best
//! found so far is abandoned.

use std::collections::BTreeMap;
use std::fmt;

use crate::array::{Array, Symbol};
use crate::format;

const UNSET: u8 = u8::MAX;

/// A symbol relabelling applied to every entry plus a column reordering.
/// Applying it to `C` gives `C'[r][j] = symbols[C[r][columns[j]]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transform {
    pub symbols: Vec<Symbol>,
    pub columns: Vec<usize>,
}

impl Transform {
    pub fn identity(v: usize, k: usize) -> Self {
        Transform {
            symbols: (0..v as Symbol).collect(),
            columns: (0..k).collect(),
        }
    }

    pub fn apply(&self, array: &Array) -> Array {
        let mut entries = Vec::with_capacity(array.n_rows() * array.n_cols());
        for r in array.rows() {
            entries.extend(self.columns.iter().map(|&c| self.symbols[r[c] as usize]));
        }
        Array::new(array.n_rows(), self.columns.len(), array.v(), entries)
            .expect("transform preserves validity")
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Transform) -> Transform {
        Transform {
            symbols: first
                .symbols
                .iter()
                .map(|&s| self.symbols[s as usize])
                .collect(),
            columns: self.columns.iter().map(|&j| first.columns[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Transform {
        let mut symbols = vec![0; self.symbols.len()];
        for (s, &t) in self.symbols.iter().enumerate() {
            symbols[t as usize] = s as Symbol;
        }
        let mut columns = vec![0; self.columns.len()];
        for (j, &c) in self.columns.iter().enumerate() {
            columns[c] = j;
        }
        Transform { symbols, columns }
    }

    /// Order of the pair as an element of `S_v × S_k`.
    pub fn order(&self) -> u64 {
        let sym: Vec<usize> = self.symbols.iter().map(|&s| s as usize).collect();
        lcm(permutation_order(&sym), permutation_order(&self.columns))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub(crate) fn permutation_order(p: &[usize]) -> u64 {
    let mut seen = vec![false; p.len()];
    let mut order = 1;
    for start in 0..p.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len > 0 {
            order = lcm(order, len);
        }
    }
    order
}

/// The lexicographically least image of an array under the isomorphism group,
/// with rows sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm(Array);

impl CanonicalForm {
    /// Wraps an array already known to be in canonical form.
    pub(crate) fn trusted(array: Array) -> Self {
        CanonicalForm(array)
    }

    pub fn array(&self) -> &Array {
        &self.0
    }

    pub fn into_array(self) -> Array {
        self.0
    }

    /// The array-record serialization of the canonical array.
    pub fn bytes(&self) -> Vec<u8> {
        format::write_array(&self.0).into_bytes()
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (
            self.0.n_rows(),
            self.0.n_cols(),
            self.0.v(),
            self.0.entries(),
        )
            .cmp(&(
                other.0.n_rows(),
                other.0.n_cols(),
                other.0.v(),
                other.0.entries(),
            ))
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({:?})", self.0)
    }
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn index_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

struct Search {
    v: usize,
    k: usize,
    n: usize,
    /// Row words under the current column order.
    words: Vec<Symbol>,
    present: Vec<bool>,
    n_present: usize,
    columns: Vec<usize>,
    best: Vec<u64>,
    collect: bool,
    winners: Vec<Transform>,
}

impl Search {
    fn new(array: &Array, collect: bool) -> Self {
        let mut present = vec![false; array.v()];
        for &e in array.entries() {
            present[e as usize] = true;
        }
        let n_present = present.iter().filter(|&&p| p).count();
        Search {
            v: array.v(),
            k: array.n_cols(),
            n: array.n_rows(),
            words: Vec::with_capacity(array.entries().len()),
            present,
            n_present,
            columns: Vec::new(),
            best: Vec::new(),
            collect,
            winners: Vec::new(),
        }
    }

    fn load_columns(&mut self, array: &Array, columns: &[usize]) {
        self.words.clear();
        for r in array.rows() {
            self.words.extend(columns.iter().map(|&c| r[c]));
        }
        self.columns.clear();
        self.columns.extend_from_slice(columns);
    }

    #[inline]
    fn word(&self, r: usize) -> &[Symbol] {
        &self.words[r * self.k..(r + 1) * self.k]
    }

    /// Least code `r` can reach given the partial labelling, and the labels
    /// that reaching it assigns, in order of first appearance.
    fn min_code(&self, r: usize, sigma: &[u8], next: u8, fresh: &mut Vec<Symbol>) -> u64 {
        fresh.clear();
        let mut code = 0u64;
        let v = self.v as u64;
        for &s in self.word(r) {
            let label = match sigma[s as usize] {
                UNSET => match fresh.iter().position(|&f| f == s) {
                    Some(p) => next + p as u8,
                    None => {
                        fresh.push(s);
                        next + fresh.len() as u8 - 1
                    }
                },
                l => l,
            };
            code = code * v + label as u64;
        }
        code
    }

    fn full_code(&self, r: usize, sigma: &[u8]) -> u64 {
        let v = self.v as u64;
        self.word(r)
            .iter()
            .fold(0u64, |acc, &s| acc * v + sigma[s as usize] as u64)
    }

    /// Compares `prefix ++ [next]` with the same-length prefix of the best.
    fn cmp_prefix(&self, prefix: &[u64], next: u64) -> std::cmp::Ordering {
        if self.best.is_empty() {
            return std::cmp::Ordering::Less;
        }
        let pos = prefix.len();
        prefix
            .iter()
            .chain(std::iter::once(&next))
            .cmp(self.best[..=pos].iter())
    }

    fn rec(&mut self, used: &mut [bool], sigma: &mut [u8], next: u8, prefix: &mut Vec<u64>) {
        if next as usize == self.n_present {
            self.leaf(used, sigma, next, prefix);
            return;
        }
        let mut fresh = Vec::with_capacity(self.k);
        let mut best_code = u64::MAX;
        for r in 0..self.n {
            if !used[r] {
                let c = self.min_code(r, sigma, next, &mut fresh);
                best_code = best_code.min(c);
            }
        }
        match self.cmp_prefix(prefix, best_code) {
            std::cmp::Ordering::Greater => return,
            std::cmp::Ordering::Equal if !self.collect && prefix.len() + 1 == self.n => return,
            _ => {}
        }
        let mut tried: Vec<Vec<Symbol>> = Vec::new();
        for r in 0..self.n {
            if used[r] {
                continue;
            }
            if self.min_code(r, sigma, next, &mut fresh) != best_code {
                continue;
            }
            if tried.contains(&fresh) {
                continue;
            }
            tried.push(fresh.clone());
            for (i, &s) in fresh.iter().enumerate() {
                sigma[s as usize] = next + i as u8;
            }
            used[r] = true;
            prefix.push(best_code);
            self.rec(used, sigma, next + fresh.len() as u8, prefix);
            prefix.pop();
            used[r] = false;
            for &s in &fresh {
                sigma[s as usize] = UNSET;
            }
        }
    }

    fn leaf(&mut self, used: &[bool], sigma: &mut [u8], next: u8, prefix: &[u64]) {
        let mut rest: Vec<u64> = (0..self.n)
            .filter(|&r| !used[r])
            .map(|r| self.full_code(r, sigma))
            .collect();
        rest.sort_unstable();
        let candidate = prefix.iter().chain(rest.iter());
        let ord = if self.best.is_empty() {
            std::cmp::Ordering::Less
        } else {
            candidate.clone().cmp(self.best.iter())
        };
        match ord {
            std::cmp::Ordering::Greater => return,
            std::cmp::Ordering::Less => {
                self.best.clear();
                self.best.extend(candidate);
                self.winners.clear();
            }
            std::cmp::Ordering::Equal => {
                if !self.collect {
                    return;
                }
            }
        }
        // Symbols absent from the array take the remaining labels; every
        // assignment is a winner when collecting.
        let absent: Vec<usize> = (0..self.v).filter(|&s| !self.present[s]).collect();
        let labels: Vec<u8> = (next..self.v as u8).collect();
        let orders = if self.collect {
            index_permutations(absent.len())
        } else {
            vec![(0..absent.len()).collect()]
        };
        for order in orders {
            let mut symbols = sigma.to_vec();
            for (i, &s) in absent.iter().enumerate() {
                symbols[s] = labels[order[i]];
            }
            self.winners.push(Transform {
                symbols,
                columns: self.columns.clone(),
            });
            if !self.collect {
                break;
            }
        }
    }

    fn run(&mut self, array: &Array) {
        for columns in index_permutations(self.k) {
            self.load_columns(array, &columns);
            let mut used = vec![false; self.n];
            let mut sigma = vec![UNSET; self.v];
            let mut prefix = Vec::with_capacity(self.n);
            self.rec(&mut used, &mut sigma, 0, &mut prefix);
        }
    }

    fn result(&self) -> Array {
        let v = self.v as u64;
        let mut entries = Vec::with_capacity(self.n * self.k);
        let mut digits = vec![0 as Symbol; self.k];
        for &code in &self.best {
            let mut c = code;
            for d in digits.iter_mut().rev() {
                *d = (c % v) as Symbol;
                c /= v;
            }
            entries.extend_from_slice(&digits);
        }
        Array::new(self.n, self.k, self.v, entries).expect("canonical array")
    }
}

pub fn canonical_form(array: &Array) -> CanonicalForm {
    canonical_with_transform(array).0
}

/// The canonical form together with one transform reaching it.
pub fn canonical_with_transform(array: &Array) -> (CanonicalForm, Transform) {
    let mut search = Search::new(array, false);
    search.run(array);
    let t = search.winners[0].clone();
    (CanonicalForm(search.result()), t)
}

/// Isomorphism test: shape and fingerprint first, canonical forms last.
/// Arrays of different shapes are simply not isomorphic.
pub fn are_isomorphic(a: &Array, b: &Array) -> bool {
    if (a.n_rows(), a.n_cols(), a.v()) != (b.n_rows(), b.n_cols(), b.v()) {
        return false;
    }
    if fingerprint(a) != fingerprint(b) {
        return false;
    }
    canonical_form(a) == canonical_form(b)
}

/// Invariants that isomorphic arrays share; used to reject quickly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub n_rows: usize,
    pub n_cols: usize,
    pub v: usize,
    /// Per row: symbol multiplicities, descending. Sorted over rows.
    pub row_profiles: Vec<Vec<u8>>,
    /// Per column: symbol counts, descending. Sorted over columns.
    pub column_spectra: Vec<Vec<u32>>,
    /// Per column pair: rows agreeing on both columns. Sorted.
    pub pair_coincidences: Vec<u32>,
}

pub fn fingerprint(array: &Array) -> Fingerprint {
    let v = array.v();
    let k = array.n_cols();
    let mut row_profiles: Vec<Vec<u8>> = array
        .rows()
        .map(|r| {
            let mut m = vec![0u8; v];
            for &s in r {
                m[s as usize] += 1;
            }
            m.retain(|&c| c > 0);
            m.sort_unstable_by(|a, b| b.cmp(a));
            m
        })
        .collect();
    row_profiles.sort_unstable();
    let mut column_spectra: Vec<Vec<u32>> = (0..k)
        .map(|c| {
            let mut m = vec![0u32; v];
            for r in array.rows() {
                m[r[c] as usize] += 1;
            }
            m.sort_unstable_by(|a, b| b.cmp(a));
            m
        })
        .collect();
    column_spectra.sort_unstable();
    let mut pair_coincidences = Vec::with_capacity(k * (k.saturating_sub(1)) / 2);
    for a in 0..k {
        for b in a + 1..k {
            pair_coincidences.push(array.rows().filter(|r| r[a] == r[b]).count() as u32);
        }
    }
    pair_coincidences.sort_unstable();
    Fingerprint {
        n_rows: array.n_rows(),
        n_cols: k,
        v,
        row_profiles,
        column_spectra,
        pair_coincidences,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismReport {
    pub order: u64,
    /// Element order → number of group elements of that order.
    pub element_order_histogram: BTreeMap<u64, u64>,
    /// Orbits of the group on column indices, each sorted, ordered by least
    /// member.
    pub column_orbits: Vec<Vec<usize>>,
    pub elements: Vec<Transform>,
}

impl fmt::Display for AutomorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order\t{}", self.order)?;
        for (o, c) in &self.element_order_histogram {
            writeln!(f, "element_order\t{o}\t{c}")?;
        }
        for orbit in &self.column_orbits {
            let cols: Vec<String> = orbit.iter().map(|c| c.to_string()).collect();
            writeln!(f, "column_orbit\t{}", cols.join(","))?;
        }
        Ok(())
    }
}

/// The full automorphism group: every (symbol, column) permutation pair that
/// fixes the row multiset.
pub fn automorphisms(array: &Array) -> AutomorphismReport {
    let mut search = Search::new(array, true);
    search.run(array);
    let base_inv = search.winners[0].inverse();
    let mut elements: Vec<Transform> = search.winners.iter().map(|g| base_inv.compose(g)).collect();
    elements.sort();
    elements.dedup();
    debug_assert!(elements
        .iter()
        .all(|g| g.apply(array).sorted_rows() == array.sorted_rows()));

    let mut histogram = BTreeMap::new();
    for g in &elements {
        *histogram.entry(g.order()).or_insert(0) += 1;
    }
    let k = array.n_cols();
    let mut orbit_of: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for g in &elements {
        for (j, &c) in g.columns.iter().enumerate() {
            let (a, b) = (find(&mut orbit_of, j), find(&mut orbit_of, c));
            if a != b {
                orbit_of[a.max(b)] = a.min(b);
            }
        }
    }
    let mut orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..k {
        let root = find(&mut orbit_of, c);
        orbits.entry(root).or_default().push(c);
    }
    AutomorphismReport {
        order: elements.len() as u64,
        element_order_histogram: histogram,
        column_orbits: orbits.into_values().collect(),
        elements,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Array {
        Array::from_rows(
            2,
            &[
                [0, 0, 0, 0],
                [0, 0, 0, 0],
                [0, 1, 1, 1],
                [1, 0, 1, 1],
                [1, 1, 0, 1],
                [1, 1, 1, 0],
            ],
        )
        .unwrap()
    }

    /// Brute force over every transform.
    fn brute_canonical(array: &Array) -> Array {
        let mut best: Option<Array> = None;
        for sym in index_permutations(array.v()) {
            for cols in index_permutations(array.n_cols()) {
                let t = Transform {
                    symbols: sym.iter().map(|&s| s as Symbol).collect(),
                    columns: cols,
                };
                let img = t.apply(array).sorted_rows();
                if best.as_ref().map_or(true, |b| img.entries() < b.entries()) {
                    best = Some(img);
                }
            }
        }
        best.unwrap()
    }

    fn brute_automorphism_count(array: &Array) -> usize {
        let target = array.sorted_rows();
        let mut n = 0;
        for sym in index_permutations(array.v()) {
            for cols in index_permutations(array.n_cols()) {
                let t = Transform {
                    symbols: sym.iter().map(|&s| s as Symbol).collect(),
                    columns: cols,
                };
                if t.apply(array).sorted_rows() == target {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn permutations_of_indices() {
        assert_eq!(index_permutations(3).len(), 6);
        assert_eq!(index_permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(index_permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn matches_brute_force_on_small_arrays() {
        let c = small();
        assert_eq!(canonical_form(&c).array(), &brute_canonical(&c));
        let odd = Array::from_rows(3, &[[0, 1, 2], [2, 2, 1], [1, 0, 0], [1, 1, 2]]).unwrap();
        assert_eq!(canonical_form(&odd).array(), &brute_canonical(&odd));
        let sparse = Array::from_rows(4, &[[3, 1], [1, 3]]).unwrap();
        assert_eq!(canonical_form(&sparse).array(), &brute_canonical(&sparse));
    }

    #[test]
    fn column_reversal_gives_equal_forms() {
        let c = small();
        let rev = c.select_columns(&[3, 2, 1, 0]).unwrap();
        assert_eq!(canonical_form(&c), canonical_form(&rev));
        assert!(are_isomorphic(&c, &rev));
    }

    #[test]
    fn complement_of_small_is_a_different_class() {
        let c = small();
        let swapped = Transform {
            symbols: vec![1, 0],
            columns: vec![0, 1, 2, 3],
        }
        .apply(&c);
        // Relabelling is part of the group, so the complement is isomorphic.
        assert_eq!(canonical_form(&c), canonical_form(&swapped));
        // Changing one entry is not.
        let mut rows: Vec<Vec<u8>> = c.rows().map(|r| r.to_vec()).collect();
        rows[2][0] = 1;
        let bent = Array::from_rows(2, &rows).unwrap();
        assert!(!are_isomorphic(&c, &bent));
    }

    #[test]
    fn transform_algebra() {
        let g = Transform {
            symbols: vec![2, 0, 1],
            columns: vec![1, 2, 0],
        };
        let h = Transform {
            symbols: vec![1, 0, 2],
            columns: vec![0, 2, 1],
        };
        let a = Array::from_rows(3, &[[0, 1, 2], [2, 2, 1], [1, 0, 0]]).unwrap();
        assert_eq!(h.compose(&g).apply(&a), h.apply(&g.apply(&a)));
        assert_eq!(g.inverse().apply(&g.apply(&a)), a);
        assert_eq!(g.order(), 3);
        assert_eq!(h.order(), 2);
    }

    #[test]
    fn automorphisms_of_a_constant_row() {
        let c = Array::from_rows(4, &[[0, 0, 0]]).unwrap();
        let rep = automorphisms(&c);
        assert_eq!(rep.order, 6 * 6);
        assert_eq!(rep.column_orbits, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn automorphism_counts_match_brute_force() {
        let c = small();
        let rep = automorphisms(&c);
        assert_eq!(rep.order as usize, brute_automorphism_count(&c));
        assert_eq!(rep.element_order_histogram.values().sum::<u64>(), rep.order);
        let a = Array::from_rows(3, &[[0, 1, 2], [2, 2, 1], [1, 0, 0], [0, 1, 2]]).unwrap();
        assert_eq!(
            automorphisms(&a).order as usize,
            brute_automorphism_count(&a)
        );
    }

    #[test]
    fn fingerprint_is_invariant() {
        let c = small();
        let g = Transform {
            symbols: vec![1, 0],
            columns: vec![2, 0, 3, 1],
        };
        assert_eq!(fingerprint(&c), fingerprint(&g.apply(&c)));
    }

    #[test]
    fn base_array_group() {
        // Any symbol permutation, optionally combined with the column swap.
        for v in 2..=4u64 {
            let g = automorphisms(&crate::enumerate::base_array(v as usize).unwrap());
            assert_eq!(g.order, 2 * (1..=v).product::<u64>());
        }
    }
}
