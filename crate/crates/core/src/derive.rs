//! Arrays derived from a set of permutations by deleting symbols.
//!
//! For an ordered choice `u` of `a` symbols, keep the permutations that cover
//! `u` and record, for every remaining symbol `ν`, how many symbols of `u`
//! precede `ν`. If the permutations form an SCA of strength t, the result is
//! an excess coverage array of strength `t − a` over `a + 1` symbols.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::array::{Array, Symbol};
use crate::error::{Error, Result};
use crate::sequence::{all_sequences, MultiplicityVector, ScaSet, Sequence};

fn check_a(x: &ScaSet, a: usize) -> Result<()> {
    if a == 0 || a >= x.t() {
        return Err(Error::Parameter(format!(
            "deleted-symbol count a={a} must satisfy 0 < a < t = {}",
            x.t()
        )));
    }
    Ok(())
}

/// Columns are the symbols of `[v] \ u` in increasing order; the alphabet is
/// `0..=a`.
pub fn derive_array(x: &ScaSet, u: &Sequence) -> Result<Array> {
    let a = u.len();
    check_a(x, a)?;
    if let Some(&s) = u.elements().iter().find(|&&s| s as usize >= x.v()) {
        return Err(Error::InvalidSequence(format!(
            "symbol {s} not below v={}",
            x.v()
        )));
    }
    let columns: Vec<Symbol> = (0..x.v() as Symbol)
        .filter(|s| !u.elements().contains(s))
        .collect();
    let mut entries = Vec::new();
    let mut n = 0;
    for p in x.perms().iter().filter(|p| p.covers(u)) {
        n += 1;
        for &nu in &columns {
            let at = p.position(nu);
            let before = u.elements().iter().filter(|&&s| p.position(s) < at).count();
            entries.push(before as Symbol);
        }
    }
    if n == 0 {
        return Err(Error::Parameter(format!("no permutation covers {u}")));
    }
    Array::new(n, columns.len(), a + 1, entries)
}

/// One derived array per ordered choice `u` of `a` symbols, in lexicographic
/// order of `u`.
pub fn derive_family(x: &ScaSet, a: usize) -> Result<Vec<(Sequence, Array)>> {
    check_a(x, a)?;
    all_sequences(x.v(), a)
        .into_par_iter()
        .map(|u| derive_array(x, &u).map(|c| (u, c)))
        .collect()
}

/// Tally of multiplicity vectors over every row of every array. Every vector
/// of length `a + 1` summing to the column count appears as a key, possibly
/// with count zero.
pub fn multiplicity_census(
    family: &[Array],
    a: usize,
) -> Result<BTreeMap<MultiplicityVector, u64>> {
    let Some(first) = family.first() else {
        return Ok(BTreeMap::new());
    };
    let cols = first.n_cols();
    let mut census: BTreeMap<MultiplicityVector, u64> = MultiplicityVector::all(a + 1, cols as u32)
        .into_iter()
        .map(|m| (m, 0))
        .collect();
    for c in family {
        if c.n_cols() != cols || c.v() != a + 1 {
            return Err(Error::Parameter(format!(
                "family member has k={}, v={}; expected k={cols}, v={}",
                c.n_cols(),
                c.v(),
                a + 1
            )));
        }
        for r in c.rows() {
            *census
                .get_mut(&MultiplicityVector::of_row(r, a + 1))
                .expect("composition") += 1;
        }
    }
    Ok(census)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `(a+1)·t!·(v−a)!/v!`, the mean number of constant rows per derived array
/// when the source is a PSCA(v,t,1).
pub fn constant_row_average(t: usize, v: usize, a: usize) -> Result<BigRational> {
    if a == 0 || a >= t || t > v {
        return Err(Error::Parameter(format!(
            "need 0 < a < t <= v, got t={t}, v={v}, a={a}"
        )));
    }
    Ok(BigRational::new(
        BigInt::from(a + 1) * factorial(t) * factorial(v - a),
        factorial(v),
    ))
}

/// Constant rows per array, averaged over a family.
pub fn observed_constant_row_average(family: &[Array]) -> Option<BigRational> {
    if family.is_empty() {
        return None;
    }
    let total: usize = family.iter().map(|c| c.constant_rows().len()).sum();
    Some(BigRational::new(
        BigInt::from(total),
        BigInt::from(family.len()),
    ))
}
