//! The N×k grid over the alphabet `[v]` and the t-way interactions it covers.

use std::fmt;

use crate::error::{Error, Result};

/// Symbols are small unsigned integers; the alphabet is always `0..v`.
pub type Symbol = u8;

/// Largest alphabet the crate accepts. Row codes are packed into `u64`.
pub const MAX_ALPHABET: usize = 16;

/// An N×k array over `[v]`, stored row-major.
///
/// Rows are row *instances*: two identical rows at different indices are both
/// kept, and code that refers to rows does so by index. Equality is plain
/// structural equality over the ordered rows; use [`Array::sorted_rows`] or the
/// canonical form when rows should be treated as a multiset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Array {
    n_rows: usize,
    n_cols: usize,
    v: usize,
    entries: Vec<Symbol>,
}

impl Array {
    pub fn new(n_rows: usize, n_cols: usize, v: usize, entries: Vec<Symbol>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidArray(format!(
                "shape {n_rows}x{n_cols} has no cells"
            )));
        }
        if !(2..=MAX_ALPHABET).contains(&v) {
            return Err(Error::InvalidArray(format!(
                "alphabet size {v} outside 2..={MAX_ALPHABET}"
            )));
        }
        if entries.len() != n_rows * n_cols {
            return Err(Error::InvalidArray(format!(
                "expected {} entries, got {}",
                n_rows * n_cols,
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|&e| e as usize >= v) {
            return Err(Error::InvalidArray(format!(
                "entry {} at row {}, column {} is not below v={v}",
                entries[pos],
                pos / n_cols,
                pos % n_cols
            )));
        }
        Ok(Array {
            n_rows,
            n_cols,
            v,
            entries,
        })
    }

    pub fn from_rows<R: AsRef<[Symbol]>>(v: usize, rows: &[R]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * n_cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(Error::InvalidArray(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    r.len()
                )));
            }
            entries.extend_from_slice(r);
        }
        Array::new(rows.len(), n_cols, v, entries)
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.v
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Symbol {
        self.entries[row * self.n_cols + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[Symbol] {
        &self.entries[row * self.n_cols..(row + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[Symbol]> + '_ {
        self.entries.chunks_exact(self.n_cols)
    }

    pub fn column(&self, col: usize) -> Vec<Symbol> {
        self.rows().map(|r| r[col]).collect()
    }

    pub fn entries(&self) -> &[Symbol] {
        &self.entries
    }

    /// True if every entry of the row is the same symbol.
    pub fn is_constant_row(&self, row: usize) -> bool {
        let r = self.row(row);
        r.iter().all(|&e| e == r[0])
    }

    /// Symbols of the constant rows, one entry per constant row instance.
    pub fn constant_rows(&self) -> Vec<Symbol> {
        (0..self.n_rows)
            .filter(|&r| self.is_constant_row(r))
            .map(|r| self.get(r, 0))
            .collect()
    }

    /// Same rows, sorted lexicographically.
    pub fn sorted_rows(&self) -> Array {
        let mut rows: Vec<&[Symbol]> = self.rows().collect();
        rows.sort_unstable();
        let entries = rows.concat();
        Array {
            entries,
            ..self.clone()
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Result<Array> {
        if let Some(&c) = cols.iter().find(|&&c| c >= self.n_cols) {
            return Err(Error::Parameter(format!(
                "column {c} out of range for {} columns",
                self.n_cols
            )));
        }
        let mut entries = Vec::with_capacity(self.n_rows * cols.len());
        for r in self.rows() {
            entries.extend(cols.iter().map(|&c| r[c]));
        }
        Array::new(self.n_rows, cols.len(), self.v, entries)
    }

    pub fn delete_column(&self, col: usize) -> Result<Array> {
        let keep: Vec<usize> = (0..self.n_cols).filter(|&c| c != col).collect();
        if keep.len() == self.n_cols {
            return Err(Error::Parameter(format!("no column {col} to delete")));
        }
        self.select_columns(&keep)
    }

    pub fn delete_columns(&self, cols: &[usize]) -> Result<Array> {
        if let Some(&c) = cols.iter().find(|&&c| c >= self.n_cols) {
            return Err(Error::Parameter(format!("no column {c} to delete")));
        }
        let keep: Vec<usize> = (0..self.n_cols).filter(|c| !cols.contains(c)).collect();
        self.select_columns(&keep)
    }

    /// Drops the given row instances (indices need not be sorted).
    pub fn remove_rows(&self, rows: &[usize]) -> Result<Array> {
        let kept: Vec<&[Symbol]> = self
            .rows()
            .enumerate()
            .filter(|(i, _)| !rows.contains(i))
            .map(|(_, r)| r)
            .collect();
        Array::from_rows(self.v, &kept)
    }

    /// Appends a column, one symbol per row.
    pub fn with_column(&self, column: &[Symbol]) -> Result<Array> {
        if column.len() != self.n_rows {
            return Err(Error::Parameter(format!(
                "new column has {} entries for {} rows",
                column.len(),
                self.n_rows
            )));
        }
        let mut entries = Vec::with_capacity(self.n_rows * (self.n_cols + 1));
        for (r, &s) in self.rows().zip(column) {
            entries.extend_from_slice(r);
            entries.push(s);
        }
        Array::new(self.n_rows, self.n_cols + 1, self.v, entries)
    }

    /// Same rows over a larger alphabet.
    pub fn with_alphabet(&self, v: usize) -> Result<Array> {
        Array::new(self.n_rows, self.n_cols, v, self.entries.clone())
    }
}

impl fmt::Debug for Array {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Array({}x{}, v={}) [", self.n_rows, self.n_cols, self.v)?;
        for (i, r) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            for &e in r {
                write!(f, "{e:x}")?;
            }
        }
        f.write_str("]")
    }
}

/// A t-way interaction: `(column, symbol)` pairs on distinct columns, kept
/// sorted by column so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interaction {
    pairs: Vec<(usize, Symbol)>,
}

impl Interaction {
    pub fn new(mut pairs: Vec<(usize, Symbol)>) -> Result<Self> {
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInteraction(format!(
                "repeated column in {pairs:?}"
            )));
        }
        Ok(Interaction { pairs })
    }

    pub fn pairs(&self) -> &[(usize, Symbol)] {
        &self.pairs
    }

    pub fn strength(&self) -> usize {
        self.pairs.len()
    }

    /// Checks the interaction against an array's shape.
    pub fn check_for(&self, array: &Array) -> Result<()> {
        for &(c, s) in &self.pairs {
            if c >= array.n_cols() {
                return Err(Error::InvalidInteraction(format!(
                    "column {c} out of range for {} columns",
                    array.n_cols()
                )));
            }
            if s as usize >= array.v() {
                return Err(Error::InvalidInteraction(format!(
                    "symbol {s} not below v={}",
                    array.v()
                )));
            }
        }
        Ok(())
    }

    /// Required coverage: the product over symbols of `|τ_σ(T)|!`, where
    /// `τ_σ(T)` is the set of columns of `T` carrying `σ`.
    pub fn mu(&self) -> u64 {
        let mut counts = [0u32; 256];
        for &(_, s) in &self.pairs {
            counts[s as usize] += 1;
        }
        counts
            .iter()
            .filter(|&&c| c > 1)
            .map(|&c| factorial_u64(c as usize))
            .product()
    }
}

impl fmt::Display for Interaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (c, s)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({c},{s})")?;
        }
        f.write_str("}")
    }
}

/// `mu` of a symbol tuple over any t distinct columns.
pub fn mu_of_symbols(symbols: &[Symbol]) -> u64 {
    let mut counts = [0u32; 256];
    for &s in symbols {
        counts[s as usize] += 1;
    }
    counts
        .iter()
        .filter(|&&c| c > 1)
        .map(|&c| factorial_u64(c as usize))
        .product()
}

/// Number of row instances covering `t`.
pub fn coverage_count(array: &Array, t: &Interaction) -> usize {
    array
        .rows()
        .filter(|r| t.pairs.iter().all(|&(c, s)| r[c] == s))
        .count()
}

pub(crate) fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}
