//! Structure of exact CA_X(v(v+1);2,k,v): orthogonal subarrays, constant
//! rows, column deletions, the Latin square hiding in the v = 6 array, and
//! the nonexistence argument built on the (k,v) = (5,6) catalogue.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::array::{Array, Symbol};
use crate::canon::{automorphisms, canonical_form, CanonicalForm};
use crate::derive::constant_row_average;
use crate::enumerate::{has_all_constant_rows, Catalogue};
use crate::error::{Error, Result};
use crate::sequence::MultiplicityVector;
use crate::verify::{is_exact_cax2, verify_oa};

fn require_exact(c: &Array) -> Result<()> {
    if is_exact_cax2(c) {
        Ok(())
    } else {
        Err(Error::NotExact(format!(
            "{}x{} array over v={}",
            c.n_rows(),
            c.n_cols(),
            c.v()
        )))
    }
}

/// An exact array contains an OA(2,k,v) exactly when it has a constant row
/// for every symbol.
pub fn contains_oa(c: &Array) -> Result<bool> {
    require_exact(c)?;
    Ok(has_all_constant_rows(c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationRecord {
    pub canonical: CanonicalForm,
    pub constant_row_count: usize,
    /// Distinct symbols that have a constant row, ascending.
    pub constant_row_symbols: Vec<Symbol>,
    pub contains_oa: bool,
    pub row_multiplicities: Vec<MultiplicityVector>,
    pub automorphism_order: u64,
}

pub fn classify(c: &Array) -> Result<ClassificationRecord> {
    require_exact(c)?;
    let constant = c.constant_rows();
    let mut symbols = constant.clone();
    symbols.sort_unstable();
    symbols.dedup();
    Ok(ClassificationRecord {
        canonical: canonical_form(c),
        constant_row_count: constant.len(),
        contains_oa: symbols.len() == c.v(),
        constant_row_symbols: symbols,
        row_multiplicities: c
            .rows()
            .map(|r| MultiplicityVector::of_row(r, c.v()))
            .collect(),
        automorphism_order: automorphisms(c).order,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub with_oa: u64,
    pub without_oa: u64,
    /// Number of constant rows → number of classes.
    pub constant_rows: BTreeMap<usize, u64>,
}

impl Census {
    pub fn add(&mut self, c: &Array) {
        if has_all_constant_rows(c) {
            self.with_oa += 1;
        } else {
            self.without_oa += 1;
        }
        *self
            .constant_rows
            .entry(c.constant_rows().len())
            .or_insert(0) += 1;
    }

    fn merge(mut self, other: Census) -> Census {
        self.with_oa += other.with_oa;
        self.without_oa += other.without_oa;
        for (k, n) in other.constant_rows {
            *self.constant_rows.entry(k).or_insert(0) += n;
        }
        self
    }
}

pub fn census(cat: &Catalogue) -> Result<Census> {
    if let Some(bad) = cat.members.iter().position(|c| !is_exact_cax2(c)) {
        return Err(Error::NotExact(format!("catalogue member {bad}")));
    }
    Ok(cat
        .members
        .par_iter()
        .fold(Census::default, |mut acc, c| {
            acc.add(c);
            acc
        })
        .reduce(Census::default, Census::merge))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionReport {
    pub column: usize,
    pub contains_oa: bool,
    /// Deletions with equal `class` are isomorphic; classes are numbered in
    /// order of first appearance.
    pub class: usize,
    pub canonical: CanonicalForm,
}

pub fn column_deletion_analysis(c: &Array) -> Result<Vec<DeletionReport>> {
    require_exact(c)?;
    if c.n_cols() < 3 {
        return Err(Error::Parameter(format!(
            "deleting a column of a {}-column array leaves no pairs",
            c.n_cols()
        )));
    }
    let mut seen: Vec<CanonicalForm> = Vec::new();
    (0..c.n_cols())
        .map(|col| {
            let d = c.delete_column(col)?;
            let form = canonical_form(&d);
            let class = match seen.iter().position(|f| *f == form) {
                Some(i) => i,
                None => {
                    seen.push(form.clone());
                    seen.len() - 1
                }
            };
            Ok(DeletionReport {
                column: col,
                contains_oa: has_all_constant_rows(&d),
                class,
                canonical: form,
            })
        })
        .collect()
}

/// An n×n Latin square, `cells[row][column] = symbol`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatinSquare {
    cells: Vec<Vec<Symbol>>,
}

impl LatinSquare {
    pub fn new(cells: Vec<Vec<Symbol>>) -> Result<Self> {
        let n = cells.len();
        let ok = n > 0
            && cells.iter().all(|r| r.len() == n)
            && (0..n).all(|i| {
                let mut row = vec![false; n];
                let mut col = vec![false; n];
                (0..n).all(|j| {
                    let (a, b) = (cells[i][j] as usize, cells[j][i] as usize);
                    let fresh = a < n && b < n && !row[a] && !col[b];
                    if fresh {
                        row[a] = true;
                        col[b] = true;
                    }
                    fresh
                })
            });
        if !ok {
            return Err(Error::Parameter("not a Latin square".into()));
        }
        Ok(LatinSquare { cells })
    }

    pub fn order(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Vec<Symbol>] {
        &self.cells
    }

    /// Sets of n cells, one per row and column, with n distinct symbols.
    pub fn transversals(&self) -> u64 {
        fn rec(l: &LatinSquare, row: usize, cols: u32, syms: u32) -> u64 {
            let n = l.order();
            if row == n {
                return 1;
            }
            let mut total = 0;
            for c in 0..n {
                let s = l.cells[row][c] as u32;
                if cols >> c & 1 == 0 && syms >> s & 1 == 0 {
                    total += rec(l, row + 1, cols | 1 << c, syms | 1 << s);
                }
            }
            total
        }
        rec(self, 0, 0, 0)
    }

    fn from_triples(n: usize, triples: &[[Symbol; 3]]) -> LatinSquare {
        let mut cells = vec![vec![0; n]; n];
        for t in triples {
            cells[t[0] as usize][t[1] as usize] = t[2];
        }
        LatinSquare { cells }
    }

    fn triples(&self) -> Vec<[Symbol; 3]> {
        let n = self.order();
        (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .map(|(r, c)| [r as Symbol, c as Symbol, self.cells[r][c]])
            .collect()
    }

    /// Least reduced isotope: first row and first column in natural order.
    fn isotopy_form(&self) -> LatinSquare {
        let n = self.order();
        let mut best: Option<LatinSquare> = None;
        for first in 0..n {
            for order in crate::canon::index_permutations(n) {
                // `order[j]` is the original column placed at j; symbols are
                // renamed so row `first` reads 0..n.
                let mut label = vec![0 as Symbol; n];
                for (j, &c) in order.iter().enumerate() {
                    label[self.cells[first][c] as usize] = j as Symbol;
                }
                let mut cells = vec![Vec::new(); n];
                for r in 0..n {
                    let row: Vec<Symbol> = order
                        .iter()
                        .map(|&c| label[self.cells[r][c] as usize])
                        .collect();
                    let at = row[0] as usize;
                    cells[at] = row;
                }
                let cand = LatinSquare { cells };
                if best.as_ref().map_or(true, |b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        best.expect("non-empty square")
    }

    /// Least reduced form over all six conjugates: equal forms mean the
    /// squares belong to the same species (main class).
    pub fn species_form(&self) -> LatinSquare {
        let n = self.order();
        let triples = self.triples();
        crate::canon::index_permutations(3)
            .into_iter()
            .map(|p| {
                let conj: Vec<[Symbol; 3]> = triples
                    .iter()
                    .map(|t| [t[p[0]], t[p[1]], t[p[2]]])
                    .collect();
                LatinSquare::from_triples(n, &conj).isotopy_form()
            })
            .min()
            .expect("six conjugates")
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.cells {
            let row: Vec<String> = r.iter().map(|s| s.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct LatinExtraction {
    /// The three-column array left after dropping columns and one constant
    /// row per symbol.
    pub orthogonal_array: Array,
    pub square: LatinSquare,
    pub transversals: u64,
}

/// Drops two columns, removes one constant row per symbol, checks that the
/// remaining v² rows form an OA(2,3,v) and reads them as (row, column,
/// symbol) triples.
pub fn latin_square_extract(c: &Array, drop: (usize, usize)) -> Result<LatinExtraction> {
    require_exact(c)?;
    if c.n_cols() != 5 {
        return Err(Error::Parameter(format!(
            "need 5 columns to leave 3 after dropping two, have {}",
            c.n_cols()
        )));
    }
    if drop.0 == drop.1 || drop.0 >= 5 || drop.1 >= 5 {
        return Err(Error::Parameter(format!(
            "columns {} and {} are not two distinct columns of 5",
            drop.0, drop.1
        )));
    }
    let three = c.delete_columns(&[drop.0, drop.1])?;
    let v = c.v();
    let mut remove = Vec::new();
    for s in 0..v as Symbol {
        if let Some(r) =
            (0..three.n_rows()).find(|&r| three.is_constant_row(r) && three.get(r, 0) == s)
        {
            remove.push(r);
        }
    }
    let rest = three.remove_rows(&remove)?;
    let report = verify_oa(&rest, 2)?;
    if !report.pass {
        let w = &report.witnesses[0];
        return Err(Error::NotOrthogonal(format!(
            "{} covered {} times after dropping columns {},{} ({} violations)",
            w.subject, w.observed, drop.0, drop.1, report.total_violations
        )));
    }
    let triples: Vec<[Symbol; 3]> = rest.rows().map(|r| [r[0], r[1], r[2]]).collect();
    let square = LatinSquare::from_triples(v, &triples);
    let square = LatinSquare::new(square.cells).expect("OA(2,3,v) gives a Latin square");
    let transversals = square.transversals();
    Ok(LatinExtraction {
        orthogonal_array: rest,
        square,
        transversals,
    })
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub class_count: usize,
    /// Constant rows summed over all classes.
    pub constant_rows: usize,
    pub every_row_repeats_a_symbol: bool,
    /// Mean constant rows per array of the derived family of an SCA(7!;7,10).
    pub required_average: BigRational,
    /// Each check with its outcome, in the order evaluated.
    pub checks: Vec<(String, bool)>,
    pub conclusion: Option<String>,
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, ok) in &self.checks {
            writeln!(f, "check\t{}\t{name}", if *ok { "ok" } else { "failed" })?;
        }
        match &self.conclusion {
            Some(c) => writeln!(f, "conclusion\t{c}"),
            None => writeln!(f, "conclusion\twithheld"),
        }
    }
}

/// The nonexistence argument for SCA(7!;7,10): deleting 5 symbols from such
/// an array yields CA_X(42;2,5,6) averaging one constant row each, but no
/// CA_X(42;2,5,6) has a constant row.
pub fn obstruction_report(cat: &Catalogue) -> Result<ObstructionReport> {
    let required_average = constant_row_average(7, 10, 5)?;
    let mut checks = Vec::new();
    let shape = cat.k == 5 && cat.v == 6;
    checks.push(("catalogue is for k=5, v=6".to_string(), shape));
    checks.push(("catalogue is complete".to_string(), cat.complete));
    checks.push((
        "catalogue was not restricted to OA-free classes".to_string(),
        !cat.oa_free,
    ));
    let exact = cat.members.iter().all(is_exact_cax2);
    checks.push((
        "every member is an exact CA_X(42;2,5,6)".to_string(),
        exact && shape,
    ));
    let class_count = cat.members.len();
    checks.push((
        format!("exactly one class (found {class_count})"),
        class_count == 1,
    ));
    let constant_rows: usize = cat.members.iter().map(|c| c.constant_rows().len()).sum();
    checks.push((
        format!("no constant rows (found {constant_rows})"),
        constant_rows == 0,
    ));
    let every_row_repeats_a_symbol = cat.members.iter().all(|c| {
        c.rows().all(|r| {
            MultiplicityVector::of_row(r, c.v())
                .counts()
                .iter()
                .any(|&m| m >= 2)
        })
    });
    checks.push((
        "every row has a repeated symbol".to_string(),
        every_row_repeats_a_symbol,
    ));
    checks.push((
        format!("derived family of an SCA(7!;7,10) averages {required_average} constant rows"),
        required_average > BigRational::from_integer(BigInt::zero()),
    ));
    let decisive =
        shape && cat.complete && !cat.oa_free && exact && class_count > 0 && constant_rows == 0;
    let conclusion = (decisive && checks.iter().all(|(_, ok)| *ok))
        .then(|| "no SCA(7!;7,10) exists".to_string());
    Ok(ObstructionReport {
        class_count,
        constant_rows,
        every_row_repeats_a_symbol,
        required_average,
        checks,
        conclusion,
    })
}

/// `a!·canx`: a lower bound on SCAN(t,v) from a lower bound on
/// CAN_X(t−a, v−a, a+1).
pub fn scan_bound(t: usize, v: usize, a: usize, canx: u64) -> Result<u128> {
    if a == 0 || a >= t || t > v {
        return Err(Error::Parameter(format!(
            "need 0 < a < t <= v, got t={t}, v={v}, a={a}"
        )));
    }
    let f = (1..=a as u128).try_fold(1u128, |acc, i| acc.checked_mul(i));
    f.and_then(|f| f.checked_mul(canx as u128))
        .ok_or_else(|| Error::Parameter(format!("{a}!·{canx} overflows")))
}
