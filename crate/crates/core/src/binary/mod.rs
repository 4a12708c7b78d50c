//! Binary excess coverage arrays.
//!
//! An exact binary CA_X of strength t has `(t+1)!` rows. Arrays on t+1
//! columns are determined up to column permutation by the number `x_i` of
//! copies of each weight-i row, subject to `x_i + x_{i+1} = i!(t−i)!`.

mod k2t;
mod lattice;
mod lp;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::array::{Array, Symbol};
use crate::error::{Error, Result};

pub use k2t::{k2t_check, k2t_feasibility, k2t_rhs, Infeasibility, K2tOptions, K2tOutcome};

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(n - i) / BigUint::from(i + 1)
    })
}

/// Largest row count [`WeightProfile::materialize`] will build.
pub const MATERIALIZE_LIMIT: u64 = 5040;

/// Row multiplicity per Hamming weight for a binary array on `k = x.len() − 1`
/// columns, built for strength `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightProfile {
    t: usize,
    x: Vec<BigUint>,
}

impl WeightProfile {
    pub fn new(t: usize, x: Vec<BigUint>) -> Result<WeightProfile> {
        if t == 0 || x.len() < t + 1 {
            return Err(Error::Parameter(format!(
                "profile for t={t} needs at least t+1 columns, got {}",
                x.len().saturating_sub(1)
            )));
        }
        Ok(WeightProfile { t, x })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.x.len() - 1
    }

    pub fn x(&self) -> &[BigUint] {
        &self.x
    }

    /// `Σ_i C(k,i)·x_i`.
    pub fn n_rows(&self) -> BigUint {
        let k = self.k();
        self.x
            .iter()
            .enumerate()
            .map(|(i, xi)| binomial(k, i) * xi)
            .sum()
    }

    /// Profile of the array with 0 and 1 exchanged.
    pub fn complement(&self) -> WeightProfile {
        WeightProfile {
            t: self.t,
            x: self.x.iter().rev().cloned().collect(),
        }
    }

    pub fn is_self_complementary(&self) -> bool {
        self.x.iter().eq(self.x.iter().rev())
    }

    /// For `k = t+1`: whether `x_i + x_{i+1} = i!(t−i)!` for every `i`.
    pub fn satisfies_recurrence(&self) -> bool {
        let t = self.t;
        self.k() == t + 1
            && (0..=t).all(|i| &self.x[i] + &self.x[i + 1] == factorial(i) * factorial(t - i))
    }

    /// The array with `x_i` copies of every weight-i vector, rows in
    /// lexicographic order.
    pub fn materialize(&self) -> Result<Array> {
        let k = self.k();
        let n = self.n_rows();
        if k > 16 || n > BigUint::from(MATERIALIZE_LIMIT) {
            return Err(Error::Parameter(format!(
                "profile has {n} rows on {k} columns; materialization is limited to {MATERIALIZE_LIMIT} rows"
            )));
        }
        let n = n.to_usize().expect("bounded");
        let mut entries: Vec<Symbol> = Vec::with_capacity(n * k);
        for code in 0u32..1 << k {
            let bits: Vec<Symbol> = (0..k)
                .map(|j| ((code >> (k - 1 - j)) & 1) as Symbol)
                .collect();
            let w = code.count_ones() as usize;
            let copies = self.x[w].to_usize().expect("bounded");
            for _ in 0..copies {
                entries.extend_from_slice(&bits);
            }
        }
        Array::new(n, k, 2, entries)
    }
}

/// `t k x_0 … x_k`
impl fmt::Display for WeightProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.t, self.k())?;
        for xi in &self.x {
            write!(f, " {xi}")?;
        }
        Ok(())
    }
}

impl FromStr for WeightProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<WeightProfile> {
        let bad = |m: String| Error::Parse {
            line: 1,
            message: m,
        };
        let fields: Vec<&str> = s.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(bad("expected `t k x_0 … x_k`".into()));
        }
        let t: usize = fields[0]
            .parse()
            .map_err(|_| bad(format!("bad t `{}`", fields[0])))?;
        let k: usize = fields[1]
            .parse()
            .map_err(|_| bad(format!("bad k `{}`", fields[1])))?;
        if fields.len() != k + 3 {
            return Err(bad(format!(
                "expected {} multiplicities, got {}",
                k + 1,
                fields.len() - 2
            )));
        }
        let x = fields[2..]
            .iter()
            .map(|f| {
                f.parse::<BigUint>()
                    .map_err(|_| bad(format!("bad multiplicity `{f}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightProfile::new(t, x)
    }
}

/// `(t+1)!`, computed as `Σ_j C(t,j)·j!(t−j)!`.
pub fn binary_row_count(t: usize) -> BigUint {
    (0..=t)
        .map(|j| binomial(t, j) * factorial(j) * factorial(t - j))
        .sum()
}

/// Upper end of the range of `x_s`, `s = ⌊t/2⌋`: `⌊t/2⌋!⌈t/2⌉!`.
pub fn family_parameter_bound(t: usize) -> BigUint {
    factorial(t / 2) * factorial(t - t / 2)
}

/// The profile with `x_s = c`, or `None` if some entry would be negative.
pub fn family_member(t: usize, c: &BigUint) -> Option<WeightProfile> {
    let s = t / 2;
    let b: Vec<BigInt> = (0..=t)
        .map(|i| BigInt::from(factorial(i) * factorial(t - i)))
        .collect();
    let mut x = vec![BigInt::zero(); t + 2];
    x[s] = BigInt::from(c.clone());
    for i in s..=t {
        x[i + 1] = &b[i] - &x[i];
    }
    for i in (0..s).rev() {
        x[i] = &b[i] - &x[i + 1];
    }
    if x.iter().any(|v| v.is_negative()) {
        return None;
    }
    Some(WeightProfile {
        t,
        x: x.into_iter()
            .map(|v| v.to_biguint().expect("checked"))
            .collect(),
    })
}

/// Every non-negative solution of the recurrence on `t+1` columns, in
/// increasing order of `x_s`.
pub fn family_k_t_plus_1(t: usize) -> impl Iterator<Item = WeightProfile> {
    let end = if t == 0 {
        BigUint::zero()
    } else {
        family_parameter_bound(t) + 1u32
    };
    let mut c = BigUint::zero();
    std::iter::from_fn(move || {
        while c < end {
            let cur = c.clone();
            c += 1u32;
            if let Some(p) = family_member(t, &cur) {
                return Some(p);
            }
        }
        None
    })
}

/// Complement structure of the `k = t+1` family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyClasses {
    pub t: usize,
    pub profiles: u64,
    pub self_complementary: u64,
    pub complementary_pairs: u64,
    pub classes: u64,
}

impl fmt::Display for FamilyClasses {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "t\t{}", self.t)?;
        writeln!(f, "profiles\t{}", self.profiles)?;
        writeln!(f, "self_complementary\t{}", self.self_complementary)?;
        writeln!(f, "complementary_pairs\t{}", self.complementary_pairs)?;
        writeln!(f, "classes\t{}", self.classes)
    }
}

/// Two members of the family are isomorphic iff they are equal or
/// complementary, so classes are singletons and complement pairs.
pub fn family_isomorphism_classes(t: usize) -> Result<FamilyClasses> {
    if t == 0 {
        return Err(Error::Parameter("t must be at least 1".into()));
    }
    let mut profiles = 0u64;
    let mut fixed = 0u64;
    for p in family_k_t_plus_1(t) {
        profiles += 1;
        if p.is_self_complementary() {
            fixed += 1;
        } else {
            let c = p.complement();
            if !c.satisfies_recurrence() {
                return Err(Error::Parameter(format!(
                    "complement of {p} leaves the family"
                )));
            }
        }
    }
    let pairs = (profiles - fixed) / 2;
    Ok(FamilyClasses {
        t,
        profiles,
        self_complementary: fixed,
        complementary_pairs: pairs,
        classes: fixed + pairs,
    })
}
