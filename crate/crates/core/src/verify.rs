//! Decision procedures for covering arrays, excess coverage arrays, orthogonal
//! arrays and (perfect) sequence covering arrays.

use std::collections::HashMap;
use std::fmt;

use crate::array::{mu_of_symbols, Array, Interaction, Symbol};
use crate::error::{Error, Result};
use crate::sequence::{all_sequences, ScaSet, Sequence};

pub const DEFAULT_WITNESS_CAP: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Ca,
    Cax,
    CaxExact,
    Oa,
    Sca,
    Psca,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Ca => "CA",
            Kind::Cax => "CAX",
            Kind::CaxExact => "CAX_EXACT",
            Kind::Oa => "OA",
            Kind::Sca => "SCA",
            Kind::Psca => "PSCA",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subject {
    Interaction(Interaction),
    Sequence(Sequence),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Interaction(t) => t.fmt(f),
            Subject::Sequence(s) => s.fmt(f),
        }
    }
}

/// One violated requirement. `required` is the lower bound (or exact value
/// for exact kinds) the subject had to meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub subject: Subject,
    pub required: u64,
    pub observed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub kind: Kind,
    pub strength: usize,
    pub pass: bool,
    /// At most `cap` witnesses, in deterministic iteration order.
    pub witnesses: Vec<Witness>,
    pub total_violations: usize,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} t={} {} ({} violations)",
            self.kind,
            self.strength,
            if self.pass { "PASS" } else { "FAIL" },
            self.total_violations
        )?;
        for w in &self.witnesses {
            writeln!(
                f,
                "  {}: required {}, observed {}",
                w.subject, w.required, w.observed
            )?;
        }
        if self.witnesses.len() < self.total_violations {
            writeln!(
                f,
                "  ... {} more",
                self.total_violations - self.witnesses.len()
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Rule {
    AtLeastOne,
    AtLeastMu,
    ExactlyMu,
    ExactlyOne,
}

impl Rule {
    fn check(self, symbols: &[Symbol], observed: u64) -> Option<u64> {
        let (required, ok) = match self {
            Rule::AtLeastOne => (1, observed >= 1),
            Rule::ExactlyOne => (1, observed == 1),
            Rule::AtLeastMu => {
                let mu = mu_of_symbols(symbols);
                (mu, observed >= mu)
            }
            Rule::ExactlyMu => {
                let mu = mu_of_symbols(symbols);
                (mu, observed == mu)
            }
        };
        (!ok).then_some(required)
    }
}

fn check_strength(array: &Array, t: usize) -> Result<()> {
    if t == 0 || t > array.n_cols() {
        return Err(Error::Parameter(format!(
            "strength {t} must satisfy 1 <= t <= k = {}",
            array.n_cols()
        )));
    }
    let cells = (array.v() as u64).checked_pow(t as u32);
    if cells.map_or(true, |c| c > 1 << 26) {
        return Err(Error::Parameter(format!(
            "v^t = {}^{t} interactions per column set is too many",
            array.v()
        )));
    }
    Ok(())
}

/// Calls `f` with every t-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, t: usize, mut f: impl FnMut(&[usize])) {
    if t > n {
        return;
    }
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        f(&idx);
        let mut i = t;
        while i > 0 && idx[i - 1] == n - t + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn verify_interactions(
    array: &Array,
    t: usize,
    kind: Kind,
    rule: Rule,
    cap: usize,
) -> Result<VerifyReport> {
    check_strength(array, t)?;
    let v = array.v();
    let cells = v.pow(t as u32);
    let mut counts = vec![0u64; cells];
    let mut witnesses = Vec::new();
    let mut total = 0usize;
    let mut symbols = vec![0 as Symbol; t];
    for_each_combination(array.n_cols(), t, |cols| {
        counts.iter_mut().for_each(|c| *c = 0);
        for r in array.rows() {
            let idx = cols.iter().fold(0usize, |acc, &c| acc * v + r[c] as usize);
            counts[idx] += 1;
        }
        for (idx, &observed) in counts.iter().enumerate() {
            let mut rest = idx;
            for slot in symbols.iter_mut().rev() {
                *slot = (rest % v) as Symbol;
                rest /= v;
            }
            if let Some(required) = rule.check(&symbols, observed) {
                total += 1;
                if witnesses.len() < cap {
                    let pairs = cols.iter().copied().zip(symbols.iter().copied()).collect();
                    witnesses.push(Witness {
                        subject: Subject::Interaction(
                            Interaction::new(pairs).expect("distinct columns"),
                        ),
                        required,
                        observed,
                    });
                }
            }
        }
    });
    Ok(VerifyReport {
        kind,
        strength: t,
        pass: total == 0,
        witnesses,
        total_violations: total,
    })
}

/// Every t-way interaction `T` covered at least `μ(T)` times, or exactly
/// `μ(T)` times when `exact` is set.
pub fn verify_cax(array: &Array, t: usize, exact: bool) -> Result<VerifyReport> {
    verify_cax_capped(array, t, exact, DEFAULT_WITNESS_CAP)
}

pub fn verify_cax_capped(array: &Array, t: usize, exact: bool, cap: usize) -> Result<VerifyReport> {
    if exact {
        verify_interactions(array, t, Kind::CaxExact, Rule::ExactlyMu, cap)
    } else {
        verify_interactions(array, t, Kind::Cax, Rule::AtLeastMu, cap)
    }
}

pub fn verify_ca(array: &Array, t: usize) -> Result<VerifyReport> {
    verify_interactions(array, t, Kind::Ca, Rule::AtLeastOne, DEFAULT_WITNESS_CAP)
}

pub fn verify_oa(array: &Array, t: usize) -> Result<VerifyReport> {
    verify_interactions(array, t, Kind::Oa, Rule::ExactlyOne, DEFAULT_WITNESS_CAP)
}

/// Fast path for the question asked most often: is this an exact strength-2
/// excess coverage array?
pub fn is_exact_cax2(array: &Array) -> bool {
    let v = array.v();
    let k = array.n_cols();
    if k < 2 || array.n_rows() != v * (v + 1) {
        return false;
    }
    let mut counts = vec![0u32; v * v];
    for a in 0..k {
        for b in a + 1..k {
            counts.iter_mut().for_each(|c| *c = 0);
            for r in array.rows() {
                counts[r[a] as usize * v + r[b] as usize] += 1;
            }
            for x in 0..v {
                for y in 0..v {
                    if counts[x * v + y] != if x == y { 2 } else { 1 } {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Counts, for every sequence of `S_{v,t}`, how many permutations of `x` cover
/// it. Returned in lexicographic sequence order.
pub fn sequence_coverage(x: &ScaSet, t: usize) -> Result<Vec<(Sequence, u64)>> {
    let v = x.v();
    if t == 0 || t > v {
        return Err(Error::Parameter(format!(
            "strength {t} must satisfy 1 <= t <= v = {v}"
        )));
    }
    let seqs = all_sequences(v, t);
    let key = |s: &[Symbol]| s.iter().fold(0u64, |acc, &e| acc * v as u64 + e as u64);
    let index: HashMap<u64, usize> = seqs
        .iter()
        .enumerate()
        .map(|(i, s)| (key(s.elements()), i))
        .collect();
    let mut counts = vec![0u64; seqs.len()];
    let mut buf = vec![0 as Symbol; t];
    for p in x.perms() {
        for_each_combination(v, t, |positions| {
            for (slot, &pos) in buf.iter_mut().zip(positions) {
                *slot = p.image()[pos];
            }
            counts[index[&key(&buf)]] += 1;
        });
    }
    Ok(seqs.into_iter().zip(counts).collect())
}

fn verify_sequences(
    x: &ScaSet,
    t: usize,
    kind: Kind,
    ok: impl Fn(u64) -> bool,
    required: u64,
) -> Result<VerifyReport> {
    let mut witnesses = Vec::new();
    let mut total = 0;
    for (s, observed) in sequence_coverage(x, t)? {
        if !ok(observed) {
            total += 1;
            if witnesses.len() < DEFAULT_WITNESS_CAP {
                witnesses.push(Witness {
                    subject: Subject::Sequence(s),
                    required,
                    observed,
                });
            }
        }
    }
    Ok(VerifyReport {
        kind,
        strength: t,
        pass: total == 0,
        witnesses,
        total_violations: total,
    })
}

/// Every sequence of `t` distinct symbols covered at least once.
pub fn verify_sca(x: &ScaSet, t: usize) -> Result<VerifyReport> {
    verify_sequences(x, t, Kind::Sca, |c| c >= 1, 1)
}

/// Every sequence of `t` distinct symbols covered exactly `lambda` times.
pub fn verify_psca(x: &ScaSet, t: usize, lambda: u64) -> Result<VerifyReport> {
    verify_sequences(x, t, Kind::Psca, |c| c == lambda, lambda)
}
