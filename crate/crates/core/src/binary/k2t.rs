//! Weight-uniform binary arrays on 2t columns.
//!
//! A binary array on 2t columns in which every weight-i row appears `x_i`
//! times has exact strength-t coverage iff
//! `Σ_j C(t,j)·x_{i+j} = i!(t−i)!` for `i = 0..=t`.
//!
//! Equation `i` has coefficient 1 on `x_{i+t}`, so the integer solutions form
//! `x⁰ + L` with `L` a rank-t lattice parametrised by `x_0..x_{t−1}`. The
//! lattice basis is LLL-reduced, and branch and bound runs on the reduced
//! coordinates with an exact LP relaxation at every node.

use std::rc::Rc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::lattice::lll;
use super::lp::Dictionary;
use super::{binomial, factorial, WeightProfile};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Infeasibility {
    /// The LP relaxation at the root is already empty.
    Relaxation,
    /// Every branch closed with an empty relaxation.
    Exhausted { nodes: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum K2tOutcome {
    Feasible {
        profile: WeightProfile,
        nodes: u64,
    },
    Infeasible(Infeasibility),
    /// The node budget ran out first.
    Unknown {
        nodes: u64,
    },
}

#[derive(Clone, Debug, Default)]
pub struct K2tOptions {
    pub node_limit: Option<u64>,
    /// Progress lines on stderr every 1000 nodes.
    pub verbose: bool,
}

/// Right-hand sides `i!(t−i)!`.
pub fn k2t_rhs(t: usize) -> Vec<BigInt> {
    (0..=t)
        .map(|i| BigInt::from(factorial(i) * factorial(t - i)))
        .collect()
}

/// Checks `x` (length 2t+1) against the system and non-negativity.
pub fn k2t_check(t: usize, x: &[BigInt]) -> bool {
    x.len() == 2 * t + 1
        && x.iter().all(|v| !v.is_negative())
        && k2t_rhs(t).iter().enumerate().all(|(i, b)| {
            let lhs: BigInt = (0..=t)
                .map(|j| BigInt::from(binomial(t, j)) * &x[i + j])
                .sum();
            &lhs == b
        })
}

/// Values of `x` once `x_0..x_{t−1}` are fixed, with right-hand side `b`.
fn substitute(t: usize, free: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut x: Vec<BigInt> = free.to_vec();
    x.resize(2 * t + 1, BigInt::zero());
    for i in 0..=t {
        let s: BigInt = (0..t)
            .map(|j| BigInt::from(binomial(t, j)) * &x[i + j])
            .sum();
        x[i + t] = &b[i] - s;
    }
    x
}

fn round_nearest(q: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    (q.numer() * &two + q.denom()).div_floor(&(q.denom() * &two))
}

fn into_profile(t: usize, x: Vec<BigInt>) -> WeightProfile {
    let x = x
        .into_iter()
        .map(|v| v.to_biguint().expect("non-negative"))
        .collect::<Vec<BigUint>>();
    WeightProfile::new(t, x).expect("valid profile")
}

/// Searches for a non-negative integer solution. The search is depth-first
/// and single-threaded, so the outcome is deterministic.
pub fn k2t_feasibility(t: usize, opts: &K2tOptions) -> Result<K2tOutcome> {
    if t == 0 {
        return Err(Error::Parameter("t must be at least 1".into()));
    }
    let b = k2t_rhs(t);
    let zero_b = vec![BigInt::zero(); t + 1];
    let x0 = substitute(t, &[], &b);
    let kernel: Vec<Vec<BigInt>> = (0..t)
        .map(|m| {
            let mut e = vec![BigInt::zero(); t];
            e[m] = BigInt::one();
            substitute(t, &e, &zero_b)
        })
        .collect();
    let basis = lll(kernel, 99, 100).ok_or_else(|| Error::Parameter("degenerate kernel".into()))?;

    // x = x0 + Σ λ_j basis[j] ≥ 0  ⇔  −Σ λ_j basis[j][i] ≤ x0[i]
    let g: Vec<Vec<BigInt>> = (0..=2 * t)
        .map(|i| basis.iter().map(|v| -&v[i]).collect())
        .collect();
    let point = |lambda: &[BigInt]| -> Vec<BigInt> {
        (0..=2 * t)
            .map(|i| {
                &x0[i]
                    + lambda
                        .iter()
                        .zip(&basis)
                        .map(|(l, v)| l * &v[i])
                        .sum::<BigInt>()
            })
            .collect()
    };

    let mut root =
        Dictionary::new(&g, &x0).ok_or_else(|| Error::Parameter("rank-deficient system".into()))?;
    if !root.solve() {
        return Ok(K2tOutcome::Infeasible(Infeasibility::Relaxation));
    }
    // Coordinates are fixed last-first: the last reduced vectors are the
    // ones along which the polytope is thinnest.
    let mut stack: Vec<Frame> = Vec::new();
    let mut pending = Some((root, 0usize));
    let mut nodes = 0u64;
    loop {
        let (node, level) = match pending.take() {
            Some(p) => p,
            None => {
                let Some(frame) = stack.last_mut() else { break };
                let Some(v) = frame.next_value() else {
                    stack.pop();
                    continue;
                };
                let mut node = (*frame.node).clone();
                node.add_bound(frame.j, &v, true);
                node.add_bound(frame.j, &v, false);
                if !node.solve() {
                    continue;
                }
                (node, t - frame.j)
            }
        };
        nodes += 1;
        if opts.verbose && nodes % 1000 == 0 {
            eprintln!("k2t t={t}: {nodes} nodes, depth {level}");
        }
        if opts.node_limit.is_some_and(|l| nodes > l) {
            return Ok(K2tOutcome::Unknown { nodes: nodes - 1 });
        }
        if level == t {
            let lambda: Vec<BigInt> = (0..t).map(|j| node.value(j).to_integer()).collect();
            let x = point(&lambda);
            debug_assert!(k2t_check(t, &x));
            return Ok(K2tOutcome::Feasible {
                profile: into_profile(t, x),
                nodes,
            });
        }
        let j = t - 1 - level;
        let mut lo_vertex = node.clone();
        let mut hi_vertex = node.clone();
        let (Some(min), Some(max)) = (lo_vertex.optimise(j, false), hi_vertex.optimise(j, true))
        else {
            return Err(Error::Parameter("unbounded relaxation".into()));
        };
        // Rounding heuristic at the midpoint of the two extreme vertices.
        let mid: Vec<BigInt> = (0..t)
            .map(|i| round_nearest(&((lo_vertex.value(i) + hi_vertex.value(i)) / BigInt::from(2))))
            .collect();
        let x = point(&mid);
        if x.iter().all(|v| v.sign() != Sign::Minus) {
            return Ok(K2tOutcome::Feasible {
                profile: into_profile(t, x),
                nodes,
            });
        }
        let lo = min.ceil().to_integer();
        let hi = max.floor().to_integer();
        if lo > hi {
            continue;
        }
        let centre = round_nearest(&((min + max) / BigInt::from(2))).clamp(lo.clone(), hi.clone());
        stack.push(Frame {
            node: Rc::new(node),
            j,
            centre,
            lo,
            hi,
            step: BigInt::zero(),
            up: true,
        });
    }
    Ok(K2tOutcome::Infeasible(Infeasibility::Exhausted { nodes }))
}

/// Integer values of coordinate `j` in `[lo, hi]`, visited centre, centre+1,
/// centre−1, centre+2, …
struct Frame {
    node: Rc<Dictionary>,
    j: usize,
    centre: BigInt,
    lo: BigInt,
    hi: BigInt,
    step: BigInt,
    up: bool,
}

impl Frame {
    fn next_value(&mut self) -> Option<BigInt> {
        loop {
            let up = &self.centre + &self.step;
            let down = &self.centre - &self.step;
            if up > self.hi && down < self.lo {
                return None;
            }
            let candidate = if self.up { up } else { down };
            let first = self.step.is_zero();
            if self.up && !first {
                self.up = false;
            } else {
                self.up = true;
                self.step += 1;
            }
            if candidate >= self.lo && candidate <= self.hi {
                return Some(candidate);
            }
        }
    }
}
