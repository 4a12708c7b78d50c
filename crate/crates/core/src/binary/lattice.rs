//! Integral LLL reduction (all arithmetic in exact integers).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `n / d` for `d > 0`, halves rounded up.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * &two))
}

/// LLL-reduces linearly independent integer vectors with parameter
/// `δ = delta_num / delta_den`. Returns `None` if the vectors are dependent.
pub fn lll(mut b: Vec<Vec<BigInt>>, delta_num: u32, delta_den: u32) -> Option<Vec<Vec<BigInt>>> {
    let n = b.len();
    if n <= 1 {
        return Some(b);
    }
    let dn = BigInt::from(delta_num);
    let dd = BigInt::from(delta_den);
    // d[i] is the Gram determinant of the first i vectors; lam[k][j] are the
    // scaled Gram–Schmidt coefficients d[j+1]·μ[k][j].
    let mut d: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    let mut lam: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    d[0] = BigInt::from(1);
    d[1] = dot(&b[0], &b[0]);
    if d[1].is_zero() {
        return None;
    }
    let mut k = 1usize;
    let mut kmax = 0usize;

    fn red(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
        let two_lam: BigInt = &lam[k][l] * 2;
        if two_lam.abs() > d[l + 1] {
            let q = round_div(&lam[k][l], &d[l + 1]);
            let bl = b[l].clone();
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[k][l] -= &q * &d[l + 1];
            for i in 0..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    }

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return None;
                    }
                    d[k + 1] = u;
                }
            }
        }
        red(&mut b, &mut lam, &d, k, k - 1);
        let l = &lam[k][k - 1];
        let lhs = &dd * &d[k + 1] * &d[k - 1];
        let rhs = &dn * &d[k] * &d[k] - &dd * l * l;
        if lhs < rhs {
            // swap k and k-1
            b.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let big_b = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
                lam[i][k - 1] = (&big_b * &t + &l * &lam[i][k]) / &d[k + 1];
            }
            d[k] = big_b;
            if k > 1 {
                k -= 1;
            }
        } else {
            for l in (0..k - 1).rev() {
                red(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Some(b)
}
