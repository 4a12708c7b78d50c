//! Brute-force oracles shared by the enumeration tests and the acceptance
//! suite. Deliberately naive: no placements, no exact cover, no canonical
//! forms.

use cax::verify::{verify_cax, verify_oa};
use cax::Array;

/// Whether appending `col` keeps every column pair exact: each non-constant
/// pair once, each constant pair twice.
fn exact_with(a: &Array, col: &[u8]) -> bool {
    let v = a.v();
    (0..a.n_cols()).all(|j| {
        let mut count = vec![0u8; v * v];
        for (r, &c) in col.iter().enumerate() {
            count[a.get(r, j) as usize * v + c as usize] += 1;
        }
        (0..v * v).all(|i| count[i] == if i / v == i % v { 2 } else { 1 })
    })
}

/// Every column with `v+1` copies of each symbol that keeps the array exact.
pub fn brute_force_extend(a: &Array) -> Vec<Array> {
    fn go(a: &Array, col: &mut Vec<u8>, left: &mut [usize], out: &mut Vec<Array>) {
        if col.len() == a.n_rows() {
            if exact_with(a, col) {
                out.push(a.with_column(col).unwrap());
            }
            return;
        }
        for s in 0..left.len() {
            if left[s] > 0 {
                left[s] -= 1;
                col.push(s as u8);
                go(a, col, left, out);
                col.pop();
                left[s] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(a, &mut Vec::new(), &mut vec![a.v() + 1; a.v()], &mut out);
    for b in &out {
        assert!(verify_cax(b, 2, true).unwrap().pass);
    }
    out
}

fn combinations(n: usize, r: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn go(
        start: usize,
        n: usize,
        r: usize,
        cur: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == r {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if go(i + 1, n, r, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(0, n, r, &mut Vec::new(), f)
}

/// Some v rows whose removal leaves an index-one orthogonal array.
pub fn contains_oa_directly(a: &Array) -> bool {
    combinations(a.n_rows(), a.v(), &mut |rows| {
        verify_oa(&a.remove_rows(rows).unwrap(), 2).unwrap().pass
    })
}
