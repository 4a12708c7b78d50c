//! Exact cover by dancing links.
//!
//! Items are `0..n_items`; each option is a set of items. A solution is a set
//! of options covering every item exactly once. Item choice is
//! minimum-remaining-values with ties broken by lowest index, so the visiting
//! order is deterministic.

use std::ops::ControlFlow;

pub struct Dlx {
    n_items: usize,
    // Header list over items 1..=n_items; 0 is the root.
    llink: Vec<usize>,
    rlink: Vec<usize>,
    // Node storage; nodes 0..=n_items are the item headers.
    ulink: Vec<usize>,
    dlink: Vec<usize>,
    top: Vec<usize>,
    len: Vec<usize>,
    option_of: Vec<usize>,
    option_span: Vec<(usize, usize)>,
    stack: Vec<usize>,
}

impl Dlx {
    pub fn new(n_items: usize, options: &[Vec<usize>]) -> Self {
        let header = n_items + 1;
        let mut d = Dlx {
            n_items,
            llink: (0..header)
                .map(|i| if i == 0 { n_items } else { i - 1 })
                .collect(),
            rlink: (0..header)
                .map(|i| if i == n_items { 0 } else { i + 1 })
                .collect(),
            ulink: (0..header).collect(),
            dlink: (0..header).collect(),
            top: (0..header).collect(),
            len: vec![0; header],
            option_of: vec![usize::MAX; header],
            option_span: Vec::with_capacity(options.len()),
            stack: Vec::new(),
        };
        for (o, items) in options.iter().enumerate() {
            let start = d.top.len();
            for &item in items {
                assert!(item < n_items, "item {item} out of range");
                let i = item + 1;
                let x = d.top.len();
                d.top.push(i);
                d.option_of.push(o);
                d.ulink.push(d.ulink[i]);
                d.dlink.push(i);
                let last = d.ulink[i];
                d.dlink[last] = x;
                d.ulink[i] = x;
                d.len[i] += 1;
            }
            d.option_span.push((start, d.top.len()));
        }
        d
    }

    pub fn n_options(&self) -> usize {
        self.option_span.len()
    }

    fn cover(&mut self, i: usize) {
        let mut p = self.dlink[i];
        while p != i {
            self.hide(p);
            p = self.dlink[p];
        }
        let (l, r) = (self.llink[i], self.rlink[i]);
        self.rlink[l] = r;
        self.llink[r] = l;
    }

    fn hide(&mut self, p: usize) {
        let (s, e) = self.option_span[self.option_of[p]];
        for q in (p + 1..e).chain(s..p) {
            let (u, d) = (self.ulink[q], self.dlink[q]);
            self.dlink[u] = d;
            self.ulink[d] = u;
            self.len[self.top[q]] -= 1;
        }
    }

    fn uncover(&mut self, i: usize) {
        let (l, r) = (self.llink[i], self.rlink[i]);
        self.rlink[l] = i;
        self.llink[r] = i;
        let mut p = self.ulink[i];
        while p != i {
            self.unhide(p);
            p = self.ulink[p];
        }
    }

    fn unhide(&mut self, p: usize) {
        let (s, e) = self.option_span[self.option_of[p]];
        for q in (s..p).rev().chain((p + 1..e).rev()) {
            let (u, d) = (self.ulink[q], self.dlink[q]);
            self.dlink[u] = q;
            self.ulink[d] = q;
            self.len[self.top[q]] += 1;
        }
    }

    fn select(&mut self, x: usize) {
        let (s, e) = self.option_span[self.option_of[x]];
        for q in (x + 1..e).chain(s..x) {
            self.cover(self.top[q]);
        }
    }

    fn deselect(&mut self, x: usize) {
        let (s, e) = self.option_span[self.option_of[x]];
        for q in (s..x).rev().chain((x + 1..e).rev()) {
            self.uncover(self.top[q]);
        }
    }

    /// Visits every exact cover containing all of `preselect`. `admissible`
    /// sees a candidate option and the options chosen so far and may veto it.
    /// `visit` gets the chosen options in selection order and can stop the
    /// search by returning `Break`.
    pub fn search<A, V>(
        &mut self,
        preselect: &[usize],
        mut admissible: A,
        mut visit: V,
    ) -> ControlFlow<()>
    where
        A: FnMut(usize, &[usize]) -> bool,
        V: FnMut(&[usize]) -> ControlFlow<()>,
    {
        self.stack.clear();
        let mut chosen_nodes = Vec::new();
        let mut ok = true;
        for &o in preselect {
            let (s, e) = self.option_span[o];
            if s == e || (s..e).any(|q| self.is_covered(self.top[q])) {
                ok = false;
                break;
            }
            self.cover(self.top[s]);
            self.select(s);
            chosen_nodes.push(s);
            self.stack.push(o);
        }
        let flow = if ok {
            self.rec(&mut admissible, &mut visit)
        } else {
            ControlFlow::Continue(())
        };
        for &s in chosen_nodes.iter().rev() {
            self.deselect(s);
            self.uncover(self.top[s]);
        }
        self.stack.clear();
        flow
    }

    fn is_covered(&self, i: usize) -> bool {
        self.rlink[self.llink[i]] != i
    }

    fn rec<A, V>(&mut self, admissible: &mut A, visit: &mut V) -> ControlFlow<()>
    where
        A: FnMut(usize, &[usize]) -> bool,
        V: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if self.rlink[0] == 0 {
            return visit(&self.stack);
        }
        let mut best = self.rlink[0];
        let mut i = self.rlink[best];
        while i != 0 {
            if self.len[i] < self.len[best] {
                best = i;
            }
            i = self.rlink[i];
        }
        if self.len[best] == 0 {
            return ControlFlow::Continue(());
        }
        self.cover(best);
        let mut x = self.dlink[best];
        let mut flow = ControlFlow::Continue(());
        while x != best {
            let o = self.option_of[x];
            if admissible(o, &self.stack) {
                self.select(x);
                self.stack.push(o);
                flow = self.rec(admissible, visit);
                self.stack.pop();
                self.deselect(x);
                if flow.is_break() {
                    break;
                }
            }
            x = self.dlink[x];
        }
        self.uncover(best);
        flow
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }
}

/// All exact covers, each as a sorted list of option indices.
pub fn all_exact_covers(n_items: usize, options: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut d = Dlx::new(n_items, options);
    let _ = d.search(
        &[],
        |_, _| true,
        |s| {
            let mut s = s.to_vec();
            s.sort_unstable();
            out.push(s);
            ControlFlow::Continue(())
        },
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knuth_example() {
        // Knuth's seven-item example; the unique cover is options 0, 3, 4.
        let options = vec![
            vec![2, 4],
            vec![0, 3, 6],
            vec![1, 2, 5],
            vec![0, 3, 5],
            vec![1, 6],
            vec![3, 4, 6],
        ];
        assert_eq!(all_exact_covers(7, &options), vec![vec![0, 3, 4]]);
    }

    #[test]
    fn counts_perfect_matchings() {
        // Perfect matchings of K_6: 15.
        let mut options = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                options.push(vec![a, b]);
            }
        }
        assert_eq!(all_exact_covers(6, &options).len(), 15);
        let mut d = Dlx::new(6, &options);
        let mut n = 0;
        // Fix {0,1}: 3 matchings remain.
        let _ = d.search(
            &[0],
            |_, _| true,
            |_| {
                n += 1;
                ControlFlow::Continue(())
            },
        );
        assert_eq!(n, 3);
        // The structure is restored after a search.
        assert_eq!(all_exact_covers(6, &options).len(), 15);
        let mut m = 0;
        let _ = d.search(
            &[],
            |_, _| true,
            |_| {
                m += 1;
                ControlFlow::Continue(())
            },
        );
        assert_eq!(m, 15);
    }

    #[test]
    fn veto_and_break() {
        let options = vec![vec![0], vec![1], vec![0, 1]];
        let mut d = Dlx::new(2, &options);
        let mut seen = Vec::new();
        let _ = d.search(
            &[],
            |o, _| o != 2,
            |s| {
                seen.push(s.to_vec());
                ControlFlow::Continue(())
            },
        );
        assert_eq!(seen, vec![vec![0, 1]]);
        let mut n = 0;
        let flow = d.search(
            &[],
            |_, _| true,
            |_| {
                n += 1;
                ControlFlow::Break(())
            },
        );
        assert!(flow.is_break());
        assert_eq!(n, 1);
    }

    #[test]
    fn empty_item_set_has_the_empty_cover() {
        assert_eq!(all_exact_covers(0, &[]), vec![Vec::<usize>::new()]);
    }
}
