//! Exhaustive generation of exact CA_X(v(v+1);2,k,v) up to isomorphism.
//!
//! A new column is a choice of one placement per symbol such that the
//! placements partition the rows; the choices are found by exact cover.
//! Children of every parent class are canonicalized and deduplicated per
//! depth.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::io::Write as _;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::array::{Array, Symbol};
use crate::canon::{automorphisms, canonical_form, CanonicalForm};
use crate::dlx::Dlx;
use crate::error::{Error, Result};
use crate::format;
use crate::sequence::{all_permutations, all_sequences, Permutation, ScaSet};
use crate::verify::is_exact_cax2;

/// `v + 1` row instances in which `symbol` appears twice in every column and
/// every other symbol once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub symbol: Symbol,
    pub rows: Vec<usize>,
}

/// The isomorphism classes of exact CA_X(v(v+1);2,k,v), one canonical
/// representative each, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalogue {
    pub k: usize,
    pub v: usize,
    /// Only classes without an orthogonal array were searched for.
    pub oa_free: bool,
    /// False for checkpointed partial output.
    pub complete: bool,
    pub members: Vec<Array>,
}

impl Catalogue {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The two-column array holding every non-constant pair once and every
/// constant pair twice, rows sorted.
pub fn base_array(v: usize) -> Result<Array> {
    if v < 2 {
        return Err(Error::Parameter(format!("alphabet size {v} below 2")));
    }
    let mut rows = Vec::with_capacity(v * (v + 1));
    for i in 0..v as Symbol {
        for j in 0..v as Symbol {
            rows.push([i, j]);
            if i == j {
                rows.push([i, j]);
            }
        }
    }
    Array::from_rows(v, &rows)
}

fn check_exact(array: &Array) -> Result<()> {
    if array.n_rows() > 64 {
        return Err(Error::Parameter(format!(
            "{} rows exceed the 64-row limit of the placement search",
            array.n_rows()
        )));
    }
    if !is_exact_cax2(array) {
        return Err(Error::NotExact(format!(
            "{}x{} array over v={}",
            array.n_rows(),
            array.n_cols(),
            array.v()
        )));
    }
    Ok(())
}

fn mask_rows(mask: u64) -> Vec<usize> {
    (0..64).filter(|&r| mask >> r & 1 == 1).collect()
}

/// Placements for `nu` as row bitmasks, sorted by their row lists.
fn placement_masks(array: &Array, nu: Symbol) -> Vec<u64> {
    let v = array.v();
    let k = array.n_cols();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); v];
    for (r, row) in array.rows().enumerate() {
        groups[row[0] as usize].push(r);
    }
    // ν first: it takes two rows from its group.
    let order: Vec<usize> = std::iter::once(nu as usize)
        .chain((0..v).filter(|&s| s != nu as usize))
        .collect();
    let cap = |s: usize| if s == nu as usize { 2u8 } else { 1 };
    let mut counts = vec![0u8; k * v];
    let mut out = Vec::new();

    struct Ctx<'a> {
        array: &'a Array,
        groups: &'a [Vec<usize>],
        order: &'a [usize],
        v: usize,
        k: usize,
        nu: usize,
    }

    fn take(ctx: &Ctx<'_>, r: usize, counts: &mut [u8], delta: i8) -> bool {
        let row = ctx.array.row(r);
        let mut ok = true;
        for c in 1..ctx.k {
            let s = row[c] as usize;
            let slot = &mut counts[c * ctx.v + s];
            *slot = (*slot as i8 + delta) as u8;
            if *slot > if s == ctx.nu { 2 } else { 1 } {
                ok = false;
            }
        }
        ok
    }

    fn rec(
        ctx: &Ctx<'_>,
        depth: usize,
        mask: u64,
        counts: &mut [u8],
        out: &mut Vec<u64>,
        cap: &dyn Fn(usize) -> u8,
    ) {
        if depth == ctx.order.len() {
            out.push(mask);
            return;
        }
        let group = &ctx.groups[ctx.order[depth]];
        if cap(ctx.order[depth]) == 1 {
            for &r in group {
                if take(ctx, r, counts, 1) {
                    rec(ctx, depth + 1, mask | 1 << r, counts, out, cap);
                }
                take(ctx, r, counts, -1);
            }
        } else {
            for (i, &r1) in group.iter().enumerate() {
                if take(ctx, r1, counts, 1) {
                    for &r2 in &group[i + 1..] {
                        if take(ctx, r2, counts, 1) {
                            rec(ctx, depth + 1, mask | 1 << r1 | 1 << r2, counts, out, cap);
                        }
                        take(ctx, r2, counts, -1);
                    }
                }
                take(ctx, r1, counts, -1);
            }
        }
    }

    let ctx = Ctx {
        array,
        groups: &groups,
        order: &order,
        v,
        k,
        nu: nu as usize,
    };
    rec(&ctx, 0, 0, &mut counts, &mut out, &cap);
    out.sort_unstable_by_key(|&m| mask_rows(m));
    out
}

pub fn placements(array: &Array, nu: Symbol) -> Result<Vec<Placement>> {
    check_exact(array)?;
    if nu as usize >= array.v() {
        return Err(Error::Parameter(format!(
            "symbol {nu} not below v={}",
            array.v()
        )));
    }
    Ok(placement_masks(array, nu)
        .into_iter()
        .map(|m| Placement {
            symbol: nu,
            rows: mask_rows(m),
        })
        .collect())
}

/// For identical rows `r1 < r2` the new symbols must satisfy
/// `new[r1] <= new[r2]`; the swapped assignment gives the same row multiset.
/// `earlier[m]` holds rows with an identical later row inside `m`,
/// `later[m]` rows with an identical earlier row inside `m`.
fn twin_masks(array: &Array, mask: u64) -> (u64, u64) {
    let (mut earlier, mut later) = (0u64, 0u64);
    for r in mask_rows(mask) {
        for q in 0..array.n_rows() {
            if q != r && array.row(q) == array.row(r) {
                if q < r {
                    earlier |= 1 << q;
                } else {
                    later |= 1 << q;
                }
            }
        }
    }
    (earlier, later)
}

/// Streams every new column (one symbol per row) completing an exact cover.
fn extend_impl(
    array: &Array,
    allowed: impl Fn(Symbol, u64) -> bool,
    mut visit: impl FnMut(&[Symbol]),
) {
    let n = array.n_rows();
    let v = array.v();
    let mut options = Vec::new();
    let mut meta: Vec<(Symbol, u64, u64, u64)> = Vec::new();
    for nu in 0..v as Symbol {
        for m in placement_masks(array, nu) {
            if !allowed(nu, m) {
                continue;
            }
            let mut items = mask_rows(m);
            items.push(n + nu as usize);
            options.push(items);
            let (e, l) = twin_masks(array, m);
            meta.push((nu, m, e, l));
        }
    }
    let mut dlx = Dlx::new(n + v, &options);
    let mut column = vec![0 as Symbol; n];
    let _ = dlx.search(
        &[],
        |o, chosen| {
            let (nu, _, earlier, later) = meta[o];
            chosen.iter().all(|&c| {
                let (mu, q, _, _) = meta[c];
                !(mu > nu && q & earlier != 0 || mu < nu && q & later != 0)
            })
        },
        |chosen| {
            for &c in chosen {
                let (nu, mut m, _, _) = meta[c];
                while m != 0 {
                    column[m.trailing_zeros() as usize] = nu;
                    m &= m - 1;
                }
            }
            visit(&column);
            ControlFlow::Continue(())
        },
    );
}

/// Every exact extension by one column, up to swapping the new entries of
/// identical rows.
pub fn extend(array: &Array) -> Result<Vec<Array>> {
    check_exact(array)?;
    let mut out = Vec::new();
    extend_impl(
        array,
        |_, _| true,
        |c| out.push(array.with_column(c).expect("column length")),
    );
    Ok(out)
}

/// Masks of rows that are constant with symbol `s` in `array`.
fn constant_mask(array: &Array, s: Symbol) -> u64 {
    (0..array.n_rows())
        .filter(|&r| array.is_constant_row(r) && array.get(r, 0) == s)
        .fold(0, |m, r| m | 1 << r)
}

/// Streams every pair of new columns completing a simultaneous two-column
/// extension: same-symbol placements meet in two rows, different-symbol
/// placements in different columns meet in one row.
fn extend_two_impl(
    array: &Array,
    forbid_constant: Option<Symbol>,
    visit: &mut dyn FnMut(&[Symbol], &[Symbol]),
) {
    let v = array.v();
    let n = array.n_rows();
    let all: Vec<Vec<u64>> = (0..v as Symbol)
        .map(|nu| placement_masks(array, nu))
        .collect();
    let forbidden = forbid_constant.map(|s| (s, constant_mask(array, s)));

    struct State<'a> {
        all: &'a [Vec<u64>],
        forbidden: Option<(Symbol, u64)>,
        p: Vec<u64>,
        q: Vec<u64>,
        c1: Vec<Symbol>,
        c2: Vec<Symbol>,
        visit: &'a mut dyn FnMut(&[Symbol], &[Symbol]),
    }

    fn fill(col: &mut [Symbol], masks: &[u64]) {
        for (nu, &m) in masks.iter().enumerate() {
            let mut m = m;
            while m != 0 {
                col[m.trailing_zeros() as usize] = nu as Symbol;
                m &= m - 1;
            }
        }
    }

    fn rec(st: &mut State<'_>, nu: usize, used_p: u64, used_q: u64) {
        if nu == st.all.len() {
            fill(&mut st.c1, &st.p);
            fill(&mut st.c2, &st.q);
            (st.visit)(&st.c1, &st.c2);
            return;
        }
        let bad = match st.forbidden {
            Some((s, m)) if s as usize == nu => m,
            _ => 0,
        };
        let cands = st.all[nu].clone();
        for &p in &cands {
            if p & used_p != 0 || st.q.iter().any(|&q| (p & q).count_ones() != 1) {
                continue;
            }
            for &q in &cands {
                if q & used_q != 0
                    || (p & q).count_ones() != 2
                    || p & q & bad != 0
                    || st.p.iter().any(|&pp| (q & pp).count_ones() != 1)
                {
                    continue;
                }
                st.p.push(p);
                st.q.push(q);
                rec(st, nu + 1, used_p | p, used_q | q);
                st.p.pop();
                st.q.pop();
            }
        }
    }

    let mut st = State {
        all: &all,
        forbidden,
        p: Vec::with_capacity(v),
        q: Vec::with_capacity(v),
        c1: vec![0; n],
        c2: vec![0; n],
        visit,
    };
    rec(&mut st, 0, 0, 0);
}

/// Every exact extension by two columns at once. With `forbid_constant`
/// set, no row of the result is constant in that symbol.
pub fn extend_two_columns(array: &Array, forbid_constant: Option<Symbol>) -> Result<Vec<Array>> {
    check_exact(array)?;
    let mut out = Vec::new();
    extend_two_impl(array, forbid_constant, &mut |c1, c2| {
        out.push(
            array
                .with_column(c1)
                .and_then(|a| a.with_column(c2))
                .expect("column length"),
        )
    });
    Ok(out)
}

/// True if the array has a constant row for every symbol, which for exact
/// arrays is the same as containing an orthogonal array.
pub(crate) fn has_all_constant_rows(array: &Array) -> bool {
    let mut seen = vec![false; array.v()];
    for s in array.constant_rows() {
        seen[s as usize] = true;
    }
    seen.iter().all(|&b| b)
}

#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    /// Worker threads; output does not depend on it.
    pub jobs: usize,
    /// Directory for per-depth results and per-parent progress.
    pub checkpoint: Option<PathBuf>,
    /// Parents processed between checkpoint writes.
    pub chunk: usize,
    /// Progress lines on stderr.
    pub verbose: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            jobs: 1,
            checkpoint: None,
            chunk: 4096,
            verbose: false,
        }
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))
}

/// How children of a parent are produced at one depth.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    /// Plain one-column extension.
    All,
    /// One column, filtering out children that contain an OA.
    OaFree,
    /// One column from the base array, 0-placement avoiding the constant
    /// 0-rows.
    OaFreeThree,
    /// Two columns from the base array with no constant 0-row.
    OaFreeFour,
}

/// Parent automorphisms as maps on row positions, used to spot children
/// that are images of one another before paying for a canonical form.
///
/// A child is keyed by listing, for each group of identical parent rows in
/// sorted order, the sorted appended entries of that group. An automorphism
/// `g` of the parent maps a child to an isomorphic child whose key is read
/// off by sending row `r` to the group of `g(r)` and relabelling its appended
/// symbols; the least key over the group is the same for the whole orbit.
struct ParentOrbits {
    /// Per automorphism: symbol map, and for each key slot the row whose
    /// image lands there.
    maps: Vec<(Vec<Symbol>, Vec<usize>)>,
    /// Key slot where each group starts and its size; groups in slot order.
    groups: Vec<(usize, usize)>,
    n: usize,
}

impl ParentOrbits {
    fn new(parent: &Array) -> Self {
        let rows: Vec<&[Symbol]> = parent.rows().collect();
        let mut distinct: Vec<&[Symbol]> = rows.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let mut groups = Vec::with_capacity(distinct.len());
        let mut slot = 0;
        for d in &distinct {
            let size = rows.iter().filter(|r| *r == d).count();
            groups.push((slot, size));
            slot += size;
        }
        let maps = automorphisms(parent)
            .elements
            .into_iter()
            .map(|g| {
                let mut fill = vec![0usize; groups.len()];
                let mut source = vec![0usize; rows.len()];
                for (r, row) in rows.iter().enumerate() {
                    let img: Vec<Symbol> = g
                        .columns
                        .iter()
                        .map(|&c| g.symbols[row[c] as usize])
                        .collect();
                    let gi = distinct.binary_search(&&img[..]).expect("image row");
                    source[groups[gi].0 + fill[gi]] = r;
                    fill[gi] += 1;
                }
                (g.symbols, source)
            })
            .collect();
        ParentOrbits {
            maps,
            groups,
            n: rows.len(),
        }
    }

    /// `appended[r]` packs the `width` new symbols of row `r`, 4 bits each.
    /// Leaves the least key over the parent's automorphisms in `best`.
    fn key(&self, appended: &[u16], width: usize, buf: &mut Vec<u16>, best: &mut Vec<u16>) {
        best.clear();
        buf.clear();
        buf.resize(self.n, 0);
        'maps: for (sigma, source) in &self.maps {
            let mut lower = best.is_empty();
            for &(start, size) in &self.groups {
                for j in start..start + size {
                    let a = appended[source[j]];
                    let mut img = 0u16;
                    for i in 0..width {
                        img |= (sigma[(a >> (4 * i) & 15) as usize] as u16) << (4 * i);
                    }
                    buf[j] = img;
                }
                if size > 1 {
                    buf[start..start + size].sort_unstable();
                }
                if !lower {
                    match buf[start..start + size].cmp(&best[start..start + size]) {
                        std::cmp::Ordering::Greater => continue 'maps,
                        std::cmp::Ordering::Less => lower = true,
                        std::cmp::Ordering::Equal => {}
                    }
                }
            }
            if lower {
                best.clone_from(buf);
            }
        }
    }
}

fn children(parent: &Array, step: Step) -> Vec<CanonicalForm> {
    let orbits = ParentOrbits::new(parent);
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut forms: Vec<CanonicalForm> = Vec::new();
    let (mut buf, mut best) = (Vec::new(), Vec::new());
    let mut packed = vec![0u16; parent.n_rows()];
    let mut consider = |cols: &[&[Symbol]]| {
        for (r, p) in packed.iter_mut().enumerate() {
            *p = cols
                .iter()
                .rev()
                .fold(0u16, |acc, c| acc << 4 | c[r] as u16);
        }
        orbits.key(&packed, cols.len(), &mut buf, &mut best);
        if seen.contains(&best) {
            return;
        }
        seen.insert(best.clone());
        let mut child = parent.clone();
        for c in cols {
            child = child.with_column(c).expect("column length");
        }
        if step == Step::All || !has_all_constant_rows(&child) {
            forms.push(canonical_form(&child));
        }
    };
    match step {
        Step::All | Step::OaFree => extend_impl(parent, |_, _| true, |c| consider(&[c])),
        Step::OaFreeThree => {
            let bad = constant_mask(parent, 0);
            extend_impl(parent, |nu, m| nu != 0 || m & bad == 0, |c| consider(&[c]))
        }
        Step::OaFreeFour => extend_two_impl(parent, Some(0), &mut |c1, c2| consider(&[c1, c2])),
    }
    forms.sort_unstable();
    forms.dedup();
    forms
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn compact_bytes(cat: &Catalogue) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    format::write_compact(cat, &mut buf)?;
    Ok(buf)
}

fn load_compact(path: &Path) -> Result<Option<Catalogue>> {
    match fs::read(path) {
        Ok(bytes) => Ok(Some(format::read_compact(&bytes[..])?)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// One depth: the classes of all children of `parents`.
fn next_depth(
    parents: &[Array],
    k: usize,
    v: usize,
    oa_free: bool,
    step: Step,
    opts: &EnumerateOptions,
) -> Result<Catalogue> {
    let pool = pool(opts.jobs)?;
    let dir = opts.checkpoint.as_deref();
    let tag = format!("v{v}-k{k}-{}", if oa_free { "oa-free" } else { "full" });
    let done_path = dir.map(|d| d.join(format!("{tag}.done")));
    if let Some(p) = &done_path {
        if let Some(cat) = load_compact(p)? {
            return Ok(cat);
        }
    }
    let progress_path = dir.map(|d| d.join(format!("{tag}.progress")));
    let partial_path = dir.map(|d| d.join(format!("{tag}.partial")));
    let mut start = 0usize;
    let mut found: BTreeSet<CanonicalForm> = BTreeSet::new();
    if let (Some(pp), Some(part)) = (&progress_path, &partial_path) {
        if let Ok(text) = fs::read_to_string(pp) {
            let saved = load_compact(part)?;
            if let (Ok(n), Some(cat)) = (text.trim().parse::<usize>(), saved) {
                start = n.min(parents.len());
                found.extend(cat.members.into_iter().map(CanonicalForm::trusted));
            }
        }
    }
    let chunk = if dir.is_some() {
        opts.chunk.max(1)
    } else {
        parents.len().max(1)
    };
    while start < parents.len() {
        let end = (start + chunk).min(parents.len());
        let batch: BTreeSet<CanonicalForm> = pool.install(|| {
            parents[start..end]
                .par_iter()
                .map(|p| children(p, step))
                .fold(BTreeSet::new, |mut acc, kids| {
                    acc.extend(kids);
                    acc
                })
                .reduce(BTreeSet::new, |mut a, b| {
                    if a.len() < b.len() {
                        return b.into_iter().chain(a).collect();
                    }
                    a.extend(b);
                    a
                })
        });
        found.extend(batch);
        start = end;
        if opts.verbose {
            eprintln!(
                "k={k}: {start}/{} parents, {} classes",
                parents.len(),
                found.len()
            );
        }
        if let (Some(pp), Some(part)) = (&progress_path, &partial_path) {
            let partial = Catalogue {
                k,
                v,
                oa_free,
                complete: false,
                members: found.iter().map(|f| f.array().clone()).collect(),
            };
            atomic_write(part, &compact_bytes(&partial)?)?;
            atomic_write(pp, format!("{start}\n").as_bytes())?;
        }
    }
    let cat = Catalogue {
        k,
        v,
        oa_free,
        complete: true,
        members: found.into_iter().map(CanonicalForm::into_array).collect(),
    };
    if let Some(p) = &done_path {
        atomic_write(p, &compact_bytes(&cat)?)?;
    }
    Ok(cat)
}

/// All isomorphism classes of exact CA_X(v(v+1);2,k,v), or with `oa_free`
/// only those containing no orthogonal array.
pub fn catalogue(v: usize, k: usize, oa_free: bool, opts: &EnumerateOptions) -> Result<Catalogue> {
    if !(2..=7).contains(&v) {
        return Err(Error::Parameter(format!(
            "v={v} outside the supported 2..=7"
        )));
    }
    if k < 2 {
        return Err(Error::Parameter(format!("k={k} below 2")));
    }
    if let Some(d) = &opts.checkpoint {
        fs::create_dir_all(d)?;
    }
    let base = canonical_form(&base_array(v)?).into_array();
    if !oa_free {
        let mut cat = Catalogue {
            k: 2,
            v,
            oa_free,
            complete: true,
            members: vec![base],
        };
        while cat.k < k && !cat.is_empty() {
            cat = next_depth(&cat.members, cat.k + 1, v, false, Step::All, opts)?;
        }
        cat.k = k;
        return Ok(cat);
    }
    // The base array contains an OA, so OA-free classes start at k = 3.
    if k == 2 {
        return Ok(Catalogue {
            k,
            v,
            oa_free,
            complete: true,
            members: Vec::new(),
        });
    }
    let mut cat = if k == 3 {
        next_depth(
            std::slice::from_ref(&base),
            3,
            v,
            true,
            Step::OaFreeThree,
            opts,
        )?
    } else {
        next_depth(
            std::slice::from_ref(&base),
            4,
            v,
            true,
            Step::OaFreeFour,
            opts,
        )?
    };
    while cat.k < k && !cat.is_empty() {
        cat = next_depth(&cat.members, cat.k + 1, v, true, Step::OaFree, opts)?;
    }
    cat.k = k;
    Ok(cat)
}

/// One depth of extension applied to every member of a catalogue.
pub fn extend_catalogue(cat: &Catalogue, opts: &EnumerateOptions) -> Result<Catalogue> {
    if !cat.complete {
        return Err(Error::Parameter("cannot extend a partial catalogue".into()));
    }
    for a in &cat.members {
        check_exact(a)?;
    }
    let step = if cat.oa_free { Step::OaFree } else { Step::All };
    let members: Vec<Array> = cat
        .members
        .iter()
        .map(|a| canonical_form(a).into_array())
        .collect();
    next_depth(&members, cat.k + 1, cat.v, cat.oa_free, step, opts)
}

/// A PSCA(v,t,1): `t!` permutations covering every sequence of `S_{v,t}`
/// exactly once, found by exact cover with the identity fixed.
pub fn find_psca(v: usize, t: usize) -> Result<Option<ScaSet>> {
    if t == 0 || t > v || v > 8 {
        return Err(Error::Parameter(format!(
            "need 1 <= t <= v <= 8, got t={t}, v={v}"
        )));
    }
    let seqs = all_sequences(v, t);
    let index = |s: &[Symbol]| {
        seqs.binary_search_by(|q| q.elements().cmp(s))
            .expect("sequence")
    };
    let perms = all_permutations(v);
    let options: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            let mut items = Vec::new();
            crate::verify::for_each_combination(v, t, |pos| {
                let s: Vec<Symbol> = pos.iter().map(|&i| p.image()[i]).collect();
                items.push(index(&s));
            });
            items
        })
        .collect();
    let mut dlx = Dlx::new(seqs.len(), &options);
    let mut found: Option<Vec<usize>> = None;
    let _ = dlx.search(
        &[0],
        |_, _| true,
        |chosen| {
            found = Some(chosen.to_vec());
            ControlFlow::Break(())
        },
    );
    Ok(match found {
        None => None,
        Some(mut idx) => {
            idx.sort_unstable();
            let chosen: Vec<Permutation> = idx.into_iter().map(|i| perms[i].clone()).collect();
            Some(ScaSet::new(v, t, chosen)?)
        }
    })
}
