//! Text records and catalogue files.
//!
//! An array record is a header `cax <N> <k> <v>` followed by N lines of k
//! space-separated decimal symbols; a permutation-set record is
//! `sca <N> <t> <v>` followed by N permutations in one-line notation. Records
//! are separated by one blank line. A catalogue file starts with
//! `catalogue <k> <v> <count> <complete|partial> <full|oa-free>`, a blank
//! line, then `count` array records.
//!
//! Large catalogues can also be written in a compact binary stream: a fixed
//! header followed by length-prefixed records of nibble-packed entries.

use std::fmt::Write as _;
use std::io::{Read, Write};

use crate::array::{Array, Symbol};
use crate::enumerate::Catalogue;
use crate::error::{Error, Result};
use crate::sequence::{Permutation, ScaSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Record {
    Array(Array),
    Sca(ScaSet),
}

pub fn write_array(array: &Array) -> String {
    let mut s = String::with_capacity(16 + array.entries().len() * 2);
    writeln!(s, "cax {} {} {}", array.n_rows(), array.n_cols(), array.v()).unwrap();
    for r in array.rows() {
        write_line(&mut s, r);
    }
    s
}

pub fn write_sca(x: &ScaSet) -> String {
    let mut s = String::new();
    writeln!(s, "sca {} {} {}", x.len(), x.t(), x.v()).unwrap();
    for p in x.perms() {
        write_line(&mut s, p.image());
    }
    s
}

fn write_line(s: &mut String, symbols: &[Symbol]) {
    for (i, e) in symbols.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{e}").unwrap();
    }
    s.push('\n');
}

/// Joins records with single blank lines.
pub fn write_records(records: &[Record]) -> String {
    let mut out = String::new();
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&match r {
            Record::Array(a) => write_array(a),
            Record::Sca(x) => write_sca(x),
        });
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate().peekable(),
        }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.inner.next().map(|(i, l)| (i + 1, l))
    }

    fn expect(&mut self, what: &str, last_line: usize) -> Result<(usize, &'a str)> {
        self.next().ok_or_else(|| Error::Parse {
            line: last_line + 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_count(line: usize, field: &str, name: &str) -> Result<usize> {
    field.parse::<usize>().map_err(|_| {
        perr(
            line,
            format!("{name} `{field}` is not a non-negative integer"),
        )
    })
}

fn parse_symbols(line: usize, text: &str, width: usize, v: usize) -> Result<Vec<Symbol>> {
    let fields: Vec<&str> = text.split(' ').collect();
    if fields.len() != width {
        return Err(perr(
            line,
            format!(
                "expected {width} space-separated symbols, found {}",
                fields.len()
            ),
        ));
    }
    fields
        .iter()
        .enumerate()
        .map(|(j, f)| match f.parse::<u8>() {
            Ok(e) if (e as usize) < v && (f.len() == 1 || !f.starts_with('0')) => Ok(e),
            Ok(e) if (e as usize) >= v => Err(perr(
                line,
                format!("field {}: symbol {e} is not below v={v}", j + 1),
            )),
            _ => Err(perr(
                line,
                format!("field {}: `{f}` is not a symbol", j + 1),
            )),
        })
        .collect()
}

fn parse_header(line: usize, text: &str) -> Result<(&str, usize, usize, usize)> {
    let fields: Vec<&str> = text.split(' ').collect();
    if fields.len() != 4 || !matches!(fields[0], "cax" | "sca") {
        return Err(perr(
            line,
            format!("expected `cax <N> <k> <v>` or `sca <N> <t> <v>`, found `{text}`"),
        ));
    }
    let n = parse_count(line, fields[1], "N")?;
    let w = parse_count(line, fields[2], if fields[0] == "cax" { "k" } else { "t" })?;
    let v = parse_count(line, fields[3], "v")?;
    Ok((fields[0], n, w, v))
}

fn parse_record(lines: &mut Lines<'_>, header_line: usize, header: &str) -> Result<Record> {
    let (kind, n, w, v) = parse_header(header_line, header)?;
    if n == 0 {
        return Err(perr(header_line, "N must be positive"));
    }
    let width = if kind == "cax" { w } else { v };
    let mut entries = Vec::with_capacity(n * width);
    let mut last = header_line;
    for _ in 0..n {
        let (ln, text) = lines.expect("a row", last)?;
        entries.extend(parse_symbols(ln, text, width, v)?);
        last = ln;
    }
    let wrap = |e: Error| perr(header_line, e.to_string());
    if kind == "cax" {
        Ok(Record::Array(Array::new(n, w, v, entries).map_err(wrap)?))
    } else {
        let perms = entries
            .chunks(v)
            .map(|c| Permutation::new(c.to_vec()))
            .collect::<Result<Vec<_>>>()
            .map_err(wrap)?;
        Ok(Record::Sca(ScaSet::new(v, w, perms).map_err(wrap)?))
    }
}

/// Parses a sequence of records separated by single blank lines. A trailing
/// newline is allowed; anything else out of place is an error.
pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    let mut lines = Lines::new(text);
    let mut out = Vec::new();
    while let Some((ln, header)) = lines.next() {
        if !out.is_empty() {
            if !header.is_empty() {
                return Err(perr(ln, "expected a blank line between records"));
            }
            let Some((ln, header)) = lines.next() else {
                return Err(perr(ln, "blank line after the last record"));
            };
            out.push(parse_record(&mut lines, ln, header)?);
        } else {
            out.push(parse_record(&mut lines, ln, header)?);
        }
    }
    if out.is_empty() {
        return Err(perr(1, "no records"));
    }
    Ok(out)
}

pub fn parse_array(text: &str) -> Result<Array> {
    match single(text)? {
        Record::Array(a) => Ok(a),
        Record::Sca(_) => Err(perr(1, "expected a `cax` record, found `sca`")),
    }
}

pub fn parse_sca(text: &str) -> Result<ScaSet> {
    match single(text)? {
        Record::Sca(x) => Ok(x),
        Record::Array(_) => Err(perr(1, "expected an `sca` record, found `cax`")),
    }
}

fn single(text: &str) -> Result<Record> {
    let mut records = parse_records(text)?;
    if records.len() != 1 {
        return Err(perr(
            1,
            format!("expected one record, found {}", records.len()),
        ));
    }
    Ok(records.pop().unwrap())
}

fn catalogue_header(cat: &Catalogue) -> String {
    format!(
        "catalogue {} {} {} {} {}\n",
        cat.k,
        cat.v,
        cat.members.len(),
        if cat.complete { "complete" } else { "partial" },
        if cat.oa_free { "oa-free" } else { "full" }
    )
}

pub fn write_catalogue(cat: &Catalogue) -> String {
    let mut out = catalogue_header(cat);
    for a in &cat.members {
        out.push('\n');
        out.push_str(&write_array(a));
    }
    out
}

pub fn parse_catalogue(text: &str) -> Result<Catalogue> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.expect("a catalogue header", 0)?;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 6 || fields[0] != "catalogue" {
        return Err(perr(
            ln,
            "expected `catalogue <k> <v> <count> <complete|partial> <full|oa-free>`",
        ));
    }
    let k = parse_count(ln, fields[1], "k")?;
    let v = parse_count(ln, fields[2], "v")?;
    let count = parse_count(ln, fields[3], "count")?;
    let complete = match fields[4] {
        "complete" => true,
        "partial" => false,
        f => return Err(perr(ln, format!("`{f}` is neither complete nor partial"))),
    };
    let oa_free = match fields[5] {
        "oa-free" => true,
        "full" => false,
        f => return Err(perr(ln, format!("`{f}` is neither full nor oa-free"))),
    };
    let mut members = Vec::with_capacity(count);
    let mut last = ln;
    for _ in 0..count {
        let (bl, blank) = lines.expect("a blank line", last)?;
        if !blank.is_empty() {
            return Err(perr(bl, "expected a blank line between records"));
        }
        let (hl, h) = lines.expect("an array record", bl)?;
        match parse_record(&mut lines, hl, h)? {
            Record::Array(a) => {
                if a.n_cols() != k || a.v() != v {
                    return Err(perr(
                        hl,
                        format!(
                            "record is k={} v={}, catalogue is k={k} v={v}",
                            a.n_cols(),
                            a.v()
                        ),
                    ));
                }
                last = hl + a.n_rows();
                members.push(a);
            }
            Record::Sca(_) => return Err(perr(hl, "catalogues hold `cax` records only")),
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(perr(ln, format!("trailing input after {count} records")));
    }
    Ok(Catalogue {
        k,
        v,
        oa_free,
        complete,
        members,
    })
}

const COMPACT_MAGIC: &[u8; 4] = b"CAXC";

/// Streams a catalogue as: magic, k, v, flags (bit 0 complete, bit 1
/// oa-free), member count as u64, then per member a u32 row count and the
/// nibble-packed entries. All integers little-endian.
pub fn write_compact<W: Write>(cat: &Catalogue, mut w: W) -> Result<()> {
    w.write_all(COMPACT_MAGIC)?;
    let flags = cat.complete as u8 | (cat.oa_free as u8) << 1;
    w.write_all(&[cat.k as u8, cat.v as u8, flags])?;
    w.write_all(&(cat.members.len() as u64).to_le_bytes())?;
    let mut buf = Vec::new();
    for a in &cat.members {
        w.write_all(&(a.n_rows() as u32).to_le_bytes())?;
        buf.clear();
        for pair in a.entries().chunks(2) {
            buf.push(pair[0] << 4 | pair.get(1).copied().unwrap_or(0));
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

pub fn read_compact<R: Read>(mut r: R) -> Result<Catalogue> {
    let bad = |m: &str| Error::Parse {
        line: 0,
        message: format!("compact catalogue: {m}"),
    };
    let mut head = [0u8; 15];
    r.read_exact(&mut head)
        .map_err(|_| bad("truncated header"))?;
    if &head[..4] != COMPACT_MAGIC {
        return Err(bad("bad magic"));
    }
    let (k, v, flags) = (head[4] as usize, head[5] as usize, head[6]);
    if flags > 3 {
        return Err(bad("unknown flags"));
    }
    let count = u64::from_le_bytes(head[7..15].try_into().unwrap()) as usize;
    let mut members = Vec::with_capacity(count.min(1 << 20));
    for i in 0..count {
        let mut len = [0u8; 4];
        r.read_exact(&mut len)
            .map_err(|_| bad(&format!("truncated at record {i}")))?;
        let n = u32::from_le_bytes(len) as usize;
        let cells = n * k;
        let mut packed = vec![0u8; cells.div_ceil(2)];
        r.read_exact(&mut packed)
            .map_err(|_| bad(&format!("truncated at record {i}")))?;
        let mut entries = Vec::with_capacity(cells);
        for b in packed {
            entries.push(b >> 4);
            entries.push(b & 15);
        }
        entries.truncate(cells);
        members.push(Array::new(n, k, v, entries).map_err(|e| bad(&e.to_string()))?);
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(bad("trailing bytes"));
    }
    Ok(Catalogue {
        k,
        v,
        complete: flags & 1 != 0,
        oa_free: flags & 2 != 0,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn array_round_trip_keeps_duplicates() {
        let a = Array::from_rows(2, &[[0, 0], [0, 0], [1, 0]]).unwrap();
        let text = write_array(&a);
        assert_eq!(text, "cax 3 2 2\n0 0\n0 0\n1 0\n");
        assert_eq!(parse_array(&text).unwrap(), a);
    }

    #[test]
    fn sca_round_trip() {
        let x = ScaSet::new(
            3,
            2,
            vec![
                Permutation::new(vec![0, 1, 2]).unwrap(),
                Permutation::new(vec![2, 1, 0]).unwrap(),
            ],
        )
        .unwrap();
        let text = write_sca(&x);
        assert_eq!(text, "sca 2 2 3\n0 1 2\n2 1 0\n");
        assert_eq!(parse_sca(&text).unwrap(), x);
    }

    #[test]
    fn multiple_records() {
        let text = "cax 1 2 2\n0 1\n\ncax 1 2 3\n2 1\n";
        let recs = parse_records(text).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(write_records(&recs), text);
    }

    fn line_of(e: Error) -> usize {
        match e {
            Error::Parse { line, .. } => line,
            other => panic!("not a parse error: {other}"),
        }
    }

    #[test]
    fn strictness() {
        assert_eq!(line_of(parse_array("cax 2 2 2\n0 1\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_array("cax 1 2 2\n0 2\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_array("cax 1 2 2\n0 1 \n").unwrap_err()), 2);
        assert_eq!(line_of(parse_array("cax 1 2 2\n0 1\nx\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_array("cax 1 2 2\n0 1\n\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_array("cax 1 2 2\n01 1\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_array("cax one 2 2\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_sca("sca 1 2 3\n0 0 1\n").unwrap_err()), 1);
        assert!(parse_records("").is_err());
    }

    #[test]
    fn catalogue_round_trip() {
        let cat = Catalogue {
            k: 2,
            v: 2,
            oa_free: false,
            complete: true,
            members: vec![
                Array::from_rows(2, &[[0, 0], [0, 0], [0, 1], [1, 0], [1, 1], [1, 1]]).unwrap(),
            ],
        };
        let text = write_catalogue(&cat);
        assert!(text.starts_with("catalogue 2 2 1 complete full\n\ncax 6 2 2\n"));
        assert_eq!(parse_catalogue(&text).unwrap(), cat);
        let mut bytes = Vec::new();
        write_compact(&cat, &mut bytes).unwrap();
        assert_eq!(read_compact(&bytes[..]).unwrap(), cat);
        bytes.push(0);
        assert!(read_compact(&bytes[..]).is_err());
        assert!(parse_catalogue(&text.replace("1 complete", "2 complete")).is_err());
    }
}
