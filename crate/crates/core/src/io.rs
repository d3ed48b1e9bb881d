//! Line-oriented text formats for groups, cocycles, subgroups and grading
//! descriptors.
//!
//! Group file:
//! ```text
//! name: c3
//! order: 3
//! labels: e g g^2
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! ```
//! Cocycle file: `name`, `group`, `order`, `scale` headers, then the table of
//! exponents. Descriptor file: one summand per line,
//! `x: elem^mult ... | H: elem ... | alpha: FILE|trivial`.
//! Blank lines and lines starting with `#` are ignored everywhere.

use std::fmt::Write as _;

use crate::cocycle::CocycleTable;
use crate::error::{Error, Result};
use crate::grading::{Character, GradingClassDescriptor, SummandDescriptor};
use crate::group::{FiniteGroup, Subgroup};
use crate::twisted::Twist;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Numbered content lines.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

struct Parsed<'a> {
    headers: Vec<(usize, &'a str, &'a str)>,
    rows: Vec<(usize, &'a str)>,
}

fn split_headers(text: &str) -> Parsed<'_> {
    let mut headers = Vec::new();
    let mut rows = Vec::new();
    for (n, l) in lines(text) {
        match l.split_once(':') {
            Some((k, v)) if rows.is_empty() && k.chars().all(|c| c.is_ascii_alphabetic()) => {
                headers.push((n, k.trim(), v.trim()))
            }
            _ => rows.push((n, l)),
        }
    }
    Parsed { headers, rows }
}

impl Parsed<'_> {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.headers.iter().find(|h| h.1 == key).map(|h| (h.0, h.2))
    }

    fn require(&self, key: &str) -> Result<(usize, &str)> {
        self.get(key)
            .ok_or_else(|| parse_err(1, format!("missing `{key}:` header")))
    }

    fn number<T: std::str::FromStr>(&self, key: &str) -> Result<(usize, T)> {
        let (n, v) = self.require(key)?;
        v.parse()
            .map(|x| (n, x))
            .map_err(|_| parse_err(n, format!("`{key}` is not a number: {v}")))
    }

    fn table<T: std::str::FromStr>(&self, size: usize) -> Result<Vec<Vec<T>>> {
        if self.rows.len() != size {
            let line = self.rows.get(size).or(self.rows.last()).map_or(1, |r| r.0);
            return Err(parse_err(
                line,
                format!("expected {size} table rows, found {}", self.rows.len()),
            ));
        }
        self.rows
            .iter()
            .map(|&(n, row)| {
                let vals: Vec<T> = row
                    .split_whitespace()
                    .map(|t| {
                        t.parse()
                            .map_err(|_| parse_err(n, format!("bad entry `{t}`")))
                    })
                    .collect::<Result<_>>()?;
                if vals.len() != size {
                    return Err(parse_err(
                        n,
                        format!("expected {size} entries, found {}", vals.len()),
                    ));
                }
                Ok(vals)
            })
            .collect()
    }
}

/// Reads a group; returns its name when the file has one.
pub fn parse_group(text: &str) -> Result<(Option<String>, FiniteGroup)> {
    let p = split_headers(text);
    let (n_line, order) = p.number::<usize>("order")?;
    if order == 0 {
        return Err(parse_err(n_line, "order must be positive"));
    }
    let table = p.table::<usize>(order)?;
    for (r, &(n, _)) in table.iter().zip(&p.rows) {
        let mut seen = vec![false; order];
        for &v in r {
            if v >= order || std::mem::replace(&mut seen[v], true) {
                return Err(parse_err(
                    n,
                    format!("row is not a permutation of 0..{order}"),
                ));
            }
        }
    }
    let mut g = FiniteGroup::from_table(table).map_err(|e| match e {
        Error::Validation(msg) => parse_err(p.rows[0].0, msg),
        other => other,
    })?;
    if let Some((n, labels)) = p.get("labels") {
        let labels: Vec<String> = labels.split_whitespace().map(String::from).collect();
        g = g
            .with_labels(labels)
            .map_err(|e| parse_err(n, e.to_string()))?;
    }
    Ok((p.get("name").map(|v| v.1.to_string()), g))
}

pub fn format_group(name: Option<&str>, g: &FiniteGroup) -> String {
    let mut s = String::new();
    if let Some(n) = name {
        writeln!(s, "name: {n}").unwrap();
    }
    writeln!(s, "order: {}", g.order()).unwrap();
    if let Some(l) = g.labels() {
        writeln!(s, "labels: {}", l.join(" ")).unwrap();
    }
    for row in g.table() {
        writeln!(s, "{}", join(&row)).unwrap();
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleFile {
    pub name: Option<String>,
    pub group: Option<String>,
    pub table: CocycleTable,
}

/// Reads a cocycle and checks it against `g`.
pub fn parse_cocycle(text: &str, g: &FiniteGroup) -> Result<CocycleFile> {
    let p = split_headers(text);
    let (n_line, order) = p.number::<usize>("order")?;
    if order != g.order() {
        return Err(parse_err(
            n_line,
            format!("order {order} does not match the group order {}", g.order()),
        ));
    }
    let (m_line, m) = p.number::<u64>("scale")?;
    if m == 0 {
        return Err(parse_err(m_line, "scale must be positive"));
    }
    let rows = p.table::<u64>(order)?;
    let table = CocycleTable::new(g, m, rows)?;
    Ok(CocycleFile {
        name: p.get("name").map(|v| v.1.to_string()),
        group: p.get("group").map(|v| v.1.to_string()),
        table,
    })
}

pub fn format_cocycle(name: Option<&str>, group: Option<&str>, t: &CocycleTable) -> String {
    let mut s = String::new();
    if let Some(n) = name {
        writeln!(s, "name: {n}").unwrap();
    }
    if let Some(gn) = group {
        writeln!(s, "group: {gn}").unwrap();
    }
    writeln!(s, "order: {}", t.group_order()).unwrap();
    writeln!(s, "scale: {}", t.scale()).unwrap();
    for row in t.rows() {
        writeln!(s, "{}", join(&row)).unwrap();
    }
    s
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Element by index or label.
pub fn parse_element(g: &FiniteGroup, token: &str) -> Result<usize> {
    if let Ok(i) = token.parse::<usize>() {
        if i < g.order() {
            return Ok(i);
        }
        return Err(Error::Validation(format!(
            "element {i} outside a group of order {}",
            g.order()
        )));
    }
    g.labels()
        .and_then(|l| l.iter().position(|x| x == token))
        .ok_or_else(|| Error::Validation(format!("unknown element `{token}`")))
}

/// Comma or space separated elements forming a subgroup.
pub fn parse_subgroup(g: &FiniteGroup, spec: &str) -> Result<Subgroup> {
    let mut elems: Vec<usize> = spec
        .split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| parse_element(g, t.trim()))
        .collect::<Result<_>>()?;
    if !elems.contains(&0) {
        elems.push(0);
    }
    g.subgroup(&elems)
}

pub fn format_subgroup(h: &Subgroup) -> String {
    h.elements()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Reads a descriptor over `g`; `resolve` loads the cocycle named by an
/// `alpha:` field other than `trivial`, on the subgroup given as a group.
pub fn parse_descriptor(
    g: &FiniteGroup,
    text: &str,
    resolve: &dyn Fn(&str, &FiniteGroup) -> Result<CocycleTable>,
) -> Result<GradingClassDescriptor> {
    let mut summands = Vec::new();
    for (n, l) in lines(text) {
        let wrap = |e: Error| match e {
            Error::Parse { .. } => e,
            other => parse_err(n, other.to_string()),
        };
        let mut x = None;
        let mut h = None;
        let mut alpha = None;
        for part in l.split('|') {
            let (k, v) = part
                .split_once(':')
                .ok_or_else(|| parse_err(n, format!("field without a key: `{}`", part.trim())))?;
            match k.trim() {
                "x" => x = Some(v.trim()),
                "H" => h = Some(v.trim()),
                "alpha" => alpha = Some(v.trim()),
                other => return Err(parse_err(n, format!("unknown field `{other}`"))),
            }
        }
        let x = x.ok_or_else(|| parse_err(n, "missing `x` field"))?;
        let mut entries = Vec::new();
        for tok in x.split_whitespace() {
            let (e, m) = match tok.split_once('^') {
                Some((e, m)) => (
                    e,
                    m.parse::<u64>()
                        .map_err(|_| parse_err(n, format!("bad multiplicity in `{tok}`")))?,
                ),
                None => (tok, 1),
            };
            entries.push((parse_element(g, e).map_err(wrap)?, m));
        }
        let x = Character::new(g, &entries).map_err(wrap)?;
        let h = match h {
            Some(s) => parse_subgroup(g, s).map_err(wrap)?,
            None => g.trivial_subgroup(),
        };
        let (hg, _) = h.as_group(g);
        let twist = match alpha.unwrap_or("trivial") {
            "trivial" => CocycleTable::trivial(&hg),
            other => resolve(other, &hg).map_err(wrap)?,
        };
        summands.push(SummandDescriptor::new(g, x, h, Twist::Exact(twist)).map_err(wrap)?);
    }
    if summands.is_empty() {
        return Err(parse_err(1, "no summands"));
    }
    GradingClassDescriptor::new(g.clone(), summands)
}

/// Writes a descriptor; `name_twist` names the file holding a non-zero exact
/// twist of the `i`-th summand. Numeric twists cannot be written.
pub fn format_descriptor(
    d: &GradingClassDescriptor,
    name_twist: &dyn Fn(usize) -> String,
) -> Result<String> {
    let mut s = String::new();
    for (i, sm) in d.summands.iter().enumerate() {
        let x: Vec<String> =
            sm.x.entries()
                .map(|(e, m)| {
                    if m == 1 {
                        e.to_string()
                    } else {
                        format!("{e}^{m}")
                    }
                })
                .collect();
        let alpha = match &sm.twist {
            Twist::Exact(t) if t.is_zero() => "trivial".to_string(),
            Twist::Exact(_) => name_twist(i),
            Twist::Numeric(_) => {
                return Err(Error::Domain("numeric twists have no file form".into()))
            }
        };
        writeln!(
            s,
            "x: {} | H: {} | alpha: {alpha}",
            x.join(" "),
            format_subgroup(&sm.h)
        )
        .unwrap();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::standard_nondegenerate;

    #[test]
    fn group_round_trip() {
        let g = FiniteGroup::dihedral(4);
        let text = format_group(Some("d4"), &g);
        let (name, back) = parse_group(&text).unwrap();
        assert_eq!(name.as_deref(), Some("d4"));
        assert_eq!(back.table(), g.table());
        let labelled = FiniteGroup::cyclic(2)
            .with_labels(vec!["e".into(), "a".into()])
            .unwrap();
        let (_, back) = parse_group(&format_group(None, &labelled)).unwrap();
        assert_eq!(back.label(1), "a");
    }

    #[test]
    fn malformed_group_names_the_line() {
        let text = "order: 2\n0 1\n1 1\n";
        match parse_group(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let text = "order: 2\n0 1\n1 x\n";
        match parse_group(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_group("0 1\n1 0\n"),
            Err(Error::Parse { .. })
        ));
        let text = "order: 2\n0 1\n";
        assert!(matches!(parse_group(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn cocycle_round_trip() {
        let (g, a) = standard_nondegenerate(&[3]).unwrap();
        let text = format_cocycle(Some("std"), Some("c3xc3"), &a);
        let back = parse_cocycle(&text, &g).unwrap();
        assert_eq!(back.table, a);
        assert_eq!(back.group.as_deref(), Some("c3xc3"));
        assert!(parse_cocycle(&text, &FiniteGroup::cyclic(3)).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let (g, a) = standard_nondegenerate(&[2]).unwrap();
        let text = "x: 0^2 1 | H: 0 | alpha: trivial\nx: 0 | H: 0,1,2,3 | alpha: std\n";
        let resolve = |name: &str, hg: &FiniteGroup| -> Result<CocycleTable> {
            assert_eq!(name, "std");
            assert_eq!(hg.order(), 4);
            Ok(a.clone())
        };
        let d = parse_descriptor(&g, text, &resolve).unwrap();
        assert_eq!(d.summands.len(), 2);
        assert_eq!(d.dimension(), 9 + 4);
        let out = format_descriptor(&d, &|_| "std".into()).unwrap();
        let again = parse_descriptor(&g, &out, &resolve).unwrap();
        assert!(d.equivalent(&again).unwrap());
        assert_eq!(out, format_descriptor(&again, &|_| "std".into()).unwrap());
    }

    #[test]
    fn subgroup_parsing() {
        let g = FiniteGroup::cyclic(4);
        assert_eq!(parse_subgroup(&g, "0,2").unwrap().order(), 2);
        assert_eq!(parse_subgroup(&g, "2").unwrap().order(), 2);
        assert!(parse_subgroup(&g, "1").is_err());
        assert!(parse_subgroup(&g, "9").is_err());
    }
}
