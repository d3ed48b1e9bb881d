//! The built-in catalog of small groups and cocycles, and its on-disk form:
//! `groups/<name>.grp` and `cocycles/<name>.coc` under one directory.

use std::fs;
use std::path::Path;

use crate::cocycle::{inflate, mixed_radix, standard_nondegenerate, CocycleTable};
use crate::error::{Error, Result};
use crate::group::{are_isomorphic, FiniteGroup, GroupHom, DEFAULT_ENUMERATION_BOUND};
use crate::io::{format_cocycle, format_group, parse_cocycle, parse_group};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogCocycle {
    pub name: String,
    pub group: String,
    pub table: CocycleTable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub groups: Vec<(String, FiniteGroup)>,
    pub cocycles: Vec<CatalogCocycle>,
}

/// Bases `B` of the standard cocycles on `B x B`, with the group name.
const STANDARD: [(&[usize], &str); 6] = [
    (&[2], "c2xc2"),
    (&[3], "c3xc3"),
    (&[4], "c4xc4"),
    (&[2, 2], "c2xc2xc2xc2"),
    (&[5], "c5xc5"),
    (&[6], "c6xc6"),
];

fn product(factors: &[usize]) -> FiniteGroup {
    factors
        .iter()
        .map(|&n| FiniteGroup::cyclic(n))
        .reduce(|a, b| FiniteGroup::direct_product(&a, &b))
        .unwrap_or_else(FiniteGroup::trivial)
}

/// `x_0 y_1 mod gcd(n_0, n_1)` on `C_{n_0} x C_{n_1} x ...`, a bilinear
/// cocycle whose class is non-trivial when the gcd exceeds 1.
fn bilinear(factors: &[usize]) -> CocycleTable {
    let m = crate::group::gcd(factors[0], factors[1]);
    let order = factors.iter().product();
    CocycleTable::from_fn(order, m as u64, |x, y| {
        (mixed_radix(x, factors)[0] * mixed_radix(y, factors)[1]) as u64
    })
}

/// Inflation of a cocycle on `C2 x C2` along some surjection from `g`.
fn inflate_klein(
    g: &FiniteGroup,
    klein: &FiniteGroup,
    beta: &CocycleTable,
) -> Result<CocycleTable> {
    for n in g.normal_subgroups(DEFAULT_ENUMERATION_BOUND)? {
        if n.index() != 4 {
            continue;
        }
        let (q, proj) = g.quotient(&n)?;
        if let Some(iso) = are_isomorphic(&q, klein, DEFAULT_ENUMERATION_BOUND)?.hom() {
            let images = (0..g.order()).map(|x| iso.apply(proj.apply(x))).collect();
            let composite = GroupHom::new(g, klein, images)?;
            return Ok(inflate(beta, &composite));
        }
    }
    Err(Error::Domain("no quotient isomorphic to C2 x C2".into()))
}

impl Catalog {
    pub fn builtin() -> Self {
        let mut groups: Vec<(String, FiniteGroup)> = Vec::new();
        for n in [1, 2, 3, 4, 5, 6, 7, 8] {
            groups.push((format!("c{n}"), FiniteGroup::cyclic(n)));
        }
        groups.push(("c2xc4".into(), product(&[2, 4])));
        groups.push(("c2xc2xc2".into(), product(&[2, 2, 2])));
        groups.push(("c2xc6".into(), product(&[2, 6])));
        for n in [3, 4, 5, 6, 7, 8] {
            groups.push((format!("d{n}"), FiniteGroup::dihedral(n)));
        }
        groups.push((
            "s3".into(),
            FiniteGroup::symmetric(3).expect("small degree"),
        ));
        groups.push((
            "s4".into(),
            FiniteGroup::symmetric(4).expect("small degree"),
        ));
        groups.push(("q8".into(), FiniteGroup::quaternion8()));
        let mut cocycles = Vec::new();
        for (base, name) in STANDARD {
            let (g, alpha) = standard_nondegenerate(base).expect("valid invariants");
            groups.push((name.into(), g));
            cocycles.push(CatalogCocycle {
                name: format!("{name}_std"),
                group: name.into(),
                table: alpha,
            });
        }
        for (name, factors) in [
            ("c2xc4", &[2, 4][..]),
            ("c2xc6", &[2, 6]),
            ("c2xc2xc2", &[2, 2, 2]),
        ] {
            cocycles.push(CatalogCocycle {
                name: format!("{name}_bil"),
                group: name.into(),
                table: bilinear(factors),
            });
        }
        let (klein, beta) = standard_nondegenerate(&[2]).expect("valid invariants");
        for name in ["d4", "q8", "c2xc2xc2"] {
            let g = &groups
                .iter()
                .find(|(n, _)| n == name)
                .expect("listed above")
                .1;
            let table = inflate_klein(g, &klein, &beta).expect("each has a Klein quotient");
            cocycles.push(CatalogCocycle {
                name: format!("{name}_klein"),
                group: name.into(),
                table,
            });
        }
        groups.sort_by(|a, b| a.1.order().cmp(&b.1.order()).then_with(|| a.0.cmp(&b.0)));
        cocycles.sort_by(|a, b| a.name.cmp(&b.name));
        Self { groups, cocycles }
    }

    pub fn group(&self, name: &str) -> Option<&FiniteGroup> {
        self.groups.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn cocycle(&self, name: &str) -> Option<&CatalogCocycle> {
        self.cocycles.iter().find(|c| c.name == name)
    }

    /// The trivial cocycle first, then the named ones on this group.
    pub fn cocycles_on(&self, group: &str) -> Vec<(String, CocycleTable)> {
        let Some(g) = self.group(group) else {
            return Vec::new();
        };
        let mut out = vec![(format!("{group}_trivial"), CocycleTable::trivial(g))];
        out.extend(
            self.cocycles
                .iter()
                .filter(|c| c.group == group)
                .map(|c| (c.name.clone(), c.table.clone())),
        );
        out
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let read_dir = |sub: &str| -> Result<Vec<(String, String)>> {
            let path = dir.join(sub);
            let mut out = Vec::new();
            let entries = fs::read_dir(&path)
                .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
            for entry in entries {
                let p = entry.map_err(|e| Error::Validation(e.to_string()))?.path();
                let text = fs::read_to_string(&p)
                    .map_err(|e| Error::Validation(format!("cannot read {}: {e}", p.display())))?;
                let stem = p
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or_default()
                    .to_string();
                out.push((stem, text));
            }
            out.sort();
            Ok(out)
        };
        let mut groups = Vec::new();
        for (stem, text) in read_dir("groups")? {
            let (name, g) = parse_group(&text)?;
            groups.push((name.unwrap_or(stem), g));
        }
        groups.sort_by(|a, b| a.1.order().cmp(&b.1.order()).then_with(|| a.0.cmp(&b.0)));
        let mut cat = Self {
            groups,
            cocycles: Vec::new(),
        };
        for (stem, text) in read_dir("cocycles")? {
            let group = text
                .lines()
                .find_map(|l| l.trim().strip_prefix("group:"))
                .map(|s| s.trim().to_string())
                .ok_or_else(|| Error::Validation(format!("cocycle {stem} names no group")))?;
            let g = cat.group(&group).ok_or_else(|| {
                Error::Validation(format!("cocycle {stem} refers to unknown group {group}"))
            })?;
            let c = parse_cocycle(&text, g)?;
            cat.cocycles.push(CatalogCocycle {
                name: c.name.unwrap_or(stem),
                group,
                table: c.table,
            });
        }
        cat.cocycles.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(cat)
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir.join("groups"))?;
        fs::create_dir_all(dir.join("cocycles"))?;
        for (name, g) in &self.groups {
            fs::write(
                dir.join("groups").join(format!("{name}.grp")),
                format_group(Some(name), g),
            )?;
        }
        for c in &self.cocycles {
            fs::write(
                dir.join("cocycles").join(format!("{}.coc", c.name)),
                format_cocycle(Some(&c.name), Some(&c.group), &c.table),
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{cohomologous, is_nondegenerate};
    use crate::twisted::OracleConfig;

    #[test]
    fn builtin_contents() {
        let c = Catalog::builtin();
        assert_eq!(c.groups.len(), 26);
        assert_eq!(c.group("s4").unwrap().order(), 24);
        assert_eq!(c.group("c6xc6").unwrap().order(), 36);
        assert_eq!(c.cocycles.len(), 12);
        for cc in &c.cocycles {
            cc.table.check(c.group(&cc.group).unwrap()).unwrap();
        }
    }

    #[test]
    fn standard_cocycles_are_nondegenerate() {
        let c = Catalog::builtin();
        let cfg = OracleConfig::default();
        for name in ["c2xc2_std", "c3xc3_std", "c4xc4_std"] {
            let cc = c.cocycle(name).unwrap();
            assert!(is_nondegenerate(c.group(&cc.group).unwrap(), &cc.table, &cfg).unwrap());
        }
    }

    #[test]
    fn degenerate_cocycle_classes() {
        let c = Catalog::builtin();
        let cfg = OracleConfig::default();
        // d4 and q8 are Schur covers of the Klein group, so inflation kills the class there
        for (name, trivial) in [
            ("d4_klein", true),
            ("q8_klein", true),
            ("c2xc2xc2_klein", false),
            ("c2xc4_bil", false),
            ("c2xc6_bil", false),
            ("c2xc2xc2_bil", false),
        ] {
            let cc = c.cocycle(name).unwrap();
            let g = c.group(&cc.group).unwrap();
            assert!(cc.table.check(g).is_ok(), "{name}");
            assert!(!cc.table.is_zero(), "{name}");
            assert!(!is_nondegenerate(g, &cc.table, &cfg).unwrap(), "{name}");
            let zero = CocycleTable::trivial(g);
            assert_eq!(
                cohomologous(g, &cc.table, &zero).unwrap().holds(),
                trivial,
                "{name}"
            );
        }
    }

    #[test]
    fn disk_round_trip() {
        let dir = std::env::temp_dir().join(format!("gq-catalog-{}", std::process::id()));
        let c = Catalog::builtin();
        c.write(&dir).unwrap();
        let back = Catalog::load(&dir).unwrap();
        std::fs::remove_dir_all(&dir).unwrap();
        assert_eq!(back, c);
    }
}
