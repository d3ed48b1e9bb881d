//! Resolution of `--group`, `--cocycle` and `--normal` against files and the catalog.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use gq_core::catalog::Catalog;
use gq_core::cocycle::CocycleTable;
use gq_core::group::{FiniteGroup, Subgroup};
use gq_core::io::{parse_cocycle, parse_group, parse_subgroup};
use gq_core::{Error, Result};

pub const CATALOG_ENV: &str = "GQ_CATALOG_DIR";

pub fn catalog_dir() -> PathBuf {
    env::var_os(CATALOG_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("catalog"))
}

/// The on-disk catalog; the built-in one when the default location is absent.
pub fn load_catalog() -> Result<Catalog> {
    let dir = catalog_dir();
    if env::var_os(CATALOG_ENV).is_none() && !dir.is_dir() {
        return Ok(Catalog::builtin());
    }
    Catalog::load(&dir)
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))
}

/// Named group: a catalog entry or a group file.
pub struct NamedGroup {
    pub name: String,
    pub group: FiniteGroup,
}

pub fn resolve_group(catalog: &Catalog, spec: &str) -> Result<NamedGroup> {
    if let Some(g) = catalog.group(spec) {
        return Ok(NamedGroup {
            name: spec.into(),
            group: g.clone(),
        });
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(Error::Validation(format!(
            "`{spec}` is neither a catalog group nor a file"
        )));
    }
    let (name, group) = parse_group(&read_file(path)?).map_err(|e| in_file(path, e))?;
    Ok(NamedGroup {
        name: name.unwrap_or_else(|| spec.into()),
        group,
    })
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    }
}

/// `trivial`, a catalog cocycle on this group, or a cocycle file.
pub fn resolve_cocycle(
    catalog: &Catalog,
    g: &NamedGroup,
    spec: Option<&str>,
) -> Result<(String, CocycleTable)> {
    let spec = spec.unwrap_or("trivial");
    if spec == "trivial" {
        return Ok(("trivial".into(), CocycleTable::trivial(&g.group)));
    }
    if let Some(c) = catalog.cocycle(spec) {
        c.table.check(&g.group).map_err(|e| {
            Error::Validation(format!("cocycle {spec} does not fit group {}: {e}", g.name))
        })?;
        return Ok((spec.into(), c.table.clone()));
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(Error::Validation(format!(
            "`{spec}` is neither a catalog cocycle nor a file"
        )));
    }
    let c = parse_cocycle(&read_file(path)?, &g.group).map_err(|e| in_file(path, e))?;
    Ok((c.name.unwrap_or_else(|| spec.into()), c.table))
}

/// `trivial`, `whole`, or an element list.
pub fn resolve_subgroup(g: &FiniteGroup, spec: &str) -> Result<Subgroup> {
    match spec {
        "trivial" => Ok(g.trivial_subgroup()),
        "whole" => Ok(g.whole()),
        s => parse_subgroup(g, s),
    }
}

/// A cocycle named in a descriptor: a file next to the descriptor, else a catalog cocycle.
pub fn resolve_twist(
    catalog: &Catalog,
    base: &Path,
    name: &str,
    h: &FiniteGroup,
) -> Result<CocycleTable> {
    let path = base.join(name);
    if path.is_file() {
        return Ok(parse_cocycle(&read_file(&path)?, h)
            .map_err(|e| in_file(&path, e))?
            .table);
    }
    let c = catalog.cocycle(name).ok_or_else(|| {
        Error::Validation(format!(
            "twist `{name}` is neither a file nor a catalog cocycle"
        ))
    })?;
    c.table.check(h)?;
    Ok(c.table.clone())
}
