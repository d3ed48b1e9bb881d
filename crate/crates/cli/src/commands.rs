use std::fs;
use std::path::Path;

use gq_core::catalog::Catalog;
use gq_core::cocycle::{bicharacter_of, cohomologous, is_nondegenerate, radical, restrict};
use gq_core::freeprod::pi1_report;
use gq_core::grading::{
    is_equidimensional_induced, natural_dims, Character, GradingClassDescriptor,
};
use gq_core::group::{FiniteGroup, Subgroup, DEFAULT_ENUMERATION_BOUND};
use gq_core::io::{
    format_cocycle, format_descriptor, format_group, format_subgroup, parse_descriptor,
};
use gq_core::lagrangian::{
    ecp_lagrangian_check, iyb_witness_search, lagrangian_quotient_witness, lagrangian_scan,
    maximal_elementary_quotients, minimal_isotropic, IybOutcome, DEFAULT_IYB_BOUND,
};
use gq_core::mackey::mackey_decompose;
use gq_core::par::Exec;
use gq_core::suite::{format_report, run_suite, SuiteConfig};
use gq_core::twisted::{OracleConfig, Twist, TwistedGroupAlgebra};
use gq_core::{Error, Result};

use crate::inputs::{
    catalog_dir, load_catalog, read_file, resolve_cocycle, resolve_group, resolve_subgroup,
    resolve_twist,
};
use crate::report::{join, Report};
use crate::{CatalogAction, Cli, Command, Common, GradingAction, LagrangianAction, Target};

fn oracle(common: &Common) -> OracleConfig {
    OracleConfig {
        tol: common.tol,
        ..OracleConfig::with_seed(common.seed)
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .map_err(|e| Error::Validation(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, text)
        .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))
}

fn invariants(g: &FiniteGroup) -> String {
    match g.abelian_invariants() {
        Some(a) if a.factors.is_empty() => "C1".into(),
        Some(a) => join(a.factors.iter().map(|k| format!("C{k}")), " x "),
        None => "nonabelian".into(),
    }
}

fn sorted(mut v: Vec<usize>) -> String {
    v.sort_unstable();
    join(v, " ")
}

fn character(x: &Character) -> String {
    join(
        x.entries().map(|(e, m)| {
            if m == 1 {
                e.to_string()
            } else {
                format!("{e}^{m}")
            }
        }),
        " ",
    )
}

pub fn run(cli: &Cli) -> Result<Report> {
    let common = &cli.common;
    let mut r = Report::new();
    match &cli.command {
        Command::Group {
            group,
            normal,
            emit,
        } => {
            let cat = load_catalog()?;
            let g = resolve_group(&cat, group)?;
            group_cmd(&mut r, &g.name, &g.group, normal.as_deref())?;
            if let Some(path) = emit {
                write(path, &format_group(Some(&g.name), &g.group))?;
                r.kv("emit", path.display());
            }
        }
        Command::Cocycle {
            target,
            normal,
            against,
            emit,
        } => cocycle_cmd(
            &mut r,
            common,
            target,
            normal.as_deref(),
            against.as_deref(),
            emit.as_deref(),
        )?,
        Command::Twisted { target } => {
            let cat = load_catalog()?;
            let g = resolve_group(&cat, &target.group)?;
            let (cname, alpha) = resolve_cocycle(&cat, &g, target.cocycle.as_deref())?;
            let cfg = oracle(common);
            let w = TwistedGroupAlgebra::exact(&g.group, &alpha)?.wedderburn_blocks(&cfg)?;
            let dims = w.dims().to_vec();
            r.kv("seed", cfg.seed)
                .kv("group", &g.name)
                .kv("cocycle", cname);
            r.kv("blocks", dims.len()).kv("dims", sorted(dims.clone()));
            r.kv("attempts", w.attempts());
            r.check(
                "sum_of_squares",
                dims.iter().map(|d| d * d).sum::<usize>() == g.group.order(),
            );
        }
        Command::Grading {
            action,
            group,
            descriptor,
            other,
        } => grading_cmd(&mut r, *action, group, descriptor, other.as_deref())?,
        Command::Mackey {
            target,
            normal,
            emit,
            ..
        } => mackey_cmd(&mut r, common, target, normal, emit.as_deref())?,
        Command::Lagrangian {
            action,
            target,
            normal,
            normal_only,
        } => lagrangian_cmd(
            &mut r,
            common,
            *action,
            target,
            normal.as_deref(),
            *normal_only,
        )?,
        Command::Pi1 { n, max_len, .. } => {
            let rep = pi1_report(*n as usize, *max_len as usize)?;
            r.kv("n", rep.n).kv("pi1", &rep.result);
            for c in &rep.classes {
                r.kv("maximal_class", c);
            }
            for c in &rep.checks {
                r.raw(&c.to_string());
            }
            if !rep.all_pass() {
                r.fail();
            }
        }
        Command::Suite {
            criteria,
            sequential,
            max_order,
        } => {
            let cat = load_catalog()?;
            let cfg = SuiteConfig {
                oracle: oracle(common),
                exec: if *sequential {
                    Exec::Sequential
                } else {
                    Exec::Parallel
                },
                max_order: *max_order as usize,
                ..SuiteConfig::default()
            };
            let results = run_suite(&cat, &cfg, criteria)?;
            r.raw(&format_report(&results, &cfg));
            if results.iter().any(|c| !c.pass) {
                r.fail();
            }
        }
        Command::Catalog { action, dir } => {
            let cat = load_catalog()?;
            match action {
                CatalogAction::List => {
                    r.kv("catalog", catalog_dir().display());
                    for (name, g) in &cat.groups {
                        r.record(&[
                            ("group", name.clone()),
                            ("order", g.order().to_string()),
                            ("type", invariants(g)),
                        ]);
                    }
                    for c in &cat.cocycles {
                        r.record(&[
                            ("cocycle", c.name.clone()),
                            ("group", c.group.clone()),
                            ("scale", c.table.scale().to_string()),
                        ]);
                    }
                }
                CatalogAction::Write => {
                    let dir = dir
                        .as_deref()
                        .ok_or_else(|| Error::Validation("`catalog write` needs --dir".into()))?;
                    Catalog::builtin().write(dir).map_err(|e| {
                        Error::Validation(format!("cannot write {}: {e}", dir.display()))
                    })?;
                    r.kv("written", dir.display());
                }
            }
        }
    }
    Ok(r)
}

fn group_cmd(r: &mut Report, name: &str, g: &FiniteGroup, normal: Option<&str>) -> Result<()> {
    r.kv("group", name)
        .kv("order", g.order())
        .kv("abelian", g.is_abelian());
    r.kv("type", invariants(g)).kv("exponent", g.exponent());
    r.kv("subgroups", g.subgroups(DEFAULT_ENUMERATION_BOUND)?.len());
    r.kv(
        "normal_subgroups",
        g.normal_subgroups(DEFAULT_ENUMERATION_BOUND)?.len(),
    );
    if let Some(spec) = normal {
        let h = resolve_subgroup(g, spec)?;
        r.kv("subgroup", format_subgroup(&h))
            .kv("normal", h.is_normal(g));
        if h.is_normal(g) {
            let (q, _) = g.quotient(&h)?;
            r.kv("quotient_order", q.order())
                .kv("quotient_type", invariants(&q));
        }
    }
    Ok(())
}

fn cocycle_cmd(
    r: &mut Report,
    common: &Common,
    target: &Target,
    normal: Option<&str>,
    against: Option<&str>,
    emit: Option<&Path>,
) -> Result<()> {
    let cat = load_catalog()?;
    let g = resolve_group(&cat, &target.group)?;
    let (cname, alpha) = resolve_cocycle(&cat, &g, target.cocycle.as_deref())?;
    let cfg = oracle(common);
    r.kv("seed", cfg.seed)
        .kv("group", &g.name)
        .kv("cocycle", &cname)
        .kv("scale", alpha.scale());
    r.check("cocycle_identity", alpha.check(&g.group).is_ok());
    r.kv("nondegenerate", is_nondegenerate(&g.group, &alpha, &cfg)?);
    if g.group.is_abelian() {
        let rad = radical(&g.group, &bicharacter_of(&g.group, &alpha)?);
        r.kv("radical", format_subgroup(&rad));
    }
    if let Some(spec) = normal {
        let h = resolve_subgroup(&g.group, spec)?;
        let (hg, beta) = restrict(&g.group, &alpha, &h);
        r.kv("subgroup", format_subgroup(&h));
        r.kv(
            "restriction_trivial",
            cohomologous(&hg, &beta, &gq_core::cocycle::CocycleTable::trivial(&hg))?.holds(),
        );
        r.kv(
            "restriction_nondegenerate",
            is_nondegenerate(&hg, &beta, &cfg)?,
        );
    }
    if let Some(spec) = against {
        let (other, beta) = resolve_cocycle(&cat, &g, Some(spec))?;
        r.kv("against", other).kv(
            "cohomologous",
            cohomologous(&g.group, &alpha, &beta)?.holds(),
        );
    }
    if let Some(path) = emit {
        write(path, &format_cocycle(Some(&cname), Some(&g.name), &alpha))?;
        r.kv("emit", path.display());
    }
    Ok(())
}

fn load_descriptor(cat: &Catalog, g: &FiniteGroup, path: &Path) -> Result<GradingClassDescriptor> {
    let base = path.parent().unwrap_or(Path::new("."));
    parse_descriptor(g, &read_file(path)?, &|name, h| {
        resolve_twist(cat, base, name, h)
    })
}

fn grading_cmd(
    r: &mut Report,
    action: GradingAction,
    group: &str,
    descriptor: &Path,
    other: Option<&Path>,
) -> Result<()> {
    let cat = load_catalog()?;
    let g = resolve_group(&cat, group)?;
    let d = load_descriptor(&cat, &g.group, descriptor)?;
    r.kv("group", &g.name)
        .kv("summands", d.summands.len())
        .kv("dimension", d.dimension());
    match action {
        GradingAction::Dims => {
            let dims = d.homogeneous_dims();
            r.kv("dims", join(dims.values().iter(), " "));
            r.kv("support", join(d.support(), " "));
        }
        GradingAction::Connected => {
            r.kv("connected", d.is_connected());
        }
        GradingAction::Equidim => {
            for (i, s) in d.summands.iter().enumerate() {
                let e = is_equidimensional_induced(
                    &g.group,
                    &s.x,
                    &s.h,
                    &natural_dims(&g.group, &s.h),
                )?;
                r.record(&[
                    ("summand", i.to_string()),
                    ("equidimensional", e.equidimensional.to_string()),
                    (
                        "masses",
                        join(e.masses.iter().map(|(c, m)| format!("{c}:{m}")), " "),
                    ),
                ]);
            }
            r.kv("equidimensional", d.homogeneous_dims().is_constant());
        }
        GradingAction::Classify => {
            r.kv("connected", d.is_connected());
            r.kv("elementary", d.is_elementary());
            r.kv(
                "elementary_crossed_product",
                d.is_elementary_crossed_product(),
            );
            if let Some(path) = other {
                let e = load_descriptor(&cat, &g.group, path)?;
                r.kv("equivalent", d.equivalent(&e)?);
                r.kv(
                    "equivalent_up_to_automorphism",
                    d.equivalent_up_to_automorphism(&e, DEFAULT_ENUMERATION_BOUND * 16)?,
                );
            }
        }
    }
    Ok(())
}

fn mackey_cmd(
    r: &mut Report,
    common: &Common,
    target: &Target,
    normal: &str,
    emit: Option<&Path>,
) -> Result<()> {
    let cat = load_catalog()?;
    let g = resolve_group(&cat, &target.group)?;
    let (cname, alpha) = resolve_cocycle(&cat, &g, target.cocycle.as_deref())?;
    let n = resolve_subgroup(&g.group, normal)?;
    let cfg = oracle(common);
    let d = mackey_decompose(&g.group, &alpha, &n, &cfg)?;
    r.kv("seed", cfg.seed)
        .kv("group", &g.name)
        .kv("cocycle", cname);
    r.kv("normal", format_subgroup(&n))
        .kv("quotient_order", d.quotient.order());
    r.kv("points", d.points.len()).kv("orbits", d.orbits.len());
    for (i, o) in d.orbits.iter().enumerate() {
        r.record(&[
            ("orbit", i.to_string()),
            ("size", o.members.len().to_string()),
            ("d", o.dim.to_string()),
            ("inertia", o.inertia.order().to_string()),
            ("x", character(&o.x)),
            ("obstruction", o.obstruction.verdict()),
            ("delta", o.delta(g.group.order(), n.order()).to_string()),
        ]);
    }
    r.kv("wedderburn", sorted(d.reconstruction.wedderburn.clone()));
    r.kv(
        "reconstructed",
        sorted(d.reconstruction.reconstructed.clone()),
    );
    r.check("reconstruction", d.reconstruction.holds());
    r.check("delta_sum", d.delta_sum() == g.group.order() as u64);
    r.check(
        "quotient_equidimensional",
        d.descriptor
            .homogeneous_dims()
            .values()
            .iter()
            .all(|&v| v == n.order() as u64),
    );
    r.kv("ecp", d.descriptor.is_elementary_crossed_product());
    r.kv("elementary_quotient", d.is_elementary_quotient()?);
    r.kv("simple_quotient", d.is_simple_quotient()?);
    if let Some(dir) = emit {
        emit_descriptor(r, &d.quotient, &d.descriptor, dir)?;
    }
    Ok(())
}

fn emit_descriptor(
    r: &mut Report,
    q: &FiniteGroup,
    d: &GradingClassDescriptor,
    dir: &Path,
) -> Result<()> {
    let name_twist = |i: usize| format!("twist{i}.coc");
    let text = match format_descriptor(d, &name_twist) {
        Ok(t) => t,
        Err(e) => {
            r.kv("emit", format!("unavailable, {e}"));
            return Ok(());
        }
    };
    write(
        &dir.join("quotient.grp"),
        &format_group(Some("quotient"), q),
    )?;
    write(&dir.join("descriptor.txt"), &text)?;
    for (i, s) in d.summands.iter().enumerate() {
        if let Twist::Exact(t) = &s.twist {
            if !t.is_zero() {
                write(
                    &dir.join(name_twist(i)),
                    &format_cocycle(Some(&name_twist(i)), None, t),
                )?;
            }
        }
    }
    r.kv("emit", dir.display());
    Ok(())
}

fn witness_lines(r: &mut Report, outcome: &IybOutcome, q: &FiniteGroup) {
    match outcome {
        IybOutcome::Witness(w) => {
            r.kv(
                "module",
                join(w.module.iter().map(|k| format!("C{k}")), " x "),
            );
            r.kv("delta", join(&w.delta, " "));
            r.check("witness_verified", w.verify(q));
        }
        IybOutcome::Exhausted { modules, actions } => {
            r.record(&[
                ("witness", "inconclusive".into()),
                ("modules", modules.to_string()),
                ("actions", actions.to_string()),
            ]);
        }
    }
}

fn lagrangian_cmd(
    r: &mut Report,
    common: &Common,
    action: LagrangianAction,
    target: &Target,
    normal: Option<&str>,
    normal_only: bool,
) -> Result<()> {
    let cat = load_catalog()?;
    let g = resolve_group(&cat, &target.group)?;
    let (cname, alpha) = resolve_cocycle(&cat, &g, target.cocycle.as_deref())?;
    let cfg = oracle(common);
    r.kv("seed", cfg.seed)
        .kv("group", &g.name)
        .kv("cocycle", cname);
    let need_normal = || -> Result<Subgroup> {
        let spec = normal.ok_or_else(|| Error::Validation("this action needs --normal".into()))?;
        resolve_subgroup(&g.group, spec)
    };
    match action {
        LagrangianAction::Scan => {
            let found = lagrangian_scan(&g.group, &alpha, normal_only, &cfg)?;
            r.kv("lagrangians", found.len());
            for l in &found {
                r.record(&[
                    ("lagrangian", format_subgroup(&l.subgroup)),
                    ("normal", l.normal.to_string()),
                ]);
            }
        }
        LagrangianAction::Ecp => {
            let n = need_normal()?;
            let c = ecp_lagrangian_check(&g.group, &alpha, &n, &cfg)?;
            r.kv("normal", format_subgroup(&n));
            r.kv("isotropic", c.report.isotropy.isotropic)
                .kv("lagrangian", c.report.is_lagrangian(true));
            r.kv(
                "ecp",
                c.decomposition.descriptor.is_elementary_crossed_product(),
            );
            r.kv("verdict", c.verdict);
        }
        LagrangianAction::Maximal => {
            let d = maximal_elementary_quotients(&g.group, &alpha, &cfg)?;
            r.kv("elementary_quotients", d.elementary.len())
                .kv("maximal", d.maximal.len());
            for q in &d.maximal {
                r.record(&[
                    ("maximal_normal", format_subgroup(&q.normal)),
                    ("quotient", invariants(&q.quotient)),
                ]);
            }
            r.kv("unique", d.unique)
                .kv("square_free_exponent", d.square_free_exponent);
            r.check(
                "uniqueness_matches_exponent",
                d.unique == d.square_free_exponent,
            );
        }
        LagrangianAction::Iyb => match normal {
            Some(_) => {
                let n = need_normal()?;
                let (q, _) = g.group.quotient(&n)?;
                r.kv("normal", format_subgroup(&n))
                    .kv("quotient_order", q.order());
                let outcome = lagrangian_quotient_witness(&g.group, &alpha, &n, &cfg)?;
                witness_lines(r, &outcome, &q);
            }
            None => {
                let outcome = iyb_witness_search(&g.group, DEFAULT_IYB_BOUND.max(g.group.order()))?;
                witness_lines(r, &outcome, &g.group);
            }
        },
        LagrangianAction::Minimal => {
            let h = minimal_isotropic(&g.group, &alpha, &cfg)?;
            r.kv("minimal_isotropic", format_subgroup(&h))
                .kv("index", h.index());
        }
    }
    Ok(())
}
