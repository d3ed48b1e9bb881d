//! The acceptance battery over the built-in catalog. Reports are line
//! records with no timings, so two runs with one configuration are
//! byte-identical.

use std::fmt;

use crate::catalog::Catalog;
use crate::cocycle::{is_nondegenerate, restrict, CocycleTable};
use crate::error::{Error, Result};
use crate::freeprod::{
    generation_check, maximal_gradings_diagonal, verify_presentation_h4, verify_presentation_h5,
    Check,
};
use crate::grading::{is_equidimensional_induced, natural_dims};
use crate::group::{
    is_cube_free, is_square_free, FiniteGroup, Subgroup, DEFAULT_ENUMERATION_BOUND,
};
use crate::lagrangian::{
    ecp_lagrangian_check, lagrangian_quotient_witness, lagrangian_scan,
    maximal_elementary_quotients, IybOutcome,
};
use crate::mackey::{mackey_decompose_with, MackeyDecomposition};
use crate::par::{map, Exec};
use crate::twisted::OracleConfig;

pub const CRITERIA: [(usize, &str); 10] = [
    (1, "reconstruction"),
    (2, "quotient_equidimensional"),
    (3, "lagrangian_biconditional"),
    (4, "maximal_elementary_quotients"),
    (5, "simple_restriction"),
    (6, "cube_free_law"),
    (7, "presentation_h4"),
    (8, "presentation_h5"),
    (9, "diagonal_maxima"),
    (10, "iyb_witnesses"),
];

/// Catalog groups carrying the standard non-degenerate cocycles.
pub const CT_GROUPS: [&str; 6] = ["c2xc2", "c3xc3", "c4xc4", "c2xc2xc2xc2", "c5xc5", "c6xc6"];

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub oracle: OracleConfig,
    pub exec: Exec,
    /// Largest group order in the reconstruction sweep.
    pub max_order: usize,
    /// Free-part syllable bound for rewriting in dimension 4.
    pub len_h4: usize,
    /// Free-part syllable bound for rewriting in dimension 5.
    pub len_h5: usize,
    /// Radius for the relation and kernel searches.
    pub presentation_len: usize,
    /// Largest quotient order handed to the witness search.
    pub max_quotient: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            oracle: OracleConfig::default(),
            exec: Exec::Parallel,
            max_order: 24,
            len_h4: 6,
            len_h5: 4,
            presentation_len: 8,
            max_quotient: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub summary: String,
    pub details: Vec<String>,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "criterion: {}, name: {}, status: {}, summary: {}",
            self.id,
            self.name,
            if self.pass { "pass" } else { "fail" },
            self.summary
        )?;
        for d in &self.details {
            writeln!(f, "detail: {}, {}", self.id, d)?;
        }
        Ok(())
    }
}

fn result(id: usize, pass: bool, summary: String, details: Vec<String>) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown");
    CriterionResult {
        id,
        name,
        pass,
        summary,
        details,
    }
}

fn subgroup_label(n: &Subgroup) -> String {
    let parts: Vec<String> = n.elements().iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// One decomposition of the reconstruction sweep.
pub struct SweepCase {
    pub group: String,
    pub cocycle: String,
    pub normal: Subgroup,
    pub outcome: std::result::Result<MackeyDecomposition, String>,
}

/// Every catalog group up to `max_order`, every cocycle on it, every normal subgroup.
pub fn reconstruction_sweep(catalog: &Catalog, cfg: &SuiteConfig) -> Result<Vec<SweepCase>> {
    let mut jobs: Vec<(String, FiniteGroup, String, CocycleTable, Subgroup)> = Vec::new();
    for (name, g) in catalog
        .groups
        .iter()
        .filter(|(_, g)| g.order() <= cfg.max_order)
    {
        let normals = g.normal_subgroups(DEFAULT_ENUMERATION_BOUND)?;
        for (cname, alpha) in catalog.cocycles_on(name) {
            for n in &normals {
                jobs.push((
                    name.clone(),
                    g.clone(),
                    cname.clone(),
                    alpha.clone(),
                    n.clone(),
                ));
            }
        }
    }
    // each decomposition is itself data-parallel, so the jobs run in order
    Ok(jobs
        .into_iter()
        .map(|(group, g, cocycle, alpha, normal)| {
            let outcome = mackey_decompose_with(cfg.exec, &g, &alpha, &normal, &cfg.oracle)
                .map_err(|e| e.to_string());
            SweepCase {
                group,
                cocycle,
                normal,
                outcome,
            }
        })
        .collect())
}

pub fn criterion_reconstruction(sweep: &[SweepCase]) -> CriterionResult {
    let mut details = Vec::new();
    let mut ok = 0;
    for c in sweep {
        let problem = match &c.outcome {
            Err(e) => Some(format!("error {e}")),
            Ok(d) => {
                let order = d.group.order() as u64;
                if !d.reconstruction.holds() {
                    Some(format!(
                        "oracle {:?} but reconstructed {:?}",
                        d.reconstruction.wedderburn, d.reconstruction.reconstructed
                    ))
                } else if d.delta_sum() != order {
                    Some(format!("delta sum {} but |G| = {order}", d.delta_sum()))
                } else {
                    None
                }
            }
        };
        match problem {
            None => ok += 1,
            Some(p) => details.push(format!(
                "group: {}, cocycle: {}, normal: {}, {p}",
                c.group,
                c.cocycle,
                subgroup_label(&c.normal)
            )),
        }
    }
    let pass = ok == sweep.len();
    let groups: std::collections::BTreeSet<&str> = sweep.iter().map(|c| c.group.as_str()).collect();
    let summary = format!("{ok}/{} cases over {} groups", sweep.len(), groups.len());
    result(1, pass, summary, details)
}

fn quotient_problems(d: &MackeyDecomposition) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let n = d.normal.order() as u64;
    let dims = d.descriptor.homogeneous_dims();
    if dims.values().len() != d.quotient.order() || dims.values().iter().any(|&v| v != n) {
        out.push(format!(
            "homogeneous dimensions {:?} but |N| = {n}",
            dims.values()
        ));
    }
    for (i, s) in d.descriptor.summands.iter().enumerate() {
        let base = natural_dims(&d.quotient, &s.h);
        let r = is_equidimensional_induced(&d.quotient, &s.x, &s.h, &base)?;
        if !r.equidimensional {
            out.push(format!("summand {i} has coset masses {:?}", r.masses));
        }
    }
    Ok(out)
}

pub fn criterion_quotient(sweep: &[SweepCase]) -> CriterionResult {
    let mut details = Vec::new();
    let mut ok = 0;
    let mut summands = 0;
    for c in sweep {
        let problems = match &c.outcome {
            Err(e) => vec![format!("error {e}")],
            Ok(d) => {
                summands += d.descriptor.summands.len();
                quotient_problems(d).unwrap_or_else(|e| vec![format!("error {e}")])
            }
        };
        if problems.is_empty() {
            ok += 1;
        }
        for p in problems {
            details.push(format!(
                "group: {}, cocycle: {}, normal: {}, {p}",
                c.group,
                c.cocycle,
                subgroup_label(&c.normal)
            ));
        }
    }
    let summary = format!("{ok}/{} quotients, {summands} summands", sweep.len());
    result(2, ok == sweep.len(), summary, details)
}

fn standard(catalog: &Catalog, name: &str) -> Result<(FiniteGroup, CocycleTable)> {
    let g = catalog
        .group(name)
        .ok_or_else(|| Error::Validation(format!("catalog has no group {name}")))?;
    let c = catalog
        .cocycle(&format!("{name}_std"))
        .ok_or_else(|| Error::Validation(format!("catalog has no cocycle {name}_std")))?;
    Ok((g.clone(), c.table.clone()))
}

pub fn criterion_lagrangian(catalog: &Catalog, cfg: &SuiteConfig) -> CriterionResult {
    let mut details = Vec::new();
    let (mut cases, mut agree, mut lagrangians) = (0, 0, 0);
    for name in ["c2xc2", "c4xc4", "c2xc2xc2xc2", "c6xc6"] {
        let mut run = || -> Result<()> {
            let (g, alpha) = standard(catalog, name)?;
            let normals = g.normal_subgroups(DEFAULT_ENUMERATION_BOUND)?;
            let mut local = 0;
            for n in &normals {
                cases += 1;
                match ecp_lagrangian_check(&g, &alpha, n, &cfg.oracle) {
                    Ok(c) => {
                        agree += 1;
                        local += usize::from(c.verdict);
                    }
                    Err(e) => {
                        details.push(format!("group: {name}, normal: {}, {e}", subgroup_label(n)))
                    }
                }
            }
            lagrangians += local;
            details.push(format!(
                "group: {name}, normals: {}, lagrangians: {local}",
                normals.len()
            ));
            Ok(())
        };
        if let Err(e) = run() {
            details.push(format!("group: {name}, error {e}"));
        }
    }
    let summary = format!("{agree}/{cases} agree, {lagrangians} normal Lagrangians");
    result(3, cases > 0 && agree == cases, summary, details)
}

pub fn criterion_maximal_quotients(catalog: &Catalog, cfg: &SuiteConfig) -> CriterionResult {
    let mut details = Vec::new();
    let mut pass = true;
    for name in CT_GROUPS {
        let run = || -> Result<(bool, String)> {
            let (g, alpha) = standard(catalog, name)?;
            let d = maximal_elementary_quotients(&g, &alpha, &cfg.oracle)?;
            let mut types: Vec<String> = d
                .maximal
                .iter()
                .map(|q| {
                    let f = q
                        .quotient
                        .abelian_invariants()
                        .map(|a| a.factors)
                        .unwrap_or_default();
                    f.iter()
                        .map(|k| format!("C{k}"))
                        .collect::<Vec<_>>()
                        .join(" x ")
                })
                .collect();
            types.sort();
            types.dedup();
            let mut ok = d.unique == d.square_free_exponent;
            match name {
                "c4xc4" => {
                    ok &=
                        types.contains(&"C4".to_string()) && types.contains(&"C2 x C2".to_string())
                }
                "c2xc2xc2xc2" => ok &= d.unique,
                _ => {}
            }
            let line = format!(
                "group: {name}, maximal: {}, types: [{}], unique: {}, square_free_exponent: {}",
                d.maximal.len(),
                types.join("; "),
                d.unique,
                d.square_free_exponent
            );
            Ok((ok, line))
        };
        match run() {
            Ok((ok, line)) => {
                pass &= ok;
                details.push(line);
            }
            Err(e) => {
                pass = false;
                details.push(format!("group: {name}, error {e}"));
            }
        }
    }
    result(
        4,
        pass,
        format!("{} abelian groups", CT_GROUPS.len()),
        details,
    )
}

pub fn criterion_simple_restriction(catalog: &Catalog, cfg: &SuiteConfig) -> CriterionResult {
    let mut details = Vec::new();
    let (mut cases, mut ok) = (0, 0);
    for c in &catalog.cocycles {
        let run = || -> Result<Vec<(Subgroup, Option<String>)>> {
            let g = catalog
                .group(&c.group)
                .expect("catalog cocycles name catalog groups");
            if !is_nondegenerate(g, &c.table, &cfg.oracle)? {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            for n in g.normal_subgroups(DEFAULT_ENUMERATION_BOUND)? {
                let (sub, beta) = restrict(g, &c.table, &n);
                if !is_nondegenerate(&sub, &beta, &cfg.oracle)? {
                    continue;
                }
                let d = mackey_decompose_with(cfg.exec, g, &c.table, &n, &cfg.oracle)?;
                let q = d.quotient.order();
                let root = crate::group::integer_sqrt(q);
                let problem = if d.orbits.len() != 1 {
                    Some(format!("{} orbits", d.orbits.len()))
                } else {
                    let o = &d.orbits[0];
                    if o.inertia.order() != q {
                        Some(format!(
                            "inertia of order {} in a quotient of order {q}",
                            o.inertia.order()
                        ))
                    } else if !o.obstruction.nondegenerate
                        || root.map(|r| vec![r]) != Some(o.obstruction.blocks.clone())
                    {
                        Some(format!("obstruction blocks {:?}", o.obstruction.blocks))
                    } else {
                        None
                    }
                };
                out.push((n, problem));
            }
            Ok(out)
        };
        match run() {
            Ok(list) => {
                for (n, problem) in list {
                    cases += 1;
                    match problem {
                        None => ok += 1,
                        Some(p) => details.push(format!(
                            "cocycle: {}, normal: {}, {p}",
                            c.name,
                            subgroup_label(&n)
                        )),
                    }
                }
            }
            Err(e) => details.push(format!("cocycle: {}, error {e}", c.name)),
        }
    }
    let errors = details.len() > cases - ok;
    result(
        5,
        cases > 0 && ok == cases && !errors,
        format!("{ok}/{cases} cases"),
        details,
    )
}

pub fn criterion_cube_free(catalog: &Catalog, cfg: &SuiteConfig) -> CriterionResult {
    let mut details = Vec::new();
    let (mut cases, mut ok) = (0, 0);
    for name in CT_GROUPS {
        let run = || -> Result<Vec<(Subgroup, bool, bool)>> {
            let (g, alpha) = standard(catalog, name)?;
            if !is_cube_free(g.order()) {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            for n in g.normal_subgroups(DEFAULT_ENUMERATION_BOUND)? {
                let d = mackey_decompose_with(cfg.exec, &g, &alpha, &n, &cfg.oracle)?;
                out.push((
                    n,
                    d.is_elementary_quotient()?,
                    is_square_free(d.quotient.order()),
                ));
            }
            Ok(out)
        };
        match run() {
            Ok(list) if list.is_empty() => {}
            Ok(list) => {
                let local = list.len();
                for (n, elementary, square_free) in list {
                    cases += 1;
                    if elementary == square_free {
                        ok += 1;
                    } else {
                        details.push(format!(
                            "group: {name}, normal: {}, elementary: {elementary}, square_free_index: {square_free}",
                            subgroup_label(&n)
                        ));
                    }
                }
                details.push(format!("group: {name}, normals: {local}"));
            }
            Err(e) => {
                cases += 1;
                details.push(format!("group: {name}, error {e}"));
            }
        }
    }
    result(
        6,
        cases > 0 && ok == cases,
        format!("{ok}/{cases} cases"),
        details,
    )
}

fn checks_result(id: usize, checks: Vec<Check>) -> CriterionResult {
    let passed = checks.iter().filter(|c| c.pass).count();
    let summary = format!("{passed}/{} checks", checks.len());
    let pass = passed == checks.len();
    result(
        id,
        pass,
        summary,
        checks.iter().map(|c| c.to_string()).collect(),
    )
}

pub fn criterion_h4(cfg: &SuiteConfig) -> CriterionResult {
    let mut checks = Vec::new();
    match verify_presentation_h4(cfg.presentation_len) {
        Ok(r) => checks.extend(r.checks),
        Err(e) => return result(7, false, format!("error {e}"), Vec::new()),
    }
    match generation_check(4, cfg.len_h4) {
        Ok(c) => checks.push(c),
        Err(e) => return result(7, false, format!("error {e}"), Vec::new()),
    }
    checks_result(7, checks)
}

pub fn criterion_h5(cfg: &SuiteConfig) -> CriterionResult {
    let mut checks = Vec::new();
    match verify_presentation_h5(cfg.presentation_len) {
        Ok(r) => checks.extend(r.checks),
        Err(e) => return result(8, false, format!("error {e}"), Vec::new()),
    }
    match generation_check(5, cfg.len_h5) {
        Ok(c) => checks.push(c),
        Err(e) => return result(8, false, format!("error {e}"), Vec::new()),
    }
    checks_result(8, checks)
}

/// Grading groups of the maximal classes of the diagonal algebra, n = 2..=5.
pub const DIAGONAL_EXPECTED: [&[&str]; 4] = [
    &["C2"],
    &["C2", "C3"],
    &["(C2 x C2)", "C2 * C2", "C3", "C4"],
    &["(C2 x C2)", "C2 * C2", "C3 * C2", "C4", "C5"],
];

pub fn criterion_diagonal() -> CriterionResult {
    let mut details = Vec::new();
    let mut pass = true;
    for n in 2..=5 {
        match maximal_gradings_diagonal(n) {
            Ok(classes) => {
                let mut labels: Vec<String> = classes.iter().map(|c| c.group_label()).collect();
                labels.sort();
                let ok = labels == DIAGONAL_EXPECTED[n - 2];
                pass &= ok;
                details.push(format!(
                    "n: {n}, classes: {}, groups: [{}], match: {ok}",
                    labels.len(),
                    labels.join("; ")
                ));
            }
            Err(e) => {
                pass = false;
                details.push(format!("n: {n}, error {e}"));
            }
        }
    }
    result(9, pass, "n = 2..5".into(), details)
}

pub fn criterion_witnesses(catalog: &Catalog, cfg: &SuiteConfig) -> CriterionResult {
    let mut details = Vec::new();
    let (mut cases, mut verified, mut inconclusive, mut failed) = (0, 0, 0, 0);
    for name in CT_GROUPS {
        let run = || -> Result<Vec<(Subgroup, FiniteGroup)>> {
            let (g, alpha) = standard(catalog, name)?;
            let mut out = Vec::new();
            for r in lagrangian_scan(&g, &alpha, true, &cfg.oracle)? {
                let (q, _) = g.quotient(&r.subgroup)?;
                if q.order() <= cfg.max_quotient {
                    out.push((r.subgroup, q));
                }
            }
            Ok(out)
        };
        let (g, alpha) = match standard(catalog, name) {
            Ok(x) => x,
            Err(e) => {
                failed += 1;
                details.push(format!("group: {name}, error {e}"));
                continue;
            }
        };
        let list = match run() {
            Ok(l) => l,
            Err(e) => {
                failed += 1;
                details.push(format!("group: {name}, error {e}"));
                continue;
            }
        };
        let outcomes = map(&list, |(n, _)| {
            lagrangian_quotient_witness(&g, &alpha, n, &cfg.oracle)
        });
        for ((n, q), outcome) in list.iter().zip(outcomes) {
            cases += 1;
            let label = subgroup_label(n);
            match outcome {
                Ok(IybOutcome::Witness(w)) if w.verify(q) => verified += 1,
                Ok(IybOutcome::Witness(_)) => {
                    failed += 1;
                    details.push(format!(
                        "group: {name}, normal: {label}, witness fails verification"
                    ));
                }
                Ok(IybOutcome::Exhausted { modules, actions }) => {
                    inconclusive += 1;
                    details.push(format!(
                        "group: {name}, normal: {label}, inconclusive after {modules} modules and {actions} actions"
                    ));
                }
                Err(e) => {
                    failed += 1;
                    details.push(format!("group: {name}, normal: {label}, error {e}"));
                }
            }
        }
    }
    let summary = format!("{verified}/{cases} verified, {inconclusive} inconclusive");
    result(10, cases > 0 && failed == 0, summary, details)
}

/// Runs the listed criteria (all when empty) in order. The reconstruction
/// sweep is shared by criteria 1 and 2.
pub fn run_suite(
    catalog: &Catalog,
    cfg: &SuiteConfig,
    only: &[usize],
) -> Result<Vec<CriterionResult>> {
    let wanted = |id: usize| only.is_empty() || only.contains(&id);
    for id in only {
        if !CRITERIA.iter().any(|(i, _)| i == id) {
            return Err(Error::Validation(format!("no criterion {id}")));
        }
    }
    let mut out = Vec::new();
    if wanted(1) || wanted(2) {
        let sweep = reconstruction_sweep(catalog, cfg)?;
        if wanted(1) {
            out.push(criterion_reconstruction(&sweep));
        }
        if wanted(2) {
            out.push(criterion_quotient(&sweep));
        }
    }
    if wanted(3) {
        out.push(criterion_lagrangian(catalog, cfg));
    }
    if wanted(4) {
        out.push(criterion_maximal_quotients(catalog, cfg));
    }
    if wanted(5) {
        out.push(criterion_simple_restriction(catalog, cfg));
    }
    if wanted(6) {
        out.push(criterion_cube_free(catalog, cfg));
    }
    if wanted(7) {
        out.push(criterion_h4(cfg));
    }
    if wanted(8) {
        out.push(criterion_h5(cfg));
    }
    if wanted(9) {
        out.push(criterion_diagonal());
    }
    if wanted(10) {
        out.push(criterion_witnesses(catalog, cfg));
    }
    Ok(out)
}

pub fn format_report(results: &[CriterionResult], cfg: &SuiteConfig) -> String {
    let mut s = format!(
        "suite: acceptance, seed: {}, tol: {:e}, max_order: {}\n",
        cfg.oracle.seed, cfg.oracle.tol, cfg.max_order
    );
    for r in results {
        s.push_str(&r.to_string());
    }
    let passed = results.iter().filter(|r| r.pass).count();
    s.push_str(&format!("total: {passed}/{} pass\n", results.len()));
    s
}
