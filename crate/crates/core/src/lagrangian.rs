//! Isotropic subgroups and Lagrangians of non-degenerate twists, the
//! elementary-crossed-product criterion, maximal elementary quotients of
//! abelian groups of central type, minimal isotropic subgroups of nilpotent
//! groups, and a bounded search for bijective 1-cocycles.

use crate::cocycle::{
    bicharacter_of, cohomologous, is_nondegenerate, restrict, CocycleTable, Cohomology, OneCochain,
};
use crate::error::{Error, Result};
use crate::freeprod::abelian_types;
use crate::grading::automorphisms;
use crate::group::{
    are_isomorphic, extend_from_generators, greedy_generators, integer_sqrt, FiniteGroup, Subgroup,
    DEFAULT_ENUMERATION_BOUND,
};
use crate::mackey::{mackey_decompose, MackeyDecomposition};
use crate::par::{try_map, Exec};
use crate::twisted::{OracleConfig, TwistedGroupAlgebra};

/// Default bound on `|H|` for the bijective 1-cocycle search.
pub const DEFAULT_IYB_BOUND: usize = 12;

#[derive(Debug, Clone)]
pub struct Isotropy {
    pub isotropic: bool,
    /// A 1-cochain trivializing the restricted cocycle, when isotropic.
    pub cochain: Option<OneCochain>,
    /// Block dimensions of the restricted twisted group algebra.
    pub blocks: Vec<usize>,
}

/// The restricted class is trivial: an exact coboundary solve and the
/// existence of a 1-dimensional block must agree.
pub fn is_isotropic(
    g: &FiniteGroup,
    alpha: &CocycleTable,
    h: &Subgroup,
    cfg: &OracleConfig,
) -> Result<Isotropy> {
    let (hg, a) = restrict(g, alpha, h);
    let blocks = TwistedGroupAlgebra::exact(&hg, &a)?
        .wedderburn_blocks(cfg)?
        .dims()
        .to_vec();
    let by_blocks = blocks.contains(&1);
    let cochain = match cohomologous(&hg, &CocycleTable::trivial(&hg), &a)? {
        Cohomology::Cohomologous(c) => Some(c),
        Cohomology::NotCohomologous => None,
    };
    if by_blocks != cochain.is_some() {
        return Err(Error::Consistency(format!(
            "coboundary solve says {} but blocks are {blocks:?}",
            cochain.is_some()
        )));
    }
    if hg.is_abelian() && cochain.is_some() && !bicharacter_of(&hg, &a)?.is_zero() {
        return Err(Error::Consistency(
            "a coboundary with a non-zero bicharacter".into(),
        ));
    }
    Ok(Isotropy {
        isotropic: by_blocks,
        cochain,
        blocks,
    })
}

#[derive(Debug, Clone)]
pub struct LagrangianReport {
    pub subgroup: Subgroup,
    pub isotropy: Isotropy,
    /// `|H|^2 = |G|`.
    pub size_ok: bool,
    pub normal: bool,
}

impl LagrangianReport {
    pub fn is_lagrangian(&self, require_normal: bool) -> bool {
        self.isotropy.isotropic && self.size_ok && (self.normal || !require_normal)
    }
}

pub fn lagrangian_report(
    g: &FiniteGroup,
    alpha: &CocycleTable,
    h: &Subgroup,
    cfg: &OracleConfig,
) -> Result<LagrangianReport> {
    Ok(LagrangianReport {
        subgroup: h.clone(),
        isotropy: is_isotropic(g, alpha, h, cfg)?,
        size_ok: h.order() * h.order() == g.order(),
        normal: h.is_normal(g),
    })
}

fn require_nondegenerate(g: &FiniteGroup, alpha: &CocycleTable, cfg: &OracleConfig) -> Result<()> {
    if integer_sqrt(g.order()).is_none() {
        return Err(Error::Domain(format!(
            "|G| = {} is not a square",
            g.order()
        )));
    }
    if !is_nondegenerate(g, alpha, cfg)? {
        return Err(Error::Domain("the cocycle is degenerate".into()));
    }
    Ok(())
}

/// Every (normal) Lagrangian, by exhaustive subgroup enumeration.
pub fn lagrangian_scan(
    g: &FiniteGroup,
    alpha: &CocycleTable,
    normal_only: bool,
    cfg: &OracleConfig,
) -> Result<Vec<LagrangianReport>> {
    require_nondegenerate(g, alpha, cfg)?;
    let root = integer_sqrt(g.order()).expect("checked");
    let candidates: Vec<Subgroup> = g
        .subgroups(DEFAULT_ENUMERATION_BOUND)?
        .into_iter()
        .filter(|h| h.order() == root && (!normal_only || h.is_normal(g)))
        .collect();
    let reports = try_map(Exec::Parallel, &candidates, |h| {
        lagrangian_report(g, alpha, h, cfg)
    })?;
    Ok(reports
        .into_iter()
        .filter(|r| r.isotropy.isotropic)
        .collect())
}

#[derive(Debug, Clone)]
pub struct EcpCheck {
    pub verdict: bool,
    pub report: LagrangianReport,
    pub decomposition: MackeyDecomposition,
}

/// The Mackey quotient is an elementary crossed product exactly when `N`
/// is a Lagrangian; both sides are computed and must agree.
pub fn ecp_lagrangian_check(
    g: &FiniteGroup,
    alpha: &CocycleTable,
    n: &Subgroup,
    cfg: &OracleConfig,
) -> Result<EcpCheck> {
    require_nondegenerate(g, alpha, cfg)?;
    let decomposition = mackey_decompose(g, alpha, n, cfg)?;
    let ecp = decomposition.descriptor.is_elementary_crossed_product();
    let report = lagrangian_report(g, alpha, n, cfg)?;
    let lag = report.is_lagrangian(true);
    if ecp != lag {
        return Err(Error::Consistency(format!(
            "quotient is ECP = {ecp} but Lagrangian = {lag} (isotropic {}, size {}, blocks {:?})",
            report.isotropy.isotropic, report.size_ok, report.isotropy.blocks
        )));
    }
    Ok(EcpCheck {
        verdict: ecp,
        report,
        decomposition,
    })
}

#[derive(Debug, Clone)]
pub struct ElementaryQuotient {
    pub normal: Subgroup,
    pub quotient: FiniteGroup,
}

#[derive(Debug, Clone)]
pub struct MaximalQuotients {
    pub elementary: Vec<ElementaryQuotient>,
    /// Elementary quotients by minimal `N`; these are the maximal classes.
    pub maximal: Vec<ElementaryQuotient>,
    pub unique: bool,
    pub square_free_exponent: bool,
}

/// Maximal elementary quotient classes of `C^a A`, checked against the
/// Lagrangian scan, with the uniqueness verdict checked against the exponent.
pub fn maximal_elementary_quotients(
    a: &FiniteGroup,
    alpha: &CocycleTable,
    cfg: &OracleConfig,
) -> Result<MaximalQuotients> {
    let inv = a
        .abelian_invariants()
        .ok_or_else(|| Error::Domain("the group is not abelian".into()))?;
    require_nondegenerate(a, alpha, cfg)?;
    let normals = a.normal_subgroups(DEFAULT_ENUMERATION_BOUND)?;
    let verdicts = try_map(Exec::Parallel, &normals, |n| -> Result<bool> {
        mackey_decompose(a, alpha, n, cfg)?.is_elementary_quotient()
    })?;
    let elementary: Vec<ElementaryQuotient> = normals
        .iter()
        .zip(&verdicts)
        .filter(|(_, &v)| v)
        .map(|(n, _)| {
            let (quotient, _) = a.quotient(n)?;
            Ok(ElementaryQuotient {
                normal: n.clone(),
                quotient,
            })
        })
        .collect::<Result<_>>()?;
    let maximal: Vec<ElementaryQuotient> = elementary
        .iter()
        .filter(|e| {
            !elementary
                .iter()
                .any(|f| f.normal.order() < e.normal.order() && f.normal.is_subgroup_of(&e.normal))
        })
        .cloned()
        .collect();
    let lagrangians = lagrangian_scan(a, alpha, true, cfg)?;
    let mut lag_sets: Vec<&[usize]> = lagrangians.iter().map(|r| r.subgroup.elements()).collect();
    let mut max_sets: Vec<&[usize]> = maximal.iter().map(|e| e.normal.elements()).collect();
    lag_sets.sort();
    max_sets.sort();
    if lag_sets != max_sets {
        return Err(Error::Consistency(format!(
            "{} maximal elementary quotients but {} Lagrangians",
            max_sets.len(),
            lag_sets.len()
        )));
    }
    let mut unique = true;
    for e in &maximal[1..] {
        if !are_isomorphic(&maximal[0].quotient, &e.quotient, DEFAULT_ENUMERATION_BOUND)?
            .is_isomorphic()
        {
            unique = false;
            break;
        }
    }
    let square_free_exponent = inv.has_square_free_exponent();
    if unique != square_free_exponent {
        return Err(Error::Consistency(format!(
            "uniqueness {unique} but square-free exponent {square_free_exponent}"
        )));
    }
    Ok(MaximalQuotients {
        elementary,
        maximal,
        unique,
        square_free_exponent,
    })
}

/// An isotropic subgroup of index equal to the least block dimension of
/// `C^a N`, assembled from its Sylow subgroups.
pub fn minimal_isotropic(
    n: &FiniteGroup,
    alpha: &CocycleTable,
    cfg: &OracleConfig,
) -> Result<Subgroup> {
    if n.order() > 32 {
        return Err(Error::Size {
            what: "group order",
            size: n.order(),
            bound: 32,
        });
    }
    if !n.is_nilpotent() {
        return Err(Error::Domain("the group is not nilpotent".into()));
    }
    let blocks = TwistedGroupAlgebra::exact(n, alpha)?.wedderburn_blocks(cfg)?;
    let least = *blocks.dims().iter().min().expect("at least one block");
    let mut gens = Vec::new();
    for (_, sylow) in n.sylow_sets() {
        let p = n.subgroup(&sylow)?;
        let mut best: Option<Subgroup> = None;
        for h in n.subgroups(DEFAULT_ENUMERATION_BOUND)?.into_iter().rev() {
            if h.is_subgroup_of(&p) && is_isotropic(n, alpha, &h, cfg)?.isotropic {
                best = Some(h);
                break;
            }
        }
        gens.extend_from_slice(best.expect("the trivial subgroup is isotropic").elements());
    }
    let h = n.generate(&gens);
    if !is_isotropic(n, alpha, &h, cfg)?.isotropic {
        return Err(Error::Consistency(
            "product of Sylow isotropic subgroups is not isotropic".into(),
        ));
    }
    if h.index() != least {
        return Err(Error::Consistency(format!(
            "isotropic subgroup of index {} but the least block has dimension {least}",
            h.index()
        )));
    }
    Ok(h)
}

/// A bijective 1-cocycle `H -> A` into an abelian `H`-module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IybWitness {
    pub module: Vec<usize>,
    /// Action of each element of `H`, as an element map of `A`.
    pub action: Vec<Vec<usize>>,
    pub delta: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IybOutcome {
    Witness(IybWitness),
    /// Every module and action within the bound was tried.
    Exhausted {
        modules: usize,
        actions: usize,
    },
}

impl IybWitness {
    /// Checks the cocycle identity, bijectivity and the action law directly.
    pub fn verify(&self, h: &FiniteGroup) -> bool {
        let a = crate::cocycle::abelian_group(&self.module);
        let n = h.order();
        if a.order() != n || self.delta.len() != n || self.delta[0] != 0 {
            return false;
        }
        let mut seen = vec![false; n];
        if !self
            .delta
            .iter()
            .all(|&d| !std::mem::replace(&mut seen[d], true))
        {
            return false;
        }
        (0..n).all(|x| {
            (0..n).all(|y| {
                let compose = (0..n)
                    .all(|m| self.action[h.mul(x, y)][m] == self.action[x][self.action[y][m]]);
                let cocycle =
                    self.delta[h.mul(x, y)] == a.mul(self.delta[x], self.action[x][self.delta[y]]);
                compose && cocycle
            })
        })
    }
}

/// Searches abelian modules by ascending invariant factors, then actions by
/// generator images, then 1-cocycles by generator values.
pub fn iyb_witness_search(h: &FiniteGroup, bound: usize) -> Result<IybOutcome> {
    let n = h.order();
    if n > bound {
        return Err(Error::Size {
            what: "group order",
            size: n,
            bound,
        });
    }
    let gens = greedy_generators(h);
    let mut modules = 0;
    let mut actions = 0;
    for module in abelian_types(n) {
        modules += 1;
        let a = crate::cocycle::abelian_group(&module);
        let auts = automorphisms(&a, 20_000)?;
        let k = auts.len();
        let index: std::collections::HashMap<&[usize], usize> = auts
            .iter()
            .enumerate()
            .map(|(i, m)| (m.as_slice(), i))
            .collect();
        let table: Vec<Vec<usize>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let comp: Vec<usize> = (0..n).map(|m| auts[i][auts[j][m]]).collect();
                        index[comp.as_slice()]
                    })
                    .collect()
            })
            .collect();
        let aut_group = FiniteGroup::from_table(table)?;
        let mut choice = vec![0usize; gens.len()];
        loop {
            if let Some(rho) = extend_from_generators(h, &aut_group, &gens, &choice) {
                actions += 1;
                let action: Vec<Vec<usize>> = rho.iter().map(|&r| auts[r].clone()).collect();
                if let Some(delta) = bijective_cocycle(h, &a, &gens, &action) {
                    let w = IybWitness {
                        module: module.clone(),
                        action,
                        delta,
                    };
                    if !w.verify(h) {
                        return Err(Error::Consistency(
                            "search produced an invalid witness".into(),
                        ));
                    }
                    return Ok(IybOutcome::Witness(w));
                }
            }
            if !advance(&mut choice, k) {
                break;
            }
        }
    }
    Ok(IybOutcome::Exhausted { modules, actions })
}

fn advance(choice: &mut [usize], base: usize) -> bool {
    for c in choice.iter_mut().rev() {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

/// Extends generator values along `delta(x g) = delta(x) + x . delta(g)`.
fn bijective_cocycle(
    h: &FiniteGroup,
    a: &FiniteGroup,
    gens: &[usize],
    action: &[Vec<usize>],
) -> Option<Vec<usize>> {
    let n = h.order();
    let mut values = vec![0usize; gens.len()];
    loop {
        let mut delta = vec![usize::MAX; n];
        delta[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut ok = true;
        'bfs: while let Some(x) = queue.pop_front() {
            for (&g, &v) in gens.iter().zip(&values) {
                let y = h.mul(x, g);
                let d = a.mul(delta[x], action[x][v]);
                if delta[y] == usize::MAX {
                    delta[y] = d;
                    queue.push_back(y);
                } else if delta[y] != d {
                    ok = false;
                    break 'bfs;
                }
            }
        }
        if ok {
            let mut seen = vec![false; n];
            if delta
                .iter()
                .all(|&d| d != usize::MAX && !std::mem::replace(&mut seen[d], true))
            {
                return Some(delta);
            }
        }
        if !advance(&mut values, n) {
            return None;
        }
    }
}

/// Quotient by a normal Lagrangian admits a bijective 1-cocycle.
pub fn lagrangian_quotient_witness(
    g: &FiniteGroup,
    alpha: &CocycleTable,
    n: &Subgroup,
    cfg: &OracleConfig,
) -> Result<IybOutcome> {
    let c = ecp_lagrangian_check(g, alpha, n, cfg)?;
    if !c.verdict {
        return Err(Error::Domain(
            "the subgroup is not a normal Lagrangian".into(),
        ));
    }
    iyb_witness_search(&c.decomposition.quotient, DEFAULT_IYB_BOUND)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::standard_nondegenerate;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn isotropy_examples() {
        let g = FiniteGroup::symmetric(3).unwrap();
        for h in g.subgroups(64).unwrap() {
            assert!(
                is_isotropic(&g, &CocycleTable::trivial(&g), &h, &cfg())
                    .unwrap()
                    .isotropic
            );
        }
        let (g, a) = standard_nondegenerate(&[4]).unwrap();
        assert!(
            is_isotropic(&g, &a, &g.generate(&[4]), &cfg())
                .unwrap()
                .isotropic
        );
        let (k, b) = standard_nondegenerate(&[2]).unwrap();
        let r = is_isotropic(&k, &b, &k.whole(), &cfg()).unwrap();
        assert!(!r.isotropic);
        assert_eq!(r.blocks, vec![2]);
    }

    #[test]
    fn klein_scan() {
        let (k, b) = standard_nondegenerate(&[2]).unwrap();
        let found = lagrangian_scan(&k, &b, false, &cfg()).unwrap();
        // every subgroup of order 2 is cyclic, hence isotropic
        assert_eq!(found.len(), 3);
    }

    #[test]
    fn c4_scan_contains_known_lagrangians() {
        let (g, a) = standard_nondegenerate(&[4]).unwrap();
        let found = lagrangian_scan(&g, &a, false, &cfg()).unwrap();
        let sets: Vec<&[usize]> = found.iter().map(|r| r.subgroup.elements()).collect();
        assert!(sets.contains(&g.generate(&[4]).elements()));
        assert!(sets.contains(&g.generate(&[8, 2]).elements()));
    }

    #[test]
    fn ecp_lagrangian_examples() {
        let (k, b) = standard_nondegenerate(&[2]).unwrap();
        assert!(
            ecp_lagrangian_check(&k, &b, &k.generate(&[2]), &cfg())
                .unwrap()
                .verdict
        );
        let (g, a) = standard_nondegenerate(&[4]).unwrap();
        let c = ecp_lagrangian_check(&g, &a, &g.generate(&[8, 2]), &cfg()).unwrap();
        assert!(c.verdict);
        assert_eq!(c.decomposition.quotient.order(), 4);
        assert!(
            !ecp_lagrangian_check(&g, &a, &g.generate(&[8]), &cfg())
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn maximal_quotient_examples() {
        let (k, b) = standard_nondegenerate(&[2]).unwrap();
        let d = maximal_elementary_quotients(&k, &b, &cfg()).unwrap();
        assert!(d.unique);
        let (g, a) = standard_nondegenerate(&[4]).unwrap();
        let d = maximal_elementary_quotients(&g, &a, &cfg()).unwrap();
        assert!(!d.unique);
        let orders: std::collections::BTreeSet<usize> = d
            .maximal
            .iter()
            .map(|e| e.quotient.abelian_invariants().unwrap().factors.len())
            .collect();
        assert_eq!(orders.len(), 2);
    }

    #[test]
    fn minimal_isotropic_examples() {
        let q = FiniteGroup::quaternion8();
        assert_eq!(
            minimal_isotropic(&q, &CocycleTable::trivial(&q), &cfg())
                .unwrap()
                .index(),
            1
        );
        let (k, b) = standard_nondegenerate(&[2]).unwrap();
        let h = minimal_isotropic(&k, &b, &cfg()).unwrap();
        assert_eq!(h.order(), 2);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert!(matches!(
            minimal_isotropic(&s3, &CocycleTable::trivial(&s3), &cfg()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn iyb_examples() {
        for h in [
            FiniteGroup::cyclic(2),
            FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        ] {
            match iyb_witness_search(&h, 12).unwrap() {
                IybOutcome::Witness(w) => {
                    assert!(w.verify(&h));
                    assert!(w
                        .action
                        .iter()
                        .all(|m| m.iter().enumerate().all(|(i, &v)| i == v)));
                }
                other => panic!("no witness: {other:?}"),
            }
        }
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let IybOutcome::Witness(w) = iyb_witness_search(&s3, 12).unwrap() else {
            panic!("S3 has a witness")
        };
        assert_eq!(w.module, vec![6]);
        assert!(w
            .action
            .iter()
            .any(|m| m.iter().enumerate().any(|(i, &v)| i != v)));
        assert!(w.verify(&s3));
        assert!(iyb_witness_search(&FiniteGroup::cyclic(13), 12).is_err());
    }

    #[test]
    fn quotient_witness_examples() {
        let (g, a) = standard_nondegenerate(&[4]).unwrap();
        let out = lagrangian_quotient_witness(&g, &a, &g.generate(&[4]), &cfg()).unwrap();
        assert!(matches!(out, IybOutcome::Witness(_)));
    }
}
