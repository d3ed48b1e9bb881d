//! Grading classes as data: characters in N[G], simply-graded summands
//! `x(C^a H)`, homogeneous dimensions and the class-level predicates.

use std::collections::{BTreeMap, BTreeSet};

use crate::cocycle::{cohomologous, restrict, CocycleTable};
use crate::error::{Error, Result};
use crate::freeprod::{Factor, FreeProductGroup, FreeProductHom, Word};
use crate::group::{extend_from_generators, greedy_generators, FiniteGroup, GroupHom, Subgroup};
use crate::twisted::{ComplexCocycle, OracleConfig, Twist, TwistedGroupAlgebra};

/// Largest root-of-unity order tried when snapping a numeric twist.
const SNAP_ORDER: u64 = 24;

/// Element of N[G] with positive multiplicities on its support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    order: usize,
    mult: BTreeMap<usize, u64>,
}

impl Character {
    /// Duplicate elements are summed; zero multiplicities are rejected.
    pub fn new(g: &FiniteGroup, entries: &[(usize, u64)]) -> Result<Self> {
        let mut mult = BTreeMap::new();
        for &(x, n) in entries {
            if x >= g.order() {
                return Err(Error::Validation(format!(
                    "element {x} outside a group of order {}",
                    g.order()
                )));
            }
            if n == 0 {
                return Err(Error::Validation(format!(
                    "zero multiplicity at element {x}"
                )));
            }
            *mult.entry(x).or_insert(0) += n;
        }
        if mult.is_empty() {
            return Err(Error::Validation(
                "a character needs augmentation at least 1".into(),
            ));
        }
        Ok(Self {
            order: g.order(),
            mult,
        })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Self {
            order: g.order(),
            mult: BTreeMap::from([(0, 1)]),
        }
    }

    /// Sum of all group elements.
    pub fn regular(g: &FiniteGroup) -> Self {
        Self {
            order: g.order(),
            mult: (0..g.order()).map(|x| (x, 1)).collect(),
        }
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn augmentation(&self) -> u64 {
        self.mult.values().sum()
    }

    pub fn get(&self, x: usize) -> u64 {
        self.mult.get(&x).copied().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<usize> {
        self.mult.keys().copied().collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.mult.iter().map(|(&x, &n)| (x, n))
    }

    /// Product in N[G].
    pub fn product(&self, g: &FiniteGroup, other: &Character) -> Character {
        let mut mult = BTreeMap::new();
        for (a, n) in self.entries() {
            for (b, m) in other.entries() {
                *mult.entry(g.mul(a, b)).or_insert(0) += n * m;
            }
        }
        Character {
            order: g.order(),
            mult,
        }
    }

    /// Image under a homomorphism.
    pub fn push_forward(&self, hom: &GroupHom) -> Character {
        let mut mult = BTreeMap::new();
        for (a, n) in self.entries() {
            *mult.entry(hom.apply(a)).or_insert(0) += n;
        }
        Character {
            order: hom.target_order(),
            mult,
        }
    }

    /// Each element replaced by the least element of its left coset `xH`.
    pub fn canonical_mod(&self, g: &FiniteGroup, h: &Subgroup) -> Character {
        let mut mult = BTreeMap::new();
        for (a, n) in self.entries() {
            let rep = h
                .elements()
                .iter()
                .map(|&k| g.mul(a, k))
                .min()
                .expect("non-empty subgroup");
            *mult.entry(rep).or_insert(0) += n;
        }
        Character {
            order: self.order,
            mult,
        }
    }
}

/// Reduction of `x` along `G -> G/N`.
pub fn character_mod(
    g: &FiniteGroup,
    x: &Character,
    n: &Subgroup,
) -> Result<(FiniteGroup, GroupHom, Character)> {
    let (q, proj) = g.quotient(n)?;
    let xb = x.push_forward(&proj);
    Ok((q, proj, xb))
}

/// Dimension of each homogeneous component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousDims(Vec<u64>);

impl HomogeneousDims {
    pub fn new(dims: Vec<u64>) -> Self {
        Self(dims)
    }

    pub fn get(&self, x: usize) -> u64 {
        self.0[x]
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    /// Same dimension at every element.
    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|p| p[0] == p[1])
    }

    pub fn add(&self, other: &HomogeneousDims) -> HomogeneousDims {
        HomogeneousDims(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Twisted group algebra of `H`, graded naturally inside `G`.
pub fn natural_dims(g: &FiniteGroup, h: &Subgroup) -> HomogeneousDims {
    let mut d = vec![0; g.order()];
    for &x in h.elements() {
        d[x] = 1;
    }
    HomogeneousDims(d)
}

/// `dim B(g0) = sum over g1 g2 g3^-1 = g0 of n(g1) dim A(g2) n(g3)`.
pub fn induced_dims(g: &FiniteGroup, x: &Character, base: &HomogeneousDims) -> HomogeneousDims {
    let mut out = vec![0u64; g.order()];
    let base_support = base.support();
    for (a, n) in x.entries() {
        for (c, m) in x.entries() {
            let ci = g.inv(c);
            for &b in &base_support {
                out[g.mul(g.mul(a, b), ci)] += n * base.get(b) * m;
            }
        }
    }
    HomogeneousDims(out)
}

/// Coset masses and the two independent equi-dimensionality verdicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquidimReport {
    /// `(least element of the coset gH, mass)` for each left coset.
    pub masses: Vec<(usize, u64)>,
    pub dims: HomogeneousDims,
    pub equidimensional: bool,
}

/// Equi-dimensionality of `x(A)` for an equi-dimensional `sub`-graded base,
/// read from coset masses and cross-checked against the induced dimensions.
pub fn is_equidimensional_induced(
    g: &FiniteGroup,
    x: &Character,
    sub: &Subgroup,
    base: &HomogeneousDims,
) -> Result<EquidimReport> {
    let on = sub
        .elements()
        .iter()
        .map(|&s| base.get(s))
        .collect::<BTreeSet<_>>();
    let off = (0..g.order()).any(|i| !sub.contains(i) && base.get(i) > 0);
    if on.len() != 1 || off || on.contains(&0) {
        return Err(Error::Domain(
            "base grading is not equi-dimensional over the subgroup".into(),
        ));
    }
    let cosets = g.left_cosets(sub);
    let masses: Vec<(usize, u64)> = cosets
        .blocks()
        .iter()
        .map(|b| (b[0], b.iter().map(|&e| x.get(e)).sum()))
        .collect();
    let by_mass = masses.windows(2).all(|p| p[0].1 == p[1].1);
    let dims = induced_dims(g, x, base);
    let by_dims = dims.is_constant();
    if by_mass != by_dims {
        return Err(Error::Consistency(format!(
            "coset masses say {by_mass} but induced dimensions say {by_dims}"
        )));
    }
    Ok(EquidimReport {
        masses,
        dims,
        equidimensional: by_mass,
    })
}

/// `x(C^a H)`: elementary part `x`, fine part the twisted algebra of `H`.
/// The twist is indexed by the local indices of `H`.
#[derive(Debug, Clone)]
pub struct SummandDescriptor {
    pub x: Character,
    pub h: Subgroup,
    pub twist: Twist,
}

impl SummandDescriptor {
    pub fn new(g: &FiniteGroup, x: Character, h: Subgroup, twist: Twist) -> Result<Self> {
        if x.group_order() != g.order() || h.parent_order() != g.order() {
            return Err(Error::Validation(
                "summand parts live in different groups".into(),
            ));
        }
        let (hg, _) = h.as_group(g);
        match &twist {
            Twist::Exact(t) => t.check(&hg)?,
            Twist::Numeric(c) => {
                if c.group_order() != hg.order() {
                    return Err(Error::Validation(
                        "twist size does not match the fine subgroup".into(),
                    ));
                }
            }
        }
        Ok(Self { x, h, twist })
    }

    /// Elementary summand `x(C)`.
    pub fn elementary(g: &FiniteGroup, x: Character) -> Self {
        let h = g.trivial_subgroup();
        let twist = Twist::Exact(CocycleTable::trivial(&FiniteGroup::trivial()));
        Self { x, h, twist }
    }

    pub fn dimension(&self) -> u64 {
        let e = self.x.augmentation();
        e * e * self.h.order() as u64
    }

    pub fn dims(&self, g: &FiniteGroup) -> HomogeneousDims {
        induced_dims(g, &self.x, &natural_dims(g, &self.h))
    }
}

#[derive(Debug, Clone)]
pub struct GradingClassDescriptor {
    pub group: FiniteGroup,
    pub summands: Vec<SummandDescriptor>,
}

impl GradingClassDescriptor {
    pub fn new(group: FiniteGroup, summands: Vec<SummandDescriptor>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::Validation("a grading class needs a summand".into()));
        }
        for s in &summands {
            if s.x.group_order() != group.order() || s.h.parent_order() != group.order() {
                return Err(Error::Validation(
                    "summand does not live over the grading group".into(),
                ));
            }
        }
        Ok(Self { group, summands })
    }

    pub fn dimension(&self) -> u64 {
        self.summands.iter().map(|s| s.dimension()).sum()
    }

    pub fn homogeneous_dims(&self) -> HomogeneousDims {
        self.summands
            .iter()
            .map(|s| s.dims(&self.group))
            .reduce(|a, b| a.add(&b))
            .expect("at least one summand")
    }

    pub fn support(&self) -> Vec<usize> {
        self.homogeneous_dims().support()
    }

    /// The support generates the grading group.
    pub fn is_connected(&self) -> bool {
        self.group.generate(&self.support()).order() == self.group.order()
    }

    /// Every fine part is the trivial group.
    pub fn is_elementary(&self) -> bool {
        self.summands.iter().all(|s| s.h.is_trivial())
    }

    /// Elementary with a single summand whose character is the sum of all elements.
    pub fn is_elementary_crossed_product(&self) -> bool {
        self.is_elementary()
            && self.summands.len() == 1
            && self.summands[0].x == Character::regular(&self.group)
    }

    /// Equality up to summand permutation, coset moves of each `x`, and
    /// cohomology of the fine twists. Both descriptors must share the group.
    pub fn equivalent(&self, other: &GradingClassDescriptor) -> Result<bool> {
        if self.group != other.group {
            return Err(Error::Validation(
                "descriptors over different groups".into(),
            ));
        }
        if self.summands.len() != other.summands.len() {
            return Ok(false);
        }
        let g = &self.group;
        let same = self
            .summands
            .iter()
            .map(|a| {
                other
                    .summands
                    .iter()
                    .map(|b| summands_equivalent(g, a, b))
                    .collect()
            })
            .collect::<Result<Vec<Vec<bool>>>>()?;
        Ok(perfect_matching(&same))
    }

    /// Image under an automorphism of the grading group, given by element images.
    pub fn apply_automorphism(&self, auto: &[usize]) -> Result<GradingClassDescriptor> {
        let g = &self.group;
        let mut out = Vec::new();
        for s in &self.summands {
            let entries: Vec<(usize, u64)> = s.x.entries().map(|(a, n)| (auto[a], n)).collect();
            let x = Character::new(g, &entries)?;
            let h_img: Vec<usize> = s.h.elements().iter().map(|&e| auto[e]).collect();
            let h = g.subgroup(&h_img)?;
            // local index of the image of the i-th element of H
            let pos: Vec<usize> =
                s.h.elements()
                    .iter()
                    .map(|&e| {
                        h.local_index(auto[e])
                            .expect("image lies in the image subgroup")
                    })
                    .collect();
            let n = h.order();
            let mut inv = vec![0; n];
            for (i, &p) in pos.iter().enumerate() {
                inv[p] = i;
            }
            let twist = match &s.twist {
                Twist::Exact(t) => Twist::Exact(CocycleTable::new(
                    &h.as_group(g).0,
                    t.scale(),
                    (0..n)
                        .map(|a| (0..n).map(|b| t.get(inv[a], inv[b])).collect())
                        .collect(),
                )?),
                Twist::Numeric(c) => {
                    let vals = (0..n * n).map(|i| c.get(inv[i / n], inv[i % n])).collect();
                    Twist::Numeric(ComplexCocycle::new(&h.as_group(g).0, vals, 1e-6)?)
                }
            };
            out.push(SummandDescriptor::new(g, x, h, twist)?);
        }
        GradingClassDescriptor::new(g.clone(), out)
    }

    /// Equivalence up to automorphisms of the grading group; refuses groups
    /// with more than `bound` automorphisms.
    pub fn equivalent_up_to_automorphism(
        &self,
        other: &GradingClassDescriptor,
        bound: usize,
    ) -> Result<bool> {
        for auto in automorphisms(&self.group, bound)? {
            if self.apply_automorphism(&auto)?.equivalent(other)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn exact_twist(hg: &FiniteGroup, t: &Twist) -> Result<CocycleTable> {
    match t {
        Twist::Exact(c) => Ok(c.clone()),
        Twist::Numeric(c) => c
            .snap(hg, SNAP_ORDER, 1e-6)
            .ok_or_else(|| Error::Domain("numeric twist does not snap to roots of unity".into())),
    }
}

fn summands_equivalent(
    g: &FiniteGroup,
    a: &SummandDescriptor,
    b: &SummandDescriptor,
) -> Result<bool> {
    if a.h.elements() != b.h.elements() {
        return Ok(false);
    }
    if a.x.canonical_mod(g, &a.h) != b.x.canonical_mod(g, &b.h) {
        return Ok(false);
    }
    let (hg, _) = a.h.as_group(g);
    let ta = exact_twist(&hg, &a.twist)?;
    let tb = exact_twist(&hg, &b.twist)?;
    Ok(cohomologous(&hg, &ta, &tb)?.holds())
}

fn perfect_matching(adj: &[Vec<bool>]) -> bool {
    fn try_assign(
        i: usize,
        adj: &[Vec<bool>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for j in 0..adj.len() {
            if adj[i][j] && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| try_assign(k, adj, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let k = adj.len();
    let mut owner = vec![None; k];
    (0..k).all(|i| try_assign(i, adj, &mut vec![false; k], &mut owner))
}

/// All automorphisms as element-image vectors, identity first.
pub fn automorphisms(g: &FiniteGroup, bound: usize) -> Result<Vec<Vec<usize>>> {
    let gens = greedy_generators(g);
    let mut out = Vec::new();
    let mut choice = Vec::new();
    fn rec(
        g: &FiniteGroup,
        gens: &[usize],
        choice: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        bound: usize,
    ) -> Result<()> {
        if choice.len() == gens.len() {
            if let Some(map) = extend_from_generators(g, g, gens, choice) {
                let mut hit = vec![false; g.order()];
                if map.iter().all(|&v| !std::mem::replace(&mut hit[v], true)) {
                    out.push(map);
                    if out.len() > bound {
                        return Err(Error::Size {
                            what: "automorphism count",
                            size: out.len(),
                            bound,
                        });
                    }
                }
            }
            return Ok(());
        }
        let want = g.element_order(gens[choice.len()]);
        for c in 0..g.order() {
            if g.element_order(c) == want {
                choice.push(c);
                rec(g, gens, choice, out, bound)?;
                choice.pop();
            }
        }
        Ok(())
    }
    rec(g, &gens, &mut choice, &mut out, bound)?;
    out.sort();
    Ok(out)
}

/// Element of N[F] over a free product, with support given as reduced words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordCharacter {
    mult: BTreeMap<Word, u64>,
}

impl WordCharacter {
    pub fn new(fp: &FreeProductGroup, entries: &[(Word, u64)]) -> Result<Self> {
        let mut mult = BTreeMap::new();
        for (w, n) in entries {
            if !fp.is_reduced(w) {
                return Err(Error::Validation(
                    "character support must be reduced words".into(),
                ));
            }
            if *n == 0 {
                return Err(Error::Validation("zero multiplicity".into()));
            }
            *mult.entry(w.clone()).or_insert(0) += n;
        }
        if mult.is_empty() {
            return Err(Error::Validation(
                "a character needs augmentation at least 1".into(),
            ));
        }
        Ok(Self { mult })
    }

    pub fn augmentation(&self) -> u64 {
        self.mult.values().sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, u64)> + '_ {
        self.mult.iter().map(|(w, &n)| (w, n))
    }

    /// Image in a finite quotient.
    pub fn push_forward(&self, hom: &FreeProductHom) -> Result<Character> {
        let mut entries = Vec::new();
        for (w, n) in self.entries() {
            entries.push((hom.eval(w), n));
        }
        Character::new(hom.target(), &entries)
    }
}

/// A summand over a free product whose fine part is one whole finite factor,
/// or the trivial group.
#[derive(Debug, Clone)]
pub struct FreeSummand {
    pub x: WordCharacter,
    pub fine: Option<(usize, Twist)>,
}

#[derive(Debug, Clone)]
pub struct FreeGradingDescriptor {
    pub group: FreeProductGroup,
    pub summands: Vec<FreeSummand>,
}

impl FreeGradingDescriptor {
    pub fn new(group: FreeProductGroup, summands: Vec<FreeSummand>) -> Result<Self> {
        for s in &summands {
            if let Some((f, t)) = &s.fine {
                let Some(Factor::Finite(h)) = group.factors().get(*f) else {
                    return Err(Error::Validation(format!(
                        "fine part {f} is not a finite factor"
                    )));
                };
                if let Twist::Exact(c) = t {
                    c.check(h)?;
                }
            }
        }
        Ok(Self { group, summands })
    }

    fn fine_order(&self, s: &FreeSummand) -> u64 {
        match &s.fine {
            Some((f, _)) => match &self.group.factors()[*f] {
                Factor::Finite(h) => h.order() as u64,
                Factor::Free => unreachable!("validated"),
            },
            None => 1,
        }
    }

    pub fn dimension(&self) -> u64 {
        self.summands
            .iter()
            .map(|s| s.x.augmentation().pow(2) * self.fine_order(s))
            .sum()
    }

    /// Degrees `g1 h g3^-1` of the homogeneous components.
    pub fn support(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for s in &self.summands {
            let fine: Vec<Word> = match &s.fine {
                Some((f, _)) => match &self.group.factors()[*f] {
                    Factor::Finite(h) => (0..h.order())
                        .map(|v| self.group.letter(*f, v as i64).expect("valid element"))
                        .collect(),
                    Factor::Free => unreachable!("validated"),
                },
                None => vec![Word::identity()],
            };
            for (a, _) in s.x.entries() {
                for (c, _) in s.x.entries() {
                    let ci = self.group.inv(c);
                    for h in &fine {
                        out.insert(self.group.mul(&self.group.mul(a, h), &ci));
                    }
                }
            }
        }
        out
    }

    /// Connected when the single-syllable part of the support generates
    /// every factor. If it does not and longer words are present the
    /// question is left undecided.
    pub fn is_connected(&self) -> Result<bool> {
        let support = self.support();
        let mut per_factor: Vec<Vec<i64>> = vec![Vec::new(); self.group.factors().len()];
        let mut longer = false;
        for w in &support {
            match w.syllables() {
                [] => {}
                [s] => per_factor[s.factor].push(s.value),
                _ => longer = true,
            }
        }
        let covered = self
            .group
            .factors()
            .iter()
            .zip(&per_factor)
            .all(|(f, vals)| match f {
                Factor::Finite(h) => {
                    let gens: Vec<usize> = vals.iter().map(|&v| v as usize).collect();
                    h.generate(&gens).order() == h.order()
                }
                Factor::Free => vals.iter().fold(0i64, |acc, &v| gcd_i64(acc, v)) == 1,
            });
        if covered {
            Ok(true)
        } else if longer {
            Err(Error::Domain(
                "connectedness is undecided for this support".into(),
            ))
        } else {
            Ok(false)
        }
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    crate::group::gcd(a.unsigned_abs() as usize, b.unsigned_abs() as usize) as i64
}

/// The maximal class of `M_n(C)` over `G` with non-degenerate `alpha`:
/// `x = 1 + x_1 + ... + x_{d-1}` over `F_{d-1} * G`, `d = n / sqrt|G|`.
pub fn max_class_over(
    g: &FiniteGroup,
    alpha: &CocycleTable,
    n: usize,
    cfg: &OracleConfig,
) -> Result<FreeGradingDescriptor> {
    let root = crate::group::integer_sqrt(g.order())
        .ok_or_else(|| Error::Domain(format!("|G| = {} is not a square", g.order())))?;
    if !n.is_multiple_of(root) {
        return Err(Error::Domain(format!(
            "sqrt|G| = {root} does not divide n = {n}"
        )));
    }
    if !crate::cocycle::is_nondegenerate(g, alpha, cfg)? {
        return Err(Error::Domain("the cocycle is degenerate".into()));
    }
    let d = n / root;
    let mut factors = vec![Factor::Free; d - 1];
    factors.push(Factor::Finite(g.clone()));
    let mut names: Vec<String> = (1..d).map(|i| format!("x{i}")).collect();
    names.push("G".into());
    let fp = FreeProductGroup::new(factors)?.with_names(names)?;
    let mut entries = vec![(Word::identity(), 1)];
    for i in 0..d - 1 {
        entries.push((fp.letter(i, 1)?, 1));
    }
    let x = WordCharacter::new(&fp, &entries)?;
    FreeGradingDescriptor::new(
        fp,
        vec![FreeSummand {
            x,
            fine: Some((d - 1, Twist::Exact(alpha.clone()))),
        }],
    )
}

/// The free-product grading of a diagonal class: one copy of `C G_j` per factor.
pub fn diagonal_descriptor(
    class: &crate::freeprod::DiagonalClass,
) -> Result<FreeGradingDescriptor> {
    let fp = class.free_product();
    let summands = fp
        .factors()
        .iter()
        .enumerate()
        .map(|(j, f)| {
            let Factor::Finite(h) = f else {
                unreachable!("diagonal factors are finite")
            };
            Ok(FreeSummand {
                x: WordCharacter::new(&fp, &[(Word::identity(), 1)])?,
                fine: Some((j, Twist::Exact(CocycleTable::trivial(h)))),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FreeGradingDescriptor::new(fp, summands)
}

/// The fine summand `1(C^a H)` of a subgroup with the restricted cocycle.
pub fn fine_summand(
    g: &FiniteGroup,
    alpha: &CocycleTable,
    h: &Subgroup,
) -> Result<SummandDescriptor> {
    let (_, t) = restrict(g, alpha, h);
    SummandDescriptor::new(g, Character::identity(g), h.clone(), Twist::Exact(t))
}

/// Block profile of the fine part of a summand.
pub fn fine_blocks(
    g: &FiniteGroup,
    s: &SummandDescriptor,
    cfg: &OracleConfig,
) -> Result<Vec<usize>> {
    let (hg, _) = s.h.as_group(g);
    let alg = match &s.twist {
        Twist::Exact(t) => TwistedGroupAlgebra::exact(&hg, t)?,
        Twist::Numeric(c) => TwistedGroupAlgebra::numeric(&hg, c)?,
    };
    Ok(alg.wedderburn_blocks(cfg)?.dims().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::standard_nondegenerate;
    use crate::freeprod::{c2_free_c2, maximal_gradings_diagonal};
    use proptest::prelude::*;

    fn c2() -> FiniteGroup {
        FiniteGroup::cyclic(2)
    }

    fn point(g: &FiniteGroup) -> HomogeneousDims {
        natural_dims(g, &g.trivial_subgroup())
    }

    // independent evaluation: loop over all triples of group elements
    fn brute_induced(g: &FiniteGroup, x: &Character, base: &HomogeneousDims) -> Vec<u64> {
        let n = g.order();
        let mut out = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let g0 = g.mul(g.mul(a, b), g.inv(c));
                    out[g0] += x.get(a) * base.get(b) * x.get(c);
                }
            }
        }
        out
    }

    #[test]
    fn induced_examples() {
        let g = c2();
        let d = induced_dims(&g, &Character::identity(&g), &point(&g));
        assert_eq!(d.values(), &[1, 0]);
        let x = Character::new(&g, &[(0, 1), (1, 1)]).unwrap();
        assert_eq!(induced_dims(&g, &x, &point(&g)).values(), &[2, 2]);
        let x = Character::new(&g, &[(0, 2), (1, 1)]).unwrap();
        assert_eq!(induced_dims(&g, &x, &point(&g)).values(), &[5, 4]);
    }

    #[test]
    fn character_validation() {
        let g = c2();
        assert!(Character::new(&g, &[(0, 0)]).is_err());
        assert!(Character::new(&g, &[]).is_err());
        assert!(Character::new(&g, &[(2, 1)]).is_err());
        assert_eq!(Character::new(&g, &[(1, 1), (1, 2)]).unwrap().get(1), 3);
    }

    #[test]
    fn connectedness() {
        let t = FiniteGroup::trivial();
        let d = GradingClassDescriptor::new(
            t.clone(),
            vec![SummandDescriptor::elementary(&t, Character::identity(&t))],
        )
        .unwrap();
        assert!(d.is_connected());
        let g = FiniteGroup::cyclic(4);
        let x = Character::new(&g, &[(0, 1), (2, 1)]).unwrap();
        let d = GradingClassDescriptor::new(g.clone(), vec![SummandDescriptor::elementary(&g, x)])
            .unwrap();
        assert!(!d.is_connected());
    }

    #[test]
    fn free_product_diagonal_connected() {
        let classes = maximal_gradings_diagonal(4).unwrap();
        let c = classes.iter().find(|c| c.label() == "C2 * C2").unwrap();
        let d = diagonal_descriptor(c).unwrap();
        assert_eq!(d.dimension(), 4);
        assert!(d.is_connected().unwrap());
        for c in &classes {
            assert!(diagonal_descriptor(c).unwrap().is_connected().unwrap());
        }
    }

    #[test]
    fn reduction_mod_normal() {
        let g = FiniteGroup::cyclic(4);
        let x = Character::new(&g, &[(0, 1), (1, 1)]).unwrap();
        let (_, _, xb) = character_mod(&g, &x, &g.trivial_subgroup()).unwrap();
        assert_eq!(xb, x);
        let n = g.generate(&[2]);
        let (q, proj, xb) = character_mod(&g, &x, &n).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(xb.get(proj.apply(0)), 1);
        assert_eq!(xb.get(proj.apply(1)), 1);
        assert_eq!(xb.augmentation(), x.augmentation());
    }

    #[test]
    fn equidimensional_examples() {
        let g = c2();
        let e = g.trivial_subgroup();
        let x = Character::new(&g, &[(0, 1), (1, 1)]).unwrap();
        let r = is_equidimensional_induced(&g, &x, &e, &point(&g)).unwrap();
        assert!(r.equidimensional);
        assert_eq!(r.masses, vec![(0, 1), (1, 1)]);
        assert_eq!(r.dims.values(), &[2, 2]);
        let x = Character::new(&g, &[(0, 2), (1, 1)]).unwrap();
        let r = is_equidimensional_induced(&g, &x, &e, &point(&g)).unwrap();
        assert!(!r.equidimensional);
        assert_eq!(r.masses, vec![(0, 2), (1, 1)]);
        assert_eq!(r.dims.values(), &[5, 4]);

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let a3 = s3
            .subgroups(64)
            .unwrap()
            .into_iter()
            .find(|h| h.order() == 3)
            .unwrap();
        let t = (0..6).find(|&i| s3.element_order(i) == 2).unwrap();
        let x = Character::new(&s3, &[(0, 1), (t, 1)]).unwrap();
        let r = is_equidimensional_induced(&s3, &x, &a3, &natural_dims(&s3, &a3)).unwrap();
        assert!(r.equidimensional);
        assert_eq!(r.masses.iter().map(|m| m.1).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn non_equidimensional_base_is_rejected() {
        let g = c2();
        let base = HomogeneousDims::new(vec![2, 1]);
        let x = Character::identity(&g);
        assert!(matches!(
            is_equidimensional_induced(&g, &x, &g.whole(), &base),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn elementary_predicates() {
        let g = c2();
        let ecp = GradingClassDescriptor::new(
            g.clone(),
            vec![SummandDescriptor::elementary(&g, Character::regular(&g))],
        )
        .unwrap();
        assert!(ecp.is_elementary() && ecp.is_elementary_crossed_product());
        let two = GradingClassDescriptor::new(
            g.clone(),
            vec![SummandDescriptor::elementary(
                &g,
                Character::new(&g, &[(0, 2)]).unwrap(),
            )],
        )
        .unwrap();
        assert!(two.is_elementary() && !two.is_elementary_crossed_product());
        assert!(!two.is_connected());
        let (k, alpha) = standard_nondegenerate(&[2]).unwrap();
        let fine = GradingClassDescriptor::new(
            k.clone(),
            vec![fine_summand(&k, &alpha, &k.whole()).unwrap()],
        )
        .unwrap();
        assert!(!fine.is_elementary() && !fine.is_elementary_crossed_product());
        assert_eq!(fine.dimension(), 4);
    }

    #[test]
    fn max_class_examples() {
        let cfg = OracleConfig::default();
        let t = FiniteGroup::trivial();
        let d = max_class_over(&t, &CocycleTable::trivial(&t), 2, &cfg).unwrap();
        assert_eq!(d.dimension(), 4);
        assert_eq!(d.group.factors().len(), 2);
        assert!(d.is_connected().unwrap());
        let (k, alpha) = standard_nondegenerate(&[2]).unwrap();
        let d = max_class_over(&k, &alpha, 2, &cfg).unwrap();
        assert_eq!(d.group.factors().len(), 1);
        assert_eq!(d.dimension(), 4);
        let d = max_class_over(&k, &alpha, 4, &cfg).unwrap();
        assert_eq!(d.group.factors().len(), 2);
        assert_eq!(d.dimension(), 16);
        assert!(d.is_connected().unwrap());
        assert!(max_class_over(&k, &alpha, 3, &cfg).is_err());
        assert!(max_class_over(&c2(), &CocycleTable::trivial(&c2()), 2, &cfg).is_err());
    }

    #[test]
    fn max_class_reduces_to_multiple_of_identity() {
        // killing the free factors sends 1 + x1 + x2 to 3e
        let cfg = OracleConfig::default();
        let t = FiniteGroup::trivial();
        let d = max_class_over(&t, &CocycleTable::trivial(&t), 3, &cfg).unwrap();
        let kill =
            FreeProductHom::from_generators(&d.group, &t, &[vec![(0, 0)], vec![(0, 0)], vec![]])
                .unwrap();
        let xb = d.summands[0].x.push_forward(&kill).unwrap();
        assert_eq!(xb.get(0), 3);
    }

    #[test]
    fn free_summand_support() {
        let fp = c2_free_c2();
        let a = fp.letter(0, 1).unwrap();
        let x = WordCharacter::new(&fp, &[(Word::identity(), 1), (a.clone(), 1)]).unwrap();
        let d = FreeGradingDescriptor::new(fp, vec![FreeSummand { x, fine: None }]).unwrap();
        assert_eq!(d.support().len(), 2);
        assert!(!d.is_connected().unwrap());
    }

    #[test]
    fn equivalence_moves() {
        let g = FiniteGroup::cyclic(4);
        let h = g.generate(&[2]);
        let one = |x: Vec<(usize, u64)>| {
            let t = restrict(&g, &CocycleTable::trivial(&g), &h).1;
            SummandDescriptor::new(
                &g,
                Character::new(&g, &x).unwrap(),
                h.clone(),
                Twist::Exact(t),
            )
            .unwrap()
        };
        let a = GradingClassDescriptor::new(
            g.clone(),
            vec![one(vec![(0, 1), (1, 1)]), one(vec![(0, 2)])],
        )
        .unwrap();
        // coset moves 1 -> 3 and 0 -> 2, and the summands swapped
        let b = GradingClassDescriptor::new(
            g.clone(),
            vec![one(vec![(2, 2)]), one(vec![(2, 1), (3, 1)])],
        )
        .unwrap();
        assert!(a.equivalent(&b).unwrap());
        let c = GradingClassDescriptor::new(
            g.clone(),
            vec![one(vec![(0, 1), (0, 1)]), one(vec![(0, 2)])],
        )
        .unwrap();
        assert!(!a.equivalent(&c).unwrap());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&FiniteGroup::cyclic(5), 64).unwrap().len(), 4);
        let k = FiniteGroup::direct_product(&c2(), &c2());
        assert_eq!(automorphisms(&k, 64).unwrap().len(), 6);
        assert_eq!(
            automorphisms(&FiniteGroup::quaternion8(), 64)
                .unwrap()
                .len(),
            24
        );
    }

    #[test]
    fn equivalence_up_to_automorphism() {
        let g = FiniteGroup::cyclic(3);
        let a = GradingClassDescriptor::new(
            g.clone(),
            vec![SummandDescriptor::elementary(
                &g,
                Character::new(&g, &[(0, 1), (1, 1)]).unwrap(),
            )],
        )
        .unwrap();
        let b = GradingClassDescriptor::new(
            g.clone(),
            vec![SummandDescriptor::elementary(
                &g,
                Character::new(&g, &[(0, 1), (2, 1)]).unwrap(),
            )],
        )
        .unwrap();
        assert!(!a.equivalent(&b).unwrap());
        assert!(a.equivalent_up_to_automorphism(&b, 64).unwrap());
    }

    fn small_group() -> impl Strategy<Value = FiniteGroup> {
        prop_oneof![
            Just(FiniteGroup::cyclic(4)),
            Just(FiniteGroup::symmetric(3).unwrap()),
            Just(FiniteGroup::quaternion8()),
            Just(FiniteGroup::dihedral(4)),
        ]
    }

    fn character(g: &FiniteGroup, raw: &[(usize, u64)]) -> Character {
        let entries: Vec<(usize, u64)> = raw.iter().map(|&(a, n)| (a % g.order(), n)).collect();
        Character::new(g, &entries).unwrap()
    }

    proptest! {
        #[test]
        fn induced_matches_brute_force(
            g in small_group(),
            raw in prop::collection::vec((0usize..8, 1u64..4), 1..4),
            sub in 0usize..8,
        ) {
            let x = character(&g, &raw);
            let h = g.generate(&[sub % g.order()]);
            let base = natural_dims(&g, &h);
            let d = induced_dims(&g, &x, &base);
            let brute = brute_induced(&g, &x, &base);
            prop_assert_eq!(d.values(), brute.as_slice());
            let e = x.augmentation();
            prop_assert_eq!(d.total(), e * e * h.order() as u64);
            if let Ok(r) = is_equidimensional_induced(&g, &x, &h, &base) {
                prop_assert!(d.values().iter().all(|&v| v <= d.get(0)));
                prop_assert_eq!(r.equidimensional, d.is_constant());
            }
        }

        #[test]
        fn composition_law(
            g in small_group(),
            r1 in prop::collection::vec((0usize..8, 1u64..3), 1..3),
            r2 in prop::collection::vec((0usize..8, 1u64..3), 1..3),
        ) {
            let x1 = character(&g, &r1);
            let x2 = character(&g, &r2);
            let base = natural_dims(&g, &g.trivial_subgroup());
            let nested = induced_dims(&g, &x1, &induced_dims(&g, &x2, &base));
            let direct = induced_dims(&g, &x1.product(&g, &x2), &base);
            prop_assert_eq!(nested, direct);
        }
    }
}
