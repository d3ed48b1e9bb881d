//! Decomposition of the quotient grading class of `C^a G` by a normal
//! subgroup `N` into simply-graded summands `x_M(C^w I_M)`.
//!
//! Points of `C^a N` are its central idempotents; `G` permutes them by
//! conjugation. Each orbit contributes one summand: the inertia group `I_M`
//! in `G/N`, its left transversal, and the obstruction cocycle read off from
//! intertwiners of an explicit irreducible representation.

use nalgebra::DMatrix;

use crate::cocycle::{cohomologous, restrict, CocycleTable};
use crate::error::{Error, Result};
use crate::grading::{Character, GradingClassDescriptor, SummandDescriptor};
use crate::group::{FiniteGroup, GroupHom, Subgroup};
use crate::par::{try_map, Exec};
use crate::twisted::{
    conjugate_idempotent, match_point, same_orbit_by_product, ComplexCocycle, IrrPoint,
    OracleConfig, Twist, TwistedGroupAlgebra, C64,
};

const SNAP_ORDER: u64 = 24;

/// Class-level facts about an obstruction cocycle.
#[derive(Debug, Clone)]
pub struct Obstruction {
    /// Indexed by local indices of the inertia group.
    pub omega: ComplexCocycle,
    /// Root-of-unity representative, when the table snaps.
    pub exact: Option<CocycleTable>,
    /// Sorted block dimensions of `C^w I`.
    pub blocks: Vec<usize>,
    pub trivial: bool,
    pub nondegenerate: bool,
    /// Largest deviation from `P1 P2 = lambda rho(n) P12` seen.
    pub residual: f64,
}

impl Obstruction {
    pub fn verdict(&self) -> String {
        if self.trivial && self.blocks.len() == 1 {
            "trivial".into()
        } else if self.trivial {
            format!("trivial blocks={:?}", self.blocks)
        } else if self.nondegenerate {
            "nondegenerate".into()
        } else {
            format!("blocks={:?}", self.blocks)
        }
    }
}

#[derive(Debug, Clone)]
pub struct MackeyOrbit {
    /// Indices into the decomposition's point list.
    pub members: Vec<usize>,
    pub dim: usize,
    /// Subgroup of `G/N`.
    pub inertia: Subgroup,
    /// Least element of each left coset of the inertia group.
    pub transversal: Vec<usize>,
    pub obstruction: Obstruction,
    /// `d` times the sum of the transversal.
    pub x: Character,
}

impl MackeyOrbit {
    /// Dimension of the summand, `|G|^2 d^2 / (|N|^2 |I|)`.
    pub fn delta(&self, g_order: usize, n_order: usize) -> u64 {
        let (g, n, d, i) = (
            g_order as u64,
            n_order as u64,
            self.dim as u64,
            self.inertia.order() as u64,
        );
        g * g * d * d / (n * n * i)
    }
}

#[derive(Debug, Clone)]
pub struct ReconstructionCheck {
    pub wedderburn: Vec<usize>,
    pub reconstructed: Vec<usize>,
}

impl ReconstructionCheck {
    pub fn holds(&self) -> bool {
        self.wedderburn == self.reconstructed
    }
}

#[derive(Debug, Clone)]
pub struct MackeyDecomposition {
    pub group: FiniteGroup,
    pub alpha: CocycleTable,
    pub normal: Subgroup,
    pub quotient: FiniteGroup,
    pub projection: GroupHom,
    pub points: Vec<IrrPoint>,
    pub orbits: Vec<MackeyOrbit>,
    pub descriptor: GradingClassDescriptor,
    pub reconstruction: ReconstructionCheck,
    /// `C^a G` is simple.
    pub alpha_nondegenerate: bool,
}

impl MackeyDecomposition {
    pub fn delta_sum(&self) -> u64 {
        self.orbits
            .iter()
            .map(|o| o.delta(self.group.order(), self.normal.order()))
            .sum()
    }

    /// Sum of `d^2 |T|` over the orbits.
    pub fn normal_dimension(&self) -> u64 {
        self.orbits
            .iter()
            .map(|o| (o.dim * o.dim * o.transversal.len()) as u64)
            .sum()
    }

    /// Exactly one orbit; then `|N|^2 |I| = d^2 |G|` holds at every point.
    pub fn is_simple_quotient(&self) -> Result<bool> {
        if self.orbits.len() != 1 {
            return Ok(false);
        }
        let o = &self.orbits[0];
        let n = self.normal.order();
        let lhs = n * n * o.inertia.order();
        let rhs = o.dim * o.dim * self.group.order();
        if lhs != rhs {
            return Err(Error::Consistency(format!(
                "|N|^2 |I| = {lhs} but d^2 |G| = {rhs}"
            )));
        }
        Ok(true)
    }

    /// Every inertia group trivial; with simple `C^a G` also `d^2 |G| = |N|^2`.
    pub fn is_elementary_quotient(&self) -> Result<bool> {
        let free = self.orbits.iter().all(|o| o.inertia.is_trivial());
        if free && self.alpha_nondegenerate {
            let n = self.normal.order();
            for o in &self.orbits {
                if o.dim * o.dim * self.group.order() != n * n {
                    return Err(Error::Consistency(format!(
                        "point of dimension {} violates d^2 |G| = |N|^2",
                        o.dim
                    )));
                }
            }
        }
        Ok(free)
    }
}

/// Points of `C^a N` grouped into `G`-orbits, with inertia groups,
/// transversals, obstructions and the two global consistency checks.
pub fn mackey_decompose(
    g: &FiniteGroup,
    alpha: &CocycleTable,
    n: &Subgroup,
    cfg: &OracleConfig,
) -> Result<MackeyDecomposition> {
    mackey_decompose_with(Exec::Parallel, g, alpha, n, cfg)
}

pub fn mackey_decompose_with(
    exec: Exec,
    g: &FiniteGroup,
    alpha: &CocycleTable,
    n: &Subgroup,
    cfg: &OracleConfig,
) -> Result<MackeyDecomposition> {
    if g.order() > cfg.bound {
        return Err(Error::Size {
            what: "group order",
            size: g.order(),
            bound: cfg.bound,
        });
    }
    if let Some((a, b)) = n.normality_violation(g) {
        return Err(Error::NotNormal(format!(
            "conjugating {} by {} leaves the subgroup",
            g.label(a),
            g.label(b)
        )));
    }
    let (quotient, proj) = g.quotient(n)?;
    let alg_g = TwistedGroupAlgebra::exact(g, alpha)?;
    let (ng, alpha_n) = restrict(g, alpha, n);
    let alg_n = TwistedGroupAlgebra::exact(&ng, &alpha_n)?;
    let mut points = alg_n.central_idempotents(cfg)?;

    // action of G on the points
    let action: Vec<Vec<usize>> = try_map(exec, &(0..g.order()).collect::<Vec<_>>(), |&x| {
        points
            .iter()
            .map(|p| {
                match_point(
                    &points,
                    &conjugate_idempotent(&alg_g, n, x, &p.idempotent),
                    cfg.guard,
                )
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut orbit_of = vec![usize::MAX; points.len()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for p in 0..points.len() {
        if orbit_of[p] != usize::MAX {
            continue;
        }
        let id = members.len();
        let mut orb: Vec<usize> = action.iter().map(|row| row[p]).collect();
        orb.sort_unstable();
        orb.dedup();
        for &q in &orb {
            orbit_of[q] = id;
        }
        members.push(orb);
    }
    // independent criterion: a non-vanishing product joins points of one orbit
    for (i, p) in points.iter().enumerate() {
        let rep = members[orbit_of[i]][0];
        if !same_orbit_by_product(&alg_g, n, &points[rep].idempotent, &p.idempotent, cfg.guard) {
            return Err(Error::Consistency(format!(
                "points {rep} and {i} are conjugate but the product test separates them"
            )));
        }
    }
    for (i, p) in points.iter_mut().enumerate() {
        p.orbit = Some(orbit_of[i]);
    }

    let mut lifts = vec![usize::MAX; quotient.order()];
    for x in 0..g.order() {
        let q = proj.apply(x);
        if lifts[q] == usize::MAX {
            lifts[q] = x;
        }
    }

    let ctx = Context {
        g,
        n,
        quotient: &quotient,
        proj: &proj,
        lifts: &lifts,
        alg_g: &alg_g,
        alg_n: &alg_n,
        action: &action,
        points: &points,
        cfg,
    };
    let orbits = try_map(exec, &members, |m| ctx.orbit(m))?;

    let wedderburn = alg_g.wedderburn_blocks(cfg)?.dims().to_vec();
    let mut reconstructed: Vec<usize> = orbits
        .iter()
        .flat_map(|o| {
            let scale = o.dim * o.transversal.len();
            o.obstruction.blocks.iter().map(move |f| scale * f)
        })
        .collect();
    reconstructed.sort_unstable();
    let reconstruction = ReconstructionCheck {
        wedderburn: wedderburn.clone(),
        reconstructed,
    };

    let summands = orbits
        .iter()
        .map(|o| {
            let twist = match &o.obstruction.exact {
                Some(t) => Twist::Exact(t.clone()),
                None => Twist::Numeric(o.obstruction.omega.clone()),
            };
            SummandDescriptor::new(&quotient, o.x.clone(), o.inertia.clone(), twist)
        })
        .collect::<Result<Vec<_>>>()?;
    let descriptor = GradingClassDescriptor::new(quotient.clone(), summands)?;
    let dims = descriptor.homogeneous_dims();
    if dims.values().iter().any(|&v| v != n.order() as u64) {
        return Err(Error::Consistency(format!(
            "quotient components have dimensions {:?}, expected {} everywhere",
            dims.values(),
            n.order()
        )));
    }

    Ok(MackeyDecomposition {
        group: g.clone(),
        alpha: alpha.clone(),
        normal: n.clone(),
        quotient,
        projection: proj,
        points,
        orbits,
        descriptor,
        reconstruction,
        alpha_nondegenerate: wedderburn.len() == 1,
    })
}

struct Context<'a> {
    g: &'a FiniteGroup,
    n: &'a Subgroup,
    quotient: &'a FiniteGroup,
    proj: &'a GroupHom,
    lifts: &'a [usize],
    alg_g: &'a TwistedGroupAlgebra,
    alg_n: &'a TwistedGroupAlgebra,
    action: &'a [Vec<usize>],
    points: &'a [IrrPoint],
    cfg: &'a OracleConfig,
}

impl Context<'_> {
    fn orbit(&self, members: &[usize]) -> Result<MackeyOrbit> {
        let rep = members[0];
        let dim = self.points[rep].dim;
        if members.iter().any(|&m| self.points[m].dim != dim) {
            return Err(Error::Consistency(
                "points of one orbit differ in dimension".into(),
            ));
        }
        let stab: Vec<usize> = (0..self.g.order())
            .filter(|&x| self.action[x][rep] == rep)
            .collect();
        let mut inertia_elems: Vec<usize> = stab.iter().map(|&x| self.proj.apply(x)).collect();
        inertia_elems.sort_unstable();
        inertia_elems.dedup();
        let inertia = self.quotient.subgroup(&inertia_elems)?;
        let transversal = self
            .quotient
            .left_cosets(&inertia)
            .representatives()
            .to_vec();
        if transversal.len() * inertia.order() != self.quotient.order()
            || transversal.len() != members.len()
        {
            return Err(Error::Consistency(format!(
                "orbit of size {} with inertia of order {} in a quotient of order {}",
                members.len(),
                inertia.order(),
                self.quotient.order()
            )));
        }
        let entries: Vec<(usize, u64)> = transversal.iter().map(|&t| (t, dim as u64)).collect();
        let x = Character::new(self.quotient, &entries)?;
        let obstruction = self.obstruction(rep, &inertia)?;
        Ok(MackeyOrbit {
            members: members.to_vec(),
            dim,
            inertia,
            transversal,
            obstruction,
            x,
        })
    }

    /// Intertwiner `P` with `P rho(n) = rho(u_s u_n u_s^-1) P`, scaled to be
    /// unitary with its first non-zero entry real positive.
    fn intertwiner(&self, rho: &[DMatrix<C64>], s: usize) -> Result<DMatrix<C64>> {
        let d = rho[0].nrows();
        if s == 0 {
            return Ok(DMatrix::identity(d, d));
        }
        let elems = self.n.elements();
        let twisted: Vec<DMatrix<C64>> = elems
            .iter()
            .map(|&x| {
                let y = self.g.conjugate(s, x);
                let j = self.n.local_index(y).expect("normal subgroup");
                &rho[j] * self.alg_g.conj_phase(s, x)
            })
            .collect();
        for k in 0..d * d {
            let mut seed = DMatrix::<C64>::zeros(d, d);
            seed[(k / d, k % d)] = C64::new(1.0, 0.0);
            let mut p = DMatrix::<C64>::zeros(d, d);
            for (i, r) in rho.iter().enumerate() {
                p += &twisted[i] * &seed * r.adjoint();
            }
            let norm = p.norm();
            if norm < self.cfg.guard {
                continue;
            }
            p *= C64::new((d as f64).sqrt() / norm, 0.0);
            let lead = p
                .iter()
                .find(|z| z.norm() > self.cfg.guard)
                .copied()
                .expect("non-zero matrix");
            p *= lead.conj() / lead.norm();
            let unitary = (&p * p.adjoint() - DMatrix::<C64>::identity(d, d)).camax();
            let mut worst: f64 = unitary;
            for (i, r) in rho.iter().enumerate() {
                worst = worst.max((&p * r - &twisted[i] * &p).camax());
            }
            if worst > self.cfg.guard {
                return Err(Error::Certification(format!(
                    "intertwiner residual {worst:.3e} for lift {}",
                    self.g.label(s)
                )));
            }
            return Ok(p);
        }
        Err(Error::Certification(format!(
            "no intertwiner found for lift {}; the point is not stable",
            self.g.label(s)
        )))
    }

    fn obstruction(&self, rep: usize, inertia: &Subgroup) -> Result<Obstruction> {
        let rho = self.alg_n.irreducible_rep(&self.points[rep], self.cfg)?;
        let d = rho[0].nrows();
        let (ig, emb) = inertia.as_group(self.quotient);
        let k = ig.order();
        let ps: Vec<DMatrix<C64>> = emb
            .iter()
            .map(|&q| self.intertwiner(&rho, self.lifts[q]))
            .collect::<Result<_>>()?;
        let phase = |a: usize, b: usize| self.alg_g.phase(a, b);
        let mut values = vec![C64::new(1.0, 0.0); k * k];
        let mut residual: f64 = 0.0;
        for a in 0..k {
            for b in 0..k {
                let (s1, s2) = (self.lifts[emb[a]], self.lifts[emb[b]]);
                let ab = ig.mul(a, b);
                let s12 = self.lifts[emb[ab]];
                let s1s2 = self.g.mul(s1, s2);
                let nn = self.g.mul(s1s2, self.g.inv(s12));
                let j = self
                    .n
                    .local_index(nn)
                    .ok_or_else(|| Error::Consistency("lift product leaves its coset".into()))?;
                let c = phase(s1, s2) * phase(nn, s12).conj();
                let lhs = &ps[a] * &ps[b];
                let rhs = &rho[j] * &ps[ab];
                let lambda = (rhs.adjoint() * &lhs).trace() / C64::new(d as f64, 0.0);
                residual = residual.max((&lhs - &rhs * lambda).camax());
                values[a * k + b] = c / lambda;
            }
        }
        if residual > self.cfg.guard {
            return Err(Error::Certification(format!(
                "intertwiner products deviate from scalars by {residual:.3e}"
            )));
        }
        let omega = ComplexCocycle::new(&ig, values, self.cfg.guard)?;
        let blocks = TwistedGroupAlgebra::numeric(&ig, &omega)?
            .wedderburn_blocks(self.cfg)?
            .dims()
            .to_vec();
        let trivial = blocks.contains(&1);
        let nondegenerate = blocks.len() == 1;
        let exact = omega.snap(&ig, SNAP_ORDER, self.cfg.guard);
        if let Some(t) = &exact {
            let exact_trivial = cohomologous(&ig, t, &CocycleTable::trivial(&ig))?.holds();
            if exact_trivial != trivial {
                return Err(Error::Consistency(format!(
                    "exact class test says trivial = {exact_trivial}, blocks {blocks:?}"
                )));
            }
        }
        Ok(Obstruction {
            omega,
            exact,
            blocks,
            trivial,
            nondegenerate,
            residual,
        })
    }
}
