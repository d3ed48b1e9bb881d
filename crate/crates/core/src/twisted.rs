//! The twisted group algebra `C^a G` in its regular representation, and a
//! numerical Wedderburn oracle built on it.
//!
//! Basis elements act monomially, so construction is exact; floating point
//! only enters through Hermitian eigendecompositions, and everything derived
//! from them is certified against explicit residual bounds.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cocycle::{CocycleTable, DEFAULT_NUMERIC_BOUND};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

pub type C64 = Complex64;

const MAX_ATTEMPTS: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub seed: u64,
    /// Eigenvalue clustering and residual tolerance.
    pub tol: f64,
    /// Guard band for integer rounding and snapping.
    pub guard: f64,
    /// Largest group order accepted by the oracle.
    pub bound: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            tol: 1e-9,
            guard: 1e-6,
            bound: DEFAULT_NUMERIC_BOUND,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// A 2-cocycle with arbitrary unit complex values.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexCocycle {
    order: usize,
    values: Vec<C64>,
}

impl ComplexCocycle {
    /// Checks unit modulus, normalization and the cocycle identity to `tol`.
    pub fn new(g: &FiniteGroup, values: Vec<C64>, tol: f64) -> Result<Self> {
        let n = g.order();
        if values.len() != n * n {
            return Err(Error::Validation(format!("need {} values", n * n)));
        }
        let w = Self { order: n, values };
        for a in 0..n {
            for b in 0..n {
                if (w.get(a, b).norm() - 1.0).abs() > tol {
                    return Err(Error::Certification(format!(
                        "value at ({a}, {b}) is not of unit modulus"
                    )));
                }
            }
            if (w.get(0, a) - 1.0).norm() > tol || (w.get(a, 0) - 1.0).norm() > tol {
                return Err(Error::Certification(format!("not normalized at {a}")));
            }
        }
        let r = w.identity_residual(g);
        if r > tol {
            return Err(Error::Certification(format!(
                "cocycle identity residual {r:.3e} exceeds {tol:.1e}"
            )));
        }
        Ok(w)
    }

    pub fn from_exact(t: &CocycleTable) -> Self {
        let n = t.group_order();
        let values = (0..n * n).map(|i| t.phase(i / n, i % n)).collect();
        Self { order: n, values }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> C64 {
        self.values[a * self.order + b]
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn identity_residual(&self, g: &FiniteGroup) -> f64 {
        let n = self.order;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let ab = g.mul(a, b);
                for c in 0..n {
                    let lhs = self.get(a, b) * self.get(ab, c);
                    let rhs = self.get(b, c) * self.get(a, g.mul(b, c));
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }

    /// Exponent table on the smallest `m <= max_m` whose roots of unity are
    /// within `guard` of every value.
    pub fn snap(&self, g: &FiniteGroup, max_m: u64, guard: f64) -> Option<CocycleTable> {
        let tau = 2.0 * std::f64::consts::PI;
        'scale: for m in 1..=max_m {
            let mut rows = vec![vec![0u64; self.order]; self.order];
            for (a, row) in rows.iter_mut().enumerate() {
                for (b, slot) in row.iter_mut().enumerate() {
                    let z = self.get(a, b);
                    let k = (z.arg() / tau * m as f64).round().rem_euclid(m as f64) as u64;
                    let target = C64::from_polar(1.0, tau * k as f64 / m as f64);
                    if (z - target).norm() > guard {
                        continue 'scale;
                    }
                    *slot = k;
                }
            }
            return CocycleTable::new(g, m, rows).ok();
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Twist {
    Exact(CocycleTable),
    Numeric(ComplexCocycle),
}

impl Twist {
    pub fn is_exact(&self) -> bool {
        matches!(self, Twist::Exact(_))
    }
}

#[derive(Debug, Clone)]
pub struct TwistedGroupAlgebra {
    group: FiniteGroup,
    twist: Twist,
    phase: Vec<C64>,
}

/// One simple block of the algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub dim: usize,
    /// Central idempotent as coefficients on the basis `u_g`.
    pub idempotent: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WedderburnData {
    dims: Vec<usize>,
    blocks: Vec<Block>,
    residual: f64,
    attempts: u64,
}

impl WedderburnData {
    /// Sorted block dimensions.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Largest certification residual seen.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn attempts(&self) -> u64 {
        self.attempts
    }
}

/// Central idempotent of a block of `C^a N`; the orbit id is set by the
/// Mackey decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrPoint {
    pub idempotent: Vec<C64>,
    pub dim: usize,
    pub orbit: Option<usize>,
}

impl TwistedGroupAlgebra {
    pub fn exact(g: &FiniteGroup, alpha: &CocycleTable) -> Result<Self> {
        alpha.check(g)?;
        let n = g.order();
        let phase = (0..n * n).map(|i| alpha.phase(i / n, i % n)).collect();
        Ok(Self {
            group: g.clone(),
            twist: Twist::Exact(alpha.clone()),
            phase,
        })
    }

    pub fn numeric(g: &FiniteGroup, omega: &ComplexCocycle) -> Result<Self> {
        if omega.group_order() != g.order() {
            return Err(Error::Validation(
                "cocycle size does not match the group".into(),
            ));
        }
        Ok(Self {
            group: g.clone(),
            twist: Twist::Numeric(omega.clone()),
            phase: omega.values.clone(),
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn phase(&self, a: usize, b: usize) -> C64 {
        self.phase[a * self.group.order() + b]
    }

    pub fn basis(&self, g: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); self.dim()];
        v[g] = C64::new(1.0, 0.0);
        v
    }

    pub fn one(&self) -> Vec<C64> {
        self.basis(0)
    }

    pub fn mul(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let n = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (a, &xa) in x.iter().enumerate() {
            if xa == C64::new(0.0, 0.0) {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                if yb == C64::new(0.0, 0.0) {
                    continue;
                }
                out[self.group.mul(a, b)] += xa * yb * self.phase(a, b);
            }
        }
        out
    }

    /// `(sum a_g u_g)^* = sum conj(a_g) u_g^-1`, with `u_g^-1` a phase times `u_{g^-1}`.
    pub fn star(&self, x: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (a, &xa) in x.iter().enumerate() {
            let ai = self.group.inv(a);
            out[ai] += xa.conj() * self.phase(a, ai).conj();
        }
        out
    }

    /// Matrix of `y -> x y` on the basis `u_g`.
    pub fn left_matrix(&self, x: &[C64]) -> DMatrix<C64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (a, &xa) in x.iter().enumerate() {
            if xa == C64::new(0.0, 0.0) {
                continue;
            }
            for b in 0..n {
                m[(self.group.mul(a, b), b)] += xa * self.phase(a, b);
            }
        }
        m
    }

    /// Matrix of `y -> y x` on the basis `u_g`.
    pub fn right_matrix(&self, x: &[C64]) -> DMatrix<C64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (b, &xb) in x.iter().enumerate() {
            if xb == C64::new(0.0, 0.0) {
                continue;
            }
            for a in 0..n {
                m[(self.group.mul(a, b), a)] += xb * self.phase(a, b);
            }
        }
        m
    }

    /// Left regular matrix of `u_g`: a monomial matrix of roots of unity.
    pub fn regular_matrix(&self, g: usize) -> DMatrix<C64> {
        self.left_matrix(&self.basis(g))
    }

    /// `u_h u_g u_h^-1 = conj_phase(h, g) u_{h g h^-1}`
    pub fn conj_phase(&self, h: usize, g: usize) -> C64 {
        let hg = self.group.mul(h, g);
        let hi = self.group.inv(h);
        self.phase(h, g) * self.phase(hg, hi) * self.phase(h, hi).conj()
    }

    fn conj_exponent(&self, alpha: &CocycleTable, h: usize, g: usize) -> u64 {
        let m = alpha.scale();
        let hg = self.group.mul(h, g);
        let hi = self.group.inv(h);
        (alpha.get(h, g) + alpha.get(hg, hi) + m - alpha.get(h, hi)) % m
    }

    /// Basis of the center: one class sum per regular conjugacy class,
    /// phases propagated along conjugation. Exact for exact twists.
    pub fn center_basis(&self, tol: f64) -> Vec<Vec<C64>> {
        let n = self.dim();
        let g = &self.group;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for g0 in 0..n {
            if seen[g0] {
                continue;
            }
            let regular;
            let mut coeff = vec![C64::new(0.0, 0.0); n];
            match &self.twist {
                Twist::Exact(alpha) => {
                    let m = alpha.scale();
                    let mut val: Vec<Option<u64>> = vec![None; n];
                    val[g0] = Some(0);
                    let mut ok = true;
                    let mut queue = VecDeque::from([g0]);
                    while let Some(x) = queue.pop_front() {
                        seen[x] = true;
                        for h in 0..n {
                            let y = g.conjugate(h, x);
                            let v = (val[x].unwrap() + self.conj_exponent(alpha, h, x)) % m;
                            match val[y] {
                                None => {
                                    val[y] = Some(v);
                                    queue.push_back(y);
                                }
                                Some(w) if w != v => ok = false,
                                _ => {}
                            }
                        }
                    }
                    regular = ok;
                    for (x, v) in val.iter().enumerate() {
                        if let Some(k) = v {
                            coeff[x] = C64::from_polar(
                                1.0,
                                2.0 * std::f64::consts::PI * *k as f64 / m as f64,
                            );
                        }
                    }
                }
                Twist::Numeric(_) => {
                    let mut val: Vec<Option<C64>> = vec![None; n];
                    val[g0] = Some(C64::new(1.0, 0.0));
                    let mut ok = true;
                    let mut queue = VecDeque::from([g0]);
                    while let Some(x) = queue.pop_front() {
                        seen[x] = true;
                        for h in 0..n {
                            let y = g.conjugate(h, x);
                            let v = val[x].unwrap() * self.conj_phase(h, x);
                            match val[y] {
                                None => {
                                    val[y] = Some(v);
                                    queue.push_back(y);
                                }
                                Some(w) if (w - v).norm() > tol.max(1e-12) * 1e3 => ok = false,
                                _ => {}
                            }
                        }
                    }
                    regular = ok;
                    for (x, v) in val.iter().enumerate() {
                        if let Some(z) = v {
                            coeff[x] = *z;
                        }
                    }
                }
            }
            if regular {
                out.push(coeff);
            }
        }
        out
    }

    /// Block dimensions and central idempotents from the spectrum of a
    /// random self-adjoint central element.
    pub fn wedderburn_blocks(&self, cfg: &OracleConfig) -> Result<WedderburnData> {
        let n = self.dim();
        if n > cfg.bound {
            return Err(Error::Size {
                what: "algebra dimension",
                size: n,
                bound: cfg.bound,
            });
        }
        let center = self.center_basis(cfg.tol);
        let k = center.len();
        let mut last_err = None;
        for attempt in 0..MAX_ATTEMPTS {
            let mut rng =
                ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)));
            let mut z = vec![C64::new(0.0, 0.0); n];
            for basis in &center {
                let r = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                for (zi, bi) in z.iter_mut().zip(basis) {
                    *zi += r * bi;
                }
            }
            let zs = self.star(&z);
            let h: Vec<C64> = z.iter().zip(&zs).map(|(a, b)| a + b).collect();
            let lh = self.left_matrix(&h);
            let eig = lh.symmetric_eigen();
            let clusters = match cluster(eig.eigenvalues.as_slice(), cfg) {
                Some(c) if c.len() == k => c,
                Some(c) => {
                    last_err = Some(format!(
                        "{} eigenvalue clusters for a {k}-dimensional center",
                        c.len()
                    ));
                    continue;
                }
                None => {
                    last_err = Some("eigenvalue gap inside the ambiguity band".into());
                    continue;
                }
            };
            let mut blocks = Vec::with_capacity(k);
            let mut failed = None;
            for members in clusters {
                let mut e = vec![C64::new(0.0, 0.0); n];
                for &j in &members {
                    let v = eig.eigenvectors.column(j);
                    let c0 = v[0].conj();
                    for (r, er) in e.iter_mut().enumerate() {
                        *er += v[r] * c0;
                    }
                }
                let d2 = e[0].re * n as f64;
                let d = d2.max(0.0).sqrt();
                let dr = d.round();
                if (d - dr).abs() > cfg.guard || dr < 1.0 || (dr * dr) as usize != members.len() {
                    failed = Some(format!(
                        "block trace {d2:.9} does not round to a square matching multiplicity {}",
                        members.len()
                    ));
                    break;
                }
                blocks.push(Block {
                    dim: dr as usize,
                    idempotent: e,
                });
            }
            if let Some(msg) = failed {
                last_err = Some(msg);
                continue;
            }
            let residual = self.certify_blocks(&blocks);
            if residual > cfg.tol {
                last_err = Some(format!(
                    "idempotent residual {residual:.3e} exceeds {:.1e}",
                    cfg.tol
                ));
                continue;
            }
            let mut dims: Vec<usize> = blocks.iter().map(|b| b.dim).collect();
            dims.sort_unstable();
            if dims.iter().map(|d| d * d).sum::<usize>() != n {
                return Err(Error::Certification(format!(
                    "block dimensions {dims:?} do not account for dimension {n}"
                )));
            }
            return Ok(WedderburnData {
                dims,
                blocks,
                residual,
                attempts: attempt + 1,
            });
        }
        Err(Error::Certification(format!(
            "Wedderburn oracle gave up after {MAX_ATTEMPTS} samples: {}",
            last_err.unwrap_or_default()
        )))
    }

    fn certify_blocks(&self, blocks: &[Block]) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        let mut total = vec![C64::new(0.0, 0.0); n];
        for (i, b) in blocks.iter().enumerate() {
            let e = &b.idempotent;
            let sq = self.mul(e, e);
            worst = worst.max(max_diff(&sq, e));
            worst = worst.max(max_diff(&self.star(e), e));
            for g in 0..n {
                let u = self.basis(g);
                worst = worst.max(max_diff(&self.mul(&u, e), &self.mul(e, &u)));
            }
            for other in &blocks[i + 1..] {
                // for orthogonal projectors PQ = 0 iff tr(PQ) = 0
                worst = worst.max(self.trace_form(e, &other.idempotent).norm());
            }
            for (t, x) in total.iter_mut().zip(e) {
                *t += x;
            }
        }
        worst.max(max_diff(&total, &self.one()))
    }

    /// `tr L(x y) = |G| (x y)_e`
    fn trace_form(&self, x: &[C64], y: &[C64]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (a, &xa) in x.iter().enumerate() {
            let ai = self.group.inv(a);
            s += xa * y[ai] * self.phase(a, ai);
        }
        s * self.dim() as f64
    }

    /// One point per simple block.
    pub fn central_idempotents(&self, cfg: &OracleConfig) -> Result<Vec<IrrPoint>> {
        Ok(self
            .wedderburn_blocks(cfg)?
            .blocks
            .into_iter()
            .map(|b| IrrPoint {
                idempotent: b.idempotent,
                dim: b.dim,
                orbit: None,
            })
            .collect())
    }

    /// An irreducible unitary projective representation on the block of `e`:
    /// `rho(u_g)` for every `g`, with `rho(u_a) rho(u_b) = phase(a,b) rho(u_ab)`.
    pub fn irreducible_rep(
        &self,
        point: &IrrPoint,
        cfg: &OracleConfig,
    ) -> Result<Vec<DMatrix<C64>>> {
        let n = self.dim();
        let d = point.dim;
        let e = &point.idempotent;
        let mut last_err = String::new();
        for attempt in 0..MAX_ATTEMPTS {
            let p = if d == 1 {
                e.clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(
                    cfg.seed ^ 0x5151_0000 ^ attempt.wrapping_mul(0x2545_f491),
                );
                let r: Vec<C64> = (0..n)
                    .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect();
                let rs = self.star(&r);
                let a: Vec<C64> = r.iter().zip(&rs).map(|(x, y)| x + y).collect();
                let b = self.mul(&self.mul(e, &a), e);
                let shift = b.iter().map(|x| x.norm()).sum::<f64>() + 1.0;
                let mut h = self.left_matrix(&b);
                let le = self.left_matrix(e);
                for i in 0..n {
                    for j in 0..n {
                        let id = if i == j { 1.0 } else { 0.0 };
                        h[(i, j)] += (C64::new(id, 0.0) - le[(i, j)]) * shift;
                    }
                }
                let eig = h.symmetric_eigen();
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
                let low = eig.eigenvalues[order[0]];
                let size = order
                    .iter()
                    .take_while(|&&i| eig.eigenvalues[i] - low < cfg.tol * 1e3)
                    .count();
                let gap = order
                    .get(size)
                    .map_or(f64::INFINITY, |&i| eig.eigenvalues[i] - low);
                if size != d || gap < cfg.guard {
                    last_err = format!("lowest cluster has size {size}, expected {d}");
                    continue;
                }
                let mut p = vec![C64::new(0.0, 0.0); n];
                for &j in &order[..d] {
                    let v = eig.eigenvectors.column(j);
                    let c0 = v[0].conj();
                    for (row, pr) in p.iter_mut().enumerate() {
                        *pr += v[row] * c0;
                    }
                }
                p
            };
            let rp = self.right_matrix(&p);
            let eig = rp.symmetric_eigen();
            let ones: Vec<usize> = (0..n)
                .filter(|&i| (eig.eigenvalues[i] - 1.0).abs() < 1e-6)
                .collect();
            if ones.len() != d {
                last_err = format!(
                    "minimal left ideal has dimension {}, expected {d}",
                    ones.len()
                );
                continue;
            }
            let v = DMatrix::from_fn(n, d, |i, j| eig.eigenvectors[(i, ones[j])]);
            let vh = v.adjoint();
            let rho: Vec<DMatrix<C64>> =
                (0..n).map(|g| &vh * self.regular_matrix(g) * &v).collect();
            let chi: f64 = rho.iter().map(|r| r.trace().norm_sqr()).sum();
            if (chi - n as f64).abs() > cfg.guard * n as f64 {
                last_err = format!("character norm {chi:.6} differs from {n}");
                continue;
            }
            let mut worst: f64 = 0.0;
            for a in 0..n {
                for b in 0..n {
                    let lhs = &rho[a] * &rho[b];
                    let rhs = &rho[self.group.mul(a, b)] * self.phase(a, b);
                    worst = worst.max((lhs - rhs).camax());
                }
            }
            if worst > cfg.guard {
                last_err = format!("representation residual {worst:.3e}");
                continue;
            }
            return Ok(rho);
        }
        Err(Error::Certification(format!(
            "irreducible representation extraction failed: {last_err}"
        )))
    }
}

/// Groups sorted eigenvalues; `None` when some gap sits in the ambiguity band
/// between `tol` and `guard`.
fn cluster(values: &[f64], cfg: &OracleConfig) -> Option<Vec<Vec<usize>>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let scale = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let (tight, loose) = (cfg.tol * scale, cfg.guard * scale);
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut prev: Option<f64> = None;
    for &i in &order {
        let v = values[i];
        match prev {
            Some(p) if v - p < tight => out.last_mut().unwrap().push(i),
            Some(p) if v - p < loose => return None,
            _ => out.push(vec![i]),
        }
        prev = Some(v);
    }
    Some(out)
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn regular_rep(
    g: &FiniteGroup,
    alpha: &CocycleTable,
    cfg: &OracleConfig,
) -> Result<TwistedGroupAlgebra> {
    if g.order() > cfg.bound {
        return Err(Error::Size {
            what: "group order",
            size: g.order(),
            bound: cfg.bound,
        });
    }
    TwistedGroupAlgebra::exact(g, alpha)
}

/// Points of `C^a N` for `N` given as its own group with the restricted cocycle.
pub fn central_idempotents(
    n: &FiniteGroup,
    alpha: &CocycleTable,
    cfg: &OracleConfig,
) -> Result<Vec<IrrPoint>> {
    regular_rep(n, alpha, cfg)?.central_idempotents(cfg)
}

/// `u_g iota u_g^-1` for `iota` in `C^a N`, in local coordinates of `N`.
pub fn conjugate_idempotent(
    a: &TwistedGroupAlgebra,
    n: &Subgroup,
    g: usize,
    iota: &[C64],
) -> Vec<C64> {
    let grp = a.group();
    let mut out = vec![C64::new(0.0, 0.0); n.order()];
    for (i, &x) in n.elements().iter().enumerate() {
        if iota[i] == C64::new(0.0, 0.0) {
            continue;
        }
        let y = grp.conjugate(g, x);
        let j = n
            .local_index(y)
            .expect("conjugation preserves a normal subgroup");
        out[j] += iota[i] * a.conj_phase(g, x);
    }
    out
}

/// Index of the point within `guard` of `v`.
pub fn match_point(points: &[IrrPoint], v: &[C64], guard: f64) -> Result<usize> {
    let mut best = (f64::INFINITY, usize::MAX);
    for (i, p) in points.iter().enumerate() {
        let d = max_diff(&p.idempotent, v);
        if d < best.0 {
            best = (d, i);
        }
    }
    if best.0 > guard {
        return Err(Error::Certification(format!(
            "conjugated idempotent is {:.3e} from the nearest point",
            best.0
        )));
    }
    Ok(best.1)
}

fn embed(n: &Subgroup, order: usize, iota: &[C64]) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); order];
    for (i, &x) in n.elements().iter().enumerate() {
        v[x] = iota[i];
    }
    v
}

/// Non-vanishing test `iota' C^a G iota != 0`.
pub fn same_orbit_by_product(
    a: &TwistedGroupAlgebra,
    n: &Subgroup,
    iota: &[C64],
    other: &[C64],
    guard: f64,
) -> bool {
    let order = a.dim();
    let x = embed(n, order, iota);
    let y = embed(n, order, other);
    (0..order).any(|g| {
        let prod = a.mul(&a.mul(&y, &a.basis(g)), &x);
        prod.iter().any(|c| c.norm() > guard)
    })
}

/// Orbit test by explicit conjugation.
pub fn same_orbit_by_conjugation(
    a: &TwistedGroupAlgebra,
    n: &Subgroup,
    iota: &[C64],
    other: &[C64],
    guard: f64,
) -> bool {
    (0..a.dim()).any(|g| max_diff(&conjugate_idempotent(a, n, g, iota), other) < guard)
}

/// Both criteria; a disagreement is an error.
pub fn same_orbit(
    a: &TwistedGroupAlgebra,
    n: &Subgroup,
    iota: &[C64],
    other: &[C64],
    guard: f64,
) -> Result<bool> {
    let p = same_orbit_by_product(a, n, iota, other, guard);
    let c = same_orbit_by_conjugation(a, n, iota, other, guard);
    if p != c {
        return Err(Error::Consistency(format!(
            "orbit criteria disagree: product test {p}, conjugation test {c}"
        )));
    }
    Ok(p)
}
