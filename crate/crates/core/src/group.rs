//! Finite groups stored as dense multiplication tables.
//!
//! Element `0` is always the identity. Subgroups, homomorphisms and coset
//! spaces refer to elements by index into the parent table and do not borrow
//! the parent; every method that needs the table takes it as an argument.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

/// Default cap for brute-force subgroup and isomorphism enumeration.
pub const DEFAULT_ENUMERATION_BOUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a raw table: latin square, identity at index 0, associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Validation("empty table".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            let mut seen = vec![false; n];
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::Validation(format!(
                        "entry ({i},{j}) = {v} out of range"
                    )));
                }
                if seen[v] {
                    return Err(Error::Validation(format!(
                        "row {i} repeats {v}: left multiplication by {i} is not invertible"
                    )));
                }
                seen[v] = true;
            }
            mul.extend_from_slice(row);
        }
        for g in 0..n {
            if mul[g] != g || mul[g * n] != g {
                return Err(Error::Validation(format!(
                    "element 0 is not a two-sided identity (fails at {g})"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a * n + b];
                for c in 0..n {
                    if mul[ab * n + c] != mul[a * n + mul[b * n + c]] {
                        return Err(Error::Validation(format!(
                            "not associative on the triple ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b;
                    break;
                }
            }
        }
        Ok(Self {
            order: n,
            mul,
            inv,
            labels: None,
        })
    }

    /// Builds from a closure known to define a group; used by the catalog
    /// constructors, which are correct by construction.
    fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mul.push(f(a, b));
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| mul[a * n + b] == 0).expect("group table");
        }
        Self {
            order: n,
            mul,
            inv,
            labels: None,
        }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group order must be positive");
        let mut g = Self::from_fn(n, |a, b| (a + b) % n);
        g.labels = Some((0..n).map(|k| format!("g^{k}")).collect());
        g
    }

    /// Element `(i, j)` of `a x b` has index `i * |b| + j`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let m = b.order;
        let mut g = Self::from_fn(a.order * m, |x, y| {
            a.mul(x / m, y / m) * m + b.mul(x % m, y % m)
        });
        g.labels = Some(
            (0..a.order * m)
                .map(|x| format!("({},{})", a.label(x / m), b.label(x % m)))
                .collect(),
        );
        g
    }

    /// Dihedral group of order `2n`; `r^k s^f` has index `f * n + k`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1, "dihedral parameter must be positive");
        let mut g = Self::from_fn(2 * n, |x, y| {
            let (a, f) = (x % n, x / n);
            let (b, h) = (y % n, y / n);
            let k = if f == 0 { (a + b) % n } else { (a + n - b) % n };
            ((f + h) % 2) * n + k
        });
        g.labels = Some(
            (0..2 * n)
                .map(|x| {
                    if x < n {
                        format!("r^{x}")
                    } else {
                        format!("r^{}s", x - n)
                    }
                })
                .collect(),
        );
        g
    }

    /// Symmetric group on `n <= 4` points; permutations in lexicographic
    /// order, product `(s*t)(i) = s(t(i))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 4 {
            return Err(Error::Domain(format!("symmetric({n}) is outside 1..=4")));
        }
        let perms = permutations(n);
        let index: HashMap<Vec<usize>, usize> = perms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let mut g = Self::from_fn(perms.len(), |a, b| {
            let c: Vec<usize> = (0..n).map(|i| perms[a][perms[b][i]]).collect();
            index[&c]
        });
        g.labels = Some(
            perms
                .iter()
                .map(|p| p.iter().map(|v| (v + 1).to_string()).collect::<String>())
                .collect(),
        );
        Ok(g)
    }

    /// Quaternion group: indices 0..8 are 1, -1, i, -i, j, -j, k, -k.
    pub fn quaternion8() -> Self {
        // unit product table on {1, i, j, k} as (sign, unit)
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let mut g = Self::from_fn(8, |x, y| {
            let (ux, sx) = (x / 2, x % 2 == 1);
            let (uy, sy) = (y / 2, y % 2 == 1);
            let (s, u) = UNIT[ux][uy];
            2 * u + usize::from(s ^ sx ^ sy)
        });
        g.labels = Some(
            ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        );
        g
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::Validation(format!(
                "{} labels for a group of order {}",
                labels.len(),
                self.order
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `a b a^-1`
    #[inline]
    pub fn conjugate(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut r = 0;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, g| lcm(acc, self.element_order(g)))
    }

    /// Sorted multiset of element orders.
    pub fn order_census(&self) -> Vec<usize> {
        let mut c: Vec<usize> = (0..self.order).map(|g| self.element_order(g)).collect();
        c.sort_unstable();
        c
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Row-major multiplication table.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.order, (0..self.order).collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(self.order, vec![0])
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let b = self.mul(a, g);
                if !member[b] {
                    member[b] = true;
                    queue.push_back(b);
                }
            }
        }
        Subgroup::from_mask(member)
    }

    /// Checks that `elements` is closed under products and inverses.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut member = vec![false; self.order];
        for &e in elements {
            if e >= self.order {
                return Err(Error::Validation(format!("element {e} out of range")));
            }
            member[e] = true;
        }
        if !member[0] {
            return Err(Error::Validation(
                "subset does not contain the identity".into(),
            ));
        }
        let sub = Subgroup::from_mask(member);
        for &a in sub.elements() {
            if !sub.contains(self.inv(a)) {
                return Err(Error::Validation(format!(
                    "not closed under inverse at {a}"
                )));
            }
            for &b in sub.elements() {
                if !sub.contains(self.mul(a, b)) {
                    return Err(Error::Validation(format!(
                        "not closed under products: {a} * {b} = {}",
                        self.mul(a, b)
                    )));
                }
            }
        }
        Ok(sub)
    }

    /// Every subgroup, ordered by size and then by element list.
    pub fn subgroups(&self, bound: usize) -> Result<Vec<Subgroup>> {
        if self.order > bound {
            return Err(Error::Size {
                what: "group order",
                size: self.order,
                bound,
            });
        }
        let words = self.order.div_ceil(64);
        let to_mask = |s: &Subgroup| {
            let mut m = vec![0u64; words];
            for &e in s.elements() {
                m[e / 64] |= 1 << (e % 64);
            }
            m
        };
        let mut cyclic: Vec<(usize, Subgroup)> = Vec::new();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for g in 0..self.order {
            let c = self.generate(&[g]);
            if seen.insert(to_mask(&c)) {
                cyclic.push((g, c));
            }
        }
        // join-closure over cyclic subgroups; each entry keeps a generating list
        let mut all: Vec<(Vec<usize>, Subgroup)> =
            cyclic.iter().map(|(g, c)| (vec![*g], c.clone())).collect();
        let mut frontier: Vec<usize> = (0..all.len()).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for idx in frontier {
                for (g, _) in &cyclic {
                    if all[idx].1.contains(*g) {
                        continue;
                    }
                    let mut gens = all[idx].0.clone();
                    gens.push(*g);
                    let joined = self.generate(&gens);
                    if seen.insert(to_mask(&joined)) {
                        all.push((gens, joined));
                        next.push(all.len() - 1);
                    }
                }
            }
            frontier = next;
        }
        let mut subs: Vec<Subgroup> = all.into_iter().map(|(_, s)| s).collect();
        subs.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.elements().cmp(b.elements()))
        });
        Ok(subs)
    }

    pub fn normal_subgroups(&self, bound: usize) -> Result<Vec<Subgroup>> {
        Ok(self
            .subgroups(bound)?
            .into_iter()
            .filter(|s| s.is_normal(self))
            .collect())
    }

    pub fn left_cosets(&self, h: &Subgroup) -> CosetSpace {
        CosetSpace::new(self, h, true)
    }

    /// Quotient by a normal subgroup; coset blocks are ordered by their
    /// smallest element, so the identity coset is element 0.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
        if let Some((g, h)) = n.normality_violation(self) {
            return Err(Error::NotNormal(format!(
                "{} * {} * {}^-1 = {} lies outside the subgroup",
                g,
                h,
                g,
                self.conjugate(g, h)
            )));
        }
        let cosets = self.left_cosets(n);
        let k = cosets.len();
        let reps = cosets.representatives().to_vec();
        let mut q = Self::from_fn(k, |a, b| cosets.block_of(self.mul(reps[a], reps[b])));
        q.labels = Some(
            reps.iter()
                .map(|&r| format!("{}N", self.label(r)))
                .collect(),
        );
        let images = (0..self.order).map(|g| cosets.block_of(g)).collect();
        let hom = GroupHom {
            source_order: self.order,
            target_order: k,
            images,
        };
        Ok((q, hom))
    }

    /// Action on left cosets of `h`, `g . (x h) = (g x) h`.
    pub fn coset_action(&self, h: &Subgroup) -> CosetAction {
        let cosets = self.left_cosets(h);
        let perms: Vec<Vec<usize>> = (0..self.order)
            .map(|g| {
                cosets
                    .representatives()
                    .iter()
                    .map(|&r| cosets.block_of(self.mul(g, r)))
                    .collect()
            })
            .collect();
        CosetAction { cosets, perms }
    }

    /// Invariant factors `n_1 | n_2 | ... | n_r` and a generating tuple
    /// realizing `G = <g_1> x ... x <g_r>`; `None` for non-abelian groups.
    pub fn abelian_invariants(&self) -> Option<AbelianInvariants> {
        if !self.is_abelian() {
            return None;
        }
        let factors = invariant_factors_from_census(self);
        let generators = self
            .find_basis(&factors)
            .expect("an abelian group has a basis for its invariant factors");
        Some(AbelianInvariants {
            factors,
            generators,
        })
    }

    fn find_basis(&self, factors: &[usize]) -> Option<Vec<usize>> {
        fn extend(
            g: &FiniteGroup,
            factors: &[usize],
            pos: usize,
            span: &[bool],
            chosen: &mut Vec<usize>,
        ) -> bool {
            if pos == 0 {
                return true;
            }
            let k = factors[pos - 1];
            for cand in 0..g.order() {
                if g.element_order(cand) != k {
                    continue;
                }
                let mut x = cand;
                let mut disjoint = true;
                for _ in 1..k {
                    if span[x] {
                        disjoint = false;
                        break;
                    }
                    x = g.mul(x, cand);
                }
                if !disjoint {
                    continue;
                }
                let mut next = vec![false; g.order()];
                for a in (0..g.order()).filter(|&a| span[a]) {
                    let mut y = a;
                    for _ in 0..k {
                        next[y] = true;
                        y = g.mul(y, cand);
                    }
                }
                chosen.push(cand);
                if extend(g, factors, pos - 1, &next, chosen) {
                    return true;
                }
                chosen.pop();
            }
            false
        }
        let mut span = vec![false; self.order];
        span[0] = true;
        let mut chosen = Vec::new();
        if extend(self, factors, factors.len(), &span, &mut chosen) {
            chosen.reverse();
            Some(chosen)
        } else {
            None
        }
    }

    /// Primes `p` with the set of `p`-elements; the group is nilpotent iff every
    /// such set has the full `p`-part of the order.
    pub fn sylow_sets(&self) -> Vec<(usize, Vec<usize>)> {
        prime_factors(self.order)
            .into_iter()
            .map(|p| {
                let els = (0..self.order)
                    .filter(|&g| is_power_of(self.element_order(g), p))
                    .collect();
                (p, els)
            })
            .collect()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.sylow_sets()
            .iter()
            .all(|(p, els)| els.len() == p.pow(valuation(self.order, *p)))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn valuation(mut n: usize, p: usize) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn is_square_free(n: usize) -> bool {
    prime_factors(n).iter().all(|&p| valuation(n, p) <= 1)
}

pub fn is_cube_free(n: usize) -> bool {
    prime_factors(n).iter().all(|&p| valuation(n, p) <= 2)
}

pub fn integer_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

fn is_power_of(mut k: usize, p: usize) -> bool {
    while k.is_multiple_of(p) {
        k /= p;
    }
    k == 1
}

/// p-primary type from the census `#{g : g^(p^k) = e}`, combined into
/// invariant factors.
fn invariant_factors_from_census(g: &FiniteGroup) -> Vec<usize> {
    let orders: Vec<usize> = (0..g.order()).map(|x| g.element_order(x)).collect();
    let mut per_prime: Vec<(usize, Vec<u32>)> = Vec::new();
    for p in prime_factors(g.order()) {
        let v = valuation(g.order(), p);
        // parts_ge[k] = number of cyclic factors of order >= p^(k+1)
        let mut parts_ge = Vec::new();
        let mut prev = 1usize;
        for k in 1..=v {
            let pk = p.pow(k);
            let count = orders
                .iter()
                .filter(|&&o| is_power_of(o, p) && pk % o == 0)
                .count();
            if count == prev {
                break;
            }
            let ratio = count / prev;
            parts_ge.push(valuation(ratio, p));
            prev = count;
        }
        // exponents of the p-parts, largest first
        let rank = parts_ge.first().copied().unwrap_or(0) as usize;
        let mut exps = vec![0u32; rank];
        for (k, &c) in parts_ge.iter().enumerate() {
            for e in exps.iter_mut().take(c as usize) {
                *e = k as u32 + 1;
            }
        }
        per_prime.push((p, exps));
    }
    let r = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors: Vec<usize> = (0..r)
        .map(|i| {
            per_prime
                .iter()
                .map(|(p, e)| e.get(i).map_or(1, |&k| p.pow(k)))
                .product()
        })
        .collect();
    factors.reverse();
    factors
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub factors: Vec<usize>,
    /// `generators[i]` has order `factors[i]`.
    pub generators: Vec<usize>,
}

impl AbelianInvariants {
    /// Square-free exponent: a product of elementary abelian Sylow subgroups.
    pub fn has_square_free_exponent(&self) -> bool {
        self.factors.last().is_none_or(|&e| is_square_free(e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent_order: usize,
    elements: Vec<usize>,
    member: Vec<bool>,
}

impl Subgroup {
    fn from_mask(member: Vec<bool>) -> Self {
        let elements = member
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect();
        Self {
            parent_order: member.len(),
            elements,
            member,
        }
    }

    fn from_sorted(parent_order: usize, elements: Vec<usize>) -> Self {
        let mut member = vec![false; parent_order];
        for &e in &elements {
            member[e] = true;
        }
        Self {
            parent_order,
            elements,
            member,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.elements.len()
    }

    /// Sorted element indices; index 0 of this list is the identity.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.member[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }

    /// First `(g, h)` with `g h g^-1` outside the subgroup.
    pub fn normality_violation(&self, g: &FiniteGroup) -> Option<(usize, usize)> {
        for a in 0..g.order() {
            for &h in &self.elements {
                if !self.contains(g.conjugate(a, h)) {
                    return Some((a, h));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, g: &FiniteGroup) -> bool {
        self.normality_violation(g).is_none()
    }

    /// The subgroup as a group in its own right, with the embedding into the
    /// parent (local index `i` is parent element `elements()[i]`).
    pub fn as_group(&self, g: &FiniteGroup) -> (FiniteGroup, Vec<usize>) {
        let local: HashMap<usize, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect();
        let els = &self.elements;
        let mut h = FiniteGroup::from_fn(els.len(), |a, b| local[&g.mul(els[a], els[b])]);
        h.labels = Some(els.iter().map(|&e| g.label(e)).collect());
        (h, els.clone())
    }

    pub fn local_index(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }
}

/// A homomorphism given by the image of every source element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source_order: usize,
    target_order: usize,
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() {
            return Err(Error::Validation(format!(
                "{} images for a source of order {}",
                images.len(),
                source.order()
            )));
        }
        if images.iter().any(|&i| i >= target.order()) {
            return Err(Error::Validation("image index out of range".into()));
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(Error::Validation(format!(
                        "not multiplicative on the pair ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Self {
            source_order: source.order(),
            target_order: target.order(),
            images,
        })
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.images[g]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn source_order(&self) -> usize {
        self.source_order
    }

    pub fn target_order(&self) -> usize {
        self.target_order
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_mask(self.images.iter().map(|&i| i == 0).collect())
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target_order];
        for &i in &self.images {
            hit[i] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }
}

/// Left cosets `x H`, ordered by smallest element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSpace {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    reps: Vec<usize>,
}

impl CosetSpace {
    fn new(g: &FiniteGroup, h: &Subgroup, left: bool) -> Self {
        let n = g.order();
        let mut block_of = vec![usize::MAX; n];
        let mut blocks = Vec::new();
        let mut reps = Vec::new();
        for x in 0..n {
            if block_of[x] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut block: Vec<usize> = h
                .elements()
                .iter()
                .map(|&e| if left { g.mul(x, e) } else { g.mul(e, x) })
                .collect();
            block.sort_unstable();
            for &y in &block {
                block_of[y] = id;
            }
            reps.push(x);
            blocks.push(block);
        }
        Self {
            blocks,
            block_of,
            reps,
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    #[inline]
    pub fn block_of(&self, g: usize) -> usize {
        self.block_of[g]
    }

    /// Smallest element of each block: the transversal used throughout.
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }
}

/// `g -> sigma_g` on the left cosets of a subgroup.
#[derive(Debug, Clone)]
pub struct CosetAction {
    cosets: CosetSpace,
    perms: Vec<Vec<usize>>,
}

impl CosetAction {
    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    pub fn permutation(&self, g: usize) -> &[usize] {
        &self.perms[g]
    }

    pub fn degree(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_transitive(&self) -> bool {
        let k = self.degree();
        let mut seen = vec![false; k];
        for p in &self.perms {
            seen[p[0]] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_mask(
            self.perms
                .iter()
                .map(|p| p.iter().enumerate().all(|(i, &j)| i == j))
                .collect(),
        )
    }

    /// The permutation image as a group, with the homomorphism onto it.
    pub fn image(&self, g: &FiniteGroup) -> (FiniteGroup, GroupHom) {
        let mut index: HashMap<&[usize], usize> = HashMap::new();
        let mut images = Vec::with_capacity(self.perms.len());
        let mut firsts = Vec::new();
        for (x, p) in self.perms.iter().enumerate() {
            let next = index.len();
            let id = *index.entry(p.as_slice()).or_insert_with(|| {
                firsts.push(x);
                next
            });
            images.push(id);
        }
        let k = index.len();
        let img = FiniteGroup::from_fn(k, |a, b| images[g.mul(firsts[a], firsts[b])]);
        let hom = GroupHom {
            source_order: g.order(),
            target_order: k,
            images,
        };
        (img, hom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Isomorphism {
    Isomorphic(GroupHom),
    /// Distinguishing invariant or exhaustion certificate.
    NotIsomorphic(String),
}

impl Isomorphism {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, Isomorphism::Isomorphic(_))
    }

    pub fn hom(&self) -> Option<&GroupHom> {
        match self {
            Isomorphism::Isomorphic(h) => Some(h),
            Isomorphism::NotIsomorphic(_) => None,
        }
    }
}

/// Isomorphism test by order census, abelian invariants, then
/// generator-image backtracking.
pub fn are_isomorphic(a: &FiniteGroup, b: &FiniteGroup, bound: usize) -> Result<Isomorphism> {
    for (g, what) in [(a, "first group order"), (b, "second group order")] {
        if g.order() > bound {
            return Err(Error::Size {
                what,
                size: g.order(),
                bound,
            });
        }
    }
    if a.order() != b.order() {
        return Ok(Isomorphism::NotIsomorphic(format!(
            "orders differ: {} vs {}",
            a.order(),
            b.order()
        )));
    }
    let (ca, cb) = (a.order_census(), b.order_census());
    if ca != cb {
        return Ok(Isomorphism::NotIsomorphic(format!(
            "element-order census differs: {ca:?} vs {cb:?}"
        )));
    }
    if a.is_abelian() != b.is_abelian() {
        return Ok(Isomorphism::NotIsomorphic(
            "exactly one group is abelian".into(),
        ));
    }
    if let (Some(ia), Some(ib)) = (a.abelian_invariants(), b.abelian_invariants()) {
        if ia.factors != ib.factors {
            return Ok(Isomorphism::NotIsomorphic(format!(
                "invariant factors differ: {:?} vs {:?}",
                ia.factors, ib.factors
            )));
        }
        let images = extend_from_generators(a, b, &ia.generators, &ib.generators)
            .expect("bases of equal type define an isomorphism");
        return Ok(Isomorphism::Isomorphic(GroupHom::new(a, b, images)?));
    }
    let gens = greedy_generators(a);
    let mut chosen = Vec::new();
    if let Some(images) = backtrack_iso(a, b, &gens, &mut chosen) {
        return Ok(Isomorphism::Isomorphic(GroupHom::new(a, b, images)?));
    }
    Ok(Isomorphism::NotIsomorphic(
        "exhaustive generator-image search found no isomorphism".into(),
    ))
}

/// Greedy generating set, largest element orders first.
pub fn greedy_generators(g: &FiniteGroup) -> Vec<usize> {
    let mut by_order: Vec<usize> = (1..g.order()).collect();
    by_order.sort_by_key(|&x| std::cmp::Reverse(g.element_order(x)));
    let mut gens = Vec::new();
    let mut span = g.trivial_subgroup();
    for x in by_order {
        if span.order() == g.order() {
            break;
        }
        if !span.contains(x) {
            gens.push(x);
            span = g.generate(&gens);
        }
    }
    gens
}

/// Extends generator images along the Cayley graph; `None` on an
/// inconsistency or if the generators do not span the source.
pub fn extend_from_generators(
    src: &FiniteGroup,
    tgt: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; src.order()];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&g, &h) in gens.iter().zip(images) {
            let y = src.mul(x, g);
            let v = tgt.mul(map[x], h);
            if map[y] == usize::MAX {
                map[y] = v;
                queue.push_back(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    if map.contains(&usize::MAX) {
        return None;
    }
    Some(map)
}

fn backtrack_iso(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[usize],
    chosen: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let k = chosen.len();
    if k == gens.len() {
        let map = extend_from_generators(a, b, gens, chosen)?;
        let mut hit = vec![false; b.order()];
        for &v in &map {
            if hit[v] {
                return None;
            }
            hit[v] = true;
        }
        return Some(map);
    }
    let want = a.element_order(gens[k]);
    for cand in 1..b.order() {
        if b.element_order(cand) != want {
            continue;
        }
        chosen.push(cand);
        // prune on the partial subgroup
        let sub = a.generate(&gens[..=k]);
        let (sa, emb) = sub.as_group(a);
        let local_gens: Vec<usize> = gens[..=k]
            .iter()
            .map(|g| emb.binary_search(g).unwrap())
            .collect();
        let ok = extend_from_generators(&sa, b, &local_gens, chosen).is_some_and(|m| {
            let mut seen = HashSet::new();
            m.iter().all(|v| seen.insert(*v))
        });
        if ok {
            if let Some(r) = backtrack_iso(a, b, gens, chosen) {
                return Some(r);
            }
        }
        chosen.pop();
    }
    None
}
