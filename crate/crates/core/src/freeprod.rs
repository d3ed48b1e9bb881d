//! Free products of finite (and formally free) groups, homomorphisms onto
//! finite groups, and pull-backs of small diagrams of such maps.
//!
//! The two diagrams built in here are the ones whose pull-backs make up the
//! intrinsic fundamental groups of the diagonal algebras of dimension 4 and 5.
//! Membership and generation are handled by constructive rewriting, never by
//! materializing an infinite group.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{extend_from_generators, FiniteGroup, GroupHom};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Finite(FiniteGroup),
    /// Infinite cyclic factor with symbolic generator.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub factor: usize,
    /// Element index for a finite factor, exponent for a free one.
    pub value: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Syllable>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of syllables equal to `(factor, value)`.
    pub fn count(&self, factor: usize, value: i64) -> usize {
        self.0
            .iter()
            .filter(|s| s.factor == factor && s.value == value)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeProductGroup {
    factors: Vec<Factor>,
    names: Vec<String>,
}

impl FreeProductGroup {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Validation("a free product needs a factor".into()));
        }
        let names = factors
            .iter()
            .enumerate()
            .map(|(i, f)| match f {
                Factor::Finite(g) => format!("C{}", g.order()),
                Factor::Free => format!("Z{}", i + 1),
            })
            .collect();
        Ok(Self { factors, names })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.factors.len() {
            return Err(Error::Validation("one name per factor".into()));
        }
        self.names = names;
        Ok(self)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn is_identity(&self, s: &Syllable) -> bool {
        s.value == 0
    }

    fn merge(&self, a: Syllable, b: Syllable) -> Syllable {
        let value = match &self.factors[a.factor] {
            Factor::Finite(g) => g.mul(a.value as usize, b.value as usize) as i64,
            Factor::Free => a.value + b.value,
        };
        Syllable {
            factor: a.factor,
            value,
        }
    }

    fn check_syllable(&self, s: &Syllable) -> Result<()> {
        match self.factors.get(s.factor) {
            None => Err(Error::Validation(format!("no factor {}", s.factor))),
            Some(Factor::Finite(g)) if s.value < 0 || s.value as usize >= g.order() => {
                Err(Error::Validation(format!(
                    "value {} out of range in factor {}",
                    s.value, s.factor
                )))
            }
            _ => Ok(()),
        }
    }

    /// Reduced form: adjacent syllables of one factor merged, identities
    /// dropped.
    pub fn normal_form(&self, raw: &[Syllable]) -> Result<Word> {
        let mut stack: Vec<Syllable> = Vec::with_capacity(raw.len());
        for s in raw {
            self.check_syllable(s)?;
            if self.is_identity(s) {
                continue;
            }
            match stack.last() {
                Some(top) if top.factor == s.factor => {
                    let m = self.merge(*top, *s);
                    stack.pop();
                    if !self.is_identity(&m) {
                        stack.push(m);
                    }
                }
                _ => stack.push(*s),
            }
        }
        Ok(Word(stack))
    }

    pub fn is_reduced(&self, w: &Word) -> bool {
        w.0.iter()
            .all(|s| !self.is_identity(s) && self.check_syllable(s).is_ok())
            && w.0.windows(2).all(|p| p[0].factor != p[1].factor)
    }

    /// Single-syllable word.
    pub fn letter(&self, factor: usize, value: i64) -> Result<Word> {
        self.normal_form(&[Syllable { factor, value }])
    }

    pub fn mul(&self, a: &Word, b: &Word) -> Word {
        let mut out = a.0.clone();
        for s in &b.0 {
            match out.last() {
                Some(top) if top.factor == s.factor => {
                    let m = self.merge(*top, *s);
                    out.pop();
                    if !self.is_identity(&m) {
                        out.push(m);
                    }
                }
                _ => out.push(*s),
            }
        }
        Word(out)
    }

    pub fn inv(&self, w: &Word) -> Word {
        Word(
            w.0.iter()
                .rev()
                .map(|s| Syllable {
                    factor: s.factor,
                    value: match &self.factors[s.factor] {
                        Factor::Finite(g) => g.inv(s.value as usize) as i64,
                        Factor::Free => -s.value,
                    },
                })
                .collect(),
        )
    }

    pub fn pow(&self, w: &Word, k: i64) -> Word {
        let base = if k < 0 { self.inv(w) } else { w.clone() };
        (0..k.unsigned_abs()).fold(Word::identity(), |acc, _| self.mul(&acc, &base))
    }

    /// Every reduced word with at most `max_len` syllables; finite factors only.
    pub fn words_up_to(&self, max_len: usize) -> Result<Vec<Word>> {
        let mut letters: Vec<Syllable> = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            match f {
                Factor::Finite(g) => {
                    letters.extend((1..g.order()).map(|v| Syllable {
                        factor: i,
                        value: v as i64,
                    }));
                }
                Factor::Free => {
                    return Err(Error::Domain(
                        "cannot enumerate words with a free factor".into(),
                    ))
                }
            }
        }
        let mut out = vec![Word::identity()];
        let mut layer = vec![Word::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for l in &letters {
                    if w.0.last().is_some_and(|s| s.factor == l.factor) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(*l);
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        Ok(out)
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "e".into();
        }
        w.0.iter()
            .map(|s| match &self.factors[s.factor] {
                Factor::Finite(g) => {
                    format!("{}[{}]", self.names[s.factor], g.label(s.value as usize))
                }
                Factor::Free => format!("{}^{}", self.names[s.factor], s.value),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A homomorphism from a free product onto a finite group, fixed by
/// generator images in each factor.
#[derive(Debug, Clone)]
pub struct FreeProductHom {
    target: FiniteGroup,
    /// Image of every element of a finite factor; the generator image of a free one.
    images: Vec<Vec<usize>>,
}

impl FreeProductHom {
    /// `generators[i]` lists `(element, image)` pairs for factor `i`; finite
    /// factor relations are checked by extending along the Cayley graph.
    pub fn from_generators(
        source: &FreeProductGroup,
        target: &FiniteGroup,
        generators: &[Vec<(usize, usize)>],
    ) -> Result<Self> {
        if generators.len() != source.factors.len() {
            return Err(Error::Validation(
                "generator images for every factor".into(),
            ));
        }
        let mut images = Vec::new();
        for (i, (f, gens)) in source.factors.iter().zip(generators).enumerate() {
            match f {
                Factor::Finite(g) => {
                    let (els, imgs): (Vec<usize>, Vec<usize>) = gens.iter().copied().unzip();
                    let map = extend_from_generators(g, target, &els, &imgs).ok_or_else(|| {
                        Error::Validation(format!(
                            "generator images on factor {i} violate its relations or do not span it"
                        ))
                    })?;
                    GroupHom::new(g, target, map.clone())?;
                    images.push(map);
                }
                Factor::Free => {
                    let [(_, img)] = gens.as_slice() else {
                        return Err(Error::Validation(format!(
                            "free factor {i} needs exactly one generator image"
                        )));
                    };
                    images.push(vec![*img]);
                }
            }
        }
        Ok(Self {
            target: target.clone(),
            images,
        })
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn eval(&self, w: &Word) -> usize {
        w.0.iter().fold(0, |acc, s| {
            let img = &self.images[s.factor];
            let v = if img.len() == 1 && s.value != 0 {
                // free factor: generator image to a signed power
                let base = if s.value < 0 {
                    self.target.inv(img[0])
                } else {
                    img[0]
                };
                self.target.pow(base, s.value.unsigned_abs() as usize)
            } else {
                img[s.value as usize]
            };
            self.target.mul(acc, v)
        })
    }

    pub fn is_surjective(&self) -> bool {
        let gens: Vec<usize> = self.images.iter().flatten().copied().collect();
        self.target.generate(&gens).order() == self.target.order()
    }
}

#[derive(Debug, Clone)]
pub enum Node {
    Finite(FiniteGroup),
    FreeProduct(FreeProductGroup),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Finite(usize),
    Word(Word),
}

#[derive(Debug, Clone)]
pub enum EdgeMap {
    Finite(GroupHom),
    FreeProduct(FreeProductHom),
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub map: EdgeMap,
}

/// One component per source node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PullbackTuple(pub Vec<Elem>);

/// A word in named generators: `(generator index, exponent)` pairs.
pub type GenWord = Vec<(usize, i64)>;

#[derive(Debug, Clone)]
pub struct GroupDiagram {
    sources: Vec<Node>,
    targets: Vec<FiniteGroup>,
    edges: Vec<Edge>,
}

impl GroupDiagram {
    pub fn new(sources: Vec<Node>, targets: Vec<FiniteGroup>, edges: Vec<Edge>) -> Result<Self> {
        for (k, e) in edges.iter().enumerate() {
            let (Some(src), Some(tgt)) = (sources.get(e.source), targets.get(e.target)) else {
                return Err(Error::Validation(format!(
                    "edge {k} has a dangling endpoint"
                )));
            };
            let surjective = match (src, &e.map) {
                (Node::Finite(g), EdgeMap::Finite(h)) => {
                    h.source_order() == g.order()
                        && h.target_order() == tgt.order()
                        && h.is_surjective()
                }
                (Node::FreeProduct(_), EdgeMap::FreeProduct(h)) => {
                    h.target().order() == tgt.order() && h.is_surjective()
                }
                _ => {
                    return Err(Error::Validation(format!(
                        "edge {k} map does not match its source kind"
                    )))
                }
            };
            if !surjective {
                return Err(Error::Validation(format!("edge {k} is not surjective")));
            }
        }
        Ok(Self {
            sources,
            targets,
            edges,
        })
    }

    pub fn sources(&self) -> &[Node] {
        &self.sources
    }

    pub fn targets(&self) -> &[FiniteGroup] {
        &self.targets
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn eval_edge(&self, k: usize, x: &Elem) -> usize {
        match (&self.edges[k].map, x) {
            (EdgeMap::Finite(h), Elem::Finite(g)) => h.apply(*g),
            (EdgeMap::FreeProduct(h), Elem::Word(w)) => h.eval(w),
            _ => panic!("component kind does not match edge {k}"),
        }
    }

    fn check_shape(&self, t: &PullbackTuple) -> bool {
        t.0.len() == self.sources.len()
            && t.0.iter().zip(&self.sources).all(|(x, n)| match (x, n) {
                (Elem::Finite(g), Node::Finite(grp)) => *g < grp.order(),
                (Elem::Word(w), Node::FreeProduct(fp)) => fp.is_reduced(w),
                _ => false,
            })
    }

    /// All edges into each target agree.
    pub fn is_admissible(&self, t: &PullbackTuple) -> bool {
        if !self.check_shape(t) {
            return false;
        }
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for (k, e) in self.edges.iter().enumerate() {
            let v = self.eval_edge(k, &t.0[e.source]);
            if *seen.entry(e.target).or_insert(v) != v {
                return false;
            }
        }
        true
    }

    pub fn identity(&self) -> PullbackTuple {
        PullbackTuple(
            self.sources
                .iter()
                .map(|n| match n {
                    Node::Finite(_) => Elem::Finite(0),
                    Node::FreeProduct(_) => Elem::Word(Word::identity()),
                })
                .collect(),
        )
    }

    pub fn mul(&self, a: &PullbackTuple, b: &PullbackTuple) -> PullbackTuple {
        PullbackTuple(
            self.sources
                .iter()
                .zip(a.0.iter().zip(&b.0))
                .map(|(n, pair)| match (n, pair) {
                    (Node::Finite(g), (Elem::Finite(x), Elem::Finite(y))) => {
                        Elem::Finite(g.mul(*x, *y))
                    }
                    (Node::FreeProduct(fp), (Elem::Word(x), Elem::Word(y))) => {
                        Elem::Word(fp.mul(x, y))
                    }
                    _ => panic!("tuple shape mismatch"),
                })
                .collect(),
        )
    }

    pub fn inv(&self, a: &PullbackTuple) -> PullbackTuple {
        PullbackTuple(
            self.sources
                .iter()
                .zip(&a.0)
                .map(|(n, x)| match (n, x) {
                    (Node::Finite(g), Elem::Finite(v)) => Elem::Finite(g.inv(*v)),
                    (Node::FreeProduct(fp), Elem::Word(w)) => Elem::Word(fp.inv(w)),
                    _ => panic!("tuple shape mismatch"),
                })
                .collect(),
        )
    }

    pub fn pow(&self, a: &PullbackTuple, k: i64) -> PullbackTuple {
        let base = if k < 0 { self.inv(a) } else { a.clone() };
        (0..k.unsigned_abs()).fold(self.identity(), |acc, _| self.mul(&acc, &base))
    }

    pub fn eval_word(&self, gens: &[PullbackTuple], w: &[(usize, i64)]) -> PullbackTuple {
        w.iter().fold(self.identity(), |acc, &(g, k)| {
            self.mul(&acc, &self.pow(&gens[g], k))
        })
    }

    pub fn format_tuple(&self, t: &PullbackTuple) -> String {
        let parts: Vec<String> = self
            .sources
            .iter()
            .zip(&t.0)
            .map(|(n, x)| match (n, x) {
                (Node::Finite(g), Elem::Finite(v)) => g.label(*v),
                (Node::FreeProduct(fp), Elem::Word(w)) => fp.format_word(w),
                _ => "?".into(),
            })
            .collect();
        format!("({})", parts.join(", "))
    }
}

pub fn format_gen_word(names: &[&str], w: &[(usize, i64)]) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.iter()
        .map(|&(g, k)| {
            if k == 1 {
                names[g].to_string()
            } else {
                format!("{}^{}", names[g], k)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Element indices used by the built-in diagrams.
pub mod letters {
    /// `C4 = <x>`, `x^k` has index `k`.
    pub const X: usize = 1;
    pub const X2: usize = 2;
    /// `C2 x C2 = <sigma> x <tau>`.
    pub const SIGMA: usize = 2;
    pub const TAU: usize = 1;
    pub const SIGMA_TAU: usize = 3;
    /// Factor indices of `C2 * C2 = <a> * <b>` and `C3 * C2 = <g> * <h>`.
    pub const A: usize = 0;
    pub const B: usize = 1;
    pub const G: usize = 0;
    pub const H: usize = 1;
}

use letters::*;

fn klein() -> FiniteGroup {
    FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))
        .with_labels(vec![
            "e".into(),
            "tau".into(),
            "sigma".into(),
            "sigma tau".into(),
        ])
        .expect("four labels")
}

fn c4() -> FiniteGroup {
    FiniteGroup::cyclic(4)
        .with_labels(vec!["e".into(), "x".into(), "x^2".into(), "x^3".into()])
        .expect("four labels")
}

fn c2_named(e: &str, name: &str) -> FiniteGroup {
    FiniteGroup::cyclic(2)
        .with_labels(vec![e.into(), name.into()])
        .expect("two labels")
}

fn c3_named() -> FiniteGroup {
    FiniteGroup::cyclic(3)
        .with_labels(vec!["e".into(), "g".into(), "g^2".into()])
        .expect("three labels")
}

pub fn c2_free_c2() -> FreeProductGroup {
    FreeProductGroup::new(vec![
        Factor::Finite(c2_named("e", "a")),
        Factor::Finite(c2_named("e", "b")),
    ])
    .and_then(|f| f.with_names(vec!["a".into(), "b".into()]))
    .expect("two factors")
}

pub fn c3_free_c2() -> FreeProductGroup {
    FreeProductGroup::new(vec![
        Factor::Finite(c3_named()),
        Factor::Finite(c2_named("e", "h")),
    ])
    .and_then(|f| f.with_names(vec!["g".into(), "h".into()]))
    .expect("two factors")
}

fn blue_edges(target: usize) -> Result<Vec<Edge>> {
    let y = c2_named("e", "y");
    let psi1 = GroupHom::new(&c4(), &y, vec![0, 1, 0, 1])?;
    let mut psi2_img = vec![0; 4];
    psi2_img[TAU] = 1;
    psi2_img[SIGMA] = 1;
    let psi2 = GroupHom::new(&klein(), &y, psi2_img)?;
    let psi3 = FreeProductHom::from_generators(&c2_free_c2(), &y, &[vec![(1, 1)], vec![(1, 1)]])?;
    Ok(vec![
        Edge {
            source: 0,
            target,
            map: EdgeMap::Finite(psi1),
        },
        Edge {
            source: 1,
            target,
            map: EdgeMap::Finite(psi2),
        },
        Edge {
            source: 2,
            target,
            map: EdgeMap::FreeProduct(psi3),
        },
    ])
}

/// `C4 -> C2 <- C2 x C2` and `C2 * C2 -> C2`, every generator onto `y`.
pub fn diagram_c4() -> GroupDiagram {
    GroupDiagram::new(
        vec![
            Node::Finite(c4()),
            Node::Finite(klein()),
            Node::FreeProduct(c2_free_c2()),
        ],
        vec![c2_named("e", "y")],
        blue_edges(0).expect("built-in maps"),
    )
    .expect("built-in diagram")
}

/// The previous diagram plus `C2 * C2 -> C2 <- C3 * C2` with `a, h -> k`
/// and `b, g -> e`.
pub fn diagram_c5() -> GroupDiagram {
    let kappa = c2_named("e", "k");
    let phi1 =
        FreeProductHom::from_generators(&c2_free_c2(), &kappa, &[vec![(1, 1)], vec![(1, 0)]])
            .expect("built-in map");
    let phi2 =
        FreeProductHom::from_generators(&c3_free_c2(), &kappa, &[vec![(1, 0)], vec![(1, 1)]])
            .expect("built-in map");
    let mut edges = blue_edges(0).expect("built-in maps");
    edges.push(Edge {
        source: 2,
        target: 1,
        map: EdgeMap::FreeProduct(phi1),
    });
    edges.push(Edge {
        source: 3,
        target: 1,
        map: EdgeMap::FreeProduct(phi2),
    });
    GroupDiagram::new(
        vec![
            Node::Finite(c4()),
            Node::Finite(klein()),
            Node::FreeProduct(c2_free_c2()),
            Node::FreeProduct(c3_free_c2()),
        ],
        vec![c2_named("e", "y"), kappa],
        edges,
    )
    .expect("built-in diagram")
}

fn w(factor: usize, value: i64) -> Word {
    Word(vec![Syllable { factor, value }])
}

/// `z1 = (x, sigma, a)`, `z2 = (x, sigma, b)`, `z3 = (x^2, sigma tau, e)`.
pub fn generators_c4() -> Vec<PullbackTuple> {
    vec![
        PullbackTuple(vec![
            Elem::Finite(X),
            Elem::Finite(SIGMA),
            Elem::Word(w(A, 1)),
        ]),
        PullbackTuple(vec![
            Elem::Finite(X),
            Elem::Finite(SIGMA),
            Elem::Word(w(B, 1)),
        ]),
        PullbackTuple(vec![
            Elem::Finite(X2),
            Elem::Finite(SIGMA_TAU),
            Elem::Word(Word::identity()),
        ]),
    ]
}

/// `(x, sigma, a, h)`, `(x, sigma, b, e)`, `(x^2, sigma tau, e, e)`, `(e, e, e, g)`.
pub fn generators_c5() -> Vec<PullbackTuple> {
    let e = || Elem::Word(Word::identity());
    vec![
        PullbackTuple(vec![
            Elem::Finite(X),
            Elem::Finite(SIGMA),
            Elem::Word(w(A, 1)),
            Elem::Word(w(H, 1)),
        ]),
        PullbackTuple(vec![
            Elem::Finite(X),
            Elem::Finite(SIGMA),
            Elem::Word(w(B, 1)),
            e(),
        ]),
        PullbackTuple(vec![Elem::Finite(X2), Elem::Finite(SIGMA_TAU), e(), e()]),
        PullbackTuple(vec![
            Elem::Finite(0),
            Elem::Finite(0),
            e(),
            Elem::Word(w(G, 1)),
        ]),
    ]
}

pub const NAMES_C4: [&str; 3] = ["z1", "z2", "z3"];
pub const NAMES_C5: [&str; 4] = ["Z1", "Z2", "Z3", "Z4"];

fn verify_expression(
    d: &GroupDiagram,
    gens: &[PullbackTuple],
    word: &GenWord,
    t: &PullbackTuple,
) -> Result<()> {
    let got = d.eval_word(gens, word);
    if &got != t {
        return Err(Error::Consistency(format!(
            "rewriting produced {} instead of {}",
            d.format_tuple(&got),
            d.format_tuple(t)
        )));
    }
    Ok(())
}

/// Writes an admissible triple as a word in `z1, z2, z3`: the free part
/// `w(a, b)` becomes `w(z1, z2)`, and the residue in the kernels of the two
/// finite maps is cleared with `z3` and `z1^2`.
pub fn express_c4(t: &PullbackTuple) -> Result<GenWord> {
    let d = diagram_c4();
    if !d.is_admissible(t) {
        return Err(Error::Domain(format!(
            "{} is not admissible",
            d.format_tuple(t)
        )));
    }
    let gens = generators_c4();
    let Elem::Word(g3) = &t.0[2] else {
        unreachable!("shape checked by admissibility")
    };
    let mut word: GenWord = g3
        .syllables()
        .iter()
        .map(|s| (if s.factor == A { 0 } else { 1 }, 1))
        .collect();
    let residue = d.mul(&d.inv(t), &d.eval_word(&gens, &word));
    if residue.0[1] == Elem::Finite(SIGMA_TAU) {
        word.push((2, 1));
    }
    let residue = d.mul(&d.inv(t), &d.eval_word(&gens, &word));
    if residue.0[0] == Elem::Finite(X2) {
        word.push((0, 2));
    }
    verify_expression(&d, &gens, &word, t)?;
    Ok(word)
}

/// Writes an admissible 4-tuple as a word in the four generators, following
/// the rewriting: express the first three components, then thread powers of
/// `(e, e, e, g)` between the `h` letters carried by the first generator.
pub fn express_c5(t: &PullbackTuple) -> Result<GenWord> {
    let d5 = diagram_c5();
    if !d5.is_admissible(t) {
        return Err(Error::Domain(format!(
            "{} is not admissible",
            d5.format_tuple(t)
        )));
    }
    let head = PullbackTuple(t.0[..3].to_vec());
    let w4 = express_c4(&head)?;
    // one letter per generator occurrence
    let mut letters: Vec<(usize, i64)> = Vec::new();
    for &(g, k) in &w4 {
        for _ in 0..k.unsigned_abs() {
            letters.push((g, k.signum()));
        }
    }
    let Elem::Word(g4) = &t.0[3] else {
        unreachable!("shape checked by admissibility")
    };
    let h_count = g4.count(H, 1);
    let mut n = letters.iter().filter(|l| l.0 == 0).count();
    while n < h_count {
        letters.extend(std::iter::repeat_n((0usize, 1i64), 4));
        n += 4;
    }
    // g4 = g^{k0} h g^{k1} h ... h g^{kt}
    let mut g_runs = vec![0i64; h_count + 1];
    let mut slot = 0;
    for s in g4.syllables() {
        if s.factor == H {
            slot += 1;
        } else {
            g_runs[slot] = s.value;
        }
    }
    let mut out: GenWord = Vec::new();
    let mut seen_h = 0;
    if g_runs[0] != 0 {
        out.push((3, g_runs[0]));
    }
    for l in letters {
        out.push(l);
        if l.0 == 0 && seen_h < h_count {
            seen_h += 1;
            if g_runs[seen_h] != 0 {
                out.push((3, g_runs[seen_h]));
            }
        }
    }
    if (n - h_count) % 2 != 0 {
        return Err(Error::Consistency(format!(
            "leftover power h^{} is not trivial",
            n - h_count
        )));
    }
    let gens = generators_c5();
    let out = compress(out);
    verify_expression(&d5, &gens, &out, t)?;
    Ok(out)
}

fn compress(w: GenWord) -> GenWord {
    let mut out: GenWord = Vec::new();
    for (g, k) in w {
        match out.last_mut() {
            Some(last) if last.0 == g => last.1 += k,
            _ => out.push((g, k)),
        }
        if out.last().is_some_and(|l| l.1 == 0) {
            out.pop();
        }
    }
    out
}

/// Every admissible tuple whose free-product components have at most
/// `max_len` syllables.
pub fn admissible_tuples(d: &GroupDiagram, max_len: usize) -> Result<Vec<PullbackTuple>> {
    let mut choices: Vec<Vec<Elem>> = Vec::new();
    for n in d.sources() {
        choices.push(match n {
            Node::Finite(g) => (0..g.order()).map(Elem::Finite).collect(),
            Node::FreeProduct(fp) => fp
                .words_up_to(max_len)?
                .into_iter()
                .map(Elem::Word)
                .collect(),
        });
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let t = PullbackTuple(
            idx.iter()
                .zip(&choices)
                .map(|(&i, c)| c[i].clone())
                .collect(),
        );
        if d.is_admissible(&t) {
            out.push(t);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: String,
}

impl Check {
    fn new(name: &str, pass: bool, witness: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            witness: witness.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationReport {
    pub checks: Vec<Check>,
}

impl PresentationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn commutes(d: &GroupDiagram, a: &PullbackTuple, b: &PullbackTuple) -> bool {
    d.mul(a, b) == d.mul(b, a)
}

fn order_of(d: &GroupDiagram, a: &PullbackTuple, cap: usize) -> Option<usize> {
    let id = d.identity();
    let mut x = a.clone();
    for k in 1..=cap {
        if x == id {
            return Some(k);
        }
        x = d.mul(&x, a);
    }
    None
}

/// Elements reachable by words of length at most `radius` in the
/// generators and their inverses.
fn ball(d: &GroupDiagram, gens: &[PullbackTuple], radius: usize) -> HashSet<PullbackTuple> {
    let mut steps: Vec<PullbackTuple> = gens.to_vec();
    steps.extend(gens.iter().map(|g| d.inv(g)));
    let mut seen = HashSet::from([d.identity()]);
    let mut frontier = VecDeque::from([(d.identity(), 0usize)]);
    while let Some((x, r)) = frontier.pop_front() {
        if r == radius {
            continue;
        }
        for s in &steps {
            let y = d.mul(&x, s);
            if seen.insert(y.clone()) {
                frontier.push_back((y, r + 1));
            }
        }
    }
    seen
}

fn elem_is(t: &PullbackTuple, i: usize, v: &Elem) -> bool {
    &t.0[i] == v
}

/// Relation, centrality and kernel checks for the dimension-4 pull-back.
pub fn verify_presentation_h4(max_len: usize) -> Result<PresentationReport> {
    let d = diagram_c4();
    let g = generators_c4();
    let (z1, z2, z3) = (&g[0], &g[1], &g[2]);
    let kx = PullbackTuple(vec![
        Elem::Finite(X2),
        Elem::Finite(0),
        Elem::Word(Word::identity()),
    ]);
    let mut checks = Vec::new();
    for (i, z) in g.iter().enumerate() {
        checks.push(Check::new(
            &format!("{}_admissible", NAMES_C4[i]),
            d.is_admissible(z),
            d.format_tuple(z),
        ));
    }
    let z1sq = d.pow(z1, 2);
    let z2sq = d.pow(z2, 2);
    checks.push(Check::new("z1_squared", z1sq == kx, d.format_tuple(&z1sq)));
    checks.push(Check::new("z2_squared", z2sq == kx, d.format_tuple(&z2sq)));
    checks.push(Check::new(
        "kernel_generator_central",
        g.iter().all(|z| commutes(&d, &kx, z)),
        "commutes with z1 z2 z3",
    ));
    checks.push(Check::new(
        "kernel_generator_order",
        order_of(&d, &kx, 8) == Some(2),
        format!("{:?}", order_of(&d, &kx, 8)),
    ));
    checks.push(Check::new(
        "z3_central",
        commutes(&d, z3, z1) && commutes(&d, z3, z2),
        "[z3,z1] = [z3,z2] = e",
    ));
    let comm = d.mul(&d.mul(z3, z1), &d.mul(&d.inv(z3), &d.inv(z1)));
    checks.push(Check::new(
        "commutator_z3_z1",
        comm == d.identity(),
        d.format_tuple(&comm),
    ));
    checks.push(Check::new(
        "z3_order",
        order_of(&d, z3, 8) == Some(2),
        format!("{:?}", order_of(&d, z3, 8)),
    ));
    // the second component of every element of <z1,z2> lies in <sigma>
    let sigma_only = [z1, z2]
        .iter()
        .all(|z| matches!(z.0[1], Elem::Finite(v) if v == 0 || v == SIGMA));
    let h4 = ball(&d, &g[..2], max_len);
    checks.push(Check::new(
        "h4_meets_z3_trivially",
        sigma_only && !h4.contains(z3),
        format!(
            "second components in <sigma>; {} elements within radius {max_len}",
            h4.len()
        ),
    ));
    // beta4 is the projection to the free component: z1 -> a, z2 -> b
    checks.push(Check::new(
        "beta4_images",
        elem_is(z1, 2, &Elem::Word(w(A, 1))) && elem_is(z2, 2, &Elem::Word(w(B, 1))),
        "z1 -> a, z2 -> b",
    ));
    let kernel: Vec<&PullbackTuple> = h4
        .iter()
        .filter(|t| t.0[2] == Elem::Word(Word::identity()))
        .collect();
    let kernel_ok = kernel.len() == 2 && kernel.iter().all(|t| **t == d.identity() || **t == kx);
    checks.push(Check::new(
        "beta4_kernel",
        sigma_only && kernel_ok,
        format!("{} kernel elements within radius {max_len}", kernel.len()),
    ));
    Ok(PresentationReport { checks })
}

/// Relation, centrality and kernel checks for the dimension-5 pull-back,
/// including the bounded free-product certificate for the red sub-diagram.
pub fn verify_presentation_h5(max_len: usize) -> Result<PresentationReport> {
    let d = diagram_c5();
    let g = generators_c5();
    let e = || Elem::Word(Word::identity());
    let kx = PullbackTuple(vec![Elem::Finite(X2), Elem::Finite(0), e(), e()]);
    let mut checks = Vec::new();
    for (i, z) in g.iter().enumerate() {
        checks.push(Check::new(
            &format!("{}_admissible", NAMES_C5[i]),
            d.is_admissible(z),
            d.format_tuple(z),
        ));
    }
    let zbar = d.mul(&g[1], &g[3]);
    let wbar = g[0].clone();
    let z6 = d.pow(&zbar, 6);
    let w2 = d.pow(&wbar, 2);
    checks.push(Check::new(
        "zbar_sixth_power",
        z6 == kx,
        d.format_tuple(&z6),
    ));
    checks.push(Check::new("wbar_squared", w2 == kx, d.format_tuple(&w2)));
    checks.push(Check::new(
        "Z2_squared",
        d.pow(&g[1], 2) == kx,
        d.format_tuple(&d.pow(&g[1], 2)),
    ));
    checks.push(Check::new(
        "kernel_generator_central",
        g.iter().all(|z| commutes(&d, &kx, z)) && order_of(&d, &kx, 8) == Some(2),
        "central of order 2",
    ));
    let st = PullbackTuple(vec![Elem::Finite(0), Elem::Finite(SIGMA_TAU), e(), e()]);
    let st_word = d.mul(&g[2], &d.pow(&g[1], 2));
    checks.push(Check::new(
        "sigma_tau_as_word",
        st_word == st,
        d.format_tuple(&st_word),
    ));
    checks.push(Check::new(
        "sigma_tau_central",
        g.iter().all(|z| commutes(&d, &st, z)) && order_of(&d, &st, 8) == Some(2),
        "central of order 2",
    ));
    let h5_gens = [g[0].clone(), g[1].clone(), g[3].clone()];
    let sigma_only = h5_gens
        .iter()
        .all(|z| matches!(z.0[1], Elem::Finite(v) if v == 0 || v == SIGMA));
    let radius = max_len.min(6);
    let h5 = ball(&d, &h5_gens, radius);
    checks.push(Check::new(
        "h5_meets_sigma_tau_trivially",
        sigma_only && !h5.contains(&st),
        format!(
            "second components in <sigma>; {} elements within radius {radius}",
            h5.len()
        ),
    ));
    let kernel: Vec<&PullbackTuple> = h5
        .iter()
        .filter(|t| t.0[2] == e() && t.0[3] == e())
        .collect();
    let kernel_ok = kernel.len() == 2 && kernel.iter().all(|t| **t == d.identity() || **t == kx);
    checks.push(Check::new(
        "beta5_kernel",
        sigma_only && kernel_ok,
        format!("{} kernel elements within radius {radius}", kernel.len()),
    ));
    checks.extend(verify_q5(max_len)?);
    Ok(PresentationReport { checks })
}

/// Pull-back of the red sub-diagram, as pairs of words.
fn q5_diagram() -> GroupDiagram {
    let full = diagram_c5();
    let sources = vec![full.sources()[2].clone(), full.sources()[3].clone()];
    let edges = full
        .edges()
        .iter()
        .filter(|e| e.target == 1)
        .map(|e| Edge {
            source: e.source - 2,
            target: 0,
            map: e.map.clone(),
        })
        .collect();
    GroupDiagram::new(sources, vec![full.targets()[1].clone()], edges).expect("sub-diagram")
}

fn verify_q5(max_len: usize) -> Result<Vec<Check>> {
    let d = q5_diagram();
    let e = || Elem::Word(Word::identity());
    let u1 = PullbackTuple(vec![Elem::Word(w(B, 1)), e()]);
    let u2 = PullbackTuple(vec![e(), Elem::Word(w(G, 1))]);
    let u3 = PullbackTuple(vec![Elem::Word(w(A, 1)), Elem::Word(w(H, 1))]);
    let bg = d.mul(&u1, &u2);
    let mut checks = vec![
        Check::new(
            "q5_generators_admissible",
            [&u1, &u2, &u3].iter().all(|u| d.is_admissible(u)),
            "u1 u2 u3",
        ),
        Check::new(
            "u1u2_order_6",
            order_of(&d, &bg, 12) == Some(6),
            format!("{:?}", order_of(&d, &bg, 12)),
        ),
        Check::new(
            "u1_in_cyclic",
            d.pow(&bg, 3) == u1,
            d.format_tuple(&d.pow(&bg, 3)),
        ),
        Check::new(
            "u2_in_cyclic",
            d.pow(&bg, 4) == u2,
            d.format_tuple(&d.pow(&bg, 4)),
        ),
    ];
    // alternating words in (b,g)^k, k = 1..5, and (a,h)
    let powers: Vec<PullbackTuple> = (1..6).map(|k| d.pow(&bg, k)).collect();
    // breadth first, so the first relation found is a shortest one
    let mut counter: Option<String> = None;
    let mut checked = 0usize;
    let mut layer: Vec<(PullbackTuple, bool, String)> = vec![
        (d.identity(), true, String::new()),
        (d.identity(), false, String::new()),
    ];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (x, next_cyclic, label) in &layer {
            let options: Vec<(&PullbackTuple, String)> = if *next_cyclic {
                powers
                    .iter()
                    .enumerate()
                    .map(|(k, p)| (p, format!("(b,g)^{}", k + 1)))
                    .collect()
            } else {
                vec![(&u3, "(a,h)".into())]
            };
            for (p, name) in options {
                let y = d.mul(x, p);
                let lbl = if label.is_empty() {
                    name
                } else {
                    format!("{label} {name}")
                };
                checked += 1;
                if y == d.identity() && counter.is_none() {
                    counter = Some(lbl.clone());
                }
                next.push((y, !next_cyclic, lbl));
            }
        }
        if counter.is_some() {
            break;
        }
        layer = next;
    }
    checks.push(Check::new(
        "q5_free_product_bounded",
        counter.is_none(),
        counter.unwrap_or_else(|| {
            format!("{checked} alternating words up to length {max_len}, none trivial")
        }),
    ));
    Ok(checks)
}

/// Invariant factors of an abelian group; the empty list is the trivial group.
pub type AbelianType = Vec<usize>;

/// All invariant-factor sequences `n_1 | ... | n_r` with product `n`.
pub fn abelian_types(n: usize) -> Vec<AbelianType> {
    fn rec(rest: usize, last: usize, acc: &mut Vec<usize>, out: &mut Vec<AbelianType>) {
        if rest == 1 {
            let mut t = acc.clone();
            t.reverse();
            out.push(t);
            return;
        }
        // build from the largest factor down; each factor divides the previous
        for d in (2..=rest).rev() {
            if rest.is_multiple_of(d) && last.is_multiple_of(d) {
                acc.push(d);
                rec(rest / d, d, acc, out);
                acc.pop();
            }
        }
    }
    if n == 1 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for top in (2..=n).rev() {
        if n.is_multiple_of(top) {
            let mut acc = vec![top];
            let rest = n / top;
            if rest == 1 {
                out.push(vec![top]);
            } else {
                rec(rest, top, &mut acc, &mut out);
            }
        }
    }
    // keep sequences whose factors really form a chain
    out.retain(|t| t.windows(2).all(|p| p[1] % p[0] == 0));
    out.sort();
    out.dedup();
    out
}

pub fn type_label(t: &AbelianType) -> String {
    if t.is_empty() {
        return "C1".into();
    }
    t.iter()
        .map(|k| format!("C{k}"))
        .collect::<Vec<_>>()
        .join(" x ")
}

pub fn type_order(t: &AbelianType) -> usize {
    t.iter().product()
}

/// A maximal connected grading class of the diagonal algebra: the free
/// product of group algebras of the listed abelian groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalClass {
    pub factors: Vec<AbelianType>,
}

impl DiagonalClass {
    pub fn label(&self) -> String {
        self.factors
            .iter()
            .map(type_label)
            .collect::<Vec<_>>()
            .join(" * ")
    }

    /// The grading group, trivial factors dropped.
    pub fn group_label(&self) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .filter(|t| !t.is_empty())
            .map(|t| {
                if t.len() > 1 {
                    format!("({})", type_label(t))
                } else {
                    type_label(t)
                }
            })
            .collect();
        if parts.is_empty() {
            "C1".into()
        } else {
            parts.join(" * ")
        }
    }

    pub fn dimension(&self) -> usize {
        self.factors.iter().map(type_order).sum()
    }

    /// Abelianization order of the grading group.
    pub fn abelianized_order(&self) -> usize {
        self.factors.iter().map(type_order).product()
    }

    pub fn free_product(&self) -> FreeProductGroup {
        let factors = self
            .factors
            .iter()
            .map(|t| Factor::Finite(crate::cocycle::abelian_group(t)))
            .collect();
        FreeProductGroup::new(factors)
            .and_then(|f| f.with_names(self.factors.iter().map(type_label).collect()))
            .expect("at least one factor")
    }
}

/// Multisets of abelian types with orders summing to `n`, at most one trivial.
pub fn maximal_gradings_diagonal(n: usize) -> Result<Vec<DiagonalClass>> {
    if !(2..=12).contains(&n) {
        return Err(Error::Domain(format!("n = {n} is outside 2..=12")));
    }
    let mut catalog: Vec<AbelianType> = Vec::new();
    for k in 1..=n {
        catalog.extend(abelian_types(k));
    }
    // canonical order: by group order then type
    catalog.sort_by(|a, b| type_order(a).cmp(&type_order(b)).then_with(|| a.cmp(b)));
    fn rec(
        catalog: &[AbelianType],
        start: usize,
        rest: usize,
        acc: &mut Vec<usize>,
        out: &mut Vec<DiagonalClass>,
    ) {
        if rest == 0 {
            let trivial = acc.iter().filter(|&&i| catalog[i].is_empty()).count();
            if trivial <= 1 {
                let mut factors: Vec<AbelianType> =
                    acc.iter().map(|&i| catalog[i].clone()).collect();
                factors.reverse();
                out.push(DiagonalClass { factors });
            }
            return;
        }
        for i in start..catalog.len() {
            let k = type_order(&catalog[i]);
            if k > rest {
                break;
            }
            acc.push(i);
            rec(catalog, i, rest - k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(&catalog, 0, n, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| {
        a.factors
            .len()
            .cmp(&b.factors.len())
            .then_with(|| b.factors.cmp(&a.factors))
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi1Report {
    pub n: usize,
    pub result: String,
    pub classes: Vec<String>,
    pub checks: Vec<Check>,
}

impl Pi1Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    crate::group::gcd(a, b)
}

/// Intrinsic fundamental group of the diagonal algebra of dimension `n`,
/// with the checks that certify it.
pub fn pi1_report(n: usize, max_len: usize) -> Result<Pi1Report> {
    if !(2..=5).contains(&n) {
        return Err(Error::Domain(format!(
            "pi1 is only reported for n in 2..=5, got {n}"
        )));
    }
    let classes = maximal_gradings_diagonal(n)?;
    let labels: Vec<String> = classes.iter().map(|c| c.group_label()).collect();
    let mut checks = vec![Check::new(
        "maximal_class_count",
        classes.len() == [1, 2, 4, 5][n - 2],
        format!("{} classes", classes.len()),
    )];
    // the cyclic group of order n from the single-factor class C_n splits off:
    // any common quotient with another class is abelian, so it is a quotient of
    // both abelianizations, whose orders are coprime here
    let split = |order: usize| -> Check {
        let idx = classes
            .iter()
            .position(|c| {
                c.factors.iter().any(|t| *t == vec![order])
                    && c.factors
                        .iter()
                        .all(|t| t.len() <= 1 && (t.is_empty() || *t == vec![order]))
            })
            .expect("cyclic class present");
        let coprime = classes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .all(|(_, c)| gcd(order, c.abelianized_order()) == 1);
        Check::new(
            &format!("C{order}_trivial_common_quotients"),
            coprime,
            format!("gcd({order}, |G_ab|) = 1 for every other class"),
        )
    };
    let result = match n {
        2 => "C2".to_string(),
        3 => {
            checks.push(split(3));
            "C3 x C2".to_string()
        }
        4 => {
            checks.push(split(3));
            let rep = verify_presentation_h4(max_len)?;
            checks.extend(rep.checks);
            let gen = generation_check(4, max_len.min(6))?;
            checks.push(gen);
            "H4 x C6".to_string()
        }
        _ => {
            checks.push(split(5));
            let rep = verify_presentation_h5(max_len)?;
            checks.extend(rep.checks);
            let gen = generation_check(5, max_len.min(4))?;
            checks.push(gen);
            "H5 x C10".to_string()
        }
    };
    Ok(Pi1Report {
        n,
        result,
        classes: labels,
        checks,
    })
}

/// Rewrites every admissible tuple up to `max_len` syllables and reports
/// how many round-trip.
pub fn generation_check(n: usize, max_len: usize) -> Result<Check> {
    let (d, name) = match n {
        4 => (diagram_c4(), "express_c4_exhaustive"),
        5 => (diagram_c5(), "express_c5_exhaustive"),
        _ => return Err(Error::Domain("generation check is for n = 4 or 5".into())),
    };
    let tuples = admissible_tuples(&d, max_len)?;
    let results = crate::par::map(&tuples, |t| {
        if n == 4 {
            express_c4(t).is_ok()
        } else {
            express_c5(t).is_ok()
        }
    });
    let ok = results.iter().filter(|&&r| r).count();
    Ok(Check::new(
        name,
        ok == tuples.len(),
        format!(
            "{ok}/{} admissible tuples with free parts of length <= {max_len}",
            tuples.len()
        ),
    ))
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check: {}, status: {}, witness: {}",
            self.name,
            if self.pass { "pass" } else { "fail" },
            self.witness
        )
    }
}
