use std::collections::BTreeSet;

use gq_core::catalog::Catalog;
use gq_core::cocycle::{is_nondegenerate, CocycleTable};
use gq_core::group::FiniteGroup;
use gq_core::twisted::{OracleConfig, TwistedGroupAlgebra};

fn brute_normal_subgroups(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    let mut out = BTreeSet::new();
    // bit 0 (the identity) is always set
    for mask in (0u32..1 << n).filter(|m| m & 1 == 1) {
        let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let has = |x: usize| mask >> x & 1 == 1;
        let closed = set.iter().all(|&a| set.iter().all(|&b| has(g.mul(a, b))));
        let normal =
            closed && (0..n).all(|x| set.iter().all(|&a| has(g.mul(g.mul(x, a), g.inv(x)))));
        if normal {
            out.insert(set);
        }
    }
    out
}

#[test]
fn normal_subgroups_match_subset_enumeration() {
    let cat = Catalog::builtin();
    for (name, g) in cat.groups.iter().filter(|(_, g)| g.order() <= 16) {
        let found: BTreeSet<Vec<usize>> = g
            .normal_subgroups(64)
            .unwrap()
            .iter()
            .map(|s| s.elements().to_vec())
            .collect();
        assert_eq!(found, brute_normal_subgroups(g), "{name}");
    }
}

fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        let class: BTreeSet<usize> = (0..g.order())
            .map(|y| g.mul(g.mul(y, x), g.inv(y)))
            .collect();
        for &c in &class {
            seen[c] = true;
        }
        out.push(class.into_iter().collect());
    }
    out
}

/// `x` is regular when the twist is symmetric on `x` and its centralizer.
fn is_regular(g: &FiniteGroup, alpha: &CocycleTable, x: usize) -> bool {
    (0..g.order())
        .filter(|&y| g.mul(x, y) == g.mul(y, x))
        .all(|y| alpha.get(x, y) == alpha.get(y, x))
}

fn commutator_subgroup_order(g: &FiniteGroup) -> usize {
    let mut set: BTreeSet<usize> = (0..g.order())
        .flat_map(|a| (0..g.order()).map(move |b| (a, b)))
        .map(|(a, b)| g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))))
        .collect();
    loop {
        let next: BTreeSet<usize> = set
            .iter()
            .flat_map(|&a| set.iter().map(move |&b| (a, b)))
            .map(|(a, b)| g.mul(a, b))
            .collect();
        if next == set {
            return set.len();
        }
        set = next;
    }
}

#[test]
fn wedderburn_counts_match_class_oracles() {
    let cat = Catalog::builtin();
    let cfg = OracleConfig::default();
    for (name, g) in &cat.groups {
        for (cname, alpha) in cat.cocycles_on(name) {
            let dims = TwistedGroupAlgebra::exact(g, &alpha)
                .unwrap()
                .wedderburn_blocks(&cfg)
                .unwrap()
                .dims()
                .to_vec();
            let regular = conjugacy_classes(g)
                .iter()
                .filter(|c| is_regular(g, &alpha, c[0]))
                .count();
            assert_eq!(dims.len(), regular, "{cname}");
            assert_eq!(
                dims.iter().map(|d| d * d).sum::<usize>(),
                g.order(),
                "{cname}"
            );
            if alpha.is_zero() {
                let linear = dims.iter().filter(|&&d| d == 1).count();
                assert_eq!(linear, g.order() / commutator_subgroup_order(g), "{cname}");
            }
            if regular == 1 {
                assert!(is_nondegenerate(g, &alpha, &cfg).unwrap(), "{cname}");
            }
        }
    }
}

#[test]
fn symmetric_group_degrees() {
    let g = FiniteGroup::symmetric(4).unwrap();
    let mut dims = TwistedGroupAlgebra::exact(&g, &CocycleTable::trivial(&g))
        .unwrap()
        .wedderburn_blocks(&OracleConfig::default())
        .unwrap()
        .dims()
        .to_vec();
    dims.sort();
    // 5 classes, abelianization C2, sum of squares 24
    assert_eq!(dims, vec![1, 1, 2, 3, 3]);
}
