//! Acceptance battery. Each criterion is recomputed in process with extra
//! oracles written here, and one line per criterion is printed.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};

use gq_core::catalog::Catalog;
use gq_core::cocycle::CocycleTable;
use gq_core::group::{FiniteGroup, DEFAULT_ENUMERATION_BOUND};
use gq_core::lagrangian::{lagrangian_quotient_witness, lagrangian_scan, IybOutcome, IybWitness};
use gq_core::mackey::mackey_decompose;
use gq_core::suite::{self, CriterionResult, SuiteConfig, CT_GROUPS};

struct Outcome {
    id: usize,
    name: &'static str,
    pass: bool,
    note: String,
}

fn from_suite(r: &CriterionResult, extra: std::result::Result<String, String>) -> Outcome {
    let (pass, note) = match extra {
        Ok(n) => (r.pass, format!("{}; {n}", r.summary)),
        Err(e) => (false, format!("{}; oracle mismatch: {e}", r.summary)),
    };
    Outcome {
        id: r.id,
        name: r.name,
        pass,
        note,
    }
}

fn classes(g: &FiniteGroup) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if !seen[x] {
            reps.push(x);
            for y in 0..g.order() {
                seen[g.mul(g.mul(y, x), g.inv(y))] = true;
            }
        }
    }
    reps
}

/// Number of irreducible projective representations: classes of elements on
/// which the commutator pairing vanishes across the centralizer.
fn regular_class_count(g: &FiniteGroup, alpha: &CocycleTable) -> usize {
    classes(g)
        .into_iter()
        .filter(|&x| {
            (0..g.order())
                .filter(|&y| g.mul(x, y) == g.mul(y, x))
                .all(|y| alpha.get(x, y) == alpha.get(y, x))
        })
        .count()
}

fn criterion_1_2(cat: &Catalog, cfg: &SuiteConfig) -> (Outcome, Outcome) {
    let sweep = suite::reconstruction_sweep(cat, cfg).expect("sweep runs");
    let mut mismatch = Vec::new();
    for c in &sweep {
        let Ok(d) = &c.outcome else { continue };
        let w = &d.reconstruction.wedderburn;
        let expected_blocks = regular_class_count(&d.group, &d.alpha);
        let squares: usize = w.iter().map(|k| k * k).sum();
        if w.len() != expected_blocks || squares != d.group.order() {
            mismatch.push(format!("{} {}", c.group, c.cocycle));
        }
    }
    let extra1 = if mismatch.is_empty() {
        Ok("block counts match regular classes".into())
    } else {
        Err(mismatch.join(", "))
    };
    let mut bad = Vec::new();
    for c in &sweep {
        let Ok(d) = &c.outcome else { continue };
        let n = d.normal.order() as u64;
        let dims = d.descriptor.homogeneous_dims();
        let total: u64 = dims.values().iter().sum();
        if total != d.group.order() as u64 || dims.values().len() * n as usize != d.group.order() {
            bad.push(format!("{} {}", c.group, c.cocycle));
        }
    }
    let extra2 = if bad.is_empty() {
        Ok("component totals equal |G|".into())
    } else {
        Err(bad.join(", "))
    };
    (
        from_suite(&suite::criterion_reconstruction(&sweep), extra1),
        from_suite(&suite::criterion_quotient(&sweep), extra2),
    )
}

/// Lagrangian by the commutator pairing, read straight off the table.
fn pairing_lagrangian(g: &FiniteGroup, alpha: &CocycleTable, n: &[usize]) -> bool {
    let m = alpha.scale();
    n.len() * n.len() == g.order()
        && n.iter().all(|&s| {
            n.iter()
                .all(|&t| (alpha.get(s, t) + m - alpha.get(t, s)).is_multiple_of(m))
        })
}

fn criterion_3(cat: &Catalog, cfg: &SuiteConfig) -> Outcome {
    let r = suite::criterion_lagrangian(cat, cfg);
    let mut disagreements = Vec::new();
    let mut count = 0;
    for name in ["c2xc2", "c4xc4", "c2xc2xc2xc2", "c6xc6"] {
        let g = cat.group(name).unwrap();
        let alpha = &cat.cocycle(&format!("{name}_std")).unwrap().table;
        for n in g.normal_subgroups(DEFAULT_ENUMERATION_BOUND).unwrap() {
            let d = mackey_decompose(g, alpha, &n, &cfg.oracle).unwrap();
            let ecp = d.descriptor.is_elementary_crossed_product();
            let lag = pairing_lagrangian(g, alpha, n.elements());
            count += usize::from(lag);
            if ecp != lag {
                disagreements.push(format!("{name} {:?}", n.elements()));
            }
        }
    }
    let extra = if disagreements.is_empty() {
        Ok(format!("pairing oracle finds {count} Lagrangians"))
    } else {
        Err(disagreements.join(", "))
    };
    from_suite(&r, extra)
}

fn criterion_4(cat: &Catalog, cfg: &SuiteConfig) -> Outcome {
    let r = suite::criterion_maximal_quotients(cat, cfg);
    // exponent square-free by element orders, computed here
    let mut bad = Vec::new();
    for name in CT_GROUPS {
        let g = cat.group(name).unwrap();
        let exp = (0..g.order()).map(|x| g.element_order(x)).fold(1, lcm);
        let square_free = (2..=exp).all(|p| exp % (p * p) != 0);
        let line = r
            .details
            .iter()
            .find(|l| l.starts_with(&format!("group: {name},")))
            .unwrap();
        if !line.contains(&format!("unique: {square_free},")) {
            bad.push(name);
        }
    }
    let c4 = r
        .details
        .iter()
        .find(|l| l.starts_with("group: c4xc4,"))
        .unwrap();
    let two_types = c4.contains("C4") && c4.contains("C2 x C2");
    let extra = if bad.is_empty() && two_types {
        Ok("c4xc4 has C4 and C2 x C2 maximal quotients".into())
    } else {
        Err(format!("{bad:?}, c4xc4 types present: {two_types}"))
    };
    from_suite(&r, extra)
}

fn lcm(a: usize, b: usize) -> usize {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

fn criterion_5(cat: &Catalog, cfg: &SuiteConfig) -> Outcome {
    let r = suite::criterion_simple_restriction(cat, cfg);
    // every standard cocycle contributes at least N = 1 and N = G
    let floor = CT_GROUPS.len() * 2;
    let cases: usize = r
        .summary
        .split('/')
        .nth(1)
        .and_then(|s| s.split(' ').next())
        .unwrap()
        .parse()
        .unwrap();
    let extra = if cases >= floor {
        Ok(format!("at least {floor} cases expected"))
    } else {
        Err(format!("only {cases} cases"))
    };
    from_suite(&r, extra)
}

fn criterion_6(cat: &Catalog, cfg: &SuiteConfig) -> Outcome {
    let r = suite::criterion_cube_free(cat, cfg);
    let cube_free: Vec<&str> = CT_GROUPS
        .iter()
        .copied()
        .filter(|n| {
            let k = cat.group(n).unwrap().order();
            (2..=k).all(|p| !k.is_multiple_of(p * p * p))
        })
        .collect();
    let covered = cube_free.iter().all(|n| {
        r.details
            .iter()
            .any(|l| l.starts_with(&format!("group: {n},")))
    });
    let extra = if covered {
        Ok(format!("cube-free orders cover {}", cube_free.join(" ")))
    } else {
        Err("a cube-free group was skipped".into())
    };
    from_suite(&r, extra)
}

fn criterion_7(cfg: &SuiteConfig) -> Outcome {
    let r = suite::criterion_h4(cfg);
    let full = r
        .details
        .iter()
        .any(|l| l.contains("express_c4_exhaustive, status: pass"));
    from_suite(
        &r,
        if full {
            Ok("rewriting exhaustive".into())
        } else {
            Err("rewriting incomplete".into())
        },
    )
}

/// Known unattainable: a relation of length 8 holds among the generators of
/// the second pull-back, so the bounded free-product certificate fails.
fn criterion_8(cfg: &SuiteConfig) -> (Outcome, bool) {
    let r = suite::criterion_h5(cfg);
    let failures: Vec<&String> = r
        .details
        .iter()
        .filter(|l| l.contains("status: fail"))
        .collect();
    let as_recorded =
        !r.pass && failures.len() == 1 && failures[0].contains("q5_free_product_bounded");
    let note = format!(
        "{}; known unattainable, failing check: {}",
        r.summary,
        failures
            .iter()
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
            .join(" | ")
    );
    (
        Outcome {
            id: 8,
            name: r.name,
            pass: r.pass,
            note,
        },
        as_recorded,
    )
}

fn criterion_9() -> Outcome {
    let r = suite::criterion_diagonal();
    // grading groups of the maximal classes of C^n, n = 2..5
    let expected: [&[&str]; 4] = [
        &["C2"],
        &["C2", "C3"],
        &["(C2 x C2)", "C2 * C2", "C3", "C4"],
        &["(C2 x C2)", "C2 * C2", "C3 * C2", "C4", "C5"],
    ];
    let counts: Vec<usize> = expected.iter().map(|l| l.len()).collect();
    let ok = expected.iter().zip(2..).all(|(list, n)| {
        r.details.iter().any(|l| {
            l.starts_with(&format!("n: {n},"))
                && l.contains(&format!("groups: [{}]", list.join("; ")))
        })
    });
    from_suite(
        &r,
        if ok {
            Ok(format!("counts {counts:?}"))
        } else {
            Err("class lists differ".into())
        },
    )
}

fn decode(x: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    let mut x = x;
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = x % r;
        x /= r;
    }
    out
}

fn encode(v: &[usize], radices: &[usize]) -> usize {
    v.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d)
}

/// Bijective 1-cocycle into an abelian module with additive action, checked
/// with module arithmetic written here.
fn witness_holds(h: &FiniteGroup, w: &IybWitness) -> bool {
    let radices = &w.module;
    let add = |a: usize, b: usize| {
        let (x, y) = (decode(a, radices), decode(b, radices));
        let s: Vec<usize> = x
            .iter()
            .zip(&y)
            .zip(radices)
            .map(|((p, q), r)| (p + q) % r)
            .collect();
        encode(&s, radices)
    };
    let n = h.order();
    let bijective =
        w.delta.iter().collect::<BTreeSet<_>>().len() == n && w.delta.iter().all(|&d| d < n);
    let additive = w
        .action
        .iter()
        .all(|f| (0..n).all(|a| (0..n).all(|b| f[add(a, b)] == add(f[a], f[b]))));
    let law = (0..n).all(|x| {
        (0..n).all(|y| {
            let xy = h.mul(x, y);
            (0..n).all(|m| w.action[xy][m] == w.action[x][w.action[y][m]])
                && w.delta[xy] == add(w.delta[x], w.action[x][w.delta[y]])
        })
    });
    bijective && additive && law
}

fn criterion_10(cat: &Catalog, cfg: &SuiteConfig) -> Outcome {
    let r = suite::criterion_witnesses(cat, cfg);
    let mut bad = Vec::new();
    let mut checked = 0;
    for name in CT_GROUPS {
        let g = cat.group(name).unwrap();
        let alpha = &cat.cocycle(&format!("{name}_std")).unwrap().table;
        for l in lagrangian_scan(g, alpha, true, &cfg.oracle).unwrap() {
            let (q, _) = g.quotient(&l.subgroup).unwrap();
            if q.order() > cfg.max_quotient {
                continue;
            }
            if let IybOutcome::Witness(w) =
                lagrangian_quotient_witness(g, alpha, &l.subgroup, &cfg.oracle).unwrap()
            {
                checked += 1;
                if !witness_holds(&q, &w) {
                    bad.push(format!("{name} {:?}", l.subgroup.elements()));
                }
            }
        }
    }
    let extra = if bad.is_empty() {
        Ok(format!("{checked} witnesses rechecked"))
    } else {
        Err(bad.join(", "))
    };
    from_suite(&r, extra)
}

fn run_suite_binary(extra: &[&str]) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_gq"))
        .arg("suite")
        .args(extra)
        .output()
        .expect("gq runs");
    (out.stdout, out.status.code())
}

fn criterion_11() -> Outcome {
    let (a, code_a) = run_suite_binary(&["--seed", "7"]);
    let (b, code_b) = run_suite_binary(&["--seed", "7"]);
    let (c, _) = run_suite_binary(&["--seed", "7", "--sequential"]);
    let same = !a.is_empty() && a == b && code_a == code_b;
    Outcome {
        id: 11,
        name: "determinism",
        pass: same,
        note: format!(
            "two runs of {} bytes identical: {}, sequential run identical: {}",
            a.len(),
            a == b,
            a == c
        ),
    }
}

fn main() -> ExitCode {
    let cat = Catalog::builtin();
    let cfg = SuiteConfig::default();
    let (c1, c2) = criterion_1_2(&cat, &cfg);
    let (c8, c8_as_recorded) = criterion_8(&cfg);
    let outcomes = vec![
        c1,
        c2,
        criterion_3(&cat, &cfg),
        criterion_4(&cat, &cfg),
        criterion_5(&cat, &cfg),
        criterion_6(&cat, &cfg),
        criterion_7(&cfg),
        c8,
        criterion_9(),
        criterion_10(&cat, &cfg),
        criterion_11(),
    ];
    for o in &outcomes {
        println!(
            "acceptance criterion {} ({}): {}, {}",
            o.id,
            o.name,
            if o.pass { "PASS" } else { "FAIL" },
            o.note
        );
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("acceptance: {passed}/{} criteria pass", outcomes.len());
    // criterion 8 is expected to fail on exactly the recorded check
    let unexpected: Vec<usize> = outcomes
        .iter()
        .filter(|o| {
            if o.id == 8 {
                o.pass || !c8_as_recorded
            } else {
                !o.pass
            }
        })
        .map(|o| o.id)
        .collect();
    if unexpected.is_empty() {
        println!("acceptance: outcome matches the recorded expectations");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
