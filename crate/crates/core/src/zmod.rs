//! Linear systems over `Z/M` by unimodular diagonalization.
//!
//! Row and column operations come from extended gcd steps, so they are
//! invertible over the integers and therefore over `Z/M`. The diagonal is not
//! forced into a divisibility chain; solvability only needs each pivot.

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a.abs(), b.abs()).0
}

#[inline]
fn md(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

/// Inverse of `a` modulo `m`, for `gcd(a, m) = 1`.
fn inv_mod(a: i64, m: i64) -> i64 {
    let (_, x, _) = ext_gcd(md(a, m), m);
    md(x, m)
}

/// Solves `A x = b (mod m)`. Returns one solution, or `None` when the system
/// is inconsistent.
pub fn solve_mod(a: &[Vec<i64>], b: &[i64], m: i64) -> Option<Vec<i64>> {
    assert!(m >= 1);
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    if m == 1 {
        return Some(vec![0; cols]);
    }
    let mut a: Vec<Vec<i64>> = a
        .iter()
        .map(|r| r.iter().map(|&v| md(v, m)).collect())
        .collect();
    let mut b: Vec<i64> = b.iter().map(|&v| md(v, m)).collect();
    // x = v * y, v starts as the identity
    let mut v: Vec<Vec<i64>> = (0..cols)
        .map(|i| (0..cols).map(|j| i64::from(i == j)).collect())
        .collect();

    let mut rank = 0;
    while rank < rows.min(cols) {
        let t = rank;
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .find(|&(i, j)| a[i][j] != 0)
        else {
            break;
        };
        a.swap(t, pi);
        b.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t] == 0 {
                    continue;
                }
                let p = a[t][t];
                let q = a[i][t];
                if q % p == 0 {
                    let f = q / p;
                    let (top, rest) = a.split_at_mut(i);
                    for (y, &x) in rest[0][t..cols].iter_mut().zip(&top[t][t..cols]) {
                        *y = md(*y - f * x, m);
                    }
                    b[i] = md(b[i] - f * b[t], m);
                } else {
                    let (g, s, u) = ext_gcd(p, q);
                    let (pg, qg) = (p / g, q / g);
                    let (top, rest) = a.split_at_mut(i);
                    for (pt, pi) in top[t][t..cols].iter_mut().zip(&mut rest[0][t..cols]) {
                        let (x, y) = (*pt, *pi);
                        *pt = md(s * x + u * y, m);
                        *pi = md(qg * x - pg * y, m);
                    }
                    let (x, y) = (b[t], b[i]);
                    b[t] = md(s * x + u * y, m);
                    b[i] = md(qg * x - pg * y, m);
                }
            }
            for j in t + 1..cols {
                if a[t][j] == 0 {
                    continue;
                }
                let p = a[t][t];
                let q = a[t][j];
                if q % p == 0 {
                    let f = q / p;
                    for row in a.iter_mut() {
                        row[j] = md(row[j] - f * row[t], m);
                    }
                    for row in v.iter_mut() {
                        row[j] = md(row[j] - f * row[t], m);
                    }
                } else {
                    let (g, s, u) = ext_gcd(p, q);
                    let (pg, qg) = (p / g, q / g);
                    for row in a.iter_mut().chain(v.iter_mut()) {
                        let (x, y) = (row[t], row[j]);
                        row[t] = md(s * x + u * y, m);
                        row[j] = md(qg * x - pg * y, m);
                    }
                    dirty = true;
                }
            }
            if !dirty && (t + 1..rows).all(|i| a[i][t] == 0) {
                break;
            }
        }
        rank += 1;
    }

    let mut y = vec![0i64; cols];
    for t in 0..rank {
        let d = a[t][t];
        let g = gcd(d, m);
        if b[t] % g != 0 {
            return None;
        }
        let mg = m / g;
        y[t] = md((b[t] / g) * inv_mod(d / g, mg), mg);
    }
    if b[rank..].iter().any(|&r| r != 0) {
        return None;
    }
    let x = (0..cols)
        .map(|i| md((0..cols).map(|j| v[i][j] * y[j]).sum::<i64>(), m))
        .collect();
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn residual_ok(a: &[Vec<i64>], b: &[i64], x: &[i64], m: i64) -> bool {
        a.iter()
            .zip(b)
            .all(|(row, &bi)| md(row.iter().zip(x).map(|(p, q)| p * q).sum::<i64>() - bi, m) == 0)
    }

    fn brute_force(a: &[Vec<i64>], b: &[i64], m: i64) -> bool {
        let cols = a[0].len();
        let total = (m as usize).pow(cols as u32);
        (0..total).any(|mut code| {
            let x: Vec<i64> = (0..cols)
                .map(|_| {
                    let d = (code % m as usize) as i64;
                    code /= m as usize;
                    d
                })
                .collect();
            residual_ok(a, b, &x, m)
        })
    }

    #[test]
    fn simple_cases() {
        let a = vec![vec![2]];
        assert!(solve_mod(&a, &[1], 4).is_none());
        let x = solve_mod(&a, &[2], 4).unwrap();
        assert!(residual_ok(&a, &[2], &x, 4));
        assert_eq!(solve_mod(&[vec![3, 5]], &[7], 1), Some(vec![0, 0]));
    }

    #[test]
    fn rank_deficient_rows() {
        let a = vec![vec![1, 1], vec![2, 2]];
        assert!(solve_mod(&a, &[1, 1], 6).is_none());
        let x = solve_mod(&a, &[1, 2], 6).unwrap();
        assert!(residual_ok(&a, &[1, 2], &x, 6));
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(
            m in 2i64..7,
            a in prop::collection::vec(prop::collection::vec(0i64..12, 3), 1..5),
            b in prop::collection::vec(0i64..12, 5),
        ) {
            let b = &b[..a.len()];
            let found = solve_mod(&a, b, m);
            if let Some(x) = &found {
                prop_assert!(residual_ok(&a, b, x, m));
            }
            prop_assert_eq!(found.is_some(), brute_force(&a, b, m));
        }
    }
}
