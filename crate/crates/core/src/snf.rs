//! Exact integer matrix reductions: Smith normal form (for abelian group
//! structure) and row Hermite normal form (for comparing lattices).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major.
pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn matrix_from_i64(rows: &[&[i64]]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Nonzero invariant factors `d_1 | d_2 | ... | d_r` (all positive) and the
/// free rank of the cokernel `Z^cols / rowspace`, which is `cols - r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub divisors: Vec<BigInt>,
    pub free_rank: usize,
}

/// Smith normal form by repeated gcd reduction, pivoting on the entry of
/// smallest absolute value.
pub fn smith_normal_form(m: &IntMatrix, cols: usize) -> SmithForm {
    let mut a: IntMatrix = m.clone();
    for row in &a {
        assert_eq!(row.len(), cols, "ragged matrix");
    }
    let rows = a.len();
    let mut divisors = Vec::new();
    let mut t = 0usize;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&a, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            // clear column t below the pivot
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // the pivot must divide every remaining entry
                if let Some(i) = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])))
                {
                    for j in t..cols {
                        let x = a[i][j].clone();
                        a[t][j] += x;
                    }
                    continue;
                }
                break;
            }
            // move the smallest entry of row/column t into the pivot
            let (pi, pj) = smallest_in_cross(&a, t);
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
        }
        divisors.push(a[t][t].abs());
        t += 1;
    }
    SmithForm {
        free_rank: cols - divisors.len(),
        divisors,
    }
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().map_or(true, |(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn smallest_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t, a[t][t].abs());
    for i in t + 1..a.len() {
        let x = a[i][t].abs();
        if !x.is_zero() && (best.2.is_zero() || x < best.2) {
            best = (i, t, x);
        }
    }
    for j in t + 1..a[t].len() {
        let x = a[t][j].abs();
        if !x.is_zero() && (best.2.is_zero() || x < best.2) {
            best = (t, j, x);
        }
    }
    (best.0, best.1)
}

/// Row-style Hermite normal form of the lattice spanned by the rows: nonzero
/// rows only, positive pivots, entries above each pivot reduced into
/// `[0, pivot)`. Two row sets span the same lattice iff their forms agree.
pub fn hermite_normal_form(m: &IntMatrix, cols: usize) -> IntMatrix {
    let mut a: IntMatrix = m.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivot_row = 0usize;
    for j in 0..cols {
        if pivot_row >= a.len() {
            break;
        }
        // gcd-combine column j into row pivot_row
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..a.len() {
                if !a[i][j].is_zero()
                    && best.map_or(true, |b| a[i][j].abs() < a[b][j].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..a.len() {
                if a[i][j].is_zero() {
                    continue;
                }
                let q = a[i][j].div_floor(&a[pivot_row][j]);
                for k in j..cols {
                    let d = &q * &a[pivot_row][k];
                    a[i][k] -= d;
                }
                if !a[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][j].is_zero() {
            continue;
        }
        if a[pivot_row][j].is_negative() {
            for x in a[pivot_row].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..pivot_row {
            let q = a[i][j].div_floor(&a[pivot_row][j]);
            if q.is_zero() {
                continue;
            }
            for k in j..cols {
                let d = &q * &a[pivot_row][k];
                a[i][k] -= d;
            }
        }
        pivot_row += 1;
    }
    a.truncate(pivot_row);
    a
}

/// Bezout coefficients `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
/// When `b != 0`, `x` is normalized into `[0, |b| / g)`.
pub fn bezout(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    let (mut g, mut x, mut y) = (e.gcd, e.x, e.y);
    if g.is_negative() {
        g = -g;
        x = -x;
        y = -y;
    }
    if !b.is_zero() && !g.is_zero() {
        let step = (b / &g).abs();
        let shift = x.div_floor(&step);
        x -= &shift * &step;
        // keep a x + b y = g
        let b_step = b / &g;
        if b_step.is_positive() {
            y += &shift * (a / &g);
        } else {
            y -= &shift * (a / &g);
        }
    }
    debug_assert_eq!(a * &x + b * &y, g);
    (g, x, y)
}

pub fn is_coprime(a: &BigInt, b: &BigInt) -> bool {
    a.gcd(b).is_one()
}
