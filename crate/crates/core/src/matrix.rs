//! Exact integer and rational matrix kernels: fraction-free determinants,
//! Smith and Hermite normal forms, rational symmetric diagonalization and
//! LDL^T factorization. Everything here is arbitrary precision; callers that
//! store `i64` convert at the boundary.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IMat = Vec<Vec<Int>>;

pub fn int_mat_from_i64(m: &[Vec<i64>]) -> IMat {
    m.iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let (n, k) = (a.len(), b.len());
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![Int::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let t = &a[i][l] * &b[l][j];
                out[i][j] += t;
            }
        }
    }
    out
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss(m: &IMat) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a = m.to_vec();
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            // pivot search
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact by Bareiss
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Smith normal form: returns (u, d, v) with u*m*v = d, u and v unimodular,
/// d diagonal with non-negative entries satisfying d[i] | d[i+1].
pub fn smith_normal_form(m: &IMat) -> (IMat, IMat, IMat) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let dim = rows.min(cols);

    let mut t = 0;
    while t < dim {
        // smallest nonzero entry in the trailing block, scan order breaks ties
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() {
                    let better = match &pivot {
                        None => true,
                        Some((pi, pj)) => a[i][j].abs() < a[*pi][*pj].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
        }

        let mut clean = true;
        for i in t + 1..rows {
            if !a[i][t].is_zero() {
                let q = div_nearest(&a[i][t], &a[t][t]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                    for j in 0..rows {
                        let s = &q * &u[t][j];
                        u[i][j] -= s;
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..cols {
            if !a[t][j].is_zero() {
                let q = div_nearest(&a[t][j], &a[t][t]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let s = &q * &a[i][t];
                        a[i][j] -= s;
                    }
                    for i in 0..cols {
                        let s = &q * &v[i][t];
                        v[i][j] -= s;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // smaller pivot now exists, redo this step
        }
        // pivot must divide the rest of the block
        let mut bump = None;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    bump = Some(i);
                    break 'outer;
                }
            }
        }
        if let Some(i) = bump {
            for j in 0..cols {
                let s = a[i][j].clone();
                a[t][j] += s;
            }
            for j in 0..rows {
                let s = u[i][j].clone();
                u[t][j] += s;
            }
            continue;
        }
        t += 1;
    }

    // sign normalization
    for k in 0..dim {
        if a[k][k].is_negative() {
            for j in 0..cols {
                a[k][j] = -a[k][j].clone();
            }
            for j in 0..rows {
                u[k][j] = -u[k][j].clone();
            }
        }
    }
    // enforce divisibility chain
    let mut k = 0;
    while k + 1 < dim {
        if !a[k][k].is_zero() && !(&a[k + 1][k + 1] % &a[k][k]).is_zero() {
            // pull d[k+1] into column k and rerun elimination from k
            for i in 0..rows {
                let s = a[i][k + 1].clone();
                a[i][k] += s;
            }
            for i in 0..cols {
                let s = v[i][k + 1].clone();
                v[i][k] += s;
            }
            let (u2, d2, v2) = smith_normal_form(&a);
            return (mat_mul(&u2, &u), d2, mat_mul(&v, &v2));
        }
        k += 1;
    }
    (u, a, v)
}

fn div_nearest(a: &Int, b: &Int) -> Int {
    // quotient rounded toward nearest, keeps remainders small
    let (q, r) = a.div_rem(b);
    let two_r: Int = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// In-place row-style Hermite normal form with positive pivots and entries
/// above each pivot reduced; zero rows are removed. Rows span the same
/// lattice as the input.
pub fn row_hnf(a: &mut IMat) {
    let rows = a.len();
    if rows == 0 {
        return;
    }
    let cols = a[0].len();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        // gcd the column entries below pivot_row into one row
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                if !a[i][col].is_zero() {
                    best = Some(match best {
                        None => i,
                        Some(b) => {
                            if a[i][col].abs() < a[b][col].abs() {
                                i
                            } else {
                                b
                            }
                        }
                    });
                }
            }
            let Some(b) = best else { break };
            a.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..rows {
                if !a[i][col].is_zero() {
                    let q = div_nearest(&a[i][col], &a[pivot_row][col]);
                    for j in 0..cols {
                        let s = &q * &a[pivot_row][j];
                        a[i][j] -= s;
                    }
                    if !a[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[pivot_row][col].is_zero() {
            continue;
        }
        if a[pivot_row][col].is_negative() {
            for j in 0..cols {
                a[pivot_row][j] = -a[pivot_row][j].clone();
            }
        }
        for i in 0..pivot_row {
            let q = a[i][col].div_floor(&a[pivot_row][col]);
            if !q.is_zero() {
                for j in 0..cols {
                    let s = &q * &a[pivot_row][j];
                    a[i][j] -= s;
                }
            }
        }
        pivot_row += 1;
    }
    a.truncate(pivot_row);
}

/// Signature (p, q) of a nondegenerate symmetric matrix by exact symmetric
/// Gaussian diagonalization over the rationals.
pub fn signature(gram: &IMat) -> (usize, usize) {
    let n = gram.len();
    let mut a: Vec<Vec<Rat>> = gram
        .iter()
        .map(|r| r.iter().map(|x| Rat::from(x.clone())).collect())
        .collect();
    let (mut p, mut q) = (0usize, 0usize);
    let mut live: Vec<usize> = (0..n).collect();
    while let Some(&k) = live.first() {
        if a[k][k].is_zero() {
            // find a partner index with nonzero coupling and symmetrize
            let Some(&j) = live.iter().find(|&&j| !a[k][j].is_zero()) else {
                // fully zero row on the live block: degenerate, count nothing
                live.remove(0);
                continue;
            };
            for i in 0..n {
                let t = a[i][j].clone();
                a[i][k] += t;
            }
            for i in 0..n {
                let t = a[j][i].clone();
                a[k][i] += t;
            }
        }
        let pivot = a[k][k].clone();
        if pivot > Rat::zero() {
            p += 1;
        } else {
            q += 1;
        }
        let rest: Vec<usize> = live.iter().copied().filter(|&i| i != k).collect();
        for &i in &rest {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for &j in &rest {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
            a[i][k] = Rat::zero();
            a[k][i] = Rat::zero();
        }
        live.remove(0);
    }
    (p, q)
}

/// LDL^T factorization of a symmetric matrix over the rationals.
/// Returns `(lower, diag)` with unit lower-triangular `lower`, or `None`
/// when a pivot is not strictly positive (matrix not positive definite).
pub fn ldl(gram: &IMat) -> Option<(Vec<Vec<Rat>>, Vec<Rat>)> {
    let n = gram.len();
    let mut l = vec![vec![Rat::zero(); n]; n];
    let mut d = vec![Rat::zero(); n];
    for j in 0..n {
        let mut dj = Rat::from(gram[j][j].clone());
        for k in 0..j {
            let t = &l[j][k] * &l[j][k] * &d[k];
            dj -= t;
        }
        if dj <= Rat::zero() {
            return None;
        }
        d[j] = dj;
        l[j][j] = Rat::one();
        for i in j + 1..n {
            let mut s = Rat::from(gram[i][j].clone());
            for k in 0..j {
                let t = &l[i][k] * &l[j][k] * &d[k];
                s -= t;
            }
            l[i][j] = s / &d[j];
        }
    }
    Some((l, d))
}

/// Solve a*x = b exactly over the rationals; `None` if a is singular.
pub fn solve_rational(a: &IMat, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            row.iter()
                .map(|x| Rat::from(x.clone()))
                .chain(std::iter::once(rhs.clone()))
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, p);
        let inv = m[k][k].clone();
        for j in k..=n {
            m[k][j] = &m[k][j] / &inv;
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for j in k..=n {
                    let t = &f * &m[k][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(m: &[&[i64]]) -> IMat {
        m.iter()
            .map(|r| r.iter().map(|&x| Int::from(x)).collect())
            .collect()
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(det_bareiss(&im(&[&[2, -1], &[-1, 2]])), Int::from(3));
        assert_eq!(det_bareiss(&im(&[&[0, 1], &[1, 0]])), Int::from(-1));
        assert_eq!(det_bareiss(&im(&[&[1, 2], &[2, 4]])), Int::zero());
    }

    #[test]
    fn snf_examples() {
        let (u, d, v) = smith_normal_form(&identity(3));
        assert_eq!(d, identity(3));
        assert_eq!(mat_mul(&mat_mul(&u, &identity(3)), &v), d);

        // A2 gram -> diag(1,3)
        let a2 = im(&[&[2, -1], &[-1, 2]]);
        let (u, d, v) = smith_normal_form(&a2);
        assert_eq!(d[0][0], Int::from(1));
        assert_eq!(d[1][1], Int::from(3));
        assert_eq!(mat_mul(&mat_mul(&u, &a2), &v), d);
        assert_eq!(det_bareiss(&u).abs(), Int::one());
        assert_eq!(det_bareiss(&v).abs(), Int::one());

        let m = im(&[&[2, 0], &[0, 4]]);
        let (_, d, _) = smith_normal_form(&m);
        assert_eq!(d[0][0], Int::from(2));
        assert_eq!(d[1][1], Int::from(4));
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = im(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]);
        let (u, d, v) = smith_normal_form(&m);
        assert_eq!(mat_mul(&mat_mul(&u, &m), &v), d);
        let diag: Vec<_> = (0..3).map(|i| d[i][i].clone()).collect();
        assert_eq!(diag, vec![Int::from(2), Int::from(2), Int::from(60)]);
    }

    #[test]
    fn signature_u_and_a2() {
        assert_eq!(signature(&im(&[&[0, 1], &[1, 0]])), (1, 1));
        assert_eq!(signature(&im(&[&[2, -1], &[-1, 2]])), (2, 0));
        assert_eq!(signature(&im(&[&[-2, 1], &[1, -2]])), (0, 2));
    }

    #[test]
    fn hnf_reduces() {
        let mut m = im(&[&[2, 4, 6], &[1, 2, 3], &[0, 0, 5]]);
        row_hnf(&mut m);
        assert_eq!(m, im(&[&[1, 2, 3], &[0, 0, 5]]));
    }

    #[test]
    fn ldl_definite_check() {
        assert!(ldl(&im(&[&[2, -1], &[-1, 2]])).is_some());
        assert!(ldl(&im(&[&[0, 1], &[1, 0]])).is_none());
        assert!(ldl(&im(&[&[-2, 0], &[0, 2]])).is_none());
    }
}
