//! Small exact linear algebra: Gaussian elimination over Q(s), rational
//! matrices, and integer kernel bases via unimodular column reduction.

use crate::qfield::QRat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

// ---------------------------------------------------------------------------
// matrices over Q(s)
// ---------------------------------------------------------------------------

pub type QMat = Vec<Vec<QRat>>;

pub fn qmat_zero(rows: usize, cols: usize) -> QMat {
    vec![vec![QRat::zero(); cols]; rows]
}

pub fn qmat_identity(n: usize) -> QMat {
    let mut m = qmat_zero(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = QRat::one();
    }
    m
}

pub fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = qmat_zero(rows, cols);
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

pub fn qmat_transpose(a: &QMat) -> QMat {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut out = qmat_zero(cols, rows);
    for i in 0..rows {
        for j in 0..cols {
            out[j][i] = a[i][j].clone();
        }
    }
    out
}

pub fn qmat_eq(a: &QMat, b: &QMat) -> bool {
    a == b
}

/// Row-reduce in place; returns the pivot column of each eliminated row.
fn row_reduce(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        // pick the structurally simplest nonzero pivot in column c
        let mut best: Option<usize> = None;
        for i in r..rows {
            if !m[i][c].is_zero() {
                let complexity = m[i][c].num().degree() + m[i][c].den().degree();
                match best {
                    None => best = Some(i),
                    Some(j) => {
                        let jc = m[j][c].num().degree() + m[j][c].den().degree();
                        if complexity < jc {
                            best = Some(i);
                        }
                    }
                }
            }
        }
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Pivot columns of a matrix over Q(s): the greedy leftmost maximal set of
/// linearly independent columns.
pub fn qmat_pivot_columns(a: &QMat) -> Vec<usize> {
    let mut m = a.to_vec();
    row_reduce(&mut m)
}

/// Rank of a matrix over Q(s).
pub fn qmat_rank(a: &QMat) -> usize {
    let mut m = a.to_vec();
    row_reduce(&mut m).len()
}

/// Basis of the right kernel {v : A v = 0} over Q(s).
pub fn qmat_kernel(a: &QMat) -> Vec<Vec<QRat>> {
    let cols = if a.is_empty() { return Vec::new() } else { a[0].len() };
    let mut m = a.to_vec();
    let pivots = row_reduce(&mut m);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![QRat::zero(); cols];
        v[free] = QRat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[row][free];
        }
        basis.push(v);
    }
    basis
}

/// Solve A x = b over Q(s).  Returns (particular solution, kernel basis) or
/// None when inconsistent.
pub fn qmat_solve(a: &QMat, b: &[QRat]) -> Option<(Vec<QRat>, Vec<Vec<QRat>>)> {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut m: QMat = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut m);
    // inconsistent when a pivot lands in the rhs column
    if pivots.iter().any(|&c| c == cols) {
        return None;
    }
    let mut x = vec![QRat::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][cols].clone();
    }
    let kernel = {
        let stripped: QMat = m.iter().map(|r| r[..cols].to_vec()).collect();
        // rows are already reduced; reuse them directly
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![QRat::zero(); cols];
            v[free] = QRat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&stripped[row][free];
            }
            basis.push(v);
        }
        basis
    };
    Some((x, kernel))
}

// ---------------------------------------------------------------------------
// matrices over Q (classical oracle support)
// ---------------------------------------------------------------------------

pub type RMat = Vec<Vec<BigRational>>;

pub fn rmat_zero(rows: usize, cols: usize) -> RMat {
    vec![vec![BigRational::zero(); cols]; rows]
}

pub fn rmat_mul(a: &RMat, b: &RMat) -> RMat {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = rmat_zero(rows, cols);
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

pub fn rmat_sub(a: &RMat, b: &RMat) -> RMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn rmat_add(a: &RMat, b: &RMat) -> RMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn rmat_scale(a: &RMat, c: &BigRational) -> RMat {
    a.iter()
        .map(|r| r.iter().map(|x| x * c).collect())
        .collect()
}

pub fn rmat_is_zero(a: &RMat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

pub fn rmat_bracket(a: &RMat, b: &RMat) -> RMat {
    rmat_sub(&rmat_mul(a, b), &rmat_mul(b, a))
}

/// Solve A x = b exactly over Q; None when inconsistent.
pub fn rmat_solve(a: &RMat, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in c..=cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let t = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][cols].clone();
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// integer kernels (lattice bases)
// ---------------------------------------------------------------------------

/// Z-basis of the kernel lattice {v in Z^n : M v = 0} of an integer matrix,
/// computed by unimodular column operations (Hermite-style reduction of M).
/// The kernel of an integer matrix is a saturated sublattice, so the returned
/// vectors generate every integer solution over Z.
pub fn integer_kernel(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    if cols == 0 {
        return Vec::new();
    }
    // work matrix a (rows x cols) and transform u (cols x cols), a = m * u0
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() })
                .collect()
        })
        .collect();

    let col_swap = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in u.iter_mut() {
            row.swap(i, j);
        }
    };
    // col_j -= f * col_i
    let col_axpy =
        |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, j: usize, i: usize, f: &BigInt| {
            for row in a.iter_mut() {
                let t = &row[i] * f;
                row[j] -= t;
            }
            for row in u.iter_mut() {
                let t = &row[i] * f;
                row[j] -= t;
            }
        };

    let mut lead = 0usize;
    for r in 0..rows {
        if lead >= cols {
            break;
        }
        loop {
            // find the nonzero entry of minimal absolute value in row r at or
            // right of `lead`
            let mut best: Option<usize> = None;
            for c in lead..cols {
                if !a[r][c].is_zero() {
                    match best {
                        None => best = Some(c),
                        Some(b) => {
                            if a[r][c].abs() < a[r][b].abs() {
                                best = Some(c);
                            }
                        }
                    }
                }
            }
            let Some(p) = best else { break };
            col_swap(&mut a, &mut u, lead, p);
            let mut done = true;
            for c in (lead + 1)..cols {
                if !a[r][c].is_zero() {
                    let f = a[r][c].div_floor(&a[r][lead]);
                    if !f.is_zero() {
                        col_axpy(&mut a, &mut u, c, lead, &f);
                    }
                    if !a[r][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                lead += 1;
                break;
            }
        }
    }
    // columns of u beyond `lead` span the kernel
    let mut basis = Vec::new();
    for c in lead..cols {
        // confirm (paranoia against logic errors)
        let mut v = Vec::with_capacity(cols);
        for r in 0..cols {
            let x = &u[r][c];
            v.push(i64::try_from(x).expect("kernel coordinate overflow"));
        }
        let ok = m.iter().all(|row| {
            row.iter()
                .zip(&v)
                .map(|(&m_ij, &v_j)| i128::from(m_ij) * i128::from(v_j))
                .sum::<i128>()
                == 0
        });
        assert!(ok, "integer kernel reduction produced a non-kernel column");
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::QRat;

    #[test]
    fn kernel_of_theta_minus_id_flip() {
        // Theta swaps -alpha1 and -alpha2: matrix [[0,-1],[-1,0]];
        // Theta - id has kernel spanned by (1,-1).
        let m = vec![vec![-1i64, -1], vec![-1, -1]];
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(v[0] + v[1], 0);
        assert_eq!(v[0].abs(), 1);
    }

    #[test]
    fn kernel_full_and_trivial() {
        let zero = vec![vec![0i64, 0], vec![0, 0]];
        assert_eq!(integer_kernel(&zero).len(), 2);
        let inv = vec![vec![2i64, 0], vec![0, 2]];
        assert_eq!(integer_kernel(&inv).len(), 0);
    }

    #[test]
    fn kernel_is_saturated_basis() {
        // M = [1 2 3]: kernel rank 2; check the basis generates (1,1,-1)
        let m = vec![vec![1i64, 2, 3]];
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        // solve c1*k0 + c2*k1 = (1,1,-1) over Q and check integrality
        let a: RMat = (0..3)
            .map(|i| {
                vec![
                    BigRational::from_integer(k[0][i].into()),
                    BigRational::from_integer(k[1][i].into()),
                ]
            })
            .collect();
        let b: Vec<BigRational> = [1i64, 1, -1]
            .iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect();
        let sol = rmat_solve(&a, &b).expect("consistent");
        assert!(sol.iter().all(|c| c.is_integer()));
    }

    #[test]
    fn qmat_solve_and_kernel() {
        // x + q y = q^2, y free'd by a second dependent row
        let q = QRat::q();
        let a = vec![
            vec![QRat::one(), q.clone()],
            vec![q.clone(), q.pow(2)],
        ];
        let b = vec![q.pow(2), q.pow(3)];
        let (x, ker) = qmat_solve(&a, &b).expect("consistent");
        assert_eq!(ker.len(), 1);
        // verify a * x = b
        for (row, rhs) in a.iter().zip(&b) {
            let mut acc = QRat::zero();
            for (c, xi) in row.iter().zip(&x) {
                acc = &acc + &(c * xi);
            }
            assert_eq!(&acc, rhs);
        }
        assert_eq!(qmat_rank(&a), 1);
        assert_eq!(qmat_kernel(&a).len(), 1);
    }

    #[test]
    fn qmat_solve_inconsistent() {
        let a = vec![vec![QRat::one()], vec![QRat::one()]];
        let b = vec![QRat::zero(), QRat::one()];
        assert!(qmat_solve(&a, &b).is_none());
    }
}
