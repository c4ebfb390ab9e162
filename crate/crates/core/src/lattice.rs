//! Integer matrix utilities: Hermite and Smith normal forms, saturated
//! kernels, basis completion, and a canonical lattice type.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntVec = Vec<BigInt>;
pub type IntMat = Vec<Vec<BigInt>>;

pub fn int_vec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| BigRational::from(x.clone()) * y)
        .sum()
}

/// Gcd of the entries; zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Divide out the content, keeping the direction. Panics on the zero vector.
pub fn primitive(v: &[BigInt]) -> IntVec {
    let g = content(v);
    assert!(!g.is_zero(), "primitive part of zero vector");
    v.iter().map(|x| x / &g).collect()
}

fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Row-style Hermite reduction with transformation: returns `(h, u)` with
/// `u * a = h`, `u` unimodular, `h` in row echelon form with positive pivots
/// and reduced entries above each pivot.
pub fn row_hermite(a: &[IntVec]) -> (IntMat, IntMat) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h: IntMat = a.to_vec();
    let mut u = identity(rows);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        // Euclid the column below pivot_row to a single nonzero entry.
        loop {
            let mut idx: Option<usize> = None;
            for r in pivot_row..rows {
                if !h[r][col].is_zero() {
                    idx = match idx {
                        None => Some(r),
                        Some(i) => {
                            if h[r][col].abs() < h[i][col].abs() {
                                Some(r)
                            } else {
                                Some(i)
                            }
                        }
                    };
                }
            }
            let Some(min_r) = idx else { break };
            h.swap(pivot_row, min_r);
            u.swap(pivot_row, min_r);
            let mut done = true;
            let pivot = h[pivot_row][col].clone();
            for r in pivot_row + 1..rows {
                if !h[r][col].is_zero() {
                    let q = h[r][col].div_floor(&pivot);
                    if !q.is_zero() {
                        for c in 0..cols {
                            let s = &h[pivot_row][c] * &q;
                            h[r][c] -= s;
                        }
                        for c in 0..rows {
                            let s = &u[pivot_row][c] * &q;
                            u[r][c] -= s;
                        }
                    }
                    if !h[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[pivot_row][col].is_zero() {
            continue;
        }
        if h[pivot_row][col].is_negative() {
            for c in 0..cols {
                h[pivot_row][c] = -h[pivot_row][c].clone();
            }
            for c in 0..rows {
                u[pivot_row][c] = -u[pivot_row][c].clone();
            }
        }
        // Reduce entries above the pivot.
        let pivot = h[pivot_row][col].clone();
        for r in 0..pivot_row {
            let q = h[r][col].div_floor(&pivot);
            if !q.is_zero() {
                for c in 0..cols {
                    let s = &h[pivot_row][c] * &q;
                    h[r][c] -= s;
                }
                for c in 0..rows {
                    let s = &u[pivot_row][c] * &q;
                    u[r][c] -= s;
                }
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Rank of an integer matrix over the rationals.
pub fn int_rank(a: &[IntVec]) -> usize {
    let (h, _) = row_hermite(a);
    h.iter().filter(|row| row.iter().any(|x| !x.is_zero())).count()
}

/// Basis for the saturated lattice `{ x in Z^n : a * x = 0 }` where `a` is a
/// list of row constraints of length `n`. Returned as a list of basis vectors.
pub fn integer_kernel(a: &[IntVec], n: usize) -> Vec<IntVec> {
    // Kernel of a (rows x n): row-hermite the transpose-trick matrix [a^T] is
    // not needed: reduce [b | I] where b = a^T (n x rows); rows of I whose b
    // part becomes zero form a basis of { x : x * a^T = 0 } = ker(a).
    let rows = a.len();
    let b: IntMat = (0..n)
        .map(|i| (0..rows).map(|r| a[r][i].clone()).collect())
        .collect();
    let (h, u) = row_hermite(&b);
    let mut basis = Vec::new();
    for (r, hrow) in h.iter().enumerate() {
        if hrow.iter().all(|x| x.is_zero()) {
            basis.push(u[r].clone());
        }
    }
    basis
}

/// Smith normal form: returns `(d, u, v)` with `u * a * v = d` diagonal,
/// `u`, `v` unimodular, and each diagonal entry dividing the next.
pub fn smith_normal_form(a: &IntMat) -> (IntMat, IntMat, IntMat) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Find a nonzero pivot in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero() {
                    pivot = match pivot {
                        None => Some((i, j)),
                        Some((pi, pj)) => {
                            if d[i][j].abs() < d[pi][pj].abs() {
                                Some((i, j))
                            } else {
                                Some((pi, pj))
                            }
                        }
                    };
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        let p = d[t][t].clone();
        for i in t + 1..rows {
            if !d[i][t].is_zero() {
                let q = d[i][t].div_floor(&p);
                for c in 0..cols {
                    let s = &d[t][c] * &q;
                    d[i][c] -= s;
                }
                for c in 0..rows {
                    let s = &u[t][c] * &q;
                    u[i][c] -= s;
                }
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        let p = d[t][t].clone();
        for j in t + 1..cols {
            if !d[t][j].is_zero() {
                let q = d[t][j].div_floor(&p);
                for r in 0..rows {
                    let s = &d[r][t] * &q;
                    d[r][j] -= s;
                }
                for r in 0..cols {
                    let s2 = &v[r][t] * &q;
                    v[r][j] -= s2;
                }
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // Divisibility fixup: fold any non-divisible entry into the pivot.
        let p = d[t][t].clone();
        let mut fixed = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&d[i][j] % &p).is_zero() {
                    for c in 0..cols {
                        let s = d[i][c].clone();
                        d[t][c] += s;
                    }
                    for c in 0..rows {
                        let s = u[i][c].clone();
                        u[t][c] += s;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        if d[t][t].is_negative() {
            for c in 0..cols {
                d[t][c] = -d[t][c].clone();
            }
            for c in 0..rows {
                u[t][c] = -u[t][c].clone();
            }
        }
        t += 1;
    }
    (d, u, v)
}

/// Complete a set of columns spanning a saturated rank-k sublattice of Z^n to
/// a basis of Z^n. Returns an n x n unimodular matrix whose first k columns
/// are the inputs. Panics when the columns do not span a saturated lattice.
pub fn complete_to_basis(cols: &[IntVec], n: usize) -> IntMat {
    let k = cols.len();
    // Matrix C with the given columns.
    let c: IntMat = (0..n)
        .map(|i| (0..k).map(|j| cols[j][i].clone()).collect())
        .collect();
    let (d, u, v) = smith_normal_form(&c);
    for t in 0..k {
        assert!(
            d[t][t].is_one(),
            "columns do not span a saturated sublattice"
        );
    }
    // u * c * v = [I_k; 0]  =>  columns of u^{-1} * [v^{-1} 0; 0 I] restrict
    // correctly; build b = u^{-1} * [[v^{-1}],[0]] extended by u^{-1} tail.
    let u_inv = invert_unimodular(&u);
    let v_inv = invert_unimodular(&v);
    // First k columns: u_inv * (v_inv stacked over zeros) ... column j of the
    // stack is (v_inv[.][j]; 0), so column j of b is sum_i v_inv[i][j] *
    // u_inv[.][i]. Remaining columns: u_inv[.][k..n].
    let mut b: IntMat = vec![vec![BigInt::zero(); n]; n];
    for j in 0..k {
        for r in 0..n {
            let mut s = BigInt::zero();
            for i in 0..k {
                s += &u_inv[r][i] * &v_inv[i][j];
            }
            b[r][j] = s;
        }
    }
    for j in k..n {
        for (r, row) in b.iter_mut().enumerate() {
            row[j] = u_inv[r][j].clone();
        }
    }
    for (j, col) in cols.iter().enumerate() {
        for (r, colv) in col.iter().enumerate() {
            debug_assert_eq!(&b[r][j], colv);
        }
    }
    b
}

/// Inverse of a unimodular integer matrix (exact, stays integral).
pub fn invert_unimodular(a: &IntMat) -> IntMat {
    let n = a.len();
    let (h, u) = row_hermite(a);
    // h must be the identity for a unimodular matrix.
    for (i, row) in h.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            assert!(
                (i == j && x.is_one()) || (i != j && x.is_zero()),
                "matrix is not unimodular"
            );
        }
    }
    debug_assert_eq!(u.len(), n);
    u
}

pub fn mat_mul(a: &[IntVec], b: &[IntVec]) -> IntMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[IntVec], x: &[BigInt]) -> IntVec {
    a.iter().map(|row| dot(row, x)).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rat_rref(a: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].clone().recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let s = &a[r][j] * &f;
                    a[i][j] -= s;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a rational matrix.
pub fn rat_rank(a: &[Vec<BigRational>]) -> usize {
    let mut m = a.to_vec();
    rat_rref(&mut m).len()
}

/// Any solution of `a x = b`, or `None` when inconsistent.
pub fn rat_solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rat_rref(&mut m);
    // Inconsistent when a pivot lands in the rhs column.
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Basis of the kernel of a rational matrix acting on column vectors.
pub fn rat_kernel(a: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut m = a.to_vec();
    let pivots = rat_rref(&mut m);
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// A sublattice of Z^n stored by a canonical Hermite-echelon generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    ambient: usize,
    /// Basis vectors (rows of the canonical echelon form), linearly
    /// independent; their count is the rank.
    basis: Vec<IntVec>,
}

impl Lattice {
    /// Lattice generated by the given vectors in Z^n (canonicalized).
    pub fn from_generators(gens: &[IntVec], ambient: usize) -> Self {
        if gens.is_empty() {
            return Lattice {
                ambient,
                basis: Vec::new(),
            };
        }
        let (h, _) = row_hermite(&gens.to_vec());
        let basis: Vec<IntVec> = h
            .into_iter()
            .filter(|row| row.iter().any(|x| !x.is_zero()))
            .collect();
        Lattice { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    /// Whether the vector lies in the rational span of the lattice.
    pub fn spans_rationally(&self, v: &[BigInt]) -> bool {
        let mut rows: IntMat = self.basis.clone();
        rows.push(v.to_vec());
        int_rank(&rows) == self.rank()
    }

    /// Whether the vector is an element of the lattice.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        // Solve x * basis = v over the integers via Hermite form.
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        let (h, u) = row_hermite(&rows);
        // v in lattice iff the last original row reduces to zero with integer
        // coefficients, i.e. some row of h is zero and the echelon of the
        // basis alone equals the echelon with v appended.
        let rank_with = h
            .iter()
            .filter(|row| row.iter().any(|x| !x.is_zero()))
            .count();
        if rank_with != self.rank() {
            return false;
        }
        // Express v in the echelon basis by back-substitution over Q and
        // check integrality.
        let _ = u;
        let mut target: Vec<BigRational> =
            v.iter().map(|x| BigRational::from(x.clone())).collect();
        for b in &self.basis {
            let pivot_col = b.iter().position(|x| !x.is_zero()).unwrap();
            let coeff = target[pivot_col].clone() / BigRational::from(b[pivot_col].clone());
            if !coeff.is_integer() {
                return false;
            }
            for (t, bv) in target.iter_mut().zip(b) {
                *t -= &coeff * BigRational::from(bv.clone());
            }
        }
        target.iter().all(|x| x.is_zero())
    }
}
