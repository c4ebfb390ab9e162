//! Textbook two-phase rational simplex with Bland's rule.
//!
//! Dense tableaux over `BigRational`; termination is guaranteed and every
//! answer is exact. Built for desk-scale polyhedral queries, not performance.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal {
        value: BigRational,
        point: Vec<BigRational>,
    },
}

/// Maximize `objective . x` over free variables subject to the constraints.
pub fn maximize(n: usize, objective: &[BigRational], constraints: &[Constraint]) -> LpOutcome {
    assert_eq!(objective.len(), n);
    // Standard form: x_i = u_i - v_i, u,v >= 0; slack/surplus per inequality.
    let n_split = 2 * n;
    let n_slack = constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let total = n_split + n_slack;
    let m = constraints.len();

    let mut a = vec![vec![BigRational::zero(); total]; m];
    let mut b = vec![BigRational::zero(); m];
    let mut slack_idx = n_split;
    for (r, c) in constraints.iter().enumerate() {
        assert_eq!(c.coeffs.len(), n);
        for (i, coef) in c.coeffs.iter().enumerate() {
            a[r][2 * i] = coef.clone();
            a[r][2 * i + 1] = -coef.clone();
        }
        match c.relation {
            Relation::Ge => {
                a[r][slack_idx] = -BigRational::one();
                slack_idx += 1;
            }
            Relation::Le => {
                a[r][slack_idx] = BigRational::one();
                slack_idx += 1;
            }
            Relation::Eq => {}
        }
        b[r] = c.rhs.clone();
    }
    // Minimize -objective in split coordinates.
    let mut cost = vec![BigRational::zero(); total];
    for i in 0..n {
        cost[2 * i] = -objective[i].clone();
        cost[2 * i + 1] = objective[i].clone();
    }

    match solve_standard(&mut a, &mut b, &cost) {
        StandardOutcome::Infeasible => LpOutcome::Infeasible,
        StandardOutcome::Unbounded => LpOutcome::Unbounded,
        StandardOutcome::Optimal { value, x } => {
            let point = (0..n).map(|i| &x[2 * i] - &x[2 * i + 1]).collect();
            LpOutcome::Optimal {
                value: -value,
                point,
            }
        }
    }
}

enum StandardOutcome {
    Infeasible,
    Unbounded,
    Optimal {
        value: BigRational,
        x: Vec<BigRational>,
    },
}

/// Minimize `cost . x` subject to `a x = b`, `x >= 0` (two-phase, Bland).
fn solve_standard(
    a: &mut Vec<Vec<BigRational>>,
    b: &mut Vec<BigRational>,
    cost: &[BigRational],
) -> StandardOutcome {
    let m = a.len();
    let n = cost.len();
    for r in 0..m {
        if b[r].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
            b[r] = -b[r].clone();
        }
    }
    // Phase 1 tableau with artificial variables n..n+m.
    let width = n + m;
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|r| {
            let mut row = a[r].clone();
            row.extend((0..m).map(|k| {
                if k == r {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1 objective row: minimize sum of artificials.
    let mut obj = vec![BigRational::zero(); width + 1];
    for k in n..n + m {
        obj[k] = BigRational::one();
    }
    for r in 0..m {
        for c in 0..=width {
            let s = t[r][c].clone();
            obj[c] -= s;
        }
    }
    if !run_simplex(&mut t, &mut obj, &mut basis, width) {
        unreachable!("phase 1 is always bounded");
    }
    if !obj[width].is_zero() && (-obj[width].clone()).is_positive() {
        return StandardOutcome::Infeasible;
    }
    // Drive artificials out of the basis.
    let mut drop_rows: Vec<usize> = Vec::new();
    for r in 0..m {
        if basis[r] >= n {
            let pivot_col = (0..n).find(|&c| !t[r][c].is_zero());
            match pivot_col {
                Some(c) => {
                    pivot(&mut t, &mut obj, r, c, width);
                    basis[r] = c;
                }
                None => drop_rows.push(r),
            }
        }
    }
    for &r in drop_rows.iter().rev() {
        t.remove(r);
        basis.remove(r);
    }
    let m = t.len();

    // Phase 2 on a tableau without the artificial columns.
    let mut t2: Vec<Vec<BigRational>> = t
        .iter()
        .map(|row| {
            let mut r: Vec<BigRational> = row[..n].to_vec();
            r.push(row[width].clone());
            r
        })
        .collect();
    let mut obj2 = vec![BigRational::zero(); n + 1];
    obj2[..n].clone_from_slice(&cost[..n]);
    for r in 0..m {
        let k = basis[r];
        if !obj2[k].is_zero() {
            let f = obj2[k].clone();
            for c in 0..=n {
                let s = &t2[r][c] * &f;
                obj2[c] -= s;
            }
        }
    }
    if !run_simplex(&mut t2, &mut obj2, &mut basis, n) {
        return StandardOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for r in 0..m {
        if basis[r] < n {
            x[basis[r]] = t2[r][n].clone();
        }
    }
    let value = -obj2[n].clone();
    StandardOutcome::Optimal { value, x }
}

fn pivot(
    t: &mut [Vec<BigRational>],
    obj: &mut [BigRational],
    row: usize,
    col: usize,
    width: usize,
) {
    let p = t[row][col].clone();
    if !p.is_one() {
        for c in 0..=width {
            if !t[row][c].is_zero() {
                t[row][c] /= &p;
            }
        }
    }
    // Columns with nonzero pivot-row entries are the only ones that change.
    let active: Vec<usize> = (0..=width).filter(|&c| !t[row][c].is_zero()).collect();
    let m = t.len();
    for r in 0..m {
        if r != row && !t[r][col].is_zero() {
            let f = t[r][col].clone();
            for &c in &active {
                let s = &t[row][c] * &f;
                t[r][c] -= s;
            }
        }
    }
    if !obj[col].is_zero() {
        let f = obj[col].clone();
        for &c in &active {
            let s = &t[row][c] * &f;
            obj[c] -= s;
        }
    }
}

/// Bland's rule simplex. Returns false on unboundedness.
fn run_simplex(
    t: &mut Vec<Vec<BigRational>>,
    obj: &mut Vec<BigRational>,
    basis: &mut [usize],
    width: usize,
) -> bool {
    loop {
        let entering = (0..width).find(|&c| obj[c].is_negative());
        let Some(col) = entering else { return true };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..t.len() {
            if t[r][col].is_positive() {
                let ratio = &t[r][width] / &t[r][col];
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        if ratio < bratio || (ratio == bratio && basis[r] < basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
        }
        let Some((row, _)) = leave else { return false };
        pivot(t, obj, row, col, width);
        basis[row] = col;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    fn ge(coeffs: &[i64], rhs: i64) -> Constraint {
        Constraint {
            coeffs: coeffs.iter().map(|&x| ratio(x)).collect(),
            relation: Relation::Ge,
            rhs: ratio(rhs),
        }
    }

    fn le(coeffs: &[i64], rhs: i64) -> Constraint {
        Constraint {
            coeffs: coeffs.iter().map(|&x| ratio(x)).collect(),
            relation: Relation::Le,
            rhs: ratio(rhs),
        }
    }

    #[test]
    fn simple_max() {
        // max x + y st x <= 2, y <= 3, x,y >= 0
        let out = maximize(
            2,
            &[ratio(1), ratio(1)],
            &[le(&[1, 0], 2), le(&[0, 1], 3), ge(&[1, 0], 0), ge(&[0, 1], 0)],
        );
        match out {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, ratio(5));
                assert_eq!(point, vec![ratio(2), ratio(3)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible() {
        let out = maximize(1, &[ratio(0)], &[ge(&[1], 1), le(&[1], 0)]);
        assert_eq!(out, LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded() {
        let out = maximize(1, &[ratio(1)], &[ge(&[1], 0)]);
        assert_eq!(out, LpOutcome::Unbounded);
    }

    #[test]
    fn rational_answer() {
        // max y st 2y <= 1
        let out = maximize(1, &[ratio(1)], &[le(&[2], 1)]);
        match out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(1, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equality_constraints() {
        // max x st x + y = 1, y >= 0, x >= 0
        let out = maximize(
            2,
            &[ratio(1), ratio(0)],
            &[
                Constraint {
                    coeffs: vec![ratio(1), ratio(1)],
                    relation: Relation::Eq,
                    rhs: ratio(1),
                },
                ge(&[0, 1], 0),
                ge(&[1, 0], 0),
            ],
        );
        match out {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, ratio(1)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
