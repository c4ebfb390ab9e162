#![allow(dead_code)]
//! Shared generators for the fuzz corpora: random tropical polynomials with
//! liftable facets, random smooth genus-zero trees, and random unitary
//! series. Everything is seeded for reproducibility.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropic_core::lattice::{dot, int_vec, mat_vec, rat_solve, IntMat, IntVec};
use tropic_core::polyhedra::LinearConstraint;
use tropic_core::novikov::{NovikovSeries, UnitaryElement};
use tropic_core::tropical::{pair_is_primitive, BoundedEdge, Ray, TropicalCurve, TropicalPolynomial};
use tropic_core::{rat, ratio, BigInt, BigRational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-6i64..=6);
    let den = *[1i64, 2, 3].iter().nth(rng.gen_range(0..3)).unwrap();
    rat(num, den)
}

/// A random polynomial with distinct small exponents.
pub fn random_polynomial(rng: &mut ChaCha8Rng, n: usize, support: usize) -> TropicalPolynomial {
    random_polynomial_with(rng, n, support, false)
}

/// Same, with integer coefficients: keeps the denominators of facet data
/// small, which the Newton lifts appreciate.
pub fn random_integral_polynomial(
    rng: &mut ChaCha8Rng,
    n: usize,
    support: usize,
) -> TropicalPolynomial {
    random_polynomial_with(rng, n, support, true)
}

fn random_polynomial_with(
    rng: &mut ChaCha8Rng,
    n: usize,
    support: usize,
    integral: bool,
) -> TropicalPolynomial {
    loop {
        let mut exps: Vec<IntVec> = Vec::new();
        while exps.len() < support {
            let e: IntVec = (0..n)
                .map(|_| BigInt::from(rng.gen_range(if integral { -1i64..=2 } else { -2i64..=3 })))
                .collect();
            if !exps.contains(&e) {
                exps.push(e);
            }
        }
        let terms: Vec<(IntVec, BigRational)> = exps
            .into_iter()
            .map(|e| {
                let c = if integral {
                    ratio(rng.gen_range(-4i64..=4))
                } else {
                    small_rational(rng)
                };
                (e, c)
            })
            .collect();
        if let Ok(f) = TropicalPolynomial::new(n, terms) {
            return f;
        }
    }
}

/// A random polynomial whose every facet admits a rational Newton lift with
/// default seeds: exactly two achievers on each facet and an odd coordinate
/// gap between them.
pub fn liftable_polynomial(rng: &mut ChaCha8Rng, n: usize, support: usize) -> TropicalPolynomial {
    'outer: loop {
        let f = random_integral_polynomial(rng, n, support);
        let Ok(complex) = f.hypersurface() else { continue };
        let mut has_facet = false;
        for cell in &complex.cells {
            if cell.dim + 1 != n {
                continue;
            }
            has_facet = true;
            // Sampling wants a small-denominator interior point; reject
            // polynomials whose facets cannot provide one.
            let boxed = boxed_interior_point(&cell.polyhedron);
            let hull = cell.polyhedron.affine_hull().unwrap();
            let Some(q) = coarsen_on_hull(&hull, &boxed) else {
                continue 'outer;
            };
            let (_, argmin) = f.eval(&q);
            if argmin.len() != 2 {
                continue 'outer;
            }
            let a = &f.terms()[argmin[0]].0;
            let b = &f.terms()[argmin[1]].0;
            let odd = a
                .iter()
                .zip(b)
                .any(|(x, y)| ((x - y) % BigInt::from(2)).abs() == BigInt::one());
            if !odd {
                continue 'outer;
            }
        }
        if has_facet {
            return f;
        }
    }
}

/// A random unitary series: nonzero constant term plus a few positive terms.
pub fn random_unitary(rng: &mut ChaCha8Rng, force_nontrivial: bool) -> UnitaryElement {
    loop {
        let mut c0 = small_rational(rng);
        if c0.is_zero() {
            c0 = BigRational::one();
        }
        let mut series = NovikovSeries::from_rational(c0.clone());
        for _ in 0..rng.gen_range(0..3) {
            let exp = rat(rng.gen_range(1i64..=6), *[1i64, 2].iter().nth(rng.gen_range(0..2)).unwrap());
            let coeff = small_rational(rng);
            series = series.add(&NovikovSeries::monomial(coeff, exp));
        }
        let u = UnitaryElement::new(series).expect("constant term nonzero");
        if force_nontrivial && u.series().sub(&NovikovSeries::one()).is_empty() {
            continue;
        }
        return u;
    }
}

/// Random unimodular matrix with small entries: a short product of
/// elementary operations applied to the identity.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMat {
    let mut m: IntMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    for _ in 0..6 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = BigInt::from(*[-1i64, 1].iter().nth(rng.gen_range(0..2)).unwrap());
        for k in 0..n {
            let add = &m[j][k] * &c;
            m[i][k] += add;
        }
    }
    m
}

/// A random smooth genus-zero tree in three-space with at most `max_vertices`
/// vertices: start from a standard frame moved by a random unimodular map and
/// repeatedly split a ray into an edge with a new smooth vertex.
pub fn random_smooth_tree(rng: &mut ChaCha8Rng, max_vertices: usize) -> TropicalCurve {
    let n = 3;
    let u = random_unimodular(rng, n);
    let d1 = mat_vec(&u, &int_vec(&[1, 0, 0]));
    let d2 = mat_vec(&u, &int_vec(&[0, 1, 0]));
    let d3: IntVec = d1.iter().zip(&d2).map(|(a, b)| -(a + b)).collect();
    let mut vertices = vec![vec![ratio(0), ratio(0), ratio(0)]];
    let mut edges: Vec<BoundedEdge> = Vec::new();
    let mut rays = vec![
        Ray { base: 0, direction: d1, weight: 1 },
        Ray { base: 0, direction: d2, weight: 1 },
        Ray { base: 0, direction: d3, weight: 1 },
    ];
    let target = rng.gen_range(1..=max_vertices);
    while vertices.len() < target {
        // Split a random ray at distance one.
        let ri = rng.gen_range(0..rays.len());
        let ray = rays.remove(ri);
        let base = vertices[ray.base].clone();
        let new_vertex: Vec<BigRational> = base
            .iter()
            .zip(&ray.direction)
            .map(|(x, d)| x + BigRational::from(d.clone()))
            .collect();
        vertices.push(new_vertex);
        let w = vertices.len() - 1;
        // Incoming direction at the new vertex.
        let back: IntVec = ray.direction.iter().map(|x| -x.clone()).collect();
        // Complete to a smooth triple: find a second direction making a
        // primitive pair, third balances.
        let second = loop {
            let v = random_unimodular(rng, n);
            let cand = mat_vec(&v, &int_vec(&[0, 0, 1]));
            if pair_is_primitive(&back, &cand) {
                break cand;
            }
        };
        let third: IntVec = back.iter().zip(&second).map(|(a, b)| -(a + b)).collect();
        edges.push(BoundedEdge {
            from: ray.base,
            to: w,
            direction: ray.direction,
            weight: 1,
        });
        rays.push(Ray { base: w, direction: second, weight: 1 });
        rays.push(Ray { base: w, direction: third, weight: 1 });
    }
    let curve = TropicalCurve::new(n, vertices, edges, rays).expect("constructed tree is valid");
    assert!(curve.is_balanced().ok);
    curve
}

/// Verify a vector really is primitive in its span direction (content one).
pub fn assert_primitive(v: &IntVec) {
    let mut g = BigInt::zero();
    for x in v {
        g = num_integer::Integer::gcd(&g, x);
    }
    assert!(g.is_one(), "vector {v:?} is not primitive");
}

/// Dot helper on rational points.
pub fn eval_at(normal: &IntVec, q: &[BigRational]) -> BigRational {
    let _ = dot(normal, normal);
    normal
        .iter()
        .zip(q)
        .map(|(n, x)| BigRational::from(n.clone()) * x)
        .sum()
}

/// Independent assembly of the deformation system: vertex displacements only,
/// one row per vanishing 2x2 minor of (difference, direction).
pub fn deformation_kernel_oracle(curve: &tropic_core::tropical::TropicalCurve) -> usize {
    let n = curve.ambient_dim();
    let nv = curve.vertices().len();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for e in curve.edges() {
        for i in 0..n {
            for j in i + 1..n {
                let mut row = vec![BigRational::zero(); nv * n];
                // d_i (delta_u - delta_v)_j - d_j (delta_u - delta_v)_i = 0
                let di = BigRational::from(e.direction[i].clone());
                let dj = BigRational::from(e.direction[j].clone());
                row[e.from * n + j] += &di;
                row[e.to * n + j] -= &di;
                row[e.from * n + i] -= &dj;
                row[e.to * n + i] += &dj;
                rows.push(row);
            }
        }
    }
    let rank = tropic_core::lattice::rat_rank(&rows);
    // Ray-end variables are determined by their base vertex, so they add
    // nothing to the kernel: the oracle works in vertex variables alone.
    nv * n - rank
}


/// Replace a facet point by a nearby one with small denominators: round to
/// the 1/8 lattice, then correct back onto the affine hull by a sparse exact
/// solve. Returns `None` when the hull system rejects the correction.
pub fn coarsen_on_hull(
    hull: &[LinearConstraint],
    q0: &[BigRational],
) -> Option<Vec<BigRational>> {
    let eight = ratio(8);
    let rounded: Vec<BigRational> = q0
        .iter()
        .map(|x| (x * &eight).round() / &eight)
        .collect();
    if hull.is_empty() {
        return Some(rounded);
    }
    let rows: Vec<Vec<BigRational>> = hull
        .iter()
        .map(|c| c.normal.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    let rhs: Vec<BigRational> = hull
        .iter()
        .map(|c| {
            let at: BigRational = c
                .normal
                .iter()
                .zip(&rounded)
                .map(|(n, x)| BigRational::from(n.clone()) * x)
                .sum();
            &c.rhs - at
        })
        .collect();
    let x = rat_solve(&rows, &rhs)?;
    Some(rounded.iter().zip(&x).map(|(a, b)| a + b).collect())
}

/// Relative interior point of a cell clipped to the box `[-5, 5]^n`; falls
/// back to the unclipped interior point for cells missing the box.
pub fn boxed_interior_point(
    cell: &tropic_core::polyhedra::RationalPolyhedron,
) -> Vec<BigRational> {
    let n = cell.ambient_dim();
    let mut ineqs = Vec::new();
    for i in 0..n {
        let mut e = vec![BigInt::from(0); n];
        e[i] = BigInt::from(1);
        ineqs.push(LinearConstraint::new(e.clone(), ratio(-5)).unwrap());
        e[i] = BigInt::from(-1);
        ineqs.push(LinearConstraint::new(e, ratio(-5)).unwrap());
    }
    let boxed = cell.intersect(&tropic_core::polyhedra::RationalPolyhedron::new(
        n,
        ineqs,
        Vec::new(),
    ));
    boxed
        .relative_interior_point()
        .or_else(|| cell.relative_interior_point())
        .expect("facet is nonempty")
}
