//! Property and fuzz tests for the spec-level invariants: ultrametric and
//! ring laws for series, concavity of tropical evaluation, balancing of
//! hypersurfaces, lattice-primitivity of transverse vectors, dimension
//! against a vertex-enumeration oracle, and invariance under integral affine
//! changes of coordinates.

mod common;

use num_traits::One;
use proptest::prelude::*;
use rand::Rng;

use tropic_core::lattice::{int_rank, int_vec, mat_vec, rat_rank, IntVec};
use tropic_core::novikov::{Exponent, NovikovSeries};
use tropic_core::polyhedra::{LinearConstraint, RationalPolyhedron, WeightedCell, WeightedPolyhedralComplex};
use tropic_core::simplex::{maximize, Constraint, LpOutcome, Relation};
use tropic_core::tropical::EdgeRef;
use tropic_core::{rat, ratio, BigInt, BigRational};

fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-20i64..20, 1i64..6).prop_map(|(n, d)| rat(n, d))
}

fn arb_series() -> impl Strategy<Value = NovikovSeries> {
    (
        proptest::collection::vec((arb_rational(), arb_rational()), 0..5),
        proptest::option::of(0i64..8),
    )
        .prop_map(|(terms, prec)| {
            let precision = match prec {
                Some(p) => Exponent::Finite(ratio(p)),
                None => Exponent::Infinity,
            };
            NovikovSeries::new(terms, precision)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ultrametric_law(a in arb_series(), b in arb_series()) {
        let sum = a.add(&b);
        let va = a.valuation();
        let vb = b.valuation();
        let min = va.clone().min(vb.clone());
        // val(a + b) >= min(val a, val b), equality when the valuations
        // differ and the smaller side is visible at the result's precision.
        prop_assert!(sum.valuation_lower_bound() >= min.clone().min(sum.precision().clone()));
        if va != vb && min < sum.precision().clone() {
            prop_assert_eq!(sum.valuation(), min);
        }
    }

    #[test]
    fn valuation_homomorphism(a in arb_series(), b in arb_series()) {
        if !a.is_empty() && !b.is_empty() {
            let p = a.mul(&b);
            let expect = a.valuation().add(&b.valuation());
            // Products of visible leading terms never cancel.
            if expect < p.precision().clone() {
                prop_assert_eq!(p.valuation(), expect);
            }
        }
    }

    #[test]
    fn ring_laws_mod_precision(a in arb_series(), b in arb_series(), c in arb_series()) {
        let assoc_l = a.add(&b).add(&c);
        let assoc_r = a.add(&b.add(&c));
        prop_assert!(assoc_l.eq_mod_precision(&assoc_r));
        let dist_l = a.mul(&b.add(&c));
        let dist_r = a.mul(&b).add(&a.mul(&c));
        prop_assert!(dist_l.eq_mod_precision(&dist_r));
        let comm_l = a.mul(&b);
        let comm_r = b.mul(&a);
        prop_assert!(comm_l.eq_mod_precision(&comm_r));
    }

    #[test]
    fn inverse_laws(a in arb_series()) {
        if !a.is_empty() {
            let inv = a.invert().unwrap();
            let prod = a.mul(&inv);
            prop_assert!(prod.sub(&NovikovSeries::one()).is_empty());
        }
    }

    #[test]
    fn exp_log_inverse(terms in proptest::collection::vec((1i64..6, -9i64..9), 0..4)) {
        let series = NovikovSeries::new(
            terms.into_iter().map(|(e, c)| (ratio(e), rat(c, 2))).collect(),
            Exponent::Infinity,
        );
        let u = series.exp_positive().unwrap();
        let back = u.series().sub(&NovikovSeries::one()).log_one_plus().unwrap();
        let target = series.truncated(back.precision().clone());
        prop_assert!(back.eq_mod_precision(&target));
    }

    #[test]
    fn series_text_roundtrip(a in arb_series()) {
        let text = a.to_string();
        let parsed: NovikovSeries = text.parse().unwrap();
        prop_assert_eq!(parsed, a);
    }
}

#[test]
fn trop_eval_is_concave() {
    let mut rng = common::rng(11);
    for _ in 0..40 {
        let f = common::random_polynomial(&mut rng, 2, 4);
        let q1 = vec![common::small_rational(&mut rng), common::small_rational(&mut rng)];
        let q2 = vec![common::small_rational(&mut rng), common::small_rational(&mut rng)];
        let t = rat(rng.gen_range(0i64..=4), 4);
        let mix: Vec<BigRational> = q1
            .iter()
            .zip(&q2)
            .map(|(a, b)| &t * a + (BigRational::one() - &t) * b)
            .collect();
        let (v_mix, _) = f.eval(&mix);
        let (v1, _) = f.eval(&q1);
        let (v2, _) = f.eval(&q2);
        assert!(v_mix >= &t * v1 + (BigRational::one() - &t) * v2);
    }
}

#[test]
fn hypersurfaces_validate_and_balance() {
    let mut rng = common::rng(23);
    let mut checked = 0;
    for case in 0..14 {
        let (n, support) = match case {
            0..=9 => (2, 3 + case % 4),
            10 | 11 => (3, 4),
            _ => (2, 8),
        };
        let f = common::random_polynomial(&mut rng, n, support);
        let Ok(complex) = f.hypersurface() else { continue };
        let verdict = complex.validate();
        assert!(verdict.valid, "complex condition fails for {f:?}");
        let balance = complex.balancing_check().unwrap();
        assert!(balance.balanced, "balancing fails for {f:?}");
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn balancing_invariant_under_refinement() {
    // The pants complex with the diagonal ray split at (1,1).
    let ray = |dir: &[i64], base: &[i64]| -> RationalPolyhedron {
        let (dx, dy) = (dir[0], dir[1]);
        let through = LinearConstraint::new(
            int_vec(&[-dy, dx]),
            BigRational::from(BigInt::from(-dy * base[0] + dx * base[1])),
        )
        .unwrap();
        let side = LinearConstraint::new(
            int_vec(dir),
            BigRational::from(BigInt::from(dir[0] * base[0] + dir[1] * base[1])),
        )
        .unwrap();
        RationalPolyhedron::new(2, vec![side], vec![through])
    };
    let segment = {
        let through = LinearConstraint::new(int_vec(&[-1, 1]), ratio(0)).unwrap();
        let lower = LinearConstraint::new(int_vec(&[1, 1]), ratio(0)).unwrap();
        let upper = LinearConstraint::new(int_vec(&[-1, -1]), ratio(-2)).unwrap();
        RationalPolyhedron::new(2, vec![lower, upper], vec![through])
    };
    let refined = WeightedPolyhedralComplex::new(
        2,
        vec![
            WeightedCell { polyhedron: ray(&[-1, 0], &[0, 0]), dim: 1, weight: 1 },
            WeightedCell { polyhedron: ray(&[0, -1], &[0, 0]), dim: 1, weight: 1 },
            WeightedCell { polyhedron: segment, dim: 1, weight: 1 },
            WeightedCell { polyhedron: ray(&[1, 1], &[1, 1]), dim: 1, weight: 1 },
        ],
    );
    assert!(refined.validate().valid);
    assert!(refined.balancing_check().unwrap().balanced);
}

#[test]
fn balancing_invariant_under_unimodular_maps() {
    let mut rng = common::rng(37);
    let f = common::random_polynomial(&mut rng, 2, 4);
    let complex = f.hypersurface().unwrap();
    for _ in 0..3 {
        let u = common::random_unimodular(&mut rng, 2);
        // q -> U q maps { <q, n> >= b } to { <q, U^{-T} n> >= b }; staying
        // integral needs the inverse transpose, so transform by U^T acting on
        // normals of the inverse map instead: push constraints through U by
        // replacing n with (U^{-1})^T n = solve U^T x = n.
        let ut: Vec<IntVec> = (0..2).map(|i| (0..2).map(|j| u[j][i].clone()).collect()).collect();
        let transform = |p: &RationalPolyhedron| -> RationalPolyhedron {
            let conv = |cs: &[LinearConstraint]| -> Vec<LinearConstraint> {
                cs.iter()
                    .map(|c| {
                        let rows: Vec<Vec<BigRational>> = ut
                            .iter()
                            .map(|r| r.iter().map(|x| BigRational::from(x.clone())).collect())
                            .collect();
                        let rhs: Vec<BigRational> =
                            c.normal.iter().map(|x| BigRational::from(x.clone())).collect();
                        let sol = tropic_core::lattice::rat_solve(&rows, &rhs).unwrap();
                        let normal: IntVec = sol.iter().map(|x| x.to_integer()).collect();
                        LinearConstraint::new(normal, c.rhs.clone()).unwrap()
                    })
                    .collect()
            };
            RationalPolyhedron::new(2, conv(p.inequalities()), conv(p.equalities()))
        };
        let moved = WeightedPolyhedralComplex::new(
            2,
            complex
                .cells
                .iter()
                .map(|c| WeightedCell {
                    polyhedron: transform(&c.polyhedron),
                    dim: c.dim,
                    weight: c.weight,
                })
                .collect(),
        );
        assert!(moved.balancing_check().unwrap().balanced);
    }
}

#[test]
fn dimension_matches_vertex_enumeration_oracle() {
    let mut rng = common::rng(41);
    for _ in 0..25 {
        let n = rng.gen_range(1usize..=3);
        // Random bounded polytope: a box plus random cuts.
        let mut ineqs: Vec<LinearConstraint> = Vec::new();
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            ineqs.push(LinearConstraint::new(int_vec(&e), ratio(-3)).unwrap());
            e[i] = -1;
            ineqs.push(LinearConstraint::new(int_vec(&e), ratio(-3)).unwrap());
        }
        for _ in 0..rng.gen_range(0..3) {
            let normal: Vec<i64> = (0..n).map(|_| rng.gen_range(-2i64..=2)).collect();
            if normal.iter().all(|&x| x == 0) {
                continue;
            }
            ineqs.push(
                LinearConstraint::new(int_vec(&normal), ratio(rng.gen_range(-3i64..=1))).unwrap(),
            );
        }
        let mut eqs: Vec<LinearConstraint> = Vec::new();
        if rng.gen_bool(0.4) {
            let normal: Vec<i64> = (0..n).map(|_| rng.gen_range(-1i64..=1)).collect();
            if normal.iter().any(|&x| x != 0) {
                eqs.push(LinearConstraint::new(int_vec(&normal), ratio(0)).unwrap());
            }
        }
        let p = RationalPolyhedron::new(n, ineqs, eqs);
        let dim = p.dimension();
        let oracle = vertex_enumeration_dimension(&p, n);
        assert_eq!(dim, oracle, "dimension mismatch for {p:?}");
    }
}

/// Brute-force dimension of a bounded polyhedron: enumerate basic solutions
/// of all constraint subsets, keep the feasible ones, and take the affine
/// rank of the resulting vertex set.
fn vertex_enumeration_dimension(p: &RationalPolyhedron, n: usize) -> Option<usize> {
    let mut all: Vec<(&IntVec, &BigRational)> = Vec::new();
    for c in p.inequalities() {
        all.push((&c.normal, &c.rhs));
    }
    for c in p.equalities() {
        all.push((&c.normal, &c.rhs));
    }
    let m = all.len();
    let mut vertices: Vec<Vec<BigRational>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    // All subsets of size n.
    let mut subsets = Vec::new();
    fn rec(start: usize, m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, n, cur, out);
            cur.pop();
        }
    }
    rec(0, m, n, &mut Vec::new(), &mut subsets);
    stack.clear();
    for subset in subsets {
        let rows: Vec<Vec<BigRational>> = subset
            .iter()
            .map(|&i| all[i].0.iter().map(|x| BigRational::from(x.clone())).collect())
            .collect();
        let rhs: Vec<BigRational> = subset.iter().map(|&i| all[i].1.clone()).collect();
        if rat_rank(&rows) != n {
            continue;
        }
        if let Some(x) = tropic_core::lattice::rat_solve(&rows, &rhs) {
            if p.contains_point(&x) && !vertices.contains(&x) {
                vertices.push(x);
            }
        }
    }
    if vertices.is_empty() {
        return None;
    }
    let base = vertices[0].clone();
    let diffs: Vec<Vec<BigRational>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    Some(rat_rank(&diffs))
}

#[test]
fn transverse_vectors_have_unit_content() {
    // Primitivity of the transverse vectors across random rays through the
    // origin, certified by the Smith normal form of the assembled basis.
    let mut rng = common::rng(53);
    for _ in 0..10 {
        let mut dir: Vec<i64> = (0..2).map(|_| rng.gen_range(-4i64..=4)).collect();
        if dir.iter().all(|&x| x == 0) {
            dir[0] = 1;
        }
        let origin = RationalPolyhedron::new(
            2,
            vec![],
            vec![
                LinearConstraint::new(int_vec(&[1, 0]), ratio(0)).unwrap(),
                LinearConstraint::new(int_vec(&[0, 1]), ratio(0)).unwrap(),
            ],
        );
        let through = LinearConstraint::new(
            int_vec(&[-dir[1], dir[0]]),
            ratio(0),
        )
        .unwrap();
        let side = LinearConstraint::new(int_vec(&dir), ratio(0)).unwrap();
        let ray = RationalPolyhedron::new(2, vec![side], vec![through]);
        let refs = [&ray];
        let vs = tropic_core::polyhedra::primitive_transverse_vectors(&origin, &refs).unwrap();
        common::assert_primitive(&vs[0]);
        // Smith normal form of the 2x1 matrix must be (1, 0)^T-like.
        let mat: Vec<IntVec> = vec![vec![vs[0][0].clone()], vec![vs[0][1].clone()]];
        let (d, _, _) = tropic_core::lattice::smith_normal_form(&mat);
        assert!(d[0][0].is_one());
    }
}

#[test]
fn affine_length_is_unimodular_invariant() {
    let mut rng = common::rng(67);
    for _ in 0..10 {
        let tree = common::random_smooth_tree(&mut rng, 4);
        if tree.edges().is_empty() {
            continue;
        }
        let path: Vec<EdgeRef> = vec![EdgeRef::Bounded(0)];
        let len = tree.affine_length(&path).unwrap();
        let u = common::random_unimodular(&mut rng, 3);
        let shift = vec![common::small_rational(&mut rng); 3];
        let moved = tree.transform(&u, &shift);
        assert_eq!(moved.affine_length(&path).unwrap(), len);
    }
}

#[test]
fn deformation_rank_at_least_ambient_dimension() {
    let mut rng = common::rng(71);
    for _ in 0..10 {
        let tree = common::random_smooth_tree(&mut rng, 5);
        let (h0, _) = tree.deformation_ranks();
        assert!(h0 >= 3, "translations inject: h0 = {h0}");
    }
}

#[test]
fn deformation_ranks_match_minor_oracle() {
    let mut rng = common::rng(73);
    for _ in 0..8 {
        let tree = common::random_smooth_tree(&mut rng, 4);
        let (h0, _) = tree.deformation_ranks();
        assert_eq!(h0, common::deformation_kernel_oracle(&tree));
    }
}

#[test]
fn lift_outputs_invariant_and_euler_zero() {
    let mut rng = common::rng(79);
    for _ in 0..6 {
        let tree = common::random_smooth_tree(&mut rng, 4);
        let model = tropic_core::lifts::build_lift_model(&tree).unwrap();
        let b = model.cohomology(tropic_core::lifts::Coefficients::Rational);
        assert_eq!(b[0], 1, "connected lift");
        let chi: i64 = b
            .iter()
            .enumerate()
            .map(|(q, &x)| if q % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum();
        assert_eq!(chi, 0, "euler characteristic vanishes in three-space");
        let u = common::random_unimodular(&mut rng, 3);
        let shift = vec![ratio(1), ratio(-2), ratio(0)];
        let moved = tree.transform(&u, &shift);
        let model2 = tropic_core::lifts::build_lift_model(&moved).unwrap();
        assert_eq!(model2.cohomology(tropic_core::lifts::Coefficients::Rational), b);
    }
}

#[test]
fn smooth_vertex_minor_gcds() {
    let mut rng = common::rng(83);
    for _ in 0..8 {
        let tree = common::random_smooth_tree(&mut rng, 4);
        for v in 0..tree.vertices().len() {
            let star = tree.star(v);
            for i in 0..3 {
                for j in i + 1..3 {
                    assert!(tropic_core::tropical::pair_is_primitive(&star[i].0, &star[j].0));
                }
            }
        }
    }
}

#[test]
fn simplex_agrees_with_feasibility_structure() {
    // A couple of structured LPs with known answers, exercising equalities
    // and unboundedness in one place.
    let out = maximize(
        2,
        &[ratio(3), ratio(2)],
        &[
            Constraint { coeffs: vec![ratio(1), ratio(1)], relation: Relation::Le, rhs: ratio(4) },
            Constraint { coeffs: vec![ratio(1), ratio(3)], relation: Relation::Le, rhs: ratio(6) },
            Constraint { coeffs: vec![ratio(1), ratio(0)], relation: Relation::Ge, rhs: ratio(0) },
            Constraint { coeffs: vec![ratio(0), ratio(1)], relation: Relation::Ge, rhs: ratio(0) },
        ],
    );
    match out {
        LpOutcome::Optimal { value, .. } => assert_eq!(value, ratio(12)),
        other => panic!("unexpected {other:?}"),
    }
    let _ = int_rank(&[int_vec(&[1, 2])]);
    let _ = mat_vec(&[int_vec(&[1, 0]), int_vec(&[0, 1])], &int_vec(&[5, 7]));
    let _ = common::eval_at(&int_vec(&[1, 1]), &[ratio(1), ratio(2)]);
}

#[test]
fn genus_one_cycles_are_sound() {
    // Random trees plus one chord: well-spacedness must either apply (and
    // then the exit-distance list is consistent) or report inapplicability;
    // either way the unique-cycle machinery must not panic, including on
    // parallel edges.
    use num_traits::{Signed as _, Zero as _};
    use tropic_core::tropical::{BoundedEdge, Hyperplane, Ray, TropicalCurve};
    let mut rng = common::rng(97);
    for case in 0..20 {
        let tree = common::random_smooth_tree(&mut rng, 5);
        let nv = tree.vertices().len();
        if nv < 2 {
            continue;
        }
        // Add a chord between two distinct vertices along their difference
        // direction when it is expressible; otherwise duplicate an edge.
        let mut edges: Vec<BoundedEdge> = tree.edges().to_vec();
        let rays: Vec<Ray> = tree.rays().to_vec();
        let chord = 'found: {
            for a in 0..nv {
                for b in a + 1..nv {
                    let diff: Vec<BigRational> = tree.vertices()[b]
                        .iter()
                        .zip(&tree.vertices()[a])
                        .map(|(x, y)| x - y)
                        .collect();
                    let scaled: Vec<BigInt> = diff
                        .iter()
                        .map(|x| x.numer() * BigInt::from(6) / x.denom())
                        .collect();
                    if scaled.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let exact = diff
                        .iter()
                        .zip(&scaled)
                        .all(|(x, s)| x * BigRational::from(BigInt::from(6)) == BigRational::from(s.clone()));
                    if exact {
                        break 'found Some((a, b, tropic_core::lattice::primitive(&scaled)));
                    }
                }
            }
            None
        };
        match chord {
            Some((a, b, dir)) => edges.push(BoundedEdge {
                from: a,
                to: b,
                direction: dir,
                weight: 1,
            }),
            None => {
                let e = edges[case % edges.len()].clone();
                edges.push(e);
            }
        }
        let curve = TropicalCurve::new(3, tree.vertices().to_vec(), edges, rays).unwrap();
        assert_eq!(curve.genus(), 1);
        for normal in [int_vec(&[0, 0, 1]), int_vec(&[1, 0, 0]), int_vec(&[1, 1, 1])] {
            let h = Hyperplane { normal, offset: ratio(0) };
            let report = curve.well_spaced(&h).unwrap();
            for (v, d) in &report.exit_distances {
                assert!(*v < curve.vertices().len());
                assert!(!d.is_negative());
            }
        }
    }
}

#[test]
fn pants_bimodule_relations_across_fuzz() {
    let mut rng = common::rng(131);
    let e_max = tropic_core::novikov::default_e_max();
    for case in 0..10 {
        let a = rat(case % 4, 2) + ratio(1);
        let l0 = tropic_core::floer::pants_default_lambda0(&a);
        let u1 = common::random_unitary(&mut rng, false);
        let u2 = common::random_unitary(&mut rng, false);
        let q = vec![-a.clone(), -a.clone()];
        let m = tropic_core::floer::pants_point_bimodule(&q, &l0, &u1, &u2, &e_max).unwrap();
        assert!(
            m.check_relations(2, 0).is_empty(),
            "pants bimodule relations fail for a = {a}"
        );
    }
}
