//! Exact rational polyhedra, weighted polyhedral complexes, and the balancing
//! condition at codimension-one facets.
//!
//! All geometric predicates reduce to exact LPs ([`crate::simplex`]) and
//! integer lattice computations ([`crate::lattice`]).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{self, content, integer_kernel, rat_rank, rat_solve, IntMat, IntVec};
use crate::simplex::{maximize, Constraint, LpOutcome, Relation};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PolyhedraError {
    #[error("the given polyhedron is not a common facet of every cell")]
    NotAFacet,
    #[error("constraint normal must be a nonzero integer vector")]
    ZeroNormal,
}

/// One constraint `<q, normal> >= rhs` (or `= rhs` when used as an equality).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub normal: IntVec,
    pub rhs: BigRational,
}

impl LinearConstraint {
    pub fn new(normal: IntVec, rhs: BigRational) -> Result<Self, PolyhedraError> {
        if normal.iter().all(|x| x.is_zero()) {
            return Err(PolyhedraError::ZeroNormal);
        }
        let g = content(&normal);
        Ok(LinearConstraint {
            normal: normal.iter().map(|x| x / &g).collect(),
            rhs: rhs / BigRational::from(g),
        })
    }

    fn eval(&self, q: &[BigRational]) -> BigRational {
        lattice::dot_rat(&self.normal, q) - &self.rhs
    }
}

/// A rational polyhedron `{ q : <q, n_i> >= b_i, <q, m_j> = c_j }`.
///
/// Feasibility, implicit equalities and a relative interior point are
/// computed once on demand and cached; the cache does not take part in
/// equality comparisons.
#[derive(Debug, Clone)]
pub struct RationalPolyhedron {
    ambient: usize,
    inequalities: Vec<LinearConstraint>,
    equalities: Vec<LinearConstraint>,
    analysis: std::sync::OnceLock<Analysis>,
}

impl PartialEq for RationalPolyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.inequalities == other.inequalities
            && self.equalities == other.equalities
    }
}

impl Eq for RationalPolyhedron {}

/// Cached feasibility data: a relative interior point (`None` when empty)
/// and the indices of implicit equalities among the inequalities.
#[derive(Debug, Clone)]
struct Analysis {
    relint: Option<Vec<BigRational>>,
    implicit: Vec<usize>,
}

impl RationalPolyhedron {
    pub fn new(
        ambient: usize,
        inequalities: Vec<LinearConstraint>,
        equalities: Vec<LinearConstraint>,
    ) -> Self {
        let mut p = RationalPolyhedron {
            ambient,
            inequalities: Vec::new(),
            equalities: Vec::new(),
            analysis: std::sync::OnceLock::new(),
        };
        for c in inequalities {
            if !p.inequalities.contains(&c) {
                p.inequalities.push(c);
            }
        }
        for mut c in equalities {
            // Canonical sign for equalities: first nonzero entry positive.
            if let Some(first) = c.normal.iter().find(|x| !x.is_zero()) {
                if first.is_negative() {
                    c.normal = c.normal.iter().map(|x| -x.clone()).collect();
                    c.rhs = -c.rhs;
                }
            }
            if !p.equalities.contains(&c) {
                p.equalities.push(c);
            }
        }
        p
    }

    /// Convenience constructor from integer data.
    pub fn from_rows(
        ambient: usize,
        ineqs: &[(&[i64], BigRational)],
        eqs: &[(&[i64], BigRational)],
    ) -> Self {
        let conv = |rows: &[(&[i64], BigRational)]| {
            rows.iter()
                .map(|(n, b)| LinearConstraint::new(lattice::int_vec(n), b.clone()).unwrap())
                .collect::<Vec<_>>()
        };
        Self::new(ambient, conv(ineqs), conv(eqs))
    }

    /// Whole space R^n.
    pub fn full_space(ambient: usize) -> Self {
        RationalPolyhedron {
            ambient,
            inequalities: Vec::new(),
            equalities: Vec::new(),
            analysis: std::sync::OnceLock::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn inequalities(&self) -> &[LinearConstraint] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[LinearConstraint] {
        &self.equalities
    }

    /// Intersection: union of the constraint systems.
    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let mut ineqs = self.inequalities.clone();
        ineqs.extend(other.inequalities.iter().cloned());
        let mut eqs = self.equalities.clone();
        eqs.extend(other.equalities.iter().cloned());
        Self::new(self.ambient, ineqs, eqs)
    }

    /// Add one inequality turned into an equality.
    pub fn with_tight(&self, ineq: &LinearConstraint) -> Self {
        let mut eqs = self.equalities.clone();
        eqs.push(ineq.clone());
        Self::new(self.ambient, self.inequalities.clone(), eqs)
    }

    fn lp_constraints(&self) -> Vec<Constraint> {
        let to_rat = |n: &IntVec| -> Vec<BigRational> {
            n.iter().map(|x| BigRational::from(x.clone())).collect()
        };
        let mut cs: Vec<Constraint> = self
            .inequalities
            .iter()
            .map(|c| Constraint {
                coeffs: to_rat(&c.normal),
                relation: Relation::Ge,
                rhs: c.rhs.clone(),
            })
            .collect();
        cs.extend(self.equalities.iter().map(|c| Constraint {
            coeffs: to_rat(&c.normal),
            relation: Relation::Eq,
            rhs: c.rhs.clone(),
        }));
        cs
    }

    pub fn is_feasible(&self) -> bool {
        self.analysis().relint.is_some()
    }

    /// Maximum of `<q, normal> - rhs` over the feasible polyhedron, capped at
    /// 1. An infeasible capped LP means the slack exceeds the cap everywhere.
    fn capped_max_slack(&self, c: &LinearConstraint) -> BigRational {
        let mut cs = self.lp_constraints();
        let coeffs: Vec<BigRational> = c
            .normal
            .iter()
            .map(|x| BigRational::from(x.clone()))
            .collect();
        cs.push(Constraint {
            coeffs: coeffs.clone(),
            relation: Relation::Le,
            rhs: &c.rhs + BigRational::one(),
        });
        match maximize(self.ambient, &coeffs, &cs) {
            LpOutcome::Infeasible => BigRational::one(),
            LpOutcome::Unbounded => unreachable!("slack is capped"),
            LpOutcome::Optimal { value, .. } => value - &c.rhs,
        }
    }

    /// One max-min-slack LP over the given implicit set: variables `(q, t)`,
    /// maximize `t` with every non-implicit slack at least `t`, capped at 1.
    fn min_slack_lp(&self, implicit: &[usize]) -> LpOutcome {
        let n = self.ambient;
        let mut cs: Vec<Constraint> = Vec::new();
        for (i, c) in self.inequalities.iter().enumerate() {
            let mut coeffs: Vec<BigRational> = c
                .normal
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect();
            if implicit.contains(&i) {
                coeffs.push(BigRational::zero());
                cs.push(Constraint {
                    coeffs,
                    relation: Relation::Eq,
                    rhs: c.rhs.clone(),
                });
            } else {
                coeffs.push(-BigRational::one());
                cs.push(Constraint {
                    coeffs,
                    relation: Relation::Ge,
                    rhs: c.rhs.clone(),
                });
            }
        }
        for c in &self.equalities {
            let mut coeffs: Vec<BigRational> = c
                .normal
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect();
            coeffs.push(BigRational::zero());
            cs.push(Constraint {
                coeffs,
                relation: Relation::Eq,
                rhs: c.rhs.clone(),
            });
        }
        let mut t_cap = vec![BigRational::zero(); n];
        t_cap.push(BigRational::one());
        cs.push(Constraint {
            coeffs: t_cap.clone(),
            relation: Relation::Le,
            rhs: BigRational::one(),
        });
        maximize(n + 1, &t_cap, &cs)
    }

    fn analysis(&self) -> &Analysis {
        self.analysis.get_or_init(|| {
            match self.min_slack_lp(&[]) {
                LpOutcome::Infeasible => Analysis {
                    relint: None,
                    implicit: Vec::new(),
                },
                LpOutcome::Unbounded => unreachable!("slack is capped"),
                LpOutcome::Optimal { value, point } => {
                    if value.is_negative() {
                        // Some slack is forced negative: the system is empty.
                        return Analysis {
                            relint: None,
                            implicit: Vec::new(),
                        };
                    }
                    if value.is_positive() {
                        // Every inequality can be simultaneously strict.
                        return Analysis {
                            relint: Some(point[..self.ambient].to_vec()),
                            implicit: Vec::new(),
                        };
                    }
                    // Only inequalities tight at the max-min-slack point can
                    // be implicit; check those individually.
                    let q = &point[..self.ambient];
                    let mut implicit = Vec::new();
                    for (i, c) in self.inequalities.iter().enumerate() {
                        if c.eval(q).is_zero() && self.capped_max_slack(c).is_zero() {
                            implicit.push(i);
                        }
                    }
                    match self.min_slack_lp(&implicit) {
                        LpOutcome::Optimal { point, .. } => Analysis {
                            relint: Some(point[..self.ambient].to_vec()),
                            implicit,
                        },
                        _ => unreachable!("feasible system stays feasible"),
                    }
                }
            }
        })
    }

    /// Indices of inequalities that hold with equality on the whole set.
    pub fn implicit_equalities(&self) -> Option<Vec<usize>> {
        let a = self.analysis();
        a.relint.as_ref()?;
        Some(a.implicit.clone())
    }

    /// All affine equations cutting out the affine hull (explicit equalities
    /// plus implicit ones). `None` when infeasible.
    pub fn affine_hull(&self) -> Option<Vec<LinearConstraint>> {
        let implicit = self.implicit_equalities()?;
        let mut hull = self.equalities.clone();
        hull.extend(implicit.iter().map(|&i| self.inequalities[i].clone()));
        Some(hull)
    }

    /// A point in the relative interior, or `None` when infeasible.
    pub fn relative_interior_point(&self) -> Option<Vec<BigRational>> {
        self.analysis().relint.clone()
    }

    /// Dimension of the affine hull; `None` for the empty polyhedron.
    pub fn dimension(&self) -> Option<usize> {
        let hull = self.affine_hull()?;
        let normals: IntMat = hull.iter().map(|c| c.normal.clone()).collect();
        Some(self.ambient - lattice::int_rank(&normals))
    }

    /// Basis of the tangent lattice `T_Z P` (integer vectors parallel to the
    /// affine hull). `None` for the empty polyhedron.
    pub fn tangent_lattice(&self) -> Option<Vec<IntVec>> {
        let hull = self.affine_hull()?;
        let normals: IntMat = hull.iter().map(|c| c.normal.clone()).collect();
        Some(integer_kernel(&normals, self.ambient))
    }

    pub fn contains_point(&self, q: &[BigRational]) -> bool {
        self.inequalities.iter().all(|c| !c.eval(q).is_negative())
            && self.equalities.iter().all(|c| c.eval(q).is_zero())
    }

    /// Whether `other` is a subset of `self`.
    pub fn contains(&self, other: &Self) -> bool {
        if !other.is_feasible() {
            return true;
        }
        let cs = other.lp_constraints();
        for c in &self.inequalities {
            let coeffs: Vec<BigRational> = c
                .normal
                .iter()
                .map(|x| -BigRational::from(x.clone()))
                .collect();
            match maximize(self.ambient, &coeffs, &cs) {
                LpOutcome::Unbounded => return false,
                LpOutcome::Optimal { value, .. } => {
                    if -value < c.rhs {
                        return false;
                    }
                }
                LpOutcome::Infeasible => unreachable!("checked feasible"),
            }
        }
        for c in &self.equalities {
            let coeffs: Vec<BigRational> = c
                .normal
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect();
            for sign in [BigRational::one(), -BigRational::one()] {
                let obj: Vec<BigRational> = coeffs.iter().map(|x| x * &sign).collect();
                match maximize(self.ambient, &obj, &cs) {
                    LpOutcome::Unbounded => return false,
                    LpOutcome::Optimal { value, .. } => {
                        if value != &c.rhs * &sign {
                            return false;
                        }
                    }
                    LpOutcome::Infeasible => unreachable!("checked feasible"),
                }
            }
        }
        true
    }

    /// Set equality.
    pub fn set_eq(&self, other: &Self) -> bool {
        self.contains(other) && other.contains(self)
    }

    /// The face of `self` generated by a subset: tighten every inequality
    /// whose functional vanishes on the subset's affine hull. The result
    /// contains the subset whenever the subset lies in `self`.
    fn face_generated_by(&self, hull: &[LinearConstraint]) -> Self {
        let mut eqs = self.equalities.clone();
        for c in &self.inequalities {
            if functional_vanishes_on_hull(hull, &c.normal, &c.rhs) {
                eqs.push(c.clone());
            }
        }
        Self::new(self.ambient, self.inequalities.clone(), eqs)
    }

    /// Whether `face` is a face of `self` (the empty set and `self` count).
    pub fn is_face(&self, face: &Self) -> bool {
        let Some(hull) = face.affine_hull() else {
            return true;
        };
        if !self.contains(face) {
            return false;
        }
        // The generated face contains `face`, so only one inclusion is left.
        face.contains(&self.face_generated_by(&hull))
    }

    /// The recession cone: the same constraints with right-hand sides
    /// dropped to zero.
    pub fn recession_cone(&self) -> RationalPolyhedron {
        let zeroed = |cs: &[LinearConstraint]| -> Vec<LinearConstraint> {
            cs.iter()
                .map(|c| LinearConstraint::new(c.normal.clone(), BigRational::zero()).unwrap())
                .collect()
        };
        Self::new(
            self.ambient,
            zeroed(&self.inequalities),
            zeroed(&self.equalities),
        )
    }

    /// The proper faces of codimension one.
    pub fn facets(&self) -> Vec<RationalPolyhedron> {
        let Some(d) = self.dimension() else {
            return Vec::new();
        };
        if d == 0 {
            return Vec::new();
        }
        let mut out: Vec<RationalPolyhedron> = Vec::new();
        for c in &self.inequalities {
            let f = self.with_tight(c);
            if f.dimension() == Some(d - 1) && !out.iter().any(|g| g.set_eq(&f)) {
                out.push(f);
            }
        }
        out
    }
}

/// A cell of a weighted complex.
#[derive(Debug, Clone)]
pub struct WeightedCell {
    pub polyhedron: RationalPolyhedron,
    pub dim: usize,
    pub weight: u64,
}

/// A finite collection of weighted cells expected to meet face-to-face.
#[derive(Debug, Clone)]
pub struct WeightedPolyhedralComplex {
    pub ambient: usize,
    pub cells: Vec<WeightedCell>,
}

/// One violation of the complex condition.
#[derive(Debug, Clone)]
pub struct ComplexViolation {
    pub cell_a: usize,
    pub cell_b: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct ComplexVerdict {
    pub valid: bool,
    pub violations: Vec<ComplexViolation>,
}

/// The balancing defect at one facet of the top stratum.
#[derive(Debug, Clone)]
pub struct FacetDefect {
    pub facet: RationalPolyhedron,
    pub incident_cells: Vec<usize>,
    /// Representative of the defect class in `Z^n / T_Z W`; `None` when that
    /// class vanishes.
    pub defect: Option<IntVec>,
}

#[derive(Debug, Clone)]
pub struct BalancingVerdict {
    pub balanced: bool,
    pub facets: Vec<FacetDefect>,
}

impl WeightedPolyhedralComplex {
    pub fn new(ambient: usize, cells: Vec<WeightedCell>) -> Self {
        WeightedPolyhedralComplex { ambient, cells }
    }

    pub fn top_dimension(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    /// Check the polyhedral-complex condition: every pairwise intersection is
    /// empty or a common face, and declared dimensions match.
    pub fn validate(&self) -> ComplexVerdict {
        let mut violations = Vec::new();
        for (i, cell) in self.cells.iter().enumerate() {
            match cell.polyhedron.dimension() {
                Some(d) if d == cell.dim => {}
                Some(d) => violations.push(ComplexViolation {
                    cell_a: i,
                    cell_b: i,
                    reason: format!("declared dim {} but computed {}", cell.dim, d),
                }),
                None => violations.push(ComplexViolation {
                    cell_a: i,
                    cell_b: i,
                    reason: "cell is empty".into(),
                }),
            }
        }
        for i in 0..self.cells.len() {
            for j in i + 1..self.cells.len() {
                let a = &self.cells[i].polyhedron;
                let b = &self.cells[j].polyhedron;
                let inter = a.intersect(b);
                let Some(hull) = inter.affine_hull() else {
                    continue;
                };
                // The generated faces contain the intersection; it is a
                // common face exactly when they do not overshoot, and since
                // each lies in its own cell the other cell bounds it.
                let fa = a.face_generated_by(&hull);
                let fb = b.face_generated_by(&hull);
                if !b.contains(&fa) || !a.contains(&fb) {
                    violations.push(ComplexViolation {
                        cell_a: i,
                        cell_b: j,
                        reason: "intersection is not a common face".into(),
                    });
                }
            }
        }
        ComplexVerdict {
            valid: violations.is_empty(),
            violations,
        }
    }

    /// Distinct codimension-one facets of top-dimensional cells along with the
    /// incident top cells.
    fn top_facets(&self) -> Vec<(RationalPolyhedron, Vec<usize>)> {
        let Some(top) = self.top_dimension() else {
            return Vec::new();
        };
        let mut out: Vec<(RationalPolyhedron, Vec<usize>)> = Vec::new();
        for (i, cell) in self.cells.iter().enumerate() {
            if cell.dim != top {
                continue;
            }
            for f in cell.polyhedron.facets() {
                match out.iter_mut().find(|(g, _)| g.set_eq(&f)) {
                    Some((_, incident)) => {
                        if !incident.contains(&i) {
                            incident.push(i);
                        }
                    }
                    None => out.push((f, vec![i])),
                }
            }
        }
        out
    }

    /// Check the balancing condition at every facet of the top stratum.
    /// Assumes `validate` passes.
    pub fn balancing_check(&self) -> Result<BalancingVerdict, PolyhedraError> {
        let mut facets = Vec::new();
        let mut balanced = true;
        for (w, incident) in self.top_facets() {
            let cells: Vec<&RationalPolyhedron> = incident
                .iter()
                .map(|&i| &self.cells[i].polyhedron)
                .collect();
            let vs = primitive_transverse_vectors(&w, &cells)?;
            let n = self.ambient;
            let mut sum = vec![BigInt::zero(); n];
            for (v, &ci) in vs.iter().zip(&incident) {
                let wgt = BigInt::from(self.cells[ci].weight);
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += x * &wgt;
                }
            }
            let tangent = w.tangent_lattice().ok_or(PolyhedraError::NotAFacet)?;
            let lat = lattice::Lattice::from_generators(&tangent, n);
            let ok = if sum.iter().all(|x| x.is_zero()) {
                true
            } else {
                lat.spans_rationally(&sum)
            };
            if !ok {
                balanced = false;
            }
            facets.push(FacetDefect {
                facet: w,
                incident_cells: incident,
                defect: if ok { None } else { Some(sum) },
            });
        }
        Ok(BalancingVerdict { balanced, facets })
    }
}

/// For a common facet `w` of the cells, a primitive transverse vector per
/// cell: `v_i` in `T_Z V_i` with `T_Z V_i = T_Z W (+) <v_i>`, pointing from
/// `w` into the cell.
pub fn primitive_transverse_vectors(
    w: &RationalPolyhedron,
    cells: &[&RationalPolyhedron],
) -> Result<Vec<IntVec>, PolyhedraError> {
    let n = w.ambient_dim();
    let dw = w.dimension().ok_or(PolyhedraError::NotAFacet)?;
    let basis_w = w.tangent_lattice().ok_or(PolyhedraError::NotAFacet)?;
    let w0 = w
        .relative_interior_point()
        .ok_or(PolyhedraError::NotAFacet)?;
    let mut out = Vec::new();
    for cell in cells {
        let dv = cell.dimension().ok_or(PolyhedraError::NotAFacet)?;
        if dv != dw + 1 || !cell.is_face(w) {
            return Err(PolyhedraError::NotAFacet);
        }
        let basis_v = cell.tangent_lattice().ok_or(PolyhedraError::NotAFacet)?;
        // Coordinates of T_Z W inside T_Z V.
        let a: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                basis_v
                    .iter()
                    .map(|col| BigRational::from(col[r].clone()))
                    .collect()
            })
            .collect();
        let mut coords: Vec<IntVec> = Vec::new();
        for wv in &basis_w {
            let b: Vec<BigRational> = wv.iter().map(|x| BigRational::from(x.clone())).collect();
            let x = rat_solve(&a, &b).ok_or(PolyhedraError::NotAFacet)?;
            let xi: IntVec = x
                .iter()
                .map(|q| {
                    assert!(q.is_integer(), "facet lattice not contained in cell lattice");
                    q.to_integer()
                })
                .collect();
            coords.push(xi);
        }
        // Primitive functional annihilating the facet coordinates.
        let ker = integer_kernel(&coords, dv);
        if ker.len() != 1 {
            return Err(PolyhedraError::NotAFacet);
        }
        let phi = &ker[0];
        let u = solve_unit_pairing(phi);
        let mut v: IntVec = vec![BigInt::zero(); n];
        for (j, col) in basis_v.iter().enumerate() {
            for (r, x) in col.iter().enumerate() {
                v[r] += x * &u[j];
            }
        }
        // Orient away from the facet, into the cell.
        let tight: Vec<&LinearConstraint> = cell
            .inequalities()
            .iter()
            .filter(|c| c.eval(&w0).is_zero())
            .collect();
        let pairing_ok = |vec: &IntVec| {
            tight
                .iter()
                .all(|c| !lattice::dot(&c.normal, vec).is_negative())
        };
        let v = if pairing_ok(&v) {
            v
        } else {
            let flipped: IntVec = v.iter().map(|x| -x.clone()).collect();
            if !pairing_ok(&flipped) {
                return Err(PolyhedraError::NotAFacet);
            }
            flipped
        };
        out.push(v);
    }
    Ok(out)
}

/// Integer vector `u` with `<phi, u> = 1` for primitive `phi`.
fn solve_unit_pairing(phi: &IntVec) -> IntVec {
    use num_integer::Integer;
    let mut u = vec![BigInt::zero(); phi.len()];
    let mut g = BigInt::zero();
    for (i, p) in phi.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        if g.is_zero() {
            // u restricted to this coordinate: solve p * x = gcd(p) = |p|.
            let e = p.extended_gcd(&BigInt::zero());
            u[i] = e.x;
            g = e.gcd;
        } else {
            let e = g.extended_gcd(p);
            // e.gcd = e.x * g + e.y * p
            for x in u.iter_mut() {
                *x *= &e.x;
            }
            u[i] = e.y;
            g = e.gcd;
        }
        if g.is_one() {
            break;
        }
    }
    assert!(g.is_one(), "functional is not primitive");
    u
}

/// Rank of the system of affine-hull normals spanned jointly by constraints;
/// used by callers that need to test whether an affine functional vanishes on
/// a polyhedron's hull.
pub fn functional_vanishes_on_hull(
    hull: &[LinearConstraint],
    normal: &IntVec,
    rhs: &BigRational,
) -> bool {
    // (normal, rhs) must be a rational combination of the hull equations.
    let rows: Vec<Vec<BigRational>> = hull
        .iter()
        .map(|c| {
            let mut r: Vec<BigRational> = c
                .normal
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect();
            r.push(c.rhs.clone());
            r
        })
        .collect();
    let mut with: Vec<Vec<BigRational>> = rows.clone();
    let mut target: Vec<BigRational> = normal
        .iter()
        .map(|x| BigRational::from(x.clone()))
        .collect();
    target.push(rhs.clone());
    with.push(target);
    rat_rank(&rows) == rat_rank(&with)
}
