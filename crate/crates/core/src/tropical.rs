//! Min-plus tropical polynomials and their hypersurfaces, tropical curves
//! with smoothness/genus/adaptedness checks, affine length, Speyer
//! well-spacedness, and deformation ranks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{
    self, content, dot, dot_rat, int_rank, integer_kernel, primitive, rat_rank, IntVec,
};
use crate::polyhedra::{
    functional_vanishes_on_hull, LinearConstraint, RationalPolyhedron, WeightedCell,
    WeightedPolyhedralComplex,
};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum TropicalError {
    #[error("polynomial has a single monomial; its hypersurface is empty")]
    ConstantPolynomial,
    #[error("polynomial support is empty")]
    EmptySupport,
    #[error("duplicate exponent in support")]
    DuplicateExponent,
    #[error("curve is invalid: {0}")]
    BadCurve(String),
    #[error("curve graph is disconnected")]
    Disconnected,
    #[error("path is not connected")]
    DisconnectedPath,
    #[error("path uses an unbounded edge")]
    UnboundedEdgeInPath,
    #[error("well-spacedness requires genus exactly one")]
    GenusNotOne,
    #[error("complex does not determine a curve: {0}")]
    AmbiguousGraph(String),
    #[error("fan has a duplicate ray")]
    DuplicateRay,
}

/// A min-plus polynomial `min_alpha (a_alpha + <alpha, q>)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPolynomial {
    ambient: usize,
    /// `(exponent, coefficient)` pairs; exponents pairwise distinct.
    terms: Vec<(IntVec, BigRational)>,
}

impl TropicalPolynomial {
    pub fn new(ambient: usize, terms: Vec<(IntVec, BigRational)>) -> Result<Self, TropicalError> {
        if terms.is_empty() {
            return Err(TropicalError::EmptySupport);
        }
        for (i, (a, _)) in terms.iter().enumerate() {
            assert_eq!(a.len(), ambient, "exponent length mismatch");
            if terms[i + 1..].iter().any(|(b, _)| b == a) {
                return Err(TropicalError::DuplicateExponent);
            }
        }
        Ok(TropicalPolynomial { ambient, terms })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn terms(&self) -> &[(IntVec, BigRational)] {
        &self.terms
    }

    /// The standard pants polynomial `min(0, q_1, q_2)`.
    pub fn pants() -> Self {
        TropicalPolynomial::new(
            2,
            vec![
                (lattice::int_vec(&[0, 0]), BigRational::zero()),
                (lattice::int_vec(&[1, 0]), BigRational::zero()),
                (lattice::int_vec(&[0, 1]), BigRational::zero()),
            ],
        )
        .unwrap()
    }

    /// Evaluate: the min and the set of indices achieving it.
    pub fn eval(&self, q: &[BigRational]) -> (BigRational, Vec<usize>) {
        let mut best: Option<BigRational> = None;
        let mut argmin = Vec::new();
        for (i, (alpha, a)) in self.terms.iter().enumerate() {
            let v = a + dot_rat(alpha, q);
            match &best {
                None => {
                    best = Some(v);
                    argmin.push(i);
                }
                Some(b) => {
                    if v < *b {
                        best = Some(v);
                        argmin = vec![i];
                    } else if v == *b {
                        argmin.push(i);
                    }
                }
            }
        }
        (best.unwrap(), argmin)
    }

    /// Negate coefficients: translates between min-plus and max-plus data.
    pub fn negated_coefficients(&self) -> Self {
        TropicalPolynomial {
            ambient: self.ambient,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), -c.clone()))
                .collect(),
        }
    }

    /// The corner locus as a weighted polyhedral complex: cells are the loci
    /// where a fixed set of monomials jointly achieves the minimum; facet
    /// weights are lattice lengths of the dual edges.
    pub fn hypersurface(&self) -> Result<WeightedPolyhedralComplex, TropicalError> {
        let n = self.ambient;
        let m = self.terms.len();
        if m == 1 {
            return Err(TropicalError::ConstantPolynomial);
        }
        assert!(m <= 20, "support too large for subset enumeration");
        // Pairwise tie feasibility prunes most subsets up front.
        let mut pair_ok = vec![vec![true; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let ok = self.achiever_polyhedron(&[i, j]).is_feasible();
                pair_ok[i][j] = ok;
                pair_ok[j][i] = ok;
            }
        }
        let mut cells: Vec<(BTreeSet<usize>, RationalPolyhedron, usize)> = Vec::new();
        for mask in 1u32..(1 << m) {
            if (mask.count_ones() as usize) < 2 {
                continue;
            }
            let subset: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            if subset
                .iter()
                .enumerate()
                .any(|(a, &i)| subset[a + 1..].iter().any(|&j| !pair_ok[i][j]))
            {
                continue;
            }
            let poly = self.achiever_polyhedron(&subset);
            let Some(hull) = poly.affine_hull() else {
                continue;
            };
            // Close up the achiever set: monomials tied on the whole cell.
            let s0 = subset[0];
            let mut closure: BTreeSet<usize> = subset.iter().copied().collect();
            for gamma in 0..m {
                if closure.contains(&gamma) {
                    continue;
                }
                let normal: IntVec = self.terms[gamma]
                    .0
                    .iter()
                    .zip(&self.terms[s0].0)
                    .map(|(a, b)| a - b)
                    .collect();
                let rhs = &self.terms[s0].1 - &self.terms[gamma].1;
                if functional_vanishes_on_hull(&hull, &normal, &rhs) {
                    closure.insert(gamma);
                }
            }
            if closure.len() != subset.len() {
                // This cell is produced by its closure's own iteration.
                continue;
            }
            let dim = n - int_rank(&hull.iter().map(|c| c.normal.clone()).collect::<Vec<_>>());
            cells.push((closure, poly, dim));
        }
        let top = n.saturating_sub(1);
        let mut out = Vec::new();
        for (achievers, poly, dim) in cells {
            let weight = if dim == top {
                self.dual_edge_length(&achievers)
            } else {
                1
            };
            out.push(WeightedCell {
                polyhedron: poly,
                dim,
                weight,
            });
        }
        Ok(WeightedPolyhedralComplex::new(n, out))
    }

    /// `{ q : terms in subset tie and are <= all others }`.
    fn achiever_polyhedron(&self, subset: &[usize]) -> RationalPolyhedron {
        let n = self.ambient;
        let s0 = subset[0];
        let (alpha0, a0) = &self.terms[s0];
        let mut eqs = Vec::new();
        let mut ineqs = Vec::new();
        for (i, (alpha, a)) in self.terms.iter().enumerate() {
            if i == s0 {
                continue;
            }
            // a0 + <alpha0, q> (=|<=) a + <alpha, q>
            let normal: IntVec = alpha.iter().zip(alpha0).map(|(x, y)| x - y).collect();
            let rhs = a0 - a;
            let c = LinearConstraint::new(normal, rhs).unwrap();
            if subset.contains(&i) {
                eqs.push(c);
            } else {
                ineqs.push(c);
            }
        }
        RationalPolyhedron::new(n, ineqs, eqs)
    }

    /// Lattice length of the dual edge spanned by a collinear achiever set.
    fn dual_edge_length(&self, achievers: &BTreeSet<usize>) -> u64 {
        let idx: Vec<usize> = achievers.iter().copied().collect();
        let base = &self.terms[idx[0]].0;
        let dir: IntVec = self.terms[idx[1]]
            .0
            .iter()
            .zip(base)
            .map(|(a, b)| a - b)
            .collect();
        let prim = primitive(&dir);
        let k = prim.iter().position(|x| !x.is_zero()).unwrap();
        let mut tmin = BigInt::zero();
        let mut tmax = BigInt::zero();
        for &i in &idx {
            let diff = &self.terms[i].0[k] - &base[k];
            let t = diff / &prim[k];
            if t < tmin {
                tmin = t.clone();
            }
            if t > tmax {
                tmax = t;
            }
        }
        let len = tmax - tmin;
        u64::try_from(len.magnitude().to_u64_digits().first().copied().unwrap_or(0)).unwrap()
    }
}

/// A fan given by its rays (pairwise distinct primitive vectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rays: Vec<IntVec>,
}

impl Fan {
    pub fn new(rays: Vec<IntVec>) -> Result<Self, TropicalError> {
        let prim: Vec<IntVec> = rays.iter().map(|r| primitive(r)).collect();
        for (i, r) in prim.iter().enumerate() {
            if prim[i + 1..].contains(r) {
                return Err(TropicalError::DuplicateRay);
            }
        }
        Ok(Fan { rays: prim })
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }
}

/// A bounded edge between two vertices, oriented so `to - from` is a positive
/// multiple of `direction`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedEdge {
    pub from: usize,
    pub to: usize,
    pub direction: IntVec,
    pub weight: u64,
}

/// A semi-infinite edge from a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub base: usize,
    pub direction: IntVec,
    pub weight: u64,
}

/// Reference to an edge of either kind, used in paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeRef {
    Bounded(usize),
    Ray(usize),
}

/// An embedded tropical curve: a connected graph with rational vertex
/// positions, primitive integer edge directions and positive weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalCurve {
    ambient: usize,
    vertices: Vec<Vec<BigRational>>,
    edges: Vec<BoundedEdge>,
    rays: Vec<Ray>,
}

/// Verdict with the list of offending vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveVerdict {
    pub ok: bool,
    pub offenders: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WellSpacedVerdict {
    WellSpaced,
    NotWellSpaced,
    NotApplicable,
}

/// Well-spacedness report: the verdict plus the exit distances that decided it.
#[derive(Debug, Clone)]
pub struct WellSpacedReport {
    pub verdict: WellSpacedVerdict,
    /// `(vertex, minimal affine distance from the cycle)` per exit point.
    pub exit_distances: Vec<(usize, BigRational)>,
}

/// An affine hyperplane `{ q : <q, normal> = offset }` with integral normal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: IntVec,
    pub offset: BigRational,
}

impl TropicalCurve {
    pub fn new(
        ambient: usize,
        vertices: Vec<Vec<BigRational>>,
        edges: Vec<BoundedEdge>,
        rays: Vec<Ray>,
    ) -> Result<Self, TropicalError> {
        for v in &vertices {
            if v.len() != ambient {
                return Err(TropicalError::BadCurve("vertex length mismatch".into()));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if e.from >= vertices.len() || e.to >= vertices.len() || e.from == e.to {
                return Err(TropicalError::BadCurve(format!("edge {i} endpoints")));
            }
            if e.weight == 0 {
                return Err(TropicalError::BadCurve(format!("edge {i} weight zero")));
            }
            if e.direction.iter().all(|x| x.is_zero()) || content(&e.direction) != BigInt::one() {
                return Err(TropicalError::BadCurve(format!(
                    "edge {i} direction must be primitive"
                )));
            }
            // to - from must be a positive rational multiple of direction.
            let diff: Vec<BigRational> = vertices[e.to]
                .iter()
                .zip(&vertices[e.from])
                .map(|(a, b)| a - b)
                .collect();
            let t = edge_stretch(&diff, &e.direction).ok_or_else(|| {
                TropicalError::BadCurve(format!("edge {i} not parallel to its direction"))
            })?;
            if !t.is_positive() {
                return Err(TropicalError::BadCurve(format!(
                    "edge {i} direction points the wrong way"
                )));
            }
        }
        for (i, r) in rays.iter().enumerate() {
            if r.base >= vertices.len() {
                return Err(TropicalError::BadCurve(format!("ray {i} base")));
            }
            if r.weight == 0 {
                return Err(TropicalError::BadCurve(format!("ray {i} weight zero")));
            }
            if r.direction.iter().all(|x| x.is_zero()) || content(&r.direction) != BigInt::one() {
                return Err(TropicalError::BadCurve(format!(
                    "ray {i} direction must be primitive"
                )));
            }
        }
        let curve = TropicalCurve {
            ambient,
            vertices,
            edges,
            rays,
        };
        if !curve.is_connected() {
            return Err(TropicalError::Disconnected);
        }
        Ok(curve)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[BoundedEdge] {
        &self.edges
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for e in &self.edges {
                for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        queue.push_back(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Outgoing `(direction, weight)` pairs at a vertex.
    pub fn star(&self, v: usize) -> Vec<(IntVec, u64)> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.from == v {
                out.push((e.direction.clone(), e.weight));
            }
            if e.to == v {
                out.push((e.direction.iter().map(|x| -x.clone()).collect(), e.weight));
            }
        }
        for r in &self.rays {
            if r.base == v {
                out.push((r.direction.clone(), r.weight));
            }
        }
        out
    }

    /// Weighted outgoing directions sum to zero at every vertex.
    pub fn is_balanced(&self) -> CurveVerdict {
        let mut offenders = Vec::new();
        for v in 0..self.vertices.len() {
            let mut sum = vec![BigInt::zero(); self.ambient];
            for (dir, w) in self.star(v) {
                let wgt = BigInt::from(w);
                for (s, d) in sum.iter_mut().zip(&dir) {
                    *s += d * &wgt;
                }
            }
            if sum.iter().any(|x| !x.is_zero()) {
                offenders.push(v);
            }
        }
        CurveVerdict {
            ok: offenders.is_empty(),
            offenders,
        }
    }

    /// Every vertex looks like the standard pants: trivalent, weight one, the
    /// three directions sum to zero and any two of them extend to a basis of
    /// the ambient lattice.
    pub fn is_smooth(&self) -> CurveVerdict {
        let mut offenders = Vec::new();
        for v in 0..self.vertices.len() {
            let star = self.star(v);
            let ok = star.len() == 3 && star.iter().all(|(_, w)| *w == 1) && {
                let mut sum = vec![BigInt::zero(); self.ambient];
                for (dir, _) in &star {
                    for (s, d) in sum.iter_mut().zip(dir) {
                        *s += d;
                    }
                }
                sum.iter().all(|x| x.is_zero()) && pair_is_primitive(&star[0].0, &star[1].0)
            };
            if !ok {
                offenders.push(v);
            }
        }
        CurveVerdict {
            ok: offenders.is_empty(),
            offenders,
        }
    }

    /// First Betti number of the underlying graph; rays are not cycle edges.
    pub fn genus(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Every ray points in the direction of a fan ray.
    pub fn adapted_to_fan(&self, fan: &Fan) -> bool {
        self.rays
            .iter()
            .all(|r| fan.rays().contains(&primitive(&r.direction)))
    }

    /// Affine length of one bounded edge: the rational stretch factor of its
    /// primitive direction.
    pub fn edge_affine_length(&self, e: usize) -> BigRational {
        let edge = &self.edges[e];
        let diff: Vec<BigRational> = self.vertices[edge.to]
            .iter()
            .zip(&self.vertices[edge.from])
            .map(|(a, b)| a - b)
            .collect();
        edge_stretch(&diff, &edge.direction).expect("validated edge")
    }

    /// Total affine length of a connected path of bounded edges.
    pub fn affine_length(&self, path: &[EdgeRef]) -> Result<BigRational, TropicalError> {
        let mut total = BigRational::zero();
        let mut frontier: Option<BTreeSet<usize>> = None;
        for step in path {
            let idx = match step {
                EdgeRef::Ray(_) => return Err(TropicalError::UnboundedEdgeInPath),
                EdgeRef::Bounded(i) => *i,
            };
            let e = &self.edges[idx];
            let ends: BTreeSet<usize> = [e.from, e.to].into_iter().collect();
            frontier = Some(match frontier {
                None => ends,
                Some(prev) => {
                    let mut next = BTreeSet::new();
                    if prev.contains(&e.from) {
                        next.insert(e.to);
                    }
                    if prev.contains(&e.to) {
                        next.insert(e.from);
                    }
                    if next.is_empty() {
                        return Err(TropicalError::DisconnectedPath);
                    }
                    next
                }
            });
            total += self.edge_affine_length(idx);
        }
        Ok(total)
    }

    /// Vertex and edge sets of the unique cycle of a genus-one curve.
    fn unique_cycle(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let n = self.vertices.len();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut back: Option<(usize, usize, usize)> = None; // (edge, u, v)
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut used_edges: BTreeSet<usize> = BTreeSet::new();
        while let Some(v) = stack.pop() {
            for (i, e) in self.edges.iter().enumerate() {
                if used_edges.contains(&i) {
                    continue;
                }
                for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                    if a != v {
                        continue;
                    }
                    used_edges.insert(i);
                    if seen[b] {
                        if back.is_none() {
                            back = Some((i, v, b));
                        }
                    } else {
                        seen[b] = true;
                        parent[b] = Some((i, v));
                        stack.push(b);
                    }
                    break;
                }
            }
        }
        let (be, u, v) = back?;
        let root_path = |mut x: usize| -> Vec<(usize, Option<usize>)> {
            let mut out = vec![(x, None)];
            while let Some((e, p)) = parent[x] {
                out.push((p, Some(e)));
                x = p;
            }
            out
        };
        let path_u = root_path(u);
        let path_v = root_path(v);
        let pos_u: BTreeMap<usize, usize> =
            path_u.iter().enumerate().map(|(i, (x, _))| (*x, i)).collect();
        let (lca_pos_v, lca) = path_v
            .iter()
            .enumerate()
            .find(|(_, (x, _))| pos_u.contains_key(x))
            .map(|(i, (x, _))| (i, *x))?;
        let lca_pos_u = pos_u[&lca];
        let mut cycle_vertices: Vec<usize> = path_u[..=lca_pos_u].iter().map(|(x, _)| *x).collect();
        for (x, _) in path_v[..lca_pos_v].iter().rev() {
            cycle_vertices.push(*x);
        }
        let mut cycle_edges = vec![be];
        for (_, e) in &path_u[1..=lca_pos_u] {
            cycle_edges.push(e.unwrap());
        }
        for (i, (_, _)) in path_v[..lca_pos_v].iter().enumerate() {
            cycle_edges.push(path_v[i + 1].1.unwrap());
        }
        cycle_edges.sort_unstable();
        cycle_edges.dedup();
        Some((cycle_vertices, cycle_edges))
    }

    /// Speyer's criterion for a genus-one curve whose cycle lies in the
    /// hyperplane `h`: the minimal affine distance from the cycle to a point
    /// where its component of the hyperplane slice meets an edge leaving the
    /// hyperplane must be attained at least twice.
    pub fn well_spaced(&self, h: &Hyperplane) -> Result<WellSpacedReport, TropicalError> {
        if self.genus() != 1 {
            return Err(TropicalError::GenusNotOne);
        }
        let (cycle_vertices, _) = self.unique_cycle().ok_or(TropicalError::GenusNotOne)?;
        let on_h = |v: usize| -> bool { dot_rat(&h.normal, &self.vertices[v]) == h.offset };
        if !cycle_vertices.iter().all(|&v| on_h(v)) {
            return Ok(WellSpacedReport {
                verdict: WellSpacedVerdict::NotApplicable,
                exit_distances: Vec::new(),
            });
        }
        // Component of the hyperplane slice containing the cycle: only edges
        // entirely inside the hyperplane survive.
        let in_h_edge = |e: &BoundedEdge| -> bool { on_h(e.from) && on_h(e.to) };
        let mut comp: BTreeSet<usize> = cycle_vertices.iter().copied().collect();
        let mut queue: VecDeque<usize> = cycle_vertices.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            for e in &self.edges {
                if !in_h_edge(e) {
                    continue;
                }
                for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                    if a == v && !comp.contains(&b) {
                        comp.insert(b);
                        queue.push_back(b);
                    }
                }
            }
        }
        // Exit points: component vertices with an incident edge or ray
        // leaving the hyperplane.
        let mut exits: BTreeSet<usize> = BTreeSet::new();
        for e in &self.edges {
            for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                if comp.contains(&a) && !on_h(b) {
                    exits.insert(a);
                }
            }
        }
        for r in &self.rays {
            if comp.contains(&r.base) && !dot(&h.normal, &r.direction).is_zero() {
                exits.insert(r.base);
            }
        }
        // Multi-source Dijkstra from the cycle inside the component, exact
        // rational weights, ties broken by edge index.
        let mut dist: BTreeMap<usize, BigRational> = BTreeMap::new();
        for &s in &cycle_vertices {
            dist.insert(s, BigRational::zero());
        }
        let mut settled: BTreeSet<usize> = BTreeSet::new();
        while settled.len() < comp.len() {
            let next = dist
                .iter()
                .filter(|(v, _)| !settled.contains(v))
                .min_by(|(va, da), (vb, db)| da.cmp(db).then(va.cmp(vb)))
                .map(|(v, d)| (*v, d.clone()));
            let Some((v, d)) = next else { break };
            settled.insert(v);
            let mut incident: Vec<(usize, &BoundedEdge)> = self
                .edges
                .iter()
                .enumerate()
                .filter(|(_, e)| in_h_edge(e) && (e.from == v || e.to == v))
                .collect();
            incident.sort_by_key(|(i, _)| *i);
            for (i, e) in incident {
                let w = if e.from == v { e.to } else { e.from };
                if !comp.contains(&w) {
                    continue;
                }
                let nd = &d + self.edge_affine_length(i);
                let better = match dist.get(&w) {
                    None => true,
                    Some(old) => nd < *old,
                };
                if better {
                    dist.insert(w, nd);
                }
            }
        }
        let exit_distances: Vec<(usize, BigRational)> = exits
            .iter()
            .map(|&v| (v, dist.get(&v).cloned().expect("exit lies in component")))
            .collect();
        let verdict = match exit_distances.len() {
            0 => WellSpacedVerdict::WellSpaced,
            1 => WellSpacedVerdict::NotWellSpaced,
            _ => {
                let min = exit_distances.iter().map(|(_, d)| d).min().unwrap();
                let hits = exit_distances.iter().filter(|(_, d)| d == min).count();
                if hits >= 2 {
                    WellSpacedVerdict::WellSpaced
                } else {
                    WellSpacedVerdict::NotWellSpaced
                }
            }
        };
        Ok(WellSpacedReport {
            verdict,
            exit_distances,
        })
    }

    /// Global sections of the deformation sheaf and the graph genus.
    ///
    /// Variables: one ambient displacement per vertex plus one normal
    /// displacement per ray end; equations force equal normal components
    /// across every edge.
    pub fn deformation_ranks(&self) -> (usize, usize) {
        let n = self.ambient;
        let nv = self.vertices.len();
        let ray_basis: Vec<Vec<IntVec>> = self
            .rays
            .iter()
            .map(|r| integer_kernel(&[r.direction.clone()], n))
            .collect();
        let mut offsets = Vec::new();
        let mut total = nv * n;
        for basis in &ray_basis {
            offsets.push(total);
            total += basis.len();
        }
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for e in &self.edges {
            // Q_e (delta_from - delta_to) = 0 with Q_e rows spanning dir^perp.
            for phi in integer_kernel(&[e.direction.clone()], n) {
                let mut row = vec![BigRational::zero(); total];
                for (k, c) in phi.iter().enumerate() {
                    row[e.from * n + k] += BigRational::from(c.clone());
                    row[e.to * n + k] -= BigRational::from(c.clone());
                }
                rows.push(row);
            }
        }
        for (ri, r) in self.rays.iter().enumerate() {
            let basis = &ray_basis[ri];
            for phi in integer_kernel(&[r.direction.clone()], n) {
                let mut row = vec![BigRational::zero(); total];
                for (k, c) in phi.iter().enumerate() {
                    row[r.base * n + k] += BigRational::from(c.clone());
                }
                for (j, b) in basis.iter().enumerate() {
                    let coeff = dot(&phi, b);
                    row[offsets[ri] + j] -= BigRational::from(coeff);
                }
                rows.push(row);
            }
        }
        let rank = rat_rank(&rows);
        (total - rank, self.genus())
    }

    /// Apply an integral affine change of coordinates `q -> u q + shift`.
    pub fn transform(&self, u: &[IntVec], shift: &[BigRational]) -> Self {
        let n = self.ambient;
        let apply_pt = |p: &[BigRational]| -> Vec<BigRational> {
            (0..n).map(|i| dot_rat(&u[i], p) + &shift[i]).collect()
        };
        let apply_dir = |d: &IntVec| -> IntVec { u.iter().map(|row| dot(row, d)).collect() };
        TropicalCurve {
            ambient: n,
            vertices: self.vertices.iter().map(|v| apply_pt(v)).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| BoundedEdge {
                    from: e.from,
                    to: e.to,
                    direction: apply_dir(&e.direction),
                    weight: e.weight,
                })
                .collect(),
            rays: self
                .rays
                .iter()
                .map(|r| Ray {
                    base: r.base,
                    direction: apply_dir(&r.direction),
                    weight: r.weight,
                })
                .collect(),
        }
    }

    /// Render the curve as a weighted polyhedral complex (vertices, segments
    /// and rays as cells).
    pub fn to_complex(&self) -> WeightedPolyhedralComplex {
        let n = self.ambient;
        let mut cells = Vec::new();
        for v in &self.vertices {
            let eqs: Vec<LinearConstraint> = (0..n)
                .map(|i| {
                    let mut normal = vec![BigInt::zero(); n];
                    normal[i] = BigInt::one();
                    LinearConstraint::new(normal, v[i].clone()).unwrap()
                })
                .collect();
            cells.push(WeightedCell {
                polyhedron: RationalPolyhedron::new(n, Vec::new(), eqs),
                dim: 0,
                weight: 1,
            });
        }
        let line_cell =
            |base: &[BigRational], dir: &IntVec| -> (Vec<LinearConstraint>, LinearConstraint) {
                let eqs: Vec<LinearConstraint> = integer_kernel(&[dir.clone()], n)
                    .into_iter()
                    .map(|phi| {
                        let rhs = dot_rat(&phi, base);
                        LinearConstraint::new(phi, rhs).unwrap()
                    })
                    .collect();
                let lower = LinearConstraint::new(dir.clone(), dot_rat(dir, base)).unwrap();
                (eqs, lower)
            };
        for e in &self.edges {
            let (eqs, lower) = line_cell(&self.vertices[e.from], &e.direction);
            let neg_dir: IntVec = e.direction.iter().map(|x| -x.clone()).collect();
            let upper =
                LinearConstraint::new(neg_dir.clone(), dot_rat(&neg_dir, &self.vertices[e.to]))
                    .unwrap();
            cells.push(WeightedCell {
                polyhedron: RationalPolyhedron::new(n, vec![lower, upper], eqs),
                dim: 1,
                weight: e.weight,
            });
        }
        for r in &self.rays {
            let (eqs, lower) = line_cell(&self.vertices[r.base], &r.direction);
            cells.push(WeightedCell {
                polyhedron: RationalPolyhedron::new(n, vec![lower], eqs),
                dim: 1,
                weight: r.weight,
            });
        }
        WeightedPolyhedralComplex::new(n, cells)
    }
}

/// Stretch factor `t` with `diff = t * dir`, when all components agree.
fn edge_stretch(diff: &[BigRational], dir: &IntVec) -> Option<BigRational> {
    let k = dir.iter().position(|x| !x.is_zero())?;
    let t = &diff[k] / BigRational::from(dir[k].clone());
    for (d, x) in diff.iter().zip(dir) {
        if *d != &t * BigRational::from(x.clone()) {
            return None;
        }
    }
    Some(t)
}

/// Whether two integer vectors span a saturated rank-2 sublattice: the gcd of
/// all 2x2 minors is 1.
pub fn pair_is_primitive(a: &IntVec, b: &IntVec) -> bool {
    let n = a.len();
    let mut g = BigInt::zero();
    for i in 0..n {
        for j in i + 1..n {
            let minor = &a[i] * &b[j] - &a[j] * &b[i];
            g = num_integer::Integer::gcd(&g, &minor);
        }
    }
    g.is_one()
}

/// Extract a tropical curve from a one-dimensional weighted complex. Fails
/// when a cell is a full line (no vertex to anchor the graph).
pub fn curve_from_complex(
    complex: &WeightedPolyhedralComplex,
) -> Result<TropicalCurve, TropicalError> {
    use crate::simplex::{maximize, LpOutcome};
    let n = complex.ambient;
    let mut vertices: Vec<Vec<BigRational>> = Vec::new();
    let mut edges = Vec::new();
    let mut rays = Vec::new();
    fn vertex_index(pt: Vec<BigRational>, vertices: &mut Vec<Vec<BigRational>>) -> usize {
        match vertices.iter().position(|v| *v == pt) {
            Some(i) => i,
            None => {
                vertices.push(pt);
                vertices.len() - 1
            }
        }
    }
    for cell in &complex.cells {
        if cell.dim != 1 {
            continue;
        }
        let tangent = cell
            .polyhedron
            .tangent_lattice()
            .ok_or_else(|| TropicalError::AmbiguousGraph("empty cell".into()))?;
        if tangent.len() != 1 {
            return Err(TropicalError::AmbiguousGraph("cell is not a line".into()));
        }
        let dir = primitive(&tangent[0]);
        let mut cs = Vec::new();
        for c in cell.polyhedron.inequalities() {
            cs.push(crate::simplex::Constraint {
                coeffs: c.normal.iter().map(|x| BigRational::from(x.clone())).collect(),
                relation: crate::simplex::Relation::Ge,
                rhs: c.rhs.clone(),
            });
        }
        for c in cell.polyhedron.equalities() {
            cs.push(crate::simplex::Constraint {
                coeffs: c.normal.iter().map(|x| BigRational::from(x.clone())).collect(),
                relation: crate::simplex::Relation::Eq,
                rhs: c.rhs.clone(),
            });
        }
        let obj: Vec<BigRational> = dir.iter().map(|x| BigRational::from(x.clone())).collect();
        let neg_obj: Vec<BigRational> = obj.iter().map(|x| -x.clone()).collect();
        let upper = maximize(n, &obj, &cs);
        let lower = maximize(n, &neg_obj, &cs);
        match (lower, upper) {
            (LpOutcome::Optimal { point: a, .. }, LpOutcome::Optimal { point: b, .. }) => {
                let from = vertex_index(a, &mut vertices);
                let to = vertex_index(b, &mut vertices);
                if from == to {
                    return Err(TropicalError::AmbiguousGraph(
                        "degenerate segment cell".into(),
                    ));
                }
                edges.push(BoundedEdge {
                    from,
                    to,
                    direction: dir,
                    weight: cell.weight,
                });
            }
            (LpOutcome::Optimal { point: a, .. }, LpOutcome::Unbounded) => {
                let base = vertex_index(a, &mut vertices);
                rays.push(Ray {
                    base,
                    direction: dir,
                    weight: cell.weight,
                });
            }
            (LpOutcome::Unbounded, LpOutcome::Optimal { point: b, .. }) => {
                let base = vertex_index(b, &mut vertices);
                rays.push(Ray {
                    base,
                    direction: dir.iter().map(|x| -x.clone()).collect(),
                    weight: cell.weight,
                });
            }
            (LpOutcome::Unbounded, LpOutcome::Unbounded) => {
                return Err(TropicalError::AmbiguousGraph(
                    "cell is a full line; no vertex anchors the graph".into(),
                ));
            }
            _ => return Err(TropicalError::AmbiguousGraph("empty cell".into())),
        }
    }
    TropicalCurve::new(n, vertices, edges, rays)
}

/// Negate all coordinates of a complex (the min-plus <-> max-plus flip).
pub fn negate_complex(complex: &WeightedPolyhedralComplex) -> WeightedPolyhedralComplex {
    let cells = complex
        .cells
        .iter()
        .map(|cell| {
            let flip = |cs: &[LinearConstraint]| -> Vec<LinearConstraint> {
                cs.iter()
                    .map(|c| {
                        LinearConstraint::new(
                            c.normal.iter().map(|x| -x.clone()).collect(),
                            c.rhs.clone(),
                        )
                        .unwrap()
                    })
                    .collect()
            };
            WeightedCell {
                polyhedron: RationalPolyhedron::new(
                    complex.ambient,
                    flip(cell.polyhedron.inequalities()),
                    flip(cell.polyhedron.equalities()),
                ),
                dim: cell.dim,
                weight: cell.weight,
            }
        })
        .collect();
    WeightedPolyhedralComplex::new(complex.ambient, cells)
}
