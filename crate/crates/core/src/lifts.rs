//! Combinatorial cohomology of the Lagrangian lift of a smooth tropical
//! curve.
//!
//! Each vertex contributes a pants-times-torus piece, each bounded edge the
//! torus it is glued along; cohomology is read off a two-column Cech double
//! complex whose degree-one data is the lattice model below. End restrictions
//! and the resulting surjectivity/injectivity checks drive the
//! unobstructedness criterion for genus-zero curves.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{
    complete_to_basis, integer_kernel, invert_unimodular, rat_kernel, rat_rank, IntMat,
    IntVec,
};
use crate::tropical::TropicalCurve;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum LiftError {
    #[error("curve is not smooth: offending vertices {0:?}")]
    NotSmooth(Vec<usize>),
    #[error("no such end (ray index {0})")]
    NotAnEnd(usize),
}

/// Coefficient field for rank computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Rational,
    F2,
}

/// Restriction data from one vertex piece into one incident edge torus: an
/// integral matrix from the piece's degree-one basis (two pants classes
/// followed by the torus classes) to the edge lattice basis.
type ResMatrix = IntMat;

#[derive(Debug, Clone)]
struct CechEdge {
    from: usize,
    to: usize,
    res_from: ResMatrix,
    res_to: ResMatrix,
}

#[derive(Debug, Clone)]
struct CechEnd {
    vertex: usize,
    res: ResMatrix,
}

/// The assembled lattice model of the lift.
#[derive(Debug, Clone)]
pub struct LiftModel {
    ambient: usize,
    n_vertices: usize,
    edges: Vec<CechEdge>,
    ends: Vec<CechEnd>,
}

/// Per-vertex data while building the model.
struct VertexFrame {
    /// Ambient covectors: the three boundary-circle classes.
    sigma: [IntVec; 3],
    /// Ambient covectors for the torus factor classes (rows 3..n).
    torus: Vec<IntVec>,
}

/// Build the lattice model of the lift of a smooth curve: adapt each vertex
/// to the standard pants by a unimodular change of coordinates and instantiate
/// the standard restriction template in ambient terms.
pub fn build_lift_model(curve: &TropicalCurve) -> Result<LiftModel, LiftError> {
    let smooth = curve.is_smooth();
    if !smooth.ok {
        return Err(LiftError::NotSmooth(smooth.offenders));
    }
    let n = curve.ambient_dim();
    let nv = curve.vertices().len();

    // Incident outgoing directions per vertex in (edges, rays) order, with
    // the edge/ray identity and orientation.
    #[derive(Clone)]
    enum Slot {
        Edge { index: usize, outgoing_from: bool },
        Ray { index: usize },
    }
    let mut incident: Vec<Vec<(IntVec, Slot)>> = vec![Vec::new(); nv];
    for (i, e) in curve.edges().iter().enumerate() {
        incident[e.from].push((
            e.direction.clone(),
            Slot::Edge { index: i, outgoing_from: true },
        ));
        incident[e.to].push((
            e.direction.iter().map(|x| -x.clone()).collect(),
            Slot::Edge { index: i, outgoing_from: false },
        ));
    }
    for (i, r) in curve.rays().iter().enumerate() {
        incident[r.base].push((r.direction.clone(), Slot::Ray { index: i }));
    }

    let mut frames: Vec<VertexFrame> = Vec::with_capacity(nv);
    for slots in &incident {
        let d1 = &slots[0].0;
        let d2 = &slots[1].0;
        let basis = complete_to_basis(&[d1.clone(), d2.clone()], n);
        let a = invert_unimodular(&basis);
        let r1 = a[0].clone();
        let r2 = a[1].clone();
        let sigma1 = r2.clone();
        let sigma2: IntVec = r1.iter().map(|x| -x.clone()).collect();
        let sigma3: IntVec = r1.iter().zip(&r2).map(|(x, y)| x - y).collect();
        // The three boundary-circle classes sum to zero by construction.
        debug_assert!(sigma1
            .iter()
            .zip(&sigma2)
            .zip(&sigma3)
            .all(|((a, b), c)| (a + b + c).is_zero()));
        frames.push(VertexFrame {
            sigma: [sigma1, sigma2, sigma3],
            torus: a[2..].to_vec(),
        });
    }

    // Restriction matrix for one slot of a vertex: columns are the images of
    // the piece generators (pants1, pants2, torus...) in the fixed basis of
    // the edge's perpendicular lattice.
    let res_matrix = |v: usize, slot_idx: usize, edge_dir: &IntVec| -> ResMatrix {
        let frame = &frames[v];
        let kb = integer_kernel(&[edge_dir.clone()], n);
        let zero = vec![BigInt::zero(); n];
        let neg = |x: &IntVec| -> IntVec { x.iter().map(|y| -y.clone()).collect() };
        let images: Vec<IntVec> = {
            let (g1, g2) = match slot_idx {
                0 => (frame.sigma[0].clone(), zero.clone()),
                1 => (zero.clone(), frame.sigma[1].clone()),
                2 => (neg(&frame.sigma[2]), neg(&frame.sigma[2])),
                _ => unreachable!("trivalent"),
            };
            let mut v = vec![g1, g2];
            v.extend(frame.torus.iter().cloned());
            v
        };
        // Solve K x = image for each generator; smoothness guarantees
        // integral coordinates.
        let rows_k = kb.len();
        let a: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                kb.iter()
                    .map(|col| BigRational::from(col[r].clone()))
                    .collect()
            })
            .collect();
        let mut m: ResMatrix = vec![vec![BigInt::zero(); n]; rows_k];
        for (c, img) in images.iter().enumerate() {
            let b: Vec<BigRational> = img.iter().map(|x| BigRational::from(x.clone())).collect();
            let x = crate::lattice::rat_solve(&a, &b).expect("image lies in the edge lattice");
            for (r, xi) in x.iter().enumerate() {
                assert!(xi.is_integer(), "restriction is integral");
                m[r][c] = xi.to_integer();
            }
        }
        m
    };

    let mut edges: Vec<Option<CechEdge>> = vec![None; curve.edges().len()];
    let mut ends: Vec<Option<CechEnd>> = vec![None; curve.rays().len()];
    for (v, slots) in incident.iter().enumerate() {
        for (slot_idx, (dir, slot)) in slots.iter().enumerate() {
            match slot {
                Slot::Edge { index, outgoing_from } => {
                    // Use the global edge direction for the shared basis.
                    let global_dir = curve.edges()[*index].direction.clone();
                    let m = res_matrix(v, slot_idx, &global_dir);
                    let entry = edges[*index].get_or_insert(CechEdge {
                        from: curve.edges()[*index].from,
                        to: curve.edges()[*index].to,
                        res_from: Vec::new(),
                        res_to: Vec::new(),
                    });
                    if *outgoing_from {
                        entry.res_from = m;
                    } else {
                        entry.res_to = m;
                    }
                    let _ = dir;
                }
                Slot::Ray { index } => {
                    let m = res_matrix(v, slot_idx, &curve.rays()[*index].direction);
                    ends[*index] = Some(CechEnd { vertex: v, res: m });
                }
            }
        }
    }
    Ok(LiftModel {
        ambient: n,
        n_vertices: nv,
        edges: edges.into_iter().map(|e| e.unwrap()).collect(),
        ends: ends.into_iter().map(|e| e.unwrap()).collect(),
    })
}

/// Ordered q-subsets of `0..n`.
fn subsets(n: usize, q: usize) -> Vec<Vec<usize>> {
    if q > n {
        return Vec::new();
    }
    if q == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..q).collect();
    loop {
        out.push(cur.clone());
        // Next combination in lexicographic order.
        let mut i = q;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - q {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..q {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Degree-q basis of a vertex piece: q-subsets of the n generators that do
/// not contain both pants classes (indices 0 and 1).
fn piece_basis(n: usize, q: usize) -> Vec<Vec<usize>> {
    subsets(n, q)
        .into_iter()
        .filter(|s| !(s.contains(&0) && s.contains(&1)))
        .collect()
}

/// Minor determinant of an integer matrix over given rows and columns.
fn minor_det(m: &ResMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    let k = rows.len();
    if k == 0 {
        return BigInt::one();
    }
    if k == 1 {
        return m[rows[0]][cols[0]].clone();
    }
    let mut acc = BigInt::zero();
    for (i, &r) in rows.iter().enumerate() {
        if m[r][cols[0]].is_zero() {
            continue;
        }
        let rest: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, &x)| x)
            .collect();
        let sub = minor_det(m, &rest, &cols[1..]);
        let signed = if i % 2 == 0 { sub } else { -sub };
        acc += &m[r][cols[0]] * signed;
    }
    acc
}

/// Rank of an integer matrix over the chosen coefficients.
fn rank_over(matrix: &[Vec<BigInt>], coeffs: Coefficients) -> usize {
    match coeffs {
        Coefficients::Rational => {
            let rows: Vec<Vec<BigRational>> = matrix
                .iter()
                .map(|r| r.iter().map(|x| BigRational::from(x.clone())).collect())
                .collect();
            rat_rank(&rows)
        }
        Coefficients::F2 => {
            let two = BigInt::from(2);
            let mut rows: Vec<Vec<u8>> = matrix
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| {
                            let m = ((x % &two) + &two) % &two;
                            u8::from(!m.is_zero())
                        })
                        .collect()
                })
                .collect();
            let cols = rows.first().map_or(0, Vec::len);
            let mut rank = 0;
            for c in 0..cols {
                let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] == 1) else {
                    continue;
                };
                rows.swap(rank, p);
                for r in 0..rows.len() {
                    if r != rank && rows[r][c] == 1 {
                        for j in 0..cols {
                            rows[r][j] ^= rows[rank][j];
                        }
                    }
                }
                rank += 1;
            }
            rank
        }
    }
}

impl LiftModel {
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn num_ends(&self) -> usize {
        self.ends.len()
    }

    /// Whether the underlying graph is a tree (the hypotheses of the
    /// end-restriction statements are only established for trees).
    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n_vertices
    }

    /// The degree-q difference map of the two-column Cech complex.
    fn cech_matrix(&self, q: usize) -> Vec<Vec<BigInt>> {
        let n = self.ambient;
        let col_basis = piece_basis(n, q);
        let row_basis = subsets(n - 1, q);
        let cols = self.n_vertices * col_basis.len();
        let rows = self.edges.len() * row_basis.len();
        let mut m = vec![vec![BigInt::zero(); cols]; rows];
        for (ei, edge) in self.edges.iter().enumerate() {
            for (ri, rset) in row_basis.iter().enumerate() {
                let row = ei * row_basis.len() + ri;
                for (ci, cset) in col_basis.iter().enumerate() {
                    let from_col = edge.from * col_basis.len() + ci;
                    let to_col = edge.to * col_basis.len() + ci;
                    let d_from = minor_det(&edge.res_from, rset, cset);
                    let d_to = minor_det(&edge.res_to, rset, cset);
                    m[row][from_col] += d_from;
                    m[row][to_col] -= d_to;
                }
            }
        }
        m
    }

    /// Betti numbers `b_0 .. b_n` of the lift.
    pub fn cohomology(&self, coeffs: Coefficients) -> Vec<usize> {
        let n = self.ambient;
        let mut out = Vec::with_capacity(n + 1);
        let mut prev_coker = 0usize;
        for q in 0..=n {
            let m = self.cech_matrix(q);
            let cols = self.n_vertices * piece_basis(n, q).len();
            let rows = self.edges.len() * subsets(n - 1, q).len();
            let rank = rank_over(&m, coeffs);
            let b = (cols - rank) + prev_coker;
            prev_coker = rows - rank;
            out.push(b);
        }
        out
    }

    /// Degree-q basis data of the lift's cohomology over the rationals:
    /// kernel vectors of the degree-q difference map (in piece coordinates)
    /// plus the dimension of the connecting part, which restricts to zero on
    /// every piece.
    fn h_basis(&self, q: usize) -> (Vec<Vec<BigRational>>, usize) {
        let n = self.ambient;
        let m = self.cech_matrix(q);
        let cols = self.n_vertices * piece_basis(n, q).len();
        let rows_mat: Vec<Vec<BigRational>> = m
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from(x.clone())).collect())
            .collect();
        let kernel = rat_kernel(&rows_mat, cols);
        let prev = if q == 0 {
            0
        } else {
            let mp = self.cech_matrix(q - 1);
            let rows_prev = self.edges.len() * subsets(n - 1, q - 1).len();
            rows_prev - rank_over(&mp, Coefficients::Rational)
        };
        (kernel, prev)
    }

    /// The restriction `H^q(L) -> H^q(T_f)` to the end torus of ray `f`, as
    /// an integral matrix: one row per cohomology basis vector, one column
    /// per degree-q wedge of the end lattice basis.
    pub fn end_restriction(&self, f: usize, q: usize) -> Result<Vec<Vec<BigInt>>, LiftError> {
        let end = self.ends.get(f).ok_or(LiftError::NotAnEnd(f))?;
        let n = self.ambient;
        let col_basis = piece_basis(n, q);
        let target_basis = subsets(n - 1, q);
        let (kernel, coker_dim) = self.h_basis(q);
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for vec in &kernel {
            // Component at the end's vertex, pushed through the end matrix.
            let mut img = vec![BigRational::zero(); target_basis.len()];
            for (ci, cset) in col_basis.iter().enumerate() {
                let coeff = &vec[end.vertex * col_basis.len() + ci];
                if coeff.is_zero() {
                    continue;
                }
                for (ti, tset) in target_basis.iter().enumerate() {
                    let d = minor_det(&end.res, tset, cset);
                    img[ti] += coeff * BigRational::from(d);
                }
            }
            rows.push(clear_denominators(&img));
        }
        for _ in 0..coker_dim {
            rows.push(vec![BigInt::zero(); target_basis.len()]);
        }
        Ok(rows)
    }

    /// Rank of the combined degree-q restriction to all ends except `f`.
    fn rank_to_other_ends(&self, f: usize, q: usize) -> Result<(usize, usize), LiftError> {
        if f >= self.ends.len() {
            return Err(LiftError::NotAnEnd(f));
        }
        let n = self.ambient;
        let (kernel, coker_dim) = self.h_basis(q);
        let h_dim = kernel.len() + coker_dim;
        let col_basis = piece_basis(n, q);
        let target_basis = subsets(n - 1, q);
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for vec in &kernel {
            let mut row = Vec::new();
            for (g, end) in self.ends.iter().enumerate() {
                if g == f {
                    continue;
                }
                for tset in &target_basis {
                    let mut entry = BigRational::zero();
                    for (ci, cset) in col_basis.iter().enumerate() {
                        let coeff = &vec[end.vertex * col_basis.len() + ci];
                        if coeff.is_zero() {
                            continue;
                        }
                        entry += coeff * BigRational::from(minor_det(&end.res, tset, cset));
                    }
                    row.push(entry);
                }
            }
            rows.push(row);
        }
        let rank = rat_rank(&rows);
        Ok((rank, h_dim))
    }

    /// The degree-one restriction to end `f` surjects onto the end torus.
    pub fn check_h1_surjection(&self, f: usize) -> Result<bool, LiftError> {
        let m = self.end_restriction(f, 1)?;
        Ok(rank_over(&m, Coefficients::Rational) == self.ambient - 1)
    }

    /// The combined degree-two restriction to all ends except `f` is
    /// injective.
    pub fn check_h2_injection(&self, f: usize) -> Result<bool, LiftError> {
        let (rank, h_dim) = self.rank_to_other_ends(f, 2)?;
        Ok(rank == h_dim)
    }

    /// The boundary-unobstructedness criterion with the ends other than `f`
    /// as the distinguished boundary piece: by the long exact sequence this
    /// is the injectivity of the degree-two restriction away from `f`.
    pub fn unobstructedness_criterion(&self, f: usize) -> Result<UnobstructednessVerdict, LiftError> {
        let holds = self.check_h2_injection(f)?;
        Ok(UnobstructednessVerdict {
            criterion_holds: holds,
            tree_hypotheses_verified: self.is_tree(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnobstructednessVerdict {
    pub criterion_holds: bool,
    /// False when the curve has genus > 0: the restriction statements this
    /// criterion relies on are only established for trees.
    pub tree_hypotheses_verified: bool,
}

fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    v.iter()
        .map(|x| (x * BigRational::from(lcm.clone())).to_integer())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int_vec;
    use crate::ratio;
    use crate::tropical::{BoundedEdge, Ray};

    fn pants_curve() -> TropicalCurve {
        TropicalCurve::new(
            2,
            vec![vec![ratio(0), ratio(0)]],
            vec![],
            vec![
                Ray { base: 0, direction: int_vec(&[-1, 0]), weight: 1 },
                Ray { base: 0, direction: int_vec(&[0, -1]), weight: 1 },
                Ray { base: 0, direction: int_vec(&[1, 1]), weight: 1 },
            ],
        )
        .unwrap()
    }

    fn line_vc() -> TropicalCurve {
        TropicalCurve::new(
            3,
            vec![
                vec![ratio(0), ratio(0), ratio(0)],
                vec![ratio(-2), ratio(-2), ratio(0)],
            ],
            vec![BoundedEdge { from: 1, to: 0, direction: int_vec(&[1, 1, 0]), weight: 1 }],
            vec![
                Ray { base: 0, direction: int_vec(&[1, 0, 0]), weight: 1 },
                Ray { base: 0, direction: int_vec(&[0, 1, 0]), weight: 1 },
                Ray { base: 1, direction: int_vec(&[0, 0, 1]), weight: 1 },
                Ray { base: 1, direction: int_vec(&[-1, -1, -1]), weight: 1 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn pants_model_and_betti() {
        let m = build_lift_model(&pants_curve()).unwrap();
        assert_eq!(m.cohomology(Coefficients::Rational), vec![1, 2, 0]);
        assert_eq!(m.cohomology(Coefficients::F2), vec![1, 2, 0]);
        // Standard template: each end restriction in degree 1 has rank 1 and
        // the matrices on pants classes are (1,0), (0,1), (-1,-1) up to the
        // change of basis, so the ranks are the tested contract.
        for f in 0..3 {
            let r = m.end_restriction(f, 1).unwrap();
            assert_eq!(rank_over(&r, Coefficients::Rational), 1);
            assert!(m.check_h1_surjection(f).unwrap());
            // H^2 = 0: injection holds vacuously.
            assert!(m.check_h2_injection(f).unwrap());
            let v = m.unobstructedness_criterion(f).unwrap();
            assert!(v.criterion_holds && v.tree_hypotheses_verified);
        }
        // Degree 0: rank one (connectedness).
        let r0 = m.end_restriction(0, 0).unwrap();
        assert_eq!(rank_over(&r0, Coefficients::Rational), 1);
    }

    #[test]
    fn vertex_in_three_space_has_rank_three_piece() {
        // A single smooth vertex in R^3: the piece is pants x S^1.
        let c = TropicalCurve::new(
            3,
            vec![vec![ratio(0), ratio(0), ratio(0)]],
            vec![],
            vec![
                Ray { base: 0, direction: int_vec(&[1, 0, 0]), weight: 1 },
                Ray { base: 0, direction: int_vec(&[0, 1, 0]), weight: 1 },
                Ray { base: 0, direction: int_vec(&[-1, -1, 0]), weight: 1 },
            ],
        )
        .unwrap();
        let m = build_lift_model(&c).unwrap();
        let b = m.cohomology(Coefficients::Rational);
        assert_eq!(b, vec![1, 3, 2, 0]);
    }

    #[test]
    fn vc_betti_numbers() {
        let m = build_lift_model(&line_vc()).unwrap();
        let b = m.cohomology(Coefficients::Rational);
        assert_eq!(b, vec![1, 4, 3, 0]);
        let chi: i64 = b
            .iter()
            .enumerate()
            .map(|(q, &x)| if q % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum();
        assert_eq!(chi, 0);
    }

    #[test]
    fn vc_end_checks() {
        let m = build_lift_model(&line_vc()).unwrap();
        for f in 0..4 {
            assert!(m.check_h1_surjection(f).unwrap(), "end {f} surjection");
            assert!(m.check_h2_injection(f).unwrap(), "end {f} injection");
            assert!(m.unobstructedness_criterion(f).unwrap().criterion_holds);
        }
        // Degree-2 restriction to a single end has rank 1.
        let r = m.end_restriction(0, 2).unwrap();
        assert_eq!(rank_over(&r, Coefficients::Rational), 1);
    }

    #[test]
    fn not_smooth_rejected() {
        let c = TropicalCurve::new(
            2,
            vec![vec![ratio(0), ratio(0)]],
            vec![],
            vec![
                Ray { base: 0, direction: int_vec(&[1, 0]), weight: 1 },
                Ray { base: 0, direction: int_vec(&[-1, 0]), weight: 1 },
                Ray { base: 0, direction: int_vec(&[0, 1]), weight: 1 },
                Ray { base: 0, direction: int_vec(&[0, -1]), weight: 1 },
            ],
        )
        .unwrap();
        assert!(matches!(build_lift_model(&c), Err(LiftError::NotSmooth(_))));
    }

    #[test]
    fn bad_end_index() {
        let m = build_lift_model(&pants_curve()).unwrap();
        assert_eq!(m.end_restriction(7, 1).err(), Some(LiftError::NotAnEnd(7)));
    }

    #[test]
    fn smooth_genus_one_cycle_accepted_with_warning() {
        // Square cycle with four rays: smooth, genus one. The cohomology
        // machinery still runs; the criterion flags the unverified tree
        // hypotheses.
        let c = TropicalCurve::new(
            2,
            vec![
                vec![ratio(0), ratio(0)],
                vec![ratio(1), ratio(0)],
                vec![ratio(1), ratio(1)],
                vec![ratio(0), ratio(1)],
            ],
            vec![
                BoundedEdge { from: 0, to: 1, direction: int_vec(&[1, 0]), weight: 1 },
                BoundedEdge { from: 1, to: 2, direction: int_vec(&[0, 1]), weight: 1 },
                BoundedEdge { from: 3, to: 2, direction: int_vec(&[1, 0]), weight: 1 },
                BoundedEdge { from: 0, to: 3, direction: int_vec(&[0, 1]), weight: 1 },
            ],
            vec![
                Ray { base: 0, direction: int_vec(&[-1, -1]), weight: 1 },
                Ray { base: 1, direction: int_vec(&[1, -1]), weight: 1 },
                Ray { base: 2, direction: int_vec(&[1, 1]), weight: 1 },
                Ray { base: 3, direction: int_vec(&[-1, 1]), weight: 1 },
            ],
        )
        .unwrap();
        assert!(c.is_smooth().ok);
        assert_eq!(c.genus(), 1);
        let m = build_lift_model(&c).unwrap();
        assert!(!m.is_tree());
        // A cycle of four pants glued along circles is a four-punctured
        // genus-one surface.
        let b = m.cohomology(Coefficients::Rational);
        assert_eq!(b, vec![1, 5, 0]);
        let v = m.unobstructedness_criterion(0).unwrap();
        assert!(!v.tree_hypotheses_verified);
    }

    #[test]
    fn gl_invariance() {
        let u = vec![int_vec(&[1, 2, 0]), int_vec(&[0, 1, 0]), int_vec(&[1, 1, 1])];
        let shift = vec![ratio(3), ratio(-1), ratio(0)];
        let c = line_vc().transform(&u, &shift);
        let m = build_lift_model(&c).unwrap();
        assert_eq!(m.cohomology(Coefficients::Rational), vec![1, 4, 3, 0]);
        for f in 0..4 {
            assert!(m.check_h1_surjection(f).unwrap());
            assert!(m.check_h2_injection(f).unwrap());
        }
    }
}
