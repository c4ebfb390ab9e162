//! Lifting tropical hypersurfaces to the Novikov torus: coefficient lifts,
//! coordinatewise tropicalization, the two-achievers check for points of the
//! zero locus, and constructive Newton lifting of facet points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{dot_rat, IntVec};
use crate::novikov::{Exponent, NovikovError, NovikovSeries, UnitaryElement};
use crate::tropical::TropicalPolynomial;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum RealizationError {
    #[error("the point does not lie on the tropicalization (minimum achieved once)")]
    NotOnTropicalization,
    #[error("more than two monomials achieve the minimum; vertex points are refused")]
    VertexPoint,
    #[error("residual valuation below the working precision; not an approximate zero")]
    NotAZero,
    #[error("initial term is not a simple root")]
    SingularInitialTerm,
    #[error("the leading binomial has no rational root")]
    NoRationalLift,
    #[error("coefficient precision below the declared working precision")]
    PrecisionTooLow,
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}

/// A Laurent polynomial over the Novikov field with truncated coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovikovLaurentPolynomial {
    ambient: usize,
    terms: Vec<(IntVec, NovikovSeries)>,
    e_max: BigRational,
}

impl NovikovLaurentPolynomial {
    /// Every coefficient must be visibly nonzero and known at least to
    /// `O(T^e_max)`.
    pub fn new(
        ambient: usize,
        terms: Vec<(IntVec, NovikovSeries)>,
        e_max: BigRational,
    ) -> Result<Self, RealizationError> {
        for (alpha, c) in &terms {
            assert_eq!(alpha.len(), ambient);
            if c.is_empty() {
                return Err(RealizationError::PrecisionTooLow);
            }
            if *c.precision() < Exponent::Finite(e_max.clone()) {
                return Err(RealizationError::PrecisionTooLow);
            }
        }
        Ok(NovikovLaurentPolynomial {
            ambient,
            terms,
            e_max,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn terms(&self) -> &[(IntVec, NovikovSeries)] {
        &self.terms
    }

    pub fn e_max(&self) -> &BigRational {
        &self.e_max
    }

    /// Coefficientwise valuations as a tropical polynomial.
    pub fn tropicalization(&self) -> TropicalPolynomial {
        let terms = self
            .terms
            .iter()
            .map(|(alpha, c)| {
                let val = match c.valuation() {
                    Exponent::Finite(v) => v,
                    Exponent::Infinity => unreachable!("coefficients are nonzero"),
                };
                (alpha.clone(), val)
            })
            .collect();
        TropicalPolynomial::new(self.ambient, terms).expect("nonempty support")
    }

    /// Substitute an analytic point.
    pub fn eval(&self, z: &AnalyticPoint) -> Result<NovikovSeries, RealizationError> {
        let mut acc = NovikovSeries::zero();
        for (alpha, c) in &self.terms {
            let mut term = c.clone();
            for (zi, a) in z.coordinates().iter().zip(alpha) {
                term = term.mul(&coordinate_power(zi, a)?);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

fn coordinate_power(z: &NovikovSeries, a: &BigInt) -> Result<NovikovSeries, RealizationError> {
    let e = u32::try_from(a.magnitude().to_u64_digits().first().copied().unwrap_or(0))
        .expect("small exponents");
    let p = z.pow(e);
    if a.is_negative() {
        Ok(p.invert()?)
    } else {
        Ok(p)
    }
}

/// A point of the Novikov torus: nonzero coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyticPoint {
    coords: Vec<NovikovSeries>,
}

impl AnalyticPoint {
    pub fn new(coords: Vec<NovikovSeries>) -> Result<Self, RealizationError> {
        if coords.iter().any(|c| c.is_empty()) {
            return Err(RealizationError::NotAZero);
        }
        Ok(AnalyticPoint { coords })
    }

    pub fn coordinates(&self) -> &[NovikovSeries] {
        &self.coords
    }

    /// Coordinatewise valuation.
    pub fn tropicalize(&self) -> Vec<BigRational> {
        self.coords
            .iter()
            .map(|c| match c.valuation() {
                Exponent::Finite(v) => v,
                Exponent::Infinity => unreachable!("coordinates are nonzero"),
            })
            .collect()
    }
}

/// Lift a tropical polynomial: `c_alpha = T^{a_alpha} u_alpha` with the given
/// unitary seed per exponent (default 1).
pub fn lift_coefficients(
    f: &TropicalPolynomial,
    seeds: &[(IntVec, UnitaryElement)],
    e_max: BigRational,
) -> Result<NovikovLaurentPolynomial, RealizationError> {
    let terms = f
        .terms()
        .iter()
        .map(|(alpha, a)| {
            let seed = seeds
                .iter()
                .find(|(beta, _)| beta == alpha)
                .map(|(_, u)| u.clone())
                .unwrap_or_else(UnitaryElement::one);
            (alpha.clone(), seed.series().shift(a))
        })
        .collect();
    NovikovLaurentPolynomial::new(f.ambient_dim(), terms, e_max)
}

/// Confirm that the coefficient minimum at `trop(z)` is achieved by at least
/// two exponents, given that `z` is a zero to working precision.
pub fn kapranov_check(
    f: &NovikovLaurentPolynomial,
    z: &AnalyticPoint,
) -> Result<bool, RealizationError> {
    let residual = f.eval(z)?;
    if residual.valuation_lower_bound() < Exponent::Finite(f.e_max.clone()) {
        return Err(RealizationError::NotAZero);
    }
    let q = z.tropicalize();
    let (_, argmin) = f.tropicalization().eval(&q);
    Ok(argmin.len() >= 2)
}

/// Newton iteration transcript: the residual valuation lower bound after each
/// step, ending with a certified `>= target`.
#[derive(Debug, Clone)]
pub struct NewtonTrace {
    pub residual_valuations: Vec<Exponent>,
}

/// Solve `p(w) = 0` near the unitary initial term `w0`, to `O(T^{e_max})`.
///
/// `p` is given by its coefficients, constant term first. The initial term
/// must be a simple root of the order-zero part of `p`.
pub fn newton_lift_root(
    p: &[NovikovSeries],
    w0: &BigRational,
    e_max: &BigRational,
) -> Result<NovikovSeries, RealizationError> {
    newton_lift_root_traced(p, w0, e_max).map(|(w, _)| w)
}

pub fn newton_lift_root_traced(
    p: &[NovikovSeries],
    w0: &BigRational,
    e_max: &BigRational,
) -> Result<(NovikovSeries, NewtonTrace), RealizationError> {
    let target = Exponent::Finite(e_max.clone());
    let eval = |coeffs: &[NovikovSeries], w: &NovikovSeries| -> NovikovSeries {
        let mut acc = NovikovSeries::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(w).add(c).truncated(target.clone());
        }
        acc
    };
    let deriv: Vec<NovikovSeries> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&BigRational::from_integer(k.into())))
        .collect();
    let mut w = NovikovSeries::from_rational(w0.clone()).truncated(target.clone());
    let r0 = eval(p, &w);
    if r0.valuation_lower_bound() <= Exponent::Finite(BigRational::zero()) {
        return Err(RealizationError::SingularInitialTerm);
    }
    let d0 = eval(&deriv, &w);
    if d0.valuation() != Exponent::Finite(BigRational::zero()) {
        return Err(RealizationError::SingularInitialTerm);
    }
    let mut trace = NewtonTrace {
        residual_valuations: vec![r0.valuation_lower_bound()],
    };
    // Work on a doubling precision ladder: the round at cap `c` corrects the
    // approximant modulo `T^c` only, so early rounds stay small and just the
    // final ones touch the full target. The approximant itself is kept as an
    // exact polynomial; caps apply during evaluation.
    let eval_at = |coeffs: &[NovikovSeries], w: &NovikovSeries, cap: &Exponent| -> NovikovSeries {
        let mut acc = NovikovSeries::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(w).add(c).truncated(cap.clone());
        }
        acc
    };
    let v0 = match r0.valuation_lower_bound() {
        Exponent::Finite(v) => v,
        Exponent::Infinity => return Ok((w.truncated(target), trace)),
    };
    let mut reached = v0;
    loop {
        let cap_val = (&reached + &reached).min(e_max.clone());
        let cap = Exponent::Finite(cap_val.clone());
        loop {
            let residual_cap = eval_at(p, &w, &cap);
            if residual_cap.is_empty() {
                break;
            }
            let slope = eval_at(&deriv, &w, &cap);
            let step = residual_cap.mul(&slope.invert()?);
            // Keep the approximant an exact polynomial.
            let step = NovikovSeries::new(step.terms().to_vec(), Exponent::Infinity);
            w = w.sub(&step);
        }
        trace
            .residual_valuations
            .push(Exponent::Finite(cap_val.clone()));
        reached = cap_val;
        if Exponent::Finite(reached.clone()) >= target {
            break;
        }
    }
    Ok((w.truncated(target), trace))
}

/// Construct an analytic zero of `f` above a facet-interior point `q` of the
/// tropicalization: all coordinates are plain powers of `T` except one, whose
/// unitary part is solved for by Newton lifting.
pub fn realize_point(
    f: &NovikovLaurentPolynomial,
    q: &[BigRational],
) -> Result<AnalyticPoint, RealizationError> {
    let trop = f.tropicalization();
    let (_, argmin) = trop.eval(q);
    match argmin.len() {
        0 | 1 => return Err(RealizationError::NotOnTropicalization),
        2 => {}
        _ => return Err(RealizationError::VertexPoint),
    }
    let alpha = &f.terms()[argmin[0]].0;
    let beta = &f.terms()[argmin[1]].0;
    let delta: IntVec = beta.iter().zip(alpha).map(|(b, a)| b - a).collect();
    // Candidate coordinates for the univariate reduction, smallest exponent
    // gap first, then highest index; take the first admitting a rational
    // simple root of the leading binomial.
    let mut candidates: Vec<usize> = (0..f.ambient_dim())
        .filter(|&j| !delta[j].is_zero())
        .collect();
    candidates.sort_by(|&a, &b| delta[a].abs().cmp(&delta[b].abs()).then(b.cmp(&a)));
    let mut last_err = RealizationError::NoRationalLift;
    for &j in &candidates {
        match realize_with_coordinate(f, q, j) {
            Ok(z) => return Ok(z),
            Err(e @ (RealizationError::NoRationalLift | RealizationError::SingularInitialTerm)) => {
                last_err = e;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

fn realize_with_coordinate(
    f: &NovikovLaurentPolynomial,
    q: &[BigRational],
    j: usize,
) -> Result<AnalyticPoint, RealizationError> {
    // Substitute z_i = T^{q_i} (i != j), z_j = T^{q_j} w: each monomial
    // becomes c_gamma T^{<gamma, q>} w^{gamma_j}.
    let mut k_min: Option<BigInt> = None;
    let mut k_max: Option<BigInt> = None;
    for (gamma, _) in f.terms() {
        let k = gamma[j].clone();
        k_min = Some(k_min.map_or(k.clone(), |m: BigInt| m.min(k.clone())));
        k_max = Some(k_max.map_or(k.clone(), |m: BigInt| m.max(k)));
    }
    let k_min = k_min.unwrap();
    let k_max = k_max.unwrap();
    let deg = usize::try_from(
        (&k_max - &k_min)
            .magnitude()
            .to_u64_digits()
            .first()
            .copied()
            .unwrap_or(0),
    )
    .expect("small degrees");
    let mut coeffs: Vec<NovikovSeries> = vec![NovikovSeries::zero(); deg + 1];
    let mut min_val: Option<BigRational> = None;
    for (gamma, c) in f.terms() {
        let shift = dot_rat(gamma, q);
        let t = c.shift(&shift);
        if let Exponent::Finite(v) = t.valuation() {
            min_val = Some(min_val.map_or(v.clone(), |m: BigRational| m.min(v.clone())));
        }
        let idx = usize::try_from(
            (&gamma[j] - &k_min)
                .magnitude()
                .to_u64_digits()
                .first()
                .copied()
                .unwrap_or(0),
        )
        .unwrap();
        coeffs[idx] = coeffs[idx].add(&t);
    }
    // Normalize away the overall valuation so the residue equation lives at
    // order zero, and raise the Newton target so the residual of f itself
    // still clears e_max.
    let m = min_val.expect("nonzero coefficients");
    let normalized: Vec<NovikovSeries> = coeffs.iter().map(|c| c.shift(&-m.clone())).collect();
    let target = f.e_max() - &m;
    let target = if target <= BigRational::zero() {
        f.e_max().clone()
    } else {
        target
    };
    // Leading binomial: the order-zero parts of the normalized coefficients.
    let residue: Vec<BigRational> = normalized
        .iter()
        .map(|c| c.coefficient(&BigRational::zero()))
        .collect();
    let nonzero: Vec<usize> = residue
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, _)| i)
        .collect();
    if nonzero.len() != 2 {
        return Err(RealizationError::NoRationalLift);
    }
    let (lo, hi) = (nonzero[0], nonzero[1]);
    let d = u32::try_from(hi - lo).unwrap();
    let w0 = rational_root(&(-&residue[lo] / &residue[hi]), d)
        .ok_or(RealizationError::NoRationalLift)?;
    let w = newton_lift_root(&normalized, &w0, &target)?;
    let mut coords = Vec::with_capacity(f.ambient_dim());
    for (i, qi) in q.iter().enumerate() {
        if i == j {
            coords.push(w.shift(qi));
        } else {
            coords.push(NovikovSeries::monomial(BigRational::one(), qi.clone()));
        }
    }
    AnalyticPoint::new(coords)
}

/// Exact rational `d`-th root, positive root preferred for even `d`.
fn rational_root(r: &BigRational, d: u32) -> Option<BigRational> {
    if d == 1 {
        return Some(r.clone());
    }
    if r.is_zero() {
        return None;
    }
    if d % 2 == 0 && r.is_negative() {
        return None;
    }
    let int_root = |x: &BigInt| -> Option<BigInt> {
        let candidate = x.nth_root(d);
        if candidate.pow(d) == *x {
            Some(candidate)
        } else {
            None
        }
    };
    let sign = if r.numer().is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let n = int_root(&r.numer().abs())?;
    let m = int_root(r.denom())?;
    Some(BigRational::new(sign * n, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::default_e_max as emax;
    use crate::{rat, ratio};

    fn pants_lift() -> NovikovLaurentPolynomial {
        lift_coefficients(&TropicalPolynomial::pants(), &[], emax()).unwrap()
    }

    #[test]
    fn lift_default_is_monomials() {
        // The pants lift with default seeds is 1 + z1 + z2: every
        // coefficient is the constant series 1.
        let f = pants_lift();
        for (_, c) in f.terms() {
            assert_eq!(c, &NovikovSeries::one());
        }
        // Custom seed: coefficient T^3 (1 + T) = T^3 + T^4.
        let g =
            TropicalPolynomial::new(1, vec![(crate::lattice::int_vec(&[1]), ratio(3))]).unwrap();
        let seed: UnitaryElement = "1*T^0 + 1*T^1".parse().unwrap();
        let lifted =
            lift_coefficients(&g, &[(crate::lattice::int_vec(&[1]), seed)], emax()).unwrap();
        let c: NovikovSeries = "1*T^3 + 1*T^4".parse().unwrap();
        assert_eq!(lifted.terms()[0].1, c);
    }

    #[test]
    fn tropicalize_points() {
        let z = AnalyticPoint::new(vec![
            NovikovSeries::monomial(ratio(1), ratio(-3)),
            "-1*T^-3 + -1*T^0".parse().unwrap(),
        ])
        .unwrap();
        assert_eq!(z.tropicalize(), vec![ratio(-3), ratio(-3)]);
        let one = AnalyticPoint::new(vec![NovikovSeries::one(), NovikovSeries::one()]).unwrap();
        assert_eq!(one.tropicalize(), vec![ratio(0), ratio(0)]);
        let w = AnalyticPoint::new(vec![
            NovikovSeries::monomial(ratio(1), rat(1, 2)),
            NovikovSeries::monomial(ratio(1), ratio(2)),
        ])
        .unwrap();
        assert_eq!(w.tropicalize(), vec![rat(1, 2), ratio(2)]);
    }

    #[test]
    fn kapranov_on_exact_zero() {
        let f = pants_lift();
        let z = AnalyticPoint::new(vec![
            NovikovSeries::monomial(ratio(1), ratio(-3)),
            "-1*T^0 + -1*T^-3".parse().unwrap(),
        ])
        .unwrap();
        assert!(f.eval(&z).unwrap().is_exact_zero());
        assert!(kapranov_check(&f, &z).unwrap());
        let not_zero =
            AnalyticPoint::new(vec![NovikovSeries::one(), NovikovSeries::one()]).unwrap();
        assert_eq!(
            kapranov_check(&f, &not_zero),
            Err(RealizationError::NotAZero)
        );
    }

    #[test]
    fn newton_constant() {
        let p = vec![NovikovSeries::from_int(-5), NovikovSeries::one()];
        let w = newton_lift_root(&p, &ratio(5), &emax()).unwrap();
        assert!(w.eq_mod_precision(&NovikovSeries::from_int(5)));
    }

    #[test]
    fn newton_sqrt_one_plus_t() {
        // w^2 - (1 + T) = 0 from w0 = 1: the binomial series.
        let p = vec![
            "-1*T^0 + -1*T^1".parse().unwrap(),
            NovikovSeries::zero(),
            NovikovSeries::one(),
        ];
        let (w, trace) = newton_lift_root_traced(&p, &ratio(1), &emax()).unwrap();
        assert_eq!(w.coefficient(&ratio(0)), ratio(1));
        assert_eq!(w.coefficient(&ratio(1)), rat(1, 2));
        assert_eq!(w.coefficient(&ratio(2)), rat(-1, 8));
        assert_eq!(w.coefficient(&ratio(3)), rat(1, 16));
        // Residual valuation at least doubles while below target.
        let vals = &trace.residual_valuations;
        for k in 1..vals.len() {
            if let (Exponent::Finite(prev), cur) = (&vals[k - 1], &vals[k]) {
                let doubled = Exponent::Finite(prev + prev);
                assert!(
                    *cur >= doubled.min(Exponent::Finite(emax())),
                    "residual did not double: {:?} -> {:?}",
                    vals[k - 1],
                    vals[k]
                );
            }
        }
    }

    #[test]
    fn newton_rejects_double_root() {
        // (w - 1)^2 = w^2 - 2w + 1.
        let p = vec![
            NovikovSeries::one(),
            NovikovSeries::from_int(-2),
            NovikovSeries::one(),
        ];
        assert_eq!(
            newton_lift_root(&p, &ratio(1), &emax()),
            Err(RealizationError::SingularInitialTerm)
        );
    }

    #[test]
    fn realize_pants_points() {
        let f = pants_lift();
        // Diagonal facet point.
        let z = realize_point(&f, &[ratio(-3), ratio(-3)]).unwrap();
        assert_eq!(
            z.coordinates()[0],
            NovikovSeries::monomial(ratio(1), ratio(-3))
        );
        let expect: NovikovSeries = "-1*T^-3 + -1*T^0".parse().unwrap();
        assert!(z.coordinates()[1].eq_mod_precision(&expect));
        assert_eq!(z.tropicalize(), vec![ratio(-3), ratio(-3)]);
        assert!(kapranov_check(&f, &z).unwrap());

        // Horizontal facet point.
        let z = realize_point(&f, &[ratio(2), ratio(0)]).unwrap();
        assert_eq!(
            z.coordinates()[0],
            NovikovSeries::monomial(ratio(1), ratio(2))
        );
        let expect: NovikovSeries = "-1*T^0 + -1*T^2".parse().unwrap();
        assert!(z.coordinates()[1].eq_mod_precision(&expect));

        // Off the tropicalization.
        assert_eq!(
            realize_point(&f, &[ratio(-1), ratio(5)]),
            Err(RealizationError::NotOnTropicalization)
        );
        // Vertex point.
        assert_eq!(
            realize_point(&f, &[ratio(0), ratio(0)]),
            Err(RealizationError::VertexPoint)
        );
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rational_root(&rat(9, 4), 2), Some(rat(3, 2)));
        assert_eq!(rational_root(&ratio(-8), 3), Some(ratio(-2)));
        assert_eq!(rational_root(&ratio(-4), 2), None);
        assert_eq!(rational_root(&ratio(2), 2), None);
    }
}
