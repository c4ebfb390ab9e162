//! Truncated Novikov series with exact rational coefficients and exponents.
//!
//! A series is a finite sum of terms `c * T^e` with strictly increasing
//! exponents, together with an explicit precision: the order `O(T^E)` beyond
//! which nothing is known. Operations propagate precision pessimistically and
//! never claim more than the inputs justify. Exact values (polynomials,
//! monomials) carry infinite precision.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Default truncation order used when an operation on exact inputs would
/// produce an infinite series, and default working precision E_max elsewhere.
pub fn default_e_max() -> BigRational {
    BigRational::from_integer(10.into())
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum NovikovError {
    #[error("division by zero series")]
    ZeroDivision,
    #[error("argument must have strictly positive valuation")]
    NotPositiveValuation,
    #[error("series is not unitary: {0}")]
    NotUnitary(String),
    #[error("cannot parse series: {0}")]
    Parse(String),
}

/// A valuation or truncation order: an exact rational or `+inf`.
///
/// Infinity absorbs addition and is maximal in comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exponent {
    Finite(BigRational),
    Infinity,
}

impl Exponent {
    pub fn finite(v: BigRational) -> Self {
        Exponent::Finite(v)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            Exponent::Finite(v) => Some(v),
            Exponent::Infinity => None,
        }
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinity,
        }
    }

    pub fn min(self, other: Exponent) -> Exponent {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Exponent::Infinity, Exponent::Infinity) => Ordering::Equal,
            (Exponent::Infinity, _) => Ordering::Greater,
            (_, Exponent::Infinity) => Ordering::Less,
            (Exponent::Finite(a), Exponent::Finite(b)) => a.cmp(b),
        }
    }
}

impl From<BigRational> for Exponent {
    fn from(v: BigRational) -> Self {
        Exponent::Finite(v)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{v}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// A truncated Novikov series `sum a_i T^{e_i} + O(T^prec)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovikovSeries {
    /// `(exponent, coefficient)` pairs, exponents strictly increasing,
    /// coefficients nonzero, all exponents below `precision`.
    terms: Vec<(BigRational, BigRational)>,
    precision: Exponent,
}

impl NovikovSeries {
    /// Build a series from arbitrary terms; merges duplicates, drops zeros and
    /// terms at or beyond the precision.
    pub fn new(terms: Vec<(BigRational, BigRational)>, precision: Exponent) -> Self {
        let mut sorted = terms;
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(BigRational, BigRational)> = Vec::with_capacity(sorted.len());
        for (e, c) in sorted {
            if Exponent::Finite(e.clone()) >= precision {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        NovikovSeries {
            terms: merged,
            precision,
        }
    }

    /// The exact zero series.
    pub fn zero() -> Self {
        NovikovSeries {
            terms: Vec::new(),
            precision: Exponent::Infinity,
        }
    }

    /// Zero known only modulo `T^prec`.
    pub fn zero_mod(prec: Exponent) -> Self {
        NovikovSeries {
            terms: Vec::new(),
            precision: prec,
        }
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), BigRational::zero())
    }

    /// The exact monomial `c * T^e`.
    pub fn monomial(coeff: BigRational, exp: BigRational) -> Self {
        Self::new(vec![(exp, coeff)], Exponent::Infinity)
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::monomial(c, BigRational::zero())
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_rational(BigRational::from_integer(c.into()))
    }

    pub fn terms(&self) -> &[(BigRational, BigRational)] {
        &self.terms
    }

    pub fn precision(&self) -> &Exponent {
        &self.precision
    }

    /// True when no term is stored. With finite precision this means
    /// "indistinguishable from zero", not "exactly zero".
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True only for the exact zero series.
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.precision == Exponent::Infinity
    }

    /// Smallest exponent of a nonzero term; `inf` for an empty series.
    pub fn valuation(&self) -> Exponent {
        match self.terms.first() {
            Some((e, _)) => Exponent::Finite(e.clone()),
            None => Exponent::Infinity,
        }
    }

    /// Largest order up to which the series is certified to vanish or the
    /// valuation itself: the valuation for nonempty series, otherwise the
    /// precision. This is the honest answer for residual checks.
    pub fn valuation_lower_bound(&self) -> Exponent {
        match self.terms.first() {
            Some((e, _)) => Exponent::Finite(e.clone()),
            None => self.precision.clone(),
        }
    }

    /// Coefficient of `T^e` (zero when absent).
    pub fn coefficient(&self, e: &BigRational) -> BigRational {
        self.terms
            .iter()
            .find(|(te, _)| te == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Leading `(exponent, coefficient)` pair.
    pub fn leading(&self) -> Option<(&BigRational, &BigRational)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    /// Truncate to the given precision (never extends knowledge).
    pub fn truncated(&self, prec: Exponent) -> Self {
        let p = self.precision.clone().min(prec);
        Self::new(self.terms.clone(), p)
    }

    /// True when all exponents are >= 0, i.e. the series lies in the ring part.
    pub fn in_ring(&self) -> bool {
        self.terms.iter().all(|(e, _)| !e.is_negative())
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.precision.clone().min(other.precision.clone());
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(terms, prec)
    }

    pub fn neg(&self) -> Self {
        NovikovSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            precision: self.precision.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero_mod(self.precision.clone());
        }
        NovikovSeries {
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k * c))
                .collect(),
            precision: self.precision.clone(),
        }
    }

    /// Multiply by the monomial `T^e`.
    pub fn shift(&self, e: &BigRational) -> Self {
        NovikovSeries {
            terms: self
                .terms
                .iter()
                .map(|(te, c)| (te + e, c.clone()))
                .collect(),
            precision: self.precision.add(&Exponent::Finite(e.clone())),
        }
    }

    /// Product. Result precision is `min(val(a)+prec(b), val(b)+prec(a))`.
    pub fn mul(&self, other: &Self) -> Self {
        let prec = self
            .valuation()
            .add(&other.precision)
            .min(other.valuation().add(&self.precision));
        let mut terms = Vec::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if Exponent::Finite(e.clone()) >= prec {
                    continue;
                }
                terms.push((e, ca * cb));
            }
        }
        Self::new(terms, prec)
    }

    /// Integer power (nonnegative).
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse. Writes `a = T^v u` with `u` unitary and inverts
    /// `u` by a geometric series. When the input is exact and the inverse is
    /// an infinite series, the result is truncated at relative order
    /// [`default_e_max`].
    pub fn invert(&self) -> Result<Self, NovikovError> {
        let (v, c0) = match self.leading() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(NovikovError::ZeroDivision),
        };
        // u = c0 (1 + w), val(w) > 0
        let u = self.shift(&-v.clone()).scale(&c0.recip());
        let w = u.sub(&Self::one());
        if w.is_empty() && w.precision == Exponent::Infinity {
            // Monomial input: exact inverse.
            return Ok(Self::monomial(c0.recip(), -v));
        }
        let rel_prec = match &u.precision {
            Exponent::Finite(p) => p.clone(),
            Exponent::Infinity => default_e_max(),
        };
        // Newton inversion y <- y (2 - u y) with a doubling precision
        // ladder: the correction valuation doubles each round.
        let gap = match w.valuation() {
            Exponent::Finite(g) => g,
            Exponent::Infinity => rel_prec.clone(),
        };
        let two = Self::from_int(2);
        let u1 = u.truncated(Exponent::Finite(rel_prec.clone()));
        let mut cur = gap.clone().min(rel_prec.clone());
        let mut y = Self::one();
        loop {
            let cap = Exponent::Finite(cur.clone());
            let residual = two
                .sub(&u1.truncated(cap.clone()).mul(&y))
                .truncated(cap.clone());
            let next = y.mul(&residual).truncated(cap.clone());
            // Keep the iterate an exact polynomial between rounds.
            y = Self::new(next.terms().to_vec(), Exponent::Infinity);
            if cur >= rel_prec {
                break;
            }
            cur = (&cur + &cur).min(rel_prec.clone());
        }
        let y = Self::new(y.terms().to_vec(), Exponent::Finite(rel_prec));
        Ok(y.scale(&c0.recip()).shift(&-v))
    }

    /// Formal exponential of a positive-valuation series, truncated. Returns a
    /// unitary element with constant term 1.
    pub fn exp_positive(&self) -> Result<UnitaryElement, NovikovError> {
        if self.is_empty() {
            return UnitaryElement::new(Self::one().truncated(self.precision.clone()));
        }
        let v = self.valuation();
        if v <= Exponent::Finite(BigRational::zero()) {
            return Err(NovikovError::NotPositiveValuation);
        }
        let prec = match &self.precision {
            Exponent::Finite(p) => Exponent::Finite(p.clone()),
            Exponent::Infinity => Exponent::Finite(default_e_max()),
        };
        let x = self.truncated(prec.clone());
        let mut acc = Self::one().truncated(prec.clone());
        let mut p = Self::one().truncated(prec.clone());
        let mut k: i64 = 0;
        loop {
            k += 1;
            p = p
                .mul(&x)
                .scale(&BigRational::new(1.into(), k.into()))
                .truncated(prec.clone());
            if p.is_empty() {
                break;
            }
            acc = acc.add(&p);
        }
        UnitaryElement::new(acc)
    }

    /// Formal `log(1 + x)` for positive-valuation `x`, truncated.
    pub fn log_one_plus(&self) -> Result<Self, NovikovError> {
        if self.is_empty() {
            return Ok(Self::zero_mod(self.precision.clone()));
        }
        let v = self.valuation();
        if v <= Exponent::Finite(BigRational::zero()) {
            return Err(NovikovError::NotPositiveValuation);
        }
        let prec = match &self.precision {
            Exponent::Finite(p) => Exponent::Finite(p.clone()),
            Exponent::Infinity => Exponent::Finite(default_e_max()),
        };
        let x = self.truncated(prec.clone());
        let mut acc = Self::zero_mod(prec.clone());
        let mut p = Self::one().truncated(prec.clone());
        let mut k: i64 = 0;
        loop {
            k += 1;
            p = p.mul(&x).truncated(prec.clone());
            if p.is_empty() {
                break;
            }
            let sign = if k % 2 == 1 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            acc = acc.add(&p.scale(&(sign / BigRational::from_integer(k.into()))));
        }
        Ok(acc)
    }

    /// Equality after truncating both sides to the common precision.
    pub fn eq_mod_precision(&self, other: &Self) -> bool {
        let prec = self.precision.clone().min(other.precision.clone());
        self.truncated(prec.clone()).terms == other.truncated(prec).terms
    }
}

impl fmt::Display for NovikovSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{c}*T^{e}"))
            .collect();
        if let Exponent::Finite(p) = &self.precision {
            pieces.push(format!("O(T^{p})"));
        }
        if pieces.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", pieces.join(" + "))
        }
    }
}

impl FromStr for NovikovSeries {
    type Err = NovikovError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut terms = Vec::new();
        let mut precision = Exponent::Infinity;
        for piece in s.split(" + ") {
            let piece = piece.trim();
            if let Some(rest) = piece.strip_prefix("O(T^") {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| NovikovError::Parse(format!("bad order term {piece:?}")))?;
                let p = inner
                    .parse::<BigRational>()
                    .map_err(|e| NovikovError::Parse(format!("bad order {inner:?}: {e}")))?;
                precision = Exponent::Finite(p);
                continue;
            }
            let (coeff, exp) = piece
                .split_once("*T^")
                .ok_or_else(|| NovikovError::Parse(format!("bad term {piece:?}")))?;
            let c = coeff
                .parse::<BigRational>()
                .map_err(|e| NovikovError::Parse(format!("bad coefficient {coeff:?}: {e}")))?;
            let e = exp
                .parse::<BigRational>()
                .map_err(|e2| NovikovError::Parse(format!("bad exponent {exp:?}: {e2}")))?;
            terms.push((e, c));
        }
        Ok(Self::new(terms, precision))
    }
}

/// A valuation-zero series with invertible constant term, used to store
/// holonomies multiplicatively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitaryElement(NovikovSeries);

impl UnitaryElement {
    pub fn new(series: NovikovSeries) -> Result<Self, NovikovError> {
        match series.leading() {
            Some((e, _)) if e.is_zero() => Ok(UnitaryElement(series)),
            Some((e, _)) => Err(NovikovError::NotUnitary(format!(
                "leading exponent {e}, expected 0"
            ))),
            None => Err(NovikovError::NotUnitary("empty series".into())),
        }
    }

    pub fn one() -> Self {
        UnitaryElement(NovikovSeries::one())
    }

    pub fn series(&self) -> &NovikovSeries {
        &self.0
    }

    pub fn into_series(self) -> NovikovSeries {
        self.0
    }

    pub fn constant_term(&self) -> BigRational {
        self.0.coefficient(&BigRational::zero())
    }

    pub fn mul(&self, other: &Self) -> Self {
        UnitaryElement(self.0.mul(&other.0))
    }

    pub fn invert(&self) -> Self {
        UnitaryElement(self.0.invert().expect("unitary elements are invertible"))
    }
}

impl fmt::Display for UnitaryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for UnitaryElement {
    type Err = NovikovError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        UnitaryElement::new(s.parse::<NovikovSeries>()?)
    }
}
