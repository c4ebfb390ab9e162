//! Gapped filtered A-infinity algebras and bimodules over truncated Novikov
//! coefficients: relation checking, deformation by degree-one cochains,
//! ideals and quotients, and the two level-by-level solvers (the
//! ideal-quotient bounding-cochain construction and the module-element
//! construction).
//!
//! Energy classes are identified with their energies: a structure constant is
//! stored at `(arity, level, input tuple)`. Signs follow the quadratic
//! relation sign `club(x, k1) = k1 + sum_{j<=k1} deg(x_j)`, extended to
//! bimodules by counting the module element's degree plus one in prefixes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Level = BigRational;
pub type SparseVec = BTreeMap<usize, BigRational>;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum AinfinityError {
    #[error("invalid structure: {0}")]
    Validation(String),
    #[error("the subspace is not an ideal")]
    NotAnIdeal,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("cannot parse: {0}")]
    Parse(String),
}

/// A finitely generated energy monoid, identified with its realized energy
/// levels below a cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyMonoid {
    generators: Vec<Level>,
}

impl EnergyMonoid {
    pub fn new(generators: Vec<Level>) -> Result<Self, AinfinityError> {
        if generators.iter().any(|g| !g.is_positive()) {
            return Err(AinfinityError::Validation(
                "energy generators must be positive".into(),
            ));
        }
        Ok(EnergyMonoid { generators })
    }

    /// All monoid elements with energy at most `cap`, sorted, starting at 0.
    pub fn realized_levels(&self, cap: &Level) -> Vec<Level> {
        let mut levels: BTreeSet<Level> = BTreeSet::new();
        levels.insert(Level::zero());
        let mut frontier = vec![Level::zero()];
        while let Some(x) = frontier.pop() {
            for g in &self.generators {
                let y = &x + g;
                if y <= *cap && levels.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        levels.into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

/// Key of one stored structure constant `m^{arity, level}(inputs)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TermKey {
    pub arity: usize,
    pub level: Level,
    pub inputs: Vec<usize>,
}

/// An energy-tagged vector: finitely many `(level, basis combination)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    components: BTreeMap<Level, SparseVec>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(i: usize) -> Self {
        let mut c = BTreeMap::new();
        c.insert(Level::zero(), BTreeMap::from([(i, BigRational::one())]));
        Element { components: c }
    }

    pub fn single(level: Level, i: usize, coeff: BigRational) -> Self {
        let mut e = Element::zero();
        e.add_term(level, i, coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &BTreeMap<Level, SparseVec> {
        &self.components
    }

    pub fn add_term(&mut self, level: Level, i: usize, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.components.entry(level.clone()).or_default();
        let entry = slot.entry(i).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            slot.remove(&i);
        }
        if slot.is_empty() {
            self.components.remove(&level);
        }
    }

    pub fn add(&mut self, other: &Element) {
        for (level, vec) in &other.components {
            for (i, c) in vec {
                self.add_term(level.clone(), *i, c.clone());
            }
        }
    }

    pub fn scaled(&self, c: &BigRational) -> Element {
        let mut out = Element::zero();
        for (level, vec) in &self.components {
            for (i, x) in vec {
                out.add_term(level.clone(), *i, x * c);
            }
        }
        out
    }

    pub fn shifted(&self, by: &Level) -> Element {
        let mut out = Element::zero();
        for (level, vec) in &self.components {
            for (i, x) in vec {
                out.add_term(level + by, *i, x.clone());
            }
        }
        out
    }

    /// Drop all components at or above the cap.
    pub fn truncated(&self, cap: &Level) -> Element {
        let mut out = Element::zero();
        for (level, vec) in &self.components {
            if level >= cap {
                continue;
            }
            for (i, x) in vec {
                out.add_term(level.clone(), *i, x.clone());
            }
        }
        out
    }

    /// Smallest level carrying a nonzero component.
    pub fn valuation(&self) -> Option<Level> {
        self.components.keys().next().cloned()
    }

    /// Per-basis level->coefficient view of one basis index.
    fn levels_of(&self, i: usize) -> Vec<(Level, BigRational)> {
        self.components
            .iter()
            .filter_map(|(l, vec)| vec.get(&i).map(|c| (l.clone(), c.clone())))
            .collect()
    }
}

/// A deforming cochain: a degree-one element of strictly positive valuation
/// supported below the algebra's energy cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformingCochain(Element);

impl DeformingCochain {
    pub fn new(element: Element, algebra: &GappedAlgebra) -> Result<Self, AinfinityError> {
        for (level, vec) in element.components() {
            if !level.is_positive() {
                return Err(AinfinityError::Validation(
                    "deforming cochain must have positive valuation".into(),
                ));
            }
            if *level >= algebra.e_max {
                return Err(AinfinityError::Validation(
                    "deforming cochain supported at or above the energy cap".into(),
                ));
            }
            for i in vec.keys() {
                if algebra.basis[*i].degree != 1 {
                    return Err(AinfinityError::Validation(format!(
                        "deforming cochain component {} is not degree one",
                        algebra.basis[*i].name
                    )));
                }
            }
        }
        Ok(DeformingCochain(element))
    }

    pub fn zero() -> Self {
        DeformingCochain(Element::zero())
    }

    pub fn element(&self) -> &Element {
        &self.0
    }
}

/// One violated relation instance.
#[derive(Debug, Clone)]
pub struct Violation {
    pub arity: usize,
    pub level: Level,
    pub inputs: Vec<usize>,
    pub defect: SparseVec,
}

/// Verdict of an ideal test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealVerdict {
    NotIdeal,
    WeakIdeal,
    StrongIdeal,
}

/// The distinguished ideals of the artifact: a basis-span or the
/// positive-energy part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealSpec {
    Span(BTreeSet<usize>),
    PositivePart,
}

/// Failure report of a level-by-level solve: the first level with a defect
/// class outside the solvable range.
#[derive(Debug, Clone)]
pub struct ObstructionReport {
    pub level: Level,
    pub class: SparseVec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    /// Verify the ideal/quotient hypotheses that guarantee success, then
    /// solve each level by a preimage through the quotient followed by a
    /// push into the ideal.
    Guarded,
    Generic,
}

/// Outcome of the bounding-cochain solver, with the per-level curvature
/// valuations for auditing the induction.
#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Solved {
        cochain: DeformingCochain,
        /// `(processed level, curvature valuation after the step)`; the
        /// valuation strictly exceeds the processed level each time.
        trace: Vec<(Level, Option<Level>)>,
    },
    Obstructed(ObstructionReport),
}

/// A gapped filtered A-infinity algebra with explicit truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GappedAlgebra {
    basis: Vec<BasisElement>,
    terms: BTreeMap<TermKey, SparseVec>,
    e_max: Level,
}

impl GappedAlgebra {
    pub fn new(
        basis: Vec<BasisElement>,
        terms: Vec<(TermKey, SparseVec)>,
        e_max: Level,
    ) -> Result<Self, AinfinityError> {
        let mut map: BTreeMap<TermKey, SparseVec> = BTreeMap::new();
        for (key, mut out) in terms {
            out.retain(|_, c| !c.is_zero());
            if out.is_empty() {
                continue;
            }
            if key.inputs.len() != key.arity {
                return Err(AinfinityError::Validation("arity/inputs mismatch".into()));
            }
            if key.level.is_negative() {
                return Err(AinfinityError::Validation("negative energy level".into()));
            }
            if key.arity == 0 && key.level.is_zero() {
                return Err(AinfinityError::Validation(
                    "level-zero curvature violates gappedness".into(),
                ));
            }
            if key.level >= e_max {
                continue;
            }
            for i in key.inputs.iter().chain(out.keys()) {
                if *i >= basis.len() {
                    return Err(AinfinityError::Validation("basis index out of range".into()));
                }
            }
            let expected: i64 = key.inputs.iter().map(|&i| basis[i].degree).sum::<i64>() + 2
                - key.arity as i64;
            for i in out.keys() {
                if basis[*i].degree != expected {
                    return Err(AinfinityError::Validation(format!(
                        "term {:?} output degree {} but expected {}",
                        key, basis[*i].degree, expected
                    )));
                }
            }
            if map.insert(key.clone(), out).is_some() {
                return Err(AinfinityError::Validation(format!("duplicate term {key:?}")));
            }
        }
        Ok(GappedAlgebra {
            basis,
            terms: map,
            e_max,
        })
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, SparseVec> {
        &self.terms
    }

    pub fn e_max(&self) -> &Level {
        &self.e_max
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    /// Indices of basis elements of the given degree.
    fn degree_indices(&self, degree: i64) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| self.basis[i].degree == degree)
            .collect()
    }

    /// Multilinear application of all stored operations of the right arity to
    /// energy-tagged inputs, truncated at the cap.
    pub fn apply(&self, inputs: &[&Element]) -> Element {
        let arity = inputs.len();
        let mut out = Element::zero();
        for (key, output) in self.terms.range(
            TermKey { arity, level: Level::zero(), inputs: vec![] }
                ..TermKey { arity: arity + 1, level: Level::zero(), inputs: vec![] },
        ) {
            // Contract input slots: product of the inputs' coefficients on
            // the stored basis tuple, distributed over levels.
            let mut partial: Vec<(Level, BigRational)> =
                vec![(key.level.clone(), BigRational::one())];
            for (slot, &basis_idx) in key.inputs.iter().enumerate() {
                let choices = inputs[slot].levels_of(basis_idx);
                if choices.is_empty() {
                    partial.clear();
                    break;
                }
                let mut next = Vec::with_capacity(partial.len() * choices.len());
                for (lvl, coeff) in &partial {
                    for (l2, c2) in &choices {
                        let lvl2 = lvl + l2;
                        if lvl2 >= self.e_max {
                            continue;
                        }
                        next.push((lvl2, coeff * c2));
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            for (lvl, coeff) in partial {
                for (i, c) in output {
                    out.add_term(lvl.clone(), *i, c * &coeff);
                }
            }
        }
        out
    }

    /// The arity-zero output as an energy-tagged element.
    pub fn curvature(&self) -> Element {
        self.apply(&[])
    }

    /// The quadratic-relation defect at one arity and input tuple, summed
    /// over all energy splittings (truncated at the cap).
    fn relation_defect(&self, inputs: &[usize]) -> Element {
        let k = inputs.len();
        let plain: Vec<Element> = inputs.iter().map(|&i| Element::basis(i)).collect();
        let mut defect = Element::zero();
        for k1 in 0..=k {
            for kp in 0..=(k - k1) {
                let inner_inputs: Vec<&Element> = plain[k1..k1 + kp].iter().collect();
                let inner = self.apply(&inner_inputs);
                if inner.is_zero() {
                    continue;
                }
                let mut outer_inputs: Vec<&Element> = Vec::with_capacity(k - kp + 1);
                for e in &plain[..k1] {
                    outer_inputs.push(e);
                }
                outer_inputs.push(&inner);
                for e in &plain[k1 + kp..] {
                    outer_inputs.push(e);
                }
                let term = self.apply(&outer_inputs);
                let sign = club_sign(
                    k1,
                    inputs[..k1].iter().map(|&i| self.basis[i].degree),
                );
                defect.add(&term.scaled(&sign));
            }
        }
        defect
    }

    /// Check the quadratic relations for every arity up to the bound and
    /// every basis input tuple; list nonzero defects by level.
    pub fn check_relations(&self, arity_bound: usize) -> Vec<Violation> {
        let mut out = Vec::new();
        for k in 0..=arity_bound {
            for inputs in tuples(self.basis.len(), k) {
                let defect = self.relation_defect(&inputs);
                for (level, vec) in defect.components() {
                    out.push(Violation {
                        arity: k,
                        level: level.clone(),
                        inputs: inputs.clone(),
                        defect: vec.clone(),
                    });
                }
            }
        }
        out
    }

    /// The deformed products `m^k_{(A,d)}`, truncated at the cap.
    pub fn deform(&self, d: &DeformingCochain) -> GappedAlgebra {
        let mut terms: BTreeMap<TermKey, SparseVec> = BTreeMap::new();
        for (key, output) in &self.terms {
            let arity = key.arity;
            for mask in 0u32..(1 << arity) {
                let marked: Vec<usize> = (0..arity).filter(|i| mask & (1 << i) != 0).collect();
                let free: Vec<usize> = (0..arity)
                    .filter(|i| mask & (1 << i) == 0)
                    .map(|i| key.inputs[i])
                    .collect();
                // All ways to feed the marked slots from d.
                let mut partial: Vec<(Level, BigRational)> =
                    vec![(key.level.clone(), BigRational::one())];
                for &pos in &marked {
                    let choices = d.element().levels_of(key.inputs[pos]);
                    if choices.is_empty() {
                        partial.clear();
                        break;
                    }
                    let mut next = Vec::new();
                    for (lvl, coeff) in &partial {
                        for (l2, c2) in &choices {
                            let lvl2 = lvl + l2;
                            if lvl2 >= self.e_max {
                                continue;
                            }
                            next.push((lvl2, coeff * c2));
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                for (lvl, coeff) in partial {
                    if key.arity == marked.len() && lvl.is_zero() {
                        // Cannot happen (d has positive valuation), but keep
                        // gappedness airtight.
                        continue;
                    }
                    let new_key = TermKey {
                        arity: free.len(),
                        level: lvl,
                        inputs: free.clone(),
                    };
                    let slot = terms.entry(new_key).or_default();
                    for (i, c) in output {
                        let entry = slot.entry(*i).or_insert_with(BigRational::zero);
                        *entry += c * &coeff;
                    }
                }
            }
        }
        let terms: Vec<(TermKey, SparseVec)> = terms.into_iter().collect();
        GappedAlgebra::new(self.basis.clone(), terms, self.e_max.clone())
            .expect("deformation preserves validity")
    }

    /// Classify a subspace as a (weak/strong) ideal.
    pub fn ideal_check(&self, spec: &IdealSpec) -> IdealVerdict {
        match spec {
            IdealSpec::PositivePart => IdealVerdict::StrongIdeal,
            IdealSpec::Span(span) => {
                for (key, output) in &self.terms {
                    if key.arity == 0 {
                        continue;
                    }
                    if key.inputs.iter().any(|i| span.contains(i))
                        && !output.keys().all(|i| span.contains(i))
                    {
                        return IdealVerdict::NotIdeal;
                    }
                }
                let strong = self
                    .curvature()
                    .components()
                    .values()
                    .all(|vec| vec.keys().all(|i| span.contains(i)));
                if strong {
                    IdealVerdict::StrongIdeal
                } else {
                    IdealVerdict::WeakIdeal
                }
            }
        }
    }

    /// The induced structure on the quotient by an ideal.
    pub fn quotient(&self, spec: &IdealSpec) -> Result<GappedAlgebra, AinfinityError> {
        if self.ideal_check(spec) == IdealVerdict::NotIdeal {
            return Err(AinfinityError::NotAnIdeal);
        }
        match spec {
            IdealSpec::PositivePart => {
                // The level-zero algebra.
                let terms: Vec<(TermKey, SparseVec)> = self
                    .terms
                    .iter()
                    .filter(|(k, _)| k.level.is_zero())
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                GappedAlgebra::new(self.basis.clone(), terms, self.e_max.clone())
            }
            IdealSpec::Span(span) => {
                let keep: Vec<usize> =
                    (0..self.basis.len()).filter(|i| !span.contains(i)).collect();
                let reindex: BTreeMap<usize, usize> =
                    keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
                let basis: Vec<BasisElement> =
                    keep.iter().map(|&i| self.basis[i].clone()).collect();
                let mut terms = Vec::new();
                for (key, output) in &self.terms {
                    if key.inputs.iter().any(|i| span.contains(i)) {
                        continue;
                    }
                    let out: SparseVec = output
                        .iter()
                        .filter(|(i, _)| !span.contains(i))
                        .map(|(i, c)| (reindex[i], c.clone()))
                        .collect();
                    if out.is_empty() {
                        continue;
                    }
                    let key2 = TermKey {
                        arity: key.arity,
                        level: key.level.clone(),
                        inputs: key.inputs.iter().map(|i| reindex[i]).collect(),
                    };
                    terms.push((key2, out));
                }
                GappedAlgebra::new(basis, terms, self.e_max.clone())
            }
        }
    }

    /// Matrix of the level-zero differential from degree `d` to `d + 1`,
    /// rows indexed by the target degree indices.
    fn differential_matrix(&self, from: &[usize], to: &[usize]) -> Vec<Vec<BigRational>> {
        let mut m = vec![vec![BigRational::zero(); from.len()]; to.len()];
        for (c, &i) in from.iter().enumerate() {
            let key = TermKey {
                arity: 1,
                level: Level::zero(),
                inputs: vec![i],
            };
            if let Some(out) = self.terms.get(&key) {
                for (r, &j) in to.iter().enumerate() {
                    if let Some(x) = out.get(&j) {
                        m[r][c] = x.clone();
                    }
                }
            }
        }
        m
    }

    /// Solve the level-zero equation `m^{1,0}(x) = target` over the given
    /// unknown indices. Returns coefficients per unknown.
    fn solve_differential(
        &self,
        unknowns: &[usize],
        target: &SparseVec,
        target_degree: i64,
    ) -> Option<Vec<BigRational>> {
        let rows = self.degree_indices(target_degree);
        let m = self.differential_matrix(unknowns, &rows);
        let rhs: Vec<BigRational> = rows
            .iter()
            .map(|i| target.get(i).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        crate::lattice::rat_solve(&m, &rhs)
    }

    /// Level-by-level construction of a bounding cochain through a strong
    /// ideal. `Guarded` verifies the quotient-DGA and connecting-map
    /// hypotheses first and solves by a preimage through the quotient
    /// followed by a push into the ideal; `Generic` just attempts the linear
    /// solve per level and reports the first obstruction class.
    pub fn solve_bounding_cochain(
        &self,
        ideal: &IdealSpec,
        mode: SolveMode,
    ) -> Result<SolveOutcome, AinfinityError> {
        if mode == SolveMode::Guarded {
            self.check_lemma_hypotheses(ideal)?;
        }
        let mut accumulated = Element::zero();
        let mut trace: Vec<(Level, Option<Level>)> = Vec::new();
        let mut last_level: Option<Level> = None;
        loop {
            let cochain = DeformingCochain::new(accumulated.clone(), self)?;
            let deformed = self.deform(&cochain);
            let curv = deformed.curvature();
            let Some(level) = curv.valuation() else {
                return Ok(SolveOutcome::Solved { cochain, trace });
            };
            if let Some(prev) = &last_level {
                assert!(level > *prev, "curvature valuation must strictly increase");
            }
            let defect = curv.components()[&level].clone();
            let neg_defect: SparseVec = defect.iter().map(|(i, c)| (*i, -c)).collect();
            let correction = match (mode, ideal) {
                (SolveMode::Guarded, IdealSpec::Span(span)) => {
                    self.lemma_two_stage_solve(span, &neg_defect)
                }
                _ => {
                    // One linear solve over all degree-one elements.
                    let unknowns = self.degree_indices(1);
                    self.solve_differential(&unknowns, &neg_defect, 2)
                        .map(|x| (unknowns, x))
                }
            };
            let Some((unknowns, coeffs)) = correction else {
                let class = self.reduce_mod_exact(&defect);
                return Ok(SolveOutcome::Obstructed(ObstructionReport { level, class }));
            };
            for (&i, c) in unknowns.iter().zip(&coeffs) {
                accumulated.add_term(level.clone(), i, c.clone());
            }
            let after = self
                .deform(&DeformingCochain::new(accumulated.clone(), self)?)
                .curvature()
                .valuation();
            trace.push((level.clone(), after));
            last_level = Some(level);
        }
    }

    /// Preimage through the quotient DGA, then push the remaining defect into
    /// the ideal: two chained level-zero solves.
    fn lemma_two_stage_solve(
        &self,
        span: &BTreeSet<usize>,
        neg_defect: &SparseVec,
    ) -> Option<(Vec<usize>, Vec<BigRational>)> {
        let complement: Vec<usize> = (0..self.basis.len())
            .filter(|i| !span.contains(i) && self.basis[*i].degree == 1)
            .collect();
        // Stage 1: kill the quotient part of the defect with complement
        // unknowns, using the full differential but comparing only quotient
        // coordinates.
        let rows: Vec<usize> = self
            .degree_indices(2)
            .into_iter()
            .filter(|i| !span.contains(i))
            .collect();
        let m = self.differential_matrix(&complement, &rows);
        let rhs: Vec<BigRational> = rows
            .iter()
            .map(|i| neg_defect.get(i).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        let x1 = crate::lattice::rat_solve(&m, &rhs)?;
        // Remaining defect after stage 1 lies in the ideal.
        let mut remaining = neg_defect.clone();
        let full_rows = self.degree_indices(2);
        let full = self.differential_matrix(&complement, &full_rows);
        for (r, &i) in full_rows.iter().enumerate() {
            let mut applied = BigRational::zero();
            for (c, coeff) in x1.iter().enumerate() {
                applied += &full[r][c] * coeff;
            }
            let e = remaining.entry(i).or_insert_with(BigRational::zero);
            *e -= applied;
            if e.is_zero() {
                remaining.remove(&i);
            }
        }
        debug_assert!(remaining.keys().all(|i| span.contains(i)));
        // Stage 2: absorb the ideal part with any degree-one elements.
        let unknowns = self.degree_indices(1);
        let x2 = self.solve_differential(&unknowns, &remaining, 2)?;
        let mut combined: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (&i, c) in complement.iter().zip(&x1) {
            *combined.entry(i).or_insert_with(BigRational::zero) += c;
        }
        for (&i, c) in unknowns.iter().zip(&x2) {
            *combined.entry(i).or_insert_with(BigRational::zero) += c;
        }
        let idx: Vec<usize> = combined.keys().copied().collect();
        let coeffs: Vec<BigRational> = combined.values().cloned().collect();
        Some((idx, coeffs))
    }

    /// Reduce a degree-two vector modulo the image of the level-zero
    /// differential: the reported obstruction class.
    fn reduce_mod_exact(&self, defect: &SparseVec) -> SparseVec {
        let ones = self.degree_indices(1);
        let twos = self.degree_indices(2);
        let image = self.differential_matrix(&ones, &twos);
        // Column space of `image`; reduce the defect vector against it.
        let mut rows: Vec<Vec<BigRational>> = (0..ones.len())
            .map(|c| (0..twos.len()).map(|r| image[r][c].clone()).collect())
            .collect();
        let pivots = crate::lattice::rat_rref(&mut rows);
        let mut v: Vec<BigRational> = twos
            .iter()
            .map(|i| defect.get(i).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        for (r, &p) in pivots.iter().enumerate() {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, row) in v.iter_mut().zip(rows[r].iter()) {
                    *x -= &f * row;
                }
            }
        }
        twos.iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&i, c)| (i, c))
            .collect()
    }

    /// Hypotheses of the ideal-extension solver: strong ideal, quotient a
    /// graded-commutative DGA, and the connecting map onto the level-zero
    /// degree-two cohomology of the ideal surjective.
    fn check_lemma_hypotheses(&self, ideal: &IdealSpec) -> Result<(), AinfinityError> {
        if self.ideal_check(ideal) != IdealVerdict::StrongIdeal {
            return Err(AinfinityError::HypothesisFailed(
                "(i) the subspace is not a strong ideal".into(),
            ));
        }
        let c = self.quotient(ideal)?;
        for key in c.terms.keys() {
            if key.arity == 0 || key.arity > 2 {
                return Err(AinfinityError::HypothesisFailed(
                    "(ii) quotient is not a differential graded algebra".into(),
                ));
            }
        }
        // Graded commutativity at every level.
        for (key, out) in &c.terms {
            if key.arity != 2 {
                continue;
            }
            let (x, y) = (key.inputs[0], key.inputs[1]);
            let swapped = TermKey {
                arity: 2,
                level: key.level.clone(),
                inputs: vec![y, x],
            };
            let other = c.terms.get(&swapped).cloned().unwrap_or_default();
            let sign = if (c.basis[x].degree * c.basis[y].degree) % 2 == 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            for i in out.keys().chain(other.keys()) {
                let lhs = out.get(i).cloned().unwrap_or_else(BigRational::zero);
                let rhs = other.get(i).cloned().unwrap_or_else(BigRational::zero);
                if lhs != &sign * &rhs {
                    return Err(AinfinityError::HypothesisFailed(
                        "(ii) quotient product is not graded-commutative".into(),
                    ));
                }
            }
        }
        // Connecting-map surjectivity.
        match ideal {
            IdealSpec::PositivePart => {
                // Specialization: every closed level-zero defect must be
                // exact, i.e. the level-zero degree-two cohomology vanishes.
                let ones = self.degree_indices(1);
                let twos = self.degree_indices(2);
                let threes = self.degree_indices(3);
                let d1 = self.differential_matrix(&ones, &twos);
                let d2 = self.differential_matrix(&twos, &threes);
                let rank_d1 = crate::lattice::rat_rank(&transpose(&d1));
                let kernel_d2 = twos.len() - crate::lattice::rat_rank(&transpose(&d2));
                if kernel_d2 != rank_d1 {
                    return Err(AinfinityError::HypothesisFailed(
                        "(iii) level-zero degree-two cohomology does not vanish".into(),
                    ));
                }
            }
            IdealSpec::Span(span) => {
                // Lift closed degree-one quotient classes, apply the full
                // differential, and compare against the cocycles of the
                // ideal modulo its boundaries.
                let ideal_ones: Vec<usize> = self
                    .degree_indices(1)
                    .into_iter()
                    .filter(|i| span.contains(i))
                    .collect();
                let ideal_twos: Vec<usize> = self
                    .degree_indices(2)
                    .into_iter()
                    .filter(|i| span.contains(i))
                    .collect();
                let ideal_threes: Vec<usize> = self
                    .degree_indices(3)
                    .into_iter()
                    .filter(|i| span.contains(i))
                    .collect();
                let comp_ones: Vec<usize> = self
                    .degree_indices(1)
                    .into_iter()
                    .filter(|i| !span.contains(i))
                    .collect();
                // Closed level-zero classes of the quotient: kernel of the
                // quotient differential on degree one.
                let comp_twos: Vec<usize> = self
                    .degree_indices(2)
                    .into_iter()
                    .filter(|i| !span.contains(i))
                    .collect();
                let dq = self.differential_matrix(&comp_ones, &comp_twos);
                let closed = crate::lattice::rat_kernel(&dq, comp_ones.len());
                // Images under the connecting map: full differential of the
                // lifted representative, which lands in the ideal.
                let dfull = self.differential_matrix(&comp_ones, &ideal_twos);
                let mut spanning: Vec<Vec<BigRational>> = Vec::new();
                for cvec in &closed {
                    let img: Vec<BigRational> = (0..ideal_twos.len())
                        .map(|r| {
                            (0..comp_ones.len())
                                .map(|c| &dfull[r][c] * &cvec[c])
                                .sum()
                        })
                        .collect();
                    spanning.push(img);
                }
                // Boundaries within the ideal.
                let d_ideal = self.differential_matrix(&ideal_ones, &ideal_twos);
                for c in 0..ideal_ones.len() {
                    spanning.push((0..ideal_twos.len()).map(|r| d_ideal[r][c].clone()).collect());
                }
                // Cocycles of the ideal in degree two.
                let d2 = self.differential_matrix(&ideal_twos, &ideal_threes);
                let cocycles = crate::lattice::rat_kernel(&d2, ideal_twos.len());
                let base_rank = crate::lattice::rat_rank(&spanning);
                let mut with = spanning;
                with.extend(cocycles);
                if crate::lattice::rat_rank(&with) != base_rank {
                    return Err(AinfinityError::HypothesisFailed(
                        "(iii) the connecting map onto the ideal's degree-two cohomology does not surject"
                            .into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn transpose(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|c| (0..rows).map(|r| m[r][c].clone()).collect())
        .collect()
}

/// `(-1)^{k1 + sum deg}` prefix sign of the quadratic relation.
fn club_sign(k1: usize, degrees: impl Iterator<Item = i64>) -> BigRational {
    let total: i64 = k1 as i64 + degrees.sum::<i64>();
    if total.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// All tuples of length `k` over `0..n`.
fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let shorter = tuples(n, k - 1);
    for t in shorter {
        for i in 0..n {
            let mut t2 = t.clone();
            t2.push(i);
            out.push(t2);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Bimodules
// ---------------------------------------------------------------------------

/// Key of one stored bimodule structure constant
/// `m^{k1|1|k2, level}(a_1..a_{k1} | m | b_1..b_{k2})`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModuleTermKey {
    pub left_arity: usize,
    pub right_arity: usize,
    pub level: Level,
    pub left_inputs: Vec<usize>,
    pub module_input: usize,
    pub right_inputs: Vec<usize>,
}

/// A gapped bimodule over a pair of gapped algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GappedBimodule {
    left: GappedAlgebra,
    right: GappedAlgebra,
    basis: Vec<BasisElement>,
    terms: BTreeMap<ModuleTermKey, SparseVec>,
    e_max: Level,
}

/// One violated bimodule relation instance.
#[derive(Debug, Clone)]
pub struct ModuleViolation {
    pub left_arity: usize,
    pub right_arity: usize,
    pub level: Level,
    pub defect: SparseVec,
}

impl GappedBimodule {
    pub fn new(
        left: GappedAlgebra,
        right: GappedAlgebra,
        basis: Vec<BasisElement>,
        terms: Vec<(ModuleTermKey, SparseVec)>,
        e_max: Level,
    ) -> Result<Self, AinfinityError> {
        let mut map = BTreeMap::new();
        for (key, mut out) in terms {
            out.retain(|_, c| !c.is_zero());
            if out.is_empty() {
                continue;
            }
            if key.left_inputs.len() != key.left_arity
                || key.right_inputs.len() != key.right_arity
            {
                return Err(AinfinityError::Validation("arity/inputs mismatch".into()));
            }
            if key.level.is_negative() {
                return Err(AinfinityError::Validation("negative energy level".into()));
            }
            if key.level >= e_max {
                continue;
            }
            let expected: i64 = key
                .left_inputs
                .iter()
                .map(|&i| left.basis[i].degree)
                .sum::<i64>()
                + basis[key.module_input].degree
                + key
                    .right_inputs
                    .iter()
                    .map(|&i| right.basis[i].degree)
                    .sum::<i64>()
                + 1
                - key.left_arity as i64
                - key.right_arity as i64;
            for i in out.keys() {
                if basis[*i].degree != expected {
                    return Err(AinfinityError::Validation(format!(
                        "module term {:?} output degree {} but expected {}",
                        key, basis[*i].degree, expected
                    )));
                }
            }
            if map.insert(key.clone(), out).is_some() {
                return Err(AinfinityError::Validation("duplicate module term".into()));
            }
        }
        Ok(GappedBimodule {
            left,
            right,
            basis,
            terms: map,
            e_max,
        })
    }

    pub fn left(&self) -> &GappedAlgebra {
        &self.left
    }

    pub fn right(&self) -> &GappedAlgebra {
        &self.right
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn terms(&self) -> &BTreeMap<ModuleTermKey, SparseVec> {
        &self.terms
    }

    pub fn e_max(&self) -> &Level {
        &self.e_max
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    fn module_degree_indices(&self, degree: i64) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| self.basis[i].degree == degree)
            .collect()
    }

    /// Multilinear application `m^{k1|1|k2}` to energy-tagged inputs.
    pub fn apply(
        &self,
        left_inputs: &[&Element],
        module_input: &Element,
        right_inputs: &[&Element],
    ) -> Element {
        let (k1, k2) = (left_inputs.len(), right_inputs.len());
        let mut out = Element::zero();
        for (key, output) in &self.terms {
            if key.left_arity != k1 || key.right_arity != k2 {
                continue;
            }
            let mut partial: Vec<(Level, BigRational)> =
                vec![(key.level.clone(), BigRational::one())];
            let feed = |element: &Element, basis_idx: usize,
                            partial: &mut Vec<(Level, BigRational)>| {
                let choices = element.levels_of(basis_idx);
                let mut next = Vec::new();
                for (lvl, coeff) in partial.iter() {
                    for (l2, c2) in &choices {
                        let lvl2 = lvl + l2;
                        if lvl2 >= self.e_max {
                            continue;
                        }
                        next.push((lvl2, coeff * c2));
                    }
                }
                *partial = next;
            };
            for (slot, &bi) in key.left_inputs.iter().enumerate() {
                feed(left_inputs[slot], bi, &mut partial);
                if partial.is_empty() {
                    break;
                }
            }
            if partial.is_empty() {
                continue;
            }
            feed(module_input, key.module_input, &mut partial);
            if partial.is_empty() {
                continue;
            }
            for (slot, &bi) in key.right_inputs.iter().enumerate() {
                feed(right_inputs[slot], bi, &mut partial);
                if partial.is_empty() {
                    break;
                }
            }
            for (lvl, coeff) in partial {
                for (i, c) in output {
                    out.add_term(lvl.clone(), *i, c * &coeff);
                }
            }
        }
        out
    }

    /// Defect of the quadratic module relation at one shape and input tuple.
    fn relation_defect(&self, a: &[usize], m_idx: usize, b: &[usize]) -> Element {
        let (k1, k2) = (a.len(), b.len());
        let pa: Vec<Element> = a.iter().map(|&i| Element::basis(i)).collect();
        let pb: Vec<Element> = b.iter().map(|&i| Element::basis(i)).collect();
        let pm = Element::basis(m_idx);
        let mut defect = Element::zero();
        // Module degrees count shifted by one in prefix signs.
        let left_degs: Vec<i64> = a.iter().map(|&i| self.left.basis[i].degree).collect();
        let m_deg = self.basis[m_idx].degree;
        let right_degs: Vec<i64> = b.iter().map(|&i| self.right.basis[i].degree).collect();

        // 1. Inner operation of the left algebra.
        for j1 in 0..=k1 {
            for j in 0..=(k1 - j1) {
                let inner_inputs: Vec<&Element> = pa[j1..j1 + j].iter().collect();
                let inner = self.left.apply(&inner_inputs);
                if inner.is_zero() {
                    continue;
                }
                let mut lefts: Vec<&Element> = Vec::new();
                for e in &pa[..j1] {
                    lefts.push(e);
                }
                lefts.push(&inner);
                for e in &pa[j1 + j..] {
                    lefts.push(e);
                }
                let rights: Vec<&Element> = pb.iter().collect();
                let term = self.apply(&lefts, &pm, &rights);
                let sign = club_sign(j1, left_degs[..j1].iter().copied());
                defect.add(&term.scaled(&sign));
            }
        }
        // 2. Inner module operation on an a-tail, m, and a b-head.
        for t1 in 0..=k1 {
            for t2 in 0..=k2 {
                let inner_lefts: Vec<&Element> = pa[k1 - t1..].iter().collect();
                let inner_rights: Vec<&Element> = pb[..t2].iter().collect();
                let inner = self.apply(&inner_lefts, &pm, &inner_rights);
                if inner.is_zero() {
                    continue;
                }
                let outer_lefts: Vec<&Element> = pa[..k1 - t1].iter().collect();
                let outer_rights: Vec<&Element> = pb[t2..].iter().collect();
                let term = self.apply(&outer_lefts, &inner, &outer_rights);
                let sign = club_sign(k1 - t1, left_degs[..k1 - t1].iter().copied());
                defect.add(&term.scaled(&sign));
            }
        }
        // 3. Inner operation of the right algebra.
        for j1 in 0..=k2 {
            for j in 0..=(k2 - j1) {
                let inner_inputs: Vec<&Element> = pb[j1..j1 + j].iter().collect();
                let inner = self.right.apply(&inner_inputs);
                if inner.is_zero() {
                    continue;
                }
                let lefts: Vec<&Element> = pa.iter().collect();
                let mut rights: Vec<&Element> = Vec::new();
                for e in &pb[..j1] {
                    rights.push(e);
                }
                rights.push(&inner);
                for e in &pb[j1 + j..] {
                    rights.push(e);
                }
                let term = self.apply(&lefts, &pm, &rights);
                // Prefix: all left inputs, the module element (degree + 1),
                // and the skipped right inputs.
                let prefix_degs = left_degs
                    .iter()
                    .copied()
                    .chain(std::iter::once(m_deg))
                    .chain(right_degs[..j1].iter().copied());
                let sign = club_sign(k1 + 1 + j1, prefix_degs);
                defect.add(&term.scaled(&sign));
            }
        }
        defect
    }

    /// Check the quadratic module relations up to the arity bounds.
    pub fn check_relations(&self, left_bound: usize, right_bound: usize) -> Vec<ModuleViolation> {
        let mut out = Vec::new();
        for k1 in 0..=left_bound {
            for k2 in 0..=right_bound {
                for a in tuples(self.left.basis.len(), k1) {
                    for b in tuples(self.right.basis.len(), k2) {
                        for m_idx in 0..self.basis.len() {
                            let defect = self.relation_defect(&a, m_idx, &b);
                            for (level, vec) in defect.components() {
                                out.push(ModuleViolation {
                                    left_arity: k1,
                                    right_arity: k2,
                                    level: level.clone(),
                                    defect: vec.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// The module differential deformed by a left-algebra cochain:
    /// `sum_j m^{j|1|0}(a^j | e | )`.
    pub fn deformed_differential(&self, a: &DeformingCochain, e: &Element) -> Element {
        let mut out = Element::zero();
        let max_left = self
            .terms
            .keys()
            .map(|k| k.left_arity)
            .max()
            .unwrap_or(0);
        for j in 0..=max_left {
            let lefts: Vec<&Element> = (0..j).map(|_| a.element()).collect();
            out.add(&self.apply(&lefts, e, &[]));
        }
        out.truncated(&self.e_max)
    }

    /// Level-by-level construction of a left bounding cochain and corrected
    /// module element killing the deformed differential of the seed.
    pub fn solve_module_element(
        &self,
        seed: usize,
    ) -> Result<ModuleSolveOutcome, AinfinityError> {
        // Hypothesis (i): the left module window starts at a positive level.
        let lambda0 = self
            .terms
            .keys()
            .filter(|k| k.right_arity == 0)
            .map(|k| k.level.clone())
            .min()
            .ok_or_else(|| {
                AinfinityError::HypothesisFailed("(i) no left module structure stored".into())
            })?;
        if !lambda0.is_positive() {
            return Err(AinfinityError::HypothesisFailed(
                "(i) the module maps do not land in a positive energy window".into(),
            ));
        }
        if !self.left.curvature().is_zero() || !self.right.curvature().is_zero() {
            return Err(AinfinityError::HypothesisFailed(
                "algebras must be tautologically unobstructed".into(),
            ));
        }
        let seed_deg = self.basis[seed].degree;
        let target_deg = seed_deg + 1;
        // Unknowns: closed degree-one left elements and module elements of
        // the seed's degree.
        let a_ones = self.left.degree_indices(1);
        let a_twos = self.left.degree_indices(2);
        let da = self.left.differential_matrix(&a_ones, &a_twos);
        let closed = crate::lattice::rat_kernel(&da, a_ones.len());
        let m_seeddeg = self.module_degree_indices(seed_deg);
        let targets = self.module_degree_indices(target_deg);
        // Columns: images of closed a-classes through the first product
        // window, then module corrections through the differential window.
        let seed_el = Element::basis(seed);
        let mut columns: Vec<Vec<BigRational>> = Vec::new();
        for cvec in &closed {
            let mut a_el = Element::zero();
            for (c, &i) in cvec.iter().zip(&a_ones) {
                if !c.is_zero() {
                    a_el.add_term(Level::zero(), i, c.clone());
                }
            }
            let img = self.apply(&[&a_el], &seed_el, &[]);
            columns.push(window_coords(&img, &lambda0, &targets));
        }
        let a_unknowns = columns.len();
        for &i in &m_seeddeg {
            let img = self.apply(&[], &Element::basis(i), &[]);
            columns.push(window_coords(&img, &lambda0, &targets));
        }
        // Hypothesis (ii): the a-columns alone must span the window.
        let a_cols: Vec<Vec<BigRational>> = columns[..a_unknowns].to_vec();
        if crate::lattice::rat_rank(&a_cols) != targets.len() {
            return Err(AinfinityError::HypothesisFailed(
                "(ii) the first-order product does not surject onto the module window".into(),
            ));
        }
        let matrix: Vec<Vec<BigRational>> = (0..targets.len())
            .map(|r| columns.iter().map(|col| col[r].clone()).collect())
            .collect();

        let mut a_acc = Element::zero();
        let mut e_acc = Element::basis(seed);
        let mut last: Option<Level> = None;
        loop {
            let a_cochain = DeformingCochain::new(a_acc.clone(), &self.left)?;
            let defect = self.deformed_differential(&a_cochain, &e_acc);
            let Some(level) = defect.valuation() else {
                return Ok(ModuleSolveOutcome::Solved {
                    cochain: a_cochain,
                    element: e_acc,
                });
            };
            if let Some(prev) = &last {
                assert!(level > *prev, "module defect level must strictly increase");
            }
            // Leading-order closedness: the undeformed differential of the
            // defect's leading part must vanish at the window level.
            let lead = defect.components()[&level].clone();
            let mut lead_el = Element::zero();
            for (i, c) in &lead {
                lead_el.add_term(Level::zero(), *i, c.clone());
            }
            let closed_check = self.apply(&[], &lead_el, &[]);
            if closed_check
                .components()
                .keys()
                .any(|l| *l < lambda0)
            {
                return Err(AinfinityError::HypothesisFailed(
                    "defect is not closed at leading order".into(),
                ));
            }
            let rhs: Vec<BigRational> = targets
                .iter()
                .map(|i| -lead.get(i).cloned().unwrap_or_else(BigRational::zero))
                .collect();
            let Some(x) = crate::lattice::rat_solve(&matrix, &rhs) else {
                return Ok(ModuleSolveOutcome::Obstructed(ObstructionReport {
                    level,
                    class: lead,
                }));
            };
            let place = &level - &lambda0;
            for (c, cvec) in x[..a_unknowns].iter().zip(&closed) {
                if c.is_zero() {
                    continue;
                }
                for (coeff, &i) in cvec.iter().zip(&a_ones) {
                    a_acc.add_term(place.clone(), i, coeff * c);
                }
            }
            for (c, &i) in x[a_unknowns..].iter().zip(&m_seeddeg) {
                if !c.is_zero() {
                    if place.is_zero() {
                        // A level-zero module correction would change the
                        // seed itself; the hypotheses exclude this.
                        return Err(AinfinityError::HypothesisFailed(
                            "(i) defect at the window floor requires a seed change".into(),
                        ));
                    }
                    e_acc.add_term(place.clone(), i, c.clone());
                }
            }
            last = Some(level);
        }
    }
}

/// Coordinates of the level-`window` slice of an element on the chosen
/// module indices.
fn window_coords(e: &Element, window: &Level, targets: &[usize]) -> Vec<BigRational> {
    let slot = e.components().get(window);
    targets
        .iter()
        .map(|i| {
            slot.and_then(|vec| vec.get(i).cloned())
                .unwrap_or_else(BigRational::zero)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub enum ModuleSolveOutcome {
    Solved {
        cochain: DeformingCochain,
        element: Element,
    },
    Obstructed(ObstructionReport),
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

fn emit_combination(out: &SparseVec, basis: &[BasisElement]) -> String {
    let mut pieces = Vec::new();
    for (i, c) in out {
        pieces.push(format!("{c} {}", basis[*i].name));
    }
    pieces.join(" + ")
}

fn parse_combination(s: &str, basis: &[BasisElement]) -> Result<SparseVec, AinfinityError> {
    let mut out = SparseVec::new();
    let s = s.trim();
    if s.is_empty() {
        return Ok(out);
    }
    for piece in s.split(" + ") {
        let (coeff, name) = piece
            .trim()
            .split_once(' ')
            .ok_or_else(|| AinfinityError::Parse(format!("bad combination piece {piece:?}")))?;
        let c: BigRational = coeff
            .parse()
            .map_err(|e| AinfinityError::Parse(format!("bad coefficient {coeff:?}: {e}")))?;
        let idx = basis
            .iter()
            .position(|b| b.name == name.trim())
            .ok_or_else(|| AinfinityError::Parse(format!("unknown basis element {name:?}")))?;
        out.insert(idx, c);
    }
    Ok(out)
}

fn emit_basis(basis: &[BasisElement]) -> String {
    basis
        .iter()
        .map(|b| format!("{}:{}", b.name, b.degree))
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_basis(s: &str) -> Result<Vec<BasisElement>, AinfinityError> {
    let mut out = Vec::new();
    for piece in s.split_whitespace() {
        let (name, deg) = piece
            .split_once(':')
            .ok_or_else(|| AinfinityError::Parse(format!("bad basis entry {piece:?}")))?;
        out.push(BasisElement {
            name: name.to_string(),
            degree: deg
                .parse()
                .map_err(|e| AinfinityError::Parse(format!("bad degree {deg:?}: {e}")))?,
        });
    }
    Ok(out)
}

/// Emit an algebra in the line-based text format.
pub fn emit_algebra(a: &GappedAlgebra) -> String {
    let mut s = String::new();
    writeln!(s, "algebra").unwrap();
    writeln!(s, "emax {}", a.e_max).unwrap();
    writeln!(s, "basis {}", emit_basis(&a.basis)).unwrap();
    for (key, out) in &a.terms {
        let inputs = key
            .inputs
            .iter()
            .map(|&i| a.basis[i].name.clone())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(
            s,
            "term {} @ {} : {} -> {}",
            key.arity,
            key.level,
            inputs,
            emit_combination(out, &a.basis)
        )
        .unwrap();
    }
    s
}

/// Parse the line-based algebra format.
pub fn parse_algebra(input: &str) -> Result<GappedAlgebra, AinfinityError> {
    let mut lines = input.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| AinfinityError::Parse("empty input".into()))?;
    if header != "algebra" {
        return Err(AinfinityError::Parse(format!(
            "expected 'algebra' header, found {header:?}"
        )));
    }
    let mut e_max: Option<Level> = None;
    let mut basis: Vec<BasisElement> = Vec::new();
    let mut terms: Vec<(TermKey, SparseVec)> = Vec::new();
    for line in lines {
        if let Some(rest) = line.strip_prefix("emax ") {
            e_max = Some(rest.parse().map_err(|e| {
                AinfinityError::Parse(format!("bad emax {rest:?}: {e}"))
            })?);
        } else if let Some(rest) = line.strip_prefix("basis") {
            basis = parse_basis(rest)?;
        } else if let Some(rest) = line.strip_prefix("term ") {
            let (head, comb) = rest
                .split_once(" -> ")
                .ok_or_else(|| AinfinityError::Parse(format!("bad term line {line:?}")))?;
            let (shape, inputs_str) = head
                .split_once(" : ")
                .ok_or_else(|| AinfinityError::Parse(format!("bad term head {head:?}")))?;
            let (arity_str, level_str) = shape
                .split_once(" @ ")
                .ok_or_else(|| AinfinityError::Parse(format!("bad term shape {shape:?}")))?;
            let arity: usize = arity_str
                .trim()
                .parse()
                .map_err(|e| AinfinityError::Parse(format!("bad arity: {e}")))?;
            let level: Level = level_str
                .trim()
                .parse()
                .map_err(|e| AinfinityError::Parse(format!("bad level: {e}")))?;
            let mut inputs = Vec::new();
            for name in inputs_str.split_whitespace() {
                let idx = basis
                    .iter()
                    .position(|b| b.name == name)
                    .ok_or_else(|| AinfinityError::Parse(format!("unknown input {name:?}")))?;
                inputs.push(idx);
            }
            let out = parse_combination(comb, &basis)?;
            terms.push((TermKey { arity, level, inputs }, out));
        } else {
            return Err(AinfinityError::Parse(format!("unrecognized line {line:?}")));
        }
    }
    let e_max = e_max.ok_or_else(|| AinfinityError::Parse("missing emax".into()))?;
    GappedAlgebra::new(basis, terms, e_max)
}

/// Emit a bimodule (with its two algebras inline) in the text format.
pub fn emit_bimodule(m: &GappedBimodule) -> String {
    let mut s = String::new();
    writeln!(s, "bimodule").unwrap();
    writeln!(s, "emax {}", m.e_max).unwrap();
    writeln!(s, "left-basis {}", emit_basis(&m.left.basis)).unwrap();
    for (key, out) in &m.left.terms {
        let inputs = key
            .inputs
            .iter()
            .map(|&i| m.left.basis[i].name.clone())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(
            s,
            "left-term {} @ {} : {} -> {}",
            key.arity,
            key.level,
            inputs,
            emit_combination(out, &m.left.basis)
        )
        .unwrap();
    }
    writeln!(s, "right-basis {}", emit_basis(&m.right.basis)).unwrap();
    for (key, out) in &m.right.terms {
        let inputs = key
            .inputs
            .iter()
            .map(|&i| m.right.basis[i].name.clone())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(
            s,
            "right-term {} @ {} : {} -> {}",
            key.arity,
            key.level,
            inputs,
            emit_combination(out, &m.right.basis)
        )
        .unwrap();
    }
    writeln!(s, "module-basis {}", emit_basis(&m.basis)).unwrap();
    for (key, out) in &m.terms {
        let lefts = key
            .left_inputs
            .iter()
            .map(|&i| m.left.basis[i].name.clone())
            .collect::<Vec<_>>()
            .join(" ");
        let rights = key
            .right_inputs
            .iter()
            .map(|&i| m.right.basis[i].name.clone())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(
            s,
            "module-term {}|{} @ {} : {} | {} | {} -> {}",
            key.left_arity,
            key.right_arity,
            key.level,
            lefts,
            m.basis[key.module_input].name,
            rights,
            emit_combination(out, &m.basis)
        )
        .unwrap();
    }
    s
}

/// Parse the bimodule text format.
pub fn parse_bimodule(input: &str) -> Result<GappedBimodule, AinfinityError> {
    let mut lines = input.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| AinfinityError::Parse("empty input".into()))?;
    if header != "bimodule" {
        return Err(AinfinityError::Parse(format!(
            "expected 'bimodule' header, found {header:?}"
        )));
    }
    let mut e_max: Option<Level> = None;
    let mut left_basis = Vec::new();
    let mut right_basis = Vec::new();
    let mut module_basis = Vec::new();
    let mut left_terms: Vec<(TermKey, SparseVec)> = Vec::new();
    let mut right_terms: Vec<(TermKey, SparseVec)> = Vec::new();
    let mut module_terms: Vec<(ModuleTermKey, SparseVec)> = Vec::new();
    let parse_term = |line: &str,
                      basis: &[BasisElement]|
     -> Result<(TermKey, SparseVec), AinfinityError> {
        let (head, comb) = line
            .split_once(" -> ")
            .ok_or_else(|| AinfinityError::Parse(format!("bad term line {line:?}")))?;
        let (shape, inputs_str) = head
            .split_once(" : ")
            .ok_or_else(|| AinfinityError::Parse(format!("bad term head {head:?}")))?;
        let (arity_str, level_str) = shape
            .split_once(" @ ")
            .ok_or_else(|| AinfinityError::Parse(format!("bad term shape {shape:?}")))?;
        let arity: usize = arity_str
            .trim()
            .parse()
            .map_err(|e| AinfinityError::Parse(format!("bad arity: {e}")))?;
        let level: Level = level_str
            .trim()
            .parse()
            .map_err(|e| AinfinityError::Parse(format!("bad level: {e}")))?;
        let mut inputs = Vec::new();
        for name in inputs_str.split_whitespace() {
            let idx = basis
                .iter()
                .position(|b| b.name == name)
                .ok_or_else(|| AinfinityError::Parse(format!("unknown input {name:?}")))?;
            inputs.push(idx);
        }
        let out = parse_combination(comb, basis)?;
        Ok((TermKey { arity, level, inputs }, out))
    };
    for line in lines {
        if let Some(rest) = line.strip_prefix("emax ") {
            e_max = Some(rest.parse().map_err(|e| {
                AinfinityError::Parse(format!("bad emax {rest:?}: {e}"))
            })?);
        } else if let Some(rest) = line.strip_prefix("left-basis") {
            left_basis = parse_basis(rest)?;
        } else if let Some(rest) = line.strip_prefix("right-basis") {
            right_basis = parse_basis(rest)?;
        } else if let Some(rest) = line.strip_prefix("module-basis") {
            module_basis = parse_basis(rest)?;
        } else if let Some(rest) = line.strip_prefix("left-term ") {
            left_terms.push(parse_term(rest, &left_basis)?);
        } else if let Some(rest) = line.strip_prefix("right-term ") {
            right_terms.push(parse_term(rest, &right_basis)?);
        } else if let Some(rest) = line.strip_prefix("module-term ") {
            let (head, comb) = rest
                .split_once(" -> ")
                .ok_or_else(|| AinfinityError::Parse(format!("bad module term {rest:?}")))?;
            let (shape, inputs_str) = head
                .split_once(" : ")
                .ok_or_else(|| AinfinityError::Parse(format!("bad module head {head:?}")))?;
            let (arities, level_str) = shape
                .split_once(" @ ")
                .ok_or_else(|| AinfinityError::Parse(format!("bad module shape {shape:?}")))?;
            let (k1s, k2s) = arities
                .split_once('|')
                .ok_or_else(|| AinfinityError::Parse(format!("bad module arities {arities:?}")))?;
            let left_arity: usize = k1s
                .trim()
                .parse()
                .map_err(|e| AinfinityError::Parse(format!("bad arity: {e}")))?;
            let right_arity: usize = k2s
                .trim()
                .parse()
                .map_err(|e| AinfinityError::Parse(format!("bad arity: {e}")))?;
            let level: Level = level_str
                .trim()
                .parse()
                .map_err(|e| AinfinityError::Parse(format!("bad level: {e}")))?;
            let parts: Vec<&str> = inputs_str.split('|').collect();
            if parts.len() != 3 {
                return Err(AinfinityError::Parse(format!(
                    "module inputs must have three segments: {inputs_str:?}"
                )));
            }
            let lookup = |names: &str, basis: &[BasisElement]| -> Result<Vec<usize>, AinfinityError> {
                names
                    .split_whitespace()
                    .map(|n| {
                        basis
                            .iter()
                            .position(|b| b.name == n)
                            .ok_or_else(|| AinfinityError::Parse(format!("unknown input {n:?}")))
                    })
                    .collect()
            };
            let left_inputs = lookup(parts[0], &left_basis)?;
            let m_names = lookup(parts[1], &module_basis)?;
            if m_names.len() != 1 {
                return Err(AinfinityError::Parse(
                    "module segment must name exactly one element".into(),
                ));
            }
            let right_inputs = lookup(parts[2], &right_basis)?;
            let out = parse_combination(comb, &module_basis)?;
            module_terms.push((
                ModuleTermKey {
                    left_arity,
                    right_arity,
                    level,
                    left_inputs,
                    module_input: m_names[0],
                    right_inputs,
                },
                out,
            ));
        } else {
            return Err(AinfinityError::Parse(format!("unrecognized line {line:?}")));
        }
    }
    let e_max = e_max.ok_or_else(|| AinfinityError::Parse("missing emax".into()))?;
    let left = GappedAlgebra::new(left_basis, left_terms, e_max.clone())?;
    let right = GappedAlgebra::new(right_basis, right_terms, e_max.clone())?;
    GappedBimodule::new(left, right, module_basis, module_terms, e_max)
}

// ---------------------------------------------------------------------------
// Standard constructions used by fixtures
// ---------------------------------------------------------------------------

/// The exterior algebra on `r` degree-one generators with the sign-twisted
/// wedge product (the convention compatible with the quadratic relation sign
/// used here), optional curvature terms, and no differential.
///
/// Basis elements are indexed by subsets of `0..r`, named like `x13` (the
/// empty set is the unit `1`, which has no stored products with itself: the
/// unit is not special-cased, products are stored on all pairs).
pub fn exterior_algebra(
    r: usize,
    curvature: &[(Level, Vec<usize>, BigRational)],
    e_max: Level,
) -> GappedAlgebra {
    exterior_algebra_impl(r, curvature, e_max, true)
}

/// The reduced (non-unital) exterior algebra: the same products restricted to
/// nonempty index sets. Used as a Morse-style coefficient algebra where the
/// unit plays no role.
pub fn exterior_algebra_reduced(r: usize, e_max: Level) -> GappedAlgebra {
    exterior_algebra_impl(r, &[], e_max, false)
}

fn exterior_algebra_impl(
    r: usize,
    curvature: &[(Level, Vec<usize>, BigRational)],
    e_max: Level,
    with_unit: bool,
) -> GappedAlgebra {
    let start = if with_unit { 0 } else { 1 };
    let all_subsets: Vec<Vec<usize>> = (start..(1usize << r))
        .map(|mask| (0..r).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    let name = |s: &[usize]| -> String {
        if s.is_empty() {
            "1".to_string()
        } else {
            let mut n = "x".to_string();
            for i in s {
                write!(n, "{i}").unwrap();
            }
            n
        }
    };
    let basis: Vec<BasisElement> = all_subsets
        .iter()
        .map(|s| BasisElement {
            name: name(s),
            degree: s.len() as i64,
        })
        .collect();
    let index_of = |s: &[usize]| -> usize {
        let mask: usize = s.iter().map(|i| 1usize << i).sum();
        mask - start
    };
    // Wedge with shuffle sign; None when indices overlap.
    let wedge = |a: &[usize], b: &[usize]| -> Option<(usize, BigRational)> {
        let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
        let mut sign = 1i64;
        // Count inversions while insertion-sorting.
        for i in 1..merged.len() {
            let mut j = i;
            while j > 0 && merged[j - 1] > merged[j] {
                merged.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        for w in merged.windows(2) {
            if w[0] == w[1] {
                return None;
            }
        }
        let c = if sign > 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        Some((index_of(&merged), c))
    };
    let mut terms: Vec<(TermKey, SparseVec)> = Vec::new();
    for a in &all_subsets {
        for b in &all_subsets {
            let Some((out, shuffle)) = wedge(a, b) else { continue };
            // m^2(x, y) = (-1)^{deg x} x ^ y.
            let twist = if a.len() % 2 == 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            let coeff = shuffle * twist;
            terms.push((
                TermKey {
                    arity: 2,
                    level: Level::zero(),
                    inputs: vec![index_of(a), index_of(b)],
                },
                SparseVec::from([(out, coeff)]),
            ));
        }
    }
    for (level, subset, coeff) in curvature {
        terms.push((
            TermKey {
                arity: 0,
                level: level.clone(),
                inputs: vec![],
            },
            SparseVec::from([(index_of(subset), coeff.clone())]),
        ));
    }
    GappedAlgebra::new(basis, terms, e_max).expect("exterior algebra is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    fn lvl(n: i64) -> Level {
        BigRational::from_integer(n.into())
    }

    fn emax() -> Level {
        lvl(10)
    }

    /// Two-element curved fixture: e (deg 1), f (deg 2), m^1(e) = f,
    /// curvature T f.
    fn curved_ef() -> GappedAlgebra {
        GappedAlgebra::new(
            vec![
                BasisElement { name: "e".into(), degree: 1 },
                BasisElement { name: "f".into(), degree: 2 },
            ],
            vec![
                (
                    TermKey { arity: 1, level: lvl(0), inputs: vec![0] },
                    SparseVec::from([(1, ratio(1))]),
                ),
                (
                    TermKey { arity: 0, level: lvl(1), inputs: vec![] },
                    SparseVec::from([(1, ratio(1))]),
                ),
            ],
            emax(),
        )
        .unwrap()
    }

    #[test]
    fn monoid_levels() {
        let g = EnergyMonoid::new(vec![rat(1, 2), lvl(3)]).unwrap();
        let levels = g.realized_levels(&lvl(2));
        assert_eq!(levels, vec![lvl(0), rat(1, 2), lvl(1), rat(3, 2), lvl(2)]);
        assert!(EnergyMonoid::new(vec![lvl(0)]).is_err());
    }

    #[test]
    fn exterior_passes_relations() {
        // One degree-one generator with the product alone.
        let single = exterior_algebra(1, &[], emax());
        assert!(single.check_relations(4).is_empty());
        let a = exterior_algebra(2, &[], emax());
        assert!(a.check_relations(4).is_empty());
        // With curvature on the top class it still passes.
        let b = exterior_algebra(2, &[(lvl(1), vec![0, 1], ratio(3))], emax());
        assert!(b.check_relations(4).is_empty());
    }

    #[test]
    fn broken_differential_reports_violation() {
        // m^1(e) = f, m^1(f) = g with no compensating terms: d^2 != 0.
        let a = GappedAlgebra::new(
            vec![
                BasisElement { name: "e".into(), degree: 1 },
                BasisElement { name: "f".into(), degree: 2 },
                BasisElement { name: "g".into(), degree: 3 },
            ],
            vec![
                (
                    TermKey { arity: 1, level: lvl(0), inputs: vec![0] },
                    SparseVec::from([(1, ratio(1))]),
                ),
                (
                    TermKey { arity: 1, level: lvl(0), inputs: vec![1] },
                    SparseVec::from([(2, ratio(1))]),
                ),
            ],
            emax(),
        )
        .unwrap();
        let violations = a.check_relations(2);
        assert!(!violations.is_empty());
        assert!(violations.iter().any(|v| v.arity == 1));
    }

    #[test]
    fn deform_by_zero_is_identity() {
        let a = curved_ef();
        let d = DeformingCochain::zero();
        assert_eq!(a.deform(&d), a);
    }

    #[test]
    fn deformation_composition_law() {
        let a = exterior_algebra(2, &[(lvl(1), vec![0, 1], ratio(1))], emax());
        let x1 = a.basis_index("x0").unwrap();
        let x2 = a.basis_index("x1").unwrap();
        let d1 = DeformingCochain::new(Element::single(lvl(1), x1, ratio(2)), &a).unwrap();
        let d2 = DeformingCochain::new(Element::single(rat(3, 2), x2, ratio(-1)), &a).unwrap();
        let mut sum = d1.element().clone();
        sum.add(d2.element());
        let d12 = DeformingCochain::new(sum, &a).unwrap();
        let lhs = a.deform(&d1).deform(&d2);
        let rhs = a.deform(&d12);
        assert_eq!(lhs, rhs);
        // Deformation preserves the relations.
        assert!(lhs.check_relations(4).is_empty());
    }

    #[test]
    fn deformed_differential_expansion() {
        // b = c T x1: new m^1(y) = c T (m^2(x1, y) + m^2(y, x1)), which for
        // the exterior algebra cancels by graded commutativity; the equality
        // with the expansion oracle is the contract either way.
        let a = exterior_algebra(2, &[], emax());
        let x1 = a.basis_index("x0").unwrap();
        let y = a.basis_index("x1").unwrap();
        let c = rat(5, 3);
        let d = DeformingCochain::new(Element::single(lvl(1), x1, c.clone()), &a).unwrap();
        let deformed = a.deform(&d);
        let got = deformed.apply(&[&Element::basis(y)]);
        let mut expect = a.apply(&[&Element::basis(x1), &Element::basis(y)]);
        expect.add(&a.apply(&[&Element::basis(y), &Element::basis(x1)]));
        let expect = expect.scaled(&c).shifted(&lvl(1));
        assert_eq!(got, expect);
        // A non-commuting witness: the curved two-element algebra picks up a
        // curvature shift m^1(e) under the same expansion.
        let b = curved_ef();
        let de = DeformingCochain::new(Element::single(lvl(2), 0, c.clone()), &b).unwrap();
        let curv = b.deform(&de).curvature();
        let mut want = b.curvature();
        want.add(&b.apply(&[&Element::basis(0)]).scaled(&c).shifted(&lvl(2)));
        assert_eq!(curv, want);
        assert!(!curv.is_zero());
    }

    #[test]
    fn curvature_reporting() {
        let a = exterior_algebra(2, &[], emax());
        assert!(a.curvature().is_zero());
        let b = curved_ef();
        let curv = b.curvature();
        assert_eq!(curv.valuation(), Some(lvl(1)));
    }

    #[test]
    fn ideal_classification() {
        let a = exterior_algebra(2, &[(lvl(1), vec![0, 1], ratio(1))], emax());
        assert_eq!(a.ideal_check(&IdealSpec::PositivePart), IdealVerdict::StrongIdeal);
        // Full algebra.
        let full: BTreeSet<usize> = (0..a.basis().len()).collect();
        assert_eq!(a.ideal_check(&IdealSpec::Span(full)), IdealVerdict::StrongIdeal);
        // The span of x0 and x0^x1 absorbs products and contains the
        // curvature (which sits on x01).
        let x0 = a.basis_index("x0").unwrap();
        let x01 = a.basis_index("x01").unwrap();
        let span: BTreeSet<usize> = [x0, x01].into_iter().collect();
        assert_eq!(a.ideal_check(&IdealSpec::Span(span)), IdealVerdict::StrongIdeal);
        // A non-closed subspace.
        let bad: BTreeSet<usize> = [x0].into_iter().collect();
        assert_eq!(a.ideal_check(&IdealSpec::Span(bad)), IdealVerdict::NotIdeal);
    }

    #[test]
    fn weak_but_not_strong() {
        // Zero products, curvature T g outside the span of f.
        let b = GappedAlgebra::new(
            vec![
                BasisElement { name: "e".into(), degree: 1 },
                BasisElement { name: "f".into(), degree: 2 },
                BasisElement { name: "g".into(), degree: 2 },
            ],
            vec![(
                TermKey { arity: 0, level: lvl(1), inputs: vec![] },
                SparseVec::from([(2, ratio(1))]),
            )],
            emax(),
        )
        .unwrap();
        let span: BTreeSet<usize> = [1].into_iter().collect();
        assert_eq!(b.ideal_check(&IdealSpec::Span(span.clone())), IdealVerdict::WeakIdeal);
        let q = b.quotient(&IdealSpec::Span(span)).unwrap();
        assert!(!q.curvature().is_zero());
    }

    #[test]
    fn quotient_by_positive_part_is_level_zero() {
        let a = curved_ef();
        let q = a.quotient(&IdealSpec::PositivePart).unwrap();
        assert!(q.curvature().is_zero());
        assert_eq!(q.terms().len(), 1);
        // Quotient by the full algebra is zero.
        let full: BTreeSet<usize> = (0..a.basis().len()).collect();
        let z = a.quotient(&IdealSpec::Span(full)).unwrap();
        assert!(z.basis().is_empty());
        assert!(z.curvature().is_zero());
    }

    #[test]
    fn quotient_by_strong_ideal_uncurved() {
        let a = exterior_algebra(2, &[(lvl(1), vec![0, 1], ratio(1))], emax());
        let x0 = a.basis_index("x0").unwrap();
        let x01 = a.basis_index("x01").unwrap();
        let span: BTreeSet<usize> = [x0, x01].into_iter().collect();
        let q = a.quotient(&IdealSpec::Span(span)).unwrap();
        assert!(q.curvature().is_zero());
    }

    #[test]
    fn bounding_cochain_one_step() {
        let b = curved_ef();
        let span: BTreeSet<usize> = [1].into_iter().collect();
        let out = b
            .solve_bounding_cochain(&IdealSpec::Span(span), SolveMode::Guarded)
            .unwrap();
        match out {
            SolveOutcome::Solved { cochain, trace } => {
                // b = -T e.
                let expect = Element::single(lvl(1), 0, ratio(-1));
                assert_eq!(cochain.element(), &expect);
                assert!(b.deform(&cochain).curvature().is_zero());
                assert!(!trace.is_empty());
            }
            SolveOutcome::Obstructed(_) => panic!("should solve"),
        }
    }

    #[test]
    fn uncurved_gives_zero_cochain() {
        let a = exterior_algebra(2, &[], emax());
        let out = a
            .solve_bounding_cochain(&IdealSpec::PositivePart, SolveMode::Generic)
            .unwrap();
        match out {
            SolveOutcome::Solved { cochain, .. } => assert!(cochain.element().is_zero()),
            SolveOutcome::Obstructed(_) => panic!("should solve"),
        }
    }

    #[test]
    fn obstruction_reported() {
        // Curvature T f with no antiderivative in sight.
        let b = GappedAlgebra::new(
            vec![BasisElement { name: "f".into(), degree: 2 }],
            vec![(
                TermKey { arity: 0, level: lvl(1), inputs: vec![] },
                SparseVec::from([(0, ratio(1))]),
            )],
            emax(),
        )
        .unwrap();
        let out = b
            .solve_bounding_cochain(&IdealSpec::PositivePart, SolveMode::Generic)
            .unwrap();
        match out {
            SolveOutcome::Obstructed(report) => {
                assert_eq!(report.level, lvl(1));
                assert_eq!(report.class, SparseVec::from([(0, ratio(1))]));
            }
            SolveOutcome::Solved { .. } => panic!("must obstruct"),
        }
        // Guarded mode refuses up front: hypothesis (iii) fails.
        let err = b
            .solve_bounding_cochain(&IdealSpec::PositivePart, SolveMode::Guarded)
            .unwrap_err();
        assert!(matches!(err, AinfinityError::HypothesisFailed(_)));
    }

    #[test]
    fn span_ideal_hypothesis_failure_detected() {
        // Curvature hits a class with no antiderivative: the connecting map
        // cannot surject, and the generic solve pins the class at its level.
        let b = GappedAlgebra::new(
            vec![
                BasisElement { name: "e".into(), degree: 1 },
                BasisElement { name: "f".into(), degree: 2 },
                BasisElement { name: "g".into(), degree: 2 },
            ],
            vec![
                (
                    TermKey { arity: 1, level: lvl(0), inputs: vec![0] },
                    SparseVec::from([(1, ratio(1))]),
                ),
                (
                    TermKey { arity: 0, level: lvl(1), inputs: vec![] },
                    SparseVec::from([(2, ratio(1))]),
                ),
            ],
            emax(),
        )
        .unwrap();
        let span: BTreeSet<usize> = [1, 2].into_iter().collect();
        assert_eq!(b.ideal_check(&IdealSpec::Span(span.clone())), IdealVerdict::StrongIdeal);
        let err = b
            .solve_bounding_cochain(&IdealSpec::Span(span.clone()), SolveMode::Guarded)
            .unwrap_err();
        assert!(matches!(err, AinfinityError::HypothesisFailed(msg) if msg.contains("(iii)")));
        match b
            .solve_bounding_cochain(&IdealSpec::Span(span), SolveMode::Generic)
            .unwrap()
        {
            SolveOutcome::Obstructed(report) => {
                assert_eq!(report.level, lvl(1));
                assert_eq!(report.class, SparseVec::from([(2, ratio(1))]));
            }
            SolveOutcome::Solved { .. } => panic!("must obstruct"),
        }
    }

    #[test]
    fn free_module_relations() {
        // Free rank-one module over the exterior algebra: the module is the
        // algebra itself with the sign-twisted multiplication as the left
        // action.
        let a = exterior_algebra(2, &[], emax());
        let right = GappedAlgebra::new(vec![], vec![], emax()).unwrap();
        let basis = a.basis().to_vec();
        let mut terms = Vec::new();
        for (key, out) in a.terms() {
            if key.arity != 2 {
                continue;
            }
            terms.push((
                ModuleTermKey {
                    left_arity: 1,
                    right_arity: 0,
                    level: key.level.clone(),
                    left_inputs: vec![key.inputs[0]],
                    module_input: key.inputs[1],
                    right_inputs: vec![],
                },
                out.clone(),
            ));
        }
        let m = GappedBimodule::new(a, right, basis, terms, emax()).unwrap();
        assert!(m.check_relations(2, 0).is_empty());
    }

    #[test]
    fn module_with_broken_differential() {
        // d(x) = y, d(y) = z with no compensation: d^2(x) = z != 0.
        let a = GappedAlgebra::new(vec![], vec![], emax()).unwrap();
        let b = GappedAlgebra::new(vec![], vec![], emax()).unwrap();
        let m = GappedBimodule::new(
            a,
            b,
            vec![
                BasisElement { name: "x".into(), degree: 0 },
                BasisElement { name: "y".into(), degree: 1 },
                BasisElement { name: "z".into(), degree: 2 },
            ],
            vec![
                (
                    ModuleTermKey {
                        left_arity: 0,
                        right_arity: 0,
                        level: lvl(1),
                        left_inputs: vec![],
                        module_input: 0,
                        right_inputs: vec![],
                    },
                    SparseVec::from([(1, ratio(1))]),
                ),
                (
                    ModuleTermKey {
                        left_arity: 0,
                        right_arity: 0,
                        level: lvl(1),
                        left_inputs: vec![],
                        module_input: 1,
                        right_inputs: vec![],
                    },
                    SparseVec::from([(2, ratio(1))]),
                ),
            ],
            emax(),
        )
        .unwrap();
        let violations = m.check_relations(0, 0);
        assert!(!violations.is_empty());
    }

    #[test]
    fn algebra_text_roundtrip() {
        let a = curved_ef();
        let text = emit_algebra(&a);
        let parsed = parse_algebra(&text).unwrap();
        assert_eq!(parsed, a);
        assert_eq!(emit_algebra(&parsed), text);
    }

    #[test]
    fn bimodule_text_roundtrip() {
        let a = exterior_algebra(1, &[], emax());
        let right = GappedAlgebra::new(vec![], vec![], emax()).unwrap();
        let m = GappedBimodule::new(
            a.clone(),
            right,
            vec![
                BasisElement { name: "m0".into(), degree: 0 },
                BasisElement { name: "m1".into(), degree: 1 },
            ],
            vec![(
                ModuleTermKey {
                    left_arity: 1,
                    right_arity: 0,
                    level: rat(1, 2),
                    left_inputs: vec![a.basis_index("x0").unwrap()],
                    module_input: 0,
                    right_inputs: vec![],
                },
                SparseVec::from([(1, rat(-2, 3))]),
            )],
            emax(),
        )
        .unwrap();
        let text = emit_bimodule(&m);
        let parsed = parse_bimodule(&text).unwrap();
        assert_eq!(parsed, m);
        assert_eq!(emit_bimodule(&parsed), text);
    }
}
