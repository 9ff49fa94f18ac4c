//! Concrete semigroup dynamical systems and representation pairs `(π, V)`.
//!
//! A [`DynSystem`] fixes the acting monoid, the generator alphabet of the
//! coefficient algebra, and the action `α` on generators (a generator maps
//! to a formal word in generators). A [`RepPair`] realizes `π` on generators
//! and `V` on monoid elements as exact lazy operators, carrying capability
//! flags that are validated by the check operations, never assumed.

mod c00;
mod checks;
mod fixtures;

pub use c00::C00Element;
pub use checks::{
    boundary_relation_check, check_covariance, check_right_covariance, covariant_on_window,
    right_covariant_on_window,
};
pub use fixtures::{
    axb_ideal_projection, corrupted_action_axb, cuntz_uhf, direct_sum, left_regular_axb,
    tensor_defect, trivial_base, trivial_nat,
};

use crate::error::{LabError, Result};
use crate::ideal::{intersect, Coset, ConstructibleFamily};
use crate::operator::{grow_window, BasisIndex, LinOp};
use crate::report::{CheckRecord, CheckReport};
use crate::scalar::Scalar;
use crate::semigroup::{enumerate, MonoidDescriptor, SemigroupElement};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

/// `0` for a holding relation, `1` for a violated one.
fn bool_residual(ok: bool) -> BigRational {
    if ok {
        BigRational::zero()
    } else {
        BigRational::one()
    }
}

/// A generator of the coefficient algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgebraGenerator {
    /// A scalar multiple of the unit.
    Scalar(Scalar),
    /// The unitary `u^x`, `x ∈ ℤ`.
    Unitary(i64),
    /// The range projection `e_I` of the monoid ideal with modulus `d`.
    Projection(i64),
    /// The matrix unit `W_μ W_ν^*` with `|μ| = |ν|`.
    UhfUnit { mu: Vec<u8>, nu: Vec<u8> },
}

impl AlgebraGenerator {
    pub fn one() -> Self {
        AlgebraGenerator::Scalar(Scalar::one())
    }

    /// The adjoint generator.
    pub fn star(&self) -> Self {
        match self {
            AlgebraGenerator::Scalar(c) => AlgebraGenerator::Scalar(c.conj()),
            AlgebraGenerator::Unitary(x) => AlgebraGenerator::Unitary(-x),
            AlgebraGenerator::Projection(d) => AlgebraGenerator::Projection(*d),
            AlgebraGenerator::UhfUnit { mu, nu } => AlgebraGenerator::UhfUnit {
                mu: nu.clone(),
                nu: mu.clone(),
            },
        }
    }
}

impl fmt::Display for AlgebraGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraGenerator::Scalar(c) => write!(f, "{c}"),
            AlgebraGenerator::Unitary(x) => write!(f, "u^{x}"),
            AlgebraGenerator::Projection(d) => write!(f, "e[{d}]"),
            AlgebraGenerator::UhfUnit { mu, nu } => {
                write!(f, "W(")?;
                for c in mu {
                    write!(f, "{c}")?;
                }
                write!(f, "|")?;
                for c in nu {
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A formal product of generators; the empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<AlgebraGenerator>);

impl Word {
    pub fn identity() -> Self {
        Word(vec![])
    }

    pub fn single(g: AlgebraGenerator) -> Self {
        Word(vec![g])
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend(other.0.iter().cloned());
        Word(letters)
    }

    /// The adjoint word: letters reversed and starred.
    pub fn star(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.star()).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Which coefficient algebra a system carries.
#[derive(Clone, Debug)]
pub enum SystemKind {
    /// `(ℂ, P, id)`.
    TrivialScalar,
    /// The span of `u^x e_I u^y` over `ℤ⋊M`, acted on by
    /// `α_a(u^x e_I u^y) = u^{ax} e_{aI} u^{ay}`.
    AxbAlgebra {
        family: ConstructibleFamily,
        /// Replaces the action on unitaries by `u^x ↦ u^{ax}`, the negative
        /// fixture that drops the range projection.
        corrupted: bool,
    },
    /// The matrix-unit core of the k-isometry algebra, acted on by
    /// prefixing with the first isometry.
    CuntzUhf { k: u8 },
}

/// A semigroup dynamical system: acting monoid plus generator action.
#[derive(Clone, Debug)]
pub struct DynSystem {
    pub monoid: Arc<MonoidDescriptor>,
    pub kind: SystemKind,
}

impl DynSystem {
    pub fn new(monoid: Arc<MonoidDescriptor>, kind: SystemKind) -> Result<Self> {
        if !monoid.may_act() {
            return Err(LabError::InvalidDescriptor(
                "the ax+b semigroup indexes bases but never acts".into(),
            ));
        }
        Ok(DynSystem { monoid, kind })
    }

    /// Two systems agree enough to direct-sum their representations.
    pub fn compatible(&self, other: &DynSystem) -> bool {
        if self.monoid != other.monoid {
            return false;
        }
        match (&self.kind, &other.kind) {
            (SystemKind::TrivialScalar, SystemKind::TrivialScalar) => true,
            (
                SystemKind::AxbAlgebra { family, corrupted },
                SystemKind::AxbAlgebra {
                    family: f2,
                    corrupted: c2,
                },
            ) => family.moduli == f2.moduli && corrupted == c2,
            (SystemKind::CuntzUhf { k }, SystemKind::CuntzUhf { k: k2 }) => k == k2,
            _ => false,
        }
    }

    pub fn validate_generator(&self, g: &AlgebraGenerator) -> Result<()> {
        match (&self.kind, g) {
            (_, AlgebraGenerator::Scalar(_)) => Ok(()),
            (SystemKind::AxbAlgebra { .. }, AlgebraGenerator::Unitary(_)) => Ok(()),
            (SystemKind::AxbAlgebra { family, .. }, AlgebraGenerator::Projection(d)) => {
                if family.contains(*d) {
                    Ok(())
                } else {
                    Err(LabError::LabelOutsideSystem(format!(
                        "projection modulus {d} is not in the constructible family (bound {})",
                        family.modulus_bound
                    )))
                }
            }
            (SystemKind::CuntzUhf { k }, AlgebraGenerator::UhfUnit { mu, nu }) => {
                if mu.len() != nu.len() {
                    return Err(LabError::LabelOutsideSystem(
                        "matrix unit needs equal-length words".into(),
                    ));
                }
                if mu.iter().chain(nu).any(|&c| c == 0 || c > *k) {
                    return Err(LabError::LabelOutsideSystem(format!(
                        "letter outside 1..={k}"
                    )));
                }
                Ok(())
            }
            (_, g) => Err(LabError::LabelOutsideSystem(format!(
                "generator {g} does not belong to this system"
            ))),
        }
    }

    /// `α_p` on a generator, as a word.
    pub fn act(&self, p: &SemigroupElement, g: &AlgebraGenerator) -> Result<Word> {
        self.validate_generator(g)?;
        if p.monoid() != &self.monoid {
            return Err(LabError::DescriptorMismatch(
                "acting element from the wrong monoid".into(),
            ));
        }
        let word = match (&self.kind, g) {
            (SystemKind::TrivialScalar, AlgebraGenerator::Scalar(c)) => {
                Word::single(AlgebraGenerator::Scalar(c.clone()))
            }
            (SystemKind::AxbAlgebra { corrupted, .. }, g) => {
                let a = p.value();
                match g {
                    AlgebraGenerator::Scalar(c) => {
                        let mut letters = vec![AlgebraGenerator::Scalar(c.clone())];
                        if a != 1 && !corrupted {
                            letters.push(AlgebraGenerator::Projection(a));
                        }
                        Word(letters)
                    }
                    AlgebraGenerator::Unitary(x) => {
                        let mut letters = vec![AlgebraGenerator::Unitary(a * x)];
                        if a != 1 && !corrupted {
                            letters.push(AlgebraGenerator::Projection(a));
                        }
                        Word(letters)
                    }
                    AlgebraGenerator::Projection(d) => {
                        let target = AlgebraGenerator::Projection(a * d);
                        self.validate_generator(&target)?;
                        Word::single(target)
                    }
                    _ => unreachable!("validated above"),
                }
            }
            (SystemKind::CuntzUhf { .. }, g) => {
                let n = p.value() as usize;
                let ones = vec![1u8; n];
                match g {
                    AlgebraGenerator::Scalar(c) => {
                        let mut letters = vec![AlgebraGenerator::Scalar(c.clone())];
                        if n > 0 {
                            letters.push(AlgebraGenerator::UhfUnit {
                                mu: ones.clone(),
                                nu: ones,
                            });
                        }
                        Word(letters)
                    }
                    AlgebraGenerator::UhfUnit { mu, nu } => {
                        let prefix = |w: &[u8]| {
                            let mut out = ones.clone();
                            out.extend_from_slice(w);
                            out
                        };
                        Word::single(AlgebraGenerator::UhfUnit {
                            mu: prefix(mu),
                            nu: prefix(nu),
                        })
                    }
                    _ => unreachable!("validated above"),
                }
            }
            _ => unreachable!("validated above"),
        };
        Ok(word)
    }

    /// `α_p` extended multiplicatively over a word; the empty word maps to
    /// `α_p(1)`, which is not the unit unless `p` is invertible.
    pub fn act_word(&self, p: &SemigroupElement, w: &Word) -> Result<Word> {
        if w.is_identity() {
            return Ok(self.unit_image(p));
        }
        let mut letters = vec![];
        for g in &w.0 {
            letters.extend(self.act(p, g)?.0);
        }
        Ok(Word(letters))
    }

    /// The word representing `α_p(1)`.
    pub fn unit_image(&self, p: &SemigroupElement) -> Word {
        match &self.kind {
            SystemKind::TrivialScalar => Word::identity(),
            SystemKind::AxbAlgebra { corrupted, .. } => {
                let a = p.value();
                if a == 1 || *corrupted {
                    Word::identity()
                } else {
                    Word::single(AlgebraGenerator::Projection(a))
                }
            }
            SystemKind::CuntzUhf { .. } => {
                let n = p.value() as usize;
                if n == 0 {
                    Word::identity()
                } else {
                    Word::single(AlgebraGenerator::UhfUnit {
                        mu: vec![1; n],
                        nu: vec![1; n],
                    })
                }
            }
        }
    }

    /// The left-inverse `α_{p⁻¹}` on a generator that commutes with
    /// `α_p(1)`; `None` when the generator does not qualify.
    pub fn act_inverse(&self, p: &SemigroupElement, g: &AlgebraGenerator) -> Result<Option<Word>> {
        self.validate_generator(g)?;
        let word = match (&self.kind, g) {
            (SystemKind::TrivialScalar, AlgebraGenerator::Scalar(c)) => {
                Some(Word::single(AlgebraGenerator::Scalar(c.clone())))
            }
            (SystemKind::AxbAlgebra { .. }, g) => {
                let a = p.value();
                match g {
                    AlgebraGenerator::Scalar(c) => {
                        Some(Word::single(AlgebraGenerator::Scalar(c.clone())))
                    }
                    AlgebraGenerator::Projection(d) => {
                        Some(Word::single(AlgebraGenerator::Projection(d / a.gcd(d))))
                    }
                    AlgebraGenerator::Unitary(x) => {
                        (x % a == 0).then(|| Word::single(AlgebraGenerator::Unitary(x / a)))
                    }
                    _ => unreachable!(),
                }
            }
            (SystemKind::CuntzUhf { .. }, g) => {
                let n = p.value() as usize;
                match g {
                    AlgebraGenerator::Scalar(c) => {
                        Some(Word::single(AlgebraGenerator::Scalar(c.clone())))
                    }
                    AlgebraGenerator::UhfUnit { mu, nu } => {
                        let strip = |w: &[u8]| {
                            (w.len() >= n && w[..n].iter().all(|&c| c == 1))
                                .then(|| w[n..].to_vec())
                        };
                        match (strip(mu), strip(nu)) {
                            (Some(mu), Some(nu)) => {
                                Some(Word::single(AlgebraGenerator::UhfUnit { mu, nu }))
                            }
                            _ => None,
                        }
                    }
                    _ => unreachable!(),
                }
            }
            _ => unreachable!(),
        };
        Ok(word)
    }

    /// Words for sampled projections dominating `α_p(1)`, the identity
    /// included.
    pub fn dominating_projections(&self, p: &SemigroupElement) -> Vec<Word> {
        let mut out = vec![Word::identity(), self.unit_image(p)];
        match &self.kind {
            SystemKind::AxbAlgebra { family, .. } => {
                let a = p.value();
                for &d in &family.moduli {
                    if d != 1 && d != a && a % d == 0 {
                        out.push(Word::single(AlgebraGenerator::Projection(d)));
                    }
                }
            }
            SystemKind::CuntzUhf { .. } => {
                let n = p.value() as usize;
                for m in 1..n {
                    out.push(Word::single(AlgebraGenerator::UhfUnit {
                        mu: vec![1; m],
                        nu: vec![1; m],
                    }));
                }
            }
            SystemKind::TrivialScalar => {}
        }
        out.dedup();
        out
    }

    /// Symbolic functoriality `α_p ∘ α_q = α_{pq}` on a generator sample.
    pub fn check_action_functorial(&self, sample: &[SemigroupElement]) -> Result<CheckReport> {
        let mut report = CheckReport::default();
        let gens = self.sample_generators();
        for p in sample {
            for q in sample {
                let pq = p.compose(q)?;
                for g in &gens {
                    let one = self.act_word(p, &self.act(q, g)?)?;
                    let two = self.act(&pq, g)?;
                    let ok = self.canonical_word(&one)? == self.canonical_word(&two)?;
                    report.push(
                        CheckRecord::exact("action-functoriality", &bool_residual(ok))
                            .with_p(format!("{p},{q}"))
                            .with_a(g),
                    );
                }
            }
        }
        Ok(report)
    }

    fn sample_generators(&self) -> Vec<AlgebraGenerator> {
        match &self.kind {
            SystemKind::TrivialScalar => vec![AlgebraGenerator::one()],
            SystemKind::AxbAlgebra { family, .. } => {
                let mut gens = vec![AlgebraGenerator::Unitary(1), AlgebraGenerator::Unitary(-3)];
                for &d in family.moduli.iter().take(3) {
                    gens.push(AlgebraGenerator::Projection(d));
                }
                gens
            }
            SystemKind::CuntzUhf { k } => {
                let mut gens = vec![];
                for i in 1..=*k {
                    for j in 1..=*k {
                        gens.push(AlgebraGenerator::UhfUnit {
                            mu: vec![i],
                            nu: vec![j],
                        });
                    }
                }
                gens
            }
        }
    }

    /// A canonical form for words, used for symbolic comparisons.
    pub fn canonical_word(&self, w: &Word) -> Result<CanonicalWord> {
        match &self.kind {
            SystemKind::AxbAlgebra { .. } => Ok(normalize_axb_word(w)),
            _ => {
                // merge scalars; letters are otherwise compared literally
                let mut coeff = Scalar::one();
                let mut letters = vec![];
                for g in &w.0 {
                    match g {
                        AlgebraGenerator::Scalar(c) => coeff = coeff * c.clone(),
                        other => letters.push(other.clone()),
                    }
                }
                if coeff.is_zero() {
                    return Ok(CanonicalWord::Zero);
                }
                Ok(CanonicalWord::Letters { coeff, letters })
            }
        }
    }
}

/// Canonical form of an algebra word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalWord {
    Zero,
    /// `coeff · u^x e_{dM} u^y` with `0 ≤ y < d`; `d = 1` forces `y = 0`.
    AxbSpan {
        coeff: Scalar,
        x: i64,
        d: i64,
        y: i64,
    },
    /// Scalar times a literal generator string.
    Letters {
        coeff: Scalar,
        letters: Vec<AlgebraGenerator>,
    },
}

/// Rewrites a word over `{u^x, e_d, scalars}` into the spanning normal form
/// `c·u^x e_d u^y`, or zero.
pub fn normalize_axb_word(w: &Word) -> CanonicalWord {
    let mut coeff = Scalar::one();
    let (mut x, mut d, mut y) = (0i64, 1i64, 0i64);
    let renormalize = |x: &mut i64, d: i64, y: &mut i64| {
        // move d-multiples of the right exponent across the projection
        let k = y.div_euclid(d);
        *x += k * d;
        *y = y.rem_euclid(d);
    };
    for g in &w.0 {
        match g {
            AlgebraGenerator::Scalar(c) => coeff = coeff * c.clone(),
            AlgebraGenerator::Unitary(z) => {
                y += z;
                renormalize(&mut x, d, &mut y);
            }
            AlgebraGenerator::Projection(d2) => {
                // e_d u^y e_d2 is zero unless y splits over dℤ + d2ℤ
                // a split y = c + f with c ∈ dℤ, f ∈ d2ℤ, via the CRT
                let split = intersect(&Coset::ideal(d), &Coset::new(y, *d2));
                let Some((c, _)) = split.parts() else {
                    return CanonicalWord::Zero;
                };
                debug_assert_eq!((c - y).rem_euclid(*d2), 0);
                let f = y - c;
                x += c;
                d = d / d.gcd(d2) * d2;
                y = f;
                renormalize(&mut x, d, &mut y);
            }
            AlgebraGenerator::UhfUnit { .. } => {
                unreachable!("uhf units never appear in ax+b words")
            }
        }
    }
    if coeff.is_zero() {
        return CanonicalWord::Zero;
    }
    if d == 1 {
        x += y;
        y = 0;
    }
    CanonicalWord::AxbSpan { coeff, x, d, y }
}

/// Capability claims of a representation pair.
#[derive(Clone, Copy, Debug, Default)]
pub struct RepFlags {
    pub claims_covariant: bool,
    pub claims_right_covariant: bool,
    pub defect_structurally_diagonal: bool,
}

pub type PiWordFn = dyn Fn(&Word) -> Result<LinOp> + Send + Sync;
pub type VFn = dyn Fn(&SemigroupElement) -> Result<LinOp> + Send + Sync;

/// A representation pair `(π, V)` on a countable basis, with memoized
/// operator construction. `π` is evaluated per word so that dilation stages
/// can realize words by their block formula rather than letterwise.
#[derive(Clone)]
pub struct RepPair {
    pub system: Arc<DynSystem>,
    pub flags: RepFlags,
    name: String,
    stage: u32,
    seeds: Vec<BasisIndex>,
    pi_word_fn: Arc<PiWordFn>,
    v_fn: Arc<VFn>,
    pi_cache: Arc<Mutex<HashMap<Word, LinOp>>>,
    v_cache: Arc<Mutex<HashMap<SemigroupElement, LinOp>>>,
    defect_cache: Arc<Mutex<HashMap<SemigroupElement, LinOp>>>,
}

impl fmt::Debug for RepPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RepPair({}, stage {})", self.name, self.stage)
    }
}

impl RepPair {
    pub fn new(
        system: Arc<DynSystem>,
        flags: RepFlags,
        name: impl Into<String>,
        stage: u32,
        seeds: Vec<BasisIndex>,
        pi_word_fn: Arc<PiWordFn>,
        v_fn: Arc<VFn>,
    ) -> Self {
        RepPair {
            system,
            flags,
            name: name.into(),
            stage,
            seeds,
            pi_word_fn,
            v_fn,
            pi_cache: Arc::new(Mutex::new(HashMap::new())),
            v_cache: Arc::new(Mutex::new(HashMap::new())),
            defect_cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stage(&self) -> u32 {
        self.stage
    }

    pub fn seeds(&self) -> &[BasisIndex] {
        &self.seeds
    }

    /// `π` of a word, memoized per word.
    pub fn pi_word(&self, w: &Word) -> Result<LinOp> {
        if let Some(hit) = self.pi_cache.lock().unwrap().get(w) {
            return Ok(hit.clone());
        }
        let op = (self.pi_word_fn)(w)?;
        self.pi_cache.lock().unwrap().insert(w.clone(), op.clone());
        Ok(op)
    }

    pub fn pi(&self, g: &AlgebraGenerator) -> Result<LinOp> {
        self.pi_word(&Word::single(g.clone()))
    }

    /// `V(p)`, memoized per element.
    pub fn v(&self, p: &SemigroupElement) -> Result<LinOp> {
        if p.monoid() != &self.system.monoid {
            return Err(LabError::DescriptorMismatch(
                "V applied to an element of the wrong monoid".into(),
            ));
        }
        if let Some(hit) = self.v_cache.lock().unwrap().get(p) {
            return Ok(hit.clone());
        }
        let op = (self.v_fn)(p)?;
        self.v_cache.lock().unwrap().insert(p.clone(), op.clone());
        Ok(op)
    }

    /// `π(α_p(1))`.
    pub fn alpha_unit(&self, p: &SemigroupElement) -> Result<LinOp> {
        self.pi_word(&self.system.unit_image(p))
    }

    pub fn identity_element(&self) -> SemigroupElement {
        SemigroupElement::identity(&self.system.monoid)
    }

    /// The defect `π(α_q(1)) − V(q)V(q)^*` as a diagonal 0/1 operator whose
    /// predicate is audited column by column: any column where either factor
    /// fails to act diagonally, or where positivity fails, is an error.
    pub fn defect(&self, q: &SemigroupElement) -> Result<LinOp> {
        if !self.flags.defect_structurally_diagonal {
            return Err(LabError::UnsupportedRepresentation(
                "defect requested from a representation without diagonal defect structure".into(),
            ));
        }
        if let Some(hit) = self.defect_cache.lock().unwrap().get(q) {
            return Ok(hit.clone());
        }
        let unit = self.alpha_unit(q)?;
        let vq = self.v(q)?;
        let range = LinOp::compose(&vq, &LinOp::adjoint(&vq));
        let op = LinOp::diagonal01(move |b| {
            let in_unit = diag01_entry(&unit, b, "π(α_q(1))")?;
            let in_range = diag01_entry(&range, b, "V(q)V(q)*")?;
            if in_range && !in_unit {
                return Err(LabError::ConstructionAudit(format!(
                    "defect is negative at {b}: range projection exceeds π(α_q(1))"
                )));
            }
            Ok(in_unit && !in_range)
        });
        self.defect_cache
            .lock()
            .unwrap()
            .insert(q.clone(), op.clone());
        Ok(op)
    }

    /// True iff the defect of `q` is nonzero somewhere on the window.
    pub fn has_defect_on(&self, q: &SemigroupElement, window: &[BasisIndex]) -> Result<bool> {
        let d = self.defect(q)?;
        for b in window {
            if !d.apply(b)?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Grows a deterministic window from the seeds, closing under the
    /// sampled generator operators, the sampled `V(p)`, and their adjoints.
    pub fn window(&self, sample: &Sample, depth: u32) -> Result<Vec<BasisIndex>> {
        let mut ops = vec![];
        for w in &sample.words {
            ops.push(self.pi_word(w)?);
        }
        for p in &sample.elements {
            ops.push(self.v(p)?);
        }
        grow_window(&self.seeds, &ops, depth)
    }
}

/// A diagonal 0/1 column read with audit: the column must be `0` or `e_b`.
fn diag01_entry(op: &LinOp, b: &BasisIndex, what: &str) -> Result<bool> {
    let col = op.apply(b)?;
    if col.is_zero() {
        return Ok(false);
    }
    if col.len() == 1 && col.coeff(b).is_one() {
        return Ok(true);
    }
    Err(LabError::UnsupportedRepresentation(format!(
        "{what} is not diagonal 0/1 at column {b}"
    )))
}

/// The sampled inputs of a relation check: monoid elements and generator
/// words.
#[derive(Clone, Debug)]
pub struct Sample {
    pub elements: Vec<SemigroupElement>,
    pub words: Vec<Word>,
}

impl Sample {
    /// Elements of word length ≤ `element_bound`; the identity word plus all
    /// single-generator words supplied.
    pub fn new(
        monoid: &Arc<MonoidDescriptor>,
        element_bound: u32,
        generators: Vec<AlgebraGenerator>,
    ) -> Self {
        let elements = enumerate(monoid, element_bound);
        let mut words = vec![Word::identity()];
        words.extend(generators.into_iter().map(Word::single));
        Sample { elements, words }
    }

    /// The standard sample for an ax+b-algebra system: unitaries `u^x` with
    /// `|x| ≤ x_bound` and projections with modulus ≤ `modulus_bound`.
    pub fn axb(
        system: &DynSystem,
        element_bound: u32,
        x_bound: i64,
        modulus_bound: i64,
    ) -> Result<Self> {
        let SystemKind::AxbAlgebra { family, .. } = &system.kind else {
            return Err(LabError::UnsupportedRepresentation(
                "ax+b sample requested from a different system".into(),
            ));
        };
        let mut gens = vec![];
        for x in -x_bound..=x_bound {
            if x != 0 {
                gens.push(AlgebraGenerator::Unitary(x));
            }
        }
        for &d in family.moduli.iter().filter(|&&d| d <= modulus_bound) {
            gens.push(AlgebraGenerator::Projection(d));
        }
        Ok(Sample::new(&system.monoid, element_bound, gens))
    }

    /// One scalar generator; enough for the trivial system.
    pub fn trivial(monoid: &Arc<MonoidDescriptor>, element_bound: u32) -> Self {
        Sample::new(monoid, element_bound, vec![AlgebraGenerator::one()])
    }

    /// All matrix units of word length ≤ `unit_length`.
    pub fn cuntz(k: u8, element_bound: u32, unit_length: usize) -> Self {
        let monoid = MonoidDescriptor::nat_additive();
        let mut gens = vec![];
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        for _ in 0..unit_length {
            let mut next = vec![];
            for w in &words {
                for c in 1..=k {
                    let mut w2 = w.clone();
                    w2.push(c);
                    next.push(w2);
                }
            }
            for mu in &next {
                for nu in &next {
                    gens.push(AlgebraGenerator::UhfUnit {
                        mu: mu.clone(),
                        nu: nu.clone(),
                    });
                }
            }
            words = next;
        }
        Sample::new(&monoid, element_bound, gens)
    }

    /// Word pairs for multiplicativity checks.
    pub fn word_pairs(&self) -> Vec<(Word, Word)> {
        let mut pairs = vec![];
        for w1 in &self.words {
            for w2 in &self.words {
                pairs.push((w1.clone(), w2.clone()));
            }
        }
        pairs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{constructible_closure, AxbIdeal, Coset};
    use crate::operator::{window_residual, Vec0};

    fn mult2() -> Arc<MonoidDescriptor> {
        MonoidDescriptor::mult(&[2]).unwrap()
    }

    fn left_regular_2(bound: i64) -> RepPair {
        let m = mult2();
        let family = constructible_closure(&m, bound).unwrap();
        fixtures::left_regular_axb(&m, family, 1).unwrap()
    }

    /// A base with enough seeds that tensor windows meet the defect.
    fn left_regular_2_seeded(bound: i64) -> RepPair {
        let m = mult2();
        let family = constructible_closure(&m, bound).unwrap();
        fixtures::left_regular_axb(&m, family, 6).unwrap()
    }

    fn axb_index(x: i64, a: u64) -> BasisIndex {
        let m = mult2();
        let axb = MonoidDescriptor::axb(m.clone()).unwrap();
        let part = SemigroupElement::mult_from_integer(&m, a).unwrap();
        BasisIndex::Element(SemigroupElement::axb(&axb, x, &part).unwrap())
    }

    fn m_el(a: u64) -> SemigroupElement {
        SemigroupElement::mult_from_integer(&mult2(), a).unwrap()
    }

    #[test]
    fn left_regular_shift_and_projection_columns() {
        let rep = left_regular_2(16);
        // the monoid shifts by left multiplication: (0,2)(1,1) = (2,2)
        let v2 = rep.v(&m_el(2)).unwrap();
        assert_eq!(
            v2.apply(&axb_index(1, 1)).unwrap(),
            Vec0::basis(axb_index(2, 2))
        );
        // V(e) is the identity on a window
        let e = rep.identity_element();
        let window = rep
            .window(&Sample::axb(&rep.system, 1, 2, 4).unwrap(), 2)
            .unwrap();
        assert!(
            window_residual(&rep.v(&e).unwrap(), &LinOp::identity(), &window)
                .unwrap()
                .is_zero()
        );
        // coset-times-ideal projections act by membership
        let proj = fixtures::axb_ideal_projection(
            &mult2(),
            &AxbIdeal::new(Coset::new(0, 2), 2),
        );
        assert!(proj.apply(&axb_index(0, 1)).unwrap().is_zero());
        assert_eq!(
            proj.apply(&axb_index(0, 2)).unwrap(),
            Vec0::basis(axb_index(0, 2))
        );
        // membership rule vs brute-force enumeration of (x + 2ℤ) × 2M
        for x in -6..=6i64 {
            for aexp in 0..4u32 {
                let a = 2i64.pow(aexp);
                let b = axb_index(x, a as u64);
                let expected = x.rem_euclid(2) == 0 && a % 2 == 0;
                assert_eq!(!proj.apply(&b).unwrap().is_zero(), expected, "at ({x},{a})");
            }
        }
    }

    #[test]
    fn left_regular_covariance_suite_is_exact() {
        let rep = left_regular_2(64);
        let sample = Sample::axb(&rep.system, 2, 4, 16).unwrap();
        let window = rep.window(&sample, 3).unwrap();
        let report = checks::check_covariance(&rep, &sample, &window);
        for r in report.failures() {
            panic!("unexpected failure: {r:?}");
        }
        assert!(report.all_pass());
    }

    #[test]
    fn corrupted_action_breaks_conjugation_but_not_right_covariance() {
        let m = mult2();
        let family = constructible_closure(&m, 64).unwrap();
        let rep = fixtures::corrupted_action_axb(&m, family, 1).unwrap();
        let sample = Sample::axb(&rep.system, 2, 4, 16).unwrap();
        let window = rep.window(&sample, 3).unwrap();

        let right = checks::check_right_covariance(&rep, &sample, &window);
        assert!(right.all_pass(), "the operators are genuinely right covariant");

        let full = checks::check_covariance(&rep, &sample, &window);
        assert!(!full.all_pass());
        let failing: Vec<&str> = full
            .failures()
            .map(|r| r.relation.as_str())
            .collect();
        assert!(failing.contains(&"conjugation-covariance"));
        assert!(failing.contains(&"range-projection"));
        assert!(!failing.contains(&"right-covariance"));
        assert!(!failing.contains(&"projection-domination"));
    }

    #[test]
    fn trivial_tensor_is_the_unilateral_shift() {
        let rep = fixtures::trivial_nat(4).unwrap();
        let v1 = rep.v(&SemigroupElement::nat(1)).unwrap();
        let e = |n: u64| {
            BasisIndex::Tensor(Box::new(BasisIndex::Unit), SemigroupElement::nat(n))
        };
        assert_eq!(v1.apply(&e(3)).unwrap(), Vec0::basis(e(4)));
        assert!(v1.adjoint_apply(&e(0)).unwrap().is_zero());

        // defect at q=1 is the rank-one projection onto e₀
        let d = rep.defect(&SemigroupElement::nat(1)).unwrap();
        assert_eq!(d.apply(&e(0)).unwrap(), Vec0::basis(e(0)));
        for n in 1..8 {
            assert!(d.apply(&e(n)).unwrap().is_zero());
        }
    }

    #[test]
    fn tensor_fixture_right_covariant_but_not_covariant() {
        let base = left_regular_2_seeded(64);
        let rep = fixtures::tensor_defect(&base, 2).unwrap();
        let sample = Sample::axb(&rep.system, 2, 3, 8).unwrap();
        let window = rep.window(&sample, 3).unwrap();

        assert!(checks::check_right_covariance(&rep, &sample, &window).all_pass());

        let full = checks::check_covariance(&rep, &sample, &window);
        // the range-projection identity fails at every p ≠ e, and nothing else
        for r in full.records.iter() {
            let at_identity = r.p.as_deref() == Some("1");
            match r.relation.as_str() {
                "range-projection" if !at_identity => {
                    assert!(!r.pass, "projection identity should fail at p={:?}", r.p)
                }
                _ => assert!(r.pass, "unexpected failure: {r:?}"),
            }
        }
    }

    #[test]
    fn tensor_defect_predicate_matches_brute_force_range() {
        let base = left_regular_2_seeded(64);
        let rep = fixtures::tensor_defect(&base, 2).unwrap();
        let q = m_el(2);
        let sample = Sample::axb(&rep.system, 2, 2, 4).unwrap();
        let window = rep.window(&sample, 3).unwrap();
        let enlarged = rep.window(&sample, 4).unwrap();
        let d = rep.defect(&q).unwrap();
        let vq = rep.v(&q).unwrap();
        let unit = rep.alpha_unit(&q).unwrap();

        // brute-force range of V(q) over the enlarged window
        let mut range = std::collections::BTreeSet::new();
        for b in &enlarged {
            for (r, _) in vq.apply(b).unwrap().iter() {
                range.insert(r.clone());
            }
        }
        let mut defect_hits = 0;
        for b in &window {
            let in_defect = !d.apply(b).unwrap().is_zero();
            let in_unit = !unit.apply(b).unwrap().is_zero();
            let expected = in_unit && !range.contains(b);
            assert_eq!(in_defect, expected, "defect mismatch at {b}");
            defect_hits += in_defect as usize;
        }
        assert!(defect_hits >= 1, "depth-3 window must meet the defect");
    }

    #[test]
    fn cuntz_prefix_rewrite_and_unital_sum() {
        let rep = fixtures::cuntz_uhf(2).unwrap();
        let w = |prefix: &[u8]| BasisIndex::word(prefix.to_vec());
        let unit = rep
            .pi(&AlgebraGenerator::UhfUnit {
                mu: vec![1],
                nu: vec![2],
            })
            .unwrap();
        // the word 2,1,1,… rewrites to the all-1 word
        assert_eq!(unit.apply(&w(&[2])).unwrap(), Vec0::basis(w(&[])));
        // a word not starting with 2 dies
        assert!(unit.apply(&w(&[1, 2])).unwrap().is_zero());

        let sample = Sample::cuntz(2, 2, 2);
        let window = rep.window(&sample, 3).unwrap();
        assert!(window.len() >= 20);

        // Σ_{|μ|=1} π(W_μ W_μ*) = I
        let sum = LinOp::combine(
            (1..=2u8)
                .map(|i| {
                    (
                        Scalar::one(),
                        rep.pi(&AlgebraGenerator::UhfUnit {
                            mu: vec![i],
                            nu: vec![i],
                        })
                        .unwrap(),
                    )
                })
                .collect(),
        );
        assert!(window_residual(&sum, &LinOp::identity(), &window)
            .unwrap()
            .is_zero());

        // V(1)V(1)* = π(W₁W₁*)
        let v1 = rep.v(&SemigroupElement::nat(1)).unwrap();
        let range = LinOp::compose(&v1, &LinOp::adjoint(&v1));
        let p11 = rep
            .pi(&AlgebraGenerator::UhfUnit {
                mu: vec![1],
                nu: vec![1],
            })
            .unwrap();
        assert!(window_residual(&range, &p11, &window).unwrap().is_zero());

        let report = checks::check_covariance(&rep, &sample, &window);
        assert!(report.all_pass(), "{:?}", report.failures().next());
    }

    #[test]
    fn action_functoriality_symbolic() {
        for rep in [
            left_regular_2(512),
            fixtures::trivial_nat(4).unwrap(),
            fixtures::cuntz_uhf(2).unwrap(),
        ] {
            let sample = enumerate(&rep.system.monoid, 2);
            let report = rep.system.check_action_functorial(&sample).unwrap();
            assert!(report.all_pass(), "failed for {}", rep.name());
        }
    }

    #[test]
    fn axb_word_normal_form() {
        // u^1 e_2 u^1 · u^1 e_2 = u^1 e_2 u^2 e_2 = u^3 e_2 (2 ∈ 2ℤ splits as 2+0)
        let w = Word(vec![
            AlgebraGenerator::Unitary(1),
            AlgebraGenerator::Projection(2),
            AlgebraGenerator::Unitary(2),
            AlgebraGenerator::Projection(2),
        ]);
        assert_eq!(
            normalize_axb_word(&w),
            CanonicalWord::AxbSpan {
                coeff: Scalar::one(),
                x: 3,
                d: 2,
                y: 0
            }
        );
        // e_2 u^1 e_2 = 0: 1 is not in 2ℤ + 2ℤ
        let z = Word(vec![
            AlgebraGenerator::Projection(2),
            AlgebraGenerator::Unitary(1),
            AlgebraGenerator::Projection(2),
        ]);
        assert_eq!(normalize_axb_word(&z), CanonicalWord::Zero);
        // the corrupted and true actions differ symbolically on unitaries
        let m = mult2();
        let family = constructible_closure(&m, 64).unwrap();
        let sys_true = DynSystem::new(
            m.clone(),
            SystemKind::AxbAlgebra {
                family: family.clone(),
                corrupted: false,
            },
        )
        .unwrap();
        let sys_bad = DynSystem::new(
            m.clone(),
            SystemKind::AxbAlgebra {
                family,
                corrupted: true,
            },
        )
        .unwrap();
        let two = m_el(2);
        let g = AlgebraGenerator::Unitary(1);
        assert_ne!(
            sys_true
                .canonical_word(&sys_true.act(&two, &g).unwrap())
                .unwrap(),
            sys_bad
                .canonical_word(&sys_bad.act(&two, &g).unwrap())
                .unwrap()
        );
    }

    #[test]
    fn c00_evaluation_is_multiplicative_and_unital() {
        let rep = left_regular_2(64);
        let sample = Sample::axb(&rep.system, 1, 2, 4).unwrap();
        let window = rep.window(&sample, 2).unwrap();
        let sys = &rep.system;

        let unit = C00Element::unit(sys);
        let one_op = unit.evaluate(&rep).unwrap();
        assert!(window_residual(&one_op, &LinOp::identity(), &window)
            .unwrap()
            .is_zero());

        // 1 ⊗ δ_p evaluates to V(p)
        let p = m_el(2);
        let vp = C00Element::delta(Word::identity(), p.clone())
            .evaluate(&rep)
            .unwrap();
        assert!(
            window_residual(&vp, &rep.v(&p).unwrap(), &window)
                .unwrap()
                .is_zero()
        );

        // Φ(xy) = Φ(x)Φ(y) on sampled elements
        let x = C00Element::delta(Word::single(AlgebraGenerator::Unitary(1)), p.clone());
        let y = C00Element::delta(
            Word::single(AlgebraGenerator::Projection(2)),
            m_el(4),
        )
        .sum(&C00Element::delta(Word::identity(), m_el(1)).scaled(&Scalar::from_integer(3)));
        let lhs = x.mul(&y, sys).unwrap().evaluate(&rep).unwrap();
        let rhs = LinOp::compose(&x.evaluate(&rep).unwrap(), &y.evaluate(&rep).unwrap());
        assert!(window_residual(&lhs, &rhs, &window).unwrap().is_zero());
    }

    #[test]
    fn boundary_relation_is_a_strict_inequality_on_the_left_regular_space() {
        let rep = left_regular_2(64);
        let sample = Sample::axb(&rep.system, 2, 2, 4).unwrap();
        let window = rep.window(&sample, 3).unwrap();
        let report = checks::boundary_relation_check(&rep, &window);
        assert!(!report.records.is_empty());
        assert!(report.all_pass());
        // and the sum is genuinely below the identity somewhere: columns with
        // monoid part outside 2M vanish
        let term = |m: i64| {
            Word(vec![
                AlgebraGenerator::Unitary(m),
                AlgebraGenerator::Projection(2),
                AlgebraGenerator::Unitary(-m),
            ])
        };
        let sum = LinOp::combine(vec![
            (Scalar::one(), rep.pi_word(&term(0)).unwrap()),
            (Scalar::one(), rep.pi_word(&term(1)).unwrap()),
        ]);
        assert!(sum.apply(&axb_index(0, 1)).unwrap().is_zero());
        assert_eq!(
            sum.apply(&axb_index(1, 2)).unwrap(),
            Vec0::basis(axb_index(1, 2))
        );
    }

    #[test]
    fn defect_of_covariant_fixture_vanishes() {
        let rep = left_regular_2(16);
        let d = rep.defect(&m_el(2)).unwrap();
        let sample = Sample::axb(&rep.system, 1, 2, 4).unwrap();
        for b in rep.window(&sample, 2).unwrap() {
            assert!(d.apply(&b).unwrap().is_zero());
        }
    }
}
