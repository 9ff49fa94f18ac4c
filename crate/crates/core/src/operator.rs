//! Exact lazy column-finite operators on countable orthonormal bases.
//!
//! An operator is a pair of evaluators: `apply` returns the column at a basis
//! index, `adjoint_apply` the column of the adjoint. Both are finitely
//! supported vectors with Gaussian-rational coefficients, so any finite
//! window of any word in the generated *-algebra evaluates exactly. Operator
//! equality is window-semidecidable by design: the crate only ever claims
//! "exact on this window".

use crate::error::{LabError, Result};
use crate::scalar::Scalar;
use crate::semigroup::SemigroupElement;
use num_rational::BigRational;
use num_traits::Zero;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

/// A label of a basis vector. The concrete forms cover every space the
/// laboratory builds: one-dimensional scalars, left-regular spaces over a
/// monoid, tensor spaces `ℋ ⊗ ℓ²(P)`, eventually-constant words for the
/// infinite-tensor space, binary direct sums, and dilation towers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisIndex {
    /// The single basis vector of a one-dimensional space.
    Unit,
    /// `δ_p` in `ℓ²` of a monoid.
    Element(SemigroupElement),
    /// `h ⊗ δ_p` in a tensor space.
    Tensor(Box<BasisIndex>, SemigroupElement),
    /// A word over `{1..k}` that is eventually 1, stored as the finite
    /// prefix with trailing 1s stripped.
    Word(Vec<u8>),
    /// A summand-tagged vector of a binary direct sum.
    Sum(Side, Box<BasisIndex>),
    /// A vector copied into defect summands at the recorded stages; an empty
    /// history never occurs here (those are the untagged originals).
    Dilated {
        core: Box<BasisIndex>,
        history: Vec<u32>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl BasisIndex {
    /// Normalizes an eventually-1 word by stripping the all-1 tail.
    pub fn word(mut prefix: Vec<u8>) -> Self {
        while prefix.last() == Some(&1) {
            prefix.pop();
        }
        BasisIndex::Word(prefix)
    }

    /// Appends a dilation stage to the history, wrapping untagged indices.
    pub fn into_defect_copy(self, stage: u32) -> Self {
        match self {
            BasisIndex::Dilated { core, mut history } => {
                debug_assert!(history.last().is_none_or(|&h| h < stage));
                history.push(stage);
                BasisIndex::Dilated { core, history }
            }
            other => BasisIndex::Dilated {
                core: Box::new(other),
                history: vec![stage],
            },
        }
    }

    pub fn history(&self) -> &[u32] {
        match self {
            BasisIndex::Dilated { history, .. } => history,
            _ => &[],
        }
    }

    fn rank(&self) -> u8 {
        match self {
            BasisIndex::Unit => 0,
            BasisIndex::Element(_) => 1,
            BasisIndex::Tensor(..) => 2,
            BasisIndex::Word(_) => 3,
            BasisIndex::Sum(..) => 4,
            BasisIndex::Dilated { .. } => 5,
        }
    }
}

impl Ord for BasisIndex {
    /// Dilated vectors sort by (history length, history, core); everything
    /// else lexicographically by structure.
    fn cmp(&self, other: &Self) -> Ordering {
        use BasisIndex::*;
        match (self, other) {
            (
                Dilated { core, history },
                Dilated {
                    core: c2,
                    history: h2,
                },
            ) => history
                .len()
                .cmp(&h2.len())
                .then_with(|| history.cmp(h2))
                .then_with(|| core.cmp(c2)),
            (Element(a), Element(b)) => a.cmp(b),
            (Tensor(a, p), Tensor(b, q)) => a.cmp(b).then_with(|| p.cmp(q)),
            (Word(a), Word(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            (Sum(s, a), Sum(t, b)) => s.cmp(t).then_with(|| a.cmp(b)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for BasisIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisIndex::Unit => write!(f, "*"),
            BasisIndex::Element(p) => write!(f, "{p}"),
            BasisIndex::Tensor(h, p) => write!(f, "{h}(x){p}"),
            BasisIndex::Word(w) => {
                for c in w {
                    write!(f, "{c}")?;
                }
                write!(f, "1..")
            }
            BasisIndex::Sum(Side::Left, b) => write!(f, "L:{b}"),
            BasisIndex::Sum(Side::Right, b) => write!(f, "R:{b}"),
            BasisIndex::Dilated { core, history } => {
                write!(f, "{core}@{history:?}")
            }
        }
    }
}

/// A finitely supported vector: a map from basis indices to nonzero scalars.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Vec0 {
    entries: BTreeMap<BasisIndex, Scalar>,
}

impl Vec0 {
    pub fn zero() -> Self {
        Vec0::default()
    }

    pub fn basis(b: BasisIndex) -> Self {
        Vec0::single(b, Scalar::one())
    }

    pub fn single(b: BasisIndex, c: Scalar) -> Self {
        let mut entries = BTreeMap::new();
        if !c.is_zero() {
            entries.insert(b, c);
        }
        Vec0 { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_term(&mut self, b: BasisIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Vec0, c: &Scalar) {
        for (b, v) in &other.entries {
            self.add_term(b.clone(), c * v);
        }
    }

    pub fn coeff(&self, b: &BasisIndex) -> Scalar {
        self.entries.get(b).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &Scalar)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BasisIndex> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `‖v‖²`, exact.
    pub fn norm_sq(&self) -> BigRational {
        self.entries
            .values()
            .map(|c| c.abs_sq())
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// The difference `self − other`.
    pub fn sub(&self, other: &Vec0) -> Vec0 {
        let mut out = self.clone();
        let minus_one = -Scalar::one();
        out.add_scaled(other, &minus_one);
        out
    }
}

impl FromIterator<(BasisIndex, Scalar)> for Vec0 {
    fn from_iter<T: IntoIterator<Item = (BasisIndex, Scalar)>>(iter: T) -> Self {
        let mut v = Vec0::zero();
        for (b, c) in iter {
            v.add_term(b, c);
        }
        v
    }
}

/// Structural facts an operator carries by construction.
#[derive(Clone, Copy, Debug, Default)]
pub struct OpFlags {
    /// Sends every basis vector to a scalar multiple of a basis vector.
    pub monomial: bool,
    /// `apply(b) ∈ {0, e_b}` for every `b`.
    pub diagonal_01: bool,
    /// Claimed isometric; validated on windows, never assumed.
    pub isometry_claimed: bool,
}

type Evaluator = dyn Fn(&BasisIndex) -> Result<Vec0> + Send + Sync;

struct OpInner {
    apply: Box<Evaluator>,
    adjoint_apply: Box<Evaluator>,
    flags: OpFlags,
    cache: Mutex<HashMap<BasisIndex, Vec0>>,
    adj_cache: Mutex<HashMap<BasisIndex, Vec0>>,
}

/// An exact lazy operator. Cloning shares the evaluators and memo caches;
/// evaluation is logically pure, so sharing across threads is safe.
#[derive(Clone)]
pub struct LinOp {
    inner: Arc<OpInner>,
}

impl fmt::Debug for LinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinOp({:?})", self.inner.flags)
    }
}

fn cached(
    cache: &Mutex<HashMap<BasisIndex, Vec0>>,
    b: &BasisIndex,
    eval: &Evaluator,
) -> Result<Vec0> {
    if let Some(hit) = cache.lock().unwrap().get(b) {
        return Ok(hit.clone());
    }
    let value = eval(b)?;
    cache
        .lock()
        .unwrap()
        .insert(b.clone(), value.clone());
    Ok(value)
}

impl LinOp {
    fn from_parts(
        apply: Box<Evaluator>,
        adjoint_apply: Box<Evaluator>,
        flags: OpFlags,
    ) -> Self {
        LinOp {
            inner: Arc::new(OpInner {
                apply,
                adjoint_apply,
                flags,
                cache: Mutex::new(HashMap::new()),
                adj_cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn flags(&self) -> OpFlags {
        self.inner.flags
    }

    /// A general operator from explicit column evaluators. Column-finiteness
    /// is the caller's obligation; every fixture satisfies it structurally.
    pub fn from_evaluators<F, G>(apply: F, adjoint_apply: G, flags: OpFlags) -> Self
    where
        F: Fn(&BasisIndex) -> Result<Vec0> + Send + Sync + 'static,
        G: Fn(&BasisIndex) -> Result<Vec0> + Send + Sync + 'static,
    {
        LinOp::from_parts(Box::new(apply), Box::new(adjoint_apply), flags)
    }

    /// The column at `b`, memoized.
    pub fn apply(&self, b: &BasisIndex) -> Result<Vec0> {
        cached(&self.inner.cache, b, &self.inner.apply)
    }

    /// The column of the adjoint at `b`, memoized.
    pub fn adjoint_apply(&self, b: &BasisIndex) -> Result<Vec0> {
        cached(&self.inner.adj_cache, b, &self.inner.adjoint_apply)
    }

    /// Extends `apply` linearly over a finitely supported vector.
    pub fn apply_vec(&self, v: &Vec0) -> Result<Vec0> {
        let mut out = Vec0::zero();
        for (b, c) in v.iter() {
            out.add_scaled(&self.apply(b)?, c);
        }
        Ok(out)
    }

    pub fn adjoint_apply_vec(&self, v: &Vec0) -> Result<Vec0> {
        let mut out = Vec0::zero();
        for (b, c) in v.iter() {
            out.add_scaled(&self.adjoint_apply(b)?, c);
        }
        Ok(out)
    }

    /// A monomial operator from a partial injective index map with a
    /// coefficient, plus the inverse evaluator for the adjoint. Columns are
    /// `coeff(b)·e_{map(b)}` or zero off-domain.
    pub fn monomial<F, G>(forward: F, backward: G, flags: OpFlags) -> Self
    where
        F: Fn(&BasisIndex) -> Result<Option<(BasisIndex, Scalar)>> + Send + Sync + 'static,
        G: Fn(&BasisIndex) -> Result<Option<(BasisIndex, Scalar)>> + Send + Sync + 'static,
    {
        let flags = OpFlags {
            monomial: true,
            ..flags
        };
        LinOp::from_parts(
            Box::new(move |b| {
                Ok(match forward(b)? {
                    Some((r, c)) => Vec0::single(r, c),
                    None => Vec0::zero(),
                })
            }),
            Box::new(move |r| {
                Ok(match backward(r)? {
                    Some((b, c)) => Vec0::single(b, c.conj()),
                    None => Vec0::zero(),
                })
            }),
            flags,
        )
    }

    /// A diagonal 0/1 operator from a membership predicate.
    pub fn diagonal01<F>(predicate: F) -> Self
    where
        F: Fn(&BasisIndex) -> Result<bool> + Send + Sync + Clone + 'static,
    {
        let pred2 = predicate.clone();
        let to_pair = move |p: &dyn Fn(&BasisIndex) -> Result<bool>,
                            b: &BasisIndex|
              -> Result<Option<(BasisIndex, Scalar)>> {
            Ok(p(b)?.then(|| (b.clone(), Scalar::one())))
        };
        let fwd = move |b: &BasisIndex| to_pair(&predicate, b);
        let bwd = move |b: &BasisIndex| to_pair(&pred2, b);
        LinOp::monomial(
            fwd,
            bwd,
            OpFlags {
                monomial: true,
                diagonal_01: true,
                isometry_claimed: false,
            },
        )
    }

    pub fn identity() -> Self {
        LinOp::diagonal01(|_| Ok(true)).claiming_isometry()
    }

    pub fn zero() -> Self {
        LinOp::monomial(
            |_| Ok(None),
            |_| Ok(None),
            OpFlags {
                monomial: true,
                diagonal_01: true,
                isometry_claimed: false,
            },
        )
    }

    fn claiming_isometry(self) -> Self {
        let flags = OpFlags {
            isometry_claimed: true,
            ..self.inner.flags
        };
        LinOp::from_parts(
            {
                let op = self.clone();
                Box::new(move |b| op.apply(b))
            },
            {
                let op = self;
                Box::new(move |b| op.adjoint_apply(b))
            },
            flags,
        )
    }

    /// Pointwise-exact linear combination `Σ cᵢ·tᵢ`.
    pub fn combine(terms: Vec<(Scalar, LinOp)>) -> Self {
        let terms = Arc::new(terms);
        let terms2 = terms.clone();
        LinOp::from_parts(
            Box::new(move |b| {
                let mut out = Vec0::zero();
                for (c, t) in terms.iter() {
                    out.add_scaled(&t.apply(b)?, c);
                }
                Ok(out)
            }),
            Box::new(move |b| {
                let mut out = Vec0::zero();
                for (c, t) in terms2.iter() {
                    out.add_scaled(&t.adjoint_apply(b)?, &c.conj());
                }
                Ok(out)
            }),
            OpFlags::default(),
        )
    }

    /// Composition `s∘t`: apply `t` first, then `s`.
    pub fn compose(s: &LinOp, t: &LinOp) -> Self {
        let flags = OpFlags {
            monomial: s.inner.flags.monomial && t.inner.flags.monomial,
            diagonal_01: s.inner.flags.diagonal_01 && t.inner.flags.diagonal_01,
            isometry_claimed: s.inner.flags.isometry_claimed && t.inner.flags.isometry_claimed,
        };
        let (s2, t2) = (s.clone(), t.clone());
        let (s3, t3) = (s.clone(), t.clone());
        LinOp::from_parts(
            Box::new(move |b| s2.apply_vec(&t2.apply(b)?)),
            Box::new(move |b| t3.adjoint_apply_vec(&s3.adjoint_apply(b)?)),
            flags,
        )
    }

    /// Composes left-to-right: `product([a, b, c]) = a∘b∘c`.
    pub fn product(ops: &[LinOp]) -> Self {
        match ops {
            [] => LinOp::identity(),
            [one] => one.clone(),
            [head, tail @ ..] => LinOp::compose(head, &LinOp::product(tail)),
        }
    }

    pub fn adjoint(t: &LinOp) -> Self {
        let flags = OpFlags {
            monomial: t.inner.flags.monomial,
            diagonal_01: t.inner.flags.diagonal_01,
            isometry_claimed: false,
        };
        let (t2, t3) = (t.clone(), t.clone());
        LinOp::from_parts(
            Box::new(move |b| t2.adjoint_apply(b)),
            Box::new(move |b| t3.apply(b)),
            flags,
        )
    }

    /// `self − other` as an operator.
    pub fn sub(&self, other: &LinOp) -> LinOp {
        LinOp::combine(vec![
            (Scalar::one(), self.clone()),
            (-Scalar::one(), other.clone()),
        ])
    }
}

/// The largest squared deviation `max_b ‖(s−t)e_b‖²` over a window; zero
/// certifies agreement on the window.
pub fn window_residual(s: &LinOp, t: &LinOp, window: &[BasisIndex]) -> Result<BigRational> {
    let mut worst = BigRational::zero();
    for b in window {
        let d = s.apply(b)?.sub(&t.apply(b)?);
        let n = d.norm_sq();
        if n > worst {
            worst = n;
        }
    }
    Ok(worst)
}

/// Exact matrix entries `⟨e_r, t·e_c⟩` over finite row and column sets.
pub fn window_matrix(
    t: &LinOp,
    rows: &[BasisIndex],
    cols: &[BasisIndex],
) -> Result<Vec<Vec<Scalar>>> {
    let mut out = Vec::with_capacity(rows.len());
    let columns: Vec<Vec0> = cols.iter().map(|c| t.apply(c)).collect::<Result<_>>()?;
    for r in rows {
        out.push(columns.iter().map(|col| col.coeff(r)).collect());
    }
    Ok(out)
}

/// Serializes a window matrix as exact-fraction strings.
pub fn window_matrix_strings(
    t: &LinOp,
    rows: &[BasisIndex],
    cols: &[BasisIndex],
) -> Result<Vec<Vec<String>>> {
    Ok(window_matrix(t, rows, cols)?
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.to_string()).collect())
        .collect())
}

/// `t∘t = t` and `t* = t` on the window.
pub fn is_projection_on_window(t: &LinOp, window: &[BasisIndex]) -> Result<bool> {
    let idempotent = window_residual(&LinOp::compose(t, t), t, window)?.is_zero();
    let self_adjoint = window_residual(&LinOp::adjoint(t), t, window)?.is_zero();
    Ok(idempotent && self_adjoint)
}

/// `t*∘t = I` on the window.
pub fn is_isometry_on_window(t: &LinOp, window: &[BasisIndex]) -> Result<bool> {
    let gram = LinOp::compose(&LinOp::adjoint(t), t);
    Ok(window_residual(&gram, &LinOp::identity(), window)?.is_zero())
}

/// Audits adjoint consistency on a window: `⟨apply(b), e_r⟩` must equal
/// `conj(⟨e_b, adjoint_apply(r)⟩)` for all pairs drawn from the window.
pub fn audit_adjoint(t: &LinOp, window: &[BasisIndex]) -> Result<()> {
    for b in window {
        let col = t.apply(b)?;
        for (r, c) in col.iter() {
            let back = t.adjoint_apply(r)?;
            if back.coeff(b).conj() != *c {
                return Err(LabError::ConstructionAudit(format!(
                    "adjoint inconsistent at column {b}, row {r}"
                )));
            }
        }
        // rows reachable through the adjoint must map back as well
        let back = t.adjoint_apply(b)?;
        for (r, c) in back.iter() {
            let fwd = t.apply(r)?;
            if fwd.coeff(b) != c.conj() {
                return Err(LabError::ConstructionAudit(format!(
                    "adjoint inconsistent at row {b}, column {r}"
                )));
            }
        }
    }
    Ok(())
}

/// Grows a window from seeds by applying each listed operator and its
/// adjoint `depth` times, collecting every index that appears. The result is
/// sorted and deduplicated, so windows are deterministic.
pub fn grow_window(
    seeds: &[BasisIndex],
    ops: &[LinOp],
    depth: u32,
) -> Result<Vec<BasisIndex>> {
    let mut seen: BTreeSet<BasisIndex> = seeds.iter().cloned().collect();
    let mut frontier: Vec<BasisIndex> = seeds.to_vec();
    for _ in 0..depth {
        let mut next = vec![];
        for b in &frontier {
            for op in ops {
                for (r, _) in op.apply(b)?.iter() {
                    if seen.insert(r.clone()) {
                        next.push(r.clone());
                    }
                }
                for (r, _) in op.adjoint_apply(b)?.iter() {
                    if seen.insert(r.clone()) {
                        next.push(r.clone());
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> BasisIndex {
        BasisIndex::Element(SemigroupElement::nat(n))
    }

    /// The shift `λ_k` on `ℓ²(ℕ)`.
    fn shift(k: u64) -> LinOp {
        LinOp::monomial(
            move |b| {
                let BasisIndex::Element(p) = b else {
                    return Ok(None);
                };
                Ok(Some((
                    BasisIndex::Element(SemigroupElement::nat(p.value() as u64 + k)),
                    Scalar::one(),
                )))
            },
            move |b| {
                let BasisIndex::Element(p) = b else {
                    return Ok(None);
                };
                let v = p.value() as u64;
                Ok((v >= k).then(|| {
                    (
                        BasisIndex::Element(SemigroupElement::nat(v - k)),
                        Scalar::one(),
                    )
                }))
            },
            OpFlags {
                monomial: true,
                diagonal_01: false,
                isometry_claimed: true,
            },
        )
    }

    fn window(n: u64) -> Vec<BasisIndex> {
        (0..n).map(nat).collect()
    }

    #[test]
    fn shift_monomial_evaluates() {
        let s2 = shift(2);
        assert_eq!(s2.apply(&nat(3)).unwrap(), Vec0::basis(nat(5)));
        assert!(s2.adjoint_apply(&nat(1)).unwrap().is_zero());
    }

    #[test]
    fn diagonal_characteristic_function() {
        let even = LinOp::diagonal01(|b| {
            let BasisIndex::Element(p) = b else {
                return Ok(false);
            };
            Ok(p.value() % 2 == 0)
        });
        assert_eq!(even.apply(&nat(2)).unwrap(), Vec0::basis(nat(2)));
        assert!(even.apply(&nat(3)).unwrap().is_zero());
        assert!(is_projection_on_window(&even, &window(6)).unwrap());
        let m = window_matrix_strings(&even, &window(3), &window(3)).unwrap();
        assert_eq!(
            m,
            vec![
                vec!["1", "0", "0"],
                vec!["0", "0", "0"],
                vec!["0", "0", "1"]
            ]
        );
    }

    #[test]
    fn range_projection_of_shift() {
        let s2 = shift(2);
        let range = LinOp::compose(&s2, &LinOp::adjoint(&s2));
        assert!(range.apply(&nat(0)).unwrap().is_zero());
        assert_eq!(range.apply(&nat(2)).unwrap(), Vec0::basis(nat(2)));
        assert!(is_projection_on_window(&range, &window(8)).unwrap());
        assert!(is_isometry_on_window(&s2, &window(8)).unwrap());
        assert!(!is_projection_on_window(&s2, &window(8)).unwrap());
    }

    #[test]
    fn combine_cancellation() {
        let id = LinOp::identity();
        let z = LinOp::combine(vec![
            (Scalar::one(), id.clone()),
            (-Scalar::one(), id),
        ]);
        for b in window(5) {
            assert!(z.apply(&b).unwrap().is_zero());
        }
    }

    #[test]
    fn adjoint_is_involutive_on_windows() {
        let s3 = shift(3);
        let ss = LinOp::adjoint(&LinOp::adjoint(&s3));
        assert!(window_residual(&ss, &s3, &window(10)).unwrap().is_zero());
    }

    #[test]
    fn residual_of_distinct_shifts() {
        let r = window_residual(&shift(2), &shift(3), &window(1)).unwrap();
        assert_eq!(r, BigRational::from_integer(2.into()));
    }

    #[test]
    fn identity_window_matrix() {
        let m = window_matrix_strings(&LinOp::identity(), &window(2), &window(2)).unwrap();
        assert_eq!(m, vec![vec!["1", "0"], vec!["0", "1"]]);
    }

    #[test]
    fn subdiagonal_of_unit_shift() {
        let m = window_matrix(&shift(1), &window(3), &window(3)).unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                assert_eq!(!c.is_zero(), i == j + 1);
            }
        }
    }

    #[test]
    fn audit_detects_inconsistent_inverse() {
        // forward shifts by 2, but the claimed inverse shifts by 3
        let broken = LinOp::monomial(
            |b| {
                let BasisIndex::Element(p) = b else { return Ok(None) };
                Ok(Some((
                    BasisIndex::Element(SemigroupElement::nat(p.value() as u64 + 2)),
                    Scalar::one(),
                )))
            },
            |b| {
                let BasisIndex::Element(p) = b else { return Ok(None) };
                let v = p.value() as u64;
                Ok((v >= 3).then(|| {
                    (
                        BasisIndex::Element(SemigroupElement::nat(v - 3)),
                        Scalar::one(),
                    )
                }))
            },
            OpFlags::default(),
        );
        assert!(audit_adjoint(&broken, &window(6)).is_err());
        assert!(audit_adjoint(&shift(2), &window(6)).is_ok());
    }

    #[test]
    fn monomial_flags_propagate() {
        let s1 = shift(1);
        let comp = LinOp::compose(&s1, &LinOp::adjoint(&s1));
        assert!(comp.flags().monomial);
        let even = LinOp::diagonal01(|b| {
            let BasisIndex::Element(p) = b else { return Ok(false) };
            Ok(p.value() % 2 == 0)
        });
        let dd = LinOp::compose(&even, &even);
        assert!(dd.flags().diagonal_01);
        let mix = LinOp::combine(vec![(Scalar::one(), s1)]);
        assert!(!mix.flags().monomial);
    }
}
