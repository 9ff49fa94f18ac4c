//! The convolution algebra of finitely supported algebra-valued functions
//! on the monoid, with product `(a⊗δ_p)(b⊗δ_q) = a·α_p(b) ⊗ δ_{pq}`, and
//! its evaluation `a⊗δ_p ↦ π(a)V(p)` under a representation pair.

use super::{DynSystem, RepPair, Word};
use crate::error::Result;
use crate::operator::LinOp;
use crate::scalar::Scalar;
use crate::semigroup::SemigroupElement;
use std::collections::BTreeMap;
use std::fmt;

/// A finite formal sum of `word ⊗ δ_p` terms with scalar coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct C00Element {
    terms: BTreeMap<(Word, SemigroupElement), Scalar>,
}

impl C00Element {
    pub fn zero() -> Self {
        C00Element::default()
    }

    /// The single term `w ⊗ δ_p`.
    pub fn delta(w: Word, p: SemigroupElement) -> Self {
        let mut out = C00Element::zero();
        out.add_term(w, p, Scalar::one());
        out
    }

    /// The unit `1 ⊗ δ_e`.
    pub fn unit(system: &DynSystem) -> Self {
        C00Element::delta(
            Word::identity(),
            SemigroupElement::identity(&system.monoid),
        )
    }

    pub fn add_term(&mut self, w: Word, p: SemigroupElement, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((w, p)).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = C00Element::zero();
        for ((w, p), v) in &self.terms {
            out.add_term(w.clone(), p.clone(), c * v);
        }
        out
    }

    pub fn sum(&self, other: &C00Element) -> Self {
        let mut out = self.clone();
        for ((w, p), v) in &other.terms {
            out.add_term(w.clone(), p.clone(), v.clone());
        }
        out
    }

    /// The convolution product; the system supplies `α`.
    pub fn mul(&self, other: &C00Element, system: &DynSystem) -> Result<C00Element> {
        let mut out = C00Element::zero();
        for ((w1, p), c1) in &self.terms {
            for ((w2, q), c2) in &other.terms {
                let acted = system.act_word(p, w2)?;
                out.add_term(w1.concat(&acted), p.compose(q)?, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates `Σ c·(w ⊗ δ_p) ↦ Σ c·π(w)V(p)`.
    pub fn evaluate(&self, rep: &RepPair) -> Result<LinOp> {
        let mut parts = vec![];
        for ((w, p), c) in &self.terms {
            parts.push((
                c.clone(),
                LinOp::compose(&rep.pi_word(w)?, &rep.v(p)?),
            ));
        }
        if parts.is_empty() {
            return Ok(LinOp::zero());
        }
        Ok(LinOp::combine(parts))
    }
}

impl fmt::Display for C00Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((w, p), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{w}⊗δ_{p}")?;
        }
        Ok(())
    }
}
