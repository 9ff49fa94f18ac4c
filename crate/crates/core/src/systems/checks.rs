//! Relation checkers for representation pairs.
//!
//! Each checker evaluates an operator identity column by column on a finite
//! window and reports the exact worst-case residual. Evaluation failures
//! (a generator label leaving the system, a non-diagonal structure) become
//! per-pair records instead of aborting the sweep.

use super::{AlgebraGenerator, RepPair, Sample, SystemKind, Word};
use crate::error::Result;
use crate::operator::{window_residual, BasisIndex, LinOp};
use crate::report::{CheckRecord, CheckReport};
use crate::scalar::Scalar;
use num_rational::BigRational;
use num_traits::Zero;

fn residual_record(
    relation: &str,
    outcome: Result<BigRational>,
    p: Option<String>,
    a: Option<String>,
) -> CheckRecord {
    let mut rec = match outcome {
        Ok(r) => CheckRecord::exact(relation, &r),
        Err(e) => CheckRecord::evaluation_error(relation, e.to_string()),
    };
    rec.p = p;
    rec.a = a;
    rec
}

/// `V(p)π(a) = π(α_p(a))V(p)` over the sample.
pub fn check_right_covariance(
    rep: &RepPair,
    sample: &Sample,
    window: &[BasisIndex],
) -> CheckReport {
    let mut report = CheckReport::default();
    for p in &sample.elements {
        for w in &sample.words {
            let outcome = (|| {
                let lhs = LinOp::compose(&rep.v(p)?, &rep.pi_word(w)?);
                let rhs = LinOp::compose(&rep.pi_word(&rep.system.act_word(p, w)?)?, &rep.v(p)?);
                window_residual(&lhs, &rhs, window)
            })();
            report.push(residual_record(
                "right-covariance",
                outcome,
                Some(p.to_string()),
                Some(w.to_string()),
            ));
        }
    }
    report
}

/// The full covariance suite: representation well-formedness, the
/// conjugation identity, the range-projection identity, projection
/// domination, absorption, and adjoint intertwining where defined.
pub fn check_covariance(rep: &RepPair, sample: &Sample, window: &[BasisIndex]) -> CheckReport {
    let mut report = CheckReport::default();
    let e = rep.identity_element();

    report.push(residual_record(
        "unit-isometry",
        rep.v(&e)
            .and_then(|ve| window_residual(&ve, &LinOp::identity(), window)),
        Some(e.to_string()),
        None,
    ));
    report.push(residual_record(
        "unit-homomorphism",
        rep.pi_word(&Word::identity())
            .and_then(|one| window_residual(&one, &LinOp::identity(), window)),
        None,
        Some("1".into()),
    ));

    for p in &sample.elements {
        report.push(residual_record(
            "isometry",
            rep.v(p).and_then(|vp| {
                window_residual(
                    &LinOp::compose(&LinOp::adjoint(&vp), &vp),
                    &LinOp::identity(),
                    window,
                )
            }),
            Some(p.to_string()),
            None,
        ));
        report.push(residual_record(
            "range-projection",
            range_projection_residual(rep, p, window),
            Some(p.to_string()),
            None,
        ));
        report.push(residual_record(
            "projection-domination",
            projection_domination_residual(rep, p, window),
            Some(p.to_string()),
            None,
        ));

        for w in &sample.words {
            report.push(residual_record(
                "conjugation-covariance",
                conjugation_residual(rep, p, w, window),
                Some(p.to_string()),
                Some(w.to_string()),
            ));
            report.push(residual_record(
                "absorption",
                absorption_residual(rep, p, w, window),
                Some(p.to_string()),
                Some(w.to_string()),
            ));
            if let Some(rec) = adjoint_intertwining_record(rep, p, w, window) {
                report.push(rec);
            }
        }
    }

    report.extend(check_right_covariance(rep, sample, window));
    report
}

/// `V(p)V(p)^* = π(α_p(1))`.
fn range_projection_residual(
    rep: &RepPair,
    p: &crate::semigroup::SemigroupElement,
    window: &[BasisIndex],
) -> Result<BigRational> {
    let vp = rep.v(p)?;
    let lhs = LinOp::compose(&vp, &LinOp::adjoint(&vp));
    window_residual(&lhs, &rep.alpha_unit(p)?, window)
}

/// `V(p)V(p)^* ≤ π(α_p(1))`, checked as `π(α_p(1))·V(p)V(p)^* = V(p)V(p)^*`,
/// which for diagonal projections is the pointwise 0/1 comparison.
fn projection_domination_residual(
    rep: &RepPair,
    p: &crate::semigroup::SemigroupElement,
    window: &[BasisIndex],
) -> Result<BigRational> {
    let vp = rep.v(p)?;
    let range = LinOp::compose(&vp, &LinOp::adjoint(&vp));
    let dominated = LinOp::compose(&rep.alpha_unit(p)?, &range);
    window_residual(&dominated, &range, window)
}

/// `V(p)π(a)V(p)^* = π(α_p(a))`.
fn conjugation_residual(
    rep: &RepPair,
    p: &crate::semigroup::SemigroupElement,
    w: &Word,
    window: &[BasisIndex],
) -> Result<BigRational> {
    let vp = rep.v(p)?;
    let lhs = LinOp::product(&[vp.clone(), rep.pi_word(w)?, LinOp::adjoint(&vp)]);
    let rhs = rep.pi_word(&rep.system.act_word(p, w)?)?;
    window_residual(&lhs, &rhs, window)
}

/// `π(a)V(p) = π(a·α_p(1))V(p)`.
fn absorption_residual(
    rep: &RepPair,
    p: &crate::semigroup::SemigroupElement,
    w: &Word,
    window: &[BasisIndex],
) -> Result<BigRational> {
    let vp = rep.v(p)?;
    let lhs = LinOp::compose(&rep.pi_word(w)?, &vp);
    let absorbed = w.concat(&rep.system.unit_image(p));
    let rhs = LinOp::compose(&rep.pi_word(&absorbed)?, &vp);
    window_residual(&lhs, &rhs, window)
}

/// `V(p)^*π(a) = π(α_{p⁻¹}(a))V(p)^*` for words whose letters all commute
/// with `α_p(1)`; other words are skipped, not failed.
fn adjoint_intertwining_record(
    rep: &RepPair,
    p: &crate::semigroup::SemigroupElement,
    w: &Word,
    window: &[BasisIndex],
) -> Option<CheckRecord> {
    let inverse_image = (|| -> Result<Option<Word>> {
        let mut letters = vec![];
        for g in &w.0 {
            match rep.system.act_inverse(p, g)? {
                Some(part) => letters.extend(part.0),
                None => return Ok(None),
            }
        }
        Ok(Some(Word(letters)))
    })();
    let inverse_image = match inverse_image {
        Ok(Some(word)) => word,
        Ok(None) => return None,
        Err(e) => {
            return Some(
                CheckRecord::evaluation_error("adjoint-intertwining", e.to_string())
                    .with_p(p)
                    .with_a(w),
            )
        }
    };
    let outcome = (|| {
        let vp_star = LinOp::adjoint(&rep.v(p)?);
        let lhs = LinOp::compose(&vp_star, &rep.pi_word(w)?);
        let rhs = LinOp::compose(&rep.pi_word(&inverse_image)?, &vp_star);
        window_residual(&lhs, &rhs, window)
    })();
    Some(residual_record(
        "adjoint-intertwining",
        outcome,
        Some(p.to_string()),
        Some(w.to_string()),
    ))
}

/// Whether the full covariance suite passes with zero residuals.
pub fn covariant_on_window(rep: &RepPair, sample: &Sample, window: &[BasisIndex]) -> bool {
    check_covariance(rep, sample, window).all_pass()
}

/// Whether right covariance alone passes.
pub fn right_covariant_on_window(rep: &RepPair, sample: &Sample, window: &[BasisIndex]) -> bool {
    check_right_covariance(rep, sample, window).all_pass()
}

/// The boundary relation `Σ_{m=0}^{g−1} u^m e_{gM} u^{−m} ≤ I` per monoid
/// generator `g`, reported in inequality form: on the left-regular space the
/// sum is a proper subprojection of the identity, and equality is a quotient
/// property this space does not satisfy.
pub fn boundary_relation_check(rep: &RepPair, window: &[BasisIndex]) -> CheckReport {
    let mut report = CheckReport::default();
    let SystemKind::AxbAlgebra { .. } = &rep.system.kind else {
        return report;
    };
    let generators = match &*rep.system.monoid {
        crate::semigroup::MonoidDescriptor::Mult { generators } => generators.clone(),
        _ => return report,
    };
    for g in generators {
        let outcome = (|| {
            let mut terms = vec![];
            for m in 0..g as i64 {
                let word = Word(vec![
                    AlgebraGenerator::Unitary(m),
                    AlgebraGenerator::Projection(g as i64),
                    AlgebraGenerator::Unitary(-m),
                ]);
                terms.push((Scalar::one(), rep.pi_word(&word)?));
            }
            let sum = LinOp::combine(terms);
            // S ≤ I for this diagonal sum: each column must be 0 or e_b
            let mut violation = BigRational::zero();
            for b in window {
                let col = sum.apply(b)?;
                let ok = col.is_zero() || (col.len() == 1 && col.coeff(b).is_one());
                if !ok {
                    violation += BigRational::from_integer(1.into());
                }
            }
            Ok(violation)
        })();
        report.push(
            residual_record(
                "boundary-relation(≤)",
                outcome,
                None,
                Some(format!("sum over u^m e[{g}] u^-m, m < {g}")),
            )
            .with_note("inequality form; equality holds only in the boundary quotient"),
        );
    }
    report
}
