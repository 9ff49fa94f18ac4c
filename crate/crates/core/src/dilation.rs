//! The explicit one-step isometric dilation and its iteration.
//!
//! Given a right-covariant pair `(π, V)` with a diagonal defect at `q`, the
//! dilated pair on `H ⊕ ℒ` is
//!
//! ```text
//! π₁(a) = [ π(a)      0             ]      V₁(p) = [ V(p)  V(q)*V(p)T ]
//!         [ 0         T*π(α_q(a))T  ]              [ 0     T*V(p)T    ]
//! ```
//!
//! where `T` includes the defect space into `H`. Stage operators evaluate
//! these blocks lazily against the parent pair; nothing is materialized
//! beyond the memoized columns a window touches.

use crate::error::{LabError, Result};
use crate::operator::{window_residual, BasisIndex, LinOp, OpFlags, Vec0};
use crate::report::{CheckRecord, CheckReport};
use crate::semigroup::SemigroupElement;
use crate::systems::{RepFlags, RepPair, Sample, Word};
use num_rational::BigRational;
use num_traits::Zero;
use std::sync::Arc;

/// One level of the dilation tower.
#[derive(Clone)]
pub struct DilationStage {
    /// 1-based stage number.
    pub index: u32,
    /// The element whose defect this stage absorbs.
    pub q: SemigroupElement,
    pub parent: RepPair,
    pub rep: RepPair,
    /// The parent defect at `q`, a diagonal 0/1 operator on the parent space.
    pub defect: LinOp,
    /// The inclusion of the fresh defect copy, as an operator on the stage
    /// space: `New(ξ) ↦ ξ`, zero on old vectors.
    pub inclusion: LinOp,
    /// Projection onto the old (parent) vectors of the stage space.
    pub old_projection: LinOp,
    /// Whether the parent was already covariant, making this stage a copy.
    pub trivial: bool,
}

impl std::fmt::Debug for DilationStage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DilationStage(n={}, q={})", self.index, self.q)
    }
}

/// Projection onto indices that do not carry the given stage tag.
fn old_projection(stage_no: u32) -> LinOp {
    LinOp::diagonal01(move |b| Ok(b.history().last() != Some(&stage_no)))
}

/// The inclusion `T` of the stage-`n` defect copy, on the stage space.
fn inclusion_operator(stage_no: u32, defect: &LinOp) -> LinOp {
    let defect2 = defect.clone();
    LinOp::from_evaluators(
        move |b| {
            let BasisIndex::Dilated { core, history } = b else {
                return Ok(Vec0::zero());
            };
            if history.last() != Some(&stage_no) {
                return Ok(Vec0::zero());
            }
            let inner = if history.len() == 1 {
                (**core).clone()
            } else {
                BasisIndex::Dilated {
                    core: core.clone(),
                    history: history[..history.len() - 1].to_vec(),
                }
            };
            Ok(Vec0::basis(inner))
        },
        move |b| {
            if b.history().last() == Some(&stage_no) {
                return Ok(Vec0::zero());
            }
            let col = defect2.apply(b)?;
            if col.is_zero() {
                Ok(Vec0::zero())
            } else {
                Ok(Vec0::basis(b.clone().into_defect_copy(stage_no)))
            }
        },
        OpFlags {
            monomial: true,
            diagonal_01: false,
            isometry_claimed: false,
        },
    )
}

/// Options for deliberately wrong stage constructions, used to demonstrate
/// that the verification actually bites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageMutation {
    None,
    /// Drop the upper-right `V(q)*V(p)T` block of `V₁`.
    DropCrossBlock,
    /// Replace the lower `T*π(α_q(a))T` block of `π₁` by zero.
    ZeroLowerAlgebraBlock,
}

/// One dilation step at `q`. A covariant parent has nothing to absorb and
/// comes back structurally identical.
pub fn dilate_once(parent: &RepPair, q: &SemigroupElement) -> Result<DilationStage> {
    dilate_once_with(parent, q, StageMutation::None)
}

/// Same construction with an optional deliberate defect; see
/// [`StageMutation`].
pub fn dilate_once_with(
    parent: &RepPair,
    q: &SemigroupElement,
    mutation: StageMutation,
) -> Result<DilationStage> {
    if !parent.flags.claims_right_covariant {
        return Err(LabError::UnsupportedRepresentation(
            "dilation needs a right covariant parent".into(),
        ));
    }
    if parent.flags.claims_covariant {
        return Ok(DilationStage {
            index: parent.stage() + 1,
            q: q.clone(),
            parent: parent.clone(),
            rep: parent.clone(),
            defect: LinOp::zero(),
            inclusion: LinOp::zero(),
            old_projection: LinOp::identity(),
            trivial: true,
        });
    }

    let stage_no = parent.stage() + 1;
    let defect = parent.defect(q)?;
    let t = inclusion_operator(stage_no, &defect);
    let t_star = LinOp::adjoint(&t);
    let p_old = old_projection(stage_no);

    let pi_parent = parent.clone();
    let (t1, ts1, po1) = (t.clone(), t_star.clone(), p_old.clone());
    let q1 = q.clone();
    let pi_word_fn = move |w: &Word| -> Result<LinOp> {
        let upper = LinOp::compose(&pi_parent.pi_word(w)?, &po1);
        if mutation == StageMutation::ZeroLowerAlgebraBlock {
            return Ok(upper);
        }
        let acted = pi_parent.system.act_word(&q1, w)?;
        let lower = LinOp::product(&[ts1.clone(), pi_parent.pi_word(&acted)?, t1.clone()]);
        Ok(LinOp::combine(vec![
            (crate::scalar::Scalar::one(), upper),
            (crate::scalar::Scalar::one(), lower),
        ]))
    };

    let v_parent = parent.clone();
    let (t2, ts2, po2) = (t.clone(), t_star.clone(), p_old.clone());
    let q2 = q.clone();
    let v_fn = move |p: &SemigroupElement| -> Result<LinOp> {
        let vp = v_parent.v(p)?;
        let mut terms = vec![(
            crate::scalar::Scalar::one(),
            LinOp::compose(&vp, &po2),
        )];
        if mutation != StageMutation::DropCrossBlock {
            let vq_star = LinOp::adjoint(&v_parent.v(&q2)?);
            terms.push((
                crate::scalar::Scalar::one(),
                LinOp::product(&[vq_star, vp.clone(), t2.clone()]),
            ));
        }
        terms.push((
            crate::scalar::Scalar::one(),
            LinOp::product(&[ts2.clone(), vp, t2.clone()]),
        ));
        Ok(LinOp::combine(terms))
    };

    let rep = RepPair::new(
        parent.system.clone(),
        RepFlags {
            claims_covariant: false,
            claims_right_covariant: true,
            defect_structurally_diagonal: true,
        },
        format!("{}+stage{}@q={}", parent.name(), stage_no, q),
        stage_no,
        parent.seeds().to_vec(),
        Arc::new(pi_word_fn),
        Arc::new(v_fn),
    );

    Ok(DilationStage {
        index: stage_no,
        q: q.clone(),
        parent: parent.clone(),
        rep,
        defect,
        inclusion: t,
        old_projection: p_old,
        trivial: false,
    })
}

/// The stage window induced by a parent window: every old vector plus the
/// fresh copy of every defect vector the window sees.
pub fn stage_window(stage: &DilationStage, parent_window: &[BasisIndex]) -> Result<Vec<BasisIndex>> {
    let mut out = parent_window.to_vec();
    if stage.trivial {
        return Ok(out);
    }
    for b in parent_window {
        if !stage.defect.apply(b)?.is_zero() {
            out.push(b.clone().into_defect_copy(stage.index));
        }
    }
    Ok(out)
}

/// How many fresh basis vectors the stage adds over a parent window.
pub fn new_basis_count(stage: &DilationStage, parent_window: &[BasisIndex]) -> Result<usize> {
    Ok(stage_window(stage, parent_window)?.len() - parent_window.len())
}

/// Verifies the stage is an isometric right covariant representation:
/// unitality, multiplicativity and star-compatibility of `π₁`; `V₁(e) = I`,
/// isometry and multiplicativity of `V₁`; right covariance; orthogonality
/// of the inclusion to `V(q)`; inclusion isometry and range; and absorption
/// of the inclusion by dominating projections.
pub fn verify_stage(
    stage: &DilationStage,
    sample: &Sample,
    parent_window: &[BasisIndex],
) -> Result<CheckReport> {
    let window = stage_window(stage, parent_window)?;
    let rep = &stage.rep;
    let mut report = CheckReport::default();
    let e = rep.identity_element();

    let push = |report: &mut CheckReport,
                relation: &str,
                p: Option<String>,
                a: Option<String>,
                outcome: Result<BigRational>| {
        let mut rec = match outcome {
            Ok(r) => CheckRecord::exact(relation, &r),
            Err(err) => CheckRecord::evaluation_error(relation, err.to_string()),
        };
        rec.p = p;
        rec.a = a;
        report.push(rec);
    };

    // Claim 1: π₁ is a unital *-homomorphism.
    push(
        &mut report,
        "unit-homomorphism",
        None,
        Some("1".into()),
        rep.pi_word(&Word::identity())
            .and_then(|one| window_residual(&one, &LinOp::identity(), &window)),
    );
    for (w1, w2) in sample.word_pairs() {
        push(
            &mut report,
            "multiplicativity-pi",
            None,
            Some(format!("{w1} | {w2}")),
            (|| {
                let joint = rep.pi_word(&w1.concat(&w2))?;
                let split = LinOp::compose(&rep.pi_word(&w1)?, &rep.pi_word(&w2)?);
                window_residual(&joint, &split, &window)
            })(),
        );
    }
    for w in &sample.words {
        push(
            &mut report,
            "star-compatibility",
            None,
            Some(w.to_string()),
            (|| {
                let starred = rep.pi_word(&w.star())?;
                let adjointed = LinOp::adjoint(&rep.pi_word(w)?);
                window_residual(&starred, &adjointed, &window)
            })(),
        );
    }

    // Claim 2: V₁ is an isometric representation with V₁(e) = I.
    push(
        &mut report,
        "unit-isometry",
        Some(e.to_string()),
        None,
        rep.v(&e)
            .and_then(|ve| window_residual(&ve, &LinOp::identity(), &window)),
    );
    for p in &sample.elements {
        push(
            &mut report,
            "isometry",
            Some(p.to_string()),
            None,
            rep.v(p).and_then(|vp| {
                window_residual(
                    &LinOp::compose(&LinOp::adjoint(&vp), &vp),
                    &LinOp::identity(),
                    &window,
                )
            }),
        );
    }
    for p in &sample.elements {
        for r in &sample.elements {
            push(
                &mut report,
                "semigroup-multiplicativity",
                Some(format!("{p},{r}")),
                None,
                (|| {
                    let split = LinOp::compose(&rep.v(p)?, &rep.v(r)?);
                    let joint = rep.v(&p.compose(r)?)?;
                    window_residual(&split, &joint, &window)
                })(),
            );
        }
    }

    // Claim 3: right covariance of the stage pair.
    for p in &sample.elements {
        for w in &sample.words {
            push(
                &mut report,
                "right-covariance",
                Some(p.to_string()),
                Some(w.to_string()),
                (|| {
                    let lhs = LinOp::compose(&rep.v(p)?, &rep.pi_word(w)?);
                    let rhs =
                        LinOp::compose(&rep.pi_word(&rep.system.act_word(p, w)?)?, &rep.v(p)?);
                    window_residual(&lhs, &rhs, &window)
                })(),
            );
        }
    }

    if !stage.trivial {
        report.extend(verify_inclusion(stage, parent_window)?);
    }
    Ok(report)
}

/// The structural identities of the inclusion: `V(q)^*T = T^*V(q) = 0`,
/// `T^*T = I` on the defect copy, `TT^*` equals the parent defect, and
/// `PT = T` for sampled projections `P ≥ π(α_q(1))`.
fn verify_inclusion(stage: &DilationStage, parent_window: &[BasisIndex]) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let window = stage_window(stage, parent_window)?;
    let parent = &stage.parent;
    let t = &stage.inclusion;
    let t_star = LinOp::adjoint(t);
    let embedded_vq = LinOp::compose(&parent.v(&stage.q)?, &stage.old_projection);

    report.push(CheckRecord::exact(
        "defect-orthogonality",
        &{
            let lhs = LinOp::compose(&LinOp::adjoint(&embedded_vq), t);
            let rhs = LinOp::compose(&t_star, &embedded_vq);
            let r1 = window_residual(&lhs, &LinOp::zero(), &window)?;
            let r2 = window_residual(&rhs, &LinOp::zero(), &window)?;
            r1.max(r2)
        },
    )
    .with_p(stage.q.to_string()));

    let new_proj = LinOp::compose(&t_star, t);
    let stage_no = stage.index;
    let expected_new = LinOp::diagonal01(move |b| Ok(b.history().last() == Some(&stage_no)));
    report.push(CheckRecord::exact(
        "inclusion-isometry",
        &window_residual(&new_proj, &expected_new, &window)?,
    ));

    let range = LinOp::compose(t, &t_star);
    let embedded_defect = LinOp::compose(&stage.defect, &stage.old_projection);
    report.push(CheckRecord::exact(
        "inclusion-range-is-defect",
        &window_residual(&range, &embedded_defect, &window)?,
    ));

    for word in parent.system.dominating_projections(&stage.q) {
        let proj = LinOp::compose(&parent.pi_word(&word)?, &stage.old_projection);
        report.push(
            CheckRecord::exact(
                "dominating-projection-absorbs-inclusion",
                &window_residual(&LinOp::compose(&proj, t), t, &window)?,
            )
            .with_a(word.to_string()),
        );
    }
    Ok(report)
}

/// After dilating at `q`, the stage defect at `q` annihilates every old
/// vector and is the identity on the fresh copies.
pub fn verify_restriction(
    stage: &DilationStage,
    parent_window: &[BasisIndex],
) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    if stage.trivial {
        report.push(
            CheckRecord::exact("defect-annihilates-parent", &BigRational::zero())
                .with_p(stage.q.to_string())
                .with_note("covariant parent: no defect to move"),
        );
        return Ok(report);
    }
    let d1 = stage_defect_operator(&stage.rep, &stage.q)?;

    let mut worst_old = BigRational::zero();
    for b in parent_window {
        worst_old = worst_old.max(d1.apply(b)?.norm_sq());
    }
    report.push(
        CheckRecord::exact("defect-annihilates-parent", &worst_old).with_p(stage.q.to_string()),
    );

    let mut worst_new = BigRational::zero();
    let mut new_seen = 0usize;
    for b in parent_window {
        if !stage.defect.apply(b)?.is_zero() {
            let fresh = b.clone().into_defect_copy(stage.index);
            let col = d1.apply(&fresh)?;
            worst_new = worst_new.max(col.sub(&Vec0::basis(fresh)).norm_sq());
            new_seen += 1;
        }
    }
    report.push(
        CheckRecord::exact("defect-is-identity-on-new", &worst_new)
            .with_p(stage.q.to_string())
            .with_a(format!("{new_seen} fresh vectors")),
    );
    Ok(report)
}

/// `π(α_q(1)) − V(q)V(q)^*` of a representation, as a plain operator
/// difference (no diagonal structure assumed).
pub fn stage_defect_operator(rep: &RepPair, q: &SemigroupElement) -> Result<LinOp> {
    let vq = rep.v(q)?;
    Ok(rep
        .alpha_unit(q)?
        .sub(&LinOp::compose(&vq, &LinOp::adjoint(&vq))))
}

/// If the parent satisfies `V(p)V(p)^* = π(α_p(1))` on the window, the stage
/// must satisfy it on the induced stage window. When the parent identity
/// already fails on the window there is nothing to preserve and the record
/// says so.
pub fn verify_preservation(
    stage: &DilationStage,
    p: &SemigroupElement,
    parent_window: &[BasisIndex],
) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let parent_residual = {
        let d = stage_defect_operator(&stage.parent, p)?;
        window_residual(&d, &LinOp::zero(), parent_window)?
    };
    if !parent_residual.is_zero() {
        report.push(
            CheckRecord::exact("covariance-preservation", &BigRational::zero())
                .with_p(p.to_string())
                .with_note(
                    "not applicable: the parent lacks the range-projection identity at p on this window",
                ),
        );
        return Ok(report);
    }
    let window = stage_window(stage, parent_window)?;
    let d1 = stage_defect_operator(&stage.rep, p)?;
    report.push(
        CheckRecord::exact(
            "covariance-preservation",
            &window_residual(&d1, &LinOp::zero(), &window)?,
        )
        .with_p(p.to_string()),
    );
    Ok(report)
}

/// Applies `dilate_once` repeatedly, cycling the schedule round-robin.
pub fn iterate(
    rep: &RepPair,
    schedule: &[SemigroupElement],
    stages: u32,
) -> Result<Vec<DilationStage>> {
    if schedule.is_empty() {
        return Err(LabError::UnsupportedRepresentation(
            "iterate needs a nonempty schedule".into(),
        ));
    }
    let mut out = Vec::with_capacity(stages as usize);
    let mut current = rep.clone();
    for n in 0..stages {
        let q = &schedule[(n as usize) % schedule.len()];
        let stage = dilate_once(&current, q)?;
        current = stage.rep.clone();
        out.push(stage);
    }
    Ok(out)
}

/// The tower of windows over the stages: `W₀` is the base window, each stage
/// extends the previous one by its fresh defect copies.
pub fn tower_windows(
    stages: &[DilationStage],
    base_window: &[BasisIndex],
) -> Result<Vec<Vec<BasisIndex>>> {
    let mut windows = Vec::with_capacity(stages.len() + 1);
    windows.push(base_window.to_vec());
    for stage in stages {
        let prev = windows.last().expect("seeded").clone();
        windows.push(stage_window(stage, &prev)?);
    }
    Ok(windows)
}

/// The worst residual of the stage defect at `q` over the window vectors
/// whose history lies entirely below the stage: exactly the vectors the
/// construction promises to have cleared.
pub fn elimination_residual(
    stage: &DilationStage,
    q: &SemigroupElement,
    window: &[BasisIndex],
) -> Result<BigRational> {
    let d = stage_defect_operator(&stage.rep, q)?;
    let mut worst = BigRational::zero();
    for b in window {
        if b.history().iter().all(|&h| h < stage.index) {
            worst = worst.max(d.apply(b)?.norm_sq());
        }
    }
    Ok(worst)
}
