//! Concrete representation pairs.
//!
//! Every generator image here is a monomial operator, so all columns and
//! adjoint columns evaluate to at most one basis term and every relation
//! check is exact.

use super::{AlgebraGenerator, DynSystem, RepFlags, RepPair, SystemKind, Word};
use crate::error::{LabError, Result};
use crate::ideal::{AxbIdeal, ConstructibleFamily};
use crate::operator::{BasisIndex, LinOp, OpFlags, Side, Vec0};
use crate::scalar::Scalar;
use crate::semigroup::{enumerate, MonoidDescriptor, SemigroupElement};
use std::sync::Arc;

fn monomial_flags(diagonal_01: bool, isometry: bool) -> OpFlags {
    OpFlags {
        monomial: true,
        diagonal_01,
        isometry_claimed: isometry,
    }
}

/// `π` as a product of per-letter operators; the canonical evaluator for
/// every base fixture, where `π` is multiplicative by construction.
fn pi_letterwise<F>(pi_gen: F) -> Arc<super::PiWordFn>
where
    F: Fn(&AlgebraGenerator) -> Result<LinOp> + Send + Sync + 'static,
{
    Arc::new(move |w: &Word| {
        let ops = w.0.iter().map(&pi_gen).collect::<Result<Vec<_>>>()?;
        Ok(LinOp::product(&ops))
    })
}

/// The left-regular representation of the ax+b algebra on `ℓ²(ℤ⋊M)`:
/// unitaries and the monoid act by left multiplication, projections act
/// diagonally by ideal membership. Isometric covariant.
pub fn left_regular_axb(
    mult: &Arc<MonoidDescriptor>,
    family: ConstructibleFamily,
    seed_count: usize,
) -> Result<RepPair> {
    build_axb_rep(mult, family, seed_count, false)
}

/// The same space and operators, but the action claims `α_a(u^x) = u^{ax}`
/// with the range projection dropped: the classical near-miss action. The
/// representation operators are unchanged; only the claimed covariance
/// target moves, so conjugation checks must fail.
pub fn corrupted_action_axb(
    mult: &Arc<MonoidDescriptor>,
    family: ConstructibleFamily,
    seed_count: usize,
) -> Result<RepPair> {
    build_axb_rep(mult, family, seed_count, true)
}

fn build_axb_rep(
    mult: &Arc<MonoidDescriptor>,
    family: ConstructibleFamily,
    seed_count: usize,
    corrupted: bool,
) -> Result<RepPair> {
    let axb = MonoidDescriptor::axb(mult.clone())?;
    let system = Arc::new(DynSystem::new(
        mult.clone(),
        SystemKind::AxbAlgebra { family, corrupted },
    )?);
    let seeds: Vec<BasisIndex> = enumerate(&axb, 2)
        .into_iter()
        .take(seed_count.max(1))
        .map(BasisIndex::Element)
        .collect();

    let mult2 = mult.clone();
    let axb2 = axb.clone();
    let sys2 = system.clone();
    let pi_gen = move |g: &AlgebraGenerator| -> Result<LinOp> {
        sys2.validate_generator(g)?;
        match g {
            AlgebraGenerator::Scalar(c) => Ok(scalar_multiple(c.clone())),
            AlgebraGenerator::Unitary(x) => {
                let x = *x;
                let axb_f = axb2.clone();
                let axb_b = axb2.clone();
                Ok(LinOp::monomial(
                    move |b| Ok(axb_shift(&axb_f, x, b)),
                    move |b| Ok(axb_shift(&axb_b, -x, b)),
                    monomial_flags(false, true),
                ))
            }
            AlgebraGenerator::Projection(d) => {
                let d = *d;
                let mult3 = mult2.clone();
                Ok(LinOp::diagonal01(move |b| {
                    let BasisIndex::Element(el) = b else {
                        return Ok(false);
                    };
                    let (y, a) = el.axb_parts();
                    Ok(y % d == 0 && in_monoid_ideal(&mult3, &a, d))
                }))
            }
            AlgebraGenerator::UhfUnit { .. } => Err(LabError::LabelOutsideSystem(
                "matrix units do not act on the ax+b space".into(),
            )),
        }
    };

    let axb3 = axb.clone();
    let v_fn = move |p: &SemigroupElement| -> Result<LinOp> {
        let g = SemigroupElement::axb(&axb3, 0, p)?;
        let g2 = g.clone();
        Ok(LinOp::monomial(
            move |b| {
                let BasisIndex::Element(el) = b else {
                    return Ok(None);
                };
                Ok(Some((
                    BasisIndex::Element(g.compose(el)?),
                    Scalar::one(),
                )))
            },
            move |b| {
                let BasisIndex::Element(el) = b else {
                    return Ok(None);
                };
                Ok(el
                    .try_divide(&g2)?
                    .map(|r| (BasisIndex::Element(r), Scalar::one())))
            },
            monomial_flags(false, true),
        ))
    };

    let name = if corrupted {
        "corrupted-action"
    } else {
        "left-regular-axb"
    };
    Ok(RepPair::new(
        system,
        RepFlags {
            // the operators are genuinely covariant; the corrupted system
            // claims a different action, which the checks must expose
            claims_covariant: !corrupted,
            claims_right_covariant: true,
            defect_structurally_diagonal: true,
        },
        name,
        0,
        seeds,
        pi_letterwise(pi_gen),
        Arc::new(v_fn),
    ))
}

fn scalar_multiple(c: Scalar) -> LinOp {
    let diag = c.is_one();
    let c2 = c.clone();
    LinOp::monomial(
        move |b| Ok(Some((b.clone(), c.clone()))),
        move |b| Ok(Some((b.clone(), c2.clone()))),
        monomial_flags(diag, diag),
    )
}

/// Left multiplication by `(x, 1)` on an ax+b basis element.
fn axb_shift(
    axb: &Arc<MonoidDescriptor>,
    x: i64,
    b: &BasisIndex,
) -> Option<(BasisIndex, Scalar)> {
    let BasisIndex::Element(el) = b else {
        return None;
    };
    let mult = match &**axb {
        MonoidDescriptor::Axb { mult } => mult,
        _ => return None,
    };
    let shift = SemigroupElement::axb(axb, x, &SemigroupElement::identity(mult)).ok()?;
    Some((
        BasisIndex::Element(shift.compose(el).ok()?),
        Scalar::one(),
    ))
}

/// `a ∈ dM`, for `a` in the multiplicative monoid and `d` a family modulus.
fn in_monoid_ideal(mult: &Arc<MonoidDescriptor>, a: &SemigroupElement, d: i64) -> bool {
    let Some(d_el) = SemigroupElement::mult_from_integer(mult, d as u64) else {
        return false;
    };
    matches!(a.try_divide(&d_el), Ok(Some(_)))
}

/// The diagonal projection onto a constructible right ideal of `ℤ⋊M` on the
/// left-regular basis.
pub fn axb_ideal_projection(mult: &Arc<MonoidDescriptor>, j: &AxbIdeal) -> LinOp {
    let mult = mult.clone();
    let j = *j;
    LinOp::diagonal01(move |b| {
        let BasisIndex::Element(el) = b else {
            return Ok(false);
        };
        let (y, a) = el.axb_parts();
        Ok(j.contains(y, a.value(), &mult))
    })
}

/// The one-dimensional covariant base for the trivial system `(ℂ, P, id)`.
pub fn trivial_base(monoid: &Arc<MonoidDescriptor>) -> Result<RepPair> {
    let system = Arc::new(DynSystem::new(monoid.clone(), SystemKind::TrivialScalar)?);
    let sys2 = system.clone();
    let pi_gen = move |g: &AlgebraGenerator| -> Result<LinOp> {
        sys2.validate_generator(g)?;
        match g {
            AlgebraGenerator::Scalar(c) => Ok(scalar_multiple(c.clone())),
            _ => Err(LabError::LabelOutsideSystem(
                "only scalars act on the trivial system".into(),
            )),
        }
    };
    let v_fn = |_p: &SemigroupElement| -> Result<LinOp> { Ok(LinOp::identity()) };
    Ok(RepPair::new(
        system,
        RepFlags {
            claims_covariant: true,
            claims_right_covariant: true,
            defect_structurally_diagonal: true,
        },
        "trivial-base",
        0,
        vec![BasisIndex::Unit],
        pi_letterwise(pi_gen),
        Arc::new(v_fn),
    ))
}

/// Tensors a covariant base with the left-regular representation of its own
/// acting monoid: `π = ρ ⊗ I`, `V(p) = W(p) ⊗ λ_p`. Right covariant with a
/// diagonal defect, and not covariant at any non-invertible element.
///
/// Seeds are products of the base seeds with the first `p_seed_count`
/// monoid elements; windows grown from the identity alone advance both
/// coordinates in lockstep and never meet the defect.
pub fn tensor_defect(base: &RepPair, p_seed_count: usize) -> Result<RepPair> {
    if !base.flags.claims_covariant {
        return Err(LabError::UnsupportedRepresentation(
            "tensor construction needs a covariant base".into(),
        ));
    }
    let system = base.system.clone();
    let monoid = system.monoid.clone();
    let p_seeds: Vec<SemigroupElement> = enumerate(&monoid, p_seed_count.max(3) as u32)
        .into_iter()
        .take(p_seed_count.max(1))
        .collect();
    let seeds: Vec<BasisIndex> = base
        .seeds()
        .iter()
        .flat_map(|s| {
            p_seeds
                .iter()
                .map(move |p| BasisIndex::Tensor(Box::new(s.clone()), p.clone()))
        })
        .collect();

    let base_pi = base.clone();
    let pi_word_fn = move |w: &Word| -> Result<LinOp> {
        let inner = base_pi.pi_word(w)?;
        Ok(tensor_with_identity(inner))
    };

    let base_v = base.clone();
    let v_fn = move |p: &SemigroupElement| -> Result<LinOp> {
        let wp = base_v.v(p)?;
        let flags = wp.flags();
        let p_fwd = p.clone();
        let p_bwd = p.clone();
        let wp2 = wp.clone();
        Ok(LinOp::from_evaluators(
            move |b| {
                let BasisIndex::Tensor(h, m) = b else {
                    return Ok(Vec0::zero());
                };
                let col = wp.apply(h)?;
                let shifted = p_fwd.compose(m)?;
                Ok(col
                    .iter()
                    .map(|(r, c)| {
                        (
                            BasisIndex::Tensor(Box::new(r.clone()), shifted.clone()),
                            c.clone(),
                        )
                    })
                    .collect())
            },
            move |b| {
                let BasisIndex::Tensor(h, m) = b else {
                    return Ok(Vec0::zero());
                };
                let Some(back) = m.try_divide(&p_bwd)? else {
                    return Ok(Vec0::zero());
                };
                let col = wp2.adjoint_apply(h)?;
                Ok(col
                    .iter()
                    .map(|(r, c)| {
                        (
                            BasisIndex::Tensor(Box::new(r.clone()), back.clone()),
                            c.clone(),
                        )
                    })
                    .collect())
            },
            OpFlags {
                monomial: flags.monomial,
                diagonal_01: false,
                isometry_claimed: flags.isometry_claimed,
            },
        ))
    };

    Ok(RepPair::new(
        system,
        RepFlags {
            claims_covariant: false,
            claims_right_covariant: true,
            defect_structurally_diagonal: true,
        },
        format!("tensor({})", base.name()),
        0,
        seeds,
        Arc::new(pi_word_fn),
        Arc::new(v_fn),
    ))
}

/// `ρ(a) ⊗ I` on tensor indices.
fn tensor_with_identity(inner: LinOp) -> LinOp {
    let flags = inner.flags();
    let inner2 = inner.clone();
    LinOp::from_evaluators(
        move |b| {
            let BasisIndex::Tensor(h, m) = b else {
                return Ok(Vec0::zero());
            };
            Ok(inner
                .apply(h)?
                .iter()
                .map(|(r, c)| (BasisIndex::Tensor(Box::new(r.clone()), m.clone()), c.clone()))
                .collect())
        },
        move |b| {
            let BasisIndex::Tensor(h, m) = b else {
                return Ok(Vec0::zero());
            };
            Ok(inner2
                .adjoint_apply(h)?
                .iter()
                .map(|(r, c)| (BasisIndex::Tensor(Box::new(r.clone()), m.clone()), c.clone()))
                .collect())
        },
        flags,
    )
}

/// The shift fixture: the trivial system over `ℕ` tensored with `ℓ²(ℕ)`,
/// seeded with the first `seed_count` basis vectors.
pub fn trivial_nat(seed_count: usize) -> Result<RepPair> {
    tensor_defect(
        &trivial_base(&MonoidDescriptor::nat_additive())?,
        seed_count,
    )
}

/// The matrix-unit representation on eventually-1 words: `π(W_μ W_ν^*)`
/// rewrites the prefix `ν` to `μ`, `V(n)` prepends `1^n`. Isometric
/// covariant.
pub fn cuntz_uhf(k: u8) -> Result<RepPair> {
    if k < 2 {
        return Err(LabError::InvalidDescriptor(
            "the matrix-unit space needs k ≥ 2".into(),
        ));
    }
    let monoid = MonoidDescriptor::nat_additive();
    let system = Arc::new(DynSystem::new(monoid, SystemKind::CuntzUhf { k })?);

    let sys2 = system.clone();
    let pi_gen = move |g: &AlgebraGenerator| -> Result<LinOp> {
        sys2.validate_generator(g)?;
        match g {
            AlgebraGenerator::Scalar(c) => Ok(scalar_multiple(c.clone())),
            AlgebraGenerator::UhfUnit { mu, nu } => {
                let diagonal = mu == nu;
                let (mu_f, nu_f) = (mu.clone(), nu.clone());
                let (mu_b, nu_b) = (mu.clone(), nu.clone());
                Ok(LinOp::monomial(
                    move |b| Ok(prefix_rewrite(&nu_f, &mu_f, b)),
                    move |b| Ok(prefix_rewrite(&mu_b, &nu_b, b)),
                    monomial_flags(diagonal, false),
                ))
            }
            _ => Err(LabError::LabelOutsideSystem(
                "only matrix units and scalars act on the word space".into(),
            )),
        }
    };

    let v_fn = move |p: &SemigroupElement| -> Result<LinOp> {
        let n = p.value() as usize;
        let m = n;
        Ok(LinOp::monomial(
            move |b| {
                let BasisIndex::Word(w) = b else {
                    return Ok(None);
                };
                let mut out = vec![1u8; n];
                out.extend_from_slice(w);
                Ok(Some((BasisIndex::word(out), Scalar::one())))
            },
            move |b| {
                let BasisIndex::Word(w) = b else {
                    return Ok(None);
                };
                Ok(strip_prefix(&vec![1u8; m], w)
                    .map(|rest| (BasisIndex::word(rest), Scalar::one())))
            },
            monomial_flags(false, true),
        ))
    };

    Ok(RepPair::new(
        system,
        RepFlags {
            claims_covariant: true,
            claims_right_covariant: true,
            defect_structurally_diagonal: true,
        },
        format!("cuntz-uhf({k})"),
        0,
        vec![BasisIndex::word(vec![])],
        pi_letterwise(pi_gen),
        Arc::new(v_fn),
    ))
}

/// If the eventually-1 word `w` starts with `pat`, the remainder; the
/// comparison pads `w` with its implicit all-1 tail.
fn strip_prefix(pat: &[u8], w: &[u8]) -> Option<Vec<u8>> {
    for (i, &c) in pat.iter().enumerate() {
        let wc = w.get(i).copied().unwrap_or(1);
        if wc != c {
            return None;
        }
    }
    Some(if w.len() > pat.len() {
        w[pat.len()..].to_vec()
    } else {
        vec![]
    })
}

/// Rewrites the prefix `from` to `to` on an eventually-1 word.
fn prefix_rewrite(from: &[u8], to: &[u8], b: &BasisIndex) -> Option<(BasisIndex, Scalar)> {
    let BasisIndex::Word(w) = b else {
        return None;
    };
    let rest = strip_prefix(from, w)?;
    let mut out = to.to_vec();
    out.extend_from_slice(&rest);
    Some((BasisIndex::word(out), Scalar::one()))
}

/// The direct sum of two representations of the same system.
pub fn direct_sum(left: &RepPair, right: &RepPair) -> Result<RepPair> {
    if !left.system.compatible(&right.system) {
        return Err(LabError::DescriptorMismatch(
            "direct sum of representations of different systems".into(),
        ));
    }
    let system = left.system.clone();
    let seeds: Vec<BasisIndex> = left
        .seeds()
        .iter()
        .map(|s| BasisIndex::Sum(Side::Left, Box::new(s.clone())))
        .chain(
            right
                .seeds()
                .iter()
                .map(|s| BasisIndex::Sum(Side::Right, Box::new(s.clone()))),
        )
        .collect();

    let (l_pi, r_pi) = (left.clone(), right.clone());
    let pi_word_fn = move |w: &Word| -> Result<LinOp> {
        Ok(block_diag(l_pi.pi_word(w)?, r_pi.pi_word(w)?))
    };
    let (l_v, r_v) = (left.clone(), right.clone());
    let v_fn =
        move |p: &SemigroupElement| -> Result<LinOp> { Ok(block_diag(l_v.v(p)?, r_v.v(p)?)) };

    Ok(RepPair::new(
        system,
        RepFlags {
            claims_covariant: left.flags.claims_covariant && right.flags.claims_covariant,
            claims_right_covariant: left.flags.claims_right_covariant
                && right.flags.claims_right_covariant,
            defect_structurally_diagonal: left.flags.defect_structurally_diagonal
                && right.flags.defect_structurally_diagonal,
        },
        format!("{}(+){}", left.name(), right.name()),
        0,
        seeds,
        Arc::new(pi_word_fn),
        Arc::new(v_fn),
    ))
}

fn block_diag(l: LinOp, r: LinOp) -> LinOp {
    let lf = l.flags();
    let rf = r.flags();
    let (l2, r2) = (l.clone(), r.clone());
    let tag = |side: Side| move |(b, c): (&BasisIndex, &Scalar)| {
        (BasisIndex::Sum(side, Box::new(b.clone())), c.clone())
    };
    LinOp::from_evaluators(
        move |b| {
            let BasisIndex::Sum(side, inner) = b else {
                return Ok(Vec0::zero());
            };
            let col = match side {
                Side::Left => l.apply(inner)?,
                Side::Right => r.apply(inner)?,
            };
            Ok(col.iter().map(tag(*side)).collect())
        },
        move |b| {
            let BasisIndex::Sum(side, inner) = b else {
                return Ok(Vec0::zero());
            };
            let col = match side {
                Side::Left => l2.adjoint_apply(inner)?,
                Side::Right => r2.adjoint_apply(inner)?,
            };
            Ok(col.iter().map(tag(*side)).collect())
        },
        OpFlags {
            monomial: lf.monomial && rf.monomial,
            diagonal_01: lf.diagonal_01 && rf.diagonal_01,
            isometry_claimed: lf.isometry_claimed && rf.isometry_claimed,
        },
    )
}
