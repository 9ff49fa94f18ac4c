//! Exact models of the abelian left-cancellative monoids the laboratory
//! works over: `(ℕ, +)`, multiplicative monoids `⟨S⟩ ⊆ ℕ^×` on pairwise
//! coprime generators, the congruence monoid `{1 + 4n}`, and the ax+b
//! semigroup `ℤ⋊M`.
//!
//! Every element is stored in a unique canonical form, so equality is plain
//! structural equality and no integer factorization is ever needed.

use crate::error::{LabError, Result};
use num_integer::Integer;
use std::fmt;
use std::sync::Arc;

/// Describes one of the supported monoids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MonoidDescriptor {
    /// `(ℕ, +)`.
    NatAdditive,
    /// The multiplicative monoid generated by pairwise coprime integers ≥ 2.
    Mult { generators: Vec<u64> },
    /// The congruence monoid `{1 + 4n : n ∈ ℕ}` under multiplication.
    ///
    /// The monoid is not finitely generated; `generator_cap` bounds the
    /// elements used as generators by `enumerate`.
    Congruence41 { generator_cap: u64 },
    /// The ax+b semigroup `ℤ⋊M` with product `(x,a)(y,b) = (x+ay, ab)`,
    /// where `M` is a multiplicative monoid acting injectively on `ℤ`.
    Axb { mult: Arc<MonoidDescriptor> },
}

impl MonoidDescriptor {
    pub fn nat_additive() -> Arc<Self> {
        Arc::new(MonoidDescriptor::NatAdditive)
    }

    /// Builds a multiplicative monoid descriptor, rejecting generator lists
    /// that are not pairwise coprime or contain entries < 2.
    pub fn mult(generators: &[u64]) -> Result<Arc<Self>> {
        for (i, &g) in generators.iter().enumerate() {
            if g < 2 {
                return Err(LabError::InvalidDescriptor(format!(
                    "generator {g} is below 2"
                )));
            }
            for &h in &generators[..i] {
                if g.gcd(&h) != 1 {
                    return Err(LabError::InvalidDescriptor(format!(
                        "generators {h} and {g} are not coprime"
                    )));
                }
            }
        }
        Ok(Arc::new(MonoidDescriptor::Mult {
            generators: generators.to_vec(),
        }))
    }

    pub fn congruence_4_1(generator_cap: u64) -> Arc<Self> {
        Arc::new(MonoidDescriptor::Congruence41 { generator_cap })
    }

    /// `ℤ⋊M` over a multiplicative part.
    pub fn axb(mult: Arc<MonoidDescriptor>) -> Result<Arc<Self>> {
        match &*mult {
            MonoidDescriptor::Mult { .. } => Ok(Arc::new(MonoidDescriptor::Axb { mult })),
            other => Err(LabError::InvalidDescriptor(format!(
                "ax+b multiplicative part must be a mult monoid, got {other:?}"
            ))),
        }
    }

    pub fn is_abelian(&self) -> bool {
        !matches!(self, MonoidDescriptor::Axb { .. })
    }

    /// Whether this monoid may act as the `P` of a dynamical system. The
    /// ax+b kind only ever indexes left-regular bases; it never acts.
    pub fn may_act(&self) -> bool {
        self.is_abelian()
    }
}

/// Canonical coordinates of a monoid element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Coords {
    Nat(u64),
    /// Exponent vector aligned with the generator list.
    Mult(Vec<u32>),
    /// The integer value, ≡ 1 mod 4.
    Congruence(u64),
    /// `(x, exponents of the multiplicative part)`.
    Axb(i64, Vec<u32>),
}

/// An element of one of the supported monoids, in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SemigroupElement {
    monoid: Arc<MonoidDescriptor>,
    coords: Coords,
}

impl fmt::Debug for SemigroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SemigroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.coords {
            Coords::Nat(n) => write!(f, "{n}"),
            Coords::Mult(_) => write!(f, "{}", self.value()),
            Coords::Congruence(v) => write!(f, "{v}"),
            Coords::Axb(x, _) => {
                let a = mult_value(self.mult_generators(), self.axb_mult_exponents());
                write!(f, "({x},{a})")
            }
        }
    }
}

fn mult_value(generators: &[u64], exponents: &[u32]) -> i64 {
    let mut v: i64 = 1;
    for (&g, &e) in generators.iter().zip(exponents) {
        for _ in 0..e {
            v = v.checked_mul(g as i64).expect("monoid value overflow");
        }
    }
    v
}

impl SemigroupElement {
    pub fn monoid(&self) -> &Arc<MonoidDescriptor> {
        &self.monoid
    }

    /// The identity of a monoid.
    pub fn identity(monoid: &Arc<MonoidDescriptor>) -> Self {
        let coords = match &**monoid {
            MonoidDescriptor::NatAdditive => Coords::Nat(0),
            MonoidDescriptor::Mult { generators } => Coords::Mult(vec![0; generators.len()]),
            MonoidDescriptor::Congruence41 { .. } => Coords::Congruence(1),
            MonoidDescriptor::Axb { mult } => {
                let gens = match &**mult {
                    MonoidDescriptor::Mult { generators } => generators.len(),
                    _ => unreachable!("validated on construction"),
                };
                Coords::Axb(0, vec![0; gens])
            }
        };
        SemigroupElement {
            monoid: monoid.clone(),
            coords,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.monoid)
    }

    pub fn nat(n: u64) -> Self {
        SemigroupElement {
            monoid: MonoidDescriptor::nat_additive(),
            coords: Coords::Nat(n),
        }
    }

    /// Parses a positive integer as an element of a multiplicative monoid by
    /// dividing out generators; `None` if it is not a product of them.
    pub fn mult_from_integer(monoid: &Arc<MonoidDescriptor>, n: u64) -> Option<Self> {
        let MonoidDescriptor::Mult { generators } = &**monoid else {
            return None;
        };
        let mut rem = n;
        if rem == 0 {
            return None;
        }
        let mut exps = vec![0u32; generators.len()];
        for (i, &g) in generators.iter().enumerate() {
            while rem % g == 0 {
                rem /= g;
                exps[i] += 1;
            }
        }
        (rem == 1).then(|| SemigroupElement {
            monoid: monoid.clone(),
            coords: Coords::Mult(exps),
        })
    }

    /// An element `1 + 4n` of the congruence monoid.
    pub fn congruence(monoid: &Arc<MonoidDescriptor>, value: u64) -> Option<Self> {
        matches!(&**monoid, MonoidDescriptor::Congruence41 { .. })
            .then_some(())
            .filter(|_| value % 4 == 1)
            .map(|_| SemigroupElement {
                monoid: monoid.clone(),
                coords: Coords::Congruence(value),
            })
    }

    /// The pair `(x, a)` of an ax+b semigroup, with `a` given in the
    /// multiplicative part.
    pub fn axb(monoid: &Arc<MonoidDescriptor>, x: i64, a: &SemigroupElement) -> Result<Self> {
        let MonoidDescriptor::Axb { mult } = &**monoid else {
            return Err(LabError::DescriptorMismatch(
                "axb element requested from a non-axb monoid".into(),
            ));
        };
        if a.monoid != *mult {
            return Err(LabError::DescriptorMismatch(
                "multiplicative part from the wrong monoid".into(),
            ));
        }
        let Coords::Mult(exps) = &a.coords else {
            unreachable!("mult monoid elements always carry exponent coords")
        };
        Ok(SemigroupElement {
            monoid: monoid.clone(),
            coords: Coords::Axb(x, exps.clone()),
        })
    }

    /// The integer the element stands for. Nat elements return `n`, mult and
    /// congruence elements their value; not defined for ax+b pairs.
    pub fn value(&self) -> i64 {
        match &self.coords {
            Coords::Nat(n) => *n as i64,
            Coords::Mult(exps) => mult_value(self.mult_generators(), exps),
            Coords::Congruence(v) => *v as i64,
            Coords::Axb(..) => panic!("value() on an ax+b pair; use axb_parts()"),
        }
    }

    /// `(x, a)` of an ax+b element, with `a` as an element of the
    /// multiplicative part.
    pub fn axb_parts(&self) -> (i64, SemigroupElement) {
        let MonoidDescriptor::Axb { mult } = &*self.monoid else {
            panic!("axb_parts() on a non-axb element")
        };
        let Coords::Axb(x, exps) = &self.coords else {
            unreachable!()
        };
        (
            *x,
            SemigroupElement {
                monoid: mult.clone(),
                coords: Coords::Mult(exps.clone()),
            },
        )
    }

    fn mult_generators(&self) -> &[u64] {
        match &*self.monoid {
            MonoidDescriptor::Mult { generators } => generators,
            MonoidDescriptor::Axb { mult } => match &**mult {
                MonoidDescriptor::Mult { generators } => generators,
                _ => unreachable!(),
            },
            _ => &[],
        }
    }

    fn axb_mult_exponents(&self) -> &[u32] {
        match &self.coords {
            Coords::Axb(_, exps) => exps,
            _ => unreachable!(),
        }
    }

    fn same_monoid(&self, other: &SemigroupElement) -> Result<()> {
        if self.monoid == other.monoid {
            Ok(())
        } else {
            Err(LabError::DescriptorMismatch(format!(
                "{:?} vs {:?}",
                self.monoid, other.monoid
            )))
        }
    }

    /// The monoid product in canonical form. Abelian kinds commute; the ax+b
    /// kind composes as `(x,a)(y,b) = (x+ay, ab)`.
    pub fn compose(&self, other: &SemigroupElement) -> Result<SemigroupElement> {
        self.same_monoid(other)?;
        let coords = match (&self.coords, &other.coords) {
            (Coords::Nat(m), Coords::Nat(n)) => Coords::Nat(m + n),
            (Coords::Mult(e), Coords::Mult(f)) => {
                Coords::Mult(e.iter().zip(f).map(|(a, b)| a + b).collect())
            }
            (Coords::Congruence(v), Coords::Congruence(w)) => Coords::Congruence(v * w),
            (Coords::Axb(x, e), Coords::Axb(y, f)) => {
                let a = mult_value(self.mult_generators(), e);
                let x1 = x
                    .checked_add(a.checked_mul(*y).expect("axb overflow"))
                    .expect("axb overflow");
                Coords::Axb(x1, e.iter().zip(f).map(|(p, q)| p + q).collect())
            }
            _ => unreachable!("same monoid implies same coordinate kind"),
        };
        Ok(SemigroupElement {
            monoid: self.monoid.clone(),
            coords,
        })
    }

    /// Left division: the unique `r` with `compose(q, r) = self`, if any.
    /// Uniqueness follows from left-cancellativity.
    pub fn try_divide(&self, q: &SemigroupElement) -> Result<Option<SemigroupElement>> {
        self.same_monoid(q)?;
        let coords = match (&self.coords, &q.coords) {
            (Coords::Nat(p), Coords::Nat(d)) => {
                if p >= d {
                    Some(Coords::Nat(p - d))
                } else {
                    None
                }
            }
            (Coords::Mult(e), Coords::Mult(f)) => e
                .iter()
                .zip(f)
                .map(|(a, b)| a.checked_sub(*b))
                .collect::<Option<Vec<_>>>()
                .map(Coords::Mult),
            (Coords::Congruence(p), Coords::Congruence(d)) => (p % d == 0
                && (p / d) % 4 == 1)
                .then(|| Coords::Congruence(p / d)),
            (Coords::Axb(xp, ep), Coords::Axb(xq, eq)) => {
                // (xq, aq)(y, b) = (xq + aq·y, aq·b) = (xp, ap)
                let exps = ep
                    .iter()
                    .zip(eq)
                    .map(|(a, b)| a.checked_sub(*b))
                    .collect::<Option<Vec<_>>>();
                exps.and_then(|exps| {
                    let aq = mult_value(self.mult_generators(), eq);
                    let dx = xp - xq;
                    (dx % aq == 0).then(|| Coords::Axb(dx / aq, exps))
                })
            }
            _ => unreachable!(),
        };
        Ok(coords.map(|coords| SemigroupElement {
            monoid: self.monoid.clone(),
            coords,
        }))
    }
}

/// The generator elements used by `enumerate` for each monoid kind. For
/// ax+b this is `{(±1, 1)} ∪ {(0, g)}`, generating all of `ℤ⋊M` as a monoid.
fn generator_elements(monoid: &Arc<MonoidDescriptor>) -> Vec<SemigroupElement> {
    match &**monoid {
        MonoidDescriptor::NatAdditive => vec![SemigroupElement::nat(1)],
        MonoidDescriptor::Mult { generators } => generators
            .iter()
            .map(|&g| SemigroupElement::mult_from_integer(monoid, g).expect("generator"))
            .collect(),
        MonoidDescriptor::Congruence41 { generator_cap } => (1..)
            .map(|n| 1 + 4 * n)
            .take_while(|v| *v <= *generator_cap)
            .map(|v| SemigroupElement::congruence(monoid, v).expect("≡1 mod 4"))
            .collect(),
        MonoidDescriptor::Axb { mult } => {
            let mut gens = vec![];
            let e = SemigroupElement::identity(mult);
            gens.push(SemigroupElement::axb(monoid, 1, &e).expect("axb"));
            gens.push(SemigroupElement::axb(monoid, -1, &e).expect("axb"));
            for g in generator_elements(mult) {
                gens.push(SemigroupElement::axb(monoid, 0, &g).expect("axb"));
            }
            gens
        }
    }
}

/// All products of at most `word_length_bound` generators, deduplicated, in
/// a deterministic order: by word length first, then by the generator-index
/// word that first produced the element. The identity always comes first.
pub fn enumerate(monoid: &Arc<MonoidDescriptor>, word_length_bound: u32) -> Vec<SemigroupElement> {
    let gens = generator_elements(monoid);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = vec![];
    let mut layer = vec![SemigroupElement::identity(monoid)];
    for el in &layer {
        if seen.insert(el.clone()) {
            out.push(el.clone());
        }
    }
    for _ in 0..word_length_bound {
        let mut next = vec![];
        for el in &layer {
            for g in &gens {
                let prod = el.compose(g).expect("same monoid");
                if seen.insert(prod.clone()) {
                    out.push(prod.clone());
                    next.push(prod);
                }
            }
        }
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m23() -> Arc<MonoidDescriptor> {
        MonoidDescriptor::mult(&[2, 3]).unwrap()
    }

    fn zx2() -> Arc<MonoidDescriptor> {
        MonoidDescriptor::axb(MonoidDescriptor::mult(&[2]).unwrap()).unwrap()
    }

    #[test]
    fn rejects_non_coprime_generators() {
        assert!(MonoidDescriptor::mult(&[2, 4]).is_err());
        assert!(MonoidDescriptor::mult(&[1]).is_err());
        assert!(MonoidDescriptor::mult(&[2, 3, 5]).is_ok());
    }

    #[test]
    fn axb_composition() {
        let m = zx2();
        let two = SemigroupElement::mult_from_integer(
            match &*m {
                MonoidDescriptor::Axb { mult } => mult,
                _ => unreachable!(),
            },
            2,
        )
        .unwrap();
        let g = SemigroupElement::axb(&m, 1, &two).unwrap();
        let sq = g.compose(&g).unwrap();
        let (x, a) = sq.axb_parts();
        assert_eq!((x, a.value()), (3, 4));
    }

    #[test]
    fn identity_laws() {
        for monoid in [
            MonoidDescriptor::nat_additive(),
            m23(),
            MonoidDescriptor::congruence_4_1(13),
            zx2(),
        ] {
            let e = SemigroupElement::identity(&monoid);
            for p in enumerate(&monoid, 2) {
                assert_eq!(e.compose(&p).unwrap(), p);
                assert_eq!(p.compose(&e).unwrap(), p);
            }
        }
    }

    #[test]
    fn mult_exponent_addition() {
        let m = m23();
        let six = SemigroupElement::mult_from_integer(&m, 6).unwrap();
        assert_eq!(six.compose(&six).unwrap().value(), 36);
    }

    #[test]
    fn try_divide_cases() {
        let five = SemigroupElement::nat(5);
        let two = SemigroupElement::nat(2);
        assert_eq!(five.try_divide(&two).unwrap().unwrap().value(), 3);

        let m2 = MonoidDescriptor::mult(&[2]).unwrap();
        let four = SemigroupElement::mult_from_integer(&m2, 4).unwrap();
        let eight = SemigroupElement::mult_from_integer(&m2, 8).unwrap();
        assert!(four.try_divide(&eight).unwrap().is_none());

        // solve (1,2)(y,b) = (3,4)
        let m = zx2();
        let two = SemigroupElement::mult_from_integer(
            match &*m {
                MonoidDescriptor::Axb { mult } => mult,
                _ => unreachable!(),
            },
            2,
        )
        .unwrap();
        let g = SemigroupElement::axb(&m, 1, &two).unwrap();
        let target = SemigroupElement::axb(&m, 3, &two.compose(&two).unwrap()).unwrap();
        let r = target.try_divide(&g).unwrap().unwrap();
        let (x, a) = r.axb_parts();
        assert_eq!((x, a.value()), (1, 2));
        // brute-force uniqueness over small (y, b)
        let mut witnesses = vec![];
        for y in -8..=8 {
            for bexp in 0..3u32 {
                let mut b = SemigroupElement::identity(match &*m {
                    MonoidDescriptor::Axb { mult } => mult,
                    _ => unreachable!(),
                });
                for _ in 0..bexp {
                    b = b.compose(&two).unwrap();
                }
                let cand = SemigroupElement::axb(&m, y, &b).unwrap();
                if g.compose(&cand).unwrap() == target {
                    witnesses.push(cand);
                }
            }
        }
        assert_eq!(witnesses, vec![r]);
    }

    #[test]
    fn descriptor_mismatch_is_an_error() {
        let a = SemigroupElement::nat(1);
        let m = m23();
        let b = SemigroupElement::mult_from_integer(&m, 2).unwrap();
        assert!(matches!(
            a.compose(&b),
            Err(LabError::DescriptorMismatch(_))
        ));
    }

    #[test]
    fn enumerate_orders() {
        let nat = MonoidDescriptor::nat_additive();
        let vals: Vec<i64> = enumerate(&nat, 3).iter().map(|p| p.value()).collect();
        assert_eq!(vals, vec![0, 1, 2, 3]);

        let vals: Vec<i64> = enumerate(&m23(), 2).iter().map(|p| p.value()).collect();
        assert_eq!(vals, vec![1, 2, 3, 4, 6, 9]);

        let cong = MonoidDescriptor::congruence_4_1(13);
        let vals: Vec<i64> = enumerate(&cong, 1).iter().map(|p| p.value()).collect();
        assert_eq!(vals, vec![1, 5, 9, 13]);
    }

    #[test]
    fn algebraic_laws_on_small_windows() {
        for monoid in [
            MonoidDescriptor::nat_additive(),
            m23(),
            MonoidDescriptor::congruence_4_1(9),
            zx2(),
        ] {
            let sample = enumerate(&monoid, 3);
            let shorter = enumerate(&monoid, 2);
            for p in &shorter {
                for q in &shorter {
                    for r in &shorter {
                        let lhs = p.compose(q).unwrap().compose(r).unwrap();
                        let rhs = p.compose(&q.compose(r).unwrap()).unwrap();
                        assert_eq!(lhs, rhs, "associativity");
                    }
                }
            }
            for p in &sample {
                for q in &sample {
                    if monoid.is_abelian() {
                        assert_eq!(
                            p.compose(q).unwrap(),
                            q.compose(p).unwrap(),
                            "commutativity"
                        );
                    }
                    // division consistency
                    if let Some(r) = p.try_divide(q).unwrap() {
                        assert_eq!(q.compose(&r).unwrap(), *p);
                    }
                }
            }
            // left-cancellativity
            for p in &shorter {
                for q in &sample {
                    for r in &sample {
                        if p.compose(q).unwrap() == p.compose(r).unwrap() {
                            assert_eq!(q, r, "left cancellation");
                        }
                    }
                }
            }
        }
    }
}
