//! Registry of algebraic laws checked by the harness.
//!
//! Every claim is expressed through [`LawContext`] so that the vacuous
//! constant of the product and sum can be varied without touching the laws.

use std::sync::Arc;

use crate::error::CoreError;
use crate::level::Level;
use crate::membership::Membership;
use crate::process::FuzzyProcess;
use crate::scalar::Scalar;
use crate::universe::ExecutionUniverse;

type Claim<T> = fn(&LawContext<T>, &[&FuzzyProcess<T>]) -> Result<bool, CoreError>;

/// A named, finitely decidable claim over `arity` processes.
pub struct Law<T> {
    pub id: &'static str,
    /// Which result the law comes from (`prop1`, `th3`, ...).
    pub source: &'static str,
    pub level: Level,
    /// Names of the quantified variables; the arity is its length.
    pub args: &'static [&'static str],
    pub statement: &'static str,
    /// The claim quantifies over crisp total testers internally.
    pub uses_testers: bool,
    claim: Claim<T>,
}

impl<T> Law<T> {
    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

impl<T: Scalar> Law<T> {
    pub fn holds(&self, ctx: &LawContext<T>, args: &[&FuzzyProcess<T>]) -> Result<bool, CoreError> {
        assert_eq!(
            args.len(),
            self.arity(),
            "law {} takes {} arguments",
            self.id,
            self.arity()
        );
        (self.claim)(ctx, args)
    }
}

impl<T> std::fmt::Debug for Law<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Law")
            .field("id", &self.id)
            .field("source", &self.source)
            .field("level", &self.level)
            .field("arity", &self.arity())
            .finish()
    }
}

/// Evaluation context shared by all tuples of one domain.
pub struct LawContext<T> {
    pub universe: Arc<ExecutionUniverse>,
    pub vacuous: Membership<T>,
    /// Crisp total processes over `universe`; empty unless a law needs them.
    pub testers: Vec<FuzzyProcess<T>>,
}

impl<T: Scalar> LawContext<T> {
    pub fn product(
        &self,
        p: &FuzzyProcess<T>,
        q: &FuzzyProcess<T>,
    ) -> Result<FuzzyProcess<T>, CoreError> {
        p.product_with(q, &self.vacuous)
    }

    pub fn sum(
        &self,
        p: &FuzzyProcess<T>,
        q: &FuzzyProcess<T>,
    ) -> Result<FuzzyProcess<T>, CoreError> {
        p.sum_with(q, &self.vacuous)
    }

    pub fn omega(&self) -> FuzzyProcess<T> {
        FuzzyProcess::omega(&self.universe)
    }
}

/// Source results every registry must cover.
pub const REQUIRED_SOURCES: &[&str] = &[
    "prop1", "cor1", "cor2i", "cor2ii", "th1", "th2", "th3", "th4i", "th4ii", "th4iii", "prop2",
    "prop3",
];

fn refines<T: Scalar>(
    level: Level,
    p: &FuzzyProcess<T>,
    q: &FuzzyProcess<T>,
) -> Result<bool, CoreError> {
    match level {
        Level::Membership => p.fuzzy_refines(q),
        Level::Support => p.support_refines(q),
    }
}

fn robust<T: Scalar>(level: Level, p: &FuzzyProcess<T>) -> bool {
    match level {
        Level::Membership => p.is_robust(),
        Level::Support => p.is_robust_support(),
    }
}

fn prop1<T: Scalar>(
    level: Level,
    c: &LawContext<T>,
    a: &[&FuzzyProcess<T>],
) -> Result<bool, CoreError> {
    let (p, q, r) = (a[0], a[1], a[2]);
    Ok(!refines(level, p, q)? || refines(level, &c.product(p, r)?, &c.product(q, r)?)?)
}

fn prop1_delta<T: Scalar>(c: &LawContext<T>, a: &[&FuzzyProcess<T>]) -> Result<bool, CoreError> {
    let (p, q, r) = (a[0], a[1], a[2]);
    if !p.fuzzy_refines(q)? {
        return Ok(true);
    }
    let (pr, qr) = (c.product(p, r)?, c.product(q, r)?);
    Ok(pr.delta().iter().zip(qr.delta()).all(|(x, y)| x >= y))
}

fn cor1<T: Scalar>(
    level: Level,
    c: &LawContext<T>,
    a: &[&FuzzyProcess<T>],
) -> Result<bool, CoreError> {
    let (p, q) = (a[0], a[1]);
    Ok(!refines(level, p, q)? || refines(level, p, &c.product(p, q)?)?)
}

fn cor2i<T: Scalar>(
    level: Level,
    c: &LawContext<T>,
    a: &[&FuzzyProcess<T>],
) -> Result<bool, CoreError> {
    let (p1, p2, q1, q2) = (a[0], a[1], a[2], a[3]);
    if !(refines(level, p1, q1)? && refines(level, p2, q2)?) {
        return Ok(true);
    }
    refines(level, &c.product(p1, p2)?, &c.product(q1, q2)?)
}

fn cor2ii<T: Scalar>(
    level: Level,
    c: &LawContext<T>,
    a: &[&FuzzyProcess<T>],
) -> Result<bool, CoreError> {
    let (p1, p2, q) = (a[0], a[1], a[2]);
    if !(refines(level, p1, q)? && refines(level, p2, q)?) {
        return Ok(true);
    }
    refines(level, &c.product(p1, p2)?, q)
}

fn th1<T: Scalar>(
    level: Level,
    c: &LawContext<T>,
    a: &[&FuzzyProcess<T>],
) -> Result<bool, CoreError> {
    let (p, q) = (a[0], a[1]);
    Ok(refines(level, p, q)? == robust(level, &c.product(&p.reflect(), q)?))
}

fn th2<T: Scalar>(
    level: Level,
    c: &LawContext<T>,
    a: &[&FuzzyProcess<T>],
) -> Result<bool, CoreError> {
    let (p, q) = (a[0], a[1]);
    let mut passes_all = true;
    for r in &c.testers {
        if robust(level, &c.product(r, p)?) && !robust(level, &c.product(r, q)?) {
            passes_all = false;
            break;
        }
    }
    Ok(refines(level, p, q)? == passes_all)
}

fn th3<T: Scalar>(
    level: Level,
    c: &LawContext<T>,
    a: &[&FuzzyProcess<T>],
) -> Result<bool, CoreError> {
    let (p, q, r) = (a[0], a[1], a[2]);
    let lhs = refines(level, p, &c.product(q, r)?)?;
    let r_min = c.sum(p, &q.reflect())?;
    Ok(lhs == refines(level, &r_min, r)?)
}

fn th4i<T: Scalar>(c: &LawContext<T>, a: &[&FuzzyProcess<T>]) -> Result<bool, CoreError> {
    Ok(a[0].join(&c.omega())?.is_robust())
}

fn th4ii<T: Scalar>(c: &LawContext<T>, a: &[&FuzzyProcess<T>]) -> Result<bool, CoreError> {
    Ok(a[0].meet(&c.omega())?.is_chaotic())
}

fn th4iii<T: Scalar>(c: &LawContext<T>, a: &[&FuzzyProcess<T>]) -> Result<bool, CoreError> {
    let omega = c.omega();
    let rebuilt = c.product(&a[0].join(&omega)?, &a[0].meet(&omega)?)?;
    Ok(&rebuilt == a[0])
}

fn prop2<T: Scalar>(
    level: Level,
    c: &LawContext<T>,
    a: &[&FuzzyProcess<T>],
) -> Result<bool, CoreError> {
    let (p, q) = (a[0], a[1]);
    if !(robust(level, p) && robust(level, q)) {
        return Ok(true);
    }
    Ok(robust(level, &c.product(p, q)?)
        && robust(level, &c.sum(p, q)?)
        && robust(level, &p.join(q)?)
        && robust(level, &p.meet(q)?))
}

fn prop3i<T: Scalar>(_: &LawContext<T>, a: &[&FuzzyProcess<T>]) -> Result<bool, CoreError> {
    let (p, q) = (a[0], a[1]);
    let refines = p.fuzzy_refines(q)?;
    Ok(refines == (&p.join(q)? == q) && refines == (&p.meet(q)? == p))
}

fn prop3ii<T: Scalar>(_: &LawContext<T>, a: &[&FuzzyProcess<T>]) -> Result<bool, CoreError> {
    let (p, q, r) = (a[0], a[1], a[2]);
    Ok(p.meet(&q.join(r)?)? == p.meet(q)?.join(&p.meet(r)?)?)
}

fn prop3iii<T: Scalar>(_: &LawContext<T>, a: &[&FuzzyProcess<T>]) -> Result<bool, CoreError> {
    let (p, q, r) = (a[0], a[1], a[2]);
    Ok(p.join(&q.meet(r)?)? == p.join(q)?.meet(&p.join(r)?)?)
}

fn omega_unit<T: Scalar>(c: &LawContext<T>, a: &[&FuzzyProcess<T>]) -> Result<bool, CoreError> {
    Ok(&c.product(a[0], &c.omega())? == a[0])
}

fn reflect_involution<T: Scalar>(
    _: &LawContext<T>,
    a: &[&FuzzyProcess<T>],
) -> Result<bool, CoreError> {
    Ok(&a[0].reflect().reflect() == a[0])
}

fn sum_de_morgan<T: Scalar>(c: &LawContext<T>, a: &[&FuzzyProcess<T>]) -> Result<bool, CoreError> {
    let (p, q) = (a[0], a[1]);
    Ok(c.sum(p, q)? == c.product(&p.reflect(), &q.reflect())?.reflect())
}

fn omega_join_reflect<T: Scalar>(
    c: &LawContext<T>,
    _: &[&FuzzyProcess<T>],
) -> Result<bool, CoreError> {
    let omega = c.omega();
    Ok(omega.join(&omega.reflect())? == omega)
}

fn commutativity<T: Scalar>(c: &LawContext<T>, a: &[&FuzzyProcess<T>]) -> Result<bool, CoreError> {
    let (p, q) = (a[0], a[1]);
    Ok(c.product(p, q)? == c.product(q, p)?
        && c.sum(p, q)? == c.sum(q, p)?
        && p.join(q)? == q.join(p)?
        && p.meet(q)? == q.meet(p)?)
}

fn product_associative<T: Scalar>(
    c: &LawContext<T>,
    a: &[&FuzzyProcess<T>],
) -> Result<bool, CoreError> {
    let (p, q, r) = (a[0], a[1], a[2]);
    Ok(c.product(&c.product(p, q)?, r)? == c.product(p, &c.product(q, r)?)?)
}

fn product_associative_support<T: Scalar>(
    c: &LawContext<T>,
    a: &[&FuzzyProcess<T>],
) -> Result<bool, CoreError> {
    let (p, q, r) = (a[0], a[1], a[2]);
    let lhs = c.product(&c.product(p, q)?, r)?;
    let rhs = c.product(p, &c.product(q, r)?)?;
    Ok(lhs.shadow() == rhs.shadow())
}

macro_rules! leveled {
    ($f:ident, $level:expr) => {
        |c, a| $f($level, c, a)
    };
}

/// All registered laws, in manifest order.
pub fn registry<T: Scalar>() -> Vec<Law<T>> {
    use Level::{Membership as M, Support as S};
    const PQR: &[&str] = &["p", "q", "r"];
    const PQ: &[&str] = &["p", "q"];
    const P: &[&str] = &["p"];
    const P1P2Q1Q2: &[&str] = &["p1", "p2", "q1", "q2"];
    const P1P2Q: &[&str] = &["p1", "p2", "q"];

    fn law<T>(
        id: &'static str,
        source: &'static str,
        level: Level,
        args: &'static [&'static str],
        statement: &'static str,
        claim: Claim<T>,
    ) -> Law<T> {
        Law {
            id,
            source,
            level,
            args,
            statement,
            uses_testers: false,
            claim,
        }
    }

    let mut laws = vec![
        law(
            "prop1",
            "prop1",
            M,
            PQR,
            "p ⊑ q ⇒ p⊗r ⊑ q⊗r",
            leveled!(prop1, M),
        ),
        law(
            "prop1-delta",
            "prop1",
            M,
            PQR,
            "p ⊑ q ⇒ δ(p⊗r) ≥ δ(q⊗r) pointwise",
            prop1_delta,
        ),
        law(
            "prop1-support",
            "prop1",
            S,
            PQR,
            "p ⊑s q ⇒ p⊗r ⊑s q⊗r",
            leveled!(prop1, S),
        ),
        law("cor1", "cor1", M, PQ, "p ⊑ q ⇒ p ⊑ p⊗q", leveled!(cor1, M)),
        law(
            "cor1-support",
            "cor1",
            S,
            PQ,
            "p ⊑s q ⇒ p ⊑s p⊗q",
            leveled!(cor1, S),
        ),
        law(
            "cor2i",
            "cor2i",
            M,
            P1P2Q1Q2,
            "p1 ⊑ q1 ∧ p2 ⊑ q2 ⇒ p1⊗p2 ⊑ q1⊗q2",
            leveled!(cor2i, M),
        ),
        law(
            "cor2i-support",
            "cor2i",
            S,
            P1P2Q1Q2,
            "p1 ⊑s q1 ∧ p2 ⊑s q2 ⇒ p1⊗p2 ⊑s q1⊗q2",
            leveled!(cor2i, S),
        ),
        law(
            "cor2ii",
            "cor2ii",
            M,
            P1P2Q,
            "p1 ⊑ q ∧ p2 ⊑ q ⇒ p1⊗p2 ⊑ q",
            leveled!(cor2ii, M),
        ),
        law(
            "cor2ii-support",
            "cor2ii",
            S,
            P1P2Q,
            "p1 ⊑s q ∧ p2 ⊑s q ⇒ p1⊗p2 ⊑s q",
            leveled!(cor2ii, S),
        ),
        law("th1", "th1", M, PQ, "p ⊑ q ⇔ γ(-p⊗q) ≡ 1", leveled!(th1, M)),
        law(
            "th1-support",
            "th1",
            S,
            PQ,
            "p ⊑s q ⇔ Y(-p⊗q) = E",
            leveled!(th1, S),
        ),
        law(
            "th2",
            "th2",
            M,
            PQ,
            "p ⊑ q ⇔ ∀ crisp total r: (r⊗p robust ⇒ r⊗q robust)",
            leveled!(th2, M),
        ),
        law(
            "th2-support",
            "th2",
            S,
            PQ,
            "p ⊑s q ⇔ ∀ crisp total r: (Y(r⊗p) = E ⇒ Y(r⊗q) = E)",
            leveled!(th2, S),
        ),
        law("th3", "th3", M, PQR, "p ⊑ q⊗r ⇔ p⊕-q ⊑ r", leveled!(th3, M)),
        law(
            "th3-support",
            "th3",
            S,
            PQR,
            "p ⊑s q⊗r ⇔ p⊕-q ⊑s r",
            leveled!(th3, S),
        ),
        law("th4i", "th4i", M, P, "p⊔Ω is robust", th4i),
        law("th4ii", "th4ii", M, P, "p⊓Ω is chaotic", th4ii),
        law("th4iii", "th4iii", M, P, "p = (p⊔Ω)⊗(p⊓Ω)", th4iii),
        law(
            "prop2",
            "prop2",
            M,
            PQ,
            "robust p, q ⇒ p⊗q, p⊕q, p⊔q, p⊓q robust",
            leveled!(prop2, M),
        ),
        law(
            "prop2-support",
            "prop2",
            S,
            PQ,
            "Y = E for p, q ⇒ Y = E for p⊗q, p⊕q, p⊔q, p⊓q",
            leveled!(prop2, S),
        ),
        law(
            "prop3i",
            "prop3",
            M,
            PQ,
            "p ⊑ q ⇔ p⊔q = q ⇔ p⊓q = p",
            prop3i,
        ),
        law("prop3ii", "prop3", M, PQR, "p⊓(q⊔r) = (p⊓q)⊔(p⊓r)", prop3ii),
        law(
            "prop3iii",
            "prop3",
            M,
            PQR,
            "p⊔(q⊓r) = (p⊔q)⊓(p⊔r)",
            prop3iii,
        ),
        law("omega-unit", "identities", M, P, "p⊗Ω = p", omega_unit),
        law(
            "reflect-involution",
            "identities",
            M,
            P,
            "--p = p",
            reflect_involution,
        ),
        law(
            "sum-de-morgan",
            "identities",
            M,
            PQ,
            "p⊕q = -(-p⊗-q)",
            sum_de_morgan,
        ),
        law(
            "omega-join-reflect",
            "identities",
            M,
            &[],
            "Ω⊔-Ω = Ω",
            omega_join_reflect,
        ),
        law(
            "commutativity",
            "identities",
            M,
            PQ,
            "⊗, ⊕, ⊔, ⊓ commute",
            commutativity,
        ),
        law(
            "product-associative",
            "identities",
            M,
            PQR,
            "(p⊗q)⊗r = p⊗(q⊗r)",
            product_associative,
        ),
        law(
            "product-associative-support",
            "identities",
            S,
            PQR,
            "(p⊗q)⊗r and p⊗(q⊗r) have equal supports",
            product_associative_support,
        ),
    ];
    for law in &mut laws {
        if law.source == "th2" {
            law.uses_testers = true;
        }
    }
    laws
}

/// Looks a law up by id.
pub fn find<T: Scalar>(id: &str) -> Option<Law<T>> {
    registry().into_iter().find(|l| l.id == id)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::Rational;

    #[test]
    fn registry_is_complete() {
        let laws = registry::<Rational>();
        let sources: HashSet<_> = laws.iter().map(|l| l.source).collect();
        for required in REQUIRED_SOURCES {
            assert!(
                sources.contains(required),
                "no law registered for {required}"
            );
        }
    }

    #[test]
    fn ids_are_unique() {
        let laws = registry::<Rational>();
        let ids: HashSet<_> = laws.iter().map(|l| l.id).collect();
        assert_eq!(ids.len(), laws.len());
    }
}
