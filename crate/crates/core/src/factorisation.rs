//! The comprehensive factorisation system on finite categories: every functor
//! factors as a final functor followed by a discrete fibration, uniquely up to
//! a unique isomorphism, and the two classes are orthogonal.

use std::sync::Arc;

use crate::error::{DfibWitness, Error, FinalWitness, Result};
use crate::fincat::{
    comma_components, elements, same_category, Elements, FinCat, FinFunctor, LiftIndex, Obj,
    Presheaf, Span, SpanCell,
};

/// `original = right ∘ left` with `left` final and `right` a discrete fibration.
#[derive(Clone, Debug)]
pub struct Factorisation {
    pub original: FinFunctor,
    pub left: FinFunctor,
    pub right: FinFunctor,
    /// `witness(b) = π₀(b/f)`, the presheaf whose elements are the middle.
    pub witness: Presheaf,
    pub elements: Elements,
}

impl Factorisation {
    pub fn middle(&self) -> &Arc<FinCat> {
        self.left.codomain()
    }
}

/// Factors `f: A → B` through the category of elements of
/// `b ↦ π₀(b/f)`. Sections are named `[a,β]` after the least member of their
/// class.
pub fn comprehensive_factor(f: &FinFunctor) -> Factorisation {
    let (dom, cod) = (f.domain(), f.codomain());
    let per_object: Vec<_> = cod.objects().map(|b| comma_components(b, f)).collect();
    let sections = per_object
        .iter()
        .map(|(objects, classes)| {
            classes
                .representatives()
                .into_iter()
                .map(|i| {
                    let (a, beta) = objects[i];
                    format!("[{},{}]", dom.object_name(a), cod.morphism_name(beta))
                })
                .collect()
        })
        .collect();
    let class_of = |b: Obj, a: Obj, beta| {
        let (objects, classes) = &per_object[b.0];
        let i = objects
            .binary_search(&(a, beta))
            .expect("comma object exists");
        classes.class_of[i]
    };
    let representatives: Vec<Vec<usize>> = per_object
        .iter()
        .map(|(_, c)| c.representatives())
        .collect();
    let witness = Presheaf::from_fn(cod.clone(), sections, |alpha, k| {
        let (b, b2) = (cod.src(alpha), cod.tgt(alpha));
        let (a, beta) = per_object[b2.0].0[representatives[b2.0][k]];
        class_of(b, a, cod.compose(beta, alpha))
    });
    let el = elements(&witness);
    let left = FinFunctor::new_unchecked(
        dom.clone(),
        el.category.clone(),
        dom.objects()
            .map(|a| {
                let b = f.object(a);
                el.object_of(b, class_of(b, a, cod.identity(b)))
            })
            .collect(),
        dom.morphisms()
            .map(|alpha| {
                let a2 = dom.tgt(alpha);
                let b2 = f.object(a2);
                el.morphism_of(f.morphism(alpha), class_of(b2, a2, cod.identity(b2)))
            })
            .collect(),
    );
    Factorisation {
        original: f.clone(),
        right: el.projection.clone(),
        left,
        witness,
        elements: el,
    }
}

/// A commuting square `right ∘ top = bottom ∘ left`.
///
/// ```text
///   A ──top──→ E
///   │          │
///  left      right
///   ↓          ↓
///   B ─bottom→ F
/// ```
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub left: FinFunctor,
    pub right: FinFunctor,
    pub top: FinFunctor,
    pub bottom: FinFunctor,
}

impl LiftingProblem {
    pub fn new(
        left: FinFunctor,
        right: FinFunctor,
        top: FinFunctor,
        bottom: FinFunctor,
    ) -> Result<Self> {
        let typed = same_category(left.domain(), top.domain())
            && same_category(left.codomain(), bottom.domain())
            && same_category(top.codomain(), right.domain())
            && same_category(bottom.codomain(), right.codomain());
        if !typed {
            return Err(Error::Mismatch("lifting square is not well typed".into()));
        }
        if right.after(&top)? != bottom.after(&left)? {
            return Err(Error::Mismatch("lifting square does not commute".into()));
        }
        Ok(Self {
            left,
            right,
            top,
            bottom,
        })
    }
}

/// The unique diagonal `w: B → E` with `w ∘ left = top` and
/// `right ∘ w = bottom`.
///
/// `w(b)` is read off at the least object `(a, β)` of `b/left` by lifting
/// `bottom(β)` along `right` at `top(a)`; every other object of the comma
/// category is checked to give the same answer.
pub fn orthogonal_lift(p: &LiftingProblem) -> Result<FinFunctor> {
    let (b_cat, e_cat) = (p.left.codomain(), p.right.domain());
    let lifts = LiftIndex::new(&p.right);
    let lift = |target: Obj, beta| {
        lifts.unique_lift(target, beta).ok_or_else(|| {
            Error::NotDiscreteFibration(DfibWitness {
                object: e_cat.object_name(target).to_string(),
                morphism: p.right.codomain().morphism_name(beta).to_string(),
                lifts: lifts.lifts(target, beta).len(),
            })
        })
    };
    let mut on_objects = Vec::with_capacity(b_cat.num_objects());
    for b in b_cat.objects() {
        let (objects, classes) = comma_components(b, &p.left);
        if classes.count != 1 {
            return Err(Error::NotFinal(FinalWitness {
                object: b_cat.object_name(b).to_string(),
                components: classes.count,
            }));
        }
        let mut chosen = None;
        for &(a, beta) in &objects {
            let e = e_cat.src(lift(p.top.object(a), p.bottom.morphism(beta))?);
            match chosen {
                None => chosen = Some(e),
                Some(c) if c == e => {}
                Some(_) => {
                    return Err(Error::Internal(format!(
                        "lift at `{}` depends on the chosen base point",
                        b_cat.object_name(b)
                    )))
                }
            }
        }
        on_objects.push(chosen.expect("final functor has nonempty commas"));
    }
    let mut on_morphisms = Vec::with_capacity(b_cat.num_morphisms());
    for gamma in b_cat.morphisms() {
        let m = lift(on_objects[b_cat.tgt(gamma).0], p.bottom.morphism(gamma))?;
        if e_cat.src(m) != on_objects[b_cat.src(gamma).0] {
            return Err(Error::Internal(format!(
                "lift of `{}` has the wrong source",
                b_cat.morphism_name(gamma)
            )));
        }
        on_morphisms.push(m);
    }
    let w = FinFunctor::new_unchecked(b_cat.clone(), e_cat.clone(), on_objects, on_morphisms);
    if w.after(&p.left)? != p.top || p.right.after(&w)? != p.bottom {
        return Err(Error::Internal(
            "diagonal does not satisfy the triangle identities".into(),
        ));
    }
    Ok(w)
}

/// A cell split as `right ∘ special`, where `special` has identity borders and
/// a final middle component and `right` has discrete fibrations everywhere.
#[derive(Clone, Debug)]
pub struct CellFactorisation {
    pub special: SpanCell,
    pub right: SpanCell,
    pub factorisation: Factorisation,
}

/// Factors the middle component of a cell whose border components are
/// discrete fibrations. The legs of the new apex are the diagonals of the
/// squares formed by the old legs, the final part, and the borders.
pub fn factor_cell(c: &SpanCell) -> Result<CellFactorisation> {
    for border in [&c.left, &c.right] {
        crate::fincat::check_discrete_fibration(border).map_err(Error::NotDiscreteFibration)?;
    }
    let fact = comprehensive_factor(&c.middle);
    let legs = [
        (&c.top.left, &c.left, &c.bottom.left),
        (&c.top.right, &c.right, &c.bottom.right),
    ]
    .map(|(top, border, bottom)| {
        let problem = LiftingProblem::new(
            fact.left.clone(),
            border.clone(),
            top.clone(),
            bottom.after(&fact.right)?,
        )?;
        orthogonal_lift(&problem)
    });
    let [left_leg, right_leg] = legs;
    let middle_span = Span::new(left_leg?, right_leg?)?;
    let special = SpanCell {
        top: c.top.clone(),
        bottom: middle_span.clone(),
        left: FinFunctor::identity(c.left.domain().clone()),
        middle: fact.left.clone(),
        right: FinFunctor::identity(c.right.domain().clone()),
    };
    let right = SpanCell {
        top: middle_span,
        bottom: c.bottom.clone(),
        left: c.left.clone(),
        middle: fact.right.clone(),
        right: c.right.clone(),
    };
    Ok(CellFactorisation {
        special,
        right,
        factorisation: fact,
    })
}
