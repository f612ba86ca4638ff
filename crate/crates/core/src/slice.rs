//! Slices over a monad in `Span(Cat)`.
//!
//! A monad is presented by a span `base ← carrier → base` with computable
//! multiplication and unit. Cells over it compose by pullback followed by the
//! multiplication; the restricted variant then keeps the discrete-fibration
//! part of the comprehensive factorisation. Associators and unitors of the
//! restricted variant are obtained by orthogonal lifting.

use std::collections::HashMap;
use std::sync::Arc;

use crate::clock::{
    copycat, hcompose, HState, Polarity, Scheduling, Side, Triangle, VerticalString,
};
use crate::day::StrictMonoidalCat;
use crate::error::{Error, Result, Violation};
use crate::factorisation::{factor_cell, orthogonal_lift, CellFactorisation, LiftingProblem};
use crate::fincat::{
    check_discrete_fibration, check_final, pullback, same_category, FinCat, FinFunctor, Mor, Obj,
    Pullback, Span, SpanCell,
};

/// A monad in `Span(Cat)`, i.e. a double category with finitely many cells.
pub trait MonadPresentation {
    fn name(&self) -> String;
    /// Vertical category.
    fn base(&self) -> &Arc<FinCat>;
    /// Category of cells.
    fn carrier(&self) -> &Arc<FinCat>;
    fn left(&self) -> &FinFunctor;
    fn right(&self) -> &FinFunctor;
    /// Multiplication on a pair with `right(x) = left(y)`.
    fn mu_object(&self, x: Obj, y: Obj) -> Result<Obj>;
    fn mu_morphism(&self, f: Mor, g: Mor) -> Result<Mor>;
    fn eta_object(&self, b: Obj) -> Obj;
    fn eta_morphism(&self, m: Mor) -> Mor;

    fn span(&self) -> Span {
        Span {
            left: self.left().clone(),
            right: self.right().clone(),
        }
    }
}

/// Checks border compatibility, functoriality, associativity and unitality
/// of `μ` and `η` on every composable pair and triple of the carrier.
pub fn check_monad_laws<M: MonadPresentation + ?Sized>(m: &M) -> Result<Vec<Violation>> {
    let (base, carrier, l, r) = (m.base(), m.carrier(), m.left(), m.right());
    let mut report = Vec::new();
    let mut fail = |law: &'static str, detail: String| report.push(Violation::new(law, detail));
    for b in base.objects() {
        let e = m.eta_object(b);
        if l.object(e) != b || r.object(e) != b {
            fail("unit borders", format!("η({})", base.object_name(b)));
        }
        if m.eta_morphism(base.identity(b)) != carrier.identity(e) {
            fail(
                "unit preserves identities",
                format!("η(id {})", base.object_name(b)),
            );
        }
    }
    for (g, f, gf) in base.composition_table() {
        if carrier.try_compose(m.eta_morphism(g), m.eta_morphism(f)) != Some(m.eta_morphism(gf)) {
            fail(
                "unit preserves composition",
                format!("({}, {})", base.morphism_name(g), base.morphism_name(f)),
            );
        }
    }
    for x in carrier.morphisms() {
        let (lx, rx) = (m.eta_morphism(l.morphism(x)), m.eta_morphism(r.morphism(x)));
        if m.mu_morphism(lx, x)? != x || m.mu_morphism(x, rx)? != x {
            fail("unit law", carrier.morphism_name(x).to_string());
        }
    }
    let pairs = pullback(r, l)?;
    let mut by_left: HashMap<Mor, Vec<Mor>> = HashMap::new();
    for z in carrier.morphisms() {
        by_left.entry(l.morphism(z)).or_default().push(z);
    }
    for p in pairs.apex.morphisms() {
        let (x, y) = (pairs.first.morphism(p), pairs.second.morphism(p));
        let xy = m.mu_morphism(x, y)?;
        if l.morphism(xy) != l.morphism(x) || r.morphism(xy) != r.morphism(y) {
            fail(
                "multiplication borders",
                format!(
                    "μ({}, {})",
                    carrier.morphism_name(x),
                    carrier.morphism_name(y)
                ),
            );
        }
        for &z in by_left.get(&r.morphism(y)).into_iter().flatten() {
            if m.mu_morphism(xy, z)? != m.mu_morphism(x, m.mu_morphism(y, z)?)? {
                fail(
                    "multiplication associative",
                    format!(
                        "({}, {}, {})",
                        carrier.morphism_name(x),
                        carrier.morphism_name(y),
                        carrier.morphism_name(z)
                    ),
                );
            }
        }
    }
    for o in pairs.apex.objects() {
        let (x, y) = (pairs.first.object(o), pairs.second.object(o));
        let id = m.mu_morphism(carrier.identity(x), carrier.identity(y))?;
        if id != carrier.identity(m.mu_object(x, y)?) {
            fail(
                "multiplication preserves identities",
                pairs.apex.object_name(o).to_string(),
            );
        }
    }
    for (g, f, gf) in pairs.apex.composition_table() {
        let mu = |p: Mor| m.mu_morphism(pairs.first.morphism(p), pairs.second.morphism(p));
        if carrier.try_compose(mu(g)?, mu(f)?) != Some(mu(gf)?) {
            fail(
                "multiplication preserves composition",
                format!(
                    "({}, {})",
                    pairs.apex.morphism_name(g),
                    pairs.apex.morphism_name(f)
                ),
            );
        }
    }
    Ok(report)
}

/// The clock restricted to schedulings from `OO` whose borders have at most
/// `bound` moves, ordered by extension. Its vertical category is the chain
/// `0 ≤ … ≤ bound` of move counts from `O`.
#[derive(Clone, Debug)]
pub struct ClockMonad {
    bound: usize,
    base: Arc<FinCat>,
    carrier: Arc<FinCat>,
    left: FinFunctor,
    right: FinFunctor,
    schedulings: Vec<Scheduling>,
    index: HashMap<Scheduling, Obj>,
    units: Vec<Obj>,
}

impl ClockMonad {
    pub fn new(bound: usize) -> Self {
        let mut schedulings = vec![Scheduling::empty(HState::OO)];
        let mut k = 0;
        while k < schedulings.len() {
            let s = schedulings[k].clone();
            let b = s.borders();
            for side in [Side::Left, Side::Right] {
                let room = match side {
                    Side::Left => b.left.length < bound,
                    Side::Right => b.right.length < bound,
                };
                if room && Triangle::for_move(s.end(), side).is_some() {
                    let mut next = s.clone();
                    next.push_side(side).expect("generator exists");
                    schedulings.push(next);
                }
            }
            k += 1;
        }
        schedulings.sort_by(|a, b| (a.len(), a.steps()).cmp(&(b.len(), b.steps())));
        let index: HashMap<Scheduling, Obj> = schedulings
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), Obj(i)))
            .collect();
        let names = schedulings.iter().map(ToString::to_string).collect();
        let carrier = Arc::new(FinCat::poset(
            names,
            |a, b| schedulings[a].is_prefix_of(&schedulings[b]),
            |a, b| format!("{a}<={b}"),
        ));
        let base = Arc::new(FinCat::chain(bound + 1));
        let border = |f: fn(&Scheduling) -> usize| {
            let objs = schedulings.iter().map(|s| Obj(f(s))).collect();
            FinFunctor::from_object_map(carrier.clone(), base.clone(), objs)
                .expect("borders are monotone")
        };
        let left = border(|s| s.borders().left.length);
        let right = border(|s| s.borders().right.length);
        let units = (0..=bound)
            .map(|n| index[&copycat(VerticalString::new(Polarity::O, n))])
            .collect();
        Self {
            bound,
            base,
            carrier,
            left,
            right,
            schedulings,
            index,
            units,
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn scheduling(&self, o: Obj) -> &Scheduling {
        &self.schedulings[o.0]
    }

    pub fn object_of(&self, s: &Scheduling) -> Result<Obj> {
        self.index.get(s).copied().ok_or_else(|| {
            let b = s.borders();
            Error::BoundExceeded {
                what: "scheduling border length",
                actual: b.left.length.max(b.right.length),
                limit: self.bound,
            }
        })
    }

    /// The unique morphism `s → t` for `s` a prefix of `t`.
    pub fn extension(&self, s: Obj, t: Obj) -> Result<Mor> {
        self.carrier.hom(s, t).first().copied().ok_or_else(|| {
            Error::Mismatch(format!(
                "{} is not a prefix of {}",
                self.schedulings[s.0], self.schedulings[t.0]
            ))
        })
    }
}

impl MonadPresentation for ClockMonad {
    fn name(&self) -> String {
        format!("clock(bound {})", self.bound)
    }

    fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    fn carrier(&self) -> &Arc<FinCat> {
        &self.carrier
    }

    fn left(&self) -> &FinFunctor {
        &self.left
    }

    fn right(&self) -> &FinFunctor {
        &self.right
    }

    fn mu_object(&self, x: Obj, y: Obj) -> Result<Obj> {
        self.object_of(&hcompose(&self.schedulings[x.0], &self.schedulings[y.0])?)
    }

    fn mu_morphism(&self, f: Mor, g: Mor) -> Result<Mor> {
        let c = &self.carrier;
        let src = self.mu_object(c.src(f), c.src(g))?;
        let tgt = self.mu_object(c.tgt(f), c.tgt(g))?;
        self.extension(src, tgt)
    }

    fn eta_object(&self, b: Obj) -> Obj {
        self.units[b.0]
    }

    fn eta_morphism(&self, m: Mor) -> Mor {
        let (s, t) = (self.base.src(m), self.base.tgt(m));
        self.extension(self.units[s.0], self.units[t.0])
            .expect("copycats extend each other")
    }
}

/// A strict monoidal category as a monad on the terminal category.
#[derive(Clone, Debug)]
pub struct MonoidMonad {
    monoidal: StrictMonoidalCat,
    terminal: Arc<FinCat>,
    bang: FinFunctor,
}

impl MonoidMonad {
    pub fn new(monoidal: StrictMonoidalCat) -> Self {
        let terminal = Arc::new(FinCat::terminal());
        let bang = FinFunctor::to_terminal(monoidal.base().clone(), terminal.clone());
        Self {
            monoidal,
            terminal,
            bang,
        }
    }

    pub fn monoidal(&self) -> &StrictMonoidalCat {
        &self.monoidal
    }
}

impl MonadPresentation for MonoidMonad {
    fn name(&self) -> String {
        format!("monoid({})", self.monoidal.name())
    }

    fn base(&self) -> &Arc<FinCat> {
        &self.terminal
    }

    fn carrier(&self) -> &Arc<FinCat> {
        self.monoidal.base()
    }

    fn left(&self) -> &FinFunctor {
        &self.bang
    }

    fn right(&self) -> &FinFunctor {
        &self.bang
    }

    fn mu_object(&self, x: Obj, y: Obj) -> Result<Obj> {
        Ok(self.monoidal.tensor_objects(x, y))
    }

    fn mu_morphism(&self, f: Mor, g: Mor) -> Result<Mor> {
        Ok(self.monoidal.tensor_morphisms(f, g))
    }

    fn eta_object(&self, _: Obj) -> Obj {
        self.monoidal.unit()
    }

    fn eta_morphism(&self, _: Mor) -> Mor {
        self.monoidal.base().identity(self.monoidal.unit())
    }
}

/// An object of the slice: a functor into the vertical category.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceObject {
    pub functor: FinFunctor,
}

impl SliceObject {
    pub fn new(functor: FinFunctor) -> Self {
        Self { functor }
    }

    pub fn category(&self) -> &Arc<FinCat> {
        self.functor.domain()
    }

    /// Objects of the restricted slice are discrete fibrations.
    pub fn is_restricted(&self) -> bool {
        check_discrete_fibration(&self.functor).is_ok()
    }
}

/// A cell from a span `A ← S → B` to the monad's span, with borders
/// `source: A → base` and `target: B → base`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceCell {
    pub cell: SpanCell,
}

impl SliceCell {
    pub fn new<M: MonadPresentation + ?Sized>(
        m: &M,
        source: FinFunctor,
        target: FinFunctor,
        legs: Span,
        middle: FinFunctor,
    ) -> Result<Self> {
        let cell = SpanCell {
            top: legs,
            bottom: m.span(),
            left: source,
            middle,
            right: target,
        };
        crate::error::ensure_valid(cell.validate())?;
        Ok(Self { cell })
    }

    pub fn apex(&self) -> &Arc<FinCat> {
        self.cell.top.apex()
    }

    pub fn source(&self) -> SliceObject {
        SliceObject::new(self.cell.left.clone())
    }

    pub fn target(&self) -> SliceObject {
        SliceObject::new(self.cell.right.clone())
    }

    pub fn left_leg(&self) -> &FinFunctor {
        &self.cell.top.left
    }

    pub fn right_leg(&self) -> &FinFunctor {
        &self.cell.top.right
    }

    pub fn middle(&self) -> &FinFunctor {
        &self.cell.middle
    }

    /// All three components are discrete fibrations.
    pub fn is_restricted(&self) -> bool {
        [&self.cell.left, &self.cell.middle, &self.cell.right]
            .into_iter()
            .all(|f| check_discrete_fibration(f).is_ok())
    }
}

/// Pullback of two cells over their shared border, with the multiplication
/// as middle component.
pub fn paste_compose<M: MonadPresentation + ?Sized>(
    alpha: &SliceCell,
    beta: &SliceCell,
    m: &M,
) -> Result<SliceCell> {
    Ok(paste_with_pullback(alpha, beta, m)?.0)
}

fn paste_with_pullback<M: MonadPresentation + ?Sized>(
    alpha: &SliceCell,
    beta: &SliceCell,
    m: &M,
) -> Result<(SliceCell, Pullback)> {
    if alpha.cell.right != beta.cell.left {
        return Err(Error::Mismatch("cells do not share a border".into()));
    }
    let pb = pullback(alpha.right_leg(), beta.left_leg())?;
    let apex = &pb.apex;
    let on_objects = apex
        .objects()
        .map(|o| {
            m.mu_object(
                alpha.middle().object(pb.first.object(o)),
                beta.middle().object(pb.second.object(o)),
            )
        })
        .collect::<Result<_>>()?;
    let on_morphisms = apex
        .morphisms()
        .map(|f| {
            m.mu_morphism(
                alpha.middle().morphism(pb.first.morphism(f)),
                beta.middle().morphism(pb.second.morphism(f)),
            )
        })
        .collect::<Result<_>>()?;
    let middle = FinFunctor::new(apex.clone(), m.carrier().clone(), on_objects, on_morphisms)?;
    let legs = Span::new(
        alpha.left_leg().after(&pb.first)?,
        beta.right_leg().after(&pb.second)?,
    )?;
    let cell = SliceCell::new(
        m,
        alpha.cell.left.clone(),
        beta.cell.right.clone(),
        legs,
        middle,
    )?;
    Ok((cell, pb))
}

/// The cell with apex `A`, identity legs and middle `η ∘ p`.
pub fn paste_identity<M: MonadPresentation + ?Sized>(p: &SliceObject, m: &M) -> Result<SliceCell> {
    let f = &p.functor;
    let middle = FinFunctor::new(
        f.domain().clone(),
        m.carrier().clone(),
        f.object_map().iter().map(|&b| m.eta_object(b)).collect(),
        f.morphism_map()
            .iter()
            .map(|&b| m.eta_morphism(b))
            .collect(),
    )?;
    let id = FinFunctor::identity(f.domain().clone());
    SliceCell::new(m, f.clone(), f.clone(), Span::new(id.clone(), id)?, middle)
}

/// A restricted composite with the data used to build it.
#[derive(Clone, Debug)]
pub struct Composite {
    pub pasted: SliceCell,
    pub pullback: Option<Pullback>,
    pub factored: CellFactorisation,
    pub cell: SliceCell,
}

impl Composite {
    /// The final part `pasted apex → cell apex`.
    pub fn final_part(&self) -> &FinFunctor {
        &self.factored.factorisation.left
    }
}

fn restrict(pasted: SliceCell, pb: Option<Pullback>) -> Result<Composite> {
    let factored = factor_cell(&pasted.cell)?;
    let cell = SliceCell {
        cell: factored.right.clone(),
    };
    Ok(Composite {
        pasted,
        pullback: pb,
        factored,
        cell,
    })
}

pub fn restricted_compose_full<M: MonadPresentation + ?Sized>(
    alpha: &SliceCell,
    beta: &SliceCell,
    m: &M,
) -> Result<Composite> {
    let (pasted, pb) = paste_with_pullback(alpha, beta, m)?;
    restrict(pasted, Some(pb))
}

pub fn restricted_identity_full<M: MonadPresentation + ?Sized>(
    p: &SliceObject,
    m: &M,
) -> Result<Composite> {
    restrict(paste_identity(p, m)?, None)
}

/// The right part of the factorised pasting.
pub fn restricted_compose<M: MonadPresentation + ?Sized>(
    alpha: &SliceCell,
    beta: &SliceCell,
    m: &M,
) -> Result<SliceCell> {
    Ok(restricted_compose_full(alpha, beta, m)?.cell)
}

pub fn restricted_identity<M: MonadPresentation + ?Sized>(
    p: &SliceObject,
    m: &M,
) -> Result<SliceCell> {
    Ok(restricted_identity_full(p, m)?.cell)
}

/// A functor between the apexes of two cells with the same borders that
/// commutes with both legs and the middle components.
#[derive(Clone, Debug)]
pub struct SpecialMap {
    pub source: SliceCell,
    pub target: SliceCell,
    pub map: FinFunctor,
}

impl SpecialMap {
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        if self.source.cell.left != self.target.cell.left
            || self.source.cell.right != self.target.cell.right
        {
            report.push(Violation::new(
                "special map borders",
                "source and target borders differ",
            ));
        }
        if !same_category(self.map.domain(), self.source.apex())
            || !same_category(self.map.codomain(), self.target.apex())
        {
            report.push(Violation::new(
                "special map typing",
                "map is not between the apexes",
            ));
            return report;
        }
        report.extend(self.map.validate());
        let commutes =
            |a: &FinFunctor, b: &FinFunctor| b.after(&self.map).map(|c| &c == a).unwrap_or(false);
        for (what, a, b) in [
            (
                "special map left leg",
                self.source.left_leg(),
                self.target.left_leg(),
            ),
            (
                "special map right leg",
                self.source.right_leg(),
                self.target.right_leg(),
            ),
            (
                "special map middle",
                self.source.middle(),
                self.target.middle(),
            ),
        ] {
            if !commutes(a, b) {
                report.push(Violation::new(what, "square does not commute"));
            }
        }
        report
    }

    pub fn is_isomorphism(&self) -> bool {
        self.map.is_isomorphism()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &SpecialMap) -> Result<SpecialMap> {
        Ok(SpecialMap {
            source: self.source.clone(),
            target: next.target.clone(),
            map: next.map.after(&self.map)?,
        })
    }
}

fn checked(map: SpecialMap) -> Result<SpecialMap> {
    let report = map.validate();
    if report.is_empty() {
        Ok(map)
    } else {
        Err(Error::Internal(format!(
            "lifted comparison is not special: {}",
            report
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ")
        )))
    }
}

/// Lifts `top: P → target apex` against the final part `P → source apex` of
/// `source`, giving the comparison `source apex → target apex`.
fn compare(
    final_part: &FinFunctor,
    source: &Composite,
    target: &SliceCell,
    top: FinFunctor,
) -> Result<SpecialMap> {
    check_final(final_part).map_err(Error::NotFinal)?;
    let problem = LiftingProblem::new(
        final_part.clone(),
        target.middle().clone(),
        top,
        source.cell.middle().clone(),
    )?;
    checked(SpecialMap {
        source: source.cell.clone(),
        target: target.clone(),
        map: orthogonal_lift(&problem)?,
    })
}

/// The comparison `((α;β);γ) → (α;(β;γ))`, where `;` is restricted
/// composition in diagrammatic order.
pub fn associator<M: MonadPresentation + ?Sized>(
    alpha: &SliceCell,
    beta: &SliceCell,
    gamma: &SliceCell,
    m: &M,
) -> Result<SpecialMap> {
    let ab = restricted_compose_full(alpha, beta, m)?;
    let ab_c = restricted_compose_full(&ab.cell, gamma, m)?;
    let bc = restricted_compose_full(beta, gamma, m)?;
    let a_bc = restricted_compose_full(alpha, &bc.cell, m)?;
    let (pb_ab, pb_bc) = (ab.pullback.as_ref().unwrap(), bc.pullback.as_ref().unwrap());
    let (pb_ab_c, pb_a_bc) = (
        ab_c.pullback.as_ref().unwrap(),
        a_bc.pullback.as_ref().unwrap(),
    );
    // triple apex S ×_B T ×_C U, bracketed on the left
    let triple = pullback(&gamma_left_leg_of(beta, pb_ab)?, gamma.left_leg())?;
    let to_s = pb_ab.first.after(&triple.first)?;
    let to_t = pb_ab.second.after(&triple.first)?;
    let to_u = triple.second.clone();
    let to_left = pb_ab_c.mediate(&ab.final_part().after(&triple.first)?, &to_u)?;
    let phi_left = ab_c.final_part().after(&to_left)?;
    let to_tu = pb_bc.mediate(&to_t, &to_u)?;
    let to_right = pb_a_bc.mediate(&to_s, &bc.final_part().after(&to_tu)?)?;
    let phi_right = a_bc.final_part().after(&to_right)?;
    compare(&phi_left, &ab_c, &a_bc.cell, phi_right)
}

fn gamma_left_leg_of(beta: &SliceCell, pb: &Pullback) -> Result<FinFunctor> {
    beta.right_leg().after(&pb.second)
}

/// `w;δ` for a special map `w` and a cell `δ` after it.
pub fn whisker_right<M: MonadPresentation + ?Sized>(
    w: &SpecialMap,
    delta: &SliceCell,
    m: &M,
) -> Result<SpecialMap> {
    let from = restricted_compose_full(&w.source, delta, m)?;
    let to = restricted_compose_full(&w.target, delta, m)?;
    let (pf, pt) = (
        from.pullback.as_ref().unwrap(),
        to.pullback.as_ref().unwrap(),
    );
    let across = pt.mediate(&w.map.after(&pf.first)?, &pf.second)?;
    compare(
        from.final_part(),
        &from,
        &to.cell,
        to.final_part().after(&across)?,
    )
}

/// `δ;w` for a cell `δ` before a special map `w`.
pub fn whisker_left<M: MonadPresentation + ?Sized>(
    delta: &SliceCell,
    w: &SpecialMap,
    m: &M,
) -> Result<SpecialMap> {
    let from = restricted_compose_full(delta, &w.source, m)?;
    let to = restricted_compose_full(delta, &w.target, m)?;
    let (pf, pt) = (
        from.pullback.as_ref().unwrap(),
        to.pullback.as_ref().unwrap(),
    );
    let across = pt.mediate(&pf.first, &w.map.after(&pf.second)?)?;
    compare(
        from.final_part(),
        &from,
        &to.cell,
        to.final_part().after(&across)?,
    )
}

/// The comparison `(id_A;α) → α` for a restricted cell `α`.
pub fn left_unitor<M: MonadPresentation + ?Sized>(alpha: &SliceCell, m: &M) -> Result<SpecialMap> {
    let unit = restricted_identity_full(&alpha.source(), m)?;
    let composite = restricted_compose_full(&unit.cell, alpha, m)?;
    let pb = composite.pullback.as_ref().unwrap();
    // A ×_A S ≅ S; go through the apex of the pasted identity, which is A
    let apex_pb = pullback(
        &FinFunctor::identity(alpha.source().category().clone()),
        alpha.left_leg(),
    )?;
    let into = pb.mediate(&unit.final_part().after(&apex_pb.first)?, &apex_pb.second)?;
    let phi = composite.final_part().after(&into)?;
    compare(&phi, &composite, alpha, apex_pb.second.clone())
}

/// The comparison `(α;id_B) → α` for a restricted cell `α`.
pub fn right_unitor<M: MonadPresentation + ?Sized>(alpha: &SliceCell, m: &M) -> Result<SpecialMap> {
    let unit = restricted_identity_full(&alpha.target(), m)?;
    let composite = restricted_compose_full(alpha, &unit.cell, m)?;
    let pb = composite.pullback.as_ref().unwrap();
    let apex_pb = pullback(
        alpha.right_leg(),
        &FinFunctor::identity(alpha.target().category().clone()),
    )?;
    let into = pb.mediate(&apex_pb.first, &unit.final_part().after(&apex_pb.second)?)?;
    let phi = composite.final_part().after(&into)?;
    compare(&phi, &composite, alpha, apex_pb.first.clone())
}

/// Both ways around the pentagon from `((αβ)γ)δ` to `α(β(γδ))`.
#[derive(Clone, Debug)]
pub struct Pentagon {
    pub upper: SpecialMap,
    pub lower: SpecialMap,
    pub associators: [SpecialMap; 5],
}

impl Pentagon {
    pub fn commutes(&self) -> bool {
        self.upper.map == self.lower.map
    }
}

pub fn pentagon<M: MonadPresentation + ?Sized>(
    alpha: &SliceCell,
    beta: &SliceCell,
    gamma: &SliceCell,
    delta: &SliceCell,
    m: &M,
) -> Result<Pentagon> {
    let ab = restricted_compose(alpha, beta, m)?;
    let bc = restricted_compose(beta, gamma, m)?;
    let cd = restricted_compose(gamma, delta, m)?;
    let a1 = whisker_right(&associator(alpha, beta, gamma, m)?, delta, m)?;
    let a2 = associator(alpha, &bc, delta, m)?;
    let a3 = whisker_left(alpha, &associator(beta, gamma, delta, m)?, m)?;
    let a4 = associator(&ab, gamma, delta, m)?;
    let a5 = associator(alpha, beta, &cd, m)?;
    let upper = a1.then(&a2)?.then(&a3)?;
    let lower = a4.then(&a5)?;
    Ok(Pentagon {
        upper,
        lower,
        associators: [a1, a2, a3, a4, a5],
    })
}

pub fn pentagon_check<M: MonadPresentation + ?Sized>(
    alpha: &SliceCell,
    beta: &SliceCell,
    gamma: &SliceCell,
    delta: &SliceCell,
    m: &M,
) -> Result<bool> {
    let p = pentagon(alpha, beta, gamma, delta, m)?;
    Ok(p.commutes() && p.associators.iter().all(SpecialMap::is_isomorphism))
}

/// `(α;id);β → α;β` two ways: through the right unitor, and through the
/// associator followed by the left unitor.
pub fn triangle_check<M: MonadPresentation + ?Sized>(
    alpha: &SliceCell,
    beta: &SliceCell,
    m: &M,
) -> Result<bool> {
    let unit = restricted_identity(&alpha.target(), m)?;
    let via_right = whisker_right(&right_unitor(alpha, m)?, beta, m)?;
    let via_assoc = associator(alpha, &unit, beta, m)?.then(&whisker_left(
        alpha,
        &left_unitor(beta, m)?,
        m,
    )?)?;
    Ok(via_right.map == via_assoc.map
        && via_right.is_isomorphism()
        && same_category(via_right.target.apex(), via_assoc.target.apex()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clock_monad_laws_hold() {
        for bound in 0..4 {
            let m = ClockMonad::new(bound);
            assert!(m.carrier().validate().is_empty());
            assert_eq!(check_monad_laws(&m).unwrap(), vec![]);
        }
    }

    #[test]
    fn clock_carrier_sizes() {
        let sizes: Vec<usize> = (0..4)
            .map(|n| ClockMonad::new(n).carrier().num_objects())
            .collect();
        // bound 0: the empty scheduling; bound 1: ε, R+, R+L+
        assert_eq!(&sizes[..2], &[1, 3]);
        assert!(sizes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn unit_of_empty_object_is_empty() {
        let m = ClockMonad::new(2);
        let empty = Arc::new(FinCat::empty());
        let p = SliceObject::new(FinFunctor::new(empty, m.base().clone(), vec![], vec![]).unwrap());
        let id = restricted_identity(&p, &m).unwrap();
        assert_eq!(id.apex().num_objects(), 0);
    }
}
