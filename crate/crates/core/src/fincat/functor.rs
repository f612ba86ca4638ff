use std::sync::Arc;

use super::category::{FinCat, Mor, Obj};
use crate::error::{Error, Result, Violation};

/// Same category, by pointer or by table.
pub fn same_category(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Debug)]
pub struct FinFunctor {
    domain: Arc<FinCat>,
    codomain: Arc<FinCat>,
    on_objects: Vec<Obj>,
    on_morphisms: Vec<Mor>,
}

impl PartialEq for FinFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.on_objects == other.on_objects
            && self.on_morphisms == other.on_morphisms
            && same_category(&self.domain, &other.domain)
            && same_category(&self.codomain, &other.codomain)
    }
}

impl FinFunctor {
    /// Checks only that the maps have the right lengths and land in range.
    pub fn new(
        domain: Arc<FinCat>,
        codomain: Arc<FinCat>,
        on_objects: Vec<Obj>,
        on_morphisms: Vec<Mor>,
    ) -> Result<Self> {
        if on_objects.len() != domain.num_objects() || on_morphisms.len() != domain.num_morphisms()
        {
            return Err(Error::Malformed(
                "functor maps do not cover the domain".into(),
            ));
        }
        if let Some(o) = on_objects.iter().find(|o| o.0 >= codomain.num_objects()) {
            return Err(Error::UnknownObject(format!("#{}", o.0)));
        }
        if let Some(m) = on_morphisms
            .iter()
            .find(|m| m.0 >= codomain.num_morphisms())
        {
            return Err(Error::UnknownMorphism(format!("#{}", m.0)));
        }
        Ok(Self {
            domain,
            codomain,
            on_objects,
            on_morphisms,
        })
    }

    pub(crate) fn new_unchecked(
        domain: Arc<FinCat>,
        codomain: Arc<FinCat>,
        on_objects: Vec<Obj>,
        on_morphisms: Vec<Mor>,
    ) -> Self {
        debug_assert_eq!(on_objects.len(), domain.num_objects());
        debug_assert_eq!(on_morphisms.len(), domain.num_morphisms());
        Self {
            domain,
            codomain,
            on_objects,
            on_morphisms,
        }
    }

    /// Builds a functor out of a thin domain category from its object map;
    /// each morphism goes to the unique morphism between the images.
    pub fn from_object_map(
        domain: Arc<FinCat>,
        codomain: Arc<FinCat>,
        on_objects: Vec<Obj>,
    ) -> Result<Self> {
        let mut on_morphisms = Vec::with_capacity(domain.num_morphisms());
        for m in domain.morphisms() {
            let (a, b) = (on_objects[domain.src(m).0], on_objects[domain.tgt(m).0]);
            match codomain.hom(a, b) {
                [] => {
                    return Err(Error::Mismatch(format!(
                        "no morphism `{}` → `{}` to send `{}` to",
                        codomain.object_name(a),
                        codomain.object_name(b),
                        domain.morphism_name(m)
                    )))
                }
                [only] => on_morphisms.push(*only),
                _ if domain.is_identity(m) => on_morphisms.push(codomain.identity(a)),
                _ => {
                    return Err(Error::Mismatch(format!(
                        "codomain is not thin at `{}` → `{}`",
                        codomain.object_name(a),
                        codomain.object_name(b)
                    )))
                }
            }
        }
        Self::new(domain, codomain, on_objects, on_morphisms)
    }

    pub fn identity(cat: Arc<FinCat>) -> Self {
        let on_objects = cat.objects().collect();
        let on_morphisms = cat.morphisms().collect();
        Self::new_unchecked(cat.clone(), cat, on_objects, on_morphisms)
    }

    /// The unique functor into the terminal category `terminal`.
    pub fn to_terminal(cat: Arc<FinCat>, terminal: Arc<FinCat>) -> Self {
        let on_objects = vec![Obj(0); cat.num_objects()];
        let on_morphisms = vec![terminal.identity(Obj(0)); cat.num_morphisms()];
        Self::new_unchecked(cat, terminal, on_objects, on_morphisms)
    }

    pub fn domain(&self) -> &Arc<FinCat> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FinCat> {
        &self.codomain
    }

    pub fn object(&self, o: Obj) -> Obj {
        self.on_objects[o.0]
    }

    pub fn morphism(&self, m: Mor) -> Mor {
        self.on_morphisms[m.0]
    }

    pub fn object_map(&self) -> &[Obj] {
        &self.on_objects
    }

    pub fn morphism_map(&self) -> &[Mor] {
        &self.on_morphisms
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FinFunctor) -> Result<FinFunctor> {
        if !same_category(&first.codomain, &self.domain) {
            return Err(Error::Mismatch(
                "functor composite: codomain and domain differ".into(),
            ));
        }
        Ok(Self::new_unchecked(
            first.domain.clone(),
            self.codomain.clone(),
            first.on_objects.iter().map(|&o| self.object(o)).collect(),
            first
                .on_morphisms
                .iter()
                .map(|&m| self.morphism(m))
                .collect(),
        ))
    }

    /// Checks preservation of endpoints, identities and composites.
    pub fn validate(&self) -> Vec<Violation> {
        let (d, c) = (&*self.domain, &*self.codomain);
        let mut report = Vec::new();
        for m in d.morphisms() {
            let fm = self.morphism(m);
            if c.src(fm) != self.object(d.src(m)) || c.tgt(fm) != self.object(d.tgt(m)) {
                report.push(Violation::new(
                    "functor preserves endpoints",
                    format!("`{}` ↦ `{}`", d.morphism_name(m), c.morphism_name(fm)),
                ));
            }
        }
        if !report.is_empty() {
            return report;
        }
        for o in d.objects() {
            if self.morphism(d.identity(o)) != c.identity(self.object(o)) {
                report.push(Violation::new(
                    "functor preserves identities",
                    format!("identity of `{}`", d.object_name(o)),
                ));
            }
        }
        for (g, f, gf) in d.composition_table() {
            if d.src(g) != d.tgt(f) {
                continue;
            }
            if c.try_compose(self.morphism(g), self.morphism(f)) != Some(self.morphism(gf)) {
                report.push(Violation::new(
                    "functor preserves composition",
                    format!("({}, {})", d.morphism_name(g), d.morphism_name(f)),
                ));
            }
        }
        report
    }

    /// Bijective on objects and on morphisms.
    pub fn is_isomorphism(&self) -> bool {
        fn bijective<T: Copy + Into<usize>>(map: &[T], n: usize) -> bool {
            let mut seen = vec![false; n];
            map.len() == n
                && map.iter().all(|&x| {
                    let i: usize = x.into();
                    !std::mem::replace(&mut seen[i], true)
                })
        }
        bijective(&self.on_objects, self.codomain.num_objects())
            && bijective(&self.on_morphisms, self.codomain.num_morphisms())
    }

    /// The inverse of an isomorphism.
    pub fn inverse(&self) -> Option<FinFunctor> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut objs = vec![Obj(0); self.on_objects.len()];
        for (i, o) in self.on_objects.iter().enumerate() {
            objs[o.0] = Obj(i);
        }
        let mut mors = vec![Mor(0); self.on_morphisms.len()];
        for (i, m) in self.on_morphisms.iter().enumerate() {
            mors[m.0] = Mor(i);
        }
        Some(Self::new_unchecked(
            self.codomain.clone(),
            self.domain.clone(),
            objs,
            mors,
        ))
    }

    /// Whether this is the identity functor on its domain.
    pub fn is_identity(&self) -> bool {
        same_category(&self.domain, &self.codomain)
            && self.on_objects.iter().enumerate().all(|(i, o)| o.0 == i)
            && self.on_morphisms.iter().enumerate().all(|(i, m)| m.0 == i)
    }
}

impl From<Obj> for usize {
    fn from(o: Obj) -> usize {
        o.0
    }
}

impl From<Mor> for usize {
    fn from(m: Mor) -> usize {
        m.0
    }
}

/// A span `left ← apex → right` of functors.
#[derive(Clone, Debug, PartialEq)]
pub struct Span {
    pub left: FinFunctor,
    pub right: FinFunctor,
}

impl Span {
    pub fn new(left: FinFunctor, right: FinFunctor) -> Result<Self> {
        if !same_category(left.domain(), right.domain()) {
            return Err(Error::Mismatch("span legs have different apexes".into()));
        }
        Ok(Self { left, right })
    }

    pub fn apex(&self) -> &Arc<FinCat> {
        self.left.domain()
    }
}

/// A morphism of spans: three vertical functors making both squares commute.
///
/// ```text
///   A ←── S ──→ B      (top)
///   │     │     │
///   U ←── W ──→ V      (bottom)
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct SpanCell {
    pub top: Span,
    pub bottom: Span,
    pub left: FinFunctor,
    pub middle: FinFunctor,
    pub right: FinFunctor,
}

impl SpanCell {
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        let typing = [
            (
                same_category(self.left.domain(), self.top.left.codomain()),
                "left component domain",
            ),
            (
                same_category(self.left.codomain(), self.bottom.left.codomain()),
                "left component codomain",
            ),
            (
                same_category(self.right.domain(), self.top.right.codomain()),
                "right component domain",
            ),
            (
                same_category(self.right.codomain(), self.bottom.right.codomain()),
                "right component codomain",
            ),
            (
                same_category(self.middle.domain(), self.top.apex()),
                "middle component domain",
            ),
            (
                same_category(self.middle.codomain(), self.bottom.apex()),
                "middle component codomain",
            ),
        ];
        for (ok, what) in typing {
            if !ok {
                report.push(Violation::new("cell typing", what));
            }
        }
        if !report.is_empty() {
            return report;
        }
        for f in [
            &self.top.left,
            &self.top.right,
            &self.bottom.left,
            &self.bottom.right,
            &self.left,
            &self.middle,
            &self.right,
        ] {
            report.extend(f.validate());
        }
        let squares = [
            (
                "left square commutes",
                &self.bottom.left,
                &self.left,
                &self.top.left,
            ),
            (
                "right square commutes",
                &self.bottom.right,
                &self.right,
                &self.top.right,
            ),
        ];
        for (law, down_leg, side, up_leg) in squares {
            let via_middle = down_leg.after(&self.middle).expect("typed above");
            let via_side = side.after(up_leg).expect("typed above");
            if via_middle != via_side {
                report.push(Violation::new(law, "objects or morphisms differ"));
            }
        }
        report
    }
}
