use std::sync::Arc;

use super::category::{FinCat, Mor, Obj};
use super::functor::same_category;
use crate::error::{Error, Result, Violation};

/// A presheaf `X: C^op → Set` on a finite category.
///
/// `action[α]` for `α: c → c'` is the function `X(c') → X(c)`, stored as
/// indices into the section lists.
#[derive(Clone, Debug)]
pub struct Presheaf {
    base: Arc<FinCat>,
    sections: Vec<Vec<String>>,
    action: Vec<Vec<usize>>,
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        self.sections == other.sections
            && self.action == other.action
            && same_category(&self.base, &other.base)
    }
}

impl Presheaf {
    pub fn new(
        base: Arc<FinCat>,
        sections: Vec<Vec<String>>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if sections.len() != base.num_objects() {
            return Err(Error::Malformed(
                "one section set per object expected".into(),
            ));
        }
        if action.len() != base.num_morphisms() {
            return Err(Error::Malformed("one action per morphism expected".into()));
        }
        for m in base.morphisms() {
            let (src, tgt) = (base.src(m).0, base.tgt(m).0);
            let map = &action[m.0];
            if map.len() != sections[tgt].len() || map.iter().any(|&x| x >= sections[src].len()) {
                return Err(Error::Malformed(format!(
                    "action of `{}` is not a function between the section sets",
                    base.morphism_name(m)
                )));
            }
        }
        Ok(Self {
            base,
            sections,
            action,
        })
    }

    pub(crate) fn new_unchecked(
        base: Arc<FinCat>,
        sections: Vec<Vec<String>>,
        action: Vec<Vec<usize>>,
    ) -> Self {
        Self {
            base,
            sections,
            action,
        }
    }

    /// Builds a presheaf from section sets and an action function
    /// `act(α, x') = X(α)(x')`.
    pub fn from_fn(
        base: Arc<FinCat>,
        sections: Vec<Vec<String>>,
        act: impl Fn(Mor, usize) -> usize,
    ) -> Self {
        let action = base
            .morphisms()
            .map(|m| {
                (0..sections[base.tgt(m).0].len())
                    .map(|x| act(m, x))
                    .collect()
            })
            .collect();
        Self {
            base,
            sections,
            action,
        }
    }

    pub fn empty(base: Arc<FinCat>) -> Self {
        let sections = vec![Vec::new(); base.num_objects()];
        Self::from_fn(base, sections, |_, _| unreachable!())
    }

    /// One section `*` everywhere.
    pub fn terminal(base: Arc<FinCat>) -> Self {
        let sections = vec![vec!["*".to_string()]; base.num_objects()];
        Self::from_fn(base, sections, |_, _| 0)
    }

    /// The representable `y(c) = C(-, c)`; sections are named by morphism.
    pub fn representable(base: Arc<FinCat>, c: Obj) -> Self {
        let homs: Vec<Vec<Mor>> = base.objects().map(|b| base.hom(b, c).to_vec()).collect();
        let sections = homs
            .iter()
            .map(|h| {
                h.iter()
                    .map(|&m| base.morphism_name(m).to_string())
                    .collect()
            })
            .collect();
        let cat = base.clone();
        Self::from_fn(base, sections, move |alpha, x| {
            let phi = homs[cat.tgt(alpha).0][x];
            let pre = cat.compose(phi, alpha);
            homs[cat.src(alpha).0]
                .iter()
                .position(|&m| m == pre)
                .expect("hom sets are closed")
        })
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn sections(&self, c: Obj) -> &[String] {
        &self.sections[c.0]
    }

    pub fn section_count(&self, c: Obj) -> usize {
        self.sections[c.0].len()
    }

    pub fn section_counts(&self) -> Vec<usize> {
        self.sections.iter().map(Vec::len).collect()
    }

    pub fn total_sections(&self) -> usize {
        self.sections.iter().map(Vec::len).sum()
    }

    /// `X(α)(x)` for `α: c → c'` and `x ∈ X(c')`.
    pub fn act(&self, alpha: Mor, x: usize) -> usize {
        self.action[alpha.0][x]
    }

    pub fn action(&self, alpha: Mor) -> &[usize] {
        &self.action[alpha.0]
    }

    /// Same presheaf with renamed sections.
    pub fn relabel(&self, names: impl Fn(Obj, usize) -> String) -> Self {
        let sections = self
            .sections
            .iter()
            .enumerate()
            .map(|(c, xs)| (0..xs.len()).map(|x| names(Obj(c), x)).collect())
            .collect();
        Self::new_unchecked(self.base.clone(), sections, self.action.clone())
    }

    /// Identity acts trivially and `X(g∘f) = X(f) ∘ X(g)`.
    pub fn validate(&self) -> Vec<Violation> {
        let base = &*self.base;
        let mut report = Vec::new();
        for c in base.objects() {
            let id = base.identity(c);
            if self.action[id.0].iter().enumerate().any(|(x, &y)| x != y) {
                report.push(Violation::new(
                    "presheaf identity",
                    format!("identity of `{}` acts non-trivially", base.object_name(c)),
                ));
            }
        }
        for (g, f, gf) in base.composition_table() {
            if base.src(g) != base.tgt(f) {
                continue;
            }
            for x in 0..self.section_count(base.tgt(g)) {
                if self.act(gf, x) != self.act(f, self.act(g, x)) {
                    report.push(Violation::new(
                        "presheaf composition",
                        format!(
                            "X({} ∘ {}) ≠ X({}) ∘ X({})",
                            base.morphism_name(g),
                            base.morphism_name(f),
                            base.morphism_name(f),
                            base.morphism_name(g)
                        ),
                    ));
                    break;
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representable_on_interval() {
        let two = Arc::new(FinCat::interval());
        let p = two.object("P").unwrap();
        let o = two.object("O").unwrap();
        let yp = Presheaf::representable(two.clone(), p);
        assert!(yp.validate().is_empty());
        assert_eq!(yp.sections(o), ["OP"]);
        assert_eq!(yp.sections(p), ["PP"]);
        let yo = Presheaf::representable(two, o);
        assert_eq!(yo.section_counts(), vec![1, 0]);
    }

    #[test]
    fn non_functorial_action_is_reported() {
        // Z/2 as a one-object category acting trivially except a non-involution
        let z2 = Arc::new(FinCat::monoid(vec!["0".into(), "1".into()], 0, |g, f| {
            (g + f) % 2
        }));
        let sections = vec![vec!["a".into(), "b".into(), "c".into()]];
        let bad = Presheaf::new(
            z2.clone(),
            sections.clone(),
            vec![vec![0, 1, 2], vec![1, 2, 0]],
        )
        .unwrap();
        assert!(bad
            .validate()
            .iter()
            .any(|v| v.law == "presheaf composition"));
        let good = Presheaf::new(z2, sections, vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        assert!(good.validate().is_empty());
    }
}
