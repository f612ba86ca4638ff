use std::collections::HashMap;
use std::sync::Arc;

use super::category::{Arrow, FinCat, Mor, Obj};
use super::functor::{same_category, FinFunctor};
use super::limits::comma_components;
use super::presheaf::Presheaf;
use crate::error::{DfibWitness, Error, FinalWitness, Result};

/// The category of elements `el(X)` with its projection to the base.
#[derive(Clone, Debug)]
pub struct Elements {
    pub category: Arc<FinCat>,
    pub projection: FinFunctor,
    objects: Vec<(Obj, usize)>,
    object_index: HashMap<(Obj, usize), Obj>,
    morphism_index: HashMap<(Mor, usize), Mor>,
}

impl Elements {
    /// The object `(c, x)`.
    pub fn object_of(&self, c: Obj, x: usize) -> Obj {
        self.object_index[&(c, x)]
    }

    pub fn element(&self, o: Obj) -> (Obj, usize) {
        self.objects[o.0]
    }

    /// The morphism `(c, X(α)(x')) → (c', x')` over `α: c → c'`.
    pub fn morphism_of(&self, alpha: Mor, target_section: usize) -> Mor {
        self.morphism_index[&(alpha, target_section)]
    }
}

/// Objects `(c, x ∈ X(c))`; morphisms `(c, X(α)(x')) → (c', x')` over each
/// `α: c → c'`. Object names are `(c,x)`.
pub fn elements(x: &Presheaf) -> Elements {
    let base = x.base();
    let mut objects = Vec::new();
    let mut names = Vec::new();
    let mut object_index = HashMap::new();
    for c in base.objects() {
        for (i, label) in x.sections(c).iter().enumerate() {
            object_index.insert((c, i), Obj(objects.len()));
            objects.push((c, i));
            names.push(format!("({},{})", base.object_name(c), label));
        }
    }
    let mut arrows = Vec::new();
    let mut over = Vec::new();
    let mut morphism_index = HashMap::new();
    for alpha in base.morphisms() {
        let (c, c2) = (base.src(alpha), base.tgt(alpha));
        for (x2, label) in x.sections(c2).iter().enumerate() {
            morphism_index.insert((alpha, x2), Mor(arrows.len()));
            over.push((alpha, x2));
            arrows.push(Arrow {
                name: format!("({},{})", base.morphism_name(alpha), label),
                src: object_index[&(c, x.act(alpha, x2))],
                tgt: object_index[&(c2, x2)],
            });
        }
    }
    let identities = objects
        .iter()
        .map(|&(c, i)| morphism_index[&(base.identity(c), i)])
        .collect();
    let category = Arc::new(FinCat::generate(names, arrows, identities, |g, f| {
        let (beta, x3) = over[g.0];
        let (alpha, _) = over[f.0];
        morphism_index[&(base.compose(beta, alpha), x3)]
    }));
    let projection = FinFunctor::new_unchecked(
        category.clone(),
        base.clone(),
        objects.iter().map(|p| p.0).collect(),
        over.iter().map(|p| p.0).collect(),
    );
    Elements {
        category,
        projection,
        objects,
        object_index,
        morphism_index,
    }
}

/// Lifts of base morphisms, indexed by `(target in the domain, base morphism)`.
#[derive(Clone, Debug)]
pub struct LiftIndex {
    lifts: HashMap<(Obj, Mor), Vec<Mor>>,
}

impl LiftIndex {
    pub fn new(f: &FinFunctor) -> Self {
        let dom = f.domain();
        let mut lifts: HashMap<(Obj, Mor), Vec<Mor>> = HashMap::new();
        for e in dom.morphisms() {
            lifts
                .entry((dom.tgt(e), f.morphism(e)))
                .or_default()
                .push(e);
        }
        Self { lifts }
    }

    /// Morphisms ending at `target` that map to `beta`.
    pub fn lifts(&self, target: Obj, beta: Mor) -> &[Mor] {
        self.lifts
            .get(&(target, beta))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn unique_lift(&self, target: Obj, beta: Mor) -> Option<Mor> {
        match self.lifts(target, beta) {
            [only] => Some(*only),
            _ => None,
        }
    }
}

/// Unique lifting of every `β: b → f(e)` to some `ε` ending at `e`.
///
/// Non-identity morphisms are examined before identities, objects and
/// morphisms in index order, so the witness is deterministic.
pub fn check_discrete_fibration(f: &FinFunctor) -> Result<(), DfibWitness> {
    let (dom, cod) = (&**f.domain(), &**f.codomain());
    let index = LiftIndex::new(f);
    for identities in [false, true] {
        for e in dom.objects() {
            for &beta in cod.incoming(f.object(e)) {
                if cod.is_identity(beta) != identities {
                    continue;
                }
                let lifts = index.lifts(e, beta).len();
                if lifts != 1 {
                    return Err(DfibWitness {
                        object: dom.object_name(e).to_string(),
                        morphism: cod.morphism_name(beta).to_string(),
                        lifts,
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn is_discrete_fibration(f: &FinFunctor) -> bool {
    check_discrete_fibration(f).is_ok()
}

/// Every comma category `b/f` is nonempty and connected.
pub fn check_final(f: &FinFunctor) -> Result<(), FinalWitness> {
    let cod = f.codomain();
    for b in cod.objects() {
        let (_, classes) = comma_components(b, f);
        if classes.count != 1 {
            return Err(FinalWitness {
                object: cod.object_name(b).to_string(),
                components: classes.count,
            });
        }
    }
    Ok(())
}

pub fn is_final(f: &FinFunctor) -> bool {
    check_final(f).is_ok()
}

/// The presheaf of fibres of a discrete fibration. Sections at `b` are the
/// objects over `b` in index order, named as in the domain.
pub fn presheaf_of_dfib(f: &FinFunctor) -> Result<Presheaf> {
    check_discrete_fibration(f).map_err(Error::NotDiscreteFibration)?;
    let (dom, cod) = (f.domain(), f.codomain());
    let mut fibres = vec![Vec::new(); cod.num_objects()];
    let mut position = vec![0; dom.num_objects()];
    for e in dom.objects() {
        let fibre = &mut fibres[f.object(e).0];
        position[e.0] = fibre.len();
        fibre.push(e);
    }
    let index = LiftIndex::new(f);
    let sections = fibres
        .iter()
        .map(|es| es.iter().map(|&e| dom.object_name(e).to_string()).collect())
        .collect();
    Ok(Presheaf::from_fn(cod.clone(), sections, |alpha, x| {
        let e = fibres[cod.tgt(alpha).0][x];
        let lift = index
            .unique_lift(e, alpha)
            .expect("checked discrete fibration");
        position[dom.src(lift).0]
    }))
}

/// A natural isomorphism `X ≅ Y`: `components[c][x]` is the image of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalIso {
    pub components: Vec<Vec<usize>>,
}

impl NaturalIso {
    pub fn identity(x: &Presheaf) -> Self {
        Self {
            components: x
                .section_counts()
                .into_iter()
                .map(|n| (0..n).collect())
                .collect(),
        }
    }

    /// Each component is a bijection and every naturality square commutes.
    pub fn verify(&self, x: &Presheaf, y: &Presheaf) -> bool {
        let base = x.base();
        if self.components.len() != base.num_objects() {
            return false;
        }
        for c in base.objects() {
            let phi = &self.components[c.0];
            let n = y.section_count(c);
            if phi.len() != x.section_count(c) || phi.len() != n {
                return false;
            }
            let mut seen = vec![false; n];
            if !phi
                .iter()
                .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
            {
                return false;
            }
        }
        base.morphisms().all(|alpha| {
            let (c, c2) = (base.src(alpha), base.tgt(alpha));
            (0..x.section_count(c2)).all(|x2| {
                self.components[c.0][x.act(alpha, x2)] == y.act(alpha, self.components[c2.0][x2])
            })
        })
    }
}

/// Backtracking search for a natural isomorphism `X ≅ Y`.
///
/// Objects are visited by ascending section count; each tentative assignment
/// is propagated along every action into its object, so the search only
/// branches on elements not forced by earlier choices. Exponential in the
/// worst case.
pub fn presheaf_iso(x: &Presheaf, y: &Presheaf) -> Result<Option<NaturalIso>> {
    if !same_category(x.base(), y.base()) {
        return Err(Error::Mismatch("presheaves over different bases".into()));
    }
    if x.section_counts() != y.section_counts() {
        return Ok(None);
    }
    let base = x.base();
    let mut order: Vec<Obj> = base.objects().collect();
    order.sort_by_key(|&c| (x.section_count(c), c));
    let state = SearchState {
        assigned: x
            .section_counts()
            .into_iter()
            .map(|n| vec![None; n])
            .collect(),
        used: x
            .section_counts()
            .into_iter()
            .map(|n| vec![false; n])
            .collect(),
    };
    let found = search(x, y, &order, state).map(|s| NaturalIso {
        components: s
            .assigned
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|o| o.expect("complete assignment"))
                    .collect()
            })
            .collect(),
    });
    if let Some(iso) = &found {
        if !iso.verify(x, y) {
            return Err(Error::Internal(
                "isomorphism search returned a non-natural family".into(),
            ));
        }
    }
    Ok(found)
}

#[derive(Clone)]
struct SearchState {
    assigned: Vec<Vec<Option<usize>>>,
    used: Vec<Vec<bool>>,
}

fn search(x: &Presheaf, y: &Presheaf, order: &[Obj], state: SearchState) -> Option<SearchState> {
    let next = order.iter().find_map(|&c| {
        state.assigned[c.0]
            .iter()
            .position(Option::is_none)
            .map(|i| (c, i))
    });
    let Some((c, i)) = next else {
        return Some(state);
    };
    for v in 0..y.section_count(c) {
        if state.used[c.0][v] {
            continue;
        }
        let mut trial = state.clone();
        if assign(x, y, &mut trial, c, i, v) {
            if let Some(done) = search(x, y, order, trial) {
                return Some(done);
            }
        }
    }
    None
}

fn assign(x: &Presheaf, y: &Presheaf, s: &mut SearchState, c: Obj, i: usize, v: usize) -> bool {
    let base = x.base();
    let mut work = vec![(c, i, v)];
    while let Some((c, i, v)) = work.pop() {
        match s.assigned[c.0][i] {
            Some(w) if w == v => continue,
            Some(_) => return false,
            None => {
                if s.used[c.0][v] {
                    return false;
                }
                s.assigned[c.0][i] = Some(v);
                s.used[c.0][v] = true;
            }
        }
        for &alpha in base.incoming(c) {
            work.push((base.src(alpha), x.act(alpha, i), y.act(alpha, v)));
        }
    }
    true
}
