use std::collections::HashMap;
use std::sync::Arc;

use super::category::{Arrow, FinCat, Mor, Obj};
use super::functor::{same_category, FinFunctor};
use crate::error::{Error, Result, Violation};
use crate::quotient::{Classes, Partition};

/// The canonical pullback `A ×_C B` of `f: A → C` and `g: B → C`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub apex: Arc<FinCat>,
    pub first: FinFunctor,
    pub second: FinFunctor,
    object_pairs: Vec<(Obj, Obj)>,
    object_index: HashMap<(Obj, Obj), Obj>,
    morphism_index: HashMap<(Mor, Mor), Mor>,
}

impl Pullback {
    pub fn object_pair(&self, o: Obj) -> (Obj, Obj) {
        self.object_pairs[o.0]
    }

    pub fn object_of(&self, a: Obj, b: Obj) -> Option<Obj> {
        self.object_index.get(&(a, b)).copied()
    }

    pub fn morphism_of(&self, f: Mor, g: Mor) -> Option<Mor> {
        self.morphism_index.get(&(f, g)).copied()
    }

    /// The mediating functor of a cone `(u: Q → A, v: Q → B)` with
    /// `f ∘ u = g ∘ v`.
    pub fn mediate(&self, u: &FinFunctor, v: &FinFunctor) -> Result<FinFunctor> {
        if !same_category(u.domain(), v.domain()) {
            return Err(Error::Mismatch("cone legs have different domains".into()));
        }
        let objs = u
            .domain()
            .objects()
            .map(|q| {
                self.object_of(u.object(q), v.object(q))
                    .ok_or_else(|| Error::Mismatch("cone does not commute on objects".into()))
            })
            .collect::<Result<_>>()?;
        let mors = u
            .domain()
            .morphisms()
            .map(|m| {
                self.morphism_of(u.morphism(m), v.morphism(m))
                    .ok_or_else(|| Error::Mismatch("cone does not commute on morphisms".into()))
            })
            .collect::<Result<_>>()?;
        FinFunctor::new(u.domain().clone(), self.apex.clone(), objs, mors)
    }
}

pub fn pullback(f: &FinFunctor, g: &FinFunctor) -> Result<Pullback> {
    if !same_category(f.codomain(), g.codomain()) {
        return Err(Error::Mismatch(
            "pullback of functors with different codomains".into(),
        ));
    }
    let (a, b) = (&**f.domain(), &**g.domain());
    let mut b_over: HashMap<Obj, Vec<Obj>> = HashMap::new();
    for y in b.objects() {
        b_over.entry(g.object(y)).or_default().push(y);
    }
    let mut object_pairs = Vec::new();
    let mut object_index = HashMap::new();
    let mut names = Vec::new();
    for x in a.objects() {
        for &y in b_over.get(&f.object(x)).map(Vec::as_slice).unwrap_or(&[]) {
            object_index.insert((x, y), Obj(object_pairs.len()));
            object_pairs.push((x, y));
            names.push(format!("({},{})", a.object_name(x), b.object_name(y)));
        }
    }
    let mut g_over: HashMap<Mor, Vec<Mor>> = HashMap::new();
    for n in b.morphisms() {
        g_over.entry(g.morphism(n)).or_default().push(n);
    }
    let mut arrows = Vec::new();
    let mut morphism_pairs = Vec::new();
    let mut morphism_index = HashMap::new();
    for m in a.morphisms() {
        for &n in g_over.get(&f.morphism(m)).map(Vec::as_slice).unwrap_or(&[]) {
            let src = object_index[&(a.src(m), b.src(n))];
            let tgt = object_index[&(a.tgt(m), b.tgt(n))];
            morphism_index.insert((m, n), Mor(arrows.len()));
            morphism_pairs.push((m, n));
            arrows.push(Arrow {
                name: format!("({},{})", a.morphism_name(m), b.morphism_name(n)),
                src,
                tgt,
            });
        }
    }
    let identities = object_pairs
        .iter()
        .map(|&(x, y)| morphism_index[&(a.identity(x), b.identity(y))])
        .collect();
    let apex = Arc::new(FinCat::generate(names, arrows, identities, |p, q| {
        let (p1, p2) = morphism_pairs[p.0];
        let (q1, q2) = morphism_pairs[q.0];
        morphism_index[&(a.compose(p1, q1), b.compose(p2, q2))]
    }));
    let first = FinFunctor::new_unchecked(
        apex.clone(),
        f.domain().clone(),
        object_pairs.iter().map(|p| p.0).collect(),
        morphism_pairs.iter().map(|p| p.0).collect(),
    );
    let second = FinFunctor::new_unchecked(
        apex.clone(),
        g.domain().clone(),
        object_pairs.iter().map(|p| p.1).collect(),
        morphism_pairs.iter().map(|p| p.1).collect(),
    );
    Ok(Pullback {
        apex,
        first,
        second,
        object_pairs,
        object_index,
        morphism_index,
    })
}

/// Objects `(a, β: b → f(a))` of the comma category `b/f`, sorted by `(a, β)`.
pub fn comma_objects(b: Obj, f: &FinFunctor) -> Vec<(Obj, Mor)> {
    let (dom, cod) = (&**f.domain(), &**f.codomain());
    let mut fibres: HashMap<Obj, Vec<Obj>> = HashMap::new();
    for a in dom.objects() {
        fibres.entry(f.object(a)).or_default().push(a);
    }
    let mut out: Vec<(Obj, Mor)> = cod
        .outgoing(b)
        .iter()
        .flat_map(|&beta| {
            fibres
                .get(&cod.tgt(beta))
                .into_iter()
                .flatten()
                .map(move |&a| (a, beta))
        })
        .collect();
    out.sort();
    out
}

/// Connected components of `b/f` computed directly on its objects, without
/// materialising the composition table. The `objects` are those of
/// [`comma_objects`].
pub fn comma_components(b: Obj, f: &FinFunctor) -> (Vec<(Obj, Mor)>, Classes) {
    let objects = comma_objects(b, f);
    let (dom, cod) = (&**f.domain(), &**f.codomain());
    let index: HashMap<(Obj, Mor), usize> =
        objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mut part = Partition::new(objects.len());
    for (i, &(a, beta)) in objects.iter().enumerate() {
        for &alpha in dom.outgoing(a) {
            let j = index[&(dom.tgt(alpha), cod.compose(f.morphism(alpha), beta))];
            part.union(i, j);
        }
    }
    let classes = part.classes();
    (objects, classes)
}

/// The comma category `b/f`: objects `(a, β: b → f(a))`, morphisms
/// `α: a → a'` with `f(α) ∘ β = β'`.
#[derive(Clone, Debug)]
pub struct Comma {
    pub category: FinCat,
    pub objects: Vec<(Obj, Mor)>,
    /// The morphism of the domain underlying each comma morphism.
    pub underlying: Vec<Mor>,
}

pub fn comma_under(b: Obj, f: &FinFunctor) -> Comma {
    let (dom, cod) = (&**f.domain(), &**f.codomain());
    let objects = comma_objects(b, f);
    let index: HashMap<(Obj, Mor), usize> =
        objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let names = objects
        .iter()
        .map(|&(a, beta)| format!("({},{})", dom.object_name(a), cod.morphism_name(beta)))
        .collect();
    let mut arrows = Vec::new();
    let mut underlying = Vec::new();
    let mut arrow_index = HashMap::new();
    let mut arrow_source = Vec::new();
    let mut identities = vec![Mor(0); objects.len()];
    for (i, &(a, beta)) in objects.iter().enumerate() {
        for &alpha in dom.outgoing(a) {
            let j = index[&(dom.tgt(alpha), cod.compose(f.morphism(alpha), beta))];
            if alpha == dom.identity(a) {
                identities[i] = Mor(arrows.len());
            }
            arrow_index.insert((i, alpha), Mor(arrows.len()));
            underlying.push(alpha);
            arrow_source.push(i);
            arrows.push(Arrow {
                name: format!("{}@{}", dom.morphism_name(alpha), i),
                src: Obj(i),
                tgt: Obj(j),
            });
        }
    }
    let category = FinCat::generate(names, arrows, identities, |g, h| {
        let composite = dom.compose(underlying[g.0], underlying[h.0]);
        let source = arrow_source[h.0];
        arrow_index[&(source, composite)]
    });
    Comma {
        category,
        objects,
        underlying,
    }
}

/// Connected components of a finite category; classes numbered by their
/// least object.
pub fn connected_components(cat: &FinCat) -> Classes {
    let mut part = Partition::new(cat.num_objects());
    for m in cat.morphisms() {
        part.union(cat.src(m).0, cat.tgt(m).0);
    }
    part.classes()
}

/// A set-valued functor `W: C^op × C → Set`, materialised.
///
/// `left(α, d)` for `α: c → c'` maps `W(c', d) → W(c, d)`; `right(c, β)` for
/// `β: d → d'` maps `W(c, d) → W(c, d')`.
#[derive(Clone, Debug)]
pub struct Profunctor {
    base: Arc<FinCat>,
    sets: Vec<Vec<String>>,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
}

impl Profunctor {
    pub fn build(
        base: Arc<FinCat>,
        set: impl Fn(Obj, Obj) -> Vec<String>,
        left: impl Fn(Mor, Obj, usize) -> usize,
        right: impl Fn(Obj, Mor, usize) -> usize,
    ) -> Self {
        let n = base.num_objects();
        let sets: Vec<Vec<String>> = (0..n * n).map(|i| set(Obj(i / n), Obj(i % n))).collect();
        let left = base
            .morphisms()
            .flat_map(|alpha| base.objects().map(move |d| (alpha, d)))
            .map(|(alpha, d)| {
                let size = sets[base.tgt(alpha).0 * n + d.0].len();
                (0..size).map(|x| left(alpha, d, x)).collect()
            })
            .collect();
        let right = base
            .objects()
            .flat_map(|c| base.morphisms().map(move |beta| (c, beta)))
            .map(|(c, beta)| {
                let size = sets[c.0 * n + base.src(beta).0].len();
                (0..size).map(|x| right(c, beta, x)).collect()
            })
            .collect();
        Self {
            base,
            sets,
            left,
            right,
        }
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn set(&self, c: Obj, d: Obj) -> &[String] {
        &self.sets[c.0 * self.base.num_objects() + d.0]
    }

    pub fn left(&self, alpha: Mor, d: Obj, x: usize) -> usize {
        self.left[alpha.0 * self.base.num_objects() + d.0][x]
    }

    pub fn right(&self, c: Obj, beta: Mor, x: usize) -> usize {
        self.right[c.0 * self.base.num_morphisms() + beta.0][x]
    }

    fn in_range(&self) -> bool {
        let cat = &*self.base;
        cat.morphisms().all(|alpha| {
            cat.objects().all(|d| {
                let n = self.set(cat.src(alpha), d).len();
                (0..self.set(cat.tgt(alpha), d).len()).all(|x| self.left(alpha, d, x) < n)
            })
        }) && cat.objects().all(|c| {
            cat.morphisms().all(|beta| {
                let n = self.set(c, cat.tgt(beta)).len();
                (0..self.set(c, cat.src(beta)).len()).all(|x| self.right(c, beta, x) < n)
            })
        })
    }

    /// Functoriality of both actions and their commutation.
    pub fn validate(&self) -> Vec<Violation> {
        let cat = &*self.base;
        let mut report = Vec::new();
        if !self.in_range() {
            report.push(Violation::new("profunctor typing", "action out of range"));
            return report;
        }
        for c in cat.objects() {
            let id = cat.identity(c);
            for d in cat.objects() {
                let n = self.set(c, d).len();
                if (0..n).any(|x| self.left(id, d, x) != x) {
                    report.push(Violation::new(
                        "left identity",
                        cat.object_name(c).to_string(),
                    ));
                }
                if (0..self.set(d, c).len()).any(|x| self.right(d, id, x) != x) {
                    report.push(Violation::new(
                        "right identity",
                        cat.object_name(c).to_string(),
                    ));
                }
            }
        }
        for (g, f, gf) in cat.composition_table() {
            if cat.src(g) != cat.tgt(f) {
                continue;
            }
            for d in cat.objects() {
                let n = self.set(cat.tgt(g), d).len();
                if (0..n).any(|x| self.left(gf, d, x) != self.left(f, d, self.left(g, d, x))) {
                    report.push(Violation::new(
                        "left composition",
                        format!("({}, {})", cat.morphism_name(g), cat.morphism_name(f)),
                    ));
                }
                let n = self.set(d, cat.src(f)).len();
                if (0..n).any(|x| self.right(d, gf, x) != self.right(d, g, self.right(d, f, x))) {
                    report.push(Violation::new(
                        "right composition",
                        format!("({}, {})", cat.morphism_name(g), cat.morphism_name(f)),
                    ));
                }
            }
        }
        for alpha in cat.morphisms() {
            for beta in cat.morphisms() {
                let (c, d) = (cat.src(alpha), cat.src(beta));
                let n = self.set(cat.tgt(alpha), d).len();
                for x in 0..n {
                    let lr = self.left(alpha, cat.tgt(beta), self.right(cat.tgt(alpha), beta, x));
                    let rl = self.right(c, beta, self.left(alpha, d, x));
                    if lr != rl {
                        report.push(Violation::new(
                            "actions commute",
                            format!(
                                "({}, {})",
                                cat.morphism_name(alpha),
                                cat.morphism_name(beta)
                            ),
                        ));
                        break;
                    }
                }
            }
        }
        report
    }
}

/// The quotient `∫^c W(c, c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coend {
    pub classes: usize,
    /// `injections[c][x]` is the class of `x ∈ W(c, c)`.
    pub injections: Vec<Vec<usize>>,
    /// Least diagonal element `(c, x)` of each class.
    pub representatives: Vec<(Obj, usize)>,
}

fn diagonal_offsets(w: &Profunctor) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(w.base.num_objects() + 1);
    let mut total = 0;
    for c in w.base.objects() {
        offsets.push(total);
        total += w.set(c, c).len();
    }
    offsets.push(total);
    offsets
}

fn coend_from_classes(w: &Profunctor, offsets: &[usize], classes: Classes) -> Coend {
    let cat = &*w.base;
    let injections: Vec<Vec<usize>> = cat
        .objects()
        .map(|c| classes.class_of[offsets[c.0]..offsets[c.0 + 1]].to_vec())
        .collect();
    let mut representatives = vec![None; classes.count];
    for c in cat.objects() {
        for (x, &k) in injections[c.0].iter().enumerate() {
            representatives[k].get_or_insert((c, x));
        }
    }
    Coend {
        classes: classes.count,
        injections,
        representatives: representatives
            .into_iter()
            .map(|r| r.expect("classes are inhabited"))
            .collect(),
    }
}

/// Quotient of the diagonal sets by `left(α)(x) ∼ right(α)(x)` for every
/// `α: c → c'` and `x ∈ W(c', c)`.
pub fn coend(w: &Profunctor) -> Result<Coend> {
    crate::error::ensure_valid(w.validate())?;
    let cat = &*w.base;
    let offsets = diagonal_offsets(w);
    let mut part = Partition::new(*offsets.last().unwrap());
    for alpha in cat.morphisms() {
        let (c, c2) = (cat.src(alpha), cat.tgt(alpha));
        for x in 0..w.set(c2, c).len() {
            let l = w.left(alpha, c, x);
            let r = w.right(c2, alpha, x);
            part.union(offsets[c.0] + l, offsets[c2.0] + r);
        }
    }
    Ok(coend_from_classes(w, &offsets, part.classes()))
}

/// The category of elements of `W` over the twisted arrows of its base:
/// objects `(α: c → c', x ∈ W(c', c))`; a morphism `(α, x) → (γ, y)` for
/// `γ: d → d'` is a pair `(u: c → d, v: d' → c')` with `α = v∘γ∘u` and
/// `y = right(u)(left(v)(x))`.
pub fn twisted_elements(w: &Profunctor) -> (FinCat, Vec<(Mor, usize)>) {
    let cat = &*w.base;
    let mut objects = Vec::new();
    let mut names = Vec::new();
    let mut index = HashMap::new();
    for alpha in cat.morphisms() {
        let (c, c2) = (cat.src(alpha), cat.tgt(alpha));
        for (x, label) in w.set(c2, c).iter().enumerate() {
            index.insert((alpha, x), Obj(objects.len()));
            objects.push((alpha, x));
            names.push(format!("({},{})", cat.morphism_name(alpha), label));
        }
    }
    let mut arrows = Vec::new();
    let mut pairs = Vec::new();
    let mut pair_index = HashMap::new();
    for (i, &(alpha, x)) in objects.iter().enumerate() {
        let (c, c2) = (cat.src(alpha), cat.tgt(alpha));
        for &u in cat.outgoing(c) {
            for &v in cat.incoming(c2) {
                let (d, d2) = (cat.tgt(u), cat.src(v));
                for &gamma in cat.hom(d, d2) {
                    if cat.compose(v, cat.compose(gamma, u)) != alpha {
                        continue;
                    }
                    let y = w.right(d2, u, w.left(v, c, x));
                    let j = index[&(gamma, y)];
                    pair_index.insert((i, u, v), Mor(arrows.len()));
                    pairs.push((i, u, v));
                    arrows.push(Arrow {
                        name: format!("({},{})@{}", cat.morphism_name(u), cat.morphism_name(v), i),
                        src: Obj(i),
                        tgt: j,
                    });
                }
            }
        }
    }
    let identities = objects
        .iter()
        .enumerate()
        .map(|(i, &(alpha, _))| {
            pair_index[&(
                i,
                cat.identity(cat.src(alpha)),
                cat.identity(cat.tgt(alpha)),
            )]
        })
        .collect();
    let elements = FinCat::generate(names, arrows, identities, |g, f| {
        let (i, u, v) = pairs[f.0];
        let (_, u2, v2) = pairs[g.0];
        pair_index[&(i, cat.compose(u2, u), cat.compose(v, v2))]
    });
    (elements, objects)
}

/// The coend computed as the connected components of [`twisted_elements`],
/// restricted to the identity arrows.
pub fn coend_by_elements(w: &Profunctor) -> Result<Coend> {
    crate::error::ensure_valid(w.validate())?;
    let cat = &*w.base;
    let (elements, objects) = twisted_elements(w);
    let components = connected_components(&elements);
    let offsets = diagonal_offsets(w);
    let mut diagonal_component = vec![0; *offsets.last().unwrap()];
    for (i, &(alpha, x)) in objects.iter().enumerate() {
        let c = cat.src(alpha);
        if cat.identity(c) == alpha {
            diagonal_component[offsets[c.0] + x] = components.class_of[i];
        }
    }
    // renumber by least diagonal member
    let mut part = Partition::new(diagonal_component.len());
    let mut first: HashMap<usize, usize> = HashMap::new();
    for (i, &k) in diagonal_component.iter().enumerate() {
        match first.get(&k) {
            Some(&j) => part.union(i, j),
            None => {
                first.insert(k, i);
            }
        }
    }
    if first.len() != components.count {
        return Err(Error::Internal(
            "a component of the twisted elements misses the diagonal".into(),
        ));
    }
    Ok(coend_from_classes(w, &offsets, part.classes()))
}
