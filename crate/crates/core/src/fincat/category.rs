use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result, Violation};

/// Index of an object in a [`FinCat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obj(pub usize);

/// Index of a morphism in a [`FinCat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mor(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: Obj,
    pub tgt: Obj,
}

/// A finite category given by explicit tables.
///
/// Objects and morphisms carry string names (used at the I/O boundary); all
/// operations work on the indices. Composition is a table keyed by `(g, f)`
/// holding `g ∘ f`.
#[derive(Clone)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Arrow>,
    identities: Vec<Mor>,
    compose: HashMap<(Mor, Mor), Mor>,
    object_index: HashMap<String, Obj>,
    morphism_index: HashMap<String, Mor>,
    outgoing: Vec<Vec<Mor>>,
    incoming: Vec<Vec<Mor>>,
    homs: HashMap<(Obj, Obj), Vec<Mor>>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.compose == other.compose
    }
}

impl Eq for FinCat {}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

impl FinCat {
    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<Arrow>,
        identities: Vec<Mor>,
        compose: HashMap<(Mor, Mor), Mor>,
    ) -> Self {
        let mut outgoing = vec![Vec::new(); objects.len()];
        let mut incoming = vec![Vec::new(); objects.len()];
        let mut homs: HashMap<(Obj, Obj), Vec<Mor>> = HashMap::new();
        for (i, m) in morphisms.iter().enumerate() {
            outgoing[m.src.0].push(Mor(i));
            incoming[m.tgt.0].push(Mor(i));
            homs.entry((m.src, m.tgt)).or_default().push(Mor(i));
        }
        let mut object_index = HashMap::with_capacity(objects.len());
        for (i, o) in objects.iter().enumerate() {
            object_index.entry(o.clone()).or_insert(Obj(i));
        }
        let mut morphism_index = HashMap::with_capacity(morphisms.len());
        for (i, m) in morphisms.iter().enumerate() {
            morphism_index.entry(m.name.clone()).or_insert(Mor(i));
        }
        Self {
            objects,
            morphisms,
            identities,
            compose,
            object_index,
            morphism_index,
            outgoing,
            incoming,
            homs,
        }
    }

    /// Builds a category from named tables, as read from an interchange
    /// document. Dangling or duplicate names are structural errors; law
    /// violations (including a partial composition table) are left for
    /// [`FinCat::validate`].
    pub fn from_tables(
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        identities: Vec<(String, String)>,
        compose: Vec<(String, String, String)>,
    ) -> Result<Self> {
        let mut object_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), Obj(i)).is_some() {
                return Err(Error::Duplicate(o.clone()));
            }
        }
        let obj = |name: &str| {
            object_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownObject(name.to_string()))
        };
        let mut morphism_index = HashMap::new();
        let mut arrows = Vec::with_capacity(morphisms.len());
        for (i, (name, src, tgt)) in morphisms.into_iter().enumerate() {
            if morphism_index.insert(name.clone(), Mor(i)).is_some() {
                return Err(Error::Duplicate(name));
            }
            arrows.push(Arrow {
                name,
                src: obj(&src)?,
                tgt: obj(&tgt)?,
            });
        }
        let mor = |name: &str| {
            morphism_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
        };
        let mut ids = vec![None; objects.len()];
        for (o, m) in identities {
            let o = obj(&o)?;
            if ids[o.0].replace(mor(&m)?).is_some() {
                return Err(Error::Duplicate(format!("identity of `{}`", objects[o.0])));
            }
        }
        let identities = ids
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| {
                    Error::Malformed(format!("object `{}` has no identity", objects[i]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = HashMap::new();
        for (g, f, gf) in compose {
            let key = (mor(&g)?, mor(&f)?);
            if table.insert(key, mor(&gf)?).is_some() {
                return Err(Error::Duplicate(format!("composite ({g}, {f})")));
            }
        }
        Ok(Self::assemble(objects, arrows, identities, table))
    }

    /// Builds a category from index data and a composition function, which is
    /// evaluated on every composable pair `(g, f)` and must return `g ∘ f`.
    pub fn generate(
        objects: Vec<String>,
        morphisms: Vec<Arrow>,
        identities: Vec<Mor>,
        mut compose: impl FnMut(Mor, Mor) -> Mor,
    ) -> Self {
        let mut incoming = vec![Vec::new(); objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            incoming[m.tgt.0].push(Mor(i));
        }
        let mut table = HashMap::new();
        for (gi, g) in morphisms.iter().enumerate() {
            for &f in &incoming[g.src.0] {
                table.insert((Mor(gi), f), compose(Mor(gi), f));
            }
        }
        Self::assemble(objects, morphisms, identities, table)
    }

    /// The terminal category `1`.
    pub fn terminal() -> Self {
        Self::discrete(vec!["*".to_string()])
    }

    pub fn empty() -> Self {
        Self::discrete(Vec::new())
    }

    /// A discrete category; the identity on `x` is named `id_x`.
    pub fn discrete(objects: Vec<String>) -> Self {
        let morphisms = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Arrow {
                name: format!("id_{o}"),
                src: Obj(i),
                tgt: Obj(i),
            })
            .collect();
        let identities = (0..objects.len()).map(Mor).collect();
        Self::generate(objects, morphisms, identities, |g, _| g)
    }

    /// The thin category of a partial order given by `leq`, with the
    /// morphism `a ≤ b` named by `name(a, b)`.
    pub fn poset(
        objects: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
        name: impl Fn(&str, &str) -> String,
    ) -> Self {
        let n = objects.len();
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || leq(a, b) {
                    index.insert((a, b), Mor(morphisms.len()));
                    morphisms.push(Arrow {
                        name: name(&objects[a], &objects[b]),
                        src: Obj(a),
                        tgt: Obj(b),
                    });
                }
            }
        }
        let identities = (0..n).map(|a| index[&(a, a)]).collect();
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.src.0, m.tgt.0)).collect();
        Self::generate(objects, morphisms, identities, |g, f| {
            *index
                .get(&(ends[f.0].0, ends[g.0].1))
                .expect("order relation must be transitive")
        })
    }

    /// The ordinal `2` with objects `O ≤ P` and morphisms `OO`, `OP`, `PP`.
    pub fn interval() -> Self {
        Self::poset(
            vec!["O".into(), "P".into()],
            |a, b| a <= b,
            |a, b| format!("{a}{b}"),
        )
    }

    /// The chain `0 ≤ 1 ≤ … ≤ n-1`.
    pub fn chain(n: usize) -> Self {
        Self::poset(
            (0..n).map(|i| i.to_string()).collect(),
            |a, b| a <= b,
            |a, b| format!("{a}<={b}"),
        )
    }

    /// One-object category whose morphisms are the monoid elements;
    /// `mul(g, f)` is the composite `g ∘ f`.
    pub fn monoid(elements: Vec<String>, unit: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let morphisms = elements
            .into_iter()
            .map(|name| Arrow {
                name,
                src: Obj(0),
                tgt: Obj(0),
            })
            .collect();
        Self::generate(vec!["*".into()], morphisms, vec![Mor(unit)], |g, f| {
            Mor(mul(g.0, f.0))
        })
    }

    /// Product category; objects and morphisms named `(a,b)`, enumerated
    /// with the first component varying slowest.
    pub fn product(a: &FinCat, b: &FinCat) -> Self {
        let nb = b.num_objects();
        let mb = b.num_morphisms();
        let objects = a
            .objects
            .iter()
            .flat_map(|x| b.objects.iter().map(move |y| format!("({x},{y})")))
            .collect();
        let morphisms = a
            .morphisms
            .iter()
            .flat_map(|f| {
                b.morphisms.iter().map(move |g| Arrow {
                    name: format!("({},{})", f.name, g.name),
                    src: Obj(f.src.0 * nb + g.src.0),
                    tgt: Obj(f.tgt.0 * nb + g.tgt.0),
                })
            })
            .collect();
        let identities = (0..a.num_objects() * nb)
            .map(|i| Mor(a.identities[i / nb].0 * mb + b.identities[i % nb].0))
            .collect();
        Self::generate(objects, morphisms, identities, |g, f| {
            let (g1, g2) = (Mor(g.0 / mb), Mor(g.0 % mb));
            let (f1, f2) = (Mor(f.0 / mb), Mor(f.0 % mb));
            Mor(a.compose(g1, f1).0 * mb + b.compose(g2, f2).0)
        })
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = Obj> + Clone {
        (0..self.objects.len()).map(Obj)
    }

    pub fn morphisms(&self) -> impl ExactSizeIterator<Item = Mor> + Clone {
        (0..self.morphisms.len()).map(Mor)
    }

    pub fn object_name(&self, o: Obj) -> &str {
        &self.objects[o.0]
    }

    pub fn morphism_name(&self, m: Mor) -> &str {
        &self.morphisms[m.0].name
    }

    pub fn object(&self, name: &str) -> Result<Obj> {
        self.object_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism(&self, name: &str) -> Result<Mor> {
        self.morphism_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn src(&self, m: Mor) -> Obj {
        self.morphisms[m.0].src
    }

    pub fn tgt(&self, m: Mor) -> Obj {
        self.morphisms[m.0].tgt
    }

    pub fn identity(&self, o: Obj) -> Mor {
        self.identities[o.0]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.identities[self.src(m).0] == m
    }

    /// `g ∘ f`. Panics when the pair is missing from the table; categories
    /// built by this crate have total tables, loaded ones must be validated.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        match self.compose.get(&(g, f)) {
            Some(&gf) => gf,
            None => panic!(
                "composite of `{}` after `{}` is not defined",
                self.morphism_name(g),
                self.morphism_name(f)
            ),
        }
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.compose.get(&(g, f)).copied()
    }

    pub fn outgoing(&self, o: Obj) -> &[Mor] {
        &self.outgoing[o.0]
    }

    pub fn incoming(&self, o: Obj) -> &[Mor] {
        &self.incoming[o.0]
    }

    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        self.homs.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Composition table as sorted `(g, f, g∘f)` triples.
    pub fn composition_table(&self) -> Vec<(Mor, Mor, Mor)> {
        let mut t: Vec<_> = self
            .compose
            .iter()
            .map(|(&(g, f), &gf)| (g, f, gf))
            .collect();
        t.sort();
        t
    }

    /// Checks typing of identities and composites, totality of the table on
    /// composable pairs, identity laws and associativity.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        let name = |m: Mor| self.morphism_name(m);
        for o in self.objects() {
            let id = self.identity(o);
            if self.src(id) != o || self.tgt(id) != o {
                report.push(Violation::new(
                    "identity typing",
                    format!(
                        "`{}` is not an endomorphism of `{}`",
                        name(id),
                        self.object_name(o)
                    ),
                ));
            }
        }
        for ((g, f), gf) in self
            .composition_table()
            .into_iter()
            .map(|(g, f, gf)| ((g, f), gf))
        {
            if self.src(g) != self.tgt(f) {
                report.push(Violation::new(
                    "composition defined only on composable pairs",
                    format!("({}, {}) is not composable", name(g), name(f)),
                ));
            } else if self.src(gf) != self.src(f) || self.tgt(gf) != self.tgt(g) {
                report.push(Violation::new(
                    "composite typing",
                    format!(
                        "{} ∘ {} = {} has wrong endpoints",
                        name(g),
                        name(f),
                        name(gf)
                    ),
                ));
            }
        }
        for g in self.morphisms() {
            for &f in self.incoming(self.src(g)) {
                if self.try_compose(g, f).is_none() {
                    report.push(Violation::new(
                        "composition total on composable pairs",
                        format!("missing composite ({}, {})", name(g), name(f)),
                    ));
                }
            }
        }
        if !report.is_empty() {
            return report;
        }
        for f in self.morphisms() {
            let (a, b) = (self.src(f), self.tgt(f));
            if self.compose(self.identity(b), f) != f {
                report.push(Violation::new(
                    "left identity",
                    format!("id ∘ {} ≠ {}", name(f), name(f)),
                ));
            }
            if self.compose(f, self.identity(a)) != f {
                report.push(Violation::new(
                    "right identity",
                    format!("{} ∘ id ≠ {}", name(f), name(f)),
                ));
            }
        }
        for f in self.morphisms() {
            for &g in self.outgoing(self.tgt(f)) {
                let gf = self.compose(g, f);
                for &h in self.outgoing(self.tgt(g)) {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        report.push(Violation::new(
                            "associativity",
                            format!("({}, {}, {})", name(h), name(g), name(f)),
                        ));
                    }
                }
            }
        }
        report
    }

    /// Whether every hom-set has at most one element.
    pub fn is_thin(&self) -> bool {
        self.homs.values().all(|v| v.len() <= 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_is_valid() {
        let one = FinCat::terminal();
        assert_eq!(one.num_objects(), 1);
        assert_eq!(one.num_morphisms(), 1);
        assert!(one.validate().is_empty());
    }

    #[test]
    fn interval_has_three_morphisms() {
        let two = FinCat::interval();
        assert_eq!(two.num_morphisms(), 3);
        assert!(two.validate().is_empty());
        let op = two.morphism("OP").unwrap();
        assert_eq!(two.object_name(two.src(op)), "O");
        assert_eq!(two.object_name(two.tgt(op)), "P");
    }

    #[test]
    fn missing_composite_is_reported_by_name() {
        let cat = FinCat::from_tables(
            vec!["O".into(), "P".into()],
            vec![
                ("OO".into(), "O".into(), "O".into()),
                ("OP".into(), "O".into(), "P".into()),
                ("PP".into(), "P".into(), "P".into()),
            ],
            vec![("O".into(), "OO".into()), ("P".into(), "PP".into())],
            vec![
                ("OO".into(), "OO".into(), "OO".into()),
                ("OP".into(), "OO".into(), "OP".into()),
                ("PP".into(), "PP".into(), "PP".into()),
            ],
        )
        .unwrap();
        let report = cat.validate();
        assert_eq!(report.len(), 1);
        assert!(report[0].detail.contains("(PP, OP)"), "{report:?}");
    }

    #[test]
    fn dangling_identifier_is_structural() {
        let err = FinCat::from_tables(
            vec!["O".into()],
            vec![("OO".into(), "O".into(), "Q".into())],
            vec![("O".into(), "OO".into())],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownObject(ref q) if q == "Q"));
    }

    #[test]
    fn broken_associativity_is_detected() {
        // monoid table for {e, a} with a∘a = e but a "composite" lying about identity
        let cat = FinCat::monoid(vec!["e".into(), "a".into()], 0, |g, f| match (g, f) {
            (0, x) => x,
            (x, 0) => x,
            _ => 1,
        });
        assert!(cat.validate().is_empty());
        let bad = FinCat::monoid(vec!["e".into(), "a".into(), "b".into()], 0, |g, f| {
            match (g, f) {
                (0, x) | (x, 0) => x,
                (1, 1) => 2,
                (1, 2) => 0,
                (2, 1) => 1,
                _ => 2,
            }
        });
        assert!(bad.validate().iter().any(|v| v.law == "associativity"));
    }

    #[test]
    fn product_of_intervals() {
        let two = FinCat::interval();
        let sq = FinCat::product(&two, &two);
        assert_eq!(sq.num_objects(), 4);
        assert_eq!(sq.num_morphisms(), 9);
        assert!(sq.validate().is_empty());
        assert!(sq.is_thin());
    }
}
