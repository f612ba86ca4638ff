//! A fixed catalogue of small categories and exhaustive functor search.

use std::sync::Arc;

use super::category::{Arrow, FinCat, Mor, Obj};
use super::functor::FinFunctor;

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Two objects and two parallel arrows `f, g: x → y`.
pub fn parallel_pair() -> FinCat {
    let arrows = [("1x", 0, 0), ("1y", 1, 1), ("f", 0, 1), ("g", 0, 1)]
        .map(|(name, s, t)| Arrow {
            name: name.to_string(),
            src: Obj(s),
            tgt: Obj(t),
        })
        .to_vec();
    FinCat::generate(
        names(&["x", "y"]),
        arrows,
        vec![Mor(0), Mor(1)],
        |g, f| match (g.0, f.0) {
            (0 | 1, _) => f,
            (_, _) => g,
        },
    )
}

/// Two objects and mutually inverse arrows `f: x → y`, `g: y → x`.
pub fn walking_iso() -> FinCat {
    let arrows = [("1x", 0, 0), ("1y", 1, 1), ("f", 0, 1), ("g", 1, 0)]
        .map(|(name, s, t)| Arrow {
            name: name.to_string(),
            src: Obj(s),
            tgt: Obj(t),
        })
        .to_vec();
    FinCat::generate(
        names(&["x", "y"]),
        arrows,
        vec![Mor(0), Mor(1)],
        |g, f| match (g.0, f.0) {
            (0 | 1, _) => f,
            (_, 0 | 1) => g,
            (2, 3) => Mor(1),
            (3, 2) => Mor(0),
            _ => unreachable!("only f and g compose"),
        },
    )
}

/// Named categories with at most five objects, covering thin, discrete,
/// one-object and non-thin shapes.
pub fn small_categories() -> Vec<(&'static str, Arc<FinCat>)> {
    let poset = |objs: &[&str], leq: &[(usize, usize)]| {
        let leq = leq.to_vec();
        FinCat::poset(
            names(objs),
            move |a, b| leq.contains(&(a, b)),
            |a, b| format!("{a}<={b}"),
        )
    };
    let two = FinCat::interval();
    vec![
        ("1", FinCat::terminal()),
        ("1+1", FinCat::discrete(names(&["a", "b"]))),
        ("2", two.clone()),
        ("3", FinCat::chain(3)),
        ("5", FinCat::chain(5)),
        ("span", poset(&["l", "c", "r"], &[(1, 0), (1, 2)])),
        ("cospan", poset(&["l", "t", "r"], &[(0, 1), (2, 1)])),
        ("2x2", FinCat::product(&two, &two)),
        ("parallel", parallel_pair()),
        ("iso", walking_iso()),
        ("Z/2", FinCat::monoid(names(&["e", "s"]), 0, |a, b| a ^ b)),
        (
            "idempotent",
            FinCat::monoid(names(&["1", "e"]), 0, |a, b| a | b),
        ),
    ]
    .into_iter()
    .map(|(n, c)| (n, Arc::new(c)))
    .collect()
}

/// Every functor `a → b`, in lexicographic order of object then morphism
/// assignments.
pub fn all_functors(a: &Arc<FinCat>, b: &Arc<FinCat>) -> Vec<FinFunctor> {
    let mut out = Vec::new();
    let mut objects = Vec::with_capacity(a.num_objects());
    assign_objects(a, b, &mut objects, &mut out);
    out
}

fn assign_objects(
    a: &Arc<FinCat>,
    b: &Arc<FinCat>,
    objects: &mut Vec<Obj>,
    out: &mut Vec<FinFunctor>,
) {
    if objects.len() == a.num_objects() {
        let mut morphisms = vec![None; a.num_morphisms()];
        for o in a.objects() {
            morphisms[a.identity(o).0] = Some(b.identity(objects[o.0]));
        }
        assign_morphisms(a, b, objects, &mut morphisms, 0, out);
        return;
    }
    for o in b.objects() {
        objects.push(o);
        assign_objects(a, b, objects, out);
        objects.pop();
    }
}

fn assign_morphisms(
    a: &Arc<FinCat>,
    b: &Arc<FinCat>,
    objects: &[Obj],
    morphisms: &mut Vec<Option<Mor>>,
    next: usize,
    out: &mut Vec<FinFunctor>,
) {
    let Some(m) = (next..a.num_morphisms())
        .map(Mor)
        .find(|m| morphisms[m.0].is_none())
    else {
        let on_morphisms = morphisms.iter().map(|m| m.expect("all assigned")).collect();
        out.push(
            FinFunctor::new(a.clone(), b.clone(), objects.to_vec(), on_morphisms)
                .expect("checked functorial"),
        );
        return;
    };
    let (s, t) = (objects[a.src(m).0], objects[a.tgt(m).0]);
    for &image in b.hom(s, t) {
        morphisms[m.0] = Some(image);
        if consistent(a, b, morphisms, m) {
            assign_morphisms(a, b, objects, morphisms, m.0 + 1, out);
        }
    }
    morphisms[m.0] = None;
}

/// Composites involving `m` whose three parts are assigned agree.
fn consistent(a: &FinCat, b: &FinCat, morphisms: &[Option<Mor>], m: Mor) -> bool {
    a.composition_table().into_iter().all(|(g, f, gf)| {
        if g != m && f != m && gf != m {
            return true;
        }
        match (morphisms[g.0], morphisms[f.0], morphisms[gf.0]) {
            (Some(x), Some(y), Some(z)) => b.compose(x, y) == z,
            _ => true,
        }
    })
}
