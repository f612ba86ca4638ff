//! Independent oracles shared by the integration tests. Nothing here calls the
//! routine it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use simplegames::clock::{Scheduling, Side, Triangle};
use simplegames::day::StrictMonoidalCat;
use simplegames::fincat::{coend, FinCat, FinFunctor, Mor, Obj, Presheaf, Profunctor};

/// A move of an interaction over `A | B | C`; middle moves carry their sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tagged {
    Outer(Side),
    Middle(bool),
}

fn tag_left(t: Triangle) -> Tagged {
    match t.side() {
        Side::Left => Tagged::Outer(Side::Left),
        Side::Right => Tagged::Middle(t.is_positive()),
    }
}

fn tag_right(t: Triangle) -> Tagged {
    match t.side() {
        Side::Left => Tagged::Middle(t.is_positive()),
        Side::Right => Tagged::Outer(Side::Right),
    }
}

/// Every word of outer sides obtained by merging the moves of `alpha` (over
/// `A | B`) with those of `beta` (over `B | C`), synchronising on equal middle
/// moves, then deleting the middle moves. No state information is used.
pub fn hidden_words(alpha: &Scheduling, beta: &Scheduling) -> BTreeSet<Vec<Side>> {
    let a: Vec<Tagged> = alpha.steps().iter().map(|&t| tag_left(t)).collect();
    let b: Vec<Tagged> = beta.steps().iter().map(|&t| tag_right(t)).collect();
    let mut out = BTreeSet::new();
    merge(&a, &b, &mut Vec::new(), &mut out);
    out
}

fn merge(a: &[Tagged], b: &[Tagged], acc: &mut Vec<Side>, out: &mut BTreeSet<Vec<Side>>) {
    if a.is_empty() && b.is_empty() {
        out.insert(acc.clone());
        return;
    }
    if let Some(&Tagged::Outer(side)) = a.first() {
        acc.push(side);
        merge(&a[1..], b, acc, out);
        acc.pop();
    }
    if let Some(&Tagged::Outer(side)) = b.first() {
        acc.push(side);
        merge(a, &b[1..], acc, out);
        acc.pop();
    }
    if let (Some(Tagged::Middle(x)), Some(Tagged::Middle(y))) = (a.first(), b.first()) {
        if x == y {
            merge(&a[1..], &b[1..], acc, out);
        }
    }
}

fn position(cat: &FinCat, a: Obj, b: Obj, m: Mor) -> usize {
    cat.hom(a, b)
        .iter()
        .position(|&x| x == m)
        .expect("morphism in its hom-set")
}

/// `b ↦ ∫^a B(b, f a)`, with the action by precomposition, assembled from
/// one coend per object of the codomain.
pub fn coend_presheaf(f: &FinFunctor) -> Presheaf {
    let (dom, cod) = (f.domain().clone(), f.codomain().clone());
    let coends: Vec<_> = cod
        .objects()
        .map(|b| {
            let (c2, f2) = (cod.clone(), f.clone());
            let (c3, f3) = (cod.clone(), f.clone());
            let w = Profunctor::build(
                dom.clone(),
                move |_, d| {
                    c2.hom(b, f2.object(d))
                        .iter()
                        .map(|&m| c2.morphism_name(m).to_string())
                        .collect()
                },
                |_, _, x| x,
                move |_, beta, x| {
                    let d = f3.domain().src(beta);
                    let d2 = f3.domain().tgt(beta);
                    let m = c3.hom(b, f3.object(d))[x];
                    position(&c3, b, f3.object(d2), c3.compose(f3.morphism(beta), m))
                },
            );
            coend(&w).expect("hom profunctor is lawful")
        })
        .collect();
    let sections = coends
        .iter()
        .map(|c| (0..c.classes).map(|k| format!("k{k}")).collect())
        .collect();
    Presheaf::from_fn(cod.clone(), sections, |gamma, k| {
        let (b, b2) = (cod.src(gamma), cod.tgt(gamma));
        let (a, x) = coends[b2.0].representatives[k];
        let m = cod.hom(b2, f.object(a))[x];
        let y = position(&cod, b, f.object(a), cod.compose(m, gamma));
        coends[b.0].injections[a.0][y]
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Exhaustive search for a natural bijection `x ≅ y`.
pub fn isomorphic_brute(x: &Presheaf, y: &Presheaf) -> bool {
    let base = x.base().clone();
    if x.section_counts() != y.section_counts() {
        return false;
    }
    let perms: Vec<Vec<Vec<usize>>> = base
        .objects()
        .map(|c| permutations(x.section_count(c)))
        .collect();
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    search(&base, x, y, &perms, &mut chosen)
}

fn search(
    base: &Arc<FinCat>,
    x: &Presheaf,
    y: &Presheaf,
    perms: &[Vec<Vec<usize>>],
    chosen: &mut Vec<Vec<usize>>,
) -> bool {
    let c = chosen.len();
    if c == base.num_objects() {
        return true;
    }
    for p in &perms[c] {
        chosen.push(p.clone());
        let natural = base.morphisms().all(|m| {
            let (s, t) = (base.src(m).0, base.tgt(m).0);
            if s > c || t > c {
                return true;
            }
            (0..x.section_count(Obj(t))).all(|e| chosen[s][x.act(m, e)] == y.act(m, chosen[t][e]))
        });
        if natural && search(base, x, y, perms, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Section counts of `x ⊗ y` over a discrete base:
/// `(x ⊗ y)(c) = Σ_{a ⊗ b = c} x(a)·y(b)`.
pub fn discrete_convolution_counts(
    x: &Presheaf,
    y: &Presheaf,
    m: &StrictMonoidalCat,
) -> Vec<usize> {
    let base = m.base();
    let mut counts = vec![0; base.num_objects()];
    for a in base.objects() {
        for b in base.objects() {
            counts[m.tensor_objects(a, b).0] += x.section_count(a) * y.section_count(b);
        }
    }
    counts
}

/// Composable pairs of schedulings with at most `bound` triangles in total.
pub fn composable_pairs(all: &[Scheduling], bound: usize) -> Vec<(&Scheduling, &Scheduling)> {
    let mut out = Vec::new();
    for a in all {
        for b in all {
            let (ba, bb) = (a.borders(), b.borders());
            if a.len() + b.len() <= bound
                && ba.right == bb.left
                && ba.top.then(bb.top).is_some()
                && ba.bottom.then(bb.bottom).is_some()
            {
                out.push((a, b));
            }
        }
    }
    out
}

/// Number of connected components of `b/f`, by breadth-first search over
/// pairs `(a, β: b → f a)` linked by `α: a → a'` with `f(α)∘β = β'`.
pub fn comma_component_count(b: Obj, f: &FinFunctor) -> usize {
    let (dom, cod) = (f.domain(), f.codomain());
    let nodes: Vec<(Obj, Mor)> = dom
        .objects()
        .flat_map(|a| cod.hom(b, f.object(a)).iter().map(move |&beta| (a, beta)))
        .collect();
    let linked = |x: (Obj, Mor), y: (Obj, Mor)| {
        let edge = |(a, beta): (Obj, Mor), (a2, beta2): (Obj, Mor)| {
            dom.hom(a, a2)
                .iter()
                .any(|&alpha| cod.compose(f.morphism(alpha), beta) == beta2)
        };
        edge(x, y) || edge(y, x)
    };
    let mut seen = vec![false; nodes.len()];
    let mut components = 0;
    for start in 0..nodes.len() {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..nodes.len() {
                if !seen[j] && linked(nodes[i], nodes[j]) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    components
}
