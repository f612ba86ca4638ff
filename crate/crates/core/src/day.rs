//! Day convolution of presheaves over finite strict monoidal categories,
//! computed from the coend formula and, independently, as the right part of
//! the comprehensive factorisation of `el(X) × el(Y) → C × C → C`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::factorisation::comprehensive_factor;
use crate::fincat::{
    coend, elements, presheaf_iso, presheaf_of_dfib, same_category, FinCat, FinFunctor, Mor, Obj,
    Presheaf, Profunctor, Span,
};
use crate::slice::{associator, MonoidMonad, SliceCell};

/// A category with a tensor that is associative and unital on the nose.
#[derive(Clone, Debug)]
pub struct StrictMonoidalCat {
    name: String,
    base: Arc<FinCat>,
    tensor: FinFunctor,
    unit: Obj,
}

impl StrictMonoidalCat {
    /// `tensor` must be a functor out of `base × base` as built by
    /// [`FinCat::product`]; the laws are left to [`validate_strict_monoidal`].
    pub fn new(
        name: impl Into<String>,
        base: Arc<FinCat>,
        tensor: FinFunctor,
        unit: Obj,
    ) -> Result<Self> {
        let square = FinCat::product(&base, &base);
        if **tensor.domain() != square || !same_category(tensor.codomain(), &base) {
            return Err(Error::Mismatch(
                "tensor must be a functor base × base → base".into(),
            ));
        }
        if unit.0 >= base.num_objects() {
            return Err(Error::UnknownObject(format!("#{}", unit.0)));
        }
        Ok(Self {
            name: name.into(),
            base,
            tensor,
            unit,
        })
    }

    /// Builds the tensor from functions on objects and morphisms.
    pub fn from_fn(
        name: impl Into<String>,
        base: Arc<FinCat>,
        on_objects: impl Fn(Obj, Obj) -> Obj,
        on_morphisms: impl Fn(Mor, Mor) -> Mor,
        unit: Obj,
    ) -> Result<Self> {
        let square = Arc::new(FinCat::product(&base, &base));
        let (n, m) = (base.num_objects(), base.num_morphisms());
        let tensor = FinFunctor::new(
            square,
            base.clone(),
            (0..n * n)
                .map(|i| on_objects(Obj(i / n), Obj(i % n)))
                .collect(),
            (0..m * m)
                .map(|i| on_morphisms(Mor(i / m), Mor(i % m)))
                .collect(),
        )?;
        Self::new(name, base, tensor, unit)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn tensor(&self) -> &FinFunctor {
        &self.tensor
    }

    pub fn unit(&self) -> Obj {
        self.unit
    }

    pub fn tensor_objects(&self, a: Obj, b: Obj) -> Obj {
        self.tensor.object(Obj(a.0 * self.base.num_objects() + b.0))
    }

    pub fn tensor_morphisms(&self, f: Mor, g: Mor) -> Mor {
        self.tensor
            .morphism(Mor(f.0 * self.base.num_morphisms() + g.0))
    }

    pub fn monad(&self) -> MonoidMonad {
        MonoidMonad::new(self.clone())
    }

    /// The group of order 2 as a discrete category, tensor = addition.
    pub fn cyclic2() -> Self {
        let base = Arc::new(FinCat::discrete(vec!["0".into(), "1".into()]));
        let b = base.clone();
        Self::from_fn(
            "Z/2",
            base,
            |a, c| Obj((a.0 + c.0) % 2),
            move |f, g| b.identity(Obj((b.src(f).0 + b.src(g).0) % 2)),
            Obj(0),
        )
        .expect("well typed")
    }

    /// The chain `0 ≤ … ≤ n-1` with tensor = max and unit 0.
    pub fn max_chain(n: usize) -> Self {
        let base = Arc::new(FinCat::chain(n));
        Self::thin(format!("max-chain({n})"), base, |a, b| a.max(b), 0).expect("well typed")
    }

    /// A thin category with tensor given on objects; morphisms follow.
    pub fn thin(
        name: impl Into<String>,
        base: Arc<FinCat>,
        on_objects: impl Fn(usize, usize) -> usize,
        unit: usize,
    ) -> Result<Self> {
        let b = base.clone();
        let hom_between =
            |x: Obj, y: Obj| -> Mor { b.hom(x, y).first().copied().unwrap_or(Mor(usize::MAX)) };
        let (objs, mors): (Vec<_>, Vec<_>) = {
            let n = base.num_objects();
            let m = base.num_morphisms();
            let objs = (0..n * n).map(|i| Obj(on_objects(i / n, i % n))).collect();
            let mors = (0..m * m)
                .map(|i| {
                    let (f, g) = (Mor(i / m), Mor(i % m));
                    hom_between(
                        Obj(on_objects(b.src(f).0, b.src(g).0)),
                        Obj(on_objects(b.tgt(f).0, b.tgt(g).0)),
                    )
                })
                .collect();
            (objs, mors)
        };
        let square = Arc::new(FinCat::product(&base, &base));
        let tensor = FinFunctor::new(square, base.clone(), objs, mors)?;
        Self::new(name, base, tensor, Obj(unit))
    }

    /// The monoid `{0, 1, 2, ⊤}` under addition truncated at `⊤`, as a
    /// one-object category whose composition and tensor are both addition.
    pub fn truncated_sum() -> Self {
        let add = |a: usize, b: usize| (a + b).min(3);
        let base = Arc::new(FinCat::monoid(
            vec!["0".into(), "1".into(), "2".into(), "T".into()],
            0,
            add,
        ));
        Self::from_fn(
            "truncated-sum",
            base,
            |_, _| Obj(0),
            move |f, g| Mor(add(f.0, g.0)),
            Obj(0),
        )
        .expect("well typed")
    }

    /// The four shipped bases.
    pub fn shipped() -> Vec<Self> {
        vec![
            Self::cyclic2(),
            Self::max_chain(2),
            Self::max_chain(3),
            Self::truncated_sum(),
        ]
    }
}

/// Functoriality, strict associativity and strict unitality of the tensor.
pub fn validate_strict_monoidal(m: &StrictMonoidalCat) -> Vec<Violation> {
    let base = &*m.base;
    let mut report = base.validate();
    if !report.is_empty() {
        return report;
    }
    report.extend(m.tensor.validate());
    if !report.is_empty() {
        return report;
    }
    let i = m.unit;
    for a in base.objects() {
        if m.tensor_objects(i, a) != a || m.tensor_objects(a, i) != a {
            report.push(Violation::new(
                "tensor unit on objects",
                format!("I ⊗ {0} or {0} ⊗ I", base.object_name(a)),
            ));
        }
        for b in base.objects() {
            for c in base.objects() {
                let l = m.tensor_objects(m.tensor_objects(a, b), c);
                let r = m.tensor_objects(a, m.tensor_objects(b, c));
                if l != r {
                    report.push(Violation::new(
                        "tensor associative on objects",
                        format!(
                            "({}, {}, {})",
                            base.object_name(a),
                            base.object_name(b),
                            base.object_name(c)
                        ),
                    ));
                }
            }
        }
    }
    let id_i = base.identity(i);
    for f in base.morphisms() {
        if m.tensor_morphisms(id_i, f) != f || m.tensor_morphisms(f, id_i) != f {
            report.push(Violation::new(
                "tensor unit on morphisms",
                base.morphism_name(f).to_string(),
            ));
        }
        for g in base.morphisms() {
            for h in base.morphisms() {
                let l = m.tensor_morphisms(m.tensor_morphisms(f, g), h);
                let r = m.tensor_morphisms(f, m.tensor_morphisms(g, h));
                if l != r {
                    report.push(Violation::new(
                        "tensor associative on morphisms",
                        format!(
                            "({}, {}, {})",
                            base.morphism_name(f),
                            base.morphism_name(g),
                            base.morphism_name(h)
                        ),
                    ));
                }
            }
        }
    }
    report
}

pub fn yoneda(c: Obj, m: &StrictMonoidalCat) -> Result<Presheaf> {
    if c.0 >= m.base.num_objects() {
        return Err(Error::UnknownObject(format!("#{}", c.0)));
    }
    Ok(Presheaf::representable(m.base.clone(), c))
}

/// A convolution computed from the coend, with the diagonal members of every
/// class.
#[derive(Clone, Debug, Serialize)]
pub struct Convolution {
    #[serde(skip)]
    pub presheaf: Presheaf,
    /// `provenance[c][k]` lists the integrand elements glued into section `k`
    /// at `c`, each written `(c₁,…; x₁,…; φ)`.
    pub provenance: Vec<Vec<Vec<String>>>,
}

fn check_bases(factors: &[&Presheaf], m: &StrictMonoidalCat) -> Result<()> {
    for x in factors {
        if !same_category(x.base(), &m.base) {
            return Err(Error::Mismatch(
                "presheaf is not over the monoidal base".into(),
            ));
        }
    }
    Ok(())
}

/// `(X₁ ⊗ … ⊗ Xₖ)(c) = ∫^{c₁…cₖ} X₁(c₁) × … × Xₖ(cₖ) × C(c, c₁ ⊗ … ⊗ cₖ)`.
pub fn convolve_many_coend(factors: &[&Presheaf], m: &StrictMonoidalCat) -> Result<Convolution> {
    check_bases(factors, m)?;
    let base = &m.base;
    let k = factors.len();
    let (n, nm) = (base.num_objects(), base.num_morphisms());
    let mut power = Arc::new(FinCat::terminal());
    for _ in 0..k {
        power = Arc::new(FinCat::product(&power, base));
    }
    let digits = |mut i: usize, radix: usize| {
        let mut out = vec![0; k];
        for slot in out.iter_mut().rev() {
            *slot = i % radix;
            i /= radix;
        }
        out
    };
    let tensor_obj = |e: &[usize]| {
        e.iter()
            .fold(m.unit, |acc, &x| m.tensor_objects(acc, Obj(x)))
    };
    let tensor_mor = |fs: &[usize]| {
        fs.iter().fold(base.identity(m.unit), |acc, &f| {
            m.tensor_morphisms(acc, Mor(f))
        })
    };
    let hom_position: Vec<usize> = base
        .morphisms()
        .map(|f| {
            base.hom(base.src(f), base.tgt(f))
                .iter()
                .position(|&g| g == f)
                .unwrap()
        })
        .collect();
    // element (x₁…xₖ, φ) of W(d, e) at index (((x₁·|X₂|) + x₂)…)·|hom| + φ
    let sizes = |d: &[usize]| -> Vec<usize> {
        (0..k)
            .map(|i| factors[i].section_count(Obj(d[i])))
            .collect()
    };
    let encode = |sizes: &[usize], xs: &[usize], phi: usize, homs: usize| {
        xs.iter().zip(sizes).fold(0, |acc, (&x, &s)| acc * s + x) * homs + phi
    };
    let decode = |sizes: &[usize], mut i: usize, homs: usize| {
        let phi = i % homs;
        i /= homs;
        let mut xs = vec![0; k];
        for (slot, &s) in xs.iter_mut().zip(sizes).rev() {
            *slot = i % s;
            i /= s;
        }
        (xs, phi)
    };
    let mut presheaf_sections = Vec::with_capacity(n);
    let mut provenance = Vec::with_capacity(n);
    let mut coends = Vec::with_capacity(n);
    let mut integrands = Vec::with_capacity(n);
    for c in base.objects() {
        let homs = |e: &[usize]| base.hom(c, tensor_obj(e)).len();
        let w = Profunctor::build(
            power.clone(),
            |d, e| {
                let (d, e) = (digits(d.0, n), digits(e.0, n));
                let sz = sizes(&d);
                let hom = base.hom(c, tensor_obj(&e));
                let total: usize = sz.iter().product::<usize>() * hom.len();
                (0..total)
                    .map(|i| {
                        let (xs, phi) = decode(&sz, i, hom.len());
                        let labels: Vec<&str> = xs
                            .iter()
                            .enumerate()
                            .map(|(j, &x)| factors[j].sections(Obj(d[j]))[x].as_str())
                            .collect();
                        let objs: Vec<&str> = e.iter().map(|&o| base.object_name(Obj(o))).collect();
                        format!(
                            "({}; {}; {})",
                            objs.join(","),
                            labels.join(","),
                            base.morphism_name(hom[phi])
                        )
                    })
                    .collect()
            },
            |alpha, e, i| {
                let fs = digits(alpha.0, nm);
                let (dsrc, dtgt): (Vec<usize>, Vec<usize>) = fs
                    .iter()
                    .map(|&f| (base.src(Mor(f)).0, base.tgt(Mor(f)).0))
                    .unzip();
                let e = digits(e.0, n);
                let h = homs(&e);
                let (xs, phi) = decode(&sizes(&dtgt), i, h);
                let moved: Vec<usize> = (0..k).map(|j| factors[j].act(Mor(fs[j]), xs[j])).collect();
                encode(&sizes(&dsrc), &moved, phi, h)
            },
            |d, beta, i| {
                let fs = digits(beta.0, nm);
                let (esrc, etgt): (Vec<usize>, Vec<usize>) = fs
                    .iter()
                    .map(|&f| (base.src(Mor(f)).0, base.tgt(Mor(f)).0))
                    .unzip();
                let d = digits(d.0, n);
                let sz = sizes(&d);
                let (xs, phi) = decode(&sz, i, homs(&esrc));
                let from = base.hom(c, tensor_obj(&esrc))[phi];
                let to = base.compose(tensor_mor(&fs), from);
                encode(&sz, &xs, hom_position[to.0], homs(&etgt))
            },
        );
        let q = coend(&w)?;
        let mut members = vec![Vec::new(); q.classes];
        for e in power.objects() {
            for (x, &class) in q.injections[e.0].iter().enumerate() {
                members[class].push(w.set(e, e)[x].clone());
            }
        }
        presheaf_sections.push(
            q.representatives
                .iter()
                .map(|&(e, x)| format!("[{}]", w.set(e, e)[x]))
                .collect(),
        );
        provenance.push(members);
        coends.push(q);
        integrands.push(w);
    }
    // γ: c' → c sends the class of (x, φ) at c to the class of (x, φ∘γ) at c'
    let presheaf = Presheaf::from_fn(base.clone(), presheaf_sections, |gamma, class| {
        let (c2, c) = (base.src(gamma), base.tgt(gamma));
        let (e, i) = coends[c.0].representatives[class];
        let d = digits(e.0, n);
        let sz = sizes(&d);
        let from_hom = base.hom(c, tensor_obj(&d));
        let (xs, phi) = decode(&sz, i, from_hom.len());
        let to = base.compose(from_hom[phi], gamma);
        let target_homs = base.hom(c2, tensor_obj(&d)).len();
        coends[c2.0].injections[e.0][encode(&sz, &xs, hom_position[to.0], target_homs)]
    });
    crate::error::ensure_valid(presheaf.validate())
        .map_err(|e| Error::Internal(format!("convolution action is not functorial: {e}")))?;
    Ok(Convolution {
        presheaf,
        provenance,
    })
}

pub fn convolve_coend(x: &Presheaf, y: &Presheaf, m: &StrictMonoidalCat) -> Result<Presheaf> {
    Ok(convolve_many_coend(&[x, y], m)?.presheaf)
}

/// The right part of the factorisation of `el(X) × el(Y) → C × C → C`, read
/// back as a presheaf.
pub fn convolve_factor(x: &Presheaf, y: &Presheaf, m: &StrictMonoidalCat) -> Result<Presheaf> {
    check_bases(&[x, y], m)?;
    let (ex, ey) = (elements(x), elements(y));
    let product = Arc::new(FinCat::product(&ex.category, &ey.category));
    let (nx, mx) = (ey.category.num_objects(), ey.category.num_morphisms());
    let f = FinFunctor::new(
        product.clone(),
        m.base.clone(),
        product
            .objects()
            .map(|o| {
                m.tensor_objects(
                    ex.projection.object(Obj(o.0 / nx)),
                    ey.projection.object(Obj(o.0 % nx)),
                )
            })
            .collect(),
        product
            .morphisms()
            .map(|g| {
                m.tensor_morphisms(
                    ex.projection.morphism(Mor(g.0 / mx)),
                    ey.projection.morphism(Mor(g.0 % mx)),
                )
            })
            .collect(),
    )?;
    presheaf_of_dfib(&comprehensive_factor(&f).right)
}

/// The cell `1 ← el(X) → 1` over the monoid monad.
pub fn presheaf_cell(x: &Presheaf, monad: &MonoidMonad) -> Result<SliceCell> {
    use crate::slice::MonadPresentation;
    let el = elements(x);
    let one = monad.base().clone();
    let bang = FinFunctor::to_terminal(el.category.clone(), one.clone());
    let id = FinFunctor::identity(one);
    SliceCell::new(
        monad,
        id.clone(),
        id,
        Span::new(bang.clone(), bang)?,
        el.projection,
    )
}

/// The presheaf of a restricted cell over the monoid monad.
pub fn presheaf_of_cell(cell: &SliceCell) -> Result<Presheaf> {
    presheaf_of_dfib(cell.middle())
}

/// Each law is checked through [`presheaf_iso`] on the coend route.
pub fn monoidal_laws_check(m: &StrictMonoidalCat, tests: &[Presheaf]) -> Result<Vec<Violation>> {
    let mut report = validate_strict_monoidal(m);
    if !report.is_empty() {
        return Ok(report);
    }
    let base = &m.base;
    let unit = yoneda(m.unit, m)?;
    let iso = |a: &Presheaf, b: &Presheaf| presheaf_iso(a, b).map(|o| o.is_some());
    for (i, x) in tests.iter().enumerate() {
        if !iso(&convolve_coend(&unit, x, m)?, x)? || !iso(&convolve_coend(x, &unit, m)?, x)? {
            report.push(Violation::new(
                "convolution unit",
                format!("test presheaf #{i}"),
            ));
        }
    }
    for a in base.objects() {
        for b in base.objects() {
            let lhs = convolve_coend(&yoneda(a, m)?, &yoneda(b, m)?, m)?;
            if !iso(&lhs, &yoneda(m.tensor_objects(a, b), m)?)? {
                report.push(Violation::new(
                    "yoneda monoidal",
                    format!("y({}) ⊗ y({})", base.object_name(a), base.object_name(b)),
                ));
            }
        }
    }
    let monad = m.monad();
    for (i, x) in tests.iter().enumerate() {
        for (j, y) in tests.iter().enumerate() {
            for (k, z) in tests.iter().enumerate() {
                let left = convolve_coend(&convolve_coend(x, y, m)?, z, m)?;
                let right = convolve_coend(x, &convolve_coend(y, z, m)?, m)?;
                let triple = convolve_many_coend(&[x, y, z], m)?.presheaf;
                let which = format!("(#{i}, #{j}, #{k})");
                if !iso(&left, &right)? {
                    report.push(Violation::new("convolution associative", which.clone()));
                }
                let cells = [x, y, z].map(|p| presheaf_cell(p, &monad));
                let [cx, cy, cz] = cells;
                let a = associator(&cx?, &cy?, &cz?, &monad)?;
                let (from, to) = (presheaf_of_cell(&a.source)?, presheaf_of_cell(&a.target)?);
                if !a.is_isomorphism() || !iso(&from, &triple)? || !iso(&to, &triple)? {
                    report.push(Violation::new("associator matches the triple coend", which));
                }
            }
        }
    }
    Ok(report)
}

/// Unlabelled rooted forests with `nodes` nodes and depth at most
/// `max_depth`, as parent arrays in preorder. Roots have no parent.
pub fn forests(nodes: usize, max_depth: usize) -> Vec<Vec<Option<usize>>> {
    let mut trees_by_size: Vec<Vec<String>> = vec![Vec::new(); nodes + 1];
    let mut memo = HashMap::new();
    for size in 1..=nodes {
        trees_by_size[size] = trees(size, max_depth, &mut memo);
    }
    let all: Vec<(usize, String)> = (1..=nodes)
        .flat_map(|s| trees_by_size[s].iter().map(move |t| (s, t.clone())))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    choose_forests(&all, 0, nodes, &mut chosen, &mut out);
    out.into_iter()
        .map(|codes: Vec<String>| parents_of(&codes.concat()))
        .collect()
}

fn trees(
    size: usize,
    depth: usize,
    memo: &mut HashMap<(usize, usize), Vec<String>>,
) -> Vec<String> {
    if let Some(t) = memo.get(&(size, depth)) {
        return t.clone();
    }
    let out = if size == 1 {
        vec!["()".to_string()]
    } else if depth == 0 {
        Vec::new()
    } else {
        let mut children = Vec::new();
        let all: Vec<(usize, String)> = (1..size)
            .flat_map(|s| trees(s, depth - 1, memo).into_iter().map(move |t| (s, t)))
            .collect();
        let mut chosen = Vec::new();
        choose_forests(&all, 0, size - 1, &mut chosen, &mut children);
        children
            .into_iter()
            .map(|c| format!("({})", c.concat()))
            .collect()
    };
    memo.insert((size, depth), out.clone());
    out
}

/// Multisets from `all[from..]` (non-decreasing index) with sizes summing to `left`.
fn choose_forests(
    all: &[(usize, String)],
    from: usize,
    left: usize,
    chosen: &mut Vec<String>,
    out: &mut Vec<Vec<String>>,
) {
    if left == 0 {
        out.push(chosen.clone());
        return;
    }
    for i in from..all.len() {
        let (size, code) = &all[i];
        if *size > left {
            continue;
        }
        chosen.push(code.clone());
        choose_forests(all, i, left - size, chosen, out);
        chosen.pop();
    }
}

fn parents_of(code: &str) -> Vec<Option<usize>> {
    let mut parents = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for ch in code.chars() {
        if ch == '(' {
            parents.push(stack.last().copied());
            stack.push(parents.len() - 1);
        } else {
            stack.pop();
        }
    }
    parents
}

fn depths(parents: &[Option<usize>]) -> Vec<usize> {
    let mut d = vec![0; parents.len()];
    for i in 0..parents.len() {
        d[i] = parents[i].map_or(0, |p| d[p] + 1);
    }
    d
}

/// The presheaf on a chain whose sections at level `i` are the nodes at
/// depth `i`; `i ≤ j` sends a node to its ancestor at depth `i`.
/// Parents must precede their children.
pub fn chain_presheaf(base: &Arc<FinCat>, parents: &[Option<usize>]) -> Presheaf {
    let depth = depths(parents);
    let levels: Vec<Vec<usize>> = base
        .objects()
        .map(|c| (0..parents.len()).filter(|&v| depth[v] == c.0).collect())
        .collect();
    let position: Vec<usize> = (0..parents.len())
        .map(|v| levels[depth[v]].iter().position(|&u| u == v).unwrap())
        .collect();
    let sections = levels
        .iter()
        .map(|l| l.iter().map(|v| format!("x{v}")).collect())
        .collect();
    Presheaf::from_fn(base.clone(), sections, |alpha, x| {
        let (i, j) = (base.src(alpha).0, base.tgt(alpha).0);
        let mut v = levels[j][x];
        for _ in i..j {
            v = parents[v].expect("depth decreases to the root level");
        }
        position[v]
    })
}

/// The presheaf on the truncated-sum monoid in which `1` moves a node to its
/// parent and roots are fixed.
pub fn monoid_presheaf(base: &Arc<FinCat>, parents: &[Option<usize>]) -> Presheaf {
    let sections = vec![(0..parents.len()).map(|v| format!("x{v}")).collect()];
    Presheaf::from_fn(base.clone(), sections, |alpha, x| {
        let mut v = x;
        for _ in 0..alpha.0 {
            v = parents[v].unwrap_or(v);
        }
        v
    })
}

/// Presheaves on a shipped base with exactly `total` sections, one per
/// isomorphism class. `None` for bases of other shapes.
pub fn catalogue(m: &StrictMonoidalCat, total: usize) -> Option<Vec<Presheaf>> {
    let base = &m.base;
    match m.name() {
        "Z/2" => Some(
            (0..=total)
                .map(|a| {
                    let sections = vec![
                        (0..a).map(|i| format!("x{i}")).collect(),
                        (0..total - a).map(|i| format!("y{i}")).collect(),
                    ];
                    Presheaf::from_fn(base.clone(), sections, |_, x| x)
                })
                .collect(),
        ),
        "truncated-sum" => Some(
            forests(total, 3)
                .iter()
                .map(|p| monoid_presheaf(base, p))
                .collect(),
        ),
        name if name.starts_with("max-chain") => Some(
            forests(total, base.num_objects() - 1)
                .iter()
                .map(|p| chain_presheaf(base, p))
                .collect(),
        ),
        _ => None,
    }
}

/// A random presheaf with at most `max_sections` sections on a shipped base.
pub fn random_presheaf(
    m: &StrictMonoidalCat,
    rng: &mut impl Rng,
    max_sections: usize,
) -> Option<Presheaf> {
    let base = &m.base;
    let total = rng.gen_range(0..=max_sections);
    let max_depth = match m.name() {
        "Z/2" => {
            let a = rng.gen_range(0..=total);
            return catalogue(m, total).map(|c| c[a].clone());
        }
        "truncated-sum" => 3,
        name if name.starts_with("max-chain") => base.num_objects() - 1,
        _ => return None,
    };
    let mut parents: Vec<Option<usize>> = Vec::with_capacity(total);
    let mut depth: Vec<usize> = Vec::with_capacity(total);
    for v in 0..total {
        let candidates: Vec<usize> = (0..v).filter(|&u| depth[u] < max_depth).collect();
        let parent = if candidates.is_empty() || rng.gen_bool(0.3) {
            None
        } else {
            Some(candidates[rng.gen_range(0..candidates.len())])
        };
        depth.push(parent.map_or(0, |p| depth[p] + 1));
        parents.push(parent);
    }
    Some(if m.name() == "truncated-sum" {
        monoid_presheaf(base, &parents)
    } else {
        chain_presheaf(base, &parents)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_bases_are_valid() {
        for m in StrictMonoidalCat::shipped() {
            assert_eq!(validate_strict_monoidal(&m), vec![], "{}", m.name());
        }
    }

    #[test]
    fn wrong_unit_is_reported() {
        let base = Arc::new(FinCat::chain(3));
        let m = StrictMonoidalCat::thin("bad", base, |a, b| (a + b).min(2), 1).unwrap();
        let report = validate_strict_monoidal(&m);
        assert!(report.iter().any(|v| v.law == "tensor unit on objects"));
    }

    #[test]
    fn forest_counts() {
        // unrestricted forests on n nodes are rooted trees on n+1 nodes
        let counts: Vec<usize> = (0..7).map(|n| forests(n, n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48]);
        // depth 0: a single forest of isolated roots
        assert!((0..5).all(|n| forests(n, 0).len() == 1));
    }

    #[test]
    fn catalogue_presheaves_are_valid_and_distinct() {
        for m in StrictMonoidalCat::shipped() {
            for total in 0..5 {
                let cat = catalogue(&m, total).unwrap();
                for (i, x) in cat.iter().enumerate() {
                    assert!(x.validate().is_empty());
                    assert_eq!(x.total_sections(), total);
                    for y in &cat[..i] {
                        assert!(presheaf_iso(x, y).unwrap().is_none(), "{}", m.name());
                    }
                }
            }
        }
    }

    #[test]
    fn yoneda_examples() {
        let chain = StrictMonoidalCat::max_chain(2);
        assert_eq!(yoneda(Obj(0), &chain).unwrap().section_counts(), vec![1, 0]);
        assert_eq!(yoneda(Obj(1), &chain).unwrap().section_counts(), vec![1, 1]);
        let mono = StrictMonoidalCat::truncated_sum();
        assert_eq!(yoneda(Obj(0), &mono).unwrap().section_counts(), vec![4]);
    }

    #[test]
    fn cyclic_convolution_relabels() {
        let m = StrictMonoidalCat::cyclic2();
        let x = catalogue(&m, 2).unwrap()[1].clone();
        let y = catalogue(&m, 1).unwrap()[1].clone();
        assert_eq!(y.section_counts(), vec![1, 0]);
        let xy = convolve_coend(&x, &y, &m).unwrap();
        assert!(presheaf_iso(&xy, &x).unwrap().is_some());
        assert!(presheaf_iso(&convolve_factor(&x, &y, &m).unwrap(), &x)
            .unwrap()
            .is_some());
    }

    #[test]
    fn representable_on_max_chain() {
        let m = StrictMonoidalCat::max_chain(2);
        let y1 = yoneda(Obj(1), &m).unwrap();
        assert!(presheaf_iso(&convolve_coend(&y1, &y1, &m).unwrap(), &y1)
            .unwrap()
            .is_some());
        assert!(presheaf_iso(&convolve_factor(&y1, &y1, &m).unwrap(), &y1)
            .unwrap()
            .is_some());
    }

    #[test]
    fn empty_factor_gives_empty() {
        let m = StrictMonoidalCat::max_chain(3);
        let x = yoneda(Obj(2), &m).unwrap();
        let e = Presheaf::empty(m.base().clone());
        assert_eq!(convolve_coend(&x, &e, &m).unwrap().total_sections(), 0);
        assert_eq!(convolve_factor(&e, &x, &m).unwrap().total_sections(), 0);
    }

    #[test]
    fn terminal_on_one_object_base() {
        let m = StrictMonoidalCat::truncated_sum();
        let t = Presheaf::terminal(m.base().clone());
        assert!(presheaf_iso(&convolve_factor(&t, &t, &m).unwrap(), &t)
            .unwrap()
            .is_some());
    }

    #[test]
    fn laws_on_small_samples() {
        let m = StrictMonoidalCat::max_chain(2);
        let tests = vec![
            yoneda(Obj(0), &m).unwrap(),
            catalogue(&m, 2).unwrap()[0].clone(),
        ];
        assert_eq!(monoidal_laws_check(&m, &tests).unwrap(), vec![]);
    }
}
