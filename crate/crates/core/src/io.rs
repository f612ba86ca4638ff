//! JSON interchange documents and Graphviz output.
//!
//! Loaders check structure and then run the matching `validate`, so a
//! document that loads is a lawful entity.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::clock::Side;
use crate::day::{validate_strict_monoidal, StrictMonoidalCat};
use crate::error::{ensure_valid, Error, Result};
use crate::fincat::{FinCat, FinFunctor, Mor, Obj, Presheaf};
use crate::games::{validate_game, validate_strategy, ArrowPlay, Game, Play, Strategy};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// Composites with an identity may be left out of `compose`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    pub identities: BTreeMap<String, String>,
    /// Triples `[g, f, g∘f]`.
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorDoc {
    pub domain: CategoryDoc,
    pub codomain: CategoryDoc,
    pub on_objects: BTreeMap<String, String>,
    pub on_morphisms: BTreeMap<String, String>,
}

/// `action[α][x] = y` means `X(α)(x) = y` for `x` over the target of `α`.
/// Identity actions may be left out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafDoc {
    pub base: CategoryDoc,
    pub sections: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub action: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorDoc {
    /// Triples `[a, b, a⊗b]`, one per pair of objects.
    pub objects: Vec<[String; 3]>,
    /// Triples `[f, g, f⊗g]`, one per pair of morphisms.
    pub morphisms: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidalDoc {
    #[serde(default)]
    pub name: Option<String>,
    pub base: CategoryDoc,
    pub tensor: TensorDoc,
    pub unit: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveTree(pub BTreeMap<String, MoveTree>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameDoc {
    pub moves: MoveTree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveDoc {
    pub side: Side,
    #[serde(rename = "move")]
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyDoc {
    pub source: GameDoc,
    pub target: GameDoc,
    pub plays: Vec<Vec<MoveDoc>>,
}

pub fn category_to_doc(c: &FinCat) -> CategoryDoc {
    CategoryDoc {
        objects: c.objects().map(|o| c.object_name(o).to_string()).collect(),
        morphisms: c
            .morphisms()
            .map(|m| MorphismDoc {
                id: c.morphism_name(m).to_string(),
                src: c.object_name(c.src(m)).to_string(),
                tgt: c.object_name(c.tgt(m)).to_string(),
            })
            .collect(),
        identities: c
            .objects()
            .map(|o| {
                (
                    c.object_name(o).to_string(),
                    c.morphism_name(c.identity(o)).to_string(),
                )
            })
            .collect(),
        compose: c
            .composition_table()
            .into_iter()
            .filter(|&(g, f, _)| !c.is_identity(g) && !c.is_identity(f))
            .map(|(g, f, gf)| [g, f, gf].map(|m| c.morphism_name(m).to_string()))
            .collect(),
    }
}

pub fn category_from_doc(doc: &CategoryDoc) -> Result<FinCat> {
    let ids: HashSet<&str> = doc.identities.values().map(String::as_str).collect();
    let given: HashSet<(&str, &str)> = doc
        .compose
        .iter()
        .map(|[g, f, _]| (g.as_str(), f.as_str()))
        .collect();
    let mut compose: Vec<(String, String, String)> = doc
        .compose
        .iter()
        .map(|[g, f, gf]| (g.clone(), f.clone(), gf.clone()))
        .collect();
    for m in &doc.morphisms {
        let (Some(src_id), Some(tgt_id)) = (doc.identities.get(&m.src), doc.identities.get(&m.tgt))
        else {
            continue;
        };
        if !given.contains(&(m.id.as_str(), src_id.as_str())) {
            compose.push((m.id.clone(), src_id.clone(), m.id.clone()));
        }
        if !ids.contains(m.id.as_str()) && !given.contains(&(tgt_id.as_str(), m.id.as_str())) {
            compose.push((tgt_id.clone(), m.id.clone(), m.id.clone()));
        }
    }
    let c = FinCat::from_tables(
        doc.objects.clone(),
        doc.morphisms
            .iter()
            .map(|m| (m.id.clone(), m.src.clone(), m.tgt.clone()))
            .collect(),
        doc.identities
            .iter()
            .map(|(o, m)| (o.clone(), m.clone()))
            .collect(),
        compose,
    )?;
    ensure_valid(c.validate())?;
    Ok(c)
}

pub fn functor_to_doc(f: &FinFunctor) -> FunctorDoc {
    let (d, c) = (f.domain(), f.codomain());
    FunctorDoc {
        domain: category_to_doc(d),
        codomain: category_to_doc(c),
        on_objects: d
            .objects()
            .map(|o| {
                (
                    d.object_name(o).to_string(),
                    c.object_name(f.object(o)).to_string(),
                )
            })
            .collect(),
        on_morphisms: d
            .morphisms()
            .map(|m| {
                (
                    d.morphism_name(m).to_string(),
                    c.morphism_name(f.morphism(m)).to_string(),
                )
            })
            .collect(),
    }
}

fn lookup<'a>(map: &'a BTreeMap<String, String>, key: &str, what: &str) -> Result<&'a str> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Malformed(format!("{what} has no image for `{key}`")))
}

pub fn functor_from_doc(doc: &FunctorDoc) -> Result<FinFunctor> {
    let d = Arc::new(category_from_doc(&doc.domain)?);
    let c = Arc::new(category_from_doc(&doc.codomain)?);
    let on_objects = d
        .objects()
        .map(|o| c.object(lookup(&doc.on_objects, d.object_name(o), "on_objects")?))
        .collect::<Result<_>>()?;
    let on_morphisms = d
        .morphisms()
        .map(|m| {
            c.morphism(lookup(
                &doc.on_morphisms,
                d.morphism_name(m),
                "on_morphisms",
            )?)
        })
        .collect::<Result<_>>()?;
    let f = FinFunctor::new(d, c, on_objects, on_morphisms)?;
    ensure_valid(f.validate())?;
    Ok(f)
}

pub fn presheaf_to_doc(x: &Presheaf) -> PresheafDoc {
    let base = x.base();
    let name = |o: Obj, i: usize| x.sections(o)[i].clone();
    PresheafDoc {
        base: category_to_doc(base),
        sections: base
            .objects()
            .map(|o| (base.object_name(o).to_string(), x.sections(o).to_vec()))
            .collect(),
        action: base
            .morphisms()
            .filter(|&m| !base.is_identity(m))
            .map(|m| {
                let (src, tgt) = (base.src(m), base.tgt(m));
                let table = (0..x.section_count(tgt))
                    .map(|i| (name(tgt, i), name(src, x.act(m, i))))
                    .collect();
                (base.morphism_name(m).to_string(), table)
            })
            .collect(),
    }
}

pub fn presheaf_from_doc(doc: &PresheafDoc) -> Result<Presheaf> {
    let base = Arc::new(category_from_doc(&doc.base)?);
    let sections: Vec<Vec<String>> = base
        .objects()
        .map(|o| {
            doc.sections
                .get(base.object_name(o))
                .cloned()
                .unwrap_or_default()
        })
        .collect();
    for key in doc.sections.keys() {
        base.object(key)?;
    }
    let index = |o: Obj, name: &str| {
        sections[o.0].iter().position(|s| s == name).ok_or_else(|| {
            Error::Malformed(format!(
                "`{name}` is not a section over `{}`",
                base.object_name(o)
            ))
        })
    };
    let mut action = Vec::with_capacity(base.num_morphisms());
    for m in base.morphisms() {
        let (src, tgt) = (base.src(m), base.tgt(m));
        let table = doc.action.get(base.morphism_name(m));
        if table.is_none() && base.is_identity(m) {
            action.push((0..sections[tgt.0].len()).collect());
            continue;
        }
        let table = table.ok_or_else(|| {
            Error::Malformed(format!("no action for `{}`", base.morphism_name(m)))
        })?;
        action.push(
            sections[tgt.0]
                .iter()
                .map(|x| index(src, lookup(table, x, base.morphism_name(m))?))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let x = Presheaf::new(base, sections, action)?;
    ensure_valid(x.validate())?;
    Ok(x)
}

pub fn monoidal_to_doc(m: &StrictMonoidalCat) -> MonoidalDoc {
    let b = m.base();
    MonoidalDoc {
        name: Some(m.name().to_string()),
        base: category_to_doc(b),
        tensor: TensorDoc {
            objects: b
                .objects()
                .flat_map(|x| b.objects().map(move |y| (x, y)))
                .map(|(x, y)| [x, y, m.tensor_objects(x, y)].map(|o| b.object_name(o).to_string()))
                .collect(),
            morphisms: b
                .morphisms()
                .flat_map(|f| b.morphisms().map(move |g| (f, g)))
                .map(|(f, g)| {
                    [f, g, m.tensor_morphisms(f, g)].map(|h| b.morphism_name(h).to_string())
                })
                .collect(),
        },
        unit: b.object_name(m.unit()).to_string(),
    }
}

pub fn monoidal_from_doc(doc: &MonoidalDoc) -> Result<StrictMonoidalCat> {
    let base = Arc::new(category_from_doc(&doc.base)?);
    let (n, k) = (base.num_objects(), base.num_morphisms());
    let mut on_objects = vec![None; n * n];
    for [x, y, z] in &doc.tensor.objects {
        on_objects[base.object(x)?.0 * n + base.object(y)?.0] = Some(base.object(z)?);
    }
    let mut on_morphisms = vec![None; k * k];
    for [f, g, h] in &doc.tensor.morphisms {
        on_morphisms[base.morphism(f)?.0 * k + base.morphism(g)?.0] = Some(base.morphism(h)?);
    }
    let on_objects: Vec<Obj> = on_objects
        .into_iter()
        .enumerate()
        .map(|(i, o)| {
            o.ok_or_else(|| {
                let (x, y) = (Obj(i / n), Obj(i % n));
                Error::Malformed(format!(
                    "no tensor for ({}, {})",
                    base.object_name(x),
                    base.object_name(y)
                ))
            })
        })
        .collect::<Result<_>>()?;
    let on_morphisms: Vec<Mor> = on_morphisms
        .into_iter()
        .enumerate()
        .map(|(i, h)| {
            h.ok_or_else(|| {
                let (f, g) = (Mor(i / k), Mor(i % k));
                Error::Malformed(format!(
                    "no tensor for ({}, {})",
                    base.morphism_name(f),
                    base.morphism_name(g)
                ))
            })
        })
        .collect::<Result<_>>()?;
    let unit = base.object(&doc.unit)?;
    let m = StrictMonoidalCat::from_fn(
        doc.name.clone().unwrap_or_else(|| "custom".to_string()),
        base,
        |x, y| on_objects[x.0 * n + y.0],
        |f, g| on_morphisms[f.0 * k + g.0],
        unit,
    )?;
    ensure_valid(validate_strict_monoidal(&m))?;
    Ok(m)
}

pub fn game_to_doc(g: &Game) -> GameDoc {
    let mut root = MoveTree::default();
    for play in g.plays() {
        let mut node = &mut root;
        for m in play {
            node = node.0.entry(m.clone()).or_default();
        }
    }
    GameDoc { moves: root }
}

pub fn game_from_doc(doc: &GameDoc) -> Result<Game> {
    fn walk(tree: &MoveTree, prefix: &mut Play, out: &mut Vec<Play>) {
        out.push(prefix.clone());
        for (m, sub) in &tree.0 {
            prefix.push(m.clone());
            walk(sub, prefix, out);
            prefix.pop();
        }
    }
    let mut plays = Vec::new();
    walk(&doc.moves, &mut Vec::new(), &mut plays);
    let g = Game::from_plays(plays);
    ensure_valid(validate_game(&g))?;
    Ok(g)
}

pub fn strategy_to_doc(s: &Strategy) -> StrategyDoc {
    StrategyDoc {
        source: game_to_doc(&s.source),
        target: game_to_doc(&s.target),
        plays: s
            .plays
            .iter()
            .map(|p| {
                p.0.iter()
                    .map(|(side, m)| MoveDoc {
                        side: *side,
                        label: m.clone(),
                    })
                    .collect()
            })
            .collect(),
    }
}

pub fn strategy_from_doc(doc: &StrategyDoc) -> Result<Strategy> {
    let s = Strategy::new(
        game_from_doc(&doc.source)?,
        game_from_doc(&doc.target)?,
        doc.plays
            .iter()
            .map(|p| ArrowPlay(p.iter().map(|m| (m.side, m.label.clone())).collect())),
    );
    ensure_valid(validate_strategy(&s))?;
    Ok(s)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The category drawn by its irreducible morphisms (those that are not a
/// composite of two non-identities).
pub fn category_dot(c: &FinCat, name: &str) -> String {
    let composites: HashSet<Mor> = c
        .composition_table()
        .into_iter()
        .filter(|&(g, f, _)| !c.is_identity(g) && !c.is_identity(f))
        .map(|(_, _, gf)| gf)
        .collect();
    let mut out = format!("digraph {} {{\n", quote(name));
    for o in c.objects() {
        let _ = writeln!(out, "  {};", quote(c.object_name(o)));
    }
    for m in c
        .morphisms()
        .filter(|m| !c.is_identity(*m) && !composites.contains(m))
    {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(c.object_name(c.src(m))),
            quote(c.object_name(c.tgt(m))),
            quote(c.morphism_name(m))
        );
    }
    out.push_str("}\n");
    out
}

fn play_id(p: &[String]) -> String {
    if p.is_empty() {
        "ε".to_string()
    } else {
        p.join("·")
    }
}

pub fn game_dot(g: &Game, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    for p in g.plays() {
        let _ = writeln!(
            out,
            "  {} [label={}];",
            quote(&play_id(p)),
            quote(p.last().map_or("ε", String::as_str))
        );
        if let Some((_, init)) = p.split_last() {
            let _ = writeln!(
                out,
                "  {} -> {};",
                quote(&play_id(init)),
                quote(&play_id(p))
            );
        }
    }
    out.push_str("}\n");
    out
}

/// The strategy as a tree of plays, with left moves dashed.
pub fn strategy_dot(s: &Strategy, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    for p in &s.plays {
        let id = p.to_string();
        let label = p.0.last().map_or("ε".to_string(), |(_, m)| m.clone());
        let _ = writeln!(out, "  {} [label={}];", quote(&id), quote(&label));
        if let Some(((side, _), _)) = p.0.split_last() {
            let style = if *side == Side::Left {
                " [style=dashed]"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "  {} -> {}{};",
                quote(&p.prefix(p.len() - 1).to_string()),
                quote(&id),
                style
            );
        }
    }
    out.push_str("}\n");
    out
}
