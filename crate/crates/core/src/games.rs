//! Finite simple games and strategies, with composition computed directly by
//! interaction and hiding, and categorically by pasting strategy cells over
//! the clock and keeping the discrete-fibration part.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clock::{
    copycat, hcompose, HState, Polarity, Scheduling, Side, Triangle, VerticalString,
};
use crate::error::{Error, Result, Violation};
use crate::fincat::{FinCat, FinFunctor, Obj, Presheaf, Span};
use crate::slice::{
    restricted_compose_full, ClockMonad, MonadPresentation, SliceCell, SliceObject,
};

/// Default bound on arrow-play length.
pub const PLAY_BOUND: usize = 12;

pub type Play = Vec<String>;

/// A finite prefix-closed set of plays. Positions alternate polarity,
/// Opponent first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Game {
    plays: BTreeSet<Play>,
}

fn play_name(play: &[String]) -> String {
    if play.is_empty() {
        "ε".to_string()
    } else {
        play.join("·")
    }
}

impl Game {
    /// No checks; see [`validate_game`].
    pub fn from_plays(plays: impl IntoIterator<Item = Play>) -> Self {
        Self {
            plays: plays.into_iter().collect(),
        }
    }

    /// The prefix closure of the given plays.
    pub fn generated_by<I, P, S>(plays: I) -> Self
    where
        I: IntoIterator<Item = P>,
        P: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = BTreeSet::new();
        out.insert(Vec::new());
        for p in plays {
            let p: Play = p.into_iter().map(Into::into).collect();
            for k in 1..=p.len() {
                out.insert(p[..k].to_vec());
            }
        }
        Self { plays: out }
    }

    /// The game with only the empty play.
    pub fn empty() -> Self {
        Self::generated_by(Vec::<Vec<String>>::new())
    }

    pub fn plays(&self) -> &BTreeSet<Play> {
        &self.plays
    }

    pub fn contains(&self, play: &[String]) -> bool {
        self.plays.contains(play)
    }

    pub fn depth(&self) -> usize {
        self.plays.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Moves extending `play`, in order.
    pub fn next_moves(&self, play: &[String]) -> Vec<String> {
        let mut out: Vec<String> = self
            .plays
            .iter()
            .filter(|p| p.len() == play.len() + 1 && p.starts_with(play))
            .map(|p| p[play.len()].clone())
            .collect();
        out.dedup();
        out
    }
}

/// Prefix closure, presence of the empty play, and usable move labels.
pub fn validate_game(g: &Game) -> Vec<Violation> {
    let mut report = Vec::new();
    if !g.plays.contains(&Vec::new()) {
        report.push(Violation::new(
            "game contains the empty play",
            "ε is missing",
        ));
    }
    for p in &g.plays {
        if let Some(bad) = p
            .iter()
            .find(|m| m.is_empty() || m.contains('·') || m.chars().any(char::is_whitespace))
        {
            report.push(Violation::new(
                "move labels are nonempty words without `·`",
                format!("`{bad}` in {}", play_name(p)),
            ));
        }
        if !p.is_empty() && !g.plays.contains(&p[..p.len() - 1]) {
            report.push(Violation::new(
                "game is prefix-closed",
                format!("missing {}", play_name(&p[..p.len() - 1])),
            ));
        }
    }
    report
}

/// A play on the arrow game `A → B`: moves tagged with the side they are on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArrowPlay(pub Vec<(Side, String)>);

impl ArrowPlay {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn project(&self, side: Side) -> Play {
        self.0
            .iter()
            .filter(|(s, _)| *s == side)
            .map(|(_, m)| m.clone())
            .collect()
    }

    pub fn left(&self) -> Play {
        self.project(Side::Left)
    }

    pub fn right(&self) -> Play {
        self.project(Side::Right)
    }

    pub fn scheduling(&self) -> Result<Scheduling> {
        Scheduling::from_sides(self.0.iter().map(|(s, _)| *s))
    }

    pub fn prefix(&self, k: usize) -> ArrowPlay {
        ArrowPlay(self.0[..k].to_vec())
    }

    pub fn extended(&self, side: Side, m: &str) -> ArrowPlay {
        let mut v = self.0.clone();
        v.push((side, m.to_string()));
        ArrowPlay(v)
    }

    /// Interleaves two plays along the sides of a scheduling.
    pub fn interleave(
        schedule: &Scheduling,
        left: &[String],
        right: &[String],
    ) -> Result<ArrowPlay> {
        let (mut l, mut r) = (left.iter(), right.iter());
        let moves = schedule
            .sides()
            .into_iter()
            .map(|side| {
                let m = match side {
                    Side::Left => l.next(),
                    Side::Right => r.next(),
                };
                m.map(|m| (side, m.clone())).ok_or_else(|| {
                    Error::Mismatch("scheduling has more moves than the plays".into())
                })
            })
            .collect::<Result<_>>()?;
        if l.next().is_some() || r.next().is_some() {
            return Err(Error::Mismatch(
                "plays have more moves than the scheduling".into(),
            ));
        }
        Ok(ArrowPlay(moves))
    }
}

impl fmt::Display for ArrowPlay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, m)| match s {
                Side::Left => format!("L:{m}"),
                Side::Right => format!("R:{m}"),
            })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

/// A prefix-closed set of arrow plays containing the empty play.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strategy {
    pub source: Game,
    pub target: Game,
    pub plays: BTreeSet<ArrowPlay>,
}

impl Strategy {
    pub fn new(source: Game, target: Game, plays: impl IntoIterator<Item = ArrowPlay>) -> Self {
        Self {
            source,
            target,
            plays: plays.into_iter().collect(),
        }
    }

    /// The strategy with only the empty play.
    pub fn empty(source: Game, target: Game) -> Self {
        Self::new(source, target, [ArrowPlay::empty()])
    }

    /// Extensions of each play by one move.
    fn children(&self) -> HashMap<&[(Side, String)], Vec<&(Side, String)>> {
        let mut out: HashMap<&[(Side, String)], Vec<&(Side, String)>> = HashMap::new();
        for p in &self.plays {
            if let Some((last, init)) = p.0.split_last() {
                out.entry(init).or_default().push(last);
            }
        }
        out
    }

    /// At most one Player response after every play ending in an Opponent
    /// move (Player moves leave state `OP`).
    pub fn is_deterministic(&self) -> bool {
        self.children().iter().all(|(play, next)| {
            let state = Scheduling::from_sides(play.iter().map(|(s, _)| *s))
                .map(|s| s.end())
                .ok();
            state != Some(HState::OP) || next.len() <= 1
        })
    }
}

/// Opponent moves are those leaving `OO` (on the right) and `PP` (on the
/// left).
fn opponent_side(state: HState) -> Option<Side> {
    match state {
        HState::OO => Some(Side::Right),
        HState::PP => Some(Side::Left),
        HState::OP => None,
    }
}

/// The legal Opponent extensions of a play of `a → b`.
fn opponent_extensions(a: &Game, b: &Game, p: &ArrowPlay) -> Vec<ArrowPlay> {
    let Some(side) = p.scheduling().ok().and_then(|s| opponent_side(s.end())) else {
        return Vec::new();
    };
    let own = p.project(side);
    let game = if side == Side::Left { a } else { b };
    game.next_moves(&own)
        .iter()
        .map(|m| p.extended(side, m))
        .collect()
}

impl Strategy {
    /// Every legal Opponent move is accepted after every play.
    pub fn is_receptive(&self) -> bool {
        self.plays.iter().all(|p| {
            opponent_extensions(&self.source, &self.target, p)
                .iter()
                .all(|q| self.plays.contains(q))
        })
    }

    /// The least receptive strategy containing this one. An Opponent move
    /// hands the turn to Player, so one round of extensions suffices.
    pub fn receptive_closure(&self) -> Strategy {
        let mut plays = self.plays.clone();
        for p in &self.plays {
            plays.extend(opponent_extensions(&self.source, &self.target, p));
        }
        Strategy {
            plays,
            ..self.clone()
        }
    }
}

pub fn validate_strategy(s: &Strategy) -> Vec<Violation> {
    let mut report: Vec<Violation> = validate_game(&s.source)
        .into_iter()
        .chain(validate_game(&s.target))
        .collect();
    if !s.plays.contains(&ArrowPlay::empty()) {
        report.push(Violation::new(
            "strategy contains the empty play",
            "ε is missing",
        ));
    }
    for p in &s.plays {
        if !p.is_empty() && !s.plays.contains(&p.prefix(p.len() - 1)) {
            report.push(Violation::new(
                "strategy is prefix-closed",
                format!("missing {}", p.prefix(p.len() - 1)),
            ));
        }
        if !s.source.contains(&p.left()) {
            report.push(Violation::new("left projection is a play", p.to_string()));
        }
        if !s.target.contains(&p.right()) {
            report.push(Violation::new("right projection is a play", p.to_string()));
        }
        if let Err(e) = p.scheduling() {
            report.push(Violation::new(
                "tags form a scheduling from OO",
                format!("{p}: {e}"),
            ));
        }
    }
    report
}

/// All arrow plays of `a → b` with at most `max_len` moves, sorted.
pub fn arrow_plays(a: &Game, b: &Game, max_len: usize) -> Result<Vec<ArrowPlay>> {
    arrow_plays_bounded(a, b, max_len, PLAY_BOUND)
}

pub fn arrow_plays_bounded(
    a: &Game,
    b: &Game,
    max_len: usize,
    limit: usize,
) -> Result<Vec<ArrowPlay>> {
    if max_len > limit {
        return Err(Error::BoundExceeded {
            what: "arrow play length",
            actual: max_len,
            limit,
        });
    }
    let mut out = Vec::new();
    let mut stack = vec![(ArrowPlay::empty(), Vec::new(), Vec::new(), HState::OO)];
    while let Some((p, l, r, state)) = stack.pop() {
        if p.len() < max_len {
            for side in [Side::Left, Side::Right] {
                let Some(t) = Triangle::for_move(state, side) else {
                    continue;
                };
                let (game, own) = match side {
                    Side::Left => (a, &l),
                    Side::Right => (b, &r),
                };
                for m in game.next_moves(own) {
                    let (mut l2, mut r2) = (l.clone(), r.clone());
                    match side {
                        Side::Left => l2.push(m.clone()),
                        Side::Right => r2.push(m.clone()),
                    }
                    stack.push((p.extended(side, &m), l2, r2, t.target()));
                }
            }
        }
        out.push(p);
    }
    out.sort();
    Ok(out)
}

/// The identity strategy: every prefix of the copycat interleaving of every
/// play of `a`.
pub fn copycat_strategy(a: &Game) -> Strategy {
    let mut plays = BTreeSet::new();
    for u in a.plays() {
        let schedule = copycat(VerticalString::new(Polarity::O, u.len()));
        let word =
            ArrowPlay::interleave(&schedule, u, u).expect("copycat has both borders of length |u|");
        for k in 0..=word.len() {
            plays.insert(word.prefix(k));
        }
    }
    Strategy {
        source: a.clone(),
        target: a.clone(),
        plays,
    }
}

/// Which component of an interaction a move belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    A,
    B,
    C,
}

pub type InteractionSeq = Vec<(Component, String)>;

/// Restriction of an interaction to two of its components, the first
/// becoming the left side.
pub fn restrict(u: &InteractionSeq, left: Component, right: Component) -> ArrowPlay {
    ArrowPlay(
        u.iter()
            .filter_map(|(c, m)| {
                if *c == left {
                    Some((Side::Left, m.clone()))
                } else if *c == right {
                    Some((Side::Right, m.clone()))
                } else {
                    None
                }
            })
            .collect(),
    )
}

fn check_middle(sigma: &Strategy, tau: &Strategy) -> Result<()> {
    if sigma.target != tau.source {
        return Err(Error::Mismatch(
            "strategies do not share their middle game".into(),
        ));
    }
    Ok(())
}

/// Every interaction sequence of `σ` and `τ`, depth first.
pub fn interactions(
    sigma: &Strategy,
    tau: &Strategy,
) -> Result<Vec<(InteractionSeq, ArrowPlay, ArrowPlay)>> {
    check_middle(sigma, tau)?;
    let (cs, ct) = (sigma.children(), tau.children());
    let none = Vec::new();
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), ArrowPlay::empty(), ArrowPlay::empty())];
    while let Some((u, s, t)) = stack.pop() {
        let next_s = cs.get(s.0.as_slice()).unwrap_or(&none);
        let next_t = ct.get(t.0.as_slice()).unwrap_or(&none);
        for &(side, m) in next_s {
            let mut u2: InteractionSeq = u.clone();
            match side {
                Side::Left => {
                    u2.push((Component::A, m.clone()));
                    stack.push((u2, s.extended(Side::Left, m), t.clone()));
                }
                Side::Right => {
                    if next_t.iter().any(|&(ts, tm)| *ts == Side::Left && tm == m) {
                        u2.push((Component::B, m.clone()));
                        stack.push((u2, s.extended(Side::Right, m), t.extended(Side::Left, m)));
                    }
                }
            }
        }
        for &(side, m) in next_t {
            if *side == Side::Right {
                let mut u2 = u.clone();
                u2.push((Component::C, m.clone()));
                stack.push((u2, s.clone(), t.extended(Side::Right, m)));
            }
        }
        out.push((u, s, t));
    }
    Ok(out)
}

/// Interaction followed by hiding of the middle game.
pub fn compose_direct(sigma: &Strategy, tau: &Strategy) -> Result<Strategy> {
    let mut plays = BTreeSet::new();
    for (u, s, t) in interactions(sigma, tau)? {
        let hidden = restrict(&u, Component::A, Component::C);
        let schedule = hidden
            .scheduling()
            .map_err(|e| Error::Internal(format!("hidden play {hidden}: {e}")))?;
        if schedule != hcompose(&s.scheduling()?, &t.scheduling()?)? {
            return Err(Error::Internal(format!(
                "hidden play {hidden} disagrees with the clock"
            )));
        }
        plays.insert(hidden);
    }
    let out = Strategy {
        source: sigma.source.clone(),
        target: tau.target.clone(),
        plays,
    };
    let report = validate_strategy(&out);
    if !report.is_empty() {
        return Err(Error::Internal(format!(
            "composite is not a strategy: {}",
            report[0]
        )));
    }
    Ok(out)
}

/// Games and strategies as objects and cells of the restricted slice over a
/// clock truncation.
#[derive(Clone, Debug)]
pub struct GameContext {
    pub monad: ClockMonad,
}

impl GameContext {
    pub fn new(bound: usize) -> Self {
        Self {
            monad: ClockMonad::new(bound),
        }
    }

    /// Large enough for composites of strategies between these games.
    pub fn for_games<'a>(games: impl IntoIterator<Item = &'a Game>) -> Self {
        Self::new(games.into_iter().map(Game::depth).max().unwrap_or(0))
    }

    /// The prefix order on plays, over the chain of lengths.
    pub fn game_object(&self, g: &Game) -> Result<SliceObject> {
        if g.depth() > self.monad.bound() {
            return Err(Error::BoundExceeded {
                what: "game depth",
                actual: g.depth(),
                limit: self.monad.bound(),
            });
        }
        let plays: Vec<&Play> = g.plays().iter().collect();
        let cat = Arc::new(FinCat::poset(
            plays.iter().map(|p| play_name(p)).collect(),
            |i, j| plays[j].starts_with(plays[i]),
            |a, b| format!("{a}<={b}"),
        ));
        let length = FinFunctor::from_object_map(
            cat,
            self.monad.base().clone(),
            plays.iter().map(|p| Obj(p.len())).collect(),
        )?;
        Ok(SliceObject::new(length))
    }

    /// The cell `A ← S → B` over the clock, with `S` the prefix order on the
    /// plays of `σ`.
    pub fn strategy_cell(&self, s: &Strategy) -> Result<SliceCell> {
        crate::error::ensure_valid(validate_strategy(s))?;
        let (a, b) = (self.game_object(&s.source)?, self.game_object(&s.target)?);
        let plays: Vec<&ArrowPlay> = s.plays.iter().collect();
        let apex = Arc::new(FinCat::poset(
            plays.iter().map(|p| p.to_string()).collect(),
            |i, j| plays[j].0.starts_with(&plays[i].0),
            |x, y| format!("{x}<={y}"),
        ));
        let index_in = |g: &Game, p: Play| {
            Obj(g
                .plays()
                .iter()
                .position(|q| *q == p)
                .expect("projection is a play"))
        };
        let left = FinFunctor::from_object_map(
            apex.clone(),
            a.category().clone(),
            plays
                .iter()
                .map(|p| index_in(&s.source, p.left()))
                .collect(),
        )?;
        let right = FinFunctor::from_object_map(
            apex.clone(),
            b.category().clone(),
            plays
                .iter()
                .map(|p| index_in(&s.target, p.right()))
                .collect(),
        )?;
        let middle = FinFunctor::from_object_map(
            apex,
            self.monad.carrier().clone(),
            plays
                .iter()
                .map(|p| self.monad.object_of(&p.scheduling()?))
                .collect::<Result<_>>()?,
        )?;
        SliceCell::new(
            &self.monad,
            a.functor,
            b.functor,
            Span::new(left, right)?,
            middle,
        )
    }

    /// Reads a strategy back from a cell: the image of its apex in the plays
    /// of the arrow game.
    pub fn strategy_of_cell(
        &self,
        cell: &SliceCell,
        source: &Game,
        target: &Game,
    ) -> Result<Strategy> {
        let a: Vec<&Play> = source.plays().iter().collect();
        let b: Vec<&Play> = target.plays().iter().collect();
        let mut plays = BTreeSet::new();
        for e in cell.apex().objects() {
            let schedule = self.monad.scheduling(cell.middle().object(e));
            let l = a[cell.left_leg().object(e).0];
            let r = b[cell.right_leg().object(e).0];
            plays.insert(ArrowPlay::interleave(schedule, l, r)?);
        }
        Ok(Strategy {
            source: source.clone(),
            target: target.clone(),
            plays,
        })
    }
}

/// Composition by pasting strategy cells over the clock, factoring the
/// result, and reading the discrete-fibration part back as a play set.
pub fn compose_categorical(sigma: &Strategy, tau: &Strategy) -> Result<Strategy> {
    check_middle(sigma, tau)?;
    let ctx = GameContext::for_games([&sigma.source, &sigma.target, &tau.target]);
    compose_in(&ctx, sigma, tau)
}

pub fn compose_in(ctx: &GameContext, sigma: &Strategy, tau: &Strategy) -> Result<Strategy> {
    check_middle(sigma, tau)?;
    let composite = restricted_compose_full(
        &ctx.strategy_cell(sigma)?,
        &ctx.strategy_cell(tau)?,
        &ctx.monad,
    )?;
    ctx.strategy_of_cell(&composite.cell, &sigma.source, &tau.target)
}

/// The presheaf of plays by length on the chain `0 ≤ … ≤ depth`.
pub fn game_as_presheaf(g: &Game) -> Presheaf {
    game_as_presheaf_over(g, &Arc::new(FinCat::chain(g.depth() + 1)))
}

/// As [`game_as_presheaf`] over a given chain, which must be long enough.
pub fn game_as_presheaf_over(g: &Game, chain: &Arc<FinCat>) -> Presheaf {
    let levels: Vec<Vec<&Play>> = chain
        .objects()
        .map(|c| g.plays().iter().filter(|p| p.len() == c.0).collect())
        .collect();
    let sections = levels
        .iter()
        .map(|l| l.iter().map(|p| play_name(p)).collect())
        .collect();
    Presheaf::from_fn(chain.clone(), sections, |alpha, x| {
        let (i, j) = (chain.src(alpha).0, chain.tgt(alpha).0);
        let prefix = &levels[j][x][..i];
        levels[i]
            .iter()
            .position(|p| p.as_slice() == prefix)
            .expect("games are prefix-closed")
    })
}

/// Games up to relabelling with at most `max_plays` plays (counting ε);
/// moves are labelled `{prefix}1`, `{prefix}2`, … by sibling order.
pub fn game_catalogue(max_plays: usize, prefix: &str) -> Vec<Game> {
    (0..max_plays)
        .flat_map(|n| crate::day::forests(n, n))
        .map(|parents| game_of_forest(&parents, prefix))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// The game whose nonempty plays are the root paths of a forest.
pub fn game_of_forest(parents: &[Option<usize>], prefix: &str) -> Game {
    let mut paths: Vec<Play> = Vec::with_capacity(parents.len());
    let mut sibling_count: HashMap<Option<usize>, usize> = HashMap::new();
    for &p in parents {
        let k = sibling_count.entry(p).or_insert(0);
        *k += 1;
        let mut path = p.map(|q| paths[q].clone()).unwrap_or_default();
        path.push(format!("{prefix}{k}"));
        paths.push(path);
    }
    Game::generated_by(paths)
}

/// A random tree of the given depth in which each position has between 0
/// and `branching` children.
pub fn random_game(rng: &mut impl Rng, depth: usize, branching: usize, prefix: &str) -> Game {
    fn grow(
        rng: &mut impl Rng,
        play: Play,
        depth: usize,
        branching: usize,
        prefix: &str,
        out: &mut Vec<Play>,
    ) {
        if play.len() == depth {
            return;
        }
        for k in 1..=rng.gen_range(0..=branching) {
            let mut next = play.clone();
            next.push(format!("{prefix}{k}"));
            out.push(next.clone());
            grow(rng, next, depth, branching, prefix, out);
        }
    }
    let mut plays = vec![Vec::new()];
    grow(rng, Vec::new(), depth, branching, prefix, &mut plays);
    Game::from_plays(plays)
}

/// A random strategy: starting from ε, each legal one-move extension is kept
/// with probability `keep`, until `max_plays` plays are chosen.
pub fn random_strategy(
    rng: &mut impl Rng,
    a: &Game,
    b: &Game,
    keep: f64,
    max_plays: usize,
) -> Strategy {
    let mut plays = BTreeSet::new();
    plays.insert(ArrowPlay::empty());
    let mut frontier = vec![(ArrowPlay::empty(), Vec::new(), Vec::new(), HState::OO)];
    while let Some((p, l, r, state)) = frontier.pop() {
        for side in [Side::Left, Side::Right] {
            let Some(t) = Triangle::for_move(state, side) else {
                continue;
            };
            let (game, own) = match side {
                Side::Left => (a, &l),
                Side::Right => (b, &r),
            };
            for m in game.next_moves(own) {
                if plays.len() >= max_plays || !rng.gen_bool(keep) {
                    continue;
                }
                let (mut l2, mut r2) = (l.clone(), r.clone());
                match side {
                    Side::Left => l2.push(m.clone()),
                    Side::Right => r2.push(m.clone()),
                }
                let next = p.extended(side, &m);
                plays.insert(next.clone());
                frontier.push((next, l2, r2, t.target()));
            }
        }
    }
    Strategy::new(a.clone(), b.clone(), plays)
}

/// Every strategy `a → b` whose plays have at most `max_len` moves.
pub fn all_strategies(a: &Game, b: &Game, max_len: usize) -> Result<Vec<Strategy>> {
    let plays = arrow_plays(a, b, max_len)?;
    let nonempty: Vec<&ArrowPlay> = plays.iter().filter(|p| !p.is_empty()).collect();
    // plays are sorted, so every prefix precedes its extensions
    let mut out = Vec::new();
    let mut chosen = BTreeSet::new();
    chosen.insert(ArrowPlay::empty());
    subsets(&nonempty, 0, &mut chosen, &mut |set| {
        out.push(Strategy::new(a.clone(), b.clone(), set.iter().cloned()))
    });
    Ok(out)
}

fn subsets(
    plays: &[&ArrowPlay],
    from: usize,
    chosen: &mut BTreeSet<ArrowPlay>,
    emit: &mut impl FnMut(&BTreeSet<ArrowPlay>),
) {
    let Some(i) =
        (from..plays.len()).find(|&i| chosen.contains(&plays[i].prefix(plays[i].len() - 1)))
    else {
        emit(chosen);
        return;
    };
    // either leave plays[i] (and so all its extensions) out, or put it in
    let skipped = plays[i].clone();
    let mut rest: Vec<&ArrowPlay> = plays[..].to_vec();
    rest.retain(|p| !p.0.starts_with(&skipped.0));
    subsets(&rest, i.min(rest.len()), chosen, emit);
    chosen.insert(skipped.clone());
    subsets(plays, i + 1, chosen, emit);
    chosen.remove(&skipped);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(plays: &[&[&str]]) -> Game {
        Game::generated_by(
            plays
                .iter()
                .map(|p| p.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
        )
    }

    fn ap(moves: &[(Side, &str)]) -> ArrowPlay {
        ArrowPlay(moves.iter().map(|(s, m)| (*s, m.to_string())).collect())
    }

    use Side::{Left as L, Right as R};

    #[test]
    fn game_validation() {
        assert!(validate_game(&Game::empty()).is_empty());
        let broken = Game::from_plays([vec![], vec!["a".into(), "b".into()]]);
        let report = validate_game(&broken);
        assert_eq!(report.len(), 1);
        assert!(report[0].detail.contains("missing a"));
    }

    #[test]
    fn strategy_validation() {
        let (a, b) = (g(&[&["a"]]), g(&[&["b"]]));
        let missing = Strategy::new(
            a.clone(),
            b.clone(),
            [ArrowPlay::empty(), ap(&[(R, "b"), (L, "a")])],
        );
        assert!(validate_strategy(&missing)
            .iter()
            .any(|v| v.law == "strategy is prefix-closed"));
        let left_first = Strategy::new(a, b, [ArrowPlay::empty(), ap(&[(L, "a")])]);
        assert!(validate_strategy(&left_first)
            .iter()
            .any(|v| v.law == "tags form a scheduling from OO"));
    }

    #[test]
    fn arrow_play_examples() {
        let e = Game::empty();
        assert_eq!(arrow_plays(&e, &e, 12).unwrap(), vec![ArrowPlay::empty()]);
        let b = g(&[&["b"]]);
        assert_eq!(
            arrow_plays(&e, &b, 12).unwrap(),
            vec![ArrowPlay::empty(), ap(&[(R, "b")])]
        );
        let a = g(&[&["a"]]);
        assert_eq!(
            arrow_plays(&a, &b, 12).unwrap(),
            vec![
                ArrowPlay::empty(),
                ap(&[(R, "b")]),
                ap(&[(R, "b"), (L, "a")])
            ]
        );
        assert!(arrow_plays(&a, &b, 13).is_err());
    }

    #[test]
    fn copycat_examples() {
        assert_eq!(copycat_strategy(&Game::empty()).plays.len(), 1);
        let a = g(&[&["a"]]);
        let cc = copycat_strategy(&a);
        assert_eq!(
            cc.plays.into_iter().collect::<Vec<_>>(),
            vec![
                ArrowPlay::empty(),
                ap(&[(R, "a")]),
                ap(&[(R, "a"), (L, "a")])
            ]
        );
        assert_eq!(copycat_strategy(&g(&[&["a1", "a2"]])).plays.len(), 5);
    }

    fn single_move_triple() -> (Strategy, Strategy) {
        let (a, b, c) = (g(&[&["a"]]), g(&[&["b"]]), g(&[&["c"]]));
        let sigma = Strategy::new(
            a,
            b.clone(),
            [
                ArrowPlay::empty(),
                ap(&[(R, "b")]),
                ap(&[(R, "b"), (L, "a")]),
            ],
        );
        let tau = Strategy::new(
            b,
            c,
            [
                ArrowPlay::empty(),
                ap(&[(R, "c")]),
                ap(&[(R, "c"), (L, "b")]),
            ],
        );
        (sigma, tau)
    }

    #[test]
    fn single_move_composition() {
        let (sigma, tau) = single_move_triple();
        let expected: BTreeSet<ArrowPlay> = [
            ArrowPlay::empty(),
            ap(&[(R, "c")]),
            ap(&[(R, "c"), (L, "a")]),
        ]
        .into_iter()
        .collect();
        assert_eq!(compose_direct(&sigma, &tau).unwrap().plays, expected);
        assert_eq!(compose_categorical(&sigma, &tau).unwrap().plays, expected);
    }

    #[test]
    fn empty_strategy_leaves_only_opening_moves() {
        let (sigma, tau) = single_move_triple();
        let nothing = Strategy::empty(sigma.source.clone(), sigma.target.clone());
        assert_eq!(compose_direct(&nothing, &tau).unwrap().plays.len(), 2);
        assert_eq!(compose_categorical(&nothing, &tau).unwrap().plays.len(), 2);
    }

    #[test]
    fn copycat_is_a_unit() {
        let (sigma, tau) = single_move_triple();
        let cc = copycat_strategy(&sigma.source);
        assert_eq!(compose_direct(&cc, &sigma).unwrap(), sigma);
        assert_eq!(compose_categorical(&cc, &sigma).unwrap(), sigma);
        let cc = copycat_strategy(&tau.target);
        assert_eq!(compose_direct(&tau, &cc).unwrap(), tau);
        assert_eq!(compose_categorical(&tau, &cc).unwrap(), tau);
    }

    #[test]
    fn presheaf_of_games() {
        assert_eq!(game_as_presheaf(&Game::empty()).section_counts(), vec![1]);
        let two = g(&[&["a"], &["b"]]);
        let over = game_as_presheaf_over(&two, &Arc::new(FinCat::chain(3)));
        assert_eq!(over.section_counts(), vec![1, 2, 0]);
        let chain = g(&[&["a", "b", "c"]]);
        assert_eq!(game_as_presheaf(&chain).section_counts(), vec![1, 1, 1, 1]);
        assert!(game_as_presheaf(&chain).validate().is_empty());
    }

    #[test]
    fn catalogue_of_small_games() {
        let small = game_catalogue(3, "a");
        assert_eq!(small.len(), 4);
        assert!(small
            .iter()
            .all(|g| validate_game(g).is_empty() && g.plays().len() <= 3));
    }

    #[test]
    fn all_strategies_are_valid() {
        let (a, b) = (g(&[&["a"]]), g(&[&["b"]]));
        let all = all_strategies(&a, &b, 12).unwrap();
        assert_eq!(all.len(), 3);
        assert!(all.iter().all(|s| validate_strategy(s).is_empty()));
    }

    #[test]
    fn receptive_closure_adds_opponent_moves() {
        let (sigma, _) = single_move_triple();
        assert!(sigma.is_receptive());
        let nothing = Strategy::empty(sigma.source.clone(), sigma.target.clone());
        assert!(!nothing.is_receptive());
        let closed = nothing.receptive_closure();
        assert!(closed.is_receptive());
        assert_eq!(closed.plays.len(), 2);
        assert!(copycat_strategy(&g(&[&["a", "b"], &["c"]])).is_receptive());
    }

    #[test]
    fn copycat_is_not_a_unit_for_silent_strategies() {
        let (sigma, _) = single_move_triple();
        let nothing = Strategy::empty(sigma.source.clone(), sigma.target.clone());
        let cc = copycat_strategy(&sigma.target);
        assert_eq!(
            compose_direct(&nothing, &cc).unwrap(),
            nothing.receptive_closure()
        );
    }

    #[test]
    fn determinism_lint() {
        let (a, b) = (g(&[&["a1"], &["a2"]]), g(&[&["b"]]));
        let both = Strategy::new(
            a.clone(),
            b.clone(),
            [
                ArrowPlay::empty(),
                ap(&[(R, "b")]),
                ap(&[(R, "b"), (L, "a1")]),
                ap(&[(R, "b"), (L, "a2")]),
            ],
        );
        assert!(!both.is_deterministic());
        let one = Strategy::new(
            a,
            b,
            [
                ArrowPlay::empty(),
                ap(&[(R, "b")]),
                ap(&[(R, "b"), (L, "a1")]),
            ],
        );
        assert!(one.is_deterministic());
    }
}
