//! The clock double category: schedulings are paths in the state graph
//! `OO ⇄ OP ⇄ PP`, composed vertically by concatenation and horizontally by
//! merging triangles, which hides interactions on the shared side.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on `|left| + |right|` for [`enumerate`].
pub const ENUMERATE_BOUND: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    O,
    P,
}

impl Polarity {
    pub fn complement(self) -> Self {
        match self {
            Polarity::O => Polarity::P,
            Polarity::P => Polarity::O,
        }
    }

    /// Polarity after `n` alternating moves.
    pub fn after(self, n: usize) -> Self {
        if n.is_multiple_of(2) {
            self
        } else {
            self.complement()
        }
    }
}

/// The side of an arrow game a move is played on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A horizontal morphism of the clock. `PO` does not exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HState {
    OO,
    OP,
    PP,
}

impl HState {
    pub const ALL: [HState; 3] = [HState::OO, HState::OP, HState::PP];

    pub fn left(self) -> Polarity {
        match self {
            HState::OO | HState::OP => Polarity::O,
            HState::PP => Polarity::P,
        }
    }

    pub fn right(self) -> Polarity {
        match self {
            HState::OO => Polarity::O,
            HState::OP | HState::PP => Polarity::P,
        }
    }

    pub fn from_polarities(left: Polarity, right: Polarity) -> Option<Self> {
        match (left, right) {
            (Polarity::O, Polarity::O) => Some(HState::OO),
            (Polarity::O, Polarity::P) => Some(HState::OP),
            (Polarity::P, Polarity::P) => Some(HState::PP),
            (Polarity::P, Polarity::O) => None,
        }
    }

    /// Horizontal composite `self • next`, defined when the shared polarity agrees.
    pub fn then(self, next: HState) -> Option<Self> {
        if self.right() != next.left() {
            return None;
        }
        Self::from_polarities(self.left(), next.right())
    }

    pub fn diagonal(p: Polarity) -> Self {
        match p {
            Polarity::O => HState::OO,
            Polarity::P => HState::PP,
        }
    }
}

impl fmt::Display for HState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl FromStr for HState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "OO" => Ok(HState::OO),
            "OP" => Ok(HState::OP),
            "PP" => Ok(HState::PP),
            other => Err(Error::Malformed(format!(
                "`{other}` is not a state (OO, OP, PP)"
            ))),
        }
    }
}

/// A basic cell: one move on one side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Triangle {
    /// `OO → OP`, right move `O → P`.
    #[serde(rename = "R+")]
    RPlus,
    /// `OP → PP`, left move `O → P`.
    #[serde(rename = "L+")]
    LPlus,
    /// `PP → OP`, left move `P → O`.
    #[serde(rename = "L-")]
    LMinus,
    /// `OP → OO`, right move `P → O`.
    #[serde(rename = "R-")]
    RMinus,
}

impl Triangle {
    pub const ALL: [Triangle; 4] = [
        Triangle::RPlus,
        Triangle::LPlus,
        Triangle::LMinus,
        Triangle::RMinus,
    ];

    pub fn source(self) -> HState {
        match self {
            Triangle::RPlus => HState::OO,
            Triangle::LPlus | Triangle::RMinus => HState::OP,
            Triangle::LMinus => HState::PP,
        }
    }

    pub fn target(self) -> HState {
        match self {
            Triangle::RPlus | Triangle::LMinus => HState::OP,
            Triangle::LPlus => HState::PP,
            Triangle::RMinus => HState::OO,
        }
    }

    pub fn side(self) -> Side {
        match self {
            Triangle::LPlus | Triangle::LMinus => Side::Left,
            Triangle::RPlus | Triangle::RMinus => Side::Right,
        }
    }

    /// True for moves `O → P`.
    pub fn is_positive(self) -> bool {
        matches!(self, Triangle::RPlus | Triangle::LPlus)
    }

    /// The unique generator leaving `state` on `side`, if any.
    pub fn for_move(state: HState, side: Side) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.source() == state && t.side() == side)
    }

    /// The unique generator `from → to`, if any.
    pub fn between(from: HState, to: HState) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.source() == from && t.target() == to)
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Triangle::RPlus => "R+",
            Triangle::LPlus => "L+",
            Triangle::LMinus => "L-",
            Triangle::RMinus => "R-",
        })
    }
}

impl FromStr for Triangle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "R+" => Ok(Triangle::RPlus),
            "L+" => Ok(Triangle::LPlus),
            "L-" => Ok(Triangle::LMinus),
            "R-" => Ok(Triangle::RMinus),
            other => Err(Error::Malformed(format!(
                "`{other}` is not a generator (R+, L+, L-, R-)"
            ))),
        }
    }
}

/// An alternating string of `length` moves starting at `start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VerticalString {
    pub start: Polarity,
    pub length: usize,
}

impl VerticalString {
    pub fn new(start: Polarity, length: usize) -> Self {
        Self { start, length }
    }

    pub fn end(self) -> Polarity {
        self.start.after(self.length)
    }

    /// Concatenation, defined when `self` ends where `next` starts.
    pub fn then(self, next: VerticalString) -> Option<Self> {
        (self.end() == next.start).then_some(Self::new(self.start, self.length + next.length))
    }
}

/// A path in the state graph, read top to bottom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Scheduling {
    start: HState,
    steps: Vec<Triangle>,
}

/// The four borders of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Borders {
    pub top: HState,
    pub bottom: HState,
    pub left: VerticalString,
    pub right: VerticalString,
}

impl Scheduling {
    pub fn new(start: HState, steps: Vec<Triangle>) -> Result<Self> {
        let mut state = start;
        for (i, t) in steps.iter().enumerate() {
            if t.source() != state {
                return Err(Error::Malformed(format!(
                    "step {i} ({t}) does not leave state {state}"
                )));
            }
            state = t.target();
        }
        Ok(Self { start, steps })
    }

    pub fn empty(state: HState) -> Self {
        Self {
            start: state,
            steps: Vec::new(),
        }
    }

    /// The scheduling of a word of sides played from `OO`.
    pub fn from_sides(sides: impl IntoIterator<Item = Side>) -> Result<Self> {
        let mut s = Self::empty(HState::OO);
        for side in sides {
            s.push_side(side)?;
        }
        Ok(s)
    }

    /// Appends the unique generator for a move on `side`.
    pub fn push_side(&mut self, side: Side) -> Result<()> {
        let state = self.end();
        let t = Triangle::for_move(state, side)
            .ok_or_else(|| Error::Malformed(format!("no {side:?} move leaves state {state}")))?;
        self.steps.push(t);
        Ok(())
    }

    pub fn start(&self) -> HState {
        self.start
    }

    pub fn steps(&self) -> &[Triangle] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> HState {
        self.steps.last().map_or(self.start, |t| t.target())
    }

    /// Every state visited, starting with `start`.
    pub fn states(&self) -> Vec<HState> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|t| t.target()))
            .collect()
    }

    pub fn sides(&self) -> Vec<Side> {
        self.steps.iter().map(|t| t.side()).collect()
    }

    pub fn borders(&self) -> Borders {
        let lefts = self.steps.iter().filter(|t| t.side() == Side::Left).count();
        Borders {
            top: self.start,
            bottom: self.end(),
            left: VerticalString::new(self.start.left(), lefts),
            right: VerticalString::new(self.start.right(), self.steps.len() - lefts),
        }
    }

    /// Whether `self` is an initial segment of `other`.
    pub fn is_prefix_of(&self, other: &Scheduling) -> bool {
        self.start == other.start && other.steps.starts_with(&self.steps)
    }

    /// The generator word, e.g. `R+,L+`.
    pub fn generator_word(&self) -> String {
        self.steps
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses a state word such as `OO,OP,PP`.
    pub fn parse_states(text: &str) -> Result<Self> {
        let states = text
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<HState>>>()?;
        let steps = states
            .windows(2)
            .map(|w| {
                Triangle::between(w[0], w[1])
                    .ok_or_else(|| Error::Malformed(format!("no generator {} → {}", w[0], w[1])))
            })
            .collect::<Result<_>>()?;
        Self::new(states[0], steps)
    }

    /// Parses a generator word such as `R+,L+`; the start is the source of
    /// the first generator, so the word must be nonempty.
    pub fn parse_generators(text: &str) -> Result<Self> {
        let steps = text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Triangle>>>()?;
        let start = steps
            .first()
            .ok_or_else(|| Error::Malformed("empty generator word has no start state".into()))?
            .source();
        Self::new(start, steps)
    }
}

/// State word form, e.g. `OO,OP,PP`.
impl fmt::Display for Scheduling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let states: Vec<String> = self.states().iter().map(ToString::to_string).collect();
        f.write_str(&states.join(","))
    }
}

impl FromStr for Scheduling {
    type Err = Error;

    /// Accepts either a state word or a generator word.
    fn from_str(s: &str) -> Result<Self> {
        if s.contains('+') || s.contains('-') {
            Self::parse_generators(s)
        } else {
            Self::parse_states(s)
        }
    }
}

pub fn borders(s: &Scheduling) -> Borders {
    s.borders()
}

pub fn vcompose(s: &Scheduling, t: &Scheduling) -> Result<Scheduling> {
    if s.end() != t.start {
        return Err(Error::Mismatch(format!(
            "vertical composite: {} ends at {} but {} starts at {}",
            s,
            s.end(),
            t,
            t.start
        )));
    }
    let mut steps = s.steps.clone();
    steps.extend_from_slice(&t.steps);
    Ok(Scheduling {
        start: s.start,
        steps,
    })
}

/// Which outward branch [`hcompose_with`] tries first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchOrder {
    LeftFirst,
    RightFirst,
}

/// A horizontal composite together with a record of the recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composite {
    pub scheduling: Scheduling,
    /// Recursion steps taken, including the final empty one.
    pub steps: usize,
    pub hidden: usize,
    /// Steps at which both outward branches were enabled.
    pub conflicts: usize,
}

/// Horizontal composite `α • β`, hiding the shared side.
pub fn hcompose(alpha: &Scheduling, beta: &Scheduling) -> Result<Scheduling> {
    let c = hcompose_with(alpha, beta, BranchOrder::LeftFirst)?;
    if c.conflicts > 0 {
        return Err(Error::Internal(
            "both outward branches were enabled during horizontal composition".into(),
        ));
    }
    Ok(c.scheduling)
}

/// The inductive definition run bottom-up over both step lists.
pub fn hcompose_with(
    alpha: &Scheduling,
    beta: &Scheduling,
    order: BranchOrder,
) -> Result<Composite> {
    let (a, b) = (alpha.borders(), beta.borders());
    if a.right != b.left {
        return Err(Error::Mismatch(format!(
            "right border of {alpha} ({} moves from {:?}) differs from left border of {beta} ({} moves from {:?})",
            a.right.length, a.right.start, b.left.length, b.left.start
        )));
    }
    let top = a.top.then(b.top);
    let bottom = a.bottom.then(b.bottom);
    let (Some(top), Some(_)) = (top, bottom) else {
        return Err(Error::Mismatch(format!(
            "states of {alpha} and {beta} do not compose"
        )));
    };
    let (mut i, mut j) = (alpha.steps.len(), beta.steps.len());
    let mut reversed = Vec::with_capacity(i + j);
    let (mut steps, mut hidden, mut conflicts) = (0, 0, 0);
    loop {
        steps += 1;
        let last_a = i.checked_sub(1).map(|k| alpha.steps[k]);
        let last_b = j.checked_sub(1).map(|k| beta.steps[k]);
        let outward_left = last_a.filter(|t| t.side() == Side::Left);
        let outward_right = last_b.filter(|t| t.side() == Side::Right);
        if outward_left.is_some() && outward_right.is_some() {
            conflicts += 1;
        }
        let pick = match order {
            BranchOrder::LeftFirst => outward_left
                .map(|t| (t, true))
                .or(outward_right.map(|t| (t, false))),
            BranchOrder::RightFirst => outward_right
                .map(|t| (t, false))
                .or(outward_left.map(|t| (t, true))),
        };
        match (pick, last_a, last_b) {
            (Some((t, from_alpha)), _, _) => {
                reversed.push(t);
                if from_alpha {
                    i -= 1;
                } else {
                    j -= 1;
                }
            }
            (None, Some(ta), Some(tb)) => {
                // ta is an R-move and tb an L-move on the shared side
                if ta.is_positive() != tb.is_positive() {
                    return Err(Error::NonComposable(format!(
                        "interacting triangles {ta} and {tb} have opposite signs"
                    )));
                }
                hidden += 1;
                i -= 1;
                j -= 1;
            }
            (None, None, None) => break,
            (None, _, _) => {
                return Err(Error::NonComposable(format!(
                    "no branch applies to {alpha} • {beta}"
                )));
            }
        }
    }
    reversed.reverse();
    let scheduling = Scheduling::new(top, reversed)
        .map_err(|e| Error::Internal(format!("horizontal composite is not a path: {e}")))?;
    Ok(Composite {
        scheduling,
        steps,
        hidden,
        conflicts,
    })
}

/// The identity cell on a vertical string.
pub fn copycat(u: VerticalString) -> Scheduling {
    let mut steps = Vec::with_capacity(2 * u.length);
    let mut p = u.start;
    for _ in 0..u.length {
        match p {
            Polarity::O => steps.extend([Triangle::RPlus, Triangle::LPlus]),
            Polarity::P => steps.extend([Triangle::LMinus, Triangle::RMinus]),
        }
        p = p.complement();
    }
    Scheduling {
        start: HState::diagonal(u.start),
        steps,
    }
}

/// All schedulings with the given top and vertical borders, in generator order.
pub fn enumerate(
    top: HState,
    left: VerticalString,
    right: VerticalString,
) -> Result<Vec<Scheduling>> {
    enumerate_bounded(top, left, right, ENUMERATE_BOUND)
}

pub fn enumerate_bounded(
    top: HState,
    left: VerticalString,
    right: VerticalString,
    bound: usize,
) -> Result<Vec<Scheduling>> {
    let total = left.length + right.length;
    if total > bound {
        return Err(Error::BoundExceeded {
            what: "border moves",
            actual: total,
            limit: bound,
        });
    }
    if left.start != top.left() || right.start != top.right() {
        return Err(Error::Mismatch(format!(
            "borders do not start at the polarities of {top}"
        )));
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(total);
    extend_paths(top, left.length, right.length, &mut path, &mut out, top);
    Ok(out)
}

fn extend_paths(
    state: HState,
    lefts: usize,
    rights: usize,
    path: &mut Vec<Triangle>,
    out: &mut Vec<Scheduling>,
    start: HState,
) {
    if lefts == 0 && rights == 0 {
        out.push(Scheduling {
            start,
            steps: path.clone(),
        });
        return;
    }
    for t in Triangle::ALL {
        if t.source() != state {
            continue;
        }
        let (l, r) = match t.side() {
            Side::Left if lefts > 0 => (lefts - 1, rights),
            Side::Right if rights > 0 => (lefts, rights - 1),
            _ => continue,
        };
        path.push(t);
        extend_paths(t.target(), l, r, path, out, start);
        path.pop();
    }
}

/// Every scheduling from `start` with at most `max_len` steps, shortest first
/// and in generator order within a length.
pub fn all_schedulings(start: HState, max_len: usize) -> Vec<Scheduling> {
    let mut out = vec![Scheduling::empty(start)];
    let mut frontier = 0;
    for _ in 0..max_len {
        let end = out.len();
        for k in frontier..end {
            let s = out[k].clone();
            for t in Triangle::ALL {
                if t.source() == s.end() {
                    let mut next = s.clone();
                    next.steps.push(t);
                    out.push(next);
                }
            }
        }
        frontier = end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Triangle::*;

    fn s(start: HState, steps: &[Triangle]) -> Scheduling {
        Scheduling::new(start, steps.to_vec()).unwrap()
    }

    #[test]
    fn borders_examples() {
        let b = s(HState::OP, &[]).borders();
        assert_eq!((b.top, b.bottom), (HState::OP, HState::OP));
        assert_eq!(b.left, VerticalString::new(Polarity::O, 0));
        assert_eq!(b.right, VerticalString::new(Polarity::P, 0));

        let zigzag = s(HState::OO, &[RPlus, LPlus, LMinus, RMinus]);
        assert_eq!(zigzag.to_string(), "OO,OP,PP,OP,OO");
        let b = zigzag.borders();
        assert_eq!((b.top, b.bottom), (HState::OO, HState::OO));
        assert_eq!(b.left, VerticalString::new(Polarity::O, 2));
        assert_eq!(b.right, VerticalString::new(Polarity::O, 2));

        let b = s(HState::OO, &[RPlus]).borders();
        assert_eq!(
            (b.bottom, b.left.length, b.right.length),
            (HState::OP, 0, 1)
        );
    }

    #[test]
    fn invalid_path_is_rejected() {
        assert!(Scheduling::new(HState::OO, vec![LPlus]).is_err());
        assert!(Scheduling::from_sides([Side::Left]).is_err());
    }

    #[test]
    fn vertical_examples() {
        let a = s(HState::OO, &[RPlus]);
        let b = s(HState::OP, &[LPlus]);
        assert_eq!(vcompose(&a, &Scheduling::empty(HState::OP)).unwrap(), a);
        assert_eq!(vcompose(&a, &b).unwrap(), s(HState::OO, &[RPlus, LPlus]));
        let down = s(HState::PP, &[LMinus, RMinus]);
        let ab = vcompose(&a, &b).unwrap();
        assert_eq!(vcompose(&ab, &down).unwrap().to_string(), "OO,OP,PP,OP,OO");
        assert!(vcompose(&b, &a).is_err());
    }

    #[test]
    fn full_hiding() {
        let c = hcompose(&s(HState::OO, &[RPlus]), &s(HState::OP, &[LPlus])).unwrap();
        assert_eq!(c, Scheduling::empty(HState::OP));
    }

    #[test]
    fn copycat_is_idempotent() {
        let cc = s(HState::OO, &[RPlus, LPlus]);
        assert_eq!(hcompose(&cc, &cc).unwrap(), cc);
    }

    #[test]
    fn copycat_is_a_right_unit_on_the_zigzag() {
        let zigzag = s(HState::OO, &[RPlus, LPlus, LMinus, RMinus]);
        let unit = copycat(zigzag.borders().right);
        assert_eq!(hcompose(&zigzag, &unit).unwrap(), zigzag);
    }

    #[test]
    fn copycat_examples() {
        assert_eq!(
            copycat(VerticalString::new(Polarity::O, 0)),
            Scheduling::empty(HState::OO)
        );
        assert_eq!(
            copycat(VerticalString::new(Polarity::O, 1)).steps(),
            [RPlus, LPlus]
        );
        assert_eq!(
            copycat(VerticalString::new(Polarity::O, 2)).steps(),
            [RPlus, LPlus, LMinus, RMinus]
        );
        assert_eq!(
            copycat(VerticalString::new(Polarity::P, 1)).steps(),
            [LMinus, RMinus]
        );
    }

    #[test]
    fn enumerate_examples() {
        let o = |n| VerticalString::new(Polarity::O, n);
        assert_eq!(
            enumerate(HState::OO, o(0), o(0)).unwrap(),
            vec![Scheduling::empty(HState::OO)]
        );
        assert_eq!(
            enumerate(HState::OO, o(1), o(1)).unwrap(),
            vec![s(HState::OO, &[RPlus, LPlus])]
        );
        // two moves each side from OO: the zigzag is the only path
        assert_eq!(
            enumerate(HState::OO, o(2), o(2)).unwrap(),
            vec![s(HState::OO, &[RPlus, LPlus, LMinus, RMinus])]
        );
        // two closed paths of length 4 from OO, but only one has a 2 + 2 split
        let closed: Vec<_> = all_schedulings(HState::OO, 4)
            .into_iter()
            .filter(|s| s.len() == 4 && s.end() == HState::OO)
            .collect();
        assert_eq!(closed.len(), 2);
        assert_eq!(enumerate(HState::OO, o(0), o(4)).unwrap().len(), 1);
        assert!(matches!(
            enumerate(HState::OO, o(7), o(6)),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn hcompose_rejects_border_mismatch() {
        let a = s(HState::OO, &[RPlus]);
        assert!(matches!(
            hcompose(&a, &Scheduling::empty(HState::PP)),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn text_forms() {
        let z: Scheduling = "OO,OP,PP,OP,OO".parse().unwrap();
        assert_eq!(z, "R+,L+,L-,R-".parse().unwrap());
        assert_eq!(z.generator_word(), "R+,L+,L-,R-");
        assert_eq!(
            "OP".parse::<Scheduling>().unwrap(),
            Scheduling::empty(HState::OP)
        );
        assert!("OO,PP".parse::<Scheduling>().is_err());
        assert!("OO,PO".parse::<Scheduling>().is_err());
    }

    #[test]
    fn all_schedulings_counts() {
        // from OO the graph is a path of three states, so counts grow slowly
        let counts: Vec<usize> = (0..5)
            .map(|n| all_schedulings(HState::OO, n).len())
            .collect();
        assert_eq!(counts, vec![1, 2, 4, 6, 10]);
    }
}
