//! Named verification suites with deterministic, serialisable reports.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clock::{
    self, copycat, hcompose_with, vcompose, BranchOrder, HState, Polarity, Scheduling,
    VerticalString,
};
use crate::day::{self, convolve_coend, convolve_factor, yoneda, StrictMonoidalCat};
use crate::error::{Error, Result};
use crate::fincat::presheaf_iso;
use crate::games::{
    self, compose_categorical, compose_direct, copycat_strategy, GameContext, Strategy,
};
use crate::slice::{pentagon_check, triangle_check, MonoidMonad};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Failures kept per line; the count is always exact.
const KEEP_FAILURES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ClockLaws,
    GamesEquivalence,
    DayEquivalence,
    Pentagon,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::ClockLaws,
        Suite::GamesEquivalence,
        Suite::DayEquivalence,
        Suite::Pentagon,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::ClockLaws => "clock-laws",
            Suite::GamesEquivalence => "games-equivalence",
            Suite::DayEquivalence => "day-equivalence",
            Suite::Pentagon => "pentagon",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Params {
    /// Total triangles per pair or triple of schedulings.
    pub bound: usize,
    /// Total sections per pair of presheaves.
    pub sections: usize,
    pub random_pairs: usize,
    pub random_triples: usize,
    pub pentagons: usize,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            bound: 10,
            sections: 8,
            random_pairs: 200,
            random_triples: 50,
            pentagons: 20,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Line {
    pub law: String,
    pub tested: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl Line {
    fn new(law: impl Into<String>) -> Self {
        Self {
            law: law.into(),
            tested: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    /// Records one case; an error counts as a failure.
    fn record(&mut self, outcome: Result<bool>, case: impl FnOnce() -> String) {
        self.tested += 1;
        let failure = match outcome {
            Ok(true) => return,
            Ok(false) => case(),
            Err(e) => format!("{}: {e}", case()),
        };
        self.failed += 1;
        if self.failures.len() < KEEP_FAILURES {
            self.failures.push(failure);
        }
    }

    /// Records `tested` cases at once, of which `failed` failed.
    fn record_steps(&mut self, tested: usize, failed: usize, case: impl FnOnce() -> String) {
        self.tested += tested;
        self.failed += failed;
        if failed > 0 && self.failures.len() < KEEP_FAILURES {
            self.failures.push(case());
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub params: Params,
    pub passed: bool,
    pub lines: Vec<Line>,
}

impl Report {
    fn new(suite: Suite, params: &Params, lines: Vec<Line>) -> Self {
        Self {
            suite,
            params: params.clone(),
            passed: lines.iter().all(Line::passed),
            lines,
        }
    }

    pub fn line(&self, law: &str) -> Option<&Line> {
        self.lines.iter().find(|l| l.law == law)
    }
}

pub fn run(suite: Suite, params: &Params) -> Result<Report> {
    match suite {
        Suite::ClockLaws => Ok(clock_laws(params)),
        Suite::GamesEquivalence => games_equivalence(params),
        Suite::DayEquivalence => day_equivalence(params),
        Suite::Pentagon => pentagons(params),
    }
}

/// Horizontal composition run with both branch orders, recording any
/// disagreement and every step at which both outward branches were enabled.
struct Clock {
    orders: Line,
    steps: Line,
}

impl Clock {
    fn h(&mut self, a: &Scheduling, b: &Scheduling) -> Result<Scheduling> {
        let left = hcompose_with(a, b, BranchOrder::LeftFirst)?;
        let right = hcompose_with(a, b, BranchOrder::RightFirst)?;
        self.orders
            .record(Ok(left.scheduling == right.scheduling), || {
                format!("{a} • {b}")
            });
        self.steps
            .record_steps(left.steps, left.conflicts, || format!("{a} • {b}"));
        Ok(left.scheduling)
    }
}

fn clock_laws(params: &Params) -> Report {
    let n = params.bound;
    let all: Vec<Scheduling> = HState::ALL
        .into_iter()
        .flat_map(|s| clock::all_schedulings(s, n))
        .collect();
    let mut by_left: HashMap<VerticalString, Vec<&Scheduling>> = HashMap::new();
    let mut by_start: HashMap<HState, Vec<&Scheduling>> = HashMap::new();
    for s in &all {
        by_left.entry(s.borders().left).or_default().push(s);
        by_start.entry(s.start()).or_default().push(s);
    }
    let none = Vec::new();
    let right_of = |a: &Scheduling| by_left.get(&a.borders().right).unwrap_or(&none);
    let after = |a: &Scheduling| by_start.get(&a.end()).unwrap_or(&none);
    let mut clock = Clock {
        orders: Line::new("horizontal composite independent of branch order"),
        steps: Line::new("outward branches never both enabled"),
    };
    let mut pairs = Vec::new();
    for a in &all {
        for &b in right_of(a).iter().filter(|b| a.len() + b.len() <= n) {
            pairs.push((a, b));
        }
    }

    let mut h_assoc = Line::new("horizontal associativity");
    let mut composites = HashMap::new();
    for &(a, b) in &pairs {
        if let Ok(ab) = clock.h(a, b) {
            composites.insert((a, b), ab);
        }
    }
    let mut composable = Line::new("borders-matching pairs compose");
    for &(a, b) in &pairs {
        composable.record(Ok(composites.contains_key(&(a, b))), || {
            format!("{a} • {b}")
        });
    }
    for &(a, b) in &pairs {
        for &c in right_of(b)
            .iter()
            .filter(|c| a.len() + b.len() + c.len() <= n)
        {
            let outcome = (|| {
                let ab = clock.h(a, b)?;
                let bc = clock.h(b, c)?;
                Ok(clock.h(&ab, c)? == clock.h(a, &bc)?)
            })();
            h_assoc.record(outcome, || format!("{a} • {b} • {c}"));
        }
    }

    let mut left_unit = Line::new("copycat left unit");
    let mut right_unit = Line::new("copycat right unit");
    for a in &all {
        let b = a.borders();
        left_unit.record(clock.h(&copycat(b.left), a).map(|x| x == *a), || {
            a.to_string()
        });
        right_unit.record(clock.h(a, &copycat(b.right)).map(|x| x == *a), || {
            a.to_string()
        });
    }

    let mut cc_vertical = Line::new("copycat preserves vertical composition");
    for start in [Polarity::O, Polarity::P] {
        for k in 0..=n {
            for l in 0..=n - k {
                let u = VerticalString::new(start, k);
                let v = VerticalString::new(u.end(), l);
                let whole = u.then(v).expect("strings meet");
                cc_vertical.record(
                    vcompose(&copycat(u), &copycat(v)).map(|x| x == copycat(whole)),
                    || format!("{start:?} {k}+{l}"),
                );
            }
        }
    }

    let mut v_assoc = Line::new("vertical associativity");
    let mut v_unit = Line::new("vertical unitality");
    for s in &all {
        let (top, bottom) = (Scheduling::empty(s.start()), Scheduling::empty(s.end()));
        v_unit.record(
            vcompose(&top, s).and_then(|x| Ok(x == *s && vcompose(s, &bottom)? == *s)),
            || s.to_string(),
        );
        for t in after(s).iter().filter(|t| s.len() + t.len() <= n) {
            for u in after(t).iter().filter(|u| s.len() + t.len() + u.len() <= n) {
                let outcome =
                    (|| Ok(vcompose(&vcompose(s, t)?, u)? == vcompose(s, &vcompose(t, u)?)?))();
                v_assoc.record(outcome, || format!("{s} ; {t} ; {u}"));
            }
        }
    }

    let mut identity_cells = Line::new("horizontal composite of vertical identities");
    for a in HState::ALL {
        for b in HState::ALL.into_iter().filter(|b| b.left() == a.right()) {
            let (x, y) = (Scheduling::empty(a), Scheduling::empty(b));
            identity_cells.record(clock.h(&x, &y).map(|z| z.is_empty()), || {
                format!("{a} • {b}")
            });
        }
    }

    let mut interchange = Line::new("interchange");
    let mut pairs_by_start: HashMap<(HState, HState), Vec<(&Scheduling, &Scheduling)>> =
        HashMap::new();
    for &(a, b) in &pairs {
        pairs_by_start
            .entry((a.start(), b.start()))
            .or_default()
            .push((a, b));
    }
    for &(a, b) in &pairs {
        let below = pairs_by_start
            .get(&(a.end(), b.end()))
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        for &(c, d) in below
            .iter()
            .filter(|(c, d)| a.len() + b.len() + c.len() + d.len() <= n)
        {
            let outcome = (|| {
                let lhs = clock.h(&vcompose(a, c)?, &vcompose(b, d)?)?;
                let rhs = vcompose(&clock.h(a, b)?, &clock.h(c, d)?)?;
                Ok(lhs == rhs)
            })();
            interchange.record(outcome, || format!("({a} ; {c}) • ({b} ; {d})"));
        }
    }

    let lines = vec![
        composable,
        h_assoc,
        left_unit,
        right_unit,
        identity_cells,
        v_assoc,
        v_unit,
        cc_vertical,
        interchange,
        clock.orders,
        clock.steps,
    ];
    Report::new(Suite::ClockLaws, params, lines)
}

fn routes_agree(s: &Strategy, t: &Strategy) -> Result<bool> {
    Ok(compose_direct(s, t)? == compose_categorical(s, t)?)
}

fn unit_holds(s: &Strategy, compose: fn(&Strategy, &Strategy) -> Result<Strategy>) -> Result<bool> {
    let (l, r) = (copycat_strategy(&s.source), copycat_strategy(&s.target));
    Ok(compose(&l, s)? == *s && compose(s, &r)? == *s)
}

fn games_equivalence(params: &Params) -> Result<Report> {
    let mut catalogue = Line::new("routes agree on the small-game catalogue");
    let mut random = Line::new("routes agree on random pairs");
    let mut unit_direct =
        Line::new("copycat is a unit for direct composition of receptive strategies");
    let mut unit_categorical =
        Line::new("copycat is a unit for categorical composition of receptive strategies");
    let mut unit_exactly = Line::new("copycat is a unit exactly for receptive strategies");
    let mut closed = Line::new("composites of receptive strategies are receptive");
    let mut assoc = Line::new("direct composition is associative");

    let mut units = |s: &Strategy, which: &dyn Fn() -> String| {
        unit_direct.record(unit_holds(s, compose_direct), which);
        unit_categorical.record(unit_holds(s, compose_categorical), which);
    };

    let small = |prefix| games::game_catalogue(3, prefix);
    let (ga, gb, gc) = (small("a"), small("b"), small("c"));
    for (i, a) in ga.iter().enumerate() {
        for (j, b) in gb.iter().enumerate() {
            let left = games::all_strategies(a, b, games::PLAY_BOUND)?;
            for (si, s) in left.iter().enumerate() {
                let which = || format!("catalogue ({i}, {j}) strategy {si}");
                unit_exactly.record(
                    unit_holds(s, compose_direct).map(|u| u == s.is_receptive()),
                    which,
                );
                if s.is_receptive() {
                    units(s, &which);
                }
            }
            for (k, c) in gc.iter().enumerate() {
                let right = games::all_strategies(b, c, games::PLAY_BOUND)?;
                for (si, s) in left.iter().enumerate() {
                    for (ti, t) in right.iter().enumerate() {
                        let which = || format!("games ({i}, {j}, {k}) strategies ({si}, {ti})");
                        catalogue.record(routes_agree(s, t), which);
                        if s.is_receptive() && t.is_receptive() {
                            closed.record(compose_direct(s, t).map(|st| st.is_receptive()), which);
                        }
                    }
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for case in 0..params.random_pairs {
        let [a, b, c] = ["a", "b", "c"].map(|p| games::random_game(&mut rng, 4, 2, p));
        let s = games::random_strategy(&mut rng, &a, &b, 0.9, 80);
        let t = games::random_strategy(&mut rng, &b, &c, 0.9, 80);
        random.record(routes_agree(&s, &t), || format!("random pair {case}"));
        let (s, t) = (s.receptive_closure(), t.receptive_closure());
        random.record(routes_agree(&s, &t), || {
            format!("random receptive pair {case}")
        });
        closed.record(compose_direct(&s, &t).map(|st| st.is_receptive()), || {
            format!("random pair {case}")
        });
        units(&s, &|| format!("random pair {case}"));
    }
    for case in 0..params.random_triples {
        let [a, b, c, d] = ["a", "b", "c", "d"].map(|p| games::random_game(&mut rng, 4, 2, p));
        let s = games::random_strategy(&mut rng, &a, &b, 0.9, 60);
        let t = games::random_strategy(&mut rng, &b, &c, 0.9, 60);
        let u = games::random_strategy(&mut rng, &c, &d, 0.9, 60);
        let outcome = (|| {
            Ok(compose_direct(&compose_direct(&s, &t)?, &u)?
                == compose_direct(&s, &compose_direct(&t, &u)?)?)
        })();
        assoc.record(outcome, || format!("random triple {case}"));
    }
    let lines = vec![
        catalogue,
        random,
        unit_direct,
        unit_categorical,
        unit_exactly,
        closed,
        assoc,
    ];
    Ok(Report::new(Suite::GamesEquivalence, params, lines))
}

fn isomorphic(x: &crate::fincat::Presheaf, y: &crate::fincat::Presheaf) -> Result<bool> {
    Ok(presheaf_iso(x, y)?.is_some())
}

fn day_equivalence(params: &Params) -> Result<Report> {
    let mut lines = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for m in StrictMonoidalCat::shipped() {
        let mut catalogue = Line::new(format!(
            "coend and factorisation agree on the catalogue over {}",
            m.name()
        ));
        let by_size: Vec<Vec<crate::fincat::Presheaf>> = (0..=params.sections)
            .map(|k| day::catalogue(&m, k).expect("shipped bases have catalogues"))
            .collect();
        for kx in 0..=params.sections {
            for ky in 0..=params.sections - kx {
                for (i, x) in by_size[kx].iter().enumerate() {
                    for (j, y) in by_size[ky].iter().enumerate() {
                        let outcome = (|| {
                            isomorphic(&convolve_coend(x, y, &m)?, &convolve_factor(x, y, &m)?)
                        })();
                        catalogue
                            .record(outcome, || format!("sizes ({kx}, {ky}) members ({i}, {j})"));
                    }
                }
            }
        }
        lines.push(catalogue);

        let mut random = Line::new(format!(
            "coend and factorisation agree on random pairs over {}",
            m.name()
        ));
        for case in 0..params.random_pairs / 2 {
            let x = day::random_presheaf(&m, &mut rng, params.sections).expect("shipped base");
            let y = day::random_presheaf(&m, &mut rng, params.sections).expect("shipped base");
            let outcome =
                (|| isomorphic(&convolve_coend(&x, &y, &m)?, &convolve_factor(&x, &y, &m)?))();
            random.record(outcome, || format!("random pair {case}"));
        }
        lines.push(random);

        let mut yon = Line::new(format!("yoneda is monoidal over {}", m.name()));
        let base = m.base();
        for a in base.objects() {
            for b in base.objects() {
                let outcome = (|| {
                    let lhs = convolve_coend(&yoneda(a, &m)?, &yoneda(b, &m)?, &m)?;
                    isomorphic(&lhs, &yoneda(m.tensor_objects(a, b), &m)?)
                })();
                yon.record(outcome, || {
                    format!("y({}) ⊗ y({})", base.object_name(a), base.object_name(b))
                });
            }
        }
        let mut unit = Line::new(format!("y(I) is a two-sided unit over {}", m.name()));
        for a in base.objects() {
            let outcome = (|| {
                let (i, y) = (yoneda(m.unit(), &m)?, yoneda(a, &m)?);
                Ok(isomorphic(&convolve_coend(&i, &y, &m)?, &y)?
                    && isomorphic(&convolve_coend(&y, &i, &m)?, &y)?)
            })();
            unit.record(outcome, || format!("y({})", base.object_name(a)));
        }
        lines.extend([yon, unit]);

        if m.name() == "Z/2" {
            let mut closed = Line::new("section counts over Z/2 match the convolution sum");
            for kx in 0..=params.sections {
                for ky in 0..=params.sections - kx {
                    for x in &by_size[kx] {
                        for y in &by_size[ky] {
                            let (p, q) = (x.section_counts(), y.section_counts());
                            let expected =
                                vec![p[0] * q[0] + p[1] * q[1], p[0] * q[1] + p[1] * q[0]];
                            let outcome = (|| {
                                Ok(convolve_coend(x, y, &m)?.section_counts() == expected
                                    && convolve_factor(x, y, &m)?.section_counts() == expected)
                            })();
                            closed.record(outcome, || format!("{p:?} ⊗ {q:?}"));
                        }
                    }
                }
            }
            lines.push(closed);
        }
    }
    Ok(Report::new(Suite::DayEquivalence, params, lines))
}

fn pentagons(params: &Params) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut game_pentagon = Line::new("pentagon for strategies");
    let mut game_triangle = Line::new("triangle for strategies");
    for case in 0..params.pentagons {
        let gs = ["a", "b", "c", "d", "e"].map(|p| games::random_game(&mut rng, 2, 2, p));
        let ss: Vec<Strategy> = gs
            .windows(2)
            .map(|w| games::random_strategy(&mut rng, &w[0], &w[1], 0.8, 10).receptive_closure())
            .collect();
        let ctx = GameContext::for_games(&gs);
        let outcome = (|| -> Result<(bool, bool)> {
            let cells = ss
                .iter()
                .map(|s| ctx.strategy_cell(s))
                .collect::<Result<Vec<_>>>()?;
            let pentagon = pentagon_check(&cells[0], &cells[1], &cells[2], &cells[3], &ctx.monad)?;
            Ok((pentagon, triangle_check(&cells[0], &cells[1], &ctx.monad)?))
        })();
        let (p, t) = match outcome {
            Ok((p, t)) => (Ok(p), Ok(t)),
            Err(e) => (Err(Error::Internal(e.to_string())), Err(e)),
        };
        game_pentagon.record(p, || format!("random quadruple {case}"));
        game_triangle.record(t, || format!("random quadruple {case}"));
    }

    let mut day_pentagon = Line::new("pentagon for presheaves");
    let mut day_triangle = Line::new("triangle for presheaves");
    let bases = StrictMonoidalCat::shipped();
    for case in 0..params.pentagons {
        let m = &bases[case % bases.len()];
        let monad = MonoidMonad::new(m.clone());
        let xs: Vec<_> = (0..4)
            .map(|_| day::random_presheaf(m, &mut rng, 3).expect("shipped base"))
            .collect();
        let outcome = (|| -> Result<(bool, bool)> {
            let cells = xs
                .iter()
                .map(|x| day::presheaf_cell(x, &monad))
                .collect::<Result<Vec<_>>>()?;
            let pentagon = pentagon_check(&cells[0], &cells[1], &cells[2], &cells[3], &monad)?;
            Ok((pentagon, triangle_check(&cells[0], &cells[1], &monad)?))
        })();
        let (p, t) = match outcome {
            Ok((p, t)) => (Ok(p), Ok(t)),
            Err(e) => (Err(Error::Internal(e.to_string())), Err(e)),
        };
        day_pentagon.record(p, || format!("{} quadruple {case}", m.name()));
        day_triangle.record(t, || format!("{} quadruple {case}", m.name()));
    }
    let lines = vec![game_pentagon, game_triangle, day_pentagon, day_triangle];
    Ok(Report::new(Suite::Pentagon, params, lines))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("nonsense".parse::<Suite>().is_err());
    }

    #[test]
    fn small_clock_suite_passes() {
        let params = Params {
            bound: 5,
            ..Params::default()
        };
        let report = run(Suite::ClockLaws, &params).unwrap();
        assert!(report.passed, "{report:#?}");
        assert!(report.line("interchange").unwrap().tested > 0);
    }

    #[test]
    fn failures_are_capped_but_counted() {
        let mut line = Line::new("law");
        for i in 0..8 {
            line.record(Ok(false), || i.to_string());
        }
        line.record(Err(Error::Internal("boom".into())), || "x".into());
        assert_eq!(
            (line.tested, line.failed, line.failures.len()),
            (9, 9, KEEP_FAILURES)
        );
    }
}
