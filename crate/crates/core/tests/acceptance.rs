//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Built without the libtest harness so the lines always print.

mod support;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use simplegames::check::{self, Params, Report, Suite};
use simplegames::clock::{self, hcompose, HState, Scheduling};
use simplegames::day::{self, convolve_coend, convolve_factor, yoneda, StrictMonoidalCat};
use simplegames::factorisation::comprehensive_factor;
use simplegames::fincat::{
    all_functors, check_discrete_fibration, is_discrete_fibration, is_final, presheaf_iso,
    presheaf_of_dfib, small_categories, FinCat, FinFunctor, Obj,
};

const CLOCK_BOUND: usize = 10;
const CLOCK_TIME_LIMIT: Duration = Duration::from_secs(60);
const GAMES_TIME_LIMIT: Duration = Duration::from_secs(120);
const MIN_RANDOM_PAIRS: usize = 200;
const MIN_RANDOM_TRIPLES: usize = 50;
const MIN_PENTAGONS: usize = 20;
const DAY_SECTIONS: usize = 8;
const MIN_DAY_RANDOM_PAIRS: usize = 100;
const MAX_CATALOGUE_OBJECTS: usize = 5;
const CLOCK_LAWS: [&str; 9] = [
    "borders-matching pairs compose",
    "horizontal associativity",
    "copycat left unit",
    "copycat right unit",
    "horizontal composite of vertical identities",
    "vertical associativity",
    "vertical unitality",
    "copycat preserves vertical composition",
    "interchange",
];

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn failures(report: &Report) -> String {
    report
        .lines
        .iter()
        .filter(|l| !l.passed())
        .map(|l| {
            format!(
                "{} ({}/{}: {})",
                l.law,
                l.failed,
                l.tested,
                l.failures.join("; ")
            )
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn timed(suite: Suite, params: &Params) -> (Report, Duration) {
    let start = Instant::now();
    let report = check::run(suite, params).expect("suite runs");
    (report, start.elapsed())
}

fn clock_double_category(report: &Report, took: Duration) -> Outcome {
    let mut missing = Vec::new();
    let mut tested = 0;
    let mut failed = 0;
    for law in CLOCK_LAWS {
        match report.line(law) {
            Some(l) if l.tested > 0 => {
                tested += l.tested;
                failed += l.failed;
            }
            _ => missing.push(law),
        }
    }
    let passed = missing.is_empty() && failed == 0 && took <= CLOCK_TIME_LIMIT;
    Outcome::new(
        passed,
        format!(
            "{tested} law instances, {failed} failures, {:.2}s (limit {}s){}",
            took.as_secs_f64(),
            CLOCK_TIME_LIMIT.as_secs(),
            if missing.is_empty() {
                String::new()
            } else {
                format!(", untested: {missing:?}")
            }
        ),
    )
}

fn branch_determinism(report: &Report) -> Outcome {
    let steps = report.line("outward branches never both enabled");
    let orders = report.line("horizontal composite independent of branch order");
    match (steps, orders) {
        (Some(s), Some(o)) => Outcome::new(
            s.tested > 0 && s.failed == 0 && o.failed == 0,
            format!(
                "{} recursion steps, {} with both outward branches enabled; {} composites checked under both orders",
                s.tested, s.failed, o.tested
            ),
        ),
        _ => Outcome::new(false, "branch lines missing from the clock report"),
    }
}

fn hiding_oracle() -> Outcome {
    let all: Vec<Scheduling> = HState::ALL
        .into_iter()
        .flat_map(|s| clock::all_schedulings(s, CLOCK_BOUND))
        .collect();
    let pairs = support::composable_pairs(&all, CLOCK_BOUND);
    let mut disagreements = Vec::new();
    for &(a, b) in &pairs {
        let words = support::hidden_words(a, b);
        let top = a.start().then(b.start()).expect("composable tops");
        let agree = match (hcompose(a, b), words.len()) {
            (Ok(c), 1) => c.start() == top && words.contains(&c.sides()),
            _ => false,
        };
        if !agree {
            disagreements.push(format!("{a} • {b}"));
        }
    }
    Outcome::new(
        !pairs.is_empty() && disagreements.is_empty(),
        format!(
            "{}/{} composable pairs agree{}",
            pairs.len() - disagreements.len(),
            pairs.len(),
            disagreements
                .first()
                .map(|d| format!(", first disagreement {d}"))
                .unwrap_or_default()
        ),
    )
}

fn route_equivalence(report: &Report, took: Duration) -> Outcome {
    let need = [
        ("routes agree on the small-game catalogue", 1),
        ("routes agree on random pairs", MIN_RANDOM_PAIRS),
        (
            "copycat is a unit for direct composition of receptive strategies",
            1,
        ),
        (
            "copycat is a unit for categorical composition of receptive strategies",
            1,
        ),
        ("direct composition is associative", MIN_RANDOM_TRIPLES),
    ];
    let short: Vec<String> = need
        .iter()
        .filter(|(law, min)| report.line(law).is_none_or(|l| l.tested < *min))
        .map(|(law, min)| format!("{law} below {min} cases"))
        .collect();
    let count = |law: &str| report.line(law).map_or(0, |l| l.tested);
    let passed = report.passed && short.is_empty() && took <= GAMES_TIME_LIMIT;
    Outcome::new(
        passed,
        format!(
            "catalogue {} pairs, random {} pairs, associativity {} triples, {:.2}s (limit {}s){}{}",
            count(need[0].0),
            count(need[1].0),
            count(need[4].0),
            took.as_secs_f64(),
            GAMES_TIME_LIMIT.as_secs(),
            if short.is_empty() {
                String::new()
            } else {
                format!("; {}", short.join("; "))
            },
            if report.passed {
                String::new()
            } else {
                format!("; failing: {}", failures(report))
            }
        ),
    )
}

fn factorisation() -> Outcome {
    let cats = small_categories();
    let mut functors = 0;
    let mut bad = Vec::new();
    for (na, a) in &cats {
        for (nb, b) in &cats {
            if a.num_objects() > MAX_CATALOGUE_OBJECTS || b.num_objects() > MAX_CATALOGUE_OBJECTS {
                continue;
            }
            for f in all_functors(a, b) {
                functors += 1;
                let fac = comprehensive_factor(&f);
                let recomposed = fac.right.after(&fac.left).map(|g| g == f).unwrap_or(false);
                let coend_matches = presheaf_of_dfib(&fac.right)
                    .and_then(|p| presheaf_iso(&p, &support::coend_presheaf(&f)))
                    .map(|iso| iso.is_some())
                    .unwrap_or(false);
                // a functor both final and a discrete fibration has singleton fibres
                let classes_exclusive =
                    !(is_final(&f) && is_discrete_fibration(&f)) || f.is_isomorphism();
                let ok = is_discrete_fibration(&fac.right)
                    && is_final(&fac.left)
                    && recomposed
                    && coend_matches
                    && classes_exclusive;
                if !ok {
                    bad.push(format!("{na} → {nb} {:?}", f.object_map()));
                }
            }
        }
    }
    let interval = std::sync::Arc::new(FinCat::interval());
    let chain = std::sync::Arc::new(FinCat::chain(4));
    let compound =
        FinFunctor::from_object_map(interval, chain, vec![Obj(0), Obj(3)]).expect("monotone");
    let rejection = check_discrete_fibration(&compound).err();
    Outcome::new(
        functors > 0 && bad.is_empty() && rejection.is_some(),
        format!(
            "{} functors over {} categories, {} failures; compound-move functor {}{}",
            functors,
            cats.len(),
            bad.len(),
            rejection.map_or("accepted".into(), |w| format!("rejected ({w})")),
            bad.first()
                .map(|b| format!(", first failure {b}"))
                .unwrap_or_default()
        ),
    )
}

fn coherence(report: &Report) -> Outcome {
    let laws = [
        "pentagon for strategies",
        "triangle for strategies",
        "pentagon for presheaves",
        "triangle for presheaves",
    ];
    let counts: Vec<usize> = laws
        .iter()
        .map(|l| report.line(l).map_or(0, |l| l.tested))
        .collect();
    Outcome::new(
        report.passed && counts.iter().all(|&c| c >= MIN_PENTAGONS),
        format!(
            "{} game and {} presheaf quadruples (minimum {MIN_PENTAGONS}){}",
            counts[0],
            counts[2],
            if report.passed {
                String::new()
            } else {
                format!("; failing: {}", failures(report))
            }
        ),
    )
}

fn day_equivalence(report: &Report) -> Outcome {
    let bases = StrictMonoidalCat::shipped();
    let mut short = Vec::new();
    let mut catalogue_pairs = 0;
    let mut random_pairs = 0;
    for m in &bases {
        let cat = report.line(&format!(
            "coend and factorisation agree on the catalogue over {}",
            m.name()
        ));
        let rnd = report.line(&format!(
            "coend and factorisation agree on random pairs over {}",
            m.name()
        ));
        match (cat, rnd) {
            (Some(c), Some(r)) if c.tested > 0 => {
                catalogue_pairs += c.tested;
                random_pairs += r.tested;
            }
            _ => short.push(m.name().to_string()),
        }
    }
    // closed form over the discrete base, recomputed here
    let z2 = StrictMonoidalCat::cyclic2();
    let mut closed_tested = 0;
    let mut closed_failed = 0;
    let by_size: Vec<_> = (0..=DAY_SECTIONS)
        .map(|k| day::catalogue(&z2, k).expect("Z/2 catalogue"))
        .collect();
    for kx in 0..=DAY_SECTIONS {
        for ky in 0..=DAY_SECTIONS - kx {
            for x in &by_size[kx] {
                for y in &by_size[ky] {
                    closed_tested += 1;
                    let expected = support::discrete_convolution_counts(x, y, &z2);
                    let got = (
                        convolve_coend(x, y, &z2).map(|p| p.section_counts()),
                        convolve_factor(x, y, &z2).map(|p| p.section_counts()),
                    );
                    if !matches!(got, (Ok(ref a), Ok(ref b)) if *a == expected && *b == expected) {
                        closed_failed += 1;
                    }
                }
            }
        }
    }
    Outcome::new(
        report.passed && short.is_empty() && random_pairs >= MIN_DAY_RANDOM_PAIRS && closed_failed == 0,
        format!(
            "{catalogue_pairs} catalogue pairs and {random_pairs} random pairs over {} bases; Z/2 closed form {}/{closed_tested}{}{}",
            bases.len(),
            closed_tested - closed_failed,
            if short.is_empty() { String::new() } else { format!("; untested bases {short:?}") },
            if report.passed { String::new() } else { format!("; failing: {}", failures(report)) }
        ),
    )
}

fn yoneda_monoidal() -> Outcome {
    let mut tested = 0;
    let mut bad = Vec::new();
    for m in StrictMonoidalCat::shipped() {
        let base = m.base().clone();
        let unit = yoneda(m.unit(), &m).expect("representable");
        for a in base.objects() {
            let ya = yoneda(a, &m).expect("representable");
            tested += 1;
            let unital = [
                convolve_coend(&unit, &ya, &m),
                convolve_coend(&ya, &unit, &m),
            ]
            .into_iter()
            .all(|p| {
                p.map(|p| support::isomorphic_brute(&p, &ya))
                    .unwrap_or(false)
            });
            if !unital {
                bad.push(format!("{}: y(I) ⊗ y({})", m.name(), base.object_name(a)));
            }
            for b in base.objects() {
                tested += 1;
                let yb = yoneda(b, &m).expect("representable");
                let target = yoneda(m.tensor_objects(a, b), &m).expect("representable");
                let ok = [convolve_coend(&ya, &yb, &m), convolve_factor(&ya, &yb, &m)]
                    .into_iter()
                    .all(|p| {
                        p.map(|p| support::isomorphic_brute(&p, &target))
                            .unwrap_or(false)
                    });
                if !ok {
                    bad.push(format!(
                        "{}: y({}) ⊗ y({})",
                        m.name(),
                        base.object_name(a),
                        base.object_name(b)
                    ));
                }
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{}/{tested} object pairs and unit cases{}",
            tested - bad.len(),
            bad.first()
                .map(|b| format!(", first failure {b}"))
                .unwrap_or_default()
        ),
    )
}

fn determinism(first: &[Report], params: &Params) -> Outcome {
    let mut differing = Vec::new();
    for report in first {
        let again = check::run(report.suite, params).expect("suite runs");
        let a = serde_json::to_string_pretty(report).expect("serialisable");
        let b = serde_json::to_string_pretty(&again).expect("serialisable");
        if a != b {
            differing.push(report.suite.to_string());
        }
    }
    Outcome::new(
        differing.is_empty(),
        format!(
            "{} suites rerun, {} byte-identical",
            first.len(),
            first.len() - differing.len()
        ),
    )
}

fn main() -> ExitCode {
    let params = Params::default();
    let (clock_report, clock_time) = timed(Suite::ClockLaws, &params);
    let (games_report, games_time) = timed(Suite::GamesEquivalence, &params);
    let (day_report, _) = timed(Suite::DayEquivalence, &params);
    let (pentagon_report, _) = timed(Suite::Pentagon, &params);

    let outcomes = [
        (
            "clock double category laws",
            clock_double_category(&clock_report, clock_time),
        ),
        (
            "horizontal composition never has two outward branches",
            branch_determinism(&clock_report),
        ),
        (
            "horizontal composition matches the hiding oracle",
            hiding_oracle(),
        ),
        (
            "direct and categorical strategy composition agree",
            route_equivalence(&games_report, games_time),
        ),
        (
            "comprehensive factorisation over the small-category catalogue",
            factorisation(),
        ),
        (
            "associators, pentagons and triangles",
            coherence(&pentagon_report),
        ),
        (
            "Day convolution by coend and by factorisation agree",
            day_equivalence(&day_report),
        ),
        ("Yoneda embedding is monoidal", yoneda_monoidal()),
        (
            "check reports are deterministic",
            determinism(
                &[clock_report, games_report, day_report, pentagon_report],
                &params,
            ),
        ),
    ];
    let mut all = true;
    for (i, (name, o)) in outcomes.iter().enumerate() {
        all &= o.passed;
        println!(
            "criterion {}: {} {name}: {}",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
