mod support;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use simplegames::clock::{
    self, copycat, hcompose, vcompose, HState, Scheduling, Side, VerticalString,
};
use simplegames::day::{self, StrictMonoidalCat};
use simplegames::factorisation::{comprehensive_factor, orthogonal_lift, LiftingProblem};
use simplegames::fincat::{all_functors, presheaf_iso, small_categories, FinCat, FinFunctor};
use simplegames::games::{self, compose_categorical, compose_direct, copycat_strategy};

/// A scheduling from `start`, following `sides` and skipping moves that are
/// not available in the current state.
fn scheduling(start: HState, sides: &[bool]) -> Scheduling {
    let mut s = Scheduling::empty(start);
    for &left in sides {
        let side = if left { Side::Left } else { Side::Right };
        let _ = s.push_side(side);
    }
    s
}

fn arb_scheduling(max_len: usize) -> impl Strategy<Value = Scheduling> {
    (0..3usize, prop::collection::vec(any::<bool>(), 0..=max_len))
        .prop_map(|(i, sides)| scheduling(HState::ALL[i], &sides))
}

/// A pair sharing the middle border: `beta` is drawn from every scheduling
/// with the right left border.
fn arb_composable(max_len: usize) -> impl Strategy<Value = (Scheduling, Scheduling)> {
    (
        arb_scheduling(max_len),
        0..2usize,
        0..=4usize,
        any::<prop::sample::Index>(),
    )
        .prop_filter_map("no partner", move |(alpha, p, extra, pick)| {
            let left = alpha.borders().right;
            let right_start = if p == 0 {
                left.start
            } else {
                left.start.complement()
            };
            let top = HState::from_polarities(left.start, right_start)?;
            let right = VerticalString::new(top.right(), extra);
            let partners = clock::enumerate_bounded(top, left, right, 2 * max_len)
                .ok()
                .filter(|p| !p.is_empty())?;
            let beta = pick.get(&partners).clone();
            let (ba, bb) = (alpha.borders(), beta.borders());
            (ba.top.then(bb.top).is_some() && ba.bottom.then(bb.bottom).is_some())
                .then_some((alpha, beta))
        })
}

fn catalogue() -> Vec<(&'static str, Arc<FinCat>)> {
    small_categories()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hiding_matches_interaction_words((alpha, beta) in arb_composable(8)) {
        let words = support::hidden_words(&alpha, &beta);
        let c = hcompose(&alpha, &beta).unwrap();
        prop_assert_eq!(words.len(), 1);
        prop_assert!(words.contains(&c.sides()));
    }

    #[test]
    fn copycat_is_a_two_sided_unit(alpha in arb_scheduling(12)) {
        let b = alpha.borders();
        prop_assert_eq!(hcompose(&copycat(b.left), &alpha).unwrap(), alpha.clone());
        prop_assert_eq!(hcompose(&alpha, &copycat(b.right)).unwrap(), alpha);
    }

    #[test]
    fn vertical_composition_is_associative(a in arb_scheduling(6), b in arb_scheduling(6), c in arb_scheduling(6)) {
        let b = scheduling(a.end(), &b.sides().iter().map(|s| *s == Side::Left).collect::<Vec<_>>());
        let c = scheduling(b.end(), &c.sides().iter().map(|s| *s == Side::Left).collect::<Vec<_>>());
        let left = vcompose(&vcompose(&a, &b).unwrap(), &c).unwrap();
        let right = vcompose(&a, &vcompose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.len(), a.len() + b.len() + c.len());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn scheduling_text_round_trips(alpha in arb_scheduling(10)) {
        prop_assert_eq!(alpha.to_string().parse::<Scheduling>().unwrap(), alpha.clone());
        if !alpha.is_empty() {
            prop_assert_eq!(alpha.generator_word().parse::<Scheduling>().unwrap(), alpha);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witness_counts_comma_components(i in 0..12usize, j in 0..12usize, pick in any::<prop::sample::Index>()) {
        let cats = catalogue();
        let fs = all_functors(&cats[i].1, &cats[j].1);
        prop_assume!(!fs.is_empty());
        let f = pick.get(&fs);
        let fac = comprehensive_factor(f);
        for b in f.codomain().objects() {
            prop_assert_eq!(fac.witness.section_count(b), support::comma_component_count(b, f));
        }
    }

    #[test]
    fn lifts_between_factorisations_are_unique(
        i in 0..12usize, j in 0..12usize, k in 0..12usize,
        pf in any::<prop::sample::Index>(), pg in any::<prop::sample::Index>(),
    ) {
        let cats = catalogue();
        let fs = all_functors(&cats[i].1, &cats[j].1);
        let gs = all_functors(&cats[j].1, &cats[k].1);
        prop_assume!(!fs.is_empty() && !gs.is_empty());
        let (f, g) = (pf.get(&fs), pg.get(&gs));
        let gf = g.after(f).unwrap();
        let (ff, fgf) = (comprehensive_factor(f), comprehensive_factor(&gf));
        prop_assume!(ff.middle().num_objects() <= 5 && fgf.middle().num_objects() <= 5);
        let bottom = g.after(&ff.right).unwrap();
        let problem = LiftingProblem::new(ff.left.clone(), fgf.right.clone(), fgf.left.clone(), bottom.clone()).unwrap();
        let lift = orthogonal_lift(&problem).unwrap();
        let diagonals: Vec<FinFunctor> = all_functors(ff.middle(), fgf.middle())
            .into_iter()
            .filter(|d| d.after(&ff.left).unwrap() == fgf.left && fgf.right.after(d).unwrap() == bottom)
            .collect();
        prop_assert_eq!(diagonals, vec![lift]);
    }

    #[test]
    fn presheaf_iso_agrees_with_exhaustive_search(base in 0..4usize, seed in any::<u64>()) {
        let m = &StrictMonoidalCat::shipped()[base];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = day::random_presheaf(m, &mut rng, 5).unwrap();
        let y = day::random_presheaf(m, &mut rng, 5).unwrap();
        for (p, q) in [(&x, &y), (&x, &x)] {
            let found = presheaf_iso(p, q).unwrap();
            prop_assert_eq!(found.is_some(), support::isomorphic_brute(p, q));
            if let Some(iso) = found {
                prop_assert!(iso.verify(p, q));
            }
        }
    }

    #[test]
    fn convolution_routes_agree(base in 0..4usize, seed in any::<u64>()) {
        let m = &StrictMonoidalCat::shipped()[base];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = day::random_presheaf(m, &mut rng, 4).unwrap();
        let y = day::random_presheaf(m, &mut rng, 4).unwrap();
        let by_coend = day::convolve_coend(&x, &y, m).unwrap();
        let by_factor = day::convolve_factor(&x, &y, m).unwrap();
        prop_assert!(presheaf_iso(&by_coend, &by_factor).unwrap().is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn strategy_routes_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c] = ["a", "b", "c"].map(|p| games::random_game(&mut rng, 3, 2, p));
        let s = games::random_strategy(&mut rng, &a, &b, 0.9, 40);
        let t = games::random_strategy(&mut rng, &b, &c, 0.9, 40);
        prop_assert_eq!(compose_direct(&s, &t).unwrap(), compose_categorical(&s, &t).unwrap());
    }

    #[test]
    fn copycat_is_a_unit_for_receptive_strategies(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b] = ["a", "b"].map(|p| games::random_game(&mut rng, 3, 2, p));
        let s = games::random_strategy(&mut rng, &a, &b, 0.9, 40).receptive_closure();
        prop_assume!(s.is_receptive());
        prop_assert_eq!(&compose_direct(&copycat_strategy(&a), &s).unwrap(), &s);
        prop_assert_eq!(&compose_direct(&s, &copycat_strategy(&b)).unwrap(), &s);
    }
}
