use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use serde_json::Value;
use simplegames::clock::Side;
use simplegames::day::{yoneda, StrictMonoidalCat};
use simplegames::fincat::{FinCat, FinFunctor, Obj};
use simplegames::games::{ArrowPlay, Game, Strategy};
use simplegames::io;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_simplegames"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &Path, name: &str, doc: &impl serde::Serialize) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    path
}

fn play(moves: &[(Side, &str)]) -> ArrowPlay {
    ArrowPlay(moves.iter().map(|(s, m)| (*s, m.to_string())).collect())
}

fn single_move(from: &str, to: &str) -> Strategy {
    let (a, b) = (Game::generated_by([[from]]), Game::generated_by([[to]]));
    Strategy::new(
        a,
        b,
        [
            ArrowPlay::empty(),
            play(&[(Side::Right, to)]),
            play(&[(Side::Right, to), (Side::Left, from)]),
        ],
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compose_scheduling_hides_the_shared_move() {
    let out = run(&["compose-scheduling", "OO,OP", "OP,PP"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["composite"], "OP");
    assert_eq!(doc["hidden"], 1);
    let out = run(&[
        "compose-scheduling",
        "R+,L+",
        "OP,PP",
        "--order",
        "right-first",
    ]);
    assert_eq!(json(&out)["composite"], "OP,PP");
}

#[test]
fn compose_scheduling_rejects_mismatched_borders() {
    let out = run(&["compose-scheduling", "OO,OP", "OO,OP"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("border"));
}

#[test]
fn compose_strategy_reports_both_routes() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(
        dir.path(),
        "sigma.json",
        &io::strategy_to_doc(&single_move("a", "b")),
    );
    let t = write(
        dir.path(),
        "tau.json",
        &io::strategy_to_doc(&single_move("b", "c")),
    );
    let out = run(&["compose-strategy", path(&s), path(&t)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = json(&out);
    assert_eq!(doc["routes_agree"], true);
    let plays: Vec<&str> = doc["plays"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_str().unwrap())
        .collect();
    assert_eq!(plays, ["ε", "R:c", "R:c·L:a"]);
}

#[test]
fn invalid_strategy_names_the_missing_play() {
    let dir = tempfile::tempdir().unwrap();
    let mut broken = single_move("a", "b");
    broken.plays.remove(&play(&[(Side::Right, "b")]));
    let s = write(dir.path(), "sigma.json", &io::strategy_to_doc(&broken));
    let t = write(
        dir.path(),
        "tau.json",
        &io::strategy_to_doc(&single_move("b", "c")),
    );
    let out = run(&["compose-strategy", path(&s), path(&t)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("prefix-closed") && err.contains("R:b"),
        "{err}"
    );
}

#[test]
fn copycat_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "g.json",
        &io::game_to_doc(&Game::generated_by([["a1", "a2"]])),
    );
    let doc = json(&run(&["copycat", path(&g)]));
    assert_eq!(doc["plays"].as_array().unwrap().len(), 5);
    let out = run(&["--format", "dot", "copycat", path(&g)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("->").count(), 4);
}

#[test]
fn factor_prints_both_parts() {
    let dir = tempfile::tempdir().unwrap();
    let two = Arc::new(FinCat::interval());
    let f = FinFunctor::to_terminal(two, Arc::new(FinCat::terminal()));
    let file = write(dir.path(), "f.json", &io::functor_to_doc(&f));
    let out = run(&["factor", path(&file)]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["left_is_final"], true);
    assert_eq!(doc["right_is_discrete_fibration"], true);
    assert_eq!(doc["composite_is_original"], true);
    assert_eq!(doc["witness"]["sections"]["*"].as_array().unwrap().len(), 1);
    assert_eq!(doc["original_dfib_witness"]["lifts"], 2);
}

#[test]
fn convolve_representables() {
    let dir = tempfile::tempdir().unwrap();
    let m = StrictMonoidalCat::max_chain(3);
    let x = write(
        dir.path(),
        "x.json",
        &io::presheaf_to_doc(&yoneda(Obj(1), &m).unwrap()),
    );
    let y = write(
        dir.path(),
        "y.json",
        &io::presheaf_to_doc(&yoneda(Obj(2), &m).unwrap()),
    );
    let out = run(&["convolve", path(&x), path(&y), "--base", "max-chain-3"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = json(&out);
    assert_eq!(doc["isomorphic"], true);
    let counts: Vec<usize> = ["0", "1", "2"]
        .iter()
        .map(|c| doc["coend"]["sections"][c].as_array().unwrap().len())
        .collect();
    assert_eq!(counts, [1, 1, 1]);
    let prov = doc["provenance"]["0"].as_object().unwrap();
    assert!(prov
        .values()
        .all(|members| !members.as_array().unwrap().is_empty()));
}

#[test]
fn convolve_respects_the_section_bound() {
    let dir = tempfile::tempdir().unwrap();
    let m = StrictMonoidalCat::max_chain(3);
    let x = write(
        dir.path(),
        "x.json",
        &io::presheaf_to_doc(&yoneda(Obj(2), &m).unwrap()),
    );
    let out = run(&[
        "convolve",
        path(&x),
        path(&x),
        "--base",
        "max-chain-3",
        "--sections",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound"));
}

#[test]
fn enumerate_schedulings_and_plays() {
    let doc = json(&run(&[
        "enumerate",
        "schedulings",
        "--top",
        "OO",
        "--left",
        "1",
        "--right",
        "1",
    ]));
    assert_eq!(doc["schedulings"][0], "OO,OP,PP");
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "a.json",
        &io::game_to_doc(&Game::generated_by([["a"]])),
    );
    let b = write(
        dir.path(),
        "b.json",
        &io::game_to_doc(&Game::generated_by([["b"]])),
    );
    let doc = json(&run(&["enumerate", "plays", path(&a), path(&b)]));
    assert_eq!(doc["count"], 3);
}

#[test]
fn check_clock_laws_passes_with_counts() {
    let out = run(&["check", "clock-laws", "--bound", "10"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["passed"], true);
    let lines = doc["lines"].as_array().unwrap();
    assert!(lines
        .iter()
        .all(|l| l["tested"].as_u64().unwrap() > 0 && l["failed"] == 0));
}

#[test]
fn check_output_is_deterministic() {
    let first = run(&["check", "pentagon"]);
    let second = run(&["check", "pentagon"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = run(&[
        "compose-scheduling",
        "OO,OP",
        "OP,PP",
        "--output",
        path(&target),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(doc["composite"], "OP");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(
        run(&["check", "clock-laws", "--bound", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["--format", "dot", "check", "clock-laws"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
