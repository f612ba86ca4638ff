use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use simplegames::check::{self, Params, Suite};
use simplegames::clock::{self, BranchOrder, HState, Scheduling, VerticalString};
use simplegames::day::{convolve_factor, convolve_many_coend, StrictMonoidalCat};
use simplegames::factorisation::comprehensive_factor;
use simplegames::fincat::{
    check_discrete_fibration, check_final, elements, presheaf_iso, Presheaf,
};
use simplegames::games::{self, compose_categorical, compose_direct, copycat_strategy};
use simplegames::io;
use simplegames::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_CHECK: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "simplegames",
    version,
    about = "Strategies, factorisations and Day convolution on finite categories"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the output document here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    LeftFirst,
    RightFirst,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Horizontal composite of two schedulings, given as state words
    /// (`OO,OP,PP`) or generator words (`R+,L+`).
    ComposeScheduling {
        alpha: String,
        beta: String,
        #[arg(long, value_enum, default_value_t = Order::LeftFirst)]
        order: Order,
        /// Largest total number of triangles accepted.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
    /// Composes two strategy files by interaction and by factorisation.
    ComposeStrategy {
        sigma: PathBuf,
        tau: PathBuf,
        /// Longest play accepted in either input.
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        play_bound: u64,
    },
    /// The copycat strategy on a game file.
    Copycat { game: PathBuf },
    /// Comprehensive factorisation of a functor file.
    Factor { functor: PathBuf },
    /// Day convolution of two presheaf files, by coend and by factorisation.
    Convolve {
        x: PathBuf,
        y: PathBuf,
        /// A shipped base: z2, max-chain-2, max-chain-3, truncated-sum.
        #[arg(long, conflicts_with = "monoidal")]
        base: Option<String>,
        /// A strict monoidal category file.
        #[arg(long)]
        monoidal: Option<PathBuf>,
        /// Largest total number of sections accepted.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        sections: u64,
    },
    /// Runs a verification suite.
    Check {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        sections: u64,
        #[arg(long, default_value_t = check::DEFAULT_SEED)]
        seed: u64,
    },
    /// Lists schedulings or arrow plays.
    #[command(subcommand)]
    Enumerate(Enumerate),
}

#[derive(Subcommand, Debug)]
enum Enumerate {
    /// All schedulings with the given top state and border lengths.
    Schedulings {
        #[arg(long)]
        top: String,
        #[arg(long)]
        left: usize,
        #[arg(long)]
        right: usize,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
    /// All plays of the arrow game between two game files.
    Plays {
        source: PathBuf,
        target: PathBuf,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        max_len: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    ClockLaws,
    GamesEquivalence,
    DayEquivalence,
    Pentagon,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::ClockLaws => Suite::ClockLaws,
            SuiteArg::GamesEquivalence => Suite::GamesEquivalence,
            SuiteArg::DayEquivalence => Suite::DayEquivalence,
            SuiteArg::Pentagon => Suite::Pentagon,
        }
    }
}

/// A failed run: exit code and message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// The rendered document and whether every requested check passed.
struct Outcome {
    text: String,
    passed: bool,
    /// Set when two routes disagree.
    disagreement: Option<String>,
}

impl Outcome {
    fn json(value: &impl Serialize) -> Self {
        let text = serde_json::to_string_pretty(value).expect("documents serialise") + "\n";
        Self {
            text,
            passed: true,
            disagreement: None,
        }
    }

    fn dot(text: String) -> Self {
        Self {
            text,
            passed: true,
            disagreement: None,
        }
    }
}

fn read<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_VALIDATION,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| Failure {
        code: EXIT_VALIDATION,
        message: format!("{}: {e}", path.display()),
    })
}

fn shipped_base(name: &str) -> Result<StrictMonoidalCat, Failure> {
    Ok(match name {
        "z2" | "Z/2" => StrictMonoidalCat::cyclic2(),
        "max-chain-2" | "max-chain(2)" => StrictMonoidalCat::max_chain(2),
        "max-chain-3" | "max-chain(3)" => StrictMonoidalCat::max_chain(3),
        "truncated-sum" => StrictMonoidalCat::truncated_sum(),
        other => return Err(usage(format!("unknown base `{other}`"))),
    })
}

fn no_dot(what: &str) -> Failure {
    usage(format!("`{what}` has no dot output"))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let dot = cli.format == Format::Dot;
    match &cli.command {
        Command::ComposeScheduling {
            alpha,
            beta,
            order,
            bound,
        } => {
            if dot {
                return Err(no_dot("compose-scheduling"));
            }
            let a: Scheduling = alpha.parse()?;
            let b: Scheduling = beta.parse()?;
            let total = a.len() + b.len();
            if total as u64 > *bound {
                return Err(Error::BoundExceeded {
                    what: "triangles",
                    actual: total,
                    limit: *bound as usize,
                }
                .into());
            }
            let order = match order {
                Order::LeftFirst => BranchOrder::LeftFirst,
                Order::RightFirst => BranchOrder::RightFirst,
            };
            let c = clock::hcompose_with(&a, &b, order)?;
            if c.conflicts > 0 {
                return Err(Error::Internal("both outward branches were enabled".into()).into());
            }
            Ok(Outcome::json(&json!({
                "alpha": a.to_string(),
                "beta": b.to_string(),
                "composite": c.scheduling.to_string(),
                "generators": c.scheduling.generator_word(),
                "hidden": c.hidden,
            })))
        }
        Command::ComposeStrategy {
            sigma,
            tau,
            play_bound,
        } => {
            let s = io::strategy_from_doc(&read(sigma)?)?;
            let t = io::strategy_from_doc(&read(tau)?)?;
            for (name, x) in [("sigma", &s), ("tau", &t)] {
                let longest = x.plays.iter().map(|p| p.len()).max().unwrap_or(0);
                if longest as u64 > *play_bound {
                    return Err(Failure {
                        code: EXIT_VALIDATION,
                        message: format!(
                            "{name}: play length {longest} exceeds the bound {play_bound}"
                        ),
                    });
                }
            }
            let direct = compose_direct(&s, &t)?;
            let categorical = compose_categorical(&s, &t)?;
            let agree = direct == categorical;
            let mut out = if dot {
                Outcome::dot(io::strategy_dot(&direct, "composite"))
            } else {
                Outcome::json(&json!({
                    "composite": io::strategy_to_doc(&direct),
                    "plays": direct.plays.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "categorical": io::strategy_to_doc(&categorical),
                    "routes_agree": agree,
                }))
            };
            if !agree {
                out.disagreement = Some("direct and categorical composites differ".into());
            }
            Ok(out)
        }
        Command::Copycat { game } => {
            let g = io::game_from_doc(&read(game)?)?;
            let cc = copycat_strategy(&g);
            Ok(if dot {
                Outcome::dot(io::strategy_dot(&cc, "copycat"))
            } else {
                Outcome::json(&io::strategy_to_doc(&cc))
            })
        }
        Command::Factor { functor } => {
            let f = io::functor_from_doc(&read(functor)?)?;
            let fact = comprehensive_factor(&f);
            let final_check = check_final(&fact.left);
            let dfib_check = check_discrete_fibration(&fact.right);
            let composite_ok = fact.right.after(&fact.left)?.object_map() == f.object_map()
                && fact.right.after(&fact.left)?.morphism_map() == f.morphism_map();
            let mut out = if dot {
                Outcome::dot(io::category_dot(fact.middle(), "middle"))
            } else {
                Outcome::json(&json!({
                    "left": io::functor_to_doc(&fact.left),
                    "right": io::functor_to_doc(&fact.right),
                    "witness": io::presheaf_to_doc(&fact.witness),
                    "left_is_final": final_check.is_ok(),
                    "right_is_discrete_fibration": dfib_check.is_ok(),
                    "composite_is_original": composite_ok,
                    "original_dfib_witness": check_discrete_fibration(&f).err(),
                }))
            };
            if final_check.is_err() || dfib_check.is_err() || !composite_ok {
                out.disagreement = Some("factorisation does not have the expected classes".into());
            }
            Ok(out)
        }
        Command::Convolve {
            x,
            y,
            base,
            monoidal,
            sections,
        } => {
            let m = match (base, monoidal) {
                (Some(name), None) => shipped_base(name)?,
                (None, Some(path)) => io::monoidal_from_doc(&read(path)?)?,
                _ => return Err(usage("give exactly one of --base and --monoidal")),
            };
            let (x, y) = (
                io::presheaf_from_doc(&read(x)?)?,
                io::presheaf_from_doc(&read(y)?)?,
            );
            let total = x.total_sections() + y.total_sections();
            if total as u64 > *sections {
                return Err(Error::BoundExceeded {
                    what: "total sections",
                    actual: total,
                    limit: *sections as usize,
                }
                .into());
            }
            let coend = convolve_many_coend(&[&x, &y], &m)?;
            let by_factor = convolve_factor(&x, &y, &m)?;
            let iso = presheaf_iso(&coend.presheaf, &by_factor)?;
            let mut out = if dot {
                Outcome::dot(io::category_dot(
                    &elements(&coend.presheaf).category,
                    "elements",
                ))
            } else {
                Outcome::json(&json!({
                    "base": m.name(),
                    "coend": io::presheaf_to_doc(&coend.presheaf),
                    "factorisation": io::presheaf_to_doc(&by_factor),
                    "isomorphic": iso.is_some(),
                    "provenance": provenance(&coend.presheaf, &coend.provenance),
                }))
            };
            if iso.is_none() {
                out.disagreement = Some("coend and factorisation routes are not isomorphic".into());
            }
            Ok(out)
        }
        Command::Check {
            suite,
            bound,
            sections,
            seed,
        } => {
            if dot {
                return Err(no_dot("check"));
            }
            let params = Params {
                bound: *bound as usize,
                sections: *sections as usize,
                seed: *seed,
                ..Params::default()
            };
            let report = check::run((*suite).into(), &params)?;
            let mut out = Outcome::json(&report);
            out.passed = report.passed;
            Ok(out)
        }
        Command::Enumerate(Enumerate::Schedulings {
            top,
            left,
            right,
            bound,
        }) => {
            if dot {
                return Err(no_dot("enumerate schedulings"));
            }
            let top: HState = top.parse()?;
            let l = VerticalString::new(top.left(), *left);
            let r = VerticalString::new(top.right(), *right);
            let all = clock::enumerate_bounded(top, l, r, *bound as usize)?;
            Ok(Outcome::json(&json!({
                "count": all.len(),
                "schedulings": all.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })))
        }
        Command::Enumerate(Enumerate::Plays {
            source,
            target,
            max_len,
        }) => {
            if dot {
                return Err(no_dot("enumerate plays"));
            }
            let a = io::game_from_doc(&read(source)?)?;
            let b = io::game_from_doc(&read(target)?)?;
            let plays = games::arrow_plays_bounded(
                &a,
                &b,
                *max_len as usize,
                (*max_len as usize).max(games::PLAY_BOUND),
            )?;
            Ok(Outcome::json(&json!({
                "count": plays.len(),
                "plays": plays.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })))
        }
    }
}

/// Integrand elements glued into each section, keyed by object and section.
fn provenance(x: &Presheaf, classes: &[Vec<Vec<String>>]) -> Value {
    let base = x.base();
    let map: BTreeMap<String, BTreeMap<String, Vec<String>>> = base
        .objects()
        .map(|c| {
            let sections = x
                .sections(c)
                .iter()
                .cloned()
                .zip(classes[c.0].iter().cloned())
                .collect();
            (base.object_name(c).to_string(), sections)
        })
        .collect();
    json!(map)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: EXIT_VALIDATION,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|out| {
        emit(&cli, &out.text)?;
        if let Some(what) = out.disagreement {
            return Err(Failure {
                code: EXIT_INTERNAL,
                message: what,
            });
        }
        if !out.passed {
            return Err(Failure {
                code: EXIT_CHECK,
                message: "check failed".into(),
            });
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
