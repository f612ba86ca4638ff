use std::fmt;

use serde::Serialize;

/// A single violated law, as reported by the various `validate` functions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: &'static str,
    pub detail: String,
}

impl Violation {
    pub fn new(law: &'static str, detail: impl Into<String>) -> Self {
        Self {
            law,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.law, self.detail)
    }
}

/// Witness that a functor is not a discrete fibration: a domain object `object`
/// and a codomain morphism `morphism` into its image with `lifts` lifts (0 or ≥ 2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DfibWitness {
    pub object: String,
    pub morphism: String,
    pub lifts: usize,
}

impl fmt::Display for DfibWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "morphism `{}` into the image of `{}` has {} lifts",
            self.morphism, self.object, self.lifts
        )
    }
}

/// Witness that a functor is not final: the comma category under `object`
/// has `components` connected components (0 means empty).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinalWitness {
    pub object: String,
    pub components: usize,
}

impl fmt::Display for FinalWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components == 0 {
            write!(f, "comma category under `{}` is empty", self.object)
        } else {
            write!(
                f,
                "comma category under `{}` has {} components",
                self.object, self.components
            )
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("validation failed: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("not a discrete fibration: {0}")]
    NotDiscreteFibration(DfibWitness),
    #[error("not final: {0}")]
    NotFinal(FinalWitness),
    #[error("non-composable cells: {0}")]
    NonComposable(String),
    #[error("bound exceeded: {what} is {actual}, limit {limit}")]
    BoundExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Turns a non-empty report into `Error::Invalid`.
pub fn ensure_valid(report: Vec<Violation>) -> Result<()> {
    if report.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(report))
    }
}
