use std::path::Path;

use serde::{Deserialize, Serialize};

use recform_core::algebra::{parse_rat, Rat, RatMatrix};
use recform_core::recurrence::{RecurrenceRelation, Sequence, SequenceFamily};

use crate::error::CliError;

/// Bundled problems, name and JSON source.
pub const EXAMPLES: [(&str, &str); 9] = [
    (
        "fibonacci-lucas",
        include_str!("../fixtures/fibonacci-lucas.json"),
    ),
    ("table1-row1", include_str!("../fixtures/table1-row1.json")),
    ("table1-row2", include_str!("../fixtures/table1-row2.json")),
    ("table1-row3", include_str!("../fixtures/table1-row3.json")),
    ("table1-row4", include_str!("../fixtures/table1-row4.json")),
    ("table1-row5", include_str!("../fixtures/table1-row5.json")),
    ("narayana", include_str!("../fixtures/narayana.json")),
    (
        "tribonacci-cassini",
        include_str!("../fixtures/tribonacci-cassini.json"),
    ),
    ("fibonacci", include_str!("../fixtures/fibonacci.json")),
];

pub fn example(name: &str) -> Option<&'static str> {
    EXAMPLES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Family,
    Cassini,
}

/// A rational written either as a string (`"-7/2"`) or a JSON integer.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatText {
    Text(String),
    Int(i64),
}

impl RatText {
    fn parse(&self) -> Result<Rat, CliError> {
        match self {
            RatText::Text(s) => Ok(parse_rat(s)?),
            RatText::Int(v) => Ok(Rat::from_integer((*v).into())),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub k: usize,
    pub gammas: Vec<RatText>,
    pub sequences: Vec<Vec<RatText>>,
    #[serde(default)]
    pub mode: Mode,
}

/// A validated problem: the family whose form is computed and, in Cassini
/// mode, the single sequence it was shifted from.
pub struct Problem {
    pub mode: Mode,
    pub family: SequenceFamily,
    pub seed: Option<Sequence>,
}

impl Problem {
    pub fn parse(source: &str) -> Result<Self, CliError> {
        let file: ProblemFile = serde_json::from_str(source)
            .map_err(|e| CliError::Input(format!("malformed problem file: {e}")))?;
        file.validate()
    }

    /// `spec` is a path, or the name of a bundled example.
    pub fn load(spec: &str) -> Result<Self, CliError> {
        if !Path::new(spec).exists() {
            if let Some(src) = example(spec) {
                return Self::parse(src);
            }
        }
        let src = std::fs::read_to_string(spec)
            .map_err(|e| CliError::Input(format!("cannot read {spec}: {e}")))?;
        Self::parse(&src)
    }

    /// The sequences whose terms `eval` tabulates.
    pub fn listed_sequences(&self) -> Vec<&Sequence> {
        match &self.seed {
            Some(s) => vec![s],
            None => self.family.sequences().iter().collect(),
        }
    }
}

impl ProblemFile {
    fn validate(&self) -> Result<Problem, CliError> {
        let k = self.k;
        if self.gammas.len() != k {
            return Err(CliError::Input(format!(
                "k = {k} but {} gammas given",
                self.gammas.len()
            )));
        }
        let gammas = self
            .gammas
            .iter()
            .map(RatText::parse)
            .collect::<Result<Vec<_>, _>>()?;
        let relation = RecurrenceRelation::new(gammas)?;
        let rows = self
            .sequences
            .iter()
            .map(|row| {
                if row.len() != k {
                    return Err(CliError::Input(format!(
                        "each sequence needs {k} initial values, got {}",
                        row.len()
                    )));
                }
                row.iter().map(RatText::parse).collect()
            })
            .collect::<Result<Vec<Vec<Rat>>, _>>()?;
        match self.mode {
            Mode::Family => {
                if rows.len() != k {
                    return Err(CliError::Input(format!(
                        "family mode needs {k} sequences, got {}",
                        rows.len()
                    )));
                }
                let g = RatMatrix::from_rows(rows)?;
                Ok(Problem {
                    mode: self.mode,
                    family: SequenceFamily::new(relation, g)?,
                    seed: None,
                })
            }
            Mode::Cassini => {
                let [row] = <[Vec<Rat>; 1]>::try_from(rows).map_err(|rows| {
                    CliError::Input(format!(
                        "cassini mode takes one sequence, got {}",
                        rows.len()
                    ))
                })?;
                let seed = Sequence::new(relation, row)?;
                Ok(Problem {
                    mode: self.mode,
                    family: seed.shifted_family(),
                    seed: Some(seed),
                })
            }
        }
    }
}
