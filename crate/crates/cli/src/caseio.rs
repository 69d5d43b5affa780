//! JSON case files.
//!
//! ```json
//! {
//!   "name": "Sp",
//!   "group": "Sp(4)",
//!   "circle_weights": [1, 2, 3, -6],
//!   "recipe": {"monomials": {"-6": 1, "-3": 1, "1": 1}},
//!   "lambda_powers": [1, 2],
//!   "primes": [2, 3],
//!   "exponent_divisor": 1,
//!   "i_max": 16,
//!   "window": 64,
//!   "printed_relations": [
//!     {"coeffs": {"1": 1, "2": 1}, "rhs": 4, "modulus": 0, "source": "display"}
//!   ]
//! }
//! ```
//!
//! Weights and monomial exponents are integers or `"n/2"` strings. Integer
//! values may be written as strings when they do not fit in 64 bits. Recipes
//! are one of `{"trivial": n}`, `{"monomials": {exponent: coeff}}`,
//! `{"spinor": {"x": [...], "parity": "full" | "plus" | "minus"}}`,
//! `{"exterior": {"of": recipe, "j": n}}` and `{"sum": [recipe, ...]}`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use bordcert_core::catalog::{DEFAULT_I_MAX, DEFAULT_WINDOW};
use bordcert_core::{CaseSpec, Character, HalfInt, Parity, PrintedRelation, RepRecipe};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// An integer written as a JSON number, or as a string when it is large.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    pub fn from_big(n: &BigInt) -> Self {
        match i64::try_from(n) {
            Ok(v) => IntRepr::Small(v),
            Err(_) => IntRepr::Big(n.to_string()),
        }
    }

    fn to_big(&self, path: &str) -> Result<BigInt, CliError> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(*v)),
            IntRepr::Big(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::invalid(path, format!("`{s}` is not an integer"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightRepr {
    Int(i64),
    Text(String),
}

impl WeightRepr {
    fn from_half(w: HalfInt) -> Self {
        match w.to_integer() {
            Some(n) => WeightRepr::Int(n),
            None => WeightRepr::Text(w.to_string()),
        }
    }

    fn to_half(&self, path: &str) -> Result<HalfInt, CliError> {
        match self {
            WeightRepr::Int(n) => Ok(HalfInt::from_int(*n)),
            WeightRepr::Text(s) => s.parse().map_err(|e| CliError::invalid(path, format!("{e}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityRepr {
    Full,
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinorRepr {
    pub x: Vec<i64>,
    pub parity: ParityRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExteriorRepr {
    pub of: Box<RecipeRepr>,
    pub j: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecipeRepr {
    Trivial(u64),
    Monomials(BTreeMap<String, IntRepr>),
    Spinor(SpinorRepr),
    Exterior(ExteriorRepr),
    Sum(Vec<RecipeRepr>),
}

fn default_modulus() -> u64 {
    0
}

fn default_lambda() -> u32 {
    1
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn is_one(n: &u32) -> bool {
    *n == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrintedRepr {
    pub coeffs: BTreeMap<String, IntRepr>,
    pub rhs: IntRepr,
    #[serde(default = "default_modulus")]
    pub modulus: u64,
    pub source: String,
    #[serde(default = "default_lambda", skip_serializing_if = "is_one")]
    pub lambda: u32,
    #[serde(default, skip_serializing_if = "is_false")]
    pub prescaled: bool,
}

fn default_lambda_powers() -> Vec<u32> {
    vec![1]
}

fn default_primes() -> Vec<u64> {
    vec![2, 3]
}

fn default_divisor() -> u32 {
    1
}

fn default_i_max() -> u32 {
    DEFAULT_I_MAX
}

fn default_window() -> u32 {
    DEFAULT_WINDOW
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub circle_weights: Vec<WeightRepr>,
    pub recipe: RecipeRepr,
    #[serde(default = "default_lambda_powers")]
    pub lambda_powers: Vec<u32>,
    #[serde(default = "default_primes")]
    pub primes: Vec<u64>,
    #[serde(default = "default_divisor")]
    pub exponent_divisor: u32,
    #[serde(default = "default_i_max")]
    pub i_max: u32,
    #[serde(default = "default_window")]
    pub window: u32,
    #[serde(default)]
    pub printed_relations: Vec<PrintedRepr>,
}

fn recipe_to_repr(recipe: &RepRecipe) -> RecipeRepr {
    match recipe {
        RepRecipe::Trivial(n) => RecipeRepr::Trivial(*n),
        RepRecipe::Monomials(c) => {
            RecipeRepr::Monomials(c.terms().map(|(e, a)| (e.to_string(), IntRepr::from_big(a))).collect())
        }
        RepRecipe::Spinor { x, parity } => RecipeRepr::Spinor(SpinorRepr {
            x: x.clone(),
            parity: match parity {
                Parity::Full => ParityRepr::Full,
                Parity::Plus => ParityRepr::Plus,
                Parity::Minus => ParityRepr::Minus,
            },
        }),
        RepRecipe::Exterior { of, j } => {
            RecipeRepr::Exterior(ExteriorRepr { of: Box::new(recipe_to_repr(of)), j: *j })
        }
        RepRecipe::Sum(parts) => RecipeRepr::Sum(parts.iter().map(recipe_to_repr).collect()),
    }
}

fn repr_to_recipe(repr: &RecipeRepr, path: &str) -> Result<RepRecipe, CliError> {
    Ok(match repr {
        RecipeRepr::Trivial(n) => RepRecipe::Trivial(*n),
        RecipeRepr::Monomials(map) => {
            let mut terms = Vec::with_capacity(map.len());
            for (e, c) in map {
                let at = format!("{path}.monomials.{e}");
                let exponent: HalfInt = e.parse().map_err(|err| CliError::invalid(&at, format!("{err}")))?;
                terms.push((exponent, c.to_big(&at)?));
            }
            RepRecipe::Monomials(Character::from_terms(terms))
        }
        RecipeRepr::Spinor(s) => RepRecipe::Spinor {
            x: s.x.clone(),
            parity: match s.parity {
                ParityRepr::Full => Parity::Full,
                ParityRepr::Plus => Parity::Plus,
                ParityRepr::Minus => Parity::Minus,
            },
        },
        RecipeRepr::Exterior(ext) => {
            RepRecipe::exterior(repr_to_recipe(&ext.of, &format!("{path}.exterior.of"))?, ext.j)
        }
        RecipeRepr::Sum(parts) => RepRecipe::Sum(
            parts
                .iter()
                .enumerate()
                .map(|(i, p)| repr_to_recipe(p, &format!("{path}.sum[{i}]")))
                .collect::<Result<_, _>>()?,
        ),
    })
}

impl CaseFile {
    pub fn from_spec(case: &CaseSpec) -> Self {
        CaseFile {
            name: case.name.clone(),
            group: (case.group != case.name).then(|| case.group.clone()),
            circle_weights: case.circle_weights.iter().map(|w| WeightRepr::from_half(*w)).collect(),
            recipe: recipe_to_repr(&case.recipe),
            lambda_powers: case.lambda_powers.clone(),
            primes: case.primes.clone(),
            exponent_divisor: case.exponent_divisor,
            i_max: case.i_max,
            window: case.window,
            printed_relations: case
                .printed_relations
                .iter()
                .map(|pr| PrintedRepr {
                    coeffs: pr.coeffs.iter().map(|(e, c)| (e.to_string(), IntRepr::from_big(c))).collect(),
                    rhs: IntRepr::from_big(&pr.rhs),
                    modulus: pr.modulus,
                    source: pr.source.clone(),
                    lambda: pr.lambda,
                    prescaled: pr.prescaled,
                })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> Result<CaseSpec, CliError> {
        let circle_weights = self
            .circle_weights
            .iter()
            .enumerate()
            .map(|(i, w)| w.to_half(&format!("circle_weights[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let mut printed_relations = Vec::with_capacity(self.printed_relations.len());
        for (i, pr) in self.printed_relations.iter().enumerate() {
            let base = format!("printed_relations[{i}]");
            let mut coeffs = BTreeMap::new();
            for (e, c) in &pr.coeffs {
                let at = format!("{base}.coeffs.{e}");
                let exponent: i64 =
                    e.trim().parse().map_err(|_| CliError::invalid(&at, "exponent must be an integer"))?;
                coeffs.insert(exponent, c.to_big(&at)?);
            }
            printed_relations.push(PrintedRelation {
                coeffs,
                rhs: pr.rhs.to_big(&format!("{base}.rhs"))?,
                modulus: pr.modulus,
                source: pr.source.clone(),
                lambda: pr.lambda,
                prescaled: pr.prescaled,
            });
        }
        Ok(CaseSpec {
            name: self.name.clone(),
            group: self.group.clone().unwrap_or_else(|| self.name.clone()),
            circle_weights,
            recipe: repr_to_recipe(&self.recipe, "recipe")?,
            lambda_powers: self.lambda_powers.clone(),
            primes: self.primes.clone(),
            exponent_divisor: self.exponent_divisor,
            printed_relations,
            i_max: self.i_max,
            window: self.window,
        })
    }
}

/// Parses and validates a case from JSON text. Returns the case and the
/// validation remarks.
pub fn parse_case(text: &str) -> Result<(CaseSpec, Vec<String>), CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: CaseFile = serde_path_to_error::deserialize(de).map_err(|e| CliError::CaseSyntax {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    let case = file.to_spec()?;
    let remarks = case.validate()?;
    Ok((case, remarks))
}

pub fn load_case(path: &Path) -> Result<(CaseSpec, Vec<String>), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_case(&text)
}

pub fn serialize_case(case: &CaseSpec) -> String {
    let mut out = serde_json::to_string_pretty(&CaseFile::from_spec(case)).expect("case files serialize");
    out.push('\n');
    out
}
