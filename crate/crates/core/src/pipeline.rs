//! Assembling the relation system for one case at one prime.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;

use crate::catalog::{resolve_character, CaseSpec};
use crate::decider::{check_identity, is_zero_p_local, IdentityOutcome, RelationMatrix, Verdict};
use crate::error::Error;
use crate::relations::{
    adams_relations, base_relations, default_adams_multipliers, from_printed, from_printed_with_step,
    rescale_exponents, restriction_relations, GeneratorWindow, Relation,
};

/// Where restriction relations come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    /// Characters resolved from the recipe.
    Computed,
    /// The printed displays, verbatim.
    Printed,
    /// The union of both.
    Both,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Computed => "computed",
            Source::Printed => "printed",
            Source::Both => "both",
        }
    }

    pub fn uses_computed(self) -> bool {
        matches!(self, Source::Computed | Source::Both)
    }

    pub fn uses_printed(self) -> bool {
        matches!(self, Source::Printed | Source::Both)
    }
}

impl FromStr for Source {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "computed" => Ok(Source::Computed),
            "printed" => Ok(Source::Printed),
            "both" => Ok(Source::Both),
            other => Err(Error::Parse {
                position: 0,
                message: format!("unknown source `{other}` (expected computed, printed or both)"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemOptions {
    pub prime: u64,
    pub source: Source,
    /// Overrides the case window.
    pub window: Option<u32>,
    /// Overrides the case `i_max`.
    pub i_max: Option<u32>,
    /// Overrides the default Adams multipliers for the prime.
    pub adams_multipliers: Option<Vec<i64>>,
}

impl SystemOptions {
    pub fn new(prime: u64, source: Source) -> Self {
        SystemOptions { prime, source, window: None, i_max: None, adams_multipliers: None }
    }
}

/// All relations for one (case, prime, source), ready for the decider.
#[derive(Clone, Debug)]
pub struct RelationSystem {
    pub case: String,
    pub prime: u64,
    pub source: Source,
    pub window: GeneratorWindow,
    pub i_max: u32,
    pub relations: Vec<Relation>,
    /// Restriction relations that did not fit in the window.
    pub dropped: usize,
    /// Relation counts by family: `computed`, `printed`, `adams`, `base`.
    pub counts: BTreeMap<String, usize>,
}

impl RelationSystem {
    pub fn matrix(&self) -> RelationMatrix {
        RelationMatrix::from_relations(&self.relations, self.window)
            .expect("relations were filtered to the window")
    }

    /// Whether `t^1` vanishes after localizing at the system's prime.
    pub fn verdict(&self) -> Verdict {
        is_zero_p_local(1, &self.matrix(), self.prime)
    }

    /// Whether `lhs = 0` holds after localizing at the system's prime.
    pub fn check(&self, lhs: &BTreeMap<i64, BigInt>) -> Result<IdentityOutcome, Error> {
        check_identity(lhs, &self.matrix(), self.prime)
    }
}

/// Relations from the printed displays, relabeled into the case's exponent
/// scale when the display is written before relabeling.
pub fn printed_relations(case: &CaseSpec, i_max: u32) -> Result<Vec<Relation>, Error> {
    let d = case.exponent_divisor;
    let mut out = Vec::new();
    for pr in &case.printed_relations {
        if pr.prescaled || d == 1 {
            out.extend(from_printed(pr, i_max));
        } else {
            out.extend(rescale_exponents(&from_printed_with_step(pr, i_max, d), d)?);
        }
    }
    Ok(out)
}

/// Restriction relations of every declared λ-power.
pub fn computed_relations(case: &CaseSpec, i_max: u32) -> Result<Vec<Relation>, Error> {
    let mut out = Vec::new();
    for &j in &case.lambda_powers {
        let character = resolve_character(case, j)?;
        let label = if j == 1 { "rho".to_string() } else { format!("lambda^{j} rho") };
        out.extend(restriction_relations(&character, i_max, &format!("{} computed {label}", case.name))?);
    }
    Ok(out)
}

pub fn build_system(case: &CaseSpec, options: &SystemOptions) -> Result<RelationSystem, Error> {
    let window = GeneratorWindow::new(options.window.unwrap_or(case.window));
    let i_max = options.i_max.unwrap_or(case.i_max);
    let mut counts = BTreeMap::new();
    let mut restriction = Vec::new();
    if options.source.uses_computed() {
        let rels = computed_relations(case, i_max)?;
        restriction.extend(rels.into_iter().map(|r| ("computed", r)));
    }
    if options.source.uses_printed() {
        let rels = printed_relations(case, i_max)?;
        restriction.extend(rels.into_iter().map(|r| ("printed", r)));
    }
    let before = restriction.len();
    restriction.retain(|(_, r)| window.admits(r));
    let dropped = before - restriction.len();
    for (family, _) in &restriction {
        *counts.entry(family.to_string()).or_insert(0) += 1;
    }
    let mut relations: Vec<Relation> = restriction.into_iter().map(|(_, r)| r).collect();

    let ks = options
        .adams_multipliers
        .clone()
        .unwrap_or_else(|| default_adams_multipliers(options.prime));
    let adams = adams_relations(options.prime, window, &ks)?;
    counts.insert("adams".to_string(), adams.len());
    relations.extend(adams);
    let base = base_relations();
    counts.insert("base".to_string(), base.len());
    relations.extend(base);

    Ok(RelationSystem {
        case: case.name.clone(),
        prime: options.prime,
        source: options.source,
        window,
        i_max,
        relations,
        dropped,
        counts,
    })
}
