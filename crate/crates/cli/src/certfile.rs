//! Self-contained certificate files.
//!
//! A file carries the claim, the relation rows the combination uses (in the
//! relation line format) and the integer combination. Checking a file needs
//! nothing else: the generator window is rebuilt from the exponents that
//! occur in the rows and the claim.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use bordcert_core::decider::{verify_certificate, Certificate};
use bordcert_core::relations::{parse_linear_form, LinearForm};
use bordcert_core::{GeneratorWindow, Relation, RelationMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claim {
    /// `j` when the claim is that `t^j` vanishes.
    pub exponent: Option<i64>,
    pub m: String,
    pub prime: u64,
    /// The claimed combination of generators, as a linear form.
    pub lhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub claim: Claim,
    pub rows: Vec<String>,
    pub combination: BTreeMap<usize, String>,
}

impl CertificateFile {
    /// Packs a certificate over `relations`, keeping only the rows with a
    /// nonzero coefficient.
    pub fn new(cert: &Certificate, relations: &[Relation], prime: u64) -> Self {
        let mut rows = Vec::new();
        let mut combination = BTreeMap::new();
        for (&r, c) in &cert.combination {
            if c == &BigInt::from(0) {
                continue;
            }
            combination.insert(rows.len(), c.to_string());
            rows.push(relations[r].to_string());
        }
        CertificateFile {
            claim: Claim {
                exponent: cert.target_exponent(),
                m: cert.m.to_string(),
                prime,
                lhs: LinearForm(&cert.claim).to_string(),
            },
            rows,
            combination,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("certificates serialize");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de)
            .map_err(|e| CliError::CaseSyntax { path: e.path().to_string(), message: e.inner().to_string() })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Self::from_json(&fs::read_to_string(path).map_err(|e| CliError::io(path, e))?)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        fs::write(path, self.to_json()).map_err(|e| CliError::io(path, e))
    }

    /// Replays the combination. On success returns `m`, which is nonzero and
    /// prime to the claimed prime.
    pub fn check(&self) -> Result<BigInt, CliError> {
        let bad = |msg: String| CliError::Certificate(msg);
        let m: BigInt = self.claim.m.trim().parse().map_err(|_| bad(format!("m `{}` is not an integer", self.claim.m)))?;
        if self.claim.prime < 2 {
            return Err(bad(format!("prime {} is not a prime", self.claim.prime)));
        }
        if m.is_multiple_of(&BigInt::from(self.claim.prime)) {
            return Err(bad(format!("m = {m} is divisible by p = {}", self.claim.prime)));
        }
        let claim = parse_linear_form(&self.claim.lhs).map_err(|e| bad(format!("claim.lhs: {e}")))?;
        if let Some(j) = self.claim.exponent {
            if claim.len() != 1 || claim.get(&j) != Some(&BigInt::from(1)) {
                return Err(bad(format!("claim.lhs `{}` is not t^{j}", self.claim.lhs)));
            }
        }
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, line)| Relation::parse_line(line).map_err(|e| bad(format!("rows[{i}]: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut combination = BTreeMap::new();
        for (&r, c) in &self.combination {
            let c: BigInt = c.trim().parse().map_err(|_| bad(format!("combination.{r}: `{c}` is not an integer")))?;
            combination.insert(r, c);
        }
        let reach = rows
            .iter()
            .map(Relation::max_abs_exponent)
            .chain(claim.keys().map(|e| e.abs()))
            .max()
            .unwrap_or(0);
        let window = GeneratorWindow::new(u32::try_from(reach).map_err(|_| bad("exponent out of range".into()))?);
        let matrix = RelationMatrix::from_relations(&rows, window).map_err(|e| bad(e.to_string()))?;
        let cert = Certificate { m: m.clone(), combination, claim };
        verify_certificate(&cert, &matrix).map_err(|e| bad(e.to_string()))?;
        Ok(m)
    }
}
