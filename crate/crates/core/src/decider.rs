//! Deciding whether a class dies after localizing at a prime.
//!
//! The presented group is `Z^n / L` where `L` is the row span of a
//! [`RelationMatrix`]. An element `x` vanishes in the localization at `p`
//! iff `m·x ∈ L` for some `m` prime to `p`; the least such positive `m` with
//! `m·x ∈ L` at all is read off a Hermite basis computed with the target
//! column last.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::hnf::{echelonize, Echelon, Options};
use crate::relations::{GeneratorWindow, Relation};

/// A matrix column: a generator `t^j`, or the slack generator attached to
/// the congruence relation with the given row index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Column {
    T(i64),
    Slack(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationMatrix {
    columns: Vec<Column>,
    rows: Vec<Vec<BigInt>>,
    provenance: Vec<String>,
}

impl RelationMatrix {
    /// Columns are `t^{-N}, …, t^N` followed by one slack column per
    /// congruence relation; a relation `Σ c·t^j ∈ m·A` becomes the row
    /// `Σ c·t^j − m·s`.
    pub fn from_relations(relations: &[Relation], window: GeneratorWindow) -> Result<Self, Error> {
        let mut columns: Vec<Column> = window.exponents().map(Column::T).collect();
        let width = columns.len();
        let slack_rows: Vec<usize> = relations
            .iter()
            .enumerate()
            .filter(|(_, r)| r.modulus() > 0)
            .map(|(i, _)| i)
            .collect();
        columns.extend(slack_rows.iter().map(|&i| Column::Slack(i)));
        let offset = i64::from(window.bound);
        let mut rows = Vec::with_capacity(relations.len());
        for (i, r) in relations.iter().enumerate() {
            let mut row = vec![BigInt::zero(); columns.len()];
            for (e, c) in r.terms() {
                if !window.contains(*e) {
                    return Err(Error::OutsideWindow { provenance: r.provenance().into(), exponent: *e });
                }
                row[(e + offset) as usize] = c.clone();
            }
            if r.modulus() > 0 {
                let pos = slack_rows.binary_search(&i).expect("slack column recorded");
                row[width + pos] = -BigInt::from(r.modulus());
            }
            rows.push(row);
        }
        Ok(RelationMatrix {
            columns,
            rows,
            provenance: relations.iter().map(|r| r.provenance().into()).collect(),
        })
    }

    /// A plain integer matrix with columns `t^0, …, t^{n-1}`. All-zero rows
    /// are dropped.
    pub fn from_dense(ncols: usize, rows: &[Vec<i64>]) -> Self {
        let columns = (0..ncols as i64).map(Column::T).collect();
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .filter(|r| r.iter().any(|x| *x != 0))
            .map(|r| {
                assert_eq!(r.len(), ncols, "row length");
                r.iter().map(|&x| BigInt::from(x)).collect()
            })
            .collect();
        let provenance = (0..rows.len()).map(|i| format!("row {i}")).collect();
        RelationMatrix { columns, rows, provenance }
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, column: Column) -> Option<usize> {
        self.columns.iter().position(|c| *c == column)
    }

    /// Slack columns first, then `t`-columns other than `last`, then `last`.
    fn elimination_order(&self, last: Option<usize>) -> Vec<usize> {
        let slack = (0..self.columns.len()).filter(|&i| matches!(self.columns[i], Column::Slack(_)));
        let t = (0..self.columns.len())
            .filter(|&i| matches!(self.columns[i], Column::T(_)) && Some(i) != last);
        slack.chain(t).chain(last).collect()
    }
}

/// Row-style Hermite normal form of the row span: echelon in column order,
/// positive pivots, entries above each pivot in `[0, pivot)`.
pub fn hermite_form(matrix: &RelationMatrix) -> Vec<Vec<BigInt>> {
    let order: Vec<usize> = (0..matrix.columns.len()).collect();
    echelonize(&matrix.rows, &order, Options { track: false, reduce_above: true }).rows
}

/// Least positive `m` with `m·x` in a lattice, or none.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiple {
    Finite(BigInt),
    Infinite,
}

impl Multiple {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Multiple::Finite(m) => Some(m),
            Multiple::Infinite => None,
        }
    }

    /// Finite and prime to `p`.
    pub fn is_unit_at(&self, prime: u64) -> bool {
        self.finite().is_some_and(|m| !m.is_multiple_of(&BigInt::from(prime)))
    }
}

impl fmt::Display for Multiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiple::Finite(m) => write!(f, "{m}"),
            Multiple::Infinite => f.write_str("inf"),
        }
    }
}

/// `Σ combination[r]·row_r = m·claim`, exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub m: BigInt,
    pub combination: BTreeMap<usize, BigInt>,
    /// Sparse combination of `t`-generators; `{target: 1}` for a vanishing claim.
    pub claim: BTreeMap<i64, BigInt>,
}

impl Certificate {
    /// The exponent `j` when the claim is `t^j` itself.
    pub fn target_exponent(&self) -> Option<i64> {
        match self.claim.iter().next() {
            Some((e, c)) if self.claim.len() == 1 && c.is_one() => Some(*e),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub target: i64,
    pub prime: u64,
    pub minimal_multiple: Multiple,
    pub zero_at_p: bool,
    pub certificate: Option<Certificate>,
    pub note: Option<String>,
}

/// Reduction with one column moved last, optionally with a probe column.
struct Reduction {
    echelon: Echelon,
    last: usize,
}

impl Reduction {
    fn multiple(&self) -> Multiple {
        match self.echelon.pivot_row(self.last) {
            Some(r) => Multiple::Finite(self.echelon.rows[r][self.last].clone()),
            None => Multiple::Infinite,
        }
    }

    /// The transform row producing `d·e_last`, where `d` is the pivot.
    fn witness(&self) -> Option<(&BigInt, &[BigInt])> {
        let r = self.echelon.pivot_row(self.last)?;
        let u = self.echelon.transform.as_ref()?;
        Some((&self.echelon.rows[r][self.last], &u[r]))
    }
}

fn reduce_for(matrix: &RelationMatrix, target: i64, track: bool) -> Option<Reduction> {
    let last = matrix.column_index(Column::T(target))?;
    let order = matrix.elimination_order(Some(last));
    let echelon = echelonize(&matrix.rows, &order, Options { track, reduce_above: false });
    Some(Reduction { echelon, last })
}

/// Least positive `m` with `m·t^target` in the row span.
pub fn minimal_multiple(target: i64, matrix: &RelationMatrix) -> Multiple {
    match reduce_for(matrix, target, false) {
        Some(red) => red.multiple(),
        None => Multiple::Infinite,
    }
}

fn scaled_combination(factor: &BigInt, u: &[BigInt]) -> BTreeMap<usize, BigInt> {
    u.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c * factor))
        .collect()
}

pub fn is_zero_p_local(target: i64, matrix: &RelationMatrix, prime: u64) -> Verdict {
    let note = (prime >= 5).then(|| {
        String::from("the class already vanishes at all primes p >= 5; only p = 2, 3 need a computation")
    });
    let Some(red) = reduce_for(matrix, target, true) else {
        return Verdict {
            target,
            prime,
            minimal_multiple: Multiple::Infinite,
            zero_at_p: false,
            certificate: None,
            note,
        };
    };
    let minimal_multiple = red.multiple();
    let zero_at_p = minimal_multiple.is_unit_at(prime);
    let certificate = if zero_at_p {
        red.witness().map(|(d, u)| Certificate {
            m: d.clone(),
            combination: scaled_combination(&BigInt::one(), u),
            claim: BTreeMap::from([(target, BigInt::one())]),
        })
    } else {
        None
    };
    Verdict { target, prime, minimal_multiple, zero_at_p, certificate, note }
}

/// Integer coefficients with `Σ c_r·row_r = m·t^target`.
pub fn extract_certificate(target: i64, m: &BigInt, matrix: &RelationMatrix) -> Result<Certificate, Error> {
    let red = reduce_for(matrix, target, true).ok_or(Error::NotInSpan)?;
    let (d, u) = red.witness().ok_or(Error::NotInSpan)?;
    if m.is_zero() || !m.is_multiple_of(d) {
        return Err(Error::NotInSpan);
    }
    Ok(Certificate {
        m: m.clone(),
        combination: scaled_combination(&(m / d), u),
        claim: BTreeMap::from([(target, BigInt::one())]),
    })
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    MissingRow(usize),
    ZeroMultiple,
    ClaimOutsideMatrix(i64),
    Mismatch { column: Column, expected: BigInt, found: BigInt },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::MissingRow(r) => write!(f, "certificate references missing row {r}"),
            Rejection::ZeroMultiple => f.write_str("certificate multiple must be nonzero"),
            Rejection::ClaimOutsideMatrix(e) => write!(f, "claim uses t^{e}, which is not a matrix column"),
            Rejection::Mismatch { column, expected, found } => {
                write!(f, "column {column:?}: combination gives {found}, claim needs {expected}")
            }
        }
    }
}

/// Recomputes `Σ combination[r]·row_r` and compares it with `m·claim`.
pub fn verify_certificate(cert: &Certificate, matrix: &RelationMatrix) -> Result<(), Rejection> {
    if cert.m.is_zero() {
        return Err(Rejection::ZeroMultiple);
    }
    let width = matrix.columns.len();
    let mut expected = vec![BigInt::zero(); width];
    for (e, c) in &cert.claim {
        let idx = matrix.column_index(Column::T(*e)).ok_or(Rejection::ClaimOutsideMatrix(*e))?;
        expected[idx] = c * &cert.m;
    }
    let mut sum = vec![BigInt::zero(); width];
    for (&r, coeff) in &cert.combination {
        let row = matrix.rows.get(r).ok_or(Rejection::MissingRow(r))?;
        for (acc, x) in sum.iter_mut().zip(row) {
            if !x.is_zero() {
                *acc += coeff * x;
            }
        }
    }
    for (i, (found, exp)) in sum.into_iter().zip(expected).enumerate() {
        if found != exp {
            return Err(Rejection::Mismatch { column: matrix.columns[i], expected: exp, found });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub holds: bool,
    /// Least positive `m` with `m·lhs` in the row span.
    pub multiple: Multiple,
    pub certificate: Option<Certificate>,
}

/// Whether `Σ c_j·t^j = 0` holds after localizing at `p`.
///
/// The combination is attached as an extra generator `g` with the row
/// `lhs − g`; the least multiple of `g` in the enlarged span is the order of
/// `lhs` in the presented group.
pub fn check_identity(
    lhs: &BTreeMap<i64, BigInt>,
    matrix: &RelationMatrix,
    prime: u64,
) -> Result<IdentityOutcome, Error> {
    let lhs: BTreeMap<i64, BigInt> = lhs.iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (*e, c.clone())).collect();
    let width = matrix.columns.len();
    let mut probe_row = vec![BigInt::zero(); width + 1];
    for (e, c) in &lhs {
        let idx = matrix
            .column_index(Column::T(*e))
            .ok_or(Error::OutsideWindow { provenance: String::from("identity"), exponent: *e })?;
        probe_row[idx] = c.clone();
    }
    if lhs.is_empty() {
        return Ok(IdentityOutcome {
            holds: true,
            multiple: Multiple::Finite(BigInt::one()),
            certificate: Some(Certificate { m: BigInt::one(), combination: BTreeMap::new(), claim: lhs }),
        });
    }
    probe_row[width] = -BigInt::one();
    let mut rows: Vec<Vec<BigInt>> = matrix
        .rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.push(BigInt::zero());
            r
        })
        .collect();
    let nrows = rows.len();
    rows.push(probe_row);
    let order: Vec<usize> = matrix.elimination_order(None).into_iter().chain([width]).collect();
    let echelon = echelonize(&rows, &order, Options { track: true, reduce_above: false });
    let red = Reduction { echelon, last: width };
    let multiple = red.multiple();
    let holds = multiple.is_unit_at(prime);
    let certificate = if holds {
        red.witness().map(|(d, u)| {
            let combination = scaled_combination(&BigInt::one(), &u[..nrows]);
            Certificate { m: d.clone(), combination, claim: lhs.clone() }
        })
    } else {
        None
    };
    Ok(IdentityOutcome { holds, multiple, certificate })
}
