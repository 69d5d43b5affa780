//! Integer linear relations among the generators `t^j`.
//!
//! Sources: circle restrictions of representations (one relation per shift
//! `i ≥ 0`), the Adams relations `t^j = k·t^{kj}` for `k` prime to `p`, and
//! `2·t^0 = 0`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::catalog::PrintedRelation;
use crate::character::Character;
use crate::error::Error;

/// `Σ c_j·t^j = 0`, or `Σ c_j·t^j ∈ m·A` when `modulus = m > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    terms: BTreeMap<i64, BigInt>,
    modulus: u64,
    provenance: String,
}

impl Relation {
    /// Collects terms, dropping zero coefficients. Returns `None` if nothing
    /// survives.
    pub fn new<I, C>(terms: I, modulus: u64, provenance: impl Into<String>) -> Option<Relation>
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let terms = collect_terms(terms);
        if terms.is_empty() {
            return None;
        }
        Some(Relation { terms, modulus, provenance: provenance.into() })
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, exponent: i64) -> BigInt {
        self.terms.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.terms.keys().map(|e| e.abs()).max().unwrap_or(0)
    }

    /// `Σ c_j·f(j)`.
    pub fn evaluate(&self, f: impl Fn(i64) -> BigInt) -> BigInt {
        self.terms.iter().map(|(e, c)| c * f(*e)).sum()
    }

    /// Parses the report line format `provenance: c*t^e + … = 0 [mod m]`.
    pub fn parse_line(line: &str) -> Result<Relation, Error> {
        let (provenance, body) = line.rsplit_once(':').ok_or(Error::Parse {
            position: 0,
            message: "expected `provenance: …`".to_string(),
        })?;
        let offset = provenance.len() + 1;
        let (lhs, rhs) = body.split_once('=').ok_or(Error::Parse {
            position: offset,
            message: "expected `= 0`".to_string(),
        })?;
        let rhs_offset = offset + lhs.len() + 1;
        let mut rest = rhs.split_whitespace();
        if rest.next() != Some("0") {
            return Err(Error::Parse { position: rhs_offset, message: "right side must be 0".to_string() });
        }
        let modulus = match (rest.next(), rest.next(), rest.next()) {
            (None, _, _) => 0,
            (Some("mod"), Some(m), None) => m.parse().map_err(|_| Error::Parse {
                position: rhs_offset,
                message: format!("bad modulus `{m}`"),
            })?,
            _ => {
                return Err(Error::Parse {
                    position: rhs_offset,
                    message: "trailing input after `= 0`".to_string(),
                })
            }
        };
        let terms = parse_linear_form(lhs).map_err(|e| e.shifted(offset))?;
        Relation::new(terms, modulus, provenance.trim()).ok_or(Error::Parse {
            position: offset,
            message: "relation has no terms".to_string(),
        })
    }
}

fn collect_terms<I, C>(terms: I) -> BTreeMap<i64, BigInt>
where
    I: IntoIterator<Item = (i64, C)>,
    C: Into<BigInt>,
{
    let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (e, c) in terms {
        *out.entry(e).or_default() += c.into();
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Writes `c1*t^e1 + c2*t^e2 - …` with exponents ascending; `0` when empty.
pub fn format_linear_form(f: &mut fmt::Formatter<'_>, terms: &BTreeMap<i64, BigInt>) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (e, c)) in terms.iter().enumerate() {
        match (i, c.is_negative()) {
            (0, false) => {}
            (0, true) => f.write_str("-")?,
            (_, false) => f.write_str(" + ")?,
            (_, true) => f.write_str(" - ")?,
        }
        write!(f, "{}*t^{}", c.abs(), e)?;
    }
    Ok(())
}

/// Display adapter for a sparse combination of generators.
pub struct LinearForm<'a>(pub &'a BTreeMap<i64, BigInt>);

impl fmt::Display for LinearForm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_linear_form(f, self.0)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.provenance)?;
        format_linear_form(f, &self.terms)?;
        f.write_str(" = 0")?;
        if self.modulus > 0 {
            write!(f, " mod {}", self.modulus)?;
        }
        Ok(())
    }
}

impl Error {
    fn shifted(self, by: usize) -> Error {
        match self {
            Error::Parse { position, message } => Error::Parse { position: position + by, message },
            other => other,
        }
    }
}

/// Parses `c*t^e ± c*t^e ± …`. Atoms are `t^e`, `t^{e}` or `t` (meaning
/// `t^1`), optionally preceded by `c*`; a bare integer `c` stands for
/// `c*t^0`, so `0` is the empty form.
pub fn parse_linear_form(input: &str) -> Result<BTreeMap<i64, BigInt>, Error> {
    let mut parser = FormParser { src: input.as_bytes(), pos: 0 };
    let mut terms = Vec::new();
    parser.skip_ws();
    let mut sign = BigInt::one();
    if parser.eat(b'-') {
        sign = -sign;
    } else {
        parser.eat(b'+');
    }
    loop {
        let (e, c) = parser.term()?;
        terms.push((e, c * &sign));
        parser.skip_ws();
        if parser.at_end() {
            break;
        }
        sign = match parser.peek() {
            Some(b'+') => BigInt::one(),
            Some(b'-') => -BigInt::one(),
            _ => return Err(parser.error("expected `+` or `-`")),
        };
        parser.pos += 1;
    }
    Ok(collect_terms(terms))
}

/// Parses `lhs = rhs` into the single form `lhs - rhs`.
pub fn parse_identity(input: &str) -> Result<BTreeMap<i64, BigInt>, Error> {
    let (lhs, rhs) = input.split_once('=').ok_or(Error::Parse {
        position: input.len(),
        message: "expected `=`".to_string(),
    })?;
    let left = parse_linear_form(lhs)?;
    let right = parse_linear_form(rhs).map_err(|e| e.shifted(lhs.len() + 1))?;
    let combined = left.into_iter().chain(right.into_iter().map(|(e, c)| (e, -c)));
    Ok(collect_terms(combined))
}

struct FormParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl FormParser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            core::str::from_utf8(&self.src[start..self.pos]).ok().map(String::from)
        }
    }

    fn signed_integer(&mut self) -> Result<i64, Error> {
        self.skip_ws();
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let digits = self.digits().ok_or_else(|| self.error("expected an integer exponent"))?;
        let value: i64 = digits.parse().map_err(|_| self.error("exponent out of range"))?;
        Ok(if negative { -value } else { value })
    }

    fn atom(&mut self) -> Result<i64, Error> {
        if !self.eat(b't') {
            return Err(self.error("expected `t`"));
        }
        if !self.eat(b'^') {
            return Ok(1);
        }
        if self.eat(b'{') {
            let e = self.signed_integer()?;
            if !self.eat(b'}') {
                return Err(self.error("expected `}`"));
            }
            Ok(e)
        } else {
            self.signed_integer()
        }
    }

    fn term(&mut self) -> Result<(i64, BigInt), Error> {
        self.skip_ws();
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let digits = self.digits().unwrap_or_default();
                let coeff: BigInt = digits.parse().map_err(|_| self.error("bad coefficient"))?;
                if self.eat(b'*') {
                    Ok((self.atom()?, coeff))
                } else {
                    Ok((0, coeff))
                }
            }
            Some(b't') => Ok((self.atom()?, BigInt::one())),
            Some(_) => Err(self.error("expected a coefficient or `t`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Generators `t^j` with `|j| ≤ bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorWindow {
    pub bound: u32,
}

impl GeneratorWindow {
    pub fn new(bound: u32) -> Self {
        GeneratorWindow { bound }
    }

    pub fn contains(&self, exponent: i64) -> bool {
        exponent.unsigned_abs() <= u64::from(self.bound)
    }

    pub fn admits(&self, relation: &Relation) -> bool {
        relation.terms.keys().all(|e| self.contains(*e))
    }

    /// Keeps the relations that fit and counts the ones that did not.
    pub fn retain(&self, relations: Vec<Relation>) -> (Vec<Relation>, usize) {
        let before = relations.len();
        let kept: Vec<Relation> = relations.into_iter().filter(|r| self.admits(r)).collect();
        let dropped = before - kept.len();
        (kept, dropped)
    }

    pub fn exponents(&self) -> impl Iterator<Item = i64> {
        let b = i64::from(self.bound);
        -b..=b
    }
}

/// One relation per shift `i = 0..=i_max`:
/// `Σ_{k≠0} a_k·t^{k+i} − (Σ_{k≠0} a_k)·t^i`.
///
/// Zero weights contribute equally to both sides and are left out.
pub fn restriction_relations(
    character: &Character,
    i_max: u32,
    label: &str,
) -> Result<Vec<Relation>, Error> {
    if let Some(exponent) = character.first_negative() {
        return Err(Error::NegativeCoefficient { exponent });
    }
    let mut weights = Vec::new();
    let mut total = BigInt::zero();
    for (e, a) in character.terms() {
        let k = e.to_integer().ok_or(Error::HalfIntegerExponent { exponent: e })?;
        if k != 0 {
            weights.push((k, a.clone()));
            total += a;
        }
    }
    let mut out = Vec::new();
    for i in 0..=i64::from(i_max) {
        let terms = weights
            .iter()
            .map(|(k, a)| (k + i, a.clone()))
            .chain(core::iter::once((i, -total.clone())));
        if let Some(r) = Relation::new(terms, 0, format!("{label}_{i}")) {
            out.push(r);
        }
    }
    Ok(out)
}

/// Default Adams multipliers: `{−1, 3, 5, 7}` at 2, `{−1, 2, 4, 5}` at 3,
/// and `−1` with the three smallest integers above 1 prime to `p` otherwise.
pub fn default_adams_multipliers(prime: u64) -> Vec<i64> {
    match prime {
        2 => vec![-1, 3, 5, 7],
        3 => vec![-1, 2, 4, 5],
        p => {
            let mut ks = vec![-1];
            ks.extend((2..).filter(|k: &i64| k.unsigned_abs().gcd(&p) == 1).take(3));
            ks
        }
    }
}

/// `t^j − k·t^{kj}` for each `k` and each `j ≠ 0` with `j` and `kj` in the
/// window. For `k = −1` only `j > 0` is generated since `j` and `−j` give the
/// same relation.
pub fn adams_relations(
    prime: u64,
    window: GeneratorWindow,
    k_set: &[i64],
) -> Result<Vec<Relation>, Error> {
    for &k in k_set {
        if k == 0 || k.unsigned_abs().gcd(&prime) != 1 {
            return Err(Error::NotCoprime { k, prime });
        }
    }
    let mut out = Vec::new();
    for &k in k_set {
        if k == 1 {
            continue;
        }
        for j in window.exponents() {
            if j == 0 || (k == -1 && j < 0) {
                continue;
            }
            let Some(kj) = k.checked_mul(j).filter(|kj| window.contains(*kj)) else {
                continue;
            };
            let provenance = format!("Adams(p={prime},k={k},j={j})");
            if let Some(r) = Relation::new([(j, BigInt::one()), (kj, BigInt::from(-k))], 0, provenance) {
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// `2·t^0 = 0`.
pub fn base_relations() -> Vec<Relation> {
    vec![Relation::new([(0, 2)], 0, "base 2*1=0").expect("nonempty")]
}

/// Relabels `t^{d·j}` as `t^j`.
pub fn rescale_exponents(relations: &[Relation], divisor: u32) -> Result<Vec<Relation>, Error> {
    let d = i64::from(divisor);
    if d == 0 {
        return Err(Error::InvalidCase {
            path: "exponent_divisor".to_string(),
            message: "divisor must be positive".to_string(),
        });
    }
    relations
        .iter()
        .map(|r| {
            let mut terms = BTreeMap::new();
            for (e, c) in &r.terms {
                if e % d != 0 {
                    return Err(Error::IndivisibleRelation {
                        provenance: r.provenance.clone(),
                        exponent: *e,
                        divisor,
                    });
                }
                terms.insert(e / d, c.clone());
            }
            Ok(Relation { terms, modulus: r.modulus, provenance: r.provenance.clone() })
        })
        .collect()
}

/// Instantiates a printed display at shifts `i = 0..=i_max`.
pub fn from_printed(printed: &PrintedRelation, i_max: u32) -> Vec<Relation> {
    from_printed_with_step(printed, i_max, 1)
}

/// As [`from_printed`], but with shifts `step·i`; used for displays written in
/// the form `…t^{e+2i}…=…t^{2i}` before relabeling.
pub fn from_printed_with_step(printed: &PrintedRelation, i_max: u32, step: u32) -> Vec<Relation> {
    let pattern = printed.expanded_terms();
    let step = i64::from(step);
    (0..=i64::from(i_max))
        .filter_map(|i| {
            let s = step * i;
            let terms = pattern
                .iter()
                .map(|(e, c)| (e + s, c.clone()))
                .chain(core::iter::once((s, -printed.rhs.clone())));
            Relation::new(terms, printed.modulus, format!("{}_{}", printed.source, s))
        })
        .collect()
}
