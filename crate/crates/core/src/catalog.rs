//! The group cases as data.
//!
//! Each [`CaseSpec`] names a circle subgroup by its weights, a recipe for the
//! restriction of the chosen representation to that circle, the λ-powers to
//! apply, and the relation displays printed for the case so that computed and
//! printed coefficients can be compared.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::character::{Character, Parity};
use crate::error::Error;
use crate::halfint::HalfInt;

/// How to build the restriction of a representation to the circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepRecipe {
    Monomials(Character),
    Trivial(u64),
    Spinor { x: Vec<i64>, parity: Parity },
    Exterior { of: Box<RepRecipe>, j: u32 },
    Sum(Vec<RepRecipe>),
}

impl RepRecipe {
    pub fn exterior(of: RepRecipe, j: u32) -> Self {
        RepRecipe::Exterior { of: Box::new(of), j }
    }

    pub fn resolve(&self) -> Result<Character, Error> {
        self.resolve_at("recipe")
    }

    fn resolve_at(&self, path: &str) -> Result<Character, Error> {
        let at = |e: Error| Error::InvalidCase { path: path.to_string(), message: e.to_string() };
        match self {
            RepRecipe::Monomials(c) => match c.first_negative() {
                Some(exponent) => Err(at(Error::NegativeCoefficient { exponent })),
                None => Ok(c.clone()),
            },
            RepRecipe::Trivial(n) => Ok(Character::trivial(*n)),
            RepRecipe::Spinor { x, parity } => Character::spinor(x, *parity).map_err(at),
            RepRecipe::Exterior { of, j } => {
                let inner = of.resolve_at(&format!("{path}.exterior.of"))?;
                inner.exterior_power(*j).map_err(at)
            }
            RepRecipe::Sum(parts) => {
                let mut total = Character::zero();
                for (i, part) in parts.iter().enumerate() {
                    total = total.add(&part.resolve_at(&format!("{path}.sum[{i}]"))?);
                }
                Ok(total)
            }
        }
    }
}

/// A relation display as printed for a case.
///
/// When every key of `coeffs` is positive the display is symmetric and the
/// mirrored terms `c·t^{-e+i}` are implied; otherwise the terms are taken
/// literally. The display reads `Σ … = rhs·t^i`, or `Σ … ≡ 0 mod modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedRelation {
    pub coeffs: BTreeMap<i64, BigInt>,
    pub rhs: BigInt,
    pub modulus: u64,
    pub source: String,
    /// The λ-power of the representation the display comes from.
    pub lambda: u32,
    /// Exponents already divided by the case's exponent divisor.
    pub prescaled: bool,
}

impl PrintedRelation {
    pub fn symmetric<I, C>(coeffs: I, rhs: i64, modulus: u64, source: &str, lambda: u32) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        PrintedRelation {
            coeffs: coeffs.into_iter().map(|(e, c)| (e, c.into())).collect(),
            rhs: BigInt::from(rhs),
            modulus,
            source: source.to_string(),
            lambda,
            prescaled: false,
        }
    }

    pub fn prescaled(mut self) -> Self {
        self.prescaled = true;
        self
    }

    pub fn is_literal(&self) -> bool {
        self.coeffs.keys().any(|e| *e <= 0)
    }

    /// The left side at shift 0 with the implied mirror terms written out.
    pub fn expanded_terms(&self) -> BTreeMap<i64, BigInt> {
        let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in &self.coeffs {
            *out.entry(*e).or_default() += c;
            if !self.is_literal() {
                *out.entry(-*e).or_default() += c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `Σ coefficients − rhs` for exact displays; a nonzero value means the
    /// display cannot come from a restriction (both sides must have equal
    /// dimension).
    pub fn balance_defect(&self) -> Option<BigInt> {
        if self.modulus != 0 {
            return None;
        }
        let sum: BigInt = self.expanded_terms().values().sum();
        let defect = sum - &self.rhs;
        (!defect.is_zero()).then_some(defect)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseSpec {
    pub name: String,
    /// Display name of the group, shared by cases that prove one group.
    pub group: String,
    pub circle_weights: Vec<HalfInt>,
    pub recipe: RepRecipe,
    pub lambda_powers: Vec<u32>,
    pub primes: Vec<u64>,
    pub exponent_divisor: u32,
    pub printed_relations: Vec<PrintedRelation>,
    pub i_max: u32,
    pub window: u32,
}

pub const DEFAULT_I_MAX: u32 = 16;
pub const DEFAULT_WINDOW: u32 = 64;

fn invalid(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::InvalidCase { path: path.into(), message: message.into() }
}

impl CaseSpec {
    pub fn new(name: &str, circle_weights: &[i64], recipe: RepRecipe) -> Self {
        CaseSpec {
            name: name.to_string(),
            group: name.to_string(),
            circle_weights: circle_weights.iter().map(|&w| HalfInt::from_int(w)).collect(),
            recipe,
            lambda_powers: vec![1],
            primes: vec![2, 3],
            exponent_divisor: 1,
            printed_relations: Vec::new(),
            i_max: DEFAULT_I_MAX,
            window: DEFAULT_WINDOW,
        }
    }

    /// Append `zeros` trivial weights, i.e. pass to a larger rank: the circle
    /// gains zero weights and the representation gains trivial summands.
    pub fn with_extra_zeros(&self, zeros: u64) -> CaseSpec {
        let mut out = self.clone();
        out.circle_weights.extend(core::iter::repeat_n(HalfInt::ZERO, zeros as usize));
        out.recipe = RepRecipe::Sum(vec![self.recipe.clone(), RepRecipe::Trivial(zeros)]);
        out
    }

    /// Checks the structural invariants. Returns non-fatal remarks.
    pub fn validate(&self) -> Result<Vec<String>, Error> {
        let mut remarks = Vec::new();
        if self.name.trim().is_empty() {
            return Err(invalid("name", "must be nonempty"));
        }
        if self.circle_weights.is_empty() {
            return Err(invalid("circle_weights", "must be nonempty"));
        }
        if self.exponent_divisor == 0 {
            return Err(invalid("exponent_divisor", "must be positive"));
        }
        if !self.lambda_powers.contains(&1) {
            return Err(invalid("lambda_powers", "must include 1"));
        }
        if let Some(pos) = self.lambda_powers.iter().position(|&j| j == 0) {
            return Err(invalid(format!("lambda_powers[{pos}]"), "lambda power 0 gives no relations"));
        }
        if self.primes.is_empty() {
            return Err(invalid("primes", "must be nonempty"));
        }
        for (i, &p) in self.primes.iter().enumerate() {
            if !is_prime(p) {
                return Err(invalid(format!("primes[{i}]"), format!("{p} is not prime")));
            }
            if p > 3 {
                remarks.push(format!("prime {p} is outside {{2, 3}}; the class already vanishes at primes p >= 5"));
            }
        }
        if self.i_max == 0 {
            return Err(invalid("i_max", "must be positive"));
        }
        if self.window == 0 {
            return Err(invalid("window", "must be positive"));
        }
        let d = self.exponent_divisor;
        let base = self.recipe.resolve()?;
        let divided = base
            .divide_exponents(d)
            .map_err(|e| invalid("exponent_divisor", e.to_string()))?;
        if let Some((e, _)) = divided.terms().find(|(e, _)| !e.is_integer()) {
            return Err(invalid("recipe", format!("weight {e} is not an integer after division by {d}")));
        }
        let unit = HalfInt::from_int(1);
        let has_unit = self.circle_weights.iter().any(|w| w.abs_eq(unit))
            || (d > 1
                && self.circle_weights.iter().all(|w| w.checked_div(i64::from(d)).is_some())
                && self
                    .circle_weights
                    .iter()
                    .any(|w| w.checked_div(i64::from(d)).is_some_and(|q| q.abs_eq(unit))));
        if !has_unit {
            remarks.push("no circle weight is a unit; t^1 is read in the given exponent scale".to_string());
        }
        for (i, pr) in self.printed_relations.iter().enumerate() {
            let path = format!("printed_relations[{i}]");
            if pr.coeffs.is_empty() {
                return Err(invalid(format!("{path}.coeffs"), "must be nonempty"));
            }
            if pr.lambda == 0 {
                return Err(invalid(format!("{path}.lambda"), "must be positive"));
            }
            if !pr.prescaled && d > 1 {
                if let Some(e) = pr.coeffs.keys().find(|e| *e % i64::from(d) != 0) {
                    return Err(invalid(
                        format!("{path}.coeffs"),
                        format!("exponent divisor {d} does not divide printed exponent {e}"),
                    ));
                }
            }
            if let Some(defect) = pr.balance_defect() {
                remarks.push(format!(
                    "{}: coefficient sum and right side differ by {defect}",
                    pr.source
                ));
            }
        }
        Ok(remarks)
    }
}

impl HalfInt {
    fn abs_eq(self, other: HalfInt) -> bool {
        self == other || self == -other
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Restriction character of `λ^j ρ` in the relabeled exponent scale.
pub fn resolve_character(case: &CaseSpec, lambda_power: u32) -> Result<Character, Error> {
    if !case.lambda_powers.contains(&lambda_power) {
        return Err(Error::LambdaNotDeclared { case: case.name.clone(), lambda: lambda_power });
    }
    let base = case.recipe.resolve()?;
    let powered = if lambda_power > 1 { base.exterior_power(lambda_power)? } else { base };
    powered.divide_exponents(case.exponent_divisor)
}

/// One coefficient where printed and computed displays differ. `exponent`
/// is `None` for the right-side multiplier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientDiff {
    pub exponent: Option<i64>,
    pub printed: BigInt,
    pub computed: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Reproduced,
    Discrepant(Vec<CoefficientDiff>),
    NotCompared(String),
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Reproduced => "REPRODUCED",
            Classification::Discrepant(_) => "DISCREPANT",
            Classification::NotCompared(_) => "NOT_COMPARED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyEntry {
    pub source: String,
    pub lambda: u32,
    /// Whether the printed coefficients sum to the printed right side.
    pub balanced: bool,
    pub classification: Classification,
}

pub type ConsistencyReport = Vec<ConsistencyEntry>;

/// Compares each exact printed display with the display computed from the
/// recipe. Never fails; problems are recorded in the entries.
pub fn consistency_check(case: &CaseSpec) -> ConsistencyReport {
    case.printed_relations
        .iter()
        .map(|pr| ConsistencyEntry {
            source: pr.source.clone(),
            lambda: pr.lambda,
            balanced: pr.balance_defect().is_none(),
            classification: classify(case, pr),
        })
        .collect()
}

fn classify(case: &CaseSpec, pr: &PrintedRelation) -> Classification {
    if pr.modulus != 0 {
        return Classification::NotCompared(format!("congruence modulo {}", pr.modulus));
    }
    let computed = match resolve_character(case, pr.lambda) {
        Ok(c) => c,
        Err(e) => return Classification::NotCompared(e.to_string()),
    };
    let mut computed_terms: BTreeMap<i64, BigInt> = BTreeMap::new();
    let mut computed_rhs = BigInt::zero();
    for (e, c) in computed.terms() {
        let Some(k) = e.to_integer() else {
            return Classification::NotCompared(format!("computed weight {e} is not an integer"));
        };
        if k != 0 {
            computed_terms.insert(k, c.clone());
            computed_rhs += c;
        }
    }
    let d = i64::from(case.exponent_divisor);
    let mut printed_terms: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (e, c) in pr.expanded_terms() {
        let e = if pr.prescaled || d == 1 {
            e
        } else if e % d == 0 {
            e / d
        } else {
            return Classification::NotCompared(format!("printed exponent {e} not divisible by {d}"));
        };
        *printed_terms.entry(e).or_default() += c;
    }
    let mut diffs = Vec::new();
    let keys: alloc::collections::BTreeSet<i64> =
        printed_terms.keys().chain(computed_terms.keys()).copied().collect();
    for k in keys {
        let p = printed_terms.get(&k).cloned().unwrap_or_default();
        let c = computed_terms.get(&k).cloned().unwrap_or_default();
        if p != c {
            diffs.push(CoefficientDiff { exponent: Some(k), printed: p, computed: c });
        }
    }
    if pr.rhs != computed_rhs {
        diffs.push(CoefficientDiff { exponent: None, printed: pr.rhs.clone(), computed: computed_rhs });
    }
    if diffs.is_empty() {
        Classification::Reproduced
    } else {
        Classification::Discrepant(diffs)
    }
}

fn symmetric_weights(pairs: &[(i64, u64)]) -> Character {
    Character::from_terms(
        pairs
            .iter()
            .flat_map(|&(e, a)| [(HalfInt::from_int(e), a), (HalfInt::from_int(-e), a)]),
    )
}

fn monomials_of(weights: &[i64]) -> RepRecipe {
    RepRecipe::Monomials(Character::from_weights(weights.iter().map(|&w| HalfInt::from_int(w))))
}

fn classical_displays(owner: &str) -> Vec<PrintedRelation> {
    vec![
        PrintedRelation::symmetric([(1, 1), (2, 1), (3, 1), (6, 1)], 8, 0, &format!("{owner} printed rho"), 1),
        PrintedRelation::symmetric(
            [(1, 2), (2, 1), (3, 2), (4, 2), (5, 2), (7, 1), (8, 1), (9, 1)],
            24,
            0,
            &format!("{owner} printed lambda^2 rho"),
            2,
        ),
    ]
}

fn f4_recipe() -> RepRecipe {
    // 1 + λ^1 + Δ on Spin(9) with torus (2, 2, 2, 4)
    RepRecipe::Sum(vec![
        RepRecipe::Trivial(1),
        RepRecipe::Monomials(symmetric_weights(&[(2, 3), (4, 1)]).add(&Character::trivial(1))),
        RepRecipe::Spinor { x: vec![2, 2, 2, 4], parity: Parity::Full },
    ])
}

fn f4_displays() -> Vec<PrintedRelation> {
    vec![
        PrintedRelation::symmetric([(1, 4), (2, 3), (3, 3), (4, 1), (5, 1)], 24, 0, "F4 printed rho", 1),
        PrintedRelation::symmetric(
            [(1, 25), (2, 24), (3, 19), (4, 19), (5, 13), (6, 10), (7, 6), (8, 3), (9, 1)],
            240,
            0,
            "F4 printed lambda^2 rho",
            2,
        ),
    ]
}

/// The built-in cases in proof order: classical groups first, then the
/// exceptional ones. E8 uses a different circle at each prime and so
/// appears as two cases.
pub fn builtin_cases() -> Vec<CaseSpec> {
    let classical_weights = [1, -1, 2, -2, 3, -3, -6, 6];

    let mut sp = CaseSpec::new("Sp", &[1, 2, 3, -6], monomials_of(&classical_weights));
    sp.group = "Sp(4)".to_string();
    sp.lambda_powers = vec![1, 2];
    sp.printed_relations = classical_displays("Sp");

    let mut su = CaseSpec::new("SU", &classical_weights, monomials_of(&classical_weights));
    su.group = "SU(8)".to_string();
    su.lambda_powers = vec![1, 2];
    su.printed_relations = classical_displays("Sp");

    let mut so = su.clone();
    so.name = "SO".to_string();
    so.group = "SO(8)".to_string();

    let spin_weights = [2, -2, 2, -2, 4, -4, 6, -6];
    let mut spin = CaseSpec::new("Spin", &spin_weights, monomials_of(&spin_weights));
    spin.group = "Spin(8)".to_string();
    spin.lambda_powers = vec![1, 4];
    spin.printed_relations = vec![
        PrintedRelation::symmetric([(2, 2), (4, 1), (6, 1)], 8, 0, "Spin printed rho", 1),
        PrintedRelation::symmetric(
            [(2, 1), (4, 2), (6, 5), (8, 4), (10, 4), (14, 1)],
            34,
            0,
            "Spin printed lambda^4 rho",
            4,
        ),
    ];

    let mut f4 = CaseSpec::new("F4", &[2, -2, 2, -2, 2, -2, 4, -4, 0], f4_recipe());
    f4.lambda_powers = vec![1, 2];
    f4.printed_relations = f4_displays();

    let mut e6 = f4.clone();
    e6.name = "E6".to_string();
    e6.group = "E6".to_string();
    e6.recipe = RepRecipe::Sum(vec![RepRecipe::Trivial(1), f4_recipe()]);
    e6.printed_relations = f4_displays();

    // λ^2 + λ^4 of the standard representation of SU(8) on S(1, …, 1, -7)
    let su8 = RepRecipe::Monomials(Character::from_terms([
        (HalfInt::from_int(1), 7u32),
        (HalfInt::from_int(-7), 1u32),
    ]));
    let mut e7 = CaseSpec::new(
        "E7",
        &[1, 1, 1, 1, 1, 1, 1, -7],
        RepRecipe::Sum(vec![RepRecipe::exterior(su8.clone(), 2), RepRecipe::exterior(su8, 4)]),
    );
    e7.lambda_powers = vec![1, 3];
    e7.exponent_divisor = 2;
    e7.printed_relations = vec![
        PrintedRelation::symmetric([(1, 21), (3, 7)], 52, 0, "E7 printed rho", 1).prescaled(),
        // duplicated ±1 terms of the display merged: 3+6 and 6+3
        PrintedRelation::symmetric([(1, 9), (3, 1), (5, 6), (7, 1), (9, 3)], 0, 8, "E7 printed lambda^3 rho", 3)
            .prescaled(),
    ];

    // λ^2 of the vector representation of Spin(16) plus Δ^+
    let mut vec16 = vec![6, -6, 0, 0];
    vec16.extend([2, -2].repeat(6));
    let e8_recipe = |vector: &[i64], torus: Vec<i64>| {
        RepRecipe::Sum(vec![
            RepRecipe::exterior(monomials_of(vector), 2),
            RepRecipe::Spinor { x: torus, parity: Parity::Plus },
        ])
    };
    let mut circle2 = [2, -2].repeat(6);
    circle2.extend([6, -6, 0, 0]);
    let mut e8p2 = CaseSpec::new("E8-p2", &circle2, e8_recipe(&vec16, vec![2, 2, 2, 2, 2, 2, 6, 0]));
    e8p2.group = "E8".to_string();
    e8p2.primes = vec![2];
    e8p2.printed_relations = vec![PrintedRelation::symmetric(
        [(1, 21), (2, 12), (3, 21), (4, 21), (5, 15), (6, 2), (7, 6), (8, 6), (9, 1)],
        210,
        0,
        "E8 printed rho (p=2 circle)",
        1,
    )];

    let mut circle3 = [2, -2].repeat(7);
    circle3.extend([-2, 2]);
    let mut e8p3 = CaseSpec::new(
        "E8-p3",
        &circle3,
        e8_recipe(&circle3, vec![2, 2, 2, 2, 2, 2, 2, -2]),
    );
    e8p3.group = "E8".to_string();
    e8p3.primes = vec![3];
    e8p3.exponent_divisor = 2;
    e8p3.printed_relations =
        vec![PrintedRelation::symmetric([(2, 56), (8, 28), (6, 8)], 184, 0, "E8 printed rho (p=3 circle)", 1)];

    vec![sp, su, so, spin, f4, e6, e7, e8p2, e8p3]
}

const CLASSICAL_P2: &[&str] = &[
    "105*t^4 = 916*t^1 + t^0",
    "45*t^4 + 60*t^2 = 76*t^1 + t^0",
    "840*t^4 - 56*t^2 = 176*t^1",
    "16*t^1 = 0",
    "t^4 = 4*t^1 + t^0",
    "16*t^2 = 0",
    "4*t^2 + 8*t^1 = 0",
    "t^8 = 8*t^1 + t^0",
    "t^1 = 0",
];
const CLASSICAL_P3: &[&str] = &["3*t^1 = 0", "t^3 = 0", "t^9 = 0", "t^1 = 0"];
const SPIN_P2: &[&str] = &["8*t^1 = 0", "t^1 = 0"];
const SPIN_P3: &[&str] = &["t^1 = 0"];
const F4_P2: &[&str] = &[
    "20*t^2 + 30*t^4 = 392*t^1",
    "2590*t^2 - 315*t^4 = 288*t^1",
    "7840*t^4 = 3128*t^1",
    "8*t^1 = 0",
    "32*t^2 = 0",
    "2*t^2 = 5*t^4",
    "8*t^2 = 0",
    "t^4 = 2*t^2",
    "t^8 = 4*t^2 + t^0",
    "4*t^2 = 0",
    "t^8 = t^0",
    "t^1 = 0",
];
const F4_P3: &[&str] = &["3*t^1 = 0", "t^3 = 0", "t^9 = 0", "t^1 = 0"];
// in the relabeled generators
const E7_P2: &[&str] = &[
    "16*t^1 = 0",
    "8*t^2 = 0",
    "t^4 + 2*t^2 = 8*t^1 + t^0",
    "4*t^1 = 0",
    "t^4 + 2*t^2 = t^0",
    "t^8 = 4*t^2 + t^0",
    "t^0 = 0",
    "t^1 = t^0",
    "t^1 = 0",
];
const E7_P3: &[&str] = &["t^1 = 0"];
const E8_P2: &[&str] = &[
    "327142432*t^2 = 2663328426*t^1",
    "993399799492*t^2 = 418435814148*t^1",
    "2*t^1 = 0",
    "4*t^2 = 0",
    "2*t^4 = 0",
    "t^8 = 0",
    "t^16 = 2*t^2 + t^0",
    "t^1 = 0",
];
// in the relabeled generators: t^1 here is the square class t^2
const E8_P3: &[&str] = &["3*t^1 = 0", "t^3 = 0", "t^9 = 0", "t^1 = 0"];

/// Intermediate identities asserted along the hand elimination for a
/// built-in case, in the identity grammar of [`crate::relations::parse_identity`].
pub fn claimed_identities(case: &str, prime: u64) -> &'static [&'static str] {
    match (case, prime) {
        ("Sp" | "SU" | "SO", 2) => CLASSICAL_P2,
        ("Sp" | "SU" | "SO", 3) => CLASSICAL_P3,
        ("Spin", 2) => SPIN_P2,
        ("Spin", 3) => SPIN_P3,
        ("F4" | "E6", 2) => F4_P2,
        ("F4" | "E6", 3) => F4_P3,
        ("E7", 2) => E7_P2,
        ("E7", 3) => E7_P3,
        ("E8-p2", 2) => E8_P2,
        ("E8-p3", 3) => E8_P3,
        _ => &[],
    }
}

/// Looks a case up by name, case-insensitively; `E8` at prime `p` finds
/// `E8-p{p}`.
pub fn find_case<'a>(cases: &'a [CaseSpec], name: &str, prime: Option<u64>) -> Option<&'a CaseSpec> {
    let exact = cases.iter().find(|c| c.name.eq_ignore_ascii_case(name));
    exact.or_else(|| {
        let p = prime?;
        let qualified = format!("{name}-p{p}");
        cases.iter().find(|c| c.name.eq_ignore_ascii_case(&qualified))
    })
}
