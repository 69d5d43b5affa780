//! Integer Laurent polynomials in the circle generator `γ`.
//!
//! A [`Character`] records the weights of a representation restricted to a
//! circle subgroup: the coefficient at exponent `e` is the multiplicity of
//! `γ^e`. Exponents are [`HalfInt`]s so that spinor weights are exact.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::halfint::HalfInt;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Character {
    coeffs: BTreeMap<HalfInt, BigInt>,
}

/// Which part of the spin representation to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Full,
    /// Even number of minus signs.
    Plus,
    /// Odd number of minus signs.
    Minus,
}

impl Character {
    pub fn zero() -> Self {
        Character::default()
    }

    /// The trivial one-dimensional character `γ^0`.
    pub fn one() -> Self {
        Character::monomial(HalfInt::ZERO, BigInt::one())
    }

    pub fn monomial(exponent: HalfInt, coeff: impl Into<BigInt>) -> Self {
        let mut c = Character::zero();
        c.add_term(exponent, coeff.into());
        c
    }

    /// `n·γ^0`.
    pub fn trivial(n: u64) -> Self {
        Character::monomial(HalfInt::ZERO, n)
    }

    /// One monomial per weight, with multiplicity.
    pub fn from_weights<I: IntoIterator<Item = HalfInt>>(weights: I) -> Self {
        let mut c = Character::zero();
        for w in weights {
            c.add_term(w, BigInt::one());
        }
        c
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (HalfInt, C)>,
        C: Into<BigInt>,
    {
        let mut c = Character::zero();
        for (e, a) in terms {
            c.add_term(e, a.into());
        }
        c
    }

    fn add_term(&mut self, exponent: HalfInt, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exponent).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exponent: HalfInt) -> BigInt {
        self.coeffs.get(&exponent).cloned().unwrap_or_default()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (HalfInt, &BigInt)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum of the coefficients.
    pub fn dim(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// The first exponent with a negative coefficient, if any.
    pub fn first_negative(&self) -> Option<HalfInt> {
        self.coeffs.iter().find(|(_, c)| c.is_negative()).map(|(e, _)| *e)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.first_negative().is_none()
    }

    pub fn add(&self, other: &Character) -> Character {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &BigInt) -> Character {
        if factor.is_zero() {
            return Character::zero();
        }
        Character {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * factor)).collect(),
        }
    }

    pub fn mul(&self, other: &Character) -> Character {
        let mut out = Character::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                out.add_term(*ea + *eb, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Character {
        (0..n).fold(Character::one(), |acc, _| acc.mul(self))
    }

    /// `γ ↦ γ^{-1}`.
    pub fn conjugate(&self) -> Character {
        Character {
            coeffs: self.coeffs.iter().map(|(e, c)| (-*e, c.clone())).collect(),
        }
    }

    pub fn is_self_conjugate(&self) -> bool {
        self.coeffs.iter().all(|(e, c)| self.coeffs.get(&-*e) == Some(c))
    }

    /// Divide every exponent by `divisor`; fails on the first exponent it
    /// does not divide.
    pub fn divide_exponents(&self, divisor: u32) -> Result<Character, Error> {
        let mut coeffs = BTreeMap::new();
        for (e, c) in &self.coeffs {
            let q = e
                .checked_div(i64::from(divisor))
                .ok_or(Error::IndivisibleWeight { exponent: *e, divisor })?;
            coeffs.insert(q, c.clone());
        }
        Ok(Character { coeffs })
    }

    /// The `j`-th exterior power: the `j`-th elementary symmetric function of
    /// the weight multiset.
    ///
    /// Computed as the `s^j` coefficient of `∏_w (1 + s·γ^w)^{a_w}`, truncated
    /// at degree `j` in `s`. Returns the zero character when `j` exceeds the
    /// dimension.
    pub fn exterior_power(&self, j: u32) -> Result<Character, Error> {
        if let Some(exponent) = self.first_negative() {
            return Err(Error::NegativeCoefficient { exponent });
        }
        let j = j as usize;
        // layers[d] holds the coefficient of s^d.
        let mut layers: Vec<Character> = vec![Character::zero(); j + 1];
        layers[0] = Character::one();
        for (w, mult) in &self.coeffs {
            let mut next = vec![Character::zero(); j + 1];
            let top = usize::try_from(mult).map_or(j, |m| m.min(j));
            for i in 0..=top {
                let factor = binomial(mult.clone(), BigInt::from(i));
                let mut shift = HalfInt::ZERO;
                for _ in 0..i {
                    shift = shift + *w;
                }
                for d in 0..=(j - i) {
                    if layers[d].is_zero() {
                        continue;
                    }
                    for (e, c) in &layers[d].coeffs {
                        next[d + i].add_term(*e + shift, c * &factor);
                    }
                }
            }
            layers = next;
        }
        Ok(layers.swap_remove(j))
    }

    /// The spin character of the torus weights `x`: weights
    /// `(ε_1 x_1 + … + ε_m x_m)/2` over all sign patterns, or only those with
    /// an even (`Plus`) or odd (`Minus`) number of minus signs.
    ///
    /// The `x_i` are integers; the halving is absorbed by the half-unit
    /// exponent encoding.
    pub fn spinor(x: &[i64], parity: Parity) -> Result<Character, Error> {
        if x.is_empty() {
            return Err(Error::EmptySpinor);
        }
        // even/odd count of minus signs so far
        let mut even = Character::one();
        let mut odd = Character::zero();
        for &xi in x {
            let up = Character::monomial(HalfInt::from_halves(xi), 1);
            let down = Character::monomial(HalfInt::from_halves(-xi), 1);
            let next_even = even.mul(&up).add(&odd.mul(&down));
            let next_odd = odd.mul(&up).add(&even.mul(&down));
            even = next_even;
            odd = next_odd;
        }
        Ok(match parity {
            Parity::Full => even.add(&odd),
            Parity::Plus => even,
            Parity::Minus => odd,
        })
    }

    /// The multiset of weights, in ascending order.
    ///
    /// Panics if a coefficient is negative or too large to enumerate; meant
    /// for small characters.
    pub fn weights(&self) -> Vec<HalfInt> {
        let mut out = Vec::new();
        for (e, c) in &self.coeffs {
            let n: usize = c.try_into().expect("weight multiplicity fits in usize");
            out.extend(core::iter::repeat_n(*e, n));
        }
        out
    }
}

impl fmt::Display for Character {
    /// `a γ^e + b γ^f - …`, exponents ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            write!(f, "{} γ^{}", c.abs(), e)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn h(n: i64) -> HalfInt {
        HalfInt::from_int(n)
    }

    fn sym(pairs: &[(i64, i64)]) -> Character {
        let mut c = Character::zero();
        for &(e, a) in pairs {
            c = c.add(&Character::monomial(h(e), a));
            c = c.add(&Character::monomial(h(-e), a));
        }
        c
    }

    #[test]
    fn add_examples() {
        let g = sym(&[(1, 1)]);
        assert_eq!(g.add(&Character::zero()), g);
        assert_eq!(g.add(&g), sym(&[(1, 2)]));
        let a = sym(&[(2, 3)]);
        let b = sym(&[(4, 1)]);
        assert_eq!(a.add(&b), sym(&[(2, 3), (4, 1)]));
        assert_eq!(a.add(&b).dim(), a.dim() + b.dim());
    }

    #[test]
    fn mul_examples() {
        let g = sym(&[(1, 1)]);
        let g2 = sym(&[(2, 1)]);
        let prod = g.pow(3).mul(&g2);
        assert_eq!(prod, sym(&[(5, 1), (3, 3), (1, 4)]));
        assert_eq!(prod.mul(&Character::one()), prod);
        let half = Character::monomial(HalfInt::from_halves(1), 1);
        assert_eq!(half.mul(&half), Character::monomial(h(1), 1));
    }

    #[test]
    fn exterior_power_examples() {
        let sp = sym(&[(1, 1), (2, 1), (3, 1), (6, 1)]);
        assert_eq!(sp.exterior_power(1).unwrap(), sp);
        let expected = sym(&[(1, 2), (2, 1), (3, 2), (4, 2), (5, 2), (7, 1), (8, 1), (9, 1)])
            .add(&Character::trivial(4));
        assert_eq!(sp.exterior_power(2).unwrap(), expected);

        let e7 = Character::from_terms([(h(1), 7), (h(-7), 1)]);
        assert_eq!(
            e7.exterior_power(2).unwrap(),
            Character::from_terms([(h(2), 21), (h(-6), 7)])
        );
        assert_eq!(e7.exterior_power(9).unwrap(), Character::zero());
        assert_eq!(e7.exterior_power(0).unwrap(), Character::one());
        assert_eq!(e7.exterior_power(8).unwrap(), Character::monomial(h(0), 1));
    }

    #[test]
    fn exterior_power_rejects_negative() {
        let c = Character::from_terms([(h(1), 2), (h(3), -1)]);
        assert_eq!(
            c.exterior_power(2),
            Err(Error::NegativeCoefficient { exponent: h(3) })
        );
    }

    #[test]
    fn spinor_examples() {
        let full = Character::spinor(&[2, 2, 2, 4], Parity::Full).unwrap();
        assert_eq!(full, sym(&[(1, 1)]).pow(3).mul(&sym(&[(2, 1)])));
        assert_eq!(Character::spinor(&[2], Parity::Plus).unwrap(), Character::monomial(h(1), 1));
        assert_eq!(Character::spinor(&[2, 2], Parity::Plus).unwrap(), sym(&[(2, 1)]));
        assert_eq!(Character::spinor(&[2, 2], Parity::Minus).unwrap(), Character::trivial(2));
        assert_eq!(Character::spinor(&[], Parity::Full), Err(Error::EmptySpinor));
        let odd = Character::spinor(&[1], Parity::Full).unwrap();
        assert_eq!(odd.to_string(), "1 γ^-1/2 + 1 γ^1/2");
    }

    #[test]
    fn dim_and_conjugate() {
        let f4 = Character::trivial(1)
            .add(&sym(&[(2, 3), (4, 1)]))
            .add(&Character::trivial(1))
            .add(&Character::spinor(&[2, 2, 2, 4], Parity::Full).unwrap());
        assert_eq!(f4.dim(), BigInt::from(26));
        assert_eq!(f4.exterior_power(2).unwrap().dim(), BigInt::from(325));
        assert_eq!(Character::monomial(h(3), 1).conjugate(), Character::monomial(h(-3), 1));
    }

    #[test]
    fn divide_exponents() {
        let c = Character::from_terms([(h(2), 21), (h(-6), 7)]);
        assert_eq!(
            c.divide_exponents(2).unwrap(),
            Character::from_terms([(h(1), 21), (h(-3), 7)])
        );
        let odd = Character::from_terms([(h(3), 1)]);
        assert_eq!(
            odd.divide_exponents(2),
            Err(Error::IndivisibleWeight { exponent: h(3), divisor: 2 })
        );
    }

    #[test]
    fn display_sorted() {
        let c = Character::from_terms([(h(2), 3), (h(-1), -2), (h(0), 1)]);
        assert_eq!(c.to_string(), "-2 γ^-1 + 1 γ^0 + 3 γ^2");
        assert_eq!(Character::zero().to_string(), "0");
    }
}
