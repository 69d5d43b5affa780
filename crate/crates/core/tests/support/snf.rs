//! Smith normal form with both transforms, used as an oracle for the
//! Hermite-based decider. Shares no code with the library.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Mat = Vec<Vec<BigInt>>;

pub struct Smith {
    /// `U·M·V = S`.
    pub u: Mat,
    pub v: Mat,
    pub s: Mat,
    pub rank: usize,
}

pub fn to_big(rows: &[Vec<i64>], ncols: usize) -> Mat {
    rows.iter()
        .map(|r| (0..ncols).map(|j| BigInt::from(*r.get(j).unwrap_or(&0))).collect())
        .collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat, inner: usize, cols: usize) -> Mat {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..inner {
                        acc += &row[k] * &b[k][j];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(m: &Mat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn row_op(m: &mut Mat, target: usize, source: usize, q: &BigInt) {
    let src = m[source].clone();
    for (x, y) in m[target].iter_mut().zip(src) {
        *x -= q * y;
    }
}

fn col_op(m: &mut Mat, target: usize, source: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let y = row[source].clone();
        row[target] -= q * y;
    }
}

fn swap_cols(m: &mut Mat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn negate_row(m: &mut Mat, r: usize) {
    for x in m[r].iter_mut() {
        *x = -x.clone();
    }
}

pub fn smith(m: &Mat, ncols: usize) -> Smith {
    let nrows = m.len();
    let mut s = m.clone();
    let mut u = identity(nrows);
    let mut v = identity(ncols);
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !s[i][j].is_zero() && best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap(t, bi);
        u.swap(t, bi);
        swap_cols(&mut s, t, bj);
        swap_cols(&mut v, t, bj);
        let mut clean = true;
        for i in t + 1..nrows {
            let q = s[i][t].div_floor(&s[t][t]);
            if !q.is_zero() {
                row_op(&mut s, i, t, &q);
                row_op(&mut u, i, t, &q);
            }
            clean &= s[i][t].is_zero();
        }
        for j in t + 1..ncols {
            let q = s[t][j].div_floor(&s[t][t]);
            if !q.is_zero() {
                col_op(&mut s, j, t, &q);
                col_op(&mut v, j, t, &q);
            }
            clean &= s[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // enforce d_t | every later entry
        let offender = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !s[i][j].is_multiple_of(&s[t][t])));
        if let Some(i) = offender {
            let one = -BigInt::one();
            row_op(&mut s, t, i, &one);
            row_op(&mut u, t, i, &one);
            continue;
        }
        if s[t][t].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    Smith { u, v, s, rank: t }
}

impl Smith {
    /// Order of `x` in `Z^n / rowspan(M)`; `None` when infinite.
    pub fn order(&self, x: &[BigInt]) -> Option<BigInt> {
        let y = mat_mul(&vec![x.to_vec()], &self.v, self.v.len(), self.v.len()).remove(0);
        let mut order = BigInt::one();
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            if i >= self.rank {
                return None;
            }
            let d = &self.s[i][i];
            order = order.lcm(&(d / d.gcd(yi)));
        }
        Some(order)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.order(x).is_some_and(|o| o.is_one())
    }

    /// Checks every property the decomposition must have.
    pub fn audit(&self, m: &Mat, ncols: usize) -> Result<(), String> {
        let nrows = m.len();
        let um = mat_mul(&self.u, m, nrows, ncols);
        let umv = mat_mul(&um, &self.v, ncols, ncols);
        if umv != self.s {
            return Err("U·M·V differs from S".into());
        }
        if !bareiss_det(&self.u).abs().is_one() {
            return Err("U is not unimodular".into());
        }
        if !bareiss_det(&self.v).abs().is_one() {
            return Err("V is not unimodular".into());
        }
        for i in 0..nrows {
            for j in 0..ncols {
                if i != j && !self.s[i][j].is_zero() {
                    return Err(format!("S has off-diagonal entry at ({i}, {j})"));
                }
            }
        }
        for i in 0..self.rank {
            if !self.s[i][i].is_positive() {
                return Err(format!("d_{i} is not positive"));
            }
            if i + 1 < self.rank && !self.s[i + 1][i + 1].is_multiple_of(&self.s[i][i]) {
                return Err(format!("d_{i} does not divide d_{}", i + 1));
            }
        }
        for i in self.rank..nrows.min(ncols) {
            if !self.s[i][i].is_zero() {
                return Err(format!("nonzero diagonal past rank at {i}"));
            }
        }
        Ok(())
    }
}

pub fn unit(n: usize, j: usize) -> Vec<BigInt> {
    (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}

/// Deterministic random matrices with at most 6 rows, at most 8 columns and
/// entries in [-5, 5].
pub fn random_matrices(count: usize) -> Vec<(usize, Vec<Vec<i64>>)> {
    use proptest::strategy::{Just, Strategy, ValueTree};
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
    let strategy = (1usize..=8).prop_flat_map(|n| {
        (Just(n), proptest::collection::vec(proptest::collection::vec(-5i64..=5, n), 1..=6))
    });
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    (0..count).map(|_| strategy.new_tree(&mut runner).expect("strategy").current()).collect()
}
