//! Row echelon and Hermite reduction over the integers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Result of [`echelonize`].
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero reduced rows, in the original column coordinates.
    pub rows: Vec<Vec<BigInt>>,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
    /// `transform[r]` expresses `rows[r]` as a combination of the input rows.
    pub transform: Option<Vec<Vec<BigInt>>>,
}

impl Echelon {
    /// The row whose pivot sits in `column`, if any.
    pub fn pivot_row(&self, column: usize) -> Option<usize> {
        self.pivots.iter().position(|&c| c == column)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    /// Record the unimodular transform.
    pub track: bool,
    /// Reduce entries above each pivot into `[0, pivot)`.
    pub reduce_above: bool,
}

/// Echelonizes `rows`, visiting columns in `order` (columns not listed are
/// never used as pivots). Pivots are positive.
pub fn echelonize(rows: &[Vec<BigInt>], order: &[usize], options: Options) -> Echelon {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let n = m.len();
    let mut u: Option<Vec<Vec<BigInt>>> = options.track.then(|| {
        (0..n)
            .map(|i| {
                let mut row = vec![BigInt::zero(); n];
                row[i] = BigInt::one();
                row
            })
            .collect()
    });
    let mut pivots = Vec::new();
    let mut next = 0;
    for &col in order {
        if next == n {
            break;
        }
        loop {
            let best = (next..n)
                .filter(|&r| !m[r][col].is_zero())
                .min_by(|&a, &b| m[a][col].magnitude().cmp(m[b][col].magnitude()));
            let Some(best) = best else { break };
            m.swap(next, best);
            if let Some(u) = u.as_mut() {
                u.swap(next, best);
            }
            let mut clean = true;
            for r in next + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let q = m[r][col].div_floor(&m[next][col]);
                sub_multiple(&mut m, r, next, &q);
                if let Some(u) = u.as_mut() {
                    sub_multiple(u, r, next, &q);
                }
                if !m[r][col].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            if m[next][col].is_negative() {
                negate(&mut m[next]);
                if let Some(u) = u.as_mut() {
                    negate(&mut u[next]);
                }
            }
            if options.reduce_above {
                for r in 0..next {
                    if m[r][col].is_zero() {
                        continue;
                    }
                    let q = m[r][col].div_floor(&m[next][col]);
                    sub_multiple(&mut m, r, next, &q);
                    if let Some(u) = u.as_mut() {
                        sub_multiple(u, r, next, &q);
                    }
                }
            }
            pivots.push(col);
            next += 1;
            break;
        }
    }
    m.truncate(next);
    if let Some(u) = u.as_mut() {
        u.truncate(next);
    }
    Echelon { rows: m, pivots, transform: u }
}

/// `rows[target] -= q·rows[source]`.
fn sub_multiple(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (src, dst) = if source < target {
        let (a, b) = rows.split_at_mut(target);
        (&a[source], &mut b[0])
    } else {
        let (a, b) = rows.split_at_mut(source);
        (&b[0], &mut a[target])
    };
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

fn negate(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = -core::mem::take(x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn transform_reproduces_rows() {
        let input = big(&[&[4, 6, 2], &[6, 9, 3], &[2, -1, 7]]);
        let e = echelonize(&input, &[0, 1, 2], Options { track: true, reduce_above: true });
        let u = e.transform.as_ref().unwrap();
        for (row, coeffs) in e.rows.iter().zip(u) {
            for c in 0..3 {
                let s: BigInt = coeffs.iter().zip(&input).map(|(a, r)| a * &r[c]).sum();
                assert_eq!(s, row[c]);
            }
        }
        assert_eq!(e.pivots, [0, 1]);
    }
}
