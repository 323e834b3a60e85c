//! Exact rank and kernel of rational matrices.
//!
//! The main path scales every row to integers and runs Bareiss fraction-free
//! elimination with deterministic pivoting (first nonzero entry, top to
//! bottom). An independent second path permutes rows and columns at random
//! and runs ordinary Gaussian elimination over `Q`; the two must agree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rational>>,
}

/// Outcome of the fraction-free path: rank, pivot columns, and a kernel basis
/// of primitive integer vectors (first nonzero entry positive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub kernel: Vec<Vec<BigInt>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        RationalMatrix {
            rows: rows.len(),
            cols,
            entries: rows,
        }
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has the wrong length");
            for (i, x) in col.iter().enumerate() {
                m.entries[i][j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i][j] = v;
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|row| {
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }

    /// Bareiss elimination to row echelon form.
    pub fn eliminate(&self) -> Elimination {
        let mut a = self.integer_rows();
        let (m, n) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..m {
                for j in c + 1..n {
                    let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        let kernel = kernel_from_echelon(&a[..rank], &pivots, n);
        Elimination {
            rank,
            pivots,
            kernel,
        }
    }

    pub fn rank(&self) -> usize {
        self.eliminate().rank
    }

    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        self.eliminate().kernel
    }

    /// Rank by plain Gaussian elimination after a seeded random permutation
    /// of rows and columns.
    pub fn rank_permuted(&self, seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rp: Vec<usize> = (0..self.rows).collect();
        let mut cp: Vec<usize> = (0..self.cols).collect();
        rp.shuffle(&mut rng);
        cp.shuffle(&mut rng);
        let mut a: Vec<Vec<Rational>> = rp
            .iter()
            .map(|&i| cp.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let inv = a[rank][c].recip();
            for i in rank + 1..self.rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = &a[i][c] * &inv;
                for j in c..self.cols {
                    let t = &f * &a[rank][j];
                    a[i][j] -= t;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<Rational> {
        self.entries
            .iter()
            .map(|row| {
                row.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| {
                    acc + x * Rational::from_integer(y.clone())
                })
            })
            .collect()
    }
}

/// Back-substitution on an integer echelon form: one vector per free column.
fn kernel_from_echelon(rows: &[Vec<BigInt>], pivots: &[usize], n: usize) -> Vec<Vec<BigInt>> {
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); n];
            x[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate().rev() {
                let s = (pc + 1..n).fold(Rational::zero(), |acc, j| {
                    acc + Rational::from_integer(rows[r][j].clone()) * &x[j]
                });
                x[pc] = -s / Rational::from_integer(rows[r][pc].clone());
            }
            primitive(&x)
        })
        .collect()
}

/// Scales a rational vector to coprime integers with a positive leading entry.
pub fn primitive(x: &[Rational]) -> Vec<BigInt> {
    let l = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&l / v.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() {
        for v in &mut ints {
            *v /= &g;
        }
    }
    if ints
        .iter()
        .find(|v| !v.is_zero())
        .is_some_and(|v| v.is_negative())
    {
        for v in &mut ints {
            *v = -&*v;
        }
    }
    ints
}
