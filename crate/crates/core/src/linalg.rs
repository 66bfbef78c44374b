//! Exact rank computations: GF(2) elimination on bitsets and fraction-free
//! integer elimination with rational dependency certificates.

use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rational = Ratio<i128>;

/// Rank over GF(2) of the given rows.
pub fn gf2_rank(rows: &[FixedBitSet]) -> usize {
    let mut basis: Vec<(usize, FixedBitSet)> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (pivot, b) in &basis {
            if r.contains(*pivot) {
                r.symmetric_difference_with(b);
            }
        }
        if let Some(p) = r.ones().next() {
            // keep the basis fully reduced on pivot columns
            for (_, b) in basis.iter_mut() {
                if b.contains(p) {
                    b.symmetric_difference_with(&r);
                }
            }
            basis.push((p, r));
        }
    }
    basis.len()
}

/// Greedy row basis (earliest independent rows) plus, for every other row,
/// the rational coefficients expressing it over that basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    /// Indices of the basis rows in the input.
    pub basis_rows: Vec<usize>,
    /// `(row index, λ)` for every dependent row, with `row = Σ λ_i · basis_i`.
    pub dependencies: Vec<(usize, Vec<Rational>)>,
}

impl RankCertificate {
    /// Re-multiplies every coefficient list against the basis and compares
    /// with the dependent row exactly.
    pub fn verify(&self, rows: &[Vec<i64>]) -> bool {
        if self.basis_rows.len() != self.rank || self.basis_rows.len() + self.dependencies.len() != rows.len() {
            return false;
        }
        let basis: Vec<Vec<i64>> = self.basis_rows.iter().map(|&i| rows[i].clone()).collect();
        if rank_of(&basis) != self.rank {
            return false;
        }
        self.dependencies.iter().all(|(i, lambda)| {
            lambda.len() == self.rank
                && (0..rows[*i].len()).all(|col| {
                    let s = lambda
                        .iter()
                        .zip(&basis)
                        .fold(Rational::zero(), |acc, (l, b)| acc + *l * Rational::from(b[col] as i128));
                    s == Rational::from(rows[*i][col] as i128)
                })
        })
    }
}

fn primitive(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

/// Reduces `row` against the echelon rows; returns whether it stays nonzero.
fn reduce(echelon: &[(usize, Vec<i128>)], row: &mut [i128]) -> bool {
    for (pc, er) in echelon {
        let b = row[*pc];
        if b == 0 {
            continue;
        }
        let a = er[*pc];
        for (x, y) in row.iter_mut().zip(er) {
            *x = a * *x - b * *y;
        }
        primitive(row);
    }
    row.iter().any(|&x| x != 0)
}

/// Exact rank over the rationals (fraction-free elimination).
pub fn rank_of(rows: &[Vec<i64>]) -> usize {
    let mut echelon: Vec<(usize, Vec<i128>)> = Vec::new();
    for row in rows {
        let mut r: Vec<i128> = row.iter().map(|&x| x as i128).collect();
        if reduce(&echelon, &mut r) {
            let p = r.iter().position(|&x| x != 0).unwrap();
            echelon.push((p, r));
        }
    }
    echelon.len()
}

/// Exact rank with a dependency certificate.
pub fn rank_exact(rows: &[Vec<i64>]) -> RankCertificate {
    let mut echelon: Vec<(usize, Vec<i128>)> = Vec::new();
    let mut basis_rows = Vec::new();
    let mut dependent = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut r: Vec<i128> = row.iter().map(|&x| x as i128).collect();
        if reduce(&echelon, &mut r) {
            let p = r.iter().position(|&x| x != 0).unwrap();
            echelon.push((p, r));
            basis_rows.push(i);
        } else {
            dependent.push(i);
        }
    }
    let rank = basis_rows.len();
    let dependencies = if dependent.is_empty() {
        Vec::new()
    } else {
        let basis: Vec<&Vec<i64>> = basis_rows.iter().map(|&i| &rows[i]).collect();
        let solver = BasisSolver::new(&basis);
        dependent
            .into_iter()
            .map(|i| (i, solver.coefficients(&rows[i])))
            .collect()
    };
    RankCertificate {
        rank,
        basis_rows,
        dependencies,
    }
}

/// RREF of an independent row set with the transform `T` such that `T·B = R`.
struct BasisSolver {
    pivots: Vec<usize>,
    transform: Vec<Vec<Rational>>,
}

impl BasisSolver {
    fn new(basis: &[&Vec<i64>]) -> Self {
        let r = basis.len();
        let cols = basis.first().map_or(0, |b| b.len());
        let mut m: Vec<Vec<Rational>> = basis
            .iter()
            .map(|b| b.iter().map(|&x| Rational::from(x as i128)).collect())
            .collect();
        let mut t: Vec<Vec<Rational>> = (0..r)
            .map(|i| (0..r).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        let mut pivots = Vec::with_capacity(r);
        let mut row = 0;
        for col in 0..cols {
            if row == r {
                break;
            }
            let Some(p) = (row..r).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            t.swap(row, p);
            let inv = m[row][col].recip();
            m[row].iter_mut().for_each(|x| *x *= inv);
            t[row].iter_mut().for_each(|x| *x *= inv);
            for i in 0..r {
                if i != row && !m[i][col].is_zero() {
                    let f = m[i][col];
                    for j in 0..cols {
                        let d = f * m[row][j];
                        m[i][j] -= d;
                    }
                    for j in 0..r {
                        let d = f * t[row][j];
                        t[i][j] -= d;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Self { pivots, transform: t }
    }

    fn coefficients(&self, v: &[i64]) -> Vec<Rational> {
        let r = self.transform.len();
        let mut lambda = alloc::vec![Rational::zero(); r];
        for (k, &pc) in self.pivots.iter().enumerate() {
            let mu = Rational::from(v[pc] as i128);
            if mu.is_zero() {
                continue;
            }
            for j in 0..r {
                lambda[j] += mu * self.transform[k][j];
            }
        }
        lambda
    }
}
