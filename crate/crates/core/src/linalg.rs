//! Exact linear algebra over ℚ: fraction-free rank, reduced row echelon form, affine
//! solution sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let n = rows.len();
        Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Rank by Bareiss fraction-free elimination on the row-wise integer scaling.
    pub fn rank_fraction_free(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows).map(|r| integer_row(self.row(r))).collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for r in rank + 1..rows {
                for k in c + 1..cols {
                    let v = (&m[rank][c] * &m[r][k] - &m[r][c] * &m[rank][k]) / &prev;
                    m[r][k] = v;
                }
                m[r][c] = BigInt::zero();
            }
            prev = m[rank][c].clone();
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form over ℚ with the list of pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for k in 0..m.cols {
                    m.data.swap(p * m.cols + k, r * m.cols + k);
                }
            }
            let inv = m.get(r, c).recip();
            for k in c..m.cols {
                let v = m.get(r, k) * &inv;
                m.set(r, k, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for k in c..m.cols {
                    let v = m.get(i, k) - &f * m.get(r, k);
                    m.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Solution set `{ particular + Σ tᵢ·basisᵢ }` of a linear system `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSpace {
    pub particular: Vec<Rational>,
    pub basis: Vec<Vec<Rational>>,
}

impl AffineSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Whether `point` lies in the affine space.
    pub fn contains(&self, point: &[Rational]) -> bool {
        let diff: Vec<Rational> = point.iter().zip(&self.particular).map(|(a, b)| a - b).collect();
        in_span(&self.basis, &diff)
    }

    /// Equality of affine subspaces: `other` lies inside `self` and has the same dimension
    /// (with independent directions).
    pub fn same_as(&self, other: &AffineSpace) -> bool {
        if !self.contains(&other.particular) {
            return false;
        }
        if !other.basis.iter().all(|v| in_span(&self.basis, v)) {
            return false;
        }
        Matrix::from_rows(other.basis.clone()).rank() == self.dimension()
            && other.basis.len() == self.dimension()
    }
}

fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let base = Matrix::from_rows(basis.to_vec());
    let mut with = basis.to_vec();
    with.push(v.to_vec());
    base.rank() == Matrix::from_rows(with).rank()
}

/// Solves `A x = b` exactly. Errors if the system is inconsistent.
pub fn solve_affine(a: &Matrix, b: &[Rational]) -> Result<AffineSpace> {
    assert_eq!(a.rows(), b.len());
    let mut aug = Matrix::zeros(a.rows(), a.cols() + 1);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            aug.set(r, c, a.get(r, c).clone());
        }
        aug.set(r, a.cols(), b[r].clone());
    }
    let (red, pivots) = aug.rref();
    if pivots.last() == Some(&a.cols()) {
        return Err(Error::InconsistentSystem);
    }
    let mut particular = vec![Rational::zero(); a.cols()];
    for (i, &p) in pivots.iter().enumerate() {
        particular[p] = red.get(i, a.cols()).clone();
    }
    Ok(AffineSpace { particular, basis: a.nullspace() })
}

/// Matrix rank of a square rational matrix given as rows (used for bivectors).
pub fn rank_of_rows(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(rows.to_vec()).rank_fraction_free()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn ranks_agree() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank_fraction_free(), 2);
        assert_eq!(a.rank(), 2);
        let b = Matrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(3, 2), int(1)]]);
        assert_eq!(b.rank_fraction_free(), 1);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank_fraction_free(), 0);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).rank_fraction_free(), 2);
    }

    #[test]
    fn affine_solution() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let sol = solve_affine(&a, &[int(2), int(3)]).unwrap();
        assert_eq!(sol.dimension(), 1);
        assert_eq!(a.mul_vec(&sol.particular), vec![int(2), int(3)]);
        for v in &sol.basis {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
        let bad = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve_affine(&bad, &[int(1), int(2)]), Err(Error::InconsistentSystem));
    }

    #[test]
    fn affine_equality() {
        let s = AffineSpace { particular: vec![int(1), int(0)], basis: vec![vec![int(1), int(1)]] };
        let t = AffineSpace { particular: vec![int(2), int(1)], basis: vec![vec![int(-2), int(-2)]] };
        assert!(s.same_as(&t));
        let u = AffineSpace { particular: vec![int(2), int(2)], basis: vec![vec![int(1), int(1)]] };
        assert!(!s.same_as(&u));
    }
}
