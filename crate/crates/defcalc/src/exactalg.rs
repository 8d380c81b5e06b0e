//! Exact linear algebra over a field, with deterministic pivoting.
//!
//! All ranks, kernels and echelon forms here are computed with exact
//! arithmetic; there is no floating point anywhere in this crate. The
//! matrix type is generic over the scalar, but the only scalar used by
//! the rest of the crate is the arbitrary-precision rational [`Rat`].

use num::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field operations needed by the elimination routines.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
{
}

/// The concrete scalar of the whole crate: reduced arbitrary-precision rationals.
pub type Rat = BigRational;

/// Parse a rational from the `"p/q"` (or `"p"`) serialization.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: num::BigInt = num_str
        .parse()
        .map_err(|_| format!("malformed rational `{s}`"))?;
    let den: num::BigInt = den_str
        .parse()
        .map_err(|_| format!("malformed rational `{s}`"))?;
    if den.is_zero() {
        return Err(format!("malformed rational `{s}`: zero denominator"));
    }
    Ok(Rat::new(num, den))
}

/// Format a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense row-major matrix over a field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

/// The concrete matrix type used throughout the crate.
pub type Mat = Matrix<Rat>;

impl<K: Scalar> Matrix<K> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![K::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &K {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut K {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> Vec<K> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<K> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(r, c).clone() + a.clone() * b.clone();
                    *out.at_mut(r, c) = v;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.clone() + b.clone();
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = -a.clone();
        }
        out
    }

    pub fn apply(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in apply");
        (0..self.rows)
            .map(|r| {
                let mut acc = K::zero();
                for c in 0..self.cols {
                    if !self.at(r, c).is_zero() && !v[c].is_zero() {
                        acc = acc + self.at(r, c).clone() * v[c].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form together with the pivot columns.
    ///
    /// Pivoting is deterministic: the first nonzero entry in column order.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let pivot_row = (row..m.rows).find(|&r| !m.at(r, col).is_zero());
            let pr = match pivot_row {
                Some(pr) => pr,
                None => continue,
            };
            if pr != row {
                for c in 0..m.cols {
                    let tmp = m.at(row, c).clone();
                    *m.at_mut(row, c) = m.at(pr, c).clone();
                    *m.at_mut(pr, c) = tmp;
                }
            }
            let inv = K::one() / m.at(row, col).clone();
            for c in col..m.cols {
                let v = m.at(row, c).clone() * inv.clone();
                *m.at_mut(row, c) = v;
            }
            for r in 0..m.rows {
                if r == row || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for c in col..m.cols {
                    let v = m.at(r, c).clone() - factor.clone() * m.at(row, c).clone();
                    *m.at_mut(r, c) = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the kernel of `self` acting on column vectors.
    pub fn kernel_basis(&self) -> Subspace<K> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = Some(i);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![K::zero(); self.cols];
            vec[free] = K::one();
            for (c, slot) in pivot_set.iter().enumerate() {
                if let Some(row) = slot {
                    vec[c] = -r.at(*row, free).clone();
                }
            }
            basis.push(vec);
        }
        Subspace::from_spanning(self.cols, basis)
    }

    /// Some solution of `self * x = b` (free variables set to zero), or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[K]) -> Option<Vec<K>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = Self::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *aug.at_mut(r, c) = self.at(r, c).clone();
            }
            *aug.at_mut(r, self.cols) = b[r].clone();
        }
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![K::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = red.at(row, self.cols).clone();
        }
        Some(x)
    }

    /// Submatrix given by explicit row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zero(rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                *out.at_mut(ri, ci) = self.at(r, c).clone();
            }
        }
        out
    }

    /// Inverse of a square matrix; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hcat(&Self::identity(n));
        let (red, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(red.select(&rows, &cols))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zero(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(r, c) = self.at(r, c).clone();
            }
            for c in 0..other.cols {
                *out.at_mut(r, self.cols + c) = other.at(r, c).clone();
            }
        }
        out
    }

    /// Block-diagonal concatenation `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(r, c) = self.at(r, c).clone();
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                *out.at_mut(self.rows + r, self.cols + c) = other.at(r, c).clone();
            }
        }
        out
    }
}

/// A linear subspace of `K^ambient`, stored by its unique reduced row
/// echelon basis. Two equal subspaces compare equal componentwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace<K> {
    ambient: usize,
    basis: Matrix<K>,
}

pub type Space = Subspace<Rat>;

impl<K: Scalar> Subspace<K> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zero(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    /// Canonicalize a spanning set into the echelon basis.
    pub fn from_spanning(ambient: usize, vectors: Vec<Vec<K>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_rows(vectors);
        assert_eq!(m.cols(), ambient);
        let (red, pivots) = m.rref();
        let basis = Matrix::from_rows((0..pivots.len()).map(|r| red.row(r)).collect());
        Subspace {
            ambient,
            basis: if pivots.is_empty() {
                Matrix::zero(0, ambient)
            } else {
                basis
            },
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis_rows(&self) -> Vec<Vec<K>> {
        (0..self.basis.rows()).map(|r| self.basis.row(r)).collect()
    }

    pub fn contains(&self, v: &[K]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // Reduce v against the echelon basis.
        let mut v = v.to_vec();
        for r in 0..self.basis.rows() {
            let pivot = (0..self.ambient).find(|&c| !self.basis.at(r, c).is_zero());
            if let Some(p) = pivot {
                if !v[p].is_zero() {
                    let factor = v[p].clone();
                    for c in 0..self.ambient {
                        v[c] = v[c].clone() - factor.clone() * self.basis.at(r, c).clone();
                    }
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    /// Coordinates of `v` in the echelon basis, if it lies in the subspace.
    pub fn coordinates(&self, v: &[K]) -> Option<Vec<K>> {
        let mut v = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.rows());
        for r in 0..self.basis.rows() {
            let pivot = (0..self.ambient).find(|&c| !self.basis.at(r, c).is_zero());
            match pivot {
                Some(p) => {
                    let factor = v[p].clone();
                    coords.push(factor.clone());
                    if !factor.is_zero() {
                        for c in 0..self.ambient {
                            v[c] = v[c].clone() - factor.clone() * self.basis.at(r, c).clone();
                        }
                    }
                }
                None => coords.push(K::zero()),
            }
        }
        if v.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis_rows();
        rows.extend(other.basis_rows());
        Self::from_spanning(self.ambient, rows)
    }

    /// Intersection, computed from the kernel of the stacked coefficient system.
    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(self.ambient);
        }
        // Solve a*B1 - b*B2 = 0 in the coefficients (a, b).
        let b1t = self.basis.transpose();
        let b2t = other.basis.transpose();
        let sys = b1t.hcat(&b2t.neg());
        let ker = sys.kernel_basis();
        let vectors = ker
            .basis_rows()
            .into_iter()
            .map(|coeffs| {
                let a = &coeffs[..self.dim()];
                let mut v = vec![K::zero(); self.ambient];
                for (i, ai) in a.iter().enumerate() {
                    if ai.is_zero() {
                        continue;
                    }
                    for c in 0..self.ambient {
                        v[c] = v[c].clone() + ai.clone() * self.basis.at(i, c).clone();
                    }
                }
                v
            })
            .collect();
        Self::from_spanning(self.ambient, vectors)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis_rows().iter().all(|v| other.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn mat(rows: Vec<Vec<i64>>) -> Mat {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(q).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(Mat::identity(3).rank(), 3);
        assert_eq!(Mat::zero(2, 4).rank(), 0);
    }

    #[test]
    fn rank_hand_reduced() {
        // hand row-reduction: rows 1 and 2 proportional, row 3 independent
        let m = mat(vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_cases() {
        assert_eq!(Mat::identity(2).kernel_basis().dim(), 0);
        assert_eq!(Mat::zero(2, 2).kernel_basis(), Space::full(2));
        let m = mat(vec![vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[q(1), q(-1)]));
    }

    #[test]
    fn solve_cases() {
        let id = Mat::identity(2);
        assert_eq!(id.solve(&[q(3), q(5)]), Some(vec![q(3), q(5)]));
        let z = Mat::zero(2, 2);
        assert_eq!(z.solve(&[q(1), q(0)]), None);
        let m = mat(vec![vec![2]]);
        assert_eq!(m.solve(&[q(3)]), Some(vec![Rat::new(3.into(), 2.into())]));
    }

    #[test]
    fn rank_transpose_and_rank_nullity() {
        let m = mat(vec![vec![1, 2, 3, 0], vec![0, 0, 1, 1], vec![1, 2, 4, 1]]);
        assert_eq!(m.rank(), m.transpose().rank());
        assert_eq!(m.kernel_basis().dim() + m.rank(), m.cols());
    }

    #[test]
    fn canonical_subspace_representation() {
        let a = Space::from_spanning(3, vec![vec![q(1), q(1), q(0)], vec![q(0), q(2), q(2)]]);
        let b = Space::from_spanning(3, vec![vec![q(2), q(4), q(2)], vec![q(1), q(0), q(-1)]]);
        assert_eq!(a, b);
    }

    #[test]
    fn rat_serialization() {
        assert_eq!(parse_rat("3/2").unwrap(), Rat::new(3.into(), 2.into()));
        assert_eq!(parse_rat("-5").unwrap(), q(-5));
        assert!(parse_rat("1/0").is_err());
        assert_eq!(format_rat(&Rat::new(3.into(), 2.into())), "3/2");
        assert_eq!(format_rat(&q(7)), "7");
        assert_eq!(format_rat(&Rat::new((-3).into(), 2.into())), "-3/2");
    }

    #[test]
    fn intersect_and_sum() {
        let a = Space::from_spanning(3, vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let b = Space::from_spanning(3, vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[q(0), q(1), q(0)]));
        assert_eq!(a.sum(&b), Space::full(3));
    }

    #[test]
    fn solve_solution_is_exact() {
        let m = mat(vec![vec![1, 2, 3], vec![0, 1, 1]]);
        let b = vec![q(5), q(2)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
    }
}
