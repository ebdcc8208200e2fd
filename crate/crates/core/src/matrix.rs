//! Small dense matrices over a [`Scalar`].

use std::ops::{Index, IndexMut};

use gpm_exact::rat::Rat;

use crate::scalar::{dot, Scalar};

/// Row-major dense matrix. Linear maps use the column convention:
/// column `j` holds the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Builds from rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<S>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Mat { rows: r, cols: c, data: rows.concat() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<S>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    /// Rank-one map `x ↦ (w·x) v`.
    pub fn outer(v: &[S], w: &[S]) -> Self {
        let mut m = Self::zeros(v.len(), w.len());
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                m[(i, j)] = vi.clone() * wj.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols, "vector length does not match matrix");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// Row vector times matrix: the functional `x ↦ w·(Mx)`.
    pub fn pullback(&self, w: &[S]) -> Vec<S> {
        assert_eq!(w.len(), self.rows, "functional length does not match matrix");
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(S::zero(), |acc, i| acc + w[i].clone() * self[(i, j)].clone())
            })
            .collect()
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "incompatible matrix shapes");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] = m[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        m
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| c.clone() * a.clone()).collect(),
        }
    }

    /// Largest absolute entry; the map norm used for interference verdicts.
    pub fn max_abs(&self) -> S {
        crate::scalar::max_abs(&self.data)
    }

    pub fn near(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.near(b))
    }

    pub fn near_zero(&self) -> bool {
        self.data.iter().all(Scalar::near_zero)
    }

    pub fn to_f64(&self) -> Mat<f64> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::to_f64).collect(),
        }
    }
}

impl Mat<Rat> {
    /// Rounds every entry to the nearest fraction with denominator at most
    /// `max_den`, provided each lies within `TOL` of it.
    pub fn rationalize(m: &Mat<f64>, max_den: i64) -> Option<Self> {
        let data = m
            .data
            .iter()
            .map(|&x| rationalize(x, max_den))
            .collect::<Option<Vec<_>>>()?;
        Some(Mat { rows: m.rows, cols: m.cols, data })
    }
}

pub fn rationalize(x: f64, max_den: i64) -> Option<Rat> {
    (1..=max_den).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() <= crate::scalar::TOL)
            .then(|| Rat::new((p as i64).into(), q.into()))
    })
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gpm_exact::rat::{int, ints};

    #[test]
    fn column_convention() {
        let m = Mat::from_cols(&[ints(&[1, 2]), ints(&[3, 4])]);
        assert_eq!(m.apply(&ints(&[1, 0])), ints(&[1, 2]));
        assert_eq!(m.apply(&ints(&[0, 1])), ints(&[3, 4]));
        assert_eq!(m.pullback(&ints(&[1, 1])), ints(&[3, 7]));
    }

    #[test]
    fn compose_and_outer() {
        let p = Mat::outer(&ints(&[1, 0]), &ints(&[1, 1]));
        assert_eq!(p.compose(&p), p);
        let id = Mat::<Rat>::identity(2);
        assert_eq!(id.compose(&p), p);
        assert_eq!(p.sub(&p).max_abs(), int(0));
    }
}
