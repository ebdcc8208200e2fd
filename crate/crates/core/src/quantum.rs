//! Hermitian matrices in real coordinates.
//!
//! An `n×n` Hermitian `X` has `n²` real coordinates: the diagonal entries
//! `X_ii`, then for each `i < j` the pair `Re X_ij`, `Im X_ij`. The dual
//! coordinates of a density matrix `ρ` are `ρ_ii`, `2 Re ρ_ij`,
//! `2 Im ρ_ij`, so that `tr(ρX)` is the plain dot product.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::Mat;
use crate::scalar::TOL;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

pub fn coord_len(n: usize) -> usize {
    n * n
}

/// Inverse of [`coord_len`], if `len` is a perfect square.
pub fn side_of(len: usize) -> Option<usize> {
    let n = (len as f64).sqrt().round() as usize;
    (n * n == len).then_some(n)
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

pub fn to_coords(x: &CMat) -> Vec<f64> {
    let n = x.nrows();
    let mut c: Vec<f64> = (0..n).map(|i| x[(i, i)].re).collect();
    for (i, j) in pairs(n) {
        let z = (x[(i, j)] + x[(j, i)].conj()) * 0.5;
        c.push(z.re);
        c.push(z.im);
    }
    c
}

pub fn from_coords(n: usize, c: &[f64]) -> CMat {
    assert_eq!(c.len(), n * n, "coordinate length does not match dimension");
    let mut x = CMat::zeros(n, n);
    for i in 0..n {
        x[(i, i)] = C64::new(c[i], 0.0);
    }
    for (k, (i, j)) in pairs(n).enumerate() {
        let z = C64::new(c[n + 2 * k], c[n + 2 * k + 1]);
        x[(i, j)] = z;
        x[(j, i)] = z.conj();
    }
    x
}

/// Dual coordinates of `ρ`, so that `dual · to_coords(X) = tr(ρX)`.
pub fn to_dual(rho: &CMat) -> Vec<f64> {
    let n = rho.nrows();
    let mut c: Vec<f64> = (0..n).map(|i| rho[(i, i)].re).collect();
    for (i, j) in pairs(n) {
        let z = rho[(i, j)] + rho[(j, i)].conj();
        c.push(z.re);
        c.push(z.im);
    }
    c
}

pub fn from_dual(n: usize, c: &[f64]) -> CMat {
    let mut half = c.to_vec();
    for v in half.iter_mut().skip(n) {
        *v *= 0.5;
    }
    from_coords(n, &half)
}

pub fn hermitize(x: &CMat) -> CMat {
    (x + x.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigenvalues in ascending order with matching eigenvector columns.
pub fn eigh(x: &CMat) -> (Vec<f64>, CMat) {
    let eig = hermitize(x).symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_columns(
        &idx.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect::<Vec<_>>(),
    );
    (values, vectors)
}

pub fn min_eigenvalue(x: &CMat) -> f64 {
    eigh(x).0[0]
}

pub fn spectral_norm(x: &CMat) -> f64 {
    eigh(x).0.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn spectral_map(x: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = eigh(x);
    let d = CMat::from_diagonal(&DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| C64::new(f(v), 0.0)),
    ));
    hermitize(&(&vecs * d * vecs.adjoint()))
}

/// Square root of a positive semidefinite matrix; tiny negative
/// eigenvalues from rounding are clipped to zero.
pub fn sqrt_psd(x: &CMat) -> CMat {
    spectral_map(x, |v| v.max(0.0).sqrt())
}

pub fn is_projector(f: &CMat) -> bool {
    (f * f - f).iter().all(|z| z.norm() <= TOL)
}

/// Largest entry modulus.
pub fn max_entry(x: &CMat) -> f64 {
    x.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn projector(v: &DVector<C64>) -> CMat {
    let u = v.normalize();
    &u * u.adjoint()
}

pub fn diag(v: &[f64]) -> CMat {
    CMat::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|&x| C64::new(x, 0.0))))
}

/// Matrix of the real-linear map `X ↦ K X K†` on Hermitian coordinates.
pub fn conjugation_map(k: &CMat) -> Mat<f64> {
    let kd = k.adjoint();
    map_from_fn(k.ncols(), |x| k * x * &kd)
}

/// Matrix of a real-linear map on Hermitian coordinates, evaluated on the
/// coordinate basis.
pub fn map_from_fn(n: usize, f: impl Fn(&CMat) -> CMat) -> Mat<f64> {
    let dim = n * n;
    let cols: Vec<Vec<f64>> = (0..dim)
        .map(|j| {
            let mut e = vec![0.0; dim];
            e[j] = 1.0;
            to_coords(&f(&from_coords(n, &e)))
        })
        .collect();
    Mat::from_cols(&cols)
}

pub fn apply_map(m: &Mat<f64>, x: &CMat) -> CMat {
    from_coords(x.nrows(), &m.apply(&to_coords(x)))
}

pub fn random_unit_vector<R: Rng>(n: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    v.normalize()
}

/// Haar-like random unitary from the QR factors of a complex Gaussian
/// matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DVector::from_iterator(
        n,
        (0..n).map(|i| {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        }),
    );
    q * CMat::from_diagonal(&phases)
}

/// Random rank-`rank` projector in dimension `n`.
pub fn random_projector<R: Rng>(n: usize, rank: usize, rng: &mut R) -> CMat {
    let u = random_unitary(n, rng);
    let cols = u.columns(0, rank);
    hermitize(&(cols * cols.adjoint()))
}

/// Random effect `U diag(λ) U†` with eigenvalues drawn in `[0, 1]`, at
/// least one of them bounded away from `{0, 1}`.
pub fn random_non_projective_effect<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let u = random_unitary(n, rng);
    let mut lambda: Vec<f64> = (0..n)
        .map(|_| match rng.random_range(0..3) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random_range(0.0..1.0),
        })
        .collect();
    let k = rng.random_range(0..n);
    lambda[k] = rng.random_range(0.05..0.95);
    hermitize(&(&u * diag(&lambda) * u.adjoint()))
}

/// Orthonormal basis of the eigenspace of `x` for eigenvalues within
/// `TOL` of `target`.
pub fn eigenspace(x: &CMat, target: f64) -> Vec<DVector<C64>> {
    let (vals, vecs) = eigh(x);
    vals.iter()
        .enumerate()
        .filter(|(_, v)| (*v - target).abs() <= 1e-8)
        .map(|(k, _)| vecs.column(k).into_owned())
        .collect()
}

/// Real-coordinate basis of the Hermitian operators supported on the span
/// of the orthonormal vectors `basis`.
pub fn hermitian_basis_on(basis: &[DVector<C64>]) -> Vec<CMat> {
    let mut out = Vec::new();
    let i = C64::new(0.0, 1.0);
    for (a, u) in basis.iter().enumerate() {
        out.push(u * u.adjoint());
        for v in &basis[a + 1..] {
            out.push(u * v.adjoint() + v * u.adjoint());
            out.push(u * v.adjoint() * i - v * u.adjoint() * i);
        }
    }
    out
}
