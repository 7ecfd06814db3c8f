//! Thin helpers over `faer` for the dense complex algebra used throughout the crate.

use faer::linalg::matmul::matmul;
use faer::traits::Conjugate;
use faer::{Accum, Mat, MatRef, Par, Side};

use crate::error::{Error, Result};

pub use faer::c64;

/// Dense column-major complex matrix.
pub type CMat = Mat<c64>;

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };

/// `e^{jφ}`.
#[inline]
pub fn cis(phase: f64) -> c64 {
    let (s, c) = phase.sin_cos();
    c64::new(c, s)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    Mat::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMat {
    Mat::identity(n, n)
}

pub fn is_all_zero(a: MatRef<'_, c64>) -> bool {
    (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| a[(i, j)] == ZERO))
}

pub fn frobenius_norm(a: MatRef<'_, c64>) -> f64 {
    a.norm_l2()
}

pub fn trace(a: MatRef<'_, c64>) -> c64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

/// `(A + Aᴴ) / 2`.
pub fn hermitian_part(a: MatRef<'_, c64>) -> CMat {
    assert_eq!(a.nrows(), a.ncols());
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// `‖A − Aᴴ‖_F / ‖A‖_F`, zero for the zero matrix.
pub fn relative_asymmetry(a: MatRef<'_, c64>) -> f64 {
    let norm = frobenius_norm(a);
    if norm == 0.0 {
        return 0.0;
    }
    let diff = Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] - a[(j, i)].conj());
    frobenius_norm(diff.as_ref()) / norm
}

/// `dst ← lhs·rhs` or `dst ← dst + lhs·rhs`; either side may be a conjugated view.
pub fn gemm<L, R>(dst: &mut CMat, accum: Accum, lhs: MatRef<'_, L>, rhs: MatRef<'_, R>)
where
    L: Conjugate<Canonical = c64>,
    R: Conjugate<Canonical = c64>,
{
    matmul(dst.as_mut(), accum, lhs, rhs, ONE, Par::Seq);
}

pub fn product<L, R>(lhs: MatRef<'_, L>, rhs: MatRef<'_, R>) -> CMat
where
    L: Conjugate<Canonical = c64>,
    R: Conjugate<Canonical = c64>,
{
    let mut out = zeros(lhs.nrows(), rhs.ncols());
    gemm(&mut out, Accum::Replace, lhs, rhs);
    out
}

/// Multiplies row `n` of `m` by `scale[n]`.
pub fn scale_rows(m: MatRef<'_, c64>, scale: &[c64]) -> CMat {
    assert_eq!(m.nrows(), scale.len());
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * scale[i])
}

/// Cascaded channel `F₁ + F₃·diag(coeffs)·F₂`.
pub fn cascade(
    f1: MatRef<'_, c64>,
    f2: MatRef<'_, c64>,
    f3: MatRef<'_, c64>,
    coeffs: &[c64],
) -> CMat {
    let mut z = f1.to_owned();
    let scaled = scale_rows(f2, coeffs);
    gemm(&mut z, Accum::Add, f3, scaled.as_ref());
    z
}

/// `log₂ det(A)` for Hermitian positive-definite `A`, read off the Cholesky diagonal.
pub fn log2_det_hpd(a: MatRef<'_, c64>) -> Result<f64> {
    let llt = a
        .llt(Side::Lower)
        .map_err(|e| Error::LinearAlgebra(format!("Cholesky factorization failed: {e:?}")))?;
    let l = llt.L();
    Ok((0..l.nrows()).map(|i| 2.0 * l[(i, i)].re.log2()).sum())
}

/// Solves `A·X = B` for Hermitian positive-definite `A`.
pub fn solve_hpd(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> Result<CMat> {
    use faer::linalg::solvers::Solve;
    let llt = a
        .llt(Side::Lower)
        .map_err(|e| Error::LinearAlgebra(format!("Cholesky factorization failed: {e:?}")))?;
    let mut x = b.to_owned();
    llt.solve_in_place(x.as_mut());
    Ok(x)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix; only the lower triangle is read.
pub fn hermitian_eigen(a: MatRef<'_, c64>) -> Result<(Vec<f64>, CMat)> {
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::LinearAlgebra(format!("eigendecomposition failed: {e:?}")))?;
    let values = evd.S().column_vector().iter().map(|x| x.re).collect();
    Ok((values, evd.U().to_owned()))
}

/// Singular values in non-increasing order.
pub fn singular_values(a: MatRef<'_, c64>) -> Result<Vec<f64>> {
    a.singular_values()
        .map_err(|e| Error::LinearAlgebra(format!("SVD failed: {e:?}")))
}

/// Thin SVD `A = U·diag(s)·Vᴴ`; returns `(s, V)` with `V` of shape `cols × min(rows, cols)`.
pub fn right_singular(a: MatRef<'_, c64>) -> Result<(Vec<f64>, CMat)> {
    let svd = a
        .thin_svd()
        .map_err(|e| Error::LinearAlgebra(format!("SVD failed: {e:?}")))?;
    let s = svd.S().column_vector().iter().map(|x| x.re).collect();
    Ok((s, svd.V().to_owned()))
}

/// `V·diag(d)·Vᴴ` for real weights `d`.
pub fn reassemble(v: MatRef<'_, c64>, weights: &[f64]) -> CMat {
    assert_eq!(v.ncols(), weights.len());
    let scaled = Mat::from_fn(v.nrows(), v.ncols(), |i, k| v[(i, k)] * weights[k]);
    let mut out = zeros(v.nrows(), v.nrows());
    gemm(&mut out, Accum::Replace, scaled.as_ref(), v.adjoint());
    // Kill the roundoff asymmetry so the result is exactly Hermitian.
    hermitian_part(out.as_ref())
}
