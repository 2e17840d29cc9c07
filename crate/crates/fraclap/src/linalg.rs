//! Thin safe wrappers over the LAPACK routines used by the crate:
//! `dsyevd` (symmetric eigendecomposition) and `dposv` (Cholesky solve).
//!
//! Matrices are `ndarray::Array2<f64>` in standard (row-major) layout. All
//! inputs here are symmetric, so the row/column-major mismatch with LAPACK
//! is harmless; for `dsyevd` the eigenvectors come back as *rows* of the
//! returned matrix.

use ndarray::{Array1, Array2};
use std::os::raw::c_int;

use crate::error::{Error, Result};

extern "C" {
    fn dsyevd_(
        jobz: *const u8,
        uplo: *const u8,
        n: *const c_int,
        a: *mut f64,
        lda: *const c_int,
        w: *mut f64,
        work: *mut f64,
        lwork: *const c_int,
        iwork: *mut c_int,
        liwork: *const c_int,
        info: *mut c_int,
    );

    fn dposv_(
        uplo: *const u8,
        n: *const c_int,
        nrhs: *const c_int,
        a: *mut f64,
        lda: *const c_int,
        b: *mut f64,
        ldb: *const c_int,
        info: *mut c_int,
    );
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Returns eigenvalues in ascending order and the matrix whose row `i` is
/// the (orthonormal) eigenvector for eigenvalue `i`.
pub fn sym_eigen(a: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch { expected: n, got: a.ncols() });
    }
    if n == 0 {
        return Err(Error::EigenFailed("empty matrix".into()));
    }
    let mut buf = a
        .as_standard_layout()
        .as_slice()
        .expect("standard layout")
        .to_vec();
    let mut w = vec![0.0f64; n];
    let (jobz, uplo) = (b'V', b'L');
    let nn = n as c_int;
    let mut info: c_int = 0;

    // workspace query
    let (mut wkopt, mut iwkopt) = (0.0f64, 0 as c_int);
    let neg1: c_int = -1;
    unsafe {
        dsyevd_(
            &jobz, &uplo, &nn, buf.as_mut_ptr(), &nn, w.as_mut_ptr(), &mut wkopt, &neg1,
            &mut iwkopt, &neg1, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::EigenFailed(format!("dsyevd workspace query, info={info}")));
    }
    let lwork = wkopt as c_int;
    let liwork = iwkopt;
    let mut work = vec![0.0f64; lwork as usize];
    let mut iwork = vec![0 as c_int; liwork as usize];
    unsafe {
        dsyevd_(
            &jobz, &uplo, &nn, buf.as_mut_ptr(), &nn, w.as_mut_ptr(), work.as_mut_ptr(), &lwork,
            iwork.as_mut_ptr(), &liwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::EigenFailed(format!("dsyevd did not converge, info={info}")));
    }
    // LAPACK fills eigenvectors as columns in column-major order; read as
    // row-major that is one eigenvector per row.
    let vecs = Array2::from_shape_vec((n, n), buf).expect("shape");
    Ok((Array1::from_vec(w), vecs))
}

/// Solve `A X = B` for symmetric positive definite `A` (Cholesky).
///
/// `b` holds one right-hand side per column; the returned array has the
/// corresponding solutions as columns. Fails with [`Error::IndefiniteForm`]
/// when `A` is not positive definite.
pub fn cholesky_solve(a: &Array2<f64>, b: &Array2<f64>) -> Result<Array2<f64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch { expected: n, got: a.ncols() });
    }
    if b.nrows() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.nrows() });
    }
    let nrhs = b.ncols();
    let mut abuf = a
        .as_standard_layout()
        .as_slice()
        .expect("standard layout")
        .to_vec();
    // LAPACK wants column-major rhs: transpose in, transpose out.
    let bt = b.t().as_standard_layout().to_owned();
    let mut bbuf = bt.as_slice().expect("standard layout").to_vec();
    let uplo = b'L';
    let nn = n as c_int;
    let nr = nrhs as c_int;
    let mut info: c_int = 0;
    unsafe {
        dposv_(&uplo, &nn, &nr, abuf.as_mut_ptr(), &nn, bbuf.as_mut_ptr(), &nn, &mut info);
    }
    if info > 0 {
        return Err(Error::IndefiniteForm);
    }
    if info < 0 {
        return Err(Error::EigenFailed(format!("dposv argument error, info={info}")));
    }
    let xt = Array2::from_shape_vec((nrhs, n), bbuf).expect("shape");
    Ok(xt.t().to_owned())
}
