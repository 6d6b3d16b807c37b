//! Dense complex linear algebra used across the crate: the matrix
//! exponential, Hermitian spectral calculus, Kronecker products and
//! bipartite partial traces.

use faer::linalg::solvers::Solve;
use faer::{c64, Mat, MatRef, Side};

use crate::error::{Error, Result};

pub(crate) const ZERO: c64 = c64 { re: 0.0, im: 0.0 };

/// Padé(13) coefficients of the scaling-and-squaring matrix exponential.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

pub(crate) fn norm_one(a: MatRef<'_, c64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scaled(a: MatRef<'_, c64>, s: f64) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

fn lin_comb(terms: &[(f64, &Mat<c64>)], n: usize) -> Mat<c64> {
    let mut out = Mat::<c64>::zeros(n, n);
    for (coef, m) in terms {
        for j in 0..n {
            for i in 0..n {
                out[(i, j)] += m[(i, j)] * *coef;
            }
        }
    }
    out
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant (Higham 2005). Backward error is below unit roundoff.
pub fn expm(a: MatRef<'_, c64>) -> Result<Mat<c64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: a.ncols(),
        });
    }
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let norm = norm_one(a);
    if !norm.is_finite() {
        return Err(Error::NumericalFailure("non-finite matrix in expm".into()));
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let a = scaled(a, 0.5f64.powi(squarings as i32));
    let ident = Mat::<c64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &PADE13;

    let inner_u = lin_comb(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], n);
    let outer_u = lin_comb(
        &[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &ident)],
        n,
    );
    let u = &a * &(&(&a6 * &inner_u) + &outer_u);

    let inner_v = lin_comb(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], n);
    let outer_v = lin_comb(
        &[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &ident)],
        n,
    );
    let v = &(&a6 * &inner_v) + &outer_v;

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.partial_piv_lu().solve(&p);
    for _ in 0..squarings {
        r = &r * &r;
    }
    if r.norm_max().is_finite() {
        Ok(r)
    } else {
        Err(Error::NumericalFailure("expm overflow".into()))
    }
}

/// Hermitian part `(m + m†)/2`.
pub fn hermitize(m: MatRef<'_, c64>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

/// Eigenvalues (nondecreasing) of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::NumericalFailure(format!("eigenvalue solver: {e:?}")))
}

/// Eigen-decomposition `m = U diag(λ) U†` of a Hermitian matrix.
pub fn hermitian_eigen(m: MatRef<'_, c64>) -> Result<(Vec<f64>, Mat<c64>)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NumericalFailure(format!("eigen solver: {e:?}")))?;
    let s = evd.S().column_vector();
    let vals = (0..s.nrows()).map(|i| s[i].re).collect();
    Ok((vals, evd.U().to_owned()))
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: MatRef<'_, c64>, f: impl Fn(f64) -> f64) -> Result<Mat<c64>> {
    let (vals, u) = hermitian_eigen(m)?;
    let n = vals.len();
    let fv: Vec<f64> = vals.into_iter().map(f).collect();
    let scaled_u = Mat::from_fn(n, n, |i, j| u[(i, j)] * fv[j]);
    Ok(&scaled_u * u.adjoint())
}

pub fn trace(m: MatRef<'_, c64>) -> c64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// `Tr[a b]` without forming the product.
pub fn trace_product(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> c64 {
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn kron(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> Mat<c64> {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Partial trace of an operator on `C^da ⊗ C^db`; `keep_first` keeps the
/// first factor.
pub fn partial_trace(m: MatRef<'_, c64>, da: usize, db: usize, keep_first: bool) -> Mat<c64> {
    if keep_first {
        Mat::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        })
    } else {
        Mat::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        })
    }
}

/// Trace norm `‖m‖₁` of a Hermitian matrix.
pub fn trace_norm_hermitian(m: MatRef<'_, c64>) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|x| x.abs()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor_expm(a: &Mat<c64>, terms: usize) -> Mat<c64> {
        let n = a.nrows();
        let mut out = Mat::<c64>::identity(n, n);
        let mut term = Mat::<c64>::identity(n, n);
        for k in 1..terms {
            term = scaled((&term * a).as_ref(), 1.0 / k as f64);
            out = &out + &term;
        }
        out
    }

    #[test]
    fn expm_matches_series_on_small_blocks() {
        let a = Mat::<c64>::from_fn(4, 4, |i, j| {
            c64::new(0.3 * (i as f64 - j as f64), 0.1 * ((i * j) as f64).sin())
        });
        let e = expm(a.as_ref()).unwrap();
        let t = taylor_expm(&a, 60);
        assert!((&e - &t).norm_max() < 1e-13);
    }

    #[test]
    fn expm_large_norm_uses_squaring() {
        // exp of a rotation generator with angle 20 is a rotation matrix
        let theta = 20.0;
        let a = Mat::<c64>::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c64::new(-theta, 0.0),
            (1, 0) => c64::new(theta, 0.0),
            _ => ZERO,
        });
        let e = expm(a.as_ref()).unwrap();
        assert!((e[(0, 0)].re - theta.cos()).abs() < 1e-12);
        assert!((e[(1, 0)].re - theta.sin()).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = Mat::<c64>::from_fn(2, 2, |i, j| c64::new((i + 2 * j) as f64, 0.0));
        let b = Mat::<c64>::from_fn(3, 3, |i, j| if i == j { c64::new(1.0 / 3.0, 0.0) } else { ZERO });
        let ab = kron(a.as_ref(), b.as_ref());
        let ra = partial_trace(ab.as_ref(), 2, 3, true);
        assert!((&ra - &a).norm_max() < 1e-14);
        let rb = partial_trace(ab.as_ref(), 2, 3, false);
        let tr_a = trace(a.as_ref());
        assert!((rb[(1, 1)] - tr_a / 3.0).norm() < 1e-14);
    }
}
