//! Dense Perron–Frobenius routines for small nonnegative matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone)]
pub(crate) struct Perron {
    pub root: f64,
    /// Right eigenvector, max entry 1.
    pub right: DVector<f64>,
    /// Left eigenvector, max entry 1.
    pub left: DVector<f64>,
}

/// Perron root and eigenvectors of an irreducible nonnegative matrix.
///
/// Iterates on `A + cI` (c = largest entry), which is primitive whenever `A`
/// is irreducible, from the uniform vector. Stops when the Collatz–Wielandt
/// bracket `min (Av)_i / v_i <= rho <= max (Av)_i / v_i` is narrower than
/// `tol::POWER_ITERATION` relative and the iterate has settled. If the
/// bracket closes but the vector keeps drifting (near-degenerate spectra)
/// the last iterate is returned once the cap is hit.
pub(crate) fn perron(a: &DMatrix<f64>) -> Result<Perron> {
    let (root, right) = perron_right(a)?;
    let (_, left) = perron_right(&a.transpose())?;
    Ok(Perron { root, right, left })
}

fn perron_right(a: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    let n = a.nrows();
    let shift = a.iter().copied().fold(0.0, f64::max);
    if shift == 0.0 {
        return Err(Error::InvalidInput("Perron root of a zero matrix".into()));
    }
    let mut v = DVector::from_element(n, 1.0);
    let mut bracket_closed_at = None;
    for it in 0..tol::POWER_ITERATION_CAP {
        let mut w = a * &v;
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..n {
            let r = w[i] / v[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        w += &v * shift;
        let scale = w.max();
        w /= scale;
        let drift = (&w - &v).amax();
        v = w;
        if hi - lo <= tol::POWER_ITERATION * hi {
            let root = 0.5 * (lo + hi);
            if drift <= 1e-12 {
                return Ok((root, v));
            }
            let started = *bracket_closed_at.get_or_insert(it);
            if it - started > 100_000 || it + 1 == tol::POWER_ITERATION_CAP {
                return Ok((root, v));
            }
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: tol::POWER_ITERATION_CAP,
        tol: tol::POWER_ITERATION,
    })
}

/// Stationary distribution of a stochastic matrix restricted to an
/// irreducible class: solves `pi P = pi`, `sum pi = 1`.
pub(crate) fn stationary(p: &DMatrix<f64>) -> Result<DVector<f64>> {
    let n = p.nrows();
    let mut m = p.transpose() - DMatrix::identity(n, n);
    for j in 0..n {
        m[(n - 1, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    let pi = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidInput("stationary distribution is not unique".into()))?;
    Ok(pi.map(|x| x.max(0.0)) / pi.map(|x| x.max(0.0)).sum())
}
