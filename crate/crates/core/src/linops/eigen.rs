use crate::tolerances::{HERMITIAN_TOL, PSD_FLOOR};

use super::{operator_norm, LinalgError, Matrix, C64, ZERO};

const MAX_SWEEPS: usize = 64;

/// `M = V diag(values) V*` with eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl EigenDecomposition {
    /// `V f(diag(λ)) V*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let n = self.values.len();
        let v = &self.vectors;
        let scaled = Matrix::from_fn(n, n, |i, j| v[(i, j)] * f(self.values[j]));
        &scaled * &v.adjoint()
    }

    pub fn reassemble(&self) -> Matrix {
        self.map(|x| x)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Unitary 2x2 rotation annihilating the off-diagonal entry `apq` of the
/// Hermitian block `[[app, apq], [conj(apq), aqq]]`.
///
/// Returns `(c, s, e)` describing `G = [[c, s], [-s e, c e]]` with `|e| = 1`;
/// `G* B G` is diagonal.
pub(super) fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64) {
    let g = apq.norm();
    let e = apq.conj() / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, e)
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
///
/// The input must be Hermitian up to `HERMITIAN_TOL · ‖M‖`; the sweeps run on
/// its Hermitian part.
pub fn hermitian_eigendecomposition(m: &Matrix) -> Result<EigenDecomposition, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows(), m.cols()));
    }
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let defect = super::hermitian_defect(m);
    let limit = HERMITIAN_TOL * operator_norm(m);
    if defect > limit {
        return Err(LinalgError::NotHermitian { defect, limit });
    }

    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let (c, s, e) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                rotate(&mut a, &mut v, p, q, c, s, e);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors })
}

fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64, e: C64) {
    let n = a.rows();
    let gqp = -e * s;
    let gqq = e * c;
    // A ← A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * gqp;
        a[(k, q)] = akp * s + akq * gqq;
    }
    // A ← G* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * gqp.conj();
        a[(q, k)] = apk * s + aqk * gqq.conj();
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * gqp;
        v[(k, q)] = vkp * s + vkq * gqq;
    }
}

/// Scalar functions available to the PSD functional calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdFn {
    Sqrt,
    Inv,
    InvSqrt,
}

/// Applies `f` to the spectrum of a Hermitian positive (semi)definite matrix.
///
/// `Sqrt` accepts eigenvalues down to `-PSD_FLOOR` (clamped to zero); `Inv`
/// and `InvSqrt` require every eigenvalue above `PSD_FLOOR`.
pub fn psd_function(m: &Matrix, f: PsdFn) -> Result<Matrix, LinalgError> {
    let eig = hermitian_eigendecomposition(m)?;
    let lowest = eig.min();
    match f {
        PsdFn::Sqrt if lowest < -PSD_FLOOR => Err(LinalgError::NotPositive {
            eigenvalue: lowest,
            floor: 0.0,
        }),
        PsdFn::Inv | PsdFn::InvSqrt if lowest <= PSD_FLOOR => Err(LinalgError::NotPositive {
            eigenvalue: lowest,
            floor: PSD_FLOOR,
        }),
        PsdFn::Sqrt => Ok(eig.map(|x| x.max(0.0).sqrt())),
        PsdFn::Inv => Ok(eig.map(|x| 1.0 / x)),
        PsdFn::InvSqrt => Ok(eig.map(|x| 1.0 / x.sqrt())),
    }
}
