use super::eigen::jacobi_rotation;
use super::{Matrix, C64, ZERO};

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `A = U diag(σ) V*`, σ descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    /// Default cutoff below which singular values count as zero.
    pub fn cutoff(&self) -> f64 {
        let dim = self.u.rows().max(self.v.rows()) as f64;
        dim * f64::EPSILON * self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn rank(&self) -> usize {
        let cut = self.cutoff();
        self.sigma.iter().filter(|&&s| s > cut).count()
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &Matrix) -> Svd {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint());
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    let (m, n) = a.shape();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.col(j)).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { super::ONE } else { ZERO }).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[i].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let (c, s, e) = jacobi_rotation(alpha, beta, gamma);
                apply(&mut cols, i, j, c, s, e);
                apply(&mut vcols, i, j, c, s, e);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| super::norm2(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let u = Matrix::from_fn(m, n, |r, k| {
        let s = norms[order[k]];
        if s > 0.0 {
            cols[order[k]][r] / s
        } else {
            ZERO
        }
    });
    let v = Matrix::from_fn(n, n, |r, k| vcols[order[k]][r]);
    Svd { u, sigma, v }
}

fn apply(cols: &mut [Vec<C64>], i: usize, j: usize, c: f64, s: f64, e: C64) {
    let gji = -e * s;
    let gjj = e * c;
    let (left, right) = cols.split_at_mut(j);
    for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
        let (xi, yj) = (*x, *y);
        *x = xi * c + yj * gji;
        *y = xi * s + yj * gjj;
    }
}

/// Moore-Penrose pseudo-inverse with the default rank cutoff.
pub fn pseudo_inverse(a: &Matrix) -> Matrix {
    let dec = svd(a);
    let cut = dec.cutoff();
    let k = dec.sigma.len();
    let scaled_v = Matrix::from_fn(dec.v.rows(), k, |r, c| {
        let s = dec.sigma[c];
        if s > cut {
            dec.v[(r, c)] / s
        } else {
            ZERO
        }
    });
    &scaled_v * &dec.u.adjoint()
}
