//! Dense symmetric eigendecomposition: Householder reduction to
//! tridiagonal form followed by the implicit-shift QL iteration, the
//! classic EISPACK pair, on flat row-major storage.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Row-major square matrix.
#[derive(Debug, Clone)]
pub struct Mat {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenFailure {
    /// Index of the eigenvalue whose QL iteration stalled.
    pub index: usize,
}

/// Eigenvalues of a symmetric matrix, ascending. Consumes the input as
/// workspace.
pub fn symmetric_eigenvalues(mut a: Mat) -> Result<Vec<f64>, EigenFailure> {
    let n = a.n;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiag(&mut a, &mut d, &mut e, false);
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(d)
}

/// Full decomposition: ascending eigenvalues and the orthogonal matrix
/// whose column `k` is the eigenvector for `values[k]`.
pub fn symmetric_eigen(mut a: Mat) -> Result<(Vec<f64>, Mat), EigenFailure> {
    let n = a.n;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiag(&mut a, &mut d, &mut e, true);
    ql_implicit(&mut d, &mut e, Some(&mut a))?;
    // Sort ascending, permuting the columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap().then(i.cmp(&j)));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Mat::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(d[src]);
        for row in 0..n {
            vectors.set(row, dst, a.at(row, src));
        }
    }
    Ok((values, vectors))
}

// Unrolled dot product; four accumulators so the loop vectorizes despite
// strict FP-addition ordering.
#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let i = 4 * c;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut tail = 0.0;
    for i in 4 * chunks..a.len() {
        tail += a[i] * b[i];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Reduce a symmetric matrix to tridiagonal form by Householder
/// similarity transforms. The full square is kept in sync (both
/// triangles) so every inner kernel runs over contiguous rows. On exit
/// `d` holds the diagonal and `e[1..]` the subdiagonal (`e[0] = 0`). With
/// `accumulate`, `a` carries what the eigenvector recovery in
/// [`ql_implicit`] needs; otherwise its contents become scratch.
fn householder_tridiag(a: &mut Mat, d: &mut [f64], e: &mut [f64], accumulate: bool) {
    let n = a.n;
    if n == 1 {
        d[0] = a.at(0, 0);
        e[0] = 0.0;
        if accumulate {
            a.set(0, 0, 1.0);
        }
        return;
    }
    let mut u = vec![0.0f64; n];
    let mut p = vec![0.0f64; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let row_i = &a.data[i * n..i * n + l + 1];
            let mut scale = 0.0;
            for &v in row_i {
                scale += math::abs(v);
            }
            if scale == 0.0 {
                e[i] = a.at(i, l);
            } else {
                for (k, uk) in u[..=l].iter_mut().enumerate() {
                    let v = row_i[k] / scale;
                    *uk = v;
                    h += v * v;
                }
                let f = u[l];
                let g = if f >= 0.0 { -math::sqrt(h) } else { math::sqrt(h) };
                e[i] = scale * g;
                h -= f * g;
                u[l] = f - g;
                // Row i keeps the Householder vector for accumulation.
                a.data[i * n..i * n + l + 1].copy_from_slice(&u[..=l]);
                if accumulate {
                    for j in 0..=l {
                        a.data[j * n + i] = u[j] / h;
                    }
                }
                // p = A u / h over the leading block, then the rank-two
                // correction A -= q u^T + u q^T with q = p - (p.u / 2h) u.
                for j in 0..=l {
                    let row_j = &a.data[j * n..j * n + l + 1];
                    p[j] = dot(row_j, &u[..=l]) / h;
                }
                let k_corr = dot(&p[..=l], &u[..=l]) / (h + h);
                for j in 0..=l {
                    p[j] -= k_corr * u[j];
                }
                for j in 0..=l {
                    let uj = u[j];
                    let qj = p[j];
                    let row_j = &mut a.data[j * n..j * n + l + 1];
                    for (k, rjk) in row_j.iter_mut().enumerate() {
                        *rjk -= qj * u[k] + uj * p[k];
                    }
                }
            }
        } else {
            e[i] = a.at(i, l);
        }
        d[i] = h;
    }

    e[0] = 0.0;
    if accumulate {
        d[0] = 0.0;
        for i in 0..n {
            if d[i] != 0.0 {
                // Accumulate the transform stored in column i.
                for j in 0..i {
                    let mut g = 0.0;
                    for k in 0..i {
                        g += a.at(i, k) * a.at(k, j);
                    }
                    for k in 0..i {
                        let v = a.at(k, j) - g * a.at(k, i);
                        a.set(k, j, v);
                    }
                }
            }
            d[i] = a.at(i, i);
            a.set(i, i, 1.0);
            for j in 0..i {
                a.set(j, i, 0.0);
                a.set(i, j, 0.0);
            }
        }
    } else {
        for i in 0..n {
            d[i] = a.at(i, i);
        }
    }
}

/// Implicit-shift QL on a tridiagonal matrix; rotates the columns of `z`
/// along when present.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Mat>) -> Result<(), EigenFailure> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = math::abs(d[m]) + math::abs(d[m + 1]);
                if math::abs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(EigenFailure { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = math::hypot(g, 1.0);
            let sign_r = if g >= 0.0 { math::abs(r) } else { -math::abs(r) };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = math::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let n = z.n;
                    for k in 0..n {
                        f = z.at(k, i + 1);
                        z.set(k, i + 1, s * z.at(k, i) + c * f);
                        z.set(k, i, c * z.at(k, i) - s * f);
                    }
                }
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&[f64]]) -> Mat {
        let n = rows.len();
        let mut m = Mat::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[test]
    fn diagonal_matrix() {
        let m = from_rows(&[&[3.0, 0.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, 0.0, 2.0]]);
        let vals = symmetric_eigenvalues(m).unwrap();
        assert_eq!(vals, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two() {
        let m = from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let vals = symmetric_eigenvalues(m).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn known_three_by_three() {
        // Path-graph Laplacian: eigenvalues 0, 1, 3.
        let m = from_rows(&[&[1.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 1.0]]);
        let vals = symmetric_eigenvalues(m).unwrap();
        assert!(vals[0].abs() < 1e-13);
        assert!((vals[1] - 1.0).abs() < 1e-13);
        assert!((vals[2] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn random_symmetric_reconstruction() {
        let n = 40;
        let mut rng = crate::sim::Rng::new(77, 0);
        let mut a = Mat::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v = rng.next_f64() * 2.0 - 1.0;
                a.set(i, j, v);
                a.set(j, i, v);
            }
        }
        let orig = a.clone();
        let (vals, vecs) = symmetric_eigen(a).unwrap();

        // Trace preserved.
        let trace: f64 = (0..n).map(|i| orig.at(i, i)).sum();
        let sum: f64 = vals.iter().sum();
        assert!((trace - sum).abs() < 1e-10);

        // A v_k = lambda_k v_k and orthonormal columns.
        for k in 0..n {
            let mut norm = 0.0;
            for i in 0..n {
                let mut av = 0.0;
                for j in 0..n {
                    av += orig.at(i, j) * vecs.at(j, k);
                }
                let resid = av - vals[k] * vecs.at(i, k);
                assert!(resid.abs() < 1e-9, "residual {resid} at ({i}, {k})");
                norm += vecs.at(i, k) * vecs.at(i, k);
            }
            assert!((norm - 1.0).abs() < 1e-10);
        }
        for k in 0..n {
            for l in (k + 1)..n {
                let dot: f64 = (0..n).map(|i| vecs.at(i, k) * vecs.at(i, l)).sum();
                assert!(dot.abs() < 1e-9);
            }
        }

        // Values-only path agrees with the full decomposition.
        let vals_only = symmetric_eigenvalues(orig).unwrap();
        for k in 0..n {
            assert!((vals[k] - vals_only[k]).abs() < 1e-10);
        }
    }
}
