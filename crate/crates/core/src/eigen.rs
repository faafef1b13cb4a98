//! Cyclic Jacobi eigen-decomposition of real symmetric 3x3 matrices.

#![allow(clippy::needless_range_loop)]

pub type Mat3 = [[f64; 3]; 3];

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with matching unit eigenvectors.
#[derive(Clone, Copy, Debug)]
pub struct SymEigen {
    pub values: [f64; 3],
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: [[f64; 3]; 3],
}

fn off_diagonal(a: &Mat3) -> f64 {
    (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]).sqrt()
}

/// Diagonalizes `m`, which must be symmetric; only the upper triangle is read.
pub fn jacobi_eigen(m: &Mat3) -> SymEigen {
    let mut a = *m;
    for r in 0..3 {
        for c in 0..r {
            a[r][c] = a[c][r];
        }
    }
    let scale = a.iter().flatten().fold(0.0f64, |s, x| s.max(x.abs()));
    let mut v: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a[p][q];
            if apq == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;

            // A <- J^T A J with J the (p, q) rotation
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            a[p][q] = 0.0;
            a[q][p] = 0.0;

            for row in v.iter_mut() {
                let vp = row[p];
                let vq = row[q];
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    SymEigen {
        values: order.map(|k| a[k][k]),
        vectors: order.map(|k| [v[0][k], v[1][k], v[2][k]]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mul(m: &Mat3, x: &[f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|r| m[r][0] * x[0] + m[r][1] * x[1] + m[r][2] * x[2])
    }

    fn check(m: &Mat3, e: &SymEigen, tol: f64) {
        for k in 0..3 {
            let x = e.vectors[k];
            let mx = mul(m, &x);
            for r in 0..3 {
                assert!((mx[r] - e.values[k] * x[r]).abs() < tol, "{m:?} {e:?}");
            }
            for j in 0..3 {
                let d: f64 = (0..3).map(|r| e.vectors[k][r] * e.vectors[j][r]).sum();
                assert!((d - if j == k { 1.0 } else { 0.0 }).abs() < tol);
            }
        }
        assert!(e.values[0] <= e.values[1] && e.values[1] <= e.values[2]);
    }

    #[test]
    fn diagonal_input() {
        let m = [[3.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 2.0]];
        let e = jacobi_eigen(&m);
        assert_eq!(e.values, [-1.0, 2.0, 3.0]);
        check(&m, &e, 1e-15);
    }

    #[test]
    fn known_spectrum() {
        // R diag(1, 2, 4) R^T with R a rotation about (1,1,1)
        let s = 1.0 / 3f64.sqrt();
        let (c, sn) = (0.3f64.cos(), 0.3f64.sin());
        let k = [[0.0, -s, s], [s, 0.0, -s], [-s, s, 0.0]];
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let kk: f64 = (0..3).map(|l| k[i][l] * k[l][j]).sum();
                r[i][j] = if i == j { 1.0 } else { 0.0 } + sn * k[i][j] + (1.0 - c) * kk;
            }
        }
        let d = [1.0, 2.0, 4.0];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|l| r[i][l] * d[l] * r[j][l]).sum();
            }
        }
        let e = jacobi_eigen(&m);
        for k in 0..3 {
            assert!((e.values[k] - d[k]).abs() < 1e-13);
        }
        check(&m, &e, 1e-12);
    }

    #[test]
    fn degenerate_spectrum() {
        let m = [[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]];
        let e = jacobi_eigen(&m);
        assert!((e.values[0] - 1.0).abs() < 1e-13 && (e.values[1] - 1.0).abs() < 1e-13);
        assert!((e.values[2] - 4.0).abs() < 1e-13);
        check(&m, &e, 1e-12);
    }

    proptest! {
        #[test]
        fn random_symmetric(vals in prop::array::uniform6(-10.0f64..10.0)) {
            let [a, b, c, d, e, f] = vals;
            let m = [[a, b, c], [b, d, e], [c, e, f]];
            let eig = jacobi_eigen(&m);
            check(&m, &eig, 1e-10);
            let trace = a + d + f;
            prop_assert!((eig.values.iter().sum::<f64>() - trace).abs() < 1e-10);
        }
    }
}
