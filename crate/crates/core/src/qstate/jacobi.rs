//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use super::matrix::{C64, ONE, ZERO};
use crate::error::{Error, Result};

pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues (unsorted, in diagonal order) and eigenvectors stored as the
/// columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: [[C64; N]; N],
    pub sweeps: usize,
}

impl<const N: usize> HermitianEigen<N> {
    pub fn column(&self, j: usize) -> [C64; N] {
        std::array::from_fn(|i| self.vectors[i][j])
    }
}

fn off_norm<const N: usize>(a: &[[C64; N]; N]) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s += a[i][j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes a Hermitian matrix. Only the Hermitian part of `m` is used.
pub fn hermitian_eigen<const N: usize>(m: &[[C64; N]; N]) -> Result<HermitianEigen<N>> {
    let mut a = [[ZERO; N]; N];
    for i in 0..N {
        for j in 0..N {
            a[i][j] = (m[i][j] + m[j][i].conj()) * 0.5;
        }
    }
    let scale = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let tol = OFF_DIAGONAL_TOL * scale;

    let mut v = [[ZERO; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = ONE;
    }

    let mut sweeps = 0;
    while off_norm(&a) >= tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NumericalFailure {
                what: "Jacobi eigensolver",
                residual: off_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..N {
            for q in p + 1..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    Ok(HermitianEigen {
        values: std::array::from_fn(|i| a[i][i].re),
        vectors: v,
        sweeps,
    })
}

/// One complex Jacobi rotation annihilating a[p][q]. The rotation is a phase
/// on column q (making a[p][q] real) followed by a real Givens rotation.
fn rotate<const N: usize>(a: &mut [[C64; N]; N], v: &mut [[C64; N]; N], p: usize, q: usize) {
    let apq = a[p][q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[p][p].re;
    let aqq = a[q][q].re;
    // skip rotations that would not change the diagonal in floating point
    if r < 1e-300 || (app.abs() + 1e3 * r == app.abs() && aqq.abs() + 1e3 * r == aqq.abs()) {
        a[p][q] = ZERO;
        a[q][p] = ZERO;
        return;
    }
    let phase = apq / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let e = phase.conj();
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -e * s;
    let jqq = e * c;

    for k in 0..N {
        let akp = a[k][p];
        let akq = a[k][q];
        a[k][p] = akp * jpp + akq * jqp;
        a[k][q] = akp * jpq + akq * jqq;
    }
    for k in 0..N {
        let apk = a[p][k];
        let aqk = a[q][k];
        a[p][k] = jpp.conj() * apk + jqp.conj() * aqk;
        a[q][k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[p][q] = ZERO;
    a[q][p] = ZERO;
    a[p][p] = C64::new(a[p][p].re, 0.0);
    a[q][q] = C64::new(a[q][q].re, 0.0);

    for row in v.iter_mut() {
        let vp = row[p];
        let vq = row[q];
        row[p] = vp * jpp + vq * jqp;
        row[q] = vp * jpq + vq * jqq;
    }
}
