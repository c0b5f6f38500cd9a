use super::unitary::{phase_rotation, to_special, LocalUnitaryPair};
use crate::qstate::{hermitian_eigen, mat2_mul, PureState, C64};

/// 2|c↑↑ c↓↓ − c↑↓ c↓↑|
pub fn pure_concurrence(psi: &PureState) -> f64 {
    concurrence_of(psi.amplitudes()).min(1.0)
}

pub(crate) fn concurrence_of(c: &[C64; 4]) -> f64 {
    2.0 * (c[0] * c[3] - c[1] * c[2]).norm()
}

/// Schmidt form: returns θ ∈ [0, π/2] and a local operation taking ψ to
/// cos(θ/2)|↑↑⟩ + sin(θ/2)|↓↓⟩ up to a global phase.
pub fn schmidt_canonical(psi: &PureState) -> (f64, LocalUnitaryPair) {
    let c = psi.amplitudes();
    // coefficient matrix C_{m1 m2}; (U1 ⊗ U2)ψ has coefficients U1 C U2ᵀ
    let cm = [[c[0], c[1]], [c[2], c[3]]];
    let mut ctc = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            ctc[i][j] = (0..2).map(|k| cm[k][i].conj() * cm[k][j]).sum();
        }
    }
    let eig = hermitian_eigen(&ctc).expect("2x2 Jacobi converges");
    let (first, second) = if eig.values[0] >= eig.values[1] { (0, 1) } else { (1, 0) };
    let v1 = eig.column(first);
    let v2 = eig.column(second);

    let cv1 = [cm[0][0] * v1[0] + cm[0][1] * v1[1], cm[1][0] * v1[0] + cm[1][1] * v1[1]];
    let s1 = (cv1[0].norm_sqr() + cv1[1].norm_sqr()).sqrt();
    let w1 = [cv1[0] / s1, cv1[1] / s1];
    let w2 = [-w1[1].conj(), w1[0].conj()];

    // U1 = W†, U2 = Vᵀ
    let u1 = [[w1[0].conj(), w1[1].conj()], [w2[0].conj(), w2[1].conj()]];
    let u2 = [[v1[0], v1[1]], [v2[0], v2[1]]];
    let u1 = to_special(u1);
    let u2 = to_special(u2);

    // remaining diagonal entries d0, d1; equalize their phases
    let lo = LocalUnitaryPair { u1, u2 };
    let out = lo.apply_vec(c);
    let (d0, d1) = (out[0], out[3]);
    let rel = if d1.norm() > 1e-300 && d0.norm() > 1e-300 {
        d1.arg() - d0.arg()
    } else {
        0.0
    };
    let u1 = mat2_mul(&phase_rotation(rel / 2.0), &u1);
    let theta = 2.0 * d1.norm().atan2(d0.norm());
    (theta, LocalUnitaryPair { u1, u2 })
}
