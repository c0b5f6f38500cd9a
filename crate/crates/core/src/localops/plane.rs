use super::concurrence::concurrence_of;
use super::unitary::{phase_rotation, rotate_to_up, LocalUnitaryPair};
use crate::error::{Error, Result};
use crate::qstate::{inner, mat2_mul, norm, PureState, C64, ZERO};

const ORTHONORMAL_TOL: f64 = 1e-8;
const CANONICAL_TOL: f64 = 1e-9;

/// Canonical form of a two-dimensional subspace: after `lo` it is spanned by
/// χ₁ = |↑↑⟩ and χ₂ = (0, x, y, z) with x, y, z ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalPlane {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub lo: LocalUnitaryPair,
    pub chi1: PureState,
    pub chi2: PureState,
}

impl CanonicalPlane {
    /// The plane already in canonical form (identity local operation).
    pub fn from_xyz(x: f64, y: f64, z: f64) -> Result<Self> {
        if x < 0.0 || y < 0.0 || z < 0.0 {
            return Err(Error::Domain(format!("plane parameters must be nonnegative, got ({x}, {y}, {z})")));
        }
        let n = (x * x + y * y + z * z).sqrt();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("x² + y² + z² must be 1, got {}", n * n)));
        }
        let (x, y, z) = (x / n, y / n, z / n);
        Ok(Self {
            x,
            y,
            z,
            lo: LocalUnitaryPair::identity(),
            chi1: PureState::basis(0),
            chi2: PureState::from_real([0.0, x, y, z])?,
        })
    }

    /// Maps a state expressed in the canonical frame back to the original one.
    pub fn to_original(&self, psi: &PureState) -> PureState {
        self.lo.inverse().apply(psi)
    }

    /// cos(θ/2)e^{iφ/2}χ₁ + sin(θ/2)e^{−iφ/2}χ₂ in the canonical frame.
    pub fn point(&self, theta: f64, phi: f64) -> PureState {
        plane_point(&self.chi1, &self.chi2, theta, phi)
    }
}

pub(crate) fn plane_point(chi1: &PureState, chi2: &PureState, theta: f64, phi: f64) -> PureState {
    let a = C64::from_polar((theta / 2.0).cos(), phi / 2.0);
    let b = C64::from_polar((theta / 2.0).sin(), -phi / 2.0);
    let c1 = chi1.amplitudes();
    let c2 = chi2.amplitudes();
    PureState::normalized(std::array::from_fn(|i| a * c1[i] + b * c2[i])).expect("orthonormal basis")
}

/// g(u, v) = u₀v₃ + v₀u₃ − u₁v₂ − v₁u₂; g(ψ, ψ)/2 is the concurrence amplitude.
fn bilinear(u: &[C64; 4], v: &[C64; 4]) -> C64 {
    u[0] * v[3] + v[0] * u[3] - u[1] * v[2] - v[1] * u[2]
}

/// Orthonormalizes the pair, rejecting inputs that are far from orthonormal.
fn orthonormal_pair(chi1: &PureState, chi2: &PureState) -> Result<([C64; 4], [C64; 4])> {
    let a = *chi1.amplitudes();
    let ov = inner(&a, chi2.amplitudes());
    if ov.norm() > ORTHONORMAL_TOL {
        return Err(Error::Domain(format!("plane basis is not orthonormal (overlap {:.3e})", ov.norm())));
    }
    let mut b = *chi2.amplitudes();
    for i in 0..4 {
        b[i] -= a[i] * ov;
    }
    let n = norm(&b);
    Ok((a, b.map(|c| c / n)))
}

/// Roots (s, t) of C s² + B s t + A t² = 0, with the ray sχ₁ + tχ₂ normalized.
/// Roots are ordered by preference: larger |s| (smaller |t/s|) first, then
/// larger Re(t/s), then larger Im(t/s).
fn separable_rays(a: C64, b: C64, c: C64) -> Vec<(C64, C64)> {
    let one = C64::new(1.0, 0.0);
    let solve = |p: C64, q: C64, r: C64| -> Vec<C64> {
        // p u² + q u + r = 0 with |p| not tiny relative to |r|
        let disc = (q * q - p * r * 4.0).sqrt();
        let s = if (q.conj() * disc).re >= 0.0 { q + disc } else { q - disc };
        let qq = s * -0.5;
        if qq.norm() == 0.0 {
            vec![ZERO, ZERO]
        } else {
            vec![qq / p, r / qq]
        }
    };
    let scale = a.norm().max(b.norm()).max(c.norm());
    if scale < 1e-300 {
        return vec![(one, ZERO)];
    }
    let mut rays: Vec<(C64, C64)> = if a.norm() < 1e-300 && c.norm() < 1e-300 {
        // B s t = 0: both basis vectors are separable
        vec![(one, ZERO), (ZERO, one)]
    } else if a.norm() >= c.norm() {
        // w = t/s
        solve(a, b, c).into_iter().map(|w| (one, w)).collect()
    } else {
        // v = s/t
        solve(c, b, a).into_iter().map(|v| (v, one)).collect()
    };
    for r in rays.iter_mut() {
        let n = (r.0.norm_sqr() + r.1.norm_sqr()).sqrt();
        *r = (r.0 / n, r.1 / n);
    }
    let key = |r: &(C64, C64)| -> (f64, f64, f64) {
        let w = if r.0.norm() > 0.0 { r.1 / r.0 } else { C64::new(f64::INFINITY, 0.0) };
        (r.0.norm(), w.re, w.im)
    };
    rays.sort_by(|p, q| {
        let (kp, kq) = (key(p), key(q));
        if (kp.0 - kq.0).abs() > 1e-12 {
            kq.0.total_cmp(&kp.0)
        } else if (kp.1 - kq.1).abs() > 1e-12 {
            kq.1.total_cmp(&kp.1)
        } else {
            kq.2.total_cmp(&kp.2)
        }
    });
    rays
}

/// Newton steps on the quadratic in whichever affine chart the ray lives in.
fn polish(a: C64, b: C64, c: C64, ray: (C64, C64)) -> (C64, C64) {
    let one = C64::new(1.0, 0.0);
    let (mut s, mut t) = ray;
    for _ in 0..3 {
        if s.norm() >= t.norm() {
            let mut w = t / s;
            let f = a * w * w + b * w + c;
            let df = a * w * 2.0 + b;
            if df.norm() > 1e-300 {
                w -= f / df;
            }
            s = one;
            t = w;
        } else {
            let mut v = s / t;
            let f = c * v * v + b * v + a;
            let df = c * v * 2.0 + b;
            if df.norm() > 1e-300 {
                v -= f / df;
            }
            s = v;
            t = one;
        }
        let n = (s.norm_sqr() + t.norm_sqr()).sqrt();
        s /= n;
        t /= n;
    }
    (s, t)
}

/// Coefficients (s, t) of a separable state sχ₁ + tχ₂ in the given plane.
fn separable_coefficients(chi1: &[C64; 4], chi2: &[C64; 4]) -> (C64, C64) {
    let c = bilinear(chi1, chi1) * 0.5;
    let b = bilinear(chi1, chi2);
    let a = bilinear(chi2, chi2) * 0.5;
    let rays = separable_rays(a, b, c);
    let combine = |(s, t): (C64, C64)| -> [C64; 4] { std::array::from_fn(|i| s * chi1[i] + t * chi2[i]) };
    let first = rays[0];
    let polished = polish(a, b, c, first);
    if concurrence_of(&combine(polished)) <= concurrence_of(&combine(first)) {
        polished
    } else {
        first
    }
}

/// A separable (zero-concurrence) state in span{χ₁, χ₂}.
pub fn find_separable_in_plane(chi1: &PureState, chi2: &PureState) -> Result<PureState> {
    let (c1, c2) = orthonormal_pair(chi1, chi2)?;
    let (s, t) = separable_coefficients(&c1, &c2);
    PureState::normalized(std::array::from_fn(|i| s * c1[i] + t * c2[i]))
}

/// Factor a (near-)product state as α ⊗ β.
fn factor_product(v: &[C64; 4]) -> ([C64; 2], [C64; 2]) {
    let m = [[v[0], v[1]], [v[2], v[3]]];
    let (mut bi, mut bj) = (0, 0);
    for i in 0..2 {
        for j in 0..2 {
            if m[i][j].norm() > m[bi][bj].norm() {
                bi = i;
                bj = j;
            }
        }
    }
    let col = [m[0][bj], m[1][bj]];
    let row = [m[bi][0], m[bi][1]];
    let nc = (col[0].norm_sqr() + col[1].norm_sqr()).sqrt();
    let nr = (row[0].norm_sqr() + row[1].norm_sqr()).sqrt();
    ([col[0] / nc, col[1] / nc], [row[0] / nr, row[1] / nr])
}

pub fn canonical_plane(chi1: &PureState, chi2: &PureState) -> Result<CanonicalPlane> {
    let (c1, c2) = orthonormal_pair(chi1, chi2)?;
    let (s, t) = separable_coefficients(&c1, &c2);
    let sep: [C64; 4] = std::array::from_fn(|i| s * c1[i] + t * c2[i]);
    let partner: [C64; 4] = std::array::from_fn(|i| -t.conj() * c1[i] + s.conj() * c2[i]);

    let (alpha, beta) = factor_product(&sep);
    let lo = LocalUnitaryPair {
        u1: rotate_to_up(alpha),
        u2: rotate_to_up(beta),
    };

    // residual phases: component k of the partner picks up
    // g + d, g − d, g − σ for k = 1, 2, 3 (d = a − b, σ = a + b)
    let o = lo.apply_vec(&partner);
    let arg = |z: C64| if z.norm() > 1e-14 { z.arg() } else { 0.0 };
    let g = -(arg(o[1]) + arg(o[2])) / 2.0;
    let d = (arg(o[2]) - arg(o[1])) / 2.0;
    let sigma = g + arg(o[3]);
    let (pa, pb) = ((sigma + d) / 2.0, (sigma - d) / 2.0);
    let lo = LocalUnitaryPair {
        u1: mat2_mul(&phase_rotation(pa), &lo.u1),
        u2: mat2_mul(&phase_rotation(pb), &lo.u2),
    };

    let global = C64::from_polar(1.0, g);
    let img = lo.apply_vec(&partner).map(|z| z * global);
    let sep_img = lo.apply_vec(&sep);
    let residual = img[0]
        .norm()
        .max(img[1].im.abs())
        .max(img[2].im.abs())
        .max(img[3].im.abs())
        .max(sep_img[1].norm())
        .max(sep_img[2].norm())
        .max(sep_img[3].norm());
    if !(residual <= CANONICAL_TOL) || img[1..].iter().any(|z| z.re < -CANONICAL_TOL) {
        return Err(Error::Canonicalization { residual });
    }
    let xyz = [img[1].re.max(0.0), img[2].re.max(0.0), img[3].re.max(0.0)];
    let n = (xyz[0] * xyz[0] + xyz[1] * xyz[1] + xyz[2] * xyz[2]).sqrt();
    let [x, y, z] = xyz.map(|v| v / n);
    Ok(CanonicalPlane {
        x,
        y,
        z,
        lo,
        chi1: PureState::basis(0),
        chi2: PureState::from_real([0.0, x, y, z])?,
    })
}

/// Orthonormal basis of the orthogonal complement of a canonical plane, in the
/// canonical frame. The first vector is separable.
pub fn complement_plane(cp: &CanonicalPlane) -> (PureState, PureState) {
    let (x, y, z) = (cp.x, cp.y, cp.z);
    let r2 = z * z + x * x;
    if r2 <= 1e-12 {
        // plane is span{|↑↑⟩, |↓↑⟩}
        return (PureState::basis(1), PureState::basis(3));
    }
    let r = r2.sqrt();
    let c1 = PureState::from_real([0.0, z / r, 0.0, -x / r]).expect("nonzero");
    let c2 = PureState::from_real([0.0, x * y / r, -r, z * y / r]).expect("nonzero");
    (c1, c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localops::pure_concurrence;

    #[test]
    fn separable_basis_vector_is_returned_directly() {
        let sep = find_separable_in_plane(&PureState::basis(0), &PureState::basis(1)).unwrap();
        assert!(sep.ray_distance(&PureState::basis(0)) < 1e-15);
    }

    #[test]
    fn bell_pair_plane_prefers_up_down() {
        let b1 = PureState::from_real([0.0, 1.0, 1.0, 0.0]).unwrap();
        let b2 = PureState::from_real([0.0, 1.0, -1.0, 0.0]).unwrap();
        let sep = find_separable_in_plane(&b1, &b2).unwrap();
        assert!(sep.ray_distance(&PureState::basis(1)) < 1e-15);
        let cp = canonical_plane(&b1, &b2).unwrap();
        assert!(cp.x.abs() < 1e-12 && cp.y.abs() < 1e-12 && (cp.z - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_plane_of_canonical_input_is_fixed() {
        let cp = canonical_plane(&PureState::basis(0), &PureState::basis(3)).unwrap();
        assert_eq!((cp.x, cp.y), (0.0, 0.0));
        assert!((cp.z - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complement_of_bell_plane() {
        let cp = CanonicalPlane::from_xyz(0.0, 0.0, 1.0).unwrap();
        let (a, b) = complement_plane(&cp);
        assert_eq!(a, PureState::basis(1));
        assert!(b.ray_distance(&PureState::basis(2)) < 1e-15);
        assert_eq!(b.amplitudes()[2], C64::new(-1.0, 0.0));
    }

    #[test]
    fn degenerate_complement_uses_remaining_basis_vectors() {
        let cp = CanonicalPlane::from_xyz(0.0, 1.0, 0.0).unwrap();
        let (a, b) = complement_plane(&cp);
        assert_eq!(pure_concurrence(&a), 0.0);
        for v in [&a, &b] {
            assert!(v.inner(&cp.chi1).norm() < 1e-15);
            assert!(v.inner(&cp.chi2).norm() < 1e-15);
        }
    }
}
