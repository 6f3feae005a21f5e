//! Small dense complex linear algebra on `C³`.
//!
//! Vectors and covectors are plain `[Complex; 3]`; the pairing between them is
//! the bilinear one (no conjugation), which is what projective duality needs.

use core::ops::{Mul, Neg};

use crate::{Complex, Error, Result};

/// A vector (or covector) in `C³`.
pub type Vec3 = [Complex; 3];

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

/// Bilinear pairing `Σ aᵢ bᵢ`.
pub fn dot(a: &Vec3, b: &Vec3) -> Complex {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Cross product; `cross(a, b)` read as a covector is `v ↦ det(a, b, v)`.
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Determinant of the matrix with columns `a, b, c`.
pub fn det_cols(a: &Vec3, b: &Vec3, c: &Vec3) -> Complex {
    dot(&cross(a, b), c)
}

/// Largest modulus among the coordinates.
pub fn max_norm(v: &Vec3) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Coordinatewise complex conjugate.
pub fn conj_vec(v: &Vec3) -> Vec3 {
    [v[0].conj(), v[1].conj(), v[2].conj()]
}

pub(crate) fn scale(v: &Vec3, s: Complex) -> Vec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

pub(crate) fn is_finite_vec(v: &Vec3) -> bool {
    v.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// A 3×3 complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    /// `rows[i][j]` is the entry in row `i`, column `j`.
    pub rows: [[Complex; 3]; 3],
}

impl Mat3 {
    /// The identity matrix.
    pub const IDENTITY: Mat3 = Mat3 {
        rows: [[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]],
    };

    /// Builds a matrix from its rows.
    pub const fn from_rows(rows: [[Complex; 3]; 3]) -> Self {
        Mat3 { rows }
    }

    /// Builds a matrix from its columns.
    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        let mut rows = [[ZERO; 3]; 3];
        for i in 0..3 {
            rows[i] = [c0[i], c1[i], c2[i]];
        }
        Mat3 { rows }
    }

    /// Builds a real matrix from row-major entries.
    pub fn from_real(rows: [[f64; 3]; 3]) -> Self {
        let mut m = [[ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = Complex::new(rows[i][j], 0.0);
            }
        }
        Mat3 { rows: m }
    }

    /// Diagonal matrix.
    pub fn diag(d: [Complex; 3]) -> Self {
        let mut m = Mat3::from_rows([[ZERO; 3]; 3]);
        for i in 0..3 {
            m.rows[i][i] = d[i];
        }
        m
    }

    /// Column `j`.
    pub fn col(&self, j: usize) -> Vec3 {
        [self.rows[0][j], self.rows[1][j], self.rows[2][j]]
    }

    /// Row `i`.
    pub fn row(&self, i: usize) -> Vec3 {
        self.rows[i]
    }

    /// Determinant by cofactor expansion.
    pub fn det(&self) -> Complex {
        det_cols(&self.col(0), &self.col(1), &self.col(2))
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Mat3::from_cols(self.rows[0], self.rows[1], self.rows[2])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        let mut m = *self;
        for row in m.rows.iter_mut() {
            for e in row.iter_mut() {
                *e = e.conj();
            }
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.conj().transpose()
    }

    /// Multiplies every entry by `s`.
    pub fn scale(&self, s: Complex) -> Self {
        let mut m = *self;
        for row in m.rows.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        m
    }

    /// Inverse through the adjugate. Rows of the inverse are cross products
    /// of pairs of columns divided by the determinant.
    pub fn inverse(&self) -> Result<Self> {
        let (c0, c1, c2) = (self.col(0), self.col(1), self.col(2));
        let det = dot(&cross(&c0, &c1), &c2);
        let scale_ref = max_norm(&c0) * max_norm(&c1) * max_norm(&c2);
        if !(det.norm() > 1e-14 * scale_ref) || !det.re.is_finite() || !det.im.is_finite() {
            return Err(Error::Singular);
        }
        let inv_det = det.inv();
        Ok(Mat3::from_rows([
            scale(&cross(&c1, &c2), inv_det),
            scale(&cross(&c2, &c0), inv_det),
            scale(&cross(&c0, &c1), inv_det),
        ]))
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &Vec3) -> Vec3 {
        [dot(&self.rows[0], v), dot(&self.rows[1], v), dot(&self.rows[2], v)]
    }

    /// Entrywise maximum modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat3) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((self.rows[i][j] - other.rows[i][j]).norm());
            }
        }
        m
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.rows.iter().map(max_norm).fold(0.0, f64::max)
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.rows.iter().all(is_finite_vec)
    }

    /// True when the matrix is upper triangular with ones on the diagonal,
    /// within absolute tolerance `tol`.
    pub fn is_unipotent_upper(&self, tol: f64) -> bool {
        let r = &self.rows;
        (r[0][0] - ONE).norm() <= tol
            && (r[1][1] - ONE).norm() <= tol
            && (r[2][2] - ONE).norm() <= tol
            && r[1][0].norm() <= tol
            && r[2][0].norm() <= tol
            && r[2][1].norm() <= tol
    }

    /// Unipotent upper-triangular matrix with the given strictly-upper entries
    /// `(a₀₁, a₀₂, a₁₂)`.
    pub fn unipotent(a01: Complex, a02: Complex, a12: Complex) -> Self {
        Mat3::from_rows([[ONE, a01, a02], [ZERO, ONE, a12], [ZERO, ZERO, ONE]])
    }
}

impl Mul for Mat3 {
    type Output = Mat3;

    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut out = [[ZERO; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..3).map(|k| self.rows[i][k] * rhs.rows[k][j]).sum();
            }
        }
        Mat3 { rows: out }
    }
}

impl Neg for Mat3 {
    type Output = Mat3;

    fn neg(self) -> Mat3 {
        self.scale(-ONE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn sample() -> Mat3 {
        Mat3::from_rows([
            [c(1.0, 0.5), c(-0.3, 2.0), c(0.7, 0.0)],
            [c(0.0, -1.0), c(2.2, 0.1), c(-1.0, 1.0)],
            [c(0.4, 0.4), c(0.0, 0.0), c(1.5, -0.5)],
        ])
    }

    #[test]
    fn inverse_round_trip() {
        let m = sample();
        let prod = m * m.inverse().unwrap();
        assert!(prod.max_abs_diff(&Mat3::IDENTITY) < 1e-14);
    }

    #[test]
    fn det_is_multiplicative() {
        let a = sample();
        let b = a.transpose().conj();
        let lhs = (a * b).det();
        let rhs = a.det() * b.det();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn singular_matrix_rejected() {
        let v = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        let m = Mat3::from_cols(v, v, [c(0.0, 1.0), ONE, ZERO]);
        assert_eq!(m.inverse(), Err(Error::Singular));
    }

    #[test]
    fn cross_gives_determinant_form() {
        let m = sample();
        let f = cross(&m.col(0), &m.col(1));
        assert!((dot(&f, &m.col(2)) - m.det()).norm() < 1e-14);
        assert!(dot(&f, &m.col(0)).norm() < 1e-14);
    }
}
