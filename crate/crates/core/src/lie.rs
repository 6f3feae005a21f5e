//! The Cartan involution on `SL(n, C)` and `sl(n, C)`, the invariant
//! polynomials `P_k(X) = Tr(Xᵏ)` and the normalising constants `A_k` of the
//! Cheeger–Chern–Simons forms.
//!
//! The Cartan involution `φ(A) = (Āᵀ)⁻¹` has differential `φ_*(X) = -X̄ᵀ`,
//! and `P_k(-X̄ᵀ) = (-1)ᵏ conj(P_k(X))`. That sign is what flips the volume
//! and keeps the Chern–Simons invariant in dimension three.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use crate::{Complex, Error, Mat3, Result};

/// Trace tolerance of [`TracelessMatrix`].
pub const TRACE_TOL: f64 = 1e-10;

/// Supported matrix sizes.
pub const SIZES: core::ops::RangeInclusive<usize> = 2..=8;

/// Dense `n × n` complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<Complex>,
}

impl SquareMatrix {
    /// Zero matrix of size `n`.
    pub fn zeros(n: usize) -> Self {
        SquareMatrix { n, data: vec![Complex::new(0.0, 0.0); n * n] }
    }

    /// Identity of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex::new(1.0, 0.0);
        }
        m
    }

    /// Builds from row-major entries; `data.len()` must be `n²`.
    pub fn from_row_major(n: usize, data: Vec<Complex>) -> Result<Self> {
        if data.len() != n * n || n == 0 {
            return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", data.len())));
        }
        Ok(SquareMatrix { n, data })
    }

    /// Diagonal matrix.
    pub fn diag(d: &[Complex]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.data[i * d.len() + i] = v;
        }
        m
    }

    /// Size.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.n + j]
    }

    /// Sets entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: Complex) {
        self.data[i * self.n + j] = v;
    }

    /// Trace.
    pub fn trace(&self) -> Complex {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    /// Entrywise conjugate.
    pub fn conj(&self) -> Self {
        SquareMatrix { n: self.n, data: self.data.iter().map(|v| v.conj()).collect() }
    }

    /// Multiplies every entry by `s`.
    pub fn scale(&self, s: Complex) -> Self {
        SquareMatrix { n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_size(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(SquareMatrix { n: self.n, data })
    }

    fn same_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("{}x{} vs {}x{}", self.n, self.n, other.n, other.n)));
        }
        Ok(())
    }

    /// Product; sizes must agree.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_size(other)?;
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(m)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Complex {
        let (lu, _, sign) = match self.lu() {
            Some(v) => v,
            None => return Complex::new(0.0, 0.0),
        };
        (0..self.n).fold(Complex::new(sign, 0.0), |acc, i| acc * lu.get(i, i))
    }

    fn lu(&self) -> Option<(Self, Vec<usize>, f64)> {
        let n = self.n;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = self.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for col in 0..n {
            let pivot = (col..n).max_by(|&r, &s| a.get(r, col).norm().total_cmp(&a.get(s, col).norm()))?;
            if !(a.get(pivot, col).norm() > 1e-14 * scale) {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                perm.swap(pivot, col);
                sign = -sign;
            }
            let inv = a.get(col, col).inv();
            for r in col + 1..n {
                let factor = a.get(r, col) * inv;
                a.set(r, col, factor);
                for j in col + 1..n {
                    let v = a.get(r, j) - factor * a.get(col, j);
                    a.set(r, j, v);
                }
            }
        }
        Some((a, perm, sign))
    }

    /// Inverse; singular matrices are rejected.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let (lu, perm, _) = self.lu().ok_or(Error::Singular)?;
        let mut inv = Self::zeros(n);
        for col in 0..n {
            // solve L U x = P e_col
            let mut x: Vec<Complex> = (0..n)
                .map(|i| if perm[i] == col { Complex::new(1.0, 0.0) } else { Complex::new(0.0, 0.0) })
                .collect();
            for i in 0..n {
                for k in 0..i {
                    x[i] = x[i] - lu.get(i, k) * x[k];
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    x[i] = x[i] - lu.get(i, k) * x[k];
                }
                x[i] /= lu.get(i, i);
            }
            for i in 0..n {
                inv.set(i, col, x[i]);
            }
        }
        Ok(inv)
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    /// Panics on size mismatch; use [`SquareMatrix::try_mul`] otherwise.
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        match self.try_mul(rhs) {
            Ok(m) => m,
            Err(e) => panic!("{e}"),
        }
    }
}

impl From<&Mat3> for SquareMatrix {
    fn from(m: &Mat3) -> Self {
        SquareMatrix { n: 3, data: m.rows.iter().flatten().copied().collect() }
    }
}

impl TryFrom<&SquareMatrix> for Mat3 {
    type Error = Error;

    fn try_from(m: &SquareMatrix) -> Result<Mat3> {
        if m.n != 3 {
            return Err(Error::Dimension(format!("{}x{} is not 3x3", m.n, m.n)));
        }
        let mut rows = [[Complex::new(0.0, 0.0); 3]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = m.get(i, j);
            }
        }
        Ok(Mat3::from_rows(rows))
    }
}

/// An element of `sl(n, C)`, `2 ≤ n ≤ 8`.
#[derive(Debug, Clone, PartialEq)]
pub struct TracelessMatrix(SquareMatrix);

impl TracelessMatrix {
    /// Checks size and `|Tr X| < 1e-10`.
    pub fn new(m: SquareMatrix) -> Result<Self> {
        if !SIZES.contains(&m.n) {
            return Err(Error::Dimension(format!("sl(n) needs 2 <= n <= 8, got {}", m.n)));
        }
        let tr = m.trace().norm();
        if !(tr < TRACE_TOL) {
            return Err(Error::NotTraceless(tr));
        }
        Ok(TracelessMatrix(m))
    }

    /// Removes the trace part of `m`.
    pub fn project(m: &SquareMatrix) -> Result<Self> {
        let shift = m.trace() / m.n as f64;
        let mut out = m.clone();
        for i in 0..m.n {
            out.set(i, i, m.get(i, i) - shift);
        }
        Self::new(out)
    }

    /// Underlying matrix.
    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }
}

/// `φ_*(X) = -X̄ᵀ`.
pub fn cartan_diff(x: &TracelessMatrix) -> TracelessMatrix {
    TracelessMatrix(x.0.conj().transpose().scale(Complex::new(-1.0, 0.0)))
}

/// `P_k(X) = Tr(Xᵏ)` for `k ≥ 1`.
pub fn trace_power(x: &SquareMatrix, k: u32) -> Result<Complex> {
    if k == 0 {
        return Err(Error::Index("trace power needs k >= 1".into()));
    }
    let mut power = x.clone();
    for _ in 1..k {
        power = &power * x;
    }
    Ok(power.trace())
}

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    /// `num / den` in lowest terms.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Degenerate("zero denominator".into()));
        }
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ok(Ratio { num: s * num / g, den: s * den / g })
    }

    /// Numerator.
    pub fn numer(&self) -> i64 {
        self.num
    }

    /// Denominator (positive).
    pub fn denom(&self) -> i64 {
        self.den
    }

    fn overflow() -> Error {
        Error::Dimension("rational overflow".into())
    }

    fn mul_int(self, m: i64) -> Result<Self> {
        let g = gcd(m, self.den).max(1);
        let num = self.num.checked_mul(m / g).ok_or_else(Self::overflow)?;
        Ratio::new(num, self.den / g)
    }

    fn div_int(self, m: i64) -> Result<Self> {
        let g = gcd(m, self.num).max(1);
        let den = self.den.checked_mul(m / g).ok_or_else(Self::overflow)?;
        Ratio::new(self.num / g, den)
    }

    /// Floating point value.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `A_k = (-1)^(k-1) k! (k-1)! / (2^(k-1) (2k-1)!)`, exact.
///
/// Factors are cancelled as they are applied, so the 64-bit intermediates stay
/// small well past `k = 10`; an overflow is reported as an error.
pub fn cs_constant(k: u32) -> Result<Ratio> {
    if k == 0 {
        return Err(Error::Index("A_k needs k >= 1".into()));
    }
    let k = k as i64;
    let mut r = Ratio::new(if k % 2 == 1 { 1 } else { -1 }, 1)?;
    for i in 1..2 * k {
        // (2k-1)! in the denominator, interleaved with the numerator factors
        if i <= k {
            r = r.mul_int(i)?;
        }
        if i < k {
            r = r.mul_int(i)?.div_int(2)?;
        }
        r = r.div_int(i)?;
    }
    Ok(r)
}

/// Both sides of `P_k(-X̄ᵀ) = (-1)ᵏ conj(P_k(X))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignIdentityReport {
    /// Degree `k`.
    pub k: u32,
    /// `P_k(-X̄ᵀ)`.
    pub lhs: Complex,
    /// `(-1)ᵏ conj(P_k(X))`.
    pub rhs: Complex,
    /// `|lhs - rhs|`.
    pub deviation: f64,
}

impl SignIdentityReport {
    /// Whether the identity holds to absolute tolerance `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.deviation <= tol
    }
}

/// Evaluates both sides of the sign identity for any square `X`.
pub fn sign_identity_check(x: &SquareMatrix, k: u32) -> Result<SignIdentityReport> {
    let image = x.conj().transpose().scale(Complex::new(-1.0, 0.0));
    let lhs = trace_power(&image, k)?;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let rhs = trace_power(x, k)?.conj() * sign;
    Ok(SignIdentityReport { k, lhs, rhs, deviation: (lhs - rhs).norm() })
}

/// Which group involution to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Involution {
    /// `A ↦ (Āᵀ)⁻¹`.
    Cartan,
    /// `A ↦ (Aᵀ)⁻¹`.
    TransposeInverse,
}

impl Involution {
    /// Both involutions.
    pub const ALL: [Involution; 2] = [Involution::Cartan, Involution::TransposeInverse];

    /// Command-line style name.
    pub fn name(&self) -> &'static str {
        match self {
            Involution::Cartan => "cartan",
            Involution::TransposeInverse => "transpose-inverse",
        }
    }
}

/// Image of `a` under the chosen involution.
pub fn group_involution(a: &SquareMatrix, kind: Involution) -> Result<SquareMatrix> {
    let t = match kind {
        Involution::Cartan => a.conj().transpose(),
        Involution::TransposeInverse => a.transpose(),
    };
    t.inverse()
}
