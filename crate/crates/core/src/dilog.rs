//! Dilogarithms: `Li₂`, Bloch–Wigner `D`, Rogers `R` and the flattened Rogers
//! dilogarithm on extended parameters.
//!
//! Branch conventions: `Log` is principal with its cut on `(-∞, 0]`, `Li₂` has
//! its cut on `[1, ∞)`, and both take the limit from the upper half plane on
//! their cut. A signed zero imaginary part is read as `+0`.

use core::f64::consts::PI;

use crate::{Complex, Error, Result};

/// `π²/6 = Li₂(1)`.
pub const ZETA2: f64 = PI * PI / 6.0;

/// Recovered flattening integers must lie this close to an integer.
pub const INTEGER_TOL: f64 = 1e-6;

/// `exp(w0)` closer than this to 0 or 1 is degenerate.
pub const DEGENERATE_TOL: f64 = 1e-9;

/// `D` snaps to its continuous extension 0 this close to 0 and 1.
pub const SNAP_TOL: f64 = 1e-13;

const I_PI: Complex = Complex::new(0.0, PI);

// B_n / (n+1)! for n = 2, 4, ..., 24. Li₂(z) = Σ B_n uⁿ⁺¹/(n+1)! with u = -ln(1-z).
const BERNOULLI: [f64; 12] = [
    2.777_777_777_777_777_8e-2,
    -2.777_777_777_777_777_8e-4,
    4.724_111_866_969_009_8e-6,
    -9.185_773_074_661_963_6e-8,
    1.897_886_998_897_100_0e-9,
    -4.064_761_645_144_225_5e-11,
    8.921_691_020_456_452_6e-13,
    -1.993_929_586_072_107_6e-14,
    4.518_980_029_619_918_2e-16,
    -1.035_651_761_218_124_7e-17,
    2.395_218_621_026_186_7e-19,
    -5.581_785_874_325_009_3e-21,
];

fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn canonical_zero(z: Complex) -> Complex {
    // -0.0 and +0.0 compare equal; this maps both to +0.0.
    if z.im == 0.0 {
        Complex::new(z.re, 0.0)
    } else {
        z
    }
}

/// Principal logarithm; on the negative real axis the argument is `+π`.
pub fn log(z: Complex) -> Complex {
    let z = canonical_zero(z);
    Complex::new(libm::log(z.norm()), libm::atan2(z.im, z.re))
}

/// `Log(1 + w)` without cancellation for small `w`.
fn log1p(w: Complex) -> Complex {
    let w = canonical_zero(w);
    if w.norm() < 0.5 {
        let re = 0.5 * libm::log1p(w.re * (2.0 + w.re) + w.im * w.im);
        Complex::new(re, libm::atan2(w.im, 1.0 + w.re))
    } else {
        log(Complex::new(1.0 + w.re, w.im))
    }
}

/// Bernoulli series `Σ B_n uⁿ⁺¹/(n+1)!`.
fn bernoulli_series(u: Complex) -> Complex {
    let u2 = u * u;
    let mut acc = Complex::new(0.0, 0.0);
    for &b in BERNOULLI.iter().rev() {
        acc = acc * u2 + b;
    }
    u - u2 * 0.25 + u * u2 * acc
}

fn li2_finite(z: Complex) -> Complex {
    let z = canonical_zero(z);
    let (x, y) = (z.re, z.im);
    if y == 0.0 {
        if x == 1.0 {
            return Complex::new(ZETA2, 0.0);
        }
        if x > 1.0 {
            // Li₂(x + i0) = π²/6 - ln x ln(x-1) - Li₂(1-x) + iπ ln x
            let re = ZETA2 - libm::log(x) * libm::log(x - 1.0) - li2_finite(Complex::new(1.0 - x, 0.0)).re;
            return Complex::new(re, PI * libm::log(x));
        }
    }
    let nz = z.norm_sqr();
    if nz == 0.0 {
        return z;
    }
    if x <= 0.5 {
        if nz > 1.0 {
            // inversion
            let u = -log1p(-z.inv());
            let l = log(-z);
            -bernoulli_series(u) - l * l * 0.5 - ZETA2
        } else {
            bernoulli_series(-log1p(-z))
        }
    } else if nz <= 2.0 * x {
        // reflection, |z - 1| <= 1
        let u = -log1p(z - 1.0);
        -bernoulli_series(u) + u * log1p(-z) + ZETA2
    } else {
        let u = -log1p(-z.inv());
        let l = log(-z);
        -bernoulli_series(u) - l * l * 0.5 - ZETA2
    }
}

/// Principal branch dilogarithm `Li₂(z) = Σ zⁿ/n²`, continued to `C ∖ [1, ∞)`.
///
/// On the cut the value is the limit from above, so `Im Li₂(x) = π ln x` for
/// real `x > 1`.
pub fn li2(z: Complex) -> Result<Complex> {
    if !is_finite(z) {
        return Err(Error::NonFinite("li2"));
    }
    Ok(li2_finite(z))
}

/// Bloch–Wigner dilogarithm `D(z) = Im Li₂(z) + arg(1 - z) ln|z|`.
///
/// `D` vanishes on the real line and extends continuously by 0 to 0 and 1;
/// inputs within [`SNAP_TOL`] of those points return 0.
pub fn bloch_wigner(z: Complex) -> Result<f64> {
    if !is_finite(z) {
        return Err(Error::NonFinite("bloch_wigner"));
    }
    Ok(bloch_wigner_finite(z))
}

pub(crate) fn bloch_wigner_finite(z: Complex) -> f64 {
    if z.im == 0.0 || z.norm() < SNAP_TOL || (z - 1.0).norm() < SNAP_TOL {
        return 0.0;
    }
    let arg_one_minus = libm::atan2(-z.im, 1.0 - z.re);
    li2_finite(z).im + arg_one_minus * libm::log(z.norm())
}

/// Rogers dilogarithm `R(z) = Li₂(z) + ½ Log z Log(1-z) - π²/6`.
pub fn rogers(z: Complex) -> Result<Complex> {
    if !is_finite(z) {
        return Err(Error::NonFinite("rogers"));
    }
    if z == Complex::new(0.0, 0.0) || z == Complex::new(1.0, 0.0) {
        return Err(Error::Degenerate(alloc::format!("rogers: excluded parameter {z}")));
    }
    Ok(rogers_unchecked(z))
}

fn rogers_unchecked(z: Complex) -> Complex {
    li2_finite(z) + log(z) * log1p(-z) * 0.5 - ZETA2
}

/// An extended parameter `(w0, w1)`: logarithmic data for `z = exp(w0)` with
/// integer branch data `p, q` such that
/// `w0 = Log z + pπi` and `w1 = -Log(1 - z) + qπi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flattening {
    w0: Complex,
    w1: Complex,
    z: Complex,
    p: i64,
    q: i64,
}

impl Flattening {
    /// First log coordinate.
    pub fn w0(&self) -> Complex {
        self.w0
    }

    /// Second log coordinate.
    pub fn w1(&self) -> Complex {
        self.w1
    }

    /// `exp(w0)`.
    pub fn z(&self) -> Complex {
        self.z
    }

    /// Branch integer of `w0`.
    pub fn p(&self) -> i64 {
        self.p
    }

    /// Branch integer of `w1`.
    pub fn q(&self) -> i64 {
        self.q
    }

    /// Builds the flattening with parameter `z` and branch integers `p, q`.
    pub fn from_branches(z: Complex, p: i64, q: i64) -> Result<Self> {
        let w0 = log(z) + I_PI * p as f64;
        let w1 = -log1p(-z) + I_PI * q as f64;
        flattening_from_logs(w0, w1)
    }

    /// Adds `dp·πi` to `w0` and `dq·πi` to `w1`. Odd `dp` changes the sign of `z`.
    pub fn shifted(&self, dp: i64, dq: i64) -> Result<Self> {
        flattening_from_logs(self.w0 + I_PI * dp as f64, self.w1 + I_PI * dq as f64)
    }

    /// Complex conjugate flattening `(w̄0, w̄1)`.
    pub fn conj(&self) -> Result<Self> {
        flattening_from_logs(self.w0.conj(), self.w1.conj())
    }
}

fn recover_integer(v: Complex) -> core::result::Result<i64, f64> {
    let r = libm::round(v.re);
    if (v.re - r).abs() <= INTEGER_TOL && v.im.abs() <= INTEGER_TOL {
        Ok(r as i64)
    } else {
        Err(v.re)
    }
}

/// Recovers `z = exp(w0)` and the branch integers from a log pair.
pub fn flattening_from_logs(w0: Complex, w1: Complex) -> Result<Flattening> {
    if !is_finite(w0) || !is_finite(w1) {
        return Err(Error::NonFinite("flattening"));
    }
    let z = w0.exp();
    if !is_finite(z) {
        return Err(Error::NonFinite("flattening"));
    }
    if z.norm() < DEGENERATE_TOL || (z - 1.0).norm() < DEGENERATE_TOL {
        return Err(Error::Degenerate(alloc::format!(
            "flattening parameter exp(w0) = {z} too close to 0 or 1"
        )));
    }
    let p = recover_integer((w0 - log(z)) / I_PI);
    let q = recover_integer((w1 + log1p(-z)) / I_PI);
    match (p, q) {
        (Ok(p), Ok(q)) => Ok(Flattening { w0, w1, z, p, q }),
        (p, q) => Err(Error::BranchMismatch {
            p: p.map_or_else(|v| v, |v| v as f64),
            q: q.map_or_else(|v| v, |v| v as f64),
        }),
    }
}

/// Flattened Rogers dilogarithm
/// `R̂(z; p, q) = R(z) + (πi/2)(p Log(1-z) + q Log z)`.
///
/// Well defined on the extended pre-Bloch group modulo `π²Z`
/// (see [`LATTICE`]).
pub fn extended_rogers(f: &Flattening) -> Complex {
    let z = f.z;
    rogers_unchecked(z) + I_PI * 0.5 * (log1p(-z) * f.p as f64 + log(z) * f.q as f64)
}

/// Real lattice modulo which values of [`extended_rogers`] on cycles are defined.
pub const LATTICE: f64 = PI * PI;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn li2_special_values() {
        assert_eq!(li2(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_relative_eq!(li2(c(1.0, 0.0)).unwrap().re, PI * PI / 6.0, max_relative = 1e-15);
        assert_relative_eq!(li2(c(-1.0, 0.0)).unwrap().re, -PI * PI / 12.0, max_relative = 1e-14);
        assert_eq!(li2(c(-1.0, 0.0)).unwrap().im, 0.0);
    }

    #[test]
    fn li2_upper_side_of_cut() {
        // mpmath gives the lower-side value 2.4674011002723397 - 2.1775860903036021i
        let v = li2(c(2.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, 2.467_401_100_272_339_7, max_relative = 1e-13);
        assert_relative_eq!(v.im, 2.177_586_090_303_602_1, max_relative = 1e-13);
        let v = li2(c(2.0, -0.0)).unwrap();
        assert!(v.im > 0.0);
        let near = li2(c(2.0, 1e-12)).unwrap();
        assert!((near - li2(c(2.0, 0.0)).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn li2_small_argument_is_relatively_accurate() {
        let z = c(1e-10, -3e-11);
        let v = li2(z).unwrap();
        let expect = z + z * z / 4.0;
        assert!((v - expect).norm() / z.norm() < 1e-14);
    }

    #[test]
    fn li2_rejects_non_finite() {
        assert_eq!(li2(c(f64::NAN, 0.0)), Err(Error::NonFinite("li2")));
        assert!(bloch_wigner(c(f64::INFINITY, 1.0)).is_err());
    }

    #[test]
    fn bloch_wigner_examples() {
        assert_eq!(bloch_wigner(c(0.7, 0.0)).unwrap(), 0.0);
        assert_relative_eq!(bloch_wigner(c(0.0, 1.0)).unwrap(), 0.915_965_594_177_219_0, epsilon = 1e-13);
        let w = c(0.5, 3f64.sqrt() / 2.0);
        assert_relative_eq!(bloch_wigner(w).unwrap(), 1.014_941_606_409_653_6, epsilon = 1e-13);
    }

    #[test]
    fn bloch_wigner_snaps_near_singular_points() {
        assert_eq!(bloch_wigner(c(0.0, 1e-14)).unwrap(), 0.0);
        assert_eq!(bloch_wigner(c(1.0, 1e-14)).unwrap(), 0.0);
        assert!(bloch_wigner(c(1.0, 1e-6)).unwrap().abs() < 1e-4);
    }

    #[test]
    fn rogers_examples() {
        assert_relative_eq!(rogers(c(0.5, 0.0)).unwrap().re, -PI * PI / 12.0, epsilon = 1e-14);
        let z = c(0.3, 0.4);
        let a = rogers(z.conj()).unwrap();
        let b = rogers(z).unwrap().conj();
        assert!((a - b).norm() < 1e-15);
        assert!(rogers(c(0.0, 0.0)).is_err());
        assert!(rogers(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn flattening_recovery() {
        let z = c(0.3, -1.7);
        let f = flattening_from_logs(log(z), -log(1.0 - z)).unwrap();
        assert_eq!((f.p(), f.q()), (0, 0));
        let f = flattening_from_logs(log(z) + 2.0 * I_PI, -log(1.0 - z)).unwrap();
        assert_eq!((f.p(), f.q()), (2, 0));
        let f = flattening_from_logs(log(z), -log(1.0 - z) - 4.0 * I_PI).unwrap();
        assert_eq!((f.p(), f.q()), (0, -4));
        let err = flattening_from_logs(log(z) + I_PI * 0.5, -log(1.0 - z)).unwrap_err();
        assert!(matches!(err, Error::BranchMismatch { .. }));
        assert!(matches!(
            flattening_from_logs(c(0.0, 0.0), c(0.0, 0.0)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn extended_rogers_trivial_flattening_is_rogers() {
        let i = c(0.0, 1.0);
        let f = flattening_from_logs(log(i), -log(1.0 - i)).unwrap();
        assert!((extended_rogers(&f) - rogers(i).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn extended_rogers_p_shift() {
        let z = c(-0.4, 0.9);
        let f = Flattening::from_branches(z, 0, 2).unwrap();
        let g = f.shifted(2, 0).unwrap();
        let shift = extended_rogers(&g) - extended_rogers(&f);
        assert!((shift - I_PI * log(1.0 - z)).norm() < 1e-13);
    }
}
