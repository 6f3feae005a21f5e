//! Decorations of a tetrahedron by cosets `gN` and their Ptolemy coordinates.
//!
//! `N` is the group of unipotent upper-triangular 3×3 matrices. A decoration
//! assigns a determinant-one matrix `gᵢ` to each vertex `i ∈ 0..4`; only the
//! coset `gᵢN` matters. For `t = (t₀, t₁, t₂, t₃)` with `Σ tᵢ = 3` the Ptolemy
//! coordinate `c_t` is the determinant of the matrix formed by the first `t₀`
//! columns of `g₀`, then the first `t₁` columns of `g₁`, and so on.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dilog::{flattening_from_logs, log, Flattening};
use crate::flags::{flag_from_decoration, FlagTetrahedron, DET_TOL};
use crate::linalg::{det_cols, dot, Vec3};
use crate::prebloch::PreBlochElement;
use crate::{Complex, Error, Mat3, Result};

/// Relative size below which a Ptolemy coordinate counts as zero.
pub const PTOLEMY_TOL: f64 = 1e-12;

/// Tolerance of [`coset_equivalent`].
pub const COSET_TOL: f64 = 1e-8;

/// A 4-tuple of nonnegative integers summing to 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PtolemyTuple([u8; 4]);

impl PtolemyTuple {
    /// Checks the entries sum to 3.
    pub fn new(t: [u8; 4]) -> Result<Self> {
        if t.iter().map(|&v| v as u32).sum::<u32>() != 3 {
            return Err(Error::Index(format!("Ptolemy tuple {t:?} does not sum to 3")));
        }
        Ok(PtolemyTuple(t))
    }

    /// Entries `(t₀, t₁, t₂, t₃)`.
    pub fn entries(&self) -> [u8; 4] {
        self.0
    }

    /// True when every entry is at most 2.
    pub fn is_nondegenerate(&self) -> bool {
        self.0.iter().all(|&v| v <= 2)
    }

    /// All 20 tuples, in descending lexicographic order.
    pub fn all() -> impl Iterator<Item = PtolemyTuple> {
        (0..4u8).rev().flat_map(|a| {
            (0..=3 - a).rev().flat_map(move |b| {
                (0..=3 - a - b).rev().map(move |c| PtolemyTuple([a, b, c, 3 - a - b - c]))
            })
        })
    }

    /// The 16 tuples with all entries at most 2, in the order used by
    /// [`PtolemyCoordinates`].
    pub fn nondegenerate() -> [PtolemyTuple; 16] {
        let mut out = [PtolemyTuple([0; 4]); 16];
        for (slot, t) in out.iter_mut().zip(Self::all().filter(|t| t.is_nondegenerate())) {
            *slot = t;
        }
        out
    }

    fn index(&self) -> Option<usize> {
        Self::nondegenerate().iter().position(|t| t == self)
    }
}

impl fmt::Display for PtolemyTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a}{b}{c}{d}")
    }
}

impl FromStr for PtolemyTuple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 || !bytes.iter().all(u8::is_ascii_digit) {
            return Err(Error::Index(format!("Ptolemy key {s:?} is not four digits")));
        }
        PtolemyTuple::new([0, 1, 2, 3].map(|i| bytes[i] - b'0'))
    }
}

fn tuple(s: &str) -> PtolemyTuple {
    // only called on the literal keys below
    s.parse().unwrap_or(PtolemyTuple([3, 0, 0, 0]))
}

/// A decoration: four determinant-one matrices, one per vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decoration {
    g: [Mat3; 4],
}

impl Decoration {
    /// Checks `|det gᵢ - 1| < 1e-9` for every vertex.
    pub fn new(g: [Mat3; 4]) -> Result<Self> {
        for (i, m) in g.iter().enumerate() {
            if !m.is_finite() {
                return Err(Error::NonFinite("decoration matrix"));
            }
            let det = m.det();
            if !((det - 1.0).norm() < DET_TOL) {
                return Err(Error::Validation(format!(
                    "vertex {i}: determinant {det} is not 1"
                )));
            }
        }
        Ok(Decoration { g })
    }

    /// The matrix at vertex `i`.
    pub fn matrix(&self, i: usize) -> &Mat3 {
        &self.g[i]
    }

    /// All four matrices.
    pub fn matrices(&self) -> &[Mat3; 4] {
        &self.g
    }

    /// Applies `f` to every matrix and revalidates.
    pub fn map<F: FnMut(&Mat3) -> Result<Mat3>>(&self, mut f: F) -> Result<Self> {
        let mut g = self.g;
        for m in g.iter_mut() {
            *m = f(m)?;
        }
        Decoration::new(g)
    }

    /// Flags of the vertices.
    pub fn flags(&self) -> Result<FlagTetrahedron> {
        FlagTetrahedron::from_decoration(&self.g)
    }
}

/// `det` of the columns `{g₀}_{t₀} ∪ {g₁}_{t₁} ∪ {g₂}_{t₂} ∪ {g₃}_{t₃}`.
pub fn ptolemy_coordinate(d: &Decoration, t: PtolemyTuple) -> Complex {
    let mut cols: [Vec3; 3] = [[Complex::new(0.0, 0.0); 3]; 3];
    let mut n = 0;
    for (i, &ti) in t.0.iter().enumerate() {
        for k in 0..ti as usize {
            cols[n] = d.g[i].col(k);
            n += 1;
        }
    }
    det_cols(&cols[0], &cols[1], &cols[2])
}

/// The 16 nondegenerate Ptolemy coordinates of one tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtolemyCoordinates {
    values: [Complex; 16],
}

impl PtolemyCoordinates {
    /// Builds from `(tuple, value)` pairs; all 16 nondegenerate tuples must be
    /// present and every value must be nonzero relative to the largest.
    pub fn from_pairs<I: IntoIterator<Item = (PtolemyTuple, Complex)>>(pairs: I) -> Result<Self> {
        let mut values = [Complex::new(0.0, 0.0); 16];
        let mut seen = [false; 16];
        for (t, v) in pairs {
            let idx = t
                .index()
                .ok_or_else(|| Error::Index(format!("Ptolemy tuple {t} has an entry 3")))?;
            if seen[idx] {
                return Err(Error::Index(format!("Ptolemy tuple {t} given twice")));
            }
            seen[idx] = true;
            values[idx] = v;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Index(format!(
                "Ptolemy tuple {} missing",
                PtolemyTuple::nondegenerate()[missing]
            )));
        }
        Self::from_values(values)
    }

    fn from_values(values: [Complex; 16]) -> Result<Self> {
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("Ptolemy coordinate"));
        }
        let largest = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let tuples = PtolemyTuple::nondegenerate();
        for (t, v) in tuples.iter().zip(values.iter()) {
            if !(v.norm() > PTOLEMY_TOL * largest) {
                return Err(Error::Degenerate(format!("Ptolemy coordinate c_{t} vanishes")));
            }
        }
        Ok(PtolemyCoordinates { values })
    }

    /// `c_t`; `None` for tuples with an entry 3.
    pub fn get(&self, t: PtolemyTuple) -> Option<Complex> {
        t.index().map(|i| self.values[i])
    }

    fn at(&self, key: &str) -> Complex {
        self.get(tuple(key)).unwrap_or(Complex::new(1.0, 0.0))
    }

    /// `(tuple, value)` pairs in the canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (PtolemyTuple, Complex)> + '_ {
        PtolemyTuple::nondegenerate().into_iter().zip(self.values.iter().copied())
    }

    /// Coordinatewise conjugate.
    pub fn conj(&self) -> Self {
        PtolemyCoordinates { values: self.values.map(|v| v.conj()) }
    }
}

/// All 16 nondegenerate coordinates, or a degenerate error naming the tuple
/// that vanishes.
pub fn ptolemy_all(d: &Decoration) -> Result<PtolemyCoordinates> {
    let tuples = PtolemyTuple::nondegenerate();
    PtolemyCoordinates::from_values(tuples.map(|t| ptolemy_coordinate(d, t)))
}

// Per subsimplex: (a, b, c, d, e, f) gives
//   w0 = log a + log b - log c - log d,   exp(w0) = z
//   l  = log e + log f - log c - log d,   exp(l)  = 1 - z
const SUBSIMPLICES: [[&str; 6]; 4] = [
    ["2001", "1110", "2010", "1101", "2100", "1011"],
    ["1101", "0210", "1110", "0201", "1200", "0111"],
    ["1011", "0120", "1020", "0111", "1110", "0021"],
    ["1002", "0111", "1011", "0102", "1101", "0012"],
];

/// The four cross-ratios `c_a c_b / (c_c c_d)` of the subsimplices.
pub fn gtz_ratios(c: &PtolemyCoordinates) -> [Complex; 4] {
    SUBSIMPLICES.map(|[a, b, cc, d, _, _]| c.at(a) * c.at(b) / (c.at(cc) * c.at(d)))
}

/// Flattenings of the four subsimplices, built from principal logarithms of
/// the Ptolemy coordinates.
///
/// The first coordinate is `log c_a + log c_b - log c_c - log c_d`. The sum
/// `log c_e + log c_f - log c_c - log c_d` exponentiates to `1 - z` (Plücker
/// relation), so the second coordinate is its negative, which puts the pair
/// in the `w1 = -Log(1 - z) + qπi` form of [`Flattening`].
pub fn gtz_flattenings(c: &PtolemyCoordinates) -> Result<[Flattening; 4]> {
    let l = |k: &str| log(c.at(k));
    let flats = SUBSIMPLICES
        .iter()
        .map(|&[a, b, cc, d, e, f]| {
            let w0 = l(a) + l(b) - l(cc) - l(d);
            let w1 = -(l(e) + l(f) - l(cc) - l(d));
            flattening_from_logs(w0, w1)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok([flats[0], flats[1], flats[2], flats[3]])
}

/// `Σ_m [c_a c_b / (c_c c_d)]` over the four subsimplices.
pub fn gtz_prebloch_element(c: &PtolemyCoordinates) -> Result<PreBlochElement> {
    PreBlochElement::from_terms(gtz_ratios(c).into_iter().map(|z| (1, z)))
}

/// Maximum deviations found by [`det_identities_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetIdentityReport {
    /// `max |det({gᵢ}₁{gⱼ}₁{g_k}₁) - det(xᵢ, xⱼ, x_k)|` over all `i, j, k`.
    pub point_det: f64,
    /// `max |det({gᵢ}₂{gⱼ}₁) - fᵢ(xⱼ)|` over all `i, j`.
    pub pairing: f64,
    /// Number of index choices compared.
    pub cases: usize,
}

impl DetIdentityReport {
    /// Largest of both deviations.
    pub fn max_deviation(&self) -> f64 {
        self.point_det.max(self.pairing)
    }
}

/// Compares determinants of assembled columns against the flag
/// representatives produced by [`flag_from_decoration`].
pub fn det_identities_check(d: &Decoration) -> Result<DetIdentityReport> {
    let flags = d.g.iter().map(flag_from_decoration).collect::<Result<Vec<_>>>()?;
    let x = |i: usize| flags[i].point().coords();
    let f = |i: usize| flags[i].covector().coords();
    let mut report = DetIdentityReport { point_det: 0.0, pairing: 0.0, cases: 0 };
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let lhs = det_cols(&d.g[i].col(0), &d.g[j].col(0), &d.g[k].col(0));
                let rhs = det_cols(&x(i), &x(j), &x(k));
                report.point_det = report.point_det.max((lhs - rhs).norm());
                report.cases += 1;
            }
            let lhs = det_cols(&d.g[i].col(0), &d.g[i].col(1), &d.g[j].col(0));
            let rhs = dot(&f(i), &x(j));
            report.pairing = report.pairing.max((lhs - rhs).norm());
            report.cases += 1;
        }
    }
    Ok(report)
}

/// True iff `g⁻¹h` is unipotent upper triangular within [`COSET_TOL`].
pub fn coset_equivalent(g: &Mat3, h: &Mat3) -> bool {
    match g.inverse() {
        Ok(inv) => (inv * *h).is_unipotent_upper(COSET_TOL),
        Err(_) => false,
    }
}
