//! Flags in `CP²` and their projective invariants.
//!
//! A flag is an incident pair of a point `x` and a line, the line given as a
//! linear form `f` with `f(x) = 0`. Flags in a [`FlagTetrahedron`] carry the
//! labels `1..=4`; faces are addressed by the label they omit.

use alloc::format;

use crate::linalg::{conj_vec, cross, det_cols, dot, is_finite_vec, max_norm, scale, Vec3};
use crate::prebloch::PreBlochElement;
use crate::{Complex, Error, Mat3, Result};

/// Incidence tolerance `|f(x)|` on normalized representatives.
pub const INCIDENCE_TOL: f64 = 1e-9;

/// Lower bound for the pairings and determinants of a generic tetrahedron,
/// measured on normalized representatives.
pub const GENERIC_TOL: f64 = 1e-10;

/// Factors below this abort a cross-ratio or triple-ratio evaluation.
pub const FACTOR_TOL: f64 = 1e-12;

/// Allowed deviation of `det g` from 1.
pub const DET_TOL: f64 = 1e-9;

fn normalize(v: &Vec3) -> Vec3 {
    let k = (0..3)
        .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()))
        .unwrap_or(0);
    scale(v, v[k].inv())
}

fn check_coords(v: &Vec3, what: &str) -> Result<()> {
    if !is_finite_vec(v) {
        return Err(Error::NonFinite("projective coordinates"));
    }
    if max_norm(v) == 0.0 {
        return Err(Error::Degenerate(format!("{what} with all coordinates zero")));
    }
    Ok(())
}

macro_rules! homogeneous {
    ($name:ident, $what:literal) => {
        #[doc = concat!("A ", $what, " given by homogeneous coordinates.")]
        ///
        /// The representative passed in is kept as is; [`Self::normalized`]
        /// rescales so that the largest-modulus coordinate is 1.
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name {
            coords: Vec3,
        }

        impl $name {
            /// Wraps a nonzero, finite representative.
            pub fn new(coords: Vec3) -> Result<Self> {
                check_coords(&coords, $what)?;
                Ok(Self { coords })
            }

            /// The stored representative.
            pub fn coords(&self) -> Vec3 {
                self.coords
            }

            /// Representative with largest-modulus coordinate equal to 1.
            pub fn normalized(&self) -> Vec3 {
                normalize(&self.coords)
            }

            /// The same projective element with another representative.
            pub fn rescaled(&self, s: Complex) -> Result<Self> {
                Self::new(scale(&self.coords, s))
            }

            /// True when both describe the same projective element.
            pub fn same_as(&self, other: &Self, tol: f64) -> bool {
                let (a, b) = (self.normalized(), other.normalized());
                (0..3).all(|i| (a[i] - b[i]).norm() <= tol)
            }
        }
    };
}

homogeneous!(ProjectivePoint, "point of CP²");
homogeneous!(ProjectiveCovector, "line of CP² (linear form)");

/// An incident point-line pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flag {
    x: ProjectivePoint,
    f: ProjectiveCovector,
}

impl Flag {
    /// Checks incidence on normalized representatives.
    pub fn new(x: ProjectivePoint, f: ProjectiveCovector) -> Result<Self> {
        let pairing = dot(&f.normalized(), &x.normalized()).norm();
        if pairing >= INCIDENCE_TOL {
            return Err(Error::Degenerate(format!("point and line not incident (|f(x)| = {pairing:e})")));
        }
        Ok(Flag { x, f })
    }

    /// Builds a flag from raw coordinate triples.
    pub fn from_coords(x: Vec3, f: Vec3) -> Result<Self> {
        Flag::new(ProjectivePoint::new(x)?, ProjectiveCovector::new(f)?)
    }

    /// `([e₁], [⟨e₃, ·⟩])`.
    pub fn standard() -> Self {
        let o = Complex::new(0.0, 0.0);
        let l = Complex::new(1.0, 0.0);
        Flag {
            x: ProjectivePoint { coords: [l, o, o] },
            f: ProjectiveCovector { coords: [o, o, l] },
        }
    }

    /// The point.
    pub fn point(&self) -> &ProjectivePoint {
        &self.x
    }

    /// The line, as a linear form.
    pub fn covector(&self) -> &ProjectiveCovector {
        &self.f
    }

    /// Coordinatewise complex conjugate flag.
    pub fn conj(&self) -> Self {
        Flag {
            x: ProjectivePoint { coords: conj_vec(&self.x.coords) },
            f: ProjectiveCovector { coords: conj_vec(&self.f.coords) },
        }
    }

    /// Image under `g ∈ GL(3)`: `x ↦ g x`, `f ↦ f ∘ g⁻¹`.
    pub fn transformed(&self, g: &Mat3) -> Result<Self> {
        let inv = g.inverse()?;
        let f = inv.transpose().apply(&self.f.coords);
        Flag::from_coords(g.apply(&self.x.coords), f)
    }

    /// True when both flags agree projectively.
    pub fn same_as(&self, other: &Flag, tol: f64) -> bool {
        self.x.same_as(&other.x, tol) && self.f.same_as(&other.f, tol)
    }
}

/// Flag of the coset `gN`: the first column of `g` and the form
/// `v ↦ det(g e₁, g e₂, v)`, which is the third row of `g⁻¹` when `det g = 1`.
pub fn flag_from_decoration(g: &Mat3) -> Result<Flag> {
    let det = g.det();
    if !((det - 1.0).norm() < DET_TOL) {
        return Err(Error::Determinant { re: det.re, im: det.im });
    }
    let x = g.col(0);
    let f = cross(&g.col(0), &g.col(1));
    Ok(Flag {
        x: ProjectivePoint::new(x)?,
        f: ProjectiveCovector::new(f)?,
    })
}

/// Point becomes form and form becomes point.
pub fn dual_flag(fl: &Flag) -> Flag {
    Flag {
        x: ProjectivePoint { coords: fl.f.coords },
        f: ProjectiveCovector { coords: fl.x.coords },
    }
}

/// `f₁(x₂) f₂(x₃) f₃(x₁) / (f₁(x₃) f₂(x₁) f₃(x₂))`.
pub fn triple_ratio(f1: &Flag, f2: &Flag, f3: &Flag) -> Result<Complex> {
    let fl = [f1, f2, f3];
    let x: [Vec3; 3] = [0, 1, 2].map(|i| fl[i].x.normalized());
    let f: [Vec3; 3] = [0, 1, 2].map(|i| fl[i].f.normalized());
    let num = [dot(&f[0], &x[1]), dot(&f[1], &x[2]), dot(&f[2], &x[0])];
    let den = [dot(&f[0], &x[2]), dot(&f[1], &x[0]), dot(&f[2], &x[1])];
    if num.iter().chain(den.iter()).any(|v| v.norm() < FACTOR_TOL) {
        return Err(Error::Degenerate("triple ratio of non-generic flags".into()));
    }
    Ok(num[0] * num[1] * num[2] / (den[0] * den[1] * den[2]))
}

/// The index pairs `(i, j)` of the four cross-ratios entering the volume
/// element, with `(k, l)` completing an even permutation.
pub const BFG_ORDERS: [[usize; 4]; 4] = [[1, 2, 3, 4], [2, 1, 4, 3], [3, 4, 1, 2], [4, 3, 2, 1]];

fn parity_is_even(p: &[usize; 4]) -> bool {
    let mut inversions = 0;
    for a in 0..4 {
        for b in a + 1..4 {
            if p[a] > p[b] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// Completes `(i, j)` to an even permutation `(i, j, k, l)` of `(1, 2, 3, 4)`.
pub fn even_completion(i: usize, j: usize) -> Result<[usize; 4]> {
    if !(1..=4).contains(&i) || !(1..=4).contains(&j) || i == j {
        return Err(Error::Index(format!("flag labels ({i}, {j}) must be distinct in 1..=4")));
    }
    let mut rest = (1..=4).filter(|&m| m != i && m != j);
    let (k, l) = (rest.next().unwrap_or(0), rest.next().unwrap_or(0));
    let p = [i, j, k, l];
    Ok(if parity_is_even(&p) { p } else { [i, j, l, k] })
}

fn check_order(order: &[usize; 4]) -> Result<()> {
    let mut seen = [false; 5];
    for &m in order {
        if !(1..=4).contains(&m) || seen[m] {
            return Err(Error::Index(format!("{order:?} is not a permutation of 1..=4")));
        }
        seen[m] = true;
    }
    if !parity_is_even(order) {
        return Err(Error::Index(format!("{order:?} is an odd permutation")));
    }
    Ok(())
}

/// Four flags labelled `1..=4` in generic position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlagTetrahedron {
    flags: [Flag; 4],
}

impl FlagTetrahedron {
    /// Checks genericity: `fᵢ(xⱼ) ≠ 0` for `i ≠ j` and `det(xᵢ, xⱼ, x_k) ≠ 0`
    /// for distinct labels, on normalized representatives.
    pub fn new(flags: [Flag; 4]) -> Result<Self> {
        let x = flags.map(|fl| fl.x.normalized());
        let f = flags.map(|fl| fl.f.normalized());
        for i in 0..4 {
            for j in 0..4 {
                if i != j && dot(&f[i], &x[j]).norm() < GENERIC_TOL {
                    return Err(Error::Degenerate(format!(
                        "flag tetrahedron: f{}(x{}) vanishes",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        for omit in 0..4 {
            let idx: [usize; 3] = face_positions(omit);
            if det_cols(&x[idx[0]], &x[idx[1]], &x[idx[2]]).norm() < GENERIC_TOL {
                return Err(Error::Degenerate(format!(
                    "flag tetrahedron: points of face opposite {} are collinear",
                    omit + 1
                )));
            }
        }
        Ok(FlagTetrahedron { flags })
    }

    /// The flags of a decorated tetrahedron (position `i` gets label `i + 1`).
    pub fn from_decoration(g: &[Mat3; 4]) -> Result<Self> {
        let mut flags = [Flag::standard(); 4];
        for (fl, gi) in flags.iter_mut().zip(g) {
            *fl = flag_from_decoration(gi)?;
        }
        FlagTetrahedron::new(flags)
    }

    /// Flag with label `label ∈ 1..=4`.
    pub fn flag(&self, label: usize) -> &Flag {
        &self.flags[label - 1]
    }

    /// All four flags in label order.
    pub fn flags(&self) -> &[Flag; 4] {
        &self.flags
    }

    /// Conjugates every coordinate.
    pub fn conj(&self) -> Self {
        FlagTetrahedron { flags: self.flags.map(|f| f.conj()) }
    }

    /// Replaces every flag by its dual.
    pub fn dual(&self) -> Result<Self> {
        FlagTetrahedron::new(self.flags.map(|f| dual_flag(&f)))
    }

    /// Simultaneous image under `g`.
    pub fn transformed(&self, g: &Mat3) -> Result<Self> {
        let mut flags = self.flags;
        for fl in flags.iter_mut() {
            *fl = fl.transformed(g)?;
        }
        FlagTetrahedron::new(flags)
    }

    /// The three flags of the face omitting position `omit ∈ 0..4`, in
    /// ascending order.
    pub fn face(&self, omit: usize) -> [Flag; 3] {
        face_positions(omit).map(|i| self.flags[i])
    }

    /// Triple ratio of the face omitting position `omit`.
    pub fn face_triple_ratio(&self, omit: usize) -> Result<Complex> {
        let [a, b, c] = self.face(omit);
        triple_ratio(&a, &b, &c)
    }
}

/// Positions `0..4` other than `omit`, ascending.
pub fn face_positions(omit: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut n = 0;
    for i in 0..4 {
        if i != omit && n < 3 {
            out[n] = i;
            n += 1;
        }
    }
    out
}

/// `z_ij = fᵢ(x_k) det(xᵢ, xⱼ, x_l) / (fᵢ(x_l) det(xᵢ, xⱼ, x_k))` with
/// `(i, j, k, l)` the even completion of `(i, j)`.
pub fn cross_ratio_zij(t: &FlagTetrahedron, i: usize, j: usize) -> Result<Complex> {
    cross_ratio_ordered(t, &even_completion(i, j)?)
}

/// [`cross_ratio_zij`] with an explicit order `(i, j, k, l)`; odd orders are rejected.
pub fn cross_ratio_ordered(t: &FlagTetrahedron, order: &[usize; 4]) -> Result<Complex> {
    check_order(order)?;
    let [i, j, k, l] = *order;
    let x = |m: usize| t.flag(m).x.normalized();
    let fi = t.flag(i).f.normalized();
    let factors = [
        dot(&fi, &x(k)),
        det_cols(&x(i), &x(j), &x(l)),
        dot(&fi, &x(l)),
        det_cols(&x(i), &x(j), &x(k)),
    ];
    if factors.iter().any(|v| v.norm() < FACTOR_TOL) {
        return Err(Error::Degenerate(format!("cross-ratio z{i}{j}: vanishing factor")));
    }
    Ok(factors[0] * factors[1] / (factors[2] * factors[3]))
}

/// The same cross-ratio computed in the pencil of lines through `xᵢ`.
///
/// Lines through `xᵢ` are linear forms vanishing on `xᵢ`; in a basis `(a, b)`
/// of that plane each line becomes a point `[α : β]` of `CP¹`. The value is the
/// classical cross-ratio `(P₀, P₁; P₂, P₃)` of the lines `ker fᵢ`, `(xᵢxⱼ)`,
/// `(xᵢx_k)`, `(xᵢx_l)`.
pub fn cross_ratio_oracle(t: &FlagTetrahedron, i: usize, j: usize) -> Result<Complex> {
    let [i, j, k, l] = even_completion(i, j)?;
    let xi = t.flag(i).x.normalized();
    let x = |m: usize| t.flag(m).x.normalized();

    // basis of forms vanishing at xi: eₚ × xi, e_q × xi with r = argmax |xi_r|
    let r = (0..3)
        .max_by(|&a, &b| xi[a].norm().total_cmp(&xi[b].norm()))
        .unwrap_or(0);
    let unit = |m: usize| {
        let mut e = [Complex::new(0.0, 0.0); 3];
        e[m] = Complex::new(1.0, 0.0);
        e
    };
    let (p, q) = ((r + 1) % 3, (r + 2) % 3);
    let a = cross(&unit(p), &xi);
    let b = cross(&unit(q), &xi);

    let lines = [
        t.flag(i).f.normalized(),
        cross(&xi, &x(j)),
        cross(&xi, &x(k)),
        cross(&xi, &x(l)),
    ];
    let coords = lines.map(|line| pencil_coords(&a, &b, &line));
    let bracket = |u: usize, v: usize| coords[u].0 * coords[v].1 - coords[u].1 * coords[v].0;
    let num = bracket(0, 2) * bracket(1, 3);
    let den = bracket(0, 3) * bracket(1, 2);
    let scale_ref = coords.iter().map(|c| c.0.norm().max(c.1.norm())).fold(0.0, f64::max);
    if den.norm() < FACTOR_TOL * libm::pow(scale_ref, 4.0) || scale_ref == 0.0 {
        return Err(Error::Degenerate(format!("pencil cross-ratio z{i}{j}: coincident lines")));
    }
    Ok(num / den)
}

/// Solves `line = α a + β b` using the best-conditioned pair of coordinates.
fn pencil_coords(a: &Vec3, b: &Vec3, line: &Vec3) -> (Complex, Complex) {
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let (r, s) = pairs
        .into_iter()
        .max_by(|&(r1, s1), &(r2, s2)| {
            let d1 = (a[r1] * b[s1] - a[s1] * b[r1]).norm();
            let d2 = (a[r2] * b[s2] - a[s2] * b[r2]).norm();
            d1.total_cmp(&d2)
        })
        .unwrap_or((0, 1));
    let det = a[r] * b[s] - a[s] * b[r];
    let alpha = (line[r] * b[s] - line[s] * b[r]) / det;
    let beta = (a[r] * line[s] - a[s] * line[r]) / det;
    (alpha, beta)
}

/// The four cross-ratios `z₁₂, z₂₁, z₃₄, z₄₃`.
pub fn bfg_parameters(t: &FlagTetrahedron) -> Result<[Complex; 4]> {
    let mut out = [Complex::new(0.0, 0.0); 4];
    for (o, order) in out.iter_mut().zip(BFG_ORDERS.iter()) {
        *o = cross_ratio_ordered(t, order)?;
    }
    Ok(out)
}

/// `[z₁₂] + [z₂₁] + [z₃₄] + [z₄₃]`.
pub fn bfg_element(t: &FlagTetrahedron) -> Result<PreBlochElement> {
    let zs = bfg_parameters(t)?;
    PreBlochElement::from_terms(zs.into_iter().map(|z| (1, z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn e(m: usize) -> Vec3 {
        let mut v = [c(0.0, 0.0); 3];
        v[m] = c(1.0, 0.0);
        v
    }

    fn real(v: [f64; 3]) -> Vec3 {
        v.map(|r| c(r, 0.0))
    }

    fn sample_tet() -> FlagTetrahedron {
        let g = [
            Mat3::from_rows([
                [c(1.0, 0.2), c(0.3, -1.0), c(0.0, 0.5)],
                [c(0.4, 0.0), c(1.2, 0.3), c(-0.7, 0.1)],
                [c(-0.5, 0.6), c(0.2, 0.2), c(0.9, -0.4)],
            ]),
            Mat3::from_rows([
                [c(0.1, -0.8), c(1.0, 0.0), c(0.3, 0.3)],
                [c(1.1, 0.4), c(-0.2, 0.5), c(0.6, -1.0)],
                [c(0.0, 0.7), c(0.8, -0.3), c(-0.4, 0.2)],
            ]),
            Mat3::from_rows([
                [c(-0.6, 0.1), c(0.5, 0.5), c(1.0, -0.2)],
                [c(0.3, -0.9), c(0.7, 0.0), c(0.2, 0.8)],
                [c(1.3, 0.2), c(-0.1, -0.6), c(0.4, 0.4)],
            ]),
            Mat3::from_rows([
                [c(0.9, 0.9), c(-0.4, 0.1), c(0.2, 0.0)],
                [c(0.0, -0.3), c(1.0, 0.6), c(-0.8, 0.5)],
                [c(0.6, 0.0), c(0.3, -0.7), c(1.1, 0.1)],
            ]),
        ];
        let flags = g.map(|m| {
            let x = m.col(0);
            let f = cross(&m.col(0), &m.col(1));
            Flag::from_coords(x, f).unwrap()
        });
        FlagTetrahedron::new(flags).unwrap()
    }

    #[test]
    fn identity_gives_standard_flag() {
        let fl = flag_from_decoration(&Mat3::IDENTITY).unwrap();
        assert!(fl.same_as(&Flag::standard(), 0.0));
        let d = Mat3::diag([c(2.0, 1.0), c(0.5, -0.5), c(1.0, 0.0) / (c(2.0, 1.0) * c(0.5, -0.5))]);
        let fl = flag_from_decoration(&d).unwrap();
        assert!(fl.same_as(&Flag::standard(), 1e-15));
    }

    #[test]
    fn decoration_flag_needs_unit_determinant() {
        let g = Mat3::IDENTITY.scale(c(2.0, 0.0));
        assert!(matches!(flag_from_decoration(&g), Err(Error::Determinant { .. })));
    }

    #[test]
    fn incidence_is_checked() {
        assert!(Flag::from_coords(e(0), e(0)).is_err());
        assert!(Flag::from_coords(e(0), e(2)).is_ok());
        assert!(ProjectivePoint::new([c(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn even_completion_table() {
        for order in BFG_ORDERS {
            assert_eq!(even_completion(order[0], order[1]).unwrap(), order);
        }
        assert!(even_completion(1, 1).is_err());
        assert!(even_completion(0, 2).is_err());
    }

    #[test]
    fn odd_order_rejected() {
        let t = sample_tet();
        assert!(matches!(cross_ratio_ordered(&t, &[1, 2, 4, 3]), Err(Error::Index(_))));
        assert!(cross_ratio_ordered(&t, &[1, 2, 3, 4]).is_ok());
    }

    #[test]
    fn formula_matches_pencil_oracle() {
        let t = sample_tet();
        for i in 1..=4 {
            for j in 1..=4 {
                if i == j {
                    continue;
                }
                let a = cross_ratio_zij(&t, i, j).unwrap();
                let b = cross_ratio_oracle(&t, i, j).unwrap();
                assert!((a - b).norm() <= 1e-12 * a.norm(), "z{i}{j}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn cross_ratio_is_representative_independent() {
        let t = sample_tet();
        let mut flags = *t.flags();
        flags[2] = Flag::new(
            flags[2].point().rescaled(c(-3.0, 7.0)).unwrap(),
            flags[2].covector().rescaled(c(0.01, 0.2)).unwrap(),
        )
        .unwrap();
        let u = FlagTetrahedron::new(flags).unwrap();
        for order in BFG_ORDERS {
            let a = cross_ratio_ordered(&t, &order).unwrap();
            let b = cross_ratio_ordered(&u, &order).unwrap();
            assert!((a - b).norm() < 1e-13 * a.norm());
        }
    }

    #[test]
    fn conjugate_tetrahedron_negates_volume_element() {
        let t = sample_tet();
        let a = bfg_element(&t).unwrap().dilog_eval();
        let b = bfg_element(&t.conj()).unwrap().dilog_eval();
        assert!((a + b).abs() < 1e-13);
    }

    #[test]
    fn repeated_flag_is_degenerate() {
        let t = sample_tet();
        let mut flags = *t.flags();
        flags[3] = flags[0];
        assert!(matches!(FlagTetrahedron::new(flags), Err(Error::Degenerate(_))));
    }

    #[test]
    fn triple_ratio_examples() {
        let f1 = Flag::from_coords(e(0), real([0.0, 1.0, 1.0])).unwrap();
        let f2 = Flag::from_coords(e(1), real([1.0, 0.0, 1.0])).unwrap();
        let f3 = Flag::from_coords(e(2), real([1.0, 1.0, 0.0])).unwrap();
        let t = triple_ratio(&f1, &f2, &f3).unwrap();
        assert!((t - c(1.0, 0.0)).norm() < 1e-15);

        let [a, b, cc, _] = *sample_tet().flags();
        let t0 = triple_ratio(&a, &b, &cc).unwrap();
        let t1 = triple_ratio(&b, &cc, &a).unwrap();
        assert!((t0 - t1).norm() < 1e-13 * t0.norm());
        let scaled = Flag::new(a.point().rescaled(c(4.0, -1.0)).unwrap(), *a.covector()).unwrap();
        let t2 = triple_ratio(&scaled, &b, &cc).unwrap();
        assert!((t0 - t2).norm() < 1e-13 * t0.norm());
    }

    #[test]
    fn dual_flag_swaps_and_is_involutive() {
        let d = dual_flag(&Flag::standard());
        assert_eq!(d.point().coords(), e(2));
        assert_eq!(d.covector().coords(), e(0));
        let [a, ..] = *sample_tet().flags();
        assert_eq!(dual_flag(&dual_flag(&a)), a);
        let da = dual_flag(&a);
        assert!(dot(&da.covector().normalized(), &da.point().normalized()).norm() < 1e-12);
    }
}
