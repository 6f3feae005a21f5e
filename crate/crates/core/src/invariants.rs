//! Total invariants of decorated complexes, the two dual decorations and the
//! relations between them.
//!
//! Sums run over tetrahedra in increasing id order so reports are bit-stable.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dilog::{bloch_wigner_finite, extended_rogers, LATTICE};
use crate::flags::{bfg_element, FlagTetrahedron};
use crate::ptolemy::{gtz_flattenings, gtz_prebloch_element, ptolemy_all, PtolemyCoordinates};
use crate::triangulation::{DecoratedComplex, Payload, Tetrahedron};
use crate::{Complex, Error, Mat3, Result};

pub use crate::lie::Involution;

/// Tolerance of the relations asserted by [`relation_report`].
pub const RELATION_TOL: f64 = 1e-9;

/// Tolerance for the total transpose-inverse relation on closed complexes.
pub const CLOSED_TOL: f64 = 1e-8;

/// Tolerance for the real part of `ĉ` under the Cartan dual, modulo the lattice.
pub const CS_TOL: f64 = 1e-6;

/// Fit tolerance of the coboundary sign search.
pub const PROBE_TOL: f64 = 1e-8;

/// The determinant-one signed antidiagonal matrix used to correct the
/// transpose-inverse so that it maps `N`-cosets to `N`-cosets. It is its own
/// inverse.
pub fn antidiagonal() -> Mat3 {
    Mat3::from_real([[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]])
}

/// Contributions of one tetrahedron, orientation sign included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetContribution {
    /// Tetrahedron id.
    pub id: i64,
    /// `±1`.
    pub orientation: i8,
    /// `¼ Σ D(z_ij)`, or `-¼` of the GTZ value when derived.
    pub vol_bfg: f64,
    /// Whether `vol_bfg` was derived from the GTZ value.
    pub bfg_derived: bool,
    /// `Σ_m D(z_m)` over the Ptolemy cross-ratios.
    pub vol_gtz: f64,
    /// `Σ_m R̂(flattening m)`.
    pub cchat: Complex,
}

/// Invariants of a complex with per-tetrahedron breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    /// Total BFG volume.
    pub vol_bfg: f64,
    /// True if any tetrahedron's BFG value was derived from its GTZ value.
    pub bfg_derived: bool,
    /// Total GTZ volume.
    pub vol_gtz: f64,
    /// Raw sum of extended Rogers values; defined modulo `lattice`.
    pub cchat: Complex,
    /// Real period of `cchat`.
    pub lattice: f64,
    /// `|vol_bfg + ¼ vol_gtz|`.
    pub relation_residual: f64,
    /// `Im(cchat) - vol_gtz`, a diagnostic only.
    pub cchat_residual: f64,
    /// Per-tetrahedron contributions in id order.
    pub per_tet: Vec<TetContribution>,
    /// Human readable warnings.
    pub warnings: Vec<String>,
}

fn coordinates(t: &Tetrahedron) -> Result<PtolemyCoordinates> {
    match &t.payload {
        Payload::Matrices(d) => ptolemy_all(d),
        Payload::Ptolemy(c) => Ok(*c),
    }
}

fn tet_bfg(t: &Tetrahedron) -> Result<Option<f64>> {
    match &t.payload {
        Payload::Matrices(d) => Ok(Some(0.25 * bfg_element(&d.flags()?)?.dilog_eval())),
        Payload::Ptolemy(_) => Ok(None),
    }
}

fn tet_gtz(c: &PtolemyCoordinates) -> Result<f64> {
    Ok(gtz_prebloch_element(c)?.dilog_eval())
}

fn tet_cchat(c: &PtolemyCoordinates) -> Result<Complex> {
    Ok(gtz_flattenings(c)?.iter().map(extended_rogers).sum())
}

/// Contributions of a single tetrahedron.
pub fn tet_contribution(t: &Tetrahedron) -> Result<TetContribution> {
    let inner = || -> Result<TetContribution> {
        let s = t.orientation.sign();
        let coords = coordinates(t)?;
        let gtz = tet_gtz(&coords)?;
        let bfg = tet_bfg(t)?;
        Ok(TetContribution {
            id: t.id,
            orientation: t.orientation.as_i8(),
            vol_bfg: s * bfg.unwrap_or(-0.25 * gtz),
            bfg_derived: bfg.is_none(),
            vol_gtz: s * gtz,
            cchat: tet_cchat(&coords)? * s,
        })
    };
    inner().map_err(|e| e.at_tet(t.id))
}

/// Total BFG volume. Tetrahedra with Ptolemy payloads contribute `-¼` of
/// their GTZ value.
pub fn vol_bfg(c: &DecoratedComplex) -> Result<f64> {
    let mut total = 0.0;
    for t in c.sorted_tetrahedra() {
        let v = match tet_bfg(t).map_err(|e| e.at_tet(t.id))? {
            Some(v) => v,
            None => -0.25 * coordinates(t).and_then(|k| tet_gtz(&k)).map_err(|e| e.at_tet(t.id))?,
        };
        total += t.orientation.sign() * v;
    }
    Ok(total)
}

/// Total GTZ volume `Σ orientation · D(Σ_m [z_m])`.
pub fn vol_gtz(c: &DecoratedComplex) -> Result<f64> {
    let mut total = 0.0;
    for t in c.sorted_tetrahedra() {
        let v = coordinates(t).and_then(|k| tet_gtz(&k)).map_err(|e| e.at_tet(t.id))?;
        total += t.orientation.sign() * v;
    }
    Ok(total)
}

/// `Σ orientation · Σ_m R̂(flattening m)`, defined modulo [`LATTICE`].
pub fn cchat(c: &DecoratedComplex) -> Result<Complex> {
    let mut total = Complex::new(0.0, 0.0);
    for t in c.sorted_tetrahedra() {
        let v = coordinates(t).and_then(|k| tet_cchat(&k)).map_err(|e| e.at_tet(t.id))?;
        total += v * t.orientation.sign();
    }
    Ok(total)
}

/// Full report for `c`.
pub fn invariant_report(c: &DecoratedComplex) -> Result<InvariantReport> {
    let per_tet = c
        .sorted_tetrahedra()
        .into_iter()
        .map(tet_contribution)
        .collect::<Result<Vec<_>>>()?;
    let vol_bfg: f64 = per_tet.iter().map(|t| t.vol_bfg).sum();
    let vol_gtz: f64 = per_tet.iter().map(|t| t.vol_gtz).sum();
    let cchat: Complex = per_tet.iter().map(|t| t.cchat).sum();
    let mut warnings = Vec::new();
    for t in per_tet.iter().filter(|t| t.bfg_derived) {
        warnings.push(format!("tetrahedron {}: vol_bfg derived as -1/4 vol_gtz (Ptolemy payload)", t.id));
    }
    if !c.is_closed() {
        warnings.push(format!("complex has {} unglued faces", c.unglued_faces().len()));
    }
    Ok(InvariantReport {
        vol_bfg,
        bfg_derived: per_tet.iter().any(|t| t.bfg_derived),
        vol_gtz,
        cchat,
        lattice: LATTICE,
        relation_residual: (vol_bfg + 0.25 * vol_gtz).abs(),
        cchat_residual: cchat.im - vol_gtz,
        per_tet,
        warnings,
    })
}

/// Image of one vertex matrix under the chosen dual.
pub fn dual_matrix(g: &Mat3, kind: Involution) -> Result<Mat3> {
    match kind {
        Involution::Cartan => Ok(g.conj()),
        Involution::TransposeInverse => {
            let w = antidiagonal();
            Ok(w * g.transpose().inverse()? * w)
        }
    }
}

/// Applies [`dual_matrix`] to every vertex matrix; gluings are unchanged.
pub fn dual_decoration(c: &DecoratedComplex, kind: Involution) -> Result<DecoratedComplex> {
    c.map_decorations(|d| d.map(|g| dual_matrix(g, kind)))
}

/// Distance from `x` to the nearest multiple of `period`.
pub fn distance_mod(x: f64, period: f64) -> f64 {
    let r = x / period;
    (r - libm::round(r)).abs() * period
}

/// One relation evaluated by [`relation_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck {
    /// Short name.
    pub name: &'static str,
    /// What is compared.
    pub description: &'static str,
    /// Largest deviation found.
    pub deviation: f64,
    /// Allowed deviation.
    pub tol: f64,
    /// False for diagnostics that are reported but never fail the report.
    pub asserted: bool,
}

impl RelationCheck {
    /// Deviation within tolerance.
    pub fn within_tol(&self) -> bool {
        self.deviation <= self.tol
    }

    /// Counts as a failure of the report.
    pub fn failed(&self) -> bool {
        self.asserted && !self.within_tol()
    }
}

/// Invariants of a complex and of both its duals, with relation checks.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    /// The complex itself.
    pub base: InvariantReport,
    /// Its Cartan dual.
    pub cartan: InvariantReport,
    /// Its transpose-inverse dual.
    pub transpose_inverse: InvariantReport,
    /// Whether every face is glued.
    pub closed: bool,
    /// `¼ Σ orientation · ε_m · D(±T_m)` over unglued faces, using
    /// [`COBOUNDARY_PATTERN`].
    pub boundary_term: f64,
    /// Every evaluated relation.
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    /// No asserted check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.failed())
    }
}

/// Evaluates, for a complex with matrix payloads:
/// (i) `vol_bfg = -¼ vol_gtz` per tetrahedron and in total;
/// (ii) `vol_bfg` changes sign under the Cartan dual, per tetrahedron;
/// the real part of `ĉ` is kept by the Cartan dual modulo the lattice;
/// (iii) on closed complexes, the transpose-inverse dual keeps `vol_bfg`.
/// On open complexes (iii) is replaced by an unasserted comparison with the
/// boundary triple-ratio term.
///
/// Failed relations are listed, not raised.
pub fn relation_report(c: &DecoratedComplex) -> Result<RelationReport> {
    if let Some(t) = c.tetrahedra().iter().find(|t| t.decoration().is_none()) {
        return Err(Error::PtolemyPayload(t.id));
    }
    let base = invariant_report(c)?;
    let cartan = invariant_report(&dual_decoration(c, Involution::Cartan)?)?;
    let ti = invariant_report(&dual_decoration(c, Involution::TransposeInverse)?)?;
    let closed = c.is_closed();

    let per_tet_i = base
        .per_tet
        .iter()
        .map(|t| (t.vol_bfg + 0.25 * t.vol_gtz).abs())
        .fold(base.relation_residual, f64::max);
    let per_tet_ii = base
        .per_tet
        .iter()
        .zip(&cartan.per_tet)
        .map(|(a, b)| (a.vol_bfg + b.vol_bfg).abs())
        .fold((base.vol_bfg + cartan.vol_bfg).abs(), f64::max);
    let cs = base
        .per_tet
        .iter()
        .zip(&cartan.per_tet)
        .map(|(a, b)| distance_mod(a.cchat.re - b.cchat.re, LATTICE))
        .fold(0.0, f64::max);

    let mut boundary_term = 0.0;
    for face in c.unglued_faces() {
        let t = c.tetrahedron(face.tet).ok_or_else(|| Error::Validation(format!("unknown tetrahedron {}", face.tet)))?;
        let d = t.decoration().ok_or(Error::PtolemyPayload(t.id))?;
        let flags = d.flags().map_err(|e| e.at_tet(t.id))?;
        let v = COBOUNDARY_PATTERN.face_term(&flags, face.face as usize).map_err(|e| e.at_tet(t.id))?;
        boundary_term += 0.25 * t.orientation.sign() * v;
    }

    let mut checks = alloc::vec![
        RelationCheck {
            name: "bfg-gtz",
            description: "vol_bfg = -1/4 vol_gtz, per tetrahedron and total",
            deviation: per_tet_i,
            tol: RELATION_TOL,
            asserted: true,
        },
        RelationCheck {
            name: "cartan-volume",
            description: "vol_bfg(cartan dual) = -vol_bfg, per tetrahedron and total",
            deviation: per_tet_ii,
            tol: RELATION_TOL,
            asserted: true,
        },
        RelationCheck {
            name: "cartan-cs",
            description: "Re cchat(cartan dual) = Re cchat mod lattice, per tetrahedron",
            deviation: cs,
            tol: CS_TOL,
            asserted: true,
        },
    ];
    if closed {
        checks.push(RelationCheck {
            name: "transpose-inverse-volume",
            description: "vol_bfg(transpose-inverse dual) = vol_bfg on a closed complex",
            deviation: (ti.vol_bfg - base.vol_bfg).abs(),
            tol: CLOSED_TOL,
            asserted: true,
        });
    } else {
        checks.push(RelationCheck {
            name: "transpose-inverse-boundary",
            description: "vol_bfg(transpose-inverse dual) - vol_bfg = boundary triple-ratio term (not asserted)",
            deviation: (ti.vol_bfg - base.vol_bfg - boundary_term).abs(),
            tol: PROBE_TOL,
            asserted: false,
        });
    }
    Ok(RelationReport { base, cartan, transpose_inverse: ti, closed, boundary_term, checks })
}

/// A sign pattern `ε ∈ {±1}⁴` together with the choice of argument `T` or
/// `-T` for the face triple ratios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignPattern {
    /// `ε_m` for the face omitting vertex `m`.
    pub signs: [i8; 4],
    /// Use `D(-T_m)` instead of `D(T_m)`.
    pub negated_argument: bool,
}

/// The pattern found by [`dual_coboundary_probe`] on random tetrahedra:
/// alternating signs with negated triple ratios.
pub const COBOUNDARY_PATTERN: SignPattern = SignPattern { signs: [1, -1, 1, -1], negated_argument: true };

impl SignPattern {
    /// All `2⁴·2` patterns.
    pub fn all() -> impl Iterator<Item = SignPattern> {
        (0..32u8).map(|bits| SignPattern {
            signs: [0, 1, 2, 3].map(|m| if bits >> m & 1 == 0 { 1 } else { -1 }),
            negated_argument: bits >> 4 & 1 == 1,
        })
    }

    /// `ε_m · D(±T_m)` for the face omitting `m`.
    pub fn face_term(&self, t: &FlagTetrahedron, m: usize) -> Result<f64> {
        let tr = t.face_triple_ratio(m)?;
        let arg = if self.negated_argument { -tr } else { tr };
        Ok(self.signs[m] as f64 * bloch_wigner_finite(arg))
    }

    /// `Σ_m ε_m D(±T_m)` from precomputed values.
    fn evaluate(&self, d_plus: &[f64; 4], d_minus: &[f64; 4]) -> f64 {
        let vals = if self.negated_argument { d_minus } else { d_plus };
        (0..4).map(|m| self.signs[m] as f64 * vals[m]).sum()
    }
}

/// Outcome of [`dual_coboundary_probe`] on one tetrahedron.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    /// `D(bfg element of the dual) - D(bfg element)`.
    pub delta: f64,
    /// Triple ratios `T_m` of the faces, `m` the omitted vertex.
    pub triple_ratios: [Complex; 4],
    /// `D(T_m)`.
    pub d_triple: [f64; 4],
    /// `D(-T_m)`.
    pub d_neg_triple: [f64; 4],
    /// Every pattern fitting within [`PROBE_TOL`].
    pub fits: Vec<SignPattern>,
    /// Residual of the best pattern.
    pub best_residual: f64,
}

/// Searches the `2⁴·2` sign patterns expressing the change of the BFG sum
/// under flag duality as a signed sum of face triple-ratio dilogarithms.
pub fn dual_coboundary_probe(t: &FlagTetrahedron) -> Result<ProbeReport> {
    let delta = bfg_element(&t.dual()?)?.dilog_eval() - bfg_element(t)?.dilog_eval();
    let mut triple_ratios = [Complex::new(0.0, 0.0); 4];
    for (m, tr) in triple_ratios.iter_mut().enumerate() {
        *tr = t.face_triple_ratio(m)?;
    }
    let d_triple = triple_ratios.map(bloch_wigner_finite);
    let d_neg_triple = triple_ratios.map(|z| bloch_wigner_finite(-z));
    let mut fits = Vec::new();
    let mut best_residual = f64::INFINITY;
    for p in SignPattern::all() {
        let r = (delta - p.evaluate(&d_triple, &d_neg_triple)).abs();
        best_residual = best_residual.min(r);
        if r <= PROBE_TOL {
            fits.push(p);
        }
    }
    Ok(ProbeReport { delta, triple_ratios, d_triple, d_neg_triple, fits, best_residual })
}

/// Outcome of running the probe over many tetrahedra.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeStability {
    /// Tetrahedra probed.
    pub trials: usize,
    /// Patterns that fit every probed tetrahedron.
    pub stable: Vec<SignPattern>,
    /// Largest residual of the first stable pattern, if any.
    pub max_residual: f64,
}

/// Intersects the fitting patterns over `tets`.
pub fn probe_stability<'a, I>(tets: I) -> Result<ProbeStability>
where
    I: IntoIterator<Item = &'a FlagTetrahedron>,
{
    let mut stable: Vec<SignPattern> = SignPattern::all().collect();
    let mut trials = 0;
    let mut reports = Vec::new();
    for t in tets {
        let r = dual_coboundary_probe(t)?;
        stable.retain(|p| r.fits.contains(p));
        reports.push(r);
        trials += 1;
    }
    let max_residual = match stable.first() {
        Some(p) => reports
            .iter()
            .map(|r| (r.delta - p.evaluate(&r.d_triple, &r.d_neg_triple)).abs())
            .fold(0.0, f64::max),
        None => f64::INFINITY,
    };
    Ok(ProbeStability { trials, stable, max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::{cross_ratio_oracle, BFG_ORDERS};
    use crate::ptolemy::{coset_equivalent, Decoration, PtolemyTuple};
    use crate::rng::Sampler;
    use crate::triangulation::{
        check_decoration_consistency, gen_boundary_4simplex, gen_random_single, Gluing, Orientation,
    };
    use crate::{bloch_wigner, Flattening};

    fn single(seed: u64) -> (DecoratedComplex, Decoration) {
        let c = gen_random_single(seed).unwrap();
        let d = *c.tetrahedra()[0].decoration().unwrap();
        (c, d)
    }

    #[test]
    fn single_tet_bfg_matches_pencil_oracle() {
        for seed in 0..20 {
            let (c, d) = single(seed);
            let t = d.flags().unwrap();
            let oracle: f64 = BFG_ORDERS
                .iter()
                .map(|o| bloch_wigner(cross_ratio_oracle(&t, o[0], o[1]).unwrap()).unwrap())
                .sum::<f64>()
                * 0.25;
            assert!((vol_bfg(&c).unwrap() - oracle).abs() < 1e-9);
        }
    }

    #[test]
    fn bfg_is_minus_quarter_gtz_per_tet() {
        for seed in 0..20 {
            let (c, _) = single(seed);
            let r = invariant_report(&c).unwrap();
            assert!(r.relation_residual < 1e-9, "seed {seed}: {}", r.relation_residual);
            assert!((r.vol_gtz + 4.0 * r.vol_bfg).abs() < 1e-8);
        }
    }

    #[test]
    fn conjugated_complex_negates_volume() {
        let (c, _) = single(3);
        let d = dual_decoration(&c, Involution::Cartan).unwrap();
        assert!((vol_bfg(&d).unwrap() + vol_bfg(&c).unwrap()).abs() < 1e-12);
        assert!((vol_gtz(&d).unwrap() + vol_gtz(&c).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn boundary_complex_cancels() {
        for seed in 0..10 {
            let c = gen_boundary_4simplex(seed).unwrap();
            let r = invariant_report(&c).unwrap();
            assert!(r.vol_bfg.abs() < 1e-8, "{}", r.vol_bfg);
            assert!(r.vol_gtz.abs() < 1e-8);
            assert!(r.cchat.im.abs() < 1e-6);
            let rel = relation_report(&c).unwrap();
            assert!(rel.closed && rel.passed(), "{:?}", rel.checks);
            assert!(rel.transpose_inverse.vol_bfg.abs() < 1e-8);
        }
    }

    #[test]
    fn single_tet_relations() {
        let (c, _) = single(4);
        let rel = relation_report(&c).unwrap();
        assert!(!rel.closed);
        assert!(rel.passed(), "{:?}", rel.checks);
        let open = rel.checks.iter().find(|k| k.name == "transpose-inverse-boundary").unwrap();
        assert!(!open.asserted);
        assert!(open.within_tol(), "{}", open.deviation);
    }

    #[test]
    fn two_tets_sharing_a_face_keep_only_boundary_terms() {
        let full = gen_boundary_4simplex(21).unwrap();
        let tets: Vec<_> = full.tetrahedra().iter().filter(|t| t.id >= 3).cloned().collect();
        let gluings: Vec<Gluing> = full
            .gluings()
            .iter()
            .filter(|g| g.a.tet >= 3 && g.b.tet >= 3)
            .copied()
            .collect();
        assert_eq!(gluings.len(), 1);
        let c = DecoratedComplex::new(tets, gluings).unwrap();
        assert_eq!(c.unglued_faces().len(), 6);
        let rel = relation_report(&c).unwrap();
        let diff = rel.transpose_inverse.vol_bfg - rel.base.vol_bfg;
        assert!((diff - rel.boundary_term).abs() < 1e-9);
        assert!(diff.abs() > 1e-6);
    }

    #[test]
    fn cchat_trivial_flattenings_and_shift() {
        let z = Complex::new(0.3, 0.4);
        let f = Flattening::from_branches(z, 0, 0).unwrap();
        assert_eq!(extended_rogers(&f), crate::rogers(z).unwrap());
        let g = f.shifted(2, 0).unwrap();
        let shift = extended_rogers(&g) - extended_rogers(&f);
        let expected = Complex::new(0.0, core::f64::consts::PI) * crate::dilog::log(Complex::new(1.0, 0.0) - z);
        assert!((shift - expected).norm() < 1e-13);
    }

    #[test]
    fn ptolemy_payload_matches_matrix_path() {
        let (c, d) = single(6);
        let coords = ptolemy_all(&d).unwrap();
        let pairs: Vec<(PtolemyTuple, Complex)> = coords.iter().collect();
        let p = PtolemyCoordinates::from_pairs(pairs).unwrap();
        let t = Tetrahedron { id: 0, orientation: Orientation::Positive, payload: Payload::Ptolemy(p) };
        let pc = DecoratedComplex::new(alloc::vec![t], Vec::new()).unwrap();
        let a = invariant_report(&c).unwrap();
        let b = invariant_report(&pc).unwrap();
        assert_eq!(a.vol_gtz, b.vol_gtz);
        assert_eq!(a.cchat, b.cchat);
        assert!(b.bfg_derived && !a.bfg_derived);
        assert!((a.vol_bfg - b.vol_bfg).abs() < 1e-9);
        assert!(matches!(relation_report(&pc), Err(Error::PtolemyPayload(0))));
        assert!(matches!(dual_decoration(&pc, Involution::Cartan), Err(Error::PtolemyPayload(0))));
    }

    #[test]
    fn dual_twice_is_identity_on_cosets() {
        let c = gen_boundary_4simplex(8).unwrap();
        for kind in Involution::ALL {
            let once = dual_decoration(&c, kind).unwrap();
            assert!(check_decoration_consistency(&once).unwrap().is_consistent());
            let twice = dual_decoration(&once, kind).unwrap();
            for (a, b) in c.tetrahedra().iter().zip(twice.tetrahedra()) {
                let (da, db) = (a.decoration().unwrap(), b.decoration().unwrap());
                for v in 0..4 {
                    assert!(coset_equivalent(da.matrix(v), db.matrix(v)));
                }
            }
        }
    }

    #[test]
    fn transpose_inverse_dual_maps_cosets_to_cosets() {
        let mut s = Sampler::new(5);
        for _ in 0..20 {
            let g = s.sl3();
            let n = s.unipotent();
            let a = dual_matrix(&g, Involution::TransposeInverse).unwrap();
            let b = dual_matrix(&(g * n), Involution::TransposeInverse).unwrap();
            assert!(coset_equivalent(&a, &b));
        }
    }

    #[test]
    fn probe_finds_the_alternating_pattern() {
        let tets: Vec<FlagTetrahedron> = (0..50)
            .map(|s| single(100 + s).1.flags().unwrap())
            .collect();
        let st = probe_stability(&tets).unwrap();
        assert_eq!(st.trials, 50);
        assert_eq!(st.stable, alloc::vec![COBOUNDARY_PATTERN]);
        assert!(st.max_residual < 1e-10);
    }

    #[test]
    fn probe_on_conjugate_negates_delta() {
        let t = single(9).1.flags().unwrap();
        let a = dual_coboundary_probe(&t).unwrap();
        let b = dual_coboundary_probe(&t.conj()).unwrap();
        assert!((a.delta + b.delta).abs() < 1e-12);
        assert_eq!(a.fits, b.fits);
    }

    #[test]
    fn degenerate_tetrahedron_is_named() {
        let (_, d) = single(2);
        let mut g = *d.matrices();
        g[1] = g[0];
        let t = Tetrahedron { id: 42, orientation: Orientation::Negative, payload: Payload::Matrices(Decoration::new(g).unwrap()) };
        let bad = DecoratedComplex::new(alloc::vec![t], Vec::new()).unwrap();
        let err = vol_bfg(&bad).unwrap_err();
        assert!(matches!(err, Error::Tetrahedron { id: 42, .. }), "{err}");
        assert!(err.is_degenerate());
    }
}
