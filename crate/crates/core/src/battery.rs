//! Randomized property battery.
//!
//! Each property has a nominal tolerance calibrated for the default battery
//! tolerance [`DEFAULT_TOL`]. A caller supplied tolerance `T` rescales every
//! nominal tolerance by `T / DEFAULT_TOL`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dilog::bloch_wigner_finite;
use crate::flags::{bfg_parameters, cross_ratio_oracle, cross_ratio_zij, BFG_ORDERS};
use crate::invariants::{
    distance_mod, dual_decoration, invariant_report, probe_stability, relation_report, Involution,
    COBOUNDARY_PATTERN,
};
use crate::lie::{cs_constant, sign_identity_check, SquareMatrix, TracelessMatrix, Ratio};
use crate::prebloch::five_term_element;
use crate::ptolemy::{det_identities_check, gtz_flattenings, gtz_ratios, ptolemy_all, Decoration};
use crate::rng::Sampler;
use crate::triangulation::{gen_boundary_4simplex, is_usable};
use crate::{Complex, Error, FlagTetrahedron, Result};

/// Default battery tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default number of trials per property.
pub const DEFAULT_TRIALS: usize = 1000;

/// Catalan's constant, the value of `D(i)`.
pub const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

/// Largest number of boundary complexes sampled by one battery run.
pub const MAX_BOUNDARY_COMPLEXES: usize = 100;

/// GTZ subsimplex `m` is paired with `BFG_ORDERS[NEGATION_PAIRING[m]]`.
pub const NEGATION_PAIRING: [usize; 4] = [0, 1, 2, 3];

/// Battery settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryConfig {
    /// Overall tolerance.
    pub tol: f64,
    /// Random trials per property.
    pub trials: usize,
    /// Seed of the random streams.
    pub seed: u64,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig { tol: DEFAULT_TOL, trials: DEFAULT_TRIALS, seed: 0 }
    }
}

impl BatteryConfig {
    fn scaled(&self, nominal: f64) -> f64 {
        nominal * (self.tol / DEFAULT_TOL)
    }
}

/// Result of one property.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    /// Property name.
    pub name: &'static str,
    /// Samples evaluated.
    pub trials: usize,
    /// Worst deviation seen.
    pub max_deviation: f64,
    /// Tolerance applied.
    pub tol: f64,
    /// Error that stopped the property, if any.
    pub error: Option<String>,
}

impl PropertyOutcome {
    /// Deviation within tolerance and no error.
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.max_deviation <= self.tol
    }
}

struct Acc {
    name: &'static str,
    tol: f64,
    trials: usize,
    max: f64,
}

impl Acc {
    fn new(name: &'static str, tol: f64) -> Self {
        Acc { name, tol, trials: 0, max: 0.0 }
    }

    fn add(&mut self, dev: f64) {
        self.trials += 1;
        // NaN counts as an infinite deviation
        self.max = if dev.is_nan() { f64::INFINITY } else { self.max.max(dev) };
    }

    fn done(self, r: Result<()>) -> PropertyOutcome {
        PropertyOutcome {
            name: self.name,
            trials: self.trials,
            max_deviation: self.max,
            tol: self.tol,
            error: r.err().map(|e| format!("{e}")),
        }
    }
}

fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

/// Draws `n` decorations on which every invariant is defined.
pub fn usable_decorations(sampler: &mut Sampler, n: usize) -> Result<Vec<Decoration>> {
    let mut out = Vec::with_capacity(n);
    let mut misses = 0;
    while out.len() < n {
        let d = Decoration::new([0; 4].map(|_| sampler.sl3()))?;
        if is_usable(&d) {
            out.push(d);
            misses = 0;
        } else {
            misses += 1;
            if misses >= crate::triangulation::MAX_RETRIES {
                return Err(Error::RetriesExhausted(misses));
            }
        }
    }
    Ok(out)
}

/// Random point for the dilogarithm symmetries: modulus log-uniform on
/// `[1e-3, 1e3]`.
pub fn dilog_point(sampler: &mut Sampler) -> Complex {
    sampler.log_uniform_complex(1e-3, 1e3)
}

/// `max_m |D(GTZ ratio m) + D(paired BFG cross-ratio)|`.
pub fn d_negation_deviation(d: &Decoration) -> Result<f64> {
    let gtz = gtz_ratios(&ptolemy_all(d)?);
    let bfg = bfg_parameters(&d.flags()?)?;
    Ok((0..4)
        .map(|m| (bloch_wigner_finite(gtz[m]) + bloch_wigner_finite(bfg[NEGATION_PAIRING[m]])).abs())
        .fold(0.0, f64::max))
}

/// Runs every property.
pub fn run(cfg: &BatteryConfig) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    let mut s = Sampler::new(cfg.seed);
    let n = cfg.trials.max(1);

    // dilogarithm symmetries
    let mut conj = Acc::new("dilog-conjugation", cfg.scaled(1e-10));
    let mut inv = Acc::new("dilog-inversion", cfg.scaled(1e-10));
    let mut refl = Acc::new("dilog-reflection", cfg.scaled(1e-10));
    for _ in 0..n {
        let z = dilog_point(&mut s);
        let d = bloch_wigner_finite(z);
        conj.add((bloch_wigner_finite(z.conj()) + d).abs());
        inv.add((bloch_wigner_finite(z.inv()) + d).abs());
        refl.add((bloch_wigner_finite(Complex::new(1.0, 0.0) - z) + d).abs());
    }
    out.extend([conj.done(Ok(())), inv.done(Ok(())), refl.done(Ok(()))]);

    let mut cat = Acc::new("dilog-catalan", cfg.scaled(1e-10));
    cat.add((bloch_wigner_finite(Complex::new(0.0, 1.0)) - CATALAN).abs());
    out.push(cat.done(Ok(())));

    let mut five = Acc::new("five-term", cfg.scaled(1e-9));
    let r = (|| {
        for _ in 0..n {
            let x = s.log_uniform_complex(1e-2, 1e2);
            let y = s.log_uniform_complex(1e-2, 1e2);
            match five_term_element(x, y) {
                Ok(e) => five.add(e.dilog_eval().abs()),
                Err(e) if e.is_degenerate() => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(())
    })();
    out.push(five.done(r));

    // decorations
    let decorations = match usable_decorations(&mut s, n) {
        Ok(d) => d,
        Err(e) => {
            out.push(Acc::new("decorations", 0.0).done(Err(e)));
            return out;
        }
    };

    let mut det = Acc::new("det-identities", cfg.scaled(1e-9));
    let r = decorations.iter().try_for_each(|d| {
        det.add(det_identities_check(d)?.max_deviation());
        Ok(())
    });
    out.push(det.done(r));

    let mut oracle = Acc::new("cross-ratio-oracle", cfg.scaled(1e-9));
    let r = decorations.iter().try_for_each(|d| {
        let t = d.flags()?;
        for o in BFG_ORDERS {
            oracle.add(rel(cross_ratio_zij(&t, o[0], o[1])?, cross_ratio_oracle(&t, o[0], o[1])?));
        }
        Ok(())
    });
    out.push(oracle.done(r));

    let mut neg = Acc::new("d-negation", cfg.scaled(1e-9));
    let r = decorations.iter().try_for_each(|d| {
        neg.add(d_negation_deviation(d)?);
        Ok(())
    });
    out.push(neg.done(r));

    let mut flat = Acc::new("flattening-integrity", cfg.scaled(1e-12));
    let r = decorations.iter().try_for_each(|d| {
        let coords = ptolemy_all(d)?;
        let ratios = gtz_ratios(&coords);
        for (f, z) in gtz_flattenings(&coords)?.iter().zip(ratios) {
            flat.add(rel(f.w0().exp(), z));
        }
        Ok(())
    });
    out.push(flat.done(r));

    // Lie algebra
    let mut lie = Acc::new("lie-sign-identity", cfg.scaled(1e-9));
    let r = (|| {
        for trial in 0..n {
            let size = 2 + trial % 7;
            let x = random_traceless(&mut s, size)?;
            for k in 2..=5 {
                let rep = sign_identity_check(x.matrix(), k)?;
                lie.add(rep.deviation / (1.0 + rep.rhs.norm()));
            }
        }
        Ok(())
    })();
    out.push(lie.done(r));

    let mut a2 = Acc::new("cs-constant", 0.0);
    let r = cs_constant(2).and_then(|v| {
        a2.add(if v == Ratio::new(-1, 6)? { 0.0 } else { f64::INFINITY });
        Ok(())
    });
    out.push(a2.done(r));

    // relations on single tetrahedra
    let mut bg = Acc::new("bfg-gtz-relation", cfg.scaled(1e-9));
    let mut cv = Acc::new("cartan-volume", cfg.scaled(1e-9));
    let mut cs = Acc::new("cartan-cs", cfg.scaled(1e-6));
    let r = decorations.iter().try_for_each(|d| {
        let c = single_complex(d)?;
        let base = invariant_report(&c)?;
        let dual = invariant_report(&dual_decoration(&c, Involution::Cartan)?)?;
        let (a, b) = (&base.per_tet[0], &dual.per_tet[0]);
        bg.add((a.vol_bfg + 0.25 * a.vol_gtz).abs());
        cv.add((a.vol_bfg + b.vol_bfg).abs());
        cs.add(distance_mod(a.cchat.re - b.cchat.re, base.lattice));
        Ok(())
    });
    let err = r.err();
    out.push(bg.done(err.clone().map_or(Ok(()), Err)));
    out.push(cv.done(err.clone().map_or(Ok(()), Err)));
    out.push(cs.done(err.map_or(Ok(()), Err)));

    // closed complexes
    let mut closed = Acc::new("boundary-cancellation", cfg.scaled(1e-6));
    let mut ti = Acc::new("transpose-inverse-closed", cfg.scaled(1e-6));
    let r = (|| {
        for k in 0..n.min(MAX_BOUNDARY_COMPLEXES) {
            let c = gen_boundary_4simplex(cfg.seed.wrapping_add(k as u64))?;
            let rep = relation_report(&c)?;
            let b = &rep.base;
            closed.add(b.vol_bfg.abs().max(b.vol_gtz.abs()).max(b.cchat.im.abs()));
            let t = &rep.transpose_inverse;
            ti.add(t.vol_bfg.abs().max(t.vol_gtz.abs()).max(t.cchat.im.abs()));
        }
        Ok(())
    })();
    let err = r.err();
    out.push(closed.done(err.clone().map_or(Ok(()), Err)));
    out.push(ti.done(err.map_or(Ok(()), Err)));

    // coboundary probe
    let mut probe = Acc::new("coboundary-probe", cfg.scaled(1e-8));
    let r = decorations
        .iter()
        .map(|d| d.flags())
        .collect::<Result<Vec<FlagTetrahedron>>>()
        .and_then(|tets| probe_stability(&tets))
        .map(|st| {
            probe.trials = st.trials;
            probe.max = if st.stable.first() == Some(&COBOUNDARY_PATTERN) { st.max_residual } else { f64::INFINITY };
        });
    out.push(probe.done(r));

    out
}

fn single_complex(d: &Decoration) -> Result<crate::DecoratedComplex> {
    use crate::triangulation::{Orientation, Payload, Tetrahedron};
    let t = Tetrahedron { id: 0, orientation: Orientation::Positive, payload: Payload::Matrices(*d) };
    crate::DecoratedComplex::new(alloc::vec![t], Vec::new())
}

/// Random traceless matrix with entries of size about `1/√n`.
pub fn random_traceless(s: &mut Sampler, n: usize) -> Result<TracelessMatrix> {
    let scale = 1.0 / libm::sqrt(n as f64);
    let data = (0..n * n).map(|_| s.complex_normal() * scale).collect();
    TracelessMatrix::project(&SquareMatrix::from_row_major(n, data)?)
}
