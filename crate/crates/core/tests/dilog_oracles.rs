//! `Li₂` and `D` against independent oracles: adaptive quadrature of the
//! defining integral, a direct power series, and frozen high-precision values.

use std::f64::consts::PI;

use flagvol_core::rng::Sampler;
use flagvol_core::{bloch_wigner, li2, Complex};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

// -ln(1 - s z)/s, with the s -> 0 limit handled by a short series
fn integrand(z: Complex, s: f64) -> Complex {
    let w = z * s;
    if w.norm() < 1e-4 {
        return z * (1.0 + w / 2.0 + w * w / 3.0);
    }
    -(Complex::new(1.0, 0.0) - w).ln() / s
}

fn simpson(a: f64, b: f64, fa: Complex, fm: Complex, fb: Complex) -> Complex {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> Complex,
    a: f64,
    b: f64,
    fa: Complex,
    fm: Complex,
    fb: Complex,
    whole: Complex,
    tol: f64,
    depth: u32,
) -> Complex {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// `Li₂(z) = -∫₀¹ ln(1 - s z)/s ds`, integrating along the segment from 0 to `z`.
fn li2_quadrature(z: Complex) -> Complex {
    let f = move |s: f64| integrand(z, s);
    let (fa, fm, fb) = (f(0.0), f(0.5), f(1.0));
    let whole = simpson(0.0, 1.0, fa, fm, fb);
    adaptive(&f, 0.0, 1.0, fa, fm, fb, whole, 1e-13, 40)
}

/// `Σ zⁿ/n²`, only for `|z| ≤ 0.6`.
fn li2_series(z: Complex) -> Complex {
    let mut term = z;
    let mut sum = c(0.0, 0.0);
    for n in 1..400 {
        sum += term / (n * n) as f64;
        term *= z;
    }
    sum
}

fn away_from_cut(z: Complex) -> bool {
    let near_cut = z.re >= 1.0 - 1e-3 && z.im.abs() < 1e-3;
    z.norm() >= 0.05 && z.norm() <= 20.0 && (z - 1.0).norm() >= 1e-3 && z.norm() >= 1e-3 && !near_cut
}

#[test]
fn li2_matches_quadrature_oracle() {
    let mut s = Sampler::new(2024);
    let mut n = 0;
    while n < 100 {
        let z = s.log_uniform_complex(0.05, 20.0);
        if !away_from_cut(z) {
            continue;
        }
        n += 1;
        let got = li2(z).unwrap();
        let want = li2_quadrature(z);
        assert!((got - want).norm() < 1e-9, "z = {z}: {got} vs {want}");
    }
}

#[test]
fn li2_matches_power_series_inside_disk() {
    let mut s = Sampler::new(5);
    for _ in 0..200 {
        let z = s.log_uniform_complex(1e-3, 0.6);
        let got = li2(z).unwrap();
        assert!((got - li2_series(z)).norm() < 1e-14 * got.norm().max(1.0), "z = {z}");
    }
}

#[test]
fn catalan_from_series() {
    // D(i) = Im Li₂(i) = Σ (-1)^k / (2k+1)², summed in pairs for speed
    let mut g = 0.0;
    for k in 0..2_000_000u64 {
        let a = (2 * k + 1) as f64;
        g += if k % 2 == 0 { 1.0 } else { -1.0 } / (a * a);
    }
    assert!((bloch_wigner(c(0.0, 1.0)).unwrap() - g).abs() < 1e-10);
}

#[test]
fn frozen_reference_values() {
    let li2_refs = [
        (c(0.0, 1.0), c(-0.2056167583560283, 0.9159655941772190)),
        (c(0.5, 0.75f64.sqrt()), c(0.2741556778080377, 1.0149416064096536)),
        (c(0.3, 0.7), c(0.16376377367795500, 0.76789670985504102)),
        (c(2.0, 1.0), c(1.1866885370000578, 2.4077407693457720)),
        (c(-3.5, 0.2), c(-2.1632818833724101, 0.085920940487946899)),
        (c(0.99, 0.01), c(1.5844181626351653, 0.045211436422238449)),
        (c(15.0, -4.0), c(-1.3184181966440212, -7.9179592057206377)),
        (c(-1.0, 0.0), c(-0.8224670334241132, 0.0)),
        (c(-10.0, 0.0), c(-4.1982778868581039, 0.0)),
        (c(0.5, 0.0), c(0.5822405264650125, 0.0)),
        (c(0.9, 0.0), c(1.2997147230049588, 0.0)),
        (c(5.0, 0.0), c(1.7837191612666306, PI * 5f64.ln())),
    ];
    for (z, want) in li2_refs {
        let got = li2(z).unwrap();
        assert!((got - want).norm() < 1e-13 * want.norm().max(1.0), "Li2({z}) = {got}, want {want}");
    }
    let d_refs = [
        (c(0.0, 1.0), 0.9159655941772190),
        (c(0.5, 0.75f64.sqrt()), 1.014941606409653625),
        (c(0.3, 0.7), 0.98181057142732549),
        (c(2.0, 1.0), 0.51166639855382338),
        (c(-3.5, 0.2), 0.030206807085879716),
        (c(0.99, 0.01), 0.053064886540632978),
        (c(15.0, -4.0), -0.065668887528968684),
    ];
    for (z, want) in d_refs {
        let got = bloch_wigner(z).unwrap();
        assert!((got - want).abs() < 1e-13, "D({z}) = {got}, want {want}");
    }
}

fn point() -> impl Strategy<Value = Complex> {
    (0.05f64.ln()..20f64.ln(), -PI..PI)
        .prop_map(|(lr, th)| Complex::from_polar(lr.exp(), th))
        .prop_filter("away from 0, 1 and the cut", |z| away_from_cut(*z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn bloch_wigner_symmetries(z in point()) {
        let d = bloch_wigner(z).unwrap();
        prop_assert!((bloch_wigner(z.conj()).unwrap() + d).abs() < 1e-10);
        prop_assert!((bloch_wigner(z.inv()).unwrap() + d).abs() < 1e-10);
        prop_assert!((bloch_wigner(Complex::new(1.0, 0.0) - z).unwrap() + d).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn euler_reflection(z in point()) {
        // 1 - z must stay off the cut as well
        prop_assume!(!(z.re <= 1e-3 && z.im.abs() < 1e-3));
        let one = Complex::new(1.0, 0.0);
        let lhs = li2(z).unwrap() + li2(one - z).unwrap();
        let rhs = Complex::new(PI * PI / 6.0, 0.0) - z.ln() * (one - z).ln();
        prop_assert!((lhs - rhs).norm() < 1e-11, "z = {}: {} vs {}", z, lhs, rhs);
    }
}
