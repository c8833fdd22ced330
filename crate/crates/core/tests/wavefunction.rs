#![allow(clippy::excessive_precision)]

use cps_core::observables::quadrature_stats;
use cps_core::wavefunction::{
    density_moments_quadrature, gaussianity_g, gaussianity_small_eps, oscillator_eigenfunction_sequence, psi_coherent,
    psi_cps, sample_wavefunction,
};
use cps_core::{CoherentState, Complex, PhaseCase, PhaseState, QuadSpec, TruncationPolicy};
use std::f64::consts::{FRAC_PI_2, PI};

/// `π^{-1/4} e^{-x²/2} H_n(x)/√(2ⁿ n!)` with `H_n` from its explicit sum.
fn eigenfunction_direct(n: usize, x: f64) -> f64 {
    let mut h = 0.0;
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    for m in 0..=n / 2 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        h += sign * fact(n) / (fact(m) * fact(n - 2 * m)) * (2.0 * x).powi((n - 2 * m) as i32);
    }
    PI.powf(-0.25) * (-0.5 * x * x).exp() * h / (2f64.powi(n as i32) * fact(n)).sqrt()
}

#[test]
fn recurrence_matches_explicit_hermite() {
    for &x in &[-3.7, -1.0, 0.0, 0.4, 2.2, 5.0] {
        let seq = oscillator_eigenfunction_sequence(x, 20);
        for (n, v) in seq.iter().enumerate() {
            let d = eigenfunction_direct(n, x);
            assert!((v - d).abs() < 1e-12 * (1.0 + d.abs()), "n={n} x={x}: {v} vs {d}");
        }
    }
}

// References: 40-digit sums over 4000 terms.
#[test]
fn frozen_wavefunction_values() {
    let p = TruncationPolicy::default();
    let cases = [
        (1.0, 0.0, 0.0, 0.399328721820288266, 0.0),
        (1.0, 0.0, 0.5, 0.54837116001894465, 0.0),
        (1.0, 0.0, -1.3, 0.0727528774305428268, 0.0),
        (25.0, 0.0, 6.3, 0.336748010660492324, 0.0),
        (1.0, FRAC_PI_2, 0.5, 0.528891263072184121, 0.448219932038809452),
        (25.0, FRAC_PI_2, 0.8, -0.0487777100315669302, 0.0599422950368360956),
    ];
    for (n_bar, phi, x, re, im) in cases {
        let v = psi_cps(&PhaseState::from_mean_n(n_bar, phi).unwrap(), x, &p).unwrap();
        assert!(v.converged);
        assert!(
            (v.value - Complex::new(re, im)).norm() < 1e-13,
            "n_bar={n_bar} x={x}: {}",
            v.value
        );
    }
}

#[test]
fn densities_are_normalized() {
    let p = TruncationPolicy::wavefunction();
    for n_bar in [0.0, 1.0, 25.0] {
        for phi in [0.0, FRAC_PI_2] {
            let m = density_moments_quadrature(&PhaseState::from_mean_n(n_bar, phi).unwrap(), &p, &QuadSpec::default())
                .unwrap();
            assert!(m.covered && m.converged);
            assert!((m.norm - 1.0).abs() < 1e-8, "n_bar={n_bar} phi={phi}: {}", m.norm);
        }
    }
}

#[test]
fn density_moments_match_series_statistics() {
    let p = TruncationPolicy::wavefunction();
    for (n_bar, phi) in [(1.0, 0.0), (1.0, FRAC_PI_2), (25.0, 0.0), (25.0, FRAC_PI_2), (1.0, 0.7)] {
        let s = PhaseState::from_mean_n(n_bar, phi).unwrap();
        let m = density_moments_quadrature(&s, &p, &QuadSpec::default()).unwrap();
        let st = quadrature_stats(&s, &TruncationPolicy::default()).unwrap();
        assert!((m.mean_x - st.mean_x).abs() < 1e-6, "n_bar={n_bar} phi={phi}");
        assert!(
            (m.var_x - st.var_x).abs() < 1e-6,
            "n_bar={n_bar} phi={phi}: {} vs {}",
            m.var_x,
            st.var_x
        );
    }
}

#[test]
fn squeezed_density_is_even() {
    let s = PhaseState::from_mean_n(4.0, FRAC_PI_2).unwrap();
    let xs: Vec<f64> = (0..41).map(|i| -4.0 + 0.2 * i as f64).collect();
    let rows = sample_wavefunction(&s, &xs, &TruncationPolicy::wavefunction()).unwrap();
    for i in 0..41 {
        assert!((rows[i].density - rows[40 - i].density).abs() < 1e-12);
    }
}

#[test]
fn skewed_density_at_zero_phase() {
    // The density piles up on the inner side of its mean and is sub-Gaussian.
    let s = PhaseState::from_mean_n(25.0, 0.0).unwrap();
    let g = gaussianity_g(&s, &TruncationPolicy::wavefunction()).unwrap();
    assert!(g.converged && g.value < 1.0);
    let st = quadrature_stats(&s, &TruncationPolicy::default()).unwrap();
    assert!((st.mean_x - 6.31745).abs() < 1e-5);
}

#[test]
fn gaussianity_expansion_agrees_for_small_eps() {
    let p = TruncationPolicy::default();
    for case in [PhaseCase::Zero, PhaseCase::HalfPi] {
        let phi = if case == PhaseCase::Zero { 0.0 } else { FRAC_PI_2 };
        let exact = gaussianity_g(&PhaseState::new(0.05, phi).unwrap(), &p).unwrap().value;
        assert!((exact - gaussianity_small_eps(0.05, case).unwrap()).abs() < 1e-7);
    }
}

#[test]
fn coherent_reference_is_exact() {
    let cs = CoherentState::new(Complex::new(1.0, 0.5));
    let st = cs.reference_stats();
    assert_eq!((st.var_x, st.var_p, st.cov_xp, st.rs_product), (0.5, 0.5, 0.0, 0.25));
    assert_eq!(st.radius_sq, 2.0 * cs.mean_n());
    let vac = psi_coherent(&CoherentState::new(Complex::new(0.0, 0.0)), 0.7);
    let cps = psi_cps(&PhaseState::vacuum(), 0.7, &TruncationPolicy::default())
        .unwrap()
        .value;
    assert!((vac - cps).norm() < 1e-16);
    // |ψ_α(x)|² is the normal density with mean √2 Re α and variance 1/2.
    let x: f64 = 2.1;
    let d = psi_coherent(&cs, x).norm_sqr();
    let expected = (-(x - 2f64.sqrt()).powi(2)).exp() / PI.sqrt();
    assert!((d - expected).abs() < 1e-15);
}
