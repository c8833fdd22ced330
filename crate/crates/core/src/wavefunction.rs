//! Coordinate wavefunctions, probability densities and the Gaussianity
//! measure `G = √(2π σ_x) |ψ(⟨x⟩)|²`.
//!
//! The phase-state wavefunction is the Hermite series
//! `ψ_ε(x) = √(1−|ε|²) Σ_n |ε|ⁿ e^{inφ} φ_n(x)` over the oscillator
//! eigenfunctions `φ_n`. Since `|φ_n(x)| ≤ π^{-1/4} < 0.8` for all `n` and
//! `x`, the tail after index `N` is bounded by `0.8 |ε|^{N+1}/(1−|ε|)`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::observables::{quadrature_stats, QuadratureStats};
use crate::quadrature::QuadSpec;
use crate::recurrence::ScaledPair;
use crate::scalar::{from_usize, lit, to_f64, NeumaierSum, Scalar};
use crate::series::{Flagged, PhaseState, TruncationMode, TruncationPolicy};

/// Uniform bound on `|φ_n(x)|` used for tail estimates.
pub const EIGENFUNCTION_BOUND: f64 = 0.8;

/// Upper end of the small-`|ε|` expansion regime of
/// [`gaussianity_small_eps`].
pub const SMALL_EPS_LIMIT: f64 = 0.3;

/// Oscillator eigenfunctions `φ_n(x) = π^{-1/4} e^{-x²/2} H_n(x)/√(2ⁿ n!)`
/// for `n = 0, 1, 2, …`, generated by the normalized three-term recurrence.
///
/// The Gaussian prefactor is carried as a separate log-scale, so the
/// sequence stays accurate where `e^{-x²/2}` alone would underflow.
#[derive(Debug, Clone)]
pub struct Eigenfunctions<T> {
    x: T,
    n: usize,
    pair: ScaledPair<T>,
}

impl<T: Scalar> Eigenfunctions<T> {
    pub fn new(x: T) -> Self {
        let log_start = -x * x * lit(0.5) - T::PI().ln() * lit(0.25);
        Self {
            x,
            n: 0,
            pair: ScaledPair::start(log_start),
        }
    }
}

impl<T: Scalar> Iterator for Eigenfunctions<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let out = self.pair.current();
        let n = from_usize::<T>(self.n);
        let n1 = n + T::one();
        let next = (lit::<T>(2.0) / n1).sqrt() * self.x * self.pair.cur - (n / n1).sqrt() * self.pair.prev;
        self.pair.push(next);
        self.n += 1;
        Some(out)
    }
}

/// `φ_0(x), …, φ_{n_max}(x)`.
pub fn oscillator_eigenfunction_sequence<T: Scalar>(x: T, n_max: usize) -> Vec<T> {
    Eigenfunctions::new(x).take(n_max + 1).collect()
}

/// Value of a truncated wavefunction series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiValue<T> {
    pub value: Complex<T>,
    pub terms_used: usize,
    pub tail_estimate: T,
    pub converged: bool,
}

/// `ψ_ε(x) = √(1−|ε|²) Σ_n |ε|ⁿ e^{inφ} φ_n(x)`.
pub fn psi_cps<T: Scalar>(state: &PhaseState<T>, x: T, policy: &TruncationPolicy) -> Result<PsiValue<T>> {
    policy.validate()?;
    let eps = state.eps_abs();
    let tol: T = lit(policy.tail_tol);
    let bound = lit::<T>(EIGENFUNCTION_BOUND) / (T::one() - eps);
    let m = state.modulus();
    let tail = |n: usize| m.pow_abs(n + 1) * bound;
    let limit = match policy.mode {
        TruncationMode::FixedN(n) => n,
        TruncationMode::Adaptive => policy.max_terms,
    };
    let adaptive = matches!(policy.mode, TruncationMode::Adaptive);

    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    let mut used = 0;
    let mut tail_estimate = T::infinity();
    for (n, phi_n) in Eigenfunctions::new(x).take(limit).enumerate() {
        let amp = m.pow_abs(n) * phi_n;
        let (c, s) = state.rotation(n);
        re.add(amp * c);
        im.add(amp * s);
        used = n + 1;
        tail_estimate = tail(n);
        if adaptive && tail_estimate <= tol {
            break;
        }
    }
    let norm = state.modulus().complement().sqrt();
    Ok(PsiValue {
        value: Complex::new(re.value() * norm, im.value() * norm),
        terms_used: used,
        tail_estimate,
        converged: tail_estimate <= tol,
    })
}

/// Standard coherent state `|α⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentState<T> {
    pub alpha: Complex<T>,
}

impl<T: Scalar> CoherentState<T> {
    pub fn new(alpha: Complex<T>) -> Self {
        Self { alpha }
    }

    pub fn mean_n(&self) -> T {
        self.alpha.norm_sqr()
    }

    /// Exact quadrature statistics: displaced vacuum with `σ = 1/2`.
    pub fn reference_stats(&self) -> QuadratureStats<T> {
        QuadratureStats {
            mean_x: T::SQRT_2() * self.alpha.re,
            mean_p: T::SQRT_2() * self.alpha.im,
            var_x: lit(0.5),
            var_p: lit(0.5),
            cov_xp: T::zero(),
            rs_product: lit(0.25),
            radius_sq: lit::<T>(2.0) * self.alpha.norm_sqr(),
            terms_used: 0,
            converged: true,
        }
    }
}

/// `⟨x|α⟩ = π^{-1/4} exp(−x²/2 + √2 x α − α²/2 − |α|²/2)`.
pub fn psi_coherent<T: Scalar>(cs: &CoherentState<T>, x: T) -> Complex<T> {
    let half: T = lit(0.5);
    let a = cs.alpha;
    let exponent = Complex::new(-half * x * x - half * a.norm_sqr(), T::zero()) + a * (T::SQRT_2() * x) - a * a * half;
    exponent.exp() * T::PI().powf(lit(-0.25))
}

/// Normal density with the given mean and variance.
pub fn gaussian_density<T: Scalar>(mean_x: T, var_x: T, x: T) -> Result<T> {
    if var_x.is_nan() || var_x <= T::zero() {
        return Err(domain("var_x", to_f64(var_x), "var_x > 0"));
    }
    let d = x - mean_x;
    Ok((lit::<T>(2.0) * T::PI() * var_x).sqrt().recip() * (-d * d / (lit::<T>(2.0) * var_x)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionSample<T> {
    pub x: T,
    pub re: T,
    pub im: T,
    /// `re² + im²`.
    pub density: T,
    pub converged: bool,
}

/// Evaluates `ψ_ε` at every point of `xs`, in order. Points are computed in
/// parallel.
pub fn sample_wavefunction<T: Scalar>(
    state: &PhaseState<T>,
    xs: &[T],
    policy: &TruncationPolicy,
) -> Result<Vec<WavefunctionSample<T>>> {
    xs.par_iter()
        .map(|&x| {
            let v = psi_cps(state, x, policy)?;
            Ok(WavefunctionSample {
                x,
                re: v.value.re,
                im: v.value.im,
                density: v.value.re * v.value.re + v.value.im * v.value.im,
                converged: v.converged,
            })
        })
        .collect()
}

/// Gaussianity `G = √(2π σ_x) |ψ_ε(⟨x⟩)|²`, evaluated at the exact mean
/// coordinate. `G = 1` for every Gaussian density.
pub fn gaussianity_g<T: Scalar>(state: &PhaseState<T>, policy: &TruncationPolicy) -> Result<Flagged<T>> {
    let stats = quadrature_stats(state, policy)?;
    let psi = psi_cps(state, stats.mean_x, policy)?;
    let g = (lit::<T>(2.0) * T::PI() * stats.var_x).sqrt() * psi.value.norm_sqr();
    Ok(Flagged {
        value: g,
        terms_used: stats.terms_used.max(psi.terms_used),
        converged: stats.converged && psi.converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseCase {
    Zero,
    HalfPi,
}

/// Fourth-order small-`|ε|` expansion `G ≈ 1 + |ε|⁴(3√2 − 3 − √(3/2))`,
/// the same for both phase cases.
pub fn gaussianity_small_eps<T: Scalar>(eps_abs: T, phase_case: PhaseCase) -> Result<T> {
    if !(eps_abs >= T::zero() && eps_abs < T::one()) {
        return Err(domain("eps_abs", to_f64(eps_abs), "0 <= |eps| < 1"));
    }
    if eps_abs > lit(SMALL_EPS_LIMIT) {
        log::warn!(
            "|eps| = {} is outside the small-eps expansion regime (<= {SMALL_EPS_LIMIT}), case {phase_case:?}",
            to_f64(eps_abs)
        );
    }
    let coefficient = lit::<T>(3.0) * T::SQRT_2() - lit(3.0) - lit::<T>(1.5).sqrt();
    Ok(T::one() + coefficient * eps_abs.powi(4))
}

/// Moments of `|ψ_ε(x)|²` by quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMoments {
    pub mean_x: f64,
    pub var_x: f64,
    pub norm: f64,
    pub half_width: f64,
    /// The window reaches [`support_half_width`].
    pub covered: bool,
    pub converged: bool,
}

/// Half-width `|⟨x⟩| + 10 √max(σ_x, σ_p)` outside which `|ψ|²` is
/// negligible.
///
/// The larger principal variance sets the scale: a squeezed density is
/// narrow near its peak but its tails follow the photon-number spread.
pub fn support_half_width<T: Scalar>(stats: &QuadratureStats<T>) -> T {
    stats.mean_x.abs() + lit::<T>(10.0) * stats.var_x.max(stats.var_p).sqrt()
}

/// Integrates `|ψ|²`, `x|ψ|²` and `x²|ψ|²` on `[−L, L]` with composite
/// Gauss–Legendre panels.
pub fn density_moments_quadrature(
    state: &PhaseState<f64>,
    policy: &TruncationPolicy,
    quad: &QuadSpec,
) -> Result<DensityMoments> {
    let stats = quadrature_stats(state, policy)?;
    let needed = support_half_width(&stats);
    let half_width = quad.half_width.unwrap_or(needed);
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::InvalidArgument(format!("quadrature half-width {half_width}")));
    }
    let rule = quad.rule()?;
    let nodes: Vec<(f64, f64)> = rule.nodes(-half_width, half_width).collect();
    let values = nodes
        .par_iter()
        .map(|&(x, _)| psi_cps(state, x, policy).map(|v| (v.value.norm_sqr(), v.converged)))
        .collect::<Result<Vec<_>>>()?;

    let mut m0 = NeumaierSum::new();
    let mut m1 = NeumaierSum::new();
    let mut m2 = NeumaierSum::new();
    let mut converged = true;
    for (&(x, w), &(rho, ok)) in nodes.iter().zip(&values) {
        m0.add(w * rho);
        m1.add(w * x * rho);
        m2.add(w * x * x * rho);
        converged &= ok;
    }
    let mean_x = m1.value();
    Ok(DensityMoments {
        mean_x,
        var_x: m2.value() - mean_x * mean_x,
        norm: m0.value(),
        half_width,
        covered: half_width >= needed,
        converged: converged && stats.converged,
    })
}
