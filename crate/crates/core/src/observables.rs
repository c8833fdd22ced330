//! Quadrature means, (co)variances, squeezing, the mean-radius `R`, the
//! Robertson–Schrödinger product `D`, their closed-form approximations and
//! reference values for coherent, thermal and squeezed-vacuum states.
//!
//! Units are dimensionless (`ħ = m = ω = 1`), so the vacuum has
//! `σ_x = σ_p = 1/2` and `D = 1/4`.

use crate::error::{domain, Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Scalar};
use crate::series::{s1, s2, sum_series, Flagged, Modulus, PhaseState, SeriesResult, TruncationPolicy};

/// Slope of `R(n̄)` at large `n̄` reported for coherent phase states.
pub const DEFAULT_ETA: f64 = 1.59;

/// Default `n̄` range for [`fit_eta`].
pub const DEFAULT_ETA_RANGE: (f64, f64) = (50.0, 150.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureStats<T> {
    pub mean_x: T,
    pub mean_p: T,
    pub var_x: T,
    pub var_p: T,
    pub cov_xp: T,
    /// `D = σ_x σ_p − σ_xp²`.
    pub rs_product: T,
    /// `R = ⟨x⟩² + ⟨p⟩²`.
    pub radius_sq: T,
    pub terms_used: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaFit<T> {
    pub eta: T,
    pub intercept: T,
    pub fit_range: (T, T),
    /// Root-mean-square residual of the straight-line fit.
    pub residual: T,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RsApproxVariant {
    /// Valid for all `n̄`; returns `1/4` at `n̄ = 0`.
    Full,
    /// Large-`n̄` form `((2−η)/2)[1 + ¼ ln(1+n̄)]`.
    Simplified,
}

fn check_mean_n<T: Scalar>(n_bar: T) -> Result<()> {
    if n_bar >= T::zero() && n_bar.is_finite() {
        Ok(())
    } else {
        Err(domain("n_bar", to_f64(n_bar), "0 <= n_bar < inf"))
    }
}

/// `(⟨x⟩, ⟨p⟩) = √2 S1 (cos φ, sin φ)`.
pub fn quadrature_means<T: Scalar>(state: &PhaseState<T>, policy: &TruncationPolicy) -> Result<Flagged<(T, T)>> {
    let s = s1(state.modulus(), policy)?;
    let (c, sn) = state.rotation(1);
    let r = T::SQRT_2() * s.value;
    Ok(Flagged {
        value: (r * c, r * sn),
        terms_used: s.terms_used,
        converged: s.converged,
    })
}

/// Squeezed variance `σ_x` at `φ = π/2`, summed directly as
/// `1/2 − (1−|ε|²)|ε|² Σ_n |ε|^{2n} √(n+1)/(√(n+1)+√(n+2))`.
///
/// This avoids the cancellation in `N − S2` at large `n̄`.
pub fn sigma_x_min<T: Scalar>(m: Modulus<T>, policy: &TruncationPolicy) -> Result<SeriesResult<T>> {
    let half: T = lit(0.5);
    let prefactor = m.complement() * m.sq();
    let sum = sum_series(
        |n| {
            let a = from_usize::<T>(n + 1).sqrt();
            let b = from_usize::<T>(n + 2).sqrt();
            prefactor * m.pow_sq(n) * a / (a + b)
        },
        policy,
        // Each ratio √(n+1)/(√(n+1)+√(n+2)) is below 1/2.
        |n| half * m.pow_sq(n + 2),
    )?;
    Ok(sum.map(|s| half - s))
}

/// `½(1−|ε|²)[1 − ¼ ln(1−|ε|²)]`.
pub fn sigma_x_min_approx<T: Scalar>(m: Modulus<T>) -> T {
    let c = m.complement();
    lit::<T>(0.5) * c * (T::one() - lit::<T>(0.25) * c.ln())
}

/// `σ_x` of the pure squeezed vacuum with mean photon number `n̄`.
pub fn sigma_x_sqzvac<T: Scalar>(n_bar: T) -> Result<T> {
    check_mean_n(n_bar)?;
    let two = lit::<T>(2.0);
    Ok(T::one() / (two * (two * n_bar + T::one() + two * (n_bar * (n_bar + T::one())).sqrt())))
}

/// Large-`n̄` form `[4(1+2n̄)]^{-1}` of [`sigma_x_sqzvac`].
pub fn sigma_x_sqzvac_asymptotic<T: Scalar>(n_bar: T) -> Result<T> {
    check_mean_n(n_bar)?;
    Ok(T::one() / (lit::<T>(4.0) * (T::one() + lit::<T>(2.0) * n_bar)))
}

/// Full quadrature statistics of a coherent phase state.
///
/// The two principal variances are `σ_min = N − S2` and
/// `σ_max = N + S2 − 2S1²`; for phase `φ` the quadratures mix as
/// `σ_x = σ_max cos²φ + σ_min sin²φ`, and `D = σ_min σ_max`.
pub fn quadrature_stats<T: Scalar>(state: &PhaseState<T>, policy: &TruncationPolicy) -> Result<QuadratureStats<T>> {
    let m = state.modulus();
    let s = s1(m, policy)?;
    let smin = sigma_x_min(m, policy)?;
    let (c, sn) = state.rotation(1);
    let n = m.thermal_variance();
    let radius_sq = lit::<T>(2.0) * s.value * s.value;
    let sigma_min = smin.value;
    let sigma_max = lit::<T>(2.0) * n - sigma_min - radius_sq;
    let mean = T::SQRT_2() * s.value;
    Ok(QuadratureStats {
        mean_x: mean * c,
        mean_p: mean * sn,
        var_x: sigma_max * c * c + sigma_min * sn * sn,
        var_p: sigma_max * sn * sn + sigma_min * c * c,
        cov_xp: (sigma_max - sigma_min) * sn * c,
        rs_product: sigma_min * sigma_max,
        radius_sq,
        terms_used: s.terms_used.max(smin.terms_used),
        converged: s.converged && smin.converged,
    })
}

/// `R = ⟨x⟩² + ⟨p⟩² = 2 S1²`, independent of the phase.
pub fn radius_r<T: Scalar>(m: Modulus<T>, policy: &TruncationPolicy) -> Result<Flagged<T>> {
    let s = s1(m, policy)?;
    Ok(Flagged {
        value: lit::<T>(2.0) * s.value * s.value,
        terms_used: s.terms_used,
        converged: s.converged,
    })
}

/// Interpolation `n̄(2 + η n̄)/(1 + n̄)` between `R ≈ 2n̄` and `R ≈ η n̄`.
pub fn radius_r_interp<T: Scalar>(n_bar: T, eta: T) -> Result<T> {
    check_mean_n(n_bar)?;
    Ok(n_bar * (lit::<T>(2.0) + eta * n_bar) / (T::one() + n_bar))
}

/// Robertson–Schrödinger product `D = σ_min (2N − σ_min − R)`.
pub fn rs_product<T: Scalar>(state: &PhaseState<T>, policy: &TruncationPolicy) -> Result<Flagged<T>> {
    let m = state.modulus();
    let smin = sigma_x_min(m, policy)?;
    let r = radius_r(m, policy)?;
    let n = m.thermal_variance();
    Ok(Flagged {
        value: smin.value * (lit::<T>(2.0) * n - smin.value - r.value),
        terms_used: smin.terms_used.max(r.terms_used),
        converged: smin.converged && r.converged,
    })
}

/// `D = (N − S1²)² − (S2 − S1²)²` straight from the two series.
///
/// Loses roughly `log10(n̄²)` digits to cancellation; kept as the
/// independent route for checking [`rs_product`].
pub fn rs_product_from_series<T: Scalar>(state: &PhaseState<T>, policy: &TruncationPolicy) -> Result<Flagged<T>> {
    let m = state.modulus();
    let a = s1(m, policy)?;
    let b = s2(m, policy)?;
    let n = m.thermal_variance();
    let s1_sq = a.value * a.value;
    let u = n - s1_sq;
    let v = b.value - s1_sq;
    Ok(Flagged {
        value: u * u - v * v,
        terms_used: a.terms_used.max(b.terms_used),
        converged: a.converged && b.converged,
    })
}

/// Closed-form approximations of `D` built from the approximate `σ_min`
/// and the interpolated `R`.
pub fn rs_product_approx<T: Scalar>(n_bar: T, eta: T, variant: RsApproxVariant) -> Result<T> {
    check_mean_n(n_bar)?;
    let two = lit::<T>(2.0);
    let quarter = lit::<T>(0.25);
    let log = (T::one() + n_bar).ln();
    Ok(match variant {
        RsApproxVariant::Full => {
            let one_p = T::one() + n_bar;
            (T::one() + quarter * log) / (lit::<T>(4.0) * one_p * one_p)
                * (two * (two - eta) * n_bar * n_bar + T::one() + two * n_bar - quarter * log)
        }
        RsApproxVariant::Simplified => (two - eta) / two * (T::one() + quarter * log),
    })
}

/// Approximate `σ_x` at `φ = 0`; behaves as `(2 − η) n̄` for `n̄ ≫ 1`.
pub fn sigma_x_phi0_approx<T: Scalar>(n_bar: T, eta: T) -> Result<T> {
    check_mean_n(n_bar)?;
    let two = lit::<T>(2.0);
    let log = (T::one() + n_bar).ln();
    Ok(
        (two * (two - eta) * n_bar * n_bar + T::one() + two * n_bar - lit::<T>(0.25) * log)
            / (two * (T::one() + n_bar)),
    )
}

/// Least-squares straight line through exact `(n̄, R)` samples on a uniform
/// grid of `n_points` over `n_range` (both ends included). The intercept is
/// fitted, not forced to zero.
pub fn fit_eta<T: Scalar>(n_range: (T, T), n_points: usize, policy: &TruncationPolicy) -> Result<EtaFit<T>> {
    let (lo, hi) = n_range;
    if n_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "fit_eta needs at least 2 points, got {n_points}"
        )));
    }
    if !(lo >= T::zero() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "degenerate n_bar range ({}, {})",
            to_f64(lo),
            to_f64(hi)
        )));
    }
    let step = (hi - lo) / from_usize::<T>(n_points - 1);
    let mut converged = true;
    let mut samples = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let n_bar = if i + 1 == n_points {
            hi
        } else {
            lo + step * from_usize(i)
        };
        let r = radius_r(Modulus::from_mean_n(n_bar)?, policy)?;
        converged &= r.converged;
        samples.push((n_bar, r.value));
    }
    let count = from_usize::<T>(n_points);
    let mean_n = samples.iter().map(|s| s.0).sum::<T>() / count;
    let mean_r = samples.iter().map(|s| s.1).sum::<T>() / count;
    let sxx: T = samples.iter().map(|s| (s.0 - mean_n) * (s.0 - mean_n)).sum();
    let sxy: T = samples.iter().map(|s| (s.0 - mean_n) * (s.1 - mean_r)).sum();
    let eta = sxy / sxx;
    let intercept = mean_r - eta * mean_n;
    let ss: T = samples
        .iter()
        .map(|s| {
            let e = s.1 - (intercept + eta * s.0);
            e * e
        })
        .sum();
    Ok(EtaFit {
        eta,
        intercept,
        fit_range: (lo, hi),
        residual: (ss / count).sqrt(),
        converged,
    })
}

/// Overlap `⟨ε|ρ_th|ε⟩ = (1−|ε|²)/(1+|ε|²) = 1/(2n̄+1)` with the thermal state
/// of the same photon statistics.
pub fn thermal_fidelity<T: Scalar>(m: Modulus<T>) -> T {
    m.complement() / (T::one() + m.sq())
}

/// Thermal reference: `σ_x = σ_p = n̄ + 1/2`, `σ_xp = 0`, zero means.
pub fn thermal_stats<T: Scalar>(n_bar: T) -> Result<QuadratureStats<T>> {
    check_mean_n(n_bar)?;
    let n = n_bar + lit(0.5);
    Ok(QuadratureStats {
        mean_x: T::zero(),
        mean_p: T::zero(),
        var_x: n,
        var_p: n,
        cov_xp: T::zero(),
        rs_product: n * n,
        radius_sq: T::zero(),
        terms_used: 0,
        converged: true,
    })
}
