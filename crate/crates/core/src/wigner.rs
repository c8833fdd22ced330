//! Wigner function of coherent phase states.
//!
//! Convention: `W(q,p) = ∫ dv e^{-ipv} ψ*(q − v/2) ψ(q + v/2)`, so the plane
//! integral is `2π`, the vacuum is `2 e^{-(q²+p²)}` and `|W| ≤ 2` for pure
//! states.
//!
//! Expanding `|ε⟩` in Fock states splits `W = W1 + W2`. The diagonal part
//! `W1` is the Wigner function of the thermal state with the same `n̄` and
//! has a closed form. The off-diagonal part is the double series
//!
//! ```text
//! W2 = 4(1−|ε|²) Σ_{μ≥0} Σ_{λ≥1} (−|ε|²)^μ |ε|^λ cos(λ(φ−χ)) h_μ^λ(2b²)
//! ```
//!
//! with `q + ip = b e^{iχ}` and the normalized Laguerre functions
//! `h_μ^λ(x) = e^{-x/2} x^{λ/2} √(μ!/(μ+λ)!) L_μ^λ(x)`. These are matrix
//! elements of a displacement operator, so `|h_μ^λ| ≤ 1`, which gives a
//! rigorous truncation bound for both indices.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::observables::quadrature_stats;
use crate::quadrature::QuadSpec;
use crate::recurrence::ScaledPair;
use crate::scalar::{from_usize, lit, to_f64, NeumaierSum, Scalar};
use crate::series::{powi, sum_terms, Modulus, PhaseState, SeriesResult, TruncationPolicy};
use crate::wavefunction::{psi_cps, support_half_width};

/// Point of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint<T> {
    pub q: T,
    pub p: T,
}

impl<T: Scalar> PhasePoint<T> {
    pub fn new(q: T, p: T) -> Self {
        Self { q, p }
    }

    pub fn from_polar(b: T, chi: T) -> Self {
        let (s, c) = chi.sin_cos();
        Self { q: b * c, p: b * s }
    }

    /// `b = √(q² + p²)`.
    pub fn radius(&self) -> T {
        self.q.hypot(self.p)
    }

    /// `χ ∈ (−π, π]`, and `0` at the origin.
    pub fn angle(&self) -> T {
        if self.q == T::zero() && self.p == T::zero() {
            return T::zero();
        }
        let chi = self.p.atan2(self.q);
        if chi <= -T::PI() {
            T::PI()
        } else {
            chi
        }
    }
}

/// `h_μ^λ(x)` for `μ = 0, 1, 2, …` at fixed `λ` and `x ≥ 0`, by upward
/// recurrence in `μ`.
#[derive(Debug, Clone)]
pub struct LaguerreFunctions<T> {
    lambda: T,
    x: T,
    mu: usize,
    pair: ScaledPair<T>,
    zero: bool,
}

impl<T: Scalar> LaguerreFunctions<T> {
    pub fn new(lambda: usize, x: T) -> Self {
        // log h_0^λ = −x/2 + (λ/2) ln x − ½ ln λ!, accumulated as a product
        // of ratios √(x/j) so no factorial is ever formed.
        let zero = lambda > 0 && x == T::zero();
        let mut log_start = -x * lit(0.5);
        if !zero {
            for j in 1..=lambda {
                log_start = log_start + (x / from_usize(j)).ln() * lit(0.5);
            }
        }
        Self {
            lambda: from_usize(lambda),
            x,
            mu: 0,
            pair: ScaledPair::start(if zero { T::zero() } else { log_start }),
            zero,
        }
    }
}

impl<T: Scalar> Iterator for LaguerreFunctions<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        if self.zero {
            return Some(T::zero());
        }
        let out = self.pair.current();
        let mu = from_usize::<T>(self.mu);
        let two = lit::<T>(2.0);
        let a = two * mu + self.lambda + T::one() - self.x;
        let b = (mu * (mu + self.lambda)).sqrt();
        let d = ((mu + T::one()) * (mu + self.lambda + T::one())).sqrt();
        let next = (a * self.pair.cur - b * self.pair.prev) / d;
        self.pair.push(next);
        self.mu += 1;
        Some(out)
    }
}

/// `h_μ^λ(x) = e^{-x/2} x^{λ/2} √(μ!/(μ+λ)!) L_μ^λ(x)`.
pub fn normalized_laguerre<T: Scalar>(mu: usize, lambda: usize, x: T) -> T {
    LaguerreFunctions::new(lambda, x).nth(mu).unwrap_or_else(T::zero)
}

/// Weyl–Wigner symbol of `|m⟩⟨n|`:
/// `2^{1+λ/2} (−1)^μ √(μ!/ν!) b^λ e^{−b² − iχ(m−n)} L_μ^λ(2b²)`.
pub fn weyl_wigner_symbol<T: Scalar>(m: usize, n: usize, pt: &PhasePoint<T>) -> Complex<T> {
    let mu = m.min(n);
    let lambda = m.abs_diff(n);
    let b = pt.radius();
    let h = normalized_laguerre(mu, lambda, lit::<T>(2.0) * b * b);
    let sign = if mu.is_multiple_of(2) { T::one() } else { -T::one() };
    let diff = from_usize::<T>(m) - from_usize::<T>(n);
    Complex::from_polar(lit::<T>(2.0) * sign * h, -pt.angle() * diff)
}

/// Wigner function of the thermal state with mean photon number `n̄`.
pub fn wigner_thermal<T: Scalar>(n_bar: T, pt: &PhasePoint<T>) -> Result<T> {
    if !(n_bar >= T::zero() && n_bar.is_finite()) {
        return Err(domain("n_bar", to_f64(n_bar), "0 <= n_bar < inf"));
    }
    let w = T::one() + lit::<T>(2.0) * n_bar;
    let b2 = pt.q * pt.q + pt.p * pt.p;
    Ok(lit::<T>(2.0) / w * (-b2 / w).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WignerTruncation {
    /// Sum `μ ≤ mu_max`, `1 ≤ λ ≤ lambda_max`.
    Fixed { mu_max: usize, lambda_max: usize },
    /// Smallest `(μ, λ)` cut-offs whose tail bound meets `tail_tol`, never
    /// beyond the caps.
    Adaptive { mu_cap: usize, lambda_cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerPolicy {
    pub truncation: WignerTruncation,
    /// Absolute tolerance on the bound for the omitted part of `W2`.
    pub tail_tol: f64,
}

impl Default for WignerPolicy {
    fn default() -> Self {
        Self::fixed(110, 110)
    }
}

impl WignerPolicy {
    pub fn fixed(mu_max: usize, lambda_max: usize) -> Self {
        Self {
            truncation: WignerTruncation::Fixed { mu_max, lambda_max },
            tail_tol: 1e-10,
        }
    }

    pub fn adaptive(tail_tol: f64) -> Self {
        Self {
            truncation: WignerTruncation::Adaptive {
                mu_cap: 20_000,
                lambda_cap: 40_000,
            },
            tail_tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tail_tol > 0.0 && self.tail_tol.is_finite()) {
            return Err(Error::InvalidPolicy(format!(
                "tail_tol must be positive, got {}",
                self.tail_tol
            )));
        }
        if let WignerTruncation::Fixed { lambda_max: 0, .. } = self.truncation {
            return Err(Error::InvalidPolicy("lambda_max must be at least 1".into()));
        }
        Ok(())
    }

    /// Cut-offs `(mu_max, lambda_max)` for a state of modulus `|ε|`.
    pub fn cutoffs<T: Scalar>(&self, eps_abs: T) -> (usize, usize) {
        match self.truncation {
            WignerTruncation::Fixed { mu_max, lambda_max } => (mu_max, lambda_max),
            WignerTruncation::Adaptive { mu_cap, lambda_cap } => {
                let eps = to_f64(eps_abs);
                if eps == 0.0 {
                    return (0, 1);
                }
                // 4 ε^k/(1−ε) ≤ tol/2  ⇔  k ≥ ln(tol (1−ε)/8)/ln ε
                let k = ((self.tail_tol * (1.0 - eps) / 8.0).ln() / eps.ln()).ceil().max(0.0);
                let mu = (((k - 3.0) / 2.0).ceil().max(0.0) as usize).min(mu_cap);
                let lambda = (((k - 1.0).ceil().max(1.0)) as usize).min(lambda_cap);
                (mu, lambda)
            }
        }
    }
}

/// Bound on the part of `W2` left out by the cut-offs.
fn w2_tail_bound<T: Scalar>(eps: T, mu_max: usize, lambda_max: usize) -> T {
    if eps == T::zero() {
        return T::zero();
    }
    lit::<T>(4.0) * (powi(eps, 2 * mu_max + 3) + powi(eps, lambda_max + 1)) / (T::one() - eps)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerValue<T> {
    pub value: T,
    /// Thermal (diagonal) part.
    pub w1: T,
    /// Off-diagonal double series.
    pub w2: T,
    pub mu_max: usize,
    pub lambda_max: usize,
    pub tail_estimate: T,
    pub converged: bool,
}

/// `W2` summed over `μ ≤ mu_max`, `1 ≤ λ ≤ lambda_max`.
fn w2_series<T: Scalar>(state: &PhaseState<T>, pt: &PhasePoint<T>, mu_max: usize, lambda_max: usize) -> T {
    let m = state.modulus();
    let b = pt.radius();
    if m.abs() == T::zero() || b == T::zero() {
        return T::zero();
    }
    let x = lit::<T>(2.0) * b * b;
    let angle = state.phase() - pt.angle();
    let weight = -m.sq();
    let mut total = NeumaierSum::new();
    let mut eps_pow = T::one();
    for lambda in 1..=lambda_max {
        eps_pow = eps_pow * m.abs();
        let mut w = T::one();
        let mut row = T::zero();
        for h in LaguerreFunctions::new(lambda, x).take(mu_max + 1) {
            row = row + w * h;
            w = w * weight;
        }
        total.add(eps_pow * (from_usize::<T>(lambda) * angle).cos() * row);
    }
    lit::<T>(4.0) * m.complement() * total.value()
}

/// Thermal part from its closed form `2/(1+2n̄) e^{−b²/(1+2n̄)}`.
fn w1_closed<T: Scalar>(m: &Modulus<T>, pt: &PhasePoint<T>) -> T {
    // 1/(1+2n̄) = (1−|ε|²)/(1+|ε|²)
    let inv = m.complement() / (T::one() + m.sq());
    let b2 = pt.q * pt.q + pt.p * pt.p;
    lit::<T>(2.0) * inv * (-b2 * inv).exp()
}

/// Wigner function of `|ε⟩` at one phase-plane point.
pub fn wigner_cps<T: Scalar>(
    state: &PhaseState<T>,
    pt: &PhasePoint<T>,
    policy: &WignerPolicy,
) -> Result<WignerValue<T>> {
    policy.validate()?;
    let (mu_max, lambda_max) = policy.cutoffs(state.eps_abs());
    let w1 = w1_closed(&state.modulus(), pt);
    let w2 = w2_series(state, pt, mu_max, lambda_max);
    let tail = w2_tail_bound(state.eps_abs(), mu_max, lambda_max);
    Ok(WignerValue {
        value: w1 + w2,
        w1,
        w2,
        mu_max,
        lambda_max,
        tail_estimate: tail,
        converged: tail <= lit(policy.tail_tol),
    })
}

/// Diagonal part summed as its series `2(1−|ε|²) Σ_n (−|ε|²)ⁿ e^{-b²} L_n(2b²)`.
///
/// Equal to the thermal closed form; kept as the independent route.
pub fn wigner_w1_series<T: Scalar>(
    state: &PhaseState<T>,
    pt: &PhasePoint<T>,
    policy: &TruncationPolicy,
) -> Result<SeriesResult<T>> {
    let m = state.modulus();
    let b = pt.radius();
    let prefactor = lit::<T>(2.0) * m.complement();
    let weight = -m.sq();
    let mut w = prefactor;
    let terms = LaguerreFunctions::new(0, lit::<T>(2.0) * b * b).map(move |h| {
        let t = w * h;
        w = w * weight;
        t
    });
    // |e^{-x/2} L_n(x)| ≤ 1, so the tail after N is below 2 |ε|^{2(N+1)}.
    sum_terms(terms, policy, |n| lit::<T>(2.0) * powi(m.sq(), n + 1))
}

/// Direct evaluation of `∫ dv e^{-ipv} ψ*(q − v/2) ψ(q + v/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    /// `|Im ∫ …|`, zero up to quadrature error.
    pub imag_residue: f64,
    pub window: f64,
    pub covered: bool,
    pub converged: bool,
}

/// Wigner function by quadrature over the wavefunction.
///
/// The window `v ∈ [−V, V]` defaults to `V = 2L` with
/// `L` from [`support_half_width`]; it is flagged as not covering the integrand when
/// `V < 2(L − |q|)`.
pub fn wigner_quadrature_oracle(
    state: &PhaseState<f64>,
    pt: &PhasePoint<f64>,
    policy: &TruncationPolicy,
    quad: &QuadSpec,
) -> Result<OracleValue> {
    let stats = quadrature_stats(state, policy)?;
    let support = support_half_width(&stats);
    let window = quad.half_width.unwrap_or(2.0 * support);
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::InvalidArgument(format!("oracle window {window}")));
    }
    let (value, imag_residue, ok) = integrate_overlap(
        |x| psi_cps(state, x, policy).map(|v| (v.value, v.converged)),
        pt,
        window,
        quad,
    )?;
    Ok(OracleValue {
        value,
        imag_residue,
        window,
        covered: window >= 2.0 * (support - pt.q.abs()),
        converged: ok && stats.converged,
    })
}

/// Same integral for an arbitrary wavefunction, over `v ∈ [−window, window]`.
/// Returns `(Re W, |Im W|)`.
pub fn wigner_from_wavefunction(
    psi: impl Fn(f64) -> Complex<f64> + Sync,
    pt: &PhasePoint<f64>,
    window: f64,
    quad: &QuadSpec,
) -> Result<(f64, f64)> {
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::InvalidArgument(format!("oracle window {window}")));
    }
    let (re, im, _) = integrate_overlap(|x| Ok((psi(x), true)), pt, window, quad)?;
    Ok((re, im))
}

fn integrate_overlap(
    psi: impl Fn(f64) -> Result<(Complex<f64>, bool)> + Sync,
    pt: &PhasePoint<f64>,
    window: f64,
    quad: &QuadSpec,
) -> Result<(f64, f64, bool)> {
    let rule = quad.rule()?;
    let nodes: Vec<(f64, f64)> = rule.nodes(-window, window).collect();
    let integrand = nodes
        .par_iter()
        .map(|&(v, w)| {
            let (left, l_ok) = psi(pt.q - 0.5 * v)?;
            let (right, r_ok) = psi(pt.q + 0.5 * v)?;
            let phase = Complex::from_polar(1.0, -pt.p * v);
            Ok((phase * left.conj() * right * w, l_ok && r_ok))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    let mut converged = true;
    for (z, ok) in &integrand {
        re.add(z.re);
        im.add(z.im);
        converged &= ok;
    }
    Ok((re.value(), im.value().abs(), converged))
}

/// Rectangular lattice of Wigner values.
///
/// Values are stored row-major with one row per `p` node; both axes ascend.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid<T> {
    q_axis: Vec<T>,
    p_axis: Vec<T>,
    values: Vec<T>,
    cell_area: T,
    converged: bool,
}

impl<T: Scalar> WignerGrid<T> {
    /// Assembles a grid from precomputed values (`values[ip * nq + iq]`).
    pub fn from_values(q_axis: Vec<T>, p_axis: Vec<T>, values: Vec<T>, converged: bool) -> Result<Self> {
        if values.len() != q_axis.len() * p_axis.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a {}x{} grid",
                values.len(),
                q_axis.len(),
                p_axis.len()
            )));
        }
        let step = |axis: &[T]| {
            if axis.len() >= 2 {
                (axis[axis.len() - 1] - axis[0]) / from_usize(axis.len() - 1)
            } else {
                T::zero()
            }
        };
        let cell_area = step(&q_axis) * step(&p_axis);
        Ok(Self {
            q_axis,
            p_axis,
            values,
            cell_area,
            converged,
        })
    }

    pub fn q_axis(&self) -> &[T] {
        &self.q_axis
    }

    pub fn p_axis(&self) -> &[T] {
        &self.p_axis
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn cell_area(&self) -> T {
        self.cell_area
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, iq: usize, ip: usize) -> T {
        self.values[ip * self.q_axis.len() + iq]
    }

    pub fn point(&self, iq: usize, ip: usize) -> PhasePoint<T> {
        PhasePoint::new(self.q_axis[iq], self.p_axis[ip])
    }

    /// `Σ W · cell_area`; approximately `2π` when the grid covers the state.
    pub fn integral(&self) -> T {
        self.values.iter().copied().collect::<NeumaierSum<T>>().value() * self.cell_area
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |a, v| a.max(v.abs()))
    }
}

fn axis<T: Scalar>(range: (T, T), n: usize) -> Vec<T> {
    let step = (range.1 - range.0) / from_usize(n - 1);
    (0..n)
        .map(|i| {
            if i + 1 == n {
                range.1
            } else {
                range.0 + step * from_usize(i)
            }
        })
        .collect()
}

/// Evaluates [`wigner_cps`] on a `resolution.0 × resolution.1` lattice
/// spanning `q_range × p_range` (end points included). Points are computed
/// in parallel; the result does not depend on scheduling.
pub fn wigner_grid<T: Scalar>(
    state: &PhaseState<T>,
    q_range: (T, T),
    p_range: (T, T),
    resolution: (usize, usize),
    policy: &WignerPolicy,
) -> Result<WignerGrid<T>> {
    let (nq, np) = resolution;
    if nq < 2 || np < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution must be at least 2 per axis, got {nq}x{np}"
        )));
    }
    for (name, r) in [("q_range", q_range), ("p_range", p_range)] {
        if !(r.0 < r.1 && r.0.is_finite() && r.1.is_finite()) {
            return Err(Error::InvalidArgument(format!("{name} must be increasing and finite")));
        }
    }
    policy.validate()?;
    let q_axis = axis(q_range, nq);
    let p_axis = axis(p_range, np);
    let cells = (0..nq * np)
        .into_par_iter()
        .map(|k| wigner_cps(state, &PhasePoint::new(q_axis[k % nq], p_axis[k / nq]), policy))
        .collect::<Result<Vec<_>>>()?;
    let converged = cells.iter().all(|c| c.converged);
    let values = cells.into_iter().map(|c| c.value).collect();
    WignerGrid::from_values(q_axis, p_axis, values, converged)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Negativity<T> {
    pub min_value: T,
    pub min_location: PhasePoint<T>,
    /// `Σ_{W<0} |W| · cell_area`.
    pub negative_volume: T,
}

/// Minimum of the grid and the volume of its negative part.
pub fn negativity_scan<T: Scalar>(grid: &WignerGrid<T>) -> Result<Negativity<T>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let nq = grid.q_axis.len();
    let (k_min, &min_value) =
        grid.values.iter().enumerate().fold(
            (0, &grid.values[0]),
            |best, cur| if *cur.1 < *best.1 { cur } else { best },
        );
    let negative: NeumaierSum<T> = grid.values.iter().filter(|v| **v < T::zero()).map(|v| -*v).collect();
    Ok(Negativity {
        min_value,
        min_location: grid.point(k_min % nq, k_min / nq),
        negative_volume: negative.value() * grid.cell_area,
    })
}
