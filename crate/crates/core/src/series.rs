//! State parameters and audited summation of the slowly convergent series
//! behind every quadrature statistic.
//!
//! A coherent phase state is fixed by a complex parameter `ε = |ε| e^{iφ}`
//! with `|ε| < 1`. The modulus alone determines the photon-number
//! distribution and the two series
//!
//! ```text
//! S1 = (1 − |ε|²) Σ_n |ε|^{2n+1} √(n+1)
//! S2 = (1 − |ε|²) Σ_n |ε|^{2n+2} √((n+1)(n+2))
//! ```
//!
//! which converge geometrically with ratio `|ε|²`, i.e. very slowly when the
//! mean photon number is large. Every summed series returns a
//! [`SeriesResult`] carrying the number of terms used and a rigorous bound on
//! the omitted tail.

use crate::error::{domain, Error, Result};
use crate::scalar::{from_usize, lit, to_f64, NeumaierSum, Scalar};

/// Modulus `|ε|` of the state parameter together with the derived
/// quantities `|ε|²` and `1 − |ε|²`.
///
/// Both derived values are cached at construction so that states built from
/// a mean photon number keep `1 − |ε|² = 1/(1+n̄)` without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus<T> {
    abs: T,
    sq: T,
    complement: T,
    ln_sq: T,
}

impl<T: Scalar> Modulus<T> {
    pub fn new(eps_abs: T) -> Result<Self> {
        if !(eps_abs >= T::zero() && eps_abs < T::one()) {
            return Err(domain("eps_abs", to_f64(eps_abs), "0 <= |eps| < 1"));
        }
        // 1 − ε² as (1 − ε)(1 + ε) stays accurate near |ε| → 1.
        let complement = (T::one() - eps_abs) * (T::one() + eps_abs);
        Ok(Self {
            abs: eps_abs,
            sq: eps_abs * eps_abs,
            complement,
            ln_sq: lit::<T>(2.0) * eps_abs.ln(),
        })
    }

    pub fn from_mean_n(n_bar: T) -> Result<Self> {
        if !(n_bar >= T::zero() && n_bar.is_finite()) {
            return Err(domain("n_bar", to_f64(n_bar), "0 <= n_bar < inf"));
        }
        let denom = T::one() + n_bar;
        let sq = n_bar / denom;
        Ok(Self {
            abs: sq.sqrt(),
            sq,
            complement: T::one() / denom,
            ln_sq: -n_bar.recip().ln_1p(),
        })
    }

    pub fn vacuum() -> Self {
        Self {
            abs: T::zero(),
            sq: T::zero(),
            complement: T::one(),
            ln_sq: T::neg_infinity(),
        }
    }

    /// `|ε|`
    #[inline]
    pub fn abs(&self) -> T {
        self.abs
    }

    /// `|ε|²`
    #[inline]
    pub fn sq(&self) -> T {
        self.sq
    }

    /// `1 − |ε|²`
    #[inline]
    pub fn complement(&self) -> T {
        self.complement
    }

    /// `|ε|^{2n}`, from the cached logarithm so that the rounding of `|ε|²`
    /// is not raised to the `n`-th power.
    #[inline]
    pub fn pow_sq(&self, n: usize) -> T {
        if n == 0 {
            T::one()
        } else {
            (from_usize::<T>(n) * self.ln_sq).exp()
        }
    }

    /// `|ε|ⁿ`.
    #[inline]
    pub fn pow_abs(&self, n: usize) -> T {
        if n == 0 {
            T::one()
        } else {
            (from_usize::<T>(n) * self.ln_sq * lit(0.5)).exp()
        }
    }

    /// Mean photon number `|ε|²/(1 − |ε|²)`.
    #[inline]
    pub fn mean_n(&self) -> T {
        self.sq / self.complement
    }

    /// `N = n̄ + 1/2`, the quadrature variance of the thermal state with the
    /// same photon statistics.
    #[inline]
    pub fn thermal_variance(&self) -> T {
        self.mean_n() + lit(0.5)
    }
}

/// Coherent phase state `|ε⟩` with `ε = |ε| e^{iφ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState<T> {
    modulus: Modulus<T>,
    phase: T,
}

impl<T: Scalar> PhaseState<T> {
    pub fn new(eps_abs: T, phase: T) -> Result<Self> {
        Self::from_modulus(Modulus::new(eps_abs)?, phase)
    }

    pub fn from_mean_n(n_bar: T, phase: T) -> Result<Self> {
        Self::from_modulus(Modulus::from_mean_n(n_bar)?, phase)
    }

    pub fn from_modulus(modulus: Modulus<T>, phase: T) -> Result<Self> {
        if !phase.is_finite() {
            return Err(domain("phase", to_f64(phase), "finite radians"));
        }
        Ok(Self { modulus, phase })
    }

    pub fn vacuum() -> Self {
        Self {
            modulus: Modulus::vacuum(),
            phase: T::zero(),
        }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus<T> {
        self.modulus
    }

    #[inline]
    pub fn eps_abs(&self) -> T {
        self.modulus.abs
    }

    #[inline]
    pub fn phase(&self) -> T {
        self.phase
    }

    #[inline]
    pub fn mean_n(&self) -> T {
        self.modulus.mean_n()
    }

    /// Same modulus, different phase.
    pub fn with_phase(&self, phase: T) -> Result<Self> {
        Self::from_modulus(self.modulus, phase)
    }

    /// `(cos nφ, sin nφ)`.
    ///
    /// Phases that are bit-identical to `0`, `±π/2` or `±π` are treated as
    /// exact quarter turns, so `φ = π/2` gives `cos φ = 0` exactly.
    pub fn rotation(&self, n: usize) -> (T, T) {
        match quarter_turns(self.phase) {
            Some(k) => match (k * (n % 4)) % 4 {
                0 => (T::one(), T::zero()),
                1 => (T::zero(), T::one()),
                2 => (-T::one(), T::zero()),
                _ => (T::zero(), -T::one()),
            },
            None => {
                let (s, c) = (from_usize::<T>(n) * self.phase).sin_cos();
                (c, s)
            }
        }
    }
}

fn quarter_turns<T: Scalar>(phase: T) -> Option<usize> {
    if phase == T::zero() {
        Some(0)
    } else if phase == T::FRAC_PI_2() {
        Some(1)
    } else if phase == T::PI() || phase == -T::PI() {
        Some(2)
    } else if phase == -T::FRAC_PI_2() {
        Some(3)
    } else {
        None
    }
}

/// Mean photon number `|ε|²/(1 − |ε|²)`.
pub fn mean_n<T: Scalar>(eps_abs: T) -> Result<T> {
    Modulus::new(eps_abs).map(|m| m.mean_n())
}

/// Inverse of [`mean_n`]: `|ε| = √(n̄/(1+n̄))`.
pub fn eps_from_mean_n<T: Scalar>(n_bar: T) -> Result<T> {
    Modulus::from_mean_n(n_bar).map(|m| m.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationMode {
    /// Stop at the first index whose tail bound meets `tail_tol`, or at
    /// `max_terms`.
    Adaptive,
    /// Sum exactly `N` terms regardless of the tail bound.
    FixedN(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    /// Absolute tolerance on the estimated tail.
    pub tail_tol: f64,
    pub mode: TruncationMode,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self::adaptive(1_000_000, 1e-14)
    }
}

impl TruncationPolicy {
    pub fn adaptive(max_terms: usize, tail_tol: f64) -> Self {
        Self {
            max_terms,
            tail_tol,
            mode: TruncationMode::Adaptive,
        }
    }

    /// Exactly `n` terms. `tail_tol` only decides the `converged` flag.
    pub fn fixed_n(n: usize) -> Self {
        Self {
            max_terms: n,
            tail_tol: 1e-14,
            mode: TruncationMode::FixedN(n),
        }
    }

    /// Default used for coordinate wavefunctions (tail below `1e-10`).
    pub fn wavefunction() -> Self {
        Self::adaptive(1_000_000, 1e-10)
    }

    pub fn with_tail_tol(mut self, tail_tol: f64) -> Self {
        self.tail_tol = tail_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(Error::InvalidPolicy("max_terms must be positive".into()));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol.is_finite()) {
            return Err(Error::InvalidPolicy(format!(
                "tail_tol must be positive and finite, got {}",
                self.tail_tol
            )));
        }
        if let TruncationMode::FixedN(n) = self.mode {
            if n == 0 || n > self.max_terms {
                return Err(Error::InvalidPolicy(format!(
                    "fixed_n({n}) requires 1 <= N <= max_terms = {}",
                    self.max_terms
                )));
            }
        }
        Ok(())
    }
}

/// A summed series with its audit trail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult<T> {
    pub value: T,
    pub terms_used: usize,
    /// Upper bound on the magnitude of the omitted tail.
    pub tail_estimate: T,
    /// `tail_estimate <= tail_tol` of the policy used.
    pub converged: bool,
}

impl<T: Scalar> SeriesResult<T> {
    /// Applies `f` to the value and keeps the audit trail.
    pub fn map(self, f: impl FnOnce(T) -> T) -> Self {
        Self {
            value: f(self.value),
            ..self
        }
    }
}

/// A value derived from one or more series, with the combined convergence
/// flag. Non-convergence is reported, not raised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flagged<V> {
    pub value: V,
    pub terms_used: usize,
    pub converged: bool,
}

/// Sums `term(0), term(1), …` in ascending order with compensated
/// accumulation.
///
/// `tail_bound(N)` must bound `|Σ_{n>N} term(n)|`. The reported
/// `tail_estimate` is `tail_bound(terms_used − 1)`.
pub fn sum_series<T, F, B>(mut term: F, policy: &TruncationPolicy, tail_bound: B) -> Result<SeriesResult<T>>
where
    T: Scalar,
    F: FnMut(usize) -> T,
    B: FnMut(usize) -> T,
{
    sum_terms((0..).map(&mut term), policy, tail_bound)
}

/// Iterator form of [`sum_series`] for terms produced by a recurrence.
pub fn sum_terms<T, I, B>(terms: I, policy: &TruncationPolicy, mut tail_bound: B) -> Result<SeriesResult<T>>
where
    T: Scalar,
    I: IntoIterator<Item = T>,
    B: FnMut(usize) -> T,
{
    policy.validate()?;
    let tol: T = lit(policy.tail_tol);
    let mut acc = NeumaierSum::new();
    let mut terms = terms.into_iter();
    let mut used = 0usize;
    let tail = match policy.mode {
        TruncationMode::FixedN(n) => {
            for t in terms.by_ref().take(n) {
                acc.add(t);
                used += 1;
            }
            tail_bound(used.saturating_sub(1))
        }
        TruncationMode::Adaptive => {
            let mut tail = T::infinity();
            for t in terms.by_ref().take(policy.max_terms) {
                acc.add(t);
                tail = tail_bound(used);
                used += 1;
                if tail <= tol {
                    break;
                }
            }
            tail
        }
    };
    Ok(SeriesResult {
        value: acc.value(),
        terms_used: used,
        tail_estimate: tail,
        converged: tail <= tol,
    })
}

/// `term_N · r/(1 − r)` for a positive series whose term ratio is bounded
/// by `r` from index `N` on; infinite when `r >= 1`.
#[inline]
pub(crate) fn ratio_tail<T: Scalar>(term_n: T, ratio: T) -> T {
    if ratio < T::one() {
        term_n * ratio / (T::one() - ratio)
    } else {
        T::infinity()
    }
}

#[inline]
pub(crate) fn powi<T: Scalar>(base: T, n: usize) -> T {
    match i32::try_from(n) {
        Ok(k) => base.powi(k),
        Err(_) => base.powf(from_usize(n)),
    }
}

fn s1_term<T: Scalar>(m: &Modulus<T>, n: usize) -> T {
    m.complement * m.abs * m.pow_sq(n) * from_usize::<T>(n + 1).sqrt()
}

fn s2_term<T: Scalar>(m: &Modulus<T>, n: usize) -> T {
    m.complement * m.pow_sq(n + 1) * (from_usize::<T>(n + 1) * from_usize::<T>(n + 2)).sqrt()
}

/// `S1 = (1 − |ε|²) Σ_n |ε|^{2n+1} √(n+1)`.
pub fn s1<T: Scalar>(m: Modulus<T>, policy: &TruncationPolicy) -> Result<SeriesResult<T>> {
    sum_series(
        |n| s1_term(&m, n),
        policy,
        |n| {
            let r = m.sq * (from_usize::<T>(n + 2) / from_usize::<T>(n + 1)).sqrt();
            ratio_tail(s1_term(&m, n), r)
        },
    )
}

/// `S2 = (1 − |ε|²) Σ_n |ε|^{2n+2} √((n+1)(n+2))`.
pub fn s2<T: Scalar>(m: Modulus<T>, policy: &TruncationPolicy) -> Result<SeriesResult<T>> {
    sum_series(
        |n| s2_term(&m, n),
        policy,
        |n| {
            let r = m.sq * (from_usize::<T>(n + 3) / from_usize::<T>(n + 1)).sqrt();
            ratio_tail(s2_term(&m, n), r)
        },
    )
}
