//! Fixed-point arbitrary-precision reference sums.
//!
//! Values are integers scaled by `2^BITS`. Inputs are converted from `f64`
//! exactly, so the references are evaluated at precisely the arguments the
//! library sees.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{Float, ToPrimitive, Zero};

/// About 202 decimal digits.
pub const BITS: u32 = 672;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(pub BigUint);

impl Fixed {
    pub fn one() -> Self {
        Fixed(BigUint::from(1u8) << BITS)
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x >= 0.0 && x.is_finite());
        if x == 0.0 {
            return Fixed(BigUint::zero());
        }
        let (mantissa, exponent, _) = x.integer_decode();
        let shift = BITS as i32 + exponent as i32;
        assert!(shift >= 0, "value too small for the fixed-point range");
        Fixed(BigUint::from(mantissa) << shift as u32)
    }

    pub fn from_u64(n: u64) -> Self {
        Fixed(BigUint::from(n) << BITS)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap() / 2f64.powi(BITS as i32)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Fixed((&self.0 * &o.0) >> BITS)
    }

    pub fn div(&self, o: &Self) -> Self {
        Fixed((&self.0 << BITS) / &o.0)
    }

    pub fn half(&self) -> Self {
        Fixed(&self.0 >> 1u8)
    }

    /// `√n` for an integer `n`.
    pub fn sqrt_int(n: u64) -> Self {
        Fixed((BigUint::from(n) << (2 * BITS)).sqrt())
    }
}

/// Exact-argument state data `(|ε|, |ε|², 1 − |ε|²)`.
pub struct Params {
    pub eps: Fixed,
    pub sq: Fixed,
    pub comp: Fixed,
}

impl Params {
    pub fn from_eps(eps: f64) -> Self {
        let e = Fixed::from_f64(eps);
        let sq = e.mul(&e);
        let comp = Fixed::one().sub(&sq);
        Self { eps: e, sq, comp }
    }

    /// From `n̄` as a rational `n̄/(1+n̄)`, mirroring how a state built from
    /// a photon number avoids `1 − |ε|²` cancellation.
    pub fn from_mean_n(n_bar: f64) -> Self {
        let nb = Fixed::from_f64(n_bar);
        let denom = Fixed::one().add(&nb);
        let sq = nb.div(&denom);
        let eps = Fixed((&sq.0 << BITS).sqrt());
        let comp = Fixed::one().div(&denom);
        Self { eps, sq, comp }
    }
}

/// Sums `Σ_n sq^n · g(n)` until `sq^n` vanishes in the fixed-point range or
/// `max_terms` terms are reached.
pub fn power_series(sq: &Fixed, max_terms: usize, mut g: impl FnMut(u64) -> Fixed) -> Fixed {
    let mut acc = Fixed(BigUint::zero());
    let mut pow = Fixed::one();
    for n in 0..max_terms as u64 {
        if pow.is_zero() {
            break;
        }
        acc = acc.add(&pow.mul(&g(n)));
        pow = pow.mul(sq);
    }
    acc
}

pub fn s1(p: &Params, max_terms: usize) -> Fixed {
    let sum = power_series(&p.sq, max_terms, |n| Fixed::sqrt_int(n + 1));
    sum.mul(&p.eps).mul(&p.comp)
}

pub fn s2(p: &Params, max_terms: usize) -> Fixed {
    let sum = power_series(&p.sq, max_terms, |n| Fixed::sqrt_int((n + 1) * (n + 2)));
    sum.mul(&p.sq).mul(&p.comp)
}

/// `σ_x` at `φ = π/2` from `N − S2`, with `N = |ε|²/(1−|ε|²) + 1/2`.
pub fn sigma_min(p: &Params, max_terms: usize) -> Fixed {
    let n = p.sq.div(&p.comp).add(&Fixed::one().half());
    n.sub(&s2(p, max_terms))
}
