//! Two-term recurrences carried with a separate logarithmic scale so that
//! sequences starting far below the smallest normal float (for example
//! `e^{-x²/2}` at `|x| = 50`) are not flushed to zero before they grow.

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledPair<T> {
    pub prev: T,
    pub cur: T,
    /// True values are `prev · e^{log_scale}` and `cur · e^{log_scale}`.
    log_scale: T,
}

impl<T: Scalar> ScaledPair<T> {
    /// Starts the sequence at `e^{log_start}` with an implicit predecessor 0.
    pub fn start(log_start: T) -> Self {
        if log_start > fold_threshold::<T>() {
            Self {
                prev: T::zero(),
                cur: log_start.exp(),
                log_scale: T::zero(),
            }
        } else {
            Self {
                prev: T::zero(),
                cur: T::one(),
                log_scale: log_start,
            }
        }
    }

    #[inline]
    pub fn is_scaled(&self) -> bool {
        self.log_scale != T::zero()
    }

    /// Pushes the next scaled value and keeps the pair inside the float
    /// range. Returns the factor by which any running sum kept in the old
    /// scale has to be multiplied.
    #[inline]
    pub fn push(&mut self, next: T) -> T {
        self.prev = self.cur;
        self.cur = next;
        if self.is_scaled() {
            self.renormalize()
        } else {
            T::one()
        }
    }

    fn renormalize(&mut self) -> T {
        let mut factor = T::one();
        let big = T::max_value().sqrt();
        if self.cur.abs() > big {
            self.prev = self.prev / big;
            self.cur = self.cur / big;
            self.log_scale = self.log_scale + big.ln();
            factor = factor / big;
        }
        let threshold = fold_threshold::<T>();
        if self.log_scale > threshold && self.cur != T::zero() && self.cur.abs().ln() + self.log_scale > threshold {
            let f = self.log_scale.exp();
            self.prev = self.prev * f;
            self.cur = self.cur * f;
            self.log_scale = T::zero();
            factor = factor * f;
        }
        factor
    }

    /// Unscaled value of a quantity expressed in the current scale.
    #[inline]
    pub fn unscale(&self, v: T) -> T {
        if !self.is_scaled() || v == T::zero() {
            v
        } else {
            v.signum() * (v.abs().ln() + self.log_scale).exp()
        }
    }

    #[inline]
    pub fn current(&self) -> T {
        self.unscale(self.cur)
    }
}

/// Values whose logarithm exceeds this are kept unscaled.
fn fold_threshold<T: Scalar>() -> T {
    T::min_positive_value().ln() / (T::one() + T::one())
}
