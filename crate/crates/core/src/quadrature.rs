//! Composite Gauss–Legendre rules for the quadrature oracles.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Interval split into equal panels, each integrated with the same
/// Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct CompositeGaussLegendre {
    panels: usize,
    rule: Vec<(f64, f64)>,
}

impl CompositeGaussLegendre {
    pub fn new(panels: usize, order: usize) -> Result<Self> {
        let degree = NonZeroUsize::new(order)
            .ok_or_else(|| Error::InvalidArgument("quadrature order must be positive".into()))?;
        if panels == 0 {
            return Err(Error::InvalidArgument("quadrature needs at least one panel".into()));
        }
        let rule = GaussLegendre::new(degree).as_node_weight_pairs().to_vec();
        Ok(Self { panels, rule })
    }

    pub fn len(&self) -> usize {
        self.panels * self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes and weights on `[a, b]`, in ascending panel order.
    pub fn nodes(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = (b - a) / self.panels as f64;
        (0..self.panels).flat_map(move |k| {
            let left = a + h * k as f64;
            self.rule
                .iter()
                .map(move |&(x, w)| (left + 0.5 * h * (x + 1.0), 0.5 * h * w))
        })
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Integration window and resolution for the quadrature oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    /// Half-width `L` of the window `[−L, L]`. `None` derives it from the
    /// state, see [`crate::wavefunction::support_half_width`].
    pub half_width: Option<f64>,
    pub panels: usize,
    pub order: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            half_width: None,
            panels: 200,
            order: 20,
        }
    }
}

impl QuadSpec {
    pub fn with_half_width(mut self, half_width: f64) -> Self {
        self.half_width = Some(half_width);
        self
    }

    pub(crate) fn rule(&self) -> Result<CompositeGaussLegendre> {
        CompositeGaussLegendre::new(self.panels, self.order)
    }
}
