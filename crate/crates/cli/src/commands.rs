use anyhow::{bail, Result};
use cps_core::observables::{fit_eta, quadrature_stats};
use cps_core::wavefunction::{gaussianity_g, gaussianity_small_eps, psi_cps};
use cps_core::wigner::wigner_cps;
use cps_core::{PhaseCase, PhasePoint, PhaseState, QuadratureStats, TruncationPolicy, WignerPolicy};
use rayon::prelude::*;

use crate::args::SweepParam;
use crate::table::{Cell, Table};

/// `n` points from `a` to `b`, both included.
pub fn linspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(a.is_finite() && b.is_finite()) {
        bail!("range bounds must be finite");
    }
    match n {
        0 => bail!("need at least one point"),
        1 => Ok(vec![a]),
        _ => {
            if a >= b {
                bail!("range must be increasing, got {a} .. {b}");
            }
            let step = (b - a) / (n - 1) as f64;
            Ok((0..n)
                .map(|i| if i + 1 == n { b } else { a + step * i as f64 })
                .collect())
        }
    }
}

pub const STATS_COLUMNS: &[&str] = &[
    "eps_abs",
    "phi",
    "n_bar",
    "mean_x",
    "mean_p",
    "var_x",
    "var_p",
    "cov_xp",
    "rs_product",
    "radius_sq",
    "terms_used",
    "converged",
];

fn stats_row(s: &PhaseState, st: &QuadratureStats) -> Vec<Cell> {
    vec![
        s.eps_abs().into(),
        s.phase().into(),
        s.mean_n().into(),
        st.mean_x.into(),
        st.mean_p.into(),
        st.var_x.into(),
        st.var_p.into(),
        st.cov_xp.into(),
        st.rs_product.into(),
        st.radius_sq.into(),
        st.terms_used.into(),
        st.converged.into(),
    ]
}

pub fn stats(state: &PhaseState, policy: &TruncationPolicy) -> Result<Table> {
    let st = quadrature_stats(state, policy)?;
    let mut t = Table::new("stats", STATS_COLUMNS);
    t.push(stats_row(state, &st));
    Ok(t)
}

pub fn sweep(
    param: SweepParam,
    from: f64,
    to: f64,
    points: usize,
    phi: f64,
    policy: &TruncationPolicy,
) -> Result<Table> {
    let grid = linspace(from, to, points)?;
    let rows = grid
        .par_iter()
        .map(|&v| {
            let s = match param {
                SweepParam::Eps => PhaseState::new(v, phi)?,
                SweepParam::Nbar => PhaseState::from_mean_n(v, phi)?,
            };
            Ok(stats_row(&s, &quadrature_stats(&s, policy)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new("sweep", STATS_COLUMNS);
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

pub fn wavefunction(state: &PhaseState, xs: &[f64], policy: &TruncationPolicy) -> Result<Table> {
    let rows = xs
        .par_iter()
        .map(|&x| {
            let v = psi_cps(state, x, policy)?;
            Ok(vec![
                x.into(),
                v.value.re.into(),
                v.value.im.into(),
                v.value.norm_sqr().into(),
                v.terms_used.into(),
                v.converged.into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(
        "wavefunction",
        &["x", "psi_re", "psi_im", "density", "terms_used", "converged"],
    );
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

pub const WIGNER_COLUMNS: &[&str] = &[
    "q",
    "p",
    "w",
    "w1",
    "w2",
    "mu_max",
    "lambda_max",
    "tail_estimate",
    "converged",
];

pub fn wigner_row(state: &PhaseState, q: f64, p: f64, policy: &WignerPolicy) -> Result<Vec<Cell>> {
    let v = wigner_cps(state, &PhasePoint::new(q, p), policy)?;
    Ok(vec![
        q.into(),
        p.into(),
        v.value.into(),
        v.w1.into(),
        v.w2.into(),
        v.mu_max.into(),
        v.lambda_max.into(),
        v.tail_estimate.into(),
        v.converged.into(),
    ])
}

/// Rows ordered by `p`, then `q`, both ascending.
pub fn wigner(state: &PhaseState, qs: &[f64], ps: &[f64], policy: &WignerPolicy) -> Result<Table> {
    policy.validate()?;
    let points: Vec<(f64, f64)> = ps.iter().flat_map(|&p| qs.iter().map(move |&q| (q, p))).collect();
    let rows = points
        .par_iter()
        .map(|&(q, p)| wigner_row(state, q, p, policy))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new("wigner", WIGNER_COLUMNS);
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

pub fn gaussianity(state: &PhaseState, policy: &TruncationPolicy) -> Result<Table> {
    let g = gaussianity_g(state, policy)?;
    let approx = gaussianity_small_eps(state.eps_abs(), PhaseCase::Zero)?;
    let mut t = Table::new(
        "gaussianity",
        &["eps_abs", "phi", "n_bar", "g", "g_small_eps", "terms_used", "converged"],
    );
    t.push(vec![
        state.eps_abs().into(),
        state.phase().into(),
        state.mean_n().into(),
        g.value.into(),
        approx.into(),
        g.terms_used.into(),
        g.converged.into(),
    ]);
    Ok(t)
}

pub fn eta(from: f64, to: f64, points: usize, policy: &TruncationPolicy) -> Result<Table> {
    let fit = fit_eta((from, to), points, policy)?;
    let mut t = Table::new(
        "fit-eta",
        &[
            "eta",
            "intercept",
            "residual_rms",
            "n_from",
            "n_to",
            "points",
            "converged",
        ],
    );
    t.push(vec![
        fit.eta.into(),
        fit.intercept.into(),
        fit.residual.into(),
        fit.fit_range.0.into(),
        fit.fit_range.1.into(),
        points.into(),
        fit.converged.into(),
    ]);
    Ok(t)
}
