use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use anyhow::Result;
use cps_core::observables::{
    quadrature_stats, radius_r, radius_r_interp, rs_product, rs_product_approx, sigma_x_min, sigma_x_min_approx,
    sigma_x_phi0_approx, sigma_x_sqzvac,
};
use cps_core::wavefunction::{gaussian_density, gaussianity_g, psi_coherent, psi_cps};
use cps_core::{
    CoherentState, Complex, Modulus, PhaseState, RsApproxVariant, TruncationPolicy, WignerPolicy, DEFAULT_ETA,
};
use rayon::prelude::*;

use crate::args::FigureId;
use crate::commands::{linspace, wigner_row, WIGNER_COLUMNS};
use crate::table::{Cell, Table};

struct Terms {
    series: TruncationPolicy,
    wigner: WignerPolicy,
}

fn terms(id: FigureId, reference: bool) -> Terms {
    if !reference {
        return Terms {
            series: TruncationPolicy::default(),
            wigner: WignerPolicy::adaptive(1e-10),
        };
    }
    let n = match id {
        FigureId::Sigmin => 1_000,
        FigureId::D => 640_000,
        _ => 10_000,
    };
    Terms {
        series: TruncationPolicy::fixed_n(n),
        wigner: WignerPolicy::fixed(110, 110),
    }
}

fn table(name: &str, columns: &[&'static str], rows: Vec<Vec<Cell>>) -> Table {
    let mut t = Table::new(name, columns);
    for r in rows {
        t.push(r);
    }
    t
}

fn sigmin(points: usize, policy: &TruncationPolicy) -> Result<Table> {
    let rows = linspace(0.0, 0.9999, points)?
        .par_iter()
        .map(|&eps_sq| {
            let m = Modulus::new(eps_sq.sqrt())?;
            let exact = sigma_x_min(m, policy)?;
            Ok(vec![
                eps_sq.into(),
                m.mean_n().into(),
                exact.value.into(),
                sigma_x_min_approx(m).into(),
                (0.5 * m.complement()).into(),
                sigma_x_sqzvac(m.mean_n())?.into(),
                exact.terms_used.into(),
                exact.converged.into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(table(
        "sigmin",
        &[
            "eps_sq",
            "n_bar",
            "sigma_x",
            "sigma_x_approx",
            "half_one_minus_eps_sq",
            "sigma_x_sqzvac",
            "terms_used",
            "converged",
        ],
        rows,
    ))
}

/// `n̄ ∈ [0, 1]` in steps of 0.02, then `2, 3, …, 100`.
fn r_grid(points: Option<usize>) -> Result<Vec<f64>> {
    match points {
        Some(k) => linspace(0.0, 100.0, k),
        None => {
            let mut g = linspace(0.0, 1.0, 51)?;
            g.extend((2..=100).map(f64::from));
            Ok(g)
        }
    }
}

fn radius(grid: &[f64], policy: &TruncationPolicy) -> Result<Table> {
    let rows = grid
        .par_iter()
        .map(|&n_bar| {
            let r = radius_r(Modulus::from_mean_n(n_bar)?, policy)?;
            let ratio = if n_bar == 0.0 { 2.0 } else { r.value / n_bar };
            Ok(vec![
                n_bar.into(),
                r.value.into(),
                radius_r_interp(n_bar, DEFAULT_ETA)?.into(),
                (2.0 * n_bar).into(),
                ratio.into(),
                r.terms_used.into(),
                r.converged.into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(table(
        "R",
        &[
            "n_bar",
            "radius_sq",
            "radius_sq_interp",
            "radius_sq_coherent",
            "radius_sq_over_n_bar",
            "terms_used",
            "converged",
        ],
        rows,
    ))
}

/// `0` followed by `points − 1` log-spaced values from `10⁻²` to `9999`.
fn d_grid(points: usize) -> Result<Vec<f64>> {
    let mut g = vec![0.0];
    if points > 1 {
        let hi = 9999_f64.log10();
        g.extend(linspace(-2.0, hi, points - 1)?.into_iter().enumerate().map(|(i, e)| {
            if i + 2 == points {
                9999.0
            } else {
                10f64.powf(e)
            }
        }));
    }
    Ok(g)
}

fn determinant(grid: &[f64], policy: &TruncationPolicy) -> Result<Table> {
    let rows = grid
        .par_iter()
        .map(|&n_bar| {
            let d = rs_product(&PhaseState::from_mean_n(n_bar, 0.0)?, policy)?;
            Ok(vec![
                n_bar.into(),
                d.value.into(),
                rs_product_approx(n_bar, DEFAULT_ETA, RsApproxVariant::Full)?.into(),
                rs_product_approx(n_bar, DEFAULT_ETA, RsApproxVariant::Simplified)?.into(),
                d.terms_used.into(),
                d.converged.into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(table(
        "D",
        &[
            "n_bar",
            "rs_product",
            "rs_product_approx",
            "rs_product_approx_simplified",
            "terms_used",
            "converged",
        ],
        rows,
    ))
}

fn sqz_mean_phi0(points: usize, policy: &TruncationPolicy) -> Result<Table> {
    let rows = linspace(0.0, 100.0, points)?
        .par_iter()
        .map(|&n_bar| {
            let st = quadrature_stats(&PhaseState::from_mean_n(n_bar, 0.0)?, policy)?;
            Ok(vec![
                n_bar.into(),
                st.var_x.into(),
                sigma_x_phi0_approx(n_bar, DEFAULT_ETA)?.into(),
                st.mean_x.into(),
                st.terms_used.into(),
                st.converged.into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(table(
        "sqz-mean-phi0",
        &["n_bar", "var_x", "var_x_approx", "mean_x", "terms_used", "converged"],
        rows,
    ))
}

/// `n̄ = 25` wavefunction next to the coherent state with `α = 5 e^{iφ}` and
/// the Gaussian density with the same mean and variance.
fn psi(phi: f64, range: (f64, f64), points: usize, policy: &TruncationPolicy, name: &str) -> Result<Table> {
    let state = PhaseState::from_mean_n(25.0, phi)?;
    let st = quadrature_stats(&state, policy)?;
    let coherent = CoherentState::new(Complex::from_polar(5.0, phi));
    let rows = linspace(range.0, range.1, points)?
        .par_iter()
        .map(|&x| {
            let v = psi_cps(&state, x, policy)?;
            let c = psi_coherent(&coherent, x);
            Ok(vec![
                x.into(),
                v.value.re.into(),
                v.value.im.into(),
                v.value.norm_sqr().into(),
                c.re.into(),
                c.norm_sqr().into(),
                gaussian_density(st.mean_x, st.var_x, x)?.into(),
                v.terms_used.into(),
                (v.converged && st.converged).into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(table(
        name,
        &[
            "x",
            "psi_re",
            "psi_im",
            "density",
            "coherent_re",
            "coherent_density",
            "gaussian_density",
            "terms_used",
            "converged",
        ],
        rows,
    ))
}

fn gaussianity(points: usize, policy: &TruncationPolicy) -> Result<Table> {
    let rows = linspace(0.0, 100.0, points)?
        .par_iter()
        .map(|&n_bar| {
            let a = gaussianity_g(&PhaseState::from_mean_n(n_bar, 0.0)?, policy)?;
            let b = gaussianity_g(&PhaseState::from_mean_n(n_bar, FRAC_PI_2)?, policy)?;
            Ok(vec![
                n_bar.into(),
                a.value.into(),
                b.value.into(),
                a.terms_used.max(b.terms_used).into(),
                (a.converged && b.converged).into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(table(
        "G",
        &["n_bar", "g_phi0", "g_pi2", "terms_used", "converged"],
        rows,
    ))
}

/// Sections `W(q, 0)` for `n̄ ∈ {1, 30}` and `φ ∈ {0, π/4, π/2, 3π/4, π}`.
fn wigner_sections(points: usize, policy: &WignerPolicy) -> Result<Table> {
    policy.validate()?;
    let qs = linspace(-12.0, 12.0, points)?;
    let mut jobs = Vec::new();
    for n_bar in [1.0, 30.0] {
        for phi in [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4, PI] {
            for &q in &qs {
                jobs.push((n_bar, phi, q));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(n_bar, phi, q)| {
            let state = PhaseState::from_mean_n(n_bar, phi)?;
            let mut row: Vec<Cell> = vec![n_bar.into(), phi.into()];
            row.extend(wigner_row(&state, q, 0.0, policy)?);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut columns = vec!["n_bar", "phi"];
    columns.extend_from_slice(WIGNER_COLUMNS);
    Ok(table("wig", &columns, rows))
}

pub fn figure(id: FigureId, reference_terms: bool, points: Option<usize>) -> Result<Table> {
    let t = terms(id, reference_terms);
    match id {
        FigureId::Sigmin => sigmin(points.unwrap_or(201), &t.series),
        FigureId::R => radius(&r_grid(points)?, &t.series),
        FigureId::D => determinant(&d_grid(points.unwrap_or(121))?, &t.series),
        FigureId::SqzMeanPhi0 => sqz_mean_phi0(points.unwrap_or(101), &t.series),
        FigureId::PsiVf0 => psi(0.0, (-6.0, 20.0), points.unwrap_or(261), &t.series, "psi-vf0"),
        FigureId::PsiPi2 => psi(FRAC_PI_2, (-3.0, 3.0), points.unwrap_or(301), &t.series, "psi-pi2"),
        FigureId::G => gaussianity(points.unwrap_or(101), &t.series),
        FigureId::Wig => wigner_sections(points.unwrap_or(241), &t.wigner),
    }
}
