//! Closed-form rate tables over `(c, λ)` grids.

use std::path::Path;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::ProxParams;
use crate::rate_theory::{
    lambda_star, optimal_parameters, rho_at_lambda_star, rho_closed_form, rho_gdr_closed_form,
    OptimalParameters, RatePrediction, SyntheticSpec,
};
use crate::solvers::Variant;

/// Number of grid points re-derived from an explicit iteration matrix.
pub const SPECTRAL_CHECKS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub c: f64,
    pub lambda: f64,
    /// `ρ(θ₁, c)`, the `λ = 1` rate.
    pub rho_c: f64,
    /// `ρ(θ₁, c, λ)`.
    pub rho_c_lambda: f64,
    pub lambda_star: f64,
    pub rho_lambda_star: f64,
    /// `c_star`, `c_sharp`, `c_bar` when `c` is the grid point nearest to
    /// that parameter, joined by `;`.
    pub markers: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralCheck {
    pub c: f64,
    pub lambda: f64,
    pub closed_form: f64,
    pub spectral: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub theta1: f64,
    pub params: OptimalParameters,
    pub rows: Vec<SweepRow>,
    pub checks: Vec<SpectralCheck>,
}

impl SweepTable {
    /// Largest closed-form/spectral discrepancy among the checks.
    pub fn max_check_gap(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| (c.closed_form - c.spectral).abs())
            .fold(0.0, f64::max)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn nearest(grid: &[f64], target: f64) -> Option<usize> {
    (0..grid.len()).min_by(|&i, &j| {
        (grid[i] - target)
            .abs()
            .total_cmp(&(grid[j] - target).abs())
    })
}

/// Spectral radius of the relaxed regularized iteration matrix on a mixed
/// one-angle geometry with a shared row.
fn spectral_rate(theta1: f64, c: f64, lambda: f64, seed: u64) -> Result<f64> {
    let g = SyntheticSpec {
        angles: vec![theta1],
        extra_null: 1,
        shared_rows: 1,
        mix: true,
        seed,
    }
    .build()?;
    let k = g.constraint()?;
    let (variant, prox) = if c >= 1.0 {
        (Variant::Gdr, ProxParams::unregularized(1.0)?)
    } else {
        (Variant::GdrReg, ProxParams::from_alpha_c(1.0, c)?)
    };
    Ok(RatePrediction::spectral(variant, &g.support, &k, &prox, lambda)?.rho)
}

/// Tabulates `ρ(θ₁, c)` and `ρ(θ₁, c, λ)` over the grids, marks the grid
/// points nearest `c*`, `c♯`, `c̄`, and re-derives five seeded grid points
/// from explicit iteration matrices.
pub fn sweep_rates(theta1: f64, c_grid: &[f64], lambda_grid: &[f64]) -> Result<SweepTable> {
    let params = optimal_parameters(theta1)?;
    if c_grid.is_empty() || lambda_grid.is_empty() {
        return Err(Error::InvalidArgument("empty sweep grid".into()));
    }
    if let Some(c) = c_grid.iter().find(|&&c| !(c > 0.0 && c <= 1.0)) {
        return Err(Error::InvalidArgument(format!("c = {c} outside (0, 1]")));
    }
    if let Some(l) = lambda_grid.iter().find(|&&l| !(l > 0.0 && l <= 2.0)) {
        return Err(Error::InvalidArgument(format!("lambda = {l} outside (0, 2]")));
    }
    let marks = [
        ("c_star", params.c_star),
        ("c_sharp", params.c_sharp),
        ("c_bar", params.c_bar),
    ];
    let mut rows = Vec::with_capacity(c_grid.len() * lambda_grid.len());
    for (ci, &c) in c_grid.iter().enumerate() {
        let markers: Vec<&str> = marks
            .iter()
            .filter(|(_, v)| nearest(c_grid, *v) == Some(ci))
            .map(|(name, _)| *name)
            .collect();
        let rho_c = rho_closed_form(theta1, c)?;
        let ls = lambda_star(theta1, c)?;
        let rls = rho_at_lambda_star(theta1, c)?;
        for &lambda in lambda_grid {
            rows.push(SweepRow {
                c,
                lambda,
                rho_c,
                rho_c_lambda: rho_gdr_closed_form(theta1, c, lambda)?,
                lambda_star: ls,
                rho_lambda_star: rls,
                markers: markers.join(";"),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(theta1.to_bits());
    let picks = index::sample(&mut rng, rows.len(), SPECTRAL_CHECKS.min(rows.len()));
    let mut checks = Vec::with_capacity(picks.len());
    for (n, i) in picks.into_iter().enumerate() {
        let row = &rows[i];
        checks.push(SpectralCheck {
            c: row.c,
            lambda: row.lambda,
            closed_form: row.rho_c_lambda,
            spectral: spectral_rate(theta1, row.c, row.lambda, n as u64)?,
        });
    }
    Ok(SweepTable {
        theta1,
        params,
        rows,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Grid;
    use crate::rate_theory::{best_rate_dr, best_rate_pr};

    fn grid(s: &str) -> Vec<f64> {
        s.parse::<Grid>().unwrap().values()
    }

    #[test]
    fn unit_column_is_cos_theta() {
        let theta = 0.3;
        let t = sweep_rates(theta, &grid("0.1:1:0.1"), &grid("0.25:2:0.25")).unwrap();
        for r in t.rows.iter().filter(|r| (r.c - 1.0).abs() < 1e-12 && r.lambda == 1.0) {
            assert!((r.rho_c_lambda - theta.cos()).abs() < 1e-14);
            assert!((r.rho_c - theta.cos()).abs() < 1e-14);
        }
        assert!(t.max_check_gap() < 1e-10, "{}", t.max_check_gap());
        assert_eq!(t.checks.len(), 5);
    }

    #[test]
    fn minimum_near_c_star() {
        let theta = 0.4;
        let step = 0.005;
        let cs = grid(&format!("{step}:1:{step}"));
        let t = sweep_rates(theta, &cs, &[1.0, 2.0]).unwrap();
        let best = t
            .rows
            .iter()
            .filter(|r| r.lambda == 1.0)
            .min_by(|a, b| a.rho_c.total_cmp(&b.rho_c))
            .unwrap();
        assert!((best.c - t.params.c_star).abs() <= step);
        let marked = t.rows.iter().find(|r| r.markers.contains("c_star")).unwrap();
        assert!((marked.c - best.c).abs() <= step + 1e-12);
        // square-root cusp at c*: one grid step moves the value by O(√step)
        assert!((best.rho_c - best_rate_dr(theta)).abs() < 0.05);
        let best_pr = t
            .rows
            .iter()
            .min_by(|a, b| a.rho_c_lambda.total_cmp(&b.rho_c_lambda))
            .unwrap();
        assert_eq!(best_pr.lambda, 2.0);
        assert!((best_pr.rho_c_lambda - best_rate_pr(theta)).abs() < 0.05);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(sweep_rates(1.0, &[0.5], &[1.0]).is_err());
        assert!(sweep_rates(0.3, &[1.5], &[1.0]).is_err());
        assert!(sweep_rates(0.3, &[0.5], &[2.5]).is_err());
    }

    #[test]
    fn csv_output() {
        let t = sweep_rates(0.2, &[0.5, 1.0], &[1.0]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        t.write_csv(&p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("c,lambda,rho_c,rho_c_lambda,lambda_star,rho_lambda_star,markers"));
        assert_eq!(text.lines().count(), 3);
    }
}
