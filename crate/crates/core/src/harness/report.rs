//! Text renderings of a [`TransversalityReport`].

use std::io::{self, Write};

use crate::error::Result;
use crate::geometry::SurfaceModel;
use crate::transversality::{check_definition, estimate_constants, TransversalityReport};

use super::fmt17;

/// Runs [`estimate_constants`] and then [`check_definition`] with the same seed.
pub fn run_transversality(
    model: &SurfaceModel<f64>,
    n_pairs: usize,
    n_thetas: usize,
    max_order: usize,
    seed: u64,
) -> Result<(TransversalityReport<f64>, TransversalityReport<f64>)> {
    let constants = estimate_constants(model, n_pairs, seed)?;
    let check = check_definition(model, n_pairs, n_thetas, max_order, seed)?;
    Ok((constants, check))
}

/// One-line summary, `c_hat=..., C_hat=..., c_analytic=..., C_analytic=..., violations=N`.
pub fn summary_line(report: &TransversalityReport<f64>) -> String {
    format!(
        "c_hat={}, C_hat={}, c_analytic={}, C_analytic={}, violations={}",
        report.c_hat,
        report.upper_hat,
        report.c_analytic,
        report.upper_analytic,
        report.violations.len()
    )
}

/// `key,value` rows for every scalar of the report, then one row per
/// derivative bound and one per violation.
pub fn write_report_csv<W: Write>(report: &TransversalityReport<f64>, mut out: W) -> io::Result<()> {
    writeln!(out, "key,value")?;
    for (key, value) in [
        ("c_hat", report.c_hat),
        ("C_hat", report.upper_hat),
        ("c_analytic", report.c_analytic),
        ("C_analytic", report.upper_analytic),
        ("c_prime", report.c_prime),
    ] {
        writeln!(out, "{key},{}", fmt17(value))?;
    }
    for (l, b) in report.derivative_bounds.iter().enumerate() {
        writeln!(out, "phi_derivative_bound_{l},{}", fmt17(*b))?;
    }
    for (l, b) in report.projection_derivative_bounds.iter().enumerate() {
        writeln!(out, "projection_derivative_bound_{l},{}", fmt17(*b))?;
    }
    writeln!(out, "violations,{}", report.violations.len())?;
    writeln!(out, "out_of_bounds,{}", report.out_of_bounds)?;
    writeln!(out, "regularity_failures,{}", report.regularity_failures)?;
    writeln!(out, "sample_count,{}", report.sample_count)?;
    writeln!(out, "theta_count,{}", report.theta_count)?;
    writeln!(out, "seed,{}", report.seed)?;
    for v in &report.violations {
        writeln!(out, "violation_theta,{}", fmt17(v.theta))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_report_summary() {
        let model = SurfaceModel::euclidean(1.0).unwrap();
        let (constants, check) = run_transversality(&model, 200, 30, 4, 1).unwrap();
        assert!(constants.is_clean() && check.is_clean());
        let line = summary_line(&check);
        assert!(line.starts_with("c_hat=") && line.ends_with("violations=0"), "{line}");
        let mut buf = Vec::new();
        write_report_csv(&check, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("key,value\nc_hat,"));
        assert!(text.contains("\nphi_derivative_bound_4,"));
        assert!(text.contains("\nviolations,0\n"));
    }
}
