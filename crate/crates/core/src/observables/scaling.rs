//! Power-law regressions: path length against system size, and the
//! dimension-to-kappa relation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordinary least squares of `log y` on `log x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Regression standard error of the slope; zero for an exact power law.
    pub stderr: f64,
}

pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Result<ScalingFit> {
    if xs.len() != ys.len() {
        return Err(Error::Degenerate(format!(
            "{} abscissae for {} values",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::Degenerate("a regression needs two points".into()));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(
            "log-log regression needs positive values".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all abscissae coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if lx.len() > 2 {
        let rss: f64 = lx
            .iter()
            .zip(&ly)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(ScalingFit {
        xs: xs.to_vec(),
        ys: ys.to_vec(),
        slope,
        intercept,
        stderr,
    })
}

/// Fractal dimension from mean path lengths measured at three or more sizes.
pub fn fractal_dimension(sizes: &[f64], mean_lengths: &[f64]) -> Result<ScalingFit> {
    if sizes.len() < 3 {
        return Err(Error::Degenerate(format!(
            "fractal dimension needs at least 3 sizes, got {}",
            sizes.len()
        )));
    }
    log_log_fit(sizes, mean_lengths)
}

/// `kappa = 8 (d - 1)`, for `d` in `[1, 2]`.
pub fn kappa_from_dimension(d: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&d) {
        return Err(Error::Domain(format!("dimension {d} outside [1, 2]")));
    }
    Ok(8.0 * (d - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_space_filling() {
        let sizes = [16.0, 32.0, 64.0, 128.0];
        let fit = fractal_dimension(&sizes, &sizes.map(|s| 3.0 * s)).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12 && fit.stderr < 1e-12);
        let fit = fractal_dimension(&sizes, &sizes.map(|s| 0.5 * s * s)).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 0.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn stderr_matches_textbook_formula() {
        // y = x^1.5 with alternating +-0.01 log jitter on four equally spaced log points
        let xs = [1.0, 2.0, 4.0, 8.0];
        let jitter = [0.01, -0.01, 0.01, -0.01];
        let ys: Vec<f64> = xs
            .iter()
            .zip(&jitter)
            .map(|(x, j): (&f64, &f64)| (1.5 * x.ln() + j).exp())
            .collect();
        let fit = log_log_fit(&xs, &ys).unwrap();
        // by hand: Sxx = 5 ln2^2, Sxy shift = -0.02 ln2 => slope = 1.5 - 0.004 / ln2
        let l2 = 2f64.ln();
        assert!((fit.slope - (1.5 - 0.004 / l2)).abs() < 1e-12);
        let resid: Vec<f64> = (0..4)
            .map(|k| ys[k].ln() - fit.intercept - fit.slope * xs[k].ln())
            .collect();
        let rss: f64 = resid.iter().map(|r| r * r).sum();
        assert!((fit.stderr - (rss / 2.0 / (5.0 * l2 * l2)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn too_few_sizes() {
        assert!(matches!(
            fractal_dimension(&[32.0, 64.0], &[10.0, 20.0]),
            Err(Error::Degenerate(_))
        ));
        assert!(log_log_fit(&[1.0, 1.0], &[2.0, 3.0]).is_err());
        assert!(log_log_fit(&[1.0, 2.0], &[0.0, 3.0]).is_err());
    }

    #[test]
    fn dimension_to_kappa() {
        assert!((kappa_from_dimension(1.75).unwrap() - 6.0).abs() < 1e-15);
        assert_eq!(kappa_from_dimension(1.0).unwrap(), 0.0);
        assert_eq!(kappa_from_dimension(2.0).unwrap(), 8.0);
        assert!(kappa_from_dimension(2.1).is_err());
        assert!(kappa_from_dimension(0.9).is_err());
    }
}
