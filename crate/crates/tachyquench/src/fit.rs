//! Least-squares helpers for slope extraction.

use crate::error::{Error, Result};

/// Slope of the ordinary least-squares line through (xs, ys).
pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::FitWindowTooSmall(xs.len().min(ys.len())));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::FitWindowTooSmall(1));
    }
    Ok(sxy / sxx)
}
