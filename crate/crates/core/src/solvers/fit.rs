//! Least-squares fit of the asymptotic slope of `log ‖y^k − y*‖`.

use super::IterateTrace;
use crate::error::{Error, Result};

/// Errors below this fraction of the largest recorded error are treated as
/// limited by the accuracy of the reference point.
pub const RELATIVE_FLOOR: f64 = 1e-12;

/// Half-window slopes must agree to this relative tolerance.
pub const SLOPE_STABILITY: f64 = 0.1;

/// Looser agreement accepted for the full window when no trailing window
/// meets [`SLOPE_STABILITY`].
pub const LOOSE_STABILITY: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    /// Per-iteration rate `e^{slope}`.
    pub rate: f64,
    /// Slope of `log err` per iteration.
    pub slope: f64,
    /// First and last iteration index of the fitted window.
    pub k_start: usize,
    pub k_end: usize,
    pub points: usize,
    /// RMS of the log-linear residual.
    pub residual: f64,
}

/// Slope of the least-squares line through `(t, v)` and its RMS residual.
pub(crate) fn line_fit(t: &[f64], v: &[f64]) -> (f64, f64) {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let vm = v.iter().sum::<f64>() / n;
    let (mut stt, mut stv) = (0.0, 0.0);
    for (a, b) in t.iter().zip(v) {
        stt += (a - tm) * (a - tm);
        stv += (a - tm) * (b - vm);
    }
    let slope = if stt > 0.0 { stv / stt } else { 0.0 };
    let rss: f64 = t
        .iter()
        .zip(v)
        .map(|(a, b)| {
            let r = b - vm - slope * (a - tm);
            r * r
        })
        .sum();
    (slope, (rss / n).sqrt())
}

/// Relative disagreement of the slopes fitted to the two halves.
fn half_disagreement(t: &[f64], v: &[f64]) -> f64 {
    let h = t.len() / 2;
    if h < 2 {
        return 0.0;
    }
    let (s1, _) = line_fit(&t[..h], &v[..h]);
    let (s2, _) = line_fit(&t[t.len() - h..], &v[v.len() - h..]);
    let scale = s1.abs().max(s2.abs());
    // exact or near-exact geometric tails have identical half slopes
    if scale < 1e-14 {
        0.0
    } else {
        (s1 - s2).abs() / scale
    }
}

/// Shortest window tried when the trailing window is not yet linear.
const MIN_WINDOW: usize = 8;

fn slope_fit(t: &[f64], start: usize, end: usize, fit: (f64, f64)) -> SlopeFit {
    let (slope, residual) = fit;
    SlopeFit {
        rate: slope.exp(),
        slope,
        k_start: t[start] as usize,
        k_end: t[end - 1] as usize,
        points: end - start,
        residual,
    }
}

/// Fits `log err` against the iteration index over the trailing `window`
/// usable points. `window = 0` uses a quarter of the usable points.
///
/// When the two halves of the window disagree, shorter windows ending at
/// the last usable point are tried (slow modes and near-defective
/// eigenvalues bend the curve until late). If none settles, the full
/// window is accepted under [`LOOSE_STABILITY`]. The window is never moved
/// back towards the transient, whose plateau would look perfectly linear.
pub fn fit_series(ks: &[usize], errs: &[f64], floor: f64, window: usize) -> Result<SlopeFit> {
    let peak = errs.iter().copied().filter(|e| e.is_finite()).fold(0.0, f64::max);
    let floor = floor.max(RELATIVE_FLOOR * peak);
    // usable points: the prefix before the error first drops under the floor
    let mut t = Vec::new();
    let mut v = Vec::new();
    for (&k, &e) in ks.iter().zip(errs) {
        if !(e.is_finite() && e > floor) {
            break;
        }
        t.push(k as f64);
        v.push(e.ln());
    }
    if t.len() < 3 {
        return Err(Error::InsufficientLinearRegime { usable: t.len() });
    }
    let window = if window == 0 { t.len() / 4 } else { window };
    let window = window.clamp(3, t.len());
    let end = t.len();
    let mut w = window;
    loop {
        if half_disagreement(&t[end - w..], &v[end - w..]) <= SLOPE_STABILITY {
            return Ok(slope_fit(&t, end - w, end, line_fit(&t[end - w..], &v[end - w..])));
        }
        if w / 2 < MIN_WINDOW {
            break;
        }
        w /= 2;
    }
    // a slowly beating or near-defective tail never settles within double
    // precision; its full trailing window is still the best estimate
    let start = end - window;
    if half_disagreement(&t[start..], &v[start..]) <= LOOSE_STABILITY {
        return Ok(slope_fit(&t, start, end, line_fit(&t[start..], &v[start..])));
    }
    Err(Error::TransientOnly)
}

/// Fit of the trace's `err_y` series.
pub fn fit_tail(trace: &IterateTrace, window: usize) -> Result<SlopeFit> {
    if trace.err_y.is_empty() {
        return Err(Error::InsufficientLinearRegime { usable: 0 });
    }
    let mut floor = trace.noise_floor();
    if trace.converged_at.is_some() {
        // a converged run's last error is the disagreement between the run
        // and its reference; errors near it say nothing about the rate
        floor = floor.max(10.0 * trace.err_y.last().copied().unwrap_or(0.0));
    }
    fit_series(&trace.ks, &trace.err_y, floor, window)
}

/// Per-iteration asymptotic rate `e^{slope}` of `‖y^k − y_ref‖`.
pub fn fit_asymptotic_slope(trace: &IterateTrace, window: usize) -> Result<f64> {
    fit_tail(trace, window).map(|f| f.rate)
}
