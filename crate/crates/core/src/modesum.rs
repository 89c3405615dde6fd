//! Eigenfunction expansions of the flux. A mode contributes
//! Q_j = (int phi_j)^2 / (lambda_j int phi_j^2) per unit pressure gradient;
//! steady, starting and oscillatory flux are all sums over these weights.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mode {
    pub lambda: f64,
    /// Flux weight Q_j per unit pressure gradient.
    pub weight: f64,
}

/// A truncated sum together with a power-law estimate of the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSum {
    pub value: f64,
    pub tail_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxSeries {
    /// Ascending in lambda.
    pub modes: Vec<Mode>,
    pub dp: f64,
    /// Closed-form steady flux (already multiplied by dp), when one exists.
    pub steady_closed_form: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransientCurve {
    pub times: Vec<f64>,
    pub flux: Vec<f64>,
    pub steady: f64,
    /// True when no closed form was available and the steady value is the
    /// mode sum itself, which makes Q(0) = 0 by construction.
    pub steady_from_sum: bool,
}

impl FluxSeries {
    pub fn new(mut modes: Vec<Mode>, dp: f64, steady_closed_form: Option<f64>) -> Result<Self> {
        if modes.iter().any(|m| !(m.lambda > 0.0 && m.lambda.is_finite()) || !(m.weight >= 0.0)) {
            return Err(Error::Domain("modes need positive eigenvalues and non-negative weights".into()));
        }
        modes.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
        Ok(FluxSeries { modes, dp, steady_closed_form })
    }

    /// dp * sum Q_j.
    pub fn q_steady_sum(&self) -> SeriesSum {
        let value = self.dp * kahan(self.modes.iter().map(|m| m.weight));
        let pairs: Vec<(f64, f64)> = self.modes.iter().map(|m| (m.lambda, m.weight)).collect();
        SeriesSum { value, tail_estimate: tail_fit(&pairs).map(|t| t * self.dp) }
    }

    pub fn steady(&self) -> (f64, bool) {
        match self.steady_closed_form {
            Some(q) => (q, false),
            None => (self.q_steady_sum().value, true),
        }
    }

    /// Q(t) = Q_steady - dp sum Q_j exp(-lambda_j t) for flow started from rest at t = 0.
    pub fn q_transient(&self, t: f64) -> f64 {
        let (steady, _) = self.steady();
        steady - self.dp * kahan(self.modes.iter().map(|m| m.weight * (-m.lambda * t).exp()))
    }

    pub fn q_transient_curve(&self, times: &[f64]) -> TransientCurve {
        let (steady, steady_from_sum) = self.steady();
        TransientCurve {
            times: times.to_vec(),
            flux: times.iter().map(|&t| self.q_transient(t)).collect(),
            steady,
            steady_from_sum,
        }
    }

    /// Q(0); zero up to truncation when the mode set is complete.
    pub fn initial_residual(&self) -> f64 {
        self.q_transient(0.0)
    }

    /// Complex flux amplitude for the pressure gradient dp exp(i omega t).
    pub fn q_periodic(&self, omega: f64) -> Complex64 {
        if omega == 0.0 {
            // bitwise the steady sum, not w lambda / lambda rounded per term
            return Complex64::new(self.q_steady_sum().value, 0.0);
        }
        let mut re = Vec::with_capacity(self.modes.len());
        let mut im = Vec::with_capacity(self.modes.len());
        for m in &self.modes {
            let z = m.weight * m.lambda / Complex64::new(m.lambda, omega);
            re.push(z.re);
            im.push(z.im);
        }
        self.dp * Complex64::new(kahan(re.into_iter()), kahan(im.into_iter()))
    }
}

/// Sum of (int phi_j)^2 / int phi_j^2 over modes; tends to the area for a
/// complete set. Input pairs are (lambda_j, area weight).
pub fn completeness_area(pairs: &[(f64, f64)]) -> SeriesSum {
    SeriesSum { value: kahan(pairs.iter().map(|p| p.1)), tail_estimate: tail_fit(pairs) }
}

pub(crate) fn kahan<I: Iterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for x in it {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Tail estimate from the last ten non-zero weights: fits w ~ C lambda^-p and
/// lambda_j ~ D j^q, then integrates the fitted law beyond the last index.
pub fn tail_fit(pairs: &[(f64, f64)]) -> Option<f64> {
    let nz: Vec<(f64, f64)> = pairs.iter().copied().filter(|p| p.1 > 0.0).collect();
    if nz.len() < 12 {
        return None;
    }
    let n = nz.len();
    let last = &nz[n - 10..];
    let ll: Vec<f64> = last.iter().map(|p| p.0.ln()).collect();
    let lw: Vec<f64> = last.iter().map(|p| p.1.ln()).collect();
    let lj: Vec<f64> = (n - 9..=n).map(|j| (j as f64).ln()).collect();
    let (neg_p, log_c) = least_squares_slope(&ll, &lw);
    let (q, log_d) = least_squares_slope(&lj, &ll);
    let p = -neg_p;
    let e = p * q;
    if !(e > 1.0) || !e.is_finite() {
        return None;
    }
    let start = n as f64 + 0.5;
    Some((log_c - p * log_d).exp() * start.powf(1.0 - e) / (e - 1.0))
}
