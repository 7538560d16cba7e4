//! Discrete power-law fitting: maximum-likelihood exponent for each candidate
//! lower cutoff, with the cutoff chosen to minimize the Kolmogorov-Smirnov
//! distance between the empirical and fitted tails.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::degree::DegreeDistribution;
use crate::error::{Error, Result};

/// Minimum number of observations at or above a candidate cutoff.
pub const MIN_TAIL: u64 = 50;

const ALPHA_LO: f64 = 1.0 + 1e-9;
const ALPHA_HI: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub xmin: u64,
    pub ks_gof: f64,
    pub tail_size: u64,
}

/// Bernoulli numbers B_2, B_4, ... B_14.
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Scaled Hurwitz zeta `S = q^s * zeta(s, q) = sum_{k>=0} (1 + k/q)^-s` and
/// its derivative in `s`, by Euler-Maclaurin summation. The scaling keeps
/// both finite for large `q` and `s`. Requires `s > 1`, `q > 0`.
pub(crate) fn scaled_zeta(s: f64, q: f64) -> (f64, f64) {
    const SHIFT: f64 = 12.0;
    let mut value = 0.0;
    let mut deriv = 0.0;
    let mut a = q;
    while a < SHIFT {
        let l = (a / q).ln();
        let t = (-s * l).exp();
        value += t;
        deriv -= l * t;
        a += 1.0;
    }
    let l = (a / q).ln();
    let r = (-s * l).exp();
    // Tail in units of r = (a/q)^-s, with its own s-derivative alongside.
    let mut tail = a / (s - 1.0) + 0.5;
    let mut tail_deriv = -a / ((s - 1.0) * (s - 1.0));
    // B_2j / (2j)! * s(s+1)...(s+2j-2) * a^(-2j+1)
    let mut rising = s;
    let mut rising_log_deriv = 1.0 / s;
    let mut factorial = 2.0;
    let mut power = 1.0 / a;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let term = b / factorial * rising * power;
        tail += term;
        tail_deriv += term * rising_log_deriv;
        let i = (2 * j + 1) as f64;
        rising *= (s + i) * (s + i + 1.0);
        rising_log_deriv += 1.0 / (s + i) + 1.0 / (s + i + 1.0);
        factorial *= (i + 2.0) * (i + 3.0);
        power /= a * a;
    }
    value += r * tail;
    deriv += r * (tail_deriv - l * tail);
    (value, deriv)
}

/// Hurwitz zeta `sum_{k>=0} (q + k)^-s` and its derivative in `s`.
#[cfg(test)]
fn hurwitz_zeta(s: f64, q: f64) -> (f64, f64) {
    let (v, d) = scaled_zeta(s, q);
    let scale = q.powf(-s);
    (scale * v, scale * (d - q.ln() * v))
}

/// `zeta(s, x) / zeta(s, q)` without under- or overflow.
fn zeta_ratio(s: f64, x: f64, q: f64) -> f64 {
    (-s * (x / q).ln()).exp() * scaled_zeta(s, x).0 / scaled_zeta(s, q).0
}

/// Distinct values with counts, ascending.
struct Tally {
    values: Vec<u64>,
    counts: Vec<u64>,
}

fn mle_alpha(mean_log: f64, xmin: f64) -> f64 {
    // The score is -n * zeta'/zeta - sum(ln x); E_alpha[ln X] = -zeta'/zeta is
    // decreasing in alpha, so bisect on it.
    let expected_log = |alpha: f64| {
        let (z, dz) = scaled_zeta(alpha, xmin);
        xmin.ln() - dz / z
    };
    let (mut lo, mut hi) = (ALPHA_LO, ALPHA_HI);
    if expected_log(hi) >= mean_log {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if expected_log(mid) > mean_log {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn ks_distance(tally: &Tally, start: usize, n: f64, alpha: f64) -> f64 {
    let xmin = tally.values[start] as f64;
    let fitted = |x: u64| 1.0 - zeta_ratio(alpha, x as f64 + 1.0, xmin);
    let mut cumulative = 0u64;
    let mut d: f64 = 0.0;
    for i in start..tally.values.len() {
        let v = tally.values[i];
        // The empirical CDF is flat between observed values while the fitted
        // one keeps rising; check just below the next observed value too.
        if i > start && tally.values[i - 1] + 1 < v {
            let before = cumulative as f64 / n;
            d = d.max((before - fitted(v - 1)).abs());
        }
        cumulative += tally.counts[i];
        let emp = cumulative as f64 / n;
        d = d.max((emp - fitted(v)).abs());
    }
    d
}

fn fit_tally(tally: &Tally) -> Result<PowerLawFit> {
    let len = tally.values.len();
    // Suffix sums of counts and of count * ln(value).
    let mut tail_n = vec![0u64; len + 1];
    let mut tail_log = vec![0f64; len + 1];
    for i in (0..len).rev() {
        tail_n[i] = tail_n[i + 1] + tally.counts[i];
        tail_log[i] = tail_log[i + 1] + tally.counts[i] as f64 * (tally.values[i] as f64).ln();
    }
    let candidates: Vec<usize> = (0..len)
        .filter(|&i| tail_n[i] >= MIN_TAIL && len - i >= 2)
        .collect();
    if candidates.is_empty() {
        return Err(Error::InsufficientData(format!(
            "need at least {MIN_TAIL} observations over two or more distinct values at or above xmin"
        )));
    }
    let fits: Vec<PowerLawFit> = candidates
        .par_iter()
        .map(|&i| {
            let n = tail_n[i] as f64;
            let xmin = tally.values[i] as f64;
            let alpha = mle_alpha(tail_log[i] / n, xmin);
            PowerLawFit {
                alpha,
                xmin: tally.values[i],
                ks_gof: ks_distance(tally, i, n, alpha),
                tail_size: tail_n[i],
            }
        })
        .collect();
    // First minimum in ascending xmin order.
    let best = fits
        .iter()
        .copied()
        .reduce(|best, f| if f.ks_gof < best.ks_gof { f } else { best })
        .expect("at least one candidate");
    Ok(best)
}

/// Fit a discrete power law to the positive degrees in `dist`.
pub fn fit_power_law(dist: &DegreeDistribution) -> Result<PowerLawFit> {
    let (values, counts) = dist
        .support
        .iter()
        .zip(&dist.counts)
        .filter(|(&k, _)| k > 0)
        .map(|(&k, &c)| (k as u64, c))
        .unzip();
    fit_tally(&Tally { values, counts })
}

/// Fit a discrete power law to raw positive integer observations.
pub fn fit_power_law_samples(samples: &[u64]) -> Result<PowerLawFit> {
    let mut sorted: Vec<u64> = samples.iter().copied().filter(|&x| x > 0).collect();
    sorted.sort_unstable();
    let mut tally = Tally {
        values: Vec::new(),
        counts: Vec::new(),
    };
    for x in sorted {
        if tally.values.last() == Some(&x) {
            *tally.counts.last_mut().unwrap() += 1;
        } else {
            tally.values.push(x);
            tally.counts.push(1);
        }
    }
    fit_tally(&tally)
}
