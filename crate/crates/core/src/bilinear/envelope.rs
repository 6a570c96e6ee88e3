//! Slice norms of region-restricted weight kernels and their power-law
//! envelopes.
//!
//! For regions 1 and 2 the slice fixes `ξ` and integrates over `η`; for
//! regions 3 to 5 it fixes `η` and integrates over `ξ`. In one dimension the
//! free variable is integrated with 16-point Gauss–Legendre panels whose
//! edges include every indicator boundary (solved in closed form, with a
//! sampling and bisection pass as a fallback) and a geometric mesh around
//! `0` and the fixed point. Higher
//! dimensions fall back to a midpoint tensor rule.

use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{kernel_value, omega_indicator, weights_f64, OmegaParams};
use crate::admissibility::WeightTriple;
use crate::error::{Error, Result};
use crate::exponents::{to_f64, Exponent, Rational};
use crate::grid::bracket;

const GL_ORDER: usize = 16;

/// Nodes and weights of the Gauss–Legendre rule on `[-1, 1]`.
fn gauss_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn check_region(j: u8) -> Result<()> {
    if (1..=5).contains(&j) {
        Ok(())
    } else {
        Err(Error::InvalidIndex {
            index: j as usize,
            range: "regions 1..=5",
        })
    }
}

/// `χ_{Ω_j} F` as a function of the free variable.
fn slice_integrand(j: u8, s: [f64; 3], op: &OmegaParams, fixed: &[f64], free: &[f64]) -> f64 {
    let (xi, eta) = if j <= 2 { (fixed, free) } else { (free, fixed) };
    if omega_indicator(j, xi, eta, op).unwrap_or(false) {
        kernel_value(xi, eta, s)
    } else {
        0.0
    }
}

/// Radius (about the origin) containing the support of the slice.
fn support_radius(j: u8, op: &OmegaParams, fixed: &[f64]) -> f64 {
    let b = bracket(fixed);
    let abs = fixed.iter().map(|v| v * v).sum::<f64>().sqrt();
    let r = match j {
        1 => op.delta * b,
        2 => abs + op.delta * b,
        3 => op.radius,
        4 => 2.0 * abs + 1.0,
        _ => b / op.delta,
    };
    r * 1.01 + 1.0
}

struct Accumulator {
    p: Exponent,
    sum: f64,
    max: f64,
}

impl Accumulator {
    fn new(p: Exponent) -> Self {
        Accumulator { p, sum: 0.0, max: 0.0 }
    }

    fn add(&mut self, value: f64, weight: f64) {
        let v = value.abs();
        self.max = self.max.max(v);
        if !self.p.is_infinite() && v > 0.0 {
            self.sum += weight * v.powf(self.p.value());
        }
    }

    fn finish(&self) -> f64 {
        if self.p.is_infinite() {
            self.max
        } else {
            self.sum.powf(1.0 / self.p.value())
        }
    }
}

/// Roots of every bracket comparison that can bound a region in one
/// dimension, as positions of the free variable.
fn boundary_points_1d(j: u8, op: &OmegaParams, c: f64) -> Vec<f64> {
    let delta = op.delta;
    let bc = bracket(&[c]);
    let mut out = Vec::new();
    let push_abs = |centre: f64, r2: f64, out: &mut Vec<f64>| {
        if r2 >= 0.0 {
            let r = r2.sqrt();
            out.extend([centre - r, centre + r]);
        }
    };
    if j <= 2 {
        // free variable is η with ξ = c
        let r2 = delta * delta * bc * bc - 1.0;
        push_abs(0.0, r2, &mut out);
        push_abs(c, r2, &mut out);
        out.push(c / 2.0);
    } else {
        // free variable is ξ with η = c
        push_abs(0.0, bc * bc / (delta * delta) - 1.0, &mut out);
        let a = 1.0 - delta * delta;
        let disc = c * c - a * (c * c + a);
        if disc >= 0.0 {
            out.extend([(c - disc.sqrt()) / a, (c + disc.sqrt()) / a]);
        }
        out.extend([0.0, 2.0 * c, -op.radius, op.radius]);
    }
    out
}

fn slice_norm_1d(j: u8, s: [f64; 3], op: &OmegaParams, fixed: f64, p: Exponent) -> f64 {
    let integrand = |t: f64| slice_integrand(j, s, op, &[fixed], &[t]);
    let inside = |t: f64| integrand(t) != 0.0;
    let bound = support_radius(j, op, &[fixed]);

    let mut edges = vec![-bound, bound];
    let top = (2.0 * bound).log2().ceil() as i32;
    for centre in [0.0, fixed] {
        for k in -3..=top {
            let step = 2f64.powi(k);
            edges.extend([centre - step, centre + step]);
        }
        edges.push(centre);
    }
    edges.extend(boundary_points_1d(j, op, fixed));
    edges.retain(|e| e.abs() <= bound);
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let mut panels = Vec::with_capacity(edges.len() * 2);
    const SAMPLES: usize = 32;
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        panels.push(a);
        let mut prev = inside(a);
        for m in 1..=SAMPLES {
            let t = a + (b - a) * m as f64 / SAMPLES as f64;
            let now = inside(t);
            if now != prev {
                let (mut lo, mut hi) = (a + (b - a) * (m - 1) as f64 / SAMPLES as f64, t);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if inside(mid) == prev {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                panels.push(0.5 * (lo + hi));
                prev = now;
            }
        }
    }
    panels.push(*edges.last().unwrap());

    let (nodes, weights) = gauss_legendre();
    let mut acc = Accumulator::new(p);
    for pair in panels.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        if half <= 0.0 {
            continue;
        }
        let mid = 0.5 * (a + b);
        for (x, w) in nodes.iter().zip(weights) {
            acc.add(integrand(mid + half * x), w * half);
        }
    }
    acc.finish()
}

fn slice_norm_tensor(j: u8, s: [f64; 3], op: &OmegaParams, fixed: &[f64], p: Exponent) -> f64 {
    let d = fixed.len();
    let cells: usize = if d == 2 { 512 } else { 96 };
    let bound = support_radius(j, op, fixed);
    let step = 2.0 * bound / cells as f64;
    let weight = step.powi(d as i32);
    let mut acc = Accumulator::new(p);
    let total = cells.pow(d as u32);
    let mut point = vec![0.0; d];
    for idx in 0..total {
        let mut rest = idx;
        for slot in point.iter_mut() {
            *slot = -bound + step * ((rest % cells) as f64 + 0.5);
            rest /= cells;
        }
        acc.add(slice_integrand(j, s, op, fixed, &point), weight);
    }
    acc.finish()
}

/// `L^p` norm of `χ_{Ω_j} F` over the free variable with the other fixed.
pub fn slice_norm(
    j: u8,
    s: &WeightTriple,
    op: &OmegaParams,
    fixed: &[f64],
    p: Exponent,
) -> Result<f64> {
    check_region(j)?;
    op.validate()?;
    if fixed.len() != s.d as usize {
        return Err(Error::InvalidParameter(format!(
            "fixed point has {} coordinates, expected {}",
            fixed.len(),
            s.d
        )));
    }
    let sw = weights_f64(s);
    Ok(if s.d == 1 {
        slice_norm_1d(j, sw, op, fixed[0], p)
    } else {
        slice_norm_tensor(j, sw, op, fixed, p)
    })
}

fn d_over_p(s: &WeightTriple, p: Exponent) -> Rational {
    s.d_rational() * p.recip()
}

/// Power-law envelope of the slice norm at a fixed variable with bracket
/// `b`, including the logarithmic borderline cases.
pub fn envelope(j: u8, s: &WeightTriple, p: Exponent, b: f64) -> Result<f64> {
    check_region(j)?;
    let [s0, s1, s2] = s.s;
    let dp = d_over_p(s, p);
    let f = to_f64;
    let log_factor = || (1.0 + b.ln()).powf(p.recip_f64());
    Ok(match j {
        1 | 2 => {
            let (lead, other) = if j == 1 { (s1, s2) } else { (s2, s1) };
            let base = b.powf(f(s0 - lead));
            if other == dp {
                base * log_factor()
            } else {
                base * (1.0 + b.powf(f(dp - other)))
            }
        }
        3 => b.powf(f(-s1 - s2)),
        _ => {
            let threshold = -dp;
            if s0 > threshold {
                b.powf(f(s0 - s1 - s2 + dp))
            } else if s0 == threshold {
                b.powf(f(-s1 - s2)) * log_factor()
            } else {
                b.powf(f(-s1 - s2))
            }
        }
    })
}

/// Exponent of the envelope's leading power (logarithms dropped).
pub fn envelope_exponent(j: u8, s: &WeightTriple, p: Exponent) -> Result<Rational> {
    check_region(j)?;
    let [s0, s1, s2] = s.s;
    let dp = d_over_p(s, p);
    let positive = |v: Rational| if v.is_positive() { v } else { Rational::zero() };
    Ok(match j {
        1 => s0 - s1 + positive(dp - s2),
        2 => s0 - s2 + positive(dp - s1),
        3 => -s1 - s2,
        _ => {
            if s0 > -dp {
                s0 - s1 - s2 + dp
            } else {
                -s1 - s2
            }
        }
    })
}

/// Fixed point on the first axis with bracket `2^level`.
fn dyadic_point(level: u32, d: u32) -> Vec<f64> {
    let mut point = vec![0.0; d as usize];
    point[0] = (4f64.powi(level as i32) - 1.0).sqrt();
    point
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

/// Least-squares slope of `log slice_norm` against `log <·>` over the
/// fixed-variable brackets `2^k`, `k` in `levels`.
pub fn fit_growth_exponent(
    j: u8,
    s: &WeightTriple,
    op: &OmegaParams,
    p: Exponent,
    levels: std::ops::RangeInclusive<u32>,
) -> Result<f64> {
    let levels: Vec<u32> = levels.collect();
    if levels.len() < 4 {
        return Err(Error::DegenerateRange(format!(
            "{} dyadic points, need at least 4",
            levels.len()
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &k in &levels {
        let value = slice_norm(j, s, op, &dyadic_point(k, s.d), p)?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::DegenerateRange(format!(
                "slice norm {value} at bracket 2^{k}"
            )));
        }
        xs.push(k as f64 * std::f64::consts::LN_2);
        ys.push(value.ln());
    }
    Ok(least_squares_slope(&xs, &ys))
}

#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeRow {
    pub level: u32,
    pub bracket: f64,
    pub slice: f64,
    pub envelope: f64,
}

/// Slice norms against the envelope over dyadic brackets `2^0 ..= 2^max`.
#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeStudy {
    pub region: u8,
    pub rows: Vec<EnvelopeRow>,
    pub fitted_slope: f64,
    pub predicted_slope: f64,
    /// `max slice / envelope` over all rows.
    pub constant: f64,
    /// Relative change of that maximum when the last row is added.
    pub drift: f64,
}

impl EnvelopeStudy {
    pub fn slope_error(&self) -> f64 {
        (self.fitted_slope - self.predicted_slope).abs()
    }
}

pub fn envelope_study(
    j: u8,
    s: &WeightTriple,
    op: &OmegaParams,
    p: Exponent,
    max_level: u32,
    fit_from: u32,
) -> Result<EnvelopeStudy> {
    if fit_from + 3 > max_level {
        return Err(Error::DegenerateRange(format!(
            "fit range {fit_from}..={max_level}"
        )));
    }
    let mut rows = Vec::new();
    for k in 0..=max_level {
        let point = dyadic_point(k, s.d);
        let b = bracket(&point);
        rows.push(EnvelopeRow {
            level: k,
            bracket: b,
            slice: slice_norm(j, s, op, &point, p)?,
            envelope: envelope(j, s, p, b)?,
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.level >= fit_from)
        .map(|r| (r.bracket.ln(), r.slice.ln()))
        .unzip();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::DegenerateRange("vanishing slice in fit range".into()));
    }
    let ratio = |r: &EnvelopeRow| r.slice / r.envelope;
    let constant = rows.iter().map(ratio).fold(0.0, f64::max);
    let previous = rows[..rows.len() - 1].iter().map(ratio).fold(0.0, f64::max);
    Ok(EnvelopeStudy {
        region: j,
        fitted_slope: least_squares_slope(&xs, &ys),
        predicted_slope: to_f64(envelope_exponent(j, s, p)?),
        constant,
        drift: (constant - previous) / constant,
        rows,
    })
}
