//! Weighted Lebesgue, mixed, Fourier–Lebesgue, modulation and Wiener norms
//! of sampled functions.
//!
//! Two-variable samples live in a [`JointFunction`]. In a mixed norm the
//! exponent `p` always belongs to the first variable and `q` to the second;
//! [`MixedOrder`] only decides which integration is performed first.
//! Exponent `∞` is a maximum over lattice points.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::Exponent;
use crate::grid::{bracket, convolve, dft, Grid, GridFunction};

/// Iteration order of a mixed norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixedOrder {
    /// `( ∫ ( ∫ |F(a,b)|^p da )^{q/p} db )^{1/q}`
    InnerFirst,
    /// `( ∫ ( ∫ |F(a,b)|^q db )^{p/q} da )^{1/p}`
    InnerSecond,
}

/// Samples of a function of two variables on `first × second`, stored with
/// the second variable varying fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct JointFunction {
    first: Grid,
    second: Grid,
    values: Vec<Complex64>,
}

impl JointFunction {
    pub fn new(first: Grid, second: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != first.len() * second.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}x{} product lattice",
                values.len(),
                first.len(),
                second.len()
            )));
        }
        Ok(JointFunction {
            first,
            second,
            values,
        })
    }

    pub fn from_fn<F>(first: Grid, second: Grid, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> Complex64,
    {
        let mut values = Vec::with_capacity(first.len() * second.len());
        for i in 0..first.len() {
            let a = first.point(i);
            for j in 0..second.len() {
                values.push(f(&a[..first.d()], &second.point(j)[..second.d()]));
            }
        }
        JointFunction {
            first,
            second,
            values,
        }
    }

    /// Builds `F(a,b) = g(i, j)` from lattice indices.
    pub fn from_indices<F>(first: Grid, second: Grid, f: F) -> Self
    where
        F: Fn(usize, usize) -> Complex64,
    {
        let mut values = Vec::with_capacity(first.len() * second.len());
        for i in 0..first.len() {
            for j in 0..second.len() {
                values.push(f(i, j));
            }
        }
        JointFunction {
            first,
            second,
            values,
        }
    }

    pub fn first(&self) -> &Grid {
        &self.first
    }

    pub fn second(&self) -> &Grid {
        &self.second
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.second.len() + j]
    }

    /// Slice `b ↦ F(a_i, b)`.
    pub fn row(&self, i: usize) -> &[Complex64] {
        let m = self.second.len();
        &self.values[i * m..(i + 1) * m]
    }

    /// `(b, a) ↦ F(a, b)`.
    pub fn transpose(&self) -> JointFunction {
        JointFunction::from_indices(self.second, self.first, |j, i| self.get(i, j))
    }

    /// Pointwise multiplication by `w(a, b)`.
    pub fn weighted<F: Fn(&[f64], &[f64]) -> f64>(&self, w: F) -> JointFunction {
        let (d1, d2) = (self.first.d(), self.second.d());
        JointFunction::from_indices(self.first, self.second, |i, j| {
            self.get(i, j) * w(&self.first.point(i)[..d1], &self.second.point(j)[..d2])
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// `(Σ |v_k|^q w)^{1/q}`, or `max |v_k|` for `q = ∞`.
fn lebesgue<I: Iterator<Item = f64>>(abs_values: I, q: Exponent, weight: f64) -> f64 {
    if q.is_infinite() {
        return abs_values.fold(0.0, f64::max);
    }
    let p = q.value();
    if p == 1.0 {
        return abs_values.sum::<f64>() * weight;
    }
    // scale by the maximum to keep large exponents finite
    let values: Vec<f64> = abs_values.collect();
    let top = values.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let sum: f64 = values.iter().map(|v| (v / top).powf(p)).sum();
    top * (sum * weight).powf(1.0 / p)
}

/// `‖f <·>^s‖_{L^q}` by lattice quadrature.
pub fn lq_weighted(f: &GridFunction, q: Exponent, s: f64) -> f64 {
    let grid = *f.grid();
    lebesgue(
        f.values()
            .iter()
            .enumerate()
            .map(|(i, v)| v.norm() * grid.bracket_at(i).powf(s)),
        q,
        grid.cell_volume(),
    )
}

/// Mixed `L^{p,q}` norm; `p` acts on the first variable, `q` on the second.
pub fn mixed_norm(f: &JointFunction, p: Exponent, q: Exponent, order: MixedOrder) -> f64 {
    let (n1, n2) = (f.first.len(), f.second.len());
    let (w1, w2) = (f.first.cell_volume(), f.second.cell_volume());
    match order {
        MixedOrder::InnerFirst => {
            let inner = (0..n2).map(|j| lebesgue((0..n1).map(|i| f.get(i, j).norm()), p, w1));
            lebesgue(inner.collect::<Vec<_>>().into_iter(), q, w2)
        }
        MixedOrder::InnerSecond => {
            let inner = (0..n1).map(|i| lebesgue(f.row(i).iter().map(|v| v.norm()), q, w2));
            lebesgue(inner.collect::<Vec<_>>().into_iter(), p, w1)
        }
    }
}

/// `‖f^ <·>^s‖_{L^q}`.
pub fn fl_norm(f: &GridFunction, q: Exponent, s: f64) -> f64 {
    lq_weighted(&dft(f), q, s)
}

/// `L^2`-normalised Gaussian `π^{-d/4} e^{-|x|^2/2}`.
pub fn gaussian_window(grid: Grid) -> GridFunction {
    let d = grid.d() as f64;
    GridFunction::sample_real(grid, |x| {
        PI.powf(-d / 4.0) * (-x.iter().map(|v| v * v).sum::<f64>() / 2.0).exp()
    })
}

/// Short-time Fourier transform `V_φ f(x, ξ)`: the unitary transform in
/// `y` of `f(y) conj(φ(y - x))`, with `y - x` taken modulo the period.
/// The first variable is `x` on the grid of `f`, the second `ξ` on its dual.
pub fn stft(f: &GridFunction, window: &GridFunction) -> Result<JointFunction> {
    let grid = *f.grid();
    grid.ensure_same(window.grid())?;
    if window.values().iter().all(|v| v.norm() == 0.0) {
        return Err(Error::ZeroWindow);
    }
    let dual = grid.dual();
    let mut values = Vec::with_capacity(grid.len() * dual.len());
    for x in 0..grid.len() {
        let column: Vec<Complex64> = (0..grid.len())
            .map(|y| f.values()[y] * window.values()[grid.difference_index(y, x)].conj())
            .collect();
        values.extend_from_slice(dft(&GridFunction::new(grid, column)?).values());
    }
    JointFunction::new(grid, dual, values)
}

/// `‖V_φ f <x>^t <ξ>^s‖` with `L^p` in `x` taken first, then `L^q` in `ξ`.
pub fn modulation_norm(
    f: &GridFunction,
    window: &GridFunction,
    p: Exponent,
    q: Exponent,
    s: f64,
    t: f64,
) -> Result<f64> {
    let v = stft(f, window)?.weighted(|x, xi| bracket(x).powf(t) * bracket(xi).powf(s));
    Ok(mixed_norm(&v, p, q, MixedOrder::InnerFirst))
}

/// As [`modulation_norm`] with the integrations interchanged.
pub fn wiener_norm(
    f: &GridFunction,
    window: &GridFunction,
    p: Exponent,
    q: Exponent,
    s: f64,
    t: f64,
) -> Result<f64> {
    let v = stft(f, window)?.weighted(|x, xi| bracket(x).powf(t) * bracket(xi).powf(s));
    Ok(mixed_norm(&v, p, q, MixedOrder::InnerSecond))
}

/// Pointwise comparison of `‖V_φ(f1 f2)(·, ξ)‖_{L^p}` against
/// `(2π)^{-d/2} (v1 * v2)(ξ)` where `v_j(η) = ‖V_{φ_j} f_j(·, η)‖_{L^{p_j}}`,
/// `φ = φ1 φ2` and `1/p = 1/p1 + 1/p2`.
#[derive(Clone, Debug)]
pub struct HolderStep {
    pub target: Exponent,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl HolderStep {
    /// Largest `(lhs - rhs) / max(rhs)` over the lattice; nonpositive when
    /// the inequality holds everywhere.
    pub fn max_relative_excess(&self) -> f64 {
        let scale = self.rhs.iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
        self.lhs
            .iter()
            .zip(&self.rhs)
            .map(|(l, r)| (l - r) / scale)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn column_norms(v: &JointFunction, p: Exponent) -> GridFunction {
    let w = v.first.cell_volume();
    let values = (0..v.second.len())
        .map(|j| {
            Complex64::new(
                lebesgue((0..v.first.len()).map(|i| v.get(i, j).norm()), p, w),
                0.0,
            )
        })
        .collect();
    GridFunction::new(v.second, values).expect("column count matches the dual lattice")
}

pub fn holder_step(
    factors: [&GridFunction; 2],
    windows: [&GridFunction; 2],
    exponents: [Exponent; 2],
) -> Result<HolderStep> {
    let [f1, f2] = factors;
    let [phi1, phi2] = windows;
    let recip = exponents[0].recip() + exponents[1].recip();
    if recip > Exponent::ONE.recip() {
        return Err(Error::Hypothesis(format!(
            "1/p1 + 1/p2 = {recip} exceeds 1"
        )));
    }
    let target = Exponent::from_recip(recip)?;
    let product = crate::grid::pointwise_product(f1, f2)?;
    let window = crate::grid::pointwise_product(phi1, phi2)?;
    let lhs_v = stft(&product, &window)?;
    let lhs = column_norms(&lhs_v, target)
        .values()
        .iter()
        .map(|v| v.re)
        .collect();
    let v1 = column_norms(&stft(f1, phi1)?, exponents[0]);
    let v2 = column_norms(&stft(f2, phi2)?, exponents[1]);
    let factor = (2.0 * PI).powf(-(f1.grid().d() as f64) / 2.0);
    let rhs = convolve(&v1, &v2)?
        .values()
        .iter()
        .map(|v| v.re * factor)
        .collect();
    Ok(HolderStep { target, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{idft, pointwise_product};

    fn ex(q: i64) -> Exponent {
        Exponent::from_int(q).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn box_integral() {
        let h = 0.01;
        let grid = Grid::new(1, 400, h).unwrap();
        let f = GridFunction::sample_real(grid, |x| if x[0].abs() <= 0.5 { 1.0 } else { 0.0 });
        assert!((lq_weighted(&f, Exponent::ONE, 0.0) - 1.0).abs() <= 2.0 * h);
        assert!(rel(lq_weighted(&f, Exponent::INFINITY, 3.0), 1.25f64.powf(1.5)) < 1e-12);
    }

    #[test]
    fn l2_matches_plain_quadrature() {
        let grid = Grid::new(2, 16, 0.3).unwrap();
        let f = GridFunction::sample(grid, |x| Complex64::new(x[0].sin(), x[1] * x[0]));
        let direct = (f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * 0.09).sqrt();
        assert!(rel(lq_weighted(&f, ex(2), 0.0), direct) < 1e-14);
    }

    #[test]
    fn bracket_inverse_square_integral() {
        // ∫ (1 + ξ^2)^{-1} dξ = π
        let grid = Grid::new(1, 4096, 0.05).unwrap();
        let f = GridFunction::sample_real(grid, |x| 1.0 / bracket(x));
        assert!(rel(lq_weighted(&f, ex(2), 0.0), PI.sqrt()) < 0.01);
    }

    #[test]
    fn zero_and_homogeneity() {
        let grid = Grid::new(1, 32, 0.2).unwrap();
        assert_eq!(lq_weighted(&GridFunction::zeros(grid), ex(3), 1.0), 0.0);
        let f = GridFunction::sample_real(grid, |x| (-x[0] * x[0]).exp());
        let g = f.map(|v| v * Complex64::new(0.0, -2.5));
        for q in [Exponent::ONE, ex(3), Exponent::INFINITY] {
            assert!(rel(lq_weighted(&g, q, 0.5), 2.5 * lq_weighted(&f, q, 0.5)) < 1e-14);
        }
    }

    #[test]
    fn mixed_norm_unit_square() {
        let h = 0.02;
        let grid = Grid::new(1, 128, h).unwrap();
        let square = JointFunction::from_fn(grid, grid, |a, b| {
            let inside = (0.0..1.0).contains(&a[0]) && (0.0..1.0).contains(&b[0]);
            Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
        });
        for p in [Exponent::ONE, ex(2), ex(5)] {
            for order in [MixedOrder::InnerFirst, MixedOrder::InnerSecond] {
                assert!((mixed_norm(&square, p, p, order) - 1.0).abs() < 3.0 * h);
            }
        }
    }

    #[test]
    fn mixed_norm_separable_and_transpose() {
        let first = Grid::new(1, 64, 0.25).unwrap();
        let second = Grid::new(1, 32, 0.4).unwrap();
        let a = GridFunction::sample_real(first, |x| (-(x[0] - 1.0).powi(2)).exp());
        let b = GridFunction::sample_real(second, |y| 1.0 / bracket(y).powi(2));
        let f = JointFunction::from_indices(first, second, |i, j| a.values()[i] * b.values()[j]);
        for (p, q) in [(Exponent::ONE, ex(2)), (ex(3), Exponent::INFINITY), (ex(2), ex(2))] {
            let expected = lq_weighted(&a, p, 0.0) * lq_weighted(&b, q, 0.0);
            for order in [MixedOrder::InnerFirst, MixedOrder::InnerSecond] {
                assert!(rel(mixed_norm(&f, p, q, order), expected) < 1e-8);
            }
        }
        // non-separable: the second ordering is the first applied to F^T
        let g = JointFunction::from_fn(first, second, |x, y| {
            Complex64::new((-(x[0] - y[0]).powi(2)).exp() / bracket(y), 0.0)
        });
        let (p, q) = (Exponent::ONE, ex(4));
        let one = mixed_norm(&g, p, q, MixedOrder::InnerFirst);
        let two = mixed_norm(&g.transpose(), q, p, MixedOrder::InnerSecond);
        assert!(rel(one, two) < 1e-12);
        let three = mixed_norm(&g, p, q, MixedOrder::InnerSecond);
        let four = mixed_norm(&g.transpose(), q, p, MixedOrder::InnerFirst);
        assert!(rel(three, four) < 1e-12);
        // Minkowski: integrating the smaller exponent last gives the larger value
        assert!(one <= three * (1.0 + 1e-12));
    }

    #[test]
    fn fl_norm_examples() {
        let grid = Grid::new(1, 256, 0.1).unwrap();
        let f = GridFunction::sample_real(grid, |x| (-x[0] * x[0] / 2.0).exp() * (1.0 + x[0]));
        assert!(rel(fl_norm(&f, ex(2), 0.0), lq_weighted(&f, ex(2), 0.0)) < 1e-10);

        // f^ = e^{-ξ^2/2}, ∫ f^ = (2π)^{1/2}
        let gauss = GridFunction::sample_real(grid, |x| (-x[0] * x[0] / 2.0).exp());
        assert!(rel(fl_norm(&gauss, Exponent::ONE, 0.0), (2.0 * PI).sqrt()) < 1e-6);
    }

    #[test]
    fn fl_norm_weight_shift_on_compact_spectrum() {
        let grid = Grid::new(1, 128, 0.2).unwrap();
        let dual = grid.dual();
        let spectrum = GridFunction::sample_real(dual, |xi| {
            let r = xi[0] * xi[0];
            if r < 3.0 {
                (1.0 / (r - 3.0)).exp()
            } else {
                0.0
            }
        });
        let f = idft(&spectrum);
        for q in [Exponent::ONE, ex(2), Exponent::INFINITY] {
            let ratio = fl_norm(&f, q, 1.5) / fl_norm(&f, q, 0.5);
            assert!((1.0..=2.0).contains(&ratio), "{ratio}");
        }
    }

    fn direct_stft(f: &GridFunction, x: f64, xi: f64) -> Complex64 {
        let grid = f.grid();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..grid.len() {
            let y = grid.point(k)[0];
            let shifted = PI.powf(-0.25) * (-(y - x).powi(2) / 2.0).exp();
            acc += f.values()[k] * shifted * Complex64::new(0.0, -y * xi).exp();
        }
        acc * grid.h() / (2.0 * PI).sqrt()
    }

    #[test]
    fn stft_of_gaussian() {
        let grid = Grid::new(1, 64, 0.25).unwrap();
        let phi = gaussian_window(grid);
        let v = stft(&phi, &phi).unwrap();
        let (mut best, mut at) = (0.0, (0, 0));
        for i in 0..grid.len() {
            for j in 0..grid.len() {
                if v.get(i, j).norm() > best {
                    best = v.get(i, j).norm();
                    at = (i, j);
                }
            }
        }
        assert_eq!(at, (grid.origin_index(), grid.origin_index()));
        assert!(rel(best, (2.0 * PI).powf(-0.5)) < 1e-6);
        let dual = grid.dual();
        for (i, j) in [(32, 32), (30, 35), (36, 27), (20, 40)] {
            let (x, xi) = (grid.point(i)[0], dual.point(j)[0]);
            let direct = direct_stft(&phi, x, xi);
            assert!((v.get(i, j) - direct).norm() < 1e-6, "{i} {j}");
            let closed = (2.0 * PI).powf(-0.5) * (-(x * x + xi * xi) / 4.0).exp();
            assert!((v.get(i, j).norm() - closed).abs() < 1e-6);
        }
    }

    #[test]
    fn moyal_and_zero() {
        for grid in [Grid::new(1, 64, 0.3).unwrap(), Grid::new(2, 12, 0.6).unwrap()] {
            let f = GridFunction::sample(grid, |x| {
                Complex64::new(0.0, 1.3 * x[0]).exp() * (-(x[0] - 0.5).powi(2) - x[1..].iter().map(|v| v * v).sum::<f64>()).exp()
            });
            let phi = gaussian_window(grid).weighted(|x| 1.0 + x[0]);
            let v = stft(&f, &phi).unwrap();
            let total = mixed_norm(&v, ex(2), ex(2), MixedOrder::InnerFirst);
            let expected = lq_weighted(&f, ex(2), 0.0) * lq_weighted(&phi, ex(2), 0.0);
            assert!(rel(total, expected) < 1e-6);
            assert_eq!(stft(&GridFunction::zeros(grid), &phi).unwrap().max_abs(), 0.0);
            assert!(matches!(stft(&f, &GridFunction::zeros(grid)), Err(Error::ZeroWindow)));
        }
    }

    #[test]
    fn modulation_and_wiener_examples() {
        let grid = Grid::new(1, 48, 0.3).unwrap();
        let f = GridFunction::sample_real(grid, |x| (-(x[0] + 1.0).powi(2)).exp());
        let phi = gaussian_window(grid);
        let expected = lq_weighted(&f, ex(2), 0.0) * lq_weighted(&phi, ex(2), 0.0);
        let m = modulation_norm(&f, &phi, ex(2), ex(2), 0.0, 0.0).unwrap();
        let w = wiener_norm(&f, &phi, ex(2), ex(2), 0.0, 0.0).unwrap();
        assert!(rel(m, expected) < 1e-6 && rel(w, expected) < 1e-6);
        for p in [Exponent::ONE, ex(3), Exponent::INFINITY] {
            let m = modulation_norm(&f, &phi, p, p, 0.5, -1.0).unwrap();
            let w = wiener_norm(&f, &phi, p, p, 0.5, -1.0).unwrap();
            assert!(rel(m, w) < 1e-12);
        }
        let zero = GridFunction::zeros(grid);
        assert_eq!(modulation_norm(&zero, &phi, ex(1), ex(3), 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(wiener_norm(&zero, &phi, ex(1), ex(3), 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn stft_product_identity() {
        let grid = Grid::new(1, 64, 0.3).unwrap();
        let f1 = GridFunction::sample(grid, |x| Complex64::new(0.0, 2.0 * x[0]).exp() * (-x[0] * x[0]).exp());
        let f2 = GridFunction::sample_real(grid, |x| (-(x[0] - 0.7).powi(2) / 3.0).exp());
        let phi1 = gaussian_window(grid);
        let phi2 = GridFunction::sample_real(grid, |x| (-x[0] * x[0] / 4.0).exp());
        let lhs = stft(&pointwise_product(&f1, &f2).unwrap(), &pointwise_product(&phi1, &phi2).unwrap()).unwrap();
        let (v1, v2) = (stft(&f1, &phi1).unwrap(), stft(&f2, &phi2).unwrap());
        let dual = grid.dual();
        let scale = lhs.max_abs();
        for x in 0..grid.len() {
            let a = GridFunction::new(dual, v1.row(x).to_vec()).unwrap();
            let b = GridFunction::new(dual, v2.row(x).to_vec()).unwrap();
            let rhs = convolve(&a, &b).unwrap().scale((2.0 * PI).powf(-0.5));
            for (l, r) in lhs.row(x).iter().zip(rhs.values()) {
                assert!((l - r).norm() < 1e-6 * scale);
            }
        }
    }

    #[test]
    fn holder_step_holds_pointwise() {
        let grid = Grid::new(1, 48, 0.35).unwrap();
        let f1 = GridFunction::sample(grid, |x| Complex64::new(0.0, x[0]).exp() * (-x[0] * x[0] / 2.0).exp());
        let f2 = GridFunction::sample_real(grid, |x| 1.0 / bracket(x).powi(2));
        let phi = gaussian_window(grid);
        for (p1, p2) in [(ex(2), ex(2)), (Exponent::ONE, Exponent::INFINITY), (ex(3), ex(4)), (Exponent::INFINITY, Exponent::INFINITY)] {
            let step = holder_step([&f1, &f2], [&phi, &phi], [p1, p2]).unwrap();
            assert!(step.max_relative_excess() <= 1e-8, "{p1} {p2}");
        }
        assert!(holder_step([&f1, &f2], [&phi, &phi], [Exponent::ONE, ex(2)]).is_err());
    }

    #[test]
    fn fl_norm_monotone_in_weight() {
        let grid = Grid::new(1, 64, 0.2).unwrap();
        let spectrum = GridFunction::sample_real(grid.dual(), |xi| (-xi[0].abs()).exp());
        let f = idft(&spectrum);
        let mut last = 0.0;
        for s in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            let v = fl_norm(&f, ex(2), s);
            assert!(v >= last);
            last = v;
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn homogeneous_and_weight_monotone(
                scale in 0.1f64..10.0,
                s in -2.0f64..2.0,
                ds in 0.0f64..2.0,
                k in 1i64..6,
            ) {
                let grid = Grid::new(1, 32, 0.3).unwrap();
                let f = GridFunction::sample_real(grid, |x| (-x[0] * x[0]).exp() + 0.1 * x[0].cos());
                let q = Exponent::from_int(k).unwrap();
                let base = lq_weighted(&f, q, s);
                prop_assert!((lq_weighted(&f.scale(scale), q, s) - scale * base).abs() <= 1e-12 * scale * base);
                prop_assert!(lq_weighted(&f, q, s + ds) >= base * (1.0 - 1e-14));
                let fl = fl_norm(&f, q, s);
                prop_assert!((fl_norm(&f.scale(scale), q, s) - scale * fl).abs() <= 1e-10 * scale * fl);
            }
        }
    }
}
