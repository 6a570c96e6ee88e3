//! Uniform origin-centred lattices in `R^d` and complex samples on them.
//!
//! A [`Grid`] with `n` points per axis and spacing `h` carries the points
//! `x_k = h (k - n/2)`, `k = 0..n`, on every axis; values are stored
//! row-major with axis 0 varying slowest. The discrete Fourier transform
//! realises the unitary convention
//!
//! ```text
//! f^(ξ) = (2π)^{-d/2} ∫ f(x) e^{-i<x,ξ>} dx
//! ```
//!
//! by the quadrature sum on the grid, landing on the dual lattice with
//! spacing `2π / (n h)`. With this scaling the discrete identities
//! `dft(f * g) = (2π)^{d/2} dft(f) dft(g)` and
//! `dft(f g) = (2π)^{-d/2} dft(f) * dft(g)` hold exactly for the
//! quadrature-weighted circular convolution.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 3;

/// `<x> = (1 + |x|^2)^{1/2}`.
pub fn bracket(x: &[f64]) -> f64 {
    (1.0 + x.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    d: usize,
    n: usize,
    h: f64,
}

impl Grid {
    pub fn new(d: usize, n: usize, h: f64) -> Result<Self> {
        if d == 0 || d > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "dimension {d} outside 1..={MAX_DIM}"
            )));
        }
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "points per axis must be even and at least 2, got {n}"
            )));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidParameter(format!("spacing {h} must be positive")));
        }
        Ok(Grid { d, n, h })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.d as i32)
    }

    /// Lattice of the Fourier variable, spacing `2π/(n h)`.
    pub fn dual(&self) -> Grid {
        Grid {
            d: self.d,
            n: self.n,
            h: 2.0 * PI / (self.n as f64 * self.h),
        }
    }

    /// Largest coordinate magnitude reached along an axis (`n h / 2`).
    pub fn half_width(&self) -> f64 {
        self.h * (self.n / 2) as f64
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self.d == other.d && self.n == other.n && (self.h - other.h).abs() <= 1e-12 * self.h
    }

    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }

    pub fn coord_1d(&self, k: usize) -> f64 {
        self.h * (k as f64 - (self.n / 2) as f64)
    }

    pub fn multi_index(&self, mut idx: usize) -> [usize; MAX_DIM] {
        let mut out = [0; MAX_DIM];
        for axis in (0..self.d).rev() {
            out[axis] = idx % self.n;
            idx /= self.n;
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi[..self.d].iter().fold(0, |acc, &k| acc * self.n + k)
    }

    /// Coordinates of lattice point `idx`; unused trailing slots are zero.
    pub fn point(&self, idx: usize) -> [f64; MAX_DIM] {
        let multi = self.multi_index(idx);
        let mut out = [0.0; MAX_DIM];
        for axis in 0..self.d {
            out[axis] = self.coord_1d(multi[axis]);
        }
        out
    }

    pub fn bracket_at(&self, idx: usize) -> f64 {
        bracket(&self.point(idx)[..self.d])
    }

    /// Index of the lattice point `x_a - x_b`, reduced modulo the period.
    pub fn difference_index(&self, a: usize, b: usize) -> usize {
        let (ma, mb) = (self.multi_index(a), self.multi_index(b));
        let c = self.n / 2;
        let mut out = [0; MAX_DIM];
        for axis in 0..self.d {
            out[axis] = (ma[axis] + self.n + c - mb[axis]) % self.n;
        }
        self.flat_index(&out)
    }

    /// Index of `-x_a`, reduced modulo the period.
    pub fn negation_index(&self, a: usize) -> usize {
        let m = self.multi_index(a);
        let mut out = [0; MAX_DIM];
        for axis in 0..self.d {
            out[axis] = (self.n - m[axis]) % self.n;
        }
        self.flat_index(&out)
    }

    /// Index of the origin.
    pub fn origin_index(&self) -> usize {
        self.flat_index(&[self.n / 2; MAX_DIM])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        GridFunction {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Evaluates `f` at every lattice point.
    pub fn sample<F>(grid: Grid, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let values = (0..grid.len())
            .map(|i| f(&grid.point(i)[..grid.d]))
            .collect();
        GridFunction { grid, values }
    }

    pub fn sample_real<F>(grid: Grid, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64,
    {
        Self::sample(grid, |x| Complex64::new(f(x), 0.0))
    }

    /// `δ/h^d` at the origin: the identity for [`convolve`].
    pub fn delta(grid: Grid) -> Self {
        let mut out = Self::zeros(grid);
        out.values[grid.origin_index()] = Complex64::new(1.0 / grid.cell_volume(), 0.0);
        out
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Multiplies each value by `w(x)` evaluated at its lattice point.
    pub fn weighted<F: Fn(&[f64]) -> f64>(&self, w: F) -> Self {
        let grid = self.grid;
        GridFunction {
            grid,
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, &v)| v * w(&grid.point(i)[..grid.d]))
                .collect(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|v| v * factor)
    }

    /// `f(-x)`.
    pub fn reflect(&self) -> Self {
        let values = (0..self.grid.len())
            .map(|i| self.values[self.grid.negation_index(i)])
            .collect();
        GridFunction {
            grid: self.grid,
            values,
        }
    }

    /// Quadrature approximation of `∫ f`.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.grid.cell_volume()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Writes `index,re,im` rows (row-major lattice order) with a header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "index,re,im")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{i},{:e},{:e}", v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(grid: Grid, input: R) -> Result<Self> {
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        let mut seen = vec![false; grid.len()];
        for (line_no, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (line_no == 0 && line.starts_with("index")) {
                continue;
            }
            let bad = || Error::Parse {
                input: line.to_string(),
                reason: "expected `index,re,im`".into(),
            };
            let mut parts = line.split(',');
            let idx: usize = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            let re: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            let im: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            if idx >= grid.len() {
                return Err(Error::InvalidIndex {
                    index: idx,
                    range: "grid",
                });
            }
            values[idx] = Complex64::new(re, im);
            seen[idx] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::GridMismatch("csv does not cover every lattice point".into()));
        }
        GridFunction::new(grid, values)
    }

    /// Little-endian binary: `u32 d`, `u32 n`, `f64 h`, then `n^d` pairs of
    /// `f64` `(re, im)` in row-major lattice order.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 16 * self.values.len());
        out.extend_from_slice(&(self.grid.d as u32).to_le_bytes());
        out.extend_from_slice(&(self.grid.n as u32).to_le_bytes());
        out.extend_from_slice(&self.grid.h.to_le_bytes());
        for v in &self.values {
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let short = || Error::Parse {
            input: format!("{} bytes", bytes.len()),
            reason: "truncated grid function".into(),
        };
        let u32_at = |o: usize| -> Result<u32> {
            Ok(u32::from_le_bytes(bytes.get(o..o + 4).ok_or_else(short)?.try_into().unwrap()))
        };
        let f64_at = |o: usize| -> Result<f64> {
            Ok(f64::from_le_bytes(bytes.get(o..o + 8).ok_or_else(short)?.try_into().unwrap()))
        };
        let grid = Grid::new(u32_at(0)? as usize, u32_at(4)? as usize, f64_at(8)?)?;
        if bytes.len() != 16 + 16 * grid.len() {
            return Err(short());
        }
        let values = (0..grid.len())
            .map(|i| Ok(Complex64::new(f64_at(16 + 16 * i)?, f64_at(24 + 16 * i)?)))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(grid, values)
    }
}

fn transform(f: &GridFunction, inverse: bool) -> GridFunction {
    let grid = f.grid;
    let n = grid.n;
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let parity = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let centre_sign = parity(n / 2);
    let scale = grid.h / (2.0 * PI).sqrt() * centre_sign;

    let mut values = f.values.clone();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..grid.d {
        let stride = n.pow((grid.d - 1 - axis) as u32);
        for start in 0..grid.len() {
            // first element of each line along `axis`
            if !(start / stride).is_multiple_of(n) {
                continue;
            }
            for (k, slot) in line.iter_mut().enumerate() {
                *slot = values[start + k * stride] * parity(k);
            }
            fft.process(&mut line);
            for (k, v) in line.iter().enumerate() {
                values[start + k * stride] = v * (parity(k) * scale);
            }
        }
    }
    GridFunction {
        grid: grid.dual(),
        values,
    }
}

/// Unitary Fourier transform onto the dual lattice.
pub fn dft(f: &GridFunction) -> GridFunction {
    transform(f, false)
}

/// Inverse of [`dft`]; maps samples on a frequency lattice back to its dual.
pub fn idft(f: &GridFunction) -> GridFunction {
    transform(f, true)
}

/// `h^d`-weighted circular convolution, computed through the transform.
pub fn convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.grid.ensure_same(&g.grid)?;
    let (ff, gg) = (dft(f), dft(g));
    let factor = (2.0 * PI).powf(f.grid.d as f64 / 2.0);
    let product: Vec<Complex64> = ff
        .values
        .iter()
        .zip(&gg.values)
        .map(|(a, b)| a * b * factor)
        .collect();
    let mut out = idft(&GridFunction {
        grid: ff.grid,
        values: product,
    });
    out.grid = f.grid;
    Ok(out)
}

pub fn pointwise_product(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.grid.ensure_same(&g.grid)?;
    Ok(GridFunction {
        grid: f.grid,
        values: f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect(),
    })
}
