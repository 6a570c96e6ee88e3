//! Weighted bilinear convolution operators and the five-region splitting of
//! frequency-pair space.
//!
//! On a lattice every difference `ξ - η` is reduced modulo the period, so
//! kernels, region tests and the operators all see the same wrapped
//! coordinate. With that convention the splitting identity
//! `<ξ>^{s0} (v1 * v2)(ξ) = Σ_j T_{F_j}(u2, u1)(ξ)`, `u_j = <·>^{s_j} v_j`,
//! is exact up to rounding once ties between the last two regions are
//! assigned to one side (see [`OmegaParams::exclusive_ties`]).

pub mod ensemble;
pub mod envelope;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::admissibility::WeightTriple;
use crate::error::{Error, Result};
use crate::exponents::to_f64;
use crate::grid::{bracket, convolve, Grid, GridFunction, MAX_DIM};
use crate::norms::JointFunction;

pub use ensemble::{estimate_ratio_sup, EnsembleConfig, EnsembleFamily, RatioMode, RatioReport};
pub use envelope::{
    envelope, envelope_exponent, envelope_study, fit_growth_exponent, slice_norm, EnvelopeStudy,
};

/// `<ξ>^{s0} <ξ-η>^{-s1} <η>^{-s2}`.
pub fn kernel_value(xi: &[f64], eta: &[f64], s: [f64; 3]) -> f64 {
    let diff: Vec<f64> = xi.iter().zip(eta).map(|(a, b)| a - b).collect();
    bracket(xi).powf(s[0]) * bracket(&diff).powf(-s[1]) * bracket(eta).powf(-s[2])
}

pub fn weights_f64(s: &WeightTriple) -> [f64; 3] {
    [to_f64(s.s[0]), to_f64(s.s[1]), to_f64(s.s[2])]
}

/// Region constants: `0 < delta < 1`, `radius >= 4 / delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaParams {
    pub delta: f64,
    pub radius: f64,
    /// Remove the first region from the second so the two are disjoint.
    #[serde(default)]
    pub modified_second: bool,
    /// Give points with `<ξ-η> = <η>` to the fourth region only.
    #[serde(default)]
    pub exclusive_ties: bool,
}

impl Default for OmegaParams {
    fn default() -> Self {
        OmegaParams {
            delta: 0.5,
            radius: 8.0,
            modified_second: false,
            exclusive_ties: false,
        }
    }
}

impl OmegaParams {
    pub fn new(delta: f64, radius: f64) -> Result<Self> {
        let out = OmegaParams {
            delta,
            radius,
            ..Default::default()
        };
        out.validate()?;
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta = {} outside (0, 1)",
                self.delta
            )));
        }
        if !(self.radius >= 4.0 / self.delta) {
            return Err(Error::InvalidParameter(format!(
                "radius = {} below 4/delta",
                self.radius
            )));
        }
        Ok(())
    }

    /// Settings under which the five regions partition every lattice pair.
    pub fn partition(self) -> Self {
        OmegaParams {
            modified_second: true,
            exclusive_ties: true,
            ..self
        }
    }
}

fn region_index(j: u8) -> Result<()> {
    if (1..=5).contains(&j) {
        Ok(())
    } else {
        Err(Error::InvalidIndex {
            index: j as usize,
            range: "regions 1..=5",
        })
    }
}

/// Membership from the three brackets and `|ξ|`.
fn in_region(j: u8, b_xi: f64, b_eta: f64, b_diff: f64, abs_xi: f64, op: &OmegaParams) -> bool {
    let lower = op.delta * b_xi;
    match j {
        1 => b_eta < lower,
        2 => b_diff < lower && !(op.modified_second && b_eta < lower),
        3 => lower <= b_eta.min(b_diff) && abs_xi <= op.radius,
        4 => lower <= b_diff && b_diff <= b_eta && abs_xi > op.radius,
        5 => {
            let upper_ok = if op.exclusive_ties {
                b_eta < b_diff
            } else {
                b_eta <= b_diff
            };
            lower <= b_eta && upper_ok && abs_xi > op.radius
        }
        _ => unreachable!("region index checked by caller"),
    }
}

/// Literal membership of `(ξ, η)` in region `j`.
pub fn omega_indicator(j: u8, xi: &[f64], eta: &[f64], op: &OmegaParams) -> Result<bool> {
    region_index(j)?;
    let diff: Vec<f64> = xi.iter().zip(eta).map(|(a, b)| a - b).collect();
    let abs_xi = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(in_region(j, bracket(xi), bracket(eta), bracket(&diff), abs_xi, op))
}

/// Lattice points `ξ_i`, `η_k` and the wrapped difference `ξ_i - η_k`.
fn lattice_triple(grid: &Grid, xi: usize, eta: usize) -> ([f64; MAX_DIM], [f64; MAX_DIM], [f64; MAX_DIM]) {
    (
        grid.point(xi),
        grid.point(eta),
        grid.point(grid.difference_index(xi, eta)),
    )
}

/// Region membership on the lattice, with wrapped differences.
pub fn lattice_indicator(j: u8, grid: &Grid, xi: usize, eta: usize, op: &OmegaParams) -> Result<bool> {
    region_index(j)?;
    let d = grid.d();
    let (x, e, diff) = lattice_triple(grid, xi, eta);
    let abs_xi = x[..d].iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(in_region(
        j,
        bracket(&x[..d]),
        bracket(&e[..d]),
        bracket(&diff[..d]),
        abs_xi,
        op,
    ))
}

/// Count of lattice pairs lying in no region and in more than one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub uncovered: usize,
    pub multiple: usize,
    pub total: usize,
}

pub fn region_coverage(grid: &Grid, op: &OmegaParams) -> Coverage {
    let mut out = Coverage {
        total: grid.len() * grid.len(),
        ..Default::default()
    };
    for xi in 0..grid.len() {
        for eta in 0..grid.len() {
            let hits = (1..=5)
                .filter(|&j| lattice_indicator(j, grid, xi, eta, op).unwrap_or(false))
                .count();
            match hits {
                0 => out.uncovered += 1,
                1 => {}
                _ => out.multiple += 1,
            }
        }
    }
    out
}

/// Kernel evaluated at lattice pairs `(ξ_i, η_k)`.
pub trait Kernel {
    fn eval(&self, grid: &Grid, xi: usize, eta: usize) -> Complex64;

    /// Rejects lattices the kernel was not sampled on.
    fn check_grid(&self, _grid: &Grid) -> Result<()> {
        Ok(())
    }
}

/// Closed-form weight kernel, optionally cut down to a single region.
#[derive(Clone, Copy, Debug)]
pub struct WeightKernel {
    pub s: [f64; 3],
    pub region: Option<(u8, OmegaParams)>,
}

impl WeightKernel {
    pub fn new(s: &WeightTriple) -> Self {
        WeightKernel {
            s: weights_f64(s),
            region: None,
        }
    }

    pub fn restricted(s: &WeightTriple, j: u8, op: OmegaParams) -> Result<Self> {
        region_index(j)?;
        Ok(WeightKernel {
            s: weights_f64(s),
            region: Some((j, op)),
        })
    }
}

impl Kernel for WeightKernel {
    fn eval(&self, grid: &Grid, xi: usize, eta: usize) -> Complex64 {
        let d = grid.d();
        if let Some((j, op)) = &self.region {
            if !lattice_indicator(*j, grid, xi, eta, op).unwrap_or(false) {
                return Complex64::new(0.0, 0.0);
            }
        }
        let (x, e, diff) = lattice_triple(grid, xi, eta);
        let value = bracket(&x[..d]).powf(self.s[0])
            * bracket(&diff[..d]).powf(-self.s[1])
            * bracket(&e[..d]).powf(-self.s[2]);
        Complex64::new(value, 0.0)
    }
}

impl Kernel for JointFunction {
    fn eval(&self, _grid: &Grid, xi: usize, eta: usize) -> Complex64 {
        self.get(xi, eta)
    }

    fn check_grid(&self, grid: &Grid) -> Result<()> {
        self.first().ensure_same(grid)?;
        self.second().ensure_same(grid)
    }
}

/// Kernel given by a closure over lattice indices.
pub struct FnKernel<F>(pub F);

impl<F: Fn(&Grid, usize, usize) -> Complex64> Kernel for FnKernel<F> {
    fn eval(&self, grid: &Grid, xi: usize, eta: usize) -> Complex64 {
        (self.0)(grid, xi, eta)
    }
}

/// Samples a kernel on `grid × grid`.
pub fn sample_kernel<K: Kernel + ?Sized>(kernel: &K, grid: Grid) -> JointFunction {
    JointFunction::from_indices(grid, grid, |i, k| kernel.eval(&grid, i, k))
}

/// `(ΘF)(ξ, η) = F(ξ, ξ - η)` with the difference wrapped.
pub fn theta_transform(f: &JointFunction) -> Result<JointFunction> {
    let grid = *f.first();
    if !grid.same_as(f.second()) {
        return Err(Error::IncompatibleLattice(format!(
            "{:?} vs {:?}",
            f.first(),
            f.second()
        )));
    }
    Ok(JointFunction::from_indices(grid, grid, |i, k| {
        f.get(i, grid.difference_index(i, k))
    }))
}

fn common_grid(f: &GridFunction, g: &GridFunction) -> Result<Grid> {
    let grid = *f.grid();
    grid.ensure_same(g.grid())?;
    Ok(grid)
}

/// `T_F(f, g)(ξ) = Σ_η F(ξ, η) f(η) g(ξ - η) h^d`.
pub fn t_f_apply<K: Kernel + ?Sized>(kernel: &K, f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    let grid = common_grid(f, g)?;
    kernel.check_grid(&grid)?;
    let w = grid.cell_volume();
    let values = (0..grid.len())
        .map(|xi| {
            let mut acc = Complex64::new(0.0, 0.0);
            for eta in 0..grid.len() {
                let fe = f.values()[eta];
                if fe.norm_sqr() == 0.0 {
                    continue;
                }
                acc += kernel.eval(&grid, xi, eta) * fe * g.values()[grid.difference_index(xi, eta)];
            }
            acc * w
        })
        .collect();
    GridFunction::new(grid, values)
}

/// `T_{ΘF}(f, g)(ξ) = Σ_η F(ξ, η) f(ξ - η) g(η) h^d`.
pub fn t_theta_f_apply<K: Kernel + ?Sized>(
    kernel: &K,
    f: &GridFunction,
    g: &GridFunction,
) -> Result<GridFunction> {
    t_f_apply(kernel, g, f)
}

/// Bilinear pairing `Σ a b h^d`.
pub fn pairing(a: &GridFunction, b: &GridFunction) -> Result<Complex64> {
    let grid = common_grid(a, b)?;
    Ok(a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum::<Complex64>() * grid.cell_volume())
}

/// Both sides of `<T_F(f, g), k> = <T_{F0}(k, g(-·)), f>`, `F0(η, ξ) = F(ξ, η)`.
pub fn duality_sides(
    kernel: &JointFunction,
    f: &GridFunction,
    g: &GridFunction,
    k: &GridFunction,
) -> Result<(Complex64, Complex64)> {
    let lhs = pairing(&t_f_apply(kernel, f, g)?, k)?;
    let rhs = pairing(&t_f_apply(&kernel.transpose(), k, &g.reflect())?, f)?;
    Ok((lhs, rhs))
}

/// The five region terms of the weighted convolution.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// `<ξ>^{s0} (v1 * v2)(ξ)`.
    pub weighted_convolution: GridFunction,
    /// `T_{F_j}(u2, u1)` for `j = 1..=5`.
    pub terms: Vec<GridFunction>,
}

impl Decomposition {
    pub fn sum(&self) -> GridFunction {
        let mut out = GridFunction::zeros(*self.weighted_convolution.grid());
        for term in &self.terms {
            for (o, t) in out.values_mut().iter_mut().zip(term.values()) {
                *o += t;
            }
        }
        out
    }

    /// `max |lhs - Σ terms| / max |lhs|`.
    pub fn relative_error(&self) -> f64 {
        let sum = self.sum();
        let scale = self.weighted_convolution.max_abs();
        self.weighted_convolution
            .values()
            .iter()
            .zip(sum.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale
    }
}

pub fn decompose(
    v1: &GridFunction,
    v2: &GridFunction,
    s: &WeightTriple,
    op: &OmegaParams,
) -> Result<Decomposition> {
    op.validate()?;
    let sw = weights_f64(s);
    let u1 = v1.weighted(|x| bracket(x).powf(sw[1]));
    let u2 = v2.weighted(|x| bracket(x).powf(sw[2]));
    let weighted_convolution = convolve(v1, v2)?.weighted(|x| bracket(x).powf(sw[0]));
    let terms = (1..=5)
        .map(|j| t_f_apply(&WeightKernel::restricted(s, j, *op)?, &u2, &u1))
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition {
        weighted_convolution,
        terms,
    })
}
