//! Cone-localised Fourier–Lebesgue seminorms and a finite-resolution proxy
//! for the Fourier–Lebesgue wavefront set.
//!
//! A direction is flagged singular for `f` when the weighted `L^q` mass of
//! `f^` over the dyadic annuli `2^k <= <ξ> < 2^{k+1}` inside the cone does not
//! decay: with `a_k` the annulus masses up to the largest annulus inside the
//! band, the cone is singular when `(a_K / a_{K-2})^{1/2} >= 0.95`, unless
//! `a_K` is below `1e-10` times the full weighted norm.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::admissibility::{check_microlocal, Verdict, WeightTriple};
use crate::bilinear::{weights_f64, OmegaParams};
use crate::error::{Error, Result};
use crate::exponents::{format_rational, Exponent, ExponentTriple};
use crate::grid::{bracket, dft, idft, pointwise_product, Grid, GridFunction};
use crate::norms::lq_weighted;

pub const SINGULAR_RATE: f64 = 0.95;
pub const NOISE_FLOOR: f64 = 1e-10;

/// `{ξ ≠ 0 : <ξ/|ξ|, direction> >= cos(half_angle)}`. A half-angle of `π`
/// is the whole space, origin included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cone {
    direction: Vec<f64>,
    half_angle: f64,
}

impl Cone {
    pub fn new(direction: Vec<f64>, half_angle: f64) -> Result<Self> {
        let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
        if direction.is_empty() || !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidParameter("cone direction must be nonzero".into()));
        }
        if !(half_angle > 0.0 && half_angle <= PI) {
            return Err(Error::InvalidParameter(format!(
                "half-angle {half_angle} outside (0, π]"
            )));
        }
        Ok(Cone {
            direction: direction.iter().map(|v| v / norm).collect(),
            half_angle,
        })
    }

    pub fn full(d: usize) -> Self {
        let mut direction = vec![0.0; d];
        direction[0] = 1.0;
        Cone {
            direction,
            half_angle: PI,
        }
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    pub fn is_full(&self) -> bool {
        self.half_angle >= PI
    }

    pub fn contains(&self, xi: &[f64]) -> bool {
        if self.is_full() {
            return true;
        }
        let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return false;
        }
        let cos = xi.iter().zip(&self.direction).map(|(a, b)| a * b).sum::<f64>() / norm;
        cos >= self.half_angle.cos()
    }

    pub fn negated(&self) -> Cone {
        Cone {
            direction: self.direction.iter().map(|v| -v).collect(),
            half_angle: self.half_angle,
        }
    }

    /// Same axis, different opening.
    pub fn with_half_angle(&self, half_angle: f64) -> Result<Cone> {
        Cone::new(self.direction.clone(), half_angle)
    }
}

/// Directions evenly spaced on the circle (`d = 2`) or `±` (`d = 1`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeMesh {
    cones: Vec<Cone>,
}

impl ConeMesh {
    pub fn new(cones: Vec<Cone>) -> Result<Self> {
        if cones.is_empty() {
            return Err(Error::EmptyMesh);
        }
        Ok(ConeMesh { cones })
    }

    /// `d = 1`: the two half-lines; `d = 2`: `count` cones of half-angle
    /// `π / count` centred at angles `2πi / count`, which tile the circle.
    pub fn uniform(d: usize, count: usize) -> Result<Self> {
        match d {
            1 => ConeMesh::new(vec![
                Cone::new(vec![1.0], PI / 4.0)?,
                Cone::new(vec![-1.0], PI / 4.0)?,
            ]),
            2 => {
                if count < 3 {
                    return Err(Error::EmptyMesh);
                }
                let half = PI / count as f64;
                (0..count)
                    .map(|i| {
                        let angle = 2.0 * PI * i as f64 / count as f64;
                        Cone::new(vec![angle.cos(), angle.sin()], half)
                    })
                    .collect::<Result<Vec<_>>>()
                    .and_then(ConeMesh::new)
            }
            _ => Err(Error::InvalidParameter(format!(
                "uniform cone meshes exist for d = 1, 2, not {d}"
            ))),
        }
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Mesh cones whose axes are within one mesh step of cone `i`.
    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        let axis = &self.cones[i];
        let step = 2.0 * axis.half_angle + 1e-9;
        (0..self.cones.len())
            .filter(|&k| k != i)
            .filter(|&k| {
                let cos: f64 = axis
                    .direction
                    .iter()
                    .zip(&self.cones[k].direction)
                    .map(|(a, b)| a * b)
                    .sum();
                cos.clamp(-1.0, 1.0).acos() <= step
            })
            .collect()
    }

    /// Index of the cone with the opposite axis, if present.
    pub fn opposite(&self, i: usize) -> Option<usize> {
        let target = self.cones[i].negated();
        self.cones.iter().position(|c| {
            c.direction
                .iter()
                .zip(&target.direction)
                .all(|(a, b)| (a - b).abs() < 1e-9)
        })
    }
}

/// Weighted `L^q` norm of `χ_Γ g` for a frequency-side sample `g`.
fn cone_norm(spectrum: &GridFunction, cone: &Cone, q: Exponent, s: f64) -> f64 {
    let grid = *spectrum.grid();
    let masked = GridFunction::new(
        grid,
        spectrum
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if cone.contains(&grid.point(i)[..grid.d()]) {
                    v
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect(),
    )
    .expect("mask keeps the lattice");
    lq_weighted(&masked, q, s)
}

/// `‖χ_Γ f^ <·>^s‖_{L^q}`.
pub fn cone_fl_seminorm(f: &GridFunction, cone: &Cone, q: Exponent, s: f64) -> f64 {
    cone_norm(&dft(f), cone, q, s)
}

fn check_k(k: u8) -> Result<()> {
    if k <= 2 {
        Ok(())
    } else {
        Err(Error::InvalidIndex {
            index: k as usize,
            range: "0..=2",
        })
    }
}

/// Pieces of frequency-pair space for `J_k`, from the three brackets: the
/// first region `<η> < δ<ξ>`, the second `<ξ-η> < δ<ξ>` with the first
/// removed, and the rest.
fn in_piece(k: u8, b_xi: f64, b_eta: f64, b_diff: f64, delta: f64) -> bool {
    let lower = delta * b_xi;
    let one = b_eta < lower;
    match k {
        1 => one,
        2 => !one && b_diff < lower,
        _ => !one && b_diff >= lower,
    }
}

/// Frequency samples of both factors with the lattice brackets.
struct Spectra {
    first: GridFunction,
    second: GridFunction,
    brackets: Vec<f64>,
}

impl Spectra {
    fn new(g1: GridFunction, g2: GridFunction) -> Self {
        let grid = *g1.grid();
        let brackets = (0..grid.len()).map(|i| grid.bracket_at(i)).collect();
        Spectra {
            first: g1,
            second: g2,
            brackets,
        }
    }

    fn j_at(&self, k: u8, s: f64, delta: f64, xi: usize) -> f64 {
        let grid = *self.first.grid();
        let (a, b) = (self.first.values(), self.second.values());
        let b_xi = self.brackets[xi];
        let mut acc = 0.0;
        for (eta, value) in b.iter().enumerate() {
            let diff = grid.difference_index(xi, eta);
            if in_piece(k, b_xi, self.brackets[eta], self.brackets[diff], delta) {
                acc += a[diff].norm() * value.norm();
            }
        }
        acc * grid.cell_volume() * b_xi.powf(s)
    }

    fn j_field(&self, k: u8, s: f64, delta: f64) -> GridFunction {
        let grid = *self.first.grid();
        let values = (0..grid.len())
            .map(|xi| Complex64::new(self.j_at(k, s, delta, xi), 0.0))
            .collect();
        GridFunction::new(grid, values).expect("finite quadrature")
    }
}

/// `J_k(ξ) = <ξ>^s Σ_{(ξ,η) in piece k} |f1^(ξ - η) f2^(η)| dη` at lattice
/// point `xi` of the frequency lattice.
pub fn j_integral(
    k: u8,
    f1: &GridFunction,
    f2: &GridFunction,
    s: f64,
    op: &OmegaParams,
    xi: usize,
) -> Result<f64> {
    check_k(k)?;
    f1.grid().ensure_same(f2.grid())?;
    if xi >= f1.grid().len() {
        return Err(Error::InvalidIndex {
            index: xi,
            range: "frequency lattice",
        });
    }
    op.validate()?;
    Ok(Spectra::new(dft(f1), dft(f2)).j_at(k, s, op.delta, xi))
}

/// `J_k` at every point of the frequency lattice.
pub fn j_field(k: u8, f1: &GridFunction, f2: &GridFunction, s: f64, op: &OmegaParams) -> Result<GridFunction> {
    check_k(k)?;
    f1.grid().ensure_same(f2.grid())?;
    op.validate()?;
    Ok(Spectra::new(dft(f1), dft(f2)).j_field(k, s, op.delta))
}

/// Largest `max(<ξ-η>/<ξ>, <ξ>/<ξ-η>)` over lattice pairs in the first
/// region (unwrapped differences).
pub fn first_region_comparability(grid: &Grid, op: &OmegaParams) -> f64 {
    let d = grid.d();
    let mut worst: f64 = 1.0;
    for xi in 0..grid.len() {
        let x = grid.point(xi);
        let bx = bracket(&x[..d]);
        for eta in 0..grid.len() {
            let e = grid.point(eta);
            if bracket(&e[..d]) >= op.delta * bx {
                continue;
            }
            let diff: Vec<f64> = (0..d).map(|a| x[a] - e[a]).collect();
            let ratio = bracket(&diff) / bx;
            worst = worst.max(ratio).max(1.0 / ratio);
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeTail {
    pub cone: usize,
    pub direction: Vec<f64>,
    /// Masses over `2^k <= <ξ> < 2^{k+1}`, `k = 0..=K`.
    pub tails: Vec<f64>,
    pub rate: f64,
    pub singular: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Proxy {
    pub q: String,
    pub s: f64,
    pub cones: Vec<ConeTail>,
    pub singular: Vec<usize>,
}

/// Largest `K` with `2^{K+1}` inside the band `|ξ| <= extent / 2`.
fn last_annulus(grid: &Grid) -> Result<u32> {
    let band = grid.half_width() / 2.0;
    let k = band.log2().floor() as i64 - 1;
    if k < 2 {
        return Err(Error::DegenerateRange(format!(
            "band radius {band} too small for three annuli"
        )));
    }
    Ok(k as u32)
}

fn proxy_from_spectrum(spectrum: &GridFunction, q: Exponent, s: f64, mesh: &ConeMesh) -> Result<Proxy> {
    if mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let grid = *spectrum.grid();
    let last = last_annulus(&grid)?;
    let floor = NOISE_FLOOR * lq_weighted(spectrum, q, s);
    let mut cones = Vec::with_capacity(mesh.len());
    for (index, cone) in mesh.cones().iter().enumerate() {
        let tails: Vec<f64> = (0..=last)
            .map(|k| {
                let (lo, hi) = (2f64.powi(k as i32), 2f64.powi(k as i32 + 1));
                let annulus = GridFunction::new(
                    grid,
                    spectrum
                        .values()
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| {
                            let x = &grid.point(i)[..grid.d()];
                            let b = bracket(x);
                            if b >= lo && b < hi && cone.contains(x) {
                                v
                            } else {
                                Complex64::new(0.0, 0.0)
                            }
                        })
                        .collect(),
                )
                .expect("mask keeps the lattice");
                lq_weighted(&annulus, q, s)
            })
            .collect();
        let top = tails[last as usize];
        let base = tails[last as usize - 2];
        let (rate, singular) = if top <= floor {
            (0.0, false)
        } else if base == 0.0 {
            (f64::INFINITY, true)
        } else {
            let rate = (top / base).sqrt();
            (rate, rate >= SINGULAR_RATE)
        };
        cones.push(ConeTail {
            cone: index,
            direction: cone.direction().to_vec(),
            tails,
            rate,
            singular,
        });
    }
    let singular = cones.iter().filter(|c| c.singular).map(|c| c.cone).collect();
    Ok(Proxy {
        q: q.to_string(),
        s,
        cones,
        singular,
    })
}

/// Mesh cones in which the annulus tails of `f^ <·>^s` fail to decay.
pub fn wavefront_proxy(f: &GridFunction, q: Exponent, s: f64, mesh: &ConeMesh) -> Result<Proxy> {
    proxy_from_spectrum(&dft(f), q, s, mesh)
}

#[derive(Clone, Debug, Serialize)]
pub struct J1Bound {
    /// `‖J_1‖_{L^{q0'}(Γ_1)} / (‖χ_Γ f1^ <·>^{s1}‖_{q1} ‖f2^ <·>^{s2}‖_{q2})`
    /// per mesh cone, with `Γ` the cone of doubled opening; zero where
    /// `f1^` vanishes on `Γ`.
    pub per_cone: Vec<f64>,
    pub constant: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub schema_version: &'static str,
    pub q: Vec<String>,
    pub s: Vec<String>,
    pub verdict: Verdict,
    pub first: Proxy,
    pub second: Proxy,
    pub product: Proxy,
    pub union: Vec<usize>,
    pub contained: bool,
    /// Product cones outside the union and not adjacent to it.
    pub violations: Vec<usize>,
    /// Product cones outside the union but adjacent to a union cone.
    pub boundary_artifacts: Vec<usize>,
    pub j1: J1Bound,
}

impl InclusionReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Proxy sets of `f1`, `f2` and `f1 f2` and the inclusion of the last in
/// the union of the first two. Errors with the verdict when `(q, s)` is
/// inadmissible.
pub fn inclusion_check(
    f1: &GridFunction,
    f2: &GridFunction,
    q: &ExponentTriple,
    s: &WeightTriple,
    mesh: &ConeMesh,
    op: &OmegaParams,
) -> Result<InclusionReport> {
    let verdict = check_microlocal(q, s);
    if !verdict.admissible {
        return Err(Error::Inadmissible(Box::new(verdict)));
    }
    f1.grid().ensure_same(f2.grid())?;
    let sw = weights_f64(s);
    let target = q.q0.dual();
    let (g1, g2) = (dft(f1), dft(f2));
    let product = dft(&pointwise_product(f1, f2)?);

    op.validate()?;
    let first = proxy_from_spectrum(&g1, q.q1, sw[1], mesh)?;
    let second = proxy_from_spectrum(&g2, q.q2, sw[2], mesh)?;
    let prod = proxy_from_spectrum(&product, target, -sw[0], mesh)?;

    let mut union: Vec<usize> = first.singular.iter().chain(&second.singular).cloned().collect();
    union.sort_unstable();
    union.dedup();
    let mut violations = Vec::new();
    let mut boundary_artifacts = Vec::new();
    for &c in &prod.singular {
        if union.contains(&c) {
            continue;
        }
        if mesh.neighbours(c).iter().any(|n| union.contains(n)) {
            boundary_artifacts.push(c);
        } else {
            violations.push(c);
        }
    }

    // Γ doubles the opening of Γ_1; |η| < δ|ξ| keeps ξ - η in Γ when
    // δ <= sin(half-angle of Γ_1)
    let second_norm = lq_weighted(&g2, q.q2, sw[2]);
    let first_norm = lq_weighted(&g1, q.q1, sw[1]);
    let spectra = Spectra::new(g1, g2);
    let mut fields: Vec<(f64, GridFunction)> = Vec::new();
    let mut per_cone = Vec::with_capacity(mesh.len());
    for cone in mesh.cones() {
        let delta = if spectra.first.grid().d() == 1 {
            op.delta
        } else {
            op.delta.min(cone.half_angle().min(PI / 2.0).sin())
        };
        if !fields.iter().any(|(d, _)| *d == delta) {
            fields.push((delta, spectra.j_field(1, -sw[0], delta)));
        }
        let j1 = &fields.iter().find(|(d, _)| *d == delta).expect("just inserted").1;
        let wide = cone.with_half_angle((2.0 * cone.half_angle()).min(PI))?;
        let localised = cone_norm(&spectra.first, &wide, q.q1, sw[1]);
        // a factor that vanishes on Γ up to rounding gives no usable quotient
        per_cone.push(if localised > NOISE_FLOOR * first_norm {
            cone_norm(j1, cone, target, 0.0) / (localised * second_norm)
        } else {
            0.0
        });
    }
    let constant = per_cone.iter().cloned().fold(0.0, f64::max);

    Ok(InclusionReport {
        schema_version: "1",
        q: q.as_array().iter().map(|e| e.to_string()).collect(),
        s: s.s.iter().map(|v| format_rational(*v)).collect(),
        verdict,
        first,
        second,
        product: prod,
        contained: violations.is_empty(),
        union,
        violations,
        boundary_artifacts,
        j1: J1Bound { per_cone, constant },
    })
}

/// Frequency-side recipe for a synthetic test function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpectrumSpec {
    /// `exp(-|ξ - centre|^2 / (2 width^2))`.
    Gaussian {
        #[serde(default)]
        centre: Option<Vec<f64>>,
        width: f64,
    },
    /// `<ξ>^{-decay}` on a cone, cut off at the band edge.
    ConePower {
        direction: Vec<f64>,
        half_angle: f64,
        decay: f64,
    },
}

impl SpectrumSpec {
    /// Physical samples `idft(spectrum)`, with the spectrum confined to
    /// `|ξ| <= extent / 2` of the frequency lattice of `grid`.
    pub fn realise(&self, grid: Grid) -> Result<GridFunction> {
        let dual = grid.dual();
        let band = dual.half_width() / 2.0;
        let d = grid.d();
        let spectrum = match self {
            SpectrumSpec::Gaussian { centre, width } => {
                let centre = centre.clone().unwrap_or_else(|| vec![0.0; d]);
                if centre.len() != d || !(*width > 0.0) {
                    return Err(Error::InvalidParameter("gaussian centre or width".into()));
                }
                GridFunction::sample_real(dual, |xi| {
                    let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if r > band {
                        return 0.0;
                    }
                    let dist: f64 = xi.iter().zip(&centre).map(|(a, b)| (a - b).powi(2)).sum();
                    (-dist / (2.0 * width * width)).exp()
                })
            }
            SpectrumSpec::ConePower {
                direction,
                half_angle,
                decay,
            } => {
                if direction.len() != d {
                    return Err(Error::InvalidParameter("cone direction dimension".into()));
                }
                let cone = Cone::new(direction.clone(), *half_angle)?;
                GridFunction::sample_real(dual, |xi| {
                    let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if r > band || !cone.contains(xi) {
                        0.0
                    } else {
                        bracket(xi).powf(-decay)
                    }
                })
            }
        };
        // the inverse lands on the dual of the dual; keep the caller's grid
        GridFunction::new(grid, idft(&spectrum).into_values())
    }
}

/// Human-readable exponent label of the target space.
pub fn target_label(q: &ExponentTriple, s: &WeightTriple) -> String {
    format!(
        "FL^{{{}}}_{{{}}}",
        q.q0.dual(),
        format_rational(-s.s[0])
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(v: i64) -> Exponent {
        Exponent::from_int(v).unwrap()
    }

    fn grid_1d() -> Grid {
        // frequency spacing 1/4, extent ±64, band 32
        Grid::new(1, 512, 2.0 * PI / (512.0 * 0.25)).unwrap()
    }

    #[test]
    fn cone_membership() {
        let c = Cone::new(vec![3.0, 4.0], 0.1).unwrap();
        assert!((c.direction()[0] - 0.6).abs() < 1e-12);
        assert!(c.contains(&[0.6, 0.8]));
        assert!(!c.contains(&[0.0, 0.0]));
        assert!(!c.contains(&[-0.6, -0.8]));
        assert!(Cone::full(2).contains(&[0.0, 0.0]));
        assert!(Cone::new(vec![0.0], 0.1).is_err());
        assert!(Cone::new(vec![1.0], 0.0).is_err());
    }

    #[test]
    fn mesh_layout() {
        let mesh = ConeMesh::uniform(2, 16).unwrap();
        assert_eq!(mesh.len(), 16);
        assert_eq!(mesh.neighbours(0), vec![1, 15]);
        assert_eq!(mesh.opposite(3), Some(11));
        // every direction lies in some cone
        for k in 0..360 {
            let a = (k as f64).to_radians();
            assert!(mesh.cones().iter().any(|c| c.contains(&[a.cos(), a.sin()])));
        }
        let line = ConeMesh::uniform(1, 2).unwrap();
        assert_eq!(line.opposite(0), Some(1));
        assert!(ConeMesh::new(vec![]).is_err());
    }

    #[test]
    fn full_cone_is_fl_norm() {
        let grid = Grid::new(2, 32, 0.4).unwrap();
        let f = GridFunction::sample_real(grid, |x| (-(x[0] * x[0] + 2.0 * x[1] * x[1])).exp() * (1.0 + x[0]));
        let full = cone_fl_seminorm(&f, &Cone::full(2), ex(2), 0.5);
        assert!((full - crate::norms::fl_norm(&f, ex(2), 0.5)).abs() < 1e-14 * full);
        let line = grid_1d();
        let g = GridFunction::sample_real(line, |x| (-x[0] * x[0]).exp());
        let both = cone_fl_seminorm(&g, &Cone::full(1), ex(3), 1.0);
        assert!((both - crate::norms::fl_norm(&g, ex(3), 1.0)).abs() < 1e-14 * both);
    }

    #[test]
    fn opposite_support_gives_zero() {
        let grid = grid_1d();
        let spec = SpectrumSpec::ConePower {
            direction: vec![-1.0],
            half_angle: 0.5,
            decay: 1.0,
        };
        let f = spec.realise(grid).unwrap();
        let positive = Cone::new(vec![1.0], 0.5).unwrap();
        assert!(cone_fl_seminorm(&f, &positive, ex(2), 0.0) < 1e-12);
    }

    #[test]
    fn half_line_integral() {
        // ∫_0^∞ (1 + ξ^2)^{-1} dξ = π/2
        let grid = Grid::new(1, 8192, 2.0 * PI / (8192.0 * 0.05)).unwrap();
        let dual = grid.dual();
        let spectrum = GridFunction::sample_real(dual, |xi| 1.0 / bracket(xi));
        let f = idft(&spectrum);
        let f = GridFunction::new(grid, f.into_values()).unwrap();
        let value = cone_fl_seminorm(&f, &Cone::new(vec![1.0], 0.5).unwrap(), ex(2), 0.0);
        assert!((value - (PI / 2.0).sqrt()).abs() < 0.01 * (PI / 2.0).sqrt());
    }

    #[test]
    fn seminorm_monotone_in_angle() {
        let grid = Grid::new(2, 32, 0.5).unwrap();
        let f = GridFunction::sample_real(grid, |x| (-(x[0] - 0.3).powi(2) - x[1] * x[1] / 3.0).exp());
        let mut last = 0.0;
        for k in 1..=8 {
            let cone = Cone::new(vec![1.0, 1.0], PI * k as f64 / 8.0).unwrap();
            let v = cone_fl_seminorm(&f, &cone, ex(2), 0.0);
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn j_pieces_partition_the_convolution() {
        let grid = Grid::new(1, 64, 0.4).unwrap();
        let f1 = GridFunction::sample(grid, |x| Complex64::new(0.0, 2.0 * x[0]).exp() * (-x[0] * x[0]).exp());
        let f2 = GridFunction::sample_real(grid, |x| (-(x[0] - 1.0).powi(2) / 2.0).exp());
        let op = OmegaParams::default();
        let s = 0.75;
        let (g1, g2) = (dft(&f1), dft(&f2));
        let dual = *g1.grid();
        for xi in [0, 10, 32, 50, 63] {
            let total: f64 = (0..3).map(|k| j_integral(k, &f1, &f2, s, &op, xi).unwrap()).sum();
            let direct: f64 = (0..dual.len())
                .map(|eta| g1.values()[dual.difference_index(xi, eta)].norm() * g2.values()[eta].norm())
                .sum::<f64>()
                * dual.cell_volume()
                * dual.bracket_at(xi).powf(s);
            assert!((total - direct).abs() <= 1e-10 * direct);
        }
        let zero = GridFunction::zeros(grid);
        for k in 0..3 {
            assert_eq!(j_integral(k, &f1, &zero, s, &op, 5).unwrap(), 0.0);
        }
        assert!(j_integral(3, &f1, &f2, s, &op, 0).is_err());
    }

    #[test]
    fn first_region_brackets_comparable() {
        let op = OmegaParams::default();
        let grid = Grid::new(1, 256, 0.5).unwrap();
        let c = first_region_comparability(&grid, &op);
        assert!(c <= 1.0 / (1.0 - op.delta) + 1e-12, "{c}");
        assert!(c > 1.0);
    }

    #[test]
    fn gaussian_has_empty_proxy() {
        let grid = grid_1d();
        let f = SpectrumSpec::Gaussian { centre: None, width: 2.0 }.realise(grid).unwrap();
        let mesh = ConeMesh::uniform(1, 2).unwrap();
        assert!(wavefront_proxy(&f, ex(2), 1.0, &mesh).unwrap().singular.is_empty());
    }

    #[test]
    fn one_sided_power_is_singular_on_its_side() {
        let grid = grid_1d();
        let mesh = ConeMesh::uniform(1, 2).unwrap();
        // a_k ~ 2^{k(1/2 - a + s)}: divergent for a = 1.2, s = 1
        let f = SpectrumSpec::ConePower {
            direction: vec![1.0],
            half_angle: 0.5,
            decay: 1.2,
        }
        .realise(grid)
        .unwrap();
        let proxy = wavefront_proxy(&f, ex(2), 1.0, &mesh).unwrap();
        assert_eq!(proxy.singular, vec![0]);
        // tail-sum oracle on the sampled spectrum
        let tails = &proxy.cones[0].tails;
        let expected = 2f64.powf(0.5 - 1.2 + 1.0);
        let observed = (tails[4] / tails[2]).sqrt();
        assert!((observed - expected).abs() < 0.05 * expected, "{observed}");
        // faster decay than the weight: summable
        let smooth_side = wavefront_proxy(&f, ex(2), 0.0, &mesh).unwrap();
        assert!(smooth_side.singular.is_empty());
        // reflection swaps the sides
        let reflected = wavefront_proxy(&f.reflect(), ex(2), 1.0, &mesh).unwrap();
        assert_eq!(reflected.singular, vec![mesh.opposite(0).unwrap()]);
    }

    #[test]
    fn reflection_equivariance_in_the_plane() {
        let grid = Grid::new(2, 128, 2.0 * PI / 128.0).unwrap();
        let mesh = ConeMesh::uniform(2, 16).unwrap();
        let f = SpectrumSpec::ConePower {
            direction: vec![(PI / 4.0).cos(), (PI / 4.0).sin()],
            half_angle: PI / 20.0,
            decay: 1.9,
        }
        .realise(grid)
        .unwrap();
        let proxy = wavefront_proxy(&f, ex(2), 1.0, &mesh).unwrap();
        assert_eq!(proxy.singular, vec![2]);
        let reflected = wavefront_proxy(&f.reflect(), ex(2), 1.0, &mesh).unwrap();
        let mut expected: Vec<usize> = proxy.singular.iter().map(|&c| mesh.opposite(c).unwrap()).collect();
        expected.sort_unstable();
        assert_eq!(reflected.singular, expected);
    }

    #[test]
    fn inclusion_requires_admissible_parameters() {
        let grid = grid_1d();
        let f = SpectrumSpec::Gaussian { centre: None, width: 1.0 }.realise(grid).unwrap();
        let mesh = ConeMesh::uniform(1, 2).unwrap();
        let q = ExponentTriple::parse(&["4", "4", "4"]).unwrap();
        let s = WeightTriple::parse(&["0", "1", "1"], 1).unwrap();
        let err = inclusion_check(&f, &f, &q, &s, &mesh, &OmegaParams::default()).unwrap_err();
        match err {
            Error::Inadmissible(v) => assert!(!v.admissible),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn inclusion_for_smooth_and_singular_inputs() {
        let grid = grid_1d();
        let mesh = ConeMesh::uniform(1, 2).unwrap();
        let q = ExponentTriple::parse(&["2", "2", "2"]).unwrap();
        let op = OmegaParams::default();
        let gauss = SpectrumSpec::Gaussian { centre: None, width: 1.5 }.realise(grid).unwrap();
        let s = WeightTriple::parse(&["0", "1", "1"], 1).unwrap();
        let smooth = inclusion_check(&gauss, &gauss, &q, &s, &mesh, &op).unwrap();
        assert!(smooth.first.singular.is_empty() && smooth.product.singular.is_empty());
        assert!(smooth.contained);

        // target weight 4/5 keeps the product singular on the positive side
        let s = WeightTriple::parse(&["-4/5", "1", "1"], 1).unwrap();
        let singular = SpectrumSpec::ConePower {
            direction: vec![1.0],
            half_angle: 0.5,
            decay: 1.2,
        }
        .realise(grid)
        .unwrap();
        let report = inclusion_check(&singular, &gauss, &q, &s, &mesh, &op).unwrap();
        assert_eq!(report.first.singular, vec![0]);
        assert_eq!(report.product.singular, vec![0]);
        assert!(report.contained);
        assert!(report.j1.constant.is_finite() && report.j1.constant > 0.0);
        let json: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
        assert_eq!(json["schema_version"], "1");
    }
}
