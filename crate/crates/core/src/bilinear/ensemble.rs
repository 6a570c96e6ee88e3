//! Empirical operator-norm ratios over seeded random ensembles.
//!
//! All inputs are frequency-side samples on the dual of a physical grid
//! `(d, n, h)`. Smooth families are confined to `|ξ| <= π/(2h)`, half the
//! lattice extent, so circular and linear convolution agree; they are
//! refined by doubling `n` at fixed `h`. The power family
//! `χ_{<ξ> <= N} <ξ>^{-a}` is refined by doubling `n` and halving `h`, which
//! keeps the frequency spacing and doubles the truncation `N = π/(2h)`.
//!
//! Member `m` draws from `ChaCha8Rng` seeded with `seed` on stream `m`, so
//! each member is reproducible on its own and identical across levels.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{sample_kernel, t_f_apply, weights_f64, WeightKernel};
use crate::admissibility::WeightTriple;
use crate::error::{Error, Result};
use crate::exponents::{r_functional, Exponent, ExponentTriple};
use crate::grid::{bracket, convolve, idft, pointwise_product, Grid, GridFunction};
use crate::norms::{fl_norm, lq_weighted, mixed_norm, MixedOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleFamily {
    /// Random mixtures of up to three complex Gaussian bumps.
    BandLimited,
    /// One Gaussian bump with random centre and width.
    Gaussian,
    /// `χ_{<ξ> <= N} <ξ>^{-a}`.
    Power,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub seed: u64,
    pub family: EnsembleFamily,
    pub count: usize,
    pub d: usize,
    pub n: usize,
    pub h: f64,
    /// Number of refinement levels after the base one.
    pub dyadic_levels: u32,
    /// Decay `a` of the power family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_exponent: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioMode {
    /// `‖v1 * v2‖_{L^{q0'}_{-s0}} / (‖v1‖_{L^{q1}_{s1}} ‖v2‖_{L^{q2}_{s2}})`.
    Convolution,
    /// The same quotient for `f1 f2` in Fourier–Lebesgue norms.
    FlProduct,
    /// `‖T_F(v1, v2)‖_{q0'} / (‖F‖_{L^{∞,r}_2} ‖v1‖_{q1} ‖v2‖_{q2})`, `r = 1/R`.
    #[serde(rename = "t-f")]
    KernelOperator,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub level: u32,
    pub resolution: usize,
    pub member: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelSummary {
    pub level: u32,
    pub n: usize,
    pub h: f64,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub mode: RatioMode,
    pub target: Exponent,
    pub levels: Vec<LevelSummary>,
    pub rows: Vec<RatioRow>,
    pub diverges: bool,
}

impl RatioReport {
    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    pub fn level_maxima(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.max_ratio).collect()
    }

    /// `max / min` of the per-level maxima.
    pub fn refinement_spread(&self) -> f64 {
        let maxima = self.level_maxima();
        let top = maxima.iter().cloned().fold(f64::MIN, f64::max);
        let bottom = maxima.iter().cloned().fold(f64::MAX, f64::min);
        top / bottom
    }

    /// CSV with columns `resolution,member,ratio`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "resolution,member,ratio")?;
        for row in &self.rows {
            writeln!(out, "{},{},{:.17e}", row.resolution, row.member, row.ratio)?;
        }
        Ok(())
    }
}

/// Monotone growth over at least four levels with `last / first >= 2`.
pub fn grows_without_bound(maxima: &[f64]) -> bool {
    maxima.len() >= 4
        && maxima.windows(2).all(|w| w[1] > w[0])
        && maxima[maxima.len() - 1] >= 2.0 * maxima[0]
}

/// `exp(1 - 1/(1 - t^2))` for `|t| < 1`, zero outside.
fn cutoff(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

struct Bump {
    centre: Vec<f64>,
    width: f64,
    amplitude: Complex64,
}

impl Bump {
    /// Centre in `[-spread, spread]^d`, width in `widths`, both in units of `band`.
    fn draw(
        rng: &mut ChaCha8Rng,
        d: usize,
        band: f64,
        spread: f64,
        widths: (f64, f64),
        random_amplitude: bool,
    ) -> Bump {
        Bump {
            centre: (0..d).map(|_| rng.gen_range(-spread..=spread) * band).collect(),
            width: rng.gen_range(widths.0..=widths.1) * band,
            amplitude: if random_amplitude {
                Complex64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..2.0 * PI))
            } else {
                Complex64::new(1.0, 0.0)
            },
        }
    }
}

/// Frequency-side description of one ensemble input.
enum Member {
    Bumps { bumps: Vec<Bump>, band: f64 },
    Power { decay: f64 },
}

impl Member {
    fn draw(family: EnsembleFamily, d: usize, band: f64, decay: f64, rng: &mut ChaCha8Rng) -> Member {
        match family {
            EnsembleFamily::BandLimited => {
                let count = rng.gen_range(1..=3);
                let bumps = (0..count)
                    .map(|_| Bump::draw(rng, d, band, 0.5, (1.0 / 16.0, 1.0 / 6.0), true))
                    .collect();
                Member::Bumps { bumps, band }
            }
            EnsembleFamily::Gaussian => Member::Bumps {
                bumps: vec![Bump::draw(rng, d, band, 0.25, (1.0 / 16.0, 1.0 / 8.0), false)],
                band,
            },
            EnsembleFamily::Power => Member::Power { decay },
        }
    }

    fn sample(&self, lattice: Grid, truncation: f64) -> GridFunction {
        match self {
            Member::Bumps { bumps, band } => GridFunction::sample(lattice, |xi| {
                let radius = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
                let envelope = cutoff(radius / band);
                if envelope == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                bumps
                    .iter()
                    .map(|b| {
                        let dist: f64 = xi.iter().zip(&b.centre).map(|(x, c)| (x - c).powi(2)).sum();
                        b.amplitude * (-dist / (2.0 * b.width * b.width)).exp()
                    })
                    .sum::<Complex64>()
                    * envelope
            }),
            Member::Power { decay } => GridFunction::sample_real(lattice, |xi| {
                let b = bracket(xi);
                if b <= truncation {
                    b.powf(-decay)
                } else {
                    0.0
                }
            }),
        }
    }
}

struct Level {
    physical: Grid,
    truncation: f64,
}

fn levels(config: &EnsembleConfig) -> Result<Vec<Level>> {
    (0..=config.dyadic_levels)
        .map(|k| {
            let scale = 1usize << k;
            let h = match config.family {
                EnsembleFamily::Power => config.h / scale as f64,
                _ => config.h,
            };
            let physical = Grid::new(config.d, config.n * scale, h)?;
            Ok(Level {
                physical,
                truncation: PI / (2.0 * h),
            })
        })
        .collect()
}

fn ratio(
    mode: RatioMode,
    q: &ExponentTriple,
    s: &WeightTriple,
    target: Exponent,
    physical: Grid,
    v1: &GridFunction,
    v2: &GridFunction,
) -> Result<f64> {
    let sw = weights_f64(s);
    Ok(match mode {
        RatioMode::Convolution => {
            let out = convolve(v1, v2)?;
            lq_weighted(&out, target, -sw[0])
                / (lq_weighted(v1, q.q1, sw[1]) * lq_weighted(v2, q.q2, sw[2]))
        }
        RatioMode::FlProduct => {
            let f1 = idft(v1);
            let f2 = idft(v2);
            debug_assert!(f1.grid().same_as(&physical));
            let product = pointwise_product(&f1, &f2)?;
            fl_norm(&product, target, -sw[0]) / (fl_norm(&f1, q.q1, sw[1]) * fl_norm(&f2, q.q2, sw[2]))
        }
        RatioMode::KernelOperator => {
            let r = r_functional(q);
            let inner = Exponent::from_recip(r).map_err(|_| {
                Error::Hypothesis(format!("R(q) = {r} outside [0, 1]"))
            })?;
            let lattice = *v1.grid();
            let kernel = WeightKernel::new(s);
            let kernel_norm = mixed_norm(
                &sample_kernel(&kernel, lattice),
                Exponent::INFINITY,
                inner,
                MixedOrder::InnerSecond,
            );
            let out = t_f_apply(&kernel, v1, v2)?;
            lq_weighted(&out, target, 0.0)
                / (kernel_norm * lq_weighted(v1, q.q1, 0.0) * lq_weighted(v2, q.q2, 0.0))
        }
    })
}

/// Maximum of the mode's norm quotient over the ensemble at each level.
/// The target exponent is `q0'`.
pub fn estimate_ratio_sup(
    mode: RatioMode,
    q: &ExponentTriple,
    s: &WeightTriple,
    config: &EnsembleConfig,
) -> Result<RatioReport> {
    if config.count == 0 {
        return Err(Error::EmptyEnsemble);
    }
    if s.d as usize != config.d {
        return Err(Error::InvalidParameter(format!(
            "weights are for d = {}, ensemble for d = {}",
            s.d, config.d
        )));
    }
    let decay = match config.family {
        EnsembleFamily::Power => config.power_exponent.ok_or(Error::Missing("power_exponent"))?,
        _ => 0.0,
    };
    let target = q.q0.dual();
    let band = PI / (2.0 * config.h);
    let members: Vec<(Member, Member)> = (0..config.count)
        .map(|m| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(m as u64);
            let first = Member::draw(config.family, config.d, band, decay, &mut rng);
            let second = Member::draw(config.family, config.d, band, decay, &mut rng);
            (first, second)
        })
        .collect();

    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (k, level) in levels(config)?.into_iter().enumerate() {
        let lattice = level.physical.dual();
        let mut best: f64 = 0.0;
        for (m, (a, b)) in members.iter().enumerate() {
            let v1 = a.sample(lattice, level.truncation);
            let v2 = b.sample(lattice, level.truncation);
            let value = ratio(mode, q, s, target, level.physical, &v1, &v2)?;
            best = best.max(value);
            rows.push(RatioRow {
                level: k as u32,
                resolution: level.physical.n(),
                member: m,
                ratio: value,
            });
        }
        summaries.push(LevelSummary {
            level: k as u32,
            n: level.physical.n(),
            h: level.physical.h(),
            max_ratio: best,
        });
    }
    let maxima: Vec<f64> = summaries.iter().map(|l| l.max_ratio).collect();
    Ok(RatioReport {
        mode,
        target,
        diverges: grows_without_bound(&maxima),
        levels: summaries,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(family: EnsembleFamily, count: usize, n: usize, levels: u32) -> EnsembleConfig {
        EnsembleConfig {
            seed: 42,
            family,
            count,
            d: 1,
            n,
            h: 0.2,
            dyadic_levels: levels,
            power_exponent: None,
        }
    }

    fn q(items: [&str; 3]) -> ExponentTriple {
        ExponentTriple::parse(&items).unwrap()
    }

    fn s(items: [&str; 3]) -> WeightTriple {
        WeightTriple::parse(&items, 1).unwrap()
    }

    #[test]
    fn young_endpoint_ratios_bounded() {
        let report = estimate_ratio_sup(
            RatioMode::Convolution,
            &q(["2", "1", "2"]),
            &s(["0", "0", "0"]),
            &config(EnsembleFamily::BandLimited, 30, 128, 0),
        )
        .unwrap();
        assert!(report.max_ratio() <= 1.0 + 1e-6);
        assert!(report.max_ratio() > 0.1);
        assert_eq!(report.rows.len(), 30);
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = config(EnsembleFamily::BandLimited, 5, 64, 1);
        let run = || {
            estimate_ratio_sup(RatioMode::FlProduct, &q(["2", "2", "2"]), &s(["0", "1", "1"]), &cfg).unwrap()
        };
        assert_eq!(run(), run());
        let other = EnsembleConfig { seed: 43, ..cfg.clone() };
        let changed =
            estimate_ratio_sup(RatioMode::FlProduct, &q(["2", "2", "2"]), &s(["0", "1", "1"]), &other).unwrap();
        assert_ne!(run().rows, changed.rows);
    }

    #[test]
    fn empty_and_missing_parameters() {
        let cfg = config(EnsembleFamily::Gaussian, 0, 64, 0);
        assert!(matches!(
            estimate_ratio_sup(RatioMode::Convolution, &q(["2", "1", "2"]), &s(["0", "0", "0"]), &cfg),
            Err(Error::EmptyEnsemble)
        ));
        let cfg = config(EnsembleFamily::Power, 1, 64, 0);
        assert!(matches!(
            estimate_ratio_sup(RatioMode::Convolution, &q(["2", "1", "2"]), &s(["0", "0", "0"]), &cfg),
            Err(Error::Missing(_))
        ));
    }

    #[test]
    fn product_ratio_stable_under_refinement() {
        let report = estimate_ratio_sup(
            RatioMode::FlProduct,
            &q(["2", "2", "2"]),
            &s(["0", "1/2", "1/2"]),
            &config(EnsembleFamily::BandLimited, 8, 64, 2),
        )
        .unwrap();
        assert!(report.refinement_spread() < 1.1, "{:?}", report.level_maxima());
        assert!(!report.diverges);
    }

    #[test]
    fn fl_product_agrees_with_scaled_convolution() {
        let cfg = config(EnsembleFamily::Gaussian, 4, 64, 0);
        let (qq, ss) = (q(["2", "2", "2"]), s(["1/2", "1", "1/2"]));
        let conv = estimate_ratio_sup(RatioMode::Convolution, &qq, &ss, &cfg).unwrap();
        let prod = estimate_ratio_sup(RatioMode::FlProduct, &qq, &ss, &cfg).unwrap();
        for (a, b) in conv.rows.iter().zip(&prod.rows) {
            let expected = a.ratio / (2.0 * PI).sqrt();
            assert!((b.ratio - expected).abs() < 1e-9 * expected);
        }
    }

    #[test]
    fn kernel_operator_ratio_at_most_one() {
        for (qq, ss) in [
            (q(["2", "2", "2"]), s(["0", "1", "1"])),
            (q(["1", "2", "2"]), s(["1", "0", "-1/2"])),
            (q(["4/3", "4/3", "2"]), s(["0", "1/2", "1/2"])),
        ] {
            let report = estimate_ratio_sup(
                RatioMode::KernelOperator,
                &qq,
                &ss,
                &config(EnsembleFamily::BandLimited, 6, 32, 1),
            )
            .unwrap();
            assert!(report.max_ratio() <= 1.0 + 1e-9, "{qq}: {}", report.max_ratio());
        }
        let negative = estimate_ratio_sup(
            RatioMode::KernelOperator,
            &q(["inf", "inf", "inf"]),
            &s(["0", "0", "0"]),
            &config(EnsembleFamily::Gaussian, 1, 32, 0),
        );
        assert!(matches!(negative, Err(Error::Hypothesis(_))));
    }

    #[test]
    fn divergence_rule() {
        assert!(grows_without_bound(&[1.0, 1.3, 1.7, 2.0]));
        assert!(!grows_without_bound(&[1.0, 1.3, 2.5]));
        assert!(!grows_without_bound(&[1.0, 1.5, 1.4, 2.5]));
        assert!(!grows_without_bound(&[1.0, 1.2, 1.4, 1.9]));
    }

    #[test]
    fn csv_has_one_row_per_member_and_level() {
        let report = estimate_ratio_sup(
            RatioMode::Convolution,
            &q(["2", "1", "2"]),
            &s(["0", "0", "0"]),
            &config(EnsembleFamily::Gaussian, 3, 32, 1),
        )
        .unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 6);
        assert!(text.starts_with("resolution,member,ratio\n32,0,"));
    }
}
