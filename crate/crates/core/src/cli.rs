//! Batch front end: JSON configs in, JSON or CSV reports out.
//!
//! Exponents are written as `"p/q"`, integers or `"inf"`; weights as
//! rationals or decimals. Every config rejects unknown keys.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::admissibility::{
    check_decomposition, check_fl_product, check_microlocal, check_modulation_product, check_prop31,
    check_prop44, check_wiener_product, parse_three, FullSpec, Verdict, WeightTriple,
};
use crate::bilinear::{envelope_study, estimate_ratio_sup, EnsembleConfig, OmegaParams, RatioMode, RatioReport};
use crate::error::{Error, Result};
use crate::exponents::{format_rational, parse_rational, reciprocal_lattice, Exponent, ExponentTriple};
use crate::grid::Grid;
use crate::microlocal::{inclusion_check, ConeMesh, InclusionReport, SpectrumSpec};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Parser)]
#[command(name = "flmult", version, about = "Fourier–Lebesgue product estimates: checks and numerical campaigns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON parameter file for the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the main report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Override the ensemble seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evaluate the admissibility conditions for one parameter set.
    Check,
    /// Enumerate the admissible region over a rational lattice.
    Sweep,
    /// Estimate norm quotients over a random ensemble.
    Verify,
    /// Fit dyadic growth of kernel slice norms against their envelopes.
    Envelope,
    /// Compare wavefront proxies of two inputs and their product.
    Wavefront,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    #[default]
    FlProduct,
    Convolution,
    Modulation,
    Wiener,
    Microlocal,
    Decomposition,
    /// Kernel conditions for the first operator.
    Kernel,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub q: [String; 3],
    pub s: [String; 3],
    #[serde(default = "one")]
    pub d: u32,
    #[serde(default)]
    pub kind: CheckKind,
    /// Time exponents for the modulation and Wiener checks.
    #[serde(default)]
    pub p: Option<[String; 3]>,
    /// Time weights for the modulation and Wiener checks.
    #[serde(default)]
    pub t: Option<[String; 3]>,
}

pub fn cmd_check(config: &CheckConfig) -> Result<Verdict> {
    let q = ExponentTriple::parse(&config.q)?;
    let s = WeightTriple::parse(&config.s, config.d)?;
    let timed = || -> Result<FullSpec> {
        let mut spec = FullSpec::new(q, s);
        if let Some(p) = &config.p {
            spec = spec.with_p(ExponentTriple::parse(p)?);
        }
        if let Some(t) = &config.t {
            spec = spec.with_t(parse_three(t)?);
        }
        Ok(spec)
    };
    match config.kind {
        CheckKind::FlProduct => Ok(check_fl_product(&q, &s)),
        CheckKind::Convolution => Ok(check_prop44(&q, &s)),
        CheckKind::Modulation => check_modulation_product(&timed()?),
        CheckKind::Wiener => check_wiener_product(&timed()?),
        CheckKind::Microlocal => Ok(check_microlocal(&q, &s)),
        CheckKind::Decomposition => Ok(check_decomposition(&q, &s)),
        CheckKind::Kernel => check_prop31(&q, 1),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Spacing of the reciprocal lattice, `1/k`.
    pub step: String,
    /// Values taken by each of `s0, s1, s2`.
    pub weights: Vec<String>,
    #[serde(default = "one")]
    pub d: u32,
    #[serde(default)]
    pub kind: CheckKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub q: [Exponent; 3],
    pub s: WeightTriple,
    pub verdict: Verdict,
}

/// Every `(q, s)` on the lattice, ordered by the reciprocals of `q` and
/// then by `s`, both lexicographically.
pub fn cmd_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if matches!(config.kind, CheckKind::Modulation | CheckKind::Wiener | CheckKind::Kernel) {
        return Err(Error::InvalidParameter("sweeps cover the weight-dependent checks".into()));
    }
    let step = parse_rational(&config.step)?;
    let mut weights = config
        .weights
        .iter()
        .map(|w| parse_rational(w))
        .collect::<Result<Vec<_>>>()?;
    weights.sort();
    weights.dedup();
    if weights.is_empty() {
        return Err(Error::InvalidParameter("no weight values".into()));
    }
    let mut rows = Vec::new();
    for q in reciprocal_lattice(step)? {
        for &a in &weights {
            for &b in &weights {
                for &c in &weights {
                    let s = WeightTriple::new(a, b, c, config.d)?;
                    let verdict = match config.kind {
                        CheckKind::FlProduct => check_fl_product(&q, &s),
                        CheckKind::Convolution => check_prop44(&q, &s),
                        CheckKind::Microlocal => check_microlocal(&q, &s),
                        CheckKind::Decomposition => check_decomposition(&q, &s),
                        _ => unreachable!("rejected above"),
                    };
                    rows.push(SweepRow {
                        q: q.as_array(),
                        s,
                        verdict,
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    writeln!(out, "q0,q1,q2,s0,s1,s2,admissible,clause")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.q[0],
            row.q[1],
            row.q[2],
            format_rational(row.s.s[0]),
            format_rational(row.s.s[1]),
            format_rational(row.s.s[2]),
            row.verdict.admissible,
            row.verdict.clause
        )?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub mode: RatioMode,
    pub q: [String; 3],
    pub s: [String; 3],
    pub ensemble: EnsembleConfig,
    /// Quotients above `1 + tolerance` count as exceeding the unit bound.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    1e-6
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifySummary {
    pub schema_version: &'static str,
    pub mode: RatioMode,
    pub q: Vec<String>,
    pub s: Vec<String>,
    pub target: String,
    pub seed: u64,
    pub admissible: bool,
    pub clause: String,
    pub members: usize,
    pub max_ratio: f64,
    pub level_maxima: Vec<f64>,
    pub refinement_spread: f64,
    pub within_unit_bound: bool,
    pub diverges: bool,
}

pub fn cmd_verify(config: &VerifyConfig) -> Result<(RatioReport, VerifySummary)> {
    let q = ExponentTriple::parse(&config.q)?;
    let s = WeightTriple::parse(&config.s, config.ensemble.d as u32)?;
    let verdict = match config.mode {
        RatioMode::Convolution => check_prop44(&q, &s),
        RatioMode::FlProduct => check_fl_product(&q, &s),
        RatioMode::KernelOperator => check_prop31(&q, 1)?,
    };
    let report = estimate_ratio_sup(config.mode, &q, &s, &config.ensemble)?;
    let max_ratio = report.max_ratio();
    let summary = VerifySummary {
        schema_version: SCHEMA_VERSION,
        mode: config.mode,
        q: q.as_array().iter().map(|e| e.to_string()).collect(),
        s: s.s.iter().map(|v| format_rational(*v)).collect(),
        target: verdict.target.to_string(),
        seed: config.ensemble.seed,
        admissible: verdict.admissible,
        clause: verdict.clause.to_string(),
        members: config.ensemble.count,
        max_ratio,
        level_maxima: report.level_maxima(),
        refinement_spread: report.refinement_spread(),
        within_unit_bound: max_ratio <= 1.0 + config.tolerance,
        diverges: report.diverges,
    };
    Ok((report, summary))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopePreset {
    pub region: u8,
    pub s: [String; 3],
    pub p: String,
}

fn ten() -> u32 {
    10
}

fn five() -> u32 {
    5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeConfig {
    pub presets: Vec<EnvelopePreset>,
    #[serde(default = "one")]
    pub d: u32,
    #[serde(default)]
    pub omega: OmegaParams,
    /// Brackets run over `2^0 ..= 2^max_level`.
    #[serde(default = "ten")]
    pub max_level: u32,
    /// First level used in the slope fit.
    #[serde(default = "five")]
    pub fit_from: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeLine {
    pub region: u8,
    pub p: Exponent,
    pub s: Vec<String>,
    pub fitted_slope: f64,
    pub predicted_slope: f64,
    pub constant: f64,
    pub drift: f64,
}

pub fn cmd_envelope(config: &EnvelopeConfig) -> Result<Vec<EnvelopeLine>> {
    config.omega.validate()?;
    config
        .presets
        .iter()
        .map(|preset| {
            let s = WeightTriple::parse(&preset.s, config.d)?;
            let p: Exponent = preset.p.parse()?;
            let study = envelope_study(preset.region, &s, &config.omega, p, config.max_level, config.fit_from)?;
            Ok(EnvelopeLine {
                region: preset.region,
                p,
                s: s.s.iter().map(|v| format_rational(*v)).collect(),
                fitted_slope: study.fitted_slope,
                predicted_slope: study.predicted_slope,
                constant: study.constant,
                drift: study.drift,
            })
        })
        .collect()
}

pub fn write_envelope_csv<W: Write>(lines: &[EnvelopeLine], mut out: W) -> Result<()> {
    writeln!(out, "j,p,fitted_slope,predicted_slope,constant_C")?;
    for line in lines {
        writeln!(
            out,
            "{},{},{:.6},{:.6},{:.6}",
            line.region, line.p, line.fitted_slope, line.predicted_slope, line.constant
        )?;
    }
    Ok(())
}

fn sixteen() -> usize {
    16
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavefrontConfig {
    pub q: [String; 3],
    pub s: [String; 3],
    pub d: usize,
    pub n: usize,
    /// Spacing of the frequency lattice; the spatial step is `2π / (n dξ)`.
    pub frequency_step: f64,
    #[serde(default)]
    pub omega: OmegaParams,
    /// Number of cones for `d = 2`; ignored for `d = 1`.
    #[serde(default = "sixteen")]
    pub mesh_size: usize,
    pub first: SpectrumSpec,
    pub second: SpectrumSpec,
}

impl WavefrontConfig {
    pub fn grid(&self) -> Result<Grid> {
        if !(self.frequency_step > 0.0) {
            return Err(Error::InvalidParameter("frequency_step must be positive".into()));
        }
        Grid::new(
            self.d,
            self.n,
            2.0 * std::f64::consts::PI / (self.n as f64 * self.frequency_step),
        )
    }
}

pub fn cmd_wavefront(config: &WavefrontConfig) -> Result<InclusionReport> {
    let q = ExponentTriple::parse(&config.q)?;
    let s = WeightTriple::parse(&config.s, config.d as u32)?;
    config.omega.validate()?;
    let grid = config.grid()?;
    let mesh = ConeMesh::uniform(config.d, config.mesh_size)?;
    let f1 = config.first.realise(grid)?;
    let f2 = config.second.realise(grid)?;
    inclusion_check(&f1, &f2, &q, &s, &mesh, &config.omega)
}

fn load<T: for<'de> Deserialize<'de>>(path: Option<&Path>) -> Result<T> {
    let path = path.ok_or(Error::Missing("--config"))?;
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn json_line<W: Write>(value: &impl Serialize, out: &mut W) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Writes `body` to `--out` when given, otherwise to `stdout`.
fn emit<W: Write>(
    target: Option<&Path>,
    stdout: &mut W,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match target {
        Some(path) => {
            let mut file = std::io::BufWriter::new(fs::File::create(path)?);
            body(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn execute<W: Write>(cli: &Cli, stdout: &mut W) -> Result<i32> {
    let config = cli.config.as_deref();
    let out = cli.out.as_deref();
    match cli.command {
        Command::Check => {
            let verdict = cmd_check(&load(config)?)?;
            emit(out, stdout, |w| json_line(&verdict.to_json(), &mut &mut *w))?;
            Ok(if verdict.admissible { 0 } else { 1 })
        }
        Command::Sweep => {
            let rows = cmd_sweep(&load(config)?)?;
            emit(out, stdout, |w| write_sweep_csv(&rows, w))?;
            Ok(0)
        }
        Command::Verify => {
            let mut parsed: VerifyConfig = load(config)?;
            if let Some(seed) = cli.seed {
                parsed.ensemble.seed = seed;
            }
            let (report, summary) = cmd_verify(&parsed)?;
            match out {
                // ratios to the file, summary to stdout
                Some(_) => {
                    emit(out, stdout, |w| report.write_csv(w))?;
                    json_line(&summary, stdout)?;
                }
                None => report.write_csv(&mut *stdout)?,
            }
            Ok(0)
        }
        Command::Envelope => {
            let lines = cmd_envelope(&load(config)?)?;
            emit(out, stdout, |w| write_envelope_csv(&lines, w))?;
            Ok(0)
        }
        Command::Wavefront => {
            let report = cmd_wavefront(&load(config)?)?;
            emit(out, stdout, |w| json_line(&report, &mut &mut *w))?;
            Ok(0)
        }
    }
}

/// Runs one command and returns the process exit code: `0` success (or
/// admissible), `1` inadmissible (`check` only), `2` error. An inadmissible
/// `wavefront` request prints its verdict as JSON and exits with `2`.
pub fn run<W: Write, E: Write>(cli: &Cli, stdout: &mut W, stderr: &mut E) -> i32 {
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(Error::Inadmissible(verdict)) => {
            let _ = json_line(&verdict.to_json(), stdout);
            let _ = writeln!(stderr, "error: {}", Error::Inadmissible(verdict));
            2
        }
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            2
        }
    }
}
