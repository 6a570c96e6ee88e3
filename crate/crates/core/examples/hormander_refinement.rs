//! Product quotients in `FL^2` weights under grid refinement, and the
//! truncated power family at and below the critical weight sum.

use flmult::admissibility::{check_fl_product, WeightTriple};
use flmult::bilinear::{estimate_ratio_sup, EnsembleConfig, EnsembleFamily, RatioMode};
use flmult::exponents::ExponentTriple;

fn main() -> flmult::Result<()> {
    let q = ExponentTriple::parse(&["2", "2", "2"])?;
    let smooth = EnsembleConfig {
        seed: 7,
        family: EnsembleFamily::BandLimited,
        count: 20,
        d: 1,
        n: 128,
        h: 0.2,
        dyadic_levels: 2,
        power_exponent: None,
    };
    println!("smooth ensemble, n = 128, 256, 512");
    for s in ["3/10", "1/2", "3/4"] {
        let weights = WeightTriple::parse(&["0", s, s], 1)?;
        let report = estimate_ratio_sup(RatioMode::FlProduct, &q, &weights, &smooth)?;
        println!(
            "  s = {s:<5} maxima {:?}  spread {:.4}",
            report.level_maxima(),
            report.refinement_spread()
        );
    }

    let power = EnsembleConfig {
        family: EnsembleFamily::Power,
        count: 1,
        dyadic_levels: 5,
        power_exponent: Some(0.5),
        ..smooth
    };
    println!("power family <xi>^(-1/2), truncation doubling per level");
    for s in ["1/4", "1/10", "0"] {
        let weights = WeightTriple::parse(&["0", s, s], 1)?;
        let verdict = check_fl_product(&q, &weights);
        let report = estimate_ratio_sup(RatioMode::FlProduct, &q, &weights, &power)?;
        let maxima = report.level_maxima();
        println!(
            "  s = {s:<5} admissible {:<5} maxima {:?}  last/first {:.3}  diverges {}",
            verdict.admissible,
            maxima,
            maxima[maxima.len() - 1] / maxima[0],
            report.diverges
        );
    }
    Ok(())
}
