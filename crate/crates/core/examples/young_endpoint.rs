//! Young's inequality at the scaling line: the largest observed quotient
//! over a random band-limited ensemble never exceeds one.

use flmult::admissibility::WeightTriple;
use flmult::bilinear::{estimate_ratio_sup, EnsembleConfig, EnsembleFamily, RatioMode};
use flmult::exponents::ExponentTriple;

fn main() -> flmult::Result<()> {
    let config = EnsembleConfig {
        seed: 2024,
        family: EnsembleFamily::BandLimited,
        count: 100,
        d: 1,
        n: 256,
        h: 0.1,
        dyadic_levels: 0,
        power_exponent: None,
    };
    let zero = WeightTriple::parse(&["0", "0", "0"], 1)?;
    for q in [["1", "2", "2"], ["2", "1", "2"], ["1", "1", "inf"], ["4/3", "4/3", "2"], ["1", "4/3", "4"]] {
        let triple = ExponentTriple::parse(&q)?;
        let report = estimate_ratio_sup(RatioMode::Convolution, &triple, &zero, &config)?;
        println!("q = ({:<12}) target L^{:<4} max ratio {:.6}", q.join(", "), report.target.to_string(), report.max_ratio());
    }
    Ok(())
}
