//! Slice norms of the region-restricted weight kernel against their
//! power-law envelopes, for one preset per envelope case.

use flmult::admissibility::WeightTriple;
use flmult::bilinear::{envelope_study, OmegaParams};
use flmult::exponents::Exponent;

fn main() -> flmult::Result<()> {
    let op = OmegaParams::default();
    let presets: [(u8, [&str; 3], &str); 7] = [
        (1, ["0", "0", "0"], "1"),
        (1, ["1/2", "0", "2"], "1"),
        (1, ["0", "0", "1/4"], "4"),
        (2, ["0", "0", "0"], "2"),
        (3, ["1", "1", "-1"], "2"),
        (4, ["1", "1", "1"], "inf"),
        (5, ["-2", "0", "1/2"], "1"),
    ];
    println!("region  s                 p    slope   predicted  C        drift");
    for (j, s, p) in presets {
        let weights = WeightTriple::parse(&s, 1)?;
        let p: Exponent = p.parse()?;
        let study = envelope_study(j, &weights, &op, p, 10, 5)?;
        println!(
            "{j:<7} {:<17} {:<4} {:+.4} {:+.4}    {:.4}  {:.2e}",
            s.join(","),
            p.to_string(),
            study.fitted_slope,
            study.predicted_slope,
            study.constant,
            study.drift
        );
    }
    Ok(())
}
