//! Splitting the weighted convolution into the five region operators and
//! checking that the regions partition frequency-pair space.

use flmult::admissibility::{check_lemma_tfj, WeightTriple};
use flmult::bilinear::{decompose, region_coverage, OmegaParams};
use flmult::exponents::ExponentTriple;
use flmult::grid::{Grid, GridFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

fn main() -> flmult::Result<()> {
    let grid = Grid::new(1, 256, 0.25)?;
    let op = OmegaParams::default().partition();
    let coverage = region_coverage(&grid, &op);
    println!(
        "lattice pairs {}: uncovered {}, in several regions {}",
        coverage.total, coverage.uncovered, coverage.multiple
    );

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut random = || {
        let values = (0..grid.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        GridFunction::new(grid, values)
    };
    let (v1, v2) = (random()?, random()?);
    let s = WeightTriple::parse(&["0", "1", "1"], 1)?;
    let split = decompose(&v1, &v2, &s, &op)?;
    println!("relative error of the region sum: {:.3e}", split.relative_error());
    for (j, term) in split.terms.iter().enumerate() {
        println!("  region {}: max |term| {:.4}", j + 1, term.max_abs());
    }

    let q = ExponentTriple::parse(&["2", "2", "2"])?;
    for j in 1..=5 {
        let v = check_lemma_tfj(j, &q, &s)?;
        println!("  region {j} hypotheses: {} ({})", v.admissible, v.clause);
    }
    Ok(())
}
