//! Wavefront proxies of two synthetic inputs and of their product, on the
//! line and in the plane.

use std::f64::consts::PI;

use flmult::admissibility::WeightTriple;
use flmult::bilinear::OmegaParams;
use flmult::exponents::ExponentTriple;
use flmult::grid::Grid;
use flmult::microlocal::{inclusion_check, ConeMesh, SpectrumSpec};

fn cone(angle: f64, half_angle: f64, decay: f64) -> SpectrumSpec {
    SpectrumSpec::ConePower {
        direction: vec![angle.cos(), angle.sin()],
        half_angle,
        decay,
    }
}

fn main() -> flmult::Result<()> {
    let q = ExponentTriple::parse(&["2", "2", "2"])?;
    let op = OmegaParams::default();
    let gauss = SpectrumSpec::Gaussian { centre: None, width: 1.5 };

    let line = Grid::new(1, 512, 2.0 * PI / (512.0 * 0.25))?;
    let plane = Grid::new(2, 128, 2.0 * PI / 128.0)?;
    let positive = SpectrumSpec::ConePower { direction: vec![1.0], half_angle: 0.5, decay: 1.2 };
    let negative = SpectrumSpec::ConePower { direction: vec![-1.0], half_angle: 0.5, decay: 1.2 };
    let cases = [
        ("line, smooth x smooth", line, gauss.clone(), gauss.clone(), ["0", "1", "1"]),
        ("line, singular x smooth", line, positive.clone(), gauss.clone(), ["-4/5", "1", "1"]),
        ("line, opposite singular", line, positive, negative, ["-4/5", "1", "1"]),
        ("plane, smooth x smooth", plane, gauss.clone(), gauss.clone(), ["0", "1", "1"]),
        ("plane, singular x smooth", plane, cone(0.0, PI / 20.0, 1.9), gauss, ["-19/20", "1", "1"]),
        ("plane, crossed singular", plane, cone(0.0, PI / 20.0, 1.9), cone(PI / 2.0, PI / 20.0, 1.9), ["0", "1", "1"]),
        // inputs outside the global spaces: the product picks up the directions in between
        ("plane, crossed singular, s0 = -19/20", plane, cone(0.0, PI / 20.0, 1.9), cone(PI / 2.0, PI / 20.0, 1.9), ["-19/20", "1", "1"]),
    ];
    for (name, grid, first, second, s) in cases {
        let weights = WeightTriple::parse(&s, grid.d() as u32)?;
        let mesh = ConeMesh::uniform(grid.d(), 16)?;
        let start = std::time::Instant::now();
        let report = inclusion_check(&first.realise(grid)?, &second.realise(grid)?, &q, &weights, &mesh, &op)?;
        println!(
            "{name:<38} f1 {:?} f2 {:?} product {:?} contained {} boundary {:?} C(J1) {:.3} [{:.1?}]",
            report.first.singular,
            report.second.singular,
            report.product.singular,
            report.contained,
            report.boundary_artifacts,
            report.j1.constant,
            start.elapsed()
        );
    }
    Ok(())
}
