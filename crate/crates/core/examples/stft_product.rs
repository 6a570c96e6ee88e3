//! The short-time transform of a product is a scaled convolution of the
//! factors' transforms in frequency; the modulation and Wiener norms of
//! the pieces satisfy the pointwise Hölder step.

use std::f64::consts::PI;

use flmult::exponents::Exponent;
use flmult::grid::{convolve, pointwise_product, Grid, GridFunction};
use flmult::norms::{gaussian_window, holder_step, modulation_norm, stft, wiener_norm};
use rustfft::num_complex::Complex64;

fn main() -> flmult::Result<()> {
    let grid = Grid::new(1, 128, 0.2)?;
    let f1 = GridFunction::sample(grid, |x| Complex64::new(0.0, 1.5 * x[0]).exp() * (-x[0] * x[0] / 2.0).exp());
    let f2 = GridFunction::sample_real(grid, |x| (-(x[0] - 0.8).powi(2) / 3.0).exp());
    let phi1 = gaussian_window(grid);
    let phi2 = GridFunction::sample_real(grid, |x| (-x[0] * x[0] / 5.0).exp());

    let lhs = stft(&pointwise_product(&f1, &f2)?, &pointwise_product(&phi1, &phi2)?)?;
    let (v1, v2) = (stft(&f1, &phi1)?, stft(&f2, &phi2)?);
    let dual = grid.dual();
    let mut worst: f64 = 0.0;
    for x in 0..grid.len() {
        let a = GridFunction::new(dual, v1.row(x).to_vec())?;
        let b = GridFunction::new(dual, v2.row(x).to_vec())?;
        let rhs = convolve(&a, &b)?.scale((2.0 * PI).powf(-0.5));
        for (l, r) in lhs.row(x).iter().zip(rhs.values()) {
            worst = worst.max((l - r).norm());
        }
    }
    println!("product identity: max deviation {:.3e} (scale {:.3e})", worst, lhs.max_abs());

    let (p1, p2): (Exponent, Exponent) = ("3".parse()?, "3".parse()?);
    let step = holder_step([&f1, &f2], [&phi1, &phi2], [p1, p2])?;
    println!("Hölder step: max relative excess {:.3e}", step.max_relative_excess());

    // a separable spectrogram would make both orders agree
    let g = GridFunction::sample_real(grid, |x| (1.0 + x[0] * x[0]).powi(-2) * (1.0 + 0.5 * (3.0 * x[0]).cos()));
    for (p, q) in [("1", "2"), ("2", "2"), ("inf", "1")] {
        let (p, q): (Exponent, Exponent) = (p.parse()?, q.parse()?);
        println!(
            "p = {p:<3} q = {q:<3} M norm {:.6}  W norm {:.6}",
            modulation_norm(&g, &phi1, p, q, 0.5, 0.0)?,
            wiener_norm(&g, &phi1, p, q, 0.5, 0.0)?
        );
    }
    Ok(())
}
