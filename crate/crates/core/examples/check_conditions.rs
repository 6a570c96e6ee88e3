//! Exact exponent functionals and hypothesis verdicts for a few triples.

use flmult::admissibility::{check_fl_product, check_microlocal, WeightTriple};
use flmult::exponents::{cond_base, cond_h, format_rational, h_functional, r_functional, ExponentTriple};

fn main() -> flmult::Result<()> {
    let cases: [([&str; 3], [&str; 3]); 6] = [
        (["2", "2", "2"], ["0", "3/10", "3/10"]),
        (["2", "2", "2"], ["0", "1/4", "1/4"]),
        (["1", "2", "2"], ["0", "0", "0"]),
        (["4/3", "4", "4"], ["1", "1", "1"]),
        (["4", "4", "4"], ["0", "1", "1"]),
        (["inf", "1", "1"], ["0", "-1/2", "1"]),
    ];
    println!("q               s               R      H      base   cover  product verdict      microlocal verdict");
    for (q, s) in cases {
        let triple = ExponentTriple::parse(&q)?;
        let weights = WeightTriple::parse(&s, 1)?;
        let product = check_fl_product(&triple, &weights);
        let micro = check_microlocal(&triple, &weights);
        let product = format!("{} ({})", product.admissible, product.clause);
        println!(
            "{:<15} {:<15} {:<6} {:<6} {:<6} {:<6} {:<20} {} ({})",
            q.join(","),
            s.join(","),
            format_rational(r_functional(&triple)),
            format_rational(h_functional(&triple)),
            cond_base(&triple),
            cond_h(&triple),
            product,
            micro.admissible,
            micro.clause,
        );
    }
    Ok(())
}
