//! Share of the admissible product region on a reciprocal lattice, sliced
//! by the value of R(q).

use std::collections::BTreeMap;

use flmult::cli::{cmd_sweep, CheckKind, SweepConfig};
use flmult::exponents::{format_rational, r_functional, ExponentTriple};

fn main() -> flmult::Result<()> {
    let config = SweepConfig {
        step: "1/4".into(),
        weights: ["-1", "-1/2", "0", "1/2", "1"].map(String::from).to_vec(),
        d: 1,
        kind: CheckKind::FlProduct,
    };
    let rows = cmd_sweep(&config)?;
    let mut slices: BTreeMap<_, (usize, usize)> = BTreeMap::new();
    for row in &rows {
        let r = r_functional(&ExponentTriple::new(row.q[0], row.q[1], row.q[2]));
        let entry = slices.entry(r).or_default();
        entry.1 += 1;
        if row.verdict.admissible {
            entry.0 += 1;
        }
    }
    println!("{} rows", rows.len());
    for (r, (admissible, total)) in slices {
        println!("R = {:<5} admissible {admissible:>5} of {total:>5}", format_rational(r));
    }
    Ok(())
}
