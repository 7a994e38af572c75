//! Closed forms next to the engine: scalar F, d = 2 with F = 1, diagonal pairs.

use num_bigint::BigInt;
use quiverk::closed_forms::{alg2_kgroups, corollary_d2, diag_kgroups, is_integer_dilation, Coverage};
use quiverk::{k_groups, IntMatrix, QuiverInput};

fn engine(f: &IntMatrix, g: &IntMatrix) -> quiverk::Result<String> {
    let r = k_groups(&QuiverInput::new(f.clone(), g.clone())?)?;
    Ok(format!("{} / {}", r.k0, r.k1))
}

fn main() -> quiverk::Result<()> {
    let g = IntMatrix::from_rows(&[[2, 1], [1, 1]]);
    for n in 1..=3 {
        let f = IntMatrix::scalar(2, n);
        match alg2_kgroups(&BigInt::from(n), &g)? {
            Coverage::Covered(c) => {
                println!("n = {n}: closed {} / {} [{}], engine {}", c.k0, c.k1, c.rule, engine(&f, &g)?)
            }
            Coverage::NotCovered(why) => println!("n = {n}: not covered ({why})"),
        }
    }

    println!("G = {g} is a dilation: {}", is_integer_dilation(&g)?);
    let c = corollary_d2(&g)?;
    println!("d = 2, F = 1: {} / {} [{}]", c.k0, c.k1, c.rule);

    let f = IntMatrix::diagonal(&[1, 1, 2]);
    let g = IntMatrix::diagonal(&[1, 3, -1]);
    let c = diag_kgroups(&f, &g)?;
    println!("diagonal: {} / {} [{}], engine {}", c.k0, c.k1, c.rule, engine(&f, &g)?);
    Ok(())
}
