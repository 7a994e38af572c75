//! Exterior powers as compound matrices, and Cauchy-Binet.

use quiverk::{IntMatrix, SubsetIndex};

fn main() -> quiverk::Result<()> {
    let x = IntMatrix::from_rows(&[[1, 2, 0], [0, 1, 3], [4, 0, 1]]);
    let y = IntMatrix::from_rows(&[[2, 0, 1], [1, 1, 0], [0, 3, 1]]);
    for k in 0..=3 {
        let index = SubsetIndex::new(3, k)?;
        println!("k = {k}, basis {:?}", index.subsets());
        println!("{}", x.exterior_power(k)?);
        let lhs = x.mat_mul(&y)?.exterior_power(k)?;
        let rhs = x.exterior_power(k)?.mat_mul(&y.exterior_power(k)?)?;
        assert_eq!(lhs, rhs);
    }
    println!("det X = {}, Λ^3 X = {}", x.det()?, x.exterior_power(3)?);
    Ok(())
}
