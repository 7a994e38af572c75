//! Smith normal form with transforms, and the cokernel it determines.

use quiverk::{cokernel, smith_normal_form, IntMatrix};

fn main() -> quiverk::Result<()> {
    let a = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
    let s = smith_normal_form(&a);
    println!("A =\n{a}\nD =\n{}\nU =\n{}\nV =\n{}", s.d, s.u, s.v);
    assert_eq!(s.u.mat_mul(&a)?.mat_mul(&s.v)?, s.d);
    println!("coker A = {}", cokernel(&a));

    let thin = IntMatrix::from_rows(&[[1, 2], [2, 4], [3, 6]]);
    println!("coker of a rank-1 3x2 matrix = {}", cokernel(&thin));
    Ok(())
}
