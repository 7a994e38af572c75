//! A non-diagonal dilation F reduced to diagonal form, level by level.

use quiverk::closed_forms::is_integer_dilation;
use quiverk::kquiver::{reduce_general_f, replicate_remark};
use quiverk::IntMatrix;

fn main() -> quiverk::Result<()> {
    let f = IntMatrix::from_rows(&[[2, 1], [0, 3]]);
    println!("F is a dilation: {}", is_integer_dilation(&f)?);
    let r = reduce_general_f(&f)?;
    println!("U F V = D with D =\n{}", r.d);
    for level in replicate_remark(&f)? {
        println!(
            "k = {}: reduced ker {} coker {}, direct ker {} coker {}, agree: {}",
            level.k,
            level.reduced.0,
            level.reduced.1,
            level.direct.0,
            level.direct.1,
            level.agrees()
        );
    }
    Ok(())
}
