//! The monomial matrices Ω(z^m) and their determinants.

use num_bigint::BigInt;
use quiverk::kquiver::build_levels;
use quiverk::omega::{det_exponent, monomial_mat_mul, omega_monomial};
use quiverk::{IntMatrix, QuiverInput};

fn show(m: &quiverk::omega::MonomialMatrix) {
    for r in 0..m.size() {
        let row: Vec<String> = (0..m.size())
            .map(|c| match m.get(r, c) {
                None => "0".into(),
                Some(x) => {
                    let e: Vec<String> = x.exponent.iter().map(ToString::to_string).collect();
                    format!("{}x^({})", if x.sign < 0 { "-" } else { "" }, e.join(","))
                }
            })
            .collect();
        println!("  {}", row.join("  "));
    }
}

fn main() -> quiverk::Result<()> {
    let f = IntMatrix::diagonal(&[2, 3]);
    let g = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
    let e1 = [BigInt::from(1), BigInt::from(0)];
    let o = omega_monomial(&f, &g, &e1)?;
    println!("Ω(z_1):");
    show(&o);
    let square = monomial_mat_mul(&o, &o)?;
    assert_eq!(square, omega_monomial(&f, &g, &[BigInt::from(2), BigInt::from(0)])?);
    println!("Ω(z_1)^2 = Ω(z_1^2) = x^(Gᵀ e_1) · 1:");
    show(&square);

    let levels = build_levels(&QuiverInput::new(f.clone(), g.clone())?)?;
    println!("C_1 =\n{}", levels[1].c);
    for j in 0..2 {
        let e: Vec<BigInt> = (0..2).map(|i| BigInt::from((i == j) as i64)).collect();
        let det = det_exponent(&omega_monomial(&f, &g, &e)?)?;
        let e: Vec<String> = det.exponent.iter().map(ToString::to_string).collect();
        println!("det Ω(z_{}) = {:+} x^({})", j + 1, det.sign, e.join(","));
    }
    Ok(())
}
