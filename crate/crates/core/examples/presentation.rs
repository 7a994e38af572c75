//! Generators and relations for diagonal F.

use quiverk::cli::emit_presentation;
use quiverk::{IntMatrix, QuiverInput};

fn main() -> quiverk::Result<()> {
    for (f, g) in [
        (IntMatrix::from_rows(&[[2]]), IntMatrix::from_rows(&[[3]])),
        (IntMatrix::diagonal(&[2, 2]), IntMatrix::from_rows(&[[1, 1], [-1, 2]])),
    ] {
        let p = emit_presentation(&QuiverInput::new(f, g)?)?;
        println!("isometries: {}", p.isometries.join(", "));
        println!("unitaries: {}", p.unitaries.join(", "));
        for (id, rel) in &p.relations {
            println!("  ({id}) {rel}");
        }
        println!();
    }
    Ok(())
}
