//! K-groups of a few pairs `(F, G)`, with the per-level breakdown.

use quiverk::{k_groups, IntMatrix, QuiverInput};

fn main() -> quiverk::Result<()> {
    let cases = [
        ("F = [3], G = [4]", IntMatrix::from_rows(&[[3]]), IntMatrix::from_rows(&[[4]])),
        ("F = 1, G = 1 (d = 2)", IntMatrix::identity(2), IntMatrix::identity(2)),
        ("F = diag(2,3), G = [[1,1],[0,1]]", IntMatrix::diagonal(&[2, 3]), IntMatrix::from_rows(&[[1, 1], [0, 1]])),
    ];
    for (name, f, g) in cases {
        let r = k_groups(&QuiverInput::new(f, g)?)?;
        println!("{name}");
        println!("  K0 = {}", r.k0);
        println!("  K1 = {}", r.k1);
        for l in &r.levels {
            println!("    k={} size={} ker_rank={} coker={}", l.k, l.size, l.kernel_rank, l.cokernel);
        }
    }
    Ok(())
}
