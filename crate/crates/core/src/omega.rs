//! The homomorphism `Ω : C(T^d) -> M_N(C(T^d))` on Laurent monomials, for
//! positive diagonal `F = diag(a)`.
//!
//! With basis `u_ν(x, y) = y^ν`, `0 <= ν_j < a_j`, and left action
//! `(z^m · ξ)(x, y) = y^m ξ(x, y)`, the entry `(ν, μ)` of `Ω(z^m)` is
//!
//! ```text
//! <u_ν, z^m u_μ>(x) = 1/N · sum_{y^a = σ_G(x)} y^t,    t = m + μ - ν.
//! ```
//!
//! Writing each solution as `y_j = w_j ζ_j` with `w_j^{a_j} = σ_G(x)_j` and
//! `ζ_j` an `a_j`-th root of unity, the sum factors over `j`. The sum of
//! `ζ^{t_j}` over the `a_j`-th roots of unity is `a_j` when `a_j | t_j` and `0`
//! otherwise. So the entry vanishes unless `a | t` componentwise, and then
//! equals `w^t = σ_G(x)^s = x^{Gᵀ s}` with `s = F⁻¹ t`. For each row `ν`
//! exactly one column qualifies: `μ_j = (ν_j - m_j) mod a_j`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kquiver::{is_positive_diagonal, IdentityCheck, IdentityReport, LevelMatrices};
use crate::linalg::IntMatrix;

/// A point of `{ν : 0 <= ν_j < a_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(nu: Vec<usize>, a: &[usize]) -> Result<Self> {
        if nu.len() != a.len() {
            return Err(Error::DimensionMismatch(format!("{} components for {} bounds", nu.len(), a.len())));
        }
        if let Some((&x, &bound)) = nu.iter().zip(a).find(|(x, b)| **x >= **b) {
            return Err(Error::IndexOutOfRange { index: x, bound });
        }
        Ok(MultiIndex(nu))
    }

    /// All multi-indices for bounds `a`, in lexicographic order.
    pub fn all(a: &[usize]) -> Vec<MultiIndex> {
        let total: usize = a.iter().product();
        (0..total).map(|i| MultiIndex(unrank(i, a))).collect()
    }

    /// Lexicographic rank among [`MultiIndex::all`].
    pub fn rank(&self, a: &[usize]) -> usize {
        self.0.iter().zip(a).fold(0, |acc, (x, b)| acc * b + x)
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }
}

fn unrank(mut i: usize, a: &[usize]) -> Vec<usize> {
    let mut nu = vec![0; a.len()];
    for j in (0..a.len()).rev() {
        nu[j] = i % a[j];
        i /= a[j];
    }
    nu
}

/// `sign · x^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub sign: i8,
    pub exponent: Vec<BigInt>,
}

impl Monomial {
    pub fn one(d: usize) -> Self {
        Monomial { sign: 1, exponent: vec![BigInt::zero(); d] }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            sign: self.sign * other.sign,
            exponent: self.exponent.iter().zip(&other.exponent).map(|(x, y)| x + y).collect(),
        }
    }
}

/// Square matrix whose entries are `0` or `±x^t`, `t ∈ Z^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    size: usize,
    d: usize,
    entries: Vec<Option<Monomial>>,
}

impl MonomialMatrix {
    pub fn zeros(size: usize, d: usize) -> Self {
        MonomialMatrix { size, d, entries: vec![None; size * size] }
    }

    pub fn identity(size: usize, d: usize) -> Self {
        let mut m = Self::zeros(size, d);
        for i in 0..size {
            m.set(i, i, Some(Monomial::one(d)));
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Monomial> {
        self.entries[r * self.size + c].as_ref()
    }

    pub fn set(&mut self, r: usize, c: usize, value: Option<Monomial>) {
        self.entries[r * self.size + c] = value;
    }

    /// The common entry when the matrix is `x^t · 1`.
    pub fn scalar_value(&self) -> Option<&Monomial> {
        let first = self.get(0, 0)?;
        for r in 0..self.size {
            for c in 0..self.size {
                let ok = match self.get(r, c) {
                    Some(m) => r == c && m == first,
                    None => r != c,
                };
                if !ok {
                    return None;
                }
            }
        }
        Some(first)
    }

    /// Column of the unique nonzero entry in each row.
    fn permutation(&self) -> Result<Vec<usize>> {
        let mut perm = Vec::with_capacity(self.size);
        let mut seen = vec![false; self.size];
        for r in 0..self.size {
            let cols: Vec<usize> = (0..self.size).filter(|&c| self.get(r, c).is_some()).collect();
            let [c] = cols[..] else {
                return Err(Error::StructureViolation(format!("row {r} has {} nonzero entries", cols.len())));
            };
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::StructureViolation(format!("column {c} has several nonzero entries")));
            }
            perm.push(c);
        }
        Ok(perm)
    }
}

/// `Ω(z^m)` for `F = diag(a)`, rows and columns indexed by [`MultiIndex::all`].
pub fn omega_monomial(f: &IntMatrix, g: &IntMatrix, m: &[BigInt]) -> Result<MonomialMatrix> {
    if !is_positive_diagonal(f) {
        return Err(Error::NotPositiveDiagonal(f.to_string()));
    }
    let d = f.rows();
    if g.rows() != d || g.cols() != d || m.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "F is {d}x{d}, G is {}x{}, m has {}",
            g.rows(),
            g.cols(),
            m.len()
        )));
    }
    let a: Vec<BigInt> = f.diagonal_entries();
    let bounds = bounds(f)?;
    let gt = g.transpose();
    let mut out = MonomialMatrix::zeros(bounds.iter().product(), d);
    for nu in MultiIndex::all(&bounds) {
        let mut mu = Vec::with_capacity(d);
        let mut s = Vec::with_capacity(d);
        for j in 0..d {
            let nu_j = BigInt::from(nu.0[j]);
            let mu_j = (&nu_j - &m[j]).mod_floor(&a[j]);
            let t = &m[j] + &mu_j - &nu_j;
            s.push(t / &a[j]);
            mu.push(mu_j.to_usize().expect("residue below a_j"));
        }
        let exponent = (0..d).map(|i| (0..d).map(|k| gt.get(i, k) * &s[k]).sum()).collect();
        let col = MultiIndex(mu).rank(&bounds);
        out.set(nu.rank(&bounds), col, Some(Monomial { sign: 1, exponent }));
    }
    Ok(out)
}

fn bounds(f: &IntMatrix) -> Result<Vec<usize>> {
    f.diagonal_entries()
        .iter()
        .map(|x| x.to_usize().ok_or(Error::CapacityExceeded { needed: u128::MAX, limit: usize::MAX as u128 }))
        .collect()
}

/// Exact product of monomial matrices; fails where an entry would be a sum.
pub fn monomial_mat_mul(a: &MonomialMatrix, b: &MonomialMatrix) -> Result<MonomialMatrix> {
    if a.size != b.size || a.d != b.d {
        return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", a.size, a.size, b.size, b.size)));
    }
    let mut out = MonomialMatrix::zeros(a.size, a.d);
    for i in 0..a.size {
        for k in 0..a.size {
            let Some(x) = a.get(i, k) else { continue };
            for j in 0..a.size {
                let Some(y) = b.get(k, j) else { continue };
                if out.get(i, j).is_some() {
                    return Err(Error::StructureViolation(format!("entry ({i}, {j}) is a sum of monomials")));
                }
                out.set(i, j, Some(x.mul(y)));
            }
        }
    }
    Ok(out)
}

/// Determinant of a generalized permutation matrix as `±x^t`.
pub fn det_exponent(m: &MonomialMatrix) -> Result<Monomial> {
    let perm = m.permutation()?;
    let mut det = Monomial::one(m.d);
    for (r, &c) in perm.iter().enumerate() {
        det = det.mul(m.get(r, c).expect("nonzero by construction"));
    }
    det.sign *= permutation_sign(&perm);
    Ok(det)
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn unit(d: usize, j: usize, value: i64) -> Vec<BigInt> {
    (0..d).map(|i| BigInt::from(if i == j { value } else { 0 })).collect()
}

/// Ω consistency checks for a positive diagonal `F`: unitality,
/// multiplicativity on `±e_j`, `Ω(F e_j) = x^{Gᵀ e_j} · 1`, and the
/// determinant of `Ω(e_j)` against column `j` of `C_1`.
pub fn check_omega(f: &IntMatrix, g: &IntMatrix, levels: &[LevelMatrices]) -> Result<IdentityReport> {
    let d = f.rows();
    let size: usize = bounds(f)?.iter().product();
    let mut checks = Vec::new();
    let mut push = |name: String, passed: bool, detail: String| checks.push(IdentityCheck { name, passed, detail });

    let zero = omega_monomial(f, g, &vec![BigInt::zero(); d])?;
    push("Ω(1) = 1".into(), zero == MonomialMatrix::identity(size, d), String::new());

    let mut omegas = Vec::new();
    for j in 0..d {
        omegas.push((unit(d, j, 1), omega_monomial(f, g, &unit(d, j, 1))?));
        omegas.push((unit(d, j, -1), omega_monomial(f, g, &unit(d, j, -1))?));
    }
    let mut failures = Vec::new();
    for (m1, o1) in &omegas {
        for (m2, o2) in &omegas {
            let sum: Vec<BigInt> = m1.iter().zip(m2).map(|(x, y)| x + y).collect();
            let ok = monomial_mat_mul(o1, o2).ok() == Some(omega_monomial(f, g, &sum)?);
            if !ok {
                failures.push(format!("{m1:?} + {m2:?}"));
            }
        }
    }
    push("Ω(z^m) Ω(z^m') = Ω(z^(m+m'))".into(), failures.is_empty(), failures.join("; "));

    let c1 = levels.iter().find(|l| l.k == 1).map(|l| &l.c);
    let n = BigInt::from(size);
    for j in 0..d {
        let a_j = f.get(j, j);
        let fe: Vec<BigInt> = unit(d, j, 1).into_iter().map(|x| x * a_j).collect();
        let expected = Monomial { sign: 1, exponent: (0..d).map(|i| g.get(j, i).clone()).collect() };
        let lemma = omega_monomial(f, g, &fe)?;
        push(
            format!("Ω(z^(F e_{})) = x^(Gᵀ e_{}) · 1", j + 1, j + 1),
            lemma.scalar_value() == Some(&expected),
            String::new(),
        );

        let det = det_exponent(&omegas[2 * j].1)?;
        let cycles = &n / a_j;
        let sign = if ((a_j - BigInt::one()) * &cycles).is_even() { 1 } else { -1 };
        let column: Option<Vec<BigInt>> = c1.map(|c| (0..d).map(|i| c.get(i, j).clone()).collect());
        let ok = det.sign == sign && Some(&det.exponent) == column.as_ref();
        push(
            format!("det Ω(z_{}) = ±x^(C_1 e_{})", j + 1, j + 1),
            ok,
            format!(
                "sign {}, exponent ({})",
                det.sign,
                det.exponent.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
            ),
        );
    }
    Ok(IdentityReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kquiver::{build_levels, QuiverInput};

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn mono(sign: i8, exps: &[i64]) -> Option<Monomial> {
        Some(Monomial { sign, exponent: ints(exps) })
    }

    #[test]
    fn multi_index_order() {
        let all = MultiIndex::all(&[2, 3]);
        assert_eq!(all.len(), 6);
        assert_eq!(all[1].components(), &[0, 1]);
        assert_eq!(all[3].components(), &[1, 0]);
        for (i, nu) in all.iter().enumerate() {
            assert_eq!(nu.rank(&[2, 3]), i);
        }
        assert!(MultiIndex::new(vec![2, 0], &[2, 3]).is_err());
    }

    #[test]
    fn zero_exponent_is_identity() {
        let f = IntMatrix::diagonal(&[2, 3]);
        let g = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
        assert_eq!(omega_monomial(&f, &g, &ints(&[0, 0])).unwrap(), MonomialMatrix::identity(6, 2));
    }

    #[test]
    fn d1_companion_shape() {
        let n = 4;
        let f = IntMatrix::diagonal(&[n]);
        let g = IntMatrix::diagonal(&[5]);
        let o = omega_monomial(&f, &g, &ints(&[1])).unwrap();
        for i in 0..n as usize {
            for j in 0..n as usize {
                let expected = if i == j + 1 {
                    mono(1, &[0])
                } else if (i, j) == (0, n as usize - 1) {
                    mono(1, &[5])
                } else {
                    None
                };
                assert_eq!(o.get(i, j), expected.as_ref(), "({i}, {j})");
            }
        }
        let det = det_exponent(&o).unwrap();
        assert_eq!(det.exponent, ints(&[5]));
        // a 4-cycle is odd
        assert_eq!(det.sign, -1);
    }

    #[test]
    fn square_of_generator_d1() {
        let f = IntMatrix::diagonal(&[2]);
        let g = IntMatrix::diagonal(&[3]);
        let o1 = omega_monomial(&f, &g, &ints(&[1])).unwrap();
        let sq = monomial_mat_mul(&o1, &o1).unwrap();
        assert_eq!(sq, omega_monomial(&f, &g, &ints(&[2])).unwrap());
        assert_eq!(sq.scalar_value(), mono(1, &[3]).as_ref());
    }

    #[test]
    fn rejects_bad_input() {
        let g = IntMatrix::identity(2);
        let f = IntMatrix::from_rows(&[[2, 1], [0, 3]]);
        assert!(matches!(omega_monomial(&f, &g, &ints(&[0, 0])), Err(Error::NotPositiveDiagonal(_))));
        let f = IntMatrix::diagonal(&[2, 3]);
        assert!(omega_monomial(&f, &g, &ints(&[0])).is_err());
    }

    #[test]
    fn product_detects_sums() {
        let mut a = MonomialMatrix::identity(2, 1);
        a.set(0, 1, mono(1, &[1]));
        assert!(matches!(monomial_mat_mul(&a, &a), Err(Error::StructureViolation(_))));
        assert!(matches!(det_exponent(&a), Err(Error::StructureViolation(_))));
        let z = MonomialMatrix::zeros(2, 1);
        assert!(det_exponent(&z).is_err());
    }

    #[test]
    fn identity_det_and_product() {
        let id = MonomialMatrix::identity(3, 2);
        assert_eq!(det_exponent(&id).unwrap(), Monomial::one(2));
        let f = IntMatrix::diagonal(&[3]);
        let g = IntMatrix::diagonal(&[-2]);
        let o = omega_monomial(&f, &g, &ints(&[2])).unwrap();
        assert_eq!(monomial_mat_mul(&o, &MonomialMatrix::identity(3, 1)).unwrap(), o);
    }

    #[test]
    fn checks_pass_on_worked_example() {
        let f = IntMatrix::diagonal(&[2, 3]);
        let g = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
        let input = QuiverInput::new(f.clone(), g.clone()).unwrap();
        let levels = build_levels(&input).unwrap();
        let report = check_omega(&f, &g, &levels).unwrap();
        assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
    }
}
