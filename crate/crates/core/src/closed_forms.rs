//! Closed-form K-groups for special families, computed without going through
//! the general level engine. They serve as oracles against [`crate::k_groups`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::abgroup::FinGenAbGroup;
use crate::error::{Error, Result};
use crate::linalg::{binomial, IntMatrix, SubsetIndex};
use crate::smith::cokernel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub k0: FinGenAbGroup,
    pub k1: FinGenAbGroup,
    /// Which case of the closed form produced the answer.
    pub rule: String,
}

/// Outcome of a closed form that only covers part of the parameter space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coverage {
    Covered(ClosedForm),
    NotCovered(String),
}

impl Coverage {
    pub fn covered(&self) -> Option<&ClosedForm> {
        match self {
            Coverage::Covered(c) => Some(c),
            Coverage::NotCovered(_) => None,
        }
    }
}

fn covered(k0: FinGenAbGroup, k1: FinGenAbGroup, rule: impl Into<String>) -> Coverage {
    Coverage::Covered(ClosedForm { k0, k1, rule: rule.into() })
}

/// `coker(1 - n^{d-k} Λ^k(Gᵀ))`.
fn scalar_level_cokernel(n: &BigInt, g: &IntMatrix, k: usize) -> Result<FinGenAbGroup> {
    let d = g.rows();
    let scale = Pow::pow(n, (d - k) as u32);
    let c = g.transpose().exterior_power(k)?.scale(&scale);
    Ok(cokernel(&c.one_minus()?))
}

fn sum_cokernels(n: &BigInt, g: &IntMatrix, ks: impl Iterator<Item = usize>) -> Result<FinGenAbGroup> {
    ks.map(|k| scalar_level_cokernel(n, g, k)).collect::<Result<Vec<_>>>().map(|v| v.into_iter().sum())
}

/// K-groups for `F = n·1_d`.
///
/// Covered: `d > 1, n > 1`; `n = 1` with `G` an integer dilation; `d = 1`
/// unless `n = m = 1`.
pub fn alg2_kgroups(n: &BigInt, g: &IntMatrix) -> Result<Coverage> {
    if !g.is_square() {
        return Err(Error::NotSquare { rows: g.rows(), cols: g.cols() });
    }
    if !n.is_positive() {
        return Err(Error::SingularInput(format!("n = {n} must be positive")));
    }
    let d = g.rows();
    let det_g = g.det()?;
    if det_g.is_zero() {
        return Err(Error::SingularInput("det G = 0".into()));
    }
    let one = BigInt::one();
    let z = FinGenAbGroup::free(1);

    if d == 1 {
        let m = g.get(0, 0);
        let n_less = n - &one;
        let m_less = m - &one;
        return Ok(match (n > &one, m != &one) {
            (true, true) => {
                covered(FinGenAbGroup::cyclic(n_less), FinGenAbGroup::cyclic(m_less), "d = 1, n > 1, m != 1")
            }
            (false, true) => covered(z.clone(), z.direct_sum(&FinGenAbGroup::cyclic(m_less)), "d = 1, n = 1, m != 1"),
            (true, false) => covered(z.direct_sum(&FinGenAbGroup::cyclic(n_less)), z, "d = 1, n > 1, m = 1"),
            (false, false) => Coverage::NotCovered("d = 1, n = m = 1".into()),
        });
    }

    let even = |k: &usize| (*k).is_multiple_of(2);
    let odd = |k: &usize| k % 2 == 1;
    if n > &one {
        if det_g != one {
            let k0 = sum_cokernels(n, g, (0..=d).filter(even))?;
            let k1 = sum_cokernels(n, g, (0..=d).filter(odd))?;
            Ok(covered(k0, k1, "F = n·1, d > 1, n > 1, det G != 1"))
        } else {
            let k0 = z.direct_sum(&sum_cokernels(n, g, (0..d).filter(even))?);
            let k1 = z.direct_sum(&sum_cokernels(n, g, (0..d).filter(odd))?);
            Ok(covered(k0, k1, "F = n·1, d > 1, n > 1, det G = 1"))
        }
    } else if is_integer_dilation(g)? {
        let k0 = z.direct_sum(&sum_cokernels(n, g, (1..=d).filter(even))?);
        let k1 = z.direct_sum(&sum_cokernels(n, g, (1..=d).filter(odd))?);
        Ok(covered(k0, k1, "F = 1, G an integer dilation"))
    } else {
        Ok(Coverage::NotCovered("F = 1 and G is not an integer dilation".into()))
    }
}

/// Coefficients `c_0, .., c_{d-1}, 1` (ascending) of `det(λ - M)`, by
/// Faddeev-LeVerrier. Every division is exact.
pub fn characteristic_polynomial(m: &IntMatrix) -> Result<Vec<BigInt>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let d = m.rows();
    let mut coeffs = vec![BigInt::zero(); d + 1];
    coeffs[d] = BigInt::one();
    let mut acc = IntMatrix::zeros(d, d);
    for k in 1..=d {
        // acc_k = M acc_{k-1} + c_{d-k+1} I
        let mut next = m.mat_mul(&acc)?;
        for i in 0..d {
            let x = next.get(i, i) + &coeffs[d - k + 1];
            next.set(i, i, x);
        }
        let product = m.mat_mul(&next)?;
        let trace: BigInt = (0..d).map(|i| product.get(i, i).clone()).sum();
        coeffs[d - k] = -(trace / BigInt::from(k));
        acc = next;
    }
    Ok(coeffs)
}

/// All roots strictly inside the unit disk (Schur-Cohn recursion).
fn schur_stable(poly: &[BigInt]) -> bool {
    let mut q: Vec<BigInt> = poly.to_vec();
    while q.len() > 1 && q.last().is_some_and(Zero::is_zero) {
        q.pop();
    }
    loop {
        let n = q.len() - 1;
        if n == 0 {
            return !q[0].is_zero();
        }
        let lead = q[n].clone();
        let constant = q[0].clone();
        if constant.abs() >= lead.abs() {
            return false;
        }
        // (lead q - constant q*) / z; the reversal q* has coefficients q[n - i]
        q = (1..=n).map(|i| &lead * &q[i] - &constant * &q[n - i]).collect();
    }
}

/// Whether every eigenvalue of `g` has modulus `> 1`, decided exactly.
pub fn is_integer_dilation(g: &IntMatrix) -> Result<bool> {
    let p = characteristic_polynomial(g)?;
    if p[0].is_zero() {
        return Ok(false);
    }
    // roots of the reversal are the reciprocal eigenvalues
    let reversed: Vec<BigInt> = p.into_iter().rev().collect();
    Ok(schur_stable(&reversed))
}

/// K-groups for `d = 2`, `F = 1`, with `1` not an eigenvalue of `g`.
pub fn corollary_d2(g: &IntMatrix) -> Result<ClosedForm> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::DimensionMismatch(format!("expected 2x2, got {}x{}", g.rows(), g.cols())));
    }
    let det_g = g.det()?;
    if det_g.is_zero() {
        return Err(Error::SingularInput("det G = 0".into()));
    }
    let one_minus_gt = g.transpose().one_minus()?;
    if one_minus_gt.det()?.is_zero() {
        return Err(Error::EigenvalueOne);
    }
    let coker = cokernel(&one_minus_gt);
    Ok(if det_g.is_one() {
        ClosedForm {
            k0: FinGenAbGroup::free(2),
            k1: FinGenAbGroup::free(2).direct_sum(&coker),
            rule: "d = 2, F = 1, det G = 1".into(),
        }
    } else {
        let z = FinGenAbGroup::free(1);
        ClosedForm {
            k0: z.direct_sum(&FinGenAbGroup::cyclic(BigInt::one() - det_g)),
            k1: z.direct_sum(&coker),
            rule: "d = 2, F = 1, det G != 1".into(),
        }
    })
}

/// Ways to choose `k` of `p` ones and `v` minus-ones with product `+1`.
pub fn p_count(k: usize, p: usize, v: usize) -> u128 {
    signed_count(k, p, v, 0)
}

/// Ways to choose `k` of `p` ones and `v` minus-ones with product `-1`.
pub fn v_count(k: usize, p: usize, v: usize) -> u128 {
    signed_count(k, p, v, 1)
}

fn signed_count(k: usize, p: usize, v: usize, parity: usize) -> u128 {
    (parity..=k.min(v))
        .step_by(2)
        .filter(|&neg| k - neg <= p)
        .map(|neg| binomial(v as u64, neg as u64) * binomial(p as u64, (k - neg) as u64))
        .sum()
}

/// Combinatorial data of a diagonal pair, after sorting coordinates by `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalCaseData {
    pub d: usize,
    /// Number of `a_i = 1`.
    pub f: usize,
    /// `+1`s among the `b_i` with `a_i = 1`.
    pub p: usize,
    /// `-1`s among the `b_i` with `a_i = 1`.
    pub v: usize,
    /// Product of the `b_i` with `a_i > 1` when all of them are `+-1`.
    pub tail_sign: Option<i8>,
    /// `d_k` from the counting formula.
    pub d_k: Vec<u128>,
    /// `d_k` as the number of `I` with `b_I a_{I'} = 1`.
    pub d_k_brute: Vec<u128>,
}

impl DiagonalCaseData {
    pub fn new(a: &[BigInt], b: &[BigInt]) -> Result<Self> {
        let (a, b) = sorted_pairs(a, b)?;
        let d = a.len();
        let f = a.iter().take_while(|x| x.is_one()).count();
        let one = BigInt::one();
        let minus_one = -BigInt::one();
        let p = b[..f].iter().filter(|x| **x == one).count();
        let v = b[..f].iter().filter(|x| **x == minus_one).count();
        let tail_sign = b[f..].iter().try_fold(1i8, |acc, x| {
            if *x == one {
                Some(acc)
            } else if *x == minus_one {
                Some(-acc)
            } else {
                None
            }
        });
        let d_k = (0..=d)
            .map(|k| match (k.checked_sub(d - f), tail_sign) {
                (Some(kk), Some(1)) => p_count(kk, p, v),
                (Some(kk), Some(_)) => v_count(kk, p, v),
                _ => 0,
            })
            .collect();
        let d_k_brute = (0..=d)
            .map(|k| diagonal_level_entries(&a, &b, k).map(|c| c.iter().filter(|x| x.is_one()).count() as u128))
            .collect::<Result<_>>()?;
        Ok(DiagonalCaseData { d, f, p, v, tail_sign, d_k, d_k_brute })
    }

    /// `sum_k d_k` evaluated by the closed forms of the counting lemma.
    pub fn free_rank_closed(&self) -> u128 {
        let (p, v) = (self.p as u32, self.v as u32);
        match (self.tail_sign, v) {
            (None, _) => 0,
            (Some(1), 0) => 2u128.pow(p),
            (Some(_), 0) => 0,
            (Some(_), _) => 2u128.pow(p + v - 1),
        }
    }
}

fn sorted_pairs(a: &[BigInt], b: &[BigInt]) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} diagonal entries", a.len(), b.len())));
    }
    if let Some(x) = a.iter().find(|x| !x.is_positive()) {
        return Err(Error::NotPositiveDiagonal(format!("entry {x}")));
    }
    if b.iter().any(Zero::is_zero) {
        return Err(Error::SingularInput("det G = 0".into()));
    }
    let mut pairs: Vec<(BigInt, BigInt)> = a.iter().cloned().zip(b.iter().cloned()).collect();
    pairs.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(pairs.into_iter().unzip())
}

/// `b_I a_{I'}` for every `k`-subset `I`, in lexicographic order.
fn diagonal_level_entries(a: &[BigInt], b: &[BigInt], k: usize) -> Result<Vec<BigInt>> {
    let index = SubsetIndex::new(a.len(), k)?;
    Ok((0..index.len())
        .map(|i| {
            let bi: BigInt = index.get(i).iter().map(|&j| b[j].clone()).product();
            let ai: BigInt = index.complement(i).iter().map(|&j| a[j].clone()).product();
            bi * ai
        })
        .collect())
}

fn diagonal_torsion(a: &[BigInt], b: &[BigInt], ks: impl Iterator<Item = usize>) -> Result<FinGenAbGroup> {
    let mut orders = Vec::new();
    for k in ks {
        for c in diagonal_level_entries(a, b, k)? {
            if !c.is_one() {
                orders.push(BigInt::one() - c);
            }
        }
    }
    Ok(FinGenAbGroup::from_cyclic_factors(&orders))
}

/// K-groups for diagonal `F = diag(a)` with `a_i >= 1` and diagonal
/// `G = diag(b)`, by the four-case formula on `(p, v)`.
///
/// In the case `p = 0, v > 0` the free rank is taken as `2^{v-1} - 1`, which
/// can disagree with the engine; torsion is split by level parity as in the
/// other cases.
pub fn diag_kgroups(f: &IntMatrix, g: &IntMatrix) -> Result<ClosedForm> {
    if !f.is_square() || !g.is_square() || f.rows() != g.rows() {
        return Err(Error::DimensionMismatch("F and G must be square of equal size".into()));
    }
    if !f.is_diagonal() || !g.is_diagonal() {
        return Err(Error::StructureViolation("F and G must both be diagonal".into()));
    }
    let data = DiagonalCaseData::new(&f.diagonal_entries(), &g.diagonal_entries())?;
    let (a, b) = sorted_pairs(&f.diagonal_entries(), &g.diagonal_entries())?;
    let d = data.d;
    let even_torsion = diagonal_torsion(&a, &b, (0..=d).step_by(2))?;
    let odd_torsion = diagonal_torsion(&a, &b, (1..=d).step_by(2))?;

    let (free, k0_torsion, rule) = if data.f == 0 {
        (data.free_rank_closed(), even_torsion, "diagonal, f = 0")
    } else {
        match (data.p, data.v) {
            (0, 0) => (data.free_rank_closed(), even_torsion, "diagonal, p = 0, v = 0"),
            (0, v) => (2u128.pow(v as u32 - 1) - 1, even_torsion, "diagonal, p = 0, v > 0"),
            (_, 0) => (data.free_rank_closed(), even_torsion, "diagonal, p > 0, v = 0"),
            _ => (data.free_rank_closed(), even_torsion, "diagonal, p > 0, v > 0"),
        }
    };
    let free = FinGenAbGroup::free(free as usize);
    Ok(ClosedForm { k0: free.direct_sum(&k0_torsion), k1: free.direct_sum(&odd_torsion), rule: rule.into() })
}

/// Closed form for `F = n·1_d`, `G = m·1_d`, with `Z/0` read as `Z`.
pub fn scalar_corollary(n: &BigInt, m: &BigInt, d: usize) -> Result<ClosedForm> {
    if !n.is_positive() || m.is_zero() {
        return Err(Error::SingularInput(format!("n = {n}, m = {m}")));
    }
    let one = BigInt::one();
    if n.is_one() && m.is_one() {
        let z = FinGenAbGroup::free(1usize << d);
        return Ok(ClosedForm { k0: z.clone(), k1: z, rule: "n = m = 1".into() });
    }
    if n.is_one() && *m == -&one {
        let half = 1usize << (d - 1);
        let g = FinGenAbGroup::free(half).direct_sum(&FinGenAbGroup::from_cyclic_factors(&vec![2; half]));
        return Ok(ClosedForm { k0: g.clone(), k1: g, rule: "n = 1, m = -1".into() });
    }
    let mut k0 = Vec::new();
    let mut k1 = Vec::new();
    for k in 0..=d {
        let order = &one - Pow::pow(n, (d - k) as u32) * Pow::pow(m, k as u32);
        let copies = binomial(d as u64, k as u64) as usize;
        let target = if k.is_even() { &mut k0 } else { &mut k1 };
        target.extend(std::iter::repeat_n(order, copies));
    }
    Ok(ClosedForm {
        k0: FinGenAbGroup::from_cyclic_factors(&k0),
        k1: FinGenAbGroup::from_cyclic_factors(&k1),
        rule: "n > 1 or |m| != 1".into(),
    })
}
