//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use quiverk::{FinGenAbGroup, IntMatrix};
use rand::Rng;

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.to_rows()
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let sub: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][c] * cofactor_det(&sub);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn minor_oracle(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    let sub: Vec<Vec<BigInt>> = rows.iter().map(|&r| cols.iter().map(|&c| m.get(r, c).clone()).collect()).collect();
    cofactor_det(&sub)
}

/// k-subsets of 0..d in lexicographic order, by recursion.
pub fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            go(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, d, k, &mut Vec::new(), &mut out);
    out
}

/// Compound matrix built entry by entry from cofactor minors.
pub fn compound_oracle(m: &IntMatrix, k: usize) -> IntMatrix {
    let subs = subsets(m.rows(), k);
    let rows = subs.iter().map(|i| subs.iter().map(|j| minor_oracle(m, i, j)).collect()).collect();
    IntMatrix::try_from_rows(rows).unwrap()
}

pub fn naive_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut out = IntMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let x: BigInt = (0..a.cols()).map(|k| a.get(i, k) * b.get(k, j)).sum();
            out.set(i, j, x);
        }
    }
    out
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Isomorphism invariant of `Z^free (+) (+) Z/|o|`: free rank plus the
/// sorted prime powers of every finite factor (`0` counts as `Z`).
pub fn elementary_divisors(free: usize, orders: &[BigInt]) -> (usize, BTreeMap<u64, Vec<u32>>) {
    let mut free = free;
    let mut map: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for o in orders {
        if o.is_zero() {
            free += 1;
            continue;
        }
        let n = o.abs().to_u64().expect("small test orders");
        for (p, e) in factor(n) {
            map.entry(p).or_default().push(e);
        }
    }
    for v in map.values_mut() {
        v.sort_unstable();
    }
    (free, map)
}

pub fn group_invariant(g: &FinGenAbGroup) -> (usize, BTreeMap<u64, Vec<u32>>) {
    elementary_divisors(g.free_rank(), g.torsion())
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_rows(&data)
}

/// Product of random elementary row operations, signs and swaps.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> IntMatrix {
    if n == 0 {
        return IntMatrix::identity(0);
    }
    let mut rows: Vec<Vec<BigInt>> = IntMatrix::identity(n).to_rows();
    if n < 2 {
        if rng.gen_bool(0.5) {
            rows[0][0] = big(-1);
        }
        return IntMatrix::try_from_rows(rows).unwrap();
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        match rng.gen_range(0..3) {
            0 => {
                let q = big(rng.gen_range(-2..=2));
                let src = rows[j].clone();
                for (x, s) in rows[i].iter_mut().zip(&src) {
                    *x += &q * s;
                }
            }
            1 => rows.swap(i, j),
            _ => {
                for x in rows[i].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
    }
    IntMatrix::try_from_rows(rows).unwrap()
}

/// Permutation matrix sending `e_i` to `e_{perm[i]}`.
pub fn permutation_matrix(perm: &[usize]) -> IntMatrix {
    let mut m = IntMatrix::zeros(perm.len(), perm.len());
    for (i, &p) in perm.iter().enumerate() {
        m.set(p, i, 1);
    }
    m
}

/// `Z^rows / a Z^cols` from determinantal divisors: `D_i` is the gcd of the
/// `i x i` minors and the invariant factors are `D_i / D_{i-1}`.
pub fn cokernel_oracle(a: &IntMatrix) -> FinGenAbGroup {
    use num_integer::Integer;
    let mut prev = BigInt::one();
    let mut factors = Vec::new();
    let mut r = 0;
    for i in 1..=a.rows().min(a.cols()) {
        let mut g = BigInt::zero();
        for rows in subsets(a.rows(), i) {
            for cols in subsets(a.cols(), i) {
                g = g.gcd(&minor_oracle(a, &rows, &cols));
            }
        }
        if g.is_zero() {
            break;
        }
        factors.push(&g / &prev);
        prev = g;
        r = i;
    }
    FinGenAbGroup::free(a.rows() - r).direct_sum(&FinGenAbGroup::from_cyclic_factors(&factors))
}

/// `C_k` for diagonal `F = diag(a)` straight from the definition
/// `C_k A_k = N B_k`, with `A_k` diagonal: `C_k[I][J] = N B_k[I][J] / a_J`.
pub fn level_matrix_oracle(a: &[i64], g: &IntMatrix, k: usize) -> IntMatrix {
    let d = a.len();
    let n: i64 = a.iter().product();
    let subs = subsets(d, k);
    let gt = g.transpose();
    let rows = subs
        .iter()
        .map(|i| {
            subs.iter()
                .map(|j| {
                    let a_j: i64 = j.iter().map(|&x| a[x]).product();
                    minor_oracle(&gt, i, j) * n / a_j
                })
                .collect()
        })
        .collect();
    IntMatrix::try_from_rows(rows).unwrap()
}

/// `(K0, K1)` assembled from oracle cokernels and kernel ranks.
pub fn k_groups_oracle(a: &[i64], g: &IntMatrix) -> (FinGenAbGroup, FinGenAbGroup) {
    let mut k0 = FinGenAbGroup::trivial();
    let mut k1 = FinGenAbGroup::trivial();
    for k in 0..=a.len() {
        let m = level_matrix_oracle(a, g, k).one_minus().unwrap();
        let coker = cokernel_oracle(&m);
        // square: kernel rank equals cokernel free rank
        let ker = FinGenAbGroup::free(coker.free_rank());
        if k % 2 == 0 {
            k0 = k0.direct_sum(&coker);
            k1 = k1.direct_sum(&ker);
        } else {
            k1 = k1.direct_sum(&coker);
            k0 = k0.direct_sum(&ker);
        }
    }
    (k0, k1)
}
