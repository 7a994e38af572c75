//! Smith normal form over the integers, with both transforms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::abgroup::FinGenAbGroup;
use crate::linalg::IntMatrix;

/// `u * input * v == d`, with `u`, `v` unimodular and `d` diagonal,
/// nonnegative, and satisfying `d_1 | d_2 | ...` (zeros last).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub input: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal of `d`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.d.diagonal_entries()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Invariant factors `>= 2`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| *x > BigInt::one()).collect()
    }

    pub fn cokernel(&self) -> FinGenAbGroup {
        let free = self.input.rows() - self.rank();
        FinGenAbGroup::from_invariant_factors(free, self.invariant_factors())
            .expect("smith diagonal is a divisibility chain")
    }
}

struct Work {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            swap_rows(&mut self.a, i, j);
            if let Some(u) = &mut self.u {
                swap_rows(u, i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            swap_cols(&mut self.a, i, j);
            if let Some(v) = &mut self.v {
                swap_cols(v, i, j);
            }
        }
    }

    /// row[target] += q * row[src]
    fn add_row(&mut self, target: usize, src: usize, q: &BigInt) {
        add_row(&mut self.a, target, src, q);
        if let Some(u) = &mut self.u {
            add_row(u, target, src, q);
        }
    }

    /// col[target] += q * col[src]
    fn add_col(&mut self, target: usize, src: usize, q: &BigInt) {
        add_col(&mut self.a, target, src, q);
        if let Some(v) = &mut self.v {
            add_col(v, target, src, q);
        }
    }

    fn negate_row(&mut self, r: usize) {
        negate_row(&mut self.a, r);
        if let Some(u) = &mut self.u {
            negate_row(u, r);
        }
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols() {
        let x = -m.get(r, c);
        m.set(r, c, x);
    }
}

fn swap_rows(m: &mut IntMatrix, i: usize, j: usize) {
    for c in 0..m.cols() {
        let a = m.get(i, c).clone();
        let b = m.get(j, c).clone();
        m.set(i, c, b);
        m.set(j, c, a);
    }
}

fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
    for r in 0..m.rows() {
        let a = m.get(r, i).clone();
        let b = m.get(r, j).clone();
        m.set(r, i, b);
        m.set(r, j, a);
    }
}

fn add_row(m: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    for c in 0..m.cols() {
        let s = m.get(src, c);
        if !s.is_zero() {
            let x = m.get(target, c) + q * s;
            m.set(target, c, x);
        }
    }
}

fn add_col(m: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    for r in 0..m.rows() {
        let s = m.get(r, src);
        if !s.is_zero() {
            let x = m.get(r, target) + q * s;
            m.set(r, target, x);
        }
    }
}

/// Smallest-magnitude nonzero entry of the trailing block, first in row-major
/// order on ties.
fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for r in t..a.rows() {
        for c in t..a.cols() {
            let x = a.get(r, c);
            if x.is_zero() {
                continue;
            }
            let mag = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| mag < *b) {
                best = Some((r, c, mag));
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

pub fn smith_normal_form(input: &IntMatrix) -> SmithDecomposition {
    let w = reduce(Work {
        a: input.clone(),
        u: Some(IntMatrix::identity(input.rows())),
        v: Some(IntMatrix::identity(input.cols())),
    });
    SmithDecomposition { u: w.u.expect("tracked"), d: w.a, v: w.v.expect("tracked"), input: input.clone() }
}

fn reduce(mut w: Work) -> Work {
    let rows = w.a.rows();
    let cols = w.a.cols();
    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = find_pivot(&w.a, t) else {
                // trailing block is zero
                return w;
            };
            w.swap_rows(t, pr);
            w.swap_cols(t, pc);
            let pivot = w.a.get(t, t).clone();

            let mut clean = true;
            for i in t + 1..rows {
                let x = w.a.get(i, t);
                if x.is_zero() {
                    continue;
                }
                let q = -(x / &pivot);
                w.add_row(i, t, &q);
                clean &= w.a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let x = w.a.get(t, j);
                if x.is_zero() {
                    continue;
                }
                let q = -(x / &pivot);
                w.add_col(j, t, &q);
                clean &= w.a.get(t, j).is_zero();
            }
            if !clean {
                // a remainder smaller than the pivot is left; repick
                continue;
            }

            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(w.a.get(i, j) % &pivot).is_zero()));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
    }
    w
}

/// Rank and `Z^rows / a Z^cols`, without computing transforms.
pub fn rank_and_cokernel(a: &IntMatrix) -> (usize, FinGenAbGroup) {
    let diagonal: Vec<BigInt> = if a.is_diagonal() {
        (0..a.rows().min(a.cols())).map(|i| a.get(i, i).clone()).collect()
    } else {
        let w = reduce(Work { a: a.clone(), u: None, v: None });
        (0..a.rows().min(a.cols())).map(|i| w.a.get(i, i).clone()).collect()
    };
    let rank = diagonal.iter().filter(|x| !x.is_zero()).count();
    let coker =
        FinGenAbGroup::free(a.rows() - diagonal.len()).direct_sum(&FinGenAbGroup::from_cyclic_factors(&diagonal));
    (rank, coker)
}

pub fn rank(a: &IntMatrix) -> usize {
    rank_and_cokernel(a).0
}

/// Free rank of the kernel of `a : Z^cols -> Z^rows`.
pub fn kernel_rank(a: &IntMatrix) -> usize {
    a.cols() - rank(a)
}

/// `Z^rows / a Z^cols` in canonical form.
pub fn cokernel(a: &IntMatrix) -> FinGenAbGroup {
    rank_and_cokernel(a).1
}
