//! Dense matrices over the integers with exact arithmetic.
//!
//! Every entry is a [`BigInt`], so products, determinants and minors never
//! overflow. Indices are zero-based throughout; a "subset" of `{0, .., d-1}`
//! is passed as a strictly increasing slice.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape { rows, cols, len: entries.len() });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn scalar(n: usize, value: impl Into<BigInt>) -> Self {
        let v = value.into();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = v.clone();
        }
        m
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in diag.iter().enumerate() {
            m.entries[i * n + i] = v.clone().into();
        }
        m
    }

    /// Builds a matrix from nested rows of small integers. Panics on ragged input;
    /// meant for literals in tests and examples.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: r, cols: c, entries }
    }

    /// Fallible counterpart of [`IntMatrix::from_rows`] for parsed input.
    pub fn try_from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch(format!("ragged rows: expected {c} entries, got {}", row.len())));
            }
            entries.extend(row);
        }
        Ok(IntMatrix { rows: r, cols: c, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: impl Into<BigInt>) {
        self.entries[r * self.cols + c] = value.into();
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    /// Diagonal entries `m[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        IntMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| x * factor).collect() }
    }

    /// `1 - M` for square `M`.
    pub fn one_minus(&self) -> Result<Self> {
        self.require_square()?;
        let mut out = self.scale(&BigInt::from(-1));
        for i in 0..self.rows {
            out.entries[i * self.cols + i] += 1;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} minus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    /// Exact product `self * other`.
    pub fn mat_mul(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Submatrix on the given row and column indices, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        for &r in rows {
            if r >= self.rows {
                return Err(Error::IndexOutOfRange { index: r, bound: self.rows });
            }
        }
        for &c in cols {
            if c >= self.cols {
                return Err(Error::IndexOutOfRange { index: c, bound: self.cols });
            }
        }
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.get(r, c).clone());
            }
        }
        Ok(IntMatrix { rows: rows.len(), cols: cols.len(), entries })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        self.require_square()?;
        Ok(bareiss_det(self.entries.clone(), self.rows))
    }

    /// Determinant of the submatrix with rows `rows` and columns `cols`, both
    /// strictly increasing.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<BigInt> {
        if rows.len() != cols.len() {
            return Err(Error::DimensionMismatch(format!(
                "minor needs |J| = |I|, got {} and {}",
                rows.len(),
                cols.len()
            )));
        }
        check_increasing(rows)?;
        check_increasing(cols)?;
        minor_unordered(self, rows, cols)
    }

    /// The `k`-th exterior power: entry `(I, J)` is `minor(I, J)` with `I`, `J`
    /// running over the `k`-subsets in lexicographic order.
    pub fn exterior_power(&self, k: usize) -> Result<Self> {
        self.require_square()?;
        let index = SubsetIndex::new(self.rows, k)?;
        let n = index.len();
        let mut out = Self::zeros(n, n);
        if self.is_diagonal() {
            for (i, rows) in index.subsets().iter().enumerate() {
                out.entries[i * n + i] = rows.iter().map(|&r| self.get(r, r)).product();
            }
            return Ok(out);
        }
        for (i, rows) in index.subsets().iter().enumerate() {
            for (j, cols) in index.subsets().iter().enumerate() {
                out.entries[i * n + j] = minor_unordered(self, rows, cols)?;
            }
        }
        Ok(out)
    }

    /// True iff the matrix is square with determinant `+1` or `-1`.
    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.det()?.abs().is_one())
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        self.get(r, c)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    /// Nested-bracket form, e.g. `[[1,1],[0,1]]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (c, x) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn check_increasing(idx: &[usize]) -> Result<()> {
    if idx.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::NotIncreasing(idx.to_vec()))
    }
}

/// Minor kernel on arbitrary index tuples; alternating in the order of `rows`
/// and `cols`.
pub(crate) fn minor_unordered(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> Result<BigInt> {
    let sub = m.select(rows, cols)?;
    Ok(bareiss_det(sub.entries, rows.len()))
}

fn bareiss_det(mut a: Vec<BigInt>, n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                Some(i) => {
                    for c in 0..n {
                        a.swap(k * n + c, i * n + c);
                    }
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let lead = a[i * n + k].clone();
            for j in k + 1..n {
                let v = (&a[i * n + j] * &pivot - &lead * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
        }
        prev = pivot;
    }
    let d = a[n * n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// The `k`-subsets of `{0, .., d-1}` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetIndex {
    d: usize,
    k: usize,
    subsets: Vec<Vec<usize>>,
}

impl SubsetIndex {
    pub fn new(d: usize, k: usize) -> Result<Self> {
        if k > d {
            return Err(Error::LevelOutOfRange { k, d });
        }
        let mut subsets = Vec::new();
        let mut current: Vec<usize> = (0..k).collect();
        loop {
            subsets.push(current.clone());
            // advance the rightmost index that still has room
            let Some(i) = (0..k).rev().find(|&i| current[i] < d - k + i) else {
                break;
            };
            current[i] += 1;
            for j in i + 1..k {
                current[j] = current[j - 1] + 1;
            }
        }
        Ok(SubsetIndex { d, k, subsets })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.subsets[i]
    }

    pub fn position(&self, subset: &[usize]) -> Option<usize> {
        self.subsets.binary_search_by(|s| s.as_slice().cmp(subset)).ok()
    }

    /// Complement of the `i`-th subset, increasing.
    pub fn complement(&self, i: usize) -> Vec<usize> {
        let s = &self.subsets[i];
        (0..self.d).filter(|x| s.binary_search(x).is_err()).collect()
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        match acc.checked_mul(u128::from(n - i)) {
            Some(v) => acc = v / u128::from(i + 1),
            None => return u128::MAX,
        }
    }
    acc
}
