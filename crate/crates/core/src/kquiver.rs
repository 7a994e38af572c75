//! K-groups of the Cuntz-Pimsner algebra `O_{F,G}(T^d)`.
//!
//! For each level `k = 0..=d` the maps induced on `Λ^k Z^d` are
//!
//! * `A_k = Λ^k(Fᵀ)` (from `σ_F`),
//! * `B_k = Λ^k(Gᵀ)` (from `σ_G`),
//! * `C_k`, the transfer map, determined by `C_k A_k = N B_k` with `N = det F`.
//!
//! For `F = diag(a_1, .., a_d)` this gives `C_k = B_k · diag(a_{I'})`, where
//! `I'` is the complement of the subset `I` indexing the column. Then
//!
//! ```text
//! K0 = (+)_{k even} coker(1 - C_k)  (+)  (+)_{k odd}  ker(1 - C_k)
//! K1 = (+)_{k odd}  coker(1 - C_k)  (+)  (+)_{k even} ker(1 - C_k)
//! ```
//!
//! Non-diagonal `F` is accepted only behind [`InputOptions::allow_general_f`];
//! `C_k` is then the exact rational solution of `C_k A_k = N B_k`, required to
//! be integral. That regime is outside what the diagonal theory covers and is
//! flagged in [`KGroupsResult::warnings`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::abgroup::FinGenAbGroup;
use crate::error::{Error, Result};
use crate::linalg::{binomial, IntMatrix, SubsetIndex};
use crate::smith::{rank_and_cokernel, smith_normal_form};

pub const DEFAULT_MAX_BINOMIAL: u128 = 1_000_000;

pub const GENERAL_F_WARNING: &str =
    "extension beyond proved scope: F is not positive diagonal; C_k solved exactly from C_k A_k = N B_k";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputOptions {
    pub allow_general_f: bool,
    /// Inputs with `binomial(d, d/2)` above this are rejected.
    pub max_binomial: u128,
}

impl Default for InputOptions {
    fn default() -> Self {
        InputOptions { allow_general_f: false, max_binomial: DEFAULT_MAX_BINOMIAL }
    }
}

/// A validated pair `(F, G)` of `d x d` integer matrices with nonzero
/// determinants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverInput {
    f: IntMatrix,
    g: IntMatrix,
    f_diagonal: bool,
    det_f: BigInt,
    det_g: BigInt,
    general_f: bool,
}

impl QuiverInput {
    /// Positive diagonal `F` only.
    pub fn new(f: IntMatrix, g: IntMatrix) -> Result<Self> {
        Self::with_options(f, g, InputOptions::default())
    }

    pub fn with_options(f: IntMatrix, g: IntMatrix, opts: InputOptions) -> Result<Self> {
        if !f.is_square() {
            return Err(Error::NotSquare { rows: f.rows(), cols: f.cols() });
        }
        if !g.is_square() {
            return Err(Error::NotSquare { rows: g.rows(), cols: g.cols() });
        }
        let d = f.rows();
        if g.rows() != d {
            return Err(Error::DimensionMismatch(format!("F is {d}x{d} but G is {0}x{0}", g.rows())));
        }
        if d == 0 {
            return Err(Error::DimensionMismatch("dimension must be at least 1".into()));
        }
        let needed = binomial(d as u64, d as u64 / 2);
        if needed > opts.max_binomial {
            return Err(Error::CapacityExceeded { needed, limit: opts.max_binomial });
        }
        let det_f = f.det()?;
        if det_f.is_zero() {
            return Err(Error::SingularInput("det F = 0".into()));
        }
        let det_g = g.det()?;
        if det_g.is_zero() {
            return Err(Error::SingularInput("det G = 0".into()));
        }
        let f_diagonal = is_positive_diagonal(&f);
        if !f_diagonal && !opts.allow_general_f {
            return Err(Error::NotPositiveDiagonal(format!(
                "{f} is not of the form diag(a_1..a_d) with a_j >= 1; pass --general-f to opt in"
            )));
        }
        Ok(QuiverInput { f, g, f_diagonal, det_f, det_g, general_f: opts.allow_general_f })
    }

    pub fn d(&self) -> usize {
        self.f.rows()
    }

    pub fn f(&self) -> &IntMatrix {
        &self.f
    }

    pub fn g(&self) -> &IntMatrix {
        &self.g
    }

    pub fn f_diagonal(&self) -> bool {
        self.f_diagonal
    }

    /// Whether the input was built with the general-F opt-in.
    pub fn general_f_enabled(&self) -> bool {
        self.general_f
    }

    pub fn det_f(&self) -> &BigInt {
        &self.det_f
    }

    pub fn det_g(&self) -> &BigInt {
        &self.det_g
    }

    /// `N = |det F|`.
    pub fn n(&self) -> BigInt {
        self.det_f.abs()
    }

    /// Diagonal of `F`, meaningful when [`Self::f_diagonal`].
    pub fn a(&self) -> Vec<BigInt> {
        self.f.diagonal_entries()
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.f_diagonal {
            w.push(GENERAL_F_WARNING.to_string());
        }
        if self.det_f.is_negative() {
            w.push(format!("det F = {} < 0; using N = |det F| = {}", self.det_f, self.n()));
        }
        w
    }
}

pub(crate) fn is_positive_diagonal(f: &IntMatrix) -> bool {
    f.is_diagonal() && f.diagonal_entries().iter().all(|a| *a >= BigInt::one())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: usize) -> Parity {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelMatrices {
    pub k: usize,
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub c: IntMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSummary {
    pub k: usize,
    pub size: usize,
    /// Rank of `ker(1 - C_k)` (always free).
    pub kernel_rank: usize,
    pub cokernel: FinGenAbGroup,
    pub parity: Parity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGroupsResult {
    pub k0: FinGenAbGroup,
    pub k1: FinGenAbGroup,
    pub levels: Vec<LevelSummary>,
    pub warnings: Vec<String>,
}

/// `A_k`, `B_k`, `C_k` for `k = 0..=d`, in increasing `k`.
pub fn build_levels(input: &QuiverInput) -> Result<Vec<LevelMatrices>> {
    (0..=input.d()).into_par_iter().map(|k| build_level(input, k)).collect()
}

fn build_level(input: &QuiverInput, k: usize) -> Result<LevelMatrices> {
    let a = input.f.transpose().exterior_power(k)?;
    let b = input.g.transpose().exterior_power(k)?;
    let c = if input.f_diagonal { diagonal_c(&b, &input.a(), input.d(), k)? } else { solve_c(&a, &b, &input.n(), k)? };
    Ok(LevelMatrices { k, a, b, c })
}

/// `B_k · diag(a_{J'})`: column `J` scaled by the product of `a` over the
/// complement of `J`.
fn diagonal_c(b: &IntMatrix, a: &[BigInt], d: usize, k: usize) -> Result<IntMatrix> {
    let index = SubsetIndex::new(d, k)?;
    let scale: Vec<BigInt> =
        (0..index.len()).map(|j| index.complement(j).iter().map(|&i| a[i].clone()).product()).collect();
    let mut c = b.clone();
    for r in 0..c.rows() {
        for (j, s) in scale.iter().enumerate() {
            let x = c.get(r, j) * s;
            c.set(r, j, x);
        }
    }
    Ok(c)
}

/// Exact solution of `C A = n B`, checked for integrality.
fn solve_c(a: &IntMatrix, b: &IntMatrix, n: &BigInt, k: usize) -> Result<IntMatrix> {
    // (C A)ᵀ = Aᵀ Cᵀ = n Bᵀ
    let x = solve_rational(&a.transpose(), &b.transpose().scale(n))?;
    let size = a.rows();
    let mut c = IntMatrix::zeros(size, size);
    for (j, row) in x.iter().enumerate() {
        for (i, q) in row.iter().enumerate() {
            if !q.is_integer() {
                return Err(Error::NonIntegralCk { k, row: i, col: j });
            }
            c.set(i, j, q.to_integer());
        }
    }
    Ok(c)
}

/// Solves `m X = rhs` over the rationals for invertible square `m`.
fn solve_rational(m: &IntMatrix, rhs: &IntMatrix) -> Result<Vec<Vec<BigRational>>> {
    let n = m.rows();
    let w = rhs.cols();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|r| m.row(r).iter().chain(rhs.row(r)).map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    for col in 0..n {
        let p =
            (col..n).find(|&r| !aug[r][col].is_zero()).ok_or_else(|| Error::SingularInput("A_k is singular".into()))?;
        aug.swap(col, p);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
    }
    Ok(aug.into_iter().map(|row| row[n..n + w].to_vec()).collect())
}

/// Kernel rank and cokernel of `1 - C_k` for every level.
pub fn summarize_levels(levels: &[LevelMatrices]) -> Result<Vec<LevelSummary>> {
    levels
        .par_iter()
        .map(|lvl| {
            let m = lvl.c.one_minus()?;
            let (rank, cokernel) = rank_and_cokernel(&m);
            Ok(LevelSummary {
                k: lvl.k,
                size: m.rows(),
                kernel_rank: m.cols() - rank,
                cokernel,
                parity: Parity::of(lvl.k),
            })
        })
        .collect()
}

/// `(K0, K1)` from per-level data using each level's `parity` label.
pub fn assemble(levels: &[LevelSummary]) -> (FinGenAbGroup, FinGenAbGroup) {
    let mut k0 = FinGenAbGroup::trivial();
    let mut k1 = FinGenAbGroup::trivial();
    for lvl in levels {
        let ker = FinGenAbGroup::free(lvl.kernel_rank);
        match lvl.parity {
            Parity::Even => {
                k0 = k0.direct_sum(&lvl.cokernel);
                k1 = k1.direct_sum(&ker);
            }
            Parity::Odd => {
                k1 = k1.direct_sum(&lvl.cokernel);
                k0 = k0.direct_sum(&ker);
            }
        }
    }
    (k0, k1)
}

pub fn k_groups(input: &QuiverInput) -> Result<KGroupsResult> {
    let levels = build_levels(input)?;
    let summaries = summarize_levels(&levels)?;
    let (k0, k1) = assemble(&summaries);
    Ok(KGroupsResult { k0, k1, levels: summaries, warnings: input.warnings() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: String, passed: bool, detail: String) {
        self.checks.push(IdentityCheck { name, passed, detail });
    }
}

/// Verifies the defining relations on already-built levels. Failures are
/// reported, not raised.
pub fn check_identities(levels: &[LevelMatrices], input: &QuiverInput) -> IdentityReport {
    let mut report = IdentityReport::default();
    let n = input.n();
    let one = IntMatrix::identity(1);

    let level0 = levels.iter().find(|l| l.k == 0);
    let base_ok = level0.is_some_and(|l| l.a == one && l.b == one && l.c == IntMatrix::scalar(1, n.clone()));
    report.push("A_0 = B_0 = C_0/N = 1".into(), base_ok, String::new());

    for lvl in levels {
        let lhs = lvl.c.mat_mul(&lvl.a);
        let rhs = lvl.b.scale(&n);
        let (ok, detail) = match lhs {
            Ok(l) if l == rhs => (true, String::new()),
            Ok(l) => (false, format!("C_k A_k = {l}, N B_k = {rhs}")),
            Err(e) => (false, e.to_string()),
        };
        report.push(format!("C_k A_k = N B_k (k={})", lvl.k), ok, detail);
    }

    if input.f_diagonal() {
        let a = input.a();
        for lvl in levels {
            let (ok, detail) = match entrywise_c(input.g(), &a, input.d(), lvl.k) {
                Ok(expected) if expected == lvl.c => (true, String::new()),
                Ok(expected) => (false, format!("C_k = {}, expected {expected}", lvl.c)),
                Err(e) => (false, e.to_string()),
            };
            report.push(format!("C_k = (a_J' det G_JI) (k={})", lvl.k), ok, detail);
        }
    }
    report
}

/// `(a_{J'} det G_{J,I})_{I,J}` straight from minors of `G`.
fn entrywise_c(g: &IntMatrix, a: &[BigInt], d: usize, k: usize) -> Result<IntMatrix> {
    let index = SubsetIndex::new(d, k)?;
    let size = index.len();
    let mut c = IntMatrix::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            let aj: BigInt = index.complement(j).iter().map(|&x| a[x].clone()).product();
            c.set(i, j, aj * g.minor(index.get(j), index.get(i))?);
        }
    }
    Ok(c)
}

/// `U F V = D` with `D` positive diagonal and `U`, `V` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FReduction {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Diagonal reduction of a nonsingular `F`. A positive diagonal `F` is
/// returned unchanged with identity transforms; anything else goes through the
/// Smith normal form.
pub fn reduce_general_f(f: &IntMatrix) -> Result<FReduction> {
    if f.det()?.is_zero() {
        return Err(Error::SingularInput("det F = 0".into()));
    }
    let n = f.rows();
    if is_positive_diagonal(f) {
        return Ok(FReduction { d: f.clone(), u: IntMatrix::identity(n), v: IntMatrix::identity(n) });
    }
    let snf = smith_normal_form(f);
    Ok(FReduction { d: snf.d, u: snf.u, v: snf.v })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemarkLevel {
    pub k: usize,
    /// From `1 - C_k` built on `(D, G)` with `G = U V`.
    pub reduced: (usize, FinGenAbGroup),
    /// From `1 - Q_k` with `Q_k Λ^k(Fᵀ) = N`.
    pub direct: (usize, FinGenAbGroup),
}

impl RemarkLevel {
    pub fn agrees(&self) -> bool {
        self.reduced == self.direct
    }
}

/// Compares, level by level, the kernel rank and cokernel of `1 - Q_k`
/// (`Q_k = N Λ^k(Fᵀ)^{-1}`, the `G = 1` transfer matrix of a general `F`)
/// against `1 - C_k` for the diagonal pair `(D, U V)` obtained from
/// `U F V = D`.
pub fn replicate_remark(f: &IntMatrix) -> Result<Vec<RemarkLevel>> {
    let red = reduce_general_f(f)?;
    let g = red.u.mat_mul(&red.v)?;
    let reduced = QuiverInput::new(red.d.clone(), g)?;
    let direct = QuiverInput::with_options(
        f.clone(),
        IntMatrix::identity(f.rows()),
        InputOptions { allow_general_f: true, ..InputOptions::default() },
    )?;
    let r = summarize_levels(&build_levels(&reduced)?)?;
    let q = summarize_levels(&build_levels(&direct)?)?;
    Ok(r.into_iter()
        .zip(q)
        .map(|(r, q)| RemarkLevel { k: r.k, reduced: (r.kernel_rank, r.cokernel), direct: (q.kernel_rank, q.cokernel) })
        .collect())
}
