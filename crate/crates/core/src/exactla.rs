//! Exact rational and integer linear algebra underpinning all combinatorics.
//!
//! Provides:
//! - [`Rat`] / [`Int`]: arbitrary-precision rationals and integers
//! - [`GRat`]: Gaussian rationals, for complex parameter vectors
//! - [`ConfigMatrix`]: an integer `d x n` matrix of rank `d` whose columns
//!   generate `Z^d` as a lattice
//! - [`ExtendedMatrix`]: the derived matrices built from a weight vector
//! - [`Simplex`]: a column subset with invertible square submatrix
//! - kernel bases, row-span tests, lattice class representatives
//!
//! Everything here is exact; no floating point.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

/// Shorthand for a small rational constant.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Shorthand for a small integer as a rational.
pub fn rati(num: i64) -> Rat {
    Rat::from_integer(Int::from(num))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactlaError {
    #[error("matrix has rank {found} over Q, expected {expected}")]
    RankDeficient { expected: usize, found: usize },
    #[error("columns do not generate Z^{0} as a lattice (gcd of maximal minors is {1})")]
    LatticeNotGenerating(usize, Int),
    #[error("square submatrix for columns {0:?} is singular")]
    SingularSimplex(Vec<usize>),
    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("enumeration bound {bound} exhausted before all {needed} lattice classes were found")]
    BoundExhausted { bound: u64, needed: u64 },
    #[error("division by zero Gaussian rational")]
    DivisionByZero,
}

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// A Gaussian rational `re + im*i` with exact rational parts.
///
/// Used wherever the parameters beta, alpha may be complex. Arithmetic is
/// field arithmetic in `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GRat {
    pub re: Rat,
    pub im: Rat,
}

impl GRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GRat { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        GRat { re, im: Rat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rati(n))
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True iff the value is a rational integer (imaginary part zero).
    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    /// True iff the value lies in `Z_{<0}`.
    pub fn is_negative_integer(&self) -> bool {
        self.is_integer() && self.re.is_negative()
    }

    /// True iff the value lies in `N = Z_{>=0}`.
    pub fn is_nonnegative_integer(&self) -> bool {
        self.is_integer() && !self.re.is_negative()
    }

    pub fn add(&self, o: &GRat) -> GRat {
        GRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &GRat) -> GRat {
        GRat::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn neg(&self) -> GRat {
        GRat::new(-self.re.clone(), -self.im.clone())
    }

    pub fn mul(&self, o: &GRat) -> GRat {
        GRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn mul_rat(&self, r: &Rat) -> GRat {
        GRat::new(&self.re * r, &self.im * r)
    }

    pub fn inv(&self) -> Result<GRat, ExactlaError> {
        if self.is_zero() {
            return Err(ExactlaError::DivisionByZero);
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Ok(GRat::new(&self.re / &norm, -(&self.im / &norm)))
    }

    pub fn div(&self, o: &GRat) -> Result<GRat, ExactlaError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Shift by a rational integer offset, `self + n`.
    pub fn add_int(&self, n: i64) -> GRat {
        GRat::new(&self.re + rati(n), self.im.clone())
    }
}

impl fmt::Display for GRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{}{}*i", self.re, if self.im.is_negative() { "" } else { "+" }, self.im)
        }
    }
}

impl fmt::Debug for GRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<Rat> for GRat {
    fn from(r: Rat) -> Self {
        GRat::from_rat(r)
    }
}

// ---------------------------------------------------------------------------
// Dense rational linear algebra
// ---------------------------------------------------------------------------

/// Reduce `rows` to reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut [Vec<Rat>]) -> Vec<usize> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r >= m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r][c..].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..n {
                    let s = &rows[r][j] * &f;
                    rows[i][j] = &rows[i][j] - &s;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn matrix_rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// One solution of `A x = b` over Q, if the system is consistent.
pub fn solve_linear(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    assert_eq!(m, b.len(), "rhs length mismatch");
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&n) {
        return None; // pivot in the augmented column: inconsistent
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][n].clone();
    }
    Some(x)
}

/// Basis of the right kernel `{x : A x = 0}` over Q.
pub fn kernel_basis(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let m = a.len();
    if m == 0 {
        return Vec::new();
    }
    let n = a[0].len();
    let mut mat = a.to_vec();
    let pivots = rref(&mut mat);
    let pivset: BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivset.contains(c)) {
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -mat[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Determinant by fraction-free-ish Gaussian elimination.
pub fn determinant(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let s = &m[c][j] * &f;
                m[i][j] = &m[i][j] - &s;
            }
        }
    }
    det
}

/// Inverse of a square rational matrix, if nonsingular.
pub fn invert(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "invert expects a square matrix");
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn int_to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn i64_to_int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Coordinate sum `|v| = sum_i v_i`.
pub fn coordinate_sum(v: &[Rat]) -> Rat {
    v.iter().sum()
}

// ---------------------------------------------------------------------------
// ConfigMatrix
// ---------------------------------------------------------------------------

/// An integer `d x n` matrix `A` of rank `d` whose columns generate `Z^d`.
///
/// Columns are indexed `0..n` internally; reports rendered for users label
/// them `1..=n`.
#[derive(Clone, PartialEq, Eq)]
pub struct ConfigMatrix {
    rows: Vec<Vec<Int>>,
    d: usize,
    n: usize,
}

impl fmt::Debug for ConfigMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConfigMatrix{:?}", self.rows)
    }
}

impl ConfigMatrix {
    /// Validates rank and the lattice-generation invariant
    /// (gcd of all `d x d` minors must be 1).
    pub fn new(rows: Vec<Vec<Int>>) -> Result<Self, ExactlaError> {
        let d = rows.len();
        assert!(d > 0, "empty matrix");
        let n = rows[0].len();
        for r in &rows {
            if r.len() != n {
                return Err(ExactlaError::DimensionMismatch { expected: n, found: r.len() });
            }
        }
        let m = ConfigMatrix { rows, d, n };
        let rank = matrix_rank(&m.rational_rows());
        if rank != d {
            return Err(ExactlaError::RankDeficient { expected: d, found: rank });
        }
        let g = m.maximal_minor_gcd();
        if !g.is_one() {
            return Err(ExactlaError::LatticeNotGenerating(d, g));
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, ExactlaError> {
        Self::new(rows.iter().map(|r| i64_to_int_vec(r)).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &Int {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn column_rat(&self, j: usize) -> Vec<Rat> {
        self.rows.iter().map(|r| Rat::from_integer(r[j].clone())).collect()
    }

    pub fn columns_rat(&self) -> Vec<Vec<Rat>> {
        (0..self.n).map(|j| self.column_rat(j)).collect()
    }

    pub fn rational_rows(&self) -> Vec<Vec<Rat>> {
        self.rows.iter().map(|r| int_to_rat_vec(r)).collect()
    }

    /// `A u` for an integer vector `u`.
    pub fn mul_int(&self, u: &[Int]) -> Vec<Int> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(u).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_i64(&self, u: &[i64]) -> Vec<Int> {
        self.mul_int(&i64_to_int_vec(u))
    }

    /// `A v` for a Gaussian rational vector.
    pub fn mul_grat(&self, v: &[GRat]) -> Vec<GRat> {
        self.rows
            .iter()
            .map(|r| {
                let mut acc = GRat::zero();
                for (a, x) in r.iter().zip(v) {
                    acc = acc.add(&x.mul_rat(&Rat::from_integer(a.clone())));
                }
                acc
            })
            .collect()
    }

    fn maximal_minor_gcd(&self) -> Int {
        use num_integer::Integer as _;
        let mut g = Int::zero();
        let cols: Vec<usize> = (0..self.n).collect();
        for subset in subsets_of_size(&cols, self.d) {
            let sub: Vec<Vec<Rat>> = (0..self.d)
                .map(|i| subset.iter().map(|&j| Rat::from_integer(self.rows[i][j].clone())).collect())
                .collect();
            let det = determinant(&sub);
            debug_assert!(det.is_integer());
            g = g.gcd(det.numer());
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Submatrix of the columns indexed by `cols` (order preserved).
    pub fn submatrix(&self, cols: &[usize]) -> Vec<Vec<Int>> {
        (0..self.d)
            .map(|i| cols.iter().map(|&j| self.rows[i][j].clone()).collect())
            .collect()
    }

    /// The extended matrix `Atilde(w)` with columns `(a_i, w_i)` and `(0, 1)`.
    pub fn atilde(&self, w: &[Int]) -> Result<ConfigMatrix, ExactlaError> {
        if w.len() != self.n {
            return Err(ExactlaError::DimensionMismatch { expected: self.n, found: w.len() });
        }
        let mut rows = self.rows.clone();
        for r in rows.iter_mut() {
            r.push(Int::zero());
        }
        let mut last: Vec<Int> = w.to_vec();
        last.push(Int::one());
        rows.push(last);
        ConfigMatrix::new(rows)
    }

    /// Columns `(a_i, w_i)` of `A_w` as rational points in `R^{d+1}`.
    pub fn a_w_points(&self, w: &[Int]) -> Vec<Vec<Rat>> {
        (0..self.n)
            .map(|j| {
                let mut p = self.column_rat(j);
                p.push(Rat::from_integer(w[j].clone()));
                p
            })
            .collect()
    }

    /// [OP] Basis of `ker(A) = {u in Q^n : A u = 0}`.
    pub fn rational_kernel_basis(&self) -> Vec<Vec<Rat>> {
        kernel_basis(&self.rational_rows())
    }

    /// [OP] Is `v` in the Q-row span of `A`? Decided by solvability of
    /// `A^T c = v`.
    pub fn rowspan_contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.n, "vector length must be n");
        let at: Vec<Vec<Rat>> = (0..self.n)
            .map(|j| (0..self.d).map(|i| Rat::from_integer(self.rows[i][j].clone())).collect())
            .collect();
        solve_linear(&at, v).is_some()
    }

    /// [OP] Is `w` in the image of `Abar^T`, i.e. does `p.a_i + q = w_i`
    /// admit a solution `(p, q)`? Returns the witness.
    pub fn in_image_abar(&self, w: &[Int]) -> Option<(Vec<Rat>, Rat)> {
        assert_eq!(w.len(), self.n, "weight length must be n");
        // rows of the system: for each column i, (a_i, 1) . (p, q) = w_i
        let sys: Vec<Vec<Rat>> = (0..self.n)
            .map(|j| {
                let mut r = self.column_rat(j);
                r.push(Rat::one());
                r
            })
            .collect();
        let rhs: Vec<Rat> = w.iter().map(|x| Rat::from_integer(x.clone())).collect();
        let sol = solve_linear(&sys, &rhs)?;
        let (p, q) = sol.split_at(self.d);
        Some((p.to_vec(), q[0].clone()))
    }
}

/// All subsets of `items` of the given size, in lexicographic order.
pub fn subsets_of_size<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let n = items.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i].clone()).collect());
        // advance the combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Simplex
// ---------------------------------------------------------------------------

/// A subset `sigma` of `d` column indices with `det(A_sigma) != 0`, together
/// with the cached inverse. The normalized volume is `|det(A_sigma)|`.
#[derive(Clone, PartialEq, Eq)]
pub struct Simplex {
    indices: Vec<usize>,
    det: Int,
    inv: Vec<Vec<Rat>>,
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Simplex{:?}", self.indices)
    }
}

impl Simplex {
    pub fn new(a: &ConfigMatrix, mut indices: Vec<usize>) -> Result<Self, ExactlaError> {
        indices.sort_unstable();
        indices.dedup();
        if indices.len() != a.d() {
            return Err(ExactlaError::DimensionMismatch { expected: a.d(), found: indices.len() });
        }
        let sub: Vec<Vec<Rat>> = a
            .submatrix(&indices)
            .into_iter()
            .map(|r| int_to_rat_vec(&r))
            .collect();
        let det = determinant(&sub);
        if det.is_zero() {
            return Err(ExactlaError::SingularSimplex(indices));
        }
        let inv = invert(&sub).expect("nonzero determinant implies invertible");
        debug_assert!(det.is_integer());
        Ok(Simplex { indices, det: det.numer().clone(), inv })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    pub fn det(&self) -> &Int {
        &self.det
    }

    /// Normalized volume `vol(sigma) = |det A_sigma|`.
    pub fn vol(&self) -> Int {
        self.det.abs()
    }

    pub fn inverse(&self) -> &[Vec<Rat>] {
        &self.inv
    }

    /// `A_sigma^{-1} y` for a rational vector `y` of length `d`.
    pub fn inv_times(&self, y: &[Rat]) -> Vec<Rat> {
        self.inv.iter().map(|row| dot_rat(row, y)).collect()
    }

    /// `A_sigma^{-1} a_j`.
    pub fn inv_times_column(&self, a: &ConfigMatrix, j: usize) -> Vec<Rat> {
        self.inv_times(&a.column_rat(j))
    }

    /// `A_sigma^{-1} v` for a Gaussian rational vector of length `d`.
    pub fn inv_times_grat(&self, y: &[GRat]) -> Vec<GRat> {
        self.inv
            .iter()
            .map(|row| {
                let mut acc = GRat::zero();
                for (c, x) in row.iter().zip(y) {
                    acc = acc.add(&x.mul_rat(c));
                }
                acc
            })
            .collect()
    }
}

/// [OP] Kernel basis matrix `B_sigma`: for each `j` not in `sigma`, the
/// column `b_j` has entry 1 at position `j`, 0 at the other non-sigma
/// positions, and `-A_sigma^{-1} a_j` spread over the sigma positions.
///
/// Returns the columns in increasing order of `j`; each has length `n` and
/// satisfies `A b_j = 0` exactly.
pub fn simplex_kernel_matrix(a: &ConfigMatrix, sigma: &Simplex) -> Vec<Vec<Rat>> {
    let n = a.n();
    let mut cols = Vec::new();
    for j in 0..n {
        if sigma.contains(j) {
            continue;
        }
        let coeff = sigma.inv_times_column(a, j);
        let mut col = vec![Rat::zero(); n];
        col[j] = Rat::one();
        for (pos, &si) in sigma.indices().iter().enumerate() {
            col[si] = -coeff[pos].clone();
        }
        cols.push(col);
    }
    cols
}

/// [OP] Representatives `Lambda` of `Z^d / Z A_sigma` of the form
/// `A_sigmabar k`, `k in N^{n-d}`, enumerated in graded-lexicographic order
/// of `k`; the first representative found in each class is kept.
///
/// `bound` caps the grade `sum(k)`.
pub fn lattice_representatives(
    a: &ConfigMatrix,
    sigma: &Simplex,
    bound: u64,
) -> Result<Vec<Vec<Int>>, ExactlaError> {
    let needed_big = sigma.vol();
    let needed = u64::try_from(&needed_big).expect("volume fits in u64");
    let complement: Vec<usize> = (0..a.n()).filter(|&j| !sigma.contains(j)).collect();
    let mut reps: Vec<Vec<Int>> = Vec::new(); // class points A_sigmabar k in Z^d
    let mut ks: Vec<Vec<Int>> = Vec::new();

    let same_class = |p: &[Int], q: &[Int], s: &Simplex| -> bool {
        let diff: Vec<Rat> = p
            .iter()
            .zip(q)
            .map(|(x, y)| Rat::from_integer(x - y))
            .collect();
        s.inv_times(&diff).iter().all(|c| c.is_integer())
    };

    for grade in 0..=bound {
        for k in compositions(grade, complement.len()) {
            let point: Vec<Int> = (0..a.d())
                .map(|i| {
                    complement
                        .iter()
                        .zip(&k)
                        .map(|(&j, kj)| a.entry(i, j) * kj)
                        .sum()
                })
                .collect();
            if !reps.iter().any(|r| same_class(r, &point, sigma)) {
                reps.push(point);
                ks.push(k);
                if ks.len() as u64 == needed {
                    return Ok(ks);
                }
            }
        }
        if complement.is_empty() {
            break; // only the empty k exists
        }
    }
    if ks.len() as u64 == needed {
        Ok(ks)
    } else {
        Err(ExactlaError::BoundExhausted { bound, needed })
    }
}

/// All `k in N^len` with `sum(k) = grade`, in lexicographically ascending
/// order as tuples.
pub fn compositions(grade: u64, len: usize) -> Vec<Vec<Int>> {
    let mut out = Vec::new();
    if len == 0 {
        if grade == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    fn rec(grade: u64, len: usize, prefix: &mut Vec<Int>, out: &mut Vec<Vec<Int>>) {
        if len == 1 {
            prefix.push(Int::from(grade));
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=grade {
            prefix.push(Int::from(first));
            rec(grade - first, len - 1, prefix, out);
            prefix.pop();
        }
    }
    rec(grade, len, &mut Vec::new(), &mut out);
    out
}

// ---------------------------------------------------------------------------
// ExtendedMatrix
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtendedKind {
    /// `(d+1) x (n+1)`: rows of `A` padded with 0, last row `(w, 1)`.
    Atilde,
    /// `(d+1) x n`: columns `(a_i, w_i)` only.
    Aw,
    /// `(d+1) x (n+1)`: rows of `A` padded with 0, last row `(w, c)` with a
    /// rational last entry `c` (either `-1/r` or `-kappa`).
    Borel,
}

/// A matrix derived from `(A, w)`; the Borel variant may carry one rational
/// entry and is normalized to an integer matrix by row scaling.
#[derive(Clone, Debug)]
pub struct ExtendedMatrix {
    pub kind: ExtendedKind,
    pub base: ConfigMatrix,
    pub w: Vec<Int>,
    /// The rational last entry for the Borel variant (`-1/r` or `-kappa`).
    pub last_entry: Option<Rat>,
}

impl ExtendedMatrix {
    pub fn atilde(base: ConfigMatrix, w: Vec<Int>) -> Self {
        ExtendedMatrix { kind: ExtendedKind::Atilde, base, w, last_entry: None }
    }

    pub fn a_w(base: ConfigMatrix, w: Vec<Int>) -> Self {
        ExtendedMatrix { kind: ExtendedKind::Aw, base, w, last_entry: None }
    }

    pub fn borel(base: ConfigMatrix, w: Vec<Int>, last_entry: Rat) -> Self {
        assert!(last_entry.is_negative(), "Borel matrix last entry must be negative");
        ExtendedMatrix { kind: ExtendedKind::Borel, base, w, last_entry: Some(last_entry) }
    }

    /// The rows over Q, before any normalization.
    pub fn rational_rows(&self) -> Vec<Vec<Rat>> {
        let d = self.base.d();
        let n = self.base.n();
        let extra_col = !matches!(self.kind, ExtendedKind::Aw);
        let mut rows: Vec<Vec<Rat>> = self
            .base
            .rational_rows()
            .into_iter()
            .map(|mut r| {
                if extra_col {
                    r.push(Rat::zero());
                }
                r
            })
            .collect();
        let mut last: Vec<Rat> = int_to_rat_vec(&self.w);
        match self.kind {
            ExtendedKind::Atilde => last.push(Rat::one()),
            ExtendedKind::Aw => {}
            ExtendedKind::Borel => last.push(self.last_entry.clone().expect("set by constructor")),
        }
        rows.push(last);
        debug_assert_eq!(rows.len(), d + 1);
        debug_assert!(rows.iter().all(|r| r.len() == if extra_col { n + 1 } else { n }));
        rows
    }

    /// Scale factors applied per row by [`Self::integer_rows`]: the lcm of
    /// the row's entry denominators. Only the Borel variant can differ
    /// from 1, and only in the last row.
    pub fn row_scale_factors(&self) -> Vec<Int> {
        self.rational_rows()
            .iter()
            .map(|row| {
                row.iter().fold(Int::one(), |acc, x| {
                    use num_integer::Integer as _;
                    let d = x.denom();
                    (&acc / acc.gcd(d)) * d
                })
            })
            .collect()
    }

    /// Integer rows after the lattice normalization by row scaling.
    pub fn integer_rows(&self) -> Vec<Vec<Int>> {
        let scales = self.row_scale_factors();
        self.rational_rows()
            .iter()
            .zip(&scales)
            .map(|(row, s)| {
                row.iter()
                    .map(|x| {
                        let v = x * Rat::from_integer(s.clone());
                        debug_assert!(v.is_integer());
                        v.numer().clone()
                    })
                    .collect()
            })
            .collect()
    }

    /// The normalized integer matrix as a validated [`ConfigMatrix`].
    pub fn integer_config(&self) -> Result<ConfigMatrix, ExactlaError> {
        ConfigMatrix::new(self.integer_rows())
    }
}
