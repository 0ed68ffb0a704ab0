//! Dense matrices generic over an exact coefficient ring, plus the rational
//! and polynomial instantiations used everywhere else: rank and determinant
//! by fraction-free (Bareiss) elimination with full pivoting, minors in the
//! submatrix notation, exact symmetric signature by congruence
//! diagonalization, and memoized cofactor expansion for parametric minors.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::mpoly::MPoly;
use crate::scalar::{format_rational, parse_rational, sign, ExactDiv, Rational, Scalar};
use crate::{Error, Result};

/// Row-major dense matrix over an exact scalar ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

/// Dense rational matrix.
pub type QMatrix = Matrix<Rational>;

/// Dense matrix of multivariate polynomials; parametric families live here.
pub type PMatrix = Matrix<MPoly>;

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged row lengths".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(diag: &[T]) -> Self {
        Self::from_fn(diag.len(), diag.len(), |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Result<&T> {
        if i >= self.rows || j >= self.cols {
            return Err(Error::IndexOutOfRange {
                index: (i, j),
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(&self.entries[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix::from_fn(self.rows, self.cols, |i, j| f(&self[(i, j)]))
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    /// Submatrix by explicit row/column index lists (any in-range lists).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        for &i in rows {
            for &j in cols {
                self.get(i, j)?;
            }
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        }))
    }

    /// Glues `[[a, b], [c, d]]` from four blocks with matching edges.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("block edges do not match".into()));
        }
        Ok(Self::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| {
            match (i < a.rows, j < a.cols) {
                (true, true) => a[(i, j)].clone(),
                (true, false) => b[(i, j - a.cols)].clone(),
                (false, true) => c[(i - a.rows, j)].clone(),
                (false, false) => d[(i - a.rows, j - a.cols)].clone(),
            }
        }))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.entries[i * self.cols + j]
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in +");
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in -");
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in *");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
            }
            acc
        })
    }
}

impl<T: Scalar + ExactDiv> Matrix<T> {
    /// Fraction-free elimination with full pivoting. Returns the rank and,
    /// for square input, the determinant (zero when rank-deficient).
    fn bareiss(&self) -> (usize, T) {
        let (r, c) = (self.rows, self.cols);
        let mut w = self.entries.clone();
        let at = |i: usize, j: usize| i * c + j;
        let mut negated = false;
        let mut prev = T::one();
        let mut last_pivot = T::one();
        let mut rank = 0;
        for k in 0..r.min(c) {
            let mut pivot = None;
            'search: for i in k..r {
                for j in k..c {
                    if !w[at(i, j)].is_zero() {
                        pivot = Some((i, j));
                        break 'search;
                    }
                }
            }
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => break,
            };
            if pi != k {
                for j in 0..c {
                    w.swap(at(pi, j), at(k, j));
                }
                negated = !negated;
            }
            if pj != k {
                for i in 0..r {
                    w.swap(at(i, pj), at(i, k));
                }
                negated = !negated;
            }
            for i in k + 1..r {
                for j in k + 1..c {
                    let num = w[at(i, j)].clone() * w[at(k, k)].clone()
                        - w[at(i, k)].clone() * w[at(k, j)].clone();
                    w[at(i, j)] = num.exact_div(&prev);
                }
            }
            prev = w[at(k, k)].clone();
            last_pivot = prev.clone();
            rank += 1;
        }
        // Bareiss invariant: the final pivot is the determinant of the
        // (permuted) matrix when elimination ran to completion
        let det = if self.is_square() && rank == self.rows {
            if negated {
                -last_pivot
            } else {
                last_pivot
            }
        } else {
            T::zero()
        };
        (rank, det)
    }

    /// Exact rank over the fraction field of the coefficient ring.
    pub fn rank(&self) -> usize {
        self.bareiss().0
    }

    /// Exact determinant of a square matrix.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(self.bareiss().1)
    }

    /// Determinant of the submatrix given by strictly increasing row and
    /// column selections of equal size.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<T> {
        check_selection(self, rows, cols)?;
        self.submatrix(rows, cols)?.det()
    }
}

fn check_selection<T: Scalar>(m: &Matrix<T>, rows: &[usize], cols: &[usize]) -> Result<()> {
    if rows.len() != cols.len() {
        return Err(Error::DimensionMismatch(format!(
            "minor selects {} rows but {} columns",
            rows.len(),
            cols.len()
        )));
    }
    let increasing = |ix: &[usize]| ix.windows(2).all(|w| w[0] < w[1]);
    if !increasing(rows) || !increasing(cols) {
        return Err(Error::DimensionMismatch(
            "minor selections must be strictly increasing".into(),
        ));
    }
    if let (Some(&ri), Some(&ci)) = (rows.last(), cols.last()) {
        m.get(ri, ci)?;
    }
    Ok(())
}

/// Inertia of a symmetric matrix: counts of positive, negative, and zero
/// eigenvalues (computed without eigenvalues, by Sylvester's law).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn order(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

/// Exact signature by simultaneous row/column elimination with symmetric
/// pivoting. When every remaining diagonal entry vanishes but some
/// off-diagonal a_ij does not, the congruence adding row/col j into row/col i
/// exposes the nonzero pivot 2*a_ij.
pub fn signature(m: &QMatrix) -> Result<Signature> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows;
    let mut a = m.clone();

    let swap_sym = |a: &mut QMatrix, x: usize, y: usize| {
        for j in 0..n {
            let (u, v) = (a[(x, j)].clone(), a[(y, j)].clone());
            a.set(x, j, v);
            a.set(y, j, u);
        }
        for i in 0..n {
            let (u, v) = (a[(i, x)].clone(), a[(i, y)].clone());
            a.set(i, x, v);
            a.set(i, y, u);
        }
    };

    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                swap_sym(&mut a, k, j);
            } else {
                let mut off = None;
                'search: for i in k..n {
                    for j in i + 1..n {
                        if !a[(i, j)].is_zero() {
                            off = Some((i, j));
                            break 'search;
                        }
                    }
                }
                let (i, j) = match off {
                    Some(p) => p,
                    None => break, // remaining block is zero
                };
                for col in 0..n {
                    let v = &a[(i, col)] + &a[(j, col)];
                    a.set(i, col, v);
                }
                for row in 0..n {
                    let v = &a[(row, i)] + &a[(row, j)];
                    a.set(row, i, v);
                }
                if i != k {
                    swap_sym(&mut a, k, i);
                }
            }
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] / &pivot;
            for j in 0..n {
                let v = &a[(i, j)] - &(&f * &a[(k, j)]);
                a.set(i, j, v);
            }
            for j in 0..n {
                let v = &a[(j, i)] - &(&f * &a[(j, k)]);
                a.set(j, i, v);
            }
        }
    }

    let mut sig = Signature {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for k in 0..n {
        match sign(&a[(k, k)]) {
            1 => sig.positive += 1,
            -1 => sig.negative += 1,
            _ => sig.zero += 1,
        }
    }
    Ok(sig)
}

/// The matrix unit E_ij, or its symmetrization E_ij + E_ji. Diagonal
/// symmetric units are normalized to a single 1 so pattern bases stay
/// linearly independent without scaling bookkeeping. The mirrored position
/// must be in range for symmetric units.
pub fn matrix_unit(
    rows: usize,
    cols: usize,
    i: usize,
    j: usize,
    symmetric: bool,
) -> Result<QMatrix> {
    let mut m = QMatrix::zero(rows, cols);
    m.get(i, j)?;
    m.set(i, j, Rational::one());
    if symmetric && i != j {
        m.get(j, i)?;
        m.set(j, i, Rational::one());
    }
    Ok(m)
}

impl QMatrix {
    /// Row-major flattening, for stacking matrices as vectors.
    pub fn vectorized(&self) -> Vec<Rational> {
        self.entries.clone()
    }
}

/// Rank of the span of the given matrices (all of one shape), viewed as
/// vectors of length rows*cols.
pub fn span_rank(mats: &[QMatrix]) -> Result<usize> {
    let first = match mats.first() {
        None => return Ok(0),
        Some(f) => f,
    };
    let (r, c) = (first.rows(), first.cols());
    if mats.iter().any(|m| m.rows() != r || m.cols() != c) {
        return Err(Error::ShapeMismatch(
            "matrices of different shapes in one span".into(),
        ));
    }
    let stacked = Matrix::from_fn(mats.len(), r * c, |i, j| mats[i].entries[j].clone());
    Ok(stacked.rank())
}

impl PMatrix {
    /// Constant lift of a rational matrix.
    pub fn lift(q: &QMatrix) -> Self {
        q.map(|x| MPoly::constant(x.clone()))
    }

    /// All parameter names appearing in any entry.
    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for e in &self.entries {
            out.extend(e.params());
        }
        out
    }

    /// Every entry has total degree <= 1.
    pub fn is_affine(&self) -> bool {
        self.entries.iter().all(|e| e.total_degree() <= 1)
    }

    /// Full evaluation at a rational point.
    pub fn eval_point(&self, point: &BTreeMap<String, Rational>) -> Result<QMatrix> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(e.eval(point)?);
        }
        QMatrix::new(self.rows, self.cols, entries)
    }

    /// Partial substitution, leaving unassigned parameters symbolic.
    pub fn substitute(&self, assignments: &BTreeMap<String, Rational>) -> Self {
        self.map(|e| e.substitute(assignments))
    }

    /// A matrix of pairwise distinct parameters named `{prefix}{i}_{j}`
    /// (1-based), e.g. the fully independent block T of the lemma checks.
    pub fn generic(rows: usize, cols: usize, prefix: &str) -> Self {
        Self::from_fn(rows, cols, |i, j| {
            MPoly::var(&format!("{prefix}{}_{}", i + 1, j + 1))
        })
    }
}

/// Cofactor-expansion determinant engine with memoized subminors, keyed by
/// row/column bitmasks. One cache serves all minors of one matrix, so the
/// (r+1)-minor sweep reuses shared subdeterminants.
pub struct MinorCache<'a> {
    mat: &'a PMatrix,
    memo: HashMap<(u64, u64), MPoly>,
}

impl<'a> MinorCache<'a> {
    pub fn new(mat: &'a PMatrix) -> Self {
        assert!(
            mat.rows() <= 64 && mat.cols() <= 64,
            "minor cache is limited to 64x64 matrices"
        );
        Self {
            mat,
            memo: HashMap::new(),
        }
    }

    pub fn minor(&mut self, rows: &[usize], cols: &[usize]) -> Result<MPoly> {
        check_selection(self.mat, rows, cols)?;
        let rmask = rows.iter().fold(0u64, |m, &i| m | (1 << i));
        let cmask = cols.iter().fold(0u64, |m, &j| m | (1 << j));
        Ok(self.minor_mask(rmask, cmask))
    }

    fn minor_mask(&mut self, rmask: u64, cmask: u64) -> MPoly {
        if rmask == 0 {
            return MPoly::one();
        }
        if let Some(v) = self.memo.get(&(rmask, cmask)) {
            return v.clone();
        }
        let r0 = rmask.trailing_zeros() as usize;
        let rrest = rmask & (rmask - 1);
        let mut acc = MPoly::zero();
        let mut cm = cmask;
        let mut pos = 0u32;
        while cm != 0 {
            let j = cm.trailing_zeros() as usize;
            cm &= cm - 1;
            let entry = &self.mat[(r0, j)];
            if !entry.is_zero() {
                let sub = self.minor_mask(rrest, cmask & !(1u64 << j));
                let term = entry * &sub;
                acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            pos += 1;
        }
        self.memo.insert((rmask, cmask), acc.clone());
        acc
    }
}

/// Order below which minors go through cofactor expansion with memoization;
/// at this order and above, fraction-free elimination over the polynomial
/// ring takes over.
const COFACTOR_MAX_ORDER: usize = 6;

/// Exact determinant polynomial of the selected square submatrix of a
/// parametric matrix.
pub fn sym_minor_det(m: &PMatrix, rows: &[usize], cols: &[usize]) -> Result<MPoly> {
    check_selection(m, rows, cols)?;
    if rows.len() <= COFACTOR_MAX_ORDER {
        MinorCache::new(m).minor(rows, cols)
    } else {
        m.submatrix(rows, cols)?.det()
    }
}

/// Determinant polynomial of a whole square parametric matrix.
pub fn poly_det(m: &PMatrix) -> Result<MPoly> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "determinant of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let all: Vec<usize> = (0..m.rows()).collect();
    sym_minor_det(m, &all, &all)
}

#[derive(Serialize, Deserialize)]
struct QMatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for QMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| format_rational(&self[(i, j)])).collect())
            .collect();
        QMatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = QMatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.rows
            || repr.entries.iter().any(|row| row.len() != repr.cols)
        {
            return Err(serde::de::Error::custom("entry grid does not match rows/cols"));
        }
        let mut entries = Vec::with_capacity(repr.rows * repr.cols);
        for row in &repr.entries {
            for s in row {
                entries.push(parse_rational(s).map_err(serde::de::Error::custom)?);
            }
        }
        QMatrix::new(repr.rows, repr.cols, entries).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PMatrixRepr {
    rows: usize,
    cols: usize,
    params: Vec<String>,
    entries: Vec<Vec<MPoly>>,
}

impl Serialize for PMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].clone()).collect())
            .collect();
        PMatrixRepr {
            rows: self.rows,
            cols: self.cols,
            params: self.params().into_iter().collect(),
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PMatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.rows
            || repr.entries.iter().any(|row| row.len() != repr.cols)
        {
            return Err(serde::de::Error::custom("entry grid does not match rows/cols"));
        }
        let m = PMatrix::new(
            repr.rows,
            repr.cols,
            repr.entries.into_iter().flatten().collect(),
        )
        .map_err(serde::de::Error::custom)?;
        let declared: BTreeSet<String> = repr.params.into_iter().collect();
        if !m.params().is_subset(&declared) {
            return Err(serde::de::Error::custom(
                "entries use parameters missing from the params list",
            ));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio, small_random_rational, trial_rng};
    use rand::Rng;

    fn qmat(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(QMatrix::identity(3).rank(), 3);
        assert_eq!(qmat(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(QMatrix::zero(2, 3).rank(), 0);
    }

    #[test]
    fn planted_rank_oracle() {
        // random 5x5 with planted rank 3: product of random 5x3 and 3x5
        for seed in 0..20u64 {
            let mut rng = trial_rng(991, seed);
            let a = QMatrix::from_fn(5, 3, |_, _| small_random_rational(&mut rng));
            let b = QMatrix::from_fn(3, 5, |_, _| small_random_rational(&mut rng));
            let m = &a * &b;
            assert!(m.rank() <= 3);
            if a.rank() == 3 && b.rank() == 3 {
                assert_eq!(m.rank(), 3);
            }
        }
    }

    /// Independent row-echelon oracle over the rationals.
    fn echelon_rank(m: &QMatrix) -> usize {
        let (r, c) = (m.rows(), m.cols());
        let mut w: Vec<Vec<Rational>> = (0..r)
            .map(|i| (0..c).map(|j| m[(i, j)].clone()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..c {
            let Some(p) = (rank..r).find(|&i| !w[i][col].is_zero()) else {
                continue;
            };
            w.swap(rank, p);
            let lead = w[rank][col].clone();
            for i in 0..r {
                if i != rank && !w[i][col].is_zero() {
                    let f = &w[i][col] / &lead;
                    for j in 0..c {
                        let v = &w[i][j] - &(&f * &w[rank][j]);
                        w[i][j] = v;
                    }
                }
            }
            rank += 1;
            if rank == r {
                break;
            }
        }
        rank
    }

    #[test]
    fn rank_matches_echelon_oracle_on_random_matrices() {
        for seed in 0..60u64 {
            let mut rng = trial_rng(4123, seed);
            let r = rng.gen_range(1..=6);
            let c = rng.gen_range(1..=6);
            // sprinkle zeros to hit degenerate pivots
            let m = QMatrix::from_fn(r, c, |_, _| {
                if rng.gen_bool(0.3) {
                    Rational::zero()
                } else {
                    small_random_rational(&mut rng)
                }
            });
            assert_eq!(m.rank(), echelon_rank(&m), "matrix {m:?}");
        }
    }

    #[test]
    fn det_examples() {
        assert_eq!(QMatrix::identity(4).det().unwrap(), rat(1));
        // det [[1,s],[s,-1]] at s=2 is -5
        assert_eq!(qmat(&[&[1, 2], &[2, -1]]).det().unwrap(), rat(-5));
        assert_eq!(qmat(&[&[1, 2], &[2, 4]]).det().unwrap(), rat(0));
        assert!(qmat(&[&[1, 2, 3], &[4, 5, 6]]).det().is_err());
    }

    #[test]
    fn minor_matches_paper_notation() {
        let m = qmat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        // single-entry minor is the entry itself
        assert_eq!(m.minor(&[1], &[2]).unwrap(), rat(6));
        // leading 2x2 block
        assert_eq!(m.minor(&[0, 1], &[0, 1]).unwrap(), rat(-3));
        assert!(m.minor(&[0, 1], &[0]).is_err());
        assert!(m.minor(&[1, 0], &[0, 1]).is_err());
        assert!(m.minor(&[0, 3], &[0, 1]).is_err());
    }

    #[test]
    fn signature_examples() {
        let d = QMatrix::diagonal(&[rat(1), rat(-1), rat(0)]);
        assert_eq!(
            signature(&d).unwrap(),
            Signature { positive: 1, negative: 1, zero: 1 }
        );
        // [[1,t],[t,-1]] at t=5
        let m = qmat(&[&[1, 5], &[5, -1]]);
        assert_eq!(
            signature(&m).unwrap(),
            Signature { positive: 1, negative: 1, zero: 0 }
        );
        // zero diagonal: the off-diagonal congruence path
        let h = qmat(&[&[0, 1], &[1, 0]]);
        assert_eq!(
            signature(&h).unwrap(),
            Signature { positive: 1, negative: 1, zero: 0 }
        );
        assert!(signature(&qmat(&[&[0, 1], &[2, 0]])).is_err());
    }

    #[test]
    fn signature_is_congruence_invariant() {
        for seed in 0..30u64 {
            let mut rng = trial_rng(5150, seed);
            let n = rng.gen_range(1..=5);
            let mut m = QMatrix::zero(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = if rng.gen_bool(0.25) {
                        Rational::zero()
                    } else {
                        small_random_rational(&mut rng)
                    };
                    m.set(i, j, v.clone());
                    m.set(j, i, v);
                }
            }
            // random invertible P by rejection
            let p = loop {
                let cand = QMatrix::from_fn(n, n, |_, _| small_random_rational(&mut rng));
                if cand.rank() == n {
                    break cand;
                }
            };
            let congruent = &(&p.transpose() * &m) * &p;
            let (s1, s2) = (signature(&m).unwrap(), signature(&congruent).unwrap());
            assert_eq!(s1, s2);
            assert_eq!(s1.rank(), m.rank());
        }
    }

    #[test]
    fn matrix_unit_examples() {
        let e = matrix_unit(2, 2, 0, 1, true).unwrap();
        assert_eq!(e, qmat(&[&[0, 1], &[1, 0]]));
        let d = matrix_unit(2, 2, 0, 0, true).unwrap();
        assert_eq!(d, qmat(&[&[1, 0], &[0, 0]]));
        let p = matrix_unit(2, 3, 0, 2, false).unwrap();
        assert_eq!(p, qmat(&[&[0, 0, 1], &[0, 0, 0]]));
        assert!(matrix_unit(2, 3, 0, 2, true).is_err()); // mirror out of range
        assert!(matrix_unit(2, 2, 2, 0, false).is_err());
    }

    #[test]
    fn poly_det_agrees_with_bareiss_on_constants() {
        for seed in 0..15u64 {
            let mut rng = trial_rng(77, seed);
            let n = rng.gen_range(1..=5);
            let q = QMatrix::from_fn(n, n, |_, _| small_random_rational(&mut rng));
            let lifted = PMatrix::lift(&q);
            let via_cofactor = poly_det(&lifted).unwrap();
            assert_eq!(via_cofactor.as_constant().unwrap(), q.det().unwrap());
        }
    }

    #[test]
    fn poly_det_bareiss_route_matches_cofactor_route() {
        // same parametric matrix through both engines
        let m = PMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                MPoly::one()
            } else {
                MPoly::var(&format!("x{i}{j}"))
            }
        });
        let all = [0, 1, 2];
        let cofactor = MinorCache::new(&m).minor(&all, &all).unwrap();
        let bareiss = m.det().unwrap();
        assert_eq!(cofactor, bareiss);
    }

    #[test]
    fn sym_minor_det_examples() {
        // [[1, t],[t, -1]] -> -1 - t^2
        let t = MPoly::var("t");
        let m = PMatrix::new(
            2,
            2,
            vec![MPoly::one(), t.clone(), t.clone(), -MPoly::one()],
        )
        .unwrap();
        let d = poly_det(&m).unwrap();
        let expect = &(-MPoly::one()) - &(&t * &t);
        assert_eq!(d, expect);

        // 1x1 affine
        let m1 = PMatrix::new(1, 1, vec![t.clone()]).unwrap();
        assert_eq!(poly_det(&m1).unwrap(), t.clone());

        // acified variant [[1, t],[u, -1]] -> -1 - t*u
        let u = MPoly::var("u");
        let m2 = PMatrix::new(2, 2, vec![MPoly::one(), t.clone(), u.clone(), -MPoly::one()]).unwrap();
        assert_eq!(poly_det(&m2).unwrap(), &(-MPoly::one()) - &(&t * &u));
    }

    #[test]
    fn span_rank_counts_independent_matrices() {
        let e1 = matrix_unit(2, 2, 0, 0, false).unwrap();
        let e2 = matrix_unit(2, 2, 0, 1, false).unwrap();
        let sum = &e1 + &e2;
        assert_eq!(span_rank(&[e1.clone(), e2.clone(), sum]).unwrap(), 2);
        assert_eq!(span_rank(&[]).unwrap(), 0);
        let bad = [e1, QMatrix::zero(3, 3)];
        assert!(span_rank(&bad).is_err());
    }

    #[test]
    fn qmatrix_json_schema() {
        let m = QMatrix::from_rows(vec![
            vec![rat(1), ratio(1, 2)],
            vec![rat(0), rat(-3)],
        ])
        .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":2,"entries":[["1","1/2"],["0","-3"]]}"#);
        let back: QMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<QMatrix>(r#"{"rows":2,"cols":2,"entries":[["1"]]}"#).is_err());
    }

    #[test]
    fn pmatrix_json_round_trip() {
        let t = MPoly::var("t");
        let m = PMatrix::new(2, 2, vec![MPoly::one(), t.clone(), t.clone(), -MPoly::one()]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains(r#""params":["t"]"#));
        let back: PMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
