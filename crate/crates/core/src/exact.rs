//! Exact scalars and dense matrix algebra.
//!
//! Everything here works over `BigInt` / `BigRational`; nothing rounds.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Integer = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ragged rows")]
    Ragged,
    #[error("square class of zero is undefined")]
    ZeroSquareClass,
    #[error("could not certify squarefree part of {0}")]
    Uncertified(Integer),
}

pub fn int(v: i64) -> Integer {
    Integer::from(v)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(Integer::from(v))
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMatrix = Matrix<Rational>;
pub type ZMatrix = Matrix<Integer>;

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, ExactError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(ExactError::Ragged);
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Columns `cols` selected in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    pub fn from_columns(columns: &[Vec<T>]) -> Result<Self, ExactError> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(ExactError::Ragged);
        }
        Ok(Matrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone()))
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn block_diagonal(blocks: &[Matrix<T>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Matrix::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { T::zero() })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    /// Product that skips zero entries of the left factor.
    pub fn checked_mul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut out[(i, j)], T::zero());
                    out[(i, j)] = cur + a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, ExactError> {
        if self.cols != v.len() {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} * vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a * b;
                    }
                }
                acc
            })
            .collect())
    }
}

impl<'a, T> Mul for &'a Matrix<T>
where
    T: Clone + Zero,
    for<'b> &'b T: Mul<&'b T, Output = T>,
{
    type Output = Matrix<T>;
    fn mul(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl<'a, T> Add for &'a Matrix<T>
where
    T: Clone,
    for<'b> &'b T: Add<&'b T, Output = T>,
{
    type Output = Matrix<T>;
    fn add(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a, T> Sub for &'a Matrix<T>
where
    T: Clone,
    for<'b> &'b T: Sub<&'b T, Output = T>,
{
    type Output = Matrix<T>;
    fn sub(self, rhs: &'a Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T> Neg for &Matrix<T>
where
    T: Clone,
    for<'b> &'b T: Neg<Output = T>,
{
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x)
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl ZMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, ExactError> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Integer::from(x)).collect())
                .collect(),
        )
    }

    pub fn to_rational(&self) -> QMatrix {
        self.map(|x| Rational::from_integer(x.clone()))
    }

    pub fn scaled(&self, k: &Integer) -> ZMatrix {
        self.map(|x| x * k)
    }
}

impl QMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, ExactError> {
        Ok(ZMatrix::from_i64(rows)?.to_rational())
    }

    /// `Some` when every entry is an integer.
    pub fn to_integer(&self) -> Option<ZMatrix> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }

    pub fn scaled(&self, k: &Rational) -> QMatrix {
        self.map(|x| x * k)
    }
}

fn require_square<T>(m: &Matrix<T>) -> Result<usize, ExactError> {
    if m.rows == m.cols {
        Ok(m.rows)
    } else {
        Err(ExactError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        })
    }
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn det_int(m: &ZMatrix) -> Result<Integer, ExactError> {
    let n = require_square(m)?;
    if n == 0 {
        return Ok(Integer::one());
    }
    let mut a = m.clone();
    let mut sign = Integer::one();
    let mut prev = Integer::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    sign = -sign;
                }
                None => return Ok(Integer::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                // Sylvester's identity makes this division exact.
                a[(i, j)] = v / &prev;
            }
            a[(i, k)] = Integer::zero();
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// Exact determinant. Integer input goes through Bareiss; otherwise
/// denominators are cleared row by row first.
pub fn det(m: &QMatrix) -> Result<Rational, ExactError> {
    let n = require_square(m)?;
    if let Some(z) = m.to_integer() {
        return det_int(&z).map(Rational::from_integer);
    }
    let mut scale = Integer::one();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let l = m.row(i).iter().fold(Integer::one(), |acc, x| acc.lcm(x.denom()));
        rows.push(
            m.row(i)
                .iter()
                .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
                .collect::<Vec<_>>(),
        );
        scale *= l;
    }
    let d = det_int(&Matrix::from_rows(rows)?)?;
    Ok(Rational::new(d, scale))
}

/// Reduced row echelon form; returns the reduced matrix and pivot columns.
///
/// Rows are scaled to integers and reduced fraction-free, so every
/// intermediate entry is a minor of the scaled matrix.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut a: Matrix<Integer> = Matrix::zeros(m.rows, m.cols);
    for i in 0..m.rows {
        let l = (0..m.cols).fold(Integer::one(), |l, j| l.lcm(m[(i, j)].denom()));
        for j in 0..m.cols {
            let x = &m[(i, j)];
            a[(i, j)] = x.numer() * (&l / x.denom());
        }
    }
    let mut pivots = Vec::new();
    let mut prev = Integer::one();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let piv = a[(r, c)].clone();
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..a.cols {
                if j == c {
                    continue;
                }
                let v = &piv * &a[(i, j)] - &f * &a[(r, j)];
                a[(i, j)] = if prev.is_one() { v } else { v / &prev };
            }
            a[(i, c)] = Integer::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    let mut out = Matrix::zeros(m.rows, m.cols);
    for (row, &pc) in pivots.iter().enumerate() {
        let d = a[(row, pc)].clone();
        for j in 0..m.cols {
            if !a[(row, j)].is_zero() {
                out[(row, j)] = Rational::new(a[(row, j)].clone(), d.clone());
            }
        }
    }
    (out, pivots)
}

pub fn rank(m: &QMatrix) -> usize {
    rref(m).1.len()
}

/// Basis of the right null space, one vector per free column.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

pub fn inverse(m: &QMatrix) -> Result<QMatrix, ExactError> {
    let n = require_square(m)?;
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = Rational::one();
    }
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(ExactError::Singular);
    }
    Ok(Matrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
}

/// Solve `m x = b` for one particular solution, if any.
pub fn solve(m: &QMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>, ExactError> {
    if b.len() != m.rows {
        return Err(ExactError::DimensionMismatch("rhs length".into()));
    }
    let aug = Matrix::from_fn(m.rows, m.cols + 1, |i, j| {
        if j < m.cols {
            m[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r[(row, m.cols)].clone();
    }
    Ok(Some(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

/// Inertia by congruence diagonalization. Diagonal pivots are used when
/// available; otherwise a hyperbolic 2x2 block `[[0,a],[a,0]]` is split off,
/// which contributes one positive and one negative direction.
pub fn inertia(m: &QMatrix) -> Result<Inertia, ExactError> {
    require_square(m)?;
    if !m.is_symmetric() {
        return Err(ExactError::NotSymmetric);
    }
    let mut a = m.clone();
    let mut active: Vec<usize> = (0..a.rows).collect();
    let mut out = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&k| !a[(k, k)].is_zero()) {
            let k = active.remove(pos);
            let p = a[(k, k)].clone();
            if p.is_positive() {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            for &i in &active {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &p;
                for &j in &active {
                    if !a[(k, j)].is_zero() {
                        let v = &a[(i, j)] - &f * &a[(k, j)];
                        a[(i, j)] = v;
                    }
                }
            }
            continue;
        }
        let pair = active
            .iter()
            .enumerate()
            .find_map(|(x, &i)| active[x + 1..].iter().find(|&&j| !a[(i, j)].is_zero()).map(|&j| (i, j)));
        let Some((i, j)) = pair else {
            out.zero += active.len();
            break;
        };
        active.retain(|&k| k != i && k != j);
        out.positive += 1;
        out.negative += 1;
        let off = a[(i, j)].clone();
        let snapshot: Vec<(usize, Rational, Rational)> = active
            .iter()
            .map(|&r| (r, a[(r, i)].clone(), a[(r, j)].clone()))
            .collect();
        for (r, ri, rj) in &snapshot {
            for (s, si, sj) in &snapshot {
                if (ri.is_zero() || sj.is_zero()) && (rj.is_zero() || si.is_zero()) {
                    continue;
                }
                let corr = (ri * sj + rj * si) / &off;
                let v = &a[(*r, *s)] - &corr;
                a[(*r, *s)] = v;
            }
        }
    }
    Ok(out)
}

/// `left * m * right == diag(diagonal)` (padded with zeros to `m`'s shape),
/// with `left`, `right` unimodular and each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<Integer>,
    pub left: ZMatrix,
    pub right: ZMatrix,
}

impl SmithForm {
    /// Nonzero invariant factors.
    pub fn invariant_factors(&self) -> Vec<Integer> {
        self.diagonal.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn row_axpy(a: &mut ZMatrix, target: usize, src: usize, q: &Integer) {
    for j in 0..a.cols {
        if !a[(src, j)].is_zero() {
            let v = &a[(target, j)] - q * &a[(src, j)];
            a[(target, j)] = v;
        }
    }
}

fn col_axpy(a: &mut ZMatrix, target: usize, src: usize, q: &Integer) {
    for i in 0..a.rows {
        if !a[(i, src)].is_zero() {
            let v = &a[(i, target)] - q * &a[(i, src)];
            a[(i, target)] = v;
        }
    }
}

pub fn smith_normal_form(m: &ZMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut left = ZMatrix::identity(rows);
    let mut right = ZMatrix::identity(cols);
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else {
            diagonal.extend((t..rows.min(cols)).map(|_| Integer::zero()));
            break;
        };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut left, i, t, &q);
                if !a[(i, t)].is_zero() {
                    a.swap_rows(t, i);
                    left.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut right, j, t, &q);
                if !a[(t, j)].is_zero() {
                    a.swap_cols(t, j);
                    right.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&a[(t, t)]));
            match bad {
                Some((i, _)) => {
                    let minus_one = -Integer::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut left, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            for j in 0..cols {
                a[(t, j)] = -a[(t, j)].clone();
            }
            for j in 0..rows {
                left[(t, j)] = -left[(t, j)].clone();
            }
        }
        diagonal.push(a[(t, t)].clone());
    }
    SmithForm { diagonal, left, right }
}

/// Exact square root of a nonnegative rational, when it is a square.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

/// The squarefree integer `s` with `x = s * r^2` for a rational `r`.
pub fn square_class(x: &Rational) -> Result<Integer, ExactError> {
    if x.is_zero() {
        return Err(ExactError::ZeroSquareClass);
    }
    let sign = if x.is_negative() {
        -Integer::one()
    } else {
        Integer::one()
    };
    let n = (x.numer() * x.denom()).abs();
    Ok(sign * squarefree_part(&n)?)
}

fn squarefree_part(n: &Integer) -> Result<Integer, ExactError> {
    let mut rest = n.clone();
    let mut part = Integer::one();
    let mut p = Integer::from(2u32);
    // Trial division until the cofactor has no prime factor below its cube
    // root; past that point it is 1, a prime, a product of two primes or a
    // prime square.
    while &p * &p * &p <= rest {
        let mut e = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            part *= &p;
        }
        p += if p == Integer::from(2u32) { 1u32 } else { 2u32 };
        if p.to_u64().is_none_or(|v| v > 50_000_000) {
            return Err(ExactError::Uncertified(n.clone()));
        }
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        Ok(part)
    } else {
        Ok(part * rest)
    }
}
