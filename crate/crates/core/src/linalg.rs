//! Integer matrices, Smith normal form and exact linear solving over ℤ, ℤ/N, ℚ and ℚ/ℤ.
//!
//! The elimination records every elementary operation, so `U` and `V` never have to be
//! materialized to solve a system: right-hand sides are pushed through the recorded row
//! operations and solutions are pulled back through the column operations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::qz::QZ;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("modulus must be positive")]
    Modulus,
    #[error("sublattice is not contained in the ambient lattice")]
    NotSublattice,
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone().into());
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigInt) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hconcat(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut m = IntMatrix::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                m.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        m
    }

    /// Vertical concatenation.
    pub fn vconcat(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        IntMatrix {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// An elementary operation on rows (or columns) of the matrix being reduced.
#[derive(Clone, Debug)]
enum Op {
    Swap(usize, usize),
    /// line `dst` += k · line `src`
    AddMul {
        src: usize,
        dst: usize,
        k: BigInt,
    },
    Negate(usize),
}

/// Values that integer matrices act on: ℤ, ℚ, ℚ/ℤ.
pub trait ZModuleElem: Clone {
    fn zero_elem() -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_scaled(&mut self, other: &Self, k: &BigInt);
    fn negate(&mut self);
}

impl ZModuleElem for BigInt {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, k: &BigInt) {
        *self += other * k;
    }
    fn negate(&mut self) {
        *self = -std::mem::take(self);
    }
}

impl ZModuleElem for BigRational {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, k: &BigInt) {
        *self += other * BigRational::from_integer(k.clone());
    }
    fn negate(&mut self) {
        *self = -self.clone();
    }
}

impl ZModuleElem for QZ {
    fn zero_elem() -> Self {
        QZ::zero()
    }
    fn is_zero_elem(&self) -> bool {
        QZ::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, k: &BigInt) {
        *self += &other.scale(k);
    }
    fn negate(&mut self) {
        *self = -&*self;
    }
}

fn apply_op<T: ZModuleElem>(v: &mut [T], op: &Op) {
    match op {
        Op::Swap(i, j) => v.swap(*i, *j),
        Op::AddMul { src, dst, k } => {
            let s = v[*src].clone();
            v[*dst].add_scaled(&s, k);
        }
        Op::Negate(i) => v[*i].negate(),
    }
}

/// Row operation applied to a column vector, transposed: `v ↦ Cᵀ v` for the column-op matrix `C`.
fn apply_col_op_to_vec<T: ZModuleElem>(v: &mut [T], op: &Op) {
    match op {
        Op::Swap(i, j) => v.swap(*i, *j),
        // column dst += k column src, i.e. C = I + k E[src][dst]; C y: y[src] += k y[dst]
        Op::AddMul { src, dst, k } => {
            let s = v[*dst].clone();
            v[*src].add_scaled(&s, k);
        }
        Op::Negate(i) => v[*i].negate(),
    }
}

fn invert_op(op: &Op) -> Op {
    match op {
        Op::AddMul { src, dst, k } => Op::AddMul {
            src: *src,
            dst: *dst,
            k: -k,
        },
        other => other.clone(),
    }
}

/// Entry type for the elimination; arithmetic reports overflow with `None`.
trait Entry: Clone + fmt::Debug {
    fn is_nil(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn is_neg(&self) -> bool;
    fn quot(&self, d: &Self) -> Self;
    fn divides(&self, other: &Self) -> bool;
    /// `self - q * other`
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self>;
    fn plus(&self, other: &Self) -> Option<Self>;
    fn negated(&self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Entry for i64 {
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, other: &Self) -> bool {
        other % self == 0
    }
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self> {
        q.checked_mul(*other).and_then(|p| self.checked_sub(p))
    }
    fn plus(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, other: &Self) -> bool {
        (other % self).is_zero()
    }
    fn sub_mul(&self, q: &Self, other: &Self) -> Option<Self> {
        Some(self - q * other)
    }
    fn plus(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Reduction {
    diag: Vec<BigInt>,
    row_ops: Vec<Op>,
    col_ops: Vec<Op>,
}

fn reduce<T: Entry>(mut a: Vec<Vec<T>>, rows: usize, cols: usize) -> Option<Reduction> {
    let mut row_ops = Vec::new();
    let mut col_ops = Vec::new();
    let mut diag = Vec::new();
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // smallest nonzero magnitude in the trailing block, first in row-major order
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if x.is_nil() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => x.cmp_abs(&a[bi][bj]) == Ordering::Less,
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Some(Reduction {
                    diag,
                    row_ops,
                    col_ops,
                });
            };
            if pi != t {
                a.swap(pi, t);
                row_ops.push(Op::Swap(pi, t));
            }
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(pj, t);
                }
                col_ops.push(Op::Swap(pj, t));
            }
            let mut clean = true;
            let pivot = a[t][t].clone();
            for i in t + 1..rows {
                if a[i][t].is_nil() {
                    continue;
                }
                let q = a[i][t].quot(&pivot);
                if !q.is_nil() {
                    let (top, bottom) = a.split_at_mut(i);
                    let src = &top[t];
                    let dst = &mut bottom[0];
                    for j in t..cols {
                        if !src[j].is_nil() {
                            dst[j] = dst[j].sub_mul(&q, &src[j])?;
                        }
                    }
                    row_ops.push(Op::AddMul {
                        src: t,
                        dst: i,
                        k: q.negated()?.to_big(),
                    });
                }
                if !a[i][t].is_nil() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_nil() {
                    continue;
                }
                let q = a[t][j].quot(&pivot);
                if !q.is_nil() {
                    for row in a.iter_mut().skip(t) {
                        if !row[t].is_nil() {
                            row[j] = row[j].sub_mul(&q, &row[t])?;
                        }
                    }
                    col_ops.push(Op::AddMul {
                        src: t,
                        dst: j,
                        k: q.negated()?.to_big(),
                    });
                }
                if !a[t][j].is_nil() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !pivot.divides(&a[i][j])));
            if let Some(i) = offender {
                let (top, bottom) = a.split_at_mut(i);
                let dst = &mut top[t];
                let src = &bottom[0];
                for j in t..cols {
                    if !src[j].is_nil() {
                        dst[j] = dst[j].plus(&src[j])?;
                    }
                }
                row_ops.push(Op::AddMul {
                    src: i,
                    dst: t,
                    k: BigInt::one(),
                });
                continue;
            }
            break;
        }
        if a[t][t].is_neg() {
            a[t][t] = a[t][t].negated()?;
            row_ops.push(Op::Negate(t));
        }
        diag.push(a[t][t].to_big());
    }
    Some(Reduction {
        diag,
        row_ops,
        col_ops,
    })
}

/// Smith normal form `U·M·V = D` with the elimination history kept for solving.
#[derive(Clone)]
pub struct Smith {
    rows: usize,
    cols: usize,
    /// Nonzero diagonal entries `d_1 | d_2 | … | d_r`, all positive.
    diag: Vec<BigInt>,
    row_ops: Vec<Op>,
    col_ops: Vec<Op>,
}

impl fmt::Debug for Smith {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Smith")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("diag", &self.diag)
            .finish()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    Smith::new(m)
}

impl Smith {
    pub fn new(m: &IntMatrix) -> Smith {
        let small: Option<Vec<Vec<i64>>> = (0..m.rows)
            .map(|i| {
                m.row(i)
                    .iter()
                    .map(|x| x.to_i64().filter(|v| v.unsigned_abs() < 1 << 40))
                    .collect()
            })
            .collect();
        let red = small
            .and_then(|a| reduce(a, m.rows, m.cols))
            .or_else(|| {
                let a: Vec<Vec<BigInt>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
                reduce(a, m.rows, m.cols)
            })
            .expect("bigint elimination cannot overflow");
        Smith {
            rows: m.rows,
            cols: m.cols,
            diag: red.diag,
            row_ops: red.row_ops,
            col_ops: red.col_ops,
        }
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// The nonzero invariant factors.
    pub fn diagonal(&self) -> &[BigInt] {
        &self.diag
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn d(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (i, x) in self.diag.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }

    pub fn u(&self) -> IntMatrix {
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows);
        for j in 0..self.rows {
            let mut e = vec![BigInt::zero(); self.rows];
            e[j] = BigInt::one();
            cols.push(self.apply_u(e));
        }
        IntMatrix::from_columns(self.rows, &cols)
    }

    pub fn v(&self) -> IntMatrix {
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let mut e = vec![BigInt::zero(); self.cols];
            e[j] = BigInt::one();
            cols.push(self.apply_v(e));
        }
        IntMatrix::from_columns(self.cols, &cols)
    }

    /// `U · b`
    pub fn apply_u<T: ZModuleElem>(&self, mut b: Vec<T>) -> Vec<T> {
        for op in &self.row_ops {
            apply_op(&mut b, op);
        }
        b
    }

    /// `U⁻¹ · b`
    pub fn apply_u_inv<T: ZModuleElem>(&self, mut b: Vec<T>) -> Vec<T> {
        for op in self.row_ops.iter().rev() {
            apply_op(&mut b, &invert_op(op));
        }
        b
    }

    /// `V · y`
    pub fn apply_v<T: ZModuleElem>(&self, mut y: Vec<T>) -> Vec<T> {
        for op in self.col_ops.iter().rev() {
            apply_col_op_to_vec(&mut y, op);
        }
        y
    }

    fn check_rhs(&self, len: usize) -> Result<(), LinalgError> {
        if len != self.rows {
            return Err(LinalgError::Dimension {
                expected: self.rows,
                got: len,
            });
        }
        Ok(())
    }

    pub fn solve_integer(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
        self.check_rhs(b.len())?;
        let c = self.apply_u(b.to_vec());
        let r = self.rank();
        if c[r..].iter().any(|x| !Zero::is_zero(x)) {
            return Ok(None);
        }
        let mut y = vec![BigInt::zero(); self.cols];
        for i in 0..r {
            let (q, rem) = c[i].div_rem(&self.diag[i]);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
        Ok(Some(self.apply_v(y)))
    }

    pub fn solve_mod(&self, b: &[BigInt], n: &BigInt) -> Result<Option<Vec<BigInt>>, LinalgError> {
        self.check_rhs(b.len())?;
        if !n.is_positive() {
            return Err(LinalgError::Modulus);
        }
        let c: Vec<BigInt> = self
            .apply_u(b.to_vec())
            .into_iter()
            .map(|x| x.mod_floor(n))
            .collect();
        let r = self.rank();
        if c[r..].iter().any(|x| !Zero::is_zero(x)) {
            return Ok(None);
        }
        let mut y = vec![BigInt::zero(); self.cols];
        for i in 0..r {
            let d = self.diag[i].mod_floor(n);
            let g = d.gcd(n);
            if !(&c[i] % &g).is_zero() {
                return Ok(None);
            }
            let m = n / &g;
            if m.is_one() {
                continue;
            }
            let inv = mod_inverse(&(&d / &g), &m).expect("coprime after dividing by gcd");
            y[i] = ((&c[i] / &g) * inv).mod_floor(&m);
        }
        Ok(Some(
            self.apply_v(y)
                .into_iter()
                .map(|x| x.mod_floor(n))
                .collect(),
        ))
    }

    pub fn solve_rational(
        &self,
        b: &[BigRational],
    ) -> Result<Option<Vec<BigRational>>, LinalgError> {
        self.check_rhs(b.len())?;
        let c = self.apply_u(b.to_vec());
        let r = self.rank();
        if c[r..].iter().any(|x| !Zero::is_zero(x)) {
            return Ok(None);
        }
        let mut y = vec![BigRational::zero(); self.cols];
        for i in 0..r {
            y[i] = &c[i] / BigRational::from_integer(self.diag[i].clone());
        }
        Ok(Some(self.apply_v(y)))
    }

    /// Solves over ℚ/ℤ, where every `d_i · y = c` has a solution.
    pub fn solve_qz(&self, b: &[QZ]) -> Result<Option<Vec<QZ>>, LinalgError> {
        self.check_rhs(b.len())?;
        let c = self.apply_u(b.to_vec());
        let r = self.rank();
        if c[r..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let mut y = vec![QZ::zero(); self.cols];
        for i in 0..r {
            y[i] = c[i].div_int(&self.diag[i]);
        }
        Ok(Some(self.apply_v(y)))
    }

    /// A ℤ-basis of the integer kernel.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.cols)
            .map(|j| {
                let mut e = vec![BigInt::zero(); self.cols];
                e[j] = BigInt::one();
                self.apply_v(e)
            })
            .collect()
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
    Smith::new(a).solve_integer(b)
}

pub fn solve_mod(
    a: &IntMatrix,
    b: &[BigInt],
    n: &BigInt,
) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if !n.is_positive() {
        return Err(LinalgError::Modulus);
    }
    Smith::new(a).solve_mod(b, n)
}

pub fn solve_rational(
    a: &IntMatrix,
    b: &[BigRational],
) -> Result<Option<Vec<BigRational>>, LinalgError> {
    Smith::new(a).solve_rational(b)
}

pub fn solve_qz(a: &IntMatrix, b: &[QZ]) -> Result<Option<Vec<QZ>>, LinalgError> {
    Smith::new(a).solve_qz(b)
}

/// Invariant factors of `L / L'` where `L` and `L' ⊆ L` are lattices in `ℤ^dim` given by
/// generators. Factors equal to 1 are dropped; a free summand shows up as a 0.
pub fn quotient_invariants(
    dim: usize,
    big: &[Vec<BigInt>],
    small: &[Vec<BigInt>],
) -> Result<Vec<BigInt>, LinalgError> {
    let big_m = IntMatrix::from_columns(dim, big);
    let s = Smith::new(&big_m);
    let r = s.rank();
    let mut coords: Vec<Vec<BigInt>> = Vec::with_capacity(small.len());
    for g in small {
        if g.len() != dim {
            return Err(LinalgError::Dimension {
                expected: dim,
                got: g.len(),
            });
        }
        let c = s.apply_u(g.clone());
        if c[r..].iter().any(|x| !Zero::is_zero(x)) {
            return Err(LinalgError::NotSublattice);
        }
        let mut v = Vec::with_capacity(r);
        for i in 0..r {
            let (q, rem) = c[i].div_rem(&s.diag[i]);
            if !rem.is_zero() {
                return Err(LinalgError::NotSublattice);
            }
            v.push(q);
        }
        coords.push(v);
    }
    let c = IntMatrix::from_columns(r, &coords);
    let sc = Smith::new(&c);
    let mut out: Vec<BigInt> = sc
        .diagonal()
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();
    out.extend(std::iter::repeat_n(BigInt::zero(), r - sc.rank()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_smith(m: &IntMatrix) -> Smith {
        let s = Smith::new(m);
        let (u, d, v) = (s.u(), s.d(), s.v());
        assert_eq!(u.mul(m).mul(&v), d, "U M V != D");
        assert!(u.determinant().abs().is_one());
        assert!(v.determinant().abs().is_one());
        assert!(d.is_diagonal());
        for w in s.diagonal().windows(2) {
            assert!(
                (&w[1] % &w[0]).is_zero(),
                "divisibility chain broken: {:?}",
                s.diagonal()
            );
        }
        assert!(s.diagonal().iter().all(|x| x.is_positive()));
        s
    }

    #[test]
    fn identity_is_its_own_form() {
        let s = check_smith(&IntMatrix::identity(2));
        assert_eq!(s.diagonal(), &big(&[1, 1])[..]);
    }

    #[test]
    fn diagonal_reordered() {
        let s = check_smith(&IntMatrix::from_rows(&[vec![4, 0], vec![0, 2]]));
        assert_eq!(s.diagonal(), &big(&[2, 4])[..]);
    }

    #[test]
    fn two_by_two_example() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = check_smith(&m);
        assert_eq!(s.diagonal(), &big(&[2, 4])[..]);
        assert_eq!(m.determinant().abs(), BigInt::from(8));
    }

    #[test]
    fn rectangular_and_zero() {
        let s = check_smith(&IntMatrix::from_rows(&[vec![0, 0, 0], vec![0, 0, 0]]));
        assert_eq!(s.rank(), 0);
        let s = check_smith(&IntMatrix::from_rows(&[vec![2, 3, 4], vec![5, 6, 7]]));
        assert_eq!(s.diagonal(), &big(&[1, 3])[..]);
    }

    #[test]
    fn large_entries_fall_back_to_bigint() {
        let h = BigInt::from(1u64 << 62);
        let m = IntMatrix::from_rows(&[
            vec![h.clone(), BigInt::from(3)],
            vec![BigInt::from(7), h.clone() * 5],
        ]);
        check_smith(&m);
    }

    #[test]
    fn integer_solve_examples() {
        let s = solve_integer(&IntMatrix::identity(2), &big(&[3, 5])).unwrap();
        assert_eq!(s, Some(big(&[3, 5])));
        let two = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(solve_integer(&two, &big(&[3])).unwrap(), None);
        assert_eq!(solve_integer(&two, &big(&[4])).unwrap(), Some(big(&[2])));
        assert!(matches!(
            solve_integer(&two, &big(&[1, 2])),
            Err(LinalgError::Dimension { .. })
        ));
    }

    #[test]
    fn modular_solve_examples() {
        let four = BigInt::from(4);
        assert_eq!(
            solve_mod(&IntMatrix::from_rows(&[vec![2]]), &big(&[1]), &four).unwrap(),
            None
        );
        assert_eq!(
            solve_mod(&IntMatrix::from_rows(&[vec![3]]), &big(&[1]), &four).unwrap(),
            Some(big(&[3]))
        );
        // x + y = 1, x - y = 1 (mod 2): the brute-force solution set is {(1,0), (0,1)}
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![1, -1]]);
        let two = BigInt::from(2);
        let brute: Vec<Vec<BigInt>> = (0..2)
            .flat_map(|x| (0..2).map(move |y| big(&[x, y])))
            .filter(|v| {
                let r = a.mul_vec(v);
                r.iter().all(|e| e.mod_floor(&two).is_one())
            })
            .collect();
        assert_eq!(brute.len(), 2);
        let x = solve_mod(&a, &big(&[1, 1]), &two).unwrap().unwrap();
        assert!(brute.contains(&x));
        let again = solve_mod(&a, &big(&[1, 1]), &two).unwrap().unwrap();
        assert_eq!(x, again);
        assert_eq!(
            solve_mod(&a, &big(&[1, 1]), &BigInt::zero()),
            Err(LinalgError::Modulus)
        );
    }

    #[test]
    fn rational_and_qz_solves() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let b = vec![
            BigRational::new(1.into(), 1.into()),
            BigRational::new(1.into(), 2.into()),
        ];
        let x = solve_rational(&a, &b).unwrap().unwrap();
        assert_eq!(x[0], BigRational::new(1.into(), 2.into()));
        assert_eq!(x[1], BigRational::new(1.into(), 6.into()));

        let a = IntMatrix::from_rows(&[vec![2], vec![2]]);
        let x = solve_qz(&a, &[QZ::new(1, 2), QZ::new(1, 2)])
            .unwrap()
            .unwrap();
        assert_eq!(x[0].scale_i64(2), QZ::new(1, 2));
        assert_eq!(solve_qz(&a, &[QZ::new(1, 2), QZ::zero()]).unwrap(), None);
    }

    #[test]
    fn kernel_and_quotients() {
        let a = IntMatrix::from_rows(&[vec![1, 2, 3]]);
        let k = Smith::new(&a).kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v)[0].is_zero());
        }
        let inv = quotient_invariants(
            2,
            &[big(&[1, 0]), big(&[0, 1])],
            &[big(&[2, 0]), big(&[0, 4])],
        )
        .unwrap();
        assert_eq!(inv, big(&[2, 4]));
        let inv = quotient_invariants(2, &[big(&[1, 0]), big(&[0, 1])], &[big(&[2, 0])]).unwrap();
        assert_eq!(inv, big(&[2, 0]));
        assert_eq!(
            quotient_invariants(2, &[big(&[2, 0])], &[big(&[1, 0])]),
            Err(LinalgError::NotSublattice)
        );
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-6i64..7, c), r)
                .prop_map(|rows| IntMatrix::from_rows(&rows))
        })
    }

    proptest! {
        #[test]
        fn smith_decomposition_is_exact(m in small_matrix()) {
            check_smith(&m);
        }

        #[test]
        fn integer_solve_agrees_with_box_search(
            rows in prop::collection::vec(prop::collection::vec(-3i64..4, 2), 1..4),
            b in prop::collection::vec(-4i64..5, 3),
        ) {
            let a = IntMatrix::from_rows(&rows);
            let b = big(&b[..rows.len()]);
            let s = Smith::new(&a);
            match s.solve_integer(&b).unwrap() {
                Some(x) => prop_assert_eq!(a.mul_vec(&x), b),
                None => {
                    let bound: i64 = s
                        .diagonal()
                        .iter()
                        .fold(BigInt::one(), |p, d| p * d)
                        .to_i64()
                        .unwrap_or(64)
                        .clamp(8, 64);
                    for x0 in -bound..=bound {
                        for x1 in -bound..=bound {
                            prop_assert_ne!(a.mul_vec(&big(&[x0, x1])), b.clone());
                        }
                    }
                }
            }
        }

        #[test]
        fn modular_solutions_check(
            rows in prop::collection::vec(prop::collection::vec(-5i64..6, 3), 1..4),
            b in prop::collection::vec(0i64..12, 3),
            n in 2i64..13,
        ) {
            let a = IntMatrix::from_rows(&rows);
            let n = BigInt::from(n);
            let b = big(&b[..rows.len()]);
            let found = solve_mod(&a, &b, &n).unwrap();
            let nn = n.to_i64().unwrap();
            let mut exists = false;
            for x0 in 0..nn { for x1 in 0..nn { for x2 in 0..nn {
                let r = a.mul_vec(&big(&[x0, x1, x2]));
                if r.iter().zip(&b).all(|(u, v)| (u - v).mod_floor(&n).is_zero()) { exists = true; }
            }}}
            prop_assert_eq!(found.is_some(), exists);
            if let Some(x) = found {
                let r = a.mul_vec(&x);
                prop_assert!(r.iter().zip(&b).all(|(u, v)| (u - v).mod_floor(&n).is_zero()));
            }
        }
    }
}
