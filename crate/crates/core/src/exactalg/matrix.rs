use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Poly, Rat};
use crate::coords::Coords;
use crate::error::{Error, Result};
use crate::flagcomb::Subset;

/// The ring operations a matrix entry needs. Constants are built from an
/// existing element because polynomials carry their variable count.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

impl Ring for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Ring for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        Poly::one(self.nvars())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<R> {
    rows: usize,
    cols: usize,
    entries: Vec<R>,
}

impl<R: Ring> Mat<R> {
    pub fn new(rows: usize, cols: usize, entries: Vec<R>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Mat {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize, template: &R) -> Self {
        let zero = template.zero_like();
        let one = template.one_like();
        let entries = (0..n * n)
            .map(|i| if i / n == i % n { one.clone() } else { zero.clone() })
            .collect();
        Mat {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &R {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: R) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[R] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn map<S: Ring>(&self, f: impl FnMut(&R) -> S) -> Mat<S> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mat_mul(&self, other: &Mat<R>) -> Result<Mat<R>> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.get(i, 0).zero_like();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero_elem() && !b.is_zero_elem() {
                        acc = acc.add_ref(&a.mul_ref(b));
                    }
                }
                entries.push(acc);
            }
        }
        Ok(Mat {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    fn check_square_for(&self, subset: &Subset) -> Result<()> {
        if self.rows != self.cols || subset.n() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix and subset of [{}]",
                self.rows,
                self.cols,
                subset.n()
            )));
        }
        Ok(())
    }

    /// Minor in the top `|columns|` rows, by Laplace expansion along the last
    /// row with sub-minors memoized by column set.
    pub fn cofactor_top_minor(&self, columns: u32) -> R {
        let mut memo = HashMap::new();
        self.cofactor_memo(columns, &mut memo)
    }

    fn cofactor_memo(&self, columns: u32, memo: &mut HashMap<u32, R>) -> R {
        if columns == 0 {
            return self.entries[0].one_like();
        }
        if let Some(v) = memo.get(&columns) {
            return v.clone();
        }
        let row = columns.count_ones() as usize - 1;
        let mut acc = self.entries[0].zero_like();
        let mut t = 0;
        for col in 0..self.cols {
            if columns & (1 << col) == 0 {
                continue;
            }
            let entry = self.get(row, col);
            if !entry.is_zero_elem() {
                let sub = self.cofactor_memo(columns & !(1 << col), memo);
                let term = entry.mul_ref(&sub);
                acc = if (row + t).is_multiple_of(2) {
                    acc.add_ref(&term)
                } else {
                    acc.sub_ref(&term)
                };
            }
            t += 1;
        }
        memo.insert(columns, acc.clone());
        acc
    }

    /// Every top-justified minor, indexed by column bitmask.
    fn all_top_minors_by_mask(&self) -> Vec<R> {
        let n = self.cols;
        let mut table: Vec<Option<R>> = vec![None; 1 << n];
        table[0] = Some(self.entries[0].one_like());
        let mut masks: Vec<u32> = (1..1u32 << n).collect();
        masks.sort_by_key(|m| m.count_ones());
        for mask in masks {
            let row = mask.count_ones() as usize - 1;
            if row >= self.rows {
                continue;
            }
            let mut acc = self.entries[0].zero_like();
            let mut t = 0;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let entry = self.get(row, col);
                let sub = table[(mask & !(1 << col)) as usize].as_ref().unwrap();
                if !entry.is_zero_elem() && !sub.is_zero_elem() {
                    let term = entry.mul_ref(sub);
                    acc = if (row + t).is_multiple_of(2) {
                        acc.add_ref(&term)
                    } else {
                        acc.sub_ref(&term)
                    };
                }
                t += 1;
            }
            table[mask as usize] = Some(acc);
        }
        let zero = self.entries[0].zero_like();
        table.into_iter().map(|x| x.unwrap_or_else(|| zero.clone())).collect()
    }
}

impl Mat<Poly> {
    pub fn top_minor(&self, columns: &Subset) -> Result<Poly> {
        self.check_square_for(columns)?;
        Ok(self.cofactor_top_minor(columns.mask()))
    }

    /// Every Plücker coordinate as a polynomial, in canonical order.
    pub fn all_pluecker(&self) -> Result<Coords<Poly>> {
        if self.rows != self.cols || self.rows < 2 {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix",
                self.rows, self.cols
            )));
        }
        let table = self.all_top_minors_by_mask();
        Ok(Coords::from_fn(self.rows, |s| table[s.mask() as usize].clone()))
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Mat<Rat>> {
        let entries = self
            .entries
            .iter()
            .map(|p| super::poly_eval(p, point))
            .collect::<Result<Vec<_>>>()?;
        Mat::new(self.rows, self.cols, entries)
    }
}

impl Mat<Rat> {
    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| super::rat_int(x)).collect())
                .collect(),
        )
    }

    /// Determinant of the square submatrix on the given rows and columns,
    /// by fraction-free (Bareiss) elimination after clearing denominators.
    fn bareiss(&self, rows: &[usize], cols: &[usize]) -> Rat {
        let k = rows.len();
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(k);
        for &r in rows {
            let lcm = cols
                .iter()
                .fold(BigInt::one(), |l, &c| l.lcm(self.get(r, c).denom()));
            let row: Vec<BigInt> = cols
                .iter()
                .map(|&c| {
                    let x = self.get(r, c);
                    x.numer() * (&lcm / x.denom())
                })
                .collect();
            scale *= &lcm;
            a.push(row);
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for p in 0..k {
            if a[p][p].is_zero() {
                let Some(swap) = (p + 1..k).find(|&i| !a[i][p].is_zero()) else {
                    return Rat::zero();
                };
                a.swap(p, swap);
                sign = -sign;
            }
            for i in p + 1..k {
                for j in p + 1..k {
                    let v = (&a[i][j] * &a[p][p] - &a[i][p] * &a[p][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][p] = BigInt::zero();
            }
            prev = a[p][p].clone();
        }
        if k == 0 {
            return Rat::one();
        }
        Rat::new(sign * &a[k - 1][k - 1], scale)
    }

    pub fn determinant(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.bareiss(&idx, &idx))
    }

    pub fn top_minor(&self, columns: &Subset) -> Result<Rat> {
        self.check_square_for(columns)?;
        let cols: Vec<usize> = columns.elements().map(|e| e as usize - 1).collect();
        let rows: Vec<usize> = (0..cols.len()).collect();
        Ok(self.bareiss(&rows, &cols))
    }

    /// Plücker coordinates of the flag spanned by the top rows.
    pub fn all_pluecker(&self) -> Result<Coords<Rat>> {
        if self.rows != self.cols || self.rows < 2 {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
        let mut out = Vec::with_capacity(crate::flagcomb::num_coordinates(self.rows));
        for s in crate::flagcomb::coordinate_order(self.rows) {
            out.push(self.top_minor(&s)?);
        }
        Ok(Coords::from_values(self.rows, out))
    }
}
