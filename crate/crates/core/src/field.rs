//! Finite-field arithmetic and dense matrices over GF(2), GF(3), GF(4), GF(256).
//!
//! Elements are stored as `u8` values in `0..q`. GF(4) is GF(2)[x]/(x^2+x+1)
//! with the two low bits as polynomial coefficients; GF(256) uses the
//! polynomial 0x11B. All arithmetic goes through precomputed tables.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Supported field orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldOrder {
    Q2,
    Q3,
    Q4,
    Q256,
}

impl FieldOrder {
    pub const ALL: [FieldOrder; 4] = [
        FieldOrder::Q2,
        FieldOrder::Q3,
        FieldOrder::Q4,
        FieldOrder::Q256,
    ];

    pub fn from_order(q: usize) -> Result<FieldOrder> {
        match q {
            2 => Ok(FieldOrder::Q2),
            3 => Ok(FieldOrder::Q3),
            4 => Ok(FieldOrder::Q4),
            256 => Ok(FieldOrder::Q256),
            other => Err(Error::InvalidCodeParameters(format!(
                "unsupported field order {other}; expected one of 2, 3, 4, 256"
            ))),
        }
    }

    pub fn order(self) -> usize {
        match self {
            FieldOrder::Q2 => 2,
            FieldOrder::Q3 => 3,
            FieldOrder::Q4 => 4,
            FieldOrder::Q256 => 256,
        }
    }

    fn tables(self) -> &'static Tables {
        static T2: OnceLock<Tables> = OnceLock::new();
        static T3: OnceLock<Tables> = OnceLock::new();
        static T4: OnceLock<Tables> = OnceLock::new();
        static T256: OnceLock<Tables> = OnceLock::new();
        let (slot, q) = match self {
            FieldOrder::Q2 => (&T2, 2usize),
            FieldOrder::Q3 => (&T3, 3),
            FieldOrder::Q4 => (&T4, 4),
            FieldOrder::Q256 => (&T256, 256),
        };
        slot.get_or_init(|| Tables::build(q))
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        let t = self.tables();
        t.add[a as usize * t.q + b as usize]
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        self.tables().neg[a as usize]
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        let t = self.tables();
        t.mul[a as usize * t.q + b as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(self, a: u8) -> Option<u8> {
        if a == 0 {
            None
        } else {
            Some(self.tables().inv[a as usize])
        }
    }

    pub fn pow(self, mut base: u8, mut exp: u32) -> u8 {
        let mut acc = 1u8;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Checks that a value is a valid element of this field.
    pub fn check_element(self, v: u8) -> Result<()> {
        if (v as usize) < self.order() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "{v} is not an element of the field of order {}",
                self.order()
            )))
        }
    }
}

struct Tables {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl Tables {
    fn build(q: usize) -> Tables {
        let add_fn: fn(u8, u8) -> u8 = match q {
            2 => |a, b| a ^ b,
            3 => |a, b| (a + b) % 3,
            4 => |a, b| a ^ b,
            256 => |a, b| a ^ b,
            _ => unreachable!(),
        };
        let mul_fn: fn(u8, u8) -> u8 = match q {
            2 => |a, b| a & b,
            3 => |a, b| (a * b) % 3,
            4 => mul_gf4,
            256 => mul_gf256,
            _ => unreachable!(),
        };
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = add_fn(a as u8, b as u8);
                mul[a * q + b] = mul_fn(a as u8, b as u8);
            }
        }
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as u8;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        Tables { q, add, mul, neg, inv }
    }
}

// Polynomial product over GF(2) reduced by x^2 + x + 1.
fn mul_gf4(a: u8, b: u8) -> u8 {
    let mut prod = 0u8;
    for i in 0..2 {
        if a >> i & 1 == 1 {
            prod ^= b << i;
        }
    }
    for bit in (2..4).rev() {
        if prod >> bit & 1 == 1 {
            prod ^= 0b111 << (bit - 2);
        }
    }
    prod
}

// Carry-less product reduced by x^8 + x^4 + x^3 + x + 1 (0x11B).
fn mul_gf256(a: u8, b: u8) -> u8 {
    let mut prod = 0u16;
    for i in 0..8 {
        if a >> i & 1 == 1 {
            prod ^= (b as u16) << i;
        }
    }
    for bit in (8..16).rev() {
        if prod >> bit & 1 == 1 {
            prod ^= 0x11B << (bit - 8);
        }
    }
    prod as u8
}

/// Dense row-major matrix over one of the supported fields.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldOrder,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over GF({})", self.rows, self.cols, self.field.order())?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(field: FieldOrder, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: FieldOrder, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: FieldOrder, rows: &[Vec<u8>]) -> Result<Matrix> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::InvalidInput("ragged rows in matrix literal".into()));
            }
            for &v in row {
                field.check_element(v)?;
                data.push(v);
            }
        }
        Ok(Matrix { field, rows: rows.len(), cols: ncols, data })
    }

    pub fn from_flat(field: FieldOrder, rows: usize, cols: usize, data: Vec<u8>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "flat matrix data has {} entries, expected {}x{}={}",
                data.len(),
                rows,
                cols,
                rows * cols
            )));
        }
        for &v in &data {
            field.check_element(v)?;
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn field(&self) -> FieldOrder {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn as_flat(&self) -> &[u8] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Horizontal concatenation [self | rhs].
    pub fn augment(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.field != rhs.field {
            return Err(Error::InvalidInput("augment: field mismatch".into()));
        }
        if self.rows != rhs.rows {
            return Err(Error::InvalidInput(format!(
                "augment: row mismatch ({} vs {})",
                self.rows, rhs.rows
            )));
        }
        let mut m = Matrix::zero(self.field, self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
            for c in 0..rhs.cols {
                m.set(r, self.cols + c, rhs.get(r, c));
            }
        }
        Ok(m)
    }

    /// New matrix keeping the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Matrix> {
        let mut m = Matrix::zero(self.field, self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            if c >= self.cols {
                return Err(Error::InvalidInput(format!(
                    "column index {c} out of range for {} columns",
                    self.cols
                )));
            }
            for r in 0..self.rows {
                m.set(r, j, self.get(r, c));
            }
        }
        Ok(m)
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.field != rhs.field {
            return Err(Error::InvalidInput("mul: field mismatch".into()));
        }
        if self.cols != rhs.rows {
            return Err(Error::InvalidInput(format!(
                "mul: inner dimension mismatch ({} vs {})",
                self.cols, rhs.rows
            )));
        }
        let f = self.field;
        let mut out = Matrix::zero(f, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let t = f.mul(a, rhs.get(k, c));
                    out.set(r, c, f.add(out.get(r, c), t));
                }
            }
        }
        Ok(out)
    }

    /// Row-vector times matrix; `v.len()` must equal `self.rows`.
    pub fn left_mul_vec(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.rows {
            return Err(Error::InvalidInput(format!(
                "vector length {} does not match {} rows",
                v.len(),
                self.rows
            )));
        }
        let f = self.field;
        let mut out = vec![0u8; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for c in 0..self.cols {
                let t = f.mul(a, self.get(r, c));
                out[c] = f.add(out[c], t);
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form in place; returns the pivot column indices.
    fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    let tmp = self.get(row, c);
                    self.set(row, c, self.get(p, c));
                    self.set(p, c, tmp);
                }
            }
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in col..self.cols {
                self.set(row, c, f.mul(inv, self.get(row, c)));
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let t = f.mul(factor, self.get(row, c));
                    self.set(r, c, f.sub(self.get(r, c), t));
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.rref().len()
    }

    /// Solves `self * X = b` for one solution, or `None` when inconsistent
    /// (free variables are set to zero).
    pub fn solve_right(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if self.field != b.field {
            return Err(Error::InvalidInput("solve_right: field mismatch".into()));
        }
        if self.rows != b.rows {
            return Err(Error::InvalidInput(format!(
                "solve_right: row mismatch ({} vs {})",
                self.rows, b.rows
            )));
        }
        let mut aug = self.augment(b)?;
        let pivots = aug.rref();
        // Any pivot landing in the augmented block means b is outside the
        // column space of self.
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zero(self.field, self.cols, b.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(c, j, aug.get(r, self.cols + j));
            }
        }
        Ok(Some(x))
    }
}
