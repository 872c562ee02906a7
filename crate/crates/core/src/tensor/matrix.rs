//! Sparse exact-integer matrices. Entries are stored as sorted
//! `(row, col, value)` triples with no explicit zeros, which keeps the
//! permutation-like operators of this crate (one nonzero per row) cheap at
//! every dimension the arity caps allow.

use super::scalar::IntScalar;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Sorted by (row, col); zero values are never stored.
    entries: Vec<(u32, u32, IntScalar)>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix {
            rows: n,
            cols: n,
            entries: (0..n as u32).map(|i| (i, i, IntScalar::ONE)).collect(),
        }
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, v: IntScalar) -> Self {
        if v.is_zero() {
            return Self::zero(n, n);
        }
        IntMatrix {
            rows: n,
            cols: n,
            entries: (0..n as u32).map(|i| (i, i, v.clone())).collect(),
        }
    }

    /// Build from unsorted triplets, merging duplicates and dropping zeros.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(u32, u32, IntScalar)>,
    ) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut entries: Vec<(u32, u32, IntScalar)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            debug_assert!((r as usize) < rows && (c as usize) < cols);
            match entries.last_mut() {
                Some((lr, lc, lv)) if *lr == r && *lc == c => {
                    *lv = &*lv + &v;
                }
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|(_, _, v)| !v.is_zero());
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// 0/1 matrix with a single 1 at `(r, c)`.
    pub fn unit(rows: usize, cols: usize, r: usize, c: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![(r as u32, c as u32, IntScalar::ONE)],
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u32, u32, IntScalar)] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> IntScalar {
        match self
            .entries
            .binary_search_by_key(&(r as u32, c as u32), |&(er, ec, _)| (er, ec))
        {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => IntScalar::ZERO,
        }
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let mut triplets = self.entries.clone();
        triplets.extend_from_slice(&other.entries);
        Ok(IntMatrix::from_triplets(self.rows, self.cols, triplets))
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(r, c, v)| (*r, *c, -v)).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        // row pointers for `other`
        let mut row_start = vec![0usize; other.rows + 1];
        for &(r, _, _) in &other.entries {
            row_start[r as usize + 1] += 1;
        }
        for i in 0..other.rows {
            row_start[i + 1] += row_start[i];
        }
        // dense accumulator per output row
        let mut acc: Vec<IntScalar> = vec![IntScalar::ZERO; other.cols];
        let mut touched: Vec<u32> = Vec::new();
        let mut out: Vec<(u32, u32, IntScalar)> = Vec::new();
        let mut i = 0;
        while i < self.entries.len() {
            let row = self.entries[i].0;
            touched.clear();
            while i < self.entries.len() && self.entries[i].0 == row {
                let (_, k, ref v) = self.entries[i];
                let (s, e) = (row_start[k as usize], row_start[k as usize + 1]);
                for (_, j, w) in &other.entries[s..e] {
                    let cur = &acc[*j as usize];
                    let upd = if cur.is_zero() {
                        touched.push(*j);
                        v * w
                    } else {
                        cur + &(v * w)
                    };
                    acc[*j as usize] = upd;
                }
                i += 1;
            }
            touched.sort_unstable();
            for &j in &touched {
                let v = std::mem::replace(&mut acc[j as usize], IntScalar::ZERO);
                if !v.is_zero() {
                    out.push((row, j, v));
                }
            }
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: out,
        })
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t: Vec<(u32, u32, IntScalar)> = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        t.sort_by_key(|&(r, c, _)| (r, c));
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: t,
        }
    }

    /// Kronecker product: `(A ⊗ B)[(i·rB + k), (j·cB + l)] = A[i,j]·B[k,l]`.
    pub fn kron(&self, other: &IntMatrix) -> IntMatrix {
        let mut triplets = Vec::with_capacity(self.nnz() * other.nnz());
        for (i, j, v) in &self.entries {
            for (k, l, w) in &other.entries {
                triplets.push((i * other.rows as u32 + k, j * other.cols as u32 + l, v * w));
            }
        }
        IntMatrix::from_triplets(self.rows * other.rows, self.cols * other.cols, triplets)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// All entries 0/1 with exactly one 1 per row (the shape of any
    /// linearized total map).
    pub fn is_function_matrix(&self) -> bool {
        if self.entries.len() != self.rows {
            return false;
        }
        self.entries
            .iter()
            .enumerate()
            .all(|(i, (r, _, v))| *r as usize == i && *v == IntScalar::ONE)
    }

    /// 0/1 with exactly one 1 per row and per column.
    pub fn is_permutation(&self) -> bool {
        if !self.is_function_matrix() || self.rows != self.cols {
            return false;
        }
        let mut seen = vec![false; self.cols];
        for (_, c, _) in &self.entries {
            if seen[*c as usize] {
                return false;
            }
            seen[*c as usize] = true;
        }
        true
    }

    /// First differing position against another matrix, as
    /// `(row, col, lhs, rhs)`.
    pub fn first_difference(
        &self,
        other: &IntMatrix,
    ) -> Option<(usize, usize, IntScalar, IntScalar)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((0, 0, IntScalar::ZERO, IntScalar::ZERO));
        }
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.entries.len() || j < other.entries.len() {
            let a = self.entries.get(i);
            let b = other.entries.get(j);
            match (a, b) {
                (Some(&(ra, ca, ref va)), Some(&(rb, cb, ref vb))) => {
                    if (ra, ca) == (rb, cb) {
                        if va != vb {
                            return Some((ra as usize, ca as usize, va.clone(), vb.clone()));
                        }
                        i += 1;
                        j += 1;
                    } else if (ra, ca) < (rb, cb) {
                        return Some((ra as usize, ca as usize, va.clone(), IntScalar::ZERO));
                    } else {
                        return Some((rb as usize, cb as usize, IntScalar::ZERO, vb.clone()));
                    }
                }
                (Some(&(ra, ca, ref va)), None) => {
                    return Some((ra as usize, ca as usize, va.clone(), IntScalar::ZERO))
                }
                (None, Some(&(rb, cb, ref vb))) => {
                    return Some((rb as usize, cb as usize, IntScalar::ZERO, vb.clone()))
                }
                (None, None) => unreachable!(),
            }
        }
        None
    }
}
