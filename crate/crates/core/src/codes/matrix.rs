use std::fmt;

use crate::codes::field::Field;
use crate::error::{Error, Result};

/// Dense matrix over a small finite field, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct GfMatrix {
    field: &'static Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GfMatrix(q={}, {}x{}) ", self.field.size(), self.rows, self.cols)?;
        f.debug_list().entries(self.row_iter()).finish()
    }
}

impl GfMatrix {
    pub fn zeros(field: &'static Field, rows: usize, cols: usize) -> Self {
        GfMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &'static Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Rows must all have length `cols` and entries below q.
    pub fn from_rows(field: &'static Field, cols: usize, rows: Vec<Vec<u8>>) -> Result<Self> {
        let mut m = Self::zeros(field, 0, cols);
        for r in rows {
            m.push_row(&r)?;
        }
        Ok(m)
    }

    pub fn push_row(&mut self, row: &[u8]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "row has {} entries, expected {}",
                row.len(),
                self.cols
            )));
        }
        if let Some(&bad) = row.iter().find(|&&a| !self.field.contains(a)) {
            return Err(Error::InvalidArgument(format!(
                "entry {bad} is not an element of GF({})",
                self.field.size()
            )));
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u8) {
        assert!(self.field.contains(value), "value outside the field");
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u8]> {
        (0..self.rows).map(|r| self.row(r))
    }

    /// Rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let f = self.field;
        let mut rows: Vec<Vec<u8>> = self.row_iter().map(<[u8]>::to_vec).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let inv = f.inv(rows[rank][c]).expect("nonzero pivot");
            for x in rows[rank].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[c] != 0 {
                    let factor = row[c];
                    for (x, &p) in row.iter_mut().zip(&pivot) {
                        *x = f.sub(*x, f.mul(factor, p));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// True when `v` is a linear combination of the rows.
    pub fn spans(&self, v: &[u8]) -> Result<bool> {
        let mut extended = self.clone();
        extended.push_row(v)?;
        Ok(extended.rank() == self.rank())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_ranks() {
        let f2 = Field::get(2).unwrap();
        assert_eq!(GfMatrix::identity(f2, 4).rank(), 4);
        let m = GfMatrix::from_rows(f2, 3, vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        // rows sum to zero over GF(2)
        assert_eq!(m.rank(), 2);
        let f3 = Field::get(3).unwrap();
        let m = GfMatrix::from_rows(f3, 3, vec![vec![1, 2, 0], vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        // over GF(3): r1 - r3 = (0,2,1) = 2*r2, so dependent
        assert_eq!(m.rank(), 2);
        assert!(m.spans(&[2, 1, 0]).unwrap());
        assert!(!m.spans(&[1, 0, 0]).unwrap());
    }

    #[test]
    fn rejects_bad_rows() {
        let f2 = Field::get(2).unwrap();
        assert!(matches!(
            GfMatrix::from_rows(f2, 2, vec![vec![1, 0, 1]]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            GfMatrix::from_rows(f2, 2, vec![vec![1, 2]]),
            Err(Error::InvalidArgument(_))
        ));
    }

    fn arb_matrix() -> impl Strategy<Value = (u32, Vec<Vec<u8>>, Vec<usize>)> {
        (proptest::sample::select(super::super::field::SUPPORTED_FIELDS.to_vec()), 1usize..6, 1usize..6)
            .prop_flat_map(|(q, r, c)| {
                (
                    Just(q),
                    proptest::collection::vec(proptest::collection::vec(0..q as u8, c), r),
                    Just((0..r).collect::<Vec<_>>()).prop_shuffle(),
                )
            })
    }

    proptest! {
        #[test]
        fn rank_ignores_row_order((q, rows, perm) in arb_matrix()) {
            let f = Field::get(q).unwrap();
            let cols = rows[0].len();
            let a = GfMatrix::from_rows(f, cols, rows.clone()).unwrap();
            let b = GfMatrix::from_rows(f, cols, perm.iter().map(|&i| rows[i].clone()).collect()).unwrap();
            prop_assert_eq!(a.rank(), b.rank());
            prop_assert!(a.rank() <= rows.len().min(cols));
        }

        #[test]
        fn every_row_is_spanned((q, rows, _) in arb_matrix()) {
            let f = Field::get(q).unwrap();
            let a = GfMatrix::from_rows(f, rows[0].len(), rows.clone()).unwrap();
            for r in &rows {
                prop_assert!(a.spans(r).unwrap());
            }
        }
    }
}
