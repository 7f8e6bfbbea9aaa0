use crate::error::{Error, Result};
use crate::rational::Rational;
use num_traits::Zero;

/// Row-major sparse matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    cols: usize,
    rows: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            cols,
            rows: vec![Vec::new(); rows],
        }
    }

    pub fn from_dense(dense: &[Vec<Rational>], cols: usize) -> Result<Self> {
        let mut m = SparseMatrix::zeros(dense.len(), cols);
        for (i, row) in dense.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.rows[i].push((j, v.clone()));
                }
            }
        }
        Ok(m)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![Rational::zero(); self.cols];
                for (j, v) in row {
                    dense[*j] = v.clone();
                }
                dense
            })
            .collect()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.rows[i]
            .iter()
            .find(|(c, _)| *c == j)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Sets entry `(i, j)`; zero removes it.
    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        assert!(j < self.cols, "column {j} out of range");
        let row = &mut self.rows[i];
        match row.iter().position(|(c, _)| *c == j) {
            Some(p) if value.is_zero() => {
                row.remove(p);
            }
            Some(p) => row[p].1 = value,
            None if value.is_zero() => {}
            None => {
                let at = row.partition_point(|(c, _)| *c < j);
                row.insert(at, (j, value));
            }
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, delta: Rational) {
        let v = self.get(i, j) + delta;
        self.set(i, j, v);
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Rational::zero(), |acc, (j, v)| acc + v * &x[*j])
            })
            .collect()
    }

    /// Appends `extra` zero rows and columns.
    pub fn grow(&mut self, extra_rows: usize, extra_cols: usize) {
        self.cols += extra_cols;
        self.rows
            .extend(std::iter::repeat_n(Vec::new(), extra_rows));
    }
}
