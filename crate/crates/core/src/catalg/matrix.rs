use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Square integer matrix, row-major. Column `j` is the image of basis vector `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(n: usize) -> Self {
        IntegerMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input("matrix must be square".into()));
        }
        Ok(IntegerMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|r| r.to_vec())
            .collect()
    }

    /// Product with overflow detection.
    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.n != other.n {
            return Err(Error::Input("matrix size mismatch".into()));
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    acc += self.get(i, k) as i128 * other.get(k, j) as i128;
                }
                let v = i64::try_from(acc)
                    .map_err(|_| Error::Input("integer overflow in matrix product".into()))?;
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    /// Entry-wise absolute value.
    pub fn unsigned(&self) -> IntegerMatrix {
        IntegerMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v.abs()).collect(),
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i128 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }

    /// Exact inverse of a matrix with determinant ±1.
    pub fn inverse(&self) -> Result<IntegerMatrix> {
        let d = self.det();
        if d.abs() != 1 {
            return Err(Error::Input(format!(
                "matrix is not unimodular (det = {d})"
            )));
        }
        let n = self.n;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            Rational::from_integer(self.get(i, j) as i128)
                        } else {
                            Rational::from_integer((j - n == i) as i128)
                        }
                    })
                    .collect()
            })
            .collect();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| a[r][c] != Rational::from_integer(0))
                .expect("unimodular matrix has a pivot");
            a.swap(c, p);
            let inv = Rational::from_integer(1) / a[c][c];
            for v in a[c].iter_mut() {
                *v *= inv;
            }
            for r in 0..n {
                if r != c && a[r][c] != Rational::from_integer(0) {
                    let f = a[r][c];
                    let pivot = a[c].clone();
                    for (x, y) in a[r].iter_mut().zip(pivot) {
                        *x -= f * y;
                    }
                }
            }
        }
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = a[i][n + j];
                if !v.is_integer() {
                    return Err(Error::Input("inverse is not integral".into()));
                }
                out.set(i, j, *v.numer() as i64);
            }
        }
        Ok(out)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v as f64).collect())
            .collect()
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl Serialize for IntegerMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = IntegerMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.det(), 1);
        let inv = m.inverse().unwrap();
        assert_eq!(
            inv,
            IntegerMatrix::from_rows(&[vec![1, -1], vec![-1, 2]]).unwrap()
        );
        assert_eq!(m.mul(&inv).unwrap(), IntegerMatrix::identity(2));
        let s = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(s.inverse().is_err());
        let p = IntegerMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap();
        assert_eq!(p.det(), 1);
        assert_eq!(
            IntegerMatrix::from_rows(&[vec![0, 1], vec![1, 0]])
                .unwrap()
                .det(),
            -1
        );
    }

    #[test]
    fn overflow_detected() {
        let big =
            IntegerMatrix::from_rows(&[vec![i64::MAX / 2, i64::MAX / 2], vec![1, 1]]).unwrap();
        assert!(big.mul(&big).is_err());
    }
}
