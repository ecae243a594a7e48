//! Small dense helpers on column lists.

use nalgebra::{DMatrix, DVector};

use crate::cube::Sign;

pub(crate) fn matrix(cols: &[Vec<f64>], rows: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

/// Determinant of the square matrix with the given columns.
pub fn det(cols: &[Vec<f64>]) -> f64 {
    match cols.len() {
        0 => 1.0,
        1 => cols[0][0],
        2 => cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1],
        3 => {
            let (a, b, c) = (&cols[0], &cols[1], &cols[2]);
            a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1]) + c[0] * (a[1] * b[2] - a[2] * b[1])
        }
        n => matrix(cols, n).determinant(),
    }
}

/// Smallest singular value after scaling every column to unit length.
/// Zero when there are fewer columns than rows.
pub fn sigma_min(cols: &[Vec<f64>], rows: usize) -> f64 {
    if cols.len() < rows {
        return 0.0;
    }
    if rows == 0 {
        return 1.0;
    }
    let normed: Vec<Vec<f64>> = cols
        .iter()
        .map(|c| {
            let n = norm(c);
            if n == 0.0 {
                c.clone()
            } else {
                c.iter().map(|x| x / n).collect()
            }
        })
        .collect();
    let m = matrix(&normed, rows);
    let sv = m.singular_values();
    sv.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Solve the square system with the given columns.
pub fn solve(cols: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    if cols.len() != n {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    let m = matrix(cols, n);
    let b = DVector::from_column_slice(rhs);
    m.lu().solve(&b).map(|x| x.iter().cloned().collect())
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn unit(d: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; d];
    e[i] = 1.0;
    e
}

/// Rows `rows` of every column, as a square minor.
pub fn minor(cols: &[Vec<f64>], rows: &[usize]) -> Vec<Vec<f64>> {
    cols.iter().map(|c| rows.iter().map(|&r| c[r]).collect()).collect()
}

pub fn sign_of(x: f64) -> Option<Sign> {
    Sign::of_f64(x)
}
