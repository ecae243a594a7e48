//! Smith normal form over the integers.
//!
//! Elimination first runs in `i128` with checked arithmetic; if any step
//! overflows the whole computation is redone with `BigInt`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Truncated quotient.
    fn quot(&self, o: &Self) -> Self;
    fn rem_is_zero(&self, o: &Self) -> bool;
    fn abs_lt(&self, o: &Self) -> bool;
    fn is_negative(&self) -> bool;
    fn to_big(&self) -> BigInt;
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn quot(&self, o: &Self) -> Self {
        self / o
    }
    fn rem_is_zero(&self, o: &Self) -> bool {
        self % o == 0
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.unsigned_abs() < o.unsigned_abs()
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn quot(&self, o: &Self) -> Self {
        self / o
    }
    fn rem_is_zero(&self, o: &Self) -> bool {
        Zero::is_zero(&(self % o))
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.abs() < o.abs()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Overflow;

type Mat<T> = Vec<Vec<T>>;

fn identity<T: Ring>(n: usize) -> Mat<T> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

struct Work<T> {
    a: Mat<T>,
    m: usize,
    n: usize,
    // U a V = D, with inverses tracked alongside.
    u: Option<(Mat<T>, Mat<T>)>,
    v: Option<(Mat<T>, Mat<T>)>,
}

impl<T: Ring> Work<T> {
    /// row_i += c * row_j
    fn row_add(&mut self, i: usize, j: usize, c: &T) -> Result<(), Overflow> {
        for k in 0..self.n {
            let t = self.a[j][k].mul(c).ok_or(Overflow)?;
            self.a[i][k] = self.a[i][k].add(&t).ok_or(Overflow)?;
        }
        if let Some((u, ui)) = &mut self.u {
            for k in 0..self.m {
                let t = u[j][k].mul(c).ok_or(Overflow)?;
                u[i][k] = u[i][k].add(&t).ok_or(Overflow)?;
                let t = ui[k][i].mul(c).ok_or(Overflow)?.neg().ok_or(Overflow)?;
                ui[k][j] = ui[k][j].add(&t).ok_or(Overflow)?;
            }
        }
        Ok(())
    }

    /// col_i += c * col_j
    fn col_add(&mut self, i: usize, j: usize, c: &T) -> Result<(), Overflow> {
        for k in 0..self.m {
            let t = self.a[k][j].mul(c).ok_or(Overflow)?;
            self.a[k][i] = self.a[k][i].add(&t).ok_or(Overflow)?;
        }
        if let Some((v, vi)) = &mut self.v {
            for k in 0..self.n {
                let t = v[k][j].mul(c).ok_or(Overflow)?;
                v[k][i] = v[k][i].add(&t).ok_or(Overflow)?;
                let t = vi[i][k].mul(c).ok_or(Overflow)?.neg().ok_or(Overflow)?;
                vi[j][k] = vi[j][k].add(&t).ok_or(Overflow)?;
            }
        }
        Ok(())
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some((u, ui)) = &mut self.u {
            u.swap(i, j);
            for row in ui.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some((v, vi)) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
            vi.swap(i, j);
        }
    }

    fn row_neg(&mut self, i: usize) -> Result<(), Overflow> {
        for k in 0..self.n {
            self.a[i][k] = self.a[i][k].neg().ok_or(Overflow)?;
        }
        if let Some((u, ui)) = &mut self.u {
            for k in 0..self.m {
                u[i][k] = u[i][k].neg().ok_or(Overflow)?;
                ui[k][i] = ui[k][i].neg().ok_or(Overflow)?;
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<(), Overflow> {
        let (m, n) = (self.m, self.n);
        for t in 0..m.min(n) {
            // Smallest nonzero entry of the remaining block as pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !self.a[i][j].is_zero() && best.is_none_or(|(bi, bj)| self.a[i][j].abs_lt(&self.a[bi][bj])) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..m {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].quot(&self.a[t][t]).neg().ok_or(Overflow)?;
                    self.row_add(i, t, &q)?;
                    if !self.a[i][t].is_zero() {
                        self.row_swap(t, i);
                        dirty = true;
                    }
                }
                for j in t + 1..n {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].quot(&self.a[t][t]).neg().ok_or(Overflow)?;
                    self.col_add(j, t, &q)?;
                    if !self.a[t][j].is_zero() {
                        self.col_swap(t, j);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                // Divisibility of the rest by the pivot.
                let mut fix = None;
                'scan: for i in t + 1..m {
                    for j in t + 1..n {
                        if !self.a[i][j].rem_is_zero(&self.a[t][t]) {
                            fix = Some(i);
                            break 'scan;
                        }
                    }
                }
                match fix {
                    Some(i) => self.row_add(t, i, &T::one())?,
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.row_neg(t)?;
            }
        }
        Ok(())
    }
}

/// Smith normal form `u * a * v = d` of an integer matrix.
#[derive(Clone, Debug)]
pub struct Snf {
    pub rows: usize,
    pub cols: usize,
    /// Diagonal of `d`, length min(rows, cols); nonzero entries first, each
    /// dividing the next.
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub u: Option<Mat<BigInt>>,
    pub u_inv: Option<Mat<BigInt>>,
    pub v: Option<Mat<BigInt>>,
    pub v_inv: Option<Mat<BigInt>>,
    /// True when the i128 pass overflowed and arbitrary precision was used.
    pub escalated: bool,
}

impl Snf {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diag.iter().filter(|d| **d > <BigInt as One>::one()).cloned().collect()
    }
}

fn attempt<T: Ring>(a: Mat<T>, m: usize, n: usize, transforms: bool) -> Result<Work<T>, Overflow> {
    let mut w = Work {
        a,
        m,
        n,
        u: transforms.then(|| (identity(m), identity(m))),
        v: transforms.then(|| (identity(n), identity(n))),
    };
    w.run()?;
    Ok(w)
}

fn finish<T: Ring>(w: Work<T>, escalated: bool) -> Snf {
    let big = |m: &Mat<T>| m.iter().map(|r| r.iter().map(|x| x.to_big()).collect()).collect();
    let diag: Vec<BigInt> = (0..w.m.min(w.n)).map(|i| w.a[i][i].to_big()).collect();
    let rank = diag.iter().filter(|d| !Zero::is_zero(*d)).count();
    Snf {
        rows: w.m,
        cols: w.n,
        rank,
        u: w.u.as_ref().map(|(u, _)| big(u)),
        u_inv: w.u.as_ref().map(|(_, ui)| big(ui)),
        v: w.v.as_ref().map(|(v, _)| big(v)),
        v_inv: w.v.as_ref().map(|(_, vi)| big(vi)),
        diag,
        escalated,
    }
}

/// Smith normal form of a dense `rows x cols` matrix.
pub fn smith_normal_form(a: &[Vec<i64>], cols: usize, transforms: bool) -> Snf {
    let m = a.len();
    let small: Mat<i128> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    match attempt(small, m, cols, transforms) {
        Ok(w) => finish(w, false),
        Err(Overflow) => {
            let big: Mat<BigInt> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            smith_big(big, cols, transforms, true)
        }
    }
}

/// Smith normal form of a matrix with arbitrary-precision entries.
pub fn smith_normal_form_big(a: &[Vec<BigInt>], cols: usize, transforms: bool) -> Snf {
    let fits = a.iter().flatten().all(|x| x.to_i64().is_some());
    if fits {
        let small: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        return smith_normal_form(&small, cols, transforms);
    }
    smith_big(a.to_vec(), cols, transforms, true)
}

fn smith_big(a: Mat<BigInt>, cols: usize, transforms: bool, escalated: bool) -> Snf {
    let m = a.len();
    match attempt(a, m, cols, transforms) {
        Ok(w) => finish(w, escalated),
        Err(Overflow) => unreachable!("BigInt arithmetic does not overflow"),
    }
}
