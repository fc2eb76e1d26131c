//! Dense matrices over any [`Field`] and Gauss-Jordan elimination.

use crate::field::{Field, Ring};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut entry: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(entry(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors, each of length `cols`. Panics on ragged input.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: E) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [E] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<T: Clone>(&self, f: impl FnMut(&E) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix::from_rows(self.cols, idx.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
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
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn zeros<F: Ring<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, f.zero())
    }

    pub fn identity<F: Ring<Elem = E>>(f: &F, n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
    }

    pub fn is_zero<F: Ring<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|e| f.is_zero(e))
    }

    pub fn add<F: Ring<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub<F: Ring<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale<F: Ring<Elem = E>>(&self, c: &E, f: &F) -> Self {
        self.map(|a| f.mul(a, c))
    }

    pub fn mul<F: Ring<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        assert_eq!(self.cols, other.rows, "mul shape mismatch");
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let v = f.add(out.get(i, j), &f.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Ring<Elem = E>>(&self, v: &[E], f: &F) -> Vec<E> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(f.zero(), |acc, (a, b)| {
                    if f.is_zero(a) || f.is_zero(b) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(a, b))
                    }
                })
            })
            .collect()
    }

    pub fn pow<F: Ring<Elem = E>>(&self, e: usize, f: &F) -> Self {
        assert!(self.is_square(), "pow of non-square matrix");
        let mut acc = Matrix::identity(f, self.rows);
        for _ in 0..e {
            acc = acc.mul(self, f);
        }
        acc
    }
}

/// Reduced row-echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub matrix: Matrix<E>,
    pub pivots: Vec<usize>,
}

impl<E: Clone> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows.
    pub fn basis(&self) -> Matrix<E> {
        let idx: Vec<usize> = (0..self.pivots.len()).collect();
        self.matrix.select_rows(&idx)
    }
}

pub fn rref<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Echelon<F::Elem> {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let mut best: Option<(usize, usize)> = None;
        for i in r..a.rows() {
            let e = a.get(i, c);
            if !f.is_zero(e) {
                let w = f.weight(e);
                if best.is_none_or(|(_, bw)| w < bw) {
                    best = Some((i, w));
                    if w == 0 {
                        break;
                    }
                }
            }
        }
        let Some((pr, _)) = best else { continue };
        a.swap_rows(r, pr);
        let inv = f.inv(a.get(r, c)).unwrap();
        for j in c..a.cols() {
            let v = f.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        let pivot_row: Vec<F::Elem> = a.row(r).to_vec();
        for i in 0..a.rows() {
            if i == r {
                continue;
            }
            let factor = a.get(i, c).clone();
            if f.is_zero(&factor) {
                continue;
            }
            let row = a.row_mut(i);
            for j in c..row.len() {
                if !f.is_zero(&pivot_row[j]) {
                    row[j] = f.sub(&row[j], &f.mul(&factor, &pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { matrix: a, pivots }
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    rref(f, m).rank()
}

/// Rows form a basis of `{x : m x = 0}`, one per free column.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let ech = rref(f, m);
    kernel_from_echelon(f, &ech, m.cols())
}

pub fn kernel_from_echelon<F: Field>(f: &F, ech: &Echelon<F::Elem>, cols: usize) -> Matrix<F::Elem> {
    let mut is_pivot = vec![false; cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|&j| !is_pivot[j]) {
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (k, &p) in ech.pivots.iter().enumerate() {
            v[p] = f.neg(ech.matrix.get(k, free));
        }
        out.push(v);
    }
    Matrix::from_rows(cols, out)
}

/// Rows form a basis of `{y : y m = 0}`.
pub fn left_kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    kernel(f, &m.transpose())
}

/// Echelon basis (as rows) of the column space.
pub fn column_space<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    rref(f, &m.transpose()).basis()
}

/// Echelon basis of the row space.
pub fn row_space<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    rref(f, m).basis()
}

/// Some `x` with `m x = b`.
pub fn solve<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(m.rows(), b.len(), "solve shape mismatch");
    let bcol = Matrix::from_fn(b.len(), 1, |i, _| b[i].clone());
    let ech = rref(f, &m.hstack(&bcol));
    if ech.pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![f.zero(); m.cols()];
    for (k, &p) in ech.pivots.iter().enumerate() {
        x[p] = ech.matrix.get(k, m.cols()).clone();
    }
    Some(x)
}

pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let ech = rref(f, &m.hstack(&Matrix::identity(f, n)));
    if ech.pivots.len() < n || ech.pivots[n - 1] != n - 1 {
        return None;
    }
    let idx: Vec<usize> = (n..2 * n).collect();
    Some(ech.matrix.select_cols(&idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldCtx, FieldScalar};
    use crate::poly::Poly;
    use crate::ratfunc::RatFuncField;

    fn m3(rows: &[&[i64]]) -> (FieldCtx, Matrix<FieldScalar>) {
        let f = FieldCtx::prime(3).unwrap();
        let cols = rows[0].len();
        let m = Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect());
        (f, m)
    }

    #[test]
    fn trivial_ranks() {
        let f = FieldCtx::prime(5).unwrap();
        assert_eq!(rank(&f, &Matrix::zeros(&f, 4, 4)), 0);
        assert_eq!(rank(&f, &Matrix::identity(&f, 4)), 4);
    }

    #[test]
    fn rank_over_rational_functions() {
        let f3 = FieldCtx::prime(3).unwrap();
        let k = RatFuncField::new(f3.clone());
        let t = k.t();
        let tt = k.mul(&t, &t);
        let m = Matrix::from_rows(2, vec![vec![k.one(), t.clone()], vec![t, tt]]);
        assert_eq!(rank(&k, &m), 1);
        let ker = kernel(&k, &m);
        assert_eq!(ker.rows(), 1);
        let v = ker.row(0).to_vec();
        assert!(m.mul_vec(&v, &k).iter().all(|e| k.is_zero(e)));
        assert!(k.is_zero(&k.sub(&v[0], &k.poly(Poly::from_ints(&f3, &[0, -1])))));
    }

    #[test]
    fn kernel_and_solve() {
        let (f, m) = m3(&[&[1, 2, 0, 1], &[2, 1, 0, 2], &[0, 0, 1, 1]]);
        let ker = kernel(&f, &m);
        assert_eq!(ker.rows() + rank(&f, &m), 4);
        for i in 0..ker.rows() {
            assert!(m.mul_vec(ker.row(i), &f).iter().all(|e| e.is_zero()));
        }
        let b = vec![f.from_int(1), f.from_int(2), f.from_int(0)];
        let x = solve(&f, &m, &b).unwrap();
        assert_eq!(m.mul_vec(&x, &f), b);
        assert!(solve(&f, &m, &[f.from_int(1), f.from_int(0), f.from_int(0)]).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let (f, m) = m3(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 2]]);
        match inverse(&f, &m) {
            Some(inv) => assert_eq!(m.mul(&inv, &f), Matrix::identity(&f, 3)),
            None => assert!(rank(&f, &m) < 3),
        }
    }
}
